import json

import numpy as np
import numpy.testing as npt
import pytest

from martonkit.channel import (BUILTIN_CHANNELS, BroadcastChannel,
                               compose_degraded, from_dict, is_irreducible,
                               load_channel, smooth, validate)
from martonkit.errors import InvalidChannelError


def bsc(eps):
    return np.array([[1 - eps, eps], [eps, 1 - eps]])


def test_validate_accepts_stochastic_rows():
    ch = BroadcastChannel(bsc(0.3), bsc(0.1))
    validate(ch)  # should not raise
    assert ch.x_size == 2 and ch.y_size == 2 and ch.z_size == 2


def test_validate_rejects_bad_rows():
    with pytest.raises(InvalidChannelError):
        BroadcastChannel(np.array([[0.5, 0.6], [0.5, 0.5]]), bsc(0.1))
    with pytest.raises(InvalidChannelError):
        BroadcastChannel(bsc(0.1), np.array([[1.1, -0.1], [0.5, 0.5]]))


def test_validate_rejects_mismatched_inputs():
    with pytest.raises(InvalidChannelError):
        BroadcastChannel(bsc(0.2), np.array([[0.2, 0.8]]))


def test_builtin_claim1():
    ch = load_channel("claim1")
    assert "claim1" in BUILTIN_CHANNELS
    assert ch.q_y.shape == (2, 2) and ch.q_z.shape == (2, 2)
    npt.assert_allclose(ch.q_y.sum(axis=1), 1.0)
    npt.assert_allclose(ch.q_z.sum(axis=1), 1.0)
    assert is_irreducible(ch)


def test_load_channel_from_file(tmp_path):
    doc = {"x_size": 2, "y_size": 2, "z_size": 2,
           "q_y": bsc(0.25).tolist(), "q_z": bsc(0.4).tolist()}
    path = tmp_path / "ch.json"
    path.write_text(json.dumps(doc))
    ch = load_channel(str(path))
    npt.assert_allclose(ch.q_y, bsc(0.25))
    npt.assert_allclose(ch.q_z, bsc(0.4))


def test_from_dict_joint_form():
    # a joint q_yz marginalizes to the two private kernels
    cube = np.array([[[0.4, 0.1], [0.3, 0.2]],
                     [[0.05, 0.15], [0.35, 0.45]]])
    doc = {"x_size": 2, "y_size": 2, "z_size": 2,
           "q_yz": cube.reshape(2, 4).tolist()}
    ch = from_dict(doc)
    npt.assert_allclose(ch.q_y, cube.sum(axis=2))
    npt.assert_allclose(ch.q_z, cube.sum(axis=1))


def test_load_channel_unknown_name():
    with pytest.raises(InvalidChannelError):
        load_channel("no-such-channel")


def test_from_dict_rejects_garbage():
    with pytest.raises(InvalidChannelError):
        from_dict({"q_y": "bogus"})  # no alphabet sizes
    with pytest.raises(InvalidChannelError):
        from_dict({"x_size": 2, "y_size": 2, "z_size": 2,
                   "q_y": bsc(0.2).tolist()})  # q_z missing


def test_compose_degraded_closed_form():
    qy = np.array([[0.9, 0.1], [0.2, 0.8]])
    deg = np.array([[0.8, 0.2], [0.3, 0.7]])
    ch = compose_degraded(qy, deg)
    npt.assert_allclose(ch.q_y, qy)
    npt.assert_allclose(ch.q_z, [[0.75, 0.25], [0.40, 0.60]], atol=1e-15)


def test_compose_degraded_two_symmetric():
    # cascading two symmetric binary channels adds crossovers: a+b-2ab
    ch = compose_degraded(bsc(0.3), bsc(0.2))
    npt.assert_allclose(ch.q_z, bsc(0.3 + 0.2 - 2 * 0.3 * 0.2), atol=1e-15)


def test_smooth_mixes_toward_uniform():
    ch = BroadcastChannel(np.eye(2), bsc(0.2))
    sm = smooth(ch, 0.1)
    npt.assert_allclose(sm.q_y, 0.9 * np.eye(2) + 0.05, atol=1e-15)
    npt.assert_allclose(sm.q_y.sum(axis=1), 1.0)
    assert sm.q_y.min() > 0 and sm.q_z.min() > 0
    assert sm.strictly_positive()


def test_smooth_zero_delta_is_identity():
    ch = BroadcastChannel(bsc(0.3), bsc(0.1))
    npt.assert_allclose(smooth(ch, 0.0).q_y, ch.q_y)


def test_irreducibility():
    dup = np.array([[0.6, 0.4], [0.6, 0.4]])
    assert not is_irreducible(BroadcastChannel(dup, dup))
    # distinguishable at one receiver is enough
    assert is_irreducible(BroadcastChannel(dup, bsc(0.1)))
