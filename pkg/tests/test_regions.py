import numpy as np
import numpy.testing as npt
import pytest

from conftest import random_positive_channel
from martonkit.channel import BroadcastChannel, load_channel
from martonkit.optimize import AscentConfig
from martonkit.probkit import JointTable, grouped_mutual_information
from martonkit.regions import (Direction, PolyhedralSupport, RateTriple,
                               TwoLetterBounds, TwoLetterInput,
                               degraded_support_d1, degraded_support_d2,
                               directional_optimality_check,
                               lift_markov_kernel, marton_caps,
                               marton_support, two_letter_bounds,
                               two_letter_reduction_check)

H_03 = 0.8812908992306927

MARTON_ROWS = np.array([[1, 1, 0], [1, 0, 1], [1, 1, 1], [1, 1, 1],
                        [2, 1, 1]], dtype=float)


def test_rate_triple_validation():
    r = RateTriple(0.1, 0.2, 0.3)
    npt.assert_array_equal(r.as_array(), [0.1, 0.2, 0.3])
    assert RateTriple(-1e-12, 0.0, 0.0).r0 == 0.0  # tiny noise clipped
    with pytest.raises(ValueError):
        RateTriple(-0.5, 0.1, 0.1)


def test_direction_normalization():
    d = Direction(2.0, 1.0, 1.0)
    npt.assert_allclose(d.as_array(), [1.0, 0.5, 0.5])
    with pytest.raises(ValueError):
        Direction(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        Direction(1.0, -0.5, 0.0)


def test_polyhedral_support_closed_forms():
    lp = PolyhedralSupport(MARTON_ROWS)
    caps = np.array([1.0, 1.0, 2.0, 2.0, 3.0])
    v, vertex = lp.support(caps, np.array([1.0, 0.0, 0.0]))
    npt.assert_allclose(v, 1.0, atol=1e-12)
    v, _ = lp.support(caps, np.array([0.0, 1.0, 1.0]))
    npt.assert_allclose(v, 2.0, atol=1e-12)
    # binding constraints hold at the returned vertex
    assert (MARTON_ROWS @ vertex <= caps + 1e-9).all()


def test_polyhedral_support_empty_region():
    lp = PolyhedralSupport(MARTON_ROWS)
    caps = np.array([-0.5, 1.0, 2.0, 2.0, 3.0])
    assert lp.support(caps, np.array([1.0, 0.0, 0.0])) is None


def test_polyhedral_support_against_lp_oracle():
    linprog = pytest.importorskip("scipy.optimize").linprog
    lp = PolyhedralSupport(MARTON_ROWS)
    rng = np.random.default_rng(31)
    for _ in range(40):
        caps = rng.random(5) * 2
        w = rng.random(3)
        ours = lp.support(caps, w)
        ref = linprog(-w, A_ub=MARTON_ROWS, b_ub=caps, bounds=(0, None),
                      method="highs")
        assert ours is not None and ref.status == 0
        npt.assert_allclose(ours[0], -ref.fun, atol=1e-9)


def test_marton_caps_degenerate_joint():
    # constant auxiliaries: every information term vanishes
    ch = load_channel("claim1")
    p = np.zeros((2, 2, 2, 2))
    p[0, 0, 0, 0] = 0.4
    p[0, 0, 0, 1] = 0.6
    npt.assert_allclose(marton_caps(p, ch), 0.0, atol=1e-12)


def test_marton_caps_identity_coupling():
    # U = V = X uniform, W constant: caps reduce to two-letter MIs
    ch = load_channel("claim1")
    p = np.zeros((2, 2, 1, 2))
    p[0, 0, 0, 0] = p[1, 1, 0, 1] = 0.5
    caps = marton_caps(p, ch)
    joint_xy = 0.5 * ch.q_y
    joint_xz = 0.5 * ch.q_z
    i_xy = grouped_mutual_information(joint_xy, (0,), (1,))
    i_xz = grouped_mutual_information(joint_xz, (0,), (1,))
    npt.assert_allclose(caps[0], i_xy, atol=1e-12)   # I(UW;Y)
    npt.assert_allclose(caps[1], i_xz, atol=1e-12)   # I(VW;Z)
    # I(U;V) = H(X) here, so the sum caps collapse accordingly
    npt.assert_allclose(caps[4], i_xy + i_xz - 1.0, atol=1e-12)


def test_marton_support_noiseless():
    ch = BroadcastChannel(np.eye(2), np.eye(2))
    res = marton_support(ch, Direction(1.0, 0.0, 0.0))
    npt.assert_allclose(res.value, 1.0, atol=1e-6)


def test_marton_support_scale_equivariance():
    ch = load_channel("claim1")
    cfg = AscentConfig(starts=6, max_iters=150, ftol=1e-9, seed=4)
    a = marton_support(ch, (1.0, 0.5, 0.5), config=cfg)
    b = marton_support(ch, (2.0, 1.0, 1.0), config=cfg)
    npt.assert_allclose(b.value, 2.0 * a.value, atol=1e-6)


def test_degraded_supports_deaf_receiver():
    """Z sees nothing: its private rate and cloud rate are both zero."""
    q_y = np.array([[0.7, 0.3], [0.3, 0.7]])
    ch = BroadcastChannel(q_y, np.full((2, 2), 0.5))
    v, _ = degraded_support_d1(ch, 0.0, 1.0)   # max R2 = I(X;Z|W) = 0
    npt.assert_allclose(v, 0.0, atol=1e-8)
    v, _ = degraded_support_d2(ch, 0.0, 1.0)   # max R1 = I(X;Y) via Y
    npt.assert_allclose(v, 1.0 - H_03, atol=1e-5)
    with pytest.raises(ValueError):
        degraded_support_d1(ch, -1.0, 0.0)


def test_directional_check_claim1():
    ch = load_channel("claim1")
    for d in [(1.0, 0.0, 0.0), (1.0, 1.0, 0.0)]:
        rep = directional_optimality_check(ch, d)
        assert rep["passed"], rep
        assert rep["gap"] <= rep["tol"]
        assert rep["marton"] >= rep["best_degraded"] - rep["tol"]


def test_directional_check_rejects_bad_direction():
    ch = load_channel("claim1")
    with pytest.raises(ValueError):
        directional_optimality_check(ch, (1.0, 1.0, 0.5))


def test_two_letter_input_validation():
    rng = np.random.default_rng(32)
    r = JointTable(rng.dirichlet(np.ones(8)).reshape(2, 2, 2))
    bad_rows = np.full((2, 2, 2, 2, 2, 2, 2), 0.4)
    with pytest.raises(ValueError):
        TwoLetterInput(r, bad_rows)
    with pytest.raises(ValueError):
        TwoLetterInput(JointTable(np.array([0.5, 0.5])), bad_rows)


def test_two_letter_bounds_validation():
    with pytest.raises(ValueError):
        TwoLetterBounds(-0.1, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        TwoLetterBounds(0.1, np.inf, 0.0, 0.0, 0.0)
    b = TwoLetterBounds(0.1, 0.2, -0.05, 0.0, 0.1)  # sum caps may go negative
    assert b.as_array().shape == (5,)


def test_lift_markov_kernel_shape():
    rng = np.random.default_rng(33)
    rows = rng.dirichlet(np.ones(2), size=8).reshape(2, 2, 2, 2)
    lifted = lift_markov_kernel(rows, 2, 2, 2)
    assert lifted.shape == (2, 2, 2, 2, 2, 2, 2)
    # no dependence on the first copy
    npt.assert_array_equal(lifted[0, 0, 0], lifted[1, 1, 1])


def test_markov_reduction_matches_single_letter():
    rng = np.random.default_rng(34)
    for ch_seed in (0, 1):
        ch = random_positive_channel(np.random.default_rng(100 + ch_seed))
        r = JointTable(rng.dirichlet(np.ones(8)).reshape(2, 2, 2))
        rows = rng.dirichlet(np.ones(2), size=8).reshape(2, 2, 2, 2)
        rep = two_letter_reduction_check(r, rows, ch, tol=1e-9)
        assert rep["passed"], rep
        assert rep["max_abs_diff"] <= 1e-9


def _oracle_two_letter(r, kern, ch):
    """Brute-force reference: materialize the full 12-variable joint.

    Axes: (u1, v1, w1, u2, v2, w2, x1, y1, z1, x2, y2, z2).  Every bound
    is then two or three plain mutual informations over flattened axis
    groups, with conditionals expanded as I(A;B|C) = I(A;BC) - I(A;C).
    """
    from martonkit.probkit import mutual_information

    nu, nv, nw = r.shape
    nx = kern.shape[-1]
    ny, nz = ch.q_y.shape[1], ch.q_z.shape[1]
    rbar = np.zeros(r.shape + (nx,))
    for t1 in np.ndindex(r.shape):
        for t2 in np.ndindex(r.shape):
            rbar[t2] += r[t1] * kern[t1 + t2]

    full = np.zeros((nu, nv, nw, nu, nv, nw, nx, ny, nz, nx, ny, nz))
    for t1 in np.ndindex(r.shape):
        for t2 in np.ndindex(r.shape):
            base = r[t1] * r[t2]
            for x1 in range(nx):
                p1 = rbar[t1][x1]
                for x2 in range(nx):
                    p2 = kern[t1 + t2][x2]
                    block = (base * p1 * p2) * (
                        ch.q_y[x1][:, None, None, None]
                        * ch.q_z[x1][None, :, None, None]
                        * ch.q_y[x2][None, None, :, None]
                        * ch.q_z[x2][None, None, None, :])
                    full[t1 + t2 + (x1,)][:, :, x2] += block
    assert abs(full.sum() - 1.0) < 1e-12

    def mi(left, right):
        keep = tuple(left) + tuple(right)
        drop = tuple(a for a in range(12) if a not in keep)
        m = full.sum(axis=drop)
        order = [a for a in keep]
        perm = sorted(range(len(order)), key=lambda i: order[i])
        inv = np.argsort(perm)
        m = np.transpose(m, inv)
        nl = int(np.prod([m.shape[i] for i in range(len(left))]))
        return mutual_information(m.reshape(nl, -1))

    def cmi(left, right, cond):
        return mi(left, tuple(right) + tuple(cond)) - mi(left, cond)

    b01 = mi((3, 5), (7, 10, 0, 2))
    b02 = mi((4, 5), (8, 11, 1, 2))
    i_uv_w = cmi((3,), (4,), (5,))
    b012a = cmi((4,), (8, 11, 1, 2), (5,)) + b01 - i_uv_w
    b012b = cmi((3,), (7, 10, 0, 2), (5,)) + b02 - i_uv_w
    return np.array([b01, b02, b012a, b012b, b01 + b02 - i_uv_w])


def test_two_letter_against_brute_force():
    """Cross-letter kernel with real two-copy dependence, tiny alphabets."""
    rng = np.random.default_rng(35)
    ch = random_positive_channel(np.random.default_rng(200))
    r = JointTable(rng.dirichlet(np.ones(8)).reshape(2, 2, 2))
    kern = rng.dirichlet(np.ones(2), size=64).reshape(2, 2, 2, 2, 2, 2, 2)
    got = two_letter_bounds(TwoLetterInput(r, kern), ch).as_array()
    want = _oracle_two_letter(r.probs, kern, ch)
    npt.assert_allclose(got, want, atol=1e-9)


def test_two_letter_resource_cap():
    from martonkit.errors import ResourceLimitError
    rng = np.random.default_rng(36)
    n = 6
    ch = random_positive_channel(np.random.default_rng(300), nx=n, ny=20)
    r = JointTable(rng.dirichlet(np.ones(n ** 3)).reshape(n, n, n))
    kern = np.broadcast_to(
        rng.dirichlet(np.ones(n)),
        (n, n, n, n, n, n, n)).copy()
    with pytest.raises(ResourceLimitError):
        two_letter_bounds(TwoLetterInput(r, kern), ch)
