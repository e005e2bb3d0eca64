import numpy as np
import numpy.testing as npt
import pytest

from martonkit.channel import BroadcastChannel
from martonkit.errors import ResourceLimitError
from martonkit.mappings import (MappingTable, admissible_mappings,
                                check_stationarity, check_support_positivity,
                                enumerate_mappings, is_profile_extremal,
                                profile, relabeling_classes)
from martonkit.probkit import JointTable

XOR = MappingTable(np.array([[0, 1], [1, 0]]), 2)
ANTI_XOR = MappingTable(np.array([[1, 0], [0, 1]]), 2)
CONST_0 = MappingTable(np.zeros((2, 2), dtype=int), 2)
CONST_1 = MappingTable(np.ones((2, 2), dtype=int), 2)
AND_GATE = MappingTable(np.array([[0, 0], [0, 1]]), 2)


@pytest.mark.parametrize("shape,total", [
    ((2, 2, 2), 16),
    ((2, 2, 3), 81),
    ((3, 2, 2), 64),
])
def test_enumeration_counts(shape, total):
    tables = enumerate_mappings(*shape)
    assert len(tables) == total
    keys = {t.key() for t in tables}
    assert len(keys) == total  # all distinct


def test_enumeration_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_mappings(4, 4, 4, cap=1000)


# Exhaustive-oracle counts, checked once against an independent hull
# solver and frozen here.
@pytest.mark.parametrize("shape,count", [
    ((2, 2, 2), 14),
    ((2, 2, 3), 75),
    ((2, 3, 2), 46),
    ((3, 3, 2), 230),
])
def test_admissible_counts(shape, count):
    assert len(admissible_mappings(*shape)) == count


def test_parity_tables_are_excluded():
    adm = {t.key() for t in admissible_mappings(2, 2, 2)}
    assert XOR.key() not in adm
    assert ANTI_XOR.key() not in adm
    assert CONST_0.key() in adm
    assert CONST_1.key() in adm
    assert AND_GATE.key() in adm


def test_profile_shape_and_values():
    # per-row then per-column symbol counts
    prof = profile(AND_GATE)
    assert len(prof) == (2 + 2) * 2
    npt.assert_array_equal(profile(CONST_0)[:2], [2, 0])


def test_admissibility_matches_hull_oracle():
    """Cross-check the built-in flag against scipy's LP on two shapes."""
    linprog = pytest.importorskip("scipy.optimize").linprog

    def hull_member(target, others):
        if len(others) == 0:
            return False
        a_eq = np.vstack([np.asarray(others, dtype=float).T,
                          np.ones(len(others))])
        b_eq = np.concatenate([np.asarray(target, dtype=float), [1.0]])
        res = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq,
                      bounds=(0, None), method="highs")
        return res.status == 0

    for shape in [(2, 2, 2), (2, 3, 2)]:
        tables = enumerate_mappings(*shape)
        adm = {t.key() for t in admissible_mappings(*shape)}
        profiles = {t.key(): tuple(profile(t)) for t in tables}
        for t in tables:
            others = [p for k, p in profiles.items()
                      if k != t.key() and p != profiles[t.key()]]
            dominated = (
                hull_member(profiles[t.key()], others)
                or any(p == profiles[t.key()] and k != t.key()
                       for k, p in profiles.items())
            )
            assert (t.key() in adm) == (not dominated), t.cells


def test_profile_extremality():
    assert is_profile_extremal(CONST_0)
    assert is_profile_extremal(AND_GATE)
    assert not is_profile_extremal(XOR)


def test_relabeling_classes_partition():
    tables = enumerate_mappings(2, 2, 2)
    classes = relabeling_classes(tables)
    sizes = [len(members) for _, members in classes]
    assert sum(sizes) == len(tables)
    # representatives are members of their own class
    for rep, members in classes:
        assert any(rep.key() == m.key() for m in members)
    assert len(classes) < len(tables)  # symmetry actually collapses something


def test_condition_checks_pass_at_maximizer():
    """Both fixed-point conditions hold at an actual inner maximizer."""
    from martonkit.sumrate import inner_T

    ch = BroadcastChannel(np.array([[0.9, 0.1], [0.1, 0.9]]),
                          np.array([[0.8, 0.2], [0.2, 0.8]]))
    res = inner_T(np.array([0.45, 0.55]), ch, filters="off", seed=3)
    joint = res.joint_uvx()
    pos = check_support_positivity(joint, ch)
    assert pos.applicable and pos.passed, pos.as_dict()
    stat = check_stationarity(joint, res.mapping, ch, tol=1e-3)
    assert stat.passed, stat.as_dict()


def test_support_positivity_fails_on_correlated_coupling():
    # zeros inside the live support: cannot be a maximizer of a noisy channel
    ch = BroadcastChannel(np.array([[0.9, 0.1], [0.1, 0.9]]),
                          np.array([[0.8, 0.2], [0.2, 0.8]]))
    arr = np.zeros((2, 2, 2))
    arr[0, 0, 0] = arr[1, 1, 1] = 0.5
    rep = check_support_positivity(JointTable(arr), ch)
    assert rep.applicable and not rep.passed
    failing = [c for c in rep.conditions if not c.passed]
    assert failing and failing[0].worst == 0.0


def test_stationarity_rejects_mass_off_cells():
    ch = BroadcastChannel(np.array([[0.9, 0.1], [0.1, 0.9]]),
                          np.array([[0.8, 0.2], [0.2, 0.8]]))
    arr = np.full((2, 2, 2), 1 / 8)  # uniform: mass on every (u,v,x)
    with pytest.raises(ValueError):
        check_stationarity(JointTable(arr), AND_GATE, ch)


def test_support_positivity_needs_positive_channel():
    ch = BroadcastChannel(np.eye(2), np.eye(2))
    arr = np.zeros((2, 2, 2))
    arr[0, 0, 0] = arr[1, 1, 1] = 0.5
    rep = check_support_positivity(JointTable(arr), ch)
    assert not rep.applicable
