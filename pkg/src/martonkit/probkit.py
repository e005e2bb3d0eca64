"""Finite probability vectors, joint tables, and information measures.

Everything is base 2; all returned quantities are in bits.  Validation
uses an absolute tolerance of 1e-9 on sums and entries; mutual-information
values are clamped to zero when they fall in [-1e-9, 0) so downstream code
can rely on nonnegativity.
"""

import numpy as np

from . import _kernels
from .errors import InvalidDistributionError

SUM_TOL = 1e-9
_CLAMP = 1e-9


def _as_prob_array(values, ndim=None):
    arr = np.asarray(values, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise InvalidDistributionError(
            f"expected a {ndim}-dimensional table, got shape {arr.shape}"
        )
    if arr.size == 0:
        raise InvalidDistributionError("empty distribution")
    if not np.all(np.isfinite(arr)):
        raise InvalidDistributionError("non-finite entries in distribution")
    if arr.min() < -SUM_TOL:
        raise InvalidDistributionError(
            f"negative entry {arr.min():.3e} in distribution"
        )
    total = arr.sum()
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidDistributionError(f"entries sum to {total!r}, expected 1")
    return np.clip(arr, 0.0, None)


class ProbVector:
    """A validated probability mass function on a finite alphabet."""

    __slots__ = ("probs",)

    def __init__(self, probs):
        self.probs = _as_prob_array(probs, ndim=1)

    def __len__(self):
        return self.probs.size

    def __repr__(self):
        return f"ProbVector({self.probs.tolist()})"


class JointTable:
    """A validated joint distribution over named-by-position axes."""

    __slots__ = ("probs",)

    def __init__(self, probs):
        arr = _as_prob_array(probs)
        if arr.ndim < 1:
            raise InvalidDistributionError("joint table needs at least one axis")
        self.probs = arr

    @property
    def dims(self):
        return self.probs.shape

    def marginal(self, axes):
        """Marginal over the given axes (kept in the order requested)."""
        axes = tuple(axes)
        keep = set(axes)
        if not keep <= set(range(self.probs.ndim)):
            raise ValueError(f"axes {axes} out of range for shape {self.dims}")
        drop = tuple(a for a in range(self.probs.ndim) if a not in keep)
        reduced = self.probs.sum(axis=drop) if drop else self.probs
        # reorder to the requested axis order
        current = [a for a in range(self.probs.ndim) if a in keep]
        perm = [current.index(a) for a in axes]
        return JointTable(reduced.transpose(perm))

    def __repr__(self):
        return f"JointTable(shape={self.dims})"


def entropy(p):
    """Shannon entropy H(p) in bits."""
    probs = p.probs if isinstance(p, (ProbVector, JointTable)) else _as_prob_array(p)
    return float(_kernels.entropy_bits(np.ascontiguousarray(probs.ravel())))


def _entropy_raw(arr):
    """Entropy of an unvalidated nonnegative array (internal)."""
    return float(_kernels.entropy_bits(np.ascontiguousarray(arr.ravel(), dtype=np.float64)))


def _clamp_mi(value):
    if value < 0.0:
        if value < -_CLAMP:
            return value  # genuinely negative: caller's bug, surface it
        return 0.0
    return value


def mutual_information(joint):
    """I(A;B) of a two-axis joint table, in bits."""
    table = joint if isinstance(joint, JointTable) else JointTable(joint)
    if table.probs.ndim != 2:
        raise ValueError(
            f"mutual_information expects 2 axes, got {table.probs.ndim}"
        )
    p = table.probs
    value = _entropy_raw(p.sum(1)) + _entropy_raw(p.sum(0)) - _entropy_raw(p)
    return _clamp_mi(value)


def conditional_mutual_information(joint):
    """I(A;B|C) of a three-axis joint table (third axis conditions), in bits."""
    table = joint if isinstance(joint, JointTable) else JointTable(joint)
    if table.probs.ndim != 3:
        raise ValueError(
            f"conditional_mutual_information expects 3 axes, got {table.probs.ndim}"
        )
    p = table.probs
    # I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
    value = (
        _entropy_raw(p.sum(1))
        + _entropy_raw(p.sum(0))
        - _entropy_raw(p)
        - _entropy_raw(p.sum((0, 1)))
    )
    return _clamp_mi(value)


def grouped_mutual_information(table, left_axes, right_axes):
    """I(left group; right group) from a dense ndarray joint, in bits.

    The groups must be disjoint; axes outside both groups are traced out.
    """
    arr = np.asarray(table, dtype=np.float64)
    left = tuple(left_axes)
    right = tuple(right_axes)
    if set(left) & set(right):
        raise ValueError("left and right axis groups overlap")
    joint = arr.sum(axis=tuple(
        a for a in range(arr.ndim) if a not in set(left) | set(right)
    )) if len(left) + len(right) < arr.ndim else arr
    # entropies straight off marginals; order inside a group is irrelevant
    kept = sorted(set(left) | set(right))
    pos = {a: i for i, a in enumerate(kept)}
    h_ab = _entropy_raw(joint)
    h_a = _entropy_raw(joint.sum(axis=tuple(pos[a] for a in right)))
    h_b = _entropy_raw(joint.sum(axis=tuple(pos[a] for a in left)))
    return _clamp_mi(h_a + h_b - h_ab)


def grouped_conditional_mi(table, left_axes, right_axes, cond_axes):
    """I(left; right | cond) from a dense ndarray joint, in bits."""
    arr = np.asarray(table, dtype=np.float64)
    left, right, cond = tuple(left_axes), tuple(right_axes), tuple(cond_axes)
    groups = [set(left), set(right), set(cond)]
    if (groups[0] & groups[1]) or (groups[0] & groups[2]) or (groups[1] & groups[2]):
        raise ValueError("axis groups overlap")
    keep = groups[0] | groups[1] | groups[2]
    joint = arr.sum(axis=tuple(a for a in range(arr.ndim) if a not in keep)) \
        if len(keep) < arr.ndim else arr
    kept = sorted(keep)
    pos = {a: i for i, a in enumerate(kept)}
    ax_l = tuple(pos[a] for a in left)
    ax_r = tuple(pos[a] for a in right)
    h_abc = _entropy_raw(joint)
    h_ac = _entropy_raw(joint.sum(axis=ax_r))
    h_bc = _entropy_raw(joint.sum(axis=ax_l))
    h_c = _entropy_raw(joint.sum(axis=ax_l + ax_r))
    return _clamp_mi(h_ac + h_bc - h_abc - h_c)
