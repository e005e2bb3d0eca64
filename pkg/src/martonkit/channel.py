"""Two-receiver discrete memoryless broadcast channels.

A channel is stored through its marginal kernels q(y|x) and q(z|x): every
quantity this package computes involves Y or Z but never the pair (Y,Z)
jointly, so the marginals are a complete description for our purposes.
A joint kernel q(y,z|x) supplied in a file is marginalized on load.
"""

import json

import numpy as np

from .errors import InvalidChannelError

ROW_TOL = 1e-9


class BroadcastChannel:
    """Input alphabet X feeding receiver kernels q(y|x) and q(z|x)."""

    __slots__ = ("q_y", "q_z")

    def __init__(self, q_y, q_z):
        self.q_y = np.asarray(q_y, dtype=np.float64)
        self.q_z = np.asarray(q_z, dtype=np.float64)
        problems = validate(self)
        if problems:
            raise InvalidChannelError(problems)

    @property
    def x_size(self):
        return self.q_y.shape[0]

    @property
    def y_size(self):
        return self.q_y.shape[1]

    @property
    def z_size(self):
        return self.q_z.shape[1]

    def strictly_positive(self):
        return bool(self.q_y.min() > 0.0 and self.q_z.min() > 0.0)

    def __repr__(self):
        return (f"BroadcastChannel(x={self.x_size}, y={self.y_size}, "
                f"z={self.z_size})")


def validate(ch):
    """Collect every violation instead of stopping at the first."""
    problems = []
    for name, kernel in (("q_y", ch.q_y), ("q_z", ch.q_z)):
        if kernel.ndim != 2:
            problems.append(f"{name} must be a matrix, got shape {kernel.shape}")
            continue
        if kernel.shape[0] == 0 or kernel.shape[1] == 0:
            problems.append(f"{name} has an empty axis: shape {kernel.shape}")
            continue
        if not np.all(np.isfinite(kernel)):
            problems.append(f"{name} has non-finite entries")
            continue
        if kernel.min() < -ROW_TOL:
            bad = np.unravel_index(kernel.argmin(), kernel.shape)
            problems.append(f"{name}{list(bad)} is negative: {kernel.min()!r}")
        sums = kernel.sum(axis=1)
        for x, s in enumerate(sums):
            if abs(s - 1.0) > ROW_TOL:
                problems.append(f"{name} row {x} sums to {s!r}, expected 1")
    if (ch.q_y.ndim == 2 and ch.q_z.ndim == 2
            and ch.q_y.shape[0] != ch.q_z.shape[0]):
        problems.append(
            f"q_y and q_z disagree on |X|: {ch.q_y.shape[0]} vs {ch.q_z.shape[0]}"
        )
    return problems


def is_irreducible(ch, tol=1e-9):
    """True when no two inputs produce identical rows in both kernels.

    Two inputs that neither receiver can distinguish are duplicates: one of
    them can be removed without changing anything this package computes.
    """
    n = ch.x_size
    for a in range(n):
        for b in range(a + 1, n):
            same_y = np.abs(ch.q_y[a] - ch.q_y[b]).max() <= tol
            same_z = np.abs(ch.q_z[a] - ch.q_z[b]).max() <= tol
            if same_y and same_z:
                return False
    return True


def compose_degraded(q_y, p_z_given_y):
    """Build the channel where Z is a stochastic degradation of Y.

    q(z|x) = sum_y q(y|x) p(z|y).
    """
    q_y = np.asarray(q_y, dtype=np.float64)
    p_zy = np.asarray(p_z_given_y, dtype=np.float64)
    if q_y.ndim != 2 or p_zy.ndim != 2 or q_y.shape[1] != p_zy.shape[0]:
        raise InvalidChannelError(
            [f"cannot compose shapes {q_y.shape} and {p_zy.shape}"]
        )
    return BroadcastChannel(q_y, q_y @ p_zy)


def smooth(ch, delta):
    """Mix every kernel row with the uniform row: row <- (1-d)*row + d*u.

    Guarantees entries >= delta/max(|Y|,|Z|) while keeping rows stochastic.
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    q_y = (1.0 - delta) * ch.q_y + delta / ch.y_size
    q_z = (1.0 - delta) * ch.q_z + delta / ch.z_size
    return BroadcastChannel(q_y, q_z)


def _claim1_channel():
    """X -> Y is a BSC(0.3); Z is Y pushed through [[0.6, 0.4], [0, 1]]."""
    q_y = np.array([[0.7, 0.3], [0.3, 0.7]])
    return compose_degraded(q_y, np.array([[0.6, 0.4], [0.0, 1.0]]))


BUILTIN_CHANNELS = {
    "claim1": _claim1_channel,
}


def from_dict(doc):
    """Build a channel from a parsed JSON document.

    Expected fields: x_size, y_size, z_size plus either q_y and q_z (row
    stochastic, rows indexed by x) or a joint q_yz with rows indexed by x
    and columns by (y, z) pairs in row-major order.
    """
    if not isinstance(doc, dict):
        raise InvalidChannelError(["channel document must be a JSON object"])
    try:
        x_size = int(doc["x_size"])
        y_size = int(doc["y_size"])
        z_size = int(doc["z_size"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidChannelError([f"bad or missing alphabet sizes: {exc}"])
    if min(x_size, y_size, z_size) < 1:
        raise InvalidChannelError(["alphabet sizes must be positive"])
    if "q_yz" in doc:
        q_yz = np.asarray(doc["q_yz"], dtype=np.float64)
        if q_yz.shape != (x_size, y_size * z_size):
            raise InvalidChannelError(
                [f"q_yz must have shape ({x_size}, {y_size * z_size}), "
                 f"got {q_yz.shape}"]
            )
        cube = q_yz.reshape(x_size, y_size, z_size)
        q_y = cube.sum(axis=2)
        q_z = cube.sum(axis=1)
    elif "q_y" in doc and "q_z" in doc:
        q_y = np.asarray(doc["q_y"], dtype=np.float64)
        q_z = np.asarray(doc["q_z"], dtype=np.float64)
        if q_y.shape != (x_size, y_size):
            raise InvalidChannelError(
                [f"q_y must have shape ({x_size}, {y_size}), got {q_y.shape}"]
            )
        if q_z.shape != (x_size, z_size):
            raise InvalidChannelError(
                [f"q_z must have shape ({x_size}, {z_size}), got {q_z.shape}"]
            )
    else:
        raise InvalidChannelError(
            ["channel document needs either q_yz or both q_y and q_z"]
        )
    return BroadcastChannel(q_y, q_z)


def load_channel(spec):
    """Resolve a channel from a builtin name or a JSON file path."""
    if spec in BUILTIN_CHANNELS:
        return BUILTIN_CHANNELS[spec]()
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidChannelError([f"cannot read channel file {spec!r}: {exc}"])
    except json.JSONDecodeError as exc:
        raise InvalidChannelError([f"channel file {spec!r} is not valid JSON: {exc}"])
    return from_dict(doc)
