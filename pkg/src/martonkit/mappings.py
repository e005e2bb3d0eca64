"""Deterministic mappings (u, v) -> x and optimality-condition checks.

A mapping table is the support pattern of a joint p(u, v, x) in which X is
a deterministic function of (U, V).  Its profile vector counts how often
each x-symbol appears in every row and every column; a table whose profile
is a convex combination of the other tables' profiles can never be the
unique support of a maximizer, so only profile-extremal ("admissible")
tables need to be searched.

The check_* functions evaluate necessary first-order conditions at claimed
maximizers.  They are filters and diagnostics only: a failure is evidence
against optimality, never a proof of it, and none of them is used to prune
anything silently.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import probkit
from .errors import ResourceLimitError
from .lpsolve import ConvexFeasibilityProblem, solve_convex_feasibility

ENUMERATION_CAP = 10**6
POSITIVITY_FLOOR = 1e-12
SUPPORT_FLOOR = 1e-9
_LOG_TINY = 1e-300


class MappingTable:
    """An integer table cells[u, v] = x with symbols in range(x_size)."""

    __slots__ = ("cells", "x_size")

    def __init__(self, cells, x_size):
        arr = np.asarray(cells, dtype=np.int64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"cells must be a non-empty matrix, got shape {arr.shape}")
        if x_size < 1:
            raise ValueError("x_size must be positive")
        if arr.min() < 0 or arr.max() >= x_size:
            raise ValueError("cell symbols out of range")
        self.cells = arr
        self.x_size = int(x_size)

    @property
    def u_size(self):
        return self.cells.shape[0]

    @property
    def v_size(self):
        return self.cells.shape[1]

    def key(self):
        return tuple(self.cells.ravel().tolist())

    def __eq__(self, other):
        return (isinstance(other, MappingTable) and self.x_size == other.x_size
                and np.array_equal(self.cells, other.cells))

    def __hash__(self):
        return hash((self.x_size,) + self.key())

    def __repr__(self):
        return f"MappingTable({self.cells.tolist()}, x_size={self.x_size})"


def profile(table):
    """Row-then-column symbol counts, x-symbols in index order.

    Length (u_size + v_size) * x_size; equal profiles force equal
    conditionals p(x | U=u) and p(x | V=v) under any product weighting of
    rows and columns, which is why the convex-hull test below is sound.
    """
    counts = []
    for u in range(table.u_size):
        counts.append(np.bincount(table.cells[u], minlength=table.x_size))
    for v in range(table.v_size):
        counts.append(np.bincount(table.cells[:, v], minlength=table.x_size))
    return np.concatenate(counts).astype(np.int64)


def enumerate_mappings(u_size, v_size, x_size, cap=ENUMERATION_CAP):
    """All x_size**(u_size*v_size) tables in lexicographic cell order."""
    if min(u_size, v_size, x_size) < 1:
        raise ValueError("alphabet sizes must be positive")
    total = x_size ** (u_size * v_size)
    if total > cap:
        raise ResourceLimitError(
            f"{total} mapping tables exceed the cap of {cap}"
        )
    tables = []
    for cells in itertools.product(range(x_size), repeat=u_size * v_size):
        tables.append(MappingTable(
            np.array(cells, dtype=np.int64).reshape(u_size, v_size), x_size
        ))
    return tables


_admissible_cache = {}


def _profile_matrix(tables):
    return np.vstack([profile(t) for t in tables]).astype(np.float64)


def _admissibility_mask(tables):
    """Admissibility flag per table: profile not in hull of the others'."""
    profs = _profile_matrix(tables)
    keys = [p.tobytes() for p in profs]
    counts = {}
    for k in keys:
        counts[k] = counts.get(k, 0) + 1
    distinct = {}
    for k, p in zip(keys, profs):
        distinct.setdefault(k, p)
    distinct_mat = np.vstack(list(distinct.values())) \
        if distinct else np.empty((0, profs.shape[1]))
    order = {k: idx for idx, k in enumerate(distinct)}
    mask = np.zeros(len(tables), dtype=bool)
    for i, (k, p) in enumerate(zip(keys, profs)):
        if counts[k] > 1:
            continue  # another table shares the profile: trivially in the hull
        # profiles are nonnegative, so only candidates vanishing wherever
        # the target vanishes can carry weight in a convex combination
        usable = ~(distinct_mat[:, p == 0.0] > 0.0).any(axis=1)
        usable[order[k]] = False
        others = distinct_mat[usable]
        problem = ConvexFeasibilityProblem(others, p)
        mask[i] = not solve_convex_feasibility(problem).feasible
    return mask


def admissible_mappings(u_size, v_size, x_size, cap=ENUMERATION_CAP):
    """Profile-extremal tables, in enumeration order (cached per size)."""
    key = (u_size, v_size, x_size)
    if key not in _admissible_cache:
        tables = enumerate_mappings(u_size, v_size, x_size, cap=cap)
        mask = _admissibility_mask(tables)
        _admissible_cache[key] = [t for t, ok in zip(tables, mask) if ok]
    return list(_admissible_cache[key])


def is_profile_extremal(table, cap=ENUMERATION_CAP):
    """True iff the table's profile is not a convex combination of the
    profiles of the other tables of the same shape."""
    admissible = admissible_mappings(table.u_size, table.v_size, table.x_size,
                                     cap=cap)
    return any(table == t for t in admissible)


def relabeling_classes(tables):
    """Group tables equivalent up to relabeling U and/or V (never X).

    Returns a list of (representative, members) with the representative
    being the lexicographically smallest member; enumeration order of the
    representatives is preserved.
    """
    if not tables:
        return []
    u_size = tables[0].u_size
    v_size = tables[0].v_size
    groups = {}
    order = []
    row_perms = list(itertools.permutations(range(u_size)))
    col_perms = list(itertools.permutations(range(v_size)))
    for t in tables:
        best = None
        for rp in row_perms:
            rows = t.cells[list(rp)]
            for cp in col_perms:
                cand = tuple(rows[:, list(cp)].ravel().tolist())
                if best is None or cand < best:
                    best = cand
        if best not in groups:
            groups[best] = []
            order.append(best)
        groups[best].append(t)
    out = []
    for key in order:
        members = groups[key]
        rep = min(members, key=lambda t: t.key())
        out.append((rep, members))
    return out


# ---------------------------------------------------------------------------
# condition checks at claimed maximizers
# ---------------------------------------------------------------------------

@dataclass
class ConditionCheck:
    name: str
    passed: bool
    worst: float
    tolerance: float
    witness: tuple | None = None
    note: str = ""


@dataclass
class ConditionReport:
    passed: bool
    conditions: list = field(default_factory=list)
    applicable: bool = True
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "passed": bool(self.passed),
            "applicable": bool(self.applicable),
            "notes": list(self.notes),
            "conditions": [
                {
                    "name": c.name,
                    "passed": bool(c.passed),
                    "worst": float(c.worst),
                    "tolerance": float(c.tolerance),
                    "witness": list(c.witness) if c.witness is not None else None,
                    "note": c.note,
                }
                for c in self.conditions
            ],
        }


def _joint_array(joint, ndim):
    arr = joint.probs if isinstance(joint, probkit.JointTable) else \
        np.asarray(joint, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-axis joint, got {arr.ndim}")
    return arr


def _live(marginal, floor=SUPPORT_FLOOR):
    return np.where(marginal > floor)[0]


def check_support_positivity(joint, ch, floor=POSITIVITY_FLOOR):
    """All of p(u,v), p(u,y), p(v,z) positive on the effective support.

    Symbols whose marginal mass is below the support floor are trimmed
    first (a degenerate auxiliary is assessed on its effective alphabet);
    a zero inside the trimmed support fails with its index as witness.
    Needs a strictly positive channel: otherwise the report is returned
    with applicable=False.
    """
    arr = _joint_array(joint, 3)
    report = ConditionReport(passed=True)
    if not ch.strictly_positive():
        report.applicable = False
        report.notes.append("channel has zero entries; positivity not applicable")
        return report
    s = arr.sum(axis=2)
    live_u = _live(s.sum(axis=1))
    live_v = _live(s.sum(axis=0))
    if live_u.size < s.shape[0] or live_v.size < s.shape[1]:
        report.notes.append(
            f"trimmed to support u={live_u.tolist()}, v={live_v.tolist()}"
        )
    p_uy = arr.sum(axis=1) @ ch.q_y
    p_vz = arr.sum(axis=0) @ ch.q_z

    def _check(name, mat, rows, cols):
        sub = mat[np.ix_(rows, cols)]
        worst = float(sub.min()) if sub.size else 1.0
        idx = None
        if sub.size:
            i, j = np.unravel_index(sub.argmin(), sub.shape)
            idx = (int(rows[i]), int(cols[j]))
        ok = worst > floor
        report.conditions.append(ConditionCheck(
            name=name, passed=ok, worst=worst, tolerance=floor, witness=idx
        ))
        return ok

    ok_uv = _check("p(u,v) positive", s, live_u, live_v)
    ok_uy = _check("p(u,y) positive", p_uy, live_u, np.arange(p_uy.shape[1]))
    ok_vz = _check("p(v,z) positive", p_vz, live_v, np.arange(p_vz.shape[1]))
    report.passed = bool(ok_uv and ok_uy and ok_vz)
    return report


def check_stationarity(joint, table, ch, tol=1e-3):
    """First-order conditions of the mapping-constrained maximization.

    With f_u(x) = sum_y q(y|x) log2 p(u,y) and
    g_v(x) = sum_z q(z|x) log2 p(v,z) and
    h(x) = min_{u',v'} (log2 p(u',v') - f_{u'}(x) - g_{v'}(x)),
    a maximizer satisfies log2 p(u,v) = max_x [f_u(x)+g_v(x)+h(x)] with the
    mapping cell attaining the max, and the cross-ratio inequality
    p(u0,v0) p(u1,v1) <= p(u1,v0) p(u0,v1) whenever two diagonal cells map
    to the same symbol.  Evaluated on the trimmed support.
    """
    arr = _joint_array(joint, 3)
    nu, nv, nx = arr.shape
    if (table.u_size, table.v_size) != (nu, nv) or table.x_size != nx:
        raise ValueError("mapping table shape does not match the joint")
    # mass must sit on the mapping's cells only
    off = arr.sum() - sum(
        arr[u, v, table.cells[u, v]] for u in range(nu) for v in range(nv)
    )
    if off > 1e-9:
        raise ValueError(
            f"joint carries {off:.3e} probability off the mapping cells"
        )
    s = arr.sum(axis=2)
    live_u = _live(s.sum(axis=1))
    live_v = _live(s.sum(axis=0))
    report = ConditionReport(passed=True)
    if live_u.size < nu or live_v.size < nv:
        report.notes.append(
            f"trimmed to support u={live_u.tolist()}, v={live_v.tolist()}"
        )
    p_uy = arr.sum(axis=1) @ ch.q_y
    p_vz = arr.sum(axis=0) @ ch.q_z
    log_s = np.log2(np.maximum(s, _LOG_TINY))
    log_uy = np.log2(np.maximum(p_uy, _LOG_TINY))
    log_vz = np.log2(np.maximum(p_vz, _LOG_TINY))
    f = np.where(ch.q_y[None, :, :] > 0,
                 ch.q_y[None, :, :] * log_uy[:, None, :], 0.0).sum(axis=2)
    g = np.where(ch.q_z[None, :, :] > 0,
                 ch.q_z[None, :, :] * log_vz[:, None, :], 0.0).sum(axis=2)
    # f[u, x], g[v, x]; h[x] = min over live cells
    h = np.full(nx, np.inf)
    for x in range(nx):
        for u in live_u:
            for v in live_v:
                h[x] = min(h[x], log_s[u, v] - f[u, x] - g[v, x])

    worst_eq = -np.inf
    worst_eq_idx = None
    worst_arg = -np.inf
    worst_arg_idx = None
    for u in live_u:
        for v in live_v:
            scores = f[u] + g[v] + h
            best = scores.max()
            gap_eq = abs(log_s[u, v] - best)
            if gap_eq > worst_eq:
                worst_eq, worst_eq_idx = gap_eq, (int(u), int(v))
            gap_arg = best - scores[table.cells[u, v]]
            if gap_arg > worst_arg:
                worst_arg, worst_arg_idx = gap_arg, (int(u), int(v))

    worst_ratio = -np.inf
    worst_ratio_idx = None
    for u0, u1 in itertools.combinations(live_u, 2):
        for v0, v1 in itertools.permutations(live_v, 2):
            if table.cells[u0, v0] != table.cells[u1, v1]:
                continue
            lhs = s[u0, v0] * s[u1, v1]
            rhs = s[u1, v0] * s[u0, v1]
            violation = lhs - rhs * (1.0 + tol)
            if violation > worst_ratio:
                worst_ratio = violation
                worst_ratio_idx = (int(u0), int(v0), int(u1), int(v1))
    if worst_ratio == -np.inf:
        worst_ratio = 0.0  # no comparable cell pairs

    checks = [
        ConditionCheck("fixed-point equality", worst_eq <= tol,
                       float(worst_eq), tol, worst_eq_idx),
        ConditionCheck("mapping attains argmax", worst_arg <= tol,
                       float(worst_arg), tol, worst_arg_idx),
        ConditionCheck("cross-ratio inequality", worst_ratio <= 0.0,
                       float(worst_ratio), tol, worst_ratio_idx),
    ]
    report.conditions.extend(checks)
    report.passed = all(c.passed for c in checks)
    return report


def _set_partitions(items):
    """All partitions of a list into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def check_less_noisy(joint, side="y", samples=200, tol=1e-6, seed=0):
    """Evidence that one receiver is at least as informed as the pair.

    For side "y" the condition is I(A;Y) >= I(A;V,Z) for every auxiliary
    A -> U (Markov through U); side "z" swaps roles: I(A;Z) >= I(A;U,Y).
    Probes are all deterministic partitions of the conditioning alphabet
    plus `samples` random kernels.  A sampled check can only refute, never
    certify, so the report is evidence, not proof.
    """
    arr = _joint_array(joint, 5)
    if side not in ("y", "z"):
        raise ValueError(f"side must be 'y' or 'z', got {side!r}")
    if side == "y":
        p_cond = arr.sum(axis=(1, 2, 4))          # (U, Y)
        p_pair = arr.sum(axis=(2, 3))             # (U, V, Z)
    else:
        p_cond = arr.transpose(1, 0, 2, 3, 4).sum(axis=(1, 2, 3))  # (V, Z)
        p_pair = arr.transpose(1, 0, 2, 3, 4).sum(axis=(2, 4))     # (V, U, Y)
    n = p_cond.shape[0]
    margin_worst = np.inf
    witness = None

    def _probe(kernel, label):
        nonlocal margin_worst, witness
        mix_cond = kernel.T @ p_cond
        mix_pair = np.einsum("uk,uab->kab", kernel, p_pair)
        i_direct = probkit.grouped_mutual_information(mix_cond, (0,), (1,))
        i_pair = probkit.grouped_mutual_information(mix_pair, (0,), (1, 2))
        margin = i_direct - i_pair
        if margin < margin_worst:
            margin_worst = margin
            witness = (label, kernel.copy())

    for part in _set_partitions(list(range(n))):
        kernel = np.zeros((n, len(part)))
        for b, block in enumerate(part):
            for item in block:
                kernel[item, b] = 1.0
        _probe(kernel, "partition")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        kernel = rng.dirichlet(np.ones(n), size=n)
        _probe(kernel, "sampled")

    passed = margin_worst >= -tol
    report = ConditionReport(passed=bool(passed))
    report.conditions.append(ConditionCheck(
        name=f"less-noisy toward {side.upper()}",
        passed=bool(passed),
        worst=float(margin_worst),
        tolerance=tol,
        witness=None,
        note="sampled refuter: failure is evidence, success is not proof",
    ))
    if not passed and witness is not None:
        report.notes.append(
            f"violating {witness[0]} kernel: {witness[1].tolist()}"
        )
    return report
