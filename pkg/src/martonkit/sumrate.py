"""Sum-rate computations for the two-receiver inner bound.

The quantity of interest is

    max  min{I(W;Y), I(W;Z)} + I(U;Y|W) + I(V;Z|W) - I(U;V|W)

over joints p(u,v,w,x) with X a deterministic function of (U,V,W).  For a
fixed p(w,x) the conditional part decomposes per W-symbol into

    T(p_x) = max  I(U;Y) + I(V;Z) - I(U;V)

over couplings p(u,v) whose induced X-marginal (through a deterministic
mapping (u,v) -> x) equals p_x.  inner_T solves that cell problem by
multi-start projected ascent per admissible mapping table; t_lambda wraps
it with an outer ascent over p(w,x) for the linearized weight
lambda*I(W;Y) + (1-lambda)*I(W;Z); marton_sum_rate minimizes over lambda
(the linearized value is convex in lambda, and its minimum equals the
min-form sum rate); marton_sum_rate_direct ascends the min-form objective
itself, giving an independent route to the same number.
"""

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import channel as channel_mod
from . import mappings as mappings_mod
from . import optimize
from .errors import NumericalError
from .mappings import MappingTable
from .probkit import JointTable, _entropy_raw

_LIVE_W = 1e-9
_FEAS_EPS = 1e-12
_TIE_EPS = 1e-12
AUTO_SMOOTH_DELTA = 1e-6


@dataclass
class SearchOptions:
    """Knobs shared by the sum-rate searches.

    filters: "on" restricts mappings to profile-extremal tables and uses
    the tighter auxiliary cardinalities; "off" searches every table with
    |U| = |V| = |X|; "report" searches like "off" but annotates whether
    the winners would have survived the filters.
    """

    filters: str = "on"
    seed: int = 0
    outer_starts: int = 8
    outer_iters: int = 150
    outer_ftol: float = 1e-8
    fd_step: float = 1e-6
    inner_starts: int = 4
    inner_iters: int = 300
    inner_ftol: float = 1e-11
    quotient: bool = True
    golden_tol: float = 2e-3
    condition_tol: float = 1e-3
    less_noisy_samples: int = 0
    reseed_attempts: int = 2
    extra_outer_starts: tuple = ()

    def __post_init__(self):
        if self.filters not in ("on", "off", "report"):
            raise ValueError(f"filters must be on/off/report, got {self.filters!r}")


@dataclass
class InnerTResult:
    value: float
    mapping: MappingTable
    joint: JointTable              # coupling p(u, v)
    p_x: np.ndarray                # requested input marginal
    conditions: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def joint_uvx(self):
        """The (U, V, X) joint implied by the coupling and the mapping."""
        s = self.joint.probs
        nu, nv = s.shape
        out = np.zeros((nu, nv, self.mapping.x_size))
        for u in range(nu):
            for v in range(nv):
                out[u, v, self.mapping.cells[u, v]] = s[u, v]
        return out

    def induced_marginal_residual(self):
        induced = self.joint_uvx().sum(axis=(0, 1))
        return float(np.abs(induced - self.p_x).max())


@dataclass
class PerW:
    w: int
    p_w: float
    inner: InnerTResult


@dataclass
class SumRateWitness:
    value: float
    lambda_star: float
    p_wx: JointTable
    per_w: list
    i_wy: float
    i_wz: float
    t_term: float                  # sum_w p(w) * inner value
    delta_smoothing_used: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def affine_value(self, lam):
        """The witness's value re-weighted at another lambda (exact)."""
        return lam * self.i_wy + (1.0 - lam) * self.i_wz + self.t_term

    def rebased(self, lam):
        return replace(self, lambda_star=lam, value=self.affine_value(lam))

    def reconstruction_residual(self):
        lam = self.lambda_star
        recon = lam * self.i_wy + (1.0 - lam) * self.i_wz + sum(
            e.p_w * e.inner.value for e in self.per_w
        )
        return abs(self.value - recon)


def _mi2(m):
    return _entropy_raw(m.sum(1)) + _entropy_raw(m.sum(0)) - _entropy_raw(m)


def _channel_mis(r_wx, ch):
    """(I(W;Y), I(W;Z)) for the joint r(w, x) pushed through the channel."""
    return _mi2(r_wx @ ch.q_y), _mi2(r_wx @ ch.q_z)


def _validate_px(p_x, nx):
    arr = np.asarray(p_x, dtype=np.float64).ravel()
    if arr.size != nx:
        raise ValueError(f"p_x has {arr.size} entries, channel has |X|={nx}")
    if arr.min() < -1e-9 or abs(arr.sum() - 1.0) > 1e-9:
        raise ValueError("p_x is not a probability vector")
    return np.clip(arr, 0.0, None)


class _InnerSolver:
    """Batched per-mapping ascent at fixed coupling cardinalities."""

    def __init__(self, ch, nu, nv, mode="on", quotient=True, seed=0,
                 starts=4, max_iters=300, ftol=1e-11, alpha=1.0,
                 cap=mappings_mod.ENUMERATION_CAP):
        self.ch = ch
        self.nu = nu
        self.nv = nv
        nx = ch.x_size
        if mode == "on":
            tables = mappings_mod.admissible_mappings(nu, nv, nx, cap=cap)
        else:
            tables = mappings_mod.enumerate_mappings(nu, nv, nx, cap=cap)
        if quotient:
            tables = [rep for rep, _ in mappings_mod.relabeling_classes(tables)]
        self.tables = tables
        n_cells = nu * nv
        self.cell_u = np.repeat(np.arange(nu, dtype=np.int64), nv)
        self.cell_v = np.tile(np.arange(nv, dtype=np.int64), nu)
        self.cell_x = np.array([t.cells.ravel() for t in tables], dtype=np.int64)
        self.covers = np.zeros((len(tables), nx), dtype=bool)
        for i, row in enumerate(self.cell_x):
            self.covers[i, row] = True
        self.alpha = float(alpha)
        self.max_iters = max_iters
        self.ftol = ftol
        # start patterns: per-block Dirichlet(1) shapes, scaled per call
        rng = np.random.default_rng(seed)
        n_rand = max(starts - 1, 0)
        raw = rng.exponential(size=(len(tables), max(n_rand, 1), n_cells))
        self.rand_patterns = np.empty_like(raw[:, :n_rand] if n_rand else raw[:, :0])
        self.unif_patterns = np.empty((len(tables), n_cells))
        for m in range(len(tables)):
            for b in range(nx):
                cols = self.cell_x[m] == b
                cnt = cols.sum()
                if cnt == 0:
                    continue
                self.unif_patterns[m, cols] = 1.0 / cnt
                if n_rand:
                    block = raw[m][:, cols]
                    self.rand_patterns[m][:, cols] = \
                        block / block.sum(axis=1, keepdims=True)

    def solve(self, p_x, warm=None, fast=False):
        """Best (value, table, point) over feasible mappings at marginal p_x.

        warm maps a table key to a feasible coupling to use as an extra
        start.  With fast=True and warm points covering every feasible
        mapping, only the uniform and warm starts are ascended — the mode
        used on the cheap re-evaluations inside an outer search, where the
        warm point is the optimum of a nearby marginal.  Returns None when
        no mapping can realize the marginal.
        """
        support = p_x > _FEAS_EPS
        feas = np.where((self.covers | ~support[None, :]).all(axis=1))[0]
        if feas.size == 0:
            return None
        scale = p_x[self.cell_x[feas]]
        warm_rows = None
        covered = 0
        if warm:
            warm_rows = self.unif_patterns[feas] * scale
            for i, m in enumerate(feas):
                point = warm.get(self.tables[m].key())
                if point is not None:
                    warm_rows[i] = point
                    covered += 1
        fast_path = fast and covered == feas.size
        starts = [self.unif_patterns[feas] * scale]
        if not fast_path:
            n_rand = self.rand_patterns.shape[1]
            starts.extend(self.rand_patterns[feas, k] * scale
                          for k in range(n_rand))
        if warm_rows is not None:
            starts.append(warm_rows)
        s0 = np.stack(starts, axis=1)
        ftol = max(self.ftol, 1e-10) if fast_path else self.ftol
        targets = np.tile(p_x, (feas.size, 1))
        vals, pts, iters = optimize.ascend_mapping_batch(
            s0, self.cell_u, self.cell_v, self.cell_x[feas],
            self.cell_x[feas], targets, self.ch.q_y, self.ch.q_z,
            self.nu, self.nv, alpha=self.alpha,
            max_iters=self.max_iters, ftol=ftol,
        )
        best_per_map = vals.max(axis=1)
        order = np.argsort(-best_per_map)
        top = best_per_map[order[0]]
        pick = order[0]
        for idx in order:
            if best_per_map[idx] < top - _TIE_EPS:
                break
            if self.tables[feas[idx]].key() < self.tables[feas[pick]].key():
                pick = idx
        k_star = int(vals[pick].argmax())
        return {
            "value": float(vals[pick, k_star]),
            "table": self.tables[feas[pick]],
            "point": pts[pick, k_star].copy(),
            "per_map": {self.tables[m].key(): (float(vals[i].max()),
                                               pts[i, vals[i].argmax()].copy())
                        for i, m in enumerate(feas)},
            "iters": int(iters.sum()),
        }


def _default_sizes(ch, filters):
    nx = ch.x_size
    if filters == "on":
        return min(nx, ch.y_size), min(nx, ch.z_size)
    return nx, nx


def inner_T(p_x, ch, u_size=None, v_size=None, filters="on", quotient=False,
            starts=8, max_iters=400, ftol=1e-11, seed=0, condition_tol=1e-3,
            compute_conditions=True, warm=None, alpha=1.0):
    """Maximize I(U;Y) + alpha I(V;Z) - I(U;V) at a fixed input marginal.

    X is a deterministic function of (U,V); with filters "on" only
    profile-extremal mapping tables are searched and the coupling
    cardinalities default to |U| = min(|X|,|Y|), |V| = min(|X|,|Z|)
    (pass u_size/v_size explicitly to widen to |X|).  Ties across
    mappings resolve to the lexicographically smallest table.
    """
    p_x = _validate_px(p_x, ch.x_size)
    mode = "on" if filters == "on" else "off"
    nu_def, nv_def = _default_sizes(ch, mode)
    nu = int(u_size) if u_size else nu_def
    nv = int(v_size) if v_size else nv_def
    solver = _InnerSolver(ch, nu, nv, mode=mode, quotient=quotient, seed=seed,
                          starts=starts, max_iters=max_iters, ftol=ftol,
                          alpha=alpha)
    out = solver.solve(p_x, warm=dict(warm) if warm else None)
    fallback = False
    if out is None and mode == "on":
        solver = _InnerSolver(ch, nu, nv, mode="off", quotient=quotient,
                              seed=seed, starts=starts, max_iters=max_iters,
                              ftol=ftol, alpha=alpha)
        out = solver.solve(p_x, warm=dict(warm) if warm else None)
        fallback = True
    if out is None:
        raise NumericalError(
            "no mapping table can realize the requested input marginal",
            diagnostics={"p_x": p_x.tolist()},
        )
    s = out["point"].reshape(nu, nv)
    result = InnerTResult(
        value=out["value"],
        mapping=out["table"],
        joint=JointTable(np.clip(s, 0.0, None) / max(s.sum(), 1e-300)),
        p_x=p_x,
        diagnostics={
            "feasible_mappings": len(out["per_map"]),
            "unfiltered_fallback": fallback,
            "ascent_iterations": out["iters"],
        },
    )
    resid = result.induced_marginal_residual()
    result.diagnostics["induced_marginal_residual"] = resid
    if resid > 1e-6:
        raise NumericalError(
            "inner ascent violated the input-marginal constraint",
            residual=resid,
        )
    if compute_conditions:
        uvx = result.joint_uvx()
        result.conditions = {
            "support_positivity": mappings_mod.check_support_positivity(uvx, ch),
            "stationarity": mappings_mod.check_stationarity(
                uvx, result.mapping, ch, tol=condition_tol
            ),
        }
        if filters == "report":
            result.diagnostics["winner_admissible"] = \
                mappings_mod.is_profile_extremal(result.mapping)
    return result


def _effective_channel(ch, opts):
    if opts.filters == "on" and not ch.strictly_positive():
        return channel_mod.smooth(ch, AUTO_SMOOTH_DELTA), AUTO_SMOOTH_DELTA
    return ch, 0.0


def _structured_wx_starts(nw, nx, extras):
    starts = []
    diag = np.zeros((nw, nx))
    for x in range(nx):
        diag[x % nw, x] = 1.0 / nx
    starts.append(diag.ravel())
    const = np.zeros((nw, nx))
    const[0] = 1.0 / nx
    starts.append(const.ravel())
    for p in extras:
        arr = np.asarray(p, dtype=np.float64).ravel()
        if arr.size == nw * nx:
            starts.append(arr)
    return starts


def _witness_from_point(r_flat, lam, work_ch, opts, delta_used, solver_seed,
                        warm=None):
    """Assemble a SumRateWitness at p(w,x), re-solving each live W-symbol
    tightly and running the optimality-condition checks (with re-seeding
    on failure; persistent failures end up in the diagnostics)."""
    nx = work_ch.x_size
    nw = r_flat.size // nx
    r = np.clip(r_flat.reshape(nw, nx), 0.0, None)
    r = r / r.sum()
    i_wy, i_wz = _channel_mis(r, work_ch)
    nu, nv = _default_sizes(work_ch, "on" if opts.filters == "on" else "off")
    per_w = []
    failures = []
    for w in range(nw):
        p_w = float(r[w].sum())
        if p_w <= _LIVE_W:
            continue
        p_xw = r[w] / p_w
        warm_w = warm.get(w) if warm else None
        best = None
        for attempt in range(1 + max(opts.reseed_attempts, 0)):
            res = inner_T(
                p_xw, work_ch, u_size=nu, v_size=nv,
                filters=opts.filters, quotient=False,
                starts=opts.inner_starts + 2 + 4 * attempt,
                max_iters=2 * opts.inner_iters,
                ftol=min(opts.inner_ftol, 1e-12),
                seed=opts.seed + 1009 * attempt,
                condition_tol=opts.condition_tol,
                compute_conditions=True,
                warm=warm_w,
            )
            ok = all(rep.passed for rep in res.conditions.values())
            if best is None or res.value > best[0].value + 1e-12 or \
                    (ok and not best[1] and res.value >= best[0].value - 1e-9):
                best = (res, ok)
            if best[1]:
                break
        res, ok = best
        if not ok:
            failures.append(w)
        if opts.less_noisy_samples:
            uvxyz = np.einsum(
                "uvx,xy,xz->uvxyz", res.joint_uvx(), work_ch.q_y, work_ch.q_z
            )
            res.conditions["less_noisy_y"] = mappings_mod.check_less_noisy(
                uvxyz, side="y", samples=opts.less_noisy_samples,
                seed=opts.seed,
            )
            res.conditions["less_noisy_z"] = mappings_mod.check_less_noisy(
                uvxyz, side="z", samples=opts.less_noisy_samples,
                seed=opts.seed,
            )
        per_w.append(PerW(w=w, p_w=p_w, inner=res))
    t_term = sum(e.p_w * e.inner.value for e in per_w)
    witness = SumRateWitness(
        value=lam * i_wy + (1.0 - lam) * i_wz + t_term,
        lambda_star=lam,
        p_wx=JointTable(r),
        per_w=per_w,
        i_wy=i_wy,
        i_wz=i_wz,
        t_term=t_term,
        delta_smoothing_used=delta_used,
        diagnostics={"condition_failures": failures},
    )
    return witness


def t_lambda(ch, lam, opts=None):
    """Maximize lam I(W;Y) + (1-lam) I(W;Z) + sum_w p(w) T(p(x|w)).

    |W| = |X| suffices for this linearized problem and is what the outer
    ascent uses.  Returns a SumRateWitness whose value reconstructs from
    its own parts; auto-smooths the channel by 1e-6 when filters are on
    and the channel has zero entries (recorded in the witness).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    opts = opts or SearchOptions()
    work_ch, delta_used = _effective_channel(ch, opts)
    nx = work_ch.x_size
    nw = nx
    nu, nv = _default_sizes(work_ch, "on" if opts.filters == "on" else "off")
    solver = _InnerSolver(
        work_ch, nu, nv, mode="on" if opts.filters == "on" else "off",
        quotient=opts.quotient, seed=opts.seed, starts=opts.inner_starts,
        max_iters=opts.inner_iters, ftol=opts.inner_ftol,
    )
    warm = {}

    def t_value(p_xw, w):
        out = solver.solve(p_xw, warm=warm.get(w), fast=True)
        if out is None:
            return 0.0
        warm[w] = {k: v[1] for k, v in out["per_map"].items()}
        return out["value"]

    def objective(r_flat):
        r = np.clip(r_flat.reshape(nw, nx), 0.0, None)
        i_wy, i_wz = _channel_mis(r, work_ch)
        total = lam * i_wy + (1.0 - lam) * i_wz
        for w in range(nw):
            p_w = r[w].sum()
            if p_w > _LIVE_W:
                total += p_w * t_value(r[w] / p_w, w)
        return total

    feasible = optimize.BlockSimplex.simplex(nw * nx)
    config = optimize.AscentConfig(
        starts=opts.outer_starts, max_iters=opts.outer_iters,
        ftol=opts.outer_ftol, seed=opts.seed, fd_step=opts.fd_step,
    )
    extras = _structured_wx_starts(nw, nx, opts.extra_outer_starts)
    res = optimize.maximize(objective, feasible, config, extra_starts=extras)
    witness = _witness_from_point(
        res.point, lam, work_ch, opts, delta_used, opts.seed, warm=warm
    )
    witness.diagnostics["outer"] = res.diagnostics
    if opts.filters == "report":
        witness.diagnostics["filters_report"] = [
            {
                "w": e.w,
                "mapping": e.inner.mapping.cells.tolist(),
                "admissible": mappings_mod.is_profile_extremal(e.inner.mapping),
            }
            for e in witness.per_w
        ]
    return witness


def _envelope_argmin(witnesses):
    """Exact minimizer over [0,1] of the max of the witnesses' affine lines."""
    if not witnesses:
        return 0.5
    lines = [(w.i_wy - w.i_wz, w.i_wz + w.t_term) for w in witnesses]

    def env(lam):
        return max(s * lam + b for s, b in lines)

    cands = {0.0, 1.0}
    for (s1, b1), (s2, b2) in itertools.combinations(lines, 2):
        if abs(s1 - s2) > 1e-12:
            lam = (b2 - b1) / (s1 - s2)
            if 0.0 < lam < 1.0:
                cands.add(float(lam))
    return min(cands, key=env)


def marton_sum_rate(ch, opts=None):
    """min over lambda of t_lambda, by golden section plus envelope refinement.

    Every evaluated witness contributes an exact affine lower line in
    lambda; later evaluations reuse earlier winners both as ascent starts
    and through those lines, which keeps the evaluated profile convex and
    tightens the minimum.  Endpoints lambda = 0, 1 are always evaluated.
    Returns (value, lambda_star, witness).
    """
    opts = opts or SearchOptions()
    pool = []
    evals = {}

    def run(lam, boost=0):
        extras = []
        if pool:
            extras.append(pool[-1].p_wx.probs.ravel())
            best_w = max(pool, key=lambda w: w.affine_value(lam))
            extras.append(best_w.p_wx.probs.ravel())
        local = replace(
            opts,
            extra_outer_starts=tuple(extras) + tuple(opts.extra_outer_starts),
            outer_starts=opts.outer_starts + boost,
        )
        w = t_lambda(ch, lam, local)
        for prev in pool:
            if prev.affine_value(lam) > w.value:
                w = prev.rebased(lam)
        pool.append(w)
        evals[lam] = w
        return w.value

    optimize.golden_section_min(run, tol=opts.golden_tol)
    lam_hat = _envelope_argmin(pool)
    if not any(abs(lam_hat - lam) < 1e-12 for lam in evals):
        run(lam_hat)
    lam_best = min(evals, key=lambda lam: (evals[lam].value, lam))
    run(lam_best, boost=4)
    lam_best = min(evals, key=lambda lam: (evals[lam].value, lam))
    witness = evals[lam_best]
    return witness.value, lam_best, witness


def marton_sum_rate_direct(ch, opts=None):
    """Ascend min{I(W;Y), I(W;Z)} + sum_w p(w) T(p(x|w)) over p(w,x).

    |W| = |X| + 1.  The min-form objective is evaluated directly, so the
    finite-difference gradient is automatically the active branch's.
    Returns (value, witness); the witness's lambda_star is the indicator
    of the active branch (1 when I(W;Y) attains the min).
    """
    opts = opts or SearchOptions()
    work_ch, delta_used = _effective_channel(ch, opts)
    nx = work_ch.x_size
    nw = nx + 1
    nu, nv = _default_sizes(work_ch, "on" if opts.filters == "on" else "off")
    solver = _InnerSolver(
        work_ch, nu, nv, mode="on" if opts.filters == "on" else "off",
        quotient=opts.quotient, seed=opts.seed, starts=opts.inner_starts,
        max_iters=opts.inner_iters, ftol=opts.inner_ftol,
    )
    warm = {}

    def t_value(p_xw, w):
        out = solver.solve(p_xw, warm=warm.get(w), fast=True)
        if out is None:
            return 0.0
        warm[w] = {k: v[1] for k, v in out["per_map"].items()}
        return out["value"]

    def objective(r_flat):
        r = np.clip(r_flat.reshape(nw, nx), 0.0, None)
        i_wy, i_wz = _channel_mis(r, work_ch)
        total = min(i_wy, i_wz)
        for w in range(nw):
            p_w = r[w].sum()
            if p_w > _LIVE_W:
                total += p_w * t_value(r[w] / p_w, w)
        return total

    feasible = optimize.BlockSimplex.simplex(nw * nx)
    config = optimize.AscentConfig(
        starts=opts.outer_starts, max_iters=opts.outer_iters,
        ftol=opts.outer_ftol, seed=opts.seed, fd_step=opts.fd_step,
    )
    padded = []
    for p in opts.extra_outer_starts:
        arr = np.asarray(p, dtype=np.float64).ravel()
        if arr.size == nw * nx:
            padded.append(arr)
        elif arr.size == nx * nx:
            padded.append(np.concatenate([arr, np.zeros(nx)]))
    extras = _structured_wx_starts(nw, nx, padded)
    res = optimize.maximize(objective, feasible, config, extra_starts=extras)
    r = np.clip(res.point.reshape(nw, nx), 0.0, None)
    r /= r.sum()
    i_wy, i_wz = _channel_mis(r, work_ch)
    lam_star = 1.0 if i_wy <= i_wz else 0.0
    witness = _witness_from_point(
        res.point, lam_star, work_ch, opts, delta_used, opts.seed, warm=warm
    )
    witness.diagnostics["outer"] = res.diagnostics
    return witness.value, witness


def t_lambda_sweep(ch, lambdas, opts=None):
    """Evaluate t_lambda on a grid with two-pass witness sharing.

    Pass one chains winners forward as ascent starts; pass two rebases
    every grid point on the full witness pool, so the reported values are
    a pointwise maximum of exact affine lines plus each point's own
    ascent, which restores the convexity the pointwise-max structure
    guarantees mathematically.
    """
    opts = opts or SearchOptions()
    lambdas = [float(l) for l in lambdas]
    pool = []
    results = []
    for lam in lambdas:
        extras = [w.p_wx.probs.ravel() for w in pool[-2:]]
        local = replace(
            opts, extra_outer_starts=tuple(extras) + tuple(opts.extra_outer_starts)
        )
        w = t_lambda(ch, lam, local)
        pool.append(w)
        results.append(w)
    final = []
    for lam, own in zip(lambdas, results):
        best = own
        for w in pool:
            if w.affine_value(lam) > best.affine_value(lam):
                best = w
        final.append(best.rebased(lam) if best is not own else own)
    return final


def binary_inequality_check(ch, p_x, starts=8, seed=0):
    """Test I(U;Y)+I(V;Z)-I(U;V) <= max{I(X;Y), I(X;Z)} at fixed p(x).

    Binary input only; the left side is the unrestricted search over all
    16 mapping tables with |U| = |V| = 2.  Equality is expected, so the
    report passes iff slack = rhs - lhs is >= -1e-4 and |slack| <= 1e-3.
    """
    if ch.x_size != 2:
        raise ValueError("binary_inequality_check needs |X| = 2")
    p_x = _validate_px(p_x, 2)
    res = inner_T(p_x, ch, u_size=2, v_size=2, filters="off",
                  starts=starts, seed=seed, compute_conditions=False)
    joint_xy = p_x[:, None] * ch.q_y
    joint_xz = p_x[:, None] * ch.q_z
    rhs = max(_mi2(joint_xy), _mi2(joint_xz))
    slack = rhs - res.value
    return {
        "lhs": float(res.value),
        "rhs": float(rhs),
        "slack": float(slack),
        "passed": bool(slack >= -1e-4 and abs(slack) <= 1e-3),
        "mapping": res.mapping.cells.tolist(),
    }


def weighted_no_w_max(ch, alpha, starts=16, max_iters=600, ftol=1e-12, seed=0):
    """Maximize I(U;Y) + alpha I(V;Z) - I(U;V) with a free input marginal.

    Searches every mapping table with |U| = |V| = |X| (no profile filter:
    this is the full space) and reports the winner's structure: whether X
    is a relabeling of V on the support and whether U carries anything.
    """
    nx = ch.x_size
    solver = _InnerSolver(ch, nx, nx, mode="off", quotient=False, seed=seed,
                          starts=starts, max_iters=max_iters, ftol=ftol,
                          alpha=alpha)
    n_cells = nx * nx
    free_blocks = np.zeros_like(solver.cell_x)
    targets = np.ones((len(solver.tables), 1))
    rng = np.random.default_rng(seed)
    s0 = np.empty((len(solver.tables), starts, n_cells))
    s0[:, 0, :] = 1.0 / n_cells
    draws = rng.dirichlet(np.ones(n_cells), size=starts - 1)
    s0[:, 1:, :] = draws[None, :, :]
    vals, pts, _ = optimize.ascend_mapping_batch(
        s0, solver.cell_u, solver.cell_v, solver.cell_x, free_blocks,
        targets, ch.q_y, ch.q_z, nx, nx, alpha=alpha,
        max_iters=max_iters, ftol=ftol,
    )
    best_per_map = vals.max(axis=1)
    pick = int(best_per_map.argmax())
    for idx in range(len(solver.tables)):
        if best_per_map[idx] >= best_per_map[pick] - _TIE_EPS and \
                solver.tables[idx].key() < solver.tables[pick].key():
            pick = idx
    k_star = int(vals[pick].argmax())
    s = np.clip(pts[pick, k_star].reshape(nx, nx), 0.0, None)
    s /= s.sum()
    table = solver.tables[pick]
    p_u = s.sum(axis=1)
    p_v = s.sum(axis=0)
    live_u = np.where(p_u > 1e-6)[0]
    live_v = np.where(p_v > 1e-6)[0]
    # does x = sigma(v) hold on the support for an injective sigma?
    sigma = {}
    x_equals_v = True
    for v in live_v:
        symbols = {int(table.cells[u, v]) for u in live_u}
        if len(symbols) != 1:
            x_equals_v = False
            break
        sigma[int(v)] = symbols.pop()
    if x_equals_v and len(set(sigma.values())) != len(sigma):
        x_equals_v = False
    p_uy = np.zeros((nx, ch.y_size))
    for u in range(nx):
        for v in range(nx):
            p_uy[u] += s[u, v] * ch.q_y[table.cells[u, v]]
    i_uy = _mi2(p_uy)
    i_uv = _mi2(s)
    u_constant = live_u.size == 1
    u_degenerate = bool(u_constant or (i_uy <= 1e-5 and i_uv <= 1e-5))
    return {
        "value": float(best_per_map[pick]),
        "mapping": table,
        "joint": JointTable(s),
        "x_equals_v": bool(x_equals_v),
        "u_constant": bool(u_constant),
        "u_degenerate": u_degenerate,
        "i_uy": float(i_uy),
        "i_uv": float(i_uv),
    }


CLAIM1_ALPHA = 2.4
CLAIM1_PVX = np.array([[0.0, 0.41], [0.48, 0.11]])  # rows v, columns x


def claim1_parts(ch=None, alpha=CLAIM1_ALPHA, seed=0):
    """The two sides of the dependence-helps comparison on the built-in
    degraded channel: (a) evaluates I(X;Y|V) + alpha I(V;Z) at a pinned
    p(v,x); (b) maximizes I(U;Y) + alpha I(V;Z) - I(U;V) over the no-W
    space.  Dependence between the cloud center and the satellite is
    doing real work exactly when (a) exceeds (b)."""
    from . import probkit

    ch = ch or channel_mod.load_channel("claim1")
    p_vx = CLAIM1_PVX
    joint_vxy = np.einsum("vx,xy->vxy", p_vx, ch.q_y)
    i_xy_given_v = probkit.grouped_conditional_mi(joint_vxy, (1,), (2,), (0,))
    p_vz = p_vx @ ch.q_z
    i_vz = _mi2(p_vz)
    part_a = i_xy_given_v + alpha * i_vz
    best = weighted_no_w_max(ch, alpha, seed=seed)
    return {
        "part_a": float(part_a),
        "part_a_terms": {"i_xy_given_v": float(i_xy_given_v),
                         "i_vz": float(i_vz)},
        "part_b": float(best["value"]),
        "part_b_witness": best,
        "separation": float(part_a - best["value"]),
    }
