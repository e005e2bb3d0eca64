"""Projected-gradient machinery used by every maximization in the package.

Feasible sets are products of scaled simplices described by BlockSimplex:
cells are partitioned into blocks and each block's weights must be
nonnegative with a fixed sum.  The plain probability simplex is the
single-block special case.  Euclidean projection onto such a set splits
into independent per-block sort-and-threshold projections, so it is exact
(no inner fixed-point iteration is needed).

maximize() is a multi-start projected gradient ascent with backtracking
line search; gradients are forward finite differences (reusing the current
objective value) unless an analytic gradient is supplied.
ascend_mapping_batch() is the specialized fast path for the information
objective on mapping cells (see _kernels).
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NumericalError

logger = logging.getLogger("martonkit.optimize")

_LINESEARCH_EPS = 1e-15
_STEP_CAP = 1e6


def project_to_simplex(v):
    """Euclidean projection of a vector onto the probability simplex."""
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("cannot project an empty vector")
    u = -np.sort(-v)
    css = np.cumsum(u) - 1.0
    j = np.arange(1, v.size + 1)
    k = np.count_nonzero(u - css / j > 0.0)
    k = max(k, 1)
    tau = css[k - 1] / k
    return np.maximum(v - tau, 0.0)


class BlockSimplex:
    """Product of scaled simplices: per-block nonnegativity + fixed sums."""

    __slots__ = ("block_id", "targets", "n_blocks")

    def __init__(self, block_id, targets):
        self.block_id = np.asarray(block_id, dtype=np.int64).ravel()
        self.targets = np.asarray(targets, dtype=np.float64).ravel()
        self.n_blocks = self.targets.size
        if self.block_id.size == 0:
            raise ValueError("empty feasible set")
        if self.block_id.min() < 0 or self.block_id.max() >= self.n_blocks:
            raise ValueError("block ids out of range")
        if self.targets.min() < -1e-12:
            raise ValueError("block targets must be nonnegative")
        present = np.bincount(self.block_id, minlength=self.n_blocks) > 0
        missing = (~present) & (self.targets > 1e-12)
        if missing.any():
            raise ValueError(
                f"blocks {np.where(missing)[0].tolist()} have positive targets "
                "but no cells"
            )

    @classmethod
    def simplex(cls, n):
        return cls(np.zeros(n, dtype=np.int64), np.array([1.0]))

    @property
    def dim(self):
        return self.block_id.size

    def project(self, v):
        v = np.ascontiguousarray(v, dtype=np.float64)
        return np.asarray(_kernels.project_blocks(
            v, self.block_id, self.n_blocks, self.targets
        ))

    def uniform(self):
        out = np.zeros(self.dim)
        for b in range(self.n_blocks):
            cols = self.block_id == b
            cnt = cols.sum()
            if cnt:
                out[cols] = self.targets[b] / cnt
        return out

    def sample(self, rng):
        out = np.zeros(self.dim)
        for b in range(self.n_blocks):
            cols = self.block_id == b
            cnt = int(cols.sum())
            if cnt:
                out[cols] = rng.dirichlet(np.ones(cnt)) * self.targets[b]
        return out


@dataclass
class AscentConfig:
    starts: int = 32
    max_iters: int = 2000
    ftol: float = 1e-7
    seed: int = 0
    fd_step: float = 1e-6
    max_backtracks: int = 40


@dataclass
class AscentResult:
    point: np.ndarray
    value: float
    diagnostics: dict = field(default_factory=dict)


def _fd_gradient(objective, x, h, f0=None):
    # forward differences reusing the already-known base value: the ascent
    # only needs descent-quality directions, and this halves the evals
    if f0 is None:
        f0 = objective(x)
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        g[i] = (objective(x + e) - f0) / h
    return g


def _ascend_from(objective, grad_fn, feasible, x0, config):
    x = feasible.project(np.asarray(x0, dtype=np.float64))
    f = objective(x)
    if not np.isfinite(f):
        return None
    step = 0.5
    iters = 0
    while iters < config.max_iters:
        g = grad_fn(objective, x, config.fd_step, f) if grad_fn is _fd_gradient \
            else grad_fn(x)
        t = min(step * 2.0, _STEP_CAP)
        accepted = False
        for _ in range(config.max_backtracks):
            cand = feasible.project(x + t * g)
            fc = objective(cand)
            if np.isfinite(fc) and fc > f + _LINESEARCH_EPS:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        gain = fc - f
        x, f, step = cand, fc, t
        iters += 1
        if gain < config.ftol:
            break
    return x, f, iters


def maximize(objective, feasible, config=None, grad=None, extra_starts=()):
    """Multi-start projected gradient ascent over a BlockSimplex.

    Returns the best point found across starts; deterministic for a fixed
    config.seed.  Starts are the feasible set's uniform center, the caller
    supplied extra_starts, and Dirichlet(1) samples up to config.starts.
    Raises NumericalError when every start fails to produce a finite
    objective value.
    """
    config = config or AscentConfig()
    rng = np.random.default_rng(config.seed)
    starts = [feasible.uniform()]
    starts.extend(np.asarray(p, dtype=np.float64) for p in extra_starts)
    while len(starts) < max(config.starts, len(starts)):
        starts.append(feasible.sample(rng))
    grad_fn = _fd_gradient if grad is None else grad

    best = None
    per_start = []
    failures = 0
    for x0 in starts:
        out = _ascend_from(objective, grad_fn, feasible, x0, config)
        if out is None:
            failures += 1
            per_start.append({"value": None, "iters": 0})
            continue
        x, f, iters = out
        per_start.append({"value": float(f), "iters": iters})
        if best is None or f > best[1]:
            best = (x, f)
    if best is None:
        raise NumericalError(
            "every ascent start produced a non-finite objective",
            diagnostics={"starts": len(starts), "failures": failures},
        )
    return AscentResult(
        point=best[0],
        value=float(best[1]),
        diagnostics={
            "starts": len(starts),
            "failures": failures,
            "per_start": per_start,
        },
    )


def ascend_mapping_batch(s0, cell_u, cell_v, cell_x_maps, block_id_maps,
                         targets_maps, q_y, q_z, nu, nv, alpha=1.0,
                         max_iters=400, ftol=1e-11, max_backtracks=40):
    """Projected ascent of I(U;Y) + alpha I(V;Z) - I(U;V) on mapping cells.

    Shapes: s0 (maps, starts, cells); cell_x_maps/block_id_maps
    (maps, cells); targets_maps (maps, blocks).  Returns per-(map, start)
    best values, points and iteration counts.
    """
    vals, pts, iters = _kernels.ascend_batch(
        np.ascontiguousarray(s0, dtype=np.float64),
        np.ascontiguousarray(cell_u, dtype=np.int64),
        np.ascontiguousarray(cell_v, dtype=np.int64),
        np.ascontiguousarray(cell_x_maps, dtype=np.int64),
        np.ascontiguousarray(block_id_maps, dtype=np.int64),
        np.ascontiguousarray(targets_maps, dtype=np.float64),
        np.ascontiguousarray(q_y, dtype=np.float64),
        np.ascontiguousarray(q_z, dtype=np.float64),
        nu, nv, float(alpha), max_iters, ftol, max_backtracks,
    )
    return np.asarray(vals), np.asarray(pts), np.asarray(iters)


def golden_section_min(f, tol=1e-3, lo=0.0, hi=1.0, convexity_slack=1e-6):
    """Golden-section minimization on [lo, hi] for a convex-ish function.

    Both endpoints are always evaluated and participate in the returned
    minimum.  After the search, consecutive evaluated triples are probed
    for midpoint-convexity violations, which are logged as warnings (the
    search still returns the best point seen).
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    cache = {}

    def ev(x):
        if x not in cache:
            cache[x] = float(f(x))
        return cache[x]

    ev(lo)
    ev(hi)
    a, b = lo, hi
    c = b - (b - a) * invphi
    d = a + (b - a) * invphi
    fc, fd = ev(c), ev(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * invphi
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * invphi
            fd = ev(d)

    xs = sorted(cache)
    for x1, x2, x3 in zip(xs, xs[1:], xs[2:]):
        w = (x2 - x1) / (x3 - x1)
        interp = (1.0 - w) * cache[x1] + w * cache[x3]
        if cache[x2] > interp + convexity_slack:
            logger.warning(
                "convexity probe violated at %g: f=%g vs chord %g",
                x2, cache[x2], interp,
            )
    x_best = min(cache, key=lambda x: (cache[x], x))
    return x_best, cache[x_best]


def gradient_check(objective, grad, x, h=1e-6):
    """Max relative disagreement between analytic and central FD gradient.

    The ascent loop itself uses the cheaper forward difference; this
    diagnostic recomputes with a central stencil so its own error is
    O(h^2) and does not mask a wrong analytic gradient.
    """
    x = np.asarray(x, dtype=np.float64)
    g_an = np.asarray(grad(x), dtype=np.float64)
    g_fd = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g_fd[i] = (objective(x + e) - objective(x - e)) / (2.0 * h)
    scale = max(float(np.abs(g_an).max(initial=0.0)), 1e-8)
    return float(np.abs(g_an - g_fd).max(initial=0.0)) / scale
