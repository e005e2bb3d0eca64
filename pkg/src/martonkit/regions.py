"""Region geometry: directional supports and the two-letter bounds.

For a fixed joint p(u,v,w,x) the rate region is the polyhedron

    R0 + R1      <= I(UW;Y)
    R0 + R2      <= I(VW;Z)
    R0 + R1 + R2 <= I(UW;Y) + I(V;Z|W) - I(U;V|W)
    R0 + R1 + R2 <= I(U;Y|W) + I(VW;Z) - I(U;V|W)
    2R0 + R1 + R2 <= I(UW;Y) + I(VW;Z) - I(U;V|W)

intersected with the nonnegative orthant.  Directional supports maximize
a weighted rate over that polyhedron (an LP solved exactly by vertex
enumeration) and then over the joint by multi-start projected ascent.
The degraded-message-set regions play the same game in two rate
coordinates, and the two-letter evaluator builds the dense two-copy
joints of the stationary achievable region and reads the five bounds off
exact entropy sums.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from . import optimize
from .errors import ResourceLimitError
from .probkit import (JointTable, _entropy_raw, grouped_conditional_mi,
                      grouped_mutual_information)
from .sumrate import _channel_mis, _mi2

TWO_LETTER_CAP = 5 * 10**6
_EMPTY_PENALTY_SLOPE = 1.0


@dataclass(frozen=True)
class RateTriple:
    r0: float
    r1: float
    r2: float

    def __post_init__(self):
        for name in ("r0", "r1", "r2"):
            v = getattr(self, name)
            if v < -1e-9:
                raise ValueError(f"{name} must be nonnegative, got {v}")
            object.__setattr__(self, name, max(float(v), 0.0))

    def as_array(self):
        return np.array([self.r0, self.r1, self.r2])


@dataclass(frozen=True)
class Direction:
    """Nonnegative rate weights, normalized so the largest equals 1."""

    l0: float
    l1: float
    l2: float

    def __post_init__(self):
        vals = np.array([self.l0, self.l1, self.l2], dtype=np.float64)
        if (vals < 0).any() or not np.isfinite(vals).all():
            raise ValueError("direction weights must be finite and nonnegative")
        top = vals.max()
        if top <= 0:
            raise ValueError("direction must have a positive component")
        vals = vals / top
        object.__setattr__(self, "l0", float(vals[0]))
        object.__setattr__(self, "l1", float(vals[1]))
        object.__setattr__(self, "l2", float(vals[2]))

    def as_array(self):
        return np.array([self.l0, self.l1, self.l2])


def _weights(d, n):
    """Raw weight vector from a Direction or a plain sequence (unscaled,
    so support functions stay scale-equivariant for raw input)."""
    if isinstance(d, Direction):
        arr = d.as_array()[:n]
    else:
        arr = np.asarray(d, dtype=np.float64).ravel()
    if arr.size != n:
        raise ValueError(f"direction needs {n} components, got {arr.size}")
    if (arr < 0).any() or not np.isfinite(arr).all() or arr.max() <= 0:
        raise ValueError("direction weights must be nonnegative, finite, "
                         "and not all zero")
    return arr


class PolyhedralSupport:
    """max d.r over {r >= 0, rows @ r <= caps}, by vertex enumeration.

    The constraint geometry is fixed at construction, so every candidate
    basis inverse is precomputed; a support query is a batched solve plus
    a feasibility mask.  Returns None when the region is empty (some cap
    negative), which the outer ascent turns into a penalty.
    """

    def __init__(self, rows):
        self.rows = np.asarray(rows, dtype=np.float64)
        m, n = self.rows.shape
        full = np.vstack([self.rows, -np.eye(n)])
        combos = list(itertools.combinations(range(m + n), n))
        mats = np.stack([full[list(c)] for c in combos])
        dets = np.linalg.det(mats)
        keep = np.abs(dets) > 1e-12
        self.combos = np.array(list(itertools.compress(combos, keep)))
        self.invs = np.linalg.inv(mats[keep])
        self.n = n

    def support(self, caps, weights):
        caps = np.asarray(caps, dtype=np.float64)
        rhs = np.concatenate([caps, np.zeros(self.n)])[self.combos]
        verts = np.einsum("kij,kj->ki", self.invs, rhs)
        ok = (self.rows @ verts.T <= caps[:, None] + 1e-9).all(axis=0)
        ok &= (verts >= -1e-9).all(axis=1)
        if not ok.any():
            return None
        verts = verts[ok]
        vals = verts @ np.asarray(weights, dtype=np.float64)
        i = int(vals.argmax())
        return float(vals[i]), np.clip(verts[i], 0.0, None)


_MARTON_ROWS = np.array([
    [1.0, 1.0, 0.0],
    [1.0, 0.0, 1.0],
    [1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
    [2.0, 1.0, 1.0],
])
_DEGRADED_ROWS = np.array([
    [1.0, 0.0],
    [0.0, 1.0],
    [1.0, 1.0],
])
_MARTON_LP = PolyhedralSupport(_MARTON_ROWS)
_DEGRADED_LP = PolyhedralSupport(_DEGRADED_ROWS)


def marton_caps(p_uvwx, ch):
    """The five rate caps of the region at a joint p(u,v,w,x)."""
    p = np.ascontiguousarray(p_uvwx, dtype=np.float64)
    return np.array(_kernels.marton_caps(p, ch.q_y, ch.q_z))


def _support_at(caps, weights, lp):
    out = lp.support(caps, weights)
    if out is None:
        # empty region: some cap is negative; walk the ascent toward
        # feasibility by scoring the worst violation
        return _EMPTY_PENALTY_SLOPE * float(np.min(caps)), None
    return out


@dataclass
class SupportResult:
    value: float
    witness: JointTable
    rates: RateTriple | None
    diagnostics: dict = field(default_factory=dict)


def marton_support(ch, d, config=None, extra_starts=(), u_size=None,
                   v_size=None, w_size=None):
    """Directional support of the inner-bound region: max d.(R0,R1,R2).

    The joint p(u,v,w,x) ranges over |U| = |V| = |X| and |W| = |X| + 4
    (wider W than the sum-rate searches use, since the full region needs
    the extra convexification room).  Raw weight sequences are used as
    given; Direction instances arrive max-normalized.
    """
    w_vec = _weights(d, 3)
    nx = ch.x_size
    nu = int(u_size) if u_size else nx
    nv = int(v_size) if v_size else nx
    nw = int(w_size) if w_size else nx + 4
    shape = (nu, nv, nw, nx)
    qy, qz = ch.q_y, ch.q_z

    def objective(p_flat):
        p = np.clip(p_flat, 0.0, None).reshape(shape)
        total = p.sum()
        if total <= 0.0:
            return -1.0
        caps = np.array(_kernels.marton_caps(p / total, qy, qz))
        return _support_at(caps, w_vec, _MARTON_LP)[0]

    starts = []
    ux = np.zeros(shape)
    for x in range(nx):
        ux[x % nu, 0, 0, x] = 1.0 / nx
    starts.append(ux.ravel())
    vx = np.zeros(shape)
    for x in range(nx):
        vx[0, x % nv, 0, x] = 1.0 / nx
    starts.append(vx.ravel())
    wx = np.zeros(shape)
    for x in range(nx):
        wx[0, 0, x % nw, x] = 1.0 / nx
    starts.append(wx.ravel())
    for p in extra_starts:
        arr = np.asarray(p, dtype=np.float64).ravel()
        if arr.size == ux.size:
            starts.append(arr)

    config = config or optimize.AscentConfig(starts=10, max_iters=200,
                                             ftol=1e-8)
    feasible = optimize.BlockSimplex.simplex(int(np.prod(shape)))
    res = optimize.maximize(objective, feasible, config, extra_starts=starts)
    p = np.clip(res.point, 0.0, None).reshape(shape)
    p /= p.sum()
    caps = marton_caps(p, ch)
    out = _MARTON_LP.support(caps, w_vec)
    if out is None:
        rates = None
        value = _EMPTY_PENALTY_SLOPE * float(np.min(caps))
    else:
        value, r = out
        rates = RateTriple(*r)
    return SupportResult(
        value=float(value),
        witness=JointTable(p),
        rates=rates,
        diagnostics={"caps": caps.tolist(), "outer": res.diagnostics},
    )


def _degraded_support(ch, weights, swap, config, extra_starts):
    """Shared engine for the two degraded-message-set supports.

    swap=False: cloud W decoded by Y, private rate to Z
    (R0 <= I(W;Y), R2 <= I(X;Z|W), R0+R2 <= I(X;Z)).  swap=True mirrors
    the roles of the receivers.
    """
    nx = ch.x_size
    nw = nx + 1
    q_cloud = ch.q_y if not swap else ch.q_z
    q_priv = ch.q_z if not swap else ch.q_y

    def caps_at(r):
        i_cloud = _mi2(r @ q_cloud)
        joint3 = r[:, :, None] * q_priv[None, :, :]
        i_priv_cond = grouped_conditional_mi(joint3, (1,), (2,), (0,))
        i_priv = _mi2(r.sum(axis=0)[:, None] * q_priv)
        return np.array([i_cloud, i_priv_cond, i_priv])

    def objective(r_flat):
        r = np.clip(r_flat, 0.0, None).reshape(nw, nx)
        total = r.sum()
        if total <= 0.0:
            return -1.0
        return _support_at(caps_at(r / total), weights, _DEGRADED_LP)[0]

    starts = []
    diag = np.zeros((nw, nx))
    for x in range(nx):
        diag[x, x] = 1.0 / nx
    starts.append(diag.ravel())
    const = np.zeros((nw, nx))
    const[0] = 1.0 / nx
    starts.append(const.ravel())
    starts.extend(np.asarray(p, dtype=np.float64).ravel() for p in extra_starts
                  if np.asarray(p).size == nw * nx)

    config = config or optimize.AscentConfig(starts=12, max_iters=300,
                                             ftol=1e-9)
    feasible = optimize.BlockSimplex.simplex(nw * nx)
    res = optimize.maximize(objective, feasible, config, extra_starts=starts)
    r = np.clip(res.point, 0.0, None).reshape(nw, nx)
    r /= r.sum()
    value, rates = _DEGRADED_LP.support(caps_at(r), weights)
    return float(value), JointTable(r), rates


def degraded_support_d1(ch, l0, l2, config=None, extra_starts=()):
    """max l0*R0 + l2*R2 with the cloud decoded by Y and the private
    message decoded by Z; |W| = |X| + 1."""
    if l0 < 0 or l2 < 0:
        raise ValueError("direction weights must be nonnegative")
    value, witness, _ = _degraded_support(ch, np.array([l0, l2]), False,
                                          config, extra_starts)
    return value, witness


def degraded_support_d2(ch, l0, l1, config=None, extra_starts=()):
    """Mirror image of degraded_support_d1 with the receiver roles
    swapped: cloud decoded by Z, private message decoded by Y."""
    if l0 < 0 or l1 < 0:
        raise ValueError("direction weights must be nonnegative")
    value, witness, _ = _degraded_support(ch, np.array([l0, l1]), True,
                                          config, extra_starts)
    return value, witness


def _embed_degraded(r_wx, nu, nv, nw, private_is_v):
    """Lift a degraded witness p(w,x) into the full-region joint: the
    private auxiliary copies X, the other one is constant."""
    nw_d, nx = r_wx.shape
    p = np.zeros((nu, nv, nw, nx))
    for w in range(min(nw_d, nw)):
        for x in range(nx):
            if private_is_v:
                p[0, x % nv, w, x] = r_wx[w, x]
            else:
                p[x % nu, 0, w, x] = r_wx[w, x]
    total = p.sum()
    return p / total if total > 0 else p


def directional_optimality_check(ch, d, tol=2e-3, config=None):
    """Compare the inner-bound support against the degraded-message-set
    supports along a direction with l0 >= l1 + l2 — the regime where the
    two sides must coincide.  The degraded winners are re-embedded as
    ascent starts for the full-region side, so the comparison never fails
    merely because the richer parametrization missed them.
    """
    d = d if isinstance(d, Direction) else Direction(*_weights(d, 3))
    if d.l0 < d.l1 + d.l2 - 1e-12:
        raise ValueError(
            f"directional check needs l0 >= l1 + l2, got "
            f"({d.l0}, {d.l1}, {d.l2})"
        )
    b1, w1 = degraded_support_d1(ch, d.l0, d.l2, config=config)
    b2, w2 = degraded_support_d2(ch, d.l0, d.l1, config=config)
    nx = ch.x_size
    nu = nv = nx
    nw = nx + 4
    embeds = [
        _embed_degraded(w1.probs, nu, nv, nw, private_is_v=True),
        _embed_degraded(w2.probs, nu, nv, nw, private_is_v=False),
    ]
    mart = marton_support(ch, d, config=config,
                          extra_starts=[e.ravel() for e in embeds])
    best_degraded = max(b1, b2)
    gap = mart.value - best_degraded
    return {
        "direction": d.as_array().tolist(),
        "marton": mart.value,
        "d1": b1,
        "d2": b2,
        "best_degraded": best_degraded,
        "gap": float(gap),
        "tol": float(tol),
        "passed": bool(abs(gap) <= tol),
        "marton_rates": None if mart.rates is None else
                        mart.rates.as_array().tolist(),
    }


@dataclass
class TwoLetterInput:
    """A stationary two-copy configuration: the single-copy auxiliary law
    r(u,v,w) plus the kernel p(x | u1,v1,w1, u2,v2,w2) with the first
    copy's triple leading in the axis order."""

    r_uvw: JointTable
    r_x_cond: np.ndarray

    def __post_init__(self):
        if not isinstance(self.r_uvw, JointTable):
            self.r_uvw = JointTable(np.asarray(self.r_uvw, dtype=np.float64))
        if len(self.r_uvw.dims) != 3:
            raise ValueError("r_uvw must be a 3-axis joint over (U, V, W)")
        self.r_x_cond = np.asarray(self.r_x_cond, dtype=np.float64)
        nu, nv, nw = self.r_uvw.dims
        want = (nu, nv, nw, nu, nv, nw)
        if self.r_x_cond.shape[:6] != want:
            raise ValueError(
                f"kernel leading axes {self.r_x_cond.shape[:6]} do not match "
                f"two copies of (U,V,W) = {want}"
            )
        rows = self.r_x_cond.sum(axis=-1)
        if self.r_x_cond.min() < -1e-9 or np.abs(rows - 1.0).max() > 1e-9:
            raise ValueError("kernel rows must be distributions over x")


@dataclass(frozen=True)
class TwoLetterBounds:
    b_01: float
    b_02: float
    b_012a: float
    b_012b: float
    b_0012: float

    def __post_init__(self):
        # the two single-rate caps are mutual informations and cannot go
        # negative; the three combined caps subtract I(U;V|W) and genuinely
        # can, at joints nobody optimized (a negative cap just means the
        # region is empty there)
        for name in ("b_01", "b_02", "b_012a", "b_012b", "b_0012"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} is not finite")
        for name in ("b_01", "b_02"):
            if getattr(self, name) < -1e-9:
                raise ValueError(f"{name} must be nonnegative, got "
                                 f"{getattr(self, name)}")

    def as_array(self):
        return np.array([self.b_01, self.b_02, self.b_012a, self.b_012b,
                         self.b_0012])


def two_letter_bounds(inp, ch):
    """Evaluate the five two-copy rate caps exactly.

    The two-copy joint factorizes as r(t1) r(t2) k(x2|t1,t2) q(y2,z2|x2)
    rbar(x1|t1) q(y1,z1|x1), where rbar averages the kernel over an
    independent copy in the leading slot.  Only Y-side and Z-side
    marginal joints are ever needed (no bound mixes Y and Z), and each is
    a single dense contraction.
    """
    r = inp.r_uvw.probs
    kern = inp.r_x_cond
    nu, nv, nw = r.shape
    ny, nz = ch.y_size, ch.z_size
    cost = kern.size * max(ny, nz)
    if cost > TWO_LETTER_CAP:
        raise ResourceLimitError(
            f"two-letter joint needs ~{cost:.2e} dense entries "
            f"(cap {TWO_LETTER_CAP:.0e})"
        )
    # rbar(x|t) averages over an independent first copy
    rbar = np.einsum("abc,abcuvwx->uvwx", r, kern)

    def side_joint(q, keep_u):
        # dense joint over (aux1, w1, aux2, w2, s1, s2) for one receiver,
        # where aux is U for the Y side and V for the Z side
        a1 = np.einsum("uvwx,xs->uvws", rbar, q)
        a2 = np.einsum("abcuvwx,xs->abcuvws", kern, q)
        spec = "avw,AVW,avws,avwAVWS->" + ("awAWsS" if keep_u else "vwVWsS")
        return np.einsum(spec, r, r, a1, a2, optimize=True)

    joint_y = side_joint(ch.q_y, keep_u=True)
    i_uw_y = grouped_mutual_information(joint_y, (2, 3), (0, 1, 4, 5))
    i_u_y_w = grouped_conditional_mi(joint_y, (2,), (0, 1, 4, 5), (3,))

    joint_z = side_joint(ch.q_z, keep_u=False)
    i_vw_z = grouped_mutual_information(joint_z, (2, 3), (0, 1, 4, 5))
    i_v_z_w = grouped_conditional_mi(joint_z, (2,), (0, 1, 4, 5), (3,))

    i_uv_w = grouped_conditional_mi(r, (0,), (1,), (2,))

    return TwoLetterBounds(
        b_01=i_uw_y,
        b_02=i_vw_z,
        b_012a=i_v_z_w + i_uw_y - i_uv_w,
        b_012b=i_u_y_w + i_vw_z - i_uv_w,
        b_0012=i_uw_y + i_vw_z - i_uv_w,
    )


def lift_markov_kernel(r_x_single, nu, nv, nw):
    """Broadcast a single-copy kernel p(x|u,v,w) into the two-copy kernel
    that ignores the first copy entirely."""
    k = np.asarray(r_x_single, dtype=np.float64)
    if k.shape[:3] != (nu, nv, nw):
        raise ValueError("single-copy kernel axes must be (U, V, W, X)")
    nx = k.shape[-1]
    out = np.broadcast_to(k, (nu, nv, nw, nu, nv, nw, nx))
    return np.ascontiguousarray(out)


def two_letter_reduction_check(r_uvw, r_x_single, ch, tol=1e-9):
    """When the kernel depends only on the second copy, the two-copy
    bounds must collapse to the single-copy rate caps at the same joint;
    checks all five pairs to the stated tolerance."""
    r = r_uvw.probs if isinstance(r_uvw, JointTable) else \
        np.asarray(r_uvw, dtype=np.float64)
    nu, nv, nw = r.shape
    kern = lift_markov_kernel(r_x_single, nu, nv, nw)
    inp = TwoLetterInput(JointTable(r), kern)
    two = two_letter_bounds(inp, ch).as_array()
    p_uvwx = r[:, :, :, None] * np.asarray(r_x_single, dtype=np.float64)
    single = marton_caps(p_uvwx, ch)
    diffs = np.abs(two - single)
    return {
        "two_letter": two.tolist(),
        "single_letter": single.tolist(),
        "max_abs_diff": float(diffs.max()),
        "tol": float(tol),
        "passed": bool(diffs.max() <= tol),
    }
