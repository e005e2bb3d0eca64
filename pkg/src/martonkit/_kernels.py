"""Hot numeric kernels, jit-compiled with numba when possible.

The pure-numpy implementations are the reference semantics.  When numba
imports cleanly and the environment variable ``MARTONKIT_NO_NUMBA`` is not
set to a truthy value, the compiled variants replace them.  Both variants
stay reachable through ``IMPLEMENTATIONS`` so the benchmark script can time
the two paths against each other; ``ACTIVE`` names the one in use.

All logarithms are base 2: every value produced here is in bits.

The central kernel is ``ascend_batch``: multi-start projected gradient
ascent of

    I(U;Y) + alpha*I(V;Z) - I(U;V)

over weights s(u,v) laid out on the cells of a deterministic mapping
(u,v) -> x, subject to per-block sum constraints (a product of scaled
simplices; a single block of sum one is the plain simplex).  The gradient
is analytic:

    d/ds(u,v) = sum_y q(y|x)[log2 p(u,y) - log2 p(y)]
              + alpha * sum_z q(z|x)[log2 p(v,z) - log2 p(z)]
              - log2 s(u,v) - (alpha-1) log2 p(v)   (+ a constant)

where x = t(u,v).  Terms that are constant within a block vanish under the
block-sum-preserving projection, which is what makes the same formula serve
both the fixed-marginal and the free-marginal problems.
"""

import os

import numpy as np

_TINY = 1e-30  # floor inside logs; keeps gradients finite at the boundary
_LINESEARCH_EPS = 1e-15
_STEP_CAP = 1e6
_INV_LN2 = 1.4426950408889634  # 1/ln 2; the entropy-derivative constant

# ---------------------------------------------------------------------------
# pure-numpy reference implementations
# ---------------------------------------------------------------------------


def _entropy_bits_np(p):
    """Shannon entropy in bits of a flat nonnegative array (0 log 0 = 0)."""
    q = p[p > 0.0]
    if q.size == 0:
        return 0.0
    return float(-(q * np.log2(q)).sum())


def _project_scaled_rows(v, target):
    """Project each row of ``v`` onto {w >= 0, sum w = target} (Euclidean)."""
    if target <= 0.0:
        return np.zeros_like(v)
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - target
    j = np.arange(1, v.shape[1] + 1, dtype=np.float64)
    k = np.count_nonzero(u - css / j > 0.0, axis=1)
    k = np.maximum(k, 1)
    tau = css[np.arange(v.shape[0]), k - 1] / k
    return np.maximum(v - tau[:, None], 0.0)


def _project_blocks_np(v, block_id, n_blocks, targets):
    """Project a single flat point onto the product of scaled simplices."""
    out = np.zeros_like(v)
    for b in range(n_blocks):
        cols = block_id == b
        if not cols.any():
            continue
        out[cols] = _project_scaled_rows(v[cols][None, :], targets[b])[0]
    return out


def _batch_marginals(s, cell_u, cell_v, qyc, qzc, nu, nv):
    """Per-row marginals for a batch of cell weights s (rows, cells)."""
    rows = s.shape[0]
    ny = qyc.shape[1]
    nz = qzc.shape[1]
    p_uy = np.zeros((rows, nu, ny))
    p_vz = np.zeros((rows, nv, nz))
    p_u = np.zeros((rows, nu))
    p_v = np.zeros((rows, nv))
    for u in range(nu):
        cols = cell_u == u
        if cols.any():
            p_uy[:, u, :] = s[:, cols] @ qyc[cols]
            p_u[:, u] = s[:, cols].sum(axis=1)
    for v in range(nv):
        cols = cell_v == v
        if cols.any():
            p_vz[:, v, :] = s[:, cols] @ qzc[cols]
            p_v[:, v] = s[:, cols].sum(axis=1)
    return p_uy, p_vz, p_u, p_v


def _batch_entropy(p):
    """Entropy in bits along all axes but the first."""
    flat = p.reshape(p.shape[0], -1)
    terms = np.where(flat > 0.0, flat * np.log2(np.maximum(flat, _TINY)), 0.0)
    return -terms.sum(axis=1)


def _batch_objective_np(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha):
    p_uy, p_vz, p_u, p_v = _batch_marginals(s, cell_u, cell_v, qyc, qzc, nu, nv)
    p_y = p_uy.sum(axis=1)
    p_z = p_vz.sum(axis=1)
    h_u = _batch_entropy(p_u)
    h_v = _batch_entropy(p_v)
    i_uy = h_u + _batch_entropy(p_y) - _batch_entropy(p_uy)
    i_vz = h_v + _batch_entropy(p_z) - _batch_entropy(p_vz)
    i_uv = h_u + h_v - _batch_entropy(s)
    return i_uy + alpha * i_vz - i_uv


def _batch_gradient_np(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha):
    p_uy, p_vz, p_u, p_v = _batch_marginals(s, cell_u, cell_v, qyc, qzc, nu, nv)
    p_y = p_uy.sum(axis=1)
    p_z = p_vz.sum(axis=1)
    luy = np.log2(np.maximum(p_uy, _TINY))
    ly = np.log2(np.maximum(p_y, _TINY))
    lvz = np.log2(np.maximum(p_vz, _TINY))
    lz = np.log2(np.maximum(p_z, _TINY))
    lv = np.log2(np.maximum(p_v, _TINY))
    g = np.einsum("rcy,cy->rc", luy[:, cell_u, :] - ly[:, None, :], qyc)
    g += alpha * np.einsum("rcz,cz->rc", lvz[:, cell_v, :] - lz[:, None, :], qzc)
    g -= np.log2(np.maximum(s, _TINY))
    g -= (alpha - 1.0) * lv[:, cell_v]
    # the entropy-derivative constants collapse to a single -alpha/ln2 term;
    # projection would absorb it, but keeping it makes this the exact
    # Euclidean gradient (finite differences of the objective match it)
    g -= alpha * _INV_LN2
    return g


def _project_batch_np(s, block_id, n_blocks, targets):
    out = np.zeros_like(s)
    for b in range(n_blocks):
        cols = block_id == b
        if cols.any():
            out[:, cols] = _project_scaled_rows(s[:, cols], targets[b])
    return out


def _ascend_starts_np(s0, cell_u, cell_v, block_id, n_blocks, targets,
                      qyc, qzc, nu, nv, alpha, max_iters, ftol, max_bt):
    """Projected gradient ascent, vectorized across the start rows."""
    s = _project_batch_np(s0, block_id, n_blocks, targets)
    f = _batch_objective_np(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha)
    rows = s.shape[0]
    step = np.full(rows, 0.5)
    active = np.ones(rows, dtype=bool)
    iters = np.zeros(rows, dtype=np.int64)
    for _ in range(max_iters):
        if not active.any():
            break
        idx = np.where(active)[0]
        g = _batch_gradient_np(s[idx], cell_u, cell_v, qyc, qzc, nu, nv, alpha)
        t = np.minimum(step[idx] * 2.0, _STEP_CAP)
        pending = np.ones(idx.size, dtype=bool)
        for _bt in range(max_bt):
            if not pending.any():
                break
            sub = np.where(pending)[0]
            cand = _project_batch_np(
                s[idx[sub]] + t[sub, None] * g[sub], block_id, n_blocks, targets
            )
            fc = _batch_objective_np(cand, cell_u, cell_v, qyc, qzc, nu, nv, alpha)
            ok = fc > f[idx[sub]] + _LINESEARCH_EPS
            if ok.any():
                acc = sub[ok]
                gain = fc[ok] - f[idx[acc]]
                s[idx[acc]] = cand[ok]
                f[idx[acc]] = fc[ok]
                step[idx[acc]] = t[acc]
                iters[idx[acc]] += 1
                converged = gain < ftol
                active[idx[acc[converged]]] = False
                pending[acc] = False
            t[sub[~ok]] *= 0.5
        # rows whose every backtrack failed are stationary
        active[idx[pending]] = False
    return f, s, iters


def _ascend_batch_np(s0, cell_u, cell_v, cell_x_maps, block_id_maps, targets_maps,
                     qy, qz, nu, nv, alpha, max_iters, ftol, max_bt):
    n_maps, n_starts, n_cells = s0.shape
    vals = np.empty((n_maps, n_starts))
    pts = np.empty_like(s0)
    iters = np.zeros((n_maps, n_starts), dtype=np.int64)
    for m in range(n_maps):
        qyc = qy[cell_x_maps[m]]
        qzc = qz[cell_x_maps[m]]
        vals[m], pts[m], iters[m] = _ascend_starts_np(
            s0[m], cell_u, cell_v, block_id_maps[m], targets_maps.shape[1],
            targets_maps[m], qyc, qzc, nu, nv, alpha, max_iters, ftol, max_bt
        )
    return vals, pts, iters


def _mapping_objective_np(s, cell_u, cell_v, cell_x, qy, qz, nu, nv, alpha):
    """Objective at a single point (convenience wrapper)."""
    return float(
        _batch_objective_np(s[None, :], cell_u, cell_v, qy[cell_x], qz[cell_x],
                            nu, nv, alpha)[0]
    )


def _mapping_gradient_np(s, cell_u, cell_v, cell_x, qy, qz, nu, nv, alpha):
    return _batch_gradient_np(s[None, :], cell_u, cell_v, qy[cell_x], qz[cell_x],
                              nu, nv, alpha)[0]


def _marton_caps_np(p, qy, qz):
    """Five linear-constraint caps of the inner-bound region at joint p.

    p has axes (u, v, w, x); returns (capA..capE) where capA bounds R0+R1,
    capB bounds R0+R2, capC/capD bound R0+R1+R2 and capE bounds 2R0+R1+R2.
    """
    m_uvw = p.sum(axis=3)
    m_uw = m_uvw.sum(axis=1)
    m_vw = m_uvw.sum(axis=0)
    m_w = m_uw.sum(axis=0)
    t_uwy = np.einsum("uvwx,xy->uwy", p, qy)
    t_vwz = np.einsum("uvwx,xz->vwz", p, qz)
    t_wy = t_uwy.sum(axis=0)
    t_wz = t_vwz.sum(axis=0)
    p_y = t_wy.sum(axis=0)
    p_z = t_wz.sum(axis=0)

    h = _entropy_bits_np
    h_uw = h(m_uw.ravel())
    h_vw = h(m_vw.ravel())
    h_w = h(m_w.ravel())
    i_uw_y = h_uw + h(p_y) - h(t_uwy.ravel())
    i_vw_z = h_vw + h(p_z) - h(t_vwz.ravel())
    i_u_y_w = h_uw + h(t_wy.ravel()) - h(t_uwy.ravel()) - h_w
    i_v_z_w = h_vw + h(t_wz.ravel()) - h(t_vwz.ravel()) - h_w
    i_u_v_w = h_uw + h_vw - h(m_uvw.ravel()) - h_w
    cap_a = i_uw_y
    cap_b = i_vw_z
    cap_c = i_uw_y + i_v_z_w - i_u_v_w
    cap_d = i_u_y_w + i_vw_z - i_u_v_w
    cap_e = i_uw_y + i_vw_z - i_u_v_w
    return cap_a, cap_b, cap_c, cap_d, cap_e


_NUMPY_IMPL = {
    "entropy_bits": _entropy_bits_np,
    "project_blocks": _project_blocks_np,
    "ascend_batch": _ascend_batch_np,
    "mapping_objective": _mapping_objective_np,
    "mapping_gradient": _mapping_gradient_np,
    "marton_caps": _marton_caps_np,
}

IMPLEMENTATIONS = {"numpy": _NUMPY_IMPL}

# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _env_disabled():
    return os.environ.get("MARTONKIT_NO_NUMBA", "").strip().lower() in (
        "1", "true", "yes", "on",
    )


_HAS_NUMBA = False
if not _env_disabled():
    try:
        from numba import njit

        _HAS_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        _HAS_NUMBA = False

if _HAS_NUMBA:

    @njit(cache=True)
    def _entropy_bits_nb(p):
        s = 0.0
        for i in range(p.size):
            if p[i] > 0.0:
                s -= p[i] * np.log2(p[i])
        return s

    @njit(cache=True)
    def _project_blocks_nb(v, block_id, n_blocks, targets):
        n = v.size
        out = np.zeros(n)
        for b in range(n_blocks):
            cnt = 0
            for i in range(n):
                if block_id[i] == b:
                    cnt += 1
            if cnt == 0:
                continue
            target = targets[b]
            if target <= 0.0:
                continue
            tmp = np.empty(cnt)
            k = 0
            for i in range(n):
                if block_id[i] == b:
                    tmp[k] = v[i]
                    k += 1
            srt = np.sort(tmp)[::-1]
            csum = 0.0
            tau = srt[0] - target  # k = 1 fallback
            for j in range(cnt):
                csum += srt[j]
                cand = (csum - target) / (j + 1.0)
                if srt[j] - cand > 0.0:
                    tau = cand
            for i in range(n):
                if block_id[i] == b:
                    w = v[i] - tau
                    out[i] = w if w > 0.0 else 0.0
        return out

    @njit(cache=True)
    def _objective_nb(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha):
        n = s.size
        ny = qyc.shape[1]
        nz = qzc.shape[1]
        p_uy = np.zeros((nu, ny))
        p_vz = np.zeros((nv, nz))
        p_u = np.zeros(nu)
        p_v = np.zeros(nv)
        for c in range(n):
            w = s[c]
            if w <= 0.0:
                continue
            u = cell_u[c]
            v = cell_v[c]
            p_u[u] += w
            p_v[v] += w
            for y in range(ny):
                p_uy[u, y] += w * qyc[c, y]
            for z in range(nz):
                p_vz[v, z] += w * qzc[c, z]
        h_u = 0.0
        for u in range(nu):
            if p_u[u] > 0.0:
                h_u -= p_u[u] * np.log2(p_u[u])
        h_v = 0.0
        for v in range(nv):
            if p_v[v] > 0.0:
                h_v -= p_v[v] * np.log2(p_v[v])
        h_uy = 0.0
        h_y = 0.0
        for y in range(ny):
            py = 0.0
            for u in range(nu):
                q = p_uy[u, y]
                py += q
                if q > 0.0:
                    h_uy -= q * np.log2(q)
            if py > 0.0:
                h_y -= py * np.log2(py)
        h_vz = 0.0
        h_z = 0.0
        for z in range(nz):
            pz = 0.0
            for v in range(nv):
                q = p_vz[v, z]
                pz += q
                if q > 0.0:
                    h_vz -= q * np.log2(q)
            if pz > 0.0:
                h_z -= pz * np.log2(pz)
        h_s = 0.0
        for c in range(n):
            if s[c] > 0.0:
                h_s -= s[c] * np.log2(s[c])
        i_uy = h_u + h_y - h_uy
        i_vz = h_v + h_z - h_vz
        i_uv = h_u + h_v - h_s
        return i_uy + alpha * i_vz - i_uv

    @njit(cache=True)
    def _gradient_nb(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha, out):
        n = s.size
        ny = qyc.shape[1]
        nz = qzc.shape[1]
        p_uy = np.zeros((nu, ny))
        p_vz = np.zeros((nv, nz))
        p_v = np.zeros(nv)
        for c in range(n):
            w = s[c]
            if w <= 0.0:
                continue
            u = cell_u[c]
            v = cell_v[c]
            p_v[v] += w
            for y in range(ny):
                p_uy[u, y] += w * qyc[c, y]
            for z in range(nz):
                p_vz[v, z] += w * qzc[c, z]
        p_y = np.zeros(ny)
        for y in range(ny):
            for u in range(nu):
                p_y[y] += p_uy[u, y]
        p_z = np.zeros(nz)
        for z in range(nz):
            for v in range(nv):
                p_z[z] += p_vz[v, z]
        for c in range(n):
            u = cell_u[c]
            v = cell_v[c]
            acc = 0.0
            for y in range(ny):
                q = qyc[c, y]
                if q > 0.0:
                    acc += q * (np.log2(max(p_uy[u, y], _TINY))
                                - np.log2(max(p_y[y], _TINY)))
            for z in range(nz):
                q = qzc[c, z]
                if q > 0.0:
                    acc += alpha * q * (np.log2(max(p_vz[v, z], _TINY))
                                        - np.log2(max(p_z[z], _TINY)))
            acc -= np.log2(max(s[c], _TINY))
            acc -= (alpha - 1.0) * np.log2(max(p_v[v], _TINY))
            # same -alpha/ln2 constant as the numpy twin: exact gradient
            out[c] = acc - alpha * _INV_LN2

    @njit(cache=True)
    def _ascend_one_nb(s0, cell_u, cell_v, block_id, n_blocks, targets,
                       qyc, qzc, nu, nv, alpha, max_iters, ftol, max_bt):
        s = _project_blocks_nb(s0, block_id, n_blocks, targets)
        f = _objective_nb(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha)
        g = np.empty(s.size)
        step = 0.5
        it = 0
        while it < max_iters:
            _gradient_nb(s, cell_u, cell_v, qyc, qzc, nu, nv, alpha, g)
            t = step * 2.0
            if t > _STEP_CAP:
                t = _STEP_CAP
            accepted = False
            fc = f
            cand = s
            for _bt in range(max_bt):
                cand = _project_blocks_nb(s + t * g, block_id, n_blocks, targets)
                fc = _objective_nb(cand, cell_u, cell_v, qyc, qzc, nu, nv, alpha)
                if fc > f + _LINESEARCH_EPS:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
            gain = fc - f
            s = cand
            f = fc
            step = t
            it += 1
            if gain < ftol:
                break
        return s, f, it

    @njit(cache=True)
    def _ascend_batch_nb(s0, cell_u, cell_v, cell_x_maps, block_id_maps,
                         targets_maps, qy, qz, nu, nv, alpha,
                         max_iters, ftol, max_bt):
        n_maps, n_starts, n_cells = s0.shape
        ny = qy.shape[1]
        nz = qz.shape[1]
        n_blocks = targets_maps.shape[1]
        vals = np.empty((n_maps, n_starts))
        pts = np.empty((n_maps, n_starts, n_cells))
        iters = np.zeros((n_maps, n_starts), dtype=np.int64)
        for m in range(n_maps):
            qyc = np.empty((n_cells, ny))
            qzc = np.empty((n_cells, nz))
            for c in range(n_cells):
                x = cell_x_maps[m, c]
                for y in range(ny):
                    qyc[c, y] = qy[x, y]
                for z in range(nz):
                    qzc[c, z] = qz[x, z]
            for k in range(n_starts):
                s, f, it = _ascend_one_nb(
                    s0[m, k].copy(), cell_u, cell_v, block_id_maps[m],
                    n_blocks, targets_maps[m], qyc, qzc, nu, nv, alpha,
                    max_iters, ftol, max_bt
                )
                vals[m, k] = f
                pts[m, k] = s
                iters[m, k] = it
        return vals, pts, iters

    @njit(cache=True)
    def _marton_caps_nb(p, qy, qz):
        nu, nv, nw, nx = p.shape
        ny = qy.shape[1]
        nz = qz.shape[1]
        m_uvw = np.zeros((nu, nv, nw))
        t_uwy = np.zeros((nu, nw, ny))
        t_vwz = np.zeros((nv, nw, nz))
        for u in range(nu):
            for v in range(nv):
                for w in range(nw):
                    for x in range(nx):
                        q = p[u, v, w, x]
                        if q <= 0.0:
                            continue
                        m_uvw[u, v, w] += q
                        for y in range(ny):
                            t_uwy[u, w, y] += q * qy[x, y]
                        for z in range(nz):
                            t_vwz[v, w, z] += q * qz[x, z]
        h_uvw = 0.0
        m_uw = np.zeros((nu, nw))
        m_vw = np.zeros((nv, nw))
        for u in range(nu):
            for v in range(nv):
                for w in range(nw):
                    q = m_uvw[u, v, w]
                    if q > 0.0:
                        h_uvw -= q * np.log2(q)
                    m_uw[u, w] += q
                    m_vw[v, w] += q
        h_uw = 0.0
        m_w = np.zeros(nw)
        for u in range(nu):
            for w in range(nw):
                q = m_uw[u, w]
                if q > 0.0:
                    h_uw -= q * np.log2(q)
                m_w[w] += q
        h_vw = 0.0
        for v in range(nv):
            for w in range(nw):
                q = m_vw[v, w]
                if q > 0.0:
                    h_vw -= q * np.log2(q)
        h_w = 0.0
        for w in range(nw):
            if m_w[w] > 0.0:
                h_w -= m_w[w] * np.log2(m_w[w])
        h_uwy = 0.0
        t_wy = np.zeros((nw, ny))
        for u in range(nu):
            for w in range(nw):
                for y in range(ny):
                    q = t_uwy[u, w, y]
                    if q > 0.0:
                        h_uwy -= q * np.log2(q)
                    t_wy[w, y] += q
        h_wy = 0.0
        p_y = np.zeros(ny)
        for w in range(nw):
            for y in range(ny):
                q = t_wy[w, y]
                if q > 0.0:
                    h_wy -= q * np.log2(q)
                p_y[y] += q
        h_y = 0.0
        for y in range(ny):
            if p_y[y] > 0.0:
                h_y -= p_y[y] * np.log2(p_y[y])
        h_vwz = 0.0
        t_wz = np.zeros((nw, nz))
        for v in range(nv):
            for w in range(nw):
                for z in range(nz):
                    q = t_vwz[v, w, z]
                    if q > 0.0:
                        h_vwz -= q * np.log2(q)
                    t_wz[w, z] += q
        h_wz = 0.0
        p_z = np.zeros(nz)
        for w in range(nw):
            for z in range(nz):
                q = t_wz[w, z]
                if q > 0.0:
                    h_wz -= q * np.log2(q)
                p_z[z] += q
        h_z = 0.0
        for z in range(nz):
            if p_z[z] > 0.0:
                h_z -= p_z[z] * np.log2(p_z[z])

        i_uw_y = h_uw + h_y - h_uwy
        i_vw_z = h_vw + h_z - h_vwz
        i_u_y_w = h_uw + h_wy - h_uwy - h_w
        i_v_z_w = h_vw + h_wz - h_vwz - h_w
        i_u_v_w = h_uw + h_vw - h_uvw - h_w
        cap_a = i_uw_y
        cap_b = i_vw_z
        cap_c = i_uw_y + i_v_z_w - i_u_v_w
        cap_d = i_u_y_w + i_vw_z - i_u_v_w
        cap_e = i_uw_y + i_vw_z - i_u_v_w
        return cap_a, cap_b, cap_c, cap_d, cap_e

    def _entropy_bits_jit(p):
        return float(_entropy_bits_nb(np.ascontiguousarray(p, dtype=np.float64)))

    def _mapping_objective_jit(s, cell_u, cell_v, cell_x, qy, qz, nu, nv, alpha):
        return float(_objective_nb(s, cell_u, cell_v, qy[cell_x], qz[cell_x],
                                   nu, nv, alpha))

    def _mapping_gradient_jit(s, cell_u, cell_v, cell_x, qy, qz, nu, nv, alpha):
        out = np.empty(s.size)
        _gradient_nb(s, cell_u, cell_v, qy[cell_x], qz[cell_x], nu, nv, alpha, out)
        return out

    IMPLEMENTATIONS["numba"] = {
        "entropy_bits": _entropy_bits_jit,
        "project_blocks": _project_blocks_nb,
        "ascend_batch": _ascend_batch_nb,
        "mapping_objective": _mapping_objective_jit,
        "mapping_gradient": _mapping_gradient_jit,
        "marton_caps": _marton_caps_nb,
    }

ACTIVE = "numba" if "numba" in IMPLEMENTATIONS else "numpy"

entropy_bits = IMPLEMENTATIONS[ACTIVE]["entropy_bits"]
project_blocks = IMPLEMENTATIONS[ACTIVE]["project_blocks"]
ascend_batch = IMPLEMENTATIONS[ACTIVE]["ascend_batch"]
mapping_objective = IMPLEMENTATIONS[ACTIVE]["mapping_objective"]
mapping_gradient = IMPLEMENTATIONS[ACTIVE]["mapping_gradient"]
marton_caps = IMPLEMENTATIONS[ACTIVE]["marton_caps"]


def warmup():
    """Force compilation of the hot kernels on toy inputs."""
    cell_u = np.array([0, 0, 1, 1], dtype=np.int64)
    cell_v = np.array([0, 1, 0, 1], dtype=np.int64)
    cell_x = np.array([[0, 0, 1, 1]], dtype=np.int64)
    targets = np.array([[0.5, 0.5]])
    qy = np.array([[0.7, 0.3], [0.3, 0.7]])
    qz = np.array([[0.6, 0.4], [0.4, 0.6]])
    s0 = np.full((1, 2, 4), 0.25)
    ascend_batch(s0, cell_u, cell_v, cell_x, cell_x.copy(), targets,
                 qy, qz, 2, 2, 1.0, 50, 1e-9, 30)
    mapping_objective(s0[0, 0], cell_u, cell_v, cell_x[0], qy, qz, 2, 2, 1.0)
    mapping_gradient(s0[0, 0], cell_u, cell_v, cell_x[0], qy, qz, 2, 2, 1.0)
    entropy_bits(np.array([0.5, 0.5]))
    marton_caps(np.full((2, 2, 2, 2), 1.0 / 16), qy, qz)
