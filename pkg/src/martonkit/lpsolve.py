"""Convex-combination feasibility via a phase-I simplex.

Answers one question: is a target vector expressible as a convex
combination of M candidate vectors?  Equivalently, is

    sum_t alpha_t c_t = target,   sum_t alpha_t = 1,   alpha >= 0

solvable?  A phase-I simplex minimizes the sum of artificial variables;
feasible iff that minimum is ~0.  Pivoting uses Dantzig's rule (largest
reduced cost) until the objective stalls, then switches permanently to
Bland's rule, whose anti-cycling guarantee ensures termination.
Artificial columns never re-enter the basis once they leave, which
preserves the feasibility verdict and both rules' guarantees.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

_PIVOT_TOL = 1e-10


@dataclass
class ConvexFeasibilityProblem:
    """Candidates are rows of an (M, d) array; target is a d-vector."""

    candidates: np.ndarray
    target: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        self.candidates = np.atleast_2d(np.asarray(self.candidates, dtype=np.float64))
        self.target = np.asarray(self.target, dtype=np.float64).ravel()
        if self.candidates.ndim != 2:
            raise ValueError("candidates must be a 2-D array")
        if self.candidates.shape[0] > 0 and self.candidates.shape[1] != self.target.size:
            raise ValueError(
                f"candidate dimension {self.candidates.shape[1]} does not match "
                f"target dimension {self.target.size}"
            )


@dataclass
class FeasibilityResult:
    feasible: bool
    weights: np.ndarray | None
    residual: float
    iterations: int
    diagnostics: dict = field(default_factory=dict)


def solve_convex_feasibility(problem, max_iters=None):
    """Run phase-I simplex; raise NumericalError if the iteration cap hits."""
    cand = problem.candidates
    target = problem.target
    n_cand, dim = cand.shape if cand.size else (0, target.size)
    if n_cand == 0:
        return FeasibilityResult(
            feasible=False, weights=None,
            residual=float(np.abs(target).max(initial=0.0) + 1.0), iterations=0,
        )

    m = dim + 1  # constraint rows: d coordinates plus the convexity row
    if max_iters is None:
        max_iters = 10 * (dim + n_cand)

    a_mat = np.vstack([cand.T, np.ones((1, n_cand))])
    b = np.concatenate([target, [1.0]])
    flip = b < 0.0
    a_mat[flip] *= -1.0
    b = np.abs(b)

    # tableau columns: n_cand structural + m artificial, rhs kept separately
    tableau = np.hstack([a_mat, np.eye(m)])
    rhs = b.copy()
    basis = np.arange(n_cand, n_cand + m)
    # reduced costs for min sum(artificials): z_j - c_j = sum of rows - c_j
    obj = tableau.sum(axis=0)
    obj[n_cand:] -= 1.0
    obj_value = rhs.sum()

    iterations = 0
    stall = 0
    blanding = False
    while True:
        improving = obj[:n_cand] > _PIVOT_TOL  # artificials never re-enter
        if not improving.any():
            break
        if iterations >= max_iters:
            raise NumericalError(
                f"phase-I simplex exceeded {max_iters} iterations",
                residual=float(obj_value),
                diagnostics={"iterations": iterations},
            )
        if blanding:
            enter = int(np.argmax(improving))  # smallest improving index
        else:
            enter = int(np.argmax(np.where(improving, obj[:n_cand], -np.inf)))
        col = tableau[:, enter]
        positive = col > _PIVOT_TOL
        if not positive.any():
            # unbounded improving direction cannot happen with artificials
            # still basic and rows flipped nonnegative; treat as stalled
            break
        ratios = np.where(positive, rhs / np.where(positive, col, 1.0), np.inf)
        best = ratios.min()
        tied = np.where(ratios <= best + 1e-15)[0]
        leave = tied[np.argmin(basis[tied])]  # Bland tie-break on basic index
        pivot = tableau[leave, enter]
        tableau[leave] /= pivot
        rhs[leave] /= pivot
        for i in range(m):
            if i != leave and abs(tableau[i, enter]) > 0.0:
                f = tableau[i, enter]
                tableau[i] -= f * tableau[leave]
                rhs[i] -= f * rhs[leave]
        f = obj[enter]
        obj -= f * tableau[leave]
        drop = f * rhs[leave]
        obj_value -= drop
        basis[leave] = enter
        iterations += 1
        stall = 0 if drop > 1e-15 else stall + 1
        if stall >= 40:
            blanding = True  # degeneracy: Bland from here on, terminates

    rhs = np.clip(rhs, 0.0, None)
    obj_value = float(sum(rhs[i] for i in range(m) if basis[i] >= n_cand))
    feasible = obj_value <= problem.tol
    weights = None
    residual = obj_value
    if feasible:
        weights = np.zeros(n_cand)
        for i in range(m):
            if basis[i] < n_cand:
                weights[basis[i]] = rhs[i]
        total = weights.sum()
        if total > 0:
            weights = weights / total  # wash out the tiny artificial remainder
        combo = cand.T @ weights
        residual = float(
            max(np.abs(combo - target).max(initial=0.0), abs(weights.sum() - 1.0))
        )
        if residual > 10 * max(problem.tol, 1e-12):
            raise NumericalError(
                "phase-I simplex reported feasibility but the reconstruction "
                "residual is too large",
                residual=residual,
                diagnostics={"iterations": iterations},
            )
    return FeasibilityResult(
        feasible=feasible,
        weights=weights,
        residual=residual,
        iterations=iterations,
    )
