"""Two-sided evaluation of the norm minimax identity.

For square matrices of size at least 2 the best uniform value
sup over unit x of inf over lambda of ||(A + lambda*B) x||
equals the scalar-minimized operator norm
inf over lambda of ||A + lambda*B||.
The left side is estimated by multistart maximization on the sphere, the
right side by the certified line search, and the report records both values
with their duality gap.  Weak duality (lhs <= rhs) holds for every feasible
pair of iterates, so a materially negative gap can only mean the right-hand
minimizer failed, which is treated as an error rather than smoothed over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (ConvergenceError, Field, InputError, Matrix, Vector,
                   top_singular_subspace)
from .decision import _max_inner_inf
from .lineopt import DEFAULT_BUDGET, DEFAULT_TOL, global_inf_lambda

GAP_TOL = 1e-4          # default relative duality-gap target
_MAX_RESTART_SCALE = 4  # doubling cap when the gap refuses to close


def _square_pair(a: Matrix, b: Matrix) -> None:
    if a.field is not b.field:
        raise InputError("operands carry different field tags")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    if not a.is_square():
        raise InputError(f"square matrices required, got {a.shape}")
    if a.rows < 2:
        raise InputError("the minimax identity needs dimension at least 2")


@dataclass(frozen=True)
class SupInfResult:
    """Best uniform-value iterate: the sup-inf estimate and its maximizer."""

    value: float
    x: Vector
    restarts: int


def _saddle_starts(a: Matrix, b: Matrix, lam) -> list:
    """Starting vectors read off the pencil at the line-search minimizer.

    At an exact scalar minimizer lambda*, some top singular vector of
    A + lambda*B maximizes the inner minimization, so the top band of the
    pencil (widened to absorb line-search error) seeds the sphere search.
    """
    pencil = Matrix(a.field, a.data + lam * b.data)
    if float(np.linalg.norm(pencil.data)) == 0.0:
        return []
    sd = top_singular_subspace(pencil, rank_tol=1e-4)
    return [vec.data for vec in sd.top_subspace]


def lhs_sup_inf(a: Matrix, b: Matrix, *, restarts: int = 50, seed: int = 0,
                lambda_hint=None, max_iter: int = 400,
                stop_at: float | None = None) -> SupInfResult:
    """Maximize x -> inf over lambda of ||(A + lambda*B) x|| over unit vectors.

    Starts from the top singular basis of a, from the pencil basis at
    lambda_hint when given, and from seeded random points.  Every reported
    value is a genuinely evaluated point, hence a lower bound on the
    scalar-minimized norm up to roundoff.  stop_at, when given, must itself
    be such an upper bound (e.g. the other side of the identity minus the
    accepted slack); reaching it ends the search early.
    """
    _square_pair(a, b)
    extra = [] if lambda_hint is None else _saddle_starts(a, b, lambda_hint)
    stop = -math.inf if stop_at is None else -(max(stop_at, 0.0) ** 2)
    phi, x, used = _max_inner_inf(a, b, restarts=restarts, seed=seed,
                                  max_iter=max_iter, extra_starts=extra,
                                  stop_below=stop)
    return SupInfResult(value=math.sqrt(max(phi, 0.0)), x=Vector(a.field, x),
                        restarts=used)


def rhs_inf_sup(a: Matrix, b: Matrix, *, tol: float = DEFAULT_TOL,
                budget: int = DEFAULT_BUDGET):
    """Scalar-minimized operator norm, inf over lambda of ||A + lambda*B||."""
    _square_pair(a, b)
    return global_inf_lambda(a, b, tol=tol, budget=budget)


@dataclass(frozen=True)
class MinimaxReport:
    """Both sides of the minimax identity for one pair, with the duality gap.

    gap = rhs_value - lhs_value is nonnegative up to solver error;
    rel_gap divides by max(rhs_value, 1).  restart_starved flags a gap that
    stayed above gap_tol after the restart budget was scaled up 4x.
    """

    field: Field
    lhs_value: float
    rhs_value: float
    gap: float
    rel_gap: float
    argmin_lambda: object
    argmax_x: Vector
    evaluations: int
    restarts_used: int
    restart_starved: bool
    budget_limited: bool

    def to_json_dict(self) -> dict:
        lam = complex(self.argmin_lambda)
        return {
            "field": self.field.value,
            "lhs": self.lhs_value,
            "rhs": self.rhs_value,
            "gap": self.gap,
            "rel_gap": self.rel_gap,
            "argmin_lambda": [lam.real, lam.imag],
            "argmax_x": self.argmax_x.to_pairs(),
            "evaluations": self.evaluations,
            "restarts_used": self.restarts_used,
            "restart_starved": self.restart_starved,
            "budget_limited": self.budget_limited,
        }


def minimax_report(a: Matrix, b: Matrix, *, restarts: int = 50, seed: int = 0,
                   tol: float = DEFAULT_TOL, gap_tol: float = GAP_TOL,
                   budget: int = DEFAULT_BUDGET) -> MinimaxReport:
    """Evaluate both sides of the minimax identity and quantify the gap.

    The sphere search reruns with doubled restarts (up to 4x) while the
    relative gap exceeds gap_tol; if it still does, the report is returned
    with restart_starved=True rather than hiding the shortfall.  A relative
    gap below -1e-9 means the certified minimizer was beaten by a feasible
    point, which is impossible at convergence, so it raises ConvergenceError.
    """
    _square_pair(a, b)
    rhs = rhs_inf_sup(a, b, tol=tol, budget=budget)
    scale = max(rhs.value, 1.0)
    # sound early-stop: lhs <= rhs always, so a value this close to rhs is
    # within noise of the supremum (well inside the gap statistics targets)
    stop_at = rhs.value - 1e-10 * scale

    allowed = restarts
    best = lhs_sup_inf(a, b, restarts=allowed, seed=seed,
                       lambda_hint=rhs.lambda_star, stop_at=stop_at)
    while (rhs.value - best.value) / scale > gap_tol and allowed < restarts * _MAX_RESTART_SCALE:
        allowed = min(allowed * 2, restarts * _MAX_RESTART_SCALE)
        trial = lhs_sup_inf(a, b, restarts=allowed, seed=seed,
                            lambda_hint=rhs.lambda_star, stop_at=stop_at)
        if trial.value > best.value:
            best = trial

    gap = rhs.value - best.value
    rel_gap = gap / scale
    if gap < -1e-9:
        raise ConvergenceError(
            f"negative duality gap {gap:.3e}: scalar minimization did not converge")
    return MinimaxReport(field=a.field, lhs_value=best.value, rhs_value=rhs.value,
                         gap=gap, rel_gap=rel_gap, argmin_lambda=rhs.lambda_star,
                         argmax_x=best.x, evaluations=rhs.evaluations,
                         restarts_used=best.restarts,
                         restart_starved=rel_gap > gap_tol,
                         budget_limited=rhs.budget_limited)
