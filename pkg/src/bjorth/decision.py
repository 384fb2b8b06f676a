"""Deciding Birkhoff-James orthogonality of a matrix pair, two independent ways.

A is orthogonal to B when no scalar multiple of B brings A closer to zero:
inf over lambda of ||A + lambda*B|| stays at ||A||.  The definitional route
simply runs that minimization.  The witness route instead looks for a unit
vector x that attains the norm of A and is sent by A and B to orthogonal
images; in finite dimension such a witness exists exactly when the pair is
orthogonal, and the search reduces to asking whether zero lies in the
numerical range of the compression of B*A to the top singular subspace of A.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from ._sphere import multistart_minimize
from .core import (ConvergenceError, Field, InputError, Matrix, SpectralData,
                   Vector, inner, operator_norm, top_singular_subspace,
                   _eigvals_hermitian)
from .lineopt import global_inf_lambda, inner_inf

log = logging.getLogger("bjorth")

NR_GRID = 720   # coarse angles scanned before local refinement
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Status(enum.Enum):
    ORTHOGONAL = "ORTHOGONAL"
    NOT_ORTHOGONAL = "NOT_ORTHOGONAL"
    BOUNDARY = "BOUNDARY"


class Method(enum.Enum):
    DEFINITIONAL = "DEFINITIONAL"
    WITNESS = "WITNESS"


class WitnessSearchError(ConvergenceError):
    """Witness search exhausted its budget without certifying either outcome."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class SeparationCertificate:
    """Record of the best separating half-plane found for the numerical range.

    theta is the rotation angle, support the minimum of the rotated real part
    over the unit sphere.  support > tol certifies that zero lies outside.
    """

    theta: float
    support: float
    tol: float


@dataclass(frozen=True)
class Verdict:
    """Orthogonality decision with its certifying quantity.

    margin is inf over lambda of ||A + lambda*B|| minus ||A|| (never positive)
    when the definitional route computed it; the witness route leaves it None
    and certifies through `certificate` instead.
    """

    status: Status
    margin: object
    method: Method
    tol: float
    certificate: SeparationCertificate | None = None


@dataclass(frozen=True)
class Witness:
    """Unit vector certifying orthogonality up to the recorded epsilon."""

    x: Vector
    norm_residual: float
    ip_residual: float
    epsilon: float

    def __post_init__(self):
        if abs(self.x.norm() - 1.0) > 1e-10:
            raise InputError("witness vector must be unit length")
        if self.norm_residual > self.epsilon or self.ip_residual > self.epsilon:
            raise InputError("witness residuals exceed the certified epsilon")

    @classmethod
    def from_vector(cls, a: Matrix, b: Matrix, x_arr: np.ndarray) -> "Witness":
        """Build a witness from a raw vector, recomputing residuals from scratch."""
        nx = float(np.linalg.norm(x_arr))
        if nx == 0.0:
            raise InputError("witness vector must be nonzero")
        x_arr = x_arr / nx
        u = a.data @ x_arr
        v = b.data @ x_arr
        norm_res = max(operator_norm(a) - float(np.linalg.norm(u)), 0.0)
        ip_res = abs(inner(u, v))
        return cls(x=Vector(a.field, x_arr), norm_residual=norm_res,
                   ip_residual=ip_res, epsilon=max(norm_res, ip_res))


@dataclass(frozen=True)
class WitnessFailure:
    """No unit vector reached the required value; expected for non-orthogonal pairs."""

    best_value: float
    threshold: float
    best_x: Vector


def _pair_checks(a: Matrix, b: Matrix, square: bool) -> None:
    if a.field is not b.field:
        raise InputError("operands carry different field tags")
    if a.shape != b.shape:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    if square and not a.is_square():
        raise InputError(f"square matrices required, got {a.shape}")


def check_definitional(a: Matrix, b: Matrix, tol: float = 1e-7) -> Verdict:
    """Decide orthogonality straight from the norm-minimization definition.

    ORTHOGONAL when inf over lambda of ||a + lambda*b|| >= ||a|| - tol.
    """
    _pair_checks(a, b, square=False)
    if not (0.0 < tol < 1.0):
        raise InputError(f"tol must lie in (0, 1), got {tol}")
    res = global_inf_lambda(a, b, tol=min(tol * 0.1, 1e-7))
    margin = min(res.value - operator_norm(a), 0.0)
    status = Status.ORTHOGONAL if margin >= -tol else Status.NOT_ORTHOGONAL
    return Verdict(status=status, margin=margin, method=Method.DEFINITIONAL, tol=tol)


def vector_bj_check(u: Vector, v: Vector, tol: float = 1e-8):
    """Orthogonality of a vector pair: inf over lambda of ||u + lambda*v|| >= ||u|| - tol.

    Returns (bool, |<u, v>|); the two quantities vanish together, which is
    what makes the inner-product test an equivalent shortcut.
    """
    res = inner_inf(u, v)
    return bool(res.value >= u.norm() - tol), abs(inner(u, v))


def zero_in_numerical_range(c: Matrix, tol: float | None = None):
    """Test whether zero lies in the numerical range {<Cy, y> : ||y|| = 1}.

    Scans m(theta) = lambda_min(Re(e^{i theta} C)) over a 720-point grid with
    golden-section refinement; a value above tol is a separating half-plane,
    so zero is outside.  Over the real field the range is the real interval
    [lambda_min, lambda_max] of the symmetric part, checked directly.

    Returns (contains_zero, SeparationCertificate).
    """
    if not c.is_square():
        raise InputError(f"square matrix required, got {c.shape}")
    if tol is None:
        tol = 1e-9 * float(np.linalg.norm(c.data))
    ca = c.data
    if c.field is Field.REAL:
        sym = 0.5 * (ca + ca.T)
        w = _eigvals_hermitian(sym)
        lo, hi = float(w[0]), float(w[-1])
        if lo > tol:
            return False, SeparationCertificate(0.0, lo, tol)
        if hi < -tol:
            return False, SeparationCertificate(math.pi, -hi, tol)
        if lo >= -hi:
            return True, SeparationCertificate(0.0, lo, tol)
        return True, SeparationCertificate(math.pi, -hi, tol)

    h1 = 0.5 * (ca + ca.conj().T)
    h2 = (ca - ca.conj().T) / 2j

    def m(theta: float) -> float:
        w = _eigvals_hermitian(math.cos(theta) * h1 - math.sin(theta) * h2)
        return float(w[0])

    step = 2.0 * math.pi / NR_GRID
    best_theta, best_m = 0.0, -math.inf
    for j in range(NR_GRID):
        theta = j * step
        val = m(theta)
        if val > best_m:
            best_theta, best_m = theta, val

    # local golden-section sharpening of the best separating angle
    lo_t, hi_t = best_theta - step, best_theta + step
    h = hi_t - lo_t
    x1 = hi_t - _INVPHI * h
    x2 = lo_t + _INVPHI * h
    f1, f2 = m(x1), m(x2)
    while h > 1e-10:
        if f1 > f2:
            hi_t, x2, f2 = x2, x1, f1
            h = hi_t - lo_t
            x1 = hi_t - _INVPHI * h
            f1 = m(x1)
        else:
            lo_t, x1, f1 = x1, x2, f2
            h = hi_t - lo_t
            x2 = lo_t + _INVPHI * h
            f2 = m(x2)
        if f1 > best_m:
            best_theta, best_m = x1, f1
        if f2 > best_m:
            best_theta, best_m = x2, f2

    best_theta = best_theta % (2.0 * math.pi)
    cert = SeparationCertificate(best_theta, best_m, tol)
    return best_m <= tol, cert


def _abs_form_fg(ca: np.ndarray):
    """|<Cy, y>|^2 and its sphere gradient, for the witness extraction."""
    ch = ca.conj().T

    def fg(y):
        cy = ca @ y
        q = np.vdot(y, cy)
        f = (q.conjugate() * q).real
        g = 2.0 * (q.conjugate() * cy + q * (ch @ y))
        return f, g

    return fg


def _compression(a: Matrix, b: Matrix, basis: list) -> np.ndarray:
    """Compression of B*A to the span of the given orthonormal basis."""
    m = np.column_stack([vec.data for vec in basis])
    return m.conj().T @ (b.data.conj().T @ (a.data @ m))


def find_witness(a: Matrix, b: Matrix, *, rank_tol: float = 1e-8,
                 eps: float | None = None, nr_tol: float | None = None,
                 restarts: int = 32, seed: int = 0, max_iter: int = 300):
    """Exact-witness route: search the top singular subspace of a.

    Either returns a Witness (orthogonal, certificate vector included) or a
    NOT_ORTHOGONAL Verdict whose certificate is the separating half-plane of
    the compression's numerical range.  Residual thresholds default to
    1e-8 * ||a|| * ||b|| and are always re-checked from scratch on the
    assembled witness, which is the source of truth.

    Raises WitnessSearchError when the numerical range says a witness should
    exist but the minimization cannot reach the threshold.
    """
    _pair_checks(a, b, square=True)
    sd = top_singular_subspace(a, rank_tol)
    sigma_a = sd.op_norm
    sigma_b = operator_norm(b)
    scale = sigma_a * sigma_b
    if eps is None:
        eps = 1e-8 * scale
    if nr_tol is None:
        nr_tol = 1e-9 * scale

    comp = _compression(a, b, sd.top_subspace)
    contains, cert = zero_in_numerical_range(Matrix(a.field, comp), nr_tol)
    if not contains:
        return Verdict(status=Status.NOT_ORTHOGONAL, margin=None,
                       method=Method.WITNESS, tol=nr_tol, certificate=cert)

    k = comp.shape[0]
    fg = _abs_form_fg(comp)
    det_starts = [np.eye(k, dtype=comp.dtype)[:, j] for j in range(k)]
    stop = (0.1 * eps) ** 2 if eps > 0 else 0.0
    _, y, _ = multistart_minimize(fg, k, complex_field=a.field is Field.COMPLEX,
                                  restarts=restarts, seed=seed, det_starts=det_starts,
                                  max_iter=max_iter, stop_below=stop)
    basis = np.column_stack([vec.data for vec in sd.top_subspace])
    witness = Witness.from_vector(a, b, basis @ y)
    if witness.ip_residual > eps or witness.norm_residual > eps:
        raise WitnessSearchError(
            f"witness search failed: best residual {witness.epsilon:.3e} above {eps:.3e}",
            best_residual=witness.epsilon)
    return witness


def epsilon_witness(a: Matrix, b: Matrix, eps: float, *, restarts: int = 32,
                    seed: int = 0, max_iter: int = 400):
    """Search for a unit x with inf over lambda of ||(A + lambda B)x|| > ||A|| - eps.

    Success certifies orthogonality up to eps; failure (the expected outcome
    for a non-orthogonal pair) reports the best value reached.
    """
    _pair_checks(a, b, square=True)
    sigma_a = operator_norm(a)
    if sigma_a == 0.0:
        raise InputError("epsilon_witness needs a nonzero first matrix")
    if not (0.0 < eps < sigma_a):
        raise InputError(f"eps must lie in (0, ||a||) = (0, {sigma_a:.6g}), got {eps}")

    # the objective is capped at ||a||^2, so a start within machine precision
    # of the cap ends the search; the threshold itself is NOT an early-out,
    # otherwise loose eps would return needlessly sloppy witnesses
    stop = -(sigma_a ** 2) * (1.0 - 1e-14)
    best_phi, best_x, _ = _max_inner_inf(a, b, restarts=restarts, seed=seed,
                                         max_iter=max_iter, stop_below=stop)
    value = math.sqrt(max(best_phi, 0.0))
    threshold = sigma_a - eps
    if value > threshold:
        return Witness.from_vector(a, b, best_x)
    return WitnessFailure(best_value=value, threshold=threshold,
                          best_x=Vector(a.field, best_x))


def _neg_phi_fg(aa: np.ndarray, ba: np.ndarray):
    """Negated phi(x) = ||Ax||^2 - |<Ax, Bx>|^2 / ||Bx||^2 with its gradient."""
    ah = aa.conj().T
    bh = ba.conj().T

    def fg(x):
        u = aa @ x
        v = ba @ x
        uu = np.vdot(u, u).real
        vv = np.vdot(v, v).real
        au = ah @ u
        if vv <= 1e-300:
            return -uu, -2.0 * au
        c = np.vdot(v, u)
        cc = (c.conjugate() * c).real
        f = uu - cc / vv
        g = 2.0 * (au - ((c.conjugate() * (bh @ u) + c * (ah @ v)) * vv
                         - cc * (bh @ v)) / (vv * vv))
        return -f, -g

    return fg


def _max_inner_inf(a: Matrix, b: Matrix, *, restarts: int, seed: int,
                   max_iter: int, extra_starts=(), stop_below: float = -math.inf):
    """Maximize x -> inf over lambda of ||(A + lambda B)x|| over the unit sphere.

    Deterministic starts are the top singular basis of a (plus any callers'
    extras); the rest are seeded random points.  Returns (phi_best, x_best).
    """
    sd = top_singular_subspace(a)
    det_starts = [vec.data for vec in sd.top_subspace] + [np.asarray(s) for s in extra_starts]
    fg = _neg_phi_fg(a.data, b.data)
    neg_phi, x, used = multistart_minimize(fg, a.cols, complex_field=a.field is Field.COMPLEX,
                                           restarts=restarts, seed=seed,
                                           det_starts=det_starts, max_iter=max_iter,
                                           stop_below=stop_below)
    return -neg_phi, x, used


@dataclass(frozen=True)
class DecisionReport:
    """Combined outcome of the requested decision routes."""

    verdict: Verdict
    definitional: Verdict | None
    witness_verdict: Verdict | None
    witness: Witness | None
    witness_error: str | None = None


def decide(a: Matrix, b: Matrix, *, method: str = "both", tol: float = 1e-7,
           rank_tol: float = 1e-8, restarts: int = 32, seed: int = 0) -> DecisionReport:
    """Run the definitional route, the witness route, or both.

    When both run and disagree inside the band |margin| <= 10*tol the combined
    status is BOUNDARY; a disagreement outside the band is logged and the
    definitional verdict wins (it carries the margin).
    """
    if method not in ("def", "witness", "both"):
        raise InputError(f"method must be 'def', 'witness' or 'both', got {method!r}")

    defv = None
    witv = None
    witness = None
    werr = None
    if method in ("def", "both"):
        defv = check_definitional(a, b, tol)
    if method in ("witness", "both"):
        try:
            out = find_witness(a, b, rank_tol=rank_tol, restarts=restarts, seed=seed)
        except WitnessSearchError as exc:
            if method == "witness":
                raise
            werr = str(exc)
        else:
            if isinstance(out, Witness):
                witness = out
                witv = Verdict(status=Status.ORTHOGONAL, margin=None,
                               method=Method.WITNESS, tol=rank_tol)
            else:
                witv = out

    if method == "def":
        return DecisionReport(defv, defv, None, None)
    if method == "witness":
        return DecisionReport(witv, None, witv, witness)

    if witv is None:
        log.warning("witness route inconclusive (%s); reporting definitional verdict", werr)
        return DecisionReport(defv, defv, None, None, witness_error=werr)
    if witv.status is defv.status:
        return DecisionReport(defv, defv, witv, witness)
    if abs(defv.margin) <= 10.0 * tol:
        combined = Verdict(status=Status.BOUNDARY, margin=defv.margin,
                           method=Method.DEFINITIONAL, tol=tol,
                           certificate=witv.certificate)
        log.warning("routes disagree inside the boundary band: margin=%.3e", defv.margin)
        return DecisionReport(combined, defv, witv, witness)
    log.warning("routes disagree outside the boundary band: margin=%.3e, witness says %s",
                defv.margin, witv.status.value)
    return DecisionReport(defv, defv, witv, witness)
