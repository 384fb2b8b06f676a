"""Matrix and vector containers plus the spectral primitives everything else builds on.

The toolkit deliberately carries its own Hermitian eigensolver (cyclic Jacobi
with complex rotations) so that norms, singular subspaces and numerical-range
scans all share one deterministic code path.  Singular data of a matrix M is
read off the eigendecomposition of the Gram matrix M*M.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

_JACOBI_TOL = 1e-12      # relative off-diagonal threshold, fixed
_JACOBI_MAX_SWEEPS = 100


class InputError(ValueError):
    """Raised for malformed inputs: bad shapes, non-finite entries, bad tags."""


class ConvergenceError(RuntimeError):
    """Raised when an iteration fails to reach its required tolerance."""


class Field(enum.Enum):
    """Scalar field a matrix or vector lives over."""

    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, s: str) -> "Field":
        table = {"real": cls.REAL, "r": cls.REAL, "complex": cls.COMPLEX, "c": cls.COMPLEX}
        try:
            return table[str(s).lower()]
        except KeyError:
            raise InputError(f"unknown field tag {s!r}; expected 'real' or 'complex'") from None

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float64) if self is Field.REAL else np.dtype(np.complex128)


def _coerce(field: Field, data, ndim: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != ndim or arr.size == 0:
        raise InputError(f"expected non-empty {ndim}-d array, got shape {arr.shape}")
    if field is Field.REAL and np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise InputError("complex entries are not allowed under the real field tag")
        arr = arr.real
    arr = np.array(arr, dtype=field.dtype, order="C")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise InputError("entries must be finite (no NaN or Inf)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable dense matrix with an explicit scalar-field tag.

    Entries are stored as float64 (real) or complex128 (complex); a complex
    tag is kept even when every imaginary part is zero.
    """

    field: Field
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _coerce(self.field, self.data, 2))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_json_dict(self) -> dict:
        if self.field is Field.REAL:
            entries = [float(x) for x in self.data.ravel()]
        else:
            entries = [[float(z.real), float(z.imag)] for z in self.data.ravel()]
        return {"rows": self.rows, "cols": self.cols, "field": self.field.value, "data": entries}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Matrix":
        if not isinstance(d, dict):
            raise InputError("matrix JSON must be an object")
        missing = {"rows", "cols", "field", "data"} - set(d)
        if missing:
            raise InputError(f"matrix JSON missing keys: {sorted(missing)}")
        rows, cols = d["rows"], d["cols"]
        if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
            raise InputError("rows and cols must be positive integers")
        field = Field.parse(d["field"])
        data = d["data"]
        if not isinstance(data, list) or len(data) != rows * cols:
            got = len(data) if isinstance(data, list) else "non-list"
            raise InputError(f"data must be a flat row-major list of length {rows * cols}, got {got}")
        if field is Field.REAL:
            flat = []
            for x in data:
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise InputError("real matrix entries must be numbers")
                flat.append(float(x))
            arr = np.array(flat, dtype=np.float64).reshape(rows, cols)
        else:
            flat = []
            for x in data:
                if (not isinstance(x, list)) or len(x) != 2 or any(
                    isinstance(t, bool) or not isinstance(t, (int, float)) for t in x
                ):
                    raise InputError("complex matrix entries must be [re, im] pairs")
                flat.append(complex(float(x[0]), float(x[1])))
            arr = np.array(flat, dtype=np.complex128).reshape(rows, cols)
        return cls(field, arr)

    @classmethod
    def from_json(cls, text: str) -> "Matrix":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_json_dict(obj)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True, eq=False)
class Vector:
    """Immutable dense vector with an explicit scalar-field tag."""

    field: Field
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _coerce(self.field, self.data, 1))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def to_pairs(self) -> list:
        """Serialize entries as [re, im] pairs regardless of field."""
        return [[float(np.real(z)), float(np.imag(z))] for z in self.data]


def inner(u, v):
    """Inner product, linear in the first argument and conjugate-linear in the second.

    Accepts Vectors or raw 1-d arrays.  Returns a Python float for real
    inputs and a complex otherwise.
    """
    ua = u.data if isinstance(u, Vector) else np.asarray(u)
    va = v.data if isinstance(v, Vector) else np.asarray(v)
    if ua.shape != va.shape:
        raise InputError(f"dimension mismatch: {ua.shape} vs {va.shape}")
    out = np.vdot(va, ua)   # vdot conjugates its first argument
    if not (np.iscomplexobj(ua) or np.iscomplexobj(va)):
        return float(out.real)
    return complex(out)


@dataclass(frozen=True)
class SpectralData:
    """Top singular value of a matrix together with an orthonormal basis of
    the right singular subspace attached to it."""

    op_norm: float
    top_subspace: list
    rank_tol: float


def _offdiag_norm(a: np.ndarray) -> float:
    d = a.copy()
    np.fill_diagonal(d, 0.0)
    return float(np.linalg.norm(d))


def _jacobi_hermitian(a: np.ndarray, want_vectors: bool = True):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : ndarray
        Hermitian, float64 or complex128.  Not modified.
    want_vectors : bool
        Skip accumulating eigenvectors when False (cheaper in hot loops).

    Returns
    -------
    w : ndarray
        Eigenvalues, ascending.
    v : ndarray or None
        Orthonormal eigenvectors as columns, aligned with w.

    Sweeps run in a fixed cyclic order until the off-diagonal Frobenius mass
    falls below 1e-12 relative to the full Frobenius norm, capped at 100
    sweeps.  Entirely deterministic for a fixed input.
    """
    n = a.shape[0]
    work = np.array(a, copy=True)
    v = np.eye(n, dtype=work.dtype) if want_vectors else None
    fro = float(np.linalg.norm(work))
    if fro == 0.0 or n == 1:
        w = np.real(np.diag(work)).copy()
        return w, v

    thresh = _JACOBI_TOL * fro
    skip = 1e-18 * fro
    converged = False
    for _ in range(_JACOBI_MAX_SWEEPS):
        if _offdiag_norm(work) <= thresh:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                ab = abs(apq)
                if ab <= skip:
                    continue
                app = work[p, p].real
                aqq = work[q, q].real
                phase = apq / ab
                tau = (aqq - app) / (2.0 * ab)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                u = np.array([[phase * c, phase * s], [-s, c]], dtype=work.dtype)
                work[[p, q], :] = u.conj().T @ work[[p, q], :]
                work[:, [p, q]] = work[:, [p, q]] @ u
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                if want_vectors:
                    v[:, [p, q]] = v[:, [p, q]] @ u
    else:
        converged = _offdiag_norm(work) <= thresh
    if not converged:
        raise ConvergenceError("Jacobi eigensolver did not converge in 100 sweeps")

    w = np.real(np.diag(work)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if want_vectors:
        v = v[:, order]
        # canonical phase: largest-modulus component made real positive
        for k in range(n):
            j = int(np.argmax(np.abs(v[:, k])))
            piv = v[j, k]
            mag = abs(piv)
            if mag > 0.0:
                v[:, k] = v[:, k] * (np.conj(piv) / mag)
    return w, v


def _jacobi_eigvals_scalar(a: np.ndarray) -> list:
    """Eigenvalues of a small Hermitian matrix by the same cyclic Jacobi scheme.

    Scalar Python arithmetic outruns per-call numpy overhead up to n of about
    16, which covers every hot loop in the toolkit.  Thresholds and rotation
    order match _jacobi_hermitian exactly.
    """
    n = a.shape[0]
    w = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    fro = math.sqrt(sum(abs(w[i][j]) ** 2 for i in range(n) for j in range(n)))
    if fro == 0.0 or n == 1:
        return sorted(w[i][i].real for i in range(n))
    thresh = _JACOBI_TOL * fro
    skip = 1e-18 * fro
    converged = False
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(abs(w[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= thresh:
            converged = True
            break
        for p in range(n - 1):
            wp = w[p]
            for q in range(p + 1, n):
                wq = w[q]
                apq = wp[q]
                ab = abs(apq)
                if ab <= skip:
                    continue
                app = wp[p].real
                aqq = wq[q].real
                phase = apq / ab
                tau = (aqq - app) / (2.0 * ab)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                u00 = phase * c
                u01 = phase * s
                cu00 = u00.conjugate()
                cu01 = u01.conjugate()
                for k in range(n):
                    xp = wp[k]
                    xq = wq[k]
                    wp[k] = cu00 * xp - s * xq
                    wq[k] = cu01 * xp + c * xq
                for row in w:
                    xp = row[p]
                    xq = row[q]
                    row[p] = xp * u00 - xq * s
                    row[q] = xp * u01 + xq * c
                wp[q] = 0.0
                wq[p] = 0.0
                wp[p] = complex(wp[p].real, 0.0)
                wq[q] = complex(wq[q].real, 0.0)
    else:
        off = math.sqrt(sum(abs(w[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        converged = off <= thresh
    if not converged:
        raise ConvergenceError("Jacobi eigensolver did not converge in 100 sweeps")
    return sorted(w[i][i].real for i in range(n))


def _require_hermitian(a: np.ndarray) -> None:
    fro = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > 1e-10 * max(fro, 1e-300):
        raise InputError("matrix is not Hermitian within 1e-10 relative tolerance")


def hermitian_eig(h: Matrix):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises InputError if the input is not square or deviates from Hermitian
    symmetry by more than 1e-10 in relative Frobenius norm.
    """
    if not h.is_square():
        raise InputError(f"hermitian_eig needs a square matrix, got {h.shape}")
    _require_hermitian(h.data)
    sym = 0.5 * (h.data + h.data.conj().T)   # exact symmetrization of rounding noise
    w, v = _jacobi_hermitian(sym, want_vectors=True)
    vectors = [Vector(h.field, v[:, k]) for k in range(v.shape[1])]
    return [float(x) for x in w], vectors


def _eigvals_hermitian(a: np.ndarray) -> list:
    """Ascending eigenvalues of a raw Hermitian array, sized dispatch."""
    if a.shape[0] <= 16:
        return _jacobi_eigvals_scalar(a)
    w, _ = _jacobi_hermitian(a, want_vectors=False)
    return [float(x) for x in w]


def _sigma_max_sq(a: np.ndarray) -> float:
    if a.shape[0] >= a.shape[1]:
        gram = a.conj().T @ a
    else:
        gram = a @ a.conj().T
    return max(_eigvals_hermitian(gram)[-1], 0.0)


def operator_norm(m: Matrix) -> float:
    """Spectral norm (largest singular value) of a matrix."""
    return math.sqrt(_sigma_max_sq(m.data))


def top_singular_subspace(m: Matrix, rank_tol: float = 1e-8) -> SpectralData:
    """Orthonormal basis of the right singular vectors attached to the top
    singular value.

    Parameters
    ----------
    m : Matrix
    rank_tol : float
        Relative band width: singular vectors with sigma >= sigma_max * (1 - rank_tol)
        belong to the subspace.  Must lie in (0, 1e-2).

    Returns
    -------
    SpectralData
        op_norm, the basis (descending by singular value), and the rank_tol used.

    For the zero matrix every singular value ties at zero, so the subspace is
    the full standard basis.
    """
    if not (0.0 < rank_tol < 1e-2):
        raise InputError(f"rank_tol must lie in (0, 1e-2), got {rank_tol}")
    a = m.data
    gram = a.conj().T @ a
    w, v = _jacobi_hermitian(gram, want_vectors=True)
    sigmas = np.sqrt(np.clip(w, 0.0, None))
    smax = float(sigmas[-1])
    cut = smax * (1.0 - rank_tol)
    keep = [k for k in range(len(sigmas)) if sigmas[k] >= cut]
    keep.sort(key=lambda k: -sigmas[k])
    basis = [Vector(m.field, v[:, k]) for k in keep]
    return SpectralData(op_norm=smax, top_subspace=basis, rank_tol=rank_tol)
