"""Dense linear algebra over R or C with explicit tolerances.

Matrices are plain numpy arrays: ``float64`` for the real field and
``complex128`` for the complex field.  The field of an array is read off
its dtype, and functions that combine two arrays refuse to mix fields.

Hermitian matrices are encoded as real coordinate vectors: diagonal
entries first, then sqrt(2) times the strictly upper triangular entries
(real parts, then imaginary parts in the complex case).  The encoding is
an isometry from the Frobenius real inner product ``Re tr(A B*)`` to the
Euclidean inner product, so ranks and orthonormality can be computed on
coordinates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NotHermitian, NotIsometry

SQRT2 = math.sqrt(2.0)


class Field(enum.Enum):
    REAL = "R"
    COMPLEX = "C"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def parse(cls, value) -> "Field":
        if isinstance(value, Field):
            return value
        key = str(value).strip().upper()
        if key in ("R", "REAL"):
            return cls.REAL
        if key in ("C", "COMPLEX"):
            return cls.COMPLEX
        raise InvalidInput(f"unknown field {value!r}")


@dataclass(frozen=True)
class Tolerances:
    rank_rel: float = 1e-8
    residual_abs: float = 1e-9

    def __post_init__(self):
        if not 0 < self.rank_rel < 1 or not 0 < self.residual_abs < 1:
            raise InvalidInput(f"tolerances must lie in (0, 1): {self}")

    def as_dict(self) -> dict:
        return {"rank_rel": self.rank_rel, "residual_abs": self.residual_abs}


DEFAULT_TOL = Tolerances()


def field_of(A) -> Field:
    return Field.COMPLEX if np.iscomplexobj(A) else Field.REAL


def as_field(A, field: Field) -> np.ndarray:
    """Cast ``A`` to the dtype of ``field``; complex data with nonzero
    imaginary part cannot be cast to the real field."""
    A = np.asarray(A)
    if field is Field.REAL and np.iscomplexobj(A):
        if np.any(A.imag != 0):
            raise InvalidInput("complex entries in a real-field matrix")
        A = A.real
    return np.array(A, dtype=field.dtype)


def same_field(*arrays) -> Field:
    fields = {field_of(A) for A in arrays}
    if len(fields) != 1:
        raise InvalidInput("mixed-field operation")
    return fields.pop()


def dim_herm(d: int, field: Field) -> int:
    """Real dimension of the space of Hermitian d x d matrices."""
    return d * (d + 1) // 2 if field is Field.REAL else d * d


def _check_finite(A: np.ndarray) -> None:
    if A.size == 0:
        raise InvalidInput("empty matrix")
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")


def svd(A):
    """Thin SVD ``A = U diag(sigma) V*`` with ``sigma`` nonincreasing.

    Returns ``(U, sigma, V)``; note ``V`` and not ``V*``.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise InvalidInput("svd expects a 2-D array")
    _check_finite(A)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return U, s, Vh.conj().T


def rank_threshold(sigma, tol: Tolerances = DEFAULT_TOL) -> float:
    smax = float(sigma[0]) if len(sigma) else 0.0
    return tol.rank_rel * max(smax, 1.0)


def numerical_rank(A, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values above ``rank_rel * max(sigma_max, 1)``."""
    _, s, _ = svd(A)
    return int(np.count_nonzero(s > rank_threshold(s, tol)))


@dataclass(frozen=True)
class RankCertificate:
    """Rank plus the ratio between the smallest kept and largest dropped
    singular value.  When no nonzero singular value was dropped the ratio
    is taken against the rank cutoff instead."""

    rank: int
    gap: float
    null_basis: np.ndarray  # columns span the kernel

    def certified(self, min_gap: float = 1e4) -> bool:
        return self.gap >= min_gap

    @property
    def nullity(self) -> int:
        return self.null_basis.shape[1]


def rank_certificate(A, tol: Tolerances = DEFAULT_TOL) -> RankCertificate:
    """Rank, kernel basis and singular-value gap of a real or complex matrix.

    Accepts matrices with zero rows (every vector is in the kernel).
    """
    A = np.asarray(A)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return RankCertificate(0, math.inf, np.eye(cols, dtype=A.dtype))
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")
    # a full V is only needed when A is wide; a full U is never needed
    _, s, Vh = np.linalg.svd(A, full_matrices=A.shape[0] < cols)
    thr = rank_threshold(s, tol)
    rank = int(np.count_nonzero(s > thr))
    # with nothing (or only exact zeros) dropped, measure against the cutoff
    if rank == 0:
        gap = math.inf if s[0] == 0 else float(thr / s[0])
    elif rank < len(s) and s[rank] > 0:
        gap = float(s[rank - 1] / s[rank])
    else:
        gap = float(s[rank - 1] / thr)
    null = Vh[rank:].conj().T
    return RankCertificate(rank, gap, null)


def null_space(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal kernel basis of a real matrix, one vector per column."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        raise InvalidInput("null_space expects a real matrix; encode coordinates first")
    return rank_certificate(A, tol).null_basis


def polar_unitary(A) -> np.ndarray:
    """Unitary factor ``W`` of the polar decomposition ``A = W |A|``."""
    U, _, V = svd(A)
    return U @ V.conj().T


def is_isometry(Phi, atol: float) -> bool:
    Phi = np.asarray(Phi)
    G = Phi.conj().T @ Phi
    return bool(np.max(np.abs(G - np.eye(G.shape[0]))) <= atol)


def complete_to_unitary(Phi, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Append orthonormal columns to the isometry ``Phi`` (d x r) to get a
    d x d unitary whose first r columns are exactly ``Phi``.

    New columns come from Gram-Schmidt on the standard basis vectors,
    always taking the one with the largest remaining component.
    """
    Phi = np.asarray(Phi)
    if Phi.ndim != 2 or Phi.shape[0] < Phi.shape[1]:
        raise InvalidInput("complete_to_unitary expects a tall d x r matrix")
    if not is_isometry(Phi, tol.residual_abs):
        raise NotIsometry("columns are not orthonormal")
    d, r = Phi.shape
    Q = np.zeros((d, d), dtype=Phi.dtype)
    Q[:, :r] = Phi
    for k in range(r, d):
        basis = Q[:, :k]
        R = np.eye(d, dtype=Phi.dtype)
        for _ in range(2):
            R = R - basis @ (basis.conj().T @ R)
        norms = np.linalg.norm(R, axis=0)
        j = int(np.argmax(norms))
        Q[:, k] = R[:, j] / norms[j]
    return Q


def random_unitary(n: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal/unitary matrix."""
    Z = rng.standard_normal((n, n))
    if field is Field.COMPLEX:
        Z = (Z + 1j * rng.standard_normal((n, n))) / SQRT2
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


# Hermitian coordinates ---------------------------------------------------

@dataclass(frozen=True)
class HermCoords:
    field: Field
    d: int
    coords: np.ndarray

    def __post_init__(self):
        if self.coords.shape != (dim_herm(self.d, self.field),):
            raise InvalidInput("coordinate vector has the wrong length")


def herm_coords_array(M, field: Field) -> np.ndarray:
    """Coordinates of one Hermitian matrix or a stack ``(..., d, d)``.

    No Hermiticity check; the lower triangle is ignored.
    """
    M = np.asarray(M)
    d = M.shape[-1]
    iu, ju = np.triu_indices(d, 1)
    diag = np.real(np.diagonal(M, axis1=-2, axis2=-1))
    upper = M[..., iu, ju]
    parts = [diag, SQRT2 * np.real(upper)]
    if field is Field.COMPLEX:
        parts.append(SQRT2 * np.imag(upper))
    return np.concatenate(parts, axis=-1)


def coords_array_to_herm(c, d: int, field: Field) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    iu, ju = np.triu_indices(d, 1)
    m = len(iu)
    M = np.zeros(c.shape[:-1] + (d, d), dtype=field.dtype)
    idx = np.arange(d)
    M[..., idx, idx] = c[..., :d]
    upper = c[..., d:d + m] / SQRT2
    if field is Field.COMPLEX:
        upper = upper + 1j * c[..., d + m:d + 2 * m] / SQRT2
    M[..., iu, ju] = upper
    M[..., ju, iu] = np.conj(upper)
    return M


def herm_to_coords(M, tol: Tolerances = DEFAULT_TOL) -> HermCoords:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInput("expected a square matrix")
    if np.max(np.abs(M - M.conj().T)) > tol.residual_abs:
        raise NotHermitian("matrix is not Hermitian")
    field = field_of(M)
    return HermCoords(field, M.shape[0], herm_coords_array(M, field))


def coords_to_herm(c: HermCoords) -> np.ndarray:
    return coords_array_to_herm(c.coords, c.d, c.field)


def herm_basis(d: int, field: Field) -> np.ndarray:
    """Orthonormal basis of the Hermitian d x d matrices, shape (D, d, d),
    ordered to match the coordinate encoding."""
    D = dim_herm(d, field)
    return coords_array_to_herm(np.eye(D), d, field)
