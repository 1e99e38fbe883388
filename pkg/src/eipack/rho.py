"""rho-orthonormal families of unitaries, simplices, and the EITFF(2r, r, n)
built from them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bounds import radon_hurwitz, rh_decomposition
from .errors import (
    BasisTooShort,
    InternalInconsistency,
    InvalidInput,
    NotApplicable,
    UnsupportedDyadicPart,
)
from .numerics import DEFAULT_TOL, Field, Tolerances, as_field, field_of, null_space, random_unitary
from .subspaces import SubspaceSequence


def rho_inner(A, B) -> float:
    """(1/r) Re tr(A B*)."""
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim != 2 or A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise InvalidInput("rho_inner expects two square matrices of equal size")
    return float(np.real(np.vdot(B, A))) / A.shape[0]


def rho_gram(mats) -> np.ndarray:
    M = np.asarray(mats)
    r = M.shape[-1]
    return np.real(np.einsum("iab,jab->ij", M, M.conj())) / r


def _unitarity(mats) -> float:
    r = mats.shape[-1]
    G = np.einsum("kba,kbc->kac", mats.conj(), mats)
    return float(np.max(np.abs(G - np.eye(r)), initial=0.0))


def anticommutation_residual(mats) -> float:
    """max over i != j of |C_i* C_j + C_j* C_i|."""
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            X = mats[i].conj().T @ mats[j]
            worst = max(worst, float(np.max(np.abs(X + X.conj().T))))
    return worst


class RhoSequence:
    """Unitaries C_1..C_m with C_i* C_j + C_j* C_i = 0 for i != j."""

    def __init__(self, mats, field=None, tol: Tolerances = DEFAULT_TOL):
        mats = np.asarray(mats)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[0] == 0:
            raise InvalidInput("expected a stack of square matrices")
        field = field_of(mats) if field is None else Field.parse(field)
        mats = as_field(mats, field)
        self.field, self.mats = field, mats
        self.r = mats.shape[1]
        if _unitarity(mats) > tol.residual_abs:
            raise InvalidInput("rho-sequence element is not unitary")
        if anticommutation_residual(mats) > tol.residual_abs:
            raise InvalidInput("sequence is not rho-orthonormal")
        if len(mats) > radon_hurwitz(self.r, field):
            raise InternalInconsistency("rho-orthonormal sequence longer than the Radon-Hurwitz number")

    def __len__(self):
        return len(self.mats)

    def __getitem__(self, j):
        return self.mats[j]

    def combine(self, coeffs) -> np.ndarray:
        """Real linear combination sum_j coeffs[j] C_j."""
        coeffs = np.asarray(coeffs, dtype=float)
        return np.einsum("j,jab->ab", coeffs, self.mats[: len(coeffs)])


class Simplex:
    """m unitaries with pairwise rho-inner product -1/(m-1)."""

    def __init__(self, mats, field=None, tol: Tolerances = DEFAULT_TOL):
        mats = np.asarray(mats)
        field = field_of(mats) if field is None else Field.parse(field)
        mats = as_field(mats, field)
        if mats.ndim != 3 or mats.shape[0] < 2:
            raise InvalidInput("a simplex needs at least two matrices")
        self.field, self.mats = field, mats
        self.m, self.r = mats.shape[0], mats.shape[1]
        if _unitarity(mats) > tol.residual_abs:
            raise InvalidInput("simplex element is not unitary")
        G = rho_gram(mats)
        target = np.full((self.m, self.m), -1.0 / (self.m - 1))
        np.fill_diagonal(target, 1.0)
        if np.max(np.abs(G - target)) > tol.residual_abs:
            raise InvalidInput("rho-inner products are not -1/(m-1)")

    def __len__(self):
        return self.m


# Families ----------------------------------------------------------------

def build_rho_complex(r: int) -> RhoSequence:
    """A maximal complex rho-orthonormal family of length rho_C(r) whose
    C0-space is {0}.

    Start from (iI, I) in odd size 2a+1, then double k times:
    C_j -> [[0, -C_j*], [C_j, 0]], followed by diag(iI, -iI) and I.
    """
    if r < 1:
        raise InvalidInput("r must be positive")
    a, b, c = rh_decomposition(r)
    k = 4 * b + c
    s = 2 * a + 1
    mats = [1j * np.eye(s), np.eye(s, dtype=complex)]
    for _ in range(k):
        z = np.zeros((s, s), dtype=complex)
        new = [np.block([[z, -C.conj().T], [C, z]]) for C in mats]
        new.append(np.block([[1j * np.eye(s), z], [z, -1j * np.eye(s)]]))
        new.append(np.eye(2 * s, dtype=complex))
        mats, s = new, 2 * s
    return RhoSequence(np.stack(mats), Field.COMPLEX)


def _cayley_dickson_mul(x, y):
    """Product in the Cayley-Dickson algebra of dimension len(x) (a power
    of two): (a, b)(c, d) = (ac - d* b, da + b c*)."""
    n = len(x)
    if n == 1:
        return x * y
    h = n // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    return np.concatenate(
        [
            _cayley_dickson_mul(a, c) - _cayley_dickson_mul(_cd_conj(d), b),
            _cayley_dickson_mul(d, a) + _cayley_dickson_mul(b, _cd_conj(c)),
        ]
    )


def _cd_conj(x):
    out = -x.copy()
    out[0] = x[0]
    return out


def left_multiplication_family(dim: int) -> np.ndarray:
    """Left multiplication by the imaginary units of R, C, H or O
    (dim = 1, 2, 4, 8), followed by the identity."""
    if dim not in (1, 2, 4, 8):
        raise UnsupportedDyadicPart(f"no normed division algebra of dimension {dim}")
    eye = np.eye(dim)
    mats = []
    for i in range(1, dim):
        mats.append(np.stack([_cayley_dickson_mul(eye[i], eye[j]) for j in range(dim)], axis=1))
    mats.append(eye)
    return np.stack(mats)


def build_rho_real(r: int) -> RhoSequence:
    """Maximal real family for r = (2a+1) 2^c, c <= 3: the division-algebra
    family tensored with I_{2a+1}."""
    if r < 1:
        raise InvalidInput("r must be positive")
    a, b, c = rh_decomposition(r)
    if b:
        raise UnsupportedDyadicPart("real families for r divisible by 16 are not built")
    fam = left_multiplication_family(2**c)
    mats = np.stack([np.kron(A, np.eye(2 * a + 1)) for A in fam])
    return RhoSequence(mats, Field.REAL)


def build_rho(r: int, field) -> RhoSequence:
    return build_rho_complex(r) if Field.parse(field) is Field.COMPLEX else build_rho_real(r)


# Simplices and the EITFF(2r, r, n) ------------------------------------------

def regular_simplex(m: int) -> np.ndarray:
    """m unit vectors in R^{m-1} with pairwise dot product -1/(m-1), one per row."""
    if m < 2:
        raise InvalidInput("a simplex needs m >= 2")
    centered = np.eye(m) - 1.0 / m
    basis = null_space(np.ones((1, m)))  # m x (m-1), orthonormal
    V = centered @ basis
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def simplex_from_basis(R: RhoSequence, m: int, rotation: Optional[np.ndarray] = None) -> Simplex:
    """B_i = sum_j v_i[j] C_j for the vertices v_i of a regular simplex.

    The vertices live in the first m-1 coordinates; ``rotation`` (an
    orthogonal matrix of size len(R)) turns them within the whole span.
    """
    if m < 2:
        raise InvalidInput("a simplex needs m >= 2")
    if m - 1 > len(R):
        raise BasisTooShort(f"a {m}-simplex needs {m - 1} basis elements, have {len(R)}")
    V = np.zeros((m, len(R)))
    V[:, : m - 1] = regular_simplex(m)
    if rotation is not None:
        rotation = np.asarray(rotation, dtype=float)
        if rotation.shape != (len(R), len(R)) or np.max(np.abs(rotation.T @ rotation - np.eye(len(R)))) > 1e-10:
            raise InvalidInput("rotation must be an orthogonal matrix of size len(R)")
        V = V @ rotation.T
    return Simplex(np.stack([R.combine(v) for v in V]), R.field)


def random_simplex(R: RhoSequence, m: int, rng: np.random.Generator) -> Simplex:
    """Regular simplex turned by a random orthogonal map of the rho-space."""
    return simplex_from_basis(R, m, rotation=random_unitary(len(R), Field.REAL, rng))


def rh_alpha(n: int) -> float:
    return math.sqrt((n - 2) / (2 * n - 2))


def eitff_from_simplex(B: Simplex) -> SubspaceSequence:
    """Phi_1 = (I; 0), Phi_j = (alpha I; beta B_j): an EITFF(2r, r, m + 1)."""
    n, r = B.m + 1, B.r
    alpha = rh_alpha(n)
    beta = math.sqrt(1 - alpha**2)
    phis = np.zeros((n, 2 * r, r), dtype=B.field.dtype)
    phis[0, :r] = np.eye(r)
    for j in range(1, n):
        phis[j, :r] = alpha * np.eye(r)
        phis[j, r:] = beta * B.mats[j - 1]
    return SubspaceSequence(phis, B.field)


# C0-space ------------------------------------------------------------------

@dataclass(frozen=True)
class C0Space:
    dim: int
    basis: np.ndarray  # (dim, r, r)


def c0_space(mats, field=None, tol: Tolerances = DEFAULT_TOL) -> C0Space:
    """Real space of C0 with C0* C_j + C_j* C0 = 0 for every given C_j."""
    mats = np.asarray(mats)
    field = field_of(mats) if field is None else Field.parse(field)
    r = mats.shape[-1]
    units = []
    for p in range(r):
        for q in range(r):
            E = np.zeros((r, r), dtype=field.dtype)
            E[p, q] = 1
            units.append(E)
    if field is Field.COMPLEX:
        units += [1j * E for E in units]
    cols = []
    for E in units:
        out = [E.conj().T @ C + C.conj().T @ E for C in mats]
        flat = np.concatenate([o.ravel() for o in out])
        cols.append(np.concatenate([flat.real, flat.imag]) if field is Field.COMPLEX else flat.real)
    A = np.stack(cols, axis=1)
    N = null_space(A, tol)
    basis = np.einsum("kd,dab->kab", N.T, np.stack(units)) if N.shape[1] else np.zeros((0, r, r), field.dtype)
    return C0Space(N.shape[1], basis)


def _simplex_blocks(S: SubspaceSequence, tol: Tolerances):
    """Recover alpha and the unitaries B_j of an EITFF in (I;0), (aI; bB_j) form."""
    r, n = S.r, S.n
    if S.d != 2 * r or n < 3:
        raise InvalidInput("expected an EITFF(2r, r, n) with n >= 3")
    alpha = rh_alpha(n)
    beta = math.sqrt(1 - alpha**2)
    eye = np.eye(r)
    if np.max(np.abs(S[0][:r] - eye)) > tol.residual_abs or np.max(np.abs(S[0][r:])) > tol.residual_abs:
        raise InvalidInput("first isometry is not (I; 0)")
    for j in range(1, n):
        if np.max(np.abs(S[j][:r] - alpha * eye)) > tol.residual_abs:
            raise InvalidInput("top blocks are not alpha I")
    return np.stack([S[j][r:] / beta for j in range(1, n)])


def rho_orthonormal_basis(mats, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """rho-orthonormal basis of the real span of matrices in a rho-space."""
    G = rho_gram(mats)
    lam, Q = np.linalg.eigh(G)
    keep = lam > tol.rank_rel * max(lam[-1], 1.0)
    coeffs = Q[:, keep] / np.sqrt(lam[keep])
    return np.einsum("ik,iab->kab", coeffs, np.asarray(mats))


def dim_Kn_via_sform(S: SubspaceSequence, basis=None, tol: Tolerances = DEFAULT_TOL) -> int:
    """n + dim C0-space of a rho-orthonormal basis of span{B_j}, cross-checked
    against the corner-space computation of dim K_n."""
    from .corner import corner_space

    B = _simplex_blocks(S, tol)
    if basis is None:
        basis = rho_orthonormal_basis(B, tol)
    basis = np.asarray(basis)
    if len(basis) != S.n - 2:
        raise InvalidInput(f"basis must have n - 2 = {S.n - 2} elements")
    # every B_j must lie in the span of the basis
    coeff = np.real(np.einsum("jab,kab->jk", B, basis.conj())) / S.r
    if np.max(np.abs(np.einsum("jk,kab->jab", coeff, basis) - B)) > 1e3 * tol.residual_abs:
        raise InvalidInput("basis does not span the simplex")
    value = S.n + c0_space(basis, S.field, tol).dim
    K = corner_space(S, range(S.n), tol)
    if not K.certified or K.dim != value:
        raise InternalInconsistency(f"dim K_n: corner space gives {K.dim}, C0 route gives {value}")
    return value


# Non-power-of-two counterexample -------------------------------------------

def counterexample_not_power_of_two(r: int, field):
    """rho-orthonormal family in F^{r x r}, r = (2a+1) 2^k with a >= 1,
    together with a nonzero C0 anticommuting with all of it.

    C_j = D kron A_j for the family A of size 2^k (last element I), with
    D = diag(1, -I_{2a}); the last C is I_r.
    """
    field = Field.parse(field)
    a, b, c = rh_decomposition(r)
    if a == 0:
        raise NotApplicable("r is a power of 2")
    k = 4 * b + c
    A = build_rho(2**k, field).mats
    D = np.diag([1.0] + [-1.0] * (2 * a))
    mats = [np.kron(D, Aj) for Aj in A[:-1]] + [np.eye(r)]
    R = RhoSequence(np.stack(mats).astype(field.dtype), field)
    E = np.zeros((2 * a + 1, 2 * a + 1))
    E[0, 1], E[1, 0] = 1.0, -1.0
    C0 = np.kron(E, np.eye(2**k)).astype(field.dtype)
    resid = max(float(np.max(np.abs(C0.conj().T @ C + C.conj().T @ C0))) for C in R.mats)
    if resid > DEFAULT_TOL.residual_abs:
        raise InternalInconsistency("C0 does not anticommute with the family")
    return R, C0


def counterexample_eitff(r: int, field) -> SubspaceSequence:
    """EITFF_F(2r, r, rho_F(r) + 2) from the counterexample family."""
    R, _ = counterexample_not_power_of_two(r, field)
    return eitff_from_simplex(simplex_from_basis(R, len(R) + 1))
