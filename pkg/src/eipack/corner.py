"""Corner matrix spaces.

For subspaces with isometries Phi_i, the corner space K_J is the real
vector space of Hermitian M with ``Phi_i* M Phi_i`` a multiple of I_r for
every i in J.  Each index contributes the real-linear constraint "the
traceless part of Phi_i* M Phi_i vanishes", i.e. dim Herm(r) - 1 rows in
Hermitian coordinates.  Index sets are 0-based in this module.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import AlphaOne, InternalInconsistency, InvalidInput, NotEquiIsoclinic, UncertainDimension
from .numerics import (
    DEFAULT_TOL,
    Field,
    Tolerances,
    coords_array_to_herm,
    dim_herm,
    herm_basis,
    herm_coords_array,
    null_space,
    numerical_rank,
    rank_certificate,
)
from .subspaces import SubspaceSequence, is_equi_isoclinic

MIN_GAP = 1e4


def _traceless_frame(r: int, field: Field) -> np.ndarray:
    """Orthonormal columns spanning the coordinates orthogonal to I_r."""
    ident = herm_coords_array(np.eye(r), field)[None, :]
    return null_space(ident)


def corner_constraints(S: SubspaceSequence, J: Iterable[int]) -> np.ndarray:
    """Stacked real constraint matrix whose kernel is K_J (in coordinates)."""
    J = _check_J(S, J)
    E = herm_basis(S.d, S.field)
    Q = _traceless_frame(S.r, S.field)
    rows = []
    for i in J:
        Phi = S[i]
        compressed = np.einsum("ar,kab,bs->krs", Phi.conj(), E, Phi)
        rows.append((herm_coords_array(compressed, S.field) @ Q).T)
    return np.concatenate(rows, axis=0)


def _check_J(S, J) -> tuple:
    J = tuple(int(i) for i in J)
    if not J or len(set(J)) != len(J) or min(J) < 0 or max(J) >= S.n:
        raise InvalidInput(f"invalid index set {J} for n={S.n}")
    return J


@dataclass(frozen=True)
class CornerBasis:
    J: tuple
    dim: int
    basis: np.ndarray  # (dim Herm(d), dim) orthonormal coordinate columns
    field: Field
    d: int
    r: int
    gap: float

    @property
    def certified(self) -> bool:
        return self.gap >= MIN_GAP

    def matrices(self) -> np.ndarray:
        return coords_array_to_herm(self.basis.T, self.d, self.field)


def corner_space(S: SubspaceSequence, J, tol: Tolerances = DEFAULT_TOL) -> CornerBasis:
    J = _check_J(S, J)
    cert = rank_certificate(corner_constraints(S, J), tol)
    return CornerBasis(J, cert.nullity, cert.null_basis, S.field, S.d, S.r, cert.gap)


def corner_residuals(S: SubspaceSequence, K: CornerBasis) -> dict:
    """How well K satisfies its defining constraints and contains the
    projections of S."""
    Ms = K.matrices()
    worst = 0.0
    for i in K.J:
        C = np.einsum("ar,kab,bs->krs", S[i].conj(), Ms, S[i])
        tr = np.trace(C, axis1=1, axis2=2).real / S.r
        worst = max(worst, float(np.max(np.abs(C - tr[:, None, None] * np.eye(S.r)), initial=0.0)))
    P = herm_coords_array(S.projections(), S.field)
    recon = P - (P @ K.basis) @ K.basis.T
    return {"constraint": worst, "projections": float(np.max(np.abs(recon)))}


def closed_form_dim(d: int, r: int, field: Field, j: int) -> int:
    """dim Herm(d) - j dim Herm(r) + j, valid for j <= 3."""
    return dim_herm(d, field) - j * dim_herm(r, field) + j


def _ei_alpha_below_one(S, tol) -> float:
    alpha = is_equi_isoclinic(S, tol)
    if alpha is None:
        raise NotEquiIsoclinic("sequence is not equi-isoclinic")
    if alpha >= 1 - tol.residual_abs:
        raise AlphaOne("alpha = 1: the projections are linearly dependent")
    return alpha


@dataclass(frozen=True)
class CornerPrefix:
    dims: tuple
    gaps: tuple
    alpha: float
    warnings: tuple = ()

    @property
    def certified(self) -> bool:
        return all(g >= MIN_GAP for g in self.gaps)


def corner_prefix(
    S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL, upto: Optional[int] = None, strict: bool = True
) -> CornerPrefix:
    """dim K_1, ..., dim K_upto with the checks that hold for any EI with
    alpha < 1: the dims are nonincreasing, at least n, and match the closed
    forms for j <= 3.  With ``strict=False`` violations become warnings."""
    alpha = _ei_alpha_below_one(S, tol)
    upto = S.n if upto is None else upto
    if not 1 <= upto <= S.n:
        raise InvalidInput("upto must lie in [1, n]")
    dims, gaps, notes = [], [], []
    for j in range(1, upto + 1):
        cert = rank_certificate(corner_constraints(S, range(j)), tol)
        dims.append(cert.nullity)
        gaps.append(cert.gap)
    for j, g in enumerate(gaps, 1):
        if g < MIN_GAP:
            notes.append(f"dim K_{j}: singular-value gap {g:.3g} below {MIN_GAP:g}")
    for j in range(1, len(dims)):
        if dims[j] > dims[j - 1]:
            notes.append(f"dim K_{j + 1} > dim K_{j}")
    for j, k in enumerate(dims, 1):
        if k < S.n:
            notes.append(f"dim K_{j} = {k} < n = {S.n}")
        if j <= 3 and (j < 3 or S.n >= 3) and k != closed_form_dim(S.d, S.r, S.field, j):
            notes.append(f"dim K_{j} = {k} differs from closed form {closed_form_dim(S.d, S.r, S.field, j)}")
    if notes:
        if strict:
            if any("gap" in m for m in notes):
                raise UncertainDimension("; ".join(notes))
            raise InternalInconsistency("; ".join(notes))
        for m in notes:
            warnings.warn(m, stacklevel=2)
    return CornerPrefix(tuple(dims), tuple(gaps), alpha, tuple(notes))


def dims_K_prefix(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> tuple:
    return corner_prefix(S, tol).dims


def dim_L(S: SubspaceSequence, J, tol: Tolerances = DEFAULT_TOL) -> int:
    """dim L_J, L_J = {M : Phi_i* M Phi_i = c I_r for all i in J, one c}.

    Solved directly in the unknowns (M, c); the map (M, c) -> M is
    injective on solutions, so the kernel dimension is dim L_J.  The result
    is checked against dim K_J - |J| + 1.
    """
    J = _check_J(S, J)
    E = herm_basis(S.d, S.field)
    ident = herm_coords_array(np.eye(S.r), S.field)
    blocks = []
    for i in J:
        Phi = S[i]
        comp = herm_coords_array(np.einsum("ar,kab,bs->krs", Phi.conj(), E, Phi), S.field).T
        blocks.append(np.concatenate([comp, -ident[:, None]], axis=1))
    cert = rank_certificate(np.concatenate(blocks, axis=0), tol)
    K = corner_space(S, J, tol)
    if not (cert.certified(MIN_GAP) and K.certified):
        raise UncertainDimension("rank gap too small for dim L_J")
    if cert.nullity != K.dim - len(J) + 1:
        raise InternalInconsistency(f"dim L_J = {cert.nullity} but dim K_J - |J| + 1 = {K.dim - len(J) + 1}")
    return cert.nullity


def projection_gram_check(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL):
    """Frobenius Gram of the projections and its numerical rank.

    For an alpha-EI it must equal alpha^2 r J + (1 - alpha^2) r I.
    """
    alpha = is_equi_isoclinic(S, tol)
    if alpha is None:
        raise NotEquiIsoclinic("sequence is not equi-isoclinic")
    P = S.projections()
    gram = np.einsum("iab,jab->ij", P, P.conj()).real
    n, r = S.n, S.r
    expected = alpha**2 * r * np.ones((n, n)) + (1 - alpha**2) * r * np.eye(n)
    resid = float(np.max(np.abs(gram - expected)))
    if resid > tol.residual_abs * max(1, r):
        raise InternalInconsistency(f"projection Gram off by {resid:.3g}")
    return gram, numerical_rank(gram, tol)


@dataclass(frozen=True)
class KnCertificate:
    dims: tuple
    n: int
    satisfied: bool
    gaps: tuple
    is_eitff: bool

    def as_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "n": self.n,
            "satisfied": self.satisfied,
            "gaps": [g if np.isfinite(g) else None for g in self.gaps],
            "is_eitff": self.is_eitff,
        }


def certify_dim_Kn_eq_n(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL, strict: bool = True) -> KnCertificate:
    """Does the last corner space have the smallest possible dimension n?

    An EI with alpha < 1 and dim K_n = n is necessarily an EITFF; that
    consequence is checked against a direct tightness test.
    """
    from .fusion import certify

    pre = corner_prefix(S, tol, strict=strict)
    ok = pre.dims[-1] == S.n
    is_eitff = certify(S, tol).is_eitff
    if ok and pre.certified and not is_eitff:
        raise InternalInconsistency("dim K_n = n but the sequence is not tight")
    return KnCertificate(pre.dims, S.n, ok, pre.gaps, is_eitff)
