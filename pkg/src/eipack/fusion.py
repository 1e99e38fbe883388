"""Fusion frames: Gram matrices, tightness, EITFF certificates and the
standard ways of producing new EITFFs from old ones."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .bounds import ParamTriple, spark_bound, welch_bound
from .errors import BoundVacuous, InvalidInput, NoComplement, NotEITFF, NotTight, RatioMismatch
from .numerics import DEFAULT_TOL, Field, Tolerances, polar_unitary
from .subspaces import SubspaceSequence, block_coherence, isoclinism_profile


@dataclass(frozen=True)
class FusionGram:
    field: Field
    r: int
    n: int
    blocks: np.ndarray  # (n, n, r, r), blocks[i, j] = Phi_i* Phi_j

    @property
    def matrix(self) -> np.ndarray:
        n, r = self.n, self.r
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * r, n * r)

    @classmethod
    def from_matrix(cls, G, r: int, field: Field) -> "FusionGram":
        n = G.shape[0] // r
        return cls(field, r, n, G.reshape(n, r, n, r).transpose(0, 2, 1, 3))


def fusion_gram(S: SubspaceSequence) -> FusionGram:
    blocks = np.einsum("iar,jas->ijrs", S.isometries.conj(), S.isometries)
    return FusionGram(S.field, S.r, S.n, blocks)


def frame_operator(S: SubspaceSequence) -> np.ndarray:
    """Sum of the orthogonal projections onto the subspaces."""
    return np.einsum("kir,kjr->ij", S.isometries, S.isometries.conj())


@dataclass(frozen=True)
class FrameCertificate:
    d: int
    r: int
    n: int
    field: str
    is_ei: bool
    alpha: Optional[float]
    alpha_spread: float
    is_tight: bool
    tight_constant: Optional[float]
    tight_residual: float
    is_eitff: bool
    coherence: float
    welch: Optional[float]
    spark_bound: Optional[float]

    def as_dict(self) -> dict:
        return asdict(self)


def certify(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> FrameCertificate:
    """EI, tightness and Welch-attainment flags for a sequence."""
    if S.n < 2:
        raise InvalidInput("certify needs n >= 2")
    d, r, n = S.d, S.r, S.n
    prof = isoclinism_profile(S)
    is_ei = prof.spread <= tol.residual_abs
    c = r * n / d
    F = frame_operator(S)
    tight_res = float(np.max(np.abs(F - c * np.eye(d))))
    is_tight = tight_res <= tol.residual_abs * max(1.0, c)
    try:
        welch = welch_bound(ParamTriple(d, r, n))
    except BoundVacuous:
        welch = None
    spark = spark_bound(d, r) if d > r else None
    is_eitff = (
        is_ei and is_tight and welch is not None and abs(prof.alpha - welch) <= tol.residual_abs
    )
    return FrameCertificate(
        d=d,
        r=r,
        n=n,
        field=S.field.value,
        is_ei=is_ei,
        alpha=prof.alpha if is_ei else None,
        alpha_spread=prof.spread,
        is_tight=is_tight,
        tight_constant=c if is_tight else None,
        tight_residual=tight_res,
        is_eitff=is_eitff,
        coherence=block_coherence(S),
        welch=welch,
        spark_bound=spark,
    )


def naimark_complement(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> SubspaceSequence:
    """A TFF(rn - d, r, n) whose fusion Gram is
    rn/(rn - d) * (I - d/(rn) * Gram(S))."""
    d, r, n = S.d, S.r, S.n
    D = r * n - d
    if D == 0:
        raise NoComplement("d = rn: the complement is zero-dimensional")
    F = frame_operator(S)
    if np.max(np.abs(F - (r * n / d) * np.eye(d))) > tol.residual_abs * max(1.0, r * n / d):
        raise NotTight("the sequence is not a tight fusion frame")
    G = fusion_gram(S).matrix
    Gc = (r * n / D) * (np.eye(r * n) - (d / (r * n)) * G)
    Gc = 0.5 * (Gc + Gc.conj().T)
    lam, Q = np.linalg.eigh(Gc)
    keep = lam > tol.rank_rel * max(lam[-1], 1.0)
    if int(keep.sum()) != D:
        raise NotTight(f"complement Gram has rank {int(keep.sum())}, expected {D}")
    Psi = (np.sqrt(lam[keep])[:, None] * Q[:, keep].conj().T)  # D x rn, Psi* Psi = Gc
    blocks = [polar_unitary(Psi[:, j * r:(j + 1) * r]) for j in range(n)]
    return SubspaceSequence(np.stack(blocks), S.field)


def realify(M) -> np.ndarray:
    """Replace each complex entry a + bi by the real block [[a, -b], [b, a]]."""
    M = np.asarray(M)
    one = np.eye(2)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    lead = M.shape[:-2]
    out = np.kron(M.real, one) + np.kron(M.imag, rot)
    return out.reshape(lead + (2 * M.shape[-2], 2 * M.shape[-1]))


def hoggar_c_to_r(S: SubspaceSequence) -> SubspaceSequence:
    """Complex sequence in C^d of r-planes -> real sequence in R^{2d} of 2r-planes."""
    if S.field is not Field.COMPLEX:
        raise InvalidInput("Hoggar's trick takes a complex sequence")
    return SubspaceSequence(np.stack([realify(P) for P in S.isometries]), Field.REAL)


def direct_sum(S1: SubspaceSequence, S2: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> SubspaceSequence:
    """Block-diagonal sum of two EITFFs with the same n and the same d/r."""
    if S1.field is not S2.field:
        raise InvalidInput("direct sum of sequences over different fields")
    if S1.n != S2.n:
        raise InvalidInput("direct sum needs the same number of subspaces")
    if S1.d * S2.r != S2.d * S1.r:
        raise RatioMismatch(f"d/r differ: {S1.d}/{S1.r} vs {S2.d}/{S2.r}")
    for S in (S1, S2):
        if not certify(S, tol).is_eitff:
            raise NotEITFF(f"{S!r} is not an EITFF")
    d1, r1, d2, r2 = S1.d, S1.r, S2.d, S2.r
    out = np.zeros((S1.n, d1 + d2, r1 + r2), dtype=S1.field.dtype)
    out[:, :d1, :r1] = S1.isometries
    out[:, d1:, r1:] = S2.isometries
    return SubspaceSequence(out, S1.field)


def trivial_eitff(field, r: int, n: int) -> SubspaceSequence:
    """n copies of the whole space F^r."""
    field = Field.parse(field)
    if r < 1 or n < 1:
        raise InvalidInput("need r, n >= 1")
    return SubspaceSequence(np.broadcast_to(np.eye(r), (n, r, r)).copy(), field)


def eitff_alpha(d: int, r: int, n: int) -> float:
    """Isoclinism parameter forced on an EITFF(d, r, n)."""
    return math.sqrt((n * r / d - 1) / (n - 1))
