"""Subspace sequences, principal angles, isoclinism and EI normalization."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionTooSmall,
    InvalidInput,
    NotEquiIsoclinic,
    NotIsometry,
    Unsupported,
)
from .numerics import (
    DEFAULT_TOL,
    Field,
    Tolerances,
    as_field,
    complete_to_unitary,
    field_of,
    numerical_rank,
    polar_unitary,
    same_field,
)


class SubspaceSequence:
    """n subspaces of F^d, each of dimension r, given by isometries.

    ``isometries`` is stored as one array of shape (n, d, r).  Each slice
    must satisfy ``Phi* Phi = I_r`` up to ``atol``.
    """

    def __init__(self, isometries, field=None, *, atol: float = DEFAULT_TOL.residual_abs):
        arr = np.asarray(isometries)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or 0 in arr.shape:
            raise InvalidInput("isometries must have shape (n, d, r)")
        field = field_of(arr) if field is None else Field.parse(field)
        arr = as_field(arr, field)
        n, d, r = arr.shape
        if r > d:
            raise InvalidInput(f"subspace dimension r={r} exceeds ambient d={d}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("non-finite entries")
        gram = np.einsum("kji,kjl->kil", arr.conj(), arr)
        resid = float(np.max(np.abs(gram - np.eye(r))))
        if resid > atol:
            raise NotIsometry(f"isometry residual {resid:.3g} exceeds {atol:.3g}")
        arr.setflags(write=False)
        self._phis = arr
        self.field = field
        self.isometry_residual = resid

    @property
    def isometries(self) -> np.ndarray:
        return self._phis

    @property
    def n(self) -> int:
        return self._phis.shape[0]

    @property
    def d(self) -> int:
        return self._phis.shape[1]

    @property
    def r(self) -> int:
        return self._phis.shape[2]

    def __len__(self):
        return self.n

    def __getitem__(self, j) -> np.ndarray:
        return self._phis[j]

    def projections(self) -> np.ndarray:
        return np.einsum("kij,klj->kil", self._phis, self._phis.conj())

    def embed(self, d_new: int) -> "SubspaceSequence":
        """Same subspaces inside F^{d_new} (zero rows appended)."""
        if d_new < self.d:
            raise InvalidInput("cannot embed into a smaller space")
        out = np.zeros((self.n, d_new, self.r), dtype=self._phis.dtype)
        out[:, : self.d] = self._phis
        return SubspaceSequence(out, self.field)

    def transform(self, left=None, rights: Optional[Sequence] = None) -> "SubspaceSequence":
        """Equivalent sequence ``left @ Phi_j @ rights[j]``."""
        phis = self._phis
        if left is not None:
            phis = np.einsum("ab,kbr->kar", left, phis)
        if rights is not None:
            phis = np.einsum("kar,krs->kas", phis, np.asarray(rights))
        return SubspaceSequence(phis, self.field)

    def __repr__(self):
        return f"SubspaceSequence(field={self.field.value}, d={self.d}, r={self.r}, n={self.n})"


def _check_pair(Phi, Psi):
    Phi, Psi = np.asarray(Phi), np.asarray(Psi)
    if Phi.ndim != 2 or Phi.shape != Psi.shape:
        raise InvalidInput("isometries must share the shape d x r")
    same_field(Phi, Psi)
    return Phi, Psi


def pair_singular_values(Phi, Psi) -> np.ndarray:
    """Cosines of the principal angles, nonincreasing, clamped to [0, 1].

    Averaged over both argument orders so the result is exactly symmetric.
    """
    Phi, Psi = _check_pair(Phi, Psi)
    s1 = np.linalg.svd(Phi.conj().T @ Psi, compute_uv=False)
    s2 = np.linalg.svd(Psi.conj().T @ Phi, compute_uv=False)
    s = 0.5 * (s1 + s2)
    return np.clip(s, 0.0, 1.0)


def principal_angles(Phi, Psi) -> np.ndarray:
    """Principal angles in radians, nondecreasing."""
    return np.arccos(pair_singular_values(Phi, Psi))


def block_coherence(S: SubspaceSequence) -> float:
    if S.n < 2:
        raise InvalidInput("block coherence needs at least two subspaces")
    mu = 0.0
    for i in range(S.n):
        for j in range(i + 1, S.n):
            mu = max(mu, float(np.linalg.norm(S[i].conj().T @ S[j], 2)))
    return min(max(mu, 0.0), 1.0)


@dataclass(frozen=True)
class IsoclinismProfile:
    alpha: float          # mean of all pairwise singular values
    within_pair: float    # largest spread of singular values inside one pair
    across_pairs: float   # spread of the per-pair means

    @property
    def spread(self) -> float:
        return max(self.within_pair, self.across_pairs)


def isoclinism_profile(S: SubspaceSequence) -> IsoclinismProfile:
    if S.n < 2:
        raise InvalidInput("isoclinism needs at least two subspaces")
    means, within, allvals = [], 0.0, []
    for i in range(S.n):
        for j in range(i + 1, S.n):
            s = pair_singular_values(S[i], S[j])
            within = max(within, float(s.max() - s.min()))
            means.append(float(s.mean()))
            allvals.append(s)
    alpha = float(np.mean(np.concatenate(allvals)))
    return IsoclinismProfile(alpha, within, float(max(means) - min(means)))


def is_equi_isoclinic(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> Optional[float]:
    """The isoclinism parameter alpha if ``S`` is equi-isoclinic, else None."""
    prof = isoclinism_profile(S)
    if prof.spread <= tol.residual_abs:
        return prof.alpha
    return None


def is_isoclinic_pair(Phi, Psi, alpha: float, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Residuals of the equivalent isoclinism conditions for one pair.

    Keys: ``angles`` (all cosines equal alpha), ``unitary`` (Phi* Psi / alpha
    unitary), ``compression`` (Psi* P Psi = alpha^2 I) and ``sandwich``
    (Q P Q = alpha^2 Q).
    """
    Phi, Psi = _check_pair(Phi, Psi)
    r = Phi.shape[1]
    P = Phi @ Phi.conj().T
    Q = Psi @ Psi.conj().T
    G = Phi.conj().T @ Psi
    out = {
        "angles": float(np.max(np.abs(pair_singular_values(Phi, Psi) - alpha))),
        "compression": float(np.max(np.abs(Psi.conj().T @ P @ Psi - alpha**2 * np.eye(r)))),
        "sandwich": float(np.max(np.abs(Q @ P @ Q - alpha**2 * Q))),
    }
    if alpha > 0:
        Uu = G / alpha
        out["unitary"] = float(np.max(np.abs(Uu.conj().T @ Uu - np.eye(r))))
    return out


def common_span_dim(S: SubspaceSequence, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of W_1 + ... + W_n."""
    return numerical_rank(np.concatenate(list(S.isometries), axis=1), tol)


# Normalization -----------------------------------------------------------

@dataclass(frozen=True)
class NormalizedEI:
    """An EI in the block form Phi_1 = (I;0;0), Phi_2 = (aI; bI; 0),
    Phi_j = (aI; X_j; Y_j), together with the unitaries used to get there
    (``normalized = left @ original @ rights[j]``)."""

    base: SubspaceSequence
    alpha: float
    beta: float
    X: list
    Y: list
    U: list
    left: np.ndarray
    rights: np.ndarray
    residuals: dict = dc_field(default_factory=dict)


def _ei_alpha(S, alpha, tol):
    prof = isoclinism_profile(S)
    if prof.spread > tol.residual_abs or abs(prof.alpha - alpha) > tol.residual_abs:
        raise NotEquiIsoclinic(
            f"not a {alpha:.6g}-EI (measured alpha {prof.alpha:.6g}, spread {prof.spread:.3g})"
        )


def normalize_ei(S: SubspaceSequence, alpha: float, tol: Tolerances = DEFAULT_TOL) -> NormalizedEI:
    """Bring an alpha-EI with d >= 2r into the normalized block form.

    Follows the constructive steps: a unitary sending Phi_1 to (I;0),
    right unitaries making every top block alpha*I, then a unitary on the
    last d - r coordinates flattening the second subspace.
    """
    if S.n < 2:
        raise InvalidInput("need n >= 2")
    if alpha >= 1 - tol.residual_abs:
        raise NotEquiIsoclinic("alpha = 1 sequences have no normalized form")
    if S.d < 2 * S.r:
        raise DimensionTooSmall("normalization needs d >= 2r")
    _ei_alpha(S, alpha, tol)
    d, r, n = S.d, S.r, S.n
    beta = math.sqrt(1.0 - alpha**2)
    eye = np.eye(r, dtype=S.field.dtype)

    V = complete_to_unitary(S[0], tol).conj().T
    VPsi = np.einsum("ab,kbr->kar", V, S.isometries)
    rights = np.empty((n, r, r), dtype=S.field.dtype)
    rights[0] = eye
    for j in range(1, n):
        # Z_j = alpha^{-1} A_j^*, taken as the polar factor for stability
        rights[j] = polar_unitary(VPsi[j, :r].conj().T) if alpha > 0 else eye
    T = np.einsum("kar,krs->kas", VPsi, rights)

    tail = T[1, r:] / beta
    W = complete_to_unitary(tail, Tolerances(tol.rank_rel, max(tol.residual_abs, 1e-7))).conj().T
    left = np.eye(d, dtype=S.field.dtype)
    left[r:, r:] = W
    left = left @ V
    out = np.einsum("ab,kbr->kar", left, S.isometries)
    out = np.einsum("kar,krs->kas", out, rights)

    exact1 = np.zeros((d, r), dtype=S.field.dtype)
    exact1[:r] = eye
    exact2 = np.zeros((d, r), dtype=S.field.dtype)
    exact2[:r] = alpha * eye
    exact2[r:2 * r] = beta * eye
    res = {
        "phi1": float(np.max(np.abs(out[0] - exact1))),
        "phi2": float(np.max(np.abs(out[1] - exact2))),
        "top_blocks": max((float(np.max(np.abs(out[j, :r] - alpha * eye))) for j in range(2, n)), default=0.0),
    }
    if max(res.values()) > 100 * tol.residual_abs:
        raise NotEquiIsoclinic(f"normalization failed to reach the block form: {res}")
    out[0], out[1] = exact1, exact2
    base = SubspaceSequence(out, S.field, atol=max(10 * tol.residual_abs, S.isometry_residual * 10))

    X = [out[j, r:2 * r].copy() for j in range(2, n)]
    Y = [out[j, 2 * r:].copy() for j in range(2, n)]
    U = []
    if alpha > 0:
        res.update(unitary=0.0, normal=0.0, yy=0.0)
        min_sv = math.inf
        for Xj, Yj in zip(X, Y):
            Uj = alpha * eye + (beta / alpha) * Xj
            U.append(Uj)
            res["unitary"] = max(res["unitary"], float(np.max(np.abs(Uj.conj().T @ Uj - eye))))
            res["normal"] = max(
                res["normal"], float(np.max(np.abs(Xj @ Xj.conj().T - Xj.conj().T @ Xj)))
            )
            min_sv = min(min_sv, float(np.linalg.svd(Xj, compute_uv=False).min()))
            target = (1 - 3 * alpha**2) / (1 - alpha**2) * eye + alpha**3 / (1 - alpha**2) * (
                Uj + Uj.conj().T
            )
            res["yy"] = max(res["yy"], float(np.max(np.abs(Yj.conj().T @ Yj - target))))
        res["x_min_singular"] = min_sv
        bad = [k for k in ("unitary", "normal", "yy") if res[k] > 100 * tol.residual_abs]
        if bad or (X and min_sv <= tol.rank_rel):
            raise NotEquiIsoclinic(f"normalized form violates {bad or ['invertibility']}")
    return NormalizedEI(base, alpha, beta, X, Y, U, left, rights, res)


# Explicit three-subspace complex EI ---------------------------------------

@dataclass(frozen=True)
class EI3Parameters:
    x1: float
    x2: float
    c: float
    lambda1: complex
    lambda2: complex


def ei3_parameters(alpha: float) -> EI3Parameters:
    """x_1, the free constant c (chosen so x_2 = (x_1 + 1)/2), x_2, and
    the unimodular numbers lambda_1, lambda_2."""
    x1 = (3 * alpha**2 - 1) / (2 * alpha**3)
    c2 = alpha**3 * (1 - x1) / (1 - alpha**2)
    x2 = x1 + c2 * (1 - alpha**2) / (2 * alpha**3)
    lam = [complex(x, math.sqrt(max(0.0, 1 - x * x))) for x in (x1, x2)]
    return EI3Parameters(x1, x2, math.sqrt(c2), lam[0], lam[1])


def construct_ei3(d: int, r: int, alpha: float, field=Field.COMPLEX) -> SubspaceSequence:
    """Three complex r-dimensional subspaces of C^d, pairwise alpha-isoclinic,
    for 2r < d < 3r and 1/2 <= alpha < 1."""
    if Field.parse(field) is not Field.COMPLEX:
        raise Unsupported("the three-subspace construction is complex")
    if not 2 * r < d < 3 * r:
        raise InvalidInput("need 2r < d < 3r")
    if not 0.5 <= alpha < 1:
        raise InvalidInput("need 1/2 <= alpha < 1")
    p = ei3_parameters(alpha)
    beta = math.sqrt(1 - alpha**2)
    m = d - 2 * r
    eye = np.eye(r, dtype=complex)
    U = np.diag([p.lambda2] * m + [p.lambda1] * (3 * r - d))
    Y = np.zeros((m, r), dtype=complex)
    Y[:, :m] = p.c * np.eye(m)
    phis = np.zeros((3, d, r), dtype=complex)
    phis[0, :r] = eye
    phis[1, :r] = alpha * eye
    phis[1, r:2 * r] = beta * eye
    phis[2, :r] = alpha * eye
    phis[2, r:2 * r] = (alpha / beta) * U - (alpha**2 / beta) * eye
    phis[2, 2 * r:] = Y
    return SubspaceSequence(phis, Field.COMPLEX)


def coordinate_subspaces(field, d: int, r: int, n: int) -> SubspaceSequence:
    """n pairwise orthogonal coordinate subspaces (needs nr <= d)."""
    field = Field.parse(field)
    if n * r > d:
        raise InvalidInput("need nr <= d for orthogonal coordinate subspaces")
    phis = np.zeros((n, d, r), dtype=field.dtype)
    for j in range(n):
        phis[j, j * r:(j + 1) * r] = np.eye(r)
    return SubspaceSequence(phis, field)


def random_sequence(field, d: int, r: int, n: int, rng: np.random.Generator) -> SubspaceSequence:
    field = Field.parse(field)
    Z = rng.standard_normal((n, d, r))
    if field is Field.COMPLEX:
        Z = Z + 1j * rng.standard_normal((n, d, r))
    Q = np.stack([np.linalg.qr(z)[0] for z in Z])
    return SubspaceSequence(Q, field)


def eitff_2rplus1_exists(r: int) -> Optional[tuple]:
    """Witness (r, n) of an EITFF_R(2r+1, r, n) for even r, or None.

    A real EITFF in odd dimension 2r+1 must have alpha = 1/2, which forces
    n = (6r+3)/(2r-1); only r = 2 makes that an integer.
    """
    if r < 1 or r % 2:
        raise InvalidInput("r must be a positive even integer")
    num, den = 6 * r + 3, 2 * r - 1
    if num % den:
        return None
    return (r, num // den)
