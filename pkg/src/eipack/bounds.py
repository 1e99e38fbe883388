"""Closed-form coherence and counting bounds.

Every comparison between bounds is decided with integers or
``fractions.Fraction``; floats are only produced for display.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BoundVacuous, InternalInconsistency, InvalidInput, OutOfScope, Unsupported
from .numerics import Field, dim_herm

# (d/r, n) points where the Welch and spark bounds meet and EITFF existence is open
OPEN_POINTS = {(Fraction(32, 11), 8), (Fraction(27, 7), 6)}
# intersection points filled by packings from the literature (not built here)
KNOWN_EXTERNAL = {(Fraction(5, 2), 5), (Fraction(8, 3), 6), (Fraction(14, 5), 7)}


@dataclass(frozen=True)
class ParamTriple:
    d: int
    r: int
    n: int

    def __post_init__(self):
        if min(self.d, self.r, self.n) < 1:
            raise InvalidInput("d, r, n must be positive")
        if self.r > self.d:
            raise InvalidInput(f"r={self.r} exceeds d={self.d}")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.d, self.r)


def welch_squared(t: ParamTriple) -> Fraction:
    """Square of the Welch bound, (n/(d/r) - 1)/(n - 1), exactly."""
    if t.n < 2:
        raise InvalidInput("Welch bound needs n >= 2")
    if t.n * t.r < t.d:
        raise BoundVacuous("n r < d: the Welch radicand is negative")
    return Fraction(t.n * t.r - t.d, t.d * (t.n - 1))


def welch_bound(t: ParamTriple) -> float:
    return math.sqrt(welch_squared(t))


def spark_bound_exact(d: int, r: int) -> Fraction:
    """1/floor(d/r).  d = r is allowed and gives 1, the point where the
    spark and Welch curves start."""
    if d < r or r < 1:
        raise InvalidInput("the spark bound needs d >= r >= 1")
    return Fraction(1, d // r)


def spark_bound(d: int, r: int) -> float:
    return float(spark_bound_exact(d, r))


def _ceil_inverse(mu) -> int:
    if isinstance(mu, Fraction):
        return math.ceil(1 / mu)
    inv = 1.0 / mu
    near = round(inv)
    # absorb roundoff when 1/mu is an integer, e.g. mu = 0.1
    if abs(inv - near) <= 1e-9 * max(1.0, inv):
        return int(near)
    return math.ceil(inv)


def spark_floor_from_coherence(mu) -> int:
    """Lower bound ceil(1/mu) + 1 on the spark of a dependent sequence."""
    if not mu > 0 or mu > 1:
        raise InvalidInput("block coherence must lie in (0, 1]")
    return _ceil_inverse(mu) + 1


@dataclass(frozen=True)
class GershgorinCheck:
    subset: tuple
    coherence: float
    bound: float       # 1 - (k - 1) mu
    computed: float    # smallest eigenvalue of the subset's fusion Gram

    @property
    def holds(self) -> bool:
        return self.computed >= self.bound - 1e-9


def independence_by_gershgorin(S, k: int, subset) -> GershgorinCheck:
    """Block-Gershgorin lower bound on the smallest Gram eigenvalue of k
    subspaces, next to the eigenvalue itself."""
    from .subspaces import block_coherence

    subset = tuple(int(i) for i in subset)
    if len(subset) != k or len(set(subset)) != k or k < 1:
        raise InvalidInput("subset must list k distinct indices")
    if any(i < 0 or i >= S.n for i in subset):
        raise InvalidInput("subset index out of range")
    mu = block_coherence(S) if S.n >= 2 else 0.0
    limit = S.n if mu == 0 else min(S.n, _ceil_inverse(mu))
    if k > limit:
        raise InvalidInput(f"k={k} exceeds min(n, ceil(1/mu)) = {limit}")
    Phi = np.concatenate([S[i] for i in subset], axis=1)
    lam = float(np.linalg.eigvalsh(Phi.conj().T @ Phi)[0])
    return GershgorinCheck(subset, mu, 1 - (k - 1) * mu, lam)


# Spark versus Welch --------------------------------------------------------

class Comparison(enum.Enum):
    SPARK_EXCEEDS = "SPARK_EXCEEDS"
    EQUAL = "EQUAL"
    WELCH_EXCEEDS = "WELCH_EXCEEDS"


@dataclass(frozen=True)
class BoundsReport:
    triple: ParamTriple
    welch: float
    spark: float
    comparison: Comparison
    case_label: Optional[str]
    eitff_excluded: bool
    f: int
    k: int
    open_problem: bool = False

    def as_dict(self) -> dict:
        return {
            "d": self.triple.d,
            "r": self.triple.r,
            "n": self.triple.n,
            "welch": self.welch,
            "spark": self.spark,
            "comparison": self.comparison.value,
            "case": self.case_label,
            "eitff_excluded": self.eitff_excluded,
            "f": self.f,
            "k": self.k,
            "status": "OPEN" if self.open_problem else None,
        }


def _case_label(d: int, r: int, n: int) -> Optional[str]:
    x = Fraction(d, r)
    f = d // r
    ceil_x = -(-d // r)
    if f == 1:
        return "I"
    if n == ceil_x and d % r:
        return "II"
    if n == ceil_x + 1 and f + Fraction(f * f - f, f * f + f + 1) < x:
        return "III"
    if 5 <= n <= 8 and Fraction(4 * n, n + 3) < x < 3:
        return "IV"
    if n == 6 and Fraction(27, 7) < x < 4:
        return "V"
    return None


def classify_spark_vs_welch(t: ParamTriple) -> BoundsReport:
    """Compare the spark bound 1/floor(d/r) with the Welch bound for
    1 < d/r < n and name the case that makes the spark bound win."""
    d, r, n = t.d, t.r, t.n
    if not (r < d < n * r):
        raise OutOfScope("classification needs 1 < d/r < n")
    f = d // r
    # 1/f^2 against (nr - d)/(d(n - 1)), denominators cleared
    lhs, rhs = d * (n - 1), f * f * (n * r - d)
    comp = (
        Comparison.SPARK_EXCEEDS if lhs > rhs else Comparison.EQUAL if lhs == rhs else Comparison.WELCH_EXCEEDS
    )
    label = _case_label(d, r, n)
    if (label is not None) != (comp is Comparison.SPARK_EXCEEDS):
        raise InternalInconsistency(f"case analysis disagrees with direct comparison at {t}")
    # the same test written through p = d/r - f and k = n - f
    p, k = Fraction(d, r) - f, n - f
    if (p > Fraction((f * f - f) * k - (f * f - f), f * f + f + k - 1)) != (lhs > rhs):
        raise InternalInconsistency(f"p-bound form disagrees at {t}")
    is_open = comp is Comparison.EQUAL and (t.ratio, n) in OPEN_POINTS
    return BoundsReport(
        triple=t,
        welch=welch_bound(t),
        spark=spark_bound(d, r),
        comparison=comp,
        case_label=label,
        eitff_excluded=comp is Comparison.SPARK_EXCEEDS,
        f=f,
        k=k,
        open_problem=is_open,
    )


def nonexistence_table(d_max: int) -> list:
    """(d, r, n, case) for every triple with d <= d_max where case IV or V
    rules out an EITFF, sorted by (d, r, n)."""
    if d_max < 8:
        raise InvalidInput("d_max must be at least 8")
    rows = []
    for d in range(2, d_max + 1):
        for r in range(1, d):
            f = d // r
            for n in range(f + 1, f + 7):
                if n * r <= d:
                    continue
                rep = classify_spark_vs_welch(ParamTriple(d, r, n))
                if rep.case_label in ("IV", "V"):
                    rows.append((d, r, n, rep.case_label))
    return sorted(rows)


def table_csv(rows, naimark: bool = False) -> str:
    if not naimark:
        lines = ["d,r,n,case"] + [f"{d},{r},{n},{c}" for d, r, n, c in rows]
    else:
        lines = ["d,r,n,case,origin"]
        for d, r, n, c in rows:
            lines.append(f"{d},{r},{n},{c},direct")
            lines.append(f"{r * n - d},{r},{n},{c},naimark")
    return "\n".join(lines) + "\n"


# Radon-Hurwitz numbers and counting bounds ---------------------------------

def rh_decomposition(r: int) -> tuple:
    """(a, b, c) with r = (2a + 1) 2^(4b + c) and 0 <= c <= 3."""
    if r < 1:
        raise InvalidInput("r must be positive")
    e = (r & -r).bit_length() - 1
    odd = r >> e
    return (odd - 1) // 2, e // 4, e % 4


def radon_hurwitz(r: int, field) -> int:
    field = Field.parse(field)
    _, b, c = rh_decomposition(r)
    return 8 * b + 2**c if field is Field.REAL else 8 * b + 2 * c + 2


@dataclass(frozen=True)
class CountingBounds:
    gerzon: int
    lemmens_seidel: int
    k3: int


def counting_bounds(d: int, r: int, field) -> CountingBounds:
    """Upper bounds on n for an alpha-EI (alpha < 1) of r-planes in F^d:
    dim Herm(d), dim K_1 and dim K_3."""
    field = Field.parse(field)
    if not 1 <= r <= d:
        raise InvalidInput("need 1 <= r <= d")
    hd, hr = dim_herm(d, field), dim_herm(r, field)
    return CountingBounds(hd, hd - hr + 1, hd - 3 * hr + 3)


def max_ei_count_2r(r: int, field, alpha: Optional[float] = None) -> int:
    """Largest n admitting an EI of r-planes in F^{2r}.

    Without ``alpha`` this is rho_F(r) + 2.  With ``alpha`` (real field
    only) it is the largest n >= 2 meeting the Lemmens-Seidel conditions,
    or 1 when none does.  The equality case is tested with relative
    tolerance 1e-12.
    """
    field = Field.parse(field)
    rho = radon_hurwitz(r, field)
    if alpha is None:
        return rho + 2
    if field is Field.COMPLEX:
        raise Unsupported("the alpha-dependent count is known over R only")
    if not 0 < alpha < 1:
        raise InvalidInput("alpha must lie in (0, 1)")
    a2 = alpha * alpha
    best = 1
    for n in range(2, rho + 3):
        lhs, rhs = 2 * (a2 - 1), (2 * a2 - 1) * n
        equal = abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
        if (not equal and lhs < rhs and n <= rho + 1) or (equal and n <= rho + 2):
            best = n
    return best


# Figure data ---------------------------------------------------------------

def _welch_at(x: Fraction, n: int) -> Optional[float]:
    if x > n:
        return None
    return math.sqrt((n / x - 1) / (n - 1))


def figure1_row(x, n_max: int, spark_floor: Optional[int] = None) -> dict:
    """One sample: spark bound 1/floor(x) (or 1/spark_floor for a one-sided
    limit) and the Welch bounds for n = 2..n_max where defined."""
    x = Fraction(x)
    f = spark_floor if spark_floor is not None else math.floor(x)
    row = {"x": float(x), "spark": 1.0 / f}
    for n in range(2, n_max + 1):
        row[f"welch_{n}"] = _welch_at(x, n)
    row["marker"] = None
    return row


def figure1_markers(n_max: int, x_max: int = 4) -> list:
    """Points 1 <= x < x_max where Welch for some n <= n_max meets the spark
    bound, with marker ``filled`` (known packing), ``x`` (EITFF excluded
    since d/r > n - 2 and d/r not in {n-1, n}) or ``open``."""
    pts = {}
    for f in range(1, x_max):
        for n in range(2, n_max + 1):
            # (n/x - 1)/(n - 1) = 1/f^2 solved for x
            x = Fraction(n * f * f, f * f + n - 1)
            if not (f <= x < f + 1) or x > n:
                continue
            if x == 1:
                kind = "filled"
            elif x > n - 2 and x not in (n - 1, n):
                kind = "x"
            elif (x.denominator == 1 and n == x + 1) or (x, n) in KNOWN_EXTERNAL:
                kind = "filled"
            else:
                kind = "open"
            pts.setdefault(x, (x, n, Fraction(1, f), kind))
    return [pts[k] for k in sorted(pts)]


def figure1_data(n_max: int, grid: int) -> list:
    """Rows for the coherence-bounds figure on 1 <= x <= 4: a uniform grid,
    left/right limits at the jumps x = 2, 3, 4, then the marked points."""
    if n_max < 2 or grid < 2:
        raise InvalidInput("need n_max >= 2 and grid >= 2")
    xs = [Fraction(1) + Fraction(3 * i, grid - 1) for i in range(grid)]
    rows = []
    for x in xs:
        if x.denominator == 1 and x in (2, 3, 4):
            continue
        rows.append((x, 0, figure1_row(x, n_max)))
    for b in (2, 3, 4):
        rows.append((Fraction(b), 0, figure1_row(b, n_max, spark_floor=b - 1)))
        rows.append((Fraction(b), 1, figure1_row(b, n_max, spark_floor=b)))
    rows.sort(key=lambda t: (t[0], t[1]))
    out = [row for _, _, row in rows]
    for x, n, mu, kind in figure1_markers(n_max):
        row = figure1_row(x, n_max)
        row["spark"] = float(mu)
        row["marker"] = kind
        out.append(row)
    return out


def figure1_csv(rows, n_max: int) -> str:
    cols = ["x", "spark"] + [f"welch_{n}" for n in range(2, n_max + 1)] + ["marker"]

    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [",".join(cols)] + [",".join(fmt(row[c]) for c in cols) for row in rows]
    return "\n".join(lines) + "\n"
