"""dim K_n = n for EITFFs built from Radon-Hurwitz families.

Complex families built by doubling give dim K_n = n for every r.  Real
families do so when r is a power of two, whatever simplex is chosen; for
other r an anticommuting matrix C0 enlarges K_n.
"""
import numpy as np

from eipack.bounds import radon_hurwitz
from eipack.corner import corner_space
from eipack.numerics import Field
from eipack.rho import (
    build_rho,
    c0_space,
    counterexample_eitff,
    counterexample_not_power_of_two,
    dim_Kn_via_sform,
    eitff_from_simplex,
    random_simplex,
    simplex_from_basis,
)

print(" r  rho_R  rho_C")
for r in (1, 2, 3, 4, 8, 12, 16, 32):
    print(f"{r:>2}  {radon_hurwitz(r, Field.REAL):>5}  {radon_hurwitz(r, Field.COMPLEX):>5}")

print("\ncomplex, regular simplex:")
for r in range(1, 7):
    S = eitff_from_simplex(simplex_from_basis(build_rho(r, Field.COMPLEX), radon_hurwitz(r, Field.COMPLEX) + 1))
    print(f"  r={r}: n={S.n}, dim K_n={corner_space(S, range(S.n)).dim}, via C0={dim_Kn_via_sform(S)}")

print("\nreal, randomly turned simplices (seed 11):")
rng = np.random.default_rng(11)
for r in (1, 2, 4, 8):
    R = build_rho(r, Field.REAL)
    dims = {corner_space(S, range(S.n)).dim
            for S in (eitff_from_simplex(random_simplex(R, len(R) + 1, rng)) for _ in range(5))}
    print(f"  r={r}: n={len(R) + 2}, dim K_n over 5 draws: {sorted(dims)}")

print("\nr not a power of two:")
for r in (3, 6):
    fam, C0 = counterexample_not_power_of_two(r, Field.REAL)
    S = counterexample_eitff(r, Field.REAL)
    print(f"  r={r}: n={S.n}, dim K_n={corner_space(S, range(S.n)).dim}, "
          f"dim C0-space={c0_space(fam.mats).dim}")
