"""Building equi-isoclinic sequences and checking them.

Covers the three-subspace complex construction, EITFFs from
Radon-Hurwitz families, Naimark complements, Hoggar's realification
and direct sums.
"""
import math

from eipack.fusion import certify, direct_sum, hoggar_c_to_r, naimark_complement, trivial_eitff
from eipack.numerics import Field
from eipack.rho import build_rho, eitff_from_simplex, simplex_from_basis
from eipack.subspaces import block_coherence, construct_ei3


def show(label, S):
    c = certify(S)
    alpha = "-" if c.alpha is None else f"{c.alpha:.6f}"
    print(f"{label:<34} {S.field.value}({S.d},{S.r},{S.n})  alpha={alpha}  "
          f"tight={c.is_tight!s:<5} eitff={c.is_eitff}")


# Three planes in C^5 at alpha = 1/2: the coherence equals the spark
# bound 1/floor(5/2).
S = construct_ei3(5, 2, 0.5)
show("three-subspace, alpha=1/2", S)
print(f"  block coherence {block_coherence(S):.12f}")

# A simplex in a rho-space gives an EITFF(2r, r, m+1).
for r, field in [(1, Field.COMPLEX), (2, Field.REAL), (3, Field.COMPLEX), (8, Field.REAL)]:
    R = build_rho(r, field)
    show(f"simplex from rho-family, r={r}", eitff_from_simplex(simplex_from_basis(R, len(R) + 1)))

print(f"  predicted alpha for n=4: {1 / math.sqrt(3):.6f}")

# Complements and other operations keep the EITFF property.
show("complement of trivial R(2,2,3)", naimark_complement(trivial_eitff(Field.REAL, 2, 3)))
line_frame = eitff_from_simplex(simplex_from_basis(build_rho(1, Field.COMPLEX), 3))
show("Hoggar of C(2,1,4)", hoggar_c_to_r(line_frame))
planes = eitff_from_simplex(simplex_from_basis(build_rho(2, Field.REAL), 3))
show("direct sum R(4,2,4) + R(4,2,4)", direct_sum(planes, planes))
