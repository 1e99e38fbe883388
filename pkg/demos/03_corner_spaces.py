"""Corner matrix spaces and what their dimensions say.

The corner space K_J of an equi-isoclinic sequence contains every
projection, so dim K_J bounds n from above.  The first three dimensions
have closed forms; the last one can be as small as n.
"""
import itertools

from eipack.corner import closed_form_dim, corner_prefix, corner_space, dim_L
from eipack.numerics import Field
from eipack.rho import build_rho, eitff_from_simplex, simplex_from_basis
from eipack.subspaces import construct_ei3

R = build_rho(2, Field.REAL)
S = eitff_from_simplex(simplex_from_basis(R, 3))

pre = corner_prefix(S)
print("EITFF_R(4,2,4): dim K_1..K_4 =", pre.dims)
print("closed forms for j = 1, 2, 3:", [closed_form_dim(4, 2, Field.REAL, j) for j in (1, 2, 3)])
print("smallest singular-value gap:", f"{min(pre.gaps):.2e}")

# Appending a zero coordinate grows every corner space.
print("same planes inside R^5:", corner_prefix(S.embed(5)).dims)

# L_J asks for one common multiple of I_r instead of one per subspace.
for J in itertools.combinations(range(4), 2):
    print(f"J={J}: dim K_J={corner_space(S, J).dim}, dim L_J={dim_L(S, J)}")

# A sequence that is not tight still has the same first three dimensions.
T = construct_ei3(8, 3, 0.6)
print("\nthree subspaces of C^8 at alpha=0.6:", corner_prefix(T).dims,
      "closed forms:", [closed_form_dim(8, 3, Field.COMPLEX, j) for j in (1, 2, 3)])
