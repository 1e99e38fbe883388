"""When does the spark bound beat the Welch bound?

Walks through a few parameter triples, then prints the nonexistence
table and the marked points of the coherence-bounds figure.
"""
from eipack.bounds import (
    ParamTriple,
    classify_spark_vs_welch,
    counting_bounds,
    figure1_markers,
    nonexistence_table,
)
from eipack.numerics import Field

# A few triples on either side of the comparison.
for d, r, n in [(4, 2, 4), (5, 2, 4), (8, 3, 5), (27, 7, 6), (6, 2, 4)]:
    rep = classify_spark_vs_welch(ParamTriple(d, r, n))
    status = " (open)" if rep.open_problem else ""
    print(f"(d,r,n)=({d},{r},{n}): welch={rep.welch:.4f} spark={rep.spark:.4f} "
          f"{rep.comparison.value:<14} case={rep.case_label}{status}")

# Cases IV and V are the ones that rule out EITFFs not already excluded
# by simpler arguments.
rows = nonexistence_table(29)
print(f"\n{len(rows)} triples with d <= 29 fall under case IV or V:")
print(" ".join(f"({d},{r},{n})" for d, r, n, _ in rows))

print("\nPoints where a Welch curve meets the spark step (x = d/r):")
for x, n, mu, kind in figure1_markers(8):
    print(f"  x = {str(x):>6} ~ {float(x):.4f}, n = {n}, mu = {mu}  [{kind}]")

# Counting bounds on how many equi-isoclinic subspaces fit.
cb = counting_bounds(4, 2, Field.REAL)
print(f"\nR^4, planes: Gerzon {cb.gerzon}, one corner {cb.lemmens_seidel}, three corners {cb.k3}")
print("an EITFF_R(4,2,4) attains the last one:", cb.k3 == 4)
