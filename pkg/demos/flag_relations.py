"""Quantum relations of complete flag manifolds, and a check against the recursion."""

from qhyperplane.flag_qh import check_relations_vs_recursion, determinants_agree, quantum_relations

for n in (2, 3, 4):
    print(f"F({n}):")
    for r in quantum_relations(n):
        print(f"  I_{r.index} = {r}")
    print(f"  fraction-free and cofactor determinants agree: {determinants_agree(n)}")

for n, order in ((2, 3), (3, 2)):
    ok = check_relations_vs_recursion(n, order)
    bad = check_relations_vs_recursion(n, order, sign=-1)
    print(f"F({n}) quadratic relation on recursion output to order {order}: {ok} (sign-flipped: {bad})")
