"""Equivariant correlators by fixed-point recursion, and the class-P checks.

For each space the recursion output passes all checks.  Dropping the
polynomial in 1/hbar that the recursion leaves undetermined breaks the
double-construction polynomiality.
"""

from qhyperplane.ambient import SpaceSpec
from qhyperplane.hypergeo import BundleSpec
from qhyperplane.localization import RecursionData, compute_phiV_equivariant, compute_SX
from qhyperplane.mirror import verify_class_P


def report(title, Z, data):
    rep = verify_class_P(Z, data)
    print(f"{title}: {'pass' if rep.passed else 'FAIL'}")
    for c in rep.checks:
        print(f"    [{'x' if c.passed else ' '}] {c.name} {c.detail}")


for spec, order in [
    (SpaceSpec.projective(2), 3),
    (SpaceSpec.grassmannian(2, 4), 2),
    (SpaceSpec.flag_a(3), 2),
]:
    data = RecursionData.build(spec, None, order)
    report(f"S^X on {spec.name}, q-order {order}", compute_SX(spec, order, data=data), data)
    report(f"  literal recursion only on {spec.name}", compute_SX(spec, order, False, data), data)

spec = SpaceSpec.projective(1)
V = BundleSpec([(2,)])
report("Phi^V on P^1 with O(2)", compute_phiV_equivariant(spec, V, 3), RecursionData.build(spec, V, 3))
