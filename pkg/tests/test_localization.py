from fractions import Fraction as F
from math import factorial

import pytest

from qhyperplane.algebra import CohClass, HbarLaurent, RationalFunction, degrees_up_to
from qhyperplane.ambient import SpaceSpec
from qhyperplane.errors import DegenerateParameterError, DegreeBoundError
from qhyperplane.hypergeo import BundleSpec, G_X_d
from qhyperplane.localization import (
    RecursionData,
    compute_phiV_equivariant,
    compute_SX,
    correction_support,
    euler_sym_integral,
    nonequivariant_limit,
    pairing_limits,
    recursion_part,
)
from qhyperplane.localization import oracle_euler_sym
from qhyperplane.mirror import verify_class_P


def p1_closed_form(kappa, d):
    """``1 / (d! hbar^d prod_{m=1}^d (kappa + m hbar))``."""
    out = RationalFunction.constant(F(1, factorial(d))) * RationalFunction.hbar(-d)
    for m in range(1, d + 1):
        out = out * RationalFunction.inverse_linear(kappa, m)
    return out


@pytest.fixture(scope="module")
def p1():
    return SpaceSpec.projective(1)


def test_base_case(p1):
    for spec in (p1, SpaceSpec.grassmannian(2, 4), SpaceSpec.flag_a(3)):
        S = compute_SX(spec, 1)
        assert all(S.at(v, (0,) * spec.k) == 1 for v in spec.fixed_points())


def test_p1_degree_one_frozen(p1):
    S = compute_SX(p1, 1)
    for v in p1.fixed_points():
        kappa = p1.rays(v)[0].kappa.value()
        assert S.at(v, (1,)) == RationalFunction([F(1)], {F(0): 1, -kappa: 1})


def test_p1_matches_closed_form(p1):
    S = compute_SX(p1, 5)
    for v in p1.fixed_points():
        kappa = p1.rays(v)[0].kappa.value()
        for d in range(6):
            assert S.at(v, (d,)) == p1_closed_form(kappa, d)


def test_p1_degree_two_poles(p1):
    S = compute_SX(p1, 2)
    v = (0,)
    kappa = p1.rays(v)[0].kappa.value()
    assert set(S.at(v, (2,)).poles()) == {F(0), -kappa, -kappa / 2}


@pytest.mark.parametrize(
    "spec, order",
    [(SpaceSpec.projective(2), 3), (SpaceSpec.projective_product((1, 1)), 2), (SpaceSpec.grassmannian(2, 4), 2), (SpaceSpec.flag_a(3), 2)],
    ids=lambda x: getattr(x, "name", x),
)
def test_SX_is_class_P(spec, order):
    data = RecursionData.build(spec, None, order)
    assert verify_class_P(compute_SX(spec, order, data=data), data).passed


@pytest.mark.parametrize("spec", [SpaceSpec.projective(1), SpaceSpec.projective(2), SpaceSpec.grassmannian(2, 4)], ids=lambda s: s.name)
def test_literal_reading_fails_polynomiality(spec):
    # dropping the 1/hbar polynomial leaves W with poles
    data = RecursionData.build(spec, None, 2)
    rep = verify_class_P(compute_SX(spec, 2, decay_correction_on=False, data=data), data)
    assert not rep.passed
    assert [c.name for c in rep.failures()] == ["double construction is polynomial in hbar"]


@pytest.mark.parametrize("spec", [SpaceSpec.projective(2), SpaceSpec.grassmannian(2, 4), SpaceSpec.flag_a(3)], ids=lambda s: s.name)
def test_correction_lives_in_hbar_minus_two_and_below(spec):
    data = RecursionData.build(spec, None, 3)
    S = compute_SX(spec, 3, data=data)
    for (v, d), exps in correction_support(S, data).items():
        assert max(exps) <= -2
        assert min(exps) >= -sum(d)


def test_decay(p1):
    spec = SpaceSpec.grassmannian(2, 4)
    S = compute_SX(spec, 2)
    for v in spec.fixed_points():
        for d in degrees_up_to(1, 2)[1:]:
            assert max(S.at(v, d).expand_at_infinity(-12)) <= -spec.fano[0] * d[0]


def test_phiV_frozen(p1):
    V = BundleSpec([(2,)])
    S = compute_SX(p1, 2)
    Phi = compute_phiV_equivariant(p1, V, 2, S)
    for v in p1.fixed_points():
        lam = p1.restrict_line_bundle((2,), v).value()
        assert Phi.at(v, (0,)) == 1
        assert Phi.at(v, (1,)) == S.at(v, (1,)) * RationalFunction.linear(lam, 1) * RationalFunction.linear(lam, 2)
    assert compute_phiV_equivariant(p1, BundleSpec(), 2, S).values == S.values


def test_phiV_class_P_on_grassmannian():
    spec = SpaceSpec.grassmannian(2, 4)
    V = BundleSpec([(1,)])
    data = RecursionData.build(spec, V, 2)
    assert verify_class_P(compute_phiV_equivariant(spec, V, 2), data).passed


def test_degenerate_eps_detected():
    with pytest.raises(DegenerateParameterError):
        compute_SX(SpaceSpec.projective(2, eps=[1, 2, 3]), 2)


def test_nonequivariant_limit():
    assert nonequivariant_limit(lambda t: F(7), 0) == 7
    assert nonequivariant_limit(lambda t: 1 + 3 * t, 1) == 1
    with pytest.raises(DegreeBoundError):
        nonequivariant_limit(lambda t: t**3, 2)


def test_limit_of_p_on_p1():
    def pairing(t):
        spec = SpaceSpec.projective(1).scaled(t)
        from qhyperplane.ambient import localize_integrate, localized_class

        return localize_integrate(spec, localized_class(spec, (1,)))

    assert nonequivariant_limit(pairing, 1) == 1


@pytest.mark.parametrize("a", [0, 1, 2])
def test_pairings_match_closed_form_P2(a):
    dims = (2,)
    limits = pairing_limits(SpaceSpec.projective(2), 2, (a,), -9)
    p = HbarLaurent.from_coh(CohClass.generator(dims, 0) ** a)
    for d in range(3):
        expected = {j: c for j, c in (G_X_d(dims, (d,)) * p).integrate().items() if c}
        assert limits[(d,)] == expected


def test_pairing_limits_frozen():
    limits = pairing_limits(SpaceSpec.projective(2), 2, (1,), -9)
    assert limits == {(0,): {}, (1,): {-4: F(-3)}, (2,): {-7: F(-9, 16)}}


def test_oracles_frozen():
    assert oracle_euler_sym(2, 5, 5) == 2875
    assert oracle_euler_sym(2, 4, 3) == 27


def test_oracle_is_parameter_independent():
    values = {euler_sym_integral(SpaceSpec.grassmannian(2, 4, seed=s), 3) for s in range(5)}
    assert values == {27}


def test_recursion_part_at_degree_zero_vanishes(p1):
    S = compute_SX(p1, 1)
    data = RecursionData.build(p1, None, 1)
    assert not recursion_part(S, data, (0,), (0,))
