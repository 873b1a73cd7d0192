import pytest

from qhyperplane.algebra import MPoly
from qhyperplane.errors import DescriptorError
from qhyperplane.flag_qh import (
    build_A,
    characteristic_polynomial,
    check_relations_vs_recursion,
    determinants_agree,
    elementary_symmetric,
    homogeneity_check,
    q_zero_check,
    quantum_relations,
    variable_names,
)


def v(n, name):
    return MPoly.variable(variable_names(n), name)


def test_matrix_frozen():
    A = build_A(2)
    assert A[0][0] == v(2, "x1") and A[1][1] == v(2, "x2")
    assert A[0][1] == v(2, "q1") and A[1][0] == MPoly.constant(variable_names(2), -1)
    A3 = build_A(3)
    assert (A3[0][1], A3[1][2]) == (v(3, "q1"), v(3, "q2"))
    assert all(A3[i + 1][i] == MPoly.constant(variable_names(3), -1) for i in range(2))
    assert A3[0][2] == MPoly.constant(variable_names(3), 0)


def test_small_n_rejected():
    with pytest.raises(DescriptorError):
        build_A(1)
    with pytest.raises(DescriptorError):
        quantum_relations(1)


def test_flag2_relations_frozen():
    r1, r2 = quantum_relations(2)
    assert str(r1) == "x1 + x2" and str(r2) == "x1*x2 + q1"
    # with x1 = p, x2 = -p the second relation reads p^2 = q
    names = variable_names(2)
    p = MPoly.variable(names, "x1")
    assert r2.poly.substitute({"x2": -p}) == -(p * p) + v(2, "q1")
    assert r1.poly.substitute({"x2": -p}) == MPoly.constant(names, 0)


def test_flag3_quadratic_relation_frozen():
    r = quantum_relations(3)[1]
    expected = elementary_symmetric(3, 2) + v(3, "q1") + v(3, "q2")
    assert r.poly == expected
    assert str(quantum_relations(3)[2]) == "x1*x2*x3 + x1*q2 + x3*q1"


@pytest.mark.parametrize("n", range(2, 7))
def test_classical_limit(n):
    assert q_zero_check(n)
    assert len(quantum_relations(n)) == n


@pytest.mark.parametrize("n", range(2, 6))
def test_two_determinants_agree(n):
    assert determinants_agree(n)


@pytest.mark.parametrize("n", range(2, 7))
def test_homogeneity(n):
    assert homogeneity_check(n)


def test_characteristic_polynomial_methods():
    with pytest.raises(DescriptorError):
        characteristic_polynomial(3, "lu")


@pytest.mark.parametrize("n, order", [(2, 0), (2, 3), (3, 2)])
def test_relations_hold_on_recursion_output(n, order):
    assert check_relations_vs_recursion(n, order)


@pytest.mark.parametrize("n", [2, 3])
def test_corrupted_sign_fails(n):
    assert not check_relations_vs_recursion(n, 2, sign=-1)


def test_order_zero_cannot_see_q():
    assert check_relations_vs_recursion(2, 0, sign=-1)
