"""Quantum cohomology relations of complete flag manifolds ``F(n)``.

The relations are the coefficients of ``det(lambda Id - A)`` where ``A`` has
``x_1..x_n`` on the diagonal, ``q_1..q_{n-1}`` on the superdiagonal and ``-1``
on the subdiagonal.  All entries commute.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Sequence, Tuple

from .algebra import MPoly, degrees_up_to
from .algebra.poly import product
from .ambient import SpaceSpec
from .errors import DescriptorError

Matrix = List[List[MPoly]]


def variable_names(n: int, with_lambda: bool = False) -> Tuple[str, ...]:
    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"q{i}" for i in range(1, n))
    return names + ("lam",) if with_lambda else names


def _check_n(n: int):
    if n < 2:
        raise DescriptorError("flag manifolds need n >= 2")


def build_A(n: int, names: Sequence[str] | None = None) -> Matrix:
    _check_n(n)
    names = tuple(names or variable_names(n))
    zero = MPoly.constant(names, 0)
    A = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        A[i][i] = MPoly.variable(names, f"x{i + 1}")
        if i + 1 < n:
            A[i][i + 1] = MPoly.variable(names, f"q{i + 1}")
            A[i + 1][i] = MPoly.constant(names, -1)
    return A


def _lambda_minus_A(n: int) -> Tuple[Matrix, Tuple[str, ...]]:
    names = variable_names(n, with_lambda=True)
    lam = MPoly.variable(names, "lam")
    A = build_A(n, names)
    M = [[(lam if i == j else 0) - A[i][j] for j in range(n)] for i in range(n)]
    return M, names


def det_bareiss(M: Matrix) -> MPoly:
    """Fraction-free elimination; every division is exact."""
    n = len(M)
    M = [row[:] for row in M]
    names = M[0][0].names
    sign = 1
    prev = MPoly.constant(names, 1)
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((r for r in range(k + 1, n) if M[r][k]), None)
            if swap is None:
                return MPoly.constant(names, 0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).divide_exact(prev)
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


def det_cofactor(M: Matrix) -> MPoly:
    """Laplace expansion along the first row (the independent oracle)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = MPoly.constant(M[0][0].names, 0)
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class QuantumRelation:
    index: int
    poly: MPoly

    def at_q_zero(self) -> MPoly:
        n = sum(1 for s in self.poly.names if s.startswith("x"))
        return self.poly.substitute({f"q{i}": 0 for i in range(1, n)})

    def __str__(self):
        return str(self.poly)


def _relations_from(charpoly: MPoly, n: int) -> List[QuantumRelation]:
    names = variable_names(n)
    out = []
    for i in range(1, n + 1):
        coeff = charpoly.coefficient_in("lam", n - i) * (-1) ** i
        out.append(QuantumRelation(i, _drop_lambda(coeff, names)))
    return out


def _drop_lambda(p: MPoly, names: Tuple[str, ...]) -> MPoly:
    idx = p.names.index("lam")
    terms = {}
    for mono, c in p.terms.items():
        if mono[idx]:
            raise ValueError("lambda survived coefficient extraction")
        terms[mono[:idx] + mono[idx + 1:]] = c
    return MPoly(names, terms)


def characteristic_polynomial(n: int, method: str = "bareiss") -> MPoly:
    M, _ = _lambda_minus_A(n)
    if method == "bareiss":
        return det_bareiss(M)
    if method == "cofactor":
        return det_cofactor(M)
    raise DescriptorError(f"unknown determinant method {method!r}")


def quantum_relations(n: int, method: str = "bareiss") -> List[QuantumRelation]:
    """Coefficients ``(-1)^i [lambda^{n-i}] det(lambda Id - A)`` for ``i = 1..n``."""
    _check_n(n)
    return _relations_from(characteristic_polynomial(n, method), n)


def elementary_symmetric(n: int, i: int) -> MPoly:
    names = variable_names(n)
    xs = [MPoly.variable(names, f"x{j}") for j in range(1, n + 1)]
    total = MPoly.constant(names, 0)
    for c in combinations(xs, i):
        total = total + product(c, names)
    return total


def q_zero_check(n: int) -> bool:
    return all(r.at_q_zero() == elementary_symmetric(n, r.index) for r in quantum_relations(n))


def homogeneity_check(n: int) -> bool:
    """Every relation is homogeneous for ``deg x_i = 1``, ``deg q_i = 2``."""
    weights = [1] * n + [2] * (n - 1)
    return all(r.poly.is_homogeneous(weights) for r in quantum_relations(n))


def determinants_agree(n: int) -> bool:
    return characteristic_polynomial(n, "bareiss") == characteristic_polynomial(n, "cofactor")


# cross-check with the fixed-point recursion -------------------------------------

def check_relations_vs_recursion(n: int, order: int, sign: int = 1, S=None, seed: int = 0) -> bool:
    """Coefficient identity of the degree-2 relation on the restrictions of ``S^X``.

    On the ``q^d`` coefficient the operator ``hbar d/dt`` attached to ``x_i``
    acts by ``X_i = (x_i)_v + (d_i - d_{i-1}) hbar`` with ``d_0 = d_n = 0``,
    and ``q_i`` shifts the degree.  The relation ``e_2(x) + sum q_i`` must act
    on ``S_v`` as its classical value ``e_2((x)_v)``.  ``sign`` scales the
    ``q`` terms so a corrupted relation can be tested.
    """
    _check_n(n)
    if S is None:
        from .localization import compute_SX

        S = compute_SX(SpaceSpec.flag_a(n, seed=seed), order)
    spec = S.spec
    if spec.kind != "flag_a" or spec.params[0] != n:
        raise DescriptorError("series does not live on F(n)")
    from .algebra import RationalFunction

    k = n - 1
    for v in spec.fixed_points():
        xv = [-spec.eps[j] for j in v]
        classical = sum((a * b for a, b in combinations(xv, 2)), Fraction(0))
        for d in degrees_up_to(k, order):
            dd = (0,) + tuple(d) + (0,)
            X = [RationalFunction.linear(xv[i], dd[i + 1] - dd[i]) for i in range(n)]
            e2 = RationalFunction()
            for a, b in combinations(X, 2):
                e2 = e2 + a * b
            lhs = e2 * S.at(v, d)
            for i in range(k):
                if d[i]:
                    prev = tuple(a - (1 if t == i else 0) for t, a in enumerate(d))
                    lhs = lhs + S.at(v, prev) * sign
            if lhs != S.at(v, d) * classical:
                return False
    return True
