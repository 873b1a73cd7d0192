"""Equivariant correlators by the fixed-point recursion, and localization oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Sequence, Tuple

from .algebra import NovikovSeries, RationalFunction, degrees_up_to
from .ambient import (
    FixedPoint,
    LocalizedSeries,
    SpaceSpec,
    localize_integrate,
    localized_class,
    recursion_coefficient,
)
from .errors import DegenerateParameterError, DegreeBoundError, NonInvertibleError
from .hypergeo import BundleSpec

Degree = Tuple[int, ...]


@dataclass
class RayData:
    w: FixedPoint
    kappa: Fraction
    beta: Degree
    C: Dict[int, Fraction] = field(default_factory=dict)


@dataclass
class RecursionData:
    """Coefficients ``C_{v,w,m}`` with characters and degrees of every ordered ray."""

    spec: SpaceSpec
    bundle: BundleSpec
    order: int
    rays: Dict[FixedPoint, List[RayData]]

    @classmethod
    def build(cls, spec: SpaceSpec, bundle: BundleSpec | None = None, order: int = 1) -> "RecursionData":
        bundle = bundle or BundleSpec()
        table: Dict[FixedPoint, List[RayData]] = {}
        for v in spec.fixed_points():
            entries = []
            for ray in spec.rays(v):
                kap = ray.kappa.value()
                if not kap:
                    raise DegenerateParameterError(f"ray character vanishes at {v}")
                rd = RayData(ray.w, kap, ray.beta)
                m = 1
                while m * sum(ray.beta) <= order:
                    rd.C[m] = recursion_coefficient(spec, ray, m, bundle.lines)
                    m += 1
                entries.append(rd)
            table[v] = entries
        return cls(spec, bundle, order, table)


def _le(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def recursion_part(Z: LocalizedSeries, data: RecursionData, v: FixedPoint, d: Degree) -> RationalFunction:
    """``sum_{w,m} C_{v,w,m} / (hbar (kappa + m hbar)) Z_{w, d - m beta}(-kappa/m)``."""
    total = RationalFunction()
    for rd in data.rays[v]:
        for m, C in rd.C.items():
            shift = tuple(m * b for b in rd.beta)
            if not _le(shift, d):
                continue
            rest = tuple(a - b for a, b in zip(d, shift))
            x = -rd.kappa / m
            try:
                val = Z.evaluate(rd.w, rest, x)
            except NonInvertibleError as exc:
                raise DegenerateParameterError(
                    f"substitution hbar = {x} hits a pole of Z at {rd.w}, degree {rest}"
                ) from exc
            if not val:
                continue
            # C / (hbar (kappa + m hbar)) = (C/m) / (hbar (hbar + kappa/m))
            term = RationalFunction([C * val / m], {0: 1, -rd.kappa / m: 1})
            total = total + term
    return total


def decay_correction(rec: RationalFunction, decay: int) -> RationalFunction:
    """The polynomial in ``1/hbar`` that makes ``rec + R = O(hbar^{-decay})``."""
    if decay <= 1 or not rec:
        return RationalFunction()
    coeffs = rec.expand_at_infinity(-(decay - 1))
    return RationalFunction.from_laurent({j: -c for j, c in coeffs.items() if j < 0})


def compute_SX(
    spec: SpaceSpec,
    order: int,
    decay_correction_on: bool = True,
    data: RecursionData | None = None,
) -> LocalizedSeries:
    """Fixed-point restrictions of ``S^X`` up to total degree ``order``.

    Every coefficient is the recursion part plus a polynomial in ``1/hbar``.
    That polynomial comes from maps whose marked component is contracted.
    It is fixed by the decay ``S_{v,d} = O(hbar^{-<c_1(TX), d>})`` forced by
    the dimension of the moduli space.  With ``decay_correction_on=False`` the
    polynomial is dropped, which is the literal reading ``R_v = 1``.
    """
    data = data or RecursionData.build(spec, None, order)
    k = spec.k
    zero = (0,) * k
    coeffs: Dict[FixedPoint, Dict[Degree, RationalFunction]] = {
        v: {zero: RationalFunction.constant(1)} for v in spec.fixed_points()
    }
    Z = LocalizedSeries(spec, order, {v: NovikovSeries(k, order, c) for v, c in coeffs.items()})
    for d in degrees_up_to(k, order)[1:]:
        decay = sum(f * a for f, a in zip(spec.fano, d))
        new = {}
        for v in spec.fixed_points():
            rec = recursion_part(Z, data, v, d)
            if decay_correction_on:
                rec = rec + decay_correction(rec, decay)
            new[v] = rec
        for v, val in new.items():
            coeffs[v][d] = val
        Z = LocalizedSeries(spec, order, {v: NovikovSeries(k, order, c) for v, c in coeffs.items()})
    return Z


def correction_support(S: LocalizedSeries, data: RecursionData) -> Dict[Tuple[FixedPoint, Degree], List[int]]:
    """hbar exponents of ``S_{v,d} - recursion part``, for diagnostics."""
    out = {}
    for v in S.spec.fixed_points():
        for d in degrees_up_to(S.spec.k, S.order)[1:]:
            R = S.at(v, d) - recursion_part(S, data, v, d)
            if R:
                out[(v, d)] = sorted(R.laurent())
    return out


def compute_phiV_equivariant(spec: SpaceSpec, bundle: BundleSpec, order: int, S: LocalizedSeries | None = None) -> LocalizedSeries:
    """``Phi^V_{v,d} = S^X_{v,d} prod_j prod_{m=1}^{<L_j,d>} (c_1(L_j)_v + m hbar)``."""
    S = S or compute_SX(spec, order)
    k = spec.k

    def twist(v, z: NovikovSeries) -> NovikovSeries:
        lam = [spec.restrict_line_bundle(l, v).value() for l in bundle.lines]
        out = {}
        for d, c in z.coeffs.items():
            f = c
            for lj, top in zip(lam, bundle.degrees(d)):
                for m in range(1, top + 1):
                    f = f * RationalFunction.linear(lj, m)
            out[d] = f
        return NovikovSeries(k, order, out)

    return S.map(twist)


# nonequivariant limits and oracles --------------------------------------------

def _lagrange_at(xs: Sequence[Fraction], ys: Sequence[Fraction], x: Fraction) -> Fraction:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = yi
        for j, xj in enumerate(xs):
            if j != i:
                term *= (x - xj) / (xi - xj)
        total += term
    return total


def nonequivariant_limit(values: Callable[[Fraction], Fraction], degree_bound: int) -> Fraction:
    """Constant term of a polynomial ``t -> values(t)`` of degree at most ``degree_bound``.

    ``values(t)`` is the quantity at torus parameters ``t * eps``.  The
    polynomial is interpolated at ``t = 1..B+1`` and confirmed at ``t = B+2``.
    """
    xs = [Fraction(t) for t in range(1, degree_bound + 2)]
    ys = [Fraction(values(t)) for t in xs]
    probe = Fraction(degree_bound + 2)
    if _lagrange_at(xs, ys, probe) != values(probe):
        raise DegreeBoundError(f"quantity is not a polynomial of degree <= {degree_bound} in the scaling")
    return _lagrange_at(xs, ys, Fraction(0))


def localized_pairing(S: LocalizedSeries, exps: Sequence[int], d: Sequence[int]) -> RationalFunction:
    """``sum_v S_{v,d}(hbar) (p^exps)_v / e_v``: the equivariant ``int_X S_d p^exps``."""
    cls = localized_class(S.spec, exps)
    return localize_integrate(S.spec, {v: S.at(v, d) * cls[v] for v in S.spec.fixed_points()})


def pairing_limits(
    spec: SpaceSpec, order: int, exps: Sequence[int], lowest: int
) -> Dict[Degree, Dict[int, Fraction]]:
    """Nonequivariant ``int_X S_d p^exps`` as ``{d: {j: coefficient of hbar^j}}``.

    Each hbar coefficient of the equivariant pairing is a polynomial in the
    torus parameters.  Its constant term is recovered by
    :func:`nonequivariant_limit` along ``eps -> t eps``.  The coefficient of
    ``hbar^j`` is homogeneous of degree ``|exps| - <c_1, d> - dim - j``, which
    can exceed ``dim + <c_1, d>`` deep in the expansion; the larger bound is used.
    """
    cache: Dict[Fraction, LocalizedSeries] = {}

    def series_at(t: Fraction) -> LocalizedSeries:
        if t not in cache:
            cache[t] = compute_SX(spec.scaled(t), order)
        return cache[t]

    out: Dict[Degree, Dict[int, Fraction]] = {}
    for d in degrees_up_to(spec.k, order):
        c1d = sum(f * a for f, a in zip(spec.fano, d))
        exp_cache: Dict[Fraction, Dict[int, Fraction]] = {}

        def expansion(t: Fraction) -> Dict[int, Fraction]:
            if t not in exp_cache:
                exp_cache[t] = localized_pairing(series_at(t), exps, d).expand_at_infinity(lowest)
            return exp_cache[t]

        row = {}
        for j in range(0, lowest - 1, -1):
            bound = max(spec.dim + c1d, sum(exps) - c1d - spec.dim - j)
            val = nonequivariant_limit(lambda t, j=j: expansion(t).get(j, Fraction(0)), bound)
            if val:
                row[j] = val
        out[d] = row
    return out


def _sym_weights(weights: Sequence[Fraction], l: int) -> List[Fraction]:
    return [sum(c, Fraction(0)) for c in combinations_with_replacement(weights, l)]


def euler_sym_integral(spec: SpaceSpec, l: int) -> Fraction:
    """``int_{Gr(k,n)} Euler(Sym^l S^*)`` at the parameters stored in ``spec``."""
    vals = {}
    for v in spec.fixed_points():
        dual = [-spec.eps[i] for i in v]  # weights of S^* at v
        prod = Fraction(1)
        for w in _sym_weights(dual, l):
            prod *= w
        vals[v] = prod
    return localize_integrate(spec, vals)


def oracle_euler_sym(k: int, n: int, l: int, seeds: Sequence[int] = (0, 1, 2)) -> Fraction:
    """Classical count ``int_{Gr(k,n)} Euler(Sym^l S^*)``, checked for parameter independence."""
    results = set()
    for seed in seeds:
        results.add(euler_sym_integral(SpaceSpec.grassmannian(k, n, seed=seed), l))
    if len(results) != 1:
        raise DegenerateParameterError(f"localization sum depends on the torus parameters: {results}")
    return results.pop()
