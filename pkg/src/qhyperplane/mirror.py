"""Mirror transformation, Gromov-Witten extraction and class-P verification.

Nonequivariant series are :class:`NovikovSeries` with :class:`HbarLaurent`
coefficients.  Equivariant ones are :class:`LocalizedSeries` with one
``hbar``-rational-function series per fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .algebra import (
    CohClass,
    HbarLaurent,
    NovikovSeries,
    RationalFunction,
    degrees_up_to,
    revert_mirror_coordinates,
    series_exp,
    series_log,
    substitute_novikov,
)
from .ambient import LocalizedSeries, euler_V
from .errors import (
    ConsistencyError,
    DescriptorError,
    NonInvertibleError,
    NormalizationError,
    SeriesDomainError,
)
from .hypergeo import HypergeomSeries, euler_class, fano_degrees
from .localization import RecursionData, recursion_part

Degree = Tuple[int, ...]


# hbar expansion and the mirror map ---------------------------------------------

@dataclass
class HbarExpansion:
    Z0: NovikovSeries
    Z1_p: List[NovikovSeries]
    Z1_scalar: NovikovSeries
    remainder: NovikovSeries


def expand_hbar(Z: NovikovSeries, dims: Sequence[int]) -> HbarExpansion:
    """Split ``Z = Z0 + (sum_i Z1_i p_i + Z1_s)/hbar + O(hbar^-2)``."""
    dims = tuple(dims)
    k, order = Z.nvars, Z.order
    zero = (0,) * len(dims)
    units = [tuple(1 if t == i else 0 for t in range(len(dims))) for i in range(len(dims))]
    z0, z1s = {}, {}
    z1p = [dict() for _ in dims]
    for d, c in Z.coeffs.items():
        for (j, e), val in c.terms.items():
            if j > 0:
                raise NormalizationError(f"positive hbar power {j} in degree {d}")
            if j == 0:
                if e != zero:
                    raise NormalizationError(f"non-scalar hbar^0 coefficient in degree {d}")
                z0[d] = val
            elif j == -1:
                if e == zero:
                    z1s[d] = val
                elif e in units:
                    z1p[units.index(e)][d] = val
                else:
                    raise NormalizationError(f"hbar^-1 coefficient of degree > 1 in degree {d}")
    if z0.get((0,) * k) != 1:
        raise NormalizationError("Z(0) must be 1 (use the primed series)")
    Z0 = NovikovSeries(k, order, z0)
    Z1p = [NovikovSeries(k, order, c) for c in z1p]
    Z1s = NovikovSeries(k, order, z1s)
    head = Z0.map_coefficients(lambda c: HbarLaurent.scalar(dims, c))
    head = head + Z1s.map_coefficients(lambda c: HbarLaurent.scalar(dims, c, -1))
    for i, s in enumerate(Z1p):
        p = HbarLaurent.from_coh(CohClass.generator(dims, i), -1)
        head = head + s.map_coefficients(lambda c, p=p: p * c)
    return HbarExpansion(Z0, Z1p, Z1s, Z - head)


@dataclass
class MirrorMap:
    """``t_0 -> t_0 + f0 hbar + f_minus1``, ``t_i -> t_i + f[i]``."""

    f0: NovikovSeries
    f_minus1: NovikovSeries
    f: List[NovikovSeries]

    def is_zero(self) -> bool:
        return not self.f0 and not self.f_minus1 and not any(self.f)

    def components(self) -> List[Tuple[str, NovikovSeries]]:
        return [("f0", self.f0), ("f-1", self.f_minus1)] + [(f"f{i + 1}", s) for i, s in enumerate(self.f)]


def extract_mirror_map(hs: HypergeomSeries) -> MirrorMap:
    if not hs.primed:
        raise NormalizationError("the mirror map is read off the primed series")
    if min(fano_degrees(hs.dims, hs.bundle)) < 0:
        raise SeriesDomainError("every deg q_i must be nonnegative")
    ex = expand_hbar(hs.series, hs.dims)
    inv = ex.Z0.inverse()
    return MirrorMap(series_log(ex.Z0), ex.Z1_scalar * inv, [s * inv for s in ex.Z1_p])


def map_degree_defects(mm: MirrorMap, fano: Sequence[int]) -> List[Tuple[str, Degree]]:
    """Monomials violating ``deg f_i = 0`` (``i >= 0``) and ``deg f_-1 = 1``."""
    bad = []
    for name, s in mm.components():
        target = 1 if name == "f-1" else 0
        for d in s.coeffs:
            if sum(a * b for a, b in zip(fano, d)) != target:
                bad.append((name, d))
    return bad


# generators of the mirror group --------------------------------------------------

def _inv_hbar_lift(sample, dims=None):
    """Map a rational ``c`` to the coefficient ``c/hbar`` of the series' ring."""
    if isinstance(sample, RationalFunction):
        return lambda c: RationalFunction([c], {0: 1})
    return lambda c: HbarLaurent.scalar(dims, c, -1)


def _dims_of(Z: NovikovSeries):
    for c in Z.coeffs.values():
        if isinstance(c, HbarLaurent):
            return c.dims
        return None
    raise SeriesDomainError("cannot infer the coefficient ring of a zero series")


def apply_scalar_mult(Z, f: NovikovSeries):
    """Type 1: multiply by ``f(q)`` with ``f(0) = 1``."""
    if f.constant_term() != 1:
        raise SeriesDomainError("type-1 generator needs f(0) = 1")
    if isinstance(Z, LocalizedSeries):
        return Z.map(lambda v, z: f * z)
    return f * Z


def _exp_over_hbar(Z: NovikovSeries, f: NovikovSeries) -> NovikovSeries:
    sample = next(iter(Z.coeffs.values()))
    lift = _inv_hbar_lift(sample, _dims_of(Z))
    return series_exp(f.map_coefficients(lift))


def apply_exp_over_hbar(Z, f: NovikovSeries):
    """Type 2: multiply by ``exp(f(q)/hbar)`` with ``f(0) = 0``."""
    if f.constant_term():
        raise SeriesDomainError("type-2 generator needs f(0) = 0")
    if isinstance(Z, LocalizedSeries):
        return Z.map(lambda v, z: _exp_over_hbar(z, f) * z)
    return _exp_over_hbar(Z, f) * Z


def apply_coordinate_change(Z, fs: Sequence[NovikovSeries]):
    """Type 3: ``exp(sum_i f_i p_i / hbar) Z(q exp(f), hbar)`` with ``f_i(0) = 0``."""
    for f in fs:
        if f.constant_term():
            raise SeriesDomainError("type-3 generator needs f_i(0) = 0")
    units = [series_exp(f) for f in fs]
    if isinstance(Z, LocalizedSeries):
        spec = Z.spec

        def at_point(v, z):
            pv = [spec.restrict_divisor(i, v).value() for i in range(spec.k)]
            arg = NovikovSeries(z.nvars, z.order)
            for f, p in zip(fs, pv):
                arg = arg + f * p
            pref = series_exp(arg.map_coefficients(lambda c: RationalFunction([c], {0: 1})))
            return pref * substitute_novikov(z, units)

        return Z.map(at_point)
    dims = _dims_of(Z)
    arg = NovikovSeries(Z.nvars, Z.order)
    for i, f in enumerate(fs):
        p = HbarLaurent.from_coh(CohClass.generator(dims, i), -1)
        arg = arg + f.map_coefficients(lambda c, p=p: p * c)
    return series_exp(arg) * substitute_novikov(Z, units)


# the transformation from I to J --------------------------------------------------

def mirror_transform(hs: HypergeomSeries, mm: MirrorMap | None = None) -> NovikovSeries:
    """``J'(Q)``: strip ``Z0`` and the ``1/hbar`` exponentials, then revert coordinates."""
    mm = mm or extract_mirror_map(hs)
    dims = hs.dims
    Z = hs.series
    ex = expand_hbar(Z, dims)
    A = Z * ex.Z0.inverse()
    if mm.f_minus1:
        A = apply_exp_over_hbar(A, -mm.f_minus1)
    if any(mm.f):
        arg = NovikovSeries(Z.nvars, Z.order)
        for i, f in enumerate(mm.f):
            p = HbarLaurent.from_coh(CohClass.generator(dims, i), -1)
            arg = arg - f.map_coefficients(lambda c, p=p: p * c)
        A = series_exp(arg) * A
        g = revert_mirror_coordinates(mm.f)
        A = substitute_novikov(A, [series_exp(gi) for gi in g])
    check_J_normalized(A)
    return A


def check_J_normalized(J: NovikovSeries) -> None:
    """Raise unless ``J = 1 + O(hbar^-2)`` coefficientwise."""
    zero_deg = (0,) * J.nvars
    for d, c in J.items():
        for (j, e), val in c.terms.items():
            if j > -2 and not (d == zero_deg and j == 0 and not any(e) and val == 1):
                raise ConsistencyError(f"J' is not 1 mod hbar^-2: term hbar^{j} p^{e} in degree {d}")
    if J.constant_term() != 1 and J[zero_deg] != HbarLaurent.scalar(J[zero_deg].dims, 1):
        raise ConsistencyError("J'(0) != 1")


# Gromov-Witten numbers -------------------------------------------------------------

@dataclass
class GWRow:
    degree: Degree
    N: Fraction
    n: Fraction
    hbar2: Fraction


def _divisors_common(d: Degree) -> List[int]:
    g = 0
    for a in d:
        g = _gcd(g, a)
    return [r for r in range(1, g + 1) if g % r == 0]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def extract_gw(J: NovikovSeries, hs: HypergeomSeries) -> Tuple[Fraction, List[GWRow]]:
    """Classical triple intersection and ``(N_d, n_d)`` for ``1 <= |d| <= D``.

    The classical term is ``int_X Euler(V) H^3`` with ``H = sum_i p_i``
    (``5`` for the quintic).

    ``N_d = -1/2 [hbar^-3] int_X Euler(V) J'_d``; ``n_d`` inverts
    ``N_d = sum_{r | d} n_{d/r} / r^3``.
    """
    dims, bundle = hs.dims, hs.bundle
    if sum(dims) - bundle.rank != 3 or any(fano_degrees(dims, bundle)):
        raise DescriptorError("Gromov-Witten extraction needs a Calabi-Yau threefold complete intersection")
    E = euler_class(dims, bundle)
    zero = (0,) * J.nvars
    H = CohClass(dims)
    for i in range(len(dims)):
        H = H + CohClass.generator(dims, i)
    degree = (J[zero] * (E * H**3)).integrate().get(0, Fraction(0))
    rows: Dict[Degree, GWRow] = {}
    for d in degrees_up_to(J.nvars, J.order)[1:]:
        ints = (J[d] * E).integrate() if J[d] else {}
        h2 = ints.get(-2, Fraction(0))
        if h2:
            raise ConsistencyError(f"hbar^-2 term {h2} of int Euler(V) J'_{d} does not vanish")
        N = -ints.get(-3, Fraction(0)) / 2
        n = N
        for r in _divisors_common(d)[1:]:
            n -= rows[tuple(a // r for a in d)].n / Fraction(r**3)
        rows[d] = GWRow(d, N, n, h2)
    return degree, [rows[d] for d in degrees_up_to(J.nvars, J.order)[1:]]


def yukawa_series(n: Dict[int, Fraction], order: int) -> NovikovSeries:
    """``sum_d n_d d^3 q^d / (1 - q^d)`` truncated at ``order``."""
    coeffs: Dict[Degree, Fraction] = {}
    for d, nd in n.items():
        if d < 1 or not nd:
            continue
        for s in range(1, order // d + 1):
            key = (d * s,)
            coeffs[key] = coeffs.get(key, Fraction(0)) + Fraction(nd) * d**3
    return NovikovSeries(1, order, coeffs)


# class P ---------------------------------------------------------------------------

def double_construction(
    Z: LocalizedSeries, bundle_lines: Sequence[Sequence[int]] = (), zorder: int = 2, order: int | None = None
) -> Dict[Tuple[Degree, Degree], RationalFunction]:
    """Coefficients of ``q^d z^alpha`` in ``int_V Z(q e^{hbar z}, hbar) e^{pz} Z(q, -hbar)``.

    Localized: ``sum_v E(V)_v/e_v sum_{d1+d2=d} prod_i (p_{i,v} + d1_i hbar)^{a_i}/a_i!
    Z_{v,d1}(hbar) Z_{v,d2}(-hbar)``.
    """
    spec = Z.spec
    k = spec.k
    order = Z.order if order is None else order
    points = spec.fixed_points()
    weight = {v: euler_V(spec, bundle_lines, v) / spec.euler_tangent(v) for v in points}
    pv = {v: [spec.restrict_divisor(i, v).value() for i in range(k)] for v in points}
    flipped = {v: {d: c.flip_hbar() for d, c in Z.values[v].coeffs.items()} for v in points}
    degrees = degrees_up_to(k, order)
    alphas = degrees_up_to(k, zorder)
    out = {}
    for d in degrees:
        splits = [(d1, tuple(b - a for a, b in zip(d1, d))) for d1 in degrees if all(a <= b for a, b in zip(d1, d))]
        for alpha in alphas:
            norm = Fraction(1)
            for a in alpha:
                norm /= factorial(a)
            total = RationalFunction()
            for v in points:
                inner = RationalFunction()
                for d1, d2 in splits:
                    a1 = Z.values[v].coeffs.get(d1)
                    a2 = flipped[v].get(d2)
                    if not a1 or not a2:
                        continue
                    poly = RationalFunction.constant(1)
                    for i, a in enumerate(alpha):
                        if a:
                            poly = poly * RationalFunction.linear(pv[v][i], d1[i]) ** a
                    inner = inner + poly * a1 * a2
                total = total + inner * (weight[v] * norm)
            out[(d, alpha)] = total
    return out


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ClassPReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, passed, detail))

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]


def verify_class_P(
    Z: LocalizedSeries, data: RecursionData, order: int | None = None, zorder: int = 2
) -> ClassPReport:
    """Run the class-P checks: normalization, substitution, recursion residues, double construction."""
    spec = Z.spec
    order = min(Z.order, data.order) if order is None else order
    k = spec.k
    zero = (0,) * k
    rep = ClassPReport()
    degrees = degrees_up_to(k, order)

    bad = [v for v in spec.fixed_points() if Z.at(v, zero) != 1]
    rep.add("normalization Z(0)=1", not bad, f"fails at {bad}" if bad else "")

    poles = []
    for v in spec.fixed_points():
        for rd in data.rays[v]:
            for m in rd.C:
                shift = sum(m * b for b in rd.beta)
                for d in degrees:
                    if sum(d) + shift > order:
                        continue
                    try:
                        Z.evaluate(rd.w, d, -rd.kappa / m)
                    except NonInvertibleError:
                        poles.append((rd.w, d, m))
    rep.add("substitution hbar=-kappa/m well defined", not poles, f"poles at {poles[:5]}" if poles else "")

    if poles:
        rep.add("recursion residues have poles only at hbar=0", False, "skipped: substitution undefined")
    else:
        off = []
        for v in spec.fixed_points():
            for d in degrees[1:]:
                R = Z.at(v, d) - recursion_part(Z, data, v, d)
                if not R.poles_only_at_zero():
                    off.append((v, d, sorted(r for r in R.poles() if r)))
        rep.add("recursion residues have poles only at hbar=0", not off, f"{off[:3]}" if off else "")

    W = double_construction(Z, data.bundle.lines, zorder, order)
    nonpoly = [(d, a) for (d, a), val in W.items() if not val.is_polynomial()]
    rep.add(
        "double construction is polynomial in hbar",
        not nonpoly,
        f"{len(nonpoly)} of {len(W)} entries have poles, e.g. {nonpoly[:3]}" if nonpoly else f"{len(W)} entries",
    )
    return rep
