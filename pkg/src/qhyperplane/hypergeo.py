"""Hypergeometric series for complete intersections in products of projective spaces.

The ambient ``X = P^{n_1} x ... x P^{n_k}`` is described by ``dims``; a
:class:`BundleSpec` lists line bundles ``L_j`` by their degree vectors
``l_j`` (so ``c_1(L_j) = sum_i l_{j,i} p_i``).  All series are stored without
the prefactor ``exp((t_0 + p t)/hbar)``; under that convention ``hbar d/dt_i``
acts on the ``q^d`` coefficient as multiplication by ``p_i + d_i hbar``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .algebra import CohClass, HbarLaurent, MPoly, NovikovSeries, degrees_up_to, invert_linear_factor
from .errors import DescriptorError

Degree = Tuple[int, ...]


@dataclass(frozen=True)
class BundleSpec:
    """A direct sum of line bundles, each given by its pairings with the degree basis."""

    lines: Tuple[Tuple[int, ...], ...] = ()

    def __init__(self, lines: Iterable[Sequence[int]] = ()):
        lines = tuple(tuple(int(a) for a in l) for l in lines)
        for l in lines:
            if any(a < 0 for a in l):
                raise DescriptorError(f"line bundle {l} is not convex (negative degree)")
        if lines and len({len(l) for l in lines}) != 1:
            raise DescriptorError("all line bundles need the same number of degrees")
        object.__setattr__(self, "lines", lines)

    @property
    def rank(self) -> int:
        return len(self.lines)

    def degrees(self, d: Sequence[int]) -> List[int]:
        """``<c_1(L_j), d>`` for every summand."""
        return [sum(a * b for a, b in zip(l, d)) for l in self.lines]

    def check_ring(self, dims: Sequence[int]):
        for l in self.lines:
            if len(l) != len(dims):
                raise DescriptorError(f"line bundle {l} does not match {len(dims)} Novikov variables")


def fano_degrees(dims: Sequence[int], bundle: BundleSpec) -> Tuple[int, ...]:
    """``deg q_i``: pairings of ``c_1(TX) - c_1(V)`` with the degree basis."""
    bundle.check_ring(dims)
    return tuple(n + 1 - sum(l[i] for l in bundle.lines) for i, n in enumerate(dims))


def c1_class(dims: Sequence[int], l: Sequence[int]) -> CohClass:
    dims = tuple(dims)
    out = CohClass(dims)
    for i, a in enumerate(l):
        if a:
            out = out + CohClass.generator(dims, i) * a
    return out


def euler_class(dims: Sequence[int], bundle: BundleSpec) -> CohClass:
    out = CohClass.scalar(tuple(dims), 1)
    for l in bundle.lines:
        out = out * c1_class(dims, l)
    return out


def _linear_product(dims, bundle: BundleSpec, d, start: int) -> HbarLaurent:
    dims = tuple(dims)
    bundle.check_ring(dims)
    out = HbarLaurent.scalar(dims, 1)
    for l, top in zip(bundle.lines, bundle.degrees(d)):
        c = c1_class(dims, l)
        for m in range(start, top + 1):
            out = out * HbarLaurent.linear(c, m)
    return out


def H_beta(bundle: BundleSpec, d: Sequence[int], dims: Sequence[int]) -> HbarLaurent:
    """``prod_j prod_{m=0}^{<c_1(L_j), d>} (c_1(L_j) + m hbar)``."""
    return _linear_product(dims, bundle, d, 0)


def H_prime_beta(bundle: BundleSpec, d: Sequence[int], dims: Sequence[int]) -> HbarLaurent:
    """``H_beta`` with the ``m = 0`` factors removed."""
    return _linear_product(dims, bundle, d, 1)


# identities between correcting classes, as polynomials in x_j and h --------------

_NAMES = ("x", "h")


def _H_poly(top: int, x_shift: int = 0, h_sign: int = 1, start: int = 0) -> MPoly:
    """``prod_{m=start}^{top} (x + x_shift h + m h_sign h)`` for one summand."""
    x, h = MPoly.gens(_NAMES)
    x = x + h * x_shift
    out = MPoly.constant(_NAMES, 1)
    for m in range(start, top + 1):
        out = out * (x + h * (m * h_sign))
    return out


def _check_sub(beta, beta_p):
    if len(beta) != len(beta_p) or any(b < 0 or b > a for a, b in zip(beta, beta_p)):
        raise DescriptorError("need 0 <= beta' <= beta componentwise")
    return tuple(a - b for a, b in zip(beta, beta_p))


# Both sides are products over the summands L_j, each in its own variable x_j,
# so the identities are compared summand by summand as polynomials in (x_j, h).

def check_identity_double(bundle: BundleSpec, beta, beta_p) -> bool:
    """``H_beta(x - <c_1(L),beta'> h, h) == H_{beta'}(x, -h) H'_{beta-beta'}(x, h)``."""
    rest = _check_sub(beta, beta_p)
    for b, bp, r in zip(bundle.degrees(beta), bundle.degrees(beta_p), bundle.degrees(rest)):
        if _H_poly(b, x_shift=-bp) != _H_poly(bp, h_sign=-1) * _H_poly(r, start=1):
            return False
    return True


def check_identity_recursion(bundle: BundleSpec, beta, beta_p) -> bool:
    """``H'_beta(x, h) == H'_{beta'}(x, h) H'_{beta-beta'}(x + <c_1(L),beta'> h, h)``."""
    rest = _check_sub(beta, beta_p)
    for b, bp, r in zip(bundle.degrees(beta), bundle.degrees(beta_p), bundle.degrees(rest)):
        if _H_poly(b, start=1) != _H_poly(bp, start=1) * _H_poly(r, x_shift=bp, start=1):
            return False
    return True


# closed forms -----------------------------------------------------------------

def G_X_d(dims: Sequence[int], d: Sequence[int]) -> HbarLaurent:
    """``prod_i prod_{m=1}^{d_i} (p_i + m hbar)^{-(n_i+1)}``."""
    dims = tuple(dims)
    if len(d) != len(dims):
        raise DescriptorError("degree vector does not match the number of factors")
    out = HbarLaurent.scalar(dims, 1)
    for i, (n, di) in enumerate(zip(dims, d)):
        p = CohClass.generator(dims, i)
        for m in range(1, di + 1):
            inv = invert_linear_factor(p, m)
            out = out * inv ** (n + 1)
    return out


@dataclass
class HypergeomSeries:
    series: NovikovSeries
    dims: Tuple[int, ...]
    bundle: BundleSpec
    primed: bool

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def provenance(self) -> str:
        space = " x ".join(f"P^{n}" for n in self.dims)
        kind = "primed" if self.primed else "unprimed"
        return f"{kind} hypergeometric series on {space}, bundle {list(self.bundle.lines)}, D={self.order}"


def phi_V(dims: Sequence[int], bundle: BundleSpec, order: int, primed: bool = True) -> HypergeomSeries:
    """``sum_{|d| <= D} q^d H_d G^X_d`` (``H'_d`` when ``primed``)."""
    dims = tuple(dims)
    bundle.check_ring(dims)
    k = len(dims)
    H = H_prime_beta if primed else H_beta
    coeffs = {d: H(bundle, d, dims) * G_X_d(dims, d) for d in degrees_up_to(k, order)}
    return HypergeomSeries(NovikovSeries(k, order, coeffs), dims, bundle, primed)


def qde_check(hs: HypergeomSeries) -> bool:
    """Coefficient form of the hypergeometric differential equations.

    For every ``i`` and ``d`` with ``d_i >= 1``:
    ``(p_i + d_i hbar)^{n_i+1} A_d == prod_j prod_{m=<L_j,d-e_i>+1}^{<L_j,d>} (c_1(L_j) + m hbar) A_{d-e_i}``.
    """
    dims, bundle, series = hs.dims, hs.bundle, hs.series
    k = len(dims)
    for d in degrees_up_to(k, series.order):
        for i in range(k):
            if not d[i]:
                continue
            prev = tuple(a - (1 if t == i else 0) for t, a in enumerate(d))
            p = CohClass.generator(dims, i)
            lhs = HbarLaurent.linear(p, d[i]) ** (dims[i] + 1) * series[d]
            factor = HbarLaurent.scalar(dims, 1)
            for l, lo, hi in zip(bundle.lines, bundle.degrees(prev), bundle.degrees(d)):
                c = c1_class(dims, l)
                for m in range(lo + 1, hi + 1):
                    factor = factor * HbarLaurent.linear(c, m)
            if lhs != factor * series[prev]:
                return False
    return True


def homogeneity_defects(hs: HypergeomSeries) -> List[Tuple[Degree, int, Tuple[int, ...]]]:
    """Monomials ``q^d hbar^j p^e`` whose weighted degree is off.

    With ``deg hbar = 1``, ``deg p_i = 1`` and ``deg q_i`` the Fano degrees, the
    primed series has degree 0 and the unprimed one degree ``rank V``.
    """
    fano = fano_degrees(hs.dims, hs.bundle)
    target = 0 if hs.primed else hs.bundle.rank
    bad = []
    for d, c in hs.series.items():
        shift = sum(f * a for f, a in zip(fano, d))
        for (j, e) in c.terms:
            if j + sum(e) + shift != target:
                bad.append((d, j, e))
    return bad


def scalar_part(hs: HypergeomSeries) -> NovikovSeries:
    """The ``hbar^0`` scalar coefficients: ``sum_d [p^0 hbar^0] A_d q^d``."""
    zero = (0,) * len(hs.dims)
    return hs.series.map_coefficients(lambda c: c.terms.get((0, zero), Fraction(0)))
