"""Exact arithmetic kernel: polynomials, cohomology rings, hbar-Laurent coefficients, series."""

from .cohomology import CohClass, HbarLaurent, integrate_X, invert_linear_factor, monomials
from .poly import MPoly
from .ratfunc import RationalFunction
from .series import (
    NovikovSeries,
    degrees_up_to,
    revert_mirror_coordinates,
    series_exp,
    series_log,
    substitute_novikov,
)


def fmt_rational(c) -> str:
    """Render a rational as the ``"num/den"`` string used in every output table."""
    from fractions import Fraction

    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


__all__ = [
    "CohClass",
    "HbarLaurent",
    "MPoly",
    "NovikovSeries",
    "RationalFunction",
    "degrees_up_to",
    "fmt_rational",
    "integrate_X",
    "invert_linear_factor",
    "monomials",
    "revert_mirror_coordinates",
    "series_exp",
    "series_log",
    "substitute_novikov",
]
