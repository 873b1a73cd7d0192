"""Truncated power series in Novikov variables ``q_1..q_k``.

Coefficients may be any exact ring element that supports ``+``, ``*``,
multiplication by :class:`~fractions.Fraction` and truth testing for zero:
plain fractions, :class:`HbarLaurent`, :class:`RationalFunction`.  Truncation
is by total degree ``|d| = d_1 + ... + d_k <= order``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Sequence, Tuple

from ..errors import DescriptorError, SeriesDomainError

Degree = Tuple[int, ...]


def degrees_up_to(k: int, order: int) -> List[Degree]:
    """Degree vectors with ``|d| <= order``, graded by total degree then lex."""
    out: List[Degree] = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining, -1, -1):
            rec(prefix + (a,), remaining - a, slots - 1)

    for total in range(order + 1):
        if k == 0:
            if total == 0:
                out.append(())
            continue
        rec((), total, k)
    return out


def _leq(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


class NovikovSeries:
    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Mapping[Degree, object] | None = None):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.nvars = nvars
        self.order = order
        clean = {}
        for d, c in (coeffs or {}).items():
            d = tuple(d)
            if len(d) != nvars or min(d, default=0) < 0:
                raise DescriptorError(f"degree {d} is not a degree in {nvars} variables")
            if sum(d) > order:
                continue
            if isinstance(c, int):
                c = Fraction(c)
            if c:
                clean[d] = c
        self.coeffs: Dict[Degree, object] = clean

    @classmethod
    def _raw(cls, nvars, order, coeffs):
        s = cls.__new__(cls)
        s.nvars = nvars
        s.order = order
        s.coeffs = coeffs
        return s

    # construction ---------------------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, order: int, c=1) -> "NovikovSeries":
        return cls(nvars, order, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, order: int, i: int, c=1) -> "NovikovSeries":
        d = [0] * nvars
        d[i] = 1
        return cls(nvars, order, {tuple(d): c})

    @classmethod
    def monomial(cls, nvars: int, order: int, d: Sequence[int], c=1) -> "NovikovSeries":
        return cls(nvars, order, {tuple(d): c})

    @classmethod
    def from_function(cls, nvars: int, order: int, fn: Callable[[Degree], object]) -> "NovikovSeries":
        return cls(nvars, order, {d: fn(d) for d in degrees_up_to(nvars, order)})

    # access --------------------------------------------------------------------
    def __getitem__(self, d) -> object:
        if isinstance(d, int):
            d = (d,)
        return self.coeffs.get(tuple(d), Fraction(0))

    def degrees(self) -> List[Degree]:
        return sorted(self.coeffs, key=lambda d: (sum(d), tuple(-x for x in d)))

    def items(self) -> Iterator[Tuple[Degree, object]]:
        for d in self.degrees():
            yield d, self.coeffs[d]

    def constant_term(self):
        return self[(0,) * self.nvars]

    def map_coefficients(self, fn: Callable[[object], object]) -> "NovikovSeries":
        return NovikovSeries(self.nvars, self.order, {d: fn(c) for d, c in self.coeffs.items()})

    def truncate(self, order: int) -> "NovikovSeries":
        return NovikovSeries(self.nvars, min(order, self.order), self.coeffs)

    # arithmetic -----------------------------------------------------------------
    def _check(self, other: "NovikovSeries"):
        if other.nvars != self.nvars:
            raise DescriptorError(f"{self.nvars} vs {other.nvars} Novikov variables")
        if other.order != self.order:
            raise DescriptorError(f"truncation {self.order} vs {other.order}")

    def _lift(self, other):
        if isinstance(other, NovikovSeries):
            self._check(other)
            return other
        return NovikovSeries.constant(self.nvars, self.order, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out[d] + c if d in out else c
            if s:
                out[d] = s
            else:
                out.pop(d, None)
        return NovikovSeries._raw(self.nvars, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries._raw(self.nvars, self.order, {d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NovikovSeries):
            if not other:
                return NovikovSeries(self.nvars, self.order)
            return NovikovSeries(self.nvars, self.order, {d: c * other for d, c in self.coeffs.items()})
        self._check(other)
        order = self.order
        out: Dict[Degree, object] = {}
        b_items = list(other.coeffs.items())
        for d1, c1 in self.coeffs.items():
            s1 = sum(d1)
            for d2, c2 in b_items:
                if s1 + sum(d2) > order:
                    continue
                d = _add(d1, d2)
                t = c1 * c2
                out[d] = out[d] + t if d in out else t
        return NovikovSeries(self.nvars, order, out)

    def __rmul__(self, other):
        if not other:
            return NovikovSeries(self.nvars, self.order)
        return NovikovSeries(self.nvars, self.order, {d: other * c for d, c in self.coeffs.items()})

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = NovikovSeries.constant(self.nvars, self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            other = NovikovSeries.constant(self.nvars, self.order, other)
        if other.nvars != self.nvars:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[d] == other[d] for d in keys)

    def __bool__(self):
        return bool(self.coeffs)

    def shift(self, d: Sequence[int]) -> "NovikovSeries":
        """Multiply by the monomial ``q^d``."""
        d = tuple(d)
        return NovikovSeries(self.nvars, self.order, {_add(e, d): c for e, c in self.coeffs.items()})

    def inverse(self) -> "NovikovSeries":
        """Multiplicative inverse of a series whose constant term is a nonzero scalar."""
        c0 = self.constant_term()
        if not isinstance(c0, (int, Fraction)) or not c0:
            if c0 != 1:
                raise SeriesDomainError("constant term must be an invertible scalar")
            c0 = Fraction(1)
        inv0 = 1 / Fraction(c0)
        out: Dict[Degree, object] = {(0,) * self.nvars: inv0}
        for d in degrees_up_to(self.nvars, self.order)[1:]:
            acc = None
            for e, c in self.coeffs.items():
                if not any(e) or not _leq(e, d):
                    continue
                g = out.get(_sub(d, e))
                if g is None:
                    continue
                t = c * g
                acc = t if acc is None else acc + t
            if acc is not None and acc:
                out[d] = acc * (-inv0)
        return NovikovSeries(self.nvars, self.order, out)

    def __truediv__(self, other):
        if isinstance(other, NovikovSeries):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __repr__(self):
        return f"NovikovSeries({self})"

    def __str__(self):
        if not self.coeffs:
            return f"0 + O(q^{self.order + 1})"
        parts = []
        for d, c in self.items():
            mono = "*".join(
                (f"q{i + 1}" if self.nvars > 1 else "q") + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(d)
                if a
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) + f" + O(q^{self.order + 1})"


def series_exp(f: NovikovSeries) -> NovikovSeries:
    """``exp(f)`` for ``f(0) == 0``.

    Uses the Euler-operator recurrence ``|d| g_d = sum_e |e| f_e g_{d-e}``,
    which only needs ring operations and division by integers.
    """
    if f.constant_term():
        raise SeriesDomainError("exp requires a vanishing constant term")
    k, order = f.nvars, f.order
    g: Dict[Degree, object] = {(0,) * k: Fraction(1)}
    items = [(e, c, sum(e)) for e, c in f.coeffs.items()]
    for d in degrees_up_to(k, order)[1:]:
        n = sum(d)
        acc = None
        for e, c, w in items:
            if not _leq(e, d):
                continue
            prev = g.get(_sub(d, e))
            if prev is None:
                continue
            t = c * prev * Fraction(w, n)
            acc = t if acc is None else acc + t
        if acc is not None and acc:
            g[d] = acc
    return NovikovSeries(k, order, g)


def series_log(g: NovikovSeries) -> NovikovSeries:
    """``log(g)`` for ``g(0) == 1``."""
    if g.constant_term() != 1:
        raise SeriesDomainError("log requires constant term 1")
    k, order = g.nvars, g.order
    f: Dict[Degree, object] = {}
    for d in degrees_up_to(k, order)[1:]:
        n = sum(d)
        acc = g[d] * n if g[d] else None
        for e, c in list(f.items()):
            if e == d or not _leq(e, d):
                continue
            other = g.coeffs.get(_sub(d, e))
            if other is None:
                continue
            t = -(c * other * sum(e))
            acc = t if acc is None else acc + t
        if acc is not None and acc:
            f[d] = acc * Fraction(1, n)
    return NovikovSeries(k, order, f)


def substitute_novikov(Z: NovikovSeries, units: Sequence[NovikovSeries]) -> NovikovSeries:
    """Replace ``q_i`` by ``q_i * u_i`` where every ``u_i`` has constant term 1."""
    if len(units) != Z.nvars:
        raise DescriptorError("one unit series per Novikov variable is required")
    for u in units:
        Z._check(u)
        if u.constant_term() != 1:
            raise SeriesDomainError("substitution units must have constant term 1")
    k, order = Z.nvars, Z.order
    powers: List[List[NovikovSeries]] = []
    for u in units:
        row = [NovikovSeries.constant(k, order, 1)]
        for _ in range(order):
            row.append(row[-1] * u)
        powers.append(row)
    out: Dict[Degree, object] = {}
    for d, c in Z.coeffs.items():
        factor = NovikovSeries.constant(k, order, 1)
        for i, a in enumerate(d):
            if a:
                factor = factor * powers[i][a]
        for e, s in factor.shift(d).coeffs.items():
            t = c * s
            out[e] = out[e] + t if e in out else t
    return NovikovSeries(k, order, out)


def revert_mirror_coordinates(f: Sequence[NovikovSeries], order: int | None = None) -> List[NovikovSeries]:
    """Invert ``Q_i = q_i exp(f_i(q))``: return ``g`` with ``q_i = Q_i exp(g_i(Q))``.

    Solves ``g = -f(Q exp(g(Q)))`` by fixed-point iteration; every pass fixes
    one more order of the truncated series.
    """
    if not f:
        return []
    k = f[0].nvars
    if order is None:
        order = f[0].order
    f = [fi.truncate(order) for fi in f]
    for fi in f:
        if fi.constant_term():
            raise SeriesDomainError("mirror coordinate series must vanish at q = 0")
    g = [NovikovSeries(k, order) for _ in range(k)]
    for _ in range(order + 1):
        units = [series_exp(gi) for gi in g]
        g = [-substitute_novikov(fi, units) for fi in f]
    return g
