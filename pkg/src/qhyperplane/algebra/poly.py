"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from ..errors import DescriptorError

Monomial = Tuple[int, ...]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class MPoly:
    """Polynomial in named commuting variables over the rationals.

    Terms are stored as ``{exponent tuple: Fraction}`` without zero entries, so
    two polynomials in the same variables are equal iff their dicts are.
    """

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.names = tuple(names)
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            n = len(self.names)
            for mono, c in terms.items():
                if len(mono) != n:
                    raise DescriptorError(f"monomial {mono} does not match variables {self.names}")
                c = _frac(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, names: Sequence[str], c) -> "MPoly":
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def variable(cls, names: Sequence[str], name: str | int) -> "MPoly":
        names = tuple(names)
        i = names.index(name) if isinstance(name, str) else name
        mono = [0] * len(names)
        mono[i] = 1
        return cls(names, {tuple(mono): 1})

    @classmethod
    def gens(cls, names: Sequence[str]) -> Tuple["MPoly", ...]:
        return tuple(cls.variable(names, i) for i in range(len(names)))

    @classmethod
    def _raw(cls, names, terms) -> "MPoly":
        p = cls.__new__(cls)
        p.names = names
        p.terms = terms
        return p

    # coercion -------------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise DescriptorError(f"variables {self.names} vs {other.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(self.names, other)
        return NotImplemented

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MPoly._raw(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.names, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly(self.names)
            return MPoly._raw(self.names, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MPoly._raw(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(self.names, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # inspection ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, name: str | int) -> int:
        i = self.names.index(name) if isinstance(name, str) else name
        return max((m[i] for m in self.terms), default=-1)

    def coefficient_in(self, name: str | int, power: int) -> "MPoly":
        """Coefficient of ``name**power``, as a polynomial in the same variables."""
        i = self.names.index(name) if isinstance(name, str) else name
        out = {}
        for m, c in self.terms.items():
            if m[i] == power:
                mm = list(m)
                mm[i] = 0
                out[tuple(mm)] = c
        return MPoly._raw(self.names, out)

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        degs = {sum(w * e for w, e in zip(weights, m)) for m in self.terms}
        return len(degs) <= 1

    def evaluate(self, values: Mapping[str, object] | Sequence[object]):
        """Substitute values (numbers or polynomials) for every variable."""
        if isinstance(values, Mapping):
            values = [values[n] for n in self.names]
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t = t * v**e
            total = total + t
        return total

    def substitute(self, mapping: Mapping[str, object]) -> "MPoly":
        """Replace some variables by polynomials in the same variable set."""
        values = [mapping.get(n, MPoly.variable(self.names, n)) for n in self.names]
        result = self.evaluate(values)
        if not isinstance(result, MPoly):
            result = MPoly.constant(self.names, result)
        return result

    # division --------------------------------------------------------------
    def _leading(self) -> Tuple[Monomial, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def divide_exact(self, other: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises ArithmeticError if a remainder is left."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        lm, lc = other._leading()
        rem = self
        quot: Dict[Monomial, Fraction] = {}
        while rem.terms:
            m, c = rem._leading()
            shift = tuple(a - b for a, b in zip(m, lm))
            if min(shift) < 0:
                raise ArithmeticError("division is not exact")
            q = c / lc
            quot[shift] = quot.get(shift, 0) + q
            rem = rem - MPoly._raw(self.names, {shift: q}) * other
        return MPoly(self.names, quot)

    # printing -----------------------------------------------------------------
    def _mono_str(self, m: Monomial) -> str:
        parts = []
        for n, e in zip(self.names, m):
            if e == 1:
                parts.append(n)
            elif e:
                parts.append(f"{n}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m))):
            c = self.terms[m]
            mono = self._mono_str(m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def to_json(self) -> list:
        """Terms as ``[[exponents], "num/den"]`` pairs in a deterministic order."""
        return [[list(m), _fmt(c)] for m, c in sorted(self.terms.items())]


def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def product(factors: Iterable[MPoly], names: Sequence[str]) -> MPoly:
    result = MPoly.constant(names, 1)
    for f in factors:
        result = result * f
    return result
