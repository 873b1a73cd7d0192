"""Exact rational functions of hbar with rational coefficients.

Every denominator met in localization computations is a product of linear
factors ``hbar - r`` with rational roots ``r``, so denominators are kept in
factored form ``{r: multiplicity}``.  Normalization cancels every root of the
numerator against the denominator, which keeps numerator and denominator
coprime and the representation canonical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Sequence

from ..errors import NonInvertibleError

Scalar = (int, Fraction)


def _trim(c: List[Fraction]) -> List[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _padd(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


def _times_root_factor(a: List[Fraction], r: Fraction, k: int) -> List[Fraction]:
    """Multiply by ``(hbar - r)**k``."""
    for _ in range(k):
        out = [Fraction(0)] * (len(a) + 1)
        for i, x in enumerate(a):
            out[i + 1] += x
            out[i] -= r * x
        a = _trim(out)
    return a


def _peval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _divide_root(a: List[Fraction], r: Fraction) -> List[Fraction]:
    """Synthetic division by ``hbar - r`` (caller guarantees ``a(r) == 0``)."""
    n = len(a) - 1
    out = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = a[i] + acc * r
        out[i - 1] = acc
    return _trim(out)


class RationalFunction:
    """``num(hbar) / prod (hbar - r)**e``; numerator coefficients low to high."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[object] = (), den: Mapping[object, int] | None = None):
        self.num = _trim([Fraction(c) for c in num])
        self.den: Dict[Fraction, int] = {}
        for r, e in (den or {}).items():
            if e < 0:
                raise ValueError("denominator multiplicities must be nonnegative")
            if e:
                r = Fraction(r)
                self.den[r] = self.den.get(r, 0) + e
        self._normalize()

    def _normalize(self):
        if not self.num:
            self.den = {}
            return
        for r in list(self.den):
            e = self.den[r]
            while e and not _peval(self.num, r):
                self.num = _divide_root(self.num, r)
                e -= 1
            if e:
                self.den[r] = e
            else:
                del self.den[r]

    @classmethod
    def _raw(cls, num, den) -> "RationalFunction":
        x = cls.__new__(cls)
        x.num = num
        x.den = den
        return x

    # construction ------------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls([c])

    @classmethod
    def hbar(cls, power: int = 1) -> "RationalFunction":
        if power >= 0:
            return cls([0] * power + [1])
        return cls([1], {0: -power})

    @classmethod
    def linear(cls, a, b) -> "RationalFunction":
        """The polynomial ``a + b*hbar``."""
        return cls([a, b])

    @classmethod
    def inverse_linear(cls, a, b) -> "RationalFunction":
        """``1/(a + b*hbar)`` for ``b != 0``."""
        a, b = Fraction(a), Fraction(b)
        if not b:
            if not a:
                raise NonInvertibleError("1/0")
            return cls([1 / a])
        return cls([1 / b], {-a / b: 1})

    @classmethod
    def from_laurent(cls, coeffs: Mapping[int, object]) -> "RationalFunction":
        """Build ``sum c_j hbar**j`` from a finite dict."""
        coeffs = {j: Fraction(c) for j, c in coeffs.items() if c}
        if not coeffs:
            return cls()
        low = min(min(coeffs), 0)
        num = [Fraction(0)] * (max(coeffs) - low + 1)
        for j, c in coeffs.items():
            num[j - low] = c
        return cls(num, {0: -low} if low < 0 else None)

    # coercion -----------------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Scalar):
            return RationalFunction.constant(other)
        return NotImplemented

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        den = dict(self.den)
        for r, e in other.den.items():
            if e > den.get(r, 0):
                den[r] = e
        a = list(self.num)
        for r, e in den.items():
            a = _times_root_factor(a, r, e - self.den.get(r, 0))
        b = list(other.num)
        for r, e in den.items():
            b = _times_root_factor(b, r, e - other.den.get(r, 0))
        out = RationalFunction._raw(_padd(a, b), den)
        out._normalize()
        return out

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw([-c for c in self.num], dict(self.den))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if not other:
                return RationalFunction()
            return RationalFunction._raw([c * other for c in self.num], dict(self.den))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RationalFunction()
        den = dict(self.den)
        for r, e in other.den.items():
            den[r] = den.get(r, 0) + e
        out = RationalFunction._raw(_pmul(self.num, other.num), den)
        out._normalize()
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            if not other:
                raise NonInvertibleError("division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = RationalFunction.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), frozenset(self.den.items())))

    def __bool__(self):
        return bool(self.num)

    # analysis ------------------------------------------------------------------
    def poles(self) -> Dict[Fraction, int]:
        return dict(self.den)

    def is_polynomial(self) -> bool:
        return not self.den

    def poles_only_at_zero(self) -> bool:
        return set(self.den) <= {0}

    def __call__(self, x) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        d = Fraction(1)
        for r, e in self.den.items():
            d *= (x - r) ** e
        if not d:
            raise NonInvertibleError(f"pole at hbar = {x}")
        return _peval(self.num, x) / d

    def flip_hbar(self) -> "RationalFunction":
        """Substitute ``hbar -> -hbar``."""
        num = [(-c if i % 2 else c) for i, c in enumerate(self.num)]
        sign = -1 if sum(self.den.values()) % 2 else 1
        return RationalFunction._raw([c * sign for c in num], {-r: e for r, e in self.den.items()})

    def degree(self) -> int:
        """Degree at infinity: ``deg num - deg den`` (``-inf`` style -10**9 for zero)."""
        if not self.num:
            return -(10**9)
        return len(self.num) - 1 - sum(self.den.values())

    def expand_at_infinity(self, lowest: int) -> Dict[int, Fraction]:
        """Laurent coefficients ``{j: c_j}`` of ``hbar**j`` for ``degree() >= j >= lowest``."""
        if not self.num:
            return {}
        top = self.degree()
        if top < lowest:
            return {}
        n = top - lowest + 1
        # den = hbar^D prod (1 - r u)^e with u = 1/hbar
        series = [Fraction(0)] * n
        series[0] = Fraction(1)
        for r, e in self.den.items():
            if not r:
                continue
            for _ in range(e):
                # multiply by 1/(1 - r u) = sum r^k u^k
                for i in range(1, n):
                    series[i] += r * series[i - 1]
        # num(hbar) = hbar^deg * sum num[deg - i] u^i
        deg = len(self.num) - 1
        numu = [self.num[deg - i] if deg - i >= 0 else Fraction(0) for i in range(n)]
        out: Dict[int, Fraction] = {}
        for k in range(n):
            c = sum((numu[i] * series[k - i] for i in range(k + 1)), Fraction(0))
            if c:
                out[top - k] = c
        return out

    def laurent(self) -> Dict[int, Fraction]:
        """Exact Laurent coefficients; only for functions with poles at 0 at most."""
        if not self.poles_only_at_zero():
            raise ValueError("not a Laurent polynomial in hbar")
        k = self.den.get(Fraction(0), 0)
        return {i - k: c for i, c in enumerate(self.num) if c}

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if not self.num:
            return "0"
        terms = []
        for i, c in enumerate(self.num):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*h^{i}" if i > 1 else f"{c}*h")
        num = " + ".join(reversed(terms))
        if not self.den:
            return num
        dens = []
        for r in sorted(self.den):
            e = self.den[r]
            base = "h" if r == 0 else f"(h - {r})" if r > 0 else f"(h + {-r})"
            dens.append(base + (f"^{e}" if e > 1 else ""))
        return f"({num})/({'*'.join(dens)})"

    def to_json(self) -> dict:
        return {
            "num": [f"{c.numerator}/{c.denominator}" for c in self.num],
            "den": [[f"{r.numerator}/{r.denominator}", e] for r, e in sorted(self.den.items())],
        }
