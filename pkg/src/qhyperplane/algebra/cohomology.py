"""Cohomology of products of projective spaces and Laurent polynomials in hbar.

The ring of ``P^{n_1} x ... x P^{n_k}`` is ``Q[p_1..p_k]/(p_i^{n_i+1})``; it is
described by the tuple ``dims = (n_1, ..., n_k)``.  A :class:`CohClass` is a
sparse map from exponent vectors to rationals; an :class:`HbarLaurent` is a
sparse map from ``(hbar exponent, exponent vector)`` to rationals.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, Iterator, Mapping, Tuple

from ..errors import DescriptorError, NonInvertibleError

Exps = Tuple[int, ...]
Scalar = (int, Fraction)


def monomials(dims: Tuple[int, ...]) -> Iterator[Exps]:
    """All exponent vectors of the monomial basis, in lexicographic order."""
    return iproduct(*(range(n + 1) for n in dims))


class CohClass:
    __slots__ = ("dims", "terms")

    def __init__(self, dims, terms: Mapping[Exps, object] | None = None):
        self.dims = tuple(dims)
        clean: Dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.dims):
                raise DescriptorError(f"exponent {e} does not fit ring {self.dims}")
            if any(a > n for a, n in zip(e, self.dims)):
                continue
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, dims, terms):
        x = cls.__new__(cls)
        x.dims = dims
        x.terms = terms
        return x

    @classmethod
    def scalar(cls, dims, c) -> "CohClass":
        return cls(dims, {(0,) * len(dims): c})

    @classmethod
    def generator(cls, dims, i: int) -> "CohClass":
        """The hyperplane class ``p_i`` of the ``i``-th factor (0-based)."""
        e = [0] * len(dims)
        e[i] = 1
        return cls(dims, {tuple(e): 1})

    def _coerce(self, other):
        if isinstance(other, CohClass):
            if other.dims != self.dims:
                raise DescriptorError(f"ring {self.dims} vs {other.dims}")
            return other
        if isinstance(other, Scalar):
            return CohClass.scalar(self.dims, other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, HbarLaurent):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return CohClass._raw(self.dims, out)

    __radd__ = __add__

    def __neg__(self):
        return CohClass._raw(self.dims, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if not other:
                return CohClass(self.dims)
            return CohClass._raw(self.dims, {e: c * other for e, c in self.terms.items()})
        if isinstance(other, HbarLaurent):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        dims = self.dims
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(a > n for a, n in zip(e, dims)):
                    continue
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return CohClass._raw(dims, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = CohClass.scalar(self.dims, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, HbarLaurent):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.dims, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.dims), Fraction(0))

    def is_scalar(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree_parts(self) -> Dict[int, "CohClass"]:
        """Split by cohomological (complex) degree ``sum(e)``."""
        parts: Dict[int, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {k: CohClass._raw(self.dims, v) for k, v in parts.items()}

    def __repr__(self):
        return f"CohClass({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                (f"p{i + 1}" if len(self.dims) > 1 else "p") + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(e)
                if a
            )
            out.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(out)


def integrate_X(a: CohClass) -> Fraction:
    """Integral over the product of projective spaces: coefficient of the top monomial."""
    return a.terms.get(a.dims, Fraction(0))


class HbarLaurent:
    """Finite Laurent polynomial in hbar with :class:`CohClass` coefficients."""

    __slots__ = ("dims", "terms")

    def __init__(self, dims, terms: Mapping[Tuple[int, Exps], object] | None = None):
        self.dims = tuple(dims)
        clean: Dict[Tuple[int, Exps], Fraction] = {}
        for (j, e), c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.dims):
                raise DescriptorError(f"exponent {e} does not fit ring {self.dims}")
            if any(a > n for a, n in zip(e, self.dims)):
                continue
            c = Fraction(c)
            if c:
                key = (int(j), e)
                clean[key] = clean.get(key, 0) + c
        self.terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def _raw(cls, dims, terms):
        x = cls.__new__(cls)
        x.dims = dims
        x.terms = terms
        return x

    @classmethod
    def from_coh(cls, a: CohClass, hbar_power: int = 0) -> "HbarLaurent":
        return cls._raw(a.dims, {(hbar_power, e): c for e, c in a.terms.items()})

    @classmethod
    def scalar(cls, dims, c, hbar_power: int = 0) -> "HbarLaurent":
        return cls(dims, {(hbar_power, (0,) * len(dims)): c})

    @classmethod
    def hbar(cls, dims, power: int = 1) -> "HbarLaurent":
        return cls.scalar(dims, 1, power)

    @classmethod
    def linear(cls, c: CohClass, s) -> "HbarLaurent":
        """The element ``c + s*hbar``."""
        return cls.from_coh(c) + cls.scalar(c.dims, s, 1)

    def _coerce(self, other):
        if isinstance(other, HbarLaurent):
            if other.dims != self.dims:
                raise DescriptorError(f"ring {self.dims} vs {other.dims}")
            return other
        if isinstance(other, CohClass):
            if other.dims != self.dims:
                raise DescriptorError(f"ring {self.dims} vs {other.dims}")
            return HbarLaurent.from_coh(other)
        if isinstance(other, Scalar):
            return HbarLaurent.scalar(self.dims, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return HbarLaurent._raw(self.dims, out)

    __radd__ = __add__

    def __neg__(self):
        return HbarLaurent._raw(self.dims, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if not other:
                return HbarLaurent(self.dims)
            return HbarLaurent._raw(self.dims, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        dims = self.dims
        out: Dict[Tuple[int, Exps], Fraction] = {}
        for (j1, e1), c1 in self.terms.items():
            for (j2, e2), c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(a > n for a, n in zip(e, dims)):
                    continue
                k = (j1 + j2, e)
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return HbarLaurent._raw(dims, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = HbarLaurent.scalar(self.dims, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.dims, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # structure ----------------------------------------------------------------
    def hbar_exponents(self):
        return sorted({j for j, _ in self.terms})

    def coefficient(self, j: int) -> CohClass:
        """The :class:`CohClass` multiplying ``hbar**j``."""
        return CohClass._raw(self.dims, {e: c for (jj, e), c in self.terms.items() if jj == j})

    def coefficients(self) -> Dict[int, CohClass]:
        return {j: self.coefficient(j) for j in self.hbar_exponents()}

    def flip_hbar(self) -> "HbarLaurent":
        """Substitute ``hbar -> -hbar``."""
        return HbarLaurent._raw(
            self.dims, {(j, e): (-c if j % 2 else c) for (j, e), c in self.terms.items()}
        )

    def integrate(self) -> Dict[int, Fraction]:
        """Integrate every hbar coefficient over X: ``{j: integral}``."""
        out: Dict[int, Fraction] = {}
        for (j, e), c in self.terms.items():
            if e == self.dims:
                out[j] = out.get(j, 0) + c
        return {j: c for j, c in out.items() if c}

    def __repr__(self):
        return f"HbarLaurent({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for j in sorted(self.hbar_exponents(), reverse=True):
            parts.append(f"[{self.coefficient(j)}]*hbar^{j}")
        return " + ".join(parts)


def invert_linear_factor(c: CohClass, m) -> HbarLaurent:
    """Inverse of ``c + m*hbar`` for nilpotent ``c`` and a nonzero rational ``m``.

    Expands ``(m hbar)^{-1} sum_j (-c/(m hbar))^j``; the sum stops because
    ``c`` is nilpotent.
    """
    m = Fraction(m)
    if not m:
        raise NonInvertibleError("c + 0*hbar is not invertible")
    if c.constant_term():
        raise NonInvertibleError("the cohomology part must be nilpotent")
    dims = c.dims
    result = HbarLaurent(dims)
    power = CohClass.scalar(dims, 1)
    j = 0
    while power:
        result = result + HbarLaurent.from_coh(power * (Fraction((-1) ** j) / m ** (j + 1)), -(j + 1))
        power = power * c
        j += 1
    return result
