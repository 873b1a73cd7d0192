"""Torus fixed points, rays and characters of the supported homogeneous spaces.

Three families are supported:

* products of projective spaces ``P^{n_1} x ... x P^{n_k}``; every factor
  carries its own torus parameters;
* Grassmannians ``Gr(k, n)`` and complete type-A flag manifolds ``F(n)``.
  Both are partial flag manifolds of ``C^n`` and share one code path
  parameterized by block sizes: ``(k, n-k)`` and ``(1, ..., 1)``.

Sign conventions: ``det S^*`` (and every ``det S_r^*`` on a flag manifold)
restricts to ``-(sum of the torus parameters spanning S_r)`` at a fixed point,
the tangent character of the ray that moves ``e_a`` out of an earlier block and
``e_b`` into it is ``eps_b - eps_a``.  With these choices
``(p_i)_w - (p_i)_v = -<p_i, beta_{v,w}> kappa_{v,w}`` holds on every ray.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from .errors import DegenerateParameterError, DescriptorError

FixedPoint = Tuple
Degree = Tuple[int, ...]

_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
]


def default_eps(count: int, seed: int = 0) -> Tuple[Fraction, ...]:
    """Seeded torus parameters: the i-th prime plus a jitter in ``(0, 1)``.

    The values are strictly increasing, hence pairwise distinct.
    """
    if count > len(_PRIMES):
        raise DescriptorError(f"at most {len(_PRIMES)} torus parameters are supported")
    rng = random.Random(seed)
    return tuple(p + Fraction(rng.randrange(1, 97), 97) for p in _PRIMES[:count])


@dataclass(frozen=True)
class Character:
    """Integer combination ``sum c_j eps_j`` together with the numeric ``eps``."""

    coeffs: Tuple[Fraction, ...]
    eps: Tuple[Fraction, ...] = field(repr=False)

    def value(self) -> Fraction:
        return sum((c * e for c, e in zip(self.coeffs, self.eps)), Fraction(0))

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.eps)

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __neg__(self) -> "Character":
        return Character(tuple(-a for a in self.coeffs), self.eps)

    def scale(self, c) -> "Character":
        c = Fraction(c)
        return Character(tuple(a * c for a in self.coeffs), self.eps)

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}e{j + 1}")
        s = "".join(parts).lstrip("+")
        return s or "0"


@dataclass(frozen=True)
class Ray:
    v: FixedPoint
    w: FixedPoint
    kappa: Character
    beta: Degree


class SpaceSpec:
    """A homogeneous space together with numeric torus parameters."""

    def __init__(self, kind: str, params: Tuple[int, ...], eps: Sequence | None = None, seed: int = 0):
        self.kind = kind
        self.params = tuple(int(x) for x in params)
        self._validate()
        count = self.n_eps
        eps = default_eps(count, seed) if eps is None else tuple(Fraction(e) for e in eps)
        if len(eps) != count:
            raise DescriptorError(f"{self.name} needs {count} torus parameters, got {len(eps)}")
        self.eps: Tuple[Fraction, ...] = tuple(eps)
        self._check_eps()
        self._ray_cache: Dict[FixedPoint, List[Ray]] = {}

    # constructors ------------------------------------------------------------
    @classmethod
    def projective_product(cls, dims: Sequence[int], eps=None, seed: int = 0) -> "SpaceSpec":
        return cls("projective_product", tuple(dims), eps, seed)

    @classmethod
    def projective(cls, n: int, eps=None, seed: int = 0) -> "SpaceSpec":
        return cls.projective_product((n,), eps, seed)

    @classmethod
    def grassmannian(cls, k: int, n: int, eps=None, seed: int = 0) -> "SpaceSpec":
        return cls("grassmannian", (k, n), eps, seed)

    @classmethod
    def flag_a(cls, n: int, eps=None, seed: int = 0) -> "SpaceSpec":
        return cls("flag_a", (n,), eps, seed)

    def with_eps(self, eps: Sequence) -> "SpaceSpec":
        return SpaceSpec(self.kind, self.params, eps)

    def scaled(self, t) -> "SpaceSpec":
        """Same space with every torus parameter multiplied by ``t``."""
        t = Fraction(t)
        return self.with_eps([e * t for e in self.eps])

    # validation ----------------------------------------------------------------
    def _validate(self):
        if self.kind == "projective_product":
            if not self.params or min(self.params) < 1:
                raise DescriptorError("projective factors need dimension >= 1")
        elif self.kind == "grassmannian":
            if len(self.params) != 2 or not 1 <= self.params[0] < self.params[1]:
                raise DescriptorError("Grassmannian needs 1 <= k < n")
        elif self.kind == "flag_a":
            if len(self.params) != 1 or self.params[0] < 2:
                raise DescriptorError("complete flag manifold needs n >= 2")
        else:
            raise DescriptorError(f"unknown space kind {self.kind!r}")

    def _check_eps(self):
        for block in self._eps_groups():
            vals = [self.eps[j] for j in block]
            if len(set(vals)) != len(vals):
                raise DegenerateParameterError("torus parameters must be pairwise distinct")
            if any(not v for v in vals):
                raise DegenerateParameterError("torus parameters must be nonzero")

    def _eps_groups(self) -> List[List[int]]:
        if self.kind == "projective_product":
            out, start = [], 0
            for n in self.params:
                out.append(list(range(start, start + n + 1)))
                start += n + 1
            return out
        return [list(range(self.n_eps))]

    # basic data ------------------------------------------------------------------
    @property
    def name(self) -> str:
        if self.kind == "projective_product":
            return " x ".join(f"P^{n}" for n in self.params)
        if self.kind == "grassmannian":
            return f"Gr({self.params[0]},{self.params[1]})"
        return f"F({self.params[0]})"

    @property
    def n_eps(self) -> int:
        if self.kind == "projective_product":
            return sum(n + 1 for n in self.params)
        return self.params[-1] if self.kind == "grassmannian" else self.params[0]

    @property
    def blocks(self) -> Tuple[int, ...]:
        """Block sizes of the partial flag (type-A spaces only)."""
        if self.kind == "grassmannian":
            k, n = self.params
            return (k, n - k)
        if self.kind == "flag_a":
            return (1,) * self.params[0]
        raise DescriptorError("block structure only exists for type-A flag manifolds")

    @property
    def k(self) -> int:
        """Number of Novikov variables (rank of the Picard group)."""
        if self.kind == "projective_product":
            return len(self.params)
        return len(self.blocks) - 1

    @property
    def dim(self) -> int:
        if self.kind == "projective_product":
            return sum(self.params)
        b = self.blocks
        return sum(b[s] * b[t] for s in range(len(b)) for t in range(s + 1, len(b)))

    @property
    def fano(self) -> Tuple[int, ...]:
        """Pairings of ``c_1(TX)`` with the degree basis."""
        if self.kind == "projective_product":
            return tuple(n + 1 for n in self.params)
        if self.kind == "grassmannian":
            return (self.params[1],)
        return (2,) * (self.params[0] - 1)

    def _char(self, coeffs: Dict[int, Fraction]) -> Character:
        vec = [Fraction(0)] * self.n_eps
        for j, c in coeffs.items():
            vec[j] += c
        return Character(tuple(vec), self.eps)

    # fixed points -------------------------------------------------------------------
    @cached_property
    def _fixed_points(self) -> List[FixedPoint]:
        if self.kind == "projective_product":
            from itertools import product

            return list(product(*(range(n + 1) for n in self.params)))
        if self.kind == "grassmannian":
            k, n = self.params
            return [tuple(c) for c in combinations(range(n), k)]
        return list(permutations(range(self.params[0])))

    def fixed_points(self) -> List[FixedPoint]:
        return list(self._fixed_points)

    def _block_of(self, v: FixedPoint) -> List[List[int]]:
        """Blocks of torus indices at a type-A fixed point, in flag order."""
        if self.kind == "grassmannian":
            inside = list(v)
            return [inside, [j for j in range(self.params[1]) if j not in inside]]
        return [[j] for j in v]

    def _from_blocks(self, blocks: List[List[int]]) -> FixedPoint:
        if self.kind == "grassmannian":
            return tuple(sorted(blocks[0]))
        return tuple(b[0] for b in blocks)

    def _offset(self, i: int) -> int:
        return sum(n + 1 for n in self.params[:i])

    # rays --------------------------------------------------------------------------
    def rays(self, v: FixedPoint) -> List[Ray]:
        v = tuple(v)
        if v not in self._ray_cache:
            self._ray_cache[v] = self._compute_rays(v)
        return list(self._ray_cache[v])

    def _compute_rays(self, v: FixedPoint) -> List[Ray]:
        out: List[Ray] = []
        if self.kind == "projective_product":
            for i, n in enumerate(self.params):
                off = self._offset(i)
                for j in range(n + 1):
                    if j == v[i]:
                        continue
                    w = list(v)
                    w[i] = j
                    kappa = self._char({off + j: Fraction(1), off + v[i]: Fraction(-1)})
                    beta = tuple(1 if t == i else 0 for t in range(self.k))
                    out.append(Ray(tuple(v), tuple(w), kappa, beta))
            return out
        blocks = self._block_of(v)
        nb = len(blocks)
        for s in range(nb):
            for t in range(s + 1, nb):
                for a in blocks[s]:
                    for b in blocks[t]:
                        nbk = [list(x) for x in blocks]
                        nbk[s][nbk[s].index(a)] = b
                        nbk[t][nbk[t].index(b)] = a
                        w = self._from_blocks(nbk)
                        kappa = self._char({b: Fraction(1), a: Fraction(-1)})
                        # <p_r, beta> = 1 exactly for the partial sums S_r that separate s from t
                        beta = tuple(1 if s < r <= t else 0 for r in range(1, nb))
                        out.append(Ray(tuple(v), w, kappa, beta))
        return out

    def tangent_weights(self, v: FixedPoint) -> List[Character]:
        return [r.kappa for r in self.rays(v)]

    def euler_tangent(self, v: FixedPoint) -> Fraction:
        """``i_v^*(phi_v)``: product of the tangent weights at ``v``."""
        prod = Fraction(1)
        for c in self.tangent_weights(v):
            val = c.value()
            if not val:
                raise DegenerateParameterError(f"tangent weight {c} vanishes at {v}")
            prod *= val
        return prod

    # divisors ------------------------------------------------------------------------
    def restrict_divisor(self, i: int, v: FixedPoint) -> Character:
        """Restriction of the basis divisor ``p_i`` (0-based) to the fixed point ``v``."""
        if not 0 <= i < self.k:
            raise DescriptorError(f"divisor index {i} out of range")
        if self.kind == "projective_product":
            return self._char({self._offset(i) + v[i]: Fraction(-1)})
        blocks = self._block_of(v)
        return self._char({j: Fraction(-1) for b in blocks[: i + 1] for j in b})

    def restrict_line_bundle(self, l: Sequence[int], v: FixedPoint) -> Character:
        """Restriction of ``c_1(L)`` for ``L`` with pairings ``l`` against the degree basis."""
        if len(l) != self.k:
            raise DescriptorError(f"line bundle needs {self.k} degrees")
        acc = self._char({})
        for i, a in enumerate(l):
            if a:
                acc = acc + self.restrict_divisor(i, v).scale(a)
        return acc

    def weight_vectors_distinct(self) -> bool:
        """Whether the vectors ``((p_i)_v)_i`` differ between fixed points."""
        seen = {tuple(self.restrict_divisor(i, v).value() for i in range(self.k)) for v in self._fixed_points}
        return len(seen) == len(self._fixed_points)

    def expected_fixed_point_count(self) -> int:
        if self.kind == "projective_product":
            out = 1
            for n in self.params:
                out *= n + 1
            return out
        if self.kind == "grassmannian":
            return comb(self.params[1], self.params[0])
        return factorial(self.params[0])

    def __repr__(self):
        return f"SpaceSpec({self.name}, eps={[str(e) for e in self.eps]})"


def fixed_points(spec: SpaceSpec) -> List[FixedPoint]:
    return spec.fixed_points()


def tangent_weights(spec: SpaceSpec, v: FixedPoint) -> List[Character]:
    return spec.tangent_weights(v)


def rays(spec: SpaceSpec, v: FixedPoint) -> List[Ray]:
    return spec.rays(v)


def restrict_divisor(spec: SpaceSpec, i: int, v: FixedPoint) -> Character:
    return spec.restrict_divisor(i, v)


def pairing(l: Sequence[int], beta: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(l, beta))


def localize_integrate(spec: SpaceSpec, values: Dict[FixedPoint, object]):
    """``sum_v A_v / e_v`` for per-point values (rationals or rational functions of hbar)."""
    total = Fraction(0)
    for v in spec.fixed_points():
        total = total + values[v] * (1 / spec.euler_tangent(v))
    return total


def characters_V(spec: SpaceSpec, ray: Ray, m: int, l: Sequence[int]) -> List[Fraction]:
    """Weights of ``H^0(P^1, f^*L)`` for the ``m``-fold cover of ``ray``."""
    if m < 1:
        raise ValueError("cover degree must be >= 1")
    n = pairing(l, ray.beta)
    if n < 0:
        raise DescriptorError("line bundle is not convex along this ray")
    lam = spec.restrict_line_bundle(l, ray.v).value()
    kap = ray.kappa.value()
    return [lam - Fraction(a, m) * kap for a in range(m * n + 1)]


def _root_pairing(delta: Ray, kappa: Ray) -> int:
    """``(delta, kappa^vee)``; every tangent character here is a root of norm 2."""
    return int(sum(a * b for a, b in zip(delta.kappa.coeffs, kappa.kappa.coeffs)))


def characters_N(spec: SpaceSpec, ray: Ray, m: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Weights of ``H^0`` and ``H^1`` of ``f^*TX`` minus the trivial weight, ``m``-fold cover.

    A root with pairing ``-1`` against the ray contributes nothing to ``H^0``
    and ``m - 1`` weights to ``H^1``.
    """
    if m < 1:
        raise ValueError("cover degree must be >= 1")
    kap = ray.kappa.value()
    h0: List[Fraction] = []
    h1: List[Fraction] = []
    for delta in spec.rays(ray.v):
        dv = delta.kappa.value()
        if delta.w == ray.w:
            h0.extend(kap - Fraction(a, m) * kap for a in range(2 * m + 1) if a != m)
            continue
        p = _root_pairing(delta, ray)
        if p >= 0:
            h0.extend(dv - Fraction(a, m) * kap for a in range(m * p + 1))
        else:
            h1.extend(dv + Fraction(a, m) * kap for a in range(1, -m * p))
    return h0, h1


def euler_V(spec: SpaceSpec, bundle: Sequence[Sequence[int]], v: FixedPoint) -> Fraction:
    prod = Fraction(1)
    for l in bundle:
        prod *= spec.restrict_line_bundle(l, v).value()
    return prod


def recursion_coefficient(
    spec: SpaceSpec, ray: Ray, m: int, bundle: Sequence[Sequence[int]] = ()
) -> Fraction:
    """The almost-recursion coefficient ``C^V_{v,w,m}``.

    ``C^X = (-kappa/m) e_v / Euler(N)`` and ``C^V = C^X E(V_{v,w,m}) / E(V)_v``.
    """
    kap = ray.kappa.value()
    h0, h1 = characters_N(spec, ray, m)
    denom = Fraction(1)
    for c in h0:
        if not c:
            raise DegenerateParameterError(f"normal weight vanishes on ray {ray.v}->{ray.w}, m={m}")
        denom *= c
    value = (-kap / m) * spec.euler_tangent(ray.v) / denom
    for c in h1:
        value *= c
    for l in bundle:
        ev = spec.restrict_line_bundle(l, ray.v).value()
        if not ev:
            raise DegenerateParameterError(f"c_1(L)_v vanishes at {ray.v}")
        for c in characters_V(spec, ray, m, l):
            value *= c
        value /= ev
    return value


def localized_class(spec: SpaceSpec, exps: Sequence[int]) -> Dict[FixedPoint, Fraction]:
    """Restrictions of the monomial ``prod p_i^{e_i}`` to all fixed points."""
    out = {}
    for v in spec.fixed_points():
        val = Fraction(1)
        for i, e in enumerate(exps):
            if e:
                val *= spec.restrict_divisor(i, v).value() ** e
        out[v] = val
    return out



class LocalizedSeries:
    """Fixed-point restrictions ``Z_v(q, hbar)`` of an equivariant series.

    ``values[v]`` is a :class:`NovikovSeries` whose coefficients are
    :class:`RationalFunction` objects in ``hbar``.
    """

    def __init__(self, spec: SpaceSpec, order: int, values: Dict[FixedPoint, "NovikovSeries"]):
        self.spec = spec
        self.order = order
        self.values = values
        self._memo: Dict[Tuple[FixedPoint, Degree, Fraction], Fraction] = {}

    def at(self, v: FixedPoint, d: Sequence[int]):
        return self.values[tuple(v)][tuple(d)]

    def evaluate(self, v: FixedPoint, d: Sequence[int], x) -> Fraction:
        """``Z_{v,d}(x)``; raises :class:`NonInvertibleError` at a pole."""
        key = (tuple(v), tuple(d), Fraction(x))
        if key not in self._memo:
            c = self.at(v, d)
            self._memo[key] = c(x) if c else Fraction(0)
        return self._memo[key]

    def map(self, fn) -> "LocalizedSeries":
        """Apply ``fn(v, series)`` at every fixed point."""
        return LocalizedSeries(self.spec, self.order, {v: fn(v, z) for v, z in self.values.items()})

    def with_coefficient(self, v: FixedPoint, d: Sequence[int], value) -> "LocalizedSeries":
        vals = dict(self.values)
        coeffs = dict(vals[tuple(v)].coeffs)
        coeffs[tuple(d)] = value
        vals[tuple(v)] = type(vals[tuple(v)])(self.spec.k, self.order, coeffs)
        return LocalizedSeries(self.spec, self.order, vals)
