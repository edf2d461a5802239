"""
Free graded-commutative algebras over Q.

A monomial is a tuple of ``(generator index, exponent)`` pairs sorted by
index; the empty tuple is the unit.  An `Element` maps monomials to nonzero
rational coefficients, with every Koszul sign already absorbed, so two equal
elements always have equal term dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[Tuple[int, int], ...]
UNIT: Monomial = ()


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    index: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("generator %r must have positive degree" % self.name)

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class AlgebraMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def _coerce(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    return _coerce(Fraction(c))


def merge_sign(a: Monomial, b: Monomial, odd: Sequence[bool]) -> Tuple[int, Optional[Monomial]]:
    """
    Product of two monomials in canonical order.

    The sign counts inversions between odd generators of ``b`` and odd
    generators of ``a`` with larger index, which is what a merge of the two
    sorted factor lists passes over.  Returns ``(0, None)`` when an odd
    generator occurs in both factors.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    odd_left_in_a = sum(1 for g, _ in a if odd[g])
    inversions = 0
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            out.append(a[i])
            if odd[ga]:
                odd_left_in_a -= 1
            i += 1
        elif gb < ga:
            out.append(b[j])
            if odd[gb]:
                inversions += odd_left_in_a
            j += 1
        else:
            if odd[ga]:
                return 0, None
            out.append((ga, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(out)


class GradedAlgebra:
    """The free graded-commutative algebra on a finite list of generators."""

    def __init__(self, generators: Iterable[Tuple[str, int]]):
        gens = []
        seen = set()
        for i, (name, deg) in enumerate(generators):
            if name in seen:
                raise ValueError("duplicate generator name %r" % name)
            seen.add(name)
            gens.append(Generator(name, int(deg), i))
        self.generators: Tuple[Generator, ...] = tuple(gens)
        self.index = {g.name: g.index for g in gens}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = tuple(g.odd for g in gens)
        self._key = tuple((g.name, g.degree) for g in gens)
        self._basis_cache: Dict[int, Tuple[Monomial, ...]] = {}
        self._position_cache: Dict[int, Dict[Monomial, int]] = {}

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "GradedAlgebra(%s)" % ", ".join("%s:%d" % k for k in self._key)

    def gen(self, name: str) -> "Element":
        return Element(self, {((self.index[name], 1),): 1})

    def gens(self) -> List["Element"]:
        return [Element(self, {((g.index, 1),): 1}) for g in self.generators]

    def one(self) -> "Element":
        return Element(self, {UNIT: 1})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c) -> "Element":
        return Element(self, {UNIT: c})

    def element(self, terms: Mapping[Monomial, object]) -> "Element":
        return Element(self, terms)

    # -- monomials ---------------------------------------------------------

    def mono_degree(self, m: Monomial) -> int:
        degs = self.degrees
        return sum(degs[g] * e for g, e in m)

    def mono_length(self, m: Monomial) -> int:
        return sum(e for _, e in m)

    def mono_from_names(self, powers: Mapping[str, int]) -> Monomial:
        items = []
        for name, e in powers.items():
            g = self.index[name]
            if e < 0 or (self.odd[g] and e > 1):
                raise ValueError("invalid exponent %d for %s" % (e, name))
            if e:
                items.append((g, e))
        return tuple(sorted(items))

    def mono_str(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for g, e in m:
            name = self.generators[g].name
            parts.append(name if e == 1 else "%s^%d" % (name, e))
        return "*".join(parts)

    @staticmethod
    def mono_key(m: Monomial, n: int) -> tuple:
        # larger exponent on an earlier generator comes first
        dense = [0] * n
        for g, e in m:
            dense[g] = e
        return tuple(-e for e in dense)

    def monomials_of_degree(self, k: int) -> Tuple[Monomial, ...]:
        """Canonical monomial basis of the degree-``k`` piece."""
        if k < 0:
            return ()
        cached = self._basis_cache.get(k)
        if cached is not None:
            return cached
        degs, odd = self.degrees, self.odd
        n = len(degs)
        out: List[Monomial] = []

        def rec(i, remaining, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            if i == n:
                return
            d = degs[i]
            rec(i + 1, remaining, acc)
            emax = 1 if odd[i] else remaining // d
            for e in range(1, emax + 1):
                if d * e > remaining:
                    break
                acc.append((i, e))
                rec(i + 1, remaining - d * e, acc)
                acc.pop()

        rec(0, k, [])
        out.sort(key=lambda m: self.mono_key(m, n))
        basis = tuple(out)
        self._basis_cache[k] = basis
        return basis

    def position(self, k: int) -> Dict[Monomial, int]:
        pos = self._position_cache.get(k)
        if pos is None:
            pos = {m: i for i, m in enumerate(self.monomials_of_degree(k))}
            self._position_cache[k] = pos
        return pos

    def dimension(self, k: int) -> int:
        return len(self.monomials_of_degree(k))

    # -- raw term arithmetic (dict level, used in hot loops) ---------------

    def mul_terms(self, a: Mapping[Monomial, object], b: Mapping[Monomial, object]) -> Dict[Monomial, object]:
        odd = self.odd
        out: Dict[Monomial, object] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                s, m = merge_sign(ma, mb, odd)
                if not s:
                    continue
                x = out.get(m, 0) + s * ca * cb
                if x:
                    out[m] = x
                else:
                    del out[m]
        return out

    def vector(self, e: "Element", k: int) -> Dict[int, object]:
        """Sparse coordinates of a degree-``k`` element in the canonical basis."""
        pos = self.position(k)
        out = {}
        for m, c in e.terms.items():
            i = pos.get(m)
            if i is None:
                raise NotHomogeneous("term %s is not in degree %d" % (self.mono_str(m), k))
            out[i] = c
        return out

    def from_vector(self, v: Mapping[int, object], k: int) -> "Element":
        basis = self.monomials_of_degree(k)
        return Element(self, {basis[i]: c for i, c in v.items()})


class Element:
    """A Q-linear combination of normalized monomials."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, object]):
        self.algebra = algebra
        self.terms = {m: _coerce(c) for m, c in terms.items() if c != 0}
        self._hash = None

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {self.algebra.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element; None for zero (it has every degree)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise NotHomogeneous("element %s is not homogeneous" % self)
        return degs.pop()

    def word_lengths(self) -> set:
        return {self.algebra.mono_length(m) for m in self.terms}

    def part(self, length: int) -> "Element":
        """The word-length ``length`` component."""
        a = self.algebra
        return Element(a, {m: c for m, c in self.terms.items() if a.mono_length(m) == length})

    def generators_used(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def coefficient(self, m: Monomial):
        return self.terms.get(m, 0)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Element"):
        if self.algebra != other.algebra:
            raise AlgebraMismatch("elements live in different algebras")

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            x = out.get(m, 0) + c
            if x:
                out[m] = x
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.algebra, self.algebra.mul_terms(self.terms, other.terms))
        c = _coerce(other)
        return Element(self.algebra, {m: c * x for m, x in self.terms.items()})

    def __rmul__(self, other):
        c = _coerce(other)
        return Element(self.algebra, {m: c * x for m, x in self.terms.items()})

    def __truediv__(self, other):
        c = Fraction(other)
        return Element(self.algebra, {m: x / c for m, x in self.terms.items()})

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- display -----------------------------------------------------------

    def sorted_terms(self):
        a = self.algebra
        n = len(a.generators)
        return sorted(self.terms.items(), key=lambda t: (a.mono_degree(t[0]), a.mono_key(t[0], n)))

    def __str__(self):
        if not self.terms:
            return "0"
        a = self.algebra
        parts = []
        for m, c in self.sorted_terms():
            c = Fraction(c)
            neg = c < 0
            c = abs(c)
            if m == UNIT:
                body = str(c)
            elif c == 1:
                body = a.mono_str(m)
            else:
                body = "%s*%s" % (c, a.mono_str(m))
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return "Element(%s)" % self


def multiply(a: Element, b: Element) -> Element:
    return a * b


def monomials_of_degree(algebra: GradedAlgebra, k: int) -> Tuple[Monomial, ...]:
    return algebra.monomials_of_degree(k)


def coeff_vector(e: Element, k: int) -> List[Fraction]:
    """Dense coordinates of ``e`` in the canonical basis of degree ``k``."""
    a = e.algebra
    basis = a.monomials_of_degree(k)
    v = [Fraction(0)] * len(basis)
    for i, c in a.vector(e, k).items():
        v[i] = Fraction(c)
    return v


def apply_derivation_terms(algebra: GradedAlgebra, values: Sequence[Optional[Mapping[Monomial, object]]],
                           parity: int, terms: Mapping[Monomial, object]) -> Dict[Monomial, object]:
    """
    Extend a derivation from generators to all of the algebra.

    ``values[g]`` is the image of generator ``g`` (None or empty for zero) and
    ``parity`` the derivation's degree mod 2, so that
    ``theta(xy) = theta(x) y + (-1)^(parity |x|) x theta(y)``.
    """
    odd = algebra.odd
    degs = algebra.degrees
    out: Dict[Monomial, object] = {}
    for m, c in terms.items():
        prefix_deg = 0
        for pos, (g, e) in enumerate(m):
            val = values[g]
            if val:
                # theta(g^e) = e g^(e-1) theta(g) for even g; theta(g) for odd g
                sign = -1 if (parity and prefix_deg % 2) else 1
                coef = sign * c * e
                prefix = m[:pos]
                suffix = m[pos + 1:]
                mid = ((g, e - 1),) if e > 1 else ()
                for vm, vc in val.items():
                    # prefix * g^(e-1) * theta(g) * suffix
                    s1, t = merge_sign(prefix + mid, vm, odd) if mid else merge_sign(prefix, vm, odd)
                    if not s1:
                        continue
                    s2, t = merge_sign(t, suffix, odd)
                    if not s2:
                        continue
                    # prefix and mid are already in order, so prefix+mid is canonical
                    x = out.get(t, 0) + s1 * s2 * coef * vc
                    if x:
                        out[t] = x
                    else:
                        del out[t]
            prefix_deg += degs[g] * e
    return out
