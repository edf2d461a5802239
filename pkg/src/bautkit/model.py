"""
Free CDGAs and Sullivan models: validation, structure flags, cohomology,
cocycle arithmetic and membership in homogeneous polynomial ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import (
    Element,
    GradedAlgebra,
    Monomial,
    NotHomogeneous,
    apply_derivation_terms,
)
from .linalg import Echelon, RationalMatrix, kernel_basis, preimage, quotient_basis, solve_in_span


class ModelError(ValueError):
    pass


class FreeCDGA:
    """
    A free graded-commutative algebra with a degree +1 differential given on
    generators.  The differential need not be decomposable.
    """

    def __init__(self, algebra: GradedAlgebra, differential: Mapping[str, Element] = None, name: str = ""):
        self.algebra = algebra
        self.name = name
        diff = []
        differential = dict(differential or {})
        for g in algebra.generators:
            v = differential.pop(g.name, None)
            if v is None:
                v = algebra.zero()
            if not isinstance(v, Element):
                raise ModelError("differential of %s must be an Element" % g.name)
            if v.algebra != algebra:
                raise ModelError("differential of %s lives in another algebra" % g.name)
            diff.append(v)
        if differential:
            raise ModelError("differential given for unknown generators: %s" % ", ".join(sorted(differential)))
        self.differential: Tuple[Element, ...] = tuple(diff)
        self._values = tuple(v.terms for v in diff)
        self._dmats: Dict[int, RationalMatrix] = {}

    # -- accessors ---------------------------------------------------------

    @property
    def generators(self):
        return self.algebra.generators

    def names(self) -> List[str]:
        return [g.name for g in self.algebra.generators]

    def gen(self, name: str) -> Element:
        return self.algebra.gen(name)

    def dgen(self, name: str) -> Element:
        return self.differential[self.algebra.index[name]]

    def d(self, e: Element) -> Element:
        if e.algebra != self.algebra:
            raise ModelError("element lives in another algebra")
        return Element(self.algebra, apply_derivation_terms(self.algebra, self._values, 1, e.terms))

    def d_terms(self, terms):
        return apply_derivation_terms(self.algebra, self._values, 1, terms)

    def degree_multiset(self) -> List[int]:
        return sorted(g.degree for g in self.algebra.generators)

    def d_squared_zero(self) -> bool:
        return all(self.d(v).is_zero() for v in self.differential)

    def is_decomposable(self) -> bool:
        return all(min(v.word_lengths(), default=2) >= 2 for v in self.differential)

    def linear_part(self, name: str) -> Element:
        return self.dgen(name).part(1)

    def nonzero_differentials(self) -> List[str]:
        return [g.name for g, v in zip(self.algebra.generators, self.differential) if v]

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.describe())

    def describe(self) -> str:
        a = self.algebra
        gens = ", ".join("%s:%d" % (g.name, g.degree) for g in a.generators)
        ds = "; ".join("d%s = %s" % (g.name, v) for g, v in zip(a.generators, self.differential) if v)
        return "Λ(%s)%s" % (gens, (", " + ds) if ds else ", d=0")

    # -- linear algebra of the graded pieces -------------------------------

    def differential_matrix(self, k: int) -> RationalMatrix:
        """Matrix of d from degree ``k`` to degree ``k+1``."""
        mat = self._dmats.get(k)
        if mat is not None:
            return mat
        a = self.algebra
        src = a.monomials_of_degree(k)
        pos = a.position(k + 1)
        cols = []
        for m in src:
            img = self.d_terms({m: 1})
            col = {}
            for t, c in img.items():
                i = pos.get(t)
                if i is None:
                    raise ModelError("differential is not of degree +1")
                col[i] = c
            cols.append(col)
        mat = RationalMatrix(len(pos), len(src), cols)
        self._dmats[k] = mat
        return mat

    def cohomology_dims(self, max_degree: int) -> List[int]:
        ranks = {}

        def rk(k):
            if k < 0:
                return 0
            if k not in ranks:
                ech = Echelon()
                for col in self.differential_matrix(k).columns:
                    ech.insert(col)
                ranks[k] = ech.rank
            return ranks[k]

        return [self.algebra.dimension(k) - rk(k) - rk(k - 1) for k in range(max_degree + 1)]


class SullivanModel(FreeCDGA):
    """A free CDGA presented as the minimal model of a space."""

    def formal_dimension(self) -> int:
        odd = sum(g.degree for g in self.generators if g.odd)
        even = sum(g.degree - 1 for g in self.generators if not g.odd)
        return odd - even


def build_model(generators: Sequence[Tuple[str, int]], differential: Mapping[str, object] = None,
                name: str = "", cls=SullivanModel):
    """Create a model from ``(name, degree)`` pairs and differentials given as
    Elements or DSL expression strings."""
    from .dsl import parse_expr

    a = GradedAlgebra(generators)
    diff = {}
    for k, v in (differential or {}).items():
        if isinstance(v, str):
            v = parse_expr(v, a)
        elif not isinstance(v, Element):
            v = a.scalar(v)
        diff[k] = v
    return cls(a, diff, name=name)


# -- validation and structure --------------------------------------------


@dataclass
class ValidationReport:
    degree_ok: bool
    d_squared_zero: bool
    minimal: bool
    simply_connected: bool
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.degree_ok and self.d_squared_zero

    def as_dict(self):
        return {
            "degree_ok": self.degree_ok,
            "d_squared_zero": self.d_squared_zero,
            "minimal": self.minimal,
            "simply_connected": self.simply_connected,
            "problems": list(self.problems),
        }


def validate(m: FreeCDGA) -> ValidationReport:
    a = m.algebra
    problems = []
    degree_ok = True
    for g, v in zip(a.generators, m.differential):
        degs = v.degrees()
        if degs and degs != {g.degree + 1}:
            degree_ok = False
            problems.append("d(%s) has degree %s, expected %d" % (
                g.name, ",".join(str(x) for x in sorted(degs)), g.degree + 1))
    d2 = True
    if degree_ok:
        for g, v in zip(a.generators, m.differential):
            if m.d(v):
                d2 = False
                problems.append("d(d(%s)) = %s" % (g.name, m.d(v)))
    else:
        d2 = all(not m.d(v) for v in m.differential)
    minimal = True
    for g, v in zip(a.generators, m.differential):
        if v and min(v.word_lengths()) < 2:
            minimal = False
            problems.append("d(%s) is not decomposable" % g.name)
    simply_connected = all(g.degree >= 2 for g in a.generators)
    if not simply_connected:
        problems.append("generators in degree 1")
    return ValidationReport(degree_ok, d2, minimal, simply_connected, problems)


def require_valid(m: FreeCDGA, minimal: bool = True):
    rep = validate(m)
    if not rep.ok or (minimal and not (rep.minimal and rep.simply_connected)):
        raise ModelError("invalid model: " + "; ".join(rep.problems))
    return rep


@dataclass
class Classification:
    pure: bool
    two_stage: bool
    oddly_generated: bool

    def as_dict(self):
        return {"pure": self.pure, "two_stage": self.two_stage, "oddly_generated": self.oddly_generated}


def _uses_only(e: Element, allowed: set) -> bool:
    return e.generators_used() <= allowed


def classify(m: FreeCDGA) -> Classification:
    a = m.algebra
    even = {g.index for g in a.generators if not g.odd}
    pure = all(
        (not v) if not g.odd else _uses_only(v, even)
        for g, v in zip(a.generators, m.differential)
    )
    v0 = {g.index for g, v in zip(a.generators, m.differential) if not v}
    two_stage = all(_uses_only(v, v0) for v in m.differential)
    oddly = all(g.odd for g in a.generators)
    return Classification(pure, two_stage, oddly)


def is_F0_presentation(m: FreeCDGA) -> bool:
    """Whether d of the odd generators is a regular sequence in Q[even].

    Decided by checking that the quotient ring vanishes in a full window of
    ``max|x|`` consecutive degrees starting at
    ``sum|f| - sum|x| + max|x|``; vanishing on such a window forces vanishing
    in all higher degrees.
    """
    a = m.algebra
    evens = [g for g in a.generators if not g.odd]
    odds = [g for g in a.generators if g.odd]
    even_idx = {g.index for g in evens}
    if len(evens) != len(odds) or not evens:
        raise ModelError("not an F0 candidate shape")
    for g in evens:
        if m.differential[g.index]:
            raise ModelError("not an F0 candidate shape")
    rels = [m.differential[g.index] for g in odds]
    for r in rels:
        if not r or not _uses_only(r, even_idx):
            raise ModelError("not an F0 candidate shape")
    total = sum(g.degree + 1 for g in odds) - sum(g.degree for g in evens)
    top = max(g.degree for g in evens)
    start = total + top
    for k in range(start, start + top):
        if _quotient_dimension(a, even_idx, rels, k) != 0:
            return False
    return True


def _even_monomials(a: GradedAlgebra, even_idx: set, k: int) -> List[Monomial]:
    return [mono for mono in a.monomials_of_degree(k) if all(g in even_idx for g, _ in mono)]


def _ideal_columns(a: GradedAlgebra, even_idx: set, gens: Sequence[Element], k: int):
    cols = []
    owners = []
    for i, g in enumerate(gens):
        dg = g.degree
        if dg is None or dg > k:
            continue
        for mono in _even_monomials(a, even_idx, k - dg):
            cols.append(a.mul_terms({mono: 1}, g.terms))
            owners.append((i, mono))
    return cols, owners


def _quotient_dimension(a, even_idx, rels, k) -> int:
    basis = _even_monomials(a, even_idx, k)
    pos = {mono: i for i, mono in enumerate(basis)}
    cols, _ = _ideal_columns(a, even_idx, rels, k)
    ech = Echelon()
    for c in cols:
        ech.insert({pos[t]: x for t, x in c.items()})
    return len(basis) - ech.rank


# -- cohomology -------------------------------------------------------------


@dataclass
class CohomologyBasis:
    model: FreeCDGA
    max_degree: int
    representatives: Dict[int, List[Element]]

    def dims(self) -> List[int]:
        return [len(self.representatives.get(k, [])) for k in range(self.max_degree + 1)]

    def degree_basis(self, k: int) -> List[Element]:
        return self.representatives.get(k, [])

    def total(self) -> int:
        return sum(self.dims())


def default_max_degree(m: FreeCDGA) -> int:
    odd = sum(g.degree for g in m.generators if g.odd)
    even = sum(g.degree - 1 for g in m.generators if not g.odd)
    return max(odd - even, 0)


_COHOMOLOGY_CACHE_ATTR = "_cohomology_cache"


def cohomology(m: FreeCDGA, max_degree: Optional[int] = None) -> CohomologyBasis:
    if max_degree is None:
        max_degree = default_max_degree(m)
    cache = m.__dict__.setdefault(_COHOMOLOGY_CACHE_ATTR, {})
    reps = {}
    a = m.algebra
    for k in range(max_degree + 1):
        if k in cache:
            reps[k] = cache[k]
            continue
        z = kernel_basis(m.differential_matrix(k))
        b = m.differential_matrix(k - 1).columns if k >= 1 else ()
        q = quotient_basis(b, z)
        cache[k] = [a.from_vector(v, k) for v in q]
        reps[k] = cache[k]
    return CohomologyBasis(m, max_degree, reps)


EXACT = "exact"
NOT_COCYCLE = "not a cocycle"


def class_of(m: FreeCDGA, e: Element, basis: Optional[CohomologyBasis] = None):
    """Coordinates of ``[e]`` in the cohomology basis, EXACT, or NOT_COCYCLE."""
    if e.is_zero():
        return EXACT
    k = e.degree
    if m.d(e):
        return NOT_COCYCLE
    a = m.algebra
    v = a.vector(e, k)
    bmat = m.differential_matrix(k - 1) if k >= 1 else RationalMatrix(a.dimension(k), 0, [])
    if preimage(bmat, v) is not None:
        return EXACT
    if basis is None or k > basis.max_degree:
        basis = cohomology(m, max(k, (basis.max_degree if basis else 0)))
    reps = [a.vector(r, k) for r in basis.degree_basis(k)]
    sol = solve_in_span(reps + list(bmat.columns), v)
    if sol is None:
        raise AssertionError("cocycle not in span of cohomology and boundaries")
    return [Fraction(sol.get(i, 0)) for i in range(len(reps))]


def is_exact(m: FreeCDGA, e: Element) -> bool:
    return class_of(m, e) == EXACT


# -- ideals in the even polynomial part ----------------------------------


@dataclass
class Membership:
    member: bool
    certificate: Optional[List[Element]] = None

    def __bool__(self):
        return self.member


def ideal_membership(f: Element, gens: Sequence[Element], ring: Optional[Sequence[str]] = None) -> Membership:
    """Decide ``f in (gens)`` in the polynomial ring on the even generators.

    On success the certificate ``h`` satisfies ``sum h_i * gens_i == f``.
    """
    a = f.algebra
    if ring is None:
        even_idx = {g.index for g in a.generators if not g.odd}
    else:
        even_idx = {a.index[n] for n in ring}
        if any(a.odd[i] for i in even_idx):
            raise ModelError("ideal ring must consist of even generators")
    for e in [f, *gens]:
        if e.algebra != a:
            raise ModelError("elements live in different algebras")
        if not _uses_only(e, even_idx):
            raise ModelError("ideal membership is only defined for polynomials in the even generators")
        if not e.is_homogeneous():
            raise NotHomogeneous("ideal membership needs homogeneous input")
    if f.is_zero():
        return Membership(True, [a.zero() for _ in gens])
    k = f.degree
    cols, owners = _ideal_columns(a, even_idx, [g for g in gens], k)
    basis = _even_monomials(a, even_idx, k)
    pos = {mono: i for i, mono in enumerate(basis)}
    vecs = [{pos[t]: x for t, x in c.items()} for c in cols]
    sol = solve_in_span(vecs, {pos[t]: x for t, x in f.terms.items()}) if vecs else None
    if sol is None:
        return Membership(False, None)
    cert = [dict() for _ in gens]
    for j, c in sol.items():
        i, mono = owners[j]
        cert[i][mono] = cert[i].get(mono, 0) + c
    return Membership(True, [Element(a, h) for h in cert])


# -- constructions ------------------------------------------------------------


def embed(e: Element, target: GradedAlgebra, index_map: Sequence[int]) -> Element:
    """Push an element along an order-preserving generator injection."""
    out = {}
    for mono, c in e.terms.items():
        out[tuple((index_map[g], x) for g, x in mono)] = c
    return Element(target, out)


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "'"
    return name


def product_model(m1: FreeCDGA, m2: FreeCDGA, cls=None) -> FreeCDGA:
    """Tensor product; colliding names in the second factor get primes."""
    if cls is None:
        cls = type(m1) if type(m1) is type(m2) else FreeCDGA
    taken = set(m1.names())
    names2 = []
    for n in m2.names():
        n2 = _fresh(n, taken)
        taken.add(n2)
        names2.append(n2)
    gens = [(g.name, g.degree) for g in m1.generators] + [
        (n, g.degree) for n, g in zip(names2, m2.generators)]
    a = GradedAlgebra(gens)
    n1 = len(m1.generators)
    map1 = list(range(n1))
    map2 = [n1 + i for i in range(len(m2.generators))]
    diff = {}
    for g, v in zip(m1.generators, m1.differential):
        diff[g.name] = embed(v, a, map1)
    for n, v in zip(names2, m2.differential):
        diff[n] = embed(v, a, map2)
    name = "%s x %s" % (m1.name or "X", m2.name or "Y")
    return cls(a, diff, name=name)


def sphere_model(n: int, name: str = "u") -> SullivanModel:
    if n < 2:
        raise ModelError("sphere dimension must be at least 2")
    if n % 2:
        return SullivanModel(GradedAlgebra([(name, n)]), {}, name="S^%d" % n)
    a = GradedAlgebra([(name, n), (name + "'", 2 * n - 1)])
    u = a.gen(name)
    return SullivanModel(a, {name + "'": u * u}, name="S^%d" % n)
