"""
Negative-degree derivations of a Sullivan model.

A derivation of shift ``i`` lowers degree by ``i`` and satisfies
``sigma(xy) = sigma(x) y + (-1)^(i|x|) x sigma(y)``.  Its boundary is
``d o sigma - (-1)^i sigma o d`` and the bracket is the graded commutator.
Derivations of each shift are coordinatized by the elementary derivations
``(v, m)`` sending generator ``v`` to monomial ``m`` and the others to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import Element, Monomial, apply_derivation_terms
from .linalg import RationalMatrix, kernel_basis, quotient_basis, solve_in_span
from .model import FreeCDGA, class_of, cohomology, EXACT, NOT_COCYCLE, CohomologyBasis

Elementary = Tuple[int, Monomial]   # (generator index, monomial)


class DegreeError(ValueError):
    pass


class Derivation:
    """A derivation given by its values on generators."""

    __slots__ = ("model", "shift", "values")

    def __init__(self, model: FreeCDGA, shift: int, values: Sequence[Mapping[Monomial, object]]):
        self.model = model
        self.shift = shift
        a = model.algebra
        vals = []
        for g, v in zip(a.generators, values):
            v = {m: c for m, c in (v or {}).items() if c != 0}
            for m in v:
                if a.mono_degree(m) != g.degree - shift:
                    raise DegreeError("value on %s has wrong degree" % g.name)
            vals.append(v)
        self.values = tuple(vals)

    @classmethod
    def elementary(cls, model: FreeCDGA, gen: int, mono: Monomial, coeff=1) -> "Derivation":
        a = model.algebra
        shift = a.generators[gen].degree - a.mono_degree(mono)
        vals = [{} for _ in a.generators]
        vals[gen] = {mono: coeff}
        return cls(model, shift, vals)

    @classmethod
    def zero(cls, model, shift):
        return cls(model, shift, [{} for _ in model.generators])

    def is_zero(self) -> bool:
        return not any(self.values)

    def __bool__(self):
        return not self.is_zero()

    def __call__(self, e: Element) -> Element:
        return apply(self, e)

    def value(self, name: str) -> Element:
        a = self.model.algebra
        return Element(a, self.values[a.index[name]])

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.shift != self.shift and other and self:
            raise DegreeError("cannot add derivations of different shifts")
        if not self:
            return other
        vals = []
        for x, y in zip(self.values, other.values):
            z = dict(x)
            for m, c in y.items():
                s = z.get(m, 0) + c
                if s:
                    z[m] = s
                else:
                    z.pop(m, None)
            vals.append(z)
        return Derivation(self.model, self.shift, vals)

    def scale(self, c) -> "Derivation":
        return Derivation(self.model, self.shift, [{m: c * x for m, x in v.items()} for v in self.values])

    def __rmul__(self, c):
        return self.scale(c)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.shift == other.shift and self.values == other.values

    def terms(self) -> Dict[Elementary, object]:
        out = {}
        for g, v in enumerate(self.values):
            for m, c in v.items():
                out[(g, m)] = c
        return out

    def __str__(self):
        a = self.model.algebra
        parts = []
        for (g, m), c in sorted(self.terms().items(), key=lambda t: (-t[0][0], t[0][1])):
            lbl = elementary_label(a, g, m)
            c = Fraction(c)
            if c == 1:
                parts.append("+ " + lbl)
            elif c == -1:
                parts.append("- " + lbl)
            else:
                parts.append(("- " if c < 0 else "+ ") + "%s%s" % (abs(c), lbl))
        if not parts:
            return "0"
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def elementary_label(algebra, gen: int, mono: Monomial) -> str:
    return "(%s,%s)" % (algebra.generators[gen].name, algebra.mono_str(mono))


def apply(sigma: Derivation, e: Element) -> Element:
    if e.algebra != sigma.model.algebra:
        raise ValueError("element lives in another algebra")
    a = e.algebra
    return Element(a, apply_derivation_terms(a, sigma.values, sigma.shift % 2, e.terms))


def _apply_terms(sigma: Derivation, terms):
    return apply_derivation_terms(sigma.model.algebra, sigma.values, sigma.shift % 2, terms)


def boundary(sigma: Derivation) -> Derivation:
    """``d o sigma - (-1)^i sigma o d`` evaluated on generators."""
    m = sigma.model
    i = sigma.shift
    sign = -1 if i % 2 == 0 else 1
    vals = []
    for g, v in enumerate(sigma.values):
        out = dict(m.d_terms(v)) if v else {}
        sd = _apply_terms(sigma, m._values[g]) if m._values[g] else {}
        for t, c in sd.items():
            x = out.get(t, 0) + sign * c
            if x:
                out[t] = x
            else:
                out.pop(t, None)
        vals.append(out)
    return Derivation(m, i - 1, vals)


def bracket(sigma: Derivation, tau: Derivation) -> Derivation:
    """``sigma o tau - (-1)^(|sigma||tau|) tau o sigma`` on generators."""
    m = sigma.model
    sign = -1 if (sigma.shift * tau.shift) % 2 == 0 else 1
    vals = []
    for g in range(len(m.generators)):
        out = dict(_apply_terms(sigma, tau.values[g])) if tau.values[g] else {}
        if sigma.values[g]:
            for t, c in _apply_terms(tau, sigma.values[g]).items():
                x = out.get(t, 0) + sign * c
                if x:
                    out[t] = x
                else:
                    out.pop(t, None)
        vals.append(out)
    return Derivation(m, sigma.shift + tau.shift, vals)


def der_basis(m: FreeCDGA, i: int) -> List[Elementary]:
    """Elementary derivations of shift ``i``: generators in descending index,
    each followed by the canonical monomials of degree ``|v| - i``."""
    if i < 0:
        return []
    a = m.algebra
    out = []
    for g in reversed(a.generators):
        k = g.degree - i
        if k < 0:
            continue
        for mono in a.monomials_of_degree(k):
            out.append((g.index, mono))
    return out


class DerChainComplex:
    """
    The chain complex of derivations, degree by degree.

    ``basis(i)`` lists elementary derivations of shift i; ``cycles(1)`` is
    the kernel of the auxiliary boundary into shift 0, which is the degree-1
    part used everywhere else.
    """

    def __init__(self, m: FreeCDGA):
        self.model = m
        self.top = max((g.degree for g in m.generators), default=0)
        self._basis: Dict[int, List[Elementary]] = {}
        self._pos: Dict[int, Dict[Elementary, int]] = {}
        self._bd: Dict[int, RationalMatrix] = {}
        self._cycles: Dict[int, list] = {}

    def basis(self, i: int) -> List[Elementary]:
        if i not in self._basis:
            self._basis[i] = der_basis(self.model, i)
            self._pos[i] = {e: j for j, e in enumerate(self._basis[i])}
        return self._basis[i]

    def position(self, i: int) -> Dict[Elementary, int]:
        self.basis(i)
        return self._pos[i]

    def element(self, i: int, j: int) -> Derivation:
        g, mono = self.basis(i)[j]
        return Derivation.elementary(self.model, g, mono)

    def to_derivation(self, i: int, vec: Mapping[int, object]) -> Derivation:
        basis = self.basis(i)
        vals = [{} for _ in self.model.generators]
        for j, c in vec.items():
            g, mono = basis[j]
            vals[g][mono] = c
        return Derivation(self.model, i, vals)

    def to_vector(self, sigma: Derivation) -> Dict[int, object]:
        if sigma.is_zero():
            return {}
        pos = self.position(sigma.shift)
        return {pos[e]: c for e, c in sigma.terms().items()}

    def boundary_matrix(self, i: int) -> RationalMatrix:
        """Matrix of the boundary from shift ``i`` to shift ``i-1`` (i >= 1)."""
        if i not in self._bd:
            cols = [self.to_vector(boundary(self.element(i, j))) for j in range(len(self.basis(i)))]
            self._bd[i] = RationalMatrix(len(self.basis(i - 1)), len(cols), cols)
        return self._bd[i]

    def cycles(self, i: int) -> list:
        if i not in self._cycles:
            if i < 1:
                self._cycles[i] = []
            else:
                self._cycles[i] = kernel_basis(self.boundary_matrix(i))
        return self._cycles[i]

    def boundaries(self, i: int) -> list:
        if i + 1 > self.top or i < 1:
            return []
        return [c for c in self.boundary_matrix(i + 1).columns if c]

    def check_d_squared(self) -> bool:
        for i in range(2, self.top + 1):
            outer = self.boundary_matrix(i - 1)
            for col in self.boundary_matrix(i).columns:
                if outer.apply(col):
                    return False
        return True


@dataclass
class HomologyClass:
    degree: int
    index: int
    representative: Derivation
    vector: Dict[int, Fraction]
    label: str
    block: str = ""


def _label_for(cx: DerChainComplex, i: int, vec: Mapping[int, object]) -> str:
    return str(cx.to_derivation(i, vec))


class DerHomology:
    """Homology of the derivation complex with bracket structure constants."""

    def __init__(self, m: FreeCDGA, complex: Optional[DerChainComplex] = None):
        self.model = m
        self.complex = complex or DerChainComplex(m)
        cx = self.complex
        self.classes: Dict[int, List[HomologyClass]] = {}
        self._solvers: Dict[int, tuple] = {}
        for i in range(1, cx.top + 1):
            z = cx.cycles(i)
            b = cx.boundaries(i)
            reps = quotient_basis(b, z)
            cls = []
            for j, v in enumerate(reps):
                cls.append(HomologyClass(i, j, cx.to_derivation(i, v), v, _label_for(cx, i, v)))
            if cls:
                self.classes[i] = cls

    # -- queries -----------------------------------------------------------

    def dims(self) -> Dict[int, int]:
        return {i: len(c) for i, c in sorted(self.classes.items())}

    def total(self) -> int:
        return sum(len(c) for c in self.classes.values())

    def all_classes(self) -> List[HomologyClass]:
        return [c for i in sorted(self.classes) for c in self.classes[i]]

    def even_total(self) -> int:
        return sum(len(c) for i, c in self.classes.items() if i % 2 == 0)

    def coordinates(self, sigma: Derivation) -> Optional[List[Fraction]]:
        """Coordinates of the class of a cycle; None if not a cycle."""
        i = sigma.shift
        if sigma.is_zero():
            return [Fraction(0)] * len(self.classes.get(i, []))
        cx = self.complex
        if i < 1 or i > cx.top:
            return []
        vec = cx.to_vector(sigma)
        if cx.boundary_matrix(i).apply(vec):
            return None
        reps = [c.vector for c in self.classes.get(i, [])]
        sol = solve_in_span(reps + cx.boundaries(i), vec)
        if sol is None:
            raise AssertionError("cycle outside span of classes and boundaries")
        return [Fraction(sol.get(j, 0)) for j in range(len(reps))]

    def is_boundary(self, sigma: Derivation) -> bool:
        c = self.coordinates(sigma)
        return c is not None and not any(c)

    def class_element(self, i: int, coords: Sequence[object]) -> Derivation:
        out = Derivation.zero(self.model, i)
        for c, h in zip(coords, self.classes.get(i, [])):
            if c:
                out = out + h.representative.scale(c)
        return out

    @cached_property
    def structure_constants(self) -> Dict[Tuple[Tuple[int, int], Tuple[int, int]], Dict[int, Fraction]]:
        return homology_bracket(self)


def der_homology(m: FreeCDGA) -> DerHomology:
    return DerHomology(m)


def homology_bracket(h: DerHomology, representatives: Optional[Mapping[Tuple[int, int], Derivation]] = None):
    """
    Bracket structure constants on the homology basis.

    Keys are pairs of ``(degree, index)`` class identifiers; values map class
    indices in the target degree to coefficients.  ``representatives`` may
    override the stored cycle for any class.
    """
    reps = {(c.degree, c.index): c.representative for c in h.all_classes()}
    if representatives:
        reps.update(representatives)
    out = {}
    keys = sorted(reps)
    for p in keys:
        for q in keys:
            if p[0] + q[0] > h.complex.top:
                continue
            br = bracket(reps[p], reps[q])
            coords = h.coordinates(br)
            if coords is None:
                raise AssertionError("bracket of cycles is not a cycle")
            val = {k: c for k, c in enumerate(coords) if c}
            if val:
                out[(p, q)] = val
    return out


# -- evaluation maps ------------------------------------------------------------


def mu(m: FreeCDGA, sigma: Derivation, w: Element, homology: Optional[DerHomology] = None):
    """
    The evaluation pairing a derivation class with a cohomology class.

    The representative is the derivation ``v -> w * sigma(v)``; left
    multiplication by a cocycle commutes with the boundary up to the sign
    ``(-1)^|w|``, so the class only depends on the classes of sigma and w.
    Returns the coordinates of the resulting class in degree ``|sigma|-|w|``.
    """
    h = homology or der_homology(m)
    k = w.degree if w else 0
    md = sigma.shift
    if md <= k:
        raise DegreeError("evaluation needs |sigma| > |w|")
    prod = evaluation_derivation(sigma, w)
    coords = h.coordinates(prod)
    if coords is None:
        raise AssertionError("evaluation of cycles produced a non-cycle")
    return coords


def evaluation_derivation(sigma: Derivation, w: Element) -> Derivation:
    m = sigma.model
    a = m.algebra
    k = w.degree if w else 0
    if not w:
        return Derivation.zero(m, sigma.shift - k)
    vals = [a.mul_terms(w.terms, v) if v else {} for v in sigma.values]
    return Derivation(m, sigma.shift - k, vals)


@dataclass
class InducedMap:
    """The map ``w -> [sigma(w)]`` on cohomology, by source degree."""

    shift: int
    matrices: Dict[int, List[List[Fraction]]] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not any(any(x for x in row) for mat in self.matrices.values() for row in mat)

    def images(self):
        return self.matrices


def psi(m: FreeCDGA, sigma: Derivation, basis: Optional[CohomologyBasis] = None) -> InducedMap:
    """
    Matrix of ``w -> [sigma(w)]`` from H^k to H^(k - shift) for every k.

    Entry ``matrices[k][r]`` holds the coordinates of the image of the
    r-th basis class of H^k.
    """
    basis = basis or cohomology(m)
    i = sigma.shift
    out = InducedMap(i)
    for k in range(i, basis.max_degree + 1):
        rows = []
        for w in basis.degree_basis(k):
            img = apply(sigma, w)
            c = class_of(m, img, basis)
            if c == EXACT:
                rows.append([Fraction(0)] * len(basis.degree_basis(k - i)))
            elif c == NOT_COCYCLE:
                raise AssertionError("derivation cycle sent a cocycle to a non-cocycle")
            else:
                rows.append(c)
        if rows:
            out.matrices[k] = rows
    return out


def psi_zero(m: FreeCDGA, md: int, homology: Optional[DerHomology] = None,
             basis: Optional[CohomologyBasis] = None) -> bool:
    h = homology or der_homology(m)
    basis = basis or cohomology(m)
    return all(psi(m, c.representative, basis).is_zero() for c in h.classes.get(md, []))


# -- products with odd spheres -----------------------------------------------


BLOCK_A, BLOCK_B, BLOCK_C = "A", "B", "C"


def block_of(u: int, elem: Elementary) -> str:
    g, mono = elem
    if g == u:
        return BLOCK_C
    if any(x == u for x, _ in mono):
        return BLOCK_B
    return BLOCK_A


def vector_block(cx: DerChainComplex, i: int, vec, u: int) -> str:
    blocks = {block_of(u, cx.basis(i)[j]) for j in vec}
    if len(blocks) != 1:
        raise AssertionError("representative mixes blocks %s" % sorted(blocks))
    return blocks.pop()


@dataclass
class SphereSplit:
    n: int
    dims: Dict[str, Dict[int, int]]
    AA_zero: bool
    AC_zero: bool
    BC_zero: bool
    homology: DerHomology
    block_brackets: Dict[str, list]

    @property
    def wr_X_sufficient(self) -> bool:
        return self.BC_zero

    @property
    def wr_Sn_sufficient(self) -> bool:
        return self.AC_zero

    @property
    def abelian(self) -> bool:
        return self.AA_zero and self.AC_zero and self.BC_zero


def sphere_split(m: FreeCDGA, n: int, product: Optional[FreeCDGA] = None) -> SphereSplit:
    """Split the derivation homology of ``X x S^n`` by how classes treat the
    sphere generator and test the three bracket conditions."""
    from .model import product_model, sphere_model

    if n % 2 == 0:
        raise ValueError("only odd spheres are supported")
    if n < 3:
        raise ValueError("sphere dimension must be at least 3")
    p = product or product_model(m, sphere_model(n))
    u = len(p.generators) - 1
    h = DerHomology(p)
    cx = h.complex
    dims = {BLOCK_A: {}, BLOCK_B: {}, BLOCK_C: {}}
    for c in h.all_classes():
        c.block = vector_block(cx, c.degree, c.vector, u)
        dims[c.block][c.degree] = dims[c.block].get(c.degree, 0) + 1
    consts = h.structure_constants
    lookup = {(c.degree, c.index): c.block for c in h.all_classes()}
    pairs = {"AA": [], "AC": [], "BC": []}
    for (pk, qk), val in consts.items():
        key = "".join(sorted(lookup[pk] + lookup[qk]))
        if key in pairs:
            pairs[key].append((pk, qk, val))
    return SphereSplit(n, dims, not pairs["AA"], not pairs["AC"], not pairs["BC"], h, pairs)
