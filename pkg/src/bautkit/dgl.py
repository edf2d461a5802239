"""
Finite differential graded Lie algebras and their Chevalley-Eilenberg
cochain algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra, Element
from .derivation import DerChainComplex, Derivation, bracket, boundary
from .model import FreeCDGA, require_valid

Vec = Dict[int, Fraction]


class DGLError(ValueError):
    pass


def _add_into(acc: Dict[int, object], vec, scale=1):
    for k, c in vec.items():
        x = acc.get(k, 0) + scale * c
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


class FiniteDGL:
    """
    A DGL on a finite graded basis.

    ``boundary[b]`` is the coordinate vector of ``d x_b`` and
    ``brackets[(b, c)]`` that of ``[x_b, x_c]``; missing entries are zero.
    """

    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 boundary: Sequence[Vec], brackets: Dict[Tuple[int, int], Vec],
                 derivations: Optional[Sequence[Derivation]] = None):
        if any(d < 1 for d in degrees):
            raise DGLError("basis degrees must be positive")
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.boundary = [dict(v) for v in boundary]
        self.brackets = {k: dict(v) for k, v in brackets.items() if v}
        self.derivations = list(derivations) if derivations is not None else None

    def __len__(self):
        return len(self.labels)

    def bracket_vec(self, x: Vec, y: Vec) -> Vec:
        out: Dict[int, object] = {}
        for b, cb in x.items():
            for c, cc in y.items():
                v = self.brackets.get((b, c))
                if v:
                    _add_into(out, v, cb * cc)
        return out

    def boundary_vec(self, x: Vec) -> Vec:
        out: Dict[int, object] = {}
        for b, cb in x.items():
            _add_into(out, self.boundary[b], cb)
        return out

    def degree_of(self, x: Vec) -> Optional[int]:
        degs = {self.degrees[b] for b in x}
        return degs.pop() if len(degs) == 1 else None

    def is_abelian(self) -> bool:
        return not self.brackets


def der_dgl(m: FreeCDGA, complex: Optional[DerChainComplex] = None) -> FiniteDGL:
    """The DGL of positive-shift derivations, with shift 1 cut down to cycles."""
    cx = complex or DerChainComplex(m)
    a = m.algebra
    top = cx.top
    labels, degrees, ders = [], [], []
    index: Dict[int, Dict[int, int]] = {}      # shift -> elementary position -> basis index
    pivots1: List[int] = []
    for i in range(top, 0, -1):
        index[i] = {}
        if i == 1:
            for vec in cx.cycles(1):
                piv = min(vec)
                pivots1.append(piv)
                index[1][piv] = len(labels)
                sigma = cx.to_derivation(1, vec)
                labels.append(_cycle_label(a, cx, vec))
                degrees.append(1)
                ders.append(sigma)
        else:
            for j, (g, mono) in enumerate(cx.basis(i)):
                index[i][j] = len(labels)
                labels.append(_elem_label(a, g, mono))
                degrees.append(i)
                ders.append(Derivation.elementary(m, g, mono))

    def coords(sigma: Derivation) -> Vec:
        if sigma.is_zero():
            return {}
        i = sigma.shift
        vec = cx.to_vector(sigma)
        if i == 1:
            # reduced echelon cycles: coordinates are the pivot entries
            out = {index[1][p]: vec[p] for p in pivots1 if vec.get(p)}
            check: Dict[int, object] = {}
            for p in pivots1:
                if vec.get(p):
                    _add_into(check, cx.cycles(1)[pivots1.index(p)], vec[p])
            if check != {k: v for k, v in vec.items() if v}:
                raise AssertionError("degree-1 element is not a cycle")
            return out
        return {index[i][j]: c for j, c in vec.items()}

    bd = []
    for sigma in ders:
        if sigma.shift == 1:
            bd.append({})
        else:
            bd.append(coords(boundary(sigma)))
    brackets = {}
    n = len(ders)
    for b in range(n):
        for c in range(n):
            if degrees[b] + degrees[c] > top:
                continue
            v = coords(bracket(ders[b], ders[c]))
            if v:
                brackets[(b, c)] = v
    return FiniteDGL(labels, degrees, bd, brackets, ders)


def _mono_tag(a: GradedAlgebra, mono) -> str:
    return a.mono_str(mono).replace("*", "")


def _elem_label(a: GradedAlgebra, g: int, mono) -> str:
    return "%s,%s" % (a.generators[g].name, _mono_tag(a, mono))


def _cycle_label(a, cx: DerChainComplex, vec) -> str:
    if len(vec) == 1:
        g, mono = cx.basis(1)[next(iter(vec))]
        return _elem_label(a, g, mono)
    return "[%s]" % cx.to_derivation(1, vec)


# -- axioms ----------------------------------------------------------------


@dataclass
class DGLReport:
    antisymmetry: List[Tuple[int, int]] = field(default_factory=list)
    jacobi: List[Tuple[int, int, int]] = field(default_factory=list)
    leibniz: List[Tuple[int, int]] = field(default_factory=list)
    d_squared: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.antisymmetry or self.jacobi or self.leibniz or self.d_squared)

    def as_dict(self):
        return {"ok": self.ok, "antisymmetry": self.antisymmetry, "jacobi": self.jacobi,
                "leibniz": self.leibniz, "d_squared": self.d_squared}


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def validate_dgl(L: FiniteDGL, triples: Optional[Sequence[Tuple[int, int, int]]] = None) -> DGLReport:
    rep = DGLReport()
    n = len(L)
    deg = L.degrees
    top = max(deg, default=0)
    e = [{b: 1} for b in range(n)]
    for b in range(n):
        if L.boundary_vec(L.boundary[b]):
            rep.d_squared.append(b)
        for c in range(n):
            xy = L.brackets.get((b, c), {})
            yx = L.brackets.get((c, b), {})
            if _add_into(dict(xy), yx, _sign(deg[b] * deg[c])):
                rep.antisymmetry.append((b, c))
            # d[x,y] = [dx,y] + (-1)^|x| [x,dy]
            lhs = L.boundary_vec(xy)
            rhs = _add_into(L.bracket_vec(L.boundary[b], e[c]), L.bracket_vec(e[b], L.boundary[c]), _sign(deg[b]))
            if _add_into(dict(lhs), rhs, -1):
                rep.leibniz.append((b, c))
    if triples is None:
        triples = ((x, y, z) for x in range(n) for y in range(n) for z in range(n)
                   if deg[x] + deg[y] + deg[z] <= top)
    for x, y, z in triples:
        acc: Dict[int, object] = {}
        _add_into(acc, L.bracket_vec(e[x], L.bracket_vec(e[y], e[z])), _sign(deg[x] * deg[z]))
        _add_into(acc, L.bracket_vec(e[y], L.bracket_vec(e[z], e[x])), _sign(deg[y] * deg[x]))
        _add_into(acc, L.bracket_vec(e[z], L.bracket_vec(e[x], e[y])), _sign(deg[z] * deg[y]))
        if acc:
            rep.jacobi.append((x, y, z))
    return rep


# -- Chevalley-Eilenberg ---------------------------------------------------------


class CEAlgebra(FreeCDGA):
    """A Chevalley-Eilenberg cochain algebra, remembering its linear and
    quadratic parts separately."""

    def __init__(self, algebra, differential, name="", linear=None, quadratic=None, dgl=None):
        super().__init__(algebra, differential, name=name)
        self.linear = linear
        self.quadratic = quadratic
        self.dgl = dgl


def chevalley_eilenberg(L: FiniteDGL, name: str = "", check: bool = True) -> CEAlgebra:
    """
    Cochains on ``L``: one generator ``V_x`` in degree ``|x|+1`` per basis
    element, with

        D V_a = - sum_b d_ab V_b  -  1/2 sum_{b,c} (-1)^|x_b| f^a_bc V_b V_c

    where ``d x_b = sum_a d_ab x_a`` and ``[x_b, x_c] = sum_a f^a_bc x_a``.
    The quadratic sum is taken once per unordered pair.
    """
    if check:
        rep = validate_dgl(L)
        if not rep.ok:
            raise DGLError("not a DGL: %s" % rep.as_dict())
    n = len(L)
    gens = [("V_{%s}" % lbl, d + 1) for lbl, d in zip(L.labels, L.degrees)]
    a = GradedAlgebra(gens)
    lin: List[Dict] = [dict() for _ in range(n)]
    quad: List[Dict] = [dict() for _ in range(n)]
    for b in range(n):
        for t, c in L.boundary[b].items():
            lin[t][((b, 1),)] = lin[t].get(((b, 1),), 0) - c
    half = Fraction(1, 2)
    for (b, c), vec in L.brackets.items():
        if b > c or (b == c and a.odd[b]):
            continue
        if b == c:
            mono, coef = ((b, 2),), -half * _sign(L.degrees[b])
        else:
            mono, coef = ((b, 1), (c, 1)), -_sign(L.degrees[b])
        for t, f in vec.items():
            x = quad[t].get(mono, 0) + coef * f
            if x:
                quad[t][mono] = x
            else:
                quad[t].pop(mono, None)
    diff = {}
    linear, quadratic = {}, {}
    for t in range(n):
        le = Element(a, lin[t])
        qe = Element(a, quad[t])
        linear[gens[t][0]] = le
        quadratic[gens[t][0]] = qe
        diff[gens[t][0]] = le + qe
    ce = CEAlgebra(a, diff, name=name, linear=linear, quadratic=quadratic, dgl=L)
    if check and not ce.d_squared_zero():
        raise DGLError("Chevalley-Eilenberg differential does not square to zero")
    return ce


def baut_model(m: FreeCDGA) -> CEAlgebra:
    """Cochains on the derivation DGL of ``m``."""
    require_valid(m)
    L = der_dgl(m)
    return chevalley_eilenberg(L, name="C*(Der %s)" % (m.name or "M"))
