"""
Minimal models of free CDGAs by eliminating contractible pairs, plus
cohomology dimension counts.

Each step takes a generator ``u`` with ``D(u) = c z + r`` (``r`` free of
``z`` by degree reasons) and passes to the quotient by the acyclic ideal
``(u, D u)``: ``u -> 0``, ``z -> -r/c``.  The composite of those quotient
maps is recorded as a projection from the input onto the result.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import Element, GradedAlgebra, Monomial, apply_derivation_terms
from .linalg import Echelon, RationalMatrix, kernel_basis, preimage, rank, sparse_rank
from .model import FreeCDGA, ModelError, SullivanModel


class MinimalizationError(ModelError):
    pass


# -- substitution ------------------------------------------------------------


def substitute(a: GradedAlgebra, terms: Mapping[Monomial, object],
               images: Mapping[int, Mapping[Monomial, object]]) -> Dict[Monomial, object]:
    """Apply the algebra map sending generator ``g`` to ``images[g]`` (identity elsewhere)."""
    out: Dict[Monomial, object] = {}
    powers: Dict[Tuple[int, int], Dict[Monomial, object]] = {}

    def power(g, e):
        key = (g, e)
        p = powers.get(key)
        if p is None:
            p = images[g] if e == 1 else a.mul_terms(power(g, e - 1), images[g])
            powers[key] = p
        return p

    for m, c in terms.items():
        if not any(g in images for g, _ in m):
            x = out.get(m, 0) + c
            if x:
                out[m] = x
            else:
                del out[m]
            continue
        acc = {(): c}
        for g, e in m:
            factor = power(g, e) if g in images else {((g, e),): 1}
            acc = a.mul_terms(acc, factor)
            if not acc:
                break
        for t, x in acc.items():
            y = out.get(t, 0) + x
            if y:
                out[t] = y
            else:
                del out[t]
    return out


# -- results -------------------------------------------------------------------


@dataclass
class Elimination:
    removed: str        # u, the generator sent to zero
    solved: str         # z, the generator solved for
    coefficient: Fraction
    value: str          # image of z in the remaining generators


@dataclass
class LinearPartCheck:
    """Does the projection induce ``H(U, d1) -> W`` and is it bijective?"""
    kills_boundaries: bool
    per_degree: Dict[int, Tuple[int, int, int]]   # degree -> (dim H(U,d1), dim W, rank of induced map)

    @property
    def ok(self) -> bool:
        return self.kills_boundaries and all(h == w == r for h, w, r in self.per_degree.values())

    def as_dict(self):
        return {"ok": self.ok, "kills_boundaries": self.kills_boundaries,
                "per_degree": {k: list(v) for k, v in sorted(self.per_degree.items())}}


@dataclass
class MinimalizationResult:
    model: FreeCDGA
    trace: List[Elimination]
    projection: Dict[str, Element]      # original generator -> element of the result
    verification: LinearPartCheck
    d_squared_zero: bool = True

    @property
    def ok(self) -> bool:
        return self.verification.ok and self.d_squared_zero and self.model.is_decomposable()


def _linear_coeffs(terms: Mapping[Monomial, object]) -> Dict[int, object]:
    return {m[0][0]: c for m, c in terms.items() if len(m) == 1 and m[0][1] == 1}


def minimize(c: FreeCDGA, rng: Optional[random.Random] = None, name: Optional[str] = None,
             normalize: bool = True) -> MinimalizationResult:
    """
    Eliminate contractible pairs until the differential is decomposable.

    With ``rng`` the pair at each step is drawn at random among all legal
    ones; otherwise the lowest-degree generator (then the first one in
    generator order) is used, paired with its first linear term.

    With ``normalize`` the surviving generators are then shifted by
    decomposables, in increasing degree, to cancel the word-length >= 3
    part of their differentials whenever that is possible one generator
    at a time.
    """
    a = c.algebra
    if any(g.degree < 2 for g in a.generators):
        raise MinimalizationError("generators of degree < 2 are not supported")
    if not c.d_squared_zero():
        raise MinimalizationError("D∘D is not zero")
    alive = set(range(len(a)))
    diff: Dict[int, Dict[Monomial, object]] = {g: dict(v) for g, v in enumerate(c._values)}
    proj: Dict[int, Dict[Monomial, object]] = {g: {((g, 1),): 1} for g in range(len(a))}
    trace: List[Elimination] = []
    while True:
        cands = []
        for u in sorted(alive, key=lambda g: (a.degrees[g], g)):
            lin = _linear_coeffs(diff[u])
            if lin:
                cands.append((u, lin))
                if rng is None:
                    break
        if not cands:
            break
        if rng is None:
            u, lin = cands[0]
            z = min(lin)
        else:
            u, lin = rng.choice(cands)
            z = rng.choice(sorted(lin))
        coef = Fraction(lin[z])
        rest = {m: x for m, x in diff[u].items() if m != ((z, 1),)}
        if any(g in (u, z) for m in rest for g, _ in m):
            raise MinimalizationError("linear term is not isolated; degrees below 2?")
        zval = {m: -x / coef for m, x in rest.items()}
        images = {u: {}, z: zval}
        alive -= {u, z}
        for g in alive:
            diff[g] = substitute(a, diff[g], images)
        for g in proj:
            proj[g] = substitute(a, proj[g], images)
        trace.append(Elimination(a.generators[u].name, a.generators[z].name, coef,
                                 str(Element(a, zval))))
    keep = sorted(alive)
    newa = GradedAlgebra([(a.generators[g].name, a.degrees[g]) for g in keep])
    where = {g: i for i, g in enumerate(keep)}

    def move(terms):
        out = {}
        for m, x in terms.items():
            out[tuple((where[g], e) for g, e in m)] = x
        return Element(newa, out)

    if normalize:
        diff, proj = _strip_higher_terms(a, keep, diff, proj)
    cls = type(c) if type(c) in (FreeCDGA, SullivanModel) else FreeCDGA
    model = cls(newa, {a.generators[g].name: move(diff[g]) for g in keep},
                name=name if name is not None else (c.name + " (minimal)" if c.name else ""))
    projection = {a.generators[g].name: move(proj[g]) for g in range(len(a))}
    check = linear_part_check(c, projection, model)
    return MinimalizationResult(model, trace, projection, check, model.d_squared_zero())


def _strip_higher_terms(a: GradedAlgebra, keep: List[int], diff, proj):
    """
    Replace ``v`` by ``v + p`` (``p`` decomposable) so that ``d(v + p)`` is
    quadratic.  Generators below ``v`` already have quadratic differential,
    so ``d`` raises word length by exactly one on them and each word length
    of the excess is solved independently.
    """
    order = sorted(keep, key=lambda g: (a.degrees[g], g))
    done: List[int] = []
    for v in order:
        excess = {m: x for m, x in diff[v].items() if a.mono_length(m) >= 3}
        if excess and all(a.mono_length(m) == 2 for g in done for m in diff[g]):
            p = _solve_excess(a, done, diff, a.degrees[v], excess)
            if p is not None:
                # new v is v + p, so old v = v - p everywhere else
                diff[v] = {m: x for m, x in diff[v].items() if a.mono_length(m) == 2}
                back = {((v, 1),): 1}
                for m, x in p.items():
                    back[m] = back.get(m, 0) - x
                images = {v: back}
                for g in keep:
                    if g != v:
                        diff[g] = substitute(a, diff[g], images)
                for g in proj:
                    proj[g] = substitute(a, proj[g], images)
        done.append(v)
    return diff, proj


def _solve_excess(a: GradedAlgebra, lower: List[int], diff, deg: int, excess) -> Optional[Dict[Monomial, object]]:
    allowed = set(lower)
    bylen: Dict[int, Dict[Monomial, object]] = defaultdict(dict)
    for m, x in excess.items():
        bylen[a.mono_length(m)][m] = x
    values = [diff.get(g) if g in allowed else None for g in range(len(a))]
    out: Dict[Monomial, object] = {}
    for length, target in sorted(bylen.items()):
        src = [m for m in a.monomials_of_degree(deg)
               if a.mono_length(m) == length - 1 and all(g in allowed for g, _ in m)]
        tgt_pos: Dict[Monomial, int] = {}
        cols = []
        for m in src:
            img = apply_derivation_terms(a, values, 1, {m: 1})
            cols.append({tgt_pos.setdefault(t, len(tgt_pos)): x for t, x in img.items()})
        rhs = {}
        for t, x in target.items():
            rhs[tgt_pos.setdefault(t, len(tgt_pos))] = -x
        sol = preimage(RationalMatrix(len(tgt_pos), len(src), cols), rhs)
        if sol is None:
            return None
        for i, x in sol.items():
            out[src[i]] = x
    return out


def linear_part_check(c: FreeCDGA, projection: Mapping[str, Element], target: FreeCDGA) -> LinearPartCheck:
    """
    Exact check that the linear part of the projection kills ``d1``
    boundaries and maps ``H(U, d1)`` isomorphically onto the generators of
    the target, degree by degree.
    """
    a = c.algebra
    ta = target.algebra
    degs = sorted(set(a.degrees) | set(ta.degrees))

    def lin_image(g: int) -> Dict[int, object]:
        return _linear_coeffs(projection[a.generators[g].name].terms)

    kills = True
    for g in range(len(a)):
        d1 = _linear_coeffs(c._values[g])
        acc: Dict[int, object] = defaultdict(int)
        for h, x in d1.items():
            for t, y in lin_image(h).items():
                acc[t] += x * y
        if any(acc.values()):
            kills = False
    per = {}
    for k in degs:
        src = [g for g in range(len(a)) if a.degrees[g] == k]
        below = [g for g in range(len(a)) if a.degrees[g] == k - 1]
        dk = RationalMatrix(len([g for g in range(len(a)) if a.degrees[g] == k + 1]), len(src),
                            [_reindex(_linear_coeffs(c._values[g]), a, k + 1) for g in src])
        cyc = kernel_basis(dk)
        bnd = rank(RationalMatrix(len(src), len(below),
                                  [_reindex(_linear_coeffs(c._values[g]), a, k) for g in below]))
        h = len(cyc) - bnd
        w = sum(1 for d in ta.degrees if d == k)
        ech = Echelon()
        for v in cyc:
            img: Dict[int, object] = defaultdict(int)
            for i, x in v.items():
                for t, y in lin_image(src[i]).items():
                    img[t] += x * y
            ech.insert({t: y for t, y in img.items() if y})
        per[k] = (h, w, ech.rank)
    return LinearPartCheck(kills, per)


def _reindex(vec: Mapping[int, object], a: GradedAlgebra, k: int) -> Dict[int, object]:
    gens = [g for g in range(len(a)) if a.degrees[g] == k]
    loc = {g: i for i, g in enumerate(gens)}
    return {loc[g]: x for g, x in vec.items() if g in loc}


# -- predicates ----------------------------------------------------------------


def _require_minimal(m: FreeCDGA):
    if not m.is_decomposable():
        raise MinimalizationError("input is not minimal: some differential has a linear term")


def is_coformal(m: FreeCDGA) -> bool:
    """Every differential is purely quadratic (zero allowed)."""
    _require_minimal(m)
    return all(not v or v.word_lengths() == {2} for v in m.differential)


def is_zero_differential(m: FreeCDGA) -> bool:
    return all(not v for v in m.differential)


def nonzero_differential_count(m: FreeCDGA) -> int:
    return sum(1 for v in m.differential if v)


# -- cohomology dimensions -------------------------------------------------------


def grading_lattice(c: FreeCDGA) -> List[Tuple[int, ...]]:
    """
    Integer basis of all additive gradings of the generators preserved by
    the differential, returned as one weight vector per generator.  The
    ordinary degree is one of them; the others refine the pieces over
    which ranks are taken.
    """
    a = c.algebra
    n = len(a)
    rows = []
    for g, terms in enumerate(c._values):
        for m in terms:
            row = defaultdict(int)
            for h, e in m:
                row[h] += e
            row[g] -= 1
            if any(row.values()):
                rows.append([row[h] for h in range(n)])
    basis = kernel_basis(RationalMatrix.from_rows(rows)) if rows else [{g: 1} for g in range(n)]
    out = []
    for v in basis:
        den = lcm(*[Fraction(x).denominator for x in v.values()]) if v else 1
        out.append([int(Fraction(v.get(g, 0)) * den) for g in range(n)])
    return [tuple(w[g] for w in out) for g in range(n)]


def hilbert(c: FreeCDGA, N: int, refine: bool = True) -> List[int]:
    """dim H^k(c) for k = 0..N, by exact ranks of D on each graded piece."""
    a = c.algebra
    if not c.d_squared_zero():
        raise MinimalizationError("D∘D is not zero")
    weights = grading_lattice(c) if refine else [()] * len(a)

    def wt(m):
        w = [0] * len(weights[0]) if weights and weights[0] else []
        for g, e in m:
            for i, x in enumerate(weights[g]):
                w[i] += x * e
        return tuple(w)

    pieces: Dict[int, Dict[tuple, List[Monomial]]] = {}

    def split(k):
        if k not in pieces:
            d: Dict[tuple, List[Monomial]] = defaultdict(list)
            for m in a.monomials_of_degree(k) if k >= 0 else ():
                d[wt(m)].append(m)
            pieces[k] = d
        return pieces[k]

    ranks: Dict[int, int] = {}

    def rk(k):
        if k < 0:
            return 0
        if k not in ranks:
            total = 0
            target = split(k + 1)
            for w, monos in split(k).items():
                tgt = target.get(w)
                if not tgt:
                    continue
                pos = {m: i for i, m in enumerate(tgt)}
                cols = []
                for m in monos:
                    img = c.d_terms({m: 1})
                    cols.append({pos[t]: x for t, x in img.items()})
                total += sparse_rank(cols)
            ranks[k] = total
        return ranks[k]

    out = []
    for k in range(N + 1):
        out.append(a.dimension(k) - rk(k) - rk(k - 1))
        pieces.pop(k - 1, None)
    return out
