"""
Decision procedures assembled into reports with tri-state verdicts.

A verdict is "yes" or "no" only when it carries a checkable witness;
sufficient conditions that fail yield "undecided".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set

from .algebra import Element, GradedAlgebra, Monomial, apply_derivation_terms
from .derivation import (
    BLOCK_A,
    DerHomology,
    Derivation,
    block_of,
    der_homology,
    sphere_split,
)
from .dgl import CEAlgebra, baut_model
from .linalg import kernel_basis, rank_of, solve_in_span
from .minimal import (
    MinimalizationResult,
    hilbert,
    is_coformal,
    is_zero_differential,
    linear_part_check,
    minimize,
    nonzero_differential_count,
)
from .model import (
    FreeCDGA,
    ModelError,
    cohomology,
    ideal_membership,
    product_model,
    require_valid,
    sphere_model,
)

YES, NO, UNDECIDED = "yes", "no", "undecided"


class ShapeError(ModelError):
    pass


@dataclass
class Verdict:
    value: str
    witness: object = None

    def __post_init__(self):
        if self.value not in (YES, NO, UNDECIDED):
            raise ValueError("bad verdict %r" % self.value)
        if self.value != UNDECIDED and self.witness is None:
            raise ValueError("a decided verdict needs a witness")

    def __bool__(self):
        return self.value == YES

    def as_dict(self):
        return {"value": self.value, "witness": to_plain(self.witness)}


def to_plain(x):
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (Element, Derivation)):
        return str(x)
    return x


@dataclass
class DiagnosisReport:
    title: str
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    data: Dict[str, object] = field(default_factory=dict)

    def __getitem__(self, key) -> str:
        return self.verdicts[key].value

    def witness(self, key):
        return self.verdicts[key].witness

    def as_dict(self):
        return {"title": self.title,
                "verdicts": {k: v.as_dict() for k, v in self.verdicts.items()},
                "data": to_plain(self.data)}


def _yn(flag: bool, yes_witness, no_witness) -> Verdict:
    return Verdict(YES, yes_witness) if flag else Verdict(NO, no_witness)


# -- polynomial cohomology ----------------------------------------------------


def polynomial_check(m: FreeCDGA, homology: Optional[DerHomology] = None) -> DiagnosisReport:
    """Cohomology of the classifying space is polynomial iff derivation
    homology vanishes in even degrees."""
    require_valid(m)
    h = homology or der_homology(m)
    rep = DiagnosisReport("polynomial check")
    even = [c for c in h.all_classes() if c.degree % 2 == 0]
    if even:
        c = even[0]
        rep.verdicts["polynomial"] = Verdict(NO, {"degree": c.degree, "class": c.label})
    else:
        rep.verdicts["polynomial"] = Verdict(YES, {"odd_classes": [[c.degree, c.label] for c in h.all_classes()]})
    rep.data["der_homology_dims"] = h.dims()
    rep.data["homotopy_degrees"] = sorted(c.degree + 1 for c in h.all_classes())
    return rep


# -- the pure (2,3) criterion -----------------------------------------------------


@dataclass
class Pure23Shape:
    x1: int
    x2: int
    y: List[int]


def _pure23_shape(m: FreeCDGA) -> Pure23Shape:
    a = m.algebra
    evens = [g for g in a.generators if not g.odd]
    odds = [g for g in a.generators if g.odd]
    if len(evens) != 2 or len(odds) != 3:
        raise ShapeError("need two even and three odd generators, got %d and %d" % (len(evens), len(odds)))
    evens.sort(key=lambda g: g.degree)
    odds.sort(key=lambda g: g.degree)
    even_idx = {g.index for g in evens}
    for g in evens:
        if m.differential[g.index]:
            raise ShapeError("even generator %s has nonzero differential" % g.name)
    for g in odds:
        if not m.differential[g.index].generators_used() <= even_idx:
            raise ShapeError("d(%s) is not a polynomial in the even generators" % g.name)
    return Pure23Shape(evens[0].index, evens[1].index, [g.index for g in odds])


def partial(e: Element, gen: int) -> Element:
    """Partial derivative of a polynomial in even generators."""
    a = e.algebra
    if a.odd[gen]:
        raise ValueError("partial derivatives are taken along even generators")
    vals = [None] * len(a)
    vals[gen] = {(): 1}
    return Element(a, apply_derivation_terms(a, vals, 0, e.terms))


def pure23_criterion(m: FreeCDGA, homology: Optional[DerHomology] = None) -> DiagnosisReport:
    """
    Non-polynomiality for models on x1, x2 (even) and y1, y2, y3 (odd) with
    dy_i in Q[x1, x2]: an odd class below |y3|, or the divisibility
    condition on partial derivatives when |x1| < |x2|.  Non-formality of the
    input is taken on trust.
    """
    require_valid(m)
    sh = _pure23_shape(m)
    a = m.algebra
    rep = DiagnosisReport("pure (2,3) criterion")
    rep.data["nonformal_assumed"] = True
    dx1, dx2 = a.degrees[sh.x1], a.degrees[sh.x2]
    ydeg = [a.degrees[i] for i in sh.y]
    f = [m.differential[i] for i in sh.y]

    # condition I
    basis = cohomology(m)
    witness_I = None
    for k in range(1, min(ydeg[2], basis.max_degree + 1)):
        if k % 2 == 0:
            continue
        for w in basis.degree_basis(k):
            witness_I = (k, w)
            break
        if witness_I:
            break
    if witness_I:
        k, w = witness_I
        rep.verdicts["condition_I"] = Verdict(YES, {"degree": k, "cocycle": str(w)})
    else:
        rep.verdicts["condition_I"] = Verdict(NO, {"odd_cohomology_below": ydeg[2], "dims": basis.dims()[:ydeg[2]]})

    # condition II
    x1 = a.gens()[sh.x1]
    reason = None
    hit = None
    if dx1 == dx2:
        reason = "inapplicable: |x1| = |x2|"
    else:
        terms = f[0].terms
        l = None
        if len(terms) == 1:
            (mono, c), = terms.items()
            if len(mono) == 1 and mono[0][0] == sh.x1:
                l = mono[0][1]
        if l is None or l < 2:
            reason = "d(y1) is not a power x1^l with l > 1"
        else:
            rep.data["l"] = l
            tried = []
            k = 1
            while k < l and k * dx1 < dx2:
                p2 = partial(f[1], sh.x2) * x1 ** k
                p3 = partial(f[2], sh.x2) * x1 ** k
                m2 = ideal_membership(p2, [f[0]])
                m3 = ideal_membership(p3, [f[0], f[1]]) if m2 else None
                tried.append(k)
                if m2 and m3:
                    hit = {"l": l, "k": k,
                           "first": {"element": str(p2), "ideal": [str(f[0])],
                                     "certificate": [str(x) for x in m2.certificate]},
                           "second": {"element": str(p3), "ideal": [str(f[0]), str(f[1])],
                                      "certificate": [str(x) for x in m3.certificate]}}
                    break
                k += 1
            if hit is None:
                reason = "no k in %s satisfies both memberships" % tried
    if hit:
        rep.verdicts["condition_II"] = Verdict(YES, hit)
    else:
        rep.verdicts["condition_II"] = Verdict(NO, reason)

    notpoly = rep["condition_I"] == YES or rep["condition_II"] == YES
    rep.verdicts["not_polynomial"] = Verdict(YES if notpoly else NO,
                                             "condition I" if rep["condition_I"] == YES else
                                             "condition II" if notpoly else "neither condition holds")
    pc = polynomial_check(m, homology)
    rep.data["polynomial_check"] = pc["polynomial"]
    rep.data["agrees_with_polynomial_check"] = (pc["polynomial"] == NO) == notpoly
    return rep


def verify_membership_witness(m: FreeCDGA, w: dict) -> bool:
    """Re-multiply an ideal-membership certificate from a condition-II witness."""
    from .dsl import parse_expr

    a = m.algebra
    elem = parse_expr(w["element"], a)
    gens = [parse_expr(s, a) for s in w["ideal"]]
    cert = [parse_expr(s, a) for s in w["certificate"]]
    total = a.zero()
    for h, g in zip(cert, gens):
        total = total + h * g
    return total == elem


# -- coformality ---------------------------------------------------------------------


def quadratic_part(m: FreeCDGA) -> FreeCDGA:
    return FreeCDGA(m.algebra, {g.name: v.part(2) for g, v in zip(m.generators, m.differential)})


def coformality(minimal: FreeCDGA, N: Optional[int] = None) -> Verdict:
    """
    "yes" when the computed presentation is purely quadratic; "no" when the
    cohomology of the quadratic part differs from that of the model,
    which no isomorphism could allow.
    """
    if is_coformal(minimal):
        return Verdict(YES, "differential is purely quadratic in the computed presentation")
    q = quadratic_part(minimal)
    if N is None:
        N = 2 * max(minimal.algebra.degrees) + 2
    h1 = hilbert(minimal, N)
    h2 = hilbert(q, N)
    for k, (x, y) in enumerate(zip(h1, h2)):
        if x != y:
            return Verdict(NO, {"degree": k, "dim_H": x, "dim_H_quadratic_part": y})
    return Verdict(UNDECIDED)


# -- the full pipeline ------------------------------------------------------------


@dataclass
class BautBundle:
    model: FreeCDGA
    homology: DerHomology
    ce: CEAlgebra
    minimal: MinimalizationResult
    coformal: Verdict
    free: bool
    hilbert: Optional[List[int]] = None

    @property
    def homotopy_dims(self) -> Dict[int, int]:
        return {k + 1: v for k, v in self.homology.dims().items()}

    def as_dict(self):
        mm = self.minimal.model
        out = {
            "der_homology_dims": self.homology.dims(),
            "homotopy_dims": self.homotopy_dims,
            "ce_generators": len(self.ce.generators),
            "minimal_degrees": sorted(mm.degree_multiset()),
            "nonzero_differentials": nonzero_differential_count(mm),
            "coformal": self.coformal.as_dict(),
            "free": self.free,
            "linear_part_check": self.minimal.verification.ok,
        }
        if self.hilbert is not None:
            out["hilbert"] = self.hilbert
        return out


def baut(m: FreeCDGA, hilbert_degree: Optional[int] = None) -> BautBundle:
    require_valid(m)
    h = der_homology(m)
    ce = baut_model(m)
    res = minimize(ce)
    mm = res.model
    cof = coformality(mm)
    hs = hilbert(mm, hilbert_degree) if hilbert_degree is not None else None
    return BautBundle(m, h, ce, res, cof, is_zero_differential(mm), hs)


# -- products with odd spheres ----------------------------------------------------


def _uses(mono: Monomial, idx: Set[int]) -> bool:
    return any(g in idx for g, _ in mono)


def _in_ideal(e: Element, idx: Set[int]) -> bool:
    return all(_uses(m, idx) for m in e.terms)


def _in_subalgebra(e: Element, idx: Set[int]) -> bool:
    return all(all(g in idx for g, _ in m) for m in e.terms)


def _drop(e: Element, idx: Set[int], target: GradedAlgebra, where: Dict[int, int]) -> Element:
    """Image in the quotient by the ideal of the generators ``idx``."""
    out = {}
    for m, c in e.terms.items():
        if not _uses(m, idx):
            out[tuple((where[g], x) for g, x in m)] = c
    return Element(target, out)


@dataclass
class RetractAnalysis:
    retract: List[str]           # surviving generators dual to the retract's homotopy
    model_of_inclusion: bool     # the quotient by the other survivors models the inclusion
    reasons: List[str]
    rational_retraction: Verdict
    rational_factor: Verdict
    weak_retraction: Verdict


def _derivation_block(sigma: Derivation, u: int) -> str:
    blocks = {block_of(u, e) for e in sigma.terms()}
    if len(blocks) != 1:
        raise AssertionError("derivation mixes blocks")
    return blocks.pop()


def _retract(ce: CEAlgebra, res: MinimalizationResult, sub: Set[int], homology: DerHomology,
             image: Dict[int, List[dict]]) -> RetractAnalysis:
    """
    ``sub`` indexes the CE generators dual to a sub-DGL of derivations
    modelling the smaller classifying space; ``image`` spans the image of
    its homology, degree by degree, in class coordinates.
    """
    a = ce.algebra
    mm = res.model
    ma = mm.algebra
    names = {g.name for g in ma.generators}
    sub_names = {a.generators[i].name for i in sub}
    S = {ma.index[n] for n in names & sub_names}
    U = set(range(len(ma))) - S
    reasons = []
    # the sub-DGL must be closed: D of the complementary generators stays in their ideal
    comp = set(range(len(a))) - sub
    closed = all(_in_ideal(ce.differential[i], comp) for i in comp)
    if not closed:
        reasons.append("derivations of the retract do not form a sub-DGL")
    kills = all(_in_ideal(res.projection[a.generators[i].name], U) for i in comp)
    if not kills:
        reasons.append("projection does not carry the complementary ideal into the ideal of U")
    ideal_ok = all(_in_ideal(mm.differential[g], U) for g in U)
    if not ideal_ok:
        reasons.append("D(U) is not inside the ideal of U")
    iso = False
    if closed and kills and ideal_ok:
        keep = sorted(sub)
        qa = GradedAlgebra([(a.generators[i].name, a.degrees[i]) for i in keep])
        qwhere = {g: i for i, g in enumerate(keep)}
        qmodel = FreeCDGA(qa, {a.generators[g].name: _drop(ce.differential[g], comp, qa, qwhere) for g in keep})
        skeep = sorted(S)
        sa = GradedAlgebra([(ma.generators[i].name, ma.degrees[i]) for i in skeep])
        swhere = {g: i for i, g in enumerate(skeep)}
        target = FreeCDGA(sa, {ma.generators[g].name: _drop(mm.differential[g], U, sa, swhere) for g in skeep})
        proj = {a.generators[g].name: _drop(res.projection[a.generators[g].name], U, sa, swhere) for g in keep}
        chk = linear_part_check(qmodel, proj, target)
        iso = chk.ok
        if not iso:
            reasons.append("induced map on the retract is not a quasi-isomorphism")
    model_ok = closed and kills and ideal_ok and iso
    sname = sorted(ma.generators[g].name for g in S)

    wr_obstruction = _weak_obstruction(homology, image)
    f_obstruction = _ideal_obstruction(homology, image)

    # rational retraction
    if model_ok and all(_in_subalgebra(mm.differential[g], S) for g in S):
        r = Verdict(YES, "D maps the retract generators %s into their own subalgebra" % sname)
    elif wr_obstruction:
        r = Verdict(NO, {"via": "weak retraction obstruction", **wr_obstruction})
    elif model_ok and all(not _drop(mm.differential[g], U, ma, {i: i for i in range(len(ma))}) for g in S):
        missing = _retraction_cohomology_gap(mm, S, U)
        r = Verdict(NO, missing) if missing else Verdict(YES, "every retract generator lifts to a cocycle")
    else:
        r = Verdict(UNDECIDED)

    # weak retraction
    if r.value == YES:
        wr = Verdict(YES, "implied by a rational retraction")
    elif model_ok and all(_in_subalgebra(mm.differential[g].part(2), S) for g in S):
        wr = Verdict(YES, "quadratic part of D on %s lies in their own subalgebra" % sname)
    elif wr_obstruction:
        wr = Verdict(NO, wr_obstruction)
    else:
        wr = Verdict(UNDECIDED)

    # rational factor
    if r.value == YES and model_ok and all(_in_subalgebra(mm.differential[g], U) for g in U) \
            and all(_in_subalgebra(mm.differential[g], S) for g in S):
        f = Verdict(YES, "D splits along the retract generators %s and the rest" % sname)
    elif r.value == NO:
        f = Verdict(NO, "no rational retraction")
    elif f_obstruction:
        f = Verdict(NO, f_obstruction)
    else:
        f = Verdict(UNDECIDED)
    return RetractAnalysis(sname, model_ok, reasons, r, f, wr)


def _cls_label(h: DerHomology, key) -> str:
    return h.classes[key[0]][key[1]].label


def _span_meets(a: List[dict], b: List[dict]) -> bool:
    return bool(a) and bool(b) and rank_of(a) + rank_of(b) > rank_of(a + b)


def _weak_obstruction(h: DerHomology, image: Dict[int, List[dict]]):
    """
    A retraction of graded Lie algebras kills every bracket with a factor
    in a degree where the retract vanishes; if such brackets reach the
    image, there is none.
    """
    present = {k for k, v in image.items() if v}
    J: Dict[int, List[dict]] = {}
    pairs: Dict[int, list] = {}
    for (p, q), val in h.structure_constants.items():
        if p[0] in present and q[0] in present:
            continue
        k = p[0] + q[0]
        J.setdefault(k, []).append(val)
        pairs.setdefault(k, []).append([_cls_label(h, p), _cls_label(h, q)])
    for k in sorted(J):
        if _span_meets(J[k], image.get(k, [])):
            return {"degree": k, "brackets": pairs[k],
                    "reason": "brackets through degrees missing from the retract hit its image"}
    return None


def _ideal_obstruction(h: DerHomology, image: Dict[int, List[dict]]):
    """A factor is an ideal: report [s, x] leaving the image."""
    consts = h.structure_constants
    for k, vecs in sorted(image.items()):
        for v in vecs:
            for c in h.all_classes():
                out: Dict[int, object] = {}
                for i, x in v.items():
                    for t, y in consts.get(((k, i), (c.degree, c.index)), {}).items():
                        out[t] = out.get(t, 0) + x * y
                out = {t: y for t, y in out.items() if y}
                if not out:
                    continue
                target = image.get(k + c.degree, [])
                if not target or solve_in_span(target, out) is None:
                    return {"retract_class": str(h.class_element(k, [v.get(j, 0) for j in range(len(h.classes[k]))])),
                            "other": c.label, "degree": k + c.degree,
                            "reason": "bracket with the retract leaves its image"}
    return None


def _retraction_cohomology_gap(mm: FreeCDGA, S: Set[int], U: Set[int]):
    """
    With the retract's induced differential zero, a retraction exists iff
    every retract generator is the image of a cocycle under the quotient
    by the ideal of U.  Returns a witness of failure, or None.
    """
    a = mm.algebra
    for g in sorted(S):
        k = a.degrees[g]
        z = kernel_basis(mm.differential_matrix(k))
        basis = a.monomials_of_degree(k)
        images = []
        for v in z:
            img = {}
            for i, c in v.items():
                if not _uses(basis[i], U):
                    img[i] = c
            images.append(img)
        target = {a.position(k)[((g, 1),)]: 1}
        if solve_in_span(images, target) is None:
            return {"generator": a.generators[g].name, "degree": k,
                    "reason": "no cocycle restricts to this generator"}
    return None


def sphere_product_report(m: FreeCDGA, n: int, coformal_degree: Optional[int] = None) -> DiagnosisReport:
    require_valid(m)
    if n % 2 == 0:
        raise ModelError("only odd spheres are supported")
    p = product_model(m, sphere_model(n))
    split = sphere_split(m, n, p)
    h = split.homology
    ce = baut_model(p)
    res = minimize(ce)
    mm = res.model
    u = len(p.generators) - 1
    rep = DiagnosisReport("X x S^%d" % n)
    rep.data["n"] = n
    rep.data["rank"] = len(mm.generators)
    rep.data["minimal_degrees"] = sorted(mm.degree_multiset())
    rep.data["block_dims"] = split.dims
    rep.data["minimal"] = mm.describe()
    rep.data["minimal_generators"] = [{"name": g.name, "degree": g.degree, "d": str(v) if v else "0"}
                                      for g, v in zip(mm.generators, mm.differential)]
    free = is_zero_differential(mm)
    rep.verdicts["H*_free"] = _yn(free, "minimal model has zero differential",
                                  "minimal model has nonzero differential (unique up to isomorphism)")
    rep.verdicts["coformal"] = coformality(mm, coformal_degree)
    rep.verdicts["formal"] = Verdict(YES, "zero differential") if free else Verdict(UNDECIDED)
    rep.verdicts["wr_X_sufficient"] = Verdict(YES, "[B,C] = 0") if split.wr_X_sufficient else Verdict(UNDECIDED)
    rep.verdicts["wr_Sn_sufficient"] = Verdict(YES, "[A,C] = 0") if split.wr_Sn_sufficient else Verdict(UNDECIDED)
    if split.abelian:
        quad = all(not v.part(2) for v in mm.differential)
        if not quad:
            raise AssertionError("abelian homotopy Lie algebra but quadratic terms present")
        rep.verdicts["no_quadratic_part"] = Verdict(YES, "[A,A] = [A,C] = [B,C] = 0")
    else:
        rep.verdicts["no_quadratic_part"] = Verdict(UNDECIDED)

    L = ce.dgl
    blocks = [_derivation_block(s, u) for s in L.derivations]
    sub_X = {i for i, b in enumerate(blocks) if b == BLOCK_A}
    sub_S = {i for i, s in enumerate(L.derivations) if s == Derivation.elementary(p, u, ())}
    img_X: Dict[int, List[dict]] = {}
    for c in h.all_classes():
        if c.block == BLOCK_A:
            img_X.setdefault(c.degree, []).append({c.index: 1})
    unit = Derivation.elementary(p, u, ())
    coords = h.coordinates(unit)
    img_S = {n: [{j: x for j, x in enumerate(coords) if x}]} if any(coords) else {}
    rx = _retract(ce, res, sub_X, h, img_X)
    rs = _retract(ce, res, sub_S, h, img_S)
    for tag, ra in (("X", rx), ("Sn", rs)):
        rep.verdicts["r_%s_structural" % tag] = ra.rational_retraction
        rep.verdicts["f_%s_structural" % tag] = ra.rational_factor
        rep.data["retract_%s" % tag] = {"generators": ra.retract, "model_of_inclusion": ra.model_of_inclusion,
                                        "reasons": ra.reasons}
    # combined table columns
    for tag, ra, suff in (("X", rx, rep.verdicts["wr_X_sufficient"]), ("Sn", rs, rep.verdicts["wr_Sn_sufficient"])):
        wr = ra.weak_retraction
        if wr.value == UNDECIDED and suff.value == YES:
            wr = suff
        rep.verdicts["wr_%s" % tag] = wr
        rep.verdicts["r_%s" % tag] = ra.rational_retraction
        rep.verdicts["f_%s" % tag] = ra.rational_factor
    return rep
