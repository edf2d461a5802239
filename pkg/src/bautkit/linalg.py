"""
Exact sparse linear algebra over the rationals.

Vectors are dicts ``{index: coefficient}`` holding no zero entries; a
`RationalMatrix` stores its columns as such vectors (column ``j`` is the
image of the ``j``-th source basis vector).  Elimination is fraction-free:
working vectors are scaled to integers and divided by their content after
every step, and results are brought to reduced echelon form only at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence

Vector = Dict[int, Fraction]


class DimensionError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def clean(v: Dict[int, object]) -> Vector:
    return {i: _as_fraction(c) for i, c in v.items() if c != 0}


def _integral(v: Dict[int, object]) -> Dict[int, int]:
    """Scale ``v`` to a primitive integer vector (positive scale factor)."""
    den = 1
    for c in v.values():
        if isinstance(c, Fraction) and c.denominator != 1:
            den = den * c.denominator // gcd(den, c.denominator)
    out = {i: int(c * den) for i, c in v.items() if c != 0}
    g = 0
    for c in out.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        out = {i: c // g for i, c in out.items()}
    return out


def _primitive(v: Dict[int, int], w: Optional[Dict[int, int]] = None):
    g = 0
    for c in v.values():
        g = gcd(g, c)
        if g == 1:
            return v, w
    if w is not None:
        for c in w.values():
            g = gcd(g, c)
            if g == 1:
                return v, w
    if g > 1:
        v = {i: c // g for i, c in v.items()}
        if w is not None:
            w = {i: c // g for i, c in w.items()}
    return v, w


def _axpy(a: int, v: Dict[int, int], b: int, p: Dict[int, int]) -> Dict[int, int]:
    """Return ``a*v - b*p`` with zeros dropped."""
    out = {i: a * c for i, c in v.items()} if a != 1 else dict(v)
    for i, c in p.items():
        x = out.get(i, 0) - b * c
        if x:
            out[i] = x
        else:
            out.pop(i, None)
    return out


class RationalMatrix:
    """An ``nrows x ncols`` matrix over Q, stored column-sparse."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int, columns: Optional[Sequence[Dict[int, object]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if columns is None:
            columns = [{} for _ in range(ncols)]
        if len(columns) != ncols:
            raise DimensionError("expected %d columns, got %d" % (ncols, len(columns)))
        cols = []
        for col in columns:
            col = clean(col)
            for i in col:
                if not 0 <= i < nrows:
                    raise DimensionError("row index %d out of range for %d rows" % (i, nrows))
            cols.append(col)
        self.columns = tuple(cols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "RationalMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j] != 0} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    def to_rows(self) -> List[List[Fraction]]:
        rows = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                rows[i][j] = c
        return rows

    def apply(self, x: Dict[int, object]) -> Vector:
        out: Dict[int, Fraction] = {}
        for j, c in x.items():
            if not 0 <= j < self.ncols:
                raise DimensionError("vector index %d out of range" % j)
            for i, m in self.columns[j].items():
                out[i] = out.get(i, 0) + c * m
        return clean(out)

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.columns == other.columns)

    def __repr__(self):
        return "RationalMatrix(%d, %d, nnz=%d)" % (
            self.nrows, self.ncols, sum(len(c) for c in self.columns))


class Echelon:
    """
    Incremental column echelon form.

    Each inserted vector is reduced against the stored pivots; survivors become
    new pivots.  With ``track=True`` every stored vector remembers which
    integer combination of the inserted vectors produced it, which is what
    kernels and preimages need.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.pivots: Dict[int, tuple] = {}   # pivot row -> (vec, combo)
        self.count = 0
        self.dependencies: List[Dict[int, int]] = []

    def reduce(self, v: Dict[int, int], combo: Optional[Dict[int, int]] = None):
        pivots = self.pivots
        while v:
            hit = None
            for i in v:
                if i in pivots:
                    hit = i
                    break
            if hit is None:
                return v, combo
            p, pc = pivots[hit]
            a, b = p[hit], v[hit]
            g = gcd(a, b)
            a, b = a // g, b // g
            if a < 0:
                a, b = -a, -b
            v = _axpy(a, v, b, p)
            if combo is not None:
                combo = _axpy(a, combo, b, pc)
            v, combo = _primitive(v, combo)
        return v, combo

    def insert(self, v: Dict[int, object]) -> bool:
        """Insert a vector; return True iff it increased the rank."""
        idx = self.count
        self.count += 1
        w = _integral(v)
        combo = {idx: 1} if self.track else None
        if self.track and w:
            # w == (p/q) v, so q*w == p*v keeps the combination integral
            scale = _scale_between(v, w)
            p, q = scale.numerator, scale.denominator
            if q != 1:
                w = {i: c * q for i, c in w.items()}
            combo = {idx: p}
        w, combo = self.reduce(w, combo)
        if not w:
            if self.track:
                self.dependencies.append(combo)
            return False
        # pivot on the sparsest-looking index: the smallest one keeps order stable
        piv = min(w)
        self.pivots[piv] = (w, combo)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _scale_between(v, w) -> Fraction:
    """Return s with w == s * v for the nonzero vectors v, w."""
    i = next(iter(w))
    return Fraction(w[i]) / _as_fraction(v[i])


def rref(vectors: Iterable[Dict[int, object]]) -> List[Vector]:
    """Reduced echelon basis of the span, ordered by pivot index.

    Each returned vector has leading (smallest) index with coefficient 1 and
    zero entries at every other vector's pivot.
    """
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    rows = []
    for piv in sorted(ech.pivots):
        w = ech.pivots[piv][0]
        rows.append({i: Fraction(c) for i, c in w.items()})
    # make the pivot the leading index, then back-substitute
    rows = _to_leading_form(rows)
    return rows


def _to_leading_form(rows: List[Vector]) -> List[Vector]:
    out: List[Vector] = []
    work = [dict(r) for r in rows]
    # forward pass with leading-index pivots
    pivoted: Dict[int, Vector] = {}
    for r in work:
        r = dict(r)
        while r:
            lead = min(r)
            if lead in pivoted:
                p = pivoted[lead]
                c = r[lead]
                for i, x in p.items():
                    y = r.get(i, 0) - c * x
                    if y:
                        r[i] = y
                    else:
                        r.pop(i, None)
            else:
                c = r[lead]
                r = {i: x / c for i, x in r.items()}
                pivoted[lead] = r
                break
    # backward pass
    leads = sorted(pivoted)
    for lead in reversed(leads):
        p = pivoted[lead]
        for other in leads:
            if other == lead:
                continue
            q = pivoted[other]
            c = q.get(lead)
            if c:
                for i, x in p.items():
                    y = q.get(i, 0) - c * x
                    if y:
                        q[i] = y
                    else:
                        q.pop(i, None)
    for lead in leads:
        out.append(pivoted[lead])
    return out


def rank(m: RationalMatrix) -> int:
    ech = Echelon()
    for col in m.columns:
        ech.insert(col)
    return ech.rank


def rank_of(vectors: Iterable[Dict[int, object]]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank


def kernel_basis(m: RationalMatrix) -> List[Vector]:
    """Basis of ``{x : Mx = 0}`` in reduced echelon form."""
    ech = Echelon(track=True)
    for col in m.columns:
        ech.insert(col)
    return rref(ech.dependencies)


def image_basis(m: RationalMatrix) -> List[Vector]:
    """Basis of the column span in reduced echelon form."""
    return rref(m.columns)


def preimage(m: RationalMatrix, v: Dict[int, object]) -> Optional[Vector]:
    """Some ``x`` with ``Mx = v``, or None when ``v`` is not in the image."""
    for i in v:
        if not 0 <= i < m.nrows:
            raise DimensionError("vector index %d out of range" % i)
    target = clean(v)
    if not target:
        return {}
    ech = Echelon(track=True)
    for col in m.columns:
        ech.insert(col)
    w = _integral(target)
    scale = _scale_between(target, w)
    # reduce t := w; track combination with a sentinel index for the target
    sentinel = m.ncols
    red, combo = ech.reduce(w, {sentinel: 1})
    if red:
        return None
    # 0 = s * w - sum c_j col_j  ->  M x = w / s  with x = -combo/s (excluding sentinel)
    s = combo.get(sentinel, 0)
    x = {j: Fraction(-c, s) for j, c in combo.items() if j != sentinel}
    x = {j: c / scale for j, c in x.items() if c}
    return x


def solve_in_span(vectors: Sequence[Dict[int, object]], v: Dict[int, object]) -> Optional[Vector]:
    """Coefficients ``x`` with ``sum x_j vectors[j] == v``, or None."""
    n = max([max(c) + 1 for c in vectors if c] + [max(v) + 1 if v else 0, 0])
    return preimage(RationalMatrix(n, len(vectors), list(vectors)), v)


def quotient_basis(sub: Sequence[Dict[int, object]], space: Sequence[Dict[int, object]]) -> List[Vector]:
    """
    Representatives for a basis of ``span(space) / span(sub)``.

    ``sub`` must lie in ``span(space)``; the representatives are taken from
    ``space`` in order, so they are deterministic given the inputs.
    """
    ech = Echelon()
    for v in sub:
        ech.insert(v)
    base = ech.rank
    reps = []
    for v in space:
        if ech.insert(v):
            reps.append(clean(v))
    if ech.rank - base != len(reps):
        raise AssertionError("rank bookkeeping failed")
    return reps


def sparse_rank(columns: Iterable[Dict[int, object]]) -> int:
    """
    Rank by sparse elimination with a Markowitz-style pivot choice: the
    sparsest remaining column, and within it the sparsest row, preferring
    entries equal to +-1 so that integer matrices mostly stay integral.
    """
    import heapq

    rows: Dict[int, Dict[int, object]] = {}
    cols: Dict[int, set] = {}
    for j, col in enumerate(columns):
        col = {i: c for i, c in col.items() if c != 0}
        if not col:
            continue
        cols[j] = set(col)
        for i, c in col.items():
            rows.setdefault(i, {})[j] = c
    heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(heap)
    r = 0
    while heap:
        n, pc = heapq.heappop(heap)
        s = cols.get(pc)
        if s is None or len(s) != n:
            if s:
                heapq.heappush(heap, (len(s), pc))
            continue
        best = None
        for i in s:
            v = rows[i][pc]
            key = (0 if v in (1, -1) else 1, len(rows[i]))
            if best is None or key < best[0]:
                best = (key, i)
        pr = best[1]
        prow = rows.pop(pr)
        pv = prow[pc]
        del cols[pc]
        r += 1
        for j in prow:
            if j != pc:
                cols[j].discard(pr)
        for i in s:
            if i == pr:
                continue
            row = rows[i]
            a = row[pc]
            if pv == 1:
                f = a
            elif pv == -1:
                f = -a
            elif isinstance(a, int) and isinstance(pv, int):
                f = Fraction(a, pv)
            else:
                f = a / pv
            for j, c in prow.items():
                if j == pc:
                    continue
                x = row.get(j, 0) - f * c
                if x:
                    if isinstance(x, Fraction) and x.denominator == 1:
                        x = x.numerator
                    if j not in row:
                        cols[j].add(i)
                    row[j] = x
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            del row[pc]
            if not row:
                del rows[i]
        for j in prow:
            if j != pc and j in cols:
                if cols[j]:
                    heapq.heappush(heap, (len(cols[j]), j))
                else:
                    del cols[j]
    return r
