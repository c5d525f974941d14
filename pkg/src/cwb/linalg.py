"""Exact linear algebra over the fraction field of the parameter ring.

Matrices are handled as lists of sparse rows (``dict`` column -> entry).  An
entry is a ``Fraction`` when it does not involve parameters and a
parameter-only :class:`~cwb.exactpoly.Poly` otherwise.  Elimination is
fraction-free: a non-constant pivot ``p`` is never divided by; it is
multiplied into the rows it eliminates and recorded in ``genericity``, the
list of polynomials that must not vanish for the result to be valid.

Pivot choice is deterministic.  Columns are visited in the requested order;
within a column a rational pivot is preferred, then the lowest-degree
polynomial, ties broken by row position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactpoly import Poly, RatFn, SpecializationError

Row = dict  # column -> Fraction | Poly


def norm(x):
    """Canonical entry: ``Fraction`` for constants, ``Poly`` otherwise."""
    if isinstance(x, Poly):
        if x.is_constant():
            return x.constant_value()
        return x
    if isinstance(x, RatFn):
        if not x.is_poly():
            raise TypeError("rational-function entries must be cleared first")
        return norm(x.num)
    return Fraction(x)


def _is_zero(x) -> bool:
    return (not x) if not isinstance(x, Poly) else x.is_zero()


def _clean(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        v = norm(v)
        if not _is_zero(v):
            out[k] = v
    return out


def _scale(row: Row, s) -> Row:
    return _clean({k: v * s for k, v in row.items()})


def _axpy(row: Row, s, other: Row) -> Row:
    """``row + s*other``."""
    out = dict(row)
    for k, v in other.items():
        w = v * s
        if k in out:
            out[k] = out[k] + w
        else:
            out[k] = w
    return _clean(out)


def _content_row(row: Row, factors: Sequence[Poly]) -> Row:
    """Remove rational content and any recorded pivot factor dividing every entry."""
    if not row:
        return row
    polys = {k: Poly.coerce(v) for k, v in row.items()}
    from math import gcd

    num, den = 0, 1
    for p in polys.values():
        c = p.content()
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    if num and Fraction(num, den) != 1:
        polys = {k: p / Fraction(num, den) for k, p in polys.items()}
    for f in factors:
        while True:
            qs = {}
            for k, p in polys.items():
                q = p.divide_exact(f)
                if q is None:
                    break
                qs[k] = q
            else:
                polys = qs
                continue
            break
    return _clean(polys)


def _pivot_key(x, pos: int):
    if not isinstance(x, Poly):
        return (0, 0, 0, pos)
    return (1, x.degree(), len(x), pos)


def _add_generic(gen: list, p: Poly) -> None:
    p = p.primitive()
    if p not in gen:
        gen.append(p)


@dataclass
class Echelon:
    """Reduced echelon form: ``rows[i]`` has its pivot at ``pivots[i]``."""

    rows: list
    pivots: list
    ncols: int
    genericity: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivot_entry(self, i: int):
        return self.rows[i][self.pivots[i]]

    def reduce(self, vec: Row) -> Row:
        """Eliminate every pivot column from ``vec`` (fraction-free)."""
        v = _clean(vec)
        for c, r in zip(self.pivots, self.rows):
            q = v.get(c)
            if q is None:
                continue
            p = r[c]
            if isinstance(p, Poly):
                v = _axpy(_scale(v, p), -q, r)
                v = _content_row(v, self.genericity)
            else:
                v = _axpy(v, -q / p, r)
        return v


def echelon(rows: Iterable[Mapping], ncols: int, order: Sequence[int] | None = None) -> Echelon:
    """Fraction-free reduced row echelon form with pivot bookkeeping."""
    order = list(order) if order is not None else list(range(ncols))
    seen_cols = set(order)
    order += [c for c in range(ncols) if c not in seen_cols]
    position = {c: i for i, c in enumerate(order)}

    active: list = []
    keys = set()
    for r in rows:
        r = _clean(r)
        if not r:
            continue
        lead = min(r, key=position.__getitem__)
        if not isinstance(r[lead], Poly):
            r = _scale(r, 1 / r[lead])
        key = frozenset(r.items())
        if key in keys:
            continue
        keys.add(key)
        active.append(r)

    gen: list = []
    piv_rows: list = []
    piv_cols: list = []
    for c in order:
        best = None
        best_key = None
        for i, r in enumerate(active):
            x = r.get(c)
            if x is None:
                continue
            k = _pivot_key(x, i)
            if best_key is None or k < best_key:
                best, best_key = i, k
                if k[0] == 0:
                    break
        if best is None:
            continue
        r = active.pop(best)
        p = r[c]
        if isinstance(p, Poly):
            _add_generic(gen, p)
        else:
            r = _scale(r, 1 / p)
            p = Fraction(1)

        def eliminate(s: Row) -> Row:
            q = s[c]
            if isinstance(p, Poly):
                return _content_row(_axpy(_scale(s, p), -q, r), gen)
            return _axpy(s, -q, r)

        nxt = []
        for s in active:
            if c in s:
                s = eliminate(s)
                if not s:
                    continue
            nxt.append(s)
        active = nxt
        for j, s in enumerate(piv_rows):
            if c in s:
                piv_rows[j] = eliminate(s)
        piv_rows.append(r)
        piv_cols.append(c)
        if not active:
            break

    # present rows in column order of their pivots
    idx = sorted(range(len(piv_cols)), key=lambda i: position[piv_cols[i]])
    return Echelon(
        rows=[piv_rows[i] for i in idx],
        pivots=[piv_cols[i] for i in idx],
        ncols=ncols,
        genericity=gen,
    )


@dataclass
class SolutionSpace:
    """Basis of a solution space over Q(params) with its validity conditions.

    Basis vectors are sparse (``dict`` column -> entry) with polynomial
    entries; they satisfy the defining system identically.  ``genericity``
    lists parameter polynomials assumed nonzero during elimination.
    """

    basis: list
    ncols: int
    genericity: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense(self) -> list[list]:
        return [[v.get(c, Fraction(0)) for c in range(self.ncols)] for v in self.basis]


def _nullspace_from(E: Echelon, order: Sequence[int] | None = None) -> list:
    pivset = set(E.pivots)
    cols = list(order) if order is not None else list(range(E.ncols))
    cols += [c for c in range(E.ncols) if c not in set(cols)]
    basis = []
    for f in cols:
        if f in pivset:
            continue
        involved = [(c, r) for c, r in zip(E.pivots, E.rows) if f in r]
        L = Poly.const(1)
        dens = []
        for c, r in involved:
            p = r[c]
            if isinstance(p, Poly) and p not in dens:
                dens.append(p)
                L = L * p
        v = {f: L}
        for c, r in involved:
            p = Poly.coerce(r[c])
            q = L.divide_exact(p)
            if q is None:  # pivot entries are products of recorded factors
                raise ArithmeticError("pivot does not divide the clearing multiplier")
            v[c] = -Poly.coerce(r[f]) * q
        basis.append(_content_row(_clean(v), E.genericity))
    return basis


def nullspace_rows(rows: Iterable[Mapping], ncols: int, order: Sequence[int] | None = None) -> SolutionSpace:
    E = echelon(rows, ncols, order)
    return SolutionSpace(_nullspace_from(E, order), ncols, list(E.genericity))


def rank(rows: Iterable[Mapping], ncols: int) -> int:
    return echelon(rows, ncols).rank


def apply(rows: Sequence[Mapping], vec: Mapping) -> list:
    """Matrix-vector product for sparse rows; entries normalized."""
    out = []
    for r in rows:
        acc = Fraction(0)
        for k, x in r.items():
            y = vec.get(k)
            if y is not None:
                acc = acc + x * y
        out.append(norm(acc))
    return out


def quotient(sub: Sequence[Mapping], space: Sequence[Mapping], ncols: int,
             order: Sequence[int] | None = None) -> tuple[list, list, Echelon]:
    """Representatives of ``span(space) / span(sub)``.

    Each vector of ``space`` is reduced modulo the echelon form of ``sub``;
    the reduced vectors are then put in echelon form themselves.  Returns the
    representatives, the combined genericity list and the echelon form of
    ``sub``.
    """
    Es = echelon(sub, ncols, order)
    reduced = [Es.reduce(v) for v in space]
    Eq = echelon(reduced, ncols, order)
    gen = list(Es.genericity)
    for g in Eq.genericity:
        if g not in gen:
            gen.append(g)
    reps = [_content_row(r, gen) if any(isinstance(x, Poly) for x in r.values()) else r
            for r in Eq.rows]
    return reps, gen, Es


def in_span(vec: Mapping, vectors: Sequence[Mapping], ncols: int) -> bool:
    E = echelon(vectors, ncols)
    return not E.reduce(vec)


def same_span(u: Sequence[Mapping], v: Sequence[Mapping], ncols: int) -> bool:
    ru = rank(u, ncols)
    rv = rank(v, ncols)
    return ru == rv == rank(list(u) + list(v), ncols)


# ---------------------------------------------------------------------------
# affine systems


@dataclass
class AffineSolution:
    """Solution set of an affine system in named unknowns.

    ``dependent`` maps each determined unknown to an expression in the free
    unknowns (as ``RatFn``); ``free`` lists the unconstrained unknowns.
    ``consistent`` is False when the system has no solution generically.
    """

    dependent: dict
    free: list
    genericity: list
    consistent: bool = True


def solve_affine(rows: Sequence[Mapping], unknowns: Sequence[str],
                 prefer_free: str = "first") -> AffineSolution:
    """Solve rows ``{unknown: coeff, None: const}`` meaning ``sum + const = 0``.

    With ``prefer_free="first"`` pivots are taken from the end of
    ``unknowns``, so earlier unknowns stay free.
    """
    idx = {u: i for i, u in enumerate(unknowns)}
    n = len(unknowns)
    num_rows = []
    for r in rows:
        num_rows.append({(n if k is None else idx[k]): v for k, v in r.items()})
    order = list(range(n - 1, -1, -1)) if prefer_free == "first" else list(range(n))
    order.append(n)
    E = echelon(num_rows, n + 1, order)
    if n in E.pivots:
        return AffineSolution({}, list(unknowns), list(E.genericity), consistent=False)
    dependent = {}
    pivset = set(E.pivots)
    for c, r in zip(E.pivots, E.rows):
        p = r[c]
        expr = RatFn(Poly())
        for k, x in r.items():
            if k == c:
                continue
            term = Poly.coerce(x) if k == n else Poly.coerce(x) * Poly.var(unknowns[k])
            expr = expr - RatFn(term)
        dependent[unknowns[c]] = expr / RatFn(Poly.coerce(p))
    free = [u for u in unknowns if idx[u] not in pivset]
    return AffineSolution(dependent, free, list(E.genericity))


# ---------------------------------------------------------------------------
# dense matrix facade


class Mat:
    """Rectangular matrix over Q(params) with exact entries."""

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("Mat rows must have equal length")
        self.ncols = widths.pop() if widths else 0
        self.rows = [[x if isinstance(x, RatFn) else RatFn(Poly.coerce(x)) for x in r] for r in rows]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def specialize(self, assignment: Mapping[str, Fraction]) -> "Mat":
        """Evaluate parameters; raises ``SpecializationError`` on a vanishing denominator."""
        assignment = {k: Fraction(v) for k, v in assignment.items()}
        return Mat([[x.eval_params(assignment) for x in r] for r in self.rows])

    def sparse_rows(self) -> list[Row]:
        out = []
        for r in self.rows:
            dens: list = []
            for x in r:
                if not x.is_poly() and x.den not in dens:
                    dens.append(x.den)
            mult = Poly.const(1)
            for dd in dens:
                mult = mult * dd
            row = {}
            for j, x in enumerate(r):
                if x.is_zero():
                    continue
                val = x.num * mult
                if not x.is_poly():
                    val = val.divide_exact(x.den)
                row[j] = val
            out.append(_clean(row))
        return out

    def nullspace(self) -> SolutionSpace:
        return nullspace_rows(self.sparse_rows(), self.ncols)

    def rank(self) -> int:
        return rank(self.sparse_rows(), self.ncols)


def nullspace(M: Mat) -> SolutionSpace:
    return M.nullspace()


def specialize(M: Mat, assignment: Mapping[str, Fraction]) -> Mat:
    return M.specialize(assignment)


__all__ = [
    "Echelon", "SolutionSpace", "AffineSolution", "Mat", "SpecializationError",
    "echelon", "nullspace", "nullspace_rows", "rank", "quotient", "in_span",
    "same_span", "solve_affine", "specialize", "apply", "norm",
]
