"""Cells of the strict omega-category presented by a directed complex.

A cell of top dimension n is a tuple (X_0^-, X_0^+, ..., X_{n-1}^-,
X_{n-1}^+, X_n) of non-negative combinations with unit augmentation at the
bottom and matching boundaries between consecutive levels.  Composition,
exhaustive enumeration and the correspondence with morphisms from globes
live here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .adc import Adc, AdcMorphism, Combi, ZERO, globe_adc, globe_names


@dataclass(frozen=True)
class Cell:
    """tables[k] = (X_k^-, X_k^+) for k < top_dim; top = X_{top_dim}."""

    tables: tuple[tuple[Combi, Combi], ...]
    top: Combi
    top_dim: int

    def __post_init__(self):
        assert len(self.tables) == self.top_dim

    def level(self, k: int, sign: str) -> Combi:
        if k == self.top_dim:
            return self.top
        return self.tables[k][0 if sign == "-" else 1]

    def key(self):
        return (tuple((m.key(), p.key()) for m, p in self.tables),
                self.top.key())

    def source(self, i: int) -> "Cell":
        """i-source: truncate to dimension i keeping the minus table on top."""
        assert i < self.top_dim
        return Cell(self.tables[:i], self.tables[i][0], i)

    def target(self, i: int) -> "Cell":
        assert i < self.top_dim
        return Cell(self.tables[:i], self.tables[i][1], i)

    def identity(self) -> "Cell":
        """The identity on this cell, one dimension up."""
        return Cell(self.tables + ((self.top, self.top),), ZERO,
                    self.top_dim + 1)


def validate_cell(x: Adc, c: Cell) -> bool:
    """Unitality at the bottom and the boundary equations at every level."""
    deg = x.degree_of
    for k in range(c.top_dim + 1):
        for sign in ("-", "+"):
            comb = c.level(k, sign)
            if not comb.is_nonneg():
                return False
            if any(deg.get(u) != k for u in comb.terms):
                return False
            if sign == "+" and k == c.top_dim:
                break
    if x.augment(c.level(0, "-")) != 1 or x.augment(c.level(0, "+")) != 1:
        return False
    for k in range(c.top_dim):
        want = c.level(k, "+") - c.level(k, "-")
        for sign in ("-", "+"):
            upper = c.level(k + 1, sign)
            if x.diff(upper, k + 1) != want:
                return False
            if k + 1 == c.top_dim:
                break
    return True


def atom_cell(x: Adc, name: str) -> Cell:
    atom = x.atom(name)
    return Cell(atom.levels, atom.top, atom.top_dim)


def identity_cell(x: Adc, point: str) -> Cell:
    return Cell((), Combi.unit(point), 0)


class NotComposable(ValueError):
    pass


def compose(i: int, x_cell: Cell, y_cell: Cell) -> Cell:
    """The i-composition: add tables above level i, keep X's minus and Y's
    plus at level i, and require agreement at and below level i."""
    if x_cell.top_dim != y_cell.top_dim:
        raise NotComposable("cells must share their top dimension")
    n = x_cell.top_dim
    if not 0 <= i < n:
        raise NotComposable("composition level out of range")
    for k in range(i):
        if x_cell.tables[k] != y_cell.tables[k]:
            raise NotComposable(f"tables differ at level {k}")
    if x_cell.level(i, "+") != y_cell.level(i, "-"):
        raise NotComposable(f"boundary mismatch at level {i}")
    tables = list(x_cell.tables[:i])
    tables.append((x_cell.level(i, "-"), y_cell.level(i, "+")))
    for k in range(i + 1, n):
        tables.append((x_cell.level(k, "-") + y_cell.level(k, "-"),
                       x_cell.level(k, "+") + y_cell.level(k, "+")))
    return Cell(tuple(tables), x_cell.top + y_cell.top, n)


def _bounded_splits(x: Adc, degree: int, delta: Combi, max_coeff: int):
    """All pairs (minus, plus) of non-negative combinations with
    plus - minus = delta and coefficients <= max_coeff."""
    pos = delta.positive_part()
    neg = delta.negative_part()
    pool = [n for n in (x.basis[degree] if degree < len(x.basis) else ())]
    slack = []
    for n in pool:
        base = max(pos.terms.get(n, 0), neg.terms.get(n, 0))
        slack.append(range(0, max_coeff - base + 1) if base <= max_coeff
                     else None)
    if any(s is None for s in slack):
        return
    for extra in itertools.product(*slack):
        e = Combi({n: c for n, c in zip(pool, extra)})
        yield neg + e, pos + e


def enumerate_cells(x: Adc, dim: int, max_coeff: int = 1,
                    require_strong: bool = True) -> list[Cell]:
    """All valid cells of the given top dimension.

    The default searches 0/1 coefficient vectors only, which is complete
    for strong Steiner complexes (images of globes have multiplicity one);
    non-strong inputs are rejected unless the caller opts out.  Larger
    ``max_coeff`` gives the unrestricted small-coefficient oracle.
    """
    if require_strong and not x.is_strong():
        raise ValueError("enumeration bound is only justified for strong "
                         "Steiner complexes")
    out = []
    pool = list(x.basis[dim]) if dim < len(x.basis) else []

    def descend(k: int, upper_minus: Combi, upper_plus: Combi, acc):
        """Choose tables at level k given level k+1; acc collects downward."""
        delta = x.diff(upper_minus, k + 1)
        if delta != x.diff(upper_plus, k + 1):
            return
        for minus, plus in _bounded_splits(x, k, delta, max_coeff):
            acc.append((minus, plus))
            if k == 0:
                if x.augment(minus) == 1 and x.augment(plus) == 1:
                    tables = tuple(reversed(acc))
                    yield tables
            else:
                yield from descend(k - 1, minus, plus, acc)
            acc.pop()

    tops = []
    for r in range(len(pool) + 1):
        for sub in itertools.combinations(pool, r):
            tops.append(Combi({n: 1 for n in sub}))
    if max_coeff > 1:
        tops = [Combi(dict(zip(pool, cs)))
                for cs in itertools.product(range(max_coeff + 1),
                                            repeat=len(pool))]
    for top in tops:
        if dim == 0:
            if top.is_nonneg() and x.augment(top) == 1:
                out.append(Cell((), top, 0))
            continue
        for tables in descend(dim - 1, top, top, []):
            out.append(Cell(tables, top, dim))
    seen = set()
    unique = []
    for c in out:
        if c.key() not in seen:
            seen.add(c.key())
            unique.append(c)
    if max_coeff == 1 and require_strong:
        for c in unique:
            for k in range(c.top_dim + 1):
                for sign in ("-", "+"):
                    comb = c.level(k, sign)
                    assert all(v == 1 for v in comb.terms.values()), \
                        "strong Steiner cells must have 0/1 coefficients"
                    if k == c.top_dim:
                        break
    return unique


def cell_to_morphism(x: Adc, c: Cell) -> AdcMorphism:
    """The classifying morphism from the top_dim-globe."""
    assert validate_cell(x, c), "cell must be valid"
    levels, topname = globe_names(c.top_dim)
    images = {}
    for q, (mname, pname) in enumerate(levels):
        images[mname] = c.level(q, "-")
        images[pname] = c.level(q, "+")
    images[topname] = c.top
    return AdcMorphism(globe_adc(c.top_dim), x, images)


def morphism_to_cell(f: AdcMorphism) -> Cell:
    """Inverse of cell_to_morphism; the source must be a globe."""
    k = f.source.dim
    levels, topname = globe_names(k)
    tables = tuple((f(mname), f(pname)) for mname, pname in levels)
    return Cell(tables, f(topname), k)


def maximal_cell(x: Adc, dim: int | None = None) -> Cell | None:
    """The everything-at-once cell: extremal sums at every level, the full
    top; None when that tuple is not a valid cell.

    For complexes that admit a cover by a single globe this is the unique
    active cell.
    """
    d = x.dim if dim is None else dim
    tables = []
    for k in range(min(d, x.dim)):
        tables.append((Combi({n: 1 for n in x.extremal(k, "-")}),
                       Combi({n: 1 for n in x.extremal(k, "+")})))
    if d <= x.dim:
        top = Combi({n: 1 for n in x.basis[d]})
    else:
        full = Combi({n: 1 for n in x.basis[x.dim]})
        tables.append((full, full))
        tables.extend((ZERO, ZERO) for _ in range(x.dim + 1, d))
        top = ZERO
    c = Cell(tuple(tables), top, d)
    return c if validate_cell(x, c) else None


def active_cover(x: Adc, dim: int | None = None) -> AdcMorphism | None:
    """The active morphism from a globe covering every basis element, if one
    exists (decided constructively via the everything-at-once cell)."""
    c = maximal_cell(x, dim)
    if c is None:
        return None
    f = cell_to_morphism(x, c)
    return f if f.is_active() else None
