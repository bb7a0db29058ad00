"""Twisted-arrow posets of strong Steiner complexes.

Objects are the boundary-closed basis subsets whose generated subcomplex
admits a cover by a single globe, ordered by inclusion; for one-dimensional
complexes this reproduces the classical twisted-arrow category of the
underlying order, which is also implemented directly as an oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .adc import Adc
from .omega import active_cover


@dataclass(frozen=True)
class InertSubobject:
    members: frozenset
    coverable: bool


def subobjects(x: Adc):
    """All boundary-closed subsets, with their coverability flags.

    Generated by closing downward from each subset of an antichain-free
    enumeration; exponential, meant for small complexes.
    """
    names = x.all_names()
    seen = set()
    out = []
    for r in range(1, len(names) + 1):
        for sub in itertools.combinations(names, r):
            closed = x.closure(sub)
            if closed in seen:
                continue
            seen.add(closed)
    for closed in seen:
        y = x.subcomplex(closed)
        out.append(InertSubobject(closed, active_cover(y) is not None))
    return out


@dataclass
class Poset:
    elements: list
    leq: set          # pairs (i, j) with element i <= element j, reflexive

    def hasse(self):
        strict = {(a, b) for a, b in self.leq if a != b}
        out = []
        for a, b in strict:
            if not any((a, c) in strict and (c, b) in strict
                       for c in range(len(self.elements))
                       if c != a and c != b):
                out.append((a, b))
        return sorted(out)


def twar_poset(x: Adc) -> Poset:
    """The inclusion poset of coverable closed subsets."""
    if not x.is_strong():
        raise ValueError("twisted arrows require a strong complex")
    objs = [s for s in subobjects(x) if s.coverable]
    objs.sort(key=lambda s: sorted(s.members))
    leq = set()
    for i, a in enumerate(objs):
        for j, b in enumerate(objs):
            if a.members <= b.members:
                leq.add((i, j))
    return Poset(objs, leq)


# ---------------------------------------------------------------------------
# the classical construction


def classical_tw(order_pairs, elements) -> Poset:
    """Twisted arrows of a finite poset: objects are relations x <= y,
    with (x, y) -> (x', y') when x' <= x and y <= y'."""
    elements = list(elements)
    rel = set(order_pairs) | {(e, e) for e in elements}
    arrows = sorted((a, b) for a, b in rel)
    leq = set()
    for i, (x, y) in enumerate(arrows):
        for j, (x2, y2) in enumerate(arrows):
            if (x2, x) in rel and (y, y2) in rel:
                leq.add((i, j))
    return Poset(arrows, leq)


def underlying_poset(x: Adc):
    """Objects and order of a complex of dimension <= 1."""
    if x.dim > 1:
        raise ValueError("dimension must be at most one")
    pairs = set()
    points = list(x.basis[0])
    for f in (x.basis[1] if len(x.basis) > 1 else ()):
        for a in x.bd_minus[f].terms:
            for b in x.bd_plus[f].terms:
                pairs.add((a, b))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(pairs), repeat=2):
            if b == c and (a, d) not in pairs:
                pairs.add((a, d))
                changed = True
    return points, pairs


def poset_iso(p: Poset, q: Poset) -> bool:
    """Isomorphism test by backtracking on degree invariants; fine for the
    small posets handled here."""
    n, m = len(p.elements), len(q.elements)
    if n != m:
        return False

    def profile(poset, i):
        below = sum(1 for a, b in poset.leq if b == i)
        above = sum(1 for a, b in poset.leq if a == i)
        return (below, above)

    pprof = [profile(p, i) for i in range(n)]
    qprof = [profile(q, i) for i in range(n)]
    if sorted(pprof) != sorted(qprof):
        return False

    def rec(assign, used):
        i = len(assign)
        if i == n:
            return True
        for j in range(n):
            if j in used or pprof[i] != qprof[j]:
                continue
            good = True
            for k in range(i):
                if ((k, i) in p.leq) != ((assign[k], j) in q.leq):
                    good = False
                    break
                if ((i, k) in p.leq) != ((j, assign[k]) in q.leq):
                    good = False
                    break
            if good:
                assign.append(j)
                used.add(j)
                if rec(assign, used):
                    return True
                assign.pop()
                used.remove(j)
        return False

    return rec([], set())


def compare(x: Adc) -> bool:
    """Twisted arrows of a complex of dimension <= 1 against the classical
    construction on its underlying order."""
    if x.dim > 1:
        raise ValueError("dimension must be at most one")
    points, pairs = underlying_poset(x)
    return poset_iso(twar_poset(x), classical_tw(pairs, points))


def export_dot(p: Poset, label=None) -> str:
    """Deterministic DOT digraph of the Hasse diagram."""
    lines = ["digraph twar {"]
    for i, el in enumerate(p.elements):
        if label is not None:
            text = label(el)
        elif isinstance(el, InertSubobject):
            text = "{" + ",".join(sorted(el.members)) + "}"
        else:
            text = str(el)
        lines.append(f'  n{i} [label="{text}"];')
    for a, b in p.hasse():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)
