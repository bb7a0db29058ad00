"""Morphisms between strong Steiner complexes.

Classification into active and inert parts, the image factorization,
segment preimages, the ladder of j-active levels for globe-classified
cells, and the extension algorithms that raise the level one step at a
time until a zig-zag of staircase pieces covers the whole target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adc import Adc, AdcMorphism, Combi, ZERO, globe_adc, globe_names, pushout
from .omega import (Cell, active_cover, cell_to_morphism, compose,
                    morphism_to_cell, validate_cell)
from . import theta


@dataclass(frozen=True)
class MorphismClass:
    active: bool
    inert: bool
    injective_on_basis: bool

    def __post_init__(self):
        if self.inert:
            assert self.injective_on_basis, "inert morphisms are injective"


def image_subcomplex(f: AdcMorphism) -> Adc:
    return f.target.subcomplex(f.target.closure(f.image_support()))


def classify(f: AdcMorphism) -> MorphismClass:
    inert = f.is_inert()
    inj = f.is_injective_on_basis()
    if inert and not inj:
        inert = False
    return MorphismClass(f.is_active(), inert and inj, inj)


def classify_and_factor(f: AdcMorphism):
    """(class, active part, inert part) with f = inert o active.

    The middle object is the subcomplex of basis elements appearing in
    images, which is again strong Steiner when the endpoints are.
    """
    for end in (f.source, f.target):
        if not end.is_strong():
            raise ValueError("classification requires strong endpoints")
    mid = image_subcomplex(f)
    act = AdcMorphism(f.source, mid, dict(f.images), check=False)
    assert not act.validate()
    incl = AdcMorphism(mid, f.target,
                       {n: Combi.unit(n) for n in mid.all_names()},
                       check=False)
    assert act.is_active()
    return classify(f), act, incl


def preimage_segment(f: AdcMorphism, b: str) -> list[str]:
    """Basis elements mapping exactly onto b, listed in the total order;
    contiguity in that order is asserted."""
    if b not in f.target.degree_of:
        raise KeyError(b)
    unit = Combi.unit(b)
    hits = [c for c in f.source.all_names() if f(c) == unit]
    order = f.source.linear_order()
    assert order is not None, "source must be linearly ordered"
    pos = {n: i for i, n in enumerate(order)}
    hits.sort(key=pos.get)
    if hits:
        lo, hi = pos[hits[0]], pos[hits[-1]]
        span = [order[i] for i in range(lo, hi + 1)]
        assert span == hits, f"preimage of {b} is not a segment"
    return hits


# ---------------------------------------------------------------------------
# j-active levels


def _extended_reach(x: Adc, level: int):
    """Reachability for the one-step order at the given level, comparing
    all elements of degree >= level (an element of degree exactly the level
    counts as its own atom level)."""
    pairs = x.order_onestep(level, extended=True)
    names = [n for q in range(level, len(x.basis)) for n in x.basis[q]]
    return Adc._closure(pairs, names)


def _image_of_restriction(f: AdcMorphism, cell: Cell, q: int, sign: str):
    """Basis subset generated by the restriction of a globe-classified
    morphism to its (q, sign) boundary globe."""
    names = set()
    for r in range(q):
        for s in ("-", "+"):
            names |= cell.level(r, s).support()
    names |= cell.level(q, sign).support()
    return f.target.closure(names)


def j_active_level(f: AdcMorphism) -> int:
    """Largest j such that the image of each (j, sign) boundary globe is the
    matching boundary subcomplex of the target; -1 when only the vacuous
    level holds.  The source must be a globe."""
    x = f.target
    n = f.source.dim
    if f.source.basis != globe_adc(n).basis:
        raise ValueError("source must be a globe complex")
    cell = morphism_to_cell(f)
    level = -1
    for j in range(n):
        ok = True
        for sign in ("-", "+"):
            if j >= x.dim:
                want = frozenset(x.all_names())
            else:
                sub, _ = x.boundary_subcomplex(j, sign)
                want = frozenset(sub.all_names())
            if _image_of_restriction(f, cell, j, sign) != want:
                ok = False
                break
        if not ok:
            break
        level = j
    return level


# ---------------------------------------------------------------------------
# one-level extensions


def _staircase_images(term: theta.Term, cells, offset: int, x: Adc) -> dict:
    """Images for the complex of a once-indexed staircase term classified
    by three cells composable at the term's branching level."""
    a, b, c = cells
    images = {}
    if term.width == 1:
        images["p0"] = a.level(offset, "-")
        images["p1"] = a.level(offset, "+")
        inner = _staircase_images(term.children[0], cells, offset + 1, x)
        for k, v in inner.items():
            images[f"s1.{k}"] = v
        return images
    assert term.width == 3
    images["p0"] = a.level(offset, "-")
    images["p1"] = a.level(offset, "+")
    images["p2"] = b.level(offset, "+")
    images["p3"] = c.level(offset, "+")
    for seg, cell in ((1, a), (2, b), (3, c)):
        m = cell.top_dim - offset - 1
        for r in range(m):
            path = "s1." * r
            images[f"s{seg}.{path}p0"] = cell.level(offset + 1 + r, "-")
            images[f"s{seg}.{path}p1"] = cell.level(offset + 1 + r, "+")
        images[f"s{seg}." + "s1." * m + "p0"] = cell.top
    return images


def staircase_morphism(n: int, j: int, cells, x: Adc) -> AdcMorphism:
    """Classifying morphism C^j_n(1)-complex -> x for a triple of n-cells
    composable at level j."""
    term = theta.c_indexed(n, j, 1)
    images = _staircase_images(term, cells, 0, x)
    return AdcMorphism(theta.to_adc(term), x, images)


def _region(x: Adc, seed: frozenset, level: int, eps: str):
    """Elements of degree >= level reachable from (eps='+') or reaching
    (eps='-') the seed in the level order, seed included."""
    reach = _extended_reach(x, level)
    out = set(seed)
    for b in (n for q in range(level, len(x.basis)) for n in x.basis[q]):
        for b0 in seed:
            if eps == "+" and b in reach[b0]:
                out.add(b)
            if eps == "-" and b0 in reach[b]:
                out.add(b)
    return out


def _region_extremal(x: Adc, region: set, q: int, sign: str):
    """Extremal degree-q members of the region through region (q+1)-cells."""
    members = [n for n in x.basis[q] if n in region]
    upper = [n for n in x.basis[q + 1] if n in region] \
        if q + 1 < len(x.basis) else []
    table = x.bd_plus if sign == "-" else x.bd_minus
    excluded = set()
    for w in upper:
        excluded |= set(table[w].terms)
    return Combi({n: 1 for n in members if n not in excluded})


class ExtensionError(ValueError):
    pass


def globe_alias(n: int) -> dict:
    """Globe-complex names -> path names of the compiled globe term."""
    if n == 0:
        return {"g0": "p0"}
    out = {}
    for q in range(n):
        out[f"g{q}m"] = "s1." * q + "p0"
        out[f"g{q}p"] = "s1." * q + "p1"
    out[f"g{n}"] = "s1." * n + "p0"
    return out


def reglobe(f: AdcMorphism) -> AdcMorphism:
    """Re-source a morphism out of a compiled globe term at the globe
    complex."""
    n = f.source.dim
    alias = globe_alias(n)
    return AdcMorphism(globe_adc(n), f.target,
                       {g: f(p) for g, p in alias.items()}, check=False)


def extend_one_level(f: AdcMorphism, k: int) -> AdcMorphism:
    """Extend a k-active globe-classified morphism to a (k+1)-active
    staircase morphism restricting to it on the middle cell."""
    x = f.target
    n = f.source.dim
    if not (-1 <= k < n - 1):
        raise ExtensionError("level out of range")
    if j_active_level(f) < k:
        raise ExtensionError("morphism is not k-active")
    mid = morphism_to_cell(f)
    flanks = {}
    for eps in ("-", "+"):
        seed = mid.level(k + 1, eps).support()
        region = _region(x, seed, k + 1, eps)
        tables = list(mid.tables[:k + 1])
        for q in range(k + 1, n):
            tables.append((_region_extremal(x, region, q, "-"),
                           _region_extremal(x, region, q, "+")))
        top = Combi({m: 1 for m in region if x.degree_of[m] == n})
        cell = Cell(tuple(tables), top, n)
        if not validate_cell(x, cell):
            raise ExtensionError(f"flank {eps} is not a valid cell")
        flanks[eps] = cell
    out = staircase_morphism(n, k + 1, (flanks["-"], mid, flanks["+"]), x)
    assert not out.validate(), "extension must be a morphism"
    term = theta.c_indexed(n, k + 1, 1)
    mid_cell = _middle_cell_of_staircase(term, n, k + 1)
    got = out.compose(mid_cell)
    assert got.images == {
        g: f(g) for g in f.source.all_names()}, "middle restriction differs"
    return out


def _middle_cell_of_staircase(term: theta.Term, n: int, j: int) -> AdcMorphism:
    """The inert inclusion of the globe as the middle cell of C^j_n(1)."""
    prefix = "s1." * j
    names = {}
    levels, top = globe_names(n)
    for q, (mn, pn) in enumerate(levels):
        if q < j:
            names[mn] = f"{prefix[:3 * q]}p0"
            names[pn] = f"{prefix[:3 * q]}p1"
        elif q == j:
            names[mn] = f"{prefix}p1"
            names[pn] = f"{prefix}p2"
        else:
            inner = "s2." + "s1." * (q - j - 1)
            names[mn] = f"{prefix}{inner}p0"
            names[pn] = f"{prefix}{inner}p1"
    if j == n - 1:
        names[top] = f"{prefix}s2.p0"
    else:
        names[top] = f"{prefix}s2." + "s1." * (n - j - 2) + "s1.p0"
    adc = theta.to_adc(term)
    fixed = {}
    for g, cand in names.items():
        fixed[g] = Combi.unit(cand)
    return AdcMorphism(globe_adc(n), adc, fixed)


def extend_to_zigzag(f: AdcMorphism):
    """Iterate one-level extensions and glue the staircase pieces into the
    zig-zag covering complex.

    Returns (domain, covering, marked) where covering: domain -> target is
    active and covering o marked = f for the inert marked globe.
    """
    x = f.target
    n = f.source.dim
    if n == 0:
        return f.source, f, AdcMorphism.identity(f.source)
    cell = morphism_to_cell(f)
    pieces = []
    for k in range(-1, n - 1):
        g = cell_to_morphism(x, cell)
        piece = extend_one_level(g, k)
        pieces.append(piece)
        term = theta.c_indexed(n, k + 1, 1)
        cover = reglobe(theta.active_cover_tmor(term).adc_morphism())
        cell = morphism_to_cell(piece.compose(cover))
    dom = theta.to_adc(theta.c_indexed(n, 0, 1))
    covering = pieces[0]
    marked = _middle_cell_of_staircase(theta.c_indexed(n, 0, 1), n, 0)
    leg_prev = AdcMorphism.identity(dom)
    for j in range(1, n):
        term = theta.c_indexed(n, j, 1)
        middle = _middle_cell_of_staircase(term, n, j)
        prev_cover = reglobe(theta.active_cover_tmor(
            theta.c_indexed(n, j - 1, 1)).adc_morphism())
        glue_map = leg_prev.compose(prev_cover)  # globe -> dom
        out, left_leg, right_leg, rename = pushout(
            middle, glue_map, rename_prefix=f"z{j}:", require_classes=False)
        images = {}
        for name in out.all_names():
            orig = name[len(f"z{j}:"):] if name.startswith(f"z{j}:") else None
            if orig is not None and orig in dom.degree_of:
                images[name] = covering(orig)
            else:
                images[name] = pieces[j](name)
        dom = out
        covering = AdcMorphism(dom, x, images, check=False)
        assert not covering.validate()
        marked = right_leg.compose(marked)
        leg_prev = left_leg
    assert covering.is_active(), "zig-zag covering must be active"
    got = covering.compose(marked)
    want = {g: f(g) for g in f.source.all_names()}
    assert got.images == want, "marked restriction must recover the input"
    return dom, covering, marked
