"""Iterated wreath terms and their morphisms.

A term is either the point O or a node [t_1,...,t_m] with m >= 1 children;
the node presents the cell category with objects {0..m} whose hom from i to
i+1 is t_{i+1}.  Terms compile to directed complexes with basis elements
named by their inert path (p0, p1, ... for points; s{i}.<name> one segment
deep).  Morphisms are given by a monotone object map plus components per
(source segment, covered target segment).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .adc import Adc, AdcMorphism, Combi, make_adc
from .delta import MonotoneMap, all_maps
from . import omega


@dataclass(frozen=True)
class Term:
    """Point when children is None, node otherwise."""

    children: tuple["Term", ...] | None = None

    def __post_init__(self):
        assert self.children is None or len(self.children) >= 1, \
            "width-0 nodes are not a thing; use the point"

    @property
    def is_point(self) -> bool:
        return self.children is None

    @property
    def width(self) -> int:
        return 0 if self.is_point else len(self.children)

    @property
    def dim(self) -> int:
        if self.is_point:
            return 0
        return 1 + max(c.dim for c in self.children)

    def cell_count(self) -> int:
        if self.is_point:
            return 1
        return self.width + 1 + sum(c.cell_count() for c in self.children)

    def __repr__(self):
        if self.is_point:
            return "O"
        return "[" + ",".join(map(repr, self.children)) + "]"


POINT = Term()


def node(*children: Term) -> Term:
    return Term(tuple(children))


def globe(k: int) -> Term:
    return POINT if k == 0 else node(globe(k - 1))


def linear(m: int) -> Term:
    """The linear order [m] as a term; [0] is the point."""
    return POINT if m == 0 else node(*([POINT] * m))


@lru_cache(maxsize=None)
def to_adc(t: Term) -> Adc:
    """Compile a term to its directed complex with path-named basis."""
    if t.is_point:
        return make_adc([("p0",)], {})
    basis = [[f"p{j}" for j in range(t.width + 1)]]
    boundaries = {}
    for i, child in enumerate(t.children, start=1):
        sub = to_adc(child)
        for q in range(len(sub.basis)):
            while len(basis) <= q + 1:
                basis.append([])
            for name in sub.basis[q]:
                new = f"s{i}.{name}"
                basis[q + 1].append(new)
                if q == 0:
                    boundaries[new] = ({f"p{i - 1}": 1}, {f"p{i}": 1})
                else:
                    boundaries[new] = (
                        {f"s{i}.{k}": v
                         for k, v in sub.bd_minus[name].terms.items()},
                        {f"s{i}.{k}": v
                         for k, v in sub.bd_plus[name].terms.items()})
    return make_adc(basis, boundaries)


@dataclass(frozen=True)
class TMor:
    """Morphism of terms: object map plus per-segment components.

    comps[(i, k)] is defined for source segments i and target segments
    k in [obj(i), obj(i+1)).
    """

    source: Term
    target: Term
    obj: MonotoneMap
    comps: tuple = ()

    def __post_init__(self):
        assert self.obj.source_size == self.source.width
        assert self.obj.target_size == self.target.width
        table = dict(self.comps)
        for i in range(self.source.width):
            for k in range(self.obj(i), self.obj(i + 1)):
                sub = table.pop((i, k))
                assert sub.source == self.source.children[i]
                assert sub.target == self.target.children[k]
        assert not table, "stray components"

    def comp(self, i: int, k: int) -> "TMor":
        return dict(self.comps)[(i, k)]

    @staticmethod
    def identity(t: Term) -> "TMor":
        comps = tuple(((i, i), TMor.identity(c))
                      for i, c in enumerate(t.children or ()))
        return TMor(t, t, MonotoneMap.identity(t.width), comps)

    def compose(self, first: "TMor") -> "TMor":
        """self o first."""
        assert first.target == self.source
        obj = self.obj.compose(first.obj)
        comps = []
        for i in range(first.source.width):
            for j in range(first.obj(i), first.obj(i + 1)):
                for k in range(self.obj(j), self.obj(j + 1)):
                    comps.append(((i, k),
                                  self.comp(j, k).compose(first.comp(i, j))))
        return TMor(first.source, self.target, obj, tuple(comps))

    def is_inert(self) -> bool:
        if not self.obj.is_inert():
            return False
        return all(sub.is_inert() for _, sub in self.comps)

    def is_active(self) -> bool:
        if not self.obj.is_active():
            return False
        return all(sub.is_active() for _, sub in self.comps)

    def adc_morphism(self) -> AdcMorphism:
        src = to_adc(self.source)
        tgt = to_adc(self.target)
        return AdcMorphism(src, tgt, self._images(), check=False)

    def _images(self) -> dict:
        if self.source.is_point:
            return {"p0": Combi.unit(f"p{self.obj(0)}")
                    if not self.target.is_point else Combi.unit("p0")}
        images = {}
        for j in range(self.source.width + 1):
            name = f"p{self.obj(j)}" if not self.target.is_point else "p0"
            images[f"p{j}"] = Combi.unit(name)
        for i in range(self.source.width):
            subnames = to_adc(self.source.children[i]).all_names()
            partials = []
            for k in range(self.obj(i), self.obj(i + 1)):
                sub = self.comp(i, k)._images()
                partials.append((k, sub))
            for name in subnames:
                total = Combi()
                for k, sub in partials:
                    total = total + Combi(
                        {f"s{k + 1}.{u}": v
                         for u, v in sub[name].terms.items()})
                images[f"s{i + 1}.{name}"] = total
        return images

    def key(self):
        return (self.obj.values,
                tuple(sorted((ik, sub.key()) for ik, sub in self.comps)))


def enumerate_hom(s: Term, t: Term, cell_bound: int = 600):
    """The full hom-set by recursion on the wreath presentation."""
    if s.cell_count() + t.cell_count() > cell_bound:
        raise ValueError("hom enumeration bound exceeded")
    yield from _hom(s, t)


def _hom(s: Term, t: Term):
    for g in all_maps(s.width, t.width):
        slots = [(i, k) for i in range(s.width)
                 for k in range(g(i), g(i + 1))]
        pools = [list(_hom(s.children[i], t.children[k])) for i, k in slots]
        for choice in itertools.product(*pools):
            yield TMor(s, t, g, tuple(zip(slots, choice)))


def hom_count(s: Term, t: Term) -> int:
    return sum(1 for _ in _hom(s, t))


def n_cells(t: Term, d: int) -> list:
    """The d-morphisms of the term's cell category."""
    return omega.enumerate_cells(to_adc(t), d)


def cell_image(f: AdcMorphism, cell) -> "omega.Cell":
    from .omega import Cell
    tables = tuple((f.apply(m), f.apply(p)) for m, p in cell.tables)
    return Cell(tables, f.apply(cell.top), cell.top_dim)


def is_injective_on_cells(f: TMor, d: int | None = None) -> bool:
    d = max(f.source.dim, f.target.dim) if d is None else d
    m = f.adc_morphism()
    seen = set()
    for c in n_cells(f.source, d):
        k = cell_image(m, c).key()
        if k in seen:
            return False
        seen.add(k)
    return True


def is_surjective_on_cells(f: TMor, d: int | None = None) -> bool:
    d = max(f.source.dim, f.target.dim) if d is None else d
    m = f.adc_morphism()
    hit = {cell_image(m, c).key() for c in n_cells(f.source, d)}
    return all(c.key() in hit for c in n_cells(f.target, d))


# ---------------------------------------------------------------------------
# injective/surjective factorization


def _factor_family(src: Term, family):
    """Joint surjective/injective factorization.

    family is a list of TMors out of ``src``; returns (mid, s, joints) with
    every f_k = joints[k] o s, s surjective on cells and the joint family
    injective.
    """
    if src.is_point:
        return src, TMor.identity(src), list(family)
    w = src.width
    sig = [tuple(f.obj(j) for f in family) for j in range(w + 1)]
    classes = []
    for j in range(w + 1):
        if j == 0 or sig[j] != sig[j - 1]:
            classes.append([j])
        else:
            classes[-1].append(j)
    wq = len(classes) - 1
    s0 = [0] * (w + 1)
    for r, cls in enumerate(classes):
        for j in cls:
            s0[j] = r
    reps = [max(cls) for cls in classes]

    mid_children = []
    s_comps = []
    joint_comps = [[] for _ in family]
    for r in range(wq):
        i_m = reps[r]
        sub_family = []
        owners = []
        for kidx, f in enumerate(family):
            for q in range(f.obj(i_m), f.obj(i_m + 1)):
                sub_family.append(f.comp(i_m, q))
                owners.append((kidx, q))
        child, s_r, sub_joints = _factor_family(src.children[i_m], sub_family)
        mid_children.append(child)
        s_comps.append(((i_m, r), s_r))
        for (kidx, q), j_part in zip(owners, sub_joints):
            joint_comps[kidx].append(((r, q), j_part))

    mid = node(*mid_children) if mid_children else POINT
    s0_map = MonotoneMap(w, wq, tuple(s0))
    s_mor = TMor(src, mid, s0_map, tuple(s_comps))
    joints = []
    for kidx, f in enumerate(family):
        objmap = MonotoneMap(wq, f.target.width,
                             tuple(sig[reps[r] if r < len(reps) else reps[-1]][kidx]
                                   for r in range(wq + 1)))
        joints.append(TMor(mid, f.target, objmap, tuple(joint_comps[kidx])))
    return mid, s_mor, joints


def factor_inj_sur(f: TMor) -> tuple[TMor, TMor]:
    """f = (injective) o (surjective); both parts returned in that order as
    (surjective, injective)."""
    mid, s, joints = _factor_family(f.source, [f])
    j = joints[0]
    assert j.compose(s).key() == f.key()
    return s, j


# ---------------------------------------------------------------------------
# pushout of an active map along an inert one


class ClassificationError(ValueError):
    pass


def pushout_active_inert(i: TMor, a: TMor):
    """Pushout of  target(i) <-i- source -a-> target(a).

    Returns (term, a_leg, i_leg) with a_leg: target(i) -> term active and
    i_leg: target(a) -> term inert.
    """
    if i.source != a.source:
        raise ClassificationError("legs must share their source")
    if not i.is_inert():
        raise ClassificationError("first leg must be inert")
    if not a.is_active():
        raise ClassificationError("second leg must be active")
    return _pushout(i, a)


def _pushout(i: TMor, a: TMor):
    theta, second = i.target, a.target
    if i.source.is_point:
        # active maps out of a point land in a point
        assert second.is_point
        return theta, TMor.identity(theta), i
    l = i.source.width
    n, m = theta.width, second.width
    base = i.obj(0)
    width = n + m - l
    children: list[Term] = [None] * width
    a_comps = []
    i_comps = []
    for j in range(base):
        children[j] = theta.children[j]
        a_comps.append(((j, j), TMor.identity(theta.children[j])))
    for q in range(m):
        s = next(s for s in range(l)
                 if a.obj(s) <= q < a.obj(s + 1))
        sub_term, sub_a, sub_i = _pushout(i.comp(s, base + s), a.comp(s, q))
        children[base + q] = sub_term
        a_comps.append(((base + s, base + q), sub_a))
        i_comps.append(((q, base + q), sub_i))
    for j in range(base + l, n):
        children[j + m - l] = theta.children[j]
        a_comps.append(((j, j + m - l), TMor.identity(theta.children[j])))
    out = node(*children) if children else POINT

    vals = []
    for j in range(n + 1):
        if j <= base:
            vals.append(j)
        elif j <= base + l:
            vals.append(base + a.obj(j - base))
        else:
            vals.append(j + m - l)
    a_leg = TMor(theta, out, MonotoneMap(n, width, tuple(vals)),
                 tuple(a_comps))
    i_leg = TMor(second, out,
                 MonotoneMap(m, width, tuple(range(base, base + m + 1))),
                 tuple(i_comps))
    return out, a_leg, i_leg


# ---------------------------------------------------------------------------
# health


def healthy_complex(x: Adc, n: int) -> bool:
    """Every element of degree < n lies in the atom closure of a top cell."""
    if n >= len(x.basis):
        tops = ()
    else:
        tops = x.basis[n]
    covered = set()
    for w in tops:
        covered |= x.closure([w])
    lower = [u for q in range(min(n, len(x.basis))) for u in x.basis[q]]
    return all(u in covered for u in lower)


def is_healthy(t: Term, n: int | None = None) -> bool:
    n = t.dim if n is None else n
    return healthy_complex(to_adc(t), n)


def is_healthy_morphism(f: TMor, n: int | None = None) -> bool:
    """Both endpoints healthy and every top cell's image subcomplex healthy."""
    n = max(f.source.dim, f.target.dim) if n is None else n
    if not (is_healthy(f.source, n) and is_healthy(f.target, n)):
        return False
    m = f.adc_morphism()
    src, tgt = m.source, m.target
    if n >= len(src.basis):
        return True
    for u in src.basis[n]:
        names = set()
        for v in src.closure([u]):
            names |= m(v).support()
        sub = tgt.subcomplex(tgt.closure(names))
        if not healthy_complex(sub, n):
            return False
    return True


# ---------------------------------------------------------------------------
# generator families


@lru_cache(maxsize=None)
def c_single(n: int, k: int) -> Term:
    """The nested staircase object with 2k+1 segments at every depth."""
    assert n >= 1 and k >= 0
    if k == 0:
        return globe(n)
    if n == 1:
        return linear(2 * k + 1)
    return node(*(c_single(n - 1, min(i, 2 * k - i)) for i in range(2 * k + 1)))


@lru_cache(maxsize=None)
def c_multi(n: int, ks: tuple) -> Term:
    """The multi-index family: trivial segments except one nested slot."""
    assert len(ks) == n and n >= 1
    k0 = ks[0]
    if n == 1:
        return linear(2 * k0 + 1)
    return node(*(c_multi(n - 1, tuple(ks[1:])) if i == k0 else globe(n - 1)
                  for i in range(2 * k0 + 1)))


def c_indexed(n: int, i: int, k: int) -> Term:
    """Nontrivial index k in slot i, zeros elsewhere."""
    assert 0 <= i <= n - 1
    ks = [0] * n
    ks[i] = k
    return c_multi(n, tuple(ks))


def incl_middle(n: int, k: int) -> TMor:
    """The inert inclusion of the globe into the middle of c_single(n, k)."""
    src = globe(n)
    tgt = c_single(n, k)
    if k == 0:
        return TMor.identity(src)
    inner = TMor.identity(POINT) if n == 1 else incl_middle(n - 1, k)
    return TMor(src, tgt, MonotoneMap(1, 2 * k + 1, (k, k + 1)),
                (((0, k), inner),))


def section(n: int, k: int) -> TMor:
    """The collapse  c_single(n, k) -> globe(n)  splitting incl_middle."""
    src = c_single(n, k)
    tgt = globe(n)
    if k == 0:
        return TMor.identity(src)
    obj = MonotoneMap(2 * k + 1, 1,
                      tuple(0 if j <= k else 1 for j in range(2 * k + 2)))
    inner = TMor.identity(POINT) if n == 1 else section(n - 1, k)
    return TMor(src, tgt, obj, (((k, 0), inner),))


def collapse_map(n: int, i: int, k: int) -> TMor:
    """The comparison  c_single(n, k) -> c_indexed(n, i, k)."""
    src = c_single(n, k)
    tgt = c_indexed(n, i, k)
    if k == 0:
        return TMor.identity(src)
    if i == 0:
        if n == 1:
            return TMor.identity(src)
        comps = []
        for j in range(2 * k + 1):
            r = min(j, 2 * k - j)
            comps.append(((j, j), section(n - 1, r)))
        return TMor(src, tgt, MonotoneMap.identity(2 * k + 1), tuple(comps))
    obj = MonotoneMap(2 * k + 1, 1,
                      tuple(0 if j <= k else 1 for j in range(2 * k + 2)))
    return TMor(src, tgt, obj, (((k, 0), collapse_map(n - 1, i - 1, k)),))


def active_cover_tmor(t: Term, d: int | None = None) -> TMor:
    """The unique active map from the d-globe onto the term."""
    d = t.dim if d is None else d
    assert d >= t.dim
    src = globe(d)
    if d == 0:
        assert t.is_point
        return TMor.identity(t)
    if t.is_point:
        return TMor(src, t, MonotoneMap(1, 0, (0, 0)))
    comps = tuple(((0, k), active_cover_tmor(c, d - 1))
                  for k, c in enumerate(t.children))
    return TMor(src, t, MonotoneMap(1, t.width, (0, t.width)), comps)


def build_generator(kind: str, *params):
    """Uniform access to the generator families.

    kind: 'c' k | 'C_single' n k | 'C_multi' n k0..k_{n-1} |
    'C_indexed' n i k | 'S_map' n i k | 'section' n k | 'incl' n k
    """
    if kind == "c":
        (k,) = params
        return globe(k)
    if kind == "C_single":
        n, k = params
        return c_single(n, k)
    if kind == "C_multi":
        n, *ks = params
        return c_multi(n, tuple(ks))
    if kind == "C_indexed":
        n, i, k = params
        return c_indexed(n, i, k)
    if kind == "S_map":
        n, i, k = params
        return collapse_map(n, i, k)
    if kind == "section":
        n, k = params
        return section(n, k)
    if kind == "incl":
        n, k = params
        return incl_middle(n, k)
    raise ValueError(f"unknown generator kind {kind!r}")
