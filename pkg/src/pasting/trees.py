"""Decorated trees of wreath terms compiling to pasting complexes.

A tree node carries a term label; an edge marks a cell of the node's
compiled label (a basis name) with a subtree of dimension at most the
cell's degree.  Compilation glues, bottom-up and within each node in
increasing cell dimension, the compiled subtree over the marked cell's
atom closure.  Shared boundaries must be marked coherently; incoherent
markings are rejected rather than repaired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adc import Adc, AdcMorphism, Combi, GluingRejected, pushout
from . import theta
from .theta import Term, POINT, node, to_adc


@dataclass(frozen=True)
class DTree:
    """label: a term; edges: (cell name of the compiled label, subtree)."""

    label: Term
    edges: tuple = ()

    def __post_init__(self):
        names = to_adc(self.label).degree_of
        seen = set()
        for cell, sub in self.edges:
            assert cell in names, f"no cell {cell} in the label"
            assert cell not in seen, f"cell {cell} marked twice"
            seen.add(cell)
            assert isinstance(sub, DTree)
            assert sub.label.dim <= names[cell], \
                "subtree dimension exceeds the marked cell"

    def node_at(self, path: tuple) -> "DTree":
        t = self
        for i in path:
            t = t.edges[i][1]
        return t

    def all_paths(self):
        yield ()
        for i, (_, sub) in enumerate(self.edges):
            for p in sub.all_paths():
                yield (i,) + p

    def replace_at(self, path: tuple, new: "DTree") -> "DTree":
        if not path:
            return new
        i = path[0]
        edges = list(self.edges)
        cell, sub = edges[i]
        edges[i] = (cell, sub.replace_at(path[1:], new))
        return DTree(self.label, tuple(edges))

    @property
    def dim(self) -> int:
        return self.label.dim

    def size(self) -> int:
        return 1 + sum(sub.size() for _, sub in self.edges)


def leaf(label: Term) -> DTree:
    return DTree(label)


def _node_id(path: tuple) -> str:
    return "@" + ".".join(map(str, path))


class TreeRejected(GluingRejected):
    pass


@dataclass
class Compiled:
    adc: Adc
    trace: dict            # (path, label cell name) -> Combi over adc basis


def _bilateral_glue(current: Adc, trace: dict, top: str, levels, j: int,
                    child: Adc):
    """Glue the compiled child over the marked cell.

    Per boundary level the thinner side is absorbed into the fatter one: a
    single ambient cell maps to the child's extremal table (the classical
    replacement), a single child cell maps to the ambient composite (the
    child inherits existing whiskers), and levels of matching shape are
    identified cell by cell.  Returns the new complex together with total
    replacement maps for both sides.
    """
    from .omega import maximal_cell
    mx = maximal_cell(child, max(child.dim, j))
    if mx is None:
        raise TreeRejected("marked subtree admits no covering cell")
    amb_img: dict = {top: Combi({m: 1 for m in
                                 (child.basis[j] if j < len(child.basis)
                                  else ())})}
    child_img: dict = {}

    def assign(table, name, value, side):
        if name in table and table[name] != value:
            raise TreeRejected(
                f"inconsistent boundary identification at {name} ({side})")
        table[name] = value

    for q in range(j - 1, -1, -1):
        for sign, pos in (("-", 0), ("+", 1)):
            amb_level = levels[q][pos]
            child_level = mx.level(q, sign)
            na, nc = len(amb_level.terms), len(child_level.terms)
            if na == 1:
                u = next(iter(amb_level.terms))
                assign(amb_img, u, child_level, "ambient")
            elif nc == 1:
                c0 = next(iter(child_level.terms))
                assign(child_img, c0, amb_level, "child")
            else:
                side_a = current.subcomplex(
                    current.closure(amb_level.support()))
                side_c = child.subcomplex(
                    child.closure(child_level.support()))
                found = side_a.canonical_match(side_c)
                if found is None:
                    raise TreeRejected(
                        f"boundary ({q},{sign}) of {top} does not match the "
                        "marked subtree (missing or incoherent marking)")
                for a, b in found.items():
                    assign(amb_img, a, Combi.unit(b), "ambient")

    removed = set(amb_img)
    dropped = set(child_img)
    for c0, comb in child_img.items():
        if comb.support() & removed:
            raise TreeRejected(
                f"cyclic identification through {c0}")

    def child_rewrite(comb: Combi) -> Combi:
        out = Combi()
        for k, v in comb.terms.items():
            out = out + (child_img[k] if k in child_img
                         else Combi.unit(k)).scale(v)
        return out

    amb_img = {k: child_rewrite(v) for k, v in amb_img.items()}

    def amb_rewrite(comb: Combi) -> Combi:
        out = Combi()
        for k, v in comb.terms.items():
            out = out + (amb_img[k] if k in amb_img
                         else Combi.unit(k)).scale(v)
        return out

    basis = []
    depth = max(len(current.basis), len(child.basis))
    for q in range(depth):
        names = []
        if q < len(current.basis):
            names.extend(n for n in current.basis[q] if n not in removed)
        if q < len(child.basis):
            names.extend(n for n in child.basis[q] if n not in dropped)
        basis.append(tuple(names))
    bd_plus, bd_minus, aug = {}, {}, {}
    for n in current.all_names():
        if n in removed:
            continue
        if current.degree_of[n] == 0:
            aug[n] = current.aug[n]
        else:
            bd_plus[n] = amb_rewrite(current.bd_plus[n])
            bd_minus[n] = amb_rewrite(current.bd_minus[n])
    for n in child.all_names():
        if n in dropped:
            continue
        if child.degree_of[n] == 0:
            aug[n] = child.aug[n]
        else:
            bd_plus[n] = child_rewrite(child.bd_plus[n])
            bd_minus[n] = child_rewrite(child.bd_minus[n])
    out = Adc(tuple(b for b in basis), bd_plus, bd_minus, aug)
    problems = out.validate()
    if problems:
        raise TreeRejected(f"glued complex invalid: {problems[:3]}")
    # total replacement maps into the glued complex
    amb_total = {n: child_rewrite(amb_img[n]) if n in amb_img
                 else Combi.unit(n) for n in current.all_names()}
    child_total = {n: child_img.get(n, Combi.unit(n))
                   for n in child.all_names()}
    return out, amb_total, child_total


def compile_tree(t: DTree, path: tuple = ()) -> Compiled:
    """Compile to a directed complex, tracking where every label cell of
    every node ends up."""
    nid = _node_id(path)
    base = to_adc(t.label)
    ren = {n: f"{nid}|{n}" for n in base.all_names()}
    current = Adc(
        tuple(tuple(ren[n] for n in lv) for lv in base.basis),
        {ren[n]: Combi({ren[k]: v for k, v in c.terms.items()})
         for n, c in base.bd_plus.items()},
        {ren[n]: Combi({ren[k]: v for k, v in c.terms.items()})
         for n, c in base.bd_minus.items()},
        {ren[n]: v for n, v in base.aug.items()})
    trace: dict = {(path, n): Combi.unit(ren[n]) for n in base.all_names()}

    closures = {cell: base.closure([cell]) for cell, _ in t.edges}
    shadowed = [i for i, (cell, _) in enumerate(t.edges)
                if any(cell in clo and other != cell
                       for other, clo in closures.items())]
    glued = [i for i in range(len(t.edges)) if i not in shadowed]
    for i in sorted(glued, key=lambda i: (base.degree(t.edges[i][0]),
                                          t.edges[i][0])):
        cell, sub = t.edges[i]
        j = base.degree(cell)
        child = compile_tree(sub, path + (i,))
        top_now = trace[(path, cell)]
        assert top_now.key() == ((f"{nid}|{cell}", 1),), \
            "marked cell vanished before its gluing turn"
        top_name = f"{nid}|{cell}"
        # shadow of the original atom closure: the bottom of the gluing
        def traced(comb):
            out = Combi()
            for k, v in comb.terms.items():
                out = out + trace[(path, k)].scale(v)
            return out

        levels = tuple((traced(mi), traced(pl))
                       for mi, pl in base.atom(cell).levels)
        out, amb_total, child_total = _bilateral_glue(
            current, trace, top_name, levels, j, child.adc)
        trace = {k: v.apply(amb_total) for k, v in trace.items()}
        for k, v in child.trace.items():
            trace[k] = v.apply(child_total)
        current = out
    # boundary markings shadowed by a sibling cell are not glued; their
    # compiled subtrees must match the identification made by the big cell
    for i in shadowed:
        cell, sub = t.edges[i]
        names = set()
        for v in base.closure([cell]):
            names |= trace[(path, v)].support()
        part = current.subcomplex(current.closure(names))
        want = compile_tree(sub, path + (i,)).adc
        if part.canonical_match(want) is None:
            raise TreeRejected(
                f"boundary marking at {cell} does not match the shadow of "
                "its sibling cell")
    return Compiled(current, trace)


def tree_to_adc(t: DTree) -> Adc:
    return compile_tree(t).adc


# ---------------------------------------------------------------------------
# structure: marked part, truncations, elementary subobjects


def marked_part(t: DTree) -> list[tuple]:
    """Node paths belonging to the marked subtree: those not shadowed inside
    a boundary-marking (an edge whose cell factors through a sibling marked
    cell)."""
    shadowed = set()

    def visit(tree: DTree, path: tuple):
        adc = to_adc(tree.label)
        cells = {cell: adc.closure([cell]) for cell, _ in tree.edges}
        for i, (cell, sub) in enumerate(tree.edges):
            inside = any(cell in clo and other != cell
                         for other, clo in cells.items())
            if inside:
                for p in sub.all_paths():
                    shadowed.add(path + (i,) + p)
            visit(sub, path + (i,))

    visit(t, ())
    return [p for p in t.all_paths() if p not in shadowed]


def truncate_below(t: DTree, path: tuple) -> DTree:
    """Remove the node at ``path`` together with its subtree; the edge's
    cell becomes unmarked.

    Boundary markings that existed only as shadows of the removed cell
    (their cell lies in no remaining marked cell's closure although it lay
    in one before) are dropped along with it.
    """
    if not path:
        raise ValueError("cannot truncate below the root")
    parent = t.node_at(path[:-1])
    adc = to_adc(parent.label)
    closures = {cell: adc.closure([cell]) for cell, _ in parent.edges}

    def shadowed(cell, cells):
        return any(cell in closures[other] and other != cell
                   for other in cells)

    removed_cell = parent.edges[path[-1]][0]
    remaining = [c for k, (c, _) in enumerate(parent.edges) if k != path[-1]]
    keep = []
    for k, (cell, sub) in enumerate(parent.edges):
        if k == path[-1]:
            continue
        if shadowed(cell, [c for c, _ in parent.edges]) \
                and not shadowed(cell, remaining):
            continue
        keep.append((cell, sub))
    del removed_cell
    return t.replace_at(path[:-1], DTree(parent.label, tuple(keep)))


def elementary_subtree(t: DTree, path: tuple, cell: str) -> DTree:
    """The subobject spanned by a cell of a node's label: the cell's globe
    together with all markings that factor through it."""
    tree = t.node_at(path)
    adc = to_adc(tree.label)
    j = adc.degree(cell)
    closure = adc.closure([cell])
    g = theta.globe(j)
    gadc = to_adc(g)
    alias = {}
    atom = adc.atom(cell)
    for q in range(j):
        for sign, pos in (("-", 0), ("+", 1)):
            level = atom.levels[q][pos]
            assert len(level.terms) == 1, "term atoms are globular"
            lname = next(iter(level.terms))
            alias[lname] = "s1." * q + ("p0" if sign == "-" else "p1")
    alias[cell] = "s1." * j + "p0"
    edges = []
    for cname, sub in tree.edges:
        if cname in closure:
            edges.append((alias[cname], sub))
    return DTree(g, tuple(edges))


def validate_tree(t: DTree) -> dict:
    """Compile-based membership report.

    ctree_prime: the markings cohere (compilation succeeds and every
    non-globular boundary of a marked subtree is itself marked to match).
    ctree: additionally every truncation at a marked-part node is strongly
    loop-free.
    """
    report = {"ctree_prime": False, "ctree": False, "problems": []}
    try:
        compiled = compile_tree(t)
    except GluingRejected as exc:
        report["problems"].append(str(exc))
        return report
    problems = compiled.adc.validate()
    if problems:
        report["problems"].extend(problems)
        return report
    report["ctree_prime"] = True
    ok = True
    for path in marked_part(t):
        if not path:
            continue
        trunc = truncate_below(t, path)
        try:
            flags = tree_to_adc(trunc).basis_flags()
        except GluingRejected as exc:
            report["problems"].append(f"truncation at {path}: {exc}")
            ok = False
            continue
        if not flags["strongly_loop_free"]:
            report["problems"].append(
                f"truncation at {path} is not strongly loop-free")
            ok = False
    flags = compiled.adc.basis_flags()
    if not flags["strongly_loop_free"]:
        report["problems"].append("compiled complex not strongly loop-free")
        ok = False
    report["ctree"] = ok
    return report


# ---------------------------------------------------------------------------
# health


def term_boundary(term: Term, q: int, sign: str) -> Term:
    if term.dim <= q:
        return term
    if q == 0:
        return POINT
    return node(*(term_boundary(c, q - 1, sign) for c in term.children))


def boundary_tree(t: DTree, q: int, sign: str) -> DTree:
    """The (q, sign) boundary of a decorated tree, as a decorated tree."""
    if t.dim <= q and all(to_adc(t.label).degree(c) <= q for c, _ in t.edges):
        return t
    blabel = term_boundary(t.label, q, sign)
    full = to_adc(t.label)
    if q >= full.dim:
        side = full
    else:
        side, _ = full.boundary_subcomplex(q, sign)
    match = side.canonical_match(to_adc(blabel))
    assert match is not None
    edges = []
    for cell, sub in t.edges:
        if cell in match:
            edges.append((match[cell], sub))
    return DTree(blabel, tuple(edges))


def is_healthy_tree(t: DTree, n: int | None = None) -> bool:
    """Root label healthy at the ambient dimension; every edge-target label
    healthy at its marked cell's dimension, recursively."""
    n = t.dim if n is None else n
    if not theta.is_healthy(t.label, n):
        return False
    adc = to_adc(t.label)
    for cell, sub in t.edges:
        if not is_healthy_tree(sub, adc.degree(cell)):
            return False
    return True


def is_healthy_tree_morphism(x: DTree, f: AdcMorphism,
                             n: int | None = None) -> bool:
    """Every unmarked top cell's image subcomplex is healthy, strong and
    coverable."""
    from .omega import active_cover
    n = x.dim if n is None else n
    src = f.source
    if n >= len(src.basis):
        return True
    for u in src.basis[n]:
        names = set()
        for v in src.closure([u]):
            names |= f(v).support()
        sub = f.target.subcomplex(f.target.closure(names))
        if not theta.healthy_complex(sub, n):
            return False
        if not sub.is_strong() or active_cover(sub) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# grafting and the family gluing


def graft(t: DTree, path: tuple, cell: str, z: DTree) -> DTree:
    """Mark ``cell`` of the node at ``path`` with the tree ``z``, adding the
    boundary markings forced by non-globular boundaries of z; existing
    markings must agree and are left alone."""
    tree = t.node_at(path)
    adc = to_adc(tree.label)
    if any(c == cell for c, _ in tree.edges):
        raise TreeRejected(f"cell {cell} is already marked")
    j = adc.degree(cell)
    if z.dim > j:
        raise TreeRejected("graft exceeds the cell dimension")
    new_edges = list(tree.edges) + [(cell, z)]
    marked = {c for c, _ in new_edges}
    atom = adc.atom(cell)
    for q in range(j - 1, -1, -1):
        for sign, pos in (("-", 0), ("+", 1)):
            bz = boundary_tree(z, q, sign)
            badc = tree_to_adc(bz)
            if badc.canonical_match(to_adc(theta.globe(q))) is not None:
                continue
            level = atom.levels[q][pos]
            assert len(level.terms) == 1
            bcell = next(iter(level.terms))
            if bcell in marked:
                have = tree_to_adc(dict(new_edges)[bcell])
                if have.canonical_match(badc) is None:
                    raise TreeRejected(
                        f"boundary cell {bcell} already marked incompatibly")
            else:
                new_edges.append((bcell, bz))
                marked.add(bcell)
    return t.replace_at(path, DTree(tree.label, tuple(new_edges)))


def tree_pushout(y: DTree, path: tuple, cell: str, z: DTree):
    """Glue z over the given cell; returns (tree, active morphism from the
    compiled y onto the compiled result)."""
    out = graft(y, path, cell, z)
    before = compile_tree(y)
    after = compile_tree(out)
    leg = AdcMorphism(before.adc, after.adc,
                      {name: _image_by_provenance(before, after, name)
                       for name in before.adc.all_names()})
    assert leg.is_active()
    return out, leg


def _provenance(compiled: Compiled) -> dict:
    """basis name -> one (path, cell) pair tracing to it with coefficient 1
    as a singleton."""
    out = {}
    for key, comb in compiled.trace.items():
        if len(comb.terms) == 1 and set(comb.terms.values()) == {1}:
            name = next(iter(comb.terms))
            out.setdefault(name, key)
    return out


def _image_by_provenance(before: Compiled, after: Compiled, name: str) -> Combi:
    prov = _provenance(before).get(name)
    assert prov is not None, f"no provenance for {name}"
    return after.trace[prov]


def _trace_lookup(compiled: Compiled, path, cell) -> Combi:
    return compiled.trace[(path, cell)]


def glue_active_family(x: DTree, family: dict):
    """family: (path, cell name of to_adc(label)) -> tree to glue there.

    Identity components may simply be omitted.  Returns (tree, active
    morphism compiled x -> compiled result) whose per-cell restrictions
    recover the family.
    """
    out = x
    for (path, cell), z in sorted(family.items()):
        out = graft(out, path, cell, z)
    before = compile_tree(x)
    after = compile_tree(out)
    images = {name: _image_by_provenance(before, after, name)
              for name in before.adc.all_names()}
    leg = AdcMorphism(before.adc, after.adc, images)
    assert leg.is_active()
    return out, leg


def restrict_family(x: DTree, f: AdcMorphism) -> dict:
    """Per unmarked top cell of the compiled tree, the image subcomplex of
    its atom closure under f (the active part of the restriction)."""
    compiled = compile_tree(x)
    assert f.source.basis == compiled.adc.basis
    prov = _provenance(compiled)
    out = {}
    n = x.dim
    for name in (compiled.adc.basis[n] if n < len(compiled.adc.basis) else ()):
        names = set()
        for v in compiled.adc.closure([name]):
            names |= f(v).support()
        out[prov[name]] = f.target.subcomplex(f.target.closure(names))
    return out
