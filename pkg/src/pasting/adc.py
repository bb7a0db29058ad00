"""Augmented directed chain complexes with a distinguished basis.

A complex stores, per degree, a finite set of named basis elements; each
element of degree >= 1 carries a positive and a negative boundary, both
non-negative combinations one degree down, and degree-0 elements carry an
augmentation.  The chain differential is d = d+ - d-.

Everything is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class Combi:
    """Integer combination of named basis elements; zero terms are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            for k, v in (terms.items() if isinstance(terms, dict) else terms):
                if v:
                    d[k] = d.get(k, 0) + v
                    if not d[k]:
                        del d[k]
        self.terms = d

    @staticmethod
    def unit(name) -> "Combi":
        return Combi({name: 1})

    def __add__(self, other):
        d = dict(self.terms)
        for k, v in other.terms.items():
            d[k] = d.get(k, 0) + v
        return Combi(d)

    def __sub__(self, other):
        d = dict(self.terms)
        for k, v in other.terms.items():
            d[k] = d.get(k, 0) - v
        return Combi(d)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Combi) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*{k}" if v != 1 else str(k)
                          for k, v in sorted(self.terms.items()))

    def is_nonneg(self):
        return all(v > 0 for v in self.terms.values())

    def __le__(self, other):
        return all(other.terms.get(k, 0) >= v for k, v in self.terms.items())

    def meet(self, other):
        return Combi({k: min(v, other.terms.get(k, 0))
                      for k, v in self.terms.items()})

    def support(self):
        return frozenset(self.terms)

    def scale(self, c):
        return Combi({k: c * v for k, v in self.terms.items()})

    def positive_part(self):
        return Combi({k: v for k, v in self.terms.items() if v > 0})

    def negative_part(self):
        return Combi({k: -v for k, v in self.terms.items() if v < 0})

    def apply(self, images: dict) -> "Combi":
        """Push forward along a map basis-name -> Combi."""
        out = Combi()
        for k, v in self.terms.items():
            out = out + images[k].scale(v)
        return out


ZERO = Combi()


@dataclass(frozen=True)
class Adc:
    """A finitely generated augmented directed complex with basis."""

    basis: tuple[tuple[str, ...], ...]          # names per degree, ordered
    bd_plus: dict = field(hash=False)           # name -> Combi, degree >= 1
    bd_minus: dict = field(hash=False)
    aug: dict = field(hash=False)               # degree-0 name -> int

    def __post_init__(self):
        seen = set()
        for names in self.basis:
            for n in names:
                assert n not in seen, f"duplicate basis name {n}"
                seen.add(n)

    @property
    def dim(self) -> int:
        d = len(self.basis) - 1
        while d > 0 and not self.basis[d]:
            d -= 1
        return d

    def degree(self, name) -> int:
        for k, names in enumerate(self.basis):
            if name in names:
                return k
        raise KeyError(name)

    @property
    def degree_of(self) -> dict:
        table = self.__dict__.get("_degree_of")
        if table is None:
            table = {n: k for k, names in enumerate(self.basis) for n in names}
            object.__setattr__(self, "_degree_of", table)
        return table

    def all_names(self):
        return [n for names in self.basis for n in names]

    def boundary(self, name) -> Combi:
        return self.bd_plus[name] - self.bd_minus[name]

    def diff(self, comb: Combi, degree: int) -> Combi:
        if degree == 0:
            return ZERO
        out = Combi()
        for k, v in comb.terms.items():
            out = out + self.boundary(k).scale(v)
        return out

    def augment(self, comb: Combi) -> int:
        return sum(self.aug[k] * v for k, v in comb.terms.items())

    # -- validation ---------------------------------------------------------

    def validate(self) -> list[str]:
        """Check dd = 0 and e o d_0 = 0; violations are returned, not raised."""
        problems = []
        deg = self.degree_of
        for k in range(1, len(self.basis)):
            for name in self.basis[k]:
                if name not in self.bd_plus or name not in self.bd_minus:
                    problems.append(f"{name}: missing boundary data")
                    continue
                for side, comb in (("+", self.bd_plus[name]),
                                   ("-", self.bd_minus[name])):
                    if not comb.is_nonneg():
                        problems.append(f"{name}: d{side} has negative term")
                    for u in comb.terms:
                        if deg.get(u) != k - 1:
                            problems.append(
                                f"{name}: d{side} hits {u} outside degree {k - 1}")
                if k >= 2:
                    dd = self.diff(self.boundary(name), k - 1)
                    if dd:
                        problems.append(f"{name}: dd != 0 ({dd})")
                else:
                    if self.augment(self.boundary(name)) != 0:
                        problems.append(f"{name}: e o d != 0")
        for name in self.basis[0]:
            if name not in self.aug:
                problems.append(f"{name}: missing augmentation")
        return problems

    # -- atoms --------------------------------------------------------------

    def atom(self, name) -> "Atom":
        """The tower of iterated signed boundaries of a basis element."""
        k = self.degree(name)
        top = Combi.unit(name)
        levels = []
        minus = plus = top
        for q in range(k - 1, -1, -1):
            minus = self._signed(minus, "-")
            plus = self._signed(plus, "+")
            levels.append((minus, plus))
        levels.reverse()
        return Atom(tuple(levels), top, k)

    def _signed(self, comb: Combi, sign: str) -> Combi:
        """Canonical signed boundary of a combination: the positive or
        negative part of the linear differential.  Whiskers appearing on
        both sides of a composite telescope away here, which keeps atoms
        unital; the raw per-element tables stay available for the global
        order."""
        diff = Combi()
        for k, v in comb.terms.items():
            diff = diff + self.boundary(k).scale(v)
        return diff.positive_part() if sign == "+" else diff.negative_part()

    def signed_boundary(self, comb: Combi, sign: str) -> Combi:
        return self._signed(comb, sign)

    # -- orders -------------------------------------------------------------

    def _level(self, name, i: int, sign: str) -> Combi:
        """Atom level with the convention that levels at or above the
        element's own degree are the element itself."""
        if i >= self.degree(name):
            return Combi.unit(name)
        levels, _, _ = self.atom(name).as_tuple()
        return levels[i][0 if sign == "-" else 1]

    def order_onestep(self, i: int, extended: bool = False):
        """Pairs u < v at level i.

        Per the definition this compares elements of degrees > i via
        non-trivial meet of atom levels; with ``extended`` the comparison
        also admits elements of degree exactly i, counting them as their own
        level (used by the extension machinery).
        """
        pairs = set()
        names = self.all_names()
        deg = self.degree_of
        for u in names:
            for v in names:
                if u == v:
                    continue
                if extended:
                    if min(deg[u], deg[v]) < i:
                        continue
                else:
                    if min(deg[u], deg[v]) <= i:
                        continue
                if self._level(u, i, "+").meet(self._level(v, i, "-")):
                    pairs.add((u, v))
        return pairs

    def leN_onestep(self):
        """u < v when u appears in d-v or v appears in d+u."""
        pairs = set()
        deg = self.degree_of
        for k in range(1, len(self.basis)):
            for v in self.basis[k]:
                for u in self.bd_minus[v].terms:
                    pairs.add((u, v))
                for u in self.bd_plus[v].terms:
                    pairs.add((v, u))
        del deg
        return pairs

    @staticmethod
    def _closure(pairs, names):
        reach = {n: set() for n in names}
        for a, b in pairs:
            reach[a].add(b)
        changed = True
        while changed:
            changed = False
            for a in names:
                extra = set()
                for b in reach[a]:
                    extra |= reach[b] - reach[a]
                if extra:
                    reach[a] |= extra
                    changed = True
        return reach

    def leN_reach(self):
        cached = self.__dict__.get("_leN_reach")
        if cached is None:
            cached = self._closure(self.leN_onestep(), self.all_names())
            object.__setattr__(self, "_leN_reach", cached)
        return cached

    def basis_flags(self) -> dict[str, bool]:
        """unital / loop_free / strongly_loop_free."""
        unital = True
        for name in self.all_names():
            atom = self.atom(name)
            if atom.top_dim == 0:
                if self.augment(atom.top) != 1:
                    unital = False
            else:
                lo_minus, lo_plus = atom.levels[0]
                if self.augment(lo_minus) != 1 or self.augment(lo_plus) != 1:
                    unital = False
        names = self.all_names()
        loop_free = True
        for i in range(max(0, len(self.basis) - 1)):
            reach = self._closure(self.order_onestep(i), names)
            if any(a in reach[a] for a in names):
                loop_free = False
                break
        reach = self.leN_reach()
        strongly = not any(a in reach[a] for a in names)
        if strongly:
            assert loop_free, "strong loop-freeness must imply loop-freeness"
        return {"unital": unital, "loop_free": loop_free,
                "strongly_loop_free": strongly}

    def is_strong(self) -> bool:
        flags = self.basis_flags()
        return flags["unital"] and flags["strongly_loop_free"]

    def linear_order(self) -> list | None:
        """Total order on basis elements extending the one-step relation;
        None when the closure is not a strict total order."""
        reach = self.leN_reach()
        names = self.all_names()
        if any(a in reach[a] for a in names):
            return None
        for a, b in itertools.combinations(names, 2):
            if b not in reach[a] and a not in reach[b]:
                return None
        return sorted(names, key=lambda a: len(reach[a]), reverse=True)

    # -- subcomplexes and boundaries ----------------------------------------

    def closure(self, names) -> frozenset:
        """Smallest basis subset containing names and closed under boundary
        supports."""
        out = set()
        stack = list(names)
        while stack:
            n = stack.pop()
            if n in out:
                continue
            out.add(n)
            if self.degree(n) >= 1:
                stack.extend(self.bd_plus[n].terms)
                stack.extend(self.bd_minus[n].terms)
        return frozenset(out)

    def subcomplex(self, names) -> "Adc":
        """Generated subcomplex on a boundary-closed set of names."""
        names = frozenset(names)
        assert names == self.closure(names), "subset must be closed"
        basis = tuple(tuple(n for n in lv if n in names) for lv in self.basis)
        while len(basis) > 1 and not basis[-1]:
            basis = basis[:-1]
        return Adc(basis,
                   {n: c for n, c in self.bd_plus.items() if n in names},
                   {n: c for n, c in self.bd_minus.items() if n in names},
                   {n: v for n, v in self.aug.items() if n in names})

    def extremal(self, k: int, sign: str) -> frozenset:
        """Degree-k elements minimal (sign '-') or maximal ('+') for the
        one-step relation through degree-(k+1) elements.

        Whiskers appearing on both sides of a boundary cancel here: the
        relation goes through the canonical parts of the differential.
        """
        if k + 1 >= len(self.basis):
            return frozenset(self.basis[k])
        excluded = set()
        for w in self.basis[k + 1]:
            diff = self.boundary(w)
            part = diff.positive_part() if sign == "-" \
                else diff.negative_part()
            excluded |= set(part.terms)
        return frozenset(n for n in self.basis[k] if n not in excluded)

    def boundary_subcomplex(self, k: int, sign: str) -> tuple["Adc", "AdcMorphism"]:
        """The k-source (sign '-') or k-target ('+') subcomplex: generated
        by the extremal degree-k elements of the given sign together with
        the extremal elements of both signs at every lower degree."""
        if k >= self.dim:
            raise ValueError("k must be below the dimension")
        keep = set(self.extremal(k, sign))
        for q in range(k):
            keep |= set(self.extremal(q, "-")) | set(self.extremal(q, "+"))
        sub = self.subcomplex(self.closure(keep))
        incl = AdcMorphism(sub, self,
                           {n: Combi.unit(n) for n in sub.all_names()})
        return sub, incl

    # -- canonical form -----------------------------------------------------

    def canonical_key(self):
        """Structure tuple invariant under renaming; complete for complexes
        whose basis is totally ordered by the one-step closure."""
        order = self.linear_order()
        if order is None:
            raise ValueError("canonical form requires a linear complex")
        index = {n: i for i, n in enumerate(order)}
        deg = self.degree_of

        def comb_key(c):
            return tuple(sorted((index[k], v) for k, v in c.terms.items()))

        rows = []
        for n in order:
            k = deg[n]
            if k == 0:
                rows.append((k, self.aug[n], (), ()))
            else:
                rows.append((k, 0, comb_key(self.bd_minus[n]),
                             comb_key(self.bd_plus[n])))
        return tuple(rows)

    def canonical_match(self, other: "Adc") -> dict | None:
        """Name dictionary self -> other realizing the canonical
        isomorphism, or None if the canonical forms differ."""
        try:
            if self.canonical_key() != other.canonical_key():
                return None
        except ValueError:
            return None
        return dict(zip(self.linear_order(), other.linear_order()))


@dataclass(frozen=True)
class Atom:
    """Atom tower: per level below the top a (minus, plus) pair, then the top."""

    levels: tuple[tuple[Combi, Combi], ...]
    top: Combi
    top_dim: int

    def as_tuple(self):
        return self.levels, self.top, self.top_dim


def make_adc(basis_by_degree, boundaries, aug=None) -> Adc:
    """Convenience constructor.

    boundaries maps name -> (minus, plus) where each side is a dict or a
    list of (name, coeff); aug defaults to 1 on every degree-0 element.
    """
    basis = tuple(tuple(lv) for lv in basis_by_degree)
    bd_plus, bd_minus = {}, {}
    for name, (mi, pl) in boundaries.items():
        bd_minus[name] = mi if isinstance(mi, Combi) else Combi(mi)
        bd_plus[name] = pl if isinstance(pl, Combi) else Combi(pl)
    if aug is None:
        aug = {n: 1 for n in basis[0]}
    return Adc(basis, bd_plus, bd_minus, aug)


def globe_adc(k: int) -> Adc:
    """The k-globe: two elements per degree below k and a single top cell.

    Names: g{q}m / g{q}p below the top, g{k} on top.
    """
    if k == 0:
        return make_adc([("g0",)], {})
    basis = [("g0m", "g0p")]
    boundaries = {}
    for q in range(1, k):
        basis.append((f"g{q}m", f"g{q}p"))
        for s in "mp":
            boundaries[f"g{q}{s}"] = ({f"g{q-1}m": 1}, {f"g{q-1}p": 1})
    basis.append((f"g{k}",))
    boundaries[f"g{k}"] = ({f"g{k-1}m": 1}, {f"g{k-1}p": 1})
    return make_adc(basis, boundaries)


def globe_names(k: int):
    """(levels, top): per degree q < k the (minus, plus) names, then the top."""
    if k == 0:
        return [], "g0"
    levels = [(f"g{q}m", f"g{q}p") for q in range(k)]
    return levels, f"g{k}"


class AdcMorphism:
    """Degree-preserving map sending basis elements to non-negative
    combinations, commuting with d = d+ - d- and the augmentation."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: Adc, target: Adc, images: dict, check=True):
        self.source = source
        self.target = target
        self.images = {n: (c if isinstance(c, Combi) else Combi(c))
                       for n, c in images.items()}
        if check:
            problems = self.validate()
            assert not problems, f"invalid morphism: {problems[:3]}"

    def validate(self) -> list[str]:
        problems = []
        sdeg = self.source.degree_of
        tdeg = self.target.degree_of
        for n in self.source.all_names():
            if n not in self.images:
                problems.append(f"{n}: no image")
                continue
            img = self.images[n]
            if not img.is_nonneg():
                problems.append(f"{n}: image not non-negative")
            k = sdeg[n]
            for u in img.terms:
                if tdeg.get(u) != k:
                    problems.append(f"{n}: image crosses degrees")
            if k == 0:
                if self.target.augment(img) != self.source.aug[n]:
                    problems.append(f"{n}: augmentation not preserved")
            else:
                lhs = self.apply(self.source.boundary(n))
                rhs = self.target.diff(img, k)
                if lhs != rhs:
                    problems.append(f"{n}: boundary not preserved")
        return problems

    def apply(self, comb: Combi) -> Combi:
        return comb.apply(self.images)

    def __call__(self, name) -> Combi:
        return self.images[name]

    def compose(self, first: "AdcMorphism") -> "AdcMorphism":
        """self o first."""
        assert first.target is self.source or \
            first.target.basis == self.source.basis
        return AdcMorphism(first.source, self.target,
                           {n: self.apply(c) for n, c in first.images.items()},
                           check=False)

    def __eq__(self, other):
        return (isinstance(other, AdcMorphism)
                and self.source.basis == other.source.basis
                and self.target.basis == other.target.basis
                and self.images == other.images)

    def __hash__(self):
        return hash(tuple(sorted((n, c.key()) for n, c in self.images.items())))

    @staticmethod
    def identity(x: Adc) -> "AdcMorphism":
        return AdcMorphism(x, x, {n: Combi.unit(n) for n in x.all_names()},
                           check=False)

    # -- classification helpers (full classification lives in stn) ----------

    def image_support(self) -> frozenset:
        out = set()
        for c in self.images.values():
            out |= c.support()
        return frozenset(out)

    def is_active(self) -> bool:
        covered = self.target.closure(self.image_support())
        return covered == frozenset(self.target.all_names())

    def is_inert(self) -> bool:
        return all(len(c.terms) == 1 and set(c.terms.values()) == {1}
                   for c in self.images.values())

    def is_injective_on_basis(self) -> bool:
        singles = [next(iter(c.terms)) for c in self.images.values()
                   if len(c.terms) == 1 and set(c.terms.values()) == {1}]
        if len(singles) != len(self.images):
            return False
        return len(set(singles)) == len(singles)


class GluingRejected(ValueError):
    pass


def pushout(left: AdcMorphism, right: AdcMorphism, rename_prefix="r:",
            require_classes=True):
    """Pushout of  target(left) <-left- source -right-> target(right).

    ``left`` must be inert (an inclusion of a generated subcomplex up to
    renaming); the result keeps the right-hand target verbatim (renamed with
    the prefix) and keeps the left-hand target minus the closure of the
    image, rewriting boundaries through the identification.

    Returns (adc, left_leg, right_leg, rename) where rename maps right-hand
    names into the result.
    """
    if left.source is not right.source and \
            left.source.basis != right.source.basis:
        raise GluingRejected("legs must share their source")
    if not left.is_inert() or not left.is_injective_on_basis():
        raise GluingRejected("left leg must be inert and injective")
    if require_classes and not right.is_active():
        raise GluingRejected("right leg must be active")

    Y, Z, X = left.target, right.target, left.source
    removed = Y.closure(left.image_support())
    rename = {n: rename_prefix + n for n in Z.all_names()}
    inv = {left(n).key()[0][0]: n for n in X.all_names()}

    def rho(name) -> Combi:
        if name in removed:
            xname = inv.get(name)
            if xname is None:
                raise GluingRejected(
                    f"{name} lies in the glued closure but not in its image")
            return Combi({rename[k]: v for k, v in right(xname).terms.items()})
        return Combi.unit(name)

    def rewrite(comb: Combi) -> Combi:
        out = Combi()
        for k, v in comb.terms.items():
            out = out + rho(k).scale(v)
        return out

    basis = []
    depth = max(len(Y.basis), len(Z.basis))
    for q in range(depth):
        names = []
        if q < len(Y.basis):
            names.extend(n for n in Y.basis[q] if n not in removed)
        if q < len(Z.basis):
            names.extend(rename[n] for n in Z.basis[q])
        basis.append(tuple(names))
    bd_plus, bd_minus, aug = {}, {}, {}
    for n in Y.all_names():
        if n in removed:
            continue
        if Y.degree(n) == 0:
            aug[n] = Y.aug[n]
        else:
            # keep the rewritten sums: a cell whose boundary was replaced by
            # a whiskered pasting keeps the whiskers on both sides
            bd_plus[n] = rewrite(Y.bd_plus[n])
            bd_minus[n] = rewrite(Y.bd_minus[n])
    for n in Z.all_names():
        rn = rename[n]
        if Z.degree(n) == 0:
            aug[rn] = Z.aug[n]
        else:
            bd_plus[rn] = Combi({rename[k]: v
                                 for k, v in Z.bd_plus[n].terms.items()})
            bd_minus[rn] = Combi({rename[k]: v
                                  for k, v in Z.bd_minus[n].terms.items()})
    out = Adc(tuple(basis), bd_plus, bd_minus, aug)
    problems = out.validate()
    if problems:
        raise GluingRejected(f"glued complex invalid: {problems[:3]}")
    left_leg = AdcMorphism(Y, out, {n: rho(n) for n in Y.all_names()},
                           check=False)
    right_leg = AdcMorphism(Z, out,
                            {n: Combi.unit(rename[n]) for n in Z.all_names()},
                            check=False)
    assert not left_leg.validate() and not right_leg.validate()
    assert left_leg.compose(left) == right_leg.compose(right)
    return out, left_leg, right_leg, rename


def enumerate_morphisms(source: Adc, target: Adc, cap: int = 100000):
    """All morphisms source -> target with 0/1 images (complete between
    strong Steiner complexes, where images of basis elements are cells of
    multiplicity one).  Degreewise backtracking on boundary constraints."""
    names = []
    for q in range(len(source.basis)):
        names.extend(source.basis[q])
    tdeg = {q: list(target.basis[q]) if q < len(target.basis) else []
            for q in range(len(source.basis))}
    sdeg = source.degree_of

    def candidates(name, images):
        q = sdeg[name]
        pool = tdeg[q]
        if q == 0:
            want = source.aug[name]
            return [Combi.unit(t) for t in pool
                    if target.aug[t] == want]
        bnd = source.boundary(name).apply(images)
        out = []
        for r in range(len(pool) + 1):
            for sub in itertools.combinations(pool, r):
                c = Combi({t: 1 for t in sub})
                if target.diff(c, q) == bnd:
                    out.append(c)
        return out

    count = 0

    def rec(i, images):
        nonlocal count
        if i == len(names):
            yield AdcMorphism(source, target, dict(images), check=False)
            return
        n = names[i]
        for c in candidates(n, images):
            images[n] = c
            count += 1
            if count > cap:
                raise RuntimeError("morphism enumeration cap exceeded")
            yield from rec(i + 1, images)
            del images[n]

    yield from rec(0, {})
