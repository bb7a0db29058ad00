"""Calculus of monotone maps between finite linear orders [n] = {0, ..., n}.

Provides adjoints, the surjectivity characterizations, pushouts of active
injective cospans, the string/grid combinatorics of staircase squares, and
the climbing-sequence criterion deciding when a mediating square between two
parallel pairs of active maps exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class MonotoneMap:
    """An order preserving map [n] -> [m], stored as its value sequence."""

    source_size: int
    target_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        assert self.source_size >= 0 and self.target_size >= 0
        assert len(self.values) == self.source_size + 1
        assert all(0 <= v <= self.target_size for v in self.values)
        assert all(a <= b for a, b in zip(self.values, self.values[1:])), \
            "values must be weakly increasing"

    def __call__(self, x: int) -> int:
        return self.values[x]

    def __le__(self, other: "MonotoneMap") -> bool:
        assert self.is_parallel(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def is_parallel(self, other: "MonotoneMap") -> bool:
        return (self.source_size == other.source_size
                and self.target_size == other.target_size)

    @property
    def n(self) -> int:
        return self.source_size

    @property
    def m(self) -> int:
        return self.target_size

    @staticmethod
    def identity(n: int) -> "MonotoneMap":
        return MonotoneMap(n, n, tuple(range(n + 1)))

    @staticmethod
    def constant(n: int, m: int, value: int) -> "MonotoneMap":
        return MonotoneMap(n, m, (value,) * (n + 1))

    def compose(self, first: "MonotoneMap") -> "MonotoneMap":
        """self o first, i.e. apply ``first`` and then ``self``."""
        assert first.target_size == self.source_size
        return MonotoneMap(first.source_size, self.target_size,
                           tuple(self(v) for v in first.values))

    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target_size + 1))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_active(self) -> bool:
        """Endpoint preserving: f(0) = 0 and f(n) = m."""
        return self.values[0] == 0 and self.values[-1] == self.target_size

    def is_inert(self) -> bool:
        """Subinterval inclusion: consecutive values step by exactly one."""
        return all(b == a + 1 for a, b in zip(self.values, self.values[1:]))

    def preserves_min(self) -> bool:
        return self.values[0] == 0

    def preserves_max(self) -> bool:
        return self.values[-1] == self.target_size

    def concat(self, other: "MonotoneMap") -> "MonotoneMap":
        """Join of intervals: glue max of self's target to min of other's.

        Defined on active maps, where the shared endpoint makes the result
        single valued: [n]+[n'] -> [m]+[m'] acting blockwise.
        """
        assert self.is_active() and other.is_active()
        vals = self.values + tuple(self.target_size + v for v in other.values[1:])
        return MonotoneMap(self.source_size + other.source_size,
                           self.target_size + other.target_size, vals)


def all_maps(n: int, m: int):
    """All monotone maps [n] -> [m]."""
    for vals in itertools.combinations_with_replacement(range(m + 1), n + 1):
        yield MonotoneMap(n, m, vals)


def all_active_maps(n: int, m: int):
    for f in all_maps(n, m):
        if f.is_active():
            yield f


def adjoint(f: MonotoneMap, side: str) -> MonotoneMap | None:
    """Left or right adjoint of f, or None when it does not exist.

    The left adjoint exists iff f preserves the maximal element and is
    f^L(x) = min{i : x <= f(i)}; the right adjoint exists iff f preserves
    the minimal element and is f^R(x) = max{i : f(i) <= x}.
    """
    assert side in ("left", "right")
    n, m = f.source_size, f.target_size
    if side == "left":
        if not f.preserves_max():
            return None
        vals = tuple(min(i for i in range(n + 1) if x <= f(i))
                     for x in range(m + 1))
    else:
        if not f.preserves_min():
            return None
        vals = tuple(max(i for i in range(n + 1) if f(i) <= x)
                     for x in range(m + 1))
    return MonotoneMap(m, n, vals)


def galois_check(f: MonotoneMap, g: MonotoneMap, side: str) -> bool:
    """Brute-force adjunction oracle.

    side='left': g is left adjoint to f, i.e. g(x) <= y  iff  x <= f(y).
    side='right': g is right adjoint to f, i.e. y <= g(x)  iff  f(y) <= x.
    """
    assert g.source_size == f.target_size and g.target_size == f.source_size
    for x in range(f.target_size + 1):
        for y in range(f.source_size + 1):
            if side == "left":
                if (g(x) <= y) != (x <= f(y)):
                    return False
            else:
                if (y <= g(x)) != (f(y) <= x):
                    return False
    return True


def surjectivity_profile(f: MonotoneMap) -> dict[str, bool]:
    """The seven equivalent characterizations of surjectivity.

    Conservativity of an order map is injectivity, which decides the
    (co)monadicity entries.
    """
    fl = adjoint(f, "left")
    fr = adjoint(f, "right")
    idm = MonotoneMap.identity(f.target_size)
    return {
        "surjective": f.is_surjective(),
        "left_adjoint_section": fl is not None and f.compose(fl) == idm,
        "right_adjoint_section": fr is not None and f.compose(fr) == idm,
        "left_adjoint_injective": fl is not None and fl.is_injective(),
        "right_adjoint_injective": fr is not None and fr.is_injective(),
        "comonadic": fl is not None and fl.is_injective(),
        "monadic": fr is not None and fr.is_injective(),
    }


class PushoutRejected(ValueError):
    pass


@dataclass(frozen=True)
class DeltaPushout:
    """Pushout of a cospan of active injective maps out of [l]."""

    object_size: int                 # the pushout is [object_size]
    leg_from_first: MonotoneMap      # [n] -> [n+m-l]
    leg_from_second: MonotoneMap     # [m] -> [n+m-l]
    classes: tuple[tuple[tuple[str, int], ...], ...]  # merged-order description


def delta_pushout(a0: MonotoneMap, a1: MonotoneMap) -> DeltaPushout:
    """Pushout of [n] <-a0- [l] -a1-> [m] for active injective a0, a1.

    Requires that on every elementary interval (k, k+1) of [l] at least one
    of the two maps restricts to an identity; otherwise the cospan is
    rejected.  The result is [n+m-l] together with both legs and the merged
    order presented as equivalence classes of generators.
    """
    if a0.source_size != a1.source_size:
        raise PushoutRejected("legs must share their source")
    for a in (a0, a1):
        if not (a.is_active() and a.is_injective()):
            raise PushoutRejected("legs must be active and injective")
    l = a0.source_size
    for k in range(l):
        id0 = a0(k + 1) == a0(k) + 1
        id1 = a1(k + 1) == a1(k) + 1
        if not (id0 or id1):
            raise PushoutRejected(
                f"neither restriction to ({k}<{k + 1}) is an identity")

    classes: list[tuple[tuple[str, int], ...]] = []
    pos0: dict[int, int] = {}
    pos1: dict[int, int] = {}

    def emit(members):
        for side, x in members:
            (pos0 if side == "first" else pos1)[x] = len(classes)
        classes.append(tuple(members))

    for k in range(l + 1):
        emit((("first", a0(k)), ("second", a1(k))))
        if k < l:
            for x in range(a0(k) + 1, a0(k + 1)):
                emit((("first", x),))
            for x in range(a1(k) + 1, a1(k + 1)):
                emit((("second", x),))

    size = len(classes) - 1
    assert size == a0.target_size + a1.target_size - l
    b0 = MonotoneMap(a0.target_size, size,
                     tuple(pos0[x] for x in range(a0.target_size + 1)))
    b1 = MonotoneMap(a1.target_size, size,
                     tuple(pos1[x] for x in range(a1.target_size + 1)))
    return DeltaPushout(size, b0, b1, tuple(classes))


def pushout_is_universal(a0: MonotoneMap, a1: MonotoneMap,
                         po: DeltaPushout, max_cocone: int = 5) -> bool:
    """Check the universal property against all cocones into [s], s <= bound."""
    for s in range(max_cocone + 1):
        for f in all_maps(a0.target_size, s):
            for g in all_maps(a1.target_size, s):
                if f.compose(a0) != g.compose(a1):
                    continue
                mediators = [h for h in all_maps(po.object_size, s)
                             if h.compose(po.leg_from_first) == f
                             and h.compose(po.leg_from_second) == g]
                if len(mediators) != 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# strings and staircase squares


SIGNS = ("-", "*", "+")


@dataclass(frozen=True)
class LetterString:
    """A word in letters l_0 .. l_{alphabet_bound-1}, optionally signed.

    ``letters`` lists (index, sign) pairs in consumption order; the final
    letter carries sign None.  Plain grid strings leave every sign None.
    """

    letters: tuple[tuple[int, str | None], ...]
    alphabet_bound: int

    def __post_init__(self):
        assert all(0 <= i < self.alphabet_bound for i, _ in self.letters)
        for _, s in self.letters[:-1]:
            assert s is None or s in SIGNS
        if self.letters:
            assert self.letters[-1][1] is None, "final letter is unsigned"

    @staticmethod
    def plain(indices, alphabet_bound: int) -> "LetterString":
        return LetterString(tuple((i, None) for i in indices), alphabet_bound)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.letters)

    def counts(self) -> tuple[int, ...]:
        out = [0] * self.alphabet_bound
        for i in self.indices:
            out[i] += 1
        return tuple(out)


@dataclass(frozen=True)
class GridPoint:
    coordinates: tuple[int, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        assert len(self.coordinates) == len(self.bounds)
        assert all(0 <= x <= m for x, m in zip(self.coordinates, self.bounds))


class MultisetMismatch(ValueError):
    pass


def sq_membership(point: GridPoint, s: LetterString) -> bool:
    """Does the grid point lie in the staircase square of the string?

    (x_0, ..., x_{n-1}) belongs to sq(S) iff for every letter u and every
    s > u, the longest prefix of S containing at most x_u copies of l_u
    already contains at least x_s copies of l_s.
    """
    idx = s.indices
    n = s.alphabet_bound
    assert len(point.coordinates) == n
    assert all(m == c for m, c in zip(point.bounds, s.counts()))
    x = point.coordinates
    for u in range(n):
        # longest prefix with <= x[u] letters l_u
        seen_u = 0
        counts = [0] * n
        for i in idx:
            if i == u:
                if seen_u == x[u]:
                    break
                seen_u += 1
            counts[i] += 1
        else:
            counts = list(s.counts())
        for t in range(u + 1, n):
            if counts[t] < x[t]:
                return False
    return True


def spine(s: LetterString) -> tuple[GridPoint, ...]:
    """The injective staircase path of S through its grid."""
    bounds = s.counts()
    counts = [0] * s.alphabet_bound
    path = [GridPoint(tuple(counts), bounds)]
    for i in s.indices:
        counts[i] += 1
        path.append(GridPoint(tuple(counts), bounds))
    return tuple(path)


def _swap_predecessors(indices: tuple[int, ...]):
    """Strings obtained by one order-decreasing adjacent swap.

    Positions k, k+1 may swap when the later letter has the strictly
    smaller index; the swap moves it earlier and yields a smaller string.
    """
    for k in range(len(indices) - 1):
        if indices[k + 1] < indices[k]:
            yield indices[:k] + (indices[k + 1], indices[k]) + indices[k + 2:]


def string_order(s_prime: LetterString, s: LetterString) -> bool:
    """Swap-closure order: is S' <= S?

    Defined as the reflexive-transitive closure of single swaps that move a
    smaller letter before a bigger one.
    """
    if s_prime.alphabet_bound != s.alphabet_bound or \
            s_prime.counts() != s.counts():
        raise MultisetMismatch("strings must share their letter counts")
    start = s.indices
    goal = s_prime.indices
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for word in frontier:
            if word == goal:
                return True
            for smaller in _swap_predecessors(word):
                if smaller not in seen:
                    seen.add(smaller)
                    nxt.append(smaller)
        frontier = nxt
    return goal in seen


def spine_in_square(s_prime: LetterString, s: LetterString) -> bool:
    """The staircase-factoring characterization of the string order."""
    if s_prime.alphabet_bound != s.alphabet_bound or \
            s_prime.counts() != s.counts():
        raise MultisetMismatch("strings must share their letter counts")
    return all(sq_membership(p, s) for p in spine(s_prime))


# ---------------------------------------------------------------------------
# the climbing-sequence criterion


def climbing_count(f: MonotoneMap, g: MonotoneMap) -> int:
    """N_F for F = f^R o g, where f <= g are parallel active maps.

    a_0 = 0, a_{i+1} = min(p, F(a_i)+1); the count is the least i with
    F(a_i) = p.
    """
    assert f.is_active() and g.is_active() and f <= g
    fr = adjoint(f, "right")
    F = fr.compose(g)
    p = f.source_size
    a = 0
    i = 0
    while F(a) != p:
        a = min(p, F(a) + 1)
        i += 1
    return i


def n_values(u: MonotoneMap, v: MonotoneMap,
             f: MonotoneMap, g: MonotoneMap) -> tuple[int, int]:
    """(N_F, N_G) for the square criterion.

    F = u^R o v on [p], climbed directly; G = g^L o f on [n], climbed
    through its right adjoint.
    """
    for h in (u, v, f, g):
        assert h.is_active(), "criterion requires active maps"
    assert u.is_parallel(v) and f.is_parallel(g)
    assert u <= v and f <= g
    ur = adjoint(u, "right")
    F = ur.compose(v)
    p = u.source_size
    a, n_f = 0, 0
    while F(a) != p:
        a = min(p, F(a) + 1)
        n_f += 1
    gl = adjoint(g, "left")
    G = gl.compose(f)
    gr = adjoint(G, "right")
    assert gr is not None
    n = f.source_size
    b, n_g = 0, 0
    while gr(b) != n:
        b = min(n, gr(b) + 1)
        n_g += 1
    return n_f, n_g


def square_nonempty(u: MonotoneMap, v: MonotoneMap,
                    f: MonotoneMap, g: MonotoneMap) -> bool:
    """Criterion: a mediating square exists iff N_G <= N_F."""
    n_f, n_g = n_values(u, v, f, g)
    return n_g <= n_f


def square_nonempty_oracle(u: MonotoneMap, v: MonotoneMap,
                           f: MonotoneMap, g: MonotoneMap) -> bool:
    """Exhaustive search for a diagram (s, t, a, b) of active maps with
    s <= t, a <= b and f <= a.u.s <= b.v.t <= g."""
    n, m = f.source_size, f.target_size
    p, q = u.source_size, u.target_size
    candidates_st = list(all_active_maps(n, p))
    candidates_ab = list(all_active_maps(q, m))
    for s, t in itertools.product(candidates_st, repeat=2):
        if not s <= t:
            continue
        for a, b in itertools.product(candidates_ab, repeat=2):
            if not a <= b:
                continue
            lhs = a.compose(u).compose(s)
            rhs = b.compose(v).compose(t)
            if f <= lhs and lhs <= rhs and rhs <= g:
                return True
    return False


@dataclass(frozen=True)
class LaxPair:
    """An object of the join poset: two pairs of parallel active maps."""

    c0: MonotoneMap
    d0: MonotoneMap
    c1: MonotoneMap
    d1: MonotoneMap

    def __post_init__(self):
        for h in (self.c0, self.d0, self.c1, self.d1):
            if not h.is_active():
                raise ValueError("components must be active")
        if not (self.c0.is_parallel(self.d0) and self.c0 <= self.d0):
            raise ValueError("first pair must be parallel with c0 <= d0")
        if not (self.c1.is_parallel(self.d1) and self.c1 <= self.d1):
            raise ValueError("second pair must be parallel with c1 <= d1")

    def counts(self) -> tuple[int, int]:
        return (climbing_count(self.c0, self.d0),
                climbing_count(self.c1, self.d1))

    def dominates(self, other: "LaxPair") -> bool:
        a0, a1 = self.counts()
        b0, b1 = other.counts()
        return b0 <= a0 and b1 <= a1


def lax_join(x0: LaxPair, x1: LaxPair) -> LaxPair:
    """Componentwise concatenation; dominates both arguments."""
    y = LaxPair(x0.c0.concat(x1.c0), x0.d0.concat(x1.d0),
                x0.c1.concat(x1.c1), x0.d1.concat(x1.d1))
    assert y.dominates(x0) and y.dominates(x1)
    return y
