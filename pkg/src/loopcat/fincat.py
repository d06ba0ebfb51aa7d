"""Small categories presented by finite data, and their loop/interval classes.

Three presentations are supported: a finite monoid (one object, Cayley
table), a finite multi-object category (explicit hom sets and composition
table), and the free monoid on a finite alphabet (one object, words as
morphisms, no cap stored — enumeration operations take one).

Composition convention, used everywhere in this package:
`compose(m2, m1)` is "m1 traversed first, then m2".  For a finite monoid
this is `table[m1][m2]`, i.e. the Cayley table is read left-to-right; for
the free monoid it is concatenation `m1 + m2`.

A loop is a closed chain of morphisms up to rotation: the class of
(X, g o f) equals the class of (Y, f o g) whenever f: X -> Y and g: Y -> X.
For finite presentations we saturate that relation by union-find over all
(object, endomorphism) pairs; for the one-object case it is exactly monoid
conjugacy, gh ~ hg.  Free-monoid loops are cyclic words, canonicalized to
the lexicographically least rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import DomainError


class NotComposable(DomainError):
    """Source/target mismatch in a composition."""


class NotClosed(DomainError):
    """A chain meant to be a loop does not return to its base object."""


@dataclass(frozen=True)
class Loop:
    """Canonical closed chain: base object plus canonical cycle of morphism ids."""

    base: Hashable
    cycle: tuple


@dataclass(frozen=True)
class IntervalClass:
    """Canonical (object, left element, right element) of a floating interval."""

    base: Hashable
    gl: Hashable
    gr: Hashable


def least_rotation(word: tuple) -> tuple:
    """Lexicographically minimal rotation (Booth's algorithm)."""
    n = len(word)
    if n == 0:
        return word
    s = word + word
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return s[k : k + n]


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller representative for determinism
            lo, hi = sorted((ra, rb))
            self.parent[hi] = lo


# ---------------------------------------------------------------------------


class FiniteMonoid:
    """Monoid on {0..size-1} with table[a][b] = "a then b"; validated at load."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int):
        self.table = tuple(tuple(row) for row in table)
        self.size = len(self.table)
        self.identity = identity
        n = self.size
        if not all(len(r) == n and all(0 <= x < n for x in r) for r in self.table):
            raise ValueError("malformed composition table")
        if not (0 <= identity < n):
            raise ValueError("identity index out of range")
        for g in range(n):
            if self.table[identity][g] != g or self.table[g][identity] != g:
                raise ValueError("identity is not two-sided")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(
                            f"composition not associative at ({a},{b},{c})"
                        )

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def conjugacy_classes(m: FiniteMonoid) -> list[list[int]]:
    """Finest partition closed under gh ~ hg; ordinary conjugacy for groups."""
    uf = _UnionFind()
    for g in range(m.size):
        uf.find(g)
        for h in range(m.size):
            uf.union(m.mul(g, h), m.mul(h, g))
    classes: dict[int, list[int]] = {}
    for g in range(m.size):
        classes.setdefault(uf.find(g), []).append(g)
    return [sorted(v) for _, v in sorted(classes.items())]


class MonoidCategory:
    """The one-object category with endomorphism monoid `monoid`."""

    def __init__(self, monoid: FiniteMonoid):
        self.monoid = monoid
        self.objects = (0,)
        self._loop_reps: dict | None = None

    def source(self, m: int):
        return 0

    def target(self, m: int):
        return 0

    def identity(self, obj) -> int:
        return self.monoid.identity

    def hom(self, x, y) -> list[int]:
        return list(range(self.monoid.size))

    def compose(self, m2: int, m1: int) -> int:
        return self.monoid.mul(m1, m2)

    def loop_class(self, base, chain: Sequence[int]) -> Loop:
        e = compose_path(self, list(chain), at=base)
        if self._loop_reps is None:
            self._loop_reps = {
                g: min(cls) for cls in conjugacy_classes(self.monoid) for g in cls
            }
        return Loop(0, (self._loop_reps[e],))


class TableCategory:
    """Finite category: explicit objects, hom sets, and composition rule.

    `morphisms` maps id -> (source, target); `compose_rule(m2, m1)` gives the
    composite id for composable pairs.  Associativity and identities are
    verified exhaustively at construction.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        morphisms: dict,
        identities: dict,
        compose_rule: Callable,
    ):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self._compose = compose_rule
        self._homs: dict[tuple, list] = {}
        for m, (s, t) in self.morphisms.items():
            if s not in self.objects or t not in self.objects:
                raise ValueError(f"morphism {m!r} has unknown endpoint")
            self._homs.setdefault((s, t), []).append(m)
        for hom in self._homs.values():
            hom.sort(key=repr)
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                raise ValueError(f"missing or mistyped identity at {x!r}")
        self._validate()
        self._loop_reps: dict | None = None

    def _validate(self):
        for m, (s, t) in self.morphisms.items():
            if self.compose(m, self.identities[s]) != m:
                raise ValueError(f"right identity fails at {m!r}")
            if self.compose(self.identities[t], m) != m:
                raise ValueError(f"left identity fails at {m!r}")
        # associativity over all composable triples
        for f, (fs, ft) in self.morphisms.items():
            for (s2, t2), gs in self._homs.items():
                if s2 != ft:
                    continue
                for g in gs:
                    gf = self.compose(g, f)
                    for (s3, t3), hs in self._homs.items():
                        if s3 != t2:
                            continue
                        for h in hs:
                            if self.compose(h, gf) != self.compose(
                                self.compose(h, g), f
                            ):
                                raise ValueError(
                                    f"associativity fails at ({h!r},{g!r},{f!r})"
                                )

    def source(self, m):
        return self.morphisms[m][0]

    def target(self, m):
        return self.morphisms[m][1]

    def identity(self, obj):
        return self.identities[obj]

    def hom(self, x, y) -> list:
        return list(self._homs.get((x, y), []))

    def compose(self, m2, m1):
        if self.target(m1) != self.source(m2):
            raise NotComposable(f"cannot compose {m2!r} after {m1!r}")
        return self._compose(m2, m1)

    def loop_class(self, base, chain: Sequence) -> Loop:
        e = compose_path(self, list(chain), at=base)
        if self._loop_reps is None:
            self._loop_reps = self._saturate_loops()
        obj, endo = self._loop_reps[(base, e)]
        return Loop(obj, (endo,))

    def _saturate_loops(self) -> dict:
        uf = _UnionFind()
        key = {}  # sortable key -> (obj, endo)
        for x in self.objects:
            for e in self.hom(x, x):
                k = (self.objects.index(x), repr(e))
                key[k] = (x, e)
                uf.find(k)
        for x in self.objects:
            for y in self.objects:
                for b in self.hom(x, y):
                    for c in self.hom(y, x):
                        kx = (self.objects.index(x), repr(self.compose(c, b)))
                        ky = (self.objects.index(y), repr(self.compose(b, c)))
                        uf.union(kx, ky)
        return {
            key[k]: key[uf.find(k)] for k in key
        }


class FreeMonoidCategory:
    """One object; morphisms are words (tuples of letter indices)."""

    def __init__(self, alphabet: Sequence[str]):
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters")
        self.objects = (0,)

    def source(self, m):
        return 0

    def target(self, m):
        return 0

    def identity(self, obj) -> tuple:
        return ()

    def compose(self, m2: tuple, m1: tuple) -> tuple:
        return tuple(m1) + tuple(m2)

    def loop_class(self, base, chain: Sequence[tuple]) -> Loop:
        word: tuple = ()
        for m in chain:
            word = word + tuple(m)
        return Loop(0, least_rotation(word))

    def word(self, text: str) -> tuple:
        """Letters by name, e.g. word('aba') over alphabet ('a','b')."""
        idx = {a: i for i, a in enumerate(self.alphabet)}
        return tuple(idx[ch] for ch in text)

    def words_up_to(self, cap: int) -> list[tuple]:
        """All words of length <= cap, shortlex order."""
        out: list[tuple] = [()]
        frontier: list[tuple] = [()]
        for _ in range(cap):
            frontier = [w + (a,) for w in frontier for a in range(len(self.alphabet))]
            out.extend(frontier)
        return out


def compose_path(cat, path: Sequence, at=None):
    """Compose a traversal-ordered path of morphisms; empty path needs `at`."""
    if not path:
        if at is None:
            raise ValueError("empty path requires an object")
        return cat.identity(at)
    acc = path[0]
    if at is not None and cat.source(acc) != at:
        raise NotComposable(f"path does not start at {at!r}")
    for m in path[1:]:
        if cat.target(acc) != cat.source(m):
            raise NotComposable(f"cannot continue path with {m!r}")
        acc = cat.compose(m, acc)
    return acc


def loop_normalize(cat, base, chain: Sequence) -> Loop:
    """Canonical Loop of a closed chain based at `base`."""
    if not chain:
        return cat.loop_class(base, [])
    if cat.source(chain[0]) != base or cat.target(chain[-1]) != base:
        raise NotClosed(f"chain does not close up at {base!r}")
    for a, b in zip(chain, chain[1:]):
        if cat.target(a) != cat.source(b):
            raise NotComposable("chain is not composable")
    return cat.loop_class(base, chain)


# ---------------------------------------------------------------------------
# boundary data: right-set and left-set actions with interval classes


class BoundaryDatum:
    """Finite action data: sets Gr(X), Gl(X) and compatible morphism actions.

    `gr_action(m, g)` maps g in Gr(source(m)) to Gr(target(m)); `gl_action(m, g)`
    maps g in Gl(target(m)) to Gl(source(m)).  Functoriality is checked at load
    for finite categories.
    """

    def __init__(self, cat, gr_sets, gl_sets, gr_action, gl_action, validate=True):
        self.cat = cat
        self.gr_sets = {x: tuple(v) for x, v in gr_sets.items()}
        self.gl_sets = {x: tuple(v) for x, v in gl_sets.items()}
        self._gr = gr_action
        self._gl = gl_action
        self._interval_reps: dict | None = None
        if validate:
            self._validate()

    def _validate(self):
        for x in self.cat.objects:
            i = self.cat.identity(x)
            for g in self.gr_sets[x]:
                assert self.gr(i, g) == g, "right action violates identity"
            for g in self.gl_sets[x]:
                assert self.gl(i, g) == g, "left action violates identity"
        for x in self.cat.objects:
            for y in self.cat.objects:
                for b in self.cat.hom(x, y):
                    for z in self.cat.objects:
                        for c in self.cat.hom(y, z):
                            cb = self.cat.compose(c, b)
                            for g in self.gr_sets[x]:
                                assert self.gr(cb, g) == self.gr(c, self.gr(b, g)), (
                                    "right action violates composition"
                                )
                            for g in self.gl_sets[z]:
                                assert self.gl(cb, g) == self.gl(b, self.gl(c, g)), (
                                    "left action violates composition"
                                )

    def gr(self, m, g):
        return self._gr(m, g)

    def gl(self, m, g):
        return self._gl(m, g)

    def interval_class(self, obj, gl, gr) -> IntervalClass:
        """Canonical class of the pair (gl, gr) at obj under moving morphisms across."""
        if self._interval_reps is None:
            self._interval_reps = self._saturate_intervals()
        return IntervalClass(*self._interval_reps[(obj, gl, gr)])

    def _saturate_intervals(self) -> dict:
        uf = _UnionFind()
        oix = {x: i for i, x in enumerate(self.cat.objects)}
        key = {}
        for x in self.cat.objects:
            for gl in self.gl_sets[x]:
                for gr in self.gr_sets[x]:
                    k = (oix[x], repr(gl), repr(gr))
                    key[k] = (x, gl, gr)
                    uf.find(k)
        for x in self.cat.objects:
            for y in self.cat.objects:
                for b in self.cat.hom(x, y):
                    # (gl . b, gr) at x  ~  (gl, b . gr) at y
                    for gl in self.gl_sets[y]:
                        for gr in self.gr_sets[x]:
                            kx = (oix[x], repr(self.gl(b, gl)), repr(gr))
                            ky = (oix[y], repr(gl), repr(self.gr(b, gr)))
                            uf.union(kx, ky)
        return {key[k]: key[uf.find(k)] for k in key}


class FreeBoundary:
    """The free monoid acting on itself on both sides; elements are words.

    Interval classes are read off by concatenation: the pair (gl, gr) at the
    single object is canonically the word gr + gl with empty left part.
    """

    def __init__(self, cat: FreeMonoidCategory):
        self.cat = cat

    def gr(self, m: tuple, g: tuple) -> tuple:
        return tuple(g) + tuple(m)

    def gl(self, m: tuple, g: tuple) -> tuple:
        return tuple(m) + tuple(g)

    def interval_class(self, obj, gl: tuple, gr: tuple) -> IntervalClass:
        return IntervalClass(0, (), tuple(gr) + tuple(gl))


# ---------------------------------------------------------------------------
# standard examples and JSON loading


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid([[(a + b) % n for b in range(n)] for a in range(n)], 0)


def symmetric_group(n: int) -> FiniteMonoid:
    """S_n with elements in lexicographic one-line order; table left-to-right."""
    from itertools import permutations

    elems = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    # "a then b": apply a first, then b
    table = [
        [index[tuple(b[a[i]] for i in range(n))] for b in elems] for a in elems
    ]
    return FiniteMonoid(table, index[tuple(range(n))])


def monoid_from_json(doc: dict) -> FiniteMonoid:
    body = doc["monoid"]
    m = FiniteMonoid(body["table"], body["identity"])
    if m.size != body["size"]:
        raise ValueError("declared size does not match table")
    return m


def category_from_json(doc: dict) -> TableCategory:
    """Multi-object schema: objects, morphisms with endpoints, identities, triples."""
    body = doc["category"]
    objects = list(body["objects"])
    morphisms = {
        m["name"]: (m["source"], m["target"]) for m in body["morphisms"]
    }
    identities = dict(body["identities"])
    pairs = {}
    for m2, m1, result in body["compose"]:
        pairs[(m2, m1)] = result
    for name, (s, t) in morphisms.items():
        pairs.setdefault((identities[t], name), name)
        pairs.setdefault((name, identities[s]), name)

    def rule(m2, m1):
        try:
            return pairs[(m2, m1)]
        except KeyError:
            raise ValueError(f"composition table missing ({m2!r}, {m1!r})") from None

    return TableCategory(objects, morphisms, identities, rule)


def free_monoid_from_json(doc: dict) -> FreeMonoidCategory:
    return FreeMonoidCategory(doc["free_monoid"]["letters"])
