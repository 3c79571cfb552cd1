"""Finite groups by multiplication table and their simplicial actions."""

from __future__ import annotations

from itertools import permutations
from typing import Mapping, Sequence

from .chains import ChainComplex, GroupAlgebraComplex
from .linalg import Coefficients, ExactMatrix
from .simplicial import SimplicialComplex, SimplicialPair, Subdivision, _sort_sign

__all__ = ["FiniteGroup", "GroupAction"]


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a][b]`` is the index of ``a * b``.  The group axioms are
    checked on construction.
    """

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, name: str = "",
                 labels: Sequence[str] | None = None):
        self.table = [list(r) for r in table]
        self.order = n = len(self.table)
        self.identity = identity
        self.name = name or f"table{n}"
        self.labels = list(labels) if labels else [str(i) for i in range(n)]
        if n == 0:
            raise ValueError("empty group")
        if any(len(r) != n for r in self.table):
            raise ValueError("multiplication table is not square")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("table entries out of range")
        if not 0 <= identity < n:
            raise ValueError("identity out of range")
        e = identity
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise ValueError("identity law fails")
        self._inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == e:
                    self._inv[a] = b
                    break
            if self._inv[a] is None or self.table[self._inv[a]][a] != e:
                raise ValueError(f"element {a} has no inverse")
        for a in range(n):
            ta = self.table[a]
            for b in range(n):
                ab = ta[b]
                tb = self.table[b]
                tab = self.table[ab]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise ValueError("multiplication is not associative")

    # constructors -----------------------------------------------------
    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], 0, name="trivial")

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        if m < 1:
            raise ValueError("cyclic group order must be positive")
        return cls([[(a + b) % m for b in range(m)] for a in range(m)], 0,
                   name="trivial" if m == 1 else f"cyclic:{m}")

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """Permutations of ``range(n)`` in lexicographic order; ``(a*b)(i) = a(b(i))``."""
        if n < 1:
            raise ValueError("symmetric group degree must be positive")
        perms = list(permutations(range(n)))
        pos = {p: i for i, p in enumerate(perms)}
        table = [[pos[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
        labels = ["".join(str(x) for x in p) for p in perms]
        return cls(table, 0, name=f"symmetric:{n}", labels=labels)

    # structure --------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def power(self, a: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def generator(self) -> int | None:
        """An element of full order, if the group is cyclic."""
        for a in range(self.order):
            if self.element_order(a) == self.order:
                return a
        return None

    @property
    def is_cyclic(self) -> bool:
        return self.generator() is not None

    def closure(self, gens: Sequence[int]) -> list[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.identity == other.identity and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.identity, tuple(map(tuple, self.table))))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


class GroupAction:
    """An action of a finite group on a simplicial complex by vertex permutations.

    ``perms[g][v]`` is the image of vertex index ``v`` under ``g``.
    """

    def __init__(self, group: FiniteGroup, space: SimplicialComplex,
                 perms: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]):
        self.group = group
        self.space = space
        if not isinstance(perms, Mapping):
            perms = dict(enumerate(perms))
        n = len(space.vertices)
        self.perms = {}
        for g in range(group.order):
            if g not in perms:
                raise ValueError(f"no permutation given for group element {g}")
            p = list(perms[g])
            if sorted(p) != list(range(n)):
                raise ValueError(f"element {g} does not permute the vertices")
            self.perms[g] = p
        for v in range(n):
            if self.perms[group.identity][v] != v:
                raise ValueError("identity does not act trivially")
        for a in range(group.order):
            for b in range(group.order):
                ab = group.mul(a, b)
                pa, pb = self.perms[a], self.perms[b]
                if any(pa[pb[v]] != self.perms[ab][v] for v in range(n)):
                    raise ValueError("permutations do not satisfy the group law")
        for f in space.facets:
            for g in range(group.order):
                if tuple(sorted(self.perms[g][v] for v in f)) not in space:
                    raise ValueError("action does not preserve the complex")

    @classmethod
    def trivial(cls, group: FiniteGroup, space: SimplicialComplex) -> "GroupAction":
        ident = list(range(len(space.vertices)))
        return cls(group, space, {g: ident for g in range(group.order)})

    @classmethod
    def from_generators(cls, group: FiniteGroup, space: SimplicialComplex,
                        generators: Mapping[int, Sequence[int]]) -> "GroupAction":
        """Extend permutations given on generating elements to the whole group."""
        n = len(space.vertices)
        perms: dict[int, list[int]] = {group.identity: list(range(n))}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, pg in generators.items():
                    y = group.mul(g, x)
                    img = [pg[perms[x][v]] for v in range(n)]
                    if y in perms:
                        if perms[y] != img:
                            raise ValueError("generator permutations are inconsistent with the group")
                    else:
                        perms[y] = img
                        nxt.append(y)
            frontier = nxt
        if len(perms) != group.order:
            raise ValueError("the given elements do not generate the group")
        return cls(group, space, perms)

    # simplices --------------------------------------------------------
    def apply(self, g: int, s: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
        return _sort_sign([self.perms[g][v] for v in s])

    def stabilizer(self, s: tuple[int, ...]) -> list[int]:
        return [g for g in range(self.group.order) if self.apply(g, s)[0] == s]

    def is_regular(self) -> bool:
        """Every element fixing a simplex setwise fixes it pointwise."""
        for s in self.space.all_simplices():
            for g in self.stabilizer(s):
                if any(self.perms[g][v] != v for v in s):
                    return False
        return True

    def is_free(self) -> bool:
        return all(len(self.stabilizer(s)) == 1 for s in self.space.all_simplices())

    def stabilizer_orders(self) -> dict[int, int]:
        """Histogram: stabilizer order -> number of simplices."""
        hist: dict[int, int] = {}
        for s in self.space.all_simplices():
            k = len(self.stabilizer(s))
            hist[k] = hist.get(k, 0) + 1
        return dict(sorted(hist.items()))

    def orbits(self, k: int) -> list[list[tuple[int, ...]]]:
        seen = set()
        out = []
        for s in self.space.simplices(k):
            if s in seen:
                continue
            orb = sorted({self.apply(g, s)[0] for g in range(self.group.order)})
            seen.update(orb)
            out.append(orb)
        return out

    def is_stable(self, sub: SimplicialPair) -> bool:
        inf = sub.infinity_simplices
        return all(self.apply(g, s)[0] in inf for s in inf for g in range(self.group.order))

    def subdivided(self, sub: Subdivision) -> "GroupAction":
        """The induced action on a barycentric subdivision."""
        inv = {b: s for s, b in sub.barycenter.items()}
        perms = {}
        for g in range(self.group.order):
            perms[g] = [sub.barycenter[self.apply(g, inv[b])[0]] for b in range(len(inv))]
        return GroupAction(self.group, sub.subdivided, perms)

    def chain_action(self, complex: ChainComplex, basis: Mapping[int, Sequence[tuple[int, ...]]],
                     c: Coefficients) -> GroupAlgebraComplex:
        """Signed permutation matrices on a (relative) simplicial chain complex."""
        action = {}
        for k, simplices in basis.items():
            pos = {s: i for i, s in enumerate(simplices)}
            n = len(simplices)
            mats = {}
            for g in range(self.group.order):
                entries = []
                for j, s in enumerate(simplices):
                    t, sign = self.apply(g, s)
                    if t not in pos:
                        raise ValueError("at_infinity not G-stable")
                    entries.append((pos[t], j, sign))
                mats[g] = ExactMatrix.from_entries(n, n, entries).reduce(c)
            action[k] = mats
        return GroupAlgebraComplex(complex, self.group, action)
