"""Finite simplicial complexes, pairs, subdivision and product chain maps.

Simplices are stored as increasing tuples of vertex indices; the global
vertex order fixes every orientation sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .chains import ChainComplex, ChainMap
from .linalg import Coefficients, ExactMatrix

__all__ = [
    "SimplicialComplex",
    "SimplicialPair",
    "Orientation",
    "Subdivision",
    "ProductChains",
    "boundary_complex",
    "relative_complex",
    "barycentric_subdivision",
    "subdivide_pair",
    "product",
    "product_pair",
    "ez_aw",
    "fundamental_chain",
    "orient",
    "simplicial_map",
]


def _sort_sign(seq: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort ``seq`` and return the permutation sign (0 if it repeats)."""
    s = list(seq)
    if len(set(s)) != len(s):
        return tuple(sorted(s)), 0
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return tuple(sorted(s)), sign


class SimplicialComplex:
    """A finite abstract simplicial complex on an ordered vertex list.

    ``vertices`` are string identifiers; ``facets`` are lists of
    identifiers.  Every declared vertex is a 0-simplex even if it lies in
    no facet.
    """

    def __init__(self, vertices: Sequence, facets: Iterable[Sequence], name: str = ""):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("malformed facet list: duplicate vertex identifiers")
        self.name = name
        self.index = {v: i for i, v in enumerate(self.vertices)}
        faces = set()
        for f in facets:
            ids = [str(v) for v in f]
            if not ids:
                raise ValueError("malformed facet list: empty facet")
            missing = [v for v in ids if v not in self.index]
            if missing:
                raise ValueError(f"malformed facet list: undeclared vertices {missing}")
            t = tuple(sorted(self.index[v] for v in ids))
            if len(set(t)) != len(t):
                raise ValueError(f"malformed facet list: repeated vertex in {ids}")
            faces.add(t)
        for i in range(len(self.vertices)):
            faces.add((i,))
        self._init_from_index_facets(faces)

    def _init_from_index_facets(self, faces):
        faces = set(faces)
        # keep maximal ones
        by_size = sorted(faces, key=len, reverse=True)
        maximal: list[tuple[int, ...]] = []
        covered: set = set()
        for f in by_size:
            if f in covered:
                continue
            maximal.append(f)
            for k in range(1, len(f) + 1):
                for sub in combinations(f, k):
                    covered.add(sub)
        self.facets = sorted(maximal)
        self._all = covered
        top = max((len(f) for f in self.facets), default=0) - 1
        self.dimension = top
        simp: dict[int, list] = {k: [] for k in range(top + 1)}
        for s in covered:
            simp[len(s) - 1].append(s)
        self._simplices = {k: sorted(v) for k, v in simp.items()}
        self._pos = {k: {s: i for i, s in enumerate(v)} for k, v in self._simplices.items()}

    @classmethod
    def from_index_facets(cls, vertices: Sequence[str], facets: Iterable[tuple[int, ...]],
                          name: str = "") -> "SimplicialComplex":
        obj = cls.__new__(cls)
        obj.vertices = list(vertices)
        obj.name = name
        obj.index = {v: i for i, v in enumerate(obj.vertices)}
        faces = {tuple(sorted(f)) for f in facets}
        faces.update((i,) for i in range(len(obj.vertices)))
        obj._init_from_index_facets(faces)
        return obj

    # queries ----------------------------------------------------------
    def simplices(self, k: int) -> list[tuple[int, ...]]:
        return self._simplices.get(k, [])

    def position(self, s: tuple[int, ...]) -> int:
        return self._pos[len(s) - 1][s]

    def __contains__(self, s) -> bool:
        return tuple(s) in self._all

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    @property
    def f_vector(self) -> list[int]:
        return [self.count(k) for k in range(self.dimension + 1)]

    def all_simplices(self) -> list[tuple[int, ...]]:
        return [s for k in range(self.dimension + 1) for s in self.simplices(k)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def labels(self, s: tuple[int, ...]) -> list[str]:
        return [self.vertices[i] for i in s]

    def facet_labels(self) -> list[list[str]]:
        return [self.labels(f) for f in self.facets]

    def is_pure(self) -> bool:
        return all(len(f) - 1 == self.dimension for f in self.facets)

    def subcomplex(self, faces: Iterable[Sequence]) -> "SimplicialComplex":
        """The subcomplex generated by ``faces`` (identifier lists).

        Its vertex list is the used vertices in ambient order.
        """
        idx = []
        for f in faces:
            t = tuple(sorted(self.index[str(v)] for v in f))
            if t not in self._all:
                raise ValueError(f"{list(f)} is not a simplex of the complex")
            idx.append(t)
        return self.subcomplex_from_indices(idx)

    def subcomplex_from_indices(self, faces: Iterable[tuple[int, ...]]) -> "SimplicialComplex":
        faces = [tuple(sorted(f)) for f in faces]
        used = sorted({v for f in faces for v in f})
        remap = {v: i for i, v in enumerate(used)}
        return SimplicialComplex.from_index_facets(
            [self.vertices[v] for v in used], [tuple(remap[v] for v in f) for f in faces])

    def embedding(self, sub: "SimplicialComplex") -> dict[int, int]:
        """Vertex index map of a subcomplex (matched by identifier)."""
        try:
            vmap = {i: self.index[v] for i, v in enumerate(sub.vertices)}
        except KeyError as e:
            raise ValueError(f"vertex {e} not in the ambient complex") from None
        for s in sub.all_simplices():
            if tuple(sorted(vmap[v] for v in s)) not in self._all:
                raise ValueError("not a subcomplex")
        return vmap

    def is_full_subcomplex(self, sub: "SimplicialComplex") -> bool:
        vmap = self.embedding(sub)
        vs = set(vmap.values())
        image = {tuple(sorted(vmap[v] for v in s)) for s in sub.all_simplices()}
        return all(s in image for s in self._all if set(s) <= vs)

    def full_subcomplex(self, vertex_ids: Iterable[str]) -> "SimplicialComplex":
        vs = {self.index[str(v)] for v in vertex_ids}
        return self.subcomplex_from_indices([s for s in self._all if set(s) <= vs])

    def complement_full(self, sub: "SimplicialComplex") -> "SimplicialComplex | None":
        """Full subcomplex on the vertices not used by ``sub``."""
        used = set(self.embedding(sub).values())
        rest = [s for s in self._all if not set(s) & used]
        if not rest:
            return None
        return self.subcomplex_from_indices(rest)

    def same_as(self, other: "SimplicialComplex") -> bool:
        return self.vertices == other.vertices and self.facets == other.facets

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.same_as(other)

    __hash__ = None

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"SimplicialComplex({nm}f={self.f_vector})"


@dataclass
class SimplicialPair:
    """A compact complex with a subcomplex ``at_infinity``; models the complement."""

    ambient: SimplicialComplex
    at_infinity: SimplicialComplex | None = None

    def __post_init__(self):
        if self.at_infinity is not None:
            if not self.at_infinity.vertices:
                self.at_infinity = None
            else:
                try:
                    self.ambient.embedding(self.at_infinity)
                except ValueError:
                    raise ValueError("A not a subcomplex") from None

    @property
    def is_compact(self) -> bool:
        return self.at_infinity is None

    @cached_property
    def infinity_simplices(self) -> frozenset:
        if self.at_infinity is None:
            return frozenset()
        vmap = self.ambient.embedding(self.at_infinity)
        return frozenset(tuple(sorted(vmap[v] for v in s)) for s in self.at_infinity.all_simplices())

    def open_simplices(self, k: int) -> list[tuple[int, ...]]:
        inf = self.infinity_simplices
        return [s for s in self.ambient.simplices(k) if s not in inf]


@dataclass
class Orientation:
    """Signs on top simplices (keyed by increasing index tuples)."""

    signs: dict[tuple[int, ...], int]

    def __post_init__(self):
        for s, v in self.signs.items():
            if v not in (1, -1):
                raise ValueError(f"orientation sign {v} on {s}")


# ---------------------------------------------------------------------------
# chain complexes


def _boundary_matrix(rows_list, row_pos, cols_list) -> ExactMatrix:
    entries = []
    for j, s in enumerate(cols_list):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            r = row_pos.get(face)
            if r is not None:
                entries.append((r, j, -1 if i % 2 else 1))
    return ExactMatrix.from_entries(len(rows_list), len(cols_list), entries)


def boundary_complex(x: SimplicialComplex, c: Coefficients) -> ChainComplex:
    """Simplicial chains ``C_*(x)`` with the alternating face signs."""
    dims = {k: x.count(k) for k in range(x.dimension + 1)}
    diffs = {}
    for k in range(1, x.dimension + 1):
        diffs[k] = _boundary_matrix(x.simplices(k - 1), x._pos[k - 1], x.simplices(k))
    basis = {k: list(x.simplices(k)) for k in dims}
    return ChainComplex(c, dims, diffs, basis)


def relative_complex(p: SimplicialPair, c: Coefficients) -> ChainComplex:
    """``C_*(ambient) / C_*(at_infinity)`` on the basis of open simplices."""
    x = p.ambient
    if p.is_compact:
        return boundary_complex(x, c)
    basis = {k: p.open_simplices(k) for k in range(x.dimension + 1)}
    pos = {k: {s: i for i, s in enumerate(v)} for k, v in basis.items()}
    dims = {k: len(v) for k, v in basis.items()}
    diffs = {k: _boundary_matrix(basis[k - 1], pos[k - 1], basis[k])
             for k in range(1, x.dimension + 1)}
    return ChainComplex(c, dims, diffs, {k: v for k, v in basis.items() if v})


def simplicial_map(x: SimplicialComplex, y: SimplicialComplex, vmap: Mapping[int, int],
                   c: Coefficients, source: ChainComplex | None = None,
                   target: ChainComplex | None = None) -> ChainMap:
    """Chain map of a vertex map (degenerate images go to zero)."""
    source = source or boundary_complex(x, c)
    target = target or boundary_complex(y, c)
    comps = {}
    for k in range(x.dimension + 1):
        entries = []
        for j, s in enumerate(x.simplices(k)):
            t, sign = _sort_sign([vmap[v] for v in s])
            if sign:
                if t not in y:
                    raise ValueError(f"vertex map does not send {s} to a simplex")
                entries.append((y.position(t), j, sign))
        comps[k] = ExactMatrix.from_entries(y.count(k), x.count(k), entries).reduce(c)
    return ChainMap(source, target, comps)


# ---------------------------------------------------------------------------
# barycentric subdivision


def _simplex_label(x: SimplicialComplex, s: tuple[int, ...]) -> str:
    return "[" + ",".join(x.vertices[v] for v in s) + "]"


@dataclass
class Subdivision:
    """``sd x`` together with the comparison chain maps.

    ``forward`` sends a simplex to the signed sum of the simplices of its
    subdivision; ``backward`` is induced by sending the barycenter of a
    simplex to its last vertex.  ``backward o forward`` is the identity.
    """

    original: SimplicialComplex
    subdivided: SimplicialComplex
    barycenter: dict[tuple[int, ...], int]
    forward: ChainMap
    backward: ChainMap


def _sd_structure(x: SimplicialComplex):
    order = sorted(x.all_simplices(), key=lambda s: (-len(s), s))
    bary = {s: i for i, s in enumerate(order)}
    labels = [_simplex_label(x, s) for s in order]
    flags = []

    def extend(chain):
        last = chain[-1]
        faces = [last[:i] + last[i + 1:] for i in range(len(last))] if len(last) > 1 else []
        if not faces:
            flags.append(chain)
            return
        for f in faces:
            extend(chain + [f])

    for f in x.facets:
        extend([f])
    facets = {tuple(sorted(bary[s] for s in fl)) for fl in flags}
    return order, bary, labels, facets


def barycentric_subdivision(x: SimplicialComplex, c: Coefficients | None = None) -> Subdivision:
    c = c or Coefficients.integers()
    order, bary, labels, facets = _sd_structure(x)
    sd = SimplicialComplex.from_index_facets(labels, facets, name=f"sd({x.name})" if x.name else "")
    cx = boundary_complex(x, c)
    csd = boundary_complex(sd, c)

    # forward: S(v) = b_v; S(s) = b_s * S(ds); b_s is the first vertex of every cone simplex
    images: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
    for k in range(x.dimension + 1):
        for s in x.simplices(k):
            b = bary[s]
            if k == 0:
                images[s] = {(b,): 1}
                continue
            acc: dict[tuple[int, ...], int] = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                sign = -1 if i % 2 else 1
                for t, v in images[face].items():
                    cone = (b,) + t
                    acc[cone] = acc.get(cone, 0) + sign * v
            images[s] = {t: v for t, v in acc.items() if v}
    fwd = {}
    for k in range(x.dimension + 1):
        entries = []
        for j, s in enumerate(x.simplices(k)):
            for t, v in images[s].items():
                entries.append((sd.position(t), j, v))
        fwd[k] = ExactMatrix.from_entries(sd.count(k), x.count(k), entries).reduce(c)
    forward = ChainMap(cx, csd, fwd)
    vmap = {bary[s]: max(s) for s in order}
    backward = simplicial_map(sd, x, vmap, c, csd, cx)
    return Subdivision(x, sd, bary, forward, backward)


def subdivide_pair(p: SimplicialPair) -> tuple[SimplicialPair, Subdivision]:
    sub = barycentric_subdivision(p.ambient)
    if p.is_compact:
        return SimplicialPair(sub.subdivided), sub
    inf = p.infinity_simplices
    sd = sub.subdivided
    inv = {b: s for s, b in sub.barycenter.items()}
    keep = [s for s in sd.all_simplices() if all(inv[v] in inf for v in s)]
    a = sd.subcomplex_from_indices(keep)
    return SimplicialPair(sd, a), sub


# ---------------------------------------------------------------------------
# products


def _shuffles(p: int, q: int):
    """Yield (x-step positions, sign) for all (p, q)-shuffles."""
    for pos in combinations(range(p + q), p):
        inv = sum(m - i for i, m in enumerate(pos))
        yield pos, (-1 if inv % 2 else 1)


def _path_vertices(s: tuple[int, ...], t: tuple[int, ...], xsteps, ny: int) -> tuple[int, ...]:
    i = j = 0
    out = [s[0] * ny + t[0]]
    xs = set(xsteps)
    for k in range(len(s) + len(t) - 2):
        if k in xs:
            i += 1
        else:
            j += 1
        out.append(s[i] * ny + t[j])
    return tuple(out)


def product(x: SimplicialComplex, y: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of ``x * y`` (vertex ``(a, b)`` has index ``a*ny + b``)."""
    ny = len(y.vertices)
    verts = [f"{a}.{b}" for a in x.vertices for b in y.vertices]
    facets = []
    for s in x.facets:
        for t in y.facets:
            p, q = len(s) - 1, len(t) - 1
            for pos, _ in _shuffles(p, q):
                facets.append(_path_vertices(s, t, pos, ny))
    name = f"{x.name}x{y.name}" if x.name and y.name else ""
    return SimplicialComplex.from_index_facets(verts, facets, name=name)


def product_pair(p: SimplicialPair, q: SimplicialPair) -> SimplicialPair:
    """``(X x Y, A x Y u X x B)``."""
    prod = product(p.ambient, q.ambient)
    ny = len(q.ambient.vertices)
    ia, ib = p.infinity_simplices, q.infinity_simplices
    keep = []
    for s in prod.all_simplices():
        xs = tuple(sorted({v // ny for v in s}))
        ys = tuple(sorted({v % ny for v in s}))
        if xs in ia or ys in ib:
            keep.append(s)
    if not keep:
        return SimplicialPair(prod)
    return SimplicialPair(prod, prod.subcomplex_from_indices(keep))


@dataclass
class ProductChains:
    """Tensor complex of two chain complexes with EZ and AW maps.

    ``tensor_basis[n]`` lists ``(p, i, j)``: simplex ``i`` of ``x`` in
    degree ``p`` tensored with simplex ``j`` of ``y`` in degree ``n - p``.
    """

    tensor: ChainComplex
    product_complex: ChainComplex
    product_space: SimplicialComplex
    tensor_basis: dict[int, list[tuple[int, int, int]]]
    ez: ChainMap
    aw: ChainMap


def _tensor_of(cx: ChainComplex, cy: ChainComplex, c: Coefficients):
    """Tensor product of two complexes supported in nonnegative degrees."""
    top = (cx.support or (0, -1))[1] + (cy.support or (0, -1))[1]
    basis = {}
    pos = {}
    for n in range(top + 1):
        b = []
        for p in range(n + 1):
            for i in range(cx.dim(p)):
                for j in range(cy.dim(n - p)):
                    b.append((p, i, j))
        if b:
            basis[n] = b
            pos[n] = {t: k for k, t in enumerate(b)}
    xcols = {k: m.column_dicts() for k, m in cx.d.items()}
    ycols = {k: m.column_dicts() for k, m in cy.d.items()}
    diffs = {}
    for n in range(1, top + 1):
        entries = []
        for col, (p, i, j) in enumerate(basis.get(n, [])):
            q = n - p
            for r, v in xcols.get(p, {}).get(i, {}).items():
                entries.append((pos[n - 1][(p - 1, r, j)], col, v))
            sign = -1 if p % 2 else 1
            for r, v in ycols.get(q, {}).get(j, {}).items():
                entries.append((pos[n - 1][(p, i, r)], col, sign * v))
        diffs[n] = ExactMatrix.from_entries(len(basis.get(n - 1, [])), len(basis.get(n, [])), entries)
    dims = {n: len(b) for n, b in basis.items()}
    return ChainComplex(c, dims, diffs, basis), basis, pos


def ez_aw(x: SimplicialComplex, y: SimplicialComplex, c: Coefficients) -> ProductChains:
    cx, cy = boundary_complex(x, c), boundary_complex(y, c)
    tensor, basis, pos = _tensor_of(cx, cy, c)
    prod = product(x, y)
    cp = boundary_complex(prod, c)
    ny = len(y.vertices)
    ez = {}
    for n, b in basis.items():
        entries = []
        for col, (p, i, j) in enumerate(b):
            s = x.simplices(p)[i]
            t = y.simplices(n - p)[j]
            for xsteps, sign in _shuffles(p, n - p):
                simplex = _path_vertices(s, t, xsteps, ny)
                entries.append((prod.position(simplex), col, sign))
        ez[n] = ExactMatrix.from_entries(cp.dim(n), len(b), entries).reduce(c)
    aw = {}
    for n in range(prod.dimension + 1):
        entries = []
        for col, simplex in enumerate(prod.simplices(n)):
            xs = [v // ny for v in simplex]
            ys = [v % ny for v in simplex]
            for p in range(n + 1):
                front = tuple(xs[:p + 1])
                back = tuple(ys[p:])
                if len(set(front)) != len(front) or len(set(back)) != len(back):
                    continue
                key = (p, x.position(front), y.position(back))
                entries.append((pos[n][key], col, 1))
        aw[n] = ExactMatrix.from_entries(tensor.dim(n), cp.dim(n), entries).reduce(c)
    return ProductChains(tensor, cp, prod, basis, ChainMap(tensor, cp, ez), ChainMap(cp, tensor, aw))


# ---------------------------------------------------------------------------
# orientation and fundamental chains

_NOT_MANIFOLD = "not a closed oriented manifold model"


def orient(x: SimplicialComplex) -> Orientation:
    """Find a coherent orientation of a closed pseudomanifold model.

    Signs are propagated across codimension-one faces starting from the
    first top simplex (+1) of each component; raises if incoherent.
    """
    d = x.dimension
    if d < 0 or not x.is_pure():
        raise ValueError(_NOT_MANIFOLD)
    tops = x.simplices(d)
    if d == 0:
        return Orientation({s: 1 for s in tops})
    by_face: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for j, s in enumerate(tops):
        for i in range(len(s)):
            by_face.setdefault(s[:i] + s[i + 1:], []).append((j, -1 if i % 2 else 1))
    for cof in by_face.values():
        if len(cof) != 2:
            raise ValueError(_NOT_MANIFOLD)
    signs = [0] * len(tops)
    for start in range(len(tops)):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            j = stack.pop()
            s = tops[j]
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                own = -1 if i % 2 else 1
                for k, other in by_face[face]:
                    if k == j:
                        continue
                    # coherent: induced signs on the shared face cancel
                    want = -signs[j] * own * other
                    if signs[k] == 0:
                        signs[k] = want
                        stack.append(k)
                    elif signs[k] != want:
                        raise ValueError(_NOT_MANIFOLD)
    return Orientation({s: v for s, v in zip(tops, signs)})


def fundamental_chain(x: SimplicialComplex, o: Orientation | None, c: Coefficients) -> list:
    """Signed sum of the top simplices, checked to be a cycle.

    Without an orientation, coefficients of characteristic 2 use all
    signs +1, and otherwise a coherent orientation is searched for.
    """
    d = x.dimension
    if d < 0 or not x.is_pure():
        raise ValueError(_NOT_MANIFOLD)
    tops = x.simplices(d)
    if o is None:
        if c.kind == "prime-field" and c.prime == 2:
            o = Orientation({s: 1 for s in tops})
        else:
            o = orient(x)
    chain = [c.reduce(o.signs.get(s, 0)) for s in tops]
    if any(not v for v in chain):
        raise ValueError(_NOT_MANIFOLD)
    cx = boundary_complex(x, c)
    if any(c.reduce(v) for v in cx.differential(d).apply(chain)):
        raise ValueError(_NOT_MANIFOLD)
    return chain
