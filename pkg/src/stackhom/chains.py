"""Chain complexes, shifts, bicomplexes and group-ring Hom/tensor complexes.

Grading is homological throughout: ``d[k]`` maps degree ``k`` to ``k - 1``.
Cohomology is read off a dual complex living in nonpositive degrees, so
``H^i`` is ``H_{-i}`` of the dual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .linalg import (
    Coefficients,
    ExactMatrix,
    GradedModulePresentation,
    HomologyBasis,
    HomologyGroup,
    homology_at,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "Bicomplex",
    "GroupAlgebraComplex",
    "shift",
    "total_complex",
    "hom_over_group_ring",
    "tensor_over_group_ring",
]


class ChainComplex:
    """A bounded chain complex of finite free modules.

    ``dims`` maps degree to rank; degrees absent from ``dims`` are zero.
    ``differentials[k]`` is the ``dims[k-1] x dims[k]`` matrix of ``d_k``;
    missing differentials are zero.  Entries are reduced into the
    coefficient ring on construction and ``d_{k-1} d_k = 0`` is checked.
    """

    def __init__(self, coefficients: Coefficients, dims: Mapping[int, int],
                 differentials: Mapping[int, ExactMatrix] | None = None,
                 basis: Mapping[int, list] | None = None, check: bool = True):
        self.coefficients = coefficients
        self.dims = {k: n for k, n in dims.items() if n}
        self.basis = dict(basis) if basis else {}
        self.d: dict[int, ExactMatrix] = {}
        for k, m in (differentials or {}).items():
            if m.shape != (self.dim(k - 1), self.dim(k)):
                raise ValueError(
                    f"d_{k} has shape {m.shape}, expected {(self.dim(k - 1), self.dim(k))}")
            m = m.reduce(coefficients)
            if not m.is_zero():
                self.d[k] = m
        if check:
            self.check()

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def differential(self, k: int) -> ExactMatrix:
        m = self.d.get(k)
        if m is None:
            return ExactMatrix.zeros(self.dim(k - 1), self.dim(k))
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.dims:
            return None
        return (min(self.dims), max(self.dims))

    def check(self) -> None:
        for k in self.d:
            if k - 1 in self.d:
                if not (self.d[k - 1] @ self.d[k]).is_zero(self.coefficients):
                    raise ValueError(f"not a complex: d_{k - 1} d_{k} != 0")

    # homology ---------------------------------------------------------
    def homology(self, k: int) -> HomologyGroup:
        free, torsion = homology_at(self.differential(k + 1), self.differential(k),
                                    self.coefficients)
        return HomologyGroup(free, tuple(torsion))

    def homology_all(self, window: tuple[int, int] | None = None) -> GradedModulePresentation:
        if window is None:
            sup = self.support
            if sup is None:
                return GradedModulePresentation(self.coefficients, {}, None)
            window = sup
        lo, hi = window
        groups = {}
        for k in range(lo, hi + 1):
            if self.dim(k):
                g = self.homology(k)
                if not g.is_zero:
                    groups[k] = g
        return GradedModulePresentation(self.coefficients, groups, (lo, hi))

    def homology_basis(self, k: int) -> HomologyBasis:
        return HomologyBasis(self.differential(k + 1), self.differential(k), self.coefficients)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * n for k, n in self.dims.items())

    def is_acyclic(self) -> bool:
        return all(self.homology(k).is_zero for k in self.dims)

    # constructions ----------------------------------------------------
    def dual(self) -> "ChainComplex":
        """Hom into the coefficients, regraded homologically.

        Degree ``-k`` of the dual is the dual of degree ``k``, with
        differential ``d_{k+1}^T``; so ``H_{-k}`` of the dual is ``H^k``.
        """
        dims = {-k: n for k, n in self.dims.items()}
        diffs = {-(k - 1): m.transpose() for k, m in self.d.items()}
        basis = {-k: b for k, b in self.basis.items()}
        return ChainComplex(self.coefficients, dims, diffs, basis, check=False)

    def with_coefficients(self, c: Coefficients) -> "ChainComplex":
        return ChainComplex(c, self.dims, self.d, self.basis)

    def truncated(self, lo: int, hi: int) -> "ChainComplex":
        """Brutal truncation to degrees ``lo..hi``."""
        dims = {k: n for k, n in self.dims.items() if lo <= k <= hi}
        diffs = {k: m for k, m in self.d.items() if lo < k <= hi}
        return ChainComplex(self.coefficients, dims, diffs, self.basis, check=False)

    def same_matrices(self, other: "ChainComplex") -> bool:
        if self.coefficients != other.coefficients or self.dims != other.dims:
            return False
        ks = set(self.d) | set(other.d)
        return all(self.differential(k).equals(other.differential(k)) for k in ks)

    def __repr__(self) -> str:
        return f"ChainComplex({self.coefficients.label}, dims={dict(sorted(self.dims.items()))})"


@dataclass
class ChainMap:
    """Degreewise matrices ``f_k : C_k -> D_k``."""

    source: ChainComplex
    target: ChainComplex
    components: dict[int, ExactMatrix] = field(default_factory=dict)

    def component(self, k: int) -> ExactMatrix:
        m = self.components.get(k)
        if m is None:
            return ExactMatrix.zeros(self.target.dim(k), self.source.dim(k))
        return m

    def is_chain_map(self) -> bool:
        c = self.source.coefficients
        ks = set(self.source.dims) | set(self.target.dims)
        for k in ks:
            lhs = self.target.differential(k) @ self.component(k)
            rhs = self.component(k - 1) @ self.source.differential(k)
            if not lhs.equals(rhs, c):
                return False
        return True

    def compose(self, after: "ChainMap") -> "ChainMap":
        """``after o self``."""
        ks = set(self.source.dims)
        return ChainMap(self.source, after.target,
                        {k: after.component(k) @ self.component(k) for k in ks})

    def induced(self, k: int, src: HomologyBasis | None = None,
                tgt: HomologyBasis | None = None) -> ExactMatrix:
        """Matrix of the map on ``H_k`` in the generator bases."""
        src = src or self.source.homology_basis(k)
        tgt = tgt or self.target.homology_basis(k)
        f = self.component(k)
        images = [f.apply(z) for z in src.generators]
        return tgt.matrix_of(images)


def shift(c: ChainComplex, n: int) -> ChainComplex:
    """Move degree ``k`` to ``k + n``, scaling differentials by ``(-1)^n``."""
    sign = -1 if n % 2 else 1
    dims = {k + n: m for k, m in c.dims.items()}
    diffs = {k + n: m.scale(sign) for k, m in c.d.items()}
    basis = {k + n: b for k, b in c.basis.items()}
    return ChainComplex(c.coefficients, dims, diffs, basis)


class Bicomplex:
    """A double complex with anticommuting differentials.

    ``dims[(a, b)]`` gives ranks; ``dh[(a, b)]`` maps ``(a, b) -> (a-1, b)``
    and ``dv[(a, b)]`` maps ``(a, b) -> (a, b-1)``.  Total degree is
    ``a + b``.  Vertical maps are stored already twisted by the Koszul
    sign, so ``dh dv + dv dh = 0`` is required.
    """

    def __init__(self, coefficients: Coefficients, dims: Mapping[tuple[int, int], int],
                 dh: Mapping[tuple[int, int], ExactMatrix] | None = None,
                 dv: Mapping[tuple[int, int], ExactMatrix] | None = None):
        self.coefficients = coefficients
        self.dims = {k: n for k, n in dims.items() if n}
        self.dh = {}
        self.dv = {}
        for store, given, step in ((self.dh, dh, (1, 0)), (self.dv, dv, (0, 1))):
            for (a, b), m in (given or {}).items():
                tgt = (a - step[0], b - step[1])
                if m.shape != (self.dim(tgt), self.dim((a, b))):
                    raise ValueError(f"map at {(a, b)} has shape {m.shape}")
                m = m.reduce(coefficients)
                if not m.is_zero():
                    store[(a, b)] = m

    def dim(self, ab: tuple[int, int]) -> int:
        return self.dims.get(ab, 0)

    def h(self, ab) -> ExactMatrix:
        a, b = ab
        return self.dh.get(ab) or ExactMatrix.zeros(self.dim((a - 1, b)), self.dim(ab))

    def v(self, ab) -> ExactMatrix:
        a, b = ab
        return self.dv.get(ab) or ExactMatrix.zeros(self.dim((a, b - 1)), self.dim(ab))

    def check(self) -> None:
        c = self.coefficients
        for (a, b) in self.dims:
            if not (self.h((a - 1, b)) @ self.h((a, b))).is_zero(c):
                raise ValueError("not a bicomplex: horizontal square nonzero")
            if not (self.v((a, b - 1)) @ self.v((a, b))).is_zero(c):
                raise ValueError("not a bicomplex: vertical square nonzero")
            mixed = self.h((a, b - 1)) @ self.v((a, b)) + self.v((a - 1, b)) @ self.h((a, b))
            if not mixed.is_zero(c):
                raise ValueError("not a bicomplex")

    def row(self, b: int) -> ChainComplex:
        """The horizontal complex at vertical index ``b``, graded by ``a``."""
        dims = {a: n for (a, bb), n in self.dims.items() if bb == b}
        diffs = {a: m for (a, bb), m in self.dh.items() if bb == b}
        return ChainComplex(self.coefficients, dims, diffs)

    def column(self, a: int) -> ChainComplex:
        dims = {b: n for (aa, b), n in self.dims.items() if aa == a}
        diffs = {b: m for (aa, b), m in self.dv.items() if aa == a}
        return ChainComplex(self.coefficients, dims, diffs)


def _total_layout(dims: Mapping[tuple[int, int], int]):
    layout: dict[int, list[tuple[int, int]]] = {}
    for ab in sorted(dims):
        layout.setdefault(ab[0] + ab[1], []).append(ab)
    offsets = {}
    sizes = {}
    for n, parts in layout.items():
        off = 0
        for ab in parts:
            offsets[ab] = off
            off += dims[ab]
        sizes[n] = off
    return layout, offsets, sizes


def total_complex(b: Bicomplex) -> ChainComplex:
    """Direct-sum totalization with differential ``dh + dv``."""
    b.check()
    layout, offsets, sizes = _total_layout(b.dims)
    entries: dict[int, list] = {}
    for store, step in ((b.dh, (1, 0)), (b.dv, (0, 1))):
        for (x, y), m in store.items():
            n = x + y
            tgt = (x - step[0], y - step[1])
            ro, co = offsets[tgt], offsets[(x, y)]
            bucket = entries.setdefault(n, [])
            bucket.extend((i + ro, j + co, v) for i, j, v in m.items())
    diffs = {n: ExactMatrix.from_entries(sizes.get(n - 1, 0), sizes[n], es)
             for n, es in entries.items()}
    basis = {n: [(ab, i) for ab in parts for i in range(b.dims[ab])] for n, parts in layout.items()}
    tot = ChainComplex(b.coefficients, sizes, diffs, basis, check=False)
    try:
        tot.check()
    except ValueError:
        raise ValueError("not a bicomplex") from None
    return tot


class GroupAlgebraComplex:
    """A chain complex with a degree-preserving action of a finite group.

    ``action[k][g]`` is the matrix of group element ``g`` (an index into
    ``group``) on degree ``k``.  Missing degrees default to the identity
    only when the degree has rank zero.
    """

    def __init__(self, complex: ChainComplex, group, action: Mapping[int, Mapping[int, ExactMatrix]],
                 check: bool = True):
        self.complex = complex
        self.group = group
        self.action = {k: dict(v) for k, v in action.items()}
        for k in complex.dims:
            if k not in self.action:
                raise ValueError(f"no action given in degree {k}")
        if check:
            self.check()

    @property
    def coefficients(self) -> Coefficients:
        return self.complex.coefficients

    def matrix(self, k: int, g: int) -> ExactMatrix:
        if not self.complex.dim(k):
            return ExactMatrix.zeros(0, 0)
        return self.action[k][g]

    def check(self) -> None:
        c = self.coefficients
        G = self.group
        for k in self.complex.dims:
            n = self.complex.dim(k)
            mats = self.action[k]
            if sorted(mats) != list(range(G.order)):
                raise ValueError(f"action in degree {k} is not indexed by the group")
            if not mats[G.identity].equals(ExactMatrix.identity(n), c):
                raise ValueError("identity does not act trivially")
            for g in range(G.order):
                for h in range(G.order):
                    if not (mats[g] @ mats[h]).equals(mats[G.mul(g, h)], c):
                        raise ValueError("action does not satisfy the group law")
        for k in self.complex.d:
            d = self.complex.differential(k)
            for g in range(G.order):
                if not (d @ self.matrix(k, g)).equals(self.matrix(k - 1, g) @ d, c):
                    raise ValueError("action does not commute with the differential")

    @classmethod
    def trivial_action(cls, complex: ChainComplex, group) -> "GroupAlgebraComplex":
        action = {k: {g: ExactMatrix.identity(n) for g in range(group.order)}
                  for k, n in complex.dims.items()}
        return cls(complex, group, action, check=False)

    def restrict_to_trivial(self):
        """Forget the action (as a complex over the trivial group)."""
        from .groups import FiniteGroup
        G = FiniteGroup.trivial()
        return GroupAlgebraComplex(self.complex, G,
                                   {k: {0: ExactMatrix.identity(n)} for k, n in self.complex.dims.items()},
                                   check=False)


def _group_ring_block(coeffs: Mapping[int, object], rho: Mapping[int, ExactMatrix], n: int,
                      inverse=None) -> ExactMatrix:
    acc = ExactMatrix.zeros(n, n)
    for g, lam in coeffs.items():
        if not lam:
            continue
        h = inverse(g) if inverse else g
        acc = acc + rho[h].scale(lam)
    return acc


def _check_compatible(r, c: GroupAlgebraComplex) -> None:
    if r.group != c.group:
        raise ValueError("group mismatch")
    if r.coefficients != c.coefficients:
        raise ValueError("coefficient mismatch")


def hom_over_group_ring(r, c: GroupAlgebraComplex) -> Bicomplex:
    """Equivariant Hom from a resolution into ``c`` as a bicomplex.

    Position ``(-p, q)`` holds ``Hom_G(P_p, C_q)``, identified with
    ``C_q^{r_p}`` by evaluating on the free generators.  A generator
    ``j`` of ``P_p`` is sent to ``sum_i sum_g lambda_{ij,g} g e_i`` by the
    resolution differential, so precomposition acts through the matrices
    ``rho_q(g)``.  Vertical maps carry the sign ``(-1)^p``.
    """
    _check_compatible(r, c)
    cx = c.complex
    dims = {}
    for p in range(r.length + 1):
        for q, n in cx.dims.items():
            dims[(-p, q)] = r.ranks[p] * n
    dh = {}
    for p in range(r.length):
        # map (-p, q) -> (-p-1, q): phi -> phi o d_{p+1}
        lam = r.differentials[p + 1]
        rows_p1, rows_p = r.ranks[p + 1], r.ranks[p]
        for q, n in cx.dims.items():
            blocks = {}
            for (i, j), coeffs in lam.items():
                blocks[(j, i)] = _group_ring_block(coeffs, c.action[q], n)
            # horizontal differential is indexed at the source (-p, q)
            dh[(-p, q)] = ExactMatrix.block([n] * rows_p1, [n] * rows_p, blocks)
    dv = {}
    for p in range(r.length + 1):
        sign = -1 if p % 2 else 1
        for q in cx.d:
            dq = cx.differential(q).scale(sign)
            k = r.ranks[p]
            blocks = {(j, j): dq for j in range(k)}
            dv[(-p, q)] = ExactMatrix.block([cx.dim(q - 1)] * k, [cx.dim(q)] * k, blocks)
    return Bicomplex(c.coefficients, dims, dh, dv)


def tensor_over_group_ring(r, c: GroupAlgebraComplex) -> ChainComplex:
    """Total complex of ``P_* (x)_G C_*`` (homotopy orbits).

    ``P_p (x)_G C_q`` is identified with ``C_q^{r_p}`` via
    ``e_i g (x) x = e_i (x) g x``; a right action on ``P`` is obtained
    from the left one through inverses.  Vertical maps carry ``(-1)^p``.
    """
    _check_compatible(r, c)
    cx = c.complex
    G = r.group
    dims = {}
    for p in range(r.length + 1):
        for q, n in cx.dims.items():
            dims[(p, q)] = r.ranks[p] * n
    dh = {}
    for p in range(1, r.length + 1):
        lam = r.differentials[p]
        for q, n in cx.dims.items():
            blocks = {}
            for (i, j), coeffs in lam.items():
                blocks[(i, j)] = _group_ring_block(coeffs, c.action[q], n, G.inverse)
            dh[(p, q)] = ExactMatrix.block([n] * r.ranks[p - 1], [n] * r.ranks[p], blocks)
    dv = {}
    for p in range(r.length + 1):
        sign = -1 if p % 2 else 1
        for q in cx.d:
            dq = cx.differential(q).scale(sign)
            k = r.ranks[p]
            dv[(p, q)] = ExactMatrix.block([cx.dim(q - 1)] * k, [cx.dim(q)] * k,
                                           {(j, j): dq for j in range(k)})
    return total_complex(Bicomplex(c.coefficients, dims, dh, dv))
