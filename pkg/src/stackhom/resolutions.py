"""Truncated free resolutions of the trivial module over a group ring.

A resolution stage ``P_p`` is free of rank ``ranks[p]`` over ``Λ[G]``.
The differential ``d_p : P_p -> P_{p-1}`` is stored as
``differentials[p][(i, j)] = {g: coefficient}``, meaning that generator
``j`` of ``P_p`` goes to ``sum_g coefficient * g * e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .chains import ChainComplex
from .groups import FiniteGroup
from .linalg import (
    Coefficients,
    ExactMatrix,
    FieldEchelon,
    homology_at,
    invariant_factors,
    nullspace,
    snf_with_inverses,
)

__all__ = [
    "Resolution",
    "BorelManifoldModel",
    "bar_resolution",
    "periodic_resolution",
    "reduced_resolution",
    "choose_resolution",
]


BAR_SIZE_LIMIT = 200_000


@dataclass
class Resolution:
    group: FiniteGroup
    coefficients: Coefficients
    length: int
    ranks: list[int]
    differentials: dict[int, dict[tuple[int, int], dict[int, int]]]
    kind: str = "custom"
    exact_below: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.ranks) != self.length + 1:
            raise ValueError("ranks must list stages 0..length")
        if self.exact_below is None:
            self.exact_below = self.length
        for p in range(1, self.length + 1):
            for (i, j), coeffs in self.differentials.get(p, {}).items():
                if not (0 <= i < self.ranks[p - 1] and 0 <= j < self.ranks[p]):
                    raise ValueError(f"differential entry {(i, j)} out of range at stage {p}")
                if any(not 0 <= g < self.group.order for g in coeffs):
                    raise ValueError("group element out of range")

    def matrix(self, p: int) -> ExactMatrix:
        """``d_p`` as a matrix over the coefficients (basis ``h e_j`` at ``j*|G| + h``)."""
        if p in self._cache:
            return self._cache[p]
        G = self.group
        m = G.order
        entries = []
        for (i, j), coeffs in self.differentials.get(p, {}).items():
            for g, lam in coeffs.items():
                if not lam:
                    continue
                for h in range(m):
                    entries.append((i * m + G.mul(h, g), j * m + h, lam))
        mat = ExactMatrix.from_entries(self.ranks[p - 1] * m, self.ranks[p] * m, entries)
        mat = mat.reduce(self.coefficients)
        self._cache[p] = mat
        return mat

    def augmentation(self) -> ExactMatrix:
        return ExactMatrix(1, self.ranks[0] * self.group.order,
                           {0: {k: 1 for k in range(self.ranks[0] * self.group.order)}})

    def underlying_complex(self, augmented: bool = True) -> ChainComplex:
        """The resolution as a complex over the coefficients (action forgotten).

        With ``augmented`` the trivial module sits in degree -1.
        """
        m = self.group.order
        dims = {p: r * m for p, r in enumerate(self.ranks)}
        diffs = {p: self.matrix(p) for p in range(1, self.length + 1)}
        if augmented:
            dims[-1] = 1
            diffs[0] = self.augmentation()
        return ChainComplex(self.coefficients, dims, diffs)

    def check_exact(self) -> bool:
        """Augmented complex is a complex and has zero homology in degrees < length."""
        c = self.coefficients
        m = self.group.order
        eps = self.augmentation()
        maps = {0: eps}
        for p in range(1, self.length + 1):
            maps[p] = self.matrix(p)
        for p in range(0, self.length):
            d_out = maps[p]
            d_in = maps[p + 1]
            free, tors = homology_at(d_in, d_out, c)
            if free or tors:
                return False
        # the augmentation itself must be onto
        return self.ranks[0] * m > 0

    def check_equivariant(self) -> bool:
        """Differentials commute with left translation by every group element."""
        G = self.group
        m = G.order
        c = self.coefficients

        def translate(k: int, rank: int) -> ExactMatrix:
            return ExactMatrix.from_entries(rank * m, rank * m,
                                            ((j * m + G.mul(k, h), j * m + h, 1)
                                             for j in range(rank) for h in range(m)))

        for p in range(1, self.length + 1):
            d = self.matrix(p)
            for k in range(m):
                lhs = d @ translate(k, self.ranks[p])
                rhs = translate(k, self.ranks[p - 1]) @ d
                if not lhs.equals(rhs, c):
                    return False
        return True

    def truncate(self, n: int) -> "Resolution":
        if n > self.length:
            raise ValueError("cannot lengthen a resolution by truncation")
        return Resolution(self.group, self.coefficients, n, self.ranks[:n + 1],
                          {p: self.differentials[p] for p in range(1, n + 1) if p in self.differentials},
                          kind=self.kind, exact_below=min(n, self.exact_below))


def bar_resolution(g: FiniteGroup, c: Coefficients, n: int, verify: bool = True) -> Resolution:
    """Unnormalized bar resolution, stages 0..n; stage p has rank |G|^p."""
    if n < 1:
        raise ValueError("resolution length must be at least 1")
    m = g.order
    ranks = [m ** p for p in range(n + 1)]
    if ranks[-1] * m > BAR_SIZE_LIMIT:
        raise ValueError(f"bar resolution of length {n} is too large for a group of order {m}; "
                         "use the reduced resolution")

    def index(cells) -> int:
        k = 0
        for x in cells:
            k = k * m + x
        return k

    diffs: dict[int, dict] = {}
    for p in range(1, n + 1):
        stage: dict[tuple[int, int], dict[int, int]] = {}

        def add(i, j, elem, v):
            coeffs = stage.setdefault((i, j), {})
            coeffs[elem] = coeffs.get(elem, 0) + v

        for cells in iproduct(range(m), repeat=p):
            j = index(cells)
            add(index(cells[1:]), j, cells[0], 1)
            for i in range(1, p):
                merged = cells[:i - 1] + (g.mul(cells[i - 1], cells[i]),) + cells[i + 1:]
                add(index(merged), j, g.identity, -1 if i % 2 else 1)
            add(index(cells[:-1]), j, g.identity, -1 if p % 2 else 1)
        diffs[p] = {k: {e: v for e, v in cs.items() if c.reduce(v)} for k, cs in stage.items()}
        diffs[p] = {k: cs for k, cs in diffs[p].items() if cs}
    res = Resolution(g, c, n, ranks, diffs, kind="bar")
    if verify and not res.check_exact():
        raise ArithmeticError("bar resolution failed its exactness check")
    return res


def periodic_resolution(m: int, c: Coefficients, n: int, group: FiniteGroup | None = None,
                        generator: int | None = None, verify: bool = True) -> Resolution:
    """Rank-one resolution for a cyclic group: ``t - 1`` in odd stages, the norm in even ones."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if n < 1:
        raise ValueError("resolution length must be at least 1")
    group = group or FiniteGroup.cyclic(m)
    if group.order != m:
        raise ValueError("group order does not match the modulus")
    if generator is None:
        generator = group.generator()
    if generator is None or group.element_order(generator) != m:
        raise ValueError("group is not cyclic with the given generator")
    e = group.identity
    odd = {generator: 1, e: -1}
    even = {group.power(generator, k): 1 for k in range(m)}
    diffs = {p: {(0, 0): dict(odd if p % 2 else even)} for p in range(1, n + 1)}
    res = Resolution(group, c, n, [1] * (n + 1), diffs, kind="periodic")
    if verify and not res.check_exact():
        raise ArithmeticError("periodic resolution failed its exactness check")
    return res


def _translates(g: FiniteGroup, vec: list, rows: int) -> list[list]:
    """All left translates of a vector in a free module (basis ``h e_i`` at ``i*|G| + h``)."""
    m = g.order
    out = []
    for k in range(m):
        moved = [0] * (rows * m)
        for idx, v in enumerate(vec):
            if v:
                i, h = divmod(idx, m)
                moved[i * m + g.mul(k, h)] = v
        out.append(moved)
    return out


def _field_kernel_generators(g, c, current, rows):
    kernel = nullspace(current, c)
    span = FieldEchelon(c)
    gens = []
    for vec in kernel:
        if span.rank == len(kernel):
            break
        if span.contains(vec):
            continue
        gens.append(vec)
        for moved in _translates(g, vec, rows):
            span.add(moved)
    return gens


def _integral_kernel_generators(g, current, rows):
    # the kernel is a direct summand: a Z-basis is given by the trailing
    # columns of V in an SNF of the map, with coordinates read off V^-1
    _, D, V, _, Vinv = snf_with_inverses(current)
    r = sum(1 for i in range(min(D.shape)) if D[i, i])
    n = current.cols
    k = n - r
    basis = [V.column(j) for j in range(r, n)]
    coords = Vinv.submatrix(list(range(r, n)), list(range(n)))
    columns: list[list] = []
    gens = []

    def measure(cols):
        if not cols:
            return (0, 0)
        inv = invariant_factors(ExactMatrix.from_columns(k, cols))
        index = 1
        for d in inv:
            index *= d
        return (len(inv), -index)

    state = (0, 0)
    for vec in basis:
        if state == (k, -1):
            break
        trial = columns + [coords.apply(t) for t in _translates(g, vec, rows)]
        new = measure(trial)
        if new > state:
            gens.append(vec)
            columns = trial
            state = new
    if k and state != (k, -1):
        raise ArithmeticError("kernel generators do not span")
    return gens


def reduced_resolution(g: FiniteGroup, c: Coefficients, n: int, verify: bool = True) -> Resolution:
    """A small resolution built from greedy generators of each kernel.

    Kernel basis vectors are added as free generators only while they
    enlarge the submodule spanned so far (over Z: its rank or its index).
    """
    if n < 1:
        raise ValueError("resolution length must be at least 1")
    m = g.order
    ranks = [1]
    diffs: dict[int, dict] = {}
    current = ExactMatrix(1, m, {0: {h: 1 for h in range(m)}})  # augmentation
    for p in range(1, n + 1):
        rows = ranks[p - 1]
        if c.is_field:
            gens = _field_kernel_generators(g, c, current, rows)
        else:
            gens = _integral_kernel_generators(g, current, rows)
        stage = {}
        for j, vec in enumerate(gens):
            for idx, v in enumerate(vec):
                if v:
                    i, h = divmod(idx, m)
                    stage.setdefault((i, j), {})[h] = v
        diffs[p] = stage
        ranks.append(len(gens))
        current = Resolution(g, c, p, list(ranks), dict(diffs), kind="reduced").matrix(p)
    res = Resolution(g, c, n, ranks, diffs, kind="reduced")
    if verify and not res.check_exact():
        raise ArithmeticError("reduced resolution failed its exactness check")
    return res


def choose_resolution(g: FiniteGroup, c: Coefficients, n: int, kind: str = "auto") -> Resolution:
    """Resolution of the requested kind; ``auto`` prefers periodic, then reduced, then bar."""
    if kind == "auto":
        if g.order == 1:
            kind = "bar"
        elif g.is_cyclic:
            kind = "periodic"
        else:
            kind = "reduced"
    if kind == "bar":
        return bar_resolution(g, c, n)
    if kind == "periodic":
        return periodic_resolution(g.order, c, n, group=g)
    if kind == "reduced":
        return reduced_resolution(g, c, n)
    raise ValueError(f"unknown resolution kind {kind!r}")


@dataclass
class BorelManifoldModel:
    """Free cyclic sphere model: ``S^{n-1}`` for ``m = 2``, ``S^{2n-1}`` for ``m > 2``.

    The cellular chains of the sphere are the periodic resolution cut at
    the sphere's dimension ``d_n``, which is also the dimension of the
    quotient (projective or lens space).
    """

    modulus: int
    stage: int
    coefficients: Coefficients
    group: FiniteGroup | None = None
    resolution: Resolution = field(init=False)

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("model needs a cyclic group of order at least 2")
        if self.stage < 1:
            raise ValueError("model stage must be positive")
        if self.group is None:
            self.group = FiniteGroup.cyclic(self.modulus)
        if self.dimension == 0:
            self.resolution = Resolution(self.group, self.coefficients, 0, [1], {}, kind="periodic")
        else:
            self.resolution = periodic_resolution(self.modulus, self.coefficients, self.dimension,
                                                  group=self.group, verify=False)

    @property
    def dimension(self) -> int:
        """``d_n``, the dimension of the quotient manifold."""
        return self.stage - 1 if self.modulus == 2 else 2 * self.stage - 1

    @property
    def acyclic_below(self) -> int:
        """The sphere is ``(d_n - 1)``-connected."""
        return self.dimension

    @property
    def orientable(self) -> bool:
        if self.modulus == 2:
            return self.dimension % 2 == 1 or self.dimension == 0
        return True

    def quotient_complex(self) -> ChainComplex:
        """Cellular chains of the quotient: the resolution tensored with the trivial module."""
        r = self.resolution
        dims = {p: 1 for p in range(self.dimension + 1)}
        diffs = {}
        for p in range(1, self.dimension + 1):
            total = sum(r.differentials[p][(0, 0)].values())
            diffs[p] = ExactMatrix(1, 1, {0: {0: total}})
        return ChainComplex(self.coefficients, dims, diffs)

    def sphere_complex(self) -> ChainComplex:
        return self.resolution.underlying_complex(augmented=False)
