"""Independent reference computations built on sympy, used to cross-check results."""

from __future__ import annotations

from sympy import GF, QQ, ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix


def dense(m) -> list[list[int]]:
    return m.to_dense() if hasattr(m, "to_dense") else [list(r) for r in m]


def invariant_factors(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero diagonal of the Smith form, ascending."""
    if not rows or not ncols:
        return []
    d = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(d[i, i])) for i in range(min(d.shape))]
    return sorted(x for x in diag if x)


def rank(rows: list[list[int]], ncols: int, p: int | None = None) -> int:
    """Rank over Q (``p is None``) or over F_p."""
    if not rows or not ncols:
        return 0
    dom = QQ if p is None else GF(p)
    return DomainMatrix([[dom(int(v)) for v in r] for r in rows], (len(rows), ncols), dom).rank()


def homology(dims: dict[int, int], diffs: dict[int, list[list[int]]], k: int, p: int | None = None,
             integral: bool = False):
    """``H_k`` of a complex with ``diffs[k]`` mapping degree k to k-1.

    Returns ``(free_rank, torsion)`` over Z, else the dimension.
    """
    n = dims.get(k, 0)
    d_out = diffs.get(k)
    d_in = diffs.get(k + 1)
    if integral:
        r_out = rank(d_out, n) if d_out and n else 0
        inv = invariant_factors(d_in, dims.get(k + 1, 0)) if d_in and dims.get(k + 1, 0) else []
        return n - r_out - len(inv), [x for x in inv if x > 1]
    r_out = rank(d_out, n, p) if d_out and n else 0
    r_in = rank(d_in, dims.get(k + 1, 0), p) if d_in and dims.get(k + 1, 0) else 0
    return n - r_out - r_in


def simplicial_boundaries(facets: list[tuple[int, ...]]):
    """Simplicial boundary matrices from facets given as vertex index tuples, built from scratch."""
    from itertools import combinations

    simplices: dict[int, set] = {}
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            for s in combinations(f, k):
                simplices.setdefault(k - 1, set()).add(s)
    basis = {k: sorted(v) for k, v in simplices.items()}
    dims = {k: len(v) for k, v in basis.items()}
    diffs = {}
    for k in range(1, max(basis) + 1 if basis else 0):
        pos = {s: i for i, s in enumerate(basis[k - 1])}
        mat = [[0] * dims[k] for _ in range(dims[k - 1])]
        for j, s in enumerate(basis[k]):
            for i in range(len(s)):
                mat[pos[s[:i] + s[i + 1:]]][j] += (-1) ** i
        diffs[k] = mat
    return dims, diffs
