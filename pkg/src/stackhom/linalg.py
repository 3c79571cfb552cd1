"""Exact linear algebra over Z, Q and F_p.

Everything here works on Python ints (arbitrary precision) or
``fractions.Fraction``; there is no floating point anywhere.  Matrices are
stored sparsely as a dict of rows, which is what simplicial boundary
matrices and group-ring block matrices look like in practice.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Coefficients",
    "ExactMatrix",
    "HomologyGroup",
    "GradedModulePresentation",
    "HomologyBasis",
    "FieldEchelon",
    "snf",
    "invariant_factors",
    "rank",
    "rank_over_field",
    "homology_at",
    "nullspace",
    "determinant",
]

_KINDS = ("integers", "rationals", "prime-field")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Coefficients:
    """The coefficient ring: ``Z``, ``Q`` or ``F_p``."""

    kind: str
    prime: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "prime-field":
            if self.prime is None or not _is_prime(self.prime):
                raise ValueError(f"{self.prime} is not prime")
        elif self.prime is not None:
            raise ValueError("a prime only makes sense for prime fields")

    @classmethod
    def integers(cls) -> "Coefficients":
        return cls("integers")

    @classmethod
    def rationals(cls) -> "Coefficients":
        return cls("rationals")

    @classmethod
    def prime_field(cls, p: int) -> "Coefficients":
        return cls("prime-field", p)

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        """Parse ``z``, ``q`` or ``f<p>`` (case-insensitive)."""
        t = text.strip().lower()
        if t == "z":
            return cls.integers()
        if t == "q":
            return cls.rationals()
        if t.startswith("f") and t[1:].isdigit():
            return cls.prime_field(int(t[1:]))
        raise ValueError(f"cannot parse coefficients {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    @property
    def label(self) -> str:
        if self.kind == "integers":
            return "Z"
        if self.kind == "rationals":
            return "Q"
        return f"F{self.prime}"

    @property
    def token(self) -> str:
        return self.label.lower()

    def reduce(self, x):
        if self.kind == "prime-field":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.prime)) % self.prime
            return x % self.prime
        if self.kind == "integers":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inverse(self, x):
        if self.kind == "prime-field":
            return pow(x % self.prime, -1, self.prime)
        if self.kind == "rationals":
            return Fraction(1) / x
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def __str__(self) -> str:
        return self.label


class ExactMatrix:
    """Sparse matrix with exact entries.

    ``_data`` maps a row index to ``{col: value}``; zero entries are never
    stored.  Entries are whatever exact scalars the caller uses; call
    :meth:`reduce` to bring them into a coefficient ring.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self._data: dict[int, dict[int, object]] = {}
        if data:
            for i, row in data.items():
                if not 0 <= i < rows:
                    raise IndexError(f"row {i} out of range for {rows}x{cols}")
                clean = {}
                for j, v in row.items():
                    if not 0 <= j < cols:
                        raise IndexError(f"column {j} out of range for {rows}x{cols}")
                    if v:
                        clean[j] = v
                if clean:
                    self._data[i] = clean

    # construction -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        data = {}
        for i, row in enumerate(rows):
            if len(row) != c:
                raise ValueError("ragged dense matrix")
            data[i] = {j: v for j, v in enumerate(row) if v}
        return cls(r, c, data)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, object]]) -> "ExactMatrix":
        """Build from ``(i, j, value)`` triples; duplicates are summed."""
        data: dict[int, dict[int, object]] = defaultdict(dict)
        for i, j, v in entries:
            row = data[i]
            row[j] = row.get(j, 0) + v
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Sequence]) -> "ExactMatrix":
        entries = ((i, j, v) for j, col in enumerate(columns) for i, v in enumerate(col) if v)
        return cls.from_entries(rows, len(columns), entries)

    @classmethod
    def block(cls, row_sizes: Sequence[int], col_sizes: Sequence[int],
              blocks: dict[tuple[int, int], "ExactMatrix"]) -> "ExactMatrix":
        row_off = [0]
        for s in row_sizes:
            row_off.append(row_off[-1] + s)
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)
        data: dict[int, dict[int, object]] = defaultdict(dict)
        for (bi, bj), m in blocks.items():
            if m.rows != row_sizes[bi] or m.cols != col_sizes[bj]:
                raise ValueError(f"block ({bi},{bj}) has shape {m.shape}")
            for i, row in m._data.items():
                target = data[row_off[bi] + i]
                for j, v in row.items():
                    jj = col_off[bj] + j
                    target[jj] = target.get(jj, 0) + v
        return cls(row_off[-1], col_off[-1], data)

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self._data.get(i, {}).get(j, 0)

    def row(self, i: int) -> dict:
        return dict(self._data.get(i, {}))

    def items(self) -> Iterator[tuple[int, int, object]]:
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield i, j, row[j]

    def column_dicts(self) -> dict[int, dict[int, object]]:
        cols: dict[int, dict[int, object]] = defaultdict(dict)
        for i, row in self._data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def column(self, j: int) -> list:
        return [self._data.get(i, {}).get(j, 0) for i in range(self.rows)]

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in self._data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        rmap = {r: k for k, r in enumerate(rows)}
        cmap = {c: k for k, c in enumerate(cols)}
        data = {}
        for i, row in self._data.items():
            if i in rmap:
                sel = {cmap[j]: v for j, v in row.items() if j in cmap}
                if sel:
                    data[rmap[i]] = sel
        return ExactMatrix(len(rows), len(cols), data)

    # arithmetic -------------------------------------------------------
    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, self.column_dicts())

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        odata = other._data
        data = {}
        for i, row in self._data.items():
            acc: dict[int, object] = {}
            for k, a in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                data[i] = acc
        return ExactMatrix(self.rows, other.cols, data)

    def _combine(self, other: "ExactMatrix", sign: int) -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            target = data.setdefault(i, {})
            for j, v in row.items():
                target[j] = target.get(j, 0) + sign * v
        return ExactMatrix(self.rows, self.cols, data)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, s) -> "ExactMatrix":
        if not s:
            return ExactMatrix(self.rows, self.cols)
        return ExactMatrix(self.rows, self.cols,
                           {i: {j: s * v for j, v in r.items()} for i, r in self._data.items()})

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        out = [0] * self.rows
        for i, row in self._data.items():
            s = 0
            for j, v in row.items():
                x = vec[j]
                if x:
                    s += v * x
            out[i] = s
        return out

    def reduce(self, c: Coefficients) -> "ExactMatrix":
        red = c.reduce
        return ExactMatrix(self.rows, self.cols,
                           {i: {j: red(v) for j, v in r.items()} for i, r in self._data.items()})

    def is_zero(self, c: Coefficients | None = None) -> bool:
        if c is None:
            return not self._data
        red = c.reduce
        return all(not red(v) for r in self._data.values() for v in r.values())

    def equals(self, other: "ExactMatrix", c: Coefficients | None = None) -> bool:
        if self.shape != other.shape:
            return False
        return (self - other).is_zero(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"ExactMatrix({self.to_dense()!r})"
        return f"ExactMatrix(<{self.rows}x{self.cols}, nnz={self.nnz}>)"


# ---------------------------------------------------------------------------
# Smith normal form (dense, with transforms)


def _dense_snf(A: list[list[int]], rows: int, cols: int, track: bool):
    """In-place Smith reduction of a dense integer matrix.

    Pivot: smallest nonzero magnitude in the active submatrix, ties broken by
    (row, col).  Returns ``(diag, U, Uinv, V, Vinv)``; the transforms are
    ``None`` when ``track`` is false.
    """
    U = [[int(i == j) for j in range(rows)] for i in range(rows)] if track else None
    Uinv = [[int(i == j) for j in range(rows)] for i in range(rows)] if track else None
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None
    Vinv = [[int(i == j) for j in range(cols)] for i in range(cols)] if track else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if track:
            U[i], U[k] = U[k], U[i]
            for row in Uinv:
                row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        if track:
            for row in V:
                row[j], row[k] = row[k], row[j]
            Vinv[j], Vinv[k] = Vinv[k], Vinv[j]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        if not f:
            return
        a_src, a_dst = A[src], A[dst]
        for j in range(cols):
            if a_src[j]:
                a_dst[j] += f * a_src[j]
        if track:
            u_src, u_dst = U[src], U[dst]
            for j in range(rows):
                if u_src[j]:
                    u_dst[j] += f * u_src[j]
            # inverse: col_src -= f * col_dst
            for row in Uinv:
                if row[dst]:
                    row[src] -= f * row[dst]

    def add_col(dst, src, f):
        # col_dst += f * col_src
        if not f:
            return
        for row in A:
            if row[src]:
                row[dst] += f * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]
            v_dst, v_src = Vinv[dst], Vinv[src]
            for j in range(cols):
                if v_dst[j]:
                    v_src[j] -= f * v_dst[j]

    def neg_row(i):
        A[i] = [-x for x in A[i]]
        if track:
            U[i] = [-x for x in U[i]]
            for row in Uinv:
                row[i] = -row[i]

    diag = []
    t = 0
    while t < rows and t < cols:
        best = None
        for i in range(t, rows):
            row = A[i]
            for j in range(t, cols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                best = (abs(p), t, t)
                for i in range(t + 1, rows):
                    v = A[i][t]
                    if v and abs(v) < best[0]:
                        best = (abs(v), i, t)
                for j in range(t + 1, cols):
                    v = A[t][j]
                    if v and abs(v) < best[0]:
                        best = (abs(v), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            # divisibility: every remaining entry must be a multiple of p
            bad = None
            for i in range(t + 1, rows):
                row = A[i]
                for j in range(t + 1, cols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            neg_row(t)
        diag.append(A[t][t])
        t += 1
    return diag, U, Uinv, V, Vinv


def snf(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """Smith normal form over Z: returns ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with
    ``d1 | d2 | ...``, all nonnegative.
    """
    U, D, V, _, _ = snf_with_inverses(m)
    return U, D, V


def snf_with_inverses(m: ExactMatrix):
    """Like :func:`snf` but also returns ``U^-1`` and ``V^-1``."""
    r, c = m.shape
    A = m.to_dense()
    for row in A:
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                raise ValueError("snf needs integer entries")
    A = [[int(x) for x in row] for row in A]
    diag, U, Uinv, V, Vinv = _dense_snf(A, r, c, track=True)
    D = ExactMatrix(r, c, {i: {i: d} for i, d in enumerate(diag)})
    return (ExactMatrix.from_dense(U, r), D, ExactMatrix.from_dense(V, c),
            ExactMatrix.from_dense(Uinv, r), ExactMatrix.from_dense(Vinv, c))


# ---------------------------------------------------------------------------
# sparse elimination: ranks and invariant factors


def _sparse_pivot_eliminate(m: ExactMatrix, c: Coefficients):
    """Eliminate unit pivots (Markowitz-ordered) from a copy of ``m``.

    Over a field every nonzero entry is a unit, so this computes the rank
    outright.  Over Z (and over Q in fraction-free mode) only +-1 entries
    are used and the untouched core is returned for dense treatment.
    Returns ``(pivots, core_rows)``.
    """
    field = c.kind == "prime-field"
    p = c.prime
    if field:
        rows = {}
        for i, row in m._data.items():
            r = {j: v % p for j, v in row.items() if v % p}
            if r:
                rows[i] = r
    else:
        rows = {}
        for i, row in m._data.items():
            if any(isinstance(v, Fraction) and v.denominator != 1 for v in row.values()):
                den = 1
                for v in row.values():
                    if isinstance(v, Fraction):
                        den = den * v.denominator // gcd(den, v.denominator)
                row = {j: int(v * den) for j, v in row.items()}
            else:
                row = {j: int(v) for j, v in row.items()}
            if row:
                rows[i] = row
    cols: dict[int, set] = defaultdict(set)
    for i, row in rows.items():
        for j in row:
            cols[j].add(i)

    pivots = 0
    changed = True
    while changed and rows:
        changed = False
        for i in sorted(rows, key=lambda k: (len(rows[k]), k)):
            row = rows.get(i)
            if row is None:
                continue
            best = None
            for j, v in row.items():
                if field or v == 1 or v == -1:
                    key = (len(cols[j]), j)
                    if best is None or key < best:
                        best = key
            if best is None:
                continue
            j = best[1]
            v = row[j]
            inv = pow(v, -1, p) if field else v
            for k in list(cols[j]):
                if k == i:
                    continue
                rk = rows[k]
                f = rk[j] * inv
                if field:
                    f %= p
                for jj, vv in row.items():
                    nv = rk.get(jj, 0) - f * vv
                    if field:
                        nv %= p
                    if nv:
                        if jj not in rk:
                            cols[jj].add(k)
                        rk[jj] = nv
                    elif jj in rk:
                        del rk[jj]
                        cols[jj].discard(k)
                if not rk:
                    del rows[k]
            for jj in row:
                cols[jj].discard(i)
            del rows[i]
            pivots += 1
            changed = True
    return pivots, rows


def _dense_core(rows: dict[int, dict[int, int]]) -> tuple[list[list[int]], int, int]:
    colset = sorted({j for r in rows.values() for j in r})
    cmap = {j: k for k, j in enumerate(colset)}
    A = []
    for i in sorted(rows):
        dense = [0] * len(colset)
        for j, v in rows[i].items():
            dense[cmap[j]] = v
        A.append(dense)
    return A, len(A), len(colset)


def _integral_rank(rows: dict[int, dict[int, int]]) -> int:
    """Fraction-free echelon rank of integer rows (content removed per step)."""
    pivots: dict[int, dict[int, int]] = {}
    for i in sorted(rows):
        row = dict(rows[i])
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            if col not in row or col not in pivots:
                continue
            prow = pivots[col]
            a, b = row[col], prow[col]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {}
            for j, v in row.items():
                new[j] = fa * v
            for j, v in prow.items():
                nv = new.get(j, 0) - fb * v
                if nv:
                    if j not in new and j > col:
                        heapq.heappush(heap, j)
                    new[j] = nv
                else:
                    new.pop(j, None)
            content = 0
            for v in new.values():
                content = gcd(content, v)
            if content > 1:
                new = {j: v // content for j, v in new.items()}
            row = new
            if not row:
                break
        if row:
            pivots[min(row)] = row
    return len(pivots)


def rank_over_field(m: ExactMatrix, c: Coefficients) -> int:
    """Exact rank over Q or F_p."""
    if not c.is_field:
        raise ValueError("field required")
    pivots, core = _sparse_pivot_eliminate(m, c)
    if c.kind == "prime-field":
        return pivots
    return pivots + _integral_rank(core)


def rank(m: ExactMatrix, c: Coefficients) -> int:
    """Rank over any coefficient ring (over Z this is the rank over Q)."""
    if c.kind == "integers":
        return rank_over_field(m, Coefficients.rationals())
    return rank_over_field(m, c)


def invariant_factors(m: ExactMatrix) -> list[int]:
    """Nonzero Smith invariant factors of an integer matrix, ascending."""
    units, core = _sparse_pivot_eliminate(m, Coefficients.integers())
    A, r, cc = _dense_core(core)
    diag, *_ = _dense_snf(A, r, cc, track=False)
    return [1] * units + diag


def homology_at(d_in: ExactMatrix, d_out: ExactMatrix, c: Coefficients) -> tuple[int, list[int]]:
    """Presentation of ``ker(d_out) / im(d_in)`` as ``(free_rank, torsion)``.

    Over Z the kernel of ``d_out`` is a direct summand, so the torsion is
    exactly the non-unit invariant factors of ``d_in``.
    """
    if d_in.rows != d_out.cols:
        raise ValueError(f"maps are not composable: {d_in.shape} then {d_out.shape}")
    if not (d_out @ d_in).is_zero(c):
        raise ValueError("not a complex")
    n = d_out.cols
    if c.is_field:
        return n - rank_over_field(d_out, c) - rank_over_field(d_in, c), []
    r_out = rank(d_out, c)
    inv = invariant_factors(d_in)
    torsion = [d for d in inv if d > 1]
    return n - r_out - len(inv), torsion


def determinant(m: ExactMatrix):
    """Bareiss determinant (exact; integer input stays integer)."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    A = m.to_dense()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not A[k][k]:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# field echelon with bookkeeping (solving, membership, bases)


class FieldEchelon:
    """Incrementally maintained echelon basis of a subspace of ``k^n``.

    Each stored row remembers how it was built from the inserted vectors,
    so :meth:`solve` can express a vector in terms of the inputs.
    """

    def __init__(self, c: Coefficients):
        if not c.is_field:
            raise ValueError("field required")
        self.c = c
        self.pivots: dict[int, tuple[dict[int, object], dict[int, object]]] = {}
        self.count = 0

    def _norm(self, x):
        if self.c.kind == "prime-field":
            return x % self.c.prime
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def _div(self, a, b):
        if self.c.kind == "prime-field":
            return a * pow(b, -1, self.c.prime) % self.c.prime
        q = Fraction(a) / b
        return q.numerator if q.denominator == 1 else q

    def _as_dict(self, vec) -> dict[int, object]:
        if isinstance(vec, dict):
            items = vec.items()
        else:
            items = enumerate(vec)
        out = {}
        for j, v in items:
            v = self._norm(v)
            if v:
                out[j] = v
        return out

    def reduce(self, vec) -> tuple[dict[int, object], dict[int, object]]:
        """Return ``(residual, combo)`` with ``vec = residual + sum combo[k] * input_k``."""
        row = self._as_dict(vec)
        combo: dict[int, object] = {}
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            if col not in row or col not in self.pivots:
                continue
            prow, ptag = self.pivots[col]
            f = row[col]
            for j, v in prow.items():
                nv = self._norm(row.get(j, 0) - f * v)
                if nv:
                    if j not in row:
                        heapq.heappush(heap, j)
                    row[j] = nv
                else:
                    row.pop(j, None)
            for k, v in ptag.items():
                nv = self._norm(combo.get(k, 0) + f * v)
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        return row, combo

    def add(self, vec) -> bool:
        """Insert a vector; returns whether it enlarged the span."""
        idx = self.count
        self.count += 1
        row, combo = self.reduce(vec)
        if not row:
            return False
        tag = {k: self._norm(-v) for k, v in combo.items()}
        tag[idx] = 1
        col = min(row)
        lead = row[col]
        row = {j: self._div(v, lead) for j, v in row.items()}
        tag = {k: self._div(v, lead) for k, v in tag.items() if v}
        self.pivots[col] = (row, tag)
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def solve(self, vec) -> dict[int, object] | None:
        """Coefficients over the inserted vectors reproducing ``vec``, or None."""
        row, combo = self.reduce(vec)
        if row:
            return None
        return combo

    @property
    def rank(self) -> int:
        return len(self.pivots)


def nullspace(m: ExactMatrix, c: Coefficients) -> list[list]:
    """Basis of ``ker m`` over a field, from the reduced row echelon form."""
    if not c.is_field:
        raise ValueError("field required")
    ech = FieldEchelon(c)
    for i in range(m.rows):
        ech.add(m.row(i))
    # back-substitute to reduced form
    pivcols = sorted(ech.pivots)
    rref = {col: dict(ech.pivots[col][0]) for col in pivcols}
    for col in reversed(pivcols):
        prow = rref[col]
        for other in pivcols:
            if other == col:
                continue
            orow = rref[other]
            f = orow.get(col)
            if f:
                for j, v in prow.items():
                    nv = ech._norm(orow.get(j, 0) - f * v)
                    if nv:
                        orow[j] = nv
                    else:
                        orow.pop(j, None)
    free = [j for j in range(m.cols) if j not in rref]
    basis = []
    for fcol in free:
        vec = [0] * m.cols
        vec[fcol] = 1
        for col, row in rref.items():
            v = row.get(fcol)
            if v:
                vec[col] = ech._norm(-v)
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated module: free rank plus invariant factors."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("invariant factors must exceed 1")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self, c: Coefficients) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append(c.label)
        elif self.free_rank > 1:
            parts.append(f"{c.label}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


ZERO = HomologyGroup()


@dataclass
class GradedModulePresentation:
    """Per-degree homology groups, stored on a window of degrees.

    Degrees outside ``window`` are zero unless ``unknown_outside`` is set,
    in which case asking for them raises ``KeyError``.
    """

    coefficients: Coefficients
    groups: dict[int, HomologyGroup] = field(default_factory=dict)
    window: tuple[int, int] | None = None
    unknown_outside: bool = False

    def __post_init__(self):
        if self.coefficients.is_field and any(g.torsion for g in self.groups.values()):
            raise ValueError("torsion over a field")
        if self.window is None and self.groups:
            self.window = (min(self.groups), max(self.groups))

    def __getitem__(self, degree: int) -> HomologyGroup:
        if degree in self.groups:
            return self.groups[degree]
        if self.unknown_outside and not self._inside(degree):
            raise KeyError(f"degree {degree} lies outside the computed window {self.window}")
        return ZERO

    def _inside(self, degree: int) -> bool:
        return self.window is not None and self.window[0] <= degree <= self.window[1]

    def degrees(self) -> list[int]:
        if self.window is None:
            return []
        return list(range(self.window[0], self.window[1] + 1))

    def nonzero_degrees(self) -> list[int]:
        return sorted(k for k, g in self.groups.items() if not g.is_zero)

    def ranks(self) -> dict[int, int]:
        return {k: self[k].free_rank for k in self.degrees()}

    def restrict(self, lo: int, hi: int) -> "GradedModulePresentation":
        return GradedModulePresentation(
            self.coefficients, {k: self[k] for k in range(lo, hi + 1)}, (lo, hi), self.unknown_outside)

    def shifted(self, n: int) -> "GradedModulePresentation":
        window = None if self.window is None else (self.window[0] + n, self.window[1] + n)
        return GradedModulePresentation(
            self.coefficients, {k + n: g for k, g in self.groups.items()}, window, self.unknown_outside)

    def agrees_with(self, other: "GradedModulePresentation", degrees: Iterable[int]) -> bool:
        return all(self[k] == other[k] for k in degrees)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedModulePresentation):
            return NotImplemented
        if self.coefficients != other.coefficients:
            return False
        ks = set(self.nonzero_degrees()) | set(other.nonzero_degrees())
        return all(self[k] == other[k] for k in ks)


# ---------------------------------------------------------------------------
# homology with explicit generators


class HomologyBasis:
    """Generators of ``ker(d_out)/im(d_in)`` and a coordinate map.

    ``generators[i]`` is a cycle (dense list) whose class has order
    ``orders[i]`` (0 means infinite order).  :meth:`coords` writes a cycle
    in terms of the generators; torsion coordinates are reduced mod their
    order.
    """

    def __init__(self, d_in: ExactMatrix, d_out: ExactMatrix, c: Coefficients):
        if d_in.rows != d_out.cols:
            raise ValueError("maps are not composable")
        if not (d_out @ d_in).is_zero(c):
            raise ValueError("not a complex")
        self.c = c
        self.n = d_out.cols
        self.d_out = d_out.reduce(c)
        if c.is_field:
            self._init_field(d_in.reduce(c), self.d_out)
        else:
            self._init_integral(d_in, d_out)

    def _init_field(self, d_in, d_out):
        c = self.c
        ech = FieldEchelon(c)
        cols = d_in.column_dicts()
        for j in range(d_in.cols):
            ech.add(cols.get(j, {}))
        gens, tags = [], []
        for z in nullspace(d_out, c):
            tag = ech.count
            if ech.add(z):
                gens.append(z)
                tags.append(tag)
        self._ech = ech
        self._tags = tags
        self.generators = gens
        self.orders = [0] * len(gens)

    def _init_integral(self, d_in, d_out):
        U, D, V, Uinv, Vinv = snf_with_inverses(d_out)
        r = sum(1 for i in range(min(D.shape)) if D[i, i])
        n = self.n
        kernel_cols = list(range(r, n))
        K = V.submatrix(list(range(n)), kernel_cols)
        self._Vinv_tail = Vinv.submatrix(kernel_cols, list(range(n)))
        M = self._Vinv_tail @ d_in
        U2, D2, V2, U2inv, _ = snf_with_inverses(M)
        self._U2 = U2
        k = len(kernel_cols)
        new_basis = K @ U2inv
        gens, orders, keep = [], [], []
        for i in range(k):
            d = D2[i, i] if i < min(D2.shape) else 0
            if d == 1:
                continue
            gens.append(new_basis.column(i))
            orders.append(d)
            keep.append(i)
        self._keep = keep
        # free generators first, then torsion in invariant-factor order
        order = sorted(range(len(gens)), key=lambda t: (orders[t] != 0, orders[t], t))
        self.generators = [gens[t] for t in order]
        self.orders = [orders[t] for t in order]
        self._keep = [keep[t] for t in order]

    @property
    def rank(self) -> int:
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self) -> list[int]:
        return [o for o in self.orders if o]

    def group(self) -> HomologyGroup:
        return HomologyGroup(self.rank, tuple(self.torsion))

    def is_cycle(self, z: Sequence) -> bool:
        return all(not self.c.reduce(v) for v in self.d_out.apply(list(z)))

    def coords(self, z: Sequence) -> list:
        """Coordinates of the class of the cycle ``z``."""
        z = [self.c.reduce(v) for v in z]
        if len(z) != self.n:
            raise ValueError("wrong chain length")
        if not self.is_cycle(z):
            raise ValueError("not a cycle")
        if self.c.is_field:
            combo = self._ech.solve(z)
            if combo is None:
                raise ArithmeticError("cycle outside the cycle space")
            return [combo.get(t, 0) for t in self._tags]
        y = self._U2.apply(self._Vinv_tail.apply(z))
        out = []
        for idx, o in zip(self._keep, self.orders):
            v = y[idx]
            out.append(v % o if o else v)
        return out

    def is_boundary(self, z: Sequence) -> bool:
        return all(not v for v in self.coords(z))

    def matrix_of(self, images: Sequence[Sequence]) -> ExactMatrix:
        """Matrix whose columns are the coordinates of the given cycles."""
        return ExactMatrix.from_columns(len(self.generators), [self.coords(z) for z in images])
