"""The four homology theories on finite models and checks of their structure.

Theories: ``chains`` (H_*), ``cochains`` (H^*), ``borel-moore`` (H^BM_*,
from the relative complex of a compact pair) and ``compact-cochains``
(H^*_c, its dual).  Cohomological answers are stored in degree ``-i``.
"""

from __future__ import annotations

import random
from itertools import combinations, product as iproduct
from typing import Callable, Sequence

from .chains import Bicomplex, ChainComplex, ChainMap, shift, total_complex
from .linalg import (
    Coefficients,
    ExactMatrix,
    FieldEchelon,
    GradedModulePresentation,
    HomologyBasis,
    determinant,
    invariant_factors,
    rank,
    rank_over_field,
)
from .report import TheoryReport
from .simplicial import (
    Orientation,
    SimplicialComplex,
    SimplicialPair,
    barycentric_subdivision,
    boundary_complex,
    ez_aw,
    fundamental_chain,
    product,
    product_pair,
    relative_complex,
)

__all__ = [
    "THEORIES",
    "THEORY_ALIASES",
    "compute",
    "theory_complex",
    "localization_check",
    "homotopy_invariance_check",
    "forget_supports_check",
    "cup",
    "cap",
    "cup_classes",
    "cohomology_basis",
    "cup_well_defined",
    "cap_product_check",
    "graded_commutativity_check",
    "poincare_duality_check",
    "gysin_trivial_bundle",
    "gysin_additivity_check",
    "proper_descent_check",
    "line_pair",
    "cube_pair",
]

THEORIES = ("cochains", "compact-cochains", "borel-moore", "chains")
THEORY_ALIASES = {"chains": "chains", "cochains": "cochains", "bm": "borel-moore",
                  "cohc": "compact-cochains"}
THEORY_ALIASES.update({t: t for t in THEORIES})

SAMPLE_LIMIT = 2 ** 16
RANDOM_SAMPLES = 32


def _pair(x) -> SimplicialPair:
    return x if isinstance(x, SimplicialPair) else SimplicialPair(x)


def theory_complex(space, theory: str, c: Coefficients) -> ChainComplex:
    """The complex whose homology is the requested theory."""
    theory = THEORY_ALIASES.get(theory, theory)
    pair = _pair(space)
    if theory in ("chains", "cochains") and not pair.is_compact:
        raise ValueError("theory requires compact model")
    if theory == "chains":
        return boundary_complex(pair.ambient, c)
    if theory == "cochains":
        return boundary_complex(pair.ambient, c).dual()
    if theory == "borel-moore":
        return relative_complex(pair, c)
    if theory == "compact-cochains":
        return relative_complex(pair, c).dual()
    raise ValueError(f"unknown theory {theory!r}")


def compute(space, theory: str, c: Coefficients, window: tuple[int, int] | None = None) -> TheoryReport:
    """Per-degree groups of one theory.

    ``window`` is given in the printed index (``i`` of ``H^i`` for the
    cohomological theories).
    """
    theory = THEORY_ALIASES.get(theory, theory)
    cx = theory_complex(space, theory, c)
    cohomological = theory in ("cochains", "compact-cochains")
    if window is not None:
        lo, hi = window
        if cohomological:
            lo, hi = -hi, -lo
        pres = cx.homology_all((lo, hi))
    else:
        pres = cx.homology_all()
    rep = TheoryReport("compute", theory, c, pres)
    if window is not None:
        rep.meta["show_zero"] = True
    return rep


# ---------------------------------------------------------------------------
# long exact sequences of pairs


def _coords_matrix(basis: HomologyBasis, images: list) -> ExactMatrix:
    return ExactMatrix.from_columns(len(basis.generators), [basis.coords(z) for z in images])


def _pair_les(sub: ChainComplex, amb: ChainComplex, incl: dict[int, list[int]], c: Coefficients,
              names: tuple[str, str, str]):
    """Matrices of ``H(A) -> H(X) -> H(X, A) -> H(A)[-1]`` for a subcomplex, over a field.

    ``incl[k]`` lists, for each basis element of ``sub`` in degree ``k``,
    its index in ``amb``.  Returns ``(positions, maps)`` where positions
    run from the top degree down and ``maps[i]`` goes from position ``i``
    to ``i + 1``.
    """
    top = max(amb.dims) if amb.dims else 0
    rest = {k: [i for i in range(amb.dim(k)) if i not in set(incl.get(k, []))] for k in range(-1, top + 2)}
    qdims = {k: len(v) for k, v in rest.items() if v}
    qdiffs = {k: amb.differential(k).submatrix(rest[k - 1], rest[k]) for k in range(1, top + 1)}
    quot = ChainComplex(c, qdims, qdiffs)
    bases = {}
    for k in range(0, top + 1):
        bases[(k, 0)] = sub.homology_basis(k)
        bases[(k, 1)] = amb.homology_basis(k)
        bases[(k, 2)] = quot.homology_basis(k)
    positions = []
    maps = []
    for k in range(top, -1, -1):
        bs, bx, bq = bases[(k, 0)], bases[(k, 1)], bases[(k, 2)]
        # i: sub -> amb
        imgs = []
        for z in bs.generators:
            v = [0] * amb.dim(k)
            for i, val in zip(incl.get(k, []), z):
                v[i] = val
            imgs.append(v)
        i_mat = _coords_matrix(bx, imgs)
        # j: amb -> quotient
        j_mat = _coords_matrix(bq, [[z[i] for i in rest[k]] for z in bx.generators])
        positions += [(names[0], k, bs), (names[1], k, bx), (names[2], k, bq)]
        maps += [i_mat, j_mat]
        if k > 0:
            # connecting map: lift, take the boundary, read it in the subcomplex
            d = amb.differential(k)
            imgs = []
            for z in bq.generators:
                v = [0] * amb.dim(k)
                for i, val in zip(rest[k], z):
                    v[i] = val
                w = [c.reduce(x) for x in d.apply(v)]
                if any(w[i] for i in rest[k - 1]):
                    raise ArithmeticError("relative cycle lifts badly")
                imgs.append([w[i] for i in incl.get(k - 1, [])])
            maps.append(_coords_matrix(bases[(k - 1, 0)], imgs))
    return positions, maps, quot


def _les_exactness(rep: TheoryReport, positions, maps, c: Coefficients, label: str) -> None:
    for idx, (name, k, basis) in enumerate(positions):
        dim = len(basis.generators)
        incoming = maps[idx - 1] if idx > 0 else None
        outgoing = maps[idx] if idx < len(maps) else None
        r_in = rank_over_field(incoming, c) if incoming is not None else 0
        r_out = rank_over_field(outgoing, c) if outgoing is not None else 0
        composite_zero = True
        if incoming is not None and outgoing is not None:
            composite_zero = (outgoing @ incoming).is_zero(c)
        ok = composite_zero and r_in + r_out == dim
        rep.add(f"{label} exact at {name}", ok, k, coefficients=c.label, dim=dim,
                rank_in=r_in, rank_out=r_out)


def _subcomplex_inclusion(x: SimplicialComplex, z: SimplicialComplex) -> dict[int, list[int]]:
    vmap = x.embedding(z)
    incl = {}
    for k in range(z.dimension + 1):
        incl[k] = [x.position(tuple(sorted(vmap[v] for v in s))) for s in z.simplices(k)]
    return incl


def _full_after_subdivision(x: SimplicialComplex, z: SimplicialComplex):
    if x.is_full_subcomplex(z):
        return x, z, False
    sub = barycentric_subdivision(x)
    vmap = x.embedding(z)
    zs = {tuple(sorted(vmap[v] for v in s)) for s in z.all_simplices()}
    inv = {b: s for s, b in sub.barycenter.items()}
    sd = sub.subdivided
    keep = [s for s in sd.all_simplices() if all(inv[v] in zs for v in s)]
    z2 = sd.subcomplex_from_indices(keep)
    if not sd.is_full_subcomplex(z2):
        raise ValueError("closed subcomplex is not full even after subdivision")
    return sd, z2, True


def localization_check(x: SimplicialComplex, z: SimplicialComplex, c: Coefficients) -> TheoryReport:
    """Localization sequence ``H^BM(Z) -> H^BM(X) -> H^BM(X - Z) ->`` for a closed full subcomplex.

    The open complement is represented by the pair ``(X, Z)``.  A second
    sequence, for the pair ``(X, Y)`` with ``Y`` the full subcomplex on the
    remaining vertices (a compact model of the complement), covers the
    chains variant.
    """
    x.embedding(z)
    x, z, subdivided = _full_after_subdivision(x, z)
    rep = TheoryReport("verify:localization", "borel-moore", c)
    rep.meta["subdivided"] = subdivided
    y = x.complement_full(z)
    fields = [c] if c.is_field else [Coefficients.rationals(), Coefficients.prime_field(2),
                                     Coefficients.prime_field(3)]
    incl_z = _subcomplex_inclusion(x, z)
    for f in fields:
        amb = boundary_complex(x, f)
        sub = boundary_complex(z, f)
        positions, maps, quot = _pair_les(sub, amb, incl_z, f, ("Z", "X", "U"))
        if f == c:
            _tables(rep, "borel-moore", {"H^BM(Z)": sub, "H^BM(X)": amb, "H^BM(U)": quot})
            for i, m in enumerate(maps):
                rep.matrices[f"map{i}"] = m
        _les_exactness(rep, positions, maps, f, "localization")
        if y is not None:
            sub_y = boundary_complex(y, f)
            positions, maps, _ = _pair_les(sub_y, amb, _subcomplex_inclusion(x, y), f,
                                           ("Y", "X", "(X,Y)"))
            _les_exactness(rep, positions, maps, f, "complement pair")
    if not c.is_field:
        amb = boundary_complex(x, c)
        sub = boundary_complex(z, c)
        rel = relative_complex(SimplicialPair(x, z), c)
        _tables(rep, "borel-moore", {"H^BM(Z)": sub, "H^BM(X)": amb, "H^BM(U)": rel})
        chi = (amb.euler_characteristic(), sub.euler_characteristic(), rel.euler_characteristic())
        rep.add("Euler characteristic additivity", chi[0] == chi[1] + chi[2], None,
                X=chi[0], Z=chi[1], U=chi[2])
    rep.groups = rep.tables["H^BM(U)"][1]
    return rep


def _tables(rep: TheoryReport, theory: str, complexes: dict[str, ChainComplex]) -> None:
    top = max((max(cx.dims) for cx in complexes.values() if cx.dims), default=0)
    for title, cx in complexes.items():
        rep.tables[title] = (theory, cx.homology_all((0, top)))


# ---------------------------------------------------------------------------
# homotopy invariance, Gysin maps and forgetting supports


def line_pair() -> SimplicialPair:
    """The open line as (interval, both endpoints)."""
    i = SimplicialComplex(["0", "1"], [["0", "1"]], name="I")
    return SimplicialPair(i, i.subcomplex([["0"], ["1"]]))


def interval() -> SimplicialComplex:
    return SimplicialComplex(["0", "1"], [["0", "1"]], name="I")


def cube_pair(r: int) -> SimplicialPair:
    """``(I^r, boundary)`` as an iterated product pair."""
    if r <= 0:
        raise ValueError("r must be positive")
    p = line_pair()
    for _ in range(r - 1):
        p = product_pair(p, line_pair())
    return p


def homotopy_invariance_check(x, r: int, c: Coefficients) -> TheoryReport:
    """``H^BM_{n+r}(X x R^r) = H^BM_n(X)`` and ``H_*(X x I^r) = H_*(X)``."""
    if r <= 0:
        raise ValueError("r must be positive")
    pair = _pair(x)
    rep = TheoryReport("verify:homotopy", "borel-moore", c)
    base = relative_complex(pair, c)
    top = base.support[1] if base.support else 0
    base_h = base.homology_all((0, top))
    total = product_pair(pair, cube_pair(r))
    bundle = relative_complex(total, c)
    bundle_h = bundle.homology_all((0, top + r))
    expected = shift(base, r).homology_all((0, top + r))
    rep.groups = bundle_h
    rep.tables["H^BM(X)"] = ("borel-moore", base_h)
    rep.tables[f"H^BM(X x R^{r})"] = ("borel-moore", bundle_h)
    for k in range(0, top + r + 1):
        rep.add(f"H^BM_k(X x R^{r}) = H^BM_(k-{r})(X)", bundle_h[k] == expected[k], k,
                bundle=bundle_h[k].describe(c), base=expected[k].describe(c))
    # one step at a time agrees with the r-step answer
    step = pair
    for s in range(1, r + 1):
        step = product_pair(step, line_pair())
        h = relative_complex(step, c).homology_all((0, top + s))
        exp = shift(base, s).homology_all((0, top + s))
        rep.add(f"iterated step {s}", h == exp, None)
    if step.ambient != total.ambient:
        rep.add("iterated product equals cube product", False, None)
    # compact model of the homotopy equivalence
    amb = boundary_complex(pair.ambient, c)
    cyl = pair.ambient
    for _ in range(r):
        cyl = product(cyl, interval())
    cyl_h = boundary_complex(cyl, c).homology_all((0, top + r))
    amb_h = amb.homology_all((0, top + r))
    rep.tables[f"H(Xbar x I^{r})"] = ("chains", cyl_h)
    for k in range(0, top + r + 1):
        rep.add(f"H_k(Xbar x I^{r}) = H_k(Xbar)", cyl_h[k] == amb_h[k], k)
    rep.meta["shift"] = r
    return rep


def _relative_positions(pair: SimplicialPair, k: int) -> dict[tuple, int]:
    return {s: i for i, s in enumerate(pair.open_simplices(k))}


def _cross_vector(pc, px: SimplicialPair, py: SimplicialPair, pxy: SimplicialPair,
                  a: Sequence, b: Sequence, p: int, q: int, c: Coefficients) -> list:
    """EZ cross product of relative chains ``a`` (degree p) and ``b`` (degree q)."""
    xs = px.open_simplices(p)
    ys = py.open_simplices(q)
    xpos = {s: i for i, s in enumerate(px.ambient.simplices(p))}
    ypos = {s: i for i, s in enumerate(py.ambient.simplices(q))}
    n = p + q
    tpos = {t: i for i, t in enumerate(pc.tensor_basis.get(n, []))}
    vec = [0] * pc.tensor.dim(n)
    for s, va in zip(xs, a):
        if not va:
            continue
        for t, vb in zip(ys, b):
            if vb:
                vec[tpos[(p, xpos[s], ypos[t])]] += va * vb
    image = pc.ez.component(n).apply(vec)
    out_pos = _relative_positions(pxy, n)
    prod_simplices = pc.product_space.simplices(n)
    res = [0] * len(out_pos)
    for i, v in enumerate(image):
        if v:
            j = out_pos.get(prod_simplices[i])
            if j is not None:
                res[j] = c.reduce(res[j] + v)
    return res


def _cube(r: int, c: Coefficients):
    p = line_pair()
    u = [1]
    for k in range(1, r):
        pc = ez_aw(p.ambient, interval(), c)
        nxt = product_pair(p, line_pair())
        u = _cross_vector(pc, p, line_pair(), nxt, u, [1], k, 1, c)
        p = nxt
    return p, u


def _slant_vector(pc, pxy: SimplicialPair, px: SimplicialPair, py: SimplicialPair,
                  w: Sequence, n: int, r: int, ycochain: dict[tuple, object], c: Coefficients) -> list:
    """``AW(w)`` slant a relative cochain on ``y`` of degree ``r``; result in degree ``n - r``."""
    full = [0] * pc.product_complex.dim(n)
    pos = {s: i for i, s in enumerate(pc.product_space.simplices(n))}
    for s, v in zip(pxy.open_simplices(n), w):
        if v:
            full[pos[s]] = v
    t = pc.aw.component(n).apply(full)
    p = n - r
    xsimp = px.ambient.simplices(p)
    ysimp = py.ambient.simplices(r)
    out_pos = _relative_positions(px, p)
    res = [0] * len(out_pos)
    for (pp, i, j), v in zip(pc.tensor_basis.get(n, []), t):
        if pp != p or not v:
            continue
        val = ycochain.get(ysimp[j])
        if not val:
            continue
        k = out_pos.get(xsimp[i])
        if k is not None:
            res[k] = c.reduce(res[k] + v * val)
    return res


def gysin_trivial_bundle(x, r: int, c: Coefficients) -> TheoryReport:
    """Cross product with the cube class, ``H^BM_n(X) -> H^BM_{n+r}(X x R^r)``.

    The inverse is the slant product with the dual cube cocycle.  Both
    composites are checked to be identities on homology.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    pair = _pair(x)
    cube, u = _cube(r, c)
    total = product_pair(pair, cube)
    pc = ez_aw(pair.ambient, cube.ambient, c)
    top_simplices = cube.open_simplices(r)
    lead = next(i for i, v in enumerate(u) if v)
    dual = {top_simplices[lead]: c.inverse(u[lead]) if c.is_field else u[lead]}
    base = relative_complex(pair, c)
    bund = relative_complex(total, c)
    top = base.support[1] if base.support else 0
    rep = TheoryReport("verify:gysin", "borel-moore", c)
    rep.tables["H^BM(X)"] = ("borel-moore", base.homology_all((0, top)))
    rep.tables[f"H^BM(X x R^{r})"] = ("borel-moore", bund.homology_all((0, top + r)))
    for n in range(0, top + 1):
        bx = base.homology_basis(n)
        be = bund.homology_basis(n + r)
        crossed = [_cross_vector(pc, pair, cube, total, z, u, n, r, c) for z in bx.generators]
        g = _coords_matrix(be, crossed)
        slanted = [_slant_vector(pc, total, pair, cube, w, n + r, r, dual, c) for w in be.generators]
        s = _coords_matrix(bx, slanted)
        rep.matrices[f"gysin {n}->{n + r}"] = g
        rep.matrices[f"slant {n + r}->{n}"] = s
        ident_x = ExactMatrix.identity(len(bx.generators))
        ident_e = ExactMatrix.identity(len(be.generators))
        rep.add("slant o gysin = id", _equal_on_classes(s @ g, ident_x, bx, c), n, matrix=g)
        rep.add("gysin o slant = id", _equal_on_classes(g @ s, ident_e, be, c), n + r)
    return rep


def _equal_on_classes(a: ExactMatrix, b: ExactMatrix, basis: HomologyBasis, c: Coefficients) -> bool:
    """Matrices agree as maps into the group with generator orders ``basis.orders``."""
    if a.shape != b.shape:
        return False
    for i in range(a.rows):
        o = basis.orders[i]
        for j in range(a.cols):
            diff = c.reduce(a[i, j] - b[i, j])
            if o:
                diff %= o
            if diff:
                return False
    return True


def gysin_additivity_check(x, r1: int, r2: int, c: Coefficients) -> TheoryReport:
    """Crossing with the r1-cube then the r2-cube equals crossing with the (r1+r2)-cube."""
    pair = _pair(x)
    c1, u1 = _cube(r1, c)
    c2, u2 = _cube(r2, c)
    c12, u12 = _cube(r1 + r2, c)
    e1 = product_pair(pair, c1)
    e12 = product_pair(e1, c2)
    direct = product_pair(pair, c12)
    rep = TheoryReport("verify:gysin-additivity", "borel-moore", c)
    if e12.ambient != direct.ambient:
        rep.add("iterated bundle equals direct bundle", False, None)
        return rep
    pc1 = ez_aw(pair.ambient, c1.ambient, c)
    pc2 = ez_aw(e1.ambient, c2.ambient, c)
    pcd = ez_aw(pair.ambient, c12.ambient, c)
    base = relative_complex(pair, c)
    bund = relative_complex(direct, c)
    top = base.support[1] if base.support else 0
    for n in range(0, top + 1):
        bx = base.homology_basis(n)
        be = bund.homology_basis(n + r1 + r2)
        two = [_cross_vector(pc2, e1, c2, e12, _cross_vector(pc1, pair, c1, e1, z, u1, n, r1, c),
                             u2, n + r1, r2, c) for z in bx.generators]
        one = [_cross_vector(pcd, pair, c12, direct, z, u12, n, r1 + r2, c) for z in bx.generators]
        ok = _coords_matrix(be, two).equals(_coords_matrix(be, one), c)
        rep.add(f"gysin({r1}) then gysin({r2}) = gysin({r1 + r2})", ok, n)
    return rep


def forget_supports_check(x, c: Coefficients) -> TheoryReport:
    """For a compact space, chains and Borel-Moore chains give the same groups."""
    pair = _pair(x)
    if not pair.is_compact:
        raise ValueError("theory requires compact model")
    ch = compute(pair, "chains", c)
    bm = compute(pair, "borel-moore", c)
    rep = TheoryReport("verify:forget-supports", "chains", c, ch.groups)
    rep.tables["H^BM"] = ("borel-moore", bm.groups)
    top = pair.ambient.dimension
    for k in range(0, top + 1):
        rep.add("H_k = H^BM_k", ch.groups[k] == bm.groups[k], k)
    return rep


# ---------------------------------------------------------------------------
# cup and cap products


def _cochain_dict(x: SimplicialComplex, k: int, values: Sequence) -> dict:
    simp = x.simplices(k)
    if len(values) != len(simp):
        raise ValueError(f"cochain of degree {k} needs {len(simp)} values")
    return {s: v for s, v in zip(simp, values) if v}


def cup(x: SimplicialComplex, a: Sequence, p: int, b: Sequence, q: int, c: Coefficients) -> list:
    """Front-face / back-face product of cochains (given on the simplex basis)."""
    if p < 0 or q < 0 or p + q > x.dimension:
        raise ValueError("degree mismatch with ambient dimension")
    ad, bd = _cochain_dict(x, p, a), _cochain_dict(x, q, b)
    out = []
    for s in x.simplices(p + q):
        va = ad.get(s[:p + 1])
        vb = bd.get(s[p:]) if va else None
        out.append(c.reduce(va * vb) if va and vb else 0)
    return out


def cap(x, a: Sequence, p: int, m: Sequence, n: int, c: Coefficients) -> list:
    """``a`` cap ``m``: each ``n``-simplex contributes ``a(back p-face) * front (n-p)-face``.

    ``x`` may be a pair; then ``m`` is a relative chain and the result is
    relative too.
    """
    pair = _pair(x)
    amb = pair.ambient
    if p < 0 or p > n or n > amb.dimension:
        raise ValueError("degree out of range")
    ad = _cochain_dict(amb, p, a)
    src = pair.open_simplices(n)
    if len(m) != len(src):
        raise ValueError(f"chain of degree {n} needs {len(src)} values")
    tgt = {s: i for i, s in enumerate(pair.open_simplices(n - p))}
    out = [0] * len(tgt)
    for s, v in zip(src, m):
        if not v:
            continue
        va = ad.get(s[n - p:])
        if not va:
            continue
        i = tgt.get(s[:n - p + 1])
        if i is not None:
            out[i] = c.reduce(out[i] + va * v)
    return out


def cohomology_basis(x: SimplicialComplex, p: int, c: Coefficients) -> HomologyBasis:
    """Basis of ``H^p`` by cocycles (homology of the dual complex in degree ``-p``)."""
    return boundary_complex(x, c).dual().homology_basis(-p)


def cup_classes(x: SimplicialComplex, a: Sequence, p: int, b: Sequence, q: int,
                c: Coefficients) -> list:
    """Coordinates of ``[a] cup [b]`` in the cohomology basis of degree ``p + q``."""
    return cohomology_basis(x, p + q, c).coords(cup(x, a, p, b, q, c))


def _coboundaries(x: SimplicialComplex, k: int, c: Coefficients, seed: int):
    """Coboundaries ``delta e`` of ``(k-1)``-cochains ``e``.

    Over F2 every ``e`` is enumerated when there are at most 2^16 of them;
    otherwise 32 seeded random ``e`` are drawn.
    """
    n = x.count(k - 1) if k >= 1 else 0
    if n == 0:
        yield [0] * x.count(k)
        return
    dt = boundary_complex(x, c).differential(k).transpose()
    if c.kind == "prime-field" and c.prime == 2 and 2 ** n <= SAMPLE_LIMIT:
        for bits in iproduct((0, 1), repeat=n):
            yield [c.reduce(v) for v in dt.apply(list(bits))]
        return
    rng = random.Random(seed)
    lo, hi = (0, c.prime) if c.kind == "prime-field" else (-5, 6)
    for _ in range(RANDOM_SAMPLES):
        e = [rng.randrange(lo, hi) for _ in range(n)]
        yield [c.reduce(v) for v in dt.apply(e)]


def cup_well_defined(x: SimplicialComplex, p: int, q: int, c: Coefficients, seed: int = 0) -> bool:
    """Perturbing representatives by coboundaries leaves every cup class unchanged."""
    ha, hb = cohomology_basis(x, p, c), cohomology_basis(x, q, c)
    target = cohomology_basis(x, p + q, c)
    for a in ha.generators:
        for b in hb.generators:
            ref = target.coords(cup(x, a, p, b, q, c))
            for db in _coboundaries(x, p, c, seed):
                a2 = [c.reduce(u + v) for u, v in zip(a, db)]
                if target.coords(cup(x, a2, p, b, q, c)) != ref:
                    return False
            for db in _coboundaries(x, q, c, seed + 1):
                b2 = [c.reduce(u + v) for u, v in zip(b, db)]
                if target.coords(cup(x, a, p, b2, q, c)) != ref:
                    return False
    return True


def graded_commutativity_check(x: SimplicialComplex, c: Coefficients) -> TheoryReport:
    """``a cup b = (-1)^{pq} b cup a`` on classes, for all basis classes."""
    rep = TheoryReport("verify:cup", "cochains", c)
    d = x.dimension
    for p in range(d + 1):
        for q in range(d + 1 - p):
            ha, hb = cohomology_basis(x, p, c), cohomology_basis(x, q, c)
            target = cohomology_basis(x, p + q, c)
            sign = -1 if (p * q) % 2 else 1
            ok = True
            for a in ha.generators:
                for b in hb.generators:
                    lhs = cup(x, a, p, b, q, c)
                    rhs = cup(x, b, q, a, p, c)
                    diff = [c.reduce(u - sign * v) for u, v in zip(lhs, rhs)]
                    if any(target.coords(diff)):
                        ok = False
            rep.add("graded commutativity", ok, p + q, p=p, q=q)
    return rep


def cap_product_check(x: SimplicialComplex, c: Coefficients, seed: int = 0) -> TheoryReport:
    """Unit law, associativity ``(a cup b) cap m = a cap (b cap m)`` and well-definedness on classes.

    ``m`` runs over the homology basis in each degree, ``a`` and ``b`` over
    cohomology bases.  Representatives of ``a`` are perturbed by coboundaries.
    """
    rep = TheoryReport("verify:cap", "chains", c)
    d = x.dimension
    chains = boundary_complex(x, c)
    hom = {n: chains.homology_basis(n) for n in range(d + 1)}
    coh = {p: cohomology_basis(x, p, c) for p in range(d + 1)}
    unit = [1] * x.count(0)
    for n in range(d + 1):
        ok = all(hom[n].coords(cap(x, unit, 0, m, n, c)) == hom[n].coords(m) for m in hom[n].generators)
        rep.add("unit cap m = m", ok, n)
    for n in range(d + 1):
        for p in range(n + 1):
            for q in range(n - p + 1):
                ok = True
                for m in hom[n].generators:
                    for a in coh[p].generators:
                        for b in coh[q].generators:
                            lhs = cap(x, cup(x, a, p, b, q, c), p + q, m, n, c)
                            rhs = cap(x, a, p, cap(x, b, q, m, n, c), n - q, c)
                            if hom[n - p - q].coords(lhs) != hom[n - p - q].coords(rhs):
                                ok = False
                rep.add("(a cup b) cap m = a cap (b cap m)", ok, n, p=p, q=q)
    for n in range(d + 1):
        for p in range(n + 1):
            ok = True
            for m in hom[n].generators:
                for a in coh[p].generators:
                    ref = hom[n - p].coords(cap(x, a, p, m, n, c))
                    for db in _coboundaries(x, p, c, seed):
                        a2 = [c.reduce(u + v) for u, v in zip(a, db)]
                        if hom[n - p].coords(cap(x, a2, p, m, n, c)) != ref:
                            ok = False
            rep.add("cap well defined on classes", ok, n, p=p)
    return rep


# ---------------------------------------------------------------------------
# Poincare duality


def _is_isomorphism(m: ExactMatrix, src: HomologyBasis, tgt: HomologyBasis, c: Coefficients) -> bool:
    if src.group() != tgt.group():
        return False
    if c.is_field:
        return m.rows == m.cols and rank_over_field(m, c) == m.rows
    # onto a group with the same invariants is an isomorphism
    rel = ExactMatrix(len(tgt.orders), len(tgt.orders),
                      {i: {i: o} for i, o in enumerate(tgt.orders) if o})
    both = ExactMatrix.block([m.rows], [m.cols, rel.cols], {(0, 0): m, (0, 1): rel})
    inv = invariant_factors(both)
    return len(inv) == m.rows and all(d == 1 for d in inv)


def poincare_duality_check(x: SimplicialComplex, o: Orientation | None, c: Coefficients) -> TheoryReport:
    """Cap with the fundamental cycle maps ``H^k`` isomorphically onto ``H_{d-k}``."""
    fund = fundamental_chain(x, o, c)
    d = x.dimension
    chains = boundary_complex(x, c)
    cochains = chains.dual()
    rep = TheoryReport("verify:poincare", "chains", c, chains.homology_all((0, d)))
    rep.tables["H^*"] = ("cochains", cochains.homology_all((-d, 0)))
    for k in range(0, d + 1):
        hk = cochains.homology_basis(-k)
        hd = chains.homology_basis(d - k)
        images = [cap(x, a, k, fund, d, c) for a in hk.generators]
        m = _coords_matrix(hd, images)
        rep.matrices[f"cap H^{k} -> H_{d - k}"] = m
        wit = {"matrix": m}
        if m.rows == m.cols and not any(hd.orders):
            wit["det"] = c.reduce(determinant(m)) if m.rows else 1
        rep.add("cap with fundamental class is an isomorphism", _is_isomorphism(m, hk, hd, c), k, **wit)
    return rep


# ---------------------------------------------------------------------------
# proper descent


def _intersection(pieces: list[frozenset]) -> frozenset:
    out = pieces[0]
    for p in pieces[1:]:
        out = out & p
    return out


def proper_descent_check(x: SimplicialComplex, cover: Sequence[SimplicialComplex],
                         c: Coefficients) -> TheoryReport:
    """Cech bicomplex of a closed cover totalizes to the chains of ``x``."""
    if not cover:
        raise ValueError("not a cover")
    sets = []
    for y in cover:
        vmap = x.embedding(y)
        sets.append(frozenset(tuple(sorted(vmap[v] for v in s)) for s in y.all_simplices()))
    if set().union(*sets) != set(x.all_simplices()):
        raise ValueError("not a cover")
    n = len(sets)
    d = x.dimension
    index_sets: dict[int, list[tuple[int, ...]]] = {}
    for p in range(n):
        index_sets[p] = [I for I in combinations(range(n), p + 1) if _intersection([sets[i] for i in I])]
    # simplices of each intersection in degree q, in ambient order
    basis: dict[tuple[int, ...], dict[int, list]] = {}
    for p, Is in index_sets.items():
        for I in Is:
            inter = _intersection([sets[i] for i in I])
            basis[I] = {q: [s for s in x.simplices(q) if s in inter] for q in range(d + 1)}
    dims = {}
    offsets: dict[tuple[int, int], dict[tuple[int, ...], int]] = {}
    for p, Is in index_sets.items():
        for q in range(d + 1):
            off = 0
            offsets[(p, q)] = {}
            for I in Is:
                offsets[(p, q)][I] = off
                off += len(basis[I][q])
            dims[(p, q)] = off
    full = boundary_complex(x, c)
    dh, dv = {}, {}
    for p, Is in index_sets.items():
        for q in range(d + 1):
            if p > 0:
                entries = []
                for I in Is:
                    for j in range(len(I)):
                        J = I[:j] + I[j + 1:]
                        sign = -1 if j % 2 else 1
                        pos_j = {s: i for i, s in enumerate(basis[J][q])}
                        for col, s in enumerate(basis[I][q]):
                            entries.append((offsets[(p - 1, q)][J] + pos_j[s],
                                            offsets[(p, q)][I] + col, sign))
                dh[(p, q)] = ExactMatrix.from_entries(dims[(p - 1, q)], dims[(p, q)], entries)
            if q > 0:
                sign = -1 if p % 2 else 1
                entries = []
                dq = full.differential(q)
                for I in Is:
                    rows = [x.position(s) for s in basis[I][q - 1]]
                    cols = [x.position(s) for s in basis[I][q]]
                    block = dq.submatrix(rows, cols)
                    ro, co = offsets[(p, q - 1)][I], offsets[(p, q)][I]
                    entries.extend((i + ro, j + co, sign * v) for i, j, v in block.items())
                dv[(p, q)] = ExactMatrix.from_entries(dims[(p, q - 1)], dims[(p, q)], entries)
    tot = total_complex(Bicomplex(c, dims, dh, dv))
    rep = TheoryReport("verify:descent", "chains", c)
    direct = full.homology_all((0, d))
    via = tot.homology_all((0, d + n - 1))
    rep.groups = via
    rep.tables["direct"] = ("chains", direct)
    rep.meta["cover size"] = n
    # augmentation: sum of inclusions from the p = 0 column
    aug = {}
    for q in range(d + 1):
        e = []
        for I in index_sets[0]:
            off = offsets[(0, q)][I]
            for col, s in enumerate(basis[I][q]):
                e.append((x.position(s), off + col, 1))
        aug[q] = ExactMatrix.from_entries(full.dim(q), tot.dim(q), e)
    for q in range(d + 1, d + n):
        aug[q] = ExactMatrix.zeros(0, tot.dim(q))
    amap = ChainMap(tot, full, aug)
    rep.add("augmentation is a chain map", amap.is_chain_map(), None)
    for k in range(0, d + n):
        rep.add("Cech totalization recovers H_k", via[k] == direct[k], k,
                cech=via[k].describe(c), direct=direct[k].describe(c))
    return rep
