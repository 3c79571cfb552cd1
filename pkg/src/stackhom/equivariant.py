"""Equivariant homology of finite group quotients.

Derived fixed points are computed as the total complex of
``Hom_G(P, C)`` for a truncated resolution ``P``; homotopy orbits as
``P (x)_G C``.  Truncation lengths are chosen from the requested window
and confirmed by recomputing with two more stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chains import (
    ChainComplex,
    ChainMap,
    GroupAlgebraComplex,
    hom_over_group_ring,
    tensor_over_group_ring,
    total_complex,
)
from .groups import FiniteGroup, GroupAction
from .linalg import Coefficients, ExactMatrix, GradedModulePresentation
from .report import TheoryReport
from .resolutions import BorelManifoldModel, Resolution, choose_resolution
from .simplicial import SimplicialComplex, SimplicialPair, relative_complex, subdivide_pair

__all__ = [
    "EquivariantComplex",
    "StabilizationError",
    "equivariant_chain_complex",
    "orbit_complex",
    "derived_fixed_points",
    "equivariant_homology",
    "equivariant_bm_homology",
    "homotopy_orbit_chains",
    "borel_comparison",
    "guaranteed_window_start",
]

STABILIZATION_CAP = 64


class StabilizationError(RuntimeError):
    """Raised when length-N and length-(N+2) answers keep disagreeing up to the cap.

    ``partial`` holds ``(N, presentation)`` pairs for the last comparison.
    """

    def __init__(self, message: str, partial: list[tuple[int, GradedModulePresentation]]):
        super().__init__(message)
        self.partial = partial


@dataclass
class EquivariantComplex:
    """A (relative) chain complex with its group action, after regularization."""

    pair: SimplicialPair
    action: GroupAction
    gcomplex: GroupAlgebraComplex
    regularized: bool
    stabilizers: dict[int, int] = field(default_factory=dict)

    @property
    def complex(self) -> ChainComplex:
        return self.gcomplex.complex

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def coefficients(self) -> Coefficients:
        return self.gcomplex.coefficients

    @property
    def top_degree(self) -> int:
        sup = self.complex.support
        return sup[1] if sup else 0

    @property
    def is_free(self) -> bool:
        return set(self.stabilizers) <= {1}


def _as_pair(x) -> SimplicialPair:
    if isinstance(x, SimplicialPair):
        return x
    if isinstance(x, SimplicialComplex):
        return SimplicialPair(x)
    raise TypeError("expected a simplicial complex or pair")


def equivariant_chain_complex(x, a: GroupAction, c: Coefficients) -> EquivariantComplex:
    """Relative chains with the signed permutation action.

    If some simplex is flipped by its stabilizer, the space is subdivided
    twice first so that stabilizers fix their simplices pointwise.
    """
    pair = _as_pair(x)
    if not a.space.same_as(pair.ambient):
        raise ValueError("action does not preserve the complex")
    if not a.is_stable(pair):
        raise ValueError("at_infinity not G-stable")
    regularized = False
    if not a.is_regular():
        for _ in range(2):
            pair, sub = subdivide_pair(pair)
            a = a.subdivided(sub)
        regularized = True
        if not a.is_regular():
            raise ArithmeticError("action is still irregular after subdivision")
    cx = relative_complex(pair, c)
    gc = a.chain_action(cx, {k: cx.basis[k] for k in cx.dims}, c)
    hist: dict[int, int] = {}
    inf = pair.infinity_simplices
    for s in pair.ambient.all_simplices():
        if s in inf:
            continue
        k = len(a.stabilizer(s))
        hist[k] = hist.get(k, 0) + 1
    return EquivariantComplex(pair, a, gc, regularized, dict(sorted(hist.items())))


def orbit_complex(ec: EquivariantComplex) -> tuple[ChainComplex, ChainMap]:
    """Coinvariants ``C_G`` on the basis of orbits, with the projection ``C -> C_G``.

    Needs a regular action, so that no simplex is sent to minus itself.
    """
    cx = ec.complex
    a = ec.action
    c = cx.coefficients
    G = a.group
    reps: dict[int, list] = {}
    proj = {}
    for k in cx.dims:
        simplices = cx.basis[k]
        pos = {s: i for i, s in enumerate(simplices)}
        orbit_of: dict[tuple, tuple[int, int]] = {}
        orbit_list = []
        for s in simplices:
            if s in orbit_of:
                continue
            idx = len(orbit_list)
            orbit_list.append(s)
            for g in range(G.order):
                t, sign = a.apply(g, s)
                if t in orbit_of:
                    if orbit_of[t] != (idx, sign):
                        raise ValueError("action is not regular")
                else:
                    orbit_of[t] = (idx, sign)
        reps[k] = orbit_list
        entries = [(orbit_of[s][0], pos[s], orbit_of[s][1]) for s in simplices]
        proj[k] = ExactMatrix.from_entries(len(orbit_list), len(simplices), entries).reduce(c)
    dims = {k: len(v) for k, v in reps.items()}
    diffs = {}
    for k in cx.d:
        d = cx.differential(k)
        cols = []
        for s in reps[k]:
            j = cx.basis[k].index(s)
            cols.append(proj[k - 1].apply(d.column(j)))
        diffs[k] = ExactMatrix.from_columns(dims.get(k - 1, 0), cols)
    oc = ChainComplex(c, dims, diffs, reps)
    pm = ChainMap(cx, oc, proj)
    if not pm.is_chain_map():
        raise ArithmeticError("orbit projection is not a chain map")
    return oc, pm


def _fixed_points_at(ec: EquivariantComplex, res: Resolution, window) -> GradedModulePresentation:
    tot = total_complex(hom_over_group_ring(res, ec.gcomplex))
    return tot.homology_all(window)


def derived_fixed_points(ec: EquivariantComplex, window: tuple[int, int], resolution: str = "auto",
                         cap: int = STABILIZATION_CAP):
    """Stabilized ``H_i^G`` on ``window``; returns ``(presentation, N, N + 2, kind)``."""
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    n = max(1, ec.top_degree - lo + 2)
    last = []
    while n <= cap:
        res = choose_resolution(ec.group, ec.coefficients, n + 2, resolution)
        first = _fixed_points_at(ec, res.truncate(n), window)
        second = _fixed_points_at(ec, res, window)
        if first.agrees_with(second, range(lo, hi + 1)):
            return first, n, n + 2, res.kind
        last = [(n, first), (n + 2, second)]
        n *= 2
    raise StabilizationError(f"no stabilization up to N={cap}", last)


def _free_collapse_checks(report: TheoryReport, ec: EquivariantComplex, pres, window) -> None:
    lo, hi = window
    oc, _ = orbit_complex(ec)
    quotient = oc.homology_all((max(lo, 0), max(hi, 0)))
    for k in range(lo, hi + 1):
        if k < 0:
            report.add("free action: negative degree vanishes", pres[k].is_zero, k)
        elif k <= ec.top_degree:
            report.add("free action: matches quotient complex", pres[k] == quotient[k], k,
                       quotient=quotient[k].describe(ec.coefficients))


def _equivariant_report(x, a, c, window, resolution, cap, theory) -> TheoryReport:
    ec = equivariant_chain_complex(x, a, c)
    lo, hi = window
    rep = TheoryReport("equivariant", theory, c)
    try:
        pres, n1, n2, kind = derived_fixed_points(ec, window, resolution, cap)
    except StabilizationError as err:
        for n, p in err.partial:
            rep.tables[f"length {n}"] = (theory, p)
        rep.add("stabilization", False, None, cap=cap)
        rep.meta["note"] = f"no stabilization up to N={cap}"
        raise _ReportedStabilizationError(str(err), err.partial, rep) from None
    rep.groups = pres
    rep.meta["show_zero"] = True
    rep.meta["note"] = f"stabilized at N={n1} (compared N={n1} and N={n2})"
    rep.meta["resolution"] = kind
    rep.meta["group"] = a.group.name
    rep.meta["regularized"] = ec.regularized
    rep.meta["stabilizer orders"] = {str(k): v for k, v in ec.stabilizers.items()}
    rep.add("truncation stability", True, None, N=n1, compared=n2)
    if ec.is_free:
        _free_collapse_checks(rep, ec, pres, window)
    return rep


class _ReportedStabilizationError(StabilizationError):
    def __init__(self, message, partial, report: TheoryReport):
        super().__init__(message, partial)
        self.report = report


def equivariant_homology(x, a: GroupAction, c: Coefficients, window: tuple[int, int],
                         resolution: str = "auto", cap: int = STABILIZATION_CAP) -> TheoryReport:
    """``H_i^G(X)`` for ``i`` in ``window``; ``x`` should be compact."""
    pair = _as_pair(x)
    if not pair.is_compact:
        raise ValueError("theory requires compact model")
    return _equivariant_report(pair, a, c, window, resolution, cap, "equivariant")


def equivariant_bm_homology(x, a: GroupAction, c: Coefficients, window: tuple[int, int],
                            resolution: str = "auto", cap: int = STABILIZATION_CAP) -> TheoryReport:
    """Borel-Moore ``H_i^{BM,G}`` of the open part of a G-stable pair."""
    return _equivariant_report(_as_pair(x), a, c, window, resolution, cap, "equivariant-bm")


def homotopy_orbit_chains(x, a: GroupAction, c: Coefficients, truncation: int,
                          resolution: str = "auto") -> TheoryReport:
    """Homology of the Borel construction in degrees ``0..truncation-2``."""
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    ec = equivariant_chain_complex(x, a, c)
    top = truncation - 2
    length = max(truncation - 1, 1)
    res = choose_resolution(ec.group, c, length + 2, resolution)
    window = (0, max(top, 0))

    def orbits(r):
        tot = tensor_over_group_ring(r, ec.gcomplex)
        return tot.homology_all(window)

    pres = orbits(res.truncate(length))
    longer = orbits(res)
    if top < 0:
        pres = GradedModulePresentation(c, {}, None)
    rep = TheoryReport("stack-chains", "stack-chains", c, pres)
    rep.meta["show_zero"] = True
    rep.meta["resolution"] = res.kind
    rep.meta["truncation"] = truncation
    rep.meta["group"] = a.group.name
    rep.add("truncation stability", pres.agrees_with(longer, range(0, top + 1)), None,
            length=length, compared=length + 2)
    if ec.is_free and top >= 0:
        oc, _ = orbit_complex(ec)
        quotient = oc.homology_all(window)
        for k in range(0, top + 1):
            rep.add("free action: matches quotient complex", pres[k] == quotient[k], k,
                    quotient=quotient[k].describe(c))
    return rep


def guaranteed_window_start(dim_x: int, model: BorelManifoldModel) -> int:
    """Smallest degree where the stage-n Borel model is guaranteed to agree."""
    return dim_x - model.dimension + 1


def borel_comparison(x, a: GroupAction, c: Coefficients, stage: int | None,
                     window: tuple[int, int], resolution: str = "auto") -> TheoryReport:
    """Compare ``H_i^G`` with shifted homology of ``X x_G S`` for sphere models at two stages."""
    G = a.group
    if not c.is_field:
        raise ValueError("field required")
    gen = G.generator()
    if G.order < 2 or gen is None:
        raise ValueError("model/group mismatch: sphere models need a nontrivial cyclic group")
    if G.order == 2 and c.prime != 2:
        raise ValueError("projective-space models are not orientable over this field; use f2")
    pair = _as_pair(x)
    ec = equivariant_chain_complex(pair, a, c)
    dim_x = ec.top_degree
    lo, hi = window
    if stage is None:
        stage = 1
        while guaranteed_window_start(dim_x, BorelManifoldModel(G.order, stage, c, G)) > lo:
            stage += 1
    models = [BorelManifoldModel(G.order, n, c, G) for n in (stage, stage + 1)]
    start = guaranteed_window_start(dim_x, models[0])
    if lo < start:
        raise ValueError(f"window exceeds model acyclicity range (stage {stage} covers degrees >= {start})")
    theory = "equivariant" if pair.is_compact else "equivariant-bm"
    reference = _equivariant_report(pair, a, c, window, resolution, STABILIZATION_CAP, theory)
    rep = TheoryReport("borel-compare", theory, c, reference.groups)
    rep.meta["show_zero"] = True
    rep.meta["group"] = G.name
    rep.meta["note"] = reference.meta["note"]
    shifted = []
    for model in models:
        tot = tensor_over_group_ring(model.resolution, ec.gcomplex)
        d = model.dimension
        pres = tot.homology_all((lo + d, hi + d)).shifted(-d)
        shifted.append(pres)
        space = "RP" if G.order == 2 else "L"
        rep.tables[f"stage {model.stage}: H_(i+{d})(X x_G S^{d}), quotient {space}^{d}"] = (theory, pres)
    degrees = range(lo, hi + 1)
    for model, pres in zip(models, shifted):
        for k in degrees:
            rep.add(f"stage {model.stage} vs resolution", pres[k] == reference.groups[k], k,
                    model=pres[k].describe(c), resolution=reference.groups[k].describe(c))
    rep.add("stages agree", shifted[0].agrees_with(shifted[1], degrees), None,
            stages=[m.stage for m in models])
    rep.meta["result"] = "match" if rep.passed else "mismatch"
    return rep
