"""Command-line interface: ``stackhom compute|verify|equivariant|list-builtins``.

Exit codes: 0 success, 2 unreadable input, 3 incompatible input,
4 a verification failed, 5 the stabilization cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .builtins import DESCRIPTIONS, builtin_names
from .equivariant import (
    StabilizationError,
    borel_comparison,
    equivariant_bm_homology,
    equivariant_homology,
    homotopy_orbit_chains,
)
from .groups import FiniteGroup, GroupAction
from .linalg import Coefficients
from .spacefile import Space, SpaceFileError, load_space
from .theories import (
    THEORY_ALIASES,
    cap_product_check,
    compute,
    forget_supports_check,
    gysin_trivial_bundle,
    graded_commutativity_check,
    homotopy_invariance_check,
    localization_check,
    poincare_duality_check,
    proper_descent_check,
)

EXIT_OK, EXIT_PARSE, EXIT_INCOMPATIBLE, EXIT_FAIL, EXIT_CAP = 0, 2, 3, 4, 5

CHECKS = ("localization", "homotopy", "poincare", "descent", "forget-supports", "cup", "cap", "gysin")
VARIANTS = ("homology", "bm", "stack-chains", "borel-compare")


class InputError(Exception):
    """Input that parses but does not fit the requested computation (exit 3)."""


def _window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like a..b, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return a, b


def _coeff(text: str) -> Coefficients:
    try:
        return Coefficients.parse(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackhom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("space", help="space file path or builtin:<name>")
        p.add_argument("--coeff", type=_coeff, default=Coefficients.integers(),
                       help="z, q or f<p> (default z)")
        p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("compute", help="homology groups of one theory")
    common(p)
    p.add_argument("--theory", choices=sorted(THEORY_ALIASES), default="chains")
    p.add_argument("--window", type=_window)

    p = sub.add_parser("verify", help="check a structural identity")
    common(p)
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--closed", help="vertex:<id>, vertices:<a,b,..> or faces:<a-b,c-d,..>")
    p.add_argument("--cover", help="split:<k> or arcs:<k>")
    p.add_argument("--shift", type=int, default=1, help="bundle rank for homotopy/gysin")

    p = sub.add_parser("equivariant", help="homology of the quotient stack")
    common(p)
    p.add_argument("--group", help="cyclic:<m> or symmetric:<n>, acting trivially")
    p.add_argument("--variant", choices=VARIANTS, default="homology")
    p.add_argument("--window", type=_window)
    p.add_argument("--stage", type=int)
    p.add_argument("--truncation", type=int, default=6)
    p.add_argument("--resolution", choices=("auto", "bar", "periodic", "reduced"), default="auto")

    sub.add_parser("list-builtins", help="list the built-in spaces")
    return parser


def _normalize_argv(argv: list[str]) -> list[str]:
    """Glue ``--window -4..0`` so the negative value is not read as an option."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--window" and i + 1 < len(argv):
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def _closed_subcomplex(space: Space, text: str | None):
    if not text:
        raise InputError("localization needs --closed")
    kind, _, rest = text.partition(":")
    x = space.complex
    ids = [v for v in rest.split(",") if v]
    missing = [v for face in ids for v in face.split("-") if v not in x.index]
    if not ids or missing:
        raise InputError(f"bad --closed {text!r}")
    if kind == "vertex" and len(ids) == 1:
        return x.subcomplex([ids])
    if kind == "vertices":
        return x.full_subcomplex(ids)
    if kind == "faces":
        return x.subcomplex([f.split("-") for f in ids])
    raise InputError(f"bad --closed {text!r}")


def _cover(space: Space, text: str | None):
    if not text:
        raise InputError("descent needs --cover")
    kind, _, rest = text.partition(":")
    try:
        k = int(rest)
    except ValueError:
        raise InputError(f"bad --cover {text!r}") from None
    facets = space.complex.facet_labels()
    if kind not in ("split", "arcs") or not 1 <= k <= len(facets):
        raise InputError(f"bad --cover {text!r}")
    size, extra = divmod(len(facets), k)
    pieces, start = [], 0
    for i in range(k):
        end = start + size + (1 if i < extra else 0)
        pieces.append(space.complex.subcomplex(facets[start:end]))
        start = end
    return pieces


def _group(text: str) -> FiniteGroup:
    kind, _, rest = text.partition(":")
    try:
        n = int(rest)
    except ValueError:
        raise InputError(f"bad --group {text!r}") from None
    if kind == "cyclic" and n >= 1:
        return FiniteGroup.cyclic(n)
    if kind == "symmetric" and n >= 1:
        return FiniteGroup.symmetric(n)
    raise InputError(f"bad --group {text!r}")


def run_compute(args, space: Space):
    return compute(space.pair, args.theory, args.coeff, args.window)


def run_verify(args, space: Space):
    c = args.coeff
    check = args.check
    if check == "localization":
        if not space.pair.is_compact:
            raise InputError("localization needs a compact space")
        return localization_check(space.complex, _closed_subcomplex(space, args.closed), c)
    if check == "homotopy":
        return homotopy_invariance_check(space.pair, args.shift, c)
    if check == "gysin":
        return gysin_trivial_bundle(space.pair, args.shift, c)
    if check == "forget-supports":
        return forget_supports_check(space.pair, c)
    if not space.pair.is_compact:
        raise InputError(f"{check} needs a compact space")
    if check == "poincare":
        return poincare_duality_check(space.complex, space.orientation, c)
    if check == "descent":
        return proper_descent_check(space.complex, _cover(space, args.cover), c)
    if check == "cup":
        return graded_commutativity_check(space.complex, c)
    return cap_product_check(space.complex, c)


def run_equivariant(args, space: Space):
    c = args.coeff
    action = space.action
    if args.group:
        if action is not None:
            raise InputError("space file already declares a group")
        action = GroupAction.trivial(_group(args.group), space.complex)
    if action is None:
        raise InputError("equivariant computations need a group (GROUP section or --group)")
    if args.variant == "stack-chains":
        return homotopy_orbit_chains(space.pair, action, c, args.truncation, args.resolution)
    if args.window is None:
        raise InputError("--window a..b is required")
    if args.variant == "homology":
        return equivariant_homology(space.pair, action, c, args.window, args.resolution)
    if args.variant == "bm":
        return equivariant_bm_homology(space.pair, action, c, args.window, args.resolution)
    return borel_comparison(space.pair, action, c, args.stage, args.window, args.resolution)


def _emit(report, args, command: str, out) -> None:
    if args.format == "records":
        out.write(json.dumps({"record": "command", "argv": command}, sort_keys=True) + "\n")
        out.write(report.records_text())
    else:
        out.write(f"command: {command}\n")
        out.write("\n".join(report.text_lines()) + "\n")


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "list-builtins":
        for name in builtin_names():
            out.write(f"{name}\t{DESCRIPTIONS.get(name, '')}\n")
        return EXIT_OK
    command = "stackhom " + " ".join(argv)
    try:
        space = load_space(args.space)
    except SpaceFileError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    runners = {"compute": run_compute, "verify": run_verify, "equivariant": run_equivariant}
    try:
        report = runners[args.command](args, space)
    except StabilizationError as exc:
        partial = getattr(exc, "report", None)
        if partial is not None:
            partial.digest = space.digest
            _emit(partial, args, command, out)
        err.write(f"error: {exc}\n")
        return EXIT_CAP
    except (InputError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INCOMPATIBLE
    report.digest = space.digest
    _emit(report, args, command, out)
    if report.checks and not report.passed:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
