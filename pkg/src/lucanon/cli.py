"""Command-line interface: ``lucanon {canon,spectra,compare,random,perturb,verify-witness}``.

Results go to stdout, diagnostics to stderr. Exit codes for ``compare``: 0
equivalent, 1 inequivalent (either certified kind), 2 undecided.
``verify-witness``: 0 pass, 1 fail. Usage errors exit 64; malformed input
files 65; missing input files 66; internal numerical failures 70; failed
writes 74.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .equivalence import DecideOptions, Tag, decide_lu, verify_witness
from .errors import DimensionMismatch, LUError, NumericalFailure, ParseError
from .files import (
    WitnessFile,
    dump_state,
    load_state,
    load_witness,
    read_state_file,
    save_factors,
    save_state,
    save_witness,
)
from .hosvd import hosvd
from .rng import random_local_unitaries, random_state
from .symmetry import TOL_DEGEN, TOL_ZERO, symmetry_structure
from .tensor import multi_apply

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70
EX_IOERR = 74


class _MissingInput(Exception):
    pass


def _read(loader, path):
    # only a missing input maps to EX_NOINPUT; write failures fall through to EX_IOERR
    try:
        return loader(path)
    except FileNotFoundError as exc:
        raise _MissingInput(exc.filename or path) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.12f}"


def _spectra_lines(state, tol_degen: float, tol_zero: float) -> tuple[list[str], object]:
    res = hosvd(state)
    struct = symmetry_structure(res, tol_degen, tol_zero)
    lines = []
    for n, spec in enumerate(res.spectra):
        values = " ".join(_fmt(s) for s in spec)
        lines.append(f"mode {n + 1}: {values}  blocks {struct.describe(n)}")
    for near in struct.near_degenerate:
        lines.append(
            f"note: mode {near.mode + 1} boundary before index {near.index + 1} is near-degenerate "
            f"(gap {near.gap:.3e})"
        )
    return lines, res


def _dims_arg(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}")
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("dims must be positive")
    return dims


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def cmd_spectra(args) -> int:
    state = _read(load_state, args.state)
    lines, _ = _spectra_lines(state, args.tol_degen, args.tol_zero)
    print("\n".join(lines))
    return 0


def cmd_canon(args) -> int:
    src = _read(read_state_file, args.state)
    lines, res = _spectra_lines(src.state, args.tol_degen, args.tol_zero)
    out = Path(args.output) if args.output else Path(args.state).with_suffix(".core.json")
    label = f"core of {src.label}" if src.label else "core"
    save_state(res.core, out, label=label)
    print("\n".join(lines))
    print(f"core: {out}")
    if args.factors:
        save_factors(res.factors, res.spectra, args.factors)
        print(f"factors: {args.factors}")
    return 0


def cmd_compare(args) -> int:
    a = _read(load_state, args.a)
    b = _read(load_state, args.b)
    if a.dims != b.dims:
        raise DimensionMismatch(f"dims differ: {list(a.dims)} vs {list(b.dims)}")
    opts = DecideOptions(
        tol_equiv=args.tol_equiv,
        tol_spec=args.tol_spec,
        tol_degen=args.tol_degen,
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
    )
    verdict = decide_lu(a, b, opts)
    diag = verdict.diagnostics
    print(f"verdict: {verdict.tag.value}")
    print(f"route: {diag.get('route', 'spectra')}")
    for n, part in enumerate(diag["partition"]):
        print(f"mode {n + 1} blocks: {part}")
    if verdict.tag is Tag.INEQUIVALENT_SPECTRA:
        mm = diag["mismatch"]
        print(f"reason: spectra differ ({mm['kind']}) at mode {mm['mode'] + 1} index {mm['index'] + 1}, "
              f"|delta| = {mm['delta']:.6e} > tol_spec {opts.tol_spec:.1e}")
    elif verdict.tag is Tag.INEQUIVALENT_PHASE:
        phase = diag["phase"]
        if phase["reason"] == "modulus":
            idx, gap, _ = phase["violation"]
            print(f"reason: core moduli differ at {[i + 1 for i in idx]} by {gap:.6e}")
        else:
            entries, value, allowance = phase["violation"]
            print(f"reason: phase system inconsistent; cycle over {len(entries)} core entries "
                  f"closes at {value:.6e} rad (allowance {allowance:.3e})")
    elif verdict.tag is Tag.UNDECIDED:
        s = diag["search"]
        print(f"reason: block search failed after {s['restarts']} restarts; best residual {s['best_residual']:.6e}")
    for note in diag["notes"]:
        print(f"note: {note}", file=sys.stderr)
    if verdict.witness is not None:
        wf = WitnessFile(
            unitaries=list(verdict.witness.unitaries),
            residual=verdict.witness.residual,
            tolerances={
                "tol_equiv": opts.tol_equiv, "tol_spec": opts.tol_spec, "tol_degen": opts.tol_degen,
                "restarts": opts.restarts, "max_iters": opts.max_iters, "seed": opts.seed,
            },
            dims=a.dims,
        )
        save_witness(wf, args.witness)
        print(f"witness_residual: {verdict.witness.residual:.6e}")
        print(f"witness: {args.witness}")
    return verdict.exit_code


def cmd_random(args) -> int:
    state = random_state(args.dims, args.seed)
    label = f"random dims={','.join(map(str, args.dims))} seed={args.seed}"
    if args.output:
        save_state(state, args.output, label=label)
    else:
        sys.stdout.write(dump_state(state, label))
    return 0


def cmd_perturb(args) -> int:
    src = _read(read_state_file, args.state)
    us = random_local_unitaries(src.state.dims, args.seed)
    out = multi_apply(src.state, us)
    path = Path(args.output) if args.output else Path(args.state).with_name(
        f"{Path(args.state).stem}{args.seed}.json"
    )
    base = src.label or Path(args.state).stem
    save_state(out, path, label=f"{base} under local unitaries seed={args.seed}")
    print(f"wrote: {path}")
    return 0


def cmd_verify_witness(args) -> int:
    a = _read(load_state, args.a)
    b = _read(load_state, args.b)
    w = _read(load_witness, args.witness)
    if tuple(u.shape[0] for u in w.unitaries) != a.dims or a.dims != b.dims:
        print("fail: witness and state dimensions disagree", file=sys.stdout)
        return 1
    report = verify_witness(a, b, w.unitaries, args.tol)
    print(f"residual: {report.residual:.6e}")
    print(f"unitarity: {max(report.unitarity):.6e}")
    print("pass" if report.passed else "fail")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lucanon", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"lucanon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def degen_flags(sp):
        sp.add_argument("--tol-degen", type=float, default=TOL_DEGEN)
        sp.add_argument("--tol-zero", type=float, default=TOL_ZERO)

    sp = sub.add_parser("spectra", help="print per-mode HOSVD spectra and degeneracy blocks")
    sp.add_argument("state")
    degen_flags(sp)
    sp.set_defaults(func=cmd_spectra)

    sp = sub.add_parser("canon", help="write the HOSVD core (and optionally the factors)")
    sp.add_argument("state")
    sp.add_argument("-o", "--output", help="core file (default: <state>.core.json)")
    sp.add_argument("--factors", help="also write the factor unitaries here")
    degen_flags(sp)
    sp.set_defaults(func=cmd_canon)

    defaults = DecideOptions()
    sp = sub.add_parser("compare", help="decide local-unitary equivalence of two states")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--tol-equiv", type=float, default=defaults.tol_equiv)
    sp.add_argument("--tol-spec", type=float, default=defaults.tol_spec)
    sp.add_argument("--tol-degen", type=float, default=defaults.tol_degen)
    sp.add_argument("--restarts", type=_positive_int, default=defaults.restarts)
    sp.add_argument("--max-iters", type=_positive_int, default=defaults.max_iters)
    sp.add_argument("--seed", type=int, default=defaults.seed)
    sp.add_argument("-w", "--witness", default="witness.json", help="witness output on Equivalent")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("random", help="write a seeded random normalized state")
    sp.add_argument("--dims", type=_dims_arg, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("perturb", help="apply seeded Haar-random local unitaries")
    sp.add_argument("state")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("-o", "--output", help="default: <stem><seed>.json next to the input")
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("verify-witness", help="check a witness file against two states")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("witness")
    sp.add_argument("--tol", type=float, default=defaults.tol_equiv)
    sp.set_defaults(func=cmd_verify_witness)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _MissingInput as exc:
        print(f"lucanon: no such file: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (ParseError, DimensionMismatch) as exc:
        print(f"lucanon: {exc}", file=sys.stderr)
        return EX_DATAERR
    except NumericalFailure as exc:
        print(f"lucanon: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except LUError as exc:
        print(f"lucanon: {exc}", file=sys.stderr)
        return EX_DATAERR
    except OSError as exc:
        print(f"lucanon: {exc}", file=sys.stderr)
        return EX_IOERR
