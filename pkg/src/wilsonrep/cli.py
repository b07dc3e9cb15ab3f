"""Command line front end.

Exit codes: 0 success, 2 validation failure, 3 I/O error, 4 bad arguments.
Errors are reported on stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .corpus import CORPUS_NAMES, corpus_listing, make_entry
from .seqspace import Thresholds, classify
from .timefreq import GaborCoeffs, SampledFunction, gabor_analysis, gabor_synthesis
from .window import (
    DEFAULT_GRID_STEP,
    VERIFY_STEP,
    WINDOW_TOLERANCE,
    build_wilson_window,
    check_symmetry,
    period_grid,
    wilson_condition_residual,
)
from .wilson import (
    WilsonCoeffs,
    distribution_coefficients,
    gram_matrix,
    index_pairs,
    wilson_analysis,
    wilson_synthesis,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_ARGS = 0, 2, 3, 4
SYMMETRY_TOLERANCE = 1e-12
GRAM_TOLERANCE = 1e-8


class CLIError(Exception):
    def __init__(self, message, code=EXIT_ARGS):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message, EXIT_ARGS)


@dataclass
class RunConfig:
    grid_step: float = DEFAULT_GRID_STEP
    K: int = 3
    N: int = 64
    a: float = 0.5
    b: float = 1.0
    input: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        if not self.grid_step > 0:
            raise CLIError("grid_step must be positive")
        if self.K < 0 or self.N < 0:
            raise CLIError("K and N must be non-negative")
        if not (self.a > 0 and self.b > 0):
            raise CLIError("lattice parameters must be positive")


def _config(args) -> RunConfig:
    return RunConfig(
        grid_step=getattr(args, "grid_step", DEFAULT_GRID_STEP),
        K=getattr(args, "K", 3),
        N=getattr(args, "N", 64),
        a=getattr(args, "a", 0.5),
        b=getattr(args, "b", 1.0),
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
    )


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}", EXIT_IO) from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path} is not valid JSON: {exc}", EXIT_IO) from None


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text + "\n")
        return
    try:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _load_signal(args, step):
    if getattr(args, "corpus", None):
        try:
            entry = make_entry(args.corpus, step=step)
        except KeyError as exc:
            raise CLIError(str(exc.args[0])) from None
        return entry.input
    if getattr(args, "input", None):
        try:
            return SampledFunction.from_dict(_read_json(args.input))
        except (KeyError, TypeError, ValueError) as exc:
            raise CLIError(f"bad sampled function in {args.input}: {exc}", EXIT_IO) from None
    raise CLIError("need --input or --corpus")


def _wilson_coeffs(signal, psi, cfg):
    if isinstance(signal, SampledFunction):
        return wilson_analysis(signal, psi, cfg.K, cfg.N)
    return distribution_coefficients(signal, psi, cfg.K, cfg.N)


def cmd_make_window(args):
    cfg = _config(args)
    _emit(build_wilson_window(cfg.grid_step).to_json(), cfg.output)
    return EXIT_OK


def cmd_check_window(args):
    psi = build_wilson_window()
    if args.scale != 1.0:
        psi = psi.scaled(args.scale)
    res = wilson_condition_residual(psi, args.n_max, period_grid(args.step))
    sym = check_symmetry(psi, np.linspace(-psi.support_radius, psi.support_radius, 2001))
    ok = bool(res.max() <= WINDOW_TOLERANCE and sym <= SYMMETRY_TOLERANCE)
    report = {
        "residual": res.tolist(),
        "max_residual": float(res.max()),
        "symmetry": sym,
        "tolerance": WINDOW_TOLERANCE,
        "ok": ok,
    }
    _emit(_dump(report), None)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_analyze(args):
    cfg = _config(args)
    psi = build_wilson_window(cfg.grid_step)
    signal = _load_signal(args, cfg.grid_step)
    if args.gabor:
        if not isinstance(signal, SampledFunction):
            raise CLIError("--gabor needs a sampled function input")
        c = gabor_analysis(signal, psi, cfg.a, cfg.b, cfg.K, cfg.N)
    else:
        c = _wilson_coeffs(signal, psi, cfg)
    _emit(_dump(c.to_dict()), cfg.output)
    return EXIT_OK


def _load_coeffs(path):
    d = _read_json(path)
    try:
        if "a" in d:
            return GaborCoeffs.from_dict(d)
        return WilsonCoeffs.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise CLIError(f"bad coefficient file {path}: {exc}", EXIT_IO) from None


def cmd_synthesize(args):
    cfg = _config(args)
    psi = build_wilson_window(cfg.grid_step)
    c = _load_coeffs(args.coeffs)
    if isinstance(c, GaborCoeffs):
        f = gabor_synthesis(c, psi)
    else:
        f = wilson_synthesis(c, psi)
    _emit(_dump(f.to_dict()), cfg.output)
    return EXIT_OK


def cmd_roundtrip(args):
    cfg = _config(args)
    psi = build_wilson_window(cfg.grid_step)
    f = _load_signal(args, cfg.grid_step)
    if not isinstance(f, SampledFunction):
        raise CLIError("roundtrip needs a sampled function (bump, gaussian or --input)")
    c = wilson_analysis(f, psi, cfg.K, cfg.N)
    g = wilson_synthesis(c, psi)
    err = (g - f).l2_norm() / f.l2_norm()
    ok = args.tol is None or err <= args.tol
    _emit(_dump({"relative_l2_error": err, "K": cfg.K, "N": cfg.N, "ok": ok}), None)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_gram(args):
    cfg = _config(args)
    psi = build_wilson_window(cfg.grid_step)
    G = gram_matrix(psi, cfg.K, cfg.N)
    dev = float(np.max(np.abs(G - np.eye(len(G)))))
    pairs = index_pairs(cfg.K, cfg.N)
    lines = [
        "# |<psi_{k,n}, conj psi_{k',n'}>|; order: diagonals |k|+n ascending, k>=0 first, "
        "then n ascending: " + " ".join(f"({k},{n})" for k, n in pairs)
    ]
    lines += [",".join(repr(float(x)) for x in row) for row in np.abs(G)]
    if cfg.output is None:
        raise CLIError("gram needs --output for the CSV")
    _emit("\n".join(lines), cfg.output)
    ok = dev <= GRAM_TOLERANCE
    _emit(_dump({"atoms": len(G), "max_deviation": dev, "ok": ok}), None)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_classify(args):
    cfg = _config(args)
    psi = build_wilson_window(cfg.grid_step)
    if args.coeffs:
        c = _load_coeffs(args.coeffs)
        if not isinstance(c, WilsonCoeffs):
            raise CLIError("classify needs Wilson coefficients")
    else:
        c = _wilson_coeffs(_load_signal(args, cfg.grid_step), psi, cfg)
    report = classify(c, Thresholds(p=args.p))
    _emit(_dump(report.to_dict()), cfg.output)
    return EXIT_OK


def cmd_corpus(args):
    _emit(_dump(corpus_listing()), getattr(args, "output", None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wilsonrep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, lattice=False):
        p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
        p.add_argument("--K", type=int, default=3)
        p.add_argument("--N", type=int, default=64)
        p.add_argument("-o", "--output")
        if lattice:
            p.add_argument("--a", type=float, default=0.5)
            p.add_argument("--b", type=float, default=1.0)

    def source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--input", help="SampledFunction JSON")
        g.add_argument("--corpus", help=f"one of {', '.join(CORPUS_NAMES)}")

    p = sub.add_parser("make-window")
    p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_make_window)

    p = sub.add_parser("check-window")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--step", type=float, default=VERIFY_STEP)
    p.add_argument("--scale", type=float, default=1.0, help="scale the canonical window")
    p.set_defaults(func=cmd_check_window)

    p = sub.add_parser("analyze")
    common(p, lattice=True)
    source(p)
    p.add_argument("--gabor", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize")
    common(p)
    p.add_argument("--coeffs", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("roundtrip")
    common(p)
    source(p)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("gram")
    common(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("classify")
    common(p)
    source(p)
    p.add_argument("--coeffs")
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("corpus")
    p.add_argument("action", choices=["list"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise CLIError("missing subcommand")
        return args.func(args)
    except CLIError as exc:
        code = exc.code
        message = str(exc)
    except (ValueError, TypeError, KeyError) as exc:
        code, message = EXIT_ARGS, str(exc)
    sys.stderr.write(json.dumps({"error": message, "exit_code": code}) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
