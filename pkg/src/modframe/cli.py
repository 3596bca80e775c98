"""``modframe`` command-line front end.

Exit codes: 0 success, 1 computational failure (or failed checks), 2 usage
error (bad flags, bad config, unsupported exponent, unreadable input).
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .config import DEFAULTS, ConfigError, parse_config
from .errors import InvalidArgument, ResourceLimit, UnsupportedExponent
from .gabor import GaborLattice, analyze, gram, wilson_system
from .hilbert import BiSequence, discrete_hilbert, hilbert_norm_estimate
from .modspace import PlaneSpec, default_window, mp_norm_box, mp_norm_stft, stft
from .probes import cosine_window
from .signal import Signal, box_window, gaussian, sine_bump
from .special import (PiecewiseConstant, exact_fourier_coeff, rademacher,
                      rademacher_coeff_closed_form, wilson_bumps)
from .translates import IntervalFamily, TranslateSet, completeness_residual, effective_density, section_spectrum
from .verify import CHECK_NAMES, run_verify


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path!r}: {e.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _signal(path: str | None, what: str) -> Signal:
    if not path:
        raise UsageError(f"{what} needs --input")
    text = _read(path)
    return Signal.from_csv(text) if text.lstrip().startswith("#") else Signal.from_json(text)


def _pick(flag, cfg, command, name):
    return cfg.option(command, name) if flag is None else flag


def _plane(cfg) -> PlaneSpec:
    d = cfg.defaults
    return PlaneSpec(d["x_step"], d["w_step"], d["w_max"])


def cmd_stft(args, cfg) -> int:
    f = _signal(_pick(args.input, cfg, "stft", "input"), "stft")
    wpath = _pick(args.window, cfg, "stft", "window")
    psi = _signal(wpath, "window") if wpath else default_window(f.grid)
    _emit(stft(f, psi, _plane(cfg)).to_csv(), args.out)
    return 0


def cmd_gabor(args, cfg) -> int:
    f = _signal(_pick(args.input, cfg, "gabor", "input"), "gabor")
    alpha = float(_pick(args.alpha, cfg, "gabor", "alpha"))
    wpath = _pick(args.window, cfg, "gabor", "window")
    w = _signal(wpath, "window") if wpath else box_window(f.grid, 0.0, alpha)
    n_cap = args.n_cap
    lat = GaborLattice.for_grid(f.grid, alpha, n_cap)
    _emit(analyze(f, w, lat).to_csv(), args.out)
    return 0


def cmd_norm(args, cfg) -> int:
    p = float(_pick(args.p, cfg, "norm", "p"))
    method = _pick(args.method, cfg, "norm", "method")
    if method == "box" and not 1 < p < math.inf:
        raise UnsupportedExponent(f"box norm is defined for 1 < p < inf, got p={p}")
    path = _pick(args.input, cfg, "norm", "input")
    if not path:
        raise UsageError("norm needs --input")
    text = _read(path)
    if '"breakpoints"' in text:
        f = PiecewiseConstant.from_json(text)
    else:
        f = Signal.from_csv(text) if text.lstrip().startswith("#") else Signal.from_json(text)
    if method == "box":
        rep = mp_norm_box(f, p, args.n_cap if args.n_cap is not None else
                          (cfg.defaults["n_cap"] if isinstance(f, PiecewiseConstant) else None))
    elif method == "stft":
        if not isinstance(f, Signal):
            raise UsageError("stft norm needs a sampled signal")
        if p < 1:
            raise UnsupportedExponent(f"need p >= 1, got p={p}")
        rep = mp_norm_stft(f, default_window(f.grid), p, _plane(cfg))
    else:
        raise UsageError(f"unknown method {method!r}")
    _emit(rep.to_json() + "\n", args.out)
    return 0


def cmd_rademacher(args, cfg) -> int:
    n = int(_pick(args.n, cfg, "rademacher", "n"))
    k_max = int(_pick(args.k_max, cfg, "rademacher", "k_max"))
    pc = rademacher(n)
    if not args.check_closed_form:
        _emit(pc.to_json() + "\n", args.out)
        return 0
    if n < 1:
        raise UsageError("--check-closed-form needs --n >= 1")
    ks = np.arange(-k_max, k_max + 1)
    ex = exact_fourier_coeff(pc, ks)
    rows = ["k,exact_re,exact_im,closed_re,closed_im,abs_diff"]
    worst = 0.0
    for k, e in zip(ks.tolist(), ex.tolist()):
        c = rademacher_coeff_closed_form(n, k)
        d = abs(e - c)
        worst = max(worst, d)
        rows.append(f"{k},{e.real!r},{e.imag!r},{c.real!r},{c.imag!r},{d!r}")
    _emit("\n".join(rows) + "\n", args.out)
    print(f"max |exact - closed form| = {worst:.3e}", file=sys.stderr)
    return 0 if worst <= 1e-12 else 1


def cmd_hilbert(args, cfg) -> int:
    path = _pick(args.input, cfg, "hilbert", "input")
    if path:
        c = BiSequence.from_csv(_read(path))
        _emit(discrete_hilbert(c).to_csv(), args.out)
        return 0
    p = float(_pick(args.p, cfg, "hilbert", "p"))
    length = int(_pick(args.length, cfg, "hilbert", "length"))
    trials = int(cfg.defaults["trials"])
    est = hilbert_norm_estimate(p, length, trials, cfg.seed)
    rep = {"p": p, "length": length, "trials": trials, "seed": cfg.seed, "estimate": est}
    _emit(json.dumps(rep) + "\n", args.out)
    return 0


def cmd_wilson(args, cfg) -> int:
    n_max = int(_pick(args.n_max, cfg, "wilson", "n_max"))
    k_max = int(_pick(args.k_max, cfg, "wilson", "k_max"))
    grid = cfg.grid
    phi = _signal(args.input, "wilson") if args.input else sine_bump(grid, 0.0) * math.sqrt(2)
    _, rep = wilson_bumps(phi, n_max)
    atoms = wilson_system(cosine_window(phi.grid), range(-k_max, k_max + 1), range(0, n_max + 1))
    dev = float(np.max(np.abs(gram(atoms) - np.eye(len(atoms)))))
    out = {"bumps": rep.to_dict(),
           "system": {"atoms": len(atoms), "gram_deviation": dev, "k_max": k_max, "n_max": n_max}}
    _emit(json.dumps(out) + "\n", args.out)
    return 0


def _shifts(args, cfg, command) -> TranslateSet:
    path = _pick(args.input, cfg, command, "input")
    if not path:
        raise UsageError(f"{command} needs --input with one shift per line")
    return TranslateSet.from_text(_read(path))


def cmd_translates(args, cfg) -> int:
    lam = _shifts(args, cfg, "translates")
    wpath = _pick(args.window, cfg, "translates", "window")
    g = _signal(wpath, "window") if wpath else gaussian(cfg.grid)
    N = int(_pick(args.N, cfg, "translates", "N"))
    N = min(N, len(lam))
    rep = section_spectrum(g, lam, N, args.n_cap)
    if args.probe:
        rep.residuals["probe"] = completeness_residual(g, lam, N, _signal(args.probe, "probe"), args.n_cap)
    _emit(rep.to_json() + "\n", args.out)
    return 0


def cmd_density(args, cfg) -> int:
    lam = _shifts(args, cfg, "density")
    if args.side == "negative":
        lam = lam.negative_side()
    fam = IntervalFamily.parse(_pick(args.family, cfg, "density", "family"))
    _emit(effective_density(lam, fam).to_json() + "\n", args.out)
    return 0


def cmd_verify(args, cfg) -> int:
    only = None
    if args.only:
        only = [n for item in args.only for n in item.split(",") if n]
        bad = [n for n in only if n not in CHECK_NAMES]
        if bad:
            raise UsageError(f"unknown check {bad[0]!r}; choose from {', '.join(CHECK_NAMES)}")
    rep = run_verify(cfg, only)
    text = rep.to_json(timings=args.timings)
    if args.out:
        _emit(text, args.out)
    print(rep.table())
    return 0 if rep.passed else 1


COMMANDS = {
    "stft": cmd_stft, "gabor": cmd_gabor, "norm": cmd_norm, "rademacher": cmd_rademacher,
    "hilbert": cmd_hilbert, "wilson": cmd_wilson, "translates": cmd_translates,
    "density": cmd_density, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags win over it)")
    common.add_argument("--out", help="output file; stdout if omitted")
    common.add_argument("--seed", type=int, help=f"master seed (default {DEFAULTS['seed']:#x})")
    common.add_argument("--p", type=float, help="exponent")
    common.add_argument("--n-cap", type=int, dest="n_cap", help="modulation cut |n| < n_cap")
    common.add_argument("--grid-l", type=int, dest="grid_l", help="grid length L (default 65536)")
    common.add_argument("--grid-dx", type=float, dest="grid_dx", help="grid spacing (default 1/1024)")

    ap = argparse.ArgumentParser(
        prog="modframe",
        description="Time-frequency analysis toolkit and verification suite.",
        epilog="An empty or missing config gives the defaults: grid L=65536, dx=1/1024, "
               "t0=-32; n_cap=512, j_cap=4096, plane steps 1/8 with W=1/(4 dx), "
               "seed 0xC0FFEE, 1000 Hilbert trials.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stft", parents=[common], help="STFT plane as CSV")
    s.add_argument("--input")
    s.add_argument("--window")

    s = sub.add_parser("gabor", parents=[common], help="Gabor coefficients as CSV")
    s.add_argument("--input")
    s.add_argument("--window")
    s.add_argument("--alpha", type=float)

    s = sub.add_parser("norm", parents=[common], help="modulation-space norm report")
    s.add_argument("--input")
    s.add_argument("--method", choices=("box", "stft"))

    s = sub.add_parser("rademacher", parents=[common], help="Rademacher function or coefficient table")
    s.add_argument("--n", type=int)
    s.add_argument("--k-max", type=int, dest="k_max")
    s.add_argument("--check-closed-form", action="store_true")

    s = sub.add_parser("hilbert", parents=[common], help="discrete Hilbert transform or norm estimate")
    s.add_argument("--input", help="BiSequence CSV; omit to estimate the operator norm")
    s.add_argument("--length", type=int)

    s = sub.add_parser("wilson", parents=[common], help="Wilson system and bump sequence report")
    s.add_argument("--input", help="bump phi as signal JSON (default sqrt(2) sin(pi x) on [0,1))")
    s.add_argument("--n-max", type=int, dest="n_max")
    s.add_argument("--k-max", type=int, dest="k_max")

    s = sub.add_parser("translates", parents=[common], help="finite-section spectrum of translates")
    s.add_argument("--input", help="text file, one shift per line")
    s.add_argument("--window")
    s.add_argument("--probe")
    s.add_argument("--N", type=int)

    s = sub.add_parser("density", parents=[common], help="effective density witnesses")
    s.add_argument("--input", help="text file, one shift per line")
    s.add_argument("--family", help='"dyadic:N0:N1" or "a1,b1;a2,b2;..."')
    s.add_argument("--side", choices=("positive", "negative"), default="positive")

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", action="append", help=f"check name(s): {', '.join(CHECK_NAMES)}")
    s.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-determinism)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    overrides = {"grid_l": args.grid_l, "grid_dx": args.grid_dx, "seed": args.seed,
                 "n_cap": args.n_cap, "p": args.p}
    try:
        cfg = parse_config(args.config, overrides)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ConfigError, UnsupportedExponent) as e:
        print(f"modframe {args.command}: {e}", file=sys.stderr)
        return 2
    except (InvalidArgument, ResourceLimit, ValueError, KeyError) as e:
        print(f"modframe {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
