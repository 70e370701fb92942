"""Command-line front end.

Distribution specs use a small ``kind:params`` syntax:

  bernoulli:P                      two-point {0,1}
  uniform:A,B                      Uniform(A, B)
  salt-pepper:X,RHO,RHO1           clean value X hit by impulse noise
  cauchy:X0,GAMMA                  Cauchy location/scale
  mixture:M1,M2;V1,V2;W1,W2        Gaussian mixture (means; variances; weights)
  discrete:V1,V2,...;P1,P2,...     arbitrary finite pmf

Numbers are printed with 9 significant digits; non-finite values as ``inf``.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from . import lestimator as lest
from .distributions import (
    Cauchy,
    ContinuousDist,
    DiscreteDist,
    GaussianMixture,
    Uniform,
    bernoulli,
    salt_pepper_dist,
)
from .imaging import (
    AdditiveNoise,
    SaltPepperNoise,
    add_noise,
    denoise,
    estimate_sp_params,
    salt_pepper_filter,
    synthetic_image,
)
from .measures import profile
from .metrics import report
from .order_stats import SampleModel
from .pgm import read_pgm, write_pgm
from .selection import joint_select, marginal_select, sequential_select

__all__ = ["main", "parse_dist", "build_parser", "RunConfig"]


def _floats(text: str, count: int | None = None) -> list[float]:
    vals = [float(t) for t in text.split(",") if t.strip()]
    if count is not None and len(vals) != count:
        raise ValueError(f"expected {count} numbers, got {len(vals)}")
    return vals


def parse_dist(spec: str):
    """Turn a ``kind:params`` string into a distribution object."""
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "bernoulli":
        (p,) = _floats(body, 1)
        return bernoulli(p)
    if kind == "uniform":
        a, b = _floats(body, 2)
        return Uniform(a, b)
    if kind in ("salt-pepper", "saltpepper", "sp"):
        x, rho, rho1 = _floats(body, 3)
        return salt_pepper_dist(x, rho, rho1)
    if kind == "cauchy":
        x0, gamma = _floats(body, 2)
        return Cauchy(x0, gamma)
    if kind == "mixture":
        parts = body.split(";")
        if len(parts) != 3:
            raise ValueError("mixture needs means;variances;weights")
        return GaussianMixture(*(tuple(_floats(p)) for p in parts))
    if kind == "discrete":
        parts = body.split(";")
        if len(parts) != 2:
            raise ValueError("discrete needs values;probabilities")
        return DiscreteDist(tuple(_floats(parts[0])), tuple(_floats(parts[1])))
    raise ValueError(f"unknown distribution kind {kind!r}")


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


@dataclass
class RunConfig:
    """Fully resolved settings of one invocation, echoed to stderr."""

    command: str
    options: dict = field(default_factory=dict)

    def echo(self, stream) -> None:
        print(json.dumps(asdict(self), sort_keys=True, default=str), file=stream)


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def row(self, *cells) -> None:
        self.lines.append(",".join(str(c) for c in cells))

    def flush(self, stdout) -> None:
        text = "".join(line + "\n" for line in self.lines)
        if self.path:
            with open(self.path, "w", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)


def _base(text: str) -> float:
    if text in ("e", "nats"):
        return math.e
    if text in ("2", "bits"):
        return 2.0
    raise argparse.ArgumentTypeError("base must be 'e' or '2'")


def _dist_arg(text: str):
    try:
        return parse_dist(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad distribution spec {text!r}: {exc}") from exc


def _noise_arg(text: str):
    kind, _, body = text.partition(":")
    try:
        if kind in ("salt-pepper", "sp"):
            rho, rho1 = _floats(body, 2)
            return ("salt-pepper", rho, rho1)
        if kind == "additive":
            dist = parse_dist(body)
            if not isinstance(dist, ContinuousDist):
                raise ValueError("additive noise needs a continuous distribution")
            return ("additive", dist)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad noise spec {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError("noise must be salt-pepper:RHO,RHO1 or additive:<dist>")


RULES = ("entropy", "variance", "sequential")
# older numeric rule tokens, still accepted on the command line
_RULE_ALIASES = {"eq26": "entropy", "eq27": "variance", "eq28": "sequential"}


def _rule(text: str) -> str:
    return _RULE_ALIASES.get(text, text)


def _mc_opts(args) -> dict:
    return {"trials": args.trials, "seed": args.seed}


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_measures(args, out: _Output) -> None:
    model = SampleModel(args.n, args.dist)
    for i, v in enumerate(profile(model, args.m, args.base, **_mc_opts(args)), start=1):
        out.row(i, fmt(v.value))


def cmd_select(args, out: _Output) -> None:
    model = SampleModel(args.n, args.dist)
    procs = {"marginal": marginal_select, "joint": joint_select, "sequential": sequential_select}
    chosen = list(procs) if args.approach == "all" else [args.approach]
    out.row("approach", "k", "indices")
    for name in chosen:
        for k in range(1, args.k + 1):
            res = procs[name](model, args.m, k, args.base, **_mc_opts(args))
            shown = sorted(res.indices) if name == "joint" else res.indices
            out.row(name, k, " ".join(str(i) for i in shown))


def cmd_coeffs(args, out: _Output) -> None:
    if args.rule == "named":
        filt = lest.named(args.filter, args.n, args.r)
    else:
        if args.dist is None:
            raise ValueError(f"rule {args.rule} needs --dist")
        model = SampleModel(args.n, args.dist)
        if args.rule == "entropy":
            rho = args.rho if args.rho is not None else _impulse_rate(args.dist)
            filt = lest.coeffs_salt_pepper(profile(model, 1, args.base), rho)
        elif args.rule == "variance":
            filt = lest.coeffs_continuous(profile(model, 3, **_mc_opts(args)))
        else:
            filt = lest.coeffs_sequential(model, args.d, args.base)
    out.row("k", "alpha")
    for k, a in enumerate(filt.alpha, start=1):
        out.row(k, fmt(a))


def _impulse_rate(dist) -> float:
    """Mass on {0, 255} of a salt-pepper style parent."""
    if not isinstance(dist, DiscreteDist):
        raise ValueError("the entropy rule needs a discrete parent or an explicit --rho")
    return math.fsum(p for v, p in zip(dist.support, dist.probs) if v in (0.0, 255.0))


def cmd_addnoise(args, out: _Output) -> None:
    img = read_pgm(args.input)
    if args.noise[0] == "salt-pepper":
        spec = SaltPepperNoise(args.noise[1], args.noise[2], args.seed)
    else:
        spec = AdditiveNoise(args.noise[1], args.seed)
    write_pgm(args.output, add_noise(img, spec))


def cmd_denoise(args, out: _Output) -> None:
    if args.w % 2 == 0:
        raise ValueError(f"window side must be odd, got {args.w}")
    img = read_pgm(args.input)
    n = args.w * args.w
    if args.filter:
        filt = lest.named(args.filter, n, args.r)
    elif args.coeffs == "variance":
        if args.noise_dist is None:
            raise ValueError("the variance rule needs --noise-dist describing the additive noise")
        filt = lest.coeffs_continuous(profile(SampleModel(n, args.noise_dist), 3, **_mc_opts(args)))
    else:
        if args.rho is not None:
            rho, rho1 = args.rho, (args.rho1 if args.rho1 is not None else 0.5)
        else:
            rho, rho1 = estimate_sp_params(img)
        out.row("rho_hat", fmt(rho))
        out.row("rho1_hat", fmt(rho1))
        if rho == 0.0:
            write_pgm(args.output, img)
            return
        filt = salt_pepper_filter(rho, rho1, args.w, args.coeffs, args.d)
    write_pgm(args.output, denoise(img, filt, args.w, args.padding, args.workers))


def cmd_quality(args, out: _Output) -> None:
    ref, test = read_pgm(args.reference), read_pgm(args.test)
    for name, val in report(ref, test).items():
        out.row(name, fmt(val))


def cmd_synth(args, out: _Output) -> None:
    write_pgm(args.output, synthetic_image(args.size, args.seed))


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orderinfo",
        description="Informativeness of order statistics and L-estimator denoising.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dist_required=True):
        sp.add_argument("--dist", type=_dist_arg, required=dist_required, help="parent distribution spec")
        sp.add_argument("--n", type=_positive, required=True, help="sample size / window length")
        sp.add_argument("--base", type=_base, default=math.e, help="log base for r1: e or 2")
        sp.add_argument("--trials", type=_positive, default=200_000, help="Monte Carlo trials when needed")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write CSV here instead of stdout")

    sp = sub.add_parser("measures", help="r_m(i) for every i")
    common(sp)
    sp.add_argument("--m", type=int, choices=(1, 2, 3), required=True)
    sp.set_defaults(func=cmd_measures)

    sp = sub.add_parser("select", help="marginal / joint / sequential index sets for k = 1..K")
    common(sp)
    sp.add_argument("--m", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--k", type=_positive, required=True)
    sp.add_argument("--approach", choices=("all", "marginal", "joint", "sequential"), default="all")
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("coeffs", help="L-estimator coefficients as k,alpha")
    common(sp, dist_required=False)
    sp.add_argument("--rule", type=_rule, choices=RULES + ("named",), required=True,
                    help="entropy (impulse noise), variance (additive noise), sequential, or named")
    sp.add_argument("--rho", type=float, help="noise rate for the entropy rule (default: mass on 0/255)")
    sp.add_argument("--d", type=_positive, default=4, help="number of ranks kept by the sequential rule")
    sp.add_argument("--filter", choices=("mean", "median", "min", "max", "midpoint", "rank"), default="median")
    sp.add_argument("--r", type=int, help="rank for the rank filter")
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("addnoise", help="corrupt a PGM image")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", dest="output", required=True)
    sp.add_argument("--noise", type=_noise_arg, required=True,
                    help="salt-pepper:RHO,RHO1 or additive:<dist spec>")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_addnoise)

    sp = sub.add_parser("denoise", help="sliding-window L-estimator filtering")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", dest="output", required=True)
    sp.add_argument("--w", type=_positive, default=5, help="odd window side")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--coeffs", type=_rule, choices=RULES, default="entropy")
    grp.add_argument("--filter", choices=("mean", "median", "min", "max", "midpoint", "rank"))
    sp.add_argument("--r", type=int, help="rank for the rank filter")
    sp.add_argument("--rho", type=float, help="skip estimation and use this noise rate")
    sp.add_argument("--rho1", type=float, help="pepper share paired with --rho")
    sp.add_argument("--d", type=_positive, default=4)
    sp.add_argument("--noise-dist", type=_dist_arg, help="additive noise law for the variance rule")
    sp.add_argument("--padding", choices=("reflect", "symmetric", "edge"), default="reflect")
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--trials", type=_positive, default=200_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report", help="CSV file for estimated noise parameters")
    sp.set_defaults(func=cmd_denoise)

    sp = sub.add_parser("quality", help="mse, psnr, ssim and iqi of a test image")
    sp.add_argument("reference")
    sp.add_argument("test")
    sp.add_argument("--out", help="write CSV here instead of stdout")
    sp.set_defaults(func=cmd_quality)

    sp = sub.add_parser("synth", help="write a seeded synthetic test image")
    sp.add_argument("--out", dest="output", required=True)
    sp.add_argument("--size", type=_positive, default=256)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_synth)
    return p


def _config(args) -> RunConfig:
    opts = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command"):
            continue
        opts[k] = repr(v) if not isinstance(v, (int, float, str, type(None), bool, tuple, list)) else v
    return RunConfig(args.command, opts)


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _config(args).echo(stderr)
    target = getattr(args, "out", None) if args.command in ("measures", "select", "coeffs", "quality") else None
    if args.command == "denoise":
        target = args.report
    out = _Output(target)
    handler: Callable = args.func
    try:
        handler(args, out)
    except (ValueError, TypeError, OSError) as exc:
        print(f"orderinfo {args.command}: error: {exc}", file=stderr)
        return 1
    out.flush(stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
