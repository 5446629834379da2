"""Command-line surface.

Subcommands
    mc        multicurve calculus: intersect, smooth, graft-label, normalize
    limset    limit-set sample of a punctured-torus group, text output
    slice     trace-plane raster classified by the primitive-trace scan
    pullback  quotient-torus pullback of a limit set
    converge  Hausdorff-distance series along a trace path
    config    show the effective configuration
    bench     time compiled kernels against the pure fallback

Exit codes: 0 success, 1 usage error, 2 domain rejection (NotDisjoint,
DiscretenessUnknown and friends).  All commands are deterministic.
"""

from __future__ import annotations

import argparse
import sys

from .config import Config, load_config
from .errors import SharpFlatError
from .words import SurfaceSpec, cyclic_reduce, TrivialWord
from .multicurve import (
    Multicurve,
    graft_component_label,
    intersection_number,
    multicurve_normalize,
    smooth,
)
from .mobius import Mobius
from .hyperbolic import word_matrix, standard_fuchsian
from .kleinian import (
    bq_classify,
    circle_fit,
    converge_experiment,
    limit_set,
    markov_third_trace,
    ptor_group,
    quotient_torus_pullback,
)
from .raster import raster_slice_region, render_points, write_ppm


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise SharpFlatError(f"bad complex number {text!r}")


def parse_multicurve_lines(lines, surface: SurfaceSpec) -> Multicurve:
    """`weight*word` lines; word letters like a1 b2 A1 (capital = inverse)."""
    parts = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if "*" not in line:
            raise SharpFlatError(f"expected weight*word, got {line!r}")
        w_s, _, word = line.partition("*")
        try:
            weight = int(w_s)
        except ValueError:
            raise SharpFlatError(f"bad weight in {line!r}")
        parts.append((weight, word))
    return multicurve_normalize(parts, surface)


def _cmd_mc(args) -> int:
    surface = SurfaceSpec(args.genus)
    if args.action == "intersect":
        lam = parse_multicurve_lines(args.curve, surface)
        mu = parse_multicurve_lines(args.other, surface)
        print(intersection_number(lam, mu))
        return 0
    if args.action == "normalize":
        mc = parse_multicurve_lines(args.curve, surface)
        for line in mc.text_lines():
            print(line)
        return 0
    lam = parse_multicurve_lines(args.lam, surface)
    mu = parse_multicurve_lines(args.mu, surface)
    if args.action == "smooth":
        out = smooth(lam, mu, args.mode)
    else:
        out = graft_component_label(lam, mu, args.direction)
    for line in out.text_lines():
        print(line)
    return 0


def _cmd_limset(args, cfg: Config) -> int:
    group = ptor_group(parse_complex(args.traces[0]),
                       parse_complex(args.traces[1]), args.root)
    sample = limit_set(group, args.eps or cfg.limset_eps,
                       args.depth or cfg.limset_depth)
    text = sample.to_text()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    finite = sample.finite_array()
    print(f"points={len(sample)} complete={sample.complete}", file=sys.stderr)
    if len(finite) >= 3:
        try:
            _, radius, resid = circle_fit(finite)
            print(f"circle_fit radius={radius:.9g} residual={resid:.3g}",
                  file=sys.stderr)
        except SharpFlatError:
            pass
    return 0


def _cmd_slice(args, cfg: Config) -> int:
    raster = raster_slice_region(
        parse_complex(args.center), args.span, args.res,
        parse_complex(args.fixed_y), args.depth or cfg.bq_depth,
        args.root, args.threads or cfg.threads)
    with open(args.output, "wb") as fh:
        n = write_ppm(raster, fh)
    counts = raster.counts()
    print(f"wrote {n} bytes to {args.output}; "
          f"pass={counts['pass']} fail={counts['fail']} error={counts['error']}")
    if args.grid:
        with open(args.grid, "w") as fh:
            fh.write(raster.text_grid())
    return 0


def _cmd_pullback(args, cfg: Config) -> int:
    group = ptor_group(parse_complex(args.traces[0]),
                       parse_complex(args.traces[1]), args.root)
    sample = limit_set(group, args.eps or cfg.limset_eps,
                       args.depth or cfg.limset_depth)
    letters = {"a": group.generators[0], "b": group.generators[1],
               "A": group.generators[0].inverse(),
               "B": group.generators[1].inverse()}
    eta = Mobius.identity()
    for ch in args.eta.replace(" ", ""):
        if ch not in letters:
            raise SharpFlatError(f"eta word letter {ch!r} not in a/b/A/B")
        eta = eta * letters[ch]
    coords = quotient_torus_pullback(sample, eta)
    lines = [f"# multiplier={coords.multiplier:.17g} "
             f"log_k={coords.lattice[0]:.17g} dropped={coords.dropped}"]
    for (a, b), w in zip(coords.fractions, coords.points):
        lines.append(f"{a:.17g} {b:.17g} {w.real:.17g} {w.imag:.17g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"points={len(coords)} dropped={coords.dropped}", file=sys.stderr)
    return 0


def _cmd_converge(args, cfg: Config) -> int:
    path = []
    for part in args.path.split(";"):
        x_s, y_s = part.split(",")
        path.append((parse_complex(x_s), parse_complex(y_s)))
    tx, ty = args.terminal.split(",")
    steps = converge_experiment(
        path, (parse_complex(tx), parse_complex(ty)),
        eps=args.eps or cfg.limset_eps, depth=args.depth or cfg.limset_depth,
        scan_depth=args.scan_depth or cfg.bq_depth, root=args.root)
    for st in steps:
        tag = f"{st.traces[0]:.6g},{st.traces[1]:.6g}"
        if st.status == "ok":
            print(f"{tag} d_H={st.distance:.9g} points={st.n_points}")
        else:
            print(f"{tag} scan-failed witness={st.witness[0]}/{st.witness[1]}")
    return 0


def _cmd_bench(args) -> int:
    from . import benchmarks
    benchmarks.run(repeat=args.repeat)
    return 0


def build_parser() -> _Parser:
    ap = _Parser(prog="sharpflat")
    ap.add_argument("--config", help="key=value config file")
    sub = ap.add_subparsers(dest="command", required=True)

    mc = sub.add_parser("mc", help="multicurve calculus")
    mc_sub = mc.add_subparsers(dest="action", required=True)
    p_int = mc_sub.add_parser("intersect")
    p_int.add_argument("--genus", type=int, default=2)
    p_int.add_argument("-c", "--curve", action="append", required=True,
                       help="weight*word component of the first multicurve")
    p_int.add_argument("-d", "--other", action="append", required=True)
    p_norm = mc_sub.add_parser("normalize")
    p_norm.add_argument("--genus", type=int, default=2)
    p_norm.add_argument("-c", "--curve", action="append", required=True)
    for name in ("smooth", "graft-label"):
        p = mc_sub.add_parser(name)
        p.add_argument("--genus", type=int, default=2)
        p.add_argument("-l", "--lam", action="append", required=True)
        p.add_argument("-m", "--mu", action="append", required=True)
        if name == "smooth":
            p.add_argument("--mode", choices=("sharp", "flat"), required=True)
        else:
            p.add_argument("--direction", choices=("+", "-", "plus", "minus"),
                           required=True)

    ls = sub.add_parser("limset", help="limit-set sample")
    ls.add_argument("--traces", nargs=2, required=True, metavar=("X", "Y"))
    ls.add_argument("--root", choices=("plus", "minus"), default="minus")
    ls.add_argument("--eps", type=float)
    ls.add_argument("--depth", type=int)
    ls.add_argument("-o", "--output")

    sl = sub.add_parser("slice", help="trace-plane raster")
    sl.add_argument("--center", required=True)
    sl.add_argument("--span", type=float, required=True)
    sl.add_argument("--res", type=int, required=True)
    sl.add_argument("--fixed-y", required=True)
    sl.add_argument("--depth", type=int)
    sl.add_argument("--root", choices=("plus", "minus"), default="minus")
    sl.add_argument("--threads", type=int)
    sl.add_argument("--grid", help="also dump a 0/1/2 text grid")
    sl.add_argument("-o", "--output", required=True)

    pb = sub.add_parser("pullback", help="quotient-torus pullback")
    pb.add_argument("--traces", nargs=2, required=True, metavar=("X", "Y"))
    pb.add_argument("--root", choices=("plus", "minus"), default="minus")
    pb.add_argument("--eta", required=True,
                    help="word in a/b/A/B taken as the loxodromic")
    pb.add_argument("--eps", type=float)
    pb.add_argument("--depth", type=int)
    pb.add_argument("-o", "--output")

    cv = sub.add_parser("converge", help="Hausdorff convergence series")
    cv.add_argument("--path", required=True,
                    help="semicolon-separated x,y trace pairs")
    cv.add_argument("--terminal", required=True, help="x,y of the limit group")
    cv.add_argument("--eps", type=float)
    cv.add_argument("--depth", type=int)
    cv.add_argument("--scan-depth", type=int)
    cv.add_argument("--root", choices=("plus", "minus"), default="minus")

    cf = sub.add_parser("config", help="configuration")
    cf.add_argument("action", choices=("show",))

    be = sub.add_parser("bench", help="compare compiled and pure kernels")
    be.add_argument("--repeat", type=int, default=3)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "mc":
            return _cmd_mc(args)
        if args.command == "limset":
            return _cmd_limset(args, cfg)
        if args.command == "slice":
            return _cmd_slice(args, cfg)
        if args.command == "pullback":
            return _cmd_pullback(args, cfg)
        if args.command == "converge":
            return _cmd_converge(args, cfg)
        if args.command == "config":
            sys.stdout.write(cfg.show())
            return 0
        if args.command == "bench":
            return _cmd_bench(args)
        raise AssertionError("unreachable")
    except SharpFlatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
