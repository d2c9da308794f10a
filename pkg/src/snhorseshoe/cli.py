"""Command-line front end.

Exit codes: 0 success, 2 configuration or invariant failure, 3 not
certified, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .config import build_models, default_config, load_config
from .errors import BudgetError, ConfigError, SaddleNodeError
from .output import to_csv, to_json, write_atomic

EXIT_OK, EXIT_INVARIANT, EXIT_UNCERTIFIED, EXIT_BUDGET = 0, 2, 3, 4


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _models(cfg):
    return build_models(cfg)


def cmd_construct(cfg, args):
    from .escape_analysis import compute_constants
    from .global_map import ExtensionSpec, GlobalMap1D
    from .horseshoe2d import solve_constants
    from .normal_form import SaddleNodeNormalForm

    report = {"passed": False}
    try:
        core = SaddleNodeNormalForm(**cfg["normal_form"])
    except SaddleNodeError as exc:
        report["errors"] = [str(exc)]
        _emit(to_json(report), args.out)
        return EXIT_INVARIANT
    gm = GlobalMap1D(core, ExtensionSpec(**cfg["extension"]))
    rep = gm.validate()
    report["global_map"] = rep.as_dict()
    if not rep.passed:
        report["errors"] = [c.detail or c.name for c in rep.failures]
        _emit(to_json(report), args.out)
        return EXIT_INVARIANT
    consts = compute_constants(gm)
    report["escape_constants"] = consts.as_dict()
    hs = cfg["horseshoe"]
    h = solve_constants(gm, zeta=hs["zeta"], headroom=hs["headroom"],
                        lambda_factor=hs["lambda_factor"], consts=consts,
                        lam=hs["lambda"], sigma_tilde=hs["sigma_tilde"],
                        column_centre=hs["column_centre"], check=False)
    checks = h.verify()
    geom = []
    for mu in (-core.t2 / 2, 0.0, core.t1 / 2):
        try:
            geom.append(h.geometry(mu).as_dict())
        except SaddleNodeError as exc:
            geom.append({"mu": mu, "error": str(exc)})
    report["horseshoe"] = {
        "lambda": h.lam, "sigma_tilde": h.sigma_tilde, "zeta": h.zeta,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                    "witness": c.witness} for c in checks],
        "geometry": geom}
    bad = [c for c in checks if not c.passed]
    report["errors"] = [c.detail or c.name for c in bad]
    report["passed"] = not bad
    _emit(to_json(report), args.out)
    return EXIT_OK if not bad else EXIT_INVARIANT


def cmd_verify(cfg, args):
    from .hyperbolicity import certify

    _, _, h = _models(cfg)
    mu = _require_mu(args)
    c = cfg["certify"]
    cert = certify(h, mu, depth=args.depth or c["depth"], max_depth=c["max_depth"],
                   seed=_seed(cfg, args), epsilon=c["epsilon"], n_orbits=c["orbits"])
    _emit(to_json(cert.as_dict()), args.out)
    return EXIT_OK if cert.certified else EXIT_UNCERTIFIED


def sweep_rows(h, mus, depth, seed, jobs):
    from .hyperbolicity import dichotomy_scan, format_from_log

    rows = dichotomy_scan(h, mus, depth=depth, seed=seed, jobs=jobs)
    # C may underflow a double; print it from its logarithm
    return [(mu, ok, format_from_log(log_c) if ok else float("nan"), zeta, n1, boxes, reason)
            for mu, ok, _, zeta, n1, boxes, reason, log_c in rows]


def cmd_sweep(cfg, args):
    _, _, h = _models(cfg)
    s = cfg["sweep"]
    lo = s["mu_min"] if args.mu_min is None else args.mu_min
    hi = s["mu_max"] if args.mu_max is None else args.mu_max
    steps = s["steps"] if args.steps is None else args.steps
    mus = [float(m) for m in np.linspace(lo, hi, steps)]
    # linspace leaves rounding noise where a grid point should be 0
    mus = [0.0 if abs(m) < 1e-15 * max(abs(lo), abs(hi)) else m for m in mus]
    rows = sweep_rows(h, mus, args.depth or cfg["certify"]["depth"],
                      _seed(cfg, args), args.jobs)
    _emit(to_csv(["mu", "certified", "C", "zeta", "n1", "boxes", "reason"], rows), args.out)
    return EXIT_OK


def cmd_intermittency(cfg, args):
    from .escape_analysis import intermittency_scaling

    gm, _, _ = _models(cfg)
    mus = args.mu_list if args.mu_list else cfg["intermittency"]["mu_list"]
    rows = intermittency_scaling(gm, mus, cfg["intermittency"]["budget"])
    _emit(to_csv(["mu", "n_mu", "n_mu_sqrt_mu"], [r[:3] for r in rows]), args.out)
    return EXIT_OK


def cmd_orbit(cfg, args):
    _, _, h = _models(cfg)
    mu = _require_mu(args)
    o = cfg["orbit"]
    x = o["x"] if args.x is None else args.x
    y = o["y"] if args.y is None else args.y
    n = o["steps"] if args.n is None else args.n
    rows = h.orbit(mu, (x, y), n)
    _emit(to_csv(["step", "region", "x", "y"], rows), args.out)
    return EXIT_OK


def cmd_invariant_set(cfg, args):
    from .hyperbolicity import build_cover

    _, _, h = _models(cfg)
    mu = _require_mu(args)
    cover = build_cover(h, mu, args.depth or cfg["certify"]["depth"])
    _emit(to_json(cover.as_dict()), args.out)
    return EXIT_OK


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "sweep": cmd_sweep,
            "intermittency": cmd_intermittency, "orbit": cmd_orbit,
            "invariant-set": cmd_invariant_set}


def _require_mu(args):
    if args.mu is None:
        raise ConfigError("--mu is required for this command")
    return args.mu


def _seed(cfg, args):
    return cfg["seed"] if args.seed is None else args.seed


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--mu", type=float, help="parameter value")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--seed", type=int, help="seed for sampled checks")
    common.add_argument("--depth", type=int, help="cover subdivision depth")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(
        prog="snhorseshoe",
        description="Saddle-node horseshoe construction and hyperbolicity certificates.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--print-default-config", action="store_true",
                        help="print the default configuration and exit")
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("construct", parents=[common], help="build and validate the models")
    sub.add_parser("verify", parents=[common], help="certify one parameter value")
    sp = sub.add_parser("sweep", parents=[common], help="certify a parameter grid")
    sp.add_argument("--mu-min", type=float)
    sp.add_argument("--mu-max", type=float)
    sp.add_argument("--steps", type=int)
    ip = sub.add_parser("intermittency", parents=[common], help="passage-count scaling")
    ip.add_argument("--mu-list", type=float, nargs="+")
    op = sub.add_parser("orbit", parents=[common], help="export one planar orbit")
    op.add_argument("--x", type=float)
    op.add_argument("--y", type=float)
    op.add_argument("-n", type=int, help="number of steps")
    sub.add_parser("invariant-set", parents=[common], help="export the box cover")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.print_default_config:
        sys.stdout.write(to_json(default_config()))
        return EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INVARIANT
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVARIANT
    except BudgetError as exc:
        print("budget exhausted: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except SaddleNodeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
