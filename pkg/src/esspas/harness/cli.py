"""Command line front end: ``esspas <subcommand> ...``."""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from typing import Dict, List, Optional

from ..shaping import ShapingError, plan_rate, rate_loss
from .config import ConfigError, ExperimentConfig, load_config


def _overrides(args) -> Dict[str, str]:
    out = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    for flag in ("seed", "symbols", "N"):
        v = getattr(args, flag, None)
        if v is not None:
            out[flag] = str(v)
    return out


def _config(args, default: str) -> ExperimentConfig:
    cfg = load_config(args.config or default, _overrides(args))
    if getattr(args, "scheme", None):
        cfg = cfg.with_scheme(args.scheme)
    return cfg


def _add_config_flags(p, default: str):
    p.add_argument("--config", help=f"config file or preset name (default {default})")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--scheme", help="scheme spec such as ess:200, ccdm:3600 or uniform")
    p.add_argument("--seed", type=int)
    p.add_argument("--symbols", type=int, help="QAM symbols per grid point")
    p.add_argument("--N", type=int, help="shaper blocklength")


def cmd_plan(args) -> int:
    cfg = plan_rate(args.target, args.m, args.fec_rate, args.N,
                    shaper=None if args.shaper == "none" else args.shaper)
    print(cfg.describe())
    if cfg.shaper != "none":
        from ..shaping import make_shaper

        sh = make_shaper(cfg)
        print(f"rate loss: {rate_loss(sh.design_distribution(), sh.k, sh.N):.6f} bits/amplitude")
    return 0


def cmd_shape(args) -> int:
    from .files import shape_file

    cfg = _config(args, "awgn")
    n = shape_file(args.input, cfg, args.output)
    print(f"wrote {n} blocks to {args.output}")
    return 0


def cmd_deshape(args) -> int:
    from .files import DeshapeError, deshape_file

    cfg = _config(args, "awgn")
    try:
        rep = deshape_file(args.input, cfg, args.output)
    except DeshapeError as exc:
        print(exc, file=sys.stderr)
        return 1
    print(f"wrote {rep.bits} bits from {rep.blocks} blocks to {args.output}")
    return 0


def _figures(args, csv_path: str) -> None:
    if args.no_figures:
        return
    from ..report import plot_csv

    for p in plot_csv(csv_path):
        print(f"figure: {p}")


def _sweep(args, default: str, link: str) -> int:
    from .sweep import run_sweep

    cfg = _config(args, default)
    if cfg.link != link:
        raise ConfigError(f"config link is {cfg.link!r}; use sweep-{cfg.link}")
    out = args.out or f"{cfg.name}.csv"
    rows = []
    for c in cfg.expand():
        rows += run_sweep(c, out, args.workers)
    failed = sum(1 for r in rows if r.get("error"))
    print(f"{len(rows)} rows -> {out}" + (f" ({failed} failed)" if failed else ""))
    _figures(args, out)
    return 0


def cmd_sweep_awgn(args) -> int:
    return _sweep(args, "awgn", "awgn")


def cmd_sweep_fiber(args) -> int:
    return _sweep(args, "fiber_desk", "fiber")


def cmd_compare(args) -> int:
    from .sweep import compare_shapers

    cfg = _config(args, "compare_desk")
    configs = cfg.expand()
    out = args.out or f"{cfg.name}.csv"
    rows = compare_shapers(configs, out, args.sweep_dir, args.workers)
    print(f"{len(rows)} rows for {len(configs)} schemes -> {out}")
    _figures(args, out)
    return 0


def cmd_trellis_dump(args) -> int:
    from ..shaping import AmplitudeAlphabet, build_trellis, min_emax_for_bits

    e_max = args.e_max
    if e_max is None:
        pc = plan_rate(args.target, args.m, args.fec_rate, args.N)
        e_max = min_emax_for_bits(AmplitudeAlphabet(args.m), args.N, pc.k)
    tr = build_trellis(AmplitudeAlphabet(args.m), args.N, e_max)
    fh = open(args.out, "w") if args.out else sys.stdout
    try:
        rows = tr.export(fh, include_zero=args.include_zero)
    finally:
        if args.out:
            fh.close()
    print(f"N={args.N} e_max={e_max}: {tr.total} sequences, {tr.num_bits} bits, {rows} rows",
          file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="esspas", description="Shaped PAS transmission experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("plan", help="print the shaping configuration for a rate target")
    s.add_argument("--target", default="5/2", help="info rate per real dimension (default 5/2)")
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--fec-rate", default="5/6")
    s.add_argument("--N", type=int, default=200)
    s.add_argument("--shaper", choices=("ess", "ccdm", "none"), default="ess")
    s.set_defaults(func=cmd_plan)

    for name, func, doc in (("shape", cmd_shape, "shape a packed bit file"),
                            ("deshape", cmd_deshape, "recover bits from an amplitude-block file")):
        s = sub.add_parser(name, help=doc)
        _add_config_flags(s, "awgn")
        s.add_argument("input")
        s.add_argument("output")
        s.set_defaults(func=func)

    for name, func, default in (("sweep-awgn", cmd_sweep_awgn, "awgn"),
                                ("sweep-fiber", cmd_sweep_fiber, "fiber_desk"),
                                ("compare", cmd_compare, "compare_desk")):
        s = sub.add_parser(name, help=f"run the {default} grid")
        _add_config_flags(s, default)
        s.add_argument("--out", help="CSV path (default <name>.csv)")
        s.add_argument("--workers", type=int, help="parallel grid points (env ESSPAS_WORKERS)")
        s.add_argument("--no-figures", action="store_true", help="skip PNG figures")
        if name == "compare":
            s.add_argument("--sweep-dir", help="keep per-scheme sweep CSVs here (enables resume)")
        s.set_defaults(func=func)

    s = sub.add_parser("trellis-dump", help="write ESS trellis counts as CSV")
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--e-max", type=int, help="energy bound (default: smallest for the rate target)")
    s.add_argument("--target", default="5/2")
    s.add_argument("--fec-rate", default="5/6")
    s.add_argument("--include-zero", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_trellis_dump)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    warnings.simplefilter("always")
    try:
        return args.func(args)
    except (ConfigError, ShapingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
