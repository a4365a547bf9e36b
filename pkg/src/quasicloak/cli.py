"""Command-line front end.

Subcommands print JSON reports (or a tab-separated file manifest for
``figure``) on stdout and write assets under ``--out``. Exit codes:
0 success, 1 malformed input, 2 usage error or infeasible geometry,
3 tolerance not reached within the n cap.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import ConfigError, JobConfig, load_config
from .figures import FIGURES, cloaking_run, ensemble_assets, lagrange_assets, write_peanut_csv
from .geometry import (CloakGeometry, Disk, GeometryError, constraint_margins,
                       feasibility_threshold, invert_geometry, validate_physical)
from .raster import ColorScale, sample_grid, write_csv, write_heatmap
from .region import convergence_ratio, disk_in_halfregion, in_dbeta, limit_chi
from .synthesis import (InfeasibleGeometryError, NCapReached, build_device, cloak_errors,
                        find_n, tolerance_chain)

EXIT_OK, EXIT_MALFORMED, EXIT_INFEASIBLE, EXIT_CAP = 0, 1, 2, 3
N_CAP = 64

log = logging.getLogger("quasicloak")


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, default=_json_default))


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _out_dir(args, cfg: JobConfig) -> Path:
    out = Path(args.out or cfg.output.dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(args) -> JobConfig:
    cfg = load_config(args.config) if args.config else JobConfig()
    geo = {k: getattr(args, k, None) for k in ("a", "p", "delta", "R")}
    if any(v is not None for v in geo.values()):
        base = cfg.geometry.to_dict() if cfg.geometry else {}
        base.update({k: v for k, v in geo.items() if v is not None})
        try:
            cfg = dataclasses.replace(cfg, geometry=CloakGeometry.from_dict(base), beta=None)
        except GeometryError as exc:
            raise ConfigError(str(exc)) from exc
    over = {}
    for key in ("n", "taylor_degree", "phi", "psi", "n_samples"):
        if getattr(args, key, None) is not None:
            over[key] = getattr(args, key)
    if getattr(args, "exact", False):
        over["exact"] = True
    if getattr(args, "beta", None) is not None:
        # an explicit flag wins over a geometry-derived beta
        over.update(beta=args.beta, geometry=None)
    if over:
        cfg = dataclasses.replace(cfg, **over)
    out = cfg.output
    if getattr(args, "bounds", None) is not None:
        out = dataclasses.replace(out, bounds=tuple(args.bounds))
    for key in ("nx", "ny"):
        if getattr(args, key, None) is not None:
            out = dataclasses.replace(out, **{key: getattr(args, key)})
    if getattr(args, "scale", None) is not None:
        out = dataclasses.replace(out, scale=ColorScale.parse(args.scale))
    return dataclasses.replace(cfg, output=out)


def _geometry_report(g: CloakGeometry) -> tuple[dict, bool]:
    report = {"geometry": g.to_dict(), "violations": validate_physical(g)}
    if report["violations"] or g.p == g.a:
        report["feasible"] = False
        return report, False
    ig = invert_geometry(g)
    m_obs, m_clk = constraint_margins(ig)
    report.update(inverted=ig._asdict(), threshold=feasibility_threshold(ig.beta),
                  margins={"observation": m_obs, "cloak": m_clk},
                  feasible=bool(m_obs > 0 and m_clk > 0))
    report["violations"] += [f"{name} radius above threshold"
                             for name, m in (("observation", m_obs), ("cloak", m_clk)) if m <= 0]
    return report, report["feasible"]


def cmd_geometry(args) -> int:
    cfg = _load(args)
    if cfg.geometry is None:
        raise ConfigError("geometry block (or --a --p --delta --R) is required")
    report, ok = _geometry_report(cfg.geometry)
    _emit(report)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_poly(args) -> int:
    cfg = _load(args)
    if cfg.n is None:
        raise UsageError("--n is required")
    if cfg.n < 1:
        raise UsageError(f"--n must be >= 1, got {cfg.n}")
    beta = cfg.resolved_beta()
    out = _out_dir(args, cfg)
    shape = (cfg.output.nx, cfg.output.ny)
    if args.kind == "lagrange":
        files, _ = lagrange_assets(cfg.n, cfg.phi, cfg.psi, beta, out, f"poly_lagrange_n{cfg.n}",
                                   cfg.output.bounds, shape, args.threads)
    else:
        files, _ = ensemble_assets(cfg.n, beta, out, f"poly_ensemble_n{cfg.n}",
                                   cfg.output.bounds, shape, args.threads)
    _emit({"kind": args.kind, "n": cfg.n, "beta": beta, "files": files})
    return EXIT_OK


def cmd_region(args) -> int:
    cfg = _load(args)
    beta = cfg.resolved_beta()
    report: dict = {"beta": beta, "threshold": feasibility_threshold(beta)}
    points = []
    for x, y in args.point or []:
        z = complex(x, y)
        points.append({"z": z, "region": in_dbeta(beta, z).value,
                       "ratio": convergence_ratio(beta, z), "limit": limit_chi(beta, z)})
    report["points"] = points
    if args.disk_radius is not None:
        center = 0.0 if args.side == "origin" else beta
        report["disk"] = {"radius": args.disk_radius, "side": args.side,
                          "inside": disk_in_halfregion(beta, Disk(center, args.disk_radius), args.side)}
    if args.out or cfg.output.dir:
        path = _out_dir(args, cfg) / "region_peanut.csv"
        write_peanut_csv(beta, path, args.n_theta)
        report["files"] = [path]
    _emit(report)
    return EXIT_OK


def cmd_field(args) -> int:
    cfg = _load(args)
    if cfg.geometry is None:
        raise ConfigError("field synthesis needs a geometry")
    kw = dict(taylor_degree=cfg.taylor_degree, exact=cfg.exact)
    if args.find_n:
        if args.eps is None or not args.eps > 0:
            raise UsageError("--find-n needs --eps > 0")
        try:
            n, errs = find_n(cfg.geometry, cfg.incident, args.eps, n0=cfg.n or 4, n_cap=N_CAP,
                             n_samples=cfg.n_samples, **kw)
        except InfeasibleGeometryError as exc:
            _emit({"error": "infeasible geometry", "detail": str(exc)})
            return EXIT_INFEASIBLE
        except NCapReached as exc:
            _emit({"error": "n cap reached", "n": exc.n, "e_obs": exc.errors.e_obs,
                   "e_clk": exc.errors.e_clk, "eps": args.eps})
            return EXIT_CAP
        report = {"n": n, "eps": args.eps}
    else:
        n = cfg.n or 12
        report = {"n": n}
    df = build_device(cfg.geometry, cfg.incident, n, **kw)
    errs = cloak_errors(df, cfg.n_samples)
    chain = tolerance_chain(df, cfg.n_samples)
    report.update(e_obs=errs.e_obs, e_clk=errs.e_clk, M=chain["M"], tolerance_chain=chain,
                  margins=list(df.margins), feasible=df.feasible, exact_q0=cfg.exact)
    if args.out or cfg.output.dir:
        out = _out_dir(args, cfg)
        bounds = cfg.output.bounds or (-1.5 * cfg.geometry.R, 1.5 * cfg.geometry.R) * 2
        mask = cfg.output.mask_radius or 0.5 * cfg.geometry.delta
        grid = sample_grid(df, bounds, cfg.output.nx, cfg.output.ny, mask_radius=mask,
                           threads=args.threads)
        scale = cfg.output.scale or ColorScale("linear", -10.0, 10.0)
        csv, png = out / f"field_n{n}.csv", out / f"field_n{n}.png"
        write_csv(grid, csv)
        write_heatmap(grid, png, scale)
        report["files"] = [csv, png]
    _emit(report)
    return EXIT_OK


def cmd_scatter(args) -> int:
    cfg = _load(args)
    if cfg.geometry is None or cfg.scatterer is None:
        raise ConfigError("scatter needs geometry and scatterer blocks")
    n = cfg.n or 12
    df, off, on, summary = cloaking_run(cfg.geometry, cfg.scatterer, n, cfg.incident,
                                        exact=cfg.exact, n_samples=cfg.n_samples)
    if args.out or cfg.output.dir:
        out = _out_dir(args, cfg)
        bounds = cfg.output.bounds or (-1.5 * cfg.geometry.R, 1.5 * cfg.geometry.R) * 2
        mask = cfg.output.mask_radius or 0.5 * cfg.geometry.delta
        scale = cfg.output.scale or ColorScale("linear", -10.0, 10.0)
        files = []
        for tag, sol in (("off", off), ("on", on)):
            grid = sample_grid(sol, bounds, cfg.output.nx, cfg.output.ny, mask_radius=mask,
                               threads=args.threads)
            csv, png = out / f"scatter_{tag}.csv", out / f"scatter_{tag}.png"
            write_csv(grid, csv)
            write_heatmap(grid, png, scale)
            files += [csv, png]
        summary["files"] = files
    _emit(summary)
    return EXIT_OK


def cmd_figure(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    paths = FIGURES[args.which](out, threads=args.threads)
    for p in paths:
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        print(f"{p}\t{p.stat().st_size}\t{digest}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON job file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="grid worker threads, 0 = auto (default: $QUASICLOAK_THREADS or 1)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="quasicloak", parents=[common],
                                     description="Quasistatic active exterior cloak toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def geometry_flags(p):
        for name in ("a", "p", "delta", "R"):
            p.add_argument(f"--{name}", type=_finite, default=None)

    def grid_flags(p):
        p.add_argument("--bounds", type=_finite, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
        p.add_argument("--nx", type=_positive_int)
        p.add_argument("--ny", type=_positive_int)
        p.add_argument("--scale", help="log:LO:HI or linear:LO:HI")

    p = sub.add_parser("geometry", parents=[common], help="check constraints of a cloak geometry")
    geometry_flags(p)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("poly", parents=[common], help="build p_{phi,psi} or the ensemble average")
    p.add_argument("--kind", choices=("lagrange", "ensemble"), default="ensemble")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--beta", type=_finite)
    p.add_argument("--phi", type=_finite)
    p.add_argument("--psi", type=_finite)
    grid_flags(p)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("region", parents=[common], help="convergence region queries")
    p.add_argument("--beta", type=_finite)
    geometry_flags(p)
    p.add_argument("--point", type=_finite, nargs=2, action="append", metavar=("X", "Y"))
    p.add_argument("--disk-radius", type=_finite)
    p.add_argument("--side", choices=("origin", "beta"), default="origin")
    p.add_argument("--n-theta", type=_positive_int, default=720)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("field", parents=[common], help="synthesize the device field")
    geometry_flags(p)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--taylor-degree", type=int)
    p.add_argument("--exact", action="store_true", help="use U0(1/w) instead of its Taylor polynomial")
    p.add_argument("--n-samples", type=_positive_int)
    p.add_argument("--find-n", action="store_true", help="double n until both errors < --eps")
    p.add_argument("--eps", type=_finite)
    grid_flags(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("scatter", parents=[common], help="dielectric disk with device off and on")
    geometry_flags(p)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--n-samples", type=_positive_int)
    grid_flags(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("figure", parents=[common], help="reproduce a canonical figure")
    p.add_argument("which", type=int, choices=sorted(FIGURES))
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("config", None), ("out", None), ("threads", None), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ConfigError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
