"""Command-line entry point.

    pgcubic classify    --a2 0.5+0.1i --a3 0.2
    pgcubic evolve      --a2 0+0i --a3 0.1 --t 0,1,2.5
    pgcubic region-scan --s 0.25 --grid 101
    pgcubic boundary    --s 0.25 --n 100
    pgcubic verify      --seed 0

Settings are resolved as defaults < config file < command-line flags.  The
config file is flat ``key = value`` text (``#`` starts a comment); its path
comes from ``--config`` or the PG_CUBIC_CONFIG environment variable.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .criterion import (DEFAULT_TOLERANCE, Tag, boundary_curve, classify, in_set_A, tau_double_star,
                        tau_star)
from .evolution import blow_up, sample_at_times
from .exceptions import ConfigurationError, DomainError, PGCubicError
from .poly_core import CubicMap, LambdaPoint, from_lambda
from .region import BOUNDARY_BAND, DEFAULT_SAMPLES, MIN_SAMPLES, in_local_region
from .verify import FAIL, run_all

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
CONFIG_ENV = "PG_CUBIC_CONFIG"
SCAN_HALF_WIDTH = 0.8

CLASSIFY_COLUMNS = ("a1", "re_a2", "im_a2", "a3", "x1", "x2", "x3", "tag", "sup_value", "arg_tau",
                    "in_loca", "in_A", "t_star", "tau_blow", "zeta0_re", "zeta0_im",
                    "cusp_exponent", "cusp_order", "cusp_residual")
EVOLVE_COLUMNS = ("t", "tau", "a1", "re_a2", "im_a2", "a3", "x1", "x2", "x3",
                  "ellipse_margin", "valid")
SCAN_COLUMNS = ("x1", "x2", "x3", "tag", "sup_value", "in_loca", "in_A")
BOUNDARY_COLUMNS = ("tau", "g1", "g2", "x1", "x2", "x3")
VERIFY_COLUMNS = ("suite", "status", "detail")


class UsageError(PGCubicError):
    pass


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOLERANCE
    n_boundary_samples: int = DEFAULT_SAMPLES
    grid: tuple[int, int, int] = (101, 101, 20)
    output_format: str = "csv"
    seed: int = 0
    band: float = BOUNDARY_BAND
    workers: int = 1

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance!r}")
        if len(self.grid) != 3 or min(self.grid) < 2:
            raise ConfigurationError(f"grid dimensions must be >= 2, got {self.grid!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigurationError(f"output_format must be csv or json, got {self.output_format!r}")
        if self.n_boundary_samples < MIN_SAMPLES:
            raise ConfigurationError(f"n_boundary_samples must be >= {MIN_SAMPLES}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")


@dataclass(frozen=True)
class ScanRecord:
    x1: float
    x2: float
    x3: float
    tag: Tag
    sup_value: float
    in_loca: bool
    in_A: bool


# -- config -------------------------------------------------------------------

def _parse_value(key: str, raw: str) -> Any:
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    if key not in fields:
        raise ConfigurationError(f"unknown config key {key!r}")
    try:
        if key == "grid":
            parts = tuple(int(v) for v in raw.replace(",", " ").split())
            return parts * 3 if len(parts) == 1 else parts
        if key in ("tolerance", "band"):
            return float(raw)
        if key in ("n_boundary_samples", "seed", "workers"):
            return int(raw)
        return raw.strip()
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from exc


def read_config_file(path: str) -> dict[str, Any]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, raw = (s.strip() for s in line.split("=", 1))
            values[key] = _parse_value(key, raw)
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        values.update(read_config_file(path))
    overrides = {"tolerance": args.tolerance, "seed": args.seed,
                 "output_format": args.format, "workers": args.workers}
    values.update({k: v for k, v in overrides.items() if v is not None})
    if getattr(args, "grid", None) is not None:
        values["grid"] = (args.grid, args.grid, values.get("grid", RunConfig.grid)[2])
    return RunConfig(**values)


# -- parsing ------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Accept RE+IMi, RE-IMi, RE, IMi (j is also accepted for i)."""
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return z


def parse_real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def parse_times(text: str) -> list[float]:
    try:
        times = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}")
    if not times or any(not math.isfinite(t) or t < 0 for t in times):
        raise argparse.ArgumentTypeError(f"times must be finite and >= 0: {text!r}")
    return times


# -- output -------------------------------------------------------------------

def _fmt_csv(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _to_json(v: Any) -> Any:
    if isinstance(v, float):
        # json cannot carry inf/nan
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _to_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_to_json(x) for x in v]
    if isinstance(v, Tag):
        return v.value
    return v


def render(rows: Sequence[dict], columns: Sequence[str], config: RunConfig,
           meta: Optional[dict] = None) -> str:
    meta = dict(meta or {})
    if config.output_format == "json":
        doc = {"meta": {"config": dataclasses.asdict(config), **meta},
               "rows": [{c: r.get(c) for c in columns} for r in rows]}
        # json writes floats with repr, the shortest string that round-trips
        return json.dumps(_to_json(doc)) + "\n"
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}={_fmt_csv(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt_csv(r.get(c)) for c in columns])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------

def _check_a3(a3: float) -> None:
    if not 0 < a3 < 1 / 3:
        raise DomainError(f"a3 must lie in (0, 1/3), got {a3!r}")


def cmd_classify(a2: complex, a3: float, config: RunConfig) -> list[dict]:
    _check_a3(a3)
    f = CubicMap(1.0, a2, a3)
    res = classify(f, config.tolerance, config.n_boundary_samples, config.band)
    x = LambdaPoint(f.a2.real, f.a2.imag, a3)
    row = {"a1": 1.0, "re_a2": f.a2.real, "im_a2": f.a2.imag, "a3": a3,
           "x1": x.x1, "x2": x.x2, "x3": x.x3, "tag": res.tag,
           "sup_value": res.sup.sup_value if res.sup else None,
           "arg_tau": res.sup.arg_tau if res.sup else None,
           "in_loca": res.local_verdict.member, "in_A": res.in_set_a}
    if res.tag in (Tag.C2, Tag.C3):
        b = blow_up(f, config.tolerance)
        row.update({"t_star": b.t_star, "tau_blow": b.tau_blow,
                    "zeta0_re": b.zeta0.real, "zeta0_im": b.zeta0.imag})
        if b.cusp is not None:
            row.update({"cusp_exponent": b.cusp.fitted_exponent,
                        "cusp_order": b.cusp.declared_order,
                        "cusp_residual": b.cusp.fit_residual})
    return [row]


def cmd_evolve(a2: complex, a3: float, times: Iterable[float], config: RunConfig) -> list[dict]:
    _check_a3(a3)
    rows = []
    for smp in sample_at_times(CubicMap(1.0, a2, a3), list(times), config.tolerance):
        f, x = smp.f, smp.point
        rows.append({"t": smp.t, "tau": smp.tau, "a1": f.a1, "re_a2": f.a2.real,
                     "im_a2": f.a2.imag, "a3": f.a3, "x1": x.x1, "x2": x.x2, "x3": x.x3,
                     "ellipse_margin": smp.ellipse_margin, "valid": smp.valid})
    return rows


def scan_axis(n: int) -> np.ndarray:
    """n points on [-0.8, 0.8], mirror-exact: axis[k] == -axis[n - 1 - k]."""
    k = np.arange(n)
    return SCAN_HALF_WIDTH * (2 * k - (n - 1)) / (n - 1)


def _scan_row(args: tuple[float, np.ndarray, float, float]) -> list[ScanRecord]:
    x1, x2s, s, tolerance = args
    out = []
    for x2 in x2s:
        x = LambdaPoint(float(x1), float(x2), s)
        res = classify(from_lambda(x), tolerance)
        out.append(ScanRecord(x.x1, x.x2, s, res.tag, res.sup.sup_value,
                              in_local_region(x).member, in_set_A(x)))
    return out


def cmd_region_scan(s: float, config: RunConfig) -> list[ScanRecord]:
    """Classify the (x1, x2) grid of the slice x3 = s, rows ordered by x1 then x2."""
    if not 0 < s < 1 / 3:
        raise DomainError(f"s must lie in (0, 1/3), got {s!r}")
    xs1, xs2 = scan_axis(config.grid[0]), scan_axis(config.grid[1])
    jobs = [(float(x1), xs2, s, config.tolerance) for x1 in xs1]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            # map preserves submission order, so output order is fixed
            chunks = list(pool.map(_scan_row, jobs))
    else:
        chunks = [_scan_row(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]


def cmd_boundary(s: float, n: int, config: RunConfig) -> tuple[list[dict], dict]:
    pts = boundary_curve(s, n)
    rows = [{"tau": c.tau, "g1": c.g1, "g2": c.g2, "x1": c.point.x1, "x2": c.point.x2,
             "x3": c.point.x3} for c in pts]
    return rows, {"s": s, "tau_star": tau_star(s), "tau_double_star": tau_double_star(s)}


def cmd_verify(config: RunConfig) -> list[dict]:
    return run_all(config.seed, config.tolerance)


# -- argument parser ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help=f"key=value config file (default ${CONFIG_ENV})")
    common.add_argument("--tolerance", type=parse_real, help="classification tolerance on sup h")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--seed", type=int, help="seed for randomized verification suites")
    common.add_argument("--workers", type=int, help="processes for region scans")

    coeffs = argparse.ArgumentParser(add_help=False)
    coeffs.add_argument("--a2", type=parse_complex, required=True, metavar="RE+IMi")
    coeffs.add_argument("--a3", type=parse_real, required=True, metavar="R")

    parser = _Parser(prog="pgcubic", description="Classify and evolve cubic Hele-Shaw solutions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("classify", parents=[common, coeffs], help="classify f = z + a2 z^2 + a3 z^3")
    p = sub.add_parser("evolve", parents=[common, coeffs], help="sample the trajectory at given times")
    p.add_argument("--t", type=parse_times, required=True, metavar="LIST", help="comma-separated times")
    p = sub.add_parser("region-scan", parents=[common], help="classify a grid on the slice x3 = s")
    p.add_argument("--s", type=parse_real, required=True)
    p.add_argument("--grid", type=int, metavar="N", help="points per axis")
    p = sub.add_parser("boundary", parents=[common], help="emit the global-region boundary curve")
    p.add_argument("--s", type=parse_real, required=True)
    p.add_argument("--n", type=int, default=100, help="number of curve samples")
    sub.add_parser("verify", parents=[common], help="run the self-verification suites")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    out = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        config = build_config(args)
    except UsageError as exc:
        print(f"pgcubic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, OSError) as exc:
        print(f"pgcubic: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    code = EXIT_OK
    try:
        if args.command == "classify":
            text = render(cmd_classify(args.a2, args.a3, config), CLASSIFY_COLUMNS, config)
        elif args.command == "evolve":
            text = render(cmd_evolve(args.a2, args.a3, args.t, config), EVOLVE_COLUMNS, config)
        elif args.command == "region-scan":
            recs = cmd_region_scan(args.s, config)
            text = render([dataclasses.asdict(r) for r in recs], SCAN_COLUMNS, config,
                          {"s": args.s, "records": len(recs)} if config.output_format == "json" else None)
        elif args.command == "boundary":
            rows, meta = cmd_boundary(args.s, args.n, config)
            text = render(rows, BOUNDARY_COLUMNS, config, meta)
        else:
            rows = cmd_verify(config)
            text = render(rows, VERIFY_COLUMNS, config)
            if any(r["status"] == FAIL for r in rows):
                code = EXIT_VERIFY
    except DomainError as exc:
        print(f"pgcubic: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConfigurationError as exc:
        print(f"pgcubic: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
