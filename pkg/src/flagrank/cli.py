"""Command-line front end: ``flagrank dim|secant|bounds|verify|scan``.

Exit codes: 0 success, 1 a verify suite failed, 2 usage or precondition
error, 3 cap exceeded, 4 inconsistency (including two primes disagreeing on
a secant rank).

Defaults for ``prime``, ``seed``, ``trials``, ``cache``, ``ambient_cap``,
``row_cap`` and ``workers`` can be set in a ``key=value`` file named by the
``FLAGRANK_CONFIG`` environment variable; command-line flags win.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import os
import re
import sys

from flagrank.bounds import all_bounds
from flagrank.exactalg import DEFAULT_PRIME, InconsistencyError
from flagrank.flagvar import SingularSampleError
from flagrank.secant import (
    AMBIENT_CAP,
    ROW_CAP,
    CapExceeded,
    DefectReport,
    ReportCache,
    defect_scan,
    terracini_dim,
)
from flagrank.shape import FlagShape, ShapeError, format_shape, parse_shape
from flagrank.verify import SUITES, run_suite

log = logging.getLogger("flagrank")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_INCONSISTENT = 0, 1, 2, 3, 4

DEFAULTS = {
    "prime": DEFAULT_PRIME,
    "seed": 0,
    "trials": 1,
    "cache": None,
    "ambient_cap": AMBIENT_CAP,
    "row_cap": ROW_CAP,
    "workers": 1,
}


class UsageError(Exception):
    pass


def load_config(path: str | None = None) -> dict:
    """Defaults overlaid with the ``key=value`` file at ``path`` or ``$FLAGRANK_CONFIG``."""
    cfg = dict(DEFAULTS)
    path = path or os.environ.get("FLAGRANK_CONFIG")
    if not path:
        return cfg
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_string("[flagrank]\n" + fh.read())
    except OSError as err:
        raise UsageError(f"cannot read config {path}: {err}") from err
    for key, value in parser["flagrank"].items():
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        cfg[key] = value if key == "cache" else int(value)
    return cfg


_SHAPE_TOKEN = re.compile(r"(G:)?\d+(,\d+)*;\d+")


def parse_shape_list(text: str) -> list[FlagShape]:
    """Split ``G:1;3,G:0,1;3,0,2;5`` into shapes (a shape ends at its ``;n``)."""
    shapes, pos = [], 0
    while pos < len(text):
        m = _SHAPE_TOKEN.match(text, pos)
        if m is None:
            raise ShapeError(f"cannot read a shape at position {pos} of {text!r}")
        shapes.append(parse_shape(m.group()))
        pos = m.end()
        if pos < len(text):
            if text[pos] != ",":
                raise ShapeError(f"expected ',' at position {pos} of {text!r}")
            pos += 1
    return shapes


def parse_h_values(text: str) -> list[int]:
    """``3``, ``1-4`` or ``2,3,5``."""
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise UsageError("h values must be positive")
    return out


def parse_budget(text: str | None) -> float | None:
    """Seconds, with an optional ``s``/``m`` suffix."""
    if text is None:
        return None
    m = re.fullmatch(r"(\d+(?:\.\d+)?)([sm]?)", text.strip())
    if m is None:
        raise UsageError(f"bad budget {text!r}")
    value = float(m.group(1))
    return value * 60 if m.group(2) == "m" else value


def emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def shape_summary(shape: FlagShape) -> dict:
    return {
        "shape": format_shape(shape),
        "mode": "product" if shape.product else "flag",
        "dim": shape.dim,
        "span": shape.span_dim,
        "ambient": shape.ambient_size - 1,
        "alpha": shape.alpha,
    }


# --- commands ---------------------------------------------------------------


def cmd_dim(args, cfg) -> int:
    info = shape_summary(parse_shape(args.shape))
    if args.json:
        emit_json(info)
    else:
        print(f"{info['shape']}: dim {info['dim']}, span {info['span']}, "
              f"ambient {info['ambient']}, alpha={info['alpha']}")
    return EXIT_OK


def cmd_secant(args, cfg) -> int:
    shape = parse_shape(args.shape)
    if args.h < 1:
        raise UsageError("--h must be at least 1")
    rep = terracini_dim(
        shape, args.h, cfg["prime"], cfg["seed"], cfg["trials"], args.force,
        ambient_cap=cfg["ambient_cap"], row_cap=cfg["row_cap"],
    )
    if args.json:
        emit_json(rep.to_dict())
    else:
        status = "certified" if rep.certified else "NOT certified"
        print(f"{rep.shape} h={rep.h}: expected {rep.expected_dim}, computed {rep.computed_dim}, "
              f"defect {rep.defect} ({status}; p={rep.prime}, seed={rep.seed})")
    return EXIT_OK if rep.certified else EXIT_INCONSISTENT


def cmd_bounds(args, cfg) -> int:
    shape = parse_shape(args.shape)
    reports = all_bounds(shape, args.corid_literal)
    if args.json:
        emit_json({"shape": format_shape(shape), "bounds": {r.kind: r.to_dict() for r in reports}})
        return EXIT_OK
    for r in reports:
        if not r.applicable:
            print(f"{r.kind}: not applicable ({r.note})")
            continue
        tag = " [heuristic]" if r.heuristic else ""
        extra = f" ({r.note})" if r.note else ""
        print(f"{r.kind}: h_max={r.h_max} regime={r.regime}{tag}{extra}")
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    kwargs = {"p": cfg["prime"], "seed": cfg["seed"], "nmax": args.nmax,
              "budget": parse_budget(args.budget)}
    if args.shapes:
        kwargs["shapes"] = parse_shape_list(args.shapes)
    passed, checks = run_suite(args.suite, **kwargs)
    summary = {"suite": args.suite, "passed": passed, "checks": checks,
               "checked": len({c.get("shape") for c in checks})}
    if args.json:
        emit_json(summary)
    else:
        for c in checks:
            mark = "ok" if c["ok"] else ("info" if not c.get("counts", True) else "FAIL")
            fields = ", ".join(f"{k}={v}" for k, v in sorted(c.items()) if k not in ("ok", "check"))
            print(f"[{mark}] {c['check']}: {fields}")
        print(f"suite {args.suite}: {'pass' if passed else 'FAIL'} ({summary['checked']} shapes)")
    return EXIT_OK if passed else EXIT_FAIL


def _scan_shapes(args) -> list[FlagShape]:
    if args.shapes:
        return parse_shape_list(args.shapes)
    return [FlagShape((0, k), n) for n in range(2, args.nmax + 1) for k in range(1, n)]


def cmd_scan(args, cfg) -> int:
    shapes = _scan_shapes(args)
    cache = ReportCache(cfg["cache"]) if cfg["cache"] else None
    reports = defect_scan(
        shapes, parse_h_values(args.h), cfg["prime"], cfg["seed"], cfg["trials"], args.force,
        cache, parse_budget(args.budget), cfg["workers"],
    )
    fields = list(DefectReport.__dataclass_fields__)
    writer = None
    if args.csv:
        writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
    status = EXIT_OK
    for rep in reports:
        if rep.error is None and not rep.certified:
            status = EXIT_INCONSISTENT
        if writer is not None:
            writer.writerow(rep.to_dict())
        elif args.json:
            print(rep.to_json())
        else:
            if rep.error:
                print(f"{rep.shape:>12} h={rep.h}: error {rep.error}")
            else:
                print(f"{rep.shape:>12} h={rep.h}: expected {rep.expected_dim:>4} "
                      f"computed {rep.computed_dim:>4} defect {rep.defect}"
                      + ("" if rep.certified else " (uncertified)"))
        sys.stdout.flush()
    return status


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, help="field characteristic for rank computations")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--trials", type=int, help="random trials per rank (max is kept)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="key=value config file (default $FLAGRANK_CONFIG)")

    parser = argparse.ArgumentParser(
        prog="flagrank",
        description="Secant dimensions, osculating spaces and non-defectivity bounds "
                    "for flag varieties and products of Grassmannians.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dimension, span and ambient of a shape")
    p.add_argument("shape", help="[G:]k1,...,kr;n")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("secant", parents=[common], help="Terracini rank of the h-secant variety")
    p.add_argument("shape")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--force", action="store_true", help="ignore size caps")
    p.set_defaults(func=cmd_secant)

    p = sub.add_parser("bounds", parents=[common], help="non-defectivity and identifiability bounds")
    p.add_argument("shape")
    p.add_argument("--corid-literal", action="store_true",
                   help="identifiability gate with the product of factor dimensions")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--shapes", help="comma-separated shapes, e.g. G:1;3,G:0,1;3")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--budget", help="time budget, e.g. 60s or 2m")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="defect scan over shapes and h values")
    p.add_argument("--shapes", help="comma-separated shapes (default: 0,k;n for n <= nmax)")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--h", default="2", help="h values: 3, 1-4 or 2,3")
    p.add_argument("--budget", help="time budget, e.g. 60s or 2m")
    p.add_argument("--force", action="store_true", help="run skipped entries and ignore caps")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--workers", type=int)
    p.add_argument("--cache", help="JSONL report cache path")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        for key in ("prime", "seed", "trials", "workers", "cache"):
            value = getattr(args, key, None)
            if value is not None:
                cfg[key] = value
        return args.func(args, cfg)
    except (UsageError, ShapeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as err:
        print(f"error: {err} (use --force)", file=sys.stderr)
        return EXIT_CAP
    except (InconsistencyError, SingularSampleError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
