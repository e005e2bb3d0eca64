"""Command-line surface.

Subcommands: sumrate (the min-over-lambda sum-rate with witness),
claim1 (the dependence-helps comparison on the built-in channel),
mappings (enumerate tables with admissibility flags), directions
(inner-bound support vs degraded-message-set supports), twoletter
(the two-copy rate caps from a kernel file).

Documents are JSON by default with stable field order and floats at
9 significant digits; --format csv flattens or tabulates.  Exit codes:
0 success, 2 input error, 3 numerical failure, 4 resource cap.
"""

import argparse
import concurrent.futures
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import regions as regions_mod
from . import sumrate as sumrate_mod
from .channel import load_channel
from .errors import (InvalidChannelError, InvalidDistributionError,
                     MartonkitError, NumericalError, ResourceLimitError)
from .mappings import ENUMERATION_CAP, enumerate_mappings, profile, \
    _admissibility_mask
from .probkit import JointTable

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_RESOURCE = 4


@dataclass
class RunConfig:
    """Everything a command needs beyond its own switches."""

    channel: str = "claim1"
    seed: int = 0
    filters: str = "on"
    fmt: str = "json"
    out: str | None = None
    verify: bool = False
    tol: float = 1e-3

    def __post_init__(self):
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


def _thread_count():
    raw = os.environ.get("MARTONKIT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _round_floats(obj):
    """9-significant-digit floats everywhere, for stable documents."""
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.9g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def _flatten(obj, prefix=""):
    row = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            row.update(_flatten(v, f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(obj, list) and all(
            isinstance(v, (int, float, bool, str)) for v in obj):
        row[prefix[:-1]] = ";".join(str(v) for v in obj)
    elif isinstance(obj, list):
        row[prefix[:-1]] = json.dumps(obj, separators=(",", ":"))
    else:
        row[prefix[:-1]] = obj
    return row


def _emit(doc, rows, cfg):
    doc = _round_floats(doc)
    doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    if cfg.fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        rows = rows if rows is not None else [_flatten(
            {k: v for k, v in doc.items() if k != "generated_at"})]
        rows = [_round_floats(r) for r in rows]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _witness_doc(w):
    return {
        "value": w.value,
        "lambda_star": w.lambda_star,
        "i_wy": w.i_wy,
        "i_wz": w.i_wz,
        "t_term": w.t_term,
        "delta_smoothing_used": w.delta_smoothing_used,
        "p_wx": w.p_wx.probs.tolist(),
        "per_w": [
            {
                "w": e.w,
                "p_w": e.p_w,
                "value": e.inner.value,
                "mapping": e.inner.mapping.cells.tolist(),
                "joint_uv": e.inner.joint.probs.tolist(),
                "p_x": e.inner.p_x.tolist(),
                "conditions": {k: rep.as_dict()
                               for k, rep in e.inner.conditions.items()},
            }
            for e in w.per_w
        ],
        "condition_failures": list(w.diagnostics.get("condition_failures", [])),
    }


def cmd_sumrate(cfg, grid=None, outer_starts=None, golden_tol=None):
    ch = load_channel(cfg.channel)
    opts = sumrate_mod.SearchOptions(filters=cfg.filters, seed=cfg.seed)
    if outer_starts:
        opts.outer_starts = outer_starts
    if golden_tol:
        opts.golden_tol = golden_tol
    value, lam, witness = sumrate_mod.marton_sum_rate(ch, opts)
    doc = {
        "command": "sumrate",
        "channel": cfg.channel,
        "seed": cfg.seed,
        "filters": cfg.filters,
        "sum_rate_bits": value,
        "lambda_star": lam,
        "delta_smoothing_used": witness.delta_smoothing_used,
        "witness": _witness_doc(witness),
    }
    rows = None
    if grid:
        lambdas = np.linspace(0.0, 1.0, grid)
        sweep = sumrate_mod.t_lambda_sweep(ch, lambdas, opts)
        doc["lambda_grid"] = [
            {"lam": float(l), "value": s.value, "i_wy": s.i_wy,
             "i_wz": s.i_wz}
            for l, s in zip(lambdas, sweep)
        ]
        rows = list(doc["lambda_grid"])
    if cfg.verify:
        recon = witness.reconstruction_residual()
        induced = max((e.inner.induced_marginal_residual()
                       for e in witness.per_w), default=0.0)
        doc["verify"] = {
            "reconstruction_residual": recon,
            "induced_marginal_max_residual": induced,
            "passed": bool(recon <= 1e-6 and induced <= 1e-6),
        }
    return doc, rows


def cmd_claim1(cfg):
    parts = sumrate_mod.claim1_parts(seed=cfg.seed)
    best = parts["part_b_witness"]
    a, b = parts["part_a"], parts["part_b"]
    doc = {
        "command": "claim1",
        "seed": cfg.seed,
        "value_a": a,
        "value_a_terms": parts["part_a_terms"],
        "value_b": b,
        "separation": parts["separation"],
        "argmax_b": {
            "mapping": best["mapping"].cells.tolist(),
            "joint_uv": best["joint"].probs.tolist(),
            "x_equals_v": best["x_equals_v"],
            "u_constant": best["u_constant"],
            "u_degenerate": best["u_degenerate"],
            "i_uy": best["i_uy"],
            "i_uv": best["i_uv"],
        },
        "checks": {
            "a_at_least": 0.1229 - 1e-3,
            "b_at_most": 0.1216 + 1e-3,
            "a_ok": bool(a >= 0.1229 - 1e-3),
            "b_ok": bool(b <= 0.1216 + 1e-3),
            "separated": bool(a > b),
        },
    }
    doc["passed"] = bool(all(
        doc["checks"][k] for k in ("a_ok", "b_ok", "separated")))
    return doc, None


def cmd_mappings(cfg, shape):
    u, v, x = shape
    tables = enumerate_mappings(u, v, x, cap=ENUMERATION_CAP)
    mask = _admissibility_mask(tables)
    rows = [
        {
            "cells": ";".join(str(c) for c in t.cells.ravel()),
            "profile": ";".join(str(int(c)) for c in profile(t)),
            "admissible": bool(ok),
        }
        for t, ok in zip(tables, mask)
    ]
    doc = {
        "command": "mappings",
        "shape": {"u": u, "v": v, "x": x},
        "total": len(tables),
        "admissible": int(mask.sum()),
        "tables": [
            {"cells": t.cells.tolist(), "admissible": bool(ok)}
            for t, ok in zip(tables, mask)
        ],
    }
    return doc, rows


def cmd_directions(cfg, directions):
    ch = load_channel(cfg.channel)
    parsed = []
    for spec in directions:
        vals = tuple(float(p) for p in spec.split(","))
        if len(vals) != 3:
            raise ValueError(f"direction {spec!r} needs three components")
        d = regions_mod.Direction(*vals)
        if d.l0 < d.l1 + d.l2 - 1e-12:
            raise ValueError(
                f"direction {spec!r} violates l0 >= l1 + l2 "
                f"(normalized to {d.as_array().tolist()})"
            )
        parsed.append(d)

    def run(d):
        return regions_mod.directional_optimality_check(ch, d, tol=cfg.tol)

    workers = min(_thread_count(), max(len(parsed), 1))
    if workers > 1 and len(parsed) > 1:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(run, parsed))
    else:
        reports = [run(d) for d in parsed]

    entries = [
        {
            "direction": rep["direction"],
            "marton_support": rep["marton"],
            "d1_support": rep["d1"],
            "d2_support": rep["d2"],
            "gap": rep["gap"],
            "agree": rep["passed"],
        }
        for rep in reports
    ]
    doc = {
        "command": "directions",
        "channel": cfg.channel,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "directions": entries,
        "all_agree": bool(all(e["agree"] for e in entries)),
    }
    rows = [
        {
            "l0": e["direction"][0], "l1": e["direction"][1],
            "l2": e["direction"][2],
            "marton_support": e["marton_support"],
            "d1_support": e["d1_support"], "d2_support": e["d2_support"],
            "gap": e["gap"], "agree": e["agree"],
        }
        for e in entries
    ]
    return doc, rows


def _load_two_letter(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidDistributionError(
            f"cannot read two-letter input {path}: {exc}"
        ) from exc
    if "r_uvw" not in raw:
        raise InvalidDistributionError("two-letter input needs r_uvw")
    r = np.asarray(raw["r_uvw"], dtype=np.float64)
    single = None
    if "r_x_single" in raw:
        single = np.asarray(raw["r_x_single"], dtype=np.float64)
        kern = regions_mod.lift_markov_kernel(single, *r.shape)
    elif "r_x" in raw:
        kern = np.asarray(raw["r_x"], dtype=np.float64)
    else:
        raise InvalidDistributionError(
            "two-letter input needs r_x or r_x_single")
    return r, kern, single


def cmd_twoletter(cfg, path):
    ch = load_channel(cfg.channel)
    r, kern, single = _load_two_letter(path)
    try:
        inp = regions_mod.TwoLetterInput(JointTable(r), kern)
    except ValueError as exc:
        raise InvalidDistributionError(str(exc)) from exc
    bounds = regions_mod.two_letter_bounds(inp, ch)
    doc = {
        "command": "twoletter",
        "channel": cfg.channel,
        "input": path,
        "bounds": {
            "b_01": bounds.b_01,
            "b_02": bounds.b_02,
            "b_012a": bounds.b_012a,
            "b_012b": bounds.b_012b,
            "b_0012": bounds.b_0012,
        },
    }
    if single is not None:
        doc["reduction_check"] = regions_mod.two_letter_reduction_check(
            JointTable(r), single, ch)
    if cfg.verify:
        again = regions_mod.two_letter_bounds(
            regions_mod.TwoLetterInput(JointTable(r), kern), ch)
        drift = float(np.abs(again.as_array() - bounds.as_array()).max())
        doc["verify"] = {"replay_max_drift": drift,
                         "passed": bool(drift == 0.0)}
    return doc, None


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="martonkit",
        description="numerical evaluation of inner bounds for two-receiver "
                    "broadcast channels",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--channel", default="claim1",
                       help="built-in channel name or JSON file path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", dest="fmt", choices=("json", "csv"),
                       default="json")
        p.add_argument("--out", default=None, help="write document here "
                       "instead of stdout")
        p.add_argument("--verify", action="store_true",
                       help="re-validate emitted witnesses and report")

    p = sub.add_parser("sumrate", help="min-over-lambda sum rate")
    common(p)
    p.add_argument("--filters", choices=("on", "off", "report"), default="on")
    p.add_argument("--grid", type=int, default=0,
                   help="also evaluate a lambda grid of this many points")
    p.add_argument("--outer-starts", type=int, default=0,
                   help="override ascent starts (0 = default)")
    p.add_argument("--golden-tol", type=float, default=0.0,
                   help="override lambda search tolerance (0 = default)")

    p = sub.add_parser("claim1", help="dependence-helps comparison on the "
                       "built-in channel")
    common(p)

    p = sub.add_parser("mappings", help="enumerate mapping tables with "
                       "admissibility flags")
    common(p)
    p.add_argument("--shape", type=int, nargs=3, default=(2, 2, 2),
                   metavar=("U", "V", "X"))

    p = sub.add_parser("directions", help="inner-bound support vs "
                       "degraded-message-set supports")
    common(p)
    p.add_argument("--direction", "-d", action="append", default=None,
                   help="l0,l1,l2 with l0 >= l1+l2 (repeatable)")
    p.add_argument("--tol", type=float, default=2e-3)

    p = sub.add_parser("twoletter", help="two-copy rate caps from a kernel "
                       "file")
    common(p)
    p.add_argument("--input", required=True, help="JSON file with r_uvw and "
                   "r_x or r_x_single")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            channel=getattr(args, "channel", "claim1"),
            seed=getattr(args, "seed", 0),
            filters=getattr(args, "filters", "on"),
            fmt=getattr(args, "fmt", "json"),
            out=getattr(args, "out", None),
            verify=getattr(args, "verify", False),
            tol=getattr(args, "tol", 1e-3),
        )
        if args.command == "sumrate":
            doc, rows = cmd_sumrate(
                cfg, grid=args.grid,
                outer_starts=args.outer_starts,
                golden_tol=args.golden_tol,
            )
        elif args.command == "claim1":
            doc, rows = cmd_claim1(cfg)
        elif args.command == "mappings":
            doc, rows = cmd_mappings(cfg, args.shape)
        elif args.command == "directions":
            directions = args.direction or ["1,0,0", "1,0.5,0.5", "1,1,0"]
            doc, rows = cmd_directions(cfg, directions)
        elif args.command == "twoletter":
            doc, rows = cmd_twoletter(cfg, args.input)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command}")
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidChannelError, InvalidDistributionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MartonkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    _emit(doc, rows, cfg)
    verify = doc.get("verify")
    if verify is not None and not verify.get("passed", True):
        return EXIT_NUMERIC
    return EXIT_OK


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
