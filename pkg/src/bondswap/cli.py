"""Command-line front end: swap, scan, sample and verify subcommands.

Every run emits a single JSON object (or CSV table) carrying the package
version, the resolved config echo and the seed, so outputs are reproducible
byte for byte.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .filters import PLAIN, VBS, Bond, FilterOp, bond_concurrence, make_filter, random_filter
from .linalg import EnumerationBudgetError
from .qubit import (
    SwapChain,
    bond_concurrences,
    enumerate_outcomes,
    sample_outcomes,
    scan_log_constants,
)
from .qudit import QuditChain, enumerate_qudit_outcomes
from .vbs import cross_check

QUDIT = "qudit"
MODES = (PLAIN, VBS, QUDIT)

# per-node outcome digits rendered in a base-64-style alphabet so one
# character always suffices (digits reach D²−1 = 63 at D = 8)
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/"


class UsageError(ValueError):
    """Bad flags or config; maps to exit code 2."""


def _parse_complex(text) -> complex:
    if isinstance(text, (int, float)):
        return complex(text)
    try:
        return complex(str(text).strip().replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as a complex number") from exc


def _parse_diag(raw) -> list[complex]:
    if isinstance(raw, str):
        parts = [p for p in raw.split(",") if p.strip()]
    else:
        parts = list(raw)
    if not parts:
        raise UsageError("empty filter diagonal")
    return [_parse_complex(p) for p in parts]


def _parse_filter_list(raw) -> list[list[complex]]:
    if isinstance(raw, str):
        groups = [g for g in raw.split(";") if g.strip()]
    else:
        groups = list(raw)
    if not groups:
        raise UsageError("empty filter list")
    return [_parse_diag(g) for g in groups]


def _parse_n_range(raw) -> tuple[int, int]:
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        lo, hi = int(raw[0]), int(raw[1])
    else:
        try:
            lo_s, hi_s = str(raw).split(":")
            lo, hi = int(lo_s), int(hi_s)
        except ValueError as exc:
            raise UsageError(f"bad N range {raw!r}, expected LO:HI") from exc
    if lo < 1 or hi < lo:
        raise UsageError(f"bad N range {lo}:{hi}")
    return lo, hi


_DEFAULTS = {
    "dim": 2,
    "mode": None,
    "identical": None,
    "filters": None,
    "bonds": None,
    "seed": 42,
    "samples": 10000,
    "tolerance": 1e-9,
    "format": "json",
    "out": None,
    "n_range": "1:8",
    "corrupt_bell_order": False,
}


def _resolve_config(args) -> dict:
    """File config, overridden by explicit flags, topped with defaults."""
    cfg = dict(_DEFAULTS)
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(_DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in _DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    cfg["command"] = args.command
    cfg["dim"] = int(cfg["dim"])
    cfg["seed"] = int(cfg["seed"])
    cfg["samples"] = int(cfg["samples"])
    cfg["tolerance"] = float(cfg["tolerance"])
    if cfg["bonds"] is not None:
        cfg["bonds"] = int(cfg["bonds"])
    if cfg["mode"] is None:
        cfg["mode"] = VBS if cfg["dim"] == 2 else QUDIT
    if cfg["mode"] not in MODES:
        raise UsageError(f"unknown mode {cfg['mode']!r}")
    if cfg["mode"] in (PLAIN, VBS) and cfg["dim"] != 2:
        raise UsageError(f"mode {cfg['mode']!r} is qubit-only; got --dim {cfg['dim']}")
    if cfg["format"] not in ("json", "csv"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    return cfg


def _build_filters(cfg) -> list[FilterOp]:
    dim = cfg["dim"]
    if cfg["identical"] is not None and cfg["filters"] is not None:
        raise UsageError("give either --identical or --filters, not both")
    if cfg["identical"] is not None:
        if cfg["bonds"] is None:
            raise UsageError("--identical needs --bonds (number of bonds, N+1)")
        if cfg["bonds"] < 1:
            raise UsageError("--bonds must be >= 1")
        diag = _parse_diag(cfg["identical"])
        if len(diag) != dim:
            raise UsageError(
                f"--identical has {len(diag)} entries but --dim is {dim}"
            )
        filt = make_filter(diag)
        return [filt] * cfg["bonds"]
    if cfg["filters"] is not None:
        diags = _parse_filter_list(cfg["filters"])
        if cfg["bonds"] is not None and cfg["bonds"] != len(diags):
            raise UsageError(
                f"--bonds {cfg['bonds']} contradicts {len(diags)} --filters entries"
            )
        for diag in diags:
            if len(diag) != dim:
                raise UsageError(
                    f"filter {diag} has {len(diag)} entries but --dim is {dim}"
                )
        return [make_filter(d) for d in diags]
    raise UsageError("no filters given: use --identical with --bonds, or --filters")


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _echo(cfg, filters) -> dict:
    echo = {
        "command": cfg["command"],
        "dim": cfg["dim"],
        "mode": cfg["mode"],
        "format": cfg["format"],
        "filters_normalized": [[_complex_pair(z) for z in f.diag] for f in filters],
        "filter_scales": [f.scale for f in filters],
    }
    if cfg["command"] == "scan":
        echo["n_range"] = "%d:%d" % _parse_n_range(cfg["n_range"])
    if cfg["command"] == "sample":
        echo["samples"] = cfg["samples"]
    if cfg["command"] == "verify":
        echo["tolerance"] = cfg["tolerance"]
    return echo


def _index_string(indices, dim: int, mode: str) -> str:
    if mode == QUDIT:
        digits = [m * dim + n for m, n in indices]
    else:
        digits = list(indices)
    return "".join(_DIGITS[d] for d in digits)


def _finite_or_none(x: float):
    return float(x) if math.isfinite(x) else None


def _run_swap(cfg) -> tuple[dict, list[FilterOp]]:
    filters = _build_filters(cfg)
    if cfg["mode"] == QUDIT:
        report = enumerate_qudit_outcomes(QuditChain(cfg["dim"], tuple(filters)))
        cs = [bond_concurrence(Bond(f, PLAIN)) for f in filters]
    else:
        chain = SwapChain(tuple(filters), cfg["mode"])
        report = enumerate_outcomes(chain)
        cs = bond_concurrences(chain)
    outcomes = [
        {
            "index": _index_string(rec.indices, cfg["dim"], cfg["mode"]),
            "weight": rec.weight,
            "prob": rec.prob,
            "concurrence": rec.concurrence,
            "prob_times_c": rec.prob * rec.concurrence,
        }
        for rec in report.records
    ]
    payload = {
        "dim": cfg["dim"],
        "mode": cfg["mode"],
        "n_bonds": len(filters),
        "p_sum": report.p_sum,
        "bond_concurrences": cs,
        "tradeoff_constant": report.constant,
        "max_residual": report.max_residual,
        "outcomes": outcomes,
    }
    return payload, filters


def _run_scan(cfg) -> tuple[dict, list[FilterOp]]:
    if cfg["mode"] == QUDIT:
        raise UsageError("scan supports the qubit modes (plain, vbs) only")
    if cfg["identical"] is None:
        raise UsageError("scan needs --identical (one diagonal reused for all bonds)")
    diag = _parse_diag(cfg["identical"])
    if len(diag) != 2:
        raise UsageError("scan filters are qubit diagonals (two entries)")
    filt = make_filter(diag)
    lo, hi = _parse_n_range(cfg["n_range"])
    logs = scan_log_constants(filt, hi, cfg["mode"])[lo - 1 :]
    ns = np.arange(lo, hi + 1)
    rows = [
        {
            "n": int(n),
            "constant": math.exp(lv) if math.isfinite(lv) else 0.0,
            "log_constant": _finite_or_none(lv),
        }
        for n, lv in zip(ns, logs)
    ]
    finite = np.isfinite(logs)
    slope = None
    if finite.all() and len(logs) >= 2:
        slope = float(np.polyfit(ns, logs, 1)[0])
    payload = {
        "dim": 2,
        "mode": cfg["mode"],
        "n_min": lo,
        "n_max": hi,
        "fitted_slope": slope,
        "rows": rows,
    }
    return payload, [filt]


def _run_sample(cfg) -> tuple[dict, list[FilterOp]]:
    if cfg["mode"] == QUDIT:
        raise UsageError("sample supports the qubit modes (plain, vbs) only")
    if cfg["samples"] < 1:
        raise UsageError("--samples must be >= 1")
    filters = _build_filters(cfg)
    chain = SwapChain(tuple(filters), cfg["mode"])
    counts = sample_outcomes(chain, cfg["samples"], cfg["seed"])
    report = enumerate_outcomes(chain)
    n = cfg["samples"]
    outcomes = []
    tv = 0.0
    for rec in report.records:
        c = counts.get(rec.indices, 0)
        freq = c / n
        tv += abs(freq - rec.prob)
        outcomes.append(
            {
                "index": _index_string(rec.indices, 2, cfg["mode"]),
                "count": c,
                "frequency": freq,
                "prob": rec.prob,
            }
        )
    payload = {
        "dim": 2,
        "mode": cfg["mode"],
        "n_bonds": len(filters),
        "n_samples": n,
        "tv_distance": 0.5 * tv,
        "outcomes": outcomes,
    }
    return payload, filters


def _default_verify_suite(seed: int) -> list[list[FilterOp]]:
    rng = np.random.default_rng(seed)
    suite = []
    for n_internal in (1, 1, 2, 2, 3, 3):
        suite.append([random_filter(rng, 2) for _ in range(n_internal + 1)])
    return suite


def _run_verify(cfg) -> tuple[dict, list[FilterOp], int]:
    if cfg["mode"] != VBS or cfg["dim"] != 2:
        raise UsageError("verify drives the vbs oracle: qubit chains, vbs mode only")
    if cfg["identical"] is not None or cfg["filters"] is not None:
        chains = [_build_filters(cfg)]
    else:
        chains = _default_verify_suite(cfg["seed"])
    rows = []
    all_passed = True
    for filters in chains:
        rep = cross_check(
            filters,
            tolerance=cfg["tolerance"],
            corrupt_bell_order=cfg["corrupt_bell_order"],
        )
        all_passed &= rep.passed
        rows.append(
            {
                "n_bonds": len(filters),
                "filters_normalized": [
                    [_complex_pair(z) for z in f.diag] for f in filters
                ],
                "worst_weight_dev": rep.worst_weight_dev,
                "worst_fidelity": rep.worst_fidelity,
                "passed": rep.passed,
            }
        )
    payload = {
        "tolerance": cfg["tolerance"],
        "n_chains": len(rows),
        "chains": rows,
        "passed": bool(all_passed),
    }
    return payload, chains[0], 0 if all_passed else 1


_CSV_COLUMNS = {
    "swap": ("index", "weight", "prob", "concurrence", "prob_times_c"),
    "sample": ("index", "count", "frequency", "prob"),
    "scan": ("n", "constant", "log_constant"),
    "verify": ("n_bonds", "worst_weight_dev", "worst_fidelity", "passed"),
}
_CSV_ROW_KEY = {
    "swap": "outcomes",
    "sample": "outcomes",
    "scan": "rows",
    "verify": "chains",
}


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _render_csv(command: str, payload: dict) -> str:
    lines = []
    rows_key = _CSV_ROW_KEY[command]
    for key, value in payload.items():
        if key in (rows_key, "config_echo", "chains"):
            continue
        if isinstance(value, list):
            value = ";".join(_csv_cell(v) for v in value)
        lines.append(f"# {key}={_csv_cell(value)}")
    cols = _CSV_COLUMNS[command]
    lines.append(",".join(cols))
    for row in payload[rows_key]:
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bondswap",
        description="Entanglement swapping on chains of filtered bonds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "swap": "enumerate every Bell outcome of one chain",
        "scan": "trade-off constant vs chain length for identical filters",
        "sample": "draw Bell outcomes from the exact distribution",
        "verify": "cross-check chains against the state-vector oracle",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dim", type=int, default=None, help="local dimension (default 2)")
        p.add_argument("--mode", default=None, choices=MODES,
                       help="vbs (symmetric-subspace), plain, or qudit")
        p.add_argument("--identical", default=None, metavar="a,b[,c...]",
                       help="one diagonal reused for every bond")
        p.add_argument("--filters", default=None, metavar="a0,b0;a1,b1;...",
                       help="explicit per-bond diagonals, ';'-separated")
        p.add_argument("--bonds", type=int, default=None,
                       help="number of bonds (internal nodes + 1)")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")
        p.add_argument("--samples", type=int, default=None,
                       help="sample count for the sample command")
        p.add_argument("--tolerance", type=float, default=None,
                       help="verification tolerance (default 1e-9)")
        p.add_argument("--n-range", dest="n_range", default=None, metavar="LO:HI",
                       help="scan range of internal-node counts (default 1:8)")
        p.add_argument("--format", default=None, choices=("json", "csv"))
        p.add_argument("--config", default=None, metavar="FILE",
                       help="JSON config file; explicit flags override it")
        p.add_argument("--out", default=None, metavar="FILE",
                       help="write output here instead of stdout")
        p.add_argument("--corrupt-bell-order", dest="corrupt_bell_order",
                       action="store_true", default=False, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if cfg["command"] == "swap":
            (payload, filters), code = _run_swap(cfg), 0
        elif cfg["command"] == "scan":
            (payload, filters), code = _run_scan(cfg), 0
        elif cfg["command"] == "sample":
            (payload, filters), code = _run_sample(cfg), 0
        else:
            payload, filters, code = _run_verify(cfg)
    except EnumerationBudgetError as exc:
        print(f"bondswap: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"bondswap: error: {exc}", file=sys.stderr)
        return 2

    document = {
        "version": __version__,
        "seed": cfg["seed"],
        "config_echo": _echo(cfg, filters),
    }
    document.update(payload)
    text = (
        _render_json(document)
        if cfg["format"] == "json"
        else _render_csv(cfg["command"], document)
    )
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
