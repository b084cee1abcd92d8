"""Command-line entry point.

One subcommand per run kind; every run reads a YAML config and writes CSV/JSON
outputs plus a manifest into the output directory. Failures exit non-zero with
a machine-readable JSON error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments
from .experiments import ConfigError

# CLI subcommand -> run kind in the config document
COMMANDS = {
    "dynamics": "dynamics",
    "concurrence": "concurrence",
    "map-concurrence": "map_concurrence",
    "map-biexciton": "map_biexciton",
    "sweep-g": "sweep_g",
    "validate-truncation": "validate_truncation",
    "optimize": "optimize",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdcascade",
        description=(
            "Biexciton-exciton cascade simulations: dynamics, photon-photon "
            "entanglement, and swing-up pulse optimization."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in COMMANDS.items():
        p = sub.add_parser(name, help=f"run a '{kind}' experiment from a config")
        p.add_argument("--config", required=True, type=Path, help="YAML config path")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes for map/sweep cells")
        p.add_argument("--grid-scale", choices=("coarse", "fine"), default=None,
                       help="map resolution (coarse 5x5 or the full fine grid)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = experiments.load_config(
            args.config,
            run=COMMANDS[args.command],
            out_dir=args.out,
            threads=args.threads,
            grid_scale=getattr(args, "grid_scale", None),
        )
        result = experiments.run(cfg)
    except ConfigError as exc:
        _fail("config_error", str(exc), field=exc.field)
        return 2
    except FileNotFoundError as exc:
        _fail("file_not_found", str(exc))
        return 2
    except Exception as exc:
        _fail(type(exc).__name__, str(exc))
        return 1
    summary = {"command": args.command, "out_dir": str(cfg.out_dir)}
    for key, val in result.items():
        if isinstance(val, (int, float, str)):
            summary[key] = val
        elif isinstance(val, Path):
            summary[key] = str(val)
    print(json.dumps(summary, indent=2))
    return 0


def _fail(kind: str, message: str, **extra) -> None:
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
