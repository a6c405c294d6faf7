"""Command line entry point.

    adaptive-ic --protocol one_third --adversary random:0.05 --trials 100 --out runs.csv --summary

Exit status: 0 when no run is wrong within the noise budget, 1 otherwise,
2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigurationError
from .harness import PROTOCOLS, config_from_dict, iter_rows, new_counts, tally, write_csv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="adaptive-ic", description="Run resilience experiments on adaptive protocols.")
    p.add_argument("--protocol", choices=PROTOCOLS)
    p.add_argument("--adversary", default=None, help="none | random:p | deletion:p | silence | midpoint | rolling | enumerate:w")
    p.add_argument("--model", choices=("term", "abort", "adp"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int, help="message bits (one_third, full_exchange) or domain size (two_thirds)")
    p.add_argument("--k", type=int)
    p.add_argument("--depth", type=int, help="noiseless tree depth for br_half / shared_rand")
    p.add_argument("--field-size", dest="field_size", type=int)
    p.add_argument("--c-n", dest="c_n", type=float, help="emulated rounds = ceil(c_n * depth / eps)")
    p.add_argument("--label-size", dest="label_size", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threshold", type=float, help="noise-rate budget; defaults to the protocol's bound")
    p.add_argument("--config", help="JSON file with the same keys; its values win over flags")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--summary", action="store_true", help="print outcome counts")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "summary")}
        if args.config:
            try:
                with open(args.config) as fh:
                    loaded = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise _UsageError(f"cannot read config {args.config}: {exc}") from None
            if not isinstance(loaded, dict):
                raise _UsageError("config file must hold a JSON object")
            settings.update(loaded)
        if "protocol" not in settings:
            raise _UsageError("--protocol is required")
        cfg = config_from_dict(settings)
    except (_UsageError, ConfigurationError, TypeError) as exc:
        if not isinstance(exc, _UsageError):
            parser.print_usage(sys.stderr)
        print(f"adaptive-ic: error: {exc}", file=sys.stderr)
        return 2

    try:
        rows = iter_rows(cfg)
        if cfg.out:
            counts = write_csv(rows, cfg.out)
        else:
            counts = new_counts()
            for r in rows:
                tally(counts, r)
    except ConfigurationError as exc:
        print(f"adaptive-ic: error: {exc}", file=sys.stderr)
        return 2

    if args.summary:
        print(
            f"protocol={cfg.protocol} adversary={cfg.adversary} rows={counts['rows']} "
            f"correct={counts['correct']} wrong={counts['wrong']} abort={counts['abort']} "
            f"fault={counts['fault']} suite_failures={counts['suite_failures']} "
            f"threshold={float(cfg.budget):.6f}"
        )
        print("PASS" if counts["suite_failures"] == 0 else "FAIL")
    return 0 if counts["suite_failures"] == 0 else 1


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
