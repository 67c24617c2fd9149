"""Command-line harness.

    ppverify verify --family maincor3 --Q 2
    ppverify sweep --family thmb --Q 2,3,4 --n 1..6 --k 0..4 --out thmb.csv
    ppverify classify-mobius --Q 3 --out pgl2.csv
    ppverify reduce --Q 5

Exit codes: 0 success/agreement, 1 disagreement or mismatch, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from .errors import PPVerifyError
from .families import Variant, cor14_reduction
from .ff import ctx_new
from .mobius import classification_table, format_mobius
from .poly import format_poly
from .sweep import (
    ConfigError,
    SweepConfig,
    default_workers,
    generate_payloads,
    render_csv,
    render_json,
    run_payload,
    run_payloads,
    summarize,
    write_atomic,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def parse_int_list(text: str) -> list[int]:
    """"1..6", "0-4", "2,3,5" or mixtures like "1..3,7"."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
        elif "-" in part[1:]:
            idx = part.index("-", 1)
            lo, hi = part[:idx], part[idx + 1:]
        else:
            out.append(int(part))
            continue
        out.extend(range(int(lo), int(hi) + 1))
    return out


def parse_samples(text: str | None) -> int | None:
    if text is None or str(text).strip().lower() == "all":
        return None
    n = int(text)
    if n < 0:
        raise ConfigError("sample counts must be nonnegative")
    return n


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppverify",
                     description="Verify permutation-polynomial families over F_{Q^2}.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="verify a single family member")
    v.add_argument("--family", required=True)
    v.add_argument("--Q", type=int, required=True)
    for name in ("n", "k", "r", "d"):
        v.add_argument(f"--{name}", type=int)
    for name in ("beta", "gamma", "delta", "h"):
        v.add_argument(f"--{name}")

    s = sub.add_parser("sweep", help="verify every member of a parameter grid")
    s.add_argument("--config", help="flat key = value file; flags override it")
    s.add_argument("--family")
    s.add_argument("--Q", help="list such as 2,3,4 or 2..9")
    for name in ("n", "k", "r", "d"):
        s.add_argument(f"--{name}", help="integer range such as 1..6")
    s.add_argument("--beta", help="number of beta samples or 'all' (default all)")
    s.add_argument("--gamma", help="number of nonzero gamma samples besides 0 (default 3)")
    s.add_argument("--delta", help="number of delta samples (default 3)")
    s.add_argument("--h-samples", dest="h_samples", help="random h per Q for GenThm (default 25)")
    s.add_argument("--seed")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--workers", type=int)

    c = sub.add_parser("classify-mobius", help="classify all of PGL_2(F_{Q^2}) (Q <= 4)")
    c.add_argument("--Q", type=int, required=True)
    c.add_argument("--out")

    r = sub.add_parser("reduce", help="check the reduction identity behind MainCor1")
    r.add_argument("--Q", type=int, required=True)
    return parser


# -- commands ---------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {"variant": Variant.parse(args.family).value, "Q": args.Q}
    for name in ("n", "k", "r", "d", "beta", "gamma", "delta", "h"):
        val = getattr(args, name)
        if val is not None:
            payload[name] = val
    rec = run_payload(payload)
    print(json.dumps(rec))
    return EXIT_OK if rec["agree"] else EXIT_FAIL


def sweep_config(args: argparse.Namespace) -> SweepConfig:
    vals: dict[str, Any] = read_config_file(args.config) if args.config else {}
    for key in ("family", "Q", "n", "k", "r", "d", "beta", "gamma", "delta",
                "h_samples", "seed", "out", "format", "workers"):
        val = getattr(args, key)
        if val is not None:
            vals[key] = val
    if "family" not in vals or "Q" not in vals:
        raise ConfigError("sweep needs --family and --Q")

    workers = vals.get("workers")
    cfg = SweepConfig(
        variant=Variant.parse(str(vals["family"])),
        Qs=parse_int_list(vals["Q"]),
        n_range=parse_int_list(vals.get("n", "1")),
        k_range=parse_int_list(vals.get("k", "0")),
        r_range=parse_int_list(vals.get("r", "1")),
        d_range=parse_int_list(vals.get("d", "1")),
        beta_samples=parse_samples(vals.get("beta")),
        gamma_samples=parse_samples(vals.get("gamma", "3")),
        delta_samples=parse_samples(vals.get("delta", "3")),
        h_samples=int(vals.get("h_samples", 25)),
        seed=int(vals.get("seed", 0)),
        out=vals.get("out"),
        fmt=str(vals.get("format", "csv")),
        workers=int(workers) if workers is not None else default_workers(),
    )
    cfg.validate()
    return cfg


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = sweep_config(args)
    records = run_payloads(generate_payloads(cfg), cfg.workers)
    text = render_csv(records) if cfg.fmt == "csv" else render_json(records)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    s = summarize(records)
    print(f"total={s['total']} predicted_true={s['predicted_true']} "
          f"brute_true={s['brute_true']} agree={s['agree']}", file=sys.stderr)
    return EXIT_OK if s["agree"] == s["total"] else EXIT_FAIL


def cmd_classify_mobius(args: argparse.Namespace) -> int:
    if args.Q > 4:
        raise ConfigError("classify-mobius enumerates PGL_2(F_{Q^2}); Q must be at most 4")
    ctx = ctx_new(args.Q)
    rows = classification_table(ctx)
    bad = [row for row in rows if row.mismatch]
    print(f"maps={len(rows)} bijectors={sum(r.bijects_mu for r in rows)} "
          f"line_maps={sum(r.maps_mu_to_line for r in rows)} mismatches={len(bad)}",
          file=sys.stderr)
    if bad:
        for row in bad[:10]:
            print(f"mismatch: {format_mobius(row.map)}", file=sys.stderr)
        return EXIT_FAIL
    text = render_csv(
        ({"map": format_mobius(row.map), "bijects_mu": row.bijects_mu,
          "class_tag": row.class_tag.value, "maps_mu_to_line": row.maps_mu_to_line}
         for row in rows),
        columns=("map", "bijects_mu", "class_tag", "maps_mu_to_line"))
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    Q = args.Q
    if Q % 3 == 0 or not 4 <= Q <= 32:
        raise ConfigError("reduce needs 4 <= Q <= 32 with 3 not dividing Q")
    reduced, target = cor14_reduction(Q)
    print(f"reduced: {format_poly(reduced)}")
    print(f"target:  {format_poly(target)}")
    equal = reduced == target
    print("equal" if equal else "DIFFERENT")
    return EXIT_OK if equal else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "classify-mobius": cmd_classify_mobius,
    "reduce": cmd_reduce,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PPVerifyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
