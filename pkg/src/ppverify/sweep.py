"""Exhaustive parameter sweeps over the families, optionally across processes.

Work items are plain JSON-able dicts so they pickle cheaply; each worker
rebuilds its field contexts through the ``ctx_new`` cache.  Records come back
in generation order regardless of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import PPVerifyError
from .families import (
    Variant,
    delta_candidates,
    gamma_candidates,
    random_remark_h,
    spec_from_json,
    spec_to_json,
    verify,
)
from .ff import ctx_new, format_elem
from .poly import format_poly

CSV_COLUMNS = ("variant", "Q", "n", "k", "beta", "gamma", "delta", "r", "d",
               "predicted", "brute", "agree", "witness_x1", "witness_x2",
               "p", "m", "modulus_mid", "modulus_top")

WORKERS_ENV = "PPVERIFY_WORKERS"


class ConfigError(PPVerifyError):
    pass


@dataclass
class SweepConfig:
    variant: Variant
    Qs: list[int]
    n_range: list[int] = field(default_factory=lambda: [1])
    k_range: list[int] = field(default_factory=lambda: [0])
    r_range: list[int] = field(default_factory=lambda: [1])
    d_range: list[int] = field(default_factory=lambda: [1])
    beta_samples: int | None = None      # None means every beta on the circle
    gamma_samples: int | None = 3
    delta_samples: int | None = 3
    h_samples: int = 25
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"
    workers: int = 1

    def validate(self) -> None:
        if not self.Qs:
            raise ConfigError("Q list is empty")
        v = self.variant
        need = {
            Variant.THMB: ("n_range", "k_range"),
            Variant.THMA: ("n_range", "k_range"),
            Variant.CORMAIN: ("k_range",),
            Variant.GENCOR: ("r_range", "d_range"),
            Variant.GENTHM: ("r_range", "d_range"),
        }.get(v, ())
        for name in need:
            if not getattr(self, name):
                raise ConfigError(f"{name.replace('_range', '')} range is empty")
        if self.workers < 1:
            raise ConfigError("worker count must be at least 1")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover
        return os.cpu_count() or 1


def _take(seq: list, count: int | None) -> list:
    return seq if count is None else seq[:count]


def generate_payloads(cfg: SweepConfig) -> list[dict[str, Any]]:
    """All spec dicts of the sweep, in deterministic order."""
    cfg.validate()
    v = cfg.variant
    out: list[dict[str, Any]] = []
    for Q in cfg.Qs:
        ctx = ctx_new(Q)
        betas = _take(list(ctx.mu), cfg.beta_samples)
        if v is Variant.THMB:
            gammas = gamma_candidates(ctx, cfg.gamma_samples)
            for n in cfg.n_range:
                for k in cfg.k_range:
                    for b in betas:
                        for g in gammas:
                            out.append({"variant": v.value, "Q": Q, "n": n, "k": k,
                                        "beta": format_elem(b), "gamma": format_elem(g)})
        elif v is Variant.THMA:
            deltas = delta_candidates(ctx, cfg.delta_samples)
            for n in cfg.n_range:
                for k in cfg.k_range:
                    for b in betas:
                        for dl in deltas:
                            out.append({"variant": v.value, "Q": Q, "n": n, "k": k,
                                        "beta": format_elem(b), "delta": format_elem(dl)})
        elif v is Variant.CORMAIN:
            for k in cfg.k_range:
                out.append({"variant": v.value, "Q": Q, "k": k})
        elif v in (Variant.MAINCOR1, Variant.MAINCOR2, Variant.MAINCOR3):
            out.append({"variant": v.value, "Q": Q})
        elif v is Variant.GENCOR:
            for r in cfg.r_range:
                for d in cfg.d_range:
                    for b in betas:
                        out.append({"variant": v.value, "Q": Q, "r": r, "d": d,
                                    "beta": format_elem(b)})
        elif v is Variant.GENTHM:
            rng = random.Random(f"{cfg.seed}:{Q}")
            for _ in range(cfg.h_samples):
                b = rng.choice(betas)
                d = rng.choice(cfg.d_range)
                h = random_remark_h(ctx, b, d, rng)
                for r in cfg.r_range:
                    out.append({"variant": v.value, "Q": Q, "r": r, "d": d,
                                "beta": format_elem(b), "h": format_poly(h)})
    return out


def run_payload(payload: dict[str, Any]) -> dict[str, Any]:
    """Verify one spec and flatten the verdict with its context metadata."""
    t0 = time.perf_counter()
    ctx = ctx_new(int(payload["Q"]))
    spec = spec_from_json(payload, ctx)
    vd = verify(spec, ctx)
    rec: dict[str, Any] = {c: None for c in CSV_COLUMNS}
    rec.update({k: val for k, val in spec_to_json(spec).items() if k != "h"})
    rec.update({
        "predicted": vd.predicted,
        "brute": vd.brute,
        "agree": vd.agree,
        "witness_x1": format_elem(vd.witness[0]) if vd.witness else None,
        "witness_x2": format_elem(vd.witness[1]) if vd.witness else None,
        "p": ctx.p,
        "m": ctx.m,
        "modulus_mid": " ".join(map(str, ctx.modulus_mid)),
        "modulus_top": " ".join(map(str, ctx.modulus_top)),
        "h": payload.get("h"),
        "generator": format_elem(ctx.generator),
        "wall_time": round(time.perf_counter() - t0, 6),
    })
    return rec


def run_payloads(payloads: list[dict[str, Any]], workers: int = 1) -> list[dict[str, Any]]:
    if workers <= 1 or len(payloads) < 2:
        return [run_payload(p) for p in payloads]
    chunk = max(1, len(payloads) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_payload, payloads, chunksize=chunk))


def run_sweep(cfg: SweepConfig) -> list[dict[str, Any]]:
    return run_payloads(generate_payloads(cfg), cfg.workers)


def _cell(val: Any) -> str:
    if val is None:
        return ""
    if isinstance(val, bool):
        return "true" if val else "false"
    return str(val)


def render_csv(records: Iterable[dict[str, Any]],
               columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_cell(rec[c]) for c in columns])
    return buf.getvalue()


def render_json(records: Iterable[dict[str, Any]]) -> str:
    return json.dumps(list(records), indent=1) + "\n"


def summarize(records: list[dict[str, Any]]) -> dict[str, int]:
    return {
        "total": len(records),
        "predicted_true": sum(bool(r["predicted"]) for r in records),
        "brute_true": sum(bool(r["brute"]) for r in records),
        "agree": sum(bool(r["agree"]) for r in records),
    }


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary sibling so no partial file survives a failure."""
    tmp = f"{path}.partial"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
