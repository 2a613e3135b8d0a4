"""Command-line front door: argument parsing, dispatch, result caching.

Every run is reproducible from its configuration alone: worker counts
and output paths are excluded from the cache key, seeds and shard plans
are fixed, and all serialization below is canonical (sorted JSON keys,
fixed float formatting).  A second run with the same configuration
serves bytes straight from the cache without touching any compute
module.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, cache

_CONSTANTS_MC_SAMPLES = 10**6


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved invocation."""

    command: str
    X: float | None = None
    rho: float = 5.0
    epsilon: float = 0.02
    eta: float = 0.0
    q: int | None = None
    m: int = 1
    n: int = 1
    p: int | None = None
    a: int = 1
    threads: int = 0  # 0 means "use every available core"
    seed: int = 20230
    out: str | None = None
    format: str = "json"
    cache_dir: str | None = None

    def resolved_threads(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


_CONFIG_FIELDS = {f.name.lower(): f.name for f in dataclasses.fields(RunConfig)}
_INT_FIELDS = {"q", "m", "n", "p", "a", "threads", "seed"}
_FLOAT_FIELDS = {"X", "rho", "epsilon", "eta"}


def _read_config_file(path: str, parser: argparse.ArgumentParser) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        val = val.strip()
        if key == "command" or key not in _CONFIG_FIELDS:
            parser.error(f"{path}:{lineno}: unknown config key {key!r}")
        field = _CONFIG_FIELDS[key]
        try:
            if field in _INT_FIELDS:
                values[field] = int(val)
            elif field in _FLOAT_FIELDS:
                values[field] = float(val)
            else:
                values[field] = val
        except ValueError:
            parser.error(f"{path}:{lineno}: bad value for {key}: {val!r}")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klsign",
        description="Kloosterman sum sign laboratory: evaluation, censuses, "
        "sieve sums, constants, residue checks, angle statistics.",
    )
    parser.add_argument("--version", action="version", version=f"klsign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, formats=("json", "csv")) -> None:
        sp.add_argument("--config", default=None, help="key=value file; flags override it")
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--format", choices=formats, default=None)
        sp.add_argument("--cache-dir", dest="cache_dir", default=None)

    sp = sub.add_parser("eval", help="one Kloosterman sum with its bound check")
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--q", type=int, default=None)
    common(sp)

    sp = sub.add_parser("census", help="sign census over the target moduli in (X, 2X]")
    sp.add_argument("--x", type=float, default=None, dest="X")
    common(sp)

    sp = sub.add_parser("rsums", help="weighted sign-decomposition sums at scale X")
    sp.add_argument("--x", type=float, default=None, dest="X")
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    common(sp)

    sp = sub.add_parser("constants", help="region integrals and assembled constants")
    sp.add_argument("--eta", type=float, default=None)
    common(sp)

    sp = sub.add_parser("residue-demo", help="double-residue ladder: numeric vs main term")
    common(sp)

    sp = sub.add_parser("satotate", help="angle statistics against the semicircle law")
    sp.add_argument("--p", type=int, default=None, help="vertical sample at this prime")
    sp.add_argument("--x", type=float, default=None, dest="X", help="horizontal sample up to x")
    sp.add_argument("--a", type=int, default=None, help="residue for the horizontal sample")
    common(sp)

    sp = sub.add_parser("bvprobe", help="large-sieve style inner-sum probe")
    sp.add_argument("--x", type=float, default=None, dest="X")
    sp.add_argument("--q", type=float, default=None, help="modulus cutoff Q")
    common(sp)

    return parser


def parse_args(argv: list[str]) -> RunConfig:
    """argv (without the program name) -> validated RunConfig.

    Precedence: built-in defaults < --config file < explicit flags.
    Conflicts and missing required parameters exit with code 2.
    """
    parser = _build_parser()
    ns = parser.parse_args(argv)

    values: dict = {}
    if getattr(ns, "config", None):
        values.update(_read_config_file(ns.config, parser))
    for field in _CONFIG_FIELDS.values():
        flag = getattr(ns, field, None)
        if flag is not None:
            values[field] = flag
    values["command"] = ns.command

    cfg = RunConfig(**values)

    cmd = cfg.command
    if cmd == "eval" and cfg.q is None:
        parser.error("eval requires --q")
    if cmd in ("census", "rsums") and cfg.X is None:
        parser.error(f"{cmd} requires --x")
    if cmd == "satotate":
        if cfg.p is not None and (cfg.X is not None or "a" in values):
            parser.error("satotate takes --p (vertical) or --x/--a (horizontal), not both")
        if cfg.p is None and cfg.X is None:
            parser.error("satotate requires --p or --x")
    if cmd == "bvprobe" and (cfg.X is None or cfg.q is None):
        parser.error("bvprobe requires --x and --q")
    if cfg.threads < 0:
        parser.error("--threads must be positive")
    return cfg


# --- serialization helpers ------------------------------------------------


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def _csv_bytes(header: str, rows: list[str], trailer: str | None = None) -> bytes:
    lines = [header, *rows]
    if trailer is not None:
        lines.append(trailer)
    return ("\n".join(lines) + "\n").encode()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# --- per-command execution -------------------------------------------------


def _run_eval(cfg: RunConfig) -> bytes:
    from .kloosterman import s_fast

    r = s_fast(cfg.m, cfg.n, cfg.q)
    if cfg.format == "csv":
        return _csv_bytes(
            "m,n,q,value,method,bound_ok",
            [f"{r.m},{r.n},{r.q},{_fmt(r.value)},{r.method},{r.bound_ok}"],
        )
    return _json_bytes(
        {
            "m": r.m,
            "n": r.n,
            "q": r.q,
            "value": r.value,
            "method": r.method,
            "bound_ok": r.bound_ok,
        }
    )


def _census_row(rec) -> str:
    p2 = "" if rec.p2 is None else str(rec.p2)
    return f"{rec.q},{rec.omega},{rec.p1},{p2},{_fmt(rec.kl)},{rec.sign}"


def _run_census(cfg: RunConfig) -> bytes:
    from .rsums import census

    pos, neg, records = census(cfg.X, threads=cfg.resolved_threads())
    flagged = sum(1 for r in records if r.flagged)
    counts = {"pos_count": pos, "neg_count": neg, "flagged": flagged}
    if cfg.format == "csv":
        return _csv_bytes(
            "q,omega,p1,p2,kl,sign",
            [_census_row(r) for r in records],
            trailer=json.dumps(counts, sort_keys=True),
        )
    payload = dict(counts)
    payload["records"] = [
        {
            "q": r.q,
            "omega": r.omega,
            "p1": r.p1,
            "p2": r.p2,
            "kl": r.kl,
            "sign": r.sign,
        }
        for r in records
    ]
    return _json_bytes(payload)


def _run_rsums(cfg: RunConfig) -> bytes:
    from .rsums import compute_rsums
    from .sieve import SieveConfig

    sieve_cfg = SieveConfig(X=cfg.X, epsilon=cfg.epsilon)
    r = compute_rsums(cfg.X, rho=cfg.rho, cfg=sieve_cfg, threads=cfg.resolved_threads())
    payload = {
        "X": cfg.X,
        "rho": cfg.rho,
        "R1": r.R1,
        "R2": r.R2,
        "R3": r.R3,
        "Rplus": r.Rplus,
        "Rminus": r.Rminus,
        "n_terms": r.n_terms,
    }
    if cfg.format == "csv":
        keys = ["X", "rho", "R1", "R2", "R3", "Rplus", "Rminus", "n_terms"]
        return _csv_bytes(
            ",".join(keys), [",".join(_fmt(float(payload[k])) for k in keys)]
        )
    return _json_bytes(payload)


def _run_constants(cfg: RunConfig) -> bytes:
    from . import constants as C
    from .sieve import SieveConfig

    threads = cfg.resolved_threads()
    a2_closed = C.A_i(2, eta=cfg.eta, method="closed_form")
    a2_quad = C.A_i(2, eta=cfg.eta, method="adaptive")
    mc = {
        i: C.A_i(
            i,
            eta=cfg.eta,
            method="monte_carlo",
            samples=_CONSTANTS_MC_SAMPLES,
            seed=cfg.seed,
            threads=threads,
        )
        for i in (3, 4, 5)
    }
    sieve_cfg = SieveConfig(X=10**6)
    literal, assembled = C.C1(sieve_cfg)
    c2f = C.C2_final()
    g_value, g_tail = C.euler_G(10**4)
    payload = {
        "A2_closed": a2_closed.value,
        "A2_quad": a2_quad.value,
        "A3": {"value": mc[3].value, "stderr": mc[3].abs_error_estimate},
        "A4": {"value": mc[4].value, "stderr": mc[4].abs_error_estimate},
        "A5": {"value": mc[5].value, "stderr": mc[5].abs_error_estimate},
        "C1": {"literal": literal, "assembled": assembled},
        "C2_final": c2f,
        "ratio_C1_over_2C2": literal / (2.0 * c2f),
        "c2_sum": C.c2_sum(),
        "euler_G": {"value": g_value, "tail_bound": g_tail, "truncation_prime": 10**4},
        "seeds": {"A3": cfg.seed, "A4": cfg.seed, "A5": cfg.seed},
    }
    return _json_bytes(payload)


def _run_residue_demo(cfg: RunConfig) -> bytes:
    from .residues import ResidueProblem, residue_main_term, residue_numeric

    prob = ResidueProblem(
        p_coeffs=(0, 0, 0, 1),
        q_coeffs=(0, 0, 0, 1),
        z_terms={(1, 1): Fraction(1), (2, 2): Fraction(1)},
        log_M=Fraction(20),
    )
    rows = []
    for log_m in (Fraction(20), Fraction(40), Fraction(80)):
        p = dataclasses.replace(prob, log_M=log_m)
        numeric = residue_numeric(p)
        main = residue_main_term(p)
        rows.append(
            {
                "log_M": float(log_m),
                "M": math.exp(float(log_m)),
                "numeric": float(numeric),
                "main": float(main),
                "ratio": float(Fraction(numeric) / Fraction(main)),
            }
        )
    if cfg.format == "csv":
        keys = ["log_M", "M", "numeric", "main", "ratio"]
        return _csv_bytes(
            ",".join(keys),
            [",".join(_fmt(row[k]) for k in keys) for row in rows],
        )
    return _json_bytes({"problem": "cubic cutoffs, diagonal pair interaction", "rows": rows})


def _run_satotate(cfg: RunConfig) -> bytes:
    from .satotate import horizontal_sample, summary, vertical_sample

    if cfg.p is not None:
        sample = vertical_sample(cfg.p)
    else:
        sample = horizontal_sample(cfg.X, cfg.a, threads=cfg.resolved_threads())
    if cfg.format == "csv":
        return _csv_bytes(
            "angle",
            [_fmt(t) for t in sample.angles],
            trailer=json.dumps(summary(sample), sort_keys=True),
        )
    return _json_bytes(summary(sample))


def _run_bvprobe(cfg: RunConfig) -> bytes:
    from .rsums import bv_probe

    value = bv_probe(cfg.X, cfg.q)
    payload = {"X": cfg.X, "Q": cfg.q, "value": value}
    if cfg.format == "csv":
        return _csv_bytes("X,Q,value", [f"{_fmt(cfg.X)},{_fmt(cfg.q)},{_fmt(value)}"])
    return _json_bytes(payload)


_EXECUTORS = {
    "eval": _run_eval,
    "census": _run_census,
    "rsums": _run_rsums,
    "constants": _run_constants,
    "residue-demo": _run_residue_demo,
    "satotate": _run_satotate,
    "bvprobe": _run_bvprobe,
}


def _cache_key(cfg: RunConfig) -> str:
    params = dataclasses.asdict(cfg)
    for skip in ("command", "threads", "out", "cache_dir"):
        params.pop(skip)
    return cache.canonical_key(cfg.command, params, __version__)


def _emit(cfg: RunConfig, payload: bytes) -> None:
    if cfg.out:
        Path(cfg.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def run(cfg: RunConfig) -> int:
    """Execute one config: cache lookup, compute on miss, emit bytes.

    Exit codes: 0 success, 1 computational flag (a sum the run could not
    certify), 2 usage problems (raised earlier, in parsing).  Only clean
    runs are cached, so a hit can always replay as success.
    """
    cache_dir = Path(cfg.cache_dir) if cfg.cache_dir else cache.default_cache_dir()
    key = _cache_key(cfg)
    entry = cache.load(cache_dir, key)
    if entry is not None:
        _emit(cfg, entry.payload)
        return 0
    try:
        payload = _EXECUTORS[cfg.command](cfg)
    except ArithmeticError as exc:
        print(f"klsign: computational flag: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"klsign: invalid parameters: {exc}", file=sys.stderr)
        return 2
    cache.store(cache_dir, key, payload)
    _emit(cfg, payload)
    return 0


def main(argv: list[str] | None = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
