"""Command-line surface: simulate, decode, complexity, tables."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import accounting, harness, rm_core
from .rm_core import ConfigurationError
from .top_decoders import ALGORITHMS, DecoderConfig, decode

_TABLE_III = [("FHT-FSCL", 32, 1), ("p-FHT-FSCL", 4, 1)]
_TABLE_III_CODES = [(2, 9), (3, 9), (4, 9)]
_TABLE_IV = [
    ((2, 8), [("RPA", 1, 1, 1), ("SRPA", 1, 1, 1), ("Aut-SSC", 1, 1, 64),
              ("p-FHT-FSCL", 16, 1, 1), ("p-FHT-FSCL", 1, 25, 1), ("p-FHT-FSCL", 4, 5, 1)]),
    ((3, 8), [("RPA", 1, 1, 1), ("SRPA", 1, 1, 1), ("Aut-SSC", 1, 1, 256),
              ("p-FHT-FSCL", 64, 1, 1), ("p-FHT-FSCL", 1, 100, 1), ("p-FHT-FSCL", 4, 16, 1)]),
    ((4, 8), [("RPA", 1, 1, 1), ("SRPA", 1, 1, 1), ("Aut-SSC", 1, 1, 128),
              ("p-FHT-FSCL", 64, 1, 1), ("p-FHT-FSCL", 1, 80, 1), ("p-FHT-FSCL", 4, 16, 1)]),
    ((2, 9), [("RPA", 1, 1, 1), ("SRPA", 1, 1, 1), ("Aut-SSC", 1, 1, 512),
              ("p-FHT-FSCL", 64, 1, 1), ("p-FHT-FSCL", 1, 100, 1), ("p-FHT-FSCL", 4, 20, 1)]),
]


def _parse_code(text: str):
    try:
        r, m = (int(v) for v in text.split(","))
    except ValueError:
        raise ConfigurationError(f"expected --code r,m, got {text!r}") from None
    return r, m


def _decoder_config(args) -> DecoderConfig:
    name = args.decoder
    matches = [a for a in ALGORITHMS if a.lower() == name.lower()]
    if not matches:
        raise ConfigurationError(f"unknown decoder {name!r}; choose from {ALGORITHMS}")
    return DecoderConfig(algorithm=matches[0], L=args.L, M=args.M, P=args.P,
                         seed=args.seed)


def cmd_simulate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.workers is not None:
        cfg["workers"] = args.workers
    if args.zero_noise:
        cfg["zero_noise"] = True
    job = harness.job_from_dict(cfg)
    records = harness.run_job(job)
    if args.out:
        harness.emit(records, args.out, args.format)
    else:
        text = (harness.records_to_csv(records) if args.format == "csv"
                else harness.records_to_json(records))
        sys.stdout.write(text)
    return 0


def cmd_decode(args) -> int:
    r, m = _parse_code(args.code)
    spec = rm_core.build_code(r, m)
    alpha = np.loadtxt(args.llr_in, dtype=np.float64).reshape(-1)
    if alpha.shape[0] != spec.N:
        raise ConfigurationError(f"LLR file holds {alpha.shape[0]} values, need {spec.N}")
    cfg = _decoder_config(args)
    rng = np.random.default_rng(args.seed or 0)
    res = decode(spec, alpha, cfg, rng)
    print("".join(str(int(b)) for b in res.codeword))
    print(f"pm={res.pm!r}")
    return 0


def cmd_complexity(args) -> int:
    r, m = _parse_code(args.code)
    cfg = _decoder_config(args)
    ops = accounting.complexity_model(cfg.algorithm, r, m, cfg.L, cfg.M, cfg.P)
    steps = accounting.latency_total(cfg.algorithm, r, m, cfg.L, cfg.M, cfg.P)
    mem = accounting.memory_model(cfg.algorithm, 1 << m, cfg.L, cfg.M, cfg.P, r=r)
    print(f"operations={ops}")
    print(f"time_steps={steps}")
    print(f"memory_bits={mem}")
    print(f"memory_kb={accounting.format_kb(mem)}")
    return 0


def _sci(ops: int) -> str:
    return f"{ops:.1E}"


def cmd_tables(args) -> int:
    rows = ["table,code,decoder,L,M,P,operations,time_steps,mem_kb"]
    for (algo, L, M) in _TABLE_III:
        for (r, m) in _TABLE_III_CODES:
            ops = accounting.complexity_model(algo, r, m, L, M)
            steps = accounting.latency_total(algo, r, m, L, M)
            mem = accounting.memory_model(algo, 1 << m, L, M, r=r)
            rows.append(f"III,RM({r};{m}),{algo},{L},{M},1,{_sci(ops)},{steps},"
                        f"{accounting.format_kb(mem)}")
    for (r, m), entries in _TABLE_IV:
        for (algo, L, M, P) in entries:
            ops = accounting.complexity_model(algo, r, m, L, M, P)
            steps = accounting.latency_total(algo, r, m, L, M, P)
            if algo in ("RPA", "SRPA"):
                mem_cell = ""  # no closed-form memory model for these
            else:
                mem = accounting.memory_model(algo, 1 << m, L, M, P, r=r)
                mem_cell = accounting.format_kb(mem)
            rows.append(f"IV,RM({r};{m}),{algo},{L},{M},{P},{_sci(ops)},{steps},"
                        f"{mem_cell}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmwb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo FER job from a JSON config")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out")
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--workers", type=int, default=None)
    p_sim.add_argument("--zero-noise", action="store_true")
    p_sim.set_defaults(func=cmd_simulate)

    p_dec = sub.add_parser("decode", help="decode one frame from an LLR text file")
    p_dec.add_argument("--code", required=True)
    p_dec.add_argument("--decoder", required=True)
    p_dec.add_argument("--L", type=int, default=1)
    p_dec.add_argument("--M", type=int, default=1)
    p_dec.add_argument("--P", type=int, default=1)
    p_dec.add_argument("--llr-in", required=True)
    p_dec.add_argument("--seed", type=int, default=0)
    p_dec.set_defaults(func=cmd_decode)

    p_cx = sub.add_parser("complexity", help="closed-form operation/latency/memory models")
    p_cx.add_argument("--code", required=True)
    p_cx.add_argument("--decoder", required=True)
    p_cx.add_argument("--L", type=int, default=1)
    p_cx.add_argument("--M", type=int, default=1)
    p_cx.add_argument("--P", type=int, default=1)
    p_cx.add_argument("--seed", type=int, default=0)
    p_cx.set_defaults(func=cmd_complexity)

    p_tab = sub.add_parser("tables", help="emit the model comparison tables as CSV")
    p_tab.add_argument("--paper", action="store_true")
    p_tab.add_argument("--out")
    p_tab.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
