"""Top-level RM decoders.

The recursive engine covers plain SC/SCL (bit-domain leaves), FSCL
(single-parity-check spans decoded in place), FHT-FSC / FHT-FSCL
(first-order spans decoded by transform), and the permuted variant
that extends paths in the permutation domain until the first order-1
span is reached. An ensemble wrapper runs independent attempts and
keeps the smallest path metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automorphism import (PermRecord, apply_perm, apply_perm_inverse,
                           permutation_extend, sample_affine,
                           sample_affine_batch, unpermute_output)
from .fht_decode import fhtl
from .list_engine import (extend_bit, f_op, g_op, hard_decision,
                          propagate_hard, spc_decode_list)
from .rm_core import CodeSpec, ConfigurationError

ALGORITHMS = ("SC", "SCL", "FSCL", "FHT-FSC", "FHT-FSCL", "p-FHT-FSCL",
              "Aut-SSC", "RPA", "SRPA")


@dataclass(frozen=True)
class DecoderConfig:
    algorithm: str
    L: int = 1
    M: int = 1
    P: int = 1
    permutations_enabled: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}")
        if self.L < 1 or self.M < 1 or self.P < 1:
            raise ConfigurationError("L, M and P must all be >= 1")


@dataclass
class DecodeResult:
    codeword: np.ndarray
    pm: float


class _Ctx:
    __slots__ = ("frozen_mask", "L", "use_fht", "use_spc", "perm_enabled",
                 "perm_active", "rng", "sampler", "trace")

    def __init__(self, frozen_mask, L, use_fht, use_spc, perm_enabled,
                 rng, sampler, trace):
        self.frozen_mask = frozen_mask
        self.L = L
        self.use_fht = use_fht
        self.use_spc = use_spc
        self.perm_enabled = perm_enabled
        self.perm_active = perm_enabled
        self.rng = rng
        self.sampler = sampler
        self.trace = trace

    def emit(self, kind, m, alive):
        if self.trace is not None:
            self.trace.append((kind, m, alive))


def _decode_node(ctx: _Ctx, r: int, m: int, offset: int,
                 alphas: np.ndarray, pms: np.ndarray):
    """Decode one span; returns (betas, pms, lineage into caller paths)."""
    p = alphas.shape[0]
    if ctx.use_fht and r == 1:
        if ctx.perm_active:
            ctx.perm_active = False  # deactivates once, never back on
        ctx.emit("fht", m, p)
        cw, pms, lineage, _ = fhtl(alphas, pms, ctx.L)
        return cw, pms, lineage
    if ctx.use_spc and m >= 1 and r == m - 1:
        ctx.emit("spc", m, p)
        return spc_decode_list(alphas, pms, ctx.L)
    if m == 0:
        frozen = bool(ctx.frozen_mask[offset])
        ctx.emit("leaf_frozen" if frozen else "leaf_info", m, p)
        bits, pms, lineage = extend_bit(alphas[:, 0], pms, ctx.L, frozen=frozen)
        return bits[:, None], pms, lineage

    lineage0 = np.arange(p)
    perms_here = None
    if ctx.perm_enabled and ctx.perm_active and 1 < r < m - 1:
        ctx.emit("perm", m, p)
        alphas, pms, lineage0, perms_here = permutation_extend(
            alphas, pms, ctx.L, ctx.rng, ctx.sampler)

    half = 1 << (m - 1)
    ctx.emit("f", m, alphas.shape[0])
    alpha_left = f_op(alphas[:, :half], alphas[:, half:])
    beta_l, pms, lin1 = _decode_node(ctx, r - 1, m - 1, offset, alpha_left, pms)
    alphas = alphas[lin1]
    ctx.emit("g", m, alphas.shape[0])
    alpha_right = g_op(alphas[:, :half], alphas[:, half:], beta_l)
    beta_r, pms, lin2 = _decode_node(ctx, r, m - 1, offset + half, alpha_right, pms)
    beta_l = beta_l[lin2]
    beta = propagate_hard(beta_l, beta_r)

    chain = lin1[lin2]
    if perms_here is not None:
        for row in range(beta.shape[0]):
            beta[row] = apply_perm_inverse(perms_here[chain[row]], beta[row])
    return beta, pms, lineage0[chain]


def _run_engine(spec: CodeSpec, alpha: np.ndarray, L: int, use_fht: bool,
                use_spc: bool, permutations: bool, rng=None, sampler=None,
                trace=None) -> DecodeResult:
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (spec.N,):
        raise ValueError(f"LLR length {alpha.shape} != ({spec.N},)")
    frozen_mask = np.zeros(spec.N, dtype=bool)
    frozen_mask[list(spec.frozen_set)] = True
    ctx = _Ctx(frozen_mask, L, use_fht, use_spc, permutations, rng, sampler, trace)

    if permutations:
        if rng is None and sampler is None:
            raise ConfigurationError("permuted decoding needs an rng")
        if sampler is not None:
            init_perms = [sampler() for _ in range(L)]
        else:
            init_perms = sample_affine_batch(spec.m, L, rng)
        records = []
        alphas = np.empty((L, spec.N), dtype=np.float64)
        for l, perm in enumerate(init_perms):
            alphas[l] = apply_perm(perm, alpha)
            rec = PermRecord()
            rec.push("init", perm)
            records.append(rec)
        pms = np.zeros(L, dtype=np.float64)
    else:
        alphas = alpha[None, :]
        pms = np.zeros(1, dtype=np.float64)

    betas, pms, lineage = _decode_node(ctx, spec.r, spec.m, 0, alphas, pms)

    if permutations:
        for row in range(betas.shape[0]):
            rec = records[lineage[row]].copy()
            betas[row] = unpermute_output(betas[row], rec, "init")

    best = int(np.argmin(pms))  # first minimum wins ties
    return DecodeResult(codeword=betas[best].astype(np.uint8), pm=float(pms[best]))


def sc_decode(spec, alpha, trace=None) -> DecodeResult:
    return _run_engine(spec, alpha, 1, False, False, False, trace=trace)


def scl_decode(spec, alpha, L, trace=None) -> DecodeResult:
    """Conventional SCL: bit-domain path extension only."""
    return _run_engine(spec, alpha, L, False, False, False, trace=trace)


def fscl_decode(spec, alpha, L, trace=None) -> DecodeResult:
    """FSCL with single-parity-check spans decoded without leaf visits."""
    return _run_engine(spec, alpha, L, False, True, False, trace=trace)


def fht_fscl_decode(spec, alpha, L, trace=None) -> DecodeResult:
    return _run_engine(spec, alpha, L, True, True, False, trace=trace)


def fht_fsc_decode(spec, alpha, trace=None) -> DecodeResult:
    return _run_engine(spec, alpha, 1, True, True, False, trace=trace)


def p_fht_fscl(spec, alpha, L, rng, sampler=None, trace=None) -> DecodeResult:
    """Permuted FHT-FSCL.

    Starts L paths under L fresh root permutations, extends paths in the
    permutation domain at every span with 1 < r < m-1 until the first
    order-1 span is decoded, then continues as FHT-FSCL. Hard outputs are
    re-permuted on the way up, the root permutation last.
    """
    return _run_engine(spec, alpha, L, True, True, True, rng=rng,
                       sampler=sampler, trace=trace)


def ensemble_decode(spec, alpha, L, M, rng, sampler=None) -> DecodeResult:
    """Run M independent permuted attempts; strictly smallest pm wins,
    first attempt keeping the lead on ties."""
    if M < 1:
        raise ConfigurationError("M must be >= 1")
    best = None
    seeds = rng.integers(0, 2 ** 63 - 1, size=M, dtype=np.int64)
    for i in range(M):
        attempt_rng = np.random.default_rng(int(seeds[i]))
        res = p_fht_fscl(spec, alpha, L, attempt_rng, sampler=sampler)
        if best is None or res.pm < best.pm:
            best = res
    return best


def ssc_decode(spec, alpha) -> DecodeResult:
    """Simplified SC with fast leaves (rate-0/rate-1/repetition/SPC)."""
    alpha = np.asarray(alpha, dtype=np.float64)

    def rec(r, m, a):
        n = a.shape[0]
        if r < 0:
            return np.zeros(n, dtype=np.uint8)
        if r == m:
            return hard_decision(a)
        if r == 0:
            return np.full(n, 1 if np.sum(a) < 0 else 0, dtype=np.uint8)
        if r == m - 1:
            bits = hard_decision(a)
            if np.bitwise_xor.reduce(bits):
                bits[np.argmin(np.abs(a))] ^= 1
            return bits
        half = n >> 1
        left = rec(r - 1, m - 1, f_op(a[:half], a[half:]))
        right = rec(r, m - 1, g_op(a[:half], a[half:], left))
        return propagate_hard(left, right)

    cw = rec(spec.r, spec.m, alpha)
    return DecodeResult(codeword=cw, pm=float("nan"))


def correlation(codeword: np.ndarray, alpha: np.ndarray) -> float:
    return float(np.sum((1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)) * alpha))


def aut_ssc(spec, alpha, P, rng, sampler=None) -> DecodeResult:
    """P parallel SSC decodes under random permutations; the candidate
    with the largest bipolar correlation wins (first on ties)."""
    if P < 1:
        raise ConfigurationError("P must be >= 1")
    alpha = np.asarray(alpha, dtype=np.float64)
    draw = sampler if sampler is not None else (lambda: sample_affine(spec.m, rng))
    best_cw, best_score = None, -np.inf
    for _ in range(P):
        perm = draw()
        cand = apply_perm_inverse(perm, ssc_decode(spec, apply_perm(perm, alpha)).codeword)
        score = correlation(cand, alpha)
        if score > best_score:
            best_cw, best_score = cand, score
    return DecodeResult(codeword=best_cw, pm=float("nan"))


def decode(spec: CodeSpec, alpha: np.ndarray, cfg: DecoderConfig,
           rng: np.random.Generator) -> DecodeResult:
    """Dispatch a single frame to the configured decoder."""
    algo = cfg.algorithm
    if algo == "SC":
        return sc_decode(spec, alpha)
    if algo == "SCL":
        return scl_decode(spec, alpha, cfg.L)
    if algo == "FSCL":
        return fscl_decode(spec, alpha, cfg.L)
    if algo == "FHT-FSC":
        return fht_fsc_decode(spec, alpha)
    if algo == "FHT-FSCL":
        return fht_fscl_decode(spec, alpha, cfg.L)
    if algo == "p-FHT-FSCL":
        if not cfg.permutations_enabled:
            return fht_fscl_decode(spec, alpha, cfg.L)
        if cfg.M > 1:
            return ensemble_decode(spec, alpha, cfg.L, cfg.M, rng)
        return p_fht_fscl(spec, alpha, cfg.L, rng)
    if algo == "Aut-SSC":
        return aut_ssc(spec, alpha, cfg.P, rng)
    if algo in ("RPA", "SRPA"):
        from . import rpa as rpa_mod
        rcfg = rpa_mod.RpaConfig()
        if algo == "RPA":
            cw, _ = rpa_mod.rpa_decode(spec.r, spec.m, alpha, rcfg)
        else:
            cw = rpa_mod.srpa_decode(spec.r, spec.m, alpha, rcfg, rng)
        return DecodeResult(codeword=cw, pm=float("nan"))
    raise ConfigurationError(f"unknown algorithm {algo!r}")
