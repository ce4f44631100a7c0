"""Recursive projection-aggregation decoding and its sparse variant.

The code is projected onto all 2^m - 1 one-dimensional cosets, each
projected LLR vector is decoded recursively (order-1 bases go through
the exact transform decoder), and the sub-decisions are aggregated back
into a refreshed LLR vector. Iteration stops early once the refresh is
within a fixed relative tolerance of its input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil

import numpy as np

from .fht_decode import _bin_codewords, fht_transform
from .rm_core import ConfigurationError


@dataclass(frozen=True)
class RpaConfig:
    delta: float = 0.0625  # power of two, so the scaling is a shift
    use_exact_projection: bool = True

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigurationError("delta must be positive")


@dataclass(frozen=True)
class ProjectionSet:
    """Index tensor entries[j, k, z]: element z of coset k of projection j.

    Projection j pairs indices {i, i xor (j+1)}; cosets are listed by
    ascending representative with entries[j, k, 0] < entries[j, k, 1].
    """

    m: int
    entries: np.ndarray

    @property
    def count(self) -> int:
        return self.entries.shape[0]


def build_projection_set(m: int) -> ProjectionSet:
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 1 << m
    idx = np.arange(n, dtype=np.int64)
    entries = np.empty((n - 1, n >> 1, 2), dtype=np.int64)
    for t in range(1, n):
        reps = idx[idx < (idx ^ t)]
        entries[t - 1, :, 0] = reps
        entries[t - 1, :, 1] = reps ^ t
    return ProjectionSet(m=m, entries=entries)


_projection_set = lru_cache(maxsize=16)(build_projection_set)

_LUT_POINTS = 1024
_LUT_RANGE = 16.0
_lut_table = None


def _softplus_neg_lut(x: np.ndarray) -> np.ndarray:
    """Table lookup for log(1 + exp(-x)), x >= 0."""
    global _lut_table
    if _lut_table is None:
        grid = np.linspace(0.0, _LUT_RANGE, _LUT_POINTS)
        _lut_table = np.log1p(np.exp(-grid))
    pos = np.clip(x / _LUT_RANGE * (_LUT_POINTS - 1), 0, _LUT_POINTS - 1).astype(np.int64)
    return _lut_table[pos]


def project_pair(a, b, exact: bool = True):
    """LLR of the mod-2 sum of two bits: ln(e^(a+b) + 1) - ln(e^a + e^b).

    The exact path evaluates both terms with logaddexp, which is stable
    for magnitudes far beyond 700. The table path replaces the two
    correction terms with lookups, mirroring a hardware implementation.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if exact:
        return np.logaddexp(a + b, 0.0) - np.logaddexp(a, b)
    sign = np.where(a < 0, -1.0, 1.0) * np.where(b < 0, -1.0, 1.0)
    base = sign * np.minimum(np.abs(a), np.abs(b))
    return base + _softplus_neg_lut(np.abs(a + b)) - _softplus_neg_lut(np.abs(a - b))


def _fht_ml_batch(y: np.ndarray) -> np.ndarray:
    """Exact order-1 decisions for a batch of LLR rows."""
    y = np.atleast_2d(y)
    n = y.shape[-1]
    s = n.bit_length() - 1
    w = fht_transform(y)
    absw = np.abs(w)
    best = np.argmax(absw, axis=-1)  # first maximum wins ties
    rows = np.arange(y.shape[0])
    sign_bits = (w[rows, best] < 0).astype(np.uint8)
    return _bin_codewords(s)[best] ^ sign_bits[:, None]


def fht_ml_decode(y: np.ndarray) -> np.ndarray:
    """Maximum-likelihood decision on RM(1, s) via one transform."""
    return _fht_ml_batch(np.asarray(y, dtype=np.float64))[0]


def rpa_decode(r: int, m: int, y: np.ndarray, cfg: RpaConfig = RpaConfig(),
               proj_subsets=None, stats=None):
    """Iterative projection-aggregation decoding of RM(r, m).

    proj_subsets optionally restricts the projections used at each
    recursion level (a dict keyed by the level's m). Returns
    (codeword, iterations_at_top_level).
    """
    if r < 1:
        raise ConfigurationError("RPA needs r >= 1")
    y = np.asarray(y, dtype=np.float64)
    if stats is None:
        stats = {}
    stats.setdefault("outer_iters", 0)
    stats.setdefault("projections", 0)

    if r == 1:
        return fht_ml_decode(y), 0

    pset = _projection_set(m)
    entries = pset.entries
    if proj_subsets is not None and m in proj_subsets:
        entries = entries[np.asarray(proj_subsets[m], dtype=np.int64)]
    n = 1 << m
    n_proj = entries.shape[0]
    max_iters = ceil(m / 2)
    iters = 0
    for it in range(max_iters):
        iters = it + 1
        a = y[entries[:, :, 0]]
        b = y[entries[:, :, 1]]
        y_proj = project_pair(a, b, exact=cfg.use_exact_projection)
        if r - 1 == 1:
            x_sub = _fht_ml_batch(y_proj)
        else:
            x_sub = np.empty_like(y_proj, dtype=np.uint8)
            for j in range(n_proj):
                x_sub[j], _ = rpa_decode(r - 1, m - 1, y_proj[j], cfg,
                                         proj_subsets=proj_subsets, stats=stats)
        sgn = 1.0 - 2.0 * x_sub.astype(np.float64)
        y_agg = np.zeros(n, dtype=np.float64)
        np.add.at(y_agg, entries[:, :, 0].ravel(), (sgn * b).ravel())
        np.add.at(y_agg, entries[:, :, 1].ravel(), (sgn * a).ravel())
        y_agg /= n - 1
        stats["projections"] += n_proj
        if np.all(np.abs(y_agg - y) <= cfg.delta * np.abs(y)) or it == max_iters - 1:
            y = y_agg
            break
        y = y_agg
    stats["outer_iters"] = max(stats["outer_iters"], iters)
    return (y < 0).astype(np.uint8), iters


def srpa_decode(r: int, m: int, y: np.ndarray, cfg: RpaConfig,
                rng: np.random.Generator, full_projections: bool = False):
    """Sparse variant: two decoders on disjoint random quarters.

    Each instance draws, per recursion level, a quarter of that level's
    projections (without replacement, disjoint between the instances,
    fixed for the whole frame). The output with the larger bipolar
    correlation against the input wins.
    """
    if r < 1:
        raise ConfigurationError("SRPA needs r >= 1")
    if (1 << m) - 1 < 8:
        raise ConfigurationError("too few projections to split into quarters")
    y = np.asarray(y, dtype=np.float64)

    if full_projections:
        subsets_a = subsets_b = None
    else:
        subsets_a, subsets_b = {}, {}
        for level_m in range(m, m - (r - 1), -1):
            total = (1 << level_m) - 1
            q = ceil(total / 4)
            shuffled = rng.permutation(total)
            subsets_a[level_m] = np.sort(shuffled[:q])
            subsets_b[level_m] = np.sort(shuffled[q:2 * q])

    cw_a, _ = rpa_decode(r, m, y, cfg, proj_subsets=subsets_a)
    cw_b, _ = rpa_decode(r, m, y, cfg, proj_subsets=subsets_b)
    corr_a = float(np.sum((1.0 - 2.0 * cw_a) * y))
    corr_b = float(np.sum((1.0 - 2.0 * cw_b) * y))
    return cw_a if corr_a >= corr_b else cw_b
