"""First-order RM decoding with the fast Hadamard transform.

One transform scores all sign classes of RM(1, s) at once: bin i of the
transformed vector is the correlation of the input with a fixed bipolar
codeword row H[i], and the two codewords of that bin are (1 -+ H[i]) / 2.
The bin-to-message mapping was fixed empirically against an exhaustive
correlation oracle and is frozen here: the message places the binary
digits of (2^s - 1 - i), most significant first, into the ascending
info positions, and the sign bit of bin i into position 2^s - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class FhtCandidate:
    codeword: np.ndarray
    pm: float
    source_path: int
    bin_index: int


def fht_transform(v: np.ndarray) -> np.ndarray:
    """Butterfly transform over the last axis.

    Per pair (lo, hi) at distance half-block: lo' = hi - lo, hi' = hi + lo.
    Equals multiplication by the signed Hadamard matrix H_s frozen in
    hadamard_matrix().
    """
    w = np.array(v, dtype=np.float64)
    n = w.shape[-1]
    if n & (n - 1) or n == 0:
        raise ValueError("length must be a power of two")
    s = n.bit_length() - 1
    lead = w.shape[:-1]
    for t in range(s):
        half = 1 << (s - t - 1)
        view = w.reshape(lead + (1 << t, 2, half))
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] = hi - lo
        view[..., 1, :] = hi + lo
    return w.reshape(lead + (n,))


@lru_cache(maxsize=16)
def hadamard_matrix(s: int) -> np.ndarray:
    """H_s obtained once by probing fht_transform with unit vectors."""
    n = 1 << s
    return fht_transform(np.eye(n)).T.astype(np.int64)


@lru_cache(maxsize=16)
def _bin_codewords(s: int) -> np.ndarray:
    """Codeword table: row i is the RM(1, s) word whose bipolar form is H_s[i]."""
    h = hadamard_matrix(s)
    return ((1 - h) // 2).astype(np.uint8)


def bin_message(s: int, bin_index: int, sign_bit: int) -> np.ndarray:
    """Message word for one FHT bin (frozen mapping, see module docstring)."""
    n = 1 << s
    u = np.zeros(n, dtype=np.uint8)
    a = (n - 1) - bin_index
    for j in range(s):
        u[(n - 1) ^ (1 << j)] = (a >> j) & 1
    u[n - 1] = sign_bit
    return u


def fht_candidates(alpha: np.ndarray, pm_in: float, L: int) -> list:
    """The min(L, 2^s) best RM(1, s) candidates for one path.

    Path metric uses the transform directly:
    pm_out = pm_in + (sum|alpha| - |alpha_fht[i*]|) / 2.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    alpha = np.asarray(alpha, dtype=np.float64)
    n = alpha.shape[0]
    s = n.bit_length() - 1
    w = fht_transform(alpha)
    absw = np.abs(w)
    llr_abs = float(np.sum(np.abs(alpha)))
    order = np.argsort(-absw, kind="stable")[: min(L, n)]
    table = _bin_codewords(s)
    out = []
    for b in order:
        sign_bit = 1 if w[b] < 0 else 0
        cw = table[b] ^ np.uint8(sign_bit)
        pm = pm_in + 0.5 * (llr_abs - absw[b])
        out.append(FhtCandidate(codeword=cw, pm=float(pm), source_path=0, bin_index=int(b)))
    return out


def fhtl(alphas: np.ndarray, pms: np.ndarray, L: int):
    """FHT list step across paths.

    Pools the per-path candidate sets, merge-sorts by path metric
    (ties by source path, then bin index) and keeps the L best.
    Returns (codewords, pms, parent_index, bin_index).
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.float64))
    p, n = alphas.shape
    s = n.bit_length() - 1
    k = min(L, n)
    w = fht_transform(alphas)
    absw = np.abs(w)
    llr_abs = np.sum(np.abs(alphas), axis=1)
    # stable argsort on -|w| ties toward the lower bin index
    sel = np.argsort(-absw, axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(p), k)
    bins = sel.ravel()
    pm_pool = np.asarray(pms, dtype=np.float64)[rows] + 0.5 * (llr_abs[rows] - absw[rows, bins])
    order = np.lexsort((bins, rows, pm_pool))[: min(L, p * k)]
    src = rows[order]
    win_bins = bins[order]
    sign_bits = (w[src, win_bins] < 0).astype(np.uint8)
    table = _bin_codewords(s)
    codewords = table[win_bins] ^ sign_bits[:, None]
    return codewords, pm_pool[order], src, win_bins
