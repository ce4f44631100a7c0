"""SC kernels and list-decoding path extension.

All kernels act on arrays whose leading axis enumerates the active
decoding paths. Pruning returns a parent-index array so callers can
re-align any per-path state they hold (copy on fork). Hard decisions
use sgn(0) = +1: a zero LLR decodes to bit 0. All sorts are stable,
with path-metric ties broken parent-first and bit value 0 before 1.
"""

from __future__ import annotations

import numpy as np


def f_op(a, b):
    """Min-sum check update: min(|a|,|b|) * sgn(a) * sgn(b), sgn(0) = +1."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sign = np.where(a < 0, -1.0, 1.0) * np.where(b < 0, -1.0, 1.0)
    return sign * np.minimum(np.abs(a), np.abs(b))


def g_op(a, b, c):
    """Variable update: b + (1 - 2c) * a for hard bit c."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return b + (1.0 - 2.0 * np.asarray(c, dtype=np.float64)) * a


def propagate_hard(beta_left: np.ndarray, beta_right: np.ndarray) -> np.ndarray:
    """Combine child hard decisions into the parent span.

    Lower half gets left xor right, upper half carries right through,
    which is the per-PE rule applied across a whole span.
    """
    return np.concatenate([beta_left ^ beta_right, beta_right], axis=-1)


def hard_decision(alpha) -> np.ndarray:
    return (np.asarray(alpha) < 0).astype(np.uint8)


def extend_bit(alpha_bit: np.ndarray, pms: np.ndarray, L: int, frozen: bool = False):
    """Fork every path on one decoded bit and prune to the L best.

    The fork disagreeing with the LLR sign pays |alpha|. Candidates are
    laid out parent-major with bit 0 before bit 1, so the stable sort
    implements the documented tie rule. Frozen bits do not fork; they
    pay the penalty whenever the LLR votes for 1.

    Returns (bits, pms, parent_index).
    """
    alpha_bit = np.asarray(alpha_bit, dtype=np.float64)
    pms = np.asarray(pms, dtype=np.float64)
    p = alpha_bit.shape[0]
    mag = np.abs(alpha_bit)
    if frozen:
        return (np.zeros(p, dtype=np.uint8),
                pms + np.where(alpha_bit < 0, mag, 0.0),
                np.arange(p))
    pm0 = pms + np.where(alpha_bit < 0, mag, 0.0)   # guess 0
    pm1 = pms + np.where(alpha_bit < 0, 0.0, mag)   # guess 1
    pm_cand = np.stack([pm0, pm1], axis=1).ravel()
    order = np.argsort(pm_cand, kind="stable")[: min(L, 2 * p)]
    return (order % 2).astype(np.uint8), pm_cand[order], order // 2


def spc_decode_list(alphas: np.ndarray, pms: np.ndarray, L: int):
    """List-decode a single-parity-check span without visiting its leaves.

    Per path: sort the span by |LLR|, charge |alpha_min| when the sign
    parity is odd, then run tau = min(L, N) splittings over the next
    least reliable positions, keeping the running parity so each flip
    either adds or refunds the alpha_min correction. The least reliable
    bit is finally forced so the span parity is even.

    Returns (beta_span, pms, parent_index).
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.float64))
    p, n = alphas.shape
    pms = np.asarray(pms, dtype=np.float64).copy()
    mag = np.abs(alphas)
    order = np.argsort(mag, axis=1, kind="stable")
    sign_bits = hard_decision(alphas)
    parity = np.bitwise_xor.reduce(sign_bits, axis=1)

    a_min = mag[np.arange(p), order[:, 0]]
    pms = pms + np.where(parity == 1, a_min, 0.0)

    tau = min(L, n)
    if tau > n - 1:
        tau = n - 1  # splits cover positions after the least reliable one

    parent = np.arange(p)
    flips = np.zeros((p, n), dtype=np.uint8)
    par = parity.astype(np.float64)
    for j in range(1, tau + 1):
        pos = order[parent, j]
        a_j = mag[parent, pos]
        a_m = mag[parent, order[parent, 0]]
        pm_keep = pms
        pm_flip = pms + a_j + (1.0 - 2.0 * par) * a_m
        cand_pm = np.stack([pm_keep, pm_flip], axis=1).ravel()
        sel = np.argsort(cand_pm, kind="stable")[: min(L, cand_pm.shape[0])]
        which = sel % 2
        src = sel // 2
        pms = cand_pm[sel]
        flips = flips[src]
        flip_rows = np.flatnonzero(which == 1)
        flips[flip_rows, order[parent[src[flip_rows]], j]] ^= 1
        par = np.where(which == 1, 1.0 - par[src], par[src])
        parent = parent[src]

    beta = sign_bits[parent] ^ flips
    least = order[parent, 0]
    total = np.bitwise_xor.reduce(beta, axis=1)
    rows = np.arange(beta.shape[0])
    beta[rows, least] ^= total  # force even parity on the span
    return beta, pms, parent
