"""The full symmetry group of RM codes: affine index permutations.

An element (A, b) with A invertible over GF(2) acts on bit indices by
i -> A.bits(i) xor b, read LSB-first. Every such map sends RM(r, m) to
itself, so decoding a permuted LLR vector and un-permuting the hard
output is always legal at node level.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class InternalError(RuntimeError):
    pass


@lru_cache(maxsize=16)
def _bit_table(m: int):
    n = 1 << m
    bits = ((np.arange(n)[:, None] >> np.arange(m)) & 1).astype(np.int64)
    weights = (1 << np.arange(m)).astype(np.int64)
    return bits, weights


def _rows_to_masks(a: np.ndarray):
    m = a.shape[0]
    weights = 1 << np.arange(m, dtype=np.int64)
    return [int(np.sum(a[r] * weights)) for r in range(m)]


def _masks_invertible(rows, m: int) -> bool:
    """Gaussian elimination on row bitmasks (plain ints, no copies kept)."""
    rows = list(rows)
    for col in range(m):
        pivot = None
        for i in range(col, m):
            if rows[i] >> col & 1:
                pivot = i
                break
        if pivot is None:
            return False
        rows[col], rows[pivot] = rows[pivot], rows[col]
        rc = rows[col]
        for i in range(m):
            if i != col and (rows[i] >> col & 1):
                rows[i] ^= rc
    return True


def gf2_invertible(a: np.ndarray) -> bool:
    a = np.asarray(a, dtype=np.uint8)
    return _masks_invertible(_rows_to_masks(a), a.shape[0])


def gf2_inverse(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    m = a.shape[0]
    aug = np.concatenate([a.copy(), np.eye(m, dtype=np.uint8)], axis=1)
    for col in range(m):
        pivot = col + int(np.argmax(aug[col:, col]))
        if aug[pivot, col] == 0:
            raise InternalError("matrix not invertible over GF(2)")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        for i in range(m):
            if i != col and aug[i, col]:
                aug[i] ^= aug[col]
    return aug[:, m:]


class AffinePermutation:
    """Immutable element (A, b); index maps are precomputed on demand."""

    __slots__ = ("a", "b", "m", "_perm", "_inv")

    def __init__(self, a: np.ndarray, b: np.ndarray):
        self.a = np.asarray(a, dtype=np.uint8)
        self.b = np.asarray(b, dtype=np.uint8)
        self.m = self.a.shape[0]
        if self.a.shape != (self.m, self.m) or self.b.shape != (self.m,):
            raise ValueError("shape mismatch between A and b")
        self._perm = None
        self._inv = None

    @classmethod
    def identity(cls, m: int) -> "AffinePermutation":
        return cls(np.eye(m, dtype=np.uint8), np.zeros(m, dtype=np.uint8))

    @property
    def perm(self) -> np.ndarray:
        """sigma as an index array: index i maps to perm[i]."""
        if self._perm is None:
            bits, weights = _bit_table(self.m)
            out_bits = (bits @ self.a.T.astype(np.int64)) & 1
            sigma = out_bits @ weights ^ int(self.b.astype(np.int64) @ weights)
            self._perm = sigma.astype(np.int64)
        return self._perm

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            inv = np.empty_like(self.perm)
            inv[self.perm] = np.arange(self.perm.shape[0])
            self._inv = inv
        return self._inv

    def inverse(self) -> "AffinePermutation":
        a_inv = gf2_inverse(self.a)
        return AffinePermutation(a_inv, a_inv @ self.b % 2)

    def compose(self, first: "AffinePermutation") -> "AffinePermutation":
        """The map applying `first`, then self."""
        return AffinePermutation(self.a @ first.a % 2, (self.a @ first.b + self.b) % 2)

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.m, dtype=np.uint8)) and not self.b.any()


def _masks_to_matrix(masks, m: int) -> np.ndarray:
    arr = np.asarray(masks, dtype=np.int64)
    return ((arr[:, None] >> np.arange(m)) & 1).astype(np.uint8)


def sample_affine(m: int, rng: np.random.Generator) -> AffinePermutation:
    """Uniform over the full symmetry group, by rejection on A.

    A uniform bit matrix is invertible with probability prod(1 - 2^-k),
    about 0.289, so a few redraws suffice. Rows are drawn as bitmask
    integers to keep the elimination test cheap.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    while True:
        masks = [int(x) for x in rng.integers(0, 1 << m, size=m, dtype=np.int64)]
        if _masks_invertible(masks, m):
            break
    b_bits = ((int(rng.integers(0, 1 << m)) >> np.arange(m)) & 1).astype(np.uint8)
    return AffinePermutation(_masks_to_matrix(masks, m), b_bits)


def sample_affine_batch(m: int, count: int, rng: np.random.Generator):
    """Draw several group elements with amortized generator calls."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = []
    while len(out) < count:
        todo = count - len(out)
        attempts = 4 * todo + 4
        masks = rng.integers(0, 1 << m, size=(attempts, m), dtype=np.int64)
        shifts = rng.integers(0, 1 << m, size=attempts, dtype=np.int64)
        for t in range(attempts):
            row = [int(x) for x in masks[t]]
            if _masks_invertible(row, m):
                b_bits = ((int(shifts[t]) >> np.arange(m)) & 1).astype(np.uint8)
                out.append(AffinePermutation(_masks_to_matrix(row, m), b_bits))
                if len(out) == count:
                    break
    return out


def apply_perm(perm: AffinePermutation, v: np.ndarray) -> np.ndarray:
    """Move coordinate i to sigma(i): out[sigma] = v."""
    v = np.asarray(v)
    if v.shape[-1] != perm.perm.shape[0]:
        raise ValueError("vector length does not match the permutation domain")
    return v[..., perm.inv]


def apply_perm_inverse(perm: AffinePermutation, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[-1] != perm.perm.shape[0]:
        raise ValueError("vector length does not match the permutation domain")
    return v[..., perm.perm]


class PermRecord:
    """Per-path log of permutations applied at tree nodes; entries are
    consumed when the hard output is re-permuted."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        self.entries = dict(entries) if entries else {}

    def copy(self) -> "PermRecord":
        return PermRecord(self.entries)

    def push(self, key, perm: AffinePermutation):
        self.entries[key] = perm

    def pop(self, key) -> AffinePermutation:
        try:
            return self.entries.pop(key)
        except KeyError:
            raise InternalError(f"no permutation recorded for node {key!r}") from None


def unpermute_output(beta: np.ndarray, record: PermRecord, key) -> np.ndarray:
    """Undo the permutation recorded at `key`; the entry is consumed."""
    perm = record.pop(key)
    return apply_perm_inverse(perm, beta)


def permutation_extend(alphas: np.ndarray, pms: np.ndarray, L: int,
                       rng: np.random.Generator, sampler=None):
    """Path extension in the permutation domain.

    Draws two fresh permutations per active path (2P trials, trial t
    permuting path t mod P), scores each by the reliability of the
    would-be left child, lm = sum |f(permuted alpha)|, and keeps the L
    largest (ties toward the lower trial index). Path metrics are
    untouched; selection is by lm only.

    Returns (permuted_alphas, pms, parent_index, perms).
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.float64))
    p, n = alphas.shape
    m = n.bit_length() - 1
    half = n >> 1

    trials = 2 * p
    if sampler is not None:
        perms = [sampler() for _ in range(trials)]
    else:
        perms = sample_affine_batch(m, trials, rng)
    src = np.arange(trials) % p
    inv_all = np.stack([perm.inv for perm in perms])
    permuted = alphas[src[:, None], inv_all]
    lo, hi = permuted[:, :half], permuted[:, half:]
    lm = np.sum(np.minimum(np.abs(lo), np.abs(hi)), axis=1)
    order = np.lexsort((np.arange(trials), -lm))[: min(L, trials)]
    parent = src[order].astype(np.int64)
    pms = np.asarray(pms, dtype=np.float64)[parent]
    return permuted[order], pms, parent, [perms[t] for t in order]
