"""Reed-Muller code construction, encoding, and membership checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

MAX_M = 14


class ConfigurationError(ValueError):
    """Unsupported code shape or invalid decoder/channel parameter."""


@dataclass(frozen=True)
class CodeSpec:
    """One RM(r, m) instance. Immutable, safe to share between decoders."""

    r: int
    m: int
    N: int
    K: int
    d: int
    frozen_set: tuple
    info_set: tuple
    row_weights: np.ndarray

    @property
    def rate(self) -> float:
        return self.K / self.N

    def __repr__(self):
        return f"CodeSpec(RM({self.r},{self.m}), N={self.N}, K={self.K}, d={self.d})"


@dataclass(frozen=True)
class NodeSpan:
    """A constituent-code span on the binary decoding tree.

    The span covers bit indices [i_min, i_max] at tree stage `stage`,
    where the subcode is RM(r_node, m_node) and m_node == stage.
    """

    stage: int
    i_min: int
    i_max: int
    r_node: int
    m_node: int

    def __post_init__(self):
        if self.i_max - self.i_min != (1 << self.stage) - 1:
            raise ValueError("span width must be 2**stage")
        if self.m_node != self.stage:
            raise ValueError("m_node must equal the tree stage")
        if self.i_min < 0 or self.i_min >= self.i_max:
            raise ValueError("need 0 <= i_min < i_max")

    @property
    def size(self) -> int:
        return 1 << self.stage


def build_code(r: int, m: int) -> CodeSpec:
    """Construct RM(r, m) with the row-weight frozen set.

    Row i of the generator has weight 2**popcount(i); positions whose
    weight falls below the minimum distance d = 2**(m-r) are frozen.
    """
    if not isinstance(r, int) or not isinstance(m, int):
        raise ConfigurationError("r and m must be integers")
    if m < 2 or m > MAX_M:
        raise ConfigurationError(f"m={m} outside supported range [2, {MAX_M}]")
    if r < 1 or r > m - 1:
        raise ConfigurationError(f"r={r} must satisfy 1 <= r <= m-1")
    n = 1 << m
    idx = np.arange(n, dtype=np.uint32)
    weights = (np.int64(1) << popcount(idx)).astype(np.int64)
    d = 1 << (m - r)
    frozen = np.flatnonzero(weights < d)
    info = np.flatnonzero(weights >= d)
    k = sum(comb(m, i) for i in range(r + 1))
    assert info.size == k
    return CodeSpec(
        r=r,
        m=m,
        N=n,
        K=k,
        d=d,
        frozen_set=tuple(int(i) for i in frozen),
        info_set=tuple(int(i) for i in info),
        row_weights=weights,
    )


def popcount(x) -> np.ndarray:
    return np.bitwise_count(np.asarray(x, dtype=np.uint32))


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Apply the GF(2) butterfly network over the last axis (self-inverse).

    Equivalent to multiplying by the m-fold Kronecker power of [[1,0],[1,1]]
    in natural bit order, at O(N log N) XOR cost.
    """
    v = np.array(u, dtype=np.uint8)
    n = v.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    m = n.bit_length() - 1
    lead = v.shape[:-1]
    for t in range(m):
        step = 1 << t
        view = v.reshape(lead + (n // (2 * step), 2, step))
        view[..., 0, :] ^= view[..., 1, :]
    return v.reshape(lead + (n,))


def encode(spec: CodeSpec, u: np.ndarray) -> np.ndarray:
    """Encode a message word (frozen positions must be zero)."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != spec.N:
        raise ValueError(f"message length {u.shape[-1]} != N={spec.N}")
    frozen = list(spec.frozen_set)
    if np.any(u[..., frozen]):
        raise ValueError("nonzero value at a frozen position")
    return polar_transform(u)


@lru_cache(maxsize=32)
def _info_basis(r: int, m: int):
    """Row-reduced GF(2) basis (bit-packed ints) of the info rows.

    Rows are built directly from the subset rule: generator row i has
    support {k : k AND NOT i == 0}, independently of the butterfly.
    """
    spec = build_code(r, m)
    ks = np.arange(spec.N, dtype=np.int64)
    basis = []  # pivot-sorted list of packed rows
    for i in spec.info_set:
        support = np.flatnonzero((ks & ~np.int64(i)) == 0)
        row = 0
        for k in support:
            row |= 1 << int(k)
        basis.append(row)
    return _gf2_reduce(basis)


def _gf2_reduce(rows):
    """Reduce packed GF(2) rows to echelon form keyed by leading bit."""
    pivots = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead in pivots:
                row ^= pivots[lead]
            else:
                pivots[lead] = row
                break
    return pivots


def is_codeword(spec: CodeSpec, x: np.ndarray) -> bool:
    """True iff x lies in the GF(2) span of the info rows of RM(r, m)."""
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (spec.N,):
        raise ValueError(f"vector length {x.shape} != ({spec.N},)")
    packed = 0
    for k in np.flatnonzero(x):
        packed |= 1 << int(k)
    pivots = _info_basis(spec.r, spec.m)
    while packed:
        lead = packed.bit_length() - 1
        if lead not in pivots:
            return False
        packed ^= pivots[lead]
    return True


def random_message(spec: CodeSpec, rng: np.random.Generator) -> np.ndarray:
    """Uniform message word with zeros at frozen positions."""
    u = np.zeros(spec.N, dtype=np.uint8)
    u[list(spec.info_set)] = rng.integers(0, 2, size=spec.K, dtype=np.uint8)
    return u
