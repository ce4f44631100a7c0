"""Operation counting, latency steps, and memory modeling.

Two layers coexist on purpose. `charge` applies the worst-case
per-node formulas (the normalized complexity tables) and is what unit
tests pin down. `complexity_model` / `latency_model` walk a decode
plan and produce end-to-end figures under the conventions that
reproduce the published totals: transform spans are charged per path
(transform plus selection) plus one pooled merge sort, permutation
extension is reported separately and excluded from the headline count,
and reductions cost one time step while merge sorts cost log2(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np

from .rm_core import CodeSpec, ConfigurationError, NodeSpan

KB = 1024 * 8  # bits per kilobyte at 1 KB = 1024 B


def merge_sort_steps(n: int) -> int:
    """Time steps to merge-sort n elements."""
    return int(ceil(log2(n))) if n > 1 else 0


@dataclass
class ComplexityLedger:
    additions: int = 0
    comparisons: int = 0
    time_steps: int = 0
    per_node_log: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.additions + self.comparisons

    def merge(self, other: "ComplexityLedger") -> "ComplexityLedger":
        return ComplexityLedger(self.additions + other.additions,
                                self.comparisons + other.comparisons,
                                self.time_steps + other.time_steps,
                                self.per_node_log + other.per_node_log)


def node_charge(kind: str, m: int, L: int) -> tuple:
    """Worst-case (additions, comparisons) for one span, per the
    normalized per-node complexity tables.

    Kinds: f, g, fht_node, spc_node, perm_ext.
    """
    n = 1 << m
    if kind in ("f", "g"):
        adds = L * (n >> 1) if kind == "g" else 0
        comps = L * (n >> 1) if kind == "f" else 0
        return adds, comps
    if kind == "fht_node":
        if L == 1:
            return m * n, n
        lg = log2(L)
        adds = L * m * n + L * L * n
        comps = min(L * m * n, L * L * n) + int(2 * L * L * lg)
        return adds, comps
    if kind == "spc_node":
        if L == 1:
            return 0, n
        tau = min(L, n)
        lg = log2(L)
        adds = L * (1 + 2 * tau)
        comps = min(L * m * n, L * L * n) + int(2 * tau * L * (1 + lg))
        return adds, comps
    if kind == "perm_ext":
        # two trials per path: f evaluations, reliability sums, one sort
        half = n >> 1
        adds = 2 * L * half
        comps = 2 * L * half + int(2 * (2 * L) * log2(2 * L))
        return adds, comps
    raise ConfigurationError(f"unknown charge kind {kind!r}")


def charge(ledger: ComplexityLedger, kind: str, node, L: int) -> None:
    """Apply one span's worst-case charge; `node` is a NodeSpan or the
    span's log-size m."""
    m = node.m_node if isinstance(node, NodeSpan) else int(node)
    adds, comps = node_charge(kind, m, L)
    ledger.additions += adds
    ledger.comparisons += comps
    if ledger.per_node_log is not None:
        ledger.per_node_log.append((node, kind, adds + comps))


# ---------------------------------------------------------------- plans

def plan_visits(spec: CodeSpec, use_fht: bool, use_spc: bool,
                permutations: bool) -> list:
    """Node visits in decode order: list of (kind, m) tuples."""
    frozen_mask = np.zeros(spec.N, dtype=bool)
    frozen_mask[list(spec.frozen_set)] = True
    visits = []
    state = {"perm": permutations}

    def rec(r, m, offset):
        if use_fht and r == 1:
            state["perm"] = False
            visits.append(("fht", m))
            return
        if use_spc and m >= 1 and r == m - 1:
            visits.append(("spc", m))
            return
        if m == 0:
            visits.append(("leaf_frozen" if frozen_mask[offset] else "leaf_info", 0))
            return
        if permutations and state["perm"] and 1 < r < m - 1:
            visits.append(("perm", m))
        visits.append(("f", m))
        rec(r - 1, m - 1, offset)
        visits.append(("g", m))
        rec(r, m - 1, offset + (1 << (m - 1)))

    rec(spec.r, spec.m, 0)
    return visits


_ALGO_FLAGS = {
    "SC": (False, False, False),
    "SCL": (False, False, False),
    "FSCL": (False, True, False),
    "FHT-FSC": (True, True, False),
    "FHT-FSCL": (True, True, False),
    "p-FHT-FSCL": (True, True, True),
}


def _visit_ops(kind: str, m: int, L: int, include_perm: bool) -> int:
    """End-to-end operation count for one visit (published-totals
    convention: per-path transform and selection, pooled merge sort)."""
    n = 1 << m
    if kind in ("f", "g"):
        return L * (n >> 1)
    if kind == "fht":
        return L * n * (m + 1) + int(2 * L * L * log2(L))
    if kind == "spc":
        return sum(node_charge("spc_node", m, L))
    if kind == "perm":
        return sum(node_charge("perm_ext", m, L)) if include_perm else 0
    if kind == "leaf_info":
        return L + int(2 * L * log2(2 * L))
    if kind == "leaf_frozen":
        return L
    raise ConfigurationError(f"unknown visit kind {kind!r}")


def _visit_steps(kind: str, m: int, L: int) -> int:
    n = 1 << m
    if kind in ("f", "g"):
        return 1
    if kind == "fht":
        return m + merge_sort_steps(L * min(L, n))
    if kind == "spc":
        if L == 1:
            return m
        tau = min(L, n)
        return m + (tau - 1) + merge_sort_steps(2 * L)
    if kind == "perm":
        return 2 + merge_sort_steps(2 * L)
    if kind == "leaf_info":
        return 0 if L == 1 else 1 + merge_sort_steps(2 * L)
    if kind == "leaf_frozen":
        return 0 if L == 1 else 1
    raise ConfigurationError(f"unknown visit kind {kind!r}")


def latency_model(visits, L: int) -> int:
    """Time steps for a decode trace or plan.

    Hard decisions and XORs are free, one parallel kernel evaluation or
    reduction costs one step, and every merge sort of n elements costs
    log2(n) steps. Entries may carry extra fields beyond (kind, m).
    """
    steps = 0
    for entry in visits:
        kind, m = entry[0], entry[1]
        steps += _visit_steps(kind, m, L)
    return steps


def complexity_model(algorithm: str, r: int, m: int, L: int = 1, M: int = 1,
                     P: int = 1, include_perm: bool = False) -> int:
    """End-to-end modeled operation count for one decoded frame."""
    from .rm_core import build_code
    if algorithm in ("RPA", "SRPA"):
        return (rpa_operations if algorithm == "RPA" else srpa_operations)(r, m)
    if algorithm == "Aut-SSC":
        spec = build_code(r, m)
        return P * (_ssc_operations(spec) + (1 << m)) + (P - 1)
    if algorithm not in _ALGO_FLAGS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")
    use_fht, use_spc, perms = _ALGO_FLAGS[algorithm]
    spec = build_code(r, m)
    visits = plan_visits(spec, use_fht, use_spc, perms)
    eff_l = 1 if algorithm in ("SC", "FHT-FSC") else L
    total = sum(_visit_ops(k, mm, eff_l, include_perm) for k, mm in visits)
    return M * total


def latency_total(algorithm: str, r: int, m: int, L: int = 1, M: int = 1,
                  P: int = 1) -> int:
    """End-to-end modeled decoding latency in time steps."""
    from .rm_core import build_code
    if algorithm in ("RPA", "SRPA"):
        return rpa_time_steps(r, m)
    if algorithm == "Aut-SSC":
        spec = build_code(r, m)
        return _ssc_steps(spec) + merge_sort_steps(P)
    if algorithm not in _ALGO_FLAGS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")
    use_fht, use_spc, perms = _ALGO_FLAGS[algorithm]
    spec = build_code(r, m)
    eff_l = 1 if algorithm in ("SC", "FHT-FSC") else L
    visits = plan_visits(spec, use_fht, use_spc, perms)
    steps = latency_model(visits, eff_l)
    steps += merge_sort_steps(eff_l)  # final best-path selection
    if M > 1:
        steps += merge_sort_steps(M)  # attempts run in parallel
    return steps


# ------------------------------------------------------------- SSC model

def _ssc_walk(spec: CodeSpec):
    visits = []

    def rec(r, m):
        if r < 0 or r == m or r == 0 or (m >= 1 and r == m - 1):
            if r < 0:
                visits.append(("rate0", m))
            elif r == m:
                visits.append(("rate1", m))
            elif r == 0:
                visits.append(("rep", m))
            else:
                visits.append(("spc1", m))
            return
        visits.append(("f", m))
        rec(r - 1, m - 1)
        visits.append(("g", m))
        rec(r, m - 1)

    rec(spec.r, spec.m)
    return visits


def _ssc_operations(spec: CodeSpec) -> int:
    ops = 0
    for kind, m in _ssc_walk(spec):
        n = 1 << m
        if kind in ("f", "g"):
            ops += n >> 1
        elif kind == "rep":
            ops += n - 1
        elif kind == "spc1":
            ops += n
    return ops


def _ssc_steps(spec: CodeSpec) -> int:
    steps = 0
    for kind, m in _ssc_walk(spec):
        if kind in ("f", "g", "rep", "spc1"):
            steps += 1
    return steps


# ------------------------------------------------------------- RPA model

def rpa_operations(r: int, m: int) -> int:
    """Worst-case additions plus comparisons for one RPA frame.

    Per outer iteration and projection: 4 adds per projected pair,
    one add per aggregation update; the order-1 base costs m 2^m adds
    and 2^m comparisons; the termination check costs 2^(m+1) ops.
    """
    n = 1 << m
    if r == 1:
        return m * n + n
    per_proj = 2 * n + rpa_operations(r - 1, m - 1) + n
    return ceil(m / 2) * ((n - 1) * per_proj + 2 * n)


def srpa_operations(r: int, m: int) -> int:
    def branch(r, m):
        n = 1 << m
        if r == 1:
            return m * n + n
        q = ceil((n - 1) / 4)
        per_proj = 2 * n + branch(r - 1, m - 1) + n
        return ceil(m / 2) * (q * per_proj + 2 * n)

    return 2 * branch(r, m)


def rpa_time_steps(r: int, m: int) -> int:
    """Worst-case latency: projections fully parallel, the order-1 base
    charged as its serial additions, 2 steps of per-iteration overhead."""
    if r == 1:
        return m * (1 << m)
    return ceil(m / 2) * (rpa_time_steps(r - 1, m - 1) + 2)


def _rpa_words(r: int, m: int, quarter: bool) -> int:
    n = 1 << m
    if r == 1:
        return n
    count = ceil((n - 1) / 4) if quarter else n - 1
    inner = max(0, _rpa_words(r - 1, m - 1, quarter) - (n >> 1))
    return 2 * n + count * ((n >> 1) + inner)


# ---------------------------------------------------------- memory model

def memory_model(algorithm: str, N: int, L: int = 1, M: int = 1, P: int = 1,
                 Q: int = 32, r: int = None) -> int:
    """Memory requirement in bits (Q-bit LLR and path-metric words)."""
    if algorithm in ("SC", "FHT-FSC"):
        return (2 * N - 1) * Q + N
    if algorithm in ("SCL", "FSCL", "FHT-FSCL"):
        return N * (L + 1) * Q + 2 * L * Q + 2 * N * L
    if algorithm == "p-FHT-FSCL":
        if L == 1 and M == 1:
            return (2 * N + 1) * Q + N
        if L == 1:
            return (N + M * (N + 1)) * Q + M * N
        if M == 1:
            return N * (L + 1) * Q + 2 * L * Q + 2 * N * L
        return N * (L * M + 1) * Q + 2 * M * L * Q + 2 * M * N * L
    if algorithm == "Aut-SSC":
        return (P + 1) * N * Q + P * N
    if algorithm in ("RPA", "SRPA"):
        if r is None:
            raise ConfigurationError("RPA memory model needs the code order r")
        m = N.bit_length() - 1
        if algorithm == "RPA":
            return Q * _rpa_words(r, m, quarter=False) + N
        return 2 * Q * _rpa_words(r, m, quarter=True) + N
    raise ConfigurationError(f"unknown algorithm {algorithm!r}")


def memory_kb(bits: int) -> float:
    return bits / KB


def format_kb(bits: int) -> str:
    return f"{memory_kb(bits):.2f}"
