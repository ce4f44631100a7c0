import numpy as np
import pytest
from math import ceil, log2

from rmworkbench import accounting, rm_core
from rmworkbench.accounting import (ComplexityLedger, charge, complexity_model,
                                    format_kb, latency_model, latency_total,
                                    memory_kb, memory_model, merge_sort_steps,
                                    node_charge, plan_visits, rpa_operations,
                                    rpa_time_steps)
from rmworkbench.rm_core import ConfigurationError


def test_charge_examples():
    assert sum(node_charge("f", 5, 4)) == 64
    assert sum(node_charge("fht_node", 3, 1)) == 32
    assert sum(node_charge("spc_node", 4, 2)) == 90


def test_charges_match_table_formulas_randomized():
    rng = np.random.default_rng(0)
    for _ in range(300):
        m = int(rng.integers(2, 10))
        L = int(rng.integers(2, 33))
        n = 1 << m
        lg = log2(L)
        assert sum(node_charge("f", m, L)) == L * n // 2
        assert sum(node_charge("g", m, L)) == L * n // 2
        expect_fht = (L * m * n + min(L * m * n, L * L * n)
                      + int(2 * L * L * lg) + L * L * n)
        assert sum(node_charge("fht_node", m, L)) == expect_fht
        tau = min(L, n)
        expect_spc = (min(L * m * n, L * L * n)
                      + L * (1 + 2 * tau) + int(2 * tau * L * (1 + lg)))
        assert sum(node_charge("spc_node", m, L)) == expect_spc
        # L = 1 columns
        assert sum(node_charge("f", m, 1)) == n // 2
        assert sum(node_charge("fht_node", m, 1)) == n * (m + 1)
        assert sum(node_charge("spc_node", m, 1)) == n


def test_ledger_accumulates_and_merges():
    led = ComplexityLedger()
    charge(led, "f", 5, 4)
    charge(led, "spc_node", rm_core.NodeSpan(stage=4, i_min=0, i_max=15,
                                             r_node=3, m_node=4), 2)
    assert led.total == 64 + 90
    assert led.per_node_log[1][1] == "spc_node"
    other = ComplexityLedger(additions=1, comparisons=2, time_steps=3)
    merged = led.merge(other)
    assert merged.total == led.total + 3
    with pytest.raises(ConfigurationError):
        charge(led, "mystery", 3, 1)


def test_memory_model_reproduces_published_kilobytes():
    q = 32
    cases = [
        ("FHT-FSCL", 512, 32, 1, 1, "70.25"),
        ("p-FHT-FSCL", 512, 4, 1, 1, "10.53"),
        ("p-FHT-FSCL", 256, 1, 25, 1, "26.88"),
        ("p-FHT-FSCL", 512, 1, 100, 1, "208.64"),
        ("p-FHT-FSCL", 512, 4, 20, 1, "172.62"),
    ]
    for algo, n, L, M, P, want in cases:
        bits = memory_model(algo, n, L, M, P, Q=q)
        assert format_kb(bits) == want
    assert memory_model("p-FHT-FSCL", 512, 4) == 86272
    assert memory_model("p-FHT-FSCL", 512, 1, 100) == 1709184
    assert memory_model("p-FHT-FSCL", 512, 4, 20) == 1414144
    assert memory_model("FHT-FSC", 512) == (2 * 512 - 1) * 32 + 512
    assert memory_model("p-FHT-FSCL", 512, 1, 1) == (2 * 512 + 1) * 32 + 512
    assert memory_model("Aut-SSC", 256, P=64) == 65 * 256 * 32 + 64 * 256


def test_memory_model_rejects_unknown():
    with pytest.raises(ConfigurationError):
        memory_model("nope", 64)
    with pytest.raises(ConfigurationError):
        memory_model("RPA", 64)  # needs the order


def test_merge_sort_step_rule():
    assert merge_sort_steps(512) == 9
    assert merge_sort_steps(2) == 1
    assert merge_sort_steps(1) == 0
    assert merge_sort_steps(12) == 4


def test_sc_on_rm11_takes_two_steps():
    visits = [("f", 1), ("leaf_info", 0), ("g", 1), ("leaf_info", 0)]
    assert latency_model(visits, 1) == 2


def test_plan_matches_engine_trace():
    from rmworkbench.top_decoders import fht_fscl_decode, p_fht_fscl, scl_decode
    rng = np.random.default_rng(1)
    for (r, m) in [(2, 5), (3, 6), (2, 6)]:
        spec = rm_core.build_code(r, m)
        alpha = rng.normal(size=spec.N)
        trace = []
        fht_fscl_decode(spec, alpha, 4, trace=trace)
        plan = plan_visits(spec, True, True, False)
        assert [(k, mm) for k, mm, _ in trace] == plan
        trace = []
        p_fht_fscl(spec, alpha, 4, rng, trace=trace)
        plan = plan_visits(spec, True, True, True)
        assert [(k, mm) for k, mm, _ in trace] == plan
    spec = rm_core.build_code(2, 4)
    trace = []
    scl_decode(spec, np.random.default_rng(2).normal(size=16), 2, trace=trace)
    plan = plan_visits(spec, False, False, False)
    assert [(k, mm) for k, mm, _ in trace] == plan


def test_end_to_end_complexity_against_published_totals():
    # headline figure: list-4 decode of the length-512 order-2 code
    ops = complexity_model("p-FHT-FSCL", 2, 9, L=4)
    assert abs(ops - 2.09e4) <= 0.2 * 2.09e4
    # single-list attempts scaled by ensemble size, four published points
    for (r, m, M, want) in [(2, 8, 25, 5.7e4), (3, 8, 100, 2.3e5),
                            (4, 8, 80, 1.7e5), (2, 9, 100, 5.1e5)]:
        got = complexity_model("p-FHT-FSCL", r, m, L=1, M=M)
        assert abs(got - want) <= 0.2 * want, (r, m, got, want)


def test_end_to_end_latency_against_published_totals():
    steps = latency_total("p-FHT-FSCL", 2, 9, L=4)
    assert abs(steps - 78) <= 0.15 * 78
    # the single-list column is reproduced exactly by this model
    assert latency_total("p-FHT-FSCL", 2, 9, L=1, M=100) == 58
    assert latency_total("p-FHT-FSCL", 2, 8, L=1, M=25) == 46


def test_rpa_models_reproduce_published_values():
    assert rpa_time_steps(2, 8) == 3592
    assert rpa_time_steps(3, 8) == 6184
    assert rpa_time_steps(4, 8) == 7816
    assert rpa_time_steps(2, 9) == 10250
    for (r, m, want) in [(2, 8, 1.8e6), (3, 8, 4.3e8), (4, 8, 3.8e10),
                         (2, 9, 9.8e6)]:
        got = rpa_operations(r, m)
        assert abs(got - want) <= 0.05 * want


def test_kb_helper():
    assert memory_kb(8192) == 1.0
    assert format_kb(86272) == "10.53"
