import numpy as np
import pytest
from math import comb

from rmworkbench import rm_core
from rmworkbench.rm_core import (CodeSpec, ConfigurationError, NodeSpan,
                                 build_code, encode, is_codeword)


def test_rm13_construction():
    spec = build_code(1, 3)
    assert (spec.N, spec.K, spec.d) == (8, 4, 4)
    assert spec.info_set == (3, 5, 6, 7)


def test_rm29_dimension():
    spec = build_code(2, 9)
    assert (spec.N, spec.K) == (512, 46)


def test_rm48_dimension():
    spec = build_code(4, 8)
    assert (spec.N, spec.K) == (256, 163)
    assert spec.K == sum(comb(8, i) for i in range(5))


@pytest.mark.parametrize("r,m", [(0, 3), (3, 3), (5, 4), (1, 15), (1, 1)])
def test_build_code_rejects_bad_shapes(r, m):
    with pytest.raises(ConfigurationError):
        build_code(r, m)


def test_partition_and_dimension_sweep():
    for m in range(2, 13):
        for r in range(1, m):
            spec = build_code(r, m)
            assert len(spec.frozen_set) + len(spec.info_set) == 1 << m
            assert len(spec.info_set) == sum(comb(m, i) for i in range(r + 1))
            assert set(spec.frozen_set).isdisjoint(spec.info_set)
            assert spec.d == 1 << (m - r)


def test_row_weights_are_popcount_powers():
    spec = build_code(2, 6)
    for i in range(spec.N):
        assert spec.row_weights[i] == 2 ** bin(i).count("1")


def test_encode_zero_and_m1_rule():
    spec = build_code(1, 2)
    assert np.array_equal(encode(spec, np.zeros(4, dtype=np.uint8)), np.zeros(4))
    # one butterfly stage on a pair: (u0 ^ u1, u1)
    pair = rm_core.polar_transform(np.array([1, 1], dtype=np.uint8))
    assert np.array_equal(pair, [0, 1])


def test_encode_rejects_frozen_violation():
    spec = build_code(1, 3)
    u = np.zeros(8, dtype=np.uint8)
    u[0] = 1
    with pytest.raises(ValueError):
        encode(spec, u)


def test_encode_linearity_and_membership():
    rng = np.random.default_rng(42)
    spec = build_code(2, 5)
    for _ in range(50):
        u = rm_core.random_message(spec, rng)
        v = rm_core.random_message(spec, rng)
        assert np.array_equal(encode(spec, u ^ v), encode(spec, u) ^ encode(spec, v))
        assert is_codeword(spec, encode(spec, u))


def test_is_codeword_rejects_low_weight():
    spec = build_code(1, 3)
    x = np.zeros(8, dtype=np.uint8)
    x[4] = 1
    assert not is_codeword(spec, x)
    with pytest.raises(ValueError):
        is_codeword(spec, np.zeros(7, dtype=np.uint8))


def test_polar_transform_is_involution():
    rng = np.random.default_rng(0)
    v = rng.integers(0, 2, size=64, dtype=np.uint8)
    assert np.array_equal(rm_core.polar_transform(rm_core.polar_transform(v)), v)


def test_node_span_invariants():
    span = NodeSpan(stage=3, i_min=8, i_max=15, r_node=1, m_node=3)
    assert span.size == 8
    with pytest.raises(ValueError):
        NodeSpan(stage=3, i_min=0, i_max=6, r_node=1, m_node=3)
    with pytest.raises(ValueError):
        NodeSpan(stage=2, i_min=0, i_max=3, r_node=1, m_node=3)
