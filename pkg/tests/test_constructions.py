import itertools

import numpy as np
import pytest
from conftest import explicit_generator, gf2_rank
from hypothesis import given
from hypothesis import strategies as st

from gapolar.constructions import (ReliabilityProfile, bhattacharyya_bec, default_hybrid_min_weight,
                                   info_set_from_profile, rm_info_set, rm_polar_hybrid)
from gapolar.core import dmin_upper


def test_bec_n1():
    p = bhattacharyya_bec(1, 0.5)
    assert np.allclose(p.values, [0.75, 0.25])


@pytest.mark.parametrize("n", [0, 3, 7])
def test_bec_extremes(n):
    assert not bhattacharyya_bec(n, 0.0).values.any()
    assert np.all(bhattacharyya_bec(n, 1.0).values == 1.0)


@pytest.mark.parametrize("eps", [-0.1, 1.5])
def test_bec_range(eps):
    with pytest.raises(ValueError):
        bhattacharyya_bec(3, eps)


def _erasure_oracle(N, eps):
    """Exact genie-aided SC erasure probability of every u_i on BEC(eps).

    u_i is lost iff its generator row, restricted to the unerased outputs,
    lies in the span of the later rows restricted the same way.
    """
    G = explicit_generator(N)
    z = np.zeros(N)
    for pattern in itertools.product((0, 1), repeat=N):
        known = np.array(pattern, dtype=bool)
        prob = eps ** (N - known.sum()) * (1 - eps) ** known.sum()
        for i in range(N):
            later = G[i + 1:, known]
            base = gf2_rank(later) if later.size else 0
            with_i = gf2_rank(G[i:, known]) if known.any() else 0
            if with_i == base:
                z[i] += prob
    return z


@pytest.mark.parametrize("N,eps", [(4, 0.3), (8, 0.3), (8, 0.65)])
def test_bec_indexing_matches_erasure_oracle(N, eps):
    n = N.bit_length() - 1
    assert np.allclose(bhattacharyya_bec(n, eps).values, _erasure_oracle(N, eps), atol=1e-12)


@given(st.integers(1, 11), st.floats(0.0, 1.0))
def test_bec_conservation(n, eps):
    v = bhattacharyya_bec(n, eps).values
    assert abs(v.sum() - (1 << n) * eps) <= 1e-12 * (1 << n)
    assert np.all((v >= 0) & (v <= 1))


@given(st.integers(1, 8), st.floats(0.0, 1.0))
def test_bec_multiset_recursion(n, eps):
    prev = bhattacharyya_bec(n - 1, eps).values
    image = np.sort(np.concatenate([prev ** 2, 2 * prev - prev ** 2]))
    assert np.allclose(np.sort(bhattacharyya_bec(n, eps).values), image)


def test_info_set_from_profile_examples():
    c = info_set_from_profile(ReliabilityProfile(np.array([0.75, 0.25])), 1)
    assert list(c.info_set + 1) == [2]
    prof = bhattacharyya_bec(3, 0.4)
    assert info_set_from_profile(prof, 8).k == 8
    flat = ReliabilityProfile(np.full(8, 0.5))
    assert list(info_set_from_profile(flat, 3).info_set + 1) == [1, 2, 3]
    with pytest.raises(ValueError):
        info_set_from_profile(prof, 0)
    with pytest.raises(ValueError):
        info_set_from_profile(prof, 9)


@given(st.integers(1, 9), st.floats(0.01, 0.99), st.data())
def test_info_set_rate(n, eps, data):
    k = data.draw(st.integers(1, 1 << n))
    assert info_set_from_profile(bhattacharyya_bec(n, eps), k).k == k


def test_rm_examples():
    assert list(rm_info_set(3, 4).info_set + 1) == [4, 6, 7, 8]
    assert list(rm_info_set(3, 1).info_set + 1) == [8]
    assert rm_info_set(5, 32).k == 32


def test_hybrid_examples():
    prof = bhattacharyya_bec(3, 0.5)
    for k in range(1, 9):
        assert rm_polar_hybrid(3, k, prof, 1) == info_set_from_profile(prof, k)
    assert list(rm_polar_hybrid(3, 4, prof, 4).info_set + 1) == [4, 6, 7, 8]
    assert list(rm_polar_hybrid(3, 1, prof, 8).info_set + 1) == [8]
    with pytest.raises(ValueError, match="lower min_weight"):
        rm_polar_hybrid(3, 2, prof, 8)


def test_default_hybrid_weight():
    prof = bhattacharyya_bec(11, 0.5)
    plain = info_set_from_profile(prof, 1024)
    w = default_hybrid_min_weight(11, 1024, prof)
    assert w == 2 * dmin_upper(plain)
    assert dmin_upper(rm_polar_hybrid(11, 1024, prof, w)) == w
