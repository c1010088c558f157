import math

import numpy as np
import pytest

from gapolar.channel import ChannelParams, llr, modulate, noise_sigma, transmit


def test_modulate():
    assert np.array_equal(modulate(np.zeros(4)), np.ones(4))
    assert np.array_equal(modulate([1, 0]), [-1.0, 1.0])
    assert np.array_equal(modulate(np.ones(8)), -np.ones(8))


def test_llr_examples():
    # sigma^2 = 0.5  <=>  R=1, Eb/N0 = 0 dB
    p = ChannelParams(0.0, 1.0)
    assert p.variance == pytest.approx(0.5)
    assert llr([1.0], p)[0] == pytest.approx(4.0)
    assert llr([0.0], p)[0] == 0.0
    p = ChannelParams(2.0, 0.5)
    sigma2 = 1.0 / (2 * 0.5 * 10 ** 0.2)
    assert p.variance == pytest.approx(0.63096, abs=1e-5)
    assert llr([1.0], p)[0] == pytest.approx(2 / sigma2)
    assert llr([1.0], p)[0] == pytest.approx(3.1698, abs=1e-4)


def test_sigma_monotone():
    snrs = np.linspace(-2, 8, 21)
    s = [noise_sigma(x, 0.5) for x in snrs]
    assert all(b < a for a, b in zip(s, s[1:]))
    r = [noise_sigma(2.0, R) for R in (0.1, 0.25, 0.5, 0.75, 1.0)]
    assert all(b < a for a, b in zip(r, r[1:]))
    with pytest.raises(ValueError):
        noise_sigma(1.0, 0.0)


def test_llr_sign_and_linearity():
    p = ChannelParams(1.0, 0.5)
    y = np.linspace(-3, 3, 13)
    out = llr(y, p)
    assert np.array_equal(np.sign(out), np.sign(y))
    assert np.allclose(llr(2 * y, p), 2 * out)


def test_transmit_determinism_and_variance():
    p = ChannelParams(3.0, 0.5)
    s = modulate(np.zeros(10))
    a = transmit(s, p, np.random.default_rng(5))
    b = transmit(s, p, np.random.default_rng(5))
    assert np.array_equal(a, b)
    big = transmit(np.zeros(10 ** 6), p, np.random.default_rng(1))
    assert abs(big.var() / p.variance - 1) < 0.01


def test_transmit_noiseless_limit():
    p = ChannelParams(math.inf, 0.5)
    s = modulate([0, 1, 1, 0])
    assert np.allclose(transmit(s, p, np.random.default_rng(0)), s, atol=1e-6)
