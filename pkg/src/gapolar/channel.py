"""BPSK over AWGN: modulation, noise, LLRs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# PCG64 via numpy.random.Generator; recorded in output metadata.
RNG_NAME = "numpy.PCG64"
# Noise floor used when ebn0_db is +inf (keeps LLRs finite).
SIGMA_FLOOR = 1e-9


def noise_sigma(ebn0_db: float, code_rate: float) -> float:
    """sigma with sigma^2 = 1 / (2 R_c 10^(Eb/N0 / 10))."""
    if not 0.0 < code_rate <= 1.0:
        raise ValueError(f"code rate {code_rate} outside (0, 1]")
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return SIGMA_FLOOR
    return math.sqrt(1.0 / (2.0 * code_rate * 10.0 ** (ebn0_db / 10.0)))


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    code_rate: float

    @property
    def sigma(self) -> float:
        return noise_sigma(self.ebn0_db, self.code_rate)

    @property
    def variance(self) -> float:
        return self.sigma ** 2


def modulate(x) -> np.ndarray:
    """0 -> +1.0, 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def transmit(symbols, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    s = np.asarray(symbols, dtype=np.float64)
    return s + params.sigma * rng.standard_normal(s.shape)


def llr(received, params: ChannelParams) -> np.ndarray:
    """Channel LLRs log P(y|0)/P(y|1) = 2 y / sigma^2."""
    return 2.0 * np.asarray(received, dtype=np.float64) / params.variance
