"""Non-genetic frozen-set constructions: Bhattacharyya (BEC), RM rule, RM-polar hybrid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gapolar.core import PolarCode, dmin_upper, row_weights

DEFAULT_EPSILONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per bit-channel Bhattacharyya parameters, indexed like u (natural order).

    Lower values mean more reliable bit-channels.
    """

    values: np.ndarray
    epsilon: float | None = None
    ordering: str = "natural"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("profile must be one-dimensional")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise ValueError("Bhattacharyya values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return int(self.values.size)


def bhattacharyya_bec(n: int, epsilon: float) -> ReliabilityProfile:
    """Exact BEC(epsilon) bit-channel Bhattacharyya parameters for N = 2^n.

    The most significant index bit selects the first (outermost) channel
    transform, so ``values[i]`` belongs to u_i under G_N = B_N F^{⊗n}.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon={epsilon} outside [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    z = np.array([float(epsilon)])
    for _ in range(n):
        nxt = np.empty(2 * z.size)
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return ReliabilityProfile(np.clip(z, 0.0, 1.0), epsilon=float(epsilon))


def _check_k(k: int, N: int):
    if not 1 <= k <= N:
        raise ValueError(f"k={k} outside [1, {N}]")


def _most_reliable(values: np.ndarray, k: int, eligible: np.ndarray | None = None) -> np.ndarray:
    idx = np.arange(values.size)
    if eligible is not None:
        idx = idx[eligible]
    # lexsort: last key is primary -> value ascending, then index ascending
    order = np.lexsort((idx, values[idx]))
    return idx[order[:k]]


def info_set_from_profile(profile: ReliabilityProfile, k: int, crc_bits: int = 0) -> PolarCode:
    """Pick the k positions of smallest Z (ties go to the smaller index)."""
    _check_k(k, profile.N)
    a = np.zeros(profile.N, dtype=np.uint8)
    a[_most_reliable(profile.values, k)] = 1
    return PolarCode(a, crc_bits=crc_bits)


def rm_info_set(n: int, k: int) -> PolarCode:
    """Reed-Muller rule: the k rows of largest weight, larger index first on ties."""
    N = 1 << n
    _check_k(k, N)
    w = row_weights(N)
    idx = np.arange(N)
    order = np.lexsort((-idx, -w))
    a = np.zeros(N, dtype=np.uint8)
    a[order[:k]] = 1
    return PolarCode(a)


def rm_polar_hybrid(n: int, k: int, profile: ReliabilityProfile, min_weight: int,
                    crc_bits: int = 0) -> PolarCode:
    """Most reliable k positions among rows of weight >= min_weight."""
    N = 1 << n
    _check_k(k, N)
    if profile.N != N:
        raise ValueError("profile length does not match N")
    eligible = row_weights(N) >= min_weight
    if int(eligible.sum()) < k:
        raise ValueError(
            f"only {int(eligible.sum())} rows have weight >= {min_weight} but k={k}; "
            "lower min_weight"
        )
    a = np.zeros(N, dtype=np.uint8)
    a[_most_reliable(profile.values, k, eligible)] = 1
    return PolarCode(a, crc_bits=crc_bits)


def default_hybrid_min_weight(n: int, k: int, profile: ReliabilityProfile) -> int:
    """Smallest power of two above the plain construction's d_min, capped so k rows remain."""
    N = 1 << n
    plain = info_set_from_profile(profile, k)
    target = 2 * dmin_upper(plain)
    w = row_weights(N)
    while target > 1 and int((w >= target).sum()) < k:
        target //= 2
    return target
