"""Frozen-channel charts: frozen flags laid out by decreasing Bhattacharyya value."""
from __future__ import annotations

import numpy as np

from gapolar.constructions import ReliabilityProfile
from gapolar.core import PolarCode


def default_columns(N: int) -> int:
    return 128 if N >= 128 else N


def frozen_chart(code: PolarCode, profile: ReliabilityProfile, columns: int | None = None) -> np.ndarray:
    """(N / columns) x columns matrix of frozen flags (1 = frozen).

    Positions are ordered by decreasing profile value, ties by index, and
    written row-major, so the least reliable bit-channels come first.
    """
    N = code.N
    if profile.N != N:
        raise ValueError("profile length does not match N")
    if columns is None:
        columns = default_columns(N)
    if columns < 1 or N % columns:
        raise ValueError(f"columns={columns} does not divide N={N}")
    idx = np.arange(N)
    order = np.lexsort((idx, -profile.values))
    flags = code.frozen_mask[order]
    return flags.reshape(N // columns, columns)


def chart_csv(chart: np.ndarray) -> str:
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in chart)
