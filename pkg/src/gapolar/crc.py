"""Plain MSB-first CRC (zero init, no reflection, no final XOR)."""
from __future__ import annotations

import numpy as np

# x^16 + x^12 + x^5 + 1
CRC16_CCITT = np.array([1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1], dtype=np.uint8)

_DEFAULTS = {16: CRC16_CCITT}


def default_polynomial(r: int) -> np.ndarray:
    try:
        return _DEFAULTS[r].copy()
    except KeyError:
        raise ValueError(f"no default CRC polynomial of degree {r}; supply one") from None


def parse_polynomial(spec) -> np.ndarray:
    """Coefficients highest degree first.

    Accepts a bit string ('10001000000100001'), a hex string that includes
    the leading term ('0x11021'), or an iterable of 0/1.
    """
    if isinstance(spec, str):
        spec = spec.strip()
        if spec.lower().startswith("0x"):
            spec = bin(int(spec, 16))[2:]
        if spec and set(spec) <= {"0", "1"}:
            return _check_poly(np.array([int(c) for c in spec], dtype=np.uint8))
        raise ValueError(f"cannot parse CRC polynomial {spec!r}")
    return _check_poly(np.asarray(spec, dtype=np.uint8))


def _check_poly(poly: np.ndarray) -> np.ndarray:
    if poly.ndim != 1 or poly.size < 2 or poly[0] != 1 or poly[-1] != 1:
        raise ValueError("CRC polynomial must have degree >= 1 with leading and constant terms set")
    return poly


def _remainder(bits: np.ndarray, poly: np.ndarray) -> np.ndarray:
    r = poly.size - 1
    reg = np.array(bits, dtype=np.uint8)
    for i in range(reg.size - r):
        if reg[i]:
            reg[i:i + r + 1] ^= poly
    return reg[reg.size - r:]


def crc_attach(payload, poly=CRC16_CCITT) -> np.ndarray:
    """Append the r-bit remainder of payload * x^r mod poly."""
    poly = _check_poly(np.asarray(poly, dtype=np.uint8))
    payload = np.asarray(payload, dtype=np.uint8)
    r = poly.size - 1
    padded = np.concatenate([payload, np.zeros(r, dtype=np.uint8)])
    return np.concatenate([payload, _remainder(padded, poly)])


def crc_check(word, poly=CRC16_CCITT) -> bool:
    poly = _check_poly(np.asarray(poly, dtype=np.uint8))
    word = np.asarray(word, dtype=np.uint8)
    if word.size < poly.size - 1:
        raise ValueError("word shorter than CRC")
    return not _remainder(word, poly).any()
