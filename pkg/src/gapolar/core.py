"""Polar transform basics: code representation, encoding, row weights, d_min.

Conventions
-----------
Positions are 0-based inside the package and 1-based in every user-facing
format (code files, CLI output).  The generator is ``G_N = B_N · F^{⊗n}``
with ``F = [[1, 0], [1, 1]]``; ``B_N`` is applied as an index permutation,
never as a matrix.  Frozen positions always carry the value 0.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from gapolar import _kernels

DMIN_BRUTEFORCE_MAX_K = 20


def bit_reverse(index: int, n: int) -> int:
    """Reverse the ``n``-bit binary expansion of ``index``."""
    if n < 0 or not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for n={n}")
    out = 0
    for _ in range(n):
        out = (out << 1) | (index & 1)
        index >>= 1
    return out


def bit_reversal_permutation(n: int) -> np.ndarray:
    """Array ``p`` with ``p[i] = bit_reverse(i, n)``."""
    idx = np.arange(1 << n)
    out = np.zeros_like(idx)
    for b in range(n):
        out |= ((idx >> b) & 1) << (n - 1 - b)
    return out


@dataclass(frozen=True)
class PolarCode:
    """A polar code P(N, k) given by its A-vector (1 = information position).

    ``crc_bits`` of the k information positions carry a CRC over the
    remaining ``k - crc_bits`` payload bits (0 for plain polar codes).
    """

    a_vector: np.ndarray
    crc_bits: int = 0
    n: int = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.a_vector, dtype=np.uint8).copy()
        if a.ndim != 1 or a.size < 2:
            raise ValueError("a_vector must be a 1-D vector of length N >= 2")
        if np.any(a > 1):
            raise ValueError("a_vector entries must be 0 or 1")
        n = int(a.size).bit_length() - 1
        if 1 << n != a.size:
            raise ValueError(f"block length {a.size} is not a power of two")
        if not 0 <= self.crc_bits <= max(int(a.sum()) - 1, 0):
            raise ValueError("crc_bits must satisfy 0 <= r < k")
        a.setflags(write=False)
        object.__setattr__(self, "a_vector", a)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_info_set(cls, N: int, info_set, crc_bits: int = 0, one_based: bool = False):
        a = np.zeros(N, dtype=np.uint8)
        idx = np.asarray(sorted(info_set), dtype=np.int64)
        if one_based:
            idx = idx - 1
        if idx.size and (idx.min() < 0 or idx.max() >= N):
            raise ValueError("information index out of range")
        if np.unique(idx).size != idx.size:
            raise ValueError("duplicate information index")
        a[idx] = 1
        return cls(a, crc_bits=crc_bits)

    @property
    def N(self) -> int:
        return int(self.a_vector.size)

    @property
    def k(self) -> int:
        return int(self.a_vector.sum())

    @property
    def payload_bits(self) -> int:
        """Number of user bits per frame (k minus CRC bits)."""
        return self.k - self.crc_bits

    @property
    def rate(self) -> float:
        return self.payload_bits / self.N

    @property
    def info_set(self) -> np.ndarray:
        """0-based information positions, ascending."""
        return np.flatnonzero(self.a_vector)

    @property
    def frozen_set(self) -> np.ndarray:
        return np.flatnonzero(self.a_vector == 0)

    @property
    def frozen_mask(self) -> np.ndarray:
        return (self.a_vector == 0).astype(np.uint8)

    def a_string(self) -> str:
        return "".join("1" if b else "0" for b in self.a_vector)

    def digest(self) -> str:
        """Short content hash of (N, k, A-vector); platform independent."""
        text = f"{self.N}:{self.k}:{self.crc_bits}:{self.a_string()}"
        return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, PolarCode):
            return NotImplemented
        return self.crc_bits == other.crc_bits and np.array_equal(self.a_vector, other.a_vector)

    def __hash__(self):
        return hash((self.crc_bits, self.a_vector.tobytes()))

    def __repr__(self):
        return f"PolarCode(N={self.N}, k={self.k}, crc_bits={self.crc_bits}, A={self.a_string()})"


def _as_bits(u, N: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != N:
        raise ValueError(f"word length {u.shape[-1]} != N={N}")
    return u


def polar_transform(u) -> np.ndarray:
    """x = u · B_N · F^{⊗n} over GF(2); works on a word or a (batch, N) array."""
    u = np.asarray(u, dtype=np.uint8)
    N = u.shape[-1]
    n = N.bit_length() - 1
    if 1 << n != N:
        raise ValueError(f"length {N} is not a power of two")
    batch = np.ascontiguousarray(u.reshape(-1, N))
    x = _kernels.encode_batch(batch)
    return x.reshape(u.shape)


def encode(code: PolarCode, u) -> np.ndarray:
    u = _as_bits(u, code.N)
    if np.any(u[..., code.frozen_set]):
        raise ValueError("frozen positions of u must be 0")
    return polar_transform(u)


def generator_matrix(N: int) -> np.ndarray:
    """Explicit G_N = B_N · F^{⊗n}.  Only for tests and small N."""
    n = N.bit_length() - 1
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    G = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        G = np.kron(G, F)
    return G[bit_reversal_permutation(n)]


def row_weight(N: int, i: int) -> int:
    """Hamming weight of row ``i`` (1-based) of G_N."""
    if not 1 <= i <= N:
        raise ValueError(f"row index {i} out of range [1, {N}]")
    return 1 << bin(i - 1).count("1")


def row_weights(N: int) -> np.ndarray:
    """All row weights of G_N, 0-based indexing."""
    idx = np.arange(N)
    pop = np.zeros(N, dtype=np.int64)
    for b in range(N.bit_length()):
        pop += (idx >> b) & 1
    return np.left_shift(1, pop)


def dmin_upper(code: PolarCode) -> int:
    """Minimum weight of the generator rows selected by the information set."""
    if code.k == 0:
        raise ValueError("empty information set")
    return int(row_weights(code.N)[code.info_set].min())


def dmin_bruteforce(code: PolarCode) -> int:
    """Minimum weight over all 2^k - 1 nonzero codewords (k <= 20)."""
    k = code.k
    if k == 0:
        raise ValueError("empty information set")
    if k > DMIN_BRUTEFORCE_MAX_K:
        raise ValueError(f"k={k} too large for enumeration (limit {DMIN_BRUTEFORCE_MAX_K})")
    G = generator_matrix(code.N)[code.info_set].astype(np.int64)
    # Gray-code walk: each step XORs in one row.
    word = np.zeros(code.N, dtype=np.int64)
    best = code.N
    for step in range(1, 1 << k):
        bit = (step & -step).bit_length() - 1
        word ^= G[bit]
        w = int(word.sum())
        if w < best:
            best = w
    return best


def all_messages(k: int) -> np.ndarray:
    """All 2^k binary messages as rows (small k only)."""
    return np.array(list(product((0, 1), repeat=k)), dtype=np.uint8).reshape(-1, k)
