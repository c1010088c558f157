"""SC, SCL, CRC-aided SCL and BP decoders.

Every decoder takes channel LLRs in codeword order (positive = bit 0) and
returns the estimate of u with frozen positions forced to 0.  A decoder
object is cheap to build; ``decode_batch`` is the fast path used by the
simulators, ``decode`` is the single-frame convenience wrapper.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from gapolar import _kernels
from gapolar.core import PolarCode, polar_transform
from gapolar.crc import default_polynomial

_NO_CRC = np.ones(1, dtype=np.uint8)


@dataclass(frozen=True)
class SclConfig:
    list_size: int = 8
    crc_bits: int = 0
    crc_polynomial: np.ndarray | None = None

    def __post_init__(self):
        if self.list_size < 1:
            raise ValueError("list size must be >= 1")
        if self.crc_bits < 0:
            raise ValueError("crc_bits must be >= 0")
        if self.crc_bits and self.crc_polynomial is None:
            object.__setattr__(self, "crc_polynomial", default_polynomial(self.crc_bits))
        if self.crc_polynomial is not None:
            poly = np.asarray(self.crc_polynomial, dtype=np.uint8)
            if poly.size - 1 != self.crc_bits:
                raise ValueError("CRC polynomial degree does not match crc_bits")
            object.__setattr__(self, "crc_polynomial", poly)


@dataclass(frozen=True)
class BpConfig:
    max_iterations: int = 200
    early_stop: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    x_hat: np.ndarray
    iterations_used: int = 0
    early_stopped: bool = False


@dataclass
class BatchResult:
    u_hat: np.ndarray
    x_hat: np.ndarray
    iterations_used: np.ndarray | None = None
    early_stopped: np.ndarray | None = None

    def __getitem__(self, i) -> DecodeResult:
        its = 0 if self.iterations_used is None else int(self.iterations_used[i])
        stop = False if self.early_stopped is None else bool(self.early_stopped[i])
        return DecodeResult(self.u_hat[i], self.x_hat[i], its, stop)


def _frames(code: PolarCode, llr) -> np.ndarray:
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape[-1] != code.N:
        raise ValueError(f"frame length {llr.shape[-1]} != N={code.N}")
    return np.ascontiguousarray(llr.reshape(-1, code.N))


class Decoder:
    name = "decoder"

    def __init__(self, code: PolarCode):
        self.code = code
        self.frozen = np.ascontiguousarray(code.frozen_mask)

    def decode_batch(self, llr) -> BatchResult:
        raise NotImplementedError

    def decode(self, llr) -> DecodeResult:
        return self.decode_batch(llr)[0]


class SCDecoder(Decoder):
    name = "SC"

    def decode_batch(self, llr) -> BatchResult:
        u = _kernels.sc_decode_batch(_frames(self.code, llr), self.frozen)
        return BatchResult(u, polar_transform(u))


class SCLDecoder(Decoder):
    def __init__(self, code: PolarCode, cfg: SclConfig = SclConfig()):
        super().__init__(code)
        if cfg.crc_bits and cfg.crc_bits >= code.k:
            raise ValueError(f"crc_bits={cfg.crc_bits} must be < k={code.k}")
        self.cfg = cfg
        self.poly = _NO_CRC if not cfg.crc_bits else np.ascontiguousarray(cfg.crc_polynomial)

    @property
    def name(self):
        if self.cfg.crc_bits:
            return f"SCL+CRC-{self.cfg.crc_bits}({self.cfg.list_size})"
        return f"SCL({self.cfg.list_size})"

    def decode_batch(self, llr) -> BatchResult:
        u = _kernels.scl_decode_batch(_frames(self.code, llr), self.frozen,
                                      self.cfg.list_size, self.poly)
        return BatchResult(u, polar_transform(u))


class BPDecoder(Decoder):
    def __init__(self, code: PolarCode, cfg: BpConfig = BpConfig()):
        super().__init__(code)
        self.cfg = cfg

    @property
    def name(self):
        return f"BP({self.cfg.max_iterations})"

    def decode_batch(self, llr) -> BatchResult:
        u, x, its, stop = _kernels.bp_decode_batch(
            _frames(self.code, llr), self.frozen, self.cfg.max_iterations, self.cfg.early_stop)
        return BatchResult(u, x, its, stop)


def sc_decode(code: PolarCode, frame) -> DecodeResult:
    return SCDecoder(code).decode(frame)


def scl_decode(code: PolarCode, frame, cfg: SclConfig = SclConfig()) -> DecodeResult:
    return SCLDecoder(code, cfg).decode(frame)


def bp_decode(code: PolarCode, frame, cfg: BpConfig = BpConfig()) -> DecodeResult:
    return BPDecoder(code, cfg).decode(frame)


_SPEC_RE = re.compile(
    r"^\s*(?:(?P<sc>SC)|SCL(?:\+CRC-(?P<r>\d+))?\((?P<L>\d+)\)|BP\((?P<it>\d+)\))\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class DecoderSpec:
    """A decoder choice such as ``SC``, ``SCL(8)``, ``SCL+CRC-16(32)`` or ``BP(200)``."""

    kind: str
    list_size: int = 1
    crc_bits: int = 0
    max_iterations: int = 0
    early_stop: bool = True
    crc_polynomial: np.ndarray | None = field(default=None, compare=False)

    @classmethod
    def parse(cls, text: str, crc_polynomial=None) -> "DecoderSpec":
        m = _SPEC_RE.match(text)
        if not m:
            raise ValueError(f"unknown decoder {text!r}; expected SC, SCL(L), SCL+CRC-r(L) or BP(N)")
        if m.group("sc"):
            return cls("SC")
        if m.group("it"):
            return cls("BP", max_iterations=int(m.group("it")))
        return cls("SCL", list_size=int(m.group("L")), crc_bits=int(m.group("r") or 0),
                   crc_polynomial=crc_polynomial)

    @property
    def tag(self) -> str:
        if self.kind == "SC":
            return "SC"
        if self.kind == "BP":
            return f"BP({self.max_iterations})"
        if self.crc_bits:
            return f"SCL+CRC-{self.crc_bits}({self.list_size})"
        return f"SCL({self.list_size})"

    def build(self, code: PolarCode) -> Decoder:
        if self.kind == "SC":
            return SCDecoder(code)
        if self.kind == "BP":
            return BPDecoder(code, BpConfig(self.max_iterations, self.early_stop))
        return SCLDecoder(code, SclConfig(self.list_size, self.crc_bits, self.crc_polynomial))

    def __str__(self):
        return self.tag
