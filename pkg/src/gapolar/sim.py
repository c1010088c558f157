"""Monte-Carlo error-rate simulation with counter-based seeding.

Frames are generated in fixed-size chunks.  Chunk ``c`` of a stream keyed
by ``key`` always draws its payload bits and noise from
``SeedSequence(key + (c,))``, so every frame's realisation depends only on
(key, frame index) and never on how chunks are spread over threads.
Reductions are done in chunk order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from gapolar.channel import RNG_NAME, noise_sigma
from gapolar.core import PolarCode, polar_transform
from gapolar.crc import crc_attach
from gapolar.decoders import DecoderSpec

CHUNK_FRAMES = 256

SWEEP_STREAM = 0
GENALG_STREAM = 1


@dataclass
class ErrorStats:
    frames: int = 0
    bit_errors: int = 0
    block_errors: int = 0
    info_bits_per_frame: int = 0

    def __post_init__(self):
        if not 0 <= self.bit_errors <= self.frames * self.info_bits_per_frame:
            raise ValueError("bit_errors out of range")
        if not 0 <= self.block_errors <= self.frames:
            raise ValueError("block_errors out of range")

    @property
    def ber(self) -> float:
        total = self.frames * self.info_bits_per_frame
        return self.bit_errors / total if total else math.nan

    @property
    def bler(self) -> float:
        return self.block_errors / self.frames if self.frames else math.nan

    def __add__(self, other: "ErrorStats") -> "ErrorStats":
        if self.frames and other.frames and self.info_bits_per_frame != other.info_bits_per_frame:
            raise ValueError("cannot add stats with different payload sizes")
        return ErrorStats(self.frames + other.frames, self.bit_errors + other.bit_errors,
                          self.block_errors + other.block_errors,
                          self.info_bits_per_frame or other.info_bits_per_frame)


def stream_rng(*key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(v) for v in key])))


def crc_parity_matrix(payload_bits: int, poly) -> np.ndarray:
    """(payload_bits, r) matrix P with crc(m) = m P mod 2 (the CRC is linear)."""
    r = len(poly) - 1
    eye = np.eye(payload_bits, dtype=np.uint8)
    return np.array([crc_attach(row, poly)[payload_bits:] for row in eye],
                    dtype=np.uint8).reshape(payload_bits, r)


class FrameSimulator:
    """Encodes, transmits and decodes chunks of frames for one (code, decoder)."""

    def __init__(self, code: PolarCode, spec: DecoderSpec):
        if spec.crc_bits != code.crc_bits:
            code = PolarCode(code.a_vector, crc_bits=spec.crc_bits)
        self.code = code
        self.spec = spec
        self.decoder = spec.build(code)
        self.info = code.info_set
        self.payload_pos = self.info[: code.payload_bits]
        self.parity = None
        if code.crc_bits:
            self.parity = crc_parity_matrix(code.payload_bits, self.decoder.cfg.crc_polynomial)

    def run_chunk(self, ebn0_db: float, key: tuple, count: int) -> np.ndarray:
        """Bit errors per frame for the first ``count`` frames of chunk ``key``."""
        code = self.code
        rng = stream_rng(*key)
        payload = rng.integers(0, 2, size=(CHUNK_FRAMES, code.payload_bits), dtype=np.uint8)
        noise = rng.standard_normal((CHUNK_FRAMES, code.N))
        payload = payload[:count]
        noise = noise[:count]
        u = np.zeros((count, code.N), dtype=np.uint8)
        u[:, self.payload_pos] = payload
        if self.parity is not None:
            u[:, self.info[code.payload_bits:]] = (payload.astype(np.int64) @ self.parity) & 1
        x = polar_transform(u)
        sigma = noise_sigma(ebn0_db, code.rate)
        y = (1.0 - 2.0 * x) + sigma * noise
        llr = (2.0 / sigma ** 2) * y
        u_hat = self.decoder.decode_batch(llr).u_hat
        return np.count_nonzero(u_hat[:, self.payload_pos] != payload, axis=1)

    def stats(self, bit_err: np.ndarray) -> ErrorStats:
        return ErrorStats(int(bit_err.size), int(bit_err.sum()), int(np.count_nonzero(bit_err)),
                          self.code.payload_bits)


def _map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_fixed(sims, ebn0_db: float, key: tuple, frames: int, threads: int = 1):
    """Simulate ``frames`` frames per simulator, all on the same frame stream.

    Returns one per-frame bit-error array per simulator (ordered).
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    nchunks = -(-frames // CHUNK_FRAMES)
    tasks = [(s, c) for s in range(len(sims)) for c in range(nchunks)]

    def work(task):
        s, c = task
        count = min(CHUNK_FRAMES, frames - c * CHUNK_FRAMES)
        return sims[s].run_chunk(ebn0_db, (*key, c), count)

    results = _map(work, tasks, threads)
    return [np.concatenate(results[s * nchunks:(s + 1) * nchunks]) for s in range(len(sims))]


@dataclass(frozen=True)
class StopRule:
    min_block_errors: int = 500
    max_frames: int = 10_000_000
    min_frames: int = 0

    def __post_init__(self):
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.min_frames > self.max_frames:
            raise ValueError("min_frames exceeds max_frames")


@dataclass
class SweepPoint:
    snr_db: float
    stats: ErrorStats


@dataclass
class SweepResult:
    decoder: str
    code_digest: str
    master_seed: int
    points: list[SweepPoint] = field(default_factory=list)
    rng: str = RNG_NAME

    CSV_HEADER = "snr_db,frames,bit_errors,block_errors,ber,bler"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for p in self.points:
            s = p.stats
            lines.append(f"{p.snr_db:g},{s.frames},{s.bit_errors},{s.block_errors},"
                         f"{s.ber:.6e},{s.bler:.6e}")
        return "\n".join(lines) + "\n"


def _stop_index(block_cum: np.ndarray, frames_done: int, rule: StopRule) -> int | None:
    """Number of frames to keep if the rule triggers inside the data seen so far."""
    limit = min(frames_done, rule.max_frames)
    hit = np.flatnonzero(block_cum[:limit] >= rule.min_block_errors)
    if hit.size:
        stop = max(int(hit[0]) + 1, rule.min_frames)
        if stop <= frames_done:
            return stop
    if frames_done >= rule.max_frames:
        return rule.max_frames
    return None


def simulate_point(sim: FrameSimulator, ebn0_db: float, key: tuple, rule: StopRule,
                   threads: int = 1) -> ErrorStats:
    wave = max(1, threads) * 4
    parts: list[np.ndarray] = []
    next_chunk = 0
    done = 0
    while True:
        max_chunks = -(-rule.max_frames // CHUNK_FRAMES)
        chunks = list(range(next_chunk, min(next_chunk + wave, max_chunks)))
        next_chunk += len(chunks)
        parts.extend(_map(lambda c: sim.run_chunk(ebn0_db, (*key, c), CHUNK_FRAMES), chunks, threads))
        done += len(chunks) * CHUNK_FRAMES
        errs = np.concatenate(parts)
        stop = _stop_index(np.cumsum(errs > 0), done, rule)
        if stop is not None:
            return sim.stats(errs[:stop])
        wave = min(wave * 2, 64 * max(1, threads))


def monte_carlo_sweep(code: PolarCode, spec: DecoderSpec, snr_list_db, rule: StopRule = StopRule(),
                      master_seed: int = 0, threads: int = 1) -> SweepResult:
    """BER/BLER per SNR point; deterministic in master_seed, independent of threads."""
    snrs = [float(s) for s in snr_list_db]
    if not snrs:
        raise ValueError("empty SNR list")
    if any(b <= a for a, b in zip(snrs, snrs[1:])):
        raise ValueError("SNR points must be strictly increasing")
    sim = FrameSimulator(code, spec)
    result = SweepResult(spec.tag, sim.code.digest(), int(master_seed))
    for i, snr in enumerate(snrs):
        stats = simulate_point(sim, snr, (master_seed, SWEEP_STREAM, i), rule, threads)
        result.points.append(SweepPoint(snr, stats))
    return result

