"""Genetic search over A-vectors with the target decoder in the loop.

Each generation keeps the T fittest A-vectors, adds one crossover child
per elite pair and one mutant per elite, giving S = (T^2 + 3T) / 2.
Fitness is the Monte-Carlo error rate at the design SNR; every candidate
evaluated in a generation sees the same frames and noise.  Elite fitness
is cached rather than re-measured, which makes the best error rate in the
history non-increasing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from gapolar.constructions import (DEFAULT_EPSILONS, bhattacharyya_bec, default_hybrid_min_weight,
                                   info_set_from_profile, rm_polar_hybrid)
from gapolar.core import PolarCode
from gapolar.decoders import DecoderSpec
from gapolar.sim import GENALG_STREAM, ErrorStats, FrameSimulator, run_fixed, stream_rng

log = logging.getLogger(__name__)

_VARIATION_STREAM = 2
_INIT_STREAM = 3


def population_size(T: int) -> int:
    if T < 2:
        raise ValueError("T must be >= 2")
    return (T * T + 3 * T) // 2


@dataclass
class Candidate:
    a_vector: np.ndarray
    fitness: ErrorStats | None = None
    birth_generation: int = 0
    origin: str = ""

    def __post_init__(self):
        self.a_vector = np.asarray(self.a_vector, dtype=np.uint8)

    @property
    def k(self) -> int:
        return int(self.a_vector.sum())

    def code(self, crc_bits: int = 0) -> PolarCode:
        return PolarCode(self.a_vector, crc_bits=crc_bits)

    def digest(self) -> str:
        return self.code().digest()


@dataclass
class GenAlgConfig:
    decoder: DecoderSpec = field(default_factory=lambda: DecoderSpec.parse("SCL(8)"))
    T: int = 5
    snr_genalg_db: float = 2.0
    frames_per_eval: int = 10_000
    max_generations: int = 100
    master_seed: int = 0
    fitness_metric: str = "BER"
    init_epsilons: tuple = DEFAULT_EPSILONS
    include_hybrid_seeds: bool = True

    def __post_init__(self):
        if isinstance(self.decoder, str):
            self.decoder = DecoderSpec.parse(self.decoder)
        self.fitness_metric = self.fitness_metric.upper()
        if self.fitness_metric not in ("BER", "BLER"):
            raise ValueError("fitness_metric must be BER or BLER")
        if self.frames_per_eval < 1:
            raise ValueError("frames_per_eval must be >= 1")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        population_size(self.T)
        self.init_epsilons = tuple(float(e) for e in self.init_epsilons)

    @property
    def S(self) -> int:
        return population_size(self.T)


@dataclass
class HistoryRecord:
    generation: int
    best_ber: float
    median_ber: float
    best_digest: str

    CSV_HEADER = "generation,best_ber,median_ber,best_digest"

    def csv_row(self) -> str:
        return f"{self.generation},{self.best_ber:.6e},{self.median_ber:.6e},{self.best_digest}"


@dataclass
class GenAlgResult:
    best: Candidate
    history: list[HistoryRecord]
    population: list[Candidate]
    seeds: list[Candidate]

    def __iter__(self):
        return iter((self.best, self.history))

    def history_csv(self) -> str:
        rows = [HistoryRecord.CSV_HEADER] + [h.csv_row() for h in self.history]
        return "\n".join(rows) + "\n"


def _flip_one_of(a: np.ndarray, value: int, rng: np.random.Generator, exclude: int = -1):
    pos = np.flatnonzero(a == value)
    if exclude >= 0:
        pos = pos[pos != exclude]
    q = int(pos[rng.integers(pos.size)])
    a[q] ^= 1


def mutate(parent: Candidate, rng: np.random.Generator, generation: int = 0) -> Candidate:
    """Flip one random position, then a second one that restores k ones."""
    a = parent.a_vector.copy()
    N, k = a.size, int(a.sum())
    if k == 0 or k == N:
        # no rate-preserving flip pair exists
        return Candidate(a, None, generation, "mutation")
    p = int(rng.integers(N))
    a[p] ^= 1
    over = 1 if a[p] == 1 else 0
    _flip_one_of(a, over, rng, exclude=p)
    return Candidate(a, None, generation, "mutation")


def crossover(x: Candidate, w: Candidate, rng: np.random.Generator, generation: int = 0) -> Candidate:
    """First half of x, second half of w, then single-bit repairs back to k ones."""
    if x.a_vector.size != w.a_vector.size or x.k != w.k:
        raise ValueError("parents must share N and k")
    N, k = x.a_vector.size, x.k
    a = np.concatenate([x.a_vector[: N // 2], w.a_vector[N // 2:]])
    ones = int(a.sum())
    while ones != k:
        _flip_one_of(a, 1 if ones > k else 0, rng)
        ones += -1 if ones > k else 1
    return Candidate(a, None, generation, "crossover")


def _dedup(cands: list[Candidate]) -> list[Candidate]:
    seen, out = set(), []
    for c in cands:
        key = c.a_vector.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def init_population(cfg: GenAlgConfig, N: int, k: int) -> list[Candidate]:
    n = N.bit_length() - 1
    if 1 << n != N:
        raise ValueError("N must be a power of two")
    seeds = []
    for eps in cfg.init_epsilons:
        prof = bhattacharyya_bec(n, eps)
        code = info_set_from_profile(prof, k)
        seeds.append(Candidate(code.a_vector, None, 0, f"bhattacharyya(eps={eps:g})"))
    if cfg.include_hybrid_seeds:
        for eps in cfg.init_epsilons:
            prof = bhattacharyya_bec(n, eps)
            w = default_hybrid_min_weight(n, k, prof)
            code = rm_polar_hybrid(n, k, prof, w)
            seeds.append(Candidate(code.a_vector, None, 0, f"hybrid(eps={eps:g},w={w})"))
    seeds = _dedup(seeds)
    S = cfg.S
    if len(seeds) >= S:
        return seeds[:S]
    rng = stream_rng(cfg.master_seed, _INIT_STREAM)
    pop = list(seeds)
    seen = {c.a_vector.tobytes() for c in pop}
    i = 0
    while len(pop) < S:
        child = mutate(seeds[i % len(seeds)], rng)
        i += 1
        key = child.a_vector.tobytes()
        if key in seen and i < 50 * S:
            continue
        seen.add(key)
        child.origin = "seed-mutation"
        pop.append(child)
    return pop


def _fitness_value(stats: ErrorStats, metric: str) -> float:
    return stats.ber if metric == "BER" else stats.bler


def evaluate_fitness(c: Candidate, cfg: GenAlgConfig, eval_seed: int, threads: int = 1) -> ErrorStats:
    """Error statistics of one candidate on the frame stream of ``eval_seed``."""
    return evaluate_population([c], cfg, eval_seed, threads)[0]


def evaluate_population(cands: list[Candidate], cfg: GenAlgConfig, eval_seed: int,
                        threads: int = 1) -> list[ErrorStats]:
    sims = [FrameSimulator(PolarCode(c.a_vector, crc_bits=cfg.decoder.crc_bits), cfg.decoder)
            for c in cands]
    key = (cfg.master_seed, GENALG_STREAM, int(eval_seed))
    errs = run_fixed(sims, cfg.snr_genalg_db, key, cfg.frames_per_eval, threads)
    return [s.stats(e) for s, e in zip(sims, errs)]


def rank(population: list[Candidate], metric: str = "BER") -> list[Candidate]:
    """Fittest first; ties keep input order."""
    if any(c.fitness is None for c in population):
        raise ValueError("population contains unevaluated candidates")
    return sorted(population, key=lambda c: _fitness_value(c.fitness, metric))


def select_next(population: list[Candidate], cfg: GenAlgConfig, rng: np.random.Generator,
                generation: int = 0) -> list[Candidate]:
    ranked = rank(population, cfg.fitness_metric)
    elites = ranked[: cfg.T]
    zero = sum(1 for c in ranked if c.fitness.bit_errors == 0)
    if zero > cfg.T:
        log.warning("%d candidates show zero errors; raise frames_per_eval or lower the design "
                    "SNR, ranking is uninformative", zero)
    nxt = list(elites)
    for i in range(cfg.T):
        for j in range(i + 1, cfg.T):
            nxt.append(crossover(elites[i], elites[j], rng, generation))
    for e in elites:
        nxt.append(mutate(e, rng, generation))
    return nxt


def run(cfg: GenAlgConfig, N: int, k: int, threads: int = 1, progress=None) -> GenAlgResult:
    """Evolve A-vectors for max_generations; return the all-time best and the history."""
    population = init_population(cfg, N, k)
    seeds = [c for c in population if c.origin != "seed-mutation"]
    history: list[HistoryRecord] = []
    for g in range(cfg.max_generations):
        fresh = [c for c in population if c.fitness is None]
        if fresh:
            for c, st in zip(fresh, evaluate_population(fresh, cfg, g, threads)):
                c.fitness = st
        ranked = rank(population, cfg.fitness_metric)
        bers = np.array([c.fitness.ber for c in population])
        history.append(HistoryRecord(g, ranked[0].fitness.ber, float(np.median(bers)),
                                     ranked[0].digest()))
        if progress is not None:
            progress(history[-1])
        if g + 1 < cfg.max_generations:
            rng = stream_rng(cfg.master_seed, _VARIATION_STREAM, g)
            population = select_next(population, cfg, rng, g + 1)
    best = rank(population, cfg.fitness_metric)[0]
    return GenAlgResult(best, history, population, seeds)


_INT_KEYS = {"T": "T", "frames_per_eval": "frames_per_eval", "max_generations": "max_generations",
             "master_seed": "master_seed"}


def config_from_mapping(values: dict) -> tuple[GenAlgConfig, int, int, dict]:
    """Build (config, N, k) from string values as read from a config file.

    Keys not belonging to the GA are returned unchanged as the fourth item.
    """
    v = dict(values)
    try:
        N = int(v.pop("N"))
        k = int(v.pop("k"))
    except KeyError as e:
        raise ValueError(f"config is missing {e.args[0]!r}") from None
    kwargs = {}
    for key, name in _INT_KEYS.items():
        if key in v:
            kwargs[name] = int(v.pop(key), 0)
    if "snr_genalg_db" in v:
        kwargs["snr_genalg_db"] = float(v.pop("snr_genalg_db"))
    if "fitness_metric" in v:
        kwargs["fitness_metric"] = v.pop("fitness_metric")
    if "init_epsilons" in v:
        kwargs["init_epsilons"] = tuple(float(e) for e in v.pop("init_epsilons").replace(",", " ").split())
    if "include_hybrid_seeds" in v:
        flag = v.pop("include_hybrid_seeds").lower()
        if flag not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"include_hybrid_seeds must be true/false, got {flag!r}")
        kwargs["include_hybrid_seeds"] = flag in ("true", "1", "yes")
    poly = None
    if "crc_polynomial" in v:
        from gapolar.crc import parse_polynomial
        poly = parse_polynomial(v.pop("crc_polynomial"))
    if "decoder" in v:
        kwargs["decoder"] = DecoderSpec.parse(v.pop("decoder"), crc_polynomial=poly)
    S = v.pop("S", None)
    cfg = GenAlgConfig(**kwargs)
    if S is not None and int(S) != cfg.S:
        raise ValueError(f"S={S} inconsistent with T={cfg.T} (expected {cfg.S})")
    return cfg, N, k, v
