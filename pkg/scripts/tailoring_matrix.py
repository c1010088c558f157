"""Decoder-tailoring matrix at desk scale.

Builds a Bhattacharyya baseline plus SCL- and BP-tailored genetic designs for a
short code, then reports the smallest Eb/N0 on a grid at which each design
reaches a target BER under each decoder.

    python3 scripts/tailoring_matrix.py --N 64 --k 32 --target-ber 1e-3
    python3 scripts/tailoring_matrix.py --design scl=results/genalg_scl8_64.txt
"""
import argparse
import math
import time

import numpy as np

from gapolar.codefile import load_code
from gapolar.constructions import bhattacharyya_bec, info_set_from_profile
from gapolar.decoders import DecoderSpec
from gapolar.genalg import GenAlgConfig, run
from gapolar.sim import StopRule, monte_carlo_sweep


def required_snr(code, spec, grid, target, rule, seed, threads):
    """Log-linear interpolation of the first crossing below ``target``; None if never reached."""
    prev = None
    for snr in grid:
        ber = monte_carlo_sweep(code, spec, [snr], rule, seed, threads).points[0].stats.ber
        if ber <= target:
            if prev is None or ber <= 0:
                return snr
            s0, b0 = prev
            t = (math.log10(b0) - math.log10(target)) / (math.log10(b0) - math.log10(ber))
            return s0 + t * (snr - s0)
        prev = (snr, ber) if ber > 0 else prev
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--k", type=int, default=32)
    ap.add_argument("--epsilon", type=float, default=0.5, help="baseline BEC design parameter")
    ap.add_argument("--target-ber", type=float, default=1e-3)
    ap.add_argument("--grid", default="0:6:0.25", help="start:stop:step in dB")
    ap.add_argument("--decoders", default="SC,BP(50),SCL(8)")
    ap.add_argument("--generations", type=int, default=15)
    ap.add_argument("--frames-per-eval", type=int, default=3000)
    ap.add_argument("--min-block-errors", type=int, default=200)
    ap.add_argument("--design", action="append", default=[], metavar="NAME=FILE",
                    help="use a saved design instead of running the search")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    n = args.N.bit_length() - 1
    start, stop, step = (float(v) for v in args.grid.split(":"))
    grid = list(np.round(np.arange(start, stop + step / 2, step), 6))
    rule = StopRule(args.min_block_errors, max_frames=2_000_000)
    decoders = [d.strip() for d in args.decoders.split(",")]

    designs = {f"bhattacharyya@{args.epsilon:g}": info_set_from_profile(bhattacharyya_bec(n, args.epsilon), args.k)}
    saved = dict(item.split("=", 1) for item in args.design)
    for name, tag in (("scl", "SCL(8)"), ("bp", "BP(50)")):
        if name in saved:
            designs[f"genalg-{name}"] = load_code(saved[name]).code
            continue
        cfg = GenAlgConfig(decoder=tag, snr_genalg_db=2.0, frames_per_eval=args.frames_per_eval,
                           max_generations=args.generations, master_seed=args.seed)
        t0 = time.perf_counter()
        res = run(cfg, args.N, args.k, threads=args.threads)
        print(f"# {tag}-tailored search: BER {res.best.fitness.ber:.3e} in {time.perf_counter() - t0:.0f} s")
        designs[f"genalg-{name}"] = res.best.code()

    print("design," + ",".join(decoders))
    for name, code in designs.items():
        cells = []
        for dec in decoders:
            snr = required_snr(code, DecoderSpec.parse(dec), grid, args.target_ber, rule, args.seed, args.threads)
            cells.append(f">{grid[-1]:g}" if snr is None else f"{snr:.2f}")
        print(name + "," + ",".join(cells), flush=True)


if __name__ == "__main__":
    main()
