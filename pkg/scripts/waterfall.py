"""BER/BLER waterfall for one or more saved codes under one decoder.

    python3 scripts/waterfall.py results/*.txt --decoder "SCL(8)" --snr 0:4:0.5
"""
import argparse
from pathlib import Path

from gapolar.cli import parse_snr_list
from gapolar.codefile import load_code
from gapolar.decoders import DecoderSpec
from gapolar.sim import StopRule, monte_carlo_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("codes", nargs="+")
    ap.add_argument("--decoder", default="SC")
    ap.add_argument("--snr", default="0:4:0.5")
    ap.add_argument("--min-block-errors", type=int, default=500)
    ap.add_argument("--max-frames", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    spec = DecoderSpec.parse(args.decoder)
    snrs = parse_snr_list(args.snr)
    rule = StopRule(args.min_block_errors, args.max_frames)
    print("code,snr_db,frames,bit_errors,block_errors,ber,bler")
    for path in args.codes:
        code = load_code(path).code
        res = monte_carlo_sweep(code, spec, snrs, rule, args.seed, args.threads)
        for line in res.to_csv().splitlines()[1:]:
            print(f"{Path(path).stem},{line}", flush=True)


if __name__ == "__main__":
    main()
