"""Command-line interface: ``gapolar <subcommand> ...``.

Exit codes: 0 ok, 1 user error (bad arguments, malformed files), 2 internal error.
Options can also be supplied through ``--config FILE`` (``key = value``
lines, option names with underscores); command-line values win.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from gapolar import genalg
from gapolar.charts import chart_csv, frozen_chart
from gapolar.codefile import CodeFile, FormatError, OperatingPoint, load_code, read_kv, save_code
from gapolar.constructions import (bhattacharyya_bec, default_hybrid_min_weight, info_set_from_profile,
                                   rm_info_set, rm_polar_hybrid)
from gapolar.core import DMIN_BRUTEFORCE_MAX_K, PolarCode, dmin_bruteforce, dmin_upper
from gapolar.crc import parse_polynomial
from gapolar.decoders import DecoderSpec
from gapolar.sim import StopRule, monte_carlo_sweep

log = logging.getLogger("gapolar")


class UserError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_snr_list(text: str) -> list[float]:
    """'1,1.5,2' or inclusive range 'start:stop:step'."""
    text = str(text).strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise UserError(f"bad SNR range {text!r}; use start:stop:step with step > 0")
        start, stop, step = parts
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(max(count, 0))]
    try:
        return [float(p) for p in text.replace(" ", "").split(",") if p]
    except ValueError:
        raise UserError(f"bad SNR list {text!r}") from None


# per-command option defaults, applied after config-file merging
_DEFAULTS = {
    "baseline": {"method": "all", "epsilon": 0.5, "min_weight": None, "out_dir": ".", "crc_bits": 0},
    "simulate": {"decoder": "SC", "snr": None, "min_block_errors": 500, "max_frames": 10_000_000,
                 "min_frames": 0, "out": None, "crc_polynomial": None},
    "chart": {"epsilon": 0.5, "columns": None, "out": None},
    "construct": {"out": None, "history": None, "max_generations": None},
}
_TYPES = {"epsilon": float, "min_weight": int, "min_block_errors": int, "max_frames": int,
          "min_frames": int, "columns": int, "max_generations": int, "crc_bits": int, "N": int, "k": int}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master RNG seed")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key = value config file")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = _Parser(prog="gapolar", description="Polar code construction and simulation workbench.")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    c = sub.add_parser("construct", parents=[common], help="run the genetic construction")
    c.add_argument("--out", help="code file to write")
    c.add_argument("--history", help="history CSV (default: <out>.history.csv)")
    c.add_argument("--max-generations", type=int, dest="max_generations")

    b = sub.add_parser("baseline", parents=[common], help="write Bhattacharyya/RM/hybrid code files")
    b.add_argument("--N", type=int, dest="N")
    b.add_argument("--k", type=int, dest="k")
    b.add_argument("--method", choices=["bhattacharyya", "rm", "hybrid", "all"])
    b.add_argument("--epsilon", type=float, help="BEC design erasure probability")
    b.add_argument("--min-weight", type=int, dest="min_weight")
    b.add_argument("--crc-bits", type=int, dest="crc_bits")
    b.add_argument("--out-dir", dest="out_dir")

    s = sub.add_parser("simulate", parents=[common], help="BER/BLER sweep to CSV")
    s.add_argument("code")
    s.add_argument("--decoder", help="SC, SCL(L), SCL+CRC-r(L) or BP(N)")
    s.add_argument("--snr", help="'1,1.5,2' or 'start:stop:step' (Eb/N0 in dB)")
    s.add_argument("--min-block-errors", type=int, dest="min_block_errors")
    s.add_argument("--max-frames", type=int, dest="max_frames")
    s.add_argument("--min-frames", type=int, dest="min_frames")
    s.add_argument("--crc-polynomial", dest="crc_polynomial")
    s.add_argument("--out")
    s.add_argument("--zero-based", action="store_true", help="info_set in the file is 0-based")

    ch = sub.add_parser("chart", parents=[common], help="frozen-channel chart to CSV")
    ch.add_argument("code")
    ch.add_argument("--epsilon", type=float, help="BEC profile used to order positions")
    ch.add_argument("--columns", type=int)
    ch.add_argument("--out")
    ch.add_argument("--zero-based", action="store_true")

    d = sub.add_parser("dmin", parents=[common], help="minimum distance of a code file")
    d.add_argument("code")
    d.add_argument("--zero-based", action="store_true")

    i = sub.add_parser("info", parents=[common], help="print code file metadata")
    i.add_argument("code")
    i.add_argument("--zero-based", action="store_true")
    return p


def _config_pairs(path) -> dict:
    pairs = read_kv(path)
    out = {}
    for key, value in pairs:
        if key in out:
            raise UserError(f"{path}: duplicate key {key!r}")
        out[key] = value
    return out


def _merge(args, config: dict):
    for key, default in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            if key in config:
                conv = _TYPES.get(key, str)
                setattr(args, key, conv(config[key]))
            else:
                setattr(args, key, default)
    for key in ("N", "k"):
        if hasattr(args, key) and getattr(args, key) is None and key in config:
            setattr(args, key, int(config[key]))
    if args.seed is None and "master_seed" in config and args.command != "construct":
        args.seed = int(config["master_seed"], 0)


def _emit(text: str, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_construct(args, config) -> int:
    if not config:
        raise UserError("construct needs --config with at least N and k")
    values = dict(config)
    if args.seed is not None:
        values["master_seed"] = str(args.seed)
    if args.max_generations is not None:
        values["max_generations"] = str(args.max_generations)
    cfg, N, k, rest = genalg.config_from_mapping(values)
    out = args.out or rest.pop("out", None)
    history = args.history or rest.pop("history", None)
    unknown = set(rest) - {"out", "history", "threads"}
    if unknown:
        raise UserError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if not out:
        raise UserError("construct needs --out (or 'out' in the config)")
    history = history or str(out) + ".history.csv"

    def progress(h):
        log.info("generation %d: best BER %.4e, median %.4e (%s)", h.generation, h.best_ber,
                 h.median_ber, h.best_digest)

    result = genalg.run(cfg, N, k, threads=args.threads, progress=progress)
    best = result.best
    st = best.fitness
    cf = CodeFile(best.code(cfg.decoder.crc_bits), {
        "construction": "genalg",
        "design_parameter": f"{cfg.snr_genalg_db:g} dB",
        "decoder": cfg.decoder.tag,
        "master_seed": cfg.master_seed,
        "generations": cfg.max_generations,
    }, [OperatingPoint(cfg.snr_genalg_db, st.frames, st.bit_errors, st.block_errors)])
    save_code(out, cf)
    Path(history).parent.mkdir(parents=True, exist_ok=True)
    Path(history).write_text(result.history_csv(), encoding="utf-8")
    print(f"best {best.origin or 'candidate'} digest={cf.digest()} BER={st.ber:.4e} "
          f"at {cfg.snr_genalg_db:g} dB -> {out}")
    return 0


def cmd_baseline(args, config) -> int:
    if args.N is None or args.k is None:
        raise UserError("baseline needs --N and --k")
    N, k = args.N, args.k
    n = N.bit_length() - 1
    if 1 << n != N:
        raise UserError(f"N={N} is not a power of two")
    eps = args.epsilon
    prof = bhattacharyya_bec(n, eps)
    methods = ["bhattacharyya", "rm", "hybrid"] if args.method == "all" else [args.method]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for m in methods:
        if m == "bhattacharyya":
            code = info_set_from_profile(prof, k, crc_bits=args.crc_bits)
            prov = {"construction": "bhattacharyya-bec", "design_parameter": f"eps={eps:g}"}
        elif m == "rm":
            code = rm_info_set(n, k)
            prov = {"construction": "rm", "design_parameter": "none"}
        else:
            w = args.min_weight or default_hybrid_min_weight(n, k, prof)
            code = rm_polar_hybrid(n, k, prof, w, crc_bits=args.crc_bits)
            prov = {"construction": "rm-polar-hybrid", "design_parameter": f"eps={eps:g},min_weight={w}"}
        if m == "rm" and args.crc_bits:
            code = PolarCode(code.a_vector, crc_bits=args.crc_bits)
        path = out_dir / f"{m}_N{N}_k{k}.txt"
        save_code(path, CodeFile(code, prov))
        print(path)
    return 0


def cmd_simulate(args, config) -> int:
    cf = load_code(args.code, args.zero_based)
    if args.snr is None:
        raise UserError("simulate needs --snr")
    snrs = parse_snr_list(args.snr)
    poly = parse_polynomial(args.crc_polynomial) if args.crc_polynomial else None
    spec = DecoderSpec.parse(args.decoder, crc_polynomial=poly)
    if cf.code.crc_bits and spec.crc_bits != cf.code.crc_bits:
        raise UserError(f"code file carries a {cf.code.crc_bits}-bit CRC but decoder is {spec.tag}")
    rule = StopRule(args.min_block_errors, args.max_frames, args.min_frames)
    seed = 0 if args.seed is None else args.seed
    result = monte_carlo_sweep(cf.code, spec, snrs, rule, seed, args.threads)
    _emit(result.to_csv(), args.out)
    return 0


def cmd_chart(args, config) -> int:
    cf = load_code(args.code, args.zero_based)
    prof = bhattacharyya_bec(cf.code.n, args.epsilon)
    _emit(chart_csv(frozen_chart(cf.code, prof, args.columns)), args.out)
    return 0


def cmd_dmin(args, config) -> int:
    cf = load_code(args.code, args.zero_based)
    print(f"dmin_upper = {dmin_upper(cf.code)}")
    if cf.k <= DMIN_BRUTEFORCE_MAX_K:
        print(f"dmin_bruteforce = {dmin_bruteforce(cf.code)}")
    return 0


def cmd_info(args, config) -> int:
    cf = load_code(args.code, args.zero_based)
    print(f"N = {cf.N}")
    print(f"k = {cf.k}")
    print(f"crc_bits = {cf.code.crc_bits}")
    print(f"rate = {cf.code.rate:g}")
    print(f"digest = {cf.digest()}")
    print(f"dmin_upper = {dmin_upper(cf.code)}")
    for key, value in cf.provenance.items():
        print(f"{key} = {value}")
    for p in cf.operating_points:
        ber = p.bit_errors / (p.frames * cf.code.payload_bits)
        print(f"operating_point = {p.snr_db:g} dB, frames {p.frames}, BER {ber:.4e}")
    return 0


COMMANDS = {"construct": cmd_construct, "baseline": cmd_baseline, "simulate": cmd_simulate,
            "chart": cmd_chart, "dmin": cmd_dmin, "info": cmd_info}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads < 1:
            raise UserError("--threads must be >= 1")
        config = _config_pairs(args.config) if args.config else {}
        _merge(args, config)
        return COMMANDS[args.command](args, config)
    except (UserError, FormatError, ValueError, OSError) as e:
        print(f"gapolar: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        log.exception("internal error")
        print(f"gapolar: internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
