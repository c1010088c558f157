"""Text code files and ``key = value`` config documents."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gapolar.channel import RNG_NAME
from gapolar.core import PolarCode

FORMAT_VERSION = 1

PROVENANCE_KEYS = ("construction", "design_parameter", "decoder", "master_seed", "generations", "rng")


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


def parse_kv(text: str, source: str = "<string>") -> list[tuple[str, str]]:
    """Parse ``key = value`` lines; '#' starts a comment.  Keys may repeat."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise FormatError(f"{source}:{lineno}: empty key")
        pairs.append((key, value.strip()))
    return pairs


def read_kv(path) -> list[tuple[str, str]]:
    path = Path(path)
    return parse_kv(path.read_text(encoding="utf-8"), str(path))


@dataclass
class OperatingPoint:
    snr_db: float
    frames: int
    bit_errors: int
    block_errors: int


@dataclass
class CodeFile:
    code: PolarCode
    provenance: dict = field(default_factory=dict)
    operating_points: list[OperatingPoint] = field(default_factory=list)
    format_version: int = FORMAT_VERSION

    @property
    def N(self) -> int:
        return self.code.N

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def info_set(self) -> list[int]:
        """1-based information positions."""
        return [int(i) + 1 for i in self.code.info_set]

    def digest(self) -> str:
        return self.code.digest()

    def dumps(self) -> str:
        lines = [
            "# polar code file; positions are 1-based",
            f"format_version = {self.format_version}",
            f"N = {self.N}",
            f"k = {self.k}",
            f"crc_bits = {self.code.crc_bits}",
            f"a_vector = {self.code.a_string()}",
            "info_set = " + " ".join(str(i) for i in self.info_set),
            f"digest = {self.digest()}",
        ]
        for key in PROVENANCE_KEYS:
            if key in self.provenance and self.provenance[key] is not None:
                lines.append(f"{key} = {self.provenance[key]}")
        for p in self.operating_points:
            lines.append(f"operating_point = {p.snr_db:g},{p.frames},{p.bit_errors},{p.block_errors}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, source: str = "<string>", zero_based: bool = False) -> "CodeFile":
        pairs = parse_kv(text, source)
        single: dict[str, str] = {}
        points = []
        for key, value in pairs:
            if key == "operating_point":
                try:
                    snr, frames, be, ble = value.split(",")
                    points.append(OperatingPoint(float(snr), int(frames), int(be), int(ble)))
                except ValueError:
                    raise FormatError(f"{source}: bad operating_point {value!r}") from None
            elif key in single:
                raise FormatError(f"{source}: duplicate key {key!r}")
            else:
                single[key] = value
        try:
            version = int(single.get("format_version", FORMAT_VERSION))
            if version != FORMAT_VERSION:
                raise FormatError(f"{source}: unsupported format_version {version}")
            N = int(single["N"])
            k = int(single["k"])
            crc_bits = int(single.get("crc_bits", 0))
        except KeyError as e:
            raise FormatError(f"{source}: missing key {e.args[0]!r}") from None
        except ValueError as e:
            raise FormatError(f"{source}: {e}") from None

        a_vec = None
        if "a_vector" in single:
            s = single["a_vector"].replace(" ", "")
            if len(s) != N or set(s) - {"0", "1"}:
                raise FormatError(f"{source}: a_vector must be {N} characters of 0/1")
            a_vec = np.array([int(c) for c in s], dtype=np.uint8)
        from_set = None
        if "info_set" in single:
            try:
                idx = [int(t) for t in single["info_set"].replace(",", " ").split()]
            except ValueError:
                raise FormatError(f"{source}: info_set must be integers") from None
            offset = 0 if zero_based else 1
            from_set = np.zeros(N, dtype=np.uint8)
            for i in idx:
                if not 0 <= i - offset < N:
                    raise FormatError(f"{source}: info_set index {i} out of range")
                if from_set[i - offset]:
                    raise FormatError(f"{source}: duplicate info_set index {i}")
                from_set[i - offset] = 1
        if a_vec is None and from_set is None:
            raise FormatError(f"{source}: need a_vector or info_set")
        if a_vec is not None and from_set is not None and not np.array_equal(a_vec, from_set):
            raise FormatError(f"{source}: a_vector and info_set disagree")
        a = a_vec if a_vec is not None else from_set
        if int(a.sum()) != k:
            raise FormatError(f"{source}: A-vector has {int(a.sum())} ones but k = {k}")
        try:
            code = PolarCode(a, crc_bits=crc_bits)
        except ValueError as e:
            raise FormatError(f"{source}: {e}") from None
        if "digest" in single and single["digest"] != code.digest():
            raise FormatError(f"{source}: digest mismatch (file edited without updating digest?)")
        prov = {key: single[key] for key in PROVENANCE_KEYS if key in single}
        return cls(code, prov, points, version)


def save_code(path, cf: CodeFile):
    cf.provenance.setdefault("rng", RNG_NAME)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cf.dumps(), encoding="utf-8")


def load_code(path, zero_based: bool = False) -> CodeFile:
    path = Path(path)
    return CodeFile.loads(path.read_text(encoding="utf-8"), str(path), zero_based)
