import numpy as np
import pytest

from gapolar.codefile import CodeFile, FormatError, OperatingPoint, load_code, parse_kv, save_code
from gapolar.core import PolarCode

P84_TEXT = """\
format_version = 1
N = 8
k = 4
a_vector = 00010111
info_set = 4 6 7 8
"""


def test_p84_example():
    cf = CodeFile.loads(P84_TEXT)
    assert cf.info_set == [4, 6, 7, 8]
    assert cf.code.a_string() == "00010111"
    only_set = CodeFile.loads("N = 8\nk = 4\ninfo_set = 4,6,7,8\n")
    assert only_set.code == cf.code
    zero = CodeFile.loads("N = 8\nk = 4\ninfo_set = 3 5 6 7\n", zero_based=True)
    assert zero.code == cf.code


def test_roundtrip(tmp_path):
    code = PolarCode.from_info_set(16, [4, 8, 12, 14, 15, 16], one_based=True)
    cf = CodeFile(code, {"construction": "genalg", "decoder": "SCL(8)", "master_seed": 3},
                  [OperatingPoint(2.0, 1000, 12, 3)])
    path = tmp_path / "c.txt"
    save_code(path, cf)
    back = load_code(path)
    assert back == load_code(path)
    assert back.code == cf.code and back.operating_points == cf.operating_points
    assert back.provenance["construction"] == "genalg"
    assert back.dumps() == path.read_text()
    assert back.digest() == code.digest()


@pytest.mark.parametrize("text,msg", [
    ("N = 8\nk = 4\na_vector = 00000111\n", "ones"),
    ("N = 8\nk = 4\na_vector = 00010111\ninfo_set = 1 6 7 8\n", "disagree"),
    ("N = 8\nk = 4\na_vector = 0001011\n", "characters"),
    ("N = 8\nk = 4\n", "need"),
    ("N = 8\na_vector = 00010111\n", "missing"),
    ("N = 8\nk = 4\ninfo_set = 4 6 7 9\n", "out of range"),
    ("N = 8\nk = 4\na_vector = 00010111\ndigest = deadbeef\n", "digest"),
    ("just garbage\n", "key = value"),
    ("format_version = 7\nN = 8\nk = 4\na_vector = 00010111\n", "format_version"),
])
def test_malformed(text, msg):
    with pytest.raises(FormatError, match=msg):
        CodeFile.loads(text)


def test_parse_kv_comments_and_repeats():
    pairs = parse_kv("# c\na = 1  # trailing\n\nb=2\na = 3\n")
    assert pairs == [("a", "1"), ("b", "2"), ("a", "3")]


def test_digest_stable():
    code = PolarCode(np.array([0, 0, 0, 1, 0, 1, 1, 1]))
    assert code.digest() == "ef9e5e01b2fbfeb7"
