import math

import numpy as np
import pytest

from gapolar.charts import chart_csv, frozen_chart
from gapolar.constructions import ReliabilityProfile, bhattacharyya_bec, info_set_from_profile
from gapolar.core import PolarCode
from gapolar.decoders import DecoderSpec
from gapolar.sim import ErrorStats, FrameSimulator, StopRule, monte_carlo_sweep


@pytest.fixture(scope="module")
def p6432():
    return info_set_from_profile(bhattacharyya_bec(6, 0.5), 32)


def test_error_stats():
    s = ErrorStats(10, 5, 2, 4)
    assert s.ber == pytest.approx(5 / 40) and s.bler == pytest.approx(0.2)
    assert (s + s).frames == 20
    with pytest.raises(ValueError):
        ErrorStats(1, 5, 0, 4)
    with pytest.raises(ValueError):
        ErrorStats(1, 0, 2, 4)


def test_sweep_noiseless(p6432):
    r = monte_carlo_sweep(p6432, DecoderSpec.parse("SC"), [math.inf], StopRule(10, 2000))
    assert r.points[0].stats.frames == 2000 and r.points[0].stats.bit_errors == 0


def test_sweep_waterfall_and_determinism(p6432):
    spec = DecoderSpec.parse("SC")
    rule = StopRule(min_block_errors=100, max_frames=200_000)
    a = monte_carlo_sweep(p6432, spec, [0.0, 1.0, 2.0, 3.0], rule, master_seed=5)
    bers = [p.stats.ber for p in a.points]
    assert all(b < x for x, b in zip(bers, bers[1:]))
    assert all(p.stats.block_errors == 100 for p in a.points)
    b = monte_carlo_sweep(p6432, spec, [0.0, 1.0, 2.0, 3.0], rule, master_seed=5, threads=3)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv().splitlines()[0] == "snr_db,frames,bit_errors,block_errors,ber,bler"


def test_stop_rule_bounds(p6432):
    spec = DecoderSpec.parse("SC")
    r = monte_carlo_sweep(p6432, spec, [4.0], StopRule(10 ** 6, max_frames=1000))
    assert r.points[0].stats.frames == 1000
    r = monte_carlo_sweep(p6432, spec, [0.0], StopRule(5, max_frames=10 ** 5, min_frames=3000))
    assert r.points[0].stats.frames == 3000


def test_sweep_errors(p6432):
    spec = DecoderSpec.parse("SC")
    with pytest.raises(ValueError):
        monte_carlo_sweep(p6432, spec, [])
    with pytest.raises(ValueError):
        monte_carlo_sweep(p6432, spec, [2.0, 1.0])


def test_crc_frames_carry_valid_crc():
    code = PolarCode(info_set_from_profile(bhattacharyya_bec(6, 0.5), 40).a_vector)
    sim = FrameSimulator(code, DecoderSpec.parse("SCL+CRC-16(4)"))
    assert sim.code.crc_bits == 16 and sim.code.payload_bits == 24
    errs = sim.run_chunk(math.inf, (0, 0, 0), 50)
    assert not errs.any()


def test_frozen_chart_shapes():
    prof = bhattacharyya_bec(11, 0.32)
    code = info_set_from_profile(prof, 1024)
    chart = frozen_chart(code, prof, 128)
    assert chart.shape == (16, 128)
    assert chart.sum() == 2048 - 1024
    assert frozen_chart(PolarCode(np.zeros(16)), bhattacharyya_bec(4, 0.5)).all()
    with pytest.raises(ValueError):
        frozen_chart(code, prof, 100)


def test_frozen_chart_ordering():
    prof = ReliabilityProfile(np.array([0.1, 0.9, 0.5, 0.5]))
    code = PolarCode.from_info_set(4, [1], one_based=True)
    chart = frozen_chart(code, prof, 2)
    # order by decreasing Z: pos2 (0.9), pos3, pos4 (tie -> index), pos1
    assert chart.tolist() == [[1, 1], [1, 0]]
    assert chart_csv(chart) == "1,1\n1,0\n"
