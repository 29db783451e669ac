import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binauralkit.binaural import ComplexMask, StereoWaveform, mix_to_mono
from binauralkit.fixtures import oracle_fixtures, panned_sines
from binauralkit.harness import (
    FileMaskProvider,
    MaskProvider,
    MaskProviderError,
    OracleProvider,
    ZeroDifferenceProvider,
    binauralize,
    oracle_masks,
    plan_windows,
    stitch,
)
from binauralkit.maskfile import MaskFileError, read_mask_file, write_mask_file
from binauralkit.metrics import evaluate_all
from binauralkit.spectral import StftConfig, Waveform

import oracles

CFG = StftConfig()


@pytest.fixture(scope="module")
def fixture_pair():
    seed, truth = oracle_fixtures(1, first_seed=100, duration=1.55)[0]
    return truth, mix_to_mono(truth)


class TestPlan:
    def test_ten_seconds(self):
        plan = plan_windows(160000)
        assert plan.n_windows == plan.n_full == 91
        assert not plan.has_tail
        np.testing.assert_array_equal(plan.starts, np.arange(91) * 1600)
        assert plan.starts[-1] == 144000

    def test_single(self):
        plan = plan_windows(16000)
        assert plan.starts.tolist() == [0]

    def test_tail(self):
        plan = plan_windows(16800)
        assert plan.has_tail and plan.n_full == 1
        assert plan.starts.tolist() == [0, 800]
        assert plan.starts[-1] + plan.window_len == 16800

    def test_too_short(self):
        with pytest.raises(ValueError, match="shorter"):
            plan_windows(15999)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            plan_windows(16000, 0.0, 0.1)
        with pytest.raises(ValueError, match="gaps"):
            plan_windows(16000, 0.1, 0.2)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 200))
    def test_coverage_matches_interval_oracle(self, window, hop, extra):
        hop = min(hop, window)
        total = window + extra
        plan = plan_windows(total, window / 1000, hop / 1000, 1000)
        cov = plan.coverage()
        assert np.all(cov >= 1)
        np.testing.assert_array_equal(cov, oracles.interval_coverage(plan.starts, window, total))


class TestStitch:
    def test_identical_constants(self):
        plan = plan_windows(50, 0.02, 0.007, 1000)
        out = stitch([np.full(20, 0.25)] * plan.n_windows, plan)
        np.testing.assert_allclose(out, 0.25, atol=1e-15)

    def test_concatenation(self):
        plan = plan_windows(30, 0.01, 0.01, 1000)
        segs = [np.full(10, float(i)) for i in range(3)]
        np.testing.assert_array_equal(stitch(segs, plan), np.repeat([0.0, 1.0, 2.0], 10))

    def test_half_overlap(self):
        plan = plan_windows(15, 0.01, 0.005, 1000)
        out = stitch([np.zeros(10), np.ones(10)], plan)
        np.testing.assert_array_equal(out, [0] * 5 + [0.5] * 5 + [1] * 5)

    def test_validity_weights(self):
        plan = plan_windows(15, 0.01, 0.005, 1000)
        valid = [np.ones(10, bool), np.r_[np.zeros(1, bool), np.ones(9, bool)]]
        out = stitch([np.zeros(10), np.ones(10)], plan, valid)
        assert out[5] == 0.0  # second window invalid at its first sample
        assert out[6] == 0.5

    def test_errors(self):
        plan = plan_windows(15, 0.01, 0.005, 1000)
        with pytest.raises(ValueError):
            stitch([np.zeros(10)], plan)
        with pytest.raises(ValueError):
            stitch([np.zeros(10), np.zeros(9)], plan)


class TestBinauralize:
    def test_zero_provider(self, fixture_pair):
        _, mono = fixture_pair
        out = binauralize(mono, ZeroDifferenceProvider())
        assert np.array_equal(out.left.samples, mono.samples / 2)
        assert np.array_equal(out.right.samples, mono.samples / 2)
        np.testing.assert_allclose(mix_to_mono(out).samples, mono.samples, atol=1e-12, rtol=0)

    def test_oracle_provider(self, fixture_pair):
        truth, mono = fixture_pair
        out = binauralize(mono, OracleProvider(truth))
        for a, b in ((truth.left, out.left), (truth.right, out.right)):
            x, y = a.samples[400:-400], b.samples[400:-400]
            assert np.sqrt(np.mean((x - y) ** 2) / np.mean(x**2)) < 1e-4
        rep = evaluate_all(truth, out)
        assert rep.stft_distance < 1e-3
        assert rep.spl_distance < 0.1

    def test_single_window(self):
        truth = panned_sines(3, duration=1.0)
        mono = mix_to_mono(truth)
        out = binauralize(mono, OracleProvider(truth))
        np.testing.assert_allclose(out.left.samples[1:], truth.left.samples[1:], atol=1e-10)

    def test_deterministic_across_workers(self, fixture_pair):
        truth, mono = fixture_pair
        a = binauralize(mono, OracleProvider(truth))
        b = binauralize(mono, OracleProvider(truth), max_workers=4)
        assert a.left.samples.tobytes() == b.left.samples.tobytes()
        assert a.right.samples.tobytes() == b.right.samples.tobytes()

    def test_serial_provider_respected(self, fixture_pair):
        _, mono = fixture_pair
        calls = []

        class Serial(MaskProvider):
            concurrent_safe = False

            def mask(self, index, start, mono_spec):
                calls.append(index)
                return ComplexMask(np.zeros(mono_spec.shape))

        binauralize(mono, Serial(), max_workers=4)
        assert calls == list(range(len(calls)))

    def test_rate_mismatch(self):
        with pytest.raises(ValueError):
            binauralize(Waveform(np.zeros(16000), 8000), ZeroDifferenceProvider())

    def test_bad_mask_shape_names_window(self, fixture_pair):
        _, mono = fixture_pair

        class Broken(MaskProvider):
            def mask(self, index, start, mono_spec):
                return ComplexMask(np.zeros((3, 3)))

        with pytest.raises(MaskProviderError, match="window 0") as info:
            binauralize(mono, Broken())
        assert info.value.window == 0


class TestFileProvider:
    def test_roundtrip_matches_oracle(self, fixture_pair, tmp_path):
        truth, mono = fixture_pair
        plan, masks = oracle_masks(mono, truth)
        path = tmp_path / "m.bmsk"
        write_mask_file(path, masks, CFG, plan.window_len, plan.hop)
        header, loaded = read_mask_file(path)
        assert header.config == CFG and header.n_records == plan.n_windows
        for i in masks:
            assert np.array_equal(loaded[i], masks[i])
        a = binauralize(mono, FileMaskProvider(path))
        b = binauralize(mono, OracleProvider(truth))
        assert a.left.samples.tobytes() == b.left.samples.tobytes()

    def test_missing_window(self, fixture_pair, tmp_path):
        truth, mono = fixture_pair
        plan, masks = oracle_masks(mono, truth)
        del masks[3]
        path = tmp_path / "m.bmsk"
        write_mask_file(path, masks, CFG, plan.window_len, plan.hop)
        with pytest.raises(MaskProviderError, match="window 3"):
            binauralize(mono, FileMaskProvider(path))

    def test_config_mismatch(self, fixture_pair, tmp_path):
        _, mono = fixture_pair
        path = tmp_path / "m.bmsk"
        write_mask_file(path, {}, StftConfig(16000, 512, 128, 512), 16000, 1600)
        with pytest.raises(ValueError, match="config"):
            binauralize(mono, FileMaskProvider(path))
        write_mask_file(path, {}, CFG, 8000, 800)
        with pytest.raises(ValueError, match="windows"):
            binauralize(mono, FileMaskProvider(path))

    def test_byte_layout(self, tmp_path):
        path = tmp_path / "m.bmsk"
        data = np.arange(225 * 2).reshape(225, 2) * (1 + 0.5j)
        write_mask_file(path, {7: data}, CFG, 16000, 1600)
        raw = path.read_bytes()
        assert raw[:4] == b"BMSK"
        assert struct.unpack_from("<HHIIIIIIII", raw, 4) == (1, 0, 16000, 400, 240, 448, 16000, 1600, 1, 0)
        assert struct.unpack_from("<III", raw, 40) == (7, 225, 2)
        first = struct.unpack_from("<4d", raw, 52)
        assert first == (0.0, 0.0, 1.0, 0.5)  # bin 0: frame 0 re, im; frame 1 re, im
        assert len(raw) == 52 + 225 * 2 * 16

    @pytest.mark.parametrize(
        "mutate, match",
        [
            (lambda b: b"XXXX" + b[4:], "magic"),
            (lambda b: b[:4] + struct.pack("<H", 9) + b[6:], "version"),
            (lambda b: b[:30], "truncated"),
            (lambda b: b[:-8], "truncated"),
            (lambda b: b + b"\0", "trailing"),
            (lambda b: b[:44] + struct.pack("<I", 10) + b[48:], "bins"),
        ],
    )
    def test_corrupt_files(self, tmp_path, mutate, match):
        path = tmp_path / "m.bmsk"
        write_mask_file(path, {0: np.ones((225, 2))}, CFG, 16000, 1600)
        path.write_bytes(mutate(path.read_bytes()))
        with pytest.raises(MaskFileError, match=match):
            read_mask_file(path)

    def test_duplicate_index(self, tmp_path):
        path = tmp_path / "m.bmsk"
        write_mask_file(path, {0: np.ones((225, 1))}, CFG, 16000, 1600)
        raw = path.read_bytes()
        rec = raw[40:]
        raw = raw[:32] + struct.pack("<I", 2) + raw[36:40] + rec + rec
        path.write_bytes(raw)
        with pytest.raises(MaskFileError, match="duplicate"):
            read_mask_file(path)
