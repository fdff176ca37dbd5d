import math

import numpy as np
import pytest

from mamcodec.errors import ContractViolationError
from mamcodec.metrics import (
    MetricsReport,
    bpp_report,
    distinct_values,
    latent_entropy,
    psnr,
    ssim,
)
from mamcodec.quantizer import LatentCode
from oracles import psnr_oracle, ssim_oracle


def random_pair(rng, shape=(24, 31), correlated=True):
    ref = rng.random(shape)
    if correlated:
        test = np.clip(ref + rng.normal(0, 0.05, shape), 0.0, 1.0)
    else:
        test = rng.random(shape)
    return ref, test


class TestPsnr:
    def test_identical_is_infinite(self):
        rng = np.random.default_rng(0)
        img = rng.random((16, 16))
        assert psnr(img, img) == math.inf

    def test_constant_half_step(self):
        ref = np.zeros((8, 8))
        test = np.full((8, 8), 0.5)
        assert psnr(ref, test) == pytest.approx(6.0206, abs=1e-4)

    def test_matches_oracle(self):
        rng = np.random.default_rng(1)
        for i in range(10):
            ref, test = random_pair(rng, correlated=i % 2 == 0)
            assert psnr(ref, test) == pytest.approx(
                psnr_oracle(ref.tolist(), test.tolist()), abs=1e-6)

    def test_monotone_in_noise_amplitude(self):
        rng = np.random.default_rng(2)
        ref = rng.random((32, 32))
        noise = rng.standard_normal((32, 32))
        values = [psnr(ref, np.clip(ref + amp * noise, 0, 1))
                  for amp in (0.01, 0.02, 0.05, 0.1, 0.2)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_dim_mismatch(self):
        with pytest.raises(ContractViolationError):
            psnr(np.zeros((4, 4)), np.zeros((4, 5)))


class TestSsim:
    def test_self_similarity_is_one(self):
        rng = np.random.default_rng(3)
        img = rng.random((20, 20))
        assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_constant_images(self):
        a = np.full((16, 16), 0.3)
        assert ssim(a, a.copy()) == pytest.approx(1.0, abs=1e-12)
        # Different constants: structure/contrast terms degenerate to 1,
        # only the luminance term remains.
        b = np.full((16, 16), 0.5)
        c1 = 0.01 ** 2
        expected = (2 * 0.3 * 0.5 + c1) / (0.3 ** 2 + 0.5 ** 2 + c1)
        assert ssim(a, b) == pytest.approx(expected, rel=1e-9)

    def test_matches_oracle(self):
        rng = np.random.default_rng(4)
        for i in range(4):
            ref, test = random_pair(rng, shape=(16, 18), correlated=i % 2 == 0)
            assert ssim(ref, test) == pytest.approx(
                ssim_oracle(ref.tolist(), test.tolist()), abs=1e-6)

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        ref, test = random_pair(rng)
        assert ssim(ref, test) == pytest.approx(ssim(test, ref), abs=1e-12)

    def test_too_small_rejected(self):
        with pytest.raises(ContractViolationError):
            ssim(np.zeros((10, 16)), np.zeros((10, 16)))

    def test_dim_mismatch(self):
        with pytest.raises(ContractViolationError):
            ssim(np.zeros((16, 16)), np.zeros((16, 17)))


class TestLatentEntropy:
    def test_constant_is_zero(self):
        code = LatentCode(8, np.full((2, 3, 4), 5, np.uint16))
        assert latent_entropy(code) == 0.0
        assert distinct_values(code) == 1

    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_uniform_is_n_bits(self, n):
        values = np.arange(1 << n, dtype=np.uint16).reshape(1, 1, -1)
        assert latent_entropy(LatentCode(n, values)) == pytest.approx(float(n))

    def test_bounded_by_n(self):
        rng = np.random.default_rng(6)
        for n in (1, 3, 7, 12):
            values = rng.integers(0, 1 << n, (4, 5, 6)).astype(np.uint16)
            h = latent_entropy(LatentCode(n, values))
            assert 0.0 <= h <= n


class TestBppReport:
    def test_small_file(self):
        bpp, factor = bpp_report(1024, 256, 256, 16)
        assert bpp == 0.125
        assert factor == 128.0

    def test_paper_scale_examples(self):
        # 12 bpp source at 0.04 bpp is a >300x factor; 0.049 bpp ~244.9x.
        bpp, factor = bpp_report(5000, 1000, 1000, 12)
        assert bpp == 0.04
        assert factor == pytest.approx(300.0, rel=1e-12)
        bpp, factor = bpp_report(6125, 1000, 1000, 12)
        assert bpp == 0.049
        assert factor == pytest.approx(244.898, abs=1e-3)

    def test_bytes_input(self):
        bpp, factor = bpp_report(b"\x00" * 100, 10, 10, 8)
        assert bpp == 8.0
        assert factor == 1.0


class TestReportSerialization:
    def test_kv_round_trip(self):
        report = MetricsReport(psnr_db=41.25, ssim=0.9875,
                               entropy_bits=2.44, bpp=0.049,
                               compression_factor=244.9)
        parsed = MetricsReport.from_kv_text(report.to_kv_text())
        assert parsed == report

    def test_json_round_trip_with_optional_fields(self):
        report = MetricsReport(psnr_db=30.0, ssim=0.8)
        parsed = MetricsReport.from_json(report.to_json())
        assert parsed == report
        assert parsed.bpp is None

    def test_infinite_psnr_round_trips(self):
        report = MetricsReport(psnr_db=math.inf, ssim=1.0)
        assert MetricsReport.from_kv_text(report.to_kv_text()) == report
        assert MetricsReport.from_json(report.to_json()) == report
