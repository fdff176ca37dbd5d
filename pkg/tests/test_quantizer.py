import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mamcodec.errors import ContractViolationError
from mamcodec.quantizer import LatentCode, float2int, int2float

ALL_BITS = (1, 2, 4, 6, 8, 10, 12, 14, 16)


def as_tensor(*values):
    return np.asarray(values, np.float32).reshape(1, 1, -1)


class TestFloat2Int:
    def test_endpoints(self):
        assert float2int(as_tensor(1.0), 2).values.ravel()[0] == 3
        assert float2int(as_tensor(0.0), 8).values.ravel()[0] == 0

    def test_tie_rounds_away_from_zero(self):
        # n=4: 15 * 0.5 = 7.5 exactly; away-from-zero gives 8.
        assert float2int(as_tensor(0.5), 4).values.ravel()[0] == 8

    def test_out_of_range_input_rejected(self):
        with pytest.raises(ContractViolationError):
            float2int(as_tensor(1.0001), 4)
        with pytest.raises(ContractViolationError):
            float2int(as_tensor(-0.0001), 4)

    def test_bad_bit_length_rejected(self):
        for n in (0, 17, 1.5, "8"):
            with pytest.raises(ContractViolationError):
                float2int(as_tensor(0.5), n)

    def test_monotonic(self):
        rng = np.random.default_rng(2)
        values = np.sort(rng.random(4096, dtype=np.float32))
        for n in (1, 5, 16):
            codes = float2int(values.reshape(1, 1, -1), n).values.ravel()
            assert (np.diff(codes.astype(np.int32)) >= 0).all()


class TestInt2Float:
    def test_endpoints(self):
        assert int2float(LatentCode(2, np.full((1, 1, 1), 3, np.uint16))) == 1.0
        assert int2float(LatentCode(14, np.zeros((1, 1, 1), np.uint16))) == 0.0

    @pytest.mark.parametrize("n", ALL_BITS)
    def test_integers_are_fixed_points(self, n):
        values = np.arange(min(1 << n, 1 << 16), dtype=np.uint16)
        code = LatentCode(n, values.reshape(1, 1, -1))
        assert np.array_equal(float2int(int2float(code), n).values, code.values)

    @pytest.mark.parametrize("n", ALL_BITS)
    def test_reconstruction_bound_sampled(self, n):
        rng = np.random.default_rng(100 + n)
        x = rng.random(200_000, dtype=np.float32).reshape(1, 1, -1)
        err = np.abs(int2float(float2int(x, n)).astype(np.float64) -
                     x.astype(np.float64))
        assert err.max() <= 0.5 / ((1 << n) - 1)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 1.0, width=32), st.sampled_from(ALL_BITS))
    def test_reconstruction_bound_property(self, value, n):
        x = as_tensor(value)
        err = abs(float(int2float(float2int(x, n))[0, 0, 0]) - float(x[0, 0, 0]))
        assert err <= 0.5 / ((1 << n) - 1)

    def test_latent_code_range_enforced(self):
        with pytest.raises(ContractViolationError):
            LatentCode(2, np.full((1, 1, 1), 4, np.uint16))
