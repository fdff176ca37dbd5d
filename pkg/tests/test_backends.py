"""Parity between the compiled extension and the pure-Python fallback.

Both must produce identical bytes for the coder and bitwise-identical
float32 maps for the convolution (same float64 accumulation order, no
FMA contraction in the extension build).
"""

import subprocess
import sys

import numpy as np
import pytest

from mamcodec import _pykernels

_ckernels = pytest.importorskip(
    "mamcodec._ckernels", reason="compiled backend not built")


def random_conv_case(rng, stride):
    c_in = int(rng.integers(1, 6))
    c_out = int(rng.integers(1, 6))
    h = int(rng.integers(1, 40))
    w = int(rng.integers(1, 40))
    x = rng.standard_normal((c_in, h, w)).astype(np.float32)
    padded = np.zeros((c_in, h + 2, w + 2), np.float32)
    padded[:, 1:-1, 1:-1] = x
    kernel = rng.standard_normal((c_out, c_in, 3, 3)).astype(np.float32)
    bias = rng.standard_normal(c_out).astype(np.float32)
    return padded, kernel, bias, stride


class TestConvParity:
    @pytest.mark.parametrize("stride", [1, 2])
    @pytest.mark.parametrize("act", [0, 1, 2])
    def test_bitwise_equal(self, stride, act):
        rng = np.random.default_rng(1000 * stride + act)
        for _ in range(10):
            padded, kernel, bias, stride_ = random_conv_case(rng, stride)
            py = _pykernels.conv2d_f32(padded, kernel, bias, stride_, act)
            cy = _ckernels.conv2d_f32(padded, kernel, bias, stride_, act)
            assert py.shape == cy.shape
            assert np.array_equal(py, cy)

    def test_cross_backend_tolerance_contract(self):
        # The documented cross-implementation guarantee is 1e-6 relative;
        # bitwise equality above is stronger but this is the contract.
        rng = np.random.default_rng(7)
        padded, kernel, bias, stride = random_conv_case(rng, 1)
        py = _pykernels.conv2d_f32(padded, kernel, bias, stride, 0)
        cy = _ckernels.conv2d_f32(padded, kernel, bias, stride, 0)
        assert np.allclose(py, cy, rtol=1e-6, atol=1e-6)


class TestCoderParity:
    def test_identical_payloads(self):
        rng = np.random.default_rng(8)
        for trial in range(40):
            length = int(rng.integers(0, 5000))
            if trial % 3 == 0:
                data = rng.integers(0, 256, length, dtype=np.uint8).tobytes()
            elif trial % 3 == 1:
                data = bytes([7]) * length
            else:
                data = rng.integers(0, 3, length, dtype=np.uint8).tobytes()
            py_payload = _pykernels.aac_encode(data)
            cy_payload = _ckernels.aac_encode(data)
            assert py_payload == cy_payload
            assert _pykernels.aac_decode(py_payload, length) == data
            assert _ckernels.aac_decode(cy_payload, length) == data

    def test_fnv1a64_matches(self):
        rng = np.random.default_rng(9)
        for length in (0, 1, 7, 100, 10_000):
            data = rng.integers(0, 256, length, dtype=np.uint8).tobytes()
            assert _pykernels.fnv1a64(data) == _ckernels.fnv1a64(data)
        # Known FNV-1a test vector.
        assert _pykernels.fnv1a64(b"") == 0xCBF29CE484222325


class TestSelection:
    def run_probe(self, env_value):
        code = ("import mamcodec; print(mamcodec.backend_name())")
        cmd = [sys.executable, "-c", code]
        import os
        env = dict(os.environ, MAMCODEC_BACKEND=env_value)
        if not env_value:
            env.pop("MAMCODEC_BACKEND")
        return subprocess.run(cmd, capture_output=True, text=True, env=env)

    def test_default_prefers_compiled(self):
        probe = self.run_probe("")
        assert probe.returncode == 0
        assert probe.stdout.strip() == "cython"

    def test_force_python(self):
        probe = self.run_probe("python")
        assert probe.returncode == 0
        assert probe.stdout.strip() == "python"

    def test_unknown_value_fails(self):
        probe = self.run_probe("fortran")
        assert probe.returncode != 0


class TestPipelineParity:
    def test_container_bytes_identical_across_backends(self, tmp_path):
        # compress the same image under both backends in subprocesses and
        # compare the container files byte for byte.
        import os
        script = tmp_path / "roundtrip.py"
        script.write_text(
            "import sys\n"
            "from mamcodec.fixtures import fixture_weights, synthetic_image\n"
            "from mamcodec.container import compress_image\n"
            "blob = compress_image(synthetic_image(64, 96), 16,"
            " fixture_weights(), 6)\n"
            "open(sys.argv[1], 'wb').write(blob)\n")
        blobs = {}
        for backend in ("python", "cython"):
            out = tmp_path / f"{backend}.mamc"
            env = dict(os.environ, MAMCODEC_BACKEND=backend)
            subprocess.run([sys.executable, str(script), str(out)],
                           check=True, env=env)
            blobs[backend] = out.read_bytes()
        assert blobs["python"] == blobs["cython"]
