"""Compiled kernels agree with their pure-Python fallbacks."""

import random

import numpy as np
import pytest

from afcsim import _kernels

SCALAR_KERNELS = [
    "haversine_m",
    "initial_bearing_raw_deg",
    "fspl_db",
    "two_regime_path_loss_db",
    "noise_floor_dbm",
    "off_axis_deg",
]


def _fallback(name):
    fn = getattr(_kernels, name)
    return getattr(fn, "py_func", fn)


def test_engine_flag_is_reported():
    assert isinstance(_kernels.USING_NUMBA, bool)


@pytest.mark.parametrize("seed", range(5))
def test_haversine_paths_agree(seed):
    rng = random.Random(seed)
    for _ in range(50):
        args = (
            rng.uniform(-89, 89), rng.uniform(-180, 180),
            rng.uniform(-89, 89), rng.uniform(-180, 180),
        )
        assert _kernels.haversine_m(*args) == pytest.approx(
            _fallback("haversine_m")(*args), rel=1e-12, abs=1e-9
        )


def test_fspl_paths_agree():
    rng = random.Random(7)
    for _ in range(100):
        d = rng.uniform(1.0, 1e6)
        f = rng.uniform(1000.0, 7125.0)
        assert _kernels.fspl_db(d, f) == pytest.approx(
            _fallback("fspl_db")(d, f), rel=1e-13
        )
        assert _kernels.two_regime_path_loss_db(d, f, 1000.0, 20.0) == pytest.approx(
            _fallback("two_regime_path_loss_db")(d, f, 1000.0, 20.0), rel=1e-13
        )


def test_misc_scalar_paths_agree():
    rng = random.Random(11)
    for _ in range(100):
        bw, nf = rng.uniform(1, 400), rng.uniform(0, 10)
        assert _kernels.noise_floor_dbm(bw, nf) == pytest.approx(
            _fallback("noise_floor_dbm")(bw, nf), rel=1e-13
        )
        b, a = rng.uniform(0, 360), rng.uniform(0, 360)
        assert _kernels.off_axis_deg(b, a) == pytest.approx(
            _fallback("off_axis_deg")(b, a), abs=1e-12
        )


def test_destination_paths_agree():
    rng = random.Random(13)
    for _ in range(100):
        args = (
            rng.uniform(-60, 60), rng.uniform(-179, 179),
            rng.uniform(0, 360), rng.uniform(0, 2e5),
        )
        got = _kernels.destination_latlon(*args)
        want = _fallback("destination_latlon")(*args)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_batch_chain_matches_scalar_composition():
    rng = np.random.default_rng(3)
    n = 256
    dist = rng.uniform(1.0, 5e4, n)
    freq = rng.uniform(5945.0, 7115.0, n)
    gains = rng.uniform(-10.0, 40.0, n)
    noise = rng.uniform(-100.0, -90.0, n)
    out = _kernels.eirp_chain_arrays(dist, freq, 1000.0, 20.0, noise, -6.0, gains)
    for i in range(0, n, 17):
        pl = _kernels.two_regime_path_loss_db(dist[i], freq[i], 1000.0, 20.0)
        expect = noise[i] + (-6.0) + pl - gains[i]
        assert out[i] == pytest.approx(expect, rel=1e-12)


def test_batch_chain_paths_agree():
    rng = np.random.default_rng(5)
    n = 512
    dist = rng.uniform(1.0, 5e4, n)
    freq = rng.uniform(5945.0, 7115.0, n)
    gains = rng.uniform(-10.0, 40.0, n)
    noise = rng.uniform(-100.0, -90.0, n)
    a = _kernels.eirp_chain_arrays(dist, freq, 1000.0, 20.0, noise, -6.0, gains)
    b = _fallback("eirp_chain_arrays")(dist, freq, 1000.0, 20.0, noise, -6.0, gains)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_haversine_array_kernel_matches_scalar():
    rng = np.random.default_rng(9)
    lat1 = rng.uniform(-89, 89, 64)
    lon1 = rng.uniform(-180, 180, 64)
    lat2 = rng.uniform(-89, 89, 64)
    lon2 = rng.uniform(-180, 180, 64)
    out = _kernels.haversine_arrays(lat1, lon1, lat2, lon2)
    for i in (0, 13, 63):
        assert out[i] == pytest.approx(
            _kernels.haversine_m(lat1[i], lon1[i], lat2[i], lon2[i]), rel=1e-12
        )
