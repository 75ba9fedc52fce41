"""Numeric core shared by the geodesy and propagation layers.

Every function here is scalar-in/scalar-out (or ndarray-in/ndarray-out for
the ``*_arrays`` variants) and free of Python objects, so the whole module
can be JIT-compiled. By default the kernels are compiled with numba's
``njit``; setting ``AFCSIM_DISABLE_NUMBA=1`` in the environment selects the
pure NumPy/math fallback instead (same source, no compilation). Both paths
are exercised by the test suite and compared by ``benchmarks/bench_kernels.py``.
"""

import math
import os

import numpy as np

EARTH_RADIUS_M = 6_371_000.0

_disable = os.environ.get("AFCSIM_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _disable in ("1", "true", "yes", "on")

if not _DISABLED:
    try:
        from numba import njit as _njit
    except ImportError:
        _njit = None
else:
    _njit = None

USING_NUMBA = _njit is not None


def _jit(fn):
    if USING_NUMBA:
        return _njit(cache=True)(fn)
    fn.py_func = fn
    return fn


@_jit
def haversine_m(lat1_deg, lon1_deg, lat2_deg, lon2_deg):
    """Great-circle distance in meters on the spherical Earth."""
    p1 = math.radians(lat1_deg)
    p2 = math.radians(lat2_deg)
    dp = math.radians(lat2_deg - lat1_deg)
    dl = math.radians(lon2_deg - lon1_deg)
    a = math.sin(dp * 0.5) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl * 0.5) ** 2
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(a), math.sqrt(1.0 - a))


@_jit
def haversine_arrays(lat1, lon1, lat2, lon2):
    """Vectorized haversine over equally-shaped float64 arrays."""
    p1 = np.radians(lat1)
    p2 = np.radians(lat2)
    dp = np.radians(lat2 - lat1)
    dl = np.radians(lon2 - lon1)
    a = np.sin(dp * 0.5) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dl * 0.5) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arctan2(np.sqrt(a), np.sqrt(1.0 - a))


@_jit
def initial_bearing_raw_deg(lat1_deg, lon1_deg, lat2_deg, lon2_deg):
    """Initial great-circle bearing in [0, 360); caller rejects coincident points."""
    p1 = math.radians(lat1_deg)
    p2 = math.radians(lat2_deg)
    dl = math.radians(lon2_deg - lon1_deg)
    x = math.sin(dl) * math.cos(p2)
    y = math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl)
    return (math.degrees(math.atan2(x, y)) + 360.0) % 360.0


@_jit
def destination_latlon(lat_deg, lon_deg, bearing_deg, distance_m):
    """Point reached from (lat, lon) along a bearing for a given distance.

    Longitude is normalized into [-180, 180).
    """
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(bearing_deg)
    p1 = math.radians(lat_deg)
    l1 = math.radians(lon_deg)
    sp2 = math.sin(p1) * math.cos(delta) + math.cos(p1) * math.sin(delta) * math.cos(theta)
    if sp2 > 1.0:
        sp2 = 1.0
    elif sp2 < -1.0:
        sp2 = -1.0
    p2 = math.asin(sp2)
    l2 = l1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(p1),
        math.cos(delta) - math.sin(p1) * sp2,
    )
    lon_out = (math.degrees(l2) + 540.0) % 360.0 - 180.0
    return math.degrees(p2), lon_out


@_jit
def fspl_db(distance_m, freq_mhz):
    """Free-space path loss: 32.45 + 20 log10(d_km) + 20 log10(f_MHz)."""
    return 32.45 + 20.0 * math.log10(distance_m / 1000.0) + 20.0 * math.log10(freq_mhz)


@_jit
def two_regime_path_loss_db(distance_m, freq_mhz, regime_threshold_m, clutter_offset_db):
    """FSPL below the regime threshold, FSPL plus a clutter offset at or beyond it."""
    loss = fspl_db(distance_m, freq_mhz)
    if distance_m >= regime_threshold_m:
        loss += clutter_offset_db
    return loss


@_jit
def noise_floor_dbm(bandwidth_mhz, noise_figure_db):
    """Thermal noise floor: -174 dBm/Hz integrated over the bandwidth, plus NF."""
    return -174.0 + 10.0 * math.log10(bandwidth_mhz * 1.0e6) + noise_figure_db


@_jit
def off_axis_deg(bearing_deg, azimuth_deg):
    """Smallest angular separation between a bearing and a boresight azimuth."""
    d = abs(bearing_deg - azimuth_deg) % 360.0
    if d > 180.0:
        d = 360.0 - d
    return d


@_jit
def eirp_chain_arrays(distance_m, freq_mhz, regime_threshold_m, clutter_offset_db,
                      noise_dbm, i_over_n_limit_db, gain_dbi):
    """Per-link raw permissible EIRP over arrays of link parameters."""
    n = distance_m.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        pl = two_regime_path_loss_db(distance_m[i], freq_mhz[i],
                                     regime_threshold_m, clutter_offset_db)
        out[i] = noise_dbm[i] + i_over_n_limit_db + pl - gain_dbi[i]
    return out
