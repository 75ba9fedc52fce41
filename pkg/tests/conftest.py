"""Shared fixtures: the reference world used across the suite."""

import pytest
from hypothesis import HealthCheck, settings

from afcsim.geo import GeoPoint
from afcsim.propagation import FsLink, PropagationConfig, ProtectionConfig
from afcsim.channels import FrequencyRange
from afcsim.server import IncumbentDatabase, ServerPolicy

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# One FS microwave receiver 10 km due north of the AP, beam pointed east,
# so the AP sits far off boresight (discrimination applies).
AP_TRUE = GeoPoint(40.7934, -77.86)
FS_RX = GeoPoint(40.883332, -77.86, height_m=30.0)


@pytest.fixture
def fs_link() -> FsLink:
    return FsLink(
        id="FS-1",
        rx_location=FS_RX,
        freq_range=FrequencyRange(5990.0, 6004.0),
        bandwidth_mhz=20.0,
        noise_figure_db=5.0,
        max_gain_dbi=30.0,
        azimuth_deg=90.0,
        beamwidth_deg=6.0,
        discrimination_db=25.0,
    )


@pytest.fixture
def database(fs_link) -> IncumbentDatabase:
    return IncumbentDatabase(fs_links=(fs_link,))


@pytest.fixture
def propagation() -> PropagationConfig:
    # Threshold beyond the 10 km geometry so the clutter regime stays off.
    return PropagationConfig(regime_threshold_m=20_000.0, clutter_offset_db=20.0)


@pytest.fixture
def protection() -> ProtectionConfig:
    return ProtectionConfig()


@pytest.fixture
def policy() -> ServerPolicy:
    return ServerPolicy()
