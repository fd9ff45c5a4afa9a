import pytest

from skysum import DetectionZone, paper2024, paper2024_fig4


@pytest.fixture
def cal():
    return paper2024()


@pytest.fixture
def cal4():
    return paper2024_fig4()


@pytest.fixture
def zone():
    # Detection box just downstream of the notch, centred on the track.
    return DetectionZone(center_x=8.0, center_y=3.0, side=6.0, capacity=81)
