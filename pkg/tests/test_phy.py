import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from wurlora.phy import (
    ConfigError,
    PhyParams,
    SfSet,
    dbm_to_milliwatts,
    frame_airtime,
    sf_probability,
    slot_length,
)

FIXTURE = Path(__file__).parent / "fixtures" / "airtime_table.json"
PHY_Q0 = PhyParams(ldro_threshold_sf=13)


@pytest.mark.parametrize(
    "sf, expected",
    [(7, 0.041216), (10, 0.288768)],
)
def test_airtime_hand_values(sf, expected):
    assert frame_airtime(sf, PHY_Q0) == pytest.approx(expected, abs=1e-12)


def test_airtime_never_below_overhead():
    # The payload clamp cannot trigger for b >= 1 and k <= 12; overhead is the floor.
    phy = PhyParams(payload_bytes=1, ldro_threshold_sf=13)
    for k in range(7, 13):
        assert frame_airtime(k, phy) >= 20.25 * 2**k / phy.bandwidth_hz


def test_airtime_matches_fixture():
    table = json.loads(FIXTURE.read_text())
    phy = PhyParams(bandwidth_hz=table["bandwidth_hz"], ldro_threshold_sf=table["ldro_threshold_sf"])
    for row in table["rows"]:
        got = frame_airtime(row["sf"], phy, row["payload_bytes"])
        assert got == pytest.approx(float(row["airtime_s"]), abs=1e-9), row


@pytest.mark.parametrize("ldro", [7, 11, 13])
@pytest.mark.parametrize("b", range(1, 65))
def test_airtime_strictly_increasing_in_sf(b, ldro):
    # Only compare SFs that share the same LDRO flag.
    phy = PhyParams(payload_bytes=b, ldro_threshold_sf=ldro)
    times = [frame_airtime(k, phy) for k in range(7, 13)]
    for k in range(7, 12):
        if phy.ldro(k) == phy.ldro(k + 1):
            assert times[k - 7] < times[k - 6]


@given(st.integers(7, 12), st.integers(1, 200), st.integers(7, 13))
def test_airtime_non_decreasing_in_payload(sf, b, ldro):
    assert frame_airtime(sf, PhyParams(payload_bytes=b + 1, ldro_threshold_sf=ldro)) >= frame_airtime(
        sf, PhyParams(payload_bytes=b, ldro_threshold_sf=ldro)
    )


@pytest.mark.parametrize("bad", [dict(bandwidth_hz=0), dict(bandwidth_hz=-1.0), dict(payload_bytes=0)])
def test_phy_rejects_bad_params(bad):
    with pytest.raises(ConfigError):
        PhyParams(**bad)


@pytest.mark.parametrize("sf", [6, 13, 7.5])
def test_airtime_rejects_bad_sf(sf):
    with pytest.raises(ConfigError):
        frame_airtime(sf, PhyParams())


@pytest.mark.parametrize("k_max, expected", [(10, 0.25), (7, 1.0), (12, 1 / 6)])
def test_sf_probability(k_max, expected):
    assert sf_probability(SfSet(k_max)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("k_max", range(7, 13))
def test_sf_probabilities_sum_to_one(k_max):
    sf_set = SfSet(k_max)
    assert sf_probability(sf_set) * len(sf_set) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("k_max", range(7, 13))
@pytest.mark.parametrize("ldro", [11, 13])
def test_slot_length_is_longest_frame(k_max, ldro):
    phy = PhyParams(ldro_threshold_sf=ldro)
    sf_set = SfSet(k_max)
    assert slot_length(sf_set, phy) == max(frame_airtime(k, phy) for k in sf_set)


def test_slot_length_default():
    assert slot_length(SfSet(10), PHY_Q0) == pytest.approx(0.288768, abs=1e-12)


@pytest.mark.parametrize("dbm, mw", [(0, 1.0), (6, 3.98107), (14, 25.1189)])
def test_dbm_to_milliwatts(dbm, mw):
    assert dbm_to_milliwatts(dbm) == pytest.approx(mw, rel=1e-5)


@given(st.floats(-50, 50), st.floats(0.01, 10))
def test_dbm_to_milliwatts_increasing(p, delta):
    assert dbm_to_milliwatts(p + delta) > dbm_to_milliwatts(p)
