import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_graph
from semantic_scene_graph.ingest import ObjectClass, SceneState, TrafficParticipantState
from semantic_scene_graph.matching import MatchConfig, match_participant, match_scene


def state(pid, x, y, psi=0.0, cls=ObjectClass.CAR):
    return TrafficParticipantState(pid, x, y, psi, 0.0, 0.0, 0.0, 0.0, 1.8, 4.5, cls)


LANES = make_graph({
    "K": [(0, 0), (50, 0)],
    "L": [(0, 3.5), (50, 3.5)],
    # Diverging lane, farthest from the vehicle and most misaligned.
    "M": [(0, -2), (50, -30)],
    "far": [(0, 100), (50, 100)],
})


def test_centered_vehicle_single_identity():
    (m,) = match_participant(state(1, 25, 100), LANES)
    assert m.segment_id == "far"
    assert m.probability == 1.0


def test_ambiguous_vehicle_gets_several_identities():
    # Vehicle between K and L, M peeling away below it.
    found = match_participant(state(1, 1, 1.2, psi=0.02), LANES)
    probs = {m.segment_id: m.probability for m in found}
    assert set(probs) == {"K", "L", "M"}
    assert min(probs["K"], probs["L"]) > probs["M"]
    assert [m.probability for m in found] == sorted(probs.values(), reverse=True)


def test_pedestrian_ignores_orientation():
    ped = state(9, 25, 101, psi=math.pi / 2, cls=ObjectClass.PEDESTRIAN)
    (m,) = match_participant(ped, LANES)
    assert m.segment_id == "far"
    assert abs(m.projection.phi) == pytest.approx(math.pi / 2)
    assert m.probability == pytest.approx(math.exp(-1 / (2 * 1.5 ** 2)))
    # A vehicle in the same pose drops below the probability cutoff.
    car = state(9, 25, 101, psi=math.pi / 2)
    assert match_participant(car, LANES, MatchConfig(min_probability=0.5)) == []


def test_pedestrian_segment_limit():
    g = make_graph({f"l{k}": [(0, k * 0.5), (10, k * 0.5)] for k in range(6)})
    ped = state(1, 5, 1.25, cls=ObjectClass.PEDESTRIAN)
    found = match_participant(ped, g, MatchConfig(pedestrian_max_segments=3))
    assert len(found) == 3
    assert {m.segment_id for m in found} == {"l1", "l2", "l3"}


def test_parked_car_is_filtered():
    scene = SceneState(0, (state(1, 25, 50),))
    assert match_scene(scene, LANES, MatchConfig(max_lateral_distance=5)) == {}


def test_empty_scene():
    assert match_scene(SceneState(0, ()), LANES) == {}


def test_crossing_identities(crossing_map, crossing_scene):
    found = match_scene(crossing_scene, crossing_map)
    assert {pid: sorted(m.segment_id for m in ms) for pid, ms in found.items()} == {
        1: ["A", "E"], 2: ["E"], 3: ["H"], 4: ["D"], 5: ["F"],
    }


def test_config_validation():
    with pytest.raises(ValueError):
        MatchConfig(min_probability=1.0)
    with pytest.raises(ValueError):
        MatchConfig(max_lateral_distance=0)


@settings(max_examples=80, deadline=None)
@given(st.floats(-10, 60), st.floats(-40, 110), st.floats(-math.pi, math.pi),
       st.sampled_from(list(ObjectClass)), st.floats(0.5, 6), st.floats(0.5, 4))
def test_thresholds_always_hold(x, y, psi, cls, max_lat, ped_radius):
    config = MatchConfig(max_lateral_distance=max_lat, pedestrian_radius=ped_radius, pedestrian_max_segments=2)
    found = match_participant(state(1, x, y, psi, cls), LANES, config)
    limit = ped_radius if cls is ObjectClass.PEDESTRIAN else max_lat
    assert all(abs(m.projection.d_t) <= limit for m in found)
    assert all(0 < m.probability <= 1 for m in found)
    assert len({m.segment_id for m in found}) == len(found)
    if cls is ObjectClass.PEDESTRIAN:
        assert len(found) <= 2
    assert found == match_participant(state(1, x, y, psi, cls), LANES, config)
