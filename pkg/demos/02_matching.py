"""Project participants into lane coordinates and score candidate lanes.

A vehicle straddling two lanes gets two projection identities; a
pedestrian is matched regardless of heading.

Run: python3 demos/02_matching.py
"""
from __future__ import annotations

import math

from semantic_scene_graph import (
    MatchConfig,
    ObjectClass,
    TrafficParticipantState,
    fixture_path,
    load_map,
    match_participant,
    project_point,
)

graph = load_map(fixture_path("crossing_map.json"))

p = project_point(graph.segment("A").centerline, 20.0, 1.6, 0.05)
print(f"on A: s={p.s:.2f} d_t={p.d_t:+.2f} phi={p.phi:+.3f}")


def show(state):
    print(f"participant {state.participant_id} ({state.object_class.value}):")
    found = match_participant(state, graph, MatchConfig())
    if not found:
        print("  (no identity)")
    for m in found:
        pr = m.projection
        print(f"  {m.segment_id}: s={pr.s:6.2f} d_t={pr.d_t:+.2f} phi={pr.phi:+.2f} P={m.probability:.3f}")


# Between lanes A (y=3.5) and E (y=0): two identities.
show(TrafficParticipantState(1, 20.0, 1.6, 0.0, 8.0, 0.0, 0.0, 0.0, 1.8, 4.5, ObjectClass.CAR))
# Walking across lane E: heading is ignored for pedestrians.
show(TrafficParticipantState(7, 30.0, -1.0, math.pi / 2, 0.0, 1.2, 0.0, 0.0, 0.5, 0.5, ObjectClass.PEDESTRIAN))
# Parked far off the road: no identity, dropped from the scene graph.
show(TrafficParticipantState(9, 20.0, 40.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.8, 4.5, ObjectClass.CAR))
