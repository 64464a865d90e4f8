"""Per-timestep semantic scene graphs: participants as nodes, relations as edges."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .ingest import ObjectClass, Recording, SceneState
from .map_model import RoadGraph
from .matching import MatchConfig, ProjectionIdentity, match_scene
from .relations import PathSearchConfig, Relation, find_paths, instantiate, pair_templates


@dataclass(frozen=True)
class SceneNode:
    participant_id: int
    object_class: ObjectClass
    speed: float
    identities: tuple[ProjectionIdentity, ...]


@dataclass(frozen=True)
class SceneGraph:
    timestamp: int
    nodes: tuple[SceneNode, ...] = ()
    edges: tuple[Relation, ...] = ()
    # Participants of the scene that matched no segment.
    unmatched: tuple[int, ...] = field(default=(), compare=False)

    def node(self, participant_id: int) -> SceneNode:
        for n in self.nodes:
            if n.participant_id == participant_id:
                return n
        raise KeyError(participant_id)

    def edges_between(self, i: int, j: int) -> list[Relation]:
        return [e for e in self.edges if e.source == i and e.target == j]


def _template_cache(graph: RoadGraph, path_config: PathSearchConfig) -> dict:
    return graph._derived.setdefault(("templates", path_config), {})


def _templates(graph: RoadGraph, cache: dict, a: str, b: str, path_config: PathSearchConfig):
    found = cache.get((a, b))
    if found is None:
        found = cache[a, b] = pair_templates(
            a, b, find_paths(graph, a, path_config), find_paths(graph, b, path_config),
            graph, path_config.overlap_tolerance,
        )
    return found


def build_scene_graph(
    scene: SceneState,
    graph: RoadGraph,
    match_config: MatchConfig = MatchConfig(),
    path_config: PathSearchConfig = PathSearchConfig(),
) -> SceneGraph:
    """Match, search paths, relate every ordered participant pair, consolidate.

    Relations of all identity pairs of two participants become parallel edges
    between the two participant nodes.
    """
    matches = match_scene(scene, graph, match_config)
    states = {p.participant_id: p for p in scene.participants}
    nodes = tuple(
        SceneNode(pid, states[pid].object_class, states[pid].speed, tuple(matches[pid]))
        for pid in sorted(matches)
    )
    cache = _template_cache(graph, path_config)
    edges: list[Relation] = []
    for ni, nj in itertools.permutations(nodes, 2):
        for mi in ni.identities:
            for mj in nj.identities:
                templates = cache.get((mi.segment_id, mj.segment_id))
                if templates is None:
                    templates = _templates(graph, cache, mi.segment_id, mj.segment_id, path_config)
                if templates:
                    edges.extend(instantiate(templates, mi, mj))
    edges.sort(key=Relation.sort_key)
    unmatched = tuple(sorted(set(states) - set(matches)))
    return SceneGraph(scene.timestamp, nodes, tuple(edges), unmatched)


# Per-worker copy of the road graph so its path caches survive between scenes.
_WORKER_GRAPH: RoadGraph | None = None


def _init_worker(graph: RoadGraph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = graph


def _build_in_worker(args):
    scene, match_config, path_config = args
    return build_scene_graph(scene, _WORKER_GRAPH, match_config, path_config)


def build_recording(
    recording: Recording,
    graph: RoadGraph,
    match_config: MatchConfig = MatchConfig(),
    path_config: PathSearchConfig = PathSearchConfig(),
    jobs: int = 1,
) -> list[SceneGraph]:
    """One scene graph per timestep, in timestamp order.

    With ``jobs > 1`` scenes are spread over a process pool; the result order
    does not depend on completion order.
    """
    if jobs <= 1 or len(recording) < 2:
        return [build_scene_graph(s, graph, match_config, path_config) for s in recording]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(graph,)) as pool:
        chunk = max(1, len(recording) // (4 * jobs))
        return list(pool.map(
            _build_in_worker, [(s, match_config, path_config) for s in recording], chunksize=chunk
        ))
