"""Command line front-end: ``ssg build | validate-map | stats``.

Settings come from an optional JSON config file (``--config``) whose keys
mirror the long flags with underscores, e.g. ``{"sigma_d": 1.2, "format": "dot"}``.
Flags given on the command line win over the file.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .export import export_dataset, to_dot
from .frenet import MatchParams
from .ingest import ObjectListError, load_object_list
from .map_model import DEFAULT_OVERLAP_TOLERANCE, MapError, MapSyntaxError, RoadEdgeKind, audit_overlaps, load_map
from .matching import MatchConfig
from .relations import PathSearchConfig, RelationClass
from .scene_graph import SceneGraph, build_recording

log = logging.getLogger("semantic_scene_graph")

FORMATS = ("dot", "tudataset", "both")


@dataclass
class RunConfig:
    map: str = ""
    objects: str = ""
    out: str = "out"
    format: str = "both"
    name: str = "scene_graphs"
    from_ms: int | None = None
    to_ms: int | None = None
    sigma_d: float = MatchParams.sigma_d
    sigma_p: float = MatchParams.sigma_p
    max_lateral: float = MatchConfig.max_lateral_distance
    min_prob: float = MatchConfig.min_probability
    pedestrian_radius: float = MatchConfig.pedestrian_radius
    pedestrian_max_segments: int = MatchConfig.pedestrian_max_segments
    max_path_length: float = PathSearchConfig.max_total_length
    overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE
    jobs: int = 1

    def validate(self, need_objects: bool = True) -> None:
        if not self.map:
            raise ValueError("--map is required")
        if need_objects and not self.objects:
            raise ValueError("--objects is required")
        if self.format not in FORMATS:
            raise ValueError(f"--format must be one of {', '.join(FORMATS)}")
        if self.from_ms is not None and self.to_ms is not None and self.from_ms > self.to_ms:
            raise ValueError("--from-ms must not exceed --to-ms")

    def match_config(self) -> MatchConfig:
        return MatchConfig(
            match_params=MatchParams(self.sigma_d, self.sigma_p),
            max_lateral_distance=self.max_lateral,
            min_probability=self.min_prob,
            pedestrian_radius=self.pedestrian_radius,
            pedestrian_max_segments=self.pedestrian_max_segments,
        )

    def path_config(self) -> PathSearchConfig:
        return PathSearchConfig(self.max_path_length, self.overlap_tolerance)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        known = {f.name for f in fields(RunConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(raw)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig(**values)


def _load_inputs(cfg: RunConfig):
    graph = load_map(cfg.map)
    recording = load_object_list(cfg.objects).between(cfg.from_ms, cfg.to_ms)
    return graph, recording


def _edge_counts(graphs: list[SceneGraph]) -> Counter:
    counts = Counter({cls.value: 0 for cls in RelationClass})
    for g in graphs:
        counts.update(e.relation_class.value for e in g.edges)
    return counts


def cmd_build(cfg: RunConfig) -> int:
    cfg.validate()
    graph, recording = _load_inputs(cfg)
    if not len(recording):
        log.warning("no scenes in the requested time range; nothing written")
    graphs = build_recording(recording, graph, cfg.match_config(), cfg.path_config(), jobs=cfg.jobs)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.format in ("dot", "both"):
        for g in graphs:
            (out / f"scene_{g.timestamp}.dot").write_text(to_dot(g), encoding="utf-8", newline="\n")
    if cfg.format in ("tudataset", "both") and graphs:
        export_dataset(graphs, graph, out / cfg.name)

    counts = _edge_counts(graphs)
    print(f"scenes processed: {len(graphs)}")
    print(f"nodes: {sum(len(g.nodes) for g in graphs)}")
    print(f"participants filtered: {sum(len(g.unmatched) for g in graphs)}")
    print("edges: " + ", ".join(f"{k}={v}" for k, v in counts.items()) + f" (total {sum(counts.values())})")
    return 0


def cmd_validate_map(cfg: RunConfig) -> int:
    graph = load_map(cfg.map)
    kinds = Counter(e.kind.value for e in graph.edges)
    print(f"segments: {len(graph)}")
    print("edges: " + ", ".join(f"{k.value}={kinds.get(k.value, 0)}" for k in RoadEdgeKind))
    audit = audit_overlaps(graph, cfg.overlap_tolerance)
    for a, b in audit.undeclared:
        log.warning("segments %s and %s overlap geometrically but have no overlapping edge", a, b)
    for a, b in audit.disjoint:
        log.warning("overlapping edge %s -- %s does not match geometry (centerlines never within %g m)",
                    a, b, cfg.overlap_tolerance)
    print("overlap audit: " + ("consistent" if audit.clean else
                               f"{len(audit.undeclared)} undeclared, {len(audit.disjoint)} mismatched"))
    return 0


def _histogram(values: list[float], bins: int = 10) -> list[tuple[float, float, int]]:
    if not values:
        return []
    counts, edges = np.histogram(values, bins=bins)
    return [(float(lo), float(hi), int(c)) for lo, hi, c in zip(edges, edges[1:], counts)]


def scene_statistics(graphs: list[SceneGraph]) -> dict:
    d_f = [e.d_F for g in graphs for e in g.edges if e.d_F is not None]
    d_ip = [e.d_ip for g in graphs for e in g.edges if e.d_ip is not None]
    per_participant = Counter(len(n.identities) for g in graphs for n in g.nodes)
    return {
        "scenes": len(graphs),
        "relation_classes": dict(_edge_counts(graphs)),
        "d_F_histogram": _histogram(d_f),
        "d_ip_histogram": _histogram(d_ip),
        "identities_per_participant": {str(k): v for k, v in sorted(per_participant.items())},
    }


def cmd_stats(cfg: RunConfig, as_json: bool = False) -> int:
    cfg.validate()
    graph, recording = _load_inputs(cfg)
    stats = scene_statistics(build_recording(recording, graph, cfg.match_config(), cfg.path_config(), jobs=cfg.jobs))
    if as_json:
        print(json.dumps(stats, indent=2))
        return 0
    print(f"scenes: {stats['scenes']}")
    print("relation classes:")
    for k, v in stats["relation_classes"].items():
        print(f"  {k:<13} {v}")
    for key in ("d_F_histogram", "d_ip_histogram"):
        print(f"{key.split('_hist')[0]} histogram:" + ("" if stats[key] else " (empty)"))
        for lo, hi, c in stats[key]:
            print(f"  [{lo:9.2f}, {hi:9.2f}) {c}")
    print("identities per participant:" + ("" if stats["identities_per_participant"] else " (empty)"))
    for k, v in stats["identities_per_participant"].items():
        print(f"  {k}: {v}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssg", description="Build semantic scene graphs from object lists and a lane map.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, objects=True):
        p.add_argument("--config", help="JSON file with default settings")
        p.add_argument("--map", help="road map JSON file")
        if objects:
            p.add_argument("--objects", help="object-list CSV file")
            p.add_argument("--from-ms", type=int, dest="from_ms")
            p.add_argument("--to-ms", type=int, dest="to_ms")
            p.add_argument("--sigma-d", type=float, dest="sigma_d")
            p.add_argument("--sigma-p", type=float, dest="sigma_p")
            p.add_argument("--max-lateral", type=float, dest="max_lateral")
            p.add_argument("--min-prob", type=float, dest="min_prob")
            p.add_argument("--pedestrian-radius", type=float, dest="pedestrian_radius")
            p.add_argument("--pedestrian-max-segments", type=int, dest="pedestrian_max_segments")
            p.add_argument("--max-path-length", type=float, dest="max_path_length")
            p.add_argument("--jobs", type=int)
        p.add_argument("--overlap-tolerance", type=float, dest="overlap_tolerance")

    build = sub.add_parser("build", help="write DOT files and/or the numeric dataset")
    common(build)
    build.add_argument("--out")
    build.add_argument("--format", choices=FORMATS)
    build.add_argument("--name", help="file prefix of the dataset files")

    common(sub.add_parser("validate-map", help="check a map and audit declared overlaps"), objects=False)

    stats = sub.add_parser("stats", help="relation and matching statistics for a recording")
    common(stats)
    stats.add_argument("--json", action="store_true", help="print machine-readable JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = _parser().parse_args(argv)
    cfg = None
    try:
        cfg = resolve_config(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "validate-map":
            cfg.validate(need_objects=False)
            return cmd_validate_map(cfg)
        return cmd_stats(cfg, as_json=args.json)
    except MapSyntaxError as exc:
        log.error("%s: %s", cfg.map if cfg else args.map, exc)
    except (MapError, ObjectListError, ValueError) as exc:
        log.error("%s", exc)
    except OSError as exc:
        log.error("%s: %s", exc.filename or "", exc.strerror or exc)
    return 1


if __name__ == "__main__":
    sys.exit(main())
