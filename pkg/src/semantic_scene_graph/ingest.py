"""Object-list recordings: CSV rows grouped into per-timestep scene states."""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from pathlib import Path

from .geometry import wrap_angle

CSV_HEADER = ("timestamp_ms", "track_id", "class", "x", "y", "psi", "vx", "vy", "ax", "ay", "width", "length")


class ObjectListError(ValueError):
    """A recording could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MissingTimestampError(LookupError):
    pass


class ObjectClass(str, enum.Enum):
    # Order is the one-hot order used by the node attribute export.
    CAR = "car"
    PEDESTRIAN = "pedestrian"
    BIKE = "bike"
    TRUCK = "truck"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> ObjectClass:
        try:
            return cls(text.strip().lower())
        except ValueError:
            return cls.OTHER


@dataclass(frozen=True)
class TrafficParticipantState:
    participant_id: int
    x: float
    y: float
    psi: float
    vx: float
    vy: float
    ax: float
    ay: float
    width: float
    length: float
    object_class: ObjectClass

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)


@dataclass(frozen=True)
class SceneState:
    timestamp: int
    participants: tuple[TrafficParticipantState, ...]

    def __post_init__(self):
        ids = [p.participant_id for p in self.participants]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate participant ids in scene at t={self.timestamp}")


@dataclass(frozen=True)
class Recording:
    scenes: tuple[SceneState, ...] = ()

    def __post_init__(self):
        stamps = self.timestamps
        if any(b <= a for a, b in zip(stamps, stamps[1:])):
            raise ValueError("recording timestamps must be strictly increasing")

    @property
    def timestamps(self) -> list[int]:
        return [s.timestamp for s in self.scenes]

    def __len__(self) -> int:
        return len(self.scenes)

    def __iter__(self):
        return iter(self.scenes)

    def between(self, start: int | None = None, stop: int | None = None) -> Recording:
        """Scenes with ``start <= timestamp <= stop`` (either bound optional)."""
        return Recording(tuple(
            s for s in self.scenes
            if (start is None or s.timestamp >= start) and (stop is None or s.timestamp <= stop)
        ))


def _parse_int(text: str, name: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ObjectListError(f"{name} must be an integer, got {text!r}", line) from None


def _parse_float(text: str, name: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ObjectListError(f"{name} must be numeric, got {text!r}", line) from None
    if not math.isfinite(value):
        raise ObjectListError(f"{name} must be finite, got {text!r}", line)
    return value


def parse_object_list(text: str) -> Recording:
    """Parse an object-list CSV into a :class:`Recording`.

    The header must read ``timestamp_ms,track_id,class,x,y,psi,vx,vy,ax,ay,width,length``.
    Rows are grouped by timestamp; yaw is wrapped to (-pi, pi]. Unknown class
    names map to ``other``.
    """
    lines = text.splitlines()
    if not lines or tuple(c.strip() for c in lines[0].split(",")) != CSV_HEADER:
        raise ObjectListError(f"header must be {','.join(CSV_HEADER)!r}", 1)

    by_time: dict[int, dict[int, TrafficParticipantState]] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        cols = raw.split(",")
        if len(cols) != len(CSV_HEADER):
            raise ObjectListError(f"expected {len(CSV_HEADER)} fields, got {len(cols)}", lineno)
        t = _parse_int(cols[0].strip(), "timestamp_ms", lineno)
        pid = _parse_int(cols[1].strip(), "track_id", lineno)
        x, y, psi, vx, vy, ax, ay, width, length = (
            _parse_float(c.strip(), name, lineno) for c, name in zip(cols[3:], CSV_HEADER[3:])
        )
        if width <= 0 or length <= 0:
            raise ObjectListError("width and length must be positive", lineno)
        scene = by_time.setdefault(t, {})
        if pid in scene:
            raise ObjectListError(f"duplicate track_id {pid} at timestamp {t}", lineno)
        scene[pid] = TrafficParticipantState(
            participant_id=pid, x=x, y=y, psi=wrap_angle(psi), vx=vx, vy=vy, ax=ax, ay=ay,
            width=width, length=length, object_class=ObjectClass.parse(cols[2]),
        )
    return Recording(tuple(
        SceneState(t, tuple(by_time[t].values())) for t in sorted(by_time)
    ))


def load_object_list(path: str | Path) -> Recording:
    return parse_object_list(Path(path).read_text(encoding="utf-8"))


def format_object_list(recording: Recording) -> str:
    rows = [",".join(CSV_HEADER)]
    for scene in recording:
        for p in scene.participants:
            rows.append(",".join([
                str(scene.timestamp), str(p.participant_id), p.object_class.value,
                *(repr(float(v)) for v in (p.x, p.y, p.psi, p.vx, p.vy, p.ax, p.ay, p.width, p.length)),
            ]))
    return "\n".join(rows) + "\n"


def scene_at(recording: Recording, timestamp: int) -> SceneState:
    stamps = recording.timestamps
    k = bisect.bisect_left(stamps, timestamp)
    if k < len(stamps) and stamps[k] == timestamp:
        return recording.scenes[k]
    if not stamps:
        raise MissingTimestampError(f"no scene at t={timestamp}: recording is empty")
    nearest = stamps[max(0, k - 1):k + 1]
    raise MissingTimestampError(
        f"no scene at t={timestamp}; nearest available: {', '.join(map(str, nearest))}"
    )
