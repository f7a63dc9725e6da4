"""Instances, matchings, fairness measures and the solution verifier.

An instance is a bipartite graph ``G = (U ∪ V, E)`` whose left vertices
``U = {0..n-1}`` carry one color each and whose right side is
``V = {0..k-1}``.  A matching assigns every left vertex to one adjacent
right vertex; it is *fair* when, for every right vertex ``v``, the color
counts of the left vertices assigned to ``v`` score at most ``ell`` under
the chosen measure and ``size_min <= |M(v)| <= size_max``.

Color counts are always taken over the whole color set, so a color that
does not occur in a set contributes a zero entry.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "Measure",
    "Instance",
    "Matching",
    "Violation",
    "Verdict",
    "Finding",
    "mov",
    "maxmin",
    "fairness",
    "count_vector",
    "is_fair",
    "verify",
    "validate_instance",
    "load_instance",
    "dump_instance",
    "instance_from_dict",
    "instance_to_dict",
    "load_matching",
    "dump_matching",
]


class Measure(str, enum.Enum):
    MOV = "mov"
    MAXMIN = "maxmin"


# ---------------------------------------------------------------------------
# fairness measures


def mov(counts: Sequence[int]) -> int:
    """Largest entry minus second-largest entry.

    With a single color the second-largest entry is taken to be 0.
    """
    if len(counts) == 0:
        return 0
    if len(counts) == 1:
        return int(counts[0])
    top = sorted((int(c) for c in counts), reverse=True)
    return top[0] - top[1]


def maxmin(counts: Sequence[int]) -> int:
    """Largest entry minus smallest entry."""
    if len(counts) == 0:
        return 0
    return int(max(counts)) - int(min(counts))


def fairness(measure: Measure | str, counts: Sequence[int]) -> int:
    measure = Measure(measure)
    return mov(counts) if measure is Measure.MOV else maxmin(counts)


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class Instance:
    """A colored bipartite graph together with the fairness requirement.

    ``edges`` is normalized to a sorted tuple of ``(u, v)`` pairs.  Size
    bounds default to ``size_min = 0`` and an unbounded ``size_max``
    (``None``).
    """

    num_colors: int
    left_colors: tuple[int, ...]
    k: int
    edges: tuple[tuple[int, int], ...]
    ell: int
    measure: Measure = Measure.MOV
    size_min: int = 0
    size_max: int | None = None

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        try:
            colors = tuple(int(c) for c in self.left_colors)
            edges = [(int(u), int(v)) for u, v in self.edges]
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed instance data: {exc}") from None
        set_(self, "left_colors", colors)
        set_(self, "measure", Measure(self.measure))
        for name in ("num_colors", "k", "ell", "size_min"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise InputError(f"{name} must be an integer")
            set_(self, name, int(getattr(self, name)))
        if self.size_max is not None:
            set_(self, "size_max", int(self.size_max))

        n = len(colors)
        if n < 1:
            raise InputError("instance needs at least one left vertex")
        if self.k < 1:
            raise InputError("instance needs at least one right vertex")
        if self.num_colors < 1:
            raise InputError("num_colors must be positive")
        if self.ell < 0:
            raise InputError("ell must be nonnegative")
        if self.size_min < 0:
            raise InputError("size_min must be nonnegative")
        if self.size_max is not None and self.size_max < self.size_min:
            raise InputError("size_min exceeds size_max")
        for u, c in enumerate(colors):
            if not 0 <= c < self.num_colors:
                raise InputError(f"left vertex {u} has color {c} outside [0, {self.num_colors})")
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < self.k):
                raise InputError(f"edge ({u}, {v}) references an invalid index")
        if len(set(edges)) != len(edges):
            dup = sorted({e for e in edges if edges.count(e) > 1})
            raise InputError(f"duplicate edges: {dup[:5]}")
        set_(self, "edges", tuple(sorted(edges)))

    # -- sizes and adjacency -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.left_colors)

    @property
    def colors(self) -> range:
        return range(self.num_colors)

    @cached_property
    def left_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def right_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.k)]
        for u, v in self.edges:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def left_masks(self) -> tuple[int, ...]:
        """Neighborhood of every left vertex as a bitmask over ``V``."""
        return tuple(sum(1 << v for v in a) for a in self.left_adj)

    @cached_property
    def color_classes(self) -> tuple[tuple[int, ...], ...]:
        cls: list[list[int]] = [[] for _ in range(self.num_colors)]
        for u, c in enumerate(self.left_colors):
            cls[c].append(u)
        return tuple(tuple(c) for c in cls)

    @cached_property
    def color_counts(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.color_classes)

    @property
    def max_left_degree(self) -> int:
        return max(len(a) for a in self.left_adj)

    @property
    def max_right_degree(self) -> int:
        return max(len(a) for a in self.right_adj)

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * self.k

    # -- size constraint classification -------------------------------------

    @property
    def upper_bounded(self) -> bool:
        """True when ``size_max`` actually restricts some matching."""
        return self.size_max is not None and self.size_max < self.n

    @property
    def nonempty(self) -> bool:
        """Exactly the non-emptiness constraint (``p = 1``, no upper bound)."""
        return self.size_min == 1 and not self.upper_bounded

    @property
    def size_free(self) -> bool:
        return self.size_min == 0 and not self.upper_bounded

    @property
    def at_most_nonempty(self) -> bool:
        """Size constraints are absent or exactly non-emptiness."""
        return self.size_min <= 1 and not self.upper_bounded

    def replace(self, **changes) -> "Instance":
        data = {
            "num_colors": self.num_colors,
            "left_colors": self.left_colors,
            "k": self.k,
            "edges": self.edges,
            "ell": self.ell,
            "measure": self.measure,
            "size_min": self.size_min,
            "size_max": self.size_max,
        }
        data.update(changes)
        return Instance(**data)

    def set_fair(self, left_vertices: Iterable[int]) -> bool:
        """Whether a set of left vertices may be ``M(v)`` for some ``v``."""
        members = list(left_vertices)
        return is_fair(self, count_vector(self, members), len(members))


# ---------------------------------------------------------------------------
# matchings and verification


@dataclass(frozen=True)
class Matching:
    """Left-perfect assignment: ``assign[u]`` is the right partner of ``u``."""

    assign: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assign", tuple(int(a) for a in self.assign))

    def __len__(self) -> int:
        return len(self.assign)

    def groups(self, k: int) -> list[list[int]]:
        """``M(v)`` for every right vertex ``v``."""
        out: list[list[int]] = [[] for _ in range(k)]
        for u, v in enumerate(self.assign):
            if 0 <= v < k:
                out[v].append(u)
        return out

    @classmethod
    def from_groups(cls, n: int, groups: Sequence[Iterable[int]]) -> "Matching":
        assign = [-1] * n
        for v, members in enumerate(groups):
            for u in members:
                if assign[u] != -1:
                    raise InputError(f"left vertex {u} assigned twice")
                assign[u] = v
        if -1 in assign:
            raise InputError(f"left vertex {assign.index(-1)} unassigned")
        return cls(tuple(assign))


def count_vector(instance: Instance, left_vertices: Iterable[int]) -> np.ndarray:
    counts = np.zeros(instance.num_colors, dtype=np.int64)
    for u in left_vertices:
        counts[instance.left_colors[u]] += 1
    return counts


def is_fair(instance: Instance, counts: Sequence[int], size: int | None = None) -> bool:
    if size is None:
        size = int(sum(counts))
    if size < instance.size_min:
        return False
    if instance.size_max is not None and size > instance.size_max:
        return False
    return fairness(instance.measure, counts) <= instance.ell


@dataclass(frozen=True)
class Violation:
    kind: str  # "edge", "fairness", "size_min", "size_max"
    vertex: int
    detail: str

    def __str__(self) -> str:
        side = "left" if self.kind == "edge" else "right"
        return f"{self.kind} violation at {side} vertex {self.vertex}: {self.detail}"


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def verify(instance: Instance, matching: Matching | Sequence[int]) -> Verdict:
    assign = matching.assign if isinstance(matching, Matching) else tuple(int(a) for a in matching)
    if len(assign) != instance.n:
        raise InputError(f"matching has length {len(assign)}, instance has n = {instance.n}")
    found: list[Violation] = []
    groups: list[list[int]] = [[] for _ in range(instance.k)]
    for u, v in enumerate(assign):
        if v not in instance.left_adj[u]:
            found.append(Violation("edge", u, f"({u}, {v}) is not an edge"))
        else:
            groups[v].append(u)
    for v, members in enumerate(groups):
        counts = count_vector(instance, members)
        value = fairness(instance.measure, counts)
        if value > instance.ell:
            found.append(
                Violation("fairness", v, f"{instance.measure.value} {value} > ell {instance.ell}, counts {counts.tolist()}")
            )
        if len(members) < instance.size_min:
            found.append(Violation("size_min", v, f"|M(v)| = {len(members)} < {instance.size_min}"))
        if instance.size_max is not None and len(members) > instance.size_max:
            found.append(Violation("size_max", v, f"|M(v)| = {len(members)} > {instance.size_max}"))
    return Verdict(tuple(found))


@dataclass(frozen=True)
class Finding:
    severity: str  # "warning"
    message: str


def validate_instance(instance: Instance | dict) -> list[Finding]:
    """Structural findings for an instance.

    Malformed data raises :class:`InputError` (via construction when a
    dictionary is passed).  Isolated left vertices are reported as warnings
    because they make every left-perfect matching impossible.
    """
    if not isinstance(instance, Instance):
        instance = instance_from_dict(instance)
    findings = []
    isolated = [u for u, a in enumerate(instance.left_adj) if not a]
    if isolated:
        findings.append(Finding("warning", f"infeasible: isolated left vertex {isolated[0]}"
                                + (f" (and {len(isolated) - 1} more)" if len(isolated) > 1 else "")))
    return findings


# ---------------------------------------------------------------------------
# JSON I/O

_INSTANCE_KEYS = {"num_colors", "left_colors", "k", "edges", "ell", "measure", "size_min", "size_max"}
_REQUIRED_KEYS = _INSTANCE_KEYS - {"size_min", "size_max"}


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance must be a JSON object")
    unknown = set(data) - _INSTANCE_KEYS
    if unknown:
        raise InputError(f"unknown instance keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(data)
    if missing:
        raise InputError(f"missing instance keys: {sorted(missing)}")
    try:
        measure = Measure(data["measure"])
    except ValueError:
        raise InputError(f"measure must be 'mov' or 'maxmin', got {data['measure']!r}") from None
    edges = data["edges"]
    if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
        raise InputError("edges must be a list of [left, right] pairs")
    for key in ("num_colors", "k", "ell", "size_min"):
        if key in data and (not isinstance(data[key], int) or isinstance(data[key], bool)):
            raise InputError(f"{key} must be an integer")
    if data.get("size_max") is not None and not isinstance(data["size_max"], int):
        raise InputError("size_max must be an integer or null")
    return Instance(
        num_colors=data["num_colors"],
        left_colors=tuple(data["left_colors"]),
        k=data["k"],
        edges=tuple(tuple(e) for e in edges),
        ell=data["ell"],
        measure=measure,
        size_min=data.get("size_min", 0),
        size_max=data.get("size_max"),
    )


def instance_to_dict(instance: Instance) -> dict:
    out = {
        "num_colors": instance.num_colors,
        "left_colors": list(instance.left_colors),
        "k": instance.k,
        "edges": [list(e) for e in instance.edges],
        "ell": instance.ell,
        "measure": instance.measure.value,
    }
    if instance.size_min:
        out["size_min"] = instance.size_min
    if instance.size_max is not None:
        out["size_max"] = instance.size_max
    return out


def _read_json(source: str | Path | dict) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text(encoding="utf-8") if not str(source).lstrip().startswith("{") else str(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def load_instance(source: str | Path | dict) -> Instance:
    """Read an instance from a path, a JSON string, or an already-parsed dict."""
    return instance_from_dict(_read_json(source))


def dump_instance(instance: Instance, path: str | Path | None = None) -> str:
    text = json.dumps(instance_to_dict(instance), separators=(",", ":"))
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def load_matching(source: str | Path | dict) -> Matching:
    data = _read_json(source)
    if not isinstance(data, dict) or set(data) != {"assign"}:
        raise InputError("matching must be an object with the single key 'assign'")
    if not isinstance(data["assign"], list) or not all(isinstance(a, int) for a in data["assign"]):
        raise InputError("'assign' must be a list of integers")
    return Matching(tuple(data["assign"]))


def dump_matching(matching: Matching, path: str | Path | None = None) -> str:
    text = json.dumps({"assign": list(matching.assign)})
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
