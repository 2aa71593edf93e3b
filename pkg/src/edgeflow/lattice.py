"""Lattice substrate: points, oriented edges, paths, integer edge flows.

Points are plain tuples of ints.  An oriented edge is identified by its
base point and a 1-based axis index; the canonical orientation runs from
``base`` to ``base + e_axis``, and traversals against the orientation
count with multiplicity -1.  Flows are finite signed multiplicity maps on
edges, stored sparsely with zero entries dropped.  Python integers are
unbounded, which discharges the overflow contract for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Point = Tuple[int, ...]
Edge = Tuple[Point, int]  # (base, axis), axis in 1..d


def origin(d: int) -> Point:
    return (0,) * d


def unit(d: int, axis: int, sign: int = 1) -> Point:
    if not 1 <= axis <= d:
        raise ValueError(f"axis {axis} out of range 1..{d}")
    return tuple(sign if j == axis - 1 else 0 for j in range(d))


def add(u: Point, v: Point) -> Point:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sub(u: Point, v: Point) -> Point:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def neg(u: Point) -> Point:
    return tuple(-a for a in u)


def l1(u: Point, v: Point | None = None) -> int:
    if v is None:
        return sum(abs(a) for a in u)
    return sum(abs(a - b) for a, b in zip(u, v, strict=True))


def step_point(p: Point, letter: int) -> Point:
    """Point reached from p by one signed-axis step (+i / -i)."""
    axis = abs(letter)
    q = list(p)
    q[axis - 1] += 1 if letter > 0 else -1
    return tuple(q)


def step_edge(p: Point, letter: int) -> Tuple[Edge, int]:
    """Oriented edge traversed by one step from p, with its sign."""
    axis = abs(letter)
    if letter > 0:
        return (p, axis), 1
    return (step_point(p, letter), axis), -1


@dataclass(frozen=True)
class LatticePath:
    """A path starting at ``start`` whose moves are signed axis indices."""

    d: int
    start: Point
    steps: Tuple[int, ...]

    def __post_init__(self):
        if len(self.start) != self.d:
            raise ValueError("start has wrong dimension")
        for s in self.steps:
            if not 1 <= abs(s) <= self.d:
                raise ValueError(f"step {s} out of range for d={self.d}")

    def __len__(self) -> int:
        return len(self.steps)

    def points(self) -> Iterator[Point]:
        p = self.start
        yield p
        for s in self.steps:
            p = step_point(p, s)
            yield p

    def end(self) -> Point:
        p = self.start
        for s in self.steps:
            p = step_point(p, s)
        return p

    def concat(self, other: "LatticePath") -> "LatticePath":
        if other.start != self.end():
            raise ValueError("paths are not composable")
        return LatticePath(self.d, self.start, self.steps + other.steps)


class EdgeFlow:
    """Finite signed multiplicity function on oriented lattice edges.

    Immutable after construction; zero multiplicities are never stored.
    Supports addition, negation, integer scaling and translation, so flows
    form a Z[Z^d]-module the way paths and cycles require.
    """

    __slots__ = ("d", "_entries", "_items", "_hash")

    def __init__(self, d: int, entries: Mapping[Edge, int] | Iterable[Tuple[Edge, int]] = ()):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        data: Dict[Edge, int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (base, axis), mult in items:
            if mult == 0:
                continue
            if len(base) != d:
                raise ValueError("edge base has wrong dimension")
            if not 1 <= axis <= d:
                raise ValueError(f"axis {axis} out of range 1..{d}")
            key = (tuple(base), axis)
            m = data.get(key, 0) + mult
            if m:
                data[key] = m
            else:
                data.pop(key, None)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_entries", data)
        object.__setattr__(self, "_items", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("EdgeFlow is immutable")

    def items(self) -> Tuple[Tuple[Edge, int], ...]:
        """Entries sorted by (base, axis); the canonical form."""
        if self._items is None:
            object.__setattr__(self, "_items", tuple(sorted(self._entries.items())))
        return self._items

    def mapping(self) -> Mapping[Edge, int]:
        return dict(self._entries)

    def __getitem__(self, edge: Edge) -> int:
        return self._entries.get((tuple(edge[0]), edge[1]), 0)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeFlow)
            and self.d == other.d
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.d, self.items())))
        return self._hash

    def __add__(self, other: "EdgeFlow") -> "EdgeFlow":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        data = dict(self._entries)
        for key, mult in other._entries.items():
            m = data.get(key, 0) + mult
            if m:
                data[key] = m
            else:
                data.pop(key, None)
        return EdgeFlow(self.d, data)

    def __neg__(self) -> "EdgeFlow":
        return EdgeFlow(self.d, {k: -m for k, m in self._entries.items()})

    def __sub__(self, other: "EdgeFlow") -> "EdgeFlow":
        return self + (-other)

    def __mul__(self, k: int) -> "EdgeFlow":
        if k == 0:
            return EdgeFlow(self.d)
        return EdgeFlow(self.d, {key: k * m for key, m in self._entries.items()})

    __rmul__ = __mul__

    def translate(self, v: Point) -> "EdgeFlow":
        """Shift every edge base by v; multiplicities unchanged."""
        if len(v) != self.d:
            raise ValueError("dimension mismatch")
        if not any(v):
            return self
        return EdgeFlow(
            self.d, {(add(base, v), axis): m for (base, axis), m in self._entries.items()}
        )

    def total_abs(self) -> int:
        return sum(abs(m) for m in self._entries.values())

    def support_points(self) -> set:
        pts = set()
        for (base, axis), _ in self._entries.items():
            pts.add(base)
            pts.add(step_point(base, axis))
        return pts

    def restrict(self, radius: int) -> "EdgeFlow":
        """Sub-flow of edges whose base lies in the centered box of given radius."""
        return EdgeFlow(
            self.d,
            {
                (base, axis): m
                for (base, axis), m in self._entries.items()
                if all(abs(c) <= radius for c in base)
            },
        )

    def to_json(self) -> list:
        return [
            {"base": list(base), "axis": axis, "mult": mult}
            for (base, axis), mult in self.items()
        ]

    @classmethod
    def from_json(cls, d: int, entries: Sequence[Mapping]) -> "EdgeFlow":
        return cls(d, {(tuple(e["base"]), e["axis"]): e["mult"] for e in entries})

    def __repr__(self) -> str:
        return f"EdgeFlow(d={self.d}, {dict(self.items())!r})"


def flow_of_path(path: LatticePath) -> EdgeFlow:
    """Signed traversal count of every edge along the path."""
    data: Dict[Edge, int] = {}
    p = path.start
    for s in path.steps:
        edge, sign = step_edge(p, s)
        m = data.get(edge, 0) + sign
        if m:
            data[edge] = m
        else:
            del data[edge]
        p = step_point(p, s)
    return EdgeFlow(path.d, data)


def divergence(flow: EdgeFlow) -> Dict[Point, int]:
    """Net inflow at each vertex: sum of incoming minus outgoing multiplicities.

    A path from 0 to v has divergence {v: +1, 0: -1}; cycles have empty
    divergence.
    """
    div: Dict[Point, int] = {}

    def bump(p: Point, delta: int):
        m = div.get(p, 0) + delta
        if m:
            div[p] = m
        else:
            del div[p]

    for (base, axis), mult in flow.items():
        head = step_point(base, axis)
        bump(head, mult)
        bump(base, -mult)
    return div


AXIS_ORDER = "axis-order"
REVERSE_AXIS_ORDER = "reverse-axis-order"
PATH_RULES = (AXIS_ORDER, REVERSE_AXIS_ORDER)


@dataclass(frozen=True)
class PathSystem:
    """Deterministic choice of a staircase path from the origin to each point.

    ``axis-order`` walks out all axis-1 moves first, then axis-2, and so on;
    ``reverse-axis-order`` starts from the last axis.  Either rule sends 0 to
    the empty path and v to a monotone path of length ||v||_1.
    """

    rule: str = AXIS_ORDER

    def __post_init__(self):
        if self.rule not in PATH_RULES:
            raise ValueError(f"unknown path system rule {self.rule!r}")

    def path(self, v: Point) -> LatticePath:
        d = len(v)
        axes = range(1, d + 1) if self.rule == AXIS_ORDER else range(d, 0, -1)
        steps = []
        for axis in axes:
            c = v[axis - 1]
            letter = axis if c > 0 else -axis
            steps.extend([letter] * abs(c))
        return LatticePath(d, origin(d), tuple(steps))

    def flow(self, v: Point) -> EdgeFlow:
        return flow_of_path(self.path(v))


def canonical_path(v: Point, ps: PathSystem | None = None) -> LatticePath:
    return (ps or PathSystem()).path(v)
