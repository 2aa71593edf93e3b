"""The free metabelian group on d generators realized by lattice edge flows.

An element is the pair (endpoint, edge flow) of any word representing it:
two words are equal in the group exactly when every oriented lattice edge
carries the same signed traversal count in both, so the pair is a complete
normal form and equality is structural.  Elements with endpoint 0 form the
commutant; their flows are divergence-free cycles generated by unit-square
plackets, and the whole group is the extension of these cycles by the
translation action of Z^d with an explicit 2-cocycle built from a path
system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .lattice import (
    Edge,
    EdgeFlow,
    PathSystem,
    Point,
    add,
    divergence,
    flow_of_path,
    neg,
    origin,
    step_edge,
    step_point,
    unit,
)
from .words import Word, word_to_path


@dataclass(frozen=True)
class MetabelianElement:
    d: int
    endpoint: Point
    flow: EdgeFlow

    def __post_init__(self):
        if len(self.endpoint) != self.d or self.flow.d != self.d:
            raise ValueError("dimension mismatch")

    def is_identity(self) -> bool:
        return not self.flow and self.endpoint == origin(self.d)

    def key(self):
        return (self.endpoint, self.flow.items())

    def to_json(self) -> dict:
        return {
            "variety": "metabelian",
            "d": self.d,
            "endpoint": list(self.endpoint),
            "flow": self.flow.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MetabelianElement":
        d = obj["d"]
        return cls(d, tuple(obj["endpoint"]), EdgeFlow.from_json(d, obj["flow"]))

    def check_divergence(self) -> bool:
        """Validate the path-boundary invariant of (endpoint, flow)."""
        div = divergence(self.flow)
        if self.endpoint == origin(self.d):
            return div == {}
        return div == {self.endpoint: 1, origin(self.d): -1}


def mb_identity(d: int) -> MetabelianElement:
    return MetabelianElement(d, origin(d), EdgeFlow(d))


def mb_eval(word: Word) -> MetabelianElement:
    """Evaluate a word: endpoint and edge flow of its lattice path."""
    path = word_to_path(word)
    return MetabelianElement(word.d, path.end(), flow_of_path(path))


def mb_mul(a: MetabelianElement, b: MetabelianElement) -> MetabelianElement:
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    return MetabelianElement(
        a.d, add(a.endpoint, b.endpoint), a.flow + b.flow.translate(a.endpoint)
    )


def mb_inv(a: MetabelianElement) -> MetabelianElement:
    e = neg(a.endpoint)
    return MetabelianElement(a.d, e, -(a.flow.translate(e)))


def mb_step(a: MetabelianElement, letter: int) -> MetabelianElement:
    """Right-multiply by a single generator letter in O(1) flow updates."""
    edge, sign = step_edge(a.endpoint, letter)
    return MetabelianElement(
        a.d,
        step_point(a.endpoint, letter),
        a.flow + EdgeFlow(a.d, {edge: sign}),
    )


def placket(i: int, j: int, base: Point) -> EdgeFlow:
    """Flow of the elementary (i,j) coordinate cycle around a unit cell.

    The loop visits base, base+e_i, base+e_i+e_j, base+e_j in that order;
    it is the image of the commutator [x_i, x_j] translated to ``base``.
    """
    d = len(base)
    if i == j:
        raise ValueError("placket axes must differ")
    if not (1 <= i <= d and 1 <= j <= d):
        raise ValueError("axis out of range")
    ei, ej = unit(d, i), unit(d, j)
    return EdgeFlow(
        d,
        {
            (base, i): 1,
            (add(base, ei), j): 1,
            (add(base, ej), i): -1,
            (base, j): -1,
        },
    )


def cocycle_beta(v: Point, w: Point, ps: PathSystem | None = None) -> EdgeFlow:
    """The extension 2-cocycle: the cycle (tau_v, v + tau_w, -tau_{v+w})."""
    ps = ps or PathSystem()
    if len(v) != len(w):
        raise ValueError("dimension mismatch")
    return ps.flow(v) + ps.flow(w).translate(v) - ps.flow(add(v, w))


ExtensionPair = Tuple[EdgeFlow, Point]


def extension_identity(d: int) -> ExtensionPair:
    return (EdgeFlow(d), origin(d))


def extension_mul(p: ExtensionPair, q: ExtensionPair, ps: PathSystem | None = None) -> ExtensionPair:
    """Group law of the extension of cycles by translations: the cycle parts
    add after shifting the second by the first endpoint, plus the cocycle."""
    ps = ps or PathSystem()
    c1, v1 = p
    c2, v2 = q
    if divergence(c1) or divergence(c2):
        raise ValueError("extension components must be cycles (zero divergence)")
    return (c1 + c2.translate(v1) + cocycle_beta(v1, v2, ps), add(v1, v2))


def to_extension(g: MetabelianElement, ps: PathSystem | None = None) -> ExtensionPair:
    """Split an element into (cycle part, endpoint) relative to a path system."""
    ps = ps or PathSystem()
    return (g.flow - ps.flow(g.endpoint), g.endpoint)


def from_extension(p: ExtensionPair, ps: PathSystem | None = None) -> MetabelianElement:
    ps = ps or PathSystem()
    cycle, v = p
    return MetabelianElement(len(v), v, cycle + ps.flow(v))
