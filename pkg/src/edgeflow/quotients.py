"""Quotient groups of the metabelian engine: free nilpotent of class 2 and
lamplighter wreath products Z^d wr H for cyclic H.

Nilpotent elements carry the endpoint plus the antisymmetric matrix of
oriented areas enclosed by the path after closing it with the canonical
staircase return; the areas are computed by a linear functional on closed
flows rather than a vertex shoelace, which makes the quotient map from the
metabelian engine explicit.

Lamplighter elements carry the walker position and the finite lamp
configuration; they arise from (d+1)-letter words whose last generator is
the lamp switch, or by projecting a metabelian element of dimension d+1
through column sums of its edges parallel to the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .lattice import EdgeFlow, PathSystem, Point, add, neg, origin, step_point, unit
from .metabelian import MetabelianElement, mb_eval, mb_mul, placket
from .words import Word

_STAIRCASE = PathSystem()


def area_functional(flow: EdgeFlow, i: int, j: int) -> int:
    """Sum of base_i * multiplicity over edges parallel to axis j.

    On closed flows this is the oriented area of the (i,j) projection.
    """
    total = 0
    for (base, axis), mult in flow.items():
        if axis == j:
            total += base[i - 1] * mult
    return total


@dataclass(frozen=True)
class NilpotentElement:
    d: int
    endpoint: Point
    areas: Tuple[Tuple[int, ...], ...]  # full antisymmetric d x d matrix, rows as tuples

    def __post_init__(self):
        a = self.areas
        if len(a) != self.d or any(len(row) != self.d for row in a):
            raise ValueError("areas must be a d x d matrix")
        for i in range(self.d):
            if a[i][i] != 0:
                raise ValueError("diagonal areas must vanish")
            for j in range(i + 1, self.d):
                if a[i][j] != -a[j][i]:
                    raise ValueError("areas must be antisymmetric")

    def area(self, i: int, j: int) -> int:
        return self.areas[i - 1][j - 1]

    def is_identity(self) -> bool:
        return self.endpoint == origin(self.d) and all(
            v == 0 for row in self.areas for v in row
        )

    def key(self):
        return (self.endpoint, self.areas)

    def to_json(self) -> dict:
        return {
            "variety": "nilpotent2",
            "d": self.d,
            "endpoint": list(self.endpoint),
            "areas": [list(row) for row in self.areas],
        }


def _areas_matrix(d: int, upper: Dict[Tuple[int, int], int]) -> Tuple[Tuple[int, ...], ...]:
    rows = [[0] * d for _ in range(d)]
    for (i, j), v in upper.items():
        rows[i - 1][j - 1] = v
        rows[j - 1][i - 1] = -v
    return tuple(tuple(row) for row in rows)


def nil_identity(d: int) -> NilpotentElement:
    return NilpotentElement(d, origin(d), _areas_matrix(d, {}))


def areas_of_element(g: MetabelianElement) -> NilpotentElement:
    """Quotient map: close the flow by the staircase return and read areas."""
    closed = g.flow - _STAIRCASE.flow(g.endpoint)
    upper = {}
    for i in range(1, g.d + 1):
        for j in range(i + 1, g.d + 1):
            v = area_functional(closed, i, j)
            if v:
                upper[(i, j)] = v
    return NilpotentElement(g.d, g.endpoint, _areas_matrix(g.d, upper))


def nil_eval(word: Word) -> NilpotentElement:
    return areas_of_element(mb_eval(word))


def _representative(a: NilpotentElement) -> MetabelianElement:
    """A metabelian element mapping to ``a``: staircase flow plus plackets."""
    flow = _STAIRCASE.flow(a.endpoint)
    for i in range(1, a.d + 1):
        for j in range(i + 1, a.d + 1):
            k = a.area(i, j)
            if k:
                flow = flow + k * placket(i, j, origin(a.d))
    return MetabelianElement(a.d, a.endpoint, flow)


def nil_mul(a: NilpotentElement, b: NilpotentElement) -> NilpotentElement:
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    return areas_of_element(mb_mul(_representative(a), _representative(b)))


def nil_inv(a: NilpotentElement) -> NilpotentElement:
    from .metabelian import mb_inv

    return areas_of_element(mb_inv(_representative(a)))


@dataclass(frozen=True)
class LampGroupSpec:
    """Cyclic lamp group: m = 0 means H = Z, m >= 2 means H = Z_m."""

    m: int = 0

    def __post_init__(self):
        if self.m < 0 or self.m == 1:
            raise ValueError("lamp modulus must be 0 or >= 2")

    def reduce(self, v: int) -> int:
        return v % self.m if self.m else v


@dataclass(frozen=True)
class LamplighterElement:
    d: int  # lattice dimension (the walker moves in Z^d)
    m: int
    position: Point
    lamps: Tuple[Tuple[Point, int], ...]  # sorted, nonzero values

    def spec(self) -> LampGroupSpec:
        return LampGroupSpec(self.m)

    def lamp_map(self) -> Dict[Point, int]:
        return dict(self.lamps)

    def is_identity(self) -> bool:
        return self.position == origin(self.d) and not self.lamps

    def key(self):
        return (self.position, self.lamps)

    def to_json(self) -> dict:
        return {
            "variety": "lamplighter",
            "d": self.d,
            "m": self.m,
            "position": list(self.position),
            "lamps": [{"node": list(node), "value": value} for node, value in self.lamps],
        }


def _freeze_lamps(spec: LampGroupSpec, lamps: Dict[Point, int]) -> Tuple[Tuple[Point, int], ...]:
    out = {}
    for node, value in lamps.items():
        v = spec.reduce(value)
        if v:
            out[node] = v
    return tuple(sorted(out.items()))


def ll_identity(d: int, spec: LampGroupSpec) -> LamplighterElement:
    return LamplighterElement(d, spec.m, origin(d), ())


def ll_eval(word: Word, spec: LampGroupSpec) -> LamplighterElement:
    """Evaluate a (d+1)-letter word: letters 1..d move, letter d+1 switches
    the lamp at the current node."""
    d = word.d - 1
    if d < 1:
        raise ValueError("lamplighter words need at least 2 letters in the alphabet")
    pos = origin(d)
    lamps: Dict[Point, int] = {}
    lamp_letter = word.d
    for s in word.letters:
        if abs(s) == lamp_letter:
            lamps[pos] = lamps.get(pos, 0) + (1 if s > 0 else -1)
        else:
            pos = step_point(pos, s)
    return LamplighterElement(d, spec.m, pos, _freeze_lamps(spec, lamps))


def ll_project(g: MetabelianElement, spec: LampGroupSpec) -> LamplighterElement:
    """Factor map from dimension d+1: lamp values are the column sums of the
    flow over edges parallel to the last axis."""
    d = g.d - 1
    if d < 1:
        raise ValueError("need dimension >= 2 to project")
    lamps: Dict[Point, int] = {}
    for (base, axis), mult in g.flow.items():
        if axis == g.d:
            node = base[:d]
            lamps[node] = lamps.get(node, 0) + mult
    return LamplighterElement(d, spec.m, g.endpoint[:d], _freeze_lamps(spec, lamps))


def ll_mul(a: LamplighterElement, b: LamplighterElement) -> LamplighterElement:
    if a.d != b.d or a.m != b.m:
        raise ValueError("lamplighter parameters mismatch")
    spec = a.spec()
    lamps = dict(a.lamps)
    for node, value in b.lamps:
        shifted = add(node, a.position)
        lamps[shifted] = lamps.get(shifted, 0) + value
    return LamplighterElement(
        a.d, a.m, add(a.position, b.position), _freeze_lamps(spec, lamps)
    )


def ll_inv(a: LamplighterElement) -> LamplighterElement:
    spec = a.spec()
    p = neg(a.position)
    lamps = {add(node, p): -value for node, value in a.lamps}
    return LamplighterElement(a.d, a.m, p, _freeze_lamps(spec, lamps))
