"""Uniform engine interface over the five group varieties.

Each engine exposes identity/step/mul/inv/eval plus a hashable normal-form
key, which is what breadth-first ball enumeration, the exact entropy sweep
and the CLI equality command consume.  The normal forms are: the endpoint
(abelian), the reduced word (free), endpoint plus oriented areas
(nilpotent of class 2), endpoint plus edge flow (metabelian), and position
plus lamp configuration (lamplighter).
"""

from __future__ import annotations

from typing import Dict

from .lattice import origin, step_point
from .metabelian import MetabelianElement, mb_eval, mb_identity, mb_inv, mb_mul, mb_step
from .quotients import (
    LampGroupSpec,
    LamplighterElement,
    NilpotentElement,
    ll_eval,
    ll_identity,
    ll_inv,
    ll_mul,
    nil_eval,
    nil_identity,
    nil_inv,
    nil_mul,
)
from .words import Word, abelianization, free_reduce

VARIETIES = ("abelian", "free", "nilpotent2", "metabelian", "lamplighter")


class AbelianEngine:
    name = "abelian"

    def __init__(self, d: int, m=None):
        self.d = d
        self.n_generators = d

    def identity(self):
        return origin(self.d)

    def step(self, elem, letter):
        return step_point(elem, letter)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def eval(self, word: Word):
        return abelianization(word)

    def key(self, elem):
        return elem

    def is_identity(self, elem) -> bool:
        return not any(elem)

    def to_json(self, elem) -> dict:
        return {"variety": "abelian", "d": self.d, "endpoint": list(elem)}


class FreeEngine:
    name = "free"

    def __init__(self, d: int, m=None):
        self.d = d
        self.n_generators = d

    def identity(self):
        return ()

    def step(self, elem, letter):
        if elem and elem[-1] == -letter:
            return elem[:-1]
        return elem + (letter,)

    def mul(self, a, b):
        out = list(a)
        for s in b:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    def inv(self, a):
        return tuple(-s for s in reversed(a))

    def eval(self, word: Word):
        return free_reduce(word).letters

    def key(self, elem):
        return elem

    def is_identity(self, elem) -> bool:
        return not elem

    def to_json(self, elem) -> dict:
        from .words import format_word

        return {
            "variety": "free",
            "d": self.d,
            "reduced": format_word(Word(self.d, elem)),
            "length": len(elem),
        }


class NilpotentEngine:
    name = "nilpotent2"

    def __init__(self, d: int, m=None):
        self.d = d
        self.n_generators = d
        self._letters = {
            s * a: nil_eval(Word(d, (s * a,)))
            for a in range(1, d + 1)
            for s in (1, -1)
        }

    def identity(self):
        return nil_identity(self.d)

    def step(self, elem, letter):
        return nil_mul(elem, self._letters[letter])

    def mul(self, a, b):
        return nil_mul(a, b)

    def inv(self, a):
        return nil_inv(a)

    def eval(self, word: Word):
        return nil_eval(word)

    def key(self, elem: NilpotentElement):
        return elem.key()

    def is_identity(self, elem) -> bool:
        return elem.is_identity()

    def to_json(self, elem) -> dict:
        return elem.to_json()


class MetabelianEngine:
    name = "metabelian"

    def __init__(self, d: int, m=None):
        self.d = d
        self.n_generators = d

    def identity(self):
        return mb_identity(self.d)

    def step(self, elem, letter):
        return mb_step(elem, letter)

    def mul(self, a, b):
        return mb_mul(a, b)

    def inv(self, a):
        return mb_inv(a)

    def eval(self, word: Word):
        return mb_eval(word)

    def key(self, elem: MetabelianElement):
        return elem.key()

    def is_identity(self, elem) -> bool:
        return elem.is_identity()

    def to_json(self, elem) -> dict:
        return elem.to_json()


class LamplighterEngine:
    name = "lamplighter"

    def __init__(self, d: int, m: int = 0):
        self.d = d  # lattice dimension; the alphabet has d+1 letters
        self.spec = LampGroupSpec(m or 0)
        self.n_generators = d + 1

    def identity(self):
        return ll_identity(self.d, self.spec)

    def step(self, elem: LamplighterElement, letter):
        lamp = self.d + 1
        if abs(letter) == lamp:
            delta = 1 if letter > 0 else -1
            lamps = dict(elem.lamps)
            v = self.spec.reduce(lamps.get(elem.position, 0) + delta)
            if v:
                lamps[elem.position] = v
            else:
                lamps.pop(elem.position, None)
            return LamplighterElement(
                elem.d, elem.m, elem.position, tuple(sorted(lamps.items()))
            )
        return LamplighterElement(
            elem.d, elem.m, step_point(elem.position, letter), elem.lamps
        )

    def mul(self, a, b):
        return ll_mul(a, b)

    def inv(self, a):
        return ll_inv(a)

    def eval(self, word: Word):
        return ll_eval(word, self.spec)

    def key(self, elem: LamplighterElement):
        return elem.key()

    def is_identity(self, elem) -> bool:
        return elem.is_identity()

    def to_json(self, elem) -> dict:
        return elem.to_json()


_CLASSES = {
    "abelian": AbelianEngine,
    "free": FreeEngine,
    "nilpotent2": NilpotentEngine,
    "metabelian": MetabelianEngine,
    "lamplighter": LamplighterEngine,
}


def make_engine(variety: str, d: int, m: int | None = None):
    if variety not in _CLASSES:
        raise ValueError(f"unknown variety {variety!r}; expected one of {VARIETIES}")
    if variety != "lamplighter" and m not in (None, 0):
        raise ValueError("lamp modulus m only applies to the lamplighter variety")
    return _CLASSES[variety](d, m)
