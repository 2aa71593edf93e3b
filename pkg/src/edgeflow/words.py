"""Words over d signed generators, their grammar, and the word/path dictionary.

A word is a sequence of signed generator indices: +i stands for x_i and -i
for its inverse.  The text grammar is

    word  := token*
    token := ('x' | 'X') index ('^' signed-nonzero-int)?
    index := decimal integer in 1..d

'X' spells the inverse generator and '^k' repeats the letter k times
(negative k inverts).  Tokens are separated by whitespace or simply by
adjacency at a letter boundary, so "x1x2X1X2" and "x1 x2 X1 X2" parse the
same.  The letters 'a'/'A' are accepted as aliases for generator d when a
lamp alphabet is in use (lamplighter words).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .lattice import LatticePath, origin


class WordError(ValueError):
    """Base class for word parsing errors; carries a character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class WordSyntaxError(WordError):
    pass


class GeneratorRangeError(WordError):
    pass


@dataclass(frozen=True)
class Word:
    """Immutable word over d generators; letters are nonzero ints in -d..d."""

    d: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        for s in self.letters:
            if not 1 <= abs(s) <= self.d:
                raise ValueError(f"letter {s} out of range for d={self.d}")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.d != other.d:
            raise ValueError("alphabet size mismatch")
        return Word(self.d, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.d, tuple(-s for s in reversed(self.letters)))

    def __str__(self) -> str:
        return format_word(self)


def parse_word(text: str, d: int, lamp_alias: bool = False) -> Word:
    """Parse a word in the x/X grammar; see the module docstring.

    With lamp_alias=True the letters 'a'/'A' abbreviate generator d (the
    lamp generator of a (d-1)-dimensional lamplighter alphabet).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    letters = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "xX":
            sign = 1 if ch == "x" else -1
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise WordSyntaxError("expected generator index after letter", i + 1)
            index = int(text[i + 1 : j])
        elif lamp_alias and ch in "aA":
            sign = 1 if ch == "a" else -1
            index = d
            j = i + 1
        else:
            raise WordSyntaxError(f"unexpected character {ch!r}", i)
        if index < 1 or index > d:
            raise GeneratorRangeError(f"generator index {index} out of range 1..{d}", i)
        exponent = 1
        if j < n and text[j] == "^":
            k = j + 1
            if k < n and text[k] == "-":
                k += 1
            e = k
            while e < n and text[e].isdigit():
                e += 1
            if e == k:
                raise WordSyntaxError("expected integer exponent after '^'", j + 1)
            exponent = int(text[j + 1 : e])
            if exponent == 0:
                raise WordSyntaxError("exponent must be nonzero", j + 1)
            j = e
        letter = sign * index
        if exponent < 0:
            letter, exponent = -letter, -exponent
        letters.extend([letter] * exponent)
        i = j
    return Word(d, tuple(letters))


def format_word(word: Word) -> str:
    """Canonical spelling: maximal runs as xi / Xi / xi^k / Xi^k, space separated."""
    if not word.letters:
        return ""
    parts = []
    run_letter = word.letters[0]
    run_len = 1
    for s in word.letters[1:]:
        if s == run_letter:
            run_len += 1
            continue
        parts.append(_format_run(run_letter, run_len))
        run_letter, run_len = s, 1
    parts.append(_format_run(run_letter, run_len))
    return " ".join(parts)


def _format_run(letter: int, count: int) -> str:
    head = ("x" if letter > 0 else "X") + str(abs(letter))
    return head if count == 1 else f"{head}^{count}"


def word_to_path(word: Word) -> LatticePath:
    """Identify generator i with the i-th coordinate direction; empty word
    becomes the trivial path at the origin."""
    return LatticePath(word.d, origin(word.d), word.letters)


def free_reduce(word: Word) -> Word:
    """Cancel adjacent mutually inverse letters until none remain."""
    stack: list[int] = []
    for s in word.letters:
        if stack and stack[-1] == -s:
            stack.pop()
        else:
            stack.append(s)
    return Word(word.d, tuple(stack))


def abelianization(word: Word) -> Tuple[int, ...]:
    """Endpoint of the word's path: net count per generator."""
    counts = [0] * word.d
    for s in word.letters:
        counts[abs(s) - 1] += 1 if s > 0 else -1
    return tuple(counts)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()
