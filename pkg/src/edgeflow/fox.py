"""Abelianized Fox derivatives: the wreath-product embedding as an oracle.

For each generator i, a word w gets a finite Laurent table: an integer
function on Z^d recording the abelianized Fox derivative d(w)/d(x_i).  The
tables follow the product rule

    table_i(u v) = table_i(u) + shift by ab(u) of table_i(v)

with base cases table_i(x_j) = delta_ij at 0 and
table_i(x_j^-1) = -delta_ij at -e_j, where ab(u) is the abelianization.

This module deliberately shares no code with the path/flow machinery: the
tables are built directly from the recursion with their own dictionary
arithmetic, so agreement with the edge-flow normal form is a genuine
cross-check of both implementations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .words import Word


@dataclass(frozen=True)
class LaurentTable:
    """Per-generator finite maps Z^d -> Z; the Magnus embedding data."""

    d: int
    tables: Tuple[Tuple[Tuple[Tuple[int, ...], int], ...], ...]

    def table(self, i: int) -> Dict[Tuple[int, ...], int]:
        """The finite map for generator i (1-based)."""
        return dict(self.tables[i - 1])

    def key(self):
        return self.tables


def fox_flow_oracle(word: Word) -> LaurentTable:
    d = word.d
    tables: list[Dict[Tuple[int, ...], int]] = [dict() for _ in range(d)]
    ab = [0] * d
    for letter in word.letters:
        i = abs(letter)
        t = tables[i - 1]
        if letter > 0:
            exponent = tuple(ab)
            delta = 1
            ab[i - 1] += 1
        else:
            ab[i - 1] -= 1
            exponent = tuple(ab)
            delta = -1
        m = t.get(exponent, 0) + delta
        if m:
            t[exponent] = m
        else:
            del t[exponent]
    frozen = tuple(tuple(sorted(t.items())) for t in tables)
    return LaurentTable(d, frozen)


def fox_abelianization(word: Word) -> Tuple[int, ...]:
    ab = [0] * word.d
    for letter in word.letters:
        ab[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(ab)
