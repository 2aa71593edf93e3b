"""Minimal-word search for metabelian elements.

Finding a shortest word realizing a given (endpoint, flow) pair is a signed
rural-postman problem on the lattice: the word must traverse every support
edge with the prescribed net multiplicity, may deadhead across other edges
only in cancelling pairs, and must walk from the origin to the endpoint.

``min_word_exact`` runs iterative-deepening DFS with an admissible bound
(remaining flow mass, plus a component-connector term, and the endpoint
distance, all parity-corrected), expanding letters in the fixed order
+1 < -1 < +2 < -2 < ... so the first word found is the lexicographically
least minimal one.  ``min_word_upper`` builds a connected Eulerian
multigraph from the flow (net-direction copies of support edges plus
back-and-forth connector pairs along greedy closest-pair staircases) and
extracts a directed Euler path, giving a sound upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import BudgetExceededError
from .lattice import Edge, EdgeFlow, Point, l1, origin, step_edge, step_point
from .metabelian import MetabelianElement, mb_eval
from .words import Word


@dataclass(frozen=True)
class LengthBounds:
    lower: int
    upper: int
    witness: Word
    exact: int | None = None

    def __post_init__(self):
        if self.lower > self.upper or (self.lower - self.upper) % 2:
            raise ValueError("bounds must satisfy lower <= upper with equal parity")


def length_lower_bound(g: MetabelianElement) -> int:
    """max(total flow mass, L1 endpoint distance); every word for g is at
    least this long and has the parity of the flow mass."""
    return max(g.flow.total_abs(), l1(g.endpoint))


def _components(edges: List[Edge]) -> List[List[Point]]:
    parent: Dict[Point, Point] = {}

    def find(x: Point) -> Point:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: Point, b: Point):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for base, axis in edges:
        head = step_point(base, axis)
        parent.setdefault(base, base)
        parent.setdefault(head, head)
        union(base, head)
    groups: Dict[Point, List[Point]] = {}
    for p in parent:
        groups.setdefault(find(p), []).append(p)
    return [sorted(g) for g in sorted(groups.values())]


def _component_mst(components: List[List[Point]]) -> int:
    """Total L1 length of a minimum spanning tree over vertex groups."""
    k = len(components)
    if k <= 1:
        return 0
    in_tree = [False] * k
    dist = [min(l1(a, b) for a in components[0] for b in comp) for comp in components]
    in_tree[0] = True
    dist[0] = 0
    total = 0
    for _ in range(k - 1):
        best, best_d = -1, None
        for i in range(k):
            if not in_tree[i] and (best_d is None or dist[i] < best_d):
                best, best_d = i, dist[i]
        in_tree[best] = True
        total += best_d
        for i in range(k):
            if not in_tree[i]:
                d = min(l1(a, b) for a in components[best] for b in components[i])
                if d < dist[i]:
                    dist[i] = d
    return total


class _Search:
    """State for the iterative-deepening exact search."""

    def __init__(self, g: MetabelianElement):
        self.d = g.d
        self.endpoint = g.endpoint
        self.remaining: Dict[Edge, int] = dict(g.flow.mapping())
        self.flowsum = g.flow.total_abs()
        self.pos = origin(g.d)
        self.letters = tuple(
            (axis if s == 0 else -axis)
            for axis in range(1, g.d + 1)
            for s in (0, 1)
        )
        self.found: List[int] | None = None

    def bound(self) -> int:
        """Admissible lower bound on the remaining word length."""
        h = max(self.flowsum, l1(self.pos, self.endpoint))
        support = [e for e, m in self.remaining.items() if m]
        if support:
            conn = _component_mst(_components(support))
            if self.flowsum + conn > h:
                h = self.flowsum + conn
        if (h - self.flowsum) % 2:
            h += 1
        return h

    def dfs(self, depth_left: int, prefix: List[int]) -> bool:
        if self.bound() > depth_left:
            return False
        if depth_left == 0:
            # bound() == 0 implies remaining flow is exhausted and pos == endpoint
            self.found = list(prefix)
            return True
        prev = prefix[-1] if prefix else 0
        for letter in self.letters:
            if letter == -prev:
                continue  # minimal words are freely reduced
            edge, sign = step_edge(self.pos, letter)
            m = self.remaining.get(edge, 0)
            self.remaining[edge] = m - sign
            self.flowsum += abs(m - sign) - abs(m)
            old_pos = self.pos
            self.pos = step_point(self.pos, letter)
            prefix.append(letter)
            if self.dfs(depth_left - 1, prefix):
                return True
            prefix.pop()
            self.pos = old_pos
            self.remaining[edge] = m
            self.flowsum += abs(m) - abs(m - sign)
        return False


def min_word_exact(g: MetabelianElement, budget: int) -> Word:
    """Shortest word for g, lexicographically least among minimal ones.

    Raises BudgetExceededError when the minimum exceeds ``budget``; the
    exception carries the certified lower bound reached by the search.
    """
    search = _Search(g)
    start = search.bound()
    depth = start
    while depth <= budget:
        if search.dfs(depth, []):
            return Word(g.d, tuple(search.found))
        depth += 2
    raise BudgetExceededError(
        f"no word of length <= {budget}; minimum is >= {depth}", lower_bound=depth
    )


def min_word_upper(g: MetabelianElement) -> Word:
    """A word evaluating to g via a directed Euler path; sound, not optimal."""
    d = g.d
    adjacency: Dict[Point, List[Tuple[Point, int]]] = {}

    def add_arc(u: Point, v: Point, letter: int):
        adjacency.setdefault(u, []).append((v, letter))

    support = []
    for (base, axis), mult in g.flow.items():
        head = step_point(base, axis)
        support.append((base, axis))
        if mult > 0:
            for _ in range(mult):
                add_arc(base, head, axis)
        else:
            for _ in range(-mult):
                add_arc(head, base, -axis)

    components = _components(support)
    for anchor in (origin(d), g.endpoint):
        if not any(anchor in comp for comp in components):
            components.append([anchor])
    components.sort()

    def connector(a: Point, b: Point):
        """Back-and-forth staircase between a and b."""
        p = a
        for axis in range(1, d + 1):
            delta = b[axis - 1] - p[axis - 1]
            letter = axis if delta > 0 else -axis
            for _ in range(abs(delta)):
                q = step_point(p, letter)
                add_arc(p, q, letter)
                add_arc(q, p, -letter)
                p = q

    k = len(components)
    if k > 1:
        in_tree = [False] * k
        in_tree[0] = True
        for _ in range(k - 1):
            best = None
            for i in range(k):
                if not in_tree[i]:
                    continue
                for j in range(k):
                    if in_tree[j]:
                        continue
                    for a in components[i]:
                        for b in components[j]:
                            cand = (l1(a, b), a, b, j)
                            if best is None or cand < best:
                                best = cand
            _, a, b, j = best
            connector(a, b)
            in_tree[j] = True

    for u in adjacency:
        adjacency[u].sort(reverse=True)  # pop() then yields smallest first

    # Hierholzer: start at the origin; the single out-minus-in = +1 vertex
    # when the endpoint differs, otherwise an Euler circuit through 0.
    stack: List[Tuple[Point, int | None]] = [(origin(d), None)]
    out_letters: List[int] = []
    while stack:
        u, _ = stack[-1]
        arcs = adjacency.get(u)
        if arcs:
            v, letter = arcs.pop()
            stack.append((v, letter))
        else:
            _, letter = stack.pop()
            if letter is not None:
                out_letters.append(letter)
    out_letters.reverse()
    word = Word(d, tuple(out_letters))
    result = mb_eval(word)
    assert result == g, "euler construction must reproduce the element"
    return word


def length_bounds(g: MetabelianElement, budget: int | None = None) -> LengthBounds:
    """Bracket the minimal length; run the exact solver when budget allows."""
    lower = length_lower_bound(g)
    witness = min_word_upper(g)
    upper = len(witness)
    exact = None
    if budget is not None and budget >= lower:
        try:
            exact_word = min_word_exact(g, budget)
            witness = exact_word
            upper = len(exact_word)
            exact = upper
            lower = upper
        except BudgetExceededError as exc:
            if exc.lower_bound is not None and exc.lower_bound > lower:
                lower = min(exc.lower_bound, upper)
                if (lower - upper) % 2:
                    lower -= 1
    return LengthBounds(lower=lower, upper=upper, witness=witness, exact=exact)
