"""Random-walk laboratory: simulation, drift, exact entropy, ball growth,
and the fundamental-inequality report.

The walk is simple and symmetric: letters are i.i.d. uniform over the
2 * (#generators) signed generators, with probability 1/(2#gen) each.
Entropy is computed exactly by convolving the step distribution on the
group itself (grouping all length-N words by normal form), never estimated
by plug-in Monte Carlo; growth is exact breadth-first enumeration with
normal-form dedup; drift is Monte Carlo over independent reproducible
trajectory streams, reported as a [lower bound, upper bound] bracket on
the expected minimal word length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .engines import VARIETIES, make_engine
from .errors import BudgetExceededError
from .geodesic import length_lower_bound, min_word_exact, min_word_upper
from .metabelian import mb_eval
from .quotients import LampGroupSpec
from .rng import codes_to_letters, letter_codes
from .words import Word, free_reduce

ENUM_BUDGET_DEFAULT = 20_000_000
EXACT_LENGTH_MAX_N = 8
CI_SIGMAS = 3.0


@dataclass(frozen=True)
class WalkConfig:
    variety: str
    d: int
    m: int | None = None

    def __post_init__(self):
        if self.variety not in VARIETIES:
            raise ValueError(f"unknown variety {self.variety!r}")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.variety == "lamplighter":
            LampGroupSpec(self.m or 0)
        elif self.m not in (None, 0):
            raise ValueError("lamp modulus m only applies to the lamplighter variety")

    @property
    def n_generators(self) -> int:
        return self.d + 1 if self.variety == "lamplighter" else self.d

    @property
    def n_letters(self) -> int:
        return 2 * self.n_generators

    def engine(self):
        return make_engine(self.variety, self.d, self.m)

    def to_json(self) -> dict:
        obj = {"variety": self.variety, "d": self.d}
        if self.variety == "lamplighter":
            obj["m"] = self.m or 0
        return obj


@dataclass(frozen=True)
class Trajectory:
    """A reproducible letter stream: a pure function of (cfg, seed, stream)."""

    cfg: WalkConfig
    seed: int
    steps: int
    stream: int = 0

    def codes(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        stop = self.steps if stop is None else stop
        if not 0 <= start <= stop <= self.steps:
            raise IndexError("trajectory slice out of range")
        return letter_codes(self.seed, self.stream, start, stop - start, self.cfg.n_letters)

    def letters(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        return codes_to_letters(self.codes(start, stop))

    def letter(self, i: int) -> int:
        return int(self.letters(i, i + 1)[0])

    def word(self, n: int | None = None) -> Word:
        n = self.steps if n is None else n
        return Word(self.cfg.n_generators, tuple(int(s) for s in self.letters(0, n)))


def simulate(cfg: WalkConfig, seed: int, steps: int, stream: int = 0) -> Trajectory:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    return Trajectory(cfg, seed, steps, stream)


# -- drift -------------------------------------------------------------------


@dataclass(frozen=True)
class DriftRow:
    N: int
    samples: int
    lower_mean: float
    lower_halfwidth: float
    upper_mean: float
    upper_halfwidth: float
    exact_mean: float | None = None

    def to_json(self) -> dict:
        obj = {
            "N": self.N,
            "samples": self.samples,
            "lower_mean": self.lower_mean,
            "lower_halfwidth": self.lower_halfwidth,
            "upper_mean": self.upper_mean,
            "upper_halfwidth": self.upper_halfwidth,
        }
        if self.exact_mean is not None:
            obj["exact_mean"] = self.exact_mean
        return obj


@dataclass(frozen=True)
class DriftStats:
    cfg: WalkConfig
    seed: int
    rows: Tuple[DriftRow, ...]


def _lamp_letter_cost(value: int, m: int) -> int:
    if m == 0:
        return abs(value)
    v = value % m
    return min(v, m - v)


def _length_bracket(cfg: WalkConfig, word: Word, exact_budget: int | None):
    """(lower, upper, exact) bounds on the minimal length of the word's element."""
    if cfg.variety == "abelian":
        L = sum(abs(c) for c in _abelian_endpoint(word, cfg.d))
        return L, L, L
    if cfg.variety == "free":
        L = len(free_reduce(word))
        return L, L, L
    if cfg.variety == "metabelian":
        g = mb_eval(word)
        lower = length_lower_bound(g)
        upper = len(min_word_upper(g))
        exact = None
        if exact_budget is not None and len(word) <= exact_budget:
            exact = len(min_word_exact(g, len(word)))
            lower = upper = exact
        return lower, upper, exact
    if cfg.variety == "lamplighter":
        engine = cfg.engine()
        g = engine.eval(word)
        m = cfg.m or 0
        switches = sum(_lamp_letter_cost(v, m) for _, v in g.lamps)
        lower = sum(abs(c) for c in g.position) + switches
        upper = len(free_reduce(word))
        return lower, upper, None
    # nilpotent2: the reduced word realizes the element; the endpoint norm
    # is the only cheap certified lower bound
    engine = cfg.engine()
    g = engine.eval(word)
    lower = sum(abs(c) for c in g.endpoint)
    upper = len(free_reduce(word))
    return lower, upper, None


def _abelian_endpoint(word: Word, d: int):
    counts = [0] * d
    for s in word.letters:
        counts[abs(s) - 1] += 1 if s > 0 else -1
    return counts


def drift_estimate(
    cfg: WalkConfig,
    Ns: Sequence[int] | int,
    samples: int,
    seed: int,
    exact_budget: int | None = EXACT_LENGTH_MAX_N,
) -> DriftStats:
    """Length-over-time bracket for the walk at the given horizons.

    Exact minimal lengths enter only for metabelian horizons within the
    exact budget; otherwise the bracket is [certified lower, heuristic
    upper], both divided by N.
    """
    if isinstance(Ns, int):
        Ns = [Ns]
    if samples < 1 or any(n < 1 for n in Ns):
        raise ValueError("need samples >= 1 and N >= 1")
    rows = []
    for idx_n, N in enumerate(Ns):
        lowers = np.empty(samples)
        uppers = np.empty(samples)
        exacts = [] if (cfg.variety == "metabelian" and exact_budget and N <= exact_budget) else None
        for s in range(samples):
            traj = simulate(cfg, seed, N, stream=idx_n * samples + s)
            word = traj.word()
            lo, up, exact = _length_bracket(cfg, word, exact_budget)
            lowers[s] = lo / N
            uppers[s] = up / N
            if exacts is not None and exact is not None:
                exacts.append(exact / N)
        rows.append(
            DriftRow(
                N=N,
                samples=samples,
                lower_mean=float(lowers.mean()),
                lower_halfwidth=float(CI_SIGMAS * lowers.std(ddof=1) / math.sqrt(samples))
                if samples > 1
                else 0.0,
                upper_mean=float(uppers.mean()),
                upper_halfwidth=float(CI_SIGMAS * uppers.std(ddof=1) / math.sqrt(samples))
                if samples > 1
                else 0.0,
                exact_mean=float(np.mean(exacts)) if exacts else None,
            )
        )
    return DriftStats(cfg=cfg, seed=seed, rows=tuple(rows))


# -- exact entropy -----------------------------------------------------------


@dataclass(frozen=True)
class EntropyStats:
    cfg: WalkConfig
    entropies: Tuple[float, ...]  # H_1 .. H_Nmax in nats

    @property
    def quotients(self) -> Tuple[float, ...]:
        return tuple(h / (n + 1) for n, h in enumerate(self.entropies))

    def to_json(self) -> dict:
        return {
            "cfg": self.cfg.to_json(),
            "H": list(self.entropies),
            "H_over_N": list(self.quotients),
        }


def _distribution_sweep(cfg: WalkConfig, n_max: int):
    """Yield (n, {normal form key: word count}) for n = 1..n_max."""
    engine = cfg.engine()
    letters = [
        (axis if s == 0 else -axis)
        for axis in range(1, cfg.n_generators + 1)
        for s in (0, 1)
    ]
    ident = engine.identity()
    dist: Dict = {engine.key(ident): (ident, 1)}
    for n in range(1, n_max + 1):
        nxt: Dict = {}
        for _, (elem, count) in dist.items():
            for letter in letters:
                h = engine.step(elem, letter)
                k = engine.key(h)
                if k in nxt:
                    nxt[k] = (nxt[k][0], nxt[k][1] + count)
                else:
                    nxt[k] = (h, count)
        dist = nxt
        yield n, {k: c for k, (_, c) in dist.items()}


def _entropy_from_counts(counts: Dict, total: int) -> float:
    # H = log T - (sum k log k) / T, exact integer counts
    s = 0.0
    for k in counts.values():
        if k > 1:
            s += k * math.log(k)
    return math.log(total) - s / total


def entropy_exact(cfg: WalkConfig, N: int, budget: int = ENUM_BUDGET_DEFAULT) -> float:
    """Exact H(mu^{*N}) in nats by grouping all (2#gen)^N words by normal form."""
    series = entropy_series(cfg, N, budget)
    return series.entropies[N - 1]


def entropy_series(cfg: WalkConfig, n_max: int, budget: int = ENUM_BUDGET_DEFAULT) -> EntropyStats:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if cfg.n_letters**n_max > budget:
        raise BudgetExceededError(
            f"(2#gen)^N = {cfg.n_letters}^{n_max} exceeds the enumeration budget {budget}"
        )
    entropies = []
    for n, counts in _distribution_sweep(cfg, n_max):
        entropies.append(_entropy_from_counts(counts, cfg.n_letters**n))
    return EntropyStats(cfg=cfg, entropies=tuple(entropies))


def distribution_exact(cfg: WalkConfig, N: int, budget: int = ENUM_BUDGET_DEFAULT) -> Dict:
    """Exact word counts per normal form at horizon N (the mu^{*N} atoms)."""
    if cfg.n_letters**N > budget:
        raise BudgetExceededError("enumeration budget exceeded")
    last = {}
    for n, counts in _distribution_sweep(cfg, N):
        last = counts
    return last


# -- growth ------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthStats:
    cfg: WalkConfig
    ball_sizes: Tuple[int, ...]  # |W_{<=N}| for N = 0..n_max
    truncated: bool = False

    @property
    def quotients(self) -> Tuple[float, ...]:
        return tuple(
            math.log(sz) / n for n, sz in enumerate(self.ball_sizes) if n >= 1
        )

    def to_json(self) -> dict:
        return {
            "cfg": self.cfg.to_json(),
            "ball_sizes": list(self.ball_sizes),
            "log_quotients": list(self.quotients),
            "truncated": self.truncated,
            "first_free_divergence": first_free_divergence(self),
        }


def free_ball_size(n_generators: int, n: int) -> int:
    """|W_<=n| of the free group: 1 + 2g((2g-1)^n - 1)/(2g-2)."""
    g = n_generators
    if g == 1:
        return 2 * n + 1
    return 1 + 2 * g * ((2 * g - 1) ** n - 1) // (2 * g - 2)


def first_free_divergence(stats: GrowthStats) -> int | None:
    """Smallest radius where the ball size drops below the free group's,
    i.e. half the shortest relator has been crossed; None if not reached."""
    g = stats.cfg.n_generators
    for n, size in enumerate(stats.ball_sizes):
        if size != free_ball_size(g, n):
            return n
    return None


def sphere_sizes(cfg: WalkConfig, n_max: int, max_elements: int = 5_000_000) -> GrowthStats:
    """Exact |W_{<=N}| by breadth-first search with normal-form dedup.

    Stops early with ``truncated=True`` when the element budget is hit.
    """
    engine = cfg.engine()
    letters = [
        (axis if s == 0 else -axis)
        for axis in range(1, cfg.n_generators + 1)
        for s in (0, 1)
    ]
    ident = engine.identity()
    seen = {engine.key(ident)}
    frontier = [ident]
    sizes = [1]
    truncated = False
    for _ in range(n_max):
        nxt = []
        for g in frontier:
            for letter in letters:
                h = engine.step(g, letter)
                k = engine.key(h)
                if k not in seen:
                    seen.add(k)
                    nxt.append(h)
        sizes.append(len(seen))
        frontier = nxt
        if len(seen) > max_elements:
            truncated = True
            break
    return GrowthStats(cfg=cfg, ball_sizes=tuple(sizes), truncated=truncated)


# -- fundamental inequality ---------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    cfg: WalkConfig
    seed: int
    entropy: EntropyStats
    growth: GrowthStats
    drift: DriftStats
    h_upper: float
    c_interval: Tuple[float, float]
    v_upper: float
    holds: bool
    gap: float

    def to_json(self) -> dict:
        product = self.c_interval[1] * self.v_upper
        return {
            "cfg": self.cfg.to_json(),
            "seed": self.seed,
            "h_upper": self.h_upper,
            "c_lower": self.c_interval[0],
            "c_upper": self.c_interval[1],
            "v_upper": self.v_upper,
            "product_cv": product,
            "holds": self.holds,
            "gap": self.gap,
            "relative_gap": self.gap / self.h_upper if self.h_upper else 0.0,
            "entropy_series": self.entropy.to_json(),
            "growth_series": self.growth.to_json(),
            "drift_rows": [r.to_json() for r in self.drift.rows],
            "note": (
                "all three numbers are finite-horizon upper bounds of the"
                " asymptotic constants; no equality or strictness is claimed;"
                " the escape rate c plays the role of l in h <= l*v (the two"
                " names denote the same length functional)"
            ),
        }


def inequality_report(
    cfg: WalkConfig,
    seed: int,
    entropy_n: int,
    growth_n: int,
    drift_n: int,
    drift_samples: int,
    entropy_budget: int = ENUM_BUDGET_DEFAULT,
) -> InequalityReport:
    """Assemble desk-scale bounds for entropy h, escape c and volume v.

    h_upper is the tightest computed H_N/N (the sequence is nonincreasing),
    v_upper the tightest log|W_N|/N (subadditive, so every term bounds v
    from above), and the drift interval brackets c at the simulated horizon.
    The verdict compares h_upper against c_upper * v_upper and reports the
    signed gap; all series stay attached to the report.
    """
    entropy = entropy_series(cfg, entropy_n, budget=entropy_budget)
    growth = sphere_sizes(cfg, growth_n)
    drift = drift_estimate(cfg, drift_n, drift_samples, seed)
    h_upper = min(entropy.quotients)
    v_upper = min(growth.quotients)
    row = drift.rows[-1]
    c_lower = max(0.0, row.lower_mean - row.lower_halfwidth)
    c_upper = row.upper_mean + row.upper_halfwidth
    product = c_upper * v_upper
    return InequalityReport(
        cfg=cfg,
        seed=seed,
        entropy=entropy,
        growth=growth,
        drift=drift,
        h_upper=h_upper,
        c_interval=(c_lower, c_upper),
        v_upper=v_upper,
        holds=h_upper <= product,
        gap=product - h_upper,
    )
