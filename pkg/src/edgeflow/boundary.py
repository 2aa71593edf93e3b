"""Empirical boundary laboratory: stable edge flows, the recurrence and
transience dichotomy, and lamplighter final configurations.

The limiting flow map sends an infinite trajectory to the per-edge limits
of its signed traversal counts; at desk scale the limit is replaced by a
falsifiable two-checkpoint surrogate: an edge counts as stabilized over
horizon N when its flow is identical at steps N/2 and N.  Reports restrict
to a finite window box and summarize out-of-window activity by counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import kernels
from .lattice import Edge, Point
from .quotients import LampGroupSpec
from .walks import Trajectory, WalkConfig, simulate


def window_edges(d: int, radius: int) -> List[Edge]:
    """All edges whose base lies in the centered box, in flat-layout order."""
    side = 2 * radius + 1
    edges = []
    for a in range(d):
        for base in itertools.product(range(-radius, radius + 1), repeat=d):
            edges.append((base, a + 1))
    return edges


@dataclass(frozen=True)
class StableFlowReport:
    """Two-checkpoint surrogate of the limiting flow for one trajectory."""

    d: int
    N: int
    window_radius: int
    checkpoints: Tuple[int, int]
    values_half: np.ndarray  # flat window layout, axis-major
    values_full: np.ndarray
    out_of_window_steps: int

    @property
    def stabilized(self) -> np.ndarray:
        return self.values_half == self.values_full

    def edge_value(self, edge: Edge, final: bool = True) -> int:
        idx = self._flat(edge)
        return int((self.values_full if final else self.values_half)[idx])

    def edge_stabilized(self, edge: Edge) -> bool:
        idx = self._flat(edge)
        return bool(self.values_half[idx] == self.values_full[idx])

    def _flat(self, edge: Edge) -> int:
        base, axis = edge
        r = self.window_radius
        side = 2 * r + 1
        if any(abs(c) > r for c in base):
            raise KeyError(f"edge base {base} outside window radius {r}")
        flat = 0
        for b in range(self.d):
            flat = flat * side + (base[b] + r)
        return (axis - 1) * side**self.d + flat

    def rows(self):
        for i, edge in enumerate(window_edges(self.d, self.window_radius)):
            yield edge, int(self.values_full[i]), bool(
                self.values_half[i] == self.values_full[i]
            )


def limit_flow(traj: Trajectory, N: int, window_radius: int = 5) -> StableFlowReport:
    """Window flows of the trajectory prefix at checkpoints N/2 and N."""
    if N < 2:
        raise ValueError("need N >= 2 for the two-checkpoint surrogate")
    if traj.cfg.variety != "metabelian" and traj.cfg.variety != "abelian":
        raise ValueError("limit flow is defined for lattice walks")
    d = traj.cfg.d
    flows, outside = kernels.window_flow_checkpoints(
        traj.seed, traj.stream, d, window_radius, [N // 2, N]
    )
    # layout from the kernel is axis-major already
    return StableFlowReport(
        d=d,
        N=N,
        window_radius=window_radius,
        checkpoints=(N // 2, N),
        values_half=flows[0],
        values_full=flows[1],
        out_of_window_steps=outside,
    )


@dataclass(frozen=True)
class OriginEdgeStats:
    """Aggregate flow statistics on the 2d origin-incident edges.

    Outward orientation: index 2a is edge (0, axis a+1) taken outward,
    index 2a+1 is edge (-e_{a+1}, axis a+1) reversed, so under the uniform
    measure every outward mean tends to the same positive constant.
    """

    d: int
    seeds: int
    checkpoints: Tuple[int, ...]
    mean_outward: np.ndarray  # (n_checkpoints, 2d)
    se_outward: np.ndarray
    stabilized_fraction: np.ndarray  # per N in the N-list, edge (0, axis 1)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "seeds": self.seeds,
            "checkpoints": list(self.checkpoints),
            "mean_outward": self.mean_outward.tolist(),
            "se_outward": self.se_outward.tolist(),
            "stabilized_fraction_axis1": self.stabilized_fraction.tolist(),
        }


def origin_edge_experiment(
    d: int, Ns: Sequence[int], seeds: int, seed: int
) -> OriginEdgeStats:
    """Flows on origin-incident edges across seeds, with two-checkpoint
    stabilization fractions for each horizon in Ns."""
    Ns = sorted(Ns)
    checkpoints = sorted({n // 2 for n in Ns} | set(Ns))
    out = kernels.origin_flow_checkpoints(seed, d, checkpoints, seeds)
    idx = {n: i for i, n in enumerate(checkpoints)}
    signs = np.array([1 if j % 2 == 0 else -1 for j in range(2 * d)])
    mean = np.empty((len(Ns), 2 * d))
    se = np.empty((len(Ns), 2 * d))
    stab = np.empty(len(Ns))
    for k, n in enumerate(Ns):
        vals = out[:, idx[n], :] * signs  # outward orientation
        mean[k] = vals.mean(axis=0)
        se[k] = vals.std(axis=0, ddof=1) / math.sqrt(seeds)
        stab[k] = float(
            (out[:, idx[n // 2], 0] == out[:, idx[n], 0]).mean()
        )
    return OriginEdgeStats(
        d=d,
        seeds=seeds,
        checkpoints=tuple(Ns),
        mean_outward=mean,
        se_outward=se,
        stabilized_fraction=stab,
    )


@dataclass(frozen=True)
class RecurrenceReport:
    d: int
    seeds: int
    checkpoints: Tuple[int, ...]
    medians: Tuple[float, ...]
    mean_counts: Tuple[float, ...]
    constant_tail_fraction: float  # fraction of seeds with equal last two counts

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "seeds": self.seeds,
            "checkpoints": list(self.checkpoints),
            "medians": list(self.medians),
            "mean_counts": list(self.mean_counts),
            "constant_tail_fraction": self.constant_tail_fraction,
        }


def recurrence_probe(
    d: int, checkpoints: Sequence[int], seeds: int, seed: int
) -> RecurrenceReport:
    """Traversal counts of the edge (0, axis 1) per seed at each checkpoint."""
    checkpoints = sorted(checkpoints)
    counts = kernels.edge_traversal_checkpoints(seed, d, checkpoints, seeds)
    medians = tuple(float(v) for v in np.median(counts, axis=0))
    means = tuple(float(v) for v in counts.mean(axis=0))
    const = float((counts[:, -1] == counts[:, -2]).mean()) if len(checkpoints) > 1 else 1.0
    return RecurrenceReport(
        d=d,
        seeds=seeds,
        checkpoints=tuple(checkpoints),
        medians=medians,
        mean_counts=means,
        constant_tail_fraction=const,
    )


@dataclass(frozen=True)
class FinalConfigReport:
    d: int
    m: int
    seeds: int
    window_radius: int
    Ns: Tuple[int, ...]
    whole_window_fraction: Tuple[float, ...]
    node_mean_fraction: Tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "seeds": self.seeds,
            "window_radius": self.window_radius,
            "Ns": list(self.Ns),
            "whole_window_fraction": list(self.whole_window_fraction),
            "node_mean_fraction": list(self.node_mean_fraction),
        }


def final_config_stability(
    d: int,
    m: int,
    Ns: Sequence[int],
    window_radius: int,
    seeds: int,
    seed: int,
    threads: int = 1,
) -> FinalConfigReport:
    """Lamp configurations in the window compared at N/2 versus N.

    The whole-window fraction is the share of seeds whose entire window
    configuration is unchanged; the node mean averages per-node flags.
    """
    LampGroupSpec(m)  # validate
    Ns = sorted(Ns)
    checkpoints = sorted({n // 2 for n in Ns} | set(Ns))
    idx = {n: i for i, n in enumerate(checkpoints)}

    def one(stream: int):
        configs, _, _ = kernels.lamp_config_checkpoints(
            seed, stream, d, window_radius, checkpoints
        )
        return configs % m if m else configs

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            all_configs = list(pool.map(one, range(seeds)))
    else:
        all_configs = [one(s) for s in range(seeds)]
    whole = np.zeros(len(Ns))
    node = np.zeros(len(Ns))
    for configs in all_configs:  # seed order: independent of thread count
        for k, n in enumerate(Ns):
            same = configs[idx[n // 2]] == configs[idx[n]]
            whole[k] += bool(same.all())
            node[k] += same.mean()
    return FinalConfigReport(
        d=d,
        m=m,
        seeds=seeds,
        window_radius=window_radius,
        Ns=tuple(Ns),
        whole_window_fraction=tuple(float(v) / seeds for v in whole),
        node_mean_fraction=tuple(float(v) / seeds for v in node),
    )


def lamp_config_of_prefix(
    seed: int, stream: int, d: int, m: int, n: int, window_radius: int
):
    """Window lamp configuration of a trajectory prefix, via the kernel."""
    configs, positions, outside = kernels.lamp_config_checkpoints(
        seed, stream, d, window_radius, [n]
    )
    cfg = configs[0] % m if m else configs[0]
    return cfg, tuple(int(v) for v in positions[0]), outside
