"""Hot loops for trajectory statistics, JIT-compiled when numba is present.

Every kernel regenerates its letters from (seed, stream) with the same
splitmix64 counter scheme as edgeflow.rng, so the numba, numpy and scalar
paths produce bit-identical streams; the numpy implementations double as
fallbacks and as cross-checks in the test suite.  Letter code 2k steps
+e_{k+1}, code 2k+1 steps -e_{k+1}; in lamplighter alphabets the last two
codes toggle the lamp at the current node instead of moving.
"""

from __future__ import annotations

import numpy as np

from .rng import GOLDEN, letter_codes, seed_base, stream_key

_U64 = np.uint64
_GOLD = _U64(GOLDEN)
_M1 = _U64(0xBF58476D1CE4E5B9)
_M2 = _U64(0x94D049BB133111EB)
_S30, _S27, _S31 = _U64(30), _U64(27), _U64(31)
_ONE64 = _U64(1)

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def _origin_flows_one(key, d, n_letters, checkpoints, out):
    """Signed flows on the 2d origin-incident edges at each checkpoint.

    Edge index 2a is (0, axis a+1); edge index 2a+1 is (-e_{a+1}, axis a+1).
    """
    x = np.zeros(d, np.int64)
    flows = np.zeros(2 * d, np.int64)
    sumabs = 0
    k = 0
    n_steps = checkpoints[-1]
    for i in range(n_steps):
        r = _mix(key + (_U64(i) + _ONE64) * _GOLD)
        code = int(r % n_letters)
        a = code >> 1
        if code & 1 == 0:
            # stepping +e_a traverses edge (x, a) forward
            if sumabs == 0:
                flows[2 * a] += 1
            elif sumabs == 1 and x[a] == -1:
                flows[2 * a + 1] += 1
            sumabs += 1 if x[a] >= 0 else -1
            x[a] += 1
        else:
            # stepping -e_a traverses edge (x - e_a, a) backward
            if sumabs == 1 and x[a] == 1:
                flows[2 * a] -= 1
            elif sumabs == 0:
                flows[2 * a + 1] -= 1
            sumabs += 1 if x[a] <= 0 else -1
            x[a] -= 1
        if i + 1 == checkpoints[k]:
            for j in range(2 * d):
                out[k, j] = flows[j]
            k += 1
    return out


@njit(cache=True, nogil=True)
def _origin_flows_batch(base, stream0, n_seeds, d, n_letters, checkpoints, out):
    for s in range(n_seeds):
        key = _mix(base + _U64(stream0 + s) * _GOLD)
        _origin_flows_one(key, d, n_letters, checkpoints, out[s])


@njit(cache=True, nogil=True)
def _edge_traversals_batch(base, stream0, n_seeds, d, n_letters, checkpoints, out):
    """Undirected traversal counts of edge (0, axis 1) at each checkpoint."""
    n_steps = checkpoints[-1]
    for s in range(n_seeds):
        key = _mix(base + _U64(stream0 + s) * _GOLD)
        x = np.zeros(d, np.int64)
        sumabs = 0
        count = 0
        k = 0
        for i in range(n_steps):
            r = _mix(key + (_U64(i) + _ONE64) * _GOLD)
            code = int(r % n_letters)
            a = code >> 1
            if code & 1 == 0:
                if a == 0 and sumabs == 0:
                    count += 1
                sumabs += 1 if x[a] >= 0 else -1
                x[a] += 1
            else:
                if a == 0 and sumabs == 1 and x[0] == 1:
                    count += 1
                sumabs += 1 if x[a] <= 0 else -1
                x[a] -= 1
            if i + 1 == checkpoints[k]:
                out[s, k] = count
                k += 1


@njit(cache=True, nogil=True)
def _visit_box_batch(base, stream0, n_walks, d, n_letters, n_steps, radius, class_of, n_classes, sums, sumsq):
    """Per-walk visit counts to symmetry classes of points in the centered box."""
    side = 2 * radius + 1
    x = np.zeros(d, np.int64)
    tmp = np.zeros(n_classes, np.int64)
    for w in range(n_walks):
        key = _mix(base + _U64(stream0 + w) * _GOLD)
        for a in range(d):
            x[a] = 0
        for c in range(n_classes):
            tmp[c] = 0
        # the start point counts as a visit at time 0
        flat0 = 0
        for a in range(d):
            flat0 = flat0 * side + radius
        c0 = class_of[flat0]
        if c0 >= 0:
            tmp[c0] += 1
        for i in range(n_steps):
            r = _mix(key + (_U64(i) + _ONE64) * _GOLD)
            code = int(r % n_letters)
            a = code >> 1
            if code & 1 == 0:
                x[a] += 1
            else:
                x[a] -= 1
            inside = True
            flat = 0
            for b in range(d):
                v = x[b]
                if v < -radius or v > radius:
                    inside = False
                    break
                flat = flat * side + (v + radius)
            if inside:
                c = class_of[flat]
                if c >= 0:
                    tmp[c] += 1
        for c in range(n_classes):
            sums[c] += tmp[c]
            sumsq[c] += tmp[c] * tmp[c]


@njit(cache=True, nogil=True)
def _lamp_config_one(key, d, n_letters, radius, checkpoints, configs, positions):
    """Lamp increments (unreduced) inside the window at each checkpoint."""
    side = 2 * radius + 1
    x = np.zeros(d, np.int64)
    n_cells = configs.shape[1]
    lamps = np.zeros(n_cells, np.int64)
    touched_outside = 0
    k = 0
    n_steps = checkpoints[-1]
    for i in range(n_steps):
        r = _mix(key + (_U64(i) + _ONE64) * _GOLD)
        code = int(r % n_letters)
        a = code >> 1
        if a < d:
            if code & 1 == 0:
                x[a] += 1
            else:
                x[a] -= 1
        else:
            inside = True
            flat = 0
            for b in range(d):
                v = x[b]
                if v < -radius or v > radius:
                    inside = False
                    break
                flat = flat * side + (v + radius)
            if inside:
                lamps[flat] += 1 if code & 1 == 0 else -1
            else:
                touched_outside += 1
        if i + 1 == checkpoints[k]:
            for j in range(n_cells):
                configs[k, j] = lamps[j]
            for b in range(d):
                positions[k, b] = x[b]
            k += 1
    return touched_outside


@njit(cache=True, nogil=True)
def _window_flow_one(key, d, n_letters, radius, checkpoints, flows):
    """Signed flows on all window edges (base in the box) at each checkpoint.

    flows has shape (n_checkpoints, d * side**d), flat index = axis * side**d
    + mixed-radix(base + radius).
    """
    side = 2 * radius + 1
    cells = side**d
    x = np.zeros(d, np.int64)
    acc = np.zeros(d * cells, np.int64)
    out_of_window = 0
    k = 0
    n_steps = checkpoints[-1]
    for i in range(n_steps):
        r = _mix(key + (_U64(i) + _ONE64) * _GOLD)
        code = int(r % n_letters)
        a = code >> 1
        forward = code & 1 == 0
        if not forward:
            x[a] -= 1
        # base of the traversed edge is the current x for forward steps,
        # or the already-decremented x for backward steps
        inside = True
        flat = 0
        for b in range(d):
            v = x[b]
            if v < -radius or v > radius:
                inside = False
                break
            flat = flat * side + (v + radius)
        if inside:
            acc[a * cells + flat] += 1 if forward else -1
        else:
            out_of_window += 1
        if forward:
            x[a] += 1
        if i + 1 == checkpoints[k]:
            for j in range(d * cells):
                flows[k, j] = acc[j]
            k += 1
    return out_of_window


# -- numpy reference implementations ------------------------------------------


def origin_flows_numpy(seed, stream, d, checkpoints):
    """Reference implementation of _origin_flows_one via vectorized numpy."""
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    n = int(checkpoints[-1])
    codes = letter_codes(seed, stream, 0, n, 2 * d)
    axes = codes >> 1
    signs = np.where(codes & 1 == 0, 1, -1)
    deltas = np.zeros((n, d), np.int64)
    deltas[np.arange(n), axes] = signs
    pos_before = np.vstack([np.zeros(d, np.int64), np.cumsum(deltas, axis=0)[:-1]])
    out = np.zeros((len(checkpoints), 2 * d), np.int64)
    at_zero = (pos_before == 0).all(axis=1)
    for a in range(d):
        e_a = np.zeros(d, np.int64)
        e_a[a] = 1
        at_ea = (pos_before == e_a).all(axis=1)
        at_minus = (pos_before == -e_a).all(axis=1)
        plus_edge0 = (axes == a) & (signs == 1) & at_zero
        minus_edge0 = (axes == a) & (signs == -1) & at_ea
        plus_edge1 = (axes == a) & (signs == 1) & at_minus
        minus_edge1 = (axes == a) & (signs == -1) & at_zero
        series0 = np.cumsum(plus_edge0.astype(np.int64) - minus_edge0.astype(np.int64))
        series1 = np.cumsum(plus_edge1.astype(np.int64) - minus_edge1.astype(np.int64))
        out[:, 2 * a] = series0[checkpoints - 1]
        out[:, 2 * a + 1] = series1[checkpoints - 1]
    return out


def origin_flow_checkpoints(seed, d, checkpoints, n_seeds, stream0=0):
    """Batch origin-incident edge flows; (n_seeds, n_checkpoints, 2d)."""
    checkpoints = np.asarray(sorted(checkpoints), dtype=np.int64)
    out = np.zeros((n_seeds, len(checkpoints), 2 * d), np.int64)
    if HAVE_NUMBA:
        _origin_flows_batch(
            _U64(seed_base(seed)), int(stream0), int(n_seeds), int(d),
            _U64(2 * d), checkpoints, out,
        )
    else:  # pragma: no cover
        for s in range(n_seeds):
            out[s] = origin_flows_numpy(seed, stream0 + s, d, checkpoints)
    return out


def edge_traversal_checkpoints(seed, d, checkpoints, n_seeds, stream0=0):
    """Undirected traversal counts of edge (0, axis 1); (n_seeds, n_checkpoints)."""
    checkpoints = np.asarray(sorted(checkpoints), dtype=np.int64)
    out = np.zeros((n_seeds, len(checkpoints)), np.int64)
    if HAVE_NUMBA:
        _edge_traversals_batch(
            _U64(seed_base(seed)), int(stream0), int(n_seeds), int(d),
            _U64(2 * d), checkpoints, out,
        )
    else:  # pragma: no cover
        for s in range(n_seeds):
            out[s] = edge_traversals_numpy(seed, stream0 + s, d, checkpoints)
    return out


def edge_traversals_numpy(seed, stream, d, checkpoints):
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    n = int(checkpoints[-1])
    codes = letter_codes(seed, stream, 0, n, 2 * d)
    axes = codes >> 1
    signs = np.where(codes & 1 == 0, 1, -1)
    deltas = np.zeros((n, d), np.int64)
    deltas[np.arange(n), axes] = signs
    pos_before = np.vstack([np.zeros(d, np.int64), np.cumsum(deltas, axis=0)[:-1]])
    at_zero = (pos_before == 0).all(axis=1)
    e1 = np.zeros(d, np.int64)
    e1[0] = 1
    at_e1 = (pos_before == e1).all(axis=1)
    events = ((axes == 0) & (signs == 1) & at_zero) | ((axes == 0) & (signs == -1) & at_e1)
    series = np.cumsum(events.astype(np.int64))
    return series[checkpoints - 1]


def visit_class_counts(seed, d, n_steps, n_walks, radius, class_of, n_classes, stream0=0):
    """Sum and sum-of-squares of per-walk visit counts per symmetry class."""
    sums = np.zeros(n_classes, np.int64)
    sumsq = np.zeros(n_classes, np.int64)
    if HAVE_NUMBA:
        _visit_box_batch(
            _U64(seed_base(seed)), int(stream0), int(n_walks), int(d),
            _U64(2 * d), int(n_steps), int(radius), class_of, int(n_classes),
            sums, sumsq,
        )
    else:  # pragma: no cover
        side = 2 * radius + 1
        for w in range(n_walks):
            codes = letter_codes(seed, stream0 + w, 0, n_steps, 2 * d)
            axes = codes >> 1
            signs = np.where(codes & 1 == 0, 1, -1)
            deltas = np.zeros((n_steps, d), np.int64)
            deltas[np.arange(n_steps), axes] = signs
            pos = np.vstack([np.zeros(d, np.int64), np.cumsum(deltas, axis=0)])
            inside = (np.abs(pos) <= radius).all(axis=1)
            flat = np.zeros(len(pos), np.int64)
            for b in range(d):
                flat = flat * side + (pos[:, b] + radius)
            tmp = np.zeros(n_classes, np.int64)
            classes = class_of[flat[inside]]
            for c in classes:
                if c >= 0:
                    tmp[c] += 1
            sums += tmp
            sumsq += tmp * tmp
    return sums, sumsq


def lamp_config_checkpoints(seed, stream, d, radius, checkpoints):
    """Raw (unreduced) lamp increments in the window at each checkpoint,
    plus walker positions; alphabet is the 2(d+1)-letter lamplighter one."""
    checkpoints = np.asarray(sorted(checkpoints), dtype=np.int64)
    side = 2 * radius + 1
    configs = np.zeros((len(checkpoints), side**d), np.int64)
    positions = np.zeros((len(checkpoints), d), np.int64)
    key = _U64(stream_key(seed, stream))
    if HAVE_NUMBA:
        outside = _lamp_config_one(
            key, int(d), _U64(2 * (d + 1)), int(radius), checkpoints, configs, positions
        )
    else:  # pragma: no cover
        outside = _lamp_config_numpy(seed, stream, d, radius, checkpoints, configs, positions)
    return configs, positions, int(outside)


def _lamp_config_numpy(seed, stream, d, radius, checkpoints, configs, positions):
    n = int(checkpoints[-1])
    side = 2 * radius + 1
    codes = letter_codes(seed, stream, 0, n, 2 * (d + 1))
    axes = codes >> 1
    signs = np.where(codes & 1 == 0, 1, -1)
    move = axes < d
    deltas = np.zeros((n, d), np.int64)
    deltas[np.arange(n)[move], axes[move]] = signs[move]
    pos = np.vstack([np.zeros(d, np.int64), np.cumsum(deltas, axis=0)])
    outside = 0
    lamps = np.zeros(side**d, np.int64)
    k = 0
    for i in range(n):
        if not move[i]:
            p = pos[i]
            if (np.abs(p) <= radius).all():
                flat = 0
                for b in range(d):
                    flat = flat * side + (p[b] + radius)
                lamps[flat] += signs[i]
            else:
                outside += 1
        if i + 1 == checkpoints[k]:
            configs[k] = lamps
            positions[k] = pos[i + 1]
            k += 1
    return outside


def window_flow_checkpoints(seed, stream, d, radius, checkpoints):
    """Flows on all edges based in the window, at each checkpoint.

    Returns (flows[nk, d*side^d], out_of_window_steps); flat layout is
    axis-major then mixed radix over base + radius.
    """
    checkpoints = np.asarray(sorted(checkpoints), dtype=np.int64)
    side = 2 * radius + 1
    flows = np.zeros((len(checkpoints), d * side**d), np.int64)
    key = _U64(stream_key(seed, stream))
    if HAVE_NUMBA:
        outside = _window_flow_one(
            key, int(d), _U64(2 * d), int(radius), checkpoints, flows
        )
    else:  # pragma: no cover
        outside = _window_flow_numpy(seed, stream, d, radius, checkpoints, flows)
    return flows, int(outside)


def _window_flow_numpy(seed, stream, d, radius, checkpoints, flows):
    n = int(checkpoints[-1])
    side = 2 * radius + 1
    cells = side**d
    codes = letter_codes(seed, stream, 0, n, 2 * d)
    axes = codes >> 1
    signs = np.where(codes & 1 == 0, 1, -1)
    deltas = np.zeros((n, d), np.int64)
    deltas[np.arange(n), axes] = signs
    pos = np.vstack([np.zeros(d, np.int64), np.cumsum(deltas, axis=0)])
    base = np.where(signs[:, None] == 1, pos[:-1], pos[1:])
    inside = (np.abs(base) <= radius).all(axis=1)
    flat = np.zeros(n, np.int64)
    for b in range(d):
        flat = flat * side + (base[:, b] + radius)
    idx = axes * cells + flat
    acc = np.zeros(d * cells, np.int64)
    outside = 0
    k = 0
    for i in range(n):
        if inside[i]:
            acc[idx[i]] += signs[i]
        else:
            outside += 1
        if i + 1 == checkpoints[k]:
            flows[k] = acc
            k += 1
    return outside
