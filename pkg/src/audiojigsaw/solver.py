"""Exact minimum-cost open-path search over puzzle pieces.

Reassembling one frame is an open-path traveling-salesman problem on the
directed seam-distance matrix: find the order of all pieces whose summed
consecutive distances is smallest.  Frames are small (usually 8 to 16
pieces), so the problem is solved exactly with best-first branch and
bound.  The upper bound comes from nearest-neighbor chains, the lower
bound from minimum spanning arborescences, which relax a Hamiltonian path
into any spanning out-tree and can therefore never overshoot.

Cost ties between arrangements are broken toward the lexicographically
smallest order, in both the exhaustive oracle and the search, so their
results are directly comparable.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .puzzle import arrangement_cost
from .scrambler import invert_permutation


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one frame solve."""

    order: tuple[int, ...]
    cost: float
    nodes_expanded: int
    oracle_checked: bool = False


def _validated(d) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if d.shape[0] < 2:
        raise ValueError("need at least 2 pieces")
    return d

_ORACLE_CHUNK = 40320


def solve_bruteforce(d, max_pieces: int = 10) -> SolveReport:
    """Enumerate every arrangement; ground truth for validating the search.

    Permutations stream in lexicographic order and ties keep the earliest,
    so equal-cost optima resolve to the lexicographically smallest order.
    Refuses more than ``max_pieces`` pieces (the stream has n! entries).
    """
    d = _validated(d)
    n = d.shape[0]
    if n > max_pieces:
        raise ValueError(f"{n} pieces exceed the exhaustive limit of {max_pieces}")
    best_order = None
    best_cost = np.inf
    examined = 0
    stream = itertools.permutations(range(n))
    while True:
        chunk = np.array(list(itertools.islice(stream, _ORACLE_CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        examined += chunk.shape[0]
        costs = d[chunk[:, :-1], chunk[:, 1:]].sum(axis=1)
        pick = int(np.argmin(costs))
        if costs[pick] < best_cost:
            best_cost = float(costs[pick])
            best_order = tuple(int(v) for v in chunk[pick])
    return SolveReport(best_order, arrangement_cost(d, best_order), examined, oracle_checked=True)


def greedy_upper_bound(d) -> SolveReport:
    """Best nearest-neighbor chain over all starting pieces.

    Not optimal, but never worse than the chain from any single start;
    used to seed the branch-and-bound incumbent.
    """
    d = _validated(d)
    n = d.shape[0]
    best_order = None
    best_cost = np.inf
    for start in range(n):
        order = [start]
        cost = 0.0
        remaining = set(range(n)) - {start}
        while remaining:
            here = order[-1]
            nxt = min(remaining, key=lambda j: (d[here, j], j))
            cost += float(d[here, nxt])
            order.append(nxt)
            remaining.remove(nxt)
        order = tuple(order)
        if cost < best_cost or (cost == best_cost and order < best_order):
            best_cost = cost
            best_order = order
    return SolveReport(best_order, best_cost, n)


def min_arborescence_weight(d, nodes: Iterable[int], root: int) -> float:
    """Weight of the lightest spanning out-tree of ``nodes`` rooted at ``root``.

    Chu-Liu/Edmonds by repeated cycle contraction, weight only (the tree
    itself is never needed).  Any path from the root visiting every node is
    itself a spanning out-tree, so this weight is an admissible bound for
    open-path completion costs.
    """
    d = np.asarray(d, dtype=np.float64)
    nodes = list(nodes)
    if root not in nodes:
        raise ValueError("root must be among the nodes")
    if len(nodes) == 1:
        return 0.0
    sub = d[np.ix_(nodes, nodes)].copy()
    np.fill_diagonal(sub, np.inf)
    return _contract_weight(sub, nodes.index(root))


def _contract_weight(w: np.ndarray, root: int) -> float:
    n = w.shape[0]
    if n == 1:
        return 0.0
    parent = np.argmin(w, axis=0)
    # Locate a cycle in the parent pointers, ignoring the root.
    cycle = None
    seen_global = {root}
    for v in range(n):
        trail = []
        node = v
        while node not in seen_global and node not in trail:
            trail.append(node)
            node = int(parent[node])
        if node in trail:
            cycle = trail[trail.index(node):]
            break
        seen_global.update(trail)
    if cycle is None:
        return float(sum(w[int(parent[v]), v] for v in range(n) if v != root))

    cycle_set = set(cycle)
    cycle_cost = float(sum(w[int(parent[v]), v] for v in cycle))
    rest = [v for v in range(n) if v not in cycle_set]
    m = len(rest) + 1  # contracted node goes last
    w2 = np.full((m, m), np.inf)
    w2[: m - 1, : m - 1] = w[np.ix_(rest, rest)]
    for xi, x in enumerate(rest):
        # Entering the cycle at v displaces the cycle's own arc into v.
        w2[xi, m - 1] = min(w[x, v] - w[int(parent[v]), v] for v in cycle)
        w2[m - 1, xi] = min(w[v, x] for v in cycle)
    return cycle_cost + _contract_weight(w2, rest.index(root))


def solve_bnb(
    d,
    initial: SolveReport | None = None,
    frontier_cap: int = 1_000_000,
    on_expand: Callable[[tuple[int, ...], float, float], None] | None = None,
) -> SolveReport:
    """Exact best-first branch and bound over piece orders.

    Nodes are partial orders; a node's bound is its accumulated cost plus
    the minimum spanning arborescence over its endpoint and the unplaced
    pieces, rooted at the endpoint.  The frontier pops the smallest bound
    first (ties: deeper node, then lexicographically smaller prefix).  The
    root branches over every possible starting piece.

    If the frontier outgrows ``frontier_cap`` entries the search degrades
    to depth-first under the same bound, which trades order of exploration
    for memory and cannot affect the returned optimum.

    ``on_expand`` (mainly for tests) sees (prefix, cost_so_far, bound) for
    every expanded internal node.
    """
    d = _validated(d)
    n = d.shape[0]
    incumbent = initial if initial is not None else greedy_upper_bound(d)
    inc_order = tuple(incumbent.order)
    inc_cost = float(incumbent.cost)

    all_mask = (1 << n) - 1
    bound_cache: dict[tuple[int, int], float] = {}

    def lower_bound(endpoint: int, unplaced_mask: int) -> float:
        key = (endpoint, unplaced_mask)
        cached = bound_cache.get(key)
        if cached is None:
            nodes = [endpoint] + [j for j in range(n) if unplaced_mask >> j & 1]
            cached = min_arborescence_weight(d, nodes, endpoint)
            bound_cache[key] = cached
        return cached

    # Heap entries: (bound, -depth, prefix, cost_so_far, unplaced_mask).
    frontier: list[tuple[float, int, tuple[int, ...], float, int]] = []
    expanded = 1  # the virtual root
    for start in range(n):
        mask = all_mask & ~(1 << start)
        bound = lower_bound(start, mask)
        if bound <= inc_cost:
            heapq.heappush(frontier, (bound, -1, (start,), 0.0, mask))

    best_first = True
    while frontier:
        if best_first and len(frontier) > frontier_cap:
            # Memory guard: continue depth-first, best bounds on top.
            frontier.sort(key=lambda e: (e[0], e[1], e[2]), reverse=True)
            best_first = False
        if best_first:
            bound, neg_depth, prefix, cost, mask = heapq.heappop(frontier)
            if bound > inc_cost:
                break  # heap order: nothing better remains
        else:
            bound, neg_depth, prefix, cost, mask = frontier.pop()
            if bound > inc_cost:
                continue
        expanded += 1
        if on_expand is not None:
            on_expand(prefix, cost, bound)
        here = prefix[-1]
        depth = -neg_depth
        for j in range(n):
            if not mask >> j & 1:
                continue
            child_cost = cost + float(d[here, j])
            child_prefix = prefix + (j,)
            if depth + 1 == n:
                if child_cost < inc_cost or (child_cost == inc_cost and child_prefix < inc_order):
                    inc_cost = child_cost
                    inc_order = child_prefix
                continue
            child_mask = mask & ~(1 << j)
            child_bound = child_cost + lower_bound(j, child_mask)
            if child_bound > inc_cost:
                continue
            entry = (child_bound, -(depth + 1), child_prefix, child_cost, child_mask)
            if best_first:
                heapq.heappush(frontier, entry)
            else:
                frontier.append(entry)

    return SolveReport(inc_order, inc_cost, expanded)


def recover_key(arrangement: Sequence[int]) -> tuple[int, ...]:
    """Permutation key whose descramble reorders cipher segments into ``arrangement``.

    Descrambling sends input segment i to output slot key[i]; asking slot j
    to hold cipher segment arrangement[j] makes the key the inverse
    permutation of the arrangement.
    """
    n = len(arrangement)
    if sorted(arrangement) != list(range(n)):
        raise ValueError("arrangement must be a permutation")
    return invert_permutation(arrangement)
