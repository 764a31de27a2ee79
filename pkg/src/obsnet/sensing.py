"""Measurement selection: reduce sensing costs to an assignment problem.

Parent components are disjoint, so choosing which sensor covers which parent
component is a square assignment problem once each (sensor, component) pair
is priced at the cheapest state inside the component. The assignment is
solved exactly with a shortest-augmenting-path Hungarian method that skips
forbidden entries natively and certifies infeasibility with a Hall-condition
violator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import GuardError, InfeasibleError, ShapeError
from .graphs import ProblemInstance, StructuredMatrix
from .structural import SccPartition

__all__ = [
    "ParentCostMatrix",
    "SensorAssignment",
    "build_parent_cost_matrix",
    "hungarian_solve",
    "brute_force_assignment",
    "recover_measurement_structure",
]

BRUTE_FORCE_MAX_SENSORS = 10


@dataclass(frozen=True)
class ParentCostMatrix:
    """Sensor x parent-component costs, with the state achieving each minimum.

    ``cost`` is an m x m float array; ``np.inf`` marks a forbidden pair
    (the sensor may measure no state of that component). ``argmin_state[i, p]``
    is the state index attaining ``cost[i, p]``, or -1 where forbidden. Ties
    inside a component break toward the lowest state index.
    """

    size: int
    cost: np.ndarray
    argmin_state: np.ndarray
    parent_components: tuple[tuple[int, ...], ...]

    def is_forbidden(self, sensor: int, parent: int) -> bool:
        return not np.isfinite(self.cost[sensor, parent])


@dataclass(frozen=True)
class SensorAssignment:
    """A sensor -> parent-component bijection with its measured states.

    ``assignment[i]`` is the parent component covered by sensor i,
    ``measured_state[i]`` the state it measures, and ``total_cost`` the sum
    of the chosen sensing costs, accumulated in sensor order.
    """

    assignment: tuple[int, ...]
    measured_state: tuple[int, ...]
    total_cost: float


def build_parent_cost_matrix(
    instance: ProblemInstance, partition: SccPartition
) -> ParentCostMatrix:
    """Price every (sensor, parent component) pair at its cheapest state.

    Requires as many sensors as parent components; with fewer parents some
    sensor would sit idle, with more the system cannot be covered, so both
    are rejected rather than padded.
    """
    parents = tuple(tuple(c) for c in partition.parent_components())
    m = instance.m
    if len(parents) != m:
        raise InfeasibleError(
            f"instance has {len(parents)} parent components but {m} sensors;"
            f" the assignment reduction needs them equal"
        )
    cost = np.full((m, m), np.inf)
    argmin_state = np.full((m, m), -1, dtype=np.int64)
    for i in range(m):
        for p, comp in enumerate(parents):
            for state in comp:  # components are sorted, so ties pick the lowest state
                c = instance.sensing_cost.get((i, state))
                if c is not None and c < cost[i, p]:
                    cost[i, p] = c
                    argmin_state[i, p] = state
    return ParentCostMatrix(
        size=m, cost=cost, argmin_state=argmin_state, parent_components=parents
    )


def _total_cost(cost: np.ndarray, perm: tuple[int, ...] | list[int] | np.ndarray) -> float:
    # Plain left-to-right accumulation so every solver reports bit-identical
    # totals for the same selected entries.
    return float(sum(float(cost[i, j]) for i, j in enumerate(perm)))


def _hall_violator(cost: np.ndarray, rows: list[int]) -> tuple[list[int], list[int]]:
    """Certificate of infeasibility from a failed augmenting search.

    When the search tree for one row dies, every finite entry of every row in
    the tree sits in an already-scanned column, and the tree holds one more
    row than scanned columns. The tree rows therefore violate Hall's
    condition; return them with their combined feasible columns.
    """
    rows = sorted(set(rows))
    cols = sorted({int(j) for i in rows for j in np.flatnonzero(np.isfinite(cost[i]))})
    return rows, cols


def solve_lsap(cost: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect assignment on a square matrix with inf = forbidden.

    Shortest augmenting path formulation with dual potentials, one
    augmentation per row, O(m^3) overall. Returns (column per row, total).
    Raises InfeasibleError carrying a sensor set that violates Hall's
    condition when no complete assignment exists.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ShapeError(f"assignment needs a square matrix, got {cost.shape}")
    if np.isnan(cost).any() or (cost[np.isfinite(cost)] < 0).any():
        raise ShapeError("assignment costs must be nonnegative (inf = forbidden)")
    m = cost.shape[0]
    INF = np.inf
    u = np.zeros(m + 1)
    v = np.zeros(m + 1)
    row_of_col = np.full(m + 1, -1, dtype=np.int64)  # index m is the virtual start column
    for i in range(m):
        row_of_col[m] = i
        j0 = m
        minv = np.full(m, INF)
        way = np.full(m, m, dtype=np.int64)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = ~used[:m]
            cur = cost[i0, :m] - u[i0] - v[:m]
            better = free & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            if not free.any():
                delta = INF
            else:
                masked = np.where(free, minv, INF)
                j1 = int(np.argmin(masked))
                delta = masked[j1]
            if not np.isfinite(delta):
                tree_rows = sorted({int(row_of_col[j]) for j in range(m + 1) if used[j]})
                rows, cols = _hall_violator(cost, tree_rows)
                raise InfeasibleError(
                    f"no feasible assignment: sensors {[r + 1 for r in rows]} can"
                    f" only cover parent components {[c + 1 for c in cols]}"
                    f" ({len(rows)} sensors, {len(cols)} components)"
                )
            u[row_of_col[used]] += delta
            v[np.flatnonzero(used[:m])] -= delta
            minv[free] -= delta
            j0 = j1
            if row_of_col[j0] == -1:
                break
        while j0 != m:  # walk the alternating path back, flipping matches
            j1 = int(way[j0])
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.empty(m, dtype=np.int64)
    col_of_row[row_of_col[:m]] = np.arange(m)
    return col_of_row, _total_cost(cost, col_of_row)


def hungarian_solve(matrix: ParentCostMatrix) -> SensorAssignment:
    """Exact minimum-cost sensor-to-parent-component assignment."""
    perm, total = solve_lsap(matrix.cost)
    measured = tuple(int(matrix.argmin_state[i, perm[i]]) for i in range(matrix.size))
    return SensorAssignment(
        assignment=tuple(int(p) for p in perm),
        measured_state=measured,
        total_cost=total,
    )


def brute_force_assignment(matrix: ParentCostMatrix) -> SensorAssignment:
    """Oracle: enumerate all permutations; lexicographically first optimum wins."""
    m = matrix.size
    if m > BRUTE_FORCE_MAX_SENSORS:
        raise GuardError(
            f"brute-force assignment guard: m={m} exceeds {BRUTE_FORCE_MAX_SENSORS}"
        )
    cost = matrix.cost
    rows = np.arange(m)
    best_cost = np.inf
    best_perm: tuple[int, ...] | None = None
    perms = itertools.permutations(range(m))
    while True:
        chunk = list(itertools.islice(perms, 100_000))
        if not chunk:
            break
        arr = np.array(chunk, dtype=np.int64)
        totals = cost[rows, arr].sum(axis=1)
        k = int(np.argmin(totals))
        if totals[k] < best_cost:  # strict: ties keep the earlier (lex smaller) permutation
            best_cost = float(totals[k])
            best_perm = tuple(int(x) for x in arr[k])
    if best_perm is None or not np.isfinite(best_cost):
        raise InfeasibleError("no feasible assignment avoids the forbidden entries")
    measured = tuple(int(matrix.argmin_state[i, best_perm[i]]) for i in range(m))
    return SensorAssignment(
        assignment=best_perm,
        measured_state=measured,
        total_cost=_total_cost(cost, best_perm),
    )


def recover_measurement_structure(assignment: SensorAssignment, n: int) -> StructuredMatrix:
    """Measurement pattern with one nonzero per sensor at its chosen state."""
    m = len(assignment.assignment)
    nonzeros = {(i, assignment.measured_state[i]) for i in range(m)}
    states = [j for (_, j) in nonzeros]
    if len(set(states)) != m:
        raise InfeasibleError("assignment measures one state twice")
    return StructuredMatrix(m, n, frozenset(nonzeros))
