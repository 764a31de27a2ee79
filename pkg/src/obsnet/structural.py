"""Strongly connected components and structural observability tests.

A state digraph decomposes into strongly connected components; the
components with no outgoing edges in the condensation are the sinks, called
parent components here. For a structurally full-rank system pattern,
structural observability holds exactly when every parent component contains
at least one measured state, and the distributed variant additionally needs
one sensor per parent component with a strongly connected sensor network.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ScopeError, ShapeError, ValidationError
from .graphs import Digraph, ProblemInstance, StructuredMatrix, digraph_from_pattern

__all__ = [
    "SccPartition",
    "scc_decompose",
    "is_strongly_connected",
    "max_bipartite_matching",
    "is_structurally_full_rank",
    "check_structural_observability",
    "check_distributed_observability_structural",
]

PARENT = "parent"
CHILD = "child"


@dataclass(frozen=True)
class SccPartition:
    """Disjoint strongly connected components plus their condensation.

    Components are sorted by smallest member node. ``kinds[k]`` is
    ``"parent"`` when component k has no outgoing condensation edge,
    ``"child"`` otherwise. ``condensation`` holds edges between component
    indices and is acyclic by construction.
    """

    components: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]
    condensation: frozenset[tuple[int, int]]
    component_of: tuple[int, ...]

    def parent_components(self) -> list[tuple[int, ...]]:
        return [c for c, kind in zip(self.components, self.kinds) if kind == PARENT]

    def parent_indices(self) -> list[int]:
        return [k for k, kind in enumerate(self.kinds) if kind == PARENT]

    def to_json_dict(self) -> dict:
        return {
            "components": [
                {"nodes": [v + 1 for v in comp], "kind": kind}
                for comp, kind in zip(self.components, self.kinds)
            ],
            "num_parents": sum(1 for kind in self.kinds if kind == PARENT),
        }


def _tarjan_components(g: Digraph) -> list[list[int]]:
    """Tarjan's SCC algorithm with an explicit stack (no recursion limit)."""
    n = g.node_count
    adj = g.successors()
    UNVISITED = -1
    index = [UNVISITED] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    next_index = 0
    components: list[list[int]] = []

    for start in range(n):
        if index[start] != UNVISITED:
            continue
        # Each work item is (node, iterator position into adj[node]).
        work = [(start, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = lowlink[v] = next_index
                next_index += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pos, len(adj[v])):
                w = adj[v][k]
                if index[w] == UNVISITED:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def scc_decompose(g: Digraph) -> SccPartition:
    """Partition a digraph into SCCs and label each one parent or child.

    A component is a parent exactly when it has no edge leaving it in the
    condensation, i.e. it is a sink of the component DAG.
    """
    raw = _tarjan_components(g)
    components = tuple(tuple(sorted(c)) for c in sorted(raw, key=min))
    component_of = [0] * g.node_count
    for k, comp in enumerate(components):
        for v in comp:
            component_of[v] = k
    condensation = set()
    for (u, v) in g.edges:
        cu, cv = component_of[u], component_of[v]
        if cu != cv:
            condensation.add((cu, cv))
    has_out = {cu for (cu, _) in condensation}
    kinds = tuple(CHILD if k in has_out else PARENT for k in range(len(components)))
    return SccPartition(
        components=components,
        kinds=kinds,
        condensation=frozenset(condensation),
        component_of=tuple(component_of),
    )


def is_strongly_connected(g: Digraph) -> bool:
    """True iff every node reaches every other node (exactly one SCC)."""
    n = g.node_count
    if n <= 1:
        return True
    for graph in (g, g.reversed()):
        adj = graph.successors()
        seen = [False] * n
        seen[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        if not all(seen):
            return False
    return True


def max_bipartite_matching(adjacency: list[list[int]], n_right: int) -> dict[int, int]:
    """Hopcroft-Karp maximum matching; returns {left: right} pairs.

    ``adjacency[u]`` lists the right-side vertices reachable from left
    vertex u.
    """
    n_left = len(adjacency)
    INF = float("inf")
    match_left: list[int] = [-1] * n_left
    match_right: list[int] = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_left[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = INF
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adjacency[u]:
                w = match_right[v]
                if w == -1:
                    found = dist[u] + 1
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found != INF

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_right[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(n_left):
            if match_left[u] == -1:
                dfs(u)
    return {u: match_left[u] for u in range(n_left) if match_left[u] != -1}


def is_structurally_full_rank(pattern: StructuredMatrix) -> bool:
    """True iff the pattern admits a permutation of all-nonzero entries.

    Equivalent to the state digraph having a family of disjoint cycles that
    covers every node. Tested as a perfect matching between rows and columns
    on the bipartite graph of nonzero positions.
    """
    if not pattern.is_square:
        raise ShapeError(
            f"structural rank test needs a square pattern,"
            f" got {pattern.rows}x{pattern.cols}"
        )
    n = pattern.rows
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for (i, j) in sorted(pattern.nonzeros):
        adjacency[i].append(j)
    matching = max_bipartite_matching(adjacency, n)
    return len(matching) == n


def check_structural_observability(
    a_pattern: StructuredMatrix, h_pattern: StructuredMatrix
) -> bool:
    """Structural observability test for structurally full-rank systems.

    True iff every parent component of the state digraph contains at least
    one measured state (a state whose column in the measurement pattern has
    a nonzero). Rejects patterns that are not structurally full rank, where
    this criterion is no longer equivalent to observability.
    """
    if not is_structurally_full_rank(a_pattern):
        raise ScopeError(
            "system pattern is not structurally full rank; the parent-component"
            " test applies to structurally full-rank systems only"
        )
    if h_pattern.cols != a_pattern.cols:
        raise ShapeError(
            f"measurement pattern has {h_pattern.cols} columns,"
            f" expected {a_pattern.cols}"
        )
    measured = {j for (_, j) in h_pattern.nonzeros}
    partition = scc_decompose(digraph_from_pattern(a_pattern))
    return all(
        any(v in measured for v in comp) for comp in partition.parent_components()
    )


def check_distributed_observability_structural(
    instance: ProblemInstance,
    h_pattern: StructuredMatrix,
    w_pattern: StructuredMatrix,
) -> bool:
    """Structural gate for a complete design.

    Requires the chosen links to come from the candidate network, every
    sensor to take exactly one measurement, the sensor-to-parent-component
    map to be a bijection, and the chosen link digraph to be strongly
    connected. Diagonal entries of the link pattern are not allowed; each
    sensor always has access to its own prediction.
    """
    if w_pattern.rows != instance.m or w_pattern.cols != instance.m:
        raise ShapeError(
            f"network pattern is {w_pattern.rows}x{w_pattern.cols},"
            f" expected {instance.m}x{instance.m}"
        )
    for (i, j) in w_pattern.nonzeros:
        if (i, j) not in instance.network.arcs:
            raise ValidationError(
                f"design uses link {i + 1} -> {j + 1} which is not in the"
                f" candidate network"
            )
    if not check_structural_observability(instance.system_pattern, h_pattern):
        return False
    rows: dict[int, int] = {}
    for (i, j) in h_pattern.nonzeros:
        if i in rows:
            return False  # a sensor with two measurements
        rows[i] = j
    if len(rows) != instance.m:
        return False  # an idle sensor
    partition = scc_decompose(digraph_from_pattern(instance.system_pattern))
    parents = partition.parent_indices()
    if len(parents) != instance.m:
        return False
    covered = set()
    for i in range(instance.m):
        comp = partition.component_of[rows[i]]
        if partition.kinds[comp] != PARENT or comp in covered:
            return False
        covered.add(comp)
    return is_strongly_connected(Digraph(instance.m, frozenset(w_pattern.nonzeros)))
