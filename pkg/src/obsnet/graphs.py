"""Structured matrices, digraphs and the problem instance data model.

Everything here is a plain immutable value: a sparsity pattern is a set of
(row, col) pairs, a digraph is a set of arcs, and a problem instance bundles
the system pattern with sensing costs and a candidate communication network.
Node and matrix indices are 0-based in memory; the JSON documents use
1-based indices, and the converters in this module are the only place the
two conventions meet.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ShapeError, ValidationError

__all__ = [
    "StructuredMatrix",
    "Digraph",
    "WeightedDigraph",
    "ProblemInstance",
    "DesignResult",
    "digraph_from_pattern",
    "parse_instance",
    "serialize_instance",
    "parse_design",
    "serialize_design",
    "export_dot",
    "export_instance_dot",
]


@dataclass(frozen=True)
class StructuredMatrix:
    """A 0/1 sparsity pattern: which entries of a matrix may be nonzero.

    Attributes:
        rows: number of rows.
        cols: number of columns.
        nonzeros: frozenset of (row, col) pairs, 0-based.
    """

    rows: int
    cols: int
    nonzeros: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f"negative dimensions {self.rows}x{self.cols}")
        object.__setattr__(self, "nonzeros", frozenset(self.nonzeros))
        for (i, j) in self.nonzeros:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValidationError(
                    f"nonzero ({i}, {j}) out of range for {self.rows}x{self.cols} pattern"
                )

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row_nonzeros(self, i: int) -> list[int]:
        """Column indices of row i's nonzeros, sorted."""
        return sorted(j for (r, j) in self.nonzeros if r == i)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.nonzeros)


@dataclass(frozen=True)
class Digraph:
    """Directed graph on nodes 0..node_count-1 with a set of arcs."""

    node_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        for (u, v) in self.edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValidationError(f"edge ({u}, {v}) out of range")

    def successors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for (u, v) in sorted(self.edges):
            adj[u].append(v)
        return adj

    def reversed(self) -> "Digraph":
        return Digraph(self.node_count, frozenset((v, u) for (u, v) in self.edges))


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph with a nonnegative cost per arc; absent arcs are forbidden."""

    node_count: int
    arcs: Mapping[tuple[int, int], float]

    def __post_init__(self):
        arcs = dict(self.arcs)
        for (u, v), cost in arcs.items():
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValidationError(f"arc ({u}, {v}) out of range")
            if not (isinstance(cost, (int, float)) and math.isfinite(cost)) or cost < 0:
                raise ValidationError(f"arc ({u}, {v}) cost must be finite and >= 0, got {cost}")
        object.__setattr__(self, "arcs", arcs)

    def unweighted(self) -> Digraph:
        return Digraph(self.node_count, frozenset(self.arcs))

    def reversed(self) -> "WeightedDigraph":
        return WeightedDigraph(
            self.node_count, {(v, u): c for (u, v), c in self.arcs.items()}
        )

    def is_symmetric(self) -> bool:
        for (u, v), c in self.arcs.items():
            if self.arcs.get((v, u)) != c:
                return False
        return True


@dataclass(frozen=True)
class ProblemInstance:
    """One design problem: system pattern, sensing costs and candidate network.

    Attributes:
        n: number of states.
        m: number of sensors.
        system_pattern: n x n sparsity pattern of the dynamics matrix.
        sensing_cost: (sensor, state) -> cost; a missing key means that
            sensor may not measure that state.
        network: candidate communication links between sensors, with costs.
            A link (i, j) lets sensor i fuse the prediction shared by
            sensor j.
        network_undirected: if True, links come in symmetric equal-cost pairs.
    """

    n: int
    m: int
    system_pattern: StructuredMatrix
    sensing_cost: Mapping[tuple[int, int], float]
    network: WeightedDigraph
    network_undirected: bool = False

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValidationError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.system_pattern.rows != self.n or self.system_pattern.cols != self.n:
            raise ShapeError(
                f"system pattern is {self.system_pattern.rows}x{self.system_pattern.cols},"
                f" expected {self.n}x{self.n}"
            )
        costs = dict(self.sensing_cost)
        for (i, j), cost in costs.items():
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValidationError(f"sensing cost entry ({i}, {j}) out of range")
            if not math.isfinite(cost) or cost < 0:
                raise ValidationError(
                    f"sensing cost for sensor {i + 1}, state {j + 1} must be finite"
                    f" and >= 0, got {cost}"
                )
        object.__setattr__(self, "sensing_cost", costs)
        if self.network.node_count != self.m:
            raise ShapeError(
                f"network has {self.network.node_count} nodes, expected m={self.m}"
            )
        if self.network_undirected and not self.network.is_symmetric():
            raise ValidationError(
                "network is flagged undirected but the links are not symmetric"
                " with equal costs"
            )


@dataclass(frozen=True)
class DesignResult:
    """Output of the design pipeline: chosen measurements and chosen links.

    The two cost fields are the sums of the selected sensing-cost entries and
    of the selected link costs; each directed link counts once, so an
    undirected link selected in both directions contributes twice.
    """

    measurement_pattern: StructuredMatrix
    network_pattern: StructuredMatrix
    sensing_cost: float
    networking_cost: float
    network_optimality: str  # "exact" or "two_approx"

    def __post_init__(self):
        if self.network_optimality not in ("exact", "two_approx"):
            raise ValidationError(
                f"network_optimality must be 'exact' or 'two_approx',"
                f" got {self.network_optimality!r}"
            )
        h = self.measurement_pattern
        rows = [i for (i, _) in h.nonzeros]
        cols = [j for (_, j) in h.nonzeros]
        if sorted(rows) != list(range(h.rows)):
            raise ValidationError("measurement pattern must have exactly one nonzero per row")
        if len(set(cols)) != len(cols):
            raise ValidationError("measurement pattern must have at most one nonzero per column")
        w = self.network_pattern
        if w.rows != w.cols or w.rows != h.rows:
            raise ShapeError("network pattern must be m x m for m sensors")


def digraph_from_pattern(pattern: StructuredMatrix) -> Digraph:
    """State digraph of a square pattern: nonzero (i, j) becomes the arc j -> i.

    Column j of the pattern multiplies state j, so a nonzero in row i means
    state j influences state i.
    """
    if not pattern.is_square:
        raise ShapeError(
            f"state digraph needs a square pattern, got {pattern.rows}x{pattern.cols}"
        )
    return Digraph(pattern.rows, frozenset((j, i) for (i, j) in pattern.nonzeros))


# --- JSON documents -------------------------------------------------------
#
# Instance schema (1-based indices):
#   {"n": int, "m": int,
#    "A": [[i, j], ...],
#    "c": [{"sensor": i, "state": j, "cost": x}, ...],
#    "net": {"undirected": bool, "links": [{"from": i, "to": j, "cost": x}, ...]}}
#
# Design schema:
#   {"H": [[i, j], ...], "W": [[i, j], ...],
#    "sensing_cost": x, "networking_cost": x,
#    "network_optimality": "exact" | "two_approx"}


def _require(doc: Mapping, key: str, kind, path: str):
    if key not in doc:
        raise ValidationError(f"{path}: missing required field '{key}'")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{path}.{key}: expected a number, got {value!r}")
        return float(value)
    if kind is int and isinstance(value, bool):
        raise ValidationError(f"{path}.{key}: expected {kind.__name__}, got {value!r}")
    if not isinstance(value, kind):
        raise ValidationError(f"{path}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def _index(value, upper: int, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}: expected an integer index, got {value!r}")
    if not (1 <= value <= upper):
        raise ValidationError(f"{path}: index {value} out of range 1..{upper}")
    return value - 1


def parse_instance(text: str) -> ProblemInstance:
    """Parse and validate an instance document. See the schema comment above."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"instance document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("instance document must be a JSON object")

    n = _require(doc, "n", int, "instance")
    m = _require(doc, "m", int, "instance")
    if n < 1 or m < 1:
        raise ValidationError(f"instance: need n >= 1 and m >= 1, got n={n}, m={m}")

    a_pairs = _require(doc, "A", list, "instance")
    nonzeros = set()
    for k, pair in enumerate(a_pairs):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ValidationError(f"A[{k}]: expected a [row, col] pair, got {pair!r}")
        i = _index(pair[0], n, f"A[{k}][0]")
        j = _index(pair[1], n, f"A[{k}][1]")
        if (i, j) in nonzeros:
            raise ValidationError(f"A[{k}]: duplicate nonzero ({pair[0]}, {pair[1]})")
        nonzeros.add((i, j))

    c_entries = _require(doc, "c", list, "instance")
    sensing_cost: dict[tuple[int, int], float] = {}
    for k, entry in enumerate(c_entries):
        if not isinstance(entry, dict):
            raise ValidationError(f"c[{k}]: expected an object, got {entry!r}")
        i = _index(entry.get("sensor"), m, f"c[{k}].sensor")
        j = _index(entry.get("state"), n, f"c[{k}].state")
        cost = _require(entry, "cost", float, f"c[{k}]")
        if not math.isfinite(cost) or cost < 0:
            raise ValidationError(f"c[{k}].cost: must be finite and >= 0, got {cost}")
        if (i, j) in sensing_cost:
            raise ValidationError(f"c[{k}]: duplicate entry for sensor {i + 1}, state {j + 1}")
        sensing_cost[(i, j)] = cost

    net_doc = _require(doc, "net", dict, "instance")
    undirected = _require(net_doc, "undirected", bool, "net")
    links = _require(net_doc, "links", list, "net")
    arcs: dict[tuple[int, int], float] = {}
    for k, link in enumerate(links):
        if not isinstance(link, dict):
            raise ValidationError(f"net.links[{k}]: expected an object, got {link!r}")
        u = _index(link.get("from"), m, f"net.links[{k}].from")
        v = _index(link.get("to"), m, f"net.links[{k}].to")
        cost = _require(link, "cost", float, f"net.links[{k}]")
        if not math.isfinite(cost) or cost < 0:
            raise ValidationError(f"net.links[{k}].cost: must be finite and >= 0, got {cost}")
        if u == v:
            raise ValidationError(f"net.links[{k}]: self-link {u + 1} -> {u + 1} is not allowed")
        if (u, v) in arcs:
            raise ValidationError(f"net.links[{k}]: duplicate link {u + 1} -> {v + 1}")
        arcs[(u, v)] = cost
    if undirected:
        for (u, v), cost in arcs.items():
            if (v, u) not in arcs:
                raise ValidationError(
                    f"net: undirected flag set but link {u + 1} -> {v + 1}"
                    f" has no reverse link {v + 1} -> {u + 1}"
                )
            if arcs[(v, u)] != cost:
                raise ValidationError(
                    f"net: undirected flag set but links {u + 1} <-> {v + 1}"
                    f" have unequal costs {cost} and {arcs[(v, u)]}"
                )

    return ProblemInstance(
        n=n,
        m=m,
        system_pattern=StructuredMatrix(n, n, frozenset(nonzeros)),
        sensing_cost=sensing_cost,
        network=WeightedDigraph(m, arcs),
        network_undirected=undirected,
    )


def serialize_instance(instance: ProblemInstance) -> str:
    """Canonical JSON for an instance; parse(serialize(x)) == x."""
    doc = {
        "n": instance.n,
        "m": instance.m,
        "A": [[i + 1, j + 1] for (i, j) in instance.system_pattern.sorted_pairs()],
        "c": [
            {"sensor": i + 1, "state": j + 1, "cost": cost}
            for (i, j), cost in sorted(instance.sensing_cost.items())
        ],
        "net": {
            "undirected": instance.network_undirected,
            "links": [
                {"from": u + 1, "to": v + 1, "cost": cost}
                for (u, v), cost in sorted(instance.network.arcs.items())
            ],
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_OPTIMALITY = ("exact", "two_approx")


def parse_design(text: str, n: int, m: int) -> DesignResult:
    """Parse a design document against the instance dimensions n (states) and m (sensors)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"design document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("design document must be a JSON object")

    def pattern_from(key: str, rows: int, cols: int) -> StructuredMatrix:
        pairs = _require(doc, key, list, "design")
        nz = set()
        for k, pair in enumerate(pairs):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ValidationError(f"{key}[{k}]: expected a [row, col] pair, got {pair!r}")
            i = _index(pair[0], rows, f"{key}[{k}][0]")
            j = _index(pair[1], cols, f"{key}[{k}][1]")
            if (i, j) in nz:
                raise ValidationError(f"{key}[{k}]: duplicate nonzero")
            nz.add((i, j))
        return StructuredMatrix(rows, cols, frozenset(nz))

    optimality = _require(doc, "network_optimality", str, "design")
    if optimality not in _OPTIMALITY:
        raise ValidationError(
            f"design.network_optimality: expected one of {_OPTIMALITY}, got {optimality!r}"
        )
    return DesignResult(
        measurement_pattern=pattern_from("H", m, n),
        network_pattern=pattern_from("W", m, m),
        sensing_cost=_require(doc, "sensing_cost", float, "design"),
        networking_cost=_require(doc, "networking_cost", float, "design"),
        network_optimality=optimality,
    )


def serialize_design(result: DesignResult) -> str:
    """Canonical JSON for a design result."""
    doc = {
        "H": [[i + 1, j + 1] for (i, j) in result.measurement_pattern.sorted_pairs()],
        "W": [[i + 1, j + 1] for (i, j) in result.network_pattern.sorted_pairs()],
        "sensing_cost": result.sensing_cost,
        "networking_cost": result.networking_cost,
        "network_optimality": result.network_optimality,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --- DOT export -----------------------------------------------------------


def _format_cost(cost: float) -> str:
    if float(cost).is_integer():
        return str(int(cost))
    return repr(float(cost))


def export_dot(graph: Digraph | WeightedDigraph, labels: Iterable[str] | None = None) -> str:
    """Render a digraph as Graphviz DOT text.

    Nodes are written 1-based. Arc costs of a WeightedDigraph become edge
    labels; plain digraphs get bare edges.
    """
    names = list(labels) if labels is not None else [str(i + 1) for i in range(graph.node_count)]
    if len(names) != graph.node_count:
        raise ValidationError(
            f"got {len(names)} labels for {graph.node_count} nodes"
        )
    lines = ["digraph G {"]
    for i in range(graph.node_count):
        lines.append(f'  {i + 1} [label="{names[i]}"];')
    if isinstance(graph, WeightedDigraph):
        for (u, v), cost in sorted(graph.arcs.items()):
            lines.append(f'  {u + 1} -> {v + 1} [label="{_format_cost(cost)}"];')
    else:
        for (u, v) in sorted(graph.edges):
            lines.append(f"  {u + 1} -> {v + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_instance_dot(instance: ProblemInstance) -> str:
    """Render a whole instance as DOT: state digraph plus candidate network.

    States form one cluster with their influence edges (an edge x_j -> x_i
    means state j drives state i); sensors form a second cluster with the
    candidate links and their costs.
    """
    lines = ["digraph instance {"]
    lines.append("  subgraph cluster_states {")
    lines.append('    label="states";')
    for j in range(instance.n):
        lines.append(f'    x{j + 1} [label="x{j + 1}"];')
    for (i, j) in instance.system_pattern.sorted_pairs():
        lines.append(f"    x{j + 1} -> x{i + 1};")
    lines.append("  }")
    lines.append("  subgraph cluster_sensors {")
    lines.append('    label="sensors";')
    for i in range(instance.m):
        lines.append(f'    y{i + 1} [label="y{i + 1}"];')
    for (u, v), cost in sorted(instance.network.arcs.items()):
        lines.append(f'    y{u + 1} -> y{v + 1} [label="{_format_cost(cost)}"];')
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
