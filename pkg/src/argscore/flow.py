"""Max-flow / min-cut over small directed networks with real capacities.

Edmonds-Karp (BFS augmenting paths) on an adjacency-list residual graph.
Graphs here are tiny (a bridge subgraph plus two super terminals), so the
classic O(V * E^2) bound is irrelevant; what matters is supporting
fractional capacities and exposing the cut realized in the residual graph
so callers can assert flow/cut duality directly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable

#: Augmenting paths narrower than this are treated as exhausted. Required
#: because fractional capacities can leave sub-ulp residuals.
RESIDUAL_TOLERANCE = 1e-12


@dataclass
class _Arc:
    head: Hashable
    capacity: float
    flow: float = 0.0
    reverse: "_Arc" = None  # paired residual arc

    @property
    def residual(self) -> float:
        return self.capacity - self.flow


@dataclass(frozen=True)
class FlowResult:
    """Outcome of a max-flow run.

    ``cut_value`` is the capacity of the source-side cut realized in the
    final residual graph and equals ``flow_value`` up to numeric tolerance;
    ``cut_edges`` lists the original (tail, head) arcs crossing that cut.
    """

    flow_value: float
    cut_value: float
    cut_edges: tuple[tuple[Hashable, Hashable], ...]
    source_side: frozenset


class FlowNetwork:
    """Directed flow network; parallel arcs are allowed and kept separate."""

    def __init__(self) -> None:
        self._adjacency: dict[Hashable, list[_Arc]] = {}

    def add_node(self, node: Hashable) -> None:
        self._adjacency.setdefault(node, [])

    def add_edge(self, tail: Hashable, head: Hashable, capacity: float) -> None:
        if capacity < 0.0:
            raise ValueError("capacities must be non-negative")
        self.add_node(tail)
        self.add_node(head)
        forward = _Arc(head=head, capacity=capacity)
        backward = _Arc(head=tail, capacity=0.0)
        forward.reverse = backward
        backward.reverse = forward
        self._adjacency[tail].append(forward)
        self._adjacency[head].append(backward)

    def _shortest_augmenting_path(self, source: Hashable, sink: Hashable):
        parent_arc: dict[Hashable, _Arc] = {}
        seen = {source}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            if node == sink:
                break
            for arc in self._adjacency[node]:
                if arc.residual > RESIDUAL_TOLERANCE and arc.head not in seen:
                    seen.add(arc.head)
                    parent_arc[arc.head] = arc
                    queue.append(arc.head)
        if sink not in seen:
            return None
        path = []
        node = sink
        while node != source:
            arc = parent_arc[node]
            path.append(arc)
            node = arc.reverse.head
        path.reverse()
        return path

    def max_flow(self, source: Hashable, sink: Hashable) -> FlowResult:
        """Run Edmonds-Karp from source to sink and extract the min cut."""
        if source not in self._adjacency or sink not in self._adjacency:
            raise ValueError("source and sink must be nodes of the network")
        flow_value = 0.0
        while True:
            path = self._shortest_augmenting_path(source, sink)
            if path is None:
                break
            bottleneck = min(arc.residual for arc in path)
            for arc in path:
                arc.flow += bottleneck
                arc.reverse.flow -= bottleneck
            flow_value += bottleneck

        # Source side of the cut: nodes reachable in the residual graph.
        reachable = {source}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            for arc in self._adjacency[node]:
                if arc.residual > RESIDUAL_TOLERANCE and arc.head not in reachable:
                    reachable.add(arc.head)
                    queue.append(arc.head)

        cut_value = 0.0
        cut_edges: list[tuple[Hashable, Hashable]] = []
        for node in self._adjacency:
            if node not in reachable:
                continue
            for arc in self._adjacency[node]:
                if arc.capacity > 0.0 and arc.head not in reachable:
                    cut_value += arc.capacity
                    cut_edges.append((node, arc.head))
        return FlowResult(
            flow_value=flow_value,
            cut_value=cut_value,
            cut_edges=tuple(sorted(cut_edges, key=repr)),
            source_side=frozenset(reachable),
        )


def max_flow(
    edges: Iterable[tuple[Hashable, Hashable, float]],
    source: Hashable,
    sink: Hashable,
) -> FlowResult:
    """Convenience wrapper: build a network from (tail, head, capacity) arcs."""
    network = FlowNetwork()
    network.add_node(source)
    network.add_node(sink)
    for tail, head, capacity in edges:
        network.add_edge(tail, head, capacity)
    return network.max_flow(source, sink)
