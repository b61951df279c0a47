"""Role ontology, argument-graph data model, parsing, validation, ordering.

A graph document is a single JSON object with one meaningful key,
``"nodes"``: a list of ``{id, text, role, parents, children}`` records.
``parents``/``children`` may be null (treated as empty). Parsing is
permissive where it can be (it auto-symmetrizes one-sided parent/child
listings and records a warning); validation reports every remaining
violation as data rather than raising.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Optional, Union

from .errors import (
    CycleError,
    MalformedDocumentError,
    MalformedMetricsError,
    RepairUnavailableError,
)

#: Canonical role ontology, in fixed (alphabetical) order. This order is also
#: used for one-hot encodings and role histograms in exports.
ROLES: tuple[str, ...] = (
    "Assumption",
    "Claim",
    "Conclusion",
    "Context",
    "Counterevidence",
    "Evidence",
    "Hypothesis",
    "Limitation",
    "Method",
    "Result",
)

_CANONICAL_BY_FOLD = {r.lower(): r for r in ROLES}

#: Metric vector component names, in fixed order.
METRIC_NAMES: tuple[str, ...] = (
    "credibility",
    "relevance",
    "evidence_strength",
    "method_rigor",
    "reproducibility",
    "citation_support",
)

#: Parse-time soft cap on node count; exceeding it is a warning, not an error.
DEFAULT_MAX_NODES = 16


def canonical_role(label: object) -> Optional[str]:
    """Map a raw role label to its canonical form, or None if unknown.

    Labels are trimmed and matched case-insensitively; the canonical
    capitalized spelling is returned.
    """
    if not isinstance(label, str):
        return None
    return _CANONICAL_BY_FOLD.get(label.strip().lower())


@dataclass(frozen=True)
class MetricVector:
    """Six verification metrics for one node, each in [0, 1]."""

    credibility: float
    relevance: float
    evidence_strength: float
    method_rigor: float
    reproducibility: float
    citation_support: float

    def __post_init__(self) -> None:
        for name in METRIC_NAMES:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise MalformedMetricsError(f"metric '{name}' must be a number")
            value = float(value)
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise MalformedMetricsError(
                    f"metric '{name}' must be finite and within [0, 1], got {value!r}"
                )
            object.__setattr__(self, name, value)

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in METRIC_NAMES)

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "MetricVector":
        if not isinstance(data, Mapping):
            raise MalformedMetricsError("metrics must be an object of six named components")
        unknown = set(data) - set(METRIC_NAMES)
        if unknown:
            raise MalformedMetricsError(f"unknown metric component(s): {sorted(unknown)}")
        missing = [name for name in METRIC_NAMES if name not in data]
        if missing:
            raise MalformedMetricsError(f"missing metric component(s): {missing}")
        return cls(**{name: data[name] for name in METRIC_NAMES})


@dataclass(frozen=True)
class Node:
    """One argument unit: an id, a text excerpt, a role label, and links.

    ``role`` preserves the label exactly as parsed; use ``canonical_role``
    (or :attr:`role_canonical`) for ontology-aware handling.
    """

    id: int
    text: str
    role: str
    parents: frozenset[int] = frozenset()
    children: frozenset[int] = frozenset()

    @property
    def role_canonical(self) -> Optional[str]:
        return canonical_role(self.role)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    node_ids: tuple[int, ...]
    message: str

    def to_dict(self) -> dict[str, object]:
        return {"code": self.code, "node_ids": list(self.node_ids), "message": self.message}


# Fatal error codes; anything else recorded by parse is a warning.
ERROR_CODES = (
    "UnknownRole",
    "DanglingReference",
    "Cycle",
    "SelfLoop",
    "DuplicateId",
    "AsymmetricLink",
    "MalformedDocument",
)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating one graph: every violation, never just the first."""

    errors: tuple[ValidationIssue, ...] = ()
    warnings: tuple[ValidationIssue, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [issue.code for issue in self.errors] + [issue.code for issue in self.warnings]

    def to_dict(self) -> dict[str, object]:
        return {
            "valid": self.valid,
            "errors": [issue.to_dict() for issue in self.errors],
            "warnings": [issue.to_dict() for issue in self.warnings],
        }


@dataclass
class KnowledgeGraph:
    """A parsed argument DAG. Treat as immutable once validated.

    ``parse_issues`` carries problems recorded while parsing (duplicate ids,
    auto-symmetrized links, node-count overrun); ``validate`` folds them into
    its report so nothing observed at parse time is lost.
    """

    nodes: dict[int, Node]
    mode_tag: Optional[str] = None
    parse_issues: tuple[ValidationIssue, ...] = ()

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.nodes))

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Directed edge set (u, v), derived from parent and child listings.

        The union of both listings is used so hand-built asymmetric graphs
        still expose every intended edge; parsed graphs are symmetric.
        Self-references and links to missing nodes are excluded.
        """
        found: set[tuple[int, int]] = set()
        for node in self.nodes.values():
            for u in node.parents:
                if u != node.id and u in self.nodes:
                    found.add((u, node.id))
            for c in node.children:
                if c != node.id and c in self.nodes:
                    found.add((node.id, c))
        return tuple(sorted(found))

    def parents_of(self, node_id: int) -> tuple[int, ...]:
        return tuple(sorted(u for u, v in self.edges() if v == node_id))

    def children_of(self, node_id: int) -> tuple[int, ...]:
        return tuple(sorted(v for u, v in self.edges() if u == node_id))

    def roles_canonical(self) -> dict[int, Optional[str]]:
        return {i: self.nodes[i].role_canonical for i in self.node_ids}

    def hypothesis_ids(self) -> tuple[int, ...]:
        return tuple(i for i in self.node_ids if self.nodes[i].role_canonical == "Hypothesis")

    def conclusion_ids(self) -> tuple[int, ...]:
        return tuple(i for i in self.node_ids if self.nodes[i].role_canonical == "Conclusion")

    def to_document(self) -> dict[str, object]:
        """Serialize back to the document schema (round-trip stable)."""
        return {
            "nodes": [
                {
                    "id": node.id,
                    "text": node.text,
                    "role": node.role,
                    "parents": sorted(node.parents) or None,
                    "children": sorted(node.children) or None,
                }
                for node in (self.nodes[i] for i in self.node_ids)
            ]
        }


Document = Union[str, bytes, Mapping[str, object]]


def _require_int(value: object) -> Optional[int]:
    if isinstance(value, bool) or not isinstance(value, int):
        return None
    return value


def parse_graph(document: Document, *, max_nodes: int = DEFAULT_MAX_NODES) -> KnowledgeGraph:
    """Parse a graph document into a KnowledgeGraph.

    Raises MalformedDocumentError on syntax failure, a missing required
    field, or a non-integer id. Duplicate ids and one-sided links are kept
    as parse issues for ``validate`` to report: duplicates become errors,
    auto-symmetrized links become AsymmetricLink warnings.
    """
    issues: list[tuple[tuple[int, ...], str]] = []

    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError([((), f"invalid JSON: {exc}")]) from exc
    else:
        data = document

    if not isinstance(data, Mapping):
        raise MalformedDocumentError([((), "document must be a JSON object")])
    if "nodes" not in data:
        raise MalformedDocumentError([((), "document is missing the 'nodes' key")])
    raw_nodes = data["nodes"]
    if not isinstance(raw_nodes, list):
        raise MalformedDocumentError([((), "'nodes' must be an array")])

    parsed: dict[int, dict[str, object]] = {}
    duplicate_ids: list[int] = []

    for index, raw in enumerate(raw_nodes):
        where = f"nodes[{index}]"
        if not isinstance(raw, Mapping):
            issues.append(((), f"{where} must be an object"))
            continue
        node_id = _require_int(raw.get("id"))
        if node_id is None or node_id < 0:
            issues.append(((), f"{where} has a missing or non-integer id"))
            continue
        if "text" not in raw or not isinstance(raw["text"], str):
            issues.append(((node_id,), f"{where} is missing required string field 'text'"))
            continue
        if "role" not in raw or not isinstance(raw["role"], str):
            issues.append(((node_id,), f"{where} is missing required string field 'role'"))
            continue

        links: dict[str, set[int]] = {}
        bad_link = False
        for key in ("parents", "children"):
            value = raw.get(key)
            if value is None:
                links[key] = set()
                continue
            if not isinstance(value, list):
                issues.append(((node_id,), f"{where}.{key} must be an array of ids or null"))
                bad_link = True
                break
            ids = set()
            for item in value:
                as_int = _require_int(item)
                if as_int is None:
                    issues.append(((node_id,), f"{where}.{key} contains a non-integer id"))
                    bad_link = True
                    break
                ids.add(as_int)
            if bad_link:
                break
            links[key] = ids
        if bad_link:
            continue

        if node_id in parsed:
            duplicate_ids.append(node_id)
            continue  # first occurrence wins
        parsed[node_id] = {
            "text": raw["text"],
            "role": raw["role"],
            "parents": links["parents"],
            "children": links["children"],
        }

    if issues:
        raise MalformedDocumentError(issues)

    parse_issues: list[ValidationIssue] = []
    for node_id in duplicate_ids:
        parse_issues.append(
            ValidationIssue("DuplicateId", (node_id,), f"node id {node_id} appears more than once")
        )
    if len(parsed) > max_nodes:
        parse_issues.append(
            ValidationIssue(
                "NodeLimit",
                tuple(sorted(parsed)),
                f"graph has {len(parsed)} nodes, above the soft limit of {max_nodes}",
            )
        )

    # Symmetrize one-sided listings between existing, distinct nodes. Links to
    # missing nodes and self-references are left as-is for validate to flag.
    for node_id in sorted(parsed):
        for parent in sorted(parsed[node_id]["parents"]):
            if parent == node_id or parent not in parsed:
                continue
            if node_id not in parsed[parent]["children"]:
                parsed[parent]["children"].add(node_id)
                parse_issues.append(
                    ValidationIssue(
                        "AsymmetricLink",
                        (parent, node_id),
                        f"node {node_id} lists parent {parent} but {parent} did not list "
                        f"child {node_id}; link symmetrized",
                    )
                )
        for child in sorted(parsed[node_id]["children"]):
            if child == node_id or child not in parsed:
                continue
            if node_id not in parsed[child]["parents"]:
                parsed[child]["parents"].add(node_id)
                parse_issues.append(
                    ValidationIssue(
                        "AsymmetricLink",
                        (node_id, child),
                        f"node {node_id} lists child {child} but {child} did not list "
                        f"parent {node_id}; link symmetrized",
                    )
                )

    nodes = {
        node_id: Node(
            id=node_id,
            text=parsed[node_id]["text"],
            role=parsed[node_id]["role"],
            parents=frozenset(parsed[node_id]["parents"]),
            children=frozenset(parsed[node_id]["children"]),
        )
        for node_id in sorted(parsed)
    }
    return KnowledgeGraph(nodes=nodes, parse_issues=tuple(parse_issues))


def validate(graph: KnowledgeGraph, *, strict_appendix_a: bool = False) -> ValidationReport:
    """Validate a graph against the ontology and structural invariants.

    Reports every violation found rather than stopping at the first. A valid
    report certifies: role-ontology membership, referential integrity,
    parent/child symmetry, no self-references, no duplicate ids, acyclicity.
    ``strict_appendix_a`` additionally enforces the single-root document
    convention (id 0 is the only Hypothesis, has no parents, ids sequential,
    non-roots have parents); violations are reported as MalformedDocument.
    """
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    for issue in graph.parse_issues:
        if issue.code == "DuplicateId":
            errors.append(issue)
        else:
            warnings.append(issue)

    for node_id in graph.node_ids:
        node = graph.nodes[node_id]
        if node.role_canonical is None:
            errors.append(
                ValidationIssue(
                    "UnknownRole", (node_id,), f"node {node_id} has unknown role {node.role!r}"
                )
            )
        if node_id in node.parents or node_id in node.children:
            errors.append(
                ValidationIssue("SelfLoop", (node_id,), f"node {node_id} references itself")
            )
        for ref in sorted(node.parents | node.children):
            if ref != node_id and ref not in graph.nodes:
                errors.append(
                    ValidationIssue(
                        "DanglingReference",
                        (node_id, ref),
                        f"node {node_id} references missing node {ref}",
                    )
                )

    # Asymmetry can only survive in graphs built directly (parse symmetrizes).
    for node_id in graph.node_ids:
        node = graph.nodes[node_id]
        for parent in sorted(node.parents):
            if parent == node_id or parent not in graph.nodes:
                continue
            if node_id not in graph.nodes[parent].children:
                errors.append(
                    ValidationIssue(
                        "AsymmetricLink",
                        (parent, node_id),
                        f"edge {parent}->{node_id} is listed by the child only",
                    )
                )
        for child in sorted(node.children):
            if child == node_id or child not in graph.nodes:
                continue
            if node_id not in graph.nodes[child].parents:
                errors.append(
                    ValidationIssue(
                        "AsymmetricLink",
                        (node_id, child),
                        f"edge {node_id}->{child} is listed by the parent only",
                    )
                )

    cycle_nodes = _nodes_on_cycles(graph)
    if cycle_nodes:
        errors.append(
            ValidationIssue(
                "Cycle",
                tuple(sorted(cycle_nodes)),
                f"graph contains a directed cycle through nodes {sorted(cycle_nodes)}",
            )
        )

    if strict_appendix_a:
        errors.extend(_strict_shape_errors(graph))

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def _strict_shape_errors(graph: KnowledgeGraph) -> list[ValidationIssue]:
    errors: list[ValidationIssue] = []
    ids = graph.node_ids
    if 0 not in graph.nodes:
        errors.append(ValidationIssue("MalformedDocument", (), "strict shape: node id 0 is required"))
        return errors
    root = graph.nodes[0]
    if root.role_canonical != "Hypothesis":
        errors.append(
            ValidationIssue("MalformedDocument", (0,), "strict shape: node 0 must be the Hypothesis")
        )
    if root.parents:
        errors.append(
            ValidationIssue("MalformedDocument", (0,), "strict shape: node 0 must have no parents")
        )
    extra_hypotheses = [i for i in ids if i != 0 and graph.nodes[i].role_canonical == "Hypothesis"]
    if extra_hypotheses:
        errors.append(
            ValidationIssue(
                "MalformedDocument",
                tuple(extra_hypotheses),
                "strict shape: only node 0 may carry the Hypothesis role",
            )
        )
    if list(ids) != list(range(len(ids))):
        errors.append(
            ValidationIssue("MalformedDocument", ids, "strict shape: ids must be sequential from 0")
        )
    for i in ids:
        if i != 0 and not graph.nodes[i].parents:
            errors.append(
                ValidationIssue(
                    "MalformedDocument", (i,), f"strict shape: non-root node {i} must have parents"
                )
            )
    return errors


def _nodes_on_cycles(graph: KnowledgeGraph) -> set[int]:
    """Ids of nodes lying on at least one directed cycle (self-loops excluded)."""
    succ: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    for u, v in graph.edges():
        succ[u].append(v)

    on_cycle: set[int] = set()
    for start in graph.node_ids:
        # DFS: can `start` reach itself through >= 1 edge?
        stack = list(succ[start])
        seen: set[int] = set()
        while stack:
            current = stack.pop()
            if current == start:
                on_cycle.add(start)
                break
            if current in seen:
                continue
            seen.add(current)
            stack.extend(succ[current])
    return on_cycle


def validate_document(
    document: Document,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    strict_appendix_a: bool = False,
) -> tuple[Optional[KnowledgeGraph], ValidationReport]:
    """Parse and validate in one step; parse failures become report errors.

    Total: any input yields either a graph with its report, or (None, report)
    whose errors carry the MalformedDocument code.
    """
    try:
        graph = parse_graph(document, max_nodes=max_nodes)
    except MalformedDocumentError as exc:
        errors = tuple(
            ValidationIssue("MalformedDocument", tuple(node_ids), message)
            for node_ids, message in exc.issues
        )
        return None, ValidationReport(errors=errors)
    report = validate(graph, strict_appendix_a=strict_appendix_a)
    return graph, report


class RepairResult(NamedTuple):
    graph: Optional[KnowledgeGraph]
    report: ValidationReport
    repair_calls: int

    @property
    def succeeded(self) -> bool:
        return self.graph is not None and self.report.valid


Repairer = Callable[[Document, tuple[ValidationIssue, ...]], Document]


def repair_loop(
    document: Document,
    repairer: Repairer,
    max_attempts: int = 3,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    strict_appendix_a: bool = False,
) -> RepairResult:
    """Run the bounded validate-and-repair loop around an external corrector.

    The engine itself generates no text: ``repairer(document, errors)`` must
    return a corrected candidate document. Returns the first candidate that
    validates, otherwise the last report after ``max_attempts`` repair calls.
    """
    if max_attempts < 0:
        raise ValueError("max_attempts must be >= 0")

    current = document
    graph, report = validate_document(
        current, max_nodes=max_nodes, strict_appendix_a=strict_appendix_a
    )
    calls = 0
    while not report.valid and calls < max_attempts:
        try:
            current = repairer(current, report.errors)
        except Exception as exc:
            raise RepairUnavailableError(f"repair callback failed: {exc}") from exc
        calls += 1
        graph, report = validate_document(
            current, max_nodes=max_nodes, strict_appendix_a=strict_appendix_a
        )
    if not report.valid:
        graph = None
    return RepairResult(graph=graph, report=report, repair_calls=calls)


def topological_order(graph: KnowledgeGraph) -> list[int]:
    """Deterministic topological order: parents first, ties by ascending id.

    Raises CycleError when the graph is cyclic.
    """
    succ: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    indegree: dict[int, int] = {i: 0 for i in graph.node_ids}
    for u, v in graph.edges():
        succ[u].append(v)
        indegree[v] += 1

    ready = [i for i in graph.node_ids if indegree[i] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        current = heapq.heappop(ready)
        order.append(current)
        for child in succ[current]:
            indegree[child] -= 1
            if indegree[child] == 0:
                heapq.heappush(ready, child)
    if len(order) != len(graph.nodes):
        blocked = sorted(set(graph.node_ids) - set(order))
        raise CycleError(f"graph is not acyclic; unresolved nodes {blocked}")
    return order


class BfsOrder(NamedTuple):
    order: list[int]
    no_hypothesis: bool


def bfs_order_from_hypotheses(graph: KnowledgeGraph) -> BfsOrder:
    """Breadth-first node order seeded by all Hypothesis-role nodes.

    Seeds and each frontier are visited in ascending id; nodes unreachable
    from any Hypothesis are appended afterward in ascending id. A graph with
    no Hypothesis node falls back to ascending id and is flagged, not fatal.
    """
    seeds = sorted(graph.hypothesis_ids())
    if not seeds:
        return BfsOrder(order=list(graph.node_ids), no_hypothesis=True)

    succ: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    for u, v in graph.edges():
        succ[u].append(v)

    order: list[int] = []
    visited: set[int] = set(seeds)
    frontier = list(seeds)
    while frontier:
        order.extend(frontier)
        upcoming: set[int] = set()
        for node_id in frontier:
            for child in succ[node_id]:
                if child not in visited:
                    upcoming.add(child)
                    visited.add(child)
        frontier = sorted(upcoming)
    reached = set(order)
    order.extend(i for i in graph.node_ids if i not in reached)
    return BfsOrder(order=order, no_hypothesis=False)
