"""Cache-first staged calibration of the parameter surface.

A labeled corpus holds, per paper, a coarse Bad/Neutral/Good triage label
and K structural DAG samples, each with one per-node metric assignment.
Scoring a paper under a candidate configuration means scoring every valid
DAG sample and averaging; ranking quality against the labels is measured by
AUROC (Good vs Bad) and Spearman (ordinal). Trial scores are cached by
(paper, dag sample, config fingerprint) so staged search re-scores cached
artifacts instead of recomputing anything it has already seen.

Search runs in three chained stages: dense low-discrepancy exploration of
the bounded surface, local random refinement around the incumbent, then
sparse single-coordinate perturbations. A stage never returns a
configuration worse than its incumbent, so the objective is non-decreasing
across stages.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .components import score_graph
from .config import (
    COMPONENT_NAMES,
    ComponentWeights,
    EdgeWeights,
    ScoreConfig,
    default_config,
    with_propagation,
)
from .errors import (
    BudgetZeroError,
    DegenerateLabelsError,
    NoValidTrialsError,
    UnknownDimensionError,
)
from .graph import METRIC_NAMES, ROLES, KnowledgeGraph, MetricVector, Node, validate

LABELS = ("Bad", "Neutral", "Good")
_LABEL_RANK = {"Bad": 0, "Neutral": 1, "Good": 2}

CORPUS_SCHEMA_VERSION = "1"


# --------------------------------------------------------------------------
# Corpus model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DagSample:
    """One structural sample of a paper: a graph plus its metric assignment."""

    graph: KnowledgeGraph
    metrics: dict[int, MetricVector]


@dataclass(frozen=True)
class CorpusPaper:
    paper_id: str
    label: str
    dag_samples: tuple[DagSample, ...]

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")


@dataclass(frozen=True)
class LabeledCorpus:
    papers: tuple[CorpusPaper, ...]
    seed: Optional[int] = None
    schema_version: str = CORPUS_SCHEMA_VERSION

    def labels(self) -> list[str]:
        return [paper.label for paper in self.papers]


# --------------------------------------------------------------------------
# Trial cache and per-paper aggregation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialResult:
    score: float
    components: tuple[float, ...]


class TrialCache:
    """Append-only cache of trial scores keyed by (paper, dag, fingerprint).

    Entries are immutable once written; re-scoring with an identical
    fingerprint reproduces the cached value exactly because the scoring
    pipeline is bit-deterministic.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[str, int, str], TrialResult] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._entries)

    def get_or_score(
        self, paper: CorpusPaper, dag_index: int, config: ScoreConfig, fingerprint: str
    ) -> TrialResult:
        key = (paper.paper_id, dag_index, fingerprint)
        cached = self._entries.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        sample = paper.dag_samples[dag_index]
        scored = score_graph(sample.graph, sample.metrics, config)
        result = TrialResult(score=scored.report.score, components=scored.components.as_tuple())
        self._entries[key] = result
        return result

    def save(self, path) -> None:
        rows = [
            {"paper_id": p, "dag_index": d, "fingerprint": f,
             "score": r.score, "components": list(r.components)}
            for (p, d, f), r in sorted(self._entries.items())
        ]
        with open(path, "w", encoding="utf-8") as handle:
            json.dump({"schema_version": CORPUS_SCHEMA_VERSION, "entries": rows}, handle)

    @classmethod
    def load(cls, path) -> "TrialCache":
        cache = cls()
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        for row in data["entries"]:
            key = (row["paper_id"], int(row["dag_index"]), row["fingerprint"])
            cache._entries[key] = TrialResult(
                score=float(row["score"]), components=tuple(row["components"])
            )
        return cache


def aggregate_paper_score(trial_scores: Sequence[float]) -> float:
    """Arithmetic mean over the valid trial scores of one paper."""
    if not trial_scores:
        raise NoValidTrialsError("paper produced no valid trials to average")
    total = 0.0
    for score in trial_scores:
        total += score
    return total / len(trial_scores)


def _valid_dag_indexes(paper: CorpusPaper) -> list[int]:
    return [
        index
        for index, sample in enumerate(paper.dag_samples)
        if validate(sample.graph).valid
    ]


def score_corpus(
    corpus: LabeledCorpus,
    config: ScoreConfig,
    cache: Optional[TrialCache] = None,
) -> dict[str, float]:
    """Mean score per paper under one configuration (invalid DAGs excluded)."""
    cache = cache if cache is not None else TrialCache()
    fingerprint = config.fingerprint()
    result: dict[str, float] = {}
    for paper in corpus.papers:
        trials = [
            cache.get_or_score(paper, index, config, fingerprint).score
            for index in _valid_dag_indexes(paper)
        ]
        result[paper.paper_id] = aggregate_paper_score(trials)
    return result


# --------------------------------------------------------------------------
# Factorized K x M sampling
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplingPlan:
    """K structural DAG samples x M aggregation-weight resamples per paper.

    ``perturbation_scale`` is the half-width of the relative uniform jitter
    applied to each resampled weight (the perturbation distribution spec).
    """

    k_dag_samples: int = 8
    m_weight_trials: int = 5
    perturbation_scale: float = 0.2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k_dag_samples < 1 or self.m_weight_trials < 1:
            raise ValueError("k_dag_samples and m_weight_trials must be positive")


def perturb_config(config: ScoreConfig, rng: np.random.Generator, scale: float) -> ScoreConfig:
    """One weight trial: jitter node-quality and propagation weights.

    Global metric weights and edge weights get relative uniform noise; the
    propagation exponent and gate floor move within their valid ranges.
    """

    def jitter(value: float, lo: float = 0.0, hi: float = math.inf) -> float:
        moved = value * (1.0 + rng.uniform(-scale, scale))
        return min(hi, max(lo, moved))

    globals_ = tuple(jitter(w) for w in config.global_metric_weights)
    edge = EdgeWeights(**{k: jitter(v) for k, v in config.edge_weights.to_dict().items()})
    prop = config.propagation
    new_prop = dataclasses.replace(
        prop,
        alpha=jitter(prop.alpha, 0.0, 5.0),
        eta=jitter(prop.eta, 0.0, 1.0),
    )
    return dataclasses.replace(
        config,
        global_metric_weights=globals_,
        edge_weights=edge,
        propagation=new_prop,
    )


def run_factorized_trials(
    paper: CorpusPaper,
    base_config: ScoreConfig,
    plan: SamplingPlan,
    cache: Optional[TrialCache] = None,
) -> list[float]:
    """All valid (dag sample x weight trial) scores for one paper.

    Weight trials are derived deterministically from the plan seed, so the
    full trial set is reproducible. DAG samples that fail validation are
    excluded along with all their trials.
    """
    cache = cache if cache is not None else TrialCache()
    rng = np.random.Generator(np.random.PCG64(plan.seed))
    trial_configs = [
        perturb_config(base_config, rng, plan.perturbation_scale)
        for _ in range(plan.m_weight_trials)
    ]
    scores: list[float] = []
    for index in _valid_dag_indexes(paper)[: plan.k_dag_samples]:
        for trial_config in trial_configs:
            result = cache.get_or_score(paper, index, trial_config, trial_config.fingerprint())
            scores.append(result.score)
    return scores


# --------------------------------------------------------------------------
# Ranking metrics
# --------------------------------------------------------------------------


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def auroc(scores: Sequence[float], labels: Sequence[str]) -> float:
    """Probability a random Good paper outscores a random Bad one (ties 1/2).

    Neutral papers are excluded. Raises DegenerateLabels unless both classes
    are present.
    """
    pairs = [(s, l) for s, l in zip(scores, labels) if l in ("Good", "Bad")]
    n_good = sum(1 for _, l in pairs if l == "Good")
    n_bad = len(pairs) - n_good
    if n_good == 0 or n_bad == 0:
        raise DegenerateLabelsError("AUROC needs at least one Good and one Bad paper")
    ranks = _midranks([s for s, _ in pairs])
    good_rank_sum = sum(r for r, (_, l) in zip(ranks, pairs) if l == "Good")
    u = good_rank_sum - n_good * (n_good + 1) / 2.0
    return u / (n_good * n_bad)


def spearman(scores: Sequence[float], labels: Sequence[str]) -> float:
    """Rank correlation between scores and ordinal labels (Bad<Neutral<Good).

    Midranks are used for ties on both sides. Requires at least three papers
    and two distinct labels. A score vector with zero rank variance yields
    0.0 (no monotone association either way).
    """
    if len(scores) < 3:
        raise DegenerateLabelsError("Spearman needs at least three papers")
    unknown = [l for l in labels if l not in _LABEL_RANK]
    if unknown:
        raise ValueError(f"unknown label(s): {sorted(set(unknown))}")
    if len(set(labels)) < 2:
        raise DegenerateLabelsError("Spearman needs at least two distinct labels")
    rank_scores = _midranks(list(scores))
    rank_labels = _midranks([float(_LABEL_RANK[l]) for l in labels])
    return _pearson(rank_scores, rank_labels)


def _pearson(a: Sequence[float], b: Sequence[float]) -> float:
    n = len(a)
    mean_a = sum(a) / n
    mean_b = sum(b) / n
    cov = var_a = var_b = 0.0
    for x, y in zip(a, b):
        dx = x - mean_a
        dy = y - mean_b
        cov += dx * dy
        var_a += dx * dx
        var_b += dy * dy
    if var_a == 0.0 or var_b == 0.0:
        return 0.0
    return cov / math.sqrt(var_a * var_b)


@dataclass(frozen=True)
class Evaluation:
    objective: float
    auroc: float
    spearman: float


def evaluate_config(
    corpus: LabeledCorpus,
    config: ScoreConfig,
    cache: Optional[TrialCache] = None,
    objective: str = "auroc",
) -> Evaluation:
    """Score the corpus under one configuration and measure ranking quality."""
    if objective not in ("auroc", "spearman"):
        raise ValueError("objective must be 'auroc' or 'spearman'")
    by_paper = score_corpus(corpus, config, cache)
    scores = [by_paper[paper.paper_id] for paper in corpus.papers]
    labels = corpus.labels()
    auroc_value = auroc(scores, labels)
    spearman_value = spearman(scores, labels)
    return Evaluation(
        objective=auroc_value if objective == "auroc" else spearman_value,
        auroc=auroc_value,
        spearman=spearman_value,
    )


# --------------------------------------------------------------------------
# Search space
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterBound:
    name: str
    low: float
    high: float


def default_parameter_space() -> tuple[ParameterBound, ...]:
    """The searched surface: 21 scalar knobs with bracketing bounds."""
    bounds: list[ParameterBound] = []
    bounds.extend(ParameterBound(f"global.{name}", 0.0, 2.0) for name in METRIC_NAMES)
    bounds.extend(
        ParameterBound(f"edge.{name}", 0.0, 2.0)
        for name in ("role_prior", "parent_quality", "child_quality", "alignment", "synergy")
    )
    bounds.append(ParameterBound("propagation.alpha", 0.0, 3.0))
    bounds.append(ParameterBound("propagation.eta", 0.5, 1.0))
    bounds.append(ParameterBound("propagation.softmin_beta", 0.0, 20.0))
    bounds.append(ParameterBound("propagation.dampmin_lambda", 0.0, 1.0))
    bounds.extend(ParameterBound(f"component.{name}", -0.5, 0.5) for name in COMPONENT_NAMES)
    return tuple(bounds)


def config_to_vector(config: ScoreConfig, space: Sequence[ParameterBound]) -> list[float]:
    values = []
    for bound in space:
        group, _, name = bound.name.partition(".")
        if group == "global":
            values.append(config.global_metric_weights[METRIC_NAMES.index(name)])
        elif group == "edge":
            values.append(getattr(config.edge_weights, name))
        elif group == "propagation":
            values.append(getattr(config.propagation, name))
        elif group == "component":
            values.append(getattr(config.component_weights, name))
        else:
            raise ValueError(f"unknown parameter group in {bound.name!r}")
    return values


def vector_to_config(
    values: Sequence[float], space: Sequence[ParameterBound], base: ScoreConfig
) -> ScoreConfig:
    globals_ = list(base.global_metric_weights)
    edge = dict(base.edge_weights.to_dict())
    prop: dict[str, object] = {}
    comp = dict(base.component_weights.to_dict())
    for bound, value in zip(space, values):
        group, _, name = bound.name.partition(".")
        if group == "global":
            globals_[METRIC_NAMES.index(name)] = value
        elif group == "edge":
            edge[name] = value
        elif group == "propagation":
            prop[name] = value
        elif group == "component":
            comp[name] = value
    config = dataclasses.replace(
        base,
        global_metric_weights=tuple(globals_),
        edge_weights=EdgeWeights(**edge),
        component_weights=ComponentWeights(**comp),
    )
    if prop:
        config = with_propagation(config, **prop)
    return config


def _halton(index: int, base: int) -> float:
    result = 0.0
    fraction = 1.0 / base
    i = index
    while i > 0:
        result += fraction * (i % base)
        i //= base
        fraction /= base
    return result


_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
)


def halton_point(index: int, dimensions: int) -> list[float]:
    """Point ``index`` (1-based) of the Halton low-discrepancy sequence."""
    return [_halton(index, _PRIMES[d]) for d in range(dimensions)]


# --------------------------------------------------------------------------
# Staged search
# --------------------------------------------------------------------------

STAGES = ("dense", "refine", "sparse")


@dataclass(frozen=True)
class StageSpec:
    stage: str
    budget: int
    seed: int = 0
    locality_radius: float = 0.1
    space: tuple[ParameterBound, ...] = field(default_factory=default_parameter_space)

    def __post_init__(self) -> None:
        if self.stage not in STAGES:
            raise ValueError(f"stage must be one of {STAGES}, got {self.stage!r}")


@dataclass(frozen=True)
class TraceEntry:
    stage: str
    index: int
    params: dict[str, float]
    fingerprint: str
    objective: float
    auroc: float
    spearman: float
    accepted: bool

    def to_dict(self) -> dict[str, object]:
        return {
            "stage": self.stage,
            "index": self.index,
            "params": dict(self.params),
            "fingerprint": self.fingerprint,
            "objective": self.objective,
            "auroc": self.auroc,
            "spearman": self.spearman,
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class StageResult:
    best_config: ScoreConfig
    objective_value: float
    evaluation: Evaluation
    trace: tuple[TraceEntry, ...]


def _candidates_for_stage(
    spec: StageSpec, incumbent_vector: Optional[list[float]]
) -> Iterable[list[float]]:
    space = spec.space
    if spec.stage == "dense":
        offset = 1 + spec.seed * spec.budget
        for i in range(spec.budget):
            unit = halton_point(offset + i, len(space))
            yield [b.low + u * (b.high - b.low) for b, u in zip(space, unit)]
        return
    if incumbent_vector is None:
        raise ValueError(f"{spec.stage} stage requires an incumbent configuration")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.stage == "refine":
        for _ in range(spec.budget):
            yield [
                min(b.high, max(b.low, x + rng.uniform(-1.0, 1.0) * spec.locality_radius
                                * (b.high - b.low)))
                for b, x in zip(space, incumbent_vector)
            ]
        return
    # sparse: one coordinate at a time, cycling deterministically
    for i in range(spec.budget):
        coordinate = i % len(space)
        bound = space[coordinate]
        moved = list(incumbent_vector)
        step = rng.uniform(-1.0, 1.0) * spec.locality_radius * (bound.high - bound.low)
        moved[coordinate] = min(bound.high, max(bound.low, moved[coordinate] + step))
        yield moved


def run_stage(
    corpus: LabeledCorpus,
    cache: Optional[TrialCache],
    spec: StageSpec,
    incumbent: Optional[ScoreConfig] = None,
    *,
    objective: str = "auroc",
) -> StageResult:
    """Run one search stage; never returns a config worse than the incumbent.

    Candidates are compared by (objective, the other metric as tie-breaker);
    on full ties the earlier candidate wins, so parallel evaluation order
    cannot change the argmax.
    """
    if spec.budget <= 0:
        raise BudgetZeroError(f"stage {spec.stage!r} started with budget {spec.budget}")
    if spec.stage != "dense" and incumbent is None:
        raise ValueError(f"{spec.stage} stage requires an incumbent configuration")
    cache = cache if cache is not None else TrialCache()

    base = incumbent if incumbent is not None else default_config()
    trace: list[TraceEntry] = []

    best_config: Optional[ScoreConfig] = None
    best_key: Optional[tuple[float, float]] = None
    best_eval: Optional[Evaluation] = None

    def consider(stage: str, index: int, config: ScoreConfig, params: dict[str, float]) -> None:
        nonlocal best_config, best_key, best_eval
        try:
            evaluation = evaluate_config(corpus, config, cache, objective)
        except Exception:
            return  # degenerate candidate (e.g. all-zero component weights)
        tie_breaker = evaluation.spearman if objective == "auroc" else evaluation.auroc
        key = (evaluation.objective, tie_breaker)
        accepted = best_key is None or key > best_key
        trace.append(
            TraceEntry(
                stage=stage,
                index=index,
                params=params,
                fingerprint=config.fingerprint(),
                objective=evaluation.objective,
                auroc=evaluation.auroc,
                spearman=evaluation.spearman,
                accepted=accepted,
            )
        )
        if accepted:
            best_config, best_key, best_eval = config, key, evaluation

    incumbent_vector = config_to_vector(base, spec.space) if incumbent is not None else None
    if incumbent is not None:
        consider(spec.stage, -1, incumbent, dict(zip((b.name for b in spec.space),
                                                     incumbent_vector)))
    for i, vector in enumerate(_candidates_for_stage(spec, incumbent_vector)):
        params = dict(zip((b.name for b in spec.space), vector))
        consider(spec.stage, i, vector_to_config(vector, spec.space, base), params)

    if best_config is None:
        raise NoValidTrialsError("no candidate produced a valid evaluation")
    return StageResult(
        best_config=best_config,
        objective_value=best_key[0],
        evaluation=best_eval,
        trace=tuple(trace),
    )


def run_stages(
    corpus: LabeledCorpus,
    cache: Optional[TrialCache],
    specs: Sequence[StageSpec],
    *,
    objective: str = "auroc",
    initial_incumbent: Optional[ScoreConfig] = None,
) -> list[StageResult]:
    """Chain stages, feeding each stage's best config to the next.

    ``initial_incumbent`` (typically the untuned base configuration) seeds
    the first stage so calibration can never end below the baseline.
    """
    cache = cache if cache is not None else TrialCache()
    incumbent = initial_incumbent
    results: list[StageResult] = []
    for spec in specs:
        result = run_stage(corpus, cache, spec, incumbent, objective=objective)
        results.append(result)
        incumbent = result.best_config
    return results


# --------------------------------------------------------------------------
# Ablation
# --------------------------------------------------------------------------

ABLATION_DIMENSIONS = ("metric", "role", "edge_feature", "propagation", "component")


def _ablation_variants(config: ScoreConfig, dimension: str):
    if dimension == "metric":
        for index, name in enumerate(METRIC_NAMES):
            weights = list(config.global_metric_weights)
            weights[index] = 0.0
            yield name, dataclasses.replace(config, global_metric_weights=tuple(weights))
    elif dimension == "role":
        for role in ROLES:
            weights = dict(config.role_quality_weights)
            weights[role] = (0.0,) * 6  # all-zero vector: quality falls back to the mean
            yield role, dataclasses.replace(config, role_quality_weights=weights)
    elif dimension == "edge_feature":
        for name in ("role_prior", "parent_quality", "child_quality", "alignment", "synergy"):
            edge = dict(config.edge_weights.to_dict())
            edge[name] = 0.0
            yield name, dataclasses.replace(config, edge_weights=EdgeWeights(**edge))
    elif dimension == "propagation":
        yield "enabled", with_propagation(config, enabled=False)
        yield "alpha", with_propagation(config, alpha=0.0)
        yield "eta", with_propagation(config, eta=1.0)
        yield "agg_mode", with_propagation(config, agg_mode="mean")
    elif dimension == "component":
        for name in COMPONENT_NAMES:
            comp = dict(config.component_weights.to_dict())
            comp[name] = 0.0
            yield name, dataclasses.replace(config, component_weights=ComponentWeights(**comp))
    else:
        raise UnknownDimensionError(
            f"dimension must be one of {ABLATION_DIMENSIONS}, got {dimension!r}"
        )


@dataclass(frozen=True)
class AblationRow:
    dimension: str
    element: str
    objective: float
    delta: float

    def to_dict(self) -> dict[str, object]:
        return {
            "dimension": self.dimension,
            "element": self.element,
            "objective": self.objective,
            "delta": self.delta,
        }


def ablate(
    corpus: LabeledCorpus,
    cache: Optional[TrialCache],
    config: ScoreConfig,
    dimension: str,
    *,
    objective: str = "auroc",
) -> list[AblationRow]:
    """Neutralize one element at a time and report objective deltas.

    One row per element of the chosen dimension; re-scoring reuses the cache
    wherever the ablated configuration's fingerprint has been seen before.
    """
    if dimension not in ABLATION_DIMENSIONS:
        raise UnknownDimensionError(
            f"dimension must be one of {ABLATION_DIMENSIONS}, got {dimension!r}"
        )
    cache = cache if cache is not None else TrialCache()
    baseline = evaluate_config(corpus, config, cache, objective).objective
    rows = []
    for element, variant in _ablation_variants(config, dimension):
        value = evaluate_config(corpus, variant, cache, objective).objective
        rows.append(
            AblationRow(dimension=dimension, element=element, objective=value,
                        delta=value - baseline)
        )
    return rows


# --------------------------------------------------------------------------
# Synthetic corpus
# --------------------------------------------------------------------------

_MIDDLE_ROLES = ("Claim", "Evidence", "Method", "Result", "Context", "Assumption")


def _synthetic_graph(rng: np.random.Generator, max_nodes: int) -> KnowledgeGraph:
    """A random valid DAG: Hypothesis root, Conclusion sink, plausible middles.

    Ids ascend along edges, so acyclicity holds by construction, and every
    node is reachable from the root, so the bridge is never empty.
    """
    n = int(rng.integers(5, max_nodes + 1))
    roles = ["Hypothesis"]
    for _ in range(n - 2):
        roles.append(_MIDDLE_ROLES[int(rng.integers(len(_MIDDLE_ROLES)))])
    roles.append("Conclusion")

    parents: dict[int, set[int]] = {0: set()}
    for i in range(1, n):
        count = 1 + int(rng.integers(0, min(3, i)))
        chosen = rng.choice(i, size=min(count, i), replace=False)
        parents[i] = {int(p) for p in chosen}

    children: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, parent_ids in parents.items():
        for p in parent_ids:
            children[p].add(i)

    texts = [f"statement {i} " + " ".join(f"tok{int(t)}" for t in rng.integers(0, 50, size=6))
             for i in range(n)]
    nodes = {
        i: Node(
            id=i,
            text=texts[i],
            role=roles[i],
            parents=frozenset(parents[i]),
            children=frozenset(children[i]),
        )
        for i in range(n)
    }
    return KnowledgeGraph(nodes=nodes)


def _label_metric_mean(label: str, separation: float) -> float:
    shift = {"Good": separation / 2.0, "Neutral": 0.0, "Bad": -separation / 2.0}[label]
    return min(0.95, max(0.05, 0.5 + shift))


def generate_synthetic_corpus(
    seed: int,
    n_papers: int,
    separation: float,
    *,
    k_dag_samples: int = 3,
    max_nodes: int = 12,
    concentration: float = 6.0,
) -> LabeledCorpus:
    """A desk-scale labeled corpus with a planted label-score signal.

    Labels cycle Good/Neutral/Bad. Metrics are Beta-distributed with the
    mean shifted up by ``separation``/2 for Good papers and down for Bad
    ones; ``separation`` 0 plants no signal at all. The K structural samples
    are drawn once and shared by every paper (a paired design), so label
    separation is carried by the metrics alone rather than by structural
    luck. Fully seed-deterministic.
    """
    if n_papers < 4:
        raise ValueError("n_papers must be at least 4")
    if separation < 0.0:
        raise ValueError("separation must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    structures = [_synthetic_graph(rng, max_nodes) for _ in range(k_dag_samples)]
    papers = []
    for index in range(n_papers):
        label = LABELS[::-1][index % 3]  # Good, Neutral, Bad, ...
        mean = _label_metric_mean(label, separation)
        a = mean * concentration
        b = (1.0 - mean) * concentration
        samples = []
        for graph in structures:
            metrics = {
                i: MetricVector(*(float(min(1.0, max(0.0, x)))
                                  for x in rng.beta(a, b, size=6)))
                for i in graph.node_ids
            }
            samples.append(DagSample(graph=graph, metrics=metrics))
        papers.append(
            CorpusPaper(paper_id=f"paper-{index:04d}", label=label, dag_samples=tuple(samples))
        )
    return LabeledCorpus(papers=tuple(papers), seed=seed)


# --------------------------------------------------------------------------
# Corpus directory format
# --------------------------------------------------------------------------


def save_corpus(corpus: LabeledCorpus, directory) -> None:
    """Write the corpus as a manifest plus one document per paper."""
    papers_dir = os.path.join(directory, "papers")
    os.makedirs(papers_dir, exist_ok=True)
    manifest = {
        "schema_version": corpus.schema_version,
        "seed": corpus.seed,
        "n_papers": len(corpus.papers),
        "papers": [],
    }
    for paper in corpus.papers:
        filename = f"{paper.paper_id}.json"
        manifest["papers"].append(
            {"paper_id": paper.paper_id, "label": paper.label, "file": f"papers/{filename}"}
        )
        document = {
            "schema_version": corpus.schema_version,
            "paper_id": paper.paper_id,
            "label": paper.label,
            "dag_samples": [
                {
                    "graph": sample.graph.to_document(),
                    "metrics": {str(i): m.to_dict() for i, m in sorted(sample.metrics.items())},
                }
                for sample in paper.dag_samples
            ],
        }
        with open(os.path.join(papers_dir, filename), "w", encoding="utf-8") as handle:
            json.dump(document, handle, indent=2)
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)


def load_corpus(directory) -> LabeledCorpus:
    from .graph import parse_graph

    with open(os.path.join(directory, "manifest.json"), "r", encoding="utf-8") as handle:
        manifest = json.load(handle)
    papers = []
    for entry in manifest["papers"]:
        with open(os.path.join(directory, entry["file"]), "r", encoding="utf-8") as handle:
            document = json.load(handle)
        samples = tuple(
            DagSample(
                graph=parse_graph(sample["graph"]),
                metrics={
                    int(node_id): MetricVector.from_mapping(values)
                    for node_id, values in sample["metrics"].items()
                },
            )
            for sample in document["dag_samples"]
        )
        papers.append(
            CorpusPaper(paper_id=document["paper_id"], label=document["label"],
                        dag_samples=samples)
        )
    return LabeledCorpus(papers=tuple(papers), seed=manifest.get("seed"))


def write_trace(trace: Iterable[TraceEntry], path) -> None:
    """Append-only JSONL record stream of the evaluation trace."""
    with open(path, "w", encoding="utf-8") as handle:
        for entry in trace:
            handle.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
