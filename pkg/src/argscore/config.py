"""The learnable parameter surface of the scorer, with documented defaults.

Every knob the scoring math reads lives here: global per-metric weights,
role-specific quality weights, edge-feature combination weights, role
transition priors, role-pair synergy mixes, trust-propagation parameters,
and graph-level component weights. Serialized configuration documents carry
a required ``schema_version`` string; omitted fields take the defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .graph import METRIC_NAMES, ROLES

CONFIG_SCHEMA_VERSION = "1"

AGG_MODES = ("min", "mean", "softmin", "dampmin")

#: Component names in fixed order, matching report serialization.
COMPONENT_NAMES = (
    "bridge_coverage",
    "best_path_reliability",
    "redundancy",
    "fragility",
    "coherence",
    "coverage",
)

# Default role-specific node-quality weights, one six-vector per role, in
# metric order (credibility, relevance, evidence_strength, method_rigor,
# reproducibility, citation_support).
DEFAULT_ROLE_QUALITY_WEIGHTS: dict[str, tuple[float, ...]] = {
    "Hypothesis": (0.50, 0.50, 0.00, 0.00, 0.00, 0.00),
    "Conclusion": (0.60, 0.40, 0.00, 0.00, 0.00, 0.00),
    "Claim": (0.45, 0.35, 0.20, 0.00, 0.00, 0.00),
    "Evidence": (0.20, 0.00, 0.50, 0.00, 0.00, 0.30),
    "Method": (0.10, 0.00, 0.00, 0.60, 0.30, 0.00),
    "Result": (0.40, 0.30, 0.30, 0.00, 0.00, 0.00),
    "Assumption": (0.60, 0.40, 0.00, 0.00, 0.00, 0.00),
    "Counterevidence": (0.20, 0.00, 0.50, 0.00, 0.00, 0.30),
    "Limitation": (0.50, 0.50, 0.00, 0.00, 0.00, 0.00),
    "Context": (0.40, 0.60, 0.00, 0.00, 0.00, 0.00),
}

# Non-default role transition priors; unspecified pairs default to 0.5.
DEFAULT_ROLE_PRIORS: dict[tuple[str, str], float] = {
    ("Hypothesis", "Claim"): 0.75,
    ("Hypothesis", "Evidence"): 0.75,
    ("Hypothesis", "Method"): 0.50,
    ("Hypothesis", "Result"): 0.25,
    ("Hypothesis", "Conclusion"): 0.25,
    ("Evidence", "Result"): 1.00,
    ("Evidence", "Claim"): 0.50,
    ("Evidence", "Conclusion"): 0.75,
    ("Method", "Result"): 0.75,
    ("Method", "Evidence"): 0.50,
    ("Result", "Conclusion"): 0.75,
    ("Claim", "Conclusion"): 0.50,
    ("Claim", "Evidence"): 0.50,
    ("Context", "Claim"): 0.50,
    ("Assumption", "Claim"): 0.50,
    ("Assumption", "Method"): 0.50,
    ("Counterevidence", "Claim"): 0.75,
    ("Counterevidence", "Conclusion"): 0.75,
}


def _mix(**named: float) -> tuple[float, ...]:
    short = {
        "cred": "credibility",
        "rel": "relevance",
        "evid": "evidence_strength",
        "rigor": "method_rigor",
        "repr": "reproducibility",
        "cite": "citation_support",
    }
    values = {name: 0.0 for name in METRIC_NAMES}
    for key, weight in named.items():
        values[short[key]] = weight
    return tuple(values[name] for name in METRIC_NAMES)


@dataclass(frozen=True)
class SynergySpec:
    """Role-pair-specific parent/child metric mixes for the synergy feature."""

    parent_mix: tuple[float, ...]
    child_mix: tuple[float, ...]


# Role pairs with explicit synergy mixes; unspecified pairs fall back to an
# equal-weight average of the parent and child metric means.
DEFAULT_SYNERGY_SPECS: dict[tuple[str, str], SynergySpec] = {
    ("Evidence", "Claim"): SynergySpec(_mix(evid=0.5, cite=0.3, cred=0.2), _mix(cred=0.6, rel=0.4)),
    ("Evidence", "Result"): SynergySpec(_mix(evid=0.5, cite=0.3, cred=0.2), _mix(cred=0.5, rel=0.5)),
    ("Evidence", "Conclusion"): SynergySpec(_mix(evid=0.5, cite=0.4, cred=0.1), _mix(cred=0.7, rel=0.3)),
    ("Method", "Result"): SynergySpec(_mix(rigor=0.6, repr=0.3, cred=0.1), _mix(cred=0.6, rel=0.4)),
    ("Hypothesis", "Claim"): SynergySpec(_mix(cred=0.3, rel=0.7), _mix(cred=0.6, rel=0.4)),
    ("Hypothesis", "Evidence"): SynergySpec(_mix(cred=0.4, rel=0.6), _mix(cred=0.5, rel=0.5)),
    ("Claim", "Conclusion"): SynergySpec(_mix(cred=0.6, rel=0.4), _mix(cred=0.7, rel=0.3)),
}


@dataclass(frozen=True)
class PropagationParams:
    """Trust propagation and edge gating knobs.

    ``alpha`` is the exponent on parent trust (negative values are clamped to
    0); ``eta`` floors the edge-gating factor so upstream uncertainty cannot
    zero out descendants; ``softmin_beta`` and ``dampmin_lambda`` control the
    respective aggregation modes.
    """

    enabled: bool = True
    agg_mode: str = "min"
    alpha: float = 1.0
    eta: float = 2.0 ** (-1.0 / 8.0)
    softmin_beta: float = 6.0
    dampmin_lambda: float = 0.35

    def __post_init__(self) -> None:
        if self.agg_mode not in AGG_MODES:
            raise ValueError(f"agg_mode must be one of {AGG_MODES}, got {self.agg_mode!r}")
        object.__setattr__(self, "alpha", max(0.0, float(self.alpha)))
        for name, lo, hi in (
            ("eta", 0.0, 1.0),
            ("dampmin_lambda", 0.0, 1.0),
        ):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < lo or value > hi:
                raise ValueError(f"{name} must lie in [{lo}, {hi}], got {value!r}")
            object.__setattr__(self, name, value)
        beta = float(self.softmin_beta)
        if not math.isfinite(beta) or beta < 0.0:
            raise ValueError(f"softmin_beta must be >= 0, got {beta!r}")
        object.__setattr__(self, "softmin_beta", beta)

    def to_dict(self) -> dict[str, object]:
        return {
            "enabled": self.enabled,
            "agg_mode": self.agg_mode,
            "alpha": self.alpha,
            "eta": self.eta,
            "softmin_beta": self.softmin_beta,
            "dampmin_lambda": self.dampmin_lambda,
        }


@dataclass(frozen=True)
class EdgeWeights:
    """Mixing weights for the five raw edge-confidence features."""

    role_prior: float = 0.30
    parent_quality: float = 0.20
    child_quality: float = 0.20
    alignment: float = 0.10
    synergy: float = 0.20

    def to_dict(self) -> dict[str, float]:
        return {
            "role_prior": self.role_prior,
            "parent_quality": self.parent_quality,
            "child_quality": self.child_quality,
            "alignment": self.alignment,
            "synergy": self.synergy,
        }


@dataclass(frozen=True)
class ComponentWeights:
    """Graph-level aggregation weights; negative values encode penalties."""

    bridge_coverage: float = 0.25
    best_path_reliability: float = 0.25
    redundancy: float = 0.15
    fragility: float = -0.15
    coherence: float = 0.10
    coverage: float = 0.10

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in COMPONENT_NAMES)

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in COMPONENT_NAMES}


@dataclass(frozen=True)
class ScoreConfig:
    """The full scorer parameter surface. Immutable; derive variants with
    :func:`dataclasses.replace` or the helpers in :mod:`argscore.calibration`.
    """

    global_metric_weights: tuple[float, ...] = (1.0,) * 6
    role_quality_weights: Mapping[str, tuple[float, ...]] = field(
        default_factory=lambda: dict(DEFAULT_ROLE_QUALITY_WEIGHTS)
    )
    edge_weights: EdgeWeights = EdgeWeights()
    role_priors: Mapping[tuple[str, str], float] = field(
        default_factory=lambda: dict(DEFAULT_ROLE_PRIORS)
    )
    synergy_specs: Mapping[tuple[str, str], SynergySpec] = field(
        default_factory=lambda: dict(DEFAULT_SYNERGY_SPECS)
    )
    propagation: PropagationParams = PropagationParams()
    component_weights: ComponentWeights = ComponentWeights()
    epsilon: float = 1e-9
    default_raw_conf: float = 0.5
    endpoint_epsilon: float = 1e-6
    schema_version: str = CONFIG_SCHEMA_VERSION

    def __post_init__(self) -> None:
        if len(self.global_metric_weights) != 6:
            raise ValueError("global_metric_weights must have six entries")
        for value in self.global_metric_weights:
            if not math.isfinite(value) or value < 0.0:
                raise ValueError("global metric weights must be finite and non-negative")
        for role, weights in self.role_quality_weights.items():
            if len(weights) != 6 or any(not math.isfinite(w) or w < 0.0 for w in weights):
                raise ValueError(f"role weights for {role!r} must be six non-negative reals")
        for pair, prior in self.role_priors.items():
            if not 0.0 <= prior <= 1.0:
                raise ValueError(f"role prior for {pair} must lie in [0, 1]")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError("epsilon must be a small positive real")
        if not 0.0 <= self.default_raw_conf <= 1.0:
            raise ValueError("default_raw_conf must lie in [0, 1]")
        if not (0.0 < self.endpoint_epsilon < 0.5):
            raise ValueError("endpoint_epsilon must lie in (0, 0.5)")

    def role_prior(self, role_u: Optional[str], role_v: Optional[str]) -> float:
        """Transition prior for a role pair; unspecified pairs default to 0.5."""
        return self.role_priors.get((role_u, role_v), 0.5)

    def to_dict(self) -> dict[str, object]:
        return {
            "schema_version": self.schema_version,
            "global_metric_weights": list(self.global_metric_weights),
            "role_quality_weights": {
                role: list(weights) for role, weights in sorted(self.role_quality_weights.items())
            },
            "edge_weights": self.edge_weights.to_dict(),
            "role_priors": {
                f"{u}->{v}": prior for (u, v), prior in sorted(self.role_priors.items())
            },
            "synergy_specs": {
                f"{u}->{v}": {
                    "parent_mix": list(spec.parent_mix),
                    "child_mix": list(spec.child_mix),
                }
                for (u, v), spec in sorted(self.synergy_specs.items())
            },
            "propagation": self.propagation.to_dict(),
            "component_weights": self.component_weights.to_dict(),
            "epsilon": self.epsilon,
            "default_raw_conf": self.default_raw_conf,
            "endpoint_epsilon": self.endpoint_epsilon,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def fingerprint(self) -> str:
        """Stable hash of the full parameter surface (canonical JSON, sha256)."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def default_config() -> ScoreConfig:
    return ScoreConfig()


def _split_pair(key: str) -> tuple[str, str]:
    if "->" not in key:
        raise ValueError(f"role-pair key {key!r} must look like 'Parent->Child'")
    u, v = key.split("->", 1)
    return u, v


def config_from_dict(data: Mapping[str, object]) -> ScoreConfig:
    """Build a ScoreConfig from a configuration document.

    The document must carry ``schema_version``; any omitted field takes the
    documented default. Unknown keys are rejected to catch typos early.
    """
    if "schema_version" not in data:
        raise ValueError("configuration document must carry a 'schema_version' string")
    known = {
        "schema_version",
        "global_metric_weights",
        "role_quality_weights",
        "edge_weights",
        "role_priors",
        "synergy_specs",
        "propagation",
        "component_weights",
        "epsilon",
        "default_raw_conf",
        "endpoint_epsilon",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown configuration key(s): {sorted(unknown)}")

    kwargs: dict[str, object] = {"schema_version": str(data["schema_version"])}
    if "global_metric_weights" in data:
        kwargs["global_metric_weights"] = tuple(float(x) for x in data["global_metric_weights"])
    if "role_quality_weights" in data:
        merged = dict(DEFAULT_ROLE_QUALITY_WEIGHTS)
        for role, weights in data["role_quality_weights"].items():
            merged[role] = tuple(float(x) for x in weights)
        kwargs["role_quality_weights"] = merged
    if "edge_weights" in data:
        kwargs["edge_weights"] = EdgeWeights(**{k: float(v) for k, v in data["edge_weights"].items()})
    if "role_priors" in data:
        merged_priors = dict(DEFAULT_ROLE_PRIORS)
        for key, prior in data["role_priors"].items():
            merged_priors[_split_pair(key)] = float(prior)
        kwargs["role_priors"] = merged_priors
    if "synergy_specs" in data:
        merged_specs = dict(DEFAULT_SYNERGY_SPECS)
        for key, spec in data["synergy_specs"].items():
            merged_specs[_split_pair(key)] = SynergySpec(
                parent_mix=tuple(float(x) for x in spec["parent_mix"]),
                child_mix=tuple(float(x) for x in spec["child_mix"]),
            )
        kwargs["synergy_specs"] = merged_specs
    if "propagation" in data:
        kwargs["propagation"] = PropagationParams(**dict(data["propagation"]))
    if "component_weights" in data:
        kwargs["component_weights"] = ComponentWeights(
            **{k: float(v) for k, v in data["component_weights"].items()}
        )
    for scalar in ("epsilon", "default_raw_conf", "endpoint_epsilon"):
        if scalar in data:
            kwargs[scalar] = float(data[scalar])
    return ScoreConfig(**kwargs)


def load_config(text: str) -> ScoreConfig:
    """Parse a JSON configuration document (see :func:`config_from_dict`)."""
    return config_from_dict(json.loads(text))


def with_propagation(config: ScoreConfig, **changes: object) -> ScoreConfig:
    """Convenience: a copy of ``config`` with propagation fields replaced."""
    return replace(config, propagation=replace(config.propagation, **changes))
