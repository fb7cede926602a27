"""Core domain types shared by the demography, beliefs, network, engine and
experiment modules.

All types are plain value objects; behaviour lives in the other modules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields


class ConfigurationError(Exception):
    """Raised for invalid society configurations or config-file contents."""


class MetaRole(enum.Enum):
    """The four meta-roles an organisation member can hold.

    Commander makes or revises rules, Knowledge monitors and reports,
    Skill interprets rules (judging), Worker performs basic jobs.
    """

    COMMANDER = "C"
    KNOWLEDGE = "K"
    SKILL = "S"
    WORKER = "W"


class AgentStatus(enum.Enum):
    NEW = "new"
    EXPERIENCED = "experienced"


@dataclass(slots=True)
class RoleSet:
    """Formal role plus self-adopted (internalised) roles.

    Skill never appears as a formal role: judging exists only as an
    internalised activity in this model.
    """

    formal: MetaRole
    internalised: set[MetaRole] = field(default_factory=set)

    def __post_init__(self) -> None:
        if self.formal is MetaRole.SKILL:
            raise ValueError("Skill cannot be a formal role")

    def effective(self) -> set[MetaRole]:
        """Roles the agent actually performs: formal plus internalised."""
        return {self.formal} | self.internalised

    def internalise(self, role: MetaRole) -> None:
        self.internalised.add(role)

    def drop_internalised(self, role: MetaRole) -> None:
        self.internalised.discard(role)


def clamp_belief(value: float) -> float:
    """Clamp a perception index to the canonical [-1, 1] range."""
    if value > 1.0:
        return 1.0
    if value < -1.0:
        return -1.0
    return value


@dataclass(slots=True)
class Beliefs:
    """An agent's perception of the system, both indices in [-1, 1]."""

    perceived_fairness: float
    perceived_environment: float


@dataclass(slots=True)
class Thresholds:
    """Personal tolerances sampled once at hire.

    dissonance, environment, fairness and justification thresholds live in
    [0, 1].  report_tolerance is the violation cost above which a volunteer
    monitor reports a friend; tol_punish is the cost above which a manager
    punishes a reported agent (managers only, 0 otherwise).
    """

    dissonance: float
    environment: float
    fairness: float
    justification: float
    report_tolerance: float
    tol_punish: float = 0.0


@dataclass(slots=True)
class Agent:
    """One organisation member."""

    id: int
    roles: RoleSet
    status: AgentStatus
    experience: int
    beliefs: Beliefs
    thresholds: Thresholds
    private_trade: bool = False
    volunteer_monitor: bool = False
    violation_cost_this_year: float = 0.0
    friends: set[int] = field(default_factory=set)
    alive: bool = True

    @property
    def age(self) -> int:
        """Agents join at 15; age advances with experience."""
        return self.experience + 15


class MortalityKind(enum.Enum):
    HARSH = "harsh"
    BENIGN = "benign"


# Gompertz parameters frozen by the calibration oracle (see demography):
# harsh yields mean death age ~35.0, benign ~70.0 over simulated lifetimes.
_HARSH_SCALE, _HARSH_GROWTH = 0.0136, 0.08
_BENIGN_SCALE, _BENIGN_GROWTH = 0.000227, 0.10


@dataclass(frozen=True, slots=True)
class MortalityProfile:
    """Per-year death hazard curve: min(1, scale * exp(growth * (age - 15))),
    forced to 1 at cap_age so nobody is immortal.
    """

    kind: MortalityKind
    hazard_scale: float
    hazard_growth: float
    cap_age: int = 90

    @classmethod
    def harsh(cls) -> "MortalityProfile":
        return cls(MortalityKind.HARSH, _HARSH_SCALE, _HARSH_GROWTH)

    @classmethod
    def benign(cls) -> "MortalityProfile":
        return cls(MortalityKind.BENIGN, _BENIGN_SCALE, _BENIGN_GROWTH)


SOCIETY_LABELS = ("E0F0", "E0F1", "E1F0", "E1F1")

FAIR_CONSTANT = 0.6
UNFAIR_CONSTANT = -0.4


@dataclass(slots=True)
class SocietyConfig:
    """Full parameter set for one simulated society."""

    label: str
    environment_benign: bool
    institutions_fair: bool
    fairness_constant: float
    mortality: MortalityProfile
    population: int = 500
    director_fraction: float = 0.02
    manager_fraction: float = 0.05
    board_size: int = 11
    vote_threshold: float = 0.70
    reform_year: int = 70
    total_years: int = 250
    max_punish: int = 5
    fired_fraction: float = 0.30
    past_weight: float = 0.30
    network_degree: int = 10
    monitoring_init_prob: float = 0.5
    experience_gate: int = 3
    report_tolerance_max: float = 50.0
    wage_cut_penalty: float = 0.1
    residual_violation_prob: float = 0.05
    observation_noise: float = 0.1
    literal_justif_comparison: bool = False

    @property
    def n_directors(self) -> int:
        return self.board_size

    @property
    def n_managers(self) -> int:
        return round(self.manager_fraction * self.population)

    @property
    def n_workers(self) -> int:
        return self.population - self.n_directors - self.n_managers

    def validate(self) -> None:
        if self.population <= 0:
            raise ConfigurationError("population must be positive")
        if self.director_fraction + self.manager_fraction >= 1.0:
            raise ConfigurationError(
                "director_fraction + manager_fraction must be below 1"
            )
        if self.n_workers <= 0:
            raise ConfigurationError(
                f"population {self.population} cannot staff {self.n_directors} "
                f"directors and {self.n_managers} managers"
            )
        if not 0.0 < self.vote_threshold <= 1.0:
            raise ConfigurationError("vote_threshold must be in (0, 1]")
        if not -1.0 <= self.fairness_constant <= 1.0:
            raise ConfigurationError("fairness_constant must be in [-1, 1]")
        for name in ("fired_fraction", "past_weight", "monitoring_init_prob",
                     "residual_violation_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1]")
        if self.network_degree < 0:
            raise ConfigurationError("network_degree must be non-negative")
        if self.report_tolerance_max < 0:
            raise ConfigurationError("report_tolerance_max must be non-negative")
        if self.max_punish < 0:
            raise ConfigurationError("max_punish must be non-negative")
        if not 0 <= self.reform_year < self.total_years:
            raise ConfigurationError("reform_year must fall inside the run")


def default_config(society: str) -> SocietyConfig:
    """Built-in defaults for one of the four society labels.

    The label encodes the two binary characteristics: E1 benign environment,
    F1 fair institutions (E0/F0 their harsh/unfair counterparts).
    """
    if society not in SOCIETY_LABELS:
        raise ConfigurationError(
            f"unknown society label {society!r}; expected one of {', '.join(SOCIETY_LABELS)}"
        )
    benign = society[1] == "1"
    fair = society[3] == "1"
    return SocietyConfig(
        label=society,
        environment_benign=benign,
        institutions_fair=fair,
        fairness_constant=FAIR_CONSTANT if fair else UNFAIR_CONSTANT,
        mortality=MortalityProfile.benign() if benign else MortalityProfile.harsh(),
    )


def config_field_names() -> tuple[str, ...]:
    """Names of the overridable SocietyConfig fields (used by the CLI)."""
    return tuple(f.name for f in fields(SocietyConfig))


@dataclass(slots=True)
class YearlyStats:
    """Aggregates recorded at the end of each simulated year."""

    year: int
    pct_cheaters_fired: float
    pct_volunteer_monitors: float
    n_private_traders: int
    permission_granted: bool
    n_deaths: int
    n_fired: int


@dataclass(slots=True)
class RunResult:
    """Full time series and terminal outcomes of one seeded run."""

    seed: int
    society_label: str
    series: list[YearlyStats]
    permission_ever_granted: bool
    permission_year: int | None
