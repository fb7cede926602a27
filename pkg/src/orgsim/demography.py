"""Mortality, hiring and promotion mechanics.

Deaths follow a Gompertz-style per-year hazard; promotions always pick the
most experienced candidates (ties broken by lowest id) so the whole pipeline
is deterministic given the run's random stream.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from random import Random
from typing import TYPE_CHECKING

from .types import (
    Agent,
    AgentStatus,
    Beliefs,
    MetaRole,
    MortalityProfile,
    RoleSet,
    SocietyConfig,
    Thresholds,
)
from . import network

if TYPE_CHECKING:
    from .engine import SocietyState

log = logging.getLogger(__name__)

MIN_AGE = 15


def mortality_probability(age: int, profile: MortalityProfile) -> float:
    """Per-year death probability at the given age.

    Raises ValueError below the minimum age; returns 1.0 at the cap age.
    """
    if age < MIN_AGE:
        raise ValueError(f"age {age} below minimum age {MIN_AGE}")
    if age >= profile.cap_age:
        return 1.0
    return min(1.0, profile.hazard_scale * math.exp(profile.hazard_growth * (age - MIN_AGE)))


@dataclass(frozen=True)
class HazardTable:
    """Precomputed hazard per age, indexed age -> probability."""

    profile: MortalityProfile
    per_age_hazard: dict[int, float]

    @classmethod
    def from_profile(cls, profile: MortalityProfile) -> "HazardTable":
        table = {
            age: mortality_probability(age, profile)
            for age in range(MIN_AGE, profile.cap_age + 1)
        }
        return cls(profile, table)

    def hazard(self, age: int) -> float:
        if age >= self.profile.cap_age:
            return 1.0
        return self.per_age_hazard[age]


def sample_death(agent: Agent, profile: MortalityProfile, rng: Random) -> bool:
    """Draw the agent's survival for this year.

    Consumes exactly one draw from the stream regardless of the hazard value.
    """
    return rng.random() < mortality_probability(agent.age, profile)


def sample_lifetime(
    profile: MortalityProfile, rng: Random, table: HazardTable | None = None
) -> int:
    """Simulate one full lifetime and return the death age.

    Mirrors the engine's yearly loop: experience ticks up, then death is
    checked at the post-increment age.
    """
    if table is None:
        table = HazardTable.from_profile(profile)
    experience = 0
    while True:
        experience += 1
        age = experience + MIN_AGE
        if rng.random() < table.hazard(age):
            return age


def mean_death_age(profile: MortalityProfile, lifetimes: int, seed: int = 0) -> float:
    """Brute-force mean death age over independently sampled lifetimes."""
    rng = Random(seed)
    table = HazardTable.from_profile(profile)
    total = 0
    for _ in range(lifetimes):
        total += sample_lifetime(profile, rng, table)
    return total / lifetimes


def _analytic_mean(scale: float, growth: float, cap_age: int) -> float:
    survival, total = 1.0, 0.0
    for age in range(MIN_AGE + 1, cap_age + 1):
        hazard = 1.0 if age >= cap_age else min(1.0, scale * math.exp(growth * (age - MIN_AGE)))
        total += survival * hazard * age
        survival *= 1.0 - hazard
        if survival < 1e-15:
            break
    return total


def expected_death_age(profile: MortalityProfile) -> float:
    """Mean death age implied analytically by the hazard curve."""
    return _analytic_mean(profile.hazard_scale, profile.hazard_growth, profile.cap_age)


def fit_hazard_scale(target_mean_age: float, growth: float, cap_age: int = 90) -> float:
    """Bisect the hazard scale until the analytic mean hits the target.

    The mean death age decreases monotonically in the scale.
    """
    lo, hi = 1e-8, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if _analytic_mean(mid, growth, cap_age) > target_mean_age:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def promote_to_manager(workers: list[Agent], n_vacancies: int) -> list[int]:
    """Promote the most experienced workers to the Knowledge role.

    Ties break on the lower id. If there are fewer workers than vacancies,
    all are promoted and the shortfall is logged.
    """
    if n_vacancies < 0:
        raise ValueError("n_vacancies must be non-negative")
    if n_vacancies > len(workers):
        log.warning(
            "manager shortfall: %d vacancies but only %d workers",
            n_vacancies, len(workers),
        )
    chosen = sorted(workers, key=lambda a: (-a.experience, a.id))[:n_vacancies]
    for agent in chosen:
        agent.roles.formal = MetaRole.KNOWLEDGE
    return [a.id for a in chosen]


def promote_to_director(managers: list[Agent], n_vacancies: int) -> list[int]:
    """Fill board vacancies from the most experienced managers."""
    if n_vacancies < 0:
        raise ValueError("n_vacancies must be non-negative")
    if n_vacancies > len(managers):
        log.warning(
            "director shortfall: %d vacancies but only %d managers",
            n_vacancies, len(managers),
        )
    chosen = sorted(managers, key=lambda a: (-a.experience, a.id))[:n_vacancies]
    for agent in chosen:
        agent.roles.formal = MetaRole.COMMANDER
    return [a.id for a in chosen]


def spawn_recruit(agent_id: int, config: SocietyConfig, rng: Random) -> Agent:
    """Create one new Worker with randomly initialised perceptions and
    thresholds.

    Draw order (fixed, part of the determinism contract): perceived fairness,
    perceived environment, then the five thresholds in declaration order,
    manager punish tolerance, and finally the initial monitoring coin flip.

    The report tolerance spans [0, report_tolerance_max] in violation-cost
    units: most monitors tolerate any single violation, only the strict tail
    (tolerance below the cost scale) ever reports.
    """
    beliefs = Beliefs(
        perceived_fairness=rng.uniform(-1.0, 1.0),
        perceived_environment=rng.uniform(-1.0, 1.0),
    )
    thresholds = Thresholds(
        dissonance=rng.random(),
        environment=rng.random(),
        fairness=rng.random(),
        justification=rng.random(),
        report_tolerance=rng.uniform(0.0, config.report_tolerance_max),
        tol_punish=rng.uniform(0.0, config.fired_fraction),
    )
    volunteer = rng.random() < config.monitoring_init_prob
    return Agent(
        id=agent_id,
        roles=RoleSet(MetaRole.WORKER),
        status=AgentStatus.NEW,
        experience=0,
        beliefs=beliefs,
        thresholds=thresholds,
        volunteer_monitor=volunteer,
    )


def replenish(state: "SocietyState") -> list[Agent]:
    """Restore staffing after last year's deaths and firings.

    Fills board vacancies from managers, manager vacancies from workers, and
    hires enough new Workers to return every formal role to its configured
    headcount. The cascade means the recruit count equals last year's
    attrition among workers and managers plus any board deaths.
    """
    config = state.config
    lookup = state.agents
    rng = state.rng

    c_gap = config.n_directors - len(state.director_ids)
    if c_gap > 0:
        managers = [lookup[i] for i in sorted(state.manager_ids)]
        for mid in promote_to_director(managers, c_gap):
            state.manager_ids.discard(mid)
            state.director_ids.add(mid)

    k_gap = config.n_managers - len(state.manager_ids)
    if k_gap > 0:
        workers = [lookup[i] for i in sorted(state.worker_ids)]
        for wid in promote_to_manager(workers, k_gap):
            state.worker_ids.discard(wid)
            state.manager_ids.add(wid)

    recruits: list[Agent] = []
    w_gap = config.n_workers - len(state.worker_ids)
    if w_gap > 0:
        alive_ids = sorted(state.worker_ids | state.manager_ids | state.director_ids)
        candidates = [lookup[i] for i in alive_ids]
        for _ in range(w_gap):
            recruit = spawn_recruit(state.next_id, config, rng)
            state.next_id += 1
            lookup[recruit.id] = recruit
            network.attach_recruit(recruit, candidates, config.network_degree, rng)
            state.worker_ids.add(recruit.id)
            candidates.append(recruit)
            recruits.append(recruit)
    return recruits
