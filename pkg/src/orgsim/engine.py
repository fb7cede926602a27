"""Simulation core: one deterministic yearly step over one society.

Each year executes fixed phases in a fixed order, all agent loops in
ascending id order, so a (config, seed) pair fully determines the run:

1. staffing: board vacancies filled from the most experienced managers,
   manager vacancies from the most experienced workers, then new workers
   hired until every formal role is back at its configured headcount;
2. violations: every alive agent draws this year's violation cost
   (private trading while forbidden, else a residual violation chance);
3. workers: monitoring/private-trade decisions, observation reports,
   learning, experience, mortality;
4. routing: each reported (violator, cost) item goes to one uniformly
   drawn alive manager;
5. managers: punishment of reported violators, learning, mortality;
6. directors: learning, mortality;
7. board reform: in the reform year only, the board votes on legalising
   private trade; on success the wage cut lowers the fairness constant;
8. per-year statistics.

Random draws per agent and phase are fixed (see the individual steps), so a
straight-line reference implementation consuming the same stream must
reproduce the stats exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Callable

from . import beliefs as beliefs_mod
from . import demography, network
from .beliefs import MonitoringDecision
from .types import (
    Agent,
    AgentStatus,
    MetaRole,
    RunResult,
    SocietyConfig,
    YearlyStats,
    clamp_belief,
)


class EngineError(RuntimeError):
    """Internal invariant violation (wrong-year reform, broken staffing)."""


@dataclass
class SocietyState:
    """Mutable state of one running society."""

    config: SocietyConfig
    rng: Random
    agents: dict[int, Agent]
    worker_ids: set[int]
    manager_ids: set[int]
    director_ids: set[int]
    hazard_by_age: list[float]
    environment_signal: float
    fairness_constant: float
    year: int = 0
    permission_private_trade: bool = False
    permission_year: int | None = None
    next_id: int = 0
    last_year_attrition: int = 0
    deaths_this_year: int = 0
    fired_this_year: int = 0

    @property
    def board(self) -> list[int]:
        return sorted(self.director_ids)

    def alive_ids(self) -> list[int]:
        return sorted(self.worker_ids | self.manager_ids | self.director_ids)

    def role_counts(self) -> tuple[int, int, int]:
        return len(self.director_ids), len(self.manager_ids), len(self.worker_ids)


def init_society(config: SocietyConfig, seed: int) -> SocietyState:
    """Create the initial population, assign roles by id, build the graph."""
    config.validate()
    rng = Random(seed)
    agents: dict[int, Agent] = {}
    for agent_id in range(config.population):
        agents[agent_id] = demography.spawn_recruit(agent_id, config, rng)

    director_ids = set(range(config.n_directors))
    manager_ids = set(range(config.n_directors, config.n_directors + config.n_managers))
    worker_ids = set(range(config.n_directors + config.n_managers, config.population))
    for agent_id in director_ids:
        agents[agent_id].roles.formal = MetaRole.COMMANDER
    for agent_id in manager_ids:
        agents[agent_id].roles.formal = MetaRole.KNOWLEDGE

    ordered = [agents[i] for i in range(config.population)]
    for agent_id in range(config.population):
        others = ordered[:agent_id] + ordered[agent_id + 1:]
        network.attach_recruit(agents[agent_id], others, config.network_degree, rng)

    table = demography.HazardTable.from_profile(config.mortality)
    hazard_by_age = [0.0] * (config.mortality.cap_age + 1)
    for age, hazard in table.per_age_hazard.items():
        hazard_by_age[age] = hazard

    return SocietyState(
        config=config,
        rng=rng,
        agents=agents,
        worker_ids=worker_ids,
        manager_ids=manager_ids,
        director_ids=director_ids,
        hazard_by_age=hazard_by_age,
        environment_signal=beliefs_mod.environment_signal(config.environment_benign),
        fairness_constant=config.fairness_constant,
        next_id=config.population,
    )


def _learn(state: SocietyState, agent: Agent) -> None:
    """Yearly belief update; consumes exactly one draw (observation noise)."""
    config = state.config
    amp = config.observation_noise
    noise = state.rng.uniform(-amp, amp)
    b = agent.beliefs
    b.perceived_fairness = beliefs_mod.update_belief(
        b.perceived_fairness,
        beliefs_mod.fairness_signal(state.fairness_constant, noise),
        config.past_weight,
    )
    b.perceived_environment = beliefs_mod.update_belief(
        b.perceived_environment, state.environment_signal, config.past_weight
    )


def _age_and_maybe_die(state: SocietyState, agent: Agent, role_ids: set[int]) -> None:
    """Experience tick plus the mortality draw (exactly one draw)."""
    agent.experience += 1
    agent.status = AgentStatus.EXPERIENCED
    if state.rng.random() < state.hazard_by_age[agent.age]:
        agent.alive = False
        network.detach_agent(agent, state.agents)
        role_ids.discard(agent.id)
        state.deaths_this_year += 1


def _fire(state: SocietyState, agent: Agent) -> None:
    agent.alive = False
    network.detach_agent(agent, state.agents)
    if agent.roles.formal is MetaRole.WORKER:
        state.worker_ids.discard(agent.id)
    else:
        state.manager_ids.discard(agent.id)
    state.fired_this_year += 1


def _check_staffing(state: SocietyState) -> None:
    config = state.config
    counts = state.role_counts()
    expected = (config.n_directors, config.n_managers, config.n_workers)
    if counts != expected:
        raise EngineError(
            f"year {state.year}: staffing {counts} != configured {expected}"
        )


def _draw_violations(state: SocietyState) -> int:
    """Assign this year's violation costs; returns the number of violators.

    A privately trading worker violates every year while trade is forbidden
    (one cost draw). Managers and directors do not trade themselves, so they
    and everyone else first draw the residual violation chance and, on a
    hit, a cost.
    """
    rng = state.rng
    lookup = state.agents
    residual = state.config.residual_violation_prob
    trading_forbidden = not state.permission_private_trade
    violators = 0
    for agent_id in state.alive_ids():
        agent = lookup[agent_id]
        if (
            agent.private_trade
            and trading_forbidden
            and agent.roles.formal is MetaRole.WORKER
        ):
            cost = rng.random()
        elif rng.random() < residual:
            cost = rng.random()
        else:
            cost = 0.0
        agent.violation_cost_this_year = cost
        if cost > 0.0:
            violators += 1
    return violators


def worker_step(state: SocietyState, agent: Agent) -> list[tuple[int, float]]:
    """One worker's year; returns the violation reports it emits.

    Decisions are gated on experience strictly above the configured gate.
    Withdrawing from monitoring opens the private-trade question, which is
    absorbing once answered with yes.
    """
    config = state.config
    reports: list[tuple[int, float]] = []
    if agent.experience > config.experience_gate:
        decision = beliefs_mod.decide_monitoring(agent)
        if decision is MonitoringDecision.WITHDRAW:
            agent.volunteer_monitor = False
            agent.roles.drop_internalised(MetaRole.KNOWLEDGE)
            if not agent.private_trade:
                fraction = network.friend_trader_fraction(agent, state.agents)
                if beliefs_mod.decide_private_trade(
                    agent, fraction, config.literal_justif_comparison
                ):
                    agent.private_trade = True
        elif decision is MonitoringDecision.VOLUNTEER:
            agent.volunteer_monitor = True
            agent.roles.internalise(MetaRole.KNOWLEDGE)
        if agent.volunteer_monitor:
            # Leniency varies with this year's cases, so the tolerance the
            # monitor applies is redrawn rather than fixed at hire (one draw
            # per reporting-eligible monitor).
            tolerance = state.rng.uniform(0.0, config.report_tolerance_max)
            reports = network.observed_violators(agent, state.agents, tolerance)
            if reports:
                agent.roles.internalise(MetaRole.SKILL)
    _learn(state, agent)
    _age_and_maybe_die(state, agent, state.worker_ids)
    return reports


def manager_step(
    state: SocietyState, manager: Agent, reports: list[tuple[int, float]]
) -> list[int]:
    """One manager's year: punish reported violators, then learn and age.

    A manager who has resolved its own dissonance against the rules (value
    below its threshold) interprets them leniently and punishes nobody this
    year. Otherwise it fires the highest-cost reported agents above its
    punish tolerance, at most max_punish of them (ties broken by ascending
    id). Directors, the manager itself, and already-gone agents are never
    fired.
    """
    config = state.config
    lookup = state.agents
    enforcing = (
        beliefs_mod.dissonance(manager.beliefs.perceived_fairness)
        >= manager.thresholds.dissonance
    )
    tolerance = manager.thresholds.tol_punish
    candidates: dict[int, float] = {}
    if enforcing:
        for violator_id, cost in reports:
            if violator_id == manager.id or cost <= tolerance:
                continue
            violator = lookup[violator_id]
            if violator.alive and violator.roles.formal is not MetaRole.COMMANDER:
                candidates[violator_id] = cost
    ranked = sorted(candidates.items(), key=lambda item: (-item[1], item[0]))
    fired = [violator_id for violator_id, _ in ranked[: config.max_punish]]
    if fired:
        manager.roles.internalise(MetaRole.SKILL)
        for violator_id in fired:
            _fire(state, lookup[violator_id])
    _learn(state, manager)
    _age_and_maybe_die(state, manager, state.manager_ids)
    return fired


def director_step(state: SocietyState, director: Agent) -> None:
    """Directors only learn and age; rule making happens at the reform."""
    _learn(state, director)
    _age_and_maybe_die(state, director, state.director_ids)


def board_reform(state: SocietyState) -> None:
    """The one-off vote on legalising private trade.

    The most experienced managers replace the sitting board (displaced
    directors step down into the manager pool, so staffing is conserved);
    the reshaped board then votes. A director votes yes when it already
    trades privately or its dissonance value sits below its own threshold
    (it has resolved the tension against the rule). Passing the vote grants
    the permission permanently and applies the wage cut to the fairness
    constant.
    """
    config = state.config
    if state.year != config.reform_year:
        raise EngineError(f"board reform called at year {state.year}")

    managers = [state.agents[i] for i in sorted(state.manager_ids)]
    incoming = sorted(managers, key=lambda a: (-a.experience, a.id))
    incoming = incoming[: config.n_directors]
    if incoming:
        for director_id in list(state.director_ids):
            director = state.agents[director_id]
            director.roles.formal = MetaRole.KNOWLEDGE
            state.director_ids.discard(director_id)
            state.manager_ids.add(director_id)
        for manager in incoming:
            manager.roles.formal = MetaRole.COMMANDER
            state.manager_ids.discard(manager.id)
            state.director_ids.add(manager.id)
    gap = config.n_directors - len(state.director_ids)
    if gap > 0:
        managers = [state.agents[i] for i in sorted(state.manager_ids)]
        for manager_id in demography.promote_to_director(managers, gap):
            state.manager_ids.discard(manager_id)
            state.director_ids.add(manager_id)

    yes_votes = 0
    for director_id in state.board:
        director = state.agents[director_id]
        resolved_against_rule = (
            beliefs_mod.dissonance(director.beliefs.perceived_fairness)
            < director.thresholds.dissonance
        )
        if director.private_trade or resolved_against_rule:
            yes_votes += 1
    if yes_votes / config.board_size >= config.vote_threshold:
        state.permission_private_trade = True
        state.permission_year = state.year
        state.fairness_constant = clamp_belief(
            state.fairness_constant - config.wage_cut_penalty
        )


def step_year(
    state: SocietyState,
    on_replenish: Callable[[SocietyState], None] | None = None,
) -> YearlyStats:
    """Advance the society by one year and return its statistics."""
    config = state.config
    if state.year >= config.total_years:
        raise EngineError(f"cannot step past total_years={config.total_years}")
    state.deaths_this_year = 0
    state.fired_this_year = 0

    demography.replenish(state)
    _check_staffing(state)
    if on_replenish is not None:
        on_replenish(state)

    n_cheaters = _draw_violations(state)

    emissions: list[list[tuple[int, float]]] = []
    lookup = state.agents
    for worker_id in sorted(state.worker_ids):
        reports = worker_step(state, lookup[worker_id])
        if reports:
            emissions.append(reports)

    manager_order = sorted(state.manager_ids)
    inboxes: dict[int, list[tuple[int, float]]] = {}
    if manager_order:
        rng = state.rng
        n_managers = len(manager_order)
        for reports in emissions:
            for item in reports:
                target = manager_order[rng.randrange(n_managers)]
                inboxes.setdefault(target, []).append(item)

    for manager_id in manager_order:
        manager = lookup[manager_id]
        if not manager.alive:
            continue
        manager_step(state, manager, inboxes.get(manager_id, []))

    for director_id in sorted(state.director_ids):
        director_step(state, lookup[director_id])

    if state.year == config.reform_year:
        board_reform(state)

    alive_workers = len(state.worker_ids)
    volunteers = sum(
        1 for worker_id in state.worker_ids if lookup[worker_id].volunteer_monitor
    )
    traders = sum(1 for agent_id in state.alive_ids() if lookup[agent_id].private_trade)
    stats = YearlyStats(
        year=state.year,
        pct_cheaters_fired=(
            100.0 * state.fired_this_year / n_cheaters if n_cheaters else 0.0
        ),
        pct_volunteer_monitors=(
            100.0 * volunteers / alive_workers if alive_workers else 0.0
        ),
        n_private_traders=traders,
        permission_granted=state.permission_private_trade,
        n_deaths=state.deaths_this_year,
        n_fired=state.fired_this_year,
    )
    state.last_year_attrition = state.deaths_this_year + state.fired_this_year
    state.year += 1
    return stats


def run_simulation(
    config: SocietyConfig,
    seed: int,
    on_replenish: Callable[[SocietyState], None] | None = None,
) -> RunResult:
    """Run one seeded society for its configured number of years."""
    state = init_society(config, seed)
    series = [
        step_year(state, on_replenish=on_replenish)
        for _ in range(config.total_years)
    ]
    return RunResult(
        seed=seed,
        society_label=config.label,
        series=series,
        permission_ever_granted=state.permission_private_trade,
        permission_year=state.permission_year,
    )
