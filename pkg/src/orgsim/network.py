"""The symmetric friend graph.

Friendships carry the social justification for private trade and determine
which violators a volunteer monitor can observe. Edges live on the agents
themselves (id sets); all mutations keep them symmetric.
"""

from __future__ import annotations

from random import Random

from .types import Agent


def attach_recruit(
    recruit: Agent, population: list[Agent], degree: int, rng: Random
) -> set[int]:
    """Connect a new agent to min(degree, |population|) distinct friends.

    Candidates are sampled uniformly without replacement; both adjacency
    sets are updated. The population list must already exclude the recruit
    and be in a deterministic (ascending id) order.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    k = min(degree, len(population))
    if k == 0:
        return set()
    chosen = rng.sample(population, k)
    for friend in chosen:
        recruit.friends.add(friend.id)
        friend.friends.add(recruit.id)
    return {a.id for a in chosen}


def detach_agent(agent: Agent, lookup: dict[int, Agent]) -> None:
    """Remove all of a dead or fired agent's edges, keeping symmetry."""
    for fid in agent.friends:
        friend = lookup.get(fid)
        if friend is not None:
            friend.friends.discard(agent.id)
    agent.friends.clear()


def friend_trader_fraction(agent: Agent, lookup: dict[int, Agent]) -> float:
    """Fraction of alive friends currently flagged as private traders.

    Zero when the agent has no alive friends.
    """
    alive = 0
    traders = 0
    for fid in agent.friends:
        friend = lookup[fid]
        if friend.alive:
            alive += 1
            if friend.private_trade:
                traders += 1
    if alive == 0:
        return 0.0
    return traders / alive


def observed_violators(
    monitor: Agent, lookup: dict[int, Agent], tolerance: float | None = None
) -> list[tuple[int, float]]:
    """Alive friends whose violation cost this year exceeds the monitor's
    report tolerance, sorted by descending cost then ascending id.

    The tolerance defaults to the monitor's own threshold; the engine passes
    the monitor's leniency for the current year instead.
    """
    if tolerance is None:
        tolerance = monitor.thresholds.report_tolerance
    found = [
        (fid, friend.violation_cost_this_year)
        for fid in monitor.friends
        if (friend := lookup[fid]).alive
        and friend.violation_cost_this_year > tolerance
    ]
    found.sort(key=lambda item: (-item[1], item[0]))
    return found
