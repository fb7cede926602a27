"""Belief updating and the dissonance-gated behaviour decisions.

Perceptions are smoothed with a fixed weight on the past; the dissonance
value derived from perceived fairness decides whether an agent withdraws
from monitoring (and may start trading privately) or volunteers for it.
"""

from __future__ import annotations

import enum

from .types import Agent, clamp_belief


class MonitoringDecision(enum.Enum):
    WITHDRAW = "withdraw"
    VOLUNTEER = "volunteer"
    NO_CHANGE = "no_change"


def update_belief(old: float, signal: float, past_weight: float) -> float:
    """Convex combination of the old belief and the new evidence.

    Raises ValueError when any input leaves its documented range.
    """
    if not -1.0 <= old <= 1.0:
        raise ValueError(f"old belief {old} outside [-1, 1]")
    if not -1.0 <= signal <= 1.0:
        raise ValueError(f"signal {signal} outside [-1, 1]")
    if not 0.0 <= past_weight <= 1.0:
        raise ValueError(f"past_weight {past_weight} outside [0, 1]")
    return clamp_belief(past_weight * old + (1.0 - past_weight) * signal)


def dissonance(perceived_fairness: float) -> float:
    """Map perceived fairness onto [0, 1].

    Low values mean the agent perceives the system as unfair; below the
    agent's dissonance threshold it resolves the tension against the rule
    (stops monitoring, may justify private trade).
    """
    return (perceived_fairness + 1.0) / 2.0


def decide_monitoring(agent: Agent) -> MonitoringDecision:
    """Trichotomy on the dissonance value against the agent's threshold."""
    value = dissonance(agent.beliefs.perceived_fairness)
    threshold = agent.thresholds.dissonance
    if value < threshold:
        return MonitoringDecision.WITHDRAW
    if value > threshold:
        return MonitoringDecision.VOLUNTEER
    return MonitoringDecision.NO_CHANGE


def decide_private_trade(
    agent: Agent,
    friend_trader_fraction: float,
    literal_justif_comparison: bool = False,
) -> bool:
    """Decide whether a withdrawn agent starts trading privately.

    True when perceived fairness falls below the agent's fairness threshold,
    or when enough friends already trade (social justification). The literal
    flag flips the justification comparison so that FEW trading friends
    justify trading instead.
    """
    unfair = agent.beliefs.perceived_fairness < agent.thresholds.fairness
    if literal_justif_comparison:
        justified = friend_trader_fraction < agent.thresholds.justification
    else:
        justified = friend_trader_fraction >= agent.thresholds.justification
    return unfair or justified


def fairness_signal(fairness_constant: float, noise: float) -> float:
    """Clamp the yearly fairness observation to the belief range."""
    return clamp_belief(fairness_constant + noise)


def environment_signal(environment_benign: bool) -> float:
    """Constant yearly evidence about the environment."""
    return 0.5 if environment_benign else -0.5
