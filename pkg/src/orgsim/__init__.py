"""Deterministic agent-based simulation of rule change in organisations.

Agents hold CKSW meta-roles (Commander, Knowledge, Skill, Worker); their
perceptions of fairness drive monitoring, private trading and, at the reform
year, a board vote on legalising private trade.
"""

from .types import (
    Agent,
    AgentStatus,
    Beliefs,
    ConfigurationError,
    MetaRole,
    MortalityProfile,
    RoleSet,
    RunResult,
    SocietyConfig,
    Thresholds,
    YearlyStats,
    default_config,
)
from .engine import SocietyState, init_society, run_simulation, step_year
from .experiment import BatchSpec, GridSummary, aggregate, run_batch

__all__ = [
    "Agent",
    "AgentStatus",
    "BatchSpec",
    "Beliefs",
    "ConfigurationError",
    "GridSummary",
    "MetaRole",
    "MortalityProfile",
    "RoleSet",
    "RunResult",
    "SocietyConfig",
    "SocietyState",
    "Thresholds",
    "YearlyStats",
    "aggregate",
    "default_config",
    "init_society",
    "run_batch",
    "run_simulation",
    "step_year",
]
