"""Straight-line reference simulation used as the equivalence oracle.

Re-implements the yearly rules directly over plain dicts with full
recomputation every phase: no role-id sets, no precomputed hazard table, no
shared helpers with the package. Consumes the random stream in the same
documented order as the engine, so per-year statistics must match exactly.
"""

from __future__ import annotations

import math
from random import Random

W, K, C = "W", "K", "C"


def _hazard(age, mortality):
    if age >= mortality.cap_age:
        return 1.0
    return min(1.0, mortality.hazard_scale * math.exp(mortality.hazard_growth * (age - 15)))


def _spawn(agent_id, cfg, rng):
    return {
        "id": agent_id,
        "role": W,
        "experience": 0,
        "pf": rng.uniform(-1.0, 1.0),
        "pe": rng.uniform(-1.0, 1.0),
        "t_diss": rng.random(),
        "t_env": rng.random(),
        "t_fair": rng.random(),
        "t_justif": rng.random(),
        "t_report": rng.uniform(0.0, cfg.report_tolerance_max),
        "t_punish": rng.uniform(0.0, cfg.fired_fraction),
        "volunteer": rng.random() < cfg.monitoring_init_prob,
        "trade": False,
        "cost": 0.0,
        "friends": set(),
        "alive": True,
    }


def _attach(agent, everyone, degree, rng):
    candidates = sorted(
        (a["id"] for a in everyone if a["alive"] and a["id"] != agent["id"])
    )
    k = min(degree, len(candidates))
    if k == 0:
        return
    for fid in rng.sample(candidates, k):
        agent["friends"].add(fid)
        next(a for a in everyone if a["id"] == fid)["friends"].add(agent["id"])


def _clamp(x):
    return max(-1.0, min(1.0, x))


def _alive(agents, role=None):
    out = [a for a in agents if a["alive"]]
    if role is not None:
        out = [a for a in out if a["role"] == role]
    return sorted(out, key=lambda a: a["id"])


def _kill(agent, agents):
    agent["alive"] = False
    for other in agents:
        other["friends"].discard(agent["id"])
    agent["friends"] = set()


def run_reference(cfg, seed):
    """Simulate one society; returns a list of per-year stats tuples:
    (year, pct_cheaters_fired, pct_volunteer_monitors, n_private_traders,
    permission_granted, n_deaths, n_fired).
    """
    rng = Random(seed)
    agents = [_spawn(i, cfg, rng) for i in range(cfg.population)]
    n_directors = cfg.board_size
    n_managers = round(cfg.manager_fraction * cfg.population)
    n_workers = cfg.population - n_directors - n_managers
    for a in agents[:n_directors]:
        a["role"] = C
    for a in agents[n_directors:n_directors + n_managers]:
        a["role"] = K
    for a in agents:
        _attach(a, agents, cfg.network_degree, rng)

    env_signal = 0.5 if cfg.environment_benign else -0.5
    fairness_constant = cfg.fairness_constant
    permission = False
    next_id = cfg.population
    series = []

    for year in range(cfg.total_years):
        deaths = fired = 0

        # phase 1: refill the board, then managers, then hire workers
        for role_to, role_from, target in ((C, K, n_directors), (K, W, n_managers)):
            gap = target - len(_alive(agents, role_to))
            if gap > 0:
                pool = sorted(
                    _alive(agents, role_from),
                    key=lambda a: (-a["experience"], a["id"]),
                )
                for a in pool[:gap]:
                    a["role"] = role_to
        w_gap = n_workers - len(_alive(agents, W))
        for _ in range(max(0, w_gap)):
            recruit = _spawn(next_id, cfg, rng)
            next_id += 1
            agents.append(recruit)
            _attach(recruit, agents, cfg.network_degree, rng)

        # phase 2: violation costs
        cheaters = 0
        for a in _alive(agents):
            if a["trade"] and not permission and a["role"] == W:
                cost = rng.random()
            elif rng.random() < cfg.residual_violation_prob:
                cost = rng.random()
            else:
                cost = 0.0
            a["cost"] = cost
            if cost > 0.0:
                cheaters += 1

        # phase 3: workers decide, report, learn, age, maybe die
        emissions = []
        lookup = {a["id"]: a for a in agents}
        for worker in _alive(agents, W):
            if worker["experience"] > cfg.experience_gate:
                value = (worker["pf"] + 1.0) / 2.0
                if value < worker["t_diss"]:
                    worker["volunteer"] = False
                    if not worker["trade"]:
                        friends = [lookup[f] for f in worker["friends"] if lookup[f]["alive"]]
                        frac = (
                            sum(1 for f in friends if f["trade"]) / len(friends)
                            if friends else 0.0
                        )
                        if cfg.literal_justif_comparison:
                            justified = frac < worker["t_justif"]
                        else:
                            justified = frac >= worker["t_justif"]
                        if worker["pf"] < worker["t_fair"] or justified:
                            worker["trade"] = True
                elif value > worker["t_diss"]:
                    worker["volunteer"] = True
                if worker["volunteer"]:
                    tolerance = rng.uniform(0.0, cfg.report_tolerance_max)
                    found = [
                        (f, lookup[f]["cost"])
                        for f in worker["friends"]
                        if lookup[f]["alive"] and lookup[f]["cost"] > tolerance
                    ]
                    found.sort(key=lambda t: (-t[1], t[0]))
                    if found:
                        emissions.append(found)
            noise = rng.uniform(-cfg.observation_noise, cfg.observation_noise)
            signal = _clamp(fairness_constant + noise)
            worker["pf"] = _clamp(
                cfg.past_weight * worker["pf"] + (1 - cfg.past_weight) * signal
            )
            worker["pe"] = _clamp(
                cfg.past_weight * worker["pe"] + (1 - cfg.past_weight) * env_signal
            )
            worker["experience"] += 1
            if rng.random() < _hazard(worker["experience"] + 15, cfg.mortality):
                _kill(worker, agents)
                deaths += 1

        # phase 4: route each report to a uniformly drawn manager
        manager_ids = [a["id"] for a in _alive(agents, K)]
        inboxes = {}
        if manager_ids:
            for reports in emissions:
                for item in reports:
                    target = manager_ids[rng.randrange(len(manager_ids))]
                    inboxes.setdefault(target, []).append(item)

        # phase 5: managers punish, learn, age, maybe die
        for mid in manager_ids:
            manager = lookup[mid]
            if not manager["alive"]:
                continue
            value = (manager["pf"] + 1.0) / 2.0
            pot = {}
            if value >= manager["t_diss"]:
                for vid, cost in inboxes.get(mid, []):
                    target = lookup[vid]
                    if (
                        vid != mid
                        and cost > manager["t_punish"]
                        and target["alive"]
                        and target["role"] != C
                    ):
                        pot[vid] = cost
            ranked = sorted(pot.items(), key=lambda t: (-t[1], t[0]))
            for vid, _ in ranked[: cfg.max_punish]:
                _kill(lookup[vid], agents)
                fired += 1
            noise = rng.uniform(-cfg.observation_noise, cfg.observation_noise)
            signal = _clamp(fairness_constant + noise)
            manager["pf"] = _clamp(
                cfg.past_weight * manager["pf"] + (1 - cfg.past_weight) * signal
            )
            manager["pe"] = _clamp(
                cfg.past_weight * manager["pe"] + (1 - cfg.past_weight) * env_signal
            )
            manager["experience"] += 1
            if rng.random() < _hazard(manager["experience"] + 15, cfg.mortality):
                _kill(manager, agents)
                deaths += 1

        # phase 6: directors learn, age, maybe die
        for director in _alive(agents, C):
            noise = rng.uniform(-cfg.observation_noise, cfg.observation_noise)
            signal = _clamp(fairness_constant + noise)
            director["pf"] = _clamp(
                cfg.past_weight * director["pf"] + (1 - cfg.past_weight) * signal
            )
            director["pe"] = _clamp(
                cfg.past_weight * director["pe"] + (1 - cfg.past_weight) * env_signal
            )
            director["experience"] += 1
            if rng.random() < _hazard(director["experience"] + 15, cfg.mortality):
                _kill(director, agents)
                deaths += 1

        # phase 7: one-off board reform and vote
        if year == cfg.reform_year:
            pool = sorted(
                _alive(agents, K), key=lambda a: (-a["experience"], a["id"])
            )
            incoming = pool[: n_directors]
            if incoming:
                for old in _alive(agents, C):
                    old["role"] = K
                for new in incoming:
                    new["role"] = C
            gap = n_directors - len(_alive(agents, C))
            if gap > 0:
                pool = sorted(
                    _alive(agents, K), key=lambda a: (-a["experience"], a["id"])
                )
                for a in pool[:gap]:
                    a["role"] = C
            yes = sum(
                1
                for d in _alive(agents, C)
                if d["trade"] or (d["pf"] + 1.0) / 2.0 < d["t_diss"]
            )
            if yes / n_directors >= cfg.vote_threshold:
                permission = True
                fairness_constant = _clamp(fairness_constant - cfg.wage_cut_penalty)

        # phase 8: stats
        workers_alive = _alive(agents, W)
        volunteers = sum(1 for a in workers_alive if a["volunteer"])
        traders = sum(1 for a in _alive(agents) if a["trade"])
        series.append(
            (
                year,
                100.0 * fired / cheaters if cheaters else 0.0,
                100.0 * volunteers / len(workers_alive) if workers_alive else 0.0,
                traders,
                permission,
                deaths,
                fired,
            )
        )
    return series
