"""Independent reference computations used by the tests."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from attune.events import GoalInspected


def batch_intent(records, goals, beta, eps_mix, v_min):
    """Posterior over goals after all records, as one product of linear maps.

    Mixing with the uniform distribution and likelihood weighting are both
    linear in the unnormalised belief, so the whole stream is a matrix
    product applied to the uniform prior, normalised once at the end.
    Returns (posterior dict over remaining goals, intent value).
    """
    ids = [g.goal_id for g in goals]
    n = len(ids)
    xy = np.array([[g.x, g.y] for g in goals], dtype=float)
    alive = np.ones(n, dtype=bool)
    belief = np.full(n, 1.0 / n)
    for r in records:
        if abs(r.v_cmd) >= v_min and alive.any():
            m = alive.sum()
            mix = (1 - eps_mix) * np.eye(n) + eps_mix / m * np.outer(alive, alive)
            direction = r.heading if r.v_cmd >= 0 else r.heading + math.pi
            bearings = np.arctan2(xy[:, 1] - r.y, xy[:, 0] - r.x)
            lik = np.exp(beta * np.cos(bearings - direction)) * alive
            belief = lik * (mix @ belief)
        if isinstance(r.event, GoalInspected):
            k = ids.index(r.event.goal_id)
            alive[k] = False
            belief[k] = 0.0
    if not alive.any():
        return {}, 1.0
    post = belief / belief.sum()
    remaining = {gid: float(post[k]) for k, gid in enumerate(ids) if alive[k]}
    active = next(gid for k, gid in enumerate(ids) if alive[k])
    return remaining, remaining[active]


def kendall_tau_b_pairs(x, y):
    """Kendall tau-b by explicit enumeration of all pairs."""
    conc = disc = tie_x = tie_y = 0
    for i, j in combinations(range(len(x)), 2):
        dx, dy = x[i] - x[j], y[i] - y[j]
        if dx == 0 and dy == 0:
            continue
        if dx == 0:
            tie_x += 1
        elif dy == 0:
            tie_y += 1
        elif dx * dy > 0:
            conc += 1
        else:
            disc += 1
    denom = math.sqrt((conc + disc + tie_x) * (conc + disc + tie_y))
    return (conc - disc) / denom if denom else math.nan
