"""Parameter sweeps that produce (parameter, loss) tables for plotting."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..adversaries import (EpsStep, FamilyAdversary, FamilyRandomAdversary, ScaledAdversary, BudgetAdversary,
                           SlowDecayEscape)
from ..classes import g_n_eps_constant
from ..engine import GameConfig, Scenario, run_game
from ..learners import FeasibleMidpoint, Linint, LinintPrime, ScaledLearner, ZeroLearner
from ..weights import slow_log

HORIZON = 10 ** 6


@dataclass
class Table:
    name: str
    columns: tuple[str, ...]
    notes: tuple[str, ...]
    rows: list[dict]


def _forced_min(family: str, n: int, eps: float, p: float) -> float:
    """Smallest scripted radius-2 loss over the baseline learners."""
    cfg = GameConfig(p, 2.0, Scenario.s2(1.0), HORIZON)
    losses = []
    for learner in (FeasibleMidpoint(), Linint(), ZeroLearner()):
        losses.append(run_game(cfg, learner, FamilyAdversary(family, eps=eps, n=n)).cumulative_loss)
    return min(losses)


def _s1_worst(family: str, n: int, eps: float, p: float, seeds: int) -> float:
    worst = 0.0
    for s in range(seeds):
        cfg = GameConfig(p, 2.0, Scenario.s1(1.0), HORIZON, seed=s)
        adv = FamilyRandomAdversary(family, eps=eps, n=n, N=4 * n if family == "G_n_eps" else 60)
        worst = max(worst, run_game(cfg, FeasibleMidpoint(), adv).cumulative_loss)
    return worst


def fn_ratio(grid, eps: float = 1e-4, p: float = 1.0, seeds: int = 10) -> Table:
    rows = []
    for n in grid:
        n = int(n)
        forced = _forced_min("F_n_eps", n, eps, p)
        upper = 1 + (n * eps) ** p
        rows.append({"n": n, "k": int(round(math.log2(n))), "eps": eps, "p": p, "forced_s2_min": forced,
                     "s1_upper": upper, "s1_measured_max": _s1_worst("F_n_eps", n, eps, p, seeds),
                     "ratio_lower": forced / upper})
    return Table("fn_ratio", ("n", "k", "eps", "p", "forced_s2_min", "s1_upper", "s1_measured_max", "ratio_lower"),
                 ("forced_s2_min: least scripted radius-2 loss over feasible_midpoint, linint, zero",
                  "s1_upper: 1 + (n eps)^p, the radius-1 upper bound",
                  "ratio_lower = forced_s2_min / s1_upper, a lower bound on opt*/opt' (grows like log2 n)"),
                 rows)


def gn_ratio(grid, n: int = 17, eps: float = 1e-4, seeds: int = 5) -> Table:
    rows = []
    for p in grid:
        p = float(p)
        c = g_n_eps_constant(n, p)
        forced = _forced_min("G_n_eps", n, eps, p)
        upper = 1 + (n * eps) ** p
        rows.append({"p": p, "n": n, "eps": eps, "c_bound": c, "forced_s2_min": forced, "s1_upper": upper,
                     "s1_measured_max": _s1_worst("G_n_eps", n, eps, p, seeds),
                     "ratio_lower": c / upper, "sqrt_n_minus_1": math.sqrt(n - 1)})
    return Table("gn_ratio", ("p", "n", "eps", "c_bound", "forced_s2_min", "s1_upper", "s1_measured_max",
                              "ratio_lower", "sqrt_n_minus_1"),
                 ("c_bound: (n-1) / ((1 + (n-1)^(1/p)) / 2)^p, forced against every learner",
                  "ratio_lower = c_bound / s1_upper; tends to sqrt(n-1) as p grows"),
                 rows)


def eps_step_table(grid, p: float = 2.0, q: float = 3.0) -> Table:
    rows = []
    for N in grid:
        N = int(N)
        cfg = GameConfig(p, q, Scenario.s1(1.0), N + 1)
        row = {"N": N, "p": p, "q": q, "bound": N ** (1 - p / q) / 2 ** p}
        for learner in (LinintPrime(), ZeroLearner()):
            row[f"loss_{learner.name}"] = run_game(cfg, learner, EpsStep(N)).cumulative_loss
        rows.append(row)
    return Table("eps_step", ("N", "p", "q", "loss_linint_prime", "loss_zero", "bound"),
                 ("bound: N^(1-p/q) / 2^p, the forced-error lower bound",), rows)


def scaling_table(grid, p: float = 2.0, q: float = 2.0, seed: int = 0, N: int = 40) -> Table:
    base = run_game(GameConfig(p, q, Scenario.s1(1.0), HORIZON, seed=seed), LinintPrime(), BudgetAdversary(N)).cumulative_loss
    rows = []
    for R in grid:
        R = float(R)
        cfg = GameConfig(p, q, Scenario.s1(R), HORIZON, seed=seed)
        loss = run_game(cfg, ScaledLearner(LinintPrime(), R, q), ScaledAdversary(BudgetAdversary(N), R)).cumulative_loss
        rows.append({"R": R, "p": p, "q": q, "loss": loss, "ratio": loss / base, "expected": R ** ((q - 1) * p / q)})
    return Table("scaling", ("R", "p", "q", "loss", "ratio", "expected"),
                 ("ratio: coupled radius-R loss over radius-1 loss; expected R^((q-1)p/q)",), rows)


def slow_decay_table(grid, c: float = 2.0, h: float = 1.0, p: float = 1.0) -> Table:
    rows = []
    g = slow_log()
    for N in grid:
        N = int(N)
        cfg = GameConfig(p, 2.0, Scenario.s3(g), N + 1)
        adv = SlowDecayEscape(c, h, N)
        loss = run_game(cfg, Linint(), adv).cumulative_loss
        rows.append({"N": N, "loss_linint": loss, "bound": adv.forced_lower_bound(cfg),
                     "harmonic": math.fsum(1 / k for k in range(1, N + 2))})
    return Table("slow_decay", ("N", "loss_linint", "bound", "harmonic"),
                 ("weight g(z) = 1/log2(1+z); bound: (h/2)^p sum_i g(c^i)",), rows)


TABLES = {
    "fn_ratio": (fn_ratio, [2, 4, 8, 16, 32, 64]),
    "gn_ratio": (gn_ratio, [2, 8, 32, 128]),
    "eps_step": (eps_step_table, [100, 1000, 10000]),
    "scaling": (scaling_table, [0.5, 1, 2, 4]),
    "slow_decay": (slow_decay_table, [10, 100, 1000]),
}


def make_table(name: str, grid=None, **params) -> Table:
    if name not in TABLES:
        raise KeyError(f"unknown table {name!r}; choose from {sorted(TABLES)}")
    fn, default = TABLES[name]
    return fn(default if grid is None else grid, **params)
