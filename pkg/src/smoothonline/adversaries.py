"""Adversary constructions: escapes, eps-steps, weighted probes, basis, family scripts, tents, fuzzers.

Every adversary picks labels after seeing the learner's guess and can certify,
after the game, that its revealed labels fit a member of the declared class.
"""
from __future__ import annotations

import math
import warnings
from bisect import bisect_left
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .classes import (CONSISTENCY_TOL, MEMBERSHIP_TOL, Finite, Gq, SeparableTentFunction, TentFamily,
                      TruncatedLinear, class_from_json, f_eps_family, f_n_eps_family, g_n_eps_constant,
                      g_n_eps_family, is_member, pair_gap, tent_critical_offsets, tent_slice_action,
                      truncated_linear_evaluate)
from .engine import Adversary, Certificate, GameConfig, Scenario, farther
from .pwl import INF, BreakpointFunction, insertion_gain, interp, q_action
from .weights import WeightFunction, sup_z_times_g

# accumulated rounding in long label walks (e.g. 10^4 eps-steps) exceeds the 1e-12 membership slack
CERT_RTOL = 1e-9


class DivergenceWarning(UserWarning):
    """The configured weight makes the escape penalty converge."""


def _interp_certificate(points, q: float, tol: float = CERT_RTOL) -> Certificate:
    f = BreakpointFunction.from_points(dict(points).items())
    a = q_action(f, q)
    return Certificate(a <= 1 + tol, {"action": a, "class": f"G_{q:g}"})


class GeometricEscape(Adversary):
    """Inputs x_i = x_{i-1} + c**i; each label is the previous one or the previous one plus h.

    The jumps grow geometrically, so the inputs are never within a fixed radius of
    each other and only the base and weighted scenarios are accepted.
    """
    name = "geometric_escape"
    s1_admissible = False

    def __init__(self, c: float = 2.0, h: float | None = None, N: int = 100):
        if not c > 1:
            raise ValueError(f"c must exceed 1, got {c}")
        self.c, self.h_param, self.N = float(c), h, int(N)

    @staticmethod
    def h_bound(c: float, q: float) -> float:
        return (c ** (q - 1) - 1) ** (1 / q)

    def start(self, config):
        super().start(config)
        if config.scenario.kind not in ("base", "s3"):
            raise ValueError(f"{self.name} is not radius-admissible; use the base or s3 scenario")
        bound = self.h_bound(self.c, config.q)
        self.h = bound if self.h_param is None else float(self.h_param)
        if not 0 < self.h <= bound * (1 + MEMBERSHIP_TOL):
            raise ValueError(f"h must lie in (0, {bound:g}] for c={self.c:g}, q={config.q:g}")
        self.x, self.y = 0.0, 0.0
        self.points = []
        self.class_info = EscapeFamily(self.h)

    def next_input(self, t):
        if t > self.N:
            return None
        if t > 0:
            self.x = self.x + self.c ** t
        return self.x

    def reveal(self, t, x, y_hat):
        if t > 0:
            self.y = farther(y_hat, self.y, self.y + self.h)
        self.points.append((x, self.y))
        return self.y

    def certificate(self):
        return _interp_certificate(self.points, self.config.q)

    def forced_lower_bound(self, config: GameConfig) -> float:
        return self.N * (self.h / 2) ** config.p


class EscapeFamily:
    """Candidate values for the next escape input: the last label or the last label plus h."""

    def __init__(self, h: float):
        self.h = h

    def consistent_values(self, history, x):
        for xi, yi in history:
            if xi == x:
                return [yi]
        if not history:
            return [0.0]
        last = history[-1][1]
        return [last, last + self.h]


def looks_summable(g: WeightFunction, c: float) -> bool:
    """Raabe-style tail test on the terms g(c**i); a heuristic, not a proof."""
    M = int(min(200, 300 / math.log10(c)))
    a, b = g(c ** (M - 1)), g(c ** M)
    if b == 0:
        return True
    return M * (a / b - 1) > 1.5


class SlowDecayEscape(GeometricEscape):
    """Geometric escape scored under a slowly decaying weight; penalty sum_i g(c**i) (h/2)**p."""
    name = "slow_decay_escape"

    def start(self, config):
        if config.scenario.kind != "s3":
            raise ValueError(f"{self.name} runs under the s3 scenario")
        super().start(config)
        g = config.scenario.weight
        if looks_summable(g, self.c):
            warnings.warn(f"sum of {g.name}(c^i) appears to converge; the penalty will stay bounded",
                          DivergenceWarning, stacklevel=2)

    def forced_lower_bound(self, config):
        g = config.scenario.weight
        return (self.h / 2) ** config.p * math.fsum(g(self.c ** i) for i in range(1, self.N + 1))


class EpsStep(Adversary):
    """Unit steps x_i = i with labels moving by +-eps, eps = N**(-1/q) unless given."""
    name = "eps_step"

    def __init__(self, N: int = 100, eps: float | None = None):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.N, self.eps_param = int(N), eps

    def start(self, config):
        super().start(config)
        self.eps = self.N ** (-1 / config.q) if self.eps_param is None else float(self.eps_param)
        self.y = 0.0
        self.points = []

    def next_input(self, t):
        return float(t) if t <= self.N else None

    def reveal(self, t, x, y_hat):
        if t > 0:
            self.y = farther(y_hat, self.y + self.eps, self.y - self.eps)
        self.points.append((x, self.y))
        return self.y

    def certificate(self):
        return _interp_certificate(self.points, self.config.q)

    def forced_lower_bound(self, config):
        return self.N * (self.eps / 2) ** config.p


class TwoRoundWeighted(Adversary):
    """Ask 0 (label 0), then x_eps with label +-sqrt(x_eps) farther from the guess.

    The interpolant has 2-action exactly 1, so the pair fits G_2. By default x_eps
    maximizes z * g(z) for the scenario weight; an unbounded supremum falls back to
    ``probe``.
    """
    name = "two_round_weighted"

    def __init__(self, x_eps: float | None = None, probe: float = 1e6):
        self.x_eps_param, self.probe = x_eps, probe

    def start(self, config):
        super().start(config)
        if config.q != 2:
            raise ValueError(f"{self.name} builds G_2 targets; got q={config.q:g}")
        g = config.scenario.weight if config.scenario.kind == "s3" else WeightFunction.one()
        self.weight = g
        if self.x_eps_param is not None:
            self.x_eps = float(self.x_eps_param)
        else:
            sup = sup_z_times_g(g)
            self.x_eps = self.probe if sup.value == INF or sup.argmax is None else sup.argmax
        self.points = []

    def next_input(self, t):
        return (0.0, self.x_eps)[t] if t < 2 else None

    def reveal(self, t, x, y_hat):
        r = math.sqrt(self.x_eps)
        y = 0.0 if t == 0 else farther(y_hat, r, -r)
        self.points.append((x, y))
        return y

    def certificate(self):
        return _interp_certificate(self.points, 2.0, tol=MEMBERSHIP_TOL)

    def forced_lower_bound(self, config):
        w = self.weight(self.x_eps) if config.scenario.kind == "s3" else 1.0
        return w * self.x_eps ** (config.p / 2)


class BasisAdversary(Adversary):
    """Zero vector, then ``scale * e_i`` for i = 1..n with labels +-r farther from the guess."""
    name = "basis_adversary"

    def __init__(self, n: int = 1, r: float = 1.0, scale: float = 1.0):
        if n < 1 or not r > 0 or not scale > 0:
            raise ValueError("basis adversary needs n >= 1, r > 0, scale > 0")
        self.n, self.r, self.scale = int(n), float(r), float(scale)
        self.class_info = TruncatedLinear(self.n, self.r)

    def start(self, config):
        super().start(config)
        if config.dim != self.n:
            raise ValueError(f"basis adversary with n={self.n} needs dim={self.n}, got {config.dim}")
        self.labels = [0.0] * (self.n + 1)
        self.inputs = []

    def next_input(self, t):
        if t > self.n:
            return None
        x = [0.0] * self.n
        if t > 0:
            x[t - 1] = self.scale
        return x

    def reveal(self, t, x, y_hat):
        y = 0.0 if t == 0 else farther(y_hat, self.r, -self.r)
        self.labels[t] = y
        self.inputs.append(x)
        return y

    def target(self) -> np.ndarray:
        return np.array(self.labels[1:]) / self.scale

    def certificate(self):
        v = self.target()
        ok = all(abs(truncated_linear_evaluate(v, x, self.r) - y) <= CONSISTENCY_TOL
                 for x, y in zip(self.inputs, self.labels))
        return Certificate(ok, {"v": v.tolist(), "class": f"G_L({self.n}, {self.r:g})"})

    def forced_lower_bound(self, config):
        w = config.scenario.weight(self.scale) if config.scenario.kind == "s3" else 1.0
        return self.n * w * self.r ** config.p


def build_family(family: str, eps: float = 0.01, n: int | None = None, members: str | None = None) -> Finite:
    if family == "F_eps":
        return f_eps_family(eps)
    if family == "F_n_eps":
        return f_n_eps_family(n, eps)
    if family == "G_n_eps":
        return g_n_eps_family(n, eps)
    if family == "pair":
        if members is None:
            raise ValueError("the pair family needs a members JSON file")
        cls = class_from_json(Path(members).read_text())
        if not isinstance(cls, Finite) or len(cls) != 2:
            raise ValueError("pair family file must hold a two-member Finite class")
        return cls
    raise ValueError(f"unknown family {family!r}")


class FamilyAdversary(Adversary):
    """Scripted radius-2 adversaries for the named finite families.

    * ``F_eps``: 2 (free), 1, 4 (free), 5.
    * ``F_n_eps``: 4j+2 then 4j+3 for j = 0..k-1; only the 4j+3 rounds are near an earlier input.
    * ``G_n_eps``: 4j-2 then 4j-1 for j = 1..n-1, revealing +1 (and stopping) when the guess
      is at least ``c**(1/p)`` away from 1.
    * ``pair``: an agreement point, then the point within distance 1 of it where the two
      members differ most.
    """
    name = "family_adversary"

    def __init__(self, family: str | Finite = "F_eps", eps: float = 0.01, n: int | None = None,
                 members: str | None = None):
        if isinstance(family, Finite):
            self.family = family
            self.kind = "pair" if len(family) == 2 else family.kind
        else:
            self.family = build_family(family, eps, n, members)
            self.kind = family
        if self.kind not in ("F_eps", "F_n_eps", "G_n_eps", "pair"):
            raise ValueError(f"no script for family {self.kind!r}")
        self.class_info = self.family
        self.s1_admissible = self.kind == "pair"

    def start(self, config):
        super().start(config)
        if config.scenario.kind == "s1" and not self.s1_admissible:
            raise ValueError(f"the {self.kind} script jumps further than radius 1; not valid under s1")
        self.history = []
        self.halted = False
        fam = self.family
        if self.kind == "F_eps":
            self.plan = [2.0, 1.0, 4.0, 5.0]
        elif self.kind == "F_n_eps":
            k = int(round(math.log2(len(fam))))
            self.plan = [float(4 * j + d) for j in range(k) for d in (2, 3)]
        elif self.kind == "G_n_eps":
            n = len(fam)
            self.c = g_n_eps_constant(n, config.p)
            self.plan = [float(4 * j + d) for j in range(1, n) for d in (-2, -1)]
        else:
            gap = pair_gap(*fam.members)
            self.gap = gap
            if gap.anchor is None:
                self.plan = [0.0]
            elif gap.x == gap.anchor:
                self.plan = [gap.x]
            else:
                self.plan = [gap.anchor, gap.x]

    def next_input(self, t):
        if self.halted or t >= len(self.plan):
            return None
        return self.plan[t]

    def _values(self, x):
        return sorted(set(self.family.consistent_values(self.history, x)))

    def reveal(self, t, x, y_hat):
        vals = self._values(x)
        p = self.config.p
        if len(vals) == 1:
            y = vals[0]
        elif self.kind == "F_eps" and x == 1.0:
            if abs(1 + y_hat) ** p >= 1 + 2.0 ** -p:
                y, self.halted = -1.0, True
            else:
                y = 1.0
        elif self.kind == "G_n_eps":
            if abs(y_hat - 1) >= self.c ** (1 / p):
                y, self.halted = 1.0, True
            else:
                y = -1.0
        else:
            y = farther(y_hat, vals[0], vals[-1])
        self.history.append((x, y))
        return y

    def certificate(self):
        idx = self.family.consistent(self.history)
        return Certificate(len(idx) >= 1, {"consistent": idx, "unique": len(idx) == 1})

    def forced_lower_bound(self, config):
        p = config.p
        if self.kind == "F_eps":
            return 1 + 2.0 ** -p
        if self.kind == "F_n_eps":
            return math.log2(len(self.family))
        if self.kind == "G_n_eps":
            return g_n_eps_constant(len(self.family), p)
        return (pair_gap(*self.family.members).m / 2) ** p


def certify_tent(tf: SeparableTentFunction, offsets: int = 1000) -> Certificate:
    """Slice actions on a regular offset grid plus every critical offset, and rectangle disjointness."""
    T = max(tf.rounds, default=0)
    crit = tent_critical_offsets(tf)
    ygrid = np.linspace(-tf.b, T * tf.eta + tf.b, offsets)
    xgrid = np.linspace(-tf.L, T * tf.alpha + tf.L, offsets)
    worst_x = max((tent_slice_action(tf, "x", float(o)) for o in list(ygrid) + crit["x"]), default=0.0)
    worst_y = max((tent_slice_action(tf, "y", float(o)) for o in list(xgrid) + crit["y"]), default=0.0)
    ok = max(worst_x, worst_y) <= 1 + MEMBERSHIP_TOL and tf.rectangles_disjoint()
    return Certificate(ok, {"max_x_slice": worst_x, "max_y_slice": worst_y,
                            "checked": 2 * offsets + len(crit["x"]) + len(crit["y"])})


class TentAdversary2D(Adversary):
    """Unit steps along (alpha, eta) in the plane; each step toggles a tent bump of height a."""
    name = "tent_adversary_2d"

    def __init__(self, N: int = 1000, eta: float = 0.05, offsets: int = 1000):
        if not 0 < eta < 0.1:
            raise ValueError(f"eta must lie in (0, 1/10), got {eta}")
        self.N, self.eta, self.offsets = int(N), float(eta), int(offsets)

    def start(self, config):
        super().start(config)
        if config.dim != 2:
            raise ValueError(f"{self.name} needs dim=2, got {config.dim}")
        self.tent = SeparableTentFunction(config.q, self.eta)
        self.class_info = TentFamily(self.tent)

    def next_input(self, t):
        return self.tent.center(t) if t <= self.N else None

    def reveal(self, t, x, y_hat):
        if t == 0:
            return 0.0
        y = farther(y_hat, 0.0, self.tent.a)
        self.tent.set_round(t, 1 if y > 0 else 0)
        return y

    def certificate(self):
        return certify_tent(self.tent, self.offsets)

    def forced_lower_bound(self, config):
        w = config.scenario.weight(1.0) if config.scenario.kind == "s3" else 1.0
        return self.N * w * (self.tent.a / 2) ** config.p


# ---------------------------------------------------------------------------
# randomized adversaries for fuzzing upper bounds

class _Walk:
    """Random input generator: each new input is a bounded step from a random earlier one."""

    def __init__(self, rng, radius: float | None, span: float = 5.0, grid: float | None = None):
        self.rng, self.radius, self.span, self.grid = rng, radius, span, grid
        self.seen: list[float] = []

    def next(self) -> float:
        rng = self.rng
        if not self.seen:
            x = float(rng.uniform(-self.span, self.span))
        else:
            base = self.seen[rng.integers(len(self.seen))]
            if self.radius is None:
                step = float(rng.normal() * 10.0 ** rng.uniform(-2, 1.5))
            else:
                step = float(rng.uniform(-self.radius, self.radius))
            x = base + step
        if self.grid:
            x = round(x / self.grid) * self.grid
            if self.radius is not None and self.seen:
                # snapping may overshoot; fall back to the unsnapped base
                if min(abs(x - s) for s in self.seen) > self.radius:
                    x = base
        self.seen.append(x)
        return x


def random_gq_target(rng, q: float, breaks: int = 8, span: float = 5.0) -> BreakpointFunction:
    """Random piecewise-linear function with q-action drawn uniformly from (0.2, 1]."""
    us = np.sort(rng.uniform(-span, span, breaks))
    vs = rng.normal(size=breaks)
    f = BreakpointFunction.from_points(zip(us, vs))
    a = q_action(f, q)
    if a > 0:
        k = (rng.uniform(0.2, 1.0) / a) ** (1 / q)
        f = BreakpointFunction(f.us, tuple(k * v for v in f.vs))
    return f


class RandomTargetAdversary(Adversary):
    """A fixed random target in G_q queried along a random walk (radius-bounded when ``radius`` is set)."""
    name = "random_target"

    def __init__(self, N: int = 50, radius: float | None = 1.0, breaks: int = 8, seed: int | None = None):
        self.N, self.radius, self.breaks, self.seed = int(N), radius, int(breaks), seed

    def start(self, config):
        super().start(config)
        rng = np.random.default_rng(config.seed if self.seed is None else self.seed)
        self.target = random_gq_target(rng, config.q, self.breaks)
        self.walk = _Walk(rng, self.radius)
        self.class_info = Gq(config.q)

    def next_input(self, t):
        return self.walk.next() if t <= self.N else None

    def reveal(self, t, x, y_hat):
        return self.target(x)

    def certificate(self):
        m = is_member(Gq(self.config.q), self.target)
        return Certificate(m.member, {"action": m.action})


class BudgetAdversary(Adversary):
    """Adaptive fuzzer: labels as far from the guess as the remaining q-action budget allows.

    Each round it spends either all of the remaining budget or a random fraction of it,
    keeping the interpolant of the revealed points (the least-action fit) at action <= 1.
    """
    name = "budget"

    def __init__(self, N: int = 50, radius: float | None = 1.0, greedy: float = 0.3,
                 seed: int | None = None, slack: float = 1e-9):
        self.N, self.radius, self.greedy, self.seed, self.slack = int(N), radius, greedy, seed, slack

    def start(self, config):
        super().start(config)
        self.rng = np.random.default_rng(config.seed if self.seed is None else self.seed)
        self.walk = _Walk(self.rng, self.radius)
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.used = 0.0
        self.class_info = Gq(config.q)

    def next_input(self, t):
        return self.walk.next() if t <= self.N else None

    def _reach(self, x, y0, budget, sign) -> float:
        q = self.config.q
        gain = lambda d: insertion_gain(self.xs, self.ys, x, y0 + sign * d, q)
        lo, hi = 0.0, 1.0
        while gain(hi) <= budget:
            lo, hi = hi, 2 * hi
            if hi > 1e12:
                return y0 + sign * lo
        if lo == 0.0 and gain(0.0) >= budget:
            return y0
        # gain is increasing in d; root-find, then step back until within budget
        d = brentq(lambda d: gain(d) - budget, lo, hi, xtol=1e-300, rtol=1e-15, disp=False)
        step = 1e-15
        while d > 0 and gain(d) > budget:
            d, step = d * (1 - step), 2 * step
        return y0 + sign * d

    def reveal(self, t, x, y_hat):
        i = bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return self.ys[i]
        if not self.xs:
            y = float(self.rng.normal())
        else:
            y0 = interp(self.xs, self.ys, x)
            budget = (1 - self.used) * (1 - self.slack)
            if self.rng.random() >= self.greedy:
                budget *= self.rng.random()
            budget = max(budget, 0.0)
            y = farther(y_hat, self._reach(x, y0, budget, -1.0), self._reach(x, y0, budget, 1.0))
            self.used += insertion_gain(self.xs, self.ys, x, y, self.config.q)
        self.xs.insert(i, x)
        self.ys.insert(i, y)
        return y

    def certificate(self):
        f = BreakpointFunction(tuple(self.xs), tuple(self.ys))
        m = is_member(Gq(self.config.q), f)
        return Certificate(m.member, {"action": m.action})


def random_family(rng, size: int, knots: int = 6, levels=(-1.0, -0.5, 0.0, 0.5, 1.0)) -> Finite:
    """Members on the integer knots 0..knots-1 with values from a small dyadic set (exact arithmetic)."""
    members = []
    for _ in range(size):
        vs = rng.choice(levels, size=knots)
        members.append(BreakpointFunction(tuple(float(u) for u in range(knots)), tuple(float(v) for v in vs)))
    return Finite(tuple(members), "random", {"size": size, "knots": knots})


class FamilyRandomAdversary(Adversary):
    """Random walk over a finite family with labels drawn from the still-consistent values.

    With ``greedy`` set, the label is the consistent value farthest from the guess;
    otherwise a uniformly random consistent value. Inputs are snapped to a dyadic grid.
    """
    name = "family_random"

    def __init__(self, family: str | Finite = "F_eps", eps: float = 0.01, n: int | None = None,
                 members: str | None = None, N: int = 40, radius: float | None = 1.0,
                 grid: float = 0.125, greedy: bool = True, seed: int | None = None):
        self.family = family if isinstance(family, Finite) else build_family(family, eps, n, members)
        self.class_info = self.family
        self.N, self.radius, self.grid, self.greedy, self.seed = int(N), radius, grid, greedy, seed

    def start(self, config):
        super().start(config)
        rng = np.random.default_rng(config.seed if self.seed is None else self.seed)
        self.rng = rng
        lo = min(m.us[0] for m in self.family.members if m.us) if any(m.us for m in self.family.members) else 0.0
        hi = max(m.us[-1] for m in self.family.members if m.us) if any(m.us for m in self.family.members) else 0.0
        self.walk = _Walk(rng, self.radius, grid=self.grid)
        self.walk.span = 0.0
        # start on an integer knot, where the scripted worst cases begin
        self.offset = float(rng.integers(math.floor(lo) - 1, math.ceil(hi) + 2))
        self.history = []
        self.alive = list(range(len(self.family)))

    def next_input(self, t):
        if t > self.N:
            return None
        return self.offset + self.walk.next()

    def reveal(self, t, x, y_hat):
        members = self.family.members
        vals = sorted({members[i](x) for i in self.alive})
        if self.greedy:
            far = max(abs(v - y_hat) for v in vals)
            y = max(v for v in vals if abs(v - y_hat) == far)
        else:
            y = vals[int(self.rng.integers(len(vals)))]
        self.alive = [i for i in self.alive if abs(members[i](x) - y) <= CONSISTENCY_TOL]
        self.history.append((x, y))
        return y

    def certificate(self):
        idx = self.family.consistent(self.history)
        return Certificate(len(idx) >= 1, {"consistent": idx})


class ScaledAdversary(Adversary):
    """Radius-R conjugate of a radius-1 adversary: inputs times R, labels times R**((q-1)/q)."""

    def __init__(self, inner: Adversary, R: float):
        if not R > 0:
            raise ValueError(f"R must be positive, got {R}")
        self.inner, self.R = inner, R
        self.name = f"{inner.name}@R={R:g}"

    def start(self, config):
        super().start(config)
        sc = config.scenario
        inner_sc = Scenario(sc.kind, sc.radius / self.R, sc.weight) if sc.kind in ("s1", "s2") else sc
        self.amp = self.R ** ((config.q - 1) / config.q)
        self.inner.start(GameConfig(config.p, config.q, inner_sc, config.horizon, config.dim, config.seed))
        self.class_info = getattr(self.inner, "class_info", None)
        self._last = None

    def next_input(self, t):
        x = self.inner.next_input(t)
        self._last = x
        if x is None:
            return None
        return self.R * x if np.isscalar(x) else [self.R * v for v in x]

    def reveal(self, t, x, y_hat):
        return self.amp * self.inner.reveal(t, self._last, y_hat / self.amp)

    def certificate(self):
        return self.inner.certificate()


ADVERSARIES = {
    "geometric_escape": GeometricEscape,
    "slow_decay_escape": SlowDecayEscape,
    "eps_step": EpsStep,
    "two_round_weighted": TwoRoundWeighted,
    "basis_adversary": BasisAdversary,
    "family_adversary": FamilyAdversary,
    "tent_adversary_2d": TentAdversary2D,
    "random_target": RandomTargetAdversary,
    "budget": BudgetAdversary,
    "family_random": FamilyRandomAdversary,
}


def make_adversary(name: str, **params) -> Adversary:
    if name not in ADVERSARIES:
        raise KeyError(f"unknown adversary {name!r}; choose from {sorted(ADVERSARIES)}")
    return ADVERSARIES[name](**params)


# functional constructor aliases
def geometric_escape(c=2.0, h=None, N=100):
    return GeometricEscape(c, h, N)


def slow_decay_escape(c=2.0, h=None, N=100):
    return SlowDecayEscape(c, h, N)


def eps_step(N=100, eps=None):
    return EpsStep(N, eps)


def two_round_weighted(x_eps=None, probe=1e6):
    return TwoRoundWeighted(x_eps, probe)


def basis_adversary(n=1, r=1.0, scale=1.0):
    return BasisAdversary(n, r, scale)


def family_adversary(family="F_eps", **params):
    return FamilyAdversary(family, **params)


def tent_adversary_2d(N=1000, eta=0.05):
    return TentAdversary2D(N, eta)


def load_family_json(path: str) -> Finite:
    return class_from_json(Path(path).read_text())

