"""Named verification experiments, grouped into suites, and the machinery to run them."""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..adversaries import FamilyRandomAdversary, ScaledAdversary, make_adversary, random_family
from ..classes import SeparableTentFunction, g_n_eps_constant
from ..engine import GameConfig, Scenario, run_game
from ..learners import FeasibleMidpoint, Learner, ProjectedLearner, ScaledLearner, make_learner
from ..weights import parse_weight


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_component(text: str) -> tuple[str, dict]:
    """``name`` or ``name:key=value,key=value`` with JSON-ish values."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in {text!r}")
        params[key.strip()] = _value(val.strip())
    return name.strip(), params


def build_learner(text: str) -> Learner:
    """Learner from a spec string; ``name@x<k>`` runs a 1-D learner on coordinate k."""
    name, params = parse_component(text)
    if "@x" in name:
        base, _, axis = name.partition("@x")
        return ProjectedLearner(make_learner(base, **params), int(axis))
    return make_learner(name, **params)


def build_adversary(text: str):
    name, params = parse_component(text)
    return make_adversary(name, **params)


def known_component(text: str, registry: dict) -> bool:
    name = parse_component(text)[0].partition("@x")[0]
    return name in registry


def build_scenario(kind: str = "base", radius: float = 1.0, weight: str | None = None) -> Scenario:
    if kind == "s3":
        return Scenario.s3(parse_weight(weight or "id"))
    if kind in ("s1", "s2"):
        return Scenario(kind, float(radius))
    return Scenario(kind)


@dataclass(frozen=True)
class Expectation:
    bound: str
    value: float
    tolerance: float
    reference: str

    def holds(self, measured: float) -> bool:
        if self.bound == "lower":
            return measured >= self.value - self.tolerance
        if self.bound == "upper":
            return measured <= self.value + self.tolerance
        return abs(measured - self.value) <= self.tolerance * max(1.0, abs(self.value))


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    learner: str
    adversary: str
    expected: Expectation
    p: float = 2.0
    q: float = 2.0
    scenario: str = "base"
    radius: float = 1.0
    weight: str | None = None
    horizon: int = 100000
    dim: int = 1
    seed: int = 0
    measure: str = "loss"
    extra: dict = field(default_factory=dict)

    def config(self, seed: int | None = None) -> GameConfig:
        return GameConfig(self.p, self.q, build_scenario(self.scenario, self.radius, self.weight),
                          self.horizon, self.dim, self.seed if seed is None else seed)

    def params_text(self) -> str:
        bits = [f"p={self.p:g}", f"q={self.q:g}", self.scenario]
        if self.scenario in ("s1", "s2"):
            bits[-1] += f":R={self.radius:g}"
        if self.scenario == "s3":
            bits[-1] += f":{self.weight}"
        bits += [self.learner, self.adversary]
        bits += [f"{k}={v}" for k, v in sorted(self.extra.items())]
        return " ".join(bits)


@dataclass
class ResultRow:
    experiment: str
    params: str
    measured: float
    expected: float
    bound: str
    tolerance: float
    certified: bool
    passed: bool
    wall_clock: float
    reference: str

    FIELDS = ("experiment", "params", "measured", "expected", "bound", "tolerance", "certified",
              "passed", "wall_clock", "reference")


# ---------------------------------------------------------------------------
# measures: each takes a spec and returns (measured value, all certificates ok)

def _play(spec: ExperimentSpec, seed: int | None = None):
    cfg = spec.config(seed)
    adv = build_adversary(spec.adversary)
    tr = run_game(cfg, build_learner(spec.learner), adv)
    return tr, adv.certificate().ok


def measure_loss(spec):
    tr, ok = _play(spec)
    return tr.cumulative_loss, ok


def measure_max_loss(spec):
    """Worst cumulative loss over ``extra['seeds']`` seeded games."""
    worst, ok = 0.0, True
    for s in range(spec.extra.get("seeds", 20)):
        tr, c = _play(spec, spec.seed + s)
        worst, ok = max(worst, tr.cumulative_loss), ok and c
    return worst, ok


def measure_min_error(spec):
    tr, ok = _play(spec)
    return min(r.error for r in tr.rounds if r.t >= 1), ok


def measure_scaling_ratio(spec):
    """Loss of the coupled radius-R game over the loss of the radius-1 game it was built from."""
    R = spec.extra["R"]
    base_cfg = GameConfig(spec.p, spec.q, Scenario(spec.scenario, 1.0), spec.horizon, spec.dim, spec.seed)
    adv1 = build_adversary(spec.adversary)
    t1 = run_game(base_cfg, build_learner(spec.learner), adv1)
    cfg_R = GameConfig(spec.p, spec.q, Scenario(spec.scenario, R), spec.horizon, spec.dim, spec.seed)
    advR = ScaledAdversary(build_adversary(spec.adversary), R)
    tR = run_game(cfg_R, ScaledLearner(build_learner(spec.learner), R, spec.q), advR)
    return tR.cumulative_loss / t1.cumulative_loss, adv1.certificate().ok and advR.certificate().ok


def measure_excess_mistakes(spec):
    """Largest (nonzero-error rounds) - (|F| - 1) over random finite-family games."""
    rng = np.random.default_rng(spec.seed)
    worst, ok = -math.inf, True
    for g in range(spec.extra.get("games", 1000)):
        fam = random_family(rng, int(rng.integers(2, spec.extra.get("max_size", 8) + 1)))
        adv = FamilyRandomAdversary(fam, N=30, radius=None, grid=0.25, greedy=bool(g % 2), seed=g)
        tr = run_game(spec.config(g), FeasibleMidpoint(), adv)
        mistakes = sum(1 for r in tr.rounds if r.t >= 1 and r.error > 0)
        worst, ok = max(worst, mistakes - (len(fam) - 1)), ok and adv.certificate().ok
    return float(worst), ok


MEASURES = {
    "loss": measure_loss,
    "max_loss": measure_max_loss,
    "min_error": measure_min_error,
    "scaling_ratio": measure_scaling_ratio,
    "excess_mistakes": measure_excess_mistakes,
}


def run_spec(spec: ExperimentSpec, timestamps: bool = True) -> ResultRow:
    t0 = time.perf_counter()
    measured, certified = MEASURES[spec.measure](spec)
    wall = round(time.perf_counter() - t0, 4) if timestamps else 0.0
    e = spec.expected
    return ResultRow(spec.name, spec.params_text(), measured, e.value, e.bound, e.tolerance, certified,
                     certified and e.holds(measured), wall, e.reference)


def run_suite(specs: list[ExperimentSpec], jobs: int = 1, timestamps: bool = True) -> list[ResultRow]:
    """Rows in registry order regardless of completion order."""
    if jobs <= 1 or len(specs) <= 1:
        return [run_spec(s, timestamps) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_spec, specs, [timestamps] * len(specs)))


# ---------------------------------------------------------------------------
# the registry

def _sharp_constants() -> list[ExperimentSpec]:
    out = []
    for p, q in [(2, 2), (3, 2), (4, 3)]:
        for adv in ("budget:N=60", "random_target:N=60"):
            out.append(ExperimentSpec(
                f"unit_budget_{adv.split(':')[0]}_p{p}_q{q}", "linint_prime", adv,
                Expectation("upper", 1.0, 1e-6, "opt' = opt* = 1 for p >= q >= 2"),
                p=p, q=q, scenario="s1", measure="max_loss", extra={"seeds": 40}))
    out.append(ExperimentSpec(
        "unit_budget_attained_p2_q2", "linint_prime", "eps_step:N=10000",
        Expectation("lower", 0.9, 0.0, "eps-steps exhaust the unit budget: loss N eps^2 = 1"),
        p=2, q=2, scenario="s1"))
    out.append(ExperimentSpec(
        "identity_weight_upper", "linint", "budget:N=60,radius=null",
        Expectation("upper", 1.0, 1e-6, "opt^id_2(G_2) = 1"),
        p=2, q=2, scenario="s3", weight="id", measure="max_loss", extra={"seeds": 40}))
    for c in (0.5, 1, 2):
        for learner in ("linint", "zero"):
            out.append(ExperimentSpec(
                f"exp_weight_c{c:g}_{learner}", learner, "two_round_weighted",
                Expectation("equals" if learner == "linint" else "lower", 1 / (c * math.e), 1e-9,
                            "opt^{exp,c}_2(G_2) = 1/(ce)"),
                p=2, q=2, scenario="s3", weight=f"exp:c={c:g}"))
    for n, r, p in [(1, 1, 1), (3, 2, 2), (5, 0.5, 3)]:
        out.append(ExperimentSpec(
            f"truncated_linear_n{n}", "span", f"basis_adversary:n={n},r={r}",
            Expectation("equals", n * r ** p, 1e-9, "opt_p(G_L(n, r)) = n r^p"),
            p=p, q=2, dim=n))
        out.append(ExperimentSpec(
            f"truncated_linear_n{n}_exp", "span", f"basis_adversary:n={n},r={r},scale=0.001",
            Expectation("lower", n * r ** p * math.exp(-1e-3), 1e-12, "weighted loss >= n r^p e^{-c eps}"),
            p=p, q=2, dim=n, scenario="s3", weight="exp:c=1"))
    return out


def _divergence() -> list[ExperimentSpec]:
    out = []
    for N in (100, 1000, 10000):
        for learner in ("linint_prime", "zero"):
            out.append(ExperimentSpec(
                f"eps_step_N{N}_{learner}", learner, f"eps_step:N={N}",
                Expectation("lower", N ** (1 / 3) / 4, 0.0, "loss >= N (eps/2)^p = N^{1-p/q} / 2^p"),
                p=2, q=3, scenario="s1"))
    for learner in ("linint", "linint_prime", "zero", "feasible_midpoint", "span"):
        out.append(ExperimentSpec(
            f"geometric_escape_{learner}", learner, "geometric_escape:c=2,h=1,N=1000",
            Expectation("lower", 500.0, 0.0, "forced error h/2 per round, N = 1000"), p=1, q=2))
    H = math.fsum(1 / k for k in range(1, 1002))
    out.append(ExperimentSpec(
        "slow_decay_invlog2", "linint", "slow_decay_escape:c=2,h=1,N=1000",
        Expectation("lower", 0.9 * 0.5 * H, 0.0, "sum g(2^i) (h/2)^p grows like the harmonic series"),
        p=1, q=2, scenario="s3", weight="invlog2"))
    return out


def _scaling_law() -> list[ExperimentSpec]:
    out = []
    for p, q in [(2, 2), (3, 2)]:
        for R in (0.5, 1, 2, 4):
            for seed in range(3):
                out.append(ExperimentSpec(
                    f"scaling_p{p}_q{q}_R{R:g}_s{seed}", "linint_prime", "budget:N=40",
                    Expectation("equals", R ** ((q - 1) * p / q), 1e-9, "opt^{',R} = R^{(q-1)p/q} opt^{',1}"),
                    p=p, q=q, scenario="s1", seed=seed, measure="scaling_ratio", extra={"R": R}))
    return out


def _separations() -> list[ExperimentSpec]:
    out = []
    for learner in ("feasible_midpoint", "linint", "zero"):
        out.append(ExperimentSpec(
            f"F_eps_forced_{learner}", learner, "family_adversary:family=F_eps,eps=0.01",
            Expectation("lower", 1.5, 0.0, "opt*(F_eps) >= 1 + 2^{-p}"), p=1, scenario="s2"))
    out.append(ExperimentSpec(
        "F_eps_s1_upper", "feasible_midpoint", "family_random:family=F_eps,eps=0.01",
        Expectation("upper", 1.01, 1e-12, "opt'(F_eps) <= 1 + eps^p"),
        p=1, scenario="s1", measure="max_loss", extra={"seeds": 100}))
    for n in (4, 16, 64):
        out.append(ExperimentSpec(
            f"F_n_eps_forced_n{n}", "feasible_midpoint", f"family_adversary:family=F_n_eps,n={n},eps=0.0001",
            Expectation("lower", math.log2(n), 0.0, "opt*(F_{n,eps}) >= log2 n"), p=1, scenario="s2"))
        out.append(ExperimentSpec(
            f"F_n_eps_s1_upper_n{n}", "feasible_midpoint",
            f"family_random:family=F_n_eps,n={n},eps=0.0001,N=60",
            Expectation("upper", 1 + n * 1e-4, 1e-12, "opt'(F_{n,eps}) <= 1 + (n eps)^p"),
            p=1, scenario="s1", measure="max_loss", extra={"seeds": 40}))
    for learner in ("feasible_midpoint", "linint", "zero"):
        out.append(ExperimentSpec(
            f"G_n_eps_forced_{learner}", learner, "family_adversary:family=G_n_eps,n=5",
            Expectation("lower", g_n_eps_constant(5, 2), 1e-12,
                        "opt*(G_{n,eps}) >= (n-1) / ((1 + (n-1)^{1/p}) / 2)^p"), p=2, scenario="s2"))
    out.append(ExperimentSpec(
        "finite_family_mistakes", "feasible_midpoint", "family_random",
        Expectation("upper", 0.0, 0.0, "at most |F| - 1 erroneous rounds"),
        measure="excess_mistakes", extra={"games": 2000}))
    return out


def _weights() -> list[ExperimentSpec]:
    out = []
    for w, gamma in [("id", 1.0), ("exp:c=1", 1 / math.e), ("exp:c=4", 1 / (4 * math.e)), ("indicator", 1.0)]:
        out.append(ExperimentSpec(
            f"two_round_{w}", "linint", "two_round_weighted",
            Expectation("lower", gamma, 1e-9, "forced weighted loss approaches sup_z z g(z)"),
            p=2, q=2, scenario="s3", weight=w))
    return out


def _multivariable() -> list[ExperimentSpec]:
    a = SeparableTentFunction(2.0, 0.05).a
    out = []
    for learner in ("linint@x0", "zero", "feasible_midpoint"):
        out.append(ExperimentSpec(
            f"tent_error_{learner}", learner, "tent_adversary_2d:N=1000",
            Expectation("lower", a / 2, 1e-15, "every unit step forces error a/2"),
            p=2, q=2, dim=2, scenario="s2", measure="min_error"))
    g1 = math.exp(-1)
    out.append(ExperimentSpec(
        "tent_s3_exp", "feasible_midpoint", "tent_adversary_2d:N=1000",
        Expectation("lower", 1000 * g1 * (a / 2) ** 2, 1e-12, "weighted loss >= N g(1) (a/2)^p"),
        p=2, q=2, dim=2, scenario="s3", weight="exp:c=1"))
    return out


SUITES = {
    "sharp_constants": _sharp_constants,
    "divergence": _divergence,
    "scaling_law": _scaling_law,
    "separations": _separations,
    "weights": _weights,
    "multivariable": _multivariable,
}


def suite(name: str) -> list[ExperimentSpec]:
    if name == "all":
        specs = [s for build in SUITES.values() for s in build()]
    elif name in SUITES:
        specs = SUITES[name]()
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise RuntimeError("duplicate experiment names in registry")
    return specs


def row_dict(row: ResultRow) -> dict:
    return asdict(row)
