"""Round-based learner/adversary protocol with loss accounting for every scenario.

One game alternates: the adversary names an input, the learner predicts, the
adversary reveals the label. Round 0 is never scored. Scenario rules:

* ``base``: every round t >= 1 counts with weight 1.
* ``s1``: as base, but each input must lie within ``radius`` of an earlier one.
* ``s2``: inputs are free; a round counts only if it lies within ``radius`` of an earlier input.
* ``s3``: every round counts, weighted by ``weight(delta_t)``; inputs must be distinct.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .classes import Gq, Membership, is_member
from .pwl import BreakpointFunction, interp
from .weights import INF, RADIUS_RTOL, WeightFunction, ratio_constant

LOSS_RTOL = 1e-9


class ProtocolViolation(RuntimeError):
    def __init__(self, t: int, message: str):
        super().__init__(f"round {t}: {message}")
        self.t = t


class DuplicateInputError(ProtocolViolation):
    pass


class AdversaryInconsistencyError(RuntimeError):
    """Revealed labels are not consistent with any member of the declared family."""


@dataclass(frozen=True)
class Scenario:
    kind: str = "base"
    radius: float = 1.0
    weight: WeightFunction | None = None

    def __post_init__(self):
        if self.kind not in ("base", "s1", "s2", "s3"):
            raise ValueError(f"unknown scenario {self.kind!r}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.kind == "s3" and self.weight is None:
            raise ValueError("scenario s3 needs a weight function")

    @classmethod
    def base(cls) -> "Scenario":
        return cls("base")

    @classmethod
    def s1(cls, radius: float = 1.0) -> "Scenario":
        return cls("s1", radius)

    @classmethod
    def s2(cls, radius: float = 1.0) -> "Scenario":
        return cls("s2", radius)

    @classmethod
    def s3(cls, weight: WeightFunction) -> "Scenario":
        return cls("s3", weight=weight)

    def within(self, delta: float) -> bool:
        return delta <= self.radius * (1 + RADIUS_RTOL)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind}
        if self.kind in ("s1", "s2"):
            d["radius"] = self.radius
        if self.kind == "s3":
            d["weight"] = self.weight.name
        return d


@dataclass(frozen=True)
class GameConfig:
    p: float = 2.0
    q: float = 2.0
    scenario: Scenario = field(default_factory=Scenario)
    horizon: int = 100
    dim: int = 1
    seed: int = 0

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if not self.q > 1:
            raise ValueError(f"q must exceed 1, got {self.q}")
        if self.horizon < 1 or self.dim < 1:
            raise ValueError("horizon and dimension must be at least 1")

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "scenario": self.scenario.to_dict(),
                "horizon": self.horizon, "dim": self.dim, "seed": self.seed}

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class Round:
    t: int
    x: Any
    y_hat: float
    y_true: float
    delta: float | None
    counted: bool
    weight: float
    loss_term: float

    @property
    def error(self) -> float:
        return abs(self.y_hat - self.y_true)

    def to_dict(self) -> dict:
        x = list(self.x) if isinstance(self.x, (tuple, list, np.ndarray)) else self.x
        return {"t": self.t, "x": x, "y_hat": self.y_hat, "y_true": self.y_true, "delta": self.delta,
                "counted": self.counted, "weight": self.weight, "loss_term": self.loss_term}


@dataclass
class Transcript:
    config: GameConfig
    rounds: list[Round] = field(default_factory=list)
    learner: str = ""
    adversary: str = ""

    @property
    def cumulative_loss(self) -> float:
        return math.fsum(r.loss_term for r in self.rounds if r.t >= 1)

    def counted_set(self) -> set[int]:
        return {r.t for r in self.rounds if r.counted}

    def inputs(self) -> list:
        return [r.x for r in self.rounds]

    def labels(self) -> list[float]:
        return [r.y_true for r in self.rounds]

    def predictions(self) -> list[float]:
        return [r.y_hat for r in self.rounds]

    def interpolant(self) -> BreakpointFunction:
        """Piecewise-linear interpolant of the revealed (input, label) pairs (dimension 1)."""
        if self.config.dim != 1:
            raise ValueError("interpolant is defined for one-dimensional games only")
        pts: dict[float, float] = {}
        for r in self.rounds:
            pts.setdefault(float(r.x), r.y_true)
        return BreakpointFunction.from_points(pts.items())

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict()) + "\n" for r in self.rounds)

    @classmethod
    def from_jsonl(cls, text: str, config: GameConfig) -> "Transcript":
        rounds = []
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                x = tuple(d["x"]) if isinstance(d["x"], list) else d["x"]
                rounds.append(Round(d["t"], x, d["y_hat"], d["y_true"], d["delta"], d["counted"],
                                    d["weight"], d["loss_term"]))
        return cls(config, rounds)

    SUMMARY_FIELDS = ("config_hash", "learner", "adversary", "scenario", "p", "q", "rounds", "cumulative_loss")

    def summary(self) -> dict:
        sc = self.config.scenario
        scen = sc.kind if sc.kind in ("base",) else (
            f"{sc.kind}:R={sc.radius:g}" if sc.kind != "s3" else f"s3:{sc.weight.name}")
        return {"config_hash": self.config.config_hash(), "learner": self.learner,
                "adversary": self.adversary, "scenario": scen, "p": self.config.p, "q": self.config.q,
                "rounds": len(self.rounds), "cumulative_loss": repr(self.cumulative_loss)}

    def summary_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.SUMMARY_FIELDS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.summary())
        return buf.getvalue()


class LearnerState:
    """What the learner has seen: revealed (input, label) pairs in arrival order.

    For one-dimensional games a sorted view (``xs``, ``ys``) is maintained too, so
    interpolating learners run in logarithmic time per round.
    """

    def __init__(self, class_info=None):
        self.history: list[tuple[Any, float]] = []
        self.class_info = class_info
        self.xs: list[float] = []
        self.ys: list[float] = []

    def record(self, x, y: float):
        self.history.append((x, y))
        if isinstance(x, (int, float)):
            x = float(x)
            i = bisect_left(self.xs, x)
            if i < len(self.xs) and self.xs[i] == x:
                self.ys[i] = y
            else:
                self.xs.insert(i, x)
                self.ys.insert(i, y)

    def interpolate(self, x: float) -> float:
        return interp(self.xs, self.ys, x)

    def __len__(self) -> int:
        return len(self.history)


class Learner:
    name = "learner"

    def predict(self, state: LearnerState, x) -> float:
        raise NotImplementedError


class Adversary:
    """Emits inputs and adaptive labels. ``next_input`` returning ``None`` ends the game."""
    name = "adversary"
    class_info = None
    s1_admissible = True

    def start(self, config: GameConfig):
        self.config = config

    def next_input(self, t: int):
        raise NotImplementedError

    def reveal(self, t: int, x, y_hat: float) -> float:
        raise NotImplementedError

    def certificate(self) -> "Certificate":
        return Certificate(True, {})


@dataclass
class Certificate:
    ok: bool
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def farther(y_hat: float, a: float, b: float) -> float:
    """Whichever of ``a``, ``b`` is farther from ``y_hat``; ties go to the larger label."""
    da, db = abs(a - y_hat), abs(b - y_hat)
    if da > db:
        return a
    if db > da:
        return b
    return max(a, b)


class _NearestTracker:
    """Minimum distance from a new input to all earlier ones."""

    def __init__(self, dim: int):
        self.dim = dim
        self.sorted: list[float] = []
        self.points = np.empty((16, dim))
        self.n = 0

    def distance(self, x) -> float | None:
        if self.n == 0:
            return None
        if self.dim == 1:
            xs = self.sorted
            i = bisect_left(xs, x)
            best = INF
            if i < len(xs):
                best = xs[i] - x
            if i > 0:
                best = min(best, x - xs[i - 1])
            return float(best)
        diff = self.points[:self.n] - np.asarray(x, dtype=float)
        return float(np.sqrt(np.min(np.einsum("ij,ij->i", diff, diff))))

    def add(self, x):
        if self.dim == 1:
            insort(self.sorted, x)
        else:
            if self.n == len(self.points):
                self.points = np.concatenate([self.points, np.empty_like(self.points)])
            self.points[self.n] = x
        self.n += 1


def _as_input(x, dim: int):
    if dim == 1:
        if isinstance(x, (tuple, list, np.ndarray)):
            if len(x) != 1:
                raise ValueError(f"expected a scalar input, got {x!r}")
            x = x[0]
        return float(x)
    x = tuple(float(v) for v in x)
    if len(x) != dim:
        raise ValueError(f"expected a {dim}-dimensional input, got {x!r}")
    return x


def score(scenario: Scenario, t: int, delta: float | None) -> tuple[bool, float]:
    """(counted, weight) for a round under the scenario rules."""
    if t == 0:
        return False, 0.0
    if scenario.kind in ("base", "s1"):
        return True, 1.0
    if scenario.kind == "s2":
        inside = scenario.within(delta)
        return inside, 1.0 if inside else 0.0
    return True, scenario.weight(delta)


def _term(weight: float, error: float, p: float) -> float:
    """weight * error**p, with a vanishing error contributing 0 even against an infinite weight."""
    e = error ** p
    return weight * e if e > 0 and weight > 0 else 0.0


def run_game(config: GameConfig, learner: Learner, adversary: Adversary, class_info=None) -> Transcript:
    adversary.start(config)
    state = LearnerState(class_info if class_info is not None else getattr(adversary, "class_info", None))
    tracker = _NearestTracker(config.dim)
    sc = config.scenario
    tr = Transcript(config, learner=getattr(learner, "name", type(learner).__name__),
                    adversary=getattr(adversary, "name", type(adversary).__name__))
    for t in range(config.horizon):
        raw = adversary.next_input(t)
        if raw is None:
            break
        x = _as_input(raw, config.dim)
        delta = tracker.distance(x)
        if t >= 1:
            if sc.kind == "s1" and not sc.within(delta):
                raise ProtocolViolation(t, f"input {x!r} is {delta:g} from all earlier inputs (radius {sc.radius:g})")
            if sc.kind == "s3" and delta == 0:
                raise DuplicateInputError(t, f"input {x!r} repeats an earlier input")
        y_hat = float(learner.predict(state, x))
        y = float(adversary.reveal(t, x, y_hat))
        counted, weight = score(sc, t, delta)
        loss = _term(weight, abs(y_hat - y), config.p) if counted else 0.0
        tr.rounds.append(Round(t, x, y_hat, y, delta, counted, weight, loss))
        state.record(x, y)
        tracker.add(x)
    return tr


# ---------------------------------------------------------------------------
# transcript-level checks

def weighted_loss(transcript: Transcript, h: WeightFunction) -> float:
    """The transcript's loss recomputed with every round t >= 1 weighted by ``h(delta_t)``."""
    p = transcript.config.p
    return math.fsum(_term(h(r.delta), r.error, p) for r in transcript.rounds if r.t >= 1)


@dataclass(frozen=True)
class RatioCheck:
    holds: bool
    constant: float
    loss_h: float
    loss_g: float
    vacuous: bool = False


def ratio_bound_check(transcript: Transcript, g: WeightFunction, h: WeightFunction,
                      constant: float | None = None) -> RatioCheck:
    """Check ``L^h <= C_{g,h} L^g`` on one transcript; an infinite constant is vacuous."""
    C = ratio_constant(g, h) if constant is None else constant
    lh, lg = weighted_loss(transcript, h), weighted_loss(transcript, g)
    if C == INF:
        return RatioCheck(True, C, lh, lg, vacuous=True)
    bound = C * lg
    return RatioCheck(lh <= bound + LOSS_RTOL * max(abs(bound), 1e-300), C, lh, lg)


def _deltas(inputs: Sequence, dim: int) -> list[float | None]:
    tracker = _NearestTracker(dim)
    out = []
    for x in inputs:
        x = _as_input(x, dim)
        out.append(tracker.distance(x))
        tracker.add(x)
    return out


def penalized_rounds(inputs: Sequence, radius: float, dim: int = 1) -> set[int]:
    sc = Scenario.s2(radius)
    return {t for t, d in enumerate(_deltas(inputs, dim)) if t >= 1 and sc.within(d)}


def is_admissible(inputs: Sequence, radius: float, dim: int = 1) -> bool:
    return len(penalized_rounds(inputs, radius, dim)) == max(len(inputs) - 1, 0)


@dataclass(frozen=True)
class MonotonicityReport:
    penalized_small: set
    penalized_large: set
    nested: bool
    loss_small: float | None
    loss_large: float | None
    admissible_small: bool
    admissible_large: bool

    @property
    def ok(self) -> bool:
        losses_ok = self.loss_small is None or self.loss_small <= self.loss_large
        adm_ok = (not self.admissible_small) or self.admissible_large
        return self.nested and losses_ok and adm_ok


def scenario_monotonicity_check(inputs: Sequence, r_small: float, r_large: float,
                                predictions: Sequence[float] | None = None,
                                labels: Sequence[float] | None = None,
                                p: float = 2.0, dim: int = 1) -> MonotonicityReport:
    """Penalized-round sets, radius-limited losses and admissibility at two radii."""
    if r_small > r_large:
        raise ValueError("need r_small <= r_large")
    ts, tl = penalized_rounds(inputs, r_small, dim), penalized_rounds(inputs, r_large, dim)
    ls = ll = None
    if predictions is not None and labels is not None:
        errs = [abs(a - b) ** p for a, b in zip(predictions, labels)]
        ls = math.fsum(errs[t] for t in sorted(ts))
        ll = math.fsum(errs[t] for t in sorted(tl))
    return MonotonicityReport(ts, tl, ts <= tl, ls, ll,
                              is_admissible(inputs, r_small, dim), is_admissible(inputs, r_large, dim))


def validate_transcript(transcript: Transcript, q: float | None = None) -> Membership:
    """Fit the revealed labels with their interpolant and test membership in G_q."""
    return is_member(Gq(transcript.config.q if q is None else q), transcript.interpolant())


def rescale_transcript(transcript: Transcript, R: float) -> Transcript:
    """Map a radius-1 transcript to the coupled radius-R one.

    Inputs are stretched by ``R`` and values multiplied by ``R**((q-1)/q)``; each
    counted loss term grows by ``R**((q-1)p/q)``.
    """
    cfg = transcript.config
    sc = cfg.scenario
    if sc.kind not in ("s1", "s2"):
        raise ValueError("rescaling applies to radius scenarios s1/s2")
    amp = R ** ((cfg.q - 1) / cfg.q)
    new_cfg = GameConfig(cfg.p, cfg.q, Scenario(sc.kind, sc.radius * R), cfg.horizon, cfg.dim, cfg.seed)
    out = Transcript(new_cfg, learner=transcript.learner, adversary=transcript.adversary)
    for r in transcript.rounds:
        x = R * r.x if cfg.dim == 1 else tuple(R * v for v in r.x)
        delta = None if r.delta is None else R * r.delta
        y_hat, y = amp * r.y_hat, amp * r.y_true
        loss = abs(y_hat - y) ** cfg.p if r.counted else 0.0
        out.rounds.append(Round(r.t, x, y_hat, y, delta, r.counted, r.weight, loss))
    return out


def transcripts_from_games(games: Iterable[tuple[GameConfig, Learner, Adversary]]) -> list[Transcript]:
    return [run_game(c, l, a) for c, l, a in games]
