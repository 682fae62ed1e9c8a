"""Distance weights for the weighted-loss scenario and their suprema."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .pwl import BreakpointFunction

INF = math.inf
SUP_RTOL = 1e-8
# relative slack on "distance <= radius", shared with the radius scenarios
RADIUS_RTOL = 1e-12
# search window for numeric suprema, in log10(z)
LOG_LO, LOG_HI = -9.0, 12.0


@dataclass(frozen=True)
class WeightFunction:
    """A weight g: (0, inf) -> [0, inf).

    ``kind`` is one of ``identity`` (1/z), ``exp`` (exp(-c z)), ``indicator``
    (1 for z <= 1), ``one`` or ``custom``. Custom weights wrap a callable or a
    tabulated :class:`BreakpointFunction`; ``nonincreasing`` declares monotonicity and
    is spot-checked on a log grid.
    """
    kind: str
    c: float = 1.0
    func: Callable[[float], float] | None = field(default=None, compare=False)
    label: str = ""
    nonincreasing: bool | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "exp", "indicator", "one", "custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "exp" and not self.c > 0:
            raise ValueError(f"exponential weight needs c > 0, got {self.c}")
        if self.kind == "custom":
            if self.func is None:
                raise ValueError("custom weight needs a callable")
            zs = np.logspace(-6, 6, 241)
            gs = np.array([self.func(float(z)) for z in zs])
            if np.any(gs < 0) or not np.all(np.isfinite(gs)):
                raise ValueError("custom weight must be finite and nonnegative on (0, inf)")
            if self.nonincreasing and np.any(np.diff(gs) > 1e-12 * np.maximum(1.0, np.abs(gs[:-1]))):
                raise ValueError("custom weight declared nonincreasing but increases on the probe grid")

    @classmethod
    def identity(cls) -> "WeightFunction":
        return cls("identity", nonincreasing=True)

    @classmethod
    def exponential(cls, c: float) -> "WeightFunction":
        return cls("exp", c=float(c), nonincreasing=True)

    @classmethod
    def indicator(cls) -> "WeightFunction":
        return cls("indicator", nonincreasing=True)

    @classmethod
    def one(cls) -> "WeightFunction":
        return cls("one", nonincreasing=True)

    @classmethod
    def custom(cls, func: Callable[[float], float], label: str = "custom",
               nonincreasing: bool | None = None) -> "WeightFunction":
        return cls("custom", func=func, label=label, nonincreasing=nonincreasing)

    @classmethod
    def tabulated(cls, points, label: str = "table", nonincreasing: bool | None = None) -> "WeightFunction":
        table = BreakpointFunction.from_points(points)
        return cls.custom(table, label=label, nonincreasing=nonincreasing)

    @property
    def name(self) -> str:
        if self.kind == "exp":
            return f"exp:c={self.c:g}"
        if self.kind == "identity":
            return "id"
        if self.kind == "custom":
            return f"custom:{self.label}"
        return self.kind

    def __call__(self, z: float) -> float:
        if self.kind == "identity":
            return INF if z == 0 else 1.0 / z
        if self.kind == "exp":
            return math.exp(-self.c * z)
        if self.kind == "indicator":
            return 1.0 if z <= 1 + RADIUS_RTOL else 0.0
        if self.kind == "one":
            return 1.0
        return float(self.func(z))

    def positive(self) -> bool:
        return self.kind in ("identity", "exp", "one") or (
            self.kind == "custom" and all(self(z) > 0 for z in np.logspace(-6, 6, 121)))


def inverse_log2(z: float) -> float:
    """1 / log2(1 + z): decays too slowly for sum_i g(c**i) to converge."""
    return 1.0 / math.log2(1.0 + z)


def slow_log() -> WeightFunction:
    return WeightFunction.custom(inverse_log2, label="invlog2", nonincreasing=True)


def parse_weight(text: str) -> WeightFunction:
    """Parse ``id``, ``exp:c=<v>``, ``indicator``, ``one``, ``invlog2`` or ``custom:<json file>``.

    A custom file holds ``{"points": [[z, g], ...], "nonincreasing": bool}``.
    """
    text = text.strip()
    if text in ("id", "identity"):
        return WeightFunction.identity()
    if text == "indicator":
        return WeightFunction.indicator()
    if text in ("one", "1"):
        return WeightFunction.one()
    if text in ("invlog2", "custom:invlog2"):
        return slow_log()
    if text.startswith("exp"):
        c = 1.0
        if ":" in text:
            key, _, val = text.split(":", 1)[1].partition("=")
            if key.strip() != "c":
                raise ValueError(f"bad exponential weight spec {text!r}")
            c = float(val)
        return WeightFunction.exponential(c)
    if text.startswith("custom:"):
        path = Path(text.split(":", 1)[1])
        data = json.loads(path.read_text())
        return WeightFunction.tabulated(data["points"], label=path.name,
                                        nonincreasing=data.get("nonincreasing"))
    raise ValueError(f"unknown weight {text!r}")


@dataclass(frozen=True)
class Supremum:
    value: float
    argmax: float | None


def _numeric_sup(phi: Callable[[float], float]) -> Supremum:
    """Supremum of phi over (0, inf) by a log grid scan refined with golden-section search.

    Reported as infinite when the scan maximum sits at the top of the window and phi
    is still growing there. Relative accuracy is about ``SUP_RTOL`` for smooth unimodal phi.
    """
    logs = np.linspace(LOG_LO, LOG_HI, 2101)
    vals = np.array([phi(10.0 ** s) for s in logs])
    if np.isinf(vals).any():
        return Supremum(INF, None)
    i = int(np.argmax(vals))
    if i == len(logs) - 1 and vals[-1] > vals[-2]:
        return Supremum(INF, None)
    if i == 0 and vals[0] > vals[1]:
        return Supremum(float(vals[0]), float(10.0 ** logs[0]))
    lo, mid, hi = logs[max(i - 1, 0)], logs[i], logs[min(i + 1, len(logs) - 1)]
    if lo == mid or hi == mid:
        return Supremum(float(vals[i]), float(10.0 ** mid))
    try:
        res = minimize_scalar(lambda s: -phi(10.0 ** s), bracket=(lo, mid, hi), method="golden",
                              options={"xtol": SUP_RTOL})
        s = float(res.x)
        v = -float(res.fun)
    except ValueError:
        s, v = mid, float(vals[i])
    if v < vals[i]:
        s, v = mid, float(vals[i])
    return Supremum(v, float(10.0 ** s))


def sup_z_times_g(weight: WeightFunction) -> Supremum:
    """``sup_{z>0} z * g(z)`` with its maximizer (closed form for registered weights)."""
    if weight.kind == "identity":
        return Supremum(1.0, 1.0)
    if weight.kind == "exp":
        return Supremum(1.0 / (weight.c * math.e), 1.0 / weight.c)
    if weight.kind == "one":
        return Supremum(INF, None)
    if weight.kind == "indicator":
        return Supremum(1.0, 1.0)
    return _numeric_sup(lambda z: z * weight(z))


def ratio_constant(g: WeightFunction, h: WeightFunction) -> float:
    """``C_{g,h} = sup_{z>0} h(z) / g(z)``; closed forms where known, numeric otherwise."""
    if g == h and g.kind != "custom":
        return 1.0
    if g.kind == "identity":
        return sup_z_times_g(h).value
    if g.kind == "one":
        if h.kind in ("exp", "indicator", "one"):
            return 1.0
        if h.kind == "identity":
            return INF
        return _numeric_sup(lambda z: h(z)).value
    if g.kind == "exp" and h.kind == "exp":
        return 1.0 if h.c >= g.c else INF
    if g.kind == "exp" and h.kind in ("one", "identity"):
        return INF
    if g.kind == "exp" and h.kind == "indicator":
        return math.exp(g.c)

    def ratio(z: float) -> float:
        gz = g(z)
        return INF if gz == 0 else h(z) / gz

    return _numeric_sup(ratio).value
