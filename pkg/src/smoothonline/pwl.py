"""Piecewise-linear functions on the real line with constant extension.

A :class:`BreakpointFunction` is the interpolant of a finite point set: linear
between consecutive breakpoints, flat to the left of the first one and to the
right of the last one. The empty point set is the zero function.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf


def interp(xs: Sequence[float], ys: Sequence[float], x: float) -> float:
    """Evaluate the constant-extension interpolant of sorted ``xs``/``ys`` at ``x``."""
    n = len(xs)
    if n == 0:
        return 0.0
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    i = bisect_left(xs, x)
    if xs[i] == x:
        return ys[i]
    x0, x1 = xs[i - 1], xs[i]
    y0, y1 = ys[i - 1], ys[i]
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0)


def segment_action(du: float, dv: float, q: float) -> float:
    """q-action of a single segment of width ``du`` and rise ``dv``."""
    if dv == 0.0:
        return 0.0
    if q == INF:
        return abs(dv) / du
    den = du ** (q - 1.0)
    if den == 0.0:
        # width underflows: use the slope form, saturating at inf
        try:
            return abs(dv) * (abs(dv) / du) ** (q - 1.0)
        except OverflowError:
            return INF
    return abs(dv) ** q / den


@dataclass(frozen=True)
class BreakpointFunction:
    us: tuple[float, ...] = ()
    vs: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.us) != len(self.vs):
            raise ValueError("breakpoint coordinate/value length mismatch")
        for a, b in zip(self.us, self.us[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must be strictly increasing, got {a} then {b}")

    @classmethod
    def from_points(cls, points: Iterable[tuple[float, float]]) -> "BreakpointFunction":
        pts = sorted((float(u), float(v)) for u, v in points)
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts))

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.us, self.vs))

    def __len__(self) -> int:
        return len(self.us)

    def __call__(self, x: float) -> float:
        return interp(self.us, self.vs, x)

    def slopes(self) -> list[float]:
        return [(v1 - v0) / (u1 - u0) for u0, u1, v0, v1 in zip(self.us, self.us[1:], self.vs, self.vs[1:])]

    def to_json(self) -> str:
        return json.dumps([[u, v] for u, v in self.points])

    @classmethod
    def from_json(cls, text: str | list) -> "BreakpointFunction":
        data = json.loads(text) if isinstance(text, str) else text
        return cls.from_points((u, v) for u, v in data)


def evaluate(f: BreakpointFunction, x: float) -> float:
    return interp(f.us, f.vs, x)


def q_action(f: BreakpointFunction, q: float) -> float:
    """Integral of ``|f'|**q`` over the line; for ``q = inf`` the largest absolute slope.

    Extension rays are flat and contribute nothing.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1 (or inf), got {q}")
    us, vs = f.us, f.vs
    if q == INF:
        return max((abs(s) for s in f.slopes()), default=0.0)
    total = 0.0
    for i in range(len(us) - 1):
        total += segment_action(us[i + 1] - us[i], vs[i + 1] - vs[i], q)
    return total


def insert_point(f: BreakpointFunction, x: float, y: float) -> BreakpointFunction:
    x, y = float(x), float(y)
    i = bisect_left(f.us, x)
    if i < len(f.us) and f.us[i] == x:
        raise ValueError(f"x = {x} is already a breakpoint")
    return BreakpointFunction(f.us[:i] + (x,) + f.us[i:], f.vs[:i] + (y,) + f.vs[i:])


def insertion_gain(us: Sequence[float], vs: Sequence[float], x: float, y: float, q: float) -> float:
    """Change in q-action from adding ``(x, y)`` to the sorted point set ``us``/``vs``.

    ``x`` must not already be present. Runs in O(log n).
    """
    n = len(us)
    if n == 0:
        return 0.0
    i = bisect_left(us, x)
    if i == 0:
        return segment_action(us[0] - x, vs[0] - y, q)
    if i == n:
        return segment_action(x - us[-1], y - vs[-1], q)
    a, b = us[i - 1], us[i]
    ya, yb = vs[i - 1], vs[i]
    return (segment_action(x - a, y - ya, q) + segment_action(b - x, yb - y, q)
            - segment_action(b - a, yb - ya, q))


def scale(f: BreakpointFunction, R: float, q: float) -> BreakpointFunction:
    """The radius-scaling operator ``x -> R**(-(q-1)/q) * f(R x)``.

    Preserves the q-action exactly (up to rounding).
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    if q == INF or q <= 1:
        raise ValueError("scaling needs a finite q > 1")
    if R == 1:
        return f
    amp = R ** (-(q - 1.0) / q)
    return BreakpointFunction(tuple(u / R for u in f.us), tuple(amp * v for v in f.vs))


@dataclass(frozen=True)
class WitnessIntegrals:
    """Truncated integrals of one non-nesting witness."""
    name: str
    q_integral: float
    r_integral: float
    sup_slope: float
    truncation: str


@dataclass(frozen=True)
class NonNestingReport:
    q: float
    r: float
    spikes: int
    half_width: float
    witnesses: dict[str, WitnessIntegrals] = field(default_factory=dict)

    def __getitem__(self, name: str) -> WitnessIntegrals:
        return self.witnesses[name]


def nonnesting_witnesses(q: float, r: float, spikes: int = 40, half_width: float = 1e6) -> NonNestingReport:
    """Truncated q- and r-integrals of four functions separating the classes G_q.

    * ``identity``: f(x) = x on [-T, T]; in G_inf, outside every finite G_q.
    * ``spike_train``: slope 2**n on [n, n + 2**(-n(q+1))], n = 1..N; q-integral
      1 - 2**-N, unbounded slope.
    * ``tail``: slope (1 + |x|)**(-1/q) on [-T, T]; q-integral grows like 2 log T,
      r-integral stays below 2 / (r/q - 1).
    * ``cusp``: slope |x|**(-1/r) on 1/T <= |x| < 1; r-integral grows like 2 log T,
      q-integral stays below 2 / (1 - q/r).
    """
    if not (1 <= q < r < INF):
        raise ValueError(f"need 1 <= q < r < inf, got q={q}, r={r}")
    if spikes < 1 or half_width <= 1:
        raise ValueError("truncation parameters must be spikes >= 1 and half_width > 1")
    T = float(half_width)
    out: dict[str, WitnessIntegrals] = {}

    out["identity"] = WitnessIntegrals("identity", 2 * T, 2 * T, 1.0, f"[-{T:g}, {T:g}]")

    sq = sr = 0.0
    for n in range(1, spikes + 1):
        width = 2.0 ** (-n * (q + 1))
        sq += 2.0 ** (n * q) * width
        sr += 2.0 ** (n * r) * width
    out["spike_train"] = WitnessIntegrals("spike_train", sq, sr, 2.0 ** spikes, f"{spikes} spikes")

    # (1+x)^(-s) integrated over [0, T], doubled for symmetry
    def tail_integral(s: float) -> float:
        if s == 1:
            return 2 * math.log1p(T)
        return 2 * (1 - (1 + T) ** (1 - s)) / (s - 1)

    out["tail"] = WitnessIntegrals("tail", tail_integral(1.0), tail_integral(r / q), 1.0, f"[-{T:g}, {T:g}]")

    # x^(-s) integrated over [1/T, 1], doubled
    def cusp_integral(s: float) -> float:
        if s == 1:
            return 2 * math.log(T)
        return 2 * (1 - T ** (s - 1)) / (1 - s)

    out["cusp"] = WitnessIntegrals("cusp", cusp_integral(q / r), cusp_integral(1.0), T ** (1 / r),
                                   f"1/{T:g} <= |x| < 1")
    return NonNestingReport(q, r, spikes, T, out)
