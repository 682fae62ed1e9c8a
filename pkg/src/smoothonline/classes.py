"""Function classes: derivative-norm classes, slice classes, truncated linear maps, finite families."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .pwl import INF, BreakpointFunction, q_action

MEMBERSHIP_TOL = 1e-12
CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class Gq:
    q: float

    def __post_init__(self):
        if not self.q > 1:
            raise ValueError(f"G_q needs q > 1, got {self.q}")


@dataclass(frozen=True)
class Ginf:
    pass


@dataclass(frozen=True)
class Gqd:
    q: float
    d: int

    def __post_init__(self):
        if not self.q > 1 or self.d < 1:
            raise ValueError(f"G_(q,d) needs q > 1 and d >= 1, got q={self.q}, d={self.d}")


@dataclass(frozen=True)
class TruncatedLinear:
    n: int
    r: float

    def __post_init__(self):
        if self.n < 1 or not self.r > 0:
            raise ValueError(f"truncated linear class needs n >= 1 and r > 0, got n={self.n}, r={self.r}")


@dataclass(frozen=True)
class Finite:
    """A finite family of functions on the line, with a name and build parameters for serialization."""
    members: tuple[BreakpointFunction, ...]
    kind: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.members:
            raise ValueError("a finite family needs at least one member")
        for m in self.members:
            if not isinstance(m, BreakpointFunction):
                raise TypeError("finite family members must be BreakpointFunctions")

    def __len__(self) -> int:
        return len(self.members)

    def consistent(self, history: Sequence[tuple[float, float]], tol: float = CONSISTENCY_TOL) -> list[int]:
        return [i for i, f in enumerate(self.members)
                if all(abs(f(x) - y) <= tol for x, y in history)]

    def consistent_values(self, history, x) -> list[float]:
        return [self.members[i](x) for i in self.consistent(history)]


SmoothClass = Union[Gq, Ginf, Gqd, TruncatedLinear, Finite]


@dataclass(frozen=True)
class Membership:
    member: bool
    action: float

    def __bool__(self) -> bool:
        return self.member


def is_member(cls: SmoothClass, f: BreakpointFunction) -> Membership:
    """Membership of a piecewise-linear function in G_q or G_inf, with the computed action."""
    if isinstance(cls, Gq):
        a = q_action(f, cls.q)
    elif isinstance(cls, Ginf):
        a = q_action(f, INF)
    else:
        raise TypeError(f"membership is only decided for G_q and G_inf, not {type(cls).__name__}")
    return Membership(a <= 1 + MEMBERSHIP_TOL, a)


# ---------------------------------------------------------------------------
# serialization

def class_to_dict(cls: SmoothClass) -> dict:
    if isinstance(cls, Gq):
        return {"kind": "Gq", "q": cls.q}
    if isinstance(cls, Ginf):
        return {"kind": "Ginf"}
    if isinstance(cls, Gqd):
        return {"kind": "Gqd", "q": cls.q, "d": cls.d}
    if isinstance(cls, TruncatedLinear):
        return {"kind": "TruncatedLinear", "n": cls.n, "r": cls.r}
    if isinstance(cls, Finite):
        return {"kind": "Finite", "family": cls.kind, **cls.params,
                "members": [[[u, v] for u, v in m.points] for m in cls.members]}
    raise TypeError(type(cls).__name__)


def class_from_dict(data: dict) -> SmoothClass:
    kind = data["kind"]
    if kind == "Gq":
        return Gq(data["q"])
    if kind == "Ginf":
        return Ginf()
    if kind == "Gqd":
        return Gqd(data["q"], data["d"])
    if kind == "TruncatedLinear":
        return TruncatedLinear(data["n"], data["r"])
    if kind == "Finite":
        params = {k: v for k, v in data.items() if k not in ("kind", "family", "members")}
        members = tuple(BreakpointFunction.from_json(m) for m in data["members"])
        return Finite(members, data.get("family", "custom"), params)
    raise ValueError(f"unknown class kind {kind!r}")


def class_to_json(cls: SmoothClass) -> str:
    return json.dumps(class_to_dict(cls))


def class_from_json(text: str) -> SmoothClass:
    return class_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# named finite families

def f_eps_family(eps: float = 0.01) -> Finite:
    """Three functions agreeing at 2 and 4; separable cheaply near [2, 4] but not from afar."""
    pts = [
        [(1, 1), (2, 0), (3, -eps), (4, 0), (5, 1)],
        [(1, 1), (2, 0), (3, 0), (4, 0), (5, -1)],
        [(1, -1), (2, 0), (3, eps), (4, 0), (5, -1)],
    ]
    return Finite(tuple(BreakpointFunction.from_points(p) for p in pts), "F_eps", {"eps": eps})


def f_n_eps_family(n: int, eps: float = 0.01) -> Finite:
    """``n = 2**k`` functions; member i encodes the bits of i at the inputs 4j + 3."""
    k = int(round(math.log2(n)))
    if n < 2 or 2 ** k != n:
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    members = []
    for i in range(n):
        pts = []
        for j in range(k):
            pts += [(4 * j, 0.0), (4 * j + 1, i * eps), (4 * j + 2, 0.0),
                    (4 * j + 3, (-1.0) ** ((i >> j) & 1))]
        members.append(BreakpointFunction.from_points(pts))
    return Finite(tuple(members), "F_n_eps", {"n": n, "eps": eps})


def g_n_eps_family(n: int, eps: float = 0.01) -> Finite:
    """n functions, member i (1-based) is +1 at 4i - 1 and -1 at every other 4j - 1."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    members = []
    for i in range(1, n + 1):
        pts = [(2 * j, 0.0) for j in range(2 * n + 1)]
        pts += [(4 * j - 3, i * eps) for j in range(1, n + 1)]
        pts += [(4 * j - 1, 1.0 if j == i else -1.0) for j in range(1, n + 1)]
        members.append(BreakpointFunction.from_points(pts))
    return Finite(tuple(members), "G_n_eps", {"n": n, "eps": eps})


def g_n_eps_constant(n: int, p: float) -> float:
    """Scenario-2 forcing constant (n-1) / ((1 + (n-1)**(1/p)) / 2)**p for the G_{n,eps} family."""
    return (n - 1) / ((1 + (n - 1) ** (1 / p)) / 2) ** p


# ---------------------------------------------------------------------------
# truncated linear class

def truncated_linear_evaluate(v: Sequence[float], x: Sequence[float], r: float) -> float:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if v.shape != x.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {x.shape}")
    s = float(v @ x)
    return s if abs(s) <= r else 0.0


# ---------------------------------------------------------------------------
# two-member families

@dataclass(frozen=True)
class PairGap:
    """Largest disagreement ``m`` over points within distance 1 of an agreement point.

    ``x`` attains ``m`` and ``anchor`` is an agreement point with ``|x - anchor| <= 1``
    (both ``None`` when the functions never agree).
    """
    m: float
    x: float | None
    anchor: float | None


def _zero_set(us: list[float], ds: list[float]) -> list[tuple[float, float]]:
    """Closed components of the zero set of the interpolant through (us, ds)."""
    comps: list[tuple[float, float]] = []

    def add(a: float, b: float):
        if comps and a <= comps[-1][1]:
            comps[-1] = (comps[-1][0], max(comps[-1][1], b))
        else:
            comps.append((a, b))

    if ds[0] == 0.0:
        add(-INF, us[0])
    for i in range(len(us) - 1):
        d0, d1 = ds[i], ds[i + 1]
        if d0 == 0.0 and d1 == 0.0:
            add(us[i], us[i + 1])
        elif d0 == 0.0:
            add(us[i], us[i])
        elif d0 * d1 < 0:
            z = us[i] + d0 * (us[i + 1] - us[i]) / (d0 - d1)
            add(z, z)
    if ds[-1] == 0.0:
        add(us[-1], INF)
    return comps


def pair_gap(f1: BreakpointFunction, f2: BreakpointFunction) -> PairGap:
    us = sorted(set(f1.us) | set(f2.us))
    if not us:
        return PairGap(0.0, 0.0, 0.0)
    ds = [f1(u) - f2(u) for u in us]
    zeros = _zero_set(us, ds)
    if not zeros:
        return PairGap(0.0, None, None)
    best = (-1.0, None, None)
    for a, b in zeros:
        lo, hi = a - 1, b + 1
        cands = [u for u in us if lo <= u <= hi]
        cands += [c for c in (lo, hi) if math.isfinite(c)]
        if not cands:
            # whole component lies beyond the extreme breakpoints where the difference is constant
            cands = [min(max(us[0], lo), hi)]
        for c in cands:
            gap = abs(f1(c) - f2(c))
            if gap > best[0]:
                best = (gap, c, min(max(c, a), b))
    return PairGap(*best)


def family_m_value(f1: BreakpointFunction, f2: BreakpointFunction) -> float:
    return pair_gap(f1, f2).m


# ---------------------------------------------------------------------------
# separable tent functions on the plane

@dataclass(frozen=True)
class TentRound:
    t: int
    sigma: int


@dataclass
class SeparableTentFunction:
    """Sum of products of triangular bumps on disjoint rectangles along the unit-step diagonal.

    Round ``t`` owns the rectangle centred at ``(t*alpha, t*eta)`` with half-widths
    ``L = alpha/4`` and ``b = eta/4``; its bump has height ``a`` when ``sigma = 1`` and
    is identically zero when ``sigma = 0``.
    """
    q: float
    eta: float = 0.05
    rounds: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.eta < 0.1:
            raise ValueError(f"eta must lie in (0, 1/10), got {self.eta}")
        if not self.q > 1:
            raise ValueError(f"q must exceed 1, got {self.q}")
        self.alpha = math.sqrt(1 - self.eta ** 2)
        self.L = self.alpha / 4
        self.b = self.eta / 4
        q = self.q
        self.a = min((2 * self.L ** (1 - q)) ** (-1 / q), (2 * self.b ** (1 - q)) ** (-1 / q))
        if not (2 * self.L < self.alpha and 2 * self.b < self.eta):
            raise ValueError("rectangles would overlap")

    def center(self, t: int) -> tuple[float, float]:
        return (t * self.alpha, t * self.eta)

    def set_round(self, t: int, sigma: int):
        if t < 1 or sigma not in (0, 1):
            raise ValueError(f"bad tent round t={t}, sigma={sigma}")
        self.rounds[t] = sigma

    def round_list(self) -> list[TentRound]:
        return [TentRound(t, s) for t, s in sorted(self.rounds.items())]

    def _u(self, s: float) -> float:
        return 1 - abs(s) / self.L if abs(s) <= self.L else 0.0

    def _phi(self, s: float) -> float:
        return 1 - abs(s) / self.b if abs(s) <= self.b else 0.0

    def owner_x(self, x: float) -> int | None:
        """Round whose interval J_t contains ``x``."""
        t = int(round(x / self.alpha))
        if t in self.rounds and abs(x - t * self.alpha) <= self.L:
            return t
        return None

    def owner_y(self, y: float) -> int | None:
        t = int(round(y / self.eta))
        if t in self.rounds and abs(y - t * self.eta) <= self.b:
            return t
        return None

    def rectangles_disjoint(self) -> bool:
        ts = sorted(self.rounds)
        for s, t in zip(ts, ts[1:]):
            gap_x = (t * self.alpha - self.L) - (s * self.alpha + self.L)
            gap_y = (t * self.eta - self.b) - (s * self.eta + self.b)
            if gap_x <= 0 or gap_y <= 0:
                return False
        return True


def tent_evaluate(tf: SeparableTentFunction, point: Sequence[float]) -> float:
    x, y = point
    t = tf.owner_x(x)
    if t is None or t != tf.owner_y(y) or tf.rounds[t] == 0:
        return 0.0
    return tf._phi(y - t * tf.eta) * tf.a * tf._u(x - t * tf.alpha)


def tent_slice(tf: SeparableTentFunction, axis: str, offset: float) -> BreakpointFunction:
    """The one-variable slice through ``offset`` along ``axis`` as a breakpoint function."""
    if axis == "x":
        t = tf.owner_y(offset)
        if t is None or tf.rounds[t] == 0:
            return BreakpointFunction()
        cx = t * tf.alpha
        h = tf._phi(offset - t * tf.eta) * tf.a
        return BreakpointFunction((cx - tf.L, cx, cx + tf.L), (0.0, h, 0.0))
    if axis == "y":
        t = tf.owner_x(offset)
        if t is None or tf.rounds[t] == 0:
            return BreakpointFunction()
        cy = t * tf.eta
        h = tf.a * tf._u(offset - t * tf.alpha)
        return BreakpointFunction((cy - tf.b, cy, cy + tf.b), (0.0, h, 0.0))
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def tent_slice_action(tf: SeparableTentFunction, axis: str, offset: float, q: float | None = None) -> float:
    return q_action(tent_slice(tf, axis, offset), tf.q if q is None else q)


def tent_critical_offsets(tf: SeparableTentFunction) -> dict[str, list[float]]:
    """Offsets where a slice action peaks or changes form: centres and rectangle edges."""
    xs, ys = [], []
    for t in tf.rounds:
        cx, cy = tf.center(t)
        xs += [cx - tf.L, cx, cx + tf.L]
        ys += [cy - tf.b, cy, cy + tf.b]
    return {"x": ys, "y": xs}


@dataclass
class TentFamily:
    """Consistent-value oracle for the tent construction.

    Inside an unrevealed rectangle the bump is either absent or present; a rectangle
    whose centre has been queried is determined by the revealed value there.
    """
    tent: SeparableTentFunction

    def _round_at(self, x: Sequence[float]) -> int | None:
        tf = self.tent
        t = int(round(x[0] / tf.alpha))
        if t >= 1 and abs(x[0] - t * tf.alpha) <= tf.L and abs(x[1] - t * tf.eta) <= tf.b:
            return t
        return None

    def consistent_values(self, history, x) -> list[float]:
        tf = self.tent
        t = self._round_at(x)
        if t is None:
            return [0.0]
        shape = tf._phi(x[1] - t * tf.eta) * tf._u(x[0] - t * tf.alpha)
        for xi, yi in history:
            if self._round_at(xi) == t:
                s = tf._phi(xi[1] - t * tf.eta) * tf._u(xi[0] - t * tf.alpha)
                if s > 0:
                    return [yi / s * shape]
        return [0.0, tf.a * shape]


def slice_member(tf: SeparableTentFunction, offsets: Iterable[float], axis: str) -> float:
    """Largest slice action over the given offsets."""
    return max((tent_slice_action(tf, axis, o) for o in offsets), default=0.0)
