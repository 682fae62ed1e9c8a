"""Learner strategies: interpolation, windowed interpolation, feasible midpoint, span, zero."""
from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .classes import CONSISTENCY_TOL, Finite, TruncatedLinear
from .engine import AdversaryInconsistencyError, Learner, LearnerState
from .pwl import INF, interp

SPAN_RTOL = 1e-9


class ZeroLearner(Learner):
    name = "zero"

    def predict(self, state, x):
        return 0.0


class Linint(Learner):
    """Interpolate every revealed point; flat beyond the extreme ones; 0 before any data."""
    name = "linint"

    def predict(self, state, x):
        return state.interpolate(float(x))


class LinintPrime(Learner):
    """Interpolation restricted to revealed points within ``window`` of the query.

    With a nearest known point ``a`` in [x - w, x] and ``b`` in [x, x + w] (both ends
    inclusive), interpolate between them; with only one side known, copy its value;
    with neither, predict 0.
    """
    name = "linint_prime"

    def __init__(self, window: float = 1.0):
        self.window = window

    def predict(self, state, x):
        x = float(x)
        xs, ys = state.xs, state.ys
        i = bisect_left(xs, x)
        # b: smallest known >= x; a: largest known <= x
        b = i if i < len(xs) else None
        if b is not None and xs[b] == x:
            return ys[b]
        a = i - 1 if i > 0 else None
        if a is not None and xs[a] < x - self.window:
            a = None
        if b is not None and xs[b] > x + self.window:
            b = None
        if a is None and b is None:
            return 0.0
        if b is None:
            return ys[a]
        if a is None:
            return ys[b]
        return ys[a] + (x - xs[a]) * (ys[b] - ys[a]) / (xs[b] - xs[a])


class FeasibleMidpoint(Learner):
    """Midpoint of the smallest and largest value at x over family members consistent so far.

    The family is taken from the constructor or from ``state.class_info``; any object
    with a ``consistent_values(history, x)`` method works.
    """
    name = "feasible_midpoint"

    def __init__(self, family=None):
        self.family = family
        self._state = None

    def _finite_values(self, family: Finite, state, x) -> list[float]:
        # filter the surviving members incrementally; the cache belongs to one game's state
        if self._state is not state or self._fam is not family:
            self._state, self._fam, self._seen = state, family, 0
            self._alive = list(range(len(family)))
        members = family.members
        for xi, yi in state.history[self._seen:]:
            self._alive = [i for i in self._alive if abs(members[i](xi) - yi) <= CONSISTENCY_TOL]
        self._seen = len(state.history)
        return [members[i](x) for i in self._alive]

    def predict(self, state, x):
        family = self.family if self.family is not None else state.class_info
        if family is None or not hasattr(family, "consistent_values"):
            raise ValueError("feasible_midpoint needs a family with consistent_values()")
        if isinstance(family, Finite):
            vals = self._finite_values(family, state, x)
        else:
            vals = family.consistent_values(state.history, x)
        if not vals:
            raise AdversaryInconsistencyError(f"no family member is consistent with the history at x={x!r}")
        return (min(vals) + max(vals)) / 2


class SpanLearner(Learner):
    """For truncated linear targets: predict the span combination of past nonzero outputs.

    If x is (numerically) in the span of past inputs with nonzero labels, the
    combination of their labels is predicted when its magnitude is at most ``r``
    and 0 otherwise. Outside the span the prediction is 0.
    """
    name = "span"

    def __init__(self, r: float | None = None):
        self.r = r

    def _radius(self, state) -> float:
        if self.r is not None:
            return self.r
        if isinstance(state.class_info, TruncatedLinear):
            return state.class_info.r
        return INF

    def predict(self, state, x):
        pairs = [(np.atleast_1d(np.asarray(xi, dtype=float)), yi) for xi, yi in state.history if yi != 0]
        if not pairs:
            return 0.0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        A = np.stack([p[0] for p in pairs], axis=1)
        c, *_ = np.linalg.lstsq(A, x, rcond=None)
        resid = float(np.linalg.norm(A @ c - x))
        if resid > SPAN_RTOL * max(1.0, float(np.linalg.norm(x))):
            return 0.0
        pred = float(c @ np.array([p[1] for p in pairs]))
        return pred if abs(pred) <= self._radius(state) else 0.0


class ProjectedLearner(Learner):
    """Run a one-dimensional learner on a single coordinate of multivariable inputs."""

    def __init__(self, inner: Learner, axis: int = 0):
        self.inner = inner
        self.axis = axis
        self.name = f"{inner.name}@x{axis}"
        self._outer = None

    def _sync(self, state: LearnerState) -> LearnerState:
        if self._outer is not state:
            self._outer, self._state, self._seen = state, LearnerState(state.class_info), 0
        for xi, yi in state.history[self._seen:]:
            self._state.record(float(xi[self.axis]), yi)
        self._seen = len(state.history)
        return self._state

    def predict(self, state, x):
        return self.inner.predict(self._sync(state), float(x[self.axis]))


class ScaledLearner(Learner):
    """Conjugate of a radius-1 learner under the scaling operator, for radius-R games.

    It sees inputs shrunk by ``R`` and labels divided by ``R**((q-1)/q)``, and
    inflates its inner prediction by the same amplitude.
    """

    def __init__(self, inner: Learner, R: float, q: float):
        if not R > 0:
            raise ValueError(f"R must be positive, got {R}")
        self.inner, self.R = inner, R
        self.amp = R ** ((q - 1) / q)
        self.name = f"{inner.name}@R={R:g}"
        self._outer = None

    def _shrink(self, x):
        return x / self.R if isinstance(x, float) else tuple(v / self.R for v in x)

    def predict(self, state, x):
        if self._outer is not state:
            self._outer, self._state, self._seen = state, LearnerState(state.class_info), 0
        for xi, yi in state.history[self._seen:]:
            self._state.record(self._shrink(xi), yi / self.amp)
        self._seen = len(state.history)
        return self.amp * self.inner.predict(self._state, self._shrink(x))


LEARNERS = {
    "zero": ZeroLearner,
    "linint": Linint,
    "linint_prime": LinintPrime,
    "feasible_midpoint": FeasibleMidpoint,
    "span": SpanLearner,
}


def make_learner(name: str, **params) -> Learner:
    if name not in LEARNERS:
        raise KeyError(f"unknown learner {name!r}; choose from {sorted(LEARNERS)}")
    return LEARNERS[name](**params)


def linint_predict(state: LearnerState, x: float) -> float:
    return interp(state.xs, state.ys, float(x))


def linint_prime_predict(state: LearnerState, x: float) -> float:
    return LinintPrime().predict(state, x)


def feasible_midpoint_predict(state: LearnerState, family, x) -> float:
    return FeasibleMidpoint(family).predict(state, x)


def span_learner_predict(state: LearnerState, x, r: float) -> float:
    return SpanLearner(r).predict(state, x)
