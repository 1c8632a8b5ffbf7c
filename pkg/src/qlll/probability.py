"""Probabilities of ordered event sequences, in a bare state and in a test.

A sequence probability composes the events' super-operators in the given
order (first listed is performed first) and takes the trace.  A test fixes
one measurement per time slot; probabilities "in a test" reference events by
slot and pad unmentioned slots with the complete event of that slot's
measurement, which is what makes marginals and conditionals well defined
here.  Order matters everywhere: conditioning sets must lie strictly before
the events they condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadOrderingError,
    ConditionOnZeroError,
    DimensionMismatchError,
    InternalConsistencyError,
    MissingAssignmentError,
    ValidationError,
)
from .events import Event, Measurement, complement, complete_event, super_operator_of
from .linalg import DEFAULT_TOL, FULL, DensityOperator, ToleranceConfig, trace


def _clamp_probability(p: float, tol: ToleranceConfig) -> float:
    if p < -tol.prob or p > 1.0 + tol.prob:
        raise InternalConsistencyError(
            f"computed probability {p!r} strays outside [0,1] beyond tolerance",
            value=p,
        )
    return min(max(p, 0.0), 1.0)


def _ratio(num: float, denom: float, tol: ToleranceConfig) -> float:
    # num <= denom is a theorem; float evaluation from scratch can still push
    # the ratio a hair above 1 when denom is small, so allow an absolute
    # rounding budget before calling it a bug.
    if num > denom + 1e-12 + tol.prob * denom:
        raise InternalConsistencyError(
            f"conditional probability {num!r}/{denom!r} exceeds one beyond rounding",
            numerator=num,
            denominator=denom,
        )
    return min(num / denom, 1.0)


def _check_sequence(rho: DensityOperator, seq: Sequence[Event]) -> None:
    for e in seq:
        if e.measurement is None:
            raise ValidationError(
                "sequence probabilities need resolved events; call Event.resolve first"
            )
        if e.measurement.dim != rho.dim:
            raise DimensionMismatchError(
                f"event on measurement {e.measurement.name!r} has dimension "
                f"{e.measurement.dim}, state has {rho.dim}"
            )


def pr_state(rho: DensityOperator, seq: Sequence[Event], tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Probability that the events in *seq* occur in order, starting from *rho*.

    The first event in *seq* is performed first.  An empty sequence has
    probability ``trace(rho)`` (one for a full state).
    """
    _check_sequence(rho, seq)
    sigma = rho.matrix
    for e in seq:
        sigma = super_operator_of(e)(sigma)
    return _clamp_probability(trace(sigma).real, tol)


def pr_state_cond(
    rho: DensityOperator,
    given: Sequence[Event],
    then: Sequence[Event],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Probability of *then* happening after *given*, conditioned on *given*.

    Raises
    ------
    ConditionOnZeroError
        If ``pr_state(rho, given)`` is at most ``tol.prob``.
    """
    denom = pr_state(rho, given, tol)
    if denom <= tol.prob:
        raise ConditionOnZeroError(
            f"conditioning sequence has probability {denom!r} <= {tol.prob!r}",
            denominator=denom,
        )
    num = pr_state(rho, list(given) + list(then), tol)
    return _ratio(num, denom, tol)


@dataclass(frozen=True)
class Test:
    """A state plus one measurement per time slot."""

    __test__ = False  # keep pytest from collecting the library class

    rho: DensityOperator
    measurements: tuple[Measurement, ...]

    def __post_init__(self):
        object.__setattr__(self, "measurements", tuple(self.measurements))
        if not self.measurements:
            raise ValidationError("a test needs at least one measurement")
        if self.rho.kind != FULL:
            raise ValidationError("a test's state must be a full density operator")
        for m in self.measurements:
            if m.dim != self.rho.dim:
                raise DimensionMismatchError(
                    f"measurement {m.name!r} has dimension {m.dim}, "
                    f"test state has {self.rho.dim}"
                )

    @property
    def n(self) -> int:
        return len(self.measurements)


def check_index_set(indices: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a strictly increasing tuple of 1-based slot indices."""
    out = tuple(int(i) for i in indices)
    for i in out:
        if not (1 <= i <= n):
            raise ValidationError(f"index {i} outside 1..{n}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError(f"index set {list(out)} must be strictly increasing")
    return out


class TestEventAssignment:
    """Events assigned to (some) slots of a test.

    Each assigned event must be defined by the measurement sitting at its
    slot; index-form events are resolved here.
    """

    __test__ = False

    def __init__(self, test: Test, events: Mapping[int, Event]):
        self.test = test
        resolved: dict[int, Event] = {}
        for i, e in events.items():
            i = int(i)
            if not (1 <= i <= test.n):
                raise ValidationError(f"assignment index {i} outside 1..{test.n}")
            e = e.resolve(test.measurements)
            if e.measurement != test.measurements[i - 1]:
                raise ValidationError(
                    f"event at slot {i} is defined by measurement "
                    f"{e.measurement.name!r}, expected {test.measurements[i - 1].name!r}"
                )
            resolved[i] = e
        self.events = dict(sorted(resolved.items()))

    @property
    def n(self) -> int:
        return self.test.n

    def assigned(self) -> tuple[int, ...]:
        return tuple(self.events)

    def event(self, i: int) -> Event:
        try:
            return self.events[i]
        except KeyError:
            raise MissingAssignmentError(f"no event assigned at slot {i}") from None

    def with_event(self, i: int, event: Event) -> "TestEventAssignment":
        events = dict(self.events)
        events[int(i)] = event
        return TestEventAssignment(self.test, events)

    def with_complemented(self, indices: Iterable[int]) -> "TestEventAssignment":
        events = dict(self.events)
        for i in indices:
            events[i] = complement(self.event(i))
        return TestEventAssignment(self.test, events)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {e!r}" for i, e in self.events.items())
        return f"TestEventAssignment(n={self.n}, {{{body}}})"


def _padded_sequence(a: TestEventAssignment, K: tuple[int, ...]) -> list[Event]:
    if not K:
        return []
    horizon = K[-1]
    chosen = set(K)
    seq = []
    for i in range(1, horizon + 1):
        if i in chosen:
            seq.append(a.event(i))
        else:
            seq.append(complete_event(a.test.measurements[i - 1]))
    return seq


def pr_test_joint(a: TestEventAssignment, k: int, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Probability of the first *k* assigned events in slot order."""
    if not (0 <= k <= a.n):
        raise ValidationError(f"prefix length {k} outside 0..{a.n}")
    seq = [a.event(i) for i in range(1, k + 1)]
    return pr_state(a.test.rho, seq, tol)


def pr_test_marginal(a: TestEventAssignment, K: Iterable[int], tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Marginal probability of the events at slots *K*.

    Slots before ``max(K)`` that are not in *K* are padded with the complete
    event of their measurement: the measurement still happens, its outcome is
    just not inspected.  ``K = ()`` gives probability one.
    """
    K = check_index_set(K, a.n)
    return pr_state(a.test.rho, _padded_sequence(a, K), tol)


def pr_test_cond(
    a: TestEventAssignment,
    K: Iterable[int],
    L: Iterable[int],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Conditional probability of the events at *L* given those at *K*.

    Requires ``max(K) < min(L)``; an empty *K* denotes the unconditional
    marginal (denominator one).

    Raises
    ------
    BadOrderingError
        If *K* does not lie strictly before *L*.
    ConditionOnZeroError
        If the conditioning marginal is at most ``tol.prob``.
    """
    K = check_index_set(K, a.n)
    L = check_index_set(L, a.n)
    if K and L and K[-1] >= L[0]:
        raise BadOrderingError(
            f"conditioning slots {list(K)} must lie strictly before {list(L)}",
            K=list(K),
            L=list(L),
        )
    denom = pr_test_marginal(a, K, tol)
    if denom <= tol.prob:
        raise ConditionOnZeroError(
            f"conditioning events at slots {list(K)} have probability "
            f"{denom!r} <= {tol.prob!r}",
            denominator=denom,
            K=list(K),
        )
    num = pr_test_marginal(a, K + L, tol)
    return _ratio(num, denom, tol)
