"""Measurements, events over their outcomes, and event super-operators.

An event pairs a measurement with a subset A of its outcome labels ("the
outcome lies in A").  Its super-operator maps a state rho to
``sum_{m in A} M_m rho M_m^dagger``; this is trace non-increasing and
generally changes the state even when A is the whole spectrum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DifferentMeasurementsError,
    DimensionMismatchError,
    NotCompleteError,
    ParseError,
    ValidationError,
)
from .linalg import DEFAULT_TOL, PARTIAL, DensityOperator, ToleranceConfig, as_matrix, check_dimension, validate_density


class Measurement:
    """A finite-outcome quantum measurement given by its operator family.

    Parameters
    ----------
    name : str
        Display name; event syntax addresses measurements by position in a
        test, so the name carries no semantics.
    kraus : mapping or iterable of (label, matrix)
        Outcome label -> measurement operator.  Iteration order defines the
        spectrum order.  The family must satisfy the completeness relation
        ``sum_m M_m^dagger M_m = I`` within ``tol.complete`` in max-norm;
        violating it is a construction error because every downstream
        probability assumes it.
    tol : ToleranceConfig

    Attributes
    ----------
    spectrum : tuple of str
        Outcome labels in declaration order.
    projective : bool
        True when every operator is a Hermitian idempotent and the family is
        pairwise orthogonal (decided at construction within ``tol.herm``).
    """

    def __init__(self, name: str, kraus, tol: ToleranceConfig = DEFAULT_TOL):
        if isinstance(kraus, Mapping):
            items = list(kraus.items())
        else:
            items = list(kraus)
        if not items:
            raise ValidationError("a measurement needs at least one outcome")
        labels = []
        ops = []
        for label, op in items:
            label = str(label)
            if not label:
                raise ValidationError("outcome labels must be non-empty strings")
            labels.append(label)
            ops.append(as_matrix(op))
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate outcome labels in measurement {name!r}")
        dim = ops[0].shape[0]
        for op in ops[1:]:
            if op.shape[0] != dim:
                raise DimensionMismatchError(
                    f"measurement {name!r} mixes operator dimensions "
                    f"{dim} and {op.shape[0]}"
                )
        check_dimension(dim)
        total = np.zeros((dim, dim), dtype=np.complex128)
        for op in ops:
            total += op.conj().T @ op
        residual = float(np.abs(total - np.eye(dim)).max())
        if residual > tol.complete:
            raise NotCompleteError(
                f"measurement {name!r} violates completeness: "
                f"max residual {residual:.3e} > {tol.complete:.1e}",
                residual=residual,
            )
        self.name = str(name)
        self.dim = dim
        self.spectrum = tuple(labels)
        self.kraus = MappingProxyType(dict(zip(labels, ops)))
        self.projective = self._detect_projective(ops, tol)

    @staticmethod
    def _detect_projective(ops, tol: ToleranceConfig) -> bool:
        for op in ops:
            if np.abs(op - op.conj().T).max() > tol.herm:
                return False
            if np.abs(op @ op - op).max() > tol.herm:
                return False
        for i, a in enumerate(ops):
            for b in ops[i + 1 :]:
                if np.abs(a @ b).max() > tol.herm:
                    return False
        return True

    def operator(self, label: str) -> np.ndarray:
        try:
            return self.kraus[label]
        except KeyError:
            raise ValidationError(
                f"measurement {self.name!r} has no outcome {label!r}"
            ) from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Measurement):
            return NotImplemented
        return (
            self.name == other.name
            and self.spectrum == other.spectrum
            and all(
                np.array_equal(self.kraus[m], other.kraus[m]) for m in self.spectrum
            )
        )

    def __hash__(self) -> int:
        return hash((self.name, self.spectrum, self.dim))

    def __repr__(self) -> str:
        tag = "projective" if self.projective else "general"
        return f"Measurement({self.name!r}, dim={self.dim}, outcomes={list(self.spectrum)}, {tag})"


@dataclass(frozen=True)
class Event:
    """Outcome of ``measurement`` lies in ``outcomes``.

    Either ``measurement`` is set (the usual, resolved form) or ``index``
    holds a 1-based position to be resolved against a test's measurement
    list later.  Outcome sets are stored as frozensets so equality is
    canonical regardless of declaration order.
    """

    measurement: Measurement | None
    outcomes: frozenset[str]
    index: int | None = None

    def __post_init__(self):
        if self.measurement is None and self.index is None:
            raise ValidationError("an event needs a measurement or a 1-based index")
        if self.index is not None and self.index < 1:
            raise ValidationError(f"event index must be 1-based, got {self.index}")
        object.__setattr__(self, "outcomes", frozenset(str(o) for o in self.outcomes))
        if self.measurement is not None:
            stray = self.outcomes - set(self.measurement.spectrum)
            if stray:
                raise ValidationError(
                    f"outcomes {sorted(stray)} are not in the spectrum of "
                    f"measurement {self.measurement.name!r}"
                )

    @classmethod
    def of(cls, measurement: Measurement, outcomes: Iterable[str]) -> "Event":
        return cls(measurement=measurement, outcomes=frozenset(outcomes))

    @classmethod
    def at(cls, index: int, outcomes: Iterable[str]) -> "Event":
        return cls(measurement=None, outcomes=frozenset(outcomes), index=index)

    @property
    def resolved(self) -> bool:
        return self.measurement is not None

    @property
    def is_empty(self) -> bool:
        return not self.outcomes

    @property
    def is_complete(self) -> bool:
        if self.measurement is None:
            raise ValidationError("resolve the event before asking for completeness")
        return self.outcomes == set(self.measurement.spectrum)

    def resolve(self, measurements: Sequence[Measurement]) -> "Event":
        """Return the resolved form of an index-form event."""
        if self.measurement is not None:
            return self
        if not (1 <= self.index <= len(measurements)):
            raise ValidationError(
                f"event index {self.index} outside 1..{len(measurements)}"
            )
        return Event.of(measurements[self.index - 1], self.outcomes)

    def sorted_outcomes(self) -> list[str]:
        if self.measurement is not None:
            order = {m: i for i, m in enumerate(self.measurement.spectrum)}
            return sorted(self.outcomes, key=order.__getitem__)
        return sorted(self.outcomes)

    def __repr__(self) -> str:
        where = self.measurement.name if self.measurement is not None else f"#{self.index}"
        return f"Event({where} in {self.sorted_outcomes()})"


def complete_event(measurement: Measurement) -> Event:
    return Event.of(measurement, measurement.spectrum)


def empty_event(measurement: Measurement) -> Event:
    return Event.of(measurement, ())


def complement(event: Event) -> Event:
    """Event on the same measurement selecting the rest of the spectrum."""
    if event.measurement is None:
        raise ValidationError("resolve the event against a test before complementing")
    return Event.of(event.measurement, set(event.measurement.spectrum) - event.outcomes)


def union(a: Event, b: Event) -> Event:
    if a.measurement is not None and b.measurement is not None:
        if a.measurement != b.measurement:
            raise DifferentMeasurementsError(
                "union requires events of the same measurement, got "
                f"{a.measurement.name!r} and {b.measurement.name!r}"
            )
        return Event.of(a.measurement, a.outcomes | b.outcomes)
    if a.measurement is None and b.measurement is None and a.index == b.index:
        return Event.at(a.index, a.outcomes | b.outcomes)
    raise DifferentMeasurementsError("union requires events of the same measurement")


@dataclass(frozen=True)
class SuperOperator:
    """Completely positive, trace non-increasing map ``rho -> sum_m K_m rho K_m^dagger``."""

    kraus: tuple[np.ndarray, ...]
    dim: int

    def __call__(self, sigma: np.ndarray) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for k in self.kraus:
            out += k @ sigma @ k.conj().T
        return out


def super_operator_of(event: Event) -> SuperOperator:
    if event.measurement is None:
        raise ValidationError("resolve the event against a test before applying it")
    m = event.measurement
    kraus = tuple(m.kraus[label] for label in m.spectrum if label in event.outcomes)
    return SuperOperator(kraus=kraus, dim=m.dim)


def apply(s: SuperOperator, rho: DensityOperator, tol: ToleranceConfig = DEFAULT_TOL) -> DensityOperator:
    """Apply a super-operator to a state; the result is a validated partial state."""
    if rho.dim != s.dim:
        raise DimensionMismatchError(
            f"super-operator dimension {s.dim} does not match state dimension {rho.dim}"
        )
    return validate_density(s(rho.matrix), PARTIAL, tol)


_FULL_RE = re.compile(r"^\s*full\(\s*M(\d+)\s*\)\s*$")
_EMPTY_RE = re.compile(r"^\s*empty\(\s*M(\d+)\s*\)\s*$")
_IN_RE = re.compile(r"^\s*M(\d+)\s+in\s+\{([^{}]*)\}\s*$")
_EQ_RE = re.compile(r"^\s*M(\d+)\s*=\s*(\S+)\s*$")


def parse_event_expr(text: str) -> tuple[int, str | frozenset[str]]:
    """Parse one event expression.

    Accepted forms: ``M<i> in {a,b}``, ``M<i>=a``, ``full(M<i>)``,
    ``empty(M<i>)``.  Returns ``(index, spec)`` where spec is the marker
    ``"full"``/``"empty"`` or a frozenset of labels.
    """
    m = _FULL_RE.match(text)
    if m:
        return int(m.group(1)), "full"
    m = _EMPTY_RE.match(text)
    if m:
        return int(m.group(1)), "empty"
    m = _IN_RE.match(text)
    if m:
        body = m.group(2).strip()
        labels = [piece.strip() for piece in body.split(",")] if body else []
        if any(not piece for piece in labels):
            raise ParseError(f"empty outcome label in event expression {text!r}")
        return int(m.group(1)), frozenset(labels)
    m = _EQ_RE.match(text)
    if m:
        return int(m.group(1)), frozenset([m.group(2)])
    raise ParseError(
        f"cannot parse event expression {text!r}; expected 'M<i> in {{a,b}}', "
        "'M<i>=a', 'full(M<i>)' or 'empty(M<i>)'"
    )


def parse_event_seq(text: str) -> list[tuple[int, str | frozenset[str]]]:
    """Parse a ';'-separated sequence of event expressions."""
    pieces = [piece for piece in text.split(";") if piece.strip()]
    if not pieces:
        raise ParseError("empty event sequence")
    return [parse_event_expr(piece) for piece in pieces]


def resolve_event_spec(measurements: Sequence[Measurement], index: int, spec) -> Event:
    """Turn a parsed ``(index, spec)`` pair into a resolved event."""
    if not (1 <= index <= len(measurements)):
        raise ParseError(f"event references M{index} but the test has {len(measurements)} measurements")
    m = measurements[index - 1]
    if spec == "full":
        return complete_event(m)
    if spec == "empty":
        return empty_event(m)
    stray = set(spec) - set(m.spectrum)
    if stray:
        raise ParseError(
            f"outcomes {sorted(stray)} are not in the spectrum of M{index} "
            f"(labels {list(m.spectrum)})"
        )
    return Event.of(m, spec)
