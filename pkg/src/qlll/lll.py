"""Local-lemma bound checking for event sequences in a test.

Two variants are checked mechanically on concrete instances.  The general
form takes weights x_i in (0, 1] and verifies, for the measured dependence
profile, that Pr[E_i] <= x_i * prod_{j=s_i+1..i-1} (1 - x_j) for every i;
when that hypothesis holds, the probability that no event occurs is at least
prod_i (1 - x_i) and every conditional Pr[E_i | none of E_1..E_{i-1}] is at
most x_i.  The symmetric form takes a single probability bound p and uses
the measured minimal dependence radius d: p * e * (d + 1) <= 1 forces the
all-complements probability to be strictly positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadPError, ConditionOnZeroError, ValidationError
from .independence import DependenceProfile, compute_profile
from .linalg import DEFAULT_TOL, ToleranceConfig
from .probability import TestEventAssignment, pr_test_cond, pr_test_marginal


@dataclass(frozen=True)
class LLLInstance:
    """An event assignment plus the weight vector the bound is checked against."""

    assignment: TestEventAssignment
    x: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        n = self.assignment.n
        if len(self.x) != n:
            raise ValidationError(f"need one weight per slot: got {len(self.x)}, test has {n}")
        for i, v in enumerate(self.x, start=1):
            if not (0.0 < v <= 1.0):
                raise ValidationError(f"weight x_{i} must lie in (0, 1], got {v!r}")
        missing = [i for i in range(1, n + 1) if i not in self.assignment.events]
        if missing:
            raise ValidationError(f"local-lemma checks need an event at every slot; missing {missing}")


def _assumption_rows(
    inst: LLLInstance, profile: DependenceProfile, tol: ToleranceConfig
) -> list[dict]:
    rows = []
    for i in range(1, inst.assignment.n + 1):
        bound = inst.x[i - 1]
        for j in range(profile.s[i - 1] + 1, i):
            bound *= 1.0 - inst.x[j - 1]
        marginal = pr_test_marginal(inst.assignment, (i,), tol)
        rows.append(
            {
                "i": i,
                "marginal": marginal,
                "bound": bound,
                "ok": marginal <= bound + tol.prob,
            }
        )
    return rows


def check_assumption(
    inst: LLLInstance,
    profile: DependenceProfile | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[bool]:
    """Per-slot truth of the general hypothesis against the measured profile."""
    if profile is None:
        profile = compute_profile(inst.assignment, tol)
    return [row["ok"] for row in _assumption_rows(inst, profile, tol)]


def check_lemma(inst: LLLInstance, tol: ToleranceConfig = DEFAULT_TOL) -> list[tuple[float, float]]:
    """Conditionals Pr[E_i | none of E_1..E_{i-1}] paired with their weights.

    Raises ``ConditionOnZeroError`` (with the slot in detail) when some
    complemented prefix has numerically zero probability.
    """
    a = inst.assignment
    out = []
    for i in range(1, a.n + 1):
        prefix = tuple(range(1, i))
        flipped = a.with_complemented(prefix)
        try:
            value = pr_test_cond(flipped, prefix, (i,), tol)
        except ConditionOnZeroError as exc:
            exc.detail["slot"] = i
            raise
        out.append((value, inst.x[i - 1]))
    return out


@dataclass(frozen=True)
class SymmetricReport:
    p: float
    d_min: int
    condition_value: float
    condition: str  # "satisfied" | "boundary" | "violated"
    lhs: float
    explicit_bound: float
    positivity_ok: bool | None
    verdict: str  # "pass" | "inconclusive" | "boundary" | "not-applicable"
    p_max: float
    chain_ok: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d_min": self.d_min,
            "condition_value": self.condition_value,
            "condition": self.condition,
            "lhs": self.lhs,
            "explicit_bound": self.explicit_bound,
            "positivity_ok": self.positivity_ok,
            "verdict": self.verdict,
            "p_max": self.p_max,
            "chain_ok": self.chain_ok,
        }


@dataclass(frozen=True)
class LLLReport:
    assumption_ok: tuple[bool, ...]
    assumption_rows: tuple[dict, ...]
    lemma_bounds: tuple[tuple[float | None, float], ...]
    lhs: float
    rhs: float
    bound_ok: bool
    profile: DependenceProfile
    symmetric: SymmetricReport | None = None

    def to_json(self) -> dict:
        return {
            "assumption_ok": list(self.assumption_ok),
            "assumption": [dict(r) for r in self.assumption_rows],
            "lemma_bounds": [
                {"value": v, "x": x, "ok": None if v is None else v <= x + DEFAULT_TOL.prob}
                for v, x in self.lemma_bounds
            ],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "bound_ok": self.bound_ok,
            "s": list(self.profile.s),
            "d_min": self.profile.d_min,
            "symmetric": None if self.symmetric is None else self.symmetric.to_json(),
        }


def symmetric_chain_holds(d: int, slack: float = 1e-12) -> bool:
    """Scalar fact behind the symmetric reduction: 1/((d+1)e) <= (1/(d+1)) (1 - 1/(d+1))^d.

    ``(1 - 1/(d+1))^d`` is 1 at d = 0 (empty product).
    """
    x = 1.0 / (d + 1)
    return 1.0 / ((d + 1) * math.e) <= x * (1.0 - x) ** d + slack


def _all_avoided(a: TestEventAssignment, tol: ToleranceConfig) -> float:
    flipped = a.with_complemented(range(1, a.n + 1))
    return pr_test_marginal(flipped, tuple(range(1, a.n + 1)), tol)


def check_general(
    inst: LLLInstance,
    tol: ToleranceConfig = DEFAULT_TOL,
    profile: DependenceProfile | None = None,
) -> LLLReport:
    """Evaluate hypothesis, per-slot conditionals and the product bound.

    Always computes and reports everything; ``assumption_ok`` tells the
    caller whether the bound was owed in the first place.
    """
    a = inst.assignment
    if profile is None:
        profile = compute_profile(a, tol)
    rows = _assumption_rows(inst, profile, tol)

    lemma: list[tuple[float | None, float]] = []
    for i in range(1, a.n + 1):
        prefix = tuple(range(1, i))
        flipped = a.with_complemented(prefix)
        try:
            value = pr_test_cond(flipped, prefix, (i,), tol)
        except ConditionOnZeroError:
            value = None
        lemma.append((value, inst.x[i - 1]))

    lhs = _all_avoided(a, tol)
    rhs = 1.0
    for v in inst.x:
        rhs *= 1.0 - v
    return LLLReport(
        assumption_ok=tuple(r["ok"] for r in rows),
        assumption_rows=tuple(rows),
        lemma_bounds=tuple(lemma),
        lhs=lhs,
        rhs=rhs,
        bound_ok=lhs >= rhs - tol.prob,
        profile=profile,
    )


def check_symmetric(
    a: TestEventAssignment,
    p: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    profile: DependenceProfile | None = None,
) -> SymmetricReport:
    """Evaluate the symmetric condition p * e * (d_min + 1) <= 1.

    *p* defaults to the largest measured single-event marginal; supplying a
    *p* below that maximum raises ``BadPError``.  The condition is decided
    with ``tol.prob`` slack on both sides; values within the slack of 1 are
    reported "boundary".  A positivity verdict of "pass" needs the
    all-complements probability to exceed ``tol.prob``; smaller values are
    "inconclusive" rather than a claim either way.
    """
    marginals = [pr_test_marginal(a, (i,), tol) for i in range(1, a.n + 1)]
    missing = [i for i in range(1, a.n + 1) if i not in a.events]
    if missing:
        raise ValidationError(f"symmetric check needs an event at every slot; missing {missing}")
    p_max = max(marginals)
    if p is None:
        p = p_max
    p = float(p)
    if p < p_max - tol.prob:
        raise BadPError(
            f"supplied p={p!r} is below the measured maximum marginal {p_max!r}",
            p=p,
            p_max=p_max,
        )
    if profile is None:
        profile = compute_profile(a, tol)
    d = profile.d_min
    value = p * math.e * (d + 1)
    if abs(value - 1.0) <= tol.prob:
        condition = "boundary"
    elif value < 1.0:
        condition = "satisfied"
    else:
        condition = "violated"

    x = 1.0 / (d + 1)
    explicit_bound = (1.0 - x) ** a.n
    lhs = _all_avoided(a, tol)
    chain_ok = symmetric_chain_holds(d) and (
        condition == "violated" or p <= 1.0 / ((d + 1) * math.e) + tol.prob
    )

    if condition == "violated":
        positivity_ok = None
        verdict = "not-applicable"
    else:
        positivity_ok = lhs > tol.prob
        if condition == "boundary":
            verdict = "boundary"
        else:
            verdict = "pass" if positivity_ok else "inconclusive"

    return SymmetricReport(
        p=p,
        d_min=d,
        condition_value=value,
        condition=condition,
        lhs=lhs,
        explicit_bound=explicit_bound,
        positivity_ok=positivity_ok,
        verdict=verdict,
        p_max=p_max,
        chain_ok=chain_ok,
    )
