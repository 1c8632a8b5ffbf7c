"""Independence of events relative to a fixed test, and dependence profiles.

Independence here is an equality of conditional probabilities up to
``tol.ind``.  Negative independence conditions on the complements of the
prefix events; it is what the local-lemma bounds consume, via the summary
statistics ``s_i`` (longest fully negatively-independent prefix) and
``d_min`` (smallest dependence radius).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ConditionOnZeroError, ValidationError
from .linalg import DEFAULT_TOL, ToleranceConfig
from .probability import TestEventAssignment, check_index_set, pr_test_cond, pr_test_marginal


@dataclass(frozen=True)
class IndependenceQuery:
    """Is the event at slot *i* independent of the events at *J*, relative to those at ``K - J``?"""

    assignment: TestEventAssignment
    i: int
    K: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        n = self.assignment.n
        object.__setattr__(self, "K", check_index_set(self.K, n))
        object.__setattr__(self, "J", check_index_set(self.J, n))
        if not (1 <= self.i <= n):
            raise ValidationError(f"target index {self.i} outside 1..{n}")
        if self.K and self.K[-1] >= self.i:
            raise ValidationError(
                f"conditioning slots {list(self.K)} must lie strictly before target {self.i}"
            )
        if not set(self.J) <= set(self.K):
            raise ValidationError(f"J {list(self.J)} must be a subset of K {list(self.K)}")


def is_independent(query: IndependenceQuery, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Compare Pr[E_i | E_K] with Pr[E_i | E_{K-J}] at ``tol.ind``.

    With ``J == K`` the comparison is against the unconditional marginal.
    Raises ``ConditionOnZeroError`` when either conditioning probability is
    numerically zero; the answer is then undefined, not false.
    """
    a, i = query.assignment, query.i
    rest = tuple(j for j in query.K if j not in set(query.J))
    lhs = pr_test_cond(a, query.K, (i,), tol)
    rhs = pr_test_cond(a, rest, (i,), tol)
    return abs(lhs - rhs) <= tol.ind


def is_neg_independent(
    a: TestEventAssignment, i: int, K: Iterable[int], tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Is Pr[E_i | not-E_K] equal to Pr[E_i] at ``tol.ind``?

    The conditioning events are the complements of the assigned events at
    *K*; the target event is not complemented.
    """
    K = check_index_set(K, a.n)
    if K and K[-1] >= i:
        raise ValidationError(
            f"conditioning slots {list(K)} must lie strictly before target {i}"
        )
    flipped = a.with_complemented(K)
    lhs = pr_test_cond(flipped, K, (i,), tol)
    rhs = pr_test_marginal(a, (i,), tol)
    return abs(lhs - rhs) <= tol.ind


def nind_index(a: TestEventAssignment, k: int, l: int, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the event at *k* is negatively independent of every
    complemented prefix of length 1..*l*.

    Antitone in *l* by construction.  Propagates ``ConditionOnZeroError``
    with the offending prefix length in its detail.
    """
    if not (0 <= l < k <= a.n):
        raise ValidationError(f"need 0 <= l < k <= {a.n}, got k={k}, l={l}")
    for j in range(1, l + 1):
        try:
            ok = is_neg_independent(a, k, range(1, j + 1), tol)
        except ConditionOnZeroError as exc:
            exc.detail["prefix"] = j
            exc.detail["target"] = k
            raise
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class DependenceProfile:
    """Full negative-independence structure of an assignment.

    ``table[(k, l)]`` is True/False for decided pairs and None where some
    conditioning prefix had numerically zero probability (undefined).  For
    ``s`` and ``d_min`` an undefined pair counts as dependent; that is the
    conservative direction for the local-lemma bounds.
    """

    n: int
    s: tuple[int, ...]
    table: dict[tuple[int, int], bool | None]
    d_min: int

    def to_json(self) -> dict:
        rows = []
        for (k, l), value in sorted(self.table.items()):
            rows.append([k, l, "undefined" if value is None else value])
        return {"s": list(self.s), "d_min": self.d_min, "nind_table": rows}


def compute_profile(a: TestEventAssignment, tol: ToleranceConfig = DEFAULT_TOL) -> DependenceProfile:
    """Evaluate every negative-independence pair and summarize it.

    Cost is one pair of probability queries per (target, prefix) pair; the
    per-prefix results are folded into the (k, l) table, so the antitone
    shape of the table is structural and asserted, not assumed.
    """
    n = a.n
    per_prefix: dict[tuple[int, int], bool | None] = {}
    for k in range(2, n + 1):
        for j in range(1, k):
            try:
                per_prefix[(k, j)] = is_neg_independent(a, k, range(1, j + 1), tol)
            except ConditionOnZeroError:
                per_prefix[(k, j)] = None

    table: dict[tuple[int, int], bool | None] = {}
    for k in range(2, n + 1):
        for l in range(1, k):
            votes = [per_prefix[(k, j)] for j in range(1, l + 1)]
            if any(v is False for v in votes):
                table[(k, l)] = False
            elif any(v is None for v in votes):
                table[(k, l)] = None
            else:
                table[(k, l)] = True

    for k in range(2, n + 1):
        seen_failure = False
        for l in range(1, k):
            if table[(k, l)] is not True:
                seen_failure = True
            assert not (seen_failure and table[(k, l)] is True), (
                f"negative independence not antitone at k={k}, l={l}"
            )

    s = [0] * n
    for k in range(2, n + 1):
        best = 0
        for l in range(1, k):
            if table[(k, l)] is True:
                best = l
        s[k - 1] = best

    d_min = 0
    for (k, l), value in table.items():
        if value is not True:
            d_min = max(d_min, k - l)

    return DependenceProfile(n=n, s=tuple(s), table=table, d_min=d_min)


def is_dependence_radius(profile: DependenceProfile, d: int) -> bool:
    """Does *d* bound ``k - l`` for every dependent (or undefined) pair?"""
    return all(k - l <= d for (k, l), v in profile.table.items() if v is not True)
