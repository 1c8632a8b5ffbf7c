"""Instance constructors: bundled worked examples and seeded random families.

Random families are deterministic in the seed (PCG64): the same
``GeneratorSpec`` always produces bit-identical instances.  Kinds:

- ``tensor-product``: measurement i acts on its own subsystem of a product
  state, so every event is exactly independent of the others (d_min = 0).
- ``sliding-window``: measurement i acts on subsystems i..i+window-1 in a
  product basis (one random local basis per slot).  Product-basis dephasing
  factorizes into local channels, so conditioning at distance >= window
  cannot move a later marginal; adjacent windows share a subsystem, giving
  dependence radius window - 1.
- ``dependent-chain``: all measurements on one subsystem, basis stepped by
  pi/8 per slot; conditioning on any prefix complements shifts every later
  outcome probability, so s_i = 0 and d_min = n - 1.
- ``random-projective`` / ``random-povm``: unstructured measurements on a
  single space (Haar basis projectors, or Gaussian operators normalized via
  S^{-1/2}).
- ``paper-examples``: the fixed two-measurement reference instance used by
  the worked examples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import GiveUpError, ValidationError
from .events import Event, Measurement, complement, complete_event
from .independence import compute_profile
from .linalg import DEFAULT_TOL, FULL, DensityOperator, ToleranceConfig, check_dimension, validate_density
from .lll import LLLInstance, _assumption_rows
from .probability import (
    Test,
    TestEventAssignment,
    pr_state,
    pr_state_cond,
    pr_test_cond,
    pr_test_joint,
    pr_test_marginal,
)

EXAMPLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# fixed building blocks


def computational_measurement(dim: int = 2, name: str = "Z") -> Measurement:
    kraus = {}
    for j in range(dim):
        p = np.zeros((dim, dim), dtype=complex)
        p[j, j] = 1.0
        kraus[str(j)] = p
    return Measurement(name, kraus)


def rotated_qubit_measurement(theta: float, name: str, dim: int = 2) -> Measurement:
    """Projective measurement in the computational basis rotated by *theta*
    in the (0, 1) plane; basis vectors beyond the plane stay fixed."""
    r = np.eye(dim, dtype=complex)
    r[0, 0] = math.cos(theta)
    r[0, 1] = -math.sin(theta)
    r[1, 0] = math.sin(theta)
    r[1, 1] = math.cos(theta)
    kraus = {}
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1.0
        kraus[str(j)] = r @ e @ r.conj().T
    return Measurement(name, kraus)


def zx_measurement_pair() -> tuple[Measurement, Measurement]:
    """The standard incompatible qubit pair: computational basis and the
    half-turn-rotated basis built from |+> and |->."""
    m1 = computational_measurement(2, "M1")
    m2 = rotated_qubit_measurement(math.pi / 4, "M2")
    return m1, m2


def plus_state() -> DensityOperator:
    return validate_density(np.full((2, 2), 0.5, dtype=complex), FULL)


def minus_state() -> DensityOperator:
    m = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
    return validate_density(m, FULL)


# ---------------------------------------------------------------------------
# seeded random building blocks


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def ginibre_state(dim: int, rng: np.random.Generator) -> DensityOperator:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return validate_density(rho, FULL)


def random_projective_measurement(
    dim: int, k: int, rng: np.random.Generator, name: str
) -> Measurement:
    """Haar-random orthonormal basis, grouped into *k* projectors."""
    if not (2 <= k <= dim):
        raise ValidationError(f"need 2 <= outcomes <= dim, got {k} with dim {dim}")
    u = haar_unitary(dim, rng)
    sizes = [1] * k
    for _ in range(dim - k):
        sizes[int(rng.integers(k))] += 1
    kraus = {}
    col = 0
    for m, size in enumerate(sizes):
        block = u[:, col : col + size]
        col += size
        kraus[str(m)] = block @ block.conj().T
    return Measurement(name, kraus)


def random_povm_measurement(
    dim: int, k: int, rng: np.random.Generator, name: str, floor: float = 1e-12
) -> Measurement:
    """Gaussian operators A_m normalized by S^{-1/2}, S = sum A_m^dagger A_m.

    Redraws when S has an eigenvalue below *floor* (practically never)."""
    if k < 2:
        raise ValidationError(f"need at least 2 outcomes, got {k}")
    while True:
        ops = [
            (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
            / math.sqrt(2)
            for _ in range(k)
        ]
        s = sum(a.conj().T @ a for a in ops)
        w, v = np.linalg.eigh(s)
        if float(w.min()) >= floor:
            break
    s_inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return Measurement(name, {str(m): a @ s_inv_sqrt for m, a in enumerate(ops)})


def _embed(op: np.ndarray, start: int, width: int, count: int, local_dim: int) -> np.ndarray:
    left = np.eye(local_dim**start)
    right = np.eye(local_dim ** (count - start - width))
    return np.kron(np.kron(left, op), right)


def _random_proper_subset(spectrum: Sequence[str], rng: np.random.Generator) -> frozenset[str]:
    size = int(rng.integers(1, len(spectrum)))
    picked = rng.choice(len(spectrum), size=size, replace=False)
    return frozenset(spectrum[int(j)] for j in picked)


# ---------------------------------------------------------------------------
# generator specs


class GeneratorKind(str, Enum):
    PAPER_EXAMPLES = "paper-examples"
    TENSOR_PRODUCT = "tensor-product"
    SLIDING_WINDOW = "sliding-window"
    RANDOM_PROJECTIVE = "random-projective"
    RANDOM_POVM = "random-povm"
    DEPENDENT_CHAIN = "dependent-chain"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a random instance family.

    ``outcomes`` fixes the spectrum size for the random kinds; when None a
    seeded choice of 2..3 is made per measurement.
    """

    kind: GeneratorKind
    n: int = 2
    local_dim: int = 2
    window: int = 2
    seed: int = 0
    outcomes: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.n < 1:
            raise ValidationError(f"n must be at least 1, got {self.n}")
        if self.local_dim < 2:
            raise ValidationError(f"local_dim must be at least 2, got {self.local_dim}")
        if self.window < 1:
            raise ValidationError(f"window must be at least 1, got {self.window}")
        if self.outcomes is not None and self.outcomes < 2:
            raise ValidationError(f"outcomes must be at least 2, got {self.outcomes}")


def _spectrum_size(spec: GeneratorSpec, rng: np.random.Generator, maximum: int) -> int:
    if spec.outcomes is not None:
        if spec.outcomes > maximum:
            raise ValidationError(
                f"outcomes={spec.outcomes} impossible at dimension {maximum}"
            )
        return spec.outcomes
    return int(rng.integers(2, min(3, maximum) + 1))


def _reference_instance() -> TestEventAssignment:
    m1, m2 = zx_measurement_pair()
    test = Test(plus_state(), (m1, m2))
    return TestEventAssignment(
        test, {1: Event.of(m1, {"0"}), 2: Event.of(m2, {"0"})}
    )


def _gen_tensor(spec: GeneratorSpec, rng: np.random.Generator) -> TestEventAssignment:
    count = spec.n
    check_dimension(spec.local_dim**count)
    measurements = []
    for i in range(1, spec.n + 1):
        k = _spectrum_size(spec, rng, spec.local_dim)
        local = random_projective_measurement(spec.local_dim, k, rng, f"M{i}")
        kraus = {
            lab: _embed(local.kraus[lab], i - 1, 1, count, spec.local_dim)
            for lab in local.spectrum
        }
        measurements.append(Measurement(f"M{i}", kraus))
    state = np.array([[1.0]], dtype=complex)
    for _ in range(count):
        state = np.kron(state, ginibre_state(spec.local_dim, rng).matrix)
    test = Test(validate_density(state, FULL), tuple(measurements))
    events = {
        i: Event.of(measurements[i - 1], _random_proper_subset(measurements[i - 1].spectrum, rng))
        for i in range(1, spec.n + 1)
    }
    return TestEventAssignment(test, events)


def _gen_window(spec: GeneratorSpec, rng: np.random.Generator) -> TestEventAssignment:
    if spec.local_dim > 9:
        raise ValidationError("sliding-window labels need local_dim <= 9")
    count = spec.n + spec.window - 1
    check_dimension(spec.local_dim**count)
    measurements = []
    for i in range(1, spec.n + 1):
        bases = [haar_unitary(spec.local_dim, rng) for _ in range(spec.window)]
        kraus = {}
        for combo in itertools.product(range(spec.local_dim), repeat=spec.window):
            op = np.array([[1.0]], dtype=complex)
            for w, c in enumerate(combo):
                vec = bases[w][:, c : c + 1]
                op = np.kron(op, vec @ vec.conj().T)
            label = "".join(str(c) for c in combo)
            kraus[label] = _embed(op, i - 1, spec.window, count, spec.local_dim)
        measurements.append(Measurement(f"M{i}", kraus))
    state = np.array([[1.0]], dtype=complex)
    for _ in range(count):
        state = np.kron(state, ginibre_state(spec.local_dim, rng).matrix)
    test = Test(validate_density(state, FULL), tuple(measurements))
    events = {
        i: Event.of(measurements[i - 1], _random_proper_subset(measurements[i - 1].spectrum, rng))
        for i in range(1, spec.n + 1)
    }
    return TestEventAssignment(test, events)


def _gen_chain(spec: GeneratorSpec, rng: np.random.Generator) -> TestEventAssignment:
    check_dimension(spec.local_dim)
    measurements = tuple(
        rotated_qubit_measurement((i - 1) * math.pi / 8, f"M{i}", spec.local_dim)
        for i in range(1, spec.n + 1)
    )
    test = Test(ginibre_state(spec.local_dim, rng), measurements)
    events = {
        i: Event.of(measurements[i - 1], {str(int(rng.integers(spec.local_dim)))})
        for i in range(1, spec.n + 1)
    }
    return TestEventAssignment(test, events)


def _gen_single_space(
    spec: GeneratorSpec,
    rng: np.random.Generator,
    builder: Callable[[int, int, np.random.Generator, str], Measurement],
) -> TestEventAssignment:
    check_dimension(spec.local_dim)
    measurements = []
    for i in range(1, spec.n + 1):
        if builder is random_projective_measurement:
            k = _spectrum_size(spec, rng, spec.local_dim)
        elif spec.outcomes is not None:
            k = spec.outcomes
        else:
            k = int(rng.integers(2, 4))
        measurements.append(builder(spec.local_dim, k, rng, f"M{i}"))
    test = Test(ginibre_state(spec.local_dim, rng), tuple(measurements))
    events = {
        i: Event.of(measurements[i - 1], _random_proper_subset(measurements[i - 1].spectrum, rng))
        for i in range(1, spec.n + 1)
    }
    return TestEventAssignment(test, events)


def generate(spec: GeneratorSpec) -> TestEventAssignment:
    """Build the instance described by *spec* (deterministic in ``spec.seed``)."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind is GeneratorKind.PAPER_EXAMPLES:
        return _reference_instance()
    if spec.kind is GeneratorKind.TENSOR_PRODUCT:
        return _gen_tensor(spec, rng)
    if spec.kind is GeneratorKind.SLIDING_WINDOW:
        return _gen_window(spec, rng)
    if spec.kind is GeneratorKind.DEPENDENT_CHAIN:
        return _gen_chain(spec, rng)
    if spec.kind is GeneratorKind.RANDOM_PROJECTIVE:
        return _gen_single_space(spec, rng, random_projective_measurement)
    if spec.kind is GeneratorKind.RANDOM_POVM:
        return _gen_single_space(spec, rng, random_povm_measurement)
    raise ValidationError(f"unknown generator kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# assumption-satisfying instances


def rarefy_events(
    a: TestEventAssignment,
    p_cap: float,
    rng: np.random.Generator,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestEventAssignment:
    """Shrink event outcome sets until every single-event marginal is <= p_cap."""
    while True:
        marginals = {i: pr_test_marginal(a, (i,), tol) for i in a.assigned()}
        worst = max(marginals, key=marginals.get)
        if marginals[worst] <= p_cap:
            return a
        outcomes = a.event(worst).sorted_outcomes()
        # an empty event has marginal 0, so progress is guaranteed
        dropped = outcomes[int(rng.integers(len(outcomes)))]
        a = a.with_event(worst, Event.of(a.event(worst).measurement, set(outcomes) - {dropped}))


def generate_assumption_satisfying(
    spec: GeneratorSpec,
    x: Sequence[float],
    max_attempts: int = 32,
    allow_shrink: bool = True,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[LLLInstance, int]:
    """Produce an instance of *spec*'s family whose measured profile satisfies
    the general hypothesis for the weights *x*.

    Rejection-samples fresh seeds and, when allowed, shrinks offending event
    outcome sets (an empty event has probability zero and satisfies any
    bound, so each attempt terminates).  Returns the instance and the number
    of rejected candidates.

    Raises
    ------
    GiveUpError
        After *max_attempts* fresh seeds without success.
    """
    rejections = 0
    for attempt in range(max_attempts):
        a = generate(replace(spec, seed=spec.seed + attempt))
        rng = np.random.default_rng(spec.seed + 7919 * (attempt + 1))
        while True:
            inst = LLLInstance(a, tuple(x))
            profile = compute_profile(a, tol)
            rows = _assumption_rows(inst, profile, tol)
            failing = [r for r in rows if not r["ok"]]
            if not failing:
                return inst, rejections
            rejections += 1
            if not allow_shrink:
                break
            slot = failing[0]["i"]
            outcomes = a.event(slot).sorted_outcomes()
            dropped = outcomes[int(rng.integers(len(outcomes)))]
            a = a.with_event(slot, Event.of(a.event(slot).measurement, set(outcomes) - {dropped}))
    raise GiveUpError(
        f"no assumption-satisfying instance after {max_attempts} attempts",
        attempts=max_attempts,
        rejections=rejections,
    )


# ---------------------------------------------------------------------------
# worked examples


@dataclass(frozen=True)
class Check:
    label: str
    expected: float
    actual: float

    @property
    def passed(self) -> bool:
        return abs(self.actual - self.expected) <= EXAMPLE_TOL

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class WorkedExample:
    name: str
    description: str
    test: Test
    events: dict[int, Event]
    checks: tuple[Check, ...]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "checks": [c.to_json() for c in self.checks],
            "all_pass": all(c.passed for c in self.checks),
        }


def worked_examples(tol: ToleranceConfig = DEFAULT_TOL) -> list[WorkedExample]:
    """The fixed example suite with expected values attached.

    Checks are evaluated eagerly, so the returned objects carry actual
    values ready for comparison or serialization.
    """
    m1, m2 = zx_measurement_pair()
    m3 = computational_measurement(2, "M3")
    plus = plus_state()
    minus = minus_state()

    e1 = Event.of(m1, {"0"})
    e2 = Event.of(m2, {"0"})
    e2p = Event.of(m2, {"1"})
    e3 = Event.of(m3, {"1"})
    m1_is_1 = Event.of(m1, {"1"})

    out = []

    out.append(
        WorkedExample(
            name="reordering",
            description=(
                "Sequence probability is order dependent: swapping two events "
                "of incompatible qubit bases turns 1/4 into 0."
            ),
            test=Test(minus, (m1, m2)),
            events={1: m1_is_1, 2: e2},
            checks=(
                Check("Pr[M1=1 then M2=0]", 0.25, pr_state(minus, [m1_is_1, e2], tol)),
                Check("Pr[M2=0 then M1=1]", 0.0, pr_state(minus, [e2, m1_is_1], tol)),
            ),
        )
    )

    marg_test = Test(plus, (m1, m2))
    a_e2 = TestEventAssignment(marg_test, {1: complete_event(m1), 2: e2})
    a_e2p = TestEventAssignment(marg_test, {2: e2p})
    out.append(
        WorkedExample(
            name="marginal-vs-state",
            description=(
                "A marginal in a test pads earlier slots with complete "
                "events, whose super-operators still disturb the state; the "
                "bare state probability has no such padding."
            ),
            test=marg_test,
            events={2: e2},
            checks=(
                Check("state Pr[M2=0]", 1.0, pr_state(plus, [e2], tol)),
                Check("test Pr[E2], E2=(M2=0)", 0.5, pr_test_marginal(a_e2, (2,), tol)),
                Check("state Pr[M2=1]", 0.0, pr_state(plus, [e2p], tol)),
                Check("test Pr[E2'], E2'=(M2=1)", 0.5, pr_test_marginal(a_e2p, (2,), tol)),
                Check("joint Pr[full(M1), M2=0]", 0.5, pr_test_joint(a_e2, 2, tol)),
            ),
        )
    )

    cond_test = Test(plus, (m1, m2, m3))
    out.append(
        WorkedExample(
            name="conditional-reversal",
            description=(
                "Adding an intermediate event can raise a conditional "
                "probability from 0 to 1/4: conditioning lacks the classical "
                "monotonicity in the head of the sequence."
            ),
            test=cond_test,
            events={1: e1, 2: e2, 3: e3},
            checks=(
                Check(
                    "Pr[M2=0, M3=1 | M1=0]",
                    0.25,
                    pr_state_cond(plus, [e1], [e2, e3], tol),
                ),
                Check("Pr[M3=1 | M1=0]", 0.0, pr_state_cond(plus, [e1], [e3], tol)),
            ),
        )
    )

    out.append(
        WorkedExample(
            name="total-probability-failure",
            description=(
                "Summing over an intermediate measurement's outcomes does not "
                "recover the probability without it: inserting M2 changes "
                "what M3 sees."
            ),
            test=cond_test,
            events={1: e1, 2: e2, 3: e3},
            checks=(
                Check("Pr[M1=0, M3=1]", 0.0, pr_state(plus, [e1, e3], tol)),
                Check(
                    "Pr[M1=0, M2=0, M3=1] + Pr[M1=0, M2=1, M3=1]",
                    0.25,
                    pr_state(plus, [e1, e2, e3], tol)
                    + pr_state(plus, [e1, complement(e2), e3], tol),
                ),
            ),
        )
    )

    out.append(
        WorkedExample(
            name="independence-reading",
            description=(
                "Relative to a test, conditioning on the complete first event "
                "changes nothing: both sides of the independence equation are "
                "the padded marginal 1/2 (the unpadded state value 1 is a "
                "different quantity)."
            ),
            test=marg_test,
            events={1: complete_event(m1), 2: e2},
            checks=(
                Check("Pr[E2 | full(M1)]", 0.5, pr_test_cond(a_e2, (1,), (2,), tol)),
                Check("Pr[E2]", 0.5, pr_test_marginal(a_e2, (2,), tol)),
            ),
        )
    )

    return out
