import numpy as np
import pytest

from helpers import build_pool, rand_subset, suite_rng
from qlll.errors import EnumerationCapError, ValidationError
from qlll.events import Event
from qlll.generate import GeneratorKind, GeneratorSpec, generate
from qlll.oracle import (
    SAMPLER_ALGORITHM,
    SampleEstimate,
    enumerate_probability,
    sample_trajectories,
    trajectory_distribution,
)
from qlll.probability import pr_test_marginal


@pytest.fixture(scope="module")
def pool():
    return build_pool(40)


def test_enumeration_matches_superoperator_route(pool):
    rng = suite_rng(90, 0)
    for a in pool:
        slots = tuple(range(1, a.n + 1))
        for _ in range(3):
            K = rand_subset(rng, slots, min_size=1)
            assert enumerate_probability(a, K) == pytest.approx(
                pr_test_marginal(a, K), abs=1e-10
            )


def test_trajectory_distribution_normalizes(pool):
    for a in pool:
        dist = trajectory_distribution(a.test)
        grid = 1
        for m in a.test.measurements:
            grid *= len(m.spectrum)
        assert len(dist) == grid
        assert sum(w for _, w in dist) == pytest.approx(1.0, abs=1e-9)
        for traj, w in dist:
            assert w >= -1e-12
            assert len(traj.outcomes) == a.n
            for label, m in zip(traj.outcomes, a.test.measurements):
                assert label in m.spectrum


def test_enumeration_cap():
    a = generate(GeneratorSpec(kind=GeneratorKind.RANDOM_PROJECTIVE, n=3, local_dim=3, seed=5))
    with pytest.raises(EnumerationCapError) as exc:
        enumerate_probability(a, (a.n,), cap=2)
    assert exc.value.detail["cap"] == 2
    assert exc.value.detail["grid"] > 2
    with pytest.raises(EnumerationCapError):
        trajectory_distribution(a.test, cap=2)


def test_enumeration_degenerate_index_sets(pool):
    a = pool[0]
    assert enumerate_probability(a, ()) == 1.0
    emptied = a.with_event(1, Event.of(a.test.measurements[0], []))
    assert enumerate_probability(emptied, (1,)) == 0.0


def test_sampler_seed_reproducibility(pool):
    a = pool[1]
    K = (1, a.n)
    first = sample_trajectories(a, K, n_samples=4000, seed=11)
    second = sample_trajectories(a, K, n_samples=4000, seed=11)
    assert first == second
    other = sample_trajectories(a, K, n_samples=4000, seed=12)
    assert other.seed == 12


def test_sampler_multichunk_path_is_deterministic(pool):
    a = pool[2]
    K = tuple(range(1, a.n + 1))
    one = sample_trajectories(a, K, n_samples=5000, seed=3, chunk=2000)
    two = sample_trajectories(a, K, n_samples=5000, seed=3, chunk=2000)
    assert one == two
    assert one.n_samples == 5000


def test_sampler_tracks_exact_probability(pool):
    rng = suite_rng(91, 0)
    checked = 0
    for a in pool:
        slots = tuple(range(1, a.n + 1))
        K = rand_subset(rng, slots, min_size=1)
        exact = enumerate_probability(a, K)
        if not 0.05 <= exact <= 0.95:
            continue
        est = sample_trajectories(a, K, n_samples=20_000, seed=500 + checked)
        assert abs(est.estimate - exact) <= 4.5 * est.std_error
        checked += 1
        if checked == 8:
            break
    assert checked == 8


def test_sampler_empty_selection():
    a = generate(GeneratorSpec(kind=GeneratorKind.TENSOR_PRODUCT, n=2, local_dim=2, seed=1))
    est = sample_trajectories(a, (), n_samples=100, seed=0)
    assert est == SampleEstimate(estimate=1.0, n_samples=100, std_error=0.0, seed=0)


def test_sampler_rejects_bad_sample_count(pool):
    with pytest.raises(ValidationError):
        sample_trajectories(pool[0], (1,), n_samples=0, seed=0)


def test_sample_estimate_json():
    doc = SampleEstimate(estimate=0.5, n_samples=10, std_error=0.1, seed=4).to_json()
    assert doc == {
        "estimate": 0.5,
        "n_samples": 10,
        "std_error": 0.1,
        "seed": 4,
        "algorithm": SAMPLER_ALGORITHM,
    }
    assert SAMPLER_ALGORITHM == "numpy:PCG64"
