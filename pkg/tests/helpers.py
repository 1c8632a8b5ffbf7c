"""Shared fixtures helpers: the seeded instance pool and index utilities."""

from __future__ import annotations

import numpy as np

from qlll.generate import GeneratorKind, GeneratorSpec, generate

POOL_SIZE = 200

# Kind cycle keeps every fourth instance a tensor product (independence by
# construction) and mixes projective and POVM measurements at dims 2 to 4.
_KIND_CYCLE = (
    GeneratorKind.RANDOM_PROJECTIVE,
    GeneratorKind.RANDOM_POVM,
    GeneratorKind.TENSOR_PRODUCT,
    GeneratorKind.DEPENDENT_CHAIN,
)


def pool_spec(t: int) -> GeneratorSpec:
    kind = _KIND_CYCLE[t % 4]
    n = 2 + (t // 4) % 3
    if kind is GeneratorKind.TENSOR_PRODUCT:
        # total dimension 2*2 = 4 keeps the dim <= 4 budget
        return GeneratorSpec(kind=kind, n=2, local_dim=2, seed=1000 + t)
    if kind is GeneratorKind.DEPENDENT_CHAIN:
        return GeneratorSpec(kind=kind, n=n, local_dim=2, seed=1000 + t)
    return GeneratorSpec(kind=kind, n=n, local_dim=2 + t % 3, seed=1000 + t)


def build_pool(size: int = POOL_SIZE):
    return [generate(pool_spec(t)) for t in range(size)]


def suite_rng(suite_id: int, t: int) -> np.random.Generator:
    return np.random.default_rng(10_000 * suite_id + t)


def rand_subset(rng, items, min_size=0, max_size=None) -> tuple:
    """Random subset of items, preserving their order, size in the range."""
    items = list(items)
    if max_size is None:
        max_size = len(items)
    max_size = min(max_size, len(items))
    if max_size < min_size:
        return ()
    size = int(rng.integers(min_size, max_size + 1))
    if size == 0:
        return ()
    picked = sorted(rng.choice(len(items), size=size, replace=False))
    return tuple(items[j] for j in picked)


def split_two(rng, items) -> tuple[tuple, tuple]:
    """Partition items (at least two of them) into two nonempty parts."""
    items = list(items)
    assert len(items) >= 2
    order = rng.permutation(len(items))
    cut = int(rng.integers(1, len(items)))
    left = sorted(order[:cut])
    right = sorted(order[cut:])
    return tuple(items[j] for j in left), tuple(items[j] for j in right)


def split_indices(rng, indices, pieces: int):
    """Split a sorted index tuple into consecutive (possibly empty) groups."""
    indices = tuple(indices)
    cuts = sorted(int(rng.integers(0, len(indices) + 1)) for _ in range(pieces - 1))
    out = []
    prev = 0
    for c in list(cuts) + [len(indices)]:
        out.append(indices[prev:c])
        prev = c
    return out
