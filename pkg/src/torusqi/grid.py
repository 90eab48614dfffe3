"""Torus grids: full tensor grids, multi-index sets, dyadic sparse grids.

Nodes live on the period cell [0, 2pi) with per-dimension counts N_r and
spacing 2pi/N_r.  Sparse grids at level ``l`` in dimension ``d`` are unions
of anisotropic dyadic grids with 2^{n_r} points per dimension over all
multi-indices with |n| = l + d - 1; the combination technique assembles the
matching signed sum of full-grid approximants.

Dyadic nodes are deduplicated through canonical keys: each coordinate
2pi j / 2^n is reduced to lowest terms (odd numerator, or 0 at level 0),
which is unique per torus point and stable across nesting levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = [
    "FullGridSpec",
    "SparseGridSpec",
    "CombinationTerm",
    "DyadicKey",
    "dyadic_key_1d",
    "dyadic_key",
    "dyadic_key_angles",
    "full_grid_nodes",
    "multi_indices_with_sum",
    "combination_terms",
    "sparse_grid_points",
    "sparse_grid_count_formula",
]

FULL_GRID_MAX_POINTS = 2**26
SPARSE_GRID_MAX_POINTS = 2**24

TWO_PI = 2.0 * math.pi

# per-dimension dyadic coordinate (numerator, level), numerator odd or zero
DyadicKey = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FullGridSpec:
    """Tensor grid with counts[r] equispaced nodes per dimension."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(n) for n in self.counts)
        if not counts:
            raise ValueError("need at least one dimension")
        if any(n < 2 for n in counts):
            raise ValueError(f"every count must be >= 2, got {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def dims(self) -> int:
        return len(self.counts)

    @property
    def size(self) -> int:
        return reduce(lambda a, b: a * b, self.counts, 1)

    def axis(self, r: int) -> np.ndarray:
        """Node coordinates 2 pi j / N_r along dimension r."""
        n = self.counts[r]
        return TWO_PI * np.arange(n) / n


@dataclass(frozen=True)
class SparseGridSpec:
    """Dyadic sparse grid at refinement ``level`` in ``dims`` dimensions."""

    level: int
    dims: int

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if self.dims < 1:
            raise ValueError(f"dims must be >= 1, got {self.dims}")


@dataclass(frozen=True)
class CombinationTerm:
    """One signed anisotropic component of the combination technique."""

    coeff: int
    index: tuple[int, ...]
    grid: FullGridSpec


def full_grid_nodes(spec: FullGridSpec) -> np.ndarray:
    """All nodes as an array of shape (prod N_r, dims), lexicographic order."""
    if spec.size > FULL_GRID_MAX_POINTS:
        raise ValueError(
            f"grid of {spec.size} points exceeds the {FULL_GRID_MAX_POINTS} guard"
        )
    axes = [spec.axis(r) for r in range(spec.dims)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def multi_indices_with_sum(total: int, d: int) -> list[tuple[int, ...]]:
    """All d-tuples of integers >= 1 summing to ``total``, lexicographic."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if total < d:
        return []
    if d == 1:
        return [(total,)]
    out: list[tuple[int, ...]] = []
    for first in range(1, total - d + 2):
        out.extend((first,) + rest for rest in multi_indices_with_sum(total - first, d - 1))
    return out


def combination_terms(spec: SparseGridSpec) -> list[CombinationTerm]:
    """Signed anisotropic grids of the combination technique.

    For j = 0..d-1, every multi-index with |n| = level + j contributes the
    coefficient (-1)^(d-1) (-1)^j C(d-1, j); levels whose index set is
    empty (|n| < d) are skipped.  In one dimension this degenerates to the
    single full grid with coefficient +1.
    """
    d = spec.dims
    sign = (-1) ** (d - 1)
    out: list[CombinationTerm] = []
    for j in range(d):
        coeff = sign * (-1) ** j * math.comb(d - 1, j)
        for index in multi_indices_with_sum(spec.level + j, d):
            grid = FullGridSpec(tuple(2**n for n in index))
            out.append(CombinationTerm(coeff=coeff, index=index, grid=grid))
    return out


def dyadic_key_1d(j: int, n: int) -> tuple[int, int]:
    """Reduce node index j on the 2^n-point grid to lowest dyadic terms."""
    if not 0 <= j < 2**n:
        raise ValueError(f"index {j} outside the 2^{n}-point grid")
    if j == 0:
        return (0, 0)
    t = (j & -j).bit_length() - 1  # trailing zeros
    return (j >> t, n - t)


def dyadic_key(index: tuple[int, ...], levels: tuple[int, ...]) -> DyadicKey:
    """Canonical key of the node (2 pi j_r / 2^{n_r})_r."""
    return tuple(dyadic_key_1d(j, n) for j, n in zip(index, levels))


def dyadic_key_angles(key: DyadicKey) -> tuple[float, ...]:
    """Torus coordinates of a canonical key (exact dyadic floats)."""
    return tuple(TWO_PI * num / 2**lev for num, lev in key)


def sparse_grid_points(spec: SparseGridSpec) -> list[DyadicKey]:
    """Deduplicated union of the finest-diagonal grids, canonically ordered.

    Only |n| = level + d - 1 grids are enumerated: every coarser grid of
    the combination is nested inside one of them.
    """
    expected = sparse_grid_count_formula(spec)
    if expected > SPARSE_GRID_MAX_POINTS:
        raise ValueError(
            f"sparse grid of {expected} points exceeds the "
            f"{SPARSE_GRID_MAX_POINTS} guard"
        )
    keys: set[DyadicKey] = set()
    for index in multi_indices_with_sum(spec.level + spec.dims - 1, spec.dims):
        per_dim = [[dyadic_key_1d(j, n) for j in range(2**n)] for n in index]
        stack: list[tuple[tuple[int, int], ...]] = [()]
        for dim_keys in per_dim:
            stack = [prefix + (k,) for prefix in stack for k in dim_keys]
        keys.update(stack)
    return sorted(keys, key=dyadic_key_angles)


def sparse_grid_count_formula(spec: SparseGridSpec) -> int:
    """Closed-form cardinality of the sparse grid (exact integers).

    (-1)^(d-1) sum_j (-1)^j C(d-1, j) sum_{|n| = level+j} 2^{|n|}, where the
    inner sum has C(level+j-1, d-1) equal contributions.
    """
    d = spec.dims
    total = 0
    for j in range(d):
        n_indices = math.comb(spec.level + j - 1, d - 1)
        total += (-1) ** j * math.comb(d - 1, j) * n_indices * 2 ** (spec.level + j)
    return (-1) ** (d - 1) * total
