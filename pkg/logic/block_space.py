"""
Discretized measure spaces and their block vectors.

A measure space is a finite list of quadrature nodes, each with a weight
mu_i > 0 and a fiber dimension d_i. Square-integrable fields are block
vectors F = (F_1, ..., F_m) with F_i in C^{d_i}, and the L2 inner product is
sum_i mu_i <F_i, G_i>. Flattening scales block i by sqrt(mu_i) so that the
weighted inner product becomes the Euclidean one.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from logic.errors import DimensionMismatchError, NonFiniteError, NonPositiveWeightError, SpaceMismatchError


@dataclass(frozen=True, eq=False)
class MeasurePoints:
    """Quadrature nodes of a discretized measure space."""
    weights: np.ndarray              # mu_i > 0, one per node
    block_dims: Tuple[int, ...]      # d_i >= 1, one per node

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        dims = tuple(int(d) for d in self.block_dims)
        if weights.size == 0:
            raise DimensionMismatchError("a measure space needs at least one node")
        if weights.size != len(dims):
            raise DimensionMismatchError(f"{weights.size} weights but {len(dims)} block dimensions")
        for index, value in enumerate(weights):
            if not np.isfinite(value) or value <= 0:
                raise NonPositiveWeightError(index, float(value))
        for index, dim in enumerate(dims):
            if dim < 1:
                raise DimensionMismatchError(f"block dimension {index} must be at least 1, got {dim}")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "block_dims", dims)

    @property
    def count(self) -> int:
        return len(self.block_dims)

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    @property
    def offsets(self) -> Tuple[int, ...]:
        """Start row of each block in the flattened coordinates, plus the end."""
        return tuple(int(x) for x in np.concatenate([[0], np.cumsum(self.block_dims)]))

    @property
    def sqrt_weights(self) -> np.ndarray:
        return np.sqrt(self.weights)

    def row_scale(self) -> np.ndarray:
        """sqrt(mu_i) repeated d_i times: the diagonal of the flattening map."""
        return np.repeat(self.sqrt_weights, self.block_dims)

    def permuted(self, order: Sequence[int]) -> "MeasurePoints":
        order = list(order)
        if sorted(order) != list(range(self.count)):
            raise DimensionMismatchError(f"{order} is not a permutation of the {self.count} nodes")
        return MeasurePoints(self.weights[order], tuple(self.block_dims[i] for i in order))

    def disjoint_union(self, other: "MeasurePoints") -> "MeasurePoints":
        return MeasurePoints(np.concatenate([self.weights, other.weights]), self.block_dims + other.block_dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasurePoints):
            return NotImplemented
        return self.block_dims == other.block_dims and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.block_dims, self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"MeasurePoints(m={self.count}, dims={self.block_dims})"


def require_same_space(first: MeasurePoints, second: MeasurePoints, what: str = "operands") -> None:
    if first != second:
        raise SpaceMismatchError(f"{what} live on different measure spaces: {first!r} vs {second!r}")


@dataclass(frozen=True, eq=False)
class BlockVector:
    """An element of the discretized L2 space."""
    space: MeasurePoints
    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != self.space.count:
            raise DimensionMismatchError(f"expected {self.space.count} blocks, got {len(self.blocks)}")
        frozen = []
        for index, (block, dim) in enumerate(zip(self.blocks, self.space.block_dims)):
            arr = np.array(block, dtype=complex).reshape(-1)
            if arr.size != dim:
                raise DimensionMismatchError(f"block {index} has length {arr.size}, node dimension is {dim}")
            if not np.all(np.isfinite(arr)):
                raise NonFiniteError(f"block {index} has non-finite entries")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    @classmethod
    def zeros(cls, space: MeasurePoints) -> "BlockVector":
        return cls(space, tuple(np.zeros(d, dtype=complex) for d in space.block_dims))


def flatten(vector: BlockVector) -> np.ndarray:
    """Map F to the Euclidean vector (sqrt(mu_i) F_i)_i, an isometry onto C^{sum d_i}."""
    return np.concatenate(vector.blocks) * vector.space.row_scale()


def unflatten(space: MeasurePoints, flat) -> BlockVector:
    flat = np.asarray(flat, dtype=complex).reshape(-1)
    if flat.size != space.total_dim:
        raise DimensionMismatchError(f"flat vector has length {flat.size}, space dimension is {space.total_dim}")
    scaled = flat / space.row_scale()
    offsets = space.offsets
    return BlockVector(space, tuple(scaled[offsets[i]:offsets[i + 1]] for i in range(space.count)))


def weighted_inner(first: BlockVector, second: BlockVector) -> complex:
    """sum_i mu_i <F_i, G_i>, linear in the first argument."""
    require_same_space(first.space, second.space, "block vectors")
    return complex(sum(mu * np.vdot(g, f) for mu, f, g in zip(first.space.weights, first.blocks, second.blocks)))


def block_norm(vector: BlockVector) -> float:
    return float(np.sqrt(max(weighted_inner(vector, vector).real, 0.0)))
