"""Stage-wise conjugate posterior recursions.

Three recursions are provided. The Beta recursion tracks the probability
that a stage indicator equals one. The finite Dirichlet and the
Dirichlet-process recursions track category proportions. All prior
weights at stage j default to 1/j^2, so the accumulated prior mass stays
summable and the data eventually dominate.

States are frozen dataclasses and every update returns a new state.
Vectorized trajectory helpers reproduce a fold of the single-step updates
bit for bit, because ``numpy.cumsum`` accumulates sequentially.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InputError, UndefinedStateError

WeightFn = Callable[[int], float]


def inverse_square(j: int) -> float:
    """Default prior weight at stage ``j``."""
    return 1.0 / (j * j)


def _prior_mass(k: int, weight: WeightFn = inverse_square) -> float:
    total = 0.0
    for j in range(1, k + 1):
        total += weight(j)
    return total


def _beta_moments(a, b):
    total = a + b
    return a / total, a * b / (total * total * (total + 1.0))


# ---------------------------------------------------------------- Beta


@dataclass(frozen=True)
class BetaRecursionState:
    k: int = 0
    sum_alpha: float = 0.0
    sum_beta: float = 0.0
    sum_y: int = 0


def beta_update(
    state: BetaRecursionState, y: int, weight: WeightFn = inverse_square
) -> BetaRecursionState:
    if y not in (0, 1):
        raise InputError(f"indicator must be 0 or 1, got {y!r}")
    k = state.k + 1
    w = weight(k)
    return BetaRecursionState(
        k=k,
        sum_alpha=state.sum_alpha + w,
        sum_beta=state.sum_beta + w,
        sum_y=state.sum_y + int(y),
    )


def beta_mean_var(state: BetaRecursionState) -> tuple[float, float]:
    if state.k < 1:
        raise UndefinedStateError("posterior undefined before the first stage")
    a = state.sum_alpha + state.sum_y
    b = state.sum_beta + state.k - state.sum_y
    return _beta_moments(a, b)


def beta_nonrecursive_mean_var(alpha_k: float, beta_k: float, y: int) -> tuple[float, float]:
    """Posterior of a single stage under a Beta(alpha_k, beta_k) prior.

    Unlike :func:`beta_mean_var`, no information is carried between stages.
    """
    if alpha_k < 0 or beta_k < 0:
        raise InputError("prior parameters must be non-negative")
    if y not in (0, 1):
        raise InputError(f"indicator must be 0 or 1, got {y!r}")
    return _beta_moments(alpha_k + y, beta_k + 1 - y)


def beta_trajectory(y: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means and variances after each stage of ``y``.

    Uses the default 1/j^2 weights.
    """
    y = np.asarray(y, dtype=np.int64)
    if y.size and not np.isin(y, (0, 1)).all():
        raise InputError("indicators must be 0 or 1")
    k = np.arange(1, y.size + 1, dtype=np.float64)
    mass = np.cumsum(1.0 / (k * k))
    ones = np.cumsum(y).astype(np.float64)
    return _beta_moments(mass + ones, mass + k - ones)


# ------------------------------------------------------- finite Dirichlet


@dataclass(frozen=True)
class DirichletRecursionState:
    M: int
    k: int = 0
    base_mass: float = 0.0
    counts: tuple[int, ...] = ()

    def __post_init__(self):
        if self.M < 2:
            raise InputError("need at least two categories")
        if not self.counts:
            object.__setattr__(self, "counts", (0,) * self.M)
        elif len(self.counts) != self.M:
            raise InputError("counts length must equal M")


def dirichlet_update(
    state: DirichletRecursionState, category: int, weight: WeightFn = inverse_square
) -> DirichletRecursionState:
    if not 1 <= category <= state.M:
        raise InputError(f"category {category} outside 1..{state.M}")
    k = state.k + 1
    counts = list(state.counts)
    counts[category - 1] += 1
    return DirichletRecursionState(
        M=state.M, k=k, base_mass=state.base_mass + weight(k), counts=tuple(counts)
    )


def dirichlet_mean_var(state: DirichletRecursionState, m: int) -> tuple[float, float]:
    if state.k < 1:
        raise UndefinedStateError("posterior undefined before the first stage")
    if not 1 <= m <= state.M:
        raise InputError(f"category {m} outside 1..{state.M}")
    a = state.base_mass + state.counts[m - 1]
    total = state.M * state.base_mass + state.k
    return _beta_moments(a, total - a)


def dirichlet_means(state: DirichletRecursionState) -> np.ndarray:
    if state.k < 1:
        raise UndefinedStateError("posterior undefined before the first stage")
    counts = np.asarray(state.counts, dtype=np.float64)
    return (state.base_mass + counts) / (state.M * state.base_mass + state.k)


def dirichlet_trajectory(categories: Sequence[int], M: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-stage posterior means and variances, shape ``(k, M)``."""
    cats = np.asarray(categories, dtype=np.int64)
    if cats.size and (cats.min() < 1 or cats.max() > M):
        raise InputError(f"categories must lie in 1..{M}")
    k = np.arange(1, cats.size + 1, dtype=np.float64)
    mass = np.cumsum(1.0 / (k * k))
    onehot = np.zeros((cats.size, M))
    onehot[np.arange(cats.size), cats - 1] = 1.0
    counts = np.cumsum(onehot, axis=0)
    a = mass[:, None] + counts
    total = (M * mass + k)[:, None]
    return _beta_moments(a, total - a)


# ------------------------------------------------------ Dirichlet process


def geometric_base(m: int) -> float:
    return 2.0 ** (-m)


@dataclass(frozen=True)
class DpRecursionState:
    k: int = 0
    base_mass: float = 0.0
    counts: Mapping[int, int] = field(default_factory=lambda: MappingProxyType({}))


def dp_update(
    state: DpRecursionState, category: int, weight: WeightFn = inverse_square
) -> DpRecursionState:
    if category < 1:
        raise InputError("categories start at 1")
    k = state.k + 1
    counts = dict(state.counts)
    counts[category] = counts.get(category, 0) + 1
    return DpRecursionState(
        k=k, base_mass=state.base_mass + weight(k), counts=MappingProxyType(counts)
    )


def dp_mean_var(state: DpRecursionState, m: int) -> tuple[float, float]:
    """Marginal Beta moments of category ``m`` under the updated process.

    The base measure puts mass 2^-m on category m.
    """
    if state.k < 1:
        raise UndefinedStateError("posterior undefined before the first stage")
    if m < 1:
        raise InputError("categories start at 1")
    a = geometric_base(m) * state.base_mass + state.counts.get(m, 0)
    total = state.base_mass + state.k
    return _beta_moments(a, total - a)


def dp_total_mass(state: DpRecursionState, m_max: int) -> float:
    """Sum of posterior means over every category.

    Categories above ``m_max`` are folded into a closed-form geometric tail
    (they must all be unvisited).
    """
    if any(m > m_max for m in state.counts):
        raise InputError("m_max must cover every visited category")
    explicit = sum(dp_mean_var(state, m)[0] for m in range(1, m_max + 1))
    tail = geometric_base(m_max) * state.base_mass / (state.base_mass + state.k)
    return explicit + tail


def dp_trajectory(categories: Sequence[int], m_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-stage means and variances for categories ``1..m_max``, shape ``(k, m_max)``."""
    cats = np.asarray(categories, dtype=np.int64)
    if cats.size and (cats.min() < 1 or cats.max() > m_max):
        raise InputError(f"categories must lie in 1..{m_max}")
    k = np.arange(1, cats.size + 1, dtype=np.float64)
    mass = np.cumsum(1.0 / (k * k))
    onehot = np.zeros((cats.size, m_max))
    onehot[np.arange(cats.size), cats - 1] = 1.0
    counts = np.cumsum(onehot, axis=0)
    base = 2.0 ** -np.arange(1, m_max + 1, dtype=np.float64)
    a = base[None, :] * mass[:, None] + counts
    total = (mass + k)[:, None]
    return _beta_moments(a, total - a)
