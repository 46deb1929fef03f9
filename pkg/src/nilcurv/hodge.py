"""Closed-form curvature bounds for period domains and Calabi-Yau moduli.

Everything is exact rational arithmetic over the partition calculus; the only
floats are the Riemann-surface constants (entropy floor, length scale) and
the numerical equality-attainment check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DegenerateInputError
from .nilpotent import chain_link_weights, extremal_graded_nilpotent, k_value
from .partitions import (
    Composition,
    Partition,
    c_constant,
    conjugate_composition,
    format_rational,
    young_diagram,
)

__all__ = [
    "HodgeVector",
    "PeriodDomainDescriptor",
    "BoundReport",
    "horizontal_curvature_bound",
    "general_cy_bound",
    "classify_period_domain",
    "k_nilpotent_bound",
    "maximal_nilpotency_partition",
    "entropy_lower_bound",
    "length_scale",
    "verify_bound_attained",
    "bound_report",
]


@dataclass(frozen=True)
class HodgeVector:
    """Dimension vector (h^{k,0}, ..., h^{0,k}) of a weight-k structure.

    Palindromic by default (position i must equal position k-i); pass
    ``require_palindromic=False`` only for group classification, which
    tolerates arbitrary vectors.
    """

    weight: int
    numbers: tuple[int, ...]

    def __init__(self, weight: int, numbers: Iterable[int], require_palindromic: bool = True):
        weight = int(weight)
        numbers = tuple(int(x) for x in numbers)
        if weight < 0:
            raise ValueError("weight must be >= 0")
        if len(numbers) != weight + 1:
            raise ValueError(f"weight {weight} needs {weight + 1} entries, got {len(numbers)}")
        if any(x < 0 for x in numbers):
            raise ValueError(f"entries must be >= 0: {numbers}")
        if sum(numbers) < 1:
            raise ValueError("total dimension must be >= 1")
        if require_palindromic and numbers != numbers[::-1]:
            raise ValueError(f"vector is not palindromic: {numbers}")
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "numbers", numbers)

    @property
    def total(self) -> int:
        return sum(self.numbers)

    def is_calabi_yau(self) -> bool:
        """Ends equal to 1 (one-dimensional extreme pieces)."""
        return self.numbers[0] == 1 and self.numbers[-1] == 1

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.numbers)

    @classmethod
    def from_numbers(cls, numbers: Iterable[int], require_palindromic: bool = True) -> "HodgeVector":
        numbers = tuple(int(x) for x in numbers)
        return cls(len(numbers) - 1, numbers, require_palindromic=require_palindromic)

    @classmethod
    def from_string(cls, text: str, require_palindromic: bool = True) -> "HodgeVector":
        return cls.from_numbers((int(tok) for tok in text.strip().split(",")), require_palindromic)


@dataclass(frozen=True)
class PeriodDomainDescriptor:
    """Real form and isotropy of the classifying space of a Hodge vector."""

    group: str  # "Sp(n,R)" or "SO(s,t)"
    unitary_factors: tuple[int, ...]
    orthogonal_factor: Optional[int] = None

    def isotropy(self) -> list[str]:
        factors = [f"U({u})" for u in self.unitary_factors]
        if self.orthogonal_factor is not None:
            factors.append(f"SO({self.orthogonal_factor})")
        return factors

    def isotropy_label(self) -> str:
        return "x".join(self.isotropy())


def horizontal_curvature_bound(h: HodgeVector) -> Fraction:
    """Sharp upper bound (negative) for horizontal holomorphic sectional curvature.

    Equals minus the exact constant of the conjugate partition of the Hodge
    vector read as a composition; the bound is attained by the matrix of
    :func:`verify_bound_attained`.
    """
    conj = conjugate_composition(Composition(h.numbers))
    try:
        return -c_constant(conj)
    except DegenerateInputError as exc:
        raise DegenerateInputError(f"hodge vector {h} has no column run of length >= 2; horizontal directions vanish") from exc


def general_cy_bound(h: HodgeVector) -> Fraction:
    """Weight-k Calabi-Yau bound -2 / (k^2 + n(k-2)^2 + sum h^{p,k-p} (k-2p)^2).

    ``n`` is the moduli dimension h^{k-1,1}; the sum runs over 2 <= p <= k/2.
    Weaker than (or equal to) :func:`horizontal_curvature_bound`; the two
    agree for every weight-3 vector.
    """
    k = h.weight
    if k < 2:
        raise ValueError(f"general bound needs weight >= 2, got {k}")
    if not h.is_calabi_yau():
        raise ValueError(f"{h} is not a Calabi-Yau vector (ends must be 1)")
    n = h.numbers[1]
    denom = k * k + n * (k - 2) ** 2
    for p in range(2, k // 2 + 1):
        denom += h.numbers[k - p] * (k - 2 * p) ** 2  # numbers[k-p] = h^{p,k-p}
    return Fraction(-2, denom)


def classify_period_domain(h: HodgeVector) -> PeriodDomainDescriptor:
    """Real symmetry group and isotropy factors of the classifying space.

    Odd weight k = 2m+1: symplectic group of rank half the total dimension
    with one unitary factor per pair; even weight k = 2m: an indefinite
    orthogonal group with signature split by parity, unitary factors off the
    middle and an orthogonal factor in the middle.
    """
    k = h.weight
    nums = h.numbers
    if k % 2 == 1:
        m = (k - 1) // 2
        rank = sum(nums[m + 1 :])
        factors = tuple(reversed(nums[m + 1 :]))
        return PeriodDomainDescriptor(group=f"Sp({rank},R)", unitary_factors=factors)
    m = k // 2
    s = sum(nums[i] for i in range(0, k + 1, 2))
    t = sum(nums[i] for i in range(1, k + 1, 2))
    factors = tuple(reversed(nums[m + 1 :]))
    return PeriodDomainDescriptor(group=f"SO({s},{t})", unitary_factors=factors, orthogonal_factor=nums[m])


def maximal_nilpotency_partition(n: int, k: int) -> Partition:
    """Dominance-maximal partition of n with all parts <= k: (k,...,k,s)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    d, s = divmod(n, k)
    return Partition((k,) * d + ((s,) if s else ()))


def k_nilpotent_bound(n: int, k: int) -> Fraction:
    """Curvature bound -12 / (n(k^2-1) - s(k^2-s^2)) for k-step nilpotents, s = n mod k.

    Equals minus the exact constant of :func:`maximal_nilpotency_partition`.
    """
    if not 1 < k <= n:
        raise ValueError(f"need 1 < k <= n, got k={k}, n={n}")
    s = n % k
    return Fraction(-12, n * (k * k - 1) - s * (k * k - s * s))


def entropy_lower_bound(n: int) -> float:
    """Entropy floor sqrt(6 / (n(n^2-1))) for rank-n nilpotent representations."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return math.sqrt(6.0 / (n * (n * n - 1)))


def length_scale(p: Partition) -> float:
    """Translation-length stretch factor sqrt(2 / C) of the embedding indexed by p."""
    return math.sqrt(float(Fraction(2) / c_constant(p)))


def verify_bound_attained(h: HodgeVector) -> float:
    """Residual of equality attainment for the sharp bound (must be ~0).

    Builds the extremal graded nilpotent of the vector, compares its k_value
    against the bound, and checks the reflection symmetry of the canonical
    link weights (w(column, row) = w(column, m - row) for palindromic input).
    """
    r = Composition(h.numbers)
    a = extremal_graded_nilpotent(r)
    value_residual = abs(k_value(a) + float(horizontal_curvature_bound(h)))
    weights = chain_link_weights(r)
    m = len(h.numbers)
    sym_residual = 0.0
    for (col, row), w in weights.items():
        mirror = weights.get((col, m - row))
        if mirror is None:
            raise AssertionError(f"missing mirror link for column {col}, row {row}")
        sym_residual = max(sym_residual, abs(w - mirror))
    return max(value_residual, sym_residual)


@dataclass(frozen=True)
class BoundReport:
    """Full curvature report for one Hodge vector."""

    hodge: HodgeVector
    conjugate: Partition
    sharp_bound: Fraction
    general_bound: Optional[Fraction]
    descriptor: PeriodDomainDescriptor
    diagram: str

    def to_json_dict(self) -> dict:
        return {
            "weight": self.hodge.weight,
            "hodge": list(self.hodge.numbers),
            "conjugate": list(self.conjugate.parts),
            "sharp_bound": format_rational(self.sharp_bound),
            "general_bound": None if self.general_bound is None else format_rational(self.general_bound),
            "group": self.descriptor.group,
            "isotropy": self.descriptor.isotropy(),
            "diagram": self.diagram,
        }


def bound_report(h: HodgeVector) -> BoundReport:
    """Assemble sharp + general bounds, group data and the diagram for h."""
    sharp = horizontal_curvature_bound(h)
    general = general_cy_bound(h) if h.weight >= 2 and h.is_calabi_yau() else None
    if general is not None and sharp > general:
        raise AssertionError(f"sharp bound {sharp} exceeds general bound {general} for {h}")
    return BoundReport(
        hodge=h,
        conjugate=conjugate_composition(Composition(h.numbers)),
        sharp_bound=sharp,
        general_bound=general,
        descriptor=classify_period_domain(h),
        diagram=young_diagram(h.numbers),
    )
