"""Dense complex nilpotent-matrix kernel.

Builds the weighted block-diagonal representatives of nilpotent orbits, the
graded (block sub-diagonal) matrices attached to a composition, and evaluates
the moment map and its square norm.  Matrices are plain complex ndarrays and
are treated as immutable; dimensions stay desk-scale (n <= 64), so everything
is dense.

Sign convention used throughout: the Hermitian commutator attached to A is
H(A) = A*A - AA*.  With the weighted blocks below this gives the diagonal
entries (size+1-2s) and the rigidity identity [H(A), A] = -2A, so critical
points are certified by a negative rigidity constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, NotNilpotentError, ZeroMatrixError
from .partitions import Composition, Partition, conjugate_composition, conjugate_partition

__all__ = [
    "adjoint",
    "commutator",
    "frobenius_norm2",
    "jordan_block",
    "standard_nilpotent",
    "moment",
    "k_value",
    "jordan_type",
    "rigidity_residual",
    "sl2_check",
    "Chain",
    "chain_assignment",
    "chain_link_weights",
    "graded_nilpotent_from_chains",
    "extremal_graded_nilpotent",
    "random_graded_nilpotent",
    "random_unitary",
    "random_conjugator",
    "matrix_to_json",
    "matrix_from_json",
    "matrix_tokens",
    "DEFAULT_RANK_TOL_FACTOR",
]

# Relative singular-value threshold used for numerical rank: scale-aware and
# forgiving enough for conjugators with condition number up to ~1e4.
DEFAULT_RANK_TOL_FACTOR = 2.0**-40


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def frobenius_norm2(a: np.ndarray) -> float:
    """Square Frobenius norm tr(A A*)."""
    return float(np.vdot(a, a).real)


def _as_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix entries must be finite")
    return a


def _require_nonzero(a: np.ndarray) -> np.ndarray:
    a = _as_square(a)
    if not a.any():
        raise ZeroMatrixError("operation undefined for the zero matrix")
    return a


def jordan_block(size: int) -> np.ndarray:
    """size x size block with sub-diagonal weights sqrt(p*(size-p)).

    The weights are symmetric (w_p = w_{size-p}) and make the block, its
    adjoint and their Hermitian commutator close under bracketing like the
    standard spin representation.
    """
    if size < 1:
        raise ValueError("block size must be >= 1")
    block = np.zeros((size, size), dtype=complex)
    for p in range(1, size):
        block[p, p - 1] = math.sqrt(p * (size - p))
    return block


def standard_nilpotent(p: Partition) -> np.ndarray:
    """Block-diagonal nilpotent with one weighted block per part of p.

    The result has Jordan type exactly p, trace zero, and dimension p.total.
    """
    if not p.parts:
        raise ValueError("cannot build a matrix from the empty partition")
    n = p.total
    out = np.zeros((n, n), dtype=complex)
    offset = 0
    for part in p.parts:
        out[offset : offset + part, offset : offset + part] = jordan_block(part)
        offset += part
    return out


def moment(a: np.ndarray) -> np.ndarray:
    """Normalized Hermitian commutator (A*A - AA*) / ||A||^2.

    Traceless, Hermitian, and equivariant under unitary conjugation; its
    square norm is :func:`k_value`.
    """
    a = _require_nonzero(a)
    return commutator(adjoint(a), a) / frobenius_norm2(a)


def k_value(a: np.ndarray) -> float:
    """Square norm of the moment map: ||A*A - AA*||^2 / ||A||^4.

    Invariant under nonzero scalar multiples and unitary conjugation.
    """
    a = _require_nonzero(a)
    n2 = frobenius_norm2(a)
    return frobenius_norm2(commutator(adjoint(a), a)) / (n2 * n2)


def jordan_type(a: np.ndarray, rank_tol: float | None = None) -> Partition:
    """Jordan type of a numerically nilpotent matrix.

    Computes dim ker(A^p) for p = 1..n from the singular values of the
    normalized powers (entries scaled so the spectral norm is 1), builds the
    kernel partition from the increments, and returns its conjugate.

    ``rank_tol`` is the singular-value cutoff relative to sigma_max(A)^p;
    the default is n * 2^-40.
    """
    a = _as_square(a)
    n = a.shape[0]
    smax = float(np.linalg.norm(a, 2))
    if smax == 0.0:
        return Partition((1,) * n)
    if rank_tol is None:
        rank_tol = n * DEFAULT_RANK_TOL_FACTOR
    b = a / smax
    kernel_dims: list[int] = []
    power = b
    while True:
        sv = np.linalg.svd(power, compute_uv=False)
        kernel_dims.append(int(np.count_nonzero(sv <= rank_tol)))
        if kernel_dims[-1] >= n or len(kernel_dims) >= n:
            break
        power = power @ b
    if kernel_dims[-1] < n:
        raise NotNilpotentError(
            f"kernel chain stalls at dimension {kernel_dims[-1]} < {n}: matrix is not nilpotent at tolerance {rank_tol:g}"
        )
    increments = [kernel_dims[0]]
    increments += [kernel_dims[p] - kernel_dims[p - 1] for p in range(1, len(kernel_dims))]
    if any(increments[i] < increments[i + 1] for i in range(len(increments) - 1)) or increments[-1] < 1:
        raise NotNilpotentError(f"inconsistent numerical kernel profile {kernel_dims}")
    return conjugate_partition(Partition(increments))


def rigidity_residual(a: np.ndarray) -> tuple[float, float]:
    """Best rigidity constant and the residual of [H(A), A] = a_est * A.

    a_est = Re<[H(A), A], A> / ||A||^2 and the residual is the Frobenius norm
    of [H(A), A] - a_est * A.  A vanishing residual with a_est < 0 certifies a
    critical point of :func:`k_value` on the conjugation orbit.
    """
    a = _require_nonzero(a)
    n2 = frobenius_norm2(a)
    bracket = commutator(commutator(adjoint(a), a), a)
    a_est = float(np.trace(bracket @ adjoint(a)).real) / n2
    residual = float(np.linalg.norm(bracket - a_est * a))
    return a_est, residual


def sl2_check(p: Partition) -> float:
    """Residual of the bracket relations for X = standard_nilpotent(p).

    With H = H(X), returns max(||[H,X] + 2X||, ||[H,X*] - 2X*||); both vanish
    exactly in exact arithmetic for every non-degenerate partition.
    """
    if all(part == 1 for part in p.parts):
        raise DegenerateInputError(f"partition {p} yields the zero matrix; no bracket triple")
    x = standard_nilpotent(p)
    h = commutator(adjoint(x), x)
    r1 = float(np.linalg.norm(commutator(h, x) + 2.0 * x))
    r2 = float(np.linalg.norm(commutator(h, adjoint(x)) - 2.0 * adjoint(x)))
    return max(r1, r2)


@dataclass(frozen=True)
class Chain:
    """A maximal vertical run of the generalized Young diagram.

    ``column`` is the 1-indexed column, rows ``start..stop`` (inclusive,
    1-indexed) all have at least ``column`` boxes.  Each chain carries one
    irreducible string of the graded nilpotent.
    """

    column: int
    start: int
    stop: int

    @property
    def length(self) -> int:
        return self.stop - self.start + 1

    def weight(self, row: int) -> float:
        """Canonical link weight sqrt((row-start+1)*(stop-row)) for the edge row -> row+1."""
        if not self.start <= row < self.stop:
            raise ValueError(f"row {row} carries no link of chain {self}")
        return math.sqrt((row - self.start + 1) * (self.stop - row))


def chain_assignment(r: Composition) -> list[Chain]:
    """Canonical chains of a composition: column s occupies line s of each row.

    The multiset of chain lengths equals the parts of
    :func:`conjugate_composition`.
    """
    chains: list[Chain] = []
    for s in range(1, max(r.entries) + 1):
        start = None
        for row, e in enumerate(r.entries, start=1):
            if e >= s:
                if start is None:
                    start = row
            elif start is not None:
                chains.append(Chain(s, start, row - 1))
                start = None
        if start is not None:
            chains.append(Chain(s, start, len(r.entries)))
    return chains


def chain_link_weights(r: Composition) -> dict[tuple[int, int], float]:
    """Canonical weights keyed by (column, row) for the link row -> row+1."""
    return {
        (chain.column, row): chain.weight(row)
        for chain in chain_assignment(r)
        for row in range(chain.start, chain.stop)
    }


def _row_offsets(r: Composition) -> list[int]:
    offsets = [0]
    for e in r.entries:
        offsets.append(offsets[-1] + e)
    return offsets


def graded_nilpotent_from_chains(r: Composition, weight_of) -> np.ndarray:
    """Assemble a block sub-diagonal matrix from the canonical chains.

    ``weight_of(chain, row)`` supplies the complex weight of each link; the
    entry couples line ``chain.column`` of row ``row`` to the same line of
    row ``row + 1``.
    """
    offsets = _row_offsets(r)
    out = np.zeros((r.total, r.total), dtype=complex)
    for chain in chain_assignment(r):
        for row in range(chain.start, chain.stop):
            i = offsets[row] + chain.column - 1  # row+1 block, 1-indexed rows
            j = offsets[row - 1] + chain.column - 1
            out[i, j] = weight_of(chain, row)
    return out


def extremal_graded_nilpotent(r: Composition) -> np.ndarray:
    """Graded nilpotent attaining the sharp orbit bound for its grading.

    Each canonical chain receives the weighted-block link weights, so the
    result is a direct sum of irreducible strings: its Jordan type equals
    conjugate_composition(r) and k_value equals the exact constant of that
    partition.
    """
    if all(part == 1 for part in conjugate_composition(r).parts):
        raise DegenerateInputError(f"composition {r} has no column run of length >= 2; the extremal matrix is zero")
    return graded_nilpotent_from_chains(r, lambda chain, row: chain.weight(row))


def random_graded_nilpotent(r: Composition, seed=None) -> np.ndarray:
    """Random block sub-diagonal matrix respecting the grading of r.

    Block p (shape r_{p+1} x r_p) maps graded piece p into piece p+1 and is
    filled with standard complex Gaussian entries; deterministic given seed.
    """
    if sum(1 for e in r.entries if e > 0) < 2:
        raise DegenerateInputError(f"composition {r} has fewer than 2 positive entries; only the zero matrix has this grading")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    offsets = _row_offsets(r)
    out = np.zeros((r.total, r.total), dtype=complex)
    for p in range(len(r.entries) - 1):
        rows, cols = r.entries[p + 1], r.entries[p]
        if rows and cols:
            block = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)
            out[offsets[p + 1] : offsets[p + 2], offsets[p] : offsets[p + 1]] = block
    return out


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary obtained by exponentiating a random skew-Hermitian matrix."""
    import scipy.linalg

    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    herm = (g + adjoint(g)) / 2.0
    return scipy.linalg.expm(1j * herm)


def random_conjugator(n: int, rng: np.random.Generator, max_condition: float = 1e4) -> np.ndarray:
    """Complex Ginibre matrix, resampled until its condition number is modest.

    Keeps numerical Jordan-type detection reliable for conjugated samples.
    """
    while True:
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        if np.linalg.cond(g) <= max_condition:
            return g


def matrix_to_json(a: np.ndarray) -> dict:
    """JSON form {n, re, im} with row-major entry lists."""
    a = _as_square(a)
    return {
        "n": a.shape[0],
        "re": [float(v) for v in a.real.ravel()],
        "im": [float(v) for v in a.imag.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["n"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.size != n * n or im.size != n * n:
        raise ValueError(f"expected {n * n} entries, got re={re.size}, im={im.size}")
    return _as_square((re + 1j * im).reshape(n, n))


def matrix_tokens(a: np.ndarray) -> list[str]:
    """Row-major text dump, one "re+imi" token per entry."""
    a = _as_square(a)
    return [f"{v.real:.17g}{v.imag:+.17g}i" for v in a.ravel()]
