"""Dense complex linear algebra for qubit-indexed operators.

Every operator in this package is a dense numpy array of dtype
``complex128``.  A ``k``-qubit operator has shape ``(2**k, 2**k)`` and a
``k``-qubit state vector has length ``2**k``.

Bit ordering is fixed globally: within a sorted support, the qubit with
the smallest index is the most significant bit of the row and column
index.  Every embedding sorts supports ascending first, so the
convention holds package-wide and no per-call permutation flags exist.

Besides the core operations (:func:`kron`, :func:`dagger`, :func:`embed`,
:func:`conjugate`, :func:`is_projection`, :func:`membership_residual`),
this module provides locality-aware multiplication primitives
(:func:`mul_local_left`, :func:`mul_local_right`, :func:`apply_local`,
:func:`conjugate_local`) that act on a few tensor axes of a larger
operator or state without materializing the embedded matrix.  They are
algebraically identical to ``embed`` followed by a dense product and are
cross-checked against that path in the test suite.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .config import STRUCTURAL_TOL, support_cap
from .errors import CapacityError, DomainError

__all__ = [
    "ErrorTriple",
    "apply_local",
    "conjugate",
    "conjugate_local",
    "dagger",
    "embed",
    "identity",
    "is_projection",
    "is_unitary",
    "kron",
    "max_abs",
    "membership_residual",
    "mul_local_left",
    "mul_local_right",
    "zero_state",
]


def _as_operator(a: np.ndarray | Sequence, what: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix, raising DomainError otherwise."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{what} must be square, got shape {m.shape}")
    return m


def _qubit_count(dim: int, what: str = "matrix") -> int:
    """Number of qubits for a dimension that must be a power of two."""
    if dim < 1 or dim & (dim - 1):
        raise DomainError(f"{what} dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def max_abs(a: np.ndarray) -> float:
    """Largest absolute value of any entry (0.0 for an empty array)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def zero_state(n_qubits: int) -> np.ndarray:
    """The all-zeros computational basis state on ``n_qubits`` qubits."""
    if n_qubits < 0:
        raise DomainError(f"qubit count must be non-negative, got {n_qubits}")
    v = np.zeros(1 << n_qubits, dtype=complex)
    v[0] = 1.0
    return v


def identity(n_qubits: int) -> np.ndarray:
    """The identity operator on ``n_qubits`` qubits."""
    if n_qubits < 0:
        raise DomainError(f"qubit count must be non-negative, got {n_qubits}")
    return np.eye(1 << n_qubits, dtype=complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a``'s qubits more significant than ``b``'s.

    Parameters
    ----------
    a, b
        Square operators whose dimensions are powers of two.

    Returns
    -------
    numpy.ndarray
        The ``(2**(j+k), 2**(j+k))`` product.

    Raises
    ------
    CapacityError
        If the result would act on more qubits than the support cap.
    """
    a = _as_operator(a, "left factor")
    b = _as_operator(b, "right factor")
    ka = _qubit_count(a.shape[0], "left factor")
    kb = _qubit_count(b.shape[0], "right factor")
    cap = support_cap()
    if ka + kb > cap:
        raise CapacityError(
            f"kron result would act on {ka + kb} qubits, exceeding the "
            f"support cap of {cap}",
            size=ka + kb,
            cap=cap,
        )
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(a, dtype=complex)).T


def embed(
    op: np.ndarray,
    op_support: Sequence[int],
    target_support: Sequence[int],
) -> np.ndarray:
    """Embed ``op`` into a larger support, acting as identity elsewhere.

    Both supports must be sorted ascending and duplicate-free, with
    ``op_support`` a subset of ``target_support``.  Tensor factors of the
    result are ordered by ascending qubit index.  The implementation
    maps index blocks directly instead of building an explicit identity
    Kronecker factor, so the only allocation is the result itself.

    Parameters
    ----------
    op
        Operator of dimension ``2**len(op_support)``.
    op_support
        Sorted qubit indices ``op`` acts on.
    target_support
        Sorted superset of ``op_support``.

    Returns
    -------
    numpy.ndarray
        Operator of dimension ``2**len(target_support)``.
    """
    op = _as_operator(op, "op")
    ops = [int(q) for q in op_support]
    tgt = [int(q) for q in target_support]
    if ops != sorted(set(ops)):
        raise DomainError(f"op_support must be sorted and duplicate-free, got {ops}")
    if tgt != sorted(set(tgt)):
        raise DomainError(
            f"target_support must be sorted and duplicate-free, got {tgt}"
        )
    if not set(ops) <= set(tgt):
        raise DomainError(f"op_support {ops} is not a subset of target {tgt}")
    k = len(ops)
    if op.shape[0] != 1 << k:
        raise DomainError(
            f"op of dimension {op.shape[0]} does not match a support of "
            f"{k} qubit(s)"
        )
    m = len(tgt)
    cap = support_cap()
    if m > cap:
        raise CapacityError(
            f"embedding target spans {m} qubits, exceeding the support cap "
            f"of {cap}",
            size=m,
            cap=cap,
        )
    if ops == tgt:
        return op.copy()

    # Index weight of each target qubit (smallest index = most significant).
    weight = {q: 1 << (m - 1 - i) for i, q in enumerate(tgt)}
    sub = np.zeros(1 << k, dtype=np.intp)
    for j, q in enumerate(ops):
        bits = (np.arange(1 << k, dtype=np.intp) >> (k - 1 - j)) & 1
        sub += bits * weight[q]
    rest = [q for q in tgt if q not in set(ops)]
    r = m - k
    out = np.zeros((1 << m, 1 << m), dtype=complex)
    for g in range(1 << r):
        offset = 0
        for j, q in enumerate(rest):
            if (g >> (r - 1 - j)) & 1:
                offset += weight[q]
        idx = sub + offset
        out[np.ix_(idx, idx)] = op
    return out


def conjugate(u: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Return ``u @ p @ dagger(u)``.

    For unitary ``u`` this preserves projections, hermiticity, and the
    spectrum of ``p``.
    """
    u = _as_operator(u, "u")
    p = _as_operator(p, "p")
    if u.shape != p.shape:
        raise DomainError(
            f"dimension mismatch: u is {u.shape[0]}-dimensional, "
            f"p is {p.shape[0]}-dimensional"
        )
    return u @ p @ dagger(u)


def is_projection(p: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff ``p`` is idempotent and Hermitian within ``tol``.

    Both deviations are measured entrywise in absolute value.
    """
    p = _as_operator(p, "p")
    return bool(
        max_abs(p @ p - p) <= tol and max_abs(p - dagger(p)) <= tol
    )


def is_unitary(u: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    """True iff ``u @ dagger(u)`` is the identity within ``tol`` entrywise."""
    u = _as_operator(u, "u")
    return bool(max_abs(u @ dagger(u) - np.eye(u.shape[0])) <= tol)


class ErrorTriple(NamedTuple):
    """Three norms of a residual vector ``E``.

    ``l1`` and ``l2`` are averaged over the dimension ``N``
    (``l1 = sum(|E_j|) / N`` and ``l2 = sqrt(sum(|E_j|**2) / N)``),
    while ``linf`` is the plain maximum ``max(|E_j|)``.
    """

    l1: float
    l2: float
    linf: float


def membership_residual(p: np.ndarray, v: np.ndarray) -> ErrorTriple:
    """Norms of ``E = p @ v - v``, the defect of ``v`` from ``range(p)``.

    A zero triple means ``v`` is fixed by ``p``, i.e. lies in its range
    when ``p`` is a projection.

    Parameters
    ----------
    p
        Square operator.
    v
        Vector of matching dimension.
    """
    p = _as_operator(p, "p")
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != p.shape[0]:
        raise DomainError(
            f"dimension mismatch: p is {p.shape[0]}-dimensional, "
            f"v has {v.size} entries"
        )
    e = p @ v - v
    n = e.size
    abs_e = np.abs(e)
    return ErrorTriple(
        l1=float(np.sum(abs_e) / n),
        l2=float(np.sqrt(np.sum(abs_e**2) / n)),
        linf=float(np.max(abs_e)) if n else 0.0,
    )


def _check_local_args(
    op: np.ndarray, positions: Sequence[int], n_qubits: int
) -> tuple[np.ndarray, list[int]]:
    op = _as_operator(op, "op")
    pos = [int(p) for p in positions]
    k = _qubit_count(op.shape[0], "op")
    if k != len(pos):
        raise DomainError(
            f"op acts on {k} qubit(s) but {len(pos)} position(s) were given"
        )
    if len(set(pos)) != len(pos):
        raise DomainError(f"positions must be distinct, got {pos}")
    if pos and (min(pos) < 0 or max(pos) >= n_qubits):
        raise DomainError(
            f"positions {pos} out of range for {n_qubits} qubit(s)"
        )
    return op, pos


def apply_local(
    op: np.ndarray,
    vec: np.ndarray,
    positions: Sequence[int],
    n_qubits: int,
) -> np.ndarray:
    """Apply ``op`` to the given qubit axes of an ``n_qubits`` state.

    Equivalent to ``embed(op, sorted_positions, full) @ vec`` but works
    by tensor contraction.  ``positions[i]`` is the axis acted on by the
    ``i``-th (most significant first) qubit of ``op``, so an unsorted
    positions list expresses a gate whose listed qubit order differs
    from ascending order.
    """
    op, pos = _check_local_args(op, positions, n_qubits)
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if vec.size != 1 << n_qubits:
        raise DomainError(
            f"state has {vec.size} amplitudes, expected {1 << n_qubits}"
        )
    k = len(pos)
    t = vec.reshape((2,) * n_qubits)
    u = op.reshape((2,) * (2 * k))
    t = np.tensordot(u, t, axes=(list(range(k, 2 * k)), pos))
    t = np.moveaxis(t, list(range(k)), pos)
    return t.reshape(-1)


def mul_local_left(
    op: np.ndarray,
    mat: np.ndarray,
    positions: Sequence[int],
    n_qubits: int,
) -> np.ndarray:
    """Return ``embed(op) @ mat`` by contracting ``mat``'s row axes."""
    op, pos = _check_local_args(op, positions, n_qubits)
    mat = _as_operator(mat, "mat")
    dim = 1 << n_qubits
    if mat.shape[0] != dim:
        raise DomainError(f"mat is {mat.shape[0]}-dimensional, expected {dim}")
    k = len(pos)
    t = mat.reshape((2,) * (2 * n_qubits))
    u = op.reshape((2,) * (2 * k))
    t = np.tensordot(u, t, axes=(list(range(k, 2 * k)), pos))
    t = np.moveaxis(t, list(range(k)), pos)
    return t.reshape(dim, dim)


def mul_local_right(
    op: np.ndarray,
    mat: np.ndarray,
    positions: Sequence[int],
    n_qubits: int,
) -> np.ndarray:
    """Return ``mat @ embed(op)`` by contracting ``mat``'s column axes."""
    op, pos = _check_local_args(op, positions, n_qubits)
    mat = _as_operator(mat, "mat")
    dim = 1 << n_qubits
    if mat.shape[0] != dim:
        raise DomainError(f"mat is {mat.shape[0]}-dimensional, expected {dim}")
    k = len(pos)
    col_axes = [n_qubits + p for p in pos]
    t = mat.reshape((2,) * (2 * n_qubits))
    u = op.reshape((2,) * (2 * k))
    t = np.tensordot(t, u, axes=(col_axes, list(range(k))))
    t = np.moveaxis(t, list(range(2 * n_qubits - k, 2 * n_qubits)), col_axes)
    return t.reshape(dim, dim)


def conjugate_local(
    u: np.ndarray,
    mat: np.ndarray,
    positions: Sequence[int],
    n_qubits: int,
) -> np.ndarray:
    """Return ``embed(u) @ mat @ embed(dagger(u))`` by contraction.

    The workhorse of the description engine: conjugating by one gate of
    a layer touches only that gate's axes, and because gates within a
    layer have disjoint supports the per-gate products compose to the
    conjugation by the whole layer.
    """
    left = mul_local_left(u, mat, positions, n_qubits)
    return mul_local_right(dagger(u), left, positions, n_qubits)
