"""Verification of local-projection assertions about circuit outputs.

An assertion tuple is a list of local projections that the output state
of a circuit is claimed to satisfy.  Two checking modes exist:

* :func:`verify_static` decides each claim exactly, without simulating
  the state, by dragging the projection backward through the circuit's
  inverted layers: the output satisfies ``Q`` iff the all-zeros input
  satisfies the back-propagated projection.  Supports grow by the same
  light-cone rule the description engine uses, so the check stays
  linear in qubit count for fixed depth.

* :func:`runtime_assert` simulates what measuring the assertions one by
  one would do to a state: each projection becomes a two-outcome
  projective measurement that either leaves the state in the claimed
  subspace (outcome 0) or aborts the run (outcome 1).  The tuple must
  pairwise commute; otherwise the outcome statistics would depend on
  measurement order and the semantics would be ambiguous, so such
  tuples are rejected up front.  :func:`order_independence_check`
  demonstrates the property the guard protects.

Assertion tuples are unconstrained in length, may repeat supports, and
serialize with the same JSON schema as descriptions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, validate
from .config import EQUIV_THRESHOLD, support_cap
from .description import Description, LocalProjection
from .errors import CapacityError, DomainError, ValidationError
from .linalg import (
    ErrorTriple,
    apply_local,
    conjugate_local,
    dagger,
    embed,
    is_projection,
    membership_residual,
    mul_local_left,
    mul_local_right,
    zero_state,
)

__all__ = [
    "RuntimeAssertReport",
    "StaticCheck",
    "order_independence_check",
    "runtime_assert",
    "verify_static",
]

_PAULI_FLIPS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _entries(assertions) -> tuple[LocalProjection, ...]:
    if isinstance(assertions, Description):
        return assertions.projections
    entries = tuple(assertions)
    for i, e in enumerate(entries):
        if not isinstance(e, LocalProjection):
            raise DomainError(
                f"assertion {i} must be a LocalProjection, got {type(e).__name__}"
            )
    return entries


def _check_entry_shapes(entries: Sequence[LocalProjection], n_qubits: int) -> None:
    for i, e in enumerate(entries):
        if e.support[-1] >= n_qubits:
            raise DomainError(
                f"assertion {i} touches qubit {e.support[-1]}, out of range "
                f"for {n_qubits} qubit(s)"
            )
        if not is_projection(e.matrix, 1e-8):
            raise DomainError(f"assertion {i} is not a projection matrix")


def _check_commuting(
    entries: Sequence[LocalProjection], tol: float
) -> None:
    """Reject tuples with a non-commuting overlapping pair."""
    for i in range(len(entries)):
        a = entries[i]
        set_a = set(a.support)
        for j in range(i + 1, len(entries)):
            b = entries[j]
            if not set_a.intersection(b.support):
                continue
            union = sorted(set_a.union(b.support))
            position = {q: k for k, q in enumerate(union)}
            width = len(union)
            b_embedded = embed(b.matrix, list(b.support), union)
            axes_a = [position[q] for q in a.support]
            ab = mul_local_left(a.matrix, b_embedded, axes_a, width)
            ba = mul_local_right(a.matrix, b_embedded, axes_a, width)
            dev = float(np.max(np.abs(ab - ba)))
            if dev > tol:
                raise DomainError(
                    f"assertions {i} and {j} do not commute (max deviation "
                    f"{dev:.3e}); sequential measurement outcomes would "
                    f"depend on their order"
                )


@dataclass(frozen=True)
class StaticCheck:
    """Verdict for one assertion entry under static verification.

    ``support`` is the back-propagated support the entry ended on and
    ``residual`` the membership defect of the all-zeros state there.
    """

    index: int
    holds: bool
    support: tuple[int, ...]
    residual: ErrorTriple


def verify_static(
    c: Circuit,
    assertions,
    threshold: float = EQUIV_THRESHOLD,
    cap: int | None = None,
) -> list[StaticCheck]:
    """Decide each assertion exactly by backward propagation.

    The output of ``c`` on the all-zeros input satisfies projection
    ``Q`` exactly when the all-zeros input satisfies the conjugation of
    ``Q`` backward through the circuit.  Walking layers last to first,
    each entry's support grows by the overlapping gates' qubits and its
    matrix is conjugated by the inverted gates; the final membership
    residual of the all-zeros state decides the verdict.

    Entries are evaluated independently and the list always covers all
    of them; there is no early exit on a failed entry.

    Parameters
    ----------
    c
        A valid circuit.
    assertions
        A :class:`Description` or a sequence of local projections; the
        entry count is unconstrained and supports may repeat.
    threshold
        Bound on the L-infinity residual for an entry to hold.
    cap
        Support cap override for the backward light cones.

    Raises
    ------
    CapacityError
        If an entry's support would exceed the cap; the message names
        the assertion index and the layer reached.
    """
    violations = validate(c)
    if violations:
        raise ValidationError(violations)
    entries = _entries(assertions)
    _check_entry_shapes(entries, c.n_qubits)
    if cap is None:
        cap = support_cap()
    # One qubit-to-gate map per layer, shared across entries, so overlap
    # lookups cost O(|support|) instead of scanning every gate.
    owners = [
        {q: g for g in layer.gates for q in g.qubits} for layer in c.layers
    ]
    results = []
    for index, entry in enumerate(entries):
        support = list(entry.support)
        p = entry.matrix
        for layer_index in range(c.depth - 1, -1, -1):
            owner = owners[layer_index]
            current = set(support)
            touched_by_id = {
                id(g): g
                for q in current
                if (g := owner.get(q)) is not None
            }
            touched = list(touched_by_id.values())
            if not touched:
                continue
            grown = set(current)
            for g in touched:
                grown.update(g.qubits)
            new_support = sorted(grown)
            if len(new_support) > cap:
                raise CapacityError(
                    f"assertion {index}: support would reach "
                    f"{len(new_support)} qubit(s) at layer {layer_index}, "
                    f"exceeding the support cap of {cap}",
                    size=len(new_support),
                    cap=cap,
                )
            p = embed(p, support, new_support)
            position = {q: i for i, q in enumerate(new_support)}
            width = len(new_support)
            for g in sorted(touched, key=lambda g: min(g.qubits)):
                axes = [position[q] for q in g.qubits]
                p = conjugate_local(dagger(g.matrix), p, axes, width)
            p = (p + dagger(p)) / 2
            support = new_support
        residual = membership_residual(p, zero_state(len(support)))
        results.append(
            StaticCheck(
                index=index,
                holds=residual.linf <= threshold,
                support=tuple(support),
                residual=residual,
            )
        )
    return results


@dataclass(frozen=True)
class RuntimeAssertReport:
    """Outcome of one simulated measurement chain.

    ``outcome_log`` records one bit per measurement performed: 0 means
    the state passed (and collapsed into) the projection, 1 means the
    run aborted there.  ``state`` is the post-measurement state, either
    after all passes or after the aborting collapse.
    """

    result: str
    abort_index: int | None
    outcome_log: tuple[int, ...]
    seed: int | None
    state: np.ndarray

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def to_json(self) -> dict:
        """JSON-compatible dict; the post-state is not serialized."""
        return {
            "result": self.result,
            "abort_index": self.abort_index,
            "outcome_log": list(self.outcome_log),
            "seed": self.seed,
        }


def runtime_assert(
    state: np.ndarray,
    assertions,
    seed: int | None = None,
    commute_tol: float = 1e-8,
    noise: float = 0.0,
) -> RuntimeAssertReport:
    """Simulate measuring each assertion as a two-outcome projection.

    For each entry in order, the embedded projection and its complement
    form a projective measurement.  The pass outcome is sampled with
    the Born probability (the squared norm of the projected state); on
    a pass the state collapses into the projection and the chain
    continues, on a failure the run aborts with the complementary
    collapse.  A state that satisfies every assertion therefore passes
    with certainty and is left unchanged up to normalization.

    Parameters
    ----------
    state
        Normalized state vector on ``2**n`` amplitudes.
    assertions
        Pairwise-commuting tuple; non-commuting tuples are rejected
        with the offending pair, since their outcome statistics would
        depend on measurement order.
    seed
        Seed for the outcome sampling (and the optional noise).
    commute_tol
        Entrywise bound for the commutation pre-check.
    noise
        Optional per-qubit error probability.  Before the measurement
        chain, each qubit independently suffers a uniformly random
        Pauli flip with this probability, a stochastic stand-in for
        depolarizing noise that demonstrates abort-based error
        detection.  Zero (the default) disables it.
    """
    entries = _entries(assertions)
    psi = np.array(state, dtype=complex).reshape(-1)
    dim = psi.size
    n = dim.bit_length() - 1
    if dim < 2 or dim != 1 << n:
        raise DomainError(f"state dimension {dim} is not a power of two")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-6:
        raise DomainError(f"state is not normalized (norm {norm!r})")
    if not 0.0 <= noise <= 1.0:
        raise DomainError(f"noise must be a probability, got {noise!r}")
    _check_entry_shapes(entries, n)
    _check_commuting(entries, commute_tol)
    rng = np.random.default_rng(seed)
    if noise > 0.0:
        for q in range(n):
            if rng.random() < noise:
                flip = _PAULI_FLIPS[rng.integers(3)]
                psi = apply_local(flip, psi, [q], n)
    log: list[int] = []
    for index, entry in enumerate(entries):
        projected = apply_local(entry.matrix, psi, list(entry.support), n)
        p_pass = min(1.0, float(np.vdot(projected, projected).real))
        if rng.random() < p_pass:
            log.append(0)
            psi = projected / np.sqrt(p_pass)
        else:
            log.append(1)
            rest = psi - projected
            rest_norm = float(np.linalg.norm(rest))
            if rest_norm > 0.0:
                psi = rest / rest_norm
            return RuntimeAssertReport(
                result="abort",
                abort_index=index,
                outcome_log=tuple(log),
                seed=seed,
                state=psi,
            )
    return RuntimeAssertReport(
        result="pass",
        abort_index=None,
        outcome_log=tuple(log),
        seed=seed,
        state=psi,
    )


def _joint_pass_probability(
    state: np.ndarray,
    entries: Sequence[LocalProjection],
    order: Sequence[int],
    n_qubits: int,
) -> float:
    """Probability that every measurement passes, in the given order.

    Equals the squared norm of the ordered projection product applied
    to the state.  No commutation guard: this is the raw quantity whose
    order dependence the public check measures.
    """
    psi = np.asarray(state, dtype=complex).reshape(-1)
    for i in order:
        entry = entries[i]
        psi = apply_local(entry.matrix, psi, list(entry.support), n_qubits)
    return float(np.vdot(psi, psi).real)


def order_independence_check(
    state: np.ndarray,
    assertions,
    trials: int,
    seed: int | None = None,
    commute_tol: float = 1e-8,
) -> float:
    """Largest deviation of the all-pass probability across orderings.

    Computes the probability that the whole measurement chain passes in
    the listed order, then in ``trials`` random permutations, and
    returns the maximum absolute deviation.  For a commuting tuple the
    deviation is bounded by numerical drift; the commutation guard on
    :func:`runtime_assert` exists precisely because non-commuting
    tuples can deviate by order one.
    """
    entries = _entries(assertions)
    psi = np.asarray(state, dtype=complex).reshape(-1)
    dim = psi.size
    n = dim.bit_length() - 1
    if dim < 2 or dim != 1 << n:
        raise DomainError(f"state dimension {dim} is not a power of two")
    if trials < 0:
        raise DomainError(f"trials must be non-negative, got {trials}")
    _check_entry_shapes(entries, n)
    _check_commuting(entries, commute_tol)
    m = len(entries)
    baseline = _joint_pass_probability(psi, entries, range(m), n)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        order = rng.permutation(m)
        p = _joint_pass_probability(psi, entries, order, n)
        worst = max(worst, abs(p - baseline))
    return worst
