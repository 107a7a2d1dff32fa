"""Constraint-based descriptions of shallow-circuit output states.

For a depth-``d`` circuit on ``n`` qubits, the output state on the
all-zeros input is characterized exactly by a tuple of ``n`` commuting
local projections, one per qubit.  Entry ``t`` starts as the projector
onto ``|0>`` on qubit ``t``; each layer enlarges its support by the
qubits of every overlapping gate (the backward light cone) and
conjugates the projector by those gates.  Supports stay bounded by the
light-cone width, so the whole computation is linear in ``n`` for fixed
depth even though the state itself has ``2**n`` amplitudes.

The intersection of the embedded projections is exactly the span of the
output state, which is what makes the tuple useful: membership of the
all-zeros state in every projection decides weak circuit equivalence,
and the tuple doubles as a machine-checkable assertion about the state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, validate
from .config import DEFAULT_ORACLE_CAP, support_cap
from .errors import CapacityError, DomainError, SchemaError, ValidationError
from .linalg import (
    ErrorTriple,
    conjugate_local,
    dagger,
    embed,
    identity,
    membership_residual,
    mul_local_left,
    mul_local_right,
    zero_state,
)

__all__ = [
    "Description",
    "LocalProjection",
    "commutation_check",
    "compute_description",
    "description_from_json",
    "description_to_json",
    "initial_state_residuals",
    "intersection_rank_small",
    "projection_entries_from_json",
]


@dataclass(frozen=True, eq=False)
class LocalProjection:
    """A projection matrix bound to a sorted, duplicate-free support."""

    support: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        if not support:
            raise DomainError("a local projection needs a non-empty support")
        if list(support) != sorted(set(support)):
            raise DomainError(
                f"support must be sorted and duplicate-free, got {support}"
            )
        matrix = np.array(self.matrix, dtype=complex)
        dim = 1 << len(support)
        if matrix.shape != (dim, dim):
            raise DomainError(
                f"projection on {len(support)} qubit(s) needs a {dim}x{dim} "
                f"matrix, got shape {matrix.shape}"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", matrix)

    def __repr__(self) -> str:
        return f"LocalProjection(support={self.support})"


@dataclass(frozen=True, eq=False)
class Description:
    """The per-qubit tuple of local projections for one circuit.

    Entry ``t`` originates from qubit ``t``; supports of different
    entries may coincide, and the tuple always has exactly ``n_qubits``
    entries.  Deduplication would not change what the tuple describes
    and is intentionally not performed.
    """

    n_qubits: int
    projections: tuple[LocalProjection, ...]

    def __post_init__(self):
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "projections", tuple(self.projections))

    def __repr__(self) -> str:
        return (
            f"Description(n_qubits={self.n_qubits}, "
            f"entries={len(self.projections)})"
        )


_ZERO_PROJ = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
_ZERO_PROJ.setflags(write=False)


def compute_description(c: Circuit, cap: int | None = None) -> Description:
    """Compute the tuple of local projections describing ``c``'s output.

    Parameters
    ----------
    c
        A valid circuit.
    cap
        Support cap override; defaults to the configured cap.

    Returns
    -------
    Description
        Exactly ``c.n_qubits`` entries.  Entry ``t``'s support is the
        backward light cone of qubit ``t`` and its matrix is the
        projector obtained by conjugating ``|0><0|`` through every
        overlapping gate, layer by layer.

    Raises
    ------
    ValidationError
        If the circuit has structural violations.
    CapacityError
        If any support would exceed the cap; the message names the
        originating qubit, the layer, and the support size reached.

    Notes
    -----
    Conjugation proceeds gate by gate via tensor contraction, which is
    algebraically identical to conjugating by the full embedded tensor
    product of the layer's overlapping gates (their supports are
    disjoint).  Gates are visited in order of smallest qubit index and
    each matrix is re-symmetrized as ``(P + P†)/2`` after a layer to
    damp floating-point drift; both choices pin the output bits exactly
    for a given input.
    """
    violations = validate(c)
    if violations:
        raise ValidationError(violations)
    if cap is None:
        cap = support_cap()
    n = c.n_qubits
    supports: list[tuple[int, ...]] = [(t,) for t in range(n)]
    matrices: list[np.ndarray] = [_ZERO_PROJ] * n
    for layer_index, layer in enumerate(c.layers):
        # Gates keyed by the qubits they own, so finding the gates that
        # overlap a support costs O(|support|) rather than a scan of the
        # whole layer; this keeps the total work linear in qubit count.
        owner: dict[int, Gate] = {
            q: g for g in layer.gates for q in g.qubits
        }
        for t in range(n):
            current = set(supports[t])
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
                    f"support of qubit {t} would reach {len(new_support)} "
                    f"qubit(s) at layer {layer_index}, exceeding the support "
                    f"cap of {cap}",
                    size=len(new_support),
                    cap=cap,
                )
            p = embed(matrices[t], supports[t], new_support)
            position = {q: i for i, q in enumerate(new_support)}
            width = len(new_support)
            for g in sorted(touched, key=lambda g: min(g.qubits)):
                axes = [position[q] for q in g.qubits]
                p = conjugate_local(g.matrix, p, axes, width)
            p = (p + dagger(p)) / 2
            supports[t] = tuple(new_support)
            matrices[t] = p
    entries = tuple(
        LocalProjection(supports[t], matrices[t]) for t in range(n)
    )
    return Description(n, entries)


def initial_state_residuals(d: Description) -> list[ErrorTriple]:
    """Residual of the all-zeros state against each projection.

    Entry ``t`` is ``membership_residual(P_t, |0...0>)`` on ``P_t``'s own
    support, equivalently the deviation of column 0 of the matrix from
    the first standard basis vector.  All-zero triples mean the
    all-zeros state satisfies the whole description.
    """
    return [
        membership_residual(p.matrix, zero_state(len(p.support)))
        for p in d.projections
    ]


def commutation_check(
    d: Description,
    tol: float = 1e-10,
    cap: int | None = None,
) -> float:
    """Largest pairwise commutator norm among overlapping projections.

    Each overlapping pair is embedded into its union support and the
    entrywise maximum of ``AB - BA`` is taken; pairs with disjoint
    supports commute exactly and are skipped.  Returns the maximum over
    all pairs (0.0 when nothing overlaps).  ``tol`` is the bound callers
    typically compare the result against; it does not change the
    computation.

    Raises
    ------
    CapacityError
        If a union support exceeds the cap.
    """
    del tol  # the raw maximum is returned; callers apply their own bound
    if cap is None:
        cap = support_cap()
    # Entries with identical support and bit-identical matrix commute
    # exactly; collapsing them avoids redundant pair checks.
    unique: dict[tuple, tuple[tuple[int, ...], np.ndarray]] = {}
    for p in d.projections:
        key = (p.support, p.matrix.tobytes())
        unique.setdefault(key, (p.support, p.matrix))
    entries = list(unique.values())
    worst = 0.0
    for i in range(len(entries)):
        s_i, m_i = entries[i]
        set_i = set(s_i)
        for j in range(i + 1, len(entries)):
            s_j, m_j = entries[j]
            if not set_i.intersection(s_j):
                continue
            union = sorted(set_i.union(s_j))
            if len(union) > cap:
                raise CapacityError(
                    f"union support of entries {i} and {j} spans "
                    f"{len(union)} qubit(s), exceeding the support cap of {cap}",
                    size=len(union),
                    cap=cap,
                )
            position = {q: k for k, q in enumerate(union)}
            width = len(union)
            b_embedded = embed(m_j, s_j, union)
            axes_i = [position[q] for q in s_i]
            ab = mul_local_left(m_i, b_embedded, axes_i, width)
            ba = mul_local_right(m_i, b_embedded, axes_i, width)
            dev = float(np.max(np.abs(ab - ba)))
            if dev > worst:
                worst = dev
    return worst


def intersection_rank_small(
    d: Description,
    cap: int = DEFAULT_ORACLE_CAP,
) -> int:
    """Rank of the product of all embedded projections over the full space.

    Because the projections commute, their product is itself the
    projection onto the intersection of their ranges, and its trace is
    the intersection's dimension.  A valid circuit description always
    yields 1: the intersection is the span of the output state.  Dense
    over all ``2**n`` dimensions, hence the small-``n`` cap.
    """
    n = d.n_qubits
    if n > cap:
        raise CapacityError(
            f"rank check over 2**{n} dimensions exceeds the brute-force cap "
            f"of {cap} qubits",
            size=n,
            cap=cap,
        )
    product = identity(n)
    for p in d.projections:
        product = mul_local_left(p.matrix, product, list(p.support), n)
    trace = float(np.trace(product).real)
    return int(round(trace))


# ---------------------------------------------------------------------------
# JSON serialization
#
# Schema: {"n_qubits": int,
#          "projections": [{"support": [int, ...],
#                           "matrix": [[[re, im], ...], ...]}, ...]}
# Matrix conventions match circuit JSON.  Assertion tuples reuse this
# schema with an unconstrained entry count.


def description_to_json(d: Description) -> dict:
    """Encode a description (or assertion tuple) as a JSON-compatible dict."""
    from .circuit import matrix_to_json

    return {
        "n_qubits": d.n_qubits,
        "projections": [
            {"support": list(p.support), "matrix": matrix_to_json(p.matrix)}
            for p in d.projections
        ],
    }


def projection_entries_from_json(obj) -> tuple[int, tuple[LocalProjection, ...]]:
    """Strictly decode the shared projection-tuple schema.

    Returns the declared qubit count and the entries, without
    constraining how many entries there are; assertion tuples share this
    schema with descriptions but may have any length.
    """
    from .circuit import matrix_from_json

    if not isinstance(obj, dict):
        raise SchemaError("description: expected a JSON object at top level")
    unknown = set(obj) - {"n_qubits", "projections"}
    if unknown:
        raise SchemaError(f"description: unknown field(s) {sorted(unknown)}")
    for field in ("n_qubits", "projections"):
        if field not in obj:
            raise SchemaError(f"description: missing required field {field!r}")
    n_qubits = obj["n_qubits"]
    if isinstance(n_qubits, bool) or not isinstance(n_qubits, int):
        raise SchemaError(f"n_qubits: expected an integer, got {n_qubits!r}")
    if n_qubits < 1:
        raise SchemaError(f"n_qubits: must be at least 1, got {n_qubits}")
    raw_entries = obj["projections"]
    if not isinstance(raw_entries, list):
        raise SchemaError("projections: expected a list")
    entries = []
    for i, node in enumerate(raw_entries):
        where = f"projections[{i}]"
        if not isinstance(node, dict):
            raise SchemaError(f"{where}: expected an object")
        unknown = set(node) - {"support", "matrix"}
        if unknown:
            raise SchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
        for field in ("support", "matrix"):
            if field not in node:
                raise SchemaError(f"{where}: missing required field {field!r}")
        raw_support = node["support"]
        if not isinstance(raw_support, list) or not raw_support:
            raise SchemaError(f"{where}.support: expected a non-empty list")
        support = []
        for j, q in enumerate(raw_support):
            if isinstance(q, bool) or not isinstance(q, int):
                raise SchemaError(
                    f"{where}.support[{j}]: expected an integer, got {q!r}"
                )
            support.append(q)
        if support != sorted(set(support)):
            raise SchemaError(
                f"{where}.support: must be sorted and duplicate-free, "
                f"got {support}"
            )
        if support[-1] >= n_qubits or support[0] < 0:
            raise SchemaError(
                f"{where}.support: indices out of range for {n_qubits} qubit(s)"
            )
        matrix = matrix_from_json(node["matrix"], f"{where}.matrix")
        if matrix.shape[0] != 1 << len(support):
            raise SchemaError(
                f"{where}: matrix of dimension {matrix.shape[0]} does not "
                f"match {len(support)} qubit(s)"
            )
        entries.append(LocalProjection(tuple(support), matrix))
    return n_qubits, tuple(entries)


def description_from_json(obj) -> Description:
    """Decode a description, requiring exactly one entry per qubit."""
    n_qubits, entries = projection_entries_from_json(obj)
    if len(entries) != n_qubits:
        raise SchemaError(
            f"description: expected {n_qubits} projection(s), one per qubit, "
            f"got {len(entries)}"
        )
    return Description(n_qubits, entries)
