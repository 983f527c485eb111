"""
Statevector simulation kernels.

Qubit 0 is the least-significant bit of the basis-state index. A gate on
qubits (q1, q2, ...) is applied by reshaping the amplitude block so that each
of those qubits' index bits gets its own axis of length 2; the resulting
views are strided slices of the original buffer, so updates happen in place.

Kernels operate on a (rows, 2^n) amplitude block so the same code path
serves a single StateVector (one row) and batched prediction (one row per
sample, each row with its own angles).
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from src.errors import CapacityError
from src.simulator.gates import CONTROLLED, GateKind, GateOp, target_matrices

logger = logging.getLogger(__name__)


class StateVector:
    """Complex amplitudes of an n-qubit pure state."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape[0] != 1 << n_qubits:
            raise CapacityError(
                f"{n_qubits} qubit(s) need {1 << n_qubits} amplitudes, got {amplitudes.shape[0]}"
            )
        self.n_qubits = int(n_qubits)
        self.amplitudes = amplitudes

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def block(self) -> np.ndarray:
        """One-row view onto the amplitudes (writes go through)."""
        return self.amplitudes.reshape(1, -1)

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


# ── Construction ────────────────────────────────────────────────────


def check_capacity(n_qubits: int) -> None:
    limit = settings.simulation.max_qubits
    if not 1 <= n_qubits <= limit:
        raise CapacityError(
            f"Qubit count {n_qubits} outside supported range 1..{limit} "
            f"(PQC_MAX_QUBITS={limit})"
        )


def new_zero_state(n_qubits: int) -> StateVector:
    """Allocate |0...0> on *n_qubits* qubits."""
    check_capacity(n_qubits)
    amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(n_qubits, amplitudes)


def zero_block(rows: int, n_qubits: int) -> np.ndarray:
    """(rows, 2^n) block of |0...0> states."""
    check_capacity(n_qubits)
    block = np.zeros((rows, 1 << n_qubits), dtype=np.complex128)
    block[:, 0] = 1.0
    return block


# ── Kernels ─────────────────────────────────────────────────────────


def _split_view(block: np.ndarray, n_qubits: int,
                qubits: Iterable[int]) -> Tuple[np.ndarray, Dict[int, int]]:
    """Reshape so every listed qubit's index bit has its own length-2 axis."""
    shape = [block.shape[0]]
    axes: Dict[int, int] = {}
    upper = n_qubits
    for q in sorted(qubits, reverse=True):
        shape.append(1 << (upper - q - 1))
        axes[q] = len(shape)
        shape.append(2)
        upper = q
    shape.append(1 << upper)
    return block.reshape(shape), axes


def _select(ndim: int, fixed: Dict[int, int]) -> Tuple:
    index = [slice(None)] * ndim
    for axis, bit in fixed.items():
        index[axis] = bit
    return tuple(index)


def _per_row(values: np.ndarray, ndim: int) -> np.ndarray:
    return values.reshape((-1,) + (1,) * (ndim - 1))


def _as_angles(angle) -> Optional[np.ndarray]:
    if angle is None:
        return None
    return np.atleast_1d(np.asarray(angle, dtype=float))


def apply_kernel(block: np.ndarray, n_qubits: int, kind: GateKind,
                 qubits: Sequence[int], angle=None) -> None:
    """
    Apply one gate to every row of *block* in place.

    *angle* is a scalar, a length-1 array, or one angle per row.
    """
    kind = GateKind(kind)
    angles = _as_angles(angle)
    view, axes = _split_view(block, n_qubits, qubits)

    if kind is GateKind.ZZ:
        phase = np.exp(-1j * angles)
        a, b = axes[qubits[0]], axes[qubits[1]]
        for bit_a in (0, 1):
            for bit_b in (0, 1):
                index = _select(view.ndim, {a: bit_a, b: bit_b})
                factor = phase if bit_a == bit_b else np.conj(phase)
                view[index] *= _per_row(factor, view.ndim - 2)
        return

    fixed: Dict[int, int] = {}
    if kind in CONTROLLED:
        fixed[axes[qubits[0]]] = 1
    target_axis = axes[qubits[-1]]
    index0 = _select(view.ndim, {**fixed, target_axis: 0})
    index1 = _select(view.ndim, {**fixed, target_axis: 1})
    sub_ndim = view.ndim - len(fixed) - 1

    m = target_matrices(kind, angles)
    m00, m01 = _per_row(m[:, 0, 0], sub_ndim), _per_row(m[:, 0, 1], sub_ndim)
    m10, m11 = _per_row(m[:, 1, 0], sub_ndim), _per_row(m[:, 1, 1], sub_ndim)

    a0 = view[index0].copy()
    a1 = view[index1]
    new1 = m10 * a0 + m11 * a1
    view[index0] = m00 * a0 + m01 * a1
    view[index1] = new1


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply *gate* to *state* in place and return the same state."""
    gate.check_width(state.n_qubits)
    apply_kernel(state.block(), state.n_qubits, gate.kind, gate.qubits, gate.angle)
    return state


# ── Readout ─────────────────────────────────────────────────────────


def expectation_z0_block(block: np.ndarray) -> np.ndarray:
    """<Z_0> for every row of a (rows, 2^n) block."""
    probs = np.abs(block.reshape(block.shape[0], -1, 2)) ** 2
    return probs[:, :, 0].sum(axis=1) - probs[:, :, 1].sum(axis=1)


def expectation_z0(state: StateVector) -> float:
    """Expectation of Pauli Z on qubit 0."""
    assert abs(state.norm() - 1.0) < settings.simulation.norm_tolerance, \
        "expectation_z0 requires a normalized state"
    return float(expectation_z0_block(state.block())[0])
