"""
Dense-matrix reference simulator.

Every gate is expanded to its full 2^n x 2^n matrix through Kronecker
products and multiplied onto the state vector out of place. Nothing here
shares code with the strided kernels in statevector.py beyond the 2x2 / 4x4
local gate matrices, so the two paths can check each other.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

from config.settings import settings
from src.errors import CapacityError, GateError
from src.simulator.gates import PAULI_Z, TWO_QUBIT, GateOp, gate_matrix, is_unitary
from src.simulator.statevector import StateVector

logger = logging.getLogger(__name__)

_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DenseUnitary:
    """Full-register unitary, checked for unitarity on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        if not is_unitary(self.matrix):
            raise GateError("Constructed matrix is not unitary within 1e-10")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _check_oracle_width(n_qubits: int) -> None:
    limit = settings.simulation.oracle_max_qubits
    if not 1 <= n_qubits <= limit:
        raise CapacityError(
            f"Dense oracle supports 1..{limit} qubits, got {n_qubits}"
        )


def embed_operator(n_qubits: int, factors: Dict[int, np.ndarray]) -> np.ndarray:
    """
    Tensor product of 2x2 *factors* keyed by qubit, identity elsewhere.

    Qubit n-1 is the leftmost factor, so qubit 0 ends up as the
    least-significant index bit.
    """
    out = np.ones((1, 1), dtype=complex)
    for q in range(n_qubits - 1, -1, -1):
        out = np.kron(out, factors.get(q, _IDENTITY))
    return out


def gate_unitary(n_qubits: int, gate: GateOp) -> DenseUnitary:
    """Full-register matrix of a single gate."""
    gate.check_width(n_qubits)
    local = gate_matrix(gate.kind, gate.angle)
    if gate.kind not in TWO_QUBIT:
        return DenseUnitary(embed_operator(n_qubits, {gate.qubits[0]: local}))

    # Split the 4x4 local matrix into 2x2 blocks:
    # U = sum_ij |i><j| (x) B_ij with qubits[0] carrying |i><j|.
    high, low = gate.qubits
    full = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=complex)
    for i in (0, 1):
        for j in (0, 1):
            block = local[2 * i:2 * i + 2, 2 * j:2 * j + 2]
            if not np.any(block):
                continue
            outer = np.zeros((2, 2), dtype=complex)
            outer[i, j] = 1.0
            full += embed_operator(n_qubits, {high: outer, low: block})
    return DenseUnitary(full)


def oracle_apply(n_qubits: int, gates: Iterable[GateOp]) -> StateVector:
    """Run *gates* on |0...0> with full dense matrices."""
    _check_oracle_width(n_qubits)
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[0] = 1.0
    for gate in gates:
        psi = gate_unitary(n_qubits, gate).matrix @ psi
    return StateVector(n_qubits, psi)


def oracle_expectation_z0(state: StateVector) -> float:
    """<psi| Z_0 |psi> through the embedded observable."""
    _check_oracle_width(state.n_qubits)
    observable = embed_operator(state.n_qubits, {0: PAULI_Z})
    return float(np.real(np.vdot(state.amplitudes, observable @ state.amplitudes)))


def oracle_predict(n_qubits: int, gates: Sequence[GateOp]) -> float:
    return oracle_expectation_z0(oracle_apply(n_qubits, gates))
