from src.simulator.gates import GateKind, GateOp, gate_matrix, is_unitary
from src.simulator.statevector import (
    StateVector,
    apply_gate,
    apply_kernel,
    expectation_z0,
    expectation_z0_block,
    new_zero_state,
    zero_block,
)
from src.simulator.oracle import DenseUnitary, gate_unitary, oracle_apply, oracle_predict

__all__ = [
    "GateKind",
    "GateOp",
    "gate_matrix",
    "is_unitary",
    "StateVector",
    "apply_gate",
    "apply_kernel",
    "expectation_z0",
    "expectation_z0_block",
    "new_zero_state",
    "zero_block",
    "DenseUnitary",
    "gate_unitary",
    "oracle_apply",
    "oracle_predict",
]
