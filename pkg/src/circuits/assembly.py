"""
Full-circuit assembly and evaluation.

A PQC is k re-upload blocks, each the encoder fragment followed by v ansatz
layers with fresh parameters. The prediction is <Z_0> of the final state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.settings import settings
from src.circuits.ansatze import AnsatzSpec, ansatz_layout
from src.circuits.encoders import EncoderSpec, build_encoder
from src.circuits.template import CircuitTemplate
from src.errors import ConfigError
from src.simulator.statevector import (
    apply_gate,
    apply_kernel,
    check_capacity,
    expectation_z0,
    expectation_z0_block,
    new_zero_state,
    zero_block,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircuitSpec:
    """Identity of a PQC: width, encoder, ansatz, k, v and redundancy."""

    n_qubits: int
    encoder: str
    ansatz: str
    rud: int = 1
    ansatz_layers: int = 1
    redundancy: int = 1

    def __post_init__(self):
        EncoderSpec(self.encoder)
        AnsatzSpec(self.ansatz)
        if not 1 <= self.rud <= settings.app.max_rud:
            raise ConfigError(f"rud must be in 1..{settings.app.max_rud}, got {self.rud}")
        if not 1 <= self.ansatz_layers <= settings.app.max_ansatz_layers:
            raise ConfigError(
                f"ansatz_layers must be in 1..{settings.app.max_ansatz_layers}, "
                f"got {self.ansatz_layers}"
            )
        if self.redundancy < 1 or self.n_qubits % self.redundancy:
            raise ConfigError(
                f"n_qubits={self.n_qubits} is not a multiple of redundancy={self.redundancy}"
            )
        check_capacity(self.n_qubits)

    @property
    def n_features(self) -> int:
        return self.n_qubits // self.redundancy

    @property
    def label(self) -> str:
        return f"{self.encoder}_{self.ansatz}"


def assemble_pqc(spec: CircuitSpec) -> CircuitTemplate:
    """k x [encoder; v x ansatz layer], parameters numbered in circuit order."""
    encoder = build_encoder(EncoderSpec(spec.encoder), spec.n_qubits, spec.redundancy)
    layer = ansatz_layout(AnsatzSpec(spec.ansatz), spec.n_qubits)

    template = CircuitTemplate(spec.n_qubits, spec.n_features, ())
    for block in range(1, spec.rud + 1):
        template = template.compose(encoder.with_section(f"block {block} / encoder"))
        for repeat in range(1, spec.ansatz_layers + 1):
            template = template.compose(
                layer.with_section(f"block {block} / ansatz layer {repeat}")
            )
    logger.debug("Assembled %s: %d slots, %d params",
                 spec.label, len(template), template.total_params)
    return template


# ── Evaluation ──────────────────────────────────────────────────────


def evaluate(template: CircuitTemplate, theta, x) -> float:
    """<Z_0> after running the bound circuit from |0...0>."""
    state = new_zero_state(template.n_qubits)
    for gate in template.bind(theta, x):
        apply_gate(state, gate)
    return expectation_z0(state)


def simulate_batch(template: CircuitTemplate, theta, X,
                   chunk_rows: Optional[int] = None) -> np.ndarray:
    """
    <Z_0> for every row of X, evolving a (rows, 2^n) block per chunk.

    Rows per chunk default to the configured amplitude budget divided by 2^n.
    """
    n = template.n_qubits
    X = template.check_features(X)
    theta = template.check_theta(theta)
    out = np.empty(X.shape[0], dtype=float)
    if chunk_rows is None:
        chunk_rows = max(1, settings.simulation.batch_amplitude_budget >> n)

    for start in range(0, X.shape[0], chunk_rows):
        rows = X[start:start + chunk_rows]
        block = zero_block(rows.shape[0], n)
        for slot, angle in zip(template.slots, template.slot_angles(theta, rows)):
            apply_kernel(block, n, slot.kind, slot.qubits, angle)
        out[start:start + rows.shape[0]] = expectation_z0_block(block)
    return out
