"""
Variational layer fragments.

Each builder emits one layer over n qubits with every rotation angle a fresh
trainable slot numbered 0..P-1 in emission order. Controlled gates list the
control qubit first. The committed gate census in
tests/fixtures/ansatz_census.json is the reference for these layouts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from config.constants import ANSATZE, DIAGNOSTIC_ANSATZE
from src.circuits.template import CircuitTemplate, Slot, fixed, trainable
from src.errors import ConfigError
from src.simulator.gates import GateKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnsatzSpec:
    name: str

    def __post_init__(self):
        if self.name not in ANSATZE and self.name not in DIAGNOSTIC_ANSATZE:
            raise ConfigError(
                f"Unknown ansatz {self.name!r}; expected one of: {', '.join(ANSATZE)}"
            )

    @property
    def min_qubits(self) -> int:
        return 1 if self.name in DIAGNOSTIC_ANSATZE else 2

    @property
    def has_fixed_gates(self) -> bool:
        entry = ANSATZE.get(self.name) or DIAGNOSTIC_ANSATZE[self.name]
        return bool(entry["fixed_gates"])


class _Layer:
    """Slot accumulator that numbers trainable slots as they are added."""

    def __init__(self, n_qubits: int):
        self.n = n_qubits
        self.slots: List[Slot] = []
        self.n_params = 0

    def rotate(self, kind: GateKind, *qubits: int) -> None:
        self.slots.append(trainable(kind, qubits, self.n_params))
        self.n_params += 1

    def gate(self, kind: GateKind, *qubits: int) -> None:
        self.slots.append(fixed(kind, *qubits))

    def rotation_layer(self, first: GateKind, second: Optional[GateKind] = None) -> None:
        for q in range(self.n):
            self.rotate(first, q)
            if second is not None:
                self.rotate(second, q)

    def chain(self, kind: GateKind) -> None:
        for q in range(self.n - 1):
            self.gate(kind, q, q + 1)


# ── Layouts ─────────────────────────────────────────────────────────


def _modified_pauli(crot: GateKind) -> Callable[[_Layer], None]:
    def build(layer: _Layer) -> None:
        n = layer.n
        layer.rotation_layer(GateKind.RY)
        for c in range(n - 1, -1, -1):
            layer.rotate(crot, c, (c + 1) % n)
        layer.rotation_layer(GateKind.RY)
        for c in range(n):
            layer.rotate(crot, c, (c - 1) % n)
    return build


def _efficient(crot: GateKind) -> Callable[[_Layer], None]:
    def build(layer: _Layer) -> None:
        layer.rotation_layer(GateKind.RX, GateKind.RZ)
        for q in range(layer.n - 2, -1, -1):
            layer.rotate(crot, q + 1, q)
    return build


def _hardware_efficient(entangler: GateKind) -> Callable[[_Layer], None]:
    def build(layer: _Layer) -> None:
        layer.rotation_layer(GateKind.RY, GateKind.RZ)
        layer.chain(entangler)
    return build


def _efficient_su2(layer: _Layer) -> None:
    layer.rotation_layer(GateKind.RY, GateKind.RZ)
    layer.chain(GateKind.CNOT)
    layer.rotation_layer(GateKind.RY, GateKind.RZ)


def _full_pauli(crot: GateKind) -> Callable[[_Layer], None]:
    def build(layer: _Layer) -> None:
        n = layer.n
        layer.rotation_layer(GateKind.RX, GateKind.RZ)
        for c in range(n - 1, -1, -1):
            for t in range(n - 1, -1, -1):
                if t != c:
                    layer.rotate(crot, c, t)
        layer.rotation_layer(GateKind.RX, GateKind.RZ)
    return build


def _hadamard(layer: _Layer) -> None:
    n = layer.n
    for q in range(n):
        layer.gate(GateKind.H, q)
    for q in range(n - 2, -1, -1):
        layer.gate(GateKind.CZ, q, q + 1)
    layer.rotation_layer(GateKind.RX)


def _full_ring(crot: GateKind) -> Callable[[_Layer], None]:
    def build(layer: _Layer) -> None:
        n = layer.n
        layer.rotation_layer(GateKind.RX, GateKind.RZ)
        for q in range(n):
            layer.rotate(crot, n - q - 1, (n - q) % n)
    return build


def _single_ry(layer: _Layer) -> None:
    layer.rotation_layer(GateKind.RY)


_LAYOUTS: Dict[str, Callable[[_Layer], None]] = {
    "Modified-Pauli-CRZ": _modified_pauli(GateKind.CRZ),
    "Modified-Pauli-CRX": _modified_pauli(GateKind.CRX),
    "Efficient-CRZ": _efficient(GateKind.CRZ),
    "Efficient-CRX": _efficient(GateKind.CRX),
    "HWE-CNOT": _hardware_efficient(GateKind.CNOT),
    "HWE-CZ": _hardware_efficient(GateKind.CZ),
    "ESU2": _efficient_su2,
    "Full-Pauli-CRZ": _full_pauli(GateKind.CRZ),
    "Full-Pauli-CRX": _full_pauli(GateKind.CRX),
    "Hadamard": _hadamard,
    "Full-CRZ": _full_ring(GateKind.CRZ),
    "Full-CRX": _full_ring(GateKind.CRX),
    "Single-RY": _single_ry,
}


def ansatz_layout(ans: AnsatzSpec, n_qubits: int) -> CircuitTemplate:
    """One variational layer as a template fragment with no feature slots."""
    if isinstance(ans, str):
        ans = AnsatzSpec(ans)
    if n_qubits < ans.min_qubits:
        raise ConfigError(f"{ans.name} needs at least {ans.min_qubits} qubits, got {n_qubits}")
    layer = _Layer(n_qubits)
    _LAYOUTS[ans.name](layer)
    return CircuitTemplate(n_qubits, 0, tuple(layer.slots))


def ansatz_param_count(ans: AnsatzSpec, n_qubits: int) -> int:
    """Trainable parameters in one layer, P(name, n)."""
    return ansatz_layout(ans, n_qubits).total_params
