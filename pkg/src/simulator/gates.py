"""
Gate alphabet and gate matrices.

Conventions shared by the fast kernels and the dense oracle:
  - RZ is the symmetric form diag(e^{-i t/2}, e^{i t/2}).
  - ZZ(p) = exp(-i p Z (x) Z) = diag(e^{-ip}, e^{ip}, e^{ip}, e^{-ip}).
  - Controlled gates list the control qubit first.
  - In a 4x4 local matrix, qubits[0] is the high bit of the local index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.errors import GateError


class GateKind(str, Enum):
    RY = "RY"
    RZ = "RZ"
    RX = "RX"
    H = "H"
    X = "X"
    CNOT = "CNOT"
    CZ = "CZ"
    CRX = "CRX"
    CRZ = "CRZ"
    ZZ = "ZZ"


PARAMETRIZED = frozenset({GateKind.RY, GateKind.RZ, GateKind.RX,
                          GateKind.CRX, GateKind.CRZ, GateKind.ZZ})
TWO_QUBIT = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.CRX,
                       GateKind.CRZ, GateKind.ZZ})
CONTROLLED = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.CRX, GateKind.CRZ})

# Controlled kind -> single-qubit kind acting on the target
_TARGET_KIND = {
    GateKind.CNOT: GateKind.X,
    GateKind.CZ: None,  # Pauli Z, not in the public alphabet
    GateKind.CRX: GateKind.RX,
    GateKind.CRZ: GateKind.RZ,
}

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_FIXED = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
}
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One concrete gate application."""

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

        arity = 2 if kind in TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise GateError(f"{kind.value} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise GateError(f"{kind.value} qubit indices must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateError(f"Negative qubit index in {self.qubits}")

        if kind in PARAMETRIZED:
            if self.angle is None:
                raise GateError(f"{kind.value} requires an angle")
            angle = float(self.angle)
            if not math.isfinite(angle):
                raise GateError(f"{kind.value} angle must be finite, got {self.angle!r}")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise GateError(f"{kind.value} takes no angle")

    def check_width(self, n_qubits: int) -> None:
        """Raise GateError if any index is outside an n-qubit register."""
        for q in self.qubits:
            if q >= n_qubits:
                raise GateError(
                    f"{self.kind.value} index {q} out of range for {n_qubits} qubit(s)"
                )

    def __str__(self) -> str:
        qubits = ",".join(str(q) for q in self.qubits)
        if self.angle is None:
            return f"{self.kind.value}({qubits})"
        return f"{self.kind.value}({qubits}; {self.angle:.6g})"


# ── Matrices ────────────────────────────────────────────────────────


def rotation_matrices(kind: GateKind, angles: np.ndarray) -> np.ndarray:
    """
    Stack of single-qubit matrices, one per angle.

    Args:
        kind: RX, RY or RZ.
        angles: Array of shape (B,).

    Returns:
        Complex array of shape (B, 2, 2).
    """
    kind = GateKind(kind)
    half = 0.5 * np.asarray(angles, dtype=float).reshape(-1)
    c, s = np.cos(half), np.sin(half)
    out = np.zeros((half.shape[0], 2, 2), dtype=complex)
    if kind is GateKind.RY:
        out[:, 0, 0], out[:, 0, 1] = c, -s
        out[:, 1, 0], out[:, 1, 1] = s, c
    elif kind is GateKind.RX:
        out[:, 0, 0], out[:, 0, 1] = c, -1j * s
        out[:, 1, 0], out[:, 1, 1] = -1j * s, c
    elif kind is GateKind.RZ:
        out[:, 0, 0] = np.exp(-1j * half)
        out[:, 1, 1] = np.exp(1j * half)
    else:
        raise GateError(f"{kind.value} is not a single-qubit rotation")
    return out


def target_matrices(kind: GateKind, angles: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Matrix applied to the target qubit (for controlled kinds, on the control=1
    subspace). Returns shape (B, 2, 2), or (1, 2, 2) for fixed gates.
    """
    kind = GateKind(kind)
    if kind in _FIXED:
        return _FIXED[kind][None, :, :]
    if kind in CONTROLLED:
        inner = _TARGET_KIND[kind]
        if inner is None:
            return PAULI_Z[None, :, :]
        return target_matrices(inner, angles)
    if kind is GateKind.ZZ:
        raise GateError("ZZ has no single-qubit target matrix")
    return rotation_matrices(kind, angles)


def gate_matrix(kind: GateKind, angle: Optional[float] = None) -> np.ndarray:
    """Local unitary of a gate: 2x2 for one qubit, 4x4 for two qubits."""
    kind = GateKind(kind)
    angles = None if angle is None else np.array([angle], dtype=float)
    if kind is GateKind.ZZ:
        phase = np.exp(-1j * float(angle))
        return np.diag([phase, np.conj(phase), np.conj(phase), phase])
    if kind in CONTROLLED:
        full = np.eye(4, dtype=complex)
        full[2:, 2:] = target_matrices(kind, angles)[0]
        return full
    return target_matrices(kind, angles)[0]


def is_unitary(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    """True when U^dagger U equals the identity within *tol* elementwise."""
    m = np.asarray(matrix)
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol, rtol=0.0))
