"""
Compiled circuit form.

A CircuitTemplate is an ordered list of slots. Each slot is a gate whose
angle is either absent (fixed gate), computed from the feature vector, or
read from the trainable parameter vector. Binding (theta, x) produces the
concrete GateOp list; `slot_angles` does the same for a whole feature
matrix at once so the batched kernels can run one gate over many rows.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import ArityError, EncodingDomainError
from src.simulator.gates import PARAMETRIZED, GateKind, GateOp

logger = logging.getLogger(__name__)

# Feature values may exceed [-1, 1] by rounding noise only.
DOMAIN_TOLERANCE = 1e-12


class SlotSource(str, Enum):
    FIXED = "fixed"
    FEATURE = "feature"
    TRAINABLE = "trainable"


class Transform(str, Enum):
    RAW = "raw"
    ARCSIN_SQ = "arcsin-sq"
    ARCCOS_SQ = "arccos-sq"
    PRODUCT_PAIR = "product-pair"


@dataclass(frozen=True)
class Slot:
    kind: GateKind
    qubits: Tuple[int, ...]
    source: SlotSource = SlotSource.FIXED
    features: Tuple[int, ...] = ()
    transform: Optional[Transform] = None
    param: Optional[int] = None
    section: str = ""

    def label(self) -> str:
        qubits = ",".join(str(q) for q in self.qubits)
        if self.source is SlotSource.TRAINABLE:
            return f"{self.kind.value}({qubits}; theta[{self.param}])"
        if self.source is SlotSource.FEATURE:
            args = "*".join(f"x[{f}]" for f in self.features)
            if self.transform in (Transform.ARCSIN_SQ, Transform.ARCCOS_SQ):
                fn = "arcsin" if self.transform is Transform.ARCSIN_SQ else "arccos"
                args = f"{fn}({args}^2)"
            return f"{self.kind.value}({qubits}; {args})"
        return f"{self.kind.value}({qubits})"


def fixed(kind: GateKind, *qubits: int) -> Slot:
    return Slot(GateKind(kind), tuple(qubits))


def feature(kind: GateKind, qubits: Sequence[int], features: Sequence[int],
            transform: Transform = Transform.RAW) -> Slot:
    return Slot(GateKind(kind), tuple(qubits), SlotSource.FEATURE,
                tuple(features), Transform(transform))


def trainable(kind: GateKind, qubits: Sequence[int], param: int) -> Slot:
    return Slot(GateKind(kind), tuple(qubits), SlotSource.TRAINABLE, param=param)


def _transform_values(transform: Transform, columns: List[np.ndarray]) -> np.ndarray:
    if transform is Transform.RAW:
        return columns[0]
    if transform is Transform.PRODUCT_PAIR:
        return columns[0] * columns[1]
    squared = np.clip(columns[0] ** 2, 0.0, 1.0)
    if transform is Transform.ARCSIN_SQ:
        return np.arcsin(squared)
    return np.arccos(squared)


@dataclass(frozen=True)
class CircuitTemplate:
    """Immutable slot list over n_qubits, consuming n_features and total_params."""

    n_qubits: int
    n_features: int
    slots: Tuple[Slot, ...]
    total_params: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        params = sorted(s.param for s in self.slots if s.source is SlotSource.TRAINABLE)
        if params != list(range(len(params))):
            raise ArityError("Trainable slots must use parameter indices 0..P-1 exactly once")
        object.__setattr__(self, "total_params", len(params))
        for slot in self.slots:
            if any(f >= self.n_features or f < 0 for f in slot.features):
                raise ArityError(
                    f"{slot.label()} reads a feature outside 0..{self.n_features - 1}"
                )
            if any(q >= self.n_qubits for q in slot.qubits):
                raise ArityError(f"{slot.label()} exceeds {self.n_qubits} qubit(s)")
            if (slot.source is SlotSource.FIXED) == (slot.kind in PARAMETRIZED):
                raise ArityError(f"{slot.kind.value} cannot be a {slot.source.value} slot")

    # ── Composition ─────────────────────────────────────────────────

    def compose(self, other: "CircuitTemplate") -> "CircuitTemplate":
        """Append *other*, renumbering its parameters after ours."""
        if other.n_qubits != self.n_qubits:
            raise ArityError(
                f"Cannot compose {self.n_qubits}- and {other.n_qubits}-qubit templates"
            )
        shifted = [
            replace(s, param=s.param + self.total_params)
            if s.source is SlotSource.TRAINABLE else s
            for s in other.slots
        ]
        return CircuitTemplate(
            self.n_qubits, max(self.n_features, other.n_features), self.slots + tuple(shifted)
        )

    def with_section(self, section: str) -> "CircuitTemplate":
        return CircuitTemplate(
            self.n_qubits, self.n_features, tuple(replace(s, section=section) for s in self.slots)
        )

    def permute_params(self, permutation: Sequence[int]) -> "CircuitTemplate":
        """Slot reading theta[j] now reads theta[permutation[j]]."""
        if sorted(permutation) != list(range(self.total_params)):
            raise ArityError("Permutation must cover every parameter index once")
        return CircuitTemplate(self.n_qubits, self.n_features, tuple(
            replace(s, param=int(permutation[s.param]))
            if s.source is SlotSource.TRAINABLE else s
            for s in self.slots
        ))

    # ── Binding ─────────────────────────────────────────────────────

    def check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.shape[0] != self.total_params:
            raise ArityError(
                f"Template has {self.total_params} parameter(s), got {theta.shape[0]}"
            )
        if not np.all(np.isfinite(theta)):
            raise ArityError("Parameter vector contains non-finite values")
        return theta

    def check_features(self, X) -> np.ndarray:
        """Validate a feature matrix (rows, d) against width and domain."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise ArityError(
                f"Template expects {self.n_features} feature(s), got {X.shape[1]}"
            )
        bad = np.argwhere(~(np.abs(X) <= 1.0 + DOMAIN_TOLERANCE))
        if bad.size:
            row, col = bad[0]
            raise EncodingDomainError(
                f"Feature value {X[row, col]!r} at row {row}, column {col} is outside [-1, 1]"
            )
        return X

    def slot_angles(self, theta, X) -> List[Optional[np.ndarray]]:
        """
        Angle of every slot for every row of X.

        Returns:
            One entry per slot: None for fixed gates, a length-1 array for
            trainable slots, or a length-rows array for feature slots.
        """
        theta = self.check_theta(theta)
        X = self.check_features(X)
        angles: List[Optional[np.ndarray]] = []
        for slot in self.slots:
            if slot.source is SlotSource.FIXED:
                angles.append(None)
            elif slot.source is SlotSource.TRAINABLE:
                angles.append(theta[slot.param:slot.param + 1])
            else:
                columns = [X[:, f] for f in slot.features]
                angles.append(_transform_values(slot.transform, columns))
        return angles

    def bind(self, theta, x) -> List[GateOp]:
        """Concrete gate list for one parameter vector and one feature vector."""
        x = np.asarray(x, dtype=float).reshape(-1)
        gates = []
        for slot, angle in zip(self.slots, self.slot_angles(theta, x.reshape(1, -1))):
            gates.append(GateOp(slot.kind, slot.qubits,
                                None if angle is None else float(angle[0])))
        return gates

    # ── Introspection ───────────────────────────────────────────────

    def depth(self) -> int:
        """Circuit depth counting every gate as one time step."""
        levels = [0] * self.n_qubits
        for slot in self.slots:
            level = max(levels[q] for q in slot.qubits) + 1
            for q in slot.qubits:
                levels[q] = level
        return max(levels) if levels else 0

    def gate_counts(self, section_prefix: Optional[str] = None) -> Dict[str, int]:
        slots = self.slots
        if section_prefix is not None:
            slots = [s for s in slots if s.section.startswith(section_prefix)]
        return dict(Counter(s.kind.value for s in slots))

    def describe(self) -> Dict[str, Any]:
        """Structured summary: counts, depth, per-section and per-qubit listings."""
        sections: Dict[str, List[str]] = {}
        per_qubit: Dict[int, List[str]] = {q: [] for q in range(self.n_qubits)}
        for slot in self.slots:
            sections.setdefault(slot.section or "circuit", []).append(slot.label())
            for q in slot.qubits:
                per_qubit[q].append(slot.label())
        return {
            "n_qubits": self.n_qubits,
            "n_features": self.n_features,
            "total_params": self.total_params,
            "gate_count": len(self.slots),
            "depth": self.depth(),
            "gate_counts": self.gate_counts(),
            "sections": sections,
            "per_qubit": per_qubit,
        }

    def __len__(self) -> int:
        return len(self.slots)
