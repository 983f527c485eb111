"""
Feature-map fragments.

Single-layer encoders:
  A1   RY(x)                      per qubit
  A2   RY(x) then RZ(x)           per qubit
  M    RY(arcsin x^2) then RZ(arccos x^2) per qubit
  IQP  H on every qubit, RZ(x) on every qubit, ZZ(x_i x_j) for all i < j

Two-layer encoders apply layer 1, an entangling chain (q, q+1) for
q = 0..n-2, layer 2 and the chain again; both layers read the same x.
With redundancy r, qubit q reads feature q // r.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, List, Optional, Tuple

from config.constants import ENCODERS
from src.circuits.template import CircuitTemplate, Slot, Transform, feature, fixed
from src.errors import ConfigError
from src.simulator.gates import GateKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EncoderSpec:
    name: str

    def __post_init__(self):
        if self.name not in ENCODERS:
            raise ConfigError(
                f"Unknown encoder {self.name!r}; expected one of: {', '.join(ENCODERS)}"
            )
        if "IQP" in self.layers and len(self.layers) > 1:
            raise ConfigError("IQP cannot be used in a two-layer encoder")

    @property
    def layers(self) -> Tuple[str, ...]:
        return tuple(ENCODERS[self.name]["layers"])

    @property
    def entangler(self) -> Optional[str]:
        return ENCODERS[self.name]["entangler"]


# ── Single-layer unitaries ──────────────────────────────────────────


def _a1(n: int, r: int) -> List[Slot]:
    return [feature(GateKind.RY, (q,), (q // r,)) for q in range(n)]


def _a2(n: int, r: int) -> List[Slot]:
    slots = []
    for q in range(n):
        slots.append(feature(GateKind.RY, (q,), (q // r,)))
        slots.append(feature(GateKind.RZ, (q,), (q // r,)))
    return slots


def _mitarai(n: int, r: int) -> List[Slot]:
    slots = []
    for q in range(n):
        slots.append(feature(GateKind.RY, (q,), (q // r,), Transform.ARCSIN_SQ))
        slots.append(feature(GateKind.RZ, (q,), (q // r,), Transform.ARCCOS_SQ))
    return slots


def _iqp(n: int, r: int) -> List[Slot]:
    slots = [fixed(GateKind.H, q) for q in range(n)]
    slots += [feature(GateKind.RZ, (q,), (q // r,)) for q in range(n)]
    for i, j in combinations(range(n), 2):
        slots.append(feature(GateKind.ZZ, (i, j), (i // r, j // r), Transform.PRODUCT_PAIR))
    return slots


_UNITARIES: Dict[str, Callable[[int, int], List[Slot]]] = {
    "A1": _a1,
    "A2": _a2,
    "M": _mitarai,
    "IQP": _iqp,
}


def entangling_chain(kind: str, n: int) -> List[Slot]:
    return [fixed(GateKind(kind), q, q + 1) for q in range(n - 1)]


# ── Fragment builder ────────────────────────────────────────────────


def build_encoder(enc: EncoderSpec, n_qubits: int, redundancy: int = 1) -> CircuitTemplate:
    """
    Encoder fragment over *n_qubits* reading n_qubits / redundancy features.

    Raises:
        ConfigError: unknown name or n_qubits not divisible by redundancy.
    """
    if isinstance(enc, str):
        enc = EncoderSpec(enc)
    if redundancy < 1 or n_qubits < 1 or n_qubits % redundancy:
        raise ConfigError(
            f"{n_qubits} qubit(s) cannot be split into groups of {redundancy} per feature"
        )

    slots: List[Slot] = []
    for layer in enc.layers:
        slots += _UNITARIES[layer](n_qubits, redundancy)
        if enc.entangler:
            slots += entangling_chain(enc.entangler, n_qubits)
    return CircuitTemplate(n_qubits, n_qubits // redundancy, tuple(slots))
