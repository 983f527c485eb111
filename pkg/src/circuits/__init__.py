from src.circuits.template import CircuitTemplate, Slot, SlotSource, Transform
from src.circuits.encoders import EncoderSpec, build_encoder
from src.circuits.ansatze import AnsatzSpec, ansatz_layout, ansatz_param_count
from src.circuits.assembly import CircuitSpec, assemble_pqc, evaluate, simulate_batch

__all__ = [
    "CircuitTemplate",
    "Slot",
    "SlotSource",
    "Transform",
    "EncoderSpec",
    "build_encoder",
    "AnsatzSpec",
    "ansatz_layout",
    "ansatz_param_count",
    "CircuitSpec",
    "assemble_pqc",
    "evaluate",
    "simulate_batch",
]
