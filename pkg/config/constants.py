"""
Constants for the PQC regression toolkit.

Encoder and ansatz registries, protocol defaults and result-schema metadata
are defined here so every module shares a single source of truth.
"""

from typing import Any, Dict, List, Tuple

TOOL_VERSION = "1.0.0"
RESULTS_SCHEMA_VERSION = 1

# ═══════════════════════════════════════════════════════════════════════
# ENCODERS
# ═══════════════════════════════════════════════════════════════════════
#
# "layers" lists the single-qubit encoding unitaries in application order;
# two-layer encoders apply layer 1, the entangling chain, layer 2, and the
# entangling chain again.

ENCODING_UNITARIES: Tuple[str, ...] = ("A1", "A2", "M", "IQP")

ENCODERS: Dict[str, Dict[str, Any]] = {
    "A1": {"layers": ("A1",), "entangler": None,
           "label": "Single-angle encoding (RY)"},
    "A2": {"layers": ("A2",), "entangler": None,
           "label": "Double-angle encoding (RY, RZ)"},
    "M": {"layers": ("M",), "entangler": None,
          "label": "Mitarai encoding (RY(arcsin x^2), RZ(arccos x^2))"},
    "IQP": {"layers": ("IQP",), "entangler": None,
            "label": "Instantaneous quantum polynomial (H, RZ, ZZ)"},
    "A1-A1-CNOT": {"layers": ("A1", "A1"), "entangler": "CNOT", "label": "A1, A1 with CNOT chain"},
    "A2-A2-CNOT": {"layers": ("A2", "A2"), "entangler": "CNOT", "label": "A2, A2 with CNOT chain"},
    "M-M-CNOT": {"layers": ("M", "M"), "entangler": "CNOT", "label": "M, M with CNOT chain"},
    "M-A1-CNOT": {"layers": ("M", "A1"), "entangler": "CNOT", "label": "M, A1 with CNOT chain"},
    "M-A2-CNOT": {"layers": ("M", "A2"), "entangler": "CNOT", "label": "M, A2 with CNOT chain"},
    "A1-A1-CZ": {"layers": ("A1", "A1"), "entangler": "CZ", "label": "A1, A1 with CZ chain"},
    "A2-A2-CZ": {"layers": ("A2", "A2"), "entangler": "CZ", "label": "A2, A2 with CZ chain"},
    "M-M-CZ": {"layers": ("M", "M"), "entangler": "CZ", "label": "M, M with CZ chain"},
    "M-A1-CZ": {"layers": ("M", "A1"), "entangler": "CZ", "label": "M, A1 with CZ chain"},
    "M-A2-CZ": {"layers": ("M", "A2"), "entangler": "CZ", "label": "M, A2 with CZ chain"},
}

# ═══════════════════════════════════════════════════════════════════════
# ANSATZE
# ═══════════════════════════════════════════════════════════════════════
#
# Layouts follow the expressibility-study circuit family; "circuit" names the
# member of that family each ansatz was transcribed from. "params" is the
# per-layer trainable count as a function of n, asserted against the census
# fixture in tests/fixtures/ansatz_census.json.

ANSATZE: Dict[str, Dict[str, Any]] = {
    "Modified-Pauli-CRZ": {"circuit": 13, "params": "4n", "fixed_gates": False,
                           "label": "RY layer, CRZ ring, RY layer, reversed CRZ ring"},
    "Modified-Pauli-CRX": {"circuit": 14, "params": "4n", "fixed_gates": False,
                           "label": "RY layer, CRX ring, RY layer, reversed CRX ring"},
    "Efficient-CRZ": {"circuit": 3, "params": "3n-1", "fixed_gates": False,
                      "label": "RX, RZ layers and a CRZ ladder"},
    "Efficient-CRX": {"circuit": 4, "params": "3n-1", "fixed_gates": False,
                      "label": "RX, RZ layers and a CRX ladder"},
    "HWE-CNOT": {"circuit": 2, "params": "2n", "fixed_gates": True,
                 "label": "Hardware-efficient RY, RZ layers and a CNOT chain"},
    "HWE-CZ": {"circuit": 2, "params": "2n", "fixed_gates": True,
               "label": "Hardware-efficient RY, RZ layers and a CZ chain"},
    "ESU2": {"circuit": None, "params": "4n", "fixed_gates": True,
             "label": "EfficientSU2: RY, RZ, CNOT chain, RY, RZ"},
    "Full-Pauli-CRZ": {"circuit": 5, "params": "n^2+3n", "fixed_gates": False,
                       "label": "RX, RZ layers, all-to-all CRZ, RX, RZ layers"},
    "Full-Pauli-CRX": {"circuit": 6, "params": "n^2+3n", "fixed_gates": False,
                       "label": "RX, RZ layers, all-to-all CRX, RX, RZ layers"},
    "Hadamard": {"circuit": 9, "params": "n", "fixed_gates": True,
                 "label": "H layer, CZ chain, RX layer"},
    "Full-CRZ": {"circuit": 18, "params": "3n", "fixed_gates": False,
                 "label": "RX, RZ layers and a CRZ ring"},
    "Full-CRX": {"circuit": 19, "params": "3n", "fixed_gates": False,
                 "label": "RX, RZ layers and a CRX ring"},
}

# Not part of the benchmark grid; used for realizable-model checks.
DIAGNOSTIC_ANSATZE: Dict[str, Dict[str, Any]] = {
    "Single-RY": {"circuit": None, "params": "n", "fixed_gates": False,
                  "label": "One trainable RY per qubit"},
}

# Shallow subset used for the second dataset's sweep: 14 x 7 = 98 circuits.
REDUCED_ANSATZE: List[str] = [
    "Efficient-CRZ",
    "Efficient-CRX",
    "HWE-CNOT",
    "HWE-CZ",
    "Hadamard",
    "Full-CRZ",
    "Full-CRX",
]

# ═══════════════════════════════════════════════════════════════════════
# PROTOCOL DEFAULTS
# ═══════════════════════════════════════════════════════════════════════

SPSA_DEFAULTS: Dict[str, float] = {
    "a": 0.2,
    "c": 0.1,
    "A": 0.0,
    "alpha": 0.602,
    "gamma": 0.101,
}

# Iteration budget by circuit width: (qubit threshold, iterations)
ITERATION_BUDGETS: List[Tuple[int, int]] = [(16, 250), (0, 1000)]

DEFAULT_LEARNING_CURVE_RATIOS: List[float] = [0.1, 0.3, 0.5, 0.7, 0.8]
TEST_RATIO: float = 0.2
MAX_TRAIN_RATIO: float = 0.8

DEPTH_SCAN_VALUES: List[int] = [1, 3, 5, 7, 9]

DEFAULT_RIDGE_LAMBDA: float = 1.0

SYNTHETIC_KINDS: Tuple[str, ...] = ("cosine", "linear", "wide-gaussian")

EXIT_CODES: Dict[str, int] = {
    "success": 0,
    "config_error": 2,
    "compute_error": 3,
}


def default_iterations(n_qubits: int) -> int:
    """Return the SPSA iteration budget for a circuit of *n_qubits*."""
    for threshold, iterations in ITERATION_BUDGETS:
        if n_qubits >= threshold:
            return iterations
    return ITERATION_BUDGETS[-1][1]
