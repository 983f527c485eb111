"""
Tests for src/simulator — gate matrices, in-place kernels and the dense oracle.

The fast strided kernels and the Kronecker-product oracle share only the
local 2x2 / 4x4 matrices, so agreement between them is the main check.
"""

import math

import numpy as np
import pytest

from src.errors import CapacityError, GateError
from src.simulator import (
    GateKind,
    GateOp,
    StateVector,
    apply_gate,
    apply_kernel,
    expectation_z0,
    expectation_z0_block,
    gate_matrix,
    gate_unitary,
    is_unitary,
    new_zero_state,
    oracle_apply,
    oracle_predict,
    zero_block,
)
from src.simulator.gates import PARAMETRIZED, TWO_QUBIT

ALL_KINDS = list(GateKind)


def random_gate(rng, n):
    """One gate of a random kind on random distinct qubits."""
    candidates = [k for k in ALL_KINDS if n >= 2 or k not in TWO_QUBIT]
    kind = candidates[rng.integers(len(candidates))]
    width = 2 if kind in TWO_QUBIT else 1
    qubits = tuple(int(q) for q in rng.choice(n, size=width, replace=False))
    angle = float(rng.uniform(-2 * math.pi, 2 * math.pi)) if kind in PARAMETRIZED else None
    return GateOp(kind, qubits, angle)


def run_fast(n, gates):
    state = new_zero_state(n)
    for gate in gates:
        apply_gate(state, gate)
    return state


class TestGateOp:
    """GateOp validation."""

    def test_parametrized_needs_angle(self):
        with pytest.raises(GateError):
            GateOp(GateKind.RY, (0,))

    def test_fixed_rejects_angle(self):
        with pytest.raises(GateError):
            GateOp(GateKind.H, (0,), 0.5)

    def test_non_finite_angle(self):
        with pytest.raises(GateError):
            GateOp(GateKind.RZ, (0,), float("nan"))

    def test_arity(self):
        with pytest.raises(GateError):
            GateOp(GateKind.CNOT, (0,))
        with pytest.raises(GateError):
            GateOp(GateKind.RX, (0, 1), 0.1)

    def test_duplicate_qubits(self):
        with pytest.raises(GateError):
            GateOp(GateKind.CZ, (1, 1))

    def test_index_out_of_range(self):
        state = new_zero_state(2)
        with pytest.raises(GateError):
            apply_gate(state, GateOp(GateKind.X, (2,)))


class TestGateMatrices:
    """Every constructed local matrix is unitary."""

    @pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.value)
    def test_unitary_for_random_angles(self, kind, rng):
        for _ in range(20):
            angle = float(rng.uniform(-10, 10)) if kind in PARAMETRIZED else None
            m = gate_matrix(kind, angle)
            assert m.shape == ((4, 4) if kind in TWO_QUBIT else (2, 2))
            assert is_unitary(m)

    @pytest.mark.parametrize("kind", [GateKind.RY, GateKind.RZ, GateKind.RX, GateKind.ZZ])
    def test_zero_angle_is_identity(self, kind):
        m = gate_matrix(kind, 0.0)
        np.testing.assert_allclose(m, np.eye(m.shape[0]), atol=1e-14)

    def test_rz_is_symmetric_form(self):
        t = 0.7
        np.testing.assert_allclose(
            gate_matrix(GateKind.RZ, t), np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)]), atol=1e-15
        )

    def test_zz_diagonal(self):
        p = 0.4
        expected = np.diag([np.exp(-1j * p), np.exp(1j * p), np.exp(1j * p), np.exp(-1j * p)])
        np.testing.assert_allclose(gate_matrix(GateKind.ZZ, p), expected, atol=1e-15)


class TestZeroState:
    """new_zero_state and capacity limits."""

    def test_one_qubit(self):
        np.testing.assert_array_equal(new_zero_state(1).amplitudes, [1, 0])

    def test_three_qubits(self):
        expected = np.zeros(8)
        expected[0] = 1
        np.testing.assert_array_equal(new_zero_state(3).amplitudes, expected)

    def test_zero_qubits_rejected(self):
        with pytest.raises(CapacityError):
            new_zero_state(0)

    def test_above_ceiling_names_limit(self):
        with pytest.raises(CapacityError, match="PQC_MAX_QUBITS"):
            new_zero_state(64)

    def test_wrong_amplitude_length(self):
        with pytest.raises(CapacityError):
            StateVector(2, np.zeros(3))


class TestApplyGate:
    """Worked single-gate examples."""

    def test_ry_pi_flips(self):
        state = apply_gate(new_zero_state(1), GateOp(GateKind.RY, (0,), math.pi))
        np.testing.assert_allclose(state.amplitudes, [0, 1], atol=1e-15)

    def test_cnot_truth_table(self):
        amplitudes = np.zeros(4, dtype=complex)
        amplitudes[1] = 1.0  # |q1 q0> = |01>
        state = apply_gate(StateVector(2, amplitudes), GateOp(GateKind.CNOT, (0, 1)))
        expected = np.zeros(4)
        expected[3] = 1.0
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)

    def test_cnot_control_off_is_identity(self):
        amplitudes = np.zeros(4, dtype=complex)
        amplitudes[2] = 1.0  # only the target is set
        state = apply_gate(StateVector(2, amplitudes), GateOp(GateKind.CNOT, (0, 1)))
        assert state.amplitudes[2] == 1.0

    def test_in_place(self):
        state = new_zero_state(2)
        returned = apply_gate(state, GateOp(GateKind.H, (1,)))
        assert returned is state

    def test_batched_kernel_uses_row_angles(self):
        angles = np.array([0.0, math.pi / 2, math.pi])
        block = zero_block(3, 1)
        apply_kernel(block, 1, GateKind.RY, (0,), angles)
        np.testing.assert_allclose(expectation_z0_block(block), np.cos(angles), atol=1e-15)


class TestExpectation:
    """<Z_0> readout."""

    def test_zero_state(self):
        assert expectation_z0(new_zero_state(4)) == pytest.approx(1.0)

    def test_after_x(self):
        state = apply_gate(new_zero_state(3), GateOp(GateKind.X, (0,)))
        assert expectation_z0(state) == pytest.approx(-1.0)

    def test_after_h(self):
        state = apply_gate(new_zero_state(2), GateOp(GateKind.H, (0,)))
        assert abs(expectation_z0(state)) < 1e-12

    def test_other_qubits_do_not_matter(self):
        state = apply_gate(new_zero_state(3), GateOp(GateKind.X, (2,)))
        assert expectation_z0(state) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_gates_away_from_qubit_0_leave_readout_unchanged(self, n, rng):
        """Entangling and rotating qubits 1..n-1 of a product state never moves <Z_0>."""
        tilt = rng.uniform(0.2, 2.9)
        state = new_zero_state(n)
        apply_gate(state, GateOp(GateKind.RY, (0,), tilt))
        apply_gate(state, GateOp(GateKind.RZ, (0,), rng.uniform(-math.pi, math.pi)))
        for q in range(1, n):
            apply_gate(state, GateOp(GateKind.RX, (q,), rng.uniform(-math.pi, math.pi)))
        before = expectation_z0(state)
        assert before == pytest.approx(math.cos(tilt), abs=1e-12)

        two_qubit = [GateKind.CNOT, GateKind.CZ, GateKind.ZZ, GateKind.CRX, GateKind.CRZ]
        for _ in range(30):
            kind = two_qubit[rng.integers(len(two_qubit))] if rng.random() < 0.6 else GateKind.RY
            if kind is GateKind.RY:
                gate = GateOp(kind, (int(rng.integers(1, n)),), rng.uniform(-math.pi, math.pi))
            else:
                a, b = rng.choice(np.arange(1, n), size=2, replace=False)
                angle = rng.uniform(-math.pi, math.pi) if kind in PARAMETRIZED else None
                gate = GateOp(kind, (int(a), int(b)), angle)
            apply_gate(state, gate)
        assert expectation_z0(state) == pytest.approx(before, abs=1e-12)


class TestOracle:
    """Dense reference simulator."""

    def test_ry_pi(self):
        np.testing.assert_allclose(
            oracle_apply(1, [GateOp(GateKind.RY, (0,), math.pi)]).amplitudes, [0, 1], atol=1e-15
        )

    def test_bell_state(self):
        state = oracle_apply(2, [GateOp(GateKind.H, (0,)), GateOp(GateKind.CNOT, (0, 1))])
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(state.amplitudes, [s, 0, 0, s], atol=1e-15)

    def test_width_limit(self):
        with pytest.raises(CapacityError):
            oracle_apply(11, [])

    def test_full_register_matrices_unitary(self, rng):
        for _ in range(30):
            assert is_unitary(gate_unitary(4, random_gate(rng, 4)).matrix)

    def test_oracle_predict_matches_expectation(self, rng):
        gates = [random_gate(rng, 3) for _ in range(10)]
        assert oracle_predict(3, gates) == pytest.approx(expectation_z0(run_fast(3, gates)), abs=1e-12)


class TestFastPathMatchesOracle:
    """Kernels and dense matrices agree elementwise."""

    def test_four_qubits_twenty_gates(self, rng):
        gates = [random_gate(rng, 4) for _ in range(20)]
        np.testing.assert_allclose(run_fast(4, gates).amplitudes,
                                   oracle_apply(4, gates).amplitudes, atol=1e-10)

    def test_three_qubits_fifteen_gates(self, rng):
        gates = [random_gate(rng, 3) for _ in range(15)]
        np.testing.assert_allclose(oracle_apply(3, gates).amplitudes,
                                   run_fast(3, gates).amplitudes, atol=1e-10)

    @pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.value)
    def test_each_kind_on_every_qubit_pair(self, kind, rng):
        n = 3
        prep = [GateOp(GateKind.RY, (q,), float(rng.uniform(0, 3))) for q in range(n)]
        prep += [GateOp(GateKind.RX, (q,), float(rng.uniform(0, 3))) for q in range(n)]
        angle = 0.9 if kind in PARAMETRIZED else None
        if kind in TWO_QUBIT:
            placements = [(a, b) for a in range(n) for b in range(n) if a != b]
        else:
            placements = [(q,) for q in range(n)]
        for qubits in placements:
            gates = prep + [GateOp(kind, qubits, angle)]
            np.testing.assert_allclose(run_fast(n, gates).amplitudes,
                                       oracle_apply(n, gates).amplitudes, atol=1e-10)

    def test_randomized_programs_up_to_six_qubits(self, rng):
        for program in range(100):
            n = 1 + program % 6
            gates = [random_gate(rng, n) for _ in range(int(rng.integers(1, 25)))]
            np.testing.assert_allclose(run_fast(n, gates).amplitudes,
                                       oracle_apply(n, gates).amplitudes, atol=1e-10)


class TestNormPreservation:
    """Long random sequences stay normalized."""

    def test_norm_drift_ten_qubits(self, rng):
        state = new_zero_state(10)
        for _ in range(1000):
            apply_gate(state, random_gate(rng, 10))
        assert abs(state.norm() - 1.0) <= 1e-12
        assert -1.0 <= expectation_z0(state) <= 1.0
