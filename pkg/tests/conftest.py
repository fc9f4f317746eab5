"""Shared fixtures and the acceptance-summary hook."""

import sys

import numpy as np
import pytest

import zeno_bench as zb

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@pytest.fixture
def bitflip_code():
    return zb.build_code(
        [zb.pauli_from_string("ZZI"), zb.pauli_from_string("IZZ")]
    )


@pytest.fixture
def five_qubit_code():
    return zb.build_code(
        [
            zb.pauli_from_string(s)
            for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
        ]
    )


@pytest.fixture
def two_qubit_code():
    return zb.build_code(
        [zb.pauli_from_string("XX"), zb.pauli_from_string("ZZ")]
    )


@pytest.fixture
def bitflip_hamiltonian():
    """Detectable coupling 0.1 XII (x) sigma_x plus drift 0.05 I (x) sigma_z."""
    return zb.HamiltonianSpec(
        3,
        2,
        [
            (zb.pauli_from_string("XII"), 0.1 * SIGMA_X),
            (zb.pauli_from_string("III"), 0.05 * SIGMA_Z),
        ],
    )


@pytest.fixture
def bitflip_initial_state(bitflip_code):
    return zb.initial_joint_state(bitflip_code, [1.0, 0.0], bath_dim=2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in sorted(results):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number:02d} {status}: {description}")
