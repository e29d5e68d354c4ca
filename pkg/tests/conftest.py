"""Shared fixtures and independent oracles for the test suite.

The brute-force reduced-density oracle expands a symmetric state into the
full 2^N product basis, performs the partial trace by reshaping, and
projects the result back onto the symmetric subspace of the kept qubits.
It shares no code with the closed-form implementation it certifies.
"""

import json
import math
from importlib import resources

import numpy as np
import pytest

from aclab.symstate import SymmetricState, new_state


def dicke_full_vector(n_qubits: int, k: int) -> np.ndarray:
    """Dicke state as a dense 2^N vector (computational basis)."""
    vec = np.zeros(2**n_qubits)
    for b in range(2**n_qubits):
        if bin(b).count("1") == k:
            vec[b] = 1.0
    return vec / np.linalg.norm(vec)


def symmetric_projector_rows(n_qubits: int) -> np.ndarray:
    """Rows = Dicke basis vectors of the n-qubit symmetric subspace."""
    return np.array([dicke_full_vector(n_qubits, k) for k in range(n_qubits + 1)])


def brute_force_reduced(state: SymmetricState, t: int) -> np.ndarray:
    """Partial-trace oracle: full expansion, reshape, project."""
    n = state.n_qubits
    rows = symmetric_projector_rows(n)
    full = state.dicke @ rows.astype(complex)
    psi = full.reshape(2**t, 2 ** (n - t))
    rho_full = psi @ psi.conj().T
    proj = symmetric_projector_rows(t).astype(complex)
    return proj @ rho_full @ proj.conj().T


def random_state(rng: np.random.Generator, n_qubits: int) -> SymmetricState:
    vec = rng.normal(size=n_qubits + 1) + 1j * rng.normal(size=n_qubits + 1)
    return new_state(vec)


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random SU(2) from a normalized complex 2-vector."""
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a, b = a / norm, b / norm
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def load_corpus_state(name: str) -> SymmetricState:
    path = resources.files("aclab") / "states" / f"{name}.json"
    data = json.loads(path.read_text())
    if "exact" in data:
        amps = []
        for e in data["exact"]:
            mag = (
                math.copysign(math.sqrt(abs(e["num"]) / e["den"]), e["num"])
                if e.get("sqrt")
                else e["num"] / e["den"]
            )
            phase = np.exp(1j * math.pi * e.get("phase_num", 0) / e.get("phase_den", 1))
            amps.append(mag * phase)
        return new_state(amps)
    return new_state([complex(re, im) for re, im in data["dicke"]])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def bell() -> SymmetricState:
    return new_state([1, 0, 1])


@pytest.fixture
def ghz() -> SymmetricState:
    return new_state([1, 0, 0, 1])


@pytest.fixture
def tetrahedron() -> SymmetricState:
    return new_state([1, 0, 0, math.sqrt(2), 0])


@pytest.fixture
def octahedron() -> SymmetricState:
    return new_state([0, 1, 0, 0, 0, 1, 0])


@pytest.fixture
def icosahedron() -> SymmetricState:
    return load_corpus_state("icosahedron")
