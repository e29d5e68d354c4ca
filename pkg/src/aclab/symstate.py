"""Dicke-basis representation of permutation-symmetric multiqubit states.

A pure symmetric state of N qubits is stored through its N+1 complex
amplitudes on the Dicke basis, indexed by the excitation number k.  The
equivalent spin-j picture (j = N/2, m = N/2 - k) is never materialised;
every collective-spin quantity is expressed directly in k.

The module provides collective ladder/z matrix elements, the
basis-averaged z moments used as anticoherence targets, symmetric-subspace
reduced density matrices with their entanglement entropy, and the action
of a single-qubit operator applied identically to all qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ZeroStateError

__all__ = [
    "SymmetricState",
    "DensityMatrix",
    "new_state",
    "dicke_basis_state",
    "isotropic_moment",
    "abs_isotropic_moment",
    "ladder_element",
    "ladder_z_expectation",
    "reduced_density",
    "entanglement_entropy",
    "one_qubit_action_raw",
    "apply_one_qubit_operator",
    "rotate",
    "rotation_matrix_2x2",
]

# relative amplitude below which a Dicke coefficient counts as exactly zero
ZERO_CUTOFF = 1e-13

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricState:
    """Normalized symmetric N-qubit pure state in the Dicke basis.

    ``dicke[k]`` is the amplitude of the Dicke state with k excitations.
    The constructor rescales the input to unit norm (relative phases are
    preserved) and freezes the underlying array.
    """

    dicke: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.dicke, dtype=complex).reshape(-1)
        if vec.size == 0:
            raise ZeroStateError("state vector must have at least one amplitude")
        norm = np.linalg.norm(vec)
        if not norm > 0.0:
            raise ZeroStateError("all-zero state vector")
        vec = vec / norm
        vec.setflags(write=False)
        object.__setattr__(self, "dicke", vec)

    @property
    def n_qubits(self) -> int:
        return len(self.dicke) - 1

    def overlap(self, other: "SymmetricState") -> complex:
        """Inner product <self|other>."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit numbers differ")
        return complex(np.vdot(self.dicke, other.dicke))

    def support(self, cutoff: float = ZERO_CUTOFF) -> np.ndarray:
        """Indices k with |d_k| above ``cutoff`` relative to the peak."""
        mags = np.abs(self.dicke)
        return np.flatnonzero(mags > cutoff * mags.max())

    def pole_zero_counts(self, cutoff: float = ZERO_CUTOFF) -> tuple[int, int]:
        """(n_S, n_N): counts of leading / trailing zero Dicke coefficients."""
        supp = self.support(cutoff)
        return int(supp[0]), int(self.n_qubits - supp[-1])

    def fix_global_phase(self) -> "SymmetricState":
        """Rotate the global phase so the first nonzero amplitude is real positive."""
        k0 = int(self.support()[0])
        phase = self.dicke[k0] / abs(self.dicke[k0])
        return SymmetricState(self.dicke / phase)

    def allclose_up_to_phase(self, other: "SymmetricState", tol: float = 1e-10) -> bool:
        if self.n_qubits != other.n_qubits:
            return False
        ov = self.overlap(other)
        if abs(ov) < 1e-15:
            return False
        phase = ov / abs(ov)
        return bool(np.max(np.abs(self.dicke * phase - other.dicke)) < tol)

    def __repr__(self) -> str:
        return f"SymmetricState(n_qubits={self.n_qubits}, dicke={np.array2string(self.dicke, precision=6)})"


def new_state(dicke) -> SymmetricState:
    """Build a normalized symmetric state from arbitrary Dicke amplitudes."""
    return SymmetricState(np.asarray(dicke, dtype=complex))


def dicke_basis_state(n_qubits: int, k: int) -> SymmetricState:
    """The Dicke basis state with k excitations out of ``n_qubits``."""
    if not 0 <= k <= n_qubits:
        raise IndexError(f"k={k} outside 0..{n_qubits}")
    vec = np.zeros(n_qubits + 1, dtype=complex)
    vec[k] = 1.0
    return SymmetricState(vec)


def isotropic_moment(n_qubits: int, q: int) -> Fraction:
    """Basis-averaged q-th moment of the collective z spin, exactly.

    Returns (1/(N+1)) * sum_k (N/2 - k)^q as a rational number.  This is
    the direction-independent target value that every q-th spin moment of
    an anticoherent state of sufficient order must attain.  Vanishes for
    odd q.
    """
    if n_qubits < 0 or q < 0:
        raise ValueError("n_qubits and q must be nonnegative")
    total = sum((Fraction(n_qubits, 2) - k) ** q for k in range(n_qubits + 1))
    return total / (n_qubits + 1)


def abs_isotropic_moment(n_qubits: int, q: int) -> Fraction:
    """Like :func:`isotropic_moment` but with |N/2 - k|^q terms.

    Equal to the signed moment for even q; for odd q it provides the natural
    magnitude scale against which a vanishing moment is compared.
    """
    total = sum(abs(Fraction(n_qubits, 2) - k) ** q for k in range(n_qubits + 1))
    return total / (n_qubits + 1)


def ladder_element(n_qubits: int, k: int, r: int) -> float:
    """Magnitude of the r-step collective ladder matrix element.

    |<D_N^(k+r)| (ladder)^r |D_N^(k)>| = prod_{j=0}^{r-1} sqrt((k+j+1)(N-k-j)).
    Only the magnitude is fixed here; the phase convention cancels from
    every anticoherence condition (they all test equality with zero).
    """
    if r < 0 or k < 0 or k + r > n_qubits:
        raise IndexError(f"ladder step k={k}, r={r} exceeds N={n_qubits}")
    prod = 1
    for j in range(r):
        prod *= (k + j + 1) * (n_qubits - k - j)
    try:
        return math.sqrt(prod)
    except OverflowError:
        return math.exp(0.5 * math.log(prod))


def ladder_z_expectation(state: SymmetricState, r: int, q: int) -> complex:
    """Expectation of (raising)^r (z)^q collective spin operators.

    Computed as sum_k B(k,r) (N/2-k)^q conj(d_k) d_{k+r} with B the ladder
    magnitude of :func:`ladder_element`.  Real for r = 0.
    """
    n = state.n_qubits
    if r < 0 or q < 0:
        raise ValueError("r and q must be nonnegative")
    if r > n:
        return 0.0 + 0.0j
    d = state.dicke
    total = 0.0 + 0.0j
    for k in range(n - r + 1):
        b = ladder_element(n, k, r)
        u = 0.5 * n - k
        total += b * u**q * np.conj(d[k]) * d[k + r]
    return complex(total)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian density matrix on a symmetric t-qubit subspace (Dicke basis)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def entropy(self) -> float:
        """Von Neumann entropy, natural log; eigenvalues below 1e-14 contribute zero."""
        evals = self.eigenvalues()
        evals = evals[evals > 1e-14]
        return float(-np.sum(evals * np.log(evals)))

    def deviation_from_maximally_mixed(self) -> float:
        """Largest entry-wise deviation from identity/dim."""
        target = np.eye(self.dim) / self.dim
        return float(np.max(np.abs(self.matrix - target)))


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def reduced_density(state: SymmetricState, t: int) -> DensityMatrix:
    """Reduced density matrix on t qubits, in the t-qubit Dicke basis.

    Direct double sum over the shared environment excitation number; the
    binomial weights are evaluated in log space so the formula stays valid
    for thousands of qubits.  Certified against a brute-force partial-trace
    oracle in the test suite.
    """
    n = state.n_qubits
    if not 1 <= t <= n:
        raise IndexError(f"t={t} outside 1..{n}")
    d = state.dicke
    ne = n - t
    # weight(a, m) = sqrt(C_t^a) * C_ne^m / sqrt(C_n^(a+m)), assembled pairwise below
    half_log_t = np.array([0.5 * _log_binom(t, a) for a in range(t + 1)])
    log_env = np.array([_log_binom(ne, m) for m in range(ne + 1)])
    half_log_n = np.array([0.5 * _log_binom(n, k) for k in range(n + 1)])

    rho = np.zeros((t + 1, t + 1), dtype=complex)
    for a in range(t + 1):
        for b in range(a, t + 1):
            m = np.arange(ne + 1)
            logw = (
                half_log_t[a]
                + half_log_t[b]
                + log_env
                - half_log_n[a + m]
                - half_log_n[b + m]
            )
            val = np.sum(np.exp(logw) * d[a + m] * np.conj(d[b + m]))
            rho[a, b] = val
            rho[b, a] = np.conj(val)
    return DensityMatrix(rho)


def entanglement_entropy(state: SymmetricState, t: int) -> float:
    """Entanglement entropy of the (t, N-t) bipartition, natural log."""
    return reduced_density(state, t).entropy()


def one_qubit_action_raw(state: SymmetricState, op: np.ndarray) -> np.ndarray:
    """Unnormalized Dicke amplitudes after applying ``op`` to every qubit.

    Works through the degree-N polynomial attached to the state: with
    e_k = sqrt(C_N^k) d_k the homogeneous polynomial sum_k e_k x^(N-k) y^k
    transforms by the substitution (x, y) -> (a x + c y, b x + d y) for
    op = [[a, b], [c, d]].
    """
    a, b = complex(op[0][0]), complex(op[0][1])
    c, dd = complex(op[1][0]), complex(op[1][1])
    n = state.n_qubits
    half_log = np.array([0.5 * _log_binom(n, k) for k in range(n + 1)])
    e = state.dicke * np.exp(half_log)
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        if e[k] == 0:
            continue
        # (a x + c y)^(n-k) and (b x + d y)^k, coefficients indexed by the power of y
        p1 = np.array(
            [math.comb(n - k, j) * a ** (n - k - j) * c**j for j in range(n - k + 1)]
        )
        p2 = np.array([math.comb(k, j) * b ** (k - j) * dd**j for j in range(k + 1)])
        out += e[k] * np.convolve(p1, p2)
    out *= np.exp(-half_log)
    return out


def apply_one_qubit_operator(state: SymmetricState, op: np.ndarray) -> SymmetricState:
    """Apply the same invertible 2x2 operator to every qubit and renormalize."""
    return SymmetricState(one_qubit_action_raw(state, op))


def rotation_matrix_2x2(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """SU(2) rotation in z-y-z Euler angles."""
    rz1 = np.diag([np.exp(-0.5j * alpha), np.exp(0.5j * alpha)])
    ry = np.array(
        [
            [np.cos(beta / 2), -np.sin(beta / 2)],
            [np.sin(beta / 2), np.cos(beta / 2)],
        ]
    )
    rz2 = np.diag([np.exp(-0.5j * gamma), np.exp(0.5j * gamma)])
    return rz1 @ ry @ rz2


def rotate(state: SymmetricState, alpha: float, beta: float, gamma: float) -> SymmetricState:
    """Rigid rotation of the state (identical SU(2) on every qubit)."""
    return apply_one_qubit_operator(state, rotation_matrix_2x2(alpha, beta, gamma))
