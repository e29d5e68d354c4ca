"""SLOCC representatives of cyclic-symmetric states via diagonal operations.

Any state whose Majorana points are invariant under a z-axis rotation can
be rebalanced by the one-parameter diagonal operation diag(1, sqrt(y))
applied to every qubit.  The balancing parameter is the unique positive
root of sum_k (N - 2k) |d_k|^2 y^k; it exists exactly when both pole
multiplicities are below N/2 (one sign change, by Descartes' rule), and
the balanced state is 1-anticoherent by construction.  Two such states
are SLOCC equivalent iff the Majorana configurations of their balanced
representatives agree up to a rigid rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NoRepresentativeError, NumericalError
from .majorana import majorana_points
from .symstate import SymmetricState, ZERO_CUTOFF, new_state

__all__ = [
    "DegeneracyConfig",
    "apply_diagonal_ilo",
    "positive_root",
    "anticoherent_representative",
    "slocc_equivalent",
    "degeneracy_configuration",
]


def apply_diagonal_ilo(state: SymmetricState, y: float) -> SymmetricState:
    """Apply diag(1, sqrt(y)) to every qubit: d_k -> y^(k/2) d_k, renormalized."""
    if not y > 0:
        raise ValueError("ILO parameter y must be strictly positive")
    k = np.arange(state.n_qubits + 1)
    return new_state(state.dicke * np.power(float(y), k / 2.0))


def _balance_coefficients(state: SymmetricState) -> np.ndarray:
    n = state.n_qubits
    probs = np.abs(state.dicke) ** 2
    probs[probs < (ZERO_CUTOFF * np.abs(state.dicke).max()) ** 2] = 0.0
    return (n - 2 * np.arange(n + 1)) * probs


def positive_root(state: SymmetricState) -> float:
    """Unique positive root of the balancing polynomial.

    Coefficients (N - 2k)|d_k|^2 are positive below the band center and
    negative above it, so the sequence has exactly one sign change
    whenever the state populates both sides; uniqueness is certified by
    that integer count, not numerically.  A state supported only on
    k = N/2 is already balanced and maps to y = 1.
    """
    coeffs = _balance_coefficients(state)
    has_pos = bool(np.any(coeffs > 0))
    has_neg = bool(np.any(coeffs < 0))
    if not has_pos and not has_neg:
        return 1.0  # support entirely on the band center
    if not (has_pos and has_neg):
        raise NoRepresentativeError(
            "no sign change in the balancing polynomial: a pole carries "
            "multiplicity >= N/2, so the SLOCC class has no anticoherent state"
        )

    def f(y: float) -> float:
        return float(np.polyval(coeffs[::-1], y))

    lo, hi = 1.0, 1.0
    while f(lo) <= 0:
        lo /= 2
        if lo < 1e-200:
            raise NumericalError("bracketing failed from below")
    while f(hi) >= 0:
        hi *= 2
        if hi > 1e200:
            raise NumericalError("bracketing failed from above")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-8 * hi:
            break
    # Newton polish to relative precision ~1e-14 (guarded to stay in bracket)
    dcoeffs = (coeffs[1:] * np.arange(1, len(coeffs)))[::-1]
    y = 0.5 * (lo + hi)
    for _ in range(60):
        deriv = float(np.polyval(dcoeffs, y))
        if deriv == 0:
            break
        step = f(y) / deriv
        y_new = y - step
        if not lo * 0.5 <= y_new <= hi * 2:
            y_new = 0.5 * (lo + hi)
        if abs(y_new - y) <= 1e-15 * y:
            y = y_new
            break
        y = y_new
    return float(y)


def anticoherent_representative(state: SymmetricState) -> SymmetricState:
    """The SLOCC-equivalent balanced (1-anticoherent) state.

    The caller must supply the state in its cyclic canonical frame
    (symmetry axis along z); frame finding is a geometry problem this
    routine does not attempt.
    """
    return apply_diagonal_ilo(state, positive_root(state))


# ---------------------------------------------------------------------------
# degeneracy configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyConfig:
    """Sorted Majorana multiplicities m_1 >= m_2 >= ... with sum N."""

    multiplicities: tuple[int, ...]

    @property
    def diversity(self) -> int:
        return len(self.multiplicities)

    @property
    def n_points(self) -> int:
        return sum(self.multiplicities)

    def __str__(self) -> str:
        return "D_{" + ",".join(map(str, self.multiplicities)) + "}"


def _cluster_roots(roots: np.ndarray, tol: float) -> list[int]:
    """Greedy multiplicity clustering of near-coincident roots."""
    remaining = list(roots)
    sizes = []
    while remaining:
        z0 = remaining.pop(0)
        members = [z0]
        keep = []
        for z in remaining:
            scale = max(1.0, abs(z0), abs(z))
            if abs(z - z0) <= tol * scale:
                members.append(z)
            else:
                keep.append(z)
        remaining = keep
        sizes.append(len(members))
    return sizes


def degeneracy_configuration(
    state: SymmetricState, cluster_tol: float = 1e-6
) -> DegeneracyConfig:
    """Multiset of Majorana point multiplicities of the state."""
    config = majorana_points(state)
    sizes = _cluster_roots(config.roots, cluster_tol)
    if config.n_south:
        sizes.append(config.n_south)
    if config.n_north:
        sizes.append(config.n_north)
    return DegeneracyConfig(tuple(sorted(sizes, reverse=True)))


# ---------------------------------------------------------------------------
# SLOCC equivalence
# ---------------------------------------------------------------------------

def _assignment_match(va: np.ndarray, vb: np.ndarray, tol: float) -> bool:
    cost = np.linalg.norm(va[:, None, :] - vb[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return bool(np.max(cost[rows, cols]) < tol)


def _pairwise_distances(v: np.ndarray) -> np.ndarray:
    n = len(v)
    iu = np.triu_indices(n, k=1)
    return np.sort(np.linalg.norm(v[iu[0]] - v[iu[1]], axis=1))


def _rotation_from_anchors(a1, a2, b1, b2) -> np.ndarray:
    """Proper rotation mapping unit-vector pair (a1, a2) onto (b1, b2)."""

    def triad(u, v):
        e1 = u
        w = v - np.dot(v, e1) * e1
        e2 = w / np.linalg.norm(w)
        return np.column_stack([e1, e2, np.cross(e1, e2)])

    return triad(b1, b2) @ triad(a1, a2).T


def _sphere_multiplicities(state: SymmetricState, tol: float = 1e-3) -> tuple[int, ...]:
    """Majorana multiplicities clustered chordally on the sphere.

    A root of multiplicity m is recovered with error of order eps^(1/m), so
    this guard clusters far more loosely than :func:`degeneracy_configuration`
    (which follows the stereographic-plane contract) to stay reliable for
    rotated inputs.
    """
    vecs = majorana_points(state).unit_vectors()
    remaining = list(vecs)
    sizes = []
    while remaining:
        v0 = remaining.pop(0)
        keep = []
        count = 1
        for v in remaining:
            if np.linalg.norm(v - v0) <= tol:
                count += 1
            else:
                keep.append(v)
        remaining = keep
        sizes.append(count)
    return tuple(sorted(sizes, reverse=True))


def _require_representative_class(state: SymmetricState) -> None:
    """Raise unless the state's SLOCC class contains an anticoherent state.

    The class has one iff every Majorana multiplicity is below N/2, with
    the single exception of the two-antipodal-clusters family {N/2, N/2}.
    """
    n = state.n_qubits
    mults = _sphere_multiplicities(state)
    if mults[0] * 2 > n or (mults[0] * 2 == n and mults != (n // 2, n // 2)):
        raise NoRepresentativeError(
            "degeneracy D_{" + ",".join(map(str, mults)) + "} admits no anticoherent state"
        )


def _critical_balance(
    state: SymmetricState, tol: float = 1e-11, max_iter: int = 10000
) -> SymmetricState:
    """Frame-free balancing toward the 1-anticoherent point of the class.

    Damped descent on the (geodesically convex) norm functional of the
    per-qubit group action: each step applies exp(-eta (rho_1 - I/2)) to
    every qubit.  Far from the fixed point a step is accepted when the
    unnormalized norm decreases; close to it (where the norm change is
    quadratically small and drowns in rounding) acceptance switches to a
    strict decrease of the deviation itself.  In the cyclic canonical
    frame every step is diagonal and the fixed point coincides with
    :func:`anticoherent_representative`.
    """
    from .symstate import one_qubit_action_raw, reduced_density

    def expm_hermitian(h: np.ndarray) -> np.ndarray:
        evals, evecs = np.linalg.eigh(h)
        return evecs @ np.diag(np.exp(evals)) @ evecs.conj().T

    def deviation(s: SymmetricState) -> tuple[float, np.ndarray]:
        rho = reduced_density(s, 1).matrix
        grad = rho - np.eye(2) / 2
        return float(np.max(np.abs(grad))), grad

    current = state
    dev, grad = deviation(current)
    eta = 1.0
    for _ in range(max_iter):
        if dev < tol:
            return current
        accepted = False
        while eta > 1e-10:
            raw = one_qubit_action_raw(current, expm_hermitian(-eta * grad))
            norm = np.linalg.norm(raw)
            candidate = SymmetricState(raw)
            cand_dev, cand_grad = deviation(candidate)
            if norm < 1.0 - 1e-13 or cand_dev < dev:
                current, dev, grad = candidate, cand_dev, cand_grad
                eta = min(eta * 1.5, 4.0)
                accepted = True
                break
            eta /= 2
        if not accepted:
            if dev < 1e-9:
                return current  # at the numerical floor of the iteration
            raise NumericalError("critical balancing stalled")
    raise NumericalError("critical balancing did not converge")


def slocc_equivalent(a: SymmetricState, b: SymmetricState, tol: float = 1e-8) -> bool:
    """Decide SLOCC equivalence of two cyclic-symmetric states.

    Both states are mapped to their balanced representatives (raising
    NoRepresentativeError when a class has none); the representatives'
    point configurations are then compared up to rigid rotation with an
    exhaustive anchor-pair search, preceded by a pairwise-distance
    multiset reject.  Balancing runs through the frame-free iteration so
    the decision is insensitive to the orientation of the inputs.

    Point congruence is decided at a geometric floor of ~2e-4 chordal
    distance regardless of ``tol``: an m-fold Majorana point is only
    recoverable to about eps^(1/m), which dominates every sharper request.
    """
    if a.n_qubits != b.n_qubits:
        return False
    _require_representative_class(a)
    _require_representative_class(b)
    va = majorana_points(_critical_balance(a)).unit_vectors()
    vb = majorana_points(_critical_balance(b)).unit_vectors()
    n = len(va)
    if n == 1:
        return True
    geom_tol = max(tol, 2e-4)
    da, db = _pairwise_distances(va), _pairwise_distances(vb)
    if np.max(np.abs(da - db)) > geom_tol:
        return False

    # anchor pair in a: first pair that safely spans a plane
    anchor = None
    for i in range(n):
        for j in range(n):
            if i != j and np.linalg.norm(np.cross(va[i], va[j])) > 1e-2:
                anchor = (i, j)
                break
        if anchor:
            break
    if anchor is None:
        # collinear configuration: align the common axis both ways
        for sign in (1.0, -1.0):
            rot = _axis_alignment(va[0], sign * vb[0])
            if _assignment_match(va @ rot.T, vb, geom_tol):
                return True
        return False

    i, j = anchor
    dij = np.linalg.norm(va[i] - va[j])
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if abs(np.linalg.norm(vb[p] - vb[q]) - dij) > geom_tol:
                continue
            if np.linalg.norm(np.cross(vb[p], vb[q])) < 1e-2:
                continue
            rot = _rotation_from_anchors(va[i], va[j], vb[p], vb[q])
            if _assignment_match(va @ rot.T, vb, geom_tol):
                return True
    return False


def _axis_alignment(axis_a: np.ndarray, axis_b: np.ndarray) -> np.ndarray:
    """Proper rotation taking the unit vector axis_a onto axis_b."""
    v = np.cross(axis_a, axis_b)
    c = float(np.dot(axis_a, axis_b))
    if np.linalg.norm(v) < 1e-12:
        if c > 0:
            return np.eye(3)
        # antipodal: rotate by pi about any perpendicular direction
        probe = np.array([1.0, 0.0, 0.0])
        if abs(np.dot(probe, axis_a)) > 0.9:
            probe = np.array([0.0, 1.0, 0.0])
        e = np.cross(axis_a, probe)
        e /= np.linalg.norm(e)
        return 2 * np.outer(e, e) - np.eye(3)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx * (1 / (1 + c))
