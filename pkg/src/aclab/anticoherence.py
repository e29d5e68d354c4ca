"""Deciding t-anticoherence of a symmetric state, four independent ways.

A state is anticoherent to order t when every spin moment up to order t is
direction independent; equivalently its t-qubit reduction is maximally
mixed.  Four characterizations are implemented:

* ``check_operator``  -- ladder/z operator expectations against their
  isotropic targets,
* ``check_dicke``     -- the same conditions written directly as sums over
  Dicke coefficients ((t+1)^2 - 1 real equations),
* ``check_reduced``   -- entry-wise comparison of the t-qubit reduction
  with identity/(t+1),
* ``check_multipole`` -- vanishing of the state-multipole coefficients
  c_{lm} for 0 < l <= t.

All checks use absolute deviations normalized by the natural magnitude
scale of each condition (the basis-averaged |z|^q moment, and the peak
ladder element for off-diagonal rows) so that one tolerance is meaningful
across qubit numbers and orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NumericalError
from .symstate import (
    SymmetricState,
    abs_isotropic_moment,
    isotropic_moment,
    ladder_element,
    ladder_z_expectation,
    reduced_density,
)

__all__ = [
    "AnticoherenceReport",
    "MultipoleTable",
    "check_operator",
    "check_dicke",
    "check_reduced",
    "check_multipole",
    "order_of_anticoherence",
    "multipole_coeffs",
    "anticoherence_report",
    "clebsch_gordan",
]

CHARACTERIZATIONS = ("operator", "dicke", "reduced", "multipole")


# ---------------------------------------------------------------------------
# operator / Dicke-coefficient routes
# ---------------------------------------------------------------------------

def _diagonal_scale(n: int, q: int) -> float:
    return max(1.0, float(abs_isotropic_moment(n, q)))


def _offdiag_scale(n: int, r: int, q: int) -> float:
    kmax = (n - r) // 2  # ladder element peaks at the band center
    b_peak = ladder_element(n, kmax, r)
    return max(1.0, b_peak * float(abs_isotropic_moment(n, q)))


def check_operator(state: SymmetricState, t: int, tol: float = 1e-10) -> bool:
    """Operator-expectation characterization of t-anticoherence."""
    n = state.n_qubits
    if not 1 <= t <= n:
        raise IndexError(f"t={t} outside 1..{n}")
    for r in range(t + 1):
        for q in range(t - r + 1):
            val = ladder_z_expectation(state, r, q)
            if r == 0:
                dev = abs(val - float(isotropic_moment(n, q))) / _diagonal_scale(n, q)
            else:
                dev = abs(val) / _offdiag_scale(n, r, q)
            if dev >= tol:
                return False
    return True


def check_dicke(state: SymmetricState, t: int, tol: float = 1e-10) -> bool:
    """Dicke-coefficient characterization: (t+1)^2 - 1 real conditions.

    Diagonal rows compare sum_k (N/2-k)^q |d_k|^2 with the isotropic
    moment for q = 0..t; off-diagonal rows require the r-step coefficient
    correlators to vanish for r = 1..t, q = 0..t-r.
    """
    n = state.n_qubits
    if not 1 <= t <= n:
        raise IndexError(f"t={t} outside 1..{n}")
    d = state.dicke
    u = 0.5 * n - np.arange(n + 1)
    probs = np.abs(d) ** 2
    for q in range(t + 1):
        lhs = float(np.sum(u**q * probs))
        dev = abs(lhs - float(isotropic_moment(n, q))) / _diagonal_scale(n, q)
        if dev >= tol:
            return False
    for r in range(1, t + 1):
        if r > n:
            continue
        b = np.array([ladder_element(n, k, r) for k in range(n - r + 1)])
        corr = np.conj(d[: n - r + 1]) * d[r:]
        for q in range(t - r + 1):
            lhs = np.sum(b * u[: n - r + 1] ** q * corr)
            if abs(lhs) / _offdiag_scale(n, r, q) >= tol:
                return False
    return True


def check_reduced(state: SymmetricState, t: int, tol: float = 1e-10) -> bool:
    """Reduced-density characterization: rho_t equals identity/(t+1)."""
    n = state.n_qubits
    if not 1 <= t <= n:
        raise IndexError(f"t={t} outside 1..{n}")
    return reduced_density(state, t).deviation_from_maximally_mixed() < tol


# ---------------------------------------------------------------------------
# multipole route
# ---------------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def _cg_doubled(dj1: int, dm1: int, dj2: int, dm2: int, dj: int, dm: int) -> float:
    """Clebsch-Gordan coefficient <j1 m1, j2 m2 | j m>, arguments doubled.

    Evaluated from the Racah single-sum formula with exact big-integer
    factorials; the square root is taken only at the final float
    conversion.
    """
    if dm1 + dm2 != dm:
        return 0.0
    if not (abs(dj1 - dj2) <= dj <= dj1 + dj2):
        return 0.0
    if abs(dm1) > dj1 or abs(dm2) > dj2 or abs(dm) > dj:
        return 0.0
    if (dj1 + dm1) % 2 or (dj2 + dm2) % 2 or (dj + dm) % 2:
        return 0.0

    def fac(doubled: int) -> int:
        if doubled % 2:
            raise ValueError("non-integer factorial argument")
        return math.factorial(doubled // 2)

    pref = Fraction(dj + 1)  # 2j+1
    pref *= Fraction(
        fac(dj1 + dj2 - dj) * fac(dj1 - dj2 + dj) * fac(-dj1 + dj2 + dj),
        fac(dj1 + dj2 + dj + 2),
    )
    pref *= Fraction(
        fac(dj + dm)
        * fac(dj - dm)
        * fac(dj1 + dm1)
        * fac(dj1 - dm1)
        * fac(dj2 + dm2)
        * fac(dj2 - dm2)
    )

    zmin = max(0, (dj2 - dj - dm1) // 2, (dj1 - dj + dm2) // 2)
    zmax = min(
        (dj1 + dj2 - dj) // 2,
        (dj1 - dm1) // 2,
        (dj2 + dm2) // 2,
    )
    total = Fraction(0)
    for z in range(zmin, zmax + 1):
        denom = (
            math.factorial(z)
            * fac(dj1 + dj2 - dj - 2 * z)
            * fac(dj1 - dm1 - 2 * z)
            * fac(dj2 + dm2 - 2 * z)
            * fac(dj - dj2 + dm1 + 2 * z)
            * fac(dj - dj1 - dm2 + 2 * z)
        )
        total += Fraction((-1) ** z, denom)
    if total == 0:
        return 0.0
    return math.copysign(math.sqrt(float(pref * total * total)), total)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """Clebsch-Gordan coefficient for integer or half-integer arguments."""
    args = []
    for x in (j1, m1, j2, m2, j, m):
        doubled = Fraction(x) * 2
        if doubled.denominator != 1:
            raise ValueError("angular momenta must be integers or half-integers")
        args.append(int(doubled))
    return _cg_doubled(*args)


@dataclass(frozen=True)
class MultipoleTable:
    """State-multipole coefficients c_{lm} up to lmax (orthonormal tensors)."""

    lmax: int
    coeffs: dict = field(default_factory=dict)

    def __getitem__(self, lm) -> complex:
        return self.coeffs[lm]

    def max_abs(self, ell: int) -> float:
        return max(abs(self.coeffs[ell, m]) for m in range(-ell, ell + 1))


def multipole_coeffs(state: SymmetricState, lmax: int) -> MultipoleTable:
    """Expansion coefficients of the density matrix on orthonormal
    irreducible tensor operators, c_{lm} = tr(rho T_{lm}^dagger).

    The tensors are normalized so that tr(T_{lm} T_{l'm'}^dagger) is the
    identity pairing, which makes c_00 = 1/sqrt(N+1) and the vanishing
    statements convention independent.
    """
    n = state.n_qubits
    if not 0 <= lmax <= n:
        raise IndexError(f"lmax={lmax} outside 0..{n}")
    d = state.dicke
    dj = n  # doubled j
    coeffs: dict = {}
    for ell in range(lmax + 1):
        norm = math.sqrt((2 * ell + 1) / (n + 1))
        for m in range(-ell, ell + 1):
            total = 0.0 + 0.0j
            for k in range(n + 1):
                kp = k - m
                if not 0 <= kp <= n:
                    continue
                # <j, j-k+m; bra| from T, paired with ket amplitudes
                cgval = _cg_doubled(dj, dj - 2 * k, 2 * ell, 2 * m, dj, dj - 2 * kp)
                if cgval:
                    total += cgval * d[kp] * np.conj(d[k])
            coeffs[ell, m] = complex(norm * total)
    return MultipoleTable(lmax=lmax, coeffs=coeffs)


def check_multipole(state: SymmetricState, t: int, tol: float = 1e-10) -> bool:
    """Multipole characterization: c_{lm} vanishes for all 0 < l <= t."""
    n = state.n_qubits
    if not 1 <= t <= n:
        raise IndexError(f"t={t} outside 1..{n}")
    table = multipole_coeffs(state, t)
    return all(table.max_abs(ell) < tol for ell in range(1, t + 1))


# ---------------------------------------------------------------------------
# order of anticoherence
# ---------------------------------------------------------------------------

_CHECKS = {
    "operator": check_operator,
    "dicke": check_dicke,
    "reduced": check_reduced,
    "multipole": check_multipole,
}


def _order_by(method: str, state: SymmetricState, tol: float) -> int:
    check = _CHECKS[method]
    order = 0
    for t in range(1, state.n_qubits):  # order < N always (rho_N stays pure)
        if not check(state, t, tol):
            break
        order = t
    return order


def order_of_anticoherence(state: SymmetricState, tol: float = 1e-10) -> int:
    """Largest t such that the state is t-anticoherent (0 if not even 1).

    Determined from the reduced-density route and cross-validated against
    the operator and Dicke-coefficient routes; any disagreement is treated
    as a numerical diagnostic failure rather than silently resolved.
    """
    order = _order_by("reduced", state, tol)
    for method in ("operator", "dicke"):
        alt = _order_by(method, state, tol)
        if alt != order:
            raise NumericalError(
                f"characterizations disagree: reduced={order}, {method}={alt}"
            )
    return order


@dataclass(frozen=True)
class AnticoherenceReport:
    """Certified order together with per-characterization diagnostics."""

    order: int
    per_characterization: dict
    residuals: dict

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "per_characterization": dict(self.per_characterization),
            "residuals": dict(self.residuals),
        }


def _residual_at(method: str, state: SymmetricState, t: int) -> float:
    """Worst normalized violation of the order-t conditions for one method."""
    n = state.n_qubits
    if t > n:
        return float("nan")
    worst = 0.0
    if method == "reduced":
        return reduced_density(state, t).deviation_from_maximally_mixed()
    if method == "multipole":
        table = multipole_coeffs(state, t)
        return max(table.max_abs(ell) for ell in range(1, t + 1))
    # operator and dicke share the same condition set
    for r in range(t + 1):
        for q in range(t - r + 1):
            val = ladder_z_expectation(state, r, q)
            if r == 0:
                dev = abs(val - float(isotropic_moment(n, q))) / _diagonal_scale(n, q)
            else:
                dev = abs(val) / _offdiag_scale(n, r, q)
            worst = max(worst, dev)
    return worst


def anticoherence_report(state: SymmetricState, tol: float = 1e-10) -> AnticoherenceReport:
    """Run all four characterizations and assemble the consistency report."""
    orders = {m: _order_by(m, state, tol) for m in CHARACTERIZATIONS}
    values = set(orders.values())
    if len(values) != 1:
        raise NumericalError(f"characterizations disagree: {orders}")
    order = orders["reduced"]
    residuals = {m: _residual_at(m, state, order + 1) for m in CHARACTERIZATIONS}
    return AnticoherenceReport(order=order, per_characterization=orders, residuals=residuals)
