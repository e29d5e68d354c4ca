"""Coherent-state overlaps, the Husimi function, and its sphere multipoles.

The overlap with the coherent state along (theta, phi) uses the convention

    <n|psi> = sum_k sqrt(C_N^k) cos^(N-k)(theta/2) sin^k(theta/2) e^(-i k phi) d_k,

whose phase sign is fixed so that the Husimi function vanishes exactly at
the antipode of every Majorana point (verified as a property test, not
assumed).  Multipole moments of the Husimi function are obtained by
Gauss-Legendre x uniform-azimuth quadrature, which is exact up to rounding
because the Husimi function of an N-qubit state is band-limited to degree
2N on the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sph_harm_y

from .symstate import SymmetricState, _log_binom

__all__ = [
    "Direction",
    "HusimiGrid",
    "HusimiMultipoles",
    "coherent_overlap",
    "husimi",
    "husimi_grid",
    "husimi_multipoles",
]


@dataclass(frozen=True)
class Direction:
    """Point on the unit sphere; theta in [0, pi] from the North pole."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def antipode(self) -> "Direction":
        return Direction(math.pi - self.theta, self.phi + math.pi)


def _overlap_matrix(state: SymmetricState, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """<n|psi> on the outer grid thetas x phis."""
    n = state.n_qubits
    k = np.arange(n + 1)
    half_log = np.array([0.5 * _log_binom(n, kk) for kk in k])
    c = np.cos(thetas[:, None] / 2) ** (n - k[None, :])
    s = np.sin(thetas[:, None] / 2) ** k[None, :]
    amp = c * s * np.exp(half_log)[None, :] * state.dicke[None, :]
    phase = np.exp(-1j * np.outer(k, phis))
    return amp @ phase


def coherent_overlap(state: SymmetricState, direction: Direction) -> complex:
    """Overlap of the state with the coherent state along ``direction``."""
    mat = _overlap_matrix(state, np.array([direction.theta]), np.array([direction.phi]))
    return complex(mat[0, 0])


def husimi(state: SymmetricState, direction: Direction) -> float:
    """Probability of finding the state in the coherent state along ``direction``."""
    return float(abs(coherent_overlap(state, direction)) ** 2)


@dataclass(frozen=True)
class HusimiGrid:
    """Husimi values on Gauss-Legendre (cos theta) x uniform (phi) nodes.

    ``values[i, j]`` corresponds to ``thetas[i]``, ``phis[j]``; rows are
    ordered by increasing theta.
    """

    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray
    theta_weights: np.ndarray

    def integral(self) -> float:
        """Integral of the Husimi function over the sphere."""
        dphi = 2 * math.pi / len(self.phis)
        return float(np.sum(self.theta_weights[:, None] * self.values) * dphi)


def _gl_theta_nodes(n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n_theta)
    thetas = np.arccos(x)[::-1]  # increasing theta
    return thetas, w[::-1].copy()


def husimi_grid(state: SymmetricState, n_theta: int, n_phi: int) -> HusimiGrid:
    """Evaluate the Husimi function on a quadrature-ready grid."""
    if n_theta < 1 or n_phi < 1:
        raise ValueError("grid sizes must be positive")
    thetas, w = _gl_theta_nodes(n_theta)
    phis = 2 * math.pi * np.arange(n_phi) / n_phi
    values = np.abs(_overlap_matrix(state, thetas, phis)) ** 2
    return HusimiGrid(thetas=thetas, phis=phis, values=values, theta_weights=w)


@dataclass(frozen=True)
class HusimiMultipoles:
    """Spherical-harmonic moments Q_{lm} of the Husimi function."""

    lmax: int
    moments: dict

    def __getitem__(self, lm) -> complex:
        return self.moments[lm]

    def max_abs(self, ell: int) -> float:
        return max(abs(self.moments[ell, m]) for m in range(-ell, ell + 1))


def husimi_multipoles(state: SymmetricState, lmax: int) -> HusimiMultipoles:
    """Moments Q_{lm} = integral of Q * conj(Y_lm) over the sphere.

    Uses N+1 Gauss-Legendre nodes in cos(theta) and 2N+2 uniform nodes in
    phi, which integrates the degree-2N integrand exactly up to roundoff.
    """
    n = state.n_qubits
    if lmax > n:
        raise IndexError(f"lmax={lmax} exceeds the band limit N={n}")
    n_theta = n + 1
    n_phi = max(2 * n + 2, 2 * lmax + 2)
    grid = husimi_grid(state, n_theta, n_phi)
    dphi = 2 * math.pi / n_phi
    weighted = grid.values * grid.theta_weights[:, None] * dphi
    th = grid.thetas[:, None] * np.ones_like(grid.phis)[None, :]
    ph = np.ones_like(grid.thetas)[:, None] * grid.phis[None, :]
    moments: dict = {}
    for ell in range(lmax + 1):
        for m in range(-ell, ell + 1):
            y = sph_harm_y(ell, m, th, ph)
            moments[ell, m] = complex(np.sum(weighted * np.conj(y)))
    return HusimiMultipoles(lmax=lmax, moments=moments)
