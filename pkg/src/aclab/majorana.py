"""Majorana point configurations: state <-> points, symmetry machinery.

A symmetric N-qubit state maps to N points on the Bloch sphere: the roots
of the associated degree-(N - n_N) polynomial, stereographically projected
through z = cot(theta/2) e^(-i phi), plus n_S points at the South pole
(roots at z = 0) and n_N points at the North pole (missing degrees).

Symmetry operations of the seven infinite point-group families act on the
stereographic plane as

    rotation(n):  z -> z exp(-2 pi i / n)
    sigma_h:      z -> 1 / conj(z)            (poles swap)
    sigma_v:      z -> conj(z)
    sigma_d(n):   z -> conj(z) exp(-i pi / n)
    c2x:          z -> 1 / z                  (poles swap)
    s(n):         z -> exp(-i pi / n) / conj(z)   (poles swap)

and each induces an equivalent constraint on the Dicke coefficients,
checked by :func:`check_coefficient_constraint`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NumericalError
from .symstate import SymmetricState, ZERO_CUTOFF, _log_binom, new_state

__all__ = [
    "MajoranaConfig",
    "SymmetryOp",
    "SymmetryReport",
    "majorana_polynomial",
    "majorana_points",
    "state_from_points",
    "apply_symmetry",
    "detect_symmetry",
    "check_coefficient_constraint",
    "canonical_group_form",
    "barycenter",
    "configs_match",
]

_SWAPS_POLES = {"sigma_h", "c2x", "s"}
_PARAMETRIZED = {"rotation", "sigma_d", "s"}


@dataclass(frozen=True)
class MajoranaConfig:
    """Multiset of Bloch-sphere points: pole multiplicities plus nonzero roots."""

    n_south: int
    n_north: int
    roots: np.ndarray

    def __post_init__(self):
        roots = np.asarray(self.roots, dtype=complex).reshape(-1)
        if np.any(roots == 0):
            raise ValueError("zero roots must be folded into n_south")
        roots.setflags(write=False)
        object.__setattr__(self, "roots", roots)

    @property
    def n_points(self) -> int:
        return self.n_south + self.n_north + len(self.roots)

    def unit_vectors(self) -> np.ndarray:
        """All N points as rows of unit vectors (poles expanded)."""
        vecs = []
        vecs.extend([[0.0, 0.0, -1.0]] * self.n_south)
        vecs.extend([[0.0, 0.0, 1.0]] * self.n_north)
        for z in self.roots:
            r2 = abs(z) ** 2
            xy = 2 * np.conj(z) / (1 + r2)
            vecs.append([xy.real, xy.imag, (r2 - 1) / (r2 + 1)])
        return np.array(vecs).reshape(self.n_points, 3)

    def bloch_angles(self) -> list[tuple[float, float, int]]:
        """(theta, phi, multiplicity) entries; poles first, then roots."""
        out = []
        if self.n_south:
            out.append((math.pi, 0.0, self.n_south))
        if self.n_north:
            out.append((0.0, 0.0, self.n_north))
        for z in self.roots:
            theta = 2 * math.atan2(1.0, abs(z))
            phi = (-cmath.phase(z)) % (2 * math.pi)
            out.append((theta, phi, 1))
        return out


@dataclass(frozen=True)
class SymmetryOp:
    """One generator-level symmetry operation about the z-axis frame."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in {"rotation", "sigma_h", "sigma_v", "sigma_d", "c2x", "s"}:
            raise ValueError(f"unknown symmetry kind {self.kind!r}")
        if self.kind in _PARAMETRIZED:
            if self.n is None or self.n < 2:
                raise ValueError(f"{self.kind} requires n >= 2")
        elif self.n is not None:
            raise ValueError(f"{self.kind} takes no order parameter")

    def __str__(self) -> str:
        return f"{self.kind}({self.n})" if self.n else self.kind


def rotation(n: int) -> SymmetryOp:
    return SymmetryOp("rotation", n)


def sigma_h() -> SymmetryOp:
    return SymmetryOp("sigma_h")


def sigma_v() -> SymmetryOp:
    return SymmetryOp("sigma_v")


def sigma_d(n: int) -> SymmetryOp:
    return SymmetryOp("sigma_d", n)


def c2x() -> SymmetryOp:
    return SymmetryOp("c2x")


def s_rotoreflection(n: int) -> SymmetryOp:
    return SymmetryOp("s", n)


# ---------------------------------------------------------------------------
# state <-> points
# ---------------------------------------------------------------------------

def _sqrt_binom(n: int, k: int) -> float:
    return math.exp(0.5 * _log_binom(n, k))


def majorana_polynomial(state: SymmetricState) -> np.ndarray:
    """Coefficients p_k = (-1)^k sqrt(C_N^k) d_k for k = n_S .. N - n_N.

    Leading/trailing exactly-zero Dicke coefficients are trimmed; they
    encode pole multiplicities, not polynomial structure.
    """
    n = state.n_qubits
    n_s, n_n = state.pole_zero_counts()
    ks = np.arange(n_s, n - n_n + 1)
    coeffs = np.array(
        [(-1) ** k * _sqrt_binom(n, k) * state.dicke[k] for k in ks], dtype=complex
    )
    return coeffs


def majorana_points(state: SymmetricState, tol: float = 1e-10) -> MajoranaConfig:
    """Majorana configuration of a state (companion-matrix root finding).

    Roots are polished by two Newton steps and certified through their
    backward-relative residual |P(z)| / sum_j |p_j z^j| < tol; the absolute
    residual alone is meaningless for roots far outside the unit disk.
    """
    n_s, n_n = state.pole_zero_counts()
    coeffs = majorana_polynomial(state)
    coeffs = coeffs / np.max(np.abs(coeffs))
    deg = len(coeffs) - 1
    if deg == 0:
        return MajoranaConfig(n_south=n_s, n_north=n_n, roots=np.array([], dtype=complex))
    roots = np.roots(coeffs[::-1])
    dcoeffs = coeffs[1:] * np.arange(1, deg + 1)
    for _ in range(2):
        pz = np.polyval(coeffs[::-1], roots)
        dpz = np.polyval(dcoeffs[::-1], roots)
        safe = np.abs(dpz) > 1e-30
        roots = np.where(safe, roots - pz / np.where(safe, dpz, 1.0), roots)
    # backward-relative residual certificate
    powers = np.abs(roots[:, None]) ** np.arange(deg + 1)[None, :]
    scale = powers @ np.abs(coeffs)
    resid = np.abs(np.polyval(coeffs[::-1], roots)) / scale
    worst = float(np.max(resid)) if len(resid) else 0.0
    if worst > tol:
        raise NumericalError(f"root residual {worst:.3e} exceeds tolerance {tol:.1e}")
    order = np.lexsort((roots.imag, roots.real))
    return MajoranaConfig(n_south=n_s, n_north=n_n, roots=roots[order])


def state_from_points(config: MajoranaConfig) -> SymmetricState:
    """Inverse map: expand the root polynomial back into Dicke amplitudes."""
    n = config.n_points
    if len(config.roots):
        poly = np.poly(config.roots)[::-1]  # ascending in z
    else:
        poly = np.array([1.0 + 0j])
    dicke = np.zeros(n + 1, dtype=complex)
    for j, c in enumerate(poly):
        k = config.n_south + j
        dicke[k] = (-1) ** k * c / _sqrt_binom(n, k)
    return new_state(dicke)


def barycenter(config: MajoranaConfig) -> np.ndarray:
    """Mean of the N unit vectors of the configuration."""
    return config.unit_vectors().mean(axis=0)


# ---------------------------------------------------------------------------
# symmetry operations and detection
# ---------------------------------------------------------------------------

def apply_symmetry(config: MajoranaConfig, op: SymmetryOp) -> MajoranaConfig:
    """Transformed configuration under one symmetry operation."""
    z = config.roots
    if op.kind == "rotation":
        new_roots = z * np.exp(-2j * math.pi / op.n)
    elif op.kind == "sigma_h":
        new_roots = 1.0 / np.conj(z)
    elif op.kind == "sigma_v":
        new_roots = np.conj(z)
    elif op.kind == "sigma_d":
        new_roots = np.conj(z) * np.exp(-1j * math.pi / op.n)
    elif op.kind == "c2x":
        new_roots = 1.0 / z
    else:  # s_n rotation-reflection
        new_roots = np.exp(-1j * math.pi / op.n) / np.conj(z)
    if op.kind in _SWAPS_POLES:
        return MajoranaConfig(config.n_north, config.n_south, new_roots)
    return MajoranaConfig(config.n_south, config.n_north, new_roots)


def configs_match(a: MajoranaConfig, b: MajoranaConfig, tol: float = 1e-8) -> bool:
    """Multiset equality of configurations via optimal point assignment."""
    if a.n_points != b.n_points:
        return False
    if a.n_points == 0:
        return True
    va, vb = a.unit_vectors(), b.unit_vectors()
    cost = np.linalg.norm(va[:, None, :] - vb[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return bool(np.max(cost[rows, cols]) < tol)


def _candidate_ops(n: int) -> list[SymmetryOp]:
    ops = [sigma_h(), sigma_v(), c2x()]
    if n >= 2:
        ops += [sigma_d(n), s_rotoreflection(n)]
    return ops


def _group_label(n: int, verified: dict[str, bool]) -> str:
    """Assemble the point-group family label from verified generators."""
    if n < 2:
        return "none"
    has_h = verified.get("sigma_h", False)
    has_v = verified.get("sigma_v", False)
    has_d = verified.get("sigma_d", False)
    has_c2 = verified.get("c2x", False)
    has_s = verified.get("s", False)
    if has_s:
        # rotation-reflection family; any vertical mirror or C2' upgrades to D_nd
        if has_v or has_d or has_c2:
            return f"D_{n}d"
        return f"S_{2 * n}"
    if has_h:
        if has_c2 or has_v or has_d:
            return f"D_{n}h"
        return f"C_{n}h"
    if has_c2:
        return f"D_{n}"
    if has_v or has_d:
        return f"C_{n}v"
    return f"C_{n}"


@dataclass
class SymmetryReport:
    """Verified symmetry elements in the given frame, plus the family label."""

    max_cyclic: int
    extra_ops: list[SymmetryOp] = field(default_factory=list)
    group_label: str = "none"

    def to_dict(self) -> dict:
        return {
            "max_cyclic": self.max_cyclic,
            "extra_ops": [str(op) for op in self.extra_ops],
            "group_label": self.group_label,
        }


def detect_symmetry(
    config: MajoranaConfig, tol: float = 1e-8, align: bool = False
) -> SymmetryReport:
    """Detect point-group elements about the z-axis in the given frame.

    By default no axis optimisation is attempted: the configuration is
    assumed to be in its canonical orientation (symmetry axis = z, mirror
    plane = xz when present).  ``max_cyclic`` is the largest n <= N whose
    rotation leaves the multiset invariant.

    With ``align=True`` (heuristic, N <= 12) candidate axes built from
    point directions and pair bisectors are tried first, and the report
    of the richest frame is returned; the result then describes the
    configuration up to rotation rather than in its given frame.
    """
    if align:
        return _detect_aligned(config, tol)
    n_points = config.n_points
    max_cyclic = 1
    for n in range(n_points, 1, -1):
        if configs_match(config, apply_symmetry(config, rotation(n)), tol):
            max_cyclic = n
            break
    verified: dict[str, bool] = {}
    extra = []
    for op in _candidate_ops(max_cyclic):
        ok = configs_match(config, apply_symmetry(config, op), tol)
        verified[op.kind] = ok
        if ok:
            extra.append(op)
    return SymmetryReport(
        max_cyclic=max_cyclic,
        extra_ops=extra,
        group_label=_group_label(max_cyclic, verified),
    )


_GROUP_RANK = {"D": 4, "S": 3, "C": 2}


def _report_rank(report: SymmetryReport) -> tuple:
    label = report.group_label
    family = _GROUP_RANK.get(label[0], 0) if label != "none" else 0
    return (report.max_cyclic, family + len(report.extra_ops))


def _rotate_config(config: MajoranaConfig, rot: np.ndarray) -> MajoranaConfig:
    """Rebuild a configuration from rotated unit vectors."""
    vecs = config.unit_vectors() @ rot.T
    n_south = n_north = 0
    roots = []
    for v in vecs:
        if v[2] > 1 - 1e-12:
            n_north += 1
        elif v[2] < -1 + 1e-12:
            n_south += 1
        else:
            # invert the stereographic map: z = cot(theta/2) e^{-i phi}
            theta = math.acos(max(-1.0, min(1.0, v[2])))
            phi = math.atan2(v[1], v[0])
            roots.append(1 / math.tan(theta / 2) * complex(math.cos(phi), -math.sin(phi)))
    return MajoranaConfig(n_south=n_south, n_north=n_north, roots=np.array(roots))


def _frame_rotation(axis: np.ndarray) -> np.ndarray:
    """Proper rotation sending ``axis`` to +z."""
    axis = axis / np.linalg.norm(axis)
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(axis, z)
    c = float(np.dot(axis, z))
    if np.linalg.norm(v) < 1e-12:
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx / (1 + c)


def _detect_aligned(config: MajoranaConfig, tol: float) -> SymmetryReport:
    if config.n_points > 12:
        raise ValueError("frame alignment heuristic is limited to N <= 12")
    vecs = config.unit_vectors()
    candidates = [np.array([0.0, 0.0, 1.0])]
    candidates += [v for v in vecs]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            s = vecs[i] + vecs[j]
            if np.linalg.norm(s) > 1e-6:
                candidates.append(s / np.linalg.norm(s))
            x = np.cross(vecs[i], vecs[j])
            if np.linalg.norm(x) > 1e-6:
                candidates.append(x / np.linalg.norm(x))
    best = None
    for axis in candidates:
        frame = _rotate_config(config, _frame_rotation(axis))
        base = detect_symmetry(frame, tol)
        reports = [base]
        # azimuthal retries: bring each root into the xz-plane to expose
        # vertical mirrors at this axis
        seen_phis = set()
        for z in frame.roots:
            phi = (-cmath.phase(z)) % (2 * math.pi)
            key = round(phi, 9)
            if key in seen_phis:
                continue
            seen_phis.add(key)
            spun = MajoranaConfig(
                frame.n_south, frame.n_north, frame.roots * np.exp(1j * phi)
            )
            reports.append(detect_symmetry(spun, tol))
        for rep in reports:
            if best is None or _report_rank(rep) > _report_rank(best):
                best = rep
    return best


# ---------------------------------------------------------------------------
# Dicke-coefficient constraints of each symmetry operation
# ---------------------------------------------------------------------------

def _phase_aligned(d: np.ndarray) -> np.ndarray:
    """Remove the global phase using the first nonzero coefficient."""
    mags = np.abs(d)
    k0 = int(np.flatnonzero(mags > ZERO_CUTOFF * mags.max())[0])
    return d * np.exp(-1j * np.angle(d[k0]))


def check_coefficient_constraint(
    state: SymmetricState, op: SymmetryOp, tol: float = 1e-10
) -> bool:
    """Test the Dicke-coefficient constraint induced by one symmetry op.

    These are the coefficient-space equivalents of point-set invariance:
    rotation(n) forces support on n_S (mod n); sigma_h pairs d_{N-k} with
    conj(d_k) through one common phase; sigma_v makes all coefficients
    real up to a global phase; sigma_d(n) fixes each phase to k pi/(2n) up
    to signs; c2x imposes d_{N-k} = +/- d_k with a single sign; s(n)
    combines the rotation support rule with an alternating-sign pairing.
    """
    n = state.n_qubits
    d = state.dicke
    mags = np.abs(d)
    scale = mags.max()
    n_s, n_n = state.pole_zero_counts()

    if op.kind == "rotation":
        bad = [k for k in range(n + 1) if (k - n_s) % op.n and mags[k] >= tol * scale]
        return not bad

    if op.kind == "sigma_h":
        if n_s != n_n:
            return False
        # xi from the dominant pair, then verified everywhere
        k0 = int(np.argmax(mags * mags[::-1]))
        pair = d[n - k0] * d[k0]
        if abs(pair) < (tol * scale) ** 2:
            return False  # support is not mirror symmetric
        ref = pair / abs(pair)
        return bool(np.max(np.abs(d[::-1] - ref * np.conj(d))) < tol)

    if op.kind == "sigma_v":
        aligned = _phase_aligned(d)
        return bool(np.max(np.abs(aligned.imag)) < tol)

    if op.kind == "sigma_d":
        k = np.arange(n + 1)
        twisted = _phase_aligned(d * np.exp(-1j * k * math.pi / (2 * op.n)))
        return bool(np.max(np.abs(twisted.imag)) < tol)

    if op.kind == "c2x":
        for sign in (1.0, -1.0):
            if np.max(np.abs(d[::-1] - sign * d)) < tol:
                return True
        return False

    # s(n): rotation support + paired conjugation with (-1)^q twist
    if n_s != n_n:
        return False
    if not check_coefficient_constraint(state, rotation(op.n), tol):
        return False
    k = np.arange(n + 1)
    signs = np.where(((k - n_s) // op.n) % 2 == 0, 1.0, -1.0)
    twisted = signs * np.conj(d)
    # least-squares common phase across all pairs, then verified everywhere
    inner = np.sum(d[::-1] * np.conj(twisted))
    if abs(inner) < 1e-15:
        return False
    ref = inner / abs(inner)
    return bool(np.max(np.abs(d[::-1] - ref * twisted)) < tol)


def canonical_group_form(state: SymmetricState, tol: float = 1e-10) -> str | None:
    """Identify the richest canonical coefficient shape the state matches.

    Returns a point-group family label (e.g. ``"D_3h"``) or None when not
    even a twofold cyclic structure is present.  Consistency with
    :func:`detect_symmetry` on the point configuration is a tested
    invariant, not an assumption.
    """
    n = state.n_qubits
    supp = state.support()
    n_s = int(supp[0])
    if len(supp) == 1:
        n_cyc = n
    else:
        n_cyc = int(np.gcd.reduce(np.diff(supp)))
    if n_cyc < 2:
        return None
    verified = {
        "sigma_h": check_coefficient_constraint(state, sigma_h(), tol),
        "sigma_v": check_coefficient_constraint(state, sigma_v(), tol),
        "sigma_d": check_coefficient_constraint(state, sigma_d(n_cyc), tol),
        "c2x": check_coefficient_constraint(state, c2x(), tol),
        "s": check_coefficient_constraint(state, s_rotoreflection(n_cyc), tol),
    }
    label = _group_label(n_cyc, verified)
    return None if label == "none" else label
