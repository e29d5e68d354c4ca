"""Search machinery for cyclic-symmetric anticoherent states.

Three independent construction routes live here:

* ``lp_feasible`` / ``scan``: the support of a state with an n-fold
  cyclic axis is an arithmetic progression, which turns the diagonal
  anticoherence conditions into a small linear feasibility system in the
  probabilities x_k = |d_{n_S + k n}|^2.  The system is solved in exact
  rational arithmetic (phase-1 simplex, Bland's rule), so feasibility
  answers are proofs, not approximations.

* ``family_state``: closed-form families with known anticoherence order.

* ``gauss_legendre_construct``: place the support near the scaled roots
  of a Legendre polynomial and solve the square moment system; the
  solution converges to half the quadrature weights, which guarantees
  positivity (and hence existence of anticoherent states) at every order
  once the supports are spaced by more than the target order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .anticoherence import check_dicke
from .errors import BadShapeError, NumericalError
from .symstate import SymmetricState, isotropic_moment, new_state

__all__ = [
    "LPInstance",
    "LPSolution",
    "Infeasible",
    "ScanRecord",
    "GLPlan",
    "GLFailure",
    "solve_rational_feasibility",
    "lp_feasible",
    "scan",
    "first_feasible",
    "family_state",
    "legendre_nodes_weights",
    "gl_plan",
    "gl_symmetric_plan",
    "gauss_legendre_construct",
    "gauss_legendre_symmetric",
    "FAMILY_NAMES",
]


# ---------------------------------------------------------------------------
# exact-rational feasibility (phase-1 simplex, Bland's rule)
# ---------------------------------------------------------------------------

def solve_rational_feasibility(matrix, rhs):
    """Solve M x = rhs, x >= 0 exactly over the rationals.

    Returns ``(x, Fraction(0))`` on success with M x = rhs exactly, or
    ``(None, optimum)`` where the strictly positive phase-1 optimum
    certifies infeasibility.  Deterministic: Bland's rule everywhere.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    rows = [[Fraction(v) for v in row] for row in matrix]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            rows[i] = [-v for v in rows[i]]
            b[i] = -b[i]

    # tableau columns: n structural + m artificial, artificial basis
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = list(range(n, n + m))
    # phase-1 objective row: minimize the sum of artificials
    obj = [sum(tab[i][j] for i in range(m)) for j in range(n + m + 1)]

    while True:
        enter = -1
        for j in range(n):  # artificials never re-enter
            if j not in basis and obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            break  # unbounded cannot happen in phase 1; defensive
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    optimum = obj[-1]
    if optimum != 0:
        return None, optimum
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return x, Fraction(0)


@dataclass(frozen=True)
class LPInstance:
    """Diagonal-condition system for one (t, N, n, n_S, n_N) shape."""

    t: int
    n_qubits: int
    n: int
    n_south: int
    n_north: int
    r: int
    matrix: tuple
    rhs: tuple

    @property
    def supports(self) -> tuple:
        return tuple(self.n_south + k * self.n for k in range(self.r + 1))


@dataclass(frozen=True)
class LPSolution:
    instance: LPInstance
    x: tuple

    def state(self) -> SymmetricState:
        """Assemble d_{n_S + k n} = sqrt(x_k) (real nonnegative amplitudes)."""
        d = np.zeros(self.instance.n_qubits + 1, dtype=complex)
        for k, xk in zip(self.instance.supports, self.x):
            d[k] = math.sqrt(xk)
        return new_state(d)


@dataclass(frozen=True)
class Infeasible:
    instance: LPInstance
    certificate: Fraction  # strictly positive phase-1 optimum


from functools import lru_cache


@lru_cache(maxsize=4096)
def _moment_vector(n_qubits: int, t: int) -> tuple:
    return tuple(isotropic_moment(n_qubits, q) for q in range(t + 1))


def _build_instance(t: int, n_qubits: int, n: int, n_south: int, n_north: int) -> LPInstance:
    if n <= t:
        raise BadShapeError(f"cyclic order n={n} must exceed the target order t={t}")
    free = n_qubits - n_south - n_north
    if free < 0 or free % n != 0:
        raise BadShapeError(
            f"support shape invalid: N={n_qubits}, n={n}, poles=({n_south},{n_north})"
        )
    r = free // n
    u = [Fraction(n_qubits, 2) - k * n - n_south for k in range(r + 1)]
    matrix = tuple(tuple(uk**q for uk in u) for q in range(t + 1))
    rhs = _moment_vector(n_qubits, t)
    return LPInstance(
        t=t, n_qubits=n_qubits, n=n, n_south=n_south, n_north=n_north,
        r=r, matrix=matrix, rhs=rhs,
    )


def lp_feasible(t: int, n_qubits: int, n: int, n_south: int, n_north: int):
    """Exact feasibility of the diagonal conditions on a cyclic support.

    Returns an :class:`LPSolution` whose assembled state is t-anticoherent
    (the off-diagonal conditions vanish structurally because n > t), or an
    :class:`Infeasible` certificate.
    """
    inst = _build_instance(t, n_qubits, n, n_south, n_north)
    x, optimum = solve_rational_feasibility(inst.matrix, inst.rhs)
    if x is None:
        return Infeasible(instance=inst, certificate=optimum)
    return LPSolution(instance=inst, x=tuple(x))


# ---------------------------------------------------------------------------
# systematic scan over (N, n, n_S, n_N)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRecord:
    """First feasible witness for one qubit number (or its absence)."""

    t: int
    n_qubits: int
    feasible: bool
    n: int | None = None
    n_south: int | None = None
    n_north: int | None = None
    x: tuple | None = None

    def to_json_dict(self) -> dict:
        rec = {"t": self.t, "N": self.n_qubits, "feasible": self.feasible}
        if self.feasible:
            rec.update(
                {
                    "n": self.n,
                    "n_S": self.n_south,
                    "n_N": self.n_north,
                    "x": [str(v) for v in self.x],
                }
            )
        return rec


def _shape_iter(t: int, n_qubits: int):
    """Deterministic shape order: n descending, pole sum ascending, n_S ascending."""
    for n in range(n_qubits, t, -1):
        residue = n_qubits % n
        for total in range(residue, n_qubits + 1, n):
            for n_south in range(total + 1):
                yield n, n_south, total - n_south


def _shape_plausible(t: int, n_qubits: int, n_south: int, n_north: int) -> bool:
    """Cheap exact necessary conditions, used to prune the scan only."""
    if t < 1:
        return True
    half = Fraction(n_qubits, 2)
    hi = half - n_south   # largest support value of N/2 - k
    lo = n_north - half   # smallest
    if hi < 0 or lo > 0:
        return t < 1
    if t >= 2:
        # zero-mean distribution on [lo, hi] has variance at most -lo*hi
        if hi * (-lo) < _moment_vector(n_qubits, 2)[2]:
            return False
    return True


def _scan_single(args) -> ScanRecord:
    t, n_qubits = args
    cache: dict = {}
    for n, n_south, n_north in _shape_iter(t, n_qubits):
        if t >= 2 and (n_qubits - n_south - n_north) // n == 0:
            continue  # single-coefficient supports cannot satisfy q=2
        if not _shape_plausible(t, n_qubits, n_south, n_north):
            continue
        key = (n, min(n_south, n_north), max(n_south, n_north))
        if key in cache and cache[key] is None:
            continue  # mirror image already proven infeasible
        result = lp_feasible(t, n_qubits, n, n_south, n_north)
        if isinstance(result, LPSolution):
            return ScanRecord(
                t=t, n_qubits=n_qubits, feasible=True,
                n=n, n_south=n_south, n_north=n_north, x=result.x,
            )
        cache[key] = None
    return ScanRecord(t=t, n_qubits=n_qubits, feasible=False)


def scan(t: int, n_range, threads: int = 1) -> list[ScanRecord]:
    """Feasibility records for every N in ``n_range``.

    Each record carries the first feasible witness in the deterministic
    shape order (largest n first, fewest pole points first), or marks N
    infeasible after exhausting every shape.  With ``threads > 1`` the
    per-N work is distributed over processes; the result order is always
    the sorted input order.
    """
    ns = sorted(set(int(n) for n in n_range))
    jobs = [(t, n) for n in ns]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_scan_single, jobs, chunksize=1))
    else:
        records = [_scan_single(j) for j in jobs]
    return records


def first_feasible(t: int, n_max: int, threads: int = 1) -> ScanRecord | None:
    """Scan N upward and stop at the first feasible qubit number."""
    for n_qubits in range(1, n_max + 1):
        rec = _scan_single((t, n_qubits))
        if rec.feasible:
            return rec
    return None


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def _zimba(n_qubits: int) -> SymmetricState:
    if n_qubits < 6 or n_qubits % 2:
        raise BadShapeError("this three-point family needs even N >= 6")
    d = np.zeros(n_qubits + 1)
    amp = math.sqrt((n_qubits + 2) / (6 * n_qubits))
    d[0] = d[n_qubits] = amp
    d[n_qubits // 2] = 2 * math.sqrt((n_qubits - 1) / (n_qubits + 2)) * amp
    return new_state(d)


def _dnh5(m: int) -> SymmetricState:
    if m < 5:
        raise BadShapeError("the five-point mirror family needs m >= 5")
    n = 4 * (m + 1)
    d = np.zeros(n + 1)
    d[0] = d[n] = math.sqrt((2 + n) * (4 + n) * (7 * n - 4))
    d[n // 4] = d[3 * n // 4] = 4 * math.sqrt(2.0) * math.sqrt((n - 2) * (n - 1) * (n + 2))
    d[n // 2] = 2 * math.sqrt(3.0) * math.sqrt((n - 1) * (n * n + 16))
    return new_state(d)


def _ghz_like(n_qubits: int) -> SymmetricState:
    if n_qubits < 3:
        raise BadShapeError("needs N >= 3")
    d = np.zeros(n_qubits + 1)
    d[0] = math.sqrt(n_qubits - 2)
    d[n_qubits - 1] = math.sqrt(n_qubits)
    return new_state(d)


def _polygon_pole(n_qubits: int) -> SymmetricState:
    if n_qubits <= 3 or n_qubits % 2 == 0:
        raise BadShapeError("the polygon-plus-pole family needs odd N > 3")
    d = np.zeros(n_qubits + 1)
    d[(n_qubits - 1) // 2] = math.sqrt(n_qubits - 2)
    d[n_qubits - 1] = 1.0
    return new_state(d)


def _icosahedron() -> SymmetricState:
    d = np.zeros(13)
    d[1] = math.sqrt(7) / 5
    d[6] = math.sqrt(11) / 5
    d[11] = -math.sqrt(7) / 5
    return new_state(d)


def _d7d42() -> SymmetricState:
    vals = [
        math.sqrt(7062),
        math.sqrt(29315),
        3 * math.sqrt(451),
        math.sqrt(36777),
        -3 * math.sqrt(451),
        math.sqrt(29315),
        -math.sqrt(7062),
    ]
    d = np.zeros(43)
    d[::7] = np.array(vals) / 343
    return new_state(d)


FAMILY_NAMES = ("zimba", "dnh5", "ghz_like", "polygon_pole", "icosahedron", "d7d42")


def family_state(name: str, **params) -> SymmetricState:
    """Closed-form named state families.

    ``zimba(N)`` three-point family, even N >= 6 (order 2; order 3 from
    N = 8); ``dnh5(m)`` five-point mirror family at N = 4(m+1), order 5;
    ``ghz_like(N)`` and ``polygon_pole(N)`` order-1 families;
    ``icosahedron`` the 12-qubit order-5 state; ``d7d42`` the 42-qubit
    order-7 state with sevenfold rotoreflection symmetry.
    """
    try:
        if name == "zimba":
            return _zimba(int(params.pop("n_qubits")))
        if name == "dnh5":
            return _dnh5(int(params.pop("m")))
        if name == "ghz_like":
            return _ghz_like(int(params.pop("n_qubits")))
        if name == "polygon_pole":
            return _polygon_pole(int(params.pop("n_qubits")))
        if name == "icosahedron":
            return _icosahedron()
        if name == "d7d42":
            return _d7d42()
    except KeyError as exc:
        raise BadShapeError(f"family {name!r} missing parameter {exc}") from None
    raise BadShapeError(f"unknown family {name!r}; known: {FAMILY_NAMES}")


# ---------------------------------------------------------------------------
# Gauss-Legendre construction
# ---------------------------------------------------------------------------

def _legendre_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(P_n(x), P_{n-1}(x)) by upward recurrence."""
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p, p_prev


def legendre_nodes_weights(t: int) -> tuple[np.ndarray, np.ndarray]:
    """Roots of the degree-(t+1) Legendre polynomial and their weights.

    Newton iteration from Chebyshev-style initial guesses, polished in
    extended precision: the polynomial derivative grows like n^2 at the
    edge roots, so plain double arithmetic cannot certify the 1e-14
    residual bound beyond n of a few dozen.  Weights follow the
    derivative-product formula w_i = 2 / ((t+1) P'_{t+1}(u_i) P_t(u_i))
    and always sum to 2.
    """
    if t < 0:
        raise ValueError("order must be nonnegative")
    n = t + 1
    i = np.arange(n, dtype=np.longdouble)
    x = np.cos(np.pi * (i + 0.75) / (n + 0.5)).astype(np.longdouble)
    eps = float(np.finfo(np.longdouble).eps)
    for _ in range(100):
        p, p_prev = _legendre_pair(n, x)
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        step = p / dp
        x = x - step
        if float(np.max(np.abs(step))) < 4 * eps:
            break
    p, p_prev = _legendre_pair(n, x)
    if float(np.max(np.abs(p))) > 1e-14:
        raise NumericalError("Legendre root refinement failed its residual bound")
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / (n * dp * p_prev)
    order = np.argsort(x)
    return x[order].astype(float), w[order].astype(float)


@dataclass(frozen=True)
class GLPlan:
    """Support plan of the quadrature construction.

    ``valid`` records the sufficient success conditions (strictly
    positive solution and support spacing above the order); a state can
    still verify correct when ``valid`` is False, e.g. when zero weights
    vacate a crowded position.
    """

    t: int
    n_qubits: int
    nodes: np.ndarray
    weights: np.ndarray
    positions: tuple
    solution: np.ndarray | None
    valid: bool
    min_spacing: int
    mirrored: bool = False


@dataclass(frozen=True)
class GLFailure:
    plan: GLPlan
    reason: str


def _positions_from_nodes(nodes: np.ndarray, n_qubits: int) -> list[int]:
    return [int(math.floor(n_qubits * (1.0 + u) / 2.0)) for u in nodes]


def _min_spacing(positions) -> int:
    ps = sorted(positions)
    return min((b - a for a, b in zip(ps, ps[1:])), default=10**9)


def _solve_moment_system(positions, n_qubits: int, qs) -> np.ndarray:
    """Solve sum_i (1/2 - k_i/N)^q x_i = A(q)/N^q for the listed powers q.

    One round of exact-residual iterative refinement keeps the solution
    near machine precision; matrix entries and targets are rational.
    """
    m = len(positions)
    u = [Fraction(1, 2) - Fraction(k, n_qubits) for k in positions]
    mat_exact = [[uk**q for uk in u] for q in qs]
    rhs_exact = [
        isotropic_moment(n_qubits, q) / Fraction(n_qubits) ** q for q in qs
    ]
    mat = np.array([[float(v) for v in row] for row in mat_exact])
    rhs = np.array([float(v) for v in rhs_exact])
    try:
        x = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"moment system is singular: {exc}") from exc
    for _ in range(2):
        resid = [
            rhs_exact[i] - sum(mat_exact[i][j] * Fraction(x[j]) for j in range(m))
            for i in range(len(qs))
        ]
        delta = np.linalg.solve(mat, np.array([float(v) for v in resid]))
        x = x + delta
    return x


_WEIGHT_DROP = 1e-12


def _assemble_and_verify(
    plan: GLPlan, sign_patterns, tol: float = 1e-9
) -> SymmetricState | GLFailure:
    """Build candidate states for each sign pattern and keep the first that verifies."""
    x = plan.solution
    if np.min(x) < -_WEIGHT_DROP:
        return GLFailure(plan, f"negative weight {np.min(x):.3e} in the moment solution")
    keep = x > _WEIGHT_DROP
    supports = [k for k, keeping in zip(plan.positions, keep) if keeping]
    if len(set(supports)) != len(supports):
        return GLFailure(plan, "support positions collide")
    for signs in sign_patterns:
        d = np.zeros(plan.n_qubits + 1, dtype=complex)
        for idx, (k, keeping) in enumerate(zip(plan.positions, keep)):
            if keeping:
                d[k] = signs[idx] * math.sqrt(x[idx])
        state = new_state(d)
        if check_dicke(state, plan.t, tol):
            return state
    return GLFailure(
        plan,
        "no sign assignment passes verification "
        f"(min spacing {plan.min_spacing} < {plan.t + 1})",
    )


def gl_plan(t: int, n_qubits: int, solve: bool = True) -> GLPlan:
    """Positions (and optionally the solved weights) of the plain construction."""
    nodes, weights = legendre_nodes_weights(t)
    positions = _positions_from_nodes(nodes, n_qubits)
    spacing = _min_spacing(positions)
    solution = None
    valid = spacing >= t + 1
    if solve:
        if len(set(positions)) != len(positions):
            return GLPlan(t, n_qubits, nodes, weights, tuple(positions), None, False, spacing)
        solution = _solve_moment_system(positions, n_qubits, range(t + 1))
        valid = valid and bool(np.min(solution) > 0)
    return GLPlan(
        t=t, n_qubits=n_qubits, nodes=nodes, weights=weights,
        positions=tuple(positions), solution=solution, valid=valid,
        min_spacing=spacing,
    )


def gauss_legendre_construct(t: int, n_qubits: int):
    """Anticoherent state on floor-rounded Legendre-node supports.

    Solves the (t+1)-point moment system, drops vanishing weights, and
    verifies the assembled nonnegative-amplitude state at order t.
    Returns the state, or a :class:`GLFailure` carrying the plan and the
    reason (negative weights, collisions, spacing too tight to cancel the
    off-diagonal conditions).
    """
    plan = gl_plan(t, n_qubits, solve=True)
    if plan.solution is None:
        return GLFailure(plan, "support positions collide")
    return _assemble_and_verify(plan, [np.ones(t + 1)])


def gl_symmetric_plan(t: int, n_qubits: int, solve: bool = True) -> GLPlan:
    """Mirror-symmetric plan: positions paired as k and N - k.

    Only the even-q moment rows survive the mirror symmetry, leaving a
    (t/2 + 1)-dimensional system for the independent weights.
    """
    if t % 2:
        raise BadShapeError("the mirrored construction needs even t")
    nodes, weights = legendre_nodes_weights(t)
    half = [int(math.floor(n_qubits * (1.0 + u) / 2.0)) for u in nodes[: t // 2 + 1]]
    positions = half + [n_qubits - k for k in reversed(half[:-1])]
    spacing = _min_spacing(positions)
    solution = None
    valid = spacing >= t + 1
    if solve:
        if len(set(positions)) != len(positions):
            return GLPlan(
                t, n_qubits, nodes, weights, tuple(positions), None, False, spacing, True
            )
        # reduced system over the left half: doubled columns for mirrored
        # pairs, unit column for the self-mirrored middle node
        qs = range(0, t + 1, 2)
        m = t // 2 + 1
        u = [Fraction(1, 2) - Fraction(k, n_qubits) for k in half]
        mat_exact = [
            [(1 if j == m - 1 else 2) * u[j] ** q for j in range(m)] for q in qs
        ]
        rhs_exact = [isotropic_moment(n_qubits, q) / Fraction(n_qubits) ** q for q in qs]
        mat = np.array([[float(v) for v in row] for row in mat_exact])
        rhs = np.array([float(v) for v in rhs_exact])
        try:
            xh = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"moment system is singular: {exc}") from exc
        for _ in range(2):
            resid = [
                rhs_exact[i] - sum(mat_exact[i][j] * Fraction(xh[j]) for j in range(m))
                for i in range(len(mat_exact))
            ]
            xh = xh + np.linalg.solve(mat, np.array([float(v) for v in resid]))
        solution = np.concatenate([xh, xh[:-1][::-1]])
        valid = valid and bool(np.min(solution) > 0)
    return GLPlan(
        t=t, n_qubits=n_qubits, nodes=nodes, weights=weights,
        positions=tuple(positions), solution=solution, valid=valid,
        min_spacing=spacing, mirrored=True,
    )


def _mirror_sign_patterns(t: int, middle_alive: bool) -> list[np.ndarray]:
    """Sign completions compatible with the mirrored support.

    The plain all-positive assignment realizes the mirror-symmetric
    canonical shape; the alternating assignments realize the
    rotoreflection-type shapes, which cancel the residual off-diagonal
    condition produced by edge supports closer than t+1.  With a nonzero
    middle weight only the alternation of matching parity is consistent.
    """
    patterns = [np.ones(t + 1)]
    half = t // 2

    def alternating(eps: float) -> np.ndarray:
        s = np.ones(t + 1)
        for i in range(half):
            s[t - i] = eps * (-1.0) ** i
        return s

    consistent = (-1.0) ** half
    patterns.append(alternating(consistent))
    if not middle_alive:
        patterns.append(alternating(-consistent))
        minus = np.ones(t + 1)
        minus[half + 1 :] = -1.0
        patterns.append(minus)
    return patterns


def gauss_legendre_symmetric(t: int, n_qubits: int):
    """Mirror-symmetric construction for even t.

    Solves the reduced even-moment system, then tries the
    mirror-compatible sign assignments (plain and alternating) and
    returns the first state verifying at order t.
    """
    plan = gl_symmetric_plan(t, n_qubits, solve=True)
    if plan.solution is None:
        return GLFailure(plan, "support positions collide")
    middle_alive = bool(plan.solution[t // 2] > _WEIGHT_DROP)
    return _assemble_and_verify(plan, _mirror_sign_patterns(t, middle_alive))
