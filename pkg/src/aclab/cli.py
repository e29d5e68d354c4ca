"""Command-line frontend: state files, reports, and batch drivers.

State files are JSON objects with an ``n_qubits`` integer and a ``dicke``
list of [re, im] pairs; an optional ``exact`` list refines each amplitude
as +/- sqrt(num/den) (or plain num/den) times exp(i pi phase_num/phase_den).
Point files are plain text with one ``theta phi multiplicity`` line per
distinct point.  All outputs are deterministic: identical inputs give
byte-identical bytes on stdout.

Exit codes: 0 success, 2 malformed input, 3 numerical failure,
4 infeasible search / class without a representative.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import majorana, search, slocc, sphere
from .anticoherence import (
    anticoherence_report,
    check_dicke,
    check_multipole,
    check_operator,
    check_reduced,
    multipole_coeffs,
)
from .errors import (
    AclabError,
    BadShapeError,
    NoRepresentativeError,
    NumericalError,
    ZeroStateError,
)
from .symstate import SymmetricState, new_state

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4


class InputError(Exception):
    """Malformed file or argument; maps to exit code 2."""


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _exact_value(entry) -> complex:
    try:
        num = int(entry["num"])
        den = int(entry.get("den", 1))
        use_sqrt = bool(entry.get("sqrt", False))
        pn = int(entry.get("phase_num", 0))
        pd = int(entry.get("phase_den", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad exact amplitude entry {entry!r}") from exc
    if den <= 0 or pd == 0:
        raise InputError(f"bad exact amplitude entry {entry!r}")
    if use_sqrt:
        mag = math.copysign(math.sqrt(abs(num) / den), num)
    else:
        mag = num / den
    return mag * complex(math.cos(math.pi * pn / pd), math.sin(math.pi * pn / pd))


def load_state(path: str) -> SymmetricState:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read state file {path}: {exc}") from exc
    if not isinstance(data, dict) or "dicke" not in data:
        raise InputError(f"state file {path} lacks a 'dicke' array")
    raw = data["dicke"]
    if not isinstance(raw, list) or not raw:
        raise InputError(f"state file {path}: 'dicke' must be a nonempty list")
    try:
        if "exact" in data:
            amps = [_exact_value(e) for e in data["exact"]]
        else:
            amps = [complex(float(re), float(im)) for re, im in raw]
    except (TypeError, ValueError) as exc:
        raise InputError(f"state file {path}: bad amplitude entry ({exc})") from exc
    n_qubits = data.get("n_qubits", len(amps) - 1)
    if int(n_qubits) != len(amps) - 1:
        raise InputError(
            f"state file {path}: n_qubits={n_qubits} but {len(amps)} amplitudes"
        )
    try:
        return new_state(amps)
    except ZeroStateError as exc:
        raise InputError(f"state file {path}: {exc}") from exc


def state_to_dict(state: SymmetricState) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "dicke": [[float(a.real), float(a.imag)] for a in state.dicke],
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)


def load_points(path: str) -> majorana.MajoranaConfig:
    n_south = n_north = 0
    roots = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read points file {path}: {exc}") from exc
    for ln, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"{path}:{ln}: expected 'theta phi multiplicity'")
        try:
            theta, phi, mult = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise InputError(f"{path}:{ln}: {exc}") from exc
        if mult < 1 or not 0 <= theta <= math.pi + 1e-9:
            raise InputError(f"{path}:{ln}: invalid point")
        if theta < 1e-12:
            n_north += mult
        elif theta > math.pi - 1e-12:
            n_south += mult
        else:
            z = 1.0 / math.tan(theta / 2) * complex(math.cos(phi), -math.sin(phi))
            roots.extend([z] * mult)
    if n_south + n_north + len(roots) == 0:
        raise InputError(f"{path}: no points")
    return majorana.MajoranaConfig(
        n_south=n_south, n_north=n_north, roots=np.array(roots, dtype=complex)
    )


def points_to_text(config: majorana.MajoranaConfig) -> str:
    lines = [
        f"{theta:.17g} {phi:.17g} {mult}"
        for theta, phi, mult in config.bloch_angles()
    ]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    state = load_state(args.state)
    if args.order is not None:
        t = args.order
        results = {
            "operator": check_operator(state, t, args.tol),
            "dicke": check_dicke(state, t, args.tol),
            "reduced": check_reduced(state, t, args.tol),
            "multipole": check_multipole(state, t, args.tol),
        }
        ok = all(results.values())
        if args.json:
            _emit(_dump_json({"order_tested": t, "passed": ok, "by_method": results}) + "\n", args.output)
        else:
            _emit(f"order {t}: {'PASS' if ok else 'FAIL'}\n", args.output)
        return EXIT_OK
    report = anticoherence_report(state, args.tol)
    if args.json:
        _emit(_dump_json(report.to_dict()) + "\n", args.output)
    else:
        _emit(f"order {report.order}\n", args.output)
    return EXIT_OK


def _cmd_roots(args) -> int:
    state = load_state(args.state)
    config = majorana.majorana_points(state, args.tol)
    _emit(points_to_text(config), args.output)
    return EXIT_OK


def _cmd_from_points(args) -> int:
    config = load_points(args.points)
    state = majorana.state_from_points(config)
    _emit(_dump_json(state_to_dict(state)) + "\n", args.output)
    return EXIT_OK


def _cmd_slocc_rep(args) -> int:
    state = load_state(args.state)
    rep = slocc.anticoherent_representative(state)
    payload = state_to_dict(rep)
    payload["ilo_parameter"] = float(slocc.positive_root(state))
    _emit(_dump_json(payload) + "\n", args.output)
    return EXIT_OK


def _cmd_slocc_eq(args) -> int:
    a, b = load_state(args.state_a), load_state(args.state_b)
    eq = slocc.slocc_equivalent(a, b, args.tol)
    _emit(("equivalent" if eq else "inequivalent") + "\n", args.output)
    return EXIT_OK


def _cmd_search(args) -> int:
    if args.n_max > 500 and not args.full_range:
        raise InputError("N beyond 500 requires --full-range")
    if args.n_max > 100 and not args.full_range:
        sys.stderr.write(
            "note: scans beyond N=100 can take long; pass --full-range to silence\n"
        )
    threads = args.threads
    records = search.scan(args.order, range(1, args.n_max + 1), threads=threads)
    lines = [json.dumps(r.to_json_dict(), sort_keys=True) for r in records]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_gl(args) -> int:
    t = args.order
    n_qubits = args.qubits if args.qubits else t * (t + 1) * (t + 2) // 6
    if args.symmetric:
        result = search.gauss_legendre_symmetric(t, n_qubits)
    else:
        result = search.gauss_legendre_construct(t, n_qubits)
    if isinstance(result, search.GLFailure):
        sys.stderr.write(f"construction failed: {result.reason}\n")
        return EXIT_INFEASIBLE
    _emit(_dump_json(state_to_dict(result)) + "\n", args.output)
    return EXIT_OK


def _cmd_family(args) -> int:
    params = {}
    if args.qubits is not None:
        params["n_qubits"] = args.qubits
    if args.m is not None:
        params["m"] = args.m
    state = search.family_state(args.name, **params)
    _emit(_dump_json(state_to_dict(state)) + "\n", args.output)
    return EXIT_OK


def _cmd_husimi(args) -> int:
    state = load_state(args.state)
    grid = sphere.husimi_grid(state, args.n_theta, args.n_phi)
    lines = ["theta,phi,Q"]
    for i, theta in enumerate(grid.thetas):
        for j, phi in enumerate(grid.phis):
            lines.append(f"{theta:.17g},{phi:.17g},{grid.values[i, j]:.17g}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_multipoles(args) -> int:
    state = load_state(args.state)
    table = multipole_coeffs(state, args.lmax)
    payload = {
        "lmax": table.lmax,
        "coefficients": {
            f"{ell},{m}": [val.real, val.imag]
            for (ell, m), val in sorted(table.coeffs.items())
        },
    }
    _emit(_dump_json(payload) + "\n", args.output)
    return EXIT_OK


def _cmd_symmetry(args) -> int:
    state = load_state(args.state)
    config = majorana.majorana_points(state)
    report = majorana.detect_symmetry(config, max(args.tol, 1e-9))
    payload = report.to_dict()
    payload["canonical_label"] = majorana.canonical_group_form(state, args.tol)
    _emit(_dump_json(payload) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aclab",
        description="Anticoherent symmetric-state toolbox",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--output", help="write output to a file instead of stdout")
    common.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("ACLAB_THREADS", "1")),
        help="worker processes for scans (env ACLAB_THREADS overrides)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("check", help="order of anticoherence of a state file")
    p.add_argument("state")
    p.add_argument("--order", type=int, help="test this order instead of searching")
    p.set_defaults(func=_cmd_check)

    p = add_parser("roots", help="Majorana points of a state")
    p.add_argument("state")
    p.set_defaults(func=_cmd_roots)

    p = add_parser("from-points", help="state from a Majorana point file")
    p.add_argument("points")
    p.set_defaults(func=_cmd_from_points)

    p = add_parser("slocc-rep", help="balanced SLOCC representative")
    p.add_argument("state")
    p.set_defaults(func=_cmd_slocc_rep)

    p = add_parser("slocc-eq", help="decide SLOCC equivalence of two states")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.set_defaults(func=_cmd_slocc_eq)

    p = add_parser("search", help="scan qubit numbers for cyclic anticoherent states")
    p.add_argument("order", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--full-range", action="store_true", help="allow the slow full range")
    p.set_defaults(func=_cmd_search)

    p = add_parser("gl", help="quadrature-node construction at order t")
    p.add_argument("order", type=int)
    p.add_argument("qubits", type=int, nargs="?", help="qubit number (default t(t+1)(t+2)/6)")
    p.add_argument("--symmetric", action="store_true", help="mirrored variant (even t)")
    p.set_defaults(func=_cmd_gl)

    p = add_parser("family", help="named closed-form state families")
    p.add_argument("name", choices=sorted(search.FAMILY_NAMES))
    p.add_argument("--qubits", type=int)
    p.add_argument("--m", type=int)
    p.set_defaults(func=_cmd_family)

    p = add_parser("husimi", help="Husimi function on a quadrature grid (CSV)")
    p.add_argument("state")
    p.add_argument("n_theta", type=int)
    p.add_argument("n_phi", type=int)
    p.set_defaults(func=_cmd_husimi)

    p = add_parser("multipoles", help="state multipole coefficients")
    p.add_argument("state")
    p.add_argument("lmax", type=int)
    p.set_defaults(func=_cmd_multipoles)

    p = add_parser("symmetry", help="point-group detection report")
    p.add_argument("state")
    p.set_defaults(func=_cmd_symmetry)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (IndexError, ValueError, BadShapeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except NoRepresentativeError as exc:
        sys.stderr.write(f"no representative: {exc}\n")
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except AclabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
