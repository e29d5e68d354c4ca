import json
import math
from importlib import resources

import numpy as np
import pytest

from aclab.cli import main

STATES = resources.files("aclab") / "states"


def corpus_path(name: str) -> str:
    return str(STATES / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_bell_order(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("bell"))
        assert code == 0
        assert out.strip() == "order 1"

    def test_icosahedron_order(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("icosahedron"))
        assert code == 0
        assert out.strip() == "order 5"

    def test_explicit_order_pass(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("zimba8"), "--order", "3")
        assert code == 0 and "PASS" in out

    def test_explicit_order_fail(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("zimba6"), "--order", "3")
        assert code == 0 and "FAIL" in out

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "check", corpus_path("octahedron"), "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["order"] == 3
        assert set(payload["per_characterization"]) == {
            "operator", "dicke", "reduced", "multipole",
        }

    def test_malformed_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2 and "input error" in err

    def test_empty_file(self, capsys, tmp_path):
        bad = tmp_path / "empty.json"
        bad.write_text("")
        assert run(capsys, "check", str(bad))[0] == 2

    def test_zero_state(self, capsys, tmp_path):
        bad = tmp_path / "zero.json"
        bad.write_text(json.dumps({"n_qubits": 1, "dicke": [[0, 0], [0, 0]]}))
        assert run(capsys, "check", str(bad))[0] == 2


class TestRootsRoundtrip:
    def test_ghz_equatorial_triangle(self, capsys):
        code, out, _ = run(capsys, "roots", corpus_path("ghz"))
        assert code == 0
        rows = [line.split() for line in out.strip().splitlines()]
        phis = sorted(float(phi) for _, phi, _ in rows)
        np.testing.assert_allclose(
            phis, [0.0, 2 * math.pi / 3, 4 * math.pi / 3], atol=1e-12
        )

    def test_dicke_pole_multiplicities(self, capsys, tmp_path):
        state_file = tmp_path / "d42.json"
        state_file.write_text(
            json.dumps({"n_qubits": 4, "dicke": [[0, 0], [0, 0], [1, 0], [0, 0], [0, 0]]})
        )
        code, out, _ = run(capsys, "roots", str(state_file))
        assert code == 0
        lines = out.strip().splitlines()
        assert f"{math.pi:.17g} 0 2" in lines
        assert "0 0 2" in lines

    def test_roundtrip_via_files(self, capsys, tmp_path):
        points = tmp_path / "pts.txt"
        code, out, _ = run(capsys, "roots", corpus_path("tetrahedron"), "--output", str(points))
        assert code == 0
        code, out, _ = run(capsys, "from-points", str(points))
        assert code == 0
        recovered = np.array([complex(re, im) for re, im in json.loads(out)["dicke"]])
        expect = np.zeros(5)
        expect[0], expect[3] = 1 / math.sqrt(3), math.sqrt(2 / 3)
        phase = recovered[0] / abs(recovered[0])
        np.testing.assert_allclose(recovered / phase, expect, atol=1e-8)

    def test_malformed_points(self, capsys, tmp_path):
        pts = tmp_path / "pts.txt"
        pts.write_text("1.0 2.0\n")
        assert run(capsys, "from-points", str(pts))[0] == 2


class TestSloccCommands:
    def test_representative(self, capsys, tmp_path):
        state_file = tmp_path / "in.json"
        state_file.write_text(
            json.dumps({"n_qubits": 5, "dicke": [[0, 0], [0, 0], [1, 0], [0, 0], [0.8, 0], [0, 0]]})
        )
        code, out, _ = run(capsys, "slocc-rep", str(state_file))
        assert code == 0
        payload = json.loads(out)
        amps = [abs(complex(re, im)) for re, im in payload["dicke"]]
        np.testing.assert_allclose(
            amps, [0, 0, math.sqrt(3) / 2, 0, 0.5, 0], atol=1e-10
        )
        assert payload["ilo_parameter"] == pytest.approx(1 / (math.sqrt(3) * 0.8))

    def test_no_representative_exit_code(self, capsys, tmp_path):
        coherent = tmp_path / "coh.json"
        coherent.write_text(json.dumps({"n_qubits": 3, "dicke": [[1, 0], [0, 0], [0, 0], [0, 0]]}))
        code, _, err = run(capsys, "slocc-rep", str(coherent))
        assert code == 4 and "no representative" in err

    def test_equivalence(self, capsys):
        code, out, _ = run(
            capsys, "slocc-eq", corpus_path("octahedron"), corpus_path("zimba6")
        )
        assert code == 0 and out.strip() == "inequivalent"


class TestSearchCommand:
    def test_scan_records(self, capsys):
        code, out, _ = run(capsys, "search", "2", "6")
        assert code == 0
        records = [json.loads(line) for line in out.strip().splitlines()]
        assert [r["N"] for r in records] == list(range(1, 7))
        first = next(r for r in records if r["feasible"])
        assert first["N"] == 4 and first["x"] == ["1/3", "2/3"]

    def test_deterministic_output(self, capsys):
        out1 = run(capsys, "search", "3", "8")[1]
        out2 = run(capsys, "search", "3", "8")[1]
        assert out1 == out2


class TestGLCommand:
    def test_default_qubits_symmetric(self, capsys, tmp_path):
        out_file = tmp_path / "gl10.json"
        code, _, _ = run(capsys, "gl", "10", "--symmetric", "--output", str(out_file))
        assert code == 0
        code, out, _ = run(capsys, "check", str(out_file))
        assert code == 0 and out.strip() == "order 10"

    def test_failure_maps_to_exit_4(self, capsys):
        code, _, err = run(capsys, "gl", "3", "10")
        assert code == 4 and "failed" in err


class TestFamilyCommand:
    def test_d7d42_coefficients(self, capsys):
        code, out, _ = run(capsys, "family", "d7d42")
        assert code == 0
        amps = [complex(re, im) for re, im in json.loads(out)["dicke"]]
        assert amps[0].real == pytest.approx(math.sqrt(7062) / 343)
        assert amps[42].real == pytest.approx(-math.sqrt(7062) / 343)
        assert amps[21].real == pytest.approx(math.sqrt(36777) / 343)

    def test_bad_family_parameters(self, capsys):
        code, _, err = run(capsys, "family", "zimba", "--qubits", "5")
        assert code == 2


class TestGridCommands:
    def test_husimi_csv(self, capsys):
        code, out, _ = run(capsys, "husimi", corpus_path("bell"), "4", "8")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,phi,Q"
        assert len(lines) == 1 + 4 * 8
        values = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(0 <= v <= 1 for v in values)

    def test_multipoles_json(self, capsys):
        code, out, _ = run(capsys, "multipoles", corpus_path("bell"), "1")
        payload = json.loads(out)
        assert code == 0
        assert payload["coefficients"]["0,0"][0] == pytest.approx(1 / math.sqrt(3))
        assert abs(payload["coefficients"]["1,0"][0]) < 1e-12

    def test_symmetry_report(self, capsys):
        code, out, _ = run(capsys, "symmetry", corpus_path("d7d42"))
        payload = json.loads(out)
        assert code == 0
        assert payload["group_label"] == "D_7d"
        assert payload["canonical_label"] == "D_7d"
        assert payload["max_cyclic"] == 7

    def test_byte_identical_reruns(self, capsys):
        a = run(capsys, "symmetry", corpus_path("octahedron"))[1]
        b = run(capsys, "symmetry", corpus_path("octahedron"))[1]
        assert a == b
