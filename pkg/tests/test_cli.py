"""Tests for the command-line front end."""

import json

import pytest

from src.cli import main


@pytest.fixture
def write_document(tmp_path):
    """Write a document dict to a file and return its path."""
    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)
    return write


def test_demo_bisgaard_json(capsys):
    """Test the Bisgaard demo passes and renders byte-stable JSON."""
    assert main(["demo", "bisgaard", "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["demo", "bisgaard", "--json"]) == 0
    second = capsys.readouterr().out

    assert first == second
    report = json.loads(first)
    assert report["passed"] is True
    assert report["block"]["passed"] is False


def test_demo_shift_summary(capsys):
    """Test the human-readable demo digest."""
    assert main(["demo", "shift"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("shift: PASS")
    assert "congruence-sqrt3" in out
    assert "VIOLATED" not in out
    assert "y^m: 1, 1/2, 1/4, 1/8, 1/16" in out


def test_unknown_demo(capsys):
    """Test that an unknown demo is an input error."""
    assert main(["demo", "nosuch"]) == 2
    assert "error:" in capsys.readouterr().err

    assert main(["demo", "nosuch", "--json"]) == 2
    assert json.loads(capsys.readouterr().out)["type"] == "DemoError"


def test_missing_command():
    """Test argparse usage errors."""
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_canon(capsys, write_document, negation_document):
    """Test canon prints Q_beta(E_i) lines."""
    path = write_document("negation.json", negation_document)
    assert main(["canon", path]) == 0
    assert "Q[0](E1) = [-1]*1" in capsys.readouterr().out


def test_apply(capsys, write_document, negation_document, square_document):
    """Test apply through the canonical form."""
    op = write_document("negation.json", negation_document)
    poly = write_document("square.json", square_document)
    assert main(["apply", op, poly, "--canonical", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["polynomial"]["terms"][0]["coeff"]["re"] == [["-1"]]


def test_moment_check_exit_codes(capsys, write_document, bisgaard_document):
    """Test exit 1 for the block test and 0 for the local test on the Bisgaard head."""
    path = write_document("bisgaard.json", bisgaard_document)

    assert main(["moment-check", path, "--order", "1"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("moment-check: FAIL")
    assert "failingMatrix: moment" in out

    assert main(["moment-check", path, "--order", "1", "--mode", "local", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "compression"


def test_moment_check_region_flag(capsys, write_document, sequence_document):
    """Test a region flag on the Dirac sequence."""
    path = write_document("dirac.json", sequence_document)
    assert main(["moment-check", path, "--region", "box:0:1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["region"] == "[0, 1]"

    assert main(["moment-check", path, "--region", "box:1:2"]) == 1


def test_preserve_check(capsys, write_document, negation_document):
    """Test preserve-check flags negation."""
    path = write_document("negation.json", negation_document)
    assert main(["preserve-check", path, "--region", "box:-1:1", "--trials", "2", "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["trials"] == 2
    assert report["evidence"] == "certificate"


def test_borcea(capsys, write_document, family_document):
    """Test borcea on a family with an explicit grid size."""
    path = write_document("family.json", family_document)
    assert main(["borcea", path, "--max-deg", "2", "--order", "1", "--grid", "3", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["cellsTested"] == 18
    assert report["passed"] is True


def test_missing_file(capsys, tmp_path):
    """Test a path that does not exist."""
    assert main(["canon", str(tmp_path / "absent.json"), "--json"]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["field"] == "document"


def test_bad_region(capsys, write_document, sequence_document):
    """Test a malformed region flag."""
    path = write_document("dirac.json", sequence_document)
    assert main(["moment-check", path, "--region", "box:0"]) == 2
    assert "LO:HI" in capsys.readouterr().err


def test_moment_check_probes_flag(capsys, write_document, bisgaard_document):
    """Test caller-supplied probe vectors for the local test."""
    path = write_document("bisgaard.json", bisgaard_document)
    assert main(["moment-check", path, "--order", "1", "--mode", "local", "--probes", "1,1;1,0@0,1", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["matrices"]) == 2

    assert main(["moment-check", path, "--mode", "local", "--probes", "1,1@0"]) == 2
    assert "imaginary parts" in capsys.readouterr().err


def test_document_tolerance_is_used(capsys, write_document):
    """Test that tolerances.psd in the document sets the approx PSD tolerance."""
    document = {
        "version": "1",
        "kind": "sequence",
        "backend": "approx",
        "sequence": {
            "nvars": 1,
            "dim": 1,
            "order": 2,
            "entries": [
                {"exponents": [0], "matrix": {"re": [["1"]]}},
                {"exponents": [1], "matrix": {"re": [["0"]]}},
                {"exponents": [2], "matrix": {"re": [["-1/1000000"]]}},
            ],
        },
    }
    assert main(["moment-check", write_document("strict.json", document), "--json"]) == 1
    capsys.readouterr()

    document["tolerances"] = {"psd": 1e-3}
    path = write_document("loose.json", document)
    assert main(["moment-check", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["matrices"][0]["tolerance"] == 0.001

    assert main(["moment-check", path, "--tol", "1e-9", "--json"]) == 1


def test_entry_beyond_double_range(capsys, write_document, sequence_document):
    """Test that an exact entry too large for a double is an input error on the approx backend."""
    sequence_document["sequence"]["entries"][2]["matrix"]["re"] = [[str(2**5040)]]
    path = write_document("huge.json", sequence_document)
    assert main(["moment-check", path, "--json"]) == 0
    capsys.readouterr()

    assert main(["moment-check", path, "--backend", "approx", "--json"]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["type"] == "ScalarRangeError"
    assert "exact backend" in report["error"]
