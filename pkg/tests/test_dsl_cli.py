import json
import random
import string
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsl_corpus import LAPLACE, TRICOMI, WAVE, corpus

from spencerlab.cli import build_parser, dispatch, main
from spencerlab.dsl import parse_pde_dsl, print_document
from spencerlab.errors import ParseError
from spencerlab.reports import ReportDocument, emit_report

# -- parsing ------------------------------------------------------------------------


def test_laplace_parses():
    doc = parse_pde_dsl(LAPLACE)
    sys_ = doc.systems["laplace"]
    assert sys_.indep_vars == ("x", "y")
    assert sys_.order == 2
    assert len(sys_.equations) == 1


def test_wave_parses():
    doc = parse_pde_dsl(WAVE)
    assert doc.systems["wave"].order == 2


def test_nonlinear_rejected_with_diagnostic():
    bad = "system nl { vars x; unknowns u; eq: u*u = 0; }"
    with pytest.raises(ParseError) as err:
        parse_pde_dsl(bad)
    assert "non-linear" in str(err.value)
    assert err.value.line == 1


def test_jet_product_rejected():
    bad = "system nl { vars x; unknowns u; eq: D[x](u)*D[x](u) = 0; }"
    with pytest.raises(ParseError) as err:
        parse_pde_dsl(bad)
    assert "non-linear" in str(err.value)


def test_unknown_variable_diagnostic():
    bad = "system s { vars x; unknowns u; eq: D[z](u) = 0; }"
    with pytest.raises(ParseError) as err:
        parse_pde_dsl(bad)
    assert "z" in str(err.value)
    assert err.value.expected  # carries an expected set


def test_order_zero_rejected():
    bad = "system s { vars x; unknowns u; eq: u = 0; }"
    with pytest.raises(ParseError) as err:
        parse_pde_dsl(bad)
    assert "order-0" in str(err.value)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_pde_dsl("system s {\n  vars x %\n}")
    assert err.value.line == 2


def test_inhomogeneous_rejected():
    bad = "system s { vars x; unknowns u; eq: D[x](u) + 1 = 0; }"
    with pytest.raises(ParseError):
        parse_pde_dsl(bad)


# -- round trips ----------------------------------------------------------------------


@pytest.mark.parametrize("idx", range(50))
def test_corpus_round_trip(idx):
    text = corpus()[idx]
    doc = parse_pde_dsl(text)
    printed = print_document(doc)
    doc2 = parse_pde_dsl(printed)
    assert doc2 == doc
    assert print_document(doc2) == printed


def test_corpus_has_fifty_cases():
    assert len(corpus()) == 50


# -- fuzzing -----------------------------------------------------------------------------


def test_fuzz_parser_only_diagnostics():
    rng = random.Random(20260809)
    alphabet = string.ascii_letters + string.digits + "{}()[];:,=+-*/^<>#. \n\t"
    seeds = corpus()
    crashes = 0
    for trial in range(10_000):
        if trial % 3 == 0:
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 80)))
        else:
            base = list(rng.choice(seeds))
            for _ in range(rng.randint(1, 6)):
                pos = rng.randrange(max(1, len(base)))
                op = rng.random()
                if op < 0.4 and base:
                    base[pos] = rng.choice(alphabet)
                elif op < 0.7 and base:
                    del base[pos : pos + rng.randint(1, 3)]
                else:
                    base.insert(pos, rng.choice(alphabet))
            text = "".join(base)
        try:
            parse_pde_dsl(text)
        except ParseError:
            pass
        except Exception:  # noqa: BLE001 - the whole point of the fuzz test
            crashes += 1
    assert crashes == 0


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=60))
def test_fuzz_hypothesis_unicode(text):
    try:
        parse_pde_dsl(text)
    except ParseError:
        pass


# -- reports -----------------------------------------------------------------------------


def test_reports_are_byte_identical():
    report = ReportDocument(
        command="det",
        arguments={"model": "circle", "length": 6.283185307179586},
        payload={"det": 39.47841760435743, "ratio": __import__("fractions").Fraction(1, 3)},
        source_hash="",
        seed=0,
    )
    a = emit_report(report, "json")
    b = emit_report(report, "json")
    assert a == b
    data = json.loads(a)
    assert data["result"]["ratio"] == "1/3"


def test_text_format_is_deterministic():
    report = ReportDocument("grr", {"model": "P1"}, {"index": 4}, "", 0)
    assert emit_report(report, "text") == emit_report(report, "text")
    assert b"index = 4" in emit_report(report, "text")


# -- CLI dispatch ---------------------------------------------------------------------------


def run_cli(tmp_path, *argv, expect=0):
    rc = main(list(argv))
    assert rc == expect
    return rc


def test_cli_grr_p1(capsys, tmp_path):
    assert main(["grr", "--model", "P1", "--twist", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["index"] == 4


def test_cli_det_circle(capsys):
    assert main(["det", "--model", "circle", "--length", "6.283185307179586"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["result"]["det"] - 39.4784176043574) < 1e-6


def test_cli_classify_hyperbolic(capsys, tmp_path):
    pde = tmp_path / "wave.pde"
    pde.write_text(WAVE)
    assert main([
        "classify", str(pde), "--mode", "hyperbolic", "--direction", "1,0",
    ]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["hyperbolic"] is True


def test_cli_classify_labels(capsys, tmp_path):
    pde = tmp_path / "tricomi.pde"
    pde.write_text(TRICOMI)
    assert main(["classify", str(pde), "--direction", "0,1", "--grid", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["samples"] > 0


def test_cli_parse_error_exit_code(capsys, tmp_path):
    pde = tmp_path / "bad.pde"
    pde.write_text("system s { vars x; unknowns u; eq: u*u = 0; }")
    assert main(["symbol", str(pde)]) == 2


def test_cli_precondition_exit_code(capsys, tmp_path):
    pde = tmp_path / "heat.pde"
    pde.write_text("system heat { vars t, x; unknowns u; "
                   "eq: D[t](u) - D[x,x](u) = 0; }")
    assert main(["index", str(pde), "--model", "P1"]) == 3


def test_cli_determinism(capsys, tmp_path):
    pde = tmp_path / "laplace.pde"
    pde.write_text(LAPLACE)
    assert main(["involutivity", str(pde), "--bound", "2"]) == 0
    out1 = capsys.readouterr().out
    assert main(["involutivity", str(pde), "--bound", "2"]) == 0
    out2 = capsys.readouterr().out
    assert out1 == out2


def test_cli_torsion_circle(capsys):
    assert main([
        "torsion", "--model", "circle", "--length", "2.0",
        "--convention", "exp_full",
    ]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["result"]["torsion"] - 0.25) < 1e-9


def test_cli_boundary(capsys):
    assert main(["boundary-index", "--interior", "0:1", "--boundary", "0:2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["relative_index"] == -1


def test_cli_quillen(capsys):
    assert main(["quillen", "--l2", "2.0", "--dets", "0:1.0,1:1.0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["quillen_norm"] == 2.0


def test_cli_crosscheck(capsys):
    assert main(["crosscheck", "--length", "6.283185307179586", "--n", "64"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["all_within_bound"] is True


def test_cli_kunneth(capsys, tmp_path):
    pde = tmp_path / "wave.pde"
    pde.write_text(WAVE)
    assert main(["kunneth", str(pde), "--copies", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["factorization"]["all_passed"] is True


def test_cli_entry_point_subprocess(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "spencerlab.cli", "grr", "--model", "P2", "--twist", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["index"] == 6


def test_cli_index_elliptic_system(capsys, tmp_path):
    pde = tmp_path / "cr.pde"
    pde.write_text(
        "system cr { vars x, y; unknowns u; "
        "eq: 1/2*D[x](u) + 1/2*i*D[y](u) = 0; }"
    )
    assert main(["index", str(pde), "--model", "P1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["index"] == 1
    assert data["result"]["method"] == "as_specialization"


def test_cli_bcov_reports_both_torsions(capsys):
    assert main(["bcov", "--tau", "0,1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["result"]["t_bcov"] - data["result"]["det_prime"]) < 1e-6
    assert abs(data["result"]["de_rham_torsion"] - 1.0) < 1e-9


def test_reports_validate_against_schema(capsys, tmp_path):
    import jsonschema

    with open("docs/report-schema.json", "r", encoding="utf-8") as fh:
        schema = json.load(fh)
    pde = tmp_path / "laplace.pde"
    pde.write_text(LAPLACE)
    invocations = [
        ["grr", "--model", "P1", "--twist", "3"],
        ["det", "--model", "circle", "--length", "6.283185307179586"],
        ["symbol", str(pde)],
        ["poincare", str(pde), "--order", "4"],
        ["quillen", "--l2", "1.0", "--dets", "1:2.0"],
        ["bcov", "--tau", "0,1"],
        ["crosscheck", "--length", "6.28", "--n", "16"],
    ]
    for argv in invocations:
        assert main(argv) == 0
        data = json.loads(capsys.readouterr().out)
        jsonschema.validate(data, schema)


def test_cli_det_from_dsl_spectrum(capsys, tmp_path):
    pde = tmp_path / "spec.pde"
    pde.write_text("spectrum circ { kind circle; length 6.283185307179586; }")
    assert main(["det", str(pde), "--spectrum", "circ"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(data["result"]["det"] - 39.4784176043574) < 1e-6
    assert data["input_hash"]


def test_thread_cap_does_not_change_results(monkeypatch, tmp_path):
    from fractions import Fraction

    from spencerlab.microlocal import CovectorSample, Region, classify_mixed
    from spencerlab.systems import tricomi_system

    grid = [
        CovectorSample((Fraction(x), Fraction(y, 2)), (Fraction(1), Fraction(1)))
        for x in range(3)
        for y in (-2, 0, 2)
    ]
    monkeypatch.setenv("SPENCER_LAB_THREADS", "1")
    seq = classify_mixed(tricomi_system(), Region.everywhere(), grid,
                         directions=[(0, 1)])
    monkeypatch.setenv("SPENCER_LAB_THREADS", "4")
    par = classify_mixed(tricomi_system(), Region.everywhere(), grid,
                         directions=[(0, 1)])
    assert seq.labels == par.labels
    assert seq.strata == par.strata


def test_cli_remaining_commands_smoke(capsys, tmp_path):
    pde = tmp_path / "doc.pde"
    pde.write_text(LAPLACE + "\nsystem grad { vars x, y; unknowns u; "
                   "eq: D[x](u) = 0; eq: D[y](u) = 0; }\n")
    assert main(["spencer", str(pde), "--system", "laplace", "--order", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["symbol_dimensions"]["2"] == 2
    assert main(["prolong", str(pde), "--system", "laplace", "--count", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["dimensions"] == [2, 2, 2]
    assert main(["finite-type", str(pde), "--system", "grad", "--connection"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["finite_type"] is True
    assert data["result"]["flat_rank"] == 1
    assert main(["restrict", str(pde), "--system", "laplace",
                 "--subspace", "1,0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["noncharacteristic"] is True
    assert main(["symbol", str(pde), "--system", "grad", "--order", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["dimension"] == 0
    assert main(["kunneth", str(pde), "--system", "laplace",
                 "--other", "grad"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["kunneth_ok"] is True
    assert main(["classify", str(pde), "--system", "laplace",
                 "--mode", "elliptic"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["elliptic"] is True
