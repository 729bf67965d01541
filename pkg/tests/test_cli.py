import json

import jsonschema
import pytest

from conicbundle.cli import main
from conicbundle.reference import E6_SEXTIC, F13_CENTER, F13_CUBIC, F13_RESIDUAL
from conicbundle.report import SCHEMA, Check, Report, strip_timing


def run(capsys, *argv):
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert code == (0 if doc["overall"] == "pass" else 1)
    return doc, out


def checks(doc):
    return {c["name"]: c for c in doc["checks"]}


@pytest.fixture(scope="module")
def paper_run():
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["--json", "verify", "paper"])
    return code, json.loads(buf.getvalue())


def test_verify_paper_default(paper_run):
    code, doc = paper_run
    jsonschema.validate(doc, SCHEMA)
    assert code == 0 and doc["overall"] == "pass"
    assert len(doc["checks"]) >= 12
    skipped = [c for c in doc["checks"] if c["status"] == "skip"]
    assert all(c["detail"]["reason"] for c in skipped)


def test_verify_paper_order(paper_run):
    _, doc = paper_run
    names = [c["name"] for c in doc["checks"]]
    order = ["f13-residual-points", "f13-nodal-cubic", "f13-collinearity", "satellite-batch",
             "e6-certificate", "odd-intersection", "weyl-order", "rho-image", "h1-subgroups",
             "example-conic", "chatelet"]
    assert [n for n in names if n in order] == order


def test_verify_paper_corrupted(capsys):
    doc, _ = run(capsys, "verify", "paper", "--corrupt", "chart-transition")
    assert doc["overall"] == "fail"
    failed = [c["name"] for c in doc["checks"] if c["status"] == "fail"]
    assert failed == ["chart-transition"]


def test_embed_f13(capsys):
    doc, _ = run(capsys, "embed", "--field", "F13", "--cubic", F13_CUBIC, "--center", F13_CENTER)
    assert doc["overall"] == "pass"
    tri = checks(doc)["trisection"]["detail"]
    assert {p["residual"] for p in tri["pairs"]} == set(F13_RESIDUAL)
    assert checks(doc)["embedding"]["detail"]["collinear"]


def test_embed_center_on_cubic(capsys):
    doc, _ = run(capsys, "embed", "--field", "F13", "--cubic", "x^3 + y^3 + z^3",
                 "--center", "1:12:0")
    assert doc["overall"] == "fail"
    assert doc["checks"][0]["detail"]["hypothesis"] == "p in C"


def test_embed_rationality_error(capsys):
    doc, _ = run(capsys, "embed", "--field", "Q", "--cubic", "x^3 + y^3 + z^3 + x*y*z",
                 "--center", "1:2:3")
    detail = doc["checks"][0]["detail"]
    assert detail["hypothesis"] == "rationality" and detail["degree"] > 1


def test_bad_input_is_reported(capsys):
    doc, _ = run(capsys, "embed", "--field", "F4", "--cubic", "x^3", "--center", "1:0:0")
    assert doc["overall"] == "fail" and doc["checks"][0]["name"] == "input"


def test_search_deterministic(capsys):
    _, a = run(capsys, "search", "--p", "13", "--budget", "1000", "--seed", "1")
    _, b = run(capsys, "search", "--p", "13", "--budget", "1000", "--seed", "1", "--workers", "2")
    assert strip_timing(a) == strip_timing(b)
    doc = json.loads(a)
    assert checks(doc)["certificates-verified"]["status"] == "pass"


def test_analyze_sextic(capsys):
    doc, _ = run(capsys, "analyze", "--field", "Q", "--poly", E6_SEXTIC)
    pts = checks(doc)["singular-points"]["detail"]["points"]
    e6 = [p for p in pts if p["point"] == "0:0:1"]
    assert e6 and e6[0]["label"] == "E6" and e6[0]["milnor"] == 6
    assert checks(doc)["tjurina-total"]["detail"]["tjurina_total"] == 10


def test_cohomology_command(capsys):
    doc, _ = run(capsys, "cohomology", "--gens", "(23)c1c2c3c4,(34)c1c2c3c4")
    g, h = checks(doc)["group"]["detail"], checks(doc)["h1"]["detail"]
    assert g["order"] == 6 and not g["abelian"]
    assert h["elementary_divisors"] == []


def test_chatelet_command(capsys):
    doc, _ = run(capsys, "chatelet", "--field", "Q", "--cubic", "x^3 - 2")
    assert checks(doc)["chatelet"]["detail"]["a"] == "-108"
    doc, _ = run(capsys, "chatelet", "--field", "Q", "--cubic", "x^3 - x")
    assert doc["overall"] == "fail"


def test_text_and_quiet_modes(capsys):
    assert main(["chatelet", "--field", "Q", "--cubic", "x^3 - 2"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("PASS  chatelet")
    main(["--quiet", "chatelet", "--field", "Q", "--cubic", "x^3 - 2"])
    assert capsys.readouterr().out.strip() == "chatelet: PASS (1 passed, 0 failed, 0 skipped)"


def test_output_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    main(["--output", str(path), "chatelet", "--field", "Q", "--cubic", "x^3 - 2"])
    capsys.readouterr()
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)


def test_skip_requires_reason():
    with pytest.raises(ValueError):
        Check("x", "skip", {})
    r = Report("demo")
    r.add(Check("a", "skip", {"reason": "bad prime"}))
    assert r.overall == "pass" and r.exit_code == 0
    r.add(Check("b", "fail", {}))
    assert r.overall == "fail" and r.exit_code == 1
