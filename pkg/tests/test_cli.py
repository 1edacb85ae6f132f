import io
import json
import subprocess
import sys

import pytest

from builders import FIXTURES
from logsurf.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    assert err == ""
    return json.loads(out)


def test_classify_cusp_full_coefficient():
    r = report("classify", FIXTURES / "cusp_lc1.json")
    assert r["kind"] == "NonLC"
    assert r["nlc"] == ["E3"]


def test_classify_plane():
    assert report("classify", FIXTURES / "p2.json")["kind"] == "KLT"


def test_mmp_reports():
    r = report("mmp", FIXTURES / "bl2p2.json")
    assert r["outcome"] == "MoriFiberSpaceOverCurve"
    assert len(r["trace"]) == 1
    assert r["fiber_class"] == "H - E2"
    r = report("mmp", FIXTURES / "minimal_model.json")
    assert r["outcome"] == "MinimalModel"
    assert r["decomposition"] == {"pullback": "H", "E": {"E1": "1"}}
    assert r["checks"]["zariski"] == "match"
    assert r["checks"]["uniqueness"] is True
    assert r["kappa_via_abundance"] == 2


def test_thin_wrappers():
    r = report("zariski", FIXTURES / "bl1p2.json", "--class", "H + 2E1")
    assert (r["P"], r["N"]) == ("H", {"E1": "2"})
    assert report("lct", FIXTURES / "cusp.json", "--theta", "C=1")["lct"] == "5/6"
    assert report("pullback", FIXTURES / "quadric_cone.json", "--class", "f")["expression"] == "f + 1/2 s"


def test_raw_file_warning_in_report():
    assert report("validate", FIXTURES / "raw_bl1p2.json")["warnings"]


@pytest.mark.parametrize(
    "argv, code",
    [
        (("classify", "bad_gram.json"), 2),
        (("classify", "malformed.json"), 3),
        (("classify", "missing.json"), 3),
        (("mmp", "ambiguous.json"), 4),
        (("zariski", "p2.json"), 5),
        (("lct", "cusp.json", "--theta", "Nope=1"), 3),
        (("zariski", "p2.json", "--class", "H +"), 3),
        (("mmp", "p2.json", "--tiebreak", "sideways"), 3),
    ],
)
def test_exit_codes_and_no_partial_output(argv, code):
    got, out, err = call(argv[0], FIXTURES / argv[1], *argv[2:])
    assert got == code
    assert out == ""
    assert json.loads(err)["error"]


def test_validation_lists_violations():
    _, _, err = call("validate", FIXTURES / "bad_gram.json")
    assert [v["code"] for v in json.loads(err)["violations"]] == ["GramNotSymmetric"]


def test_not_psef_certificate():
    _, _, err = call("zariski", FIXTURES / "p2.json")
    assert json.loads(err)["support"] == ["L"]


def test_trace_mode_is_text():
    code, out, _ = call("mmp", FIXTURES / "bl2p2.json", "--trace")
    assert code == 0
    assert out.startswith("mmp:\n") and "contract E1" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "logsurf", "lct", str(FIXTURES / "cusp.json"), "--theta", "C=1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lct"] == "5/6"
