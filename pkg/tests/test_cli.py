import json
import subprocess
import sys

import pytest

from gpdz2 import cli
from gpdz2.config import get_budget, set_budget
from gpdz2.equivariant import s_i
from gpdz2.model import is_injective_fibration
from gpdz2.serialize import dumps, loads


def run(*argv):
    code, rep, _ = cli.run(list(argv))
    return code, rep


@pytest.fixture
def tight_budget():
    prev = set_budget(get_budget().with_(morphisms=100))
    yield
    set_budget(prev)


class TestExitCodes:
    def test_validate_ok(self):
        code, rep = run("validate", "std:nabla")
        assert code == 0 and rep["kind"] == "ztwo-groupoid" and rep["objects"] == 3

    def test_injective_fibration_fails_with_witness(self):
        code, rep = run("check", "--what", "inj-fibration", "terminal:check_I")
        assert code == 1
        assert rep["witness"]["generator"] == "i_prime"
        assert rep["witness"]["square"]["top"]

    def test_projective_fibration_holds(self):
        assert run("check", "--what", "proj-fibration", "terminal:check_I")[0] == 0

    def test_missing_file_is_invalid(self, tmp_path):
        code, rep = run("validate", str(tmp_path / "nope.json"))
        assert code == 2 and rep["status"] == "invalid"

    def test_object_where_map_expected(self):
        assert run("check", "--what", "weq", "std:nabla")[0] == 2

    def test_unknown_name(self):
        code, rep = run("validate", "std:sphere")
        assert code == 2 and rep["code"] == "UNKNOWN_NAME"

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 1, "kind": "groupoid", "body": {}}')
        code, rep = run("validate", str(path))
        assert code == 2 and rep["code"] == "SCHEMA_VIOLATION"

    def test_pool_exhausted(self):
        code, rep = run("classify", "--pool", "1", "universe:2:p")
        assert code == 3 and rep["code"] == "POOL_EXHAUSTED"
        assert (rep["fiber_size"], rep["pool"]) == (2, 1)

    def test_budget_exhausted(self, tight_budget):
        code, rep = run("path-object", "universe:2:U->1")
        assert code == 3 and rep["code"] == "BUDGET_EXCEEDED"

    def test_not_a_covering(self):
        code, rep = run("classify", "--pool", "2", "terminal:nabla")
        assert code == 1 and rep["code"] == "NOT_A_COVERING"

    def test_factorize_non_fibrant_domain(self):
        code, rep = run("factorize", "terminal:check_I")
        assert code == 1 and rep["code"] == "DOMAIN_NOT_FIBRANT"


class TestCommands:
    def test_check_every_property(self):
        for what, expected in (("cofibration", 1), ("weq", 1), ("acyclic-cofibration", 1), ("proj-fibration", 0)):
            assert run("check", "--what", what, "terminal:s_one")[0] == expected, what
        for what in ("cofibration", "weq", "acyclic-cofibration"):
            assert run("check", "--what", what, "std:i_prime")[0] == 0, what

    def test_lift_roundtrip(self, tmp_path):
        path = tmp_path / "sq.json"
        path.write_text(dumps(is_injective_fibration(s_i()).square))
        code, rep = run("lift", str(path))
        assert code == 1 and rep["holds"] is False

    def test_decompose(self):
        code, rep = run("decompose", "std:i_prime")
        assert code == 0 and [s["cell"] for s in rep["stages"]] == ["i_prime"]

    def test_path_object(self):
        code, rep = run("path-object", "terminal:nabla")
        assert code == 0 and rep["total"]["objects"] == 9

    def test_pi_and_pullback(self):
        code, rep = run("pi", "terminal:s_one", "universe:2:p")
        assert code == 2 and rep["code"] == "NOT_COMPOSABLE"
        code, rep = run("pullback", "universe:2:p", "terminal:nabla")
        assert code == 2 and rep["code"] == "NOT_COMPOSABLE"
        code, rep = run("pullback", "terminal:nabla", "terminal:s_one")
        assert code == 0 and rep["object"] == {"objects": 6, "morphisms": 18}

    def test_universe(self):
        code, rep = run("universe", "--pool", "2")
        assert code == 0
        assert rep["U"] == {"objects": 7, "morphisms": 25}
        assert rep["univalence"]["conclusion"]
        assert {r["status"] for r in rep["axioms"]} <= {"pass", "pool-exhausted"}

    def test_classify(self):
        code, rep = run("classify", "--pool", "2", "terminal:s_one")
        assert code == 0 and list(rep["chi"].values()) == ["[[0,1],[0,1],[1,0]]"]

    def test_report_carries_budget(self):
        _, rep = run("validate", "std:one")
        assert rep["budget"]["search_nodes"] == get_budget().search_nodes


def test_export_then_validate(tmp_path, capsys):
    assert cli.main(["export", "universe:2:p"]) == 0
    text = capsys.readouterr().out
    path = tmp_path / "p.json"
    path.write_text(text)
    assert loads(text).source.carrier.n_obj == 8
    assert cli.main(["validate", str(path)]) == 0


def test_json_output(capsys):
    assert cli.main(["--json", "check", "--what", "inj-fibration", "terminal:check_I"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "fails" and rep["property"] == "inj-fibration"


def test_exit_code_depends_only_on_report():
    assert cli.exit_code({"status": "invalid", "holds": True}) == 2
    assert cli.exit_code({"status": "exhausted"}) == 3
    assert cli.exit_code({"holds": True}) == 0
    assert cli.exit_code({"holds": False}) == 1


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "gpdz2.cli", "validate", "std:check_I"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "holds: True" in out.stdout
