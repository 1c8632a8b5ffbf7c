import json
import subprocess
import sys

import jsonschema
import pytest

from test_lll import two_qubit_instance
from qlll import cli
from qlll.generate import Check, WorkedExample
from qlll.schemas import (
    COMMAND_SCHEMAS,
    ERROR_SCHEMA,
    INSTANCE_SCHEMA,
    SYMMETRIC_CHECK_SCHEMA,
)
from qlll.serialize import dumps


def run(capsys, *argv):
    """Invoke the CLI in process and validate the output contract."""
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out)
    if "error" in doc:
        jsonschema.validate(doc, ERROR_SCHEMA)
    elif "command" not in doc:
        jsonschema.validate(doc, INSTANCE_SCHEMA)  # gen prints the file itself
    elif doc.get("variant") == "symmetric":
        jsonschema.validate(doc, SYMMETRIC_CHECK_SCHEMA)
    else:
        jsonschema.validate(doc, COMMAND_SCHEMAS[doc["command"]])
    return code, doc


@pytest.fixture(scope="module")
def ref_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "reference.json"
    code = cli.main(["gen", "--kind", "paper-examples", "--seed", "0", "--out", str(path)])
    assert code == 0
    return str(path)


@pytest.fixture(scope="module")
def tensor_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "tensor.json"
    path.write_text(dumps(two_qubit_instance(), x=(0.1, 0.1)) + "\n")
    return str(path)


def ref_doc(ref_file):
    with open(ref_file, "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_prob_state_mode(capsys, ref_file):
    code, doc = run(capsys, "prob", "--instance", ref_file, "--mode", "state",
                    "--seq", "M1=1;M2=0")
    assert code == 0
    assert doc["value"] == pytest.approx(0.25, abs=1e-9)
    assert doc["query"]["seq"][0] == {"measurement": "M1", "in": ["1"]}


def test_prob_test_mode(capsys, ref_file):
    code, doc = run(capsys, "prob", "--instance", ref_file, "--K", "1,2")
    assert code == 0
    assert doc["value"] == pytest.approx(0.25, abs=1e-9)


def test_prob_missing_arguments(capsys, ref_file):
    code, doc = run(capsys, "prob", "--instance", ref_file, "--mode", "state")
    assert code == 2
    assert doc["error"]["type"] == "Validation"


def test_cond_both_modes(capsys, ref_file):
    code, doc = run(capsys, "cond", "--instance", ref_file, "--K", "1", "--L", "2")
    assert code == 0
    assert doc["value"] == pytest.approx(0.5, abs=1e-9)
    code, doc = run(capsys, "cond", "--instance", ref_file, "--mode", "state",
                    "--K", "M1=1", "--L", "M2=0")
    assert code == 0
    assert doc["value"] == pytest.approx(0.5, abs=1e-9)


def test_cond_on_zero_probability_exits_1(capsys, ref_file, tmp_path):
    doc = ref_doc(ref_file)
    doc["events"][0]["in"] = []
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "cond", "--instance", str(path), "--K", "1", "--L", "2")
    assert code == 1
    assert out["error"]["type"] == "ConditionOnZero"


def test_indep(capsys, ref_file):
    code, doc = run(capsys, "indep", "--instance", ref_file, "--i", "2", "--K", "1")
    assert code == 0
    assert doc["independent"] is True
    assert doc["difference"] <= 1e-9
    code, doc = run(capsys, "indep", "--instance", ref_file, "--i", "2", "--K", "1", "--neg")
    assert code == 0
    assert doc["independent"] is True
    assert doc["query"]["negated"] is True


def test_profile(capsys, ref_file):
    code, doc = run(capsys, "profile", "--instance", ref_file)
    assert code == 0
    assert doc["s"] == [0, 1]
    assert doc["d_min"] == 0
    assert doc["nind_table"] == [[2, 1, True]]


def test_profile_fully_undefined_exits_2(capsys, ref_file, tmp_path):
    doc = ref_doc(ref_file)
    doc["events"][0]["in"] = ["0", "1"]  # complete event, complement is empty
    path = tmp_path / "undef.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "profile", "--instance", str(path))
    assert code == 2
    assert out["nind_table"] == [[2, 1, "undefined"]]


def test_check_general_pass_and_hypothesis_failure(capsys, ref_file):
    code, doc = run(capsys, "check", "--instance", ref_file, "--x", "0.6,0.6")
    assert code == 0
    assert doc["ok"] is True
    assert doc["report"]["lhs"] == pytest.approx(0.25, abs=1e-9)
    assert doc["report"]["rhs"] == pytest.approx(0.16, abs=1e-12)

    code, doc = run(capsys, "check", "--instance", ref_file, "--x", "0.001,0.001")
    assert code == 1
    assert doc["ok"] is False
    assert doc["report"]["assumption_ok"] == [False, False]


def test_check_general_reads_x_from_file(capsys, tensor_file):
    code, doc = run(capsys, "check", "--instance", tensor_file)
    assert code == 0
    assert doc["ok"] is True
    assert doc["report"]["lhs"] == pytest.approx(0.96 * 0.91, abs=1e-9)


def test_check_general_without_weights(capsys, ref_file):
    code, doc = run(capsys, "check", "--instance", ref_file)
    assert code == 2
    assert doc["error"]["type"] == "Validation"


def test_check_symmetric(capsys, ref_file, tensor_file):
    code, doc = run(capsys, "check", "--instance", tensor_file, "--variant", "symmetric")
    assert code == 0
    assert doc["report"]["verdict"] == "pass"
    code, doc = run(capsys, "check", "--instance", ref_file, "--variant", "symmetric")
    assert code == 1
    assert doc["report"]["verdict"] == "not-applicable"


def test_check_symmetric_bad_p(capsys, tensor_file):
    code, doc = run(capsys, "check", "--instance", tensor_file, "--variant", "symmetric",
                    "--p", "0.01")
    assert code == 2
    assert doc["error"]["type"] == "BadP"


def test_sample(capsys, ref_file):
    code, doc = run(capsys, "sample", "--instance", ref_file, "--K", "1,2",
                    "--n", "4000", "--seed", "5")
    assert code == 0
    assert doc["exact"] == pytest.approx(0.25, abs=1e-9)
    assert doc["n_samples"] == 4000
    assert doc["discrepancy_sigma"] is not None
    assert doc["discrepancy_sigma"] <= 5.0

    again_code, again = run(capsys, "sample", "--instance", ref_file, "--K", "1,2",
                            "--n", "4000", "--seed", "5")
    assert again == doc

    exact_code, exact_doc = run(capsys, "sample", "--instance", ref_file, "--K", "1,2",
                                "--n", "400", "--seed", "5", "--exact")
    assert exact_code == 0
    assert exact_doc["exact"] == doc["exact"]


def test_sample_defaults_to_assigned_slots(capsys, ref_file):
    code, doc = run(capsys, "sample", "--instance", ref_file, "--n", "500", "--seed", "1")
    assert code == 0
    assert doc["exact"] == pytest.approx(0.25, abs=1e-9)


def test_paper_examples(capsys):
    code, doc = run(capsys, "paper-examples")
    assert code == 0
    assert doc["all_pass"] is True
    assert len(doc["results"]) == 5
    assert sum(len(r["checks"]) for r in doc["results"]) == 13


def test_paper_examples_failure_exits_2(capsys, monkeypatch):
    broken = WorkedExample(
        name="broken",
        description="forced mismatch",
        test=None,
        events={},
        checks=(Check(label="bad", expected=0.5, actual=0.9),),
    )
    monkeypatch.setattr(cli.gen_mod, "worked_examples", lambda tol=None: [broken])
    code, doc = run(capsys, "paper-examples")
    assert code == 2
    assert doc["all_pass"] is False


def test_gen_stdout_and_file(capsys, tmp_path):
    code, doc = run(capsys, "gen", "--kind", "random-povm", "--n", "2",
                    "--local-dim", "3", "--seed", "4", "--x", "0.5,0.5")
    assert code == 0
    assert doc["x"] == [0.5, 0.5]
    jsonschema.validate(doc, INSTANCE_SCHEMA)

    out = tmp_path / "gen.json"
    code = cli.main(["gen", "--kind", "random-povm", "--n", "2", "--local-dim", "3",
                     "--seed", "4", "--x", "0.5,0.5", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    assert json.loads(out.read_text()) == doc


def test_gen_respects_dimension_cap(capsys, monkeypatch):
    monkeypatch.setenv("QLLL_DIM_CAP", "2")
    code, doc = run(capsys, "gen", "--kind", "tensor-product", "--n", "2", "--seed", "0")
    assert code == 2
    assert doc["error"]["type"] == "DimensionCapExceeded"


def test_unreadable_instance_exits_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    code, doc = run(capsys, "prob", "--instance", str(path), "--K", "1")
    assert code == 2
    assert doc["error"]["type"] == "Parse"


def test_test_mode_requires_events(capsys, ref_file, tmp_path):
    doc = ref_doc(ref_file)
    del doc["events"]
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "prob", "--instance", str(path), "--K", "1")
    assert code == 2
    assert "events" in out["error"]["message"]


def test_pretty_output(capsys, ref_file):
    code = cli.main(["profile", "--instance", ref_file, "--pretty"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("{\n")
    assert json.loads(out)["d_min"] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qlll.cli", "paper-examples"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_pass"] is True
