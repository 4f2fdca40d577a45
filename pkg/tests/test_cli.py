import json
from importlib import resources

import jsonschema
import pytest

from ocasync import corpus
from ocasync.cli import main
from ocasync.oca import oca_to_json


@pytest.fixture(scope="module")
def schema():
    text = resources.files("ocasync").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    doc = json.loads(out)
    return code, doc, out


def check_schema(schema, doc):
    jsonschema.validate(doc, schema)


class TestCheck:
    def test_countdown_example(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "countdown", "--formula", "FA p",
            "--init", "s,2", "--mode", "empirical",
        )
        assert code == 0
        check_schema(schema, doc)
        assert doc["data"]["holds"] is True
        assert doc["data"]["witnessK"] == 3

    def test_negative_verdict_still_exits_zero(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "asym-fork", "--formula", "FA p",
            "--init", "f,1",
        )
        assert code == 0 and doc["data"]["holds"] is False
        check_schema(schema, doc)

    def test_supplied_mode_parsing(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "countdown", "--formula", "EX p",
            "--init", "s,0", "--mode", "supplied:1,1",
        )
        assert code == 0 and doc["data"]["holds"] is True
        check_schema(schema, doc)

    def test_budget_exceeded_exit_code(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "asym-fork", "--formula", "FA p",
            "--init", "f,0", "--mode", "paper",
        )
        assert code == 2
        assert doc["error"]["kind"] == "budget"
        check_schema(schema, doc)

    def test_job_file_with_flag_overrides(self, capsys, schema, tmp_path):
        job = tmp_path / "job.json"
        job.write_text(json.dumps({
            "oca": "countdown", "formula": "FA p", "init": "s,2",
            "mode": "empirical",
        }))
        code, doc, _ = run(capsys, "check", "--job", str(job))
        assert code == 0 and doc["data"]["witnessK"] == 3
        check_schema(schema, doc)
        code, doc, _ = run(capsys, "check", "--job", str(job), "--init", "s,0")
        assert code == 0 and doc["data"]["witnessK"] == 1

    def test_job_file_unknown_keys_rejected(self, capsys, schema, tmp_path):
        job = tmp_path / "job.json"
        job.write_text(json.dumps({"oca": "countdown", "formulae": "FA p"}))
        code, doc, _ = run(capsys, "check", "--job", str(job))
        assert code == 1 and doc["error"]["kind"] == "input"
        check_schema(schema, doc)

    def test_budget_env_override(self, capsys, schema, monkeypatch):
        monkeypatch.setenv("OCASYNC_BUDGET", "1")
        code, doc, _ = run(
            capsys, "check", "--oca", "countdown", "--formula", "FA p",
            "--init", "s,2",
        )
        assert code == 2 and doc["error"]["kind"] == "budget"


class TestValidate:
    def test_valid_corpus(self, capsys, schema):
        code, doc, _ = run(capsys, "validate", "--oca", "corpus:countdown")
        assert code == 0 and doc["data"]["diagnostics"] == []
        check_schema(schema, doc)

    def test_broken_automaton_exits_one(self, capsys, schema, tmp_path):
        bad = tmp_path / "broken.oca"
        bad.write_text("states: s\natoms: p\ns -[=0,0]-> s\n")  # no positive guard
        code, doc, _ = run(capsys, "validate", "--oca", str(bad))
        assert code == 1
        assert any(">0" in d for d in doc["error"]["diagnostics"])
        check_schema(schema, doc)

    def test_json_automaton_file(self, capsys, schema, tmp_path):
        doc_in = oca_to_json(corpus.load("fork"))
        path = tmp_path / "fork.json"
        path.write_text(json.dumps(doc_in))
        code, doc, _ = run(capsys, "validate", "--oca", str(path))
        assert code == 0
        check_schema(schema, doc)

    def test_missing_file_exits_one(self, capsys, schema):
        code, doc, _ = run(capsys, "validate", "--oca", "/nonexistent.oca")
        assert code == 1 and doc["error"]["kind"] == "input"
        check_schema(schema, doc)


class TestOtherCommands:
    def test_constants_bundle(self, capsys, schema):
        code, doc, _ = run(
            capsys, "constants", "--oca", "countdown", "--formula", "p UA p",
            "--b", "3",
        )
        assert code == 0
        check_schema(schema, doc)
        bundle = doc["data"]["bundle"]
        assert bundle["b"] == 3 and bundle["segments"] == 5

    def test_constants_default_bound_is_symbolic(self, capsys, schema):
        code, doc, _ = run(
            capsys, "constants", "--oca", "asym-fork", "--formula", "p UA p",
        )
        assert code == 0
        check_schema(schema, doc)
        assert doc["data"]["bundle"]["P"]["kind"] == "lcm-poly"

    def test_oracle_verdict(self, capsys, schema):
        code, doc, _ = run(
            capsys, "oracle", "--oca", "increment-loop", "--formula", "FA p",
            "--init", "s,0", "--counter-cap", "5", "--level-cap", "5",
        )
        assert code == 0 and doc["data"]["verdict"] == "FALSE"
        check_schema(schema, doc)

    def test_mine_period(self, capsys, schema):
        code, doc, _ = run(
            capsys, "mine-period", "--oca", "countdown", "--formula", "EX p",
            "--state", "s", "--v-cap", "20",
        )
        assert code == 0 and doc["data"]["pair"] == {"t": 1, "p": 1}
        check_schema(schema, doc)

    def test_cross_check(self, capsys, schema):
        code, doc, _ = run(
            capsys, "cross-check", "--oca", "countdown", "--formula", "FA p",
            "--init", "s,0", "--init", "s,1", "--init", "s,5",
        )
        assert code == 0
        check_schema(schema, doc)
        assert doc["data"]["counts"].get("AGREE", 0) == 3

    def test_check_lemma11(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check-lemma11", "--oca", "countdown", "--b", "1",
        )
        assert code == 0
        check_schema(schema, doc)
        assert doc["data"]["cases"] > 0
        seg0 = {k: v for k, v in doc["data"]["summary"].items() if "segment0" in k}
        assert seg0 and all(v.get("fail", 0) == 0 for v in seg0.values())

    def test_lps_with_reach(self, capsys, schema):
        code, doc, _ = run(
            capsys, "lps", "--oca", "countdown", "--src", "s", "--dst", "s",
            "--flat", "1", "--size", "1", "--start", "s,5",
            "--target-length", "3",
        )
        assert code == 0
        check_schema(schema, doc)
        reached = [r for s in doc["data"]["schemes"] for r in s.get("reached", [])]
        assert any(r["config"] == "s,2" for r in reached)

    def test_sat_sets(self, capsys, schema):
        code, doc, _ = run(
            capsys, "sat-sets", "--oca", "countdown", "--formula", "E true U p",
        )
        assert code == 0
        check_schema(schema, doc)
        assert doc["data"]["perState"]["s"]["residues"] == [0]


class TestErrorsAndDeterminism:
    def test_malformed_formula_position(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "countdown", "--formula", "p &",
            "--init", "s,0",
        )
        assert code == 1 and doc["error"]["kind"] == "input"
        assert "1:4" in doc["error"]["message"]
        check_schema(schema, doc)

    def test_unknown_mode_is_input_error(self, capsys, schema):
        code, doc, _ = run(
            capsys, "check", "--oca", "countdown", "--formula", "true",
            "--init", "s,0", "--mode", "psychic",
        )
        assert code == 1
        check_schema(schema, doc)

    def test_byte_identical_reruns(self, capsys):
        argv = ["check", "--oca", "fork", "--formula", "E true U p", "--init", "s,3"]
        _, _, first = run(capsys, *argv)
        _, _, second = run(capsys, *argv)
        assert first == second

    def test_sorted_set_output(self, capsys):
        _, doc, _ = run(capsys, "sat-sets", "--oca", "fork", "--formula", "p | q")
        for u in doc["data"]["perState"].values():
            assert u["base"] == sorted(u["base"])
            assert u["residues"] == sorted(u["residues"])
