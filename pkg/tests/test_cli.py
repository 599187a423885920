import json

import pytest

from src.cli.main import main
from src.models.results import Verdict


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_machine(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "machine")
    assert code == 0, err
    return json.loads(out)


class TestClassify:
    def test_example8_smooth(self, capsys, corpus_dir):
        doc = run_machine(capsys, "classify", "--class", "smooth", str(corpus_dir / "example8_L3.json"))
        assert doc["function"] == "example8_L3"
        assert doc["verdict"]["answer"] == "InSwClass"
        assert doc["verdict"]["trace"] == [[1, 2, 3], [1, 2], [1]]

    def test_mod2sum_iid(self, capsys, corpus_dir):
        doc = run_machine(capsys, "classify", str(corpus_dir / "mod2sum.json"))
        assert doc["verdict"]["answer"] == "NotInSwClass"
        assert doc["verdict"]["witness"]["kind"] == "projection"
        assert doc["conditions"]["prop4"] is False

    def test_table4_certificate(self, capsys, corpus_dir):
        doc = run_machine(capsys, "classify", str(corpus_dir / "table4.json"))
        assert doc["verdict"]["answer"] == "InSwClass"
        assert doc["conditions"]["certified_depth"] == 1

    def test_text_output(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "classify", "--class", "smooth", str(corpus_dir / "example8_L3.json"))
        assert code == 0
        assert "verdict (smooth): InSwClass" in out
        assert "trace:" in out

    def test_verdict_document_validates(self, capsys, corpus_dir):
        for name in ("table4", "mod2sum", "example8_L3"):
            doc = run_machine(capsys, "classify", str(corpus_dir / f"{name}.json"))
            verdict = Verdict.model_validate(doc["verdict"])
            assert verdict.answer.value == doc["verdict"]["answer"]

    def test_machine_output_is_deterministic(self, capsys, corpus_dir):
        path = str(corpus_dir / "example8_L4.json")
        _, first, _ = run(capsys, "classify", path, "--format", "machine")
        _, second, _ = run(capsys, "classify", path, "--format", "machine")
        assert first == second

    def test_missing_file(self, capsys, tmp_path):
        code, out, err = run(capsys, "classify", str(tmp_path / "absent.json"))
        assert code == 2
        assert out == ""
        assert err.startswith("error:")

    def test_undecodable_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_bytes(b"\xff\xfe")
        code, _, err = run(capsys, "classify", str(path))
        assert code == 2
        assert "cannot read" in err

    def test_value_name_beyond_int64(self, capsys, tmp_path):
        path = tmp_path / "big.json"
        path.write_text('{"alphabets": [2, 2], "values": [1180591620717411303424, 1, 1, 1180591620717411303424]}')
        doc = run_machine(capsys, "classify", str(path))
        assert doc["verdict"]["answer"] == "NotInSwClass"

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"alphabets": [2, 2], "values": [0, 1, 2]}')
        code, _, err = run(capsys, "classify", str(path))
        assert code == 2
        assert "error:" in err

    def test_max_depth_must_be_positive(self, capsys, corpus_dir):
        code, _, err = run(capsys, "classify", str(corpus_dir / "table1.json"), "--max-depth", "0")
        assert code == 2
        assert "--max-depth" in err


class TestReport:
    def test_corpus(self, capsys, corpus_dir):
        doc = run_machine(capsys, "report", str(corpus_dir))
        rows = {row["name"]: row for row in doc["rows"]}
        assert list(rows) == sorted(rows)
        assert rows["mod2sum"]["iid"] == "NotInSwClass"
        assert rows["example8_L3"]["pseudo_identity"] is True
        assert rows["table4"]["hk"] is None
        assert all(row["error"] is None for row in doc["rows"])

    def test_jobs_keep_order(self, capsys, corpus_dir):
        serial = run_machine(capsys, "report", str(corpus_dir))
        parallel = run_machine(capsys, "report", str(corpus_dir), "--jobs", "3")
        assert serial == parallel

    def test_bad_file_becomes_error_row(self, capsys, tmp_path, corpus_dir):
        (tmp_path / "a_good.json").write_text((corpus_dir / "mod2sum.json").read_text())
        (tmp_path / "b_bad.json").write_text("not json")
        doc = run_machine(capsys, "report", str(tmp_path))
        assert [row["name"] for row in doc["rows"]] == ["mod2sum", "b_bad"]
        assert doc["rows"][1]["error"]
        assert doc["rows"][0]["error"] is None

    def test_undecodable_file_becomes_error_row(self, capsys, tmp_path, corpus_dir):
        (tmp_path / "a.json").write_text((corpus_dir / "table4.json").read_text())
        (tmp_path / "b.json").write_bytes(b'\xff\xfe{"alphabets"')
        doc = run_machine(capsys, "report", str(tmp_path))
        assert [row["name"] for row in doc["rows"]] == ["table4", "b"]
        assert "cannot read" in doc["rows"][1]["error"]

    def test_value_names_beyond_int64(self, capsys, tmp_path, corpus_dir):
        (tmp_path / "big.json").write_text('{"alphabets": [2], "values": [1180591620717411303424, 1]}')
        (tmp_path / "mod2sum.json").write_text((corpus_dir / "mod2sum.json").read_text())
        doc = run_machine(capsys, "report", str(tmp_path))
        rows = {row["name"]: row for row in doc["rows"]}
        assert rows["big"]["error"] is None
        assert rows["big"]["iid"] == "InSwClass"
        assert rows["mod2sum"]["iid"] == "NotInSwClass"

    def test_huge_alphabets_become_error_row(self, capsys, tmp_path):
        (tmp_path / "huge.json").write_text('{"alphabets": [1099511627776, 1099511627776], "values": []}')
        doc = run_machine(capsys, "report", str(tmp_path))
        assert "values length 0" in doc["rows"][0]["error"]

    def test_machine_output_is_deterministic(self, capsys, corpus_dir):
        _, first, _ = run(capsys, "report", str(corpus_dir), "--format", "machine")
        _, second, _ = run(capsys, "report", str(corpus_dir), "--format", "machine", "--jobs", "2")
        assert first == second

    def test_text_matrix(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "report", str(corpus_dir))
        assert code == 0
        header = out.splitlines()[0]
        for column in ("function", "HK", "Prop4", "Cert", "PI", "iid", "smooth"):
            assert column in header

    def test_empty_directory(self, capsys, tmp_path):
        code, out, _ = run(capsys, "report", str(tmp_path))
        assert code == 0
        assert "no function files" in out

    def test_not_a_directory(self, capsys, tmp_path):
        code, _, _ = run(capsys, "report", str(tmp_path / "missing"))
        assert code == 2


class TestRegion:
    def test_dsbs(self, capsys, distributions_dir):
        doc = run_machine(capsys, "region", str(distributions_dir / "dsbs_025.json"), "--rates", "0.82,1.0")
        assert doc["constraints"]["1"] == pytest.approx(0.811278, abs=1e-6)
        assert doc["constraints"]["3"] == pytest.approx(1.811278, abs=1e-6)
        assert doc["contains"] is True
        assert len(doc["vertices"]) == 2

    def test_uniform_outside(self, capsys, distributions_dir):
        doc = run_machine(capsys, "region", str(distributions_dir / "uniform_2x2.json"), "--rates", "0.5,1.4")
        assert doc["contains"] is False

    def test_text_output(self, capsys, distributions_dir):
        code, out, _ = run(capsys, "region", str(distributions_dir / "dsbs_025.json"))
        assert code == 0
        assert "h(1) = 0.811278" in out
        assert "h(12) = 1.811278" in out

    def test_ci_partition(self, capsys, distributions_dir, corpus_dir):
        doc = run_machine(
            capsys,
            "region",
            str(distributions_dir / "uniform_3x3.json"),
            "--function",
            str(corpus_dir / "table1.json"),
            "--ci-partition",
            "{1}/{2}",
        )
        assert doc["ci_partition"] == "{1}/{2}"
        assert doc["ci_deviation"] <= 1e-9

    def test_ci_partition_needs_function(self, capsys, distributions_dir):
        code, _, err = run(capsys, "region", str(distributions_dir / "uniform_2x2.json"), "--ci-partition", "{1}/{2}")
        assert code == 2
        assert "--function" in err

    def test_alphabet_mismatch(self, capsys, distributions_dir, corpus_dir):
        code, _, _ = run(
            capsys, "region", str(distributions_dir / "uniform_2x2.json"), "--function", str(corpus_dir / "table1.json")
        )
        assert code == 2

    def test_bad_rates(self, capsys, distributions_dir):
        code, _, _ = run(capsys, "region", str(distributions_dir / "uniform_2x2.json"), "--rates", "a,b")
        assert code == 2


class TestWitness:
    def test_mod2sum(self, capsys, corpus_dir):
        doc = run_machine(capsys, "witness", str(corpus_dir / "mod2sum.json"))
        assert doc["smooth"]["answer"] == "NotInSwClass"
        assert doc["necessary"]["subset"] == [1, 2]

    def test_pseudo_identity(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "witness", str(corpus_dir / "example8_L3.json"))
        assert code == 0
        assert "pseudo identity" in out
        assert "necessary condition holds" in out


class TestOracleCheck:
    def test_single_function(self, capsys, corpus_dir):
        doc = run_machine(capsys, "oracle-check", str(corpus_dir / "table2.json"))
        assert doc == {"function": "table2", "disagreements": []}

    def test_sweep(self, capsys):
        doc = run_machine(capsys, "oracle-check", "--count", "25", "--seed", "4")
        assert doc["checked"] == 25
        assert doc["seed"] == 4
        assert doc["disagreements"] == []

    def test_falsifier_finds_mod2sum_distribution(self, capsys, corpus_dir):
        doc = run_machine(capsys, "oracle-check", str(corpus_dir / "mod2sum.json"), "--ci-partition", "{1}/{2}")
        assert doc["ci_condition"] is False
        assert doc["falsified"] is True
        assert doc["ci_deviation"] > 1e-6
        assert doc["trials"] == 100
        assert doc["disagreements"] == []

    def test_falsifier_respects_ci_condition(self, capsys, corpus_dir):
        doc = run_machine(
            capsys, "oracle-check", str(corpus_dir / "table1.json"), "--ci-partition", "{1}/{2}", "--trials", "20"
        )
        assert doc["ci_condition"] is True
        assert doc["falsified"] is False
        assert doc["trials"] == 20
        assert "distribution" not in doc

    def test_falsifier_trials_from_environment(self, capsys, monkeypatch, corpus_dir):
        monkeypatch.setenv("SWCLASS_FALSIFIER_TRIALS", "7")
        monkeypatch.setenv("SWCLASS_SEED", "3")
        doc = run_machine(capsys, "oracle-check", str(corpus_dir / "table1.json"), "--ci-partition", "{1}/{2}")
        assert (doc["trials"], doc["seed"]) == (7, 3)

    def test_falsifier_needs_function(self, capsys):
        code, _, err = run(capsys, "oracle-check", "--ci-partition", "{1}/{2}")
        assert code == 2
        assert "function" in err

    def test_falsifier_rejects_zero_trials(self, capsys, corpus_dir):
        code, _, err = run(capsys, "oracle-check", str(corpus_dir / "mod2sum.json"), "--ci-partition", "{1}/{2}", "--trials", "0")
        assert code == 2
        assert "--trials" in err
