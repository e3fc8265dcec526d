"""End-to-end checks of the command line, driven through main()."""

from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from expertfuse import (
    ExpertDeclaration,
    Model,
    build_m1,
    build_m4,
    build_m5,
    generate_demo_corpus,
    mass_from_entries,
    make_frame,
    stability_table,
)
from expertfuse.cli import main

E1 = ExpertDeclaration.says_a(0.6)
E2 = ExpertDeclaration.says_both(0.5, 0.6, 0.4)


@pytest.fixture(scope="module")
def mass_dir(tmp_path_factory):
    """A directory of mass files used across the command tests."""
    root = tmp_path_factory.mktemp("masses")
    (root / "m1_one.json").write_text(build_m1(E1).to_json(), encoding="utf-8")
    (root / "m1_two.json").write_text(build_m1(E2).to_json(), encoding="utf-8")
    (root / "m4_one.json").write_text(build_m4(E1).to_json(), encoding="utf-8")
    (root / "m4_two.json").write_text(build_m4(E2).to_json(), encoding="utf-8")
    (root / "m5_two.json").write_text(build_m5(E2).to_json(), encoding="utf-8")
    tie = mass_from_entries(make_frame(("A", "B")), {"A": 0.4, "B": 0.4, "Θ": 0.2})
    (root / "tie.json").write_text(tie.to_json(), encoding="utf-8")
    (root / "broken.json").write_text("{not json", encoding="utf-8")
    (root / "wrong_keys.json").write_text('{"labels": ["A"]}', encoding="utf-8")
    return root


@pytest.fixture()
def corpus_file(tmp_path):
    path = tmp_path / "annotations.csv"
    path.write_text(generate_demo_corpus(40, 5), encoding="utf-8")
    return path


class TestFuse:
    def test_conjunctive_table(self, mass_dir, capsys):
        code = main(["fuse", str(mass_dir / "m1_one.json"), str(mass_dir / "m1_two.json")])
        out = capsys.readouterr().out
        assert code == 0
        assert "rule: conjunctive" in out
        assert "frame: {A, B, C} (shafer)" in out
        # the ∅ row leads and carries the conflict, without a betP value
        first_row = out.splitlines()[3]
        assert first_row.startswith("∅")
        assert "0.3000" in first_row and first_row.rstrip().endswith("-")
        a_row = next(line for line in out.splitlines() if line.startswith("A "))
        assert "0.5238" in a_row

    def test_pcr5_on_overlapping_frame_projects_back(self, mass_dir, capsys):
        code = main(
            [
                "fuse",
                str(mass_dir / "m4_one.json"),
                str(mass_dir / "m4_two.json"),
                "--rule",
                "pcr5",
                "--decide",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "frame: {A, B} (shafer)" in out
        a_row = next(line for line in out.splitlines() if line.startswith("A "))
        assert "0.8000" in a_row and "0.9000" in a_row
        assert "decision (pignistic over singletons): A" in out

    def test_json_output_keeps_full_precision(self, mass_dir, tmp_path, capsys):
        target = tmp_path / "fused.json"
        code = main(
            [
                "fuse",
                str(mass_dir / "m1_one.json"),
                str(mass_dir / "m1_two.json"),
                "--json",
                str(target),
            ]
        )
        capsys.readouterr()
        assert code == 0
        payload = json.loads(target.read_text(encoding="utf-8"))
        assert payload["rule"] == "conjunctive"
        assert payload["mass"]["world"] == "open"
        assert payload["criteria"]["A"]["pignistic"] == pytest.approx(11 / 21, abs=1e-12)
        assert payload["criteria"]["∅"]["pignistic"] is None

    def test_single_file_is_a_usage_error(self, mass_dir, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fuse", str(mass_dir / "m1_one.json")])
        assert exc.value.code == 2
        assert "at least two mass files" in capsys.readouterr().err

    def test_frame_mismatch_fails_cleanly(self, mass_dir, capsys):
        code = main(["fuse", str(mass_dir / "m1_one.json"), str(mass_dir / "m4_one.json")])
        err = capsys.readouterr().err
        assert code == 1
        assert err.startswith("error:")

    def test_unreadable_mass_files(self, mass_dir, capsys):
        assert main(["fuse", str(mass_dir / "broken.json"), str(mass_dir / "m1_one.json")]) == 1
        assert "not valid JSON" in capsys.readouterr().err
        assert main(["fuse", str(mass_dir / "wrong_keys.json"), str(mass_dir / "m1_one.json")]) == 1
        assert "missing the 'frame' key" in capsys.readouterr().err
        assert main(["fuse", str(mass_dir / "missing.json"), str(mass_dir / "m1_one.json")]) == 1
        assert "error:" in capsys.readouterr().err


class TestDecide:
    def test_defaults_to_pignistic_over_classes(self, mass_dir, capsys):
        code = main(["decide", str(mass_dir / "m5_two.json")])
        out = capsys.readouterr().out
        assert code == 0
        assert "pignistic(A) = 0.5500" in out
        assert "pignistic(B) = 0.4500" in out
        assert "chosen: A" in out

    def test_explicit_criterion_and_candidates(self, mass_dir, capsys):
        code = main(
            [
                "decide",
                str(mass_dir / "m5_two.json"),
                "--criterion",
                "credibility",
                "--candidates",
                "A, Θ",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "credibility(A) = 0.3000" in out
        assert "credibility(Θ) = 1.0000" in out
        assert "chosen: Θ" in out

    def test_tie_reported(self, mass_dir, tmp_path, capsys):
        target = tmp_path / "report.json"
        code = main(["decide", str(mass_dir / "tie.json"), "--json", str(target)])
        out = capsys.readouterr().out
        assert code == 0
        assert "chosen: A" in out
        assert "tie between: A, B" in out
        payload = json.loads(target.read_text(encoding="utf-8"))
        assert payload["tie"] is True
        assert payload["tied"] == ["A", "B"]

    def test_unknown_criterion_is_a_usage_error(self, mass_dir, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["decide", str(mass_dir / "tie.json"), "--criterion", "entropy"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_bad_candidate_text(self, mass_dir, capsys):
        code = main(["decide", str(mass_dir / "tie.json"), "--candidates", "A,X"])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestSimulate:
    def test_table_matches_the_library(self, capsys):
        code = main(["simulate", "--classes", "2", "--samples", "300", "--seed", "7"])
        out = capsys.readouterr().out
        assert code == 0
        result = stability_table([2], 300, 7)[0]
        lines = out.splitlines()
        assert lines[0].split() == ["n", "samples", "change_rate", "ci"]
        assert lines[1].split() == [
            "2",
            "300",
            f"{result.change_rate:.4f}",
            f"{result.ci_halfwidth:.4f}",
        ]

    def test_runs_are_reproducible(self, capsys):
        argv = ["simulate", "--classes", "2,3", "--samples", "200", "--seed", "42"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_csv_round_trips_full_precision(self, tmp_path, capsys):
        target = tmp_path / "rates.csv"
        main(
            [
                "simulate",
                "--classes",
                "2..3",
                "--samples",
                "250",
                "--seed",
                "3",
                "--out",
                str(target),
            ]
        )
        capsys.readouterr()
        rows = list(csv.DictReader(target.open()))
        results = stability_table([2, 3], 250, 3)
        assert [int(r["n"]) for r in rows] == [2, 3]
        for row, result in zip(rows, results):
            assert float(row["change_rate"]) == result.change_rate
            assert float(row["ci"]) == result.ci_halfwidth

    def test_histogram_output(self, tmp_path, capsys):
        target = tmp_path / "hist.csv"
        code = main(
            [
                "simulate",
                "--classes",
                "3",
                "--samples",
                "400",
                "--seed",
                "5",
                "--bins",
                "10",
                "--histogram",
                str(target),
            ]
        )
        capsys.readouterr()
        assert code == 0
        rows = list(csv.DictReader(target.open()))
        assert len(rows) == 10
        assert float(rows[0]["bin_low"]) == 0.0
        assert float(rows[-1]["bin_high"]) == 1.0
        assert sum(float(r["freq_all"]) for r in rows) == pytest.approx(1.0)

    def test_histogram_needs_one_class_count(self, tmp_path, capsys):
        code = main(
            [
                "simulate",
                "--classes",
                "2..3",
                "--samples",
                "100",
                "--histogram",
                str(tmp_path / "h.csv"),
            ]
        )
        assert code == 1
        assert "single class count" in capsys.readouterr().err

    def test_seed_env_var(self, capsys, monkeypatch):
        main(["simulate", "--classes", "2", "--samples", "200", "--seed", "99"])
        explicit = capsys.readouterr().out
        monkeypatch.setenv("EXPERTFUSE_SEED", "99")
        main(["simulate", "--classes", "2", "--samples", "200"])
        assert capsys.readouterr().out == explicit
        monkeypatch.setenv("EXPERTFUSE_SEED", "later")
        assert main(["simulate", "--classes", "2", "--samples", "200"]) == 1
        assert "must be an integer" in capsys.readouterr().err

    def test_bad_class_spec(self, capsys):
        assert main(["simulate", "--classes", "1..3", "--samples", "50"]) == 1
        assert "start at 2" in capsys.readouterr().err
        assert main(["simulate", "--classes", "5..3", "--samples", "50"]) == 1
        assert "empty class range" in capsys.readouterr().err


class TestCorpus:
    def test_prints_matrix_and_difference(self, corpus_file, capsys):
        code = main(["corpus", str(corpus_file)])
        out = capsys.readouterr().out
        assert code == 0
        assert "conflict matrix ×10^4 (expert1 rows, expert2 columns, 40 tiles)" in out
        assert "matrix total /10^4 (mean conflict):" in out
        assert "decision difference (conjunctive vs pcr6): 0/40 tiles = 0.0000" in out

    def test_file_outputs(self, corpus_file, tmp_path, capsys):
        matrix_path = tmp_path / "matrix.csv"
        diff_path = tmp_path / "diff.json"
        code = main(
            [
                "corpus",
                str(corpus_file),
                "--experts",
                "expert1,expert2",
                "--rules",
                "conjunctive,pcr5",
                "--matrix",
                str(matrix_path),
                "--diff",
                str(diff_path),
            ]
        )
        capsys.readouterr()
        assert code == 0
        header = matrix_path.read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith("class,rock,cobble,sand,silt")
        payload = json.loads(diff_path.read_text(encoding="utf-8"))
        assert payload["rule_b"] == "pcr5"
        assert payload["tiles"] == 40

    def test_expert_flag_validation(self, corpus_file, capsys):
        assert main(["corpus", str(corpus_file), "--experts", "expert1"]) == 1
        assert "exactly two" in capsys.readouterr().err
        assert main(["corpus", str(corpus_file), "--experts", "expert1,ghost"]) == 1
        assert "unknown expert" in capsys.readouterr().err

    def test_rule_and_weight_validation(self, corpus_file, capsys):
        assert main(["corpus", str(corpus_file), "--rules", "conjunctive,votes"]) == 1
        assert "unknown rule" in capsys.readouterr().err
        assert main(["corpus", str(corpus_file), "--weights", "1,0.5"]) == 1
        assert "three comma-separated" in capsys.readouterr().err
        assert main(["corpus", str(corpus_file), "--weights", "0.2,0.5,0.9"]) == 1
        assert "c3 <= c2 <= c1" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["corpus", str(tmp_path / "nowhere.csv")]) == 1
        assert "error:" in capsys.readouterr().err


class TestEntryPoints:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("expertfuse ")

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "expertfuse", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("expertfuse ")
