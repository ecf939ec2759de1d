import pytest

from roletriage.cli import build_parser, main
from roletriage.datagen import make_separable_corpus

# every flag each subcommand documents; --help output must mention them all
EXPECTED_FLAGS = {
    "ingest": ["--data", "--meta", "--role-map", "--seed"],
    "train": ["--data", "--kind", "--out", "--embeddings", "--holdout", "--seed",
              "--epochs", "--batch-size", "--learning-rate", "--hidden-units",
              "--embedding-dim", "--dropout", "--patience", "--l2", "--trees",
              "--alpha", "--svc-c", "--max-vocab", "--max-len"],
    "crossval": ["--data", "--kind", "--k", "--out", "--seed"],
    "benchmark": ["--data", "--kinds", "--embeddings", "--per-project", "--curves",
                  "--out", "--json", "--train-fraction", "--seed"],
    "recommend": ["--model", "--title", "--project", "--roles", "--top-k", "--seed"],
    "serve": ["--registry", "--feedback", "--host", "--port", "--default-k", "--seed"],
}


def write_corpus_csv(path, n_per_class=10):
    titles, roles = make_separable_corpus(n_per_class, seed=4)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("ProjectId,ProjectName,Title,Description,Role\n")
        for i, (t, r) in enumerate(zip(titles, roles)):
            fh.write(f"p{i % 2},proj,{t},,{r.label}\n")
    return path


class TestParser:
    @pytest.mark.parametrize("command", sorted(EXPECTED_FLAGS))
    def test_help_documents_every_flag(self, command, capsys):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args([command, "--help"])
        assert err.value.code == 0
        text = capsys.readouterr().out
        for flag in EXPECTED_FLAGS[command]:
            assert flag in text, f"{command} --help missing {flag}"

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args(["ingest", "--data", "x", "--bogus"])
        assert err.value.code == 2

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            build_parser().parse_args([])
        assert err.value.code == 2


class TestIngest:
    def test_prints_corpus_stats(self, fixture_dir, capsys):
        code = main(["ingest", "--data", str(fixture_dir / "tasks.csv"),
                     "--meta", str(fixture_dir / "projects_meta.csv")])
        assert code == 0
        out = capsys.readouterr().out
        assert "records\t1226" in out
        assert "projects\t10" in out
        assert "role:FrontEndDeveloper" in out
        assert "projects_after_filter\t10" in out

    def test_data_error_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("wrong,header\n1,2\n", encoding="utf-8")
        assert main(["ingest", "--data", str(bad)]) == 1
        assert "error:" in capsys.readouterr().err


class TestTrainAndRecommend:
    def test_train_save_then_recommend(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        model_path = tmp_path / "m.model"
        assert main(["train", "--data", str(corpus), "--kind", "mnb",
                     "--out", str(model_path)]) == 0
        assert model_path.exists()
        capsys.readouterr()
        code = main(["recommend", "--model", str(model_path),
                     "--title", "fix login css layout", "--project", "p0", "-k", "2"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("chosen\t")
        assert "fallback_applied\t" in out
        assert len(out.strip().split("\n")) == 2 + 2  # chosen, fallback, k rows

    def test_roles_override(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        model_path = tmp_path / "m.model"
        main(["train", "--data", str(corpus), "--kind", "mnb", "--out", str(model_path)])
        capsys.readouterr()
        code = main(["recommend", "--model", str(model_path),
                     "--title", "update the navbar css",
                     "--project", "p0", "--roles", "Content,Stakeholder"])
        assert code == 0
        out = capsys.readouterr().out
        assert "chosen\tContent" in out or "chosen\tStakeholder" in out
        assert "fallback_applied\ttrue" in out


class TestCrossval:
    def test_k_below_two_exits_2(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        assert main(["crossval", "--data", str(corpus), "--kind", "mnb", "--k", "1"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_report_shape(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        assert main(["crossval", "--data", str(corpus), "--kind", "mnb", "--k", "3"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("kind\tmnb")
        assert "fold2" in out and "mean" in out and "std" in out


class TestBenchmarkCommand:
    def test_deterministic_reports(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        out1, out2 = tmp_path / "r1.tsv", tmp_path / "r2.tsv"
        args = ["benchmark", "--data", str(corpus), "--kinds", "mnb,cs",
                "--seed", "42", "--per-project"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_and_curves_outputs(self, tmp_path):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        curves_dir = tmp_path / "curves"
        json_path = tmp_path / "report.json"
        code = main(["benchmark", "--data", str(corpus), "--kinds", "lstm",
                     "--epochs", "3", "--hidden-units", "8", "--embedding-dim", "8",
                     "--out", str(tmp_path / "r.tsv"), "--json", str(json_path),
                     "--curves", str(curves_dir)])
        assert code == 0
        assert json_path.exists()
        assert (curves_dir / "lstm.curves.tsv").read_text().startswith("epoch\tloss")

    def test_unknown_kind_exits_2(self, tmp_path, capsys):
        corpus = write_corpus_csv(tmp_path / "tasks.csv")
        assert main(["benchmark", "--data", str(corpus), "--kinds", "mnb,zzz"]) == 2
