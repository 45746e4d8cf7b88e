"""Command-line behavior: outputs, flags, exit codes, verify suites."""
import json
import shutil
import subprocess

import pytest

from gridfloer import cli, corpus_text
from gridfloer.cli import (
    EXIT_CAP,
    EXIT_FAIL,
    EXIT_MOVE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SUITE,
    SUITES,
    RunConfig,
    main,
)

U_ROUND_TRIP = (
    "switch col=1 row=1 letter=O flavor=nu dir=fwd\n"
    "switch col=1 row=1 letter=O flavor=nu dir=inv\n"
)

# checks per verify suite, all corpus-derived
SUITE_SIZES = {
    "curvature": 7,
    "grading": 15,
    "band-relations": 43,
    "stab-relations": 59,
    "commutation": 4,
}


@pytest.fixture
def grid_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.grid"
        path.write_text(corpus_text(name))
        return str(path)

    return write


@pytest.fixture
def movie_file(tmp_path):
    def write(text):
        path = tmp_path / "movie.txt"
        path.write_text(text)
        return str(path)

    return write


class TestRunConfig:
    def test_defaults(self):
        c = RunConfig()
        assert (c.state_cap, c.output, c.threads, c.seed) == (8, "table", 1, 0)

    @pytest.mark.parametrize(
        "kwargs",
        [{"state_cap": 1}, {"threads": 0}, {"output": "xml"}],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            RunConfig(**kwargs)


class TestHomologyCommand:
    def test_json_output(self, grid_file, capsys):
        assert main(["--json", "homology", grid_file("trefoil5")]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["n"] == 5 and data["generators"] == 120
        assert data["homology"] == [
            {"grading_doubled": 2, "free_rank": 16, "torsion": [1] * 16}
        ]

    def test_table_matches_json(self, grid_file, capsys):
        path = grid_file("split2x2_2x2")
        main(["homology", path])
        table = capsys.readouterr().out
        main(["--json", "homology", path])
        data = json.loads(capsys.readouterr().out)
        assert f"{data['generators']} generators" in table
        for row in data["homology"]:
            cells = [
                ln.split()
                for ln in table.splitlines()
                if ln.strip().startswith(str(row["grading_doubled"]) + " ")
            ]
            assert [str(row["grading_doubled"]), str(row["free_rank"])] in [
                c[:2] for c in cells
            ]

    def test_threads_flag_stable(self, grid_file, capsys):
        path = grid_file("trefoil5")
        main(["--json", "homology", path])
        one = capsys.readouterr().out
        main(["--json", "--threads", "3", "homology", path])
        assert capsys.readouterr().out == one


class TestSitesCommand:
    def test_json_records(self, grid_file, capsys):
        main(["--json", "sites", grid_file("trefoil5")])
        data = json.loads(capsys.readouterr().out)
        assert data["n"] == 5 and len(data["sites"]) == 10
        first = data["sites"][0]
        assert first == {
            "col": 1,
            "row": 1,
            "letter": "O",
            "oriented": True,
            "band_type": "I",
            "components_after": 2,
        }

    def test_table_is_one_indexed(self, grid_file, capsys):
        main(["sites", grid_file("unknot4_sites")])
        out = capsys.readouterr().out
        assert "col=1 row=1 letter=O oriented type=I components_after=2" in out
        assert len(out.splitlines()) == 4

    def test_empty_for_siteless_grid(self, grid_file, capsys):
        main(["--json", "sites", grid_file("unknot2")])
        assert json.loads(capsys.readouterr().out)["sites"] == []


class TestMovieCommand:
    def test_u_round_trip(self, grid_file, movie_file, capsys):
        code = main(
            ["--json", "movie", grid_file("unknot4_sites"), movie_file(U_ROUND_TRIP)]
        )
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["degree"] == -2
        assert data["final_grid"] == {"n": 4, "o": [0, 1, 2, 3], "x": [2, 3, 1, 0]}
        assert data["source_homology"] == data["target_homology"]
        n = len(data["induced"])
        assert n == 8
        for i in range(n):
            for j in range(n):
                assert data["induced"][i][j] == ("U" if i == j else "0")

    def test_stab_destab_zero(self, grid_file, movie_file, capsys):
        script = "quasistab anchor=O1\nquasidestab anchor=O1\n"
        main(["--json", "movie", grid_file("unknot2"), movie_file(script)])
        data = json.loads(capsys.readouterr().out)
        assert data["induced"] == [["0", "0"], ["0", "0"]]

    def test_table_output(self, grid_file, movie_file, capsys):
        script = "quasistab anchor=O1\nquasidestab anchor=O2\n"
        main(["movie", grid_file("unknot2"), movie_file(script)])
        out = capsys.readouterr().out
        assert "final diagram:" in out and "n = 2" in out
        assert "total map degree: 0" in out
        assert "induced map" in out


class TestExitCodes:
    def test_parse_error_grid(self, tmp_path, capsys):
        bad = tmp_path / "bad.grid"
        bad.write_text("n = 2\nO = 1 2\n")
        assert main(["homology", str(bad)]) == EXIT_PARSE
        assert "error:" in capsys.readouterr().err

    def test_parse_error_movie(self, grid_file, movie_file):
        assert (
            main(["movie", grid_file("unknot2"), movie_file("wobble\n")])
            == EXIT_PARSE
        )

    def test_cap_exceeded(self, grid_file):
        assert main(["--cap", "4", "homology", grid_file("trefoil5")]) == EXIT_CAP

    def test_invalid_move_sequence(self, grid_file, movie_file):
        assert (
            main(["movie", grid_file("unknot2"), movie_file("diskdestab\n")])
            == EXIT_MOVE
        )

    def test_unknown_suite(self, capsys):
        assert main(["verify", "everything"]) == EXIT_SUITE
        assert "unknown suite" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["homology", str(tmp_path / "absent.grid")]) == EXIT_FAIL

    def test_chain_violation_is_check_failure(self, grid_file, movie_file):
        script = "switch col=1 row=1 letter=O flavor=nu_tilde dir=fwd\n"
        assert (
            main(["movie", grid_file("unknot4_sites"), movie_file(script)])
            == EXIT_FAIL
        )

    def test_bad_config_value(self, grid_file):
        assert main(["--cap", "1", "homology", grid_file("unknot2")]) == EXIT_FAIL


class TestVerifySuites:
    @pytest.mark.parametrize("suite", SUITES)
    def test_suite_passes(self, suite, capsys):
        assert main(["--json", "verify", suite]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["passed"] is True
        assert len(data["checks"]) == SUITE_SIZES[suite]
        assert all(c["passed"] for c in data["checks"])

    def test_table_summary_line(self, capsys):
        main(["verify", "curvature"])
        out = capsys.readouterr().out
        assert out.count("ok ") == SUITE_SIZES["curvature"]
        assert "curvature: 7 checks passed" in out

    def test_grading_deterministic_per_seed(self, capsys):
        main(["--json", "--seed", "9", "verify", "grading"])
        first = capsys.readouterr().out
        main(["--json", "--seed", "9", "verify", "grading"])
        assert capsys.readouterr().out == first

    def test_failure_dumps_reproducer(self, corpus, monkeypatch, capsys):
        from gridfloer import Movie

        g = corpus["unknot2"]
        movie = Movie(g, ())

        def doomed(config):
            yield "always red", g, movie, False

        monkeypatch.setitem(cli._SUITE_RUNNERS, "doomed", doomed)
        assert cli.cmd_verify("doomed", RunConfig()) == EXIT_FAIL
        out = capsys.readouterr().out
        assert "FAIL always red" in out
        assert "grid:\nn = 2" in out and "movie:" in out

    def test_failure_reproducer_json(self, corpus, monkeypatch, capsys):
        g = corpus["unknot2"]

        def doomed(config):
            yield "always red", g, None, False

        monkeypatch.setitem(cli._SUITE_RUNNERS, "doomed", doomed)
        assert cli.cmd_verify("doomed", RunConfig(output="json")) == EXIT_FAIL
        data = json.loads(capsys.readouterr().out)
        assert data["passed"] is False
        assert data["failed_check"] == "always red"
        assert data["reproducer"].startswith("grid:\n")


class TestEntryPoint:
    def test_console_script(self, grid_file):
        exe = shutil.which("gridfloer")
        assert exe is not None, "console script not installed"
        proc = subprocess.run(
            [exe, "--json", "homology", grid_file("unknot3")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == EXIT_OK
        data = json.loads(proc.stdout)
        assert data["homology"] == [
            {"grading_doubled": 0, "free_rank": 4, "torsion": []}
        ]
