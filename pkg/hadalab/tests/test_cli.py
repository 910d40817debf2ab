import io
import json
import time

import pandas as pd
import pytest

from hadalab import __version__
from hadalab.cli import (
    EXIT_INVALID,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    CommandError,
    build_parser,
    emit_plot_data,
    load_input,
    main,
)


COMB = '{"lambdas": [1.0], "coeffs": [-1.0]}'
SINH_LATTICE = '{"kind": "vertical_lattice", "step": 3.141592653589793, "mult": 1, "exclude_zero": true}'


def run_json(capsys, argv):
    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


class TestLoadInput:
    def test_inline(self):
        assert load_input(COMB) == {"lambdas": [1.0], "coeffs": [-1.0]}

    def test_case_name(self):
        assert load_input("sinh") == {"case": "sinh"}

    def test_stdin(self):
        assert load_input("-", stdin=io.StringIO('{"case": "comb"}')) == {"case": "comb"}
        assert load_input(None, stdin=io.StringIO("{}")) == {}

    def test_file(self, tmpdir):
        path = tmpdir.join("input.json")
        path.write(COMB)
        assert load_input(str(path))["lambdas"] == [1.0]

    def test_malformed(self):
        with pytest.raises(CommandError, match="malformed JSON at line 1, column 2"):
            load_input("{bad")

    def test_not_an_object(self):
        with pytest.raises(CommandError, match="expected a JSON object, got list"):
            load_input("[1, 2]")


def test_emit_plot_data():
    data = pd.DataFrame({"x": [1.0, 0.5], "y": [1 / 3, 2.0]})
    text = emit_plot_data(data, "y(x)", "y = f(x)")

    assert text.splitlines() == [
        "# quantity: y(x)",
        "# definition: y = f(x)",
        "x,y",
        "1,0.333333333333",
        "0.5,2",
    ]
    assert emit_plot_data(data, "y(x)").splitlines()[1] == "x,y"


class TestParser:
    def test_defaults(self):
        args = build_parser().parse_args(["verify-pn", "comb"])

        assert args.input == "comb"
        assert args.origin == "auto"
        assert args.tau == 0.3
        assert args.out == "json"

    def test_stdin_default(self):
        assert build_parser().parse_args(["bk"]).input == "-"

    @pytest.mark.parametrize(
        "argv",
        [[], ["bk", "--tol", "-1"], ["bk", "--mmax", "-2"], ["unknown"], ["m0", "--out", "xml"]],
    )
    def test_invalid(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])

        assert excinfo.value.code == 0
        assert capsys.readouterr().out.strip() == f"hadalab {__version__}"


class TestMain:
    def test_atoms(self, capsys):
        obj = run_json(capsys, ["atoms", COMB, "--T", "5"])

        assert obj["cutoff"] == 5.0
        assert [a["freq"] for a in obj["atoms"]] == [1.0, 2.0, 3.0, 4.0, 5.0]
        for atom in obj["atoms"]:
            assert atom["mass"]["re"] == pytest.approx(1.0, rel=1e-12)
            assert atom["mass"]["im"] == 0.0

    def test_bk(self, capsys):
        obj = run_json(capsys, ["bk", COMB, "--T", "4"])

        masses = [a["mass"]["re"] for a in obj["atoms"]]
        assert masses == pytest.approx([1.0, 1 / 2, 1 / 3, 1 / 4], rel=1e-12)

    def test_bk_csv(self, capsys):
        assert main(["bk", COMB, "--T", "2", "--out", "csv"]) == EXIT_OK

        lines = capsys.readouterr().out.splitlines()
        assert lines == [
            "# quantity: b_k (atoms of -log f)",
            "freq,mass_re,mass_im",
            "1,1,0",
            "2,0.5,0",
        ]

    def test_output_file(self, capsys, tmpdir):
        path = tmpdir.join("atoms.json")

        assert main(["bk", COMB, "--T", "3", "-o", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert len(json.loads(path.read())["atoms"]) == 3

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(COMB))
        obj = run_json(capsys, ["atoms", "--T", "2"])

        assert len(obj["atoms"]) == 2

    @pytest.mark.parametrize(
        "argv,match",
        [
            (["bk", "{bad"], "malformed JSON at line 1, column 2"),
            (["bk", "[1, 2]"], "expected a JSON object"),
            (["bk", '{"case": "comb"}'], "needs 'lambdas' and 'coeffs'"),
            (["m0", '{"kind": "spiral"}'], "unknown divisor kind"),
            (["verify-pn", "comb"], "needs a 'phi' test function"),
        ],
    )
    def test_invalid_input(self, capsys, argv, match):
        assert main(argv) == EXIT_INVALID
        assert match in capsys.readouterr().err

    def test_m0(self, capsys):
        obj = run_json(capsys, ["m0", "sinh", "--tmax", "256"])

        assert obj["case"] == "sinh"
        assert obj["m0"] == 2
        assert obj["lines_agree"]
        assert {v["verdict"] for v in obj["verdicts"] if v["m"] == 0} == {"divergent"}

    def test_analyze(self, capsys):
        obj = run_json(capsys, ["analyze", "sinh", "--tmax", "256"])

        assert obj["d"] == 2
        assert obj["m0"] == 2
        assert obj["gW"] == 0
        assert obj["classification"] == "HadamardType"
        assert "m0" in obj["definitions"]

    def test_sharpness(self, capsys):
        obj = run_json(capsys, ["sharpness", "--k", "10", "--eps", "0.1"])

        assert obj["eps"] == 0.1
        assert len(obj["results"]) == 1
        assert obj["results"][0]["k"] == 10
        assert obj["results"][0]["lower_bound_check"] is True

    def test_gamma_check(self, capsys):
        obj = run_json(capsys, ["gamma-check", "--n", "50"])

        assert obj["passed"] is True
        assert obj["bound"]["n"] == 50
        assert obj["bound"]["failures"] == 0
        assert obj["bound"]["max_ratio"] <= 1.0

    def test_m0_lattice_default_tmax(self, capsys):
        start = time.perf_counter()
        obj = run_json(capsys, ["m0", SINH_LATTICE, "--c", "0.5", "--c", "2"])

        assert time.perf_counter() - start < 60
        assert obj["m0"] == 2
        assert obj["cs"] == [0.5, 2.0]
        assert obj["lines_agree"]

    def test_m0_truncated_sum_beyond_radius(self, capsys):
        lattice = '{"kind": "vertical_lattice", "step": 3.141592653589793, "offset": -1.0}'

        assert main(["m0", lattice]) == EXIT_NOT_CONVERGED
        assert "only reliable for |s| <=" in capsys.readouterr().err

    def test_m0_line_through_pole(self, capsys):
        divisor = (
            '{"kind": "explicit", "points": [{"re": 1.0, "im": 0.0, "mult": -1}], '
            '"sigma1": -1.0}'
        )

        assert main(["m0", divisor, "--c", "1", "--c", "2", "--tmax", "64"]) == EXIT_INVALID
        err = capsys.readouterr().err
        assert "pole of multiplicity 1" in err
        assert "Traceback" not in err
