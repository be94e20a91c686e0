import json

import pytest

from growthtight.cli import main, parse_presentation, to_jsonable
from growthtight.errors import UnsupportedModel
from fractions import Fraction


@pytest.fixture
def files(tmp_path):
    (tmp_path / "g.txt").write_text("generators: a b\n")
    (tmp_path / "h.txt").write_text("# a presentation with a relator\ngenerators: x y\nrelators: xx\n")
    (tmp_path / "c4.txt").write_text("0 1\n1 2\n2 3\n3 0\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_growth_json(capsys):
    code, out = run(capsys, "growth", "--model", "builtin:free:2", "--radius", 10)
    d = json.loads(out)
    assert code == 0 and d["counts"][-1] == 2 * 3**10 - 1
    assert {"window", "omega", "residual"} <= d.keys()


def test_growth_csv(capsys):
    code, out = run(capsys, "growth", "--model", "builtin:cyclic-product:2,inf", "--radius", 3,
                    "--format", "csv")
    assert code == 0 and out.splitlines() == ["radius,count", "0,1", "1,4", "2,10", "3,22"]


def test_growth_from_presentation(capsys, files):
    code, out = run(capsys, "growth", "--model", files / "h.txt", "--radius", 4, "--format", "csv")
    assert code == 0 and out.splitlines()[-1] == "4,46"


def test_delta_sampled(capsys, files):
    code, out = run(capsys, "delta", "--space", files / "c4.txt", "--mode", "sample:1000",
                    "--seed", 7)
    d = json.loads(out)
    assert code == 0 and d["delta"] == 1 and d["seed"] == 7 and len(d["witnesses"]) == 4


def test_tripod_scans(capsys):
    code, out = run(capsys, "tripod", "--space", "builtin:tree:3")
    assert code == 0 and json.loads(out)["ok"]


def test_net(capsys):
    code, out = run(capsys, "net", "--model", "builtin:cyclic-product:inf,1", "--rho", 3,
                    "--radius", 10, "--compare-radius", 5, "--lambda", 2, "--lambda-prime", 704)
    d = json.loads(out)
    assert code == 0 and d["members"] == ["e", "aaaa", "AAAA", "aaaaaaaa", "AAAAAAAA"]
    assert d["comparison"]["holds"]


def test_net_comparison_failure_exit_code(capsys):
    code, _ = run(capsys, "net", "--model", "builtin:cyclic-product:inf,1", "--rho", 3,
                  "--radius", 10, "--compare-radius", 5, "--lambda", 2, "--lambda-prime", 1)
    assert code == 1


def test_orbit(capsys):
    code, out = run(capsys, "orbit", "--xi", "b", "--check", "symmetric", "--max-len", 20,
                    "--samples", 100, "--seed", 1)
    d = json.loads(out)
    assert code == 0 and d["report"]["ok"] and d["seed"] == 1


def test_embed_words(capsys, files):
    code, out = run(capsys, "embed", "--presentation", files / "g.txt", "--normal-closure", "b",
                    "--kappa", 4, "--scaled", "--word", "e*aaaa", "aaa")
    d = json.loads(out)
    assert code == 0 and d["images"] == {"e*aaaa": "BBBBBBBaaaa", "aaa": "aaa"}


def test_tightness(capsys, files):
    code, out = run(capsys, "tightness", "--presentation", files / "g.txt", "--normal-closure",
                    "aa", "--radius-q", 20)
    d = json.loads(out)
    assert code == 0 and d["strict_gap_observed"] and d["xi"] == "aa"
    for key in ("omega_G", "omega_quotient", "constants", "lambda_tilde", "gap_bound",
                "phi_injective_on_sample", "phi_nonexpanding_on_sample"):
        assert key in d


def test_determinism(capsys, files):
    argv = ("tightness", "--presentation", files / "g.txt", "--normal-closure", "b")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_output_file_and_io_error(capsys, files):
    target = files / "out.json"
    assert main(["growth", "--model", "builtin:abelian:2", "--radius", "5", "-o", str(target)]) == 0
    assert json.loads(target.read_text())["counts"][-1] == 61
    assert main(["growth", "--model", "builtin:free:2", "--radius", "2",
                 "-o", str(files / "missing" / "x.json")]) == 3
    assert main(["growth", "--model", str(files / "nope.txt"), "--radius", "2"]) == 3


@pytest.mark.parametrize("argv", [
    ["growth", "--model", "builtin:free:2"],
    ["growth", "--model", "builtin:free:2", "--radius", "3", "--bogus"],
    ["growth", "--model", "builtin:weird:2", "--radius", "3"],
    ["frobnicate"],
    ["orbit", "--xi", "b", "--check", "nothing"],
    ["delta", "--space", "builtin:tree:2", "--mode", "sample:x"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_ambient_must_be_free(files, capsys):
    assert main(["tightness", "--presentation", str(files / "h.txt"), "--normal-closure", "y"]) == 2


def test_presentation_parsing():
    p = parse_presentation("generators: x y\nrelators: xyXY, xx\n")
    assert p.rank == 2 and p.relators == ((1, 2, -1, -2), (1, 1))
    with pytest.raises(Exception):
        parse_presentation("relators: aa\n")


def test_json_numbers():
    assert to_jsonable(Fraction(3, 2)) == "3/2" and to_jsonable(Fraction(4, 2)) == 2
    assert to_jsonable(0.1 + 0.2) == 0.3
    assert to_jsonable({"w": (1, 2)}) == {"w": [1, 2]}
