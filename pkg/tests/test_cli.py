import json

import pytest

from conftest import DATA, GOLDEN
from groupsft.cli import ALTERNATE, ERROR, OK, main
from groupsft.groups import CosetTable
from groupsft.sft import Sft


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def test_rewrite(capsys):
    code, d = structured(capsys, "rewrite", DATA / "abc.grp")
    assert code == OK
    assert d["result"]["presentation"] == "< t1 t2 t3 | t1 t3^-1 t2 t3 >"
    assert d["manifest"]["command"] == "rewrite" and d["manifest"]["parameters"]["seed"] == 0
    code, d = structured(capsys, "rewrite", DATA / "split.grp")
    assert code == ALTERNATE and d["result"]["absent_generator"] == "c"


def test_text_output_starts_with_manifest(capsys):
    code, out, _ = run(capsys, "rewrite", DATA / "abc.grp", "--seed", "7")
    assert code == OK
    first = out.splitlines()[0]
    assert first.startswith("manifest: ")
    assert json.loads(first[len("manifest: "):])["parameters"]["seed"] == 7
    assert "zero exponent generator: t3" in out


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "abc.grp", "--radius", "2")
    assert code == OK
    assert "PROVED" in out and "CITED" in out and "EVIDENCE" in out
    code, d = structured(capsys, "analyze", DATA / "split.grp")
    assert code == ALTERNATE and d["result"]["kind"] == "infinite-ends"


def test_analyze_reports_the_failing_stage(capsys):
    # the quotient table is over a different group
    code, out, err = run(capsys, "analyze", DATA / "abc.grp", "--plug", DATA / "plug_f2.sft",
                         "--radius", "1", "--quotient", GOLDEN / "z2_index1.ct")
    assert code == ERROR and out == ""
    assert err.startswith("error: [periodic-search]")


def test_extend(capsys, tmp_path):
    out_file = tmp_path / "ext.sft"
    code, d = structured(capsys, "extend", DATA / "golden_mean_z2.sft", DATA / "z2_in_z2xz2.json",
                         "--mode", "right", "-o", out_file)
    assert code == OK
    assert (d["result"]["type1"], d["result"]["type2"], d["result"]["index"]) == (16, 4, 2)
    assert len(Sft.from_text(out_file.read_text()).forbidden) == 20
    code, d = structured(capsys, "extend", DATA / "golden_mean_z2.sft", DATA / "z2_in_z2xz2_free.json")
    assert code == OK and d["result"]["patterns"] == 2
    code, _, err = run(capsys, "extend", DATA / "golden_mean_z2.sft", DATA / "z2_in_z2xz2_free.json",
                       "--mode", "right")
    assert code == ERROR and "coset table" in err


def test_tile(capsys):
    code, d = structured(capsys, "tile", DATA / "golden_mean_z2.sft", "--radius", "2")
    assert code == OK and d["result"]["outcome"] == "satisfiable" and d["result"]["ball_size"] == 13
    code, d = structured(capsys, "tile", DATA / "golden_mean_z2.sft", "--radius", "3", "--budget", "3")
    assert code == ALTERNATE and d["result"]["outcome"] == "budget-exceeded"


def test_search_periodic(capsys):
    code, d = structured(capsys, "search-periodic", DATA / "z_difference.sft", DATA / "z_index1.ct")
    assert code == ALTERNATE and d["result"]["outcome"] == "none-up-to-quotient"
    code, d = structured(capsys, "search-periodic", DATA / "z_difference.sft", DATA / "z_index1.ct",
                         "--quotient", DATA / "z_index2.ct")
    assert code == OK and d["result"]["coloring"] == [["1", 0], ["a", 1]]


def test_cosets(capsys, tmp_path):
    out_file = tmp_path / "k.ct"
    code, out, _ = run(capsys, "cosets", DATA / "klein.grp", "--subgroup", "a", "--subgroup", "b^2",
                       "-o", out_file)
    assert code == OK and "index: 2" in out
    assert CosetTable.from_text(out_file.read_text()) == CosetTable.from_text((GOLDEN / "klein_a_b2.ct").read_text())
    code, _, err = run(capsys, "cosets", DATA / "z.grp", "--budget", "20")
    assert code == ERROR and err.startswith("error:")


def test_tietze(capsys):
    code, d = structured(capsys, "tietze", DATA / "abc.grp", "--add-generator", "t=a b")
    assert code == OK and d["result"]["presentation"] == "< a b c t | a b c , t b^-1 a^-1 >"
    code, _, _ = run(capsys, "tietze", DATA / "abc.grp", "--add-relator", "a^2")
    assert code == ERROR
    code, _, _ = run(capsys, "tietze", DATA / "abc.grp", "--add-relator", "a^2", "--unchecked")
    assert code == OK


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "S1")
    assert code == OK and "rigid: true" in out
    code, d = structured(capsys, "classify", "S2")
    assert d["result"]["rigid"] is False
    code, _, _ = run(capsys, "classify", "Q7")
    assert code == ERROR


@pytest.mark.parametrize("argv", [
    ["rewrite", DATA / "abc.grp"],
    ["analyze", DATA / "genus2.grp", "--radius", "2"],
    ["tile", DATA / "golden_mean_z2.sft", "--radius", "2", "--format", "structured"],
])
def test_output_is_reproducible(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_malformed_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.sft"
    bad.write_text("{ not json")
    assert run(capsys, "tile", bad)[0] == ERROR
    bad.write_text(json.dumps({"format": "sft/1", "alphabet": [0]}))
    assert run(capsys, "tile", bad)[0] == ERROR
    grp = tmp_path / "bad.grp"
    grp.write_text("< a b | a c >")
    code, _, err = run(capsys, "rewrite", grp)
    assert code == ERROR and err == "error: 1:11: relator uses unlisted generator 'c'\n"
    assert run(capsys, "rewrite", tmp_path / "missing.grp")[0] == ERROR
