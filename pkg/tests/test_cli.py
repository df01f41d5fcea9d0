import subprocess
import sys

import pytest

from conftest import MODELS, SD_OFTEN
from featuremu.cli import main

COFFEE = str(MODELS / "coffee.fts")
EX3 = str(MODELS / "example3.fts")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_product(capsys):
    assert run(capsys, "check-product", "--model", COFFEE, "--formula", "<cd|C>true", "--product", "{C,D}")[:2] == (0, "HOLDS\n")
    assert run(capsys, "check-product", "--model", COFFEE, "--formula", "<cd|C>true", "--product", "{E}")[:2] == (1, "FAILS\n")
    assert run(capsys, "check-product", "--model", COFFEE, "--formula", "true", "--product", "{E}")[0] == 0


def test_check_product_witness_set_and_stats(capsys):
    code, out, _ = run(
        capsys, "check-product", "--model", COFFEE, "--formula-file", str(MODELS / "cd_possible.mcf"),
        "--product", "{C,E}", "--witness-set", "--stats",
    )
    assert code == 0
    assert "s0: {C,D} {C,E}" in out
    assert "modal depth 1" in out


def test_check_family(capsys):
    code, out, _ = run(capsys, "check-family", "--model", COFFEE, "--formula", SD_OFTEN, "--family-expr", "!(C|D)", "--per-product")
    assert code == 0 and out.startswith("HOLDS for family {{E}}")
    assert "{E}          HOLDS" in out
    assert run(capsys, "check-family", "--model", COFFEE, "--formula", SD_OFTEN, "--family", "{{C,E}}")[0] == 1
    assert run(capsys, "check-family", "--model", EX3, "--formula", "<<a|true>>true", "--family", "{{f,g},{g}}")[0] == 1


def test_check_family_warns_on_empty_family(capsys):
    code, _, err = run(capsys, "check-family", "--model", EX3, "--formula", "<<a|true>>true", "--family-expr", "false")
    assert code == 0 and "empty" in err


def test_check_all_products(capsys):
    code, out, _ = run(capsys, "check-all-products", "--model", COFFEE, "--formula", "true")
    assert code == 0 and "4/4" in out
    code, out, _ = run(capsys, "check-all-products", "--model", COFFEE, "--formula", str(MODELS / "sd_infinitely_often.mcf"))
    assert code == 1 and "DISAGREE" not in out


def test_project(capsys):
    code, out, _ = run(capsys, "project", "--model", COFFEE, "--product", "{E}")
    assert code == 0 and out.count("trans:") == 3
    code, out, _ = run(capsys, "project", "--model", COFFEE, "--product", "{C,D}")
    assert out.count("trans:") == 5


def test_translate(capsys):
    assert run(capsys, "translate", "sm", "--formula", "<ins|D>true", "--product", "{E}")[1] == "false\n"
    assert run(capsys, "translate", "fm", "--formula", "<<a|C>>X")[1] == "<a|C>X\n"
    assert run(capsys, "translate", "ruby-lift", "--formula", "<a|C>X")[1] == "<<a|C>>X\n"
    assert run(capsys, "translate", "nnf", "--formula", "![a|C]false")[1] == "<a|C>true\n"
    code, out, _ = run(capsys, "translate", "to-fo", "--model", COFFEE, "--formula", SD_OFTEN, "--family-expr", "!(C|D)")
    assert code == 0 and out.startswith("νX(P_x:PSet = P).")


@pytest.mark.parametrize(
    "argv",
    [
        ["check-product", "--model", COFFEE, "--formula", "<cd|C true", "--product", "{E}"],
        ["check-product", "--model", COFFEE, "--formula", "<cd|C>true", "--product", "{X}"],
        ["check-product", "--model", COFFEE, "--formula", "<<a|C>>true", "--product", "{E}"],
        ["check-product", "--model", "missing.fts", "--formula", "true", "--product", "{E}"],
        ["check-product", "--model", COFFEE, "--formula", "<a|C>Y", "--product", "{E}"],
        ["check-family", "--model", COFFEE, "--formula", "true", "--family-expr", "Q"],
        ["translate", "to-fo", "--model", COFFEE, "--formula", "!<<a|true>>true", "--family", "{}"],
    ],
)
def test_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check-product", "--model", COFFEE])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["check-family", "--model", COFFEE, "--formula", "true"])
    assert exc.value.code == 2


def test_campaign(capsys, tmp_path):
    out_file = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "campaign", "theorem1", "-n", "30", "--seed", "7", "--jsonl", str(out_file))
    assert code == 0 and "failures   0" in out
    assert len(out_file.read_text().splitlines()) == 30
    code, out, _ = run(capsys, "campaign", "eq3", "-n", "60", "--box-only", "--negation-free")
    assert code == 1 and "counterexample" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "featuremu", "check-product", "--model", COFFEE, "--formula", "<cd|C>true", "--product", "{C,D}"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "HOLDS\n"
