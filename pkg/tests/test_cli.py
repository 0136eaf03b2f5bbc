"""Command-line behavior: output text and the 0/1/2 exit-code contract."""

import json

import pytest

from causalworlds import cli
from conftest import FIXTURES

MED = str(FIXTURES / "medical.world.json")
MED_CD = str(FIXTURES / "medical.canonical.json")
MG = str(FIXTURES / "medical_g.world.json")
MG_CD = str(FIXTURES / "medical_g.canonical.json")
MG_SEM = str(FIXTURES / "medical_g.sem.json")
MG_FUN = str(FIXTURES / "medical_g.functional.json")
THAT = str(FIXTURES / "medical_that.world.json")
COIN_D = str(FIXTURES / "coin.diagram.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, err = run(capsys, "validate", MED)
    assert (code, err) == (0, "")
    assert out == "ok: world_table\n"


def test_validate_missing_file(capsys):
    code, out, err = run(capsys, "validate", "no/such/file.json")
    assert code == 2
    assert "error" in err and out == ""


def test_validate_schema_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert err.startswith("schema error")


def test_outcome(capsys):
    code, out, _ = run(capsys, "outcome", MED, "--state", "1", "--act", "r=take")
    assert code == 0
    assert out == "t=yes c=yes\n"


def test_responsive_exit_codes(capsys):
    code, out, _ = run(capsys, "responsive", MED, "--vars", "c")
    assert code == 0
    assert out == "{c} is responsive to the decisions\n"
    code, out, _ = run(capsys, "responsive", MED, "--vars", "c", "--limit", "t")
    assert code == 1
    assert out == "{c} is unresponsive to the decisions limited by {t}\n"


def test_responsive_decision_subset(capsys):
    code, out, _ = run(
        capsys, "responsive", MG, "--vars", "g", "--decisions", "r,t_hat"
    )
    assert code == 1
    assert "unresponsive to {r, t_hat}" in out


def test_causes(capsys):
    code, out, _ = run(capsys, "causes", MED, "--var", "c")
    assert code == 0
    assert out == "{r}\n{t}\n"


def test_causes_instances(capsys):
    code, out, _ = run(capsys, "causes", MED, "--var", "c", "--instances")
    assert code == 0
    assert "{t} | {t=no} {t=yes}" in out


def test_intervene(capsys):
    code, out, _ = run(
        capsys, "intervene", THAT, "--decisions", "t_hat", "--on", "t", "--atomic"
    )
    assert code == 0
    assert out == "t_hat is an atomic intervention on t\n"
    code, out, _ = run(
        capsys, "intervene", THAT, "--decisions", "t_hat", "--on", "c", "--atomic"
    )
    assert code == 1


def test_mapping_lists_response_types(capsys):
    code, out, _ = run(capsys, "mapping", MED, "--targets", "t", "--args", "r")
    assert code == 0
    assert out.splitlines() == [
        "t(r): 4 instances",
        "0 yes|yes always_taker",
        "1 yes|no complier",
        "2 no|yes defier",
        "3 no|no never_taker",
    ]


def test_mapping_states_read(capsys):
    code, out, _ = run(
        capsys, "mapping", MED, "--targets", "t", "--args", "r", "--states"
    )
    assert code == 0
    assert "state 1: yes|no complier" in out
    assert "state 12: no|no never_taker" in out


def test_mapping_undefined_is_clean_negative(capsys):
    code, out, err = run(
        capsys, "mapping", MED, "--targets", "c", "--args", "t", "--states"
    )
    assert code == 1
    assert err == ""
    assert "9, 10, 11, 12" in out


def test_canonicalize_round_trip(tmp_path, capsys):
    out_file = tmp_path / "med.canonical.json"
    code, out, _ = run(capsys, "canonicalize", MED, "-o", str(out_file))
    assert code == 0
    assert json.loads(out_file.read_text()) == json.loads(
        (FIXTURES / "medical.canonical.json").read_text()
    )


def test_canonicalize_to_stdout(capsys):
    code, out, _ = run(capsys, "canonicalize", MED)
    assert code == 0
    assert json.loads(out)["model"] == "canonical"


def test_count_params(capsys):
    for path, lines in [
        (MG_CD, ["g 1", "t(r,t_hat) 6", "c(t) 6", "total 13"]),
        (MG_SEM, ["g(g_hat) 1", "t(r,g,t_hat) 15", "c(t,g,c_hat) 15", "total 31"]),
        (MG_FUN, ["block(t(r,t_hat),c(t,c_hat)) 15", "total 15"]),
    ]:
        code, out, _ = run(capsys, "count-params", path)
        assert code == 0
        assert out.splitlines() == lines


def test_sem_convert_both_ways(tmp_path, capsys):
    sem_file = tmp_path / "m.json"
    code, _, _ = run(capsys, "sem-convert", MED_CD, "-o", str(sem_file))
    assert code == 0
    assert json.loads(sem_file.read_text())["model"] == "sem"
    code, out, _ = run(capsys, "sem-convert", str(sem_file))
    assert code == 0
    assert json.loads(out)["model"] == "canonical"


def test_infer(capsys):
    code, out, _ = run(
        capsys, "infer", MED_CD, "--act", "r=take", "--query", "t,c"
    )
    assert code == 0
    assert out.splitlines() == [
        "t=yes c=yes 0.250000000",
        "t=yes c=no 0.250000000",
        "t=no c=yes 0.250000000",
        "t=no c=no 0.250000000",
    ]


def test_infer_with_evidence(capsys):
    code, out, _ = run(
        capsys,
        "infer", MED_CD, "--act", "r=take", "--evidence", "t=yes", "--query", "c",
    )
    assert code == 0
    assert out.splitlines() == ["c=yes 0.500000000", "c=no 0.500000000"]


def test_cf_medical(capsys):
    code, out, _ = run(
        capsys,
        "cf", MED_CD,
        "--factual", "r=take,t=yes,c=yes",
        "--cf", "r=dont_take",
        "--query", "c",
    )
    assert code == 0
    assert out.splitlines() == ["c=yes 0.666666667", "c=no 0.333333333"]


def test_cf_unresponsive_query_label(capsys):
    code, out, _ = run(
        capsys,
        "cf", MG_CD,
        "--factual", "r=take,t_hat=idle,t=yes,c=yes",
        "--cf", "r=dont_take",
        "--query", "g,c",
    )
    assert code == 0
    assert out.splitlines() == [
        "g=present c=yes 0.208633094",
        "g=present c=no 0.143884892",
        "g=absent c=yes 0.485611511",
        "g=absent c=no 0.161870504",
    ]


def test_cf_impossible_record(capsys):
    code, out, err = run(
        capsys,
        "cf", MED_CD,
        "--factual", "r=take,t=yes,c=yes",
        "--cf", "r=take",
        "--cf-evidence", "c'=no",
        "--query", "c",
    )
    assert code == 1
    assert "zero total probability mass" in out
    assert err == ""


def test_cf_rejects_non_decision_change(capsys):
    code, out, err = run(
        capsys,
        "cf", MED_CD,
        "--factual", "r=take,t=yes",
        "--cf", "t=no",
        "--query", "c",
    )
    assert code == 2
    assert "non-decision" in err


def test_voi(capsys):
    code, out, _ = run(capsys, "voi", COIN_D, "--observe", "coin")
    assert code == 0
    assert out == "value of observing coin: 0.500000000\n"


def test_voi_responsive_refused(capsys):
    code, out, err = run(capsys, "voi", COIN_D, "--observe", "win")
    assert code == 1
    assert "responds to the decisions" in out
    assert err == ""


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
