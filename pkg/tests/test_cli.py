import json

import pytest

from xorlab.cli import main
from xorlab.problems import BoolMatrix, materialize, rankone_problem


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")]


def test_rpdt_sim(capsys):
    code, recs = run(capsys, "rpdt-sim", "--n", "2", "--trials", "300", "--seed", "1")
    assert code == 0
    by_class = {r["matrix_class"]: r for r in recs}
    assert by_class["rank_le1"]["accept_rate"] == 1.0
    assert by_class["rank_ge2"]["accept_rate"] < 1.0


def test_eq_protocol(capsys):
    code, recs = run(capsys, "eq-protocol", "--problem", "rankone:2", "--exhaustive")
    assert code == 0
    assert recs[0]["pairs_checked"] == 256 and recs[0]["correct"]


def test_spectral(capsys):
    code, recs = run(capsys, "spectral", "--problem", "rankone:2", "--approx", "1/3")
    assert code == 0
    r = recs[0]
    assert (r["exact_norm_num"], r["exact_norm_den"]) == (5, 2)
    assert r["approx_norm"] == pytest.approx(7 / 6, abs=1e-7)
    assert r["ratio"] == pytest.approx(15 / 7, abs=1e-6)


def test_triples_and_holder_csv(capsys):
    code, recs = run(capsys, "triples", "--n", "2")
    assert code == 0 and recs[0]["c1"] == 10 and recs[0]["c3"] == 640
    code = main(["holder", "--max-n", "3"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "n,c1,c3,bound"
    assert out[1].startswith("1,2,8,1.0")


def test_fbc_round_maxrect(capsys, tmp_path):
    target = tmp_path / "m.txt"
    target.write_text(materialize(rankone_problem(1)).to_text())
    code, recs = run(capsys, "fbc", "--target", str(target))
    assert code == 0 and recs[0]["blocky"] in (True, False)
    code, recs = run(capsys, "round", "--target", "eq:8", "--seed", "5")
    assert code == 0 and recs[0]["verified"]
    code, recs = run(capsys, "maxrect", "--target", "eq:4")
    assert code == 0 and recs[0]["maxrect"] == 1.0


def test_nd_pipeline(capsys):
    code, recs = run(capsys, "nd-pipeline", "--problem", "rankone:2", "--seed", "9")
    assert code == 0
    r = recs[0]
    assert r["nd_verified"] and r["roundtrip_verified"] and r["pass"]
    assert r["fbc_weight"] <= r["fbc_weight_bound"]


def test_size_guard_exit_code(capsys):
    assert main(["triples", "--n", "9"]) == 3


def test_unknown_command_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_reports_reproducible(capsys):
    _, a = run(capsys, "rpdt-sim", "--n", "2", "--trials", "100", "--seed", "4")
    _, b = run(capsys, "rpdt-sim", "--n", "2", "--trials", "100", "--seed", "4")
    strip = lambda recs: [{k: v for k, v in r.items() if k != "wall_time_s"} for r in recs]
    assert strip(a) == strip(b)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("trials=50\nseed=6\n")
    code, recs = run(capsys, "rpdt-sim", "--n", "2", "--config", str(cfg))
    assert code == 0 and recs[0]["trials"] == 50


def test_output_file(tmp_path):
    out = tmp_path / "report.jsonl"
    code = main(["triples", "--n", "2", "--output", str(out)])
    assert code == 0
    rec = json.loads(out.read_text().splitlines()[0])
    assert rec["c1"] == 10


def test_verify_all(capsys):
    code, recs = run(capsys, "verify-all", "--max-n", "2", "--seed", "7")
    assert code == 0
    assert all(r["pass"] for r in recs)
