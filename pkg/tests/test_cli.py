import csv
import io
import json

import pytest

from qhyperplane import cli
from qhyperplane.errors import DegenerateParameterError


def run(tmp_path, config, *args):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return cli.main(["--config", str(path), *args])


def P(*dims):
    return {"kind": "projective_product", "dims": list(dims)}


def test_gw_quintic(tmp_path, capsys):
    assert run(tmp_path, {"space": P(4), "bundle": [[5]], "order": 3, "command": "gw"}) == 0
    doc = json.loads(capsys.readouterr().out)
    n = {r["degree"]: r["value"] for r in doc["rows"] if r["quantity"] == "n"}
    assert n == {"1": "2875/1", "2": "609250/1", "3": "317206375/1"}
    assert all(r["provenance"] for r in doc["rows"])


def test_flag_relations(tmp_path, capsys):
    assert run(tmp_path, {"space": {"kind": "flag_a", "n": 3}, "command": "flag-relations"}, "--format", "csv") == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["value"] for r in rows if r["quantity"] == "relation"][1] == "x1*x2 + x1*x3 + x2*x3 + q1 + q2"
    assert len([r for r in rows if r["quantity"] == "relation"]) == 3
    assert all(r["value"] == "1/1" for r in rows if r["quantity"] == "check")


def test_verify_classp(tmp_path, capsys):
    assert run(tmp_path, {"space": P(1), "order": 3, "command": "verify-classp"}) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert len(rows) == 4 and all(r["value"] == "1/1" for r in rows)


@pytest.mark.parametrize("command", ["ifun", "mirror", "recursion"])
def test_other_commands(tmp_path, capsys, command):
    space = P(1) if command == "recursion" else P(4)
    assert run(tmp_path, {"space": space, "bundle": [] if command == "recursion" else [[5]], "order": 2, "command": command}) == 0
    assert json.loads(capsys.readouterr().out)["rows"]


def test_oracle(tmp_path, capsys):
    cfg = {"space": {"kind": "grassmannian", "k": 2, "n": 5}, "bundle": [[5]], "command": "oracle"}
    assert run(tmp_path, cfg) == 0
    assert json.loads(capsys.readouterr().out)["rows"][0]["value"] == "2875/1"


def test_flags_override_config(tmp_path, capsys):
    assert run(tmp_path, {"space": P(4), "bundle": [[5]], "order": 1, "command": "gw"}, "--order", "2") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["order"] == 2


def test_positional_command(tmp_path, capsys):
    cfg = {"space": {"kind": "grassmannian", "k": 2, "n": 4}, "sym_power": 3}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert cli.main(["oracle", "--config", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["rows"][0]["value"] == "27/1"


def test_out_dir_is_deterministic(tmp_path):
    cfg = {"space": P(1), "order": 2, "command": "recursion", "eps_seed": 3}
    assert run(tmp_path, cfg, "--out", str(tmp_path / "a")) == 0
    assert run(tmp_path, cfg, "--out", str(tmp_path / "b")) == 0
    for ext in ("json", "csv"):
        a = (tmp_path / "a" / f"recursion.{ext}").read_bytes()
        assert a == (tmp_path / "b" / f"recursion.{ext}").read_bytes()
    header = (tmp_path / "a" / "recursion.csv").read_text().splitlines()[0]
    assert header == "quantity,degree,index,value,provenance"


def test_seed_changes_equivariant_output(tmp_path, capsys):
    cfg = {"space": P(1), "order": 1, "command": "recursion"}
    run(tmp_path, cfg, "--eps-seed", "1")
    a = capsys.readouterr().out
    run(tmp_path, cfg, "--eps-seed", "2")
    assert a != capsys.readouterr().out


@pytest.mark.parametrize(
    "cfg",
    [
        {"space": P(2), "bundle": [[-1]], "command": "ifun"},
        {"space": P(1), "eps": [1, 1], "command": "recursion"},
        {"space": {"kind": "grassmannian", "k": 4, "n": 4}, "command": "recursion"},
        {"space": {"kind": "cone"}, "command": "recursion"},
        {"space": P(2), "command": "nope"},
        {"space": P(2), "order": -1, "command": "ifun"},
        {"space": {"kind": "flag_a", "n": 3}, "command": "gw"},
        {"space": P(2), "bundle": [[1, 1]], "command": "ifun"},
        {"space": P(3), "bundle": [[2]], "order": 1, "command": "gw"},
    ],
)
def test_config_errors(tmp_path, capsys, cfg):
    assert run(tmp_path, cfg) == 2
    assert "config error" in capsys.readouterr().err


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["--config", str(bad)]) == 2


def test_explicit_degenerate_eps_exits_4(tmp_path, capsys):
    cfg = {"space": P(2), "eps": [1, 2, 3], "order": 2, "command": "recursion"}
    assert run(tmp_path, cfg) == 4


def test_retries_exhausted_exit_4(tmp_path, monkeypatch):
    seeds = []

    def always_degenerate(cfg, seed):
        seeds.append(seed)
        raise DegenerateParameterError("forced")

    monkeypatch.setitem(cli.HANDLERS, "recursion", always_degenerate)
    assert run(tmp_path, {"space": P(1), "eps_seed": 10, "command": "recursion"}) == 4
    assert seeds == [10, 11, 12, 13, 14]


def test_retry_recovers(tmp_path, monkeypatch):
    real = cli.HANDLERS["recursion"]

    def flaky(cfg, seed):
        if seed == 0:
            raise DegenerateParameterError("forced")
        return real(cfg, seed)

    monkeypatch.setitem(cli.HANDLERS, "recursion", flaky)
    assert run(tmp_path, {"space": P(1), "order": 1, "command": "recursion"}) == 0


def test_consistency_failure_exit_3(tmp_path, monkeypatch):
    from qhyperplane.errors import ConsistencyError

    def broken(cfg, seed):
        raise ConsistencyError("hbar^-2 term does not vanish")

    monkeypatch.setitem(cli.HANDLERS, "gw", broken)
    assert run(tmp_path, {"space": P(4), "bundle": [[5]], "command": "gw"}) == 3


def test_failed_check_exit_3(tmp_path, monkeypatch):
    import qhyperplane.flag_qh as fq

    monkeypatch.setattr(fq, "q_zero_check", lambda n: False)
    assert run(tmp_path, {"space": {"kind": "flag_a", "n": 2}, "command": "flag-relations"}) == 3
