"""Command-line surface: canonical output, determinism, exit codes."""

import io
import json
import random

import pytest

from pirsi import Database, PrimeField, ProblemParams
from pirsi.cli import main
from pirsi.wire import read_db, write_db
from conftest import WORKED_VALUES


@pytest.fixture
def worked_db_file(tmp_path, gf13):
    values = tuple(gf13.element(WORKED_VALUES[i]) for i in range(1, 14))
    path = tmp_path / "worked.db"
    with open(path, "w") as fh:
        write_db(fh, Database(values, gf13))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_rate_worked_example(capsys):
    code, out, _ = run_cli(capsys, "rate", "--k", "13", "--m", "5", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["r_star"] == 6
    assert doc["size_profile"] == [5, 4, 4]
    assert doc["side_profile"] == [3, 2, 2]
    assert doc["m_bar"] == 2 and doc["t"] == 1 and doc["l_star"] == 3
    assert doc["trivial"] is False


def test_rate_is_byte_deterministic(capsys):
    _, first, _ = run_cli(capsys, "rate", "--k", "20", "--m", "4", "--n", "2")
    _, second, _ = run_cli(capsys, "rate", "--k", "20", "--m", "4", "--n", "2")
    assert first == second
    assert first.endswith("\n")


def test_rate_rejects_bad_params(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rate", "--k", "3", "--m", "2", "--n", "2"])
    assert exc.value.code == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_simulate_round_trip(capsys, worked_db_file):
    args = [
        "simulate", "--k", "13", "--m", "5", "--n", "2",
        "--demands", "2,5", "--side", "1,4,6,7,9",
        "--db", worked_db_file, "--seed", "11",
    ]
    code, out, err = run_cli(capsys, *args)
    assert code == 0
    doc = json.loads(out)
    assert doc["decoded"] == {"2": 7, "5": 9}
    assert doc["seed"] == 11
    assert doc["plan"]["r_star"] == 6
    assert sum(block["r"] for block in doc["query"]["blocks"]) == 6
    assert "timing_ms=" in err

    code2, out2, _ = run_cli(capsys, *args)
    assert code2 == 0 and out2 == out  # byte-for-byte replay

    _, out3, _ = run_cli(capsys, *args[:-1], "12")
    assert json.loads(out3)["decoded"] == {"2": 7, "5": 9}


def test_simulate_query_document_is_demand_free(capsys, worked_db_file):
    code, out, _ = run_cli(
        capsys, "simulate", "--k", "13", "--m", "5", "--n", "2",
        "--demands", "2,5", "--side", "1,4,6,7,9", "--db", worked_db_file,
    )
    assert code == 0
    query = json.loads(out)["query"]

    def keys_of(node):
        if isinstance(node, dict):
            for key, value in node.items():
                yield key
                yield from keys_of(value)
        elif isinstance(node, list):
            for value in node:
                yield from keys_of(value)

    assert set(keys_of(query)) <= {"p", "blocks", "support", "r", "entries"}


def test_simulate_seed_env_fallback(capsys, worked_db_file, monkeypatch):
    args = [
        "simulate", "--k", "13", "--m", "5", "--n", "2",
        "--demands", "2,5", "--side", "1,4,6,7,9", "--db", worked_db_file,
    ]
    monkeypatch.setenv("PIR_SEED", "77")
    _, from_env, _ = run_cli(capsys, *args)
    monkeypatch.delenv("PIR_SEED")
    _, from_flag, _ = run_cli(capsys, *args, "--seed", "77")
    assert from_env == from_flag
    _, from_default, _ = run_cli(capsys, *args)
    assert json.loads(from_default)["seed"] == 0


def test_simulate_usage_errors(capsys, worked_db_file):
    base = ["simulate", "--k", "13", "--m", "5", "--n", "2", "--db", worked_db_file]
    for extra in (
        ["--demands", "2", "--side", "1,4,6,7,9"],      # wrong demand count
        ["--demands", "2,5", "--side", "1,4"],          # wrong side count
        ["--demands", "2,5", "--side", "2,4,6,7,9"],    # overlap
    ):
        with pytest.raises(SystemExit) as exc:
            main(base + extra)
        assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([
            "simulate", "--k", "12", "--m", "5", "--n", "2",
            "--demands", "2,5", "--side", "1,4,6,7,9", "--db", worked_db_file,
        ])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([
            "simulate", "--k", "13", "--m", "5", "--n", "2",
            "--demands", "2,5", "--side", "1,4,6,7,9", "--db", "/nonexistent.db",
        ])
    assert exc.value.code == 2


def test_privacy_exact_small_instance(capsys):
    code, out, _ = run_cli(
        capsys, "privacy-exact", "--k", "5", "--m", "1", "--n", "1", "--seed", "4"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["uniform"] is True
    assert doc["prior"] == "1/5"
    assert doc["max_deviation"] == "0/1"
    assert len(doc["posteriors"]) == 5
    assert all(v == "1/5" for v in doc["posteriors"].values())


def test_privacy_exact_enforces_cap(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["privacy-exact", "--k", "14", "--m", "5", "--n", "2"])
    assert exc.value.code == 2


def test_privacy_mc_reports(capsys):
    code, out, _ = run_cli(
        capsys, "privacy-mc", "--k", "7", "--m", "3", "--n", "1",
        "--wa", "2", "--wb", "5", "--trials", "400", "--seed", "9",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["trials"] == 400
    assert "/" in doc["tvd"]
    assert isinstance(doc["consistent"], bool)


def test_privacy_mc_validates_demand_sets():
    with pytest.raises(SystemExit) as exc:
        main(["privacy-mc", "--k", "7", "--m", "3", "--n", "1",
              "--wa", "2,3", "--wb", "5", "--trials", "10"])
    assert exc.value.code == 2


def test_oracle_sweep(capsys):
    code, out, err = run_cli(capsys, "oracle", "--k-max", "7")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k m n oracle formula match"
    assert all(line.endswith(" true") for line in lines[1:])
    # one row per instance with 1 <= n, 0 <= m, n + m <= k <= 7
    assert len(lines) - 1 == sum(
        1 for k in range(1, 8) for n in range(1, k + 1) for m in range(0, k - n + 1)
    )
    assert "0 mismatches" in err


def test_oracle_exhaustive_small(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--k-max", "5", "--exhaustive")
    assert code == 0
    assert all(line.endswith(" true") for line in out.strip().splitlines()[1:])


def test_oracle_rejects_out_of_range(capsys):
    for bad in ("0", "15"):
        with pytest.raises(SystemExit) as exc:
            main(["oracle", "--k-max", bad])
        assert exc.value.code == 2


def test_db_file_round_trip(tmp_path):
    gf = PrimeField(23)
    db = Database(tuple(gf.element(v) for v in (5, 0, 17, 22)), gf)
    path = tmp_path / "round.db"
    with open(path, "w") as fh:
        write_db(fh, db)
    with open(path) as fh:
        loaded = read_db(fh)
    assert loaded == db
    header = path.read_text().splitlines()[0]
    assert header == "pir-db v1 p=23 k=4"


def test_db_file_rejects_malformed():
    with pytest.raises(ValueError, match="malformed database header"):
        read_db(io.StringIO("not-a-db 1 2 3\n"))
    with pytest.raises(ValueError, match="ends after"):
        read_db(io.StringIO("pir-db v1 p=23 k=4\n5\n0\n"))
