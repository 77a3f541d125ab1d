import json

import numpy as np
import pytest

from qclattice.cli import main

KEYGEN = "keygen --b 13 --n0 2 --dv 3 --L 4 --d 8 --seed 1".split()


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_keygen_writes_key_and_prints_size(tmp_path, capsys):
    out = tmp_path / "k.key"
    code, stdout, _ = run(
        capsys, "keygen", "--b", "43", "--n0", "6", "--dv", "3", "--L", "16",
        "--d", "61", "--seed", "1", "-o", str(out),
    )
    assert code == 0
    assert "key size: 214 bits" in stdout
    assert out.exists()


def test_keygen_missing_flag_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "keygen", "--n0", "6", "--dv", "3", "--L", "16",
                       "--seed", "1", "-o", str(tmp_path / "k.key"))
    assert code == 2
    assert "usage error" in err


def test_keygen_deterministic_files(tmp_path, capsys):
    p1, p2 = tmp_path / "a.key", tmp_path / "b.key"
    assert run(capsys, *KEYGEN, "-o", str(p1))[0] == 0
    assert run(capsys, *KEYGEN, "-o", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_keygen_invalid_params_exit_1(tmp_path, capsys):
    code, _, err = run(capsys, "keygen", "--b", "13", "--n0", "2", "--dv", "4",
                       "--L", "4", "--d", "8", "--seed", "1",
                       "-o", str(tmp_path / "k.key"))
    assert code == 1
    assert "error" in err


@pytest.fixture()
def keyfile(tmp_path, capsys):
    path = tmp_path / "k.key"
    assert run(capsys, *KEYGEN, "-o", str(path))[0] == 0
    return str(path)


def test_encrypt_decrypt_roundtrip(tmp_path, capsys, keyfile):
    rng = np.random.default_rng(0)
    data = rng.bytes(10_000)
    src = tmp_path / "plain.bin"
    src.write_bytes(data)
    ct = tmp_path / "ct.bin"
    out = tmp_path / "out.bin"
    assert run(capsys, "encrypt", "--key", keyfile, "-i", str(src), "-o", str(ct))[0] == 0
    assert run(capsys, "decrypt", "--key", keyfile, "-i", str(ct), "-o", str(out))[0] == 0
    assert out.read_bytes() == data


def test_empty_input_gives_zero_frame_output(tmp_path, capsys, keyfile):
    src = tmp_path / "empty.bin"
    src.write_bytes(b"")
    ct = tmp_path / "ct.bin"
    out = tmp_path / "out.bin"
    assert run(capsys, "encrypt", "--key", keyfile, "-i", str(src), "-o", str(ct))[0] == 0
    # header only: magic + version + digest + n
    assert ct.stat().st_size == 4 + 1 + 8 + 4
    assert run(capsys, "decrypt", "--key", keyfile, "-i", str(ct), "-o", str(out))[0] == 0
    assert out.read_bytes() == b""


def test_decrypt_with_wrong_key_garbles_without_crash(tmp_path, capsys, keyfile):
    rng = np.random.default_rng(1)
    data = rng.bytes(500)
    src = tmp_path / "plain.bin"
    src.write_bytes(data)
    ct = tmp_path / "ct.bin"
    out = tmp_path / "out.bin"
    wrong = tmp_path / "wrong.key"
    assert run(capsys, "keygen", "--b", "13", "--n0", "2", "--dv", "3", "--L", "4",
               "--d", "8", "--seed", "2", "-o", str(wrong))[0] == 0
    assert run(capsys, "encrypt", "--key", keyfile, "-i", str(src), "-o", str(ct))[0] == 0
    code, _, _ = run(capsys, "decrypt", "--key", str(wrong), "-i", str(ct),
                     "-o", str(out), "--on-fail", "skip")
    assert code == 0
    assert out.read_bytes() != data


def test_simulate_csv(tmp_path, capsys, keyfile):
    csv = tmp_path / "sweep.csv"
    code, _, err = run(capsys, "simulate", "--key", keyfile, "--vnr-db", "6:0.5:12",
                       "--trials", "5", "--seed", "7", "-o", str(csv))
    assert code == 0
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "vnr_db,ser,fer,trials,seed"
    assert len(lines) == 1 + 13
    # deterministic on repeat
    csv2 = tmp_path / "sweep2.csv"
    assert run(capsys, "simulate", "--key", keyfile, "--vnr-db", "6:0.5:12",
               "--trials", "5", "--seed", "7", "-o", str(csv2))[0] == 0
    assert csv.read_bytes() == csv2.read_bytes()


def test_simulate_zero_trials_usage_error(capsys, keyfile):
    code, _, err = run(capsys, "simulate", "--key", keyfile, "--vnr-db", "0:1:2",
                       "--trials", "0")
    assert code == 2


def test_analyze_paper_params(capsys):
    code, out, _ = run(capsys, "analyze", "--b", "43", "--n0", "6", "--dv", "3",
                       "--L", "16", "--d", "61")
    assert code == 0
    assert "214 bits" in out
    assert "2^176.96" in out
    assert "2^129.75" in out
    assert "key_bits=214" in out


def test_analyze_from_key_matches_params_mode(tmp_path, capsys):
    key = tmp_path / "k.key"
    assert run(capsys, "keygen", "--b", "43", "--n0", "6", "--dv", "3", "--L", "16",
               "--d", "61", "--seed", "3", "-o", str(key))[0] == 0
    _, out_key, _ = run(capsys, "analyze", "--key", str(key))
    _, out_params, _ = run(capsys, "analyze", "--b", "43", "--n0", "6", "--dv", "3",
                           "--L", "16", "--d", "61")
    assert out_key == out_params


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--b", "43", "--n0", "6", "--dv", "3",
                       "--L", "16", "--d", "61", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["key_bits"] == "214"


def test_decrypt_bad_file_exit_1(tmp_path, capsys, keyfile):
    bad = tmp_path / "junk.bin"
    bad.write_bytes(b"not a ciphertext")
    code, _, err = run(capsys, "decrypt", "--key", keyfile, "-i", str(bad),
                       "-o", str(tmp_path / "out.bin"))
    assert code == 1
    assert "error" in err
