import json

import pytest

from flagvanish.cli import main
from flagvanish.curvature import grassmannian_curvature, tensor_to_json


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bott_example_output(capsys):
    code, out, _ = run_cli(capsys, "bott", "--weight", "-2,0", "--rank", "2")
    assert code == 0
    assert json.loads(out) == {
        "kind": "single",
        "degree": 1,
        "weight": [-1, -1],
        "dimension": 1,
    }


def test_bott_output_is_byte_identical(capsys):
    _, first, _ = run_cli(capsys, "bott", "--weight", "3,0,0")
    _, second, _ = run_cli(capsys, "bott", "--weight", "3,0,0")
    assert first == second


def test_hodge_table_format(capsys):
    code, out, _ = run_cli(capsys, "hodge", "--flag", "0,1,2,3", "--format", "table")
    assert code == 0
    rows = [line.split() for line in out.strip().splitlines()]
    assert [rows[p][p] for p in range(4)] == ["1", "2", "2", "1"]


def test_omega_json(capsys):
    code, out, _ = run_cli(capsys, "omega", "--flag", "0,1,2", "--degree", "1")
    assert code == 0
    assert json.loads(out)["terms"] == [{"weight": [-1, 1], "multiplicity": 1}]


def test_positivity_refuted_is_exit_zero(capsys):
    code, out, _ = run_cli(
        capsys,
        "positivity",
        "--builtin",
        "grassmannian:4,2",
        "--k",
        "0",
        "--s",
        "1",
        "--samples",
        "50",
        "--seed",
        "0",
    )
    assert code == 0
    body = json.loads(out)
    assert body["verdict"] == "refuted"
    assert body["seed"] == 0


def test_positivity_example_not_refuted(capsys):
    code, out, _ = run_cli(
        capsys,
        "positivity",
        "--builtin",
        "grassmannian:4,2",
        "--k",
        "1",
        "--s",
        "1",
        "--samples",
        "500",
        "--seed",
        "0",
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "not_refuted"


def test_tensor_file_round_trip(tmp_path, capsys):
    doc = tensor_to_json(grassmannian_curvature(4, 2))
    path = tmp_path / "tensor.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(
        capsys, "positivity", "--tensor-file", str(path), "--k", "1", "--s", "1",
        "--samples", "50",
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "not_refuted"


def test_missing_tensor_file_is_input_error(capsys):
    code, _, err = run_cli(
        capsys, "positivity", "--tensor-file", "/nonexistent.json"
    )
    assert code == 2
    assert "error" in err


def test_invalid_weight_is_input_error(capsys):
    code, _, err = run_cli(capsys, "bott", "--weight", "1,0", "--rank", "5")
    assert code == 2
    assert "error" in err


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_vanish_subcommand(capsys):
    code, out, _ = run_cli(
        capsys,
        "vanish",
        "--expr",
        "K* E{n=3,r=2,griffiths_k=1} * det(E)",
        "--p",
        "0",
        "--q",
        "2",
    )
    assert code == 0
    body = json.loads(out)
    verdicts = {r["theorem"]: r["conclusion"] for r in body["reports"]}
    assert verdicts["canonical_det_twist"] == "vanishes"


def test_sharpness_subcommand(capsys):
    code, out, _ = run_cli(capsys, "sharpness", "--dims", "1,2", "--twists", "0,5")
    assert code == 0
    body = json.loads(out)
    assert {"p": 3, "q": 1, "dimension": 6} in body["nonzero"]


def test_crosscheck_subcommand(capsys):
    code, out, _ = run_cli(capsys, "crosscheck", "--n", "2", "--trials", "3")
    assert code == 0
    assert json.loads(out)["max_deviation"] <= 1e-10


def test_bkn_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "bkn", "--builtin", "identity:3,1", "--p", "3", "--q", "3"
    )
    assert code == 0
    assert json.loads(out)["panels"][0]["spectrum"] == [3.0]


def test_thin_client_matches_in_process(capsys):
    # the --server path must emit the same document as in-process dispatch
    import socket
    import threading
    import time

    import httpx
    import uvicorn

    from flagvanish.service import app

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.time() + 15
        while time.time() < deadline:
            try:
                httpx.get(f"http://127.0.0.1:{port}/", timeout=1.0)
                break
            except httpx.HTTPError:
                time.sleep(0.05)
        else:
            pytest.skip("local server did not come up")
        code_remote, remote, _ = run_cli(
            capsys, "bott", "--server", f"http://127.0.0.1:{port}",
            "--weight", "-2,0", "--rank", "2",
        )
        code_local, local, _ = run_cli(capsys, "bott", "--weight", "-2,0", "--rank", "2")
        assert code_remote == code_local == 0
        assert remote == local
        code_bad, _, err = run_cli(
            capsys, "bott", "--server", f"http://127.0.0.1:{port}",
            "--weight", "1,0", "--rank", "5",
        )
        assert code_bad == 2
        assert "error" in err
    finally:
        server.should_exit = True
        thread.join(timeout=5)
