from __future__ import annotations

import json

from toeplab.cli.main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main

SMALL_ARGS = ["--mode", "direct", "--grid-size", "512", "--truncation", "64"]


def test_cli_list_outputs_json(capsys) -> None:
    code = main(["list", "--mode", "direct"])

    captured = capsys.readouterr()
    assert code == EXIT_PASS
    payload = json.loads(captured.out)
    assert len(payload["experiments"]) == 19


def test_cli_run_experiment_writes_report(capsys, tmp_path) -> None:
    target = tmp_path / "report.json"

    code = main(["run", "dim_K_zn", *SMALL_ARGS, "--param", "n=3", "--seed", "11", "--json", str(target)])

    captured = capsys.readouterr()
    assert code == EXIT_PASS
    payload = json.loads(captured.out)
    assert payload["status"] == "pass"
    assert payload["params"] == {"n": 3}
    assert payload["config"]["truncation"] == 64
    assert json.loads(target.read_text(encoding="utf-8")) == payload


def test_cli_compute_kernel(capsys) -> None:
    code = main(["compute", "kernel", *SMALL_ARGS, "--symbol", '{"conj": {"power": 3}}', "--size", "32"])

    captured = capsys.readouterr()
    assert code == EXIT_PASS
    payload = json.loads(captured.out)
    assert payload["metrics"]["dimension"] == 3.0


def test_cli_compute_reads_descriptor_file(capsys, tmp_path) -> None:
    descriptor = tmp_path / "f.json"
    descriptor.write_text('{"polynomial": [-1.0, 1.5, 1.0]}', encoding="utf-8")

    code = main(["compute", "inner-outer", *SMALL_ARGS, "--function", f"@{descriptor}"])

    captured = capsys.readouterr()
    assert code == EXIT_PASS
    assert json.loads(captured.out)["experiment_id"] == "compute:inner-outer"


def test_cli_unknown_experiment_is_usage_error(capsys) -> None:
    code = main(["run", "no_such_experiment", "--mode", "direct"])

    captured = capsys.readouterr()
    assert code == EXIT_USAGE
    assert json.loads(captured.err)["code"] == "UNKNOWN_EXPERIMENT"


def test_cli_bad_param_is_usage_error(capsys) -> None:
    code = main(["run", "dim_K_zn", *SMALL_ARGS, "--param", "n=0"])

    captured = capsys.readouterr()
    assert code == EXIT_USAGE
    assert json.loads(captured.err)["code"] == "VALIDATION_ERROR"


def test_cli_malformed_param_entry(capsys) -> None:
    assert main(["run", "dim_K_zn", *SMALL_ARGS, "--param", "n"]) == EXIT_USAGE
    capsys.readouterr()


def test_cli_unknown_verb_exits_with_usage_code(capsys) -> None:
    assert main(["compute", "invert"]) == EXIT_USAGE
    assert "invalid choice" in capsys.readouterr().err


def test_cli_domain_error_exits_with_failure(capsys) -> None:
    code = main(["compute", "inner-outer", *SMALL_ARGS, "--function", '{"constant": 0.0}'])

    captured = capsys.readouterr()
    assert code == EXIT_FAIL
    assert json.loads(captured.err)["code"] == "PRECONDITION_FAILED"
