import json
import math

import numpy as np
import pytest

from phasekit.cli import DEFAULT_MEM_BUDGET, main, mem_budget, parse_angle, parse_tolerances


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def canonical(payload):
    payload = dict(payload)
    payload.pop("wall_time", None)
    return json.dumps(payload, sort_keys=True)


# ------------------------------------------------------------------ helpers


def test_parse_angle():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("-pi") == pytest.approx(-math.pi)
    assert parse_angle("pi/2") == pytest.approx(math.pi / 2)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("0.5pi") == pytest.approx(math.pi / 2)
    assert parse_angle("2pi/3") == pytest.approx(2 * math.pi / 3)
    assert parse_angle("1.25") == 1.25
    assert parse_angle("0") == 0.0
    with pytest.raises(ValueError):
        parse_angle("tau")
    with pytest.raises(ValueError):
        parse_angle("pi/")


def test_parse_tolerances():
    assert parse_tolerances(None) == {}
    assert parse_tolerances(["identity=1e-8"]) == {"identity": 1e-8}
    assert parse_tolerances(["gadget.identity=1e-8"]) == {"gadget.identity": 1e-8}
    with pytest.raises(ValueError):
        parse_tolerances(["identity"])
    with pytest.raises(ValueError):
        parse_tolerances(["nonsense=1e-8"])
    with pytest.raises(ValueError):
        parse_tolerances(["warp.identity=1e-8"])
    with pytest.raises(ValueError):
        parse_tolerances(["identity=fast"])


def test_mem_budget(monkeypatch):
    monkeypatch.delenv("PHASEKIT_MEM_BUDGET", raising=False)
    assert mem_budget() == DEFAULT_MEM_BUDGET
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "4096")
    assert mem_budget() == 4096
    assert mem_budget(128) == 128
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "lots")
    with pytest.raises(ValueError):
        mem_budget()
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "-5")
    with pytest.raises(ValueError):
        mem_budget()
    with pytest.raises(ValueError):
        mem_budget(0)


# ------------------------------------------------------------------- gadget


def test_gadget_default_run(capsys):
    code, payload, _ = run_json(capsys, "gadget", "--m", "4", "--k", "1", "--z", "3")
    assert code == 0
    assert payload["global_phase_only"] is True
    assert payload["phase_error"] <= 1e-10
    assert payload["measured_phase"] == pytest.approx(-math.pi / 2, abs=1e-9)
    assert payload["expected_phase"] == pytest.approx(-math.pi / 2, abs=1e-12)


def test_gadget_zero_shift_has_zero_phase(capsys):
    code, payload, _ = run_json(capsys, "gadget", "--m", "8", "--k", "3", "--z", "0")
    assert code == 0
    assert payload["measured_phase"] == pytest.approx(0.0, abs=1e-12)


def test_gadget_all_variants_agree(capsys):
    phases = {}
    for variant in ("comm-a", "comm-b", "comm-c", "comm-d", "sform"):
        code, payload, _ = run_json(
            capsys, "gadget", "--m", "6", "--k", "2", "--z", "5", "--variant", variant
        )
        assert code == 0
        phases[variant] = payload["measured_phase"]
    base = phases["comm-a"]
    for variant, phase in phases.items():
        assert phase == pytest.approx(base, abs=1e-9), variant


def test_gadget_rejects_bad_modulus(capsys):
    code, out, err = run(capsys, "gadget", "--m", "0")
    assert code == 2
    assert "error" in err


# ------------------------------------------------------------------- verify


def test_verify_single_suite_passes(capsys):
    code, payload, _ = run_json(capsys, "verify", "--suite", "gadget", "--seed", "1")
    assert code == 0
    assert payload["passed"] is True
    assert payload["seed"] == 1
    suites = {s["suite"]: s for s in payload["suites"]}
    assert suites["gadget"]["counts"]["failed"] == 0
    assert suites["gadget"]["counts"]["total"] > 0


def test_verify_unknown_suite_exits_two(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "warp")
    assert code == 2


def test_verify_impossible_tolerance_fails(capsys):
    code, payload, _ = run_json(
        capsys, "verify", "--suite", "gadget", "--tol", "identity=1e-20"
    )
    assert code == 1
    assert payload["passed"] is False


def test_verify_bad_tolerance_exits_two(capsys):
    code, _, err = run(capsys, "verify", "--tol", "bogus=1")
    assert code == 2
    assert "bogus" in err


def test_verify_is_deterministic_excluding_wall_time(capsys):
    argv = ("verify", "--suite", "phase-transform", "--seed", "7")
    _, first, _ = run_json(capsys, *argv)
    _, second, _ = run_json(capsys, *argv)
    assert canonical(first) == canonical(second)


def test_verify_seed_changes_cases(capsys):
    _, one, _ = run_json(capsys, "verify", "--suite", "phase-transform", "--seed", "1")
    _, two, _ = run_json(capsys, "verify", "--suite", "phase-transform", "--seed", "2")
    assert one["seed"] != two["seed"]
    assert one["passed"] and two["passed"]


# -------------------------------------------------------------------- demos


def test_demo_dj_generated_balanced(capsys):
    code, payload, _ = run_json(capsys, "demo", "dj", "--n", "3", "--pattern", "balanced")
    assert code == 0
    assert payload["result"]["verdict"] == "balanced"
    assert payload["result"]["oracle_calls"] == 2
    assert payload["ancilla_restoration_fidelity"] >= 1.0 - 1e-9


@pytest.mark.parametrize("pattern,verdict", [("constant0", "constant"), ("constant1", "constant")])
def test_demo_dj_generated_constant(capsys, pattern, verdict):
    code, payload, _ = run_json(capsys, "demo", "dj", "--n", "2", "--pattern", pattern)
    assert code == 0
    assert payload["result"]["verdict"] == verdict
    assert payload["result"]["p_zero"] == pytest.approx(1.0, abs=1e-12)


def test_demo_dj_from_table_file(capsys, tmp_path):
    path = tmp_path / "bal4.txt"
    path.write_text("4 2\n0 0\n1 1\n2 1\n3 0\n")
    code, payload, _ = run_json(capsys, "demo", "dj", "--table", str(path))
    assert code == 0
    assert payload["result"]["verdict"] == "balanced"
    assert payload["params"]["table"] == str(path)


@pytest.mark.parametrize("ancilla", ["random", "zero", "minus", "mixed"])
def test_demo_dj_every_ancilla_kind(capsys, ancilla):
    code, payload, _ = run_json(
        capsys, "demo", "dj", "--n", "2", "--ancilla", ancilla, "--seed", "5"
    )
    assert code == 0
    assert payload["ancilla_restoration_fidelity"] >= 1.0 - 1e-9


def test_demo_dj_bad_table_exits_two(capsys, tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("4 2\n0 0\n1 5\n2 1\n3 0\n")
    code, _, err = run(capsys, "demo", "dj", "--table", str(path))
    assert code == 2
    assert str(path) in err
    assert "line 3" in err


def test_demo_grover_certain_hit(capsys):
    code, payload, _ = run_json(
        capsys, "demo", "grover", "--n", "2", "--target", "3", "--iters", "1"
    )
    assert code == 0
    assert payload["result"]["success_probability"] == pytest.approx(1.0, abs=1e-10)
    assert payload["result"]["solutions"] == [3]
    assert payload["result"]["oracle_calls_marking"] == 2
    assert payload["result"]["oracle_calls_diffusion"] == 2


def test_demo_grover_requires_target(capsys):
    code, _, err = run(capsys, "demo", "grover", "--n", "2")
    assert code == 2
    assert "--target" in err


def test_demo_ck_quarter_marked(capsys):
    code, payload, _ = run_json(capsys, "demo", "ck", "--n", "3", "--solutions", "2")
    assert code == 0
    assert payload["result"]["success_probability"] == pytest.approx(1.0, abs=1e-10)
    assert payload["result"]["oracle_calls_marking"] == 2
    assert payload["params"]["gamma"] == pytest.approx(math.pi)


def test_demo_ck_angle_tokens(capsys):
    code, payload, _ = run_json(
        capsys, "demo", "ck", "--n", "3", "--solutions", "2",
        "--gamma", "pi/2", "--beta=-pi/2", "--mbits", "5",
    )
    assert code == 0
    assert payload["params"]["gamma"] == pytest.approx(math.pi / 2)
    assert payload["params"]["beta"] == pytest.approx(-math.pi / 2)


def test_demo_ck_pivot_flag(capsys):
    base = run_json(capsys, "demo", "ck", "--n", "3", "--solutions", "2")[1]
    moved = run_json(capsys, "demo", "ck", "--n", "3", "--solutions", "2", "--l", "5")[1]
    assert moved["result"]["success_probability"] == pytest.approx(
        base["result"]["success_probability"], abs=1e-10
    )


def test_demo_determinism_per_seed(capsys):
    argv = ("demo", "ck", "--n", "2", "--solutions", "1", "--ancilla", "mixed", "--seed", "9")
    first = run_json(capsys, *argv)[1]
    second = run_json(capsys, *argv)[1]
    assert canonical(first) == canonical(second)
    other = run_json(capsys, "demo", "ck", "--n", "2", "--solutions", "1",
                     "--ancilla", "mixed", "--seed", "10")[1]
    assert other["seed"] == 10


def test_demo_budget_refusal(capsys, monkeypatch):
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "64")
    code, _, err = run(capsys, "demo", "dj", "--n", "6")
    assert code == 2
    assert "budget" in err
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "128")
    code, _, _ = run(capsys, "demo", "dj", "--n", "6", "--json")
    assert code == 0


def test_out_flag_writes_file_instead_of_stdout(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "gadget", "--m", "4", "--out", str(path), "--json")
    assert code == 0
    assert out == ""
    payload = json.loads(path.read_text())
    assert payload["command"] == "gadget"


# -------------------------------------------------------------------- bench


def test_bench_emits_json_lines(capsys):
    code, out, _ = run(
        capsys, "bench", "--max-n", "3", "--max-m", "2", "--reps", "1", "--json"
    )
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    from phasekit import backend

    assert len(lines) == 3 * 2 * len(backend.available_backends())
    for record in lines:
        assert record["operation"] == "phase-transform"
        assert record["oracle_calls"] == 2
        assert record["N"] == 1 << record["n_bits"]
        assert record["M"] == 1 << record["m_bits"]
        assert record["wall_time"] >= 0.0
        assert record["backend"] in backend.available_backends()


def test_bench_single_backend(capsys):
    code, out, _ = run(
        capsys, "bench", "--max-n", "2", "--max-m", "1", "--reps", "1",
        "--backend", "numpy", "--json",
    )
    assert code == 0
    assert all(json.loads(l)["backend"] == "numpy" for l in out.strip().splitlines())


def test_bench_budget_refusal(capsys):
    code, _, err = run(capsys, "bench", "--max-n", "40", "--json")
    assert code == 2
    assert "budget" in err


def test_bench_budget_flag_beats_env(capsys, monkeypatch):
    monkeypatch.setenv("PHASEKIT_MEM_BUDGET", "2")
    code, _, _ = run(
        capsys, "bench", "--max-n", "1", "--max-m", "1", "--reps", "1",
        "--budget", "1048576", "--json",
    )
    assert code == 0


def test_bench_out_file(capsys, tmp_path):
    path = tmp_path / "bench.jsonl"
    code, out, _ = run(
        capsys, "bench", "--max-n", "1", "--max-m", "1", "--reps", "1",
        "--out", str(path), "--json",
    )
    assert code == 0
    assert out == ""
    records = [json.loads(line) for line in path.read_text().strip().splitlines()]
    assert records and all(r["r"] == 1 for r in records)


# ------------------------------------------------------------------- parser


def test_no_subcommand_exits_two(capsys):
    assert run(capsys)[0] == 2


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.startswith("phasekit ")


def test_notes_go_to_stderr_not_stdout(capsys):
    code, out, err = run(capsys, "gadget", "--m", "4")
    assert code == 0
    json.loads(out)
    assert "gadget" in err
