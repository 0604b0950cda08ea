import json

from transversal_lab.cli import main
from transversal_lab.constructions import ord6m_starred_cells, z6_marked_diagonal
from transversal_lab.extension import g_extension
from transversal_lab.groups import cyclic_group
from transversal_lab.hypercube import cyclic, load
from transversal_lab.reports import diagonal_from_json, diagonal_to_json, validate_report


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def report_of(out):
    payload = json.loads(out)
    validate_report(payload)
    return payload


def strip_elapsed(payload):
    return {k: v for k, v in payload.items() if k != "elapsed_s"}


def test_construct_then_search_transversals(tmp_path, capsys):
    cube = tmp_path / "c.lhc"
    code, out, err = run_cli(
        ["construct", "cyclic", "--group", "Z4", "--d", "4", "--out", str(cube)], capsys
    )
    assert code == 0 and cube.exists()
    assert load(cube) == cyclic(cyclic_group(4), 4)

    code, out, err = run_cli(["search", "transversals", str(cube)], capsys)
    assert code == 0
    payload = report_of(out)
    assert payload["count"] == 0 and payload["exact"] and not payload["exhausted"]


def test_construct_bachelors_pipeline(tmp_path, capsys):
    cube = tmp_path / "b.lhc"
    code, *_ = run_cli(
        ["construct", "confirmed-bachelor", "--n", "4", "--d", "4", "--out", str(cube)],
        capsys,
    )
    assert code == 0
    code, out, err = run_cli(["search", "bachelors", str(cube)], capsys)
    assert code == 0
    payload = report_of(out)
    assert payload["count"] == 16
    assert len(payload["bachelor_cells"]) == 16
    assert all(all(v in (0, 1) for v in cell) for cell in payload["bachelor_cells"])


def test_analyze_delta_json(tmp_path, capsys):
    cube = tmp_path / "m1.lhc"
    run_cli(["construct", "ord6m", "--m", "1", "--out", str(cube)], capsys)
    code, out, err = run_cli(["analyze", "delta", str(cube)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert len(payload["support"]) == 9
    assert payload["projection_sizes"] == [3, 4]
    assert {"coords": [1, 1], "delta": [5]} in payload["support"]


def test_search_suitable_counts_match_oracle(tmp_path, capsys):
    import numpy as np
    from oracles import brute_target_diagonals

    cube = tmp_path / "z6.lhc"
    run_cli(["construct", "z6-isotope", "--out", str(cube)], capsys)
    code, out, err = run_cli(
        ["search", "suitable", "--dprime", "4", str(cube), "--max-witnesses", "2"], capsys
    )
    assert code == 0
    payload = report_of(out)
    H = load(cube)
    assert payload["count"] == len(brute_target_diagonals(np.asarray(H.symbols), 3))
    assert payload["certificates"]["target_sum"] == [3]
    assert len(payload["witnesses"]) == 2
    for record in payload["witnesses"]:
        D = diagonal_from_json(record, H)
        assert D.complete


def test_search_packing_report(tmp_path, capsys):
    cube = tmp_path / "t44.lhc"
    run_cli(["construct", "turned-cyclic", "--n", "4", "--d", "4", "--out", str(cube)], capsys)
    code, out, err = run_cli(["search", "packing", str(cube)], capsys)
    assert code == 0
    payload = report_of(out)
    assert payload["count"] == 16
    assert payload["certificates"]["optimal"] is True
    assert payload["certificates"]["upper_bound"] == 16


def test_search_decompose_deterministic(tmp_path, capsys):
    cube = tmp_path / "c3.lhc"
    run_cli(["construct", "cyclic", "--group", "Z3", "--d", "2", "--out", str(cube)], capsys)
    code, out1, _ = run_cli(["search", "decompose", "--seed", "5", str(cube)], capsys)
    assert code == 0
    code, out2, _ = run_cli(["search", "decompose", "--seed", "5", str(cube)], capsys)
    assert code == 0
    assert strip_elapsed(report_of(out1)) == strip_elapsed(report_of(out2))
    payload = report_of(out1)
    assert payload["count"] == 3


def test_extend_and_reread(tmp_path, capsys):
    cube = tmp_path / "z6.lhc"
    ext = tmp_path / "z6d4.lhc"
    run_cli(["construct", "z6-isotope", "--out", str(cube)], capsys)
    code, *_ = run_cli(
        ["extend", str(cube), "--group", "Z6", "--dprime", "4", "--out", str(ext)], capsys
    )
    assert code == 0
    H = load(cube)
    assert load(ext) == g_extension(H, H.group, 4)


def test_lift_command(tmp_path, capsys):
    cube = tmp_path / "z6.lhc"
    run_cli(["construct", "z6-isotope", "--out", str(cube)], capsys)
    diag = tmp_path / "diag.json"
    diag.write_text(json.dumps({"entries": diagonal_to_json(z6_marked_diagonal())}))
    code, out, err = run_cli(
        ["lift", str(cube), "--dprime", "4", "--diagonal", str(diag)], capsys
    )
    assert code == 0
    payload = report_of(out)
    H = load(cube)
    ext = g_extension(H, H.group, 4)
    T = diagonal_from_json(payload["witnesses"][0], ext, transversal=True)
    assert T.complete


def test_dilate_command(tmp_path, capsys):
    cube = tmp_path / "c4.lhc"
    out_path = tmp_path / "c8.lhc"
    run_cli(["construct", "cyclic", "--group", "Z4", "--d", "2", "--out", str(cube)], capsys)
    code, *_ = run_cli(["dilate", str(cube), "--lambda", "2", "--out", str(out_path)], capsys)
    assert code == 0
    assert load(out_path) == cyclic(cyclic_group(8), 2)


def test_certify_dilation_command(tmp_path, capsys):
    cube = tmp_path / "m1.lhc"
    run_cli(["construct", "ord6m", "--m", "1", "--out", str(cube)], capsys)
    cells = tmp_path / "cells.json"
    cells.write_text(json.dumps([list(c) for c in ord6m_starred_cells(1)]))
    code, out, err = run_cli(
        ["certify-dilation", str(cube), "--lambda", "2", "--hitting-set", str(cells)], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["holds"] is True
    assert payload["image_cells"] == [[2, 0], [2, 2]]


def test_exit_code_2_on_validation_errors(tmp_path, capsys):
    code, out, err = run_cli(["construct", "cyclic", "--group", "Q8", "--d", "2"], capsys)
    assert code == 2 and "error" in err

    code, out, err = run_cli(["construct", "cyclic", "--d", "2"], capsys)
    assert code == 2

    bad = tmp_path / "bad.lhc"
    bad.write_text("lhc 2 2\n0 1\n1 7\n")
    code, out, err = run_cli(["search", "transversals", str(bad)], capsys)
    assert code == 2

    code, out, err = run_cli(["search", "transversals", str(tmp_path / "missing.lhc")], capsys)
    assert code == 2

    code, out, err = run_cli(
        ["construct", "confirmed-bachelor", "--n", "6", "--d", "4"], capsys
    )
    assert code == 2


def test_exit_code_3_on_budget_exhaustion(tmp_path, capsys):
    cube = tmp_path / "t44.lhc"
    run_cli(["construct", "turned-cyclic", "--n", "4", "--d", "4", "--out", str(cube)], capsys)
    code, out, err = run_cli(
        ["search", "bachelors", str(cube), "--max-nodes", "10"], capsys
    )
    assert code == 3
    payload = report_of(out)
    assert payload["exhausted"] and not payload["exact"]


def test_text_grid_output(tmp_path, capsys):
    code, out, err = run_cli(["construct", "ord8", "--format", "text-grid"], capsys)
    assert code == 0
    first = out.splitlines()[0].split()
    assert first == ["0", "1", "3", "4", "5", "6", "7", "2"]

    cube = tmp_path / "c3.lhc"
    run_cli(["construct", "cyclic", "--group", "Z3", "--d", "2", "--out", str(cube)], capsys)
    code, out, err = run_cli(
        ["search", "transversals", str(cube), "--format", "text-grid"], capsys
    )
    assert code == 0
    assert "*" in out


def test_threads_env_var_matches_flag(tmp_path, capsys, monkeypatch):
    # parallel runs must produce identical reports (timing aside)
    cube = tmp_path / "t44.lhc"
    run_cli(["construct", "turned-cyclic", "--n", "4", "--d", "4", "--out", str(cube)], capsys)
    code, base_out, _ = run_cli(["search", "transversals", str(cube)], capsys)
    assert code == 0
    monkeypatch.setenv("TRANSVERSAL_LAB_THREADS", "2")
    code, env_out, _ = run_cli(["search", "transversals", str(cube)], capsys)
    assert code == 0
    assert strip_elapsed(report_of(base_out)) == strip_elapsed(report_of(env_out))


def test_verify_subset(capsys):
    code, out, err = run_cli(
        ["verify", "paper-claims", "--suite", "quick", "--only", "1,8"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("[ 1/2] PASS 01-")
    assert lines[1].startswith("[ 2/2] PASS 08-")


def test_round_trip_between_commands(tmp_path, capsys):
    # any cube a command emits must be readable by every other command
    cube = tmp_path / "m2.lhc"
    run_cli(["construct", "ord6m", "--m", "2", "--out", str(cube)], capsys)
    dil = tmp_path / "m2x2.lhc"
    code, *_ = run_cli(["dilate", str(cube), "--lambda", "2", "--out", str(dil)], capsys)
    assert code == 0
    code, out, _ = run_cli(["analyze", "delta", str(dil)], capsys)
    assert code == 0
    assert len(json.loads(out)["support"]) == 9


def test_canonical_report_form_is_deterministic():
    from transversal_lab.reports import SearchReport
    from transversal_lab.search import enumerate_transversals

    H = cyclic(cyclic_group(3), 2)

    def build():
        witnesses = list(enumerate_transversals(H))
        return SearchReport(
            instance=H.content_id(),
            operation="search transversals",
            group="Z3",
            seed=2024,
            count=len(witnesses),
            witnesses=witnesses,
            elapsed_s=0.123,
        )

    a, b = build(), build()
    b.elapsed_s = 9.9
    assert a.canonical_json() == b.canonical_json()
    assert a.json() != b.json()


def test_verify_quick_suite_passes(capsys):
    import time

    t0 = time.perf_counter()
    code, out, err = run_cli(["verify", "paper-claims", "--suite", "quick"], capsys)
    elapsed = time.perf_counter() - t0
    assert code == 0
    assert "13/13 criteria passed" in out
    assert elapsed < 60.0
