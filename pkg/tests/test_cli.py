import json
import os

from mobius_lattice.cli import main


def run_cli(args):
    return main(args)


def read_jsonl(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def test_verify_gl22_all_pass(tmp_path):
    out = tmp_path / "gl22.jsonl"
    code = run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--subgroups", "all", "--out", str(out)])
    assert code == 0
    rows = read_jsonl(out)
    summary = rows[-1]
    assert summary["type"] == "summary"
    assert summary["pairs"] == 5
    assert summary["failures"] == 0
    assert all(r["identities_hold"] for r in rows[:-1])


def test_verify_gl23_contains_vanishing_instance(tmp_path):
    out = tmp_path / "gl23.jsonl"
    code = run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "3",
                    "--out", str(out)])
    assert code == 0
    rows = read_jsonl(out)
    assert rows[-1]["failures"] == 0
    vanishing = [r for r in rows[:-1]
                 if r["h_order"] == 2 and r["mu_ideal"] == 0]
    assert vanishing  # the block-diagonal order-2 subgroup shows up


def test_verify_reducible_scope_is_subset(tmp_path):
    out_all = tmp_path / "all.jsonl"
    out_red = tmp_path / "red.jsonl"
    assert run_cli(["verify", "--preset", "SL", "--n", "2", "--q", "3",
                    "--out", str(out_all)]) == 0
    assert run_cli(["verify", "--preset", "SL", "--n", "2", "--q", "3",
                    "--subgroups", "reducible", "--out", str(out_red)]) == 0
    n_all = read_jsonl(out_all)[-1]["pairs"]
    n_red = read_jsonl(out_red)[-1]["pairs"]
    assert 0 < n_red < n_all


def test_malformed_generator_file(tmp_path):
    bad = tmp_path / "gens.json"
    bad.write_text("{ not json")
    assert run_cli(["verify", "--gens", str(bad)]) == 2


def test_generator_file_round_trip(tmp_path):
    spec = {"name": "GL(2,2)-from-file", "field": {"p": 2, "u": 1}, "n": 2,
            "generators": [[[1, 1], [0, 1]], [[0, 1], [1, 0]]]}
    path = tmp_path / "gl22.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "out.jsonl"
    assert run_cli(["verify", "--gens", str(path), "--out", str(out)]) == 0
    rows = read_jsonl(out)
    assert rows[-1]["pairs"] == 5
    assert rows[0]["group"] == "GL(2,2)-from-file"


def test_reports_byte_identical(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    argv = ["verify", "--preset", "GL", "--n", "2", "--q", "3",
            "--seed", "7"]
    assert run_cli(argv + ["--out", str(out1)]) == 0
    assert run_cli(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_mobius_command(capsys):
    assert run_cli(["mobius", "--preset", "GL", "--n", "2", "--q", "2",
                    "--from", "trivial", "--to", "full"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mu"] == 3
    assert payload["interval_size"] == 6


def test_mobius_same_endpoints(capsys):
    assert run_cli(["mobius", "--preset", "GL", "--n", "2", "--q", "3",
                    "--from", "full", "--to", "full"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mu"] == 1


def test_mobius_not_nested(tmp_path, capsys):
    gens = tmp_path / "h.json"
    gens.write_text(json.dumps([[[0, 1], [1, 0]]]))
    code = run_cli(["mobius", "--preset", "GL", "--n", "2", "--q", "2",
                    "--from", "full", "--to", str(gens)])
    assert code == 2


def test_report_merge_disjoint(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--out", str(a)]) == 0
    assert run_cli(["verify", "--preset", "SL", "--n", "2", "--q", "3",
                    "--out", str(b)]) == 0
    na = read_jsonl(a)[-1]["pairs"]
    nb = read_jsonl(b)[-1]["pairs"]
    merged = tmp_path / "merged.jsonl"
    assert run_cli(["report", str(a), str(b), "--out", str(merged)]) == 0
    assert len(read_jsonl(merged)) == na + nb


def test_report_dedupes_identical(tmp_path):
    a = tmp_path / "a.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--out", str(a)]) == 0
    merged = tmp_path / "m.jsonl"
    assert run_cli(["report", str(a), str(a), "--out", str(merged)]) == 0
    assert len(read_jsonl(merged)) == read_jsonl(a)[-1]["pairs"]


def test_report_conflicting_duplicate(tmp_path):
    a = tmp_path / "a.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--out", str(a)]) == 0
    rows = read_jsonl(a)
    rows[0]["mu_ideal"] += 1
    b = tmp_path / "b.jsonl"
    b.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    assert run_cli(["report", str(a), str(b)]) == 2


def test_skips_give_exit_three(tmp_path):
    out = tmp_path / "skip.jsonl"
    code = run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--max-powerset", "1", "--out", str(out)])
    assert code == 3
    rows = read_jsonl(out)
    assert rows[-1]["skips"]
    assert all("reason" in s for s in rows[-1]["skips"])


def test_csv_output(tmp_path):
    out = tmp_path / "table.csv"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("group,h_order,mu_ideal")
    assert len(lines) == 6


def test_closure_cache_env(tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv("MOBIUS_LATTICE_CACHE", str(cache))
    out1 = tmp_path / "r1.jsonl"
    out2 = tmp_path / "r2.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "3",
                    "--out", str(out1)]) == 0
    dumps = os.listdir(cache)
    assert len(dumps) == 1
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "3",
                    "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_subgroups_file_scope(tmp_path):
    subs = tmp_path / "subs.json"
    subs.write_text(json.dumps([
        [[[0, 1], [1, 0]]],           # a reflection, order 2
        [[[0, 1], [1, 1]]],           # order 3 rotation
    ]))
    out = tmp_path / "out.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--subgroups", "file", "--subgroups-file", str(subs),
                    "--out", str(out)]) == 0
    rows = read_jsonl(out)
    assert rows[-1]["pairs"] == 2
    assert sorted(r["h_order"] for r in rows[:-1]) == [2, 3]


def test_jobs_parallel_smoke(tmp_path):
    out_seq = tmp_path / "seq.jsonl"
    out_par = tmp_path / "par.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--out", str(out_seq)]) == 0
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--jobs", "2", "--out", str(out_par)]) == 0
    assert out_seq.read_bytes() == out_par.read_bytes()


def test_extension_field_group(tmp_path):
    # GL(1,4): cyclic of order 3, scalar matrices over GF(4)
    out = tmp_path / "gl14.jsonl"
    code = run_cli(["verify", "--preset", "GL", "--n", "1", "--q", "4",
                    "--out", str(out)])
    assert code == 0
    rows = read_jsonl(out)
    assert rows[-1]["pairs"] == 1  # only the trivial subgroup is proper


def test_bad_q_rejected():
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "6"]) == 2


def test_max_index_scope(tmp_path):
    out = tmp_path / "bounded.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "3",
                    "--max-index", "4", "--out", str(out)]) == 0
    rows = read_jsonl(out)
    assert rows[-1]["pairs"] > 0
    assert all(48 // r["h_order"] <= 4 for r in rows[:-1])


def test_timing_flag_adds_fields(tmp_path):
    out = tmp_path / "timed.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--timing", "--out", str(out)]) == 0
    rows = read_jsonl(out)
    assert all("timing" in r for r in rows[:-1])
    assert "wall_time" in rows[-1]


def test_dump_faces_flag(tmp_path):
    out = tmp_path / "faces.jsonl"
    assert run_cli(["verify", "--preset", "GL", "--n", "2", "--q", "2",
                    "--dump-faces", "--out", str(out)]) == 0
    row = read_jsonl(out)[0]
    assert "subspace_complex_faces" in row
    assert "stabilizer_complex_faces" in row
