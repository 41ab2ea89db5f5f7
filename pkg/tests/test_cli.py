import json
import os

import pytest

from dga.cli import main
from dga.io import SchemaError, load_input, parse_input
from dga.jobs import FragmentCache, canonical_json, run_jobs, strip_timing


def minimal_doc(**overrides):
    doc = {
        "field": {"kind": "rationals"},
        "algebras": {"R": {"standard": "dual-numbers"}},
        "jobs": [{"op": "homology", "algebra": "R", "degrees": [-1, 1]}],
    }
    doc.update(overrides)
    return doc


def write_doc(tmp_path, doc, name="env.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_parse_minimal_field_only():
    env = parse_input({"field": {"kind": "prime-field", "characteristic": 5}})
    assert env.field.characteristic == 5
    assert not env.algebras and not env.jobs


def test_parse_rejects_nonprime_characteristic():
    with pytest.raises(SchemaError) as exc:
        parse_input({"field": {"kind": "prime-field", "characteristic": 6}})
    assert "$.field" in str(exc.value)


def test_parse_explicit_dual_numbers_table():
    doc = {
        "field": {"kind": "rationals"},
        "algebras": {
            "R": {
                "degrees": {"0": 2},
                "d": {},
                "unit": 0,
                "mult": [
                    [0, 0, ["1/1", "0/1"]],
                    [0, 1, ["0/1", "1/1"]],
                    [1, 0, ["0/1", "1/1"]],
                ],
            }
        },
    }
    env = parse_input(doc)
    assert env.algebras["R"].underlying.dim(0) == 2


def test_parse_reports_offending_path():
    doc = {
        "field": {"kind": "rationals"},
        "modules": {"M": {"degrees": {"0": "two"}}},
    }
    with pytest.raises(SchemaError) as exc:
        parse_input(doc)
    assert "$.modules.M.degrees.0" in str(exc.value)


def test_parse_rejects_broken_algebra_with_witness():
    doc = {
        "field": {"kind": "rationals"},
        "algebras": {
            "bad": {
                "degrees": {"0": 2},
                "d": {},
                "mult": [
                    [0, 0, ["1/1", "0/1"]],
                    [0, 1, ["0/1", "2/1"]],  # broken unit law
                    [1, 0, ["0/1", "1/1"]],
                ],
            }
        },
    }
    with pytest.raises(SchemaError) as exc:
        parse_input(doc)
    assert "unit law" in str(exc.value)


def test_run_jobs_and_exit_codes(tmp_path):
    doc = minimal_doc()
    env = parse_input(doc)
    report, code = run_jobs(env, doc)
    assert code == 0
    table = report["results"][0]["table"]
    assert table[1] == {"degree": 0, "dim": 2, "status": "EXACT", "window": [-1, 1]}


def test_scope_error_exit_code_4(tmp_path):
    doc = minimal_doc(jobs=[{"op": "theorem-a", "algebra": "R"}])  # rationals: scope
    env = parse_input(doc)
    report, code = run_jobs(env, doc)
    assert code == 4
    assert report["results"][0]["status"] == "scope-error"


def test_cli_end_to_end(tmp_path, capsys):
    path = write_doc(tmp_path, minimal_doc())
    out = str(tmp_path / "report.json")
    code = main(["run", path, "--out", out])
    assert code == 0
    report = json.loads(open(out).read())
    assert report["results"][0]["status"] == "ok"


def test_cli_schema_error_exit_2(tmp_path):
    path = write_doc(tmp_path, {"field": {"kind": "prime-field", "characteristic": 9}})
    assert main(["run", path]) == 2


def test_cli_single_shot_hh(tmp_path, capsys):
    path = write_doc(tmp_path, minimal_doc(jobs=[]))
    out = str(tmp_path / "r.json")
    code = main(["hh", path, "--algebra", "R", "--degrees", "0", "2", "--out", out])
    assert code == 0
    report = json.loads(open(out).read())
    dims = [row["dim"] for row in report["results"][0]["table"]]
    assert dims == [2, 1, 1]


def test_determinism_across_runs_and_workers(tmp_path):
    doc = minimal_doc(
        jobs=[
            {"op": "homology", "algebra": "R", "degrees": [-1, 1]},
            {"op": "hh", "algebra": "R", "degrees": [0, 3]},
            {"op": "free-f", "algebra": "R", "L": 3, "degrees": [-1, 1]},
        ]
    )
    env = parse_input(doc)
    rep1, _ = run_jobs(env, doc, workers=1)
    rep2, _ = run_jobs(parse_input(doc), doc, workers=8)
    rep3, _ = run_jobs(parse_input(doc), doc, workers=1)
    assert canonical_json(strip_timing(rep1)) == canonical_json(strip_timing(rep2))
    assert canonical_json(strip_timing(rep1)) == canonical_json(strip_timing(rep3))


def test_cache_round_trip_and_corruption(tmp_path):
    doc = minimal_doc()
    env = parse_input(doc)
    cache_dir = str(tmp_path / "cache")
    rep1, _ = run_jobs(env, doc, cache_dir=cache_dir)
    # second run is served from cache and must be identical
    rep2, _ = run_jobs(parse_input(doc), doc, cache_dir=cache_dir)
    assert canonical_json(strip_timing(rep1)) == canonical_json(strip_timing(rep2))
    # tamper with every entry: results must still be correct (recomputed)
    for name in os.listdir(cache_dir):
        p = os.path.join(cache_dir, name)
        entry = json.loads(open(p).read())
        entry["payload"]["results"] = "garbage"
        open(p, "w").write(json.dumps(entry))
    rep3, _ = run_jobs(parse_input(doc), doc, cache_dir=cache_dir)
    assert canonical_json(strip_timing(rep1)) == canonical_json(strip_timing(rep3))


def test_cache_disabled_same_results(tmp_path):
    doc = minimal_doc()
    rep1, _ = run_jobs(parse_input(doc), doc, cache_dir=None)
    rep2, _ = run_jobs(parse_input(doc), doc, cache_dir=str(tmp_path / "c"))
    assert canonical_json(strip_timing(rep1)) == canonical_json(strip_timing(rep2))


def test_no_stabilize_marks_unstable(tmp_path):
    doc = {
        "field": {"kind": "rationals"},
        "algebras": {"F": {"standard": "free", "generator_degree": 2, "weight_cap": 6}},
        "jobs": [{"op": "hh", "algebra": "F", "degrees": [-1, 0], "cutoff": 6}],
    }
    env = parse_input(doc)
    report, code = run_jobs(env, doc, stabilize=False)
    assert code == 3
    assert all("UNSTABLE" in row["status"] for row in report["results"][0]["table"])


def test_pretty_rendering_smoke(tmp_path):
    from dga.jobs import render_pretty

    doc = minimal_doc()
    report, _ = run_jobs(parse_input(doc), doc)
    text = render_pretty(report)
    assert "homology" in text and "degree" in text
