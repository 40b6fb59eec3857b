import csv
import io
import json
import os
from pathlib import Path

import pytest

from cyclicdeg import config
from cyclicdeg.cli import EXIT_BOUND, EXIT_CHECK, EXIT_INPUT, EXIT_OK, main
from cyclicdeg.report import (
    ResultCache,
    degree_from_json,
    degree_json,
    format_degree,
    render_csv,
    validate_document,
)

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "info_d8": ["info", "D8"],
    "info_q16": ["info", "Q16"],
    "degree_csd_d8": ["degree", "csd", "D8"],
    "degree_sd_s3": ["degree", "sd", "S3"],
    "degree_relative_q16": ["degree", "csd", "Q16", "--relative", "all"],
    "degree_relative_q16_order8": ["degree", "csd", "Q16", "--relative", "order=8"],
    "spectrum_sd16": ["spectrum", "SD16", "--include-sd"],
    "spectrum_a4": ["spectrum", "A4", "--include-sd"],
    "density_half": ["density", "approach", "1/2", "--tol", "1/100"],
    "density_two_fifths": ["density", "approach", "2/5", "--tol", "1/20"],
    "density_zero": ["density", "approach", "0/1", "--tol", "1/10"],
    "density_qtail": ["density", "qtail", "--max-n", "10"],
    "scan_equal_12": ["scan", "equal-degrees", "--max-order", "12"],
    "verify_closed_forms": ["verify", "cor32"],
}


@pytest.fixture(autouse=True)
def _restore_settings():
    saved = vars(config.settings).copy()
    yield
    for k, v in saved.items():
        setattr(config.settings, k, v)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, argv):
    code, out, _ = run(capsys, ["--json", *argv])
    return code, json.loads(out)


@pytest.mark.parametrize("name", GOLDEN_CASES)
def test_golden_json(capsys, name):
    code, doc = run_json(capsys, GOLDEN_CASES[name])
    assert code == EXIT_OK
    validate_document(doc)
    doc.pop("timing")
    path = GOLDEN / f"{name}.json"
    if os.environ.get("CYCLICDEG_UPDATE_GOLDEN"):
        path.parent.mkdir(exist_ok=True)
        path.write_text(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    assert doc == json.loads(path.read_text(encoding="utf-8"))


def test_documented_examples(capsys):
    _, doc = run_json(capsys, ["degree", "csd", "D8"])
    assert degree_from_json(doc["results"]["value"]) == degree_from_json({"num": "41", "den": "49"})
    _, doc = run_json(capsys, ["degree", "sd", "S3"])
    assert doc["results"]["value"] == {"num": "5", "den": "6"}
    assert doc["specs"] == ["D6"]
    _, doc = run_json(capsys, ["info", "Q16"])
    r = doc["results"]
    assert (r["l1"], r["l"], r["gamma"], r["iwasawa"]) == (8, 11, 2, False)
    _, doc = run_json(capsys, ["degree", "csd", "Q16", "--relative", "all"])
    values = {(row["value"]["num"], row["value"]["den"]) for row in doc["results"]["rows"]}
    assert values == {("1", "1"), ("11", "12"), ("9", "10"), ("7", "8")}


def test_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, ["degree", "csd", "D8", "--json"])
    assert code == EXIT_OK and json.loads(out)["results"]["kind"] == "csd"


def test_no_floats_in_json(capsys):
    _, out, _ = run(capsys, ["--json", "spectrum", "SD16", "--include-sd"])
    doc = json.loads(out)
    doc.pop("timing")

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, float)

    walk(doc)


def test_human_output_marks_approximations(capsys):
    code, out, _ = run(capsys, ["degree", "csd", "D8"])
    assert code == EXIT_OK
    assert "41/49 ≈ 0.836735" in out
    _, out, _ = run(capsys, ["spectrum", "A4"])
    assert "7/16 ≈ 0.4375" in out


def test_csv_output(capsys):
    code, out, _ = run(capsys, ["--csv", "degree", "csd", "Q16", "--relative", "all"])
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["spec"] == "Q16"
    assert {"value_num", "value_den"} <= set(rows[0])
    assert {(r["value_num"], r["value_den"]) for r in rows} == {("1", "1"), ("11", "12"), ("9", "10"), ("7", "8")}
    code, out, _ = run(capsys, ["--csv", "info", "D8"])
    header, row = out.strip().splitlines()
    assert header.startswith("spec,") and "csd_num,csd_den" in header
    assert row.startswith("D8,")


def test_json_and_csv_are_exclusive(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--json", "--csv", "info", "D8"])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [
    ["info", "Zsd(7,3,3)"],
    ["info", "D8 x"],
    ["degree", "csd", "Q16", "--relative", "order=3"],
    ["degree", "csd", "Q16", "--relative", "banana"],
    ["density", "approach", "3/2", "--tol", "1/10"],
    ["density", "approach", "1/2", "--tol", "x"],
    ["density", "qtail", "--max-n", "2"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == EXIT_INPUT
    assert out == "" and err.startswith("error:")


def test_syntax_error_reports_offset(capsys):
    _, _, err = run(capsys, ["info", "D8 x #"])
    assert "offset 5" in err


def test_resource_bound_exit_3(capsys):
    code, _, err = run(capsys, ["--max-order", "10", "info", "D12"])
    assert code == EXIT_BOUND and "bound" in err


def test_prime_horizon_exit_3(capsys, monkeypatch):
    monkeypatch.setattr(config.settings, "prime_horizon", 50)
    code, _, _ = run(capsys, ["density", "approach", "1/2", "--tol", "1/1000"])
    assert code == EXIT_BOUND


def test_failed_verification_exit_1(capsys):
    code, doc = run_json(capsys, ["verify", "thm310"])
    assert code == EXIT_CHECK
    validate_document(doc)
    assert doc["results"]["failed"] >= 1


def test_passing_verification_exit_0(capsys):
    code, doc = run_json(capsys, ["verify", "thm33"])
    assert code == EXIT_OK and doc["results"]["failed"] == 0


def test_cache_warm_and_cold_are_identical(capsys, tmp_path):
    argv = ["--json", "--cache-dir", str(tmp_path), "spectrum", "SD16", "--include-sd"]
    _, cold, _ = run(capsys, argv)
    _, warm, _ = run(capsys, argv)
    cold_doc, warm_doc = json.loads(cold), json.loads(warm)
    assert cold_doc["timing"]["cache_misses"] == 1 and warm_doc["timing"]["cache_hits"] == 1
    for d in (cold_doc, warm_doc):
        d.pop("timing")
    assert json.dumps(cold_doc, sort_keys=True) == json.dumps(warm_doc, sort_keys=True)
    # the cache directory is not part of the echoed command
    assert "cache_dir" not in json.dumps(cold_doc["command"])


def test_scan_cache_round_trip(capsys, tmp_path):
    argv = ["--json", "--cache-dir", str(tmp_path), "scan", "two-valued", "--max-order", "16"]
    _, cold, _ = run(capsys, argv)
    _, warm, _ = run(capsys, argv)
    a, b = json.loads(cold), json.loads(warm)
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_corrupt_cache_entries_are_ignored(tmp_path):
    cache = ResultCache(tmp_path)
    cache.put("D8", "info", {"x": 1})
    for f in tmp_path.iterdir():
        f.write_text("{not json", encoding="utf-8")
    assert cache.get("D8", "info") is None
    assert cache.fetch("D8", "info", lambda: {"x": 2}) == {"x": 2}
    assert cache.get("D8", "info") == {"x": 2}
    assert not list(tmp_path.glob("*.tmp"))


def test_disabled_cache():
    cache = ResultCache(None)
    cache.put("D8", "info", 1)
    assert cache.get("D8", "info") is None


def test_degree_json_round_trip():
    from fractions import Fraction

    for v in (Fraction(0), Fraction(1), Fraction(41, 49), Fraction(-3, 7)):
        assert degree_from_json(degree_json(v)) == v
    assert format_degree(Fraction(1)) == "1"


def test_render_csv_without_rows():
    doc = {"specs": ["D8"], "results": {"order": 8, "csd": {"num": "41", "den": "49"}}}
    assert render_csv(doc) == "spec,order,csd_num,csd_den\nD8,8,41,49\n"


def test_schema_is_well_formed():
    from importlib import resources

    import jsonschema

    def no_duplicates(pairs):
        keys = [k for k, _ in pairs]
        assert len(keys) == len(set(keys)), keys
        return dict(pairs)

    text = resources.files("cyclicdeg").joinpath("report_schema.json").read_text(encoding="utf-8")
    schema = json.loads(text, object_pairs_hook=no_duplicates)
    jsonschema.Draft202012Validator.check_schema(schema)


def test_schema_rejects_float_degrees(capsys):
    import jsonschema

    _, doc = run_json(capsys, ["degree", "csd", "D8"])
    doc["results"]["value"] = 0.8367
    with pytest.raises(jsonschema.ValidationError):
        validate_document(doc)
