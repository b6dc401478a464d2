import json
import os
from pathlib import Path

import pytest

import minigo_verify as mv

CORPUS = Path(os.environ.get("MINIGO_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))

SELECT = """
func main() {
  c := make(chan int)
  done := make(chan int)
  go func() {
    select {
    case <-c:
    default:
    }
    done <- 1
  }()
  <-done
}
"""


def test_parse_build_check_clean_program():
    program = mv.parse(SELECT, "select.go")
    assert program.entries() == ["main"]
    model = mv.build(program, "main")
    assert model.name == "main"
    assert model.processes == ["go_main_func1"]
    verdict = mv.check(model)
    assert verdict["channel_safe"]
    assert verdict["global_deadlock_free"]
    assert not verdict["leaks"]
    assert verdict["trace"] == []


def test_double_close_trace():
    model = mv.build(mv.parse_file(str(CORPUS / "double_close.go")))
    verdict = mv.check(model)
    assert not verdict["channel_safe"]
    assert verdict["trace_kind"] == "channel-safety"
    closes = [e for e in verdict["trace"] if e["action"] == "close"]
    assert len(closes) == 2
    assert closes[0]["channel"] == closes[1]["channel"]


def test_bounds_and_missing_bound():
    model = mv.build(mv.parse_file(str(CORPUS / "file_processing.go")))
    assert [p["name"] for p in model.free_params] == ["len_files_0"]
    assert model.free_params[0]["role"] == "capacity"
    with pytest.raises(mv.MissingBound):
        mv.check(model)
    verdict = mv.check(model, {"len_files_0": 3})
    assert verdict["channel_safe"] and verdict["global_deadlock_free"]
    text = mv.emit_promela(model, {"len_files_0": 15})
    assert "chan a_in = [15] of {int}" in text
    assert "proctype chanMonitor(Chandef ch)" in text


def test_parse_error_is_raised():
    with pytest.raises(mv.ParseError):
        mv.parse("func main( {")
    assert issubclass(mv.ParseError, mv.MinigoError)


def test_analyze_report_round_trips(tmp_path):
    files = [CORPUS / "file_processing.go", CORPUS / "mismatch.go"]
    report = mv.analyze(files, default_bound=2, emit_promela_dir=str(tmp_path))
    assert report["schema"] == mv.REPORT_SCHEMA
    rows = {(Path(p["file"]).name, p["name"]): p for p in report["partitions"]}
    assert rows[("mismatch.go", "Work")]["globalDeadlockFree"]
    assert not rows[("mismatch.go", "main")]["globalDeadlockFree"]
    assert report["totals"]["violations"] == 1
    assert sorted(p.name for p in tmp_path.iterdir()) == ["Work_1.pml", "main_0.pml", "main_2.pml"]
    text = json.dumps(report)
    assert mv.render_report(mv.analyze_json([str(f) for f in files], {}, default_bound=2), True)
    assert json.loads(text) == report


def test_unresolved_bounds_lists_symbol():
    with pytest.raises(mv.UnresolvedBounds, match="len_files_0"):
        mv.analyze([CORPUS / "file_processing.go"])
