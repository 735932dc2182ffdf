import json
from collections import Counter

import pandas as pd
import pytest

from pathhom.errors import UsageError
from pathhom.services.temporal import (
    DAY,
    ContactStream,
    WindowSpec,
    aggregate,
    analyze,
    betti_histogram,
    ingest,
    limit_days,
    parse_duration,
    parse_window_spec,
    results_frame,
    window_date,
    windows,
    write_outputs,
)


def _stream(contacts):
    frame = pd.DataFrame(contacts, columns=["source", "target", "timestamp"])
    return ContactStream(frame.sort_values("timestamp", kind="mergesort", ignore_index=True), source="test")


def test_time_windows_example():
    stream = _stream([(1, 2, 0), (2, 3, 10), (3, 1, 25)])
    spec = WindowSpec("time_sliding", width=20, stride=10, origin=0)
    cut = [(w.start, w.end, len(w.frame)) for w in windows(stream, spec)]
    assert cut == [(0, 20, 2), (10, 30, 2), (20, 40, 1)]


def test_count_windows_take_the_most_recent_contacts():
    stream = _stream([(i, i + 1, i) for i in range(150)])
    cut = [(w.start, w.end) for w in windows(stream, parse_window_spec("count:100:50"))]
    assert cut == [(0, 100), (50, 150)]


def test_short_stream_gives_one_count_window():
    stream = _stream([(1, 2, 0), (2, 1, 5)])
    cut = [(w.start, w.end) for w in windows(stream, parse_window_spec("count:100:50"))]
    assert cut == [(0, 2)]


def test_day_windows_start_at_midnight_and_keep_empty_days():
    stream = _stream([(1, 2, 2 * DAY + 5), (2, 1, 4 * DAY + 1)])
    cut = [(w.index, w.start, len(w.frame)) for w in windows(stream, parse_window_spec("day"))]
    assert cut == [(0, 2 * DAY, 1), (1, 3 * DAY, 0), (2, 4 * DAY, 1)]


def test_every_interior_contact_is_in_width_over_stride_windows():
    stream = _stream([(t % 5, (t + 1) % 5, t) for t in range(0, 200, 7)])
    seen = Counter()
    for w in windows(stream, WindowSpec("time_sliding", width=30, stride=10)):
        seen.update(w.frame["timestamp"].tolist())
    assert all(seen[t] == 3 for t in range(0, 200, 7) if t >= 20)


def test_halving_the_stride_keeps_every_window():
    stream = _stream([(t % 4, (t + 1) % 4, t) for t in range(0, 300, 11)])
    coarse = {(w.start, tuple(w.frame["timestamp"])) for w in windows(stream, WindowSpec("time_sliding", 40, 20))}
    fine = {(w.start, tuple(w.frame["timestamp"])) for w in windows(stream, WindowSpec("time_sliding", 40, 10))}
    assert coarse <= fine


def test_origin_after_first_contact():
    stream = _stream([(1, 2, 0), (2, 3, 50)])
    cut = [w.start for w in windows(stream, WindowSpec("time_sliding", 20, 20, origin=40))]
    assert cut == [40]


def test_empty_stream_has_no_windows():
    assert list(windows(_stream([]), parse_window_spec("time:10:5"))) == []


@pytest.mark.parametrize("text", ["bogus", "time:10:20", "time:24x:8h", "count:a:b", "count:10", "time:0:0"])
def test_window_spec_errors(text):
    with pytest.raises(UsageError):
        parse_window_spec(text)


def test_parse_duration():
    assert parse_duration("3600") == 3600
    assert parse_duration("60m") == 3600
    assert parse_duration("24h") == DAY
    assert parse_duration("2d") == 2 * DAY
    spec = parse_window_spec("time:24h:8h", origin=7)
    assert (spec.kind, spec.width, spec.stride, spec.origin) == ("time_sliding", DAY, 8 * 3600, 7)


def test_aggregate_merges_duplicates_and_drops_loops():
    stream = _stream([("a", "b", 1), ("a", "b", 2), ("b", "b", 3), ("b", "a", 4)])
    (window,) = windows(stream, WindowSpec("time_sliding", 10, 10))
    d, vmap = aggregate(window)
    assert vmap.backward == ("a", "b")
    assert d.arcs == frozenset({(0, 1), (1, 0)})
    assert aggregate(window) == (d, vmap)


def test_analyze_fixture(fixtures_dir):
    stream = ingest(fixtures_dir / "contacts_small.txt")
    results = analyze(stream, parse_window_spec("time:20:10"), max_dim=2, threads=1)

    assert [r.contacts for r in results] == [2, 3, 3, 1]
    # 1 <-> 2 is a directed 2-cycle.
    assert results[0].reduced_betti == (0, 1, 0)
    # Only the loop 3 -> 3 falls in the last window.
    assert results[3].loops == 1
    assert (results[3].vertices, results[3].arcs, results[3].reduced_betti) == (1, 0, (0, 0, 0))


def test_empty_window_is_all_zero():
    stream = _stream([(1, 2, 0), (2, 1, 100)])
    results = analyze(stream, WindowSpec("time_sliding", 10, 10), max_dim=2, threads=1)
    assert len(results) == 11
    assert results[5].contacts == 0
    assert results[5].vertices == 0
    assert results[5].reduced_betti == (0, 0, 0)


def _dyad_contacts(n, t0=0):
    contacts = [("alice", "bob", t0), ("bob", "alice", t0 + 1)]
    for i in range(1, n + 1):
        contacts.append(("alice", f"user{i}", t0 + 2 * i))
        contacts.append(("bob", f"user{i}", t0 + 2 * i + 1))
    return contacts


def test_window_with_a_wide_dyad():
    stream = _stream(_dyad_contacts(9))
    results = analyze(stream, parse_window_spec("day"), max_dim=2, want_reps=True, threads=1)
    (result,) = results
    assert result.reduced_betti == (0, 0, 8)
    assert len(result.representatives) == 8
    record = result.representatives[0]
    assert record["dim"] == 2
    assert {tuple(arc[:2]) for arc in record["arcs"]} >= {("alice", "bob"), ("bob", "alice")}
    assert all(set(term["path"][:2]) == {"alice", "bob"} for term in record["terms"])



def test_representatives_only_where_second_homology_is_nonzero():
    stream = _stream([("x", "y", 0), ("y", "x", 1)] + _dyad_contacts(2, t0=100))
    spec = WindowSpec("time_sliding", 50, 50)
    plain = analyze(stream, spec, max_dim=2, threads=1)
    with_reps = analyze(stream, spec, max_dim=2, want_reps=True, threads=1)
    assert [r.reduced_betti for r in with_reps] == [r.reduced_betti for r in plain]
    assert with_reps[0].reduced_betti == (0, 1, 0)
    assert with_reps[0].representatives is None
    assert len(with_reps[-1].representatives) == with_reps[-1].reduced_betti[2] == 1
    assert all(r.representatives is None for r in plain)

def test_worker_count_does_not_change_results():
    stream = _stream(_dyad_contacts(3) + _dyad_contacts(2, t0=50))
    spec = WindowSpec("time_sliding", 30, 10)
    assert analyze(stream, spec, threads=1) == analyze(stream, spec, threads=2)


def test_limit_days():
    stream = _stream([(1, 2, DAY + 1), (2, 3, 2 * DAY + 1), (3, 4, 3 * DAY + 1)])
    assert len(limit_days(stream, 2)) == 2


def test_window_date():
    assert window_date(0) == "1970-01-01T00:00:00Z"
    assert window_date(DAY + 3600) == "1970-01-02T01:00:00Z"


def test_outputs(tmp_path):
    stream = _stream(_dyad_contacts(3))
    results = analyze(stream, parse_window_spec("day"), max_dim=2, want_reps=True, threads=1)
    assert betti_histogram(results, 2) == {2: 1}
    assert list(results_frame(results, 2).columns) == [
        "index", "start", "end", "contacts", "vertices", "arcs", "b0", "b1", "b2"
    ]

    csv_path, reps_path = tmp_path / "w.csv", tmp_path / "w.reps.json"
    write_outputs(results, 2, csv_path, reps_path)
    assert pd.read_csv(csv_path)["b2"].tolist() == [2]
    document = json.loads(reps_path.read_text())
    assert len(document["windows"][0]["representatives"]) == 2
