"""
Windowed homology of directed temporal contact networks.

Window kinds:
- time_sliding: [origin + k*stride, origin + k*stride + width) for k >= 0
- count_sliding: the most recent `width` contacts, advancing by `stride`
- calendar_day: UTC days counted from the first midnight at or before the
  first contact

Every window is aggregated into a simple digraph (duplicates merged, loops
dropped) and its reduced Betti numbers are computed. Windows are evaluated
by the worker pool and reported in window order.
"""
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pathhom.core.digraph import Digraph, VertexMap, from_arcs
from pathhom.core.homology import HomologySummary, homology
from pathhom.data_sources.contacts import read_contacts
from pathhom.errors import OutputError, UsageError
from pathhom.services.motifs import representative_arcs
from pathhom.services.workers import map_ordered
from pathhom.utils.logger import log_diagnostic, logger

DAY = 86400

_UNITS = {"": 1, "s": 1, "m": 60, "h": 3600, "d": DAY}


@dataclass(frozen=True, eq=False)
class ContactStream:
    """Time-sorted contacts (columns source, target, timestamp)."""
    frame: pd.DataFrame
    source: str = ""

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def timestamps(self) -> np.ndarray:
        return self.frame["timestamp"].to_numpy()

    @property
    def span(self) -> Optional[Tuple[int, int]]:
        if len(self.frame) == 0:
            return None
        stamps = self.timestamps
        return int(stamps[0]), int(stamps[-1])

    def contacts(self) -> List[Tuple[Hashable, Hashable, int]]:
        return list(zip(self.frame["source"].tolist(), self.frame["target"].tolist(),
                        self.frame["timestamp"].tolist()))

    def vertex_count(self) -> int:
        return len(set(self.frame["source"].tolist()) | set(self.frame["target"].tolist()))


def ingest(path: Union[str, Path]) -> ContactStream:
    return ContactStream(read_contacts(path), source=Path(path).name)


def limit_days(stream: ContactStream, days: int) -> ContactStream:
    """Keep the contacts of the first ``days`` calendar days (UTC)."""
    if len(stream) == 0:
        return stream
    origin = first_midnight(stream.span[0])
    frame = stream.frame[stream.frame["timestamp"] < origin + days * DAY].reset_index(drop=True)
    return ContactStream(frame, source=stream.source)


def first_midnight(timestamp: int) -> int:
    return timestamp - timestamp % DAY


def window_date(bound: int) -> str:
    """ISO-8601 UTC rendering of a window bound."""
    return datetime.fromtimestamp(int(bound), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class WindowSpec:
    """
    ``width`` and ``stride`` are seconds for time_sliding and calendar_day,
    contact counts for count_sliding. ``origin`` defaults to the first
    timestamp (time_sliding) or the first midnight (calendar_day).
    """
    kind: str
    width: int
    stride: int
    origin: Optional[int] = None

    def validated(self) -> "WindowSpec":
        if self.kind not in ("time_sliding", "count_sliding", "calendar_day"):
            raise UsageError(f"unknown window kind {self.kind!r}", error_code="INVALID_WINDOW")
        if self.width <= 0 or self.stride <= 0:
            raise UsageError("window width and stride must be positive", error_code="INVALID_WINDOW")
        if self.stride > self.width:
            raise UsageError(f"stride {self.stride} exceeds width {self.width}", error_code="INVALID_WINDOW")
        return self


def parse_duration(text: str) -> int:
    match = re.fullmatch(r"\s*(\d+)\s*([smhd]?)\s*", text)
    if not match:
        raise UsageError(f"cannot parse duration {text!r} (use e.g. 3600, 60m, 24h, 2d)",
                         error_code="INVALID_WINDOW")
    return int(match.group(1)) * _UNITS[match.group(2)]


def parse_window_spec(text: str, origin: Optional[int] = None) -> WindowSpec:
    """
    Parse "time:24h:8h", "count:100:50" or "day".

    Raises:
        UsageError: unknown kind or invalid numbers
    """
    parts = text.strip().split(":")
    kind = parts[0].lower()
    if kind == "day" and len(parts) == 1:
        return WindowSpec("calendar_day", DAY, DAY, origin).validated()
    if kind == "time" and len(parts) == 3:
        return WindowSpec("time_sliding", parse_duration(parts[1]), parse_duration(parts[2]), origin).validated()
    if kind == "count" and len(parts) == 3:
        if not (parts[1].isdigit() and parts[2].isdigit()):
            raise UsageError(f"count windows take integer sizes, got {text!r}", error_code="INVALID_WINDOW")
        return WindowSpec("count_sliding", int(parts[1]), int(parts[2]), origin).validated()
    raise UsageError(f"cannot parse window {text!r}; expected time:W:S, count:W:S or day",
                     error_code="INVALID_WINDOW")


@dataclass(frozen=True, eq=False)
class Window:
    """
    ``start``/``end`` bound the window half-open: timestamps for time and
    day windows, contact positions (0-based) for count windows.
    """
    index: int
    start: int
    end: int
    frame: pd.DataFrame

    @property
    def arcs(self) -> List[Tuple[Hashable, Hashable]]:
        return list(zip(self.frame["source"].tolist(), self.frame["target"].tolist()))


def windows(stream: ContactStream, spec: WindowSpec) -> Iterator[Window]:
    """
    Cut the stream into windows, lazily and in order.

    Empty windows are emitted too (calendar days without contacts, time
    windows inside gaps).
    """
    spec = spec.validated()
    if len(stream) == 0:
        return
    stamps = stream.timestamps
    first, last = stream.span

    if spec.kind == "count_sliding":
        total = len(stream)
        ends = list(range(spec.width, total + 1, spec.stride)) or [total]
        for index, end in enumerate(ends):
            start = max(0, end - spec.width)
            yield Window(index, start, end, stream.frame.iloc[start:end])
        return

    if spec.kind == "calendar_day":
        origin = first_midnight(first) if spec.origin is None else spec.origin
    else:
        origin = first if spec.origin is None else spec.origin
    if origin > first:
        skipped = int(np.searchsorted(stamps, origin, side="left"))
        log_diagnostic("CONTACTS_BEFORE_ORIGIN", f"{skipped} contact(s) precede the window origin {origin}")
    if last < origin:
        return

    for k in range((last - origin) // spec.stride + 1):
        start = origin + k * spec.stride
        end = start + spec.width
        lo = int(np.searchsorted(stamps, start, side="left"))
        hi = int(np.searchsorted(stamps, end, side="left"))
        yield Window(k, start, end, stream.frame.iloc[lo:hi])


def aggregate(window: Window) -> Tuple[Digraph, VertexMap]:
    """Simple digraph of a window: parallel contacts merged, loops dropped."""
    return from_arcs(window.arcs, report_loops=False)


@dataclass(frozen=True)
class WindowResult:
    index: int
    start: int
    end: int
    contacts: int
    vertices: int
    arcs: int
    reduced_betti: Tuple[int, ...]
    loops: int = 0
    representatives: Optional[List[Dict[str, Any]]] = field(default=None, compare=False)

    def row(self) -> Dict[str, Any]:
        row = {
            "index": self.index,
            "start": self.start,
            "end": self.end,
            "contacts": self.contacts,
            "vertices": self.vertices,
            "arcs": self.arcs,
        }
        row.update({f"b{p}": value for p, value in enumerate(self.reduced_betti)})
        return row


def _representative_records(summary: HomologySummary, vmap: VertexMap) -> List[Dict[str, Any]]:
    records = []
    for chain in summary.representatives.get(2, ()):
        labeled = chain.relabel(vmap)
        record = chain.to_dict(vmap)
        record["arcs"] = [list(arc) for arc in representative_arcs(labeled)]
        records.append(record)
    return records


def _analyze_window(job) -> WindowResult:
    index, start, end, arcs, max_dim, want_reps = job
    d, vmap = from_arcs(arcs, report_loops=False)
    with_reps = want_reps and max_dim >= 2
    summary = homology(d, max_dim, want_reps=with_reps, rep_dims=[2])
    betti = summary.reduced_betti
    reps = _representative_records(summary, vmap) if with_reps and betti[2] > 0 else None
    return WindowResult(
        index=index,
        start=start,
        end=end,
        contacts=len(arcs),
        vertices=d.n,
        arcs=len(d.arcs),
        reduced_betti=betti,
        loops=sum(1 for u, v in arcs if u == v),
        representatives=reps,
    )


def analyze(
    stream: ContactStream,
    spec: WindowSpec,
    max_dim: int = 2,
    want_reps: bool = False,
    threads: Optional[int] = None,
) -> List[WindowResult]:
    """
    Reduced Betti numbers of every window.

    Args:
        stream: Ingested contacts
        spec: Window specification
        max_dim: Highest dimension computed
        want_reps: Attach dimension-2 representatives (external labels) to
            windows with nonzero second Betti number
        threads: Worker count (None: PATHHOM_THREADS)

    Returns:
        One WindowResult per window, in window order
    """
    if max_dim < 0:
        raise UsageError(f"--max-dim must be >= 0, got {max_dim}", error_code="INVALID_MAX_DIM")
    jobs = (
        (w.index, w.start, w.end, w.arcs, max_dim, want_reps)
        for w in windows(stream, spec)
    )
    results = list(map_ordered(_analyze_window, jobs, threads))

    loops = sum(r.loops for r in results)
    if loops:
        log_diagnostic("LOOPS_STRIPPED", f"removed {loops} loop contact(s) across {len(results)} window(s)")
    logger.info(f"Analyzed {len(results)} {spec.kind} windows of {stream.source or 'stream'}")
    return results


def betti_histogram(results: Sequence[WindowResult], p: int) -> Dict[int, int]:
    """How many windows have each value of the reduced Betti number in dimension p."""
    histogram: Dict[int, int] = {}
    for result in results:
        value = result.reduced_betti[p]
        histogram[value] = histogram.get(value, 0) + 1
    return dict(sorted(histogram.items()))


def results_frame(results: Sequence[WindowResult], max_dim: int) -> pd.DataFrame:
    columns = ["index", "start", "end", "contacts", "vertices", "arcs"] + [f"b{p}" for p in range(max_dim + 1)]
    return pd.DataFrame([r.row() for r in results], columns=columns)


def representatives_document(results: Sequence[WindowResult]) -> Dict[str, Any]:
    """JSON sidecar: representatives of every window that has them."""
    return {
        "windows": [
            {"index": r.index, "start": r.start, "end": r.end,
             "reduced_betti": list(r.reduced_betti), "representatives": r.representatives}
            for r in results
            if r.representatives
        ]
    }


def write_outputs(results: Sequence[WindowResult], max_dim: int, csv_path: Union[str, Path],
                  reps_path: Optional[Union[str, Path]] = None):
    """Write the per-window CSV and, if given, the representatives sidecar."""
    try:
        results_frame(results, max_dim).to_csv(csv_path, index=False)
        if reps_path is not None:
            with open(reps_path, "w") as handle:
                json.dump(representatives_document(results), handle, indent=2, default=str)
    except OSError as e:
        raise OutputError(f"cannot write results: {e}", details={"path": str(e.filename or csv_path)}) from e


__all__ = [
    "ContactStream", "WindowSpec", "Window", "WindowResult", "ingest", "windows", "aggregate",
    "analyze", "parse_window_spec", "betti_histogram", "window_date", "limit_days", "results_frame",
    "representatives_document", "write_outputs",
]
