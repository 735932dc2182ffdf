"""
Command-line entry point.

Usage:
    python -m pathhom compute data/fixtures/square_hole.edges --max-dim 2
    python -m pathhom motif dyad_up 5
    python -m pathhom census --family dag --vertices 6 --filter "b2>0" --csv
    python -m pathhom sample --n 4 --q 0.3 --trials 10000 --seed 1 --max-dim 3
    python -m pathhom temporal contacts.txt --window time:24h:8h --reps

Exit codes: 0 success, 1 usage error, 2 input error, 3 inconsistent system.
JSON, CSV or text goes to stdout (or --output); logs and errors go to stderr.
"""
import argparse
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from pathhom.config.settings import settings
from pathhom.core.digraph import VertexMap, from_arcs, prune_limbs_with_map, weak_components
from pathhom.core.exactla import Ring
from pathhom.core.homology import HomologySummary, homology
from pathhom.core.pathcomplex import build_path_complex, describe
from pathhom.data_sources.contacts import read_edge_list
from pathhom.errors import OutputError, PathHomError, UsageError
from pathhom.services.census import CensusQuery, Family, run_census
from pathhom.services.motifs import TORSION_LINKS, MotifName, MotifSpec, build
from pathhom.services.randgraph import ERSpec, sample_er
from pathhom.services.temporal import (
    analyze,
    ingest,
    limit_days,
    parse_window_spec,
    representatives_document,
    results_frame,
    window_date,
)
from pathhom.utils.logger import log_run, logger, set_level

FORMATS = ("json", "csv", "text")


class _Parser(argparse.ArgumentParser):
    # Turn argparse's exit(2) into the usage exit code.
    def error(self, message):
        raise UsageError(message, details={"usage": self.format_usage().strip()}, error_code="INVALID_ARGUMENTS")


@dataclass
class RunConfig:
    command: str
    format: str
    output: Optional[Path]
    verbose: bool
    seed: int
    threads: Optional[int]
    args: argparse.Namespace

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if args.format not in FORMATS:
            raise UsageError(f"unknown format {args.format!r}", error_code="INVALID_ARGUMENTS")
        if args.max_dim < 0:
            raise UsageError(f"--max-dim must be >= 0, got {args.max_dim}", error_code="INVALID_MAX_DIM")
        return cls(
            command=args.command,
            format=args.format,
            output=Path(args.output) if args.output else None,
            verbose=args.verbose,
            seed=args.seed,
            threads=args.threads,
            args=args,
        )


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-dim", type=int, default=settings.MAX_DIM,
                        help=f"Highest homology dimension (default: {settings.MAX_DIM})")
    common.add_argument("--ring", choices=["q", "z"], default="q",
                        help="Coefficients: q (rationals) or z (integers, adds torsion)")
    common.add_argument("--reps", action="store_true", help="Also output cycle representatives")
    common.add_argument("--threads", type=int, default=None,
                        help="Worker processes; 0 = one per core (default: PATHHOM_THREADS)")
    common.add_argument("--seed", type=int, default=settings.SEED, help=f"Random seed (default: {settings.SEED})")
    common.add_argument("--format", choices=FORMATS, default=settings.OUTPUT_FORMAT, help="Output format")
    common.add_argument("--csv", dest="format", action="store_const", const="csv", help="Shorthand for --format csv")
    common.add_argument("-o", "--output", default=None, help="Write output to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="pathhom", description="Exact path homology of digraphs")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    compute = commands.add_parser("compute", parents=[common], help="Homology of an edge-list file")
    compute.add_argument("edgelist", help="Text file with one 'source target' arc per line")
    compute.add_argument("--dump-paths", action="store_true",
                         help="Include allowed/invariant path counts per component")

    motif = commands.add_parser("motif", parents=[common], help="Homology of a named digraph family")
    motif.add_argument("name", choices=[m.value for m in MotifName])
    motif.add_argument("n", nargs="?", type=int, default=1, help="Family parameter (default: 1)")
    motif.add_argument("--link", choices=TORSION_LINKS, default="both",
                       help="torsion_cycle: direction of the links to the outside vertices")
    motif.add_argument("--q", type=float, default=0.5, help="er: arc probability")

    census = commands.add_parser("census", parents=[common], help="Homology of every small graph class")
    census.add_argument("--family", choices=[f.value for f in Family], required=True)
    census.add_argument("--vertices", type=int, required=True)
    census.add_argument("--filter", default=None, help='Predicate such as "b2>0" or "b2>0,b3==0"')
    census.add_argument("--histogram", default=None, help="CSV mode: also write the histogram JSON here")
    census.add_argument("--transpose-check", action="store_true",
                        help="Compare every class with its transpose and report differences")

    sample = commands.add_parser("sample", parents=[common], help="Betti distribution of ER digraphs")
    sample.add_argument("--n", type=int, required=True, help="Vertices")
    sample.add_argument("--q", type=float, required=True, help="Arc probability")
    sample.add_argument("--trials", type=int, required=True)

    temporal = commands.add_parser("temporal", parents=[common], help="Windowed homology of a contact file")
    temporal.add_argument("contacts", help="Contact file: 'source target [weight] timestamp' per line")
    temporal.add_argument("--window", default="time:24h:8h", help="time:W:S, count:W:S or day")
    temporal.add_argument("--origin", type=int, default=None, help="Timestamp anchoring the windows")
    temporal.add_argument("--days", type=int, default=None, help="Only analyze the first N days")
    temporal.add_argument("--reps-out", default=None, help="Representatives JSON sidecar (with --reps)")
    return parser


def _write_file(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}", details={"path": str(path)}) from e


def _emit(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        _write_file(output, text)


def _json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, default=str) + "\n"


def _csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False)
    return buffer.getvalue()


def _summary_frame(summary: HomologySummary) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "dimension": p,
                "betti": summary.betti[p],
                "reduced_betti": summary.reduced_betti[p],
                "torsion": " ".join(str(f) for f in summary.torsion.get(p, ())),
            }
            for p in range(summary.max_dim + 1)
        ],
        columns=["dimension", "betti", "reduced_betti", "torsion"],
    )


def _summary_text(summary: HomologySummary, vmap: Optional[VertexMap] = None) -> List[str]:
    lines = [f"reduced betti: {list(summary.reduced_betti)}"]
    for p, factors in sorted(summary.torsion.items()):
        if factors:
            lines.append(f"torsion in dimension {p}: " + " + ".join(f"Z/{f}" for f in factors))
    for p, chains in sorted((summary.representatives or {}).items()):
        for chain in chains:
            if vmap is not None:
                chain = chain.relabel(vmap)
            terms = " ".join(f"{c:+d}*{'>'.join(map(str, path))}" for path, c in chain.terms)
            lines.append(f"cycle in dimension {p}: {terms}")
    return lines


def run_compute(config: RunConfig) -> int:
    args = config.args
    d, vmap = from_arcs(read_edge_list(args.edgelist))
    ring = Ring.parse(args.ring)
    summary = homology(d, args.max_dim, ring, want_reps=args.reps, threads=config.threads)

    if config.format == "csv":
        _emit(_csv(_summary_frame(summary)), config.output)
        return 0
    if config.format == "text":
        lines = [f"{args.edgelist}: {d.n} vertices, {len(d.arcs)} arcs"] + _summary_text(summary, vmap)
        _emit("\n".join(lines) + "\n", config.output)
        return 0

    payload = {"input": str(args.edgelist), "vertices": d.n, "arcs": len(d.arcs), **summary.to_dict(vmap)}
    if args.dump_paths:
        pruned, prune_map = prune_limbs_with_map(d)
        payload["components"] = [
            describe(build_path_complex(component, args.max_dim + 1, ring),
                     labels=component_map.through(prune_map).through(vmap).backward, with_paths=True)
            for component, component_map in weak_components(pruned)
        ]
    _emit(_json(payload), config.output)
    return 0


def run_motif(config: RunConfig) -> int:
    args = config.args
    d = build(MotifSpec(args.name, args.n, link=args.link, q=args.q, seed=config.seed))
    summary = homology(d, args.max_dim, Ring.parse(args.ring), want_reps=args.reps,
                       threads=config.threads)

    if config.format == "csv":
        _emit(_csv(_summary_frame(summary)), config.output)
        return 0
    if config.format == "text":
        lines = [f"{u} {v}" for u, v in d.sorted_arcs()] + _summary_text(summary)
        _emit("\n".join(lines) + "\n", config.output)
        return 0

    payload = {
        "motif": args.name,
        "parameter": args.n,
        "vertices": d.n,
        "arcs": [list(arc) for arc in d.sorted_arcs()],
        **summary.to_dict(),
    }
    _emit(_json(payload), config.output)
    return 0


def run_census_command(config: RunConfig) -> int:
    args = config.args
    query = CensusQuery(family=args.family, vertices=args.vertices, max_dim=args.max_dim, filter=args.filter)
    result = run_census(query, threads=config.threads, transpose_check=args.transpose_check)

    if config.format == "csv":
        rows = [
            {"arcs": " ".join(f"{u}>{v}" for u, v in match.arcs),
             **{f"b{p}": value for p, value in enumerate(match.reduced_betti)}}
            for match in result.matches
        ]
        columns = ["arcs"] + [f"b{p}" for p in range(args.max_dim + 1)]
        _emit(_csv(pd.DataFrame(rows, columns=columns)), config.output)
        if args.histogram:
            _write_file(Path(args.histogram), _json({"total_classes": result.total_classes,
                                                  "histogram": result.histogram_dict()}))
        return 0
    if config.format == "text":
        lines = [f"{args.family} on {args.vertices} vertices: {result.total_classes} classes, "
                 f"{len(result.matches)} matches"]
        lines += [f"{list(m.reduced_betti)} {' '.join(f'{u}>{v}' for u, v in m.arcs)}" for m in result.matches]
        _emit("\n".join(lines) + "\n", config.output)
        return 0

    payload = {
        "family": args.family,
        "vertices": args.vertices,
        "max_dim": args.max_dim,
        "filter": args.filter,
        "total_classes": result.total_classes,
        "matches": [{"arcs": [list(a) for a in m.arcs], "reduced_betti": list(m.reduced_betti)}
                    for m in result.matches],
        "histogram": result.histogram_dict(),
        "transpose_defects": list(result.transpose_defects),
    }
    _emit(_json(payload), config.output)
    return 0


def run_sample(config: RunConfig) -> int:
    args = config.args
    spec = ERSpec(n=args.n, q=args.q, trials=args.trials, seed=config.seed, max_dim=args.max_dim)
    dist = sample_er(spec, threads=config.threads)
    rows = [{"dimension": p, "betti_value": value, "frequency": float(freq)} for p, value, freq in dist.rows()]

    if config.format == "csv":
        _emit(_csv(pd.DataFrame(rows, columns=["dimension", "betti_value", "frequency"])), config.output)
        return 0
    if config.format == "text":
        lines = [f"b{row['dimension']} = {row['betti_value']}: {row['frequency']}" for row in rows]
        _emit("\n".join(lines) + "\n", config.output)
        return 0

    payload = {
        "n": args.n, "q": args.q, "trials": args.trials, "seed": config.seed, "max_dim": args.max_dim,
        "distribution": [
            {"dimension": p, "betti_value": value, "count": dist.counts[p][value], "frequency": str(freq)}
            for p, value, freq in dist.rows()
        ],
    }
    _emit(_json(payload), config.output)
    return 0


def run_temporal(config: RunConfig) -> int:
    args = config.args
    spec = parse_window_spec(args.window, origin=args.origin)
    stream = ingest(args.contacts)
    if args.days:
        stream = limit_days(stream, args.days)
    results = analyze(stream, spec, max_dim=args.max_dim, want_reps=args.reps, threads=config.threads)

    if config.format == "csv":
        _emit(_csv(results_frame(results, args.max_dim)), config.output)
        sidecar = args.reps_out or (f"{config.output}.reps.json" if config.output else None)
        if args.reps and sidecar:
            _write_file(Path(sidecar), _json(representatives_document(results)))
        return 0
    if config.format == "text":
        lines = []
        for r in results:
            when = f"{window_date(r.start)}..{window_date(r.end)}" if spec.kind != "count_sliding" \
                else f"contacts {r.start + 1}-{r.end}"
            lines.append(f"#{r.index} {when}: {r.contacts} contacts, {r.vertices} vertices, "
                         f"betti {list(r.reduced_betti)}")
        _emit("\n".join(lines) + "\n", config.output)
        return 0

    windows = []
    for r in results:
        entry = r.row()
        if r.representatives:
            entry["representatives"] = r.representatives
        windows.append(entry)
    payload = {"source": stream.source, "window": args.window, "contacts": len(stream), "windows": windows}
    _emit(_json(payload), config.output)
    return 0


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "compute": run_compute,
    "motif": run_motif,
    "census": run_census_command,
    "sample": run_sample,
    "temporal": run_temporal,
}


def _target(args: Optional[argparse.Namespace]) -> str:
    if args is None:
        return "-"
    for name in ("edgelist", "name", "family", "contacts"):
        if getattr(args, name, None):
            return str(getattr(args, name))
    return "-"


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        Process exit code
    """
    start = time.time()
    args = None
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig.from_args(args)
        if config.verbose:
            set_level("DEBUG")
        exit_code = HANDLERS[config.command](config)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except PathHomError as e:
        if isinstance(e, UsageError) and "usage" in e.details:
            print(e.details["usage"], file=sys.stderr)
        print(json.dumps(e.to_dict(), default=str), file=sys.stderr)
        logger.error(f"{e.error_code}: {e.message}")
        exit_code = e.exit_code

    log_run(getattr(args, "command", None) or "pathhom", _target(args), exit_code, time.time() - start)
    return exit_code
