"""Command-line front end.

Every subcommand reads one artifact (PD text or graph JSON, ``-`` for
stdin), writes one artifact to stdout, and reports problems as one-line
diagnostics on stderr.  Exit codes: 0 success, 1 validation failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import DatasetError, PipelineConfig, SplitSpec, run_pipeline
from .decode import ReconstructError, reconstruct
from .diagram import DiagramError, canonical_gauss, gauss_text, parse_pd, render_pd
from .encode import DEFAULT_DISTANCE_SCALE, KnotGraph, encode
from .invariants import goeritz_determinant, kauffman_determinant
from .moves import MoveError, ShuffleConfig, shuffle, simplify

_SPLIT_MODES = {"random": "RANDOM_HOLDOUT", "crossings": "BY_SOLVED_CROSSINGS", "large": "LARGE_KNOTS"}


def _read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def _note(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _cmd_parse(args) -> int:
    d = parse_pd(_read_input(args.input))
    print(render_pd(d))
    faces = d.faces()
    _note(args, f"crossings={d.n} edges={2 * d.n} faces={len(faces)} gauss={gauss_text(d)}")
    return 0


def _cmd_shuffle(args) -> int:
    d = parse_pd(_read_input(args.input))
    cfg = ShuffleConfig(c=args.c, p_r1=args.p_r1, p_r2=1.0 - args.p_r1, seed=args.seed)
    out = shuffle(d, cfg)
    print(render_pd(out))
    _note(args, f"crossings {d.n} -> {out.n}")
    return 0


def _cmd_simplify(args) -> int:
    d = parse_pd(_read_input(args.input))
    result = simplify(d)
    print(render_pd(result.diagram))
    _note(args, f"removals={result.removals} is_trivial={result.is_trivial}")
    return 0


def _cmd_encode(args) -> int:
    d = parse_pd(_read_input(args.input))
    g = encode(d, d_s=args.d_s, paper_literal_distance=args.paper_literal_distance)
    obj = g.to_json_obj()
    obj["fingerprint"] = g.fingerprint
    print(json.dumps(obj, separators=(",", ":")))
    _note(args, f"nodes={g.num_nodes} edges={len(g.edges)} parallel={g.parallel_edge_count}")
    return 0


def _cmd_reconstruct(args) -> int:
    g = KnotGraph.from_json_obj(json.loads(_read_input(args.input)))
    report = reconstruct(g)
    print(render_pd(report.diagram))
    _note(args, report.chirality_note)
    return 0


def _cmd_invariant(args) -> int:
    d = parse_pd(_read_input(args.input))
    if args.which == "goeritz":
        print(goeritz_determinant(d))
    else:
        print(kauffman_determinant(d))
    return 0


def _cmd_roundtrip(args) -> int:
    d = parse_pd(_read_input(args.input))
    g = encode(d)
    report = reconstruct(g)
    same_knot = canonical_gauss(report.diagram) == canonical_gauss(d)
    det_in, det_out = goeritz_determinant(d), goeritz_determinant(report.diagram)
    ok = same_knot and det_in == det_out
    print(f"roundtrip={'pass' if ok else 'fail'} gauss_match={same_knot} "
          f"determinant={det_in}->{det_out}")
    return 0 if ok else 1


def _cmd_dataset(args) -> int:
    config = PipelineConfig.from_kv(Path(args.config).read_text())
    spec = SplitSpec(mode=_SPLIT_MODES[args.split], seed=args.seed)
    manifest = run_pipeline(args.csv, config, args.out, spec, seed=args.seed)
    print(json.dumps(manifest, indent=2, sort_keys=True))
    _note(args, f"wrote {manifest['count']} samples to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knotgraph", description=__doc__)
    parser.add_argument("--quiet", action="store_true", help="suppress stderr notes")
    parser.add_argument("--seed", type=int, default=None,
                        help="default seed for subcommands that take one")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="normalize PD notation and print stats")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("shuffle", help="random Reidemeister walk, then simplify")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--c", type=int, required=True, help="complexity parameter")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--p-r1", type=float, default=0.20, dest="p_r1")
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("simplify", help="undo all removable twists and pokes")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser("encode", help="PD in, attributed graph JSON out")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--d-s", type=float, default=DEFAULT_DISTANCE_SCALE, dest="d_s")
    p.add_argument("--paper-literal-distance", action="store_true")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("reconstruct", help="graph JSON in, PD out (up to mirror)")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("invariant", help="knot determinant")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--which", choices=("goeritz", "bracket"), default="goeritz")
    p.set_defaults(func=_cmd_invariant)

    p = sub.add_parser("roundtrip", help="encode+reconstruct and compare")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=_cmd_roundtrip)

    p = sub.add_parser("dataset", help="run the full corpus pipeline")
    p.add_argument("--csv", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--split", choices=sorted(_SPLIT_MODES), default="random")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_dataset)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = 0
    try:
        return args.func(args)
    except (DiagramError, MoveError, ReconstructError, DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
