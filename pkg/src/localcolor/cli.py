"""Command-line entry point: ``localcolor <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 internal
assertion (a lemma-level check failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from localcolor import lowerbound as lb
from localcolor.errors import InputError, LemmaViolation, RoundLimitExceeded
from localcolor.generators import FAMILIES, GenSpec, generate
from localcolor.graph import Graph, is_proper
from localcolor.graphio import colors_to_json, load_colors, load_graph, save_graph, to_json
from localcolor.partition import audit_keys, run_partition, shrinkage_from_labels, step1_fixpoint
from localcolor.pipeline import check_result, color_graph, round_budget
from localcolor.presets import get_preset
from localcolor.structure import charge_procedure, disjointness_audit

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
BENCH_COLUMNS = ("family", "n", "rounds", "colors", "proper", "worst_shrink")


@dataclass(frozen=True)
class RunConfig:
    graph_path: Optional[Path]
    gen: Optional[GenSpec]
    preset: str
    output: Optional[Path]
    seed: int
    round_limit: Optional[int] = None

    def __post_init__(self):
        if (self.graph_path is None) == (self.gen is None):
            raise InputError("give exactly one of --graph or --family/--n")

    def load(self) -> Graph:
        if self.graph_path is not None:
            return load_graph(self.graph_path)
        return generate(self.gen)


def resolve_seed(flag: Optional[int]) -> int:
    env = os.environ.get("COLOR_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"COLOR_SEED must be an integer, got {env!r}") from None
    return 0 if flag is None else flag


def _int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [x for x in text.split(",") if x]


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _config(args, preset_default="4col") -> RunConfig:
    seed = resolve_seed(args.seed)
    gen = None
    if args.family is not None or args.n is not None:
        if args.family is None or args.n is None:
            raise InputError("--family and --n go together")
        gen = GenSpec(args.family, args.n, seed=seed)
    return RunConfig(
        graph_path=Path(args.graph) if args.graph else None,
        gen=gen,
        preset=getattr(args, "preset", preset_default),
        output=Path(args.output) if args.output else None,
        seed=seed,
        round_limit=getattr(args, "round_limit", None),
    )


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    seed = resolve_seed(args.seed)
    g = generate(GenSpec(args.family, args.n, seed=seed))
    if args.output:
        save_graph(g, args.output)
    else:
        sys.stdout.write(to_json(g) + "\n")
    return EXIT_OK


def cmd_partition(args) -> int:
    cfg = _config(args)
    g = cfg.load()
    params = get_preset(cfg.preset).partition
    labels, trace = run_partition(g, params)
    problems = audit_keys(g, labels, params)
    report = {
        "rounds": trace.rounds_used,
        "shrinkage": [list(r) for r in shrinkage_from_labels(labels)],
        "labels": {
            str(v): {"level": o.level, "phase": o.phase, "key": sorted(o.key)}
            for v, o in sorted(labels.items())
        },
        "problems": problems,
    }
    _emit(json.dumps(report, indent=1) + "\n", cfg.output)
    if args.trace:
        Path(args.trace).write_text(trace.to_csv())
    return EXIT_VERIFY if problems else EXIT_OK


def cmd_color(args) -> int:
    cfg = _config(args)
    g = cfg.load()
    result = color_graph(g, cfg.preset, measure_bits=bool(args.trace))
    limit = cfg.round_limit if cfg.round_limit is not None else round_budget(cfg.preset, g.n)
    if result.rounds > limit:
        raise RoundLimitExceeded(f"used {result.rounds} rounds, limit {limit}", result.trace, None)
    _emit(colors_to_json(result.colors, result.preset.palette) + "\n", cfg.output)
    if args.trace:
        Path(args.trace).write_text(result.trace.to_csv())
    verdict = check_result(g, result)
    print(
        f"n={g.n} rounds={result.rounds} colors={result.colors_used} proper={verdict.ok}",
        file=sys.stderr,
    )
    if not verdict.ok:
        print(f"improper: {verdict.message}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = _config(args)
    g = cfg.load()
    if args.fixpoint:
        g = step1_fixpoint(g, 10, 6)
    if args.what == "charge":
        residual, ledger, cert = charge_procedure(g)
        report = {
            "vertices": cert.vertices,
            "edges": cert.original_edges,
            "removed": cert.removed,
            "residual_edges": cert.residual_edges,
            "max_charge": str(max(ledger.charges.values(), default=0)),
            "bound": str(cert.certified_bound),
            "holds": cert.holds,
            "ledger": ledger.to_json(),
        }
        ok = cert.holds
    else:
        rep = disjointness_audit(g)
        report = {
            "five_cycles": rep.five_cycles,
            "four_cycles": rep.four_cycles,
            "triangles": rep.triangles,
            "cliques": rep.cliques,
            "violations": rep.violations,
        }
        ok = rep.ok
    _emit(json.dumps(report, indent=1) + "\n", cfg.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_lowerbound(args) -> int:
    spec = lb.GadgetSpec(args.family, args.k)
    if args.check == "forcing":
        res = lb.forcing_check(spec)
        report = {"family": spec.family, "k": spec.k, "vertices": spec.size, "forcing": res.holds}
        ok = res.holds
    elif args.check == "distance":
        ok = lb.distance_check(spec)
        report = {"family": spec.family, "k": spec.k, "distance_2k": ok}
    else:
        if args.t is None:
            raise InputError("--check swap needs --t")
        alg = ALGORITHMS[args.alg](args.t)
        v = lb.swap_labeling_experiment(spec.k, args.t, alg)
        report = {
            "k": v.k,
            "t": v.t,
            "algorithm": args.alg,
            "balls_disjoint": v.balls_disjoint,
            "proper_psi": v.proper_psi,
            "forcing_psi": v.forcing_psi,
            "proper_psi_prime": v.proper_psi_prime,
            "forcing_psi_prime": v.forcing_psi_prime,
            "violation": v.violation,
        }
        ok = v.violation and v.balls_disjoint
    print(json.dumps(report))
    return EXIT_OK if ok else EXIT_VERIFY


def bench_row(family: str, n: int, g: Graph, result):
    """One bench CSV row for a finished pipeline run, plus the verdict."""
    verdict = check_result(g, result)
    row = {
        "family": family,
        "n": n,
        "rounds": result.rounds,
        "colors": result.colors_used,
        "proper": verdict.ok,
        "worst_shrink": f"{result.worst_shrink():.6f}",
    }
    return row, verdict


def bench_rows(families, sizes, preset, seed=0):
    for family in families:
        for n in sizes:
            g = generate(GenSpec(family, n, seed=seed))
            yield bench_row(family, n, g, color_graph(g, preset, measure_bits=False))


def bench_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_bench(args) -> int:
    if args.sizes != sorted(args.sizes):
        raise InputError("sizes must be ascending")
    seed = resolve_seed(args.seed)
    rows = []
    status = EXIT_OK
    for row, verdict in bench_rows(args.families, args.sizes, args.preset, seed):
        rows.append(row)
        if not verdict.ok:
            print(f"{row['family']} n={row['n']}: {verdict.message}", file=sys.stderr)
            status = EXIT_VERIFY
            break
    _emit(bench_csv(rows), Path(args.output) if args.output else None)
    return status


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    palette, colors = load_colors(args.colors)
    if args.palette is not None:
        palette = args.palette
    verdict = is_proper(g, colors, require_total=True, palette=palette)
    if verdict.ok:
        print(f"ok: proper {palette}-coloring of {g.n} vertices")
        return EXIT_OK
    print(f"invalid: {verdict.message}")
    return EXIT_VERIFY


ALGORITHMS = {"ballgreedy": lb.BallGreedy, "idrank": lb.IdRank, "degparity": lb.DegreeParity}



# ---------------------------------------------------------------------------
# parser


def _input_args(p):
    p.add_argument("--graph", help="graph file (.json, or .txt/.edges edge list)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localcolor", description="Distributed planar graph coloring")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a generated graph")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", help="run the level/phase partition")
    _input_args(p)
    p.add_argument("--preset", default="4col", choices=("4col", "6col"))
    p.add_argument("--trace", help="write the per-round trace CSV here")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("color", help="run the full coloring pipeline")
    _input_args(p)
    p.add_argument("--preset", default="4col", choices=("4col", "6col"))
    p.add_argument("--round-limit", type=int)
    p.add_argument("--trace", help="write the per-round trace CSV here")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("analyze", help="structural checks on graphs without short removable cycles")
    p.add_argument("what", choices=("charge", "disjointness"))
    _input_args(p)
    p.add_argument("--fixpoint", action="store_true", help="first strip removable cycles to a fixpoint")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lowerbound", help="gadget checks and the relabeling experiment")
    p.add_argument("--family", choices=("planar4", "outerplanar3"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--check", choices=("forcing", "distance", "swap"), default="forcing")
    p.add_argument("--t", type=int)
    p.add_argument("--alg", choices=sorted(ALGORITHMS), default="ballgreedy")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("bench", help="CSV of rounds and colors over a size ladder")
    p.add_argument("--families", type=_str_list, default=["grid"])
    p.add_argument("--sizes", type=_int_list, default=[64, 256, 1024])
    p.add_argument("--preset", default="4col", choices=("4col", "6col"))
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a coloring file against a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--colors", required=True)
    p.add_argument("--palette", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LemmaViolation, RoundLimitExceeded) as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
