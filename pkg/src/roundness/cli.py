"""Command-line front end.

Reports are JSON on stdout; diagnostics go to stderr; CSV only ever goes
to an explicit --out path.  Exit codes: 0 success, 2 parse error,
3 metric validation failure, 4 computation error, 5 reproduction-suite
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from . import repro as repro_mod
from .cayley import (
    cayley_ball,
    enumerate_symmetric_generating_sets,
    find_nonclosed_pair,
    is_sum_closed_triple,
    mask_to_generating_set,
    property_doublestar_check,
    property_star_check,
    scan_z2,
)
from .config import RunConfig
from .engine import Quad, RoundnessResult, roundness_estimate
from .errors import InputFormatError, RoundnessError, WordParseError
from .groups import (
    Free,
    format_element,
    parse_element,
    parse_generators,
    parse_group,
    symmetric_closure,
)
from .kernels import (
    DoubleSimplex,
    GrSearchResult,
    embedding_csv,
    gr_upper_search,
    gr_via_kernel,
    is_negative_kernel,
    power_matrix,
    schoenberg_embed,
)
from .metric import load_space, validate

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_COMPUTE = 4
EXIT_REPRO = 5

LOG2_3 = math.log2(3.0)


def conjectural_note(spec, upper: float) -> str | None:
    """Free-group ball bounds that land on log2(3) are flagged: the value is
    an upper bound for the infinite graph, with equality conjectural."""
    if isinstance(spec, Free) and not math.isinf(upper) and abs(upper - LOG2_3) <= 1e-6:
        return (
            "upper bound equals log2(3) at this radius; for the infinite graph "
            "this is an upper bound only, equality is conjectural"
        )
    return None


def _num(x: float):
    return "inf" if math.isinf(x) else x


def _witness_obj(q: Quad | None):
    if q is None:
        return None
    return {
        "indices": list(q.indices),
        "labels": list(q.labels),
        "edges": list(q.edge_lengths),
        "diagonals": list(q.diagonal_lengths),
    }


def _simplex_obj(s: DoubleSimplex | None):
    if s is None:
        return None
    return {
        "a": list(s.a),
        "b": list(s.b),
        "labels_a": [s.space.labels[i] for i in s.a],
        "labels_b": [s.space.labels[i] for i in s.b],
    }


def roundness_report(res: RoundnessResult) -> dict:
    return {
        "lower": _num(res.lower),
        "upper": _num(res.upper),
        "witness": _witness_obj(res.witness),
        "anomalies": [
            {"config": _witness_obj(a.config) if isinstance(a.config, Quad) else _simplex_obj(a.config),
             "t": a.t}
            for a in res.anomalies
        ],
        "quad_count": res.quad_count,
        "elapsed_ms": res.elapsed_ms,
    }


def genround_report(gr: float, search: GrSearchResult, qmax: float) -> dict:
    return {
        "gr": gr,
        "at_qmax": gr >= qmax,
        "search_upper": _num(search.upper),
        "search_witness": _simplex_obj(search.witness),
        "simplex_count": search.simplex_count,
        "seed": search.seed,
        "elapsed_ms": search.elapsed_ms,
    }


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _load_validated(path: str, cfg: RunConfig):
    space = load_space(path)
    problems = validate(space)
    if problems:
        for v in problems[:20]:
            print(f"validation: {v.kind} at {v.indices} (amount {v.amount})", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)
    return space


def _cfg_from(args) -> RunConfig:
    return RunConfig(
        tol=args.tol,
        qmax=args.qmax,
        grid=args.grid,
        ball_cap=args.ball_cap,
        seed=args.seed,
        threads=args.threads,
    )


def cmd_roundness(args) -> int:
    space = _load_validated(args.input, _cfg_from(args))
    res = roundness_estimate(space, _cfg_from(args))
    _emit(roundness_report(res))
    return EXIT_OK


def cmd_genround(args) -> int:
    cfg = _cfg_from(args)
    space = _load_validated(args.input, cfg)
    gr = gr_via_kernel(space, cfg)
    search = gr_upper_search(space, max_n=args.max_n, budget=args.budget, cfg=cfg)
    _emit(genround_report(gr, search, cfg.qmax))
    return EXIT_OK


def cmd_kernel(args) -> int:
    cfg = _cfg_from(args)
    space = _load_validated(args.input, cfg)
    rep = is_negative_kernel(power_matrix(space, args.p), p=args.p)
    _emit({"p": rep.p, "max_eig": rep.max_projected_eigenvalue,
           "negative": rep.is_negative, "tol": rep.tol})
    return EXIT_OK


def cmd_embed(args) -> int:
    cfg = _cfg_from(args)
    if not args.out:
        print("embed requires --out for the coordinate CSV", file=sys.stderr)
        return EXIT_PARSE
    space = _load_validated(args.input, cfg)
    emb = schoenberg_embed(space, args.p, cfg)
    with open(args.out, "w") as fh:
        fh.write(embedding_csv(emb, space.labels))
    _emit({"points": space.size, "dims": emb.dims,
           "max_relative_error": emb.max_relative_error, "out": args.out})
    return EXIT_OK


def cmd_cayley(args) -> int:
    cfg = _cfg_from(args)
    spec = parse_group(args.group)
    gens = symmetric_closure(spec, parse_generators(spec, args.generators))
    ball = cayley_ball(spec, gens, args.radius, cfg)
    head = {
        "group": args.group,
        "generators": [format_element(g) for g in gens.elements],
        "radius": args.radius,
        "ball_size": len(ball.elements),
    }
    if args.action == "ball":
        head["elements"] = [format_element(g) for g in ball.elements]
        head["depths"] = list(ball.depths)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(ball.space.to_json_obj(), fh)
                fh.write("\n")
            head["out"] = args.out
        _emit(head)
        return EXIT_OK
    if args.action == "roundness":
        res = roundness_estimate(ball.space, cfg)
        head.update(roundness_report(res))
        note = conjectural_note(spec, res.upper)
        if note:
            head["note"] = note
        _emit(head)
        return EXIT_OK
    # genround
    gr = gr_via_kernel(ball.space, cfg)
    search = gr_upper_search(ball.space, max_n=args.max_n, budget=args.budget, cfg=cfg)
    head.update(genround_report(gr, search, cfg.qmax))
    _emit(head)
    return EXIT_OK


def cmd_scan_z2(args) -> int:
    cfg = _cfg_from(args)
    checks = tuple(args.check) if args.check else ("star", "pair")
    summary = scan_z2(args.box, min_size=args.min_size, checks=checks, cfg=cfg)
    star_sets = [mask_to_generating_set(args.box, m) for m in summary.star_true_masks]
    obj = {
        "box": summary.box,
        "min_size": summary.min_size,
        "classes": summary.class_count,
        "sets_considered": summary.sets_considered,
        "generating": summary.generating_sets,
        "star_true": summary.star_true,
        "pair_found": summary.pair_found,
        "pair_found_pct": (100.0 * summary.pair_found / (summary.pair_found + summary.star_true)
                           if summary.pair_found + summary.star_true else 100.0),
        "star_true_sizes": sorted(len(g) for g in star_sets),
        "star_true_all_size_6": all(len(g) == 6 for g in star_sets),
        "star_true_all_sum_form": all(is_sum_closed_triple(g) for g in star_sets),
    }
    if summary.doublestar_true is not None:
        obj["doublestar_true"] = summary.doublestar_true
    if args.out:
        _write_scan_csv(args, cfg)
        obj["out"] = args.out
    _emit(obj)
    return EXIT_OK


def _write_scan_csv(args, cfg: RunConfig) -> None:
    """Per-set CSV rows via the streaming enumerator (practical for box <= 2)."""
    if args.box >= 3:
        print("note: per-set CSV at box >= 3 enumerates millions of rows", file=sys.stderr)
    checks = tuple(args.check) if args.check else ("star", "pair")
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["set_id", "size", "elements", "star", "doublestar", "pair_found",
                    "roundness_upper"])
        for k, gens in enumerate(
            enumerate_symmetric_generating_sets(args.box, args.min_size)
        ):
            star, _ = property_star_check(gens)
            double = ""
            if "doublestar" in checks:
                double, _ = property_doublestar_check(gens)
            pair = find_nonclosed_pair(gens)
            upper = ""
            if "roundness" in checks:
                ball = cayley_ball(gens.spec, gens, args.radius, cfg)
                upper = _num(roundness_estimate(ball.space, cfg).upper)
            w.writerow([
                k, len(gens),
                ";".join(format_element(g) for g in gens.elements),
                star, double, pair is not None, upper,
            ])


def cmd_repro(args) -> int:
    cfg = _cfg_from(args)
    if args.list:
        for cid in repro_mod.claim_ids():
            print(cid)
        return EXIT_OK
    wanted = args.claims.split(",") if args.claims else None
    results = repro_mod.run_claims(cfg, wanted)
    obj = {
        "claims": [
            {"claim": c.claim_id, "expected": c.expected, "computed": c.computed,
             "pass": c.passed, "elapsed_ms": c.elapsed_ms}
            for c in results
        ],
        "all_pass": all(c.passed for c in results),
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
    _emit(obj)
    return EXIT_OK if obj["all_pass"] else EXIT_REPRO


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="roundness",
        description="Roundness and generalized roundness of finite metric spaces "
                    "and Cayley-graph balls",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--qmax", type=float, default=64.0)
        p.add_argument("--grid", type=int, default=256)
        p.add_argument("--ball-cap", dest="ball_cap", type=int, default=20000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", default=None, help="output file for CSV/JSON artifacts")

    p = sub.add_parser("roundness", help="roundness bound of a metric-space or graph JSON file")
    p.add_argument("input")
    common(p)
    p.set_defaults(fn=cmd_roundness)

    p = sub.add_parser("genround", help="generalized-roundness bounds of a space")
    p.add_argument("input")
    p.add_argument("--max-n", dest="max_n", type=int, default=3)
    p.add_argument("--budget", type=int, default=2000)
    common(p)
    p.set_defaults(fn=cmd_genround)

    p = sub.add_parser("kernel", help="negative-kernel eigenvalue test at one exponent")
    p.add_argument("input")
    p.add_argument("--p", type=float, required=True)
    common(p)
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("embed", help="coordinate embedding reproducing d^p (CSV via --out)")
    p.add_argument("input")
    p.add_argument("--p", type=float, required=True)
    common(p)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("cayley", help="Cayley-ball construction and invariants")
    p.add_argument("group", help='group spec, e.g. "Z^2", "Z/4", "F_2", "Z/2 * Z/3", "D_4"')
    p.add_argument("generators", help='element list, e.g. "(1,0),(0,1)" or "x,y,y^-1*x"')
    p.add_argument("action", choices=("ball", "roundness", "genround"))
    p.add_argument("-R", "--radius", type=int, required=True)
    p.add_argument("--max-n", dest="max_n", type=int, default=3)
    p.add_argument("--budget", type=int, default=2000)
    common(p)
    p.set_defaults(fn=cmd_cayley)

    p = sub.add_parser("scan-z2", help="exhaustive scan of symmetric generating sets in a box")
    p.add_argument("--box", type=int, required=True)
    p.add_argument("--min-size", dest="min_size", type=int, default=4)
    p.add_argument("--check", action="append",
                   choices=("star", "doublestar", "pair", "roundness"))
    p.add_argument("-R", "--radius", type=int, default=2)
    common(p)
    p.set_defaults(fn=cmd_scan_z2)

    p = sub.add_parser("repro", help="run the built-in reproduction suite")
    p.add_argument("--list", action="store_true", help="print claim ids without running")
    p.add_argument("--claims", default=None, help="comma-separated subset of claim ids")
    common(p)
    p.set_defaults(fn=cmd_repro)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        raise exc
    except (InputFormatError, WordParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RoundnessError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
