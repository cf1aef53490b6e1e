"""Command-line entry point.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or schema
error, 3 horizon exhausted.  Every run that emits a certificate records its
seed, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import certify
from .acceptance import run_all
from .construction import (
    DEFAULT_DEPTH,
    PartitionData,
    build_partition,
    verify_partition,
    weight_fn,
)
from .errors import HorizonExhausted, IdealbenchError, SchemaError, StructuralError
from .ideals import hindman_witness_search, membership, ramsey_witness_search
from .reduction import (
    IdentityHeightOne,
    KatetovMap,
    ReductionClaim,
    katetov_witness_check,
)
from .scenarios import bundled_names, ideal_from_json, load_scenario
from .serialize import dump_json, load_json, rat_str
from .sets import set_from_json

USAGE_ERROR = 2
FAILURE = 1
EXHAUSTED = 3


def _emit(obj, out: Optional[str]) -> None:
    if out:
        dump_json(out, obj)
    else:
        json.dump(obj, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")


def _cmd_construct(args) -> int:
    p = build_partition(args.depth)
    _emit(p.to_json(), args.out)
    return 0


def _cmd_verify_construction(args) -> int:
    data = PartitionData.from_json(load_json(args.infile))
    report = verify_partition(data)
    _emit(report.to_json(), args.out)
    if not report.passed:
        for check in report.failures():
            print(
                f"condition {check.name} fails at index {check.index}",
                file=sys.stderr,
            )
        return FAILURE
    return 0


def _cmd_weights(args) -> int:
    p = build_partition(args.depth)
    selector = set_from_json(json.loads(args.selector))
    w = weight_fn(selector, p)
    upto = min(args.horizon, p.coverage_end)
    table = {str(m): rat_str(w(m)) for m in range(upto)}
    _emit({"divergence": w.divergence, "values": table}, args.out)
    return 0


def _cmd_membership(args) -> int:
    ideal = ideal_from_json(json.loads(args.ideal))
    queried = set_from_json(json.loads(args.set))
    verdict = membership(ideal, queried, args.horizon)
    _emit(verdict.to_json(), args.out)
    return 0


def _cmd_ramsey_search(args) -> int:
    queried = set_from_json(json.loads(args.set))
    witness = ramsey_witness_search(queried, args.size, args.horizon)
    _emit({"witness": None if witness is None else list(witness)}, args.out)
    return 0


def _cmd_hindman_search(args) -> int:
    queried = set_from_json(json.loads(args.set))
    witness = hindman_witness_search(queried, args.size, args.horizon)
    _emit({"witness": None if witness is None else list(witness)}, args.out)
    return 0


def _cmd_diagonalize(args) -> int:
    scn = load_scenario(args.scenario)
    engine = scn.payload.get("engine")
    if engine in ("pwfin", "posdiff", "hindman", "ramsey"):
        stages = args.stages or scn.default_stages
        cert = certify.produce(
            "diagonalization", {"scenario": scn.to_json(), "stages": stages}, args.seed
        )
        matched = cert["body"]["as_expected"]
    elif engine == "tree":
        cert = certify.produce("tree-labelling", {"scenario": scn.to_json()}, args.seed)
        body = cert["body"]
        matched = body["root_as_expected"] and body["critical_as_declared"]
    elif engine == "collision":
        cert = certify.produce("collision", {"scenario": scn.to_json()}, args.seed)
        matched = cert["body"]["forbidden_label_hit"]
    else:
        raise SchemaError(f"cannot diagonalize a {engine!r} scenario")
    _emit(cert, args.out)
    return 0 if matched else FAILURE


def _cmd_check_reduction(args) -> int:
    claim_obj = json.loads(args.claim)
    source = ideal_from_json(claim_obj["source"])
    target = ideal_from_json(claim_obj["target"])
    witness_obj = claim_obj.get("witness", {"kind": "identity-height-one"})
    queried = set_from_json(json.loads(args.set))
    if witness_obj.get("kind") == "identity-height-one":
        from .reduction import check_reduction_witness

        claim = ReductionClaim(source, target, IdentityHeightOne())
        cert = check_reduction_witness(claim, queried, horizon=args.horizon)
        _emit(
            {"certificate": None if cert is None else cert.to_json()},
            args.out,
        )
        return 0 if cert is not None else FAILURE
    claim = ReductionClaim(
        source, target, KatetovMap(witness_obj["kind"], witness_obj.get("value", 0))
    )
    verdict = katetov_witness_check(claim, queried, args.horizon)
    _emit(verdict.to_json(), args.out)
    return 0


def _cmd_certify(args) -> int:
    cert = load_json(args.infile)
    ok, detail = certify.recheck(cert)
    print(detail)
    return 0 if ok else FAILURE


def _cmd_suite(args) -> int:
    results = run_all(seed=args.seed, out_dir=args.out, depth30_budget=args.budget)
    stipulated = []
    for result in results:
        print(result.line())
        for _, cert in result.certificates:
            for entry in cert.get("assumptions", []):
                if entry["tag"] == "assumption":
                    stipulated.append(entry["statement"])
    print(f"stipulated assumptions recorded across certificates: {len(stipulated)}")
    for statement in sorted(set(stipulated)):
        print(f"  [assumption] {statement}")
    return 0 if all(r.passed for r in results) else FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealbench",
        description="workbench for ideals over the naturals: partitions, "
        "labelled trees, canonical searches, diagonalization engines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="emit greedy partition data")
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("verify-construction", help="verify partition data")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_verify_construction)

    sp = sub.add_parser("weights", help="tabulate selector weights")
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    sp.add_argument("--selector", required=True, help="set descriptor JSON")
    sp.add_argument("--horizon", type=int, default=32)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_weights)

    sp = sub.add_parser("membership", help="three-valued ideal membership")
    sp.add_argument("--ideal", required=True, help="ideal descriptor JSON")
    sp.add_argument("--set", required=True, help="set descriptor JSON")
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_membership)

    sp = sub.add_parser("ramsey-search", help="bounded clique witness search")
    sp.add_argument("--set", required=True)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_ramsey_search)

    sp = sub.add_parser("hindman-search", help="bounded finite-sums witness search")
    sp.add_argument("--set", required=True)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_hindman_search)

    sp = sub.add_parser("diagonalize", help="run a scenario end to end")
    sp.add_argument("--scenario", required=True, help=f"name or path; bundled: {', '.join(bundled_names())}")
    sp.add_argument("--stages", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_diagonalize)

    sp = sub.add_parser("check-reduction", help="check a reduction witness")
    sp.add_argument("--claim", required=True, help="claim JSON with source/target/witness")
    sp.add_argument("--set", required=True)
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_check_reduction)

    sp = sub.add_parser("certify", help="recheck a certificate file")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=_cmd_certify)

    sp = sub.add_parser("suite", help="run the acceptance criteria")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="directory for certificates")
    sp.add_argument("--budget", type=float, default=15.0,
                    help="wall-clock budget for the depth-30 attempt")
    sp.set_defaults(func=_cmd_suite)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except HorizonExhausted as exc:
        print(f"horizon exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    except StructuralError as exc:
        print(f"structural error: {exc}", file=sys.stderr)
        return FAILURE
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except IdealbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
