"""Command-line front end: ``lhomkit <classify|poly|solve|reduce|oracle> ...``.

Exit codes: 0 success, 2 input (I/O or parse) error, 3 precondition refusal,
4 internal verification failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import oracle
from .digraph import Digraph, read_digraph
from .errors import ContractError, ParseError, RefusalError, VerificationError
from .gadgets import build_dat_context, reduce_3col
from .pairs import PairGraph
from .polymorphisms import (
    build_binary_f,
    build_majority_mu,
    build_ternary_g,
    find_min_ordering,
    propagation_violation,
    verify_polymorphism,
)
from .solver import classify_and_solve, format_solution, parse_instance, serialize_instance
from .triples import TripleGraph, find_dat, find_permutable_triple, verify_dat_witness

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_REFUSAL = 3
EXIT_VERIFY = 4


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_digraph(path: str) -> Digraph:
    try:
        return read_digraph(path)
    except OSError as exc:
        raise _Failure(EXIT_INPUT, f"{path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise _Failure(EXIT_INPUT, f"{path}: {exc}") from None


def _guard(func, *args):
    """Run ``func`` and translate library errors into exit codes."""
    try:
        return func(*args)
    except _Failure:
        raise
    except ParseError as exc:
        raise _Failure(EXIT_INPUT, str(exc)) from None
    except (RefusalError, ContractError) as exc:
        raise _Failure(EXIT_REFUSAL, f"refused: {exc}") from None
    except VerificationError as exc:
        raise _Failure(EXIT_VERIFY, f"verification failed: {exc}") from None


# ---------------------------------------------------------------------------
# classify


def classify_report(H: Digraph) -> dict:
    PG = PairGraph(H)
    witness = find_dat(H, PG)
    if witness is None:
        return {"verdict": "DAT-FREE", "witness": None}
    if not verify_dat_witness(H, witness, PG):
        raise VerificationError("DAT witness failed its own check")
    return {"verdict": "DAT", "witness": witness}


def _classify_one(path: str) -> tuple[int, str, dict | None, str]:
    try:
        H = _load_digraph(path)
        rep = _guard(classify_report, H)
    except _Failure as exc:
        return exc.code, "", None, str(exc)
    text = rep["verdict"] + "\n"
    data = {"verdict": rep["verdict"], "witness": None}
    if rep["witness"] is not None:
        text += rep["witness"].serialize()
        data["witness"] = rep["witness"].to_dict()
    return EXIT_OK, text, data, ""


def cmd_classify(args) -> int:
    paths = args.paths
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_classify_one, paths))
    else:
        results = [_classify_one(p) for p in paths]
    code = max(r[0] for r in results)
    for (_, _, _, err) in results:
        if err:
            print(err, file=sys.stderr)
    many = len(paths) > 1
    if args.json:
        items = [
            {"path": p, "exit": r[0], **(r[2] or {"error": r[3]})} for p, r in zip(paths, results)
        ]
        _emit_json(items if many else items[0])
    else:
        for p, (c, text, _, _) in zip(paths, results):
            if many:
                print(f"c file {p}")
            if c == EXIT_OK:
                sys.stdout.write(text)
    return code


# ---------------------------------------------------------------------------
# poly


def poly_report(H: Digraph) -> dict:
    PG = PairGraph(H)
    TG = TripleGraph(H, PG)
    f = build_binary_f(PG)
    out = {"f": f, "f_ok": bool(verify_polymorphism(H, f)), "propagation_ok": propagation_violation(PG, f) is None}
    witness = find_dat(H, PG, TG)
    out["dat"] = witness is not None
    out["mu"] = out["g"] = None
    out["note"] = ""
    if witness is not None:
        out["note"] = f"H contains the DAT {witness.triple}; no conservative ternary table is built"
        return out
    if find_permutable_triple(TG) is None:
        mu = build_majority_mu(H, TG)
        out["mu"], out["mu_ok"] = mu, bool(verify_polymorphism(H, mu))
    g = build_ternary_g(PG, TG, f)
    out["g"], out["g_ok"] = g, bool(verify_polymorphism(H, g))
    order = find_min_ordering(H)
    out["min_ordering"] = order
    return out


def cmd_poly(args) -> int:
    H = _load_digraph(args.path)
    rep = _guard(poly_report, H)
    checks = [rep["f_ok"], rep["propagation_ok"], rep.get("mu_ok", True), rep.get("g_ok", True)]
    if args.json:
        data = {
            "f": rep["f"].values.tolist(),
            "f_verified": rep["f_ok"],
            "f_propagation": rep["propagation_ok"],
            "dat": rep["dat"],
            "mu": rep["mu"].values.tolist() if rep["mu"] is not None else None,
            "mu_verified": rep.get("mu_ok"),
            "g": rep["g"].values.tolist() if rep["g"] is not None else None,
            "g_verified": rep.get("g_ok"),
            "min_ordering": rep.get("min_ordering"),
            "note": rep["note"],
        }
        _emit_json(data)
    else:
        out = [rep["f"].serialize("f").rstrip("\n"), f"c verify f {_ok(rep['f_ok'])}",
               f"c propagation f {_ok(rep['propagation_ok'])}"]
        if rep["mu"] is not None:
            out += [rep["mu"].serialize("mu").rstrip("\n"), f"c verify mu {_ok(rep['mu_ok'])}"]
        if rep["g"] is not None:
            out += [rep["g"].serialize("g").rstrip("\n"), f"c verify g {_ok(rep['g_ok'])}"]
        if rep.get("min_ordering") is not None:
            out.append("c min-ordering " + " ".join(map(str, rep["min_ordering"])))
        if rep["note"]:
            out.append(f"c note {rep['note']}")
        print("\n".join(out))
    return EXIT_OK if all(checks) else EXIT_VERIFY


def _ok(flag: bool) -> str:
    return "ok" if flag else "FAILED"


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    try:
        with open(args.path) as fh:
            text = fh.read()
    except OSError as exc:
        raise _Failure(EXIT_INPUT, f"{args.path}: {exc.strerror or exc}") from None
    inst = _guard(parse_instance, text, os.path.dirname(os.path.abspath(args.path)))
    rep = _guard(classify_and_solve, inst.H, inst)
    if args.json:
        _emit_json(rep.to_dict())
    else:
        head = f"c verdict {rep.verdict}\nc method {rep.method.value}\n"
        if rep.note:
            head += f"c note {rep.note}\n"
        sys.stdout.write(head + format_solution(rep.assignment))
    return EXIT_OK


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    G = _load_digraph(args.graph)
    H = _load_digraph(args.target)
    ctx = _guard(build_dat_context, H)
    inst = _guard(reduce_3col, G, ctx)
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.json:
        _emit_json({
            "triple": list(ctx.triple),
            "vertices": inst.G.n,
            "arcs": len(inst.G.arcs),
            "output": args.output,
            "instance": None if args.output else text,
        })
    elif not args.output:
        sys.stdout.write(text)
    else:
        print(f"c wrote {args.output} vertices {inst.G.n} arcs {len(inst.G.arcs)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def oracle_report(H: Digraph) -> dict:
    n = H.n
    rep = {
        "has_dat": oracle.has_dat(H),
        "has_permutable_triple": oracle.has_permutable_triple(H),
        "invertible_pairs": [
            [u, v] for u, v in itertools.permutations(range(n), 2) if oracle.definitional_invertible(H, u, v)
        ],
        "min_ordering": oracle.brute_min_ordering(H) if n <= 9 else None,
    }
    rep["conservative_binary_count"] = oracle.count_conservative_binary(H) if n <= 4 else None
    rep["conservative_majority"] = oracle.exists_conservative_majority(H) if n <= 4 else None
    return rep


def cmd_oracle(args) -> int:
    H = _load_digraph(args.path)
    rep = _guard(oracle_report, H)
    if args.json:
        data = dict(rep)
        if data["min_ordering"] is not None:
            data["min_ordering"] = list(data["min_ordering"])
        _emit_json(data)
        return EXIT_OK
    lines = [f"c has-dat {int(rep['has_dat'])}", f"c has-permutable-triple {int(rep['has_permutable_triple'])}"]
    lines += [f"inv {u} {v}" for u, v in rep["invertible_pairs"]]
    order = rep["min_ordering"]
    lines.append("c min-ordering " + (" ".join(map(str, order)) if order is not None else "none"))
    for key, label in (("conservative_binary_count", "binary-count"), ("conservative_majority", "majority")):
        val = rep[key]
        lines.append(f"c {label} " + ("skipped" if val is None else str(int(val))))
    print("\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _emit_json(data) -> None:
    print(json.dumps(data, sort_keys=True, indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lhomkit", description="List homomorphism dichotomy toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("classify", cmd_classify, "decide DAT-FREE / DAT and print a witness")
    p.add_argument("paths", nargs="+", metavar="H")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for several inputs")
    p = add("poly", cmd_poly, "synthesize and verify conservative polymorphisms")
    p.add_argument("path", metavar="H")
    p = add("solve", cmd_solve, "solve a list homomorphism instance")
    p.add_argument("path", metavar="INSTANCE")
    p = add("reduce", cmd_reduce, "reduce 3-colouring of a graph to LHOM(H)")
    p.add_argument("graph", metavar="G")
    p.add_argument("target", metavar="H")
    p.add_argument("-o", "--output")
    p = add("oracle", cmd_oracle, "run the exhaustive definitional checkers")
    p.add_argument("path", metavar="H")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
