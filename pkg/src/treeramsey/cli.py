"""Command line front end: ``treeramsey {enumerate,verify,search,translate,replay}``.

Exit codes: 0 PASS or witness found, 1 FAIL (with certificate),
2 undecided at the configured scale, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from typing import Any

from .adversary import ColoringProblem, Guard, GuardExceeded, verify_avoiding
from .embeddings import Flavor, enumerate_maps, map_to_json
from .framework import (
    Verdict,
    _jsonable,
    check_background_axioms,
    check_condition,
    check_P,
    check_pointwise,
    check_R,
)
from .hjhl import HJVariant, HLVariant, hj_search, hl_check, hl_translated_n, translate_hj_to_hl
from .instances import build_instance, gen_ramsey_search, milliken_search
from .instances.classical import binom
from .instances.strong import chain_family, shape_family, strong_family
from .trees import OrderedTree, chain, regular_tree, tree_from_json

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument parsing helpers --------------------------------------------------


def parse_tree(text: str) -> OrderedTree:
    """``chain:N``, ``regular:K,N``, a JSON parent array or ``{"parent": [...]}``."""
    text = text.strip()
    try:
        if text.startswith("chain:"):
            return chain(int(text[6:]))
        if text.startswith("regular:"):
            k, n = (int(v) for v in text[8:].split(","))
            return regular_tree(k, n)
    except ValueError as exc:
        raise UsageError(f"bad tree shorthand {text!r}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"tree JSON parse error at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None
    try:
        return tree_from_json(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid tree: {exc}") from None


def _freeze(v):
    return tuple(_freeze(x) for x in v) if isinstance(v, list) else v


def parse_json_value(text: str, what: str):
    try:
        return _freeze(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} JSON parse error at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None


def parse_family_key(text: str) -> tuple:
    """``name:a,b`` or a JSON array such as ``["emb", 2, [-1, 0]]``."""
    text = text.strip()
    if text.startswith("["):
        key = parse_json_value(text, "family")
        if not key or not isinstance(key[0], str):
            raise UsageError(f"family key must start with a name: {text!r}")
        return key
    name, _, rest = text.partition(":")
    try:
        return (name,) + tuple(int(v) for v in rest.split(",") if v)
    except ValueError:
        raise UsageError(f"bad family key {text!r}") from None


def resolve_family(inst, key: tuple):
    """Listed family with this key, or one built on the fly for larger sizes."""
    try:
        return inst.family(key)
    except KeyError:
        pass
    name, *args = key
    try:
        if inst.kind == "CLASSICAL" and name == "binom":
            return binom(*args)
        if inst.kind in ("STAR", "MILLIKEN") and name in ("strong", "strong_leaf"):
            return strong_family(inst.k, args[0], args[1], name == "strong_leaf")
        if inst.kind == "STAR" and name in ("emb", "leaf"):
            return chain_family(inst.k, args[0], args[1], name == "leaf")
        if inst.kind == "MILLIKEN" and name in ("emb", "leaf"):
            return shape_family(inst.k, args[0], tuple(args[1]), name == "leaf")
        if inst.kind == "BRANCH" and name == "G":
            from .instances.branch import g_family

            return g_family(inst.k, args[0], args[1])
    except (ValueError, IndexError, TypeError) as exc:
        raise UsageError(f"cannot build family {key!r}: {exc}") from None
    raise UsageError(f"unknown family {key!r} for instance {inst.kind}")


# -- reports ---------------------------------------------------------------------


class Report:
    def __init__(self, command: str, parameters: dict, args) -> None:
        self.data: dict[str, Any] = {
            "schema": SCHEMA,
            "command": command,
            "parameters": _jsonable(parameters),
            "engine": {
                "prune": getattr(args, "prune", "colors"),
                "max_points": getattr(args, "max_points", None),
                "unsafe_scale": getattr(args, "unsafe_scale", False),
            },
            "results": {},
            "certificates": [],
        }
        self._t0 = time.perf_counter()

    def add_certificate(self, context: str, problem: ColoringProblem, coloring) -> None:
        self.data["certificates"].append({"context": context, "problem": problem.to_json(), "coloring": list(coloring)})

    def finish(self, status: str) -> dict:
        self.data["status"] = status
        self.data["wall_time"] = round(time.perf_counter() - self._t0, 6)
        return self.data


def _guard(args) -> Guard:
    return Guard(max_points=args.max_points, unsafe=args.unsafe_scale)


def _verdict_result(rep: Report, v: Verdict, context: str) -> dict:
    if v.problem is not None and v.coloring is not None:
        rep.add_certificate(context, v.problem, v.coloring)
    return {"status": v.status, "certificate": _jsonable(v.certificate)}


# -- subcommands -----------------------------------------------------------------


def cmd_enumerate(args) -> tuple[dict, int]:
    S, T = parse_tree(args.S), parse_tree(args.T)
    flavor = Flavor(args.flavor.upper())
    rep = Report("enumerate", {"S": list(S.parent), "T": list(T.parent), "flavor": flavor.value}, args)
    maps = enumerate_maps(S, T, flavor)
    rep.data["results"] = {"count": len(maps)}
    if args.list:
        rep.data["results"]["maps"] = [map_to_json(f)["image"] for f in maps]
    return rep.finish("PASS"), EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    guard = _guard(args)
    kind = args.instance.upper()
    params = {"instance": kind, "k": args.k, "size": args.size, "condition": args.condition}
    inst = build_instance(kind, args.k, args.size, guard=guard)
    cond = args.condition.upper()
    rep = Report("verify", params, args)
    if cond == "AXIOMS":
        v = check_background_axioms(inst.background)
    elif cond == "POINTWISE":
        v = check_pointwise(inst.pair)
    elif cond in ("A", "B", "STAR"):
        v = check_condition(inst.pair, cond)
    elif cond == "R":
        if not (args.F and args.P and args.d):
            raise UsageError("condition R needs --F, --P and --d")
        F, P = resolve_family(inst, parse_family_key(args.F)), resolve_family(inst, parse_family_key(args.P))
        params.update(F=F.key, P=P.key, d=args.d)
        try:
            v = check_R(inst.pair, F, P, args.d, prune=args.prune, guard=guard)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif cond == "P":
        if not (args.F and args.P and args.d and args.y is not None and args.a is not None):
            raise UsageError("condition P needs --F, --P, --d, --y and --a")
        F, P = resolve_family(inst, parse_family_key(args.F)), resolve_family(inst, parse_family_key(args.P))
        y, a = parse_json_value(args.y, "y"), parse_json_value(args.a, "a")
        params.update(F=F.key, P=P.key, d=args.d, y=y, a=a)
        v = check_P(inst.pair, P, y, [(F, a)], args.d, prune=args.prune, guard=guard)
    else:
        raise UsageError(f"unknown condition {args.condition!r}")
    rep.data["parameters"] = _jsonable(params)
    rep.data["results"] = _verdict_result(rep, v, f"verify {cond}")
    return rep.finish(v.status), EXIT_OK if v.passed else EXIT_FAIL


def _search_report(rep: Report, sr) -> tuple[dict, int]:
    j = sr.to_json()
    for row in j["per_height"]:
        if row.get("status") == "FAIL" and "problem" in row:
            rep.add_certificate(f"height {row['h']}", ColoringProblem.from_json(row["problem"]), row["coloring"])
            del row["problem"]
    rep.data["results"] = j
    if sr.status == "FOUND":
        return rep.finish("FOUND"), EXIT_OK
    return rep.finish(sr.status), EXIT_UNDECIDED


def _minimal_report(rep: Report, res, extra: dict | None = None) -> dict:
    for n, col in sorted(res.refutations.items()):
        rep.add_certificate(f"n={n}", res.problems[n], col)
    out = {"status": res.status, "n": res.n, "refuted": sorted(res.refutations)}
    if res.reason:
        out["reason"] = res.reason
    out.update(extra or {})
    rep.data["results"] = out
    return out


def cmd_search(args) -> tuple[dict, int]:
    guard = _guard(args)
    kind = args.kind.upper()
    if kind in ("GEN", "MILLIKEN"):
        if not (args.S and args.T and args.d):
            raise UsageError(f"{kind} search needs --S, --T and --d")
        S, T = parse_tree(args.S), parse_tree(args.T)
        flavor = Flavor((args.flavor or ("LEAF" if kind == "GEN" else "STRONG_LEAF")).upper())
        rep = Report("search", {"kind": kind, "S": list(S.parent), "T": list(T.parent), "d": args.d, "flavor": flavor.value}, args)
        fn = gen_ramsey_search if kind == "GEN" else milliken_search
        try:
            sr = fn(S, T, args.d, flavor, guard=guard, max_h=args.max_n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return _search_report(rep, sr)
    if kind == "HJ":
        if args.alphabet_size is None or args.m is None or not args.d:
            raise UsageError("HJ search needs --alphabet-size, --m and --d")
        variant = HJVariant((args.variant or "A_STMT").upper())
        rep = Report("search", {"kind": kind, "alphabet_size": args.alphabet_size, "m": args.m, "d": args.d, "variant": variant.value}, args)
        res = hj_search(args.alphabet_size, args.m, args.d, variant, guard=guard, max_n=args.max_n)
        _minimal_report(rep, res)
        return rep.finish(res.status), EXIT_OK if res.status == "FOUND" else EXIT_UNDECIDED
    if kind == "HL":
        if None in (args.k, args.t, args.m) or not args.d:
            raise UsageError("HL search needs --k, --t, --m and --d")
        variant = HLVariant((args.variant or "HL1").upper())
        rep = Report("search", {"kind": kind, "k": args.k, "t": args.t, "m": args.m, "d": args.d, "variant": variant.value}, args)
        n, res = hl_translated_n(args.k, args.t, args.m, args.d, variant, guard=guard)
        if n is None:
            rep.data["results"] = {"status": res.status, "reason": res.reason}
            return rep.finish(res.status), EXIT_UNDECIDED
        v = hl_check(args.k, args.t, args.m, args.d, n, variant, guard=guard, prune=args.prune)
        below = hl_check(args.k, args.t, args.m, args.d, n - 1, variant, guard=guard, prune=args.prune) if n > 0 else None
        rep.data["results"] = {
            "n": n,
            "hj_n": res.n,
            "at_n": _verdict_result(rep, v, f"HL n={n}"),
            "below": None if below is None else _verdict_result(rep, below, f"HL n={n - 1}"),
        }
        return rep.finish("FOUND" if v.passed else "FAIL"), EXIT_OK if v.passed else EXIT_FAIL
    raise UsageError(f"unknown search kind {args.kind!r}")


def cmd_translate(args) -> tuple[dict, int]:
    if None in (args.k, args.t, args.m, args.n):
        raise UsageError("translate needs --k, --t, --m and --n")
    k, t, m, n = args.k, args.t, args.m, args.n
    leaves = list(itertools.product(range(k), repeat=max(n - 1, 0)))
    if args.coloring:
        try:
            with open(args.coloring) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read coloring: {exc}") from None
        coloring = {_freeze(e["point"]): int(e["color"]) for e in raw}
    else:
        d = args.d or 2
        coloring = {p: sum(map(sum, p)) % d for p in itertools.product(leaves, repeat=t)}
    rep = Report("translate", {"k": k, "t": t, "m": m, "n": n, "coloring": args.coloring or "letter-sum"}, args)
    try:
        tr = translate_hj_to_hl(k, t, m, n, coloring)
    except LookupError as exc:
        rep.data["results"] = {"status": "FAIL", "reason": str(exc)}
        return rep.finish("FAIL"), EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.data["results"] = {
        "word": tr.word.to_json(),
        "parts": [p.to_json() for p in tr.parts],
        "sequence": [list(f.image) for f in tr.sequence],
        "verified": tr.verified,
    }
    return rep.finish("PASS" if tr.verified else "FAIL"), EXIT_OK if tr.verified else EXIT_FAIL


def replay_report(data: dict) -> tuple[int, int]:
    """``(verified, total)`` over every certificate in a report."""
    certs = list(data.get("certificates", []))
    results = data.get("results", {})
    if isinstance(results, dict) and "problem" in results.get("certificate", {}):
        certs.append(results["certificate"])
    ok = 0
    for c in certs:
        prob = ColoringProblem.from_json(c["problem"])
        if verify_avoiding(prob, c["coloring"]):
            ok += 1
    return ok, len(certs)


def cmd_replay(args) -> tuple[dict, int]:
    try:
        with open(args.report) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"report JSON parse error at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None
    if data.get("schema") != SCHEMA:
        raise UsageError(f"unsupported report schema {data.get('schema')!r}")
    try:
        ok, total = replay_report(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed certificate: {exc}") from None
    rep = Report("replay", {"report": args.report}, args)
    rep.data["results"] = {"verified": ok, "total": total}
    status = "PASS" if ok == total else "FAIL"
    return rep.finish(status), EXIT_OK if ok == total else EXIT_FAIL


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--certificate", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--max-points", type=int, default=None, help="override the colored-set size guard")
    common.add_argument("--prune", choices=["colors", "none"], default="colors")
    common.add_argument("--unsafe-scale", action="store_true", help="disable every size guard")

    p = _Parser(prog="treeramsey", description="Finite Ramsey checks for trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", parents=[common], help="count embeddings S -> T")
    e.add_argument("--S", required=True)
    e.add_argument("--T", required=True)
    e.add_argument("--flavor", default="EMB", type=str.upper, choices=[f.value for f in Flavor])
    e.add_argument("--list", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="check axioms or a condition on an instance")
    v.add_argument("--instance", required=True, type=str.upper, choices=["CLASSICAL", "STAR", "BRANCH", "MILLIKEN"])
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--size", type=int, default=3, help="maxN, or L for BRANCH")
    v.add_argument("--condition", required=True, type=str.upper, choices=["AXIOMS", "POINTWISE", "A", "B", "STAR", "P", "R"])
    v.add_argument("--F")
    v.add_argument("--P")
    v.add_argument("--d", type=int)
    v.add_argument("--y", help="JSON element of the truncated family (condition P)")
    v.add_argument("--a", help="JSON element of A (condition P)")

    s = sub.add_parser("search", parents=[common], help="witness searches")
    s.add_argument("kind", type=str.upper, choices=["GEN", "MILLIKEN", "HJ", "HL"])
    s.add_argument("--S")
    s.add_argument("--T")
    s.add_argument("--d", type=int)
    s.add_argument("--flavor")
    s.add_argument("--alphabet-size", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--variant")
    s.add_argument("--max-n", type=int, help="largest height / length to try")

    t = sub.add_parser("translate", parents=[common], help="HL1 coloring -> HJ word -> strong sequence")
    t.add_argument("--k", type=int)
    t.add_argument("--t", type=int)
    t.add_argument("--m", type=int)
    t.add_argument("--n", type=int)
    t.add_argument("--d", type=int)
    t.add_argument("--coloring", metavar="PATH", help='JSON list of {"point": [...], "color": c}')

    r = sub.add_parser("replay", parents=[common], help="re-verify every certificate in a report")
    r.add_argument("report")
    return p


COMMANDS = {
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "search": cmd_search,
    "translate": cmd_translate,
    "replay": cmd_replay,
}


def _summary(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    res = report.get("results", {})
    for key, val in res.items():
        if key in ("per_height", "maps", "certificate", "parts", "sequence"):
            continue
        lines.append(f"  {key}: {json.dumps(val) if isinstance(val, (dict, list)) else val}")
    if report.get("certificates"):
        lines.append(f"  certificates: {len(report['certificates'])}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"treeramsey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        report = {"schema": SCHEMA, "command": args.command, "status": "UNDECIDED-AT-SCALE", "results": {"reason": str(exc)}, "certificates": []}
        code = EXIT_UNDECIDED
    if args.certificate:
        with open(args.certificate, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    print(json.dumps(report, indent=2, sort_keys=True) if args.json else _summary(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
