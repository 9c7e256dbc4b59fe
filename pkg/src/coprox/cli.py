"""Command-line front end.

    coprox close metricR "[0,1)" "(1,2]"
    coprox axioms finiteK3chain
    coprox germs templateSingletons --generators X1 X2 X3
    coprox verify-certificate cert.json
    coprox dim --file ws.json S
    coprox suite coproduct-additivity P Q --file ws.json

Queries print canonical JSON.  Suites print a one-line-per-assertion
summary, or the full report with ``--json``.  Exit status is 0 when every
assertion passed, 1 when one failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .coproduct import TemplateCoproduct, _CoproductBase
from .dimension import AtLeast, brute_delta_dim, verify_certificate
from .germs import MAX_ATOMS, MAX_GENERATORS, BoundError, atoms, classify_germ, enumerate_germs, star_close
from .regions import RegionSyntaxError, format_bound
from .spaces import (ALEKSANDROFF, DISCRETE, METRIC, STANDARD, STONECECH, Budget, FiniteSpace,
                     ProximitySpace, RealLine, verify_axioms)
from .suites import DEFAULT_SEED, SUITES, run_suite
from .workspace import (Workspace, WorkspaceError, canonical_digest, certificate_from_json, load_json,
                        space_from_json, workspace_from_json)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def builtin_spaces() -> dict:
    return {
        "discreteR": RealLine(DISCRETE),
        "metricR": RealLine(METRIC),
        "standardR": RealLine(STANDARD),
        "aleksandroffR": RealLine(ALEKSANDROFF),
        "stonecechR": RealLine(STONECECH),
        "finiteK3chain": FiniteSpace(["a", "b", "c"], [("a", "b"), ("b", "c")]),
        "templateSingletons": TemplateCoproduct(FiniteSpace(["p"])),
    }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_bound(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(str(x) for x in obj)
    if isinstance(obj, AtLeast):
        return str(obj)
    return str(obj)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=_jsonable)


def load_workspace(path: Optional[str]) -> Workspace:
    if path is None:
        ws = Workspace()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise WorkspaceError(f"{path}: {exc.strerror}") from None
        ws = workspace_from_json(load_json(text, path))
    for name, sp in builtin_spaces().items():
        ws.spaces.setdefault(name, sp)
    return ws


def resolve_space(ws: Workspace, token: str) -> ProximitySpace:
    """A space name, or an inline JSON space definition."""
    if token.lstrip().startswith("{"):
        return space_from_json(load_json(token, "space argument"), ws.spaces, "space argument")
    return ws.space(token)


def cmd_close(ws: Workspace, args) -> int:
    sp = resolve_space(ws, args.space)
    a = ws.resolve_set(sp, args.a, "A")
    b = ws.resolve_set(sp, args.b, "B")
    print(dumps({"close": sp.close(a, b)}))
    return EXIT_OK


def cmd_axioms(ws: Workspace, args) -> int:
    sp = resolve_space(ws, args.space)
    budget = Budget(triples=args.triples, pairs=args.pairs, seed=args.seed)
    rep = verify_axioms(sp, budget)
    out = rep.to_json(sp)
    out["space"] = str(sp) if not isinstance(sp, FiniteSpace) else args.space
    out["failed_axioms"] = rep.failed_axioms()
    out["seed"] = args.seed
    print(dumps(out))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_germs(ws: Workspace, args) -> int:
    sp = resolve_space(ws, args.space)
    gens = [ws.resolve_set(sp, g, f"generator {g!r}") for g in args.generators]
    alg = atoms(sp, gens, max_generators=args.max_generators)
    germs = enumerate_germs(alg, mode=args.mode, max_atoms=args.max_atoms)
    rows = []
    for g in germs:
        row = {"support": g.indices}
        if isinstance(sp, _CoproductBase):
            row["tag"] = str(classify_germ(alg, g))
        rows.append(row)
    out = {
        "space": args.space,
        "mode": args.mode,
        "generators": [sp.format_set(g) for g in alg.generators],
        "atoms": [sp.format_set(a) for a in alg.atoms],
        "count": len(germs),
        "germs": rows,
        "star_close": [[star_close(alg, [g], [h]) for h in germs] for g in germs],
    }
    print(dumps(out))
    return EXIT_OK


def cmd_verify_certificate(ws: Workspace, args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WorkspaceError(f"{args.certificate}: {exc.strerror}") from None
    obj = load_json(text, args.certificate)
    if isinstance(obj, dict) and "spaces" in obj:
        # a workspace carrying its own space definitions
        inner = workspace_from_json({"spaces": obj["spaces"]})
        for name, sp in inner.spaces.items():
            ws.spaces[name] = sp
        obj = obj.get("certificate")
    cert = certificate_from_json(obj, ws.spaces)
    rep = verify_certificate(cert)
    out = rep.to_json()
    out["digest"] = canonical_digest(load_json(text, args.certificate))
    print(dumps(out))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_dim(ws: Workspace, args) -> int:
    sp = resolve_space(ws, args.space)
    d = brute_delta_dim(sp, cap=args.cap)
    out = {"space": args.space, "mode": "exhaustive"}
    if isinstance(d, AtLeast):
        out["dim_at_least"] = d.value
    else:
        out["dim"] = d
    print(dumps(out))
    return EXIT_OK


def cmd_suite(ws: Workspace, args) -> int:
    names = list(args.spaces)
    if args.suite and args.suite not in SUITES and ws.suites:
        # every positional is a space; the workspace picks the suites
        names.insert(0, args.suite)
        args.suite = None
    ids = [args.suite] if args.suite else list(ws.suites)
    if not ids:
        raise WorkspaceError("no suite given and the workspace selects none")
    for sid in ids:
        if sid not in SUITES:
            raise WorkspaceError(f"unknown suite {sid!r}; known: {', '.join(SUITES)}")
    spaces = [resolve_space(ws, s) for s in names]
    reports = []
    for sid in ids:
        try:
            rep = run_suite(sid, seed=args.seed, spaces=spaces or None)
        except ValueError as exc:
            raise WorkspaceError(str(exc)) from None
        rep.input_digest = ws.digest
        reports.append(rep)
    if args.json:
        body = [r.to_json() for r in reports]
        print(dumps(body[0] if len(body) == 1 else body))
    else:
        for r in reports:
            print(f"suite {r.suite} (seed {r.seed}, {len(r.instances)} instances): "
                  f"{'PASS' if r.passed else 'FAIL'}")
            shown = r.instances[:5]
            for inst in shown:
                print(f"  instance: {inst}")
            if len(r.instances) > len(shown):
                print(f"  ... {len(r.instances) - len(shown)} more instances")
            for a in r.assertions.values():
                print(f"  [{'ok' if a.passed else 'FAIL'}] {a.name}: {a.checked} checked, {a.failed} failed")
                if a.counterexample is not None and not a.passed:
                    print(f"    counterexample: {json.dumps(a.counterexample, default=_jsonable)}")
            for note in r.notes:
                print(f"  note: {note}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", help="workspace JSON file with named spaces, sets and coverings")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("--json", action="store_true", help="full JSON report for suites")
    common.add_argument("--max-atoms", type=int, default=MAX_ATOMS)
    common.add_argument("--max-generators", type=int, default=MAX_GENERATORS)

    p = argparse.ArgumentParser(prog="coprox", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"coprox {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("close", parents=[common], help="decide A close B")
    c.add_argument("space")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(run=cmd_close)

    c = sub.add_parser("axioms", parents=[common], help="check the proximity axioms")
    c.add_argument("space")
    c.add_argument("--triples", type=int, default=1000)
    c.add_argument("--pairs", type=int, default=200)
    c.set_defaults(run=cmd_axioms)

    c = sub.add_parser("germs", parents=[common], help="enumerate germs of a generated algebra")
    c.add_argument("space")
    c.add_argument("--generators", nargs="*", default=[])
    c.add_argument("--mode", choices=("all", "maximal"), default="all")
    c.set_defaults(run=cmd_germs)

    c = sub.add_parser("verify-certificate", parents=[common], help="check a dimension certificate")
    c.add_argument("certificate")
    c.set_defaults(run=cmd_verify_certificate)

    c = sub.add_parser("dim", parents=[common], help="exhaustive dimension of a finite space")
    c.add_argument("space")
    c.add_argument("--cap", type=int, default=None)
    c.set_defaults(run=cmd_dim)

    c = sub.add_parser("suite", parents=[common], help="run a theorem-instance suite")
    c.add_argument("suite", nargs="?", help=f"one of: {', '.join(SUITES)}")
    c.add_argument("spaces", nargs="*", help="component spaces for suites that accept them")
    c.set_defaults(run=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        ws = load_workspace(args.file)
        return args.run(ws, args)
    except (WorkspaceError, RegionSyntaxError, BoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
