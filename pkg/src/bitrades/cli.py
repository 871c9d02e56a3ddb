"""Command-line front end.

Every command builds a JSON-ready result first; the human form is rendered
from that, never the other way round.  Exit status: 0 success, 1 a negative
verdict (invalid square, failed verifier, not isotopic, construction
refused), 2 unreadable input or bad usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    DEFAULT_LABEL_CAP,
    Constellation,
    autotopism_group,
    autotopism_group_bitrade,
    constellation_checks,
    embed_tau_automorphisms,
    enumerate_disjoint_mates,
    is_primary,
    is_thin,
    verify_genus0_autotopism_equality,
    verify_genus0_uniqueness,
    verify_lemma7,
    verify_regular_bitrade_theorem,
    verify_regular_centralizer,
)
from .core import (
    DEFAULT_SEARCH_BUDGET,
    Bitrade,
    PartialLatinSquare,
    are_isotopic,
    are_isotopic_bitrades,
    validate_bitrade,
    validate_pls,
)
from .formats import EXTENSIONS, ParseError, format_square, read_document
from .groups import CayleyGroup, TriadError, TriadSpec, check_triad, group_based_bitrade, triads, verify_theorem1
from .perm import CapExceeded
from .report import VerifierReport
from .tau import GenusError, compute_tau, genus, is_separated, verify_Q_properties

SECTIONS = ("tau", "genus", "separated", "thin", "primary", "atop", "mates")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _render(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out += _render(v, indent + 1)
            else:
                out.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
        return out
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return [pad + ", ".join(json.dumps(v, ensure_ascii=False) for v in obj)]
        out = []
        for v in obj:
            sub = _render(v, indent + 1)
            out.append(pad + "- " + sub[0].lstrip())
            out += sub[1:]
        return out
    return [pad + json.dumps(obj, ensure_ascii=False)]


def _emit(args, obj) -> None:
    sys.stdout.write(_dump(obj) if args.json else "\n".join(_render(obj)) + "\n")


def _load(path: str):
    try:
        return read_document(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_bitrade(path: str) -> Bitrade:
    payload = _load(path).payload
    if not isinstance(payload, Bitrade):
        raise UsageError(f"{path}: expected a bitrade (two squares separated by '---')")
    return payload


# --- validate -------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = _load(args.path)
    p = doc.payload
    if isinstance(p, Bitrade):
        rep = validate_bitrade(p)
        kind = "bitrade"
    elif isinstance(p, PartialLatinSquare):
        rep = validate_pls(p)
        kind = "partial latin square"
    elif isinstance(p, CayleyGroup):
        _emit(args, {"path": args.path, "kind": "group", "ok": True, "order": p.order})
        return 0
    else:
        problems = p.problems()
        _emit(args, {"path": args.path, "kind": "constellation", "ok": not problems, "problems": problems})
        return 0 if not problems else 1
    _emit(args, {"path": args.path, "kind": kind, **rep.to_json()})
    return 0 if rep.ok else 1


# --- analyze --------------------------------------------------------------------


def _capped(exc: Exception) -> dict:
    return {"status": "capped", "reason": str(exc)}


def _section(name: str, b, args) -> object:
    label_cap, budget = args.cap_degree, args.cap_nodes
    if name == "atop":
        try:
            if isinstance(b, PartialLatinSquare):
                return autotopism_group(b, label_cap, budget).to_json(b)
            gc = autotopism_group(b.t_circ, label_cap, budget)
            gs = autotopism_group(b.t_star, label_cap, budget)
            both = autotopism_group_bitrade(b, label_cap, budget)
        except CapExceeded as exc:
            return _capped(exc)
        return {
            "circ": gc.to_json(b.t_circ),
            "star": gs.to_json(b.t_star),
            "both": both.to_json(b.t_circ),
            "equal": gc.same_elements(gs),
        }
    if name == "mates":
        t = b if isinstance(b, PartialLatinSquare) else b.t_circ
        census = enumerate_disjoint_mates(t, args.limit)
        return {
            "count": len(census),
            "truncated": census.truncated,
            "mates": [[list(e) for e in m.entries] for m in census.mates[: args.show]],
        }
    if isinstance(b, PartialLatinSquare):
        raise UsageError(f"--{name} needs a bitrade, not a single square")
    if name == "tau":
        rep = compute_tau(b)
        return {**rep.to_json(), "q": verify_Q_properties(rep).to_json()}
    if name == "genus":
        try:
            return genus(b)
        except GenusError as exc:
            return {"refused": exc.reason, "orbit_genera": exc.orbit_genera}
    if name == "separated":
        return is_separated(b).to_json()
    if name == "thin":
        return is_thin(b).thin
    if name == "primary":
        return is_primary(b).to_json()
    raise UsageError(f"unknown section {name}")


def verifier_reports(payload, fixture: str, label_cap: int = DEFAULT_LABEL_CAP) -> list[VerifierReport]:
    """Every verifier that applies to a payload of this kind, in a fixed order."""
    if isinstance(payload, Bitrade):
        reports = [
            embed_tau_automorphisms(payload, fixture, label_cap),
            verify_genus0_uniqueness(payload.t_circ, fixture),
            verify_genus0_autotopism_equality(payload, fixture, label_cap),
            verify_regular_bitrade_theorem(payload, fixture, label_cap),
            verify_lemma7(payload, fixture, label_cap),
        ]
        c = Constellation.from_tau(compute_tau(payload))
        if c.problems():
            r = VerifierReport(fixture, "constellation_checks")
            r.hypothesis("tau group transitive", False)
            r.inapplicable("; ".join(c.problems()))
            reports.append(r)
        else:
            reports.append(constellation_checks(c, fixture))
        return reports
    if isinstance(payload, PartialLatinSquare):
        return [verify_genus0_uniqueness(payload, fixture)]
    if isinstance(payload, CayleyGroup):
        return [verify_regular_centralizer(payload, fixture), _theorem1_all(payload, fixture)]
    problems = payload.problems()
    if problems:
        r = VerifierReport(fixture, "constellation_checks")
        r.check("constellation axioms", False, problems)
        return [r]
    return [constellation_checks(payload, fixture)]


def _theorem1_all(group: CayleyGroup, fixture: str) -> VerifierReport:
    """Theorem-1 checks over every (G1)+(G2) triad of the group, folded into one report."""
    report = VerifierReport(fixture, "verify_theorem1")
    failures = []
    count = 0
    for spec in triads(group):
        count += 1
        r = verify_theorem1(spec, fixture=fixture)
        if r.status == "fail":
            failures.append({"a": spec.a, "b": spec.b, "c": spec.c, "report": r.to_json()})
    if not report.hypothesis("some triad satisfies (G1) and (G2)", count > 0):
        report.inapplicable("no triads")
        return report
    report.check(f"all {count} triads", not failures, failures[:3])
    return report


def cmd_analyze(args) -> int:
    payload = _load(args.path).payload
    if not isinstance(payload, (Bitrade, PartialLatinSquare)):
        raise UsageError(f"{args.path}: analyze needs a square or bitrade file")
    if isinstance(payload, Bitrade):
        rep = validate_bitrade(payload)
    else:
        rep = validate_pls(payload)
    if not rep.ok:
        _emit(args, {"path": args.path, "valid": rep.to_json()})
        return 1
    wanted = [s for s in SECTIONS if getattr(args, s)]
    if not wanted and not args.verify_all:
        wanted = list(SECTIONS) if isinstance(payload, Bitrade) else ["atop", "mates"]
    out: dict = {s: _section(s, payload, args) for s in wanted}
    status = 0
    if args.verify_all:
        reports = verifier_reports(payload, args.path, args.cap_degree)
        out["verifiers"] = [r.to_json() for r in reports]
        status = 1 if any(r.status == "fail" for r in reports) else 0
    _emit(args, out)
    return status


# --- construct ------------------------------------------------------------------


def _element(g: CayleyGroup, token: str) -> int:
    if token.isdigit():
        return int(token)
    try:
        return g.index_of_label(token)
    except (KeyError, ValueError):
        raise UsageError(f"{token!r} is neither an element index nor a label of {g.name or 'the group'}") from None


def cmd_construct(args) -> int:
    g = _load(args.cayley).payload
    if not isinstance(g, CayleyGroup):
        raise UsageError(f"{args.cayley}: expected a .cayley file")
    a, b, c = (_element(g, t) for t in (args.a, args.b, args.c))
    spec = TriadSpec(g, a, b, c)
    try:
        tr = check_triad(spec)
        bitrade, lab = group_based_bitrade(spec)
    except TriadError as exc:
        sys.stderr.write(f"construct: {exc}\n")
        return 1
    ok = lambda v: "pass" if v else "fail"  # noqa: E731
    header = [
        f"group-based bitrade from {Path(args.cayley).name}",
        f"group order {g.order}; a={g.label(a)} b={g.label(b)} c={g.label(c)}",
        f"|A|={len(lab.A)} |B|={len(lab.B)} |C|={len(lab.C)}",
        f"G1 {ok(tr.g1)}, G2 {ok(tr.g2)}, G3 {ok(tr.g3)}",
    ]
    fmt = "triples" if args.out.endswith(".triples") else "grid"
    Path(args.out).write_text(format_square(bitrade, fmt, header), encoding="utf-8")
    _emit(args, {"out": args.out, "entries": len(bitrade), "sizes": list(bitrade.sizes), **tr.to_json()})
    return 0


# --- sweep ----------------------------------------------------------------------


def sweep(directory: str | Path, label_cap: int = DEFAULT_LABEL_CAP, seed: int | None = None) -> dict:
    """One row per fixture and verifier; rows come back sorted whatever the processing order."""
    root = Path(directory)
    if not root.is_dir():
        raise UsageError(f"{directory} is not a directory")
    files = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in EXTENSIONS)
    if seed is not None:
        random.Random(seed).shuffle(files)
    rows = []
    for path in files:
        name = path.relative_to(root).as_posix()
        try:
            payload = read_document(path).payload
        except (OSError, ValueError) as exc:
            rows.append({"fixture": name, "verifier": "parse", "status": "fail", "detail": str(exc)})
            continue
        valid = (
            validate_bitrade(payload) if isinstance(payload, Bitrade)
            else validate_pls(payload) if isinstance(payload, PartialLatinSquare)
            else None
        )
        if valid is not None:
            rows.append({
                "fixture": name,
                "verifier": "validate",
                "status": "pass" if valid.ok else "fail",
                "detail": None if valid.ok else valid.to_json(),
            })
            if not valid.ok:
                continue
        for r in verifier_reports(payload, name, label_cap):
            rows.append({"fixture": name, "verifier": r.operation, "status": r.status, "detail": r.to_json()})
    rows.sort(key=lambda r: (r["fixture"], r["verifier"]))
    counts = {s: sum(1 for r in rows if r["status"] == s) for s in ("pass", "fail", "inapplicable", "capped")}
    return {"rows": rows, "summary": counts}


def cmd_sweep(args) -> int:
    result = sweep(args.directory, args.cap_degree, args.seed)
    if args.json:
        sys.stdout.write(_dump(result))
    else:
        rows = result["rows"]
        width = max([len(r["fixture"]) for r in rows] + [7])
        vwidth = max([len(r["verifier"]) for r in rows] + [8])
        print(f"{'fixture':<{width}}  {'verifier':<{vwidth}}  status")
        for r in rows:
            print(f"{r['fixture']:<{width}}  {r['verifier']:<{vwidth}}  {r['status']}")
        print(" ".join(f"{k}={v}" for k, v in result["summary"].items()))
    return 1 if result["summary"]["fail"] else 0


# --- mates, isotopic ----------------------------------------------------------


def cmd_mates(args) -> int:
    payload = _load(args.path).payload
    if not isinstance(payload, (Bitrade, PartialLatinSquare)):
        raise UsageError(f"{args.path}: expected a square or bitrade file")
    _emit(args, _section("mates", payload, args))
    return 0


def cmd_isotopic(args) -> int:
    p1, p2 = _load(args.first).payload, _load(args.second).payload
    try:
        if isinstance(p1, Bitrade) and isinstance(p2, Bitrade):
            found = are_isotopic_bitrades(p1, p2, args.independent, args.cap_nodes)
            if isinstance(found, tuple):
                witness = {"circ": found[0].describe(), "star": found[1].describe()}
            else:
                witness = None if found is None else found.describe()
        elif isinstance(p1, PartialLatinSquare) and isinstance(p2, PartialLatinSquare):
            found = are_isotopic(p1, p2, args.cap_nodes)
            witness = None if found is None else found.describe()
        else:
            raise UsageError("compare two squares or two bitrades")
    except CapExceeded as exc:
        _emit(args, {"isotopic": None, **_capped(exc)})
        return 2
    _emit(args, {"isotopic": found is not None, "isotopism": witness})
    return 0 if found is not None else 1


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bitrades", description="Latin bitrades: validation, analysis and verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--cap-nodes", type=int, default=DEFAULT_SEARCH_BUDGET, help="node budget for isotopism searches")
    parser.add_argument("--cap-degree", type=int, default=DEFAULT_LABEL_CAP, help="largest label set searched for autotopisms")
    parser.add_argument("--json", action="store_true", help="emit JSON (sorted keys, stable bytes)")
    parser.add_argument("--seed", type=int, default=None, help="shuffle fixture processing order; output is unaffected")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a square, bitrade, group table or constellation")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="report invariants of a bitrade")
    p.add_argument("path")
    for s in SECTIONS:
        p.add_argument(f"--{s}", action="store_true")
    p.add_argument("--verify-all", action="store_true", help="run every applicable verifier")
    p.add_argument("--limit", type=int, default=10_000, help="stop the mate census after this many")
    p.add_argument("--show", type=int, default=5, help="mates listed in the output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", help="build the group-based bitrade of a triad")
    p.add_argument("cayley")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sweep", help="run every verifier over a fixture directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mates", help="enumerate the disjoint mates of a square")
    p.add_argument("path")
    p.add_argument("--limit", type=int, default=10_000)
    p.add_argument("--show", type=int, default=20)
    p.set_defaults(func=cmd_mates)

    p = sub.add_parser("isotopic", help="search for an isotopism between two squares or bitrades")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--independent", action="store_true", help="allow different isotopisms for the two sides")
    p.set_defaults(func=cmd_isotopic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"bitrades {args.command}: {exc}\n")
        return 2
    except ParseError as exc:
        sys.stderr.write(f"bitrades {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
