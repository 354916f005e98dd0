"""Command-line front end. Reads a JSON document, writes a JSON report.

Exit status 0 on success, 1 on malformed input, 2 on unsupported cases or caps.
Errors go to stderr as {"error": {"code": ..., "message": ...}}.
"""
from __future__ import annotations

import argparse
import sys

from . import serialize as ser
from .closure_lab import CLOSURE_CAP, DEFAULT_MAX_K, relative_rank_bruteforce
from .collapse import (MU_HAT, NU_HAT, build_W, collapse_type_count, generators_for,
                       kappa_classes, relative_rank_formula, u_set)
from .endo import DEFAULT_ENUM_CAP, aut_arrays, end_size, first_difference, window_size
from .errors import CapExceeded, EqMonoidError, MalformedInput, UnsupportedCase
from .factorize import factor, recompose
from .gset import INF, GSet, Point

COMMANDS = ("analyze", "enumerate", "relrank", "factorize", "verify", "window")


class UsageError(EqMonoidError):
    code = "usage"


class InputUnreadable(EqMonoidError):
    code = "input-unreadable"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _members(h) -> list[int]:
    return list(h.members)


def _count(m):
    return "inf" if m == INF else m


def _gset_doc(doc) -> dict:
    if isinstance(doc, dict) and "gset" in doc:
        return doc["gset"]
    return doc


def _field(doc, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"input needs a {key!r} field")
    return doc[key]


# -- commands ---------------------------------------------------------------------

def cmd_analyze(s: GSet, doc, args) -> dict:
    s.require_supported()
    gens = generators_for(s)
    strata = []
    for st in s.strata:
        strata.append({
            "index": st.index,
            "stabilizer": _members(st.H),
            "conjugates": [_members(h) for h in st.conj_class.members],
            "normalizer": _members(st.normalizer),
            "orbit_count": _count(st.orbit_count),
            "orbit_size": st.index_in_group,
            "U": [[_members(k) for k in ncls] for ncls in u_set(s, st.index)],
            "U_size": len(u_set(s, st.index)),
            "collapse_targets": [
                {"subgroup": _members(t.subgroup), "point": list(t.point)} for t in st.collapse_targets
            ],
        })
    roster = []
    for name in gens.names():
        entry = {"name": name}
        t = gens.types.get(name)
        if t is not None:
            entry["type"] = {"stratum": t.stratum, "target": t.target, "subgroup": _members(t.subgroup)}
        elif name in (MU_HAT, NU_HAT):
            entry["type"] = name
        roster.append(entry)
    return {
        "case": s.case_tag,
        "group_order": s.group.order,
        "size": _count(s.size),
        "strata": strata,
        "stab": [_members(h) for h in s.stab_subgroups],
        "conj_classes": [[_members(h) for h in st.conj_class.members] for st in s.strata],
        "kappa": kappa_classes(s),
        "collapse_type_count": collapse_type_count(s),
        "rank_formula": relative_rank_formula(s),
        "generating_set": "W" if s.is_finite else "V",
        "generators": roster,
    }


def cmd_enumerate(s: GSet, doc, args) -> dict:
    s.require_finite()
    cap = args.cap if args.cap is not None else DEFAULT_ENUM_CAP
    n = end_size(s)
    if n > cap:
        raise CapExceeded(f"|End| = {n} exceeds cap {cap}")
    return {"end": n, "aut": len(aut_arrays(s, cap))}


def cmd_relrank(s: GSet, doc, args) -> dict:
    out = {"formula": relative_rank_formula(s)}
    if args.oracle:
        s.require_finite()
        cap = args.cap if args.cap is not None else CLOSURE_CAP
        bf = relative_rank_bruteforce(s, max_k=max(DEFAULT_MAX_K, out["formula"]), cap=cap)
        out["bruteforce"] = bf
        out["agree"] = bf == out["formula"]
    return out


def cmd_factorize(s: GSet, doc, args) -> dict:
    tau = ser.parse_map(_field(doc, "map"), s)
    return ser.emit_report(factor(tau, generators_for(s)))


def cmd_verify(s: GSet, doc, args) -> dict:
    s.require_supported()
    gens = generators_for(s)
    tau = ser.parse_map(_field(doc, "map"), s)
    word = ser.parse_word(_field(doc, "word"), s, gens)
    got = recompose(word, gens)
    if s.is_finite:
        diff = next((p for p in s.points if got(p) != tau(p)), None)
        window = None
    else:
        window = max(args.window, window_size(got, tau))
        diff = first_difference(got, tau, window)
    out = {"equal": diff is None, "first_difference": None, "window": window}
    if diff is not None:
        out["first_difference"] = {"point": list(diff), "word": list(got(diff)), "map": list(tau(diff))}
    return out


def cmd_window(s: GSet, doc, args) -> dict:
    if s.infinite_stratum is None:
        raise UnsupportedCase("window needs an infinite stratum")
    tau = ser.parse_map(_field(doc, "map"), s)
    i = s.infinite_stratum
    return {
        "stratum": i,
        "window": args.window,
        "finite": [[list(r), list(tau(r))] for r in s.finite_reps()],
        "table": [[n, list(tau(Point(i, n, 0)))] for n in range(args.window)],
    }


HANDLERS = {
    "analyze": cmd_analyze,
    "enumerate": cmd_enumerate,
    "relrank": cmd_relrank,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "window": cmd_window,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eqmonoid", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", default="-", help="JSON input file (default: stdin)")
    p.add_argument("--oracle", action="store_true", help="relrank: also run the brute-force search")
    p.add_argument("--window", type=int, default=1000, help="infinite-stratum index window")
    p.add_argument("--cap", type=int, default=None, help="enumeration / closure size cap")
    return p


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputUnreadable(f"cannot read {path}: {e.strerror}") from None


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.window < 0:
            raise UsageError("--window must be non-negative")
        doc = ser.loads(_read(args.input, stdin))
        s = ser.parse_gset(_gset_doc(doc))
        out = HANDLERS[args.command](s, doc, args)
    except EqMonoidError as e:
        stderr.write(ser.dumps({"error": {"code": e.code, "message": str(e)}}))
        return e.exit_status
    stdout.write(ser.dumps(out))
    return 0


def main() -> None:
    sys.exit(run())
