"""JSON documents for groups, G-sets, maps and words.

Group:  {"cayley": [[...]]} or {"degree": n, "generators": [[...], ...]}
G-set:  {"group": <group>, "orbits": [{"stabilizer": [...], "count": m | "inf"}, ...]}
Map:    {"finite": [[s, o, c], ...], "tail": [<atom>, ...]}
        ``finite`` lists the image of every finite-stratum representative in
        ``GSet.finite_reps()`` order.  Atoms are "mu", "nu",
        {"patch": [[[s, o], [s, o, c]], ...]} and {"rule": {"exceptions": [[k, v], ...]}},
        leftmost applied last.
Word:   [{"gen": name} | {"aut": <map>, "label": str}, ...], leftmost applied last.
"""
from __future__ import annotations

import json
from typing import Any

from .collapse import GeneratorSet
from .endo import MU, NU, EquivariantMap, Mu, Nu, Patch, RuleBijection
from .errors import MalformedInput
from .factorize import Factor, FactorizationReport, Word
from .groups import FiniteGroup
from .gset import CASE1, INF, GSet, OrbitSpec, Point


def dumps(doc: Any) -> str:
    """Canonical output: pretty-printed, sorted keys, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}") from None


def _int_list(v, what: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise MalformedInput(f"{what} must be a list of integers")
    return list(v)


def _require(doc, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"{what} document needs a {key!r} field")
    return doc[key]


# -- groups ----------------------------------------------------------------------

def parse_group(doc) -> FiniteGroup:
    if isinstance(doc, dict) and "cayley" in doc:
        table = doc["cayley"]
        if not isinstance(table, list):
            raise MalformedInput("cayley must be a list of rows")
        return FiniteGroup.from_cayley([_int_list(r, "cayley row") for r in table])
    degree = _require(doc, "degree", "group")
    gens = _require(doc, "generators", "group")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise MalformedInput("degree must be a positive integer")
    if not isinstance(gens, list):
        raise MalformedInput("generators must be a list of permutations")
    return FiniteGroup.from_permutation_generators(degree, [_int_list(p, "generator") for p in gens])


def emit_group(g: FiniteGroup) -> dict:
    return {"cayley": [list(row) for row in g.cayley]}


# -- G-sets ----------------------------------------------------------------------

def parse_gset(doc) -> GSet:
    g = parse_group(_require(doc, "group", "G-set"))
    orbits = _require(doc, "orbits", "G-set")
    if not isinstance(orbits, list):
        raise MalformedInput("orbits must be a list")
    specs = []
    for o in orbits:
        stab = _int_list(_require(o, "stabilizer", "orbit"), "stabilizer")
        count = o.get("count", 1)
        if count == "inf":
            count = INF
        elif not isinstance(count, int) or isinstance(count, bool):
            raise MalformedInput(f"orbit count must be a positive integer or \"inf\", got {count!r}")
        specs.append(OrbitSpec(g.subgroup(stab), count))
    return GSet(g, specs)


def emit_gset(s: GSet) -> dict:
    return {
        "group": emit_group(s.group),
        "orbits": [
            {"stabilizer": list(o.stabilizer.members),
             "count": "inf" if o.multiplicity == INF else o.multiplicity}
            for o in s.orbit_specs
        ],
    }


# -- maps --------------------------------------------------------------------------

def _point(v, s: GSet) -> Point:
    if not isinstance(v, list) or len(v) != 3:
        raise MalformedInput(f"point must be [stratum, orbit, coset], got {v!r}")
    return s.validate_point(v)


def _parse_atom(a, s: GSet):
    if a == "mu":
        return MU
    if a == "nu":
        return NU
    if isinstance(a, dict) and "patch" in a:
        entries = a["patch"]
        if not isinstance(entries, list):
            raise MalformedInput("patch must be a list of [[stratum, orbit], image] entries")
        images = {}
        for e in entries:
            if not isinstance(e, list) or len(e) != 2:
                raise MalformedInput(f"bad patch entry {e!r}")
            key = _int_list(e[0], "patch key")
            if len(key) != 2:
                raise MalformedInput(f"patch key must be [stratum, orbit], got {key!r}")
            images[tuple(key)] = _point(e[1], s)
        return Patch(images)
    if isinstance(a, dict) and "rule" in a:
        exc = a["rule"].get("exceptions", []) if isinstance(a["rule"], dict) else None
        if not isinstance(exc, list):
            raise MalformedInput("rule needs an exceptions list")
        pairs = [_int_list(e, "rule exception") for e in exc]
        if any(len(p) != 2 or min(p) < 0 for p in pairs):
            raise MalformedInput("rule exceptions are [source, target] pairs of naturals")
        return RuleBijection(dict(pairs))
    raise MalformedInput(f"unknown tail atom {a!r}")


def _emit_atom(layer):
    if isinstance(layer, Mu):
        return "mu"
    if isinstance(layer, Nu):
        return "nu"
    if isinstance(layer, Patch):
        return {"patch": [[list(k), list(v)] for k, v in sorted(layer.images.items())]}
    if isinstance(layer, RuleBijection):
        return {"rule": {"exceptions": [[k, v] for k, v in layer.exceptions.items()]}}
    raise TypeError(f"cannot serialize layer {layer!r}")


def _touches_finite(s: GSet, layers) -> bool:
    inf = s.infinite_stratum
    return any(isinstance(layer, Patch) and any(k[0] != inf for k in layer.images) for layer in layers)


def parse_map(doc, s: GSet) -> EquivariantMap:
    if not isinstance(doc, dict):
        raise MalformedInput("map document must be an object")
    tail = doc.get("tail", [])
    if not isinstance(tail, list):
        raise MalformedInput("tail must be a list of atoms")
    layers = [_parse_atom(a, s) for a in tail]
    reps = s.finite_reps()
    finite = doc.get("finite")
    if finite is None:
        return EquivariantMap.from_layers(s, layers)
    if not isinstance(finite, list) or len(finite) != len(reps):
        raise MalformedInput(f"finite part needs exactly {len(reps)} image triples")
    images = {(r.stratum, r.orbit): _point(v, s) for r, v in zip(reps, finite)}
    if _touches_finite(s, layers):
        m = EquivariantMap.from_layers(s, layers)
        if m.finite_part != images:
            raise MalformedInput("finite part disagrees with the tail on finite representatives")
        return m
    head = EquivariantMap.from_images(s, images)
    # Finite points reach the infinite stratum only in case 1, and only the
    # infinite stratum reaches finite points in case 2; order the layers to match.
    if s.case_tag == CASE1:
        return EquivariantMap.from_layers(s, list(head.layers) + layers)
    return EquivariantMap.from_layers(s, layers + list(head.layers))


def emit_map(f: EquivariantMap) -> dict:
    s = f.gset
    return {
        "finite": [list(f.evaluate(r)) for r in s.finite_reps()],
        "tail": [_emit_atom(layer) for layer in f.layers] if not s.is_finite else [],
    }


# -- words and reports --------------------------------------------------------------

def emit_factor(f: Factor) -> dict:
    if f.is_named:
        return {"gen": f.name}
    return {"aut": emit_map(f.map), "label": f.label}


def emit_word(w: Word) -> list[dict]:
    return [emit_factor(f) for f in w.factors]


def parse_word(doc, s: GSet, gens: GeneratorSet | None = None) -> Word:
    if not isinstance(doc, list):
        raise MalformedInput("word must be a list of factors")
    out = []
    for d in doc:
        if isinstance(d, dict) and "gen" in d:
            name = d["gen"]
            if gens is not None and name not in gens:
                raise MalformedInput(f"unknown generator {name!r}")
            out.append(Factor(name=name, label=name))
        elif isinstance(d, dict) and "aut" in d:
            out.append(Factor(map=parse_map(d["aut"], s), label=str(d.get("label", "aut"))))
        else:
            raise MalformedInput(f"bad word factor {d!r}")
    return Word(out)


def emit_report(r: FactorizationReport) -> dict:
    return {
        "word": emit_word(r.word),
        "length": r.length,
        "verified": r.verified,
        "stages": r.stages,
    }
