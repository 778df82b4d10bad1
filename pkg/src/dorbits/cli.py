"""Command-line front end: load a workspace document and run one command.

Documents are JSON objects with a ``version`` field (currently 1) and the
sections ``categories``, ``spaces``, ``dspaces``, ``families`` and
``scripts``; see the README for the format.  Output is deterministic: every
listing follows declaration order or a canonical order.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage
errors, 3 for unreadable or malformed documents, 4 for invalid structures,
5 when a search budget is exceeded and 6 for unknown entity names.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import cells as ce
from . import dspace as ds
from . import elmendorf as el
from . import fincat as fc
from . import finspace as fs
from . import orbits as ob
from .errors import (
    BudgetExceeded,
    CheckFailure,
    ParseError,
    UnknownEntity,
    ValidationError,
)

VERSION = 1
SECTIONS = ("categories", "spaces", "dspaces", "families", "scripts")
SINGULAR = {"categories": "category", "spaces": "space", "dspaces": "dspace", "families": "family", "scripts": "script"}

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_BUDGET, EXIT_UNKNOWN = 0, 1, 2, 3, 4, 5, 6


# -- document loading ---------------------------------------------------------

@dataclass
class Family:
    category: str
    members: dict   # name -> Orbit


@dataclass
class Script:
    category: str
    complex: ce.CellComplex


@dataclass
class Workspace:
    path: str
    categories: dict = field(default_factory=dict)
    spaces: dict = field(default_factory=dict)
    dspaces: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    scripts: dict = field(default_factory=dict)
    status: list = field(default_factory=list)   # (section, name, error or None)
    _orbit_cats: dict = field(default_factory=dict, repr=False)

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise UnknownEntity(f"no entry {name!r} in {section}")
        return table[name]

    def orbit_category(self, family: str) -> ob.OrbitCategory:
        if family not in self._orbit_cats:
            fam = self.get("families", family)
            D = self.get("categories", fam.category)
            self._orbit_cats[family] = ob.orbit_category(D, fam.members)
        return self._orbit_cats[family]


def _point_lookup(points, raw, where):
    """Resolve a JSON value to a point, allowing string keys for int points."""
    for p in points:
        if p == raw and type(p) is type(raw):
            return p
    for p in points:
        if str(p) == str(raw):
            return p
    raise ValidationError(f"{where}: {raw!r} is not a point")


def _space(doc_spaces, raw, where) -> fs.FinSpace:
    if isinstance(raw, str):
        if raw not in doc_spaces:
            raise UnknownEntity(f"{where}: unknown space {raw!r}")
        return doc_spaces[raw]
    points = [_hashable(p) for p in raw["points"]]
    gens = []
    for pair in raw.get("leq", []):
        a, b = pair
        gens.append((_point_lookup(points, _hashable(a), where), _point_lookup(points, _hashable(b), where)))
    return fs.finspace(points, gens)


def _hashable(v):
    return tuple(_hashable(x) for x in v) if isinstance(v, list) else v


def _assignment(dom: fs.FinSpace, cod: fs.FinSpace, raw, where) -> dict:
    pairs = raw.items() if isinstance(raw, dict) else raw
    out = {}
    for k, v in pairs:
        out[_point_lookup(dom.points, _hashable(k), where)] = _point_lookup(cod.points, _hashable(v), where)
    missing = [p for p in dom.points if p not in out]
    if missing:
        raise ValidationError(f"{where}: no image for {missing[0]!r}")
    return out


def _category(raw) -> fc.FinCategory:
    builtin = raw.get("builtin")
    if builtin is not None:
        makers = {
            "walking_arrow": fc.walking_arrow,
            "terminal": fc.terminal_category,
            "cospan": fc.cospan_poset,
        }
        if builtin == "cyclic":
            return fc.cyclic_group(int(raw["order"]))
        if builtin not in makers:
            raise ValidationError(f"unknown builtin category {builtin!r}")
        return makers[builtin]()
    return fc.validate_category(raw)


def _dspace(ws: Workspace, raw, where) -> ds.DSpace:
    D = ws.get("categories", raw["category"])
    if "free" in raw:
        return ds.representable(D, _point_lookup(D.objects, raw["free"], where))
    if "constant" in raw:
        return ds.constant(D, _space(ws.spaces, raw["constant"], where))
    values = {}
    for d in D.objects:
        if str(d) not in raw["values"]:
            raise ValidationError(f"{where}: no value for object {d!r}")
        values[d] = _space(ws.spaces, raw["values"][str(d)], f"{where} at {d!r}")
    actions = {}
    for m, a in raw.get("actions", {}).items():
        m = _point_lookup(D.morphisms, m, where)
        dom, cod = values[D.source[m]], values[D.target[m]]
        actions[m] = _assignment(dom, cod, a, f"{where}, action of {m!r}")
    return ds.make_dspace(D, values, actions)


def _script(ws: Workspace, raw, where) -> Script:
    D = ws.get("categories", raw["category"])
    base_name = raw.get("base")
    base = ds.empty_dspace(D) if base_name is None else ws.get("dspaces", base_name)
    steps = []
    for k, cell in enumerate(raw["cells"], start=1):
        name = cell["orbit"]
        O = ob.as_orbit(ws.get("dspaces", name), f"orbit {name!r}")
        n = int(cell["dim"])
        att = cell.get("attaching")
        steps.append((O, n, None if att is None else _attaching_builder(att, f"{where}, cell {k}"), name))
    return Script(raw["category"], ce.build_complex(base, steps))


def _attaching_builder(raw, where):
    def build(S: ds.DSpace, X: ds.DSpace) -> ds.EquivariantMap:
        table = {}
        for d, V, W in zip(S.shape.objects, S.values, X.values):
            rows = raw.get(str(d), [])
            got = {}
            for row in rows:
                a, o, y = (_hashable(v) for v in row)
                src = _point_lookup(V.points, (a, o), f"{where} at {d!r}")
                got[src] = _point_lookup(W.points, y, f"{where} at {d!r}")
            table[d] = got
        return ds.equivariant_map(S, X, table)
    return build


def _load_entity(ws: Workspace, section: str, name: str, raw, strict: bool):
    where = f"{SINGULAR[section]} {name!r}"
    try:
        if section == "categories":
            ws.categories[name] = _category(raw)
        elif section == "spaces":
            ws.spaces[name] = _space(ws.spaces, raw, where).validate()
        elif section == "dspaces":
            ws.dspaces[name] = _dspace(ws, raw, where)
        elif section == "families":
            D = ws.get("categories", raw["category"])
            members = {}
            for m in raw["members"]:
                O = ob.as_orbit(ws.get("dspaces", m), f"member {m!r}")
                if O.shape != D:
                    raise ValidationError(f"member {m!r} lives over another category")
                members[m] = O
            ws.families[name] = Family(raw["category"], members)
        else:
            ws.scripts[name] = _script(ws, raw, where)
        ws.status.append((section, name, None))
    except UnknownEntity as e:
        err = UnknownEntity(f"{where}: {e}")
        if strict:
            raise err from None
        ws.status.append((section, name, err))
    except (ValidationError, KeyError, TypeError, ValueError) as e:
        kind = type(e).__name__
        err = ValidationError(f"{where}: {kind}: {e}")
        if strict:
            raise err from None
        ws.status.append((section, name, err))


def loads(text: str, path: str = "<string>", strict: bool = True) -> Workspace:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    if raw.get("version") != VERSION:
        raise ParseError(f"{path}: unsupported version {raw.get('version')!r} (expected {VERSION})")
    unknown = [k for k in raw if k not in SECTIONS and k != "version"]
    if unknown:
        raise ParseError(f"{path}: unknown section {unknown[0]!r}")
    ws = Workspace(path)
    for section in SECTIONS:
        entries = raw.get(section, {})
        if not isinstance(entries, dict):
            raise ParseError(f"{path}: section {section!r} must be an object")
        for name, body in entries.items():
            _load_entity(ws, section, name, body, strict)
    return ws


def load(path: str, strict: bool = True) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return loads(text, path, strict)


# -- reporting ----------------------------------------------------------------

class Report:
    """Collects text lines, result rows and a data payload for one command."""

    def __init__(self, command: str):
        self.command = command
        self.lines = []
        self.results = []
        self.data = {}

    def say(self, line: str = ""):
        self.lines.append(line)

    def check(self, entity: str, check: str, ok: bool, witness: str = ""):
        self.results.append({"entity": entity, "check": check, "pass": bool(ok), "witness": witness})

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.results)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"schema": 1, "command": self.command, "passed": self.passed,
                   "results": self.results, "data": self.data}
            return json.dumps(doc, indent=2, sort_keys=True, default=str)
        out = list(self.lines)
        fails = [r for r in self.results if not r["pass"]]
        out.append(f"checks: {len(self.results)} run, {len(fails)} failed")
        for r in fails:
            out.append(f"FAIL {r['entity']} {r['check']}: {r['witness']}")
        return "\n".join(out)


def _fmt_space(V: fs.FinSpace) -> str:
    pts = ", ".join(map(str, V.points))
    rel = sorted((V.index[a], V.index[b]) for a, b in V.leq if a != b)
    if not rel:
        return "{" + pts + "}"
    return "{" + pts + "} with " + ", ".join(f"{V.points[i]}<={V.points[j]}" for i, j in rel)


def _fmt_dspace(X: ds.DSpace, indent="    ") -> list:
    C = X.shape
    lines = [f"{indent}{d}: {_fmt_space(V)}" for d, V in zip(C.objects, X.values)]
    for m in C.non_identity_morphisms():
        a = X.act(m)
        shown = ", ".join(f"{x}->{y}" for x, y in zip(a.domain.points, a.images))
        lines.append(f"{indent}{m}: {shown or '(no points)'}")
    return lines


# -- commands -----------------------------------------------------------------

def cmd_validate(ws: Workspace, args, rep: Report):
    for section, name, err in ws.status:
        rep.say(f"{SINGULAR[section]} {name}: " + ("ok" if err is None else f"error: {err}"))
        rep.check(name, f"valid-{section}", err is None, "" if err is None else str(err))
    rep.data["entities"] = [{"section": s, "name": n, "ok": e is None} for s, n, e in ws.status]


def cmd_orbits_enumerate(ws: Workspace, args, rep: Report):
    D = ws.get("categories", args.category)
    reps = ob.enumerate_discrete_orbits(D, args.max_size)
    rep.say(f"discrete orbits of {args.category} with at most {args.max_size} points: {len(reps)}")
    rows = []
    for O in reps:
        label = ob.iso_label(O)
        sizes = ", ".join(f"{d}={n}" for d, n in zip(D.objects, O.underlying.sizes))
        rep.say(f"  {label}  ({sizes})")
        rep.lines.extend(_fmt_dspace(O.underlying))
        rows.append({"label": label, "sizes": list(O.underlying.sizes)})
        rep.check(label, "is_orbit", bool(ob.is_orbit(O)))
    rep.data["orbits"] = rows


def cmd_decompose(ws: Workspace, args, rep: Report):
    T = ws.get("dspaces", args.dset)
    parts = ob.decompose_dset(T)
    rep.say(f"{args.dset}: {len(parts)} orbit(s)")
    rows = []
    for k, p in enumerate(parts):
        pts = ", ".join(f"{x}@{d}" for d, x in p.points)
        rep.say(f"  part {k}: {{{pts}}}  label {p.label}")
        rows.append({"points": [[str(d), x] for d, x in p.points], "label": p.label})
    whole = ob.reassemble(parts, T.shape)
    ok = ds.is_isomorphic(whole, T)
    rep.check(args.dset, "coproduct_of_parts_isomorphic", ok)
    rep.data["parts"] = rows


def cmd_orbit_cat(ws: Workspace, args, rep: Report):
    fam = ws.get("families", args.family)
    if fam.category != args.category:
        raise ValidationError(f"family {args.family!r} lives over {fam.category!r}, not {args.category!r}")
    oc = ws.orbit_category(args.family)
    names = [str(n) for n in oc.names]
    counts = oc.hom_counts()
    width = max(len(n) for n in names)
    rep.say(f"orbit category of {args.family}: objects {', '.join(names)}")
    rep.say("  " + " " * width + "  " + "  ".join(n.rjust(width) for n in names))
    for n, row in zip(names, counts):
        rep.say("  " + n.ljust(width) + "  " + "  ".join(str(c).rjust(width) for c in row))
    rep.check(args.family, "is_category", True)
    rep.data["objects"] = names
    rep.data["hom_counts"] = counts


def cmd_translation(ws: Workspace, args, rep: Report):
    T = ws.get("dspaces", args.dset)
    B = ob.translation_category(T)
    rep.say(f"translation category of {args.dset}: {len(B.objects)} objects, {len(B.morphisms)} morphisms")
    for a in B.objects:
        rep.say(f"  object ({a[1]}@{a[0]})")
    for m in B.morphisms:
        (f, (d, x)) = m
        (d2, y) = B.target[m]
        rep.say(f"  {f}: {x}@{d} -> {y}@{d2}")
    init = fc.initial_objects(B)
    rep.say("  initial objects: " + (", ".join(f"{x}@{d}" for d, x in init) or "none"))
    rep.data["objects"] = [[str(d), x] for d, x in B.objects]
    rep.data["morphisms"] = len(B.morphisms)
    rep.data["initial"] = [[str(d), x] for d, x in init]
    rep.check(args.dset, "is_category", True)


def cmd_pi0(ws: Workspace, args, rep: Report):
    X = ws.get("dspaces", args.dspace)
    oc = ws.orbit_category(args.family)
    if X.shape != oc.shape:
        raise ValidationError(f"{args.dspace!r} and family {args.family!r} live over different categories")
    table = ds.pi0_functor(X, oc)
    rep.say(f"pi0 of {args.dspace} over {args.family}")
    for name in table.orbits:
        rep.say(f"  {name} -> {table.sizes[name]}")
    C = oc.category
    for sigma in C.morphisms:
        if C.is_identity(sigma):
            continue
        a, b, k = sigma
        rep.say(f"  map {a}->{b} #{k}: pi0({b}) -> pi0({a}) = {list(table.maps[sigma])}")
    rep.data["sizes"] = {str(n): table.sizes[n] for n in table.orbits}
    rep.data["maps"] = [[str(s[0]), str(s[1]), s[2], list(table.maps[s])] for s in C.morphisms]
    rep.check(args.dspace, "functor_laws", True)


def cmd_cells_build(ws: Workspace, args, rep: Report):
    sc = ws.get("scripts", args.script)
    K = sc.complex
    rep.say(f"script {args.script}: {len(K.cells)} cell(s), is_cw = {ce.is_cw(K)}")
    rep.say("  stage 0: sizes " + str(list(K.base.sizes)))
    for k, cell in enumerate(K.cells, start=1):
        rep.say(f"  stage {k}: +{cell.dim}-cell of {cell.name}, sizes {list(K.stage(k).sizes)}")
    rep.data["stages"] = [list(K.stage(k).sizes) for k in range(len(K.cells) + 1)]
    rep.data["is_cw"] = ce.is_cw(K)
    if args.check_type:
        fam = ws.get("families", args.check_type)
        tr = ce.verify_type(K, fam.members)
        rep.say(f"  type {args.check_type}:")
        for e in tr.entries:
            d, x = e.point
            rep.say(f"    class {e.klass} (via {x}@{d}): " + (e.matched or "no match"))
            rep.check(f"{args.script}/class{e.klass}", "type", e.matched is not None,
                      "" if e.matched else f"orbit of {x}@{d} is not in {args.check_type}")
        rep.data["type"] = [{"class": e.klass, "matched": e.matched} for e in tr.entries]


def cmd_elmendorf_check(ws: Workspace, args, rep: Report):
    fam = ws.get("families", args.family)
    if fam.category != args.category:
        raise ValidationError(f"family {args.family!r} lives over {fam.category!r}, not {args.category!r}")
    D = ws.get("categories", args.category)
    oc = ws.orbit_category(args.family)
    r = el.check_adjunction(D, oc, args.max_points, budget=args.budget, seed=args.seed, shape_name=args.category)
    rep.say(f"adjunction check over {args.category}, family {args.family}, at most {args.max_points} point(s) per object")
    rep.say(f"  D-spaces: {r.n_spaces}, presheaves: {r.n_presheaves}, pairs: {r.n_pairs}, maps: {r.n_maps}")
    for name in el.CHECK_NAMES:
        t = r.checks[name]
        rep.say(f"  {name}: {t.passed} passed, {t.failed} failed")
        rep.check(f"{args.category}/{args.family}", name, t.failed == 0, t.witness or "")
    rep.say("  unit on free cells:")
    units = el.unit_sweep(oc, el.standard_cell_spaces())
    for u in units:
        rep.say(f"    hom(-, {u.orbit}) x {u.space}: {'iso' if u.passed else 'not iso'}, sizes {list(u.sizes)}")
        rep.check(f"{u.orbit} x {u.space}", "unit_iso", u.passed, "" if u.passed else f"sizes {u.sizes} vs {u.unit_sizes}")
    rep.data["counts"] = {"dspaces": r.n_spaces, "presheaves": r.n_presheaves, "pairs": r.n_pairs, "maps": r.n_maps}
    rep.data["checks"] = {n: {"passed": r.checks[n].passed, "failed": r.checks[n].failed} for n in el.CHECK_NAMES}


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dorbits", description="Orbits, cells and the Elmendorf adjunction over finite categories.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        q = kw.pop("parent", sub).add_parser(name, **kw)
        q.add_argument("file")
        q.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        q.set_defaults(func=func)
        return q

    add("validate", cmd_validate, help="load a document and report per-entity status")
    orb = sub.add_parser("orbits", help="orbit enumeration").add_subparsers(dest="orbits_command", required=True)
    q = add("enumerate", cmd_orbits_enumerate, parent=orb, help="list discrete orbits up to isomorphism")
    q.add_argument("--category", required=True)
    q.add_argument("--max-size", type=int, required=True)
    q = add("decompose", cmd_decompose, help="split a D-set into orbits")
    q.add_argument("--dset", required=True)
    q = add("orbit-cat", cmd_orbit_cat, help="hom-set counts of an orbit category")
    q.add_argument("--category", required=True)
    q.add_argument("--family", required=True)
    q = add("translation", cmd_translation, help="print a translation category")
    q.add_argument("--dset", required=True)
    q = add("pi0", cmd_pi0, help="components of fixed points over an orbit category")
    q.add_argument("--dspace", required=True)
    q.add_argument("--family", required=True)
    cel = sub.add_parser("cells", help="cell complexes").add_subparsers(dest="cells_command", required=True)
    q = add("build", cmd_cells_build, parent=cel, help="run a cell script")
    q.add_argument("--script", required=True)
    q.add_argument("--check-type", metavar="FAMILY")
    elm = sub.add_parser("elmendorf", help="adjunction checks").add_subparsers(dest="elmendorf_command", required=True)
    q = add("check", cmd_elmendorf_check, parent=elm, help="exhaustive adjunction check")
    q.add_argument("--category", required=True)
    q.add_argument("--family", required=True)
    q.add_argument("--max-points", type=int, default=2)
    q.add_argument("--budget", type=int, default=100_000)
    q.add_argument("--seed", type=int, default=0)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = " ".join(x for x in (args.command, getattr(args, "orbits_command", None),
                                getattr(args, "cells_command", None), getattr(args, "elmendorf_command", None)) if x)
    rep = Report(name)
    try:
        ws = load(args.file, strict=args.func is not cmd_validate)
        args.func(ws, args, rep)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownEntity as e:
        print(f"unknown entity: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ValidationError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except CheckFailure as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    print(rep.render(args.format))
    if not rep.passed:
        return EXIT_INVALID if args.func is cmd_validate else EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
