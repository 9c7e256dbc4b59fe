"""JSON workspace files: named spaces, sets and coverings.

Schema (all keys optional except where used)::

    {
      "spaces": {"metricR": {"kind": "metric", "ground": "R"},
                 "K3": {"kind": "finite-relation", "points": ["a", "b", "c"],
                        "close_pairs": [["a", "b"]]},
                 "C": {"coproduct": ["metricR", {"kind": "standard", "ground": "R"}]},
                 "T": {"coproduct_template": {"base": "K1", "index": "N"}}},
      "sets": {"A": {"space": "metricR", "value": "[0,1)"}},
      "coverings": {"cov": {"space": "stdR", "pairs": [["(-inf,1)", "(-inf,1/2]"]]}},
      "suites": ["coproduct-additivity"]
    }

A space value is either an inline definition or the name of another space.
Set literals depend on the space: region strings on the real line, label
lists on finite grounds, and ``{"explicit": {...}, "tail": "empty"}`` objects
on coproducts (where ``"X2"`` also names the carrier of component 2).
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .coproduct import Coproduct, CoproductSet, TemplateCoproduct, _CoproductBase
from .dimension import DeltaCovering, DimensionCertificate
from .regions import parse_region
from .spaces import FINITE_KINDS, REAL_KINDS, FiniteSpace, ProximitySpace, RealLine, Subspace


class WorkspaceError(ValueError):
    """Malformed or inconsistent workspace input."""


def load_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def space_from_json(obj: Any, named: Optional[Dict[str, ProximitySpace]] = None,
                    where: str = "space") -> ProximitySpace:
    named = named if named is not None else {}
    if isinstance(obj, str):
        if obj not in named:
            raise WorkspaceError(f"{where}: unknown space {obj!r}")
        return named[obj]
    if not isinstance(obj, dict):
        raise WorkspaceError(f"{where}: expected an object or a space name")
    if "coproduct" in obj:
        parts = obj["coproduct"]
        if not isinstance(parts, list) or not parts:
            raise WorkspaceError(f"{where}: coproduct needs a nonempty list of spaces")
        return Coproduct([space_from_json(p, named, f"{where}.coproduct[{i}]") for i, p in enumerate(parts)])
    if "coproduct_template" in obj:
        entry = obj["coproduct_template"]
        if not isinstance(entry, dict) or "base" not in entry:
            raise WorkspaceError(f"{where}: coproduct_template needs a base")
        if entry.get("index", "N") != "N":
            raise WorkspaceError(f"{where}: only the index set \"N\" is supported")
        base = space_from_json(entry["base"], named, f"{where}.base")
        try:
            return TemplateCoproduct(base)
        except ValueError as exc:
            raise WorkspaceError(f"{where}: {exc}") from None
    if "subspace" in obj:
        entry = obj["subspace"]
        parent = space_from_json(entry.get("parent"), named, f"{where}.parent")
        carrier = set_from_json(parent, entry.get("carrier"), where=f"{where}.carrier")
        try:
            return Subspace(parent, carrier)
        except ValueError as exc:
            raise WorkspaceError(f"{where}: {exc}") from None
    kind = obj.get("kind")
    try:
        if obj.get("ground") == "R":
            if kind not in REAL_KINDS:
                raise WorkspaceError(f"{where}: kind {kind!r} is not a real-line kind")
            return RealLine(kind)
        if "points" in obj:
            if kind not in FINITE_KINDS:
                raise WorkspaceError(f"{where}: kind {kind!r} is not a finite-ground kind")
            pairs = [tuple(p) for p in obj.get("close_pairs", [])]
            metric = None
            if "metric" in obj:
                metric = {(x, y): Fraction(str(d)) for x, y, d in obj["metric"]}
            return FiniteSpace(obj["points"], pairs, kind=kind, metric=metric)
    except WorkspaceError:
        raise
    except (ValueError, TypeError) as exc:
        raise WorkspaceError(f"{where}: {exc}") from None
    raise WorkspaceError(f"{where}: need \"ground\": \"R\", \"points\", \"coproduct\" or \"coproduct_template\"")


_CARRIER = re.compile(r"^X(\d+)$")


def set_from_json(space: ProximitySpace, value: Any, where: str = "set") -> Any:
    try:
        return space.check(_set_value(space, value, where))
    except WorkspaceError:
        raise
    except ValueError as exc:
        raise WorkspaceError(f"{where}: {exc}") from None


def _set_value(space: ProximitySpace, value: Any, where: str) -> Any:
    if isinstance(value, str) and value in ("X", "full"):
        return space.full()
    if isinstance(value, str) and value == "empty":
        return space.empty()
    if isinstance(space, Subspace):
        return _set_value(space.parent, value, where)
    if isinstance(space, RealLine):
        if not isinstance(value, str):
            raise WorkspaceError(f"{where}: expected a region literal string")
        return parse_region(value)
    if isinstance(space, FiniteSpace):
        if not isinstance(value, list):
            raise WorkspaceError(f"{where}: expected a list of point labels")
        return frozenset(value)
    if isinstance(space, _CoproductBase):
        if isinstance(value, str):
            m = _CARRIER.match(value)
            if m:
                return space.carrier(int(m.group(1)))
            raise WorkspaceError(f"{where}: expected a coproduct set object or X<k>")
        if not isinstance(value, dict):
            raise WorkspaceError(f"{where}: expected a coproduct set object")
        tail = value.get("tail", "empty")
        if tail not in ("empty", "full"):
            raise WorkspaceError(f"{where}: tail must be \"empty\" or \"full\"")
        entries = {}
        for key, lit in value.get("explicit", {}).items():
            try:
                i = int(key)
            except ValueError:
                raise WorkspaceError(f"{where}: index {key!r} is not an integer") from None
            comp = space.component(i)
            entries[i] = _set_value(comp, lit, f"{where}.explicit[{key}]")
        return CoproductSet(tuple(sorted(entries.items(), key=lambda kv: kv[0])), tail == "full")
    raise WorkspaceError(f"{where}: unsupported space {space}")


def certificate_from_json(obj: Any, named: Dict[str, ProximitySpace], where: str = "certificate") -> DimensionCertificate:
    if not isinstance(obj, dict):
        raise WorkspaceError(f"{where}: expected an object")
    for key in ("space", "covering", "refinement", "claimed_multiplicity"):
        if key not in obj:
            raise WorkspaceError(f"{where}: missing {key!r}")
    space = space_from_json(obj["space"], named, f"{where}.space")
    cov = covering_from_json(space, obj["covering"], f"{where}.covering")
    ref = covering_from_json(space, obj["refinement"], f"{where}.refinement")
    claimed = obj["claimed_multiplicity"]
    if not isinstance(claimed, int) or claimed < 1:
        raise WorkspaceError(f"{where}: claimed_multiplicity must be a positive integer")
    return DimensionCertificate(space, cov, ref, claimed)


def covering_from_json(space: ProximitySpace, pairs: Any, where: str) -> DeltaCovering:
    if not isinstance(pairs, list):
        raise WorkspaceError(f"{where}: expected a list of [A, B] pairs")
    out = []
    for i, p in enumerate(pairs):
        if not isinstance(p, list) or len(p) != 2:
            raise WorkspaceError(f"{where}[{i}]: expected a pair [A, B]")
        out.append((set_from_json(space, p[0], f"{where}[{i}][0]"),
                    set_from_json(space, p[1], f"{where}[{i}][1]")))
    return DeltaCovering(space, tuple(out))


@dataclass
class Workspace:
    spaces: Dict[str, ProximitySpace] = field(default_factory=dict)
    sets: Dict[str, tuple] = field(default_factory=dict)
    coverings: Dict[str, DeltaCovering] = field(default_factory=dict)
    suites: List[str] = field(default_factory=list)
    digest: str = "none"

    def space(self, name: str) -> ProximitySpace:
        if name not in self.spaces:
            raise WorkspaceError(f"unknown space {name!r}")
        return self.spaces[name]

    def resolve_set(self, space: ProximitySpace, token: str, where: str = "argument") -> Any:
        """A named set of ``space`` or a literal for it."""
        if token in self.sets:
            owner, value = self.sets[token]
            if owner is not space and owner != space:
                raise WorkspaceError(f"{where}: set {token!r} belongs to another space")
            return value
        text = token.strip()
        base = space
        while isinstance(base, Subspace):
            base = base.parent
        if not isinstance(base, RealLine) and text[:1] in ("{", "["):
            value = load_json(text, where)
        else:
            value = text
        if isinstance(space, _CoproductBase) and isinstance(value, str) and not _CARRIER.match(value) \
                and value not in ("X", "full", "empty"):
            raise WorkspaceError(f"{where}: unknown set {token!r}")
        return set_from_json(space, value, where)


def canonical_digest(obj: Any) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def workspace_from_json(obj: Any) -> Workspace:
    if not isinstance(obj, dict):
        raise WorkspaceError("workspace must be a JSON object")
    ws = Workspace(digest=canonical_digest(obj))
    pending = dict(obj.get("spaces", {}))
    # spaces may reference each other in any order
    while pending:
        progressed = False
        for name in list(pending):
            try:
                ws.spaces[name] = space_from_json(pending[name], ws.spaces, f"spaces.{name}")
            except WorkspaceError as exc:
                if "unknown space" in str(exc):
                    continue
                raise
            del pending[name]
            progressed = True
        if not progressed:
            name = sorted(pending)[0]
            space_from_json(pending[name], ws.spaces, f"spaces.{name}")
    for name, entry in obj.get("sets", {}).items():
        if not isinstance(entry, dict) or "space" not in entry or "value" not in entry:
            raise WorkspaceError(f"sets.{name}: expected {{\"space\": ..., \"value\": ...}}")
        sp = ws.space(entry["space"])
        ws.sets[name] = (sp, set_from_json(sp, entry["value"], f"sets.{name}"))
    for name, entry in obj.get("coverings", {}).items():
        sp = ws.space(entry.get("space"))
        ws.coverings[name] = covering_from_json(sp, entry.get("pairs"), f"coverings.{name}")
    ws.suites = list(obj.get("suites", []))
    return ws
