"""JSON input documents.

Schema (all keys optional except ``field`` and one algebra source)::

    field:     {"char": 0 | prime}
    quiver:    {"vertices": [...], "arrows": [[name, source, target], ...],
                "relations": [[[coeff, [arrow, ...]], ...], ...]}
    poset:     {"elements": [...], "leq": [[a, b], ...]}
    structure_constants:
               {"dim": n, "entries": [[i, j, k, c], ...] | "mult": n x n x n,
                "unit": [...], "idempotents": [[...], ...], "labels": [...]}
    group:     {"domain": [...], "generators": [[images...] | {a: b}, ...]}
    action:    {"trivial": true} | {"generator_maps": [...]}
    grading:   "path_length" | {"basis_degrees": [...]}
    modules:   [{"name": ..., "action_matrices": [...], "group_matrices": [...], "degrees": [...]}]
    oracle:    path to a data file, or the data inline

Paths in relations and arrow images are written in product order, so
``["b", "a"]`` is the composite of ``a`` followed by ``b``.  A relation may
also be a string such as ``"b*a - c*d"`` with integer or rational coefficients.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import linalg as la
from .algebra import Algebra, PosetData, QuiverPresentation, build_incidence_algebra, build_path_algebra
from .errors import ActionError, InvalidPrime, ShapeError, SkewAlgError
from .groups import (
    AlgebraAction,
    PermGroup,
    extend_from_generators,
    generate_group,
    path_action,
    poset_action,
    trivial_action,
    trivial_group,
)
from .modules import Representation
from .oracle import RepTypeOracle


class InputError(SkewAlgError):
    """Malformed input document."""


@dataclass
class Problem:
    char: int
    algebra: Algebra
    kind: str  # quiver | poset | structure_constants
    poset: Optional[PosetData] = None
    quiver: Optional[QuiverPresentation] = None
    group: Optional[PermGroup] = None
    action: Optional[AlgebraAction] = None
    grading: Optional[list[int]] = None
    modules: list[dict] = field(default_factory=list)
    oracle: Optional[RepTypeOracle] = None
    digest: str = ""
    raw: dict = field(default_factory=dict)

    @property
    def has_group(self) -> bool:
        return self.group is not None and self.action is not None


def _coeff(c, char: int):
    if isinstance(c, str):
        c = Fraction(c)
    if isinstance(c, float):
        raise InputError("coefficients must be integers or rational strings, not floats")
    return la.scalar(c, char)


_TERM = re.compile(r"\s*([+-]?)\s*((?:\d+(?:/\d+)?)\s*\*?)?\s*([A-Za-z_][\w']*(?:\s*\*\s*[A-Za-z_][\w']*)*)")


def parse_relation(rel, char: int) -> list[tuple[Any, tuple[str, ...]]]:
    if isinstance(rel, str):
        out, pos = [], 0
        text = rel.strip()
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m or m.end() == pos:
                raise InputError(f"cannot parse relation {rel!r} near position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            num = Fraction(m.group(2).rstrip("* ")) if m.group(2) else Fraction(1)
            path = tuple(x.strip() for x in m.group(3).split("*"))
            out.append((la.scalar(sign * num, char), path))
            pos = m.end()
        return out
    if not isinstance(rel, list) or not rel:
        raise InputError(f"relation must be a non-empty list of [coeff, path] terms or a string, got {rel!r}")
    out = []
    for term in rel:
        if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], list)):
            raise InputError(f"relation term must be [coeff, [arrows...]], got {term!r}")
        out.append((_coeff(term[0], char), tuple(term[1])))
    return out


def _arrows(data) -> list[tuple[str, str, str]]:
    out = []
    for a in data:
        if isinstance(a, dict):
            out.append((a["name"], a["source"], a["target"]))
        elif isinstance(a, list) and len(a) == 3:
            out.append(tuple(a))
        else:
            raise InputError(f"arrow must be [name, source, target], got {a!r}")
    return out


def parse_quiver(data: dict, char: int) -> QuiverPresentation:
    try:
        rels = [parse_relation(r, char) for r in data.get("relations", [])]
        return QuiverPresentation(list(data["vertices"]), _arrows(data.get("arrows", [])), rels)
    except KeyError as exc:
        raise InputError(f"quiver is missing field {exc}") from exc


def parse_poset(data: dict) -> PosetData:
    try:
        return PosetData(data["elements"], [tuple(x) for x in data.get("leq", [])])
    except KeyError as exc:
        raise InputError(f"poset is missing field {exc}") from exc


def parse_structure_constants(data: dict, char: int) -> Algebra:
    n = data.get("dim")
    if "mult" in data:
        mult = np.asarray(data["mult"], dtype=object)
        if mult.ndim != 3:
            raise ShapeError("mult must be an n x n x n array")
        n = mult.shape[0]
        mult = la.asarray([[[_coeff(c, char) for c in row] for row in plane] for plane in data["mult"]], char)
    elif "entries" in data:
        if n is None:
            raise InputError("structure_constants with sparse entries need 'dim'")
        mult = la.zeros((n, n, n), char)
        for e in data["entries"]:
            if len(e) != 4:
                raise InputError(f"entry must be [i, j, k, coeff], got {e!r}")
            i, j, k, c = e
            mult[i, j, k] = la.reduce(mult[i, j, k] + _coeff(c, char), char)
    else:
        raise InputError("structure_constants needs 'mult' or 'entries'")
    unit = [_coeff(c, char) for c in data["unit"]] if "unit" in data else None
    if unit is None:
        raise InputError("structure_constants needs 'unit'")
    idem = [[_coeff(c, char) for c in e] for e in data.get("idempotents", [unit])]
    return Algebra(char, mult, unit, idem, data.get("labels"), data.get("degrees"))


def parse_group(data: Optional[dict], default_domain) -> Optional[PermGroup]:
    if data is None:
        return None
    domain = data.get("domain", default_domain)
    gens = data.get("generators", [])
    return generate_group(domain, gens) if gens else trivial_group(domain)


def _arrow_image(img, char: int):
    if isinstance(img, str):
        return [(la.scalar(1, char), tuple(x.strip() for x in img.split("*")))]
    if isinstance(img, list) and img and isinstance(img[0], str):
        return [(la.scalar(1, char), tuple(img))]
    return [(_coeff(c, char), tuple(p)) for c, p in img]


def parse_action(data: Optional[dict], prob: Problem) -> Optional[AlgebraAction]:
    grp, alg = prob.group, prob.algebra
    if grp is None:
        return None
    data = data or {}
    if data.get("trivial"):
        return trivial_action(alg, grp)
    if prob.kind == "poset":
        return poset_action(alg, grp)
    maps = data.get("generator_maps")
    if maps is None:
        if grp.order == 1:
            return trivial_action(alg, grp)
        raise InputError("action.generator_maps is required for this algebra")
    if len(maps) != len(grp.generators):
        raise ActionError(f"{len(maps)} generator maps for {len(grp.generators)} group generators")
    if prob.kind == "quiver":
        conv = []
        for k, gm in enumerate(maps):
            vp = gm.get("vertex_perm")
            if vp is None:
                perm = grp.elements[grp.generators[k]]
                vp = {str(grp.domain[i]): str(grp.domain[j]) for i, j in enumerate(perm)}
            conv.append({"vertex_perm": vp,
                         "arrow_images": {a: _arrow_image(img, prob.char) for a, img in gm.get("arrow_images", {}).items()}})
        return path_action(alg, grp, conv)
    mats = [la.asarray([[_coeff(c, prob.char) for c in row] for row in m], prob.char) for m in maps]
    return extend_from_generators(alg, grp, mats)


def parse_grading(data, alg: Algebra) -> Optional[list[int]]:
    if data is None:
        return None
    if data == "path_length":
        if alg.degrees is None:
            raise InputError("path_length grading needs a quiver or an algebra with built-in degrees")
        return list(alg.degrees)
    if isinstance(data, dict) and "basis_degrees" in data:
        return [int(d) for d in data["basis_degrees"]]
    raise InputError(f"unrecognised grading {data!r}")


def module_from_json(data: dict, alg: Algebra) -> Representation:
    mats = la.asarray([[[_coeff(c, alg.char) for c in row] for row in m] for m in data["action_matrices"]], alg.char)
    if mats.shape[0] != alg.dim:
        raise ShapeError(f"module {data.get('name', '')!r} needs one matrix per basis element ({alg.dim})")
    return Representation(alg, mats, check=True, name=str(data.get("name", "")))


def load_oracle(data, base_dir: str) -> Optional[RepTypeOracle]:
    if data is None:
        return None
    if isinstance(data, str):
        path = data if os.path.isabs(data) else os.path.join(base_dir, data)
        return RepTypeOracle.from_file(path)
    if isinstance(data, dict):
        return RepTypeOracle(data, source="inline")
    raise InputError("oracle must be a file path or an inline object")


def _check_references(prob: Problem, doc: dict, domain) -> None:
    action = doc.get("action") or {}
    maps = action.get("generator_maps") or []
    # the domain is only interpreted when the action is read off it
    uses_domain = (prob.kind == "poset" and not action.get("trivial")) or (
        prob.kind == "quiver" and any(isinstance(gm, dict) and "vertex_perm" not in gm for gm in maps))
    if prob.group is not None and uses_domain:
        dom = set(map(str, prob.group.domain))
        if prob.kind == "poset" and not set(map(str, domain)) <= dom:
            raise InputError("group domain must contain the poset elements")
        if prob.kind == "quiver" and dom != set(map(str, domain)):
            raise InputError("group domain must be the quiver vertices")
    if prob.kind == "quiver":
        arrows = {a[0] for a in prob.quiver.arrows}
        verts = set(prob.quiver.vertices)
        for gm in maps:
            if not isinstance(gm, dict):
                raise InputError("each quiver generator map must be an object with vertex_perm/arrow_images")
            for a in gm.get("arrow_images", {}):
                if a not in arrows:
                    raise InputError(f"arrow_images refers to undeclared arrow {a!r}")
            for u, v in gm.get("vertex_perm", {}).items():
                if u not in verts or v not in verts:
                    raise InputError(f"vertex_perm refers to undeclared vertex ({u!r} -> {v!r})")


def digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def parse_document(doc: dict, base_dir: str = ".", raw_digest: str = "") -> Problem:
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    try:
        char = int(doc["field"]["char"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("field.char is required") from exc
    try:
        la.check_char(char)
    except ValueError as exc:
        raise InvalidPrime(str(exc)) from exc
    sources = [k for k in ("quiver", "poset", "structure_constants") if k in doc]
    if len(sources) != 1:
        raise InputError("exactly one of quiver, poset, structure_constants is required")
    kind = sources[0]
    poset = quiver = None
    if kind == "quiver":
        quiver = parse_quiver(doc["quiver"], char)
        alg = build_path_algebra(quiver, char)
        default_domain = quiver.vertices
    elif kind == "poset":
        poset = parse_poset(doc["poset"])
        alg = build_incidence_algebra(poset, char)
        default_domain = poset.elements
    else:
        alg = parse_structure_constants(doc["structure_constants"], char)
        default_domain = ["*"]
    prob = Problem(char, alg, kind, poset=poset, quiver=quiver, digest=raw_digest, raw=doc)
    prob.group = parse_group(doc.get("group"), default_domain)
    _check_references(prob, doc, default_domain)
    if prob.group is not None:
        prob.action = parse_action(doc.get("action"), prob)
    elif "action" in doc:
        raise InputError("an action was given without a group")
    prob.grading = parse_grading(doc.get("grading"), alg)
    prob.modules = list(doc.get("modules", []))
    prob.oracle = load_oracle(doc.get("oracle"), base_dir)
    return prob


def load(path: str) -> Problem:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"input is not valid JSON: {exc}") from exc
    return parse_document(doc, os.path.dirname(os.path.abspath(path)), digest(raw))


def jsonable(x):
    """Convert numpy scalars/arrays and Fractions into plain JSON values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return x


__all__ = [
    "InputError",
    "Problem",
    "parse_document",
    "parse_relation",
    "parse_quiver",
    "parse_poset",
    "parse_structure_constants",
    "module_from_json",
    "load",
    "load_oracle",
    "digest",
    "jsonable",
]
