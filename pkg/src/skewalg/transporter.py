"""Transporter categories G∝P of finite group actions on posets.

A morphism is a pair (alpha: x -> y, g) with source g^{-1}(x) and target y.
Morphisms are indexed as ``pair_index * |G| + g`` with pairs in the order of
``PosetData.comparable_pairs``, which matches the skew group algebra basis of
the incidence algebra; the category algebra and kP G can then be compared
coordinate by coordinate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, PosetData, build_incidence_algebra, fingerprint, morita_fingerprint
from .errors import (
    ConnectedRequired,
    FreeActionRequired,
    ResourceCapExceeded,
    TrivialGroup,
)
from .groups import PermGroup, is_cyclic, poset_action, poset_permutations, sylow_subgroup
from .oracle import FINITE, INFINITE, UNKNOWN, RepTypeOracle
from .skew import ClassifierVerdict, _hyp, build_skew, field_block

CYCLE_SEARCH_CAP = 200_000


@dataclass
class FiniteCategory:
    """A finite category given by explicit tables.

    ``compose[(f, g)]`` is f∘g, present exactly when source(f) == target(g).
    """

    objects: list
    morphisms: list  # (source, target) object indices
    compose: dict
    identities: list
    labels: list = field(default_factory=list)

    def hom(self, x: int, y: int) -> list[int]:
        return [i for i, (s, t) in enumerate(self.morphisms) if s == x and t == y]

    def problems(self) -> list[str]:
        """Unit and associativity violations over the full table."""
        out = []
        src = [s for s, _ in self.morphisms]
        tgt = [t for _, t in self.morphisms]
        for f in range(len(self.morphisms)):
            if self.compose.get((self.identities[tgt[f]], f)) != f or \
                    self.compose.get((f, self.identities[src[f]])) != f:
                out.append(f"identity law fails for morphism {f}")
        for (f, g), fg in self.compose.items():
            if src[f] != tgt[g] or src[fg] != src[g] or tgt[fg] != tgt[f]:
                out.append(f"composite {f}∘{g} has the wrong ends")
            for h in range(len(self.morphisms)):
                if tgt[h] != src[g]:
                    continue
                gh = self.compose[(g, h)]
                if self.compose[(fg, h)] != self.compose[(f, gh)]:
                    out.append(f"associativity fails for ({f}, {g}, {h})")
        return out

    def full_subcategory(self, objs: Sequence[int]) -> tuple["FiniteCategory", list[int]]:
        objs = list(objs)
        pos = {o: i for i, o in enumerate(objs)}
        keep = [i for i, (s, t) in enumerate(self.morphisms) if s in pos and t in pos]
        new = {m: i for i, m in enumerate(keep)}
        comp = {(new[f], new[g]): new[fg] for (f, g), fg in self.compose.items() if f in new and g in new}
        cat = FiniteCategory(
            [self.objects[o] for o in objs],
            [(pos[self.morphisms[m][0]], pos[self.morphisms[m][1]]) for m in keep],
            comp,
            [new[self.identities[o]] for o in objs],
            [self.labels[m] for m in keep] if self.labels else [],
        )
        return cat, keep


def category_algebra_of(cat: FiniteCategory, char: int) -> Algebra:
    """Basis = morphisms; b_f * b_g = b_{f∘g} when composable, else 0."""
    n = len(cat.morphisms)
    mult = la.zeros((n, n, n), char)
    for (f, g), fg in cat.compose.items():
        mult[f, g, fg] = 1
    unit = la.zeros(n, char)
    idem = []
    for i in cat.identities:
        unit[i] = 1
        e = la.zeros(n, char)
        e[i] = 1
        idem.append(e)
    return Algebra(char, mult, unit, idem, list(cat.labels) or None, None, None,
                   {"kind": "category", "category": cat}, check=False)


def ei_check(cat: FiniteCategory) -> bool:
    """True iff every endomorphism has a two-sided inverse."""
    for x, ident in enumerate(cat.identities):
        ends = cat.hom(x, x)
        for f in ends:
            if not any(cat.compose[(f, g)] == ident and cat.compose[(g, f)] == ident for g in ends):
                return False
    return True


class TransporterCategory(FiniteCategory):
    def __init__(self, poset: PosetData, group: PermGroup, sigma: list[tuple[int, ...]], **kw):
        super().__init__(**kw)
        self.poset = poset
        self.group = group
        self.sigma = sigma  # group element permutations in poset indexing
        self.triples: list[tuple[int, int, int]] = []

    def stabilizer(self, x: int) -> list[int]:
        return [g for g, s in enumerate(self.sigma) if s[x] == x]

    def orbits(self) -> list[list[int]]:
        return poset_orbits(self.poset, self.sigma)


def poset_orbits(p: PosetData, sigma) -> list[list[int]]:
    seen, out = set(), []
    for x in range(len(p)):
        if x not in seen:
            orb = sorted({s[x] for s in sigma})
            seen.update(orb)
            out.append(orb)
    return out


def build_transporter(p: PosetData, group: PermGroup) -> TransporterCategory:
    sigma = poset_permutations(p, group)
    order = group.order
    pairs = p.comparable_pairs
    inv = [group.inv(g) for g in range(order)]
    triples = [(x, y, g) for (x, y) in pairs for g in range(order)]
    index = {t: i for i, t in enumerate(triples)}
    morphisms = [(sigma[inv[g]][x], y) for (x, y, g) in triples]
    by_target: dict[int, list[int]] = {}
    for i, (_, t) in enumerate(morphisms):
        by_target.setdefault(t, []).append(i)
    comp = {}
    for f, (x, y, g) in enumerate(triples):
        for h in by_target.get(morphisms[f][0], ()):
            a, _, k = triples[h]
            # (x->y, g)∘(a->b, k) = (g(a) -> y, gk)
            comp[(f, h)] = index[(sigma[g][a], y, group.mul(g, k))]
    labels = [_morphism_label(p, group, t) for t in triples]
    ids = [index[(x, x, 0)] for x in range(len(p))]
    cat = TransporterCategory(p, group, sigma, objects=list(p.elements), morphisms=morphisms,
                              compose=comp, identities=ids, labels=labels)
    cat.triples = triples
    return cat


def _morphism_label(p: PosetData, group: PermGroup, t) -> str:
    x, y, g = t
    return f"({p.elements[x]}<={p.elements[y]},g{g})"


@dataclass
class Skeleton:
    category: FiniteCategory
    representatives: list[int]
    morphism_map: list[int]

    def algebra(self, char: int) -> Algebra:
        return category_algebra_of(self.category, char)

    def to_json(self) -> dict:
        c = self.category
        homs = {f"{c.objects[x]}->{c.objects[y]}": len(c.hom(x, y))
                for x in range(len(c.objects)) for y in range(len(c.objects)) if c.hom(x, y)}
        return {"objects": [str(o) for o in c.objects], "hom_sizes": homs, "algebra_dim": len(c.morphisms)}


def skeleton(t: TransporterCategory) -> Skeleton:
    """Full subcategory on the least element of each G-orbit."""
    reps = [orb[0] for orb in t.orbits()]
    cat, keep = t.full_subcategory(reps)
    return Skeleton(cat, reps, keep)


def category_algebra(t: TransporterCategory, char: int, compare: bool = True) -> tuple[Algebra, dict]:
    """The category algebra kT, with a comparison against kP G when ``compare``."""
    alg = category_algebra_of(t, char)
    kp = build_incidence_algebra(t.poset, char)
    report = {"dim": alg.dim, "incidence_dim": kp.dim, "group_order": t.group.order,
              "dim_matches": alg.dim == kp.dim * t.group.order}
    if compare:
        sa = build_skew(kp, t.group, poset_action(kp, t.group), check=False)
        report["skew_dim"] = sa.algebra.dim
        report["structure_constants_equal"] = bool(np.array_equal(
            np.asarray(alg.mult, dtype=object), np.asarray(sa.algebra.mult, dtype=object)))
        report["fingerprint_equal"] = fingerprint(alg) == fingerprint(sa.algebra)
    return alg, report


def skeleton_report(t: TransporterCategory, char: int) -> dict:
    sk = skeleton(t)
    full, _ = category_algebra(t, char, compare=False)
    small = sk.algebra(char)
    return {**sk.to_json(), "morita_fingerprint": morita_fingerprint(small),
            "morita_fingerprint_matches": morita_fingerprint(small) == morita_fingerprint(full)}


# ----------------------------------------------------------------------
# witnesses for infinite type
# ----------------------------------------------------------------------


def is_free(sigma) -> bool:
    return all(all(s[x] != x for x in range(len(s))) for s in sigma[1:])


def _require_free(sigma):
    for g, s in enumerate(sigma[1:], start=1):
        for x in range(len(s)):
            if s[x] == x:
                raise FreeActionRequired(f"group element g{g} fixes element index {x}")


@dataclass
class ForkWitness:
    x: int
    y: int
    z: int
    g: int
    side: str  # "below" if x < y, z; "above" if x > y, z

    def to_json(self, p: PosetData, group: PermGroup) -> dict:
        e = p.elements
        return {"x": str(e[self.x]), "y": str(e[self.y]), "z": str(e[self.z]), "side": self.side,
                "g": group.describe(self.g), "g_index": self.g}


def fork_witness(p: PosetData, group: PermGroup) -> Optional[ForkWitness]:
    """Lexicographically first (x, y, z) with y != z on the same side of x and g(z) = y."""
    sigma = poset_permutations(p, group)
    _require_free(sigma)
    n = len(p)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if len({x, y, z}) < 3:
                    continue
                if p.less(x, y) and p.less(x, z):
                    side = "below"
                elif p.less(y, x) and p.less(z, x):
                    side = "above"
                else:
                    continue
                gs = [g for g, s in enumerate(sigma) if s[z] == y]
                if gs:
                    return ForkWitness(x, y, z, gs[0], side)
    return None


def check_fork_witness(p: PosetData, sigma, w: ForkWitness) -> list[str]:
    out = []
    if len({w.x, w.y, w.z}) < 3:
        out.append("x, y, z are not distinct")
    rel = p.less if w.side == "below" else (lambda a, b: p.less(b, a))
    if not (rel(w.x, w.y) and rel(w.x, w.z)):
        out.append("y and z are not on the stated side of x")
    if w.g == 0 or sigma[w.g][w.z] != w.y:
        out.append("g does not carry z to y")
    return out


def fork_morphisms(t: TransporterCategory, w: ForkWitness) -> tuple[int, int]:
    """Two distinct morphisms between the skeleton objects of x and y.

    Below: (x<y, 1) and (g(x)<y, g) in T(x, y).  Above: (y<x, 1) and
    (z<x, g^{-1}) in T(y, x).
    """
    idx = {tr: i for i, tr in enumerate(t.triples)}
    if w.side == "below":
        return idx[(w.x, w.y, 0)], idx[(t.sigma[w.g][w.x], w.y, w.g)]
    return idx[(w.y, w.x, 0)], idx[(w.z, w.x, t.group.inv(w.g))]


@dataclass
class CycleWitness:
    elements: list[int]
    g: int
    marks: list[str]
    path: list[int] = field(default_factory=list)

    def to_json(self, p: PosetData, group: PermGroup) -> dict:
        return {"cycle": [str(p.elements[i]) for i in self.elements], "marks": list(self.marks),
                "g": group.describe(self.g), "g_index": self.g,
                "path": [str(p.elements[i]) for i in self.path]}


def _comparable(p: PosetData, a: int, b: int) -> bool:
    return p.less(a, b) or p.less(b, a)


def check_cycle(p: PosetData, sigma, c: CycleWitness) -> list[str]:
    """Closure under <g>, self-avoidance and max/min alternation."""
    out = []
    els = c.elements
    n = len(els)
    if len(set(els)) != n:
        out.append("cycle self-intersects")
    if n < 4 or n % 2:
        out.append("cycle must have an even number >= 4 of elements")
    if c.g == 0 or {sigma[c.g][x] for x in els} != set(els):
        out.append("cycle is not closed under a nontrivial g")
    for i, x in enumerate(els):
        prev, nxt = els[i - 1], els[(i + 1) % n]
        if not (_comparable(p, x, prev) and _comparable(p, x, nxt)):
            out.append(f"consecutive elements around {p.elements[x]} are incomparable")
            continue
        want = "max" if p.less(prev, x) and p.less(nxt, x) else "min" if p.less(x, prev) and p.less(x, nxt) else None
        if want is None or c.marks[i] != want:
            out.append(f"element {p.elements[x]} is neither maximal nor minimal in the cycle")
    return out


def is_full_crown(p: PosetData, els: Sequence[int]) -> bool:
    """Within P, each cycle element is comparable only to its two neighbours."""
    n = len(els)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j - i) in (1, n - 1)
            if _comparable(p, els[i], els[j]) != adjacent:
                return False
    return True


def _preconditions(p: PosetData, group: PermGroup):
    sigma = poset_permutations(p, group)
    if not p.is_connected():
        raise ConnectedRequired("poset is not connected")
    if group.order == 1:
        raise TrivialGroup("group is trivial")
    _require_free(sigma)
    return sigma


def _bfs(p: PosetData, src: int) -> dict[int, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for v in p.neighbours(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def _lex_path(p: PosetData, x: int, y: int, dist_to_y: dict[int, int]) -> list[int]:
    path = [x]
    while path[-1] != y:
        d = dist_to_y[path[-1]]
        path.append(min(v for v in p.neighbours(path[-1]) if dist_to_y.get(v) == d - 1))
    return path


def _extremal_reduction(p: PosetData, cyc: list[int]) -> tuple[list[int], list[str]]:
    cur = list(cyc)
    while True:
        n = len(cur)
        keep = []
        for i, x in enumerate(cur):
            prev, nxt = cur[i - 1], cur[(i + 1) % n]
            if p.less(prev, x) and p.less(nxt, x):
                keep.append((x, "max"))
            elif p.less(x, prev) and p.less(x, nxt):
                keep.append((x, "min"))
        if len(keep) == n:
            return [x for x, _ in keep], [m for _, m in keep]
        cur = [x for x, _ in keep]


def glued_cycle(p: PosetData, group: PermGroup) -> CycleWitness:
    """Glue the translates of a shortest Hasse path between distinct orbit-mates."""
    sigma = _preconditions(p, group)
    n = len(p)
    orbit_of = {}
    for k, orb in enumerate(poset_orbits(p, sigma)):
        for x in orb:
            orbit_of[x] = k
    best = None
    dists = {y: _bfs(p, y) for y in range(n)}
    for x in range(n):
        for y in range(n):
            if x != y and orbit_of[x] == orbit_of[y]:
                cand = (dists[y][x], _lex_path(p, x, y, dists[y]))
                if best is None or cand < best:
                    best = cand
    gamma = best[1]
    x, y = gamma[0], gamma[-1]
    g = next(k for k, s in enumerate(sigma) if s[x] == y)
    loop, cur = [], list(gamma)
    while True:
        loop.extend(cur[:-1])
        if cur[-1] == x:
            break
        cur = [sigma[g][v] for v in cur]
    els, marks = _extremal_reduction(p, loop)
    w = CycleWitness(els, g, marks, gamma)
    problems = check_cycle(p, sigma, w)
    if problems:
        raise FreeActionRequired("cycle construction failed: " + "; ".join(problems))
    return w


def _canonical_cycle(els: list[int]) -> tuple[int, ...]:
    n = len(els)
    i = els.index(min(els))
    fwd = [els[(i + k) % n] for k in range(n)]
    bwd = [els[(i - k) % n] for k in range(n)]
    return tuple(min(fwd, bwd))


def minimal_crown_cycle(p: PosetData, sigma, bound: int, cap: int = CYCLE_SEARCH_CAP) -> Optional[CycleWitness]:
    """Shortest alternating max/min cycle closed under some g != 1, ties by element order."""
    n = len(p)
    comp = [[v for v in range(n) if _comparable(p, u, v)] for u in range(n)]
    found: dict[int, list[tuple]] = {}
    steps = 0

    def closed_under(els):
        s = set(els)
        for g in range(1, len(sigma)):
            if {sigma[g][x] for x in s} == s:
                return g
        return None

    def dfs(path, up):
        nonlocal steps
        steps += 1
        if steps > cap:
            raise ResourceCapExceeded(f"cycle search exceeded {cap} steps")
        u = path[-1]
        for v in comp[u]:
            if (p.less(u, v)) != up:
                continue
            if v == path[0] and len(path) >= 4 and len(path) % 2 == 0:
                g = closed_under(path)
                if g is not None:
                    found.setdefault(len(path), []).append((_canonical_cycle(path), g))
                continue
            if v <= path[0] or v in path or len(path) >= bound:
                continue
            dfs(path + [v], not up)

    for s in range(n):
        for up in (True, False):
            dfs([s], up)
    if not found:
        return None
    length = min(found)
    els, g = min(found[length])
    els = list(els)
    marks = ["max" if p.less(els[1], els[0]) else "min"]
    for _ in els[1:]:
        marks.append("min" if marks[-1] == "max" else "max")
    return CycleWitness(els, g, marks)


@dataclass
class FreeActionCertificate:
    case: str
    witness: Optional[ForkWitness] = None
    cycle: Optional[CycleWitness] = None
    full: Optional[bool] = None

    def to_json(self, p: PosetData, group: PermGroup) -> dict:
        out = {"case": self.case}
        if self.witness is not None:
            out["witness"] = self.witness.to_json(p, group)
        if self.cycle is not None:
            out["cycle"] = self.cycle.to_json(p, group)
            out["full_subposet"] = self.full
        return out


def free_action_certificate(p: PosetData, group: PermGroup) -> FreeActionCertificate:
    sigma = _preconditions(p, group)
    w = fork_witness(p, group)
    if w is not None:
        return FreeActionCertificate("fork", witness=w)
    first = glued_cycle(p, group)
    c = minimal_crown_cycle(p, sigma, bound=len(first.elements)) or first
    return FreeActionCertificate("crown", cycle=c, full=is_full_crown(p, c.elements))


def check_free_action_certificate(p: PosetData, group: PermGroup, cert: FreeActionCertificate) -> list[str]:
    sigma = poset_permutations(p, group)
    if cert.case == "fork":
        return check_fork_witness(p, sigma, cert.witness)
    out = check_cycle(p, sigma, cert.cycle)
    if not is_full_crown(p, cert.cycle.elements):
        out.append("cycle is not a full subposet")
    return out


# ----------------------------------------------------------------------
# classifier
# ----------------------------------------------------------------------


def classify_transporter(p: PosetData, group: PermGroup, char: int,
                         oracle: Optional[RepTypeOracle] = None) -> ClassifierVerdict:
    oracle = oracle or RepTypeOracle()
    poset_permutations(p, group)
    hyps = [
        _hyp("characteristic is not 2 or 3", "verified" if char not in (2, 3) else "failed", f"char {char}"),
        _hyp("the poset is connected", "verified" if p.is_connected() else "failed"),
    ]
    v = ClassifierVerdict("transporter-reptype", UNKNOWN, hypotheses=hyps, field=field_block(char))
    if char in (2, 3) or not p.is_connected():
        v.witness = {"reason": "hypothesis violated: " + ", ".join(h["hypothesis"] for h in hyps
                                                                   if h["status"] == "failed"),
                     "oracle_used": None}
        return v
    s = sylow_subgroup(group, char)
    invertible = s.order == 1
    if len(p) == 1:
        cyc = is_cyclic(s)
        v.answer = FINITE if cyc else INFINITE
        v.witness = {"case": "single object", "sylow_order": s.order, "sylow_cyclic": cyc,
                     "oracle_used": "cyclic Sylow criterion"}
        return v
    if invertible:
        res = oracle.poset(p)
        v.answer = res["answer"]
        v.witness = {"case": "group order invertible", "oracle": res, "oracle_used": res["oracle"]}
        return v
    s_sigma = poset_permutations(p, s)
    for g in range(1, s.order):
        fixed = [x for x in range(len(p)) if s_sigma[g][x] == x]
        if fixed:
            v.answer = INFINITE
            v.witness = {"case": "non-free Sylow action", "sylow_order": s.order,
                         "group_element": s.describe(g), "fixed_element": str(p.elements[fixed[0]]),
                         "oracle_used": None}
            return v
    cert = free_action_certificate(p, s)
    v.answer = INFINITE
    v.witness = {"case": "free Sylow action", "sylow_order": s.order, "certificate": cert.to_json(p, s),
                 "oracle_used": None}
    return v


def verify_transporter_verdict(p: PosetData, group: PermGroup, char: int, verdict: dict) -> list[str]:
    """Re-validate a classifier report from its JSON witness alone."""
    ans = verdict["verdict"]
    w = verdict["witness"]
    if ans == UNKNOWN:
        return []
    out = []
    if char in (2, 3) or not p.is_connected():
        return ["a verdict was issued outside the hypotheses"]
    s = sylow_subgroup(group, char)
    if ans == FINITE:
        if len(p) == 1:
            if not is_cyclic(s):
                out.append("single object but Sylow subgroup is not cyclic")
        elif s.order != 1:
            out.append("finite verdict although |G| is not invertible")
        elif RepTypeOracle().poset(p)["answer"] != FINITE and w.get("oracle", {}).get("answer") != FINITE:
            out.append("finite verdict without a finite poset verdict")
        return out
    case = w.get("case")
    names = {str(x): i for i, x in enumerate(p.elements)}
    if case == "single object":
        return [] if not is_cyclic(s) else ["Sylow subgroup is cyclic"]
    if case == "group order invertible":
        return [] if w["oracle"]["answer"] == INFINITE else ["oracle did not report infinite"]
    if case == "non-free Sylow action":
        perm = _perm_from_json(p, s, w["group_element"])
        x = names[w["fixed_element"]]
        if perm is None or perm[x] != x or all(perm[i] == i for i in range(len(p))):
            out.append("non-free witness does not fix the stated element nontrivially")
        return out
    if case == "free Sylow action":
        cert = w["certificate"]
        s_sigma = poset_permutations(p, s)
        if not is_free(s_sigma):
            return ["Sylow action is not free"]
        if cert["case"] == "fork":
            c = cert["witness"]
            g = s_sigma.index(_perm_from_json(p, s, c["g"]))
            lw = ForkWitness(names[c["x"]], names[c["y"]], names[c["z"]], g, c["side"])
            return check_fork_witness(p, s_sigma, lw)
        c = cert["cycle"]
        g = s_sigma.index(_perm_from_json(p, s, c["g"]))
        cw = CycleWitness([names[x] for x in c["cycle"]], g, c["marks"])
        out = check_cycle(p, s_sigma, cw)
        if not is_full_crown(p, cw.elements):
            out.append("cycle is not a full subposet")
        return out
    return [f"unrecognised certificate case {case!r}"]


def _perm_from_json(p: PosetData, group: PermGroup, table: dict):
    names = [str(x) for x in p.elements]
    img = [0] * len(p)
    for a, b in table.items():
        img[names.index(a)] = names.index(b)
    t = tuple(img)
    return t if t in poset_permutations(p, group) else None


__all__ = [
    "FiniteCategory",
    "TransporterCategory",
    "Skeleton",
    "ForkWitness",
    "CycleWitness",
    "FreeActionCertificate",
    "build_transporter",
    "category_algebra",
    "category_algebra_of",
    "ei_check",
    "skeleton",
    "skeleton_report",
    "fork_witness",
    "fork_morphisms",
    "glued_cycle",
    "minimal_crown_cycle",
    "free_action_certificate",
    "check_free_action_certificate",
    "check_cycle",
    "check_fork_witness",
    "is_full_crown",
    "classify_transporter",
    "verify_transporter_verdict",
]
