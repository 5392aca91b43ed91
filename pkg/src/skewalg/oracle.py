"""Pluggable representation-type oracles for posets, algebras and groups.

Built-in knowledge is deliberately small; anything else comes from a JSON
data file of known verdicts keyed by a canonical poset hash or an algebra
fingerprint.  Unrecognised inputs return ``unknown``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from typing import Optional

from .algebra import Algebra, PosetData, fingerprint, is_local, truncated_polynomial_iso
from .groups import PermGroup, is_cyclic, sylow_subgroup

FINITE, INFINITE, UNKNOWN = "finite", "infinite", "unknown"


def canonical_poset_form(p: PosetData) -> tuple[int, str]:
    """Relabelling-invariant encoding of the order relation."""
    n = len(p)
    leq = p.leq
    sig = [(int(leq[:, i].sum()), int(leq[i, :].sum())) for i in range(n)]
    cells: dict[tuple, list[int]] = {}
    for i, s in enumerate(sig):
        cells.setdefault(s, []).append(i)
    keys = sorted(cells)
    best = None
    for combo in itertools.product(*(itertools.permutations(cells[k]) for k in keys)):
        order = [i for part in combo for i in part]
        bits = "".join("1" if leq[a, b] else "0" for a in order for b in order)
        if best is None or bits < best:
            best = bits
    return n, best or ""


def poset_hash(p: PosetData) -> str:
    n, bits = canonical_poset_form(p)
    return hashlib.sha256(f"{n}:{bits}".encode()).hexdigest()


def _hasse_graph(p: PosetData) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {i: set() for i in range(len(p))}
    for a, b in p.cover_edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _is_chain(p: PosetData) -> bool:
    n = len(p)
    return all(p.leq[i, j] or p.leq[j, i] for i in range(n) for j in range(n))


def _tree_is_dynkin(adj: dict[int, set[int]]) -> bool:
    degs = {v: len(nb) for v, nb in adj.items()}
    if any(d > 3 for d in degs.values()):
        return False
    branch = [v for v, d in degs.items() if d == 3]
    if len(branch) > 1:
        return False
    if not branch:
        return True  # type A
    c = branch[0]
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while degs[cur] == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    return sum(1 / (a + 1) for a in arms) > 1


def _is_crown(p: PosetData, adj) -> bool:
    n = len(p)
    if n < 4 or any(len(nb) != 2 for nb in adj.values()):
        return False
    # every element is maximal or minimal
    return all(not (any(p.less(j, i) for j in range(n)) and any(p.less(i, j) for j in range(n))) for i in range(n))


def find_full_crown(p: PosetData, cap: int = 100_000) -> Optional[list[int]]:
    """An alternating cycle whose elements are comparable only to their two neighbours."""
    n = len(p)
    comp = [[v for v in range(n) if p.less(u, v) or p.less(v, u)] for u in range(n)]
    steps = 0

    def full(path):
        m = len(path)
        return all(
            (p.less(path[i], path[j]) or p.less(path[j], path[i])) == ((j - i) in (1, m - 1))
            for i in range(m) for j in range(i + 1, m)
        )

    def dfs(path, up):
        nonlocal steps
        steps += 1
        if steps > cap:
            return None
        u = path[-1]
        for v in comp[u]:
            if p.less(u, v) != up:
                continue
            if v == path[0] and len(path) >= 4 and len(path) % 2 == 0 and full(path):
                return path
            if v <= path[0] or v in path:
                continue
            # a chord back into the path can never close to a full cycle
            if any(p.less(v, w) or p.less(w, v) for w in path[1:-1]):
                continue
            hit = dfs(path + [v], not up)
            if hit:
                return hit
        return None

    for s in range(n):
        hit = dfs([s], True)
        if hit:
            return hit
    return None


def builtin_poset_verdict(p: PosetData) -> tuple[str, str]:
    if not p.is_connected():
        return UNKNOWN, "disconnected poset"
    if _is_chain(p):
        return FINITE, "chain: incidence algebra is a linearly oriented type A path algebra"
    adj = _hasse_graph(p)
    edges = sum(len(v) for v in adj.values()) // 2
    if edges == len(p) - 1:
        if _tree_is_dynkin(adj):
            return FINITE, "Hasse diagram is a Dynkin tree"
        return INFINITE, "Hasse diagram is a non-Dynkin tree"
    if _is_crown(p, adj):
        return INFINITE, "crown: incidence algebra is a Euclidean type A path algebra"
    crown = find_full_crown(p)
    if crown is not None:
        names = ", ".join(str(p.elements[i]) for i in crown)
        return INFINITE, f"contains the full crown subposet ({names})"
    return UNKNOWN, "no built-in rule applies"


def _uniserial_projectives(a: Algebra) -> bool:
    from .modules import indecomposable_projective, projective_cover, radical_submodule, submodule

    for c in range(len(a.idempotent_classes)):
        cur = indecomposable_projective(a, c)
        while cur.dim:
            rad = radical_submodule(cur)
            if len(projective_cover(cur).summands) != 1:
                return False
            cur, _ = submodule(cur, rad)
    return True


def builtin_algebra_verdict(a: Algebra) -> tuple[str, str]:
    if a.rad.shape[1] == 0:
        return FINITE, "semisimple"
    grp = a.meta.get("group_algebra")
    if grp is not None:
        v, why = group_verdict(grp, a.char)
        return v, why
    if is_local(a) and truncated_polynomial_iso(a) is not None:
        return FINITE, f"isomorphic to k[X]/(X^{a.dim})"
    from .modules import opposite_algebra

    if _uniserial_projectives(a) and _uniserial_projectives(opposite_algebra(a)):
        return FINITE, "Nakayama algebra (all indecomposable projectives uniserial on both sides)"
    return UNKNOWN, "no built-in rule applies"


def group_verdict(g: PermGroup, char: int) -> tuple[str, str]:
    s = sylow_subgroup(g, char)
    if is_cyclic(s):
        return FINITE, f"Sylow {char}-subgroup of order {s.order} is cyclic"
    return INFINITE, f"Sylow {char}-subgroup of order {s.order} is not cyclic"


class RepTypeOracle:
    """Combines built-in rules with a data file of known verdicts.

    Data file format::

        {"posets": [{"elements": [...], "leq": [[a, b], ...], "type": "finite"}],
         "algebras": [{"fingerprint": {...}, "type": "infinite"}]}
    """

    def __init__(self, data: Optional[dict] = None, source: str = "built-in"):
        self.source = source
        self.posets: dict[str, str] = {}
        self.poset_sizes: set[int] = set()
        self.algebras: list[tuple[dict, str]] = []
        for entry in (data or {}).get("posets", []):
            p = PosetData(entry["elements"], [tuple(x) for x in entry.get("leq", [])])
            self.posets[poset_hash(p)] = _check_type(entry["type"])
            self.poset_sizes.add(len(p))
        for entry in (data or {}).get("algebras", []):
            self.algebras.append((entry["fingerprint"], _check_type(entry["type"])))

    @classmethod
    def from_file(cls, path: str) -> "RepTypeOracle":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh), source=str(path))

    def poset(self, p: PosetData) -> dict:
        # the canonical form is expensive, so it is only computed when an entry could match
        if len(p) in self.poset_sizes:
            h = poset_hash(p)
            if h in self.posets:
                return {"answer": self.posets[h], "reason": "data file", "poset_hash": h, "oracle": self.source}
        v, why = builtin_poset_verdict(p)
        return {"answer": v, "reason": why, "oracle": "built-in"}

    def algebra(self, a: Algebra) -> dict:
        v, why = builtin_algebra_verdict(a)
        if v != UNKNOWN:
            return {"answer": v, "reason": why, "oracle": "built-in"}
        if a.meta.get("kind") == "incidence":
            res = self.poset(a.meta["poset"])
            if res["answer"] != UNKNOWN:
                return res
        if self.algebras:
            fp = fingerprint(a)
            for known, t in self.algebras:
                if all(fp.get(k) == v for k, v in known.items()):
                    return {"answer": t, "reason": "data file fingerprint match", "oracle": self.source}
        return {"answer": UNKNOWN, "reason": why, "oracle": "built-in"}

    def group(self, g: PermGroup, char: int) -> dict:
        v, why = group_verdict(g, char)
        return {"answer": v, "reason": why, "oracle": "cyclic Sylow criterion"}


def _check_type(t: str) -> str:
    if t not in (FINITE, INFINITE):
        raise ValueError(f"oracle type must be 'finite' or 'infinite', got {t!r}")
    return t


__all__ = [
    "FINITE",
    "INFINITE",
    "UNKNOWN",
    "RepTypeOracle",
    "poset_hash",
    "canonical_poset_form",
    "builtin_poset_verdict",
    "find_full_crown",
    "builtin_algebra_verdict",
    "group_verdict",
]
