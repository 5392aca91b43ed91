"""Finite permutation groups and their actions on algebras by automorphisms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, PosetData, path_element, subalgebra, vertex_element
from .errors import ActionError, ENotClosed, GroupTooLarge, InvalidPermutation, InvalidPrime, NotAPosetAction

DEFAULT_ORDER_CAP = 5040

Perm = tuple[int, ...]


def compose(g: Perm, h: Perm) -> Perm:
    """g after h."""
    return tuple(g[x] for x in h)


def invert(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


class PermGroup:
    """Explicitly enumerated permutation group; element 0 is the identity."""

    def __init__(self, domain: Sequence, elements: Sequence[Perm], generators: Sequence[int] = (),
                 parent_index: Optional[Sequence[int]] = None, tree: Optional[list] = None):
        self.domain = list(domain)
        self.elements = [tuple(e) for e in elements]
        self.generators = list(generators)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.parent_index = list(parent_index) if parent_index is not None else None
        # tree[i] = (parent element index, generator position) with elements[i] = gen ∘ parent
        self.tree = tree

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.index[compose(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self.index[invert(self.elements[i])]

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.mul(i, cur)
            k += 1
        return k

    def apply(self, i: int, x: int) -> int:
        return self.elements[i][x]

    def describe(self, i: int) -> dict:
        """Image table of element i, keyed by domain names."""
        return {str(self.domain[x]): str(self.domain[y]) for x, y in enumerate(self.elements[i])}

    def subgroup(self, indices: Sequence[int]) -> "PermGroup":
        idx = sorted(set(indices))
        if idx[0] != 0:
            idx = [0] + [i for i in idx if i != 0]
        return PermGroup(self.domain, [self.elements[i] for i in idx], (), idx)

    def generated_by(self, indices: Sequence[int]) -> list[int]:
        seen = {0}
        queue = deque([0])
        while queue:
            cur = queue.popleft()
            for g in indices:
                nxt = self.mul(g, cur)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return sorted(seen)

    def __repr__(self):
        return f"PermGroup(order={self.order}, degree={len(self.domain)})"


def _as_perm(domain: Sequence, gen) -> Perm:
    n = len(domain)
    pos = {x: i for i, x in enumerate(domain)}
    if isinstance(gen, dict):
        img = list(range(n))
        for a, b in gen.items():
            if a not in pos or b not in pos:
                raise InvalidPermutation(f"generator maps {a!r} -> {b!r} outside the domain")
            img[pos[a]] = pos[b]
    else:
        gen = list(gen)
        if len(gen) != n:
            raise InvalidPermutation(f"generator has {len(gen)} images for a domain of size {n}")
        if all(x in pos for x in gen):
            img = [pos[x] for x in gen]
        elif all(isinstance(x, int) and 0 <= x < n for x in gen):
            img = list(gen)
        else:
            raise InvalidPermutation(f"generator images {gen!r} are not domain points")
    if sorted(img) != list(range(n)):
        raise InvalidPermutation(f"generator {gen!r} is not a bijection")
    return tuple(img)


def generate_group(domain: Sequence, generators: Sequence, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Close the generators under composition, in breadth-first discovery order."""
    gens = [_as_perm(domain, g) for g in generators]
    ident = tuple(range(len(domain)))
    elements, index, tree = [ident], {ident: 0}, [None]
    queue = deque([0])
    while queue:
        cur = queue.popleft()
        for k, g in enumerate(gens):
            nxt = compose(g, elements[cur])
            if nxt not in index:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"group order exceeds cap {cap}")
                index[nxt] = len(elements)
                elements.append(nxt)
                tree.append((cur, k))
                queue.append(index[nxt])
    gen_idx = [index[g] for g in gens]
    return PermGroup(domain, elements, gen_idx, tree=tree)


def trivial_group(domain: Sequence = ("*",)) -> PermGroup:
    return generate_group(domain, [])


def _prime_power_exponent(n: int, p: int) -> int:
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return a


def sylow_subgroup(g: PermGroup, p: int) -> PermGroup:
    """A Sylow p-subgroup; trivial when p = 0 or p does not divide |G|.

    Greedy extension over p-elements in element order: every p-subgroup lies
    in a Sylow subgroup, so extension only stops at full order.
    """
    if p < 0 or (p > 0 and not la.is_prime(p)):
        raise InvalidPrime(f"{p} is not 0 or a prime")
    if p == 0 or g.order % p:
        return g.subgroup([0])
    target = p ** _prime_power_exponent(g.order, p)
    pelts = [i for i in range(1, g.order) if _is_p_power(g.element_order(i), p)]
    current = [0]
    gens: list[int] = []
    while len(current) < target:
        cur_set = set(current)
        for x in pelts:
            if x in cur_set:
                continue
            cand = g.generated_by(gens + [x])
            if _is_p_power(len(cand), p):
                gens.append(x)
                current = cand
                break
        else:  # pragma: no cover - excluded by Sylow's theorem
            raise RuntimeError("Sylow extension stalled")
    sub = g.subgroup(current)
    sub.generators = [sub.parent_index.index(x) for x in gens]
    return sub


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def is_cyclic(g: PermGroup) -> bool:
    return any(g.element_order(i) == g.order for i in range(g.order))


def subgroup_generators(h: PermGroup) -> list[int]:
    """Generators of a subgroup (indices into h), greedily chosen."""
    if h.generators:
        return list(h.generators)
    gens: list[int] = []
    span = {0}
    for i in range(1, h.order):
        if i not in span:
            gens.append(i)
            span = set(h.generated_by(gens))
    return gens


# ----------------------------------------------------------------------
# actions on algebras
# ----------------------------------------------------------------------


@dataclass
class AlgebraAction:
    """One automorphism matrix per group element (columns = images of basis vectors)."""

    algebra: Algebra
    group: PermGroup
    maps: list[np.ndarray]
    e_closed: bool = True
    meta: dict = field(default_factory=dict)

    def apply(self, g: int, x: np.ndarray) -> np.ndarray:
        return la.matmul(self.maps[g], x, self.algebra.char)

    def restrict(self, h: PermGroup) -> "AlgebraAction":
        """Action of a subgroup created by :meth:`PermGroup.subgroup`."""
        return AlgebraAction(self.algebra, h, [self.maps[i] for i in h.parent_index], self.e_closed,
                             dict(self.meta))

    @cached_property
    def idempotent_permutations(self) -> list[Optional[tuple[int, ...]]]:
        """For each group element, the induced permutation of E, or None."""
        a = self.algebra
        out = []
        for m in self.maps:
            perm = []
            for e in a.idempotents:
                img = la.matmul(m, e, a.char)
                j = next((j for j, f in enumerate(a.idempotents) if a.eq(img, f)), None)
                if j is None:
                    perm = None
                    break
                perm.append(j)
            out.append(tuple(perm) if perm is not None else None)
        return out

    def is_e_closed(self) -> bool:
        return all(p is not None for p in self.idempotent_permutations)


def extend_from_generators(alg: Algebra, group: PermGroup, gen_maps: Sequence[np.ndarray]) -> AlgebraAction:
    """Extend generator matrices along the BFS tree and check well-definedness."""
    p = alg.char
    if len(gen_maps) != len(group.generators):
        raise ActionError(f"{len(gen_maps)} generator maps for {len(group.generators)} group generators")
    gen_maps = [la.asarray(m, p) for m in gen_maps]
    for m in gen_maps:
        if m.shape != (alg.dim, alg.dim):
            raise ActionError(f"generator map has shape {m.shape}, expected {(alg.dim, alg.dim)}")
    if group.tree is None:
        raise ActionError("group has no generator tree; build it with generate_group")
    maps: list[Optional[np.ndarray]] = [None] * group.order
    maps[0] = la.eye(alg.dim, p)
    for i in range(1, group.order):
        parent, k = group.tree[i]
        maps[i] = la.matmul(gen_maps[k], maps[parent], p)
    pos = {g: k for k, g in enumerate(group.generators)}
    for i in range(group.order):
        for g, k in pos.items():
            j = group.mul(g, i)
            if np.any(la.matmul(gen_maps[k], maps[i], p) != maps[j]):
                raise ActionError(
                    "generator maps are not compatible with the group: two words for the same element "
                    f"({group.describe(j)}) give different algebra maps"
                )
    act = AlgebraAction(alg, group, maps)
    act.e_closed = act.is_e_closed()
    return act


def trivial_action(alg: Algebra, group: PermGroup) -> AlgebraAction:
    return AlgebraAction(alg, group, [la.eye(alg.dim, alg.char) for _ in range(group.order)])


def poset_permutations(p: PosetData, group: PermGroup) -> list[tuple[int, ...]]:
    """Group elements rewritten as permutations of poset indices; checks monotonicity.

    The group domain may contain points beyond the poset elements (to encode
    a non-faithful action); the poset elements must then be a union of orbits.
    """
    names = [str(x) for x in p.elements]
    dom = [str(x) for x in group.domain]
    if not set(names) <= set(dom) or len(set(dom)) != len(dom):
        raise NotAPosetAction("group domain must contain the poset elements")
    to_p = {d: names.index(x) for d, x in enumerate(dom) if x in names}
    out = []
    for k, perm in enumerate(group.elements):
        s = [0] * len(names)
        for d, i in to_p.items():
            if perm[d] not in to_p:
                raise NotAPosetAction(f"group element {group.describe(k)} moves a poset element off the poset")
            s[i] = to_p[perm[d]]
        if not p.is_automorphism(s):
            raise NotAPosetAction(f"group element {group.describe(k)} does not preserve the order")
        out.append(tuple(s))
    return out


def poset_action(alg: Algebra, group: PermGroup) -> AlgebraAction:
    """Action on an incidence algebra induced by permuting poset elements.

    The group's domain must contain the poset elements (matched by name).
    """
    pidx = alg.meta["pair_index"]
    maps = []
    for sigma in poset_permutations(alg.meta["poset"], group):
        m = la.zeros((alg.dim, alg.dim), alg.char)
        for (a, b), col in pidx.items():
            m[pidx[(sigma[a], sigma[b])], col] = 1
        maps.append(m)
    act = AlgebraAction(alg, group, maps)
    act.e_closed = act.is_e_closed()
    return act


def path_action(alg: Algebra, group: PermGroup, generator_maps: Sequence[dict]) -> AlgebraAction:
    """Action on a path algebra from per-generator vertex permutations and arrow images.

    ``arrow_images[arrow]`` is a list of ``(coefficient, path)`` terms; arrows
    not listed are fixed.  Images of longer paths are products of arrow images.
    """
    q = alg.meta["quiver"]
    mats = []
    for gm in generator_maps:
        vperm = {v: v for v in q.vertices}
        vperm.update(gm.get("vertex_perm", {}))
        images = {}
        for name, _, _ in q.arrows:
            terms = gm.get("arrow_images", {}).get(name, [(1, (name,))])
            v = alg.zero()
            for c, path in terms:
                path = tuple(path)
                if any(a not in q.arrow_map for a in path):
                    raise ActionError(f"arrow image for {name} mentions an unknown arrow")
                v = la.reduce(v + la.scalar(c, alg.char) * path_element(alg, path), alg.char)
            images[name] = v
        m = la.zeros((alg.dim, alg.dim), alg.char)
        for col, path in enumerate(alg.meta["basis_paths"]):
            if not path:
                v = q.vertices[col]
                if vperm[v] not in alg.meta["vertex_index"]:
                    raise ActionError(f"vertex permutation sends {v} outside the quiver")
                m[:, col] = vertex_element(alg, vperm[v])
            else:
                img = images[path[0]]
                for arrow in path[1:]:
                    img = alg.mul(img, images[arrow])
                m[:, col] = img
        mats.append(m)
    act = extend_from_generators(alg, group, mats)
    act.meta["generator_maps"] = list(generator_maps)
    return act


def verify_action(act: AlgebraAction, grp: Optional[PermGroup] = None, require_e_closed: bool = False) -> list[str]:
    """List of violated action axioms; empty means the action is valid."""
    grp = grp or act.group
    a = act.algebra
    p = a.char
    problems = []
    if len(act.maps) != grp.order:
        return [f"expected {grp.order} maps, got {len(act.maps)}"]
    for gi, m in enumerate(act.maps):
        name = grp.describe(gi)
        if la.rank_raw(m, p) != a.dim:
            problems.append(f"map of {name} is not invertible")
            continue
        if not a.eq(la.matmul(m, a.unit, p), a.unit):
            problems.append(f"map of {name} does not preserve the unit")
        images = [m[:, i] for i in range(a.dim)]
        bad = False
        for i in range(a.dim):
            for j in range(a.dim):
                if not a.eq(la.matmul(m, a.mult[i, j], p), a.mul(images[i], images[j])):
                    problems.append(f"map of {name} does not preserve the product {a.labels[i]}*{a.labels[j]}")
                    bad = True
                    break
            if bad:
                break
    for gi in range(grp.order):
        for hi in range(grp.order):
            if np.any(la.matmul(act.maps[gi], act.maps[hi], p) != act.maps[grp.mul(gi, hi)]):
                problems.append(f"map(g)map(h) != map(gh) for g={grp.describe(gi)}, h={grp.describe(hi)}")
                break
        else:
            continue
        break
    if require_e_closed and not act.is_e_closed():
        problems.append("E is not closed under the action")
    return problems


@dataclass
class OrbitData:
    orbits: list[list[int]]
    representatives: list[int]
    epsilon: np.ndarray


def idempotent_orbits(act: AlgebraAction, grp: Optional[PermGroup] = None) -> OrbitData:
    grp = grp or act.group
    perms = act.idempotent_permutations
    if any(pp is None for pp in perms):
        raise ENotClosed("E is not closed under the group action")
    n = len(act.algebra.idempotents)
    seen: set[int] = set()
    orbits = []
    for i in range(n):
        if i in seen:
            continue
        orb = sorted({perms[g][i] for g in range(grp.order)})
        seen.update(orb)
        orbits.append(orb)
    reps = [o[0] for o in orbits]
    eps = act.algebra.zero()
    for r in reps:
        eps = la.reduce(eps + act.algebra.idempotents[r], act.algebra.char)
    return OrbitData(orbits, reps, eps)


def is_free_on_idempotents(act: AlgebraAction, grp: Optional[PermGroup] = None) -> tuple[bool, Optional[tuple[int, int]]]:
    """(True, None) if no non-identity element fixes an e_i; else (False, (g, i))."""
    grp = grp or act.group
    perms = act.idempotent_permutations
    if any(pp is None for pp in perms):
        raise ENotClosed("E is not closed under the group action")
    for g in range(1, grp.order):
        for i, j in enumerate(perms[g]):
            if i == j:
                return False, (g, i)
    return True, None


def fixed_subalgebra(act: AlgebraAction, grp: Optional[PermGroup] = None):
    """Λ^G with its embedding matrix into Λ.

    When E is closed, the orbit sums of E are taken as the idempotent set of
    the fixed subalgebra.
    """
    grp = grp or act.group
    a = act.algebra
    p = a.char
    gens = subgroup_generators(grp) or [0]
    kernels = [la.kernel_raw(la.reduce(act.maps[g] - la.eye(a.dim, p), p), p) for g in gens]
    space = la.intersect_raw(kernels, p)
    if act.is_e_closed():
        orbs = idempotent_orbits(act, grp)
        idem = []
        for o in orbs.orbits:
            s = a.zero()
            for i in o:
                s = la.reduce(s + a.idempotents[i], p)
            idem.append(s)
    else:
        idem = [a.unit]
    emb, piv = la.colspace(space, p)
    sub, emb = subalgebra(a, emb, idem)
    return sub, emb
