"""Constructors for the worked examples and random test instances."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from skewalg import linalg as la
from skewalg.algebra import (
    Algebra,
    PosetData,
    QuiverPresentation,
    build_incidence_algebra,
    build_path_algebra,
    truncated_polynomial,
)
from skewalg.groups import (
    AlgebraAction,
    PermGroup,
    generate_group,
    path_action,
    poset_action,
    trivial_action,
)


@dataclass
class Instance:
    algebra: Algebra
    group: PermGroup
    action: AlgebraAction
    name: str = ""


def rotation_example(char: int = 5) -> Instance:
    vs = [str(i) for i in range(1, 6)]
    names = ["alpha", "beta", "gamma", "delta", "theta"]
    q = QuiverPresentation(vs, [(names[i], vs[i], vs[(i + 1) % 5]) for i in range(5)],
                           [((1, (names[(i + 1) % 5], names[i])),) for i in range(5)])
    a = build_path_algebra(q, char)
    g = generate_group(vs, [[vs[(i + 1) % 5] for i in range(5)]])
    act = path_action(a, g, [{"vertex_perm": {vs[i]: vs[(i + 1) % 5] for i in range(5)},
                              "arrow_images": {names[i]: [(1, (names[(i + 1) % 5],))] for i in range(5)}}])
    return Instance(a, g, act, "rotation")


def swap_example(char: int = 2) -> Instance:
    q = QuiverPresentation(["x", "y"], [("beta", "x", "y"), ("delta", "y", "x")],
                           [((1, ("delta", "beta")),), ((1, ("beta", "delta")),)])
    a = build_path_algebra(q, char)
    g = generate_group(["x", "y"], [["y", "x"]])
    act = path_action(a, g, [{"vertex_perm": {"x": "y", "y": "x"},
                              "arrow_images": {"beta": [(1, ("delta",))], "delta": [(1, ("beta",))]}}])
    return Instance(a, g, act, "swap")


def a2(char: int) -> Algebra:
    return build_path_algebra(QuiverPresentation(["x", "y"], [("alpha", "x", "y")], []), char)


def cyclic(n: int, domain=None) -> PermGroup:
    domain = list(domain or range(n))
    return generate_group(domain, [domain[1:] + domain[:1]])


def a2_trivial_example(char: int) -> Instance:
    a = a2(char)
    g = cyclic(2, ["a", "b"])
    return Instance(a, g, trivial_action(a, g), "a2-trivial")


def linear_cycle_quiver(n: int, char: int, rad_sq_zero: bool = True) -> QuiverPresentation:
    vs = [f"v{i}" for i in range(n)]
    arrows = [(f"a{i}", vs[i], vs[(i + 1) % n]) for i in range(n)]
    rels = [((1, (f"a{(i + 1) % n}", f"a{i}")),) for i in range(n)] if rad_sq_zero else []
    return QuiverPresentation(vs, arrows, rels)


def cycle_rotation(n: int, step: int, char: int) -> Instance:
    """Radical-square-zero cyclic quiver on n vertices rotated by ``step``."""
    q = linear_cycle_quiver(n, char)
    a = build_path_algebra(q, char)
    vs = list(q.vertices)
    g = generate_group(vs, [[vs[(i + step) % n] for i in range(n)]])
    act = path_action(a, g, [{"vertex_perm": {vs[i]: vs[(i + step) % n] for i in range(n)},
                              "arrow_images": {f"a{i}": [(1, (f"a{(i + step) % n}",))] for i in range(n)}}])
    return Instance(a, g, act, f"cycle{n}-step{step}")


def two_loops_swap(char: int) -> Instance:
    """Two vertices, a loop at each with square zero, swapped."""
    q = QuiverPresentation(["x", "y"], [("u", "x", "x"), ("v", "y", "y")],
                           [((1, ("u", "u")),), ((1, ("v", "v")),)])
    a = build_path_algebra(q, char)
    g = generate_group(["x", "y"], [["y", "x"]])
    act = path_action(a, g, [{"vertex_perm": {"x": "y", "y": "x"},
                              "arrow_images": {"u": [(1, ("v",))], "v": [(1, ("u",))]}}])
    return Instance(a, g, act, "two-loops-swap")


def kronecker_pair_swap(char: int) -> Instance:
    """Four vertices x1 -> y1, x2 -> y2 with the pair swapped, plus cross arrows."""
    q = QuiverPresentation(["x1", "x2", "y1", "y2"],
                           [("a1", "x1", "y1"), ("a2", "x2", "y2"), ("b1", "x1", "y2"), ("b2", "x2", "y1")], [])
    a = build_path_algebra(q, char)
    g = generate_group(["x1", "x2", "y1", "y2"], [["x2", "x1", "y2", "y1"]])
    act = path_action(a, g, [{"vertex_perm": {"x1": "x2", "x2": "x1", "y1": "y2", "y2": "y1"},
                              "arrow_images": {x: [(1, (y,))] for x, y in
                                               (("a1", "a2"), ("a2", "a1"), ("b1", "b2"), ("b2", "b1"))}}])
    return Instance(a, g, act, "kronecker-pair-swap")


def crown_poset(k: int) -> PosetData:
    """2k-crown: odd elements below their two neighbours."""
    els = list(range(1, 2 * k + 1))
    rel = []
    for i in range(0, 2 * k, 2):
        lo = els[i]
        rel.append((lo, els[i + 1]))
        rel.append((lo, els[i - 1]))
    return PosetData(els, rel)


def poset_instance(p: PosetData, gens, char: int, name: str = "") -> Instance:
    a = build_incidence_algebra(p, char)
    g = generate_group(list(p.elements), gens)
    return Instance(a, g, poset_action(a, g), name)


def dual_numbers(char: int) -> Algebra:
    return truncated_polynomial(2, char)


# ----------------------------------------------------------------------
# random objects
# ----------------------------------------------------------------------


def random_matrix(rng: random.Random, rows: int, cols: int, char: int) -> np.ndarray:
    if char:
        return la.asarray([[rng.randrange(char) for _ in range(cols)] for _ in range(rows)], char)
    return la.asarray([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)], char)


def random_module(rng: random.Random, a: Algebra, copies: int = 1, relations: int = 1):
    """Quotient of a free module by a submodule generated by random radical vectors.

    Relations inside the radical keep the top, so the result is never zero.
    """
    from skewalg.modules import direct_sum, generated_submodule, quotient_module, radical_submodule, regular_module

    free = direct_sum(*([regular_module(a)] * copies))
    rad = radical_submodule(free)
    if rad.shape[1] == 0 or relations == 0:
        return free
    coeffs = random_matrix(rng, rad.shape[1], relations, a.char)
    sub = generated_submodule(free, la.matmul(rad, coeffs, a.char))
    return quotient_module(free, sub)[0]


# poset / group pairs for transporter categories


def star():
    p = PosetData(["m", "x", "y", "z"], [("m", "x"), ("m", "y"), ("m", "z")])
    return p, generate_group(p.elements, [{"x": "y", "y": "z", "z": "x"}])


def bipartite(k):
    """Complete bipartite poset: odd elements below even ones, rotated by n -> n + 2."""
    els = list(range(1, 2 * k + 1))
    p = PosetData(els, [(a, c) for a in els[::2] for c in els[1::2]])
    return p, generate_group(els, [{n: (n + 1) % (2 * k) + 1 for n in els}])


def crown(k, step):
    p = crown_poset(k)
    els = list(p.elements)
    return p, generate_group(els, [[els[(i + step) % (2 * k)] for i in range(2 * k)]])


def two_chains():
    p = PosetData(["1", "2", "1'", "2'"], [("1", "2"), ("1'", "2'")])
    return p, generate_group(p.elements, [{"1": "1'", "1'": "1", "2": "2'", "2'": "2"}])


def pendant_square():
    """Square 1,3 < 2,4 with a pendant below each minimum and above each maximum, swapped."""
    p = PosetData(list(range(1, 9)), [(1, 2), (3, 2), (3, 4), (1, 4), (5, 1), (7, 3), (2, 6), (4, 8)])
    return p, generate_group(p.elements, [{1: 3, 3: 1, 2: 4, 4: 2, 5: 7, 7: 5, 6: 8, 8: 6}])


def fan(n):
    """One element below n others, the n upper elements rotated cyclically."""
    els = ["m"] + [f"x{i}" for i in range(n)]
    p = PosetData(els, [("m", x) for x in els[1:]])
    return p, generate_group(els, [{f"x{i}": f"x{(i + 1) % n}" for i in range(n)}])


def point(order):
    """Single-element poset with a cyclic group acting on a larger domain (non-faithfully)."""
    dom = ["p"] + [f"a{i}" for i in range(order)]
    return PosetData(["p"]), generate_group(dom, [{f"a{i}": f"a{(i + 1) % order}" for i in range(order)}])
