"""Skew group algebras, their radicals and Morita reductions, and structural classifiers.

The skew group algebra of an algebra L under a group G has basis b_i ⊗ g
(index ``i * |G| + g``) with product (b_i g)(b_j h) = b_i g(b_j) gh.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    corner,
    fingerprint,
    is_algebra_hom,
    is_local,
    opposite,
    primitivity_check,
    tensor_algebra,
)
from .errors import ActionError, ENotClosed, FreeActionRequired
from .groups import (
    AlgebraAction,
    PermGroup,
    fixed_subalgebra,
    idempotent_orbits,
    is_free_on_idempotents,
    subgroup_generators,
    sylow_subgroup,
    verify_action,
)
from .modules import (
    DEFAULT_DEPTH,
    Representation,
    auslander_condition,
    direct_sum,
    gldim_bounded,
    is_isomorphic,
    restrict,
    submodule,
    twist,
)
from .oracle import INFINITE, UNKNOWN, RepTypeOracle

FIELD_NOTE = (
    "computed over the prime field; verdicts that depend on an algebraically closed field "
    "are reported for the field of computation"
)


def field_block(char: int) -> dict:
    return {"char": char, "field": f"F_{char}" if char else "Q", "note": FIELD_NOTE}


@dataclass
class SkewAlgebra:
    algebra: Algebra
    base: Algebra
    group: PermGroup
    action: AlgebraAction
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order

    def index(self, i: int, g: int) -> int:
        return i * self.order + g

    def element(self, lam: np.ndarray, g: int) -> np.ndarray:
        out = self.algebra.zero()
        out[g:: self.order] = lam
        return out

    def group_element(self, g: int) -> np.ndarray:
        return self.element(self.base.unit, g)

    @cached_property
    def base_embedding(self) -> np.ndarray:
        """dim(LG) x dim(L) matrix of λ -> λ ⊗ 1."""
        emb = la.zeros((self.algebra.dim, self.base.dim), self.base.char)
        for i in range(self.base.dim):
            emb[i * self.order, i] = 1
        return emb

    def components(self, x: np.ndarray) -> np.ndarray:
        """Array of shape (dim L, |G|): column g is the L-coefficient of g."""
        return x.reshape(self.base.dim, self.order)


def build_skew(base: Algebra, group: PermGroup, act: AlgebraAction, check: bool = True) -> SkewAlgebra:
    p = base.char
    if act.algebra is not base or len(act.maps) != group.order:
        raise ActionError("action does not belong to this algebra and group")
    if check:
        problems = verify_action(act, group)
        if problems:
            raise ActionError(problems[0])
    n, m = base.dim, group.order
    # t[g, i, j, k] = coefficient of b_k in b_i g(b_j)
    maps = np.stack(act.maps)  # (g, l, j)
    t = la.reduce(np.einsum("ilk,glj->gijk", base.mult, maps), p)
    mult = la.zeros((n, m, n, m, n, m), p)
    for g in range(m):
        for h in range(m):
            mult[:, g, :, h, :, group.mul(g, h)] = t[g]
    dim = n * m
    mult = mult.reshape(dim, dim, dim)
    unit = la.zeros(dim, p)
    unit[::m] = base.unit
    idem = []
    for e in base.idempotents:
        v = la.zeros(dim, p)
        v[::m] = e
        idem.append(v)
    labels = [f"{lab}|g{g}" for lab in base.labels for g in range(m)]
    degrees = [d for d in base.degrees for _ in range(m)] if base.degrees is not None else None
    gens = []
    for x in base.generators:
        v = la.zeros(dim, p)
        v[::m] = x
        gens.append(v)
    for g in subgroup_generators(group):
        v = la.zeros(dim, p)
        v[g::m] = base.unit
        gens.append(v)
    meta = {"kind": "skew", "generators": gens}
    if base.dim == 1:
        meta["group_algebra"] = group
    alg = Algebra(p, mult, unit, idem, labels, degrees, meta=meta, check=dim <= 64)
    sa = SkewAlgebra(alg, base, group, act)
    if act.e_closed:
        sa.meta["e_primitive"] = primitivity_check(alg)
    return sa


def sub_skew(sa: SkewAlgebra, h: PermGroup) -> tuple[SkewAlgebra, np.ndarray]:
    """Skew algebra over a subgroup (from ``PermGroup.subgroup``) and its embedding."""
    sub = build_skew(sa.base, h, sa.action.restrict(h), check=False)
    emb = la.zeros((sa.algebra.dim, sub.algebra.dim), sa.base.char)
    for i in range(sa.base.dim):
        for k, g in enumerate(h.parent_index):
            emb[sa.index(i, g), sub.index(i, k)] = 1
    return sub, emb


# ----------------------------------------------------------------------
# radical, Morita reduction, fixed subalgebra comparison
# ----------------------------------------------------------------------


def skew_radical(sa: SkewAlgebra) -> dict:
    """Generic radical of LG compared with rad(L) ⊗ kG when the action is free on E."""
    p = sa.base.char
    rad = sa.algebra.generic_radical
    r = sa.base.rad
    formula = la.zeros((sa.algebra.dim, r.shape[1] * sa.order), p)
    for c in range(r.shape[1]):
        for g in range(sa.order):
            formula[:, c * sa.order + g] = sa.element(r[:, c], g)
    formula = la.colspace(formula, p)[0]
    out = {"radical": rad, "dim": rad.shape[1], "formula_dim": formula.shape[1]}
    try:
        free, _ = is_free_on_idempotents(sa.action)
    except ENotClosed:
        free = False
    _, piv = la.colspace(rad, p)
    contains = all(la.in_span(rad, piv, formula[:, c], p) for c in range(formula.shape[1]))
    out["contains_formula"] = contains
    out["free"] = free
    if free:
        out["agrees"] = la.same_span(rad, formula, p)
    else:
        out["agrees"] = None
        out["strictly_larger"] = contains and rad.shape[1] > formula.shape[1]
    return out


def morita_reduce(sa: SkewAlgebra) -> Algebra:
    """The corner ε(LG)ε, where ε sums orbit representatives of E."""
    orb = idempotent_orbits(sa.action)
    eps = sa.element(orb.epsilon, 0)
    c = corner(sa.algebra, eps)
    c.meta["orbit_representatives"] = [sa.base.labels[int(np.nonzero(sa.base.idempotents[r])[0][0])]
                                       if np.count_nonzero(sa.base.idempotents[r]) == 1 else r
                                       for r in orb.representatives]
    c.meta["orbits"] = orb.orbits
    return c


def corner_to_fixed_map(sa: SkewAlgebra, reduced: Optional[Algebra] = None):
    """Explicit map ε(LS)ε -> L^S, x g -> Σ_k k(x), in coordinates.

    Returns (matrix, fixed algebra, corner algebra).
    """
    free, _ = is_free_on_idempotents(sa.action)
    if not free:
        raise FreeActionRequired("the action on E is not free")
    p = sa.base.char
    reduced = reduced or morita_reduce(sa)
    fixed, femb = fixed_subalgebra(sa.action)
    _, fpiv = la.colspace(femb, p)
    cemb = reduced.meta["embedding"]
    total = la.zeros((sa.base.dim, sa.base.dim), p)
    for m in sa.action.maps:
        total = la.reduce(total + m, p)
    mat = la.zeros((fixed.dim, reduced.dim), p)
    for c in range(reduced.dim):
        comp = sa.components(cemb[:, c])
        lam = la.reduce(comp.sum(axis=1) if p else np.sum(comp, axis=1), p)
        img = la.matmul(total, lam, p)
        if not la.in_span(femb, fpiv, img, p):
            return None, fixed, reduced
        mat[:, c] = img[fpiv]
    return mat, fixed, reduced


def fixed_vs_corner_check(sa: SkewAlgebra) -> bool:
    mat, fixed, reduced = corner_to_fixed_map(sa)
    if mat is None or fixed.dim != reduced.dim:
        return False
    return la.rank_raw(mat, sa.base.char) == fixed.dim and is_algebra_hom(mat, reduced, fixed)


def _bimodule_mats(big: Algebra, emb: np.ndarray, sub: Algebra) -> np.ndarray:
    """Action of sub ⊗ sub^op on big: (f ⊗ f') . x = f x f'."""
    p = big.char
    r = sub.dim
    lefts = [big.left_matrix(emb[:, i]) for i in range(r)]
    rights = [big.right_matrix(emb[:, j]) for j in range(r)]
    mats = la.zeros((r * r, big.dim, big.dim), p)
    for i in range(r):
        for j in range(r):
            mats[i * r + j] = la.matmul(lefts[i], rights[j], p)
    return mats


def bimodule_structure(base: Algebra, act: AlgebraAction, grp: Optional[PermGroup] = None) -> dict:
    """Splitting of L^S -> L as bimodules, and whether L is a free L^S-bimodule."""
    grp = grp or act.group
    p = base.char
    fixed, emb = fixed_subalgebra(act, grp)
    r, n = fixed.dim, base.dim
    # ζ: L -> L^S with ζ(f x f') = f ζ(x) f' and ζ|_{L^S} = id
    blocks, rhs = [], []
    for i in range(r):
        for mat_big, mat_small in ((base.left_matrix(emb[:, i]), fixed.left_matrix(fixed.basis_vector(i))),
                                   (base.right_matrix(emb[:, i]), fixed.right_matrix(fixed.basis_vector(i)))):
            blocks.append(la.reduce(np.kron(la.eye(r, p), mat_big.T) - np.kron(mat_small, la.eye(n, p)), p))
            rhs.append(la.zeros((r * n, 1), p))
    blocks.append(la.reduce(np.kron(la.eye(r, p), emb.T), p))
    rhs.append(la.eye(r, p).reshape(-1, 1))
    sol = la.solve_raw(np.concatenate(blocks, axis=0), np.concatenate(rhs, axis=0), p)
    out: dict = {"fixed_dim": r, "splits": sol is not None}
    if sol is not None:
        out["zeta"] = sol.reshape(r, n)
    env = tensor_algebra(fixed, opposite(fixed))
    big_mod = Representation(env, _bimodule_mats(base, emb, fixed))
    small_mod = Representation(env, _bimodule_mats(fixed, la.eye(r, p), fixed))
    if n % r:
        out["free"] = False
        out["free_reason"] = f"dimension {n} is not a multiple of {r}"
        return out
    target = direct_sum(*([small_mod] * (n // r)))
    if p == 0:
        iso = is_isomorphic(big_mod, target)
        out["free"] = True if iso is not None else None
        if iso is None:
            out["free_reason"] = "undecided over Q (no isomorphism found by search)"
        return out
    iso = is_isomorphic(big_mod, target)
    out["free"] = iso is not None
    if iso is not None:
        out["bimodule_iso"] = iso
    else:
        from .modules import decompose

        out["free_reason"] = "bimodule is not isomorphic to a direct sum of copies of the fixed subalgebra"
        out["bimodule_summand_dims"] = sorted(s.module.dim for s in decompose(big_mod))
    return out


# ----------------------------------------------------------------------
# modules over skew algebras
# ----------------------------------------------------------------------


def left_transversal(g: PermGroup, h: PermGroup) -> list[int]:
    hset = set(h.parent_index)
    covered: set[int] = set()
    reps = []
    for x in range(g.order):
        if x in covered:
            continue
        reps.append(x)
        covered.update(g.mul(x, y) for y in hset)
    return reps


def induce(v: Representation, sub: SkewAlgebra, big: SkewAlgebra) -> Representation:
    """LG ⊗_{LH} V via a left transversal of H in G."""
    p = big.base.char
    g, h = big.group, sub.group
    hpos = {x: k for k, x in enumerate(h.parent_index)}
    reps = left_transversal(g, h)
    rpos = {t: i for i, t in enumerate(reps)}
    coset_of = {}
    for t in reps:
        for y in h.parent_index:
            coset_of[g.mul(t, y)] = t
    d, n, m = v.dim, big.base.dim, g.order
    vm = v.mats.reshape(n, h.order, d, d)
    mats = la.zeros((n * m, len(reps) * d, len(reps) * d), p)
    for x in range(m):
        for t in reps:
            xt = g.mul(x, t)
            t2 = coset_of[xt]
            hh = hpos[g.mul(g.inv(t2), xt)]
            minv = big.action.maps[g.inv(t2)]
            blk = la.reduce(np.tensordot(minv.T, vm[:, hh], axes=(1, 0)), p)  # (i, d, d)
            a, b = rpos[t2] * d, rpos[t] * d
            mats[x::m, a:a + d, b:b + d] = blk
    return Representation(big.algebra, mats)


def restrict_to_base(m: Representation, sa: SkewAlgebra) -> Representation:
    return restrict(m, sa.base_embedding, sa.base)


def natural_module(sa: SkewAlgebra) -> Representation:
    """L as an LG-module: (λ g) . μ = λ g(μ)."""
    p = sa.base.char
    n, m = sa.base.dim, sa.order
    mats = la.zeros((n * m, n, n), p)
    for i in range(n):
        li = sa.base.left_matrices[i]
        for g in range(m):
            mats[i * m + g] = la.matmul(li, sa.action.maps[g], p)
    return Representation(sa.algebra, mats, name="natural")


def with_group_action(m: Representation, sa: SkewAlgebra, group_mats) -> Representation:
    """Extend a module over L to LG, given the action of each group element."""
    p = sa.base.char
    n, mo = sa.base.dim, sa.order
    mats = la.zeros((n * mo, m.dim, m.dim), p)
    for i in range(n):
        for g in range(mo):
            mats[i * mo + g] = la.matmul(m.mats[i], la.asarray(group_mats[g], p), p)
    return Representation(sa.algebra, mats, check=True)


def trivially_extended(m: Representation, sa: SkewAlgebra) -> Representation:
    return with_group_action(m, sa, [la.eye(m.dim, sa.base.char)] * sa.order)


def tensor_group_algebra(m: Representation, sa: SkewAlgebra) -> Representation:
    """M ⊗ kG with (λ g).(x ⊗ h) = (λ g)x ⊗ gh, for an LG-module M."""
    p = sa.base.char
    d, mo = m.dim, sa.order
    mats = la.zeros((sa.algebra.dim, d * mo, d * mo), p)
    for idx in range(sa.algebra.dim):
        g = idx % mo
        for h in range(mo):
            gh = sa.group.mul(g, h)
            mats[idx, gh * d:(gh + 1) * d, h * d:(h + 1) * d] = m.mats[idx]
    return Representation(sa.algebra, mats)


def fixed_points_module(m: Representation, sa: SkewAlgebra):
    """M^S as a module over the fixed subalgebra; returns (module, fixed algebra, inclusion)."""
    p = sa.base.char
    fixed, femb = fixed_subalgebra(sa.action)
    gens = subgroup_generators(sa.group) or [0]
    kers = [la.kernel_raw(la.reduce(m.act(sa.group_element(g)) - la.eye(m.dim, p), p), p) for g in gens]
    space = la.intersect_raw(kers, p) if m.dim else la.zeros((0, 0), p)
    over_fixed = restrict(m, la.matmul(sa.base_embedding, femb, p), fixed)
    sub, inc = submodule(over_fixed, space)
    return sub, fixed, inc


def twist_module(m: Representation, g: int, act: AlgebraAction) -> Representation:
    """λ * v = g^{-1}(λ) v."""
    return twist(m, act.maps[act.group.inv(g)])


# ----------------------------------------------------------------------
# classifiers
# ----------------------------------------------------------------------


@dataclass
class ClassifierVerdict:
    question: str
    answer: str
    witness: dict = field(default_factory=dict)
    hypotheses: list = field(default_factory=list)
    field: dict = field(default_factory=dict)
    bound: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "question": self.question,
            "verdict": self.answer,
            "witness": self.witness,
            "hypotheses": self.hypotheses,
            "field": self.field,
        }
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def _hyp(name: str, status: str, detail: str = "") -> dict:
    out = {"hypothesis": name, "status": status}
    if detail:
        out["detail"] = detail
    return out


def _sylow_setup(base: Algebra, grp: PermGroup, act: AlgebraAction):
    """Sylow subgroup, restricted action, closure flag and freeness witness."""
    s = sylow_subgroup(grp, base.char)
    act_s = act.restrict(s)
    closed = act_s.is_e_closed()
    free, wit = (is_free_on_idempotents(act_s) if closed else (None, None))
    hyps = [
        _hyp("E is closed under a Sylow subgroup", "verified" if closed else "failed",
             f"Sylow {base.char}-subgroup of order {s.order}"),
        _hyp("the algebra is basic", "assumed", "not checked"),
    ]
    return s, act_s, closed, free, wit, hyps


def _non_free_witness(base: Algebra, s: PermGroup, wit) -> dict:
    g, i = wit
    return {"non_free": {"group_element": s.describe(g), "fixed_idempotent": _idem_label(base, i)}}


def _idem_label(base: Algebra, i: int) -> str:
    e = base.idempotents[i]
    nz = np.nonzero(e)[0]
    return base.labels[int(nz[0])] if len(nz) == 1 else f"e{i}"


def classify_gldim(base: Algebra, grp: PermGroup, act: AlgebraAction, depth: int = DEFAULT_DEPTH,
                   cross_check_dim: int = 200) -> ClassifierVerdict:
    s, act_s, closed, free, wit, hyps = _sylow_setup(base, grp, act)
    v = ClassifierVerdict("gldim", UNKNOWN, hypotheses=hyps, field=field_block(base.char), bound=depth)
    if not closed:
        v.witness = {"reason": "E is not closed under the Sylow subgroup"}
        return v
    if not free:
        v.answer = INFINITE
        v.witness = _non_free_witness(base, s, wit)
        return v
    gl = gldim_bounded(base, depth)
    v.witness["base_gldim"] = gl.to_json(base.char)
    if gl.status == "exhausted":
        v.witness["reason"] = f"resolutions of the base algebra did not terminate within {depth} steps"
        return v
    if gl.status == "infinite":
        v.answer = INFINITE
        periodic = next(t for t in gl.traces if t.status == "periodic")
        v.witness["periodicity"] = periodic.to_json(base.char)
        return v
    v.answer = f"finite({gl.value})"
    checks = {"base": gl.value}
    fixed, _ = fixed_subalgebra(act_s)
    fg = gldim_bounded(fixed, depth)
    checks["fixed_subalgebra"] = fg.value if fg.status == "finite" else fg.status
    if base.dim * grp.order <= cross_check_dim:
        sg = gldim_bounded(build_skew(base, grp, act, check=False).algebra, depth)
        checks["skew"] = sg.value if sg.status == "finite" else sg.status
    v.witness["cross_check"] = checks
    v.witness["cross_check_agrees"] = all(x == gl.value for x in checks.values())
    return v


def classify_auslander(base: Algebra, grp: PermGroup, act: AlgebraAction, depth: int = DEFAULT_DEPTH,
                       cross_check_dim: int = 64) -> ClassifierVerdict:
    s, act_s, closed, free, wit, hyps = _sylow_setup(base, grp, act)
    v = ClassifierVerdict("auslander", UNKNOWN, hypotheses=hyps, field=field_block(base.char), bound=depth)
    if not closed:
        v.witness = {"reason": "E is not closed under the Sylow subgroup"}
        return v
    if not free:
        v.answer = "no"
        v.witness = _non_free_witness(base, s, wit)
        return v
    cond = auslander_condition(base, depth)
    v.witness["base"] = cond
    if cond["verdict"] == "unknown":
        v.witness["reason"] = "global dimension of the base algebra undecided within the bound"
        return v
    v.answer = cond["verdict"]
    if base.dim * grp.order <= cross_check_dim:
        direct = auslander_condition(build_skew(base, grp, act, check=False).algebra, depth)
        v.witness["skew_direct"] = direct["verdict"]
        v.witness["cross_check_agrees"] = direct["verdict"] == v.answer
    return v


def classify_reptype(base: Algebra, grp: PermGroup, act: AlgebraAction,
                     oracle: Optional[RepTypeOracle] = None) -> ClassifierVerdict:
    oracle = oracle or RepTypeOracle()
    p = base.char
    hyps = [
        _hyp("characteristic is not 2 or 3", "verified" if p not in (2, 3) else "failed", f"char {p}"),
        _hyp("the algebra is not local", "verified" if not is_local(base) else "failed"),
    ]
    v = ClassifierVerdict("reptype", UNKNOWN, hypotheses=hyps, field=field_block(p))
    if p in (2, 3) or is_local(base):
        v.witness = {"reason": "hypothesis violated: " + ", ".join(h["hypothesis"] for h in hyps
                                                                   if h["status"] == "failed")}
        return v
    s, act_s, closed, free, wit, more = _sylow_setup(base, grp, act)
    v.hypotheses += more
    if not closed:
        v.witness = {"reason": "E is not closed under the Sylow subgroup"}
        return v
    if not free:
        v.answer = INFINITE
        v.witness = _non_free_witness(base, s, wit)
        v.witness["branch"] = "fixed-subalgebra"
        return v
    fixed, _ = fixed_subalgebra(act_s)
    res = oracle.algebra(fixed)
    v.witness = {"branch": "fixed-subalgebra", "oracle": res, "fixed_fingerprint": fingerprint(fixed)}
    if res["answer"] != UNKNOWN:
        v.answer = res["answer"]
        return v
    bim = bimodule_structure(base, act_s, s)
    v.witness["bimodule_splits"] = bim["splits"]
    if bim["splits"]:
        res2 = oracle.algebra(base)
        v.witness = {"branch": "split-bimodule", "oracle": res2, "bimodule_splits": True}
        v.answer = res2["answer"]
    else:
        v.witness["reason"] = "oracle has no verdict for the fixed subalgebra and the bimodule does not split"
    return v
