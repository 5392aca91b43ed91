"""Graded algebras generated in degrees 0 and 1, and bounded Koszul checks.

Degree-0 parts need not be semisimple.  A graded algebra is re-wrapped with
primitive idempotents taken from A_0, so projective covers pick homogeneous
generators and every reduced-echelon basis of a graded subspace is
homogeneous; degrees are then read off pivot coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Algebra, opposite, quotient_algebra, subalgebra
from .errors import GradingInconsistent, NotDegreeOneGenerated, NotGradePreserving, PreconditionFailed
from .groups import AlgebraAction, PermGroup
from .modules import (
    Representation,
    ext_dims,
    is_injective,
    is_projective,
    projective_cover,
    quotient_module,
    radical_submodule,
    regular_module,
    restrict,
)
from .skew import SkewAlgebra, build_skew, natural_module, restrict_to_base, tensor_group_algebra

DEFAULT_DEGREE = 8


@dataclass
class GradedAlgebra:
    source: Algebra
    algebra: Algebra
    degrees: list[int]
    skew: Optional[SkewAlgebra] = None

    @property
    def top(self) -> int:
        return max(self.degrees, default=0)

    def component(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    @property
    def component_dims(self) -> list[int]:
        return [len(self.component(d)) for d in range(self.top + 1)]

    def degree_zero(self) -> tuple[Algebra, np.ndarray]:
        if "_a0" not in self.algebra.meta:
            a = self.algebra
            idx = self.component(0)
            basis = la.zeros((a.dim, len(idx)), a.char)
            for c, i in enumerate(idx):
                basis[i, c] = 1
            self.algebra.meta["_a0"] = subalgebra(a, basis, [a.unit], [a.labels[i] for i in idx], [0] * len(idx))
        return self.algebra.meta["_a0"]

    def j_basis(self) -> np.ndarray:
        a = self.algebra
        idx = [i for i, d in enumerate(self.degrees) if d >= 1]
        out = la.zeros((a.dim, len(idx)), a.char)
        for c, i in enumerate(idx):
            out[i, c] = 1
        return out


@dataclass
class GradedModule:
    module: Representation
    degrees: list[int]

    @property
    def dim(self) -> int:
        return self.module.dim

    def component(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]


def _check_grading(a: Algebra, degrees: Sequence[int]) -> None:
    nz = np.argwhere(a.mult != 0)
    for i, j, k in nz:
        if degrees[k] != degrees[i] + degrees[j]:
            raise GradingInconsistent(
                f"{a.labels[i]} * {a.labels[j]} has a component on {a.labels[k]} of degree {degrees[k]}"
            )
    if any(degrees[i] != 0 for i in np.nonzero(a.unit)[0]):
        raise GradingInconsistent("the unit is not homogeneous of degree 0")


def _check_generation(a: Algebra, degrees: Sequence[int]) -> None:
    top = max(degrees, default=0)
    one = [i for i, d in enumerate(degrees) if d == 1]
    for d in range(2, top + 1):
        target = [i for i, x in enumerate(degrees) if x == d]
        prev = [i for i, x in enumerate(degrees) if x == d - 1]
        prods = [a.mult[i, j] for i in one for j in prev]
        r = la.rank_raw(np.stack(prods, axis=1), a.char) if prods else 0
        if r != len(target):
            raise NotDegreeOneGenerated(f"A_1 * A_{d - 1} spans {r} of the {len(target)} dimensions of A_{d}")


def grade_algebra(a: Algebra, degrees: Optional[Sequence[int]] = None) -> GradedAlgebra:
    """Validate a degree assignment on the basis and re-wrap with idempotents from A_0."""
    degrees = list(degrees if degrees is not None else (a.degrees or []))
    if len(degrees) != a.dim:
        raise GradingInconsistent(f"expected {a.dim} basis degrees, got {len(degrees)}")
    if any(int(d) < 0 for d in degrees):
        raise GradingInconsistent("degrees must be non-negative")
    degrees = [int(d) for d in degrees]
    _check_grading(a, degrees)
    _check_generation(a, degrees)
    idx0 = [i for i, d in enumerate(degrees) if d == 0]
    basis = la.zeros((a.dim, len(idx0)), a.char)
    for c, i in enumerate(idx0):
        basis[i, c] = 1
    inside = [e for e in a.idempotents if all(degrees[i] == 0 for i in np.nonzero(e)[0])]
    if inside and not la.is_zero(la.reduce(sum(inside) - a.unit, a.char)):
        inside = []
    a0, emb = subalgebra(a, basis, inside or [a.unit], check=False)
    prims = [la.matmul(emb, e, a.char) for e in a0.primitive_idempotents]
    meta = {k: v for k, v in a.meta.items() if not k.startswith("_")}
    wrapped = Algebra(a.char, a.mult, a.unit, prims, a.labels, degrees, a.structural_radical, meta, check=False)
    return GradedAlgebra(a, wrapped, degrees)


def grade_skew(ga: GradedAlgebra, group: PermGroup, act: AlgebraAction, check: bool = True) -> GradedAlgebra:
    """ΛG graded by deg(λ g) = deg(λ)."""
    for g, m in enumerate(act.maps):
        for k, j in np.argwhere(m != 0):
            if ga.degrees[k] != ga.degrees[j]:
                raise NotGradePreserving(f"group element g{g} sends a degree-{ga.degrees[j]} basis element "
                                         f"to degree {ga.degrees[k]}")
    sa = build_skew(ga.source, group, act, check=check)
    degs = [d for d in ga.degrees for _ in range(group.order)]
    out = grade_algebra(sa.algebra, degs)
    out.skew = sa
    return out


def splitting_property(ga: GradedAlgebra) -> dict:
    """Sufficient conditions only: A_0 self-injective, or a product of local algebras."""
    a0, _ = ga.degree_zero()
    selfinj = is_injective(regular_module(a0))
    prims = a0.primitive_idempotents
    local_sum = all(a0.eq(a0.mul(e, a0.basis_vector(i)), a0.mul(a0.basis_vector(i), e))
                    for e in prims for i in range(a0.dim))
    return {"self_injective": selfinj, "product_of_local": local_sum, "holds": selfinj or local_sum}


# ----------------------------------------------------------------------
# graded modules and resolutions
# ----------------------------------------------------------------------


def vector_degrees(basis: np.ndarray, coord_degrees: Sequence[int]) -> list[int]:
    out = []
    for j in range(basis.shape[1]):
        ds = {coord_degrees[i] for i in np.nonzero(basis[:, j])[0]}
        if len(ds) != 1:
            raise GradingInconsistent("basis vector is not homogeneous")
        out.append(ds.pop())
    return out


def graded_module(ga: GradedAlgebra, m: Representation, degrees: Sequence[int]) -> GradedModule:
    """Attach degrees to a module over ``ga.source`` or ``ga.algebra``; checks A_i M_j ⊆ M_{i+j}."""
    rep = Representation(ga.algebra, m.mats)
    degrees = [int(d) for d in degrees]
    if len(degrees) != rep.dim:
        raise GradingInconsistent(f"expected {rep.dim} module degrees, got {len(degrees)}")
    for i, di in enumerate(ga.degrees):
        for r, c in np.argwhere(rep.mats[i] != 0):
            if degrees[r] != di + degrees[c]:
                raise GradingInconsistent(f"{ga.algebra.labels[i]} does not act with degree {di}")
    return GradedModule(rep, degrees)


def degree_zero_part(ga: GradedAlgebra) -> GradedModule:
    """A_0 = A / J as a graded left A-module concentrated in degree 0."""
    q, _ = quotient_module(regular_module(ga.algebra), ga.j_basis())
    return GradedModule(q, [0] * q.dim)


def top_degrees(m: GradedModule) -> list[int]:
    """Degrees (with multiplicity of dimension) of M / rad(A) M."""
    rad = radical_submodule(m.module)
    rdeg = vector_degrees(rad, m.degrees) if rad.shape[1] else []
    out = []
    for d in sorted(set(m.degrees)):
        out += [d] * (m.degrees.count(d) - rdeg.count(d))
    return out


def generated_in(m: GradedModule, d: int) -> bool:
    return all(x == d for x in top_degrees(m))


def degree_piece_over_a0(ga: GradedAlgebra, m: GradedModule, d: int) -> Representation:
    a0, emb = ga.degree_zero()
    idx = m.component(d)
    mats = la.reduce(np.tensordot(emb.T, m.module.mats, axes=(1, 0)), ga.algebra.char)
    return Representation(a0, np.ascontiguousarray(mats[:, idx][:, :, idx]))


@dataclass
class GradedCover:
    projective: GradedModule
    generator_degrees: list[int]
    kernel: GradedModule
    kernel_in_jp: bool


def graded_cover(ga: GradedAlgebra, m: GradedModule) -> GradedCover:
    cov = projective_cover(m.module)
    gdeg = vector_degrees(cov.generators, m.degrees) if cov.generators.shape[1] else []
    pdeg, relative = [], []
    for c, gd in zip(cov.summands, gdeg):
        for d in vector_degrees(ga.algebra.projective_bases[c], ga.degrees):
            pdeg.append(d + gd)
            relative.append(d)
    inc = cov.kernel_inclusion
    kdeg = vector_degrees(inc, pdeg) if inc.shape[1] else []
    low = [i for i, r in enumerate(relative) if r == 0]
    in_jp = not inc.shape[1] or la.is_zero(inc[low, :])
    return GradedCover(GradedModule(cov.projective, pdeg), sorted(gdeg), GradedModule(cov.kernel, kdeg), in_jp)


@dataclass
class GradedTrace:
    generation_degrees: list[list[int]] = field(default_factory=list)  # generator degrees of P^i
    syzygy_dims: list[int] = field(default_factory=list)
    kernel_in_jp: list[bool] = field(default_factory=list)
    syzygies: list[GradedModule] = field(default_factory=list, repr=False)
    length: Optional[int] = None

    def to_json(self) -> dict:
        out = {"generation_degrees": [list(x) for x in self.generation_degrees],
               "syzygy_dims": list(self.syzygy_dims), "kernel_in_JP": list(self.kernel_in_jp)}
        if self.length is not None:
            out["projective_dimension"] = self.length
        return out


def minimal_graded_resolution(ga: GradedAlgebra, m: GradedModule, steps: int) -> GradedTrace:
    """Covers P^0 .. P^steps; ``syzygies[i]`` is Ω^i(M) with Ω^0 = M."""
    tr = GradedTrace()
    cur = m
    tr.syzygies.append(cur)
    for i in range(steps + 1):
        if cur.dim == 0:
            tr.length = max(i - 1, 0)
            break
        cov = graded_cover(ga, cur)
        tr.generation_degrees.append(cov.generator_degrees)
        tr.kernel_in_jp.append(cov.kernel_in_jp)
        tr.syzygy_dims.append(cov.kernel.dim)
        cur = cov.kernel
        if cur.dim == 0:
            tr.length = i
            break
        if i < steps:
            tr.syzygies.append(cur)
    return tr


@dataclass
class KoszulVerdict:
    bound: int
    table: list[dict]
    linear: bool
    fail_step: Optional[int] = None
    fail_degree: Optional[int] = None
    projective_flags: list[bool] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        if self.linear:
            return f"LinearThrough({self.bound})"
        return f"FailsAt({self.fail_step}, {self.fail_degree})"

    def same_class(self, other: "KoszulVerdict") -> bool:
        return self.linear == other.linear and self.fail_step == other.fail_step

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "bound": self.bound, "linear": self.linear, "steps": self.table,
               "omega_i_degree_i_projective": list(self.projective_flags)}
        if not self.linear:
            out["fails_at"] = {"step": self.fail_step, "degree": self.fail_degree}
        return out


def koszul_module_up_to(ga: GradedAlgebra, m: GradedModule, n: int, shift: int = 0) -> KoszulVerdict:
    """Check that P^i is generated in degree i + shift for i <= n."""
    tr = minimal_graded_resolution(ga, m, n)
    table, flags = [], []
    linear, fs, fd = True, None, None
    for i in range(n + 1):
        degs = tr.generation_degrees[i] if i < len(tr.generation_degrees) else []
        table.append({"step": i, "generation_degrees": sorted(set(degs)),
                      "generators": len(degs)})
        if linear and any(d != i + shift for d in degs):
            linear, fs = False, i
            fd = min(d for d in degs if d != i + shift)
        if i < len(tr.syzygies):
            piece = degree_piece_over_a0(ga, tr.syzygies[i], i + shift)
            flags.append(is_projective(piece))
        else:
            flags.append(True)
    return KoszulVerdict(n, table, linear, fs, fd, flags)


def is_koszul_up_to(ga: GradedAlgebra, n: int = DEFAULT_DEGREE) -> KoszulVerdict:
    """Resolve A_0 = A/J and test linearity of the first n + 1 terms."""
    return koszul_module_up_to(ga, degree_zero_part(ga), n)


def koszul_transfer_check(ga: GradedAlgebra, group: PermGroup, act: AlgebraAction,
                          n: int = DEFAULT_DEGREE) -> dict:
    gs = grade_skew(ga, group, act)
    base = is_koszul_up_to(ga, n)
    skew = is_koszul_up_to(gs, n)
    a0, _ = gs.degree_zero()
    return {
        "bound": n,
        "base": base.to_json(),
        "skew": skew.to_json(),
        "skew_degree_zero_dim": a0.dim,
        "agree": base.same_class(skew),
    }


def _ideal_generated(a: Algebra, gens: np.ndarray) -> np.ndarray:
    p = a.char
    if gens.shape[1] == 0:
        return gens
    left = np.concatenate([la.matmul(a.left_matrices[i], gens, p) for i in range(a.dim)], axis=1)
    left = la.colspace(left, p)[0]
    both = np.concatenate([la.matmul(a.right_matrix(a.basis_vector(j)), left, p) for j in range(a.dim)], axis=1)
    return la.colspace(both, p)[0]


def abar_reduction(ga: GradedAlgebra, n: Optional[int] = None) -> tuple[GradedAlgebra, dict]:
    """Ā = A / A r A with r = rad A_0, plus the hypothesis report and optional comparison."""
    a = ga.algebra
    p = a.char
    a0, emb = ga.degree_zero()
    r = la.matmul(emb, a0.rad, p)
    ideal = _ideal_generated(a, r)
    q, _ = quotient_algebra(a, ideal) if ideal.shape[1] else (a, None)
    bar = grade_algebra(q, q.degrees)
    one = [i for i, d in enumerate(ga.degrees) if d == 1]
    a1 = la.zeros((a.dim, len(one)), p)
    for c, i in enumerate(one):
        a1[i, c] = 1
    ra1 = [a.mul(r[:, s], a1[:, t]) for s in range(r.shape[1]) for t in range(a1.shape[1])]
    a1r = [a.mul(a1[:, t], r[:, s]) for s in range(r.shape[1]) for t in range(a1.shape[1])]

    def span(vs):
        return np.stack(vs, axis=1) if vs else la.zeros((a.dim, 0), p)

    commute = la.same_span(span(ra1), span(a1r), p)
    left = is_projective(restrict(regular_module(a), emb, a0))
    op_a, op_a0 = opposite(a), opposite(a0)
    right = is_projective(restrict(regular_module(op_a), emb, op_a0))
    hyps = {
        "A_projective_left_over_A0": left,
        "A_projective_right_over_A0": right,
        "module_projective_over_A0": True,
        "r_A1_equals_A1_r": bool(commute),
    }
    report = {"ideal_dim": int(ideal.shape[1]), "abar_dim": bar.algebra.dim, "hypotheses": hyps}
    if n is not None:
        failed = [k for k, v in hyps.items() if not v]
        if failed:
            report["comparison"] = None
            report["skipped_because"] = failed
        else:
            va, vb = is_koszul_up_to(ga, n), is_koszul_up_to(bar, n)
            report["comparison"] = {"A": va.outcome, "Abar": vb.outcome, "agree": va.same_class(vb)}
    return bar, report


# ----------------------------------------------------------------------
# Ext dimension identity
# ----------------------------------------------------------------------


def degree_zero_skew_module(gs: GradedAlgebra) -> Representation:
    """Λ_0 as a ΛG-module: the natural module modulo the positive-degree part."""
    sa = gs.skew
    nat = natural_module(sa)
    base_degs = gs.degrees[::sa.order]
    jb = la.zeros((sa.base.dim, sum(1 for d in base_degs if d >= 1)), sa.base.char)
    c = 0
    for i, d in enumerate(base_degs):
        if d >= 1:
            jb[i, c] = 1
            c += 1
    q, _ = quotient_module(nat, jb)
    return q


def ext_dim_table(ga: GradedAlgebra, gs: GradedAlgebra, m: Representation, n_mod: Representation,
                  smax: int, m_degrees: Optional[Sequence[int]] = None) -> dict:
    """dim Ext^s_Λ(M, N) and dim Ext^s_{ΛG}(M⊗kG, N⊗kG) from separate resolutions.

    ``m`` and ``n_mod`` are ΛG-modules; the Λ side uses their restrictions.
    """
    sa = gs.skew
    rm, rn = restrict_to_base(m, sa), restrict_to_base(n_mod, sa)
    degs = list(m_degrees) if m_degrees is not None else [0] * m.dim
    gm = graded_module(ga, rm, degs)
    shift = min(degs, default=0)
    kv = koszul_module_up_to(ga, gm, smax, shift)
    if not kv.linear:
        raise PreconditionFailed(f"M is not Koszul over the base algebra through step {smax}: {kv.outcome}")
    base = ext_dims(rm, rn, smax)
    big = ext_dims(tensor_group_algebra(m, sa), tensor_group_algebra(n_mod, sa), smax)
    order = sa.order
    return {
        "smax": smax,
        "group_order": order,
        "base": base,
        "skew": big,
        "identity_holds": all(b == order * x for x, b in zip(base, big)),
        "koszul_precondition": kv.outcome,
    }


__all__ = [
    "GradedAlgebra",
    "GradedModule",
    "GradedCover",
    "GradedTrace",
    "KoszulVerdict",
    "grade_algebra",
    "grade_skew",
    "graded_module",
    "graded_cover",
    "degree_zero_part",
    "degree_zero_skew_module",
    "top_degrees",
    "generated_in",
    "minimal_graded_resolution",
    "koszul_module_up_to",
    "is_koszul_up_to",
    "koszul_transfer_check",
    "abar_reduction",
    "splitting_property",
    "ext_dim_table",
    "vector_degrees",
]
