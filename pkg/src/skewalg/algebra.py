"""Finite-dimensional associative algebras given by structure constants.

An :class:`Algebra` stores ``mult[i, j]`` = coordinates of ``b_i * b_j``, the
unit, and a complete set ``E`` of orthogonal idempotents.  Builders cover
path algebras of quivers with admissible relations, incidence algebras of
finite posets, truncated polynomial rings, matrix and tensor algebras.
Paths and morphisms compose right to left.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .errors import (
    InvalidAlgebra,
    InvalidPoset,
    NotFiniteDimensional,
    NotIdempotent,
    PresentationError,
)

DEFAULT_PATH_CAP = 32
_ASSOC_CHECK_DIM = 64


class Algebra:
    """A unital associative algebra with a distinguished idempotent set E."""

    def __init__(
        self,
        char: int,
        mult,
        unit,
        idempotents: Sequence,
        labels: Optional[Sequence[str]] = None,
        degrees: Optional[Sequence[int]] = None,
        structural_radical: Optional[np.ndarray] = None,
        meta: Optional[dict] = None,
        check: bool = True,
    ):
        self.char = la.check_char(char)
        self.mult = mult if isinstance(mult, np.ndarray) and mult.dtype == la.dtype_for(char) else la.asarray(mult, char)
        if self.mult.ndim != 3 or len(set(self.mult.shape)) != 1:
            raise InvalidAlgebra(f"structure constants must have shape (n, n, n), got {self.mult.shape}")
        self.dim = self.mult.shape[0]
        self.unit = la.asarray(unit, char).reshape(self.dim)
        self.idempotents = [la.asarray(e, char).reshape(self.dim) for e in idempotents]
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self.degrees = list(degrees) if degrees is not None else None
        self.structural_radical = structural_radical
        self.meta = dict(meta or {})
        if check:
            self.validate(associativity=self.dim <= _ASSOC_CHECK_DIM)

    # basic arithmetic -------------------------------------------------
    def zero(self) -> np.ndarray:
        return la.zeros(self.dim, self.char)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        t = np.tensordot(x, self.mult, axes=(0, 0))  # (j, k)
        return la.reduce(y @ la.reduce(t, self.char), self.char)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of v -> x v (columns indexed by basis of v)."""
        return la.reduce(np.tensordot(x, self.mult, axes=(0, 0)), self.char).T.copy()

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of v -> v x."""
        return la.reduce(np.tensordot(self.mult, x, axes=(1, 0)), self.char).T.copy()

    @cached_property
    def left_matrices(self) -> np.ndarray:
        """Stack of L_{b_i}; entry [i, k, j] = coefficient of b_k in b_i b_j."""
        return np.ascontiguousarray(np.transpose(self.mult, (0, 2, 1)))

    def eq(self, x, y) -> bool:
        return not np.any(la.reduce(x - y, self.char) != 0)

    # validation -------------------------------------------------------
    def validate(self, associativity: bool = True) -> None:
        n, p = self.dim, self.char
        if associativity and n:
            left = la.reduce(np.tensordot(self.mult, self.mult, axes=(2, 0)), p)  # (b_i b_j) b_k
            right = la.reduce(np.tensordot(self.mult, self.mult, axes=(2, 1)), p)  # (j,k,i,l)
            right = np.transpose(right, (2, 0, 1, 3))
            if np.any(left != right):
                bad = np.argwhere(left != right)[0]
                raise InvalidAlgebra(f"associativity fails on basis triple {tuple(int(i) for i in bad[:3])}")
        for i in range(n):
            b = self.basis_vector(i)
            if not (self.eq(self.mul(self.unit, b), b) and self.eq(self.mul(b, self.unit), b)):
                raise InvalidAlgebra(f"unit is not two-sided on basis element {self.labels[i]}")
        total = self.zero()
        for i, e in enumerate(self.idempotents):
            for j, f in enumerate(self.idempotents):
                prod = self.mul(e, f)
                expect = e if i == j else self.zero()
                if not self.eq(prod, expect):
                    raise InvalidAlgebra(f"idempotents {i}, {j} are not orthogonal idempotents")
            total = la.reduce(total + e, p)
        if self.idempotents and not self.eq(total, self.unit):
            raise InvalidAlgebra("idempotents do not sum to the unit")

    # radical ----------------------------------------------------------
    @cached_property
    def generic_radical(self) -> np.ndarray:
        return _generic_radical(self)

    def radical(self, method: str = "auto") -> np.ndarray:
        """Columns form a reduced basis of the Jacobson radical."""
        if method == "generic" or (method == "auto" and self.structural_radical is None):
            return self.generic_radical
        return la.colspace(self.structural_radical, self.char)[0]

    @cached_property
    def rad(self) -> np.ndarray:
        return self.radical()

    @cached_property
    def rad_pivots(self) -> list[int]:
        return la.colspace(self.rad, self.char)[1]

    def ideal_product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Reduced basis of span{x_i y_j} for column bases x, y."""
        if x.shape[1] == 0 or y.shape[1] == 0:
            return la.zeros((self.dim, 0), self.char)
        t = la.reduce(np.tensordot(x, self.mult, axes=(0, 0)), self.char)  # (a, j, k)
        prods = la.reduce(np.tensordot(t, y, axes=(1, 0)), self.char)  # (a, k, b)
        cols = np.transpose(prods, (1, 0, 2)).reshape(self.dim, -1)
        return la.colspace(cols, self.char)[0]

    @cached_property
    def radical_layers(self) -> list[int]:
        """Dimensions of rad, rad^2, ... down to 0."""
        dims = []
        cur = self.rad
        while cur.shape[1]:
            dims.append(cur.shape[1])
            nxt = self.ideal_product(cur, self.rad)
            if nxt.shape[1] == cur.shape[1]:
                raise InvalidAlgebra("computed radical is not nilpotent")
            cur = nxt
        return dims

    def rad_power(self, k: int) -> np.ndarray:
        cur = la.eye(self.dim, self.char) if k == 0 else self.rad
        for _ in range(k - 1):
            cur = self.ideal_product(cur, self.rad)
        return cur

    # idempotent bookkeeping -------------------------------------------
    def corner_space(self, e: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Reduced basis of e A f."""
        le, rf = self.left_matrix(e), self.right_matrix(f)
        return la.colspace(la.matmul(le, rf, self.char), self.char)[0]

    @cached_property
    def primitive_idempotents(self) -> list[np.ndarray]:
        """A refinement of E into primitive orthogonal idempotents.

        Members of E whose corner is already local are kept as they are, so
        for path and incidence algebras this is E itself.
        """
        out = []
        for e in (self.idempotents or [self.unit]):
            out.extend(_refine_idempotent(self, e))
        return out

    @cached_property
    def idempotent_classes(self) -> list[list[int]]:
        """Partition of the primitive idempotents into classes of isomorphic A e."""
        prim = self.primitive_idempotents
        n = len(prim)
        rad, piv = self.rad, self.rad_pivots
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(n), 2):
            if find(i) == find(j):
                continue
            ei, ej = prim[i], prim[j]
            xs, ys = self.corner_space(ei, ej), self.corner_space(ej, ei)
            prods = self.ideal_product(xs, ys)
            if any(not la.in_span(rad, piv, prods[:, c], self.char) for c in range(prods.shape[1])):
                parent[find(j)] = find(i)
        classes: dict[int, list[int]] = {}
        for i in range(n):
            classes.setdefault(find(i), []).append(i)
        return sorted(classes.values())

    @cached_property
    def class_idempotents(self) -> list[np.ndarray]:
        """One primitive idempotent per class."""
        return [self.primitive_idempotents[c[0]] for c in self.idempotent_classes]

    @cached_property
    def projective_bases(self) -> list[np.ndarray]:
        """Reduced basis of A e_c for each class representative e_c."""
        return [la.colspace(self.right_matrix(e), self.char)[0] for e in self.class_idempotents]

    @cached_property
    def generators(self) -> list[np.ndarray]:
        """A small generating set of the algebra (greedy over the basis)."""
        hint = self.meta.get("generators")
        if hint is not None:
            return [la.asarray(g, self.char).reshape(self.dim) for g in hint]
        gens: list[np.ndarray] = []
        span, piv = la.colspace(self.unit.reshape(-1, 1), self.char)
        candidates = list(self.idempotents) + [self.basis_vector(i) for i in range(self.dim)]
        for v in candidates:
            if la.in_span(span, piv, v, self.char):
                continue
            gens.append(v)
            span, piv = _generated_span(self, gens)
            if span.shape[1] == self.dim:
                break
        return gens

    def __repr__(self):
        return f"Algebra(dim={self.dim}, char={self.char}, |E|={len(self.idempotents)})"


# ----------------------------------------------------------------------
# generic radical
# ----------------------------------------------------------------------


def _generic_radical(a: Algebra) -> np.ndarray:
    return radical_from_representation(a.mult, a.left_matrices, a.char)


def radical_from_representation(mult: np.ndarray, mats: np.ndarray, char: int) -> np.ndarray:
    """Jacobson radical of an algebra from traces in a faithful matrix representation.

    ``mult`` are structure constants and ``mats[i]`` represents basis element i.
    Characteristic 0 uses the trace-form kernel {x : tr(xy) = 0 for all y}.
    Characteristic p uses the iterated integral-trace refinement
    I_i = {x in I_{i-1} : (tr(lift(xy)^{p^i}) mod p^{i+1}) / p^i = 0}, which
    reaches the radical after floor(log_p d) + 1 steps for d x d matrices.
    """
    n, p = mult.shape[0], char
    if n == 0:
        return la.zeros((0, 0), p)
    d = mats.shape[1]
    traces = np.array([sum(mats[i][k, k] for k in range(d)) for i in range(n)], dtype=object)
    if p == 0:
        gram = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                gram[i, j] = sum(traces[k] * mult[i, j, k] for k in range(n))
        return la.colspace(la.kernel_raw(gram, 0), 0)[0]

    basis = la.eye(n, p)
    steps = int(math.floor(math.log(d, p) + 1e-9)) if d > 1 else 0
    big = la.dtype_for(p) is object or p ** (steps + 1) * p ** (steps + 1) * d >= 2**62
    Lint = mats.astype(object) if big else mats.astype(np.int64)
    for i in range(steps + 1):
        m = basis.shape[1]
        if m == 0:
            break
        q, pi = p ** (i + 1), p**i
        # products x_k * b_j, as coordinate vectors (k, j, l)
        prods = la.reduce(np.tensordot(basis.T, mult, axes=(1, 0)), p)
        g = la.zeros((m, n), p)
        if i == 0:
            g = la.reduce(prods.astype(object) @ np.array([int(t) % p for t in traces], dtype=object), p)
            g = la.asarray(g, p)
        else:
            for k in range(m):
                for j in range(n):
                    v = prods[k, j]
                    if la.is_zero(v):
                        continue
                    mat = np.tensordot(v.astype(Lint.dtype), Lint, axes=(0, 0)) % p
                    pw = _matpow_mod(mat, pi, q)
                    t = int(np.trace(pw)) % q
                    if t % pi:
                        raise InvalidAlgebra("trace divisibility failed in radical computation")
                    g[k, j] = (t // pi) % p
        ker = la.kernel_raw(g.T.copy(), p)  # combinations of current basis
        basis = la.colspace(la.matmul(basis, ker, p), p)[0]
    return basis


def _matpow_mod(m: np.ndarray, e: int, q: int) -> np.ndarray:
    result = np.eye(m.shape[0], dtype=m.dtype)
    base = m % q
    while e:
        if e & 1:
            result = (result @ base) % q
        e >>= 1
        if e:
            base = (base @ base) % q
    return result


def _generated_span(a: Algebra, gens: Sequence[np.ndarray]):
    """Reduced basis of the subalgebra generated by ``gens``."""
    cols = [a.unit] + list(gens)
    span, piv = la.colspace(np.stack(cols, axis=1), a.char)
    while True:
        prods = [a.mul(span[:, c], g) for c in range(span.shape[1]) for g in gens]
        new = [v for v in prods if not la.in_span(span, piv, v, a.char)]
        if not new:
            return span, piv
        span, piv = la.colspace(np.concatenate([span, np.stack(new, axis=1)], axis=1), a.char)


def _minimal_polynomial(a: Algebra, x: np.ndarray) -> list:
    """Coefficients (constant term first, monic) of the minimal polynomial of x."""
    powers = [a.unit]
    while True:
        nxt = a.mul(powers[-1], x)
        mat = np.stack(powers, axis=1)
        sol = la.solve_raw(mat, nxt.reshape(-1, 1), a.char)
        if sol is not None:
            return [la.reduce(-c, a.char) for c in sol[:, 0]] + [la.scalar(1, a.char)]
        powers.append(nxt)


def _poly_eval(a: Algebra, coeffs: Sequence, x: np.ndarray) -> np.ndarray:
    out = a.zero()
    for c in reversed(list(coeffs)):
        out = la.reduce(a.mul(out, x) + la.scalar(c, a.char) * a.unit, a.char)
    return out


def _splitting_polynomial(coeffs: Sequence, char: int):
    """CRT idempotent polynomial separating one primary factor of a polynomial.

    Returns coefficients (constant first) or None if the polynomial is a power
    of a single irreducible.
    """
    import sympy

    t = sympy.Symbol("t")
    dom = {"modulus": char} if char else {"domain": "QQ"}
    m = sympy.Poly([int(c) if char else sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
                   t, **dom)
    _, factors = m.factor_list()
    if len(factors) < 2:
        return None
    f, k = factors[0]
    g1 = f**k
    h = m.exquo(g1)
    s, _, _ = h.gcdex(g1)  # s*h = 1 mod g1 (gcd is 1)
    u = (s * h).rem(m)
    out = list(reversed(u.all_coeffs()))
    if char:
        return [int(c) % char for c in out]
    return [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in out]


def _center(a: Algebra) -> np.ndarray:
    p = a.char
    blocks = [la.reduce(a.right_matrix(a.basis_vector(j)) - a.left_matrix(a.basis_vector(j)), p)
              for j in range(a.dim)]
    return la.kernel_raw(np.concatenate(blocks, axis=0), p)


def _power(a: Algebra, x: np.ndarray, e: int) -> np.ndarray:
    result, base = a.unit.copy(), x
    while e:
        if e & 1:
            result = a.mul(result, base)
        e >>= 1
        if e:
            base = a.mul(base, base)
    return result


def _semisimple_idempotent(b: Algebra, seed: int = 0) -> Optional[np.ndarray]:
    """A nontrivial idempotent of a semisimple algebra, or None if it is a division algebra."""
    p = b.char
    z = _center(b)
    candidates = [z[:, c] for c in range(z.shape[1])]
    if p:
        # Frobenius-fixed central elements span one copy of F_p per simple factor
        frob = np.stack([la.reduce(_power(b, v, p) - v, p) for v in candidates], axis=1)
        k = la.matmul(z, la.kernel_raw(frob, p), p)
        candidates = [k[:, c] for c in range(k.shape[1])] + candidates
    for v in candidates:
        poly = _splitting_polynomial(_minimal_polynomial(b, v), p)
        if poly is not None:
            return _poly_eval(b, poly, v)
    if z.shape[1] == b.dim:
        if p:
            return None
        rng = np.random.default_rng(seed)
        for _ in range(20):
            v = la.asarray(rng.integers(-3, 4, size=b.dim).tolist(), 0)
            mp = _minimal_polynomial(b, v)
            poly = _splitting_polynomial(mp, 0)
            if poly is not None:
                return _poly_eval(b, poly, v)
            if len(mp) - 1 == b.dim:
                return None
        return None
    rng = np.random.default_rng(seed)
    for _ in range(500):
        if p:
            v = la.asarray(rng.integers(0, p, size=b.dim).tolist(), p)
        else:
            v = la.asarray(rng.integers(-3, 4, size=b.dim).tolist(), 0)
        poly = _splitting_polynomial(_minimal_polynomial(b, v), p)
        if poly is not None:
            return _poly_eval(b, poly, v)
    raise InvalidAlgebra("failed to split a non-commutative semisimple algebra")


def _lift_idempotent(a: Algebra, x: np.ndarray) -> np.ndarray:
    """Idempotent congruent to x modulo the radical (x^2 - x nilpotent)."""
    for _ in range(64):
        x2 = a.mul(x, x)
        if a.eq(x2, x):
            return x
        x = la.reduce(3 * x2 - 2 * a.mul(x2, x), a.char)
    raise InvalidAlgebra("idempotent lifting did not converge")


def _refine_idempotent(a: Algebra, e: np.ndarray) -> list[np.ndarray]:
    c = corner(a, e)
    emb = c.meta["embedding"]
    rad = c.rad
    if c.dim - rad.shape[1] <= 1:
        return [e]
    _, piv = la.colspace(rad, c.char)
    keep = [i for i in range(c.dim) if i not in set(piv)]
    b, _ = quotient_algebra(c, rad)
    y = _semisimple_idempotent(b)
    if y is None:
        return [e]
    x = c.zero()
    for i, k in enumerate(keep):
        x[k] = y[i]
    f = la.matmul(emb, _lift_idempotent(c, x), a.char)
    return _refine_idempotent(a, f) + _refine_idempotent(a, la.reduce(e - f, a.char))


# ----------------------------------------------------------------------
# quivers with relations
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuiverPresentation:
    """Vertices, arrows (name, source, target) and relations.

    A relation is a list of ``(coefficient, path)`` terms; a path is a tuple
    of arrow names written right to left, so ``("delta", "beta")`` means
    delta after beta.
    """

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]
    relations: tuple[tuple[tuple[object, tuple[str, ...]], ...], ...] = ()

    def __post_init__(self):
        verts = set(self.vertices)
        if len(verts) != len(self.vertices):
            raise PresentationError("duplicate vertex names")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names) or verts & set(names):
            raise PresentationError("arrow names must be distinct from each other and from vertices")
        for name, s, t in self.arrows:
            if s not in verts or t not in verts:
                raise PresentationError(f"arrow {name} has undeclared endpoint")
        for rel in self.relations:
            if not rel:
                raise PresentationError("empty relation")
            ends = set()
            for _, path in rel:
                if len(path) < 2:
                    raise PresentationError(
                        f"relation term {'*'.join(path) or '1'} has length < 2; the ideal must be admissible"
                    )
                ends.add((self.source(path), self.target(path)))
            if len(ends) != 1:
                raise PresentationError("paths in one relation must share source and target")

    @cached_property
    def arrow_map(self) -> dict[str, tuple[str, str]]:
        return {n: (s, t) for n, s, t in self.arrows}

    def source(self, path: Sequence[str]) -> str:
        self._check_path(path)
        return self.arrow_map[path[-1]][0]

    def target(self, path: Sequence[str]) -> str:
        self._check_path(path)
        return self.arrow_map[path[0]][1]

    def _check_path(self, path: Sequence[str]) -> None:
        for a in path:
            if a not in self.arrow_map:
                raise PresentationError(f"unknown arrow {a!r}")
        for left, right in zip(path, path[1:]):
            if self.arrow_map[right][1] != self.arrow_map[left][0]:
                raise PresentationError(f"path {'*'.join(path)} is not composable")

    def paths_of_length(self, k: int) -> list[tuple[str, ...]]:
        if k == 0:
            return []
        cur = [(a[0],) for a in self.arrows]
        for _ in range(k - 1):
            cur = [(b[0],) + p for p in cur for b in self.arrows if b[1] == self.arrow_map[p[0]][1]]
        return sorted(cur, key=self._key)

    def _key(self, path):
        idx = {a[0]: i for i, a in enumerate(self.arrows)}
        return (len(path), [idx[a] for a in path])


def build_path_algebra(q: QuiverPresentation, char: int, cap: int = DEFAULT_PATH_CAP) -> Algebra:
    """kQ/I with a basis of degree-lexicographic normal-form paths.

    Works modulo J^N (J the arrow ideal) for increasing N until every path
    of length N already lies in I + J^{N+1}; admissibility then gives
    J^N ⊆ I and kQ/I = (kQ/J^N)/(I/J^N).
    """
    la.check_char(char)
    rels = [[(la.scalar(c, char), tuple(p)) for c, p in r] for r in q.relations]
    for n in range(1, cap + 1):
        if not _saturated(q, rels, n, char):
            continue
        return _truncated_quotient(q, rels, n, char)
    raise NotFiniteDimensional(f"paths of length {cap} are not all in the relation ideal")


def _ideal_rows(q, rels, maxlen, char):
    """Rows spanning I modulo J^{maxlen+1}, over paths of length 1..maxlen."""
    paths = [p for k in range(1, maxlen + 1) for p in q.paths_of_length(k)]
    # columns ordered with larger paths first so pivots are leading terms
    paths.sort(key=q._key, reverse=True)
    col = {p: i for i, p in enumerate(paths)}
    rows = []
    for rel in rels:
        s, t = q.source(rel[0][1]), q.target(rel[0][1])
        rl = min(len(p) for _, p in rel)
        for lk in range(0, maxlen - rl + 1):
            lefts = [()] if lk == 0 else [p for p in q.paths_of_length(lk) if q.source(p) == t]
            for rk in range(0, maxlen - rl - lk + 1):
                rights = [()] if rk == 0 else [p for p in q.paths_of_length(rk) if q.target(p) == s]
                for left in lefts:
                    for right in rights:
                        row = la.zeros(len(paths), char)
                        for c, p in rel:
                            full = left + p + right
                            if len(full) <= maxlen:
                                row[col[full]] = la.reduce(row[col[full]] + c, char)
                        if not la.is_zero(row):
                            rows.append(row)
    mat = np.array(rows) if rows else la.zeros((0, len(paths)), char)
    return paths, col, mat


def _saturated(q, rels, n, char) -> bool:
    top = q.paths_of_length(n)
    if not top:
        return True
    paths, col, mat = _ideal_rows(q, rels, n, char)
    if mat.shape[0] == 0:
        return False
    span, piv = la.colspace(mat.T.copy(), char)
    for p in top:
        v = la.zeros(len(paths), char)
        v[col[p]] = 1
        if not la.in_span(span, piv, v, char):
            return False
    return True


def _truncated_quotient(q, rels, n, char) -> Algebra:
    maxlen = n - 1
    if maxlen >= 1:
        paths, col, mat = _ideal_rows(q, rels, maxlen, char)
    else:
        paths, col, mat = [], {}, la.zeros((0, 0), char)
    if mat.shape[0]:
        r, pivots = la.rref_raw(mat, char)
    else:
        r, pivots = mat, []
    pivset = set(pivots)
    free_paths = sorted((p for i, p in enumerate(paths) if i not in pivset), key=q._key)
    basis_paths = [("e", v) for v in q.vertices] + [("p", p) for p in free_paths]
    dim = len(basis_paths)
    vidx = {v: i for i, v in enumerate(q.vertices)}
    pidx = {p: len(q.vertices) + i for i, p in enumerate(free_paths)}

    def normal_form(path) -> np.ndarray:
        out = la.zeros(dim, char)
        if len(path) > maxlen:
            return out
        if path in pidx:
            out[pidx[path]] = 1
            return out
        row = r[pivots.index(col[path])]
        for j in np.nonzero(row)[0]:
            if j != col[path]:
                out[pidx[paths[j]]] = la.reduce(out[pidx[paths[j]]] - row[j], char)
        return out

    mult = la.zeros((dim, dim, dim), char)
    for i, (ki, bi) in enumerate(basis_paths):
        for j, (kj, bj) in enumerate(basis_paths):
            if ki == "e" and kj == "e":
                if bi == bj:
                    mult[i, j, i] = 1
            elif ki == "e":
                if q.target(bj) == bi:
                    mult[i, j, j] = 1
            elif kj == "e":
                if q.source(bi) == bj:
                    mult[i, j, i] = 1
            elif q.source(bi) == q.target(bj):
                mult[i, j] = normal_form(bi + bj)
    unit = la.zeros(dim, char)
    idem = []
    for v in q.vertices:
        unit[vidx[v]] = 1
        e = la.zeros(dim, char)
        e[vidx[v]] = 1
        idem.append(e)
    labels = [f"e_{b}" if k == "e" else "*".join(b) for k, b in basis_paths]
    degrees = [0 if k == "e" else len(b) for k, b in basis_paths]
    srad = la.zeros((dim, dim - len(q.vertices)), char)
    for c in range(dim - len(q.vertices)):
        srad[len(q.vertices) + c, c] = 1
    meta = {
        "kind": "path",
        "quiver": q,
        "basis_paths": [b if k == "p" else () for k, b in basis_paths],
        "vertex_index": vidx,
        "path_index": pidx,
    }
    alg = Algebra(char, mult, unit, idem, labels, degrees, srad, meta)
    alg.meta["normal_form"] = normal_form
    return alg


def path_element(a: Algebra, path: Sequence[str]) -> np.ndarray:
    """Element of a path algebra represented by ``path`` (right-to-left)."""
    pidx = a.meta["path_index"]
    out = None
    for arrow in path:
        v = a.basis_vector(pidx[(arrow,)])
        out = v if out is None else a.mul(out, v)
    return out


def vertex_element(a: Algebra, v: str) -> np.ndarray:
    return a.basis_vector(a.meta["vertex_index"][v])


# ----------------------------------------------------------------------
# posets and incidence algebras
# ----------------------------------------------------------------------


class PosetData:
    """A finite poset; ``leq[i, j]`` is True iff elements[i] <= elements[j]."""

    def __init__(self, elements: Sequence, relations: Sequence[tuple] = ()):
        self.elements = list(elements)
        if len(set(self.elements)) != len(self.elements):
            raise InvalidPoset("duplicate poset elements")
        n = len(self.elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        leq = np.eye(n, dtype=bool)
        for a, b in relations:
            if a not in self.index or b not in self.index:
                raise InvalidPoset(f"relation ({a}, {b}) mentions an undeclared element")
            leq[self.index[a], self.index[b]] = True
        for k in range(n):  # Warshall
            leq |= leq[:, [k]] & leq[[k], :]
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise InvalidPoset("relation is not antisymmetric")
        self.leq = leq

    @classmethod
    def from_matrix(cls, elements, leq: np.ndarray) -> "PosetData":
        pairs = [(elements[i], elements[j]) for i, j in zip(*np.nonzero(leq))]
        return cls(elements, pairs)

    def __len__(self):
        return len(self.elements)

    def less(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j]) and i != j

    @cached_property
    def cover_edges(self) -> list[tuple[int, int]]:
        n = len(self)
        return [
            (i, j)
            for i in range(n)
            for j in range(n)
            if self.less(i, j) and not any(self.less(i, k) and self.less(k, j) for k in range(n))
        ]

    @cached_property
    def comparable_pairs(self) -> list[tuple[int, int]]:
        """All (a, b) with a <= b, identities first then in index order."""
        n = len(self)
        ids = [(i, i) for i in range(n)]
        return ids + [(i, j) for i in range(n) for j in range(n) if self.less(i, j)]

    def neighbours(self, i: int) -> list[int]:
        return sorted({b for a, b in self.cover_edges if a == i} | {a for a, b in self.cover_edges if b == i})

    def is_connected(self) -> bool:
        n = len(self)
        if n == 0:
            return True
        seen, stack = {0}, [0]
        while stack:
            for j in self.neighbours(stack.pop()):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        p = np.asarray(perm)
        return bool(np.array_equal(self.leq[np.ix_(p, p)], self.leq))

    def __repr__(self):
        return f"PosetData({self.elements}, covers={[(self.elements[a], self.elements[b]) for a, b in self.cover_edges]})"


def build_incidence_algebra(p: PosetData, char: int) -> Algebra:
    """Basis: pairs (a, b) with a <= b, read as the morphism a -> b."""
    la.check_char(char)
    pairs = p.comparable_pairs
    idx = {pr: i for i, pr in enumerate(pairs)}
    dim = len(pairs)
    mult = la.zeros((dim, dim, dim), char)
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            if a == d:
                mult[i, j, idx[(c, b)]] = 1
    n = len(p)
    unit = la.zeros(dim, char)
    unit[:n] = 1
    idem = [la.zeros(dim, char) for _ in range(n)]
    for i in range(n):
        idem[i][i] = 1
    srad = la.zeros((dim, dim - n), char)
    for c in range(dim - n):
        srad[n + c, c] = 1
    labels = [
        f"1_{p.elements[a]}" if a == b else f"{p.elements[a]}<{p.elements[b]}" for a, b in pairs
    ]
    degrees = None
    meta = {"kind": "incidence", "poset": p, "pair_index": idx}
    return Algebra(char, mult, unit, idem, labels, degrees, srad, meta)


# ----------------------------------------------------------------------
# derived algebras
# ----------------------------------------------------------------------


def subalgebra(a: Algebra, basis: np.ndarray, idempotents: Sequence[np.ndarray], labels=None, degrees=None,
               check: bool = True) -> tuple[Algebra, np.ndarray]:
    """Subalgebra spanned by the columns of ``basis``; returns it with its embedding."""
    emb, piv = la.colspace(basis, a.char)
    m = emb.shape[1]
    mult = la.zeros((m, m, m), a.char)
    for i in range(m):
        for j in range(m):
            prod = a.mul(emb[:, i], emb[:, j])
            if not la.in_span(emb, piv, prod, a.char):
                raise InvalidAlgebra("subspace is not closed under multiplication")
            mult[i, j] = prod[piv]
    if not la.in_span(emb, piv, a.unit, a.char):
        raise InvalidAlgebra("subspace does not contain the unit")
    unit = a.unit[piv]
    idem = [e[piv] for e in idempotents]
    sub = Algebra(a.char, mult, unit, idem, labels, degrees, check=check)
    return sub, emb


def quotient_algebra(a: Algebra, ideal: np.ndarray) -> tuple[Algebra, np.ndarray]:
    """A / I for a two-sided ideal I (columns); returns it with the projection matrix."""
    ib, piv = la.colspace(ideal, a.char)
    keep = [i for i in range(a.dim) if i not in set(piv)]
    proj = la.zeros((len(keep), a.dim), a.char)
    for i in range(a.dim):
        v = a.basis_vector(i)
        if ib.shape[1]:
            v = la.reduce(v - ib @ v[piv], a.char)
        proj[:, i] = v[keep]
    m = len(keep)
    mult = la.zeros((m, m, m), a.char)
    for i, s in enumerate(keep):
        for j, t in enumerate(keep):
            mult[i, j] = la.matmul(proj, a.mult[s, t], a.char)
    unit = la.matmul(proj, a.unit, a.char)
    idem = [la.matmul(proj, e, a.char) for e in a.idempotents]
    idem = [e for e in idem if not la.is_zero(e)]
    labels = [a.labels[i] for i in keep]
    degrees = [a.degrees[i] for i in keep] if a.degrees is not None else None
    return Algebra(a.char, mult, unit, idem, labels, degrees, check=False), proj


def corner(a: Algebra, e: np.ndarray) -> Algebra:
    """The algebra eAe with unit e."""
    e = la.asarray(e, a.char).reshape(a.dim)
    if not a.eq(a.mul(e, e), e):
        raise NotIdempotent("corner requires an idempotent")
    basis = a.corner_space(e, e)
    inside = [f for f in a.idempotents if a.eq(a.mul(e, f), f) and a.eq(a.mul(f, e), f)]
    total = a.zero()
    for f in inside:
        total = la.reduce(total + f, a.char)
    idem = inside if inside and a.eq(total, e) else [e]
    _, piv = la.colspace(basis, a.char)
    labels = None
    if all(np.count_nonzero(basis[:, c]) == 1 for c in range(basis.shape[1])):
        labels = [a.labels[int(np.nonzero(basis[:, c])[0][0])] for c in range(basis.shape[1])]
    m = basis.shape[1]
    mult = la.zeros((m, m, m), a.char)
    for i in range(m):
        for j in range(m):
            mult[i, j] = a.mul(basis[:, i], basis[:, j])[piv]
    return Algebra(a.char, mult, e[piv], [f[piv] for f in idem], labels, meta={"embedding": basis})


def opposite(a: Algebra) -> Algebra:
    mult = np.ascontiguousarray(np.transpose(a.mult, (1, 0, 2)))
    meta = {"opposite_of": a}
    return Algebra(a.char, mult, a.unit, a.idempotents, a.labels, a.degrees, a.structural_radical, meta,
                   check=False)


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    """A ⊗ B with basis a_i ⊗ b_j at index i * dim(B) + j."""
    if a.char != b.char:
        raise InvalidAlgebra("tensor factors must share the characteristic")
    n = a.dim * b.dim
    mult = la.reduce(np.einsum("ikm,jln->ijklmn", a.mult, b.mult), a.char).reshape(n, n, n)
    unit = la.reduce(np.outer(a.unit, b.unit).reshape(n), a.char)
    idem = [la.reduce(np.outer(e, f).reshape(n), a.char) for e in a.idempotents for f in b.idempotents]
    labels = [f"{x}(x){y}" for x in a.labels for y in b.labels]
    return Algebra(a.char, mult, unit, idem, labels)


def matrix_units(n: int, char: int) -> Algebra:
    """M_n(k) with basis E_{rs} at index r * n + s."""
    m = la.zeros((n * n, n * n, n * n), char)
    for r, s, t in itertools.product(range(n), repeat=3):
        m[r * n + s, s * n + t, r * n + t] = 1
    unit = la.zeros(n * n, char)
    for i in range(n):
        unit[i * n + i] = 1
    labels = [f"E{r}{s}" for r in range(n) for s in range(n)]
    return Algebra(char, m, unit, [_unit_vec(n * n, i * n + i, char) for i in range(n)], labels)


def matrix_algebra(b: Algebra, n: int) -> Algebra:
    """M_n(B) = M_n(k) ⊗ B."""
    return tensor_algebra(matrix_units(n, b.char), b)


def _unit_vec(n, i, char):
    v = la.zeros(n, char)
    v[i] = 1
    return v


def truncated_polynomial(m: int, char: int) -> Algebra:
    """k[X]/(X^m) with basis 1, X, ..., X^{m-1}, graded by degree."""
    mult = la.zeros((m, m, m), char)
    for i in range(m):
        for j in range(m):
            if i + j < m:
                mult[i, j, i + j] = 1
    labels = ["1"] + [f"X^{i}" if i > 1 else "X" for i in range(1, m)]
    srad = la.zeros((m, m - 1), char)
    for c in range(m - 1):
        srad[c + 1, c] = 1
    return Algebra(char, mult, _unit_vec(m, 0, char), [_unit_vec(m, 0, char)], labels, list(range(m)), srad,
                   {"kind": "truncated_polynomial", "m": m})


def semisimple_split(n: int, char: int) -> Algebra:
    """k x ... x k with n factors."""
    mult = la.zeros((n, n, n), char)
    for i in range(n):
        mult[i, i, i] = 1
    unit = la.zeros(n, char)
    unit[:] = 1
    return Algebra(char, mult, unit, [_unit_vec(n, i, char) for i in range(n)], [f"f{i}" for i in range(n)],
                   [0] * n)


# ----------------------------------------------------------------------
# structural queries
# ----------------------------------------------------------------------


def radical(a: Algebra, method: str = "auto") -> np.ndarray:
    return a.radical(method)


def is_local(a: Algebra) -> bool:
    """a / rad(a) is one-dimensional (computed over the prime field)."""
    return a.dim - a.rad.shape[1] == 1


def is_connected(a: Algebra) -> bool:
    n = len(a.idempotents)
    if n <= 1:
        return True
    adj = {i: set() for i in range(n)}
    for i, j in itertools.combinations(range(n), 2):
        ei, ej = a.idempotents[i], a.idempotents[j]
        if a.corner_space(ei, ej).shape[1] or a.corner_space(ej, ei).shape[1]:
            adj[i].add(j)
            adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def primitivity_check(a: Algebra) -> list[bool]:
    return [is_local(corner(a, e)) for e in a.idempotents]


def simple_dims(a: Algebra) -> list[int]:
    """Dimension of the simple top of A e_c for each idempotent class."""
    out = []
    for e in a.class_idempotents:
        ae = la.colspace(a.right_matrix(e), a.char)[0]
        rad_e = la.colspace(la.matmul(a.right_matrix(e), a.rad, a.char), a.char)[0]
        out.append(ae.shape[1] - rad_e.shape[1])
    return out


def fingerprint(a: Algebra) -> dict:
    """Morita-sensitive invariants used to recognise algebras up to isomorphism."""
    return {
        "dim": a.dim,
        "radical_layers": list(a.radical_layers),
        "simple_count": len(a.idempotent_classes),
        "simple_dims": sorted(simple_dims(a)),
        "projective_dims": sorted(pb.shape[1] for pb in a.projective_bases),
    }


def morita_fingerprint(a: Algebra) -> dict:
    """Invariants of the basic algebra: number of simples and Cartan data."""
    cart = cartan_matrix(a)
    return {"simple_count": len(cart), "cartan": _canonical_matrix(cart)}


def cartan_matrix(a: Algebra) -> list[list[int]]:
    """c[i][j] = multiplicity of simple i in projective A e_j (via dim e_i A e_j)."""
    reps = a.class_idempotents
    # e_i S_i has dimension dim e_i (A/rad) e_i
    local = []
    for e in reps:
        full = a.corner_space(e, e).shape[1]
        radpart = la.colspace(la.matmul(la.matmul(a.left_matrix(e), a.right_matrix(e), a.char), a.rad, a.char),
                              a.char)[0].shape[1]
        local.append(full - radpart)
    return [[a.corner_space(ei, ej).shape[1] // local[i] for j, ej in enumerate(reps)] for i, ei in enumerate(reps)]


def _canonical_matrix(c: list[list[int]]):
    n = len(c)
    if n > 7:
        return sorted(map(sorted, c))
    best = None
    for perm in itertools.permutations(range(n)):
        cand = tuple(tuple(c[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return [list(r) for r in best] if best else []


def is_algebra_hom(f: np.ndarray, a: Algebra, b: Algebra) -> bool:
    """f maps coordinates in ``a`` to coordinates in ``b``; checks unit and products."""
    p = a.char
    if not b.eq(la.matmul(f, a.unit, p), b.unit):
        return False
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = la.matmul(f, a.mult[i, j], p)
            rhs = b.mul(f[:, i], f[:, j])
            if not b.eq(lhs, rhs):
                return False
    return True


def truncated_polynomial_iso(a: Algebra) -> Optional[np.ndarray]:
    """Explicit isomorphism k[X]/(X^m) -> a when a is of that form, else None.

    a must be local with rad/rad^2 one-dimensional; X maps to a radical
    element outside rad^2.
    """
    if not is_local(a):
        return None
    layers = a.radical_layers
    if layers and (len(layers) == 1 and layers[0] != 1 or len(layers) > 1 and layers[0] - layers[1] != 1):
        return None
    m = a.dim
    rad2 = a.rad_power(2) if layers else la.zeros((m, 0), a.char)
    _, piv2 = la.colspace(rad2, a.char) if rad2.shape[1] else (rad2, [])
    x = None
    for c in range(a.rad.shape[1]):
        v = a.rad[:, c]
        if not la.in_span(rad2, piv2, v, a.char):
            x = v
            break
    if x is None:
        x = a.zero()
    f = la.zeros((m, m), a.char)
    pw = a.unit.copy()
    for i in range(m):
        f[:, i] = pw
        pw = a.mul(pw, x)
    if not la.is_zero(pw) or la.rank_raw(f, a.char) != m:
        return None
    src = truncated_polynomial(m, a.char)
    return f if is_algebra_hom(f, src, a) else None


def cyclic_group_algebra(n: int, char: int) -> Algebra:
    """kC_n with basis g^0, ..., g^{n-1}."""
    mult = la.zeros((n, n, n), char)
    for i in range(n):
        for j in range(n):
            mult[i, j, (i + j) % n] = 1
    return Algebra(char, mult, _unit_vec(n, 0, char), [_unit_vec(n, 0, char)], [f"g^{i}" for i in range(n)])
