"""Exact dense linear algebra over prime fields F_p and over Q.

Matrices are numpy arrays.  Over F_p they are int64 arrays holding residues
in [0, p); over Q (characteristic 0) they are object arrays of
``fractions.Fraction``.  The raw helpers take ``(array, char)`` pairs and are
what the rest of the package uses; :class:`Mat` is the checked public
wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import CharacteristicMismatch, ShapeError

# int64 products of residues stay exact below this bound; larger primes use
# object arrays of Python ints.
_INT64_PRIME_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_char(char: int) -> int:
    if char < 0 or (char > 0 and not is_prime(char)):
        raise ValueError(f"characteristic must be 0 or a prime, got {char}")
    return char


def dtype_for(char: int):
    return np.int64 if 0 < char < _INT64_PRIME_LIMIT else object


def scalar(x, char: int):
    """Canonical representative of ``x`` in the field of characteristic ``char``."""
    if char == 0:
        return Fraction(x)
    if isinstance(x, Fraction):
        return int(x.numerator * pow(x.denominator, -1, char)) % char
    return int(x) % char


def asarray(data, char: int) -> np.ndarray:
    """Coerce nested lists/arrays to a canonical field array."""
    a = np.asarray(data, dtype=object)
    if char == 0:
        out = np.empty(a.shape, dtype=object)
        flat_in, flat_out = a.reshape(-1), out.reshape(-1)
        for i, x in enumerate(flat_in):
            flat_out[i] = Fraction(x)
        return out
    if a.size and any(isinstance(x, Fraction) for x in a.reshape(-1)):
        a = np.vectorize(lambda x: scalar(x, char), otypes=[object])(a)
    return np.asarray(a, dtype=dtype_for(char)) % char if a.size else np.zeros(a.shape, dtype_for(char))


def zeros(shape, char: int) -> np.ndarray:
    if char == 0:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=dtype_for(char))


def eye(n: int, char: int) -> np.ndarray:
    out = zeros((n, n), char)
    for i in range(n):
        out[i, i] = 1 if char else Fraction(1)
    return out


def reduce(a: np.ndarray, char: int) -> np.ndarray:
    return a % char if char else a


def inv(x, char: int):
    if char:
        return pow(int(x), -1, char)
    return 1 / Fraction(x)


def matmul(a: np.ndarray, b: np.ndarray, char: int) -> np.ndarray:
    return reduce(a @ b, char)


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a != 0)


def rref_raw(a: np.ndarray, char: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(a, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = reduce(a[r] * inv(a[r, c], char), char)
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            a[nzr] = reduce(a[nzr] - np.outer(col[nzr], a[r]), char)
        pivots.append(c)
        r += 1
    return a, pivots


def rank_raw(a: np.ndarray, char: int) -> int:
    if a.size == 0:
        return 0
    return len(rref_raw(a, char)[1])


def kernel_raw(a: np.ndarray, char: int) -> np.ndarray:
    """Columns form a basis of the right null space (free variables set to 1 in turn)."""
    rows, cols = a.shape
    r, pivots = rref_raw(a, char) if rows else (a, [])
    free = [c for c in range(cols) if c not in set(pivots)]
    out = zeros((cols, len(free)), char)
    for j, f in enumerate(free):
        out[f, j] = 1 if char else Fraction(1)
        for i, pc in enumerate(pivots):
            out[pc, j] = reduce(-r[i, f], char)
    return out


def solve_raw(a: np.ndarray, b: np.ndarray, char: int) -> Optional[np.ndarray]:
    """Some x with a x = b (free variables zero), or None when inconsistent."""
    rows, cols = a.shape
    aug = np.concatenate([a, b], axis=1) if rows else a
    r, pivots = rref_raw(aug, char)
    if any(p >= cols for p in pivots):
        return None
    x = zeros((cols, b.shape[1]), char)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x


def inverse_raw(a: np.ndarray, char: int) -> Optional[np.ndarray]:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    r, pivots = rref_raw(np.concatenate([a, eye(n, char)], axis=1), char)
    if pivots[:n] != list(range(n)):
        return None
    return r[:, n:]


def colspace(a: np.ndarray, char: int) -> tuple[np.ndarray, list[int]]:
    """Reduced basis (as columns) of the column space.

    The returned basis ``B`` satisfies ``B[pivots] == I``, so the
    coordinates of a vector ``v`` in the span are simply ``v[pivots]``.
    """
    n = a.shape[0]
    if a.shape[1] == 0:
        return zeros((n, 0), char), []
    r, pivots = rref_raw(a.T, char)
    return r[: len(pivots)].T.copy(), pivots


def in_span(basis: np.ndarray, pivots: list[int], v: np.ndarray, char: int) -> bool:
    """Membership test against a reduced basis from :func:`colspace`."""
    if basis.shape[1] == 0:
        return is_zero(v)
    return not np.any(reduce(basis @ v[pivots] - v, char) != 0)


def intersect_raw(bases: Sequence[np.ndarray], char: int) -> np.ndarray:
    """Basis (columns) of the intersection of the column spans."""
    cur, _ = colspace(bases[0], char)
    for b in bases[1:]:
        if cur.shape[1] == 0:
            break
        # x in span(cur) ∩ span(b):  cur u = b w
        k = kernel_raw(np.concatenate([cur, reduce(-b, char)], axis=1), char)
        cur, _ = colspace(matmul(cur, k[: cur.shape[1]], char), char)
    return cur


def same_span(a: np.ndarray, b: np.ndarray, char: int) -> bool:
    ra, _ = colspace(a, char)
    rb, _ = colspace(b, char)
    return ra.shape == rb.shape and not np.any(ra != rb)


def to_jsonable(a: np.ndarray, char: int):
    if char:
        return np.asarray(a, dtype=np.int64).tolist()
    return [[str(x) for x in row] for row in a] if a.ndim == 2 else [str(x) for x in a]


@dataclass(frozen=True, eq=False)
class Mat:
    """A dense matrix with entries in F_p (char p) or Q (char 0)."""

    char: int
    data: np.ndarray

    def __post_init__(self):
        check_char(self.char)
        data = asarray(self.data, self.char)
        if data.ndim != 2:
            raise ShapeError("Mat data must be two-dimensional")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows, char: int, ncols: int | None = None) -> "Mat":
        rows = list(rows)
        if not rows:
            return cls(char, zeros((0, ncols or 0), char))
        return cls(char, rows)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.char == other.char
            and self.data.shape == other.data.shape
            and not np.any(self.data != other.data)
        )

    def __matmul__(self, other: "Mat") -> "Mat":
        _same_char(self, other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return Mat(self.char, matmul(self.data, other.data, self.char))

    def tolist(self):
        return to_jsonable(self.data, self.char)

    def __repr__(self):
        return f"Mat(char={self.char}, {self.tolist()})"


def _same_char(*ms: Mat) -> int:
    chars = {m.char for m in ms}
    if len(chars) != 1:
        raise CharacteristicMismatch(f"mixed characteristics {sorted(chars)}")
    return chars.pop()


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    r, pivots = rref_raw(m.data, m.char)
    return Mat(m.char, r), pivots, len(pivots)


def kernel_basis(m: Mat) -> list[Mat]:
    k = kernel_raw(m.data, m.char)
    return [Mat(m.char, k[:, [j]]) for j in range(k.shape[1])]


def solve(a: Mat, b: Mat) -> Optional[Mat]:
    _same_char(a, b)
    if a.rows != b.rows:
        raise ShapeError(f"row mismatch: {a.rows} vs {b.rows}")
    x = solve_raw(a.data, b.data, a.char)
    return None if x is None else Mat(a.char, x)


def subspace_intersect(bases: Sequence[Sequence[Mat]]) -> list[Mat]:
    """Intersection of subspaces, each given as a list of column vectors."""
    vecs = [v for b in bases for v in b]
    if not bases:
        raise ShapeError("no subspaces given")
    if not vecs:
        return []
    char = _same_char(*vecs)
    lengths = {v.rows for v in vecs}
    if len(lengths) != 1 or any(v.cols != 1 for v in vecs):
        raise ShapeError("all vectors must be columns of one common length")
    n = lengths.pop()
    arrays = [
        np.concatenate([v.data for v in b], axis=1) if b else zeros((n, 0), char) for b in bases
    ]
    cap = intersect_raw(arrays, char)
    return [Mat(char, cap[:, [j]]) for j in range(cap.shape[1])]
