"""Exact bulk arithmetic and linear algebra over cyclotomic fields.

Two layers live here:

* ``CycArray`` - an exact array of cyclotomic numbers sharing one order N and
  one rational scale.  The value at a cell is ``scale * sum_k counts[..., k] *
  zeta_N^k`` with integer counts, so bulk products and contractions become
  integer numpy work (exponent arithmetic mod N) instead of per-entry object
  arithmetic.  Canonicalization multiplies the counts by the integer reduction
  matrix of Phi_N, which makes equality and zero tests exact.

* Row-reduction utilities over object arrays of ``Cyclotomic`` scalars, used
  for exact ranks, nullspaces и unique solves at modest sizes.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import CotwistError
from .scalars import Cyclotomic, _reduction_table, euler_phi, zeta_embeddings


def _scale_gcd(a: Fraction, b: Fraction) -> Fraction:
    # gcd on positive rationals: gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2)
    return Fraction(
        math.gcd(a.numerator, b.numerator),
        math.lcm(a.denominator, b.denominator),
    )


class CycArray:
    """Exact cyclotomic array: ``value = scale * sum_k counts[..., k] zeta^k``."""

    __slots__ = ("order", "scale", "counts")

    def __init__(self, order: int, scale: Fraction, counts: np.ndarray):
        if counts.shape[-1] != order:
            raise ValueError(f"last axis must have length {order}")
        self.order = order
        self.scale = Fraction(scale)
        self.counts = counts

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, shape, order: int) -> "CycArray":
        return cls(order, Fraction(1), np.zeros((*shape, order), dtype=np.int64))

    @classmethod
    def from_exponents(cls, order: int, exponents: np.ndarray, scale=Fraction(1)) -> "CycArray":
        """One root of unity per cell: value = scale * zeta^exponents."""
        exponents = np.asarray(exponents) % order
        counts = np.zeros((*exponents.shape, order), dtype=np.int64)
        np.put_along_axis(counts, exponents[..., None], 1, axis=-1)
        return cls(order, Fraction(scale), counts)

    @classmethod
    def from_cyclotomics(cls, grid, order: int | None = None) -> "CycArray":
        """Encode an array/list of Cyclotomic values exactly (common order)."""
        arr = np.asarray(grid, dtype=object)
        flat = arr.reshape(-1)
        if order is None:
            orders = {v.order for v in flat}
            if len(orders) > 1:
                raise ValueError(f"mixed orders {sorted(orders)}; rescale first")
            order = orders.pop() if orders else 1
        den = 1
        for v in flat:
            if v.order != order:
                raise ValueError("entry order mismatch; rescale first")
            for c in v.coeffs:
                den = math.lcm(den, c.denominator)
        counts = np.zeros((flat.size, order), dtype=np.int64)
        phi = euler_phi(order)
        for i, v in enumerate(flat):
            for k in range(phi):
                c = v.coeffs[k]
                if c:
                    counts[i, k] = c.numerator * (den // c.denominator)
        return cls(order, Fraction(1, den), counts.reshape(*arr.shape, order))

    # -- shape plumbing ------------------------------------------------------

    @property
    def shape(self):
        return self.counts.shape[:-1]

    def reshape(self, *shape) -> "CycArray":
        return CycArray(self.order, self.scale, self.counts.reshape(*shape, self.order))

    def transpose(self, axes) -> "CycArray":
        full = tuple(axes) + (self.counts.ndim - 1,)
        return CycArray(self.order, self.scale, self.counts.transpose(full))

    def take(self, indices, axis=0) -> "CycArray":
        return CycArray(self.order, self.scale, np.take(self.counts, indices, axis=axis))

    def copy(self) -> "CycArray":
        return CycArray(self.order, self.scale, self.counts.copy())

    # -- exact structure -----------------------------------------------------

    def canonical(self) -> np.ndarray:
        """Integer coefficients on the canonical basis (scale still applies)."""
        red = _reduction_table(self.order)
        return self.counts @ red

    def zero_mask(self) -> np.ndarray:
        return ~np.any(self.canonical(), axis=-1)

    def is_zero(self) -> bool:
        return bool(np.all(self.zero_mask()))

    def single_term(self):
        """Return (exponents, numerators) if every cell has <= 1 nonzero count."""
        nz = np.count_nonzero(self.counts, axis=-1)
        if np.any(nz > 1):
            return None
        exps = np.argmax(self.counts != 0, axis=-1)
        nums = np.take_along_axis(self.counts, exps[..., None], axis=-1)[..., 0]
        return exps, nums

    # -- arithmetic ------------------------------------------------------------

    def _aligned(self, other: "CycArray"):
        if other.order != self.order:
            raise ValueError(f"order mismatch {self.order} vs {other.order}")
        if other.scale == self.scale:
            return self.counts, other.counts, self.scale
        g = _scale_gcd(abs(self.scale), abs(other.scale))
        fa = self.scale / g
        fb = other.scale / g
        return (
            self.counts * int(fa),
            other.counts * int(fb),
            g,
        )

    def __add__(self, other: "CycArray") -> "CycArray":
        ca, cb, s = self._aligned(other)
        return CycArray(self.order, s, ca + cb)

    def __sub__(self, other: "CycArray") -> "CycArray":
        ca, cb, s = self._aligned(other)
        return CycArray(self.order, s, ca - cb)

    def __neg__(self) -> "CycArray":
        return CycArray(self.order, self.scale, -self.counts)

    def scale_by(self, q) -> "CycArray":
        return CycArray(self.order, self.scale * Fraction(q), self.counts)

    def mul_cyclotomic(self, value: Cyclotomic) -> "CycArray":
        """Multiply every cell by one exact cyclotomic value."""
        if value.order != self.order:
            raise ValueError("order mismatch")
        den = 1
        for c in value.coeffs:
            den = math.lcm(den, c.denominator)
        out = np.zeros_like(self.counts)
        n = self.order
        for k, c in enumerate(value.coeffs):
            if c:
                out += np.roll(self.counts, k, axis=-1) * (c.numerator * (den // c.denominator))
        return CycArray(n, self.scale / den, out)

    def conj(self) -> "CycArray":
        """Complex conjugation: exponent k -> -k mod N."""
        idx = (-np.arange(self.order)) % self.order
        return CycArray(self.order, self.scale, self.counts[..., idx])

    def eq(self, other: "CycArray") -> bool:
        ca, cb, _ = self._aligned(other)
        red = _reduction_table(self.order)
        return bool(np.array_equal(ca @ red, cb @ red))

    # -- conversions --------------------------------------------------------------

    def entry(self, *index) -> Cyclotomic:
        vec = self.counts[index]
        phi = euler_phi(self.order)
        red = _reduction_table(self.order)
        canon = vec @ red
        return Cyclotomic(self.order, tuple(self.scale * int(canon[k]) for k in range(phi)))

    def to_object(self) -> np.ndarray:
        """Materialize as an object array of Cyclotomic (small arrays only)."""
        red = _reduction_table(self.order)
        canon = self.counts @ red
        phi = euler_phi(self.order)
        flat = canon.reshape(-1, phi)
        out = np.empty(flat.shape[0], dtype=object)
        s = self.scale
        for i in range(flat.shape[0]):
            out[i] = Cyclotomic(self.order, tuple(s * int(c) for c in flat[i]))
        return out.reshape(self.shape)

    def embed(self) -> np.ndarray:
        """Complex float array of the values."""
        z = zeta_embeddings(self.order)
        return (self.counts @ z) * float(self.scale)


def cyc_tensordot(a: CycArray, b: CycArray, axes) -> CycArray:
    """Exact tensordot: integer contraction plus exponent convolution mod N."""
    if a.order != b.order:
        raise ValueError("order mismatch")
    n = a.order
    res = None
    for i in range(n):
        ai = a.counts[..., i]
        if not ai.any():
            continue
        for j in range(n):
            bj = b.counts[..., j]
            if not bj.any():
                continue
            block = np.tensordot(ai, bj, axes=axes)
            if res is None:
                out_shape = block.shape
                res = np.zeros((*out_shape, n), dtype=np.int64)
            res[..., (i + j) % n] += block
    if res is None:
        # contract shapes with numpy to get the right output shape
        block = np.tensordot(a.counts[..., 0], b.counts[..., 0], axes=axes)
        res = np.zeros((*block.shape, n), dtype=np.int64)
    return CycArray(n, a.scale * b.scale, res)


def ga_mul(u: CycArray, v: CycArray, mul_table: np.ndarray) -> CycArray:
    """Product of two group-algebra elements given as CycArray vectors.

    ``u`` and ``v`` are indexed by group elements; ``mul_table[a, b]`` is the
    index of the product element.  Both single-term and general entries are
    handled exactly.
    """
    if u.order != v.order:
        raise ValueError("order mismatch")
    n = u.order
    m = mul_table.shape[0]
    su, sv = u.single_term(), v.single_term()
    out = np.zeros((m, n), dtype=np.int64)
    if su is not None and sv is not None:
        ue, un = su
        ve, vn = sv
        mask_u = un != 0
        mask_v = vn != 0
        ia = np.nonzero(mask_u)[0]
        ib = np.nonzero(mask_v)[0]
        if ia.size and ib.size:
            tgt = mul_table[np.ix_(ia, ib)].ravel()
            exps = ((ue[ia][:, None] + ve[ib][None, :]) % n).ravel()
            vals = (un[ia][:, None] * vn[ib][None, :]).ravel()
            np.add.at(out, (tgt, exps), vals)
    else:
        rolled = [np.roll(v.counts, k, axis=-1) for k in range(n)]
        for a in range(m):
            ua = u.counts[a]
            targets = mul_table[a]
            for i in range(n):
                ci = ua[i]
                if ci:
                    np.add.at(out, targets, rolled[i] * ci)
    return CycArray(n, u.scale * v.scale, out)


def ga_identity(size: int, order: int, identity_index: int = 0) -> CycArray:
    out = CycArray.zeros((size,), order)
    out.counts[identity_index, 0] = 1
    return out


# ---------------------------------------------------------------------------
# exact row reduction over object arrays of Cyclotomic


def _as_object_matrix(mat) -> np.ndarray:
    arr = np.asarray(mat, dtype=object)
    if arr.ndim != 2:
        raise ValueError("need a 2-d matrix")
    return arr


def rref_cyclotomic(mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q(zeta_N); returns (matrix, pivot columns)."""
    a = _as_object_matrix(mat).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if not a[i, c].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        inv = a[r, c].inverse()
        for j in range(c, cols):
            a[r, j] = a[r, j] * inv
        for i in range(rows):
            if i != r and not a[i, c].is_zero:
                f = a[i, c]
                for j in range(c, cols):
                    a[i, j] = a[i, j] - f * a[r, j]
        pivots.append(c)
        r += 1
    return a, pivots


def cyc_rank(mat) -> int:
    """Exact rank over the cyclotomic field."""
    _, pivots = rref_cyclotomic(mat)
    return len(pivots)


def cyc_nullspace(mat) -> list[np.ndarray]:
    """Exact right nullspace basis vectors (object arrays of Cyclotomic)."""
    a = _as_object_matrix(mat)
    rows, cols = a.shape
    red, pivots = rref_cyclotomic(a)
    order = a[0, 0].order if cols and rows else 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = np.array([Cyclotomic.zero(order) for _ in range(cols)], dtype=object)
        vec[fc] = Cyclotomic.one(order)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r, fc]
        basis.append(vec)
    return basis


def cyc_solve(mat, rhs) -> np.ndarray | None:
    """Unique exact solution of ``mat @ x = rhs`` or None if none/ambiguous."""
    a = _as_object_matrix(mat)
    rows, cols = a.shape
    rhs = np.asarray(rhs, dtype=object).reshape(rows, 1)
    aug = np.concatenate([a, rhs], axis=1)
    red, pivots = rref_cyclotomic(aug)
    if cols in pivots:
        return None  # inconsistent
    if len(pivots) < cols:
        return None  # underdetermined
    order = a[0, 0].order
    x = np.array([Cyclotomic.zero(order) for _ in range(cols)], dtype=object)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, cols]
    return x


def invert_in_group_algebra(vec: CycArray, mul_table: np.ndarray) -> CycArray:
    """Inverse of a group-algebra element via its left-regular representation.

    Builds the full |K| x |K| exact matrix L with ``L[x, b] = vec[x * b^-1]``
    and solves ``L u = e`` by exact Gaussian elimination.
    """
    m = mul_table.shape[0]
    inv_idx = np.empty(m, dtype=np.int64)
    for b in range(m):
        col = np.nonzero(mul_table[b] == 0)[0]
        inv_idx[b] = col[0]
    entries = vec.to_object()
    L = np.empty((m, m), dtype=object)
    for x in range(m):
        for b in range(m):
            L[x, b] = entries[mul_table[x, inv_idx[b]]]
    order = vec.order
    e = [Cyclotomic.one(order) if x == 0 else Cyclotomic.zero(order) for x in range(m)]
    sol = cyc_solve(L, e)
    if sol is None:
        raise CotwistError("group-algebra element is not invertible")
    return CycArray.from_cyclotomics(sol, order)
