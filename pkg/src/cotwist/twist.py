"""Drinfeld twists on group algebras: construction, inversion, exact audits.

A twist for a finite group H is an invertible element J of C[H] x C[H]
satisfying the 2-cocycle equation

    (J x 1) . (Delta0 x id)(J) = (1 x J) . (id x Delta0)(J)

and the counit normalization (eps x id)(J) = (id x eps)(J) = 1, where
Delta0(x) = x x x is the unmodified coproduct.  Everything in this module is
exact: coefficients are cyclotomic numbers and every identity is checked
with zero tolerance.

The deformed coproducts Delta1(x) = (x x x) J and Delta2(x) = J^-1 (x x x)
are the coalgebra structures whose dual algebras downstream modules build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import AuditError, CotwistError
from .exactlin import (
    CycArray,
    cyc_rank,
    cyc_solve,
    cyc_tensordot,
    ga_identity,
    ga_mul,
    invert_in_group_algebra,
)
from .groups import Bicharacter, FiniteGroup, Subgroup
from .scalars import Cyclotomic


@dataclass
class TwistData:
    """A twist on C[H]: the subgroup H, the matrix J and its inverse.

    ``J`` and ``Jinv`` are (|H|, |H|) exact cyclotomic arrays over H-local
    indices (row = left tensor leg, column = right leg).  ``verified`` is set
    only after :func:`verify_twist_axioms` passes; downstream constructions
    refuse unverified twists.
    """

    subgroup: Subgroup
    order: int
    J: CycArray
    Jinv: CycArray | None = None
    verified: bool = False

    @cached_property
    def group(self) -> FiniteGroup:
        """H with its own local Cayley table (indices 0..|H|-1)."""
        return self.subgroup.as_group

    @property
    def size(self) -> int:
        return self.group.order

    @cached_property
    def pair_mul(self) -> np.ndarray:
        """Cayley table of H x H on flat indices h1 * |H| + h2."""
        return _pair_table(self.group.mul)

    def J_entries(self) -> np.ndarray:
        return self.J.to_object()

    def Jinv_entries(self) -> np.ndarray:
        if self.Jinv is None:
            raise CotwistError("twist inverse has not been computed")
        return self.Jinv.to_object()

    def require_verified(self) -> None:
        if not self.verified:
            raise CotwistError("twist has not passed the axiom audit")

    def rehome(self, subgroup: Subgroup) -> "TwistData":
        """The same twist viewed on another copy of H (e.g. H inside G).

        The target subgroup must have the identical local Cayley table, so
        J needs no re-indexing and the verification status carries over.
        """
        if not np.array_equal(subgroup.as_group.mul, self.group.mul):
            raise CotwistError("cannot rehome: local multiplication tables differ")
        return TwistData(subgroup=subgroup, order=self.order, J=self.J,
                         Jinv=self.Jinv, verified=self.verified)


@dataclass
class TwistAudit:
    """Outcome of the exact twist-axiom checks, one named entry per axiom."""

    checks: list[tuple[str, bool]] = field(default_factory=list)

    def record(self, name: str, ok: bool) -> None:
        self.checks.append((name, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]


@dataclass
class TriangularStructure:
    """R = (J_21)^-1 J together with the minimality certificate."""

    R: CycArray
    rank: int
    minimal: bool


def _pair_table(mul: np.ndarray) -> np.ndarray:
    m = mul.shape[0]
    a1, a2 = np.divmod(np.arange(m * m), m)
    left = mul[np.ix_(a1, a1)].astype(np.int64)
    right = mul[np.ix_(a2, a2)].astype(np.int64)
    return left * m + right


def _swap_legs(flat: CycArray, m: int) -> CycArray:
    return flat.reshape(m, m).transpose((1, 0)).reshape(m * m)


# ---------------------------------------------------------------------------
# construction


def symplectic_twist(H: FiniteGroup, sigma: Bicharacter) -> TwistData:
    """Minimal twist J_{ab} = sigma(a, b) / |H| from a symplectic bicharacter."""
    sigma.verify()
    m = H.order
    J = CycArray.from_exponents(sigma.order, sigma.exponents, Fraction(1, m))
    sub = Subgroup(H, np.arange(m))
    return make_twist(sub, J, sigma.order)


def assemble_twist(subgroup: Subgroup, J, order: int | None = None):
    """Build a TwistData and audit it, without raising on axiom failure.

    Returns (t, audit); ``t.verified`` mirrors ``audit.ok``.  Inversion
    failure (a singular candidate) is folded into the audit rather than
    raised, so callers can report exactly which axioms broke.
    """
    if not isinstance(J, CycArray):
        J = CycArray.from_cyclotomics(J, order)
    if order is None:
        order = J.order
    m = subgroup.order
    if J.shape != (m, m):
        raise CotwistError(f"twist matrix shape {J.shape} != ({m}, {m})")
    t = TwistData(subgroup=subgroup, order=order, J=J)
    audit = verify_twist_axioms(t)
    t.verified = audit.ok
    return t, audit


def make_twist(subgroup: Subgroup, J, order: int | None = None) -> TwistData:
    """Build a verified TwistData from a raw coefficient matrix.

    ``J`` may be a CycArray or an object matrix of Cyclotomic.  The inverse
    is computed exactly and all twist axioms are audited; any failure raises
    ``AuditError`` naming the failing axioms.
    """
    t, audit = assemble_twist(subgroup, J, order)
    if not audit.ok:
        raise AuditError(f"twist axioms failed: {', '.join(audit.failed)}")
    return t


# ---------------------------------------------------------------------------
# inversion


def _vector_label_structure(group: FiniteGroup):
    """Detect elementary-abelian vector labels compatible with the table.

    Returns (p, label_matrix) when the group's labels are vectors over Z/pZ
    in lexicographic order and the Cayley table is exactly vector addition
    mod p; otherwise None.  The check is exhaustive, so the fast inversion
    path below cannot be applied to a group it does not fit.
    """
    if group.labels is None or group.order == 1:
        return None
    try:
        vecs = np.array([list(map(int, lab)) for lab in group.labels], dtype=np.int64)
    except (TypeError, ValueError):
        return None
    if vecs.ndim != 2 or vecs.min() < 0:
        return None
    p = int(vecs.max()) + 1
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        return None
    d = vecs.shape[1]
    if group.order != p**d:
        return None
    powers = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    if not np.array_equal(vecs @ powers, np.arange(group.order)):
        return None
    summed = ((vecs[:, None, :] + vecs[None, :, :]) % p).reshape(-1, d)
    if not np.array_equal((summed @ powers).reshape(group.order, group.order), group.mul):
        return None
    return p, vecs


def invert_twist(J: CycArray | np.ndarray, group: FiniteGroup, order: int | None = None) -> CycArray:
    """Exact inverse of J in C[H] x C[H].

    For elementary abelian H with vector labels (and cyclotomic order a
    multiple of p) the inverse is computed through the exact character
    transform of C[H x H], which diagonalizes the product; otherwise the
    left-regular representation of C[H x H] is materialized and the unit is
    solved for by exact Gaussian elimination.  Either way the result is
    certified by an exact multiplication check before it is returned.
    """
    if not isinstance(J, CycArray):
        J = CycArray.from_cyclotomics(J, order)
    m = group.order
    flat = J.reshape(m * m)
    pair = _pair_table(group.mul)
    structure = _vector_label_structure(group)
    if structure is not None and J.order % structure[0] == 0:
        inv_flat = _invert_by_characters(flat, structure, J.order)
    else:
        inv_flat = invert_in_group_algebra(flat, pair)
    if not ga_mul(flat, inv_flat, pair).eq(ga_identity(m * m, J.order)):
        raise CotwistError("twist inversion failed the exact product check")
    return inv_flat.reshape(m, m)


def _invert_by_characters(flat: CycArray, structure, order: int) -> CycArray:
    p, vecs = structure
    m = vecs.shape[0]
    shift = order // p
    dots = (vecs @ vecs.T) % p  # character exponents on H
    a1, a2 = np.divmod(np.arange(m * m), m)
    dk = (dots[np.ix_(a1, a1)] + dots[np.ix_(a2, a2)]) % p  # on H x H
    n = order
    size = m * m

    hat = np.zeros((size, n), dtype=np.int64)
    rows = np.repeat(np.arange(size), size)
    for i in range(n):
        vals = flat.counts[:, i]
        if not vals.any():
            continue
        exps = ((i + shift * dk) % n).ravel()
        np.add.at(hat, (rows, exps), np.broadcast_to(vals[None, :], (size, size)).ravel())
    hat_ca = CycArray(n, flat.scale, hat)

    hat_entries = hat_ca.to_object()
    inv_entries = []
    for v in hat_entries:
        if v.is_zero:
            raise CotwistError("twist is singular (a character value vanishes)")
        inv_entries.append(v.inverse())
    ghat = CycArray.from_cyclotomics(inv_entries, n)

    out = np.zeros((size, n), dtype=np.int64)
    cols = np.tile(np.arange(size), size)
    for i in range(n):
        vals = ghat.counts[:, i]
        if not vals.any():
            continue
        exps = ((i - shift * dk) % n).ravel()
        np.add.at(out, (cols, exps), np.broadcast_to(vals[:, None], (size, size)).ravel())
    return CycArray(n, ghat.scale / size, out)


# ---------------------------------------------------------------------------
# exact axiom audits


def _cocycle_sides(J: CycArray, mul: np.ndarray, inv: np.ndarray):
    """Both sides of the 2-cocycle equation as (m, m, m) coefficient arrays."""
    m = mul.shape[0]
    n = J.order
    left = np.zeros((m, m, m, n), dtype=np.int64)
    right = np.zeros((m, m, m, n), dtype=np.int64)
    uu = np.arange(m)[:, None, None]
    vv = np.arange(m)[None, :, None]
    ww = np.arange(m)[None, None, :]
    st = J.single_term()
    for c in range(m):
        shifted = mul[:, inv[c]]  # y -> y c^-1
        if st is not None:
            exps, nums = st
            e1 = exps[np.ix_(shifted, shifted)]
            c1 = nums[np.ix_(shifted, shifted)]
            k3 = (e1[:, :, None] + exps[c][None, None, :]) % n
            left[uu, vv, ww, k3] += c1[:, :, None] * nums[c][None, None, :]
            k3r = (e1[None, :, :] + exps[:, c][:, None, None]) % n
            right[uu, vv, ww, k3r] += c1[None, :, :] * nums[:, c][:, None, None]
        else:
            c1 = J.counts[np.ix_(shifted, shifted)]
            row = J.counts[c]
            col = J.counts[:, c]
            for i in range(n):
                a = c1[..., i]
                if not a.any():
                    continue
                for j in range(n):
                    b = row[:, j]
                    if b.any():
                        left[..., (i + j) % n] += a[:, :, None] * b[None, None, :]
                    b2 = col[:, j]
                    if b2.any():
                        right[..., (i + j) % n] += b2[:, None, None] * a[None, :, :]
    scale = J.scale * J.scale
    return CycArray(n, scale, left), CycArray(n, scale, right)


def _counit_ok(J: CycArray, axis: int) -> bool:
    summed = CycArray(J.order, J.scale, J.counts.sum(axis=axis))
    return summed.eq(ga_identity(J.shape[0], J.order))


def _coassoc_delta1_ok(J: CycArray, mul: np.ndarray, inv: np.ndarray) -> bool:
    """(Delta1 x id) Delta1 == (id x Delta1) Delta1 on every group element."""
    m = mul.shape[0]
    n = J.order
    st = J.single_term()
    xyinv = mul[np.ix_(np.arange(m), inv)]  # [a, b] = a b^-1
    lbuf = np.zeros((m, m, m, n), dtype=np.int64)
    rbuf = np.zeros((m, m, m, n), dtype=np.int64)
    uu = np.arange(m)[:, None, None]
    vv = np.arange(m)[None, :, None]
    ww = np.arange(m)[None, None, :]
    for x in range(m):
        lbuf[:] = 0
        rbuf[:] = 0
        xm = mul[inv[x]]  # y -> x^-1 y
        for c in range(m):
            a_idx = mul[xm, inv[c]]          # u -> x^-1 u c^-1
            b_idx = mul[np.ix_(xyinv[c], np.arange(m))]  # [u, v] = (c u^-1) v
            if st is not None:
                exps, nums = st
                A = exps[np.ix_(a_idx, xm)]      # [u, w]
                An = nums[np.ix_(a_idx, xm)]
                B = exps[c][b_idx]               # [u, v]
                Bn = nums[c][b_idx]
                k3 = (A[:, None, :] + B[:, :, None]) % n
                lbuf[uu, vv, ww, k3] += An[:, None, :] * Bn[:, :, None]
                A2 = exps[np.ix_(xm, mul[xm, inv[c]])]  # [u, v] = J[x^-1 u, x^-1 v c^-1]
                A2n = nums[np.ix_(xm, mul[xm, inv[c]])]
                b2_idx = mul[np.ix_(xyinv[c], np.arange(m))]  # [v, w] = (c v^-1) w
                B2 = exps[c][b2_idx]
                B2n = nums[c][b2_idx]
                k3r = (A2[:, :, None] + B2[None, :, :]) % n
                rbuf[uu, vv, ww, k3r] += A2n[:, :, None] * B2n[None, :, :]
            else:
                CA = J.counts[np.ix_(a_idx, xm)]
                CB = J.counts[c][b_idx]
                CA2 = J.counts[np.ix_(xm, mul[xm, inv[c]])]
                CB2 = J.counts[c][mul[np.ix_(xyinv[c], np.arange(m))]]
                for i in range(n):
                    ai = CA[..., i]
                    a2i = CA2[..., i]
                    for j in range(n):
                        bj = CB[..., j]
                        if ai.any() and bj.any():
                            lbuf[..., (i + j) % n] += ai[:, None, :] * bj[:, :, None]
                        b2j = CB2[..., j]
                        if a2i.any() and b2j.any():
                            rbuf[..., (i + j) % n] += a2i[:, :, None] * b2j[None, :, :]
        if not CycArray(n, J.scale * J.scale, lbuf).eq(CycArray(n, J.scale * J.scale, rbuf)):
            return False
    return True


def _coassoc_delta2_ok(Jinv: CycArray, mul: np.ndarray, inv: np.ndarray) -> bool:
    """(Delta2 x id) Delta2 == (id x Delta2) Delta2 on every group element."""
    m = mul.shape[0]
    n = Jinv.order
    st = Jinv.single_term()
    xyinv = mul[np.ix_(np.arange(m), inv)]  # [a, b] = a b^-1
    lbuf = np.zeros((m, m, m, n), dtype=np.int64)
    rbuf = np.zeros((m, m, m, n), dtype=np.int64)
    uu = np.arange(m)[:, None, None]
    vv = np.arange(m)[None, :, None]
    ww = np.arange(m)[None, None, :]
    for x in range(m):
        lbuf[:] = 0
        rbuf[:] = 0
        xr = mul[:, inv[x]]  # y -> y x^-1
        for c in range(m):
            a_idx = mul[inv[c], xr]               # u -> c^-1 u x^-1
            d_idx = mul[xyinv, c]                 # [v, u] = (v u^-1) c
            if st is not None:
                exps, nums = st
                A = exps[np.ix_(a_idx, xr)]       # [u, w]
                An = nums[np.ix_(a_idx, xr)]
                B = exps[c][d_idx]                # [v, u]
                Bn = nums[c][d_idx]
                k3 = (A[:, None, :] + B.T[:, :, None]) % n
                lbuf[uu, vv, ww, k3] += An[:, None, :] * Bn.T[:, :, None]
                A2 = exps[np.ix_(xr, mul[inv[c], xr])]  # [u, v]
                A2n = nums[np.ix_(xr, mul[inv[c], xr])]
                B2 = exps[c][mul[xyinv, c]]       # [w, v] = (w v^-1) c
                B2n = nums[c][mul[xyinv, c]]
                k3r = (A2[:, :, None] + B2.T[None, :, :]) % n
                rbuf[uu, vv, ww, k3r] += A2n[:, :, None] * B2n.T[None, :, :]
            else:
                CA = Jinv.counts[np.ix_(a_idx, xr)]
                CB = Jinv.counts[c][d_idx]
                CA2 = Jinv.counts[np.ix_(xr, mul[inv[c], xr])]
                CB2 = Jinv.counts[c][mul[xyinv, c]]
                for i in range(n):
                    ai = CA[..., i]
                    a2i = CA2[..., i]
                    for j in range(n):
                        bj = CB[..., j]
                        if ai.any() and bj.any():
                            lbuf[..., (i + j) % n] += ai[:, None, :] * bj.T[:, :, None]
                        b2j = CB2[..., j]
                        if a2i.any() and b2j.any():
                            rbuf[..., (i + j) % n] += a2i[:, :, None] * b2j.T[None, :, :]
        s = Jinv.scale * Jinv.scale
        if not CycArray(n, s, lbuf).eq(CycArray(n, s, rbuf)):
            return False
    return True


def verify_twist_axioms(t: TwistData) -> TwistAudit:
    """Exact audit of the twist axioms; returns a named pass/fail report.

    Checks, in order: the 2-cocycle equation, both counit normalizations,
    invertibility (exact product against the unit of C[H x H]), and
    coassociativity of both deformed coproducts on every group element.
    Never raises on a failed check.
    """
    audit = TwistAudit()
    group = t.group
    mul = group.mul.astype(np.int64)
    inv = group.inv.astype(np.int64)
    m = group.order

    left, right = _cocycle_sides(t.J, mul, inv)
    audit.record("2-cocycle equation", left.eq(right))
    audit.record("counit (left leg)", _counit_ok(t.J, axis=0))
    audit.record("counit (right leg)", _counit_ok(t.J, axis=1))

    jinv = t.Jinv
    if jinv is None:
        try:
            jinv = invert_twist(t.J, group)
            t.Jinv = jinv
        except CotwistError:
            jinv = None
    if jinv is None:
        audit.record("invertibility", False)
    else:
        prod = ga_mul(t.J.reshape(m * m), jinv.reshape(m * m), t.pair_mul)
        audit.record("invertibility", prod.eq(ga_identity(m * m, t.order)))

    audit.record("coassociativity of the first deformed coproduct",
                 _coassoc_delta1_ok(t.J, mul, inv))
    if jinv is not None:
        audit.record("coassociativity of the second deformed coproduct",
                     _coassoc_delta2_ok(jinv, mul, inv))
    else:
        audit.record("coassociativity of the second deformed coproduct", False)
    return audit


# ---------------------------------------------------------------------------
# triangular structure, antipode element, dimension


def triangular_structure(t: TwistData) -> TriangularStructure:
    """R = (J_21)^-1 J, its exact triangularity check and minimality rank.

    Triangularity (R_21 R = 1 x 1) is asserted; the rank of the coefficient
    matrix of R equals |H| exactly iff the twist is minimal.
    """
    t.require_verified()
    m = t.size
    pair = t.pair_mul
    j_flat = t.J.reshape(m * m)
    j21inv_flat = _swap_legs(t.Jinv, m).reshape(m * m)
    r_flat = ga_mul(j21inv_flat, j_flat, pair)
    r21_flat = _swap_legs(r_flat.reshape(m, m), m)
    if not ga_mul(r21_flat, r_flat, pair).eq(ga_identity(m * m, t.order)):
        raise AuditError("triangularity failed: R_21 R != 1 x 1")
    rank = cyc_rank(r_flat.reshape(m, m).to_object())
    return TriangularStructure(R=r_flat.reshape(m, m), rank=rank, minimal=(rank == m))


def q_element_and_antipode_check(t: TwistData):
    """The element Q = m (S x id)(J) and the exact antipode identity.

    Returns (Q, ok) where Q is the group-algebra element sum_ab J_ab a^-1 b
    (asserted invertible via its regular representation) and ok records
    whether (S x S)(J) = (Q x Q) (J_21)^-1 Delta0(Q^-1) holds exactly.
    """
    t.require_verified()
    group = t.group
    m = t.size
    n = t.order
    mul = group.mul.astype(np.int64)
    inv = group.inv.astype(np.int64)

    q_counts = np.zeros((m, n), dtype=np.int64)
    q_idx = mul[np.ix_(inv, np.arange(m))]  # [a, b] = a^-1 b
    for i in range(n):
        vals = t.J.counts[..., i]
        if vals.any():
            np.add.at(q_counts, (q_idx.ravel(), i), vals.ravel())
    Q = CycArray(n, t.J.scale, q_counts)

    # invertibility via the regular representation of C[H]
    entries = Q.to_object()
    L = np.empty((m, m), dtype=object)
    for x in range(m):
        for b in range(m):
            L[x, b] = entries[mul[x, inv[b]]]
    unit = [Cyclotomic.one(n) if x == 0 else Cyclotomic.zero(n) for x in range(m)]
    qinv_vec = cyc_solve(L, unit)
    if qinv_vec is None:
        raise CotwistError("antipode element Q is not invertible")
    Qinv = CycArray.from_cyclotomics(qinv_vec, n)

    # left side: (S x S)(J) has coefficient J[u^-1, v^-1] at u x v
    lhs = t.J.take(inv, axis=0).take(inv, axis=1).reshape(m * m)

    # right side: (Q x Q) . J21^-1 . Delta0(Q^-1)
    pair = t.pair_mul
    qq = cyc_tensordot(Q, Q, axes=0).reshape(m * m)
    j21inv = _swap_legs(t.Jinv, m).reshape(m * m)
    diag = CycArray.zeros((m * m,), n)
    diag_idx = np.arange(m) * m + np.arange(m)
    diag.counts[diag_idx] = Qinv.counts
    diag.scale = Qinv.scale
    rhs = ga_mul(ga_mul(qq, j21inv, pair), diag, pair)
    return Q, lhs.eq(rhs)


def square_dimension_check(t: TwistData) -> int:
    """For a minimal twist |H| must be a perfect square; returns sqrt(|H|)."""
    m = t.size
    d = math.isqrt(m)
    if d * d != m:
        raise CotwistError(f"|H| = {m} is not a perfect square")
    return d


# ---------------------------------------------------------------------------
# file format


def save_twist_file(path, t: TwistData) -> None:
    """Write ``N dim`` header then dim^2 cyclotomic literals row-major."""
    entries = t.J_entries()
    m = t.size
    with open(path, "w") as fh:
        fh.write(f"{t.order} {m}\n")
        for a in range(m):
            for b in range(m):
                fh.write(entries[a, b].literal() + "\n")


def load_twist_matrix(path) -> tuple[int, np.ndarray]:
    """Read a twist file; returns (order, object matrix of Cyclotomic)."""
    from .scalars import parse_cyclotomic

    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise CotwistError(f"twist file {path}: bad header")
        order, dim = int(header[0]), int(header[1])
        body = fh.read().split()
    if len(body) != dim * dim:
        raise CotwistError(
            f"twist file {path}: expected {dim * dim} entries, got {len(body)}"
        )
    out = np.empty((dim, dim), dtype=object)
    for k, token in enumerate(body):
        out[k // dim, k % dim] = parse_cyclotomic(token, order)
    return order, out
