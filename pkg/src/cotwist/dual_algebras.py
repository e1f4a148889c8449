"""Dual algebras of twisted group coalgebras, on delta-function bases.

Deforming the coproduct of C[H] by a twist J gives two coalgebras,
Delta1(x) = (x x x) J and Delta2(x) = J^-1 (x x x); their linear duals are
associative algebras on the basis {delta_h}.  The ambient construction on a
group G containing H deforms by Delta_J(g) = J^-1 (g x g) J, and its dual
splits into blocks supported on the double cosets H g H.  This module builds
all of these as explicit structure-constant algebras, exactly, together with
the translation actions of H and the anti-isomorphism between the two
H-level duals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import AuditError, CotwistError
from .exactlin import CycArray, cyc_rank, cyc_solve, cyc_tensordot
from .groups import DoubleCoset, FiniteGroup
from .scalars import Cyclotomic
from .twist import TwistData


@dataclass
class SCAlgebra:
    """A finite-dimensional algebra given by structure constants.

    ``mul[i, j, k]`` is the coefficient of basis element k in e_i e_j, either
    as an exact CycArray or as a complex ndarray; ``unit`` is the coefficient
    vector of the multiplicative unit (same kind as ``mul``).  ``labels``
    names the basis elements (for the dual algebras these are group indices).
    """

    mul: object
    unit: object
    labels: np.ndarray | None = None
    name: str = ""

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    @property
    def is_exact(self) -> bool:
        return isinstance(self.mul, CycArray)

    def product(self, u, v):
        """Product of two coefficient vectors in this algebra's basis."""
        if self.is_exact and isinstance(u, CycArray) and isinstance(v, CycArray):
            t1 = cyc_tensordot(u, self.mul, axes=([0], [0]))
            return cyc_tensordot(v, t1, axes=([0], [0]))
        mul = self.mul_complex()
        return np.einsum("i,j,ijk->k", np.asarray(u), np.asarray(v), mul)

    def mul_complex(self) -> np.ndarray:
        if self.is_exact:
            if not hasattr(self, "_mul_complex"):
                self._mul_complex = self.mul.embed()
            return self._mul_complex
        return self.mul

    def unit_complex(self) -> np.ndarray:
        if isinstance(self.unit, CycArray):
            return self.unit.embed()
        return np.asarray(self.unit)


@dataclass
class GroupAction:
    """A group acting by basis permutations on a structure-constant algebra.

    ``perms[h]`` sends basis index y to the index of the image basis element,
    so the linear action is delta_y -> delta_perms[h][y].
    """

    group: FiniteGroup
    perms: np.ndarray
    name: str = ""

    def apply(self, h: int, vec):
        if isinstance(vec, CycArray):
            counts = np.zeros_like(vec.counts)
            counts[self.perms[h]] = vec.counts
            return CycArray(vec.order, vec.scale, counts)
        out = np.zeros_like(vec)
        out[self.perms[h]] = vec
        return out

    def verify(self, algebra: SCAlgebra) -> None:
        """Assert: group action, by algebra automorphisms, acting freely."""
        g = self.group
        m = g.order
        if self.perms.shape != (m, algebra.dim):
            raise AuditError("action table has the wrong shape")
        if not np.array_equal(self.perms[0], np.arange(algebra.dim)):
            raise AuditError("identity does not act trivially")
        for a in range(m):
            composed = self.perms[a][self.perms]  # [h, y] = perms[a][perms[h][y]]
            if not np.array_equal(self.perms[g.mul[a]], composed):
                raise AuditError("permutations do not compose like the group")
        ident = np.arange(algebra.dim)
        for h in range(1, m):
            if np.any(self.perms[h] == ident):
                raise AuditError("action is not free")
        mul = algebra.mul
        mc = mul.canonical() if algebra.is_exact else mul
        for h in range(m):
            p = self.perms[h]
            if algebra.is_exact:
                ok = np.array_equal(mc[np.ix_(p, p, p)], mc)
            else:
                ok = np.allclose(mc[np.ix_(p, p, p)], mc, atol=1e-10)
            if not ok:
                raise AuditError(f"basis permutation of element {h} is not an automorphism")


def _identity_matrix(n: int, order: int) -> CycArray:
    out = CycArray.zeros((n, n), order)
    out.counts[np.arange(n), np.arange(n), 0] = 1
    return out


def _all_ones(n: int, order: int) -> CycArray:
    out = CycArray.zeros((n,), order)
    out.counts[:, 0] = 1
    return out


def determine_unit(mul: CycArray, candidate: CycArray) -> CycArray:
    """Verify a candidate unit exactly, solving for one only if it fails.

    The expected unit of each dual algebra is the counit (the all-ones
    vector); verifying the candidate guards against convention slips, and the
    linear solve recovers the true unit if a convention ever drifts.
    """
    n = mul.shape[0]
    ident = _identity_matrix(n, mul.order)
    left = cyc_tensordot(candidate, mul, axes=([0], [0]))
    right = cyc_tensordot(candidate, mul, axes=([0], [1]))
    if left.eq(ident) and right.eq(ident):
        return candidate
    # solve u . mul = identity on both sides
    obj = mul.to_object()
    rows = []
    rhs = []
    zero = Cyclotomic.zero(mul.order)
    one = Cyclotomic.one(mul.order)
    for j in range(n):
        for k in range(n):
            rows.append([obj[i, j, k] for i in range(n)])
            rhs.append(one if j == k else zero)
            rows.append([obj[j, i, k] for i in range(n)])
            rhs.append(one if j == k else zero)
    sol = cyc_solve(np.array(rows, dtype=object), np.array(rhs, dtype=object))
    if sol is None:
        raise CotwistError("algebra has no unit in this basis")
    return CycArray.from_cyclotomics(sol, mul.order)


# ---------------------------------------------------------------------------
# the two H-level dual algebras and their translation actions


def build_A1_A2_star(t: TwistData):
    """Duals of (C[H], Delta1) and (C[H], Delta2) with their H-actions.

    Returns (A1, A2, rho1, rho2) where the products on the delta basis are

        delta_h .1 delta_h' = sum_x J[x^-1 h, x^-1 h'] delta_x
        delta_h .2 delta_h' = sum_x Jinv[h x^-1, h' x^-1] delta_x

    rho1(h): delta_y -> delta_{h y} acts on A1 and rho2(h): delta_y ->
    delta_{y h^-1} acts on A2; both are verified to act freely by algebra
    automorphisms.  Units are verified counits (all-ones vectors).
    """
    t.require_verified()
    group = t.group
    m = group.order
    n = t.order
    mul = group.mul.astype(np.int64)
    inv = group.inv.astype(np.int64)

    mul1 = np.zeros((m, m, m, n), dtype=np.int64)
    mul2 = np.zeros((m, m, m, n), dtype=np.int64)
    for x in range(m):
        idx1 = mul[inv[x]]       # h -> x^-1 h
        mul1[:, :, x, :] = t.J.counts[np.ix_(idx1, idx1)]
        idx2 = mul[:, inv[x]]    # h -> h x^-1
        mul2[:, :, x, :] = t.Jinv.counts[np.ix_(idx2, idx2)]
    A1_mul = CycArray(n, t.J.scale, mul1)
    A2_mul = CycArray(n, t.Jinv.scale, mul2)

    unit1 = determine_unit(A1_mul, _all_ones(m, n))
    unit2 = determine_unit(A2_mul, _all_ones(m, n))
    A1 = SCAlgebra(A1_mul, unit1, labels=np.arange(m), name="A1*")
    A2 = SCAlgebra(A2_mul, unit2, labels=np.arange(m), name="A2*")

    rho1 = GroupAction(group, mul.copy(), name="left translation")
    rho2 = GroupAction(group, mul[:, inv].T.copy(), name="right translation")
    rho1.verify(A1)
    rho2.verify(A2)
    return A1, A2, rho1, rho2


# ---------------------------------------------------------------------------
# ambient dual products and double-coset blocks


def _h_embedding(t: TwistData):
    """(G, H-element list, G-index -> H-local lookup with -1 fill)."""
    sub = t.subgroup
    G = sub.parent
    elems = sub.elements
    loc = np.full(G.order, -1, dtype=np.int64)
    loc[elems] = np.arange(len(elems))
    return G, elems, loc


def dual_product_delta(t: TwistData, a: int, b: int) -> CycArray:
    """Product delta_a . delta_b in the full ambient dual algebra of G.

    Coefficient of delta_x is sum over s, t in H with x^-1 s^-1 a and
    x^-1 t^-1 b in H of Jinv[s, t] J[x^-1 s^-1 a, x^-1 t^-1 b].  Used to
    confirm structurally that products across different double cosets vanish.
    """
    t.require_verified()
    G, elems, loc = _h_embedding(t)
    mulG = G.mul.astype(np.int64)
    invG = G.inv.astype(np.int64)
    m = t.size
    n = t.order
    xs = np.arange(G.order)
    out = np.zeros((G.order, n), dtype=np.int64)
    st_j = t.J.single_term()
    st_i = t.Jinv.single_term()
    for s in range(m):
        for tt in range(m):
            v1 = mulG[invG[elems[s]], a]
            v2 = mulG[invG[elems[tt]], b]
            c_loc = loc[mulG[invG[xs], v1]]
            d_loc = loc[mulG[invG[xs], v2]]
            mask = (c_loc >= 0) & (d_loc >= 0)
            if not mask.any():
                continue
            cm = c_loc[mask]
            dm = d_loc[mask]
            xm = xs[mask]
            if st_j is not None and st_i is not None:
                ej, nj = st_j
                ei, ni = st_i
                if ni[s, tt] == 0:
                    continue
                k = (ei[s, tt] + ej[cm, dm]) % n
                out[xm, k] += ni[s, tt] * nj[cm, dm]
            else:
                for i in range(n):
                    wi = t.Jinv.counts[s, tt, i]
                    if wi == 0:
                        continue
                    for j in range(n):
                        vals = t.J.counts[cm, dm, j]
                        out[xm, (i + j) % n] += wi * vals
    return CycArray(n, t.J.scale * t.Jinv.scale, out)


def build_block_algebra(t: TwistData, coset: DoubleCoset) -> SCAlgebra:
    """The block of the ambient dual algebra supported on one double coset.

    Basis {delta_a : a in H g H}; the product is the ambient dual product,
    which this block is closed under.  Built by enumerating (s, t, c, d) in
    H^4 against every basis point x of the coset: the pair (s x c, t x d)
    receives Jinv[s, t] J[c, d].  The unit is the verified restriction of the
    ambient counit (all-ones on the coset).
    """
    t.require_verified()
    G, elems, loc_h = _h_embedding(t)
    mulG = G.mul.astype(np.int64)
    z = coset.elements.astype(np.int64)
    nz = len(z)
    loc_z = np.full(G.order, -1, dtype=np.int64)
    loc_z[z] = np.arange(nz)
    m = t.size
    n = t.order
    counts = np.zeros((nz, nz, nz, n), dtype=np.int64)
    x3 = np.arange(nz)[:, None, None]
    st_j = t.J.single_term()
    st_i = t.Jinv.single_term()
    hg = elems.astype(np.int64)
    # shift table: shifts[s, x, c] = coset-local index of (h_s x h_c)
    shifts = np.empty((m, nz, m), dtype=np.int64)
    for s in range(m):
        shifts[s] = loc_z[mulG[np.ix_(mulG[hg[s], z], hg)]]
    if np.any(shifts < 0):
        raise AuditError("double coset is not closed under H-translations")
    for s in range(m):
        a_loc = shifts[s]                         # [x, c] -> s x c
        for tt in range(m):
            b_loc = shifts[tt]                    # [x, d] -> t x d
            if st_j is not None and st_i is not None:
                ej, nj = st_j
                ei, ni = st_i
                if ni[s, tt] == 0:
                    continue
                k3 = ((ei[s, tt] + ej) % n)[None, :, :]
                counts[a_loc[:, :, None], b_loc[:, None, :], x3, k3] += ni[s, tt] * nj[None, :, :]
            else:
                for i in range(n):
                    wi = t.Jinv.counts[s, tt, i]
                    if wi == 0:
                        continue
                    for j in range(n):
                        vals = t.J.counts[:, :, j]
                        if not vals.any():
                            continue
                        counts[a_loc[:, :, None], b_loc[:, None, :], x3, (i + j) % n] += (
                            wi * vals[None, :, :]
                        )
    mul = CycArray(n, t.J.scale * t.Jinv.scale, counts)
    unit = determine_unit(mul, _all_ones(nz, n))
    return SCAlgebra(mul, unit, labels=z.copy(), name=f"block[{coset.representative}]")


# ---------------------------------------------------------------------------
# the anti-isomorphism A2* -> (A1*)^op


def a2_to_a1op_iso(t: TwistData, A1: SCAlgebra, A2: SCAlgebra,
                   rho1: GroupAction, rho2: GroupAction) -> CycArray:
    """Matrix of the canonical anti-isomorphism from A2* to A1*.

    delta_x maps to the delta-linear extension of x -> x^-1 Q^-1 where Q is
    the antipode element of the twist: column x of the returned matrix M is
    the coefficient vector of the image, M[h, x] = (x^-1 Q^-1)_h.

    Audited exactly: M is invertible, reverses products
    (M(delta_x .2 delta_y) = M(delta_y) .1 M(delta_x)), and intertwines the
    translation actions (M rho2(h) = rho1(h) M).  Any failure raises.
    """
    from .twist import q_element_and_antipode_check

    t.require_verified()
    group = t.group
    m = group.order
    n = t.order
    mul = group.mul.astype(np.int64)
    inv = group.inv.astype(np.int64)

    Q, anti_ok = q_element_and_antipode_check(t)
    if not anti_ok:
        raise AuditError("antipode identity failed; anti-isomorphism unavailable")
    entries = Q.to_object()
    L = np.empty((m, m), dtype=object)
    for x in range(m):
        for b in range(m):
            L[x, b] = entries[mul[x, inv[b]]]
    unit_vec = [Cyclotomic.one(n) if x == 0 else Cyclotomic.zero(n) for x in range(m)]
    qinv = cyc_solve(L, unit_vec)
    if qinv is None:
        raise CotwistError("antipode element is not invertible")
    Qinv = CycArray.from_cyclotomics(qinv, n)

    M = CycArray.zeros((m, m), n)
    M.scale = Qinv.scale
    for x in range(m):
        M.counts[:, x, :] = Qinv.counts[mul[x], :]  # M[h, x] = Qinv[x h]
    if cyc_rank(M.to_object()) != m:
        raise AuditError("anti-isomorphism matrix is singular")

    lhs = cyc_tensordot(A2.mul, M, axes=([2], [1]))          # [x, y, h]
    t1 = cyc_tensordot(M, A1.mul, axes=([0], [0]))           # [y, l, h]
    rhs = cyc_tensordot(M, t1, axes=([0], [1]))              # [x, y, h]
    if not lhs.eq(rhs):
        raise AuditError("map does not reverse products")

    for h in range(m):
        left = CycArray(n, M.scale, M.counts[:, rho2.perms[h]])
        right = CycArray(n, M.scale, M.counts[mul[inv[h]], :])
        if not left.eq(right):
            raise AuditError("map does not intertwine the translation actions")
    return M
