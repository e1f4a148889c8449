"""Projective representations from group actions on simple algebras.

A group acting by automorphisms on a simple algebra M_n acts by conjugation
(Skolem–Noether), which pins down a matrix T[a] per group element up to a
scalar; fixing a gauge turns a -> T[a] into a projective representation with
an explicit 2-cocycle c.  The pipeline here extracts these for the two
translation actions on the twisted dual algebras, pulls them back to a
stabilizer subgroup, tensors them, and realizes the resulting cocycle as a
twisted group algebra whose blocks predict spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dual_algebras import GroupAction, SCAlgebra
from .errors import AuditError, CotwistError
from .groups import Subgroup
from .semisimple import WedderburnSpectrum, algebra_audit

#: residual tolerance for composite quantities (tensor products, traces)
COMPOSITE_TOL = 1e-6
#: cocycle identity tolerance
COCYCLE_TOL = 1e-7


@dataclass
class ProjectiveRep:
    """A projective representation with an explicit 2-cocycle.

    ``T[a]`` is the n x n matrix of local group element a (T[0] = identity),
    and ``c[a, b]`` is the nonzero scalar with T[a] T[b] = c(a,b) T[ab].
    When the underlying splitting is compatible with a *-structure the
    moduli |c| are all 1; in general they are an R+-valued coboundary away
    from 1, which leaves every downstream spectrum unchanged.  ``group``
    records which subgroup of the ambient group is represented; indices
    into T and c are local (following group.elements order).
    """

    group: Subgroup
    dim: int
    T: np.ndarray
    c: np.ndarray

    @property
    def size(self) -> int:
        return self.T.shape[0]

    def validate(self, tol: float = COMPOSITE_TOL) -> None:
        """Assert the defining relation, gauge, and cocycle identity."""
        mul = self.group.as_group.mul
        if not np.array_equal(self.T[0], np.eye(self.dim)):
            raise AuditError("T[identity] is not the identity matrix")
        prods = np.einsum("aij,bjk->abik", self.T, self.T)
        target = self.c[:, :, None, None] * self.T[mul]
        if np.max(np.abs(prods - target)) > tol * self.dim:
            raise AuditError("T matrices do not satisfy the cocycle relation")
        moduli = np.abs(self.c)
        if moduli.min() <= tol or moduli.max() >= 1.0 / tol:
            raise AuditError("cocycle has vanishing or diverging values")
        if not cocycle_identity_holds(mul, self.c, COCYCLE_TOL):
            raise AuditError("cocycle identity fails")


def cocycle_identity_holds(mul: np.ndarray, c: np.ndarray, tol: float = COCYCLE_TOL) -> bool:
    """c(a,b) c(ab,d) = c(a,bd) c(b,d) for all a, b, d, within tol."""
    lhs = c[:, :, None] * c[mul, :]          # c[a, b] * c[ab, d]
    rhs = c[:, mul] * c[None, :, :]          # c[a, bd] * c[b, d]
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def action_matrix(perm: np.ndarray) -> np.ndarray:
    """Permutation matrix of a basis permutation (delta_y -> delta_perm[y])."""
    n = len(perm)
    out = np.zeros((n, n))
    out[perm, np.arange(n)] = 1.0
    return out


def skolem_noether(pi: np.ndarray, alpha: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """The matrix conjugating pi to pi∘alpha, in a reproducible gauge.

    Solves T pi(x) = pi(alpha(x)) T over all basis elements x as a stacked
    linear system; the solution space must be exactly one-dimensional (Schur)
    or CotwistError is raised.  Gauge: Frobenius norm sqrt(n) and the first
    entry of magnitude > tol in row-major order made positive real.  For
    alpha = identity the identity matrix is returned directly.
    """
    dim, n, _ = pi.shape
    alpha = np.asarray(alpha, dtype=complex)
    if np.array_equal(alpha, np.eye(dim)):
        return np.eye(n, dtype=complex)
    pia = np.einsum("ky,kab->yab", alpha, pi)
    eye = np.eye(n)
    # row-major vec: vec(A T) = (A x I) vec T, vec(T B) = (I x B^T) vec T
    blocks = np.einsum("xab,cd->xacbd", pia, eye) - np.einsum("ab,xdc->xacbd", eye, pi)
    system = blocks.reshape(dim * n * n, n * n)
    _, svals, vh = np.linalg.svd(system, full_matrices=False)
    scale = svals[0] if svals[0] > 0 else 1.0
    small = int(np.count_nonzero(svals < tol * scale * n))
    if small != 1:
        raise CotwistError(
            f"intertwiner space has dimension {small}, expected 1 "
            "(representation not irreducible or map not an automorphism)"
        )
    T = vh[-1].conj().reshape(n, n)
    T = T * (np.sqrt(n) / np.linalg.norm(T))
    flat = T.ravel()
    idx = np.nonzero(np.abs(flat) > tol)[0]
    if idx.size == 0:
        raise CotwistError("intertwiner is numerically zero")
    phase = flat[idx[0]] / abs(flat[idx[0]])
    T = T * np.conj(phase)
    residual = np.max(np.abs(np.einsum("ab,xbc->xac", T, pi) - np.einsum("xab,bc->xac", pia, T)))
    if residual > tol * n * 10:
        raise CotwistError(f"intertwiner residual {residual:g} too large")
    return T


def projective_rep_from_action(A: SCAlgebra, act: GroupAction, pi: np.ndarray,
                               subgroup: Subgroup | None = None,
                               tol: float = 1e-8) -> ProjectiveRep:
    """Projective representation induced by a free automorphism action.

    T[a] = skolem_noether(pi, act[a]) with T[identity] forced to the identity;
    the 2-cocycle is read off from T[a] T[b] against T[ab] by a least-squares
    scalar fit with a checked residual.  The raw scalars are kept as-is: when
    pi is not unitary the moduli |c| need not equal 1, but they differ from a
    unimodular cocycle only by an R+-valued coboundary, which never changes
    the isomorphism class of the twisted algebra C_c[K].
    """
    k = act.group.order
    n = pi.shape[1]
    T = np.zeros((k, n, n), dtype=complex)
    for a in range(k):
        T[a] = skolem_noether(pi, action_matrix(act.perms[a]), tol)
    mul = act.group.mul
    c = np.zeros((k, k), dtype=complex)
    for a in range(k):
        for b in range(k):
            prod = T[a] @ T[b]
            tgt = T[mul[a, b]]
            denom = np.vdot(tgt, tgt)
            cab = np.vdot(tgt, prod) / denom
            if np.max(np.abs(prod - cab * tgt)) > tol * n * 10:
                raise CotwistError("T[a] T[b] is not a scalar multiple of T[ab]")
            c[a, b] = cab
    if subgroup is None:
        subgroup = Subgroup(act.group, np.arange(k))
    rep = ProjectiveRep(group=subgroup, dim=n, T=T, c=c)
    rep.validate()
    return rep


def pullback_and_tensor_cocycle(V1: ProjectiveRep, V2: ProjectiveRep, g: int,
                                Kg: Subgroup):
    """Pull V1 back along a -> g^-1 a g, tensor with V2, restrict to Kg.

    Returns (c_W, W) with T_W[a] = T_{V2}[a] (x) T_{V1}[g^-1 a g] and
    c_W(a, b) = c_2(a, b) c_1(g^-1 a g, g^-1 b g), for a, b in Kg (indices
    local to Kg).  Raises if some g^-1 a g leaves H.
    """
    G = Kg.parent
    hsub = V1.group
    loc = hsub.parent_to_local
    k_elems = Kg.elements
    a_loc = []
    conj_loc = []
    for a in k_elems:
        ag = G.conjugate(g, int(a))
        if int(a) not in loc or int(ag) not in loc:
            raise CotwistError("stabilizer element leaves H under conjugation (bad Kg)")
        a_loc.append(loc[int(a)])
        conj_loc.append(loc[int(ag)])
    a_loc = np.array(a_loc)
    conj_loc = np.array(conj_loc)

    k = len(k_elems)
    n = V1.dim * V2.dim
    T = np.zeros((k, n, n), dtype=complex)
    for i in range(k):
        T[i] = np.kron(V2.T[a_loc[i]], V1.T[conj_loc[i]])
    c = V2.c[np.ix_(a_loc, a_loc)] * V1.c[np.ix_(conj_loc, conj_loc)]
    W = ProjectiveRep(group=Kg, dim=n, T=T, c=c)
    W.validate()
    return c, W


def twisted_group_algebra(K: Subgroup, c: np.ndarray, tol: float = 1e-8) -> SCAlgebra:
    """The algebra with basis {u_a : a in K} and u_a u_b = c(a,b) u_{ab}.

    The only float-valued SCAlgebra in the pipeline; its audit tolerates
    rounding instead of demanding exactness.  Requires c normalized
    (c(e, .) = c(., e) = 1) and the cocycle identity within tol.
    """
    k = K.order
    mul_table = K.as_group.mul
    c = np.asarray(c, dtype=complex)
    if c.shape != (k, k):
        raise CotwistError(f"cocycle table shape {c.shape} != ({k}, {k})")
    if np.max(np.abs(c[0, :] - 1.0)) > tol or np.max(np.abs(c[:, 0] - 1.0)) > tol:
        raise CotwistError("cocycle is not counital (c(e, a) = c(a, e) = 1 fails)")
    if not cocycle_identity_holds(mul_table, c, max(tol, COCYCLE_TOL)):
        raise CotwistError("cocycle identity fails; refusing to build twisted algebra")
    mul = np.zeros((k, k, k), dtype=complex)
    aa, bb = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    mul[aa, bb, mul_table] = c
    unit = np.zeros(k, dtype=complex)
    unit[0] = 1.0
    alg = SCAlgebra(mul, unit, labels=K.elements.copy(), name="twisted group algebra")
    if not algebra_audit(alg, tol):
        raise CotwistError("twisted group algebra failed its audit")
    return alg


# ---------------------------------------------------------------------------
# trace and multiplicity laws


def trace_vanishing_check(W: ProjectiveRep, H: Subgroup, tol: float = COMPOSITE_TOL) -> bool:
    """traces of T_W vanish off the identity; at the identity = |H| exactly."""
    traces = np.einsum("aii->a", W.T)
    h = H.order
    if traces[0] != h:
        return False
    return bool(np.max(np.abs(traces[1:])) < tol) if len(traces) > 1 else True


def regular_trace_law_holds(V: ProjectiveRep, tol: float = COMPOSITE_TOL) -> bool:
    """|trace T[h]|^2 = |H| [h = e]: the projective regular-character law."""
    traces = np.einsum("aii->a", V.T)
    h = V.size
    if abs(abs(traces[0]) ** 2 - h) > tol:
        return False
    if len(traces) > 1 and np.max(np.abs(traces[1:]) ** 2) > tol:
        return False
    return True


def multiplicity_law_check(W: ProjectiveRep, spectrum: WedderburnSpectrum,
                           h_size: int, tol: float = COMPOSITE_TOL):
    """Decompose W over the twisted group algebra of its own cocycle.

    For each block of dimension d the multiplicity of that irreducible in W
    must equal (|H|/|K_g|) * d; the commutant dimension (sum of squared
    multiplicities) must equal |H|^2 / |K_g|.  Returns (ok, multiplicities).
    """
    k = W.size
    if h_size % k != 0:
        raise CotwistError(f"|K_g| = {k} does not divide |H| = {h_size}")
    ratio = h_size // k
    mults = []
    ok = True
    for d, e in zip(spectrum.dims, spectrum.idempotents):
        E = np.einsum("a,aij->ij", e, W.T)
        m = np.trace(E).real / d
        mults.append(m)
        if abs(np.trace(E).imag) > tol or abs(m - ratio * d) > tol:
            ok = False
    commutant = sum(m * m for m in mults)
    if abs(commutant - h_size * h_size / k) > tol * max(1, h_size):
        ok = False
    return ok, mults


def one_dim_block_forces_plain_spectrum(Kg: Subgroup, dims: list[int], seed: int,
                                        tol: float = 1e-8) -> bool:
    """If the twisted algebra has a 1-dim block its spectrum is the plain one.

    Operational form of the degenerate-class dichotomy: a 1-dimensional block
    forces the cocycle class to vanish, so the whole spectrum must match the
    ordinary group algebra of K_g.  Vacuously true when no 1-dim block exists.
    """
    if 1 not in dims:
        return True
    from .semisimple import wedderburn_dims_retrying

    k = Kg.order
    plain = twisted_group_algebra(Kg, np.ones((k, k), dtype=complex), tol)
    plain_dims = wedderburn_dims_retrying(plain, seed, tol).dims
    return plain_dims == sorted(dims)
