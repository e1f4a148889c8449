"""Wedderburn analysis of semisimple structure-constant algebras over C.

The decomposition pipeline is hybrid by design: the center is computed as an
exact nullspace of the commutator system when the structure constants are
exact (so the number of simple blocks is certain), and only the distribution
of block dimensions uses floating point (eigenvalue clustering of a random
central element), backed by integer-rounding assertions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dual_algebras import SCAlgebra
from .errors import CotwistError, SeedRetryError
from .exactlin import CycArray, cyc_nullspace, cyc_tensordot
from .scalars import Cyclotomic, euler_phi

#: exhaustive associativity above this dimension would be needlessly slow;
#: larger algebras are audited on a fixed-seed sample of triples.
EXHAUSTIVE_AUDIT_DIM = 32
_AUDIT_SAMPLES = 200
_CLUSTER_GUARD = 10.0  # clusters separated by less than this multiple of the
                       # merge threshold are treated as ambiguous


@dataclass
class WedderburnSpectrum:
    """Block dimensions of a semisimple algebra plus numeric quality data."""

    dims: list[int]
    idempotent_residual: float
    idempotents: np.ndarray = field(repr=False, default=None)

    @property
    def total_square(self) -> int:
        return sum(d * d for d in self.dims)


def derived_seed(seed: int, attempt: int) -> int:
    """Deterministic per-attempt reseeding for retryable random routines."""
    return int(np.random.SeedSequence([seed & 0xFFFFFFFF, attempt]).generate_state(1)[0])


def with_seed_retries(fn, seed: int, attempts: int = 10):
    """Call fn(seed_k) with deterministically derived seeds until it succeeds."""
    last = None
    for attempt in range(attempts):
        try:
            return fn(seed if attempt == 0 else derived_seed(seed, attempt))
        except SeedRetryError as exc:
            last = exc
    raise CotwistError(f"still failing after {attempts} seeds: {last}")


# ---------------------------------------------------------------------------
# audits


def algebra_audit(A: SCAlgebra, tol: float = 1e-8) -> bool:
    """Associativity and unit laws; exact when the algebra is exact.

    Exhaustive up to EXHAUSTIVE_AUDIT_DIM basis elements, sampled (fixed
    internal seed, 200 triples) beyond that.  Returns False rather than
    raising.
    """
    n = A.dim
    if A.is_exact:
        mul: CycArray = A.mul
        ident = CycArray.zeros((n, n), mul.order)
        ident.counts[np.arange(n), np.arange(n), 0] = 1
        left_unit = cyc_tensordot(A.unit, mul, axes=([0], [0]))
        right_unit = cyc_tensordot(A.unit, mul, axes=([0], [1]))
        if not (left_unit.eq(ident) and right_unit.eq(ident)):
            return False
        if n <= EXHAUSTIVE_AUDIT_DIM:
            lhs = cyc_tensordot(mul, mul, axes=([2], [0]))            # [i,j,k,l]
            rhs = cyc_tensordot(mul, mul, axes=([2], [1]))            # [j,k,i,l]
            return lhs.eq(rhs.transpose((2, 0, 1, 3)))
        rng = np.random.default_rng(0)
        for _ in range(_AUDIT_SAMPLES):
            i, j, k = (int(v) for v in rng.integers(0, n, 3))
            ij = CycArray(mul.order, mul.scale, mul.counts[i, j])
            jk = CycArray(mul.order, mul.scale, mul.counts[j, k])
            lhs = cyc_tensordot(ij, mul, axes=([0], [0])).take([k], axis=0)
            rhs = cyc_tensordot(jk, mul, axes=([0], [1])).take([i], axis=0)
            if not lhs.eq(rhs):
                return False
        return True

    mul = np.asarray(A.mul)
    unit = A.unit_complex()
    ident = np.eye(n)
    if not np.allclose(np.einsum("i,ijk->jk", unit, mul).T, ident.T, atol=tol * n):
        return False
    if not np.allclose(np.einsum("i,jik->jk", unit, mul), ident, atol=tol * n):
        return False
    if n <= EXHAUSTIVE_AUDIT_DIM:
        lhs = np.einsum("ijx,xkl->ijkl", mul, mul)
        rhs = np.einsum("jkx,ixl->ijkl", mul, mul)
        return bool(np.allclose(lhs, rhs, atol=tol * n))
    rng = np.random.default_rng(0)
    for _ in range(_AUDIT_SAMPLES):
        i, j, k = (int(v) for v in rng.integers(0, n, 3))
        lhs = np.einsum("x,xl->l", mul[i, j], mul[:, k, :])
        rhs = np.einsum("x,xl->l", mul[j, k], mul[i, :, :])
        if not np.allclose(lhs, rhs, atol=tol * n):
            return False
    return True


# ---------------------------------------------------------------------------
# center


def _exact_center_basis(mul: CycArray) -> list[np.ndarray]:
    """Exact nullspace of the commutator system, grown from a generator set.

    Solving against a subset S of basis elements yields a superspace of the
    center (the commutant of the subalgebra S generates); every candidate
    basis vector is then verified to commute with the whole basis exactly,
    and S is enlarged until verification passes, so the returned basis spans
    exactly the nullspace of the full commutator system.
    """
    n = mul.shape[0]
    # D[i, j, k] = mul[i,j,k] - mul[j,i,k]
    diff = CycArray(mul.order, mul.scale, mul.counts - mul.counts.transpose(1, 0, 2, 3))
    size = 4
    while True:
        js = list(range(min(size, n)))
        rows = diff.counts[:, js, :, :].transpose(1, 2, 0, 3).reshape(len(js) * n, n, -1)
        canon = CycArray(mul.order, mul.scale, rows).canonical()
        flat = canon.reshape(canon.shape[0], -1)
        keep = np.any(flat, axis=1)
        flat = np.unique(flat[keep], axis=0)
        if flat.shape[0] == 0:
            # commutative (so far as S sees): candidate = whole space
            basis = []
            for i in range(n):
                v = np.array([Cyclotomic.zero(mul.order) for _ in range(n)], dtype=object)
                v[i] = Cyclotomic.one(mul.order)
                basis.append(v)
        else:
            # rebuild object rows only for the deduplicated system
            uniq = np.empty((flat.shape[0], n), dtype=object)
            phi = euler_phi(mul.order)
            per = flat.reshape(flat.shape[0], n, phi)
            for r in range(flat.shape[0]):
                for c in range(n):
                    uniq[r, c] = Cyclotomic(
                        mul.order, tuple(mul.scale * int(x) for x in per[r, c])
                    )
            basis = cyc_nullspace(uniq)
        ok = True
        for v in basis:
            vc = CycArray.from_cyclotomics(v, mul.order)
            left = cyc_tensordot(vc, mul, axes=([0], [0]))
            right = cyc_tensordot(vc, mul, axes=([0], [1]))
            if not left.eq(right):
                ok = False
                break
        if ok:
            return basis
        if size >= n:
            raise CotwistError("center verification failed against the full system")
        size *= 2


def _float_center_basis(mul: np.ndarray, tol: float) -> np.ndarray:
    """SVD nullspace of the commutator system for float algebras."""
    n = mul.shape[0]
    system = (mul - mul.transpose(1, 0, 2)).transpose(1, 2, 0).reshape(n * n, n)
    _, s, vh = np.linalg.svd(system)
    # threshold against the size of the structure constants, not of the
    # commutator system itself -- the latter vanishes for commutative algebras
    scale = max(1.0, float(np.max(np.abs(mul))))
    small = s < tol * scale * n
    r = int(np.count_nonzero(small))
    if r == 0:
        raise CotwistError("algebra has trivial center dimension 0 (no unit?)")
    gap_hi = s[-r - 1] if s.size > r else np.inf
    gap_lo = s[-r] if r else 0.0
    if gap_hi < _CLUSTER_GUARD * max(gap_lo, tol * scale):
        raise CotwistError("center dimension is numerically ambiguous")
    return vh[-r:, :].conj()


def center_basis(A: SCAlgebra, tol: float = 1e-8) -> np.ndarray:
    """Complex matrix (r, dim) whose rows span the center.

    Exact elimination for exact algebras (the row count r is then certain);
    numerically guarded SVD for float algebras.
    """
    if A.is_exact:
        basis = _exact_center_basis(A.mul)
        rows = np.zeros((len(basis), A.dim), dtype=complex)
        for k, v in enumerate(basis):
            rows[k] = CycArray.from_cyclotomics(v, A.mul.order).embed()
        return rows
    return _float_center_basis(np.asarray(A.mul), tol)


# ---------------------------------------------------------------------------
# eigenvalue clustering


def _cluster_values(vals: np.ndarray, delta: float):
    """Connected components of the 'closer than delta' graph, with a gap guard.

    Raises SeedRetryError when two distinct clusters come closer than
    _CLUSTER_GUARD * delta (ambiguous separation).
    """
    m = len(vals)
    dist = np.abs(vals[:, None] - vals[None, :])
    adj = dist < delta
    labels = np.full(m, -1, dtype=int)
    current = 0
    for i in range(m):
        if labels[i] >= 0:
            continue
        stack = [i]
        labels[i] = current
        while stack:
            j = stack.pop()
            for k in np.nonzero(adj[j])[0]:
                if labels[k] < 0:
                    labels[k] = current
                    stack.append(k)
        current += 1
    if current > 1:
        inter = dist[labels[:, None] != labels[None, :]]
        if inter.size and inter.min() < _CLUSTER_GUARD * delta:
            raise SeedRetryError("eigenvalue clusters are too close to separate")
    return labels, current


# ---------------------------------------------------------------------------
# Wedderburn dimensions


def _symmetrized_real_basis(center: np.ndarray) -> np.ndarray:
    """Orthonormal real basis of the center viewed as a real vector space.

    Stacks real and imaginary parts of the complex basis (and of i times it),
    so that a random real combination reaches a generic center element; the
    center of a semisimple algebra is spanned by idempotents, so real
    combinations in this sense separate blocks generically.
    """
    r, n = center.shape
    real_vecs = np.vstack(
        [
            np.hstack([center.real, center.imag]),
            np.hstack([-center.imag, center.real]),  # i * basis
        ]
    )
    u, s, vh = np.linalg.svd(real_vecs, full_matrices=False)
    rank = int(np.count_nonzero(s > 1e-12 * (s[0] if s.size else 1.0)))
    return vh[:rank]


def wedderburn_dims(A: SCAlgebra, seed: int, tol: float = 1e-8) -> WedderburnSpectrum:
    """Block dimensions of a semisimple algebra.

    Center (exact for exact input), then a seed-driven random real
    combination z of the symmetrized center basis, eigen-clustering of the
    left-multiplication operator L_z into spectral projectors (the central
    idempotents), and d_i = round(sqrt(trace L_{e_i})).  Asserts
    |d_i - sqrt(trace)| < 0.01 and sum d_i^2 = dim.  Raises SeedRetryError
    when eigenvalues fail to separate cleanly for this seed.
    """
    n = A.dim
    center = center_basis(A, tol)
    r = center.shape[0]
    mul = A.mul_complex()
    unit = A.unit_complex()

    rng = np.random.default_rng(seed)
    sym = _symmetrized_real_basis(center)
    coeffs = rng.standard_normal(sym.shape[0])
    zr = coeffs @ sym
    z = zr[:n] + 1j * zr[n:]

    Lz = np.einsum("i,ijk->kj", z, mul)
    vals, vecs = np.linalg.eig(Lz)
    scale = max(1.0, float(np.max(np.abs(vals))))
    labels, count = _cluster_values(vals, tol * scale)
    if count != r:
        raise SeedRetryError(
            f"random central element produced {count} eigenvalue clusters, center has dimension {r}"
        )

    try:
        vinv = np.linalg.inv(vecs)
    except np.linalg.LinAlgError as exc:
        raise SeedRetryError(f"eigenvector matrix not invertible: {exc}") from exc
    idems = np.zeros((r, n), dtype=complex)
    for i in range(r):
        sel = labels == i
        idems[i] = (vecs[:, sel] @ vinv[sel, :]) @ unit

    residual = 0.0
    for i in range(r):
        ei_ei = np.einsum("i,j,ijk->k", idems[i], idems[i], mul)
        residual = max(residual, float(np.max(np.abs(ei_ei - idems[i]))))
        for j in range(i + 1, r):
            cross = np.einsum("i,j,ijk->k", idems[i], idems[j], mul)
            residual = max(residual, float(np.max(np.abs(cross))))
    residual = max(residual, float(np.max(np.abs(idems.sum(axis=0) - unit))))
    if not np.isfinite(residual) or residual > max(tol, 1e-10) * n:
        raise SeedRetryError(f"central idempotent residual too large: {residual:g}")

    dims = []
    for i in range(r):
        tr = np.einsum("i,ijj->", idems[i], mul)
        if abs(tr.imag) > 1e-6 or tr.real < 0:
            raise CotwistError(f"block trace {tr} is not a nonnegative real")
        d_float = float(np.sqrt(tr.real))
        d = int(round(d_float))
        if abs(d - d_float) >= 0.01 or d < 1:
            raise CotwistError(
                f"block dimension {d_float} is not close to an integer (non-semisimple input?)"
            )
        dims.append(d)
    if sum(d * d for d in dims) != n:
        raise CotwistError(f"sum of squared block dimensions {dims} != dim {n}")
    order = np.argsort(dims, kind="stable")
    return WedderburnSpectrum(
        dims=sorted(dims), idempotent_residual=residual, idempotents=idems[order]
    )


def wedderburn_dims_retrying(A: SCAlgebra, seed: int, tol: float = 1e-8) -> WedderburnSpectrum:
    return with_seed_retries(lambda s: wedderburn_dims(A, s, tol), seed)


# ---------------------------------------------------------------------------
# splitting a simple algebra


def split_simple(A: SCAlgebra, seed: int, tol: float = 1e-8) -> np.ndarray:
    """Irreducible representation of a simple algebra (dim = n*n, A = M_n).

    Picks a seed-driven random element a, eigen-decomposes the
    right-multiplication operator R_a, selects an eigenvalue cluster whose
    eigenspace has dimension exactly n (a left submodule, as left and right
    multiplications commute), and returns pi with pi[x] = the matrix of left
    multiplication by basis element x on that submodule.  Asserts the
    homomorphism residual, pi(unit) = identity, and that the flattened images
    span all n x n matrices.  Raises SeedRetryError on degenerate draws.
    """
    dim = A.dim
    n = int(round(np.sqrt(dim)))
    if n * n != dim:
        raise CotwistError(f"dimension {dim} is not a perfect square; algebra not simple")
    mul = A.mul_complex()
    unit = A.unit_complex()
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)

    Ra = np.einsum("l,jlk->kj", a, mul)
    vals, vecs = np.linalg.eig(Ra)
    scale = max(1.0, float(np.max(np.abs(vals))))
    labels, count = _cluster_values(vals, tol * scale)
    sizes = np.bincount(labels, minlength=count)
    candidates = [i for i in range(count) if sizes[i] == n]
    if not candidates:
        raise SeedRetryError("no eigenvalue cluster of multiplicity n (degenerate element)")
    # deterministic choice: largest |eigenvalue| representative
    reps = [np.max(np.abs(vals[labels == i])) for i in candidates]
    chosen = candidates[int(np.argmax(reps))]

    raw = vecs[:, labels == chosen]
    B, Rq = np.linalg.qr(raw)
    if np.min(np.abs(np.diag(Rq))) < tol * max(1.0, float(np.max(np.abs(Rq)))):
        raise SeedRetryError("eigenspace basis is numerically degenerate")

    L_all = mul.transpose(0, 2, 1)  # [x, k, j] = matrix of left multiplication by x
    pi = np.einsum("ki,xkj,jl->xil", B.conj(), L_all, B)

    invariance = np.einsum("xkj,jl->xkl", L_all, B) - np.einsum("kj,xjl->xkl", B, pi)
    if np.max(np.abs(invariance)) > tol * dim:
        raise SeedRetryError("selected eigenspace is not invariant to tolerance")

    hom = np.einsum("xab,ybc->xyac", pi, pi) - np.einsum("xyk,kac->xyac", mul, pi)
    if np.max(np.abs(hom)) > tol * dim:
        raise SeedRetryError("homomorphism residual too large")
    pi_unit = np.einsum("i,iab->ab", unit, pi)
    if np.max(np.abs(pi_unit - np.eye(n))) > tol * dim:
        raise SeedRetryError("unit does not map to the identity")
    if np.linalg.matrix_rank(pi.reshape(dim, n * n), tol=1e-6) != dim:
        raise SeedRetryError("representation images do not span the full matrix algebra")
    return pi


def split_simple_retrying(A: SCAlgebra, seed: int, tol: float = 1e-8) -> np.ndarray:
    return with_seed_retries(lambda s: split_simple(A, s, tol), seed)
