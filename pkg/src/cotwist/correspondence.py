"""The theorem engine: per-double-coset spectra by three independent routes.

Route (a) computes each block of the dual algebra directly and splits it.
Route (b) forms the invariant algebra U_g of the stabilizer action on
A_2* (x) A_1* in exact arithmetic and splits that.  Route (c) predicts the
spectrum from the pulled-back tensor cocycle on the stabilizer K_g via a
twisted group algebra, scaled by |H|/|K_g|.  The report machinery runs all
three per coset, asserts the multisets agree, checks Kaplansky divisibility
against |G|, and verifies representative independence.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dual_algebras import SCAlgebra, build_A1_A2_star, build_block_algebra, determine_unit
from .errors import AuditError, CotwistError
from .exactlin import CycArray, cyc_rank
from .groups import (DoubleCoset, FiniteGroup, Subgroup, build_elementary_abelian_symplectic,
                     build_semidirect, double_cosets, stabilizer_Kg)
from .projective import (ProjectiveRep, multiplicity_law_check, projective_rep_from_action,
                         pullback_and_tensor_cocycle, trace_vanishing_check,
                         twisted_group_algebra)
from .semisimple import (derived_seed, split_simple_retrying, wedderburn_dims_retrying)
from .twist import (TwistAudit, TwistData, assemble_twist, load_twist_matrix,
                    q_element_and_antipode_check, square_dimension_check, symplectic_twist,
                    triangular_structure)

#: number of (a, a') translation pairs sampled by the F_g equivariance audit
EQUIVARIANCE_SAMPLES = 20


# ---------------------------------------------------------------------------
# configuration


@dataclass
class SymplecticConstruction:
    """Elementary-abelian H = (Z/pZ)^{2n} with its symplectic twist, inside
    G = H x| Gamma for the group Gamma generated by the given matrices."""

    p: int
    n: int = 1
    gamma_generators: list = field(default_factory=list)

    def describe(self) -> dict:
        return {
            "type": "symplectic",
            "p": self.p,
            "n": self.n,
            "gamma_generators": [
                [[int(x) for x in row] for row in np.asarray(g)]
                for g in self.gamma_generators
            ],
        }


@dataclass
class TableConstruction:
    """Explicit Cayley-table group with a subgroup and a twist-matrix file."""

    group_file: str
    subgroup: list
    twist_file: str

    def describe(self) -> dict:
        return {
            "type": "table",
            "group_file": str(self.group_file),
            "subgroup": [int(x) for x in self.subgroup],
            "twist_file": str(self.twist_file),
        }


@dataclass
class Config:
    construction: object
    seed: int = 0
    tol: float = 1e-8
    out: str = "-"


@dataclass
class Instance:
    """A fully built problem instance plus the twist audit that produced it."""

    G: FiniteGroup
    H: Subgroup
    t: TwistData
    audit: TwistAudit
    description: dict


def build_instance(config: Config) -> Instance:
    """Construct (G, H, twist) from a config; the twist is audited, not assumed."""
    c = config.construction
    if isinstance(c, SymplecticConstruction):
        h_group, sigma = build_elementary_abelian_symplectic(c.p, c.n)
        G, H = build_semidirect(h_group, c.p, list(c.gamma_generators))
        t_local = symplectic_twist(h_group, sigma)
        t = t_local.rehome(H)
        audit = TwistAudit()
        audit.record("prebuilt symplectic twist", t.verified)
    elif isinstance(c, TableConstruction):
        G = FiniteGroup.from_file(c.group_file)
        H = Subgroup(G, np.asarray(c.subgroup, dtype=np.int64))
        order, matrix = load_twist_matrix(c.twist_file)
        t, audit = assemble_twist(H, matrix, order)
    else:
        raise CotwistError(f"unknown construction {type(c).__name__}")
    return Instance(G=G, H=H, t=t, audit=audit, description=c.describe())


# ---------------------------------------------------------------------------
# the stabilizer action on pairs


def pair_translation_perms(rho1, rho2, H: Subgroup, Kg: Subgroup, g: int) -> np.ndarray:
    """Permutations of the pair basis delta_h (x) delta_h' under K_g.

    Row a (local to Kg) sends flat index q = h*|H| + h' to the index of
    (h a^{-1}, (g^{-1} a g) h'): the right-translation action on the A_2*
    leg tensored with the conjugated left-translation action on the A_1* leg.
    Raises when conjugation by g throws a stabilizer element out of H.
    """
    G = Kg.parent
    loc = H.parent_to_local
    m = H.order
    perms = np.empty((Kg.order, m * m), dtype=np.int64)
    for i, a in enumerate(Kg.elements):
        ag = G.conjugate(g, int(a))
        if int(a) not in loc or int(ag) not in loc:
            raise AuditError("stabilizer element leaves H under conjugation")
        p2 = rho2.perms[loc[int(a)]]
        p1 = rho1.perms[loc[int(ag)]]
        perms[i] = (p2[:, None] * m + p1[None, :]).ravel()
    return perms


def pair_orbits(perms: np.ndarray):
    """Orbits of the pair action: (orbit_id per flat index, minimal reps).

    The action is free (the A_2* leg alone is), so every orbit has exactly
    |K_g| elements; that is asserted.  Orbits are numbered by ascending
    minimal representative.
    """
    k, square = perms.shape
    orbit_id = np.full(square, -1, dtype=np.int64)
    reps = []
    for q in range(square):
        if orbit_id[q] >= 0:
            continue
        members = np.unique(perms[:, q])
        if members.size != k:
            raise AuditError("pair translation action is not free")
        if np.any(orbit_id[members] >= 0):
            raise AuditError("pair orbits are not disjoint (action is not a group action)")
        orbit_id[members] = len(reps)
        reps.append(q)
    return orbit_id, np.array(reps, dtype=np.int64)


# ---------------------------------------------------------------------------
# F_g: the comparison homomorphism


def _enumerate_factorizations(G: FiniteGroup, H: Subgroup, Z: DoubleCoset, g: int) -> np.ndarray:
    """0/1 matrix F of shape (|H|^2, |Z|): F[h*|H|+h', z] = [h g h' = Z[z]]."""
    elems = H.elements.astype(np.int64)
    m = elems.size
    left = G.mul[elems, g]
    products = G.mul[np.ix_(left, elems)]
    cols = np.searchsorted(Z.elements, products)
    cols = np.clip(cols, 0, len(Z.elements) - 1)
    if not np.array_equal(Z.elements[cols], products):
        raise AuditError("factorizations h g h' leave the double coset")
    F = np.zeros((m * m, len(Z.elements)), dtype=np.int64)
    F[np.arange(m * m), cols.ravel()] = 1
    return F


def _tensor_product_of_columns(mul2: CycArray, mul1: CycArray, F: np.ndarray) -> CycArray:
    """Products F(delta_y) * F(delta_y') in A_2* (x) A_1*, for all column pairs.

    Returns a CycArray of shape (|Z|, |Z|, |H|^2) whose [i, j] slice is the
    coefficient vector of the product of columns i and j in the pair basis.
    """
    m = mul2.shape[0]
    z = F.shape[1]
    n = mul2.order
    if mul1.order != n:
        raise CotwistError("tensor legs have different cyclotomic orders")
    supports = [np.nonzero(F[:, i])[0] for i in range(z)]
    a_of = [s // m for s in supports]
    b_of = [s % m for s in supports]

    out = np.zeros((z, z, m, m, n), dtype=np.int64)
    st2 = mul2.single_term()
    st1 = mul1.single_term()
    if st2 is not None and st1 is not None:
        E2, N2 = st2
        E1, N1 = st1
        x1 = np.arange(m)[None, None, :, None]
        x2 = np.arange(m)[None, None, None, :]
        for i in range(z):
            av, bv = a_of[i], b_of[i]
            for j in range(z):
                cv, dv = a_of[j], b_of[j]
                e2 = E2[np.ix_(av, cv)]          # (K, K, m)
                e1 = E1[np.ix_(bv, dv)]
                k3 = (e2[:, :, :, None] + e1[:, :, None, :]) % n
                val = N2[np.ix_(av, cv)][:, :, :, None] * N1[np.ix_(bv, dv)][:, :, None, :]
                np.add.at(out[i, j], (x1, x2, k3), val)
    else:
        C2 = mul2.counts
        C1 = mul1.counts
        for i in range(z):
            av, bv = a_of[i], b_of[i]
            for j in range(z):
                cv, dv = a_of[j], b_of[j]
                blk2 = C2[np.ix_(av, cv)]        # (K, K, m, n)
                blk1 = C1[np.ix_(bv, dv)]
                for k1 in range(n):
                    s2 = blk2[..., k1]
                    if not s2.any():
                        continue
                    for k2 in range(n):
                        s1 = blk1[..., k2]
                        if not s1.any():
                            continue
                        out[i, j, :, :, (k1 + k2) % n] += np.einsum("tux,tuy->xy", s2, s1)
    return CycArray(n, mul2.scale * mul1.scale,
                    out.reshape(z, z, m * m, n))


def f_g_map(G: FiniteGroup, H: Subgroup, t: TwistData, Z: DoubleCoset, g: int,
            duals=None, sample_seed: int = 0):
    """The comparison map F_g: block of coset Z -> A_2* (x) A_1*, with audits.

    Returns (F, audit).  F is the 0/1 integer matrix (|H|^2 x |Z|) sending the
    indicator of y to the sum of delta_h (x) delta_h' over factorizations
    y = h g h'.  Audits, all exact: multiplicativity against the block algebra
    of Z, injectivity (cyclotomic rank = |Z|), and translation equivariance on
    sampled pairs.  Any audit failure raises AuditError.
    """
    t.require_verified()
    if g not in set(int(x) for x in Z.elements):
        raise CotwistError(f"representative {g} is not in the double coset")
    if duals is None:
        A1s, A2s, _, _ = build_A1_A2_star(t)
    else:
        A1s, A2s = duals[0], duals[1]
    F = _enumerate_factorizations(G, H, Z, g)
    audit = TwistAudit()

    col_sizes = F.sum(axis=0)
    uniform = bool(np.all(col_sizes == col_sizes[0]) and col_sizes[0] > 0)
    audit.record("uniform factorization count per element", uniform)

    # multiplicativity: F(x *_Z y) = F(x) *_{tensor} F(y) for all basis pairs
    blk = build_block_algebra(t, Z)
    lhs_counts = np.einsum("ijwk,qw->ijqk", blk.mul.counts, F)
    lhs = CycArray(blk.mul.order, blk.mul.scale, lhs_counts)
    rhs = _tensor_product_of_columns(A2s.mul, A1s.mul, F)
    audit.record("homomorphism into A2* (x) A1*", lhs.eq(rhs))

    # injectivity: exact rank over the cyclotomic field
    f_cyc = CycArray(t.order, Fraction(1),
                     np.concatenate([F[..., None],
                                     np.zeros((*F.shape, t.order - 1), dtype=np.int64)],
                                    axis=-1))
    audit.record("injectivity (rank = |Z|)", cyc_rank(f_cyc.to_object()) == F.shape[1])

    # equivariance under g -> a g a' against the translated row permutation
    mul_h = H.as_group.mul
    m = H.order
    rng = np.random.default_rng(sample_seed)
    ok = True
    for _ in range(EQUIVARIANCE_SAMPLES):
        a = int(rng.integers(m))
        ap = int(rng.integers(m))
        g2 = int(G.mul[G.mul[int(H.elements[a]), g], int(H.elements[ap])])
        F2 = _enumerate_factorizations(G, H, Z, g2)
        rows = (mul_h[:, a][:, None] * m + mul_h[ap, :][None, :]).ravel()
        if not np.array_equal(F2, F[rows]):
            ok = False
            break
    audit.record(f"equivariance under translation ({EQUIVARIANCE_SAMPLES} samples)", ok)

    if not audit.ok:
        raise AuditError(f"F_g audits failed: {', '.join(audit.failed)}")
    return F, audit


def image_matches_invariants(F: np.ndarray, orbit_id: np.ndarray) -> bool:
    """Exact column-space equality of F with the orbit-sum basis.

    Each column of F must be the full indicator vector of a single orbit of
    the pair action, and the columns must hit every orbit exactly once.
    """
    z = F.shape[1]
    n_orbits = int(orbit_id.max()) + 1 if orbit_id.size else 0
    if z != n_orbits:
        return False
    seen = set()
    for i in range(z):
        support = np.nonzero(F[:, i])[0]
        ids = set(int(x) for x in orbit_id[support])
        if len(ids) != 1:
            return False
        oid = ids.pop()
        if oid in seen:
            return False
        if support.size != int(np.count_nonzero(orbit_id == oid)):
            return False
        seen.add(oid)
    return len(seen) == n_orbits


# ---------------------------------------------------------------------------
# U_g: the invariant algebra (route b)


def _orbit_structure_constants(mul2: CycArray, mul1: CycArray, orbit_id: np.ndarray,
                               reps: np.ndarray) -> CycArray:
    """Structure constants of the orbit-sum basis, exactly.

    For orbit representatives q_i the product o_i o_j equals the orbit
    symmetrization of delta_{q_i} * o_j; freeness makes the reduction to the
    orbit basis a plain sum of coefficients over each orbit.
    """
    m = mul2.shape[0]
    n = mul2.order
    r = len(reps)
    members = [np.nonzero(orbit_id == i)[0] for i in range(r)]
    h1r = reps // m
    h2r = reps % m
    counts = np.zeros((r, r, r, n), dtype=np.int64)
    st2 = mul2.single_term()
    st1 = mul1.single_term()
    x1 = np.arange(m)[None, :, None]
    x2 = np.arange(m)[None, None, :]
    for i in range(r):
        h1, h2 = int(h1r[i]), int(h2r[i])
        for j in range(r):
            y1 = members[j] // m
            y2 = members[j] % m
            buf = np.zeros((m, m, n), dtype=np.int64)
            if st2 is not None and st1 is not None:
                E2, N2 = st2
                E1, N1 = st1
                e2 = E2[h1, y1, :]               # (K, m)
                e1 = E1[h2, y2, :]
                k3 = (e2[:, :, None] + e1[:, None, :]) % n
                val = N2[h1, y1, :][:, :, None] * N1[h2, y2, :][:, None, :]
                np.add.at(buf, (x1, x2, k3), val)
            else:
                blk2 = mul2.counts[h1, y1]       # (K, m, n)
                blk1 = mul1.counts[h2, y2]
                for k1 in range(n):
                    s2 = blk2[..., k1]
                    if not s2.any():
                        continue
                    for k2 in range(n):
                        s1 = blk1[..., k2]
                        if not s1.any():
                            continue
                        buf[:, :, (k1 + k2) % n] += np.einsum("tx,ty->xy", s2, s1)
            np.add.at(counts[i, j], orbit_id, buf.reshape(m * m, n))
    return CycArray(n, mul2.scale * mul1.scale, counts)


def invariant_algebra_Ug(A1s: SCAlgebra, A2s: SCAlgebra, rho1, rho2,
                         Kg: Subgroup, g: int, H: Subgroup) -> SCAlgebra:
    """The algebra of K_g-invariants in A_2* (x) A_1*, in the orbit-sum basis.

    The stabilizer acts on the pair basis by right translation on the A_2*
    leg and conjugated left translation on the A_1* leg; invariants are
    spanned by orbit sums.  Structure constants are exact; the dimension must
    equal |H|^2 / |K_g| or AuditError is raised.
    """
    perms = pair_translation_perms(rho1, rho2, H, Kg, g)
    orbit_id, reps = pair_orbits(perms)
    m = H.order
    expected, rem = divmod(m * m, Kg.order)
    if rem != 0 or len(reps) != expected:
        raise AuditError(
            f"invariant algebra dimension {len(reps)} != |H|^2/|K_g| = {expected}")
    mul = _orbit_structure_constants(A2s.mul, A1s.mul, orbit_id, reps)
    ones = CycArray(mul.order, Fraction(1),
                    np.concatenate([np.ones((len(reps), 1), dtype=np.int64),
                                    np.zeros((len(reps), mul.order - 1), dtype=np.int64)],
                                   axis=-1))
    unit = determine_unit(mul, ones)
    return SCAlgebra(mul, unit, labels=[int(q) for q in reps],
                     name=f"invariants at g={g}")


# ---------------------------------------------------------------------------
# route (c): the predicted spectrum


def predicted_spectrum(Z: DoubleCoset, g: int, V1: ProjectiveRep, V2: ProjectiveRep,
                       Kg: Subgroup, seed: int, tol: float = 1e-8):
    """Block dimensions of the coset algebra predicted by the stabilizer cocycle.

    Pulls the two projective representations back to K_g, tensors their
    cocycles, splits the resulting twisted group algebra, and scales every
    block dimension by |H|/|K_g| (asserted integral).
    """
    if g not in set(int(x) for x in Z.elements):
        raise CotwistError(f"representative {g} is not in the double coset")
    h_size = V1.size
    ratio, rem = divmod(h_size, Kg.order)
    if rem != 0:
        raise CotwistError(
            f"|K_g| = {Kg.order} does not divide |H| = {h_size} (bad stabilizer)")
    c_w, W = pullback_and_tensor_cocycle(V1, V2, g, Kg)
    alg = twisted_group_algebra(Kg, c_w, tol)
    dims = wedderburn_dims_retrying(alg, seed, tol).dims
    return sorted(ratio * d for d in dims), W, alg


# ---------------------------------------------------------------------------
# per-coset assembly


@dataclass
class CosetSpectrum:
    rep: int
    size: int
    k_size: int
    dims_direct: list
    dims_invariant: list
    dims_predicted: list
    kaplansky_ok: bool
    identities_ok: bool


@dataclass
class InstanceContext:
    """Shared per-instance precomputation for the coset pipelines."""

    instance: Instance
    A1s: SCAlgebra
    A2s: SCAlgebra
    rho1: object
    rho2: object
    V1: ProjectiveRep
    V2: ProjectiveRep
    seed: int
    tol: float


def prepare_instance(instance: Instance, seed: int, tol: float = 1e-8) -> InstanceContext:
    """Build the dual algebras, their actions, and both projective reps."""
    t = instance.t
    t.require_verified()
    A1s, A2s, rho1, rho2 = build_A1_A2_star(t)
    pi1 = split_simple_retrying(A1s, derived_seed(seed, 101), tol)
    pi2 = split_simple_retrying(A2s, derived_seed(seed, 102), tol)
    V1 = projective_rep_from_action(A1s, rho1, pi1, instance.H, tol)
    V2 = projective_rep_from_action(A2s, rho2, pi2, instance.H, tol)
    return InstanceContext(instance=instance, A1s=A1s, A2s=A2s, rho1=rho1, rho2=rho2,
                           V1=V1, V2=V2, seed=seed, tol=tol)


def _coset_pipeline(ctx: InstanceContext, Z: DoubleCoset):
    """All three routes plus the per-coset laws; returns (spectrum, failures)."""
    inst = ctx.instance
    G, H, t = inst.G, inst.H, inst.t
    seed, tol = ctx.seed, ctx.tol
    g = Z.representative
    failures: list[str] = []
    tag = f"coset {g}"

    Kg = stabilizer_Kg(G, H, g)

    blk = build_block_algebra(t, Z)
    dims_direct = wedderburn_dims_retrying(blk, seed, tol).dims

    Ug = invariant_algebra_Ug(ctx.A1s, ctx.A2s, ctx.rho1, ctx.rho2, Kg, g, H)
    dims_invariant = wedderburn_dims_retrying(Ug, seed, tol).dims

    dims_predicted, W, twisted = predicted_spectrum(Z, g, ctx.V1, ctx.V2, Kg, seed, tol)

    if not trace_vanishing_check(W, H):
        failures.append(f"{tag}: trace vanishing law fails for the tensor representation")
    spec_w = wedderburn_dims_retrying(twisted, seed, tol)
    mult_ok, _ = multiplicity_law_check(W, spec_w, H.order)
    if not mult_ok:
        failures.append(f"{tag}: multiplicity law (|H|/|K_g|) * d fails")

    kaplansky_ok = all(G.order % d == 0 for d in dims_direct)
    if not kaplansky_ok:
        failures.append(f"{tag}: a block dimension does not divide |G| = {G.order}")

    square_sum_ok = sum(d * d for d in dims_direct) == Z.size
    dim_ug_ok = Ug.dim * Kg.order == H.order * H.order
    routes_ok = dims_direct == dims_invariant == dims_predicted
    identities_ok = routes_ok and square_sum_ok and dim_ug_ok
    if not routes_ok:
        failures.append(
            f"{tag}: route disagreement direct={dims_direct} "
            f"invariant={dims_invariant} predicted={dims_predicted}")
    if not square_sum_ok:
        failures.append(f"{tag}: sum of squared dimensions != coset size {Z.size}")
    if not dim_ug_ok:
        failures.append(f"{tag}: invariant algebra dimension != |H|^2/|K_g|")

    # representative invariance: a seeded second representative must predict
    # the same multiset
    rng = np.random.default_rng(derived_seed(seed, 7000 + g))
    others = Z.elements[Z.elements != g]
    g2 = int(rng.choice(others)) if others.size else g
    Kg2 = stabilizer_Kg(G, H, g2)
    dims_again, _, _ = predicted_spectrum(Z, g2, ctx.V1, ctx.V2, Kg2, seed, tol)
    if dims_again != dims_predicted:
        failures.append(
            f"{tag}: representative {g2} predicts {dims_again} != {dims_predicted}")

    spectrum = CosetSpectrum(rep=int(g), size=int(Z.size), k_size=int(Kg.order),
                             dims_direct=dims_direct, dims_invariant=dims_invariant,
                             dims_predicted=dims_predicted, kaplansky_ok=kaplansky_ok,
                             identities_ok=identities_ok)
    return spectrum, failures


def coset_report(G: FiniteGroup, H: Subgroup, t: TwistData, Z: DoubleCoset,
                 seed: int, tol: float = 1e-8, ctx: InstanceContext | None = None) -> CosetSpectrum:
    """Three-route spectrum comparison for one double coset."""
    if ctx is None:
        inst = Instance(G=G, H=H, t=t, audit=TwistAudit(), description={})
        ctx = prepare_instance(inst, seed, tol)
    spectrum, _ = _coset_pipeline(ctx, Z)
    return spectrum


# ---------------------------------------------------------------------------
# the full report


@dataclass
class Report:
    instance: dict
    seed: int
    tol: float
    global_checks: dict
    cosets: list
    failures: list
    totals: dict

    @property
    def ok(self) -> bool:
        return not self.failures


def _global_checks(instance: Instance):
    """The five instance-level checks; failures annotated by name."""
    t = instance.t
    m = instance.H.order
    failures = [f"twist axiom failed: {name}" for name, ok in instance.audit.checks
                if not ok]
    checks = {
        "twist_axioms": instance.audit.ok,
        "triangularity": False,
        "minimality_rank": 0,
        "q_identity": False,
        "square_dim": 0,
    }
    if not instance.audit.ok:
        failures.append("twist failed verification; remaining global checks skipped")
        return checks, failures
    try:
        tri = triangular_structure(t)
        checks["triangularity"] = True
        checks["minimality_rank"] = int(tri.rank)
        if not tri.minimal:
            failures.append(
                f"twist is not minimal: rank {tri.rank} != |H| = {m}")
    except AuditError as exc:
        failures.append(f"triangularity failed: {exc}")
    try:
        _, q_ok = q_element_and_antipode_check(t)
        checks["q_identity"] = bool(q_ok)
        if not q_ok:
            failures.append("antipode identity for the Q element fails")
    except CotwistError as exc:
        failures.append(f"Q element check failed: {exc}")
    try:
        checks["square_dim"] = int(square_dimension_check(t))
    except CotwistError as exc:
        failures.append(f"square dimension check failed: {exc}")
    return checks, failures


def full_report(config: Config, jobs: int = 1, global_only: bool = False) -> Report:
    """Global audits plus the three-route comparison on every double coset."""
    instance = build_instance(config)
    G, H = instance.G, instance.H
    checks, failures = _global_checks(instance)
    global_ok = (checks["twist_axioms"] and checks["triangularity"]
                 and checks["q_identity"]
                 and checks["minimality_rank"] == H.order
                 and checks["square_dim"] ** 2 == H.order)

    cosets: list[CosetSpectrum] = []
    totals = {
        "group_order": int(G.order),
        "subgroup_order": int(H.order),
        "coset_size_total": 0,
        "block_square_total": 0,
    }
    if not global_only:
        if global_ok:
            ctx = prepare_instance(instance, config.seed, config.tol)
            zs = double_cosets(G, H)

            def run_one(z):
                try:
                    return _coset_pipeline(ctx, z)
                except CotwistError as exc:
                    return None, [f"coset {z.representative}: {exc}"]

            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    results = list(pool.map(run_one, zs))
            else:
                results = [run_one(z) for z in zs]
            for spectrum, errs in results:
                if spectrum is not None:
                    cosets.append(spectrum)
                failures.extend(errs)
            totals["coset_size_total"] = int(sum(c.size for c in cosets))
            totals["block_square_total"] = int(
                sum(sum(d * d for d in c.dims_direct) for c in cosets))
            if totals["coset_size_total"] != G.order:
                failures.append(
                    f"double cosets sum to {totals['coset_size_total']} != |G| = {G.order}")
        else:
            failures.append("coset analysis skipped: global checks failed")
    return Report(instance=instance.description, seed=int(config.seed),
                  tol=float(config.tol), global_checks=checks, cosets=cosets,
                  failures=failures, totals=totals)


# ---------------------------------------------------------------------------
# rendering


def _fmt_float(x: float) -> float:
    return float(f"{x:.12g}")


def report_to_dict(report: Report) -> dict:
    return {
        "instance": report.instance,
        "seed": report.seed,
        "tol": _fmt_float(report.tol),
        "global_checks": {
            "twist_axioms": bool(report.global_checks["twist_axioms"]),
            "triangularity": bool(report.global_checks["triangularity"]),
            "minimality_rank": int(report.global_checks["minimality_rank"]),
            "q_identity": bool(report.global_checks["q_identity"]),
            "square_dim": int(report.global_checks["square_dim"]),
        },
        "cosets": [
            {
                "rep": c.rep,
                "size": c.size,
                "k_size": c.k_size,
                "dims_direct": list(c.dims_direct),
                "dims_invariant": list(c.dims_invariant),
                "dims_predicted": list(c.dims_predicted),
                "kaplansky_ok": bool(c.kaplansky_ok),
                "identities_ok": bool(c.identities_ok),
            }
            for c in report.cosets
        ],
        "failures": list(report.failures),
        "totals": report.totals,
    }


def render_json(report: Report) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def render_table(report: Report) -> str:
    lines = []
    inst = report.instance
    kind = inst.get("type", "?")
    if kind == "symplectic":
        head = (f"symplectic p={inst['p']} n={inst['n']} "
                f"generators={len(inst['gamma_generators'])}")
    elif kind == "table":
        head = f"table group={inst['group_file']} twist={inst['twist_file']}"
    else:
        head = "instance ?"
    lines.append(head)
    lines.append(f"seed={report.seed} tol={report.tol:.12g}")
    g = report.global_checks
    lines.append(
        "global: axioms={} triangular={} rank={} q={} sqrt_dim={}".format(
            "ok" if g["twist_axioms"] else "FAIL",
            "ok" if g["triangularity"] else "FAIL",
            g["minimality_rank"], "ok" if g["q_identity"] else "FAIL",
            g["square_dim"]))
    header = (f"{'rep':>5} {'size':>5} {'|K_g|':>5} {'direct':>20} "
              f"{'invariant':>20} {'predicted':>20} {'kap':>4} {'ids':>4}")
    lines.append(header)
    lines.append("-" * len(header))
    for c in report.cosets:
        lines.append(
            f"{c.rep:>5} {c.size:>5} {c.k_size:>5} "
            f"{str(c.dims_direct):>20} {str(c.dims_invariant):>20} "
            f"{str(c.dims_predicted):>20} "
            f"{'ok' if c.kaplansky_ok else 'NO':>4} "
            f"{'ok' if c.identities_ok else 'NO':>4}")
    if report.failures:
        lines.append("failures:")
        for f in report.failures:
            lines.append(f"  - {f}")
    else:
        lines.append("all checks passed")
    t = report.totals
    lines.append(
        f"totals: |G|={t['group_order']} |H|={t['subgroup_order']} "
        f"cosets={t['coset_size_total']} blocks={t['block_square_total']}")
    return "\n".join(lines) + "\n"
