"""Finite groups, subgroups, double cosets, stabilizers, constructions."""

import numpy as np
import pytest

from cotwist.errors import CotwistError
from cotwist.groups import (Bicharacter, FiniteGroup, Subgroup,
                            build_elementary_abelian_symplectic, build_semidirect,
                            double_cosets, stabilizer_Kg)


def s3_table():
    """Symmetric group on 3 letters via permutation composition."""
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    index = {p: i for i, p in enumerate(perms)}
    mul = np.zeros((6, 6), dtype=np.int32)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            mul[i, j] = index[tuple(a[b[k]] for k in range(3))]
    return FiniteGroup(mul, labels=[str(p) for p in perms], name="S3")


def test_group_axioms_rejected_when_broken():
    bad = np.array([[0, 1], [1, 1]], dtype=np.int32)  # not a Latin square
    with pytest.raises(CotwistError):
        FiniteGroup(bad)


def test_s3_basics():
    G = s3_table()
    assert G.order == 6
    assert np.array_equal(G.mul[0], np.arange(6))
    # inverses: g * g^-1 = e
    assert np.array_equal(G.mul[np.arange(6), G.inv], np.zeros(6, dtype=G.mul.dtype))


def test_conjugate_oracle():
    G = s3_table()
    for g in range(6):
        for h in range(6):
            expected = G.mul[G.mul[G.inv[g], h], g]
            assert G.conjugate(g, h) == expected


def test_elementary_abelian_symplectic_p3():
    H, sigma = build_elementary_abelian_symplectic(3, 1)
    assert H.order == 9
    assert H.labels[0] == (0, 0)
    # the Cayley table is coordinatewise addition of the vector labels
    vecs = np.array(H.labels)
    for a in range(9):
        for b in range(9):
            want = tuple((vecs[a] + vecs[b]) % 3)
            assert H.labels[H.mul[a, b]] == want
    # sigma((x,y),(x',y')) has exponent x y' - y x'
    for a in range(9):
        for b in range(9):
            x, y = vecs[a]
            xp, yp = vecs[b]
            assert sigma.exponents[a, b] == (x * yp - y * xp) % 3
    sigma.verify()


def test_symplectic_rejects_bad_p():
    for p in (2, 4, 9, 1):
        with pytest.raises(CotwistError):
            build_elementary_abelian_symplectic(p, 1)


def test_semidirect_orders_and_normality():
    H, _ = build_elementary_abelian_symplectic(3, 1)
    G1, H1 = build_semidirect(H, 3, [[[1, 1], [0, 1]]])
    assert G1.order == 27 and H1.order == 9
    G2, H2 = build_semidirect(H, 3, [[[1, 0], [0, 2]]])
    assert G2.order == 18 and H2.order == 9
    G0, H0 = build_semidirect(H, 3, [])
    assert G0.order == 9
    # H is normal: conjugates of H-elements stay in H
    for G, Hs in ((G1, H1), (G2, H2)):
        hset = set(int(x) for x in Hs.elements)
        for g in range(G.order):
            for h in Hs.elements:
                assert int(G.conjugate(g, int(h))) in hset


def test_semidirect_product_law_against_labels():
    H, _ = build_elementary_abelian_symplectic(3, 1)
    G, _ = build_semidirect(H, 3, [[[1, 1], [0, 1]]])
    rng = np.random.default_rng(2)
    for _ in range(40):
        i, j = int(rng.integers(27)), int(rng.integers(27))
        (v1, m1) = G.labels[i]
        (v2, m2) = G.labels[j]
        a1 = np.array(m1).reshape(2, 2)
        a2 = np.array(m2).reshape(2, 2)
        want_vec = tuple((np.array(v1) + a1 @ np.array(v2)) % 3)
        want_mat = tuple(((a1 @ a2) % 3).ravel())
        got_vec, got_mat = G.labels[G.mul[i, j]]
        assert got_vec == want_vec and got_mat == want_mat


def test_semidirect_rejects_singular_generator():
    H, _ = build_elementary_abelian_symplectic(3, 1)
    with pytest.raises(CotwistError):
        build_semidirect(H, 3, [[[1, 1], [1, 1]]])


def test_subgroup_validation():
    G = s3_table()
    with pytest.raises(CotwistError):
        Subgroup(G, np.array([1, 2]))  # no identity
    with pytest.raises(CotwistError):
        Subgroup(G, np.array([0, 1, 2]))  # not closed
    sub = Subgroup(G, np.array([0, 4, 5]))  # the 3-cycles
    assert sub.order == 3
    local = sub.as_group
    assert local.order == 3
    # local table mirrors the parent on sub.elements
    for i in range(3):
        for j in range(3):
            parent = G.mul[sub.elements[i], sub.elements[j]]
            assert sub.elements[local.mul[i, j]] == parent


def test_double_cosets_partition():
    G = s3_table()
    H = Subgroup(G, np.array([0, 1]))  # order 2
    zs = double_cosets(G, H)
    seen = np.concatenate([z.elements for z in zs])
    assert sorted(seen.tolist()) == list(range(6))
    assert sum(z.size for z in zs) == 6
    for z in zs:
        assert z.representative == int(z.elements.min())
        # H z H = z for every coset element as representative
        for g in z.elements:
            orbit = set()
            for a in H.elements:
                for b in H.elements:
                    orbit.add(int(G.mul[G.mul[int(a), int(g)], int(b)]))
            assert orbit == set(int(x) for x in z.elements)
    # S3 with |H| = 2: cosets of sizes 2 and 4
    assert sorted(z.size for z in zs) == [2, 4]


def test_stabilizer_brute_force_oracle():
    G = s3_table()
    H = Subgroup(G, np.array([0, 1]))
    hset = set(int(x) for x in H.elements)
    for g in range(6):
        Kg = stabilizer_Kg(G, H, g)
        brute = {a for a in hset if int(G.conjugate(g, a)) in hset}
        assert set(int(x) for x in Kg.elements) == brute


def test_stabilizer_equals_h_when_normal():
    H, _ = build_elementary_abelian_symplectic(3, 1)
    G, Hs = build_semidirect(H, 3, [[[1, 0], [0, 2]]])
    for z in double_cosets(G, Hs):
        Kg = stabilizer_Kg(G, Hs, z.representative)
        assert np.array_equal(Kg.elements, Hs.elements)


def test_file_round_trip(tmp_path):
    G = s3_table()
    path = tmp_path / "s3.txt"
    G.to_file(path)
    back = FiniteGroup.from_file(path)
    assert np.array_equal(back.mul, G.mul)


def test_file_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n1 2\n")  # entry out of range
    with pytest.raises(CotwistError):
        FiniteGroup.from_file(bad)
    bad.write_text("3\n0 1\n")  # truncated
    with pytest.raises(CotwistError):
        FiniteGroup.from_file(bad)
