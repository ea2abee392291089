"""Tanner sheaves: induction, cohomology, cup products, lifting, and the
exhaustive local product checks."""

import random

import pytest

from cosetcode import fixtures
from cosetcode.algebra import VectorIso, build_ring
from cosetcode.complexes import build_coset_complex
from cosetcode.gf2 import BitMatrix, BitVector, row_space_equal
from cosetcode.group import enumerate_group
from cosetcode.local_codes import reed_muller
from cosetcode.sheaf import (
    Cochain,
    Sheaf,
    SheafError,
    attach_constant_sheaf,
    attach_local_codes,
    check_flasque,
    check_locally_acyclic,
    check_pair_products,
    check_projected_weights,
    coboundary_matrix,
    cocycle_basis,
    cohomology_dim,
    cohomology_reps,
    cup_product,
    dual_sheaf,
    euler_characteristic_cohomology,
    euler_characteristic_spaces,
    induce_lower_codes,
    lift_shrunk_cocycle,
    link_vertex_code_dimension,
    projection_matrix,
    restrict_to_type,
    sheaf_at_link,
    star_sheaf,
)


@pytest.mark.parametrize(
    "name,betti",
    [
        ("octahedron", [1, 0, 1]),
        ("hexagonal_torus", [1, 2, 1]),
        ("single_triangle", [1, 0, 0]),
        ("cross_polytope_3sphere", [1, 0, 0, 1]),
    ],
)
def test_constant_sheaf_cohomology(name, betti):
    c = getattr(fixtures, name)()
    s = attach_constant_sheaf(c)
    assert [cohomology_dim(s, j) for j in range(c.D + 1)] == betti
    assert check_flasque(s)
    assert check_locally_acyclic(s)
    assert euler_characteristic_spaces(s) == euler_characteristic_cohomology(s)


def test_torus_cone_is_not_locally_acyclic():
    s = attach_constant_sheaf(fixtures.torus_cone())
    assert check_flasque(s)
    assert not check_locally_acyclic(s)


def test_flasque_detects_widened_face_code():
    c = fixtures.cross_polytope_3sphere()
    s = attach_constant_sheaf(c)
    bad = dict(s.local_bases)
    width = len(c.up_sets[7][0])
    bad[(7, 0)] = BitMatrix.identity(width)
    assert not check_flasque(Sheaf(c, bad))


def test_coboundary_squares_to_zero(sheaf2, dual2):
    for s in (sheaf2, dual2):
        d0 = coboundary_matrix(s, 0)
        d1 = coboundary_matrix(s, 1)
        assert d1.matmul(d0).is_zero()


def test_q2_sheaf_dimensions(sheaf2):
    # 63 vertices of local dimension 1, 252 edges of local dimension 1
    assert sheaf2.level_dim(0) == 63
    assert sheaf2.level_dim(1) == 252
    assert sheaf2.level_dim(2) == 168
    assert cohomology_dim(sheaf2, 1) == 23


def test_dual_of_dual_is_original(sheaf2):
    back = dual_sheaf(dual_sheaf(sheaf2))
    for face in sheaf2.complex.level_faces(1):
        assert row_space_equal(back.basis(face), sheaf2.basis(face))


def test_projection_scatters_injectively(sheaf2):
    pi = projection_matrix(sheaf2, 0)
    # every column has the weight of its source basis row (8 here)
    assert set(int(w) for w in pi.transpose().row_weights()) == {8}


def test_restriction_is_diagonal_selector(sheaf2):
    r = restrict_to_type(sheaf2, 1, (0, 1))
    assert r.matmul(r) == r
    assert 0 < r.rank() < sheaf2.level_dim(1)


def test_cocycles_contain_coboundaries(sheaf2):
    z = cocycle_basis(sheaf2, 1)
    d0 = coboundary_matrix(sheaf2, 0)
    for i in range(min(10, d0.cols)):
        col = BitVector(d0.cols, 1 << i)
        assert z.in_row_space(d0.matvec(col))


def test_cup_product_leibniz_rule():
    c = fixtures.octahedron()
    s = attach_constant_sheaf(c)
    ss = star_sheaf(s, s)
    d0 = coboundary_matrix(s, 0)
    d1 = coboundary_matrix(s, 1)
    d0s = coboundary_matrix(ss, 0)
    d1s = coboundary_matrix(ss, 1)
    rng = random.Random(7)
    for _ in range(10):
        f = Cochain(s, 0, BitVector(s.level_dim(0), rng.getrandbits(s.level_dim(0))))
        g = Cochain(s, 0, BitVector(s.level_dim(0), rng.getrandbits(s.level_dim(0))))
        df = Cochain(s, 1, d0.matvec(f.data))
        dg = Cochain(s, 1, d0.matvec(g.data))
        fg = cup_product(f, g, target=ss)
        assert d0s.matvec(fg.data) == (
            cup_product(df, g, target=ss) ^ cup_product(f, dg, target=ss)
        ).data
        h = Cochain(s, 1, BitVector(s.level_dim(1), rng.getrandbits(s.level_dim(1))))
        dh = Cochain(s, 2, d1.matvec(h.data))
        hg = cup_product(h, g, target=ss)
        assert d1s.matvec(hg.data) == (
            cup_product(dh, g, target=ss) ^ cup_product(h, dg, target=ss)
        ).data


def test_cup_product_of_cocycles_is_cocycle(sheaf2):
    s = sheaf2
    ss = star_sheaf(s, s)
    reps = cohomology_reps(s, 1)
    f = Cochain(s, 1, reps.row(0))
    z0 = cocycle_basis(s, 0)
    g = Cochain(s, 0, z0.row(0))
    fg = cup_product(f, g, target=ss)
    d1s = coboundary_matrix(ss, 1)
    assert d1s.matvec(fg.data).value == 0


def test_lift_shrunk_cocycle_roundtrip(sheaf2):
    s = sheaf2
    reps = cohomology_reps(s, 1)
    d1 = coboundary_matrix(s, 1)
    for T in ((0, 1), (0, 2), (1, 2)):
        r = restrict_to_type(s, 1, T)
        f = r.matvec(reps.row(0))
        lifted = lift_shrunk_cocycle(s, T, f)
        assert d1.matvec(lifted.data).value == 0
        assert r.matvec(lifted.data) == f


def test_pair_products_even_overlap_q2(sheaf2, dual2):
    assert check_pair_products(sheaf2, dual2, 2)["ok"]
    assert check_pair_products(sheaf2, sheaf2, 2)["ok"]
    assert check_projected_weights(sheaf2, 2)["ok"]


def test_pair_products_catch_odd_overlap():
    # identity "codes" on the octahedron edges violate even overlap
    c = fixtures.octahedron()
    local = {}
    for mask in (0b011, 0b101, 0b110):
        for idx in c.faces(mask):
            local[(mask, idx)] = BitMatrix.identity(2)
    for mask in (1, 2, 4):
        for idx in c.faces(mask):
            local[(mask, idx)] = BitMatrix.identity(4)
    s = Sheaf(c, local)
    assert not check_pair_products(s, s, 2)["ok"]
    assert not check_projected_weights(s, 2)["ok"]


def test_link_vertex_code_dimension_q2(ring2):
    code = reed_muller(0, 1)
    iso = VectorIso(ring2.field)
    assert link_vertex_code_dimension(ring2, code, iso) == 1


def test_attach_rejects_wrong_length(complex2, ring2):
    iso = VectorIso(ring2.field)
    with pytest.raises(SheafError):
        attach_local_codes(complex2, reed_muller(0, 2), iso, ring2)


def test_sheaf_at_link_matches_vertex_code(sheaf2):
    c = sheaf2.complex
    face = (1, 0)
    link_sheaf = sheaf_at_link(sheaf2, face)
    total = sum(
        link_sheaf.basis(f).rows
        for f in link_sheaf.complex.level_faces(link_sheaf.complex.D - 1)
    )
    assert total > 0


def test_value_at_reads_local_codeword(sheaf2):
    s = sheaf2
    f = Cochain(s, 0, BitVector(s.level_dim(0), 1))
    face = s.complex.level_faces(0)[0]
    assert f.value_at(face) == s.basis(face).row_int(0)
