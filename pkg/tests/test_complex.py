"""Colored simplicial complexes: fixtures, the coset construction, and
the structural verifier."""

import numpy as np
import pytest

from cosetcode import fixtures
from cosetcode.complexes import (
    Complex,
    colors_of,
    mask_of,
    type_cycle_face_map,
    verify_structure,
)


def _all_ok(report):
    return all(ok for ok, _ in report.values())


def test_mask_helpers():
    assert mask_of([0, 2]) == 0b101
    assert colors_of(0b110) == [1, 2]


@pytest.mark.parametrize(
    "name,n_top,n_vertices",
    [
        ("octahedron", 8, 6),
        ("hexagonal_torus", 18, 9),
        ("single_triangle", 1, 3),
        ("cross_polytope_3sphere", 16, 8),
        ("torus_cone", 18, 10),
    ],
)
def test_fixture_structure(name, n_top, n_vertices):
    c = getattr(fixtures, name)()
    assert c.n_top == n_top
    assert sum(c.n_faces(1 << j) for j in range(c.n_colors)) == n_vertices
    assert _all_ok(verify_structure(c))


def test_corrupted_octahedron_fails_specifically():
    report = verify_structure(fixtures.corrupted_octahedron())
    assert not report["disjoint_union"][0]
    assert not report["intersection"][0]
    assert report["purity"][0]


def test_octahedron_up_set_sizes():
    c = fixtures.octahedron()
    for j in range(3):
        for idx in c.faces(1 << j):
            assert len(c.up_sets[1 << j][idx]) == 4
    for mask in (0b011, 0b101, 0b110):
        for idx in c.faces(mask):
            assert len(c.up_sets[mask][idx]) == 2


def test_containment_and_cofaces():
    c = fixtures.octahedron()
    v = (1, 0)
    for emask in (0b011, 0b101):
        for eidx in c.cofaces(v, emask):
            assert c.contains(v, (emask, eidx))
    top0 = c.up_sets[1][0][0]
    assert c.face_in_top(1, top0) == 0


def test_link_of_octahedron_vertex_is_square():
    c = fixtures.octahedron()
    link = c.link((1, 0))
    assert link.D == 1
    assert link.n_top == 4  # the four triangles around the vertex
    assert _all_ok(verify_structure(link))


def test_coset_complex_counts(complex2, table2):
    c = complex2
    assert c.n_top == table2.size == 168
    for j in range(3):
        assert c.n_faces(1 << j) == 168 // 8  # |G| / |K_v|
    for mask in (0b011, 0b101, 0b110):
        assert c.n_faces(mask) == 168 // 2  # |G| / |K_e|
    assert _all_ok(verify_structure(c))


def test_coset_complex_up_set_sizes(complex2):
    for j in range(3):
        for idx in complex2.faces(1 << j):
            assert len(complex2.up_sets[1 << j][idx]) == 8
    for mask in (0b011, 0b101, 0b110):
        for idx in complex2.faces(mask):
            assert len(complex2.up_sets[mask][idx]) == 2


def test_top_to_face_consistency(complex2):
    c = complex2
    rng = np.random.default_rng(4)
    for t in rng.integers(0, c.n_top, size=20):
        for mask in c.masks:
            idx = int(c.top_to_face[mask][int(t)])
            assert int(t) in c.up_sets[mask][idx]


def test_type_cycle_face_map(complex2):
    maps = type_cycle_face_map(complex2)
    # color-j vertices map bijectively onto color-(j+1) vertices
    for j in range(3):
        m = maps[1 << j]
        assert len(set(int(v) for v in m)) == complex2.n_faces(1 << j)


def test_serialize_deserialize_roundtrip():
    c = fixtures.hexagonal_torus()
    back = Complex.deserialize(c.serialize())
    assert back.n_top == c.n_top
    assert all(back.up_sets[m] == c.up_sets[m] for m in c.masks)


def test_vertex_labels_of_top():
    c = fixtures.octahedron()
    labels = c.vertex_labels_of_top(0)
    assert len(labels) == 3
