"""Hand-built complexes for testing the non-coset code path.

All fixtures are properly colored: each top face lists one vertex label
per color, and same-color vertices are never adjacent.
"""

from __future__ import annotations

from .complexes import Complex, corrupt_complex


def octahedron() -> Complex:
    """The boundary of the octahedron: a 2-sphere, 8 triangles, colors by
    coordinate axis (labels 0 = +, 1 = -)."""
    tops = [[sx, sy, sz] for sx in (0, 1) for sy in (0, 1) for sz in (0, 1)]
    return Complex.from_top_faces(2, tops)


def hexagonal_torus() -> Complex:
    """An 18-triangle 3-colorable triangulation of the torus.

    Vertices are the 3x3 grid (a, b) on Z_3 x Z_3 with color (a - b) mod 3;
    each grid cell carries one upward and one downward triangle."""
    def vertex(a: int, b: int) -> int:
        return 3 * (a % 3) + (b % 3)  # label within its color class is fine

    tops = []
    for a in range(3):
        for b in range(3):
            up = [(a, b), (a + 1, b), (a, b + 1)]
            down = [(a + 1, b), (a, b + 1), (a + 1, b + 1)]
            for tri in (up, down):
                by_color = [None, None, None]
                for (x, y) in tri:
                    by_color[(x - y) % 3] = vertex(x, y)
                tops.append(by_color)
    return Complex.from_top_faces(2, tops)


def single_triangle() -> Complex:
    """A single 2-face: the degenerate smallest pure 3-colored complex."""
    return Complex.from_top_faces(2, [[0, 0, 0]])


def torus_cone() -> Complex:
    """Cone over the hexagonal torus: a D = 3 complex whose apex link is
    the torus itself (H^1 = 2), so the constant sheaf is NOT locally
    acyclic.  The negative control for the acyclicity checker."""
    base = hexagonal_torus()
    tops = []
    for t in range(base.n_top):
        tri = [int(base.top_to_face[1 << c][t]) for c in range(3)]
        tops.append(tri + [0])  # apex carries the new color 3
    return Complex.from_top_faces(3, tops)


def corrupted_octahedron() -> Complex:
    """Octahedron with one up-set tampered: DisjointUnion must fail."""
    return corrupt_complex(octahedron())


def cross_polytope_3sphere() -> Complex:
    """The 16-cell boundary: a 3-sphere, 16 tetrahedra, 4 colors by axis.

    The D = 3 fixture for synthetic sheaf condition checks; every vertex
    link is an octahedron."""
    tops = [
        [sx, sy, sz, sw]
        for sx in (0, 1)
        for sy in (0, 1)
        for sz in (0, 1)
        for sw in (0, 1)
    ]
    return Complex.from_top_faces(3, tops)


__all__ = [
    "octahedron",
    "hexagonal_torus",
    "single_triangle",
    "torus_cone",
    "corrupted_octahedron",
    "cross_polytope_3sphere",
]
