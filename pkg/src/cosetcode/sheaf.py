"""Tanner sheaves: oriented local codes on (D-1)-faces, induced lower
codes, coboundary/projection/restriction matrices, duals, cup products.

Global cochain coordinates at level j concatenate the local bases of
the level-j faces in (type mask ascending, face index ascending) order.
Local basis columns follow the face's sorted up-set.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import RingTable, VectorIso
from .complexes import Complex, FaceId, colors_of, mask_of
from .gf2 import BitMatrix, BitVector, GF2Error
from .group import GroupTable
from .local_codes import LinearCode, dual_code


class SheafError(ValueError):
    """Raised when a sheaf axiom or construction contract is violated."""


class Sheaf:
    """Local-code bases for every face of a complex.

    `local_bases[(mask, idx)]` is a BitMatrix whose rows span the local
    code over the face's up-set columns.  Top faces implicitly carry the
    full one-dimensional code and are not stored.
    """

    def __init__(self, complex_: Complex, local_bases: Dict[FaceId, BitMatrix]):
        self.complex = complex_
        self.local_bases = local_bases
        self._offsets: Dict[int, Tuple[Dict[FaceId, int], int]] = {}
        self._dual_bases: Dict[FaceId, BitMatrix] = {}

    # -- bases -------------------------------------------------------------

    def basis(self, face: FaceId) -> BitMatrix:
        mask, idx = face
        if mask == self.complex.full_mask:
            return BitMatrix.identity(1)
        try:
            return self.local_bases[face]
        except KeyError:
            raise SheafError("no local basis for face %r (induce first?)" % (face,))

    def dim(self, face: FaceId) -> int:
        return self.basis(face).rows

    def dual_local_basis(self, face: FaceId) -> BitMatrix:
        cached = self._dual_bases.get(face)
        if cached is None:
            cached = self.basis(face).kernel_basis()
            self._dual_bases[face] = cached
        return cached

    # -- global coordinates ---------------------------------------------------

    def level_offsets(self, j: int) -> Tuple[Dict[FaceId, int], int]:
        cached = self._offsets.get(j)
        if cached is not None:
            return cached
        offsets: Dict[FaceId, int] = {}
        total = 0
        for face in self.complex.level_faces(j):
            offsets[face] = total
            total += self.dim(face)
        self._offsets[j] = (offsets, total)
        return offsets, total

    def level_dim(self, j: int) -> int:
        return self.level_offsets(j)[1]

    def zero_cochain(self, j: int) -> "Cochain":
        return Cochain(self, j, BitVector(self.level_dim(j)))


class Cochain:
    """An element of C^j in global coordinates."""

    __slots__ = ("sheaf", "level", "data")

    def __init__(self, sheaf: Sheaf, level: int, data: BitVector):
        if data.length != sheaf.level_dim(level):
            raise SheafError("cochain length mismatch at level %d" % level)
        self.sheaf = sheaf
        self.level = level
        self.data = data

    def value_at(self, face: FaceId) -> int:
        """The local codeword at `face` as an int over its up-set columns."""
        offsets, _ = self.sheaf.level_offsets(self.level)
        off = offsets[face]
        basis = self.sheaf.basis(face)
        out = 0
        for i in range(basis.rows):
            if self.data.bit(off + i):
                out ^= basis.row_int(i)
        return out

    def __xor__(self, other: "Cochain") -> "Cochain":
        if other.level != self.level or other.sheaf is not self.sheaf:
            raise SheafError("cochain mismatch in xor")
        return Cochain(self.sheaf, self.level, self.data ^ other.data)


# -- construction -------------------------------------------------------------


def attach_local_codes(
    c: Complex,
    code: LinearCode,
    iso: VectorIso,
    ring: RingTable,
) -> Sheaf:
    """Attach the oriented code to every (D-1)-face of a coset complex.

    The orientation of a cotype-j face with canonical rep g maps the top
    face g*e(alpha*t) to code coordinate U(alpha); changing the rep only
    translates coordinates by an affine map, which fixes the row space.
    """
    table = c.group
    if table is None:
        raise SheafError("attach_local_codes needs a coset complex")
    q = ring.field.q
    if code.n != q:
        raise SheafError("code length %d != q = %d" % (code.n, q))
    gen_col = {
        (color, alpha): col for col, (color, alpha, _) in enumerate(table.gens)
    }
    local: Dict[FaceId, BitMatrix] = {}
    for mask in c.level_masks(c.D - 1):
        cotype = next(j for j in range(c.n_colors) if not (mask >> j) & 1)
        pairs = table.k_color_elements(cotype)
        for idx in c.faces(mask):
            g = c.keys[mask][idx]
            ups = c.up_sets[mask][idx]
            pos = {t: p for p, t in enumerate(ups)}
            # column permutation: code coordinate U(alpha) -> up-set position
            perm = [0] * q
            for alpha, _eid in pairs:
                top = g if alpha == 0 else int(table.cayley[g, gen_col[(cotype, alpha)]])
                perm[iso.apply_int(alpha)] = pos[top]
            rows = []
            for i in range(code.k):
                w = code.generator.row_int(i)
                out = 0
                for point in range(q):
                    if (w >> point) & 1:
                        out |= 1 << perm[point]
                rows.append(out)
            basis, _ = BitMatrix.from_int_rows(rows, q).rref()
            local[(mask, idx)] = basis
    return Sheaf(c, local)


def attach_constant_sheaf(c: Complex) -> Sheaf:
    """Repetition local code on every face below the top: the constant
    sheaf (no induction needed; restrictions of constants are constant)."""
    local: Dict[FaceId, BitMatrix] = {}
    for level in range(c.D):
        for mask in c.level_masks(level):
            for idx in c.faces(mask):
                width = len(c.up_sets[mask][idx])
                local[(mask, idx)] = BitMatrix.from_int_rows(
                    [(1 << width) - 1], width
                )
    return Sheaf(c, local)


def attach_explicit(c: Complex, defining: Dict[FaceId, BitMatrix]) -> Sheaf:
    """User-supplied (D-1)-level codes (fixtures and negative controls)."""
    return Sheaf(c, dict(defining))


def induce_lower_codes(s: Sheaf) -> Sheaf:
    """Fill every level below D-1 with the kernel of the stacked dual
    constraints of the (D-1)-faces above each face."""
    c = s.complex
    local = dict(s.local_bases)
    top_masks = c.level_masks(c.D - 1)
    duals: Dict[FaceId, BitMatrix] = {}
    for smask in top_masks:
        for sidx in c.faces(smask):
            duals[(smask, sidx)] = local[(smask, sidx)].kernel_basis()
    for level in range(c.D - 2, -1, -1):
        for mask in c.level_masks(level):
            for idx in c.faces(mask):
                ups = c.up_sets[mask][idx]
                pos = {t: p for p, t in enumerate(ups)}
                width = len(ups)
                rows: List[int] = []
                for smask in top_masks:
                    if mask & ~smask:
                        continue
                    for sidx in c.cofaces((mask, idx), smask):
                        sups = c.up_sets[smask][sidx]
                        dual = duals[(smask, sidx)]
                        for i in range(dual.rows):
                            w = dual.row_int(i)
                            out = 0
                            for p, t in enumerate(sups):
                                if (w >> p) & 1:
                                    out |= 1 << pos[t]
                            rows.append(out)
                if rows:
                    constraints = BitMatrix.from_int_rows(rows, width)
                    basis = constraints.kernel_basis().row_space_basis()
                else:
                    basis = BitMatrix.identity(width)
                local[(mask, idx)] = basis
    return Sheaf(c, local)


def dual_sheaf(s: Sheaf) -> Sheaf:
    """Replace every defining code by its dual and re-induce."""
    c = s.complex
    defining: Dict[FaceId, BitMatrix] = {}
    for mask in c.level_masks(c.D - 1):
        for idx in c.faces(mask):
            ker = s.basis((mask, idx)).kernel_basis()
            defining[(mask, idx)] = ker.row_space_basis()
    return induce_lower_codes(Sheaf(c, defining))


# -- matrices -----------------------------------------------------------------


def coboundary_matrix(s: Sheaf, j: int) -> BitMatrix:
    """delta^j : C^j -> C^{j+1} in global coordinates (rows = target)."""
    c = s.complex
    if not 0 <= j < c.D:
        raise SheafError("coboundary level out of range")
    src_off, src_dim = s.level_offsets(j)
    dst_off, dst_dim = s.level_offsets(j + 1)
    out = BitMatrix(dst_dim, src_dim)
    # gather restrictions per target face, then solve in its basis once
    pending: Dict[FaceId, List[Tuple[int, int]]] = {}
    for face in c.level_faces(j):
        mask, idx = face
        ups = c.up_sets[mask][idx]
        basis = s.basis(face)
        for smask in c.level_masks(j + 1):
            if mask & ~smask:
                continue
            for sidx in c.cofaces(face, smask):
                sups = c.up_sets[smask][sidx]
                spos = [ups.index(t) for t in sups]
                for i in range(basis.rows):
                    w = basis.row_int(i)
                    r = 0
                    for p, srcp in enumerate(spos):
                        if (w >> srcp) & 1:
                            r |= 1 << p
                    pending.setdefault((smask, sidx), []).append(
                        (src_off[face] + i, r)
                    )
    for tface, entries in pending.items():
        tb = s.basis(tface)
        width = tb.cols
        rhs = BitMatrix(width, len(entries))
        for col, (_, r) in enumerate(entries):
            for p in range(width):
                if (r >> p) & 1:
                    rhs.set_bits(p, [col])
        x = tb.transpose().solve(rhs)
        if x is None:
            raise SheafError(
                "restriction to %r leaves the local code: sheaf is inconsistent"
                % (tface,)
            )
        base = dst_off[tface]
        for col, (src_coord, _) in enumerate(entries):
            for i in range(tb.rows):
                if x.get(i, col):
                    out.set_bits(base + i, [src_coord])
    return out


def projection_matrix(s: Sheaf, j: int) -> BitMatrix:
    """pi-up : C^j -> F_2^{top faces}; column (face, row) scatters the
    basis row over the face's up-set."""
    c = s.complex
    offsets, dim = s.level_offsets(j)
    out = BitMatrix(c.n_top, dim)
    for face in c.level_faces(j):
        mask, idx = face
        ups = c.up_sets[mask][idx]
        basis = s.basis(face)
        for i in range(basis.rows):
            w = basis.row_int(i)
            col = offsets[face] + i
            for p, t in enumerate(ups):
                if (w >> p) & 1:
                    out.set_bits(t, [col])
    return out


def restrict_to_type(s: Sheaf, j: int, T: Sequence[int]) -> BitMatrix:
    """The square diagonal projection keeping coordinates of faces whose
    type is contained in T."""
    t_mask = mask_of(T)
    offsets, dim = s.level_offsets(j)
    out = BitMatrix(dim, dim)
    for face, off in offsets.items():
        mask, _ = face
        if mask & ~t_mask:
            continue
        for i in range(s.dim(face)):
            out.set_bits(off + i, [off + i])
    return out


# -- cohomology ----------------------------------------------------------------


def cocycle_basis(s: Sheaf, j: int) -> BitMatrix:
    """Basis of Z^j = ker delta^j (Z^D = all of C^D)."""
    if j == s.complex.D:
        return BitMatrix.identity(s.level_dim(j))
    return coboundary_matrix(s, j).kernel_basis()


def coboundary_image_basis(s: Sheaf, j: int) -> BitMatrix:
    """Basis of B^j = im delta^{j-1} (B^0 = 0)."""
    if j == 0:
        return BitMatrix.zeros(0, s.level_dim(0))
    d = coboundary_matrix(s, j - 1)
    return d.transpose().row_space_basis()


def cohomology_dim(s: Sheaf, j: int) -> int:
    z = cocycle_basis(s, j).rows
    b = coboundary_image_basis(s, j).rows
    return z - b


def cohomology_reps(s: Sheaf, j: int) -> BitMatrix:
    """Deterministic cocycle representatives of a basis of H^j."""
    z = cocycle_basis(s, j)
    b = coboundary_image_basis(s, j).row_space_basis()
    reps: List[int] = []
    acc = b
    for i in range(z.rows):
        row = z.row(i)
        if not acc.in_row_space(row):
            reps.append(row.value)
            acc = acc.vstack(BitMatrix.from_int_rows([row.value], z.cols))
    return BitMatrix.from_int_rows(reps, z.cols)


def euler_characteristic_spaces(s: Sheaf) -> int:
    return sum(
        (-1) ** j * s.level_dim(j) for j in range(s.complex.D + 1)
    )


def euler_characteristic_cohomology(s: Sheaf) -> int:
    return sum(
        (-1) ** j * cohomology_dim(s, j) for j in range(s.complex.D + 1)
    )


# -- predicates ----------------------------------------------------------------


def check_flasque(s: Sheaf) -> bool:
    """Every one-step restriction F_sigma -> F_tau is surjective."""
    c = s.complex
    for level in range(c.D):
        for face in c.level_faces(level):
            mask, idx = face
            ups = c.up_sets[mask][idx]
            basis = s.basis(face)
            for smask in c.level_masks(level + 1):
                if mask & ~smask:
                    continue
                for sidx in c.cofaces(face, smask):
                    sups = c.up_sets[smask][sidx]
                    spos = [ups.index(t) for t in sups]
                    restricted = []
                    for i in range(basis.rows):
                        w = basis.row_int(i)
                        r = 0
                        for p, srcp in enumerate(spos):
                            if (w >> srcp) & 1:
                                r |= 1 << p
                        restricted.append(r)
                    rm = BitMatrix.from_int_rows(restricted, len(sups))
                    target = s.basis((smask, sidx))
                    if rm.rank() != target.rows:
                        return False
                    for i in range(rm.rows):
                        if not target.in_row_space(rm.row(i)):
                            return False
    return True


def check_locally_acyclic(s: Sheaf) -> bool:
    """H^j(link sheaf) = 0 for 0 < j < D - level - 1, every face.

    Two-dimensional sheaves pass unconditionally."""
    c = s.complex
    if c.D <= 2:
        return True
    for level in range(c.D - 2):
        for face in c.level_faces(level):
            link_sheaf = sheaf_at_link(s, face)
            link_d = link_sheaf.complex.D
            for j in range(1, link_d):
                if cohomology_dim(link_sheaf, j) != 0:
                    return False
    return True


def sheaf_at_link(s: Sheaf, face: FaceId) -> Sheaf:
    """The inherited sheaf on the link of `face`."""
    c = s.complex
    mask, _ = face
    lk = c.link(face)
    ups = c.up_set(face)
    defining: Dict[FaceId, BitMatrix] = {}
    for lmask in lk.level_masks(lk.D - 1):
        src_colors = [lk.original_colors[j] for j in colors_of(lmask)]
        src_mask = mask | mask_of(src_colors)
        for lidx in lk.faces(lmask):
            lups = lk.up_sets[lmask][lidx]
            # link top position i corresponds to complex top ups[i]
            t0 = ups[lups[0]]
            sidx = c.face_in_top(src_mask, t0)
            defining[(lmask, lidx)] = s.basis((src_mask, sidx)).copy()
    return induce_lower_codes(Sheaf(lk, defining))


# -- cup product ----------------------------------------------------------------


def star_sheaf(s1: Sheaf, s2: Sheaf) -> Sheaf:
    """The sheaf whose defining codes are the element-wise products."""
    c = s1.complex
    if s2.complex is not c:
        raise SheafError("cup product needs a shared complex")
    defining: Dict[FaceId, BitMatrix] = {}
    for mask in c.level_masks(c.D - 1):
        for idx in c.faces(mask):
            b1 = s1.basis((mask, idx))
            b2 = s2.basis((mask, idx))
            rows = [
                b1.row_int(i) & b2.row_int(k)
                for i in range(b1.rows)
                for k in range(b2.rows)
            ]
            width = b1.cols
            defining[(mask, idx)] = (
                BitMatrix.from_int_rows(rows, width).row_space_basis()
                if rows
                else BitMatrix.zeros(0, width)
            )
    return induce_lower_codes(Sheaf(c, defining))


def cup_product(
    f1: Cochain,
    f2: Cochain,
    target: Optional[Sheaf] = None,
    order: Optional[Sequence[int]] = None,
) -> Cochain:
    """The sheaf cup product under the color-induced vertex order.

    `order` lists the colors by priority (default ascending).  The result
    lives in the star-product sheaf, passed as `target` to avoid
    rebuilding it per call."""
    s1, s2 = f1.sheaf, f2.sheaf
    c = s1.complex
    if s2.complex is not c:
        raise SheafError("cup product needs a shared complex")
    l1, l2 = f1.level, f2.level
    if l1 + l2 > c.D:
        raise SheafError("cup product level overflow")
    if target is None:
        target = star_sheaf(s1, s2)
    if order is None:
        order = list(range(c.n_colors))
    priority = {color: p for p, color in enumerate(order)}
    level = l1 + l2
    offsets, dim = target.level_offsets(level)
    data = 0
    for face in c.level_faces(level):
        mask, idx = face
        cs = sorted(colors_of(mask), key=lambda col: priority[col])
        front_mask = mask_of(cs[: l1 + 1])
        back_mask = mask_of(cs[l1:])
        ups = c.up_sets[mask][idx]
        t0 = ups[0]
        fface = (front_mask, c.face_in_top(front_mask, t0))
        bface = (back_mask, c.face_in_top(back_mask, t0))
        fups = c.up_set(fface)
        bups = c.up_set(bface)
        fpos = {t: p for p, t in enumerate(fups)}
        bpos = {t: p for p, t in enumerate(bups)}
        v1 = f1.value_at(fface)
        v2 = f2.value_at(bface)
        val = 0
        for p, t in enumerate(ups):
            if ((v1 >> fpos[t]) & 1) and ((v2 >> bpos[t]) & 1):
                val |= 1 << p
        basis = target.basis(face)
        rhs = BitMatrix(basis.cols, 1)
        for p in range(basis.cols):
            if (val >> p) & 1:
                rhs.set_bits(p, [0])
        x = basis.transpose().solve(rhs)
        if x is None:
            raise SheafError("cup product value escapes the star sheaf at %r" % (face,))
        off = offsets[face]
        for i in range(basis.rows):
            if x.get(i, 0):
                data |= 1 << (off + i)
    return Cochain(target, level, BitVector(dim, data))


# -- lifting ---------------------------------------------------------------------


def lift_shrunk_cocycle(s: Sheaf, T: Sequence[int], f: BitVector) -> Cochain:
    """Extend a T-supported shrunk 1-cocycle to a sheaf cocycle g at level
    |T| - 1 with res_T(g) = f, by one global linear solve."""
    level = len(set(T)) - 1
    c = s.complex
    if not 1 <= level <= c.D - 1:
        raise SheafError("invalid shrunk type size")
    delta = coboundary_matrix(s, level)
    res = restrict_to_type(s, level, T)
    dim = s.level_dim(level)
    if f.length != dim:
        raise SheafError("shrunk cocycle length mismatch")
    stacked = delta.vstack(res)
    rhs = BitVector(stacked.rows, f.value << delta.rows)
    g = stacked.solve_vec(rhs)
    if g is None:
        raise SheafError(
            "no sheaf lift exists for the given shrunk cocycle: "
            "this contradicts the extension lemma and indicates a bug"
        )
    return Cochain(s, level, g)


# -- exhaustive projected-product checks --------------------------------------------


def intersecting_face_pairs(c: Complex, m1: int, m2: int):
    """All (face-of-type-m1, face-of-type-m2, union-face) triples with a
    nonempty up-set intersection, found through the top faces."""
    f1 = c.top_to_face[m1]
    f2 = c.top_to_face[m2]
    mu = m1 | m2
    fu = c.top_to_face[mu]
    seen = set()
    for t in range(c.n_top):
        key = (int(f1[t]), int(f2[t]))
        if key in seen:
            continue
        seen.add(key)
        yield (m1, key[0]), (m2, key[1]), (mu, int(fu[t]))


def _local_rows(sheaf: Sheaf, face: FaceId, shared: Sequence[int]) -> List[int]:
    """Basis rows of a face restricted to the given top ids, as ints."""
    ups = sheaf.complex.up_set(face)
    pos = {t: i for i, t in enumerate(ups)}
    basis = sheaf.basis(face)
    out = []
    for i in range(basis.rows):
        w = basis.row_int(i)
        v = 0
        for k, t in enumerate(shared):
            if (w >> pos[t]) & 1:
                v |= 1 << k
        out.append(v)
    return out


def check_pair_products(
    s1: Sheaf,
    s2: Sheaf,
    modulus: int,
    max_union_colors: Optional[int] = None,
) -> dict:
    """For every pair of basis rows (one from each sheaf) on faces whose
    type union spans at most `max_union_colors` colors (default D), check
    that the star product of the projected codewords has weight divisible
    by `modulus`.

    Pairs with disjoint up-sets have star weight zero and are exactly
    covered by the per-type partition; only intersecting pairs are
    enumerated, through the top faces."""
    c = s1.complex
    if s2.complex is not c:
        raise SheafError("pair products need a shared complex")
    limit = c.D if max_union_colors is None else max_union_colors
    checked = 0
    for m1 in c.masks:
        if m1 == c.full_mask:
            continue
        for m2 in c.masks:
            if m2 == c.full_mask:
                continue
            if bin(m1 | m2).count("1") > limit:
                continue
            for fa, fb, funion in intersecting_face_pairs(c, m1, m2):
                shared = c.up_set(funion)
                a_rows = _local_rows(s1, fa, shared)
                b_rows = _local_rows(s2, fb, shared)
                for a in a_rows:
                    for b in b_rows:
                        checked += 1
                        if (a & b).bit_count() % modulus:
                            return {
                                "ok": False,
                                "checked": checked,
                                "witness": (fa, fb),
                            }
    return {"ok": True, "checked": checked}


def check_projected_weights(
    s: Sheaf, modulus: int, levels: Optional[Sequence[int]] = None
) -> dict:
    """Every basis row at the selected levels (default: all below the
    top) has weight divisible by the modulus (projection scatters rows
    injectively, so projected weight = row weight)."""
    checked = 0
    for level in levels if levels is not None else range(s.complex.D):
        for face in s.complex.level_faces(level):
            basis = s.basis(face)
            for w in basis.row_weights():
                checked += 1
                if int(w) % modulus:
                    return {"ok": False, "checked": checked, "witness": face}
    return {"ok": True, "checked": checked}


# -- large-instance link computation ----------------------------------------------


def link_vertex_code_dimension(ring: RingTable, code: LinearCode, iso: VectorIso) -> int:
    """dim F_v for a color-0 vertex of the D = 2 coset complex, computed
    inside the link group K_0 without enumerating the global group.

    Stacks the oriented dual-code constraints of every edge through the
    vertex and returns |v-up-set| minus the constraint rank."""
    from .group import GroupTable  # local import to keep module load light

    if ring.m != 1:
        raise SheafError("link fast path assumes m = 1")
    q = ring.field.q
    if code.n != q:
        raise SheafError("code length %d != q = %d" % (code.n, q))
    table = GroupTable(ring, 2, colors=(1, 2))
    n = table.size
    dual = dual_code(code)
    gen_col = {
        (color, alpha): col for col, (color, alpha, _) in enumerate(table.gens)
    }
    n_rows = 0
    rows_per_coset = dual.k
    # edges through v: cotype-2 cosets (type {0,1}) and cotype-1 ({0,2})
    cosets = []
    for cotype in (2, 1):
        reps = table.coset_reps([jc for jc in range(3) if jc != cotype])
        for rep in sorted(set(int(r) for r in reps)):
            cosets.append((cotype, rep))
    mat = BitMatrix(len(cosets) * rows_per_coset, n)
    row = 0
    for cotype, rep in cosets:
        tops = [0] * q
        for alpha, _eid in table.k_color_elements(cotype):
            top = rep if alpha == 0 else int(table.cayley[rep, gen_col[(cotype, alpha)]])
            tops[iso.apply_int(alpha)] = top
        for i in range(dual.k):
            w = dual.generator.row_int(i)
            cols = [tops[p] for p in range(q) if (w >> p) & 1]
            mat.set_bits(row, cols)
            row += 1
    n_rows = row
    assert n_rows == mat.rows
    return n - mat.rank()


__all__ = [
    "SheafError",
    "Sheaf",
    "Cochain",
    "attach_local_codes",
    "attach_constant_sheaf",
    "attach_explicit",
    "induce_lower_codes",
    "dual_sheaf",
    "coboundary_matrix",
    "projection_matrix",
    "restrict_to_type",
    "cocycle_basis",
    "coboundary_image_basis",
    "cohomology_dim",
    "cohomology_reps",
    "euler_characteristic_spaces",
    "euler_characteristic_cohomology",
    "check_flasque",
    "check_locally_acyclic",
    "sheaf_at_link",
    "star_sheaf",
    "cup_product",
    "lift_shrunk_cocycle",
]
