"""Colored simplicial complexes: coset complexes and explicit fixtures.

Faces are stored per type mask (bit j of the mask = color j present).
A face is identified by (type_mask, index); its up-set is the sorted
tuple of top-face ids containing it.  For every type the faces of that
type partition the top faces, which is what makes `top_to_face` a
well-defined lookup.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .group import GroupError, GroupTable


class ComplexError(ValueError):
    """Raised for malformed complexes or unknown faces."""


FaceId = Tuple[int, int]  # (type_mask, index within type)


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def colors_of(mask: int) -> List[int]:
    return [j for j in range(mask.bit_length()) if (mask >> j) & 1]


class Complex:
    """A pure (D+1)-colorable D-dimensional complex, faces indexed by type."""

    def __init__(
        self,
        D: int,
        n_top: int,
        up_sets: Dict[int, List[Tuple[int, ...]]],
        keys: Optional[Dict[int, List]] = None,
        group: Optional[GroupTable] = None,
        original_colors: Optional[Sequence[int]] = None,
    ):
        self.D = D
        self.n_colors = D + 1
        self.n_top = n_top
        self.full_mask = (1 << self.n_colors) - 1
        self.masks = [m for m in range(1, 1 << self.n_colors)]
        self.up_sets = up_sets
        self.keys = keys or {m: list(range(len(up_sets[m]))) for m in self.masks}
        self.group = group
        self.original_colors = (
            tuple(original_colors) if original_colors is not None else tuple(range(self.n_colors))
        )
        # top_to_face[mask][top] = face index of the unique type-mask face in top
        self.top_to_face: Dict[int, np.ndarray] = {}
        for m in self.masks:
            lookup = np.full(n_top, -1, dtype=np.int64)
            for idx, ups in enumerate(up_sets[m]):
                for t in ups:
                    if lookup[t] != -1:
                        raise ComplexError(
                            "type %d faces do not partition the top faces" % m
                        )
                    lookup[t] = idx
            self.top_to_face[m] = lookup

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_top_faces(
        cls,
        D: int,
        tops: Sequence[Sequence],
        original_colors: Optional[Sequence[int]] = None,
    ) -> "Complex":
        """Build from explicit top faces; tops[t][c] is the label of the
        color-c vertex of top face t."""
        n_colors = D + 1
        for t, vs in enumerate(tops):
            if len(vs) != n_colors:
                raise ComplexError("top face %d has %d vertices, need %d" % (t, len(vs), n_colors))
        up_sets: Dict[int, List[Tuple[int, ...]]] = {}
        keys: Dict[int, List] = {}
        for m in range(1, 1 << n_colors):
            cs = colors_of(m)
            bucket: Dict[Tuple, List[int]] = {}
            for t, vs in enumerate(tops):
                key = tuple(vs[c] for c in cs)
                bucket.setdefault(key, []).append(t)
            items = sorted(bucket.items(), key=lambda kv: kv[0])
            keys[m] = [k for k, _ in items]
            up_sets[m] = [tuple(sorted(v)) for _, v in items]
        return cls(D, len(tops), up_sets, keys=keys, original_colors=original_colors)

    # -- queries -------------------------------------------------------------

    def faces(self, mask: int) -> range:
        return range(len(self.up_sets[mask]))

    def n_faces(self, mask: int) -> int:
        return len(self.up_sets[mask])

    def level_masks(self, level: int) -> List[int]:
        """Type masks of dimension-`level` faces, ascending."""
        return [m for m in self.masks if bin(m).count("1") == level + 1]

    def level_faces(self, level: int) -> List[FaceId]:
        out = []
        for m in self.level_masks(level):
            out.extend((m, i) for i in self.faces(m))
        return out

    def up_set(self, face: FaceId) -> Tuple[int, ...]:
        mask, idx = face
        try:
            return self.up_sets[mask][idx]
        except (KeyError, IndexError):
            raise ComplexError("unknown face %r" % (face,))

    def face_in_top(self, mask: int, top: int) -> int:
        return int(self.top_to_face[mask][top])

    def contains(self, small: FaceId, big: FaceId) -> bool:
        """True iff the face `small` is a subface of `big`."""
        sm, si = small
        bm, bi = big
        if sm & ~bm:
            return False
        any_top = self.up_sets[bm][bi][0]
        return self.face_in_top(sm, any_top) == si

    def cofaces(self, face: FaceId, super_mask: int) -> List[int]:
        """Indices of type-`super_mask` faces containing `face`."""
        mask, _ = face
        if mask & ~super_mask:
            return []
        lookup = self.top_to_face[super_mask]
        return sorted({int(lookup[t]) for t in self.up_set(face)})

    def vertex_labels_of_top(self, top: int) -> List[int]:
        """Per color, the vertex face index of a top face."""
        return [self.face_in_top(1 << c, top) for c in range(self.n_colors)]

    # -- link ------------------------------------------------------------------

    def link(self, face: FaceId) -> "Complex":
        """The link: faces containing `face`, with `face` removed.

        Colors are renumbered 0..(link dimension); `original_colors`
        records the source colors in order."""
        mask, _ = face
        rest = [c for c in range(self.n_colors) if not (mask >> c) & 1]
        if not rest:
            return _empty_complex()
        tops = []
        for t in self.up_set(face):
            tops.append([self.face_in_top(1 << c, t) for c in rest])
        return Complex.from_top_faces(len(rest) - 1, tops, original_colors=rest)

    # -- serialization -----------------------------------------------------------

    def serialize(self) -> str:
        lines = ["%d %d" % (self.D, self.n_top)]
        for m in self.masks:
            for idx, ups in enumerate(self.up_sets[m]):
                lines.append("%d %d %s" % (m, idx, ",".join(str(t) for t in ups)))
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "Complex":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        D, n_top = (int(x) for x in lines[0].split())
        up_sets: Dict[int, List[Tuple[int, ...]]] = {m: [] for m in range(1, 1 << (D + 1))}
        for ln in lines[1:]:
            mask_s, idx_s, ups_s = ln.split()
            mask, idx = int(mask_s), int(idx_s)
            if idx != len(up_sets[mask]):
                raise ComplexError("face indices out of order in serialization")
            up_sets[mask].append(tuple(int(t) for t in ups_s.split(",")))
        return cls(D, n_top, up_sets)


def _empty_complex() -> Complex:
    c = object.__new__(Complex)
    c.D = -1
    c.n_colors = 0
    c.n_top = 0
    c.full_mask = 0
    c.masks = []
    c.up_sets = {}
    c.keys = {}
    c.group = None
    c.original_colors = ()
    c.top_to_face = {}
    return c


def build_coset_complex(table: GroupTable) -> Complex:
    """Faces of type T are the cosets g*K_T; top faces are the elements."""
    if table.colors != tuple(range(table.D + 1)):
        raise GroupError("coset complex needs all generator colors enumerated")
    D = table.D
    up_sets: Dict[int, List[Tuple[int, ...]]] = {}
    keys: Dict[int, List] = {}
    for mask in range(1, 1 << (D + 1)):
        T = colors_of(mask)
        if mask == (1 << (D + 1)) - 1:
            # K_full = {Id}: one top face per element
            up_sets[mask] = [(g,) for g in range(table.size)]
            keys[mask] = list(range(table.size))
            continue
        reps = table.coset_reps(T)
        order = np.argsort(reps, kind="stable")
        faces: List[Tuple[int, ...]] = []
        face_keys: List[int] = []
        members: List[int] = []
        current = -1
        for g in order:
            r = int(reps[g])
            if r != current:
                if members:
                    faces.append(tuple(sorted(members)))
                members = []
                current = r
                face_keys.append(r)
            members.append(int(g))
        if members:
            faces.append(tuple(sorted(members)))
        up_sets[mask] = faces
        keys[mask] = face_keys
    return Complex(D, table.size, up_sets, keys=keys, group=table)


def type_cycle_face_map(c: Complex) -> Dict[int, np.ndarray]:
    """For a coset complex, the face permutation induced by the
    type-cycling automorphism: per mask, image face index array.

    The image of a type-T face is a type-(T+1) face whose up-set is the
    pointwise image of the original up-set."""
    if c.group is None:
        raise ComplexError("type cycling needs a coset complex")
    perm = c.group.type_cycle_perm()
    out: Dict[int, np.ndarray] = {}
    n = c.n_colors
    full = c.full_mask
    for mask in c.masks:
        shifted = ((mask << 1) | (mask >> (n - 1))) & full
        images = np.empty(c.n_faces(mask), dtype=np.int64)
        for idx in range(c.n_faces(mask)):
            t0 = c.up_sets[mask][idx][0]
            images[idx] = c.face_in_top(shifted, int(perm[t0]))
            # well-defined: check one more member on small complexes is done
            # in verify-level tests, not here
        out[mask] = images
    return out


def verify_structure(
    c: Complex,
    sample_pairs: int = 200,
    seed: int = 20240811,
    exhaustive_top_cap: int = 100_000,
) -> Dict[str, Tuple[bool, str]]:
    """Structural report: purity, colorability/partition, the up-set
    intersection law, and (small coset complexes) transitivity."""
    report: Dict[str, Tuple[bool, str]] = {}

    # purity: every face lies in at least one top face
    empty = [
        (m, i)
        for m in c.masks
        for i in c.faces(m)
        if not c.up_sets[m][i]
    ]
    report["purity"] = (not empty, "%d faces with empty up-set" % len(empty))

    # disjoint union: faces of each type partition the top faces
    bad_types = []
    for m in c.masks:
        total = sum(len(u) for u in c.up_sets[m])
        covered = int((c.top_to_face[m] >= 0).sum())
        if total != c.n_top or covered != c.n_top:
            bad_types.append(m)
    report["disjoint_union"] = (
        not bad_types,
        "failing type masks: %r" % bad_types if bad_types else "all types partition",
    )

    # colorability: |T(face)| vertices per face, one per color, is implied by
    # the per-type partition plus containment coherence of vertices
    color_ok = True
    detail = "vertex lookups coherent"
    for m in c.masks:
        for i in c.faces(m):
            ups = c.up_sets[m][i]
            for color in colors_of(m):
                vs = {c.face_in_top(1 << color, t) for t in ups}
                if len(vs) != 1:
                    color_ok = False
                    detail = "face (%d,%d) spans %d color-%d vertices" % (m, i, len(vs), color)
                    break
            if not color_ok:
                break
        if not color_ok:
            break
    report["colorability"] = (color_ok, detail)

    # intersection law: up-sets of two faces meet in the up-set of their
    # union-face, or not at all.  Exhaustive over all intersecting pairs:
    # the pair of faces through a top determines its union-type face, so
    # the law is equivalent to "(f1[t], f2[t]) determines fu[t]" per top.
    # Disjoint pairs satisfy the law vacuously.
    inter_ok = True
    inter_detail = "exhaustive over all intersecting pairs via top faces"
    for m1 in c.masks:
        for m2 in c.masks:
            mu = m1 | m2
            f1 = c.top_to_face[m1]
            f2 = c.top_to_face[m2]
            fu = c.top_to_face[mu]
            key = f1.astype(np.int64) * (max(len(c.up_sets[m2]), 1) + 1) + f2
            both = np.unique(key * (c.n_top + 1) + fu)
            # the pair and the union face must determine each other on tops
            if len(both) != len(np.unique(key)) or len(both) != len(np.unique(fu)):
                inter_ok = False
                inter_detail = "type masks %d, %d: a face pair spans two union faces" % (
                    m1,
                    m2,
                )
                break
        if not inter_ok:
            break
    report["intersection"] = (inter_ok, inter_detail)

    # transitivity condition (coset complexes, small): K_T K_j = the
    # intersection of the K_i K_j over i in T
    if c.group is not None and c.group.size <= 100_000:
        table = c.group
        ok = True
        detail = "exhaustive"
        for mask in c.masks:
            T = colors_of(mask)
            if len(T) < 2:
                continue
            for j in range(c.n_colors):
                if (mask >> j) & 1:
                    continue
                kj = table.enumerate_subgroup([j])
                kt = table.enumerate_subgroup(T)
                prod = {table.mul_ids(a, b) for a in kt for b in kj}
                inter = None
                for i in T:
                    ki = table.enumerate_subgroup([i])
                    s = {table.mul_ids(a, b) for a in ki for b in kj}
                    inter = s if inter is None else (inter & s)
                if prod != inter:
                    ok = False
                    detail = "T=%r j=%d" % (T, j)
                    break
            if not ok:
                break
        report["transitivity"] = (ok, detail)

    return report


def corrupt_complex(c: Complex, mask: Optional[int] = None) -> Complex:
    """Negative control: drop one top id from one face's up-set so the
    per-type partition fails."""
    masks = [m for m in c.masks if m != c.full_mask and c.n_faces(m) > 0]
    m = mask if mask is not None else masks[0]
    ups = {k: [list(u) for u in v] for k, v in c.up_sets.items()}
    victim = ups[m][0]
    if len(victim) < 2:
        raise ComplexError("cannot corrupt a singleton up-set")
    victim.pop()
    bad = object.__new__(Complex)
    bad.D = c.D
    bad.n_colors = c.n_colors
    bad.n_top = c.n_top
    bad.full_mask = c.full_mask
    bad.masks = list(c.masks)
    bad.up_sets = {k: [tuple(u) for u in v] for k, v in ups.items()}
    bad.keys = c.keys
    bad.group = None
    bad.original_colors = c.original_colors
    bad.top_to_face = {}
    for mm in bad.masks:
        lookup = np.full(bad.n_top, -1, dtype=np.int64)
        for idx, u in enumerate(bad.up_sets[mm]):
            for t in u:
                lookup[t] = idx
        bad.top_to_face[mm] = lookup
    return bad


__all__ = [
    "ComplexError",
    "FaceId",
    "mask_of",
    "colors_of",
    "Complex",
    "build_coset_complex",
    "type_cycle_face_map",
    "verify_structure",
    "corrupt_complex",
]
