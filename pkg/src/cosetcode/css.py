"""CSS code extraction from a sheaf: checks, dimensions, rate bounds,
color-tagged logical bases, Darboux reduction, and the unfolding checks
(chain-map squares and shrunk-complex dimension isomorphism).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import colors_of, mask_of
from .gf2 import BitMatrix, BitVector, row_space_equal
from .sheaf import (
    Sheaf,
    cohomology_dim,
    cohomology_reps,
    coboundary_matrix,
    cocycle_basis,
    dual_sheaf,
    projection_matrix,
    restrict_to_type,
)


class CSSError(ValueError):
    """Raised for invalid CSS construction or a broken invariant."""


class CssCode:
    """A CSS code on the top faces: rows of h_x (h_z) are X (Z) check
    supports.  Commutation h_x . h_z^T = 0 is verified on construction."""

    def __init__(
        self,
        h_x: BitMatrix,
        h_z: BitMatrix,
        metadata: Optional[dict] = None,
        check: bool = True,
    ):
        if h_x.cols != h_z.cols:
            raise CSSError("h_x and h_z qubit counts differ")
        self.n = h_x.cols
        self.h_x = h_x
        self.h_z = h_z
        self.metadata = dict(metadata or {})
        if check and not h_x.matmul(h_z.transpose()).is_zero():
            raise CSSError("X and Z checks do not commute")
        self._k: Optional[int] = None

    def code_dimension(self) -> int:
        if self._k is None:
            self._k = self.n - self.h_x.rank() - self.h_z.rank()
        return self._k

    def check_weight_histogram(self) -> Dict[str, Dict[int, int]]:
        out: Dict[str, Dict[int, int]] = {"x": {}, "z": {}}
        for name, m in (("x", self.h_x), ("z", self.h_z)):
            for w in m.row_weights():
                out[name][int(w)] = out[name].get(int(w), 0) + 1
        return out

    def __repr__(self) -> str:
        return "CssCode(n=%d, checks=%d+%d)" % (self.n, self.h_x.rows, self.h_z.rows)


def extract_css(
    s: Sheaf,
    x: int,
    z: int,
    s_dual: Optional[Sheaf] = None,
    metadata: Optional[dict] = None,
) -> Tuple[CssCode, Sheaf]:
    """Stabilizer code with X checks = projected x-level primal basis and
    Z checks = projected z-level dual basis; x + z = D - 2 required."""
    D = s.complex.D
    if x + z != D - 2:
        raise CSSError(
            "x + z = %d but D - 2 = %d: only stabilizer extraction is supported"
            % (x + z, D - 2)
        )
    if s_dual is None:
        s_dual = dual_sheaf(s)
    h_x = projection_matrix(s, x).transpose()
    h_z = projection_matrix(s_dual, z).transpose()
    meta = dict(metadata or {})
    meta.update({"D": D, "x": x, "z": z})
    return CssCode(h_x, h_z, metadata=meta), s_dual


def rate_report(s: Sheaf, exact: bool = True, s_dual: Optional[Sheaf] = None) -> dict:
    """Local rates, the naive two-dimensional rate bound, and (optionally)
    the exact redundancy corrections from global ranks."""
    c = s.complex
    if c.D != 2:
        raise CSSError("rate report is defined for two-dimensional sheaves")
    rho0 = _uniform_local_rate(s, 0)
    rho1 = _uniform_local_rate(s, 1)
    report = {
        "rho0": rho0,
        "rho1": rho1,
        "bound": 6 * rho1 - 6 * rho0 - 2,
    }
    if exact:
        if s_dual is None:
            s_dual = dual_sheaf(s)
        n = Fraction(c.n_top)
        z0 = s.level_dim(0) - coboundary_matrix(s, 0).rank()
        z0_dual = s_dual.level_dim(0) - coboundary_matrix(s_dual, 0).rank()
        rho_m1 = Fraction(z0) / n
        rho_bar_m1 = Fraction(z0_dual) / n
        report["rho_minus1"] = rho_m1
        report["rho_bar_minus1"] = rho_bar_m1
        report["exact_half_rate"] = 3 * rho1 - 3 * rho0 - 1 + rho_m1 + rho_bar_m1
    return report


def _uniform_local_rate(s: Sheaf, level: int) -> Fraction:
    rates = set()
    for face in s.complex.level_faces(level):
        basis = s.basis(face)
        rates.add(Fraction(basis.rows, basis.cols))
    if len(rates) != 1:
        raise CSSError("level-%d local rates are not uniform: %r" % (level, rates))
    return rates.pop()


# -- logical bases ---------------------------------------------------------------


class LogicalBasis:
    """Color-tagged logical representatives on the qubits."""

    def __init__(
        self,
        n: int,
        x_logicals: List[Tuple[Tuple[int, ...], BitVector]],
        z_logicals: List[Tuple[Tuple[int, ...], BitVector]],
    ):
        self.n = n
        self.x_logicals = x_logicals
        self.z_logicals = z_logicals

    def pairing(self) -> BitMatrix:
        """Overlap-parity matrix: entry (i, j) = |X_i & Z_j| mod 2."""
        out = BitMatrix(len(self.x_logicals), len(self.z_logicals))
        for i, (_, xv) in enumerate(self.x_logicals):
            for j, (_, zv) in enumerate(self.z_logicals):
                if (xv.value & zv.value).bit_count() & 1:
                    out.set_bits(i, [j])
        return out


def color_types_through_zero(D: int, size: int) -> List[Tuple[int, ...]]:
    """All color sets of the given size containing color 0, sorted."""
    rest = itertools.combinations(range(1, D + 1), size - 1)
    return [tuple([0] + list(r)) for r in rest]


def logical_basis(
    code: CssCode,
    s: Sheaf,
    s_dual: Sheaf,
    x: int,
    z: int,
) -> LogicalBasis:
    """Projected type-restricted cohomology representatives, one family per
    color type T with 0 in T; independence modulo the checks is verified."""
    xl = _tagged_logicals(s, x, code.h_z)
    zl = _tagged_logicals(s_dual, z, code.h_x)
    lb = LogicalBasis(code.n, xl, zl)
    for name, rows, checks in (
        ("X", xl, code.h_x),
        ("Z", zl, code.h_z),
    ):
        if rows:
            log_m = BitMatrix.from_int_rows([v.value for _, v in rows], code.n)
            if checks.vstack(log_m).rank() != checks.rank() + len(rows):
                raise CSSError("%s logicals are dependent modulo the checks" % name)
    return lb


def _tagged_logicals(
    s: Sheaf, level: int, other_checks: BitMatrix
) -> List[Tuple[Tuple[int, ...], BitVector]]:
    D = s.complex.D
    reps = cohomology_reps(s, level + 1)
    pi = projection_matrix(s, level + 1)
    out: List[Tuple[Tuple[int, ...], BitVector]] = []
    for T in color_types_through_zero(D, level + 2):
        res = restrict_to_type(s, level + 1, T)
        for i in range(reps.rows):
            restricted = res.matvec(reps.row(i))
            v = pi.matvec(restricted)
            if other_checks.matvec(v).value != 0:
                raise CSSError(
                    "logical candidate for T=%r anticommutes with a check" % (T,)
                )
            out.append((T, v))
    return out


def darboux_basis(lb: LogicalBasis) -> LogicalBasis:
    """Replace the Z side by combinations making the pairing the identity.

    The pairing matrix must be invertible; combinations never mix color
    tags when the same-tag pairing blocks vanish (verified)."""
    k2 = len(lb.x_logicals)
    if k2 != len(lb.z_logicals) or k2 == 0:
        raise CSSError("need equally many X and Z logicals")
    p = lb.pairing()
    a = p.solve(BitMatrix.identity(k2))
    if a is None:
        raise CSSError("degenerate logical pairing: rank %d of %d" % (p.rank(), k2))
    # new Z_j = sum_m A^T[j, m] old Z_m gives <X_i, Z'_j> = delta_ij
    at = a.transpose()
    new_z: List[Tuple[Tuple[int, ...], BitVector]] = []
    for j in range(k2):
        tag = None
        acc = 0
        for m in range(k2):
            if at.get(j, m):
                old_tag, zv = lb.z_logicals[m]
                acc ^= zv.value
                if tag is None:
                    tag = old_tag
                elif tag != old_tag:
                    raise CSSError("Darboux reduction would mix color tags")
        if tag is None:
            raise CSSError("empty Z combination in Darboux reduction")
        new_z.append((tag, BitVector(lb.n, acc)))
    out = LogicalBasis(lb.n, list(lb.x_logicals), new_z)
    if out.pairing() != BitMatrix.identity(k2):
        raise CSSError("Darboux reduction failed to reach the identity pairing")
    return out


def symplectic_color_basis(
    code: CssCode, lb: LogicalBasis
) -> Tuple[List[BitVector], List[BitVector]]:
    """For a self-dual code, reduce the X logical supports to a symplectic
    basis (red_i, blue_j) with |red_i & blue_j| = delta_ij, never adding
    across the two color tags.

    The same support vectors then serve as X and Z logical representatives
    (self-duality makes every X-logical support a valid Z logical), giving
    the standard basis X~_j = X(red_j) / X(blue_{j-k}) and
    Z~_j = Z(blue_j) / Z(red_{j-k})."""
    if not row_space_equal(code.h_x, code.h_z):
        raise CSSError("symplectic color basis requires a self-dual code")
    tags = sorted({t for t, _ in lb.x_logicals})
    if len(tags) != 2:
        raise CSSError("self-dual symplectic basis needs exactly two color tags")
    red = [v.value for t, v in lb.x_logicals if t == tags[0]]
    blue = [v.value for t, v in lb.x_logicals if t == tags[1]]
    k = len(red)
    if len(blue) != k:
        raise CSSError("color classes have unequal sizes")

    def w(a: int, b: int) -> int:
        return (a & b).bit_count() & 1

    for a in red:
        for b in red:
            if w(a, b):
                raise CSSError("same-color logical supports overlap oddly")
    for a in blue:
        for b in blue:
            if w(a, b):
                raise CSSError("same-color logical supports overlap oddly")
    for i in range(k):
        j = next((jj for jj in range(i, k) if w(red[i], blue[jj])), None)
        if j is None:
            raise CSSError("degenerate cross-color pairing at index %d" % i)
        blue[i], blue[j] = blue[j], blue[i]
        for r in range(i + 1, k):
            if w(red[r], blue[i]):
                red[r] ^= red[i]
        for b in range(i + 1, k):
            if w(red[i], blue[b]):
                blue[b] ^= blue[i]
    for i in range(k):
        for j in range(k):
            if w(red[i], blue[j]) != (1 if i == j else 0):
                raise CSSError("symplectic reduction failed")
    n = code.n
    return (
        [BitVector(n, v) for v in red],
        [BitVector(n, v) for v in blue],
    )


# -- unfolding and chain-map squares ---------------------------------------------


def type_coords(s: Sheaf, j: int, T: Sequence[int]) -> List[int]:
    """Global C^j coordinate indices of faces with type contained in T."""
    t_mask = mask_of(T)
    offsets, _ = s.level_offsets(j)
    out: List[int] = []
    for face in s.complex.level_faces(j):
        if face[0] & ~t_mask:
            continue
        off = offsets[face]
        out.extend(range(off, off + s.dim(face)))
    return out


def chain_map_squares(
    s: Sheaf, s_dual: Sheaf, x: int, z: int, T: Sequence[int]
) -> Dict[str, bool]:
    """The four commuting-square identities relating the sheaf complex to
    the T-shrunk three-term complex, as exact matrix equations."""
    c = s.complex
    t_c = [j for j in range(c.n_colors) if j not in set(T)]
    delta_x = coboundary_matrix(s, x)
    r_x = restrict_to_type(s, x, T)
    r_x1 = restrict_to_type(s, x + 1, T)
    pi_x = projection_matrix(s, x)
    pi_x1 = projection_matrix(s, x + 1)
    pid_z = projection_matrix(s_dual, z)
    rbar = restrict_to_type(s_dual, z, t_c)

    report: Dict[str, bool] = {}
    # restriction commutes with the shrunk coboundary
    lhs = r_x1.matmul(delta_x)
    report["bottom_left"] = lhs == r_x1.matmul(delta_x).matmul(r_x)
    # projections of a T-cochain agree across one shrunk step
    report["top_left"] = pi_x.matmul(r_x) == pi_x1.matmul(r_x1).matmul(
        delta_x
    ).matmul(r_x)
    # the dual pairing of a T-cochain is supported on T-complement faces
    q = pid_z.transpose().matmul(pi_x)
    report["top_right"] = q.matmul(r_x) == rbar.matmul(q).matmul(r_x)
    # the shrunk top map annihilates global cocycles
    psi = rbar.matmul(pid_z.transpose()).matmul(pi_x1).matmul(r_x1)
    zbasis = cocycle_basis(s, x + 1)
    report["bottom_right"] = psi.matmul(zbasis.transpose()).is_zero()
    return report


def shrunk_cohomology_dim(
    s: Sheaf, s_dual: Sheaf, x: int, z: int, T: Sequence[int]
) -> int:
    """dim H^1 of the T-shrunk three-term complex, in T-supported
    coordinates."""
    c = s.complex
    t_c = [j for j in range(c.n_colors) if j not in set(T)]
    src = type_coords(s, x, T)
    mid = type_coords(s, x + 1, T)
    dst = type_coords(s_dual, z, t_c)
    a = coboundary_matrix(s, x).take_cols(src).take_rows(mid)
    psi_full = (
        projection_matrix(s_dual, z).transpose().matmul(projection_matrix(s, x + 1))
    )
    b = psi_full.take_rows(dst).take_cols(mid)
    return (len(mid) - b.rank()) - a.rank()


def unfolding_check(
    code: CssCode,
    s: Sheaf,
    s_dual: Sheaf,
    x: int,
    z: int,
    squares: bool = True,
) -> dict:
    """k = C(D, x+1) * dim H^{x+1}, the chain-map squares, and the per-type
    shrunk dimension isomorphism."""
    D = s.complex.D
    k = code.code_dimension()
    h_dim = cohomology_dim(s, x + 1)
    expected = math.comb(D, x + 1) * h_dim
    report = {
        "k": k,
        "cohomology_dim": h_dim,
        "expected_k": expected,
        "dimension_formula": k == expected,
    }
    types = [
        tuple(t)
        for t in itertools.combinations(range(D + 1), x + 2)
    ]
    shrunk = {}
    for T in types:
        shrunk[T] = shrunk_cohomology_dim(s, s_dual, x, z, T)
    report["shrunk_dims"] = shrunk
    report["shrunk_iso"] = all(v == h_dim for v in shrunk.values())
    if squares:
        sq = {
            T: chain_map_squares(s, s_dual, x, z, T)
            for T in color_types_through_zero(D, x + 2)
        }
        report["squares"] = sq
        report["squares_ok"] = all(all(r.values()) for r in sq.values())
    report["ok"] = report["dimension_formula"] and report["shrunk_iso"] and (
        not squares or report["squares_ok"]
    )
    return report


def redundancy_report(s: Sheaf, s_dual: Optional[Sheaf] = None) -> dict:
    """Counts dim Z^0 on both sides and cross-checks it against the
    alternating-sum identity dim H^0 = chi - sum of higher cohomology."""
    D = s.complex.D
    if s_dual is None:
        s_dual = dual_sheaf(s)
    out = {}
    for name, sh in (("primal", s), ("dual", s_dual)):
        z0 = sh.level_dim(0) - coboundary_matrix(sh, 0).rank()
        chi = sum((-1) ** j * sh.level_dim(j) for j in range(D + 1))
        higher = sum((-1) ** j * cohomology_dim(sh, j) for j in range(1, D + 1))
        out[name] = {
            "z0": z0,
            "euler_consistent": z0 == chi - higher,
        }
    return out


__all__ = [
    "CSSError",
    "CssCode",
    "extract_css",
    "rate_report",
    "LogicalBasis",
    "color_types_through_zero",
    "logical_basis",
    "darboux_basis",
    "symplectic_color_basis",
    "type_coords",
    "chain_map_squares",
    "shrunk_cohomology_dim",
    "unfolding_check",
    "redundancy_report",
]
