"""Pauli/stabilizer machinery: phase-exact conjugation by the diagonal
and fold-type Clifford gates, group membership with signs, orbit CZ
circuits, and the divisibility conditions for diagonal non-Clifford
gates (which are never simulated, only certified arithmetically).

A Pauli is i^p * X(x) * Z(z) with the X block written first; p is mod 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import BitMatrix, BitVector
from .local_codes import LinearCode, divisibility_level, is_multi_orthogonal


class GateError(ValueError):
    """Raised for malformed gates or broken circuit invariants."""


DEFAULT_TABLEAU_CAP = 1 << 14


@dataclass(frozen=True)
class Pauli:
    n: int
    p: int  # phase exponent of i, mod 4
    x: int  # X-block support bitset
    z: int  # Z-block support bitset

    def __post_init__(self):
        object.__setattr__(self, "p", self.p % 4)
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise GateError("support out of range")

    @classmethod
    def x_op(cls, n: int, support: int) -> "Pauli":
        return cls(n, 0, support, 0)

    @classmethod
    def z_op(cls, n: int, support: int) -> "Pauli":
        return cls(n, 0, 0, support)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def commutes(self, other: "Pauli") -> bool:
        return (
            (self.x & other.z).bit_count() + (self.z & other.x).bit_count()
        ) % 2 == 0


def pauli_mul(a: Pauli, b: Pauli) -> Pauli:
    """Product in the canonical X-then-Z form with exact phase."""
    if a.n != b.n:
        raise GateError("pauli size mismatch")
    phase = a.p + b.p + 2 * (a.z & b.x).bit_count()
    return Pauli(a.n, phase, a.x ^ b.x, a.z ^ b.z)


def pauli_inverse(a: Pauli) -> Pauli:
    # a^2 = i^{2p} (-1)^{|x&z|} I, so the inverse flips p and adds 2|x&z|
    return Pauli(a.n, -a.p - 2 * (a.x & a.z).bit_count(), a.x, a.z)


# -- conjugation by Clifford gates (P -> U P U^dagger) -----------------------------


def apply_z(p: Pauli, mask: int) -> Pauli:
    return Pauli(p.n, p.p + 2 * (p.x & mask).bit_count(), p.x, p.z)


def apply_x(p: Pauli, mask: int) -> Pauli:
    return Pauli(p.n, p.p + 2 * (p.z & mask).bit_count(), p.x, p.z)


def apply_s(p: Pauli, mask: int) -> Pauli:
    """S: X -> Y on each masked qubit."""
    hit = p.x & mask
    return Pauli(p.n, p.p + hit.bit_count(), p.x, p.z ^ hit)


def apply_h(p: Pauli, mask: int) -> Pauli:
    """H: X <-> Z, Y -> -Y on each masked qubit."""
    xm, zm = p.x & mask, p.z & mask
    phase = p.p + 2 * (xm & zm).bit_count()
    return Pauli(p.n, phase, p.x ^ xm ^ zm, p.z ^ zm ^ xm)


def apply_cz_pairs(p: Pauli, pairs: Sequence[Tuple[int, int]]) -> Pauli:
    """CZ on each (a, b): X_a -> X_a Z_b, X_b -> X_b Z_a."""
    phase = p.p
    z = p.z
    for a, b in pairs:
        xa = (p.x >> a) & 1
        xb = (p.x >> b) & 1
        if xb:
            z ^= 1 << a
        if xa:
            z ^= 1 << b
        if xa and xb:
            phase += 2
    return Pauli(p.n, phase, p.x, z)


def apply_permutation(p: Pauli, perm: Sequence[int]) -> Pauli:
    """Relabel qubits: qubit i moves to perm[i]."""
    x2 = 0
    z2 = 0
    for i in range(p.n):
        if (p.x >> i) & 1:
            x2 |= 1 << perm[i]
        if (p.z >> i) & 1:
            z2 |= 1 << perm[i]
    return Pauli(p.n, p.p, x2, z2)


def apply_gamma(p: Pauli, mask: int) -> Pauli:
    """The order-3 single-qubit Clifford X -> -Y, Y -> Z, Z -> -X,
    applied on each masked qubit."""
    a = p.x & mask
    b = p.z & mask
    onlyx = a & ~b
    onlyz = b & ~a
    both = a & b
    phase = p.p + 3 * onlyx.bit_count() + 2 * onlyz.bit_count() + 3 * both.bit_count()
    new_x = (p.x & ~mask) | onlyx | onlyz
    new_z = (p.z & ~mask) | onlyx | both
    return Pauli(p.n, phase, new_x, new_z)


def conjugate_by_images(
    p: Pauli,
    support: Sequence[int],
    img_x: Dict[int, Pauli],
    img_z: Dict[int, Pauli],
) -> Pauli:
    """Conjugate by a Clifford given through its X_j / Z_j images on a
    qubit subset; the off-support factor passes through unchanged."""
    sup_mask = 0
    for qb in support:
        sup_mask |= 1 << qb
    out = Pauli(p.n, p.p, p.x & ~sup_mask, p.z & ~sup_mask)
    for qb in support:
        if (p.x >> qb) & 1:
            out = pauli_mul(out, img_x[qb])
    for qb in support:
        if (p.z >> qb) & 1:
            out = pauli_mul(out, img_z[qb])
    return out


def apply_upsilon(p: Pauli, triple: Tuple[int, int, int]) -> Pauli:
    """The three-qubit Clifford with X1 -> Y1 X2 X3, Z1 -> X1 Z2 Z3,
    covariant under cyclic shift of the triple."""
    q1, q2, q3 = triple
    if len({q1, q2, q3}) != 3:
        raise GateError("triple must be three distinct qubits")
    n = p.n
    img_x: Dict[int, Pauli] = {}
    img_z: Dict[int, Pauli] = {}
    order = (q1, q2, q3)
    for i, qa in enumerate(order):
        qb = order[(i + 1) % 3]
        qc = order[(i + 2) % 3]
        img_x[qa] = Pauli(n, 1, (1 << qa) | (1 << qb) | (1 << qc), 1 << qa)
        img_z[qa] = Pauli(n, 0, 1 << qa, (1 << qb) | (1 << qc))
    return conjugate_by_images(p, list(order), img_x, img_z)


# -- circuits ---------------------------------------------------------------------


@dataclass
class Gate:
    name: str  # Z | S | H | CZ | GAMMA | UPSILON | PERM
    qubits: Tuple[int, ...]
    perm: Optional[Tuple[int, ...]] = None


class Circuit:
    """Layered circuit; within one layer all gate supports are disjoint."""

    def __init__(self, n: int, layers: Optional[List[List[Gate]]] = None):
        self.n = n
        self.layers: List[List[Gate]] = layers or []
        for layer in self.layers:
            _check_layer_disjoint(layer)

    def add_layer(self, gates: List[Gate]) -> None:
        _check_layer_disjoint(gates)
        self.layers.append(gates)

    def depth(self) -> int:
        return len(self.layers)

    def conjugate(self, p: Pauli) -> Pauli:
        for layer in self.layers:
            for g in layer:
                p = _apply_gate(p, g)
        return p

    def netlist(self) -> str:
        lines = []
        for layer in self.layers:
            for g in layer:
                lines.append("%s %s" % (g.name, " ".join(str(q) for q in g.qubits)))
        return "\n".join(lines) + ("\n" if lines else "")


def _check_layer_disjoint(gates: List[Gate]) -> None:
    seen: set = set()
    for g in gates:
        if g.name == "PERM":
            continue
        for q in g.qubits:
            if q in seen:
                raise GateError("layer gates overlap on qubit %d" % q)
            seen.add(q)


def _apply_gate(p: Pauli, g: Gate) -> Pauli:
    if g.name == "Z":
        return apply_z(p, _mask(g.qubits))
    if g.name == "S":
        return apply_s(p, _mask(g.qubits))
    if g.name == "H":
        return apply_h(p, _mask(g.qubits))
    if g.name == "CZ":
        return apply_cz_pairs(p, [(g.qubits[0], g.qubits[1])])
    if g.name == "GAMMA":
        return apply_gamma(p, _mask(g.qubits))
    if g.name == "UPSILON":
        return apply_upsilon(p, (g.qubits[0], g.qubits[1], g.qubits[2]))
    if g.name == "PERM":
        return apply_permutation(p, g.perm)
    raise GateError("unknown gate %r" % g.name)


def _mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


# -- stabilizer group membership ---------------------------------------------------


def membership_phase(p: Pauli, generators: Sequence[Pauli]) -> Optional[int]:
    """If (x|z) of p lies in the generator span, the phase mod 4 by which
    p differs from the reconstructing product; None otherwise.

    0 means exact membership; 2 means -p is in the group."""
    n = p.n
    if not generators:
        return 0 if (p.x == 0 and p.z == 0) else None
    rows = [g.x | (g.z << n) for g in generators]
    mat = BitMatrix.from_int_rows(rows, 2 * n).transpose()
    target = BitVector(2 * n, p.x | (p.z << n))
    combo = mat.solve_vec(target)
    if combo is None:
        return None
    prod = Pauli(n, 0, 0, 0)
    for i in combo.support():
        prod = pauli_mul(prod, generators[i])
    assert prod.x == p.x and prod.z == p.z
    return (p.p - prod.p) % 4


def in_group_with_sign(p: Pauli, generators: Sequence[Pauli]) -> bool:
    return membership_phase(p, generators) == 0


# -- orbit circuits -----------------------------------------------------------------


def perm_orbits(perm: Sequence[int]) -> List[List[int]]:
    """Cycles of a permutation, each starting at its minimum element."""
    n = len(perm)
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        cur = perm[start]
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            cur = perm[cur]
        orbits.append(cyc)
    return orbits


def orbit_cz_circuit(perm: Sequence[int]) -> Circuit:
    """CZ between every unordered pair {i, perm(i)} in at most three
    disjoint layers; fixed points contribute a single-qubit Z."""
    n = len(perm)
    orbits = perm_orbits(perm)
    if all(len(o) == 1 for o in orbits):
        raise GateError("identity permutation gives no orbit gate")
    layer1: List[Gate] = []
    layer2: List[Gate] = []
    layer3: List[Gate] = []
    z_qubits: List[int] = []
    for orb in orbits:
        r = len(orb)
        if r == 1:
            z_qubits.append(orb[0])
            continue
        if r == 2:
            layer1.append(Gate("CZ", (orb[0], orb[1])))
            continue
        for j in range(0, r - 1, 2):
            layer1.append(Gate("CZ", (orb[j], orb[j + 1])))
        for j in range(1, r - 1, 2):
            layer2.append(Gate("CZ", (orb[j], orb[j + 1])))
        if r % 2 == 0:
            layer2.append(Gate("CZ", (orb[r - 1], orb[0])))
        else:
            layer3.append(Gate("CZ", (orb[r - 1], orb[0])))
    if z_qubits:
        layer1.append(Gate("Z", tuple(z_qubits)))
    circ = Circuit(n)
    for layer in (layer1, layer2, layer3):
        if layer:
            circ.add_layer(layer)
    return circ


def cycle_phase_circuit(perm: Sequence[int]) -> Circuit:
    """For an order-3 permutation: Z on fixed points and the CZ triangle
    on every 3-orbit (the diagonal fold gate of the type cycle)."""
    _require_order3(perm)
    return orbit_cz_circuit(perm)


def cycle_clifford_circuit(perm: Sequence[int]) -> Circuit:
    """For an order-3 permutation: the single-qubit order-3 Clifford on
    fixed points and the three-qubit covariant Clifford on 3-orbits,
    followed by the qubit permutation itself."""
    _require_order3(perm)
    n = len(perm)
    layer: List[Gate] = []
    for orb in perm_orbits(perm):
        if len(orb) == 1:
            layer.append(Gate("GAMMA", (orb[0],)))
        else:
            q1 = orb[0]
            layer.append(Gate("UPSILON", (q1, perm[q1], perm[perm[q1]])))
    circ = Circuit(n)
    circ.add_layer(layer)
    circ.add_layer([Gate("PERM", (), perm=tuple(perm))])
    return circ


def _require_order3(perm: Sequence[int]) -> None:
    n = len(perm)
    triple = [perm[perm[perm[i]]] for i in range(n)]
    if triple != list(range(n)):
        raise GateError("permutation must have order dividing 3")


# -- diagonal-gate admissibility (never simulated) -----------------------------------


def transversal_rl_level(
    stabilizer_rows: Sequence[int],
    logical_rows: Sequence[int],
    max_level: int = 6,
) -> int:
    """Strongest ell such that every X-stabilizer weight is 0 mod 2^ell
    and every logical/stabilizer overlap is 0 mod 2^{ell-1} (the
    sufficient condition for the transversal level-ell phase gate)."""
    level = 0
    for ell in range(1, max_level + 1):
        mod_s = 1 << ell
        mod_l = 1 << (ell - 1)
        ok = all(s.bit_count() % mod_s == 0 for s in stabilizer_rows) and all(
            (l & s).bit_count() % mod_l == 0
            for l in logical_rows
            for s in stabilizer_rows
        )
        if not ok:
            break
        level = ell
    return level


def check_r_conditions(
    local_code: LinearCode,
    D: int,
    stabilizer_rows: Optional[Sequence[int]] = None,
    logical_rows: Optional[Sequence[int]] = None,
) -> dict:
    """Local divisibility route plus (when global data is supplied) the
    direct weight conditions."""
    lvl = divisibility_level(local_code)
    report = {
        "local_divisibility_level": lvl,
        "meets_dimension_condition": lvl >= D,
    }
    if stabilizer_rows is not None:
        report["global_level"] = transversal_rl_level(
            stabilizer_rows, logical_rows or []
        )
    return report


def check_cz_conditions(local_code: LinearCode, D: int) -> dict:
    """D-orthogonality of the defining code (the sufficient condition for
    the transversal multi-controlled-Z family)."""
    ok = is_multi_orthogonal([local_code] * D, D)
    return {"d_orthogonal": ok, "D": D}


def logical_phase_prediction(
    logicals: Sequence[int], subset: int, D: int, ell: int
) -> int:
    """Parity datum governing which logical multi-controlled phase is
    enacted: the star-product weight of the given logicals inside the
    subset, reduced mod 2^{D - ell}."""
    acc = subset if subset else -1
    for l in logicals:
        acc &= l
    return acc.bit_count() % (1 << max(1, D - ell))


__all__ = [
    "GateError",
    "DEFAULT_TABLEAU_CAP",
    "Pauli",
    "pauli_mul",
    "pauli_inverse",
    "apply_z",
    "apply_x",
    "apply_s",
    "apply_h",
    "apply_cz_pairs",
    "apply_permutation",
    "apply_gamma",
    "apply_upsilon",
    "conjugate_by_images",
    "Gate",
    "Circuit",
    "membership_phase",
    "in_group_with_sign",
    "perm_orbits",
    "orbit_cz_circuit",
    "cycle_phase_circuit",
    "cycle_clifford_circuit",
    "transversal_rl_level",
    "check_r_conditions",
    "check_cz_conditions",
    "logical_phase_prediction",
]
