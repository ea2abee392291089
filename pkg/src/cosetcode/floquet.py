"""Period-6 dynamic variant of the two-dimensional code: measurement
schedule over the three edge colors, instantaneous stabilizer group
(ISG) tracking with exact signs, and the fixed-infrastructure qubit
permutation layout.

Edge color naming (fixed, arbitrary): orange = types {0,1}, green =
{1,2}, purple = {0,2}.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import Complex, mask_of
from .gf2 import BitMatrix
from .gates import Pauli, membership_phase, pauli_mul
from .sheaf import Sheaf


class FloquetError(ValueError):
    """Raised for invalid schedules or tracking anomalies."""


EDGE_COLORS = {"orange": (0, 1), "green": (1, 2), "purple": (0, 2)}

#: (pauli kind, edge color) per round; X rounds use the primal edge
#: bases, Z rounds the dual edge bases.
ROUND_PLAN: List[Tuple[str, str]] = [
    ("X", "orange"),
    ("Z", "green"),
    ("X", "purple"),
    ("Z", "orange"),
    ("X", "green"),
    ("Z", "purple"),
]


class StabilizerGroup:
    """A list of commuting sign-exact Pauli generators with measurement
    update and canonical-form comparison."""

    def __init__(self, n: int, gens: Optional[List[Pauli]] = None):
        self.n = n
        self.gens: List[Pauli] = list(gens or [])

    @classmethod
    def all_z(cls, n: int) -> "StabilizerGroup":
        return cls(n, [Pauli.z_op(n, 1 << i) for i in range(n)])

    def rank(self) -> int:
        return len(self.canonical())

    def logical_dimension(self) -> int:
        return self.n - self.rank()

    def canonical(self) -> List[Pauli]:
        """Unique reduced-echelon generator list over the (x|z) rows,
        with phases carried along by genuine Pauli multiplication."""
        rows = list(self.gens)
        out: List[Pauli] = []
        for col in range(2 * self.n):
            bit = 1 << (col % self.n)
            is_x = col < self.n

            def has(p: Pauli) -> bool:
                return bool((p.x if is_x else p.z) & bit)

            piv = next((i for i, p in enumerate(rows) if has(p)), None)
            if piv is None:
                continue
            pivot = rows.pop(piv)
            rows = [pauli_mul(p, pivot) if has(p) else p for p in rows]
            out = [pauli_mul(p, pivot) if has(p) else p for p in out]
            out.append(pivot)
        # drop identity rows (dependent inputs); a -I row is inconsistent
        clean = []
        for p in out + rows:
            if p.x == 0 and p.z == 0:
                if p.p != 0:
                    raise FloquetError("stabilizer group contains -identity")
                continue
            clean.append(p)
        return clean

    def equals(self, other: "StabilizerGroup") -> bool:
        return self.canonical() == other.canonical()

    def measure(self, m: Pauli) -> str:
        """Project onto the +1 outcome of m; returns the outcome class:
        'random', 'deterministic', 'adjoined', or 'anomaly' (-m was in
        the group, so the forced outcome contradicts +1)."""
        anti = [i for i, g in enumerate(self.gens) if not g.commutes(m)]
        if anti:
            g0 = self.gens[anti[0]]
            for i in anti[1:]:
                self.gens[i] = pauli_mul(self.gens[i], g0)
            self.gens[anti[0]] = m
            return "random"
        phase = membership_phase(m, self.gens)
        if phase == 0:
            return "deterministic"
        if phase is None:
            self.gens.append(m)
            return "adjoined"
        return "anomaly"


class FloquetSchedule:
    """Six rounds of sign-free X/Z check measurements."""

    def __init__(self, n: int, rounds: List[Tuple[str, str, List[Pauli]]]):
        self.n = n
        self.rounds = rounds
        if len(rounds) != 6:
            raise FloquetError("schedule must have six rounds")

    def max_check_weight(self) -> int:
        return max(p.weight() for _, _, checks in self.rounds for p in checks)


def build_schedule(s: Sheaf, s_dual: Sheaf) -> FloquetSchedule:
    """X rounds measure the primal edge-code basis of one color; Z rounds
    the dual edge-code basis, cycling colors per the fixed plan."""
    c = s.complex
    if c.D != 2:
        raise FloquetError("the dynamic schedule is two-dimensional only")
    rounds: List[Tuple[str, str, List[Pauli]]] = []
    for kind, color in ROUND_PLAN:
        mask = mask_of(EDGE_COLORS[color])
        sheaf = s if kind == "X" else s_dual
        checks: List[Pauli] = []
        for idx in c.faces(mask):
            ups = c.up_sets[mask][idx]
            basis = sheaf.basis((mask, idx))
            for i in range(basis.rows):
                w = basis.row_int(i)
                supp = 0
                for p, t in enumerate(ups):
                    if (w >> p) & 1:
                        supp |= 1 << t
                checks.append(
                    Pauli.x_op(c.n_top, supp) if kind == "X" else Pauli.z_op(c.n_top, supp)
                )
        rounds.append((kind, color, checks))
    return FloquetSchedule(c.n_top, rounds)


def vertex_x_operators(s: Sheaf) -> Dict[int, List[Pauli]]:
    """Per color, the X operators carrying each vertex-code basis row on
    the vertex up-set (the operators whose lifecycle the rounds drive)."""
    c = s.complex
    out: Dict[int, List[Pauli]] = {}
    for color in range(c.n_colors):
        mask = 1 << color
        ops: List[Pauli] = []
        for idx in c.faces(mask):
            ups = c.up_sets[mask][idx]
            basis = s.basis((mask, idx))
            for i in range(basis.rows):
                w = basis.row_int(i)
                supp = 0
                for p, t in enumerate(ups):
                    if (w >> p) & 1:
                        supp |= 1 << t
                ops.append(Pauli.x_op(c.n_top, supp))
        out[color] = ops
    return out


def run_schedule(
    schedule: FloquetSchedule,
    periods: int = 3,
    static_k: Optional[int] = None,
    vertex_ops: Optional[Dict[int, List[Pauli]]] = None,
) -> dict:
    """Run from the maximally mixed state (empty ISG) through `periods`
    full cycles, so the ISG is exactly the group generated by measured
    checks and their inferred products.

    The first cycle is warm-up; afterwards the report verifies that the
    ISG is periodic with period six, counts anomalies, and records the
    steady-state logical dimension."""
    if periods < 3:
        raise FloquetError("need at least three periods (warm-up + comparison)")
    n = schedule.n
    isg = StabilizerGroup(n)
    per_round = []
    snapshots: List[List[Pauli]] = []  # canonical ISG after each round
    anomalies = 0
    for t in range(6 * periods):
        kind, color, checks = schedule.rounds[t % 6]
        outcomes = {"random": 0, "deterministic": 0, "adjoined": 0, "anomaly": 0}
        for m in checks:
            outcomes[isg.measure(m)] += 1
        anomalies += outcomes["anomaly"]
        entry = {
            "round": t,
            "kind": kind,
            "color": color,
            "rank": isg.rank(),
            "outcomes": outcomes,
        }
        if vertex_ops is not None:
            entry["vertex_ops_in_isg"] = {
                c_: sum(
                    1 for op in ops if membership_phase(op, isg.gens) == 0
                )
                for c_, ops in vertex_ops.items()
            }
        per_round.append(entry)
        snapshots.append(isg.canonical())
    periodic = all(
        snapshots[t] == snapshots[t + 6] for t in range(6, 6 * (periods - 1))
    )
    steady_logical = n - len(snapshots[-1])
    report = {
        "per_round": per_round,
        "anomalies": anomalies,
        "periodic": periodic,
        "steady_logical_dimension": steady_logical,
        "max_check_weight": schedule.max_check_weight(),
    }
    if static_k is not None:
        report["half_dimension_ok"] = 2 * steady_logical == static_k
    return report


def permutation_layout(c: Complex) -> dict:
    """The fixed-infrastructure layout: the type-cycling qubit permutation,
    its orbit census, and the induced mapping between edge-color
    partitions of the qubits."""
    if c.D != 2 or c.group is None:
        raise FloquetError("layout needs a two-dimensional coset complex")
    perm = c.group.type_cycle_perm()
    n = c.n_top
    # orbit census
    sizes: Dict[int, int] = {}
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        j, size = i, 0
        while not seen[j]:
            seen[j] = True
            size += 1
            j = int(perm[j])
        sizes[size] = sizes.get(size, 0) + 1
    triple = perm[perm[perm]]
    # edge partitions: qubits grouped by containing edge, per color
    partition_map_ok = True
    color_cycle = {"orange": "green", "green": "purple", "purple": "orange"}
    partitions = {}
    for name, cols in EDGE_COLORS.items():
        mask = mask_of(cols)
        partitions[name] = {
            frozenset(u) for u in c.up_sets[mask]
        }
    for name, nxt in color_cycle.items():
        mapped = {
            frozenset(int(perm[t]) for t in part) for part in partitions[name]
        }
        if mapped != partitions[nxt]:
            partition_map_ok = False
    return {
        "orbit_census": sizes,
        "orbits_ok": all(s in (1, 3) for s in sizes),
        "cube_is_identity": bool((triple == np.arange(n)).all()),
        "partition_map_ok": partition_map_ok,
        "group_sizes": sorted({len(u) for m in
                               (mask_of(v) for v in EDGE_COLORS.values())
                               for u in c.up_sets[m]}),
        "permutation": perm,
    }


__all__ = [
    "FloquetError",
    "EDGE_COLORS",
    "ROUND_PLAN",
    "StabilizerGroup",
    "FloquetSchedule",
    "build_schedule",
    "vertex_x_operators",
    "run_schedule",
    "permutation_layout",
]
