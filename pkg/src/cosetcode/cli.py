"""Command-line front end: build instances, run verification suites,
emit reports and matrix exports.

Exit codes: 0 pass, 1 verification finding, 2 config error, 3 resource
cap refused.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import fixtures
from .algebra import AlgebraError, VectorIso, build_ring, coprimality_check
from .complexes import build_coset_complex, verify_structure
from .css import (
    darboux_basis,
    extract_css,
    logical_basis,
    rate_report,
    unfolding_check,
)
from .floquet import build_schedule, permutation_layout, run_schedule, vertex_x_operators
from .gates import (
    Circuit,
    Gate,
    Pauli,
    check_cz_conditions,
    check_r_conditions,
    cycle_clifford_circuit,
    cycle_phase_circuit,
    in_group_with_sign,
    orbit_cz_circuit,
)
from .gf2 import write_alist, write_matrix_market
from .group import GroupCapError, enumerate_group
from .local_codes import reed_muller
from .sheaf import (
    attach_local_codes,
    check_flasque,
    check_locally_acyclic,
    coboundary_matrix,
    dual_sheaf,
    induce_lower_codes,
    link_vertex_code_dimension,
)

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_CONFIG = 2
EXIT_CAP = 3

DEFAULT_RM = {2: (0, 1), 4: (0, 2), 8: (1, 3), 32: (2, 5)}


class ConfigError(ValueError):
    pass


class CapRefusal(RuntimeError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cosetcode",
        description="Quantum Tanner color codes on special-linear coset complexes.",
    )
    p.add_argument("command", choices=["build", "verify", "report"])
    p.add_argument("--config", help="key = value file with the flags below as keys")
    p.add_argument("--D", type=int, default=2, help="complex dimension (default 2)")
    p.add_argument("--q", type=int, default=2, help="base field size 2^eta (default 2)")
    p.add_argument("--m", type=int, default=1, help="ring extension degree (default 1)")
    p.add_argument(
        "--phi",
        help="comma-separated field coefficients of the monic ring modulus",
    )
    p.add_argument("--rm", help="local code parameters as r,eta (default per q)")
    p.add_argument("--x", type=int, default=0, help="X-check sheaf level (default 0)")
    p.add_argument("--z", type=int, default=None, help="Z-check level (default D-2-x)")
    p.add_argument(
        "--suite",
        default="all",
        choices=["structure", "sheaf", "css", "gates", "floquet", "all"],
    )
    p.add_argument(
        "--local-only",
        action="store_true",
        help="vertex-link computation and rate bound only (large instances)",
    )
    p.add_argument("--cap-enumeration", type=int, default=1 << 22)
    p.add_argument("--cap-qubits", type=int, default=1 << 20)
    p.add_argument("--cap-tableau", type=int, default=1 << 14)
    p.add_argument("--seed", type=int, default=20240811)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", default="json", choices=["alist", "mtx", "json"])
    p.add_argument(
        "--fixture",
        help="use a named built-in complex instead of a coset build "
        "(octahedron, hexagonal_torus, single_triangle, corrupted_octahedron)",
    )
    return p


def _apply_config_file(args: argparse.Namespace) -> None:
    if not args.config:
        return
    try:
        with open(args.config) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                value = value.strip().strip("\"'")
                if not hasattr(args, key):
                    raise ConfigError("unknown config key %r" % key)
                current = getattr(args, key)
                if isinstance(current, bool):
                    setattr(args, key, value.lower() in ("1", "true", "yes"))
                elif isinstance(current, int):
                    setattr(args, key, int(value))
                else:
                    setattr(args, key, value)
    except OSError as exc:
        raise ConfigError("cannot read config file: %s" % exc)


def _validate(args: argparse.Namespace) -> dict:
    q = args.q
    if q < 2 or q & (q - 1):
        raise ConfigError("q must be a power of two")
    eta = q.bit_length() - 1
    if args.rm:
        try:
            r_s, eta_s = args.rm.split(",")
            r, rm_eta = int(r_s), int(eta_s)
        except ValueError:
            raise ConfigError("--rm expects r,eta")
        if (1 << rm_eta) != q:
            raise ConfigError("local code length 2^%d != q = %d" % (rm_eta, q))
    elif q in DEFAULT_RM:
        r, rm_eta = DEFAULT_RM[q]
    else:
        raise ConfigError("no default local code for q=%d; pass --rm" % q)
    z = args.z if args.z is not None else args.D - 2 - args.x
    if args.x + z != args.D - 2 or args.x < 0 or z < 0:
        raise ConfigError("need x + z = D - 2 with both nonnegative")
    coprime = coprimality_check(eta, args.m, args.D)
    if not coprime:
        print(
            "note: gcd(2^%d - 1, %d) != 1; type-cycle gate checks are skipped"
            % (eta * args.m, args.D + 1),
            file=sys.stderr,
        )
    phi = None
    if args.phi:
        phi = [int(t) for t in args.phi.split(",")]
    return {
        "D": args.D,
        "q": q,
        "eta": eta,
        "m": args.m,
        "phi": phi,
        "r": r,
        "x": args.x,
        "z": z,
        "seed": args.seed,
        "type_cycle_coprime": coprime,
    }


def build_instance(cfg: dict, cap_enumeration: int, cap_qubits: int) -> dict:
    """Enumerate the group, build the complex, sheaves and CSS code."""
    ring = build_ring(cfg["eta"], cfg["m"], cfg["phi"])
    try:
        table = enumerate_group(cfg["D"], ring, cap=cap_enumeration)
    except GroupCapError as exc:
        raise CapRefusal(
            "group enumeration refused: %s (raise --cap-enumeration to override)" % exc
        )
    if table.size > cap_qubits:
        raise CapRefusal(
            "qubit count %d exceeds cap %d (use --local-only for the link report)"
            % (table.size, cap_qubits)
        )
    c = build_coset_complex(table)
    code_local = reed_muller(cfg["r"], cfg["eta"])
    iso = VectorIso(ring.field)
    s = induce_lower_codes(attach_local_codes(c, code_local, iso, ring))
    s_dual = dual_sheaf(s)
    code, _ = extract_css(
        s, cfg["x"], cfg["z"], s_dual=s_dual, metadata={"q": cfg["q"], "m": cfg["m"], "r": cfg["r"]}
    )
    return {
        "ring": ring,
        "table": table,
        "complex": c,
        "local_code": code_local,
        "iso": iso,
        "sheaf": s,
        "dual": s_dual,
        "code": code,
        "cfg": cfg,
    }


def local_report(cfg: dict) -> dict:
    """Link-level computation: vertex-code dimension and the rate bound."""
    if cfg["m"] != 1 or cfg["D"] != 2:
        raise ConfigError("local-only mode supports D = 2, m = 1")
    ring = build_ring(cfg["eta"], 1, cfg["phi"])
    code_local = reed_muller(cfg["r"], cfg["eta"])
    iso = VectorIso(ring.field)
    dim_v = link_vertex_code_dimension(ring, code_local, iso)
    q = cfg["q"]
    rho0 = Fraction(dim_v, q ** 3)
    rho1 = Fraction(code_local.k, code_local.n)
    return {
        "vertex_code_dimension": dim_v,
        "vertex_up_set": q ** 3,
        "rho0": rho0,
        "rho1": rho1,
        "rate_bound": 6 * rho1 - 6 * rho0 - 2,
    }


# -- suites ----------------------------------------------------------------------


def suite_structure(inst: dict, seed: int) -> dict:
    report = verify_structure(inst["complex"], seed=seed)
    return {name: ok for name, (ok, _) in report.items()}


def suite_sheaf(inst: dict) -> dict:
    s, s_dual = inst["sheaf"], inst["dual"]
    D = s.complex.D
    out = {
        "flasque": check_flasque(s),
        "locally_acyclic": check_locally_acyclic(s),
    }
    for j in range(D - 1):
        d0 = coboundary_matrix(s, j)
        d1 = coboundary_matrix(s, j + 1)
        out["delta_squared_zero_%d" % j] = d1.matmul(d0).is_zero()
    out["dual_flasque"] = check_flasque(s_dual)
    return out


def suite_css(inst: dict) -> dict:
    s, s_dual, code = inst["sheaf"], inst["dual"], inst["code"]
    x = code.metadata["x"]
    z = code.metadata["z"]
    out = {"commutation": code.h_x.matmul(code.h_z.transpose()).is_zero()}
    unf = unfolding_check(code, s, s_dual, x, z)
    out["unfolding"] = unf["ok"]
    out["k"] = code.code_dimension()
    rr = rate_report(s, s_dual=s_dual)
    out["rate"] = {k: str(v) for k, v in rr.items()}
    return out


def _stabilizer_paulis(code) -> List[Pauli]:
    n = code.n
    gens = [Pauli.x_op(n, code.h_x.row_int(i)) for i in range(code.h_x.rows)]
    gens += [Pauli.z_op(n, code.h_z.row_int(i)) for i in range(code.h_z.rows)]
    return gens


def _circuit_preserves(circ: Circuit, gens: List[Pauli]) -> bool:
    return all(in_group_with_sign(circ.conjugate(g), gens) for g in gens)


def suite_gates(inst: dict, cap_tableau: int) -> dict:
    code = inst["code"]
    table = inst["table"]
    n = code.n
    if n > cap_tableau:
        raise CapRefusal(
            "tableau size %d exceeds cap %d; only the arithmetic gate "
            "conditions are available at this scale" % (n, cap_tableau)
        )
    gens = _stabilizer_paulis(code)
    all_mask = (1 << n) - 1
    out: dict = {}
    s_circ = Circuit(n, [[Gate("S", tuple(range(n)))]])
    out["transversal_s"] = _circuit_preserves(s_circ, gens)
    h_circ = Circuit(n, [[Gate("H", tuple(range(n)))]])
    out["transversal_h"] = _circuit_preserves(h_circ, gens)
    # two-block CZ
    two = [
        Pauli(2 * n, g.p, g.x, g.z) for g in gens
    ] + [Pauli(2 * n, g.p, g.x << n, g.z << n) for g in gens]
    cz_pairs = [Gate("CZ", (i, n + i)) for i in range(n)]
    cz_circ = Circuit(2 * n, [cz_pairs])
    out["two_block_cz"] = _circuit_preserves(cz_circ, two)
    # orbit circuits for one element per available order in {2, 3, 7}
    orders_found = {}
    for gid in range(1, table.size):
        o = table.element_order(gid)
        if o in (2, 3, 7) and o not in orders_found:
            orders_found[o] = gid
        if len(orders_found) == 3:
            break
    for o, gid in sorted(orders_found.items()):
        perm = [int(v) for v in table.left_mul_perm(gid)]
        circ = orbit_cz_circuit(perm)
        out["orbit_order_%d" % o] = _circuit_preserves(circ, gens)
    # type-cycle gates (need gcd(q^m - 1, D + 1) = 1 for order-1/3 orbits)
    if inst["cfg"].get("type_cycle_coprime", True):
        cyc = [int(v) for v in table.type_cycle_perm()]
        out["cycle_phase_gate"] = _circuit_preserves(cycle_phase_circuit(cyc), gens)
        out["cycle_clifford_gate"] = _circuit_preserves(cycle_clifford_circuit(cyc), gens)
    # arithmetic conditions; phase-gate availability depends on the local
    # code's divisibility level, so it is informational rather than pass/fail
    out["info_r_conditions"] = check_r_conditions(
        inst["local_code"], code.metadata["D"]
    )
    out["cz_conditions"] = check_cz_conditions(inst["local_code"], code.metadata["D"])
    return out


def suite_floquet(inst: dict) -> dict:
    s, s_dual, code = inst["sheaf"], inst["dual"], inst["code"]
    schedule = build_schedule(s, s_dual)
    rep = run_schedule(
        schedule,
        static_k=code.code_dimension(),
        vertex_ops=vertex_x_operators(s),
    )
    out = {
        "anomalies": rep["anomalies"],
        "periodic": rep["periodic"],
        "half_dimension_ok": rep.get("half_dimension_ok"),
        "max_check_weight": rep["max_check_weight"],
        "layout_ok": True,
    }
    if inst["cfg"].get("type_cycle_coprime", True):
        layout = permutation_layout(s.complex)
        out["layout_ok"] = (
            layout["orbits_ok"]
            and layout["cube_is_identity"]
            and layout["partition_map_ok"]
        )
    return out


def _suite_passed(name: str, result: dict) -> bool:
    if name == "floquet":
        return (
            result["anomalies"] == 0
            and result["periodic"]
            and result["half_dimension_ok"] is not False
            and result["layout_ok"]
        )
    flat = []

    def walk(v):
        if isinstance(v, bool):
            flat.append(v)
        elif isinstance(v, dict):
            for key, vv in v.items():
                if not str(key).startswith("info_"):
                    walk(vv)

    walk(result)
    return all(flat)


# -- commands --------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def cmd_build(args: argparse.Namespace, cfg: dict) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.local_only:
        rep = local_report(cfg)
        path = os.path.join(args.out, "local_report.json")
        with open(path, "w") as fh:
            json.dump(_jsonable(rep), fh, indent=2)
        print("vertex code dimension: %d" % rep["vertex_code_dimension"])
        print("rate bound: %s" % rep["rate_bound"])
        print("wrote %s" % path)
        return EXIT_OK
    inst = build_instance(cfg, args.cap_enumeration, args.cap_qubits)
    code = inst["code"]
    base = os.path.join(args.out, "q%d_m%d" % (cfg["q"], cfg["m"]))
    write_alist(code.h_x, base + "_hx.alist")
    write_alist(code.h_z, base + "_hz.alist")
    write_matrix_market(code.h_x, base + "_hx.mtx")
    write_matrix_market(code.h_z, base + "_hz.mtx")
    with open(base + "_complex.txt", "w") as fh:
        fh.write(inst["complex"].serialize())
    meta = {
        "n": code.n,
        "k": code.code_dimension(),
        "config": {k: _jsonable(v) for k, v in cfg.items()},
        "check_weights": code.check_weight_histogram(),
    }
    with open(base + "_meta.json", "w") as fh:
        json.dump(_jsonable(meta), fh, indent=2)
    print("built n=%d k=%d code; files at %s_*" % (code.n, meta["k"], base))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, cfg: dict) -> int:
    if args.fixture:
        return _verify_fixture(args)
    inst = build_instance(cfg, args.cap_enumeration, args.cap_qubits)
    wanted = (
        ["structure", "sheaf", "css", "gates", "floquet"]
        if args.suite == "all"
        else [args.suite]
    )
    results = {}
    ok = True
    for name in wanted:
        if name == "structure":
            results[name] = suite_structure(inst, args.seed)
        elif name == "sheaf":
            results[name] = suite_sheaf(inst)
        elif name == "css":
            results[name] = suite_css(inst)
        elif name == "gates":
            results[name] = suite_gates(inst, args.cap_tableau)
        elif name == "floquet":
            results[name] = suite_floquet(inst)
        ok = ok and _suite_passed(name, results[name])
    print(json.dumps(_jsonable(results), indent=2))
    return EXIT_OK if ok else EXIT_FINDING


def _verify_fixture(args: argparse.Namespace) -> int:
    maker = getattr(fixtures, args.fixture, None)
    if maker is None:
        raise ConfigError("unknown fixture %r" % args.fixture)
    c = maker()
    report = verify_structure(c, seed=args.seed)
    print(json.dumps(_jsonable({k: v for k, v in report.items()}), indent=2))
    return EXIT_OK if all(ok for ok, _ in report.values()) else EXIT_FINDING


def cmd_report(args: argparse.Namespace, cfg: dict) -> int:
    if args.local_only:
        rep = local_report(cfg)
        print("rho0 = %s, rate >= %s" % (rep["rho0"], rep["rate_bound"]))
        print(json.dumps(_jsonable(rep), indent=2))
        return EXIT_OK
    inst = build_instance(cfg, args.cap_enumeration, args.cap_qubits)
    code = inst["code"]
    s, s_dual = inst["sheaf"], inst["dual"]
    lb = logical_basis(code, s, s_dual, cfg["x"], cfg["z"])
    rep = {
        "n": code.n,
        "k": code.code_dimension(),
        "check_weights": code.check_weight_histogram(),
        "rate": {k: str(v) for k, v in rate_report(s, s_dual=s_dual).items()},
        "logical_color_census": {},
        "floquet_max_check_weight": build_schedule(s, s_dual).max_check_weight(),
    }
    for T, _ in lb.x_logicals:
        key = str(T)
        rep["logical_color_census"][key] = rep["logical_color_census"].get(key, 0) + 1
    if lb.x_logicals:
        dlb = darboux_basis(lb)
        rep["darboux_pairing_identity"] = dlb.pairing().rows
    print(json.dumps(_jsonable(rep), indent=2))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    os.environ.setdefault("TCF_THREADS", "1")
    try:
        _apply_config_file(args)
        cfg = _validate(args)
        if args.command == "build":
            return cmd_build(args, cfg)
        if args.command == "verify":
            return cmd_verify(args, cfg)
        return cmd_report(args, cfg)
    except (ConfigError, AlgebraError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except CapRefusal as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except GroupCapError as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
