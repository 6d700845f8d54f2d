"""Command-line front end: group files in, JSON reports out.

Every numeric result field is wrapped as {"value": ..., ...metadata} where
the metadata records the truncations and tolerances it was computed under.
Reports carry "schema": 1; readers reject unknown top-level keys.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bers, domain, zeta
from .errors import ParseError, QfzError
from .groupfile import load_group
from .words import GroupWords

SCHEMA = 1
#: default displacement radius for operator computations on surface groups
DEFAULT_BALL_R = 11.0
REPORT_KEYS = {"schema", "command", "group", "config", "result", "error"}


def _c(z, **meta):
    return {"value": [float(np.real(z)), float(np.imag(z))], **meta}


def _r(x, **meta):
    return {"value": float(x), **meta}


def _matrix(M, **meta):
    return {"rows": [[[float(e.real), float(e.imag)] for e in row]
                     for row in np.asarray(M, dtype=complex)], **meta}


def load_report(path):
    """Read a report, enforcing the schema version and known keys."""
    with open(path, "r", encoding="utf-8") as fh:
        rep = json.load(fh)
    if not isinstance(rep, dict):
        raise ParseError("report is not a JSON object")
    unknown = set(rep) - REPORT_KEYS
    if unknown:
        raise ParseError(f"unknown report keys: {sorted(unknown)}")
    if rep.get("schema") != SCHEMA:
        raise ParseError(f"unsupported schema {rep.get('schema')!r}")
    return rep


def _default_L(G, arg):
    if arg is not None:
        return arg
    return 8 if G.kind == "free" else 4


# -- subcommand implementations ---------------------------------------

def _cmd_classes(G, args):
    L = _default_L(G, args.max_word_len)
    W = GroupWords(G)
    classes = W.conjugacy_classes(L)
    return {
        "truncation": {"max_word_len": L},
        "count": len(classes),
        "classes": [
            {
                "word": W.word_str(c.canonical_word),
                "length": c.word_length,
                "primitive": c.primitive,
                "multiplier": _c(c.multiplier.value, tolerance=1e-12),
                "trace": _c(c.multiplier.trace, tolerance=1e-12),
            }
            for c in classes
        ],
    }


def _letter_names(G):
    return list(G.names) + [nm + "'" for nm in G.names]


def _cmd_series(G, args):
    L = _default_L(G, args.max_word_len)
    out = zeta.multiplier_series(G, args.n, L)
    return {
        "n": args.n,
        "value": _r(out.value.real, truncation={"max_word_len": L},
                    tail_estimate=out.tail_estimate),
        "terms_used": out.terms_used,
    }


def _product_result(out, extra):
    meta = {"truncation": {"max_word_len": out.L, "m_trunc": out.M},
            "tail_estimate": out.tail_estimate}
    return {
        **extra,
        "value": _c(out.value, **meta),
        "log_value": _c(out.log_value, **meta),
        "n_classes": out.n_classes,
        "n_primitive": out.n_primitive,
    }


def _cmd_zeta(G, args):
    if args.s is None:
        raise ParseError("zeta requires --s")
    L = _default_L(G, args.max_word_len)
    out = zeta.selberg_z(G, args.s, L, M=args.m_trunc)
    return _product_result(out, {"s": args.s})


def _cmd_f(G, args):
    L = _default_L(G, args.max_word_len)
    out = zeta.f_function(G, args.n, L, M=args.m_trunc)
    return _product_result(out, {"n": args.n})


def _polygon(G, args):
    center = 1j
    return domain.dirichlet_domain(G, center)


def _cmd_domain(G, args):
    P = _polygon(G, args)
    area = domain.hyperbolic_area(P, args.quad_order)
    res = {
        "center": _c(P.center),
        "complete": P.is_complete,
        "vertices": [_c(v, tolerance=domain.VERTEX_TOL) for v in P.vertices],
        "sides": [
            {
                "from": _c(s.z1, tolerance=domain.VERTEX_TOL),
                "to": _c(s.z2, tolerance=domain.VERTEX_TOL),
                "pairing_word": None if s.pairing_word is None else
                " ".join(_letter_names(G)[l] for l in s.pairing_word),
            }
            for s in P.sides
        ],
        "area": _r(area, quad_order=args.quad_order,
                   tolerance=domain.AREA_TOL),
    }
    if P.genus is not None:
        res["genus"] = P.genus
    return res


def _operator_setup(G, args):
    if G.kind != "surface" or not G.is_fuchsian():
        raise ParseError(
            "period/kappa computations need a Fuchsian surface group")
    P = _polygon(G, args)
    rule = domain.quadrature_rule(P, args.quad_order)
    R = DEFAULT_BALL_R
    basis = bers.theta_basis(G, args.n, P=P, rule=rule, R=R, seed=args.seed)
    dual = bers.bers_dual(G, args.n, basis, R=R, center=P.center,
                          seed=args.seed)
    return P, rule, R, basis, dual


def _cmd_period(G, args):
    P, rule, R, basis, dual = _operator_setup(G, args)
    Np = bers.period_matrix(G, basis, P, rule=rule, basis_id="plus")
    Nm = bers.period_matrix(G, dual, P, rule=rule, basis_id="minus")
    meta = {"n": args.n, "radius": R, "quad_order": args.quad_order,
            "basis_cond": basis.gram_cond, "collocation_cond": dual.gram_cond}
    return {
        "n_plus": _matrix(Np.entries, **meta),
        "n_minus": _matrix(Nm.entries, **meta),
        "det_product": _c(Np.det * Nm.det, **meta, tolerance=1e-3),
    }


def _cmd_kappa(G, args):
    P, rule, R, basis, dual = _operator_setup(G, args)
    kap = bers.kappa_matrix(G, args.n, basis, dual, P, rule=rule)
    meta = {"n": args.n, "radius": R, "quad_order": args.quad_order}
    return {
        "kappa": _matrix(kap.entries, **meta),
        "det": _c(kap.det, **meta, tolerance=1e-3),
        "eigenvalues": [_c(ev, **meta, tolerance=1e-3)
                        for ev in np.sort_complex(kap.eigenvalues)],
        "max_identity_deviation": _r(
            float(np.max(np.abs(kap.entries - np.eye(kap.entries.shape[0])))),
            **meta, tolerance=1e-3),
    }


def _cmd_check(G, args):
    from .moebius import conjugate_group
    checks = []

    def record(name, residual, tol):
        checks.append({"name": name,
                       "residual": _r(residual, tolerance=tol),
                       "passed": bool(residual <= tol)})

    L = _default_L(G, args.max_word_len)
    Gc = conjugate_group(G)
    f1 = zeta.f_function(G, args.n, L, M=args.m_trunc)
    f2 = zeta.f_function(Gc, args.n, L, M=args.m_trunc)
    record("f-reflection", abs(f2.value - f1.value.conjugate()), 0.0)

    if G.is_fuchsian():
        record("fuchsian-im-log-f", abs(f1.log_value.imag), 1e-10)
        zz = zeta.selberg_z(G, float(args.n), L, M=args.m_trunc)
        record("f-equals-z", abs(zz.value - f1.value), 0.0)

    z, w = 0.4 + 1.3j, -0.3 - 1.1j
    kzw = bers.kernel_slice(G, args.n, z, np.array([w]), L=3)[0]
    kwz = bers.kernel_slice(G, args.n, w, np.array([z]), L=3)[0]
    record("kernel-symmetry", abs(kzw - kwz) / max(1.0, abs(kzw)), 1e-10)

    kc = bers.kernel_slice(Gc, args.n, np.conj(z), np.array([np.conj(w)]),
                           L=3)[0]
    record("kernel-intertwining", abs(np.conj(kc) - kzw), 0.0)
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}


_COMMANDS = {
    "classes": _cmd_classes,
    "series": _cmd_series,
    "zeta": _cmd_zeta,
    "f": _cmd_f,
    "domain": _cmd_domain,
    "period": _cmd_period,
    "kappa": _cmd_kappa,
    "check": _cmd_check,
}


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="qfzeta",
        description="Conjugacy classes, zeta products, fundamental domains "
                    "and Bers operator matrices for matrix groups.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("group_file")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--max-word-len", type=int, default=None)
        p.add_argument("--m-trunc", type=int, default=64)
        p.add_argument("--quad-order", type=int, default=16)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--deterministic", action="store_true")
        p.add_argument("--out", default=None)
    return ap


def _emit(report, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "group": args.group_file,
        "config": {
            "n": args.n, "s": args.s, "max_word_len": args.max_word_len,
            "m_trunc": args.m_trunc, "quad_order": args.quad_order,
            "seed": args.seed, "deterministic": args.deterministic,
        },
    }
    try:
        G = load_group(args.group_file)
        report["result"] = _COMMANDS[args.command](G, args)
    except QfzError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        _emit(report, args)
        return 2 if isinstance(exc, ParseError) else 1
    except OSError as exc:
        report["error"] = {"code": "cli.io_error", "message": str(exc)}
        _emit(report, args)
        return 2
    _emit(report, args)
    if args.command == "check" and not report["result"]["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
