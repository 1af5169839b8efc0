"""Command-line surface with machine-readable JSON reports.

Every subcommand prints one JSON object
{command, inputs, status, results, residuals} to stdout and exits with
0 (pass/success), 1 (a check failed) or 2 (usage or input error).
`--csv PATH` additionally writes tabular data where available.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction




def _report(command: str, inputs: dict, status: str, results: dict,
            residuals: dict | None = None) -> int:
    print(json.dumps({
        "command": command,
        "inputs": inputs,
        "status": status,
        "results": results,
        "residuals": residuals or {},
    }, indent=2, default=str))
    return 0 if status == "PASS" else 1


def _load_potential(token: str):
    from . import frobenius
    if os.path.exists(token):
        with open(token, "r", encoding="utf-8") as fh:
            return frobenius.potential_from_json(fh.read()), token
    return frobenius.catalog(token), token


def _load_stokes(token: str):
    from . import stokes
    if os.path.exists(token):
        with open(token, "r", encoding="utf-8") as fh:
            return stokes.stokes_from_json(fh.read())
    return stokes.stokes_catalog(token)


# -- catalog ----------------------------------------------------------------

def cmd_catalog(args) -> int:
    from . import frobenius
    if args.action == "list":
        return _report("catalog list", {}, "PASS",
                       {"potentials": frobenius.CATALOG_NAMES})
    P = frobenius.catalog(args.name, order=args.order)
    return _report("catalog show", {"name": args.name}, "PASS",
                   frobenius.potential_to_dict(P))


# -- wdvv -------------------------------------------------------------------

def cmd_wdvv_check(args) -> int:
    from . import frobenius
    P, token = _load_potential(args.target)
    rep = frobenius.check_wdvv1(P)
    qrep, A, B, C = frobenius.check_quasihomogeneity(P)
    grading = frobenius.check_grading_eta(P)
    status = "PASS" if (rep.passed and qrep.passed and grading) else "FAIL"
    nonzero = {"/".join(str(i + 1) for i in key): str(val)
               for key, val in rep.residuals.items() if not val.is_zero()}
    return _report("wdvv check", {"target": token}, status, {
        "wdvv1": rep.passed,
        "quasihomogeneity": qrep.passed,
        "grading_eta": grading,
        "A": [[str(x) for x in row] for row in A],
        "B": [str(x) for x in B],
        "C": str(C),
    }, {"wdvv1_nonzero": nonzero or "0"})


# -- gw ---------------------------------------------------------------------

def cmd_gw(args) -> int:
    from . import gwcp2
    if args.action == "nk":
        rows = gwcp2.genus0_invariants(args.max)
        pde = gwcp2.genus0_coefficients_pde(min(args.max, 20))
        agree = all(r.A == pde[r.k - 1] for r in rows[:len(pde)])
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(gwcp2.table_csv(args.max))
        return _report("gw nk", {"max": args.max}, "PASS" if agree else "FAIL",
                       {"N": {r.k: r.N for r in rows},
                        "ode_pde_agree": agree})
    if args.action == "elliptic":
        rows = gwcp2.elliptic_invariants(args.max)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(gwcp2.table_csv(args.max))
        return _report("gw elliptic", {"max": args.max}, "PASS",
                       {"N1": {r.k: r.N1 for r in rows},
                        "psi_constant_term": "-1/8"})
    if args.action == "fit":
        a_hat, b_hat, r_hat = gwcp2.asymptotic_fit(args.max)
        ratio = gwcp2.ratio_tail(args.max)
        bound = gwcp2.convergence_bound_check(args.max)
        return _report("gw fit", {"max": args.max},
                       "PASS" if bound else "FAIL",
                       {"a_hat": a_hat, "b_hat": b_hat, "R_hat": r_hat,
                        "tail_ratio": ratio,
                        "ratio_test_at_log65": bound})
    raise SystemExit(2)


# -- stokes -------------------------------------------------------------------

def cmd_stokes(args) -> int:
    from . import stokes
    if args.action == "orbit":
        S = _load_stokes(args.target)
        cap = args.max_size
        if cap is None:
            cap = int(os.environ.get("FROBENII_MAX_ORBIT", stokes.DEFAULT_ORBIT_CAP))
        res = stokes.orbit(S, max_size=cap)
        status = "PASS"
        return _report("stokes orbit", {"target": args.target, "max_size": cap},
                       status, stokes.orbit_report(res, cap))
    if args.action == "braid":
        S = _load_stokes(args.target)
        word = stokes.BraidWord.parse(args.word)
        img = stokes.braid_apply(S, word)
        can = stokes.canonical_form(img)
        results = {"image": stokes.stokes_to_dict(img),
                   "canonical": stokes.stokes_to_dict(can)}
        if S.n == 3:
            results["canonical_triple"] = [str(v) for v in can.triple()]
        return _report("stokes braid", {"target": args.target, "word": args.word},
                       "PASS", results)
    if args.action == "cp2-monodromy":
        rep = stokes.cp2_modular_check()
        return _report("stokes cp2-monodromy", {},
                       "PASS" if rep.passed else "FAIL", {
                           "T0^3 = -1": rep.t0_cubed_is_minus_one,
                           "conjugation identities": rep.conjugation_identities,
                           "quadratic form preserved": rep.form_preserved,
                           "B^3 = 1": rep.b_cubed_is_one})
    raise SystemExit(2)


# -- pvi ----------------------------------------------------------------------

def cmd_pvi(args) -> int:
    from . import painleve
    if args.action == "verify":
        worst = painleve.verify_algebraic(args.family, args.samples, args.tol)
        fam = painleve.FAMILIES[args.family.upper()]
        status = "PASS" if worst < args.tol else "FAIL"
        out = {"family": fam.name, "mu": str(fam.mu1),
               "samples": args.samples, "max_residual": worst}
        if args.csv:
            import csv as _csv
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                w = _csv.writer(fh)
                w.writerow(["s", "x", "y", "residual"])
                for s in painleve.sample_parameters(fam, args.samples):
                    x, y = painleve.algebraic_solution(args.family, s)
                    r = abs(painleve.pvi_residual_on_curve(fam, s))
                    w.writerow([str(s), float(x), float(y), r])
        return _report("pvi verify", {"family": args.family, "tol": args.tol},
                       status, out, {"max_residual": worst})
    if args.action == "integrate":
        fam = painleve.FAMILIES[args.family.upper()]
        s0, s1 = Fraction(args.s0), Fraction(args.s1)
        x0, y0 = painleve.algebraic_solution(args.family, s0)
        yp0 = fam.y.deriv_value(s0) / fam.x.deriv_value(s0)
        x1, y1 = painleve.algebraic_solution(args.family, s1)
        pt = painleve.PviPoint(fam.mu1, complex(x0), complex(y0), complex(yp0))
        end = painleve.pvi_integrate(pt, complex(x1), tol=args.tol)
        err = abs(end.y - complex(y1))
        status = "PASS" if err < 1e-6 else "FAIL"
        return _report("pvi integrate",
                       {"family": args.family, "s0": str(s0), "s1": str(s1),
                        "tol": args.tol},
                       status,
                       {"x1": [end.x.real, end.x.imag],
                        "y_numeric": [end.y.real, end.y.imag],
                        "y_exact": [complex(y1).real, complex(y1).imag]},
                       {"endpoint_error": err})
    raise SystemExit(2)


# -- iso ----------------------------------------------------------------------

def cmd_iso(args) -> int:
    from . import semisimple
    with open(args.state, "r", encoding="utf-8") as fh:
        state = semisimple.state_from_dict(json.load(fh))
    with open(args.path, "r", encoding="utf-8") as fh:
        path = semisimple.path_from_json(fh.read())
    final, diag = semisimple.integrate_isomonodromic(state, path, tol=args.tol)
    status = "PASS" if (diag.spectral_drift < 1e-8 and diag.skewness_drift < 1e-8) \
        else "FAIL"
    return _report("iso integrate",
                   {"state": args.state, "path": args.path, "tol": args.tol},
                   status,
                   {"final": semisimple.state_to_dict(final),
                    "steps": diag.stats.steps,
                    "rejected": diag.stats.rejected,
                    "dlog_tau": [diag.dlog_tau.real, diag.dlog_tau.imag]},
                   {"spectral_drift": diag.spectral_drift,
                    "skewness_drift": diag.skewness_drift})


# -- sing ---------------------------------------------------------------------

def cmd_sing(args) -> int:
    from . import frobenius, singularity
    subs = singularity.flat_coordinates(args.n)
    _, pot = singularity.a_n_structure(args.n)
    rep = frobenius.check_wdvv1(pot)
    status = "PASS" if rep.passed else "FAIL"
    return _report("sing an", {"n": args.n}, status, {
        "flat_substitution": [str(s) for s in subs],
        "potential": frobenius.potential_to_dict(pot),
        "wdvv1": rep.passed,
    })


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frobenii",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="embedded WDVV solutions")
    ps = p.add_subparsers(dest="action", required=True)
    ps.add_parser("list").set_defaults(func=cmd_catalog)
    q = ps.add_parser("show")
    q.add_argument("name")
    q.add_argument("--order", type=int, default=5,
                   help="truncation order for CP2")
    q.set_defaults(func=cmd_catalog)

    p = sub.add_parser("wdvv", help="WDVV checks")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("check")
    q.add_argument("target", help="catalog name or potential JSON file")
    q.set_defaults(func=cmd_wdvv_check)

    p = sub.add_parser("gw", help="Gromov-Witten tables")
    ps = p.add_subparsers(dest="action", required=True)
    for act in ("nk", "elliptic", "fit"):
        q = ps.add_parser(act)
        q.add_argument("--max", type=int, required=True)
        q.add_argument("--csv")
        q.set_defaults(func=cmd_gw)

    p = sub.add_parser("stokes", help="Stokes matrices and braid orbits")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("orbit")
    q.add_argument("target")
    q.add_argument("--max-size", type=int, default=None)
    q.set_defaults(func=cmd_stokes)
    q = ps.add_parser("braid")
    q.add_argument("target")
    q.add_argument("--word", required=True)
    q.set_defaults(func=cmd_stokes)
    q = ps.add_parser("cp2-monodromy")
    q.set_defaults(func=cmd_stokes)

    p = sub.add_parser("pvi", help="Painleve VI")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("verify")
    q.add_argument("family", choices=["A3", "B3", "H3", "a3", "b3", "h3"])
    q.add_argument("--samples", type=int, default=50)
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--csv")
    q.set_defaults(func=cmd_pvi)
    q = ps.add_parser("integrate")
    q.add_argument("family", choices=["A3", "B3", "H3", "a3", "b3", "h3"])
    q.add_argument("--s0", required=True)
    q.add_argument("--s1", required=True)
    q.add_argument("--tol", type=float, default=1e-10)
    q.set_defaults(func=cmd_pvi)

    p = sub.add_parser("iso", help="isomonodromic integration")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("integrate")
    q.add_argument("--state", required=True)
    q.add_argument("--path", required=True)
    q.add_argument("--tol", type=float, default=1e-10)
    q.set_defaults(func=cmd_iso)

    p = sub.add_parser("sing", help="singularity constructions")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("an")
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_sing)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (KeyError, ValueError, OSError, ZeroDivisionError) as exc:
        print(json.dumps({"command": args.command, "status": "ERROR",
                          "error": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
