"""Command line front-end.

    ellchain eval wp 1.3+0i --n 5 --kappa 2.5
    ellchain verify all --n 6 --kappa 6 --seed 42 --json report.json

Exit codes: 0 all checks pass, 1 some check failed, 2 usage error,
3 numerical hazard (pole proximity, exhausted sampling, dimension cap).
"""

import argparse
import csv
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .commutator import PAIRS, commutator_full, decompose_by_overlap
from .errors import (
    DimensionCap,
    InvalidConfig,
    NonPositivePeriod,
    PoleProximity,
    SamplingExhausted,
    SpectralParameterOnLattice,
)
from .identities import (
    SamplePlan,
    check_omega_equals_R,
    check_T_equals_Phi,
    near_pole_probe,
    run_identity_suite,
    sample_torus,
    TRIPLE_COMBOS,
)
from .independence import analyse, check_mu_rho_condition, verify_small_N_closed_forms
from .integrals import ChainConfig, build_integrals, verify_J_alpha_decomposition
from .spin_rep import verify_spin_commutators
from .weierstrass import f_spectral, make_lattice, sigma, wp, wp_prime, zeta_w

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HAZARD = 0, 1, 2, 3

SUITES = ("identities", "commutators", "independence", "spin")

# equation tags carried in the report for cross-referencing
EQUATION_TAGS = {
    "zeta_addition": "Eq26",
    "F_forms": "Eq10",
    "A_vanishes": "Eq27",
    "B_vanishes": "Eq29",
    "Phi_closed_form": "Eq42",
    "R_vanishes": "Eq31",
    "sum_rule": "Eq43",
    "S_constancy": "Eq43",
    "omega_equals_R": "Eq17",
    "T_equals_Phi": "Eq35",
    "near_pole": "Eq30",
    "commutator": "Eq13",
    "quartic_part": "Eq14",
    "pair_part_a": "Eq32",
    "pair_part_b": "Eq33",
    "disjoint_part": "Eq13",
    "J_alpha": "Eq4",
    "independence": "Sec3",
    "closed_form": "Sec3",
    "spin": "Eq3",
}

_COMPLEX_RE = re.compile(
    r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?([+-](\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?[ij])?$"
    r"|^[+-]?((\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?[ij]$"
)


def parse_complex(text):
    """Parse 'a+bi', 'a-bi', 'a' or 'bi' (j accepted in place of i)."""
    s = text.strip().replace(" ", "")
    if not _COMPLEX_RE.match(s):
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
    s = s.replace("i", "j")
    if s.endswith(("+j", "-j")) or s in ("j", "+j", "-j"):
        s = s[:-1] + "1j"
    return complex(s)


def _threads():
    raw = os.environ.get("ELLIPTIC_CHAIN_THREADS")
    if raw is None:
        return 1
    if not raw.isdigit() or int(raw) < 1:
        raise InvalidConfig(f"ELLIPTIC_CHAIN_THREADS must be a positive integer, got {raw!r}")
    return int(raw)


def _check(name, residual, tol, scale=None, tag=None, passed=None, **extra):
    residual = float(residual)
    row = {
        "name": name,
        "paper_eq": tag or EQUATION_TAGS.get(name.split(":")[0], ""),
        "residual": residual,
        "scale": None if scale is None else float(scale),
        "tol": tol,
        "pass": bool(residual <= tol) if passed is None else bool(passed),
    }
    row.update(extra)
    return row


# ---------------------------------------------------------------------------
# suites


def suite_identities(cfg, tol):
    checks = []
    plan = SamplePlan(count=cfg.samples, seed=cfg.seed)
    for r in run_identity_suite(cfg, plan, tol):
        checks.append(_check(r.name, r.max_rel, r.tol, r.scale, samples=r.samples))
    if cfg.n_sites >= 5:
        total, termwise = check_omega_equals_R(cfg)
        checks.append(_check("omega_equals_R", max(total, termwise), tol))
    if cfg.n_sites >= 4:
        total, termwise = check_T_equals_Phi(cfg)
        checks.append(_check("T_equals_Phi", max(total, termwise), tol))
    L = cfg.lattice
    bases = sample_torus(
        SamplePlan(count=3, seed=cfg.seed + 3, pole_margin=0.1, coincidence_margin=0.1),
        3, L, TRIPLE_COMBOS,
    )
    for kind in ("R_v0", "R_vx", "R_vy", "R_vz", "A_x0"):
        worst = max(float(np.max(near_pole_probe(kind, tuple(b), L))) for b in bases)
        checks.append(_check(f"near_pole:{kind}", worst, tol))
    return checks


def suite_commutators(cfg, tol, corrupt=False):
    S = build_integrals(cfg)
    if corrupt:
        g = sorted(S.J2.terms)[0]
        S.J2.terms[g] *= 1.001
    checks = []
    for pair in PAIRS:
        res = commutator_full(S, pair)
        # J0 is central, so its commutators cancel exactly and get a tighter bound
        ptol = min(tol, 1e-12) if pair[0] == "J0" else tol
        checks.append(_check(f"commutator:[{pair[0]},{pair[1]}]", res.residual, ptol, res.scale))
    D = decompose_by_overlap(S)
    for name, part in (
        ("quartic_part", D.quartic_part),
        ("pair_part_a", D.pair_part_a),
        ("pair_part_b", D.pair_part_b),
    ):
        checks.append(_check(name, part.residual, tol, part.scale))
    checks.append(
        _check("disjoint_part", len(D.disjoint_part.element), 0, D.disjoint_part.scale)
    )
    rng = np.random.default_rng(cfg.seed)
    L = cfg.lattice
    for i in range(2):
        alpha = complex(rng.uniform(0.05, 0.95) * L.real_period, rng.uniform(0.05, 0.95) * L.kappa)
        acfg = ChainConfig(cfg.n_sites, cfg.kappa, alpha=alpha, seed=cfg.seed)
        resid, scale = verify_J_alpha_decomposition(acfg, S if not corrupt else None)
        checks.append(_check(f"J_alpha:{i}", resid, 1e-8, scale, alpha=str(alpha)))
    return checks


def suite_independence(cfg, tol):
    rep = analyse(cfg)
    n = cfg.n_sites
    checks = []
    expected = "dependent" if n <= 4 else "independent"
    checks.append(
        _check("independence:verdict", 0.0, 0.0, passed=rep.verdict == expected,
               verdict=rep.verdict)
    )
    if n <= 4:
        checks.append(_check("independence:max_minor", rep.max_minor, 1e-10))
        checks.append(_check("independence:ratio_spread", rep.ratio_spread, tol, ratio=rep.ratio))
    else:
        sv = rep.smallest_singular_value
        checks.append(
            _check("independence:singular_value", sv, 1e-6, passed=sv > 1e-6)
        )
        mr = check_mu_rho_condition(cfg)
        checks.append(
            _check("independence:distinct_wp", 0.0, 0.0,
                   passed=mr["forces_trivial"], distinct_wp_count=mr["distinct_wp_count"])
        )
    closed = verify_small_N_closed_forms(cfg.kappa / cfg.n_sites)
    for key in ("N3_J1", "N3_J2", "N4_J1", "N4_J2", "N4_phi_closed", "N4_F_corrected"):
        checks.append(_check(f"closed_form:{key}", closed[key], 1e-10))
    return checks, {"independence": rep.as_dict(), "closed_forms": closed}


def suite_spin(cfg, tol, max_n):
    rep = verify_spin_commutators(cfg, max_sites=max_n, tol=tol)
    checks = [_check(f"spin:{k}", v, tol) for k, v in rep.residuals.items()]
    checks.append(
        _check("spin:negative_control", rep.negative_control, 1e-2,
               passed=rep.negative_control > 1e-2)
    )
    return checks


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args, out):
    L = make_lattice(args.n, args.kappa if args.kappa is not None else args.n)
    z = args.z
    fn = args.function
    if fn == "f":
        if args.alpha is None:
            raise InvalidConfig("eval f needs --alpha")
        val = f_spectral(z, args.alpha, L)
    else:
        val = {"sigma": sigma, "zeta": zeta_w, "wp": wp, "wp_prime": wp_prime}[fn](z, L)
    val = complex(val)
    val = complex(val.real + 0.0, val.imag + 0.0)  # drop negative zeros
    out.write(f"{val.real:.15g}{val.imag:+.15g}i\n")
    payload = {
        "function": fn,
        "z": [z.real, z.imag],
        "alpha": None if args.alpha is None else [args.alpha.real, args.alpha.imag],
        "value": [val.real, val.imag],
        "lattice": {
            "real_period": L.real_period,
            "kappa": L.kappa,
            "swapped": L.swapped,
            "nome_q": L.nome_q.real,
            "g2": L.g2,
            "g3": L.g3,
        },
    }
    text = json.dumps(payload, sort_keys=True)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK


def run_verify(suite, cfg, tol=None, max_n=12, corrupt=False):
    """Run one suite (or all); return (checks, extras)."""
    wanted = SUITES if suite == "all" else (suite,)
    tol_id = tol if tol is not None else 1e-8
    tol_com = tol if tol is not None else 1e-9
    jobs = {
        "identities": lambda: (suite_identities(cfg, tol_id), {}),
        "commutators": lambda: (suite_commutators(cfg, tol_com, corrupt), {}),
        "independence": lambda: suite_independence(cfg, tol_com),
        "spin": lambda: (suite_spin(cfg, tol_com, max_n), {}),
    }
    if suite == "all" and cfg.n_sites > max_n:
        wanted = tuple(s for s in wanted if s != "spin")
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = [(name, pool.submit(jobs[name])) for name in wanted]
        results = [(name, fut.result()) for name, fut in futures]
    checks = []
    extras = {}
    for name, (c, extra) in results:
        for row in c:
            row["suite"] = name
        checks.extend(c)
        extras.update(extra)
    return checks, extras


def _clean(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def build_report(suite, cfg, checks, extras, wall_time):
    return _clean(
        {
            "manifest": {
                "subcommand": f"verify {suite}",
                "config": {
                    "n_sites": cfg.n_sites,
                    "kappa": cfg.kappa,
                    "h0": cfg.h0,
                    "seed": cfg.seed,
                    "samples": cfg.samples,
                    "tol": cfg.tol,
                },
                "version": __version__,
                "wall_time": wall_time,
                "pass": all(c["pass"] for c in checks),
            },
            "checks": checks,
            "details": extras,
        }
    )


def cmd_verify(args, out):
    cfg = ChainConfig(
        n_sites=args.n,
        kappa=args.kappa,
        seed=args.seed,
        samples=args.samples,
        tol=args.tol if args.tol is not None else 1e-9,
    )
    t0 = time.perf_counter()
    checks, extras = run_verify(args.suite, cfg, args.tol, args.max_n, args.corrupt)
    report = build_report(args.suite, cfg, checks, extras, time.perf_counter() - t0)
    for c in checks:
        flag = "PASS" if c["pass"] else "FAIL"
        out.write(f"{flag}  {c['name']:<36} residual={c['residual']:.3e} tol={c['tol']:.0e}\n")
    ok = report["manifest"]["pass"]
    out.write(f"{'ALL PASS' if ok else 'FAILED'} ({len(checks)} checks)\n")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["suite", "name", "paper_eq", "residual", "scale", "tol", "pass"])
            for c in report["checks"]:
                w.writerow([c["suite"], c["name"], c["paper_eq"], repr(c["residual"]),
                            "" if c["scale"] is None else repr(c["scale"]), c["tol"], c["pass"]])
    return EXIT_OK if ok else EXIT_FAIL


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="ellchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a Weierstrass function")
    ev.add_argument("function", choices=["sigma", "zeta", "wp", "wp_prime", "f"])
    ev.add_argument("z", type=parse_complex, help="complex literal such as 1.3+0.2i")
    ev.add_argument("--n", type=_positive_float, required=True, help="real period")
    ev.add_argument("--kappa", type=_positive_float, default=None, help="imaginary period (default N)")
    ev.add_argument("--alpha", type=parse_complex, default=None, help="spectral parameter for f")
    ev.add_argument("--json", metavar="PATH", default=None)

    ve = sub.add_parser("verify", help="run verification suites")
    ve.add_argument("suite", choices=SUITES + ("all",))
    ve.add_argument("--n", type=int, required=True, help="number of sites (>= 3)")
    ve.add_argument("--kappa", type=_positive_float, default=None)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--samples", type=_positive_int, default=500)
    ve.add_argument("--tol", type=_positive_float, default=None)
    ve.add_argument("--json", metavar="PATH", default=None)
    ve.add_argument("--csv", metavar="PATH", default=None)
    ve.add_argument("--max-n", dest="max_n", type=_positive_int, default=12,
                    help="largest N for the spin-1/2 suite")
    ve.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.n < 3:
            raise InvalidConfig(f"N must be at least 3, got {args.n}")
        return cmd_verify(args, out)
    except (InvalidConfig, NonPositivePeriod) as exc:
        sys.stderr.write(f"ellchain: error: {exc}\n")
        return EXIT_USAGE
    except (PoleProximity, SpectralParameterOnLattice, SamplingExhausted, DimensionCap) as exc:
        sys.stderr.write(f"ellchain: numerical hazard: {exc}\n")
        return EXIT_HAZARD


if __name__ == "__main__":
    sys.exit(main())
