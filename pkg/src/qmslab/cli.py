"""Command-line entry point.

Every operation of the library is reachable through one subcommand; all
numeric output is serialized as decimal strings so any consumer can
parse it losslessly.  Each run emits a manifest (command line, resolved
parameters, library version, wall clock) alongside the result; two runs
with identical flags produce byte-identical payloads except for the
timing field.

Precision may be given in bits (--prec) or target decimal digits
(--digits, converted as bits = ceil(digits * ln 10 / ln 2) + 16).  A
key=value config file can pre-set any long option; explicit flags win.
The environment variable QMSLAB_PREC_DEFAULT overrides the built-in
default precision.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time

import click
import mpmath
from mpmath import mp, mpf

from . import __version__, darboux, riccati, semiclassical, series, solver, tau
from . import specfun, verify
from .rationals import Q, rat, rat_str, rat_to_mpf

DEFAULT_PREC = 256


def _fail(message: str, code: int = 1):
    json.dump({"error": message}, sys.stderr)
    sys.stderr.write("\n")
    sys.exit(code)


def _digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log(10) / math.log(2)) + 16


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    conf = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise click.UsageError(f"config line not key=value: {line!r}")
            k, v = line.split("=", 1)
            conf[k.strip().replace("-", "_")] = v.strip()
    return conf


class Run:
    """Resolved global options plus manifest assembly."""

    def __init__(self, prec, digits, config):
        conf = _load_config(config)
        if prec is None and "prec" in conf:
            prec = int(conf["prec"])
        if digits is None and "digits" in conf:
            digits = int(conf["digits"])
        if prec is None and digits is not None:
            prec = _digits_to_bits(digits)
        if prec is None:
            prec = int(os.environ.get("QMSLAB_PREC_DEFAULT", DEFAULT_PREC))
        self.prec = prec
        self.config = conf
        self.t0 = time.monotonic()

    def conf(self, key, given, cast=str):
        """Flag value if given, else config value, else None."""
        if given is not None:
            return given
        if key in self.config:
            return cast(self.config[key])
        return None

    def dec(self, x, prec=None) -> str:
        prec = prec or self.prec
        return mpmath.nstr(mpf(x), max(int(prec * 0.30103), 8))

    def emit(self, command: str, params: dict, result, checks=None):
        payload = {
            "manifest": {
                "command": command,
                "argv": sys.argv[1:],
                "parameters": params,
                "version": __version__,
                "precision_bits": self.prec,
                "wall_clock_s": round(time.monotonic() - self.t0, 3),
            },
            "result": result,
        }
        if checks is not None:
            payload["manifest"]["checks"] = checks
        json.dump(payload, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")


pass_run = click.make_pass_decorator(Run)


@click.group()
@click.option("--prec", type=int, default=None, help="Working precision in bits.")
@click.option("--digits", type=int, default=None,
              help="Target decimal digits (converted to bits).")
@click.option("--config", type=click.Path(exists=True), default=None,
              help="key=value file pre-setting any long option; flags win.")
@click.version_option(__version__)
@click.pass_context
def main(ctx, prec, digits, config):
    """Exact and arbitrary-precision tools for the quantum minimal-surface
    recursions, their polynomial towers, Schrödinger potentials,
    factorization ladders and semiclassical comparison."""
    ctx.obj = Run(prec, digits, config)


def _parse_grid(text: str) -> list[mpf]:
    """'a:b:n' -> n evenly spaced points in [a, b]; or comma-separated list."""
    if ":" in text:
        a, b, n = text.split(":")
        a, b, n = mpf(a), mpf(b), int(n)
        if n < 2:
            return [a]
        return [a + (b - a) * k / (n - 1) for k in range(n)]
    return [mpf(t) for t in text.split(",")]


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# recursion solvers


@main.group()
def parabolic():
    """The three-term recursion v_{n+1} = (n+1) eps / v_n - v_{n-1} - 1."""


@parabolic.command("solve")
@click.option("--eps", required=True, help="Step parameter, decimal or p/q.")
@click.option("--n", "n", type=int, required=True, help="Depth N.")
@pass_run
def parabolic_solve(run: Run, eps, n):
    """Shoot for the positive solution and print it with residuals."""
    try:
        with mp.workprec(run.prec + 64):
            seq = solver.shoot_parabolic(rat_to_mpf(rat(eps)), n, run.prec)
    except solver.SolverError as exc:
        _fail(f"{type(exc).__name__}: {exc}")
    run.emit("parabolic solve", {"eps": eps, "N": n}, seq.to_json())


@main.group()
def cubic():
    """The five-term recursion of the degree-three surface."""


@cubic.command("solve")
@click.option("--eps", required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--match-depth", type=int, default=None,
              help="Series matching depth M (default min(10, N//2)).")
@pass_run
def cubic_solve(run: Run, eps, n, match_depth):
    """Two-parameter shoot (v0, v1) and residual report."""
    try:
        with mp.workprec(run.prec + 64):
            seq = solver.shoot_cubic(rat_to_mpf(rat(eps)), n, run.prec,
                                     match_depth=match_depth)
    except solver.SolverError as exc:
        _fail(f"{type(exc).__name__}: {exc}")
    out = seq.to_json()
    out["residuals"] = seq.residuals
    run.emit("cubic solve", {"eps": eps, "N": n, "match_depth": match_depth},
             out)


# ---------------------------------------------------------------------------
# polynomial families


@main.group()
def poly():
    """Exact expansion polynomial families."""


@poly.command("pk")
@click.option("--k", type=int, required=True)
@pass_run
def poly_pk(run: Run, k):
    """Parabolic family member P_k."""
    p = series.parabolic_P(k)
    series.check_family_invariants("parabolic-P", k)
    run.emit("poly pk", {"k": k}, p.to_json())


@poly.command("gamma")
@click.option("--l", "l", type=int, required=True)
@pass_run
def poly_gamma(run: Run, l):
    """Drift-expansion coefficient polynomial gamma_l."""
    g = series.gamma_poly(l)
    series.check_family_invariants("gamma", l)
    run.emit("poly gamma", {"l": l}, g.to_json())


@poly.command("cubic-pk")
@click.option("--l", "l", type=int, required=True)
@pass_run
def poly_cubic_pk(run: Run, l):
    """Cubic family member P_l."""
    p = series.cubic_P(l)
    series.check_family_invariants("cubic-P", l)
    run.emit("poly cubic-pk", {"l": l}, p.to_json())


# ---------------------------------------------------------------------------
# polynomial tower


@main.command("tau")
@click.argument("action", type=click.Choice(["build"]))
@click.option("--n-max", type=int, default=10)
@click.option("--verify", "verify_ids", default=None,
              help="'all' or comma list of identity names (see tau.IDENTITIES).")
@click.option("--dump", default=None,
              help="Comma list from u,q,p,tau: include polynomials in output.")
@pass_run
def tau_cmd(run: Run, action, n_max, verify_ids, dump):
    """Build the exact u/q/p tower, optionally verifying identities."""
    try:
        t = tau.build_u(n_max)
    except tau.NotDivisible as exc:
        _fail(f"NotDivisible: {exc}")
    result: dict = {"built_to": n_max,
                    "tau_deg_x": {n: t.tau(n).deg_x
                                  for n in range(3, n_max + 1)}}
    checks = {}
    if verify_ids:
        names = (list(tau.IDENTITIES) if verify_ids == "all"
                 else verify_ids.split(","))
        for name in names:
            if name not in tau.IDENTITIES:
                raise click.UsageError(f"unknown identity {name}")
            rows = {}
            for n in tau.applicable_range(t, name, n_max):
                passed, witness = tau.verify_identity(t, name, n)
                rows[n] = "pass" if passed else f"FAIL: {witness}"
            checks[name] = rows
        result["identities"] = checks
    if dump:
        for which in dump.split(","):
            table = {"u": t.u, "q": t.q, "p": t.p}.get(which)
            if which == "tau":
                result["tau"] = {n: t.tau(n).to_json()
                                 for n in range(0, n_max + 1)}
            elif table is not None:
                result[which] = {n: v.to_json() for n, v in sorted(table.items())}
            else:
                raise click.UsageError(f"unknown dump table {which}")
    all_ok = all(v == "pass" for rows in checks.values() for v in rows.values())
    run.emit("tau build", {"n_max": n_max, "verify": verify_ids}, result,
             checks={"identities_ok": all_ok} if verify_ids else None)
    if verify_ids and not all_ok:
        sys.exit(1)


# ---------------------------------------------------------------------------
# Riccati / Schrödinger


@main.command("riccati")
@click.argument("action", type=click.Choice(["check"]))
@click.option("--n-max", type=int, default=10)
@click.option("--s-grid", default="2,5,10,50", help="'a:b:n' or comma list.")
@pass_run
def riccati_cmd(run: Run, action, n_max, s_grid):
    """First-order residuals of the v-profile transported from the
    Bessel closed form."""
    grid = _parse_grid(s_grid)
    rows = []
    worst = mpf(0)
    try:
        for s in grid:
            prof = riccati.v_profile(n_max, s, run.prec)
            res = [riccati.riccati_residual(prof, n) for n in range(n_max + 1)]
            worst = max(worst, max(res))
            rows.append({"s": run.dec(s), "max_residual": run.dec(max(res), 64)})
    except solver.PrecisionExhausted as exc:
        _fail(f"PrecisionExhausted: {exc}")
    run.emit("riccati check", {"n_max": n_max, "s_grid": s_grid},
             {"rows": rows, "max_residual": run.dec(worst, 64)})


@main.group()
def schrodinger():
    """Potentials W_n and the boundary term."""


@schrodinger.command("potential")
@click.option("--n", "n", type=int, required=True)
@click.option("--s-grid", default="0.5:20:16")
@click.option("--csv-out", type=click.Path(), default=None)
@pass_run
def schrodinger_potential(run: Run, n, s_grid, csv_out):
    """W_n on a grid plus the pointwise eigen-equation residual."""
    grid = _parse_grid(s_grid)
    rows = []
    for s in grid:
        W = riccati.potential_W(n, s, run.prec)
        r = riccati.schrodinger_residual(n, s, run.prec)
        rows.append((run.dec(s), run.dec(W), run.dec(r, 64)))
    if csv_out:
        _write_csv(csv_out, ["s", f"W_{n}", "eigen_residual"], rows)
    run.emit("schrodinger potential", {"n": n, "s_grid": s_grid},
             {"rows": [{"s": a, "W": b, "residual": c} for a, b, c in rows],
              "csv": csv_out})


@schrodinger.command("boundary-term")
@pass_run
def schrodinger_boundary(run: Run):
    """The integrated-by-parts constant of the quadratic-form identity."""
    bt = riccati.boundary_term(run.prec)
    with mp.workprec(run.prec + 16):
        gap = abs(bt + mp.pi)
    run.emit("schrodinger boundary-term", {},
             {"boundary_term": run.dec(bt),
              "gap_to_minus_pi": run.dec(gap, 64)})


# ---------------------------------------------------------------------------
# factorization ladder


@main.command("darboux")
@click.option("--kappas", default="1,2,3", help="Comma list, increasing, first 1.")
@click.option("--kinds", default=None, help="Comma list of K/I (default all K).")
@click.option("--check", "checks_opt", default="eigen,potential",
              help="Comma subset of eigen,potential.")
@click.option("--s-grid", default="0.3:30:64")
@click.option("--csv-out", type=click.Path(), default=None)
@pass_run
def darboux_cmd(run: Run, kappas, kinds, checks_opt, s_grid, csv_out):
    """Ladder functions chi_N: eigen and two-route potential residuals."""
    kap = kappas.split(",")
    kin = kinds.split(",") if kinds else ["K"] * len(kap)
    try:
        spec = darboux.LadderSpec.make(kap, kin)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    grid = _parse_grid(s_grid)
    wanted = checks_opt.split(",")
    N = len(spec)
    rows, summary = [], {}
    try:
        for s in grid:
            row = [run.dec(s)]
            if "eigen" in wanted:
                r = darboux.eigen_residual(spec, N, s, run.prec)
                row.append(run.dec(r, 64))
                summary["max_eigen"] = max(summary.get("max_eigen", mpf(0)), r)
            if "potential" in wanted:
                g = abs(darboux.ladder_W(spec, N - 1, s, run.prec)
                        - darboux.ladder_W_factorized(spec, N, s, run.prec))
                row.append(run.dec(g, 64))
                summary["max_two_route"] = max(
                    summary.get("max_two_route", mpf(0)), g)
            rows.append(row)
    except darboux.NodeEncountered as exc:
        _fail(f"NodeEncountered: {exc}")
    header = (["s"] + (["eigen_residual"] if "eigen" in wanted else [])
              + (["two_route_gap"] if "potential" in wanted else []))
    if csv_out:
        _write_csv(csv_out, header, rows)
    run.emit("darboux",
             {"kappas": kappas, "kinds": ",".join(kin), "checks": checks_opt,
              "s_grid": s_grid},
             {"summary": {k: run.dec(v, 64) for k, v in sorted(summary.items())},
              "csv": csv_out,
              "rows": [dict(zip(header, r)) for r in rows]})


# ---------------------------------------------------------------------------
# semiclassical


@main.group("semiclassical")
def semiclassical_grp():
    """Semiclassical radial profile and comparison with the exact series."""


@semiclassical_grp.command("compare")
@click.option("--order", type=int, default=9)
@pass_run
def semi_compare(run: Run, order):
    """Order-by-order coefficient table."""
    table = semiclassical.quantum_compare(order)
    run.emit("semiclassical compare", {"order": order}, table)


@semiclassical_grp.command("invert")
@click.option("--x", "x", required=True)
@pass_run
def semi_invert(run: Run, x):
    """3 r^2 at x = 9 rtilde, by the closed cube-root form."""
    val = semiclassical.invert_radial(rat_to_mpf(rat(x), run.prec + 16), run.prec)
    run.emit("semiclassical invert", {"x": x}, {"three_r_squared": run.dec(val)})


# ---------------------------------------------------------------------------
# special functions


@main.command("bessel")
@click.option("--kind", type=click.Choice(["I", "K"]), required=True)
@click.option("--nu", default="1/6", help="Order as an exact fraction.")
@click.option("--x", "x", required=True)
@pass_run
def bessel_cmd(run: Run, kind, nu, x):
    """Modified Bessel value at arbitrary precision."""
    try:
        val = specfun.bessel_IK(kind, Q(rat(nu)), rat_to_mpf(rat(x), run.prec + 32), run.prec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    run.emit("bessel", {"kind": kind, "nu": nu, "x": x},
             {"value": run.dec(val)})


# ---------------------------------------------------------------------------
# umbrella


@main.command("verify-paper")
@click.option("--quick", is_flag=True, help="Reduced depths, same structure.")
@pass_run
def verify_paper(run: Run, quick):
    """Run all thirteen verification gates; exit 0 iff every gate passes."""
    results = verify.run_all(quick=quick)
    checks = {f'criterion_{r["id"]}': ("pass" if r["passed"] else "FAIL")
              for r in results}
    run.emit("verify-paper", {"quick": quick}, results, checks=checks)
    if not all(r["passed"] for r in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
