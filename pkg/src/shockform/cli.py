"""Command line front end: ``shockform profile|verify|sweep``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage,
validation or infrastructure error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import battery, verification as v
from .scenario import ScenarioError, burgers_standard, exponential_standard, load_scenario
from .solution import ValidationError, WeakAsymptoticSolution, sample_profile

log = logging.getLogger("shockform")

BUILTIN = {"burgers": burgers_standard, "exp": exponential_standard}


class UsageError(Exception):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def _tag(x):
    # shortest round-trip form, for file names
    return repr(float(x))


def write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) if not isinstance(x, str) else x for x in row])
    return buf.getvalue()


def _floats(text, name):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError(f"--{name}: empty list")
    return vals


def _scenario(arg):
    if arg in BUILTIN:
        return BUILTIN[arg]()
    return load_scenario(arg)


def _config(args):
    s = _scenario(args.scenario)
    eps = _floats(args.eps, "eps")
    for e in eps:
        if not 0 < e <= 0.5:
            raise UsageError(f"--eps: values must lie in (0, 0.5], got {e}")
    times = []
    if getattr(args, "t", None):
        times = [x * s.t_star if args.t_star_units else x for x in _floats(args.t, "t")]
        for t in times:
            if not 0 <= t <= 2 * s.t_star * (1 + 1e-12):
                raise UsageError(f"--t: values must lie in [0, 2 t*] = [0, {2 * s.t_star:.6g}]")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise UsageError(f"--out: directory {out} is not writable")
    return s, eps, times, out


def cmd_profile(args):
    s, eps_list, times, out = _config(args)
    times = times or [0.5 * s.t_star, 1.5 * s.t_star]
    lo = args.x_lo if args.x_lo is not None else s.x_star - 3.0
    hi = args.x_hi if args.x_hi is not None else s.x_star + 3.0
    for e in eps_list:
        sol = WeakAsymptoticSolution(s, e, lam=args.omega_lambda)
        for t in times:
            x, ue, ur = sample_profile(sol, t, lo, hi, args.n)
            name = out / f"profile_t{_tag(t)}_eps{_tag(e)}.csv"
            write_atomic(name, _csv_text(["x", "u_eps", "u_ref"], zip(x, ue, ur)))
            log.info("wrote %s", name)
        ts = np.linspace(0.0, 2.0 * s.t_star, args.t_points)
        rows = [(t, sol.traj.phi(1, t), sol.traj.phi(2, t), s.x_star + s.c * (t - s.t_star))
                for t in ts]
        name = out / f"trajectories_eps{_tag(e)}.csv"
        write_atomic(name, _csv_text(["t", "phi1", "phi2", "shock_line"], rows))
        log.info("wrote %s", name)
    return 0


def cmd_verify(args):
    s, eps_list, _, out = _config(args)
    if len(eps_list) < 3:
        raise UsageError("--eps: verify needs at least 3 values for rate fits")
    names = args.check or None
    core = [n for n in names if n != "inversion"] if names else None
    try:
        results = battery.run(s, core, eps_list) if core is None or core else []
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    # sampled round trips of the characteristic inversion
    if not names or "inversion" in names:
        results.append(_inversion_check(s, eps_list, args.seed))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    write_atomic(out / "report.json", v.report_json(results, s.to_dict()) + "\n")
    return 0 if all(r.passed for r in results) else 1


def _inversion_check(s, eps_list, seed, n=20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for e in eps_list:
        fld = WeakAsymptoticSolution(s, e).field
        for x0, t in zip(rng.uniform(s.a2, s.a1, n), rng.uniform(0, 2 * s.t_star, n)):
            sl = fld.slice(t)
            worst = max(worst, abs(sl.invert(sl(x0)) - x0))
    return v.CheckResult("inversion", worst <= 1e-8, epsilons=list(eps_list), values=[worst],
                         detail=f"max round-trip error={worst:.2e} (seed={seed})")


def cmd_sweep(args):
    s, eps_list, times, out = _config(args)
    if len(eps_list) < 3:
        raise UsageError("--eps: sweep needs at least 3 values")
    times = times or [0.5 * s.t_star, 1.5 * s.t_star]
    sols = {e: WeakAsymptoticSolution(s, e) for e in eps_list}
    slopes = {}
    rows = []
    for t in times:
        for k, label in enumerate(("left", "straddle", "right")):
            pairs = []
            for e in eps_list:
                eta = v.residual_test_functions(s, sols[e], t)[k]
                val = v.weak_residual(sols[e], t, eta)
                rows.append((e, label, t, val))
                pairs.append((e, val))
            slopes[f"residual/{label}/t={_tag(t)}"] = v.fit_rate(pairs).slope
    text = _csv_text(["eps", "test_function", "t", "value"],
                     [(e, lab, t, val) for e, lab, t, val in rows])
    write_atomic(out / "sweep_residual.csv", text + "# " + json.dumps(slopes, sort_keys=True) + "\n")
    l1_rows, l1_slopes = [], {}
    for t in sorted(set([0.0] + times)):
        pairs = [(e, v.l1_distance(sols[e], t)) for e in eps_list]
        l1_rows += [(e, t, val) for e, val in pairs]
        l1_slopes[f"l1/t={_tag(t)}"] = v.fit_rate(pairs).slope
    text = _csv_text(["eps", "t", "value"], l1_rows)
    write_atomic(out / "sweep_l1.csv", text + "# " + json.dumps(l1_slopes, sort_keys=True) + "\n")
    for k, val in {**slopes, **l1_slopes}.items():
        print(f"{k}: slope={val:.4f}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="shockform",
                                description="Weak asymptotics of shock formation for u_t + f(u)_x = 0")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (("profile", cmd_profile, "write u_eps / u_ref profiles and trajectories"),
                            ("verify", cmd_verify, "run the verification battery"),
                            ("sweep", cmd_sweep, "write convergence tables")):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--scenario", default="burgers",
                        help="scenario JSON file, or a builtin: burgers, exp")
        default_eps = "0.05" if name == "profile" else ",".join(str(e) for e in v.EPS_SWEEP)
        sp.add_argument("--eps", default=default_eps, help="comma-separated eps values")
        sp.add_argument("--t", default=None, help="comma-separated times")
        sp.add_argument("--t-star-units", action="store_true",
                        help="read --t as multiples of the breaking time")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "profile":
            sp.add_argument("--n", type=int, default=2001, help="grid points per profile")
            sp.add_argument("--x-lo", type=float, default=None)
            sp.add_argument("--x-hi", type=float, default=None)
            sp.add_argument("--t-points", type=int, default=battery.T_GRID_POINTS)
            sp.add_argument("--omega-lambda", type=float, default=5.0)
        if name == "verify":
            sp.add_argument("--check", action="append", default=[],
                            help=f"run only this check (repeatable): {', '.join(battery.CHECKS)}, inversion")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValidationError, v.VerificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # infrastructure failure
        log.exception("unexpected failure")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
