"""Command-line front end.

Subcommands:

  verify   identity suite (commutation tables, adjoint symmetry,
           symplectic condition, trace identities, coefficient maps)
  evolve   trajectory CSV for one of the three models
  map      cross-model maps and form-invariance transformations
  domain   closed-form and numeric positivity bounds
  steady   stationary state, moments, kernel residual

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 degenerate kernel.  Reports are JSON (checks as {check, residual,
threshold, pass}), time series are RFC-4180 CSV; all numbers carry 12
significant digits.  Output is deterministic for a fixed configuration
and seed.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np
from scipy.linalg import expm

from . import fourdim, gaussian
from .fock import coherent_projector, fock_projector, random_density
from .generators import (COMMUTATION_TABLE, CONSERVING, GENERATOR_NAMES,
                         UNITARY, build_generator, commutation_residuals,
                         ten_generators, trace_residuals)
from .liouville import adjoint_symmetry_residual, safe_block_residual
from .models import (DegenerateKernelError, ModelParams, evolve,
                     model_coefficients, model_generator, steady_state)
from .transforms import (TransformSequence, apply_sequence, coefficient_map,
                         derivative_map, gibbs_from_vacuum)

DEFAULT_SEED = 20240915


def _sig(x):
    """Round to 12 significant digits for stable, diffable output."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, complex):
        return {"re": _sig(x.real), "im": _sig(x.imag)}
    if isinstance(x, dict):
        return {k: _sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_sig(v) for v in x]
    return x


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as f:
            f.write(text)


def _emit_json(obj, path):
    _write(json.dumps(_sig(obj), indent=2) + "\n", path)


def _check(name, residual, threshold, must_exceed=False):
    residual = float(residual)
    ok = residual > threshold if must_exceed else residual <= threshold
    return {"check": name, "residual": residual, "threshold": threshold,
            "pass": bool(ok)}


# ------------------------------------------------------------------ verify
def cmd_verify(args):
    n, tol = args.fock_dim, args.tol
    if n < 8:
        raise ValueError("fock-dim must be at least 8 for the safe-block "
                         "identity checks")
    rng = np.random.default_rng(args.seed)
    gens = ten_generators(n)
    checks = []

    checks.append(_check("table-4d", fourdim.table_residual(), 1e-13))

    pair_res = commutation_residuals(n, gens=gens)
    for i, x in enumerate(GENERATOR_NAMES):
        for y in GENERATOR_NAMES[i + 1:]:
            entry = COMMUTATION_TABLE[x][y]
            target = "0" if entry is None else (
                entry[1] if entry[0] == 1 else f"{entry[0]:g}*{entry[1]}")
            checks.append(_check(f"commutator[{x},{y}]={target}",
                                 pair_res[(x, y)], tol))

    for name in GENERATOR_NAMES:
        checks.append(_check(f"adjoint-symmetry[{name}]",
                             adjoint_symmetry_residual(gens[name], n), 1e-11))
    for name in UNITARY + CONSERVING:
        E = expm(0.5 * gens[name])
        checks.append(_check(f"adjoint-symmetry[exp(0.5*{name})]",
                             adjoint_symmetry_residual(E, n), 1e-11))
    E = expm(0.5j * gens["O+"])
    checks.append(_check("non-symmetry[exp(0.5i*O+)]",
                         adjoint_symmetry_residual(E, n), 1e-6,
                         must_exceed=True))

    for theta in (0.3, 1.0):
        for name in GENERATOR_NAMES:
            S = expm(theta * fourdim.REP[name])
            checks.append(_check(f"symplectic[{name},theta={theta}]",
                                 fourdim.symplectic_residual(S), 1e-12))
    checks.append(_check("completeness", fourdim.completeness_residual(),
                         1e-14))
    checks.append(_check("orthogonality", fourdim.orthogonality_residual(),
                         1e-14))
    checks.append(_check("ladder-action", fourdim.ladder_action_residual(n),
                         tol))

    worst = {name: 0.0 for name in GENERATOR_NAMES}
    for _ in range(20):
        rho = random_density(n, rng, support=n - 4)
        for name, r in trace_residuals(rho, gens, n).items():
            worst[name] = max(worst[name], r)
    for name in GENERATOR_NAMES:
        kind = "trace-moment" if name.endswith("-") else "trace-conserving"
        checks.append(_check(f"{kind}[{name}]", worst[name], tol))

    # coefficient maps: exact finite-parameter check in the 4x4
    # representation, first-order commutator check on the Fock matrices
    worst4 = {name: 0.0 for name in UNITARY + CONSERVING}
    for _ in range(20):
        c = tuple(rng.uniform(-1, 1, 7))
        for name in UNITARY + CONSERVING:
            p = float(rng.uniform(-1, 1))
            step = TransformSequence([(name, p)]).steps[0]
            S = expm(p * fourdim.REP[name])
            lhs = S @ fourdim.rep_of_coefficients(c) @ np.linalg.inv(S)
            rhs = fourdim.rep_of_coefficients(coefficient_map(step, c))
            worst4[name] = max(worst4[name], np.abs(lhs - rhs).max())
    for name in UNITARY + CONSERVING:
        checks.append(_check(f"coefficient-map-4d[{name}]", worst4[name],
                             1e-12))

    for name in UNITARY + CONSERVING:
        c = tuple(rng.uniform(-1, 1, 7))
        K = build_generator(c, gens, n)
        # the scalar part of K commutes, and the derivative map never
        # moves g0, so the bracket closes on the ten-generator span
        lhs = gens[name] @ K - K @ gens[name]
        rhs = build_generator(derivative_map(name, c), gens, n)
        checks.append(_check(f"coefficient-map-rate[{name}]",
                             safe_block_residual(lhs - rhs, n), tol))

    failed = [c for c in checks if not c["pass"]]
    report = {
        "fock_dim": n, "tol": tol, "seed": args.seed,
        "checks": checks,
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    _emit_json(report, args.out)
    return 0 if not failed else 1


# ------------------------------------------------------------------ evolve
def _initial_state(spec, n):
    kind, _, arg = spec.partition(":")
    if kind == "vacuum":
        return fock_projector(0, n)
    if kind == "fock":
        k = int(arg)
        if not 0 <= k < n:
            raise ValueError(f"fock level {k} outside cutoff {n}")
        return fock_projector(k, n)
    if kind == "gibbs":
        return gibbs_from_vacuum(float(arg), n)[0]
    if kind == "coherent":
        return coherent_projector(complex(arg), n)
    raise ValueError(f"unknown initial state {spec!r}")


def _model_params(args):
    return ModelParams(args.model.upper(), args.omega0, args.gamma, args.b,
                       getattr(args, "d", 0.0))


def cmd_evolve(args):
    p = _model_params(args)
    if args.steps < 1 or args.t_max <= 0:
        raise ValueError("need t-max > 0 and steps >= 1")
    n = args.fock_dim
    rho0 = _initial_state(args.init, n)
    K = model_generator(p, n)
    times = np.linspace(0.0, args.t_max, args.steps + 1)
    traj = evolve(K, rho0, times)

    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["t", "re_x", "re_p", "x2", "p2", "purity", "trace",
                "min_eig"])
    m = traj.moments
    for i, t in enumerate(times):
        w.writerow([f"{v:.12g}" for v in
                    (t, m["x"][i], m["p"][i], m["x2"][i], m["p2"][i],
                     m["purity"][i], m["trace"][i], m["min_eig"][i])])
    _write(buf.getvalue(), args.out)
    return 0


# --------------------------------------------------------------------- map
def _params_dict(p):
    return {"model": p.model, "omega0": p.omega0, "gamma": p.gamma,
            "b": p.b, "d": p.d}


def _map_report(p, p2, seq):
    S = seq.rep4()
    Sinv = seq.inverse().rep4()
    lhs = S @ fourdim.rep_of_coefficients(model_coefficients(p)) @ Sinv
    rhs = fourdim.rep_of_coefficients(model_coefficients(p2))
    residual = float(np.abs(lhs - rhs).max())
    flow = apply_sequence(seq, model_coefficients(p))
    flow_res = float(max(abs(a - b) for a, b in
                         zip(flow, model_coefficients(p2))))
    return {
        "steps": [{"generator": s.generator, "parameter": s.parameter}
                  for s in seq],
        "source": {**_params_dict(p),
                   "coefficients": list(model_coefficients(p))},
        "target": {**_params_dict(p2),
                   "coefficients": list(model_coefficients(p2))},
        "conjugation_residual": residual,
        "coefficient_flow_residual": flow_res,
        "threshold": 1e-8,
        "pass": bool(residual <= 1e-8 and flow_res <= 1e-8),
    }


def cmd_map(args):
    from .models import form_invariance, map_cl_to_hpz, map_kl_to_cl
    if args.invariance:
        p = _model_params(args)
        if args.invariance == "thermal":
            pprime, seq = form_invariance("thermal", p, args.alpha)
        elif args.invariance == "translate":
            pprime, seq = form_invariance("translate", p, args.beta)
        else:
            pprime, seq = form_invariance("hpz", p, (args.phi, args.xi))
        report = {"mode": f"invariance:{args.invariance}",
                  **_map_report(p, pprime, seq)}
    else:
        args.model = args.src
        if (args.src, args.dst) == ("kl", "cl"):
            p = _model_params(args)
            pprime, seq = map_kl_to_cl(p)
        elif (args.src, args.dst) == ("cl", "hpz"):
            p = _model_params(args)
            pprime, seq = map_cl_to_hpz(p, args.zeta)
        else:
            raise ValueError(f"no map from {args.src!r} to {args.dst!r}; "
                             "available: kl->cl, cl->hpz")
        report = {"mode": f"{args.src}->{args.dst}",
                  **_map_report(p, pprime, seq)}
    _emit_json(report, args.out)
    return 0


# ------------------------------------------------------------------ domain
def cmd_domain(args):
    s = gaussian.StationaryGaussian(args.b, args.d, args.omega0)
    closed = gaussian.domain_bound(args.kind, s, phi=args.phi,
                                   gamma=args.gamma)
    reference = closed.get("derived", closed.get("bound"))
    numeric = {}
    if args.kind == "cl2hpz":
        bound = closed["bound"]
        numeric["upper"] = gaussian.positivity_boundary(
            "cl2hpz", s, n=args.fock_dim)
        numeric["lower"] = gaussian.positivity_boundary(
            "cl2hpz", s, n=args.fock_dim,
            bracket=(max(-bound - 0.4, -2 * s.b + 0.02), -bound + 0.4))
        agree = (abs(numeric["upper"] - bound) <= 1e-3
                 and abs(numeric["lower"] + bound) <= 1e-3)
    else:
        numeric["boundary"] = gaussian.positivity_boundary(
            args.kind, s, n=args.fock_dim, phi=args.phi)
        agree = abs(numeric["boundary"] - reference) <= 1e-3
    report = {
        "kind": args.kind,
        "base": {"b": s.b, "d": s.d, "omega0": s.omega0},
        "closed_form": closed,
        "numeric": numeric,
        "numeric_tol": 1e-3,
        "agree": bool(agree),
    }
    if args.kind == "hpz":
        report["phi"] = args.phi
    _emit_json(report, args.out)
    return 0


# ------------------------------------------------------------------ steady
def cmd_steady(args):
    p = _model_params(args)
    n = args.fock_dim
    K = model_generator(p, n)
    rho, info = steady_state(K, return_info=True)

    from .fock import momentum, position
    x_op, p_op = position(n), momentum(n)
    s = gaussian.StationaryGaussian(p.b, p.d, p.omega0)
    g = gaussian.gaussian_from_bd(s)
    pops = np.diag(rho).real
    report = {
        "model": p.model,
        "params": _params_dict(p),
        "fock_dim": n,
        "kernel_residual": info["residual"],
        "kernel_eigenvalue": complex(info["eigenvalue"]),
        "min_eig": info["min_eig"],
        "moments": {
            "x2": float(np.trace(x_op @ x_op @ rho).real),
            "p2": float(np.trace(p_op @ p_op @ rho).real),
            "x2_expected": s.x2,
            "p2_expected": s.p2,
        },
        "gaussian": {
            "mu": g.mu, "kappa": g.kappa, "nu": g.nu,
            "positive": bool(gaussian.is_positive(g)),
            "on_boundary": bool(abs(g.nu) <= 1e-9),
        },
        "populations": [float(v) for v in pops[:min(n, 16)]],
    }
    _emit_json(report, args.out)
    if args.populations:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["level", "population"])
        for k, v in enumerate(pops):
            w.writerow([k, f"{v:.12g}"])
        _write(buf.getvalue(), args.populations)
    return 0


# ------------------------------------------------------------------- wiring
def _add_model_args(sub, d_default=0.0):
    sub.add_argument("--model", choices=["kl", "cl", "hpz"], required=True)
    sub.add_argument("--omega0", type=float, default=1.0)
    sub.add_argument("--gamma", type=float, default=0.1)
    sub.add_argument("--b", type=float, default=1.0)
    sub.add_argument("--d", type=float, default=d_default)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="liosym",
        description="Superoperator algebra and symmetry maps for "
                    "damped-oscillator master equations")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None,
                        help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity suite",
                       parents=[common])
    v.add_argument("--fock-dim", type=int, default=12)
    v.add_argument("--tol", type=float, default=1e-10)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("evolve", help="integrate a trajectory, emit CSV",
                       parents=[common])
    _add_model_args(e)
    e.add_argument("--init", default="vacuum",
                   help="vacuum | fock:n | gibbs:alpha | coherent:z")
    e.add_argument("--t-max", type=float, default=50.0)
    e.add_argument("--steps", type=int, default=100)
    e.add_argument("--fock-dim", type=int, default=24)
    e.set_defaults(func=cmd_evolve)

    m = sub.add_parser("map", help="cross-model maps and form invariance",
                       parents=[common])
    m.add_argument("--from", dest="src", choices=["kl", "cl"])
    m.add_argument("--to", dest="dst", choices=["cl", "hpz"])
    m.add_argument("--invariance", choices=["thermal", "translate", "hpz"])
    m.add_argument("--model", choices=["kl", "cl", "hpz"], default="kl")
    m.add_argument("--omega0", type=float, default=1.0)
    m.add_argument("--gamma", type=float, default=0.1)
    m.add_argument("--b", type=float, default=1.0)
    m.add_argument("--d", type=float, default=0.0)
    m.add_argument("--alpha", type=float, default=0.0)
    m.add_argument("--beta", type=float, default=0.0)
    m.add_argument("--phi", type=float, default=0.0)
    m.add_argument("--xi", type=float, default=0.0)
    m.add_argument("--zeta", type=float, default=0.0)
    m.set_defaults(func=cmd_map)

    d = sub.add_parser("domain", help="positivity bounds, closed and "
                       "numeric", parents=[common])
    d.add_argument("--kind", required=True,
                   choices=["thermal", "translate", "hpz", "kl2cl",
                            "cl2hpz"])
    d.add_argument("--b", type=float, default=1.0)
    d.add_argument("--d", type=float, default=0.0)
    d.add_argument("--omega0", type=float, default=1.0)
    d.add_argument("--phi", type=float, default=0.0)
    d.add_argument("--gamma", type=float, default=None)
    d.add_argument("--fock-dim", type=int, default=30)
    d.set_defaults(func=cmd_domain)

    st = sub.add_parser("steady", help="stationary state report",
                        parents=[common])
    _add_model_args(st)
    st.add_argument("--fock-dim", type=int, default=30)
    st.add_argument("--populations", default=None,
                    help="also write a level,population CSV here")
    st.set_defaults(func=cmd_steady)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "map" and bool(args.invariance) == bool(args.src):
            raise ValueError("map needs either --invariance or --from/--to")
        return args.func(args)
    except DegenerateKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
