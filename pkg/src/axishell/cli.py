"""Command-line front end: classification, asymptotic constants, sweeps, checks.

Subcommands
    classify     shell class, potential minimum, essential-spectrum range
    asymptotics  per-class constants and power laws as JSON
    sweep1d      dump the 1D optimization curve (gamma scan or k scan)
    sweep2d      2D wavenumber sweeps, CSV records plus a summary table
    trace        midline radial-mode trace at one (eps, k) as CSV
    torus-sweep  toroidal constants versus the arc-center offset
    symbols      dump the symbol matrices at one point (debug aid)
    verify       run the identity suite and print residuals

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, asymptotics, fem1d, lame2d, symbols
from .errors import AxishellError
from .geometry import classify, essential_spectrum_range, frame_at
from .profiles import ShellProfile, preset


def _load_profile(args) -> ShellProfile:
    if getattr(args, "model", None):
        return preset(args.model)
    if getattr(args, "profile", None):
        return ShellProfile.from_json(Path(args.profile).read_text())
    raise AxishellError("need --model or --profile")


def _parse_eps_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty eps list")
    for v in values:
        if not 0.0 < v <= 0.25:
            raise argparse.ArgumentTypeError(f"eps = {v} outside (0, 0.25]")
    return values


def _parse_mesh(text: str) -> tuple[int, int]:
    try:
        nm, nt = text.lower().split("x")
        return int(nm), int(nt)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"mesh spec {text!r} is not of the form NxM"
        ) from None


def _csv_lines(meta: dict, columns: list[str], rows: list[list]) -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta_str = " ".join(f"{k}={v}" for k, v in meta.items())
    lines = [f"# axishell {__version__} {meta_str} generated={stamp}"]
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, float):
                cells.append(f"{v:.12g}")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _emit(text: str, out_dir: str | None, filename: str) -> None:
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / filename).write_text(text)
        print(f"wrote {path / filename}")
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    profile = _load_profile(args)
    cls = classify(profile, n_samples=args.samples)
    lo, hi = essential_spectrum_range(profile)
    zs = np.linspace(*profile.interval, 513)
    adm = 1.0 + profile.df(zs) ** 2 + profile.f(zs) * np.array(
        [profile.jet(z, 2)[2] for z in zs]
    )
    doc = {
        "class": cls.tag.value,
        "z0": cls.z0,
        "boundary_minimum": cls.boundary_minimum,
        "admissible_min": float(adm.min()),
        "essential_spectrum": [lo, hi],
    }
    if cls.h0_minimum is not None:
        doc["H0_min"] = cls.h0_minimum.value
        doc["n_minima"] = len(cls.h0_minimum.branches)
    if cls.detail:
        doc["detail"] = cls.detail
    print(json.dumps(doc, indent=2))
    return 0


def cmd_asymptotics(args) -> int:
    profile = _load_profile(args)
    res = asymptotics.compute(profile, seed=args.seed)
    doc = res.to_dict()
    doc = {
        k: (float(f"{v:.6g}") if isinstance(v, float) else v) for k, v in doc.items()
    }
    if res.lambda2 is not None:
        doc["Lambda2"] = float(f"{res.lambda2:.6g}")
    print(json.dumps(doc, indent=2))
    return 0


def cmd_sweep1d(args) -> int:
    profile = _load_profile(args)
    cls = classify(profile)
    tag = cls.tag.value
    if tag in ("Cylinder", "Cone", "TorusElliptic"):
        if tag == "TorusElliptic":
            res = asymptotics.toroidal_constants(profile, cls, seed=args.seed)
            _, scan = asymptotics._toroidal_scan(profile, res.a0, 128, seed=args.seed)
        else:
            res = asymptotics.optimize_gamma_parabolic(profile, cls, seed=args.seed)
            scan = asymptotics._parabolic_scan(profile, 128, seed=args.seed)
        grid = np.geomspace(args.gamma_min, args.gamma_max, args.n_points)
        rows = [[float(g), float(scan.mu1(g))] for g in grid]
        meta = {"model": args.model or "custom", "kind": "gamma-scan",
                "gamma_opt": f"{res.gamma:.8g}", "a1": f"{res.a1:.8g}"}
        _emit(_csv_lines(meta, ["gamma", "mu1"], rows), args.out, "sweep1d.csv")
        return 0
    res = asymptotics.compute(profile, cls, seed=args.seed)
    eps = args.eps_list[0] if args.eps_list else 1e-4
    k_center = res.gamma * eps ** float(-res.beta)
    k_opt, lam_min, data = asymptotics.elliptic_k_minimization(profile, eps, seed=args.seed)
    ks = np.geomspace(0.4 * k_center, 2.5 * k_center, args.n_points)
    K_h2, K_h0, K_b0, M = data["K_h2"], data["K_h0"], data["K_b0"], data["M"]
    rows = []
    for k in ks:
        K = K_h0 + k**-2 * K_h2 + eps**2 * k**4 * K_b0
        lam = fem1d.smallest_eigenpairs(K, M, m=1, seed=args.seed)[0].eigenvalue
        rows.append([float(k), float(lam)])
    meta = {"model": args.model or "custom", "kind": "k-scan", "eps": f"{eps:g}",
            "k_opt": f"{k_opt:.8g}", "lambda_min": f"{lam_min:.8g}"}
    _emit(_csv_lines(meta, ["k", "lambda1"], rows), args.out, "sweep1d.csv")
    return 0


def _sweep2d_one(profile: ShellProfile, eps: float, mesh_spec, degree: int, seed: int):
    if mesh_spec is None:
        nm, nt = lame2d.default_mesh_size(eps)
    else:
        nm, nt = mesh_spec
    mesh = lame2d.build_meridian_mesh(profile, eps, nm, nt)
    sweep = lame2d.k_sweep(profile, eps, mesh=mesh, degree=degree, seed=seed)
    return eps, (nm, nt), sweep


def _sweep2d_worker(payload):
    doc, eps, mesh_spec, degree, seed = payload
    profile = ShellProfile.from_dict(doc)
    eps, mesh_used, sweep = _sweep2d_one(profile, eps, mesh_spec, degree, seed)
    records = [[r.eps, r.k, r.lambda1, r.dof_count, r.residual] for r in sweep.records]
    return eps, mesh_used, sweep.k_opt, sweep.lambda1, sweep.flagged, records


def cmd_sweep2d(args) -> int:
    profile = _load_profile(args)
    res = asymptotics.compute(profile, seed=args.seed)
    eps_list = args.eps_list or [0.1, 0.05, 0.02, 0.01]
    mesh_spec = args.mesh
    payloads = [
        (profile.to_dict(), eps, mesh_spec, args.degree, args.seed) for eps in eps_list
    ]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep2d_worker, payloads))
    else:
        results = [_sweep2d_worker(p) for p in payloads]

    summary_rows = []
    failures = 0
    for eps, mesh_used, k_opt, lam1, flagged, records in results:
        meta = {"model": args.model or "custom", "eps": f"{eps:g}",
                "mesh": f"{mesh_used[0]}x{mesh_used[1]}", "degree": args.degree}
        name = f"sweep2d_{args.model or 'profile'}_eps{eps:g}.csv"
        _emit(_csv_lines(meta, ["eps", "k", "lambda1", "dofs", "residual"], records),
              args.out, name)
        pred = asymptotics.predict(res, eps)
        summary_rows.append([eps, k_opt, pred.k_int, lam1, pred.m1,
                             "flagged" if flagged else "ok"])
        failures += int(flagged)
    meta = {"model": args.model or "custom", "gamma": f"{res.gamma:.6g}",
            "beta": str(res.beta)}
    text = _csv_lines(meta, ["eps", "k_observed", "k_predicted", "lambda1", "m1", "status"],
                      summary_rows)
    _emit(text, args.out, f"sweep2d_{args.model or 'profile'}_summary.csv")
    return 3 if failures else 0


def cmd_trace(args) -> int:
    """Midline radial-mode trace at one (eps, k) as CSV (z, u_r)."""
    profile = _load_profile(args)
    eps = args.eps_list[0] if args.eps_list else 0.01
    if args.mesh:
        nm, nt = args.mesh
    else:
        nm, nt = lame2d.default_mesh_size(eps)
    mesh = lame2d.build_meridian_mesh(profile, eps, nm, nt)
    if args.k is None:
        res = asymptotics.compute(profile, seed=args.seed)
        k = asymptotics.predict(res, eps).k_int
    else:
        k = args.k
    system = lame2d.assemble_fourier_lame(mesh, k, args.degree)
    rec, vec = lame2d.first_eigenpair_2d(system, seed=args.seed)
    trace = lame2d.midline_mode_trace(system, vec)
    meta = {"model": args.model or "custom", "eps": f"{eps:g}", "k": k,
            "mesh": f"{nm}x{nt}", "degree": args.degree,
            "lambda1": f"{rec.lambda1:.10g}", "argmax_z": f"{trace.argmax_z:.6g}",
            "half_width": f"{trace.half_width:.6g}"}
    rows = [[float(z), float(u)] for z, u in zip(trace.z, trace.u_r)]
    _emit(_csv_lines(meta, ["z", "u_r"], rows), args.out,
          f"trace_{args.model or 'profile'}_eps{eps:g}_k{k}.csv")
    return 0


def _torus_worker(payload):
    radius, z_center, interval, r_c = payload
    return asymptotics.toroidal_sweep(radius, z_center, interval, [r_c])[0]


def cmd_torus_sweep(args) -> int:
    if args.r_min >= args.r_max or args.step <= 0:
        print("usage error: need r-min < r-max and a positive step", file=sys.stderr)
        return 2
    grid = np.arange(args.r_min, args.r_max + 0.5 * args.step, args.step)
    if len(grid) == 0:
        print("usage error: empty r-grid", file=sys.stderr)
        return 2
    interval = tuple(float(v) for v in args.interval.split(","))
    if args.jobs > 1:
        payloads = [(args.radius, args.z_center, interval, float(r)) for r in grid]
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows_raw = list(pool.map(_torus_worker, payloads))
    else:
        rows_raw = asymptotics.toroidal_sweep(
            args.radius, args.z_center, interval, grid, E=1.0, nu=0.3
        )
    rows = []
    n_err = 0
    for r in rows_raw:
        ok = not r["error"]
        n_err += int(not ok)
        rows.append([r["r_circ"],
                     r["Lambda2"] if ok else "nan",
                     r["gamma_min"] if ok else "nan",
                     r["a1"] if ok else "nan",
                     r["error"] or "ok"])
    meta = {"radius": args.radius, "z_center": args.z_center,
            "interval": args.interval}
    _emit(_csv_lines(meta, ["r_circ", "Lambda2", "gamma_min", "a1", "status"], rows),
          args.out, "torus_sweep.csv")
    return 0


def cmd_symbols(args) -> int:
    profile = _load_profile(args)
    fr = frame_at(profile, args.z)
    mats, red = symbols.symbols_at(fr, lam0=args.lam0, lam1=args.lam1)

    def sym_doc(s):
        return {"coeffs": list(s.coeffs), "imag": s.imag}

    doc = {
        "z": args.z,
        "M0": [[float(v) for v in row] for row in mats.M0],
        "M1": [[sym_doc(s) for s in row] for row in mats.M1],
        "M2": [[sym_doc(s) for s in row] for row in mats.M2],
        "H0": red.H0,
        "H2": sym_doc(red.H2),
        "H3": sym_doc(red.H3),
        "H4_principal": red.H4_principal,
        "H4_parabolic": sym_doc(red.H4_parabolic),
        "V1": [sym_doc(s) for s in red.V1],
        "V2": [sym_doc(s) for s in red.V2],
        "V3": [sym_doc(s) for s in red.V3],
    }
    print(json.dumps(doc, indent=2))
    return 0


def _verify_checks(args):
    """Yield (name, residual, tolerance, passed)."""
    rng = np.random.default_rng(args.seed)
    presets = [preset(m) for m in "ABDHL"]

    worst = 0.0
    for p in presets:
        zs = rng.uniform(*p.interval, size=20)
        for z in zs:
            fr = frame_at(p, float(z))
            worst = max(worst, abs(fr.H0 - p.E * fr.b_zz**2) / max(fr.H0, 1e-3))
    yield "H0 equals E b_zz^2", worst, 1e-14, worst <= 1e-14

    worst = 0.0
    for p in presets:
        for z in rng.uniform(*p.interval, size=20):
            fr = frame_at(p, float(z))
            h2 = symbols.h2_coefficients(fr, 0.0)
            curv = 2 * p.E * (fr.f**2 / fr.s**2) * fr.b_zz * (fr.b_pp - fr.b_zz)
            worst = max(worst, abs(-h2[2] - curv) / max(abs(curv), 1e-3))
    yield "second-order coefficient curvature identity", worst, 1e-12, worst <= 1e-12

    worst = 0.0
    for p in presets:
        for z in rng.uniform(*p.interval, size=20):
            fr = frame_at(p, float(z))
            _, red = symbols.symbols_at(fr)
            curv = p.E * (fr.f**4 / fr.s**4) * (fr.b_pp - 3 * fr.b_zz) * (fr.b_pp - fr.b_zz)
            worst = max(worst, abs(red.H4_principal - curv) / max(abs(curv), 1e-3))
    yield "fourth-order principal coefficient identity", worst, 1e-12, worst <= 1e-12

    worst = 0.0
    for p in presets:
        for z in rng.uniform(*p.interval, size=10):
            worst = max(worst, symbols.verify_H0_recurrence(frame_at(p, float(z))))
    yield "H0 elimination recurrence", worst, 1e-12, worst <= 1e-12

    worst = 0.0
    for p in presets:
        for z in rng.uniform(*p.interval, size=5):
            fr = frame_at(p, float(z))
            worst = max(worst, symbols.verify_V2_equation(fr, [0.0, 1.0, 0.5, -0.25]))
    yield "V2 elimination equation", worst, 1e-10, worst <= 1e-10

    ok = True
    for p in presets[:2]:
        for z in rng.uniform(*p.interval, size=5):
            mats, _ = symbols.symbols_at(frame_at(p, float(z)))
            m1_zero = [(0, 0), (1, 1), (2, 0), (0, 2), (2, 2)]
            m2_zero = [(0, 1), (1, 0), (1, 2), (2, 1)]
            ok &= all(mats.M1[i][j].is_zero for i, j in m1_zero)
            ok &= all(mats.M2[i][j].is_zero for i, j in m2_zero)
    yield "symbol sparsity pattern", 0.0 if ok else 1.0, 0.0, ok

    beam = ShellProfile("affine", (0.0, 1.0), coeffs=(1.0,))
    mesh = fem1d.Mesh1D.uniform((0.0, 1.0), 64)
    asm = fem1d.assemble_h20(beam, 1.0, 0.0, mesh)
    sym_exact = np.array_equal(asm.stiffness, asm.stiffness.T)
    yield "assembled matrix exact symmetry", 0.0 if sym_exact else 1.0, 0.0, sym_exact

    from scipy.optimize import brentq

    kappa = brentq(lambda x: math.cos(x) * math.cosh(x) - 1.0, 4.0, 5.5, xtol=1e-14)
    lam_beam = fem1d.smallest_eigenpairs(asm, m=1)[0].eigenvalue
    res_beam = abs(lam_beam - kappa**4) / kappa**4
    yield "clamped-beam eigenvalue vs characteristic root", res_beam, 1e-5, res_beam <= 1e-5

    za = asymptotics.airy_first_zero()
    res_airy = abs(asymptotics.airy_ai(-za))
    yield "reversed-Airy first zero", res_airy, 1e-12, res_airy <= 1e-12

    prof2d = _load_profile(args) if (args.model or args.profile) else preset("D")
    mesh2 = lame2d.build_meridian_mesh(prof2d, 0.1, 4, 2)
    fam = lame2d.get_family(mesh2, degree=3)
    k = 3
    Kp = (fam.A0 + k * fam.A1 + k * k * fam.A2).toarray()
    Km = (fam.A0 - k * fam.A1 + k * k * fam.A2).toarray()
    comp = fam.free % 3
    sgn = np.where(comp == 1, -1.0, 1.0)
    flip = np.abs(sgn[:, None] * Km * sgn[None, :] - Kp).max()
    scale = max(np.abs(Kp).max(), 1.0)
    yield "wavenumber sign-flip assembly identity", flip / scale, 1e-15, flip / scale <= 1e-15

    asym_2d = np.abs(Kp - Kp.T).max() / scale
    yield "2D stiffness symmetry", asym_2d, 1e-13, asym_2d <= 1e-13

    if args.model == "D" or (not args.model and not args.profile):
        resD = asymptotics.toroidal_constants(preset("D"))
        yield ("toroidal second-order eigenvalue positive", -resD.lambda2, 0.0,
               resD.lambda2 > 0.0)


def cmd_verify(args) -> int:
    failures = 0
    for name, residual, tol, passed in _verify_checks(args):
        status = "PASS" if passed else "FAIL"
        print(f"{status}  {name}: residual {residual:.3e} (tol {tol:g})")
        failures += int(not passed)
    if failures:
        print(f"{failures} check(s) failed")
        return 3
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axishell",
        description="Axisymmetric-shell classification, wavenumber asymptotics, "
        "and meridian eigenvalue sweeps",
    )
    parser.add_argument("--version", action="version", version=f"axishell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eps=False):
        p.add_argument("--model", choices=list("ABDHL"), help="built-in model")
        p.add_argument("--profile", help="profile JSON file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output directory (default: stdout)")
        if eps:
            p.add_argument("--eps", dest="eps_list", type=_parse_eps_list,
                           help="comma-separated half-thicknesses in (0, 0.25]")

    p = sub.add_parser("classify", help="classify a shell profile")
    common(p)
    p.add_argument("--samples", type=int, default=1024)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("asymptotics", help="per-class constants and laws")
    common(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("sweep1d", help="dump the 1D optimization curve")
    common(p, eps=True)
    p.add_argument("--gamma-min", type=float, default=0.3)
    p.add_argument("--gamma-max", type=float, default=30.0)
    p.add_argument("--n-points", type=int, default=64)
    p.set_defaults(func=cmd_sweep1d)

    p = sub.add_parser("sweep2d", help="2D wavenumber sweeps")
    common(p, eps=True)
    p.add_argument("--mesh", type=_parse_mesh,
                   help="meridian x thickness cells, e.g. 12x2")
    p.add_argument("--degree", type=int, default=lame2d.DEFAULT_DEGREE)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep2d)

    p = sub.add_parser("trace", help="midline mode trace at one (eps, k)")
    common(p, eps=True)
    p.add_argument("--k", type=int, help="wavenumber (default: 1D prediction)")
    p.add_argument("--mesh", type=_parse_mesh,
                   help="meridian x thickness cells, e.g. 16x2")
    p.add_argument("--degree", type=int, default=lame2d.DEFAULT_DEGREE)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("torus-sweep", help="toroidal constants vs arc offset")
    p.add_argument("--r-min", type=float, default=-3.0)
    p.add_argument("--r-max", type=float, default=-0.1)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--z-center", type=float, default=0.0)
    p.add_argument("--interval", default="-1,1")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default: stdout)")
    p.set_defaults(func=cmd_torus_sweep)

    p = sub.add_parser("symbols", help="dump symbol matrices at one z (debug)")
    common(p)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--lam0", type=float, default=0.0)
    p.add_argument("--lam1", type=float, default=0.0)
    p.set_defaults(func=cmd_symbols)

    p = sub.add_parser("verify", help="run the identity suite")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AxishellError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
