"""Command-line front end: eigs | sweep | spectrum | validate.

All commands are driven by an INI config (see ``config``) and write CSV
with fixed %.17g formatting and sorted rows, so identical configs produce
byte-identical outputs.  Exit codes: 0 success, 1 validation failure,
2 config error, 3 numerical failure.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import parse_config_file
from .errors import ConfigError, GeometryDegenerateError, NPShellError
from .geometry import LayeredGeometry, ShapeFunction, make_circle
from .perturbation import (
    assemble_perturbation_blocks,
    corrected_frequencies,
    first_order_corrections,
)
from .potentials import assemble_np_self, assemble_single_layer_self
from .resonance import disk_closed_form_frequencies
from .scattering import IncidentField, intensity_spectrum
from .spectrum import (
    assemble_block_operator,
    assemble_gram,
    disk_oracle_eigs,
    spectrum,
)


def _fmt(x):
    return f"{x:.17g}"


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _mode_table(geometry, n_families):
    """Eigenmodes, corrections and frequencies of the leading families."""
    n_max = 4 * n_families + 4
    block = assemble_block_operator(geometry)
    gram = assemble_gram(geometry)
    modes = spectrum(block, gram, n_max=n_max)
    blocks = assemble_perturbation_blocks(geometry)
    corrected = first_order_corrections(modes, blocks, gram)
    return corrected


def _is_disk_case(cfg):
    return (cfg.eps1 == 0.0 and cfg.eps2 == 0.0) or (
        not cfg.h1_cos and not cfg.h1_sin and not cfg.h2_cos and not cfg.h2_sin)


def cmd_eigs(cfg, out_dir):
    geometry = cfg.geometry()
    corrected = _mode_table(geometry, cfg.n_report)
    freqs = corrected_frequencies(corrected, cfg.omega_p)
    disk = _is_disk_case(cfg)
    oracle = {}
    if disk:
        for n, branch, lam, _ in disk_oracle_eigs(
                cfg.r1, cfg.r2, cfg.delta1, cfg.delta2, n_max=cfg.n_report):
            omega = cfg.omega_p / np.sqrt(2.0) * np.sqrt(1.0 - 2.0 * lam)
            oracle[(n, branch)] = (lam, omega)

    header = ["n", "branch", "lambda", "lambda_tilde", "omega", "omega_tilde"]
    if disk:
        header += ["lambda_disk", "omega_disk"]
    rows = []
    seen = set()
    for cm, fq in zip(corrected, freqs):
        if cm.n > cfg.n_report:
            continue
        branch = "+" if cm.eigenvalue > 0 else "-"
        key = (cm.n, branch, round(cm.eigenvalue, 12), round(cm.lam_tilde, 12))
        if key in seen:
            continue
        seen.add(key)
        row = [cm.n, branch, float(cm.eigenvalue), float(cm.lam_tilde),
               fq.omega, fq.omega_tilde]
        if disk:
            lam_d, om_d = oracle.get((cm.n, branch), (float("nan"),) * 2)
            row += [float(lam_d), float(om_d)]
        rows.append(row)
    rows.sort(key=lambda r: (r[0], r[1] != "+", -r[3]))
    path = os.path.join(out_dir, f"{cfg.out_prefix}_eigs.csv")
    _write_csv(path, header, rows)
    return [path]


def _sweep_geometry(cfg, value):
    over = {}
    if cfg.sweep_variable == "delta1":
        over["delta1"] = value
    elif cfg.sweep_variable == "delta2":
        over["delta2"] = value
    elif cfg.sweep_variable == "eps":
        over["eps1"] = value
        over["eps2"] = value
    else:
        raise ConfigError("sweep command requires a [sweep] section")
    return cfg.geometry(**over)


def cmd_sweep(cfg, out_dir, threads=1):
    if not cfg.sweep_variable:
        raise ConfigError("sweep command requires a [sweep] section")
    ref = cfg.omega_p / np.sqrt(2.0)

    def one(value):
        geometry = _sweep_geometry(cfg, value)
        corrected = _mode_table(geometry, cfg.n_report)
        freqs = corrected_frequencies(corrected, cfg.omega_p)
        by_family = {}
        for cm, fq in zip(corrected, freqs):
            if cm.n > cfg.n_report:
                continue
            rec = by_family.setdefault(cm.n, {"plus": [], "minus": []})
            branch = "plus" if cm.eigenvalue < 0 else "minus"
            rec[branch].append((fq.omega_tilde, fq.omega))
        rows = []
        for n in sorted(by_family):
            rec = by_family[n]
            if not rec["plus"] or not rec["minus"]:
                continue
            # extremal doublet member per branch (widest splitting)
            plus = max(rec["plus"])
            minus = min(rec["minus"])
            rows.append([float(value), n, plus[1], plus[0],
                         minus[1], minus[0], ref])
        return rows

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(one, cfg.sweep_values))
    rows = [row for chunk in results for row in chunk]
    path = os.path.join(out_dir, f"{cfg.out_prefix}_sweep.csv")
    _write_csv(path, ["sweep_value", "n", "omega_plus", "omega_tilde_plus",
                      "omega_minus", "omega_tilde_minus", "omega_reference"],
               rows)
    return [path]


_PLOT_TEMPLATE = """# gnuplot script: overlaid intensity spectra
set datafile separator ','
set xlabel 'omega (eV)'
set ylabel 'intensity |u_s|^2'
set key outside
plot \\
{lines}
"""


def cmd_spectrum(cfg, out_dir, threads=1):
    lo, hi = cfg.omega_grid_bounds()
    grid = np.linspace(lo, hi, cfg.spectrum_points)
    model = cfg.model()
    inc = IncidentField()
    values = cfg.sweep_values if cfg.sweep_variable else (None,)

    def one(value):
        geometry = cfg.geometry() if value is None else _sweep_geometry(cfg, value)
        return intensity_spectrum(geometry, inc, model, omega_grid=grid,
                                  probe_radius_factor=cfg.probe_factor)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        curves = list(pool.map(one, values))

    paths = []
    lines = []
    for value, curve in zip(values, curves):
        tag = "base" if value is None else f"{value:g}"
        path = os.path.join(out_dir, f"{cfg.out_prefix}_spectrum_{tag}.csv")
        _write_csv(path, ["omega", "intensity"],
                   [[float(o), float(i)] for o, i in
                    zip(curve.omega, curve.intensity)])
        paths.append(path)
        lines.append(f"  '{os.path.basename(path)}' using 1:2 with lines "
                     f"title '{tag}'")
    script = os.path.join(out_dir, f"{cfg.out_prefix}_spectrum.gp")
    with open(script, "w", encoding="utf-8") as fh:
        fh.write(_PLOT_TEMPLATE.format(lines=", \\\n".join(lines)))
    paths.append(script)
    return paths


def _check(name, value, tol, mode="max"):
    passed = bool(value <= tol) if mode == "max" else bool(value >= tol)
    return {"check": name, "value": float(value), "tolerance": float(tol),
            "comparison": "<=" if mode == "max" else ">=", "passed": passed}


def cmd_validate(cfg, out_dir, seed=0):
    """Invariant battery; writes a JSON report and returns its pass flag."""
    report = []
    try:
        geometry = cfg.geometry()
    except GeometryDegenerateError as exc:
        report.append({"check": "geometry", "passed": False,
                       "diagnostic": f"geometry-degenerate: {exc}"})
        return _finish_validate(cfg, out_dir, report)

    n_nodes = cfg.n_nodes
    disks = LayeredGeometry(r1=cfg.r1, r2=cfg.r2, delta1=cfg.delta1,
                            delta2=cfg.delta2, n_nodes=n_nodes)

    # closed-form disk spectrum
    block = assemble_block_operator(disks)
    gram = assemble_gram(disks)
    modes = spectrum(block, gram, n_max=24)
    rho = disks.contrast_ratio
    err = max(abs(abs(m.eigenvalue) - 0.5 * rho**m.n) for m in modes)
    report.append(_check("disk_eigenvalue_oracle", err, 1e-10))

    # scale invariance of the spectrum
    lam0 = sorted(m.eigenvalue for m in modes)
    err = 0.0
    for c in (0.5, 2.0, 10.0):
        gsc = LayeredGeometry(r1=cfg.r1, r2=cfg.r2, delta1=c * cfg.delta1,
                              delta2=c * cfg.delta2, n_nodes=n_nodes)
        msc = spectrum(assemble_block_operator(gsc), assemble_gram(gsc),
                       n_max=24)
        err = max(err, max(abs(a - b) for a, b in
                           zip(lam0, sorted(m.eigenvalue for m in msc))))
    report.append(_check("scale_invariance", err, 1e-10))

    # Calderon residual, base and perturbed
    report.append(_check("calderon_residual_base",
                         _calderon(block, gram), 1e-6))
    pblock = assemble_block_operator(geometry, use_perturbed_curves=True)
    pgram = assemble_gram(geometry, use_perturbed_curves=True)
    report.append(_check("calderon_residual_perturbed",
                         _calderon(pblock, pgram), 1e-4))

    # containment and realness on randomized geometries
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        h1 = ShapeFunction(cosine_coeffs=((int(rng.integers(1, 7)),
                                           float(rng.uniform(-1, 1))),))
        h2 = ShapeFunction(sine_coeffs=((int(rng.integers(1, 7)),
                                         float(rng.uniform(-1, 1))),))
        gr = LayeredGeometry(r1=cfg.r1, r2=cfg.r2, eps1=0.05, eps2=0.05,
                             h1=h1, h2=h2, n_nodes=128)
        ms = spectrum(assemble_block_operator(gr, True),
                      assemble_gram(gr, True), n_max=16)
        worst = max(worst, max(abs(m.eigenvalue) for m in ms))
    report.append(_check("spectrum_containment", worst, 0.5 + 1e-8))

    # potential-theory basics on the outer circle
    circle = make_circle(cfg.r2, n_nodes)
    sl = assemble_single_layer_self(circle)
    err = float(np.max(np.abs(sl @ np.ones(n_nodes)
                              - cfg.r2 * np.log(cfg.r2))))
    report.append(_check("single_layer_constant", err, 1e-10))
    report.append(_check("np_half_row_sum", float(np.max(np.abs(
        assemble_np_self(circle) @ np.ones(n_nodes) - 0.5))), 1e-10))
    report.append(_check("jump_relation", _jump_residual(circle), 1e-3))

    # per-n closed-form sum rule
    table = disk_closed_form_frequencies(cfg.r1, cfg.r2, cfg.delta1,
                                         cfg.delta2, cfg.omega_p, n_max=6)
    err = max(abs(a.omega**2 + b.omega**2 - cfg.omega_p**2)
              for a, b in zip(table.rows[::2], table.rows[1::2]))
    report.append(_check("disk_sum_rule", err / cfg.omega_p**2, 1e-10))

    # radius-perturbation oracle
    gr = LayeredGeometry(r1=cfg.r1, r2=cfg.r2, eps1=0.01,
                         h1=ShapeFunction.constant(1.0), n_nodes=n_nodes)
    grm = assemble_gram(gr)
    mr = spectrum(assemble_block_operator(gr), grm, n_max=16)
    corr = first_order_corrections(mr, assemble_perturbation_blocks(gr), grm)
    err = max(abs(cm.lam1 - cm.n * cm.eigenvalue / cfg.r1) for cm in corr)
    report.append(_check("radius_perturbation_oracle", err, 1e-7))

    # perturbation convergence order against direct assembly
    slope = _convergence_slope(cfg)
    report.append(_check("perturbation_convergence_slope", slope, 1.5,
                         mode="min"))
    return _finish_validate(cfg, out_dir, report)


def _calderon(block, gram):
    proj = gram.projector
    kp = proj @ block.matrix @ proj
    gp = proj.T @ gram.matrix @ proj
    return float(np.linalg.norm(gp @ kp - kp.T @ gp, 2)
                 / np.linalg.norm(gp, 2))


def _jump_residual(circle):
    """Normal-derivative jump of S against (+-1/2 I + K*) at r(1 +- 1e-4)."""
    r0 = float(np.linalg.norm(circle.points[0]))
    t = circle.t
    dens = np.cos(t) + 0.3 * np.cos(3 * t)
    n_fine = 200000
    tf = 2.0 * np.pi * np.arange(n_fine) / n_fine
    yf = r0 * np.stack([np.cos(tf), np.sin(tf)], axis=-1)
    df = np.cos(tf) + 0.3 * np.cos(3 * tf)
    w = 2.0 * np.pi * r0 / n_fine
    angles = t[::16]
    err = 0.0
    kst = assemble_np_self(circle)
    for side in (+1.0, -1.0):
        rr = r0 * (1.0 + side * 1e-4)
        pts = rr * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        # radial derivative by two-point stencil around rr
        vals = []
        for shift in (1e-6, -1e-6):
            p = (rr + shift) / rr * pts
            d = p[:, None, :] - yf[None, :, :]
            val = (w / (4.0 * np.pi)) * np.sum(
                np.log(np.einsum("ijk,ijk->ij", d, d)) * df, axis=1)
            vals.append(val)
        deriv = (vals[0] - vals[1]) / 2e-6
        trace = (side * 0.5 * dens + kst @ dens)[::16]
        err = max(err, float(np.max(np.abs(deriv - trace))))
    return err


def _convergence_slope(cfg):
    h1 = ShapeFunction(cfg.h1_cos, cfg.h1_sin)
    h2 = ShapeFunction(cfg.h2_cos, cfg.h2_sin)
    if h1.max_frequency == 0 and h2.max_frequency == 0:
        h1 = ShapeFunction(cosine_coeffs=((4, 0.5),))
        h2 = ShapeFunction(sine_coeffs=((3, -1.0),))
    eps_list = (0.04, 0.02, 0.01)
    errs = []
    for eps in eps_list:
        g = LayeredGeometry(r1=cfg.r1, r2=cfg.r2, eps1=eps, eps2=eps,
                            h1=h1, h2=h2, n_nodes=128)
        gram = assemble_gram(g)
        modes = spectrum(assemble_block_operator(g), gram, n_max=12)
        corr = first_order_corrections(
            modes, assemble_perturbation_blocks(g), gram)
        lt = np.sort([cm.lam_tilde for cm in corr[:8]])[::-1]
        md = spectrum(assemble_block_operator(g, True),
                      assemble_gram(g, True), n_max=12)
        ld = np.sort([m.eigenvalue for m in md[:8]])[::-1]
        errs.append(float(np.max(np.abs(lt - ld))))
    return float(np.polyfit(np.log(eps_list), np.log(errs), 1)[0])


def _finish_validate(cfg, out_dir, report):
    passed = all(item["passed"] for item in report)
    path = os.path.join(out_dir, f"{cfg.out_prefix}_validate.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"passed": passed, "checks": report}, fh, indent=2)
        fh.write("\n")
    for item in report:
        status = "PASS" if item["passed"] else "FAIL"
        detail = item.get("diagnostic") or (
            f"value={item['value']:.3e} {item['comparison']} "
            f"tol={item['tolerance']:.3e}")
        print(f"{status} {item['check']}: {detail}")
    return passed


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="npshell",
        description="Plasmon resonances of 2D core-shell structures via "
                    "boundary-integral spectra")
    parser.add_argument("command",
                        choices=["eigs", "sweep", "spectrum", "validate"])
    parser.add_argument("--config", required=True, help="path to INI config")
    parser.add_argument("--out", default=None,
                        help="output directory (default: config [output])")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        cfg = parse_config_file(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out or cfg.out_directory
    os.makedirs(out_dir, exist_ok=True)

    try:
        if args.command == "eigs":
            paths = cmd_eigs(cfg, out_dir)
        elif args.command == "sweep":
            paths = cmd_sweep(cfg, out_dir, threads=args.threads)
        elif args.command == "spectrum":
            paths = cmd_spectrum(cfg, out_dir, threads=args.threads)
        else:
            return 0 if cmd_validate(cfg, out_dir, seed=args.seed) else 1
    except (ConfigError, GeometryDegenerateError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NPShellError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
