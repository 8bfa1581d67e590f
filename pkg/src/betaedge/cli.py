"""Command-line front end: density tables, correction curves, derivative
checks, Monte Carlo validation and reference tabulations.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 zero k#(beta) (the derivative diagnostic is undefined).
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import mpmath
import numpy as np

from . import convergence, mc
from .ensembles import Kind
from .errors import BetaEdgeError, Inadmissible, ZeroK
from .io import write_csv, write_json
from .normalization import DEFAULT_PRECISION_BITS, DensityModel
from .oracles import airy, rho_correction_beta2, rho_limit_beta2
from .scaling import ScalingCase, build_scaling, scaled_density

PRECISION_ENV = "BETAEDGE_PRECISION_BITS"

_SCALING_BY_ENSEMBLE = {
    ("gaussian", "centred"): ScalingCase.GAUSSIAN_CENTRED,
    ("gaussian", "uncentred"): ScalingCase.GAUSSIAN_UNCENTRED,
    ("laguerre", "centred"): ScalingCase.LAGUERRE_FIXED_CENTRED,
    ("laguerre", "uncentred"): ScalingCase.LAGUERRE_FIXED_UNCENTRED,
    ("laguerre", "primed"): ScalingCase.LAGUERRE_FIXED_PRIMED,
    ("laguerre-proportional", "centred"): ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED,
    ("laguerre-proportional", "uncentred"): ScalingCase.LAGUERRE_PROPORTIONAL_UNCENTRED,
}


def _parse_grid(text: str) -> list[float]:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise Inadmissible(f"grid must be min:max:step, got {text!r}")
    if step <= 0 or hi <= lo:
        raise Inadmissible(f"empty grid {text!r}")
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


def _parse_nlist(text: str) -> list[int]:
    try:
        ns = [int(v) for v in text.split(",")]
    except ValueError:
        raise Inadmissible(f"N-list must be comma-separated integers, got {text!r}")
    if any(n < 1 for n in ns):
        raise Inadmissible("all N must be >= 1")
    return ns


def _load_config(path: str | None) -> dict:
    """key = value text file; flags override these defaults."""
    if not path:
        return {}
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise Inadmissible(f"bad config line {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _merge_config(ctx_params: dict, cfg: dict) -> dict:
    merged = dict(ctx_params)
    for key, value in cfg.items():
        if key in merged and (merged[key] is None or _is_click_default(key)):
            merged[key] = value
    return merged


def _is_click_default(key: str) -> bool:
    ctx = click.get_current_context(silent=True)
    if ctx is None:
        return False
    source = ctx.get_parameter_source(key)
    return source is not None and source.name == "DEFAULT"


def _default_precision() -> int:
    return int(os.environ.get(PRECISION_ENV, DEFAULT_PRECISION_BITS))


def _kind(ensemble: str) -> Kind:
    try:
        return Kind(ensemble)
    except ValueError:
        raise Inadmissible(f"unknown ensemble {ensemble!r}")


def _ensemble_kwargs(kind: Kind, a, alpha_ratio) -> dict:
    if kind is Kind.GAUSSIAN:
        return {}
    if kind is Kind.LAGUERRE_FIXED:
        if a is None:
            raise Inadmissible("laguerre ensemble requires --a")
        return {"a": a}
    if alpha_ratio is None:
        raise Inadmissible("laguerre-proportional ensemble requires --alpha")
    return {"alpha_ratio": alpha_ratio}


def _progress(label: str):
    def report(alpha: int, beta: int) -> None:
        print(f"{label}: stage alpha={alpha}/{beta} done", file=sys.stderr)
    return report


def _density_job(args: tuple) -> tuple[int, dict, list[list[str]]]:
    """Worker: one (N, spec) density table -> serializable rows."""
    (ensemble, beta, N, a, alpha_ratio, scaling_mode, grid, prec, backend, digits) = args
    kind = _kind(ensemble)
    kwargs = _ensemble_kwargs(kind, a, alpha_ratio)
    model = DensityModel(kind, beta, N, prec=prec, backend=backend, **kwargs)
    if scaling_mode == "raw":
        from .normalization import density as raw_density
        table = raw_density(model, grid)
    else:
        case = _SCALING_BY_ENSEMBLE.get((ensemble, scaling_mode))
        if case is None:
            raise Inadmissible(f"scaling {scaling_mode!r} undefined for {ensemble}")
        smap = build_scaling(case, N, beta, prec=prec, **kwargs)
        table = scaled_density(model, smap, grid)
    rows = [[mpmath.nstr(x, digits), mpmath.nstr(v, digits)]
            for x, v in zip(table.grid, table.values)]
    return N, table.meta, rows


def _run_jobs(jobs: list[tuple], n_workers: int):
    if n_workers <= 1 or len(jobs) <= 1:
        return [_density_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        results = list(pool.map(_density_job, jobs))
    return sorted(results, key=lambda r: r[0])


def _fail(exc: BaseException) -> None:
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, ZeroK):
        sys.exit(4)
    if isinstance(exc, Inadmissible):
        sys.exit(2)
    if isinstance(exc, BetaEdgeError):
        sys.exit(3)
    raise exc


def common_options(fn):
    fn = click.option("--ensemble", type=click.Choice(
        ["gaussian", "laguerre", "laguerre-proportional"]), required=True)(fn)
    fn = click.option("--beta", type=int, required=True, help="even beta >= 2")(fn)
    fn = click.option("--a", type=str, default=None,
                      help="Laguerre parameter (rational string ok, e.g. 1/2)")(fn)
    fn = click.option("--alpha", "alpha_ratio", type=str, default=None,
                      help="proportional-Laguerre ratio a = alpha * N")(fn)
    fn = click.option("--grid", default="-6:3:0.05", show_default=True,
                      help="scaled grid min:max:step")(fn)
    fn = click.option("--precision-bits", type=int, default=None,
                      help=f"working precision (default {DEFAULT_PRECISION_BITS}, "
                           f"or ${PRECISION_ENV})")(fn)
    fn = click.option("--backend", type=click.Choice(["rational", "bigfloat"]),
                      default="rational", show_default=True)(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                      default="csv", show_default=True)(fn)
    fn = click.option("--out", type=click.Path(), default=".", show_default=True,
                      help="output directory")(fn)
    fn = click.option("--digits", type=int, default=17, show_default=True)(fn)
    fn = click.option("--jobs", type=int, default=os.cpu_count(), show_default=False,
                      help="worker processes (default: logical cores)")(fn)
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="key = value config file; flags override")(fn)
    return fn


@click.group()
def main() -> None:
    """Exact finite-N soft-edge densities of Gaussian/Laguerre beta-ensembles."""


def _emit_table(outdir: Path, stem: str, fmt: str, meta: dict, header, rows,
                digits: int) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = outdir / f"{stem}.csv"
        write_csv(path, meta, header, rows, digits)
    else:
        path = outdir / f"{stem}.json"
        write_json(path, meta, {"header": list(header),
                                "rows": [[str(v) for v in row] for row in rows]})
    return path


@main.command()
@common_options
@click.option("--n", "nlist", required=True, help="comma-separated matrix sizes")
@click.option("--scaling", type=click.Choice(["centred", "uncentred", "primed", "raw"]),
              default="centred", show_default=True)
def density(ensemble, beta, a, alpha_ratio, grid, precision_bits, backend, fmt, out,
            digits, jobs, config_path, nlist, scaling):
    """Scaled (or raw) density tables, one file per N."""
    try:
        cfg = _merge_config(dict(
            ensemble=ensemble, beta=beta, a=a, alpha_ratio=alpha_ratio, grid=grid,
            precision_bits=precision_bits, backend=backend, fmt=fmt, out=out,
            digits=digits, jobs=jobs, nlist=nlist, scaling=scaling,
        ), _load_config(config_path))
        prec = int(cfg["precision_bits"] or _default_precision())
        ns = _parse_nlist(str(cfg["nlist"]))
        gridpts = _parse_grid(str(cfg["grid"]))
        job_args = [(cfg["ensemble"], int(cfg["beta"]), N, cfg["a"], cfg["alpha_ratio"],
                     cfg["scaling"], gridpts, prec, cfg["backend"], int(cfg["digits"]))
                    for N in ns]
        outdir = Path(cfg["out"])
        for N, meta, rows in _run_jobs(job_args, int(cfg["jobs"])):
            meta = {**meta, "command": "density", "config": {k: str(v) for k, v in cfg.items()}}
            path = _emit_table(outdir, f"density_{cfg['ensemble']}_beta{cfg['beta']}_N{N}",
                               cfg["fmt"], meta, ["x", "density"], rows, int(cfg["digits"]))
            click.echo(str(path))
    except BetaEdgeError as exc:
        _fail(exc)


@main.command()
@common_options
@click.option("--n", "nlist", required=True, help="comma-separated N values (>= 2)")
@click.option("--scaling", type=click.Choice(["centred", "uncentred"]),
              default="centred", show_default=True)
@click.option("--probe", type=float, multiple=True, default=(-2.0, -1.0, 0.0),
              show_default=True, help="probe x for the rate fit")
def correction(ensemble, beta, a, alpha_ratio, grid, precision_bits, backend, fmt, out,
               digits, jobs, config_path, nlist, scaling, probe):
    """Successive-difference curves for consecutive N pairs plus a rate fit."""
    try:
        cfg = _merge_config(dict(
            ensemble=ensemble, beta=beta, a=a, alpha_ratio=alpha_ratio, grid=grid,
            precision_bits=precision_bits, backend=backend, fmt=fmt, out=out,
            digits=digits, jobs=jobs, nlist=nlist, scaling=scaling,
        ), _load_config(config_path))
        prec = int(cfg["precision_bits"] or _default_precision())
        ns = _parse_nlist(str(cfg["nlist"]))
        if len(ns) < 2:
            raise Inadmissible("correction needs at least two N values")
        gridpts = _parse_grid(str(cfg["grid"]))
        kind = _kind(cfg["ensemble"])
        kwargs = _ensemble_kwargs(kind, cfg["a"], cfg["alpha_ratio"])
        case = _SCALING_BY_ENSEMBLE[(cfg["ensemble"], cfg["scaling"])]
        tables = {}
        for N in ns:
            model = DensityModel(kind, int(cfg["beta"]), N, prec=prec,
                                 backend=cfg["backend"], **kwargs)
            smap = build_scaling(case, N, int(cfg["beta"]), prec=prec, **kwargs)
            tables[N] = scaled_density(model, smap, gridpts)
        header = ["x"] + [f"dev_{ns[i]}_{ns[i+1]}" for i in range(len(ns) - 1)]
        curves = [convergence.successive_difference(tables[ns[i]], tables[ns[i + 1]])
                  for i in range(len(ns) - 1)]
        rows = [[mpmath.nstr(mpmath.mpf(x), int(cfg["digits"]))]
                + [mpmath.nstr(c[i], int(cfg["digits"])) for c in curves]
                for i, x in enumerate(gridpts)]
        meta = {"ensemble": cfg["ensemble"], "beta": int(cfg["beta"]),
                "N_values": ns, "scaling_case": case.value, "precision_bits": prec,
                "command": "correction",
                "config": {k: str(v) for k, v in cfg.items()}}
        outdir = Path(cfg["out"])
        path = _emit_table(outdir, f"correction_{cfg['ensemble']}_beta{cfg['beta']}",
                           cfg["fmt"], meta, header, rows, int(cfg["digits"]))
        click.echo(str(path))
        # rate-fit summary at the probe points
        fits = {}
        if len(ns) >= 3:
            for px in probe:
                vals = [tables[N].values[_nearest_index(gridpts, px)] for N in ns]
                try:
                    fits[str(px)] = convergence.fit_pair_rate(ns, vals)
                except BetaEdgeError as exc:
                    fits[str(px)] = f"degenerate: {exc}"
        summary = outdir / f"correction_{cfg['ensemble']}_beta{cfg['beta']}_ratefit.json"
        write_json(summary, meta, {"pair_rate_exponent_by_probe": fits})
        click.echo(str(summary))
    except BetaEdgeError as exc:
        _fail(exc)


def _nearest_index(grid, x) -> int:
    return int(np.argmin([abs(g - x) for g in grid]))


@main.command()
@common_options
@click.option("--n", "n_value", type=int, required=True)
def derivcheck(ensemble, beta, a, alpha_ratio, grid, precision_bits, backend, fmt, out,
               digits, jobs, config_path, n_value):
    """The N^{-1/3} correction diagnostic and its derivative comparison."""
    try:
        cfg = _merge_config(dict(
            ensemble=ensemble, beta=beta, a=a, alpha_ratio=alpha_ratio, grid=grid,
            precision_bits=precision_bits, backend=backend, fmt=fmt, out=out,
            digits=digits, n_value=n_value,
        ), _load_config(config_path))
        prec = int(cfg["precision_bits"] or _default_precision())
        kind = _kind(cfg["ensemble"])
        kwargs = _ensemble_kwargs(kind, cfg["a"], cfg["alpha_ratio"])
        beta_i, N = int(cfg["beta"]), int(cfg["n_value"])
        gridpts = _parse_grid(str(cfg["grid"]))
        centred_case = _SCALING_BY_ENSEMBLE[(cfg["ensemble"], "centred")]
        primed_mode = "primed" if kind is Kind.LAGUERRE_FIXED else "uncentred"
        primed_case = _SCALING_BY_ENSEMBLE[(cfg["ensemble"], primed_mode)]
        model = DensityModel(kind, beta_i, N, prec=prec, backend=cfg["backend"], **kwargs)
        cmap = build_scaling(centred_case, N, beta_i, prec=prec, **kwargs)
        pmap = build_scaling(primed_case, N, beta_i, prec=prec, **kwargs)
        f_curve, c_curve = convergence.deriv_correction(model, cmap, pmap, gridpts)
        rows = [[mpmath.nstr(mpmath.mpf(x), int(cfg["digits"])),
                 mpmath.nstr(f, int(cfg["digits"])),
                 mpmath.nstr(c, int(cfg["digits"]))]
                for x, f, c in zip(gridpts, f_curve, c_curve)]
        meta = {**model.metadata(), **cmap.metadata(), "command": "derivcheck",
                "config": {k: str(v) for k, v in cfg.items()}}
        path = _emit_table(Path(cfg["out"]),
                           f"derivcheck_{cfg['ensemble']}_beta{beta_i}_N{N}",
                           cfg["fmt"], meta, ["x", "f2", "neg_deriv"], rows,
                           int(cfg["digits"]))
        click.echo(str(path))
    except BetaEdgeError as exc:
        _fail(exc)


@main.command("validate-mc")
@common_options
@click.option("--n", "n_value", type=int, required=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--samples", type=int, default=10_000, show_default=True)
@click.option("--bins", type=int, default=60, show_default=True)
def validate_mc(ensemble, beta, a, alpha_ratio, grid, precision_bits, backend, fmt, out,
                digits, jobs, config_path, n_value, seed, samples, bins):
    """Tridiagonal-model edge histogram against the exact scaled density."""
    try:
        cfg = _merge_config(dict(
            ensemble=ensemble, beta=beta, a=a, alpha_ratio=alpha_ratio, grid=grid,
            precision_bits=precision_bits, backend=backend, fmt=fmt, out=out,
            digits=digits, n_value=n_value, seed=seed, samples=samples, bins=bins,
        ), _load_config(config_path))
        prec = int(cfg["precision_bits"] or _default_precision())
        kind = _kind(cfg["ensemble"])
        kwargs = _ensemble_kwargs(kind, cfg["a"], cfg["alpha_ratio"])
        beta_i, N = int(cfg["beta"]), int(cfg["n_value"])
        gridpts = _parse_grid(str(cfg["grid"]))
        lo, hi = gridpts[0], gridpts[-1]
        case = _SCALING_BY_ENSEMBLE[(cfg["ensemble"], "centred")]
        model = DensityModel(kind, beta_i, N, prec=prec, **kwargs)
        smap = build_scaling(case, N, beta_i, prec=prec, **kwargs)
        batch = mc.sample_batch(kind, beta_i, N, int(cfg["samples"]), int(cfg["seed"]),
                                **kwargs)
        edges, counts, est = mc.edge_histogram(batch, smap, lo, hi, int(cfg["bins"]))
        stat, pval, dof = mc.chi_square_vs_exact(batch, smap, model, lo, hi,
                                                 int(cfg["bins"]))
        centers = (edges[:-1] + edges[1:]) / 2
        rows = []
        for ctr, cnt, dens in zip(centers, counts, est):
            exact = float(smap.scale * model.rho(smap.apply(ctr)))
            rows.append([mpmath.nstr(mpmath.mpf(ctr), int(cfg["digits"])), int(cnt),
                         mpmath.nstr(mpmath.mpf(dens), int(cfg["digits"])),
                         mpmath.nstr(mpmath.mpf(exact), int(cfg["digits"]))])
        meta = {**model.metadata(), **smap.metadata(), "command": "validate-mc",
                "seed": int(cfg["seed"]), "samples": int(cfg["samples"]),
                "config": {k: str(v) for k, v in cfg.items()}}
        outdir = Path(cfg["out"])
        path = _emit_table(outdir, f"mc_{cfg['ensemble']}_beta{beta_i}_N{N}", "csv",
                           meta, ["bin_center", "count", "density_estimate", "exact_density"],
                           rows, int(cfg["digits"]))
        stats_path = outdir / f"mc_{cfg['ensemble']}_beta{beta_i}_N{N}_stats.json"
        write_json(stats_path, meta,
                   {"chi_square": {"statistic": stat, "p_value": pval, "dof": dof}})
        click.echo(str(path))
        click.echo(str(stats_path))
    except BetaEdgeError as exc:
        _fail(exc)


@main.command()
@click.option("--grid", default="-6:3:0.05", show_default=True)
@click.option("--alpha", "alpha_ratio", type=str, default="10", show_default=True,
              help="ratio for the proportional-Laguerre correction column")
@click.option("--out", type=click.Path(), default=".", show_default=True)
@click.option("--digits", type=int, default=17, show_default=True)
@click.option("--precision-bits", type=int, default=None)
def reference(grid, alpha_ratio, out, digits, precision_bits):
    """Tabulate Ai, Ai', the beta=2 limit and the three correction functions."""
    try:
        prec = int(precision_bits or _default_precision())
        gridpts = _parse_grid(grid)
        rows = []
        for x in gridpts:
            pair = airy(x, prec)
            rows.append([
                mpmath.nstr(mpmath.mpf(x), digits),
                mpmath.nstr(pair.ai, digits),
                mpmath.nstr(pair.ai_prime, digits),
                mpmath.nstr(rho_limit_beta2(x, prec), digits),
                mpmath.nstr(rho_correction_beta2(Kind.GAUSSIAN, x, prec=prec), digits),
                mpmath.nstr(rho_correction_beta2(Kind.LAGUERRE_FIXED, x, prec=prec), digits),
                mpmath.nstr(rho_correction_beta2(Kind.LAGUERRE_PROPORTIONAL, x,
                                                 alpha_ratio=alpha_ratio, prec=prec), digits),
            ])
        meta = {"command": "reference", "grid": grid, "alpha_ratio": alpha_ratio,
                "precision_bits": prec}
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "reference.csv"
        write_csv(path, meta, ["x", "airy", "airy_prime", "rho_limit",
                               "corr_gaussian", "corr_laguerre", "corr_proportional"],
                  rows, digits)
        click.echo(str(path))
    except BetaEdgeError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
