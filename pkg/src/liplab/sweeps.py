"""Experiment sweeps: empirical ratio studies and certificate batteries.

Each sweep draws a seeded random ensemble and reports how an output norm
(weak quasinorm, S_Omega norm, operator norm, or Schatten norm of a double
operator integral) compares to the matching input norm, per instance and as
per-dimension maxima.  Bounded ratios across dimensions are the empirical
signature of the dimension-free inequalities this package studies.  Identical
configs (including the seed) produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .certificate import build_certificate, verify_certificate
from .doi import bs_residual_bound, check_birman_solomyak, doi_apply
from .errors import ValidationError
from .functions import LipschitzFunction, apply_function, function_from_spec
from .ideals import (schatten_norm, singular_value_at, s_Omega_norm, s_omega_norm,
                     weak_s1_quasinorm)
from .linalg import eigh_symmetric, frobenius
from .measures import materialize
from .rng import (make_rng, random_kernel_operator, random_prescribed_spectrum,
                  random_symmetric, random_unit)

EXPERIMENTS = ("rank_one", "trace_class", "matsaev", "interp", "certificate")
_TAG = {name: i + 1 for i, name in enumerate(EXPERIMENTS)}

# Relative slack for the entrywise Schur-multiplier S2 bound.
S2_SLACK = 1e-9

DEFAULT_N_VALUES = (4, 8, 16, 32, 64)


@dataclass(frozen=True)
class SweepConfig:
    experiment: str
    dimensions: tuple
    ensemble: int
    seed: int
    function: dict
    p: float | None = None
    epsilon: float | None = None
    n_values: tuple = DEFAULT_N_VALUES
    out: str | None = None
    format: str = "csv"
    emit_curves: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}; known: {EXPERIMENTS}")
        dims = tuple(int(d) for d in self.dimensions)
        if not dims or any(d < 2 for d in dims):
            raise ValidationError("dimensions must be a nonempty list of integers >= 2")
        object.__setattr__(self, "dimensions", dims)
        if int(self.ensemble) < 1:
            raise ValidationError("ensemble size must be >= 1")
        object.__setattr__(self, "ensemble", int(self.ensemble))
        object.__setattr__(self, "seed", int(self.seed))
        function_from_spec(self.function)  # validate early
        if self.experiment == "interp":
            if self.p is None or float(self.p) < 1.0:
                raise ValidationError("interp sweep requires p >= 1")
            if self.epsilon is None or float(self.epsilon) <= 0.0:
                raise ValidationError("interp sweep requires epsilon > 0")
            object.__setattr__(self, "p", float(self.p))
            object.__setattr__(self, "epsilon", float(self.epsilon))
        nvals = tuple(int(n) for n in self.n_values)
        if not nvals or any(n < 1 for n in nvals):
            raise ValidationError("n_values must be positive integers")
        object.__setattr__(self, "n_values", nvals)
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be 'csv' or 'json', got {self.format!r}")


def load_config(source) -> SweepConfig:
    """Build a SweepConfig from a dict or a JSON file path."""
    if isinstance(source, dict):
        data = dict(source)
    else:
        try:
            with open(source) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read config {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {source} is not valid JSON: {exc}") from exc
    known = {f.name for f in SweepConfig.__dataclass_fields__.values()}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown config fields: {sorted(unknown)}")
    missing = {"experiment", "dimensions", "ensemble", "seed", "function"} - set(data)
    if missing:
        raise ValidationError(f"config is missing required fields: {sorted(missing)}")
    if "dimensions" in data:
        data["dimensions"] = tuple(data["dimensions"])
    if "n_values" in data:
        data["n_values"] = tuple(data["n_values"])
    return SweepConfig(**data)


@dataclass
class ExperimentReport:
    experiment: str
    columns: list
    rows: list
    summary: dict
    curves: list = field(default_factory=list)


def _guard_s2(q: np.ndarray, t: np.ndarray, lip: float) -> None:
    # Entrywise Schur bound: must hold on every instance or the DOI is wrong.
    lhs = frobenius(q)
    rhs = lip * frobenius(t) * (1.0 + S2_SLACK)
    if lhs > rhs:
        raise RuntimeError(f"S2 Schur-multiplier bound violated: {lhs!r} > {rhs!r}")


def _spectrum(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(m, compute_uv=False)


def run_rank_one_sweep(cfg: SweepConfig) -> ExperimentReport:
    """Rank-one perturbations: weak quasinorm of f(A) - f(B) against lip * ||A - B||.

    Each instance also runs a DOI variant with independent spectral measures
    and a random rank-one T.  The Birman-Solomyak residual is checked before
    any functional is reported.
    """
    f = function_from_spec(cfg.function)
    columns = ["instance", "dimension", "function", "lip", "perturbation", "weak_s1",
               "rho", "doi_weak_s1", "rho_doi", "bs_residual", "degenerate"]
    rows = []
    curves = []
    for dim in cfg.dimensions:
        for idx in range(cfg.ensemble):
            rng = make_rng(cfg.seed, _TAG[cfg.experiment], dim, idx)
            a = random_symmetric(rng, dim)
            u = random_unit(rng, dim)
            c = 0.5 + rng.uniform(0.0, 1.0)
            b = a + c * np.outer(u, u)
            b = 0.5 * (b + b.T)
            dec_a = eigh_symmetric(a)
            dec_b = eigh_symmetric(b)
            residual = check_birman_solomyak(f, a, b, dec_a=dec_a, dec_b=dec_b)
            # The contract scales with lip; at lip = 0 both sides are zero in
            # exact arithmetic and the residual is pure frame rounding.
            if f.lip > 0.0 and residual > bs_residual_bound(a, b, f.lip):
                raise RuntimeError(f"Birman-Solomyak residual {residual!r} out of contract")
            delta = apply_function(f, dec_a) - apply_function(f, dec_b)
            spec = _spectrum(delta)
            denom = f.lip * abs(c)
            degenerate = denom == 0.0
            rho = 0.0 if degenerate else weak_s1_quasinorm(spec) / denom

            t = (0.5 + rng.uniform(0.0, 1.0)) * np.outer(random_unit(rng, dim),
                                                         random_unit(rng, dim))
            d1 = eigh_symmetric(random_symmetric(rng, dim))
            d2 = eigh_symmetric(random_symmetric(rng, dim))
            q = doi_apply(f, d1, d2, t)
            _guard_s2(q, t, f.lip)
            t_norm = float(_spectrum(t)[0])
            doi_spec = _spectrum(q)
            rho_doi = 0.0 if f.lip * t_norm == 0.0 else weak_s1_quasinorm(doi_spec) / (f.lip * t_norm)

            rows.append({
                "instance": idx, "dimension": dim, "function": f.name, "lip": f.lip,
                "perturbation": c, "weak_s1": weak_s1_quasinorm(spec), "rho": rho,
                "doi_weak_s1": weak_s1_quasinorm(doi_spec), "rho_doi": rho_doi,
                "bs_residual": residual, "degenerate": int(degenerate),
            })
            if cfg.emit_curves and idx == 0:
                curves.extend(_decay_curve(f"dim{dim}", spec))
    summary = _ratio_summary(rows, cfg.dimensions, ("rho", "rho_doi"))
    return ExperimentReport("rank_one", columns, rows, summary, curves)


def _doi_ensemble_instance(cfg: SweepConfig, f: LipschitzFunction, dim: int, idx: int):
    """Common machinery for the T-based sweeps: (Q, prescribed sigma, T)."""
    rng = make_rng(cfg.seed, _TAG[cfg.experiment], dim, idx)
    d1 = eigh_symmetric(random_symmetric(rng, dim))
    d2 = eigh_symmetric(random_symmetric(rng, dim))
    t, sigma = random_prescribed_spectrum(rng, dim)
    q = doi_apply(f, d1, d2, t)
    _guard_s2(q, t, f.lip)
    return q, sigma, t


def run_trace_class_sweep(cfg: SweepConfig) -> ExperimentReport:
    """S_Omega norm of doi(f, T) against lip * ||T||_S1 for trace-normalized T."""
    f = function_from_spec(cfg.function)
    columns = ["instance", "dimension", "function", "lip", "t_trace_norm", "s_Omega", "rho"]
    rows = []
    curves = []
    for dim in cfg.dimensions:
        for idx in range(cfg.ensemble):
            q, sigma, _ = _doi_ensemble_instance(cfg, f, dim, idx)
            trace = float(np.sum(sigma))
            spec = _spectrum(q)
            value = s_Omega_norm(spec)
            denom = f.lip * trace
            rows.append({
                "instance": idx, "dimension": dim, "function": f.name, "lip": f.lip,
                "t_trace_norm": trace, "s_Omega": value,
                "rho": 0.0 if denom == 0.0 else value / denom,
            })
            if cfg.emit_curves and idx == 0:
                curves.extend(_decay_curve(f"dim{dim}", spec))
    summary = _ratio_summary(rows, cfg.dimensions, ("rho",))
    return ExperimentReport("trace_class", columns, rows, summary, curves)


def run_matsaev_sweep(cfg: SweepConfig) -> ExperimentReport:
    """Operator norm of doi(f, T) against lip * ||T||_{S_omega}."""
    f = function_from_spec(cfg.function)
    columns = ["instance", "dimension", "function", "lip", "t_matsaev_norm", "op_norm", "rho"]
    rows = []
    curves = []
    for dim in cfg.dimensions:
        for idx in range(cfg.ensemble):
            q, sigma, _ = _doi_ensemble_instance(cfg, f, dim, idx)
            matsaev = s_omega_norm(sigma)
            spec = _spectrum(q)
            top = float(spec[0]) if spec.size else 0.0
            denom = f.lip * matsaev
            rows.append({
                "instance": idx, "dimension": dim, "function": f.name, "lip": f.lip,
                "t_matsaev_norm": matsaev, "op_norm": top,
                "rho": 0.0 if denom == 0.0 else top / denom,
            })
            if cfg.emit_curves and idx == 0:
                curves.extend(_decay_curve(f"dim{dim}", spec))
    summary = _ratio_summary(rows, cfg.dimensions, ("rho",))
    return ExperimentReport("matsaev", columns, rows, summary, curves)


def run_interp_sweep(cfg: SweepConfig) -> ExperimentReport:
    """Schatten p+epsilon norm of doi(f, T) against lip * ||T||_p.

    Also logs the p-to-p ratio, which is allowed to grow with dimension; the
    p-to-p+epsilon ratio is the one expected to stay bounded.
    """
    f = function_from_spec(cfg.function)
    p, eps = cfg.p, cfg.epsilon
    columns = ["instance", "dimension", "function", "lip", "p", "epsilon",
               "t_norm_p", "doi_norm_p_eps", "rho", "rho_p_to_p"]
    rows = []
    curves = []
    for dim in cfg.dimensions:
        for idx in range(cfg.ensemble):
            q, sigma, _ = _doi_ensemble_instance(cfg, f, dim, idx)
            spec = _spectrum(q)
            t_p = schatten_norm(sigma, p)
            q_pe = schatten_norm(spec, p + eps)
            q_p = schatten_norm(spec, p)
            denom = f.lip * t_p
            rows.append({
                "instance": idx, "dimension": dim, "function": f.name, "lip": f.lip,
                "p": p, "epsilon": eps, "t_norm_p": t_p, "doi_norm_p_eps": q_pe,
                "rho": 0.0 if denom == 0.0 else q_pe / denom,
                "rho_p_to_p": 0.0 if denom == 0.0 else q_p / denom,
            })
            if cfg.emit_curves and idx == 0:
                curves.extend(_decay_curve(f"dim{dim}", spec))
    summary = _ratio_summary(rows, cfg.dimensions, ("rho", "rho_p_to_p"))
    return ExperimentReport("interp", columns, rows, summary, curves)


def run_certificate_sweep(cfg: SweepConfig) -> ExperimentReport:
    """Build and verify decay certificates on random kernel operators.

    cfg.dimensions is the atom count per measure side.  For each instance and
    each n in cfg.n_values a certificate is built and verified; the fitted
    constants max_n(n * bound) and max_n(n * s_{7n}) are reported per instance.
    An unsound certificate aborts the sweep (it signals an implementation bug).
    """
    f = function_from_spec(cfg.function)
    columns = ["instance", "atoms", "function", "truncation_radius", "weak_ratio",
               "fitted_K_bound", "fitted_K_direct"]
    for n in cfg.n_values:
        columns += [f"rank_n{n}", f"bound_n{n}", f"analytic_n{n}", f"s_r_n{n}", f"s7n_n{n}"]
    rows = []
    curves = []
    fitted_bound = []
    fitted_direct = []
    max_weak = 0.0
    for atoms in cfg.dimensions:
        for idx in range(cfg.ensemble):
            rng = make_rng(cfg.seed, _TAG[cfg.experiment], atoms, idx)
            kop = random_kernel_operator(rng, f, atoms, atoms)
            spectrum = _spectrum(materialize(kop))
            row = {"instance": idx, "atoms": atoms, "function": f.name}
            k_bound = 0.0
            k_direct = 0.0
            weak_ratio = 0.0
            for n in cfg.n_values:
                cert = build_certificate(kop, n)
                report = verify_certificate(kop, cert, spectrum=spectrum)
                s7n = singular_value_at(spectrum, 7 * n)
                k_bound = max(k_bound, n * cert.empirical_bound)
                k_direct = max(k_direct, n * s7n)
                weak_ratio = report.weak_ratio
                row["truncation_radius"] = cert.truncation_radius
                row[f"rank_n{n}"] = cert.defect_rank
                row[f"bound_n{n}"] = cert.empirical_bound
                row[f"analytic_n{n}"] = cert.analytic_bound
                row[f"s_r_n{n}"] = report.singular_value
                row[f"s7n_n{n}"] = s7n
            row["weak_ratio"] = weak_ratio
            row["fitted_K_bound"] = k_bound
            row["fitted_K_direct"] = k_direct
            rows.append(row)
            fitted_bound.append(k_bound)
            fitted_direct.append(k_direct)
            max_weak = max(max_weak, weak_ratio)
            if cfg.emit_curves and idx == 0:
                curves.extend(_decay_curve(f"atoms{atoms}", spectrum))
    summary = {
        "fitted_K_bound_max": max(fitted_bound) if fitted_bound else 0.0,
        "fitted_K_direct_max": max(fitted_direct) if fitted_direct else 0.0,
        "max_weak_ratio": max_weak,
    }
    return ExperimentReport("certificate", columns, rows, summary, curves)


def _decay_curve(label: str, spectrum: np.ndarray) -> list:
    return [
        {"label": label, "j": j, "s_j": float(s), "weighted": float((1 + j) * s)}
        for j, s in enumerate(np.asarray(spectrum, dtype=float))
    ]


def _ratio_summary(rows: list, dimensions, keys) -> dict:
    per_dim = {}
    for dim in dimensions:
        sub = [r for r in rows if r["dimension"] == dim]
        per_dim[str(dim)] = {k: max((r[k] for r in sub), default=0.0) for k in keys}
    fitted = {k: max((r[k] for r in rows), default=0.0) for k in keys}
    return {"max_per_dimension": per_dim, "fitted_constant": fitted}


_RUNNERS = {
    "rank_one": run_rank_one_sweep,
    "trace_class": run_trace_class_sweep,
    "matsaev": run_matsaev_sweep,
    "interp": run_interp_sweep,
    "certificate": run_certificate_sweep,
}


def run_sweep(cfg: SweepConfig) -> ExperimentReport:
    expected = cfg.ensemble * len(cfg.dimensions)
    report = _RUNNERS[cfg.experiment](cfg)
    if len(report.rows) != expected:
        raise RuntimeError(f"report has {len(report.rows)} rows, expected {expected}")
    return report


def _format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def emit_report(report: ExperimentReport, path: str, format: str = "csv") -> None:
    """Write a report deterministically; identical reports give identical bytes.

    CSV carries the per-instance rows only (summary lives in the JSON form);
    decay curves, when present, go to a sibling '<path>.curves.csv'.
    """
    if format not in ("csv", "json"):
        raise ValidationError(f"format must be 'csv' or 'json', got {format!r}")
    try:
        if format == "csv":
            lines = [",".join(report.columns)]
            for row in report.rows:
                lines.append(",".join(_format_value(row[c]) for c in report.columns))
            with open(path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            if report.curves:
                curve_cols = ["label", "j", "s_j", "weighted"]
                lines = [",".join(curve_cols)]
                for row in report.curves:
                    lines.append(",".join(_format_value(row[c]) for c in curve_cols))
                with open(str(path) + ".curves.csv", "w") as fh:
                    fh.write("\n".join(lines) + "\n")
        else:
            payload = {
                "experiment": report.experiment,
                "columns": report.columns,
                "rows": report.rows,
                "summary": report.summary,
                "curves": report.curves,
            }
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
    except OSError as exc:
        raise ValidationError(f"cannot write report to {path}: {exc}") from exc


def read_report(path: str) -> ExperimentReport:
    """Read back a JSON report (the round-trip inverse of emit_report)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read report from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"report file {path} is not valid JSON: {exc}") from exc
    return ExperimentReport(
        experiment=data["experiment"],
        columns=list(data["columns"]),
        rows=list(data["rows"]),
        summary=data["summary"],
        curves=list(data.get("curves", [])),
    )
