"""Command-line front end.

Subcommands: `kernel eval|matrix`, `sample`, `verify identity|montecarlo|falsify|all`.
Flag values override config-file keys, which override built-in defaults.
Exit codes: 0 success/pass, 1 verification failure, 2 usage or domain error.
"""

import argparse
import sys

import numpy as np

from . import __version__
from ._backend import backend_name
from .grids import GridSpec, interior_linspace
from .kernels import (
    DomainError,
    OUParams,
    bivariate_bridge_field,
    covariance_matrix,
    exponential_cdf,
    fg_bridge_field,
    kiefer_field,
    ou_field,
    scaled_bridge_field,
    tied_down_bridge_field,
    uniform_cdf,
    wiener_field,
)
from .reporting import reports_to_json
from .sampling import FactorizationError, sample_bridge_via_wiener, sample_dense, \
    sample_ou_via_wiener, write_samples_csv
from .suites import SUITES, run_suite
from .transforms import scaled_representation, transform_fg, transform_kiefer, \
    transform_tied_down

FAMILIES = ("wiener", "ou", "bivariate", "tied-down", "scaled", "kiefer", "fg")

DEFAULTS = {
    "family": "tied-down",
    "alpha": 0.5,
    "beta": 0.5,
    "sigma": 1.0,
    "S": 1.0,
    "T": 1.0,
    "cdf": "exponential",
    "rate": 1.0,
    "grid_s": 6,
    "grid_t": 6,
    "margin": 1e-3,
    "seed": 42,
    "replicates": 100_000,
    "tol": 1e-10,
    "threads": 1,
    "out": None,
}

_TYPES = {
    "family": str, "alpha": float, "beta": float, "sigma": float, "S": float,
    "T": float, "cdf": str, "rate": float, "grid_s": int, "grid_t": int,
    "margin": float, "seed": int, "replicates": int, "tol": float,
    "threads": int, "out": str, "points": str,
}


def _read_config(path):
    """Flat key-value file: `key = value` per line, '#' comments."""
    settings = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            settings[key.replace("-", "_")] = value
    return settings


class Settings:
    """Resolved configuration: flags > config file > defaults."""

    def __init__(self, args):
        config = _read_config(args.config) if getattr(args, "config", None) else {}
        self._values = {}
        for key, default in DEFAULTS.items():
            flag = getattr(args, key, None)
            if flag is not None:
                self._values[key] = flag
            elif key in config:
                self._values[key] = _TYPES[key](config[key])
            else:
                self._values[key] = default
        for extra in ("points",):
            if hasattr(args, extra):
                value = getattr(args, extra)
                if value is None and extra in config:
                    value = config[extra]
                self._values[extra] = value
        self.validate()

    def __getattr__(self, key):
        try:
            return self._values[key]
        except KeyError:
            raise AttributeError(key) from None

    def validate(self):
        v = self._values
        if v["family"] not in FAMILIES:
            raise DomainError(f"unknown family {v['family']!r}; choose one of {', '.join(FAMILIES)}")
        for key in ("alpha", "beta", "sigma", "S", "T", "rate"):
            if not v[key] > 0:
                raise DomainError(f"--{key} must be positive, got {v[key]!r}")
        if v["cdf"] not in ("uniform", "exponential"):
            raise DomainError(f"--cdf must be 'uniform' or 'exponential', got {v['cdf']!r}")
        if not 0 < v["margin"] < 0.5:
            raise DomainError(f"--margin must lie in (0, 0.5), got {v['margin']!r}")
        for key in ("grid_s", "grid_t"):
            if v[key] < 1:
                raise DomainError(f"--{key.replace('_', '-')} must be >= 1, got {v[key]!r}")
        if v["replicates"] < 0:
            raise DomainError(f"--replicates must be >= 0, got {v['replicates']!r}")
        if v["threads"] < 1:
            raise DomainError(f"--threads must be >= 1, got {v['threads']!r}")
        if not v["tol"] > 0:
            raise DomainError(f"--tol must be positive, got {v['tol']!r}")


def _cdfs(cfg):
    if cfg.cdf == "uniform":
        return uniform_cdf(), uniform_cdf()
    return exponential_cdf(cfg.rate), exponential_cdf(cfg.rate)


def build_kernel(cfg):
    family = cfg.family
    if family == "wiener":
        return wiener_field()
    if family == "ou":
        return ou_field(OUParams(cfg.alpha, cfg.beta, cfg.sigma))
    if family == "bivariate":
        return bivariate_bridge_field()
    if family == "tied-down":
        return tied_down_bridge_field()
    if family == "scaled":
        return scaled_bridge_field(cfg.S, cfg.T, cfg.alpha, cfg.beta)
    if family == "kiefer":
        return kiefer_field()
    F, G = _cdfs(cfg)
    return fg_bridge_field(F, G)


def build_grid(cfg):
    """Interior grid per family; points stay >= margin * extent from borders."""
    family = cfg.family
    if family == "ou":
        s = np.linspace(0.0, cfg.S, cfg.grid_s)
        t = np.linspace(0.0, cfg.T, cfg.grid_t)
        return GridSpec(s, t)
    if family in ("tied-down", "bivariate"):
        s_len = t_len = 1.0
    elif family == "scaled":
        s_len, t_len = cfg.S, cfg.T
    elif family == "kiefer":
        s_len, t_len = 1.0, cfg.T
    elif family == "fg":
        F, G = _cdfs(cfg)
        s_len = F.horizon if np.isfinite(F.horizon) else cfg.S / cfg.rate * 3.0
        t_len = G.horizon if np.isfinite(G.horizon) else cfg.T / cfg.rate * 3.0
    else:  # wiener
        s_len, t_len = cfg.S, cfg.T
    return GridSpec(
        interior_linspace(cfg.grid_s, s_len, cfg.margin),
        interior_linspace(cfg.grid_t, t_len, cfg.margin),
    )


def _emit(text, out):
    if out:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_kernel_eval(cfg):
    if not cfg.points:
        raise DomainError("--points s1,t1,s2,t2 is required for kernel eval")
    parts = [p for p in str(cfg.points).split(",") if p.strip()]
    if len(parts) != 4:
        raise DomainError(f"--points needs four comma-separated reals, got {cfg.points!r}")
    s1, t1, s2, t2 = (float(p) for p in parts)
    value = build_kernel(cfg).evaluate(s1, t1, s2, t2)
    sys.stdout.write(repr(float(value)) + "\n")
    return 0


def cmd_kernel_matrix(cfg):
    kernel = build_kernel(cfg)
    grid = build_grid(cfg)
    matrix = covariance_matrix(kernel, grid)
    lines = [f"# kernel: {kernel.name}"]
    lines.append(f"# grid-s: {','.join(repr(float(x)) for x in grid.s_points)}")
    lines.append(f"# grid-t: {','.join(repr(float(x)) for x in grid.t_points)}")
    for row in matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    _emit("\n".join(lines) + "\n", cfg.out)
    return 0


def _sample(cfg, grid):
    family = cfg.family
    seed, n, threads = cfg.seed, cfg.replicates, cfg.threads
    if family == "ou":
        return sample_ou_via_wiener(OUParams(cfg.alpha, cfg.beta, cfg.sigma), grid, seed, n, threads)
    if family in ("wiener", "bivariate"):
        return sample_dense(build_kernel(cfg), grid, seed, n, threads)
    if family == "tied-down":
        rep = transform_tied_down()
    elif family == "scaled":
        rep = scaled_representation(cfg.S, cfg.T, cfg.alpha, cfg.beta)
    elif family == "kiefer":
        rep = transform_kiefer()
    else:
        rep = transform_fg(*_cdfs(cfg))
    return sample_bridge_via_wiener(rep, grid, seed, n, threads)


def cmd_sample(cfg):
    grid = build_grid(cfg)
    samples = _sample(cfg, grid)
    kernel = build_kernel(cfg)
    params = {"family": cfg.family}
    params.update({k: repr(float(v)) for k, v in
                   (("alpha", cfg.alpha), ("beta", cfg.beta), ("sigma", cfg.sigma),
                    ("S", cfg.S), ("T", cfg.T))})
    if cfg.family == "fg":
        params["cdf"] = cfg.cdf
        params["rate"] = repr(float(cfg.rate))
    import io

    buf = io.StringIO()
    write_samples_csv(buf, samples, kernel.name, params=params, seed=cfg.seed)
    _emit(buf.getvalue(), cfg.out)
    return 0


def cmd_verify(cfg, suite):
    reports = run_suite(suite, seed=cfg.seed, n_replicates=cfg.replicates,
                        threads=cfg.threads, tol=cfg.tol)
    _emit(reports_to_json(suite, reports), cfg.out)
    return 0 if all(r.passed for r in reports) else 1


def _add_common_flags(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--S", type=float)
    parser.add_argument("--T", type=float)
    parser.add_argument("--cdf", choices=("uniform", "exponential"))
    parser.add_argument("--rate", type=float)
    parser.add_argument("--grid-s", dest="grid_s", type=int)
    parser.add_argument("--grid-t", dest="grid_t", type=int)
    parser.add_argument("--margin", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--replicates", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--out")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="oufields",
        description="Planar Gaussian fields: kernels, exact sampling, verification.",
    )
    parser.add_argument("--version", action="version",
                        version=f"oufields {__version__} ({backend_name} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_kernel = sub.add_parser("kernel", help="evaluate kernels pointwise or on grids")
    ksub = p_kernel.add_subparsers(dest="kernel_command", required=True)
    p_eval = ksub.add_parser("eval", help="print one kernel value")
    p_eval.add_argument("--points", help="s1,t1,s2,t2")
    _add_common_flags(p_eval)
    p_matrix = ksub.add_parser("matrix", help="write the grid covariance matrix CSV")
    _add_common_flags(p_matrix)

    p_sample = sub.add_parser("sample", help="draw field replicates, write CSV")
    _add_common_flags(p_sample)

    p_verify = sub.add_parser("verify", help="run a verification suite, write JSON")
    p_verify.add_argument("suite", choices=SUITES)
    _add_common_flags(p_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Settings(args)
        if args.command == "kernel":
            if args.kernel_command == "eval":
                return cmd_kernel_eval(cfg)
            return cmd_kernel_matrix(cfg)
        if args.command == "sample":
            return cmd_sample(cfg)
        return cmd_verify(cfg, args.suite)
    except (DomainError, FactorizationError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
