"""Command-line front end.

Exit status: 0 on success, 2 when a verification residual exceeds the tolerance,
1 on usage or parameter errors.  Output is JSON (default) or CSV, written to
``--output`` or standard output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import JMatrixError
from .jacobi import eigenvalues, golub_welsch, truncate_blocks
from .operators import MODELS, build_model
from .oracle import verify_tridiagonal
from .recurrences import Family, family_coeffs
from .spectra import SpectrumReport, contained, determinacy, jsonable, qhermite_support, spectrum_report, zero_bounds

COMMANDS = ("build", "verify", "spectrum", "zeros", "determinacy", "quadrature", "qhermite-support")
PARAMS = ("alpha", "beta", "c", "gamma", "xi", "eta", "q", "t1", "t2", "nu")
FAMILY_PARAMS = {"alpha": "alpha", "beta": "beta", "c": "c", "q": "q", "t1": "t1", "t2": "t2", "nu": "nu",
                 "lam": "lam", "phi": "phi"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model: Optional[str] = None
    params: dict = field(default_factory=dict)
    N: int = 20
    tol: float = 1e-9
    output: Optional[str] = None
    format: str = "json"
    family: Optional[str] = None
    a: float = 0.7
    K: int = 60
    scan: int = 200
    variable: str = "E"
    plotdata: Optional[str] = None
    allow_reducible: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.N < 1:
            raise UsageError("--N must be at least 1")
        needs_model = self.command in ("build", "verify", "spectrum", "zeros", "determinacy")
        if needs_model and self.model not in MODELS:
            raise UsageError(f"--model must be one of {', '.join(sorted(MODELS))}")
        if self.command == "quadrature" and self.family is None and self.model is None:
            raise UsageError("quadrature needs --family or --model")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jmatrix", description="Tridiagonal (J-matrix) representations of differential and q-difference operators.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--model", choices=sorted(MODELS))
    p.add_argument("--family", choices=[f.value for f in Family], help="orthogonal family for `quadrature`")
    for name in PARAMS:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--lam", type=float, help="Meixner-Pollaczek lambda (quadrature only)")
    p.add_argument("--phi", type=float, help="Meixner-Pollaczek phi (quadrature only)")
    p.add_argument("--a", type=float, default=0.7, help="extremal-measure parameter for q^-1-Hermite")
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--K", type=int, default=60, help="lattice half-width for qhermite-support")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--scan", type=int, default=200, help="scan length for determinacy")
    p.add_argument("--variable", choices=("E", "x"), default="E",
                   help="coefficients in the energy E or the model variable x")
    p.add_argument("--allow-reducible", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o")
    p.add_argument("--plotdata", help="also write (N, index, value) triples for plotting")
    return p


def parse_config(argv) -> RunConfig:
    ns = make_parser().parse_args(argv)
    params = {k: getattr(ns, k) for k in PARAMS + ("lam", "phi") if getattr(ns, k) is not None}
    cfg = RunConfig(command=ns.command, model=ns.model, params=params, N=ns.N, tol=ns.tol, output=ns.output,
                    format=ns.format, family=ns.family, a=ns.a, K=ns.K, scan=ns.scan, variable=ns.variable,
                    plotdata=ns.plotdata, allow_reducible=ns.allow_reducible)
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------- output helpers

def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _write(cfg: RunConfig, payload: dict, table=None) -> None:
    if cfg.format == "csv":
        if table is None:
            raise UsageError(f"{cfg.command} has no CSV form")
        text = _csv_text(*table)
    else:
        text = json.dumps(jsonable(payload), indent=2) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_plotdata(report: SpectrumReport, path) -> None:
    """CSV of (N, index, value, kind) rows: one per eigenvalue, plus predicted values."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "index", "value", "kind"])
        for i, v in enumerate(report.eigenvaluesDesc, start=1):
            w.writerow([report.truncSize, i, repr(float(v)), "eigenvalue"])
        if report.predictedDiscrete is not None:
            for k, v in enumerate(report.predictedDiscrete):
                w.writerow([report.truncSize, k, repr(float(v)), "predicted"])


def _model_kwargs(cfg: RunConfig) -> dict:
    allowed = MODELS[cfg.model].defaults
    extra = sorted(set(cfg.params) - set(allowed))
    if extra:
        raise UsageError(f"model {cfg.model} does not take {', '.join('--' + e for e in extra)}")
    kw = dict(cfg.params)
    if cfg.allow_reducible:
        if cfg.model != "laguerre-s":
            raise UsageError("--allow-reducible applies to laguerre-s only")
        kw["allow_reducible"] = True
    return kw


# --------------------------------------------------------------------------- commands

def _cmd_build(cfg):
    op = build_model(cfg.model, **_model_kwargs(cfg))
    d = op.descriptor(cfg.N)
    b, a = d["coefficients"]["b"], d["coefficients"]["a"]
    rows = [(n, b[n], a[n - 1] if n else "") for n in range(cfg.N)]
    _write(cfg, d, (["n", "b_n", "a_n"], rows))
    return 0


def _cmd_verify(cfg):
    op = build_model(cfg.model, **_model_kwargs(cfg))
    rep = verify_tridiagonal(op, cfg.N, cfg.tol, a_ext=cfg.a)
    d = {"provenance": op.provenance, **rep.to_dict()}
    _write(cfg, d, (list(d), [[json.dumps(jsonable(v)) if isinstance(v, (dict, list)) else v for v in d.values()]]))
    if not rep.passed:
        print(f"verification failed: residual {rep.maxTridiagResidual:.3e}, leak {rep.maxOffTridiagLeak:.3e}, "
              f"null row {rep.nullRowDefect:.3e} (tol {cfg.tol:g})", file=sys.stderr)
        return 2
    return 0


def _cmd_spectrum(cfg):
    op = build_model(cfg.model, **_model_kwargs(cfg))
    if cfg.N < 2:
        raise UsageError("spectrum needs --N >= 2")
    rep = spectrum_report(op, cfg.N, max(cfg.scan, 100))
    rows = [(i, v) for i, v in enumerate(rep.eigenvaluesDesc, start=1)]
    _write(cfg, rep.to_dict(), (["index", "eigenvalue"], rows))
    if cfg.plotdata:
        emit_plotdata(rep, cfg.plotdata)
    return 0


def _cmd_zeros(cfg):
    op = build_model(cfg.model, **_model_kwargs(cfg))
    if cfg.N < 2:
        raise UsageError("zeros needs --N >= 2")
    coeffs = op.in_x() if cfg.variable == "x" else op.orthonormal()
    A, B = zero_bounds(coeffs, cfg.N)
    eig = np.sort(np.concatenate([eigenvalues(T) for T in truncate_blocks(coeffs, cfg.N)]))[::-1]
    inside = contained(eig, A, B)
    d = {"model": op.model, "params": dict(op.params), "provenance": op.provenance, "variable": cfg.variable,
         "N": cfg.N, "A": A, "B": B, "zerosDesc": eig, "contained": inside}
    _write(cfg, d, (["index", "zero"], [(i, v) for i, v in enumerate(eig, start=1)]))
    return 0 if inside else 2


def _cmd_determinacy(cfg):
    op = build_model(cfg.model, **_model_kwargs(cfg))
    coeffs = op.in_x() if cfg.variable == "x" else op.orthonormal()
    v = determinacy(coeffs, max(cfg.scan, 100))
    d = {"model": op.model, "params": dict(op.params), "provenance": op.provenance, "variable": cfg.variable,
         **v.to_dict()}
    _write(cfg, d)
    return 0


def _cmd_quadrature(cfg):
    if cfg.family is not None:
        kw = {FAMILY_PARAMS[k]: v for k, v in cfg.params.items() if k in FAMILY_PARAMS}
        spec = family_coeffs(cfg.family, **kw)
    else:
        op = build_model(cfg.model, **_model_kwargs(cfg))
        if op.basis is None:
            raise UsageError(f"model {cfg.model} has no basis family")
        spec = op.basis
    rule = golub_welsch(spec.orthonormal, cfg.N, spec.measure.total_mass)
    d = {"family": spec.family.value, "params": spec.params.as_dict(), "N": cfg.N, "totalMass": rule.total_mass,
         "nodes": rule.nodes, "weights": rule.weights}
    _write(cfg, d, (["node", "weight"], list(zip(rule.nodes, rule.weights))))
    return 0


def _cmd_qhermite_support(cfg):
    q = cfg.params.get("q", 0.5)
    k, x, m = qhermite_support(cfg.a, q, cfg.K)
    d = {"a": cfg.a, "q": q, "K": cfg.K, "k": k, "x": x, "mass": m, "totalMass": float(np.sum(m))}
    _write(cfg, d, (["k", "x", "mass"], list(zip(k.tolist(), x, m))))
    return 0


_DISPATCH = {
    "build": _cmd_build, "verify": _cmd_verify, "spectrum": _cmd_spectrum, "zeros": _cmd_zeros,
    "determinacy": _cmd_determinacy, "quadrature": _cmd_quadrature, "qhermite-support": _cmd_qhermite_support,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return _DISPATCH[cfg.command](cfg)
    except (UsageError, JMatrixError, ValueError) as exc:
        print(f"jmatrix {cfg.command}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"jmatrix: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
