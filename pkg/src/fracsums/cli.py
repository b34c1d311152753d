"""Command-line front end: grid scans and verification suites with CSV/JSON output."""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, field
from decimal import Decimal
from typing import Optional

import numpy as np

from . import __version__
from .asymptotics import (CONJECTURED_DELTA, DEFAULT_DCUT, HUXLEY_DELTA, c1, c2, c3,
                          error_term, fit_exponent, geometric_grid, main_term,
                          predicted_exponents)
from .config import CapacityError, FracsumsError, InsufficientDataError, THRESHOLDS
from .divisor import delta, delta_average, delta_average_shifted, delta_psi_form
from .expsum import RS_COLUMNS, dyadic_grid, rs_ratio_sweep
from .fracsum import tf_exact_fast
from .functions import get_function
from .hp import CTX, fmt_float, fmt_hp
from .psi import psi_array, psi_truncated, vaaler_error_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    f: str = "one"
    alpha: Optional[float] = None
    x: list = field(default_factory=list)
    xmin: Optional[float] = None
    xmax: Optional[float] = None
    points: Optional[int] = None
    dcut: int = DEFAULT_DCUT
    method: str = "auto"
    eps: Optional[float] = None
    seed: int = 1
    threads: int = 1
    format: str = "csv"
    out: Optional[str] = None
    margin: float = THRESHOLDS.fit_margin
    synthetic: Optional[float] = None
    H: list = field(default_factory=lambda: [10, 100, 1000])

    def grid(self, default=None):
        if self.x:
            xs = sorted(set(int(v) if float(v).is_integer() else v for v in self.x))
            return xs
        if self.points is not None or self.xmin is not None:
            lo, hi, pts = default or (1, 1, 0)
            lo = self.xmin if self.xmin is not None else lo
            hi = self.xmax if self.xmax is not None else hi
            pts = self.points if self.points is not None else pts
            return geometric_grid(lo, hi, pts)
        if default is None:
            return []
        return geometric_grid(*default)

    def echo(self):
        # threads never change results, so they stay out of the output
        d = asdict(self)
        d.pop("threads")
        d.pop("out")
        return d


class Table:
    def __init__(self, columns, rows=None):
        self.columns = list(columns)
        self.rows = list(rows or [])


def _cell(v):
    if isinstance(v, Decimal):
        return fmt_hp(v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def _json_cell(v):
    if isinstance(v, Decimal):
        return fmt_hp(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(fmt_float(v))
        return v if math.isfinite(v) else str(v)
    return v


def render(table, cfg):
    if cfg.format == "json":
        doc = {
            "meta": {"version": __version__, "config": cfg.echo()},
            "rows": [{c: _json_cell(r.get(c)) for c in table.columns} for r in table.rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_cell(r.get(c, "")) for c in table.columns])
    return buf.getvalue()


def _map(cfg, fn, items):
    if cfg.threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            return list(pool.map(fn, items))
    return [fn(v) for v in items]


# ---- subcommands ------------------------------------------------------------------

def cmd_compute(cfg):
    """Rows (x, T_f(x), main term, E(x), envelope x^((4+3a)/7 + eps))."""
    f = get_function(cfg.f, cfg.alpha)
    eps = 0.1 if cfg.eps is None else cfg.eps
    expo = predicted_exponents(f.alpha).theorem + eps
    xs = cfg.grid()
    # settle cached constants before fanning out
    if xs:
        c2(f, cfg.dcut, cfg.method)

    def row(x):
        t = tf_exact_fast(f, x)
        mt = main_term(f, x, cfg.dcut, cfg.method)
        e = CTX.subtract(t, mt.value)
        flagged = mt.uncertainty >= THRESHOLDS.constant_gate * abs(float(e))
        return dict(x=x, T=t, main_term=mt.value, E=e, envelope=float(x) ** expo,
                    const_uncertainty=mt.uncertainty, flagged=flagged)

    cols = ["x", "T", "main_term", "E", "envelope", "const_uncertainty", "flagged"]
    rows = _map(cfg, row, [x for x in xs if x >= 2])
    return Table(cols, rows), True, f"compute: {len(rows)} rows"


def cmd_constants(cfg):
    f = get_function(cfg.f, cfg.alpha)
    rows = []
    for name, fn in (("C1", c1), ("C2", c2), ("C3", c3)):
        v = fn(f, cfg.dcut, cfg.method)
        rows.append(dict(constant=name, f=f.name, midpoint=v.partial, radius=v.tail_radius,
                         D_cut=v.D_cut, method=v.method))
    cols = ["constant", "f", "midpoint", "radius", "D_cut", "method"]
    return Table(cols, rows), True, "constants: " + ", ".join(
        f"{r['constant']}={float(r['midpoint']):.12g}+-{r['radius']:.3g}" for r in rows)


def cmd_exponent_fit(cfg):
    if cfg.synthetic is not None:
        alpha = cfg.alpha if cfg.alpha is not None else 0.5
        xs = cfg.grid((1e4, 1e8, 20))
        samples = [(x, float(x) ** cfg.synthetic) for x in xs]
        flagged = 0
    else:
        f = get_function(cfg.f, cfg.alpha)
        alpha = f.alpha
        xs = [x for x in cfg.grid((1e4, 1e8, 20)) if x >= 2]
        c2(f, cfg.dcut, cfg.method)
        errs = _map(cfg, lambda x: error_term(f, x, cfg.dcut, cfg.method), xs)
        samples = [(x, e.value) for x, e in zip(xs, errs)]
        flagged = sum(e.flagged for e in errs)
    if len(samples) < 5:
        raise InsufficientDataError(f"exponent fit needs >= 5 grid points, got {len(samples)}")
    fit = fit_exponent(samples)
    ex = predicted_exponents(alpha)
    refs = [("theorem", ex.theorem), ("huxley_driven", ex.huxley_driven),
            ("zhai_wu", ex.zhai_wu), ("conditional", ex.conditional),
            ("delta_huxley", HUXLEY_DELTA), ("delta_conjectured", CONJECTURED_DELTA)]
    rows = [dict(reference=name, exponent=val, slope=fit.slope, margin=cfg.margin,
                 passed=fit.slope <= val + cfg.margin) for name, val in refs]
    ok = fit.slope <= ex.theorem + cfg.margin
    msg = (f"exponent-fit: slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
           f"rms={fit.residual_rms:.4f} points={fit.points_used} flagged={flagged} "
           f"theorem={ex.theorem:.6f} {'PASS' if ok else 'FAIL'}")
    return Table(["reference", "exponent", "slope", "margin", "passed"], rows), ok, msg


def cmd_vaaler_check(cfg):
    n = cfg.points if cfg.points is not None else 10**4
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    xs = rng.random(n)
    rows, bad = [], 0
    for H in cfg.H:
        err = np.abs(psi_array(xs) - psi_truncated(xs, H))
        bound = vaaler_error_bound(xs, H)
        excess = err - bound
        v = int(np.sum(excess > THRESHOLDS.vaaler_slack))
        bad += v
        rows.append(dict(H=H, samples=n, violations=v,
                         max_excess=float(np.max(excess, initial=-np.inf)),
                         max_error=float(np.max(err, initial=0.0))))
    ok = bad == 0
    msg = f"vaaler-check: violations={bad} {'PASS' if ok else 'FAIL'}"
    return Table(["H", "samples", "violations", "max_excess", "max_error"], rows), ok, msg


def cmd_rs_check(cfg):
    eps = THRESHOLDS.rs_eps if cfg.eps is None else cfg.eps
    rows = rs_ratio_sweep(dyadic_grid(), eps)
    worst = max((r["ratio"] for r in rows), default=0.0)
    ok = worst <= THRESHOLDS.rs_ratio_ceiling
    msg = f"rs-check: points={len(rows)} max_ratio={worst:.6g} {'PASS' if ok else 'FAIL'}"
    return Table(RS_COLUMNS, rows), ok, msg


def cmd_delta_scan(cfg):
    xs = cfg.grid((1, 1e6, 10**4))

    def row(x):
        d = delta(x)
        p = delta_psi_form(x)
        return dict(x=x, delta=d, psi_form=p, residual=float(d) - p)

    rows = _map(cfg, row, xs)
    worst = max((abs(r["residual"]) for r in rows), default=0.0)
    ok = worst <= THRESHOLDS.lemma1_residual
    msg = f"delta-scan: points={len(rows)} max_residual={worst:.6f} {'PASS' if ok else 'FAIL'}"
    return Table(["x", "delta", "psi_form", "residual"], rows), ok, msg


def prop_grid(xmin=1e3, xmax=1e7):
    lo, hi = round(math.log10(xmin)), round(math.log10(xmax))
    return [10**k for k in range(lo, hi + 1)]


def cmd_prop_check(cfg):
    eps = THRESHOLDS.prop_eps if cfg.eps is None else cfg.eps
    alphas = [cfg.alpha] if cfg.alpha is not None else [-1.0, 1.0]
    xs = prop_grid(cfg.xmin or 1e3, cfg.xmax or 1e7)
    jobs = []
    for X in xs:
        D = 1
        while D <= X:
            for a in alphas:
                jobs.append(("average", X, D, a))
            for s in (0, 1):
                if 2 * D + s <= X:
                    jobs.append(("shifted", X, D, s))
            D *= 2

    def run(job):
        kind, X, D, v = job
        if kind == "average":
            rep = delta_average(X, D, v, eps)
            return dict(prop=kind, x="", X=X, D=D, alpha=v, shift="", lhs=rep.lhs,
                        bound=rep.bound, ratio=rep.ratio, regime=rep.regime)
        rep = delta_average_shifted(X, D, v, eps)
        return dict(prop=kind, x=X, X=X / D, D=D, alpha="", shift=v, lhs=rep.lhs,
                    bound=rep.bound, ratio=rep.ratio, regime=rep.regime)

    rows = _map(cfg, run, jobs)
    parts, ok = [], True
    for kind in ("average", "shifted"):
        for regime in ("D>=sqrtX", "D<sqrtX"):
            rs = [r["ratio"] for r in rows if r["prop"] == kind and r["regime"] == regime]
            if rs:
                parts.append(f"{kind}[{regime}] max_ratio={max(rs):.4g}")
                ok &= max(rs) <= THRESHOLDS.prop_ratio_ceiling
    msg = "prop-check: " + " ".join(parts) + (" PASS" if ok else " FAIL")
    cols = ["prop", "x", "X", "D", "alpha", "shift", "lhs", "bound", "ratio", "regime"]
    return Table(cols, rows), ok, msg


COMMANDS = {
    "compute": cmd_compute,
    "constants": cmd_constants,
    "exponent-fit": cmd_exponent_fit,
    "vaaler-check": cmd_vaaler_check,
    "rs-check": cmd_rs_check,
    "delta-scan": cmd_delta_scan,
    "prop-check": cmd_prop_check,
}


def build_parser():
    p = argparse.ArgumentParser(prog="fracsums", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--f", default="one")
        s.add_argument("--alpha", type=float)
        s.add_argument("--x", type=float, action="append", default=[])
        s.add_argument("--xmin", type=float)
        s.add_argument("--xmax", type=float)
        s.add_argument("--points", type=int)
        s.add_argument("--dcut", type=lambda v: int(float(v)), default=DEFAULT_DCUT)
        s.add_argument("--method", choices=("auto", "series", "closed"), default="auto")
        s.add_argument("--eps", type=float)
        s.add_argument("--seed", type=int, default=1)
        s.add_argument("--threads", type=int, default=1)
        s.add_argument("--format", choices=("csv", "json"), default="csv")
        s.add_argument("--out")
        s.add_argument("--margin", type=float, default=THRESHOLDS.fit_margin)
        s.add_argument("--synthetic", type=float, nargs="?", const=0.5)
        s.add_argument("--H", type=int, action="append")
    return p


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    d = vars(ns)
    if d["H"] is None:
        d["H"] = [10, 100, 1000]
    d["x"] = [int(v) if float(v).is_integer() else v for v in d["x"]]
    if not (0 <= d["seed"] < 2**64):
        raise SystemExit(EXIT_USAGE)
    return RunConfig(**d)


def run(cfg, stdout=None, stderr=None):
    """Execute ``cfg``; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        table, ok, msg = COMMANDS[cfg.subcommand](cfg)
    except CapacityError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_CAPACITY
    except (FracsumsError, ValueError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    text = render(table, cfg)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    print(msg, file=stderr)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None):
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
