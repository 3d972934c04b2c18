"""Command-line front end: ``dioph-lab <subcommand> [options]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
3 an enumeration or precision cap was hit.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

import mpmath

from . import dynamics as dyn
from . import farey, kernel, singular, transference
from .config import ConfigError, RunConfig, load_config
from .exact import to_json_value
from .intervals import PrecisionExhausted, precision
from .lattice import ResourceError
from .report import build_report, stopwatch, timing_path, write_csv, write_json

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3

SUBCOMMANDS = ("check-bad", "check-di", "transfer", "build-fractal", "flow", "s1", "cover")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dioph-lab", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="TOML file with flat keys; flags override it")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--A", help="matrix as inline JSON, e.g. '[[\"1/3\",\"1/3\"]]'")
    p.add_argument("--b", help="vector: comma list or JSON; surds like 'sqrt(2)-1' allowed")
    p.add_argument("--x", help="Farey point as a rational vector (s1)")
    for name in ("eps", "X", "T", "t", "Q"):
        p.add_argument(f"--{name}", help="schedule: 'a:b' (2^a..2^b), 'start:step:count' or comma list")
    p.add_argument("--C")
    p.add_argument("--mode", help="transfer: nec|suf|DU|sandwich; build-fractal: sing_b|di_eps")
    p.add_argument("--eta")
    p.add_argument("--delta")
    p.add_argument("--depth", type=int)
    p.add_argument("--N-cap", dest="N_cap", type=int)
    p.add_argument("--s")
    p.add_argument("--alpha")
    p.add_argument("--k", type=int)
    p.add_argument("--Kmax", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv", help="CSV output path (check-di, flow, build-fractal)")
    p.add_argument("--gnuplot", help="gnuplot script path (flow)")
    p.add_argument("--workers", type=int)
    return p


def config_from_args(argv) -> RunConfig:
    ns = _parser().parse_args(argv)
    over = {k: v for k, v in vars(ns).items() if k != "config"}
    if over.get("workers") is None and os.environ.get("DIOPH_LAB_WORKERS"):
        try:
            over["workers"] = int(os.environ["DIOPH_LAB_WORKERS"])
        except ValueError:
            raise ConfigError("DIOPH_LAB_WORKERS must be an integer") from None
    return load_config(ns.config, over)


def _need(cfg: RunConfig, *names):
    for name in names:
        v = getattr(cfg, name)
        if v is None or (isinstance(v, list) and not v):
            raise ConfigError(f"{cfg.subcommand} needs --{name}")


def _b_or_zero(cfg):
    return cfg.b if cfg.b is not None else [Fraction(0)] * cfg.m


# --------------------------------------------------------------------------
# subcommands; each returns (passed, check tags, body)


def run_check_bad(cfg):
    _need(cfg, "A", "eps")
    pair = kernel.AffinePair(cfg.A, _b_or_zero(cfg))
    Qmax = int(max(cfg.Q)) if cfg.Q else 1024
    rows = []
    for eps in cfg.eps:
        w = kernel.eps_bad_witness(pair, eps, Qmax)
        if isinstance(w, kernel.CounterexampleFound):
            rows.append({"eps": str(eps), "counterexample": list(w.q), "value": to_json_value(w.value)})
        else:
            rows.append({"eps": str(eps), "counterexample": None, "Qmax": Qmax})
    passed = all(r["counterexample"] is None for r in rows)
    return passed, ["eps-badly approximable up to Qmax"], {"rows": rows}


def run_check_di(cfg):
    _need(cfg, "A", "eps", "X")
    tA = kernel.transpose(cfg.A)
    prof = singular.sing_for_b_profile(tA, _b_or_zero(cfg), cfg.eps, cfg.X)
    grid = []
    for eps, row in prof.verdict_rows():
        grid.append([str(eps)] + ["" if y is None else " ".join(map(str, y)) for y in row])
    if cfg.csv:
        write_csv(cfg.csv, ["eps"] + [str(X) for X in cfg.X], grid)
    body = {"thresholds": [None if t is None else str(t) for t in prof.thresholds], "grid": grid,
            "consistent": prof.consistent}
    return prof.consistent, ["twisted Dirichlet improvability on a schedule tail"], body


def run_transfer(cfg):
    mode = cfg.mode or "sandwich"
    if mode == "DU":
        _need(cfg, "m", "n", "C", "X")
        D, U = transference.transfer_DU(cfg.m, cfg.n, cfg.C, cfg.X[0])
        return True, ["homogeneous transfer constants"], {"D": to_json_value(D), "U": to_json_value(U)}
    _need(cfg, "A")
    b = _b_or_zero(cfg)
    if mode in ("nec", "suf"):
        _need(cfg, "C", "X")
        out = []
        ok = True
        for X in cfg.X:
            if mode == "nec":
                r = transference.check_necessary(cfg.A, b, cfg.C, X)
                ok &= not isinstance(r, transference.HomogeneousWitnessViolated)
            else:
                r = transference.check_sufficient(cfg.A, b, cfg.C, X)
            out.append({"X": str(X), "result": type(r).__name__,
                        "detail": {k: to_json_value(v) for k, v in vars(r).items()}})
        tag = "necessary direction" if mode == "nec" else "sufficient direction"
        return ok, [f"inhomogeneous transference, {tag}"], {"rows": out}
    if mode != "sandwich":
        raise ConfigError(f"unknown transfer mode {mode!r}")
    _need(cfg, "X")
    eps = cfg.eps[0] if cfg.eps else Fraction(1)
    T = cfg.T or cfg.X
    rep = transference.sandwich_check(cfg.A, b, eps, cfg.X, T)
    rows = [{"direction": r.direction, "scale": str(r.scale), "mapped": to_json_value(r.mapped),
             "premise": r.premise, "witness": None if r.witness is None else list(r.witness),
             "ok": r.ok, "detail": r.detail} for r in rep.rows]
    body = {"eps": str(eps), "c1": to_json_value(rep.constants.c1), "c2": to_json_value(rep.constants.c2),
            "rows": rows, "violations": len(rep.violations)}
    return rep.ok, ["transference sandwich"], body


def run_build_fractal(cfg):
    _need(cfg, "n", "b")
    if len(cfg.b) != 1:
        raise ConfigError("build-fractal takes a scalar --b")
    mode = cfg.mode or "sing_b"
    sched = farey.make_schedule(cfg.eta, cfg.delta, cfg.n, N_cap=cfg.N_cap)
    root = farey.QPoint((0,) * cfg.n, 1)
    tree = farey.build_tree(root, sched, cfg.b[0], cfg.depth, mode=mode)
    s = cfg.s if cfg.s is not None else Fraction(cfg.n * cfg.n, cfg.n + 1) - cfg.delta
    rep = farey.validate_selfsimilar(tree, s)
    chains = [farey.chain_certificate(tree, p, raise_on_failure=False) for p in tree.paths()]
    records = [r for v in tree.nodes for r in v.counts]
    half = sum(1 for r in records if not r.half_bound)
    per_level = {str(k): {"nodes": v["nodes"], "log10_min_ratio": round(math.log10(v["min_ratio"]), 6)}
                 for k, v in sorted(rep.per_level.items())}
    body = {
        "tree": tree.to_json(),
        "validation": {
            "s": str(s),
            "nested": rep.all_nested,
            "rho_diam_decrease": rep.all_rho_decrease,
            "max_separation": rep.max_separation,
            "per_level": per_level,
            "count_records": len(records),
            "half_bound_failures": half,
            "chains_certified": sum(1 for c in chains if c.ok),
            "paths": len(chains),
        },
    }
    if cfg.csv:
        write_csv(cfg.csv, farey.TREE_CSV_HEADER, farey.tree_csv_rows(tree))
    passed = rep.all_nested and rep.all_rho_decrease and half == 0 and all(c.ok for c in chains)
    tags = ["ball nesting", "rho-scaled diameter decrease", "counting sandwich", "chain certificate"]
    return passed, tags, body


def _grid_from_cfg(cfg):
    _need(cfg, "A", "t")
    return dyn.make_grid(cfg.A, _b_or_zero(cfg))


def run_flow(cfg):
    grid = _grid_from_cfg(cfg)
    tr = dyn.trajectory(grid, cfg.t)
    rows = []
    with precision(30):
        for s in tr.samples:
            d, d0 = s.Delta.at(s.t), s.Delta0.at(s.t) if s.Delta0 is not None else None
            rows.append([str(s.t), mpf_str(d.a), mpf_str(d.b),
                         "" if d0 is None else mpf_str(d0.a), "" if d0 is None else mpf_str(d0.b),
                         " ".join(str(x) for x in s.argmin)])
    header = ["t", "Delta_lo", "Delta_hi", "Delta0_lo", "Delta0_hi", "argmin"]
    if cfg.csv:
        write_csv(cfg.csv, header, rows)
        if cfg.gnuplot:
            write_gnuplot(cfg.gnuplot, cfg.csv)
    body = {"samples": [{"t": str(s.t), "Delta": s.Delta.to_json(),
                         "Delta0": None if s.Delta0 is None else s.Delta0.to_json(),
                         "argmin": [str(x) for x in s.argmin], "ties": s.ties} for s in tr.samples]}
    return True, ["grid shortest vector along the flow"], body


def mpf_str(x) -> str:
    """A degenerate interval endpoint as a plain decimal (25 significant digits)."""
    return mpmath.nstr(mpmath.mp.make_mpf(x._mpi_[0]), 25)


def write_gnuplot(path, csv_path):
    with open(path, "w") as fh:
        fh.write("set datafile separator ','\n")
        fh.write("set logscale y\nset xlabel 't'\nset key top left\n")
        fh.write(f"plot '{csv_path}' using 1:2 skip 1 with linespoints title 'Delta', \\\n")
        fh.write(f"     '{csv_path}' using 1:4 skip 1 with linespoints title 'Delta0'\n")


def _qpoint(vec) -> farey.QPoint:
    q = 1
    for v in vec:
        q = q * Fraction(v).denominator // math.gcd(q, Fraction(v).denominator)
    return farey.QPoint(tuple(int(Fraction(v) * q) for v in vec), q)


def run_s1(cfg):
    _need(cfg, "x", "t")
    x = _qpoint(cfg.x)
    L = farey.farey_lattice(x)
    eps = cfg.eps[0] if cfg.eps else cfg.eta / 4
    rows = []
    for t in cfg.t:
        r = farey.s1_diagnostic(L, eps, cfg.N_cap, t)
        rows.append({"t": str(t), "exponent": str(r.exponent), "N": r.N, "value": repr(r.value),
                     "comparator": repr(r.comparator), "ratio": repr(r.ratio),
                     "exact": None if r.exact is None else str(r.exact), "per_k": [list(p) for p in r.per_k]})
    return True, ["cone decomposition sum"], {"x": x.to_json(), "eps": str(eps), "rows": rows}


def run_cover(cfg):
    _need(cfg, "A")
    tA = kernel.transpose(cfg.A)
    m, n = len(cfg.A), len(cfg.A[0])
    if m != 1:
        raise ConfigError("cover supports m = 1")
    seq = kernel.best_approx_sequence(tA, cfg.Kmax, check_rank=False)
    gam = kernel.gamma_sequence(seq, m, n)
    alpha = cfg.alpha if cfg.alpha is not None else Fraction(1, 4)
    if cfg.k not in gam.gammas:
        raise ConfigError(f"k must be one of {gam.keys()}")
    cover = kernel.complement_cover(seq, gam, alpha, cfg.k)
    y = seq.entries[cfg.k - 1].y
    r = alpha * gam[cfg.k]
    escapes = []
    den = None
    if not cover.full:
        from .campaigns import mesh_den

        den = mesh_den(cover.radius)
        escapes = kernel.cover_escapes(lambda v: not r < kernel._dot_dist((v,), y), cover, den)
    body = {"Y": seq.Y, "k": cfg.k, "alpha": str(alpha), "gamma_k": to_json_value(gam[cfg.k]),
            "full": cover.full, "intervals": cover.count, "mesh_den": den, "escapes": [str(e) for e in escapes]}
    if cfg.s is not None:
        h = kernel.hausdorff_sum(seq.Y, cfg.s, cfg.delta, m, n)
        body["hausdorff"] = {"exponent": str(h.exponent), "verdict": h.verdict, "window": h.window}
    return not escapes, ["complement cover", "Hausdorff sum"], body


RUNNERS = {
    "check-bad": run_check_bad,
    "check-di": run_check_di,
    "transfer": run_transfer,
    "build-fractal": run_build_fractal,
    "flow": run_flow,
    "s1": run_s1,
    "cover": run_cover,
}


def run(cfg: RunConfig) -> int:
    with stopwatch() as clock:
        passed, tags, body = RUNNERS[cfg.subcommand](cfg)
    write_json(cfg.out, build_report(cfg, tags, passed, body))
    write_json(timing_path(cfg.out), clock)
    return EXIT_PASS if passed else EXIT_FAIL


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
        code = run(cfg)
    except (ConfigError, transference.DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceError, PrecisionExhausted) as exc:
        print(f"resource limit: {exc} (narrow the schedules or raise the cap)", file=sys.stderr)
        return EXIT_RESOURCE
    print(f"{cfg.subcommand}: {'PASS' if code == EXIT_PASS else 'FAIL'} -> {cfg.out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
