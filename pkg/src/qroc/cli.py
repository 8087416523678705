"""Command-line front end: ``qroc <command> [options]``.

Every command writes CSV tables, a ``results.json`` with the scalar results
and an SVG figure into ``--out``. Exit codes: 0 success, 2 invalid input,
3 infeasible unambiguous discrimination, 4 a numerical routine failed to
converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import geometry, io, plotting
from .classical import bhattacharyya, optimal_roc
from .errors import InfeasiblePair, NoConvergence, QrocError, ValidationError
from .linalg import EIG_TOL, fidelity, random_density, trace_distance
from .quantum import (
    DEFAULT_GRID,
    DEFAULT_SAMPLES_PER_RANK,
    feasible_region,
    helstrom_sweep,
    prior_mixture_points,
    pure_ellipse,
    pure_state,
    trace_distance_readout,
)
from .similarity import (
    fidelity_polyline,
    pure_b_closed_form,
    pure_b_quadrature,
    quantum_bhattacharyya,
)
from .unambiguous import build_povm, feasibility, success_rates

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_NO_CONVERGENCE = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    lambda_grid_size: int = DEFAULT_GRID
    samples_per_rank: int = DEFAULT_SAMPLES_PER_RANK
    tol_b: float = 1e-6
    eig_tol: float = EIG_TOL
    output_dir: Path = Path(".")
    fmt: str = "all"

    def __post_init__(self):
        if self.tol_b <= 0 or self.eig_tol <= 0:
            raise ValidationError("tolerances must be positive")
        if self.lambda_grid_size < 2:
            raise ValidationError("--lambda-grid needs at least 2 points")
        if self.samples_per_rank < 1:
            raise ValidationError("--samples-per-rank must be positive")
        if self.fmt not in ("csv", "json", "svg", "all"):
            raise ValidationError(f"unknown format {self.fmt!r}")

    def wants(self, kind: str) -> bool:
        return self.fmt in (kind, "all")

    @property
    def lambda_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.lambda_grid_size)


class _Writer:
    """Collects the files written by a command, honouring ``--format``."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = cfg.output_dir
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def csv(self, name, header, rows):
        if self.cfg.wants("csv"):
            self.files.append(io.write_csv(self.out / name, header, rows).name)

    def curve(self, name, pts):
        self.csv(name, ["fp", "tp"], np.clip(np.asarray(pts, dtype=float).reshape(-1, 2), 0.0, 1.0))

    def svg(self, name, draw, *args):
        if self.cfg.wants("svg"):
            self.files.append(draw(*args, self.out / name).name)

    def results(self, obj):
        if self.cfg.wants("json"):
            self.files.append(io.write_json(self.out / "results.json", obj).name)


def _region_from_curve(curve: np.ndarray) -> np.ndarray:
    # the region is symmetric under complementing the decision
    return geometry.convex_hull(np.vstack([curve, 1.0 - curve]))


def cmd_classical(args, cfg: RunConfig) -> dict:
    P, Q = io.read_distribution(args.p_file), io.read_distribution(args.q_file)
    curve = optimal_roc(P, Q)
    region = _region_from_curve(curve.points)
    w = _Writer(cfg)
    w.curve("region.csv", region)
    w.curve("optimal_roc.csv", curve.points)
    res = {"bhattacharyya": bhattacharyya(P, Q),
           "trace_distance": trace_distance_readout(curve),
           "optimal_vertices": len(curve)}
    w.results(res)
    w.svg("fig1.svg", plotting.classical_region, region, curve.points)
    return res


def _helstrom_accessible(theta_p, theta_q, alphas) -> np.ndarray:
    # a projector is a Helstrom measurement (or its complement) where the
    # ellipse has a non-negative slope
    return np.sin(theta_p - alphas) * np.sin(theta_q - alphas) >= -1e-12


def cmd_pure(args, cfg: RunConfig) -> dict:
    tp_, tq_ = args.theta_p, args.theta_q
    rho_p, rho_n = pure_state(tp_), pure_state(tq_)
    alphas = np.linspace(0.0, 2 * np.pi, args.n_alpha, endpoint=False)
    ellipse = pure_ellipse(tp_, tq_, alphas=alphas)
    acc = _helstrom_accessible(tp_, tq_, alphas)
    sweep = helstrom_sweep(rho_p, rho_n, cfg.lambda_grid)
    mix = prior_mixture_points(rho_p, rho_n, cfg.lambda_grid)
    F = fidelity(rho_p, rho_n)
    touch = np.array([[F, 1.0], [0.0, 1.0 - F], [1.0 - F, 0.0], [1.0, F]])
    # classifiers acting on computational-basis outcomes
    p, q = math.cos(tp_ / 2) ** 2, math.cos(tq_ / 2) ** 2
    classical = _region_from_curve(optimal_roc([p, 1 - p], [q, 1 - q]).points)
    gap = abs(math.remainder(tq_ - tp_, 2 * math.pi))

    w = _Writer(cfg)
    w.csv("ellipse.csv", ["alpha", "fp", "tp", "helstrom_accessible"],
          [(a, *pt, int(f)) for a, pt, f in zip(alphas, np.clip(ellipse, 0, 1), acc)])
    w.csv("helstrom_sweep.csv", ["lambda", "fp", "tp", "rank"],
          [(lam, *pt, r) for lam, pt, r in sweep])
    w.curve("classical_region.csv", classical)
    w.curve("touch_points.csv", touch)
    w.csv("mixture_points.csv", ["lambda", "eigen_index", "fp", "tp"],
          [(lam, i, *mix[j, i]) for j, lam in enumerate(cfg.lambda_grid) for i in range(mix.shape[1])])
    res = {"theta_p": tp_, "theta_q": tq_, "fidelity": F, "sqrt_fidelity": math.sqrt(F),
           "trace_distance": trace_distance(rho_p, rho_n),
           "trace_distance_readout": trace_distance_readout(sweep),
           "bhattacharyya_quadrature": pure_b_quadrature(tp_, tq_),
           "bhattacharyya_closed_form": pure_b_closed_form(gap)}
    w.results(res)
    w.svg("fig2.svg", plotting.pure_state_figure, ellipse, acc, sweep.points, sweep.complements,
          mix, classical, touch)
    return res


def cmd_bhatta_scan(args, cfg: RunConfig) -> dict:
    if args.n_points < 2:
        raise ValidationError("--n-points must be at least 2")
    theta = np.linspace(0.0, np.pi, args.n_points)
    bq = np.array([pure_b_quadrature(0.0, t) for t in theta])
    bc = np.array([pure_b_closed_form(t) for t in theta])
    sf = np.abs(np.cos(theta / 2))
    sf[-1] = 0.0  # cos(pi/2) rounds to 6e-17
    w = _Writer(cfg)
    w.csv("bhattacharyya_scan.csv", ["theta_q", "b_quadrature", "b_closed_form", "sqrt_fidelity"],
          zip(theta, bq, bc, sf))
    res = {"n_points": args.n_points,
           "max_closed_form_deviation": float(np.max(np.abs(bq - bc))),
           "max_b_minus_sqrt_fidelity": float(np.max(bq - sf)),
           "b_below_sqrt_fidelity": bool(np.all(bq <= sf + 1e-6))}
    w.results(res)
    w.svg("fig3.svg", plotting.bhattacharyya_scan, theta, bq, sf)
    return res


def _state_pair(args, cfg: RunConfig):
    if args.random is not None:
        if args.random < 2:
            raise ValidationError("--random needs a dimension of at least 2")
        rng = np.random.default_rng(cfg.seed)
        return random_density(args.random, rng), random_density(args.random, rng), True
    if not (args.rho_p and args.rho_n):
        raise ValidationError("give two state files or --random DIM")
    return io.read_state(args.rho_p), io.read_state(args.rho_n), False


def cmd_general(args, cfg: RunConfig) -> dict:
    rho_p, rho_n, generated = _state_pair(args, cfg)
    region = feasible_region(rho_p, rho_n, cfg.samples_per_rank, cfg.seed, cfg.lambda_grid)
    sweep = helstrom_sweep(rho_p, rho_n, cfg.lambda_grid)
    fpoly = fidelity_polyline(rho_p, rho_n)
    report = quantum_bhattacharyya(rho_p, rho_n, cfg.tol_b)
    F = fidelity(rho_p, rho_n)

    w = _Writer(cfg)
    if generated and cfg.wants("json"):
        io.write_state(cfg.output_dir / "rho_p.json", rho_p)
        io.write_state(cfg.output_dir / "rho_n.json", rho_n)
        w.files += ["rho_p.json", "rho_n.json"]
    for r, pts in sorted(region.rank_clouds.items()):
        w.curve(f"rank_{r}_points.csv", pts)
    w.curve("hull.csv", region.hull)
    w.csv("helstrom_sweep.csv", ["lambda", "fp", "tp", "rank"], [(lam, *pt, r) for lam, pt, r in sweep])
    w.curve("fidelity_polyline.csv", fpoly.points)
    w.curve("bhattacharyya_polyline.csv", report.curve.points)
    res = {"dim": rho_p.dim,
           "trace_distance": trace_distance(rho_p, rho_n),
           "trace_distance_readout": trace_distance_readout(sweep),
           "fidelity": F, "sqrt_fidelity": math.sqrt(F),
           "quantum_bhattacharyya": report.value,
           "bhattacharyya_levels": report.refinement_levels,
           "bhattacharyya_last_delta": report.last_delta,
           "samples_per_rank": cfg.samples_per_rank, "seed": cfg.seed}
    w.results(res)
    w.svg("fig4.svg", plotting.general_region, region.rank_clouds, region.hull, sweep.points, fpoly.points)
    return res


def cmd_unambiguous(args, cfg: RunConfig) -> dict:
    rho_p, rho_n, _ = _state_pair(args, cfg)
    rep = feasibility(rho_p, rho_n, cfg.eig_tol)
    info = {"can_detect_p": rep.can_detect_p, "can_detect_n": rep.can_detect_n,
            "kernel_rank_p": rep.kernel_rank_p, "kernel_rank_n": rep.kernel_rank_n,
            "weight_p": rep.weight_p, "weight_n": rep.weight_n}
    if not rep.feasible:
        _Writer(cfg).results({"feasible": False, "feasibility": info, "error": "InfeasiblePair"})
        raise InfeasiblePair("supports overlap: "
                             f"can_detect_p={rep.can_detect_p}, can_detect_n={rep.can_detect_n}")
    povm = build_povm(rho_p, rho_n, args.lambda1, args.lambda2, cfg.eig_tol)
    rates = success_rates(povm, rho_p, rho_n)
    grid = np.linspace(0.0, 1.0, args.grid)
    rows = []
    for l1 in grid:
        for l2 in grid:
            try:
                pv = build_povm(rho_p, rho_n, l1, l2, cfg.eig_tol)
            except ValidationError:
                continue
            s = success_rates(pv, rho_p, rho_n)
            rows.append((l1, l2, s.succ_p, s.succ_n, s.inconclusive_p, s.inconclusive_n))
    w = _Writer(cfg)
    w.csv("success_rates.csv", ["lambda1", "lambda2", "succ_p", "succ_n", "inconclusive_p", "inconclusive_n"],
          rows)
    if cfg.wants("json"):
        w.files.append(io.write_json(cfg.output_dir / "povm.json", {
            "lambda1": povm.lambda1, "lambda2": povm.lambda2,
            "m_p": io.state_to_obj(povm.m_p)["matrix"],
            "m_n": io.state_to_obj(povm.m_n)["matrix"],
            "m_inconclusive": io.state_to_obj(povm.m_inconclusive)["matrix"]}).name)
    res = {"feasible": True, "feasibility": info, **asdict(rates),
           "lambda1": povm.lambda1, "lambda2": povm.lambda2}
    w.results(res)
    return res


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed for sampling (default 0)")
    common.add_argument("--lambda-grid", type=int, default=DEFAULT_GRID, metavar="N",
                        help="number of uniformly spaced priors before adaptive refinement")
    common.add_argument("--samples-per-rank", type=int, default=DEFAULT_SAMPLES_PER_RANK, metavar="N")
    common.add_argument("--tol", type=float, default=1e-6, help="convergence tolerance for B")
    common.add_argument("--eig-tol", type=float, default=EIG_TOL,
                        help="eigenvalue threshold for supports and kernels")
    common.add_argument("--out", type=Path, default=Path("."), metavar="DIR")
    common.add_argument("--format", choices=["csv", "json", "svg", "all"], default="all")

    ap = argparse.ArgumentParser(prog="qroc", description="ROC analysis of classical and quantum state pairs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical", parents=[common], help="two distributions (JSON arrays)")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("pure", parents=[common], help="two real pure qubits given by Bloch angles")
    p.add_argument("--theta-p", type=float, required=True)
    p.add_argument("--theta-q", type=float, required=True)
    p.add_argument("--n-alpha", type=int, default=720)
    p.set_defaults(func=cmd_pure)

    p = sub.add_parser("bhatta-scan", parents=[common], help="B and sqrt(F) against theta_q")
    p.add_argument("--n-points", type=int, default=50)
    p.set_defaults(func=cmd_bhatta_scan)

    for name, func, helptext in (("general", cmd_general, "ROC region of two density operators"),
                                 ("unambiguous", cmd_unambiguous, "unambiguous discrimination POVM")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("rho_p", nargs="?")
        p.add_argument("rho_n", nargs="?")
        p.add_argument("--random", type=int, metavar="DIM", help="use a seeded random pair instead of files")
        if name == "unambiguous":
            p.add_argument("--lambda1", type=float, default=0.5)
            p.add_argument("--lambda2", type=float, default=0.5)
            p.add_argument("--grid", type=int, default=11, help="points per axis of the success-rate table")
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(seed=args.seed, lambda_grid_size=args.lambda_grid,
                        samples_per_rank=args.samples_per_rank, tol_b=args.tol,
                        eig_tol=args.eig_tol, output_dir=args.out, fmt=args.format)
        res = args.func(args, cfg)
    except InfeasiblePair as exc:
        print(json.dumps({"error": "InfeasiblePair", "message": str(exc)}, sort_keys=True))
        return EXIT_INFEASIBLE
    except NoConvergence as exc:
        print(f"qroc: no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ValidationError, QrocError) as exc:
        print(f"qroc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps(io._jsonable(res), indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
