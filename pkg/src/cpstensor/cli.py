"""Command-line surface.

Subcommands: gen (instances), check (classification report), decompose,
complete, rank1, reproduce.  Output files land in --out when given, else in
$CPSTENSOR_OUTDIR (default: current directory) under a default name.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .completion import CompletionConfig, fpc_complete, random_ps_mask
from .core import (
    SYMMETRY_TAGS,
    MaskClosureError,
    SymmetryError,
    Tensor4,
    apply_mask,
    classify_symmetry,
    require_symmetry,
    satisfies_symmetry,
)
from .decompose import cp_rank_bounds, full_decomposition, rank_m, successive_rank1
from .experiments import EXPERIMENTS, write_csv
from .instances import KINDS, InstanceSpec, generate_instance
from .rankone import (
    RelaxConfig,
    SolverError,
    admm_rank_one,
    alm_rank_one,
    is_rank_one,
    plma_low_rank_approx,
)

OUTDIR_ENV = "CPSTENSOR_OUTDIR"


class CliError(Exception):
    """Fatal command error: message printed to stderr, exit status 2."""


def _outdir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV, "."))


def _out_path(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    return _outdir() / default_name


def _load_tensor(path: str) -> Tensor4:
    try:
        return io.load_tensor(path)
    except (OSError, io.FileFormatError, ValueError) as exc:
        raise CliError(f"cannot read tensor file {path}: {exc}") from exc


def _check_expected(t: Tensor4, expect: str | None, tol: float) -> None:
    if expect is None:
        return
    try:
        require_symmetry(t, expect, tol)
    except SymmetryError as exc:
        raise CliError(str(exc)) from exc


def cmd_gen(args) -> int:
    spec = InstanceSpec(
        kind=args.kind,
        n=args.n,
        r=args.r,
        seed=args.seed,
        lambdas=tuple(args.lambdas) if args.lambdas else None,
    )
    tensor, gt = generate_instance(spec)
    out = _out_path(args, f"{args.kind}_n{args.n}_r{args.r}_s{args.seed}.tensor")
    io.save_tensor(out, tensor)
    truth_path = Path(str(out) + ".truth.json")
    io.save_ground_truth(truth_path, gt)
    print(f"kind {args.kind} n {args.n} r {args.r} seed {args.seed}")
    print(f"wrote {out}")
    print(f"wrote {truth_path}")
    return 0


def cmd_check(args) -> int:
    t = _load_tensor(args.tensor)
    cls = classify_symmetry(t, args.tol)
    print(f"classification: {cls.tag}")
    print(f"frobenius_norm: {t.norm():.12e}")
    print(f"rank_m: {rank_m(t)}")
    if satisfies_symmetry(t, "cps", args.tol):
        print(f"rank_one: {is_rank_one(t)}")
    return 0


def cmd_decompose(args) -> int:
    t = _load_tensor(args.tensor)
    _check_expected(t, args.expect, args.tol)
    try:
        if args.full:
            dec = full_decomposition(t)
            report = None
        else:
            dec, report = successive_rank1(t, max_factors=args.r, tol=args.tol)
    except SymmetryError as exc:
        raise CliError(str(exc)) from exc
    out = _out_path(args, Path(args.tensor).name + ".decomp")
    io.save_decomposition(out, dec)
    print(f"factors: {len(dec.factors)}")
    for i, f in enumerate(dec.factors):
        print(f"  {i + 1}: lambda = {f.lam: .6e}")
    if report is not None:
        rel = report.residuals[-1] / report.residuals[0] if report.residuals[0] > 0 else 0.0
        print(f"residual: {rel:.6e} (relative)")
        if report.flags:
            print(f"flags: {','.join(report.flags)}")
    if satisfies_symmetry(t, "cps", args.tol):
        b = cp_rank_bounds(t)
        print(f"rank_m: {b.rank_m}  cp_rank in [{b.cp_lower}, {b.cp_upper}]")
    print(f"wrote {out}")
    return 0


def cmd_complete(args) -> int:
    truth = _load_tensor(args.tensor)
    try:
        require_symmetry(truth, "ps", args.tol)
    except SymmetryError as exc:
        raise CliError(str(exc)) from exc
    if args.mask:
        try:
            mask = io.load_mask(args.mask, close=args.close_mask)
        except MaskClosureError as exc:
            raise CliError(f"{exc} (pass --close-mask to close it)") from exc
        except (OSError, io.FileFormatError) as exc:
            raise CliError(f"cannot read mask file {args.mask}: {exc}") from exc
        p_val = mask.fill_ratio()
        seed_val = ""
    else:
        if args.p is None:
            raise CliError("provide --mask FILE or a sample ratio --p")
        mask = random_ps_mask(truth.n, args.p, args.seed)
        p_val = args.p
        seed_val = str(args.seed)
    observed = apply_mask(truth, mask)
    cfg = CompletionConfig(
        tau=args.tau,
        mu_end=args.mu_end,
        eta=args.eta,
        max_inner=args.max_iter,
    )
    solution, rep = fpc_complete(observed, mask, cfg, truth=truth)
    out = _out_path(args, Path(args.tensor).name + ".completed")
    io.save_tensor(out, solution)
    csv_path = Path(str(out) + ".csv")
    write_csv(
        csv_path,
        ("n", "r", "p", "seed", "err", "rank_m", "iters"),
        [
            (
                str(truth.n),
                "" if args.r is None else str(args.r),
                f"{p_val:.6f}",
                seed_val,
                f"{rep.relative_error:.6e}",
                str(rep.rank_m_solution),
                str(int(sum(rep.inner_iterations))),
            )
        ],
    )
    print(f"relative_error: {rep.relative_error:.6e}")
    print(f"rank_m: {rep.rank_m_solution}")
    print(f"observed_fill: {mask.fill_ratio():.6f}")
    print(f"wrote {out}")
    print(f"wrote {csv_path}")
    return 0


def cmd_rank1(args) -> int:
    t = _load_tensor(args.tensor)
    cfg = RelaxConfig(
        rho=args.rho if args.rho is not None else 1.0,
        tau_admm=args.tau,
        lambda_nuc=args.lambda_nuc,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    out = _out_path(args, Path(args.tensor).name + f".{args.method}")
    try:
        if args.method == "plma":
            require_symmetry(t, "ps", 1e-10)
            alpha, x, rep = plma_low_rank_approx(t, cfg)
            np.savetxt(out, x, header=f"alpha {alpha:.17g}")
            print(f"alpha: {alpha:.6e}  iterations: {rep.iterations}  converged: {rep.converged}")
        elif args.method == "alm":
            r1, rep = alm_rank_one(t, cfg)
            io.save_rank1(out, r1)
            print(f"lambda: {r1.lam:.6e}  iterations: {rep.iterations}  converged: {rep.converged}")
        else:
            x_hat, cert, rep = admm_rank_one(t, cfg, warm_start=args.rho is None)
            io.save_tensor(out, x_hat)
            csv_path = Path(str(out) + ".csv")
            write_csv(
                csv_path,
                ("seed", "method", "iterations", "objective", "certified", "nuclear_norm"),
                [
                    (
                        "",
                        "admm",
                        str(rep.iterations),
                        f"{cert.objective:.10e}",
                        str(int(cert.verdict == "certified_global")),
                        f"{cert.unfolding_nuclear_norm:.10e}",
                    )
                ],
            )
            print(f"verdict: {cert.verdict}")
            print(f"iterations: {rep.iterations}")
            print(f"wrote {csv_path}")
    except (SymmetryError, SolverError, ValueError) as exc:
        raise CliError(str(exc)) from exc
    print(f"wrote {out}")
    return 0


def cmd_reproduce(args) -> int:
    runner = EXPERIMENTS[args.experiment]
    kwargs = {"seed": args.seed}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    header, rows, summary = runner(**kwargs)
    out = _out_path(args, f"{args.experiment}.csv")
    write_csv(out, header, rows)
    for key, value in summary.items():
        if key == "cells":
            for cell, stats in value.items():
                print(f"cell {cell}: mean_err {stats['mean_err']:.6e} max_rank_m {stats['max_rank_m']}")
        else:
            print(f"{key}: {value}")
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpstensor",
        description=(
            "Decomposition, completion and best rank-one approximation for "
            "fourth-order partial-symmetric and conjugate partial-symmetric tensors."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance with ground truth")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--r", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--lambdas", type=float, nargs="+", default=None)
    gen.add_argument("--out", type=str, default=None)
    gen.set_defaults(func=cmd_gen)

    check = sub.add_parser("check", help="classify a tensor file")
    check.add_argument("tensor")
    check.add_argument("--tol", type=float, default=1e-10)
    check.set_defaults(func=cmd_check)

    dec = sub.add_parser("decompose", help="matrix outer-product decomposition")
    dec.add_argument("tensor")
    dec.add_argument("--r", type=int, default=None, help="factor cap (default n(n+1)/2)")
    dec.add_argument("--tol", type=float, default=1e-12)
    dec.add_argument("--full", action="store_true", help="one-shot eigendecomposition route")
    dec.add_argument("--expect", choices=SYMMETRY_TAGS, default=None)
    dec.add_argument("--out", type=str, default=None)
    dec.set_defaults(func=cmd_decompose)

    comp = sub.add_parser("complete", help="low-rank completion from observed entries")
    comp.add_argument("tensor", help="ground-truth tensor file; the mask is applied to it")
    comp.add_argument("--mask", type=str, default=None)
    comp.add_argument("--close-mask", action="store_true")
    comp.add_argument("--p", type=float, default=None, help="sample ratio when no mask file")
    comp.add_argument("--seed", type=int, default=0)
    comp.add_argument("--r", type=int, default=None, help="term count metadata for the CSV record")
    comp.add_argument("--tau", type=float, default=1.0)
    comp.add_argument("--eta", type=float, default=0.25)
    comp.add_argument("--mu-end", type=float, default=None)
    comp.add_argument("--max-iter", type=int, default=500)
    comp.add_argument("--tol", type=float, default=1e-10)
    comp.add_argument("--out", type=str, default=None)
    comp.set_defaults(func=cmd_complete)

    r1 = sub.add_parser("rank1", help="best rank-one approximation")
    r1.add_argument("tensor")
    r1.add_argument("--method", choices=("admm", "alm", "plma"), default="admm")
    r1.add_argument("--rho", type=float, default=None, help="fixed weight (admm: disables warm start)")
    r1.add_argument("--tau", type=float, default=1.0)
    r1.add_argument("--lambda-nuc", type=float, default=0.0)
    r1.add_argument("--tol", type=float, default=1e-8)
    r1.add_argument("--max-iter", type=int, default=1000)
    r1.add_argument("--out", type=str, default=None)
    r1.set_defaults(func=cmd_rank1)

    rep = sub.add_parser("reproduce", help="run an experiment battery, write CSV")
    rep.add_argument("experiment", choices=tuple(EXPERIMENTS))
    rep.add_argument("--trials", type=int, default=None)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--out", type=str, default=None)
    rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, SolverError, ValueError) as exc:
        # ValueError covers mask-closure and symmetry rejections plus bad
        # generation/solver parameters
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
