"""Command-line front end: every pipeline stage as a subcommand.

Outputs are plain text, CSV or JSON only; every JSON document carries an
``inputs`` block sufficient to reproduce the command.  Stochastic commands
require an explicit ``--seed``.  Relative output paths are resolved against
``$SWSYNC_OUTDIR`` when that variable is set.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import ROSSLER_ANCHOR_GUESS, find_limit_cycle, rossler_model
from .errors import SwsyncError
from .graphs import (
    SmallWorldParams,
    generate_small_world,
    laplacian,
    load_edge_list,
    ring_lattice,
    save_edge_list,
)
from .msf import msf_sweep, stability_interval
from .netsim import perturbed_initials, simulate_network, sync_verdict
from .predictor import predict_sync, validate_prediction
from .spectral import eigenvalues, esd_histogram, exact_moments, expected_moments
from .trifit import fit_triangle, triangle_density

__all__ = ["run", "main"]


def _outpath(name: str | None) -> Path | None:
    if name is None:
        return None
    path = Path(name)
    base = os.environ.get("SWSYNC_OUTDIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        out.write_text(text, encoding="utf-8")


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _moments_payload(sm, inputs: dict, notes: str | None = None) -> dict:
    payload = {
        "q1": float(sm.q1),
        "q2": float(sm.q2),
        "q3": float(sm.q3),
        "mean_degree": float(sm.mean_degree),
        "normalized": [float(v) for v in sm.normalized],
        "inputs": inputs,
    }
    if notes:
        payload["notes"] = notes
    return payload


def _rossler_from_args(args):
    return rossler_model(a=args.a, b=args.b, c=args.c)


def _add_oscillator_flags(parser):
    parser.add_argument("--a", type=float, default=0.2, help="oscillator parameter a")
    parser.add_argument("--b", type=float, default=0.2, help="oscillator parameter b")
    parser.add_argument("--c", type=float, default=2.5, help="oscillator parameter c")


def cmd_generate(args) -> int:
    params = SmallWorldParams(
        node_count=args.nodes,
        half_degree=args.k,
        shortcut_rate=args.r,
        seed=args.seed,
    )
    graph = generate_small_world(params)
    out = _outpath(args.out)
    if out is None:
        lines = [str(graph.node_count)]
        lines += [f"{i} {j}" for i, j in graph.edges]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        save_edge_list(graph, out)
    return 0


def cmd_moments(args) -> int:
    if args.expected:
        sm = expected_moments(args.k, args.r, args.variant)
        other = expected_moments(args.k, args.r, "corrected" if args.variant == "paper" else "paper")
        notes = (
            f"variant={args.variant} gives q3={sm.q3:g}; the alternative "
            f"variant gives q3={other.q3:g} (they differ in the ring "
            f"triangle density entering the third moment)"
        )
        inputs = {
            "expected": True,
            "k": args.k,
            "r": args.r,
            "variant": args.variant,
        }
        payload = _moments_payload(sm, inputs, notes)
    else:
        if args.graph is None:
            raise SwsyncError("moments needs --graph FILE or --expected")
        graph = load_edge_list(args.graph)
        sm = exact_moments(graph)
        payload = _moments_payload(sm, {"graph": str(args.graph)})
    _emit(_json(payload), _outpath(args.out))
    return 0


def cmd_eigs(args) -> int:
    graph = load_edge_list(args.graph)
    eigs = eigenvalues(laplacian(graph))
    text = "\n".join(repr(float(v)) for v in eigs) + "\n"
    _emit(text, _outpath(args.out))
    return 0


def cmd_fit(args) -> int:
    fit = fit_triangle(args.m1, args.m2, args.m3)
    payload = {
        "x1": fit.x1,
        "x2": fit.x2,
        "x3": fit.x3,
        "height": fit.height,
        "inputs": {"m1": args.m1, "m2": args.m2, "m3": args.m3},
    }
    _emit(_json(payload), _outpath(args.out))
    if args.density_out:
        lam = np.linspace(fit.x1 - 0.05 * (fit.x3 - fit.x1 or 1.0),
                          fit.x3 + 0.05 * (fit.x3 - fit.x1 or 1.0),
                          args.density_samples)
        dens = triangle_density(fit, lam)
        rows = ["lambda,density"]
        rows += [f"{float(x)!r},{float(d)!r}" for x, d in zip(lam, dens)]
        _outpath(args.density_out).write_text("\n".join(rows) + "\n", encoding="utf-8")
    return 0


def cmd_msf(args) -> int:
    model = _rossler_from_args(args)
    cycle = find_limit_cycle(model, ROSSLER_ANCHOR_GUESS)
    curve = msf_sweep(model, cycle, 0.0, args.sigma_max, args.step)
    rows = ["sigma,F"]
    rows += [f"{float(s)!r},{float(v)!r}" for s, v in zip(curve.sigmas, curve.values)]
    _emit("\n".join(rows) + "\n", _outpath(args.out))
    interval = stability_interval(
        model, cycle, coarse_step=args.step, refine_tol=args.refine_tol,
        sigma_cap=args.sigma_max,
    )
    payload = {
        "sigma_max": interval.sigma_max,
        "period": cycle.period,
        "inputs": {
            "a": args.a, "b": args.b, "c": args.c,
            "sigma_max": args.sigma_max, "step": args.step,
            "refine_tol": args.refine_tol,
        },
    }
    _emit(_json(payload), _outpath(args.interval_out))
    return 0


def cmd_simulate(args) -> int:
    graph = load_edge_list(args.graph)
    model = _rossler_from_args(args)
    states0 = perturbed_initials(
        ROSSLER_ANCHOR_GUESS, args.amplitude, graph.node_count, args.seed
    )
    trace = simulate_network(
        graph, model, args.gamma, states0, t_end=args.t_end, dt=args.dt
    )
    header = "t,err_max,err_rms"
    if args.per_node:
        header += "," + ",".join(f"x_{i}" for i in range(graph.node_count))
    rows = [header]
    for idx in range(len(trace.times)):
        row = f"{float(trace.times[idx])!r},{float(trace.err_max[idx])!r},{float(trace.err_rms[idx])!r}"
        if args.per_node:
            row += "," + ",".join(repr(float(v)) for v in trace.coord[idx])
        rows.append(row)
    _emit("\n".join(rows) + "\n", _outpath(args.out))
    verdict = sync_verdict(trace, tol=args.tol, window=args.window)
    payload = {
        "verdict": "synchronized" if verdict.synchronized else "not_synchronized",
        "final_err": verdict.final_err,
        "inputs": {
            "graph": str(args.graph), "gamma": args.gamma, "t_end": args.t_end,
            "dt": args.dt, "seed": args.seed, "amplitude": args.amplitude,
            "tol": args.tol, "window": args.window,
            "a": args.a, "b": args.b, "c": args.c,
        },
    }
    _emit(_json(payload), _outpath(args.verdict_out))
    return 0


def _prediction_payload(pred, extra_inputs: dict) -> dict:
    payload = {
        "sigma_max": pred.sigma_max,
        "x1": pred.x1,
        "x3": pred.x3,
        "gamma_max": pred.gamma_max,
        "moments": list(pred.moments),
        "moment_source": pred.moment_source,
        "inputs": extra_inputs,
    }
    if pred.params is not None:
        payload["params"] = {
            "nodes": pred.params.node_count,
            "k": pred.params.half_degree,
            "r": pred.params.shortcut_rate,
            "seed": pred.params.seed,
        }
    return payload


def _moment_source_from_args(args):
    if args.moments == "literal":
        if None in (args.m1, args.m2, args.m3):
            raise SwsyncError("--moments literal requires --m1 --m2 --m3")
        return (args.m1, args.m2, args.m3)
    if args.moments == "exact":
        if args.graph is None:
            raise SwsyncError("--moments exact requires --graph FILE")
        return load_edge_list(args.graph)
    return args.moments  # "paper" | "corrected"


def cmd_predict(args) -> int:
    params = None
    if args.moments in ("paper", "corrected"):
        params = SmallWorldParams(
            node_count=args.nodes, half_degree=args.k,
            shortcut_rate=args.r, seed=0,
        )
    model = _rossler_from_args(args)
    source = _moment_source_from_args(args)
    pred = predict_sync(
        params, model, source,
        sigma_max=args.sigma_max,
        initial_guess=None if args.sigma_max is not None else ROSSLER_ANCHOR_GUESS,
    )
    inputs = {
        "moments": args.moments, "nodes": args.nodes, "k": args.k, "r": args.r,
        "m1": args.m1, "m2": args.m2, "m3": args.m3,
        "graph": str(args.graph) if args.graph else None,
        "sigma_max": args.sigma_max,
        "a": args.a, "b": args.b, "c": args.c,
    }
    _emit(_json(_prediction_payload(pred, inputs)), _outpath(args.out))
    return 0


def cmd_validate(args) -> int:
    params = SmallWorldParams(
        node_count=args.nodes, half_degree=args.k,
        shortcut_rate=args.r, seed=args.seeds[0],
    )
    model = _rossler_from_args(args)
    report = validate_prediction(
        params, model, args.gammas, args.seeds,
        moment_source=args.variant,
        sigma_max=args.sigma_max,
        initial_guess=ROSSLER_ANCHOR_GUESS,
        amplitude=args.amplitude,
        t_end=args.t_end,
        dt=args.dt,
        tol=args.tol,
        window=args.window,
    )
    rows = ["gamma,seed,verdict,final_err"]
    for row in report.rows:
        verdict = "synchronized" if row.synchronized else "not_synchronized"
        rows.append(f"{row.gamma!r},{row.seed},{verdict},{row.final_err!r}")
    _emit("\n".join(rows) + "\n", _outpath(args.out))
    inputs = {
        "nodes": args.nodes, "k": args.k, "r": args.r,
        "gammas": list(args.gammas), "seeds": list(args.seeds),
        "variant": args.variant, "amplitude": args.amplitude,
        "t_end": args.t_end, "dt": args.dt,
        "tol": args.tol, "window": args.window,
        "sigma_max": args.sigma_max,
        "a": args.a, "b": args.b, "c": args.c,
    }
    _emit(_json(_prediction_payload(report.prediction, inputs)), _outpath(args.prediction_out))
    return 0


def cmd_repro(args) -> int:
    """One-shot reproduction run: writes every pipeline artefact to a directory."""
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    log = sys.stdout

    def say(msg):
        log.write(msg + "\n")
        log.flush()

    model = rossler_model()

    say("[1/8] six-node ring spectrum")
    ring6 = ring_lattice(6, 1)
    eigs6 = eigenvalues(laplacian(ring6))
    (outdir / "ring6_spectrum.json").write_text(_json({
        "eigenvalues": [float(v) for v in eigs6],
        "inputs": {"nodes": 6, "k": 1},
    }), encoding="utf-8")

    say("[2/8] limit cycle")
    cycle = find_limit_cycle(model, ROSSLER_ANCHOR_GUESS)
    rows = ["t,x,y,z"]
    rows += [
        f"{float(t)!r},{float(s[0])!r},{float(s[1])!r},{float(s[2])!r}"
        for t, s in zip(cycle.times, cycle.states)
    ]
    (outdir / "cycle.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    (outdir / "cycle.json").write_text(_json({
        "period": cycle.period,
        "anchor": [float(v) for v in cycle.anchor],
        "closure_error": cycle.closure_error,
        "inputs": {"a": 0.2, "b": 0.2, "c": 2.5},
    }), encoding="utf-8")

    say("[3/8] exponent sweep and threshold")
    curve = msf_sweep(model, cycle, 0.0, 15.0, 0.2)
    rows = ["sigma,F"]
    rows += [f"{float(s)!r},{float(v)!r}" for s, v in zip(curve.sigmas, curve.values)]
    (outdir / "msf_curve.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    interval = stability_interval(model, cycle)
    (outdir / "stability.json").write_text(_json({
        "sigma_max": interval.sigma_max,
        "inputs": {"coarse_step": 0.2, "refine_tol": 1e-3, "sigma_cap": 15.0},
    }), encoding="utf-8")

    say("[4/8] six-node ring simulations")
    for gamma in (1.0, 1.3):
        states0 = perturbed_initials(cycle.anchor, 0.05, 6, seed=11)
        trace = simulate_network(ring6, model, gamma, states0)
        rows = ["t,err_max,err_rms"]
        rows += [
            f"{float(t)!r},{float(a)!r},{float(b)!r}"
            for t, a, b in zip(trace.times, trace.err_max, trace.err_rms)
        ]
        (outdir / f"ring6_gamma{gamma}.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    say("[5/8] moment table")
    params = SmallWorldParams(node_count=512, half_degree=3, shortcut_rate=4.0, seed=7)
    graph = generate_small_world(params)
    sm_exact = exact_moments(graph)
    sm_paper = expected_moments(3, 4.0, "paper")
    sm_corr = expected_moments(3, 4.0, "corrected")
    (outdir / "moments_table.json").write_text(_json({
        "realization": list(sm_exact.as_tuple()),
        "expected_paper_variant": list(sm_paper.as_tuple()),
        "expected_corrected_variant": list(sm_corr.as_tuple()),
        "inputs": {"nodes": 512, "k": 3, "r": 4.0, "seed": 7},
    }), encoding="utf-8")

    say("[6/8] spectrum histogram and triangular fit")
    eigs = eigenvalues(laplacian(graph))
    fit = fit_triangle(10.0, 114.0, 1431.0)
    hist = esd_histogram(eigs, 30, support=(0.0, max(float(eigs[-1]), fit.x3)))
    rows = ["bin_left,bin_right,count,density"]
    rows += [
        f"{float(hist.edges[i])!r},{float(hist.edges[i+1])!r},{int(hist.counts[i])},{float(hist.density[i])!r}"
        for i in range(len(hist.counts))
    ]
    (outdir / "esd_histogram.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    (outdir / "triangle_fit.json").write_text(_json({
        "x1": fit.x1, "x2": fit.x2, "x3": fit.x3, "height": fit.height,
        "inputs": {"m1": 10.0, "m2": 114.0, "m3": 1431.0},
    }), encoding="utf-8")

    say("[7/8] support sweep over shortcut rates")
    rows = ["r,x1,x3,lambda2,lambdaN"]
    for r in range(1, 11):
        sm = expected_moments(3, float(r), "corrected")
        from .trifit import solve_cubic_real

        p1 = 3.0 * sm.q1
        p2 = 9.0 * sm.q1**2 - 6.0 * sm.q2
        p3 = 27.0 * sm.q1**3 - 36.0 * sm.q1 * sm.q2 + 10.0 * sm.q3
        roots = solve_cubic_real(-p1, p2, -p3)
        gr = generate_small_world(
            SmallWorldParams(node_count=512, half_degree=3, shortcut_rate=float(r), seed=100 + r)
        )
        w = eigenvalues(laplacian(gr))
        rows.append(
            f"{r},{float(roots[0])!r},{float(roots[2])!r},{float(w[1])!r},{float(w[-1])!r}"
        )
    (outdir / "support_sweep.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    say("[8/8] 512-node validation runs")
    pred = predict_sync(params, model, (10.0, 114.0, 1431.0), sigma_max=interval.sigma_max)
    (outdir / "prediction.json").write_text(_json(_prediction_payload(pred, {
        "moments": "literal", "m1": 10.0, "m2": 114.0, "m3": 1431.0,
        "sigma_max_source": "computed",
    })), encoding="utf-8")
    for gamma in (0.1, 0.3):
        states0 = perturbed_initials(
            cycle.anchor, 0.25, 512, seed=np.random.SeedSequence([1, 1])
        )
        t_end = 100.0 if gamma == 0.1 else 40.0
        trace = simulate_network(graph, model, gamma, states0, t_end=t_end)
        rows = ["t,err_max,err_rms"]
        rows += [
            f"{float(t)!r},{float(a)!r},{float(b)!r}"
            for t, a, b in zip(trace.times, trace.err_max, trace.err_rms)
        ]
        (outdir / f"network512_gamma{gamma}.csv").write_text(
            "\n".join(rows) + "\n", encoding="utf-8"
        )
    say(f"done: artefacts in {outdir}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swsync",
        description="Spectral prediction and simulation of small-world oscillator synchronisation",
    )
    parser.add_argument("--version", action="version", version=f"swsync {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a small-world graph as an edge list")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="ring half-degree")
    p.add_argument("--r", type=float, required=True, help="shortcut rate (p = r/N)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="edge-list file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("moments", help="Laplacian moments of a graph or the model expectation")
    p.add_argument("--graph", help="edge-list file")
    p.add_argument("--expected", action="store_true", help="use closed-form expectations")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--variant", choices=("paper", "corrected"), default="paper")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("eigs", help="Laplacian spectrum of a graph, one eigenvalue per line")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("fit", help="triangular density fit from three moments")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--m3", type=float, required=True)
    p.add_argument("--out")
    p.add_argument("--density-out", help="optional sampled-density CSV")
    p.add_argument("--density-samples", type=int, default=200)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("msf", help="stability-exponent sweep and threshold")
    p.add_argument("--sigma-max", type=float, default=15.0, help="sweep end")
    p.add_argument("--step", type=float, default=0.2)
    p.add_argument("--refine-tol", type=float, default=1e-3)
    _add_oscillator_flags(p)
    p.add_argument("--out", help="curve CSV (default: stdout)")
    p.add_argument("--interval-out", help="threshold JSON (default: stdout)")
    p.set_defaults(func=cmd_msf)

    p = sub.add_parser("simulate", help="integrate the coupled network on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t-end", type=float, default=40.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--amplitude", type=float, default=0.25,
                   help="initial perturbation amplitude per coordinate")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--window", type=float, default=10.0)
    p.add_argument("--per-node", action="store_true",
                   help="append per-node tracked coordinates to the trace CSV")
    _add_oscillator_flags(p)
    p.add_argument("--out", help="trace CSV (default: stdout)")
    p.add_argument("--verdict-out", help="verdict JSON (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="predicted synchronising coupling interval")
    p.add_argument("--moments", choices=("paper", "corrected", "literal", "exact"),
                   required=True)
    p.add_argument("--nodes", type=int, default=512)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--m3", type=float)
    p.add_argument("--graph", help="edge-list file for --moments exact")
    p.add_argument("--sigma-max", type=float, default=None,
                   help="skip the exponent computation and use this threshold")
    _add_oscillator_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("validate", help="prediction next to direct simulations")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--gammas", type=lambda s: [float(v) for v in s.split(",")],
                   required=True, help="comma-separated coupling strengths")
    p.add_argument("--seeds", type=lambda s: [int(v) for v in s.split(",")],
                   required=True, help="comma-separated seeds")
    p.add_argument("--variant", choices=("paper", "corrected"), default="corrected")
    p.add_argument("--sigma-max", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=0.25)
    p.add_argument("--t-end", type=float, default=40.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--window", type=float, default=10.0)
    _add_oscillator_flags(p)
    p.add_argument("--out", help="report CSV (default: stdout)")
    p.add_argument("--prediction-out", help="prediction JSON (default: stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("repro", help="write the full artefact suite to a directory")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_repro)

    return parser


def run(argv) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SwsyncError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
