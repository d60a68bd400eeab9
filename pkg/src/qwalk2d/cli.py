"""Command-line front end.

Subcommands::

    qwalk2d walk      run a walk and write per-step distributions + summary
    qwalk2d compare   similarity between two distribution files
    qwalk2d timebin   audit | simulate the time-bin loop
    qwalk2d heatmap   render a distribution file as a PPM image

Exit codes: 0 success, 1 invalid input, 2 audit/constraint failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import engine, io, metrics, timebin
from .config import RunConfig, load_config
from .errors import ConfigurationError, ImpossibleOutcomeError, WalkInputError
from .heatmap import render_heatmap

log = logging.getLogger("qwalk2d")

EXIT_OK, EXIT_INPUT, EXIT_CONSTRAINT = 0, 1, 2


class ConstraintFailure(Exception):
    pass


def walk_distributions(cfg: RunConfig) -> list[metrics.Distribution]:
    """Per-step distributions for the coin described by ``cfg``."""
    coin = cfg.resolve_coin()
    kind = cfg.kind()
    if coin.mode == "pure":
        return engine.run(kind, coin.vector, cfg.steps)[1]
    if coin.mode == "mixed":
        return engine.run_mixture(coin.ensemble, cfg.steps, kind)
    # delayed choice: walk the entangled pair first, project Alice afterwards
    history = engine.run_joint_history(cfg.source(), cfg.steps, kind)
    return [
        engine.heralded_distribution([(w, states[k]) for w, states in history], coin.projector)[1]
        for k in range(cfg.steps + 1)
    ]


def _summary_rows(dists):
    rows = []
    for d in dists:
        mx, my = metrics.mean(d)
        rows.append(
            {
                "n": d.step,
                "mean_x": mx,
                "mean_y": my,
                "variance": metrics.variance(d),
                "classical_variance": 2.0 * d.step,
                "similarity_classical": metrics.similarity(d, metrics.classical_distribution(d.step)),
                "total": d.total(),
            }
        )
    return rows


def _write_rows(path: Path, rows):
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def cmd_walk(cfg: RunConfig) -> int:
    dists = walk_distributions(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for d in dists:
        io.write_distributions(out / f"step_{d.step:02d}.csv", [d])
    io.write_distributions(out / "distributions.csv", dists)
    rows = _summary_rows(dists)
    _write_rows(out / "summary.csv", rows)
    io.write_metadata(out / "run.json", cfg.to_dict(), command="walk")
    if cfg.figures:
        from . import plotting

        plotting.plot_panels(dists, out / "panels.png", title=f"{cfg.walk} walk, coin {cfg.herald_projector or cfg.coin}")
        plotting.plot_spreading(
            [r["n"] for r in rows], [r["variance"] for r in rows], out / "spreading.png",
            classical=[r["classical_variance"] for r in rows],
        )
    print(f"{'n':>3} {'mean_x':>10} {'mean_y':>10} {'variance':>10} {'S_classical':>12}")
    for r in rows:
        print(f"{r['n']:>3} {r['mean_x']:>10.5f} {r['mean_y']:>10.5f} {r['variance']:>10.5f} {r['similarity_classical']:>12.8f}")
    print(f"wrote {len(dists)} step files to {out}")
    return EXIT_OK


def cmd_compare(path_p, path_q, step=None, out=None) -> int:
    dp = io.read_distributions(path_p)
    dq = io.read_distributions(path_q)
    if step is not None:
        if step not in dp or step not in dq:
            raise WalkInputError(f"step {step} missing from one of the files")
        pairs = [(dp[step], dq[step])]
    elif len(dp) == 1 and len(dq) == 1:
        pairs = [(next(iter(dp.values())), next(iter(dq.values())))]
    else:
        common = sorted(dp.keys() & dq.keys())
        if not common:
            raise WalkInputError("files share no step index")
        pairs = [(dp[n], dq[n]) for n in common]
    rows = []
    for p, q in pairs:
        for d, name in ((p, path_p), (q, path_q)):
            if abs(d.total() - 1.0) > 1e-9:
                raise WalkInputError(f"{name}: step {d.step} sums to {d.total():.12g}, not 1")
        s = metrics.similarity(p, q)
        print(f"steps {p.step} vs {q.step}: S = {s:.12f}  max|dP| = {metrics.max_abs_difference(p, q):.3e}")
        print(f"{'x':>4} {'y':>4} {'P':>14} {'Q':>14} {'P-Q':>14}")
        for site in sorted(p.probs.keys() | q.probs.keys()):
            diff = p[site] - q[site]
            print(f"{site[0]:>4} {site[1]:>4} {p[site]:>14.10f} {q[site]:>14.10f} {diff:>14.3e}")
            rows.append({"n_p": p.step, "n_q": q.step, "x": site[0], "y": site[1], "p": p[site], "q": q[site], "diff": diff})
    if out:
        _write_rows(Path(out), rows)
    return EXIT_OK


def cmd_timebin_audit(cfg: RunConfig) -> int:
    grid = timebin.build_grid(cfg.delays, cfg.steps)
    result = timebin.audit(grid, cfg.gap_ns)
    best = timebin.max_collision_free_steps(cfg.delays, cfg.gap_ns)
    status = "PASS" if result.passed else "FAIL"
    print(f"audit N={cfg.steps} gap={cfg.gap_ns} ns: {status}")
    print(f"entries: {len(grid)}  min separation: {grid.min_gap_ns:.4f} ns  latest arrival: {grid.times.max():.4f} ns")
    print(f"max collision-free N: {best}")
    for a, b, gap in result.collisions[:20]:
        print(f"  collision {a} <-> {b}: {gap:.4f} ns")
    if len(result.collisions) > 20:
        print(f"  ... {len(result.collisions) - 20} more")
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        io.write_grid(out / "grid.csv", grid)
    if not result.passed:
        raise ConstraintFailure(f"{len(result.collisions)} grid collisions below {cfg.gap_ns} ns")
    return EXIT_OK


def cmd_timebin_simulate(cfg: RunConfig) -> int:
    delays = cfg.delays
    grid = timebin.build_grid(delays, cfg.steps)
    if not timebin.audit(grid, delays.window_ns).passed:
        raise ConstraintFailure(f"windows of {delays.window_ns} ns overlap on the N={cfg.steps} grid")
    theory = walk_distributions(cfg)
    run = timebin.detect_sim(delays, theory, cfg.photons, cfg.seed, workers=cfg.workers)
    rec = timebin.reconstruct(run.histogram, grid, delays)
    rows = []
    for d in theory:
        n = d.step
        recd = rec.distributions.get(n)
        expected = timebin.arm_weighted(delays, d)
        rows.append(
            {
                "n": n,
                "raw_counts": rec.raw_counts[n],
                "corrected_counts": rec.corrected_counts[n],
                "similarity": metrics.similarity(expected, recd) if recd else 0.0,
            }
        )
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_histogram(out / "histogram.csv", run.histogram)
    io.write_grid(out / "grid.csv", grid)
    io.write_distributions(out / "reconstructed.csv", [rec.distributions[n] for n in sorted(rec.distributions)])
    io.write_distributions(out / "theory.csv", theory)
    _write_rows(out / "report.csv", rows)
    io.write_metadata(out / "run.json", cfg.to_dict(), command="timebin simulate", detected=int(run.times.size))
    if cfg.figures:
        from . import plotting

        plotting.plot_histogram(run.histogram, grid, out / "histogram.png")
        plotting.plot_panels([rec.distributions[n] for n in sorted(rec.distributions)], out / "reconstructed.png", title="reconstructed")
    print(f"photons {cfg.photons}  seed {cfg.seed}  detected {run.times.size}")
    print(f"{'n':>3} {'raw':>10} {'corrected':>12} {'similarity':>12}")
    for r in rows:
        print(f"{r['n']:>3} {r['raw_counts']:>10.0f} {r['corrected_counts']:>12.1f} {r['similarity']:>12.8f}")
    upto = [n for n in (1, 2, 3, 4) if n <= cfg.steps and rec.corrected_counts.get(n, 0) > 0]
    if len(upto) >= 2:
        slope = timebin.loss_slope(rec.corrected_counts, upto)
        print(f"log-count slope over n={upto[0]}..{upto[-1]}: {slope:.5f} (ln eta_cycle = {np.log(delays.eta_cycle):.5f})")
    return EXIT_OK


def cmd_heatmap(path, out, step=None, log_scale=False, scale=16) -> int:
    dists = io.read_distributions(path)
    if step is None:
        step = max(dists)
    if step not in dists:
        raise WalkInputError(f"{path} has no step {step}")
    out = Path(out) if out else Path(path).with_suffix(f".n{step}.ppm")
    pmax = render_heatmap(dists[step], out, scale=scale, log=log_scale)
    print(f"wrote {out} (step {step}, {'log' if log_scale else 'linear'} scale, max p = {pmax:.6g})")
    return EXIT_OK


def _walk_options(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON run configuration; flags override it")
    p.add_argument("--walk", choices=("alternate", "grover"))
    p.add_argument("--coin", help="H|V|D|A|L|R, 'mixed', or a comma-separated complex vector")
    p.add_argument("--herald-projector", dest="herald_projector", help="Alice's projector (named state or vector)")
    p.add_argument("--werner", dest="werner_p", type=float, help="use a Werner source with this p instead of |Phi+>")
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk2d", description="2-D discrete-time quantum walk toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk", help="run a walk and export per-step distributions")
    _walk_options(p)

    p = sub.add_parser("compare", help="similarity between two distribution files")
    p.add_argument("file_p")
    p.add_argument("file_q")
    p.add_argument("--step", type=int)
    p.add_argument("--out", help="write per-site differences here")

    p = sub.add_parser("timebin", help="time-bin loop audit or Monte Carlo")
    p.add_argument("mode", choices=("audit", "simulate"))
    _walk_options(p)
    p.add_argument("--photons", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--gap", dest="gap_ns", type=float)

    p = sub.add_parser("heatmap", help="render a distribution file as a PPM image")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--step", type=int)
    p.add_argument("--log", action="store_true")
    p.add_argument("--scale", type=int, default=16, help="pixels per lattice site")
    return parser


def _run_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    for name in ("walk", "coin", "herald_projector", "werner_p", "steps", "seed", "out",
                 "figures", "photons", "workers", "gap_ns"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if args.command == "timebin" and args.mode == "audit" and args.out is None and not args.config:
        cfg.out = ""
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "walk":
            return cmd_walk(_run_config(args))
        if args.command == "compare":
            return cmd_compare(args.file_p, args.file_q, args.step, args.out)
        if args.command == "timebin":
            cfg = _run_config(args)
            return cmd_timebin_audit(cfg) if args.mode == "audit" else cmd_timebin_simulate(cfg)
        if args.command == "heatmap":
            return cmd_heatmap(args.file, args.out, args.step, args.log, args.scale)
    except ConstraintFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (WalkInputError, ImpossibleOutcomeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
