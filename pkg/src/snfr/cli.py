"""Command-line front end: ``snfr gen|solve|oracle|stretch|simulate|bench|all-dest``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import genbench
from .escapes import EscapePlan, compute_escapes, solve
from .graph import bucket_by_nca, build_spt, is_biconnected, load_graph, save_graph
from .oracle import optimal_recovery, read_oracle_csv, stretch, write_oracle_csv
from .simnet import FailureSchedule, run, trace_log, verify


def _emit(args, data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    Path(args.out).write_bytes(data)


def _graph(path):
    return load_graph(Path(path).read_bytes())


def _dest(args, g):
    return g.dest if args.dest is None else args.dest


def cmd_gen(args):
    cfg = genbench.GenConfig(args.nodes, args.degree, (args.wmin, args.wmax), args.seed)
    _emit(args, save_graph(genbench.generate(cfg)))


def cmd_solve(args):
    g = _graph(args.graph)
    if args.check and not is_biconnected(g):
        sys.exit("input graph is not biconnected")
    _, plan = solve(g, _dest(args, g))
    _emit(args, plan.to_text())


def cmd_oracle(args):
    g = _graph(args.graph)
    opt = optimal_recovery(g, build_spt(g, _dest(args, g)))
    _emit(args, write_oracle_csv(opt))


def cmd_stretch(args):
    g = _graph(args.graph)
    t = build_spt(g, _dest(args, g))
    plan = EscapePlan.from_text(Path(args.plan).read_bytes(), g, t)
    rep = stretch(plan, read_oracle_csv(Path(args.oracle).read_text()))
    _emit(args, rep.to_csv())
    print(f"pairs={len(rep.rows)} mean={rep.mean:.6f} max={rep.max:.6f}", file=sys.stderr)


def cmd_simulate(args):
    g = _graph(args.graph)
    t = build_spt(g, _dest(args, g))
    plan = EscapePlan.from_text(Path(args.plan).read_bytes(), g, t)
    sched = FailureSchedule.parse(Path(args.schedule).read_text()) if args.schedule else None
    if args.inject:
        injections = [tuple(int(v) for v in item.split("@")) for item in args.inject]
    else:
        injections = [(v, args.tick) for v in range(g.n)
                      if not (sched and sched.is_down(v, args.tick))]
    traces = run(g, t, plan, sched, injections)
    _emit(args, trace_log(traces))
    report = verify(traces, g, t, plan, sched)
    sys.stderr.write(report.to_csv())
    if not report.ok:
        sys.exit(1)


def cmd_bench(args):
    if args.axis == "nodes":
        values = args.values or list(genbench.DEFAULT_NODES)
        res = genbench.sweep_nodes(values, deg=args.degree, trials=args.trials, seed=args.seed,
                                   progress=_progress if args.verbose else None)
        axis = "n"
    else:
        values = args.values or [4, 6, 8, 10, 15, 20, 25, 30]
        res = genbench.sweep_degree(values, n=args.nodes, trials=args.trials, seed=args.seed,
                                    progress=_progress if args.verbose else None)
        axis = "degree"
    header = f"# prng={genbench.PRNG_NAME} seed={args.seed} trials={args.trials}\n"
    if args.out in (None, "-"):
        sys.stdout.write(header + res.summary_csv())
        return
    out = Path(args.out)
    out.write_text(res.to_csv())
    summary = out.with_name(out.stem + "_summary.csv")
    summary.write_text(res.summary_csv())
    out.with_name(out.stem + "_timing.csv").write_text(res.timing_csv())
    out.with_name(out.stem + "_meta.txt").write_text(header)
    out.with_name(out.stem + ".gp").write_text(genbench.gnuplot_script(summary.name, axis))


def _progress(tr):
    print(f"n={tr.n} deg={tr.degree} trial={tr.trial} mean={tr.mean_stretch:.4f} "
          f"snfr={tr.snfr_seconds:.3f}s oracle={tr.oracle_seconds:.3f}s", file=sys.stderr)


def cmd_all_dest(args):
    g = _graph(args.graph)
    stream = open(args.out, "w") if args.out not in (None, "-") else sys.stdout
    try:
        for s in range(g.n):
            t = build_spt(g, s)
            plan = compute_escapes(g, t, bucket_by_nca(g, t))
            stream.write(plan.to_text())
    finally:
        if stream is not sys.stdout:
            stream.close()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", "-o", default=None, help="output file (default: stdout)")
    common.add_argument("--trials", type=int, default=genbench.DEFAULT_TRIALS)

    p = argparse.ArgumentParser(prog="snfr",
                                description="Escape-edge recovery from single node failures.")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="generate a random biconnected graph")
    gen.add_argument("--nodes", "-n", type=int, required=True)
    gen.add_argument("--degree", "-d", type=float, default=15)
    gen.add_argument("--wmin", type=int, default=100)
    gen.add_argument("--wmax", type=int, default=1000)
    gen.set_defaults(func=cmd_gen)

    def graph_cmd(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.add_argument("graph")
        sp.add_argument("--dest", type=int, default=None,
                        help="destination node (default: the one in the graph header)")
        sp.set_defaults(func=func)
        return sp

    sp = graph_cmd("solve", cmd_solve, "compute the escape plan")
    sp.add_argument("--check", action="store_true", help="verify biconnectivity first")
    graph_cmd("oracle", cmd_oracle, "optimal recovery costs by recomputation")
    sp = graph_cmd("stretch", cmd_stretch, "compare a plan against oracle costs")
    sp.add_argument("plan")
    sp.add_argument("oracle")
    sp = graph_cmd("simulate", cmd_simulate, "run the forwarding simulation")
    sp.add_argument("plan")
    sp.add_argument("schedule", nargs="?")
    sp.add_argument("--inject", action="append", metavar="NODE@TICK",
                    help="inject a message (repeatable); default: every live node")
    sp.add_argument("--tick", type=int, default=0, help="injection tick for the default injections")
    graph_cmd("all-dest", cmd_all_dest, "escape plans for every destination")

    bench = sub.add_parser("bench", parents=[common], help="stretch and runtime sweeps")
    bench.add_argument("axis", choices=["nodes", "degree"])
    bench.add_argument("values", nargs="*", type=int)
    bench.add_argument("--degree", type=float, default=15, help="fixed degree for the nodes sweep")
    bench.add_argument("--nodes", type=int, default=300, help="fixed size for the degree sweep")
    bench.add_argument("--verbose", "-v", action="store_true")
    bench.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
