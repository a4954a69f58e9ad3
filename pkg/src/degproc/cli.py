"""Command-line drivers: the counterexample pair, simulations, the small-edge
distinguisher, switching sweeps, fluid-limit integration and exact TVD."""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import experiments, odemethod
from .confgraph import ConfigGraph, parse_config, parse_edge_list, project, small_edge_count
from .degseq import DegreeSequence, degree_counts, is_graphic, parse_degrees, small_edge_mean
from .exact import (
    graph_weight,
    graph_weight_bruteforce,
    render,
    standard_probability,
    tv_distance,
)
from .switching.anchor import SwitchAnchor, switch_graph
from .switching.counting import count_upper
from .switching.verify import SUITES, run_suite, to_json_lines

PUBLISHED_RELAXED = Fraction(95652, 100000)
PUBLISHED_STANDARD = Fraction(82164, 100000)
PUBLISHED_TOL = Fraction(5, 100000)


# -- counterexample fixture ----------------------------------------------------------------

@dataclass(frozen=True)
class SwitchPair:
    upper: ConfigGraph
    lower: ConfigGraph
    anchor: SwitchAnchor
    k: int


def _parse_point_token(tok: str):
    v, c = tok.split(".")
    return int(v) - 1, int(c) - 1


def load_switch_pair(text: str | None = None) -> SwitchPair:
    """Read the shipped fixture (or ``text``): config format plus ``# anchor`` and ``# k`` lines."""
    if text is None:
        text = resources.files("degproc.data").joinpath("counterexample.txt").read_text()
    anchor = k = None
    for ln in text.splitlines():
        parts = ln.lstrip("#").split()
        if ln.startswith("#") and parts and parts[0] == "anchor":
            anchor = SwitchAnchor(*(_parse_point_token(t) for t in parts[1:5]))
        elif ln.startswith("#") and parts and parts[0] == "k":
            k = int(parts[1])
    if anchor is None or k is None:
        raise ValueError("fixture lacks '# anchor' or '# k' line")
    upper = parse_config(text)
    return SwitchPair(upper, switch_graph(upper, anchor, k), anchor, k)


def counterexample_report(permutation_check: bool = True, text: str | None = None) -> dict:
    pair = load_switch_pair(text)
    t0 = time.perf_counter()
    z_up, z_low = graph_weight(pair.upper), graph_weight(pair.lower)
    relaxed = z_up / z_low
    std_up = standard_probability(project(pair.upper))
    std_low = standard_probability(project(pair.lower))
    standard = std_up / std_low
    dp_seconds = time.perf_counter() - t0
    report = {
        "relaxed_ratio": render(relaxed, 5),
        "standard_ratio": render(standard, 5),
        "weight_upper": str(z_up),
        "weight_lower": str(z_low),
        "small_edges_upper": small_edge_count(pair.upper, pair.k),
        "small_edges_lower": small_edge_count(pair.lower, pair.k),
        "upper_cluster_count": count_upper(pair.upper, pair.k),
        "k": pair.k,
        "dp_seconds": round(dp_seconds, 3),
    }
    problems = []
    if permutation_check:
        t0 = time.perf_counter()
        brute = graph_weight_bruteforce(pair.upper) / graph_weight_bruteforce(pair.lower)
        report["permutation_seconds"] = round(time.perf_counter() - t0, 3)
        report["engines_agree"] = brute == relaxed
        if brute != relaxed:
            problems.append("subset DP and permutation sum disagree")
    if abs(relaxed - PUBLISHED_RELAXED) > PUBLISHED_TOL:
        problems.append(f"relaxed ratio {float(relaxed):.6f} is not 0.95652")
    if abs(standard - PUBLISHED_STANDARD) > PUBLISHED_TOL:
        problems.append(f"standard ratio {float(standard):.6f} is not 0.82164")
    if report["small_edges_upper"] - report["small_edges_lower"] != 1:
        problems.append("switching did not remove exactly one small edge")
    report["problems"] = problems
    report["pass"] = not problems
    return report


# -- tvd sweep --------------------------------------------------------------------------------

def degree_sequences(max_n: int, max_degree: int, max_edges: int):
    """Graphic non-increasing sequences with 2 <= n <= max_n and positive degrees."""
    for n in range(2, max_n + 1):
        for d in itertools.combinations_with_replacement(range(min(max_degree, n - 1), 0, -1), n):
            if sum(d) % 2 == 0 and sum(d) // 2 <= max_edges and is_graphic(d):
                yield d


def tvd_sweep(max_n: int = 8, max_degree: int = 3, max_edges: int = 8, stop_after: int | None = None):
    found = 0
    for d in degree_sequences(max_n, max_degree, max_edges):
        tv = tv_distance(d)
        yield {"degrees": " ".join(map(str, d)), "tvd": render(tv), "positive": tv > 0}
        if tv > 0:
            found += 1
            if stop_after is not None and found >= stop_after:
                return


# -- helpers ---------------------------------------------------------------------------------

def _counts_text(d) -> str:
    return " ".join(f"{j}:{c}" for j, c in sorted(degree_counts(d).items()))


def _emit(obj, args) -> None:
    text = json.dumps(obj, sort_keys=True, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _degrees_arg(text: str) -> DegreeSequence:
    try:
        return parse_degrees(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


# -- commands --------------------------------------------------------------------------------

def cmd_counterexample(args) -> int:
    report = counterexample_report(permutation_check=not args.no_permutation)
    report["seed"] = args.seed
    if not report["pass"]:
        for p in report["problems"]:
            print(f"fixture suspect: {p}", file=sys.stderr)
    _emit(report, args)
    return 0 if report["pass"] else 1


def cmd_simulate(args) -> int:
    d = args.degrees
    mu = small_edge_mean(d, args.k)
    recs = experiments.run_trials(d, args.k, args.variant, args.trials, args.seed, args.workers)
    summ = experiments.summarize(recs, mu, args.eps)
    run = {"degrees": _counts_text(d), "k": args.k, "variant": args.variant, "trials": args.trials,
            "seed": args.seed, "eps": str(args.eps)}
    if args.format == "json":
        _emit({"run": run, "summary": summ, "trials": experiments.records_to_rows(recs)}, args)
        return 0
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        cols = ["kind", "trial", "small_edges", "completed", "steps", "attempts",
                "mean", "variance", "within_eps", "mu", "degrees", "k", "variant", "seed", "eps"]
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for row in experiments.records_to_rows(recs):
            w.writerow({"kind": "trial", **row})
        w.writerow({"kind": "summary", "mean": summ["mean"], "variance": summ["variance"],
                    "within_eps": summ["within_eps"], "mu": summ["mu"], "degrees": run["degrees"],
                    "k": args.k, "variant": args.variant, "seed": args.seed, "eps": run["eps"]})
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def _read_graph(path: str, degrees):
    with open(path) as fh:
        text = fh.read()
    try:
        g = parse_edge_list(text, len(degrees))
    except ValueError:
        g = project(parse_config(text))
    if g.degree_vector() != tuple(degrees):
        raise ValueError(f"{path}: degree sequence does not match")
    return g


def cmd_distinguish(args) -> int:
    d = args.degrees
    mu = small_edge_mean(d, args.k)
    if args.graphs:
        graphs = [_read_graph(p, d.degrees) for p in args.graphs]
        counts = [small_edge_count(g, args.k) for g in graphs]
        labels = args.labels
        names = list(args.graphs)
    else:
        uni = experiments.run_trials(d, args.k, "uniform", args.trials, args.seed, args.workers)
        pro = experiments.run_trials(d, args.k, "standard", args.trials, args.seed + 1, args.workers)
        counts = [r.small_edges for r in uni] + [r.small_edges for r in pro]
        labels = ["uniform"] * len(uni) + ["process"] * len(pro)
        names = [f"uniform-{r.trial}" for r in uni] + [f"process-{r.trial}" for r in pro]
    if labels is not None and len(labels) != len(counts):
        raise ValueError("need one label per graph")
    res = experiments.distinguish(counts, labels, mu, args.beta, args.calibration, args.seed)
    out = {"degrees": _counts_text(d), "k": args.k, "seed": args.seed, "mu": str(mu),
           "beta": res["beta"], "evaluated": res["evaluated"],
           "decisions": [{"graph": nm, "small_edges": c, "label": lab}
                         for nm, c, lab in zip(names, counts, res["decisions"])]}
    if "accuracy" in res:
        out["accuracy"] = res["accuracy"]
    _emit(out, args)
    return 0


def cmd_verify(args) -> int:
    params = {"seed": args.seed}
    for key in ("max_edges", "max_degree", "count", "max_sequences"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    if args.zeta is not None:
        params["z"] = args.zeta
    if args.xi is not None:
        params["xi"] = args.xi
    ok = True
    out = open(args.out, "w") if args.out else None
    try:
        for rec in run_suite(args.suite, **params):
            if "summary" in rec:
                rec["seed"] = args.seed
                ok = rec["pass"]
                line = to_json_lines([rec])
                sys.stdout.write(line)
            else:
                line = to_json_lines([rec])
                if args.verbose or not rec["pass"]:
                    sys.stdout.write(line)
            if out:
                out.write(line)
    finally:
        if out:
            out.close()
    return 0 if ok else 1


def cmd_ode(args) -> int:
    prof = odemethod.parse_profile(args.profile)
    prof.check_cut(args.k)
    traj = odemethod.integrate(prof, args.step, args.guard)
    summ = odemethod.summary(traj, args.k)
    if args.refine:
        fine = odemethod.integrate(prof, traj.step / 2, args.guard)
        summ["refinement_change"] = abs(odemethod.rho(fine, args.k) - summ["rho_k"])
    summ["seed"] = args.seed
    if args.out:
        with open(args.out, "w", newline="") as fh:
            odemethod.write_trajectory_csv(traj, fh, args.every)
    print(json.dumps(summ, sort_keys=True, default=bool))
    return 0


def cmd_tvd(args) -> int:
    if args.degrees is not None:
        tv = tv_distance(args.degrees.degrees)
        _emit({"degrees": args.degrees.to_text(), "tvd": render(tv), "seed": args.seed}, args)
        return 0
    found = []
    for rec in tvd_sweep(args.max_n, args.max_degree, args.max_edges, args.stop_after):
        if rec["positive"] or args.verbose:
            print(json.dumps(rec, sort_keys=True))
        if rec["positive"]:
            found.append(rec["degrees"])
    print(json.dumps({"summary": "tvd-sweep", "max_n": args.max_n, "positive": len(found),
                      "first": found[0] if found else None, "seed": args.seed}))
    return 0 if found else 1


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the result to this file")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: all CPUs)")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="degproc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("counterexample", parents=[common],
                       help="weight ratios of the shipped switching pair")
    s.add_argument("--no-permutation", action="store_true", help="skip the 10! permutation cross-check")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("simulate", parents=[common], help="small-edge counts over seeded trials")
    s.add_argument("--degrees", type=_degrees_arg, required=True, help='e.g. "1:1000 7:1000"')
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--variant", choices=experiments.VARIANTS, default="uniform")
    s.add_argument("--trials", type=_positive, default=100)
    s.add_argument("--eps", type=Fraction, default=Fraction(1, 10))
    s.set_defaults(func=cmd_simulate, format="csv")

    s = sub.add_parser("distinguish", parents=[common], help="label graphs by their small-edge count")
    s.add_argument("--degrees", type=_degrees_arg, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--graphs", nargs="*", help="edge-list or config files; omit to sample labeled graphs")
    s.add_argument("--labels", nargs="*", choices=("uniform", "process"))
    s.add_argument("--trials", type=_positive, default=200, help="samples per class when sampling")
    s.add_argument("--beta", type=float, default=None, help="fixed relative threshold")
    s.add_argument("--calibration", type=float, default=0.2, help="held-out calibration fraction")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("verify", parents=[common], help="run a switching verification sweep")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--max-edges", type=int, default=None)
    s.add_argument("--max-degree", type=int, default=None)
    s.add_argument("--trials", dest="count", type=_positive, default=None,
                   help="random instances for sampled suites")
    s.add_argument("--max-sequences", type=int, default=None)
    s.add_argument("--zeta", type=Fraction, default=None)
    s.add_argument("--xi", type=Fraction, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("ode", parents=[common], help="integrate the fluid limit for a degree profile")
    s.add_argument("--profile", required=True, help='e.g. "1:1/2 7:1/2"')
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--step", type=Fraction, default=None)
    s.add_argument("--guard", type=Fraction, default=odemethod.DEFAULT_GUARD,
                   help="stop this fraction of T before the end")
    s.add_argument("--every", type=_positive, default=1, help="write every n-th grid row")
    s.add_argument("--refine", action="store_true", help="also report the change under step halving")
    s.set_defaults(func=cmd_ode)

    s = sub.add_parser("tvd", parents=[common], help="exact TVD between the process and uniform laws")
    s.add_argument("--degrees", type=_degrees_arg, default=None)
    s.add_argument("--max-n", type=int, default=8)
    s.add_argument("--max-degree", type=int, default=3)
    s.add_argument("--max-edges", type=int, default=8)
    s.add_argument("--stop-after", type=int, default=None)
    s.set_defaults(func=cmd_tvd)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
