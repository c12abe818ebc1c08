"""Command-line entry point: solve | benchmark | match | regret | tournament | replicator.

All floats in CSV/JSON outputs are serialized with 10 significant digits and
every run is a pure function of its seed, so repeating a command line
reproduces its outputs byte for byte.  LAFF_SEED serves as the seed fallback
when --seed is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bargaining import EnforceParams, enforceable_ebs, bully_solution, \
    punishment_length
from .engine import MatchConfig
from .evaluation import (benchmark_for, play_match, pure_nash,
                         regret_curve, replicator_run, round_robin)
from .games import EVALUATION_GAMES, GAME_NAMES, load_game, security_value
from .opponents import AGENT_NAMES, BOUNDED_MEMORY, bounded_memory_policy
from .svg import svg_line_plot


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".10g")


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LAFF_SEED")
    return int(env) if env else 0


def _config(args, T: int = 1) -> MatchConfig:
    return MatchConfig(T=T, K=args.K, eps=args.eps, delta=args.delta,
                       seed=_seed(args), C1=args.C1, C3=args.C3, C4=args.C4,
                       eta_m=args.eta_m)


def _add_common(p, with_T=True, with_game=True):
    if with_game:
        p.add_argument("--game", required=True,
                       help=f"built-in name ({', '.join(GAME_NAMES)}) or JSON file")
    p.add_argument("--K", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--C1", type=float, default=0.05)
    p.add_argument("--C3", type=float, default=0.005)
    p.add_argument("--C4", type=float, default=0.005)
    p.add_argument("--eta-m", dest="eta_m", type=float, default=0.05)
    if with_T:
        p.add_argument("--T", type=int, default=20000)


def cmd_solve(args) -> int:
    game = load_game(args.game)
    ep = EnforceParams(args.K, args.eps)
    mu_s1, s1 = security_value(game, 1)
    mu_s2, s2 = security_value(game, 2)
    ebs = enforceable_ebs(game, ep)
    bully = bully_solution(game, ep)

    def sol_dict(sol):
        d = {"kind": sol.kind, "u1": float(_fmt(sol.u1)), "u2": float(_fmt(sol.u2)),
             "alpha": float(_fmt(sol.alpha)),
             "xA": list(sol.xA) if sol.xA is not None else None,
             "xB": list(sol.xB) if sol.xB is not None else None,
             "deviation_profit": None if sol.deviation_profit is None
             else float(_fmt(sol.deviation_profit))}
        if not sol.is_fallback:
            d["punishment_length"] = punishment_length(sol, ep, mu_s2)
        return d

    doc = {
        "game": game.name, "K": args.K, "eps": args.eps,
        "security": {"mu_s1": float(_fmt(mu_s1)), "mu_s2": float(_fmt(mu_s2)),
                     "strategy1": [float(_fmt(p)) for p in s1.probs],
                     "strategy2": [float(_fmt(p)) for p in s2.probs]},
        "ebs": sol_dict(ebs),
        "bully": sol_dict(bully),
    }
    print(json.dumps(doc, indent=2))
    return 0


def cmd_benchmark(args) -> int:
    game = load_game(args.game)
    config = _config(args, T=args.T)
    ep = EnforceParams(args.K, args.eps)
    policy, w2 = bounded_memory_policy(args.opponent, game, 2, config)
    mu_star = benchmark_for(game, "bounded_memory", config,
                            opp_policy=policy, w2=w2)
    doc = {
        "game": game.name, "opponent": args.opponent,
        "mu_star": float(_fmt(mu_star)),
        "mu_s1": float(_fmt(security_value(game, 1)[0])),
        "mu_e1": float(_fmt(enforceable_ebs(game, ep).u1)),
        "mu_b1": float(_fmt(bully_solution(game, ep).u1)),
    }
    print(json.dumps(doc, indent=2))
    return 0


def _parse_params(text):
    return json.loads(text) if text else None


def cmd_match(args) -> int:
    game = load_game(args.game)
    config = _config(args, T=args.T)
    trace = play_match(game, args.p1, args.p2, config,
                       params1=_parse_params(args.p1_params),
                       params2=_parse_params(args.p2_params))
    m1, m2 = trace.mean_rewards()
    if args.trace:
        cols = trace.columns()
        header = [name for name, _ in cols]
        rows = zip(*[col for _, col in cols])
        write_csv(args.trace, header, rows)
    print(json.dumps({"game": game.name, "p1": args.p1, "p2": args.p2,
                      "T": args.T, "seed": config.seed,
                      "mean_r1": float(_fmt(m1)), "mean_r2": float(_fmt(m2))},
                     indent=2))
    return 0


def cmd_regret(args) -> int:
    game = load_game(args.game)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = _config(args, T=args.T)

    if args.opp_class == "bounded_memory":
        policy, w2 = bounded_memory_policy(args.p2, game, 2, base)
        bench = benchmark_for(game, "bounded_memory", base,
                              opp_policy=policy, w2=w2)
    else:
        bench = benchmark_for(game, args.opp_class, base)

    curves = []
    for s in range(args.seeds):
        cfg = base.with_seed(int(np.random.SeedSequence((base.seed, s))
                                 .generate_state(1)[0]))
        trace = play_match(game, args.p1, args.p2, cfg)
        rewards = trace.r2 if args.player == 2 else trace.r1
        curves.append(regret_curve(rewards, bench).average())
    avg = np.mean(curves, axis=0)
    ts = np.arange(1, args.T + 1)
    stride = max(1, args.stride)
    rows = [(int(t), avg[t - 1]) for t in ts[::stride]]
    out_csv = out_dir / f"regret_{game.name}_{args.p2}.csv"
    write_csv(out_csv, ["t", "avg_regret"], rows)
    if args.svg:
        svg_line_plot(out_dir / f"regret_{game.name}_{args.p2}.svg",
                      ts[::stride], {"avg_regret": avg[::stride]},
                      title=f"{game.name}: {args.p1} vs {args.p2}")
    print(f"wrote {out_csv} (benchmark {_fmt(bench)})")
    return 0


def cmd_tournament(args) -> int:
    games = [load_game(g) for g in args.games.split(",")]
    names = args.algorithms.split(",")
    config = _config(args, T=args.T)
    result = round_robin(names, games, args.trials, config, jobs=args.jobs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    m1, m2 = result.means()
    rows = [(names[i], names[j], m1[i, j], m2[i, j])
            for i in range(len(names)) for j in range(len(names))]
    write_csv(out_dir / "learning_game.csv", ["alg1", "alg2", "m1", "m2"], rows)

    detail = []
    for i in range(len(names)):
        for j in range(len(names)):
            for g, gname in enumerate(result.games):
                for k in range(result.trials):
                    v = result.data[i, j, g, k]
                    if not np.isnan(v[0]):
                        detail.append((names[i], names[j], gname, k, v[0], v[1]))
    write_csv(out_dir / "pair_game_trial.csv",
              ["alg1", "alg2", "game", "trial", "m1", "m2"], detail)

    eqs = pure_nash(m1, m2)
    print(json.dumps({"pure_nash": [[names[i], names[j]] for i, j in eqs]},
                     indent=2))
    return 0


def cmd_replicator(args) -> int:
    from .evaluation import TournamentResult

    rows = Path(args.input).read_text().strip().splitlines()[1:]
    names, games = [], []
    parsed = []
    for line in rows:
        a1, a2, g, k, m1, m2 = line.split(",")
        parsed.append((a1, a2, g, int(k), float(m1), float(m2)))
        for n in (a1, a2):
            if n not in names:
                names.append(n)
        if g not in games:
            games.append(g)
    trials = max(p[3] for p in parsed) + 1
    data = np.full((len(names), len(names), len(games), trials, 2), np.nan)
    for a1, a2, g, k, m1, m2 in parsed:
        data[names.index(a1), names.index(a2), games.index(g), k] = (m1, m2)
    result = TournamentResult(names=names, games=games, trials=trials, data=data)

    shares = replicator_run(result, args.generations, args.runs, seed=_seed(args))
    mean = shares.mean(axis=0)
    std = shares.std(axis=0)
    header = ["generation"] + [f"{n}_mean" for n in names] + \
        [f"{n}_std" for n in names]
    rows_out = [(g, *mean[g], *std[g]) for g in range(args.generations + 1)]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, header, rows_out)
    if args.svg:
        svg_line_plot(out.with_suffix(".svg"), np.arange(args.generations + 1),
                      {n: mean[:, i] for i, n in enumerate(names)},
                      title="population shares")
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laff",
                                description="repeated-game simulation lab")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="security values, EBS and bully solutions")
    _add_common(ps, with_T=False)
    ps.set_defaults(fn=cmd_solve)

    pb = sub.add_parser("benchmark",
                        help="benchmark values vs a bounded-memory opponent")
    _add_common(pb)
    pb.add_argument("--opponent", required=True,
                    help=f"one of {BOUNDED_MEMORY} or fixed:<a>")
    pb.set_defaults(fn=cmd_benchmark)

    pm = sub.add_parser("match", help="run one seeded match")
    _add_common(pm)
    pm.add_argument("--p1", required=True, help=f"agent: {', '.join(AGENT_NAMES)}")
    pm.add_argument("--p2", required=True)
    pm.add_argument("--p1-params", default=None, help="JSON parameter overrides")
    pm.add_argument("--p2-params", default=None)
    pm.add_argument("--trace", default=None, help="write per-step CSV here")
    pm.set_defaults(fn=cmd_match)

    pr = sub.add_parser("regret", help="seed-averaged regret curve vs a benchmark")
    _add_common(pr)
    pr.add_argument("--p1", default="laff")
    pr.add_argument("--p2", required=True)
    pr.add_argument("--opp-class", dest="opp_class", required=True,
                    choices=["adversarial", "follower_conditional",
                             "follower_unconditional", "bounded_memory"])
    pr.add_argument("--player", type=int, default=1, choices=[1, 2])
    pr.add_argument("--seeds", type=int, default=10)
    pr.add_argument("--stride", type=int, default=1)
    pr.add_argument("--out", default="out")
    pr.add_argument("--svg", action="store_true")
    pr.set_defaults(fn=cmd_regret)

    pt = sub.add_parser("tournament", help="round-robin learning game")
    _add_common(pt, with_game=False)
    pt.add_argument("--algorithms", default="laff,bully,qlearn,fp")
    pt.add_argument("--games", default=",".join(EVALUATION_GAMES))
    pt.add_argument("--trials", type=int, default=5)
    pt.add_argument("--jobs", type=int, default=1)
    pt.add_argument("--out", default="out")
    pt.set_defaults(fn=cmd_tournament)

    pp = sub.add_parser("replicator", help="population dynamics over a tournament")
    pp.add_argument("--input", required=True, help="pair_game_trial.csv path")
    pp.add_argument("--generations", type=int, default=500)
    pp.add_argument("--runs", type=int, default=100)
    pp.add_argument("--seed", type=int, default=None)
    pp.add_argument("--out", default="out/population.csv")
    pp.add_argument("--svg", action="store_true")
    pp.set_defaults(fn=cmd_replicator)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (KeyError, ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
