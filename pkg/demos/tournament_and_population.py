"""Round-robin learning game and replicator dynamics over the built-in
algorithms, a desk-scale version of the full evaluation pipeline.

Writes learning_game.csv, population.csv and an SVG under demos/out/.

Run:  python3 demos/tournament_and_population.py          (a few minutes)
      python3 demos/tournament_and_population.py --quick
"""

import sys
from pathlib import Path

import numpy as np

from laff import (EVALUATION_GAMES, MatchConfig, builtin_game, pure_nash,
                  replicator_run, round_robin)
from laff.svg import svg_line_plot

QUICK = "--quick" in sys.argv
ALGS = ["laff", "bully", "qlearn", "fp"]
GAMES = [builtin_game(n) for n in
         (EVALUATION_GAMES[:4] if QUICK else EVALUATION_GAMES)]
T = 5000 if QUICK else 20000
TRIALS = 1 if QUICK else 2
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

print(f"round robin: {len(ALGS)} algorithms x {len(GAMES)} games x "
      f"{TRIALS} trials at T={T} ...")
result = round_robin(ALGS, GAMES, TRIALS, MatchConfig(T=T, seed=7))
m1, m2 = result.means()

print(f"\n{'':10s}" + "".join(f"{n:>16s}" for n in ALGS))
for i, n in enumerate(ALGS):
    row = "".join(f"   {m1[i, j]:.2f}, {m2[i, j]:.2f} " for j in range(len(ALGS)))
    print(f"{n:>10s}{row}")

eqs = pure_nash(m1, m2)
print("\npure equilibria of the learning game:",
      [(ALGS[i], ALGS[j]) for i, j in eqs])

lines = ["alg1,alg2,m1,m2"]
for i in range(len(ALGS)):
    for j in range(len(ALGS)):
        lines.append(f"{ALGS[i]},{ALGS[j]},{m1[i, j]:.10g},{m2[i, j]:.10g}")
(OUT / "learning_game.csv").write_text("\n".join(lines) + "\n")

gens, runs = (200, 30) if QUICK else (500, 100)
print(f"\nreplicator dynamics: {runs} runs x {gens} generations ...")
shares = replicator_run(result, generations=gens, runs=runs, seed=3)
mean = shares.mean(axis=0)
for k, n in enumerate(ALGS):
    print(f"  final mean share of {n:7s}: {mean[-1, k]:.3f}")

lines = ["generation," + ",".join(ALGS)]
for g in range(gens + 1):
    lines.append(f"{g}," + ",".join(f"{mean[g, k]:.10g}"
                                    for k in range(len(ALGS))))
(OUT / "population.csv").write_text("\n".join(lines) + "\n")
svg_line_plot(OUT / "population.svg", np.arange(gens + 1),
              {n: mean[:, k] for k, n in enumerate(ALGS)},
              title="mean population shares")
print(f"\noutputs in {OUT}/")
