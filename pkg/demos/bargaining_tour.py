"""Tour of the bargaining layer: security values, enforceable solutions,
punishment lengths, and how the feasible region reacts to the slack eps.

Run:  python3 demos/bargaining_tour.py
"""

import numpy as np

from laff import (EnforceParams, GAME_NAMES, builtin_game, bully_solution,
                  deviation_profit, enforceable_ebs, punishment_length,
                  security_value)

ep = EnforceParams(K=1, eps=0.05)

print(f"{'game':18s} {'muS':>12s} {'EBS (u1,u2)':>16s} {'alpha':>6s} "
      f"{'K_ebs':>5s} {'Bully u1':>8s} {'K_bly':>5s}")
for name in GAME_NAMES:
    g = builtin_game(name)
    s1, _ = security_value(g, 1)
    s2, _ = security_value(g, 2)
    ebs = enforceable_ebs(g, ep)
    bully = bully_solution(g, ep)
    kp_e = "-" if ebs.is_fallback else punishment_length(ebs, ep, s2)
    kp_b = "-" if bully.is_fallback else punishment_length(bully, ep, s2)
    print(f"{name:18s} ({s1:.2f},{s2:.2f})  ({ebs.u1:.3f},{ebs.u2:.3f}) "
          f"{ebs.alpha:6.3f} {kp_e!s:>5s} {bully.u1:8.3f} {kp_b!s:>5s}")

print("""
Notes
-----
* With one-step memory and eps = 0.05, every built-in game admits an
  enforceable egalitarian solution; most bully solutions are pure cells.
* A zero punishment length means deviations are self-harming: the solution
  enforces itself, as in Chicken.
""")

# Chicken's feasibility boundary: the even split survives exactly while
# eps < 0.375 K + 0.25 (one extra grid step of tolerance).
g = builtin_game("chicken")
print("Chicken even-split feasibility as eps grows (K = 1):")
for eps in np.arange(0.55, 0.70, 0.025):
    sol = enforceable_ebs(g, EnforceParams(1, float(eps)))
    tag = "even split" if abs(sol.alpha - 0.5) < 1e-9 else \
        f"shifted to alpha={sol.alpha:.3f}"
    print(f"  eps={eps:.3f}: u=({sol.u1:.4f},{sol.u2:.4f})  {tag}")
print("boundary predicted at eps = 0.375*1 + 0.25 = 0.625")

print("\nDeviation profits of Chicken's even split:",
      deviation_profit(g, {(0, 1), (1, 0)}),
      "(negative: cheating costs the deviator on the spot)")
