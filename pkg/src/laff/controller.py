"""The LAFF agent: a fixed schedule of experts with a reward-based switch test.

Experts run in descending order of potential:

    follower (bully target), bully leader, follower (egalitarian target),
    egalitarian leader, follower (security target), maximin

After each epoch of H = floor(sqrt(T)) steps, the active expert is dropped
when its average reward since activation falls below the current target
minus a slack that shrinks with time.  Follower instances share one Q table
and one exploitation trip flag; once tripped, every follower instance plays
the egalitarian leader.
"""

from __future__ import annotations

import math

from .bargaining import (EnforceParams, slack_b, slack_b_enforced,
                         slack_b_theoretical, xi)
from .engine import Agent, MatchConfig, state_space_size
from .experts import (FollowerExpert, FollowerShared, LeaderExpert, LeaderKit,
                      MaximinExpert)
from .games import BimatrixGame


class Laff(Agent):
    """Lead-and-follow expert controller for one seat of a repeated game."""

    N_EXPERTS = 6

    def __init__(self, game: BimatrixGame, player: int, config: MatchConfig, rng):
        self.game = game
        self.player = player
        self.config = config
        self.rng = rng
        self.kit = LeaderKit.build(game, player,
                                   EnforceParams(config.K, config.eps))
        # fairness level: own egalitarian value
        self.v1 = self.kit.ebs.u1
        self.targets = [self.kit.bully.u1, self.kit.bully.u1,
                        self.kit.ebs.u1, self.kit.ebs.u1, self.kit.mu_s_own]
        self.H = max(1, int(math.isqrt(config.T)))
        self.subepoch = max(1, math.ceil(math.sqrt(self.H)))
        self.shared = FollowerShared()
        self.j = 1
        self.tau = 0
        self.r_tau = 0.0
        self.switch_times: list = []
        self.active = self._build_expert(self.j)

    def _build_expert(self, j: int):
        cfg, kit, rng = self.config, self.kit, self.rng
        if j in (1, 3, 5):
            return FollowerExpert(self.game, self.player, cfg, kit,
                                  self.shared, self.subepoch, self.v1, rng)
        if j == 2:
            return LeaderExpert(self.player, kit, "bully", rng)
        if j == 4:
            return LeaderExpert(self.player, kit, "ebs", rng)
        return MaximinExpert(self.game, self.player, cfg, kit, self.subepoch, rng)

    @property
    def expert_index(self) -> int:
        return self.j

    def report_weight(self, t):
        return self.active.report_weight(t)

    def act(self, state, t):
        return self.active.act(state, t)

    def _slack(self) -> float:
        cfg = self.config
        # the test guards the target solution of the current schedule slot
        which = "bully" if self.j <= 2 else "ebs"
        m = self.kit.solution_map(which)
        if m is None:
            return slack_b(self.tau, cfg.T, cfg.delta, cfg.C1, cfg.C3)
        xi_val = xi(cfg.eps, m.r, max(1, m.Kp))
        # adaptation time granted to a follower after this seat turns
        # stationary; one leader phase unless configured explicitly
        t0 = cfg.T0 if cfg.T0 > 0 else cfg.T / 20.0
        if cfg.theoretical_slack:
            S = state_space_size(self.game, cfg.K)
            A = self.game.n1 if self.player == 1 else self.game.n2
            return slack_b_theoretical(self.tau, cfg.T, cfg.delta, xi_val,
                                       m.Kp, S, A, cfg.C1, cfg.C2, t0)
        return slack_b_enforced(self.tau, cfg.T, cfg.delta, xi_val, m.Kp,
                                cfg.C1, cfg.C3, t0)

    def observe(self, record, state):
        self.active.observe(record, state)
        self.tau += 1
        self.r_tau += record.r1 if self.player == 1 else record.r2
        if self.j < self.N_EXPERTS and self.tau % self.H == 0:
            if self.r_tau / self.tau < self.targets[self.j - 1] - self._slack():
                self.j += 1
                self.switch_times.append(record.t)
                self.tau = 0
                self.r_tau = 0.0
                self.active = self._build_expert(self.j)
