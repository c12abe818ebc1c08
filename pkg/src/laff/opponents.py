"""Opponent algorithms: leaders, learners, and the phase-switching Manipulator.

Every opponent is built for a specific seat (player 1 or 2) of the global
game and honors the engine's act/observe interface.  Bounded-memory kinds
(bully, ftft, egal, fixed, maximin) also expose a Markov policy over states
so benchmark values can be computed exactly.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .bargaining import EnforceParams
from .controller import Laff
from .engine import Agent, FixedActionAgent, MatchConfig, agent_rng
from .experts import LeaderCore, LeaderKit, TabularQ, _sample
from .games import BimatrixGame


class LeaderOpponent(Agent):
    """Standalone leader: enforces its own bargaining solution forever."""

    def __init__(self, game, player, config, which: str, punish_prob: float = 1.0,
                 rng=None):
        self.player = player
        kit = LeaderKit.build(game, player, EnforceParams(config.K, config.eps))
        self.kit = kit
        self.core = LeaderCore(kit, which, rng, punish_prob=punish_prob)

    def report_weight(self, t):
        return self.core.weight

    def act(self, state, t):
        return self.core.act(state, t)

    def policy_distribution(self, state):
        return self.core.policy_distribution(state)


def bully_agent(game, player, config, rng=None) -> LeaderOpponent:
    """Insists on the enforceable outcome that maximizes its own reward."""
    return LeaderOpponent(game, player, config, "bully", rng=rng)


def egalitarian_agent(game, player, config, rng=None) -> LeaderOpponent:
    return LeaderOpponent(game, player, config, "ebs", rng=rng)


def ftft_agent(game, player, config, p: float = 0.2, rng=None) -> LeaderOpponent:
    """Forgiving tit-for-tat: the egalitarian leader, punishing only w.p. p."""
    return LeaderOpponent(game, player, config, "ebs", punish_prob=p, rng=rng)


class MaximinAgent(Agent):
    """Plays the own maximin strategy unconditionally."""

    def __init__(self, game, player, config, rng):
        self.player = player
        self.kit = LeaderKit.build(game, player, EnforceParams(config.K, config.eps))
        self.rng = rng

    def act(self, state, t):
        return _sample(self.kit.maximin, self.rng)

    def policy_distribution(self, state):
        return self.kit.maximin.copy()


class EpsGreedyQAgent(Agent):
    """Epsilon-greedy tabular Q over memory-K states.

    Optimistic start 1/(1-gamma) with gamma = 0.95; greedy with probability
    1 - 1/(10 + t/10); learning rate 5/(10 + t/100).
    """

    GAMMA = 0.95

    def __init__(self, game: BimatrixGame, player: int, config, rng):
        self.player = player
        self.rng = rng
        n = game.n1 if player == 1 else game.n2
        self.q = TabularQ(n, q0=1.0 / (1.0 - self.GAMMA), gamma=self.GAMMA)
        self._pending = None

    @staticmethod
    def explore_prob(t: int) -> float:
        return 1.0 / (10.0 + t / 10.0)

    @staticmethod
    def learning_rate(t: int) -> float:
        return 5.0 / (10.0 + t / 100.0)

    def act(self, state, t):
        if self._pending is not None:
            ps, pa, pr, pt = self._pending
            self.q.update(ps, pa, pr, state, self.learning_rate(pt))
        if self.rng.random() < self.explore_prob(t):
            a = int(self.rng.integers(self.q.n_actions))
        else:
            a = self.q.greedy(state)
        self._pending = (state, a, 0.0, t)
        return a

    def observe(self, record, state):
        if self._pending is not None:
            r_own = record.r1 if self.player == 1 else record.r2
            s, a, _, t = self._pending
            self._pending = (s, a, r_own, t)


class FictitiousPlayAgent(Agent):
    """Best response to the empirical marginal of the opponent's past actions.

    State-independent; starts from a uniform prior and breaks ties toward
    the lowest action index.  Deterministic given the opponent's sequence.
    """

    def __init__(self, game: BimatrixGame, player: int):
        self.player = player
        # own x opponent payoff matrix
        self.M = game.R1 if player == 1 else game.R2.T
        self.counts = np.zeros(self.M.shape[1])

    def act(self, state, t):
        total = self.counts.sum()
        if total > 0:
            phat = self.counts / total
        else:
            phat = np.full(self.M.shape[1], 1.0 / self.M.shape[1])
        return int(np.argmax(self.M @ phat))

    def observe(self, record, state):
        opp = record.a2 if self.player == 1 else record.a1
        self.counts[opp] += 1


class ManipulatorAgent(Agent):
    """Leads with its selfish solution, falls back to RL, locks the winner.

    Phase 1 (first T/20 steps): plays its bully leader.  Afterwards, if the
    overall average reward sits below the bully value minus eps', each step
    switches to the RL arm with probability p_switch.  3T/10 steps after
    switching, a nonstationary opponent causes the better-performing arm to
    be locked; a stationary one buys the RL arm another T/20-step audition
    before the same decision.  Whenever the overall average falls below the
    security value minus eps', the maximin strategy temporarily overrides.
    Nonstationarity = total-variation distance > 0.1 between the opponent's
    action distributions over the last two T/20-step windows.
    """

    def __init__(self, game: BimatrixGame, player: int, config, rng,
                 eps_prime: float = 0.025, p_switch: float = 0.00005):
        self.player = player
        self.config = config
        self.rng = rng
        self.eps_prime = float(eps_prime)
        self.p_switch = float(p_switch)
        self.kit = LeaderKit.build(game, player, EnforceParams(config.K, config.eps))
        self.leader = LeaderCore(self.kit, "bully", rng)
        n_own = game.n1 if player == 1 else game.n2
        self.n_opp = game.n2 if player == 1 else game.n1
        self.rl = EpsGreedyQAgent(game, player, config, rng)
        self.window = max(1, config.T // 20)
        self.probe = max(1, 3 * config.T // 10)
        self.phase = "leader"          # leader | rl | locked
        self.locked_arm: Optional[str] = None
        self.t_switch: Optional[int] = None
        self.cum = 0.0
        self.steps = 0
        self.arm_cum = {"leader": 0.0, "rl": 0.0}
        self.arm_steps = {"leader": 0, "rl": 0}
        self.opp_actions: list = []
        self.override = False
        self.override_steps = 0
        self._arm_this_step = "leader"

    def _tv_nonstationary(self) -> bool:
        w = self.window
        if len(self.opp_actions) < 2 * w:
            return False
        last = np.bincount(self.opp_actions[-w:], minlength=self.n_opp) / w
        prev = np.bincount(self.opp_actions[-2 * w:-w], minlength=self.n_opp) / w
        return 0.5 * np.abs(last - prev).sum() > 0.1

    def _current_arm(self) -> str:
        if self.phase == "locked":
            return self.locked_arm
        return "rl" if self.phase == "rl" else "leader"

    def report_weight(self, t):
        return self.leader.weight if self._current_arm() == "leader" else 0.0

    def act(self, state, t):
        arm = self._current_arm()
        self._arm_this_step = arm
        if self.override:
            self.override_steps += 1
            return _sample(self.kit.maximin, self.rng)
        if arm == "leader":
            return self.leader.act(state, t)
        return self.rl.act(state, t)

    def observe(self, record, state):
        r_own = record.r1 if self.player == 1 else record.r2
        opp = record.a2 if self.player == 1 else record.a1
        self.steps += 1
        self.cum += r_own
        self.opp_actions.append(int(opp))
        arm = self._arm_this_step
        self.arm_cum[arm] += r_own
        self.arm_steps[arm] += 1
        if arm == "rl":
            self.rl.observe(record, state)

        t = record.t
        avg = self.cum / self.steps
        self.override = avg < self.kit.mu_s_own - self.eps_prime

        if self.phase == "leader" and t > self.window:
            if (avg < self.kit.bully.u1 - self.eps_prime
                    and self.rng.random() < self.p_switch):
                self.phase = "rl"
                self.t_switch = t
        elif self.phase == "rl":
            elapsed = t - self.t_switch
            if elapsed == self.probe:
                if self._tv_nonstationary():
                    self._lock_best()
            elif elapsed == self.probe + self.window:
                if self._tv_nonstationary():
                    self._lock_best()
                else:
                    self.phase, self.locked_arm = "locked", "rl"

    def _lock_best(self):
        avgs = {a: (self.arm_cum[a] / self.arm_steps[a]) if self.arm_steps[a] else -1.0
                for a in ("leader", "rl")}
        self.locked_arm = "leader" if avgs["leader"] >= avgs["rl"] else "rl"
        self.phase = "locked"


AGENT_NAMES = ("laff", "bully", "ftft", "qlearn", "fp", "manipulator",
               "egal", "maximin")


def build_agent(name: str, game: BimatrixGame, player: int, config: MatchConfig,
                rng=None, params: Optional[dict] = None) -> Agent:
    """Construct an agent by name for one seat; 'fixed:<a>' plays action a."""
    params = dict(params or {})
    if rng is None:
        rng = agent_rng(config.seed, player)
    if name.startswith("fixed:"):
        return FixedActionAgent(int(name.split(":", 1)[1]), player=player,
                                weight=params.get("weight", 0.0))
    if name == "laff":
        return Laff(game, player, config, rng)
    if name == "bully":
        return bully_agent(game, player, config, rng=rng)
    if name == "ftft":
        return ftft_agent(game, player, config, p=params.get("p", 0.2), rng=rng)
    if name == "egal":
        return egalitarian_agent(game, player, config, rng=rng)
    if name == "maximin":
        return MaximinAgent(game, player, config, rng)
    if name == "qlearn":
        return EpsGreedyQAgent(game, player, config, rng)
    if name == "fp":
        return FictitiousPlayAgent(game, player)
    if name == "manipulator":
        return ManipulatorAgent(game, player, config, rng,
                                eps_prime=params.get("eps_prime", 0.025),
                                p_switch=params.get("p_switch", 0.00005))
    raise KeyError(f"unknown agent '{name}'; choose from {AGENT_NAMES} or fixed:<a>")


BOUNDED_MEMORY = ("bully", "ftft", "egal", "maximin")


def bounded_memory_policy(name: str, game: BimatrixGame, player: int,
                          config: MatchConfig, params: Optional[dict] = None):
    """Markov policy and signal weight of a bounded-memory opponent kind.

    Returns (policy, w) where ``policy(state) -> distribution`` over the
    seat's actions; used to induce the benchmark MDP for the other seat.
    """
    params = dict(params or {})
    rng = np.random.default_rng(0)  # policy extraction draws nothing
    if name.startswith("fixed:"):
        a = int(name.split(":", 1)[1])
        n = game.n1 if player == 1 else game.n2
        point = np.zeros(n)
        point[a] = 1.0
        return (lambda state: point.copy()), params.get("weight", 0.0)
    if name in ("bully", "ftft", "egal"):
        which = "bully" if name == "bully" else "ebs"
        p = params.get("p", 0.2) if name == "ftft" else 1.0
        kit = LeaderKit.build(game, player, EnforceParams(config.K, config.eps))
        core = LeaderCore(kit, which, rng, punish_prob=p)
        return core.policy_distribution, core.weight
    if name == "maximin":
        kit = LeaderKit.build(game, player, EnforceParams(config.K, config.eps))
        return (lambda state: kit.maximin.copy()), 0.0
    raise KeyError(f"'{name}' is not a bounded-memory opponent kind")
