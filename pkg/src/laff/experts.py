"""LAFF's sub-algorithms: leader enforcement, optimistic-Q follower, maximin.

Leaders hold a bargaining solution, map the public signal bit to one of its
two cells, and punish recent opponent deviations with the punishment
strategy.  So that two independently built leaders coordinate on the same
correlated stream (self-play), cells are canonicalized in global
coordinates: the lexicographically smaller cell is assigned to signal 1 and
the reported weight is that cell's mixture weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bargaining import (EnforceParams, JointAction, PairSolution,
                         enforceable_ebs, bully_solution, punishment_length)
from .engine import Agent, HistoryState, StepRecord, state_space_size
from .games import BimatrixGame, security_value, punishment_strategy, swap_players


def rq_bound(tau: int, delta: float, S: int, A: int) -> float:
    """Regret scale of the tabular follower: (S*A*log(tau/delta))^(1/3) * tau^(2/3).

    Unit leading constant; callers scale by the tuned C4 at test sites.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return (S * A * math.log(tau / delta)) ** (1.0 / 3.0) * tau ** (2.0 / 3.0)


# Leading constant of the follower regret bound, absorbed at the trip-test
# site together with C4.  The bound is stated only up to an O(1) factor;
# this value is calibrated so the tripwire fires on genuinely capped
# opponents within the first epoch but survives an ordinary learner's
# burn-in (see tests).
RQ_LEADING_CONSTANT = 20.0


def _sample(dist: np.ndarray, rng) -> int:
    x = rng.random()
    acc = 0.0
    for i, p in enumerate(dist):
        acc += p
        if x < acc:
            return i
    return len(dist) - 1


@dataclass
class SolutionMap:
    """A pair solution expressed as global cells keyed by the signal bit."""

    cell1: JointAction   # played when the signal bit is 1 (probability = weight)
    cell0: JointAction
    weight: float
    Kp: int
    r: float             # deviation profit of the solution's action set


def _to_global(cell: JointAction, player: int) -> JointAction:
    return cell if player == 1 else JointAction(cell.a2, cell.a1)


def _canonical_map(solution: PairSolution, player: int, Kp: int) -> Optional[SolutionMap]:
    if solution.is_fallback:
        return None
    xa = _to_global(solution.xA, player)
    xb = _to_global(solution.xB, player)
    if tuple(xb) < tuple(xa):
        xa, xb = xb, xa
        w = 1.0 - solution.alpha
    else:
        w = solution.alpha
    return SolutionMap(cell1=xa, cell0=xb, weight=float(w), Kp=Kp,
                       r=solution.deviation_profit)


@dataclass
class LeaderKit:
    """Everything a seat needs to lead: solutions, punish/maximin strategies."""

    player: int
    ep: EnforceParams
    n_own: int
    n_opp: int
    mu_s_own: float
    mu_s_opp: float
    maximin: np.ndarray      # own maximin strategy v_M
    punish: np.ndarray       # own punishment strategy v_P
    ebs: PairSolution        # own-frame values: u1 = own, u2 = opponent
    bully: PairSolution
    ebs_map: Optional[SolutionMap]
    bully_map: Optional[SolutionMap]

    @classmethod
    def build(cls, game: BimatrixGame, player: int, ep: EnforceParams) -> "LeaderKit":
        own = game if player == 1 else swap_players(game)
        mu_s_own, v_m = security_value(own, 1)
        mu_s_opp, _ = security_value(own, 2)
        _, v_p = punishment_strategy(own)
        ebs = enforceable_ebs(own, ep)
        bully = bully_solution(own, ep)
        kp_e = 0 if ebs.is_fallback else punishment_length(ebs, ep, mu_s_opp)
        kp_b = 0 if bully.is_fallback else punishment_length(bully, ep, mu_s_opp)
        return cls(player=player, ep=ep, n_own=own.n1, n_opp=own.n2,
                   mu_s_own=mu_s_own, mu_s_opp=mu_s_opp,
                   maximin=v_m.as_array(), punish=v_p.as_array(),
                   ebs=ebs, bully=bully,
                   ebs_map=_canonical_map(ebs, player, kp_e),
                   bully_map=_canonical_map(bully, player, kp_b))

    @property
    def ebs_weight(self) -> float:
        return self.ebs_map.weight if self.ebs_map is not None else 0.0

    def solution_map(self, which: str) -> Optional[SolutionMap]:
        return self.ebs_map if which == "ebs" else self.bully_map


class LeaderCore:
    """Stationary enforcement of one solution map (the leader behavior).

    The leader's own signal bit selects the target cell each step; it plays
    its half and expects the opponent's half of that same cell.  Keying both
    halves on the leader's public signal keeps enforcement coherent no
    matter what weight the opponent reports.  For the first Kp steps after
    activation the target action is played unconditionally, so an opponent
    is never punished for play that predates the enforcement.  Afterwards,
    any opponent deviation within the last Kp steps triggers the punishment
    strategy (with probability ``punish_prob``, 1 by default).  With no
    enforceable solution the core degrades to the maximin strategy.
    """

    def __init__(self, kit: LeaderKit, which: str, rng, punish_prob: float = 1.0):
        self.kit = kit
        self.player = kit.player
        self.map = kit.solution_map(which)
        self.rng = rng
        self.punish_prob = float(punish_prob)
        self.steps_active = 0
        self.punish_steps = 0

    @property
    def weight(self) -> float:
        return self.map.weight if self.map is not None else 0.0

    @property
    def is_fallback(self) -> bool:
        return self.map is None

    def _cell(self, bit: int) -> JointAction:
        return self.map.cell1 if bit else self.map.cell0

    def _own_component(self, cell: JointAction) -> int:
        return cell.a1 if self.player == 1 else cell.a2

    def _opp_component(self, cell: JointAction) -> int:
        return cell.a2 if self.player == 1 else cell.a1

    def _deviated(self, state: HistoryState) -> bool:
        kp = self.map.Kp
        if kp == 0:
            return False
        opp_actions = state.a2 if self.player == 1 else state.a1
        own_bits = state.y1 if self.player == 1 else state.y2
        for k in range(1, kp + 1):
            expected = self._opp_component(self._cell(own_bits[-k - 1]))
            if opp_actions[-k] != expected:
                return True
        return False

    def act(self, state: HistoryState, t: int) -> int:
        if self.map is None:
            self.steps_active += 1
            return _sample(self.kit.maximin, self.rng)
        own_bits = state.y1 if self.player == 1 else state.y2
        target = self._own_component(self._cell(own_bits[-1]))
        action = target
        if self.steps_active >= self.map.Kp and self._deviated(state):
            if self.punish_prob >= 1.0 or self.rng.random() < self.punish_prob:
                action = _sample(self.kit.punish, self.rng)
                self.punish_steps += 1
        self.steps_active += 1
        return action

    def policy_distribution(self, state: HistoryState) -> np.ndarray:
        """Stationary action law at a state (the post-amnesty Markov policy)."""
        n_own = len(self.kit.maximin)
        if self.map is None:
            return self.kit.maximin.copy()
        own_bits = state.y1 if self.player == 1 else state.y2
        target = self._own_component(self._cell(own_bits[-1]))
        point = np.zeros(n_own)
        point[target] = 1.0
        if self._deviated(state):
            return self.punish_prob * self.kit.punish + (1 - self.punish_prob) * point
        return point

    def expected_opponent_action(self, opp_bit: int) -> int:
        return self._opp_component(self._cell(opp_bit))


def compliant_policy(kit: LeaderKit, which: str = "ebs"):
    """Opponent policy that always plays its half of the leader's solution.

    Compliance tracks the leader's (public) signal bit.
    """
    m = kit.solution_map(which)
    if m is None:
        raise ValueError("no enforceable solution to comply with")
    opp_is_p2 = kit.player == 1
    n_opp = kit.n_opp

    def policy(state: HistoryState) -> np.ndarray:
        bit = (state.y1 if opp_is_p2 else state.y2)[-1]
        cell = m.cell1 if bit else m.cell0
        d = np.zeros(n_opp)
        d[cell.a2 if opp_is_p2 else cell.a1] = 1.0
        return d

    return policy


class TabularQ:
    """Plain tabular Q values with optimistic initialization.

    The learning-rate schedule is supplied by the caller at update time, so
    the same table serves both the count-based follower and the time-based
    epsilon-greedy opponent.
    """

    def __init__(self, n_actions: int, q0: float, gamma: float,
                 table: Optional[dict] = None, counts: Optional[dict] = None):
        self.n_actions = n_actions
        self.q0 = float(q0)
        self.gamma = float(gamma)
        self.table = table if table is not None else {}
        self.counts = counts if counts is not None else {}

    def row(self, state):
        row = self.table.get(state)
        if row is None:
            row = [self.q0] * self.n_actions
            self.table[state] = row
        return row

    def count_row(self, state):
        row = self.counts.get(state)
        if row is None:
            row = [0] * self.n_actions
            self.counts[state] = row
        return row

    def greedy(self, state) -> int:
        row = self.row(state)
        best, best_v = 0, row[0]
        for a in range(1, self.n_actions):
            if row[a] > best_v:
                best, best_v = a, row[a]
        return best

    def update(self, state, action, reward, next_state, lr: float):
        row = self.row(state)
        nxt = max(self.row(next_state))
        row[action] += lr * (reward + self.gamma * nxt - row[action])


@dataclass
class FollowerShared:
    """State carried across every follower instance within one match."""

    table: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    tripped: bool = False


class FollowerExpert(Agent):
    """Optimistic Q-learning with an exploitation tripwire.

    Learns greedily over memory-K states from an optimistic start.  At each
    subepoch boundary the running average since activation is compared with
    the fairness level V1 minus the scaled follower-regret allowance; a
    failure trips the shared flag, and the expert (and every later follower
    instance) plays the egalitarian leader instead.
    """

    GAMMA = 0.95
    H0 = 10

    def __init__(self, game: BimatrixGame, player: int, config, kit: LeaderKit,
                 shared: FollowerShared, subepoch: int, v1: float, rng):
        self.player = player
        self.config = config
        self.kit = kit
        self.shared = shared
        self.subepoch = max(1, int(subepoch))
        self.v1 = float(v1)
        self.rng = rng
        self.S = state_space_size(game, config.K)
        self.A = game.n1 if player == 1 else game.n2
        self.q = TabularQ(self.A, q0=1.0 / (1.0 - self.GAMMA), gamma=self.GAMMA,
                          table=shared.table, counts=shared.counts)
        self.tau = 0
        self.cum = 0.0
        self._pending = None  # (state, action)
        self._delegate = None
        if shared.tripped:
            self._make_delegate()

    def _make_delegate(self):
        if self._delegate is None:
            self._delegate = LeaderCore(self.kit, "ebs", self.rng)

    @property
    def weight(self) -> float:
        return self.kit.ebs_weight

    def report_weight(self, t):
        return self.weight

    def act(self, state, t):
        if self.shared.tripped:
            self._make_delegate()
            self._pending = None
            return self._delegate.act(state, t)
        if self._pending is not None:
            ps, pa, pr = self._pending
            counts = self.q.count_row(ps)
            counts[pa] += 1
            lr = (self.H0 + 1.0) / (self.H0 + counts[pa])
            self.q.update(ps, pa, pr, state, lr)
        a = self.q.greedy(state)
        self._pending = (state, a, 0.0)
        return a

    def observe(self, record: StepRecord, state):
        r_own = record.r1 if self.player == 1 else record.r2
        if self.shared.tripped:
            return
        if self._pending is not None:
            self._pending = (self._pending[0], self._pending[1], r_own)
        self.tau += 1
        self.cum += r_own
        if self.tau % self.subepoch == 0:
            allowance = self.config.C4 * RQ_LEADING_CONSTANT * rq_bound(
                self.tau, self.config.delta / self.config.T, self.S, self.A)
            if self.cum / self.tau < self.v1 - allowance / self.tau:
                self.shared.tripped = True
                self._pending = None
                self._make_delegate()


class MaximinExpert(Agent):
    """Safety play with an exploitation tripwire on the opponent's rewards.

    Plays the maximin strategy; at subepoch boundaries, if the opponent's
    average reward since activation (first K steps excluded) significantly
    exceeds its egalitarian value, switches to the egalitarian leader for
    the rest of the game.
    """

    def __init__(self, game: BimatrixGame, player: int, config, kit: LeaderKit,
                 subepoch: int, rng):
        self.player = player
        self.config = config
        self.kit = kit
        self.subepoch = max(1, int(subepoch))
        self.rng = rng
        self.tau = 0
        self.opp_cum = 0.0
        self.tripped = False
        self._delegate = None

    @property
    def weight(self) -> float:
        return self.kit.ebs_weight

    def report_weight(self, t):
        return self.weight

    def act(self, state, t):
        if self.tripped:
            return self._delegate.act(state, t)
        return _sample(self.kit.maximin, self.rng)

    def observe(self, record: StepRecord, state):
        if self.tripped:
            return
        K = self.config.K
        r_opp = record.r2 if self.player == 1 else record.r1
        self.tau += 1
        if self.tau > K:
            self.opp_cum += r_opp
        if self.tau % self.subepoch == 0 and self.tau > K:
            n = self.tau - K
            bound = (self.kit.ebs.u2 - self.config.eta_m
                     + math.sqrt(math.log(self.config.T / self.config.delta) / (2 * n)))
            if self.opp_cum / n > bound:
                self.tripped = True
                self._delegate = LeaderCore(self.kit, "ebs", self.rng)


class LeaderExpert(Agent):
    """Thin agent wrapper over a LeaderCore (egalitarian or bully)."""

    def __init__(self, player: int, kit: LeaderKit, which: str, rng,
                 punish_prob: float = 1.0):
        self.player = player
        self.core = LeaderCore(kit, which, rng, punish_prob=punish_prob)
        self.kit = kit

    @property
    def weight(self) -> float:
        return self.core.weight

    def report_weight(self, t):
        return self.core.weight

    def act(self, state, t):
        return self.core.act(state, t)
