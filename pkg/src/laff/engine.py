"""Repeated-game engine: memory-K states, public signals, seeded match loop.

The state at step t holds both players' last K actions and last K+1 signal
bits (the current bit included).  One uniform draw x_t per step feeds both
players' signal bits, y_i = 1[x_t < w_i], so equal weights give a shared
coin.  All randomness in a match derives from the seed: the engine stream
and one substream per agent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np


class HistoryState(NamedTuple):
    """Last K actions per player plus last K+1 signal bits per player."""

    a1: tuple
    a2: tuple
    y1: tuple
    y2: tuple


class StepRecord(NamedTuple):
    t: int
    a1: int
    a2: int
    y1: int
    y2: int
    x: float
    r1: float
    r2: float


@dataclass
class MatchConfig:
    """Horizon, memory, enforceability and tuning knobs for one match."""

    T: int
    K: int = 1
    eps: float = 0.05
    delta: float = 0.05
    seed: int = 0
    C1: float = 0.05
    C3: float = 0.005
    C4: float = 0.005
    eta_m: float = 0.05
    theoretical_slack: bool = False
    C2: float = 1.0
    T0: float = 0.0

    def __post_init__(self):
        if self.T < 1 or self.K < 1:
            raise ValueError("T and K must be >= 1")
        if self.eps <= 0 or not (0 < self.delta < 1):
            raise ValueError("need eps > 0 and delta in (0, 1)")

    def with_seed(self, seed: int) -> "MatchConfig":
        return replace(self, seed=int(seed))


def state_space_size(game, K: int) -> int:
    """Number of distinct memory-K states: (n1*n2)^K * 2^(2K+2)."""
    return (game.n1 * game.n2) ** K * 2 ** (2 * K + 2)


def draw_signals(x: float, w1: float, w2: float):
    """Both players' signal bits from the shared uniform draw x."""
    return int(x < w1), int(x < w2)


def engine_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def agent_rng(seed: int, player: int) -> np.random.Generator:
    """Per-agent substream, independent of the engine draw order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(player,)))


class Agent:
    """Uniform act/observe interface satisfied by LAFF, experts and opponents.

    Agents are constructed for a specific seat (player 1 or 2) of a specific
    game and see states and records in the shared global frame.
    """

    player: int = 1

    def report_weight(self, t: int) -> float:
        return 0.0

    def act(self, state: HistoryState, t: int) -> int:
        raise NotImplementedError

    def observe(self, record: StepRecord, state: HistoryState) -> None:
        pass


@dataclass
class MatchTrace:
    """Per-step actions, signals, draws and rewards for one match."""

    game_name: str
    t: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    x: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    expert1: Optional[np.ndarray] = None
    expert2: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.t)

    def mean_rewards(self):
        return float(self.r1.mean()), float(self.r2.mean())

    def columns(self):
        cols = [("t", self.t), ("a1", self.a1), ("a2", self.a2),
                ("y1", self.y1), ("y2", self.y2), ("x", self.x),
                ("r1", self.r1), ("r2", self.r2)]
        if self.expert1 is not None:
            cols.append(("expert1", self.expert1))
        if self.expert2 is not None:
            cols.append(("expert2", self.expert2))
        return cols


def run_match(game, alg1: Agent, alg2: Agent, config: MatchConfig) -> MatchTrace:
    """Play T steps of the repeated game; identical seeds give identical traces.

    Histories start at action 0 with signal bits drawn from the seeded
    stream (weights requested once at t=0), so the first K+1 uniform draws
    fully determine the starting state.
    """
    T, K = config.T, config.K
    rng = engine_rng(config.seed)
    R1, R2 = game.R1, game.R2
    n1, n2 = game.n1, game.n2

    a1h = (0,) * K
    a2h = (0,) * K
    w1 = float(alg1.report_weight(0))
    w2 = float(alg2.report_weight(0))
    y1h, y2h = (), ()
    for _ in range(K):
        xb = rng.random()
        b1, b2 = draw_signals(xb, w1, w2)
        y1h += (b1,)
        y2h += (b2,)

    track1 = hasattr(alg1, "expert_index")
    track2 = hasattr(alg2, "expert_index")
    t_col = np.arange(1, T + 1, dtype=np.int64)
    a1_col = np.empty(T, dtype=np.int64)
    a2_col = np.empty(T, dtype=np.int64)
    y1_col = np.empty(T, dtype=np.int64)
    y2_col = np.empty(T, dtype=np.int64)
    x_col = np.empty(T, dtype=np.float64)
    r1_col = np.empty(T, dtype=np.float64)
    r2_col = np.empty(T, dtype=np.float64)
    e1_col = np.empty(T, dtype=np.int64) if track1 else None
    e2_col = np.empty(T, dtype=np.int64) if track2 else None

    for t in range(1, T + 1):
        w1 = float(alg1.report_weight(t))
        w2 = float(alg2.report_weight(t))
        x = rng.random()
        b1, b2 = draw_signals(x, w1, w2)
        y1h = y1h[-K:] + (b1,)
        y2h = y2h[-K:] + (b2,)
        state = HistoryState(a1h, a2h, y1h, y2h)

        a1 = alg1.act(state, t)
        a2 = alg2.act(state, t)
        if not 0 <= a1 < n1:
            raise RuntimeError(f"player 1 agent returned action {a1} "
                               f"outside 0..{n1 - 1} at step {t}")
        if not 0 <= a2 < n2:
            raise RuntimeError(f"player 2 agent returned action {a2} "
                               f"outside 0..{n2 - 1} at step {t}")
        # capture the experts that actually acted, before observe may switch
        idx1 = alg1.expert_index if track1 else 0
        idx2 = alg2.expert_index if track2 else 0
        r1 = R1[a1, a2]
        r2 = R2[a1, a2]
        record = StepRecord(t, a1, a2, b1, b2, x, r1, r2)
        alg1.observe(record, state)
        alg2.observe(record, state)

        i = t - 1
        a1_col[i] = a1
        a2_col[i] = a2
        y1_col[i] = b1
        y2_col[i] = b2
        x_col[i] = x
        r1_col[i] = r1
        r2_col[i] = r2
        if track1:
            e1_col[i] = idx1
        if track2:
            e2_col[i] = idx2

        a1h = a1h[1:] + (a1,)
        a2h = a2h[1:] + (a2,)

    return MatchTrace(game_name=game.name, t=t_col, a1=a1_col, a2=a2_col,
                      y1=y1_col, y2=y2_col, x=x_col, r1=r1_col, r2=r2_col,
                      expert1=e1_col, expert2=e2_col)


class FixedActionAgent(Agent):
    """Plays one action forever; the simplest probe opponent."""

    def __init__(self, action: int, player: int = 1, weight: float = 0.0):
        self.player = player
        self.action = int(action)
        self._w = float(weight)

    def report_weight(self, t):
        return self._w

    def act(self, state, t):
        return self.action
