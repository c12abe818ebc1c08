"""Regret metrics, benchmarks, round-robin learning game, replicator dynamics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bargaining import EnforceParams, bully_solution, enforceable_ebs
from .engine import MatchConfig, run_match
from .experts import LeaderKit
from .games import BimatrixGame, security_value
from .mdp import induce_mdp, optimal_average_reward
from .opponents import build_agent


def play_match(game: BimatrixGame, name1: str, name2: str, config: MatchConfig,
               params1: Optional[dict] = None, params2: Optional[dict] = None):
    """Build both agents by name from the match seed and run the match."""
    a1 = build_agent(name1, game, 1, config, params=params1)
    a2 = build_agent(name2, game, 2, config, params=params2)
    return run_match(game, a1, a2, config)


@dataclass
class RegretCurve:
    """Cumulative regret against a fixed per-step benchmark."""

    benchmark: float
    cumulative: np.ndarray  # entry i = (i+1)*benchmark - sum of first i+1 rewards

    def __len__(self):
        return len(self.cumulative)

    def average(self) -> np.ndarray:
        t = np.arange(1, len(self.cumulative) + 1)
        return self.cumulative / t

    def second_half_slope(self) -> float:
        """Least-squares slope of the cumulative curve over its second half."""
        n = len(self.cumulative)
        if n < 4:
            raise ValueError("curve too short for a slope estimate")
        ts = np.arange(1, n + 1)[n // 2:]
        ys = self.cumulative[n // 2:]
        return float(np.polyfit(ts, ys, 1)[0])


def regret_curve(rewards: np.ndarray, benchmark: float) -> RegretCurve:
    rewards = np.asarray(rewards, dtype=float)
    t = np.arange(1, len(rewards) + 1)
    return RegretCurve(benchmark=float(benchmark),
                       cumulative=t * benchmark - np.cumsum(rewards))


def exploiter_regret(trace, mu_e2: float, c: float) -> RegretCurve:
    """Player 2's regret against the egalitarian value plus a margin c."""
    return regret_curve(trace.r2, mu_e2 + c)


def benchmark_for(game: BimatrixGame, opponent_class: str, config: MatchConfig,
                  opp_policy=None, w1: Optional[float] = None,
                  w2: Optional[float] = None) -> float:
    """Per-step benchmark for player 1's regret against an opponent class.

    'adversarial' -> own security value; 'follower_conditional' -> own
    egalitarian value; 'follower_unconditional' -> own bully value;
    'bounded_memory' -> optimal gain of the induced MDP (requires the
    opponent's Markov policy and signal weight).
    """
    ep = EnforceParams(config.K, config.eps)
    if opponent_class == "adversarial":
        v, _ = security_value(game, 1)
        return v
    if opponent_class == "follower_conditional":
        return enforceable_ebs(game, ep).u1
    if opponent_class == "follower_unconditional":
        return bully_solution(game, ep).u1
    if opponent_class == "bounded_memory":
        if opp_policy is None or w2 is None:
            raise ValueError("bounded_memory benchmark needs the opponent's "
                             "Markov policy and signal weight")
        if w1 is None:
            # the follower expert correlates on the own egalitarian weight
            w1 = LeaderKit.build(game, 1, ep).ebs_weight
        mdp = induce_mdp(game, opp_policy, w1=w1, w2=w2, K=config.K)
        gain, _ = optimal_average_reward(mdp)
        return gain
    raise KeyError(f"unknown opponent class '{opponent_class}'")


def pure_nash(m1: np.ndarray, m2: np.ndarray, tol: float = 1e-12):
    """Pure equilibria of a bimatrix learning game; ties count.

    Cell (i, j) qualifies when m1[i, j] tops column j and m2[i, j] tops
    row i.
    """
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    if m1.shape != m2.shape:
        raise ValueError("payoff matrices must share a shape")
    col_max = m1.max(axis=0)
    row_max = m2.max(axis=1)
    out = []
    for i in range(m1.shape[0]):
        for j in range(m1.shape[1]):
            if m1[i, j] >= col_max[j] - tol and m2[i, j] >= row_max[i] - tol:
                out.append((i, j))
    return out


@dataclass
class PopulationState:
    """A distribution over competing algorithms."""

    p: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        if np.any(self.p < -1e-9) or abs(self.p.sum() - 1.0) > 1e-9:
            raise ValueError("population shares must form a distribution")


def role_min_rewards(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """Row i = algorithm i's reward against each opponent, worst over seats."""
    return np.minimum(np.asarray(m1), np.asarray(m2).T)


def replicator_step(pop: PopulationState, bimatrices) -> PopulationState:
    """One generation of the discrete replicator update.

    Fitness of algorithm i is the population-weighted mean of its role-worst
    rewards, averaged over the supplied per-game bimatrices.  Shares update
    multiplicatively by (1 - mean fitness + fitness) and are renormalized to
    the simplex (the raw update does not preserve it exactly).
    """
    p = pop.p
    J = len(p)
    r = np.zeros((J, J))
    for (m1, m2) in bimatrices:
        r += role_min_rewards(m1, m2)
    r /= len(bimatrices)
    f = r @ p
    fbar = f.mean()
    new = p * ((1.0 - fbar) + f)
    total = new.sum()
    if total <= 0:
        raise RuntimeError("replicator update annihilated the population")
    return PopulationState(new / total)


@dataclass
class TournamentResult:
    """Per-pair, per-game, per-trial mean rewards from a round robin."""

    names: list
    games: list
    trials: int
    data: np.ndarray  # (nA, nA, nG, trials, 2)

    def means(self) -> tuple:
        """Learning-game bimatrix: rewards averaged over games and trials."""
        m = np.nanmean(self.data, axis=(2, 3))
        return m[:, :, 0], m[:, :, 1]

    def sample_bimatrices(self, rng) -> list:
        """Per game, the (J, J, 2) means of one trial drawn with replacement."""
        out = []
        for g in range(len(self.games)):
            k = int(rng.integers(self.trials))
            out.append((self.data[:, :, g, k, 0], self.data[:, :, g, k, 1]))
        return out


def _match_seed(base_seed: int, i: int, j: int, g: int, k: int) -> int:
    ss = np.random.SeedSequence((base_seed, i, j, g, k))
    return int(ss.generate_state(1)[0])


def _pair_job(args):
    game, name_i, name_j, config = args
    trace = play_match(game, name_i, name_j, config)
    return trace.mean_rewards()


def round_robin(algorithms, games, trials: int, config: MatchConfig,
                jobs: int = 1) -> TournamentResult:
    """All ordered algorithm pairings over all games and trials.

    For symmetric games only the ordered pairs with i <= j are played; the
    reversed cell is filled with the same numbers swapped.  Seeds derive
    deterministically from (config.seed, i, j, game, trial), so results do
    not depend on scheduling.
    """
    names = list(algorithms)
    games = list(games)
    nA, nG = len(names), len(games)
    data = np.full((nA, nA, nG, trials, 2), np.nan)

    job_args, job_keys = [], []
    for g, game in enumerate(games):
        sym = game.is_symmetric()
        for i in range(nA):
            for j in range(nA):
                if sym and j < i:
                    continue
                for k in range(trials):
                    cfg = config.with_seed(_match_seed(config.seed, i, j, g, k))
                    job_args.append((game, names[i], names[j], cfg))
                    job_keys.append((i, j, g, k))

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pair_job, job_args, chunksize=4))
    else:
        results = [_pair_job(a) for a in job_args]

    for (i, j, g, k), (m1, m2) in zip(job_keys, results):
        data[i, j, g, k] = (m1, m2)
        if games[g].is_symmetric() and i != j:
            data[j, i, g, k] = (m2, m1)
    return TournamentResult(names=names, games=[g.name for g in games],
                            trials=trials, data=data)


def replicator_run(result: TournamentResult, generations: int, runs: int,
                   seed: int = 0) -> np.ndarray:
    """Replicator trajectories over the tournament's empirical matrices.

    Returns shares of shape (runs, generations + 1, J); each generation
    samples one trial per game with replacement.
    """
    J = len(result.names)
    out = np.zeros((runs, generations + 1, J))
    for run in range(runs):
        rng = np.random.default_rng(np.random.SeedSequence((seed, run)))
        pop = PopulationState(np.full(J, 1.0 / J))
        out[run, 0] = pop.p
        for gen in range(1, generations + 1):
            pop = replicator_step(pop, result.sample_bimatrices(rng))
            out[run, gen] = pop.p
    return out
