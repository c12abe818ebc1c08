"""Average-reward MDPs induced by a Markov opponent over memory-K states.

Against an opponent whose action distribution depends only on the current
state (and whose signal weight is constant), the repeated game seen by
player 1 is an MDP.  This module enumerates the state space, builds the
transition/reward tensors, and solves for the optimal gain (relative value
iteration) or a given policy's gain (distribution iteration).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import HistoryState

_SPAN_TOL = 1e-8
_MAX_SWEEPS = 10 ** 6


def enumerate_states(game, K: int):
    """All memory-K states, in a fixed deterministic order."""
    acts1 = range(game.n1)
    acts2 = range(game.n2)
    bits = (0, 1)
    states = []
    for a1h in itertools.product(acts1, repeat=K):
        for a2h in itertools.product(acts2, repeat=K):
            for y1h in itertools.product(bits, repeat=K + 1):
                for y2h in itertools.product(bits, repeat=K + 1):
                    states.append(HistoryState(a1h, a2h, y1h, y2h))
    return states


def signal_outcome_probs(w1: float, w2: float):
    """Joint law of (y1, y2) under the shared uniform draw."""
    p11 = min(w1, w2)
    return {
        (1, 1): p11,
        (1, 0): w1 - p11,
        (0, 1): w2 - p11,
        (0, 0): 1.0 - max(w1, w2),
    }


@dataclass
class InducedMdp:
    """Player 1's decision process against a fixed Markov opponent."""

    states: list
    index: dict
    n_actions: int
    transition: np.ndarray   # (S, A, S)
    reward1: np.ndarray      # (S, A) expected player-1 reward
    reward2: np.ndarray      # (S, A) expected player-2 reward
    initial: np.ndarray      # (S,) distribution over starting states

    @property
    def n_states(self) -> int:
        return len(self.states)

    def reachable_from_initial(self) -> np.ndarray:
        """Indices reachable from the initial distribution under any policy."""
        frontier = list(np.nonzero(self.initial > 0)[0])
        seen = set(frontier)
        any_next = self.transition.sum(axis=1) > 0  # (S, S) reach under some a
        while frontier:
            s = frontier.pop()
            for s2 in np.nonzero(any_next[s])[0]:
                if s2 not in seen:
                    seen.add(s2)
                    frontier.append(int(s2))
        return np.array(sorted(seen), dtype=int)


def induce_mdp(game, opp_policy: Callable, w1: float, w2: float, K: int) -> InducedMdp:
    """Build the MDP for player 1 against ``opp_policy``.

    ``opp_policy(state) -> array of len n2`` gives the opponent's action
    distribution at each state.  Transitions shift the action histories and
    refresh the signal bits with the four joint outcomes implied by the
    shared draw.  Rewards are the expected stage rewards of the current
    joint action.
    """
    states = enumerate_states(game, K)
    index = {s: i for i, s in enumerate(states)}
    S = len(states)
    A = game.n1
    sig = [(bits, p) for bits, p in signal_outcome_probs(w1, w2).items() if p > 0]

    transition = np.zeros((S, A, S))
    reward1 = np.zeros((S, A))
    reward2 = np.zeros((S, A))
    for i, s in enumerate(states):
        pi2 = np.asarray(opp_policy(s), dtype=float)
        if pi2.shape != (game.n2,) or abs(pi2.sum() - 1.0) > 1e-9 or np.any(pi2 < -1e-12):
            raise ValueError(f"opponent policy is not a distribution at state {s}")
        for a in range(A):
            reward1[i, a] = float(game.R1[a] @ pi2)
            reward2[i, a] = float(game.R2[a] @ pi2)
            for b, pb in enumerate(pi2):
                if pb <= 0:
                    continue
                a1h = s.a1[1:] + (a,)
                a2h = s.a2[1:] + (b,)
                for (b1, b2), ps in sig:
                    nxt = HistoryState(a1h, a2h, s.y1[1:] + (b1,), s.y2[1:] + (b2,))
                    transition[i, a, index[nxt]] += pb * ps

    # engine start: action histories all zero, signal bits drawn independently
    probs = signal_outcome_probs(w1, w2)
    initial = np.zeros(S)
    zero1 = (0,) * K
    for y1h in itertools.product((0, 1), repeat=K + 1):
        for y2h in itertools.product((0, 1), repeat=K + 1):
            p = 1.0
            for b1, b2 in zip(y1h, y2h):
                p *= probs[(b1, b2)]
                if p == 0:
                    break
            if p > 0:
                initial[index[HistoryState(zero1, (0,) * K, y1h, y2h)]] += p

    return InducedMdp(states=states, index=index, n_actions=A,
                      transition=transition, reward1=reward1, reward2=reward2,
                      initial=initial)


def optimal_average_reward(mdp: InducedMdp, tol: float = _SPAN_TOL,
                           max_sweeps: int = _MAX_SWEEPS):
    """Optimal gain from the initial state and a gain-optimal policy.

    Relative value iteration on the class reachable from the initial
    distribution, with the standard self-loop transformation so periodic
    chains still converge.  If the reachable class is not communicating the
    span never contracts (different sub-chains support different gains);
    that case is detected and handed to the multichain linear program.
    Returns (gain, policy) where ``policy`` maps reachable state index ->
    action (argmax ties to the lowest index).
    """
    reach = mdp.reachable_from_initial()
    P = mdp.transition[np.ix_(reach, range(mdp.n_actions), reach)]
    r = mdp.reward1[reach]
    init = mdp.initial[reach]
    init = init / init.sum()
    n = len(reach)

    tau = 0.5  # aperiodicity transform: P~ = (1-tau) I + tau P, same gain
    h = np.zeros(n)
    last_span = np.inf
    for sweep in range(max_sweeps):
        q = r + tau * np.einsum("ijk,k->ij", P, h) + (1 - tau) * h[:, None]
        v = q.max(axis=1)
        diff = v - h
        span = diff.max() - diff.min()
        h = v - v[0]
        if span < tol:
            gain = 0.5 * (diff.max() + diff.min())
            policy = q.argmax(axis=1)
            return float(gain), {int(reach[i]): int(policy[i]) for i in range(n)}
        if sweep % 2000 == 1999:
            if span > last_span * (1 - 1e-3):
                break  # stalled: the class is not communicating
            last_span = span
    else:
        raise RuntimeError(f"relative value iteration did not reach span "
                           f"{tol} within {max_sweeps} sweeps")
    gain, policy = _multichain_lp(P, r, init)
    return gain, {int(reach[i]): int(policy[i]) for i in range(n)}


def _multichain_lp(P, r, init):
    """Multichain average-reward LP: per-state gains g and biases h.

    minimize init'g subject to g(s) >= sum p(s'|s,a) g(s') and
    g(s) + h(s) >= r(s,a) + sum p(s'|s,a) h(s') for all (s, a).
    """
    from scipy.optimize import linprog

    n, A, _ = P.shape
    # variables: g (n), h (n)
    c = np.concatenate([init, np.zeros(n)])
    rows = []
    rhs = []
    for a in range(A):
        # (P[:, a] - I) g <= 0
        block = np.hstack([P[:, a, :] - np.eye(n), np.zeros((n, n))])
        rows.append(block)
        rhs.append(np.zeros(n))
        # -g + (P[:, a] - I) h <= -r[:, a]
        block2 = np.hstack([-np.eye(n), P[:, a, :] - np.eye(n)])
        rows.append(block2)
        rhs.append(-r[:, a])
    res = linprog(c, A_ub=np.vstack(rows), b_ub=np.concatenate(rhs),
                  bounds=[(None, None)] * (2 * n), method="highs")
    if not res.success:
        raise RuntimeError(f"multichain gain LP failed: {res.message}")
    g = res.x[:n]
    h = res.x[n:]
    # greedy policy: improve the gain first, then the bias
    gain_q = np.einsum("iak,k->ia", P, g)
    bias_q = r + np.einsum("iak,k->ia", P, h)
    policy = np.zeros(n, dtype=int)
    for s in range(n):
        best = np.nonzero(gain_q[s] > gain_q[s].max() - 1e-10)[0]
        policy[s] = best[np.argmax(bias_q[s, best])]
    return float(init @ g), policy


def policy_average_reward(mdp: InducedMdp, policy, player: int = 1,
                          tol: float = 1e-12, max_sweeps: int = _MAX_SWEEPS) -> float:
    """Long-run average reward of a fixed (possibly mixed) Markov policy.

    ``policy`` is either a dict/array of actions or a callable
    ``state -> distribution over player-1 actions``.  The gain is taken from
    the match's initial distribution by iterating the state distribution on
    the self-loop-transformed chain.
    """
    S, A = mdp.n_states, mdp.n_actions

    def dist_at(i):
        s = mdp.states[i]
        if callable(policy):
            d = np.asarray(policy(s), dtype=float)
        elif isinstance(policy, dict):
            d = np.zeros(A)
            d[policy[i]] = 1.0
        else:
            d = np.zeros(A)
            d[int(policy[i])] = 1.0
        return d

    reward = mdp.reward1 if player == 1 else mdp.reward2
    P_pol = np.zeros((S, S))
    r_pol = np.zeros(S)
    for i in range(S):
        d = dist_at(i)
        P_pol[i] = d @ mdp.transition[i]
        r_pol[i] = d @ reward[i]

    tau = 0.5
    P_pol = (1 - tau) * np.eye(S) + tau * P_pol
    pi = mdp.initial.copy()
    for _ in range(max_sweeps):
        nxt = pi @ P_pol
        if np.abs(nxt - pi).sum() < tol:
            return float(nxt @ r_pol)
        pi = nxt
    raise RuntimeError("policy chain distribution did not converge")


def enumerate_deterministic_gains(mdp: InducedMdp) -> list:
    """Gain of every deterministic Markov policy on the reachable class.

    Exponential in the number of reachable states; intended for tiny
    verification MDPs only.
    """
    reach = mdp.reachable_from_initial()
    gains = []
    for choice in itertools.product(range(mdp.n_actions), repeat=len(reach)):
        policy = {int(s): a for s, a in zip(reach, choice)}

        def pol(state, _p=policy):
            d = np.zeros(mdp.n_actions)
            d[_p.get(mdp.index[state], 0)] = 1.0
            return d

        gains.append(policy_average_reward(mdp, pol))
    return gains
