import numpy as np
import pytest

from laff import (EnforceParams, LeaderKit, builtin_game,
                  induce_mdp, optimal_average_reward, policy_average_reward,
                  security_value)
from laff.engine import HistoryState
from laff.experts import LeaderCore, compliant_policy
from laff.mdp import InducedMdp, enumerate_deterministic_gains, enumerate_states


def _point(n, a):
    d = np.zeros(n)
    d[a] = 1.0
    return d


def test_state_enumeration_count():
    g = builtin_game("chicken")
    states = enumerate_states(g, 1)
    assert len(states) == 64
    assert len(set(states)) == 64


def test_transition_rows_sum_to_one():
    g = builtin_game("chicken")
    mdp = induce_mdp(g, lambda s: np.array([0.3, 0.7]), w1=0.4, w2=0.8, K=1)
    assert np.allclose(mdp.transition.sum(axis=2), 1.0, atol=1e-9)
    assert mdp.initial.sum() == pytest.approx(1.0)


def test_deterministic_opponent_successor_count():
    g = builtin_game("chicken")
    mdp = induce_mdp(g, lambda s: _point(2, 1), w1=0.5, w2=0.5, K=1)
    fanout = (mdp.transition > 0).sum(axis=2)
    assert fanout.max() <= 4


def test_optimal_gain_fixed_opponent():
    g = builtin_game("chicken")
    mdp = induce_mdp(g, lambda s: _point(2, 1), w1=0.0, w2=0.0, K=1)
    gain, policy = optimal_average_reward(mdp)
    assert gain == pytest.approx(0.25, abs=1e-7)


def test_optimal_gain_mixing_opponent():
    g = builtin_game("chicken")
    mdp = induce_mdp(g, lambda s: np.array([0.5, 0.5]), w1=0.0, w2=0.0, K=1)
    gain, _ = optimal_average_reward(mdp)
    assert gain == pytest.approx(0.5, abs=1e-7)


def test_single_state_mdp():
    states = [HistoryState((0,), (0,), (0, 0), (0, 0))]
    mdp = InducedMdp(states=states, index={states[0]: 0}, n_actions=2,
                     transition=np.ones((1, 2, 1)),
                     reward1=np.array([[0.3, 0.9]]),
                     reward2=np.array([[0.1, 0.2]]),
                     initial=np.array([1.0]))
    gain, policy = optimal_average_reward(mdp)
    assert gain == pytest.approx(0.9)
    assert policy[0] == 1


def test_policy_gain_period_two_cycle():
    s0 = HistoryState((0,), (0,), (0,), (0,))
    s1 = HistoryState((1,), (1,), (0,), (0,))
    trans = np.zeros((2, 1, 2))
    trans[0, 0, 1] = 1.0
    trans[1, 0, 0] = 1.0
    mdp = InducedMdp(states=[s0, s1], index={s0: 0, s1: 1}, n_actions=1,
                     transition=trans,
                     reward1=np.array([[0.0], [1.0]]),
                     reward2=np.array([[0.0], [1.0]]),
                     initial=np.array([1.0, 0.0]))
    assert policy_average_reward(mdp, [0, 0]) == pytest.approx(0.5, abs=1e-9)


def test_constant_reward_game():
    g = builtin_game("chicken")
    flat = induce_mdp(g, lambda s: np.array([1.0, 0.0]), w1=0.0, w2=0.0, K=1)
    flat.reward1[:] = 0.4
    assert policy_average_reward(flat, lambda s: np.array([0.6, 0.4])) \
        == pytest.approx(0.4)


def test_leader_vs_compliant_gains():
    # enforcing the even split in Chicken pays 0.625 to both players
    g = builtin_game("chicken")
    kit = LeaderKit.build(g, 1, EnforceParams(1, 0.05))
    core = LeaderCore(kit, "ebs", np.random.default_rng(0))
    w = kit.ebs_weight
    mdp = induce_mdp(g, compliant_policy(kit, "ebs"), w1=w, w2=w, K=1)
    g1 = policy_average_reward(mdp, core.policy_distribution, player=1)
    g2 = policy_average_reward(mdp, core.policy_distribution, player=2)
    assert g1 == pytest.approx(0.625, abs=1e-9)
    assert g2 == pytest.approx(0.625, abs=1e-9)


def test_optimality_dominates_fixed_policies():
    g = builtin_game("sym_biased")
    mdp = induce_mdp(g, lambda s: _point(2, s.a1[-1]), w1=0.0, w2=0.0, K=1)
    gain, _ = optimal_average_reward(mdp)
    for a in (0, 1):
        assert gain >= policy_average_reward(mdp, lambda s, _a=a: _point(2, _a)) - 1e-8
    muS1, _ = security_value(g, 1)
    assert gain >= muS1 - 1e-6


def test_gain_matches_policy_enumeration():
    g = builtin_game("chicken")
    mdp = induce_mdp(g, lambda s: _point(2, s.a1[-1]), w1=0.0, w2=0.0, K=1)
    gain, _ = optimal_average_reward(mdp)
    assert gain == pytest.approx(max(enumerate_deterministic_gains(mdp)), abs=1e-6)


def test_optimal_gain_at_least_security_vs_leaders():
    # the maximin strategy is always available, so no opponent can push the
    # optimal gain below the security value
    from laff import MatchConfig
    from laff.opponents import bounded_memory_policy

    cfg = MatchConfig(T=1000)
    for name in ("chicken", "asym_unfair", "cyclic"):
        g = builtin_game(name)
        muS1, _ = security_value(g, 1)
        kit = LeaderKit.build(g, 1, EnforceParams(cfg.K, cfg.eps))
        for opp in ("bully", "ftft", "egal", "maximin"):
            pol, w2 = bounded_memory_policy(opp, g, 2, cfg)
            mdp = induce_mdp(g, pol, w1=kit.ebs_weight, w2=w2, K=1)
            gain, _ = optimal_average_reward(mdp)
            assert gain >= muS1 - 1e-6, (name, opp)
