import math

import numpy as np
import pytest

from laff import (MatchConfig, PopulationState, benchmark_for, builtin_game,
                  exploiter_regret, play_match, pure_nash, regret_curve,
                  replicator_run, replicator_step, round_robin)
from laff.evaluation import TournamentResult, role_min_rewards

# the published learning-game table (row player reward, column player reward)
ALGS = ["S++", "Manipulator", "M-Qubed", "Bully", "Q-Learning", "LAFF",
        "FTFT", "FP"]
M1 = np.array([
    [0.75, 0.73, 0.73, 0.65, 0.82, 0.71, 0.70, 0.72],
    [0.87, 0.76, 0.77, 0.65, 0.89, 0.70, 0.71, 0.76],
    [0.88, 0.68, 0.80, 0.65, 0.79, 0.76, 0.78, 0.62],
    [0.86, 0.83, 0.85, 0.48, 0.91, 0.61, 0.72, 0.76],
    [0.82, 0.73, 0.79, 0.68, 0.83, 0.71, 0.81, 0.64],
    [0.87, 0.71, 0.74, 0.55, 0.90, 0.77, 0.80, 0.75],
    [0.64, 0.49, 0.59, 0.60, 0.59, 0.61, 0.80, 0.46],
    [0.70, 0.66, 0.66, 0.63, 0.69, 0.61, 0.71, 0.68],
])
M2 = np.array([
    [0.76, 0.80, 0.81, 0.77, 0.76, 0.80, 0.68, 0.55],
    [0.68, 0.71, 0.65, 0.77, 0.67, 0.65, 0.60, 0.55],
    [0.68, 0.68, 0.74, 0.80, 0.75, 0.73, 0.65, 0.56],
    [0.61, 0.60, 0.61, 0.44, 0.63, 0.49, 0.55, 0.56],
    [0.77, 0.83, 0.67, 0.85, 0.74, 0.84, 0.67, 0.56],
    [0.65, 0.66, 0.72, 0.61, 0.66, 0.74, 0.70, 0.57],
    [0.70, 0.71, 0.76, 0.71, 0.78, 0.78, 0.75, 0.72],
    [0.73, 0.74, 0.55, 0.73, 0.57, 0.71, 0.60, 0.55],
])


def test_benchmark_dispatch():
    g = builtin_game("chicken")
    cfg = MatchConfig(T=1000)
    assert benchmark_for(g, "adversarial", cfg) == pytest.approx(0.25)
    assert benchmark_for(g, "follower_conditional", cfg) == pytest.approx(0.625)
    assert benchmark_for(g, "follower_unconditional", cfg) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        benchmark_for(g, "bounded_memory", cfg)
    with pytest.raises(KeyError):
        benchmark_for(g, "martian", cfg)


def test_regret_curve_shape():
    curve = regret_curve(np.array([0.5, 1.0, 0.0]), 0.625)
    assert np.allclose(curve.cumulative, [0.125, -0.25, 0.375])
    inc = np.diff(np.concatenate([[0.0], curve.cumulative]))
    assert ((inc >= 0.625 - 1.0 - 1e-12) & (inc <= 0.625 + 1e-12)).all()
    assert len(regret_curve(np.array([]), 0.5)) == 0


def test_exploiter_regret_bounded_for_compliant_partner():
    # a compliant opponent of the egalitarian leader keeps its regret under
    # the K'+1 + 3*sqrt(t log(T/d)/2) envelope
    g = builtin_game("chicken")
    T = 20000
    tr = play_match(g, "egal", "egal", MatchConfig(T=T, seed=0))
    curve = exploiter_regret(tr, 0.625, 0.0)
    ts = np.arange(1, T + 1)
    envelope = 0 + 1 + 3 * np.sqrt(ts * math.log(T / 0.05) / 2)
    assert (curve.cumulative <= envelope).all()


def test_pure_nash_on_published_table():
    cells = {(ALGS[i], ALGS[j]) for i, j in pure_nash(M1, M2)}
    assert cells == {("Bully", "Q-Learning"), ("Q-Learning", "Bully"),
                     ("LAFF", "LAFF")}


def test_pure_nash_degenerate():
    ones = np.full((2, 2), 0.3)
    assert len(pure_nash(ones, ones)) == 4
    assert pure_nash(np.array([[1.0]]), np.array([[0.0]])) == [(0, 0)]


def test_pure_nash_affine_invariance():
    rng = np.random.default_rng(0)
    a = rng.random((4, 4))
    b = rng.random((4, 4))
    base = pure_nash(a, b)
    assert pure_nash(2.5 * a + 0.3, b) == base
    assert pure_nash(a, 0.7 * b - 0.1) == base


def test_replicator_fixed_points():
    flat = [(np.full((3, 3), 0.5), np.full((3, 3), 0.5))]
    p = PopulationState(np.array([0.2, 0.3, 0.5]))
    after = replicator_step(p, flat)
    assert np.allclose(after.p, p.p, atol=1e-12)

    pure = PopulationState(np.array([0.0, 1.0, 0.0]))
    rng = np.random.default_rng(1)
    mats = [(rng.random((3, 3)), rng.random((3, 3)))]
    assert np.allclose(replicator_step(pure, mats).p, pure.p, atol=1e-12)


def test_replicator_preserves_simplex():
    rng = np.random.default_rng(2)
    p = PopulationState(np.full(4, 0.25))
    for _ in range(500):
        mats = [(rng.random((4, 4)), rng.random((4, 4))) for _ in range(3)]
        p = replicator_step(p, mats)
        assert abs(p.p.sum() - 1.0) < 1e-9
        assert (p.p >= -1e-12).all()


def test_replicator_growth_ordering_shift_invariant():
    # shifting every fitness by a constant must not change which algorithm
    # grows the fastest
    rng = np.random.default_rng(3)
    m1 = rng.random((3, 3))
    m2 = rng.random((3, 3))
    p = np.array([0.2, 0.5, 0.3])
    base = replicator_step(PopulationState(p), [(m1, m2)]).p / p
    shifted = replicator_step(PopulationState(p),
                              [(m1 + 0.2, m2 + 0.2)]).p / p
    assert np.argmax(base) == np.argmax(shifted)


def test_role_min_rewards():
    m1 = np.array([[0.9, 0.1], [0.5, 0.6]])
    m2 = np.array([[0.2, 0.4], [0.3, 0.7]])
    # row i of the result is min(m1[i, :], m2[:, i]')
    want = np.array([[0.2, 0.1], [0.4, 0.6]])
    assert np.allclose(role_min_rewards(m1, m2), want)


def test_round_robin_small():
    g = builtin_game("chicken")  # symmetric: reversed cells are copied
    cfg = MatchConfig(T=200, seed=0)
    res = round_robin(["fixed:0", "fixed:1"], [g], trials=1, config=cfg)
    assert res.data.shape == (2, 2, 1, 1, 2)
    assert not np.isnan(res.data).any()
    m1, m2 = res.means()
    assert m1[0, 1] == pytest.approx(g.R1[0, 1])
    assert m1[1, 0] == pytest.approx(m2[0, 1])  # symmetric copy convention
    # deterministic agents: another trial count gives the same means
    res2 = round_robin(["fixed:0", "fixed:1"], [g], trials=2, config=cfg)
    n1, _ = res2.means()
    assert np.allclose(m1, n1)


def test_round_robin_asymmetric_runs_both_orders():
    g = builtin_game("asym_biased")
    res = round_robin(["fixed:0", "fixed:1"], [g], trials=1,
                      config=MatchConfig(T=50, seed=0))
    m1, _ = res.means()
    assert m1[0, 1] == pytest.approx(g.R1[0, 1])
    assert m1[1, 0] == pytest.approx(g.R1[1, 0])


def test_replicator_run_trajectories():
    data = np.zeros((2, 2, 1, 1, 2))
    # algorithm 0 strictly dominates in both seats
    data[0, 0, 0, 0] = (0.9, 0.9)
    data[0, 1, 0, 0] = (0.9, 0.1)
    data[1, 0, 0, 0] = (0.1, 0.9)
    data[1, 1, 0, 0] = (0.1, 0.1)
    res = TournamentResult(names=["a", "b"], games=["g"], trials=1, data=data)
    shares = replicator_run(res, generations=200, runs=3, seed=0)
    assert shares.shape == (3, 201, 2)
    assert (shares[:, -1, 0] > 0.99).all()
