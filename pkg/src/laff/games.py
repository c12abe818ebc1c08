"""Bimatrix games, zero-sum solution kernels, and the built-in game library.

Rewards are always normalized to [0, 1].  Player 1 is the row player and
player 2 the column player; all indices are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

_TOL = 1e-9


@dataclass(frozen=True)
class MixedStrategy:
    """A probability distribution over one player's actions."""

    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < -_TOL):
            raise ValueError(f"negative probability in {self.probs}")
        if abs(p.sum() - 1.0) > _TOL:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @property
    def support(self) -> tuple:
        return tuple(i for i, p in enumerate(self.probs) if p > _TOL)


@dataclass
class BimatrixGame:
    """Two reward matrices in [0, 1] over the same joint action space."""

    name: str
    R1: np.ndarray
    R2: np.ndarray

    def __post_init__(self):
        self.R1 = np.asarray(self.R1, dtype=float)
        self.R2 = np.asarray(self.R2, dtype=float)
        if self.R1.ndim != 2 or self.R1.shape != self.R2.shape:
            raise ValueError("R1 and R2 must be 2-d matrices of equal shape")
        if self.R1.shape[0] < 1 or self.R1.shape[1] < 1:
            raise ValueError("need at least one action per player")
        for m in (self.R1, self.R2):
            if np.any(m < -_TOL) or np.any(m > 1 + _TOL):
                raise ValueError(f"rewards of game '{self.name}' must lie in [0, 1]")

    @property
    def n1(self) -> int:
        return self.R1.shape[0]

    @property
    def n2(self) -> int:
        return self.R1.shape[1]

    def reward(self, player: int, a1: int, a2: int) -> float:
        m = self.R1 if player == 1 else self.R2
        return float(m[a1, a2])

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """True when swapping players and actions leaves the game unchanged."""
        return self.R1.shape[0] == self.R1.shape[1] and np.allclose(
            self.R2, self.R1.T, atol=tol
        )


def swap_players(game: BimatrixGame) -> BimatrixGame:
    """The same game seen from player 2's chair (it becomes the row player)."""
    return BimatrixGame(name=game.name + "~swapped", R1=game.R2.T, R2=game.R1.T)


def _maximin(M: np.ndarray):
    """max over row mixtures p of min_j (p'M)_j, with the optimal p.

    Pure optima are preferred (lowest index) so results are deterministic;
    1xN / Nx1 matrices are handled by direct enumeration.
    """
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    if m == 1:
        return float(M[0].min()), np.array([1.0])
    if n == 1:
        i = int(np.argmax(M[:, 0]))
        p = np.zeros(m)
        p[i] = 1.0
        return float(M[i, 0]), p

    # variables (p_1..p_m, v); maximize v s.t. p'M >= v, p on the simplex
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-M.T, np.ones((n, 1))])
    b_ub = np.zeros(n)
    A_eq = np.zeros((1, m + 1))
    A_eq[0, :m] = 1.0
    b_eq = np.array([1.0])
    bounds = [(0.0, 1.0)] * m + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if not res.success:
        raise RuntimeError(f"maximin LP failed: {res.message}")
    value = float(res.x[-1])

    pure_vals = M.min(axis=1)
    best_pure = int(np.argmax(pure_vals))
    if pure_vals[best_pure] >= value - _TOL:
        p = np.zeros(m)
        p[best_pure] = 1.0
        return float(pure_vals[best_pure]), p

    p = np.clip(res.x[:m], 0.0, None)
    p /= p.sum()
    return value, p


def security_value(game: BimatrixGame, player: int):
    """Maximin value and strategy of a player's own reward matrix.

    Returns (value, MixedStrategy).  The value is what the player can
    guarantee regardless of the opponent.
    """
    if player == 1:
        v, p = _maximin(game.R1)
    elif player == 2:
        v, p = _maximin(game.R2.T)
    else:
        raise ValueError("player must be 1 or 2")
    return v, MixedStrategy(tuple(p))


def punishment_strategy(game: BimatrixGame):
    """Player 1's strategy minimizing player 2's best-response reward.

    By LP duality the value equals player 2's security value.
    Returns (value, MixedStrategy).
    """
    v, p = _maximin(-game.R2)
    return -v, MixedStrategy(tuple(p))


def expected_reward(game: BimatrixGame, s1: MixedStrategy, s2: MixedStrategy,
                    player: int) -> float:
    """s1' R^(player) s2 for mixed strategies s1, s2."""
    p = s1.as_array()
    q = s2.as_array()
    if p.shape[0] != game.n1 or q.shape[0] != game.n2:
        raise ValueError("strategy length does not match action count")
    m = game.R1 if player == 1 else game.R2
    return float(p @ m @ q)


def _F(a, b):
    return float(Fraction(a, b))


def _cells(rows):
    """Build (R1, R2) from a row-major list of (r1, r2) cells."""
    r1 = [[c[0] for c in row] for row in rows]
    r2 = [[c[1] for c in row] for row in rows]
    return np.array(r1, dtype=float), np.array(r2, dtype=float)


# 11 evaluation games (two per reward family, Cyclic has no symmetric member),
# 4 training games used only for tuning demos, and Chicken.
_LIBRARY_CELLS = {
    "chicken": [[(0.5, 0.5), (0.25, 1.0)],
                [(1.0, 0.25), (0.0, 0.0)]],
    "sym_winwin": [[(1.0, 1.0), (0.0, _F(2, 3))],
                   [(_F(2, 3), 0.0), (_F(1, 3), _F(1, 3))]],
    "asym_winwin": [[(1.0, 1.0), (0.0, _F(5, 6))],
                    [(_F(1, 3), 0.0), (_F(2, 3), _F(2, 3))]],
    "sym_biased": [[(_F(1, 3), _F(1, 3)), (_F(2, 3), 1.0)],
                   [(1.0, _F(2, 3)), (0.0, 0.0)]],
    "asym_biased": [[(_F(2, 3), 0.0), (0.0, 1.0)],
                    [(1.0, _F(2, 3)), (_F(1, 3), _F(1, 3))]],
    "sym_secondbest": [[(_F(1, 3), _F(1, 3)), (0.0, 1.0)],
                       [(1.0, 0.0), (_F(2, 3), _F(2, 3))]],
    "asym_secondbest": [[(1.0, _F(1, 3)), (_F(1, 3), 1.0)],
                        [(0.0, 0.0), (_F(2, 3), _F(2, 3))]],
    "sym_unfair": [[(0.5, 0.5), (0.25, 1.0)],
                   [(1.0, 0.25), (0.0, 0.0)]],
    "asym_unfair": [[(0.0, 1.0), (0.75, 0.75)],
                    [(1.0, 0.25), (0.25, 0.0)]],
    "sym_inferior": [[(0.8, 0.8), (0.0, 1.0)],
                     [(1.0, 0.0), (0.2, 0.2)]],
    "asym_inferior": [[(1.0, 0.75), (0.0, 1.0)],
                      [(0.75, 0.0), (0.25, 0.25)]],
    "cyclic": [[(0.0, 1.0), (0.75, 0.75)],
               [(1.0, 0.0), (0.25, 0.25)]],
    "train_inferior": [[(0.75, 0.75), (0.0, 1.0)],
                       [(1.0, 0.0), (0.25, 0.25)]],
    "train_unfair": [[(0.625, 0.625), (0.375, 1.0)],
                     [(1.0, 0.375), (0.0, 0.0)]],
    "train_coord": [[(1.0, 0.5), (0.0, 0.0)],
                    [(0.0, 0.0), (0.2, 1.0)]],
    "train_mixed": [[(0.0, 1.0), (1.0, _F(2, 3))],
                    [(_F(1, 3), 0.0), (_F(2, 3), _F(1, 3))]],
}

#: The 11 games used in tournament-style experiments (training set excluded).
EVALUATION_GAMES = (
    "sym_winwin", "asym_winwin", "sym_biased", "asym_biased",
    "sym_secondbest", "asym_secondbest", "sym_unfair", "asym_unfair",
    "sym_inferior", "asym_inferior", "cyclic",
)

TRAINING_GAMES = ("train_inferior", "train_unfair", "train_coord", "train_mixed")

GAME_NAMES = tuple(_LIBRARY_CELLS)


def builtin_game(name: str) -> BimatrixGame:
    try:
        rows = _LIBRARY_CELLS[name]
    except KeyError:
        raise KeyError(
            f"unknown game '{name}'; built-ins: {', '.join(GAME_NAMES)}"
        ) from None
    r1, r2 = _cells(rows)
    return BimatrixGame(name=name, R1=r1, R2=r2)


def game_from_json(path) -> BimatrixGame:
    """Load {name, R1: [[..]], R2: [[..]]} from a JSON file."""
    data = json.loads(Path(path).read_text())
    return BimatrixGame(name=data.get("name", Path(path).stem),
                        R1=np.array(data["R1"], dtype=float),
                        R2=np.array(data["R2"], dtype=float))


def load_game(name_or_path: str) -> BimatrixGame:
    """Resolve a built-in game name, else read the argument as a JSON file."""
    if name_or_path in _LIBRARY_CELLS:
        return builtin_game(name_or_path)
    p = Path(name_or_path)
    if p.exists():
        return game_from_json(p)
    raise KeyError(f"'{name_or_path}' is neither a built-in game nor a file")
