"""Classical Russian roulette as an exact Markov chain over alive-subsets.

Players fire in index order.  A dead player never fires, and a player whose
opponents are all dead does not fire either (the lone-survivor rule, which
mirrors the identity branch of the quantum operators).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError
from .statevec import Outcome, check_players

AliveDistribution = dict[Outcome, float]


@dataclass(frozen=True)
class ClassicalConfig:
    n: int
    m: int
    bullet_probs: tuple[float, ...]

    def __post_init__(self) -> None:
        n = check_players(self.n)
        probs = tuple(float(p) for p in self.bullet_probs)
        if self.m < 1 or len(probs) != n * self.m:
            raise ConfigError(
                f"bullet_probs must have players*rounds = {n * self.m} entries, got {len(probs)}"
            )
        if not all(0.0 <= p <= 1.0 for p in probs):
            raise ConfigError("bullet probabilities must lie in [0, 1]")
        object.__setattr__(self, "bullet_probs", probs)


def all_alive_distribution(n: int) -> AliveDistribution:
    return {(1,) * n: 1.0}


def _fire(d: AliveDistribution, player: int, p: float) -> AliveDistribution:
    out: AliveDistribution = {}
    for state, w in d.items():
        if state[player] == 0 or sum(state) == 1:
            out[state] = out.get(state, 0.0) + w
            continue
        dead = state[:player] + (0,) + state[player + 1 :]
        if p > 0.0:
            out[dead] = out.get(dead, 0.0) + w * p
        if p < 1.0:
            out[state] = out.get(state, 0.0) + w * (1.0 - p)
    return out


def classical_round(d: AliveDistribution, round_probs: Sequence[float]) -> AliveDistribution:
    """One round: player ``i`` (if alive and not alone) dies with ``round_probs[i]``."""
    for player, p in enumerate(round_probs):
        d = _fire(d, player, float(p))
    return d


def classical_game(c: ClassicalConfig) -> AliveDistribution:
    d = all_alive_distribution(c.n)
    for k in range(c.m):
        d = classical_round(d, c.bullet_probs[k * c.n : (k + 1) * c.n])
    return d


def classical_all_alive_round_probability(n: int, p: float) -> float:
    """Probability that all ``n`` players survive one round with per-chamber probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"probability must lie in [0, 1], got {p}")
    return (1.0 - p) ** n


def total_probability(d: AliveDistribution) -> float:
    return math.fsum(d.values())
