"""Game configuration, round-by-round evolution, measurement and payoffs.

A round applies ``O_1`` first and ``O_n`` last.  Shot ``j`` (zero-based)
of the flat gamma schedule belongs to round ``j // n + 1`` and player
``j % n + 1``; in one-based terms round ``k``, player ``i`` uses
``gamma_{(k-1)n+i}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, UsageError
from .operators import apply_gate_batch, gate_entries
from .statevec import (
    Outcome,
    StateVector,
    all_outcomes,
    check_players,
    outcome_index,
    probabilities,
)

# Order in which players act inside a round.  "ascending" (O_1 first) is the
# reference order; "descending" is kept for diagnostics only.
PLAYER_ORDER = "ascending"


@dataclass(frozen=True)
class GameConfig:
    n: int
    m: int
    gammas: tuple[float, ...]
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        n = check_players(self.n)
        if n < 2:
            raise ConfigError(f"a game needs at least 2 players, got {n}")
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"round count must be a positive integer, got {self.m!r}")
        gammas = tuple(float(g) for g in self.gammas)
        expected = n * int(self.m)
        if len(gammas) != expected:
            raise ConfigError(
                f"gammas must have players*rounds = {n}*{int(self.m)} = {expected} entries, "
                f"got {len(gammas)}"
            )
        values = gammas + (float(self.alpha), float(self.beta))
        if not all(math.isfinite(v) for v in values):
            raise ConfigError("angles must be finite")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    def gamma(self, round_: int, player: int) -> float:
        """Angle used by ``player`` in ``round_`` (both one-based)."""
        return self.gammas[(round_ - 1) * self.n + (player - 1)]

    @classmethod
    def uniform(cls, n: int, m: int, gamma: float, alpha: float = 0.0, beta: float = 0.0):
        return cls(n, m, (gamma,) * (n * m), alpha, beta)

    @classmethod
    def from_bullet_probs(cls, n: int, m: int, probs: Sequence[float], alpha=0.0, beta=0.0):
        return cls(n, m, tuple(gamma_from_bullet_probability(p) for p in probs), alpha, beta)


def _player_sequence(n: int, order: str) -> list[int]:
    if order == "ascending":
        return list(range(1, n + 1))
    if order == "descending":
        return list(range(n, 0, -1))
    raise UsageError(f"unknown player order {order!r}")


def trace_batch(
    n: int,
    m: int,
    gammas: np.ndarray,
    alpha,
    beta,
    batch: int,
    order: str = PLAYER_ORDER,
) -> Iterator[np.ndarray]:
    """Yield the ``(2**n, batch)`` amplitude array after each of ``m`` rounds.

    ``gammas`` is either a flat schedule of length ``m*n`` shared by the
    whole batch, or an array of shape ``(batch, m*n)``.  ``alpha``/``beta``
    are scalars or length-``batch`` arrays.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    per_column = gammas.ndim == 2
    ea = np.exp(1j * np.asarray(alpha, dtype=np.float64))
    eb = np.exp(1j * np.asarray(beta, dtype=np.float64))
    amps = np.zeros((1 << n, batch), dtype=np.complex128)
    amps[-1] = 1.0
    players = _player_sequence(n, order)
    for k in range(m):
        for player in players:
            j = k * n + player - 1
            g = gammas[:, j] if per_column else gammas[j]
            amps = apply_gate_batch(amps, n, player, *gate_entries(ea, eb, g))
        yield amps


def evolve_trace(c: GameConfig, order: str = PLAYER_ORDER) -> list[StateVector]:
    """States ``|psi_1>, ..., |psi_m>`` with no intermediate measurement."""
    return [
        StateVector(c.n, amps[:, 0])
        for amps in trace_batch(c.n, c.m, np.array(c.gammas), c.alpha, c.beta, 1, order)
    ]


def evolve(c: GameConfig, order: str = PLAYER_ORDER) -> StateVector:
    return evolve_trace(c, order)[-1]


@dataclass(frozen=True)
class PayoffSpec:
    """Per-player payoff coefficients ``s[player][outcome]``; absent outcomes pay 0."""

    n: int
    s: tuple[dict[Outcome, float], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for table in self.s:
            for o in table:
                if len(o) != self.n:
                    raise ConfigError(f"payoff outcome {o} does not have {self.n} bits")

    def matrix(self) -> np.ndarray:
        """Coefficients as an array of shape ``(players, 2**n)``."""
        out = np.zeros((len(self.s), 1 << self.n))
        for p, table in enumerate(self.s):
            for o, v in table.items():
                out[p, outcome_index(o)] = v
        return out


def expected_payoffs(s: StateVector, p: PayoffSpec) -> list[float]:
    if s.n != p.n:
        raise UsageError(f"payoff table is for n={p.n} but the state has n={s.n}")
    probs = probabilities(s)
    return [math.fsum(row * probs) for row in p.matrix()]


def payoff_sole_survivor(n: int) -> PayoffSpec:
    """Each of the ``a >= 1`` survivors receives ``1/a``; the dead receive 0.

    For two players this is 1 to a lone survivor and 1/2 each if both live.
    """
    n = check_players(n)
    if n < 2:
        raise ConfigError("payoffs need at least 2 players")
    tables: list[dict[Outcome, float]] = [{} for _ in range(n)]
    for o in all_outcomes(n):
        alive = sum(o)
        if alive == 0:
            continue
        for j, bit in enumerate(o):
            if bit:
                tables[j][o] = 1.0 / alive
    return PayoffSpec(n, tuple(tables))


def payoff_zero_sum(n: int = 2) -> PayoffSpec:
    """+1 to a lone survivor, -1 to the other player; only defined for two players."""
    if n != 2:
        raise ConfigError(f"the zero-sum payoff is only defined for 2 players, got {n}")
    return PayoffSpec(2, ({(1, 0): 1.0, (0, 1): -1.0}, {(0, 1): 1.0, (1, 0): -1.0}))


def gamma_from_bullet_probability(p: float) -> float:
    """Angle with ``cos(gamma/2)**2 == p``."""
    if not (0.0 <= p <= 1.0):
        raise ConfigError(f"bullet probability must lie in [0, 1], got {p}")
    return 2.0 * math.acos(math.sqrt(p))


def bullet_probability(gamma: float) -> float:
    return math.cos(gamma / 2) ** 2


def schedule_smeared_bullet(n: int, m: int, reading: str = "game") -> list[float]:
    """Gamma schedule for a single bullet smeared over the rounds.

    ``reading="game"``: every shot of an ``m``-round game uses
    ``2*acos(1/sqrt(m))``, so each player fires with weight ``1/m`` per round.
    ``reading="round"``: shots in round ``k`` use ``2*acos(1/sqrt(k))``.
    """
    n = check_players(n)
    if n < 2 or m < 1:
        raise ConfigError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if reading == "game":
        return [2.0 * math.acos(1.0 / math.sqrt(m))] * (n * m)
    if reading == "round":
        return [2.0 * math.acos(1.0 / math.sqrt(k)) for k in range(1, m + 1) for _ in range(n)]
    raise ConfigError(f"unknown smeared-bullet reading {reading!r}")
