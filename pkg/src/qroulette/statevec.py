"""Dense n-qubit state vectors.

Qubit ``j`` belongs to player ``j + 1``.  Basis index ``b`` encodes the
outcome ``(i_1, ..., i_n)`` with player 1 as the most significant bit, so
``format(b, f"0{n}b")`` reads exactly like the ket ``|i_1 ... i_n>``.
A bit value of 1 means the player is alive, 0 means dead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConfigError, UsageError

MAX_PLAYERS = 22

Outcome = tuple[int, ...]


def check_players(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ConfigError(f"player count must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_PLAYERS:
        raise ConfigError(f"player count must be in [1, {MAX_PLAYERS}], got {n}")
    return n


def outcome_index(o: Iterable[int]) -> int:
    idx = 0
    for bit in o:
        if bit not in (0, 1):
            raise UsageError(f"outcome bits must be 0 or 1, got {bit!r}")
        idx = (idx << 1) | int(bit)
    return idx


def index_outcome(index: int, n: int) -> Outcome:
    return tuple((index >> (n - 1 - j)) & 1 for j in range(n))


def parse_outcome(text: str) -> Outcome:
    """``"101"`` -> ``(1, 0, 1)``."""
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"outcome must be a non-empty bitstring, got {text!r}")
    return tuple(int(ch) for ch in text)


def format_outcome(o: Outcome) -> str:
    return "".join(str(b) for b in o)


def all_outcomes(n: int) -> list[Outcome]:
    return [index_outcome(b, n) for b in range(1 << n)]


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        n = check_players(self.n)
        amps = np.array(self.amps, dtype=np.complex128)
        if amps.shape != (1 << n,):
            raise UsageError(f"expected {1 << n} amplitudes for n={n}, got shape {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, amps={self.amps!r})"


def basis_state(o: Iterable[int]) -> StateVector:
    o = tuple(o)
    n = check_players(len(o))
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[outcome_index(o)] = 1.0
    return StateVector(n, amps)


def all_alive(n: int) -> StateVector:
    """The opening state ``|1...1>``."""
    n = check_players(n)
    return basis_state((1,) * n)


def amplitude(s: StateVector, o: Iterable[int]) -> complex:
    o = tuple(o)
    if len(o) != s.n:
        raise UsageError(f"outcome has {len(o)} bits but the state has n={s.n}")
    return complex(s.amps[outcome_index(o)])


def probabilities(s: StateVector) -> np.ndarray:
    return np.abs(s.amps) ** 2


def distribution(s: StateVector) -> dict[Outcome, float]:
    """Outcome probabilities ``|<o|s>|^2`` for every basis outcome."""
    probs = probabilities(s)
    return {index_outcome(b, s.n): float(p) for b, p in enumerate(probs)}


def global_phase_equal(a: StateVector, b: StateVector, tol: float = 1e-12) -> bool:
    """True iff ``a`` equals ``c * b`` for some unit-modulus ``c``, within ``tol``.

    The phase is anchored on the largest-magnitude amplitude of ``a``.
    """
    if a.n != b.n:
        raise UsageError(f"cannot compare states with n={a.n} and n={b.n}")
    k = int(np.argmax(np.abs(a.amps)))
    ak, bk = a.amps[k], b.amps[k]
    if abs(bk) == 0.0:
        return bool(np.linalg.norm(a.amps - b.amps) <= tol)
    c = (ak / abs(ak)) / (bk / abs(bk)) if abs(ak) > 0 else 1.0
    return bool(np.linalg.norm(a.amps - c * b.amps) <= tol)
