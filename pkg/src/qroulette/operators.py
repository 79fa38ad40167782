"""Single-qubit gate ``U(gamma, alpha, beta)`` and the player operators ``O_i``.

``O_i`` acts as ``U`` on player ``i``'s qubit whenever at least one other
player is alive, and as the identity when every other player is dead.  The
structured path touches each amplitude once (O(2^n)); ``dense_player_op``
builds the full matrix from tensor products and exists only to check it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import UsageError
from .statevec import StateVector

MAX_DENSE_PLAYERS = 10

_KET = (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [0.0, 1.0]]))


@dataclass(frozen=True)
class GateParams:
    """Angles in radians; ``gamma = 0`` is a loaded chamber, ``gamma = pi`` an empty one."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0


def single_qubit_u(p: GateParams) -> np.ndarray:
    s, c = np.sin(p.gamma / 2), np.cos(p.gamma / 2)
    return np.array(
        [
            [np.exp(1j * p.alpha) * s, 1j * np.exp(1j * p.beta) * c],
            [1j * np.exp(-1j * p.beta) * c, np.exp(-1j * p.alpha) * s],
        ],
        dtype=np.complex128,
    )


def gate_coefficients(alpha, beta, gamma):
    """Entries ``(u00, u01, u10, u11)`` of ``U``; arguments broadcast elementwise."""
    ea = np.exp(1j * np.asarray(alpha, dtype=np.float64))
    eb = np.exp(1j * np.asarray(beta, dtype=np.float64))
    return gate_entries(ea, eb, gamma)


def gate_entries(ea, eb, gamma):
    """Gate entries from precomputed phases ``e^{i alpha}``, ``e^{i beta}``."""
    gamma = np.asarray(gamma, dtype=np.float64)
    s, c = np.sin(gamma / 2), np.cos(gamma / 2)
    return ea * s, 1j * eb * c, 1j * np.conj(eb) * c, np.conj(ea) * s


def apply_gate_batch(amps: np.ndarray, n: int, player: int, u00, u01, u10, u11) -> np.ndarray:
    """Apply ``O_player`` with gate entries ``u..`` to a batch of states.

    ``amps`` has shape ``(2**n, B)``: one column per state, so per-column gate
    entries of shape ``(B,)`` broadcast along the last axis.  Returns a new
    array; the input is not modified.
    """
    if not 1 <= player <= n:
        raise UsageError(f"player index must be in [1, {n}], got {player}")
    batch = amps.shape[1]
    t = amps.reshape(1 << (player - 1), 2, 1 << (n - player), batch)
    x0, x1 = t[:, 0], t[:, 1]
    out = np.empty_like(t)
    np.multiply(u00, x0, out=out[:, 0])
    out[:, 0] += u01 * x1
    np.multiply(u10, x0, out=out[:, 1])
    out[:, 1] += u11 * x1
    if n > 1:
        # every other player dead: identity branch
        out[0, :, 0] = t[0, :, 0]
    return out.reshape(1 << n, batch)


def apply_player_op_batch(amps: np.ndarray, n: int, player: int, alpha, beta, gamma) -> np.ndarray:
    """``apply_gate_batch`` with the gate given by angles (scalars or ``(B,)`` arrays)."""
    return apply_gate_batch(amps, n, player, *gate_coefficients(alpha, beta, gamma))


def apply_player_op(s: StateVector, player: int, p: GateParams) -> StateVector:
    out = apply_player_op_batch(s.amps[:, None], s.n, player, p.alpha, p.beta, p.gamma)
    return StateVector(s.n, out[:, 0])


def dense_player_op(n: int, player: int, p: GateParams) -> np.ndarray:
    """Explicit ``2^n x 2^n`` matrix of ``O_player`` built from tensor products.

    Sum of ``1 (x) |0..0><0..0|`` over the other players plus ``U (x) |b><b|``
    for every nonzero assignment ``b`` of the other players, with each factor
    placed at its player's tensor position.
    """
    if n > MAX_DENSE_PLAYERS:
        raise UsageError(f"dense operator limited to n <= {MAX_DENSE_PLAYERS}, got {n}")
    if not 1 <= player <= n:
        raise UsageError(f"player index must be in [1, {n}], got {player}")
    u = single_qubit_u(p)
    if n == 1:
        return u
    dim = 1 << n
    total = np.zeros((dim, dim), dtype=np.complex128)
    for others in itertools.product((0, 1), repeat=n - 1):
        own = np.eye(2) if not any(others) else u
        factors = [_KET[b] for b in others]
        factors.insert(player - 1, own)
        total += reduce(np.kron, factors)
    return total


def unitarity_defect(m: np.ndarray) -> float:
    """Max-norm of ``M^dagger M - I``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
