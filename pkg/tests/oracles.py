"""Independent reference computations used by the test-suite.

Nothing here calls the structured kernel: evolution goes through explicit
dense matrices, classical games through brute-force enumeration of bullet
placements, and gamma averages through an exact five-node rule.
"""

import itertools
import math

import numpy as np

from qroulette.operators import GateParams, dense_player_op


def dense_trace(n, gammas, alpha, beta):
    psi = np.zeros(2**n, dtype=complex)
    psi[-1] = 1.0
    states = []
    for k in range(len(gammas) // n):
        for i in range(1, n + 1):
            psi = dense_player_op(n, i, GateParams(alpha, beta, gammas[k * n + i - 1])) @ psi
        states.append(psi.copy())
    return states


def two_player_amplitudes(g1, g2, alpha, beta):
    """Nonzero amplitudes of the two-player one-round state on |01>, |10>, |11>."""
    s1, c1, s2, c2 = math.sin(g1 / 2), math.cos(g1 / 2), math.sin(g2 / 2), math.cos(g2 / 2)
    return {
        (0, 1): 1j * np.exp(1j * beta) * c1,
        (1, 0): 1j * np.exp(-1j * (alpha - beta)) * s1 * c2,
        (1, 1): np.exp(-2j * alpha) * s1 * s2,
    }


def three_player_amplitudes(g1, g2, g3, alpha, beta):
    """The seven amplitudes of the three-player one-round state."""
    s1, s2, s3 = (math.sin(g / 2) for g in (g1, g2, g3))
    c1, c2, c3 = (math.cos(g / 2) for g in (g1, g2, g3))
    e = lambda a, b: np.exp(1j * (a * alpha + b * beta))  # noqa: E731
    return {
        (0, 0, 0): 0.0,
        (0, 0, 1): -e(0, 2) * c1 * c2,
        (0, 1, 0): -e(-1, 2) * c1 * s2 * c3,
        (0, 1, 1): 1j * e(-2, 1) * c1 * s2 * s3,
        (1, 0, 0): -e(-1, 2) * s1 * c2 * c3,
        (1, 0, 1): 1j * e(-2, 1) * s1 * c2 * s3,
        (1, 1, 0): 1j * e(-2, 1) * s1 * s2 * c3,
        (1, 1, 1): e(-3, 0) * s1 * s2 * s3,
    }


def a111_closed_form(alpha):
    """Amplitude of |111> after two rounds at gamma = pi/2 for three players."""
    z = np.exp(-1j * alpha)
    return z / (2 * math.sqrt(2)) + (z**2 - 3 * z**4 + z**6) / 8


def brute_force_classical(n, probs):
    """Alive-subset distribution by enumerating every loaded/empty pattern.

    ``probs`` is the flat per-shot schedule.  A shot is skipped when the
    shooter is dead or is the only one alive.
    """
    shots = len(probs)
    dist = {}
    for pattern in itertools.product((0, 1), repeat=shots):
        weight = 1.0
        for loaded, p in zip(pattern, probs):
            weight *= p if loaded else 1.0 - p
        if weight == 0.0:
            continue
        alive = [1] * n
        for j, loaded in enumerate(pattern):
            i = j % n
            if alive[i] and sum(alive) > 1 and loaded:
                alive[i] = 0
        key = tuple(alive)
        dist[key] = dist.get(key, 0.0) + weight
    return dist


# Exact average over gamma in [0, pi] for any combination of
# {1, cos g, sin g, sin g/2, cos g/2}: every amplitude is affine in
# (sin g/2, cos g/2) for each shot, so |amplitude|^2 lies in that span.
GAMMA_NODES = np.linspace(0.0, math.pi, 5)


def _gamma_weights():
    g = GAMMA_NODES
    basis = np.array([np.ones_like(g), np.cos(g), np.sin(g), np.sin(g / 2), np.cos(g / 2)])
    moments = np.array([1.0, 0.0, 2 / math.pi, 2 / math.pi, 2 / math.pi])
    return np.linalg.solve(basis, moments)


GAMMA_WEIGHTS = _gamma_weights()
