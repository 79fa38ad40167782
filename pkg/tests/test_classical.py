import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qroulette.classical import (
    ClassicalConfig,
    all_alive_distribution,
    classical_all_alive_round_probability,
    classical_game,
    classical_round,
    total_probability,
)
from qroulette.errors import ConfigError
from qroulette.game import GameConfig, bullet_probability, evolve
from qroulette.statevec import distribution

from oracles import brute_force_classical

probs = st.floats(0.0, 1.0, allow_nan=False)


def _close(a, b, tol):
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0.0) - b.get(k, 0.0)) <= tol for k in keys)


def test_full_barrel_two_players_stops_at_lone_survivor():
    d = classical_round(all_alive_distribution(2), [1.0, 1.0])
    assert d == {(0, 1): 1.0}


def test_empty_barrel_is_unchanged():
    assert classical_round(all_alive_distribution(4), [0.0] * 4) == {(1, 1, 1, 1): 1.0}


def test_half_loaded_three_players():
    d = classical_round(all_alive_distribution(3), [0.5] * 3)
    assert d[(1, 1, 1)] == pytest.approx(1 / 8, abs=1e-15)


def test_classical_game_examples():
    assert classical_game(ClassicalConfig(2, 1, (0.0, 1.0))) == {(1, 0): 1.0}
    assert classical_game(ClassicalConfig(3, 1, (0.0, 1.0, 1.0))) == {(1, 0, 0): 1.0}
    d = classical_game(ClassicalConfig(4, 1, (0.5,) * 4))
    assert d[(1, 1, 1, 1)] == pytest.approx(1 / 16, abs=1e-15)


def test_all_alive_round_probability():
    assert classical_all_alive_round_probability(3, 0.5) == 1 / 8
    assert classical_all_alive_round_probability(5, 0.5) == 1 / 32
    assert classical_all_alive_round_probability(7, 0.0) == 1.0
    with pytest.raises(ConfigError):
        classical_all_alive_round_probability(3, 1.2)


def test_config_validation():
    with pytest.raises(ConfigError):
        ClassicalConfig(3, 1, (0.5, 0.5))
    with pytest.raises(ConfigError):
        ClassicalConfig(2, 1, (0.5, -0.1))


@given(st.integers(2, 4), st.integers(1, 3), st.data())
def test_matches_brute_force_enumeration(n, m, data):
    p = data.draw(st.lists(probs, min_size=n * m, max_size=n * m))
    if n * m > 12:
        return
    d = classical_game(ClassicalConfig(n, m, tuple(p)))
    assert _close(d, brute_force_classical(n, p), 1e-12)
    assert total_probability(d) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(2, 5), st.integers(1, 4), st.data())
def test_death_is_monotone(n, m, data):
    p = data.draw(st.lists(probs, min_size=n * m, max_size=n * m))
    d = all_alive_distribution(n)
    alive = [1.0] * n
    for k in range(m):
        d = classical_round(d, p[k * n : (k + 1) * n])
        now = [math.fsum(w for s, w in d.items() if s[i]) for i in range(n)]
        assert all(b <= a + 1e-12 for a, b in zip(alive, now))
        alive = now


@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_single_round_matches_quantum(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.uniform(0, math.pi, n)
    alpha, beta = rng.uniform(0, 2 * math.pi, 2)
    quantum = distribution(evolve(GameConfig(n, 1, tuple(g), alpha, beta)))
    classical = classical_game(ClassicalConfig(n, 1, tuple(bullet_probability(x) for x in g)))
    assert _close(quantum, classical, 1e-10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_deterministic_single_round_agreement(n):
    for pattern in range(2**n):
        g = tuple(0.0 if (pattern >> i) & 1 else math.pi for i in range(n))
        quantum = distribution(evolve(GameConfig(n, 1, g, 0.3, 1.1)))
        (outcome,) = [o for o, w in quantum.items() if w > 0.5]
        assert quantum[outcome] == pytest.approx(1.0, abs=1e-12)
        classical = classical_game(ClassicalConfig(n, 1, tuple(bullet_probability(x) for x in g)))
        support = [o for o, w in classical.items() if w > 1e-12]
        assert support == [outcome]


def test_quantum_revival_has_no_classical_counterpart():
    # loaded chamber for player 1 in both rounds: classically player 1 stays dead
    g = (0.0, math.pi, math.pi) * 2
    classical = classical_game(ClassicalConfig(3, 2, tuple(bullet_probability(x) for x in g)))
    quantum = distribution(evolve(GameConfig(3, 2, g)))
    assert classical[(0, 1, 1)] == pytest.approx(1.0)
    assert quantum[(1, 1, 1)] == pytest.approx(1.0, abs=1e-12)
