"""Averages of outcome probabilities over uniformly distributed gate parameters.

Two estimators:

* ``FourierGrid`` averages over ``alpha, beta`` on equispaced nodes.  Every
  amplitude after ``m`` rounds is a trigonometric polynomial of degree at most
  ``m*n`` in each phase, so ``|amplitude|^2`` has degree at most ``2*m*n`` and
  ``N > 2*m*n`` nodes per phase integrate it exactly.
* ``MonteCarlo`` draws parameters from a counter-based stream (Philox4x64
  keyed by the seed).  Sample ``j`` consumes a fixed block of the stream, so
  its draw depends only on ``(seed, j)``.  Per-sample values are stored by
  index and reduced with ``math.fsum`` (correctly rounded, hence independent
  of summation order), which makes results bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from numpy.random import Generator, Philox

from .errors import ConfigError, UsageError
from .game import GameConfig, schedule_smeared_bullet, trace_batch
from .statevec import Outcome, outcome_index

DEFAULT_SEED = 20130715
DEFAULT_SAMPLES = 1_000_000
THREADS_ENV = "QROULETTE_THREADS"

_MAX_BATCH_AMPS = 1 << 20
_MC_CHUNK = 1 << 14


@dataclass(frozen=True)
class MonteCarlo:
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class FourierGrid:
    nodes_alpha: int
    nodes_beta: int

    def __post_init__(self) -> None:
        if self.nodes_alpha < 1 or self.nodes_beta < 1:
            raise ConfigError("node counts must be >= 1")

    @classmethod
    def exact_for(cls, n: int, m: int) -> "FourierGrid":
        k = 2 * m * n + 1
        return cls(k, k)


Method = Union[MonteCarlo, FourierGrid]


@dataclass(frozen=True)
class AveragingSpec:
    """Which parameters are drawn uniformly and how the average is computed.

    ``alpha, beta`` range over ``[0, 2*pi)`` and each gamma over ``[0, pi]``.
    Parameters that are not randomized keep the values of the game template.
    """

    randomize_alpha_beta: bool = True
    randomize_gammas: bool = False
    method: Method = MonteCarlo()

    def __post_init__(self) -> None:
        if isinstance(self.method, FourierGrid) and self.randomize_gammas:
            raise ConfigError("the Fourier grid only averages alpha and beta; use Monte Carlo for gammas")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_err: float
    samples_or_nodes: int


@dataclass(frozen=True)
class ParameterDraw:
    alpha: float
    beta: float
    gammas: tuple[float, ...]


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ConfigError(f"worker count must be >= 0, got {workers}")
    return workers or (os.cpu_count() or 1)


def _blocks_per_sample(dims: int) -> int:
    return -(-dims // 4)


def uniform_block(seed: int, start: int, count: int, dims: int) -> np.ndarray:
    """Uniforms in ``[0, 1)`` for samples ``start .. start+count-1``, shape ``(count, dims)``."""
    per = _blocks_per_sample(dims)
    bitgen = Philox(key=seed)
    if start:
        bitgen.advance(start * per)
    return Generator(bitgen).random((count, 4 * per))[:, :dims]


def seeded_stream(seed: int, index: int, n: int, m: int) -> ParameterDraw:
    """The parameter draw of sample ``index``; a function of ``(seed, index)`` only."""
    u = uniform_block(seed, index, 1, 2 + n * m)[0]
    return ParameterDraw(
        alpha=float(2 * np.pi * u[0]),
        beta=float(2 * np.pi * u[1]),
        gammas=tuple(float(g) for g in np.pi * u[2:]),
    )


def _chunks(total: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size, total)) for a in range(0, total, size)]


def _run_chunks(fn: Callable[[int, int], None], chunks: Sequence[tuple[int, int]], workers: int) -> None:
    if workers <= 1 or len(chunks) <= 1:
        for a, b in chunks:
            fn(a, b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for _ in pool.map(lambda ab: fn(*ab), chunks):
            pass


def _batch_limit(n: int) -> int:
    return max(1, _MAX_BATCH_AMPS >> n)


def _outcome_indices(n: int, outcomes: Iterable[Outcome]) -> list[int]:
    idx = []
    for o in outcomes:
        if len(o) != n:
            raise UsageError(f"outcome {o} does not have {n} bits")
        idx.append(outcome_index(o))
    return idx


def _fsum_mean(values: np.ndarray) -> float:
    return math.fsum(values) / len(values)


def _std_err(values: np.ndarray, mean: float) -> float:
    count = len(values)
    if count < 2:
        return math.inf
    return math.sqrt(math.fsum((values - mean) ** 2) / (count - 1) / count)


def _grid_probabilities(
    c: GameConfig,
    grid: FourierGrid | None,
    indices: list[int],
    every_round: bool,
    workers: int,
) -> np.ndarray:
    """Probabilities at every node, shape ``(rounds, outcomes, nodes)``.

    ``grid=None`` evaluates the single point ``(c.alpha, c.beta)``.
    """
    if grid is None:
        alphas, betas = np.array([c.alpha]), np.array([c.beta])
    else:
        a = 2 * np.pi * np.arange(grid.nodes_alpha) / grid.nodes_alpha
        b = 2 * np.pi * np.arange(grid.nodes_beta) / grid.nodes_beta
        alphas, betas = np.repeat(a, len(b)), np.tile(b, len(a))
    rounds = c.m if every_round else 1
    out = np.empty((rounds, len(indices), len(alphas)))
    gammas = np.array(c.gammas)

    def work(lo: int, hi: int) -> None:
        states = trace_batch(c.n, c.m, gammas, alphas[lo:hi], betas[lo:hi], hi - lo)
        for k, amps in enumerate(states):
            if every_round or k == c.m - 1:
                r = k if every_round else 0
                out[r, :, lo:hi] = np.abs(amps[indices]) ** 2

    _run_chunks(work, _chunks(len(alphas), _batch_limit(c.n)), workers)
    return out


def _monte_carlo_probabilities(
    c: GameConfig, spec: AveragingSpec, mc: MonteCarlo, indices: list[int], workers: int
) -> np.ndarray:
    """Final-round probabilities per sample, shape ``(outcomes, samples)``."""
    dims = 2 + c.n * c.m
    out = np.empty((len(indices), mc.samples))
    fixed_gammas = np.array(c.gammas)

    def work(lo: int, hi: int) -> None:
        u = uniform_block(mc.seed, lo, hi - lo, dims)
        if spec.randomize_alpha_beta:
            alpha, beta = 2 * np.pi * u[:, 0], 2 * np.pi * u[:, 1]
        else:
            alpha, beta = c.alpha, c.beta
        gammas = np.pi * u[:, 2:] if spec.randomize_gammas else fixed_gammas
        for amps in trace_batch(c.n, c.m, gammas, alpha, beta, hi - lo):
            pass
        out[:, lo:hi] = np.abs(amps[indices]) ** 2

    chunk = min(_MC_CHUNK, _batch_limit(c.n))
    _run_chunks(work, _chunks(mc.samples, chunk), workers)
    return out


def expected_outcome_probabilities(
    c: GameConfig,
    spec: AveragingSpec,
    outcomes: Sequence[Outcome],
    workers: int | None = None,
) -> dict[Outcome, Estimate]:
    """Averaged ``|<o|psi_m>|^2`` for several outcomes from one set of evaluations."""
    indices = _outcome_indices(c.n, outcomes)
    workers = worker_count(workers)
    method = spec.method
    if isinstance(method, FourierGrid):
        grid = method if spec.randomize_alpha_beta else None
        values = _grid_probabilities(c, grid, indices, False, workers)[0]
        count = method.nodes_alpha * method.nodes_beta if grid else 1
        return {o: Estimate(_fsum_mean(v), 0.0, count) for o, v in zip(outcomes, values)}
    if isinstance(method, MonteCarlo):
        values = _monte_carlo_probabilities(c, spec, method, indices, workers)
        result = {}
        for o, v in zip(outcomes, values):
            mean = _fsum_mean(v)
            result[o] = Estimate(mean, _std_err(v, mean), method.samples)
        return result
    raise ConfigError(f"unknown averaging method {method!r}")


def expected_outcome_probability(
    c: GameConfig, spec: AveragingSpec, o: Outcome, workers: int | None = None
) -> Estimate:
    o = tuple(o)
    return expected_outcome_probabilities(c, spec, [o], workers)[o]


# Closed forms reported for the all-alive probability after two rounds when
# alpha, beta and every gamma are uniform.
TABLE1_QUANTUM = {
    3: 1 / 8 + 1 / 64 + 7 / (2 * math.pi**4),
    4: 1 / 16 + 1 / 256 + 6 / math.pi**8 + 23 / (8 * math.pi**4),
    5: 1 / 32 + 1 / 1024 + 15 / math.pi**8 + 77 / (32 * math.pi**4),
}


def table1_quantum(
    n: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
) -> Estimate:
    """Monte Carlo ``E[|<1..1|psi_2>|^2]`` with all parameters uniform."""
    if n not in TABLE1_QUANTUM:
        raise ConfigError(f"table 1 covers 3, 4 or 5 players, got {n}")
    template = GameConfig.uniform(n, 2, 0.0)
    spec = AveragingSpec(True, True, MonteCarlo(samples, seed))
    return expected_outcome_probability(template, spec, (1,) * n, workers)


@dataclass(frozen=True)
class FixedGamma:
    gamma: float = math.pi / 2


@dataclass(frozen=True)
class SmearedBullet:
    reading: str = "game"


GammaPolicy = Union[FixedGamma, SmearedBullet]


def figure_series(
    n: int,
    rounds: int,
    outcomes: Sequence[Outcome],
    gamma_policy: GammaPolicy = FixedGamma(),
    workers: int | None = None,
) -> list[dict[Outcome, Estimate]]:
    """Per-round (alpha, beta)-averaged probabilities, exact on the Fourier grid.

    Entry ``k - 1`` holds the averages after ``k`` rounds.  Under
    ``SmearedBullet("game")`` the schedule itself depends on the game length,
    so round ``k`` is a separate ``k``-round game.
    """
    indices = _outcome_indices(n, outcomes)
    workers = worker_count(workers)

    def averaged(c: GameConfig, every_round: bool) -> list[dict[Outcome, Estimate]]:
        grid = FourierGrid.exact_for(c.n, c.m)
        count = grid.nodes_alpha * grid.nodes_beta
        probs = _grid_probabilities(c, grid, indices, every_round, workers)
        return [
            {o: Estimate(_fsum_mean(v), 0.0, count) for o, v in zip(outcomes, per_round)}
            for per_round in probs
        ]

    if isinstance(gamma_policy, FixedGamma):
        return averaged(GameConfig.uniform(n, rounds, gamma_policy.gamma), True)
    if isinstance(gamma_policy, SmearedBullet):
        if gamma_policy.reading == "round":
            c = GameConfig(n, rounds, tuple(schedule_smeared_bullet(n, rounds, "round")))
            return averaged(c, True)
        series = []
        for k in range(1, rounds + 1):
            c = GameConfig(n, k, tuple(schedule_smeared_bullet(n, k, gamma_policy.reading)))
            series.extend(averaged(c, False))
        return series
    raise ConfigError(f"unknown gamma policy {gamma_policy!r}")

