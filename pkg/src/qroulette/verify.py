"""Reproduction checks run by ``qroulette verify``.

Each check returns one or more ``CheckResult`` lines.  Output is a pure
function of the code: all randomness comes from fixed seeds and no timing
information is printed.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .averaging import (
    TABLE1_QUANTUM,
    AveragingSpec,
    FourierGrid,
    MonteCarlo,
    SmearedBullet,
    expected_outcome_probability,
    figure_series,
    table1_quantum,
)
from .classical import ClassicalConfig, classical_all_alive_round_probability, classical_game
from .game import GameConfig, bullet_probability, evolve, evolve_trace
from .operators import GateParams, apply_player_op, dense_player_op, unitarity_defect
from .statevec import StateVector, amplitude, basis_state, distribution, format_outcome

PI = math.pi
CHECK_SEED = 314159


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}" + (f"  {self.detail}" if self.detail else "")


def _random_state(rng: np.random.Generator, n: int) -> StateVector:
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, amps / np.linalg.norm(amps))


def _random_params(rng: np.random.Generator) -> GateParams:
    return GateParams(rng.uniform(0, 2 * PI), rng.uniform(0, 2 * PI), rng.uniform(0, PI))


def check_unitarity(cases: int = 200) -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED)
    worst_dense = worst_norm = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        player = int(rng.integers(1, n + 1))
        p = _random_params(rng)
        worst_dense = max(worst_dense, unitarity_defect(dense_player_op(n, player, p)))
        s = _random_state(rng, n)
        worst_norm = max(worst_norm, abs(apply_player_op(s, player, p).norm() - 1.0))
    return [
        CheckResult("unitarity.dense", worst_dense <= 1e-12, f"max_defect={worst_dense:.3e} tol=1e-12"),
        CheckResult("unitarity.norm", worst_norm <= 1e-12, f"max_norm_drift={worst_norm:.3e} tol=1e-12"),
    ]


def check_oracle(cases: int = 200) -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED + 1)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 9))
        player = int(rng.integers(1, n + 1))
        p = _random_params(rng)
        s = _random_state(rng, n)
        diff = apply_player_op(s, player, p).amps - dense_player_op(n, player, p) @ s.amps
        worst = max(worst, float(np.max(np.abs(diff))))
    return [CheckResult("oracle.structured_vs_dense", worst <= 1e-10, f"max_diff={worst:.3e} tol=1e-10")]


def _amp_error(s: StateVector, expected: dict) -> float:
    ref = np.zeros_like(s.amps)
    for o, a in expected.items():
        ref[int(format_outcome(o), 2)] = a
    return float(np.max(np.abs(s.amps - ref)))


def check_two_player_table() -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(CHECK_SEED + 2)
    alpha, beta = rng.uniform(0, 2 * PI, 2)
    table = {
        (0.0, 0.0): {(0, 1): 1j * cmath.exp(1j * beta)},
        (PI, 0.0): {(1, 0): 1j * cmath.exp(1j * (-alpha + beta))},
        (0.0, PI): {(0, 1): 1j * cmath.exp(1j * beta)},
        (PI, PI): {(1, 1): cmath.exp(-2j * alpha)},
    }
    for (g1, g2), expected in table.items():
        err = _amp_error(evolve(GameConfig(2, 1, (g1, g2), alpha, beta)), expected)
        name = f"two_player_table[g1={'pi' if g1 else '0'},g2={'pi' if g2 else '0'}]"
        results.append(CheckResult(name, err <= 1e-12, f"max_amp_err={err:.3e}"))
    return results


def two_player_reference(g1, g2, alpha, beta) -> dict:
    s1, c1, s2, c2 = math.sin(g1 / 2), math.cos(g1 / 2), math.sin(g2 / 2), math.cos(g2 / 2)
    return {
        (0, 1): 1j * cmath.exp(1j * beta) * c1,
        (1, 0): 1j * cmath.exp(-1j * (alpha - beta)) * s1 * c2,
        (1, 1): cmath.exp(-2j * alpha) * s1 * s2,
    }


def three_player_reference(g1, g2, g3, alpha, beta) -> dict:
    s1, s2, s3 = (math.sin(g / 2) for g in (g1, g2, g3))
    c1, c2, c3 = (math.cos(g / 2) for g in (g1, g2, g3))

    def e(a, b):
        return cmath.exp(1j * (a * alpha + b * beta))

    return {
        (0, 0, 1): -e(0, 2) * c1 * c2,
        (0, 1, 0): -e(-1, 2) * c1 * s2 * c3,
        (0, 1, 1): 1j * e(-2, 1) * c1 * s2 * s3,
        (1, 0, 0): -e(-1, 2) * s1 * c2 * c3,
        (1, 0, 1): 1j * e(-2, 1) * s1 * c2 * s3,
        (1, 1, 0): 1j * e(-2, 1) * s1 * s2 * c3,
        (1, 1, 1): e(-3, 0) * s1 * s2 * s3,
    }


def check_closed_forms(cases: int = 50) -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED + 3)
    worst2 = worst3 = 0.0
    for _ in range(cases):
        g = rng.uniform(0, PI, 2)
        a, b = rng.uniform(0, 2 * PI, 2)
        worst2 = max(worst2, _amp_error(evolve(GameConfig(2, 1, tuple(g), a, b)), two_player_reference(*g, a, b)))
    for _ in range(cases):
        g = rng.uniform(0, PI, 3)
        a, b = rng.uniform(0, 2 * PI, 2)
        worst3 = max(worst3, _amp_error(evolve(GameConfig(3, 1, tuple(g), a, b)), three_player_reference(*g, a, b)))
    return [
        CheckResult("closed_form.two_player", worst2 <= 1e-12, f"max_amp_err={worst2:.3e} cases={cases}"),
        CheckResult("closed_form.three_player", worst3 <= 1e-12, f"max_amp_err={worst3:.3e} cases={cases}"),
    ]


def check_three_player_cases() -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED + 4)
    alpha, beta = rng.uniform(0, 2 * PI, 2)
    cases = {
        (PI, PI, PI): ((1, 1, 1), cmath.exp(-3j * alpha)),
        (PI, 0.0, PI): ((1, 0, 1), 1j * cmath.exp(1j * (-2 * alpha + beta))),
        (PI, 0.0, 0.0): ((1, 0, 0), -cmath.exp(1j * (-alpha + 2 * beta))),
        (0.0, 0.0, 0.0): ((0, 0, 1), -cmath.exp(2j * beta)),
    }
    results = []
    for g, (o, phase) in cases.items():
        s = evolve(GameConfig(3, 1, g, alpha, beta))
        prob = distribution(s)[o]
        err = abs(amplitude(s, o) - phase)
        ok = abs(prob - 1.0) <= 1e-12 and err <= 1e-12
        results.append(CheckResult(f"three_player_cases[{format_outcome(o)}]", ok, f"p={prob!r} phase_err={err:.3e}"))
    return results


def check_nineteen64(samples: int = 1_000_000, seed: int = 64) -> list[CheckResult]:
    c = GameConfig.uniform(3, 2, PI / 2)
    target = 19 / 64
    grid = expected_outcome_probability(c, AveragingSpec(True, False, FourierGrid(13, 13)), (1, 1, 1))
    mc = expected_outcome_probability(c, AveragingSpec(True, False, MonteCarlo(samples, seed)), (1, 1, 1))
    z = abs(mc.mean - target) / mc.std_err
    return [
        CheckResult("19/64.grid", abs(grid.mean - target) <= 1e-12, f"mean={grid.mean!r} nodes=13x13"),
        CheckResult("19/64.monte_carlo", z <= 3, f"mean={mc.mean!r} se={mc.std_err!r} z={z:.3f}"),
    ]


def table1_tolerance(target: float, std_err: float) -> float:
    return max(3 * std_err, 0.01 * target)


def check_table1(samples: int = 1_000_000, seed: int = 1) -> list[CheckResult]:
    results = []
    for n in (3, 4, 5):
        e = table1_quantum(n, samples, seed)
        target = TABLE1_QUANTUM[n]
        tol = table1_tolerance(target, e.std_err)
        results.append(
            CheckResult(
                f"table1.quantum[n={n}]",
                abs(e.mean - target) <= tol,
                f"mean={e.mean!r} se={e.std_err!r} target={target!r} tol={tol:.3e}",
            )
        )
        classical = classical_all_alive_round_probability(n, 0.5)
        results.append(CheckResult(f"table1.classical[n={n}]", classical == 0.5**n, f"value={classical!r}"))
    return results


def _all_alive_series(n: int, rounds: int = 25) -> list[float]:
    o = (1,) * n
    return [r[o].mean for r in figure_series(n, rounds, [o])]


def check_figure1() -> list[CheckResult]:
    results = []
    for n, (lo, hi) in ((3, (0.45, 0.48)), (4, (0.38, 0.42))):
        series = _all_alive_series(n)
        k = int(np.argmax(series)) + 1
        peak = series[k - 1]
        results.append(
            CheckResult(f"figure1.peak[n={n}]", k == 3 and lo <= peak <= hi, f"round={k} value={peak!r} band=[{lo},{hi}]")
        )
    return results


FIGURE23_TARGETS = {
    (3, 3): 0.106,
    (3, 2): 0.077,
    (4, 4): 0.062,
    (4, 2): 0.039,
}


def sole_survivor(n: int, player: int) -> tuple[int, ...]:
    return tuple(1 if j == player - 1 else 0 for j in range(n))


def sole_survivor_means(n: int, rounds: int = 25, first: int = 1, last: int = 25) -> dict[int, float]:
    """Mean over rounds ``first..last`` of each player's sole-survivor probability."""
    outcomes = [sole_survivor(n, i) for i in range(1, n + 1)]
    series = figure_series(n, rounds, outcomes)
    return {
        i: math.fsum(series[k - 1][o].mean for k in range(first, last + 1)) / (last - first + 1)
        for i, o in enumerate(outcomes, start=1)
    }


def permutation_diagnostic(n: int, means: dict[int, float], tol: float = 0.005) -> str:
    """Best relabelling of players against the reported targets for ``n`` players."""
    targets = {p: v for (m, p), v in FIGURE23_TARGETS.items() if m == n}
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        relabel = dict(zip(range(1, n + 1), perm))
        err = max(abs(means[relabel[p]] - v) for p, v in targets.items())
        if best is None or err < best[0]:
            best = (err, perm)
    err, perm = best
    verdict = "fits" if err <= tol else "no relabelling fits"
    return f"best_relabelling={''.join(map(str, perm))} max_err={err:.4f} ({verdict})"


def check_figure23() -> list[CheckResult]:
    results = []
    for n in (3, 4):
        means = sole_survivor_means(n)
        failed = False
        for (m, player), target in FIGURE23_TARGETS.items():
            if m != n:
                continue
            value = means[player]
            ok = abs(value - target) <= 0.005
            failed |= not ok
            results.append(
                CheckResult(
                    f"figure23.sole_survivor[n={n},player={player}]",
                    ok,
                    f"mean_rounds_1_25={value:.6f} target={target} tol=0.005",
                )
            )
        if failed:
            results.append(CheckResult(f"figure23.permutation_diagnostic[n={n}]", True, permutation_diagnostic(n, means)))
    return results


def check_revival(rounds: int = 6) -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED + 5)
    alpha, beta = rng.uniform(0, 2 * PI, 2)
    results = []
    for loaded in (1, 2, 3):
        per_round = tuple(0.0 if i == loaded else PI for i in range(1, 4))
        trace = evolve_trace(GameConfig(3, rounds, per_round * rounds, alpha, beta))
        p_all = distribution(trace[1])[(1, 1, 1)]
        alive_odd = [
            math.fsum(p for o, p in distribution(trace[k - 1]).items() if o[loaded - 1]) for k in (1, 3, 5)
        ]
        ok = abs(p_all - 1) <= 1e-12 and max(alive_odd) <= 1e-12
        results.append(
            CheckResult(f"revival[loaded={loaded}]", ok, f"p111_round2={p_all!r} max_alive_odd={max(alive_odd):.3e}")
        )
    return results


def check_correspondence(cases: int = 100) -> list[CheckResult]:
    rng = np.random.default_rng(CHECK_SEED + 6)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 5))
        g = rng.uniform(0, PI, n)
        a, b = rng.uniform(0, 2 * PI, 2)
        quantum = distribution(evolve(GameConfig(n, 1, tuple(g), a, b)))
        classical = classical_game(ClassicalConfig(n, 1, tuple(bullet_probability(x) for x in g)))
        worst = max(worst, max(abs(quantum[o] - classical.get(o, 0.0)) for o in quantum))
    return [CheckResult("correspondence.single_round", worst <= 1e-10, f"max_diff={worst:.3e} cases={cases}")]


def check_smeared(rounds: int = 25) -> list[CheckResult]:
    results = []
    for n in (3, 4):
        o = (1,) * n
        value = figure_series(n, rounds, [o], SmearedBullet("game"))[-1][o].mean
        results.append(CheckResult(f"smeared.all_alive[n={n},rounds={rounds}]", value > 0.80, f"value={value!r} threshold=0.8"))
    return results


def check_reproducibility(samples: int = 100_000) -> list[CheckResult]:
    runs = [table1_quantum(3, samples, 7, workers=w) for w in (1, 8, 1)]
    same = runs[0] == runs[1] == runs[2]
    return [CheckResult("reproducibility.monte_carlo", same, f"mean={runs[0].mean!r} workers=1,8,1")]


CHECKS: dict[str, Callable[[], list[CheckResult]]] = {
    "unitarity": check_unitarity,
    "oracle": check_oracle,
    "two_player_table": check_two_player_table,
    "closed_forms": check_closed_forms,
    "three_player_cases": check_three_player_cases,
    "19/64": check_nineteen64,
    "table1": check_table1,
    "figure1": check_figure1,
    "figure23": check_figure23,
    "revival": check_revival,
    "correspondence": check_correspondence,
    "smeared": check_smeared,
    "reproducibility": check_reproducibility,
}


def run_checks(pattern: str | None = None) -> list[CheckResult]:
    results = []
    for key, fn in CHECKS.items():
        if pattern and pattern not in key:
            continue
        results.extend(fn())
    return results
