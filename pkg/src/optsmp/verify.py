"""Property suites: every inequality the package relies on, checked on
randomized ensembles and exact sweeps.

Each suite reports its case count and the minimum slack it observed, where
slack >= required_slack (normally -1e-9 or tighter) means the property held.
Suites are deterministic functions of (seed, size); the CLI exposes them via
``verify --suite NAME``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fock, truncation
from .combinatorics import (
    binomial_power_bound,
    count_rank,
    entropy_profile,
    log_rank_bounds,
)
from .errors import ConfigError, PremiseViolationError
from .fock import (
    DenseOperator,
    FockDiagonalState,
    PureState,
    total_photons,
)
from .smp import (
    FockOutcomeReferee,
    SmpProtocol,
    equal_counts_decision,
    equality_function,
    evaluate_error,
)

DEFAULT_SEED = 1729

#: Required slack per suite under normal operation.
NORMAL_TOLERANCE = {
    "metrics": -1e-9,
    "markov": -1e-12,
    "gentle": -1e-9,
    "closeness": -1e-9,
    "perturb": -1e-9,
    "binom": 0.0,
    "logrank": -1e-9,
    "entropy": -1e-9,
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    min_slack: float
    passed: bool
    failures: tuple[str, ...]

    def summary_line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"suite={self.name} cases={self.cases} min_slack={self.min_slack!r} "
            f"result={status}"
        )


class _Collector:
    """Accumulates (slack, description) pairs against a required slack."""

    def __init__(self, required: float) -> None:
        self.required = required
        self.cases = 0
        self.min_slack = math.inf
        self.failures: list[str] = []

    def add(self, slack: float, describe: Callable[[], str]) -> None:
        self.cases += 1
        if slack < self.min_slack:
            self.min_slack = slack
        if slack < self.required and len(self.failures) < 5:
            self.failures.append(f"slack={slack!r} {describe()}")

    def result(self, name: str) -> SuiteResult:
        min_slack = self.min_slack if self.cases else 0.0
        return SuiteResult(
            name=name,
            cases=self.cases,
            min_slack=min_slack,
            passed=not self.failures,
            failures=tuple(self.failures),
        )


# ---------------------------------------------------------------------------
# Random ensembles

def _random_sparse_pure(rng: np.random.Generator, modes: int, max_occ: int, max_terms: int) -> PureState:
    k = int(rng.integers(1, max_terms + 1))
    occs = {tuple(int(v) for v in row) for row in rng.integers(0, max_occ + 1, size=(k, modes))}
    amps = {
        occ: complex(rng.normal(), rng.normal())
        for occ in sorted(occs)
    }
    return PureState(modes, amps, normalize=True)


def _random_diagonal(rng: np.random.Generator, modes: int, max_occ: int, max_terms: int) -> FockDiagonalState:
    k = int(rng.integers(1, max_terms + 1))
    occs = {tuple(int(v) for v in row) for row in rng.integers(0, max_occ + 1, size=(k, modes))}
    probs = {occ: float(rng.exponential()) + 1e-12 for occ in sorted(occs)}
    return FockDiagonalState(modes, probs, normalize=True)


def _dense_basis(modes: int) -> tuple[tuple[int, ...], ...]:
    # Largest total-photon cutoff keeping the dimension at or below 32.
    cutoff = {1: 31, 2: 6, 3: 3}[modes]
    basis = [
        occ
        for occ in sorted(
            _occupations(modes, cutoff), key=lambda o: (total_photons(o), o)
        )
    ]
    return tuple(basis)


def _occupations(modes: int, max_total: int):
    if modes == 1:
        for n in range(max_total + 1):
            yield (n,)
        return
    for n in range(max_total + 1):
        for rest in _occupations(modes - 1, max_total - n):
            yield (n,) + rest


def _random_dense(rng: np.random.Generator, modes: int) -> DenseOperator:
    basis = _dense_basis(modes)
    d = len(basis)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DenseOperator(basis, rho)


def _random_dense_concentrated(
    rng: np.random.Generator, modes: int, cutoff: int, above_mass: float
) -> DenseOperator:
    """Density operator with at most ``above_mass`` weight above the cutoff."""
    basis = _dense_basis(modes)
    inside = [i for i, occ in enumerate(basis) if total_photons(occ) <= cutoff]
    d = len(basis)
    k = len(inside)
    g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    low = g @ g.conj().T
    low /= np.trace(low).real
    rho = np.zeros((d, d), dtype=complex)
    rho[np.ix_(inside, inside)] = low
    g2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    full = g2 @ g2.conj().T
    full /= np.trace(full).real
    mixed = (1.0 - above_mass) * rho + above_mass * full
    return DenseOperator(basis, mixed)


# ---------------------------------------------------------------------------
# Suites

def suite_metrics(seed: int, size: int, required: float) -> SuiteResult:
    rng = np.random.default_rng([seed, 1])
    col = _Collector(required)
    for _ in range(size):
        modes = int(rng.integers(1, 4))
        a = _random_sparse_pure(rng, modes, 4, 10)
        b = _random_sparse_pure(rng, modes, 4, 10)
        c = _random_sparse_pure(rng, modes, 4, 10)
        tab = fock.trace_distance(a, b)
        tba = fock.trace_distance(b, a)
        col.add(1e-12 - abs(tab - tba), lambda: "pure trace distance symmetry")
        tac = fock.trace_distance(a, c)
        tbc = fock.trace_distance(b, c)
        col.add(tac + tbc - tab + 1e-12, lambda: "pure triangle inequality")
        f = fock.fidelity(a, b)
        col.add(tab - (1.0 - f), lambda: f"lower Fuchs-van de Graaf f={f!r}")
        col.add(math.sqrt(max(0.0, 1.0 - f * f)) - tab, lambda: f"upper Fuchs-van de Graaf f={f!r}")
        # Dense cross-check of the sparse pure-state computations.
        basis = tuple(
            sorted(set(a.amplitudes) | set(b.amplitudes), key=lambda o: (total_photons(o), o))
        )
        da = DenseOperator.from_pure_state(a, basis)
        db = DenseOperator.from_pure_state(b, basis)
        col.add(
            1e-8 - abs(fock.trace_distance(da, db) - tab),
            lambda: "sparse-vs-dense trace distance",
        )
        col.add(1e-8 - abs(fock.fidelity(da, db) - f), lambda: "sparse-vs-dense fidelity")
        p = _random_diagonal(rng, modes, 4, 10)
        q = _random_diagonal(rng, modes, 4, 10)
        tv = fock.trace_distance(p, q)
        col.add(1.0 - tv + 1e-12, lambda: "diagonal distance bounded by 1")
        col.add(tv, lambda: "diagonal distance nonnegative")
    return col.result("metrics")


def suite_markov(seed: int, size: int, required: float) -> SuiteResult:
    rng = np.random.default_rng([seed, 2])
    col = _Collector(required)
    thresholds = [0.5, 1.0, 2.0, 3.5, 5.0, 8.0, 13.0]
    for i in range(size):
        kind = i % 3
        modes = int(rng.integers(1, 4))
        if kind == 0:
            state = _random_sparse_pure(rng, modes, 6, 12)
        elif kind == 1:
            state = _random_diagonal(rng, modes, 6, 12)
        else:
            state = _random_dense(rng, modes)
        mean = fock.mean_photon_number(state)
        for a in thresholds:
            tail = fock.tail_probability(state, a)
            col.add(
                mean / a - tail,
                lambda: f"mean={mean!r} threshold={a!r} tail={tail!r}",
            )
    return col.result("markov")


def suite_gentle(seed: int, size: int, required: float) -> SuiteResult:
    rng = np.random.default_rng([seed, 3])
    col = _Collector(required)
    for i in range(size):
        modes = int(rng.integers(1, 4))
        dense = _random_dense(rng, modes)
        max_total = max(total_photons(o) for o in dense.basis)
        cutoff = int(rng.integers(0, max_total + 1))
        slack = truncation.check_gentle_measurement(dense, cutoff)
        col.add(slack, lambda: f"dense modes={modes} cutoff={cutoff}")
        pure = _random_sparse_pure(rng, modes, 6, 12)
        min_total = min(total_photons(idx) for idx in pure.amplitudes)
        pc = int(rng.integers(min_total, pure.max_total_photons() + 1))
        pslack = truncation.check_gentle_measurement(pure, pc)
        col.add(pslack, lambda: f"pure modes={modes} cutoff={pc}")
        col.add(1e-9 - abs(pslack), lambda: "pure fidelity equals sqrt(weight)")
    return col.result("gentle")


def suite_closeness(seed: int, size: int, required: float) -> SuiteResult:
    rng = np.random.default_rng([seed, 4])
    col = _Collector(required)
    held = 0
    for i in range(size):
        delta = [0.3, 0.1, 0.02][i % 3]
        modes = int(rng.integers(1, 4))
        basis_max = max(total_photons(o) for o in _dense_basis(modes))
        cutoff = int(rng.integers(1, basis_max))
        above = float(rng.uniform(0.0, 1.5 * delta))
        state = _random_dense_concentrated(rng, modes, cutoff, above)
        try:
            gap = truncation.check_projector_closeness(state, cutoff, delta)
        except PremiseViolationError:
            continue
        held += 1
        col.add(gap, lambda: f"delta={delta} cutoff={cutoff} modes={modes}")
    if held == 0:
        return SuiteResult("closeness", 0, 0.0, False, ("premise never held",))
    return col.result("closeness")


def _toy_protocol() -> SmpProtocol:
    def encoder(x: int) -> PureState:
        return PureState.basis_state((x,))

    return SmpProtocol(
        name="toy-basis",
        n=1,
        m=1,
        mu=1.0,
        alice_encoder=encoder,
        bob_encoder=encoder,
        referee=FockOutcomeReferee(equal_counts_decision(1)),
        target=equality_function(1),
    )


def _perturbed_toy(theta0: float, theta1: float) -> tuple[SmpProtocol, float]:
    """Toy protocol with rotated message states; returns it with the max
    per-message trace distance."""

    def encoder(x: int) -> PureState:
        theta = theta0 if x == 0 else theta1
        return PureState(
            1,
            {(x,): math.cos(theta), (x + 1,): math.sin(theta)},
            normalize=True,
        )

    base = _toy_protocol()
    perturbed = dataclasses.replace(
        base,
        name="toy-basis-perturbed",
        mu=2.0,
        alice_encoder=encoder,
        bob_encoder=encoder,
    )
    t = max(abs(math.sin(theta0)), abs(math.sin(theta1)))
    return perturbed, t


def suite_perturb(seed: int, size: int, required: float) -> SuiteResult:
    rng = np.random.default_rng([seed, 5])
    col = _Collector(required)
    base_error = evaluate_error(_toy_protocol()).worst_error
    for _ in range(size):
        theta0 = float(rng.uniform(0.0, 0.6))
        theta1 = float(rng.uniform(0.0, 0.6))
        perturbed, t = _perturbed_toy(theta0, theta1)
        err = evaluate_error(perturbed).worst_error
        bound = truncation.perturbed_error_bound(base_error, t)
        col.add(bound - err, lambda: f"theta0={theta0!r} theta1={theta1!r} t={t!r}")
    return col.result("perturb")


def suite_binom(seed: int, size: int, required: float) -> SuiteResult:
    col = _Collector(required)
    limit = max(1, size)
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            binom, bound = binomial_power_bound(n, m)
            # Exact integers; slack in log2 so huge values stay comparable.
            slack = math.log2(bound) - math.log2(binom)
            col.add(slack, lambda: f"n={n} m={m}")
    return col.result("binom")


def suite_logrank(seed: int, size: int, required: float) -> SuiteResult:
    col = _Collector(required)
    m_max = max(2, size)
    for m in range(2, m_max + 1):
        for mu in (0.5, 1.0, 2.0, 4.0, 8.0):
            for delta in (1e-1, 1e-2, 1e-4):
                b = log_rank_bounds(m, mu, delta)
                col.add(
                    min(b.bound_photon, b.bound_mode) - b.log2_rank,
                    lambda: f"m={m} mu={mu} delta={delta}",
                )
    return col.result("logrank")


def suite_entropy(seed: int, size: int, required: float) -> SuiteResult:
    col = _Collector(required)
    n_max = max(1, size)
    step = 1 if n_max <= 2000 else 7
    rows = entropy_profile(list(range(1, n_max + 1, step)))
    for row in rows:
        col.add(
            row["entropy_bound"] - row["log2_rank"],
            lambda: f"n={row['n']} m={row['m']}",
        )
        if row["n"] >= 100:
            col.add(row["log2_rank"] / math.sqrt(row["n"]) - 0.5, lambda: f"ratio low n={row['n']}")
            col.add(2.1 - row["log2_rank"] / math.sqrt(row["n"]), lambda: f"ratio high n={row['n']}")
    return col.result("entropy")


SUITES: dict[str, Callable[[int, int, float], SuiteResult]] = {
    "metrics": suite_metrics,
    "markov": suite_markov,
    "gentle": suite_gentle,
    "closeness": suite_closeness,
    "perturb": suite_perturb,
    "binom": suite_binom,
    "logrank": suite_logrank,
    "entropy": suite_entropy,
}

DEFAULT_SIZES = {
    "metrics": 120,
    "markov": 150,
    "gentle": 150,
    "closeness": 300,
    "perturb": 60,
    "binom": 50,
    "logrank": 64,
    "entropy": 2000,
}


def run_suites(
    names: list[str] | None = None,
    *,
    seed: int = DEFAULT_SEED,
    size: int | None = None,
    inject_fault: str | None = None,
) -> list[SuiteResult]:
    """Run the named suites (all by default) and return their results.

    ``inject_fault`` names a suite whose required slack is raised to an
    unsatisfiable +0.1, for exercising the failure path end to end.
    """
    if names is None or not names:
        names = list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        required = NORMAL_TOLERANCE[name]
        if inject_fault == name:
            required = 0.1
        suite_size = size if size is not None else DEFAULT_SIZES[name]
        results.append(SUITES[name](seed, suite_size, required))
    return results
