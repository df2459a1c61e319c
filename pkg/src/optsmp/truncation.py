"""Markov photon-number cutoff and the checks that make it safe.

A state with mean photon number mu keeps weight at least 1 - delta below the
cutoff floor(mu/delta); projecting onto that subspace moves the state by at
most sqrt(delta) in trace distance, and perturbing every message of a
simultaneous-message protocol by trace distance t inflates its worst-case
error by at most 2t. Each of those three steps is implemented and checkable
here on concrete states rather than assumed.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .combinatorics import markov_photon_cutoff
from .errors import (
    ConfigError,
    ModeMismatchError,
    PremiseViolationError,
    VacuousTruncationError,
)
from .fock import (
    DenseOperator,
    FockDiagonalState,
    ProductPureState,
    PureState,
    State,
    total_photons,
)


@dataclass(frozen=True)
class TruncationSpec:
    """A photon-number cutoff derived from (mu, delta) for a mode count."""

    mu: float
    delta: float
    cutoff: int
    modes: int

    def __post_init__(self) -> None:
        if self.modes < 1:
            raise ConfigError(f"modes must be >= 1, got {self.modes}")
        expected = markov_photon_cutoff(self.mu, self.delta)
        if self.cutoff != expected:
            raise ConfigError(
                f"cutoff {self.cutoff} does not equal floor(mu/delta) = {expected}"
            )


def markov_cutoff(mu: float, delta: float, modes: int = 1) -> TruncationSpec:
    """Cutoff spec with cutoff = floor(mu/delta).

    Keeping total photons <= cutoff retains weight >= 1 - delta for any state
    of mean photon number <= mu, by Markov's inequality.
    """
    return TruncationSpec(mu=mu, delta=delta, cutoff=markov_photon_cutoff(mu, delta), modes=modes)


def _resolve_cutoff(spec_or_cutoff: TruncationSpec | int) -> int:
    if isinstance(spec_or_cutoff, TruncationSpec):
        return spec_or_cutoff.cutoff
    cutoff = int(spec_or_cutoff)
    if cutoff < 0:
        raise ConfigError(f"cutoff must be >= 0, got {cutoff}")
    return cutoff


def retained_weight(state: State, spec_or_cutoff: TruncationSpec | int) -> float:
    """Weight of the state inside the cutoff subspace, Pr[N <= cutoff]."""
    cutoff = _resolve_cutoff(spec_or_cutoff)
    dist = fock.photon_number_distribution(state)
    return sum(p for n, p in dist.items() if n <= cutoff)


def project_below_cutoff(
    state: State, spec_or_cutoff: TruncationSpec | int
) -> tuple[State, float]:
    """Project onto total photons <= cutoff and renormalize.

    Returns ``(projected_state, weight)`` where ``weight`` is the mass the
    projector retained. A projection that would remove everything raises
    :class:`VacuousTruncationError` instead of fabricating a state.
    """
    cutoff = _resolve_cutoff(spec_or_cutoff)
    if isinstance(spec_or_cutoff, TruncationSpec):
        if spec_or_cutoff.modes != state.modes:
            raise ModeMismatchError(
                f"spec is for {spec_or_cutoff.modes} modes, state has {state.modes}"
            )
    if isinstance(state, PureState):
        kept = {
            idx: amp
            for idx, amp in state.amplitudes.items()
            if total_photons(idx) <= cutoff
        }
        weight = sum(abs(c) ** 2 for c in kept.values())
        if not kept:
            raise VacuousTruncationError(
                f"no support at or below cutoff {cutoff}"
            )
        return PureState(state.modes, kept, normalize=True), weight
    if isinstance(state, FockDiagonalState):
        kept_p = {
            idx: p
            for idx, p in state.probabilities.items()
            if total_photons(idx) <= cutoff
        }
        weight = sum(kept_p.values())
        if not kept_p:
            raise VacuousTruncationError(f"no support at or below cutoff {cutoff}")
        return FockDiagonalState(state.modes, kept_p, normalize=True), weight
    if isinstance(state, ProductPureState):
        if state.max_total_photons() <= cutoff:
            # The projector acts as the identity on the whole joint support.
            return state, 1.0
        return project_below_cutoff(state.to_pure_state(), cutoff)
    if isinstance(state, DenseOperator):
        mask = state.cutoff_mask(cutoff)
        weight = float(np.real(np.diagonal(state.matrix))[mask].sum())
        if weight <= 0.0:
            raise VacuousTruncationError(f"no weight at or below cutoff {cutoff}")
        proj = np.where(mask, 1.0, 0.0)
        mat = state.matrix * np.outer(proj, proj) / weight
        return DenseOperator(state.basis, mat), weight
    raise TypeError(f"unsupported state type {type(state).__name__}")


def check_gentle_measurement(
    state: State, spec_or_cutoff: TruncationSpec | int
) -> float:
    """Slack of the gentle-measurement inequality for this state and cutoff.

    Returns ``F(state, projected) - sqrt(weight)``; nonnegative up to float
    error whenever the projection is nonvacuous.
    """
    projected, weight = project_below_cutoff(state, spec_or_cutoff)
    f = fock.fidelity(state, projected)
    return f - math.sqrt(weight)


def check_projector_closeness(
    state: State, spec_or_cutoff: TruncationSpec | int, delta: float
) -> float:
    """Gap ``sqrt(delta) - trace_distance(state, projected)``.

    Requires the premise ``retained weight >= 1 - delta``; a premise failure
    raises :class:`PremiseViolationError` (the bound was never claimed there),
    which is distinct from a negative gap (a genuine bound failure).
    """
    if not 0.0 < delta < 1.0:
        raise ConfigError(f"delta must be in (0, 1), got {delta}")
    projected, weight = project_below_cutoff(state, spec_or_cutoff)
    if weight < 1.0 - delta - 1e-12:
        raise PremiseViolationError(
            f"retained weight {weight} below 1 - delta = {1.0 - delta}"
        )
    dist = fock.trace_distance(state, projected)
    return math.sqrt(delta) - dist


def perturbed_error_bound(error: float, message_distance: float) -> float:
    """Worst-case error bound after replacing every message within trace
    distance ``message_distance``: error + 2 * message_distance.

    Two messages move, each contributing at most its trace distance to the
    referee's output distribution.
    """
    if error < 0.0 or message_distance < 0.0:
        raise ConfigError("error and message_distance must be nonnegative")
    return error + 2.0 * message_distance


def transform_protocol(protocol, delta: float, *, original_error: float | None = None):
    """Truncate every message of a protocol at cutoff floor(mu/delta).

    Returns ``(truncated_protocol, error_bound)`` with
    ``error_bound = original_error + 2 * sqrt(delta)``; the truncated
    protocol's exact worst-case error never exceeds the bound (each projected
    message sits within sqrt(delta) of the original in trace distance). When
    ``original_error`` is omitted it is computed by exhaustive evaluation.
    """
    from .smp import evaluate_error  # local import: smp builds on this module

    if not 0.0 < delta < 1.0:
        raise ConfigError(f"delta must be in (0, 1), got {delta}")
    spec = markov_cutoff(protocol.mu, delta, protocol.m)
    if original_error is None:
        original_error = evaluate_error(protocol).worst_error

    def wrap(encoder):
        cache: dict[int, State] = {}

        def truncated(x: int) -> State:
            if x not in cache:
                cache[x] = project_below_cutoff(encoder(x), spec)[0]
            return cache[x]

        return truncated

    truncated_protocol = dataclasses.replace(
        protocol,
        name=f"{protocol.name}+cutoff{spec.cutoff}",
        alice_encoder=wrap(protocol.alice_encoder),
        bob_encoder=wrap(protocol.bob_encoder),
    )
    bound = perturbed_error_bound(original_error, math.sqrt(delta))
    return truncated_protocol, bound
