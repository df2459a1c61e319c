"""Photon-number truncation: projections, disturbance checks, protocol transform."""

import math

import numpy as np
import pytest

from optsmp.errors import ConfigError, PremiseViolationError, VacuousTruncationError
from optsmp.fock import (
    DenseOperator,
    FockDiagonalState,
    ProductPureState,
    PureState,
    coherent_state,
    fidelity,
    mean_photon_number,
    trace_distance,
)
from optsmp.smp import RepetitionCode, coherent_fingerprint_protocol, evaluate_error, trivial_classical_protocol
from optsmp.truncation import (
    TruncationSpec,
    check_gentle_measurement,
    check_projector_closeness,
    markov_cutoff,
    perturbed_error_bound,
    project_below_cutoff,
    retained_weight,
    transform_protocol,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Cutoff specs

def test_markov_cutoff_builds_consistent_spec():
    spec = markov_cutoff(1.0, 1e-4, modes=3)
    assert spec.cutoff == 10000
    assert spec.modes == 3
    assert spec.mu == 1.0
    assert spec.delta == 1e-4


def test_truncation_spec_rejects_inconsistent_cutoff():
    with pytest.raises(ConfigError):
        TruncationSpec(mu=1.0, delta=0.5, cutoff=3, modes=1)
    with pytest.raises(ConfigError):
        TruncationSpec(mu=1.0, delta=0.5, cutoff=2, modes=0)


# ---------------------------------------------------------------------------
# Projection

def test_retained_weight_of_truncated_coherent_state():
    # Oracle: renormalized Poisson(1) mass on 0..3 out of 0..20 equals
    # (1 + 1 + 1/2 + 1/6) / sum_{k<=20} 1/k!.
    state = coherent_state(1.0, 20)
    assert retained_weight(state, 3) == pytest.approx(0.9810118431238463, abs=1e-12)


def test_project_pure_state():
    state = PureState(1, {(0,): 0.6, (1,): 0.6, (5,): math.sqrt(0.28)})
    projected, weight = project_below_cutoff(state, 2)
    assert weight == pytest.approx(0.72, abs=1e-12)
    assert projected.support_size() == 2
    assert projected.max_total_photons() <= 2
    # renormalized: amplitudes scale by 1/sqrt(weight)
    assert abs(projected.amplitude((0,))) == pytest.approx(0.6 / math.sqrt(0.72), abs=1e-12)


def test_project_pure_vacuous_cutoff():
    with pytest.raises(VacuousTruncationError):
        project_below_cutoff(PureState.basis_state((5,)), 3)


def test_project_diagonal_state():
    state = FockDiagonalState(1, {(0,): 0.5, (3,): 0.25, (7,): 0.25})
    projected, weight = project_below_cutoff(state, 3)
    assert weight == pytest.approx(0.75, abs=1e-12)
    assert projected.probability((0,)) == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert projected.probability((7,)) == 0.0


def test_project_dense_operator():
    basis = ((0,), (1,), (2,))
    rho = np.array(
        [
            [0.5, 0.1, 0.2],
            [0.1, 0.3, 0.0],
            [0.2, 0.0, 0.2],
        ]
    )
    op = DenseOperator(basis, rho)
    projected, weight = project_below_cutoff(op, 1)
    assert weight == pytest.approx(0.8, abs=1e-12)
    assert float(np.trace(projected.matrix).real) == pytest.approx(1.0, abs=1e-12)
    # the block above the cutoff is wiped, coherences included
    assert projected.matrix[0, 2] == 0.0
    assert projected.matrix[2, 2] == 0.0
    assert projected.matrix[0, 1] == pytest.approx(0.1 / 0.8, abs=1e-12)


def test_project_product_below_cutoff_is_identity():
    f = coherent_state(0.5, 6)
    prod = ProductPureState((f, f, f))
    projected, weight = project_below_cutoff(prod, 18)
    assert projected is prod
    assert weight == 1.0


def test_project_product_above_cutoff_materializes():
    f = PureState(1, {(0,): INV_SQRT2, (1,): INV_SQRT2})
    prod = ProductPureState((f, f))
    projected, weight = project_below_cutoff(prod, 1)
    assert weight == pytest.approx(0.75, abs=1e-12)
    assert isinstance(projected, PureState)
    assert projected.max_total_photons() <= 1


def test_project_accepts_spec_objects():
    state = coherent_state(1.0, 20)
    spec = markov_cutoff(1.0, 1.0 / 3.0, modes=1)
    assert spec.cutoff == 3
    _, weight = project_below_cutoff(state, spec)
    assert weight == pytest.approx(retained_weight(state, 3), abs=1e-15)


# ---------------------------------------------------------------------------
# Disturbance checks

def test_gentle_measurement_pure_states_are_tight():
    # For pure states the post-projection fidelity equals sqrt(weight) exactly.
    state = coherent_state(1.0, 20)
    for cutoff in (0, 1, 3, 8):
        slack = check_gentle_measurement(state, cutoff)
        assert abs(slack) <= 1e-9


def test_gentle_measurement_dense_states():
    rng = np.random.default_rng(3)
    basis = tuple((k,) for k in range(12))
    for _ in range(25):
        g = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        op = DenseOperator(basis, rho)
        cutoff = int(rng.integers(0, 12))
        assert check_gentle_measurement(op, cutoff) >= -1e-9


def test_projector_closeness_frozen_example():
    # Oracle: weight 0.9810118431238463 >= 1 - 0.02, so the projected state
    # must sit within sqrt(0.02) in trace distance; the pure-state distance is
    # sqrt(1 - weight) = 0.1377975212990195.
    state = coherent_state(1.0, 20)
    slack = check_projector_closeness(state, 3, 0.02)
    expected = math.sqrt(0.02) - 0.1377975212990195
    assert slack == pytest.approx(expected, abs=1e-12)
    assert slack > 0.0


def test_projector_closeness_requires_premise():
    state = coherent_state(1.0, 20)
    # retained weight at cutoff 3 is 0.981 < 1 - 0.01: hypothesis fails
    with pytest.raises(PremiseViolationError):
        check_projector_closeness(state, 3, 0.01)


def test_projector_closeness_dense():
    basis = ((0,), (1,), (2,))
    rho = np.diag([0.9, 0.08, 0.02]).astype(complex)
    op = DenseOperator(basis, rho)
    slack = check_projector_closeness(op, 1, 0.1)
    assert slack >= -1e-9


def test_perturbed_error_bound_formula():
    assert perturbed_error_bound(0.1, 0.01) == pytest.approx(0.12, abs=1e-15)
    assert perturbed_error_bound(0.0, 0.0) == 0.0


# ---------------------------------------------------------------------------
# Whole-protocol transform

def test_transform_fingerprint_protocol_budget():
    protocol = coherent_fingerprint_protocol(2, RepetitionCode(2, 3), 2.0)
    before = evaluate_error(protocol).worst_error
    truncated, bound = transform_protocol(protocol, 1e-4, original_error=before)
    assert truncated.name == "qfp-n2-m6+cutoff20000"
    after = evaluate_error(truncated).worst_error
    assert bound == pytest.approx(before + 2.0 * math.sqrt(1e-4), abs=1e-12)
    assert after <= bound + 1e-9


def test_transform_computes_original_error_when_missing():
    protocol = coherent_fingerprint_protocol(1, RepetitionCode(1, 2), 1.0)
    before = evaluate_error(protocol).worst_error
    _, bound = transform_protocol(protocol, 0.01)
    assert bound == pytest.approx(before + 2.0 * math.sqrt(0.01), abs=1e-12)


def test_transform_classical_protocol_preserves_zero_error():
    protocol = trivial_classical_protocol(2)
    truncated, bound = transform_protocol(protocol, 0.5, original_error=0.0)
    report = evaluate_error(truncated)
    assert report.worst_error == 0.0
    assert bound == pytest.approx(2.0 * math.sqrt(0.5), abs=1e-12)


def test_transform_messages_change_under_aggressive_cutoff():
    # delta = 0.9 on a mu=1 protocol truncates at a = floor(1/0.9) = 1 photon,
    # which genuinely reshapes the coherent factors.
    protocol = coherent_fingerprint_protocol(1, RepetitionCode(1, 2), 1.0)
    truncated, _ = transform_protocol(protocol, 0.9, original_error=0.0)
    msg = truncated.alice_encoder(0)
    assert msg.max_total_photons() <= 1
    original = protocol.alice_encoder(0)
    assert original.max_total_photons() > 1
