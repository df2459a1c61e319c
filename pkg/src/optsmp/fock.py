"""Sparse multimode Fock-space states and distance measures.

Everything downstream works with finitely supported states over occupation
tuples ``(n1, ..., nm)``. Three representations cover the needs of the rest
of the package:

* :class:`PureState` -- a normalized sparse ket,
* :class:`FockDiagonalState` -- a probability distribution over occupation
  tuples (classical messages, photon-count statistics),
* :class:`DenseOperator` -- a small dense matrix over an explicit ordered
  basis, for checks that need genuinely mixed states.

:class:`ProductPureState` keeps many-mode product messages factorized so a
12-mode coherent message never has to be materialized as a joint ket.

States with infinite support (exact coherent states, thermal states) are not
representable; they enter pre-truncated with the discarded tail recorded by
the caller. Truncation is always explicit, never a silent side effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Union

import numpy as np

from .errors import (
    BasisMismatchError,
    DimensionCapError,
    ModeMismatchError,
    NormalizationError,
    SupportCapError,
)

FockIndex = tuple[int, ...]

#: Hard cap on sparse support size; pushing past it is an error, not a warning.
SUPPORT_CAP = 10**6
#: Amplitudes below this magnitude are dropped at construction.
AMPLITUDE_PRUNE = 1e-15
#: Allowed deviation of total weight from 1 at construction.
NORMALIZATION_TOL = 1e-9
#: Dense operators are for lemma-scale verification only.
DENSE_DIM_CAP = 256


def validate_index(occ: Iterable[int], modes: int | None = None) -> FockIndex:
    """Return ``occ`` as a validated occupation tuple.

    Entries must be nonnegative integers; ``modes``, when given, pins the
    length.
    """
    idx = tuple(occ)
    if modes is not None and len(idx) != modes:
        raise ModeMismatchError(f"expected {modes} modes, got index of length {len(idx)}")
    if len(idx) == 0:
        raise ModeMismatchError("occupation tuple must have at least one mode")
    for n in idx:
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
            raise ValueError(f"occupation numbers must be nonnegative integers, got {n!r}")
    return tuple(int(n) for n in idx)


def total_photons(index: FockIndex) -> int:
    """Total photon number of one occupation tuple."""
    return sum(index)


def _validated_amplitudes(
    modes: int, amplitudes: Mapping[Iterable[int], complex], prune: float
) -> dict[FockIndex, complex]:
    if not isinstance(modes, (int, np.integer)) or modes < 1:
        raise ModeMismatchError(f"modes must be a positive integer, got {modes!r}")
    amps: dict[FockIndex, complex] = {}
    for occ, amp in amplitudes.items():
        idx = validate_index(occ, int(modes))
        c = complex(amp)
        if abs(c) < prune or c == 0:
            continue
        if idx in amps:
            raise ValueError(f"duplicate occupation index {idx}")
        amps[idx] = c
    if len(amps) > SUPPORT_CAP:
        raise SupportCapError(f"support size {len(amps)} exceeds cap {SUPPORT_CAP}")
    return amps


class PureState:
    """Normalized sparse superposition of occupation-number basis states.

    Immutable after construction. Construction prunes raw input amplitudes
    below ``AMPLITUDE_PRUNE`` (a ``normalize=True`` rescale may still leave
    smaller stored values), enforces the support cap, checks normalization to
    within ``NORMALIZATION_TOL`` (unless ``normalize=True`` requests explicit
    rescaling first) and then rescales the residual so the stored weights sum
    to one.
    """

    __slots__ = ("modes", "_amps")

    def __init__(
        self,
        modes: int,
        amplitudes: Mapping[Iterable[int], complex],
        *,
        normalize: bool = False,
    ) -> None:
        amps = _validated_amplitudes(modes, amplitudes, AMPLITUDE_PRUNE)
        norm_sq = sum(abs(c) ** 2 for c in amps.values())
        if norm_sq == 0.0:
            raise NormalizationError("state has no support after pruning")
        if normalize:
            scale = 1.0 / math.sqrt(norm_sq)
            amps = {k: v * scale for k, v in amps.items()}
            norm_sq = 1.0
        elif abs(norm_sq - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"squared amplitudes sum to {norm_sq!r}, expected 1 within {NORMALIZATION_TOL}"
            )
        # Hygiene rescale so downstream probabilities sum to one exactly-ish.
        scale = 1.0 / math.sqrt(norm_sq)
        self.modes = int(modes)
        self._amps = {k: v * scale for k, v in amps.items()}

    @classmethod
    def _restore(
        cls, modes: int, amplitudes: Mapping[Iterable[int], complex]
    ) -> "PureState":
        """Rebuild a serialized state with its amplitudes kept verbatim.

        Reloading must not re-apply input pruning or rescaling: a
        ``normalize=True`` rescale can legitimately store amplitudes below
        ``AMPLITUDE_PRUNE``, and those must survive a save/load cycle
        bit for bit.
        """
        amps = _validated_amplitudes(modes, amplitudes, 0.0)
        norm_sq = sum(abs(c) ** 2 for c in amps.values())
        if abs(norm_sq - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"squared amplitudes sum to {norm_sq!r}, expected 1 within {NORMALIZATION_TOL}"
            )
        self = object.__new__(cls)
        self.modes = int(modes)
        self._amps = amps
        return self

    @property
    def amplitudes(self) -> Mapping[FockIndex, complex]:
        """Read-only view of the sparse amplitude map."""
        return MappingProxyType(self._amps)

    def amplitude(self, occ: Iterable[int]) -> complex:
        return self._amps.get(tuple(occ), 0.0 + 0.0j)

    @property
    def support(self) -> Iterator[FockIndex]:
        return iter(self._amps)

    def support_size(self) -> int:
        return len(self._amps)

    def max_total_photons(self) -> int:
        return max(total_photons(idx) for idx in self._amps)

    @classmethod
    def basis_state(cls, occ: Iterable[int]) -> "PureState":
        idx = validate_index(occ)
        return cls(len(idx), {idx: 1.0})

    @classmethod
    def vacuum(cls, modes: int) -> "PureState":
        return cls(modes, {(0,) * modes: 1.0})

    def __repr__(self) -> str:
        return f"PureState(modes={self.modes}, support={len(self._amps)})"


def _validated_probabilities(
    modes: int, probabilities: Mapping[Iterable[int], float], prune: float
) -> dict[FockIndex, float]:
    if not isinstance(modes, (int, np.integer)) or modes < 1:
        raise ModeMismatchError(f"modes must be a positive integer, got {modes!r}")
    probs: dict[FockIndex, float] = {}
    for occ, p in probabilities.items():
        idx = validate_index(occ, int(modes))
        pf = float(p)
        if pf < 0.0:
            raise NormalizationError(f"negative probability {pf!r} at {idx}")
        if pf < prune or pf == 0.0:
            continue
        if idx in probs:
            raise ValueError(f"duplicate occupation index {idx}")
        probs[idx] = pf
    if len(probs) > SUPPORT_CAP:
        raise SupportCapError(f"support size {len(probs)} exceeds cap {SUPPORT_CAP}")
    return probs


class FockDiagonalState:
    """Probability distribution over occupation tuples (a Fock-diagonal state)."""

    __slots__ = ("modes", "_probs")

    def __init__(
        self,
        modes: int,
        probabilities: Mapping[Iterable[int], float],
        *,
        normalize: bool = False,
    ) -> None:
        probs = _validated_probabilities(modes, probabilities, AMPLITUDE_PRUNE)
        total = sum(probs.values())
        if total == 0.0:
            raise NormalizationError("state has no support after pruning")
        if not normalize and abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"probabilities sum to {total!r}, expected 1 within {NORMALIZATION_TOL}"
            )
        self.modes = int(modes)
        self._probs = {k: v / total for k, v in probs.items()}

    @classmethod
    def _restore(
        cls, modes: int, probabilities: Mapping[Iterable[int], float]
    ) -> "FockDiagonalState":
        """Rebuild a serialized distribution with probabilities kept verbatim."""
        probs = _validated_probabilities(modes, probabilities, 0.0)
        total = sum(probs.values())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"probabilities sum to {total!r}, expected 1 within {NORMALIZATION_TOL}"
            )
        self = object.__new__(cls)
        self.modes = int(modes)
        self._probs = probs
        return self

    @property
    def probabilities(self) -> Mapping[FockIndex, float]:
        return MappingProxyType(self._probs)

    def probability(self, occ: Iterable[int]) -> float:
        return self._probs.get(tuple(occ), 0.0)

    def support_size(self) -> int:
        return len(self._probs)

    def max_total_photons(self) -> int:
        return max(total_photons(idx) for idx in self._probs)

    @classmethod
    def point_mass(cls, occ: Iterable[int]) -> "FockDiagonalState":
        idx = validate_index(occ)
        return cls(len(idx), {idx: 1.0})

    def __repr__(self) -> str:
        return f"FockDiagonalState(modes={self.modes}, support={len(self._probs)})"


class ProductPureState:
    """Tensor product of independent pure factors, kept factorized.

    Used for many-mode product messages whose joint support would be far too
    large to materialize. Factor order is mode order.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[PureState]) -> None:
        fs = tuple(factors)
        if not fs:
            raise ModeMismatchError("product state needs at least one factor")
        for f in fs:
            if not isinstance(f, PureState):
                raise TypeError(f"product factors must be PureState, got {type(f).__name__}")
        self.factors = fs

    @property
    def modes(self) -> int:
        return sum(f.modes for f in self.factors)

    def max_total_photons(self) -> int:
        return sum(f.max_total_photons() for f in self.factors)

    def joint_support_size(self) -> int:
        size = 1
        for f in self.factors:
            size *= f.support_size()
        return size

    def to_pure_state(self) -> PureState:
        """Materialize the joint ket. Errors if the support cap is exceeded."""
        if self.joint_support_size() > SUPPORT_CAP:
            raise SupportCapError(
                f"joint support {self.joint_support_size()} exceeds cap {SUPPORT_CAP}"
            )
        state = self.factors[0]
        for f in self.factors[1:]:
            state = tensor(state, f)
        return state

    def __repr__(self) -> str:
        return f"ProductPureState(factors={len(self.factors)}, modes={self.modes})"


@dataclass(frozen=True)
class DenseOperator:
    """Dense operator over an explicit ordered occupation basis.

    Only for small verification sweeps: the dimension cap is deliberate.
    Operators constructed here are used as observables or density operators,
    so Hermiticity is enforced at construction.
    """

    basis: tuple[FockIndex, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        basis = tuple(validate_index(occ) for occ in self.basis)
        object.__setattr__(self, "basis", basis)
        if len(basis) == 0:
            raise DimensionCapError("empty basis")
        if len(set(basis)) != len(basis):
            raise ValueError("basis contains duplicate occupation tuples")
        modes = len(basis[0])
        for occ in basis:
            if len(occ) != modes:
                raise ModeMismatchError("basis mixes different mode counts")
        if len(basis) > DENSE_DIM_CAP:
            raise DimensionCapError(
                f"dimension {len(basis)} exceeds cap {DENSE_DIM_CAP}"
            )
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (len(basis), len(basis)):
            raise ModeMismatchError(
                f"matrix shape {mat.shape} does not match basis size {len(basis)}"
            )
        if not np.allclose(mat, mat.conj().T, atol=NORMALIZATION_TOL, rtol=0.0):
            raise ValueError("matrix is not Hermitian within tolerance")
        mat = (mat + mat.conj().T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def modes(self) -> int:
        return len(self.basis[0])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def assert_density(self, tol: float = NORMALIZATION_TOL) -> None:
        """Validate trace one and positive semidefiniteness (within tol)."""
        tr = float(np.trace(self.matrix).real)
        if abs(tr - 1.0) > tol:
            raise NormalizationError(f"trace {tr!r} is not 1 within {tol}")
        eigs = np.linalg.eigvalsh(self.matrix)
        if eigs.min() < -tol:
            raise NormalizationError(f"negative eigenvalue {eigs.min()!r}")

    def cutoff_mask(self, cutoff: float) -> np.ndarray:
        """Boolean mask of basis elements with total photons <= cutoff."""
        return np.array([total_photons(occ) <= cutoff for occ in self.basis])

    @classmethod
    def from_pure_state(
        cls, state: PureState, basis: tuple[FockIndex, ...] | None = None
    ) -> "DenseOperator":
        if basis is None:
            basis = tuple(sorted(state.amplitudes, key=lambda occ: (total_photons(occ), occ)))
        vec = np.array([state.amplitude(occ) for occ in basis], dtype=complex)
        missing = 1.0 - float(np.vdot(vec, vec).real)
        if abs(missing) > NORMALIZATION_TOL:
            raise BasisMismatchError("basis does not cover the state's support")
        return cls(basis, np.outer(vec, vec.conj()))


State = Union[PureState, FockDiagonalState, DenseOperator, ProductPureState]


# ---------------------------------------------------------------------------
# Coherent-state construction (always explicitly truncated)

def poisson_tail(mean: float, cutoff: int) -> float:
    """Pr[X > cutoff] for X ~ Poisson(mean), summed directly from the tail."""
    if mean < 0:
        raise ValueError(f"mean must be nonnegative, got {mean}")
    if mean == 0.0:
        return 0.0
    # Sum upward from the first excluded term until terms stop mattering.
    log_term = -mean + (cutoff + 1) * math.log(mean) - math.lgamma(cutoff + 2)
    term = math.exp(log_term)
    total = 0.0
    k = cutoff + 1
    while term > total * 1e-18 + 1e-320:
        total += term
        k += 1
        term *= mean / k
    return total


def cutoff_for_tail(mean: float, tail_bound: float) -> int:
    """Smallest cutoff whose Poisson tail falls below ``tail_bound``."""
    if not 0.0 < tail_bound < 1.0:
        raise ValueError(f"tail_bound must be in (0, 1), got {tail_bound}")
    cutoff = 0
    while poisson_tail(mean, cutoff) >= tail_bound:
        cutoff += 1
        if cutoff > 10**6:
            raise ValueError("cutoff search did not converge")
    return cutoff


def coherent_state(alpha: complex, cutoff: int) -> PureState:
    """Single-mode coherent state truncated at photon number ``cutoff``.

    The result is renormalized; the discarded mass is
    ``poisson_tail(|alpha|**2, cutoff)`` and is the caller's responsibility
    to budget.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
    a = complex(alpha)
    amps: dict[FockIndex, complex] = {(0,): 1.0 + 0.0j}
    term = 1.0 + 0.0j
    for k in range(1, cutoff + 1):
        term = term * a / math.sqrt(k)
        amps[(k,)] = term
    return PureState(1, amps, normalize=True)


# ---------------------------------------------------------------------------
# Photon-number observables

def mean_photon_number(state: State) -> float:
    """Expectation of the total photon-number operator."""
    if isinstance(state, PureState):
        return sum(abs(c) ** 2 * total_photons(idx) for idx, c in state.amplitudes.items())
    if isinstance(state, FockDiagonalState):
        return sum(p * total_photons(idx) for idx, p in state.probabilities.items())
    if isinstance(state, ProductPureState):
        return sum(mean_photon_number(f) for f in state.factors)
    if isinstance(state, DenseOperator):
        diag = np.real(np.diagonal(state.matrix))
        return float(sum(p * total_photons(occ) for p, occ in zip(diag, state.basis)))
    raise TypeError(f"unsupported state type {type(state).__name__}")


def photon_number_distribution(state: State) -> dict[int, float]:
    """Distribution of the total photon number, as ``{n: Pr[N = n]}``.

    Zero-probability totals are omitted; values sum to one within 1e-9.
    """
    if isinstance(state, PureState):
        dist: dict[int, float] = {}
        for idx, c in state.amplitudes.items():
            n = total_photons(idx)
            dist[n] = dist.get(n, 0.0) + abs(c) ** 2
        return dist
    if isinstance(state, FockDiagonalState):
        dist = {}
        for idx, p in state.probabilities.items():
            n = total_photons(idx)
            dist[n] = dist.get(n, 0.0) + p
        return dist
    if isinstance(state, ProductPureState):
        dist = {0: 1.0}
        for f in state.factors:
            fdist = photon_number_distribution(f)
            out: dict[int, float] = {}
            for n1, p1 in dist.items():
                for n2, p2 in fdist.items():
                    out[n1 + n2] = out.get(n1 + n2, 0.0) + p1 * p2
            dist = out
        return dist
    if isinstance(state, DenseOperator):
        diag = np.real(np.diagonal(state.matrix))
        dist = {}
        for p, occ in zip(diag, state.basis):
            n = total_photons(occ)
            dist[n] = dist.get(n, 0.0) + float(p)
        return {n: p for n, p in dist.items() if p != 0.0}
    raise TypeError(f"unsupported state type {type(state).__name__}")


def tail_probability(state: State, threshold: float) -> float:
    """Pr[total photon number >= threshold]."""
    dist = photon_number_distribution(state)
    return sum(p for n, p in dist.items() if n >= threshold)


# ---------------------------------------------------------------------------
# Composition and metrics

def tensor(a: State, b: State) -> State:
    """Tensor product; mode counts add. Kinds must match."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        if a.support_size() * b.support_size() > SUPPORT_CAP:
            raise SupportCapError(
                f"tensor support {a.support_size() * b.support_size()} exceeds cap {SUPPORT_CAP}"
            )
        amps = {
            ia + ib: ca * cb
            for ia, ca in a.amplitudes.items()
            for ib, cb in b.amplitudes.items()
        }
        return PureState(a.modes + b.modes, amps)
    if isinstance(a, FockDiagonalState) and isinstance(b, FockDiagonalState):
        if a.support_size() * b.support_size() > SUPPORT_CAP:
            raise SupportCapError("tensor support exceeds cap")
        probs = {
            ia + ib: pa * pb
            for ia, pa in a.probabilities.items()
            for ib, pb in b.probabilities.items()
        }
        return FockDiagonalState(a.modes + b.modes, probs)
    if isinstance(a, ProductPureState) and isinstance(b, ProductPureState):
        return ProductPureState(a.factors + b.factors)
    if isinstance(a, ProductPureState) and isinstance(b, PureState):
        return ProductPureState(a.factors + (b,))
    if isinstance(a, PureState) and isinstance(b, ProductPureState):
        return ProductPureState((a,) + b.factors)
    raise TypeError(
        f"cannot tensor {type(a).__name__} with {type(b).__name__}"
    )


def overlap(a: PureState | ProductPureState, b: PureState | ProductPureState) -> complex:
    """Inner product <a|b> for pure (or factorized pure) states."""
    if isinstance(a, ProductPureState) and isinstance(b, ProductPureState):
        if len(a.factors) != len(b.factors):
            raise ModeMismatchError("product states have different factor counts")
        out = 1.0 + 0.0j
        for fa, fb in zip(a.factors, b.factors):
            out *= overlap(fa, fb)
        return out
    if not isinstance(a, PureState) or not isinstance(b, PureState):
        raise TypeError("overlap requires pure states")
    if a.modes != b.modes:
        raise ModeMismatchError(f"mode mismatch: {a.modes} vs {b.modes}")
    if a.support_size() <= b.support_size():
        return sum(amp.conjugate() * b.amplitude(idx) for idx, amp in a.amplitudes.items())
    return sum(a.amplitude(idx).conjugate() * amp for idx, amp in b.amplitudes.items())


def _sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    """Matrix square root of a Hermitian PSD matrix via eigendecomposition."""
    vals, vecs = np.linalg.eigh(matrix)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def _check_same_kind(a: State, b: State) -> None:
    if type(a) is not type(b):
        raise TypeError(
            f"operands must share a representation kind: {type(a).__name__} vs {type(b).__name__}"
        )


def trace_distance(a: State, b: State) -> float:
    """Trace distance (half the trace norm of the difference).

    Pure states use sqrt(1 - |<a|b>|^2); diagonal states use total variation;
    dense operators diagonalize the difference. Operands must share a kind.
    """
    _check_same_kind(a, b)
    if isinstance(a, (PureState, ProductPureState)):
        ov = abs(overlap(a, b))
        return math.sqrt(max(0.0, 1.0 - min(ov, 1.0) ** 2))
    if isinstance(a, FockDiagonalState):
        if a.modes != b.modes:
            raise ModeMismatchError(f"mode mismatch: {a.modes} vs {b.modes}")
        keys = set(a.probabilities) | set(b.probabilities)
        return 0.5 * sum(abs(a.probability(k) - b.probability(k)) for k in keys)
    if isinstance(a, DenseOperator):
        if a.basis != b.basis:
            raise BasisMismatchError("dense operands must share the same ordered basis")
        eigs = np.linalg.eigvalsh(a.matrix - b.matrix)
        return float(0.5 * np.abs(eigs).sum())
    raise TypeError(f"unsupported state type {type(a).__name__}")


def fidelity(a: State, b: State) -> float:
    """Uhlmann fidelity F = tr sqrt(sqrt(a) b sqrt(a)).

    Pure states reduce to |<a|b>|, diagonal states to the Bhattacharyya
    coefficient. Operands must share a kind.
    """
    _check_same_kind(a, b)
    if isinstance(a, (PureState, ProductPureState)):
        return min(abs(overlap(a, b)), 1.0)
    if isinstance(a, FockDiagonalState):
        if a.modes != b.modes:
            raise ModeMismatchError(f"mode mismatch: {a.modes} vs {b.modes}")
        keys = set(a.probabilities) & set(b.probabilities)
        return sum(math.sqrt(a.probability(k) * b.probability(k)) for k in keys)
    if isinstance(a, DenseOperator):
        if a.basis != b.basis:
            raise BasisMismatchError("dense operands must share the same ordered basis")
        sa = _sqrt_psd(a.matrix)
        sb = _sqrt_psd(b.matrix)
        return float(np.linalg.svd(sa @ sb, compute_uv=False).sum())
    raise TypeError(f"unsupported state type {type(a).__name__}")


# ---------------------------------------------------------------------------
# JSON serialization of sparse states

def state_to_json_dict(state: PureState | FockDiagonalState) -> dict:
    """Serialize a sparse state to the documented JSON layout.

    Pure states carry ``re``/``im`` per term; diagonal states carry ``p``.
    """
    if isinstance(state, PureState):
        terms = [
            {"occ": list(occ), "re": amp.real, "im": amp.imag}
            for occ, amp in sorted(state.amplitudes.items())
        ]
        return {"modes": state.modes, "kind": "pure", "terms": terms}
    if isinstance(state, FockDiagonalState):
        terms = [
            {"occ": list(occ), "p": p}
            for occ, p in sorted(state.probabilities.items())
        ]
        return {"modes": state.modes, "kind": "diagonal", "terms": terms}
    raise TypeError(f"cannot serialize {type(state).__name__}")


def state_from_json_dict(data: Mapping) -> PureState | FockDiagonalState:
    """Inverse of :func:`state_to_json_dict`.

    Restores the stored amplitudes/probabilities verbatim (indices and the
    norm are still validated), so a save/load cycle is exact bit for bit --
    in particular it never re-applies the raw-input amplitude pruning.
    """
    try:
        modes = data["modes"]
        kind = data["kind"]
        terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"state JSON missing field: {exc}") from exc
    if kind == "pure":
        amps = {}
        for t in terms:
            amps[tuple(t["occ"])] = complex(t["re"], t.get("im", 0.0))
        return PureState._restore(modes, amps)
    if kind == "diagonal":
        probs = {tuple(t["occ"]): t["p"] for t in terms}
        return FockDiagonalState._restore(modes, probs)
    raise ValueError(f"unknown state kind {kind!r}")
