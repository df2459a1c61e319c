"""Simultaneous-message protocols over optical messages, evaluated exactly.

A protocol is two encoders (input -> message state), a referee rule, and a
target function. Referee rules come in exactly two classes:

* projective tests in the occupation basis after a circuit of balanced
  beamsplitters (:class:`InterferenceVacuumReferee`,
  :class:`FockOutcomeReferee`), and
* stochastic maps on pairs of Fock-diagonal messages
  (:class:`DiagonalMapReferee`).

Both classes admit exact output-probability computation, so worst-case error
is evaluated without sampling noise. Adaptive referees (measure one message,
choose the next measurement) are deliberately not modeled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import ConfigError, ModeMismatchError
from .fock import (
    FockDiagonalState,
    FockIndex,
    ProductPureState,
    PureState,
    coherent_state,
    cutoff_for_tail,
    mean_photon_number,
    poisson_tail,
    tensor,
)

Message = Union[PureState, FockDiagonalState, ProductPureState]

#: Function tables are dense 2^n x 2^n arrays; larger n needs a callable target.
TABLE_N_CAP = 12
#: Brute-force deterministic-communication search is exponential in 2^n.
DCC_N_CAP = 3


# ---------------------------------------------------------------------------
# Target functions

class FunctionTable:
    """Dense table of a Boolean function f(x, y) on n-bit inputs."""

    def __init__(self, n: int, values) -> None:
        if not 1 <= n <= TABLE_N_CAP:
            raise ConfigError(f"table form requires 1 <= n <= {TABLE_N_CAP}, got n={n}")
        arr = np.asarray(values, dtype=np.uint8)
        size = 1 << n
        if arr.shape != (size, size):
            raise ConfigError(
                f"values must have shape ({size}, {size}) for n={n}, got {arr.shape}"
            )
        if not np.isin(arr, (0, 1)).all():
            raise ConfigError("table values must be 0 or 1")
        arr.setflags(write=False)
        self.n = n
        self.values = arr

    def value(self, x: int, y: int) -> int:
        return int(self.values[x, y])

    @classmethod
    def constant(cls, n: int, bit: int) -> "FunctionTable":
        size = 1 << n
        return cls(n, np.full((size, size), int(bit), dtype=np.uint8))


def equality_function(n: int) -> FunctionTable:
    """Equality on n-bit strings as a function table (n <= 12)."""
    return FunctionTable(n, np.eye(1 << n, dtype=np.uint8))


def equality_predicate(x: int, y: int) -> int:
    """Equality as a callable target, for n beyond table form."""
    return int(x == y)


# ---------------------------------------------------------------------------
# Codes (pluggable input -> codeword maps for fingerprinting encoders)

@dataclass(frozen=True)
class RepetitionCode:
    """Each input bit repeated ``repeats`` times; distance = repeats."""

    n: int
    repeats: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.repeats < 1:
            raise ConfigError(f"repetition code needs n >= 1 and repeats >= 1")

    @property
    def m(self) -> int:
        return self.n * self.repeats

    @property
    def min_distance(self) -> int:
        return self.repeats

    def encode(self, x: int) -> tuple[int, ...]:
        bits = [(x >> i) & 1 for i in range(self.n)]
        return tuple(b for b in bits for _ in range(self.repeats))


@dataclass(frozen=True)
class IdentityCode:
    """Codeword = the input bits themselves."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError("identity code needs n >= 1")

    @property
    def m(self) -> int:
        return self.n

    @property
    def min_distance(self) -> int:
        return 1

    def encode(self, x: int) -> tuple[int, ...]:
        return tuple((x >> i) & 1 for i in range(self.n))


@dataclass(frozen=True)
class XorFoldCode:
    """Fold n input bits into m <= n positions by XOR.

    A lossy fingerprint with codeword weight (hence photon budget) at most m;
    used to exercise counting at short message lengths, not for correctness.
    """

    n: int
    m: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise ConfigError(f"xor-fold code needs 1 <= m <= n, got m={self.m}, n={self.n}")

    @property
    def min_distance(self) -> int:
        return 1

    def encode(self, x: int) -> tuple[int, ...]:
        out = [0] * self.m
        for i in range(self.n):
            out[i % self.m] ^= (x >> i) & 1
        return tuple(out)


Code = Union[RepetitionCode, IdentityCode, XorFoldCode]


# ---------------------------------------------------------------------------
# Balanced beamsplitter on sparse kets

@lru_cache(maxsize=None)
def _bs_coefficients(n_in: int, m_in: int) -> tuple[tuple[int, int, float], ...]:
    """Output terms (p, q, coeff) of |n_in, m_in> under a balanced beamsplitter.

    Convention: input creation operators map to (c + d)/sqrt(2) and
    (c - d)/sqrt(2), so the second output port carries the difference.
    """
    if n_in + m_in > 512:
        raise ConfigError(f"beamsplitter input too energetic: {n_in}+{m_in} photons")
    kraw: dict[int, int] = {}
    for j in range(n_in + 1):
        cj = math.comb(n_in, j)
        for k in range(m_in + 1):
            sign = -1 if (m_in - k) % 2 else 1
            p = j + k
            kraw[p] = kraw.get(p, 0) + sign * cj * math.comb(m_in, k)
    out = []
    den = math.factorial(n_in) * math.factorial(m_in) * (1 << (n_in + m_in))
    for p, kval in sorted(kraw.items()):
        if kval == 0:
            continue
        q = n_in + m_in - p
        coeff = kval * math.sqrt(math.factorial(p) * math.factorial(q) / den)
        out.append((p, q, coeff))
    return tuple(out)


def apply_beamsplitter(state: PureState, mode_i: int, mode_j: int) -> PureState:
    """Apply a balanced beamsplitter to two modes of a sparse ket.

    Photon number is conserved; the output is unitary-normalized (validated
    by construction). Mode ``mode_j`` receives the difference port.
    """
    if mode_i == mode_j:
        raise ModeMismatchError("beamsplitter needs two distinct modes")
    for m in (mode_i, mode_j):
        if not 0 <= m < state.modes:
            raise ModeMismatchError(f"mode {m} out of range for {state.modes} modes")
    out: dict[FockIndex, complex] = {}
    for idx, amp in state.amplitudes.items():
        for p, q, coeff in _bs_coefficients(idx[mode_i], idx[mode_j]):
            new = list(idx)
            new[mode_i] = p
            new[mode_j] = q
            key = tuple(new)
            prev = out.get(key)
            out[key] = amp * coeff if prev is None else prev + amp * coeff
    return PureState(state.modes, out)


def beamsplitter_pair(a: PureState, b: PureState) -> PureState:
    """Interfere two single-mode kets; returns the two-mode output state."""
    if a.modes != 1 or b.modes != 1:
        raise ModeMismatchError("beamsplitter_pair takes single-mode states")
    return apply_beamsplitter(tensor(a, b), 0, 1)


# ---------------------------------------------------------------------------
# Referees

def _state_key(state: PureState) -> tuple:
    return (state.modes, tuple(sorted(state.amplitudes.items())))


def _clamp01(p: float) -> float:
    return 0.0 if p < 0.0 else (1.0 if p > 1.0 else p)


class InterferenceVacuumReferee:
    """Interferes Alice's mode i with Bob's mode i on balanced beamsplitters
    and outputs 1 ("equal") exactly when every difference port is dark.

    Product messages are handled factor by factor (the acceptance event
    factorizes over mode pairs); entangled messages fall back to the joint
    sparse computation. Both paths compute the same probability.
    """

    def __init__(self) -> None:
        self._pair_cache: dict[tuple, float] = {}

    def _pair_dark_probability(self, fa: PureState, fb: PureState) -> float:
        key = (_state_key(fa), _state_key(fb))
        hit = self._pair_cache.get(key)
        if hit is not None:
            return hit
        out = beamsplitter_pair(fa, fb)
        p = sum(abs(amp) ** 2 for idx, amp in out.amplitudes.items() if idx[1] == 0)
        p = _clamp01(p)
        self._pair_cache[key] = p
        return p

    def output_one_probability(self, a: Message, b: Message) -> float:
        if isinstance(a, ProductPureState) and isinstance(b, ProductPureState):
            if len(a.factors) != len(b.factors):
                raise ModeMismatchError("messages have different factor counts")
            if all(f.modes == 1 for f in a.factors + b.factors):
                p = 1.0
                for fa, fb in zip(a.factors, b.factors):
                    p *= self._pair_dark_probability(fa, fb)
                return _clamp01(p)
        return self._joint_probability(a, b)

    def _joint_probability(self, a: Message, b: Message) -> float:
        if isinstance(a, ProductPureState):
            a = a.to_pure_state()
        if isinstance(b, ProductPureState):
            b = b.to_pure_state()
        if not isinstance(a, PureState) or not isinstance(b, PureState):
            raise TypeError("interference referee requires pure messages")
        if a.modes != b.modes:
            raise ModeMismatchError(f"message mode mismatch: {a.modes} vs {b.modes}")
        m = a.modes
        joint = tensor(a, b)
        for i in range(m):
            joint = apply_beamsplitter(joint, i, m + i)
        p = sum(
            abs(amp) ** 2
            for idx, amp in joint.amplitudes.items()
            if all(n == 0 for n in idx[m:])
        )
        return _clamp01(p)


class FockOutcomeReferee:
    """Measures the joint message in the occupation basis and post-processes.

    ``decision`` maps the joint occupation tuple (Alice's modes then Bob's)
    to the probability of outputting 1.
    """

    def __init__(self, decision: Callable[[FockIndex], float]) -> None:
        self.decision = decision

    def output_one_probability(self, a: Message, b: Message) -> float:
        if isinstance(a, ProductPureState):
            a = a.to_pure_state()
        if isinstance(b, ProductPureState):
            b = b.to_pure_state()
        if not isinstance(a, PureState) or not isinstance(b, PureState):
            raise TypeError("occupation-basis referee requires pure messages")
        joint = tensor(a, b)
        p = sum(
            abs(amp) ** 2 * float(self.decision(idx))
            for idx, amp in joint.amplitudes.items()
        )
        return _clamp01(p)


def equal_counts_decision(m: int) -> Callable[[FockIndex], float]:
    """Decision rule: output 1 when both halves show identical counts."""

    def decide(idx: FockIndex) -> float:
        return 1.0 if idx[:m] == idx[m:] else 0.0

    return decide


class DiagonalMapReferee:
    """Stochastic map on pairs of Fock-diagonal messages.

    ``rule`` maps a pair of occupation tuples to the probability of output 1.
    """

    def __init__(self, rule: Callable[[FockIndex, FockIndex], float]) -> None:
        self.rule = rule

    def output_one_probability(self, a: Message, b: Message) -> float:
        if not isinstance(a, FockDiagonalState) or not isinstance(b, FockDiagonalState):
            raise TypeError("diagonal referee requires Fock-diagonal messages")
        p = 0.0
        for ia, pa in a.probabilities.items():
            for ib, pb in b.probabilities.items():
                p += pa * pb * float(self.rule(ia, ib))
        return _clamp01(p)


# ---------------------------------------------------------------------------
# Protocols

@dataclass(frozen=True)
class SmpProtocol:
    """One-round simultaneous-message protocol with exact referee evaluation.

    ``mu`` is the declared per-party maximum mean photon number; every
    encoder output is checked against it at construction (for n in table
    range). ``message_tail`` records mass discarded when messages were built
    from pre-truncated infinite states; it feeds error budgets downstream.
    """

    name: str
    n: int
    m: int
    mu: float
    alice_encoder: Callable[[int], Message]
    bob_encoder: Callable[[int], Message]
    referee: object
    target: FunctionTable | Callable[[int, int], int]
    message_tail: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.mu < 0.0:
            raise ConfigError(f"mu must be >= 0, got {self.mu}")
        if not hasattr(self.referee, "output_one_probability"):
            raise ConfigError("referee must provide output_one_probability")
        if isinstance(self.target, FunctionTable) and self.target.n != self.n:
            raise ConfigError(
                f"target table is for n={self.target.n}, protocol has n={self.n}"
            )
        if self.n <= TABLE_N_CAP:
            for x in range(1 << self.n):
                for enc, party in ((self.alice_encoder, "alice"), (self.bob_encoder, "bob")):
                    msg = enc(x)
                    if msg.modes != self.m:
                        raise ConfigError(
                            f"{party} encoder output for x={x} has {msg.modes} modes, expected {self.m}"
                        )
                    mean = mean_photon_number(msg)
                    if mean > self.mu + 1e-9:
                        raise ConfigError(
                            f"{party} encoder output for x={x} has mean photon number "
                            f"{mean} above mu={self.mu}"
                        )

    def target_value(self, x: int, y: int) -> int:
        if isinstance(self.target, FunctionTable):
            return self.target.value(x, y)
        return int(self.target(x, y))


@dataclass(frozen=True)
class ErrorReport:
    """Per-pair error probabilities of a protocol run.

    ``pair_errors`` rows are (x, y, f, p_error) in ascending (x, y) order;
    the CSV serialization uses exactly those columns.
    """

    protocol_name: str
    n: int
    mode: str
    pair_errors: tuple[tuple[int, int, int, float], ...]
    worst_error: float
    worst_pair: tuple[int, int]
    seed: int | None = None
    mean_error: float = 0.0
    stderr_mean: float = 0.0

    def csv_lines(self) -> list[str]:
        lines = ["x,y,f,p_error"]
        for x, y, f, p in self.pair_errors:
            lines.append(f"{x},{y},{f},{p!r}")
        return lines


def _pair_error(protocol: SmpProtocol, x: int, y: int) -> tuple[int, int, int, float]:
    f = protocol.target_value(x, y)
    p_one = protocol.referee.output_one_probability(
        protocol.alice_encoder(x), protocol.bob_encoder(y)
    )
    p_error = 1.0 - p_one if f == 1 else p_one
    return (x, y, f, _clamp01(p_error))


def evaluate_error(
    protocol: SmpProtocol,
    *,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    jobs: int = 1,
) -> ErrorReport:
    """Exact worst-case error of a protocol.

    Exhaustive mode enumerates all 4^n input pairs (n <= 12 enforced).
    Sampled mode draws ``samples`` pairs from a deterministic per-seed stream
    and evaluates each sampled pair exactly; it reports the max observed error
    plus the mean and its standard error. ``jobs`` maps pairs over a thread
    pool; reports are identical for every jobs value.
    """
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    if mode == "exhaustive":
        if protocol.n > TABLE_N_CAP:
            raise ConfigError(
                f"exhaustive evaluation requires n <= {TABLE_N_CAP}, got n={protocol.n}"
            )
        size = 1 << protocol.n
        pairs = [(x, y) for x in range(size) for y in range(size)]
        used_seed = None
    elif mode == "sampled":
        if samples is None or samples < 1:
            raise ConfigError("sampled mode requires samples >= 1")
        if seed is None:
            raise ConfigError("sampled mode requires an explicit seed")
        rng = np.random.default_rng([int(seed), protocol.n])
        size = 1 << protocol.n
        xs = rng.integers(0, size, size=samples)
        ys = rng.integers(0, size, size=samples)
        pairs = [(int(x), int(y)) for x, y in zip(xs, ys)]
        used_seed = int(seed)
    else:
        raise ConfigError(f"unknown evaluation mode {mode!r}")

    if jobs == 1:
        rows = [_pair_error(protocol, x, y) for x, y in pairs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda xy: _pair_error(protocol, *xy), pairs))

    worst = max(rows, key=lambda r: (r[3], -r[0], -r[1]))
    errors = [r[3] for r in rows]
    mean = float(np.mean(errors))
    stderr = float(np.std(errors, ddof=1) / math.sqrt(len(errors))) if len(errors) > 1 else 0.0
    ordered = tuple(sorted(rows, key=lambda r: (r[0], r[1])))
    return ErrorReport(
        protocol_name=protocol.name,
        n=protocol.n,
        mode=mode,
        pair_errors=ordered,
        worst_error=worst[3],
        worst_pair=(worst[0], worst[1]),
        seed=used_seed,
        mean_error=mean,
        stderr_mean=stderr,
    )


# ---------------------------------------------------------------------------
# Concrete protocols

def coherent_accept_probability(mu_total: float, m: int, distance: int) -> float:
    """Closed-form dark-difference-port probability for phase-encoded
    coherent fingerprints at codeword distance ``distance``:
    exp(-2 * (mu_total/m) * distance). Cross-checked against the exact
    interference computation in the test suite."""
    return math.exp(-2.0 * (mu_total / m) * distance)


def coherent_fingerprint_protocol(
    n: int,
    code: Code,
    mu_total: float,
    *,
    tail_bound: float = 1e-10,
) -> SmpProtocol:
    """Phase-encoded coherent-state fingerprinting for equality.

    Each party spreads ``mu_total`` mean photons over the code's m modes with
    per-mode amplitude alpha = sqrt(mu_total/m), sign (-1)^codeword_bit. The
    referee pairs matching modes on balanced beamsplitters and declares
    "equal" exactly when no difference port shows a photon. Coherent factors
    are pre-truncated so the whole message discards mass below ``tail_bound``
    (recorded on the protocol).
    """
    if code.n != n:
        raise ConfigError(f"code encodes n={code.n} bits, protocol wants n={n}")
    if mu_total < 0.0:
        raise ConfigError(f"mu_total must be >= 0, got {mu_total}")
    m = code.m
    alpha = math.sqrt(mu_total / m)
    per_mode_tail = tail_bound / m
    cutoff = cutoff_for_tail(alpha**2, per_mode_tail) if mu_total > 0 else 0
    plus = coherent_state(alpha, cutoff)
    minus = coherent_state(-alpha, cutoff)
    actual_tail = poisson_tail(alpha**2, cutoff)
    message_tail = 1.0 - (1.0 - actual_tail) ** m

    codewords = {}

    def factors_for(x: int) -> ProductPureState:
        if x not in codewords:
            codewords[x] = code.encode(x)
        word = codewords[x]
        return ProductPureState(tuple(minus if bit else plus for bit in word))

    target: FunctionTable | Callable[[int, int], int]
    target = equality_function(n) if n <= TABLE_N_CAP else equality_predicate
    return SmpProtocol(
        name=f"qfp-n{n}-m{m}",
        n=n,
        m=m,
        mu=mu_total,
        alice_encoder=factors_for,
        bob_encoder=factors_for,
        referee=InterferenceVacuumReferee(),
        target=target,
        message_tail=message_tail,
    )


def trivial_classical_protocol(n: int, code: Code | None = None) -> SmpProtocol:
    """Both parties send their (encoded) bit string as a point-mass diagonal
    state; the referee outputs 1 exactly when the two tuples agree.

    With the identity code this decides equality with zero error at mu <= n.
    With a short lossy code it exercises the counting path: every message
    lives in the subspace of occupation tuples with total at most the
    maximum codeword weight.
    """
    if code is None:
        code = IdentityCode(n)
    if code.n != n:
        raise ConfigError(f"code encodes n={code.n} bits, protocol wants n={n}")

    def encoder(x: int) -> FockDiagonalState:
        return FockDiagonalState.point_mass(code.encode(x))

    if n <= TABLE_N_CAP:
        mu = float(max(sum(code.encode(x)) for x in range(1 << n)))
    else:
        mu = float(code.m)
    target: FunctionTable | Callable[[int, int], int]
    target = equality_function(n) if n <= TABLE_N_CAP else equality_predicate
    return SmpProtocol(
        name=f"classical-trivial-n{n}-m{code.m}",
        n=n,
        m=code.m,
        mu=mu,
        alice_encoder=encoder,
        bob_encoder=encoder,
        referee=DiagonalMapReferee(lambda ia, ib: 1.0 if ia == ib else 0.0),
        target=target,
    )


# ---------------------------------------------------------------------------
# Deterministic communication complexity (exact, brute force)

def deterministic_cc_matrix(values: Sequence[Sequence[int]]) -> int:
    """Exact deterministic communication cost of an arbitrary 0/1 matrix.

    Convention: a monochromatic rectangle costs 0; otherwise one party sends
    one bit splitting its side, costing 1 plus the worse branch, minimized
    over senders and bipartitions. The final answer bit is not charged.
    Rows and columns are capped at 8 each.
    """
    vals = tuple(tuple(int(v) for v in row) for row in values)
    n_rows = len(vals)
    if n_rows == 0 or any(len(row) != len(vals[0]) for row in vals):
        raise ConfigError("values must be a nonempty rectangular matrix")
    n_cols = len(vals[0])
    if n_rows > 8 or n_cols > 8:
        raise ConfigError(f"matrix {n_rows}x{n_cols} exceeds the 8x8 search cap")
    for row in vals:
        for v in row:
            if v not in (0, 1):
                raise ConfigError("matrix entries must be 0 or 1")

    memo: dict[tuple[int, int], int] = {}

    def bits(mask: int) -> list[int]:
        return [i for i in range(8) if mask >> i & 1]

    def cost(rmask: int, cmask: int) -> int:
        key = (rmask, cmask)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rows = bits(rmask)
        cols = bits(cmask)
        first = vals[rows[0]][cols[0]]
        if all(vals[i][j] == first for i in rows for j in cols):
            memo[key] = 0
            return 0
        best = 1 << 30
        for mask, is_row in ((rmask, True), (cmask, False)):
            if mask & (mask - 1) == 0:
                continue  # a single line cannot be split
            low = mask & -mask
            # Canonical bipartitions: the half containing the lowest bit.
            sub = (mask - 1) & mask
            while sub:
                if sub & low and sub != mask:
                    rest = mask ^ sub
                    if is_row:
                        branch = max(cost(sub, cmask), cost(rest, cmask))
                    else:
                        branch = max(cost(rmask, sub), cost(rmask, rest))
                    if 1 + branch < best:
                        best = 1 + branch
                sub = (sub - 1) & mask
        memo[key] = best
        return best

    return cost((1 << n_rows) - 1, (1 << n_cols) - 1)


def bruteforce_deterministic_cc(table: FunctionTable) -> int:
    """Exact deterministic communication complexity of a function table.

    See :func:`deterministic_cc_matrix` for the depth convention. Limited to
    n <= 3 (an 8x8 table).
    """
    if table.n > DCC_N_CAP:
        raise ConfigError(
            f"brute-force search requires n <= {DCC_N_CAP}, got n={table.n}"
        )
    return deterministic_cc_matrix(table.values.tolist())


# ---------------------------------------------------------------------------
# Protocol descriptions (JSON)

def _load_code(data, n: int) -> Code:
    if data is None:
        return IdentityCode(n)
    if not isinstance(data, Mapping):
        raise ConfigError("field 'code' must be an object")
    kind = data.get("kind")
    if kind == "repetition":
        repeats = data.get("repeats")
        if not isinstance(repeats, int) or repeats < 1:
            raise ConfigError("field 'code.repeats' must be a positive integer")
        return RepetitionCode(n, repeats)
    if kind == "identity":
        return IdentityCode(n)
    if kind == "xor-fold":
        m = data.get("m")
        if not isinstance(m, int) or m < 1:
            raise ConfigError("field 'code.m' must be a positive integer")
        return XorFoldCode(n, m)
    raise ConfigError(f"field 'code.kind' must be repetition|identity|xor-fold, got {kind!r}")


def load_protocol(data: Mapping) -> SmpProtocol:
    """Build a protocol from its JSON description.

    Layout: ``{"type": "qfp"|"classical-trivial", "n": ..., "m": ...,
    "mu": ..., "code": {...}, "seed": ...}``. ``m`` and ``seed`` are
    optional; when ``m`` is present it must match the code's length.
    """
    if not isinstance(data, Mapping):
        raise ConfigError("protocol spec must be a JSON object")
    ptype = data.get("type")
    if ptype not in ("qfp", "classical-trivial"):
        raise ConfigError(f"field 'type' must be qfp|classical-trivial, got {ptype!r}")
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        raise ConfigError("field 'n' must be a positive integer")
    if ptype == "qfp":
        default_code = {"kind": "repetition", "repeats": 3}
        code = _load_code(data.get("code", default_code), n)
        mu = data.get("mu")
        if not isinstance(mu, (int, float)) or isinstance(mu, bool) or mu < 0:
            raise ConfigError("field 'mu' must be a nonnegative number")
        protocol = coherent_fingerprint_protocol(n, code, float(mu))
    else:
        code = _load_code(data.get("code"), n)
        protocol = trivial_classical_protocol(n, code)
    m = data.get("m")
    if m is not None and m != protocol.m:
        raise ConfigError(f"field 'm' is {m}, but the code produces m={protocol.m}")
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        raise ConfigError("field 'seed' must be a nonnegative integer")
    return protocol
