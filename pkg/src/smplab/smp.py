"""Simultaneous message passing protocols and their evaluation.

A protocol fixes, for every Alice input, either a distribution over classical
messages or a quantum state, and for every Bob input a distribution over
classical messages; a referee turns the two messages into an output.  Public
randomness, when present, is an explicit coin space visible to all three
parties.  Evaluation is either exact (full enumeration of coin and message
supports, within a term budget) or Monte Carlo with per-trial keyed
generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import EnumerationCapError
from .qcore import (
    DensityMatrix,
    MeasurementOperator,
    ProductState,
    PureState,
    acceptance_probability,
)
from .rng import derive_seed, trial_rng

__all__ = [
    "CoinSpace",
    "Cost",
    "SmpProtocol",
    "TableReferee",
    "OperatorReferee",
    "FunctionTable",
    "RelationTable",
    "exact_acceptance",
    "sampled_acceptance",
    "worst_case_error",
    "protocol_cost",
    "empirical_success",
    "SuccessReport",
    "wilson_interval",
    "fix_coin",
    "uniform_int_coin",
    "subset_coin",
    "validate_distribution",
    "sample_from_distribution",
    "bitstring",
]

Distribution = Mapping[str, float]
QuantumPayload = DensityMatrix | PureState | ProductState


def bitstring(value: int, width: int) -> str:
    """``value`` as ``width`` binary characters, most significant first."""
    if width == 0:
        return ""
    return format(value, f"0{width}b")


def validate_distribution(dist: Distribution, length: int, tol: Tolerances = DEFAULT) -> None:
    total = 0.0
    for msg, p in dist.items():
        if len(msg) > length or set(msg) - {"0", "1"}:
            raise ValueError(f"message {msg!r} not a bitstring within declared length {length}")
        if p < 0:
            raise ValueError(f"negative probability {p}")
        total += p
    if abs(total - 1.0) > tol.distribution:
        raise ValueError(f"distribution sums to {total}, not 1")


def sample_from_distribution(dist: Distribution, rng: np.random.Generator) -> str:
    keys = list(dist)
    if len(keys) == 1:
        return keys[0]
    probs = np.fromiter(dist.values(), dtype=float)
    return keys[rng.choice(len(keys), p=probs / probs.sum())]


@dataclass(frozen=True)
class CoinSpace:
    """Public randomness: sampleable always, enumerable when ``size`` is known."""

    sampler: Callable[[np.random.Generator], object]
    size: int | None = None
    outcomes: Callable[[], Iterable[tuple[object, float]]] | None = None

    def enumerate(self) -> Iterable[tuple[object, float]]:
        if self.outcomes is None:
            raise EnumerationCapError("coin space is not enumerable; use sampling")
        return self.outcomes()


def uniform_int_coin(size: int) -> CoinSpace:
    """Uniform coin over range(size), enumerable."""

    def outcomes() -> Iterator[tuple[int, float]]:
        p = 1.0 / size
        for v in range(size):
            yield v, p

    return CoinSpace(
        sampler=lambda rng: int(rng.integers(0, size)),
        size=size,
        outcomes=outcomes,
    )


def subset_coin(n: int, k: int, enumerate_cap: int = 4096) -> CoinSpace:
    """Uniform random size-k subset of range(n), as a sorted tuple.

    Enumerable only when the number of subsets is at most ``enumerate_cap``.
    """
    count = math.comb(n, k)

    def sampler(rng: np.random.Generator) -> tuple[int, ...]:
        return tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))

    if count <= enumerate_cap:
        import itertools

        def outcomes() -> Iterator[tuple[tuple[int, ...], float]]:
            p = 1.0 / count
            for combo in itertools.combinations(range(n), k):
                yield combo, p

        return CoinSpace(sampler=sampler, size=count, outcomes=outcomes)
    return CoinSpace(sampler=sampler)


@dataclass(frozen=True)
class Cost:
    bits: int = 0
    qubits: int = 0

    @property
    def total(self) -> int:
        return self.bits + self.qubits


@dataclass(frozen=True)
class TableReferee:
    """Classical referee: acceptance probability per message pair."""

    fn: Callable[..., float]
    needs_coin: bool = False

    def accept_probability(self, a: str, b: str, coin=None) -> float:
        return self.fn(a, b, coin) if self.needs_coin else self.fn(a, b)


@dataclass(frozen=True)
class OperatorReferee:
    """Canonical quantum referee: one two-outcome measurement operator per Bob message."""

    operators: Mapping[str, MeasurementOperator]

    def __post_init__(self):
        object.__setattr__(self, "operators", dict(self.operators))

    def accept_probability(self, state: QuantumPayload, b: str, coin=None) -> float:
        if isinstance(state, PureState):
            state = state.density()
        if not isinstance(state, DensityMatrix):
            raise TypeError("operator referee needs a density matrix message")
        return acceptance_probability(self.operators[b], state)

    def operator_list(self, bob_bits: int) -> list[MeasurementOperator]:
        """Operators ordered by Bob message value; requires a full family."""
        want = [bitstring(i, bob_bits) for i in range(2**bob_bits)]
        missing = [b for b in want if b not in self.operators]
        if missing:
            raise ValueError(f"referee family missing operators for {missing[:4]}")
        return [self.operators[b] for b in want]


@dataclass(frozen=True)
class SmpProtocol:
    """One simultaneous message passing protocol.

    ``alice_strategy(x, coin)`` returns a message distribution or a quantum
    payload; ``bob_strategy(y, coin)`` returns a message distribution.  The
    referee exposes ``accept_probability(a, b, coin)`` for decision protocols
    and/or ``output_distribution(a, b, coin)`` / ``sample_output(a, b, rng,
    coin)`` for relational ones.  ``coin`` is None in private-coin protocols.
    """

    name: str
    alice_strategy: Callable[[object, object], Distribution | QuantumPayload]
    bob_strategy: Callable[[object, object], Distribution]
    referee: object
    alice_cost: Cost
    bob_cost: Cost
    coin: CoinSpace | None = None
    alice_inputs: tuple | None = None
    bob_inputs: tuple | None = None
    quantum: bool = False

    @property
    def coin_mode(self) -> str:
        return "public" if self.coin is not None else "private"


@dataclass(frozen=True)
class FunctionTable:
    """Finite, possibly partial, function on pairs of inputs.

    ``values`` maps exactly the promise domain; querying outside it raises.
    """

    alice_inputs: tuple
    bob_inputs: tuple
    values: Mapping[tuple, object]

    def __post_init__(self):
        object.__setattr__(self, "alice_inputs", tuple(self.alice_inputs))
        object.__setattr__(self, "bob_inputs", tuple(self.bob_inputs))
        object.__setattr__(self, "values", dict(self.values))

    @property
    def domain(self) -> list[tuple]:
        return list(self.values)

    @property
    def is_total(self) -> bool:
        return len(self.values) == len(self.alice_inputs) * len(self.bob_inputs)

    def __call__(self, x, y):
        try:
            return self.values[(x, y)]
        except KeyError:
            raise ValueError(f"({x!r}, {y!r}) outside the promise domain") from None


@dataclass(frozen=True)
class RelationTable:
    """Nonempty valid-output sets per input pair, plus an input distribution."""

    valid: Mapping[tuple, frozenset]
    mu: Mapping[tuple, Fraction | float]

    def __post_init__(self):
        valid = {k: frozenset(v) for k, v in self.valid.items()}
        mu = dict(self.mu)
        total = sum(mu.values())
        if abs(float(total) - 1.0) > DEFAULT.distribution:
            raise ValueError(f"mu sums to {total}, not 1")
        for pair, weight in mu.items():
            if weight and not valid.get(pair):
                raise ValueError(f"empty valid set on the support of mu at {pair}")
        object.__setattr__(self, "valid", valid)
        object.__setattr__(self, "mu", mu)

    @property
    def support(self) -> list[tuple]:
        return [pair for pair, w in self.mu.items() if w]


def _accept_for_terms(p: SmpProtocol, payload, b: str, coin) -> float:
    ref = p.referee
    if hasattr(ref, "accept_probability"):
        return ref.accept_probability(payload, b, coin)
    dist = ref.output_distribution(payload, b, coin)
    return float(dist.get(1, 0.0))


def exact_acceptance(p: SmpProtocol, x, y, tol: Tolerances = DEFAULT) -> float:
    """Exact acceptance probability: full expectation over coin and messages.

    Deterministic; raises :class:`EnumerationCapError` when the coin space is
    not enumerable or the term count would exceed ``tol.enum_cap``.
    """
    if p.coin is not None:
        if p.coin.size is not None and p.coin.size > tol.enum_cap:
            raise EnumerationCapError(
                f"coin space of size {p.coin.size} exceeds term budget {tol.enum_cap}"
            )
        coin_terms: Iterable[tuple[object, float]] = p.coin.enumerate()
    else:
        coin_terms = [(None, 1.0)]

    total = 0.0
    terms = 0
    for coin, cp in coin_terms:
        a_payload = p.alice_strategy(x, coin)
        b_dist = p.bob_strategy(y, coin)
        validate_distribution(b_dist, p.bob_cost.bits, tol)
        if isinstance(a_payload, Mapping):
            validate_distribution(a_payload, p.alice_cost.bits, tol)
            terms += len(a_payload) * len(b_dist)
            if terms > tol.enum_cap:
                raise EnumerationCapError(f"term count exceeds budget {tol.enum_cap}")
            for a, pa in a_payload.items():
                for b, pb in b_dist.items():
                    total += cp * pa * pb * p.referee.accept_probability(a, b, coin)
        else:
            terms += len(b_dist)
            if terms > tol.enum_cap:
                raise EnumerationCapError(f"term count exceeds budget {tol.enum_cap}")
            for b, pb in b_dist.items():
                total += cp * pb * _accept_for_terms(p, a_payload, b, coin)
    return min(1.0, max(0.0, total))


def _sample_output_once(p: SmpProtocol, x, y, rng: np.random.Generator, info: dict | None = None):
    coin = p.coin.sampler(rng) if p.coin is not None else None
    a_payload = p.alice_strategy(x, coin)
    if isinstance(a_payload, Mapping):
        a_payload = sample_from_distribution(a_payload, rng)
    b = sample_from_distribution(p.bob_strategy(y, coin), rng)
    ref = p.referee
    if hasattr(ref, "sample_output"):
        return ref.sample_output(a_payload, b, rng, coin, info=info)
    accept = ref.accept_probability(a_payload, b, coin)
    return 1 if rng.random() < accept else 0


def wilson_interval(successes: int, trials: int) -> tuple[float, float, float]:
    """(point estimate, lower, upper) 95% Wilson score interval."""
    z = 1.959963984540054
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return phat, max(0.0, center - half), min(1.0, center + half)


def sampled_acceptance(
    p: SmpProtocol, x, y, trials: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo acceptance estimate and its 95% Wilson half-width.

    Trial ``t`` draws from a generator keyed by (seed, t), so estimates are
    reproducible and independent of evaluation order.
    """
    if trials < 1:
        raise ValueError("need trials >= 1")
    successes = 0
    for t in range(trials):
        out = _sample_output_once(p, x, y, trial_rng(seed, t))
        successes += 1 if out == 1 else 0
    phat, lo, hi = wilson_interval(successes, trials)
    return phat, (hi - lo) / 2


def worst_case_error(p: SmpProtocol, f: FunctionTable, tol: Tolerances = DEFAULT) -> float:
    """Largest |f(x,y) - acceptance| over the promise domain, exactly."""
    worst = 0.0
    for x, y in f.domain:
        worst = max(worst, abs(float(f(x, y)) - exact_acceptance(p, x, y, tol)))
    return worst


def protocol_cost(p: SmpProtocol) -> tuple[int, int, int]:
    """(alice, bob, total) message lengths; quantum messages count qubits."""
    a = p.alice_cost.total
    b = p.bob_cost.total
    return a, b, a + b


@dataclass(frozen=True)
class SuccessReport:
    successes: int
    trials: int
    rate: float
    wilson_low: float
    wilson_high: float
    per_pair_rates: tuple[float, ...]
    abstentions: int


def empirical_success(
    p: SmpProtocol,
    f: FunctionTable | Callable[[object, object], int],
    pairs: Iterable[tuple],
    trials_per_pair: int,
    seed: int,
) -> SuccessReport:
    """Fraction of trials whose referee output equals the target value.

    Each pair gets its own derived seed; each trial its own keyed generator.
    """
    lookup = f if callable(f) else f.__call__
    pair_list = list(pairs)
    successes = 0
    abstained = 0
    per_pair = []
    for i, (x, y) in enumerate(pair_list):
        want = lookup(x, y)
        pair_seed = derive_seed(seed, i)
        hits = 0
        for t in range(trials_per_pair):
            info: dict = {}
            out = _sample_output_once(p, x, y, trial_rng(pair_seed, t), info=info)
            hits += 1 if out == want else 0
            abstained += info.get("abstained", 0)
        successes += hits
        per_pair.append(hits / trials_per_pair)
    total = len(pair_list) * trials_per_pair
    rate, lo, hi = wilson_interval(successes, total)
    return SuccessReport(successes, total, rate, lo, hi, tuple(per_pair), abstained)


class _BoundReferee:
    """Referee with the public coin already filled in; mirrors the inner surface."""

    def __init__(self, inner, coin_value):
        if hasattr(inner, "accept_probability"):
            self.accept_probability = (
                lambda a, b, coin=None: inner.accept_probability(a, b, coin_value)
            )
        if hasattr(inner, "output_distribution"):
            self.output_distribution = (
                lambda a, b, coin=None: inner.output_distribution(a, b, coin_value)
            )
        if hasattr(inner, "sample_output"):
            self.sample_output = lambda a, b, rng, coin=None, info=None: inner.sample_output(
                a, b, rng, coin_value, info=info
            )


def fix_coin(p: SmpProtocol, coin_value) -> SmpProtocol:
    """Condition a public-coin protocol on one coin outcome."""
    if p.coin is None:
        raise ValueError("protocol has no public coin")
    bound = _BoundReferee(p.referee, coin_value)
    return SmpProtocol(
        name=f"{p.name}|coin",
        alice_strategy=lambda x, _coin, _v=coin_value: p.alice_strategy(x, _v),
        bob_strategy=lambda y, _coin, _v=coin_value: p.bob_strategy(y, _v),
        referee=bound,
        alice_cost=p.alice_cost,
        bob_cost=p.bob_cost,
        coin=None,
        alice_inputs=p.alice_inputs,
        bob_inputs=p.bob_inputs,
        quantum=p.quantum,
    )
