"""Concrete simultaneous message passing protocols.

Equality with a shared random string (public coin) and with random
code-matrix rows/columns (private coin); a promise problem where Bob holds a
perfect matching and a noisy version of the edge parities of Alice's string;
and the relational problem where any single edge parity is an acceptable
answer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .codes import LinearCode, encode, hadamard_code
from .errors import PromiseViolationError
from .qcore import MeasurementOperator, ProductState, PureState
from .smp import (
    CoinSpace,
    Cost,
    FunctionTable,
    OperatorReferee,
    RelationTable,
    SmpProtocol,
    TableReferee,
    bitstring,
    subset_coin,
)

__all__ = [
    "equality_public",
    "equality_code",
    "equality_code_acceptance",
    "equality_function",
    "MatchingInstance",
    "matching_times_x",
    "matching_value",
    "random_matching",
    "random_promise_instance",
    "matching_qc",
    "matching_classical",
    "HiddenMatchingOutput",
    "xor_matching",
    "hidden_matching_relation",
    "toy_quantum_equality",
    "hidden_matching_verification",
    "build_fixture",
    "FIXTURE_NAMES",
]


def _parity(v: int) -> int:
    return v.bit_count() & 1


def _log2_exact(n: int) -> int:
    k = n.bit_length() - 1
    if n <= 0 or (1 << k) != n:
        raise ValueError(f"{n} is not a power of two")
    return k


def _index_bits(count: int) -> int:
    return max(1, (count - 1).bit_length()) if count > 1 else 0


# ---------------------------------------------------------------------------
# Equality


def equality_public(n: int, k: int = 1) -> SmpProtocol:
    """Public-coin equality: both parties send k inner-product bits.

    The shared coin is a tuple of k random n-bit masks; the referee accepts
    iff all k parity pairs agree.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")

    total_bits = n * k
    mask_max = 1 << n

    def decode(v: int) -> tuple[int, ...]:
        return tuple((v >> (n * t)) & (mask_max - 1) for t in range(k))

    def sampler(rng: np.random.Generator) -> tuple[int, ...]:
        return tuple(int(rng.integers(0, mask_max)) for _ in range(k))

    if total_bits <= 20:
        size = 1 << total_bits

        def outcomes():
            p = 1.0 / size
            for v in range(size):
                yield decode(v), p

        coin = CoinSpace(sampler=sampler, size=size, outcomes=outcomes)
    else:
        coin = CoinSpace(sampler=sampler)

    def send(value: int, masks: tuple[int, ...]) -> dict[str, float]:
        bits = "".join(str(_parity(value & m)) for m in masks)
        return {bits: 1.0}

    inputs = tuple(range(2**n)) if n <= 10 else None
    return SmpProtocol(
        name=f"eq-public(n={n},k={k})",
        alice_strategy=lambda x, coin_v: send(x, coin_v),
        bob_strategy=lambda y, coin_v: send(y, coin_v),
        referee=TableReferee(fn=lambda a, b: 1.0 if a == b else 0.0),
        alice_cost=Cost(bits=k),
        bob_cost=Cost(bits=k),
        coin=coin,
        alice_inputs=inputs,
        bob_inputs=inputs,
    )


def equality_code(n: int, code: LinearCode | None = None, reps: int = 1) -> SmpProtocol:
    """Private-coin equality via a linear code's grid view.

    Per repetition Alice sends a uniformly random column of her codeword's
    grid with its index, Bob a uniformly random row of his; the referee
    accepts iff row and column agree at every intersection.
    """
    if code is None:
        code = hadamard_code(n)
    if code.n != n:
        raise ValueError(f"code encodes {code.n}-bit messages, expected {n}")
    if reps < 1:
        raise ValueError("need reps >= 1")

    rows, cols = code.grid_rows, code.grid_cols
    col_idx_bits = _index_bits(cols)
    row_idx_bits = _index_bits(rows)
    a_rep_bits = col_idx_bits + rows
    b_rep_bits = row_idx_bits + cols

    def grid(word: np.ndarray) -> np.ndarray:
        return word.reshape(rows, cols)

    def alice_dist(x, _coin) -> dict[str, float]:
        g = grid(encode(code, x))
        p = (1.0 / cols) ** reps
        out: dict[str, float] = {}
        for choice in itertools.product(range(cols), repeat=reps):
            msg = "".join(
                bitstring(j, col_idx_bits) + "".join(str(b) for b in g[:, j])
                for j in choice
            )
            out[msg] = p
        return out

    def bob_dist(y, _coin) -> dict[str, float]:
        g = grid(encode(code, y))
        p = (1.0 / rows) ** reps
        out: dict[str, float] = {}
        for choice in itertools.product(range(rows), repeat=reps):
            msg = "".join(
                bitstring(i, row_idx_bits) + "".join(str(b) for b in g[i, :])
                for i in choice
            )
            out[msg] = p
        return out

    def accept(a: str, b: str) -> float:
        for t in range(reps):
            a_seg = a[t * a_rep_bits : (t + 1) * a_rep_bits]
            b_seg = b[t * b_rep_bits : (t + 1) * b_rep_bits]
            j = int(a_seg[:col_idx_bits], 2) if col_idx_bits else 0
            i = int(b_seg[:row_idx_bits], 2) if row_idx_bits else 0
            if a_seg[col_idx_bits + i] != b_seg[row_idx_bits + j]:
                return 0.0
        return 1.0

    inputs = tuple(range(2**n)) if n <= 10 else None
    return SmpProtocol(
        name=f"eq-code(n={n},reps={reps})",
        alice_strategy=alice_dist,
        bob_strategy=bob_dist,
        referee=TableReferee(fn=accept),
        alice_cost=Cost(bits=reps * a_rep_bits),
        bob_cost=Cost(bits=reps * b_rep_bits),
        alice_inputs=inputs,
        bob_inputs=inputs,
    )


def equality_code_acceptance(code: LinearCode, x: int, y: int, reps: int = 1) -> float:
    """Exact acceptance of the code-grid protocol, via repetition independence.

    One repetition agrees with probability 1 - d(C(x), C(y))/m (uniform cell);
    repetitions are independent, so the all-agree probability is its power.
    """
    d = int((encode(code, x) ^ encode(code, y)).sum())
    return (1.0 - d / code.m) ** reps


def equality_function(n: int) -> FunctionTable:
    xs = tuple(range(2**n))
    return FunctionTable(xs, xs, {(x, y): int(x == y) for x in xs for y in xs})


# ---------------------------------------------------------------------------
# Matching promise problem


@dataclass(frozen=True)
class MatchingInstance:
    """Alice's bitstring plus Bob's perfect matching and edge-indexed string."""

    n: int
    x: tuple[int, ...]
    matching: tuple[tuple[int, int], ...]
    w: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(b) & 1 for b in self.x))
        edges = tuple(tuple(sorted((int(i), int(j)))) for i, j in self.matching)
        object.__setattr__(self, "matching", edges)
        object.__setattr__(self, "w", tuple(int(b) & 1 for b in self.w))
        if self.n % 2 != 0 or len(self.x) != self.n:
            raise ValueError("need an even n and a length-n string")
        touched = [v for e in edges for v in e]
        if sorted(touched) != list(range(self.n)):
            raise ValueError("matching does not partition the vertex set")
        if len(self.w) != self.n // 2:
            raise ValueError("w must have one bit per edge")

    @property
    def bob_input(self) -> tuple:
        return (self.matching, self.w)


def matching_times_x(inst: MatchingInstance) -> tuple[int, ...]:
    """Edge parities of Alice's string, in the matching's edge order."""
    return tuple(inst.x[i] ^ inst.x[j] for i, j in inst.matching)


def matching_value(inst: MatchingInstance) -> int:
    """1 when w is within n/6 of the edge parities, 0 when at least n/3 away."""
    d = sum(a != b for a, b in zip(inst.w, matching_times_x(inst)))
    if 6 * d <= inst.n:
        return 1
    if 3 * d >= inst.n:
        return 0
    raise PromiseViolationError(
        f"distance {d} is strictly between {inst.n}/6 and {inst.n}/3"
    )


def random_matching(n: int, rng: np.random.Generator) -> tuple[tuple[int, int], ...]:
    perm = [int(v) for v in rng.permutation(n)]
    edges = [tuple(sorted((perm[2 * i], perm[2 * i + 1]))) for i in range(n // 2)]
    return tuple(sorted(edges))


def random_promise_instance(
    n: int, rng: np.random.Generator, value: int | None = None
) -> MatchingInstance:
    """Instance satisfying the promise, with the target value drawn if not given."""
    if value is None:
        value = int(rng.integers(0, 2))
    x = tuple(int(b) for b in rng.integers(0, 2, size=n))
    matching = random_matching(n, rng)
    if value == 1:
        d = int(rng.integers(0, n // 6 + 1))
    else:
        d = int(rng.integers(-(-n // 3), n // 2 + 1))
    parities = [x[i] ^ x[j] for i, j in matching]
    for pos in rng.choice(n // 2, size=d, replace=False):
        parities[pos] ^= 1
    return MatchingInstance(n=n, x=x, matching=matching, w=tuple(parities))


def _encode_edges(
    edges: list[tuple[int, int, int]], slots: int, log_n: int
) -> str:
    count_bits = _index_bits(slots + 1)
    msg = bitstring(len(edges), count_bits)
    for i, j, wbit in edges:
        msg += bitstring(i, log_n) + bitstring(j, log_n) + str(wbit)
    msg += "0" * ((slots - len(edges)) * (2 * log_n + 1))
    return msg


def _decode_edges(msg: str, slots: int, log_n: int) -> list[tuple[int, int, int]]:
    count_bits = _index_bits(slots + 1)
    count = int(msg[:count_bits], 2) if count_bits else 0
    out = []
    pos = count_bits
    for _ in range(count):
        i = int(msg[pos : pos + log_n], 2)
        j = int(msg[pos + log_n : pos + 2 * log_n], 2)
        wbit = int(msg[pos + 2 * log_n])
        out.append((i, j, wbit))
        pos += 2 * log_n + 1
    return out


def _available_edges(
    matching: tuple[tuple[int, int], ...], w: tuple[int, ...], subset: tuple[int, ...]
) -> list[tuple[int, int, int]]:
    inside = set(subset)
    return [(i, j, w[t]) for t, (i, j) in enumerate(matching) if i in inside and j in inside]


def _majority_output(agreements: list[int], rng: np.random.Generator | None):
    """1 when most recovered bits agree, 0 when most disagree; fair coin on ties."""
    if agreements:
        agree = sum(agreements)
        disagree = len(agreements) - agree
        if agree > disagree:
            return 1
        if disagree > agree:
            return 0
    if rng is None:
        return None
    return int(rng.integers(0, 2))


class _MatchingQcReferee:
    """Measures each received copy with the projectors of still-unused edges.

    Per copy, the projective measurement has one two-dimensional outcome per
    unused edge (success probability |psi_i|^2 + |psi_j|^2) plus a residual
    outcome; a success is followed by the +/- basis measurement on the
    surviving two amplitudes, which recovers the edge parity.
    """

    def __init__(self, n: int, slots: int):
        self.n = n
        self.slots = slots
        self.log_n = _log2_exact(n)

    def _edge_outcomes(self, psi: PureState, edges: list[tuple[int, int, int]]):
        amp = psi.amplitudes
        out = []
        for idx, (i, j, _w) in enumerate(edges):
            p = float(abs(amp[i]) ** 2 + abs(amp[j]) ** 2)
            if p <= 0.0:
                continue
            plus = float(abs(amp[i] + amp[j]) ** 2) / 2.0
            minus = float(abs(amp[i] - amp[j]) ** 2) / 2.0
            out.append((idx, p, plus / (plus + minus)))
        return out

    def output_distribution(self, payload: ProductState, b: str, coin=None) -> dict:
        edges = _decode_edges(b, self.slots, self.log_n)
        dist: dict[int, float] = {}

        def walk(copy: int, used: frozenset[int], agreements: tuple[int, ...], weight: float):
            if weight <= 1e-15:
                return
            if copy == len(payload.factors):
                out = _majority_output(list(agreements), rng=None)
                if out is None:
                    dist[0] = dist.get(0, 0.0) + weight / 2
                    dist[1] = dist.get(1, 0.0) + weight / 2
                else:
                    dist[out] = dist.get(out, 0.0) + weight
                return
            psi = payload.factors[copy]
            unused = [e for e in self._edge_outcomes(psi, edges) if e[0] not in used]
            residual = 1.0 - sum(p for _, p, _ in unused)
            for idx, p, p_even in unused:
                wbit = edges[idx][2]
                if p_even > 0.0:
                    walk(copy + 1, used | {idx},
                         agreements + (int(wbit == 0),), weight * p * p_even)
                if p_even < 1.0:
                    walk(copy + 1, used | {idx},
                         agreements + (int(wbit == 1),), weight * p * (1.0 - p_even))
            walk(copy + 1, used, agreements, weight * max(0.0, residual))

        walk(0, frozenset(), (), 1.0)
        return dist

    def sample_output(self, payload: ProductState, b: str, rng, coin=None, info=None) -> int:
        edges = _decode_edges(b, self.slots, self.log_n)
        used: set[int] = set()
        agreements: list[int] = []
        for psi in payload.factors:
            options = [e for e in self._edge_outcomes(psi, edges) if e[0] not in used]
            if not options:
                continue
            u = rng.random()
            acc = 0.0
            for idx, p, p_even in options:
                acc += p
                if u < acc:
                    parity = 0 if rng.random() < p_even else 1
                    agreements.append(int(parity == edges[idx][2]))
                    used.add(idx)
                    break
        if info is not None and not agreements:
            info["abstained"] = info.get("abstained", 0) + 1
        return _majority_output(agreements, rng)


def matching_qc(
    n: int,
    subset_size: int | None = None,
    copies: int | None = None,
    edges_sent: int | None = None,
) -> SmpProtocol:
    """Quantum-classical protocol for the matching promise problem.

    The public coin picks a subset S; Alice sends ``copies`` copies of the
    sign superposition of her bits on S; Bob sends the edges of his matching
    that fall inside S (up to ``edges_sent``) with their w-bits; the referee
    recovers edge parities from the copies and takes a majority vote of the
    agreement bits.  On an empty intersection the referee answers with a fair
    coin.
    """
    log_n = _log2_exact(n)
    if subset_size is None:
        subset_size = math.ceil(n ** (2 / 3))
    if copies is None:
        copies = math.ceil(n ** (1 / 3))
    if edges_sent is None:
        edges_sent = math.ceil(n ** (1 / 3))
    edges_sent = min(edges_sent, subset_size // 2)

    coin = subset_coin(n, subset_size)
    inv_sqrt = 1.0 / math.sqrt(subset_size)

    def alice(x: tuple[int, ...], subset: tuple[int, ...]) -> ProductState:
        amp = np.zeros(n, dtype=np.complex128)
        for i in subset:
            amp[i] = -inv_sqrt if x[i] else inv_sqrt
        psi = PureState(amp)
        return ProductState((psi,) * copies)

    def bob(by: tuple, subset: tuple[int, ...]) -> dict[str, float]:
        matching, w = by
        edges = _available_edges(matching, w, subset)[:edges_sent]
        return {_encode_edges(edges, edges_sent, log_n): 1.0}

    count_bits = _index_bits(edges_sent + 1)
    return SmpProtocol(
        name=f"matching-qc(n={n})",
        alice_strategy=alice,
        bob_strategy=bob,
        referee=_MatchingQcReferee(n, edges_sent),
        alice_cost=Cost(qubits=copies * log_n),
        bob_cost=Cost(bits=count_bits + edges_sent * (2 * log_n + 1)),
        coin=coin,
        quantum=True,
    )


class _MatchingClassicalReferee:
    """Compares edge parities read off Alice's restricted bits with the w-bits."""

    def __init__(self, n: int, slots: int):
        self.n = n
        self.slots = slots
        self.log_n = _log2_exact(n)

    def _agreements(self, a: str, b: str, subset: tuple[int, ...]) -> list[int]:
        position = {v: t for t, v in enumerate(subset)}
        agreements = []
        for i, j, wbit in _decode_edges(b, self.slots, self.log_n):
            parity = int(a[position[i]]) ^ int(a[position[j]])
            agreements.append(int(parity == wbit))
        return agreements

    def output_distribution(self, a: str, b: str, coin=None) -> dict:
        out = _majority_output(self._agreements(a, b, coin), rng=None)
        if out is None:
            return {0: 0.5, 1: 0.5}
        return {out: 1.0}

    def accept_probability(self, a: str, b: str, coin=None) -> float:
        return self.output_distribution(a, b, coin).get(1, 0.0)

    def sample_output(self, a: str, b: str, rng, coin=None, info=None) -> int:
        agreements = self._agreements(a, b, coin)
        if info is not None and not agreements:
            info["abstained"] = info.get("abstained", 0) + 1
        return _majority_output(agreements, rng)


def matching_classical(n: int, subset_size: int | None = None) -> SmpProtocol:
    """Classical analogue: Alice sends her bits on the random subset directly."""
    log_n = _log2_exact(n)
    if subset_size is None:
        subset_size = 2 * math.ceil(math.sqrt(n))
    coin = subset_coin(n, subset_size)
    slots = subset_size // 2

    def alice(x: tuple[int, ...], subset: tuple[int, ...]) -> dict[str, float]:
        return {"".join(str(x[i]) for i in subset): 1.0}

    def bob(by: tuple, subset: tuple[int, ...]) -> dict[str, float]:
        matching, w = by
        edges = _available_edges(matching, w, subset)[:slots]
        return {_encode_edges(edges, slots, log_n): 1.0}

    count_bits = _index_bits(slots + 1)
    return SmpProtocol(
        name=f"matching-classical(n={n})",
        alice_strategy=alice,
        bob_strategy=bob,
        referee=_MatchingClassicalReferee(n, slots),
        alice_cost=Cost(bits=subset_size),
        bob_cost=Cost(bits=count_bits + slots * (2 * log_n + 1)),
        coin=coin,
    )


# ---------------------------------------------------------------------------
# Hidden matching relation


@dataclass(frozen=True)
class HiddenMatchingOutput:
    """One edge of Bob's matching with the parity of Alice's bits on it."""

    i: int
    j: int
    parity: int


def xor_matching(n: int, k: int) -> tuple[tuple[int, int], ...]:
    """Perfect matching pairing each i with i XOR k; k = 1 .. n-1."""
    if not 1 <= k < n:
        raise ValueError(f"matching index {k} outside 1..{n - 1}")
    return tuple(sorted((i, i ^ k) for i in range(n) if i < (i ^ k)))


def _sign_superposition(x: int, n: int) -> PureState:
    amp = np.array(
        [(-1.0 if (x >> i) & 1 else 1.0) for i in range(n)], dtype=np.complex128
    )
    return PureState(amp / math.sqrt(n))


class _HiddenMatchingReferee:
    """Projects onto the two-dimensional edge spaces of the named matching.

    The surviving two amplitudes determine the edge parity with certainty for
    sign-superposition messages; tiny numerical residue beyond 1e-9 in the
    wrong parity branch is kept in the distribution rather than hidden.
    """

    def __init__(self, n: int):
        self.n = n
        self.log_n = _log2_exact(n)

    def _branches(self, psi: PureState, b: str):
        k = int(b, 2)
        amp = psi.amplitudes
        for i, j in xor_matching(self.n, k):
            p_edge = float(abs(amp[i]) ** 2 + abs(amp[j]) ** 2)
            if p_edge <= 1e-12:
                continue
            plus = float(abs(amp[i] + amp[j]) ** 2) / 2.0
            minus = float(abs(amp[i] - amp[j]) ** 2) / 2.0
            for parity, weight in ((0, plus), (1, minus)):
                if weight / (plus + minus) > 1e-12:
                    yield HiddenMatchingOutput(i, j, parity), p_edge * weight / (plus + minus)

    def output_distribution(self, psi: PureState, b: str, coin=None) -> dict:
        return {out: w for out, w in self._branches(psi, b)}

    def sample_output(self, psi: PureState, b: str, rng, coin=None, info=None):
        outs, weights = zip(*self._branches(psi, b))
        idx = rng.choice(len(outs), p=np.array(weights) / sum(weights))
        return outs[idx]


def hidden_matching_relation(n: int) -> tuple[SmpProtocol, RelationTable]:
    """Relational protocol: output any (i, j, x_i xor x_j) with (i, j) in Bob's matching.

    Alice sends one sign superposition (log n qubits); Bob names his matching
    (log n bits); the referee's edge measurement yields a uniformly random
    edge whose parity it then extracts with certainty.
    """
    log_n = _log2_exact(n)
    if n < 4:
        raise ValueError("need n >= 4")
    xs = tuple(range(2**n)) if n <= 8 else None
    ks = tuple(range(1, n))

    protocol = SmpProtocol(
        name=f"hidden-matching(n={n})",
        alice_strategy=lambda x, _c: _sign_superposition(x, n),
        bob_strategy=lambda k, _c: {bitstring(k, log_n): 1.0},
        referee=_HiddenMatchingReferee(n),
        alice_cost=Cost(qubits=log_n),
        bob_cost=Cost(bits=log_n),
        alice_inputs=xs,
        bob_inputs=ks,
        quantum=True,
    )

    relation = None
    if xs is not None:
        valid = {}
        for x in xs:
            for k in ks:
                valid[(x, k)] = frozenset(
                    HiddenMatchingOutput(i, j, ((x >> i) & 1) ^ ((x >> j) & 1))
                    for i, j in xor_matching(n, k)
                )
        weight = Fraction(1, len(xs) * len(ks))
        relation = RelationTable(valid, {pair: weight for pair in valid})
    return protocol, relation


# ---------------------------------------------------------------------------
# Canonical-form toy fixtures for the protocol compilers


def _toy_states(q: int) -> list[PureState]:
    if q == 1:
        s = 1 / math.sqrt(2)
        vectors = [(1, 0), (s, s), (0, 1), (s, -s)]
        return [PureState(np.array(v, dtype=np.complex128)) for v in vectors]
    if q == 2:
        return [PureState(np.eye(4, dtype=np.complex128)[i]) for i in range(4)]
    raise ValueError("toy fixtures cover q in {1, 2}")


def toy_quantum_equality(q: int = 1) -> SmpProtocol:
    """Equality-flavored quantum-classical protocol in canonical form.

    Four Alice inputs map to four pure states on q qubits; Bob sends his
    input as two bits; the referee measures with the projector onto Bob's
    own state.  For q=2 the states are orthogonal and the protocol is exact;
    for q=1 they overlap and unequal inputs may be accepted with probability
    one half.
    """
    states = _toy_states(q)
    densities = [s.density() for s in states]
    operators = {
        bitstring(b, 2): MeasurementOperator(densities[b].entries) for b in range(4)
    }
    return SmpProtocol(
        name=f"toy-quantum-eq(q={q})",
        alice_strategy=lambda x, _c: densities[x],
        bob_strategy=lambda y, _c: {bitstring(y, 2): 1.0},
        referee=OperatorReferee(operators),
        alice_cost=Cost(qubits=q),
        bob_cost=Cost(bits=2),
        alice_inputs=(0, 1, 2, 3),
        bob_inputs=(0, 1, 2, 3),
        quantum=True,
    )


def hidden_matching_verification(n: int = 4) -> SmpProtocol:
    """Boolean restatement of the hidden matching relation, in canonical form.

    Bob holds (matching index, edge position, claimed parity); the function
    is whether the claim equals the true edge parity of Alice's string.  The
    referee projects onto the one state that certifies the claim, so the
    acceptance probability is 2/n on a true claim and 0 on a false one.
    """
    log_n = _log2_exact(n)
    ys = [
        (k, t, beta)
        for k in range(1, n)
        for t in range(n // 2)
        for beta in (0, 1)
    ]
    bob_bits = _index_bits(len(ys))
    operators: dict[str, MeasurementOperator] = {}
    for idx in range(2**bob_bits):
        if idx < len(ys):
            k, t, beta = ys[idx]
            i, j = xor_matching(n, k)[t]
            amp = np.zeros(n, dtype=np.complex128)
            amp[i] = 1 / math.sqrt(2)
            amp[j] = (1 if beta == 0 else -1) / math.sqrt(2)
            operators[bitstring(idx, bob_bits)] = MeasurementOperator(
                PureState(amp).density().entries
            )
        else:
            operators[bitstring(idx, bob_bits)] = MeasurementOperator(
                np.zeros((n, n), dtype=np.complex128)
            )
    y_index = {y: idx for idx, y in enumerate(ys)}

    return SmpProtocol(
        name=f"hm-verify(n={n})",
        alice_strategy=lambda x, _c: _sign_superposition(x, n).density(),
        bob_strategy=lambda y, _c: {bitstring(y_index[y], bob_bits): 1.0},
        referee=OperatorReferee(operators),
        alice_cost=Cost(qubits=log_n),
        bob_cost=Cost(bits=bob_bits),
        alice_inputs=tuple(range(2**n)),
        bob_inputs=tuple(ys),
        quantum=True,
    )


FIXTURE_NAMES = (
    "eq-public",
    "eq-code",
    "matching-qc",
    "matching-classical",
    "hidden-matching",
)


def build_fixture(name: str, params: dict):
    """Construct a named protocol fixture from a parameter record."""
    p = dict(params)
    if name == "eq-public":
        return equality_public(int(p.pop("n")), int(p.pop("k", 1)))
    if name == "eq-code":
        n = int(p.pop("n"))
        reps = int(p.pop("reps", 1))
        return equality_code(n, reps=reps)
    if name == "matching-qc":
        return matching_qc(
            int(p.pop("n")),
            subset_size=_opt_int(p.pop("subset_size", None)),
            copies=_opt_int(p.pop("copies", None)),
            edges_sent=_opt_int(p.pop("edges_sent", None)),
        )
    if name == "matching-classical":
        return matching_classical(
            int(p.pop("n")), subset_size=_opt_int(p.pop("subset_size", None))
        )
    if name == "hidden-matching":
        return hidden_matching_relation(int(p.pop("n")))
    raise ValueError(f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}")


def _opt_int(v) -> int | None:
    return None if v is None else int(v)
