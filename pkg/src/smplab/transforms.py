"""Message replacement transforms.

Three ways to shrink what Alice must send:

* ``derandomize_alice``: replace a randomized classical message by a verified
  deterministic multiset of messages whose empirical referee response is
  within 1/10 of the true expectation for every possible Bob message.
* ``learn_state_message``: replace a quantum state by a short deterministic
  record.  The sender walks Bob's measurement operators in index order while
  maintaining a hypothesis state (starting maximally mixed).  Indices whose
  averaged observable already predicts the true acceptance within ``delta``
  are skipped; for the rest the sender records the truncated acceptance and
  projects the hypothesis onto the matching eigenvalue band.
* ``compile_qc_to_cc``: apply the state-learning message inside a protocol,
  turning a quantum-classical protocol into a classical one whose worst-case
  error is at most ``delta`` worse.  A deterministic message is in particular
  a valid randomized message, so this also realizes the randomized
  replacement.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimensionCapError, ReplayMismatchError, VanishingProjectionError
from .qcore import (
    DensityMatrix,
    MeasurementOperator,
    Observable,
    acceptance_probability,
    average_observable,
    band_edge_margin,
    band_projector,
    maximally_mixed,
    project_renormalize,
)
from .smp import Cost, SmpProtocol, TableReferee, bitstring, validate_distribution
from .rng import derive_seed, trial_rng

__all__ = [
    "LearnRecord",
    "LearnDiagnostics",
    "DeterministicMessageTable",
    "CompileResult",
    "default_copies",
    "learn_state_message",
    "reconstruct_estimates",
    "bad_count_bound",
    "derandomize_alice",
    "compile_qc_to_cc",
]


def _tilde_bits(delta: float) -> int:
    """Bits reserved per truncated estimate: ceil(log2(8/delta)) + 3."""
    return math.ceil(math.log2(8.0 / delta)) + 3


def _truncate(p: float, delta: float) -> float:
    """Nearest multiple of delta/8 in [0, 1]; the recorded estimate."""
    step = delta / 8.0
    return min(1.0, max(0.0, round(p / step) * step))


@dataclass(frozen=True)
class LearnRecord:
    """Deterministic stand-in for a quantum state against a fixed operator family.

    ``entries`` lists, in increasing index order, the operator indices the
    sender had to correct, each with the truncated acceptance probability
    (a multiple of delta/8).
    """

    q: int
    c: int
    r: int
    delta: float
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((int(b), float(p)) for b, p in self.entries)
        )
        for (b1, _), (b2, _) in zip(self.entries, self.entries[1:]):
            if b1 >= b2:
                raise ValueError("entries must be strictly increasing in index")

    @property
    def encoded_bit_length(self) -> int:
        return len(self.entries) * (self.c + _tilde_bits(self.delta))

    def to_bits(self) -> str:
        """The message itself: per entry, the index then the estimate's grid position."""
        step = self.delta / 8.0
        tb = _tilde_bits(self.delta)
        out = []
        for b, p in self.entries:
            out.append(bitstring(b, self.c) + bitstring(round(p / step), tb))
        return "".join(out)

    @classmethod
    def from_bits(cls, bits: str, q: int, c: int, r: int, delta: float) -> "LearnRecord":
        tb = _tilde_bits(delta)
        width = c + tb
        if len(bits) % width:
            raise ValueError(f"message length {len(bits)} not a multiple of {width}")
        step = delta / 8.0
        entries = []
        for pos in range(0, len(bits), width):
            b = int(bits[pos : pos + c], 2)
            idx = int(bits[pos + c : pos + width], 2)
            entries.append((b, idx * step))
        return cls(q=q, c=c, r=r, delta=delta, entries=tuple(entries))

    def to_bytes(self) -> bytes:
        head = b"LRN1" + struct.pack("<IIId", self.q, self.c, self.r, self.delta)
        body = b"".join(
            struct.pack("<Id", b, p) for b, p in self.entries
        )
        return head + struct.pack("<I", len(self.entries)) + body

    @classmethod
    def from_bytes(cls, data: bytes) -> "LearnRecord":
        if data[:4] != b"LRN1":
            raise ValueError("not a learning record (bad magic)")
        q, c, r, delta = struct.unpack("<IIId", data[4:24])
        (count,) = struct.unpack("<I", data[24:28])
        entries = []
        for t in range(count):
            b, p = struct.unpack("<Id", data[28 + 12 * t : 40 + 12 * t])
            entries.append((b, p))
        return cls(q=q, c=c, r=r, delta=delta, entries=tuple(entries))

    def text_dump(self) -> str:
        lines = [f"learn-record q={self.q} c={self.c} r={self.r} delta={self.delta}"]
        for b, p in self.entries:
            lines.append(f"  {bitstring(b, self.c)} {p!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LearnDiagnostics:
    """Per-run evidence for the procedure's bounds.

    ``projection_traces[t]`` is Tr(M_b rho_b) at the t-th correction, taken
    before the update; ``band_edge_margins[t]`` is the closest distance of any
    observable eigenvalue to that correction's band edges, and indices where
    it falls below the flag threshold appear in ``flagged_steps``.
    """

    bad_count: int
    projection_traces: tuple[float, ...]
    band_edge_margins: tuple[float, ...]
    flagged_steps: tuple[int, ...]
    estimates_before: tuple[float, ...]
    true_probabilities: tuple[float, ...]


def default_copies(q: int, delta: float, tol: Tolerances = DEFAULT) -> int:
    """Default copy count: generous in log(q)/delta^2, capped by the qubit budget."""
    want = max(2, math.ceil(8.0 * math.log(max(q, 2)) / delta**2))
    budget = max(2, tol.learn_qubit_budget // q)
    return min(want, budget)


def bad_count_bound(K: int, delta: float) -> int:
    """Upper bound on the number of corrections for K total qubits.

    ceil((K+1) / log2(1/eta)) + 1 with eta = 1 - delta/4; base-2 logarithm
    because the contradiction pits a 2^-(K+1) success floor against eta^t.
    """
    if K < 1:
        raise ValueError("need K >= 1")
    if not 0.0 < delta < 0.5:
        raise ValueError("need delta in (0, 1/2)")
    eta = 1.0 - delta / 4.0
    return math.ceil((K + 1) / math.log2(1.0 / eta)) + 1


def _validated_family(operators: Sequence[MeasurementOperator]) -> tuple[int, int]:
    count = len(operators)
    c = (count - 1).bit_length() if count > 1 else 0
    if count < 1 or 2**c != count:
        raise ValueError(f"operator family must have a power-of-two size, got {count}")
    dims = {e.dim for e in operators}
    if len(dims) != 1:
        raise ValueError("operator family of mixed dimensions")
    return c, dims.pop()


def _family_observables(
    operators: Sequence[MeasurementOperator], r: int, tol: Tolerances
) -> list[Observable]:
    return [average_observable(e, r, tol) for e in operators]


def learn_state_message(
    rho: DensityMatrix,
    operators: Sequence[MeasurementOperator],
    delta: float,
    r: int | None = None,
    tol: Tolerances = DEFAULT,
    observables: Sequence[Observable] | None = None,
) -> tuple[LearnRecord, LearnDiagnostics]:
    """Build the deterministic record that lets a receiver estimate every Tr(E_b rho).

    Walks ``operators`` in index order keeping a hypothesis state on r copies
    (initially maximally mixed).  A step is skipped when the averaged
    observable's expectation on the hypothesis is within ``delta`` of the true
    acceptance probability; otherwise the truncated acceptance is recorded and
    the hypothesis is projected onto the band of eigenvalues within delta/2 of
    it and renormalized.

    ``observables`` may carry precomputed averaged observables for the family
    (they are a pure function of (operators, r)); otherwise they are built here.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError("need delta in (0, 1/2)")
    c, dim = _validated_family(operators)
    q = dim.bit_length() - 1
    if rho.dim != dim:
        raise ValueError(f"state dimension {rho.dim} != operator dimension {dim}")
    if r is None:
        r = default_copies(q, delta, tol)
    if r < 1:
        raise ValueError("need r >= 1")
    K = r * q
    if 2**K > tol.dim_cap:
        raise DimensionCapError(f"r*q = {K} qubits exceeds the dimension cap")
    if observables is None:
        observables = _family_observables(operators, r, tol)

    hypothesis = maximally_mixed(K, tol)
    entries: list[tuple[int, float]] = []
    traces: list[float] = []
    margins: list[float] = []
    flagged: list[int] = []
    estimates: list[float] = []
    trues: list[float] = []

    for b, (e, f) in enumerate(zip(operators, observables)):
        p_true = acceptance_probability(e, rho, tol)
        estimate = f.expectation(hypothesis)
        estimates.append(estimate)
        trues.append(p_true)
        if abs(estimate - p_true) <= delta:
            continue
        p_tilde = _truncate(p_true, delta)
        band = band_projector(f, p_tilde, delta / 2.0, tol)
        margin = band_edge_margin(f, p_tilde, delta / 2.0)
        trace = float(np.sum(band * hypothesis.entries.T).real)
        if trace <= tol.zero_projection:
            raise VanishingProjectionError(step=b, trace=trace)
        hypothesis = project_renormalize(hypothesis, band, tol)
        entries.append((b, p_tilde))
        traces.append(trace)
        margins.append(margin)
        if margin < tol.band_edge_flag:
            flagged.append(b)

    record = LearnRecord(q=q, c=c, r=r, delta=delta, entries=tuple(entries))
    diags = LearnDiagnostics(
        bad_count=len(entries),
        projection_traces=tuple(traces),
        band_edge_margins=tuple(margins),
        flagged_steps=tuple(flagged),
        estimates_before=tuple(estimates),
        true_probabilities=tuple(trues),
    )
    return record, diags


def reconstruct_estimates(
    record: LearnRecord,
    operators: Sequence[MeasurementOperator],
    q: int | None = None,
    tol: Tolerances = DEFAULT,
    observables: Sequence[Observable] | None = None,
) -> np.ndarray:
    """Receiver side: replay the hypothesis walk and output one estimate per index.

    Corrected indices report their recorded truncated value; the rest report
    the averaged observable's expectation on the replayed hypothesis.  Raises
    :class:`ReplayMismatchError` when a recorded index would not have needed a
    correction against this operator family, or when a projection vanishes:
    both mean the record belongs to a different family.
    """
    c, dim = _validated_family(operators)
    if c != record.c:
        raise ValueError(f"record indexes {record.c}-bit family, got {c}-bit")
    if q is not None and q != record.q:
        raise ValueError(f"record was built for q={record.q}, caller says q={q}")
    if dim != 2**record.q:
        raise ValueError("operator dimension does not match the record")
    delta, r = record.delta, record.r
    if observables is None:
        observables = _family_observables(operators, r, tol)

    corrected: Mapping[int, float] = dict(record.entries)
    hypothesis = maximally_mixed(r * record.q, tol)
    out = np.empty(len(operators))
    for b, f in enumerate(observables):
        estimate = f.expectation(hypothesis)
        if b in corrected:
            p_tilde = corrected[b]
            # a genuinely corrected index must disagree by more than
            # delta - delta/16 with the truncated value it recorded
            if abs(estimate - p_tilde) <= delta - delta / 16.0 - 1e-9:
                raise ReplayMismatchError(
                    f"recorded index {b} replays as already-predicted; "
                    "record does not match this operator family"
                )
            band = band_projector(f, p_tilde, delta / 2.0, tol)
            trace = float(np.sum(band * hypothesis.entries.T).real)
            if trace <= tol.zero_projection:
                raise ReplayMismatchError(
                    f"projection at recorded index {b} vanishes on replay"
                )
            hypothesis = project_renormalize(hypothesis, band, tol)
            out[b] = p_tilde
        else:
            out[b] = min(1.0, max(0.0, estimate))
    return out


@dataclass(frozen=True)
class DeterministicMessageTable:
    """Verified deterministic multisets replacing a randomized Alice.

    For every Alice input the table holds ``multiplicity`` messages whose
    empirical referee response is within 1/10 of the randomized expectation
    for every possible Bob message; verification is part of construction.
    """

    multiplicity: int
    messages: Mapping[object, tuple[str, ...]]
    max_deviation: float

    def __post_init__(self):
        object.__setattr__(self, "messages", dict(self.messages))


def derandomize_alice(
    p: SmpProtocol,
    s: int,
    seed: int = 0,
    max_attempts: int = 1000,
    tol: Tolerances = DEFAULT,
) -> tuple[SmpProtocol, DeterministicMessageTable]:
    """Replace a randomized classical Alice with a verified deterministic one.

    Draws ``s * c_B`` messages from Alice's distribution and accepts the
    multiset only after checking, for every one of the 2^c_B Bob messages,
    that the average referee response is within 1/10 of the exact expectation;
    failed candidates are redrawn (existence is a concentration argument, the
    check makes it unconditional).  The new referee accepts with the average
    response over the multiset, so each input pair's acceptance moves by at
    most 1/10.
    """
    if p.coin is not None:
        raise ValueError("only private-coin protocols can be derandomized this way")
    if p.quantum:
        raise ValueError("Alice must be classical; compile quantum messages first")
    if s < 1:
        raise ValueError("need s >= 1")
    if p.alice_inputs is None:
        raise ValueError("needs an explicit Alice input set")

    c_a = p.alice_cost.bits
    c_b = p.bob_cost.bits
    multiplicity = s * c_b
    all_b = [bitstring(v, c_b) for v in range(2**c_b)]
    referee = p.referee

    def exact_response(dist: Mapping[str, float], b: str) -> float:
        return sum(pa * referee.accept_probability(a, b, None) for a, pa in dist.items())

    table: dict[object, tuple[str, ...]] = {}
    worst_dev = 0.0
    for xi, x in enumerate(p.alice_inputs):
        dist = p.alice_strategy(x, None)
        validate_distribution(dist, c_a, tol)
        targets = {b: exact_response(dist, b) for b in all_b}
        chosen = None
        for attempt in range(max_attempts):
            rng = trial_rng(derive_seed(seed, xi), attempt)
            candidate = tuple(
                _draw(dist, rng) for _ in range(multiplicity)
            )
            dev = max(
                abs(
                    sum(referee.accept_probability(a, b, None) for a in candidate)
                    / multiplicity
                    - targets[b]
                )
                for b in all_b
            )
            if dev <= 0.1:
                chosen = candidate
                worst_dev = max(worst_dev, dev)
                break
        if chosen is None:
            bad_b = max(all_b, key=lambda b: abs(targets[b]))
            raise ValueError(
                f"no verified multiset within {max_attempts} attempts for input {x!r} "
                f"(hardest Bob message {bad_b}); increase s"
            )
        table[x] = chosen

    message_table = DeterministicMessageTable(
        multiplicity=multiplicity, messages=table, max_deviation=worst_dev
    )

    def new_alice(x, _coin) -> dict[str, float]:
        return {"".join(message_table.messages[x]): 1.0}

    def new_accept(big: str, b: str) -> float:
        parts = [big[i * c_a : (i + 1) * c_a] for i in range(multiplicity)]
        return sum(referee.accept_probability(a, b, None) for a in parts) / multiplicity

    compiled = SmpProtocol(
        name=f"{p.name}+deterministic-alice",
        alice_strategy=new_alice,
        bob_strategy=p.bob_strategy,
        referee=TableReferee(fn=new_accept),
        alice_cost=Cost(bits=multiplicity * c_a),
        bob_cost=p.bob_cost,
        alice_inputs=p.alice_inputs,
        bob_inputs=p.bob_inputs,
    )
    return compiled, message_table


def _draw(dist: Mapping[str, float], rng: np.random.Generator) -> str:
    keys = list(dist)
    probs = np.fromiter(dist.values(), dtype=float)
    return keys[rng.choice(len(keys), p=probs / probs.sum())]


@dataclass(frozen=True)
class CompileResult:
    protocol: SmpProtocol
    records: Mapping[object, LearnRecord]
    diagnostics: Mapping[object, LearnDiagnostics]

    def __post_init__(self):
        object.__setattr__(self, "records", dict(self.records))
        object.__setattr__(self, "diagnostics", dict(self.diagnostics))


def compile_qc_to_cc(
    p: SmpProtocol,
    delta: float,
    r: int | None = None,
    tol: Tolerances = DEFAULT,
) -> CompileResult:
    """Replace Alice's quantum message with its deterministic learning record.

    The input protocol must be in canonical form: Alice sends a density
    matrix, Bob a classical message, and the referee holds one measurement
    operator per Bob message.  The compiled Alice deterministically sends the
    bit-encoded record for her state; the referee reconstructs the estimates
    and accepts with the estimate for Bob's actual message, so the worst-case
    error grows by at most ``delta``.  Public-coin protocols are compiled one
    coin value at a time.
    """
    if not p.quantum or not hasattr(p.referee, "operator_list"):
        raise ValueError("needs a canonical quantum protocol with an operator family")
    if p.alice_inputs is None:
        raise ValueError("needs an explicit Alice input set")
    c_b = p.bob_cost.bits
    operators = p.referee.operator_list(c_b)
    q = operators[0].num_qubits
    if r is None:
        r = default_copies(q, delta, tol)
    observables = _family_observables(operators, r, tol)

    coin_values: list = [None]
    if p.coin is not None:
        coin_values = [v for v, _ in p.coin.enumerate()]

    records: dict[object, LearnRecord] = {}
    diagnostics: dict[object, LearnDiagnostics] = {}
    messages: dict[object, str] = {}
    for x in p.alice_inputs:
        for coin in coin_values:
            rho = p.alice_strategy(x, coin)
            if not isinstance(rho, DensityMatrix):
                raise ValueError("canonical protocols send density matrices")
            key = x if p.coin is None else (x, coin)
            record, diag = learn_state_message(
                rho, operators, delta, r, tol, observables=observables
            )
            records[key] = record
            diagnostics[key] = diag
            messages[key] = record.to_bits()

    max_bits = max((len(m) for m in messages.values()), default=0)
    record_c = (len(operators) - 1).bit_length() if len(operators) > 1 else 0
    estimate_cache: dict[str, np.ndarray] = {}

    def reconstruct(bits: str) -> np.ndarray:
        if bits not in estimate_cache:
            rec = LearnRecord.from_bits(bits, q=q, c=record_c, r=r, delta=delta)
            estimate_cache[bits] = reconstruct_estimates(
                rec, operators, tol=tol, observables=observables
            )
        return estimate_cache[bits]

    def new_alice(x, coin) -> dict[str, float]:
        key = x if p.coin is None else (x, coin)
        return {messages[key]: 1.0}

    def new_accept(a: str, b: str, coin=None) -> float:
        return float(reconstruct(a)[int(b, 2) if b else 0])

    compiled = SmpProtocol(
        name=f"{p.name}+classical-alice",
        alice_strategy=new_alice,
        bob_strategy=p.bob_strategy,
        referee=TableReferee(fn=new_accept),
        alice_cost=Cost(bits=max_bits),
        bob_cost=p.bob_cost,
        coin=p.coin,
        alice_inputs=p.alice_inputs,
        bob_inputs=p.bob_inputs,
    )
    return CompileResult(protocol=compiled, records=records, diagnostics=diagnostics)
