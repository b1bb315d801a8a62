"""Brute-force ground truth for deterministic protocols at toy scale.

Exact deterministic complexity of tiny functions (distinct rows/columns of
the communication matrix, cross-checked by exhaustive protocol search),
exhaustive search for cheapest deterministic protocols solving relations
under a distribution, and the constructive chain that turns a relational
separation into a functional one: extract the function a deterministic
protocol computes, bound its distributional error by a union bound, and
split multi-bit outputs into Boolean functions through an error-correcting
code.

Search caps are explicit and errors loud; there are no heuristic fallbacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Mapping

import numpy as np

from .codes import LinearCode, encode, min_distance_bruteforce
from .config import DEFAULT, Tolerances
from .errors import CapExceededError
from .smp import FunctionTable, RelationTable, bitstring

__all__ = [
    "DeterministicSmpProtocol",
    "det_complexity_function",
    "det_complexity_relation",
    "search_relation_protocol",
    "exhaustive_function_search",
    "extract_function",
    "union_bound_check",
    "UnionBoundReport",
    "booleanize",
    "decode_booleanized",
    "load_function_table",
    "save_function_table",
    "load_relation_table",
    "save_relation_table",
]


@dataclass(frozen=True)
class DeterministicSmpProtocol:
    """Fixed message maps for both parties plus a referee lookup table."""

    alice_map: Mapping[object, str]
    bob_map: Mapping[object, str]
    referee_map: Mapping[tuple[str, str], object]

    def __post_init__(self):
        object.__setattr__(self, "alice_map", dict(self.alice_map))
        object.__setattr__(self, "bob_map", dict(self.bob_map))
        object.__setattr__(self, "referee_map", dict(self.referee_map))
        a_lens = {len(m) for m in self.alice_map.values()}
        b_lens = {len(m) for m in self.bob_map.values()}
        if len(a_lens) > 1 or len(b_lens) > 1:
            raise ValueError("message lengths must be uniform per party")

    @property
    def alice_bits(self) -> int:
        return len(next(iter(self.alice_map.values()))) if self.alice_map else 0

    @property
    def bob_bits(self) -> int:
        return len(next(iter(self.bob_map.values()))) if self.bob_map else 0

    @property
    def cost(self) -> int:
        return self.alice_bits + self.bob_bits

    def output(self, x, y):
        return self.referee_map[(self.alice_map[x], self.bob_map[y])]


def det_complexity_function(
    f: FunctionTable, tol: Tolerances = DEFAULT
) -> tuple[int, int]:
    """Minimal per-party message lengths of a zero-error deterministic protocol.

    Alice must separate inputs with distinct matrix rows (a shared message
    would force the referee to err against some column), and that many
    messages also suffice; likewise for columns.  Only total functions: a
    partial function must go through the relational search with singleton
    valid sets on its domain.
    """
    if not f.is_total:
        raise ValueError(
            "partial function: use det_complexity_relation with singleton valid sets"
        )
    if len(f.alice_inputs) > 1024 or len(f.bob_inputs) > 1024:
        raise CapExceededError("input sets capped at 2**10")
    rows = {tuple(f(x, y) for y in f.bob_inputs) for x in f.alice_inputs}
    cols = {tuple(f(x, y) for x in f.alice_inputs) for y in f.bob_inputs}
    c_a = math.ceil(math.log2(len(rows))) if len(rows) > 1 else 0
    c_b = math.ceil(math.log2(len(cols))) if len(cols) > 1 else 0
    return c_a, c_b


def _partitions_into(items: list, max_blocks: int) -> Iterator[list[int]]:
    """Assignments item -> block index in canonical (first-appearance) order."""
    n = len(items)

    def rec(i: int, used: int, assignment: list[int]):
        if i == n:
            yield list(assignment)
            return
        for block in range(min(used + 1, max_blocks)):
            assignment.append(block)
            yield from rec(i + 1, max(used, block + 1), assignment)
            assignment.pop()

    yield from rec(0, 0, [])


def _feasible_referee(
    xs: list,
    ys: list,
    a_assign: list[int],
    b_assign: list[int],
    valid: Mapping[tuple, frozenset],
    support: list[tuple],
) -> dict[tuple[int, int], object] | None:
    """Pick one valid output per message cell, or None when a cell is empty."""
    cells: dict[tuple[int, int], frozenset | None] = {}
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    for x, y in support:
        cell = (a_assign[xi[x]], b_assign[yi[y]])
        options = valid[(x, y)]
        cells[cell] = options if cell not in cells else cells[cell] & options
        if not cells[cell]:
            return None
    return {cell: sorted(options, key=repr)[0] for cell, options in cells.items()}


def search_relation_protocol(
    relation: RelationTable, max_bits: int | None = None, tol: Tolerances = DEFAULT
) -> tuple[int, DeterministicSmpProtocol] | None:
    """Cheapest deterministic protocol answering validly on the support of mu.

    Exhausts message-map partitions per total cost; the referee is then forced
    (any cell intersecting the support must pick from the intersection of its
    valid sets).  Returns None when nothing within ``max_bits`` works.
    """
    if max_bits is None:
        max_bits = tol.relation_bits_cap
    if max_bits > tol.relation_bits_cap:
        raise CapExceededError(f"search capped at {tol.relation_bits_cap} total bits")
    support = relation.support
    xs = sorted({x for x, _ in relation.valid}, key=repr)
    ys = sorted({y for _, y in relation.valid}, key=repr)
    if len(xs) * len(ys) > tol.relation_xy_cap:
        raise CapExceededError(f"|X|*|Y| capped at {tol.relation_xy_cap}")

    for total in range(max_bits + 1):
        for c_a in range(total + 1):
            c_b = total - c_a
            for a_assign in _partitions_into(xs, 2**c_a):
                for b_assign in _partitions_into(ys, 2**c_b):
                    referee = _feasible_referee(xs, ys, a_assign, b_assign,
                                                relation.valid, support)
                    if referee is None:
                        continue
                    proto = DeterministicSmpProtocol(
                        alice_map={x: bitstring(a_assign[i], c_a) for i, x in enumerate(xs)},
                        bob_map={y: bitstring(b_assign[i], c_b) for i, y in enumerate(ys)},
                        referee_map={
                            (bitstring(a, c_a), bitstring(b, c_b)): out
                            for (a, b), out in referee.items()
                        },
                    )
                    return total, proto
    return None


def det_complexity_relation(
    relation: RelationTable, max_bits: int | None = None, tol: Tolerances = DEFAULT
) -> int | None:
    """Minimal total cost over deterministic protocols valid on the support of mu."""
    found = search_relation_protocol(relation, max_bits, tol)
    return None if found is None else found[0]


def exhaustive_function_search(
    f: FunctionTable, max_bits: int | None = None, tol: Tolerances = DEFAULT
) -> int | None:
    """Zero-error deterministic cost of a function by exhaustive protocol search.

    Independent cross-check for :func:`det_complexity_function`: the function
    becomes a relation with singleton valid sets and uniform weight on its
    domain.
    """
    weight = Fraction(1, len(f.domain))
    relation = RelationTable(
        valid={pair: frozenset([f(*pair)]) for pair in f.domain},
        mu={pair: weight for pair in f.domain},
    )
    return det_complexity_relation(relation, max_bits, tol)


def extract_function(
    p: DeterministicSmpProtocol, relation: RelationTable
) -> tuple[FunctionTable, Fraction | float]:
    """The function a deterministic protocol computes, and its invalidity mass.

    A deterministic protocol computes some function with error zero by
    definition; the returned weight is the mu-probability that this function's
    value is not a valid relation output.
    """
    xs = tuple(p.alice_map)
    ys = tuple(p.bob_map)
    values = {(x, y): p.output(x, y) for x in xs for y in ys}
    f = FunctionTable(xs, ys, values)
    err = sum(
        (w for (x, y), w in relation.mu.items() if values[(x, y)] not in relation.valid[(x, y)]),
        start=Fraction(0) if _rational_mu(relation) else 0.0,
    )
    return f, err


def _rational_mu(relation: RelationTable) -> bool:
    return all(isinstance(w, Fraction) for w in relation.mu.values())


@dataclass(frozen=True)
class UnionBoundReport:
    """Exact distributional errors entering the union-bound inequality."""

    relation_error: Fraction | float
    disagreement_with_f: Fraction | float
    f_invalid_mass: Fraction | float

    @property
    def holds(self) -> bool:
        return self.relation_error <= self.disagreement_with_f + self.f_invalid_mass


def union_bound_check(
    p_a: DeterministicSmpProtocol,
    f: FunctionTable,
    relation: RelationTable,
) -> UnionBoundReport:
    """Verify err(p_a solves the relation) <= err(p_a != f) + err(f invalid).

    All three quantities are exact expectations under mu; the inequality is a
    pointwise union bound, so a False report indicates a broken input table.
    """
    zero = Fraction(0) if _rational_mu(relation) else 0.0
    rel_err = zero
    dis_err = zero
    f_err = zero
    for (x, y), w in relation.mu.items():
        if not w:
            continue
        out = p_a.output(x, y)
        if out not in relation.valid[(x, y)]:
            rel_err += w
        if out != f(x, y):
            dis_err += w
        if f(x, y) not in relation.valid[(x, y)]:
            f_err += w
    return UnionBoundReport(rel_err, dis_err, f_err)


def booleanize(
    f: FunctionTable,
    g: LinearCode,
    min_relative_distance: float = 0.25,
) -> list[FunctionTable]:
    """Boolean functions carrying the bits of g(f(x, y)).

    ``g`` must encode f's k-bit outputs and have brute-force-verified relative
    distance at least ``min_relative_distance``, so that the original function
    survives nearest-codeword decoding even if a minority of the Boolean
    tables is corrupted.
    """
    k = g.n
    for v in set(f.values.values()):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < 2**k:
            raise ValueError(f"output {v!r} does not fit in {k} bits")
    dist = min_distance_bruteforce(g)
    if dist / g.m < min_relative_distance:
        raise ValueError(
            f"code distance {dist}/{g.m} below required {min_relative_distance}"
        )
    tables = []
    for j in range(g.m):
        tables.append(
            FunctionTable(
                f.alice_inputs,
                f.bob_inputs,
                {pair: int(encode(g, f(*pair))[j]) for pair in f.domain},
            )
        )
    return tables


def decode_booleanized(
    tables: list[FunctionTable], g: LinearCode, x, y
) -> int:
    """Nearest-codeword decoding of the Boolean tables' bits at one input pair."""
    received = np.array([t(x, y) for t in tables], dtype=np.uint8)
    best, best_dist = 0, g.m + 1
    for msg in range(2**g.n):
        d = int((encode(g, msg) ^ received).sum())
        if d < best_dist:
            best, best_dist = msg, d
    return best


# ---------------------------------------------------------------------------
# Plain text table formats: header "|X| |Y| k", then |X| rows of outputs
# (functions; '*' marks pairs outside the promise) or valid-set bitmasks
# (relations), then |X| rows of mu as rationals.


def save_function_table(path: str | Path, f: FunctionTable) -> None:
    lines = [f"{len(f.alice_inputs)} {len(f.bob_inputs)} 1"]
    for x in f.alice_inputs:
        cells = [
            str(f.values[(x, y)]) if (x, y) in f.values else "*" for y in f.bob_inputs
        ]
        lines.append(" ".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def load_function_table(path: str | Path) -> FunctionTable:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    nx, ny, _k = (int(v) for v in lines[0])
    xs, ys = tuple(range(nx)), tuple(range(ny))
    values = {}
    for i, row in enumerate(lines[1 : nx + 1]):
        if len(row) != ny:
            raise ValueError(f"row {i} has {len(row)} cells, expected {ny}")
        for j, cell in enumerate(row):
            if cell != "*":
                values[(i, j)] = int(cell)
    return FunctionTable(xs, ys, values)


def save_relation_table(path: str | Path, relation: RelationTable) -> None:
    xs = sorted({x for x, _ in relation.valid})
    ys = sorted({y for _, y in relation.valid})
    k = max(int(z) for v in relation.valid.values() for z in v).bit_length()
    lines = [f"{len(xs)} {len(ys)} {k}"]
    for x in xs:
        lines.append(
            " ".join(
                str(sum(1 << int(z) for z in relation.valid[(x, y)])) for y in ys
            )
        )
    for x in xs:
        lines.append(" ".join(str(Fraction(relation.mu[(x, y)])) for y in ys))
    Path(path).write_text("\n".join(lines) + "\n")


def load_relation_table(path: str | Path) -> RelationTable:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    nx, ny, _k = (int(v) for v in lines[0])
    valid = {}
    for i, row in enumerate(lines[1 : nx + 1]):
        for j, cell in enumerate(row):
            mask = int(cell)
            valid[(i, j)] = frozenset(z for z in range(mask.bit_length()) if mask >> z & 1)
    mu = {}
    for i, row in enumerate(lines[nx + 1 : 2 * nx + 1]):
        for j, cell in enumerate(row):
            mu[(i, j)] = Fraction(cell)
    return RelationTable(valid, mu)
