"""Binary linear codes with brute-force distance verification.

Codewords are generator @ x over GF(2) and carry a declared grid shape
(rows x cols) so that a codeword can be viewed as a Boolean matrix: one party
can send a random column, the other a random row, and a referee compares the
intersection bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LinearCode",
    "hadamard_code",
    "repetition_code",
    "cyclic_mask_code",
    "random_linear_code",
    "encode",
    "min_distance_bruteforce",
    "grid_cell",
    "relative_distance",
    "load_generator_text",
    "save_generator_text",
]

_BRUTE_FORCE_N_CAP = 12


def int_to_bits(x: int, width: int) -> np.ndarray:
    """Little-endian bit vector: bit j of the result is (x >> j) & 1."""
    return np.array([(x >> j) & 1 for j in range(width)], dtype=np.uint8)


def _balanced_grid(m: int) -> tuple[int, int]:
    """Most balanced factorization rows*cols = m with rows <= cols."""
    rows = 1
    for d in range(1, int(np.sqrt(m)) + 1):
        if m % d == 0:
            rows = d
    return rows, m // rows


@dataclass(frozen=True)
class LinearCode:
    """Generator-matrix code {0,1}^n -> {0,1}^m with a grid view of codewords."""

    generator: np.ndarray  # m x n over GF(2)
    grid_rows: int
    grid_cols: int

    def __post_init__(self):
        g = np.array(self.generator, dtype=np.uint8) & 1
        if g.ndim != 2:
            raise ValueError("generator must be a matrix")
        if self.grid_rows * self.grid_cols != g.shape[0]:
            raise ValueError(
                f"grid {self.grid_rows}x{self.grid_cols} does not tile {g.shape[0]} codeword bits"
            )
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def m(self) -> int:
        return self.generator.shape[0]


def hadamard_code(n: int) -> LinearCode:
    """All-masks code: codeword bit s is the parity <x, s> over s in {0,1}^n.

    Length 2**n, minimum distance exactly 2**(n-1).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    gen = np.array([int_to_bits(s, n) for s in range(2**n)], dtype=np.uint8)
    rows, cols = _balanced_grid(2**n)
    return LinearCode(gen, rows, cols)


def repetition_code(m: int) -> LinearCode:
    """One message bit repeated m times."""
    return LinearCode(np.ones((m, 1), dtype=np.uint8), *_balanced_grid(m))


def cyclic_mask_code(k: int, m: int) -> LinearCode:
    """Length-m code whose rows cycle through the nonzero parity masks on k bits.

    For small k this gives relative distance well above 1/2 - 1/2**k; used to
    spread a k-bit value over m Boolean coordinates.
    """
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    masks = [s for s in range(1, 2**k)]
    gen = np.array([int_to_bits(masks[i % len(masks)], k) for i in range(m)], dtype=np.uint8)
    return LinearCode(gen, *_balanced_grid(m))


def random_linear_code(n: int, m: int, rng: np.random.Generator) -> LinearCode:
    gen = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    return LinearCode(gen, *_balanced_grid(m))


def _as_message_bits(code: LinearCode, x) -> np.ndarray:
    if isinstance(x, (int, np.integer)):
        if not 0 <= x < 2**code.n:
            raise ValueError(f"message {x} out of range for n={code.n}")
        return int_to_bits(int(x), code.n)
    bits = np.asarray(x, dtype=np.uint8)
    if bits.shape != (code.n,):
        raise ValueError(f"message length {bits.shape} != n={code.n}")
    return bits & 1


def encode(code: LinearCode, x) -> np.ndarray:
    """Codeword of ``x`` (an int or a length-n bit vector) over GF(2)."""
    return (code.generator @ _as_message_bits(code, x)) % 2


def min_distance_bruteforce(code: LinearCode) -> int:
    """Minimum weight over all nonzero messages; linearity makes this the distance."""
    if code.n > _BRUTE_FORCE_N_CAP:
        raise ValueError(f"brute force capped at n <= {_BRUTE_FORCE_N_CAP}")
    best = code.m
    for x in range(1, 2**code.n):
        best = min(best, int(encode(code, x).sum()))
    return best


def relative_distance(code: LinearCode) -> float:
    return min_distance_bruteforce(code) / code.m


def grid_cell(code: LinearCode, codeword: np.ndarray, row: int, col: int) -> int:
    """Bit at grid position (row, col) of a codeword laid out row-major."""
    if not (0 <= row < code.grid_rows and 0 <= col < code.grid_cols):
        raise ValueError(f"cell ({row}, {col}) outside {code.grid_rows}x{code.grid_cols} grid")
    return int(codeword[row * code.grid_cols + col])


def save_generator_text(path: str | Path, code: LinearCode) -> None:
    lines = ["".join(str(b) for b in row) for row in code.generator]
    Path(path).write_text("\n".join(lines) + "\n")


def load_generator_text(
    path: str | Path, grid: tuple[int, int] | None = None
) -> LinearCode:
    """Read a plain text bit matrix, one codeword row of 0/1 characters per line."""
    rows = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if set(ln) - {"0", "1"}:
            raise ValueError(f"bad generator row: {ln!r}")
        rows.append([int(ch) for ch in ln])
    gen = np.array(rows, dtype=np.uint8)
    if grid is None:
        grid = _balanced_grid(gen.shape[0])
    return LinearCode(gen, *grid)
