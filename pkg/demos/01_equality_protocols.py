#!/usr/bin/env python3
"""Two ways to check equality of n-bit strings with one message each.

With a shared random string, one parity bit per party per repetition already
does the job: agreeing inputs always match, disagreeing ones collide with
probability 2^-k.  Without shared randomness the parties hedge with an
error-correcting code, sending a random column/row of their codeword's grid
view; disagreeing inputs then collide at exactly the codeword agreement rate.
"""

from smplab.codes import hadamard_code
from smplab.protocols import (
    equality_code,
    equality_code_acceptance,
    equality_function,
    equality_public,
)
from smplab.smp import exact_acceptance, protocol_cost, worst_case_error

n = 4

print("=== shared random string (public coin) ===")
for k in (1, 2, 3):
    p = equality_public(n, k)
    same = exact_acceptance(p, 5, 5)
    diff = exact_acceptance(p, 5, 9)
    a, b, total = protocol_cost(p)
    print(
        f"k={k}: accept(x=x) = {same}, accept(x!=y) = {diff} "
        f"(expected {2.0**-k}), cost {a}+{b} bits"
    )

print()
print("=== random code row/column (private coin) ===")
code = hadamard_code(n)
p1 = equality_code(n, code, reps=1)
a, b, total = protocol_cost(p1)
print(f"one repetition costs {a}+{b} bits (column+index, row+index)")
print(f"accept(3, 3)  = {exact_acceptance(p1, 3, 3)}")
print(f"accept(3, 12) = {exact_acceptance(p1, 3, 12)}  (codewords agree on half the grid)")

print()
print("worst-case error as repetitions accumulate:")
for reps in (1, 2, 4, 6):
    worst = max(
        abs(float(x == y) - equality_code_acceptance(code, x, y, reps))
        for x in range(2**n)
        for y in range(2**n)
    )
    print(f"  reps={reps}: worst error {worst:.6f}")

print()
print("cross-check: closed form vs full enumeration at reps=2:")
p2 = equality_code(n, code, reps=2)
for x, y in [(0, 0), (1, 2), (5, 10)]:
    enum = exact_acceptance(p2, x, y)
    closed = equality_code_acceptance(code, x, y, reps=2)
    print(f"  ({x:2d},{y:2d}): enumerated {enum:.6f}, closed form {closed:.6f}")

print()
f = equality_function(2)
print(f"exhaustive worst-case error at n=2, reps=3: {worst_case_error(equality_code(2, reps=3), f):.6f}")
