#!/usr/bin/env python3
"""Compiling a quantum message into a deterministic classical one.

A quantum-classical protocol in canonical form (Alice sends a state, the
referee measures with the operator named by Bob's message) turns into a fully
classical protocol: Alice sends the learning record of her state against the
referee's operator family, and the referee accepts with the reconstructed
estimate.  Every input pair's acceptance moves by at most delta; since a
deterministic message is a valid randomized message, this also covers the
randomized-replacement view.
"""

from smplab.protocols import toy_quantum_equality
from smplab.smp import exact_acceptance, protocol_cost
from smplab.transforms import compile_qc_to_cc

delta = 0.1
p = toy_quantum_equality(1)
result = compile_qc_to_cc(p, delta, r=3)
compiled = result.protocol

a0, b0, _ = protocol_cost(p)
a1, b1, _ = protocol_cost(compiled)
print(f"original: Alice {a0} qubit(s) + Bob {b0} bits")
print(f"compiled: Alice {a1} bits (deterministic) + Bob {b1} bits")

print("\nlearning records per input:")
for x in p.alice_inputs:
    rec = result.records[x]
    print(f"  x={x}: entries {rec.entries}, {rec.encoded_bit_length} bits")

print("\nacceptance before -> after (all 16 pairs):")
worst = 0.0
for x in p.alice_inputs:
    cells = []
    for y in p.bob_inputs:
        before = exact_acceptance(p, x, y)
        after = exact_acceptance(compiled, x, y)
        worst = max(worst, abs(after - before))
        cells.append(f"{before:.2f}->{after:.2f}")
    print(f"  x={x}: " + "  ".join(cells))
print(f"\nworst acceptance change {worst:.6f} <= delta = {delta}")
