"""
Local commutation and local spans
=================================

Five-qubit samples that commute qubit by qubit pin down a single product
basis. This script walks through the packed Pauli representation, the
local-commutation count, and the extension step.
"""

from sptomo.pauli import (
    LocalSpan,
    extensions,
    local_anticommute_count,
    local_span,
    parse_pauli,
    symplectic_product,
)

###############################################################################
# Operators are two packed bit vectors; qubit 0 is the leftmost character.
samples = [parse_pauli(t) for t in ("XIZII", "IYZYI", "IIIYZ")]
for op in samples:
    print(f"{op}: x={op.x:05b} z={op.z:05b}")

###############################################################################
# XX and ZZ commute as operators but anticommute on both qubits.
xx, zz = parse_pauli("XX"), parse_pauli("ZZ")
print("symplectic product:", symplectic_product(xx, zz))
print("local anticommutations:", local_anticommute_count(xx, zz))

###############################################################################
# The three samples are pairwise locally commuting, so their local span is
# defined. Every qubit is covered, leaving exactly one product group.
span = local_span(samples)
print("span:", span.to_json(), "assigned:", span.assigned_count)
print("extensions:", [g.axes for g in extensions(span)])

###############################################################################
# Dropping the last sample leaves qubit 4 free: three groups extend it.
partial = local_span(samples[:2])
print("partial span:", partial.to_json())
print("extensions:", [g.axes for g in extensions(partial)])
print("from JSON:", extensions(LocalSpan.from_json("X-Z"))[:3])
