"""
Characteristic and Bell difference distributions
================================================

Exact p and q tables for a few small states, together with the identities
they satisfy: p sums to the purity, q is normalized, no Pauli gets more than
purity / 2^n of the q mass, and a stabilizer product state spreads q evenly
over its group.
"""

import numpy as np

from sptomo.pauli import PauliOp, format_pauli
from sptomo.states import (
    apply_depolarizing,
    bell_diff_distribution,
    char_distribution,
    ghz,
    make_sps,
    purity,
    random_mixed,
    random_sps,
)

rng = np.random.default_rng(7)


def show(name, rho, top=6):
    p, q = char_distribution(rho), bell_diff_distribution(rho)
    print(f"--- {name}: n={rho.n}, purity={purity(rho):.4f}")
    print(f"sum p = {p.total():.6f}  sum q = {q.total():.6f}  max q = {q.table.max():.4f}"
          f"  bound = {purity(rho) / 2**rho.n:.4f}")
    for idx in np.argsort(-q.table, kind="stable")[:top]:
        print(f"  {format_pauli(PauliOp.from_index(rho.n, int(idx)))}  q={q.table[idx]:.4f}")


###############################################################################
# GHZ on two qubits: q is uniform on II, XX, YY, ZZ.
show("GHZ_2", ghz(2))

###############################################################################
# A random stabilizer product state, clean and depolarized.
phi = random_sps(3, rng)
print("planted:", phi)
show("planted", make_sps(phi))
show("planted + 20% depolarizing", apply_depolarizing(make_sps(phi), 0.2))

###############################################################################
# A generic mixed state: the mass is spread out and bounded by the purity.
show("random mixed", random_mixed(3, rng))
