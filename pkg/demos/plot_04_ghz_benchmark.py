"""
GHZ: a state far from every product state
=========================================

GHZ_4 has fidelity 1/2 with |0000> and |1111> and no product state does
better. With tau = 1/2 the formula for the clique size is large, so this run
overrides k and m_clique with small values. The learner still finds a
computational-basis state.
"""

import numpy as np

from sptomo.learner import BasisMeasurer, derive_params, run
from sptomo.oracle import brute_force_fsp
from sptomo.sampler import build_sampler
from sptomo.states import fidelity, ghz

rho = ghz(4)
print("oracle:", brute_force_fsp(rho))

default = derive_params(4, epsilon=0.1, tau=0.5)
print(f"unmodified: k={default.k}, m_clique={default.m_clique}")

params = derive_params(4, epsilon=0.1, tau=0.5, overrides={"k": 3, "m_clique": 20})
sampler, measurer = build_sampler(rho), BasisMeasurer(rho)
fids = []
for seed in range(10):
    report = run(sampler, measurer, params, seed=seed)
    fids.append(fidelity(rho, report.output_state))
    print(f"seed {seed}: {report.output_state}  groups measured={report.distinct_groups_measured}")
print("mean output fidelity:", np.mean(fids))
