"""Concurrence on the (alpha, delta) plane and the anisotropy dependence of alpha_c.

For delta < 1 the fluid-dimer boundary shows up as a drop in concurrence,
for delta > 1 the dimer-Neel boundary as a rise. The extrapolated
alpha_c(delta) approaches 1/2 as a power of delta.
"""
# %%
import warnings

import numpy as np

from subjacent import (ChainModel, GroundStateDegeneracyWarning, MixingSpec, alpha_grid,
                       fit_delta_scaling, phase_diagram_grid, refine_by_gap_crossing, tables)

# alpha = 1/2 is an exact dimer point for every delta; its degeneracy is expected
warnings.simplefilter("ignore", GroundStateDegeneracyWarning)

alphas = alpha_grid(0.0, 0.6, 0.05)
deltas = [0.0, 0.5, 1.0, 1.5, 2.0]
grid = phase_diagram_grid(8, MixingSpec.fixed_p(0.3), alphas, deltas)
print("alpha ", " ".join(f"{a:5.2f}" for a in alphas))
for d, row in zip(deltas, grid):
    print(f"d={d:3.1f} ", " ".join(f"{c:5.3f}" for c in row))

# %% Gap crossings at N = 10 for a few anisotropies.
for delta in (0.0, 0.5, 1.0, 2.0, 5.0):
    a = refine_by_gap_crossing(ChainModel.uniform(10, 0.3, delta), (0.15, 0.48), tol=1e-6)
    ref = (tables.TABLE_A_I if delta < 1 else tables.TABLE_A_II)[delta][10]
    print(f"delta={delta}: alpha_c(N=10)={a:.5f}  reference {ref}")

# %% Power-law approach to 1/2 of the extrapolated values for delta >= 3.
d = np.array(sorted(tables.TABLE_A_II), dtype=float)
limit = np.array([tables.TABLE_A_II[x]["inf"] for x in d])
result = fit_delta_scaling(d, limit, alpha_sup=0.5, log_space=True, delta_min=3.0)
print(result.report())
