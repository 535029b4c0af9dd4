"""Nearest-neighbour concurrence of the subjacent state along alpha.

The state mixes the ground state with a weight p of the first-excited
manifold. A pure ground state varies smoothly; any p > 0 makes the
concurrence jump where the character of the first excitation changes.
"""
# %%
import numpy as np

from subjacent import ChainModel, MixingSpec, alpha_grid, detect_jump, scan_curve

grid = alpha_grid(0.20, 0.30, 0.002)
chain = ChainModel.uniform(10, 0.25)

# %%
for p in (0.0, 0.1, 0.3, 0.6):
    curve = scan_curve(chain, MixingSpec.fixed_p(p), grid)
    jump = detect_jump(curve)
    where = "no jump" if jump is None else f"jump at {jump.alpha_c:.4f}, size {jump.delta_c:.4f}"
    print(f"p={p:.1f}  C from {curve.values[0]:.4f} to {curve.values[-1]:.4f}  {where}")

# %% A fixed temperature instead of a fixed p: p follows the gap.
curve = scan_curve(chain, MixingSpec.fixed_temperature(1.0), grid[::5])
for pt in curve.points:
    print(f"alpha={pt.alpha:.3f}  gap={pt.gap:.4f}  p={pt.p:.4f}  C={pt.c:.4f}")

# %% Coarse table of the p = 0.3 curve around the jump.
curve = scan_curve(chain, MixingSpec.fixed_p(0.3), alpha_grid(0.238, 0.252, 0.001))
print(np.column_stack([curve.alphas, np.round(curve.values, 5)]))
