"""Published reference values used for reproduction reports and tests.

All critical couplings are dimensionless; concurrence values are in ebits.
"""

# alpha_c(N) of the isotropic chain at p = 0.30
TABLE_I = {8: 0.24630, 10: 0.24449, 12: 0.24349, 14: 0.24286, 16: 0.24248,
           18: 0.24221, 20: 0.24201, 22: 0.24180, 24: 0.24164}

# concurrence jump Delta C(N) at p = 0.30
TABLE_II = {8: 3.2e-2, 10: 2.0e-2, 12: 1.4e-2, 14: 1.1e-2, 16: 8.3e-3,
            18: 6.8e-3, 20: 5.6e-3, 22: 4.8e-3, 24: 4.2e-3}

# p -> (Delta C(infinity), standard error)
TABLE_III = {0.01: (8.3e-4, 2.9e-7), 0.05: (8.6e-4, 4.1e-6), 0.10: (9.1e-4, 9.1e-6),
             0.15: (9.6e-4, 1.5e-5), 0.20: (1.0e-3, 1.7e-5), 0.25: (1.1e-3, 2.5e-5),
             0.30: (1.1e-3, 1.8e-5), 1.00: (1.8e-3, 8.4e-5)}

SIZES_XXZ = (6, 8, 10, 12, 14, 16)

# delta -> alpha_c for N = 6..16, then the N -> infinity extrapolation and beta
_A_I_DELTAS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
_A_I_ROWS = {
    6: (0.33334, 0.32259, 0.31250, 0.30304, 0.29412, 0.28572, 0.27778, 0.27028, 0.26316, 0.25642),
    8: (0.32924, 0.31856, 0.30851, 0.29906, 0.29017, 0.28178, 0.27387, 0.26640, 0.25934, 0.25265),
    10: (0.32736, 0.31668, 0.30663, 0.29717, 0.28828, 0.27989, 0.27199, 0.26453, 0.25749, 0.25082),
    12: (0.32628, 0.31560, 0.30556, 0.29611, 0.28722, 0.27884, 0.27094, 0.26349, 0.25646, 0.24980),
    14: (0.32562, 0.31494, 0.30490, 0.29546, 0.28657, 0.2782, 0.27031, 0.26286, 0.25583, 0.24918),
    16: (0.32518, 0.31450, 0.30447, 0.29503, 0.28614, 0.27778, 0.26989, 0.26245, 0.25542, 0.24877),
    "inf": (0.32347, 0.31286, 0.30284, 0.29342, 0.28464, 0.27632, 0.26862, 0.26120, 0.25404, 0.24732),
    "beta": (-1.80, -1.82, -1.82, -1.83, -1.88, -1.90, -2.00, -2.01, -1.92, -1.88),
}

_A_II_DELTAS = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
_A_II_ROWS = {
    6: (0.25000, 0.33334, 0.37500, 0.40000, 0.41667, 0.42858, 0.4375, 0.44445, 0.45000, 0.45455),
    8: (0.24630, 0.32928, 0.37127, 0.39664, 0.41363, 0.42581, 0.43497, 0.44212, 0.44784, 0.45253),
    10: (0.24449, 0.32739, 0.36956, 0.39512, 0.41228, 0.4246, 0.43388, 0.44111, 0.44692, 0.45168),
    12: (0.24349, 0.32634, 0.36861, 0.39428, 0.41152, 0.42392, 0.43325, 0.44054, 0.44639, 0.45120),
    14: (0.24288, 0.32570, 0.36803, 0.39376, 0.41106, 0.42350, 0.43288, 0.44020, 0.44608, 0.45090),
    16: (0.24248, 0.32528, 0.36766, 0.39342, 0.41076, 0.42323, 0.43263, 0.43997, 0.44587, 0.45071),
    "inf": (0.24116, 0.32382, 0.36647, 0.39226, 0.40973, 0.42228, 0.43172, 0.43916, 0.44517, 0.45002),
    "beta": (-1.96, -1.91, -2.00, -1.93, -1.95, -1.93, -1.89, -1.92, -1.97, -1.92),
}


def _by_delta(deltas, rows):
    return {d: {key: values[i] for key, values in rows.items()} for i, d in enumerate(deltas)}


# TABLE_A_I[delta][N] -> alpha_c; also keys "inf" and "beta"
TABLE_A_I = _by_delta(_A_I_DELTAS, _A_I_ROWS)
TABLE_A_II = _by_delta(_A_II_DELTAS, _A_II_ROWS)

SIGMAS = (0.05, 0.08, 0.10, 0.13, 0.15, 0.18, 0.20)
SIZES_DISORDER = (6, 8, 10, 12, 14)

# (sigma, N) -> (alpha_c, fit standard error) at p = 0.2689
TABLE_A_III = {
    (0.05, 6): (0.25434, 0.0081), (0.05, 8): (0.24881, 0.0044), (0.05, 10): (0.24608, 0.0036),
    (0.05, 12): (0.24820, 0.0028), (0.05, 14): (0.24834, 0.0023),
    (0.08, 6): (0.25521, 0.0068), (0.08, 8): (0.25038, 0.00085), (0.08, 10): (0.24750, 0.0024),
    (0.08, 12): (0.25002, 0.0013), (0.08, 14): (0.24968, 0.00074),
    (0.10, 6): (0.25567, 0.0061), (0.10, 8): (0.25154, 0.0011), (0.10, 10): (0.25415, 0.0020),
    (0.10, 12): (0.25416, 0.0013), (0.10, 14): (0.25629, 0.00057),
    (0.13, 6): (0.25975, 0.0030), (0.13, 8): (0.25804, 0.0010), (0.13, 10): (0.25761, 0.00053),
    (0.13, 12): (0.26736, 0.00096), (0.13, 14): (0.25547, 0.00085),
    (0.15, 6): (0.26095, 0.0026), (0.15, 8): (0.26053, 0.00045), (0.15, 10): (0.26215, 0.0012),
    (0.15, 12): (0.25951, 0.00075), (0.15, 14): (0.27500, 0.00078),
    (0.18, 6): (0.26237, 0.0019), (0.18, 8): (0.26618, 0.00079), (0.18, 10): (0.26659, 0.00057),
    (0.18, 12): (0.27478, 0.00078), (0.18, 14): (0.23801, 0.00065),
    (0.20, 6): (0.26442, 0.0018), (0.20, 8): (0.26821, 0.00085), (0.20, 10): (0.27002, 0.00089),
    (0.20, 12): (0.27985, 0.00078), (0.20, 14): (0.27977, 0.00042),
}

# same layout at p = 0.1344
TABLE_A_IV = {
    (0.05, 6): (0.25201, 0.0046), (0.05, 8): (0.24879, 0.0020), (0.05, 10): (0.24799, 0.0016),
    (0.05, 12): (0.24826, 0.0015), (0.05, 14): (0.24465, 0.0014),
    (0.08, 6): (0.25353, 0.0043), (0.08, 8): (0.25034, 0.00071), (0.08, 10): (0.25225, 0.0012),
    (0.08, 12): (0.25044, 0.000033), (0.08, 14): (0.25357, 0.00078),
    (0.10, 6): (0.25567, 0.0031), (0.10, 8): (0.25201, 0.0000014), (0.10, 10): (0.25557, 0.00099),
    (0.10, 12): (0.25363, 0.00048), (0.10, 14): (0.26879, 0.00081),
    (0.13, 6): (0.25860, 0.0055), (0.13, 8): (0.25701, 0.0024), (0.13, 10): (0.25590, 0.0012),
    (0.13, 12): (0.25849, 0.00081), (0.13, 14): (0.26155, 0.00092),
    (0.15, 6): (0.25943, 0.0044), (0.15, 8): (0.25749, 0.0023), (0.15, 10): (0.25878, 0.0010),
    (0.15, 12): (0.26269, 0.00070), (0.15, 14): (0.26787, 0.00094),
    (0.18, 6): (0.26058, 0.0034), (0.18, 8): (0.26094, 0.0011), (0.18, 10): (0.26262, 0.0011),
    (0.18, 12): (0.26387, 0.00082), (0.18, 14): (0.27721, 0.00098),
    (0.20, 6): (0.26540, 0.0037), (0.20, 8): (0.26238, 0.00095), (0.20, 10): (0.26604, 0.00062),
    (0.20, 12): (0.26943, 0.00064), (0.20, 14): (0.28565, 0.00079),
}

# mixing probabilities of the two disorder tables; 0.2689 = 1/(1+e)
P_A_III = 0.2689
P_A_IV = 0.1344
