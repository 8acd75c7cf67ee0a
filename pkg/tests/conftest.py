import itertools
import os
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from tworow.cglp import BINARY, MIP, Multipliers, enumerate_facets, term_signs
from tworow.rowsystem import alww_instance

DATA = os.path.join(os.path.dirname(__file__), "data")

# facet lists of the built-in two-row system, in reference order
MIP_FACETS = [
    ((2, 2, 4, 1, F(12, 7)), (2, F(8, 7), 0, 0), (1, F(2, 7), 2, 2), "T_B"),
    ((F(8, 3), F(4, 3), F(44, 9), F(8, 9), F(4, 3)),
     (F(20, 9), F(4, 3), F(4, 3), F(4, 9)), (F(8, 9), 0, 0, F(16, 9)), "T_B"),
    ((F(8, 3), 2, 4, 1, F(4, 3)), (2, F(4, 3), 0, 0), (1, 0, 2, 2), "T_A"),
    ((F(8, 3), F(4, 3), 12, 0, F(4, 3)), (4, F(4, 3), F(4, 3), 4), (0, 0, 0, 0), "S"),
    ((2, 2, F(68, 7), F(2, 7), F(12, 7)), (F(24, 7), F(8, 7), 0, 0), (F(2, 7), F(2, 7), 2, 2), "T_B"),
]

# 0-1 facets as printed (decimals) with their configuration labels
BINARY_FACETS = [
    ((2.667, 1.333, 12, 0, 1.333), "S"),
    ((2.667, 1.333, 4.889, 0.8889, 1.333), "T_B"),
    ((2, 2, 4, 1, 1.714), "T_B"),
    ((2.947, 1.053, 5.263, 0.8421, 3.579), "T_C1"),
    ((1.63, 2.37, 8.444, 0.4444, 1.926), "T_C1"),
    ((4.364, 2.545, 3.273, 1.091, 0.3636), "T_C2"),
    ((3.765, 3.059, 2.588, 1.176, 0.7059), "T_C2"),
    ((12, 8, 12, 0, -4), "C_A"),
    ((32, 20, -20, 4, 12), "C_B"),
    ((12, 8, 44, -4, -4), "C_B"),
    ((-2, 6, 52, 2, 4), "C_C"),
    ((8, -4, 12, 16, 44), "C_B"),
]


def normalized_draw(rng, f, mode=MIP):
    """Random nonnegative MIP multipliers meeting every normalization row at equality."""
    u = []
    for s in term_signs(len(f)):
        a = F(rng.randint(0, 30), rng.randint(1, 12))
        b = F(rng.randint(0, 30), rng.randint(1, 12))
        if a == b == 0:
            b = F(1)
        g = [f[k] if s[k] < 0 else 1 - f[k] for k in range(2)]
        scale = 1 / (g[0] * a + g[1] * b)
        u.append((a * scale, b * scale))
    return Multipliers(u, mode)


def lattice_minimum(system, alpha, window=3, int_range=2):
    """min alpha.s over s >= 0 with f + R s integral, x and s_J1 enumerated."""
    R = system.rays_array()
    f = system.f_array()
    ints = sorted(system.integer_nonbasics)
    cont = [j for j in range(system.n) if j not in system.integer_nonbasics]
    a = np.array([float(x) for x in alpha])
    best = np.inf
    for sj in itertools.product(range(int_range + 1), repeat=len(ints)):
        base = f + R[:, ints] @ np.array(sj, float) if ints else f
        fixed = a[ints] @ np.array(sj, float) if ints else 0.0
        for x in itertools.product(range(-window, window + 2), repeat=system.q):
            res = linprog(a[cont], A_eq=R[:, cont], b_eq=np.array(x, float) - base,
                          bounds=(0, None), method="highs")
            if res.status == 0:
                best = min(best, fixed + res.fun)
    return best


def sig4(x, y):
    """Agreement to 4 significant digits."""
    return f"{float(x):.4g}" == f"{float(y):.4g}"


def match_binary(cut_alpha):
    """Index into BINARY_FACETS whose printed values agree to 4 significant digits."""
    for k, (ref, _) in enumerate(BINARY_FACETS):
        if all(sig4(a, r) for a, r in zip(cut_alpha, ref)):
            return k
    return None


@pytest.fixture(scope="session")
def alww():
    return alww_instance()


@pytest.fixture(scope="session")
def mip_facets(alww):
    return enumerate_facets(alww, MIP)


@pytest.fixture(scope="session")
def binary_facets(alww):
    return enumerate_facets(alww, BINARY)


def by_alpha(cuts, alpha):
    alpha = tuple(F(a) for a in alpha)
    for c in cuts:
        if tuple(c.alpha) == alpha:
            return c
    return None
