import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from tworow.cglp import (BINARY, MIP, Cut, Multipliers, alpha_from_multipliers, norm_coeffs,
                         term_alphas, term_signs, verify_cut_valid)
from tworow.rowsystem import QRowSystem
from tworow.simplex import TableauRow
from tworow.strengthen import (MonoidElement, StrengthenError, floor_ceil_candidates, gmi_coefficient,
                               gmi_cut, modularize_rows, monoidal_window, shifted_system,
                               strengthen_cut, strengthen_cut_monoidal, strengthen_monoidal,
                               strengthen_standard, strengthen_three_step, strengthen_window)

from conftest import MIP_FACETS, lattice_minimum, normalized_draw


def _frac(rng, lo, hi, den=12):
    """Random non-integral fraction in [lo, hi]."""
    while True:
        x = F(rng.randint(lo * den, hi * den), den)
        if x.denominator != 1:
            return x


def random_system(rng, n=5, ints=None, lo=-3, hi=3):
    f = [F(rng.randint(1, 11), 12) for _ in range(2)]
    rays = [[_frac(rng, lo, hi) for _ in range(n)] for _ in range(2)]
    if ints is None:
        ints = [j for j in range(n) if rng.random() < 0.5] or [0]
    return QRowSystem(f, rays, ints)


def mip_cut(system, m):
    return Cut(alpha_from_multipliers(system, m), m)


# ---------------------------------------------------- standard modularization

def test_floor_ceil_candidates_order():
    assert floor_ceil_candidates((F(3, 2), F(-1, 2))) == [(1, 0), (1, -1), (2, 0), (2, -1)]
    assert floor_ceil_candidates((2, -3)) == [(2, -3)]


def test_integral_ray_gives_zero(alww):
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[0])
    alpha, v, w, _ = MIP_FACETS[0]
    cut = mip_cut(sys_, Multipliers.from_vw(v, w))
    val, shift = strengthen_standard(sys_, cut, 0)
    assert val == 0 and shift == (2, 1)


def test_reference_cut_integer_column(alww):
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[2])
    alpha, v, w, _ = MIP_FACETS[0]
    cut = mip_cut(sys_, Multipliers.from_vw(v, w))
    val, _ = strengthen_standard(sys_, cut, 2)
    assert val <= alpha[2] == 4
    assert 0 <= val <= 1
    assert val == strengthen_window(sys_, cut, 2, window=6)


def test_floor_ceil_matches_window_and_bounds():
    rng = random.Random(11)
    for _ in range(1000):
        sys_ = random_system(rng, n=1, ints=[0])
        cut = mip_cut(sys_, normalized_draw(rng, sys_.f))
        val, shift = strengthen_standard(sys_, cut, 0)
        assert val == strengthen_window(sys_, cut, 0, window=5)
        assert 0 <= val <= 1
        assert val <= cut.alpha[0]
        assert all(abs(r - m) < 1 for r, m in zip(sys_.ray(0), shift))


def test_rejections(alww, binary_facets):
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[1])
    alpha, v, w, _ = MIP_FACETS[0]
    cut = mip_cut(sys_, Multipliers.from_vw(v, w))
    with pytest.raises(StrengthenError, match="not an integer nonbasic"):
        strengthen_standard(sys_, cut, 0)
    with pytest.raises(StrengthenError, match="binary"):
        strengthen_standard(sys_, binary_facets[0], 1)
    with pytest.raises(StrengthenError, match="multipliers"):
        strengthen_standard(sys_, Cut(alpha), 1)
    neg = Multipliers([(1, -1)] + [(1, 1)] * 3)
    with pytest.raises(StrengthenError, match="nonnegative"):
        strengthen_standard(sys_, Cut(alpha, neg), 1)


def test_convex_combination_identity():
    # with normalization at equality each term coefficient is a convex
    # combination of the signed ray components over the f-expressions
    rng = random.Random(12)
    for _ in range(100):
        sys_ = random_system(rng)
        m = normalized_draw(rng, sys_.f)
        shifted, _ = modularize_rows(sys_)
        g = norm_coeffs(sys_.f)
        per_term = term_alphas(shifted, m)
        for i, (sig, u) in enumerate(zip(term_signs(2), m.u)):
            lam = [u[k] * g[i][k] for k in range(2)]
            assert sum(lam) == 1
            for j in range(shifted.n):
                r = shifted.ray(j)
                comb = sum(lam[k] * sig[k] * r[k] / g[i][k] for k in range(2))
                assert per_term[i][j] - comb == 0


def test_strengthened_cuts_valid_and_monotone():
    rng = random.Random(13)
    for trial in range(500):
        sys_ = random_system(rng)
        cut = mip_cut(sys_, normalized_draw(rng, sys_.f))
        strong = strengthen_cut(sys_, cut)
        for j in range(sys_.n):
            if j in sys_.integer_nonbasics:
                assert 0 <= strong.alpha[j] <= min(1, cut.alpha[j])
            else:
                assert strong.alpha[j] == cut.alpha[j]
        # the strengthened cut is the plain cut of the shifted rows
        shifted = shifted_system(sys_, strong.shifts)
        assert list(strong.alpha) == alpha_from_multipliers(shifted, cut.multipliers)
        assert verify_cut_valid(shifted.to_float(), strong, MIP)
        if trial < 10:
            assert lattice_minimum(sys_.to_float(), strong.alpha, int_range=1) >= 1 - 1e-7


# ------------------------------------------------------------- three step

def test_modularized_rows_in_unit_box():
    rng = random.Random(14)
    for _ in range(200):
        sys_ = random_system(rng)
        mod, shifts = modularize_rows(sys_)
        for j in sys_.integer_nonbasics:
            for fi, ri in zip(mod.f, mod.ray(j)):
                assert 0 <= fi + ri <= 1
        for j in range(sys_.n):
            if j not in sys_.integer_nonbasics:
                assert mod.ray(j) == sys_.ray(j)


def test_three_step_without_integers_is_plain(alww):
    m = Multipliers.from_vw(*MIP_FACETS[1][1:3])
    cut = strengthen_three_step(alww, m, J1=[])
    assert list(cut.alpha) == alpha_from_multipliers(alww, m)


def test_three_step_valid_and_compared():
    rng = random.Random(15)
    better = worse = 0
    for _ in range(200):
        sys_ = random_system(rng)
        m = normalized_draw(rng, sys_.f)
        three = strengthen_three_step(sys_, m)
        single = strengthen_cut(sys_, mip_cut(sys_, m))
        shifted = shifted_system(sys_, three.shifts)
        assert verify_cut_valid(shifted.to_float(), three, MIP)
        for j in sys_.integer_nonbasics:
            assert 0 <= three.alpha[j] <= 1
            better += three.alpha[j] < single.alpha[j]
            worse += three.alpha[j] > single.alpha[j]
    print(f"three-step vs single-step on integer columns: {better} smaller, {worse} larger")


def test_three_step_with_shape_callable(alww):
    from tworow.fixed_shapes import applicable_shapes, shape_cut
    sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=[1, 3])
    shape = applicable_shapes(alww.f, ("triangle",))[0]
    cut = strengthen_three_step(sys_, lambda s: shape_cut(s, shape), J1=[1, 3])
    assert lattice_minimum(sys_.to_float(), cut.alpha, int_range=1) >= 1 - 1e-7


# ---------------------------------------------------------------- monoidal

def window_oracle(a, w, window=6):
    """Vectorized exhaustive minimum over m in [-window, window]^t with sum(m) >= 0."""
    t = len(a)
    grid = np.array(list(itertools.product(range(-window, window + 1), repeat=t)))
    grid = grid[grid.sum(axis=1) >= 0]
    vals = (np.asarray(a, float) + grid * np.asarray(w, float)).max(axis=1)
    return vals.min()


def test_monoidal_balanced_example():
    val, elem, it = strengthen_monoidal([3, -1, -1, -1], [1, 1, 1, 1])
    assert val == 0
    assert sum(elem.m) >= 0 and elem.m == (-3, 1, 1, 1)
    assert val == monoidal_window([3, -1, -1, -1], [1, 1, 1, 1])
    assert it <= 9


def test_monoidal_matches_window():
    rng = random.Random(16)
    for _ in range(500):
        a = [F(rng.randint(-36, 36), 12) for _ in range(4)]
        w = [F(rng.randint(12, 24), 12) for _ in range(4)]
        val, elem, _ = strengthen_monoidal(a, w)
        assert sum(elem.m) >= 0
        assert val == max(ak + mk * wk for ak, mk, wk in zip(a, elem.m, w))
        assert float(val) == pytest.approx(window_oracle(a, w), abs=1e-12)
        assert val <= max(a)


def test_monoidal_fallback_is_exact():
    a, w = [F(5), F(-2), F(1, 3), F(0)], [F(1, 2), F(1), F(2), F(3, 2)]
    capped, _, _ = strengthen_monoidal(a, w, max_iter=1)
    assert capped == strengthen_monoidal(a, w)[0]
    assert float(capped) == pytest.approx(window_oracle(a, w, window=12))


def test_monoidal_degenerate_weights():
    assert strengthen_monoidal([2, 1, 0, 0], [0, 0, 0, 0])[0] == 2
    with pytest.raises(StrengthenError):
        strengthen_monoidal([2, 1, 0, 0], [1, -1, 1, 1])
    with pytest.raises(StrengthenError):
        MonoidElement([-1, 0, 0, 0])


def test_monoidal_binary_facets_valid(alww, binary_facets):
    rng = random.Random(17)
    fsys = alww.to_float()
    for cut in binary_facets:
        for _ in range(3):
            J1 = rng.sample(range(alww.n), rng.randint(1, 2))
            sys_ = QRowSystem(alww.f, alww.rays, integer_nonbasics=J1)
            strong = strengthen_cut_monoidal(sys_, cut)
            assert all(a <= b for a, b in zip(strong.alpha, cut.alpha))
            check = QRowSystem(fsys.f, fsys.rays, J1, mode="float")
            assert verify_cut_valid(check, strong, BINARY, integer_window=3)


def test_monoidal_mip_weights_are_row_sums(alww):
    from tworow.strengthen import monoidal_weights
    m = Multipliers.from_vw(*MIP_FACETS[0][1:3])
    assert monoidal_weights(m) == [v + w for v, w in zip(m.v, m.w)]


# --------------------------------------------------------------------- GMI

def test_gmi_examples():
    assert gmi_coefficient(F(1, 2), F(1), False) == 2
    assert gmi_coefficient(F(1, 2), F(3, 2), True) == 1
    row = TableauRow(0, 2.5, [1.0, 1.5], [(1, "L"), (2, "L")])
    cut = gmi_cut(row, [False, True])
    assert cut.alpha == pytest.approx((2, 1))
    with pytest.raises(StrengthenError, match="integral"):
        gmi_cut(TableauRow(0, 3.0, [1.0], [(1, "L")]))


def test_gmi_valid_one_row():
    rng = random.Random(18)
    for _ in range(200):
        f = F(rng.randint(1, 11), 12)
        rays = [_frac(rng, -3, 3) for _ in range(4)]
        flags = [rng.random() < 0.5 for _ in range(4)]
        cut = gmi_cut(TableauRow(0, f + rng.randint(-2, 2), rays, None), flags)
        plain = gmi_cut(TableauRow(0, f, rays, None))
        assert all(a <= b + 1e-12 for a, b in zip(cut.alpha, plain.alpha))
        sys_ = QRowSystem([f], [rays], [j for j in range(4) if flags[j]])
        fsys = sys_.to_float()
        assert verify_cut_valid(fsys, plain, MIP)
        # integer columns: valid on the rows shifted by the chosen integers
        shifts = {}
        for j in sys_.integer_nonbasics:
            r = rays[j]
            shifts[j] = min(floor_ceil_candidates((r,)),
                            key=lambda m: gmi_coefficient(f, r - m[0], False))
        assert verify_cut_valid(shifted_system(fsys, shifts), cut, MIP)
