"""Coefficient strengthening for integer nonbasic columns.

Standard modularization shifts a ray r_j by an integer vector m (taken
from floor/ceil of r_j); the monoidal variant lets each disjunctive term
use its own integer shift subject to sum(m) >= 0.
"""
import itertools
import math
from fractions import Fraction

from .cglp import BINARY, MIP, Cut, CglpError, alpha_from_multipliers, term_signs
from .rowsystem import FRAC_TOL

WINDOW = 6


class StrengthenError(ValueError):
    pass


def _floor(x):
    return math.floor(x)


def _ceil(x):
    return math.ceil(x)


def shifted_term_value(system, m, j, shift):
    """max_k of the per-term coefficient of column j with r_j - shift."""
    r = system.ray(j)
    rbar = [ri - si for ri, si in zip(r, shift)]
    vals = []
    for sig, u in zip(term_signs(system.q), m.u):
        vals.append(sum(s * rk * uk for s, rk, uk in zip(sig, rbar, u)))
    return max(vals)


def floor_ceil_candidates(r):
    """All floor/ceil shift vectors, smallest |m| first then lexicographic."""
    opts = [sorted({_floor(x), _ceil(x)}) for x in r]
    cands = list(itertools.product(*opts))
    cands.sort(key=lambda m: (sum(abs(x) for x in m), m))
    return cands


def strengthen_standard(system, cut, j):
    """Best coefficient for integer column j over floor/ceil shifts.

    Returns (new coefficient, shift vector).
    """
    m = cut.multipliers
    if m is None:
        raise StrengthenError("cut carries no multipliers")
    if m.mode != MIP:
        raise StrengthenError("standard modularization is not valid for binary-mode cuts")
    if any(x < 0 for row in m.u for x in row):
        raise StrengthenError("multipliers must be nonnegative")
    if j not in system.integer_nonbasics:
        raise StrengthenError(f"column {j} is not an integer nonbasic")
    best, best_m = None, None
    for shift in floor_ceil_candidates(system.ray(j)):
        val = shifted_term_value(system, m, j, shift)
        if best is None or val < best:
            best, best_m = val, shift
    return best, best_m


def strengthen_window(system, cut, j, window=5):
    """Exhaustive minimum over shifts in [-window, window]^q (oracle)."""
    best = None
    for shift in itertools.product(range(-window, window + 1), repeat=system.q):
        val = shifted_term_value(system, cut.multipliers, j, shift)
        if best is None or val < best:
            best = val
    return best


def strengthen_cut(system, cut):
    """Apply standard modularization to every integer column of a MIP cut."""
    alpha = list(cut.alpha)
    shifts = {}
    for j in sorted(system.integer_nonbasics):
        val, shift = strengthen_standard(system, cut, j)
        if val < alpha[j]:
            alpha[j] = val
        shifts[j] = shift
    out = Cut(alpha, cut.multipliers, cut.config, cut.source, strengthened=True)
    out.shifts = shifts
    return out


def shifted_system(system, shifts):
    """System with r_j replaced by r_j - m_j for the given columns."""
    rays = [list(row) for row in system.rays]
    for j, m in shifts.items():
        for k in range(system.q):
            rays[k][j] = rays[k][j] - m[k]
    return system.with_rays(rays)


def modularize_rows(system, columns=None):
    """Shift each integer column so that 0 <= f_i + rbar_i <= 1.

    Uses m = floor(r) when f + r - floor(r) <= 1 and ceil(r) otherwise.
    """
    cols = sorted(system.integer_nonbasics if columns is None else columns)
    shifts = {}
    for j in cols:
        m = []
        for fi, ri in zip(system.f, system.ray(j)):
            fl = _floor(ri)
            m.append(fl if fi + ri - fl <= 1 else _ceil(ri))
        shifts[j] = tuple(m)
    return shifted_system(system, shifts), shifts


def strengthen_three_step(system, shape_or_multipliers, J1=None):
    """Modularize the rows, generate the cut, then modularize the cut.

    ``shape_or_multipliers`` is a Multipliers object or a callable mapping a
    system to a Cut.  The result is valid for the original rows because
    every shift used is integral on integer columns.
    """
    if J1 is not None:
        system = system.__class__(system.f, system.rays, J1, system.shift,
                                  system.col_map, system.mode, system.names)
    mod, row_shifts = modularize_rows(system)
    if callable(shape_or_multipliers):
        cut = shape_or_multipliers(mod)
    else:
        m = shape_or_multipliers
        cut = Cut(alpha_from_multipliers(mod, m), m, None, "cglp")
    if not system.integer_nonbasics:
        return cut
    if cut.multipliers is None:
        final = _regenerate_shifts(mod, cut, shape_or_multipliers)
    else:
        final = strengthen_cut(mod, cut)
    total = {}
    for j in row_shifts:
        total[j] = tuple(a + b for a, b in zip(row_shifts[j], final.shifts.get(j, (0,) * system.q)))
    final.shifts = total
    return final


def _regenerate_shifts(system, cut, generate):
    """Floor/ceil modularization of a cut without multipliers.

    Each candidate shift is applied to the rows and the generator rerun; the
    coefficient of a column depends only on its own ray.
    """
    alpha = list(cut.alpha)
    shifts = {}
    for j in sorted(system.integer_nonbasics):
        best, best_m = alpha[j], (0,) * system.q
        for m in floor_ceil_candidates(system.ray(j)):
            val = generate(shifted_system(system, {j: m})).alpha[j]
            if val < best:
                best, best_m = val, m
        alpha[j] = best
        shifts[j] = best_m
    out = Cut(alpha, None, cut.config, cut.source, strengthened=True)
    out.shifts = shifts
    return out


# ------------------------------------------------------------- monoidal

class MonoidElement:
    def __init__(self, m):
        self.m = tuple(m)
        if sum(self.m) < 0:
            raise StrengthenError("monoid elements need sum(m) >= 0")

    def __repr__(self):
        return f"MonoidElement({self.m})"


def _monoid_value(a, w, m):
    return max(ak + mk * wk for ak, wk, mk in zip(a, w, m))


def _threshold_optimum(a, w):
    """Exact min over m with sum(m) >= 0 by scanning attainable levels.

    Level z is reachable iff sum_k floor((z - a_k)/w_k) >= 0 over positive
    weights.  The optimum lies in [min a, max a] and equals some a_k + m w_k.
    """
    pos = [k for k, wk in enumerate(w) if wk > 0]
    floor_level = max((a[k] for k in range(len(a)) if w[k] <= 0), default=min(a))
    lo, hi = min(a), max(a)
    cands = {hi}
    for k in pos:
        for mk in range(_ceil((lo - a[k]) / w[k]), _floor((hi - a[k]) / w[k]) + 1):
            cands.add(a[k] + mk * w[k])
    for z in sorted(cands):
        if z < floor_level:
            continue
        if sum(_floor((z - a[k]) / w[k]) for k in pos) >= 0:
            m = [_floor((z - a[k]) / w[k]) if k in pos else 0 for k in range(len(a))]
            return _monoid_value(a, w, m), m
    return hi, [0] * len(a)


def strengthen_monoidal(term_alphas, weights, max_iter=None):
    """min over m in M of max_k (term_alphas[k] + m_k weights[k]).

    Greedy transfer: lower the current argmax by one unit and raise the
    term whose raised value is smallest, while that strictly helps.  Falls
    back to the exact level search when the iteration cap is hit.
    Returns (value, MonoidElement, iterations).
    """
    a = list(term_alphas)
    w = list(weights)
    t = len(a)
    if all(wk <= 0 for wk in w):
        return max(a), MonoidElement([0] * t), 0
    if any(wk < 0 for wk in w):
        raise StrengthenError("monoidal weights must be nonnegative")
    pos = [k for k in range(t) if w[k] > 0]
    if max_iter is None:
        spread = float(max(a) - min(a))
        max_iter = int(4 * t * (1 + spread / float(min(w[k] for k in pos))))
    m = [0] * t
    it = 0
    while True:
        vals = [a[k] + m[k] * w[k] for k in range(t)]
        z = max(vals)
        kmax = max((k for k in range(t) if vals[k] == z), key=lambda k: (w[k] > 0, -k))
        if w[kmax] <= 0:
            break
        best_j, best_val = None, None
        for j in pos:
            if j == kmax:
                continue
            nv = a[j] + (m[j] + 1) * w[j]
            if best_val is None or nv < best_val:
                best_j, best_val = j, nv
        if best_j is None or not best_val < z:
            break
        m[kmax] -= 1
        m[best_j] += 1
        it += 1
        if it >= max_iter:
            z, m = _threshold_optimum(a, w)
            return z, MonoidElement(m), it
    return _monoid_value(a, w, m), MonoidElement(m), it


def monoidal_window(term_alphas, weights, window=WINDOW):
    """Exhaustive oracle over m in [-window, window]^t with sum(m) >= 0."""
    a = list(term_alphas)
    w = list(weights)
    best = None
    for m in itertools.product(range(-window, window + 1), repeat=len(a)):
        if sum(m) < 0:
            continue
        if any(mk != 0 and w[k] <= 0 for k, mk in enumerate(m)):
            continue
        val = _monoid_value(a, w, m)
        if best is None or val < best:
            best = val
    return best


def monoidal_weights(m):
    """Per-term weights: v + w for MIP multipliers, positive parts in binary."""
    if m.mode == MIP:
        return [sum(row) for row in m.u]
    return [sum(max(x, 0) for x in row) for row in m.u]


def strengthen_cut_monoidal(system, cut, weights=None, term_values=None):
    """Monoidal strengthening of every integer column of a binary cut.

    ``term_values`` (t x n) defaults to the per-term coefficients of the
    cut multipliers; ``weights`` to monoidal_weights.
    """
    if term_values is None:
        from .cglp import term_alphas
        term_values = term_alphas(system, cut.multipliers)
    if weights is None:
        weights = monoidal_weights(cut.multipliers)
    alpha = list(cut.alpha)
    elems = {}
    for j in sorted(system.integer_nonbasics):
        col = [row[j] for row in term_values]
        val, elem, _ = strengthen_monoidal(col, weights)
        if val < alpha[j]:
            alpha[j] = val
        elems[j] = elem
    out = Cut(alpha, cut.multipliers, cut.config, cut.source, strengthened=True)
    out.monoid = elems
    return out


# ------------------------------------------------------------------ GMI

def gmi_coefficient(f, r, integer):
    """One-row coefficient: split intersection for continuous columns,
    floor/ceil modularized for integer ones."""
    if not integer:
        return max(-r / f, r / (1 - f))
    best = None
    for m in sorted({_floor(r), _ceil(r)}, key=lambda x: (abs(x), x)):
        rb = r - m
        val = max(-rb / f, rb / (1 - f))
        if best is None or val < best:
            best = val
    return best


def gmi_cut(row, integrality=None, frac_tol=FRAC_TOL):
    """Gomory mixed-integer cut alpha.s >= 1 from one tableau row."""
    val = row.f
    frac = val - _floor(val)
    if frac < frac_tol or frac > 1 - frac_tol:
        raise StrengthenError(f"basic value {val} is integral within {frac_tol}")
    flags = list(integrality) if integrality is not None else [False] * len(row.ray)
    alpha = [gmi_coefficient(frac, r, bool(flag)) for r, flag in zip(row.ray, flags)]
    return Cut(alpha, None, None, source="gmi", strengthened=any(flags))
