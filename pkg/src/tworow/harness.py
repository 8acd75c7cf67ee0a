"""Separation rounds on MIP instances and the random-objective gap study."""
import itertools
import logging
import math
import time
import warnings
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .fixed_shapes import applicable_shapes, shape_cut
from .instance_io import RoundReport
from .rational import exact_lp, solve_linear
from .rowsystem import FRAC_TOL, QRowSystem
from .simplex import OPTIMAL, CutRow, extract_rows, solve_lp
from .strengthen import gmi_cut

log = logging.getLogger(__name__)

CUT_TIGHT_TOL = 1e-6
VALIDITY_TOL = 1e-7
MIN_VIOLATION = 1e-6
RAY_ZERO = 1e-12
SHAPE_MARGIN = 1e-6


class HarnessError(RuntimeError):
    pass


class ValidityBreach(HarnessError):
    """A generated cut removes a known integer feasible point."""


class RoundOptions:
    def __init__(self, rounds=5, gmi=True, triangles=False, cones=False, strengthen=False,
                 mode="mip", max_pairs=None, time_limit=None):
        if mode not in ("mip", "binary"):
            raise ValueError(f"unknown mode {mode!r}")
        self.rounds = rounds
        self.gmi = gmi
        self.triangles = triangles
        self.cones = cones
        self.strengthen = strengthen
        self.mode = mode
        self.max_pairs = max_pairs
        self.time_limit = time_limit


# ------------------------------------------------------------ rounds

def _integral(x, tol=FRAC_TOL):
    return math.isfinite(x) and abs(x - round(x)) <= tol


def _logical_integer(instance, rows, senses_rhs):
    """Row activities that are integer whenever x is: integer coefficients on
    integer variables only, and an integral bound."""
    flags = []
    for row, rhs in zip(rows, senses_rhs):
        ok = _integral(rhs, 1e-12)
        for j, a in enumerate(row):
            if a != 0 and not (instance.is_integer[j] and _integral(a, 1e-12)):
                ok = False
                break
        flags.append(ok)
    return flags


class _Tableau:
    """Tableau snapshot with column meanings for mapping cuts back to x."""

    def __init__(self, instance, pool, solution):
        self.instance = instance
        self.solution = solution
        self.columns = solution.nonbasic_columns()
        n = instance.num_vars
        self.row_coeffs = np.array(instance.dense_rows() + [list(c.coeffs) for c in pool],
                                   dtype=float).reshape(-1, n)
        rhs = list(instance.rhs) + [c.rhs for c in pool]
        logical_int = _logical_integer(instance, self.row_coeffs.tolist(), rhs)
        lo, up = solution._lower, solution._upper
        flags = []
        for j, kind in self.columns:
            if j < n:
                bound = lo[j] if kind == "L" else up[j] if kind == "U" else 0.0
                flags.append(bool(instance.is_integer[j]) and _integral(bound, 1e-12))
            else:
                flags.append(logical_int[j - n] and kind in ("L", "U"))
        self.integrality = flags

    def to_structural(self, alpha, rhs=1.0):
        """Rewrite alpha.s >= rhs as coeffs.x >= b over structural variables."""
        n = self.instance.num_vars
        lo, up = self.solution._lower, self.solution._upper
        coeffs = np.zeros(n)
        b = float(rhs)
        for a, (j, kind) in zip(alpha, self.columns):
            a = float(a)
            if a == 0:
                continue
            g = np.zeros(n)
            if j < n:
                g[j] = 1.0
            else:
                g = self.row_coeffs[j - n].copy()
            if kind == "L":
                coeffs += a * g
                b += a * lo[j]
            elif kind == "U":
                coeffs -= a * g
                b -= a * up[j]
            elif kind == "F+":
                coeffs += a * g
            else:
                coeffs -= a * g
        return coeffs, b


def _normalized_row(coeffs, b, tag):
    scale = max(np.abs(coeffs).max(initial=0.0), abs(b), 1e-12)
    return CutRow(coeffs / scale, b / scale, tag)


def _check_validity(row, known):
    for x in known:
        if row.slack(x) < -VALIDITY_TOL * (1 + np.abs(row.coeffs).sum()):
            raise ValidityBreach(f"{row.tag} cut violated by known integer point (slack {row.slack(x):.3g})")


def generate_cuts(instance, pool, solution, options):
    """Cuts from the current optimal tableau, in structural form."""
    tab = _Tableau(instance, pool, solution)
    n = instance.num_vars
    x = solution.values
    cand = [v for v in solution.basic_order
            if v < n and instance.is_integer[v]]
    frac = [v for v in cand if not _integral(x[v])]
    rows = {r.basic_var: r for r in extract_rows(solution, frac)} if frac else {}
    cuts = []
    if options.gmi:
        for v in frac:
            c = gmi_cut(rows[v], tab.integrality)
            cuts.append(("gmi", c.alpha))
    if options.triangles or options.cones:
        kinds = []
        if options.triangles:
            kinds.append("triangle")
        if options.cones and options.mode == "binary":
            kinds.append("cone")
        pairs = list(itertools.combinations(frac, 2))
        if options.max_pairs is not None:
            pairs = pairs[:options.max_pairs]
        ints = [j for j, flag in enumerate(tab.integrality) if flag]
        for a, b in pairs:
            ra, rb = rows[a], rows[b]
            rays = [[r if abs(r) > RAY_ZERO else 0.0 for r in row.ray] for row in (ra, rb)]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                system = QRowSystem([x[a] - math.floor(x[a]), x[b] - math.floor(x[b])], rays,
                                    ints, [math.floor(x[a]), math.floor(x[b])], mode="float")
            binary_pair = all(instance.lower[v] == 0 and instance.upper[v] == 1 for v in (a, b))
            for shape in applicable_shapes(system.f, kinds, SHAPE_MARGIN):
                if shape.kind == "cone" and not binary_pair:
                    continue
                c = shape_cut(system, shape, strengthen=options.strengthen)
                cuts.append((f"{shape.kind}{shape.id}:{a},{b}", _expand(c.alpha, system, len(ra.ray))))
    out = []
    for tag, alpha in cuts:
        coeffs, b = tab.to_structural(alpha)
        row = _normalized_row(coeffs, b, tag)
        if row.slack(x[:n]) < -MIN_VIOLATION:
            out.append(row)
    return out


def _expand(alpha, system, n_full):
    """Undo zero-column removal so alpha lines up with the tableau columns."""
    full = [0.0] * n_full
    for k, j in enumerate(system.col_map):
        full[j] = alpha[k]
    return full


def gap_closed(z_cut, z_lp, z_ip, tol=1e-6):
    """100 (z_cut - z_lp) / (z_ip - z_lp); over-closure is a validity breach."""
    span = z_ip - z_lp
    if span <= tol * (1 + abs(z_ip)):
        return 100.0
    if z_cut > z_ip + tol * (1 + abs(z_ip)):
        raise ValidityBreach(f"cut LP value {z_cut} exceeds integer optimum {z_ip}")
    return min(100.0, max(0.0, 100.0 * (z_cut - z_lp) / span))


def run_rounds(instance, options=None, optimum=None, known_solutions=(), on_round=None):
    """Cut-and-resolve loop; one RoundReport per round.

    Each round generates cuts at the current optimum, re-solves, and then
    drops cuts whose slack exceeds CUT_TIGHT_TOL.  ``on_round(k, pool, sol,
    kept, final)`` sees the pool and solution before and after deletion.
    """
    options = options or RoundOptions()
    if optimum is None:
        raise HarnessError(f"no known optimum for instance {instance.name!r}")
    start = time.perf_counter()
    sol = solve_lp(instance)
    if sol.status != OPTIMAL:
        raise HarnessError(f"LP relaxation is {sol.status}")
    z_lp = sol.objective
    known = [np.asarray(k, dtype=float) for k in known_solutions]
    pool = []
    reports = []
    for k in range(1, options.rounds + 1):
        t0 = time.perf_counter()
        new = generate_cuts(instance, pool, sol, options)
        for row in new:
            _check_validity(row, known)
        t1 = time.perf_counter()
        pool = pool + new
        sol = solve_lp(instance, pool)
        if sol.status != OPTIMAL:
            raise HarnessError(f"round {k}: LP re-solve is {sol.status}")
        t2 = time.perf_counter()
        full, at_opt = pool, sol
        slack = [c for c in pool if c.slack(sol.x) > CUT_TIGHT_TOL]
        pool = [c for c in pool if c.slack(sol.x) <= CUT_TIGHT_TOL]
        if slack:
            sol = solve_lp(instance, pool)
        if on_round is not None:
            on_round(k, full, at_opt, pool, sol)
        gap = gap_closed(sol.objective, z_lp, optimum)
        reports.append(RoundReport(instance.name, k, gap, len(new), len(slack),
                                   t1 - t0, t2 - t1, objective=sol.objective))
        log.info("round %d: z=%.6g gap=%.2f%% added=%d deleted=%d", k, sol.objective,
                 gap, len(new), len(slack))
        if options.time_limit is not None and time.perf_counter() - start > options.time_limit:
            log.warning("time limit reached after round %d", k)
            break
    return reports


# ---------------------------------------------------- gap experiment

class SplitMix64:
    """splitmix64 generator; uniform() = (x >> 11) * 2**-53."""

    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = seed & self.MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53


class GapExperimentResult:
    def __init__(self, num_objectives, seed, avg_gap_closed_mip, avg_gap_closed_binary, records):
        self.num_objectives = num_objectives
        self.seed = seed
        self.avg_gap_closed_mip = avg_gap_closed_mip
        self.avg_gap_closed_binary = avg_gap_closed_binary
        self.records = records

    def summary(self):
        return (f"objectives={self.num_objectives} seed={self.seed} "
                f"mip_closed={self.avg_gap_closed_mip:.2f}% "
                f"binary_closed={float(self.avg_gap_closed_binary):.2f}%")


class GapRecord:
    def __init__(self, c, z_ip_mip, z_cut_mip, z_ip_binary, z_cut_binary):
        self.c = c
        self.z_ip_mip = z_ip_mip
        self.z_cut_mip = z_cut_mip
        self.z_ip_binary = z_ip_binary
        self.z_cut_binary = z_cut_binary
        self.closed_mip = 100.0 * z_cut_mip / z_ip_mip
        self.closed_binary = 100 * z_cut_binary / z_ip_binary


def _bases(system):
    q = system.q
    R = system.rays_array()
    out = []
    for cols in itertools.combinations(range(system.n), q):
        B = R[:, cols]
        if abs(np.linalg.det(B)) > 1e-12:
            out.append((cols, np.linalg.inv(B)))
    return out


def point_lp_values(system, c, points, bases=None):
    """min c.s s.t. f + R s = x, s >= 0 for every integer point x (inf if none).

    c >= 0 keeps each LP bounded, so the optimum sits on a q-column basis.
    """
    c = np.asarray(c, dtype=float)
    f = system.f_array()
    P = np.asarray(points, dtype=float) - f
    best = np.full(len(P), np.inf)
    for cols, Binv in bases or _bases(system):
        s = P @ Binv.T
        ok = (s >= -1e-12).all(axis=1)
        val = s @ c[list(cols)]
        best = np.where(ok & (val < best), val, best)
    return best


def _same(a, b, tol=1e-9):
    return a == b or abs(a - b) <= tol * (1 + abs(a))


def mip_hull_value(system, c, window=(-3, 4), bases=None, max_widen=40):
    """Integer-hull optimum by windowed enumeration, widened until it is stable
    over two consecutive widenings."""
    bases = bases or _bases(system)
    lo, hi = window
    history = []
    for _ in range(max_widen + 1):
        pts = list(itertools.product(range(lo, hi + 1), repeat=system.q))
        history.append(float(point_lp_values(system, c, pts, bases).min()))
        if len(history) >= 3 and _same(history[-1], history[-2]) and _same(history[-2], history[-3]):
            return history[-1]
        lo, hi = lo - 1, hi + 1
    raise HarnessError(f"integer-hull value not stable up to window [{lo + 1}, {hi - 1}]")


def binary_hull_value(system, c):
    """Exact minimum over the 0-1 points of min c.s s.t. f + R s = x, s >= 0."""
    c = [Fraction(x) for x in c]
    f = [Fraction(x) for x in system.f]
    R = [[Fraction(x) for x in row] for row in system.rays]
    best = None
    for x in itertools.product((0, 1), repeat=system.q):
        for cols in itertools.combinations(range(system.n), system.q):
            B = [[R[i][j] for j in cols] for i in range(system.q)]
            s = solve_linear(B, [x[i] - f[i] for i in range(system.q)])
            if s is None or any(v < 0 for v in s):
                continue
            val = sum(c[j] * v for j, v in zip(cols, s))
            if best is None or val < best:
                best = val
    return best


def cut_lp_value(cuts, c, exact=False):
    """min c.s s.t. alpha.s >= 1 for every cut, s >= 0."""
    if exact:
        A = [[Fraction(a) for a in cut.alpha] for cut in cuts]
        res = exact_lp([Fraction(x) for x in c], A, [Fraction(1)] * len(A))
        if res.status != "optimal":
            raise HarnessError(f"cut LP is {res.status}")
        return res.fun
    A = -np.array([cut.alpha_float() for cut in cuts])
    res = linprog(c, A_ub=A, b_ub=-np.ones(len(cuts)), bounds=(0, None), method="highs")
    if res.status != 0:
        raise HarnessError(f"cut LP failed: {res.message}")
    return float(res.fun)


def gap_experiment(system, cuts_mip, cuts_binary, num_objectives=1000, seed=1):
    """Average gap closed by the MIP-hull and 0-1-hull facet lists.

    Objectives are c_j ~ U(0,1) from SplitMix64(seed); z_LP = 0 at the apex.
    The 0-1 side is computed in exact arithmetic.
    """
    rng = SplitMix64(seed)
    bases = _bases(system.to_float() if system.mode == "rational" else system)
    fsys = system.to_float() if system.mode == "rational" else system
    records = []
    all_binary = list(cuts_mip) + list(cuts_binary)
    while len(records) < num_objectives:
        c = [rng.uniform() for _ in range(system.n)]
        if min(c) <= 0:
            log.warning("objective with a zero entry resampled")
            continue
        z_ip = mip_hull_value(fsys, c, bases=bases)
        if not math.isfinite(z_ip):
            log.warning("no integer point reachable, objective resampled")
            continue
        z_cut = cut_lp_value(cuts_mip, c)
        zb_ip = binary_hull_value(system, c)
        zb_cut = cut_lp_value(all_binary, c, exact=True)
        records.append(GapRecord(c, z_ip, z_cut, zb_ip, zb_cut))
    avg_mip = sum(r.closed_mip for r in records) / len(records)
    avg_bin = sum(Fraction(r.closed_binary) for r in records) / len(records)
    return GapExperimentResult(num_objectives, seed, avg_mip, avg_bin, records)
