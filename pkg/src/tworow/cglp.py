"""Cut-generating LP for the 2^q-term disjunction on q tableau rows.

Term i is indexed in Gray-code order so that, for q = 2, the terms are
(x1<=0, x2<=0), (x1>=1, x2<=0), (x1>=1, x2>=1), (x1<=0, x2>=1), i.e. the
unit square vertices visited counter-clockwise.  ``sigma[i][k]`` is -1 when
term i holds x_k <= 0 (or x_k = 0 in binary mode) and +1 for x_k >= 1.

Per-term coefficient:  alpha^i_j = sum_k sigma[i][k] * r^k_j * u[i][k]
Normalization:         sum_k g_k(i) * u[i][k] >= 1, g = f or 1 - f.
"""
import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .rational import exact_lp, rank, solve_linear
from .rowsystem import QRowSystem

MIP = "mip"
BINARY = "binary"
MODES = (MIP, BINARY)
Q_MAX = 4
N_MAX = 12


class CglpError(ValueError):
    pass


def _check_mode(mode):
    mode = str(mode).lower()
    if mode not in MODES:
        raise CglpError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def term_signs(q):
    """Sign pattern of each of the 2^q terms, Gray-code order."""
    out = []
    for i in range(2 ** q):
        g = i ^ (i >> 1)
        out.append(tuple(1 if (g >> k) & 1 else -1 for k in range(q)))
    return out


def cube_vertices(q):
    return [tuple(1 if s > 0 else 0 for s in sig) for sig in term_signs(q)]


def norm_coeffs(f):
    """g_k(i): f_k on a '<= 0' side, 1 - f_k on a '>= 1' side."""
    return [[fk if s < 0 else 1 - fk for fk, s in zip(f, sig)]
            for sig in term_signs(len(f))]


class Multipliers:
    """Weights u[i][k] on the q inequalities of term i."""

    def __init__(self, u, mode=MIP, beta=1):
        self.mode = _check_mode(mode)
        self.u = tuple(tuple(row) for row in u)
        self.beta = beta

    @property
    def t(self):
        return len(self.u)

    @property
    def q(self):
        return len(self.u[0])

    @property
    def v(self):
        return tuple(row[0] for row in self.u)

    @property
    def w(self):
        return tuple(row[1] for row in self.u)

    @classmethod
    def from_vw(cls, v, w, mode=MIP):
        return cls(list(zip(v, w)), mode)

    def normalization(self, f):
        g = norm_coeffs(f)
        return [sum(a * b for a, b in zip(gi, ui)) for gi, ui in zip(g, self.u)]

    def check(self, f, tol=0):
        """Raise if the multipliers break the sign or normalization rules."""
        if self.mode == MIP and any(x < -tol for row in self.u for x in row):
            raise CglpError("MIP multipliers must be nonnegative")
        for i, val in enumerate(self.normalization(f)):
            if val < self.beta - tol:
                raise CglpError(f"term {i + 1} normalization {val} < {self.beta}")

    def __eq__(self, other):
        return isinstance(other, Multipliers) and self.u == other.u and self.mode == other.mode

    def __hash__(self):
        return hash((self.u, self.mode))

    def __repr__(self):
        if self.q == 2:
            return f"Multipliers(v={_fmt_vec(self.v)}, w={_fmt_vec(self.w)}, {self.mode})"
        return f"Multipliers(u={self.u}, {self.mode})"


class Cut:
    """alpha . s >= rhs over the nonbasic displacements."""

    def __init__(self, alpha, multipliers=None, config=None, source="cglp",
                 strengthened=False, rhs=1):
        self.alpha = tuple(alpha)
        self.rhs = rhs
        self.multipliers = multipliers
        self.config = config
        self.source = source
        self.strengthened = strengthened

    @property
    def label(self):
        return getattr(self.config, "label", self.config)

    def alpha_float(self):
        return np.array([float(a) for a in self.alpha])

    def format(self):
        lhs = " ".join(fmt_number(a) for a in self.alpha)
        parts = [f"{lhs} >= {fmt_number(self.rhs)}"]
        if self.multipliers is not None:
            m = self.multipliers
            if m.q == 2:
                parts.append(f"v={_fmt_vec(m.v)} w={_fmt_vec(m.w)}")
            else:
                parts.append("u=" + " | ".join(_fmt_vec(r) for r in m.u))
        parts.append(str(self.label) if self.label is not None else "-")
        return " ; ".join(parts)

    def __repr__(self):
        return f"Cut({_fmt_vec(self.alpha)}, {self.label}, {self.source})"


def fmt_number(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return f"{x:.10g}"


def _fmt_vec(vec):
    return "(" + ", ".join(fmt_number(x) for x in vec) + ")"


def parse_cut_line(line):
    """Inverse of Cut.format for the coefficient part."""
    lhs = line.split(";")[0]
    coeffs, rhs = lhs.split(">=")
    return [Fraction(tok) for tok in coeffs.split()], Fraction(rhs.strip())


# ---------------------------------------------------------------- formulas

def term_alphas(system, m):
    """alpha^i_j for every term i and column j."""
    sig = term_signs(system.q)
    if len(m.u) != len(sig):
        raise CglpError(f"expected {len(sig)} terms, got {len(m.u)}")
    out = []
    for s, u in zip(sig, m.u):
        row = []
        for j in range(system.n):
            row.append(sum(s[k] * system.rays[k][j] * u[k] for k in range(system.q)))
        out.append(row)
    return out


def alpha_from_multipliers(system, m):
    per_term = term_alphas(system, m)
    return [max(col) for col in zip(*per_term)]


# ------------------------------------------------------------------ model

class CglpModel:
    """Constraint description: rows A z >= b over z = (alpha, u)."""

    def __init__(self, system, mode, A, b, free, kinds):
        self.system = system
        self.mode = mode
        self.A = A
        self.b = b
        self.free = free
        self.kinds = kinds

    @property
    def n_alpha(self):
        return self.system.n

    @property
    def n_u(self):
        return len(self.A[0]) - self.system.n

    @property
    def num_homogeneous(self):
        return sum(1 for k in self.kinds if k[0] == "hom")

    @property
    def num_normalization(self):
        return sum(1 for k in self.kinds if k[0] == "norm")

    def A_array(self):
        return np.array([[float(x) for x in row] for row in self.A])

    def b_array(self):
        return np.array([float(x) for x in self.b])

    def split(self, z):
        n = self.system.n
        q = self.system.q
        alpha = list(z[:n])
        u = [list(z[n + i * q:n + (i + 1) * q]) for i in range(2 ** q)]
        return alpha, Multipliers(u, self.mode)


def build_cglp(system, mode=MIP, q_max=Q_MAX, beta=1):
    mode = _check_mode(mode)
    q, n = system.q, system.n
    if q > q_max:
        raise CglpError(f"q = {q} exceeds q_max = {q_max}")
    sig = term_signs(q)
    g = norm_coeffs(system.f)
    t = len(sig)
    nz = n + t * q
    A, b, kinds = [], [], []
    zero = system.f[0] * 0
    for i, s in enumerate(sig):
        for j in range(n):
            row = [zero] * nz
            row[j] = 1
            for k in range(q):
                row[n + i * q + k] = -s[k] * system.rays[k][j]
            A.append(row)
            b.append(zero)
            kinds.append(("hom", i, j))
    for i in range(t):
        row = [zero] * nz
        for k in range(q):
            row[n + i * q + k] = g[i][k]
        A.append(row)
        b.append(zero + beta)
        kinds.append(("norm", i))
    free = set(range(n))
    if mode == BINARY:
        free |= set(range(n, nz))
    return CglpModel(system, mode, A, b, free, kinds)


# ---------------------------------------------------------------- solving

def solve_cglp(system, mode=MIP, p=None, lexicographic=True):
    """Minimize p . alpha over the CGLP; returns the optimal basic cut."""
    model = build_cglp(system, mode)
    n = system.n
    nz = len(model.A[0])
    if p is None:
        p = [1] * n
    if len(p) != n or any(pj <= 0 for pj in p):
        raise CglpError("objective p must be positive with one entry per column")
    if system.mode == "rational":
        c = [Fraction(x) for x in p] + [0] * (nz - n)
        res = exact_lp(c, model.A, model.b, free=model.free)
        if res.status != "optimal":
            raise CglpError(f"CGLP {res.status}")
        z = res.x
        if lexicographic:
            A_eq = [c]
            b_eq = [res.fun]
            for j in range(n):
                cj = [0] * nz
                cj[j] = 1
                r2 = exact_lp(cj, model.A, model.b, A_eq, b_eq, free=model.free)
                A_eq.append(cj)
                b_eq.append(r2.fun)
                z = r2.x
        alpha, _ = model.split(z)
    else:
        A = model.A_array()
        bounds = [(None, None) if j in model.free else (0, None) for j in range(nz)]
        c = np.concatenate([np.asarray(p, float), np.zeros(nz - n)])
        res = linprog(c, A_ub=-A, b_ub=-model.b_array(), bounds=bounds, method="highs")
        if res.status != 0:
            raise CglpError(f"CGLP solve failed: {res.message}")
        alpha, _ = model.split(list(res.x))
    mult = canonical_multipliers(system, alpha, mode) if system.q == 2 else model.split(z)[1]
    if system.mode == "rational":
        alpha = alpha_from_multipliers(system, mult)
    return Cut(alpha, mult, _classify(mult, system if system.q == 2 else None), source="cglp")


def _classify(m, system=None):
    from .octahedron import classify
    if m is None or m.q != 2:
        return None
    return classify(m, system)


# ------------------------------------------------------- canonical weights

def _term_polygon_vertices(system, alpha, i, mode):
    """Vertices of {u : sign rule, g.u >= 1, alpha^i(u) <= alpha} for q = 2."""
    sig = term_signs(2)[i]
    g = norm_coeffs(system.f)[i]
    rays = system.rays
    # constraints as (a, b) meaning a . u <= b
    cons = []
    for j in range(system.n):
        cons.append(((sig[0] * rays[0][j], sig[1] * rays[1][j]), alpha[j]))
    cons.append(((-g[0], -g[1]), -1))
    if mode == MIP:
        cons.append(((-1, 0), 0))
        cons.append(((0, -1), 0))
    exact = system.mode == "rational"
    tol = 0 if exact else 1e-9
    verts = []
    for (a1, b1), (a2, b2) in itertools.combinations(cons, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if (det == 0) if exact else abs(det) < 1e-12:
            continue
        u = ((b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det)
        if all(a[0] * u[0] + a[1] * u[1] <= b + tol for a, b in cons):
            if exact:
                if u not in verts:
                    verts.append(u)
            elif not any(abs(u[0] - x[0]) + abs(u[1] - x[1]) < 1e-9 for x in verts):
                verts.append(u)
    return verts, g


def canonical_multipliers(system, alpha, mode=MIP):
    """Deterministic multipliers reproducing alpha (q = 2).

    Per term: the vertex of the feasible weight polygon with the smallest
    normalization value, then fewest nonzeros, then lexicographically
    smallest.
    """
    mode = _check_mode(mode)
    if system.q != 2:
        raise CglpError("canonical multipliers are defined for q = 2")
    exact = system.mode == "rational"
    u = []
    for i in range(4):
        verts, g = _term_polygon_vertices(system, alpha, i, mode)
        if not verts:
            raise CglpError(f"no multipliers reproduce alpha on term {i + 1}")

        def key(x):
            nrm = g[0] * x[0] + g[1] * x[1]
            nnz = sum(1 for c in x if (c != 0 if exact else abs(c) > 1e-9))
            if not exact:
                nrm = round(nrm, 9)
                x = tuple(round(c, 9) for c in x)
            return (nrm, nnz, x)

        u.append(min(verts, key=key))
    return Multipliers(u, mode)


# --------------------------------------------------------------- validity

def _term_constraints(system, i, mode):
    """Term i as rows over s:  (lhs . s) >= rhs  and equalities."""
    sig = term_signs(system.q)[i]
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for k, s in enumerate(sig):
        fk = system.f[k]
        rk = list(system.rays[k])
        if mode == BINARY:
            A_eq.append(rk)
            b_eq.append((1 if s > 0 else 0) - fk)
        elif s < 0:
            A_ub.append([-x for x in rk])   # x_k <= 0
            b_ub.append(fk)
        else:
            A_ub.append(rk)                 # x_k >= 1
            b_ub.append(1 - fk)
    return A_ub, b_ub, A_eq, b_eq


def term_minimum(system, alpha, i, mode=MIP, fixed=None):
    """min alpha.s over term i (s >= 0); ``fixed`` pins some s_j.

    Returns +inf for an infeasible term and -inf when unbounded.
    """
    A_ub, b_ub, A_eq, b_eq = _term_constraints(system, i, mode)
    n = system.n
    if fixed:
        for j, val in fixed.items():
            row = [0] * n
            row[j] = 1
            A_eq.append(row)
            b_eq.append(val)
    if system.mode == "rational":
        res = exact_lp(list(alpha), A_ub, b_ub, A_eq, b_eq)
        if res.status == "infeasible":
            return math.inf
        if res.status == "unbounded":
            return -math.inf
        return res.fun
    kw = {}
    if A_ub:
        kw["A_ub"] = -np.array(A_ub, float)
        kw["b_ub"] = -np.array(b_ub, float)
    if A_eq:
        kw["A_eq"] = np.array(A_eq, float)
        kw["b_eq"] = np.array(b_eq, float)
    res = linprog(np.array([float(a) for a in alpha]), bounds=(0, None), method="highs", **kw)
    if res.status == 2:
        return math.inf
    if res.status == 3:
        return -math.inf
    if res.status != 0:
        raise CglpError(f"term LP failed: {res.message}")
    return res.fun


def verify_cut_valid(system, cut, mode=MIP, tol=1e-9, integer_window=None):
    """True iff alpha.s >= rhs on every disjunctive term.

    With ``integer_window`` the integer nonbasic columns are enumerated over
    0..integer_window and the remaining columns stay continuous.
    """
    mode = _check_mode(mode)
    alpha = cut.alpha if isinstance(cut, Cut) else tuple(cut)
    rhs = cut.rhs if isinstance(cut, Cut) else 1
    exact = system.mode == "rational"
    slack = 0 if exact else tol
    ints = sorted(system.integer_nonbasics) if integer_window is not None else []
    grids = itertools.product(range(integer_window + 1), repeat=len(ints)) if ints else [()]
    for vals in grids:
        fixed = dict(zip(ints, vals))
        for i in range(2 ** system.q):
            if term_minimum(system, alpha, i, mode, fixed) < rhs - slack:
                return False
    return True


# ---------------------------------------------------- facet enumeration

class _StandardForm:
    """CGLP as equalities M z = rhs with free / nonnegative variables."""

    def __init__(self, system, mode):
        q, n = system.q, system.n
        sig = term_signs(q)
        g = norm_coeffs(system.f)
        t = len(sig)
        nu = t * q
        nrow = n * t + t
        ncol = n + nu + n * t + t
        M = [[Fraction(0)] * ncol for _ in range(nrow)]
        rhs = [Fraction(0)] * nrow
        r = 0
        for i, s in enumerate(sig):
            for j in range(n):
                M[r][j] = Fraction(1)
                for k in range(q):
                    M[r][n + i * q + k] = Fraction(-s[k] * system.rays[k][j])
                M[r][n + nu + r] = Fraction(-1)
                r += 1
        for i in range(t):
            for k in range(q):
                M[r][n + i * q + k] = Fraction(g[i][k])
            M[r][n + nu + n * t + i] = Fraction(-1)
            rhs[r] = Fraction(1)
            r += 1
        self.M = M
        self.rhs = rhs
        self.n = n
        self.nu = nu
        self.free = list(range(n)) + (list(range(n, n + nu)) if mode == BINARY else [])
        self.nonneg = [j for j in range(ncol) if j not in set(self.free)]
        self.Mf = np.array([[float(x) for x in row] for row in M])
        self.rf = np.array([float(x) for x in rhs])


def _initial_basis(sf, model, tol=1e-9):
    n = sf.n
    nz = n + sf.nu
    A = model.A_array()
    bounds = [(None, None) if j in model.free else (0, None) for j in range(nz)]
    c = np.concatenate([np.ones(n), np.zeros(nz - n)])
    res = linprog(c, A_ub=-A, b_ub=-model.b_array(), bounds=bounds, method="highs-ds")
    if res.status != 0:
        raise CglpError(f"no initial CGLP vertex: {res.message}")
    z = res.x
    slack = A @ z - model.b_array()
    full = np.concatenate([z, slack])
    chosen = list(sf.free) + [j for j in sf.nonneg if full[j] > tol]
    m = sf.Mf.shape[0]
    cur = sf.Mf[:, chosen]
    if np.linalg.matrix_rank(cur) < len(chosen):
        raise CglpError("degenerate start vertex")
    for j in sf.nonneg:
        if len(chosen) == m:
            break
        if j in chosen:
            continue
        trial = np.column_stack([cur, sf.Mf[:, j]])
        if np.linalg.matrix_rank(trial) > cur.shape[1]:
            chosen.append(j)
            cur = trial
    return frozenset(chosen)


def _bfs_bases(sf, start, tol=1e-9, max_bases=500000):
    """Visit every feasible basis reachable by (possibly degenerate) pivots.

    Returns a dict mapping a rounded alpha key to one basis producing it.
    """
    M, rhs = sf.Mf, sf.rf
    free = set(sf.free)
    seen = {start}
    stack = [start]
    found = {}
    while stack:
        basis = stack.pop()
        cols = sorted(basis)
        B = M[:, cols]
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            continue
        xB = Binv @ rhs
        pos = {c: idx for idx, c in enumerate(cols)}
        alpha = tuple(np.round([xB[pos[j]] for j in range(sf.n)], 7))
        found.setdefault(alpha, basis)
        D = Binv @ M
        leaving_ok = [idx for idx, c in enumerate(cols) if c not in free]
        for e in sf.nonneg:
            if e in basis:
                continue
            d = D[:, e]
            best = None
            cands = []
            for idx in leaving_ok:
                if d[idx] > tol:
                    ratio = max(xB[idx], 0.0) / d[idx]
                    if best is None or ratio < best - tol:
                        best, cands = ratio, [idx]
                    elif abs(ratio - best) <= tol:
                        cands.append(idx)
            for idx in cands:
                nb = (basis - {cols[idx]}) | {e}
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) > max_bases:
            raise CglpError("basis enumeration limit exceeded")
    return found, len(seen)


def _exact_alpha(sf, basis):
    cols = sorted(basis)
    B = [[sf.M[r][c] for c in cols] for r in range(len(sf.M))]
    x = solve_linear(B, sf.rhs)
    if x is None:
        return None
    pos = {c: idx for idx, c in enumerate(cols)}
    if any(x[pos[c]] < 0 for c in cols if c in set(sf.nonneg)):
        return None
    return tuple(x[pos[j]] for j in range(sf.n))


class RedundancyRecord:
    def __init__(self, alpha, kept, witness=None, lp_value=None):
        self.alpha = alpha
        self.kept = kept
        self.witness = witness
        self.lp_value = lp_value


def redundancy_filter(alphas, tol=1e-9):
    """Drop every candidate implied by the remaining ones plus s >= 0.

    Returns (kept indices, records).  A kept candidate carries an exact
    witness point s with alpha_c.s < 1 and alpha_k.s >= 1 for the others.
    """
    A = np.array([[float(x) for x in a] for a in alphas])
    alive = list(range(len(alphas)))
    records = {}
    for c in list(alive):
        others = [k for k in alive if k != c]
        if not others:
            continue
        res = linprog(A[c], A_ub=-A[others], b_ub=-np.ones(len(others)),
                      bounds=(0, None), method="highs")
        if res.status == 0 and res.fun >= 1 - tol:
            alive.remove(c)
            records[c] = RedundancyRecord(alphas[c], False, lp_value=res.fun)
    for c in alive:
        others = [k for k in alive if k != c]
        if not others:
            records[c] = RedundancyRecord(alphas[c], True)
            continue
        res = linprog(A[c], A_ub=-A[others], b_ub=-np.ones(len(others)),
                      bounds=(0, None), method="highs")
        witness = None
        if res.status == 0:
            s = [Fraction(x).limit_denominator(10 ** 9) if x > 1e-12 else Fraction(0) for x in res.x]
            low = min(sum(a * x for a, x in zip(alphas[k], s)) for k in others)
            if low > 0:
                s = [x / low for x in s]
                if sum(a * x for a, x in zip(alphas[c], s)) < 1:
                    witness = s
        elif res.status == 3:
            witness = "unbounded"
        records[c] = RedundancyRecord(alphas[c], True, witness,
                                      res.fun if res.status == 0 else -math.inf)
    return alive, records


class FacetEnumeration(list):
    """List of Cut with enumeration statistics attached."""
    bases_visited = 0
    candidates = 0
    records = None


def enumerate_facets(system, mode=MIP, n_max=N_MAX):
    """Complete irredundant facet list of the disjunctive hull (q = 2)."""
    mode = _check_mode(mode)
    if system.q != 2:
        raise CglpError("facet enumeration supports q = 2 only")
    if system.n > n_max:
        raise CglpError(f"n = {system.n} exceeds n_max = {n_max}")
    if system.mode != "rational":
        system = QRowSystem(*_rationalize(system))
    sf = _StandardForm(system, mode)
    model = build_cglp(system, mode)
    start = _initial_basis(sf, model)
    found, visited = _bfs_bases(sf, start)
    exact = []
    for basis in found.values():
        a = _exact_alpha(sf, basis)
        if a is not None and a not in exact:
            exact.append(a)
    exact.sort()
    kept, records = redundancy_filter(exact)
    out = FacetEnumeration()
    for c in kept:
        alpha = list(exact[c])
        mult = canonical_multipliers(system, alpha, mode)
        if list(alpha_from_multipliers(system, mult)) != alpha:
            raise CglpError("canonical multipliers do not reproduce a facet")
        out.append(Cut(alpha, mult, _classify(mult, system), source="cglp"))
    out.bases_visited = visited
    out.candidates = len(exact)
    out.records = [records[c] for c in sorted(records)]
    return out


def _rationalize(system):
    F = Fraction
    f = [F(x).limit_denominator(10 ** 9) for x in system.f]
    rays = [[F(x).limit_denominator(10 ** 9) for x in row] for row in system.rays]
    return f, rays, system.integer_nonbasics, system.shift, system.col_map, "rational"


# ------------------------------------------------------ certifications

class HullCertificate:
    """Outcome of the integer-hull facet test.

    method "vertex": ``weights[p]`` expresses p - f through the scaled rays.
    method "tight-points": ``points`` are lattice-feasible s with alpha.s = 1
    and ``directions`` unit vectors with alpha_j = 0; together they span an
    affine set of dimension n - 1.
    """

    def __init__(self, holds, weights=None, failed_vertex=None, method="vertex",
                 points=None, directions=None):
        self.holds = holds
        self.weights = weights or {}
        self.failed_vertex = failed_vertex
        self.method = method
        self.points = points or []
        self.directions = directions or []

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"HullCertificate({self.holds}, {self.method}, failed_vertex={self.failed_vertex})"


def vertex_condition(system, cut):
    """Every cube vertex p has p - f in the convex hull of r_j/alpha_j
    (alpha_j > 0) plus the cone of r_j with alpha_j = 0."""
    alpha = list(cut.alpha)
    pos = [j for j, a in enumerate(alpha) if a > 0]
    rec = [j for j, a in enumerate(alpha) if a == 0]
    cols = pos + rec
    weights = {}
    for p in cube_vertices(2):
        A_eq = []
        b_eq = []
        for k in range(2):
            A_eq.append([system.rays[k][j] / alpha[j] for j in pos] + [system.rays[k][j] for j in rec])
            b_eq.append(p[k] - system.f[k])
        A_eq.append([1] * len(pos) + [0] * len(rec))
        b_eq.append(1)
        res = exact_lp([0] * len(cols), A_eq=A_eq, b_eq=b_eq)
        if res.status != "optimal":
            return HullCertificate(False, weights, p)
        weights[p] = dict(zip(cols, res.x))
    return HullCertificate(True, weights)


def tight_point_certificate(system, cut, window=4):
    """Search lattice-feasible points on the cut for an (n-1)-dimensional face.

    Points are basic solutions of R s = x - f, alpha.s = 1, s >= 0 for
    integer x in [-window, window + 1]^q, visited nearest to f first.
    """
    alpha = list(cut.alpha)
    n, q = system.n, system.q
    dirs = [[Fraction(int(i == j)) for i in range(n)] for j in range(n) if alpha[j] == 0]
    pts, basis_vecs = [], [list(d) for d in dirs]
    grid = sorted(itertools.product(range(-window, window + 2), repeat=q),
                  key=lambda x: sum((xi - float(fi)) ** 2 for xi, fi in zip(x, system.f)))
    for x in grid:
        for cols in itertools.combinations(range(n), q + 1):
            M = [[system.rays[k][j] for j in cols] for k in range(q)] + [[alpha[j] for j in cols]]
            sol = solve_linear(M, [x[k] - system.f[k] for k in range(q)] + [1])
            if sol is None or any(v < 0 for v in sol):
                continue
            s = [Fraction(0)] * n
            for j, v in zip(cols, sol):
                s[j] = v
            if s in pts:
                continue
            if not pts:
                pts.append(s)
                continue
            cand = basis_vecs + [[a - b for a, b in zip(s, pts[0])]]
            if rank(cand) > len(basis_vecs):
                basis_vecs = cand
                pts.append(s)
                if len(basis_vecs) == n - 1:
                    return HullCertificate(True, method="tight-points", points=pts, directions=dirs)
    return HullCertificate(False, method="tight-points", points=pts, directions=dirs)


def is_integer_hull_facet(system, cut, window=4):
    """Certify that a valid MIP cut defines a facet of the integer hull.

    The vertex condition is tried first.  It is sufficient but not
    necessary (a strip with a zero coefficient can fail it), so on failure
    an explicit set of tight lattice-feasible points is searched.  Exact in
    rational mode.
    """
    if system.q != 2:
        raise CglpError("integer hull certification is implemented for q = 2")
    cert = vertex_condition(system, cut)
    if cert:
        return cert
    alt = tight_point_certificate(system, cut, window)
    alt.failed_vertex = cert.failed_vertex
    alt.weights = cert.weights
    return alt


def check_hull_certificate(system, cut, cert):
    """Largest residual of the certificate; zero means it checks exactly."""
    alpha = cut.alpha
    worst = 0
    if cert.method == "tight-points":
        n = system.n
        for s in cert.points:
            worst = max(worst, abs(sum(a * v for a, v in zip(alpha, s)) - 1), -min(s))
            for k in range(system.q):
                val = system.f[k] + sum(r * v for r, v in zip(system.rays[k], s))
                worst = max(worst, abs(val - round(val)))
        for d in cert.directions:
            worst = max(worst, abs(sum(a * v for a, v in zip(alpha, d))), -min(d))
        if cert.points:
            vecs = [list(d) for d in cert.directions]
            vecs += [[a - b for a, b in zip(s, cert.points[0])] for s in cert.points[1:]]
            if rank(vecs) != n - 1:
                worst = max(worst, 1)
        return worst
    for p, lam in cert.weights.items():
        for k in range(2):
            val = sum((system.rays[k][j] / alpha[j] if alpha[j] > 0 else system.rays[k][j]) * x
                      for j, x in lam.items())
            worst = max(worst, abs(val - (p[k] - system.f[k])))
        total = sum(x for j, x in lam.items() if alpha[j] > 0)
        worst = max(worst, abs(total - 1))
    return worst


def convex_combination(target, cuts):
    """Exact lambda >= 0, sum 1, with sum lambda_k alpha_k = target, or None."""
    vecs = [list(c.alpha) if isinstance(c, Cut) else list(c) for c in cuts]
    n = len(target)
    A_eq = [[v[j] for v in vecs] for j in range(n)] + [[1] * len(vecs)]
    b_eq = list(target) + [1]
    res = exact_lp([0] * len(vecs), A_eq=A_eq, b_eq=b_eq)
    if res.status != "optimal":
        return None
    lam = res.x
    resid = [sum(l * v[j] for l, v in zip(lam, vecs)) - target[j] for j in range(n)]
    if any(r != 0 for r in resid) or sum(lam) != 1:
        return None
    return lam


def lift_cut(system, subspace, subspace_cut):
    """Full-space cut from multipliers found on a subset of columns."""
    subspace = list(subspace)
    if subspace_cut.multipliers is None:
        raise CglpError("subspace cut carries no multipliers")
    from .rational import rank
    R = [[system.rays[k][j] for j in subspace] for k in range(system.q)]
    if rank(R) < system.q:
        raise CglpError("subspace rays do not span R^q")
    alpha = alpha_from_multipliers(system, subspace_cut.multipliers)
    sub_alpha = [alpha[j] for j in subspace]
    if any(a != b for a, b in zip(sub_alpha, subspace_cut.alpha)):
        exact = system.mode == "rational"
        if exact or max(abs(float(a) - float(b)) for a, b in zip(sub_alpha, subspace_cut.alpha)) > 1e-9:
            raise CglpError("lifted cut does not restrict to the subspace cut")
    return Cut(alpha, subspace_cut.multipliers, subspace_cut.config,
               source=subspace_cut.source, strengthened=subspace_cut.strengthened)
