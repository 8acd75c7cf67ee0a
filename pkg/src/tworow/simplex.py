"""Dense bounded-variable revised primal simplex with tableau row access.

Every row i gets a logical variable z_i = a_i.x whose bounds encode the
sense and right-hand side, so the working system is [A | -I] y = 0 with
bounds on all of y = (x, z).  Phase 1 adds artificials for rows whose
logical starts outside its bounds.
"""
import math

import numpy as np
import scipy.linalg as sla

FEAS_TOL = 1e-9
OPT_TOL = 1e-7
PIVOT_TOL = 1e-10
BLAND_AFTER = 1000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

BASIC, AT_LOWER, AT_UPPER, FREE = "basic", "at-lower", "at-upper", "free"


class SimplexError(ValueError):
    pass


class CutRow:
    """Structural inequality coeffs.x >= rhs appended to the LP."""

    def __init__(self, coeffs, rhs, tag=None):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.rhs = float(rhs)
        self.tag = tag

    def slack(self, x):
        return float(self.coeffs @ np.asarray(x, dtype=float) - self.rhs)

    def __repr__(self):
        return f"CutRow({self.tag}, rhs={self.rhs:g})"


class TableauRow:
    """x_basic = f + ray . s over the solution's nonbasic columns."""

    def __init__(self, basic_var, f, ray, columns):
        self.basic_var = basic_var
        self.f = float(f)
        self.ray = np.asarray(ray, dtype=float)
        self.columns = columns

    def value(self, s):
        return self.f + float(self.ray @ np.asarray(s, dtype=float))

    def __repr__(self):
        return f"TableauRow(x{self.basic_var} = {self.f:.6g} + ray[{len(self.ray)}])"


class LpSolution:
    """Snapshot of a solve.  Variables 0..n-1 are structural, n..n+m-1 logical."""

    def __init__(self, status, objective=None, values=None, basis=None, basic_order=None,
                 num_structural=0, iterations=0, duals=None, reduced_costs=None,
                 _matrix=None, _lower=None, _upper=None, _cost=None):
        self.status = status
        self.objective = objective
        self.values = values
        self.basis = basis
        self.basic_order = basic_order
        self.num_structural = num_structural
        self.iterations = iterations
        self.duals = duals
        self.reduced_costs = reduced_costs
        self._M = _matrix
        self._lower = _lower
        self._upper = _upper
        self._cost = _cost

    @property
    def x(self):
        return None if self.values is None else self.values[:self.num_structural]

    @property
    def num_rows(self):
        return 0 if self.basic_order is None else len(self.basic_order)

    def nonbasic_columns(self):
        """Displacement columns as (variable, kind), kind in L, U, F+, F-.

        Fixed nonbasics never move and get no column.
        """
        cols = []
        for j, st in enumerate(self.basis):
            if st == BASIC or self._lower[j] == self._upper[j]:
                continue
            if st == AT_LOWER:
                cols.append((j, "L"))
            elif st == AT_UPPER:
                cols.append((j, "U"))
            else:
                cols.append((j, "F+"))
                cols.append((j, "F-"))
        return cols

    def dual_objective(self):
        """y.b + sum of reduced cost times nonbasic bound value (b = 0 here)."""
        d = self.reduced_costs
        return float(sum(d[j] * self.values[j] for j, st in enumerate(self.basis) if st != BASIC))

    def __repr__(self):
        return f"LpSolution({self.status}, obj={self.objective})"


def _build(instance, extra_cuts):
    n = instance.num_vars
    rows = instance.dense_rows()
    senses = list(instance.row_senses)
    rhs = list(instance.rhs)
    for cut in extra_cuts or ():
        rows.append(list(np.asarray(cut.coeffs, dtype=float)))
        senses.append("G")
        rhs.append(cut.rhs)
    m = len(rows)
    A = np.array(rows, dtype=float).reshape(m, n)
    lo = np.empty(n + m)
    up = np.empty(n + m)
    lo[:n] = instance.lower
    up[:n] = instance.upper
    for i, (s, b) in enumerate(zip(senses, rhs)):
        lo[n + i] = b if s in ("G", "E") else -math.inf
        up[n + i] = b if s in ("L", "E") else math.inf
    M = np.hstack([A, -np.eye(m)])
    cost = np.zeros(n + m)
    cost[:n] = instance.obj
    return M, lo, up, cost


def _nonbasic_value(lo, up):
    if math.isfinite(lo):
        return lo, AT_LOWER
    if math.isfinite(up):
        return up, AT_UPPER
    return 0.0, FREE


class _Simplex:
    def __init__(self, M, b, lo, up, basis, status, x, max_iter):
        self.M, self.b, self.lo, self.up = M, b, lo, up
        self.basis = list(basis)
        self.status = list(status)
        self.x = x
        self.max_iter = max_iter
        self.iterations = 0

    def _factor(self):
        B = self.M[:, self.basis]
        return sla.lu_factor(B)

    def _basic_values(self, lu):
        nb = [j for j in range(len(self.x)) if self.status[j] != BASIC]
        rhs = self.b - self.M[:, nb] @ self.x[nb]
        self.x[self.basis] = sla.lu_solve(lu, rhs)

    def run(self, cost):
        degenerate = 0
        bland = False
        N = self.M.shape[1]
        while True:
            lu = self._factor()
            self._basic_values(lu)
            y = sla.lu_solve(lu, cost[self.basis], trans=1)
            d = cost - self.M.T @ y
            d[self.basis] = 0.0
            enter, direction, best = None, 0, 0.0
            for j in range(N):
                st = self.status[j]
                if st == BASIC or self.lo[j] == self.up[j]:
                    continue
                if st == AT_LOWER and d[j] < -OPT_TOL:
                    dj = 1
                elif st == AT_UPPER and d[j] > OPT_TOL:
                    dj = -1
                elif st == FREE and abs(d[j]) > OPT_TOL:
                    dj = -1 if d[j] > 0 else 1
                else:
                    continue
                if bland:
                    enter, direction = j, dj
                    break
                if abs(d[j]) > best:
                    enter, direction, best = j, dj, abs(d[j])
            if enter is None:
                return OPTIMAL, y, d
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT, y, d
            self.iterations += 1
            col = sla.lu_solve(lu, self.M[:, enter])
            delta = -direction * col
            theta = math.inf
            leave = None
            leave_bound = None
            best_piv = 0.0
            for r, var in enumerate(self.basis):
                dr = delta[r]
                if dr < -PIVOT_TOL and math.isfinite(self.lo[var]):
                    lim, bound = (self.x[var] - self.lo[var]) / -dr, AT_LOWER
                elif dr > PIVOT_TOL and math.isfinite(self.up[var]):
                    lim, bound = (self.up[var] - self.x[var]) / dr, AT_UPPER
                else:
                    continue
                lim = max(lim, 0.0)
                if lim < theta - 1e-12:
                    theta, leave, leave_bound, best_piv = lim, r, bound, abs(dr)
                elif lim <= theta + 1e-12:
                    if bland:
                        if var < self.basis[leave]:
                            leave, leave_bound, best_piv = r, bound, abs(dr)
                    elif abs(dr) > best_piv:
                        theta, leave, leave_bound, best_piv = min(lim, theta), r, bound, abs(dr)
            span = self.up[enter] - self.lo[enter]
            if span < theta:
                # bound flip, basis unchanged
                self.x[enter] = self.up[enter] if direction > 0 else self.lo[enter]
                self.status[enter] = AT_UPPER if direction > 0 else AT_LOWER
                degenerate = 0
                continue
            if leave is None:
                return UNBOUNDED, y, d
            self.x[enter] += direction * theta
            out = self.basis[leave]
            self.x[out] = self.lo[out] if leave_bound == AT_LOWER else self.up[out]
            self.status[out] = leave_bound
            if self.lo[out] == -math.inf and self.up[out] == math.inf:
                self.status[out] = FREE
            self.basis[leave] = enter
            self.status[enter] = BASIC
            if theta < 1e-12:
                degenerate += 1
                if degenerate > BLAND_AFTER:
                    bland = True
            else:
                degenerate = 0


def solve_lp(instance, extra_cuts=(), max_iter=50000):
    """Minimize the instance objective, with cuts appended as >= rows."""
    M, lo, up, cost = _build(instance, extra_cuts)
    m, N = M.shape
    n = instance.num_vars
    x = np.zeros(N)
    status = [None] * N
    for j in range(n):
        x[j], status[j] = _nonbasic_value(lo[j], up[j])
    activity = M[:, :n] @ x[:n]
    # phase 1 system: [A | -I | diag(sign)] with artificials
    Mp = np.hstack([M, np.zeros((m, m))])
    lo1 = np.concatenate([lo, np.zeros(m)])
    up1 = np.concatenate([up, np.zeros(m)])
    x1 = np.concatenate([x, np.zeros(m)])
    status1 = status + [AT_LOWER] * m
    basis = []
    for i in range(m):
        z = activity[i]
        k = n + i
        if lo[k] - FEAS_TOL <= z <= up[k] + FEAS_TOL:
            basis.append(k)
            status1[k] = BASIC
            x1[k] = z
            continue
        target = lo[k] if z < lo[k] else up[k]
        x1[k] = target
        status1[k] = AT_LOWER if z < lo[k] else AT_UPPER
        sign = 1.0 if target - z > 0 else -1.0
        Mp[i, N + i] = sign
        up1[N + i] = math.inf
        basis.append(N + i)
        status1[N + i] = BASIC
    iters = 0
    if len(basis) and any(v >= N for v in basis):
        c1 = np.zeros(N + m)
        c1[N:] = 1.0
        sp = _Simplex(Mp, np.zeros(m), lo1, up1, basis, status1, x1, max_iter)
        st, _, _ = sp.run(c1)
        iters = sp.iterations
        if st == ITERATION_LIMIT:
            return LpSolution(ITERATION_LIMIT, iterations=iters, num_structural=n)
        if sp.x[N:].sum() > max(FEAS_TOL, 1e-9 * (1 + np.abs(sp.x).max())) * m * 10:
            return LpSolution(INFEASIBLE, iterations=iters, num_structural=n)
        basis, status1, x1 = sp.basis, sp.status, sp.x
        up1[N:] = 0.0
        x1[N:] = 0.0
        for k in range(N, N + m):
            if status1[k] != BASIC:
                status1[k] = AT_LOWER
    c2 = np.concatenate([cost, np.zeros(m)])
    sp = _Simplex(Mp, np.zeros(m), lo1, up1, basis, status1, x1, max_iter - iters)
    st, y, d = sp.run(c2)
    iters += sp.iterations
    if st != OPTIMAL:
        return LpSolution(st, iterations=iters, num_structural=n)
    # drive remaining (zero) artificials out of the basis where possible
    basis, stat, xv = _purge_artificials(Mp, sp.basis, sp.status, sp.x, N, lo1, up1)
    lu = sla.lu_factor(Mp[:, basis])
    y = sla.lu_solve(lu, c2[basis], trans=1)
    d = c2 - Mp.T @ y
    d[basis] = 0.0
    Mfinal = Mp
    values = xv[:N].copy()
    obj = float(cost @ values) + instance.obj_const
    return LpSolution(OPTIMAL, obj, values, stat[:N] + [], list(basis), n, iters,
                      y, d[:N], Mfinal, lo1, up1, c2)


def _purge_artificials(Mp, basis, status, x, N, lo, up):
    basis = list(basis)
    status = list(status)
    for r, var in enumerate(basis):
        if var < N:
            continue
        lu = sla.lu_factor(Mp[:, basis])
        e = np.zeros(len(basis))
        e[r] = 1.0
        row = sla.lu_solve(lu, e, trans=1) @ Mp
        cands = [j for j in range(N) if status[j] != BASIC and abs(row[j]) > 1e-7]
        if not cands:
            continue
        j = max(cands, key=lambda k: abs(row[k]))
        basis[r] = j
        status[j] = BASIC
        status[var] = AT_LOWER
    return basis, status, x


def extract_rows(solution, basics):
    """Tableau rows for the requested basic variables.

    Column order follows solution.nonbasic_columns(); at-upper columns are
    reflected and free columns split in two so every s_j >= 0.
    """
    if solution.status != OPTIMAL:
        raise SimplexError(f"solution is {solution.status}, not optimal")
    position = {v: r for r, v in enumerate(solution.basic_order)}
    cols = solution.nonbasic_columns()
    lu = sla.lu_factor(solution._M[:, solution.basic_order])
    out = []
    for v in basics:
        if v not in position:
            raise SimplexError(f"variable {v} is not basic")
        e = np.zeros(len(solution.basic_order))
        e[position[v]] = 1.0
        row = sla.lu_solve(lu, e, trans=1) @ solution._M
        ray = []
        for j, kind in cols:
            g = -row[j]
            ray.append(-g if kind in ("U", "F-") else g)
        out.append(TableauRow(v, solution.values[v], ray, cols))
    return out
