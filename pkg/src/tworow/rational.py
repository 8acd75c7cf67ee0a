"""Small exact-arithmetic helpers: Gaussian elimination and a dense
tableau simplex over Fractions.  Sizes here are a few dozen rows."""
from fractions import Fraction


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x)


def solve_linear(A, b):
    """Solve the square system A x = b exactly.  Returns None if singular."""
    n = len(A)
    M = [[as_fraction(v) for v in row] + [as_fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pr = M[col]
        inv = 1 / pr[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                fac = M[r][col] * inv
                row = M[r]
                for k in range(col, n + 1):
                    if pr[k]:
                        row[k] -= fac * pr[k]
    return [M[i][n] / M[i][i] for i in range(n)]


def rank(A):
    M = [[as_fraction(v) for v in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                fac = M[i][c] / M[r][c]
                M[i] = [a - fac * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


class ExactLPResult:
    def __init__(self, status, x=None, fun=None):
        self.status = status
        self.x = x
        self.fun = fun

    @property
    def optimal(self):
        return self.status == "optimal"

    def __repr__(self):
        return f"ExactLPResult({self.status}, fun={self.fun})"


def _pivot(T, basis, r, c):
    row = T[r]
    inv = 1 / row[c]
    T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i != r:
            fac = other[c]
            if fac:
                T[i] = [a - fac * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(T, basis, ncols, allowed):
    """Bland's rule on tableau T whose last row is the reduced objective.

    Columns outside ``allowed`` never enter.  Returns False if unbounded.
    """
    m = len(T) - 1
    obj = T[-1]
    while True:
        obj = T[-1]
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return True
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        _pivot(T, basis, leave, enter)


def exact_lp(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=()):
    """Minimize c x subject to A_ub x >= b_ub, A_eq x = b_eq, x >= 0
    except for indices in ``free``.  Note the ``>=`` convention."""
    nvar = len(c)
    free = set(free)
    # column map: each original var -> (plus column, minus column or None)
    cols = []
    k = 0
    for j in range(nvar):
        if j in free:
            cols.append((k, k + 1))
            k += 2
        else:
            cols.append((k, None))
            k += 1
    nstruct = k
    rows, rhs, slack_sign = [], [], []
    for a, b in zip(A_ub, b_ub):
        rows.append(a)
        rhs.append(as_fraction(b))
        slack_sign.append(-1)
    for a, b in zip(A_eq, b_eq):
        rows.append(a)
        rhs.append(as_fraction(b))
        slack_sign.append(0)
    m = len(rows)
    nslack = sum(1 for s in slack_sign if s)
    ncols = nstruct + nslack + m  # artificials last
    T = []
    si = 0
    for i, (a, b, sgn) in enumerate(zip(rows, rhs, slack_sign)):
        line = [Fraction(0)] * (ncols + 1)
        for j, v in enumerate(a):
            v = as_fraction(v)
            if v:
                p, mcol = cols[j]
                line[p] = v
                if mcol is not None:
                    line[mcol] = -v
        if sgn:
            line[nstruct + si] = Fraction(sgn)
            si += 1
        line[-1] = b
        if b < 0:
            line = [-v for v in line]
        line[nstruct + nslack + i] = Fraction(1)
        T.append(line)
    basis = [nstruct + nslack + i for i in range(m)]
    # phase 1
    obj = [Fraction(0)] * (ncols + 1)
    for line in T:
        obj = [o - v for o, v in zip(obj, line)]
    for i in range(m):
        obj[nstruct + nslack + i] = Fraction(0)
    T.append(obj)
    allowed = [True] * ncols
    _simplex(T, basis, ncols, allowed)
    if T[-1][-1] != 0:
        return ExactLPResult("infeasible")
    # drive artificials out where possible
    art0 = nstruct + nslack
    for i in range(m):
        if basis[i] >= art0:
            c_in = next((j for j in range(art0) if T[i][j] != 0), None)
            if c_in is not None:
                _pivot(T, basis, i, c_in)
    for j in range(art0, ncols):
        allowed[j] = False
    # phase 2 objective
    cost = [Fraction(0)] * (ncols + 1)
    for j in range(nvar):
        cj = as_fraction(c[j])
        p, mcol = cols[j]
        cost[p] = cj
        if mcol is not None:
            cost[mcol] = -cj
    obj = cost[:]
    for i, b in enumerate(basis):
        cb = cost[b] if b < ncols else 0
        if cb:
            obj = [o - cb * v for o, v in zip(obj, T[i])]
    T[-1] = obj
    if not _simplex(T, basis, ncols, allowed):
        return ExactLPResult("unbounded")
    val = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        val[b] = T[i][-1]
    x = []
    for j in range(nvar):
        p, mcol = cols[j]
        x.append(val[p] - (val[mcol] if mcol is not None else 0))
    fun = sum(as_fraction(cj) * xj for cj, xj in zip(c, x))
    return ExactLPResult("optimal", x, fun)
