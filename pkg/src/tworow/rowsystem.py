"""q-row tableau model x = f + R s, s >= 0, with 0 < f < 1."""
import math
import warnings
from fractions import Fraction

import numpy as np

FRAC_TOL = 1e-6


class RowSystemError(ValueError):
    pass


def _floor(x):
    return math.floor(x)


class QRowSystem:
    """Rows x_i = f_i + sum_j rays[i][j] s_j.

    ``rays`` is stored row-major (q lists of length n).  Column j is the ray
    r_j in R^q.  ``col_map[j]`` is the index of column j in the source
    tableau, ``shift`` the integer part removed from the basic values.
    """

    def __init__(self, f, rays, integer_nonbasics=(), shift=None,
                 col_map=None, mode="rational", names=None, drop_zero=True):
        if mode not in ("rational", "float"):
            raise RowSystemError(f"unknown numeric mode {mode!r}")
        conv = Fraction if mode == "rational" else float
        f = [conv(x) for x in f]
        rays = [[conv(x) for x in row] for row in rays]
        q = len(f)
        if q == 0 or len(rays) != q:
            raise RowSystemError("need one ray row per f component")
        n = len(rays[0])
        if any(len(row) != n for row in rays):
            raise RowSystemError("ragged ray matrix")
        for i, fi in enumerate(f):
            if not 0 < fi < 1:
                raise RowSystemError(f"f[{i}] = {fi} is not in (0, 1)")
        if col_map is None:
            col_map = list(range(n))
        integer_nonbasics = set(integer_nonbasics)

        keep = [j for j in range(n) if not drop_zero or any(rays[i][j] != 0 for i in range(q))]
        if len(keep) < n:
            dropped = [col_map[j] for j in range(n) if j not in keep]
            warnings.warn(f"dropping zero ray columns {dropped}")
            rays = [[row[j] for j in keep] for row in rays]
            integer_nonbasics = {keep.index(j) for j in integer_nonbasics if j in keep}
            col_map = [col_map[j] for j in keep]
            if names is not None:
                names = [names[j] for j in keep]

        self.mode = mode
        self.f = tuple(f)
        self.rays = tuple(tuple(row) for row in rays)
        self.integer_nonbasics = frozenset(integer_nonbasics)
        self.shift = tuple(shift) if shift is not None else (0,) * q
        self.col_map = tuple(col_map)
        self.names = tuple(names) if names is not None else None

    @property
    def q(self):
        return len(self.f)

    @property
    def n(self):
        return len(self.rays[0])

    def ray(self, j):
        return tuple(row[j] for row in self.rays)

    def rays_array(self):
        return np.array([[float(x) for x in row] for row in self.rays])

    def f_array(self):
        return np.array([float(x) for x in self.f])

    def to_float(self):
        return QRowSystem(self.f, self.rays, self.integer_nonbasics, self.shift,
                          self.col_map, "float", self.names, drop_zero=False)

    def with_rays(self, rays):
        """Same system with a replaced ray matrix (used by modularization).

        Zero columns are kept so column indices stay aligned.
        """
        return QRowSystem(self.f, rays, self.integer_nonbasics, self.shift,
                          self.col_map, self.mode, self.names, drop_zero=False)

    def subsystem(self, columns):
        columns = list(columns)
        ints = {k for k, j in enumerate(columns) if j in self.integer_nonbasics}
        return QRowSystem(self.f, [[row[j] for j in columns] for row in self.rays],
                          ints, self.shift, [self.col_map[j] for j in columns],
                          self.mode)

    def basic_values(self, s):
        """Original basic values (shift restored) at nonbasic displacement s."""
        out = []
        for i in range(self.q):
            val = self.f[i] + sum(r * x for r, x in zip(self.rays[i], s))
            out.append(val + self.shift[i])
        return out

    def __repr__(self):
        return f"QRowSystem(q={self.q}, n={self.n}, f={self.f}, mode={self.mode})"


def from_tableau(rows, integrality=None, frac_tol=FRAC_TOL, mode="float"):
    """Build a system from tableau rows sharing one nonbasic column set.

    ``integrality`` flags the nonbasic columns (in ray order) that are
    integer constrained.
    """
    if not rows:
        raise RowSystemError("no rows given")
    f, shift = [], []
    for k, row in enumerate(rows):
        val = Fraction(row.f) if mode == "rational" else float(row.f)
        fl = _floor(val)
        frac = val - fl
        if frac < frac_tol or frac > 1 - frac_tol:
            raise RowSystemError(f"row {k} (basic var {row.basic_var}) has integral value {float(val)!r}")
        f.append(frac)
        shift.append(fl)
    rays = [list(row.ray) for row in rows]
    ints = [j for j, flag in enumerate(integrality or []) if flag]
    names = getattr(rows[0], "nonbasic", None)
    return QRowSystem(f, rays, ints, shift, mode=mode, names=names)


def alww_instance():
    """The standard two-row example with f = (1/4, 1/2) and five rays."""
    F = Fraction
    return QRowSystem(
        [F(1, 4), F(1, 2)],
        [[2, 1, -3, 0, 1],
         [1, 1, 2, -1, -2]],
        mode="rational",
    )
