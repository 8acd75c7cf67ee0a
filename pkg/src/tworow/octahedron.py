"""Parametric cross-polytope bodies and their intersection cuts.

A body is a list of half-planes a.x <= b in the space of the basic
variables.  The body built from multipliers u has one face per term i:

    sum_k sigma[i][k] u[i][k] x_k <= sum_k sigma[i][k] u[i][k] p^i_k

which passes through the unit-cube vertex p^i.  With the normalization at
equality its intersection cut equals the CGLP cut of the same multipliers.
"""
import math
from fractions import Fraction

from .cglp import BINARY, MIP, Cut, Multipliers, cube_vertices, term_signs

ZERO_TOL = 1e-9

LABELS = ("S", "T_A", "T_B", "Q", "T_C1", "T_C2", "C_A", "C_B", "C_C", "C_CT", "S_T")
UNCLASSIFIED = "unclassified"


class BodyError(ValueError):
    pass


class Body:
    """Intersection of half-planes a.x <= b."""

    def __init__(self, faces, name=None):
        self.faces = [(tuple(a), b) for a, b in faces]
        self.name = name

    @property
    def q(self):
        return len(self.faces[0][0])

    def contains(self, x, strict=False, tol=0):
        for a, b in self.faces:
            lhs = sum(ai * xi for ai, xi in zip(a, x))
            if strict and not lhs < b - tol:
                return False
            if not strict and lhs > b + tol:
                return False
        return True

    def residuals(self, x):
        return [b - sum(ai * xi for ai, xi in zip(a, x)) for a, b in self.faces]

    def scaled(self, factor, center=None):
        """Body scaled by ``factor`` about ``center`` (origin by default)."""
        center = center or (0,) * self.q
        faces = []
        for a, b in self.faces:
            ac = sum(ai * ci for ai, ci in zip(a, center))
            faces.append((a, ac + factor * (b - ac)))
        return Body(faces, self.name)

    def __repr__(self):
        return f"Body({self.faces})"


class ParametricBody(Body):
    """Body whose face i comes from the weights of disjunctive term i."""

    def __init__(self, weights):
        weights = [tuple(row) for row in weights]
        q = len(weights[0])
        sig = term_signs(q)
        verts = cube_vertices(q)
        faces = []
        for s, p, u in zip(sig, verts, weights):
            a = tuple(sk * uk for sk, uk in zip(s, u))
            faces.append((a, sum(ak * pk for ak, pk in zip(a, p))))
        super().__init__(faces)
        self.weights = weights
        self.signs = sig

    @classmethod
    def from_multipliers(cls, m):
        return cls(m.u)

    def normalization_residuals(self, f):
        """b_i - a_i.f per face; 1 for every face means normalized."""
        return self.residuals(f)


def _dot(a, x):
    return sum(ai * xi for ai, xi in zip(a, x))


def intersection_cut(system, body, source="octahedron"):
    """alpha_j = 1/s_j* where s_j* is the step along r_j to the boundary."""
    f = system.f
    rays = [system.ray(j) for j in range(system.n)]
    denom = []
    for idx, (a, b) in enumerate(body.faces):
        if all(ai == 0 for ai in a):
            if b < 0:
                raise BodyError(f"face {idx + 1} makes the body empty")
            denom.append(None)
            continue
        d = b - _dot(a, f)
        if d <= 0:
            raise BodyError(f"f is not interior: face {idx + 1} has slack {d}")
        denom.append(d)
    alpha = []
    zero = f[0] * 0
    for r in rays:
        best = zero
        for (a, _), d in zip(body.faces, denom):
            if d is None:
                continue
            num = _dot(a, r)
            if num > 0:
                val = num / d
                if val > best:
                    best = val
        alpha.append(best)
    mult = None
    if isinstance(body, ParametricBody):
        mult = Multipliers(body.weights, MIP if all(x >= 0 for row in body.weights for x in row) else BINARY)
    return Cut(alpha, mult, None, source=source)


# ------------------------------------------------------------ geometry

class Edge:
    def __init__(self, a, b, terms, x0, d, tmin, tmax, cube_pts):
        self.a, self.b = a, b
        self.terms = terms
        self.x0, self.d = x0, d
        self.tmin, self.tmax = tmin, tmax
        self.cube_pts = cube_pts

    @property
    def bounded(self):
        return self.tmin is not None and self.tmax is not None

    def endpoints(self):
        out = []
        for t in (self.tmin, self.tmax):
            if t is not None:
                out.append(tuple(x + t * dx for x, dx in zip(self.x0, self.d)))
        return out

    def __repr__(self):
        return f"Edge(terms={self.terms}, cube={self.cube_pts}, bounded={self.bounded})"


def _line_key(a, b, exact):
    scale = max(abs(x) for x in a)
    na = tuple(x / scale for x in a)
    nb = b / scale
    if exact:
        return na + (nb,)
    return tuple(round(float(x), 9) for x in na + (nb,))


def body_edges(body, tol=0):
    """Edges (positive-length boundary pieces) of a planar body."""
    exact = tol == 0
    if exact:
        body = Body([(tuple(_to_exact(x) for x in a), _to_exact(b)) for a, b in body.faces])
    groups = {}
    for idx, (a, b) in enumerate(body.faces):
        if all((ai == 0) if exact else abs(ai) <= tol for ai in a):
            continue
        groups.setdefault(_line_key(a, b, exact), []).append(idx)
    edges = []
    for key, terms in groups.items():
        a, b = body.faces[terms[0]]
        nn = a[0] * a[0] + a[1] * a[1]
        x0 = (a[0] * b / nn, a[1] * b / nn)
        d = (-a[1], a[0])
        tmin = tmax = None
        empty = False
        for idx, (a2, b2) in enumerate(body.faces):
            if idx in terms:
                continue
            ad = _dot(a2, d)
            room = b2 - _dot(a2, x0)
            if (ad == 0) if exact else abs(ad) <= tol * (1 + abs(room)):
                if room < -tol:
                    empty = True
                continue
            t = room / ad
            if ad > 0:
                tmax = t if tmax is None else min(tmax, t)
            else:
                tmin = t if tmin is None else max(tmin, t)
        if empty:
            continue
        if tmin is not None and tmax is not None and tmax - tmin <= tol:
            continue
        pts = []
        for p in cube_vertices(2):
            if abs(_dot(a, p) - b) > tol:
                continue
            tp = _dot(d, (p[0] - x0[0], p[1] - x0[1])) / nn
            if (tmin is None or tp >= tmin - tol) and (tmax is None or tp <= tmax + tol):
                pts.append(p)
        edges.append(Edge(a, b, sorted(terms), x0, d, tmin, tmax, pts))
    return edges


def _adjacent(p, r):
    return sum(abs(x - y) for x, y in zip(p, r)) == 1


def _parallel(e1, e2, tol):
    cross = e1.a[0] * e2.a[1] - e1.a[1] * e2.a[0]
    return cross == 0 if tol == 0 else abs(cross) <= tol


class OctahedronConfig:
    def __init__(self, label, active):
        self.label = label
        self.active = tuple(active)

    def __eq__(self, other):
        if isinstance(other, str):
            return self.label == other
        return isinstance(other, OctahedronConfig) and (self.label, self.active) == (other.label, other.active)

    def __hash__(self):
        return hash(self.label)

    def __str__(self):
        return self.label

    def __repr__(self):
        return f"OctahedronConfig({self.label}, active={self.active})"


_POSITIVE_COUNT = {4: "S", 5: "T_A", 6: "T_B", 8: "Q"}


def _to_exact(x):
    return Fraction(x) if isinstance(x, int) else x


def active_terms(system, m):
    """Terms whose weights are pinned down by the cut coefficients.

    A term whose feasible weight polygon is larger than a point does not
    shape the body and is reported inactive.
    """
    from .cglp import _term_polygon_vertices, alpha_from_multipliers
    alpha = alpha_from_multipliers(system, m)
    out = []
    for i in range(len(m.u)):
        verts, _ = _term_polygon_vertices(system, alpha, i, m.mode)
        if len(verts) == 1:
            out.append(i)
    return out


def classify(m, system=None, zero_tol=None):
    """Configuration label of the body defined by multipliers m (q = 2).

    Nonnegative weights are labelled by their count of positive entries.
    Signed weights are labelled from the geometry of the active faces.
    With ``system`` given, a term is active when the cut fixes its weights
    uniquely; otherwise every face with an edge of positive length is
    active.  A face contains the cube vertices on its supporting line.
    """
    if m.q != 2:
        raise BodyError("classification is defined for q = 2")
    exact = all(isinstance(x, (int, Fraction)) for row in m.u for x in row)
    tol = 0 if exact else (ZERO_TOL if zero_tol is None else zero_tol)
    u = [[(0 if abs(x) <= tol else _to_exact(x)) for x in row] for row in m.u]
    if all(x >= 0 for row in u for x in row):
        count = sum(1 for row in u for x in row if x > 0)
        active = [i for i, row in enumerate(u) if any(x > 0 for x in row)]
        return OctahedronConfig(_POSITIVE_COUNT.get(count, UNCLASSIFIED), active)

    full = ParametricBody(u)
    if system is not None:
        active = active_terms(system, m)
    else:
        active = sorted(i for e in body_edges(full, tol) for i in e.terms)
    label = UNCLASSIFIED
    if not active:
        return OctahedronConfig(label, active)
    body = Body([full.faces[i] for i in active])
    edges = body_edges(body, tol)
    for e in edges:
        e.terms = [active[t] for t in e.terms]
        e.cube_pts = [p for p in cube_vertices(2) if abs(_dot(e.a, p) - e.b) <= tol]
    bounded = len(edges) >= 3 and all(e.bounded for e in edges)
    par = any(_parallel(e1, e2, tol) for i, e1 in enumerate(edges) for e2 in edges[i + 1:])
    if bounded and len(edges) == 3:
        verts = {p for e in edges for p in e.endpoints()}
        inside = sum(1 for v in verts if all(-tol <= x <= 1 + tol for x in v))
        label = {0: "T_C1", 1: "T_C2"}.get(inside, UNCLASSIFIED)
    elif not bounded and par:
        label = "S" if len(edges) == 2 else "S_T" if len(edges) == 3 else UNCLASSIFIED
    elif not bounded and len(edges) == 2:
        pairs = [e.cube_pts for e in edges if len(e.cube_pts) >= 2]
        if any(_adjacent(p[0], p[1]) for p in pairs):
            label = "C_A"
        elif pairs:
            label = "C_B"
        else:
            label = "C_C"
    elif not bounded and len(edges) == 3:
        label = "C_CT"
    return OctahedronConfig(label, [i for e in edges for i in e.terms])


# --------------------------------------------------------- lattice points

def _radius(body, tol):
    pts = []
    for e in body_edges(body, tol):
        pts.extend(e.endpoints())
    if not pts:
        return 0
    return max(abs(float(x)) for p in pts for x in p)


def is_lattice_point_free(body, mode=MIP, margin=10):
    """No integer point (MIP) or 0-1 point (binary) in the body interior.

    Unbounded bodies are scanned over the window spanned by their vertices
    widened by ``margin``.
    """
    exact = all(isinstance(x, (int, Fraction)) for a, b in body.faces for x in (*a, b))
    tol = 0 if exact else ZERO_TOL
    if mode == BINARY:
        pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    else:
        edges = body_edges(body, tol)
        B = math.ceil(_radius(body, tol))
        if not all(e.bounded for e in edges) or len(edges) < 3:
            B += margin
        pts = [(x, y) for x in range(-B, B + 2) for y in range(-B, B + 2)]
    return not any(body.contains(p, strict=True, tol=tol) for p in pts)


# ------------------------------------------------------------------ svg

def render_svg(body, system=None, size=600, window=(-1.5, 2.5)):
    """Static diagram: body, unit-cube vertices, rays from f and their
    boundary points."""
    lo, hi = window
    scale = size / (hi - lo)

    def px(p):
        return ((float(p[0]) - lo) * scale, (hi - float(p[1])) * scale)

    # clip the body to the window as a polygon
    poly = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    for a, b in body.faces:
        a = (float(a[0]), float(a[1]))
        b = float(b)
        out = []
        for i, p in enumerate(poly):
            qp = poly[(i + 1) % len(poly)]
            vp = a[0] * p[0] + a[1] * p[1] - b
            vq = a[0] * qp[0] + a[1] * qp[1] - b
            if vp <= 0:
                out.append(p)
            if (vp < 0 < vq) or (vq < 0 < vp):
                t = vp / (vp - vq)
                out.append((p[0] + t * (qp[0] - p[0]), p[1] + t * (qp[1] - p[1])))
        poly = out
        if not poly:
            break
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" '
             f'width="{size}" height="{size}">',
             f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>']
    if poly:
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(px, poly))
        parts.append(f'<polygon points="{pts}" fill="#cfe3f5" stroke="#1f5f99" stroke-width="2"/>')
    sq = [px(p) for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    parts.append('<polygon points="' + " ".join(f"{x:.2f},{y:.2f}" for x, y in sq)
                 + '" fill="none" stroke="#555" stroke-dasharray="4 3"/>')
    for x, y in sq:
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
    if system is not None:
        cut = intersection_cut(system, body)
        fx, fy = px(system.f)
        for j, aj in enumerate(cut.alpha):
            r = system.ray(j)
            end = (float(system.f[0]) + 3 * float(r[0]), float(system.f[1]) + 3 * float(r[1]))
            ex, ey = px(end)
            parts.append(f'<line x1="{fx:.2f}" y1="{fy:.2f}" x2="{ex:.2f}" y2="{ey:.2f}" '
                         f'stroke="#999" stroke-width="1"/>')
            if aj > 0:
                hit = px((float(system.f[0]) + float(r[0]) / float(aj),
                          float(system.f[1]) + float(r[1]) / float(aj)))
                parts.append(f'<circle cx="{hit[0]:.2f}" cy="{hit[1]:.2f}" r="3" fill="#c0392b"/>')
        parts.append(f'<circle cx="{fx:.2f}" cy="{fy:.2f}" r="4" fill="#e67e22"/>')
    parts.append("</svg>")
    return "\n".join(parts)
