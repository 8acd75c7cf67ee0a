"""Fixed lattice-free triangles and 0-1 cones for two-row cuts."""
from .cglp import Cut
from .octahedron import Body, intersection_cut
from .strengthen import floor_ceil_candidates, strengthen_monoidal


class ShapeError(ValueError):
    pass


TRIANGLES = (
    ((0, 0), (2, 0), (0, 2)),
    ((-1, 0), (1, 0), (1, 2)),
    ((0, -1), (2, 1), (0, 1)),
    ((1, -1), (1, 1), (-1, 1)),
)

# apex, ray along a cube side, ray along the diagonal
CONES = (
    ((0, 0), (1, 0), (1, 1)),
    ((0, 0), (0, 1), (1, 1)),
    ((0, 1), (1, 0), (1, -1)),
    ((0, 1), (0, -1), (1, -1)),
    ((1, 1), (-1, 0), (-1, -1)),
    ((1, 1), (0, -1), (-1, -1)),
    ((1, 0), (-1, 0), (-1, 1)),
    ((1, 0), (0, 1), (-1, 1)),
)


class FixedShape:
    def __init__(self, kind, geometry, id):
        self.kind = kind
        self.geometry = geometry
        self.id = id
        self.body = _triangle_body(geometry) if kind == "triangle" else _cone_body(geometry)

    def contains(self, f, margin=0):
        """f strictly inside, at least ``margin`` away from every face line."""
        return self.body.contains(f, strict=True, tol=margin)

    def __repr__(self):
        return f"FixedShape({self.kind} {self.id}: {self.geometry})"


def _triangle_body(verts):
    faces = []
    for i in range(3):
        p, q, r = verts[i], verts[(i + 1) % 3], verts[(i + 2) % 3]
        a = (q[1] - p[1], p[0] - q[0])
        b = a[0] * p[0] + a[1] * p[1]
        if a[0] * r[0] + a[1] * r[1] > b:
            a, b = (-a[0], -a[1]), -b
        faces.append((a, b))
    return Body(faces, "triangle")


def _cone_body(geom):
    apex, d1, d2 = geom
    faces = []
    for d, other in ((d1, d2), (d2, d1)):
        a = (-d[1], d[0])
        if a[0] * other[0] + a[1] * other[1] > 0:
            a = (-a[0], -a[1])
        faces.append((a, a[0] * apex[0] + a[1] * apex[1]))
    return Body(faces, "cone")


def all_shapes():
    shapes = [FixedShape("triangle", g, i + 1) for i, g in enumerate(TRIANGLES)]
    shapes += [FixedShape("cone", g, i + 1) for i, g in enumerate(CONES)]
    return shapes


def applicable_shapes(f, kinds=("triangle", "cone"), margin=0):
    """Shapes whose interior strictly contains f.

    ``margin`` is measured in the face functional: b - a.f > margin.
    """
    return [s for s in all_shapes() if s.kind in kinds and s.contains(f, margin)]


def _face_terms(system, body):
    """Per-face coefficients a.r_j/(b - a.f) for every column."""
    out = []
    for a, b in body.faces:
        den = b - sum(ai * fi for ai, fi in zip(a, system.f))
        if den <= 0:
            raise ShapeError("shape does not strictly contain f")
        out.append([sum(ai * ri for ai, ri in zip(a, system.ray(j))) / den
                    for j in range(system.n)])
    return out


def cone_weights(system, body):
    """Monoidal weights of the two cone terms over the 0-1 box.

    Term a.x >= b scaled to right-hand side 1 has lower bound
    (min over the box of a.x - a.f)/(b - a.f); the weight is 1 minus it.
    """
    out = []
    for a, b in body.faces:
        den = b - sum(ai * fi for ai, fi in zip(a, system.f))
        low = sum(min(ai, 0) for ai in a)
        out.append((b - low) / den)
    return out


def shape_cut(system, shape, strengthen=False):
    """Cut from one fixed shape.

    Triangles give the intersection cut of the body; with ``strengthen``
    integer columns take the best floor/ceil shift of the ray.  Cones give
    the two-term disjunction cut (valid for 0-1 rows), strengthened
    monoidally when asked.
    """
    if not shape.contains(system.f):
        raise ShapeError(f"{shape} does not contain f = {system.f}")
    if shape.kind == "triangle":
        cut = intersection_cut(system, shape.body, source="fixed-shape")
        if strengthen and system.integer_nonbasics:
            alpha = list(cut.alpha)
            shifts = {}
            for j in sorted(system.integer_nonbasics):
                r = system.ray(j)
                best, best_m = alpha[j], (0,) * system.q
                for m in floor_ceil_candidates(r):
                    shifted = [ri - mi for ri, mi in zip(r, m)]
                    val = _gauge(system, shape.body, shifted)
                    if val < best:
                        best, best_m = val, m
                alpha[j] = best
                shifts[j] = best_m
            cut = Cut(alpha, None, None, "fixed-shape", strengthened=True)
            cut.shifts = shifts
        cut.config = f"T{shape.id}"
        return cut
    terms = _face_terms(system, shape.body)
    alpha = [max(col) for col in zip(*terms)]
    cut = Cut(alpha, None, f"C{shape.id}", "fixed-shape")
    if strengthen and system.integer_nonbasics:
        w = cone_weights(system, shape.body)
        for j in system.integer_nonbasics:
            val, _, _ = strengthen_monoidal([t[j] for t in terms], w)
            if val < alpha[j]:
                alpha[j] = val
        cut = Cut(alpha, None, f"C{shape.id}", "fixed-shape", strengthened=True)
    return cut


def _gauge(system, body, r):
    best = 0
    for a, b in body.faces:
        den = b - sum(ai * fi for ai, fi in zip(a, system.f))
        num = sum(ai * ri for ai, ri in zip(a, r))
        if num > 0 and num / den > best:
            best = num / den
    return best

