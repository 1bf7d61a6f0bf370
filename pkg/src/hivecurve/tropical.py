"""Regular subdivisions, dual tropical curves, honeycombs and amoebas.

A lifting assigns a rational height to every lattice point of the order-n
triangular grid; the projection of the upper faces of the lifted convex hull
is its regular subdivision.  The dual graph (one vertex per 2-cell, one
bounded edge per interior 1-face, one ray per boundary 1-face) is the
tropical curve of the lifting: the nonsmooth locus of
max(h_ijk + i*x + j*y + k*z).

Plane coordinates: the quotient of 3-space by the diagonal is charted by
(x - z, y - z), so lattice point (i, j, k) pairs with the chart as i*X + j*Y.
All subdivision and duality arithmetic is exact.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import NotHiveDual
from .hive import BoundarySpec, index_set


@dataclass(frozen=True)
class Lifting:
    n: int
    exponents: dict

    def __post_init__(self):
        if set(self.exponents) != set(index_set(self.n)):
            raise ValueError(f"lifting must cover the full order-{self.n} grid")

    @classmethod
    def from_hive(cls, h):
        return cls(h.n, dict(h.values))

    def shifted_by_linear(self, a, b, c):
        return Lifting(self.n, {(i, j, k): v + a * i + b * j + c * k
                                for (i, j, k), v in self.exponents.items()})


@dataclass(frozen=True)
class SubdivisionCell:
    vertices: tuple       # polygon corners (TriangleIndex), counterclockwise
    points: frozenset     # every lattice point tied on this cell
    functional: tuple     # (a, b, c): certifying value a*i + b*j + c in the chart


@dataclass
class Subdivision:
    n: int
    lifting: Lifting
    cells: list
    edges: list = field(default_factory=list)        # (v0, v1) endpoint pairs
    edge_cells: dict = field(default_factory=dict)   # frozenset pair -> cell ids

    @property
    def tied_points(self):
        out = set()
        for c in self.cells:
            out |= c.points
        return out

    def interior_edges(self):
        return [e for e in self.edges if len(self.edge_cells[frozenset(e)]) == 2]

    def boundary_edges(self):
        return [e for e in self.edges if len(self.edge_cells[frozenset(e)]) == 1]


def _chart(idx):
    return (idx[0], idx[1])


def _convex_hull_ccw(points):
    """Strict convex hull (Andrew monotone chain) of integer chart points."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts
    def half(ps):
        out = []
        for p in ps:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
                if cross <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out
    lower = half(pts)
    upper = half(pts[::-1])
    return lower[:-1] + upper[:-1]


def regular_subdivision(lifting, perturb_seed=None):
    """Project the upper faces of the lifted hull down to the grid.

    Each returned cell carries the certifying linear functional that agrees
    with the lifting exactly on the cell's tied points and exceeds it
    strictly everywhere else.  Ties are kept as polygonal cells; pass
    ``perturb_seed`` to break them with a tiny seeded rational perturbation
    (generically producing a triangulation) instead.
    """
    n = lifting.n
    idxs = index_set(n)
    if perturb_seed is not None:
        rng = np.random.default_rng(perturb_seed)
        eps = Fraction(1, 10 ** 9)
        lifting = Lifting(n, {idx: Fraction(lifting.exponents[idx])
                              + eps * int(rng.integers(1, 10 ** 6))
                              for idx in idxs})
    den = math.lcm(*(Fraction(lifting.exponents[i]).denominator for i in idxs))
    pts = [(idx[0], idx[1], int(Fraction(lifting.exponents[idx]) * den)) for idx in idxs]
    m = len(pts)
    chart_of = {(_chart(idx)): idx for idx in idxs}

    faces = {}
    for t1 in range(m):
        p1 = pts[t1]
        for t2 in range(t1 + 1, m):
            p2 = pts[t2]
            for t3 in range(t2 + 1, m):
                p3 = pts[t3]
                u = (p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2])
                v = (p3[0] - p1[0], p3[1] - p1[1], p3[2] - p1[2])
                nz = u[0] * v[1] - u[1] * v[0]
                if nz == 0:
                    continue
                nx = u[1] * v[2] - u[2] * v[1]
                ny = u[2] * v[0] - u[0] * v[2]
                if nz < 0:
                    nx, ny, nz = -nx, -ny, -nz
                already = False
                for eq in faces:
                    if t1 in eq and t2 in eq and t3 in eq:
                        already = True
                        break
                if already:
                    continue
                eq = []
                upper = True
                for t in range(m):
                    q = pts[t]
                    dot = (nx * (q[0] - p1[0]) + ny * (q[1] - p1[1])
                           + nz * (q[2] - p1[2]))
                    if dot > 0:
                        upper = False
                        break
                    if dot == 0:
                        eq.append(t)
                if not upper:
                    continue
                a = Fraction(-nx, nz) / den
                b = Fraction(-ny, nz) / den
                c = (Fraction(p1[2]) + Fraction(nx * p1[0] + ny * p1[1], nz)) / den
                faces[frozenset(eq)] = (a, b, c)

    cells = []
    for eq, functional in faces.items():
        members = [idxs[t] for t in sorted(eq)]
        hull = _convex_hull_ccw([_chart(idx) for idx in members])
        cells.append(SubdivisionCell(
            vertices=tuple(chart_of[p] for p in hull),
            points=frozenset(members),
            functional=functional))
    cells.sort(key=lambda c: sorted(c.vertices))

    # covering check: cell areas add up to the full triangle
    total = Fraction(0)
    for c in cells:
        poly = [_chart(v) for v in c.vertices]
        s = 0
        for i in range(len(poly)):
            x0, y0 = poly[i]
            x1, y1 = poly[(i + 1) % len(poly)]
            s += x0 * y1 - x1 * y0
        total += Fraction(abs(s), 2)
    assert total == Fraction(n * n, 2), "upper-hull cells do not tile the triangle"

    sub = Subdivision(n, lifting, cells)
    edge_cells = {}
    for ci, c in enumerate(cells):
        k = len(c.vertices)
        for i in range(k):
            key = frozenset((c.vertices[i], c.vertices[(i + 1) % k]))
            edge_cells.setdefault(key, []).append(ci)
    for key, owners in edge_cells.items():
        assert len(owners) <= 2, "three cells share an edge; hull construction bug"
    sub.edges = sorted(tuple(sorted(k)) for k in edge_cells)
    sub.edge_cells = edge_cells
    return sub


_STANDARD_DIRS = ((1, -1), (0, 1), (1, 0))


def _parallel_to_standard(d):
    di, dj = d
    return di == 0 or dj == 0 or di == -dj


def classify_subdivision(sub):
    """standard / coarsening_of_standard / other.

    Standard: exactly the n^2 unit triangles.  Coarsening: every lattice
    point is tied and every subdivision edge is parallel to one of the three
    unit directions, which makes each cell a union of marked unit triangles.
    """
    n = sub.n
    unit = all(len(c.points) == 3 and _cell_is_unit(c) for c in sub.cells)
    if unit and len(sub.cells) == n * n:
        return "standard"
    if len(sub.tied_points) != (n + 1) * (n + 2) // 2:
        return "other"
    for (v0, v1) in sub.edges:
        d = (v1[0] - v0[0], v1[1] - v0[1])
        if not _parallel_to_standard(d):
            return "other"
    return "coarsening_of_standard"


def _cell_is_unit(cell):
    # a grid triangle: area 1/2 and every edge along a standard direction
    if len(cell.vertices) != 3:
        return False
    (a, b, c) = [_chart(v) for v in cell.vertices]
    area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    if area2 != 1:
        return False
    for p, q in ((a, b), (b, c), (c, a)):
        if not _parallel_to_standard((q[0] - p[0], q[1] - p[1])):
            return False
    return True


@dataclass
class TropicalCurve:
    n: int
    vertices: list     # chart positions [(Fraction, Fraction)] per 2-cell
    edges: list        # (v1, v2, primitive (di, dj), lattice multiplicity)
    rays: list         # (v, primitive, multiplicity, side in {"k0","i0","j0"})
    subdivision: Subdivision

    def ray_count(self):
        return sum(r[2] for r in self.rays)

    def check_balanced(self):
        acc = {i: [Fraction(0), Fraction(0)] for i in range(len(self.vertices))}
        for (v1, v2, d, mult) in self.edges:
            acc[v1][0] += mult * d[0]
            acc[v1][1] += mult * d[1]
            acc[v2][0] -= mult * d[0]
            acc[v2][1] -= mult * d[1]
        for (v, d, mult, _side) in self.rays:
            acc[v][0] += mult * d[0]
            acc[v][1] += mult * d[1]
        return all(a == 0 and b == 0 for (a, b) in acc.values())


def _primitive(di, dj):
    g = math.gcd(abs(di), abs(dj))
    return (di // g, dj // g)


def _edge_side(v0, v1, n):
    if v0[0] + v0[1] == n and v1[0] + v1[1] == n:
        return "k0"
    if v0[0] == 0 and v1[0] == 0:
        return "i0"
    if v0[1] == 0 and v1[1] == 0:
        return "j0"
    return None


_SIDE_RAY_DIR = {"k0": (1, 1), "i0": (-1, 0), "j0": (0, -1)}


def tropical_curve(lifting):
    """Dual graph of the regular subdivision, with exact balancing."""
    sub = regular_subdivision(lifting)
    verts = [(-c.functional[0], -c.functional[1]) for c in sub.cells]
    edges = []
    rays = []
    for (v0, v1) in sub.edges:
        owners = sub.edge_cells[frozenset((v0, v1))]
        c0, c1 = _chart(v0), _chart(v1)
        mult = math.gcd(abs(c1[0] - c0[0]), abs(c1[1] - c0[1]))
        if len(owners) == 2:
            i1, i2 = owners
            dx = verts[i2][0] - verts[i1][0]
            dy = verts[i2][1] - verts[i1][1]
            den = math.lcm(dx.denominator, dy.denominator)
            d = _primitive(int(dx * den), int(dy * den))
            edges.append((i1, i2, d, mult))
        else:
            side = _edge_side(v0, v1, sub.n)
            assert side is not None, "boundary edge not on a side of the triangle"
            d = _SIDE_RAY_DIR[side]
            # orientation sanity: a third cell point must not increase along d
            cell = sub.cells[owners[0]]
            w = next((_chart(p) for p in cell.points
                      if (_chart(p) != c0 and _chart(p) != c1)), None)
            if w is not None:
                assert (w[0] - c0[0]) * d[0] + (w[1] - c0[1]) * d[1] <= 0
            rays.append((owners[0], d, mult, side))
    return TropicalCurve(sub.n, verts, edges, rays, sub)


def honeycomb_boundary(curve):
    """Sorted ray positions per side; equals the hive boundary exactly.

    On the k0 side rays run parallel to the z-axis direction and carry the
    value x - y; the i0 side carries y - z and the j0 side z - x.
    """
    buckets = {"k0": [], "i0": [], "j0": []}
    for (vi, d, mult, side) in curve.rays:
        if side not in buckets or d != _SIDE_RAY_DIR[side]:
            raise NotHiveDual("ray pattern does not come from a hive lifting")
        x, y = curve.vertices[vi]
        value = {"k0": x - y, "i0": y, "j0": -x}[side]
        buckets[side].extend([value] * mult)
    if any(len(v) != curve.n for v in buckets.values()):
        raise NotHiveDual("each side must carry n rays counted with multiplicity")
    return BoundarySpec(tuple(sorted(buckets["k0"], reverse=True)),
                        tuple(sorted(buckets["i0"], reverse=True)),
                        tuple(sorted(buckets["j0"], reverse=True)))


@dataclass
class AmoebaCloud:
    points: np.ndarray          # (m, 2) chart coordinates (log|x|-log|z|, log|y|-log|z|)
    moduli_resolution: tuple
    phase_count: int
    window: tuple

    def __len__(self):
        return len(self.points)


def amoeba_sample(form, resolution=(64, 64), phases=32, window=(-3.0, 3.0, -3.0, 3.0),
                  tiny=1e-300):
    """Sample the amoeba by solving for z on circles of fixed |x| and |y|.

    For every grid cell of log-moduli (p, q) in the window and every phase
    pair, the univariate slice F(x, y, *) is solved by companion matrices;
    every returned point is the log-magnitude image of an exact zero.
    """
    n = form.n
    rx, ry = resolution
    p = np.linspace(window[0], window[1], rx)
    q = np.linspace(window[2], window[3], ry)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    ph = np.arange(phases)
    theta_x = 2.0 * np.pi * ph / max(phases, 1)
    theta_y = 2.0 * np.pi * ((golden * ph) % 1.0)

    # coefficient of z^k is sum over i+j = n-k of F_ijk x^i y^j
    zdeg = max((k for (_i, _j, k) in form.coeffs if form.coeffs[(_i, _j, k)] != 0),
               default=0)
    if zdeg == 0:
        return AmoebaCloud(np.empty((0, 2)), resolution, phases, window)

    pp, qq, tt = np.meshgrid(p, q, ph, indexing="ij")
    xs = np.exp(pp + 1j * theta_x[tt])
    ys = np.exp(qq + 1j * theta_y[tt])
    xs = xs.ravel()
    ys = ys.ravel()
    rows = np.zeros((xs.size, n + 1), dtype=np.complex128)
    for (i, j, k), c in form.coeffs.items():
        rows[:, n - k] += float(c) * xs ** i * ys ** j
    lead_ok = np.abs(rows[:, 0]) > 0
    rows = rows[lead_ok]
    xs, ys = xs[lead_ok], ys[lead_ok]
    if rows.size == 0:
        return AmoebaCloud(np.empty((0, 2)), resolution, phases, window)
    roots = _kernels.polyroots_batch(np.ascontiguousarray(rows))
    logx = np.repeat(np.log(np.abs(xs)), n)
    logy = np.repeat(np.log(np.abs(ys)), n)
    zmag = np.abs(roots).ravel()
    keep = zmag > tiny
    logz = np.log(zmag[keep])
    pts = np.column_stack([logx[keep] - logz, logy[keep] - logz])
    return AmoebaCloud(pts, resolution, phases, window)


# The chart (x-z, y-z) is one coordinate patch of the plane quotient; distance
# is measured in the intrinsic metric of R^3/R(1,1,1) (Euclidean on the
# orthogonal complement of the diagonal), whose Gram matrix in the chart is
# (2/3) * [[1, -1/2], [-1/2, 1]].
_QUOTIENT_CHART = np.linalg.cholesky(
    np.array([[2.0 / 3.0, -1.0 / 3.0], [-1.0 / 3.0, 2.0 / 3.0]])).T


def distance_to_tropical(points, curve, scale=1.0):
    """Max intrinsic distance from scaled cloud points to the tropical graph."""
    segs = []
    raylen = 1e4
    for (v1, v2, _d, _m) in curve.edges:
        a = np.array([float(curve.vertices[v1][0]), float(curve.vertices[v1][1])])
        b = np.array([float(curve.vertices[v2][0]), float(curve.vertices[v2][1])])
        segs.append((a, b))
    for (vi, d, _m, _side) in curve.rays:
        a = np.array([float(curve.vertices[vi][0]), float(curve.vertices[vi][1])])
        b = a + raylen * np.array(d, dtype=float)
        segs.append((a, b))
    pts = np.asarray(points, dtype=float) * scale
    if len(pts) == 0:
        return 0.0
    pts = pts @ _QUOTIENT_CHART.T
    best = np.full(len(pts), np.inf)
    for (a, b) in segs:
        a = _QUOTIENT_CHART @ a
        b = _QUOTIENT_CHART @ b
        ab = b - a
        denom = ab @ ab
        t = np.clip(((pts - a) @ ab) / denom, 0.0, 1.0)
        proj = a + t[:, None] * ab
        d = np.linalg.norm(pts - proj, axis=1)
        best = np.minimum(best, d)
    return float(best.max())
