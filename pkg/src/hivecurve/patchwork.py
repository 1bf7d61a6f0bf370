"""Combinatorial patchworking: sign charts, gluing, and curve topology.

A signed lifting whose subdivision is a triangulation determines, per sign
quadrant, a chart: effective vertex signs and one midpoint segment per
mixed triangle.  The four charts glue into a model of the projective plane
(four reflected copies of the triangle in the diamond |x|+|y| <= n with
antipodal boundary identification).  Topology is computed exactly on the
sphere double cover: two copies of the diamond, deck transformation flipping
the copy, equator point (A, p) glued to (B, -p).  A curve component lifts to
two circles when it is an oval and to one deck-invariant circle when it is a
pseudoline; nesting of the positive-quadrant region is read off from
per-circle crossing parities between a face and its deck image.

All coordinates are doubled so edge midpoints stay integral.
"""

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DanglingSegment, NotAPath, NotATriangulation
from .hive import index_set
from .tropical import Lifting, regular_subdivision


@dataclass(frozen=True)
class SignedLifting:
    lifting: Lifting
    signs: dict      # TriangleIndex -> +1 | -1

    def __post_init__(self):
        if set(self.signs) != set(index_set(self.lifting.n)):
            raise ValueError("sign table must cover the full grid")
        if any(s not in (1, -1) for s in self.signs.values()):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def all_plus(cls, lifting):
        return cls(lifting, {idx: 1 for idx in index_set(lifting.n)})


QUADRANT_CLASSES = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))


def effective_sign(sign, idx, eps):
    i, j, k = idx
    return sign * (eps[0] ** i) * (eps[1] ** j) * (eps[2] ** k)


@dataclass
class Chart:
    epsilon: tuple
    triangles: list          # tuples of three TriangleIndex, canonical order
    vertex_signs: dict       # TriangleIndex -> effective sign in this quadrant
    segments: list           # midpoint pairs in doubled chart coords

    def segment_count(self):
        return len(self.segments)


def _triangulation_cells(sub):
    cells = []
    for c in sub.cells:
        if len(c.points) != 3 or len(c.vertices) != 3:
            raise NotATriangulation(
                "patchworking needs a triangulation: every cell must have exactly "
                "three tied lattice points")
        cells.append(tuple(sorted(c.vertices)))
    return sorted(cells)


def _mixed_structure(tri, signs):
    """Return (odd_vertex, (even1, even2)) or None when all signs agree."""
    s = [signs[v] for v in tri]
    if s[0] == s[1] == s[2]:
        return None
    for pos in range(3):
        if s[pos] != s[(pos + 1) % 3] and s[pos] != s[(pos + 2) % 3]:
            w = tri[pos]
            rest = tuple(v for v in tri if v != w)
            return w, rest
    raise AssertionError("unreachable sign pattern")


def _mid(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _dbl(v):
    return (2 * v[0], 2 * v[1])


def build_chart(signed, eps, _sub=None):
    """Effective signs and Viro midpoint segments for one sign quadrant."""
    if eps not in QUADRANT_CLASSES:
        raise ValueError(f"quadrant must be one of {QUADRANT_CLASSES}")
    sub = _sub if _sub is not None else regular_subdivision(signed.lifting)
    tris = _triangulation_cells(sub)
    vsigns = {idx: effective_sign(s, idx, eps) for idx, s in signed.signs.items()}
    segments = []
    for tri in tris:
        mix = _mixed_structure(tri, vsigns)
        if mix is None:
            continue
        w, (u, v) = mix
        segments.append((_mid(u[:2], w[:2]), _mid(v[:2], w[:2])))
    return Chart(eps, tris, vsigns, segments)


class TopologyReport(NamedTuple):
    components: int
    ovals: int
    pseudoline: bool
    nesting_depth: int
    crossing_parities: dict   # component id -> parity vs the reference pseudoline

    def summary(self):
        return {"components": self.components, "ovals": self.ovals,
                "pseudoline": self.pseudoline, "nesting": self.nesting_depth}


def is_vinnikov_topology(report, n):
    """floor(n/2) ovals all containing the positive region, pseudoline iff n odd."""
    return (report.ovals == n // 2
            and report.pseudoline == (n % 2 == 1)
            and report.nesting_depth == n // 2)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


_QUADRANTS = {(1, 1): (1, 1, 1), (-1, 1): (-1, 1, 1),
              (1, -1): (1, -1, 1), (-1, -1): (1, 1, -1)}


def glue_and_classify(charts, centroid_hint=None):
    """Assemble the four charts on the projective-plane model and classify.

    Returns a TopologyReport with the component count, the oval/pseudoline
    split (deck-orbit size on the sphere double cover, cross-checked against
    crossing parity with the reference pseudoline eta = 0), and the nesting
    depth of the positive-quadrant region.
    """
    by_eps = {}
    for ch in charts.values() if isinstance(charts, dict) else charts:
        by_eps[ch.epsilon] = ch
    if set(by_eps) != set(QUADRANT_CLASSES):
        raise ValueError("need one chart per quadrant class")
    tris = by_eps[(1, 1, 1)].triangles
    for ch in by_eps.values():
        if ch.triangles != tris:
            raise ValueError("charts must come from a common signed lifting")
    n = sum(tris[0][0]) if tris else 0
    eqsum = 2 * n

    def pkey(copy, pt):
        if abs(pt[0]) + abs(pt[1]) == eqsum:
            return ("E", pt) if copy == "A" else ("E", (-pt[0], -pt[1]))
        return (copy, pt)

    pieces = []               # (copy, quad, tri_id, part)
    half_edges = {}           # canonical half-edge key -> [piece ids]
    arcs = []                 # (piece_near, piece_far, segment node pair)
    seg_graph = {}            # midpoint key -> set of neighbour midpoint keys
    uf = _UnionFind()

    def add_half(key, piece):
        half_edges.setdefault(key, []).append(piece)

    for copy in ("A", "B"):
        for quad, eps in _QUADRANTS.items():
            ch = by_eps[eps]
            s1, s2 = quad

            def model(pt):
                return (s1 * pt[0], s2 * pt[1])

            for t_id, tri in enumerate(tris):
                corners = [model(_dbl(v[:2])) for v in tri]
                mids = {}
                for a in range(3):
                    for b in range(a + 1, 3):
                        mids[(a, b)] = model(_mid(tri[a][:2], tri[b][:2]))
                mix = _mixed_structure(tri, ch.vertex_signs)
                if mix is None:
                    piece = (copy, quad, t_id, 0)
                    pieces.append(piece)
                    for (a, b), m in mids.items():
                        mk = pkey(copy, m)
                        add_half(frozenset((pkey(copy, corners[a]), mk)), piece)
                        add_half(frozenset((mk, pkey(copy, corners[b]))), piece)
                else:
                    w, (u, v) = mix
                    iw = tri.index(w)
                    iu, iv = tri.index(u), tri.index(v)
                    m_uw = mids[tuple(sorted((iu, iw)))]
                    m_vw = mids[tuple(sorted((iv, iw)))]
                    m_uv = mids[tuple(sorted((iu, iv)))]
                    near = (copy, quad, t_id, "near")
                    far = (copy, quad, t_id, "far")
                    pieces.extend((near, far))
                    kw, ku, kv = (pkey(copy, corners[i]) for i in (iw, iu, iv))
                    kuw, kvw, kuv = (pkey(copy, m) for m in (m_uw, m_vw, m_uv))
                    add_half(frozenset((kuw, kw)), near)
                    add_half(frozenset((kw, kvw)), near)
                    add_half(frozenset((ku, kuw)), far)
                    add_half(frozenset((kv, kvw)), far)
                    add_half(frozenset((ku, kuv)), far)
                    add_half(frozenset((kuv, kv)), far)
                    arcs.append((near, far, (kuw, kvw)))
                    seg_graph.setdefault(kuw, set()).add(kvw)
                    seg_graph.setdefault(kvw, set()).add(kuw)

    for key, owners in half_edges.items():
        if len(owners) != 2:
            raise DanglingSegment(f"half-edge {key} bounds {len(owners)} pieces")
        uf.union(owners[0], owners[1])

    # circles: connected components of the segment graph; every node degree 2
    for node, nbrs in seg_graph.items():
        if len(nbrs) != 2:
            raise DanglingSegment(f"curve midpoint {node} has degree {len(nbrs)}")
    circle_of = {}
    circles = 0
    for node in seg_graph:
        if node in circle_of:
            continue
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur in circle_of:
                continue
            circle_of[cur] = circles
            stack.extend(seg_graph[cur])
        circles += 1

    def sigma_node(key):
        # deck transformation: flip the sheet; equator points (A, p) ~ (B, -p)
        # are stored in A-coordinates, so the deck image of ("E", p) is ("E", -p)
        kind, pt = key
        if kind == "E":
            return ("E", (-pt[0], -pt[1]))
        return ("B" if kind == "A" else "A", pt)

    # deck action on circles -> orbits -> components
    sigma_circle = {}
    for node, cid in circle_of.items():
        sigma_circle.setdefault(cid, circle_of[sigma_node(node)])
    comp_of_circle = {}
    components = []            # list of circle tuples
    for cid in range(circles):
        if cid in comp_of_circle:
            continue
        mate = sigma_circle[cid]
        orbit = (cid,) if mate == cid else (cid, mate)
        for c in orbit:
            comp_of_circle[c] = len(components)
        components.append(orbit)

    # crossing parity with the reference pseudoline (the eta = 0 loop),
    # counted on the projective-plane model: distinct on-axis midpoints
    parities = {}
    for comp_id, orbit in enumerate(components):
        axis_nodes = set()
        for node, cid in circle_of.items():
            if cid in orbit:
                _kind, pt = node
                if pt[1] == 0:
                    axis_nodes.add((abs(pt[0]), 0) if _kind == "E" else pt)
        parities[comp_id] = len(axis_nodes) % 2
        if (len(orbit) == 1) != (parities[comp_id] == 1):
            raise AssertionError(
                "deck-orbit class and reference-line crossing parity disagree")

    ovals = sum(1 for orbit in components if len(orbit) == 2)
    pseudolines = sum(1 for orbit in components if len(orbit) == 1)
    if pseudolines > 1:
        raise AssertionError("more than one pseudoline in a glued curve")

    # positive-region face and its deck image
    if tris:
        target = (2.0 * n / 3.0, 2.0 * n / 3.0) if centroid_hint is None else centroid_hint
        def centroid(tri):
            return (sum(2 * v[0] for v in tri) / 3.0, sum(2 * v[1] for v in tri) / 3.0)
        t_best = min(range(len(tris)),
                     key=lambda t: ((centroid(tris[t])[0] - target[0]) ** 2
                                    + (centroid(tris[t])[1] - target[1]) ** 2, t))
        tri = tris[t_best]
        mix = _mixed_structure(tri, by_eps[(1, 1, 1)].vertex_signs)
        if mix is None:
            part = 0
        else:
            w, (u, v) = mix
            m1 = _mid(u[:2], w[:2])
            m2 = _mid(v[:2], w[:2])
            cx, cy = centroid(tri)
            def side(px, py):
                return (m2[0] - m1[0]) * (py - m1[1]) - (m2[1] - m1[1]) * (px - m1[0])
            part = "near" if side(cx, cy) * side(2 * w[0], 2 * w[1]) > 0 else "far"
        piece_plus = ("A", (1, 1), t_best, part)
        face_plus = uf.find(piece_plus)
        face_anti = uf.find(("B",) + piece_plus[1:])
    else:
        face_plus = face_anti = None

    # per-circle crossing parities between faces, by BFS over the face graph
    nesting = 0
    if face_plus is not None and circles:
        adj = {}
        for (p1, p2, seg) in arcs:
            f1, f2 = uf.find(p1), uf.find(p2)
            cid = circle_of[seg[0]]
            adj.setdefault(f1, []).append((f2, cid))
            adj.setdefault(f2, []).append((f1, cid))
        vec = {face_plus: 0}
        queue = [face_plus]
        while queue:
            cur = queue.pop()
            for (nxt, cid) in adj.get(cur, ()):  # bitmask flip per crossing
                nv = vec[cur] ^ (1 << cid)
                if nxt not in vec:
                    vec[nxt] = nv
                    queue.append(nxt)
                elif vec[nxt] != nv:
                    raise AssertionError("face parity vectors inconsistent")
        target_vec = vec.get(face_anti)
        if target_vec is None:
            raise AssertionError("deck-image face unreachable in the face graph")
        for comp_id, orbit in enumerate(components):
            bits = [(target_vec >> c) & 1 for c in orbit]
            if len(orbit) == 1:
                if bits[0] != 1:
                    raise AssertionError("pseudoline circle must separate deck images")
            else:
                if bits[0] != bits[1]:
                    raise AssertionError("oval lift circles disagree on separation")
                nesting += bits[0]

    return TopologyReport(len(components), ovals, pseudolines == 1, nesting, parities)


def patchwork_topology(signed):
    """Build all four charts of a signed lifting and classify the glued curve."""
    sub = regular_subdivision(signed.lifting)
    charts = {eps: build_chart(signed, eps, _sub=sub) for eps in QUADRANT_CLASSES}
    return glue_and_classify(charts)


def sign_changes_along_path(path, signed, eps=(-1, 1, 1), _sub=None):
    """Number of adjacent effective-sign flips along a subdivision-edge path."""
    if len(path) < 2:
        raise NotAPath("a path needs at least two vertices")
    sub = _sub if _sub is not None else regular_subdivision(signed.lifting)
    edge_keys = {frozenset(e) for e in sub.edges}
    for a, b in zip(path, path[1:]):
        if frozenset((a, b)) not in edge_keys:
            raise NotAPath(f"{a} -> {b} is not a subdivision edge")
    signs = [effective_sign(signed.signs[v], v, eps) for v in path]
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


class ViolationPath(NamedTuple):
    path: list          # TriangleIndex vertices, starting at a corner
    axis: str           # coordinate with gap > 1 on the witnessing edge
    edge: tuple         # the offending subdivision edge


def find_violation_path(sub):
    """Short certificate path across a subdivision with a non-unit edge.

    If some edge has a coordinate gap > 1 (say in i, up to symmetry), returns
    a path of at most n-1 subdivision edges from the corner (n,0,0) to the
    opposite side i = 0; otherwise returns None.  The path is found by
    breadth-first search, which can only improve on the greedy ascend/descend
    construction whose existence bounds the length.
    """
    n = sub.n
    witness = None
    for (v0, v1) in sub.edges:
        gaps = tuple(abs(v0[t] - v1[t]) for t in range(3))
        if max(gaps) > 1:
            axis = gaps.index(max(gaps))
            witness = (v0, v1, axis)
            break
    if witness is None:
        return None
    v0, v1, axis = witness

    perm = {0: (0, 1, 2), 1: (1, 0, 2), 2: (2, 1, 0)}[axis]
    def to_frame(v):
        return (v[perm[0]], v[perm[1]], v[perm[2]])
    def from_frame(v):
        out = [0, 0, 0]
        for pos, src in enumerate(perm):
            out[src] = v[pos]
        return tuple(out)

    graph = {}
    for (a, b) in sub.edges:
        fa, fb = to_frame(a), to_frame(b)
        graph.setdefault(fa, set()).add(fb)
        graph.setdefault(fb, set()).add(fa)

    def bfs(start, goal_test):
        prev = {start: None}
        queue = [start]
        while queue:
            cur = queue.pop(0)
            if goal_test(cur):
                out = []
                while cur is not None:
                    out.append(cur)
                    cur = prev[cur]
                return out[::-1]
            for nxt in sorted(graph.get(cur, ())):
                if nxt not in prev:
                    prev[nxt] = cur
                    queue.append(nxt)
        raise AssertionError("subdivision graph is disconnected")

    path = bfs((n, 0, 0), lambda v: v[0] == 0)
    assert len(path) - 1 <= n - 1, "certificate path exceeds the guaranteed length"
    axis_name = "ijk"[axis]
    return ViolationPath([from_frame(v) for v in path], axis_name, (v0, v1))
