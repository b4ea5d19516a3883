"""Finite graph metrics: distances, four-point hyperbolicity, quasiconvexity,
isometry-type estimates, and the cone-off ``Y_R`` of a graph along an orbit.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path


class DisconnectedGraph(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph on ``0..n-1`` with unit edge lengths."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple | None = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            e = (min(u, v), max(u, v))
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None, labels=None) -> "FiniteGraph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, tuple(edges), labels)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def sparse(self):
        if not self.edges:
            return coo_matrix((self.n, self.n)).tocsr()
        e = np.array(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n)).tocsr()

    def induced(self, keep: Sequence[int]) -> tuple["FiniteGraph", list[int]]:
        """Induced subgraph on ``keep`` (relabelled ``0..``) and the map back to old labels."""
        keep = sorted(keep)
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return FiniteGraph(len(keep), tuple(edges)), keep

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


# --------------------------------------------------------------------------
# generators and text formats


def path_graph(k: int) -> FiniteGraph:
    return FiniteGraph(k, tuple((i, i + 1) for i in range(k - 1)))


def cycle_graph(k: int) -> FiniteGraph:
    if k < 3:
        raise ValueError("a simple cycle needs at least 3 vertices")
    return FiniteGraph(k, tuple((i, (i + 1) % k) for i in range(k)))


def binary_tree(depth: int) -> FiniteGraph:
    """Complete binary tree, heap numbering: children of ``v`` are ``2v+1, 2v+2``."""
    n = 2 ** (depth + 1) - 1
    return FiniteGraph(n, tuple((v, c) for v in range(n) for c in (2 * v + 1, 2 * v + 2) if c < n))


def left_spine(depth: int) -> list[int]:
    """Root-to-leaf geodesic ``0, 1, 3, 7, ...`` of :func:`binary_tree`."""
    return [2**k - 1 for k in range(depth + 1)]


def random_tree(n: int, seed) -> FiniteGraph:
    rng = random.Random(seed)
    return FiniteGraph(n, tuple((rng.randrange(v), v) for v in range(1, n)))


def star_graph(leaves: int) -> FiniteGraph:
    return FiniteGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def grid_graph(a: int, b: int) -> FiniteGraph:
    def idx(i, j):
        return i * b + j

    edges = []
    for i in range(a):
        for j in range(b):
            if i + 1 < a:
                edges.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < b:
                edges.append((idx(i, j), idx(i, j + 1)))
    return FiniteGraph(a * b, tuple(edges))


def cayley_ball(generators: Sequence[Sequence[int]], radius: int) -> FiniteGraph:
    """Ball of the given radius in the Cayley graph of a permutation group (symmetric generating set)."""
    gens = [tuple(g) for g in generators]
    inv = []
    for g in gens:
        h = [0] * len(g)
        for i, j in enumerate(g):
            h[j] = i
        inv.append(tuple(h))
    alls = list(dict.fromkeys(gens + inv))
    ident = tuple(range(len(gens[0])))
    index = {ident: 0}
    order = [ident]
    frontier = [ident]
    edges = set()
    for _ in range(radius):
        nxt = []
        for p in frontier:
            for g in alls:
                q = tuple(p[g[i]] for i in range(len(g)))
                if q not in index:
                    index[q] = len(order)
                    order.append(q)
                    nxt.append(q)
                if q != p:
                    edges.add((min(index[p], index[q]), max(index[p], index[q])))
        frontier = nxt
    return FiniteGraph(len(order), tuple(edges), tuple(order))


def parse_edgelist(text: str) -> FiniteGraph:
    """Lines ``u v``; ``#`` starts a comment; an optional ``n <count>`` line fixes the vertex count."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: vertices must be integers") from None
    return FiniteGraph.from_edges(edges, n)


def format_edgelist(g: FiniteGraph) -> str:
    return f"n {g.n}\n" + "".join(f"{u} {v}\n" for u, v in g.edges)


def to_dot(g: FiniteGraph, new_edges: Iterable[tuple[int, int]] = (), name: str = "G") -> str:
    """DOT text; ``new_edges`` are drawn dashed and red."""
    new = {(min(u, v), max(u, v)) for u, v in new_edges}
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(g.n))
    for u, v in g.edges:
        style = ' [style=dashed, color=red]' if (u, v) in new else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# distances


def all_distances(g: FiniteGraph) -> np.ndarray:
    """Integer distance matrix; raises :class:`DisconnectedGraph` if some pair is unreachable."""
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    d = shortest_path(g.sparse(), method="D", unweighted=True, directed=False)
    if np.isinf(d).any():
        raise DisconnectedGraph("graph is not connected")
    return d.astype(np.int64)


def _partial_distances(g: FiniteGraph) -> np.ndarray:
    """Distances with ``-1`` for unreachable pairs."""
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    d = shortest_path(g.sparse(), method="D", unweighted=True, directed=False)
    d[np.isinf(d)] = -1
    return d.astype(np.int64)


def bfs_distances(g: FiniteGraph, source: int, adj=None) -> list[int]:
    adj = adj or g.adjacency()
    dist = [-1] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def geodesic(g: FiniteGraph, x: int, y: int, adj=None, dist_from_y=None) -> list[int]:
    """Canonical geodesic: from ``x`` always step to the smallest neighbour closer to ``y``."""
    adj = adj or g.adjacency()
    dy = dist_from_y if dist_from_y is not None else bfs_distances(g, y, adj)
    if dy[x] < 0:
        raise DisconnectedGraph(f"{x} and {y} are not connected")
    out = [x]
    while out[-1] != y:
        u = out[-1]
        out.append(next(v for v in adj[u] if dy[v] == dy[u] - 1))
    return out


# --------------------------------------------------------------------------
# hyperbolicity


@dataclass
class DeltaResult:
    delta: Fraction
    exact: bool
    quadruples: int

    def __str__(self):
        kind = "exact" if self.exact else "lower bound"
        return f"delta = {self.delta} ({kind}, {self.quadruples} quadruples)"


def _delta_of(D: np.ndarray, q: np.ndarray) -> int:
    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    s = np.stack([D[a, b] + D[c, d], D[a, c] + D[b, d], D[a, d] + D[b, c]], axis=1)
    s.sort(axis=1)
    return int((s[:, 2] - s[:, 1]).max()) if len(s) else 0


def delta_four_point(
    g: FiniteGraph,
    D: np.ndarray | None = None,
    exact_limit: int = 60,
    samples: int = 200_000,
    seed=0,
) -> DeltaResult:
    """Four-point hyperbolicity ``delta = max (L - M) / 4`` over quadruples.

    ``L >= M`` are the two largest of the three pair sums; with this
    normalization trees give 0 and the 4-cycle gives 1/2.  Exhaustive up to
    ``exact_limit`` vertices, a sampled lower bound above.
    """
    D = all_distances(g) if D is None else D
    n = g.n
    if n < 4:
        return DeltaResult(Fraction(0), True, 0)
    if n <= exact_limit:
        best, count = 0, 0
        combos = itertools.combinations(range(n), 4)
        while True:
            chunk = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, 500_000)), dtype=np.int64)
            if not len(chunk):
                break
            q = chunk.reshape(-1, 4)
            count += len(q)
            best = max(best, _delta_of(D, q))
        return DeltaResult(Fraction(best, 4), True, count)
    rng = np.random.default_rng(seed)
    q = rng.integers(0, n, size=(samples, 4))
    return DeltaResult(Fraction(_delta_of(D, q), 4), False, samples)


def delta_oracle(D, n: int) -> Fraction:
    """Pure-Python exhaustive four-point value, same normalization as :func:`delta_four_point`."""
    best = 0
    for a, b, c, d in itertools.combinations(range(n), 4):
        s = sorted((D[a][b] + D[c][d], D[a][c] + D[b][d], D[a][d] + D[b][c]))
        best = max(best, s[2] - s[1])
    return Fraction(int(best), 4)


# --------------------------------------------------------------------------
# quasiconvexity


def quasiconvexity_constant(g: FiniteGraph, z: Sequence[int], D: np.ndarray | None = None) -> int:
    """Smallest ``lam`` such that geodesics between points of ``z`` stay ``lam``-close to ``z``."""
    D = all_distances(g) if D is None else D
    z = sorted(set(z))
    if not z:
        raise ValueError("subset must be nonempty")
    to_z = D[:, z].min(axis=1)
    worst = 0
    for i, x in enumerate(z):
        for y in z[i + 1 :]:
            on = D[x] + D[y] == D[x, y]
            worst = max(worst, int(to_z[on].max()))
    return worst


def is_quasiconvex(g: FiniteGraph, z: Sequence[int], lam, D: np.ndarray | None = None) -> bool:
    return quasiconvexity_constant(g, z, D) <= lam


# --------------------------------------------------------------------------
# cone-off


@dataclass
class ConeOff:
    graph: FiniteGraph
    new_edges: tuple[tuple[int, int], ...]
    neighbourhood: frozenset
    R: int

    def pi(self, v: int) -> int:
        """The vertex map ``X -> Y_R`` (the identity on vertices)."""
        return v


def neighbourhood(D: np.ndarray, orbit: Sequence[int], R) -> np.ndarray:
    return D[:, sorted(set(orbit))].min(axis=1) <= R


def cone_off(g: FiniteGraph, orbit: Sequence[int], R, D: np.ndarray | None = None) -> ConeOff:
    """Add ``{u, v}`` whenever some ``u``-``v`` geodesic of ``g`` avoids ``N_R(orbit)``.

    Such a geodesic exists exactly when the distance inside the induced
    subgraph on the complement of ``N_R`` equals the distance in ``g``.
    """
    if not orbit:
        raise ValueError("orbit must be nonempty")
    if R < 0:
        raise ValueError("R must be >= 0")
    D = all_distances(g) if D is None else D
    near = neighbourhood(D, orbit, R)
    far = np.flatnonzero(~near)
    new: list[tuple[int, int]] = []
    if len(far) >= 2:
        h, keep = g.induced(far.tolist())
        DH = _partial_distances(h)
        keep_arr = np.array(keep)
        DX = D[np.ix_(keep_arr, keep_arr)]
        ok = (DH == DX) & (DX >= 2)
        iu, ju = np.nonzero(np.triu(ok, 1))
        new = [(int(keep_arr[i]), int(keep_arr[j])) for i, j in zip(iu, ju)]
    y = FiniteGraph(g.n, g.edges + tuple(new), g.labels)
    return ConeOff(y, tuple(sorted(new)), frozenset(np.flatnonzero(near).tolist()), R)


def cone_off_oracle(g: FiniteGraph, orbit: Sequence[int], R) -> set[tuple[int, int]]:
    """New edges by enumerating every geodesic with networkx (slow; for small graphs)."""
    import networkx as nx

    G = g.to_networkx()
    lengths = dict(nx.all_pairs_shortest_path_length(G))
    near = {v for v in range(g.n) if min(lengths[v][o] for o in orbit) <= R}
    existing = set(g.edges)
    out = set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if u in near or v in near or (u, v) in existing:
                continue
            if any(not near.intersection(p) for p in nx.all_shortest_paths(G, u, v)):
                out.add((u, v))
    return out


@dataclass
class ConeOffReport:
    R: int
    Q: int
    new_edges: int
    lipschitz: bool
    distortion: float
    K: float
    hausdorff: int
    pairs: int
    precondition: bool
    notes: list = field(default_factory=list)


def _hausdorff(DY: np.ndarray, a: Sequence[int], b: Sequence[int]) -> int:
    sub = DY[np.ix_(list(a), list(b))]
    return int(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def verify_coneoff(
    g: FiniteGraph,
    orbit: Sequence[int],
    R,
    z: Sequence[int],
    Q=None,
    samples: int = 50,
    seed=0,
    strict: bool = False,
) -> ConeOffReport:
    """Measure how well ``z`` survives the cone-off.

    Reports the 1-Lipschitz check, the distortion ``max d_X / d_Y`` and the
    smallest ``K >= 1`` with ``d_X / K - K <= d_Y <= K d_X + K`` over all
    ``z``-pairs, and the largest Hausdorff distance (in ``Y``) between a
    canonical ``X``-geodesic and a ``Y``-geodesic over sampled pairs.  The
    precondition ``R > Q + D`` is flagged; with ``strict`` it raises.
    """
    D = all_distances(g)
    z = sorted(set(z))
    q_meas = quasiconvexity_constant(g, z, D)
    if Q is not None and q_meas > Q:
        raise PreconditionError(f"z is not {Q}-quasiconvex (measured {q_meas})")
    Q = q_meas if Q is None else Q
    co = cone_off(g, orbit, R, D)
    DY = all_distances(co.graph)
    lipschitz = bool((DY <= D).all())
    sub_x = D[np.ix_(z, z)].astype(float)
    sub_y = DY[np.ix_(z, z)].astype(float)
    mask = sub_x > 0
    distortion = float((sub_x[mask] / sub_y[mask]).max()) if mask.any() else 1.0
    kneed = (-sub_y + np.sqrt(sub_y**2 + 4 * sub_x)) / 2
    K = max(1.0, float(kneed.max()) if kneed.size else 1.0)
    rng = random.Random(seed)
    pairs = [(x, y) for i, x in enumerate(z) for y in z[i + 1 :]]
    if len(pairs) > samples:
        pairs = rng.sample(pairs, samples)
    adj_x, adj_y = g.adjacency(), co.graph.adjacency()
    haus = 0
    for x, y in pairs:
        gx = geodesic(g, x, y, adj_x, D[y])
        gy = geodesic(co.graph, x, y, adj_y, DY[y])
        haus = max(haus, _hausdorff(DY, gx, gy))
    pre = R > Q + haus
    rep = ConeOffReport(R, Q, len(co.new_edges), lipschitz, distortion, K, haus, len(pairs), pre)
    if not pre:
        rep.notes.append(f"precondition R > Q + D fails: R={R}, Q={Q}, D={haus}")
        if strict:
            raise PreconditionError(rep.notes[-1])
    return rep


# --------------------------------------------------------------------------
# graph maps and isometry types


@dataclass(frozen=True)
class GraphMap:
    """Vertex map with ``-1`` marking undefined vertices."""

    image: tuple[int, ...]

    @classmethod
    def from_function(cls, n: int, f) -> "GraphMap":
        out = []
        for v in range(n):
            w = f(v)
            out.append(-1 if w is None else int(w))
        return cls(tuple(out))

    @classmethod
    def identity(cls, n: int) -> "GraphMap":
        return cls(tuple(range(n)))

    def __call__(self, v: int) -> int:
        return self.image[v] if v >= 0 else -1

    def __mul__(self, other: "GraphMap") -> "GraphMap":
        return GraphMap(tuple(self(w) if w >= 0 else -1 for w in other.image))

    def inverse(self) -> "GraphMap":
        out = [-1] * len(self.image)
        for v, w in enumerate(self.image):
            if w >= 0:
                out[w] = v
        return GraphMap(tuple(out))

    @property
    def total(self) -> bool:
        return all(w >= 0 for w in self.image)

    def is_isometric(self, D: np.ndarray) -> bool:
        dom = [v for v, w in enumerate(self.image) if w >= 0]
        img = [self.image[v] for v in dom]
        return bool((D[np.ix_(dom, dom)] == D[np.ix_(img, img)]).all())


def shift_map(n: int, k: int) -> GraphMap:
    """``v -> v + k`` on a path, undefined where it would leave the path."""
    return GraphMap.from_function(n, lambda v: v + k if 0 <= v + k < n else None)


def rotation_map(n: int, k: int) -> GraphMap:
    return GraphMap.from_function(n, lambda v: (v + k) % n)


def reflection_map(n: int) -> GraphMap:
    return GraphMap.from_function(n, lambda v: n - 1 - v)


@dataclass
class TranslationEstimate:
    ell_hat: Fraction
    asymptotic: Fraction
    sequence: list
    classification: str
    truncated: bool


def translation_length_estimate(
    g: GraphMap, x: int, n_max: int, D: np.ndarray, min_rate=Fraction(1, 4)
) -> TranslationEstimate:
    """``max_n d(x, g^n x) / n`` over ``1..n_max`` and a finite-scale type guess.

    LoxodromicCandidate: ``d(x, g^n x) / n >= min_rate`` on the whole tail
    ``[N/2, N]``.  EllipticCandidate: the tail never exceeds the largest value
    seen in the first half.  Otherwise Inconclusive.
    """
    seq = []
    y = x
    truncated = False
    for _ in range(n_max):
        y = g(y)
        if y < 0:
            truncated = True
            break
        seq.append(int(D[x, y]))
    if not seq:
        return TranslationEstimate(Fraction(0), Fraction(0), [], "Inconclusive", truncated)
    N = len(seq)
    ell = max(Fraction(d, n + 1) for n, d in enumerate(seq))
    asym = Fraction(seq[-1], N)
    half = max(1, N // 2)
    tail = seq[half - 1 :]
    if all(Fraction(d, half + i) >= min_rate for i, d in enumerate(tail)) and N >= 2:
        kind = "LoxodromicCandidate"
    elif max(tail) <= max(seq[:half]) or max(seq) == 0:
        kind = "EllipticCandidate"
    else:
        kind = "Inconclusive"
    return TranslationEstimate(ell, asym, seq, kind, truncated)


def _orbit(gens: Sequence[GraphMap], x: int, max_len: int | None = None) -> set[int]:
    seen = {x}
    frontier = [x]
    steps = 0
    moves = list(gens) + [g.inverse() for g in gens]
    while frontier and (max_len is None or steps < max_len):
        nxt = []
        for v in frontier:
            for g in moves:
                w = g(v)
                if w >= 0 and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        steps += 1
    return seen


def _diameter(D: np.ndarray, pts: Iterable[int]) -> int:
    pts = sorted(pts)
    return int(D[np.ix_(pts, pts)].max()) if pts else 0


@dataclass
class EllipticBound:
    M: int
    N: int
    diameter: int
    holds: bool


def commuting_elliptic_bound(
    a_maps: Sequence[GraphMap], b_maps: Sequence[GraphMap], x: int, D: np.ndarray, max_len: int = 6
) -> EllipticBound:
    """Check ``diam <A, B> x <= diam <A> x + diam <B> x`` by bounded word enumeration."""
    for a in a_maps:
        for b in b_maps:
            for v in range(len(a.image)):
                ab, ba = a(b(v)), b(a(v))
                if ab >= 0 and ba >= 0 and ab != ba:
                    raise ValueError(f"maps do not commute at vertex {v}")
    M = _diameter(D, _orbit(a_maps, x))
    N = _diameter(D, _orbit(b_maps, x))
    diam = _diameter(D, _orbit(list(a_maps) + list(b_maps), x, max_len))
    return EllipticBound(M, N, diam, diam <= M + N)
