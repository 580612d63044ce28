"""Folner-set search and Kesten-norm checks on weighted fusion graphs.

The graph of a fusion ring window has the labels as vertices, weights
mu(alpha) = d(alpha)^2 by default, and an edge between distinct alpha,
beta whenever some generator gamma has N(gamma, alpha, beta) > 0.  The
boundary of a vertex set is two-sided (inner and outer); a candidate set
touching the truncation frontier of a windowed infinite graph produces
TruncationInconclusive rather than a verdict.

The Kesten check compares the spectral norm of a generator's fusion
matrix with the generator's dimension; equality (within tolerance, and
stable under shrinking the window by one) is the amenability criterion.
"""

from __future__ import annotations

import math

from .fusion import FusionRing


class TruncationInconclusive(RuntimeError):
    """Candidate set reaches the window edge; verdict would be unsound."""


class WeightedFusionGraph:
    """Undirected weighted graph over a (possibly windowed) label set."""

    def __init__(self, vertices, weight, generators, adjacency,
                 truncated=False, frontier=(), name=""):
        self.vertices = tuple(vertices)
        self.weight = dict(weight)
        self.generators = tuple(generators)
        self.adjacency = {v: tuple(sorted(adjacency.get(v, ()), key=self._key))
                          for v in self.vertices}
        self.truncated = truncated
        self.frontier = frozenset(frontier)
        self.name = name
        self.index = {v: i for i, v in enumerate(self.vertices)}
        for v in self.vertices:
            if not (self.weight.get(v, 0) > 0):
                raise ValueError(f"nonpositive weight at {v}")
        for v, nbrs in self.adjacency.items():
            for w in nbrs:
                if v not in self.adjacency[w]:
                    raise ValueError(f"adjacency not symmetric at ({v},{w})")

    def _key(self, v):
        return str(v)

    @property
    def root(self):
        return self.vertices[0]

    def ball(self, radius: int, center=None):
        """Vertices within BFS distance <= radius of the center."""
        if center is None:
            center = self.root
        seen = {center}
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in self.adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if not nxt:
                break
            frontier = nxt
        return seen

    def mu(self, F) -> float:
        return sum(self.weight[v] for v in F)


def from_fusion_ring(ring: FusionRing, generators=None, weights=None,
                     name="") -> WeightedFusionGraph:
    """Graph of a fusion ring window.

    generators defaults to every non-unit label; the set must be closed
    under the ring's dual.  weights default to squared dimensions, which
    needs float dims on the ring.
    """
    if generators is None:
        generators = [l for l in ring.labels if l != ring.unit]
    gen_set = set(generators)
    for g in gen_set:
        if ring.dual[g] not in gen_set:
            raise ValueError(f"generator set not symmetric: missing dual of {g}")
    if weights is None:
        if ring.dims is None:
            raise ValueError("ring carries no float dims; pass weights")
        weights = {l: ring.dims[l] ** 2 for l in ring.labels}
    adjacency = {l: set() for l in ring.labels}
    for (g, a, b), v in ring.N.items():
        if g in gen_set and v > 0 and a != b:
            adjacency[a].add(b)
            adjacency[b].add(a)
    return WeightedFusionGraph(ring.labels, weights, sorted(gen_set, key=str),
                               adjacency, truncated=ring.truncated,
                               frontier=ring.frontier,
                               name=name or ring.name)


def graph_from_text(text: str) -> WeightedFusionGraph:
    """Parse the graph file format: vertex/weight lines, generator list,
    explicit edges, optional truncation frontier."""
    vertices = []
    weight = {}
    generators = []
    edges = []
    frontier = []
    truncated = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertex:"):
            parts = line[len("vertex:"):].split()
            if len(parts) != 2:
                raise ValueError(f"bad vertex line: {raw!r}")
            v, w = parts
            if v in weight:
                raise ValueError(f"duplicate vertex {v}")
            vertices.append(v)
            weight[v] = float(w)
        elif line.startswith("generators:"):
            generators = line[len("generators:"):].split()
        elif line.startswith("edge:"):
            parts = line[len("edge:"):].split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line: {raw!r}")
            edges.append(tuple(parts))
        elif line.startswith("truncated:"):
            truncated = True
            frontier = line[len("truncated:"):].split()
        else:
            raise ValueError(f"unrecognized graph line: {raw!r}")
    if not vertices:
        raise ValueError("graph file has no vertices")
    adjacency = {v: set() for v in vertices}
    for a, b in edges:
        if a not in weight or b not in weight:
            raise ValueError(f"edge touches unknown vertex: ({a},{b})")
        if a != b:
            adjacency[a].add(b)
            adjacency[b].add(a)
    for f in frontier:
        if f not in weight:
            raise ValueError(f"unknown frontier vertex {f}")
    return WeightedFusionGraph(vertices, weight, generators, adjacency,
                               truncated=truncated, frontier=frontier,
                               name="from-file")


def graph_to_text(g: WeightedFusionGraph) -> str:
    for v in g.vertices:
        if not str(v) or any(ch.isspace() for ch in str(v)):
            raise ValueError(
                f"vertex {v!r} is not a single token; relabel the ring first")
    lines = [f"vertex: {v} {g.weight[v]!r}" for v in g.vertices]
    lines.append("generators: " + " ".join(str(x) for x in g.generators))
    seen = set()
    for v in g.vertices:
        for w in g.adjacency[v]:
            if (w, v) not in seen:
                seen.add((v, w))
                lines.append(f"edge: {v} {w}")
    if g.truncated:
        lines.append("truncated: " + " ".join(
            sorted((str(f) for f in g.frontier))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Folner machinery
# ---------------------------------------------------------------------------

def boundary_set(g: WeightedFusionGraph, F) -> set:
    """Two-sided boundary: members with an outside neighbour plus
    outsiders with an inside neighbour."""
    F = set(F)
    inner = {v for v in F if any(w not in F for w in g.adjacency[v])}
    outer = {w for v in F for w in g.adjacency[v] if w not in F}
    return inner | outer


def boundary_measure(g: WeightedFusionGraph, F, allow_frontier=False):
    """(mu(boundary F), mu(F)), exact float sums.

    Raises TruncationInconclusive when F or its boundary touches the
    frontier of a windowed graph (unless explicitly allowed).
    """
    F = set(F)
    if not F:
        raise ValueError("F must be nonempty")
    for v in F:
        if v not in g.index:
            raise ValueError(f"vertex {v} not in the graph")
    bd = boundary_set(g, F)
    if g.truncated and not allow_frontier:
        touched = (F | bd) & g.frontier
        if touched:
            raise TruncationInconclusive(
                f"candidate touches window frontier at {sorted(map(str, touched))}")
    return g.mu(bd), g.mu(F)


class FolnerReport:
    """Search outcome; found implies ratio < epsilon."""

    def __init__(self, found, vertex_set, ratio, epsilon, strategy,
                 best_ratio, candidates):
        self.found = found
        self.set = tuple(sorted(vertex_set, key=str))
        self.ratio = ratio
        self.epsilon = epsilon
        self.strategy = strategy
        self.best_ratio = best_ratio
        self.candidates = candidates
        if found:
            assert ratio < epsilon

    def __repr__(self):
        tag = "found" if self.found else "not found"
        return (f"FolnerReport({tag}, |F|={len(self.set)}, "
                f"ratio={self.ratio:.6g}, eps={self.epsilon})")


def folner_search(g: WeightedFusionGraph, epsilon: float, max_size: int,
                  strategy: str = "balls") -> FolnerReport:
    """Search for F with mu(boundary F) < epsilon mu(F).

    balls: metric balls around the root, growing radius.
    greedy: grow from the root by the neighbour minimizing the boundary
    measure of the extended set (ties broken by vertex order).
    Deterministic; returns the first witness, or found=False with the
    best ratio seen.  Candidates touching the frontier raise
    TruncationInconclusive.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    best = (math.inf, None, None)
    candidates = 0

    def consider(F):
        nonlocal best, candidates
        mu_bd, mu_f = boundary_measure(g, F)
        candidates += 1
        ratio = mu_bd / mu_f
        if ratio < best[0]:
            best = (ratio, set(F), ratio)
        return ratio

    if strategy == "balls":
        prev = None
        radius = 0
        while True:
            F = g.ball(radius)
            if len(F) > max_size:
                break
            ratio = consider(F)
            if ratio < epsilon:
                return FolnerReport(True, F, ratio, epsilon, strategy,
                                    ratio, candidates)
            if F == prev:
                break  # ball saturated (finite component)
            prev = F
            radius += 1
    elif strategy == "greedy":
        F = {g.root}
        ratio = consider(F)
        if ratio < epsilon:
            return FolnerReport(True, F, ratio, epsilon, strategy, ratio,
                                candidates)
        while len(F) < max_size:
            frontier_nbrs = sorted(
                {w for v in F for w in g.adjacency[v] if w not in F},
                key=lambda v: g.index[v])
            if not frontier_nbrs:
                break
            scored = []
            for w in frontier_nbrs:
                mu_bd, mu_f = boundary_measure(g, F | {w})
                scored.append((mu_bd / mu_f, g.index[w], w))
            scored.sort()
            ratio, _, chosen = scored[0]
            F.add(chosen)
            candidates += 1
            if ratio < best[0]:
                best = (ratio, set(F), ratio)
            if ratio < epsilon:
                return FolnerReport(True, F, ratio, epsilon, strategy,
                                    ratio, candidates)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    best_ratio = best[0] if best[1] is not None else math.inf
    best_set = best[1] if best[1] is not None else {g.root}
    return FolnerReport(False, best_set, best_ratio, epsilon, strategy,
                        best_ratio, candidates)


# ---------------------------------------------------------------------------
# Kesten criterion
# ---------------------------------------------------------------------------

def tlj_kesten_window(width: int, delta: float) -> FusionRing:
    """Band-limited window of the generic Temperley-Lieb ladder.

    Stores only the unit rows and the f1 multiplication rows of the
    fusion table (f1 . f_k = f_{k-1} + f_{k+1}); the full table grows
    as width^3 and is far too large at the window sizes the Kesten
    tolerance needs.  The f1 rows are exact for every window label, so
    the generator matrix and its norm are unaffected.  The result is
    not a complete fusion table: keep it away from verify_axioms.
    """
    if width < 2:
        raise ValueError("window width must be >= 2")
    labels = tuple(f"f{i}" for i in range(width))
    N = {}
    for i in range(width):
        N[labels[0], labels[i], labels[i]] = 1
        N[labels[i], labels[0], labels[i]] = 1
        for k in (i - 1, i + 1):
            if 0 <= k < width:
                N[labels[1], labels[i], labels[k]] = 1
                N[labels[i], labels[1], labels[k]] = 1
    dual = {lab: lab for lab in labels}
    vals = [1.0, float(delta)]
    while len(vals) < width:
        vals.append(delta * vals[-1] - vals[-2])
    dims = dict(zip(labels, vals))
    return FusionRing(labels, dual, N, dims, None,
                      truncated=True, frontier=set(labels[-2:]),
                      name=f"TLJ_kesten_window({width})")


def _fusion_matrix(ring: FusionRing, generator, labels):
    import numpy as np
    idx = {l: i for i, l in enumerate(labels)}
    m = np.zeros((len(labels), len(labels)))
    for (g, a, b), v in ring.N.items():
        if g == generator and a in idx and b in idx:
            m[idx[a], idx[b]] = v
    return m


def _spectral_norm(m) -> float:
    """Largest eigenvalue magnitude of a nonnegative fusion matrix.

    The matrix of a self-dual generator on a path-like window is
    bipartite, so plain power iteration oscillates; a dense or
    tridiagonal symmetric eigensolver is used instead.
    """
    import numpy as np
    n = m.shape[0]
    if n == 0:
        return 0.0
    symmetric = np.array_equal(m, m.T)
    if symmetric:
        offdiag_rows, offdiag_cols = np.nonzero(m)
        tridiagonal = np.all(np.abs(offdiag_rows - offdiag_cols) <= 1)
        if tridiagonal and n >= 3:
            from scipy.linalg import eigvalsh_tridiagonal
            vals = eigvalsh_tridiagonal(np.diag(m).copy(),
                                        np.diag(m, 1).copy(),
                                        select="i",
                                        select_range=(n - 1, n - 1))
            return float(vals[0])
        if n <= 2000:
            return float(np.linalg.eigvalsh(m)[-1])
        from scipy.sparse.linalg import eigsh
        from scipy.sparse import csr_matrix
        vals = eigsh(csr_matrix(m), k=1, which="LA",
                     return_eigenvectors=False)
        return float(vals[0])
    return float(max(abs(np.linalg.eigvals(m))))


def kesten_check(ring_window: FusionRing, generator, tol=1e-6) -> dict:
    """Compare the generator's graph norm with its dimension.

    For truncated windows the norm on the window and on the window less
    its last label must agree within tol (stability); otherwise the
    verdict is marked unstable and amenable is None.
    """
    if generator not in ring_window.index:
        raise ValueError(f"unknown generator {generator}")
    if ring_window.dims is None:
        raise ValueError("ring carries no float dims")
    labels = list(ring_window.labels)
    norm = _spectral_norm(_fusion_matrix(ring_window, generator, labels))
    stable = True
    norm_prev = None
    if ring_window.truncated and len(labels) > 2:
        norm_prev = _spectral_norm(
            _fusion_matrix(ring_window, generator, labels[:-1]))
        stable = abs(norm - norm_prev) < tol
    dim = ring_window.dims[generator]
    report = {
        "graph_norm": norm,
        "dimension": dim,
        "window": len(labels),
        "stable": stable,
        "norm_previous_window": norm_prev,
        "amenable": (abs(norm - dim) < tol) if stable else None,
    }
    return report
