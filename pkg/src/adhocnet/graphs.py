"""Labeled undirected graphs and the exact algorithms the analyses rely on.

Everything here is exhaustive search tuned for desk-scale inputs (at most a
dozen vertices): longest simple paths by DFS, embeddings by backtracking,
canonical forms by refinement plus individualization.  No approximation.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass

from .parsing import ParseError


class GraphError(ValueError):
    """A graph value violates a structural invariant."""


def _check_name(kind, value):
    if not isinstance(value, str) or not value or any(c.isspace() for c in value):
        raise GraphError(f"{kind} must be a nonempty string without whitespace, got {value!r}")
    return value


class LabeledGraph:
    """Immutable undirected graph with one label per vertex.

    Vertex ids are strings; edges are unordered pairs without self-loops and
    are stored once in normalized order.  Instances hash and compare by
    (vertices, edges, labels), so they serve directly as search states.
    """

    __slots__ = ("vertices", "edges", "_label", "_adj", "_hash")

    def __init__(self, vertices, edges, labels):
        seen = set()
        for v in vertices:
            _check_name("vertex id", v)
            if v in seen:
                raise GraphError(f"duplicate vertex id {v!r}")
            seen.add(v)
        self.vertices = tuple(sorted(seen))

        label = {}
        for v in self.vertices:
            if v not in labels:
                raise GraphError(f"missing label for vertex {v!r}")
            label[v] = _check_name("label", labels[v])
        stray = set(labels) - seen
        if stray:
            raise GraphError(f"labels given for unknown vertices: {sorted(stray)}")
        self._label = label

        norm = set()
        for u, v in edges:
            if u not in seen or v not in seen:
                raise GraphError(f"edge endpoint not a vertex: ({u!r}, {v!r})")
            if u == v:
                raise GraphError(f"self-loop on vertex {u!r}")
            norm.add((u, v) if u < v else (v, u))
        self.edges = frozenset(norm)

        adj = {v: [] for v in self.vertices}
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._hash = None

    @classmethod
    def _share_structure(cls, other, new_labels):
        """Build a relabeling of `other` without revalidating the structure."""
        g = object.__new__(cls)
        g.vertices = other.vertices
        g.edges = other.edges
        g._adj = other._adj
        g._label = new_labels
        g._hash = None
        return g

    # -- basic queries ---------------------------------------------------

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def edge_count(self):
        return len(self.edges)

    def __contains__(self, v):
        return v in self._label

    def label(self, v):
        try:
            return self._label[v]
        except KeyError:
            raise GraphError(f"no such vertex {v!r}") from None

    def labels_map(self):
        return dict(self._label)

    def label_values(self):
        """Multiset of labels, as a Counter."""
        return Counter(self._label.values())

    def label_set(self):
        return frozenset(self._label.values())

    def neighbors(self, v):
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"no such vertex {v!r}") from None

    def degree(self, v):
        return len(self.neighbors(v))

    def has_edge(self, u, v):
        return ((u, v) if u < v else (v, u)) in self.edges

    # -- derived graphs --------------------------------------------------

    def relabeled(self, changes):
        """Copy with some labels replaced; structure is shared."""
        label = dict(self._label)
        for v, q in changes.items():
            if v not in label:
                raise GraphError(f"no such vertex {v!r}")
            label[v] = _check_name("label", q)
        return LabeledGraph._share_structure(self, label)

    def induced(self, subset):
        """Induced subgraph on the given vertex subset."""
        keep = set(subset)
        return LabeledGraph(
            keep,
            [e for e in self.edges if e[0] in keep and e[1] in keep],
            {v: self._label[v] for v in keep},
        )

    def connected_components(self):
        """Vertex sets of the connected components, ordered by smallest member."""
        unvisited = set(self.vertices)
        comps = []
        while unvisited:
            root = min(unvisited)
            comp = {root}
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        queue.append(u)
            unvisited -= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self):
        return len(self.connected_components()) <= 1

    # -- value semantics -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self._label == other._label)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vertices, self.edges,
                               tuple(self._label[v] for v in self.vertices)))
        return self._hash

    def __repr__(self):
        return f"LabeledGraph({self.vertex_count}v, {self.edge_count}e)"


def fresh_vertex_id(graph, stem="w"):
    """An id not present in the graph."""
    i = 0
    while f"{stem}{i}" in graph:
        i += 1
    return f"{stem}{i}"


# -- paths, distances, cliques ------------------------------------------


def longest_simple_path_length(graph):
    """Number of edges on the longest simple path; 0 for a single vertex.

    Exhaustive DFS over simple paths, with an early exit once a Hamiltonian
    path is found.
    """
    best = 0
    limit = graph.vertex_count - 1
    adj = graph._adj
    visited = set()

    def extend(v, length):
        nonlocal best
        if length > best:
            best = length
        for u in adj[v]:
            if u not in visited and best < limit:
                visited.add(u)
                extend(u, length + 1)
                visited.remove(u)

    for start in graph.vertices:
        if best >= limit:
            break
        visited = {start}
        extend(start, 0)
    return max(best, 0)


def diameter(graph):
    """Longest shortest-path distance between any two vertices.

    Defined only for connected graphs.
    """
    if graph.vertex_count == 0:
        raise GraphError("diameter of the empty graph is undefined")
    if not graph.is_connected():
        raise GraphError("diameter requires a connected graph")
    worst = 0
    for start in graph.vertices:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in graph.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        worst = max(worst, max(dist.values()))
    return worst


def max_degree(graph):
    return max((graph.degree(v) for v in graph.vertices), default=0)


def maximal_cliques(graph):
    """All inclusion-maximal cliques, as a deterministically ordered tuple.

    Bron-Kerbosch with pivoting; an isolated vertex forms its own clique.
    """
    adj = {v: set(graph.neighbors(v)) for v in graph.vertices}
    found = []

    def expand(r, p, x):
        if not p and not x:
            found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    if graph.vertices:
        expand(set(), set(graph.vertices), set())
    return tuple(sorted(found, key=lambda c: (len(c), tuple(sorted(c)))))


# -- embeddings ----------------------------------------------------------

SUBGRAPH = "subgraph"
INDUCED = "induced"


@dataclass(frozen=True)
class Embedding:
    """Injective label-preserving vertex map witnessing a graph ordering."""

    mapping: tuple  # sorted ((source_vertex, target_vertex), ...)
    kind: str       # SUBGRAPH or INDUCED

    def as_dict(self):
        return dict(self.mapping)


def check_embedding(small, big, embedding):
    """Re-verify an Embedding independently of how it was found."""
    f = embedding.as_dict()
    if set(f) != set(small.vertices):
        return False
    if len(set(f.values())) != len(f):
        return False
    for v, u in f.items():
        if u not in big or small.label(v) != big.label(u):
            return False
    for v, w in itertools.combinations(small.vertices, 2):
        e1 = small.has_edge(v, w)
        e2 = big.has_edge(f[v], f[w])
        if e1 and not e2:
            return False
        if embedding.kind == INDUCED and e2 and not e1:
            return False
    return True


def _match_order(graph):
    # Adjacency-guided order: grow from the highest-degree vertex so edge
    # constraints bind as early as possible.
    remaining = set(graph.vertices)
    order = []
    while remaining:
        start = max(remaining, key=lambda v: (graph.degree(v), v))
        frontier = [start]
        remaining.discard(start)
        while frontier:
            frontier.sort(key=lambda v: (-graph.degree(v), v))
            v = frontier.pop(0)
            order.append(v)
            fresh = [u for u in graph.neighbors(v) if u in remaining]
            remaining -= set(fresh)
            frontier.extend(fresh)
    return order


def find_embedding(small, big, kind=INDUCED):
    """Search for an embedding of `small` into `big`, or None.

    kind=SUBGRAPH preserves edges one way; kind=INDUCED preserves both edges
    and non-edges between mapped vertices.  Deterministic for fixed inputs.
    """
    if kind not in (SUBGRAPH, INDUCED):
        raise ValueError(f"unknown embedding kind {kind!r}")
    if small.vertex_count > big.vertex_count:
        return None
    have = big.label_values()
    need = small.label_values()
    if any(have[lab] < cnt for lab, cnt in need.items()):
        return None

    order = _match_order(small)
    mapping = {}
    used = set()

    def feasible(v, u):
        if small.label(v) != big.label(u) or small.degree(v) > big.degree(u):
            return False
        for w, uw in mapping.items():
            e1 = small.has_edge(v, w)
            e2 = big.has_edge(u, uw)
            if e1 and not e2:
                return False
            if kind == INDUCED and e2 and not e1:
                return False
        return True

    def assign(i):
        if i == len(order):
            return True
        v = order[i]
        for u in big.vertices:
            if u in used:
                continue
            if feasible(v, u):
                mapping[v] = u
                used.add(u)
                if assign(i + 1):
                    return True
                del mapping[v]
                used.remove(u)
        return False

    if assign(0):
        return Embedding(tuple(sorted(mapping.items())), kind)
    return None


def embeds(small, big, kind=INDUCED):
    return find_embedding(small, big, kind) is not None


# -- canonical forms -----------------------------------------------------


def canonical_form(graph):
    """Canonical byte string: equal iff the labeled graphs are isomorphic.

    Color refinement seeded by labels, then individualization on the first
    non-singleton cell, branching only over one representative per group of
    interchangeable (twin) vertices, taking the minimum encoding over all
    discrete refinements reached.  Exact at desk scale.
    """
    vs = graph.vertices
    n = len(vs)
    if n == 0:
        return b"(0)"
    index = {v: i for i, v in enumerate(vs)}
    adj = [tuple(sorted(index[u] for u in graph.neighbors(v))) for v in vs]
    adjset = [frozenset(a) for a in adj]
    labels = [graph.label(v) for v in vs]
    rank = {lab: r for r, lab in enumerate(sorted(set(labels)))}
    edge_list = [(index[u], index[v]) for u, v in graph.edges]

    def refine(colors):
        colors = list(colors)
        while True:
            keys = [(colors[i], tuple(sorted(colors[j] for j in adj[i])))
                    for i in range(n)]
            new_rank = {k: r for r, k in enumerate(sorted(set(keys)))}
            new = [new_rank[k] for k in keys]
            if new == colors:
                return new
            colors = new

    def encode(order):
        pos = {old: new for new, old in enumerate(order)}
        lab_part = tuple(labels[i] for i in order)
        edge_part = tuple(sorted(
            (pos[a], pos[b]) if pos[a] < pos[b] else (pos[b], pos[a])
            for a, b in edge_list))
        return (lab_part, edge_part)

    best = None

    def representatives(cell):
        # Vertices with identical neighborhoods (including or excluding each
        # other) are interchangeable by an automorphism; branch on one.
        reps = []
        seen_open = {}
        for i in cell:
            key = adjset[i]
            if key in seen_open:
                continue
            seen_open[key] = i
            reps.append(i)
        final = []
        seen_closed = {}
        for i in reps:
            key = adjset[i] | {i}
            if key in seen_closed:
                continue
            seen_closed[key] = i
            final.append(i)
        return final

    def search(colors):
        nonlocal best
        colors = refine(colors)
        cells = {}
        for i, c in enumerate(colors):
            cells.setdefault(c, []).append(i)
        split = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                split = cells[c]
                break
        if split is None:
            order = sorted(range(n), key=lambda i: colors[i])
            cand = encode(order)
            if best is None or cand < best:
                best = cand
            return
        for i in representatives(split):
            branched = list(colors)
            branched[i] = n  # fresh maximal color
            search(branched)

    search([rank[lab] for lab in labels])
    return repr((n, best)).encode()


def isomorphic(g1, g2):
    """Label-preserving isomorphism test via canonical forms."""
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    return canonical_form(g1) == canonical_form(g2)


# -- text format ----------------------------------------------------------


def parse_graph(text):
    """Read the line-based graph format.

    One item per line: `node <id> <label>` or `edge <id> <id>`.  Blank lines
    and `#` comments are ignored.
    """
    vertices = []
    labels = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 3:
            vertices.append(parts[1])
            labels[parts[1]] = parts[2]
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise ParseError(f"expected 'node <id> <label>' or 'edge <id> <id>', got {line!r}",
                             lineno)
    try:
        return LabeledGraph(vertices, edges, labels)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_graph(graph):
    """Serialize to the line-based graph format, deterministically."""
    lines = [f"node {v} {graph.label(v)}" for v in graph.vertices]
    lines += [f"edge {u} {v}" for u, v in sorted(graph.edges)]
    return "\n".join(lines) + "\n"


def graph_to_dot(graph, name="G"):
    """DOT rendering for visualization; vertex labels become node labels."""
    lines = [f"graph {name} {{"]
    for v in graph.vertices:
        lines.append(f'  "{v}" [label="{graph.label(v)}"];')
    for u, v in sorted(graph.edges):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
