"""Maximal clique graphs and the ordering defined on them.

A connected graph G is paired with the bipartite graph linking each vertex
to every maximal clique containing it; clique vertices carry the reserved
label `•`.  The ordering compares two graphs through injections on both
parts and coincides with induced-subgraph embedding on the sources.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .graphs import (
    GraphError,
    LabeledGraph,
    longest_simple_path_length,
    maximal_cliques,
)

CLIQUE_LABEL = "•"  # •, reserved: never a vertex label of a source graph


class CliqueGraph:
    """Bipartite pairing of a connected graph's vertices with its maximal cliques."""

    def __init__(self, source):
        if not source.is_connected() or source.vertex_count == 0:
            raise GraphError("maximal clique graph requires a nonempty connected graph")
        if CLIQUE_LABEL in source.label_set():
            raise GraphError(f"source graph may not use the reserved label {CLIQUE_LABEL!r}")
        self.source = source
        self.cliques = maximal_cliques(source)
        self._member_of = {v: tuple(i for i, c in enumerate(self.cliques) if v in c)
                           for v in source.vertices}

    @property
    def vertex_part(self):
        return self.source.vertices

    def cliques_of(self, v):
        """Indices of the maximal cliques containing vertex v."""
        return self._member_of[v]

    def share_clique(self, u, v):
        return any(u in self.cliques[i] for i in self._member_of[v])

    def as_graph(self):
        """The bipartite structure as a plain LabeledGraph.

        Vertex-part ids are prefixed `v:`, clique-part ids are `c:<index>`.
        """
        vertices = [f"v:{v}" for v in self.source.vertices]
        labels = {f"v:{v}": self.source.label(v) for v in self.source.vertices}
        edges = []
        for i, clique in enumerate(self.cliques):
            cid = f"c:{i}"
            vertices.append(cid)
            labels[cid] = CLIQUE_LABEL
            edges.extend((f"v:{v}", cid) for v in clique)
        return LabeledGraph(vertices, edges, labels)

    def reconstruct_source(self):
        """Rebuild the source graph: two vertices are adjacent iff they share a clique."""
        vs = self.source.vertices
        edges = [(u, v) for u, v in itertools.combinations(vs, 2) if self.share_clique(u, v)]
        return LabeledGraph(vs, edges, self.source.labels_map())

    def to_dot(self, name="K"):
        """DOT rendering with clique vertices drawn as boxes."""
        lines = [f"graph {name} {{"]
        for v in self.source.vertices:
            lines.append(f'  "v:{v}" [label="{self.source.label(v)}"];')
        for i in range(len(self.cliques)):
            lines.append(f'  "c:{i}" [label="{CLIQUE_LABEL}", shape=box];')
        for i, clique in enumerate(self.cliques):
            for v in sorted(clique):
                lines.append(f'  "v:{v}" -- "c:{i}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"CliqueGraph({self.source.vertex_count}v, {len(self.cliques)} cliques)"


def build_clique_graph(graph):
    """The unique maximal clique graph of a connected graph."""
    return CliqueGraph(graph)


def is_bpc(graph, bound):
    """Whether the clique graph's longest simple path has at most `bound` edges.

    The input must be connected; disconnected inputs are the caller's
    responsibility (lift per component).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return longest_simple_path_length(build_clique_graph(graph).as_graph()) <= bound


@dataclass(frozen=True)
class CliqueOrderWitness:
    """Pair of injections (vertices, cliques) witnessing the clique-graph ordering."""

    vertex_map: tuple  # sorted ((v1, v2), ...) between source vertex sets
    clique_map: tuple  # sorted ((i1, i2), ...) between clique indices

    def vertex_dict(self):
        return dict(self.vertex_map)

    def clique_dict(self):
        return dict(self.clique_map)


def check_clique_order_witness(k1, k2, witness):
    """Re-verify a witness against the four defining conditions."""
    f = witness.vertex_dict()
    g = witness.clique_dict()
    if set(f) != set(k1.vertex_part) or len(set(f.values())) != len(f):
        return False
    if set(g) != set(range(len(k1.cliques))) or len(set(g.values())) != len(g):
        return False
    if not all(u in k2.vertex_part for u in f.values()):
        return False
    if not all(0 <= j < len(k2.cliques) for j in g.values()):
        return False
    # (i) membership transported exactly
    for v in k1.vertex_part:
        for i in range(len(k1.cliques)):
            if (v in k1.cliques[i]) != (f[v] in k2.cliques[g[i]]):
                return False
    # (ii) images sharing any target clique must share a source clique's image
    for v1, v2 in itertools.combinations(k1.vertex_part, 2):
        for c in k2.cliques:
            if f[v1] in c and f[v2] in c:
                if not any(f[v1] in k2.cliques[g[i]] and f[v2] in k2.cliques[g[i]]
                           for i in range(len(k1.cliques))):
                    return False
                break
    # (iii) vertex labels preserved; (iv) clique labels are all the same mark
    return all(k1.source.label(v) == k2.source.label(f[v]) for v in k1.vertex_part)


def clique_order_leq(g1, g2):
    """Witness that g1 precedes g2 in the clique-graph ordering, or None.

    Backtracking over clique assignments first (they prune harder), vertex
    assignments second; pair separation is enforced incrementally.
    """
    k1 = build_clique_graph(g1)
    k2 = build_clique_graph(g2)
    n1, n2 = len(k1.cliques), len(k2.cliques)
    if n1 > n2 or g1.vertex_count > g2.vertex_count:
        return None
    have = g2.label_values()
    need = g1.label_values()
    if any(have[lab] < cnt for lab, cnt in need.items()):
        return None

    def clique_key(c, graph):
        return Counter(graph.label(v) for v in c)

    k1_keys = [clique_key(c, g1) for c in k1.cliques]
    k2_keys = [clique_key(c, g2) for c in k2.cliques]
    candidates = []
    for i in range(n1):
        cand = [j for j in range(n2)
                if len(k2.cliques[j]) >= len(k1.cliques[i])
                and all(k2_keys[j][lab] >= cnt for lab, cnt in k1_keys[i].items())]
        if not cand:
            return None
        candidates.append(cand)

    clique_order = sorted(range(n1), key=lambda i: len(candidates[i]))
    vertex_order = sorted(k1.vertex_part,
                          key=lambda v: (-len(k1.cliques_of(v)), v))

    g = {}
    used_cliques = set()
    f = {}
    used_vertices = set()

    def vertex_feasible(v, u):
        if g1.label(v) != g2.label(u):
            return False
        member = set(k1.cliques_of(v))
        for i in range(n1):
            if (i in member) != (u in k2.cliques[g[i]]):
                return False
        # pair separation: images may not meet in any clique outside g's image
        for w, uw in f.items():
            if k2.share_clique(u, uw) and not k1.share_clique(v, w):
                return False
        return True

    def assign_vertices(idx):
        if idx == len(vertex_order):
            return True
        v = vertex_order[idx]
        for u in g2.vertices:
            if u in used_vertices:
                continue
            if vertex_feasible(v, u):
                f[v] = u
                used_vertices.add(u)
                if assign_vertices(idx + 1):
                    return True
                del f[v]
                used_vertices.remove(u)
        return False

    def assign_cliques(idx):
        if idx == len(clique_order):
            return assign_vertices(0)
        i = clique_order[idx]
        for j in candidates[i]:
            if j in used_cliques:
                continue
            g[i] = j
            used_cliques.add(j)
            if assign_cliques(idx + 1):
                return True
            del g[i]
            used_cliques.remove(j)
        return False

    if assign_cliques(0):
        return CliqueOrderWitness(tuple(sorted(f.items())), tuple(sorted(g.items())))
    return None
