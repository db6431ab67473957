"""Topology classes: decidable predicates restricting network shapes.

All supported predicates are structural (label-independent) and are applied
per connected component, which is the only coherent lifting of the
connected-graph definitions to arbitrary configurations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import cliquegraphs
from .graphs import (
    LabeledGraph,
    canonical_form,
    diameter,
    longest_simple_path_length,
    max_degree,
)

_PARAMETRIC = ("bounded-path", "bounded-diameter", "bounded-degree", "bpc")
_SIMPLE = ("unrestricted", "clique")


@dataclass(frozen=True)
class TopologyClass:
    """A decidable class of graphs, checked per connected component."""

    kind: str
    bound: int = 0
    parts: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "intersection":
            if not self.parts:
                raise ValueError("intersection needs at least one member class")
            return
        if self.kind in _PARAMETRIC:
            if self.bound < 1:
                raise ValueError(f"{self.kind} needs a bound >= 1, got {self.bound}")
        elif self.kind not in _SIMPLE:
            raise ValueError(f"unknown topology class kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def unrestricted(cls):
        return cls("unrestricted")

    @classmethod
    def bounded_path(cls, k):
        return cls("bounded-path", k)

    @classmethod
    def bounded_diameter(cls, k):
        return cls("bounded-diameter", k)

    @classmethod
    def bounded_degree(cls, d):
        return cls("bounded-degree", d)

    @classmethod
    def bpc(cls, n):
        return cls("bpc", n)

    @classmethod
    def clique(cls):
        return cls("clique")

    @classmethod
    def intersection(cls, *members):
        return cls("intersection", parts=tuple(members))

    @classmethod
    def parse(cls, spec):
        """Parse a class spec like `bounded-path:2` or `bpc:2+bounded-degree:3`."""
        members = []
        for chunk in spec.split("+"):
            chunk = chunk.strip()
            name, _, arg = chunk.partition(":")
            if name in _SIMPLE:
                if arg:
                    raise ValueError(f"class {name!r} takes no bound")
                members.append(cls(name))
            elif name in _PARAMETRIC:
                try:
                    bound = int(arg)
                except ValueError:
                    raise ValueError(f"class {name!r} needs an integer bound, got {arg!r}") from None
                members.append(cls(name, bound))
            else:
                raise ValueError(f"unknown topology class {name!r}")
        return members[0] if len(members) == 1 else cls.intersection(*members)

    # -- membership ---------------------------------------------------------

    def contains(self, graph):
        """Whether every connected component of `graph` satisfies the predicate."""
        if self.kind == "unrestricted":
            return True
        if self.kind == "intersection":
            return all(part.contains(graph) for part in self.parts)
        if self.kind == "bounded-degree":
            return max_degree(graph) <= self.bound
        if self.kind == "bounded-path":
            return longest_simple_path_length(graph) <= self.bound
        return all(self._component_ok(graph.induced(comp))
                   for comp in graph.connected_components())

    def _component_ok(self, comp):
        if self.kind == "bounded-diameter":
            return diameter(comp) <= self.bound
        if self.kind == "clique":
            n = comp.vertex_count
            return comp.edge_count == n * (n - 1) // 2
        if self.kind == "bpc":
            return cliquegraphs.is_bpc(comp, self.bound)
        raise AssertionError(self.kind)

    def spec(self):
        """The parseable textual form of this class."""
        if self.kind == "intersection":
            return "+".join(part.spec() for part in self.parts)
        if self.kind in _SIMPLE:
            return self.kind
        return f"{self.kind}:{self.bound}"

    def __str__(self):
        return self.spec()


def is_in_class(graph, topology_class):
    return topology_class.contains(graph)


def ball_size_bound(k, d):
    """Max vertex count of a connected graph with diameter <= k, degree <= d.

    Volume of a breadth-first ball: 1 + d + d(d-1) + ... + d(d-1)^(k-1).
    """
    if k < 1 or d < 1:
        raise ValueError("bounds must be >= 1")
    total = 1
    layer = d
    for _ in range(k):
        total += layer
        layer *= d - 1
    return total


# one representative (vertex names, edge tuple) per isomorphism class,
# grown by vertex augmentation and memoized across calls
_STRUCTURES = {1: [(("v0",), ())]}


def _connected_structures(m):
    """Connected structures on m fixed vertices, one per isomorphism class.

    Every connected graph has a removable non-cut vertex, so attaching a new
    vertex to every nonempty subset of every smaller structure reaches every
    class; duplicates fall to an unlabeled canonical form.
    """
    if m not in _STRUCTURES:
        prev = _connected_structures(m - 1)
        fresh = f"v{m - 1}"
        seen = set()
        grown = []
        for names, edges in prev:
            for bits in range(1, 2 ** len(names)):
                extra = tuple((names[i], fresh) for i in range(len(names))
                              if bits >> i & 1)
                cand = edges + extra
                g = LabeledGraph(names + (fresh,), cand,
                                 {v: "x" for v in names + (fresh,)})
                key = canonical_form(g)
                if key not in seen:
                    seen.add(key)
                    grown.append((names + (fresh,), cand))
        _STRUCTURES[m] = grown
    return _STRUCTURES[m]


def enumerate_connected_graphs(max_nodes, labels, topology_class=None):
    """Every connected graph with <= max_nodes vertices over the label set,
    in the class, exactly once up to isomorphism.  Deterministic order.

    The class filter is applied at the structure level, which is sound
    because every supported predicate ignores labels.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    labels = sorted(set(labels))
    if not labels:
        raise ValueError("need at least one label")
    if topology_class is None:
        topology_class = TopologyClass.unrestricted()
    for m in range(1, max_nodes + 1):
        for names, edges in _connected_structures(m):
            probe = LabeledGraph(names, edges, {v: labels[0] for v in names})
            if not topology_class.contains(probe):
                continue
            seen = set()
            for assignment in itertools.product(labels, repeat=m):
                g = LabeledGraph(names, edges, dict(zip(names, assignment)))
                key = canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
                yield g
