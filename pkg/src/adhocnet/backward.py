"""Backward coverability over well-quasi-ordered topology classes.

Upward-closed sets of configurations (under induced-subgraph embedding) are
represented by finite antichains of minimal connected elements.  Saturation
repeatedly adds one-step predecessors until nothing new appears below the
existing basis; on bounded-path and bounded-clique-path classes the ordering
is a well-quasi-order, so this terminates.

Predecessor generation inverts each rule:
  (a) undo an internal step at a vertex;
  (b) undo a broadcast sent by a vertex of the graph, enumerating every
      consistent combination of pre-states for its neighbors;
  (c) undo a broadcast sent by one fresh vertex attached to any nonempty
      vertex subset.
One fresh vertex suffices: a step constrains only the sender and its
neighbors, and anything else a larger predecessor carries is absorbed by
upward closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .graphs import (
    GraphError,
    INDUCED,
    LabeledGraph,
    canonical_form,
    find_embedding,
)
from .protocol import BCAST, TAU, ProtocolError
from .topology import TopologyClass

_WQO_KINDS = ("bounded-path", "bpc")


class BudgetExhausted(RuntimeError):
    """Saturation hit the iteration budget (unrestricted classes only)."""


def embeds_induced(small, big):
    return find_embedding(small, big, INDUCED) is not None


@dataclass(frozen=True)
class Basis:
    """Antichain of minimal connected class members denoting an upward-closed set."""

    elements: tuple
    topology_class: TopologyClass

    def covers(self, graph):
        """Whether `graph` lies in the denoted upward-closed set."""
        return any(embeds_induced(e, graph) for e in self.elements)


@dataclass(frozen=True)
class BackwardResult:
    answer: str  # 'yes' or 'no'
    certificate: Optional[LabeledGraph]  # for 'yes': an initial-labeled element
    basis: Basis
    iterations: int
    basis_size_history: tuple
    snapshots: tuple  # Basis after each round, for audits


def _sort_key(graph):
    return (graph.vertex_count, graph.edge_count, canonical_form(graph))


def minimize(graphs, topology_class):
    """Antichain of minimal elements with the same upward closure.

    Inputs must be connected members of the class.  Elements are kept in a
    canonical order, deduplicated up to isomorphism.
    """
    items = sorted(graphs, key=_sort_key)
    kept = []
    seen = set()
    for g in items:
        if not g.is_connected():
            raise GraphError("basis elements must be connected")
        if not topology_class.contains(g):
            raise GraphError(f"basis element outside class {topology_class}")
        key = canonical_form(g)
        if key in seen:
            continue
        seen.add(key)
        if any(embeds_induced(smaller, g) for smaller in kept):
            continue
        kept.append(g)
    return Basis(tuple(kept), topology_class)


def _pre_labels(process, after, message):
    """States a receiver may have held before ending in `after`.

    Either a state with a reception rule into `after`, or `after` itself when
    it has no reception for the message (it ignored the broadcast).
    """
    options = [q for q in sorted(process.states)
               if after in process.receive_targets(q, message)]
    if not process.receive_targets(after, message):
        options.append(after)
    return options


def pre_basis(process, config, topology_class):
    """Generators of the one-step predecessors of the upward closure of `config`.

    Returns connected class members; together with `config` their upward
    closure equals that of `config` plus its predecessors.  Deduplicated up
    to isomorphism, deterministic order.
    """
    out = []
    seen = set()

    def emit(graph):
        if not graph.is_connected() or not topology_class.contains(graph):
            return
        key = canonical_form(graph)
        if key not in seen:
            seen.add(key)
            out.append(graph)

    # (a) internal step at a vertex of config
    for v in config.vertices:
        for rule in process.rules:
            if rule.kind == TAU and rule.dst == config.label(v):
                emit(config.relabeled({v: rule.src}))

    # (b) broadcast sent by a vertex of config
    for v in config.vertices:
        neighbors = config.neighbors(v)
        for rule in process.rules:
            if rule.kind != BCAST or rule.dst != config.label(v):
                continue
            options = [_pre_labels(process, config.label(u), rule.msg)
                       for u in neighbors]
            if any(not opts for opts in options):
                continue
            for combo in itertools.product(*options):
                changes = {v: rule.src}
                changes.update(zip(neighbors, combo))
                emit(config.relabeled(changes))

    # (c) broadcast sent by one fresh vertex attached to a nonempty subset
    fresh = None
    base_edges = None
    for rule in process.rules:
        if rule.kind != BCAST:
            continue
        if fresh is None:
            i = 0
            while f"w{i}" in config:
                i += 1
            fresh = f"w{i}"
            base_edges = list(config.edges)
        for size in range(1, config.vertex_count + 1):
            for subset in itertools.combinations(config.vertices, size):
                options = [_pre_labels(process, config.label(u), rule.msg)
                           for u in subset]
                if any(not opts for opts in options):
                    continue
                edges = base_edges + [(fresh, u) for u in subset]
                vertices = config.vertices + (fresh,)
                for combo in itertools.product(*options):
                    labels = config.labels_map()
                    labels[fresh] = rule.src
                    labels.update(zip(subset, combo))
                    emit(LabeledGraph(vertices, edges, labels))

    out.sort(key=_sort_key)
    return out


def backward_cover(process, target, topology_class, max_iterations=None):
    """Saturate predecessors of the target state's upward closure.

    Answers yes iff the final basis contains an element labeled entirely by
    initial states; that element is itself a covering initial configuration.
    Termination is guaranteed for bounded-path and bpc classes; any other
    class requires an explicit `max_iterations` budget.
    """
    if target not in process.states:
        raise ProtocolError(f"target {target!r} is not a declared state")
    if topology_class.kind not in _WQO_KINDS and max_iterations is None:
        raise ValueError(
            f"class {topology_class} carries no termination guarantee; "
            "pass max_iterations to bound the search")

    seed = LabeledGraph(["n0"], [], {"n0": target})
    basis = minimize([seed], topology_class)
    sizes = [len(basis.elements)]
    snapshots = [basis]
    processed = set()
    iterations = 0

    def initial_element(b):
        for element in b.elements:
            if set(element.labels_map().values()) <= process.init:
                return element
        return None

    certificate = initial_element(basis)
    while certificate is None:
        frontier = [g for g in basis.elements if canonical_form(g) not in processed]
        if not frontier:
            break
        if max_iterations is not None and iterations >= max_iterations:
            raise BudgetExhausted(f"no fixpoint within {max_iterations} iterations")
        iterations += 1
        candidates = list(basis.elements)
        for g in frontier:
            processed.add(canonical_form(g))
            candidates.extend(pre_basis(process, g, topology_class))
        basis = minimize(candidates, topology_class)
        sizes.append(len(basis.elements))
        snapshots.append(basis)
        certificate = initial_element(basis)

    answer = "yes" if certificate is not None else "no"
    return BackwardResult(answer, certificate, basis, iterations,
                          tuple(sizes), tuple(snapshots))
