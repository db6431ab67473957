"""Forward coverability: exhaustive exploration over enumerated topologies.

Exploration from one initial configuration always terminates (the structure
is static, so the state space is bounded by |states|^|vertices|).  Answers
over an enumerated family of initial topologies are `yes` with a replayable
witness, or `no-within-bounds`: bounded search proves nothing about larger
topologies.  Only the finite bounded-diameter + bounded-degree family
supports an exact `no`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .protocol import ProtocolError, apply_action, successors
from .topology import TopologyClass, ball_size_bound, enumerate_connected_graphs


class EnumerationCapError(RuntimeError):
    """The finite class is too large to enumerate under the configured cap."""


@dataclass(frozen=True)
class CoverQuery:
    process: object
    target: str
    topology_class: TopologyClass = field(default_factory=TopologyClass.unrestricted)
    max_nodes: int = 3
    step_budget: Optional[int] = None  # per-topology cap on explored configurations

    def __post_init__(self):
        if self.target not in self.process.states:
            raise ProtocolError(f"target {self.target!r} is not a declared state")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1")
        if self.step_budget is not None and self.step_budget < 1:
            raise ValueError("step_budget must be >= 1")


@dataclass(frozen=True)
class CoverWitness:
    """A replayable run: initial configuration, action trace, final configuration."""

    initial: object
    trace: tuple
    final: object


@dataclass(frozen=True)
class ForwardResult:
    answer: str  # 'yes', 'no' or 'no-within-bounds'
    witness: Optional[CoverWitness]
    topologies_explored: int
    states_visited: int


def reachable_set(process, start):
    """All configurations reachable from `start`; breadth-first, terminating."""
    visited = {start}
    queue = deque([start])
    while queue:
        config = queue.popleft()
        for nxt, _ in successors(process, config):
            if nxt not in visited:
                visited.add(nxt)
                queue.append(nxt)
    return visited


def _explore(process, start, target, budget=None):
    """BFS with parent tracking; stops at the first configuration containing
    `target`.  Returns (hit_or_None, parents, visited_count)."""
    parents = {start: None}
    if target in start.labels_map().values():
        return start, parents, 1
    queue = deque([start])
    visited = 1
    while queue:
        config = queue.popleft()
        for nxt, action in successors(process, config):
            if nxt in parents:
                continue
            parents[nxt] = (config, action)
            visited += 1
            if target in nxt.labels_map().values():
                return nxt, parents, visited
            if budget is not None and visited >= budget:
                return None, parents, visited
            queue.append(nxt)
    return None, parents, visited


def _build_witness(initial, hit, parents):
    trace = []
    config = hit
    while parents[config] is not None:
        prev, action = parents[config]
        trace.append(action)
        config = prev
    return CoverWitness(initial, tuple(reversed(trace)), hit)


def cover_from(process, start, target, step_budget=None):
    """Exact coverability from one fixed initial configuration."""
    if target not in process.states:
        raise ProtocolError(f"target {target!r} is not a declared state")
    hit, parents, visited = _explore(process, start, target, step_budget)
    if hit is None:
        answer = "no" if step_budget is None else "no-within-bounds"
        return ForwardResult(answer, None, 1, visited)
    return ForwardResult("yes", _build_witness(start, hit, parents), 1, visited)


def forward_cover(query):
    """Search the enumerated initial topologies for a covering run.

    Initial configurations are the connected graphs with at most `max_nodes`
    vertices, labeled from the initial states, inside the topology class.
    Broadcast never crosses components, so connected initial topologies
    suffice.  First witness in enumeration order wins.
    """
    process = query.process
    explored = 0
    visited_total = 0
    for start in enumerate_connected_graphs(query.max_nodes, process.init,
                                            query.topology_class):
        explored += 1
        hit, parents, visited = _explore(process, start, query.target, query.step_budget)
        visited_total += visited
        if hit is not None:
            return ForwardResult("yes", _build_witness(start, hit, parents),
                                 explored, visited_total)
    return ForwardResult("no-within-bounds", None, explored, visited_total)


def bounded_diameter_degree_cover(process, target, diameter_bound, degree_bound,
                                  node_cap=6):
    """Exact decision for the finite diameter+degree-bounded class.

    Every member has at most ball_size_bound(k, d) vertices, so enumerating
    up to that size visits the whole class.  `node_cap` guards against
    infeasible enumerations.
    """
    if target not in process.states:
        raise ProtocolError(f"target {target!r} is not a declared state")
    size_limit = ball_size_bound(diameter_bound, degree_bound)
    if size_limit > node_cap:
        raise EnumerationCapError(
            f"class members may have up to {size_limit} vertices, cap is {node_cap}")
    cls = TopologyClass.intersection(
        TopologyClass.bounded_diameter(diameter_bound),
        TopologyClass.bounded_degree(degree_bound))
    explored = 0
    visited_total = 0
    for start in enumerate_connected_graphs(size_limit, process.init, cls):
        explored += 1
        hit, parents, visited = _explore(process, start, target)
        visited_total += visited
        if hit is not None:
            return ForwardResult("yes", _build_witness(start, hit, parents),
                                 explored, visited_total)
    return ForwardResult("no", None, explored, visited_total)


def moore_bound(k, d):
    """The quoted closed-form size bound (k(k-1)^d - 2)/(k - 2), exactly.

    Undefined at k = 2.  Kept for reference only; enumeration limits use
    ball_size_bound instead.
    """
    if k == 2:
        raise ZeroDivisionError("the closed form is undefined at k = 2")
    return Fraction(k * (k - 1) ** d - 2, k - 2)


def replay(process, witness):
    """Re-run a witness trace; returns the final configuration.

    Raises ProtocolError if any step is invalid or the outcome differs from
    the recorded final configuration.
    """
    config = witness.initial
    for action in witness.trace:
        config = apply_action(process, config, action)
    if config != witness.final:
        raise ProtocolError("replayed trace does not reproduce the recorded outcome")
    return config


def format_trace(witness):
    """Line-based action log of a witness."""
    return "".join(action.render() + "\n" for action in witness.trace)
