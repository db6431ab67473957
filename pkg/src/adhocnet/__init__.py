"""Coverability analysis for selective-broadcast protocols over labeled topologies.

The package models a network as a labeled undirected graph whose nodes all
run one finite automaton and communicate by broadcasting to their neighbors.
It answers control-state coverability questions by exhaustive forward
exploration over enumerated topologies and by symbolic backward saturation
over well-quasi-ordered topology classes, and ships the classic
counter-machine constructions as executable protocol compilers.
"""

from .graphs import (
    Embedding,
    GraphError,
    INDUCED,
    LabeledGraph,
    SUBGRAPH,
    canonical_form,
    check_embedding,
    diameter,
    embeds,
    find_embedding,
    format_graph,
    graph_to_dot,
    isomorphic,
    longest_simple_path_length,
    max_degree,
    maximal_cliques,
    parse_graph,
)
from .parsing import ParseError
from .topology import (
    TopologyClass,
    ball_size_bound,
    enumerate_connected_graphs,
    is_in_class,
)
from .cliquegraphs import (
    CLIQUE_LABEL,
    CliqueGraph,
    CliqueOrderWitness,
    build_clique_graph,
    check_clique_order_witness,
    clique_order_leq,
    is_bpc,
)
from .protocol import (
    Action,
    Process,
    ProtocolError,
    Rule,
    apply_action,
    format_protocol,
    parse_action,
    parse_protocol,
    successors,
)
from .forward import (
    CoverQuery,
    CoverWitness,
    EnumerationCapError,
    ForwardResult,
    bounded_diameter_degree_cover,
    cover_from,
    format_trace,
    forward_cover,
    moore_bound,
    reachable_set,
    replay,
)
from .backward import (
    BackwardResult,
    Basis,
    BudgetExhausted,
    backward_cover,
    minimize,
    pre_basis,
)
from .minsky import (
    CompiledReduction,
    DecTest,
    Inc,
    MachineError,
    MachineRun,
    MinskyMachine,
    compile_butterfly,
    compile_list,
    format_machine,
    parse_machine,
    simulate_machine,
)

__version__ = "0.1.0"
