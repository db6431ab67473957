"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
from pathlib import Path

from adhocnet import LabeledGraph, Process
from adhocnet.protocol import BCAST, RECV, TAU, Rule

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def flooding_protocol():
    return Process(
        states=["A", "B", "C", "D"],
        alphabet=["m"],
        rules=[("A", TAU, None, "C"), ("C", BCAST, "m", "D"),
               ("B", RECV, "m", "C"), ("A", RECV, "m", "C")],
        init=["A", "B"],
    )


def mesh6():
    return LabeledGraph(
        ["n1", "n2", "n3", "n4", "n5", "n6"],
        [("n1", "n2"), ("n1", "n4"), ("n2", "n4"), ("n2", "n5"),
         ("n4", "n5"), ("n3", "n5"), ("n3", "n6"), ("n5", "n6")],
        {"n1": "A", "n2": "A", "n3": "B", "n4": "B", "n5": "A", "n6": "B"},
    )


def two_clique_graph():
    gs = [f"g{i}" for i in range(1, 6)]
    hs = [f"h{i}" for i in range(1, 5)]
    edges = list(itertools.combinations(gs, 2)) + list(itertools.combinations(hs, 2))
    edges.append(("g4", "h2"))
    return LabeledGraph(gs + hs, edges, {v: "q" for v in gs + hs})


def graph(edges, labels):
    """Terse constructor: vertices inferred from the label map."""
    return LabeledGraph(list(labels), edges, labels)


def path_graph(labels):
    names = [f"p{i}" for i in range(len(labels))]
    return LabeledGraph(names, list(zip(names, names[1:])),
                        dict(zip(names, labels)))


def cycle_graph(labels):
    names = [f"p{i}" for i in range(len(labels))]
    edges = list(zip(names, names[1:])) + [(names[-1], names[0])]
    return LabeledGraph(names, edges, dict(zip(names, labels)))


def clique_of(labels):
    names = [f"p{i}" for i in range(len(labels))]
    return LabeledGraph(names, itertools.combinations(names, 2),
                        dict(zip(names, labels)))


def star_graph(center_label, leaf_labels):
    names = ["c"] + [f"l{i}" for i in range(len(leaf_labels))]
    labels = {"c": center_label}
    labels.update({f"l{i}": lab for i, lab in enumerate(leaf_labels)})
    return LabeledGraph(names, [("c", n) for n in names[1:]], labels)


def single(label):
    return LabeledGraph(["p0"], [], {"p0": label})


def all_labeled_graphs(n, labels):
    """Every labeled graph on exactly n named vertices (no iso dedup)."""
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    for bits in range(2 ** len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        for assignment in itertools.product(labels, repeat=n):
            yield LabeledGraph(names, edges, dict(zip(names, assignment)))


def random_process(rng, max_states=3, max_msgs=2, max_rules=6):
    states = [f"q{i}" for i in range(rng.randint(2, max_states))]
    msgs = [f"m{i}" for i in range(rng.randint(1, max_msgs))]
    pool = []
    for src in states:
        for dst in states:
            pool.append(Rule(src, TAU, None, dst))
            for m in msgs:
                pool.append(Rule(src, BCAST, m, dst))
                pool.append(Rule(src, RECV, m, dst))
    count = min(rng.randint(2, max_rules), len(pool))
    rules = rng.sample(pool, count)
    init = rng.sample(states, rng.randint(1, len(states)))
    return Process(states, msgs, rules, init)


def naive_successors(process, config):
    """Declarative one-step relation: try every relabeling and check the
    definition directly.  Independent of the constructive implementation."""
    states = sorted(process.states)
    vs = config.vertices
    results = set()
    for assignment in itertools.product(states, repeat=len(vs)):
        new = dict(zip(vs, assignment))
        if _is_step(process, config, new):
            results.add(config.relabeled(new))
    return results


def _is_step(process, config, new):
    rules = process.rules
    for v in config.vertices:
        # internal step at v
        if any(r.kind == TAU and r.src == config.label(v) and r.dst == new[v]
               for r in rules):
            if all(new[u] == config.label(u) for u in config.vertices if u != v):
                return True
        # broadcast at v
        for r in rules:
            if r.kind != BCAST or r.src != config.label(v) or r.dst != new[v]:
                continue
            ok = True
            neighborhood = set(config.neighbors(v))
            for u in config.vertices:
                if u == v:
                    continue
                targets = process.receive_targets(config.label(u), r.msg)
                if u in neighborhood and targets:
                    if new[u] not in targets:
                        ok = False
                        break
                elif new[u] != config.label(u):
                    ok = False
                    break
            if ok:
                return True
    return False
