"""Walk through the step semantics on a small mesh.

Every node runs the same four-state relay automaton.  One idle node wakes
up with an internal step and broadcasts; each neighbor that understands the
message starts relaying in turn, and eventually the whole mesh is done.
"""

from pathlib import Path

from adhocnet import (
    Action,
    apply_action,
    parse_graph,
    parse_protocol,
    reachable_set,
    successors,
)
from adhocnet.protocol import BCAST, TAU

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def show(config, note):
    labels = config.labels_map()
    row = " ".join(f"{v}={labels[v]}" for v in config.vertices)
    print(f"  {note:<26} {row}")


def main():
    protocol = parse_protocol((SAMPLES / "flooding.ahn").read_text())
    mesh = parse_graph((SAMPLES / "mesh6.graph").read_text())

    print("protocol rules:")
    for i, rule in enumerate(protocol.rules):
        print(f"  [{i}] {rule.render()}")

    print("\na scripted run:")
    show(mesh, "initial")

    tau_index = next(i for i, r in enumerate(protocol.rules) if r.kind == TAU)
    woke = apply_action(protocol, mesh, Action(TAU, "n1", tau_index))
    show(woke, "n1 wakes up (tau)")

    bc_index = next(i for i, r in enumerate(protocol.rules) if r.kind == BCAST)
    sent = apply_action(protocol, woke,
                        Action(BCAST, "n1", bc_index, (("n2", "C"), ("n4", "C"))))
    show(sent, "n1 broadcasts m")

    print("\nnondeterminism from here:", len(successors(protocol, sent)), "possible next steps")

    reached = reachable_set(protocol, mesh)
    done = mesh.relabeled({v: "D" for v in mesh.vertices})
    print(f"reachable configurations from the initial mesh: {len(reached)}")
    print(f"the all-done configuration is reachable: {done in reached}")


if __name__ == "__main__":
    main()
