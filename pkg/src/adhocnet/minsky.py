"""Two-counter machines and their compilation to broadcast protocols.

A machine's counters are mirrored by two chains of cells hanging off a
control node; a counter's value is the number of cells in the nonzero
state.  Each instruction becomes a request wave that travels along the
matching chain cell by cell and reports back: increment flips the first
zero cell, decrement flips the first nonzero cell, and the zero test
succeeds only when the wave bounces off the end of an all-zero chain.
Waves that cannot complete (say, a full chain on increment) deadlock
without ever reaching the halt state, so undersized chains fail safely.

Two layouts are produced.  The `list` layout connects the control node only
to the head of each chain.  The `butterfly` layout additionally connects the
control node to every cell, which keeps the diameter at 2; head cells then
carry a distinct first-cell marker so a wave still enters at the right end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .graphs import LabeledGraph
from .parsing import ParseError, TokenStream, scan
from .protocol import BCAST, RECV, Process, Rule

LIST = "list"
BUTTERFLY = "butterfly"


class MachineError(ValueError):
    """Invalid counter-machine definition."""


@dataclass(frozen=True)
class Inc:
    counter: int
    goto: str


@dataclass(frozen=True)
class DecTest:
    counter: int
    when_zero: str
    when_nonzero: str


Instruction = Union[Inc, DecTest]


class MinskyMachine:
    """Labeled instruction list over two counters, with entry and halt labels."""

    def __init__(self, instructions, entry="L0", halt="LF"):
        self.instructions = dict(instructions)
        self.entry = entry
        self.halt = halt
        if entry not in self.instructions:
            raise MachineError(f"entry label {entry!r} has no instruction")
        if halt in self.instructions:
            raise MachineError(f"halt label {halt!r} may not carry an instruction")
        defined = set(self.instructions) | {halt}
        for label, ins in self.instructions.items():
            if ins.counter not in (1, 2):
                raise MachineError(f"{label}: counter must be 1 or 2")
            targets = ([ins.goto] if isinstance(ins, Inc)
                       else [ins.when_zero, ins.when_nonzero])
            for t in targets:
                if t not in defined:
                    raise MachineError(f"{label}: jump to undefined label {t!r}")
        self.labels = frozenset(defined)

    def __eq__(self, other):
        if not isinstance(other, MinskyMachine):
            return NotImplemented
        return (self.instructions == other.instructions
                and self.entry == other.entry and self.halt == other.halt)

    def __repr__(self):
        return f"MinskyMachine({len(self.instructions)} instructions)"


class MachineRun(NamedTuple):
    halted: bool
    steps: int
    peak1: int
    peak2: int


def simulate_machine(machine, step_budget=100_000):
    """Interpret from the entry label with both counters at zero.

    Reports whether the halt label was reached within the budget, plus the
    step count and the peak value of each counter.
    """
    label = machine.entry
    counters = [0, 0]
    peaks = [0, 0]
    steps = 0
    while label != machine.halt and steps < step_budget:
        ins = machine.instructions[label]
        steps += 1
        i = ins.counter - 1
        if isinstance(ins, Inc):
            counters[i] += 1
            peaks[i] = max(peaks[i], counters[i])
            label = ins.goto
        elif counters[i] == 0:
            label = ins.when_zero
        else:
            counters[i] -= 1
            label = ins.when_nonzero
    return MachineRun(label == machine.halt, steps, peaks[0], peaks[1])


# -- text format ----------------------------------------------------------

_PATTERNS = [
    ("arrow", re.compile(r"->")),
    ("punct", re.compile(r"[{}:;?]")),
    ("ident", re.compile(r"[A-Za-z0-9_.']+")),
]


def parse_machine(text):
    """Parse `machine { L0: inc c1 -> L1 ; L1: dectest c1 ? LF : L2 ; ... }`.

    The entry label is `L0`, the halt label `LF`.
    """
    ts = TokenStream(scan(text, _PATTERNS))
    ts.expect("ident", "machine")
    ts.expect("punct", "{")

    def counter(tok):
        if tok.text not in ("c1", "c2"):
            raise ParseError(f"expected c1 or c2, found {tok.text!r}", tok.line, tok.col)
        return int(tok.text[1])

    instructions = {}
    while True:
        tok = ts.next("instruction or '}'")
        if tok.kind == "punct" and tok.text == "}":
            break
        if tok.kind != "ident":
            raise ParseError(f"expected a label, found {tok.text!r}", tok.line, tok.col)
        label = tok
        if label.text in instructions:
            raise ParseError(f"label {label.text!r} defined twice", label.line, label.col)
        ts.expect("punct", ":")
        op = ts.next("'inc' or 'dectest'")
        if op.text == "inc":
            c = counter(ts.next("counter"))
            ts.expect("arrow")
            goto = ts.next("target label")
            instructions[label.text] = Inc(c, goto.text)
        elif op.text == "dectest":
            c = counter(ts.next("counter"))
            ts.expect("punct", "?")
            zero = ts.next("zero-branch label")
            ts.expect("punct", ":")
            nonzero = ts.next("nonzero-branch label")
            instructions[label.text] = DecTest(c, zero.text, nonzero.text)
        else:
            raise ParseError(f"expected 'inc' or 'dectest', found {op.text!r}",
                             op.line, op.col)
        ts.expect("punct", ";")
    if not ts.at_end():
        tok = ts.peek()
        raise ParseError(f"trailing input after '}}': {tok.text!r}", tok.line, tok.col)
    try:
        return MinskyMachine(instructions)
    except MachineError as exc:
        raise ParseError(str(exc)) from exc


def format_machine(machine):
    lines = ["machine {"]
    for label in sorted(machine.instructions):
        ins = machine.instructions[label]
        if isinstance(ins, Inc):
            lines.append(f"  {label}: inc c{ins.counter} -> {ins.goto} ;")
        else:
            lines.append(f"  {label}: dectest c{ins.counter} ? {ins.when_zero} : {ins.when_nonzero} ;")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- compilation ----------------------------------------------------------


@dataclass(frozen=True)
class CompiledReduction:
    """A compiled protocol plus the family of topologies it runs on."""

    protocol: Process
    variant: str      # LIST or BUTTERFLY
    entry_state: str
    halt_state: str

    def topology(self, n1, n2):
        """Control node plus two chains of n1 and n2 cells, all encoding zero."""
        if n1 < 1 or n2 < 1:
            raise ValueError("chain lengths must be >= 1")
        vertices = ["c"]
        edges = []
        labels = {"c": self.entry_state}
        for counter, length, stem in ((1, n1, "a"), (2, n2, "b")):
            cells = [f"{stem}{j}" for j in range(1, length + 1)]
            vertices.extend(cells)
            edges.append(("c", cells[0]))
            edges.extend(zip(cells, cells[1:]))
            if self.variant == BUTTERFLY:
                edges.extend(("c", cell) for cell in cells[1:])
            labels.update(_cell_labels(self.variant, counter, cells))
        return LabeledGraph(vertices, edges, labels)


def _cell_labels(variant, counter, cells):
    i = counter
    if variant == LIST:
        names = [f"Z{i}"] * (len(cells) - 1) + [f"lastZ{i}"]
    elif len(cells) == 1:
        names = [f"onlyZ{i}"]
    else:
        names = [f"firstZ{i}"] + [f"Z{i}"] * (len(cells) - 2) + [f"lastZ{i}"]
    return dict(zip(cells, names))


def _compile(machine, variant):
    states = set(machine.labels)
    msgs = set()
    rules = []
    for i in (1, 2):
        states.update((f"Z{i}", f"NZ{i}", f"lastZ{i}", f"lastNZ{i}"))
        if variant == BUTTERFLY:
            states.update((f"firstZ{i}", f"firstNZ{i}", f"onlyZ{i}", f"onlyNZ{i}"))

    for label in sorted(machine.instructions):
        ins = machine.instructions[label]
        i = ins.counter
        is_dec = isinstance(ins, DecTest)
        zero_cell, nonzero_cell = f"Z{i}", f"NZ{i}"
        last_zero, last_nonzero = f"lastZ{i}", f"lastNZ{i}"
        wait = f"{label}.w"
        req, ack = f"{label}.req", f"{label}.ack"
        states.add(wait)
        msgs.update((req, ack))
        zero = f"{label}.zero"
        if is_dec:
            msgs.add(zero)

        # control node: fire the wave, then wait for the outcome
        if variant == LIST:
            rules.append(Rule(label, BCAST, req, wait))
            done_msg, zero_done_msg = ack, zero
        else:
            go, done = f"{label}.go", f"{label}.done"
            msgs.update((go, done))
            rules.append(Rule(label, BCAST, go, wait))
            done_msg = done
            zero_done_msg = f"{label}.zdone"
            if is_dec:
                msgs.add(zero_done_msg)
        if is_dec:
            rules.append(Rule(wait, RECV, done_msg, ins.when_nonzero))
            rules.append(Rule(wait, RECV, zero_done_msg, ins.when_zero))
        else:
            rules.append(Rule(wait, RECV, done_msg, ins.goto))

        # chain cells: flip and acknowledge, or forward and relay back
        sat_from, sat_to = ((nonzero_cell, zero_cell) if is_dec
                            else (zero_cell, nonzero_cell))
        last_from, last_to = ((last_nonzero, last_zero) if is_dec
                              else (last_zero, last_nonzero))
        relay_home = zero_cell if is_dec else nonzero_cell
        sat, sat_last = f"{label}.s", f"{label}.se"
        fwd, relay, back = f"{label}.fw", f"{label}.rl", f"{label}.ba"
        states.update((sat, sat_last, fwd, relay, back))
        rules += [
            Rule(sat_from, RECV, req, sat), Rule(sat, BCAST, ack, sat_to),
            Rule(last_from, RECV, req, sat_last), Rule(sat_last, BCAST, ack, last_to),
            Rule(relay_home, RECV, req, fwd), Rule(fwd, BCAST, req, relay),
            Rule(relay, RECV, ack, back), Rule(back, BCAST, ack, relay_home),
        ]
        if is_dec:
            back_zero, zero_at_end = f"{label}.bz", f"{label}.ze"
            states.update((back_zero, zero_at_end))
            rules += [
                Rule(relay, RECV, zero, back_zero),
                Rule(back_zero, BCAST, zero, relay_home),
                Rule(last_zero, RECV, req, zero_at_end),
                Rule(zero_at_end, BCAST, zero, last_zero),
            ]

        # butterfly heads: react to the control's opening message and turn
        # the returning chain acknowledgement into the control-facing one
        if variant == BUTTERFLY:
            first_zero_s, first_nonzero_s = f"firstZ{i}", f"firstNZ{i}"
            only_zero_s, only_nonzero_s = f"onlyZ{i}", f"onlyNZ{i}"
            h_from, h_to = ((first_nonzero_s, first_zero_s) if is_dec
                            else (first_zero_s, first_nonzero_s))
            o_from, o_to = ((only_nonzero_s, only_zero_s) if is_dec
                            else (only_zero_s, only_nonzero_s))
            h_home = first_zero_s if is_dec else first_nonzero_s
            h_sat, o_sat = f"{label}.hs", f"{label}.hso"
            h_fwd, h_relay, h_back = f"{label}.hf", f"{label}.hr", f"{label}.hba"
            states.update((h_sat, o_sat, h_fwd, h_relay, h_back))
            rules += [
                Rule(h_from, RECV, go, h_sat), Rule(h_sat, BCAST, done, h_to),
                Rule(o_from, RECV, go, o_sat), Rule(o_sat, BCAST, done, o_to),
                Rule(h_home, RECV, go, h_fwd), Rule(h_fwd, BCAST, req, h_relay),
                Rule(h_relay, RECV, ack, h_back), Rule(h_back, BCAST, done, h_home),
            ]
            if is_dec:
                h_back_zero, o_zero = f"{label}.hbz", f"{label}.hzo"
                states.update((h_back_zero, o_zero))
                rules += [
                    Rule(h_relay, RECV, zero, h_back_zero),
                    Rule(h_back_zero, BCAST, zero_done_msg, h_home),
                    Rule(only_zero_s, RECV, go, o_zero),
                    Rule(o_zero, BCAST, zero_done_msg, only_zero_s),
                ]

    init = {machine.entry}
    for i in (1, 2):
        init.update((f"Z{i}", f"lastZ{i}"))
        if variant == BUTTERFLY:
            init.update((f"firstZ{i}", f"onlyZ{i}"))
    protocol = Process(states, msgs, rules, init)
    return CompiledReduction(protocol, variant, machine.entry, machine.halt)


def compile_list(machine):
    """Compile to the chain layout: control adjacent to each chain's head only."""
    return _compile(machine, LIST)


def compile_butterfly(machine):
    """Compile to the diameter-2 layout: control adjacent to every cell."""
    return _compile(machine, BUTTERFLY)
