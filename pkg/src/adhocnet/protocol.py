"""Protocol automata and the selective-broadcast step semantics.

Every node of a configuration runs the same automaton.  An internal step
relabels one vertex.  A broadcast relabels the sender and every neighbor
whose current state has a matching reception rule; reception is mandatory
when enabled, and the sender never receives its own message.  The topology
never changes.
"""

from __future__ import annotations

import itertools
import re
from typing import NamedTuple, Optional

from .cliquegraphs import CLIQUE_LABEL
from .parsing import ParseError, TokenStream, scan

TAU = "tau"
BCAST = "bcast"
RECV = "recv"


class ProtocolError(ValueError):
    """Invalid process definition or inapplicable action."""


class Rule(NamedTuple):
    src: str
    kind: str  # TAU, BCAST or RECV
    msg: Optional[str]
    dst: str

    def render(self):
        if self.kind == TAU:
            return f"{self.src} -tau-> {self.dst}"
        op = "!" if self.kind == BCAST else "?"
        return f"{self.src} -{op}{self.msg}-> {self.dst}"


def _rule_key(rule):
    return (rule.src, rule.kind, rule.msg or "", rule.dst)


class Process:
    """Finite automaton: states, message alphabet, rules, initial states."""

    def __init__(self, states, alphabet, rules, init):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.init = frozenset(init)
        if not self.init:
            raise ProtocolError("initial state set may not be empty")
        if not self.init <= self.states:
            raise ProtocolError(f"initial states not declared: {sorted(self.init - self.states)}")
        if CLIQUE_LABEL in self.states:
            raise ProtocolError(f"state name {CLIQUE_LABEL!r} is reserved")

        checked = []
        for rule in rules:
            rule = Rule(*rule)
            if rule.kind not in (TAU, BCAST, RECV):
                raise ProtocolError(f"unknown rule kind {rule.kind!r}")
            if rule.src not in self.states or rule.dst not in self.states:
                raise ProtocolError(f"rule uses undeclared state: {rule.render()}")
            if rule.kind == TAU:
                if rule.msg is not None:
                    raise ProtocolError("internal rules carry no message")
            elif rule.msg not in self.alphabet:
                raise ProtocolError(f"rule uses undeclared message: {rule.render()}")
            checked.append(rule)
        self.rules = tuple(sorted(set(checked), key=_rule_key))

        self._recv = {}
        for rule in self.rules:
            if rule.kind == RECV:
                self._recv.setdefault((rule.src, rule.msg), []).append(rule.dst)
        self._recv = {k: tuple(sorted(set(v))) for k, v in self._recv.items()}

    def receive_targets(self, state, message):
        """States reachable from `state` on reception of `message` (sorted)."""
        if state not in self.states:
            raise ProtocolError(f"unknown state {state!r}")
        if message not in self.alphabet:
            raise ProtocolError(f"unknown message {message!r}")
        return self._recv.get((state, message), ())

    def __eq__(self, other):
        if not isinstance(other, Process):
            return NotImplemented
        return (self.states == other.states and self.alphabet == other.alphabet
                and self.rules == other.rules and self.init == other.init)

    def __hash__(self):
        return hash((self.states, self.alphabet, self.rules, self.init))

    def __repr__(self):
        return (f"Process({len(self.states)} states, {len(self.alphabet)} msgs, "
                f"{len(self.rules)} rules)")


# -- DSL ----------------------------------------------------------------

_IDENT = r"[A-Za-z0-9_.']+"
_PATTERNS = [
    ("arrow", re.compile(rf"-(?:tau|[!?]{_IDENT})->")),
    ("punct", re.compile(r"[{};]")),
    ("ident", re.compile(_IDENT)),
]


def parse_protocol(text):
    """Parse the protocol DSL.

    Layout-insensitive: `protocol <name> {` then `states ...;`, `init ...;`,
    `msgs ...;`, then rules `<q> -tau-> <q'>;` / `<q> -!m-> <q'>;` /
    `<q> -?m-> <q'>;`, closed by `}`.  `#` starts a line comment.
    """
    ts = TokenStream(scan(text, _PATTERNS))
    ts.expect("ident", "protocol")
    ts.expect("ident")
    ts.expect("punct", "{")

    def name_list(keyword):
        ts.expect("ident", keyword)
        names = []
        while True:
            tok = ts.next(f"'{keyword}' entry or ';'")
            if tok.kind == "punct" and tok.text == ";":
                return names
            if tok.kind != "ident":
                raise ParseError(f"expected a name or ';', found {tok.text!r}",
                                 tok.line, tok.col)
            names.append(tok.text)

    states = name_list("states")
    init = name_list("init")
    msgs = name_list("msgs")

    state_set = set(states)
    msg_set = set(msgs)
    for name in init:
        if name not in state_set:
            raise ParseError(f"initial state {name!r} not declared")
    if not init:
        raise ParseError("init set may not be empty")

    rules = []
    while True:
        tok = ts.next("rule or '}'")
        if tok.kind == "punct" and tok.text == "}":
            break
        if tok.kind != "ident":
            raise ParseError(f"expected a rule or '}}', found {tok.text!r}", tok.line, tok.col)
        src = tok
        arrow = ts.next("arrow")
        if arrow.kind != "arrow":
            raise ParseError(f"expected an arrow, found {arrow.text!r}", arrow.line, arrow.col)
        dst = ts.next("target state")
        if dst.kind != "ident":
            raise ParseError(f"expected a state name, found {dst.text!r}", dst.line, dst.col)
        ts.expect("punct", ";")

        for endpoint in (src, dst):
            if endpoint.text not in state_set:
                raise ParseError(f"undeclared state {endpoint.text!r}",
                                 endpoint.line, endpoint.col)
        body = arrow.text[1:-2]  # strip leading '-' and trailing '->'
        if body == "tau":
            rules.append(Rule(src.text, TAU, None, dst.text))
        else:
            op, msg = body[0], body[1:]
            if msg not in msg_set:
                raise ParseError(f"undeclared message {msg!r}", arrow.line, arrow.col)
            rules.append(Rule(src.text, BCAST if op == "!" else RECV, msg, dst.text))

    if not ts.at_end():
        tok = ts.peek()
        raise ParseError(f"trailing input after '}}': {tok.text!r}", tok.line, tok.col)
    try:
        return Process(states, msgs, rules, init)
    except ProtocolError as exc:
        raise ParseError(str(exc)) from exc


def format_protocol(process, name="p"):
    """Serialize a process to DSL text; reparsing yields an equal Process."""
    lines = [f"protocol {name} {{"]
    lines.append("  states " + " ".join(sorted(process.states)) + " ;")
    lines.append("  init " + " ".join(sorted(process.init)) + " ;")
    lines.append("  msgs " + " ".join(sorted(process.alphabet)) + " ;")
    for rule in process.rules:
        lines.append(f"  {rule.render()} ;")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- actions and steps ----------------------------------------------------


class Action(NamedTuple):
    """One resolved transition: an internal step or a broadcast with its
    per-receiver outcome."""

    kind: str        # TAU or BCAST
    vertex: str
    rule_index: int
    receivers: tuple = ()  # ((vertex, new_state), ...) sorted by vertex

    def render(self):
        if self.kind == TAU:
            return f"tau {self.vertex} {self.rule_index}"
        inner = " ".join(f"{u}:{q}" for u, q in self.receivers)
        return f"bcast {self.vertex} {self.rule_index} {{{inner}}}"


def parse_action(line):
    """Inverse of Action.render for one trace line."""
    parts = line.split()
    if len(parts) == 3 and parts[0] == "tau":
        return Action(TAU, parts[1], int(parts[2]))
    if len(parts) >= 4 and parts[0] == "bcast":
        blob = " ".join(parts[3:])
        if not (blob.startswith("{") and blob.endswith("}")):
            raise ParseError(f"malformed receiver set in {line!r}")
        receivers = []
        inner = blob[1:-1].strip()
        if inner:
            for item in inner.split():
                u, _, q = item.partition(":")
                if not q:
                    raise ParseError(f"malformed receiver {item!r}")
                receivers.append((u, q))
        return Action(BCAST, parts[1], int(parts[2]), tuple(sorted(receivers)))
    raise ParseError(f"malformed action line {line!r}")


def _check_labels(process, config):
    for v in config.vertices:
        if config.label(v) not in process.states:
            raise ProtocolError(
                f"vertex {v!r} carries label {config.label(v)!r} outside the state set")


def successors(process, config):
    """All one-step successors of a configuration, with their actions.

    Broadcast steps enumerate the full cartesian product of reception
    choices across enabled neighbors.  Deterministic order.
    """
    _check_labels(process, config)
    out = []
    for v in config.vertices:
        state = config.label(v)
        for index, rule in enumerate(process.rules):
            if rule.src != state:
                continue
            if rule.kind == TAU:
                out.append((config.relabeled({v: rule.dst}),
                            Action(TAU, v, index)))
            elif rule.kind == BCAST:
                enabled = [(u, process.receive_targets(config.label(u), rule.msg))
                           for u in config.neighbors(v)]
                enabled = [(u, ts) for u, ts in enabled if ts]
                for choice in itertools.product(*(ts for _, ts in enabled)):
                    chosen = tuple(zip((u for u, _ in enabled), choice))
                    changes = {v: rule.dst}
                    changes.update(chosen)
                    out.append((config.relabeled(changes),
                                Action(BCAST, v, index, chosen)))
    return out


def apply_action(process, config, action):
    """Replay one resolved action; raises if it is not valid here."""
    _check_labels(process, config)
    if not 0 <= action.rule_index < len(process.rules):
        raise ProtocolError(f"rule index {action.rule_index} out of range")
    rule = process.rules[action.rule_index]
    if action.vertex not in config:
        raise ProtocolError(f"no vertex {action.vertex!r} in the configuration")
    if config.label(action.vertex) != rule.src:
        raise ProtocolError(
            f"vertex {action.vertex!r} is in {config.label(action.vertex)!r}, "
            f"rule needs {rule.src!r}")

    if action.kind == TAU:
        if rule.kind != TAU or action.receivers:
            raise ProtocolError("action does not match an internal rule")
        return config.relabeled({action.vertex: rule.dst})

    if action.kind != BCAST or rule.kind != BCAST:
        raise ProtocolError("action does not match a broadcast rule")
    enabled = {u: process.receive_targets(config.label(u), rule.msg)
               for u in config.neighbors(action.vertex)}
    enabled = {u: ts for u, ts in enabled.items() if ts}
    given = dict(action.receivers)
    if set(given) != set(enabled):
        missing = sorted(set(enabled) - set(given))
        extra = sorted(set(given) - set(enabled))
        raise ProtocolError(
            f"receiver set must cover exactly the enabled neighbors "
            f"(missing {missing}, extra {extra})")
    for u, q in given.items():
        if q not in enabled[u]:
            raise ProtocolError(f"{q!r} is not a legal reception outcome at {u!r}")
    changes = {action.vertex: rule.dst}
    changes.update(given)
    return config.relabeled(changes)
