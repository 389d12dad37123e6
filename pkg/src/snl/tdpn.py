"""Transducer-defined Petri nets.

The net's places are all words of a fixed width over a finite alphabet;
its transitions are given symbolically by three transducers: `move`
(arity 2: one pre place, one post place), `fork` (arity 3: one pre, two
post), and `join` (arity 3: two pre, one post).  A triple appearing in
both fork and join denotes two distinct transitions.

Coverability of the final word from one token on the initial word can be
decided two ways: explicitly expanding the net (feasible only for small
widths) and running the backward procedure, or searching forward over
markings while enumerating only the transitions whose pre places currently
hold tokens.  Forks and joins are multiset-true in the symbolic semantics:
a join whose two pre words coincide needs two tokens on that word, and a
fork whose post words coincide adds two.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product

from snl.petri import (
    PetriNet,
    canonical,
    cover_backward,
    Coverable as PetriCoverable,
)
from snl.transducer import Transducer, enumerate_accepted, validate_transducer

Marking = dict[str, int]

Descriptor = tuple[str, tuple[str, ...]]  # ("move"|"fork"|"join", words)


class TdpnParseError(ValueError):
    pass


class TdpnValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Tdpn:
    width: int
    alphabet: tuple[str, ...]
    w_init: str
    w_final: str
    t_move: Transducer
    t_fork: Transducer
    t_join: Transducer

    def size(self) -> int:
        return self.width + self.t_move.size() + self.t_fork.size() + self.t_join.size()


def validate_tdpn(net: Tdpn) -> None:
    problems = []
    if net.width < 1:
        problems.append("width must be positive")
    for a in net.alphabet:
        if not re.fullmatch(r"[0-9A-Za-z]", a):
            problems.append(f"alphabet symbol {a!r} must be a single alphanumeric character")
    for role, w in (("init", net.w_init), ("final", net.w_final)):
        if len(w) != net.width or any(a not in net.alphabet for a in w):
            problems.append(f"{role} word {w!r} is not a width-{net.width} word over the alphabet")
    for name, t, arity in (
        ("move", net.t_move, 2),
        ("fork", net.t_fork, 3),
        ("join", net.t_join, 3),
    ):
        if t.arity != arity:
            problems.append(f"{name} transducer must have arity {arity}, got {t.arity}")
        if tuple(t.alphabet) != tuple(net.alphabet):
            problems.append(f"{name} transducer alphabet differs from the net alphabet")
        report = validate_transducer(t)
        problems.extend(f"{name}: {e}" for e in report.errors)
    if problems:
        raise TdpnValidationError("; ".join(problems))


# ---------------------------------------------------------------------------
# Explicit expansion


class PlaceLimitExceeded(ValueError):
    pass


def expand(net: Tdpn, place_limit: int = 4096) -> PetriNet:
    """Materialize the net: one place per word, one transition per accepted
    tuple.  Because Petri flow is a relation, a degenerate tuple (a fork
    with equal post words, a join with equal pre words) collapses to a
    single arc in the expansion; the symbolic semantics keeps multiset
    counts, so it differs from the expansion exactly on such tuples."""
    validate_tdpn(net)
    n_places = len(net.alphabet) ** net.width
    if n_places > place_limit:
        raise PlaceLimitExceeded(
            f"{n_places} places exceed the limit {place_limit}"
        )
    places = tuple("".join(p) for p in product(net.alphabet, repeat=net.width))
    transitions: list[tuple[str, frozenset[str], frozenset[str]]] = []
    for w1, w2 in enumerate_accepted(net.t_move, net.width):
        transitions.append((f"move_{w1}_{w2}", frozenset({w1}), frozenset({w2})))
    for w1, w2, w3 in enumerate_accepted(net.t_fork, net.width):
        transitions.append((f"fork_{w1}_{w2}_{w3}", frozenset({w1}), frozenset({w2, w3})))
    for w1, w2, w3 in enumerate_accepted(net.t_join, net.width):
        transitions.append((f"join_{w1}_{w2}_{w3}", frozenset({w1, w2}), frozenset({w3})))
    return PetriNet(places, tuple(transitions), net.w_init, net.w_final)


def descriptor_of_transition_id(tid: str) -> Descriptor:
    kind, _, rest = tid.partition("_")
    return (kind, tuple(rest.split("_")))


# ---------------------------------------------------------------------------
# Symbolic firing


def fire_symbolic(net: Tdpn, marking: Marking) -> list[tuple[Descriptor, Marking]]:
    """All single-transition successors of a marking, found without
    expanding the net: enumeration is constrained to tuples whose pre
    coordinates are words currently marked."""
    support = {w for w, c in marking.items() if c > 0}
    out: list[tuple[Descriptor, Marking]] = []

    def moved(delta: list[tuple[str, int]]) -> Marking | None:
        m = dict(marking)
        for w, d in delta:
            c = m.get(w, 0) + d
            if c < 0:
                return None
            if c == 0:
                m.pop(w, None)
            else:
                m[w] = c
        return m

    for w1, w2 in enumerate_accepted(net.t_move, net.width, constraints={0: support}):
        m = moved([(w1, -1), (w2, +1)])
        if m is not None:
            out.append((("move", (w1, w2)), m))
    for w1, w2, w3 in enumerate_accepted(net.t_fork, net.width, constraints={0: support}):
        m = moved([(w1, -1), (w2, +1), (w3, +1)])
        if m is not None:
            out.append((("fork", (w1, w2, w3)), m))
    for w1, w2, w3 in enumerate_accepted(
        net.t_join, net.width, constraints={0: support, 1: support}
    ):
        m = moved([(w1, -1), (w2, -1), (w3, +1)])
        if m is not None:
            out.append((("join", (w1, w2, w3)), m))
    return out


# ---------------------------------------------------------------------------
# Coverability


@dataclass(frozen=True)
class TdpnCoverable:
    witness: tuple[Descriptor, ...]
    mode: str


@dataclass(frozen=True)
class TdpnNotCoverable:
    mode: str
    complete: bool


@dataclass(frozen=True)
class TdpnUnknown:
    mode: str
    reason: str


TdpnVerdict = TdpnCoverable | TdpnNotCoverable | TdpnUnknown


def coverable(
    net: Tdpn,
    mode: str = "backward",
    place_limit: int = 4096,
    max_tokens: int = 64,
    max_markings: int = 1_000_000,
) -> TdpnVerdict:
    """Decide coverability of the final word.

    backward: expand and run the complete backward procedure (refusing the
    expansion yields Unknown).  symbolic: forward search with fire_symbolic
    under token/marking caps; exhausting the capped space reports
    NotCoverable with a completeness flag, blowing the marking budget
    reports Unknown.
    """
    validate_tdpn(net)
    if mode == "backward":
        try:
            expanded = expand(net, place_limit=place_limit)
        except PlaceLimitExceeded:
            return TdpnUnknown(mode, "place_limit")
        verdict = cover_backward(expanded)
        if isinstance(verdict, PetriCoverable):
            return TdpnCoverable(
                tuple(descriptor_of_transition_id(t) for t in verdict.witness), mode
            )
        return TdpnNotCoverable(mode, complete=True)
    if mode != "symbolic":
        raise ValueError(f"unknown mode {mode!r}")

    start = {net.w_init: 1}
    start_c = canonical(start)
    parents: dict[tuple, tuple[Descriptor, tuple] | None] = {start_c: None}
    queue: deque[tuple] = deque([start_c])
    pruned = False
    while queue:
        m_c = queue.popleft()
        marking = dict(m_c)
        if marking.get(net.w_final, 0) >= 1:
            witness: list[Descriptor] = []
            cursor = m_c
            while parents[cursor] is not None:
                desc, prev = parents[cursor]
                witness.append(desc)
                cursor = prev
            witness.reverse()
            return TdpnCoverable(tuple(witness), mode)
        for desc, nxt in fire_symbolic(net, marking):
            nxt_c = canonical(nxt)
            if nxt_c in parents:
                continue
            if sum(nxt.values()) > max_tokens:
                pruned = True
                continue
            if len(parents) >= max_markings:
                return TdpnUnknown(mode, "max_markings")
            parents[nxt_c] = (desc, m_c)
            queue.append(nxt_c)
    return TdpnNotCoverable(mode, complete=not pruned)


# ---------------------------------------------------------------------------
# Text format


_TRANSDUCER_RE = re.compile(
    r"transducer\s+(move|fork|join)\s+arity\s+(\d+)\s*\{([^}]*)\}"
)
_TRANS_LINE_RE = re.compile(r"trans\s+(\w+)\s*->\s*(\w+)\s+on\s*\(([^)]*)\)\Z")


def _parse_transducer_block(kind: str, arity: int, body: str, alphabet: tuple[str, ...]) -> Transducer:
    states: tuple[str, ...] = ()
    initial = None
    finals: frozenset[str] = frozenset()
    transitions: list[tuple[str, tuple[str, ...], str]] = []
    for stmt in body.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        if stmt.startswith("states"):
            states = tuple(stmt.split()[1:])
        elif stmt.startswith("initial"):
            parts = stmt.split()
            if len(parts) != 2:
                raise TdpnParseError(f"bad initial line in {kind}: {stmt!r}")
            initial = parts[1]
        elif stmt.startswith("finals"):
            finals = frozenset(stmt.split()[1:])
        elif m := _TRANS_LINE_RE.match(stmt):
            src, dst, letters = m.groups()
            letter_tuple = tuple(a.strip() for a in letters.split(","))
            if len(letter_tuple) != arity:
                raise TdpnParseError(f"{kind}: {stmt!r} has {len(letter_tuple)} letters, arity {arity}")
            transitions.append((src, letter_tuple, dst))
        else:
            raise TdpnParseError(f"unrecognized line in {kind} block: {stmt!r}")
    if initial is None:
        raise TdpnParseError(f"{kind} block has no initial state")
    return Transducer(arity, alphabet, states, initial, finals, tuple(transitions))


def parse_tdpn(text: str) -> Tdpn:
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    header = {}
    for key, pattern in (
        ("width", r"width\s+(\d+)\s*;"),
        ("alphabet", r"alphabet\s+([^;]+);"),
        ("init", r"init\s+(\w+)\s*;"),
        ("final", r"final\s+(\w+)\s*;"),
    ):
        m = re.search(pattern, text)
        if not m:
            raise TdpnParseError(f"missing {key} declaration")
        header[key] = m.group(1)
    width = int(header["width"])
    alphabet = tuple(header["alphabet"].split())
    blocks = {}
    for m in _TRANSDUCER_RE.finditer(text):
        kind, arity, body = m.group(1), int(m.group(2)), m.group(3)
        blocks[kind] = _parse_transducer_block(kind, arity, body, alphabet)
    for kind in ("move", "fork", "join"):
        if kind not in blocks:
            raise TdpnParseError(f"missing transducer block {kind!r}")
    net = Tdpn(
        width, alphabet, header["init"], header["final"],
        blocks["move"], blocks["fork"], blocks["join"],
    )
    validate_tdpn(net)
    return net


def _serialize_transducer_block(kind: str, t: Transducer) -> list[str]:
    lines = [f"transducer {kind} arity {t.arity} {{"]
    lines.append(f"  states {' '.join(t.states)};")
    lines.append(f"  initial {t.initial};")
    lines.append(f"  finals{''.join(' ' + f for f in sorted(t.finals))};")
    for src, letters, dst in t.transitions:
        lines.append(f"  trans {src} -> {dst} on ({','.join(letters)});")
    lines.append("}")
    return lines


def serialize_tdpn(net: Tdpn) -> str:
    lines = [
        f"width {net.width};",
        f"alphabet {' '.join(net.alphabet)};",
        f"init {net.w_init};",
        f"final {net.w_final};",
    ]
    lines.extend(_serialize_transducer_block("move", net.t_move))
    lines.extend(_serialize_transducer_block("fork", net.t_fork))
    lines.extend(_serialize_transducer_block("join", net.t_join))
    return "\n".join(lines) + "\n"
