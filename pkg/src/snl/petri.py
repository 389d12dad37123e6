"""Petri nets with relation flow and coverability procedures.

The flow is a relation: a transition consumes at most one token per place
(its pre set) and produces at most one per place (its post set).  Markings
are multisets of places.  Coverability asks whether, starting from one
token on the initial place, some reachable marking dominates the target
(by default one token on the final place).

Two deciders are provided: a complete backward procedure computing the
antichain basis of markings from which the target is coverable, and a
forward breadth-first search bounded by token and marking caps, useful as
an independent oracle and as a witness finder.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

Marking = dict[str, int]
CanonMarking = tuple[tuple[str, int], ...]


class PetriParseError(ValueError):
    pass


class PetriValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[tuple[str, frozenset[str], frozenset[str]], ...]
    initial: str
    final: str

    def size(self) -> int:
        return len(self.places) + len(self.transitions)


def validate_petri(net: PetriNet) -> None:
    problems = []
    place_set = set(net.places)
    if len(place_set) != len(net.places):
        problems.append("duplicate places")
    ids = [tid for tid, _, _ in net.transitions]
    if len(set(ids)) != len(ids):
        problems.append("duplicate transition ids")
    for tid, pre, post in net.transitions:
        for p in pre | post:
            if p not in place_set:
                problems.append(f"transition {tid!r} uses undeclared place {p!r}")
    for role, p in (("initial", net.initial), ("final", net.final)):
        if p not in place_set:
            problems.append(f"{role} place {p!r} not declared")
    if problems:
        raise PetriValidationError("; ".join(problems))


def canonical(marking: Marking) -> CanonMarking:
    return tuple(sorted((p, c) for p, c in marking.items() if c > 0))


def from_canonical(canon: CanonMarking) -> Marking:
    return dict(canon)


def initial_marking(net: PetriNet) -> Marking:
    return {net.initial: 1}


def target_marking(net: PetriNet) -> Marking:
    return {net.final: 1}


def covers(marking: Marking, target: Marking) -> bool:
    return all(marking.get(p, 0) >= c for p, c in target.items())


def enabled(net: PetriNet, marking: Marking, pre: frozenset[str]) -> bool:
    return all(marking.get(p, 0) >= 1 for p in pre)


def fire(net: PetriNet, marking: Marking, tid: str) -> Marking | None:
    for t, pre, post in net.transitions:
        if t == tid:
            if not enabled(net, marking, pre):
                return None
            out = dict(marking)
            for p in pre:
                out[p] -= 1
                if out[p] == 0:
                    del out[p]
            for p in post:
                out[p] = out.get(p, 0) + 1
            return out
    raise KeyError(tid)


def total_tokens(marking: Marking) -> int:
    return sum(marking.values())


# ---------------------------------------------------------------------------
# Backward coverability


@dataclass(frozen=True)
class Coverable:
    witness: tuple[str, ...]
    basis_size: int


@dataclass(frozen=True)
class NotCoverable:
    basis_size: int


BackwardVerdict = Coverable | NotCoverable


def _dominates(big: CanonMarking, small: CanonMarking) -> bool:
    b = dict(big)
    return all(b.get(p, 0) >= c for p, c in small)


def cover_backward(net: PetriNet, target: Marking | None = None) -> BackwardVerdict:
    """Complete backward coverability via a minimal-basis fixpoint.

    Maintains an antichain basis of markings from which the target is
    coverable.  For each basis element m and transition t the predecessor
    requirement takes, per place, the larger of t's pre and what m still
    needs after t's effect; new requirements dominated by the basis are
    discarded, and basis elements dominated by a new requirement are
    removed.  Markings over a fixed place set are well-quasi-ordered, so no
    infinite antichain extension exists and the loop terminates.

    When some basis element is dominated by the initial marking, the chain
    of parent pointers replays into a concrete firing sequence, which is
    verified before being returned.
    """
    validate_petri(net)
    if target is None:
        target = target_marking(net)
    target_c = canonical(target)
    basis: set[CanonMarking] = {target_c}
    parents: dict[CanonMarking, tuple[str, CanonMarking] | None] = {target_c: None}
    frontier: deque[CanonMarking] = deque([target_c])
    while frontier:
        m_c = frontier.popleft()
        if m_c not in basis:
            continue  # removed as dominated after being queued
        m = dict(m_c)
        for tid, pre, post in net.transitions:
            req: Marking = {}
            for p in set(m) | pre:
                need = max(
                    (1 if p in pre else 0),
                    m.get(p, 0) - (1 if p in post else 0) + (1 if p in pre else 0),
                )
                if need > 0:
                    req[p] = need
            req_c = canonical(req)
            if any(_dominates(req_c, b) for b in basis):
                continue
            basis = {b for b in basis if not _dominates(b, req_c)}
            basis.add(req_c)
            if req_c not in parents:
                parents[req_c] = (tid, m_c)
            frontier.append(req_c)

    start = initial_marking(net)
    start_c = canonical(start)
    hits = sorted(b for b in basis if _dominates(start_c, b))
    if not hits:
        return NotCoverable(basis_size=len(basis))
    witness: list[str] = []
    cursor = hits[0]
    marking = start
    while parents[cursor] is not None:
        tid, nxt = parents[cursor]
        fired = fire(net, marking, tid)
        assert fired is not None, "backward witness replay hit a disabled transition"
        witness.append(tid)
        marking = fired
        cursor = nxt
    assert covers(marking, target), "backward witness replay does not cover the target"
    return Coverable(witness=tuple(witness), basis_size=len(basis))


# ---------------------------------------------------------------------------
# Forward coverability with caps


@dataclass(frozen=True)
class ForwardCoverable:
    witness: tuple[str, ...]
    markings_explored: int


@dataclass(frozen=True)
class NotCoverableWithinCaps:
    markings_explored: int
    complete: bool  # True when no successor was pruned by the token cap


@dataclass(frozen=True)
class ForwardUnknown:
    reason: str
    markings_explored: int


ForwardVerdict = ForwardCoverable | NotCoverableWithinCaps | ForwardUnknown


def cover_forward_bfs(
    net: PetriNet,
    target: Marking | None = None,
    max_tokens: int = 64,
    max_markings: int = 1_000_000,
) -> ForwardVerdict:
    """Forward breadth-first coverability.

    Markings above the token cap are not expanded (recorded in the
    `complete` flag); exhausting the capped space yields
    NotCoverableWithinCaps, and overrunning the marking budget aborts to
    Unknown.
    """
    validate_petri(net)
    if target is None:
        target = target_marking(net)
    start = initial_marking(net)
    start_c = canonical(start)
    parents: dict[CanonMarking, tuple[str, CanonMarking] | None] = {start_c: None}
    queue: deque[CanonMarking] = deque([start_c])
    pruned = False
    while queue:
        m_c = queue.popleft()
        marking = dict(m_c)
        if covers(marking, target):
            witness: list[str] = []
            cursor: CanonMarking | None = m_c
            while parents[cursor] is not None:
                tid, prev = parents[cursor]
                witness.append(tid)
                cursor = prev
            witness.reverse()
            return ForwardCoverable(tuple(witness), len(parents))
        for tid, pre, post in net.transitions:
            if not enabled(net, marking, pre):
                continue
            nxt = fire(net, marking, tid)
            nxt_c = canonical(nxt)
            if nxt_c in parents:
                continue
            if total_tokens(nxt) > max_tokens:
                pruned = True
                continue
            if len(parents) >= max_markings:
                return ForwardUnknown("max_markings", len(parents))
            parents[nxt_c] = (tid, m_c)
            queue.append(nxt_c)
    return NotCoverableWithinCaps(len(parents), complete=not pruned)


# ---------------------------------------------------------------------------
# Text format


_PLACE_RE = re.compile(r"place\s+(\w+)\Z")
_TRANS_RE = re.compile(r"trans\s+(\w+)\s+pre\s*\{([^}]*)\}\s*post\s*\{([^}]*)\}\Z")
_INITIAL_RE = re.compile(r"initial\s+(\w+)\Z")
_FINAL_RE = re.compile(r"final\s+(\w+)\Z")


def parse_pnet(text: str) -> PetriNet:
    places: list[str] = []
    transitions: list[tuple[str, frozenset[str], frozenset[str]]] = []
    initial = final = None
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        if m := _PLACE_RE.match(stmt):
            places.append(m.group(1))
        elif m := _TRANS_RE.match(stmt):
            tid, pre, post = m.groups()
            transitions.append((tid, frozenset(pre.split()), frozenset(post.split())))
        elif m := _INITIAL_RE.match(stmt):
            initial = m.group(1)
        elif m := _FINAL_RE.match(stmt):
            final = m.group(1)
        else:
            raise PetriParseError(f"unrecognized statement {stmt!r}")
    if initial is None or final is None:
        raise PetriParseError("missing initial or final place")
    net = PetriNet(tuple(places), tuple(transitions), initial, final)
    validate_petri(net)
    return net


def serialize_pnet(net: PetriNet) -> str:
    lines = [f"place {p};" for p in net.places]
    for tid, pre, post in net.transitions:
        lines.append(
            f"trans {tid} pre {{{' '.join(sorted(pre))}}} post {{{' '.join(sorted(post))}}};"
        )
    lines.append(f"initial {net.initial};")
    lines.append(f"final {net.final};")
    return "\n".join(lines) + "\n"
