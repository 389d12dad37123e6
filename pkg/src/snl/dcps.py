"""Dynamic networks of concurrent pushdown systems under context-switch budgets.

A system has one global state shared by all threads; each thread is a stack
over a common alphabet together with a context-switch count.  One thread is
active at a time.  Rules rewrite the active thread's top symbol (pushing at
most two symbols) and may spawn one new thread; a context switch parks the
active thread, incrementing its count, and activates a pool thread whose
count is within the budget K.  Spawn counting is a global exploration flag:
spawned threads start at count 0 ("noinherit") or at the spawner's count
plus one ("inherit").

Kill extension: the alphabet may carry a designated subset of kill symbols.
A kill rule fires when the active thread's stack is exactly one kill symbol;
it removes one pool thread whose stack is exactly the designated victim
symbol (the victim's count must be within budget), resets the active
thread's count to zero, and either keeps or pops the active top.
Well-formedness keeps every kill-symbol-topped stack a singleton: rules on
kill-symbol tops push at most one kill symbol, rules on regular tops push no
kill symbols (spawning kill symbols is unrestricted).

`desugar_kill` compiles kill rules away: four plain rules and three fresh
states per kill rule, plus one marker symbol shared by all gadgets.
`compile_to_inheritance` reduces plain-semantics state reachability at
budget K to inheriting-semantics reachability of a shifted target at budget
K+2; the construction itself does not depend on K.

Threads whose stack has emptied are inert: no rule applies to them and kills
cannot target them, but they may still be switched in and out.  Canonical
configurations keep at most one empty-stack thread per switch count, which
preserves state reachability while keeping pools finite.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass

Stack = tuple[str, ...]
Thread = tuple[Stack, int]
Event = tuple

SEMANTICS = ("noinherit", "inherit")

DEFAULT_MAX_THREADS = 32
DEFAULT_MAX_STACK = 64
DEFAULT_MAX_CONFIGS = 10**6


class DcpsParseError(ValueError):
    pass


class DcpsValidationError(ValueError):
    pass


@dataclass(frozen=True)
class DcpsRule:
    """Rewrite the active top symbol; optionally spawn one thread."""

    state: str
    top: str
    new_state: str
    push: tuple[str, ...] = ()
    spawn: str | None = None


@dataclass(frozen=True)
class KillRule:
    """Remove one pool thread whose stack is exactly (victim,).

    Applies only when the active stack is exactly (top,); the active
    thread's switch count resets to zero.  keep=True leaves the top in
    place, keep=False pops it.
    """

    state: str
    top: str
    new_state: str
    keep: bool
    victim: str


@dataclass(frozen=True)
class Dcps:
    states: tuple[str, ...]
    symbols: tuple[str, ...]
    initial_state: str
    initial_symbol: str
    rules: tuple[DcpsRule, ...]
    kills: tuple[KillRule, ...] = ()
    kill_syms: frozenset[str] = frozenset()

    def size(self) -> int:
        return len(self.states) + len(self.symbols) + len(self.rules) + len(self.kills)


def make_dcps(
    initial_state: str,
    initial_symbol: str,
    rules: tuple[DcpsRule, ...] = (),
    kills: tuple[KillRule, ...] = (),
    kill_syms: frozenset[str] = frozenset(),
) -> Dcps:
    """Build a system with states/symbols derived in mention order.

    The text format carries no declaration lines, so the state and symbol
    tuples are always reconstructed the same way: initial first, then rule
    mentions in declaration order, then any kill symbols never mentioned by
    a rule (sorted).  Compilers build their outputs through this factory so
    parse(serialize(x)) is the identity.
    """
    rules = tuple(rules)
    kills = tuple(kills)
    kill_syms = frozenset(kill_syms)
    states: dict[str, None] = {initial_state: None}
    symbols: dict[str, None] = {initial_symbol: None}
    for r in rules:
        states.setdefault(r.state)
        states.setdefault(r.new_state)
        symbols.setdefault(r.top)
        for s in r.push:
            symbols.setdefault(s)
        if r.spawn is not None:
            symbols.setdefault(r.spawn)
    for k in kills:
        states.setdefault(k.state)
        states.setdefault(k.new_state)
        symbols.setdefault(k.top)
        symbols.setdefault(k.victim)
    for s in sorted(kill_syms):
        symbols.setdefault(s)
    return Dcps(
        tuple(states), tuple(symbols), initial_state, initial_symbol, rules, kills, kill_syms
    )


_NAME_RE = re.compile(r"\w+\Z")


def validate_dcps(system: Dcps) -> None:
    problems = []
    state_set = set(system.states)
    sym_set = set(system.symbols)
    if len(state_set) != len(system.states):
        problems.append("duplicate states")
    if len(sym_set) != len(system.symbols):
        problems.append("duplicate symbols")
    for name in system.states + system.symbols:
        if not _NAME_RE.match(name):
            problems.append(f"name {name!r} is not a word identifier")
    if system.initial_state not in state_set:
        problems.append(f"initial state {system.initial_state!r} not declared")
    if system.initial_symbol not in sym_set:
        problems.append(f"initial symbol {system.initial_symbol!r} not declared")
    if not system.kill_syms <= sym_set:
        extra = sorted(system.kill_syms - sym_set)
        problems.append(f"kill symbols {extra} not declared")
    for i, r in enumerate(system.rules):
        where = f"rule {i}"
        if len(r.push) > 2:
            problems.append(f"{where}: pushes {len(r.push)} symbols (limit 2)")
        for role, name in (("state", r.state), ("target state", r.new_state)):
            if name not in state_set:
                problems.append(f"{where}: {role} {name!r} not declared")
        mentioned = (r.top,) + r.push + ((r.spawn,) if r.spawn is not None else ())
        for s in mentioned:
            if s not in sym_set:
                problems.append(f"{where}: symbol {s!r} not declared")
        if r.top in system.kill_syms:
            # kill-topped stacks must stay singletons
            if len(r.push) > 1 or any(s not in system.kill_syms for s in r.push):
                problems.append(
                    f"{where}: kill-symbol top may push at most one kill symbol"
                )
        elif any(s in system.kill_syms for s in r.push):
            problems.append(f"{where}: regular top must not push kill symbols")
    for i, k in enumerate(system.kills):
        where = f"kill rule {i}"
        for role, name in (("state", k.state), ("target state", k.new_state)):
            if name not in state_set:
                problems.append(f"{where}: {role} {name!r} not declared")
        for role, s in (("top", k.top), ("victim", k.victim)):
            if s not in system.kill_syms:
                problems.append(f"{where}: {role} {s!r} is not a kill symbol")
    if problems:
        raise DcpsValidationError("; ".join(problems))


# ---------------------------------------------------------------------------
# Operational semantics


@dataclass(frozen=True)
class DcpsConfig:
    """Global state, active thread, and the inactive pool (canonical)."""

    state: str
    active: Thread
    pool: tuple[Thread, ...]


def _canon_pool(entries) -> tuple[Thread, ...]:
    live = []
    corpse_counts = set()
    for w, j in entries:
        if w:
            live.append((w, j))
        else:
            corpse_counts.add(j)
    live.extend(((), j) for j in corpse_counts)
    return tuple(sorted(live))


def make_config(state: str, active: Thread, pool) -> DcpsConfig:
    return DcpsConfig(state, active, _canon_pool(pool))


def initial_config(system: Dcps) -> DcpsConfig:
    return DcpsConfig(system.initial_state, ((system.initial_symbol,), 0), ())


def _build_index(system: Dcps):
    """Bucket rules and kill rules by (state, top), declaration order kept."""
    rule_buckets: dict[tuple[str, str], list[tuple[int, DcpsRule]]] = {}
    kill_buckets: dict[tuple[str, str], list[tuple[int, KillRule]]] = {}
    for idx, r in enumerate(system.rules):
        rule_buckets.setdefault((r.state, r.top), []).append((idx, r))
    for idx, k in enumerate(system.kills):
        kill_buckets.setdefault((k.state, k.top), []).append((idx, k))
    return rule_buckets, kill_buckets


def _rule_step(r: DcpsRule, config: DcpsConfig, semantics: str) -> DcpsConfig:
    stack, count = config.active
    pool = config.pool
    if r.spawn is not None:
        born = count + 1 if semantics == "inherit" else 0
        pool = pool + (((r.spawn,), born),)
    return DcpsConfig(r.new_state, (r.push + stack[1:], count), _canon_pool(pool))


def _kill_step(k: KillRule, pos: int, config: DcpsConfig) -> DcpsConfig:
    pool = config.pool[:pos] + config.pool[pos + 1 :]
    return DcpsConfig(k.new_state, ((k.top,) if k.keep else (), 0), _canon_pool(pool))


def _switch_step(pos: int, entry: Thread, config: DcpsConfig) -> DcpsConfig:
    parked = (config.active[0], config.active[1] + 1)
    pool = config.pool[:pos] + config.pool[pos + 1 :] + (parked,)
    return DcpsConfig(config.state, entry, _canon_pool(pool))


def _successors_indexed(
    index, config: DcpsConfig, budget: int, semantics: str, skip_corpse_switch: bool = False
) -> list[tuple[Event, DcpsConfig]]:
    rule_buckets, kill_buckets = index
    out: list[tuple[Event, DcpsConfig]] = []
    stack, count = config.active
    if stack:
        top = stack[0]
        for idx, r in rule_buckets.get((config.state, top), ()):
            out.append((("rule", idx), _rule_step(r, config, semantics)))
        if len(stack) == 1:
            for idx, k in kill_buckets.get((config.state, top), ()):
                seen_counts = set()
                for pos, (w, j) in enumerate(config.pool):
                    if w != (k.victim,) or j > budget or j in seen_counts:
                        continue
                    seen_counts.add(j)
                    out.append((("kill", idx, j), _kill_step(k, pos, config)))
    seen_entries = set()
    for pos, entry in enumerate(config.pool):
        if entry[1] > budget or entry in seen_entries:
            continue
        if skip_corpse_switch and not entry[0]:
            continue
        seen_entries.add(entry)
        out.append((("switch", entry), _switch_step(pos, entry, config)))
    return out


def _apply_event(
    system: Dcps, config: DcpsConfig, event: Event, budget: int, semantics: str
) -> DcpsConfig | None:
    """The successor a single event denotes, or None if it does not apply."""
    stack, count = config.active
    kind = event[0] if isinstance(event, tuple) and event else None
    if kind == "rule" and len(event) == 2:
        idx = event[1]
        if not stack or not isinstance(idx, int) or not 0 <= idx < len(system.rules):
            return None
        r = system.rules[idx]
        if r.state != config.state or r.top != stack[0]:
            return None
        return _rule_step(r, config, semantics)
    if kind == "kill" and len(event) == 3:
        idx, j = event[1], event[2]
        if len(stack) != 1 or not isinstance(idx, int) or not 0 <= idx < len(system.kills):
            return None
        k = system.kills[idx]
        if k.state != config.state or k.top != stack[0] or j > budget:
            return None
        for pos, entry in enumerate(config.pool):
            if entry == ((k.victim,), j):
                return _kill_step(k, pos, config)
        return None
    if kind == "switch" and len(event) == 2:
        entry = event[1]
        if not (isinstance(entry, tuple) and len(entry) == 2) or entry[1] > budget:
            return None
        for pos, candidate in enumerate(config.pool):
            if candidate == entry:
                return _switch_step(pos, entry, config)
        return None
    return None


def successors(
    system: Dcps, config: DcpsConfig, budget: int, semantics: str = "noinherit"
) -> list[tuple[Event, DcpsConfig]]:
    """All one-step successors, each labeled with a replayable event.

    Events: ("rule", index), ("kill", index, victim_count),
    ("switch", (stack, count)).  Successor order is rule declaration order,
    then kill declaration order, then pool order for switches, so searches
    are deterministic.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    return _successors_indexed(_build_index(system), config, budget, semantics)


def replay_witness(
    system: Dcps, witness, budget: int, semantics: str = "noinherit"
) -> list[DcpsConfig]:
    """Apply a witness event sequence from the initial configuration."""
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    configs = [initial_config(system)]
    for event in witness:
        nxt = _apply_event(system, configs[-1], event, budget, semantics)
        if nxt is None:
            raise ValueError(f"witness event {event!r} does not apply at step {len(configs) - 1}")
        configs.append(nxt)
    return configs


def _live_threads(config: DcpsConfig) -> int:
    n = 1 if config.active[0] else 0
    return n + sum(1 for w, _ in config.pool if w)


def _deepest_stack(config: DcpsConfig) -> int:
    depth = len(config.active[0])
    for w, _ in config.pool:
        depth = max(depth, len(w))
    return depth


@dataclass(frozen=True)
class DcpsReachable:
    witness: tuple[Event, ...]
    configs_explored: int


@dataclass(frozen=True)
class DcpsNo:
    configs_explored: int


@dataclass(frozen=True)
class DcpsUnknown:
    reason: str
    configs_explored: int


def _resolve_max_configs(max_configs: int | None) -> int:
    if max_configs is not None:
        return max_configs
    raw = os.environ.get("SNL_MAX_CONFIGS")
    if raw is None:
        return DEFAULT_MAX_CONFIGS
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SNL_MAX_CONFIGS must be an integer, got {raw!r}") from None


def reach_state(
    system: Dcps,
    target: str,
    budget: int,
    *,
    max_threads: int = DEFAULT_MAX_THREADS,
    max_stack: int = DEFAULT_MAX_STACK,
    max_configs: int | None = None,
    semantics: str = "noinherit",
):
    """Breadth-first search for a configuration whose global state is target.

    Returns DcpsReachable with a shortest event witness (verified by
    replay), DcpsNo when the canonical configuration space was exhausted
    with no cap ever pruning a successor, or DcpsUnknown naming every cap
    that interfered (comma-separated when several did).

    The search never switches in an empty-stack thread: such a step keeps
    the global state and can only be followed by switching out again, so
    dropping these stutters preserves the reachable state set exactly while
    avoiding corpse-count churn.
    """
    validate_dcps(system)
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    max_configs = _resolve_max_configs(max_configs)
    index = _build_index(system)
    start = initial_config(system)
    visited = {start}
    parents: dict[DcpsConfig, tuple[DcpsConfig, Event] | None] = {start: None}
    queue = deque([start])
    tripped: set[str] = set()
    explored = 0
    found = None
    while queue:
        if explored >= max_configs:
            tripped.add("max_configs")
            break
        config = queue.popleft()
        explored += 1
        if config.state == target:
            found = config
            break
        for event, nxt in _successors_indexed(
            index, config, budget, semantics, skip_corpse_switch=True
        ):
            if nxt in visited:
                continue
            if _live_threads(nxt) > max_threads:
                tripped.add("max_threads")
                continue
            if _deepest_stack(nxt) > max_stack:
                tripped.add("max_stack")
                continue
            visited.add(nxt)
            parents[nxt] = (config, event)
            queue.append(nxt)
    if found is not None:
        events = []
        cursor = found
        while parents[cursor] is not None:
            prev, event = parents[cursor]
            events.append(event)
            cursor = prev
        events.reverse()
        witness = tuple(events)
        final = replay_witness(system, witness, budget, semantics)[-1]
        assert final.state == target
        return DcpsReachable(witness, explored)
    if tripped:
        return DcpsUnknown(",".join(sorted(tripped)), explored)
    return DcpsNo(explored)


def reachable_states(
    system: Dcps,
    budget: int,
    *,
    max_threads: int = DEFAULT_MAX_THREADS,
    max_stack: int = DEFAULT_MAX_STACK,
    max_configs: int | None = None,
    semantics: str = "noinherit",
) -> tuple[frozenset[str], bool]:
    """All global states seen by the capped exploration, plus a complete flag.

    complete=True means no cap pruned anything, so the set is exactly the
    K-bounded reachable state set.
    """
    validate_dcps(system)
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    max_configs = _resolve_max_configs(max_configs)
    index = _build_index(system)
    start = initial_config(system)
    visited = {start}
    queue = deque([start])
    states = {start.state}
    tripped = False
    explored = 0
    while queue:
        if explored >= max_configs:
            tripped = True
            break
        config = queue.popleft()
        explored += 1
        for _, nxt in _successors_indexed(
            index, config, budget, semantics, skip_corpse_switch=True
        ):
            if nxt in visited:
                continue
            if _live_threads(nxt) > max_threads or _deepest_stack(nxt) > max_stack:
                tripped = True
                continue
            visited.add(nxt)
            states.add(nxt.state)
            queue.append(nxt)
    return frozenset(states), not tripped


# ---------------------------------------------------------------------------
# Kill desugaring


def _fresh(taken: set[str], base: str) -> str:
    name = base
    n = 2
    while name in taken:
        name = f"{base}{n}"
        n += 1
    taken.add(name)
    return name


def desugar_kill(system: Dcps) -> Dcps:
    """Compile kill rules into plain rules.

    Per kill rule g|t -> g'|(keep/pop) kill v, three fresh states and four
    rules: mark the moment by spawning a shared marker thread, pop the top
    (the active thread goes inert), have the victim pop itself once
    activated, then resume from the marker thread at g' with switch count
    zero.  Stranded partial gadgets only ever leave inert threads behind,
    so the reachable global states within the original state set are
    unchanged.
    """
    validate_dcps(system)
    taken = set(system.states) | set(system.symbols)
    marker = _fresh(taken, "spawnmark")
    rules = list(system.rules)
    for i, k in enumerate(system.kills):
        g_spawn = _fresh(taken, f"kspawn{i}")
        g_kill = _fresh(taken, f"kkill{i}")
        g_return = _fresh(taken, f"kreturn{i}")
        rules.append(DcpsRule(k.state, k.top, g_spawn, (k.top,), marker))
        rules.append(DcpsRule(g_spawn, k.top, g_kill, ()))
        rules.append(DcpsRule(g_kill, k.victim, g_return, ()))
        rules.append(DcpsRule(g_return, marker, k.new_state, (k.top,) if k.keep else ()))
    return make_dcps(system.initial_state, system.initial_symbol, tuple(rules))


# ---------------------------------------------------------------------------
# Inheritance reduction


def _inheritance_namer(system: Dcps):
    """Deterministic fresh names for every construction ingredient."""
    taken = set(system.states) | set(system.symbols)
    names: dict[str, str] = {}

    def mint(base: str, pretty: str) -> str:
        name = _fresh(taken, base)
        names[name] = pretty
        return name

    boot = mint("gboot", "(boot)")
    run = {g: mint(f"run_{g}", f"({g},0)") for g in system.states}
    mid = {g: mint(f"mid_{g}", f"({g},1)") for g in system.states}
    swp = {g: mint(f"swp_{g}", f"({g},2)") for g in system.states}
    hand = {
        (g, y): mint(f"hand_{g}_{y}", f"({g},{y})")
        for g in system.states
        for y in system.symbols
    }
    boot_sym = mint("yboot", "(boot symbol)")
    dorm = mint("ydorm", "(dormant)")
    step = mint("ystep", "(step)")
    bot = mint("ybot", "(bottom)")
    cap = mint("ytop", "(lock)")
    bar = {y: mint(f"bar_{y}", f"({y} bar)") for y in system.symbols}
    return boot, run, mid, swp, hand, boot_sym, dorm, step, bot, cap, bar, names


def compile_to_inheritance(system: Dcps, g_target: str) -> tuple[Dcps, str]:
    """Reduce plain-spawn reachability to inheriting-spawn reachability.

    g_target is reachable in `system` under "noinherit" at budget K iff the
    returned target state is reachable in the returned system under
    "inherit" at budget K+2.  Requires a plain system (no kill rules).

    The compiled system pre-spawns dormant threads during a boot phase, then
    simulates the original one thread at a time: a simulated stack v lives
    as lock.v.bottom on some compiled thread; original spawns park a barred
    note that a later handoff turns into a dormant thread adopting the
    spawned symbol.  All simulated threads therefore descend from the boot
    thread, which is what makes inherited counts track the original counts
    shifted by one.
    """
    validate_dcps(system)
    if system.kills or system.kill_syms:
        raise DcpsValidationError("inheritance reduction expects a plain system (desugar kills first)")
    if g_target not in set(system.states):
        raise DcpsValidationError(f"target state {g_target!r} not declared")
    boot, run, mid, swp, hand, boot_sym, dorm, step, bot, cap, bar, _ = _inheritance_namer(
        system
    )
    rules = [
        DcpsRule(boot, boot_sym, boot, (boot_sym,), dorm),
        DcpsRule(boot, boot_sym, boot, (), bot),
        DcpsRule(boot, bot, run[system.initial_state], (system.initial_symbol, bot)),
    ]
    for r in system.rules:
        spawned = None if r.spawn is None else bar[r.spawn]
        rules.append(DcpsRule(run[r.state], r.top, run[r.new_state], r.push, spawned))
    for g in system.states:
        for y in system.symbols + (bot,):
            rules.append(DcpsRule(run[g], y, mid[g], (cap, y), step))
    for g in system.states:
        rules.append(DcpsRule(mid[g], step, swp[g], ()))
    for g in system.states:
        rules.append(DcpsRule(swp[g], cap, run[g], ()))
    for g in system.states:
        for y in system.symbols:
            rules.append(DcpsRule(swp[g], bar[y], hand[(g, y)], ()))
    for g in system.states:
        for y in system.symbols:
            rules.append(DcpsRule(hand[(g, y)], dorm, run[g], (y, bot)))
    compiled = make_dcps(boot, boot_sym, tuple(rules))
    return compiled, swp[g_target]


def inheritance_names(system: Dcps) -> dict[str, str]:
    """Mangled-name to readable-name mapping for compile_to_inheritance."""
    return _inheritance_namer(system)[-1]


def inheritance_rule_count(n_states: int, n_symbols: int, n_rules: int) -> int:
    """Closed form for the compiled rule count.

    3 boot rules, one rule per original rule, lock rules over G x (Gamma and
    bottom), one unlock and one swap-out rule per state, and handoff pairs
    over G x Gamma twice.
    """
    return 3 + n_rules + n_states * (n_symbols + 1) + 2 * n_states + 2 * n_states * n_symbols


# ---------------------------------------------------------------------------
# Text format

_STATE_RE = re.compile(r"state\s+g0\s+(\w+)\s*;\Z")
_STACKINIT_RE = re.compile(r"stackinit\s+(\w+)\s*;\Z")
_KILLSYMS_RE = re.compile(r"killsyms\s*\{([^}]*)\}\s*;\Z")
_RULE_RE = re.compile(
    r"rule\s+(\w+)\s*\|\s*(\w+)\s*->\s*(\w+)\s*\|\s*([\w.]+)(?:\s+spawn\s+(\w+))?\s*;\Z"
)
_KILL_RE = re.compile(
    r"kill\s+(\w+)\s*\|\s*(\w+)\s*->\s*(\w+)\s*\|\s*(keep|pop)\s+kill\s+(\w+)\s*;\Z"
)


def _parse_push(word: str, lineno: int) -> tuple[str, ...]:
    if word == "eps":
        return ()
    parts = word.split(".")
    if not all(_NAME_RE.match(p) for p in parts):
        raise DcpsParseError(f"line {lineno}: bad push word {word!r}")
    return tuple(parts)


def parse_dcps(text: str) -> Dcps:
    initial_state = None
    initial_symbol = None
    kill_syms: frozenset[str] = frozenset()
    saw_killsyms = False
    rules: list[DcpsRule] = []
    kills: list[KillRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _STATE_RE.match(line):
            if initial_state is not None:
                raise DcpsParseError(f"line {lineno}: duplicate state line")
            initial_state = m.group(1)
        elif m := _STACKINIT_RE.match(line):
            if initial_symbol is not None:
                raise DcpsParseError(f"line {lineno}: duplicate stackinit line")
            initial_symbol = m.group(1)
        elif m := _KILLSYMS_RE.match(line):
            if saw_killsyms:
                raise DcpsParseError(f"line {lineno}: duplicate killsyms line")
            saw_killsyms = True
            names = m.group(1).split()
            if not all(_NAME_RE.match(n) for n in names):
                raise DcpsParseError(f"line {lineno}: bad kill symbol name")
            kill_syms = frozenset(names)
        elif m := _RULE_RE.match(line):
            state, top, new_state, word, spawn = m.groups()
            rules.append(DcpsRule(state, top, new_state, _parse_push(word, lineno), spawn))
        elif m := _KILL_RE.match(line):
            state, top, new_state, kind, victim = m.groups()
            kills.append(KillRule(state, top, new_state, kind == "keep", victim))
        else:
            raise DcpsParseError(f"line {lineno}: cannot parse {line!r}")
    if initial_state is None:
        raise DcpsParseError("missing state g0 line")
    if initial_symbol is None:
        raise DcpsParseError("missing stackinit line")
    system = make_dcps(initial_state, initial_symbol, tuple(rules), tuple(kills), kill_syms)
    try:
        validate_dcps(system)
    except DcpsValidationError as exc:
        raise DcpsParseError(str(exc)) from None
    return system


def serialize_dcps(system: Dcps) -> str:
    lines = [f"state g0 {system.initial_state};", f"stackinit {system.initial_symbol};"]
    if system.kill_syms:
        lines.append("killsyms { " + " ".join(sorted(system.kill_syms)) + " };")
    for r in system.rules:
        word = ".".join(r.push) if r.push else "eps"
        spawn = f" spawn {r.spawn}" if r.spawn is not None else ""
        lines.append(f"rule {r.state}|{r.top} -> {r.new_state}|{word}{spawn};")
    for k in system.kills:
        kind = "keep" if k.keep else "pop"
        lines.append(f"kill {k.state}|{k.top} -> {k.new_state}|{kind} kill {k.victim};")
    return "\n".join(lines) + "\n"
