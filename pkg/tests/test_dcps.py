"""Semantics, exploration, kill desugaring, and the spawn-count reduction."""

import random

import pytest

from snl.dcps import (
    Dcps,
    DcpsConfig,
    DcpsNo,
    DcpsParseError,
    DcpsReachable,
    DcpsRule,
    DcpsUnknown,
    DcpsValidationError,
    KillRule,
    compile_to_inheritance,
    desugar_kill,
    inheritance_names,
    inheritance_rule_count,
    initial_config,
    make_config,
    make_dcps,
    parse_dcps,
    reach_state,
    reachable_states,
    replay_witness,
    serialize_dcps,
    successors,
    validate_dcps,
)
from genutil import random_kill_dcps, random_plain_dcps


def kill_demo() -> Dcps:
    rules = (
        DcpsRule("g0", "v", "g0", ("v",), "u"),
        DcpsRule("g1", "a", "g1", ()),
    )
    kills = (KillRule("g0", "v", "g1", True, "u"),)
    return make_dcps("g0", "v", rules, kills, frozenset({"v", "u"}))


# ---------------------------------------------------------------------------
# Validation


def test_validate_rejects_triple_push():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a", "a", "a")),))
    with pytest.raises(DcpsValidationError, match="limit 2"):
        validate_dcps(system)


def test_validate_rejects_kill_push_on_regular_top():
    system = make_dcps(
        "g0",
        "a",
        (DcpsRule("g0", "a", "g0", ("v",)),),
        kill_syms=frozenset({"v"}),
    )
    with pytest.raises(DcpsValidationError, match="regular top"):
        validate_dcps(system)


def test_validate_rejects_widening_kill_top():
    bad = make_dcps(
        "g0",
        "v",
        (DcpsRule("g0", "v", "g0", ("v", "v")),),
        kill_syms=frozenset({"v"}),
    )
    with pytest.raises(DcpsValidationError, match="kill-symbol top"):
        validate_dcps(bad)
    swapped = make_dcps(
        "g0",
        "v",
        (DcpsRule("g0", "v", "g0", ("a",)),),
        kill_syms=frozenset({"v"}),
    )
    with pytest.raises(DcpsValidationError, match="kill-symbol top"):
        validate_dcps(swapped)


def test_validate_rejects_kill_rule_on_regular_symbols():
    system = make_dcps(
        "g0",
        "a",
        (),
        (KillRule("g0", "a", "g1", True, "a"),),
        frozenset(),
    )
    with pytest.raises(DcpsValidationError, match="not a kill symbol"):
        validate_dcps(system)


def test_validate_rejects_undeclared_mentions():
    system = Dcps(("g0",), ("a",), "g0", "a", (DcpsRule("g0", "a", "g9", ()),))
    with pytest.raises(DcpsValidationError, match="g9"):
        validate_dcps(system)


def test_spawning_kill_symbols_is_allowed():
    validate_dcps(kill_demo())


# ---------------------------------------------------------------------------
# Step semantics


def test_rule_step_rewrites_top_and_keeps_count():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g1", ("b", "a")),))
    cfg = make_config("g0", (("a", "c"), 2), [])
    steps = successors(system, cfg, budget=0)
    assert steps == [
        (("rule", 0), DcpsConfig("g1", (("b", "a", "c"), 2), ()))
    ]


def test_no_rule_fires_on_empty_stack():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g1", ()),))
    cfg = make_config("g0", ((), 0), [])
    assert successors(system, cfg, budget=1) == []


def test_spawn_count_depends_on_semantics():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a",), "u"),))
    cfg = make_config("g0", (("a",), 2), [])
    (_, plain), = successors(system, cfg, budget=2, semantics="noinherit")
    assert plain.pool == ((("u",), 0),)
    (_, inh), = successors(system, cfg, budget=2, semantics="inherit")
    assert inh.pool == ((("u",), 3),)


def test_switch_respects_budget_and_dedupes():
    system = make_dcps("g0", "a", ())
    cfg = make_config("g0", (("a",), 0), [(("u",), 1), (("u",), 1)])
    assert successors(system, cfg, budget=0) == []
    steps = successors(system, cfg, budget=1)
    assert len(steps) == 1
    event, nxt = steps[0]
    assert event == ("switch", (("u",), 1))
    assert nxt == DcpsConfig("g0", (("u",), 1), ((("a",), 1), (("u",), 1)))


def test_switch_can_activate_a_corpse():
    system = make_dcps("g0", "a", ())
    cfg = make_config("g0", (("a",), 0), [((), 0)])
    steps = successors(system, cfg, budget=0)
    assert steps == [
        (("switch", ((), 0)), DcpsConfig("g0", ((), 0), ((("a",), 1),)))
    ]


def test_kill_needs_singleton_active_and_victim():
    system = kill_demo()
    deep_active = make_config("g0", (("v", "a"), 0), [(("u",), 0)])
    assert not [e for e, _ in successors(system, deep_active, 0) if e[0] == "kill"]
    deep_victim = make_config("g0", (("v",), 0), [(("u", "a"), 0)])
    assert not [e for e, _ in successors(system, deep_victim, 0) if e[0] == "kill"]


def test_kill_removes_victim_and_resets_count():
    system = kill_demo()
    cfg = make_config("g0", (("v",), 2), [(("u",), 1), (("u",), 1)])
    kills = [(e, c) for e, c in successors(system, cfg, budget=1) if e[0] == "kill"]
    assert len(kills) == 1
    event, nxt = kills[0]
    assert event == ("kill", 0, 1)
    assert nxt == DcpsConfig("g1", (("v",), 0), ((("u",), 1),))
    assert not [e for e, c in successors(system, cfg, budget=0) if e[0] == "kill"]


def test_pop_kill_leaves_empty_active():
    rules = ()
    kills = (KillRule("g0", "v", "g1", False, "u"),)
    system = make_dcps("g0", "v", rules, kills, frozenset({"v", "u"}))
    cfg = make_config("g0", (("v",), 0), [(("u",), 0)])
    (_, nxt), = [s for s in successors(system, cfg, 0) if s[0][0] == "kill"]
    assert nxt.active == ((), 0)


def test_corpse_canonicalization_keeps_one_per_count():
    cfg = make_config("g0", (("a",), 0), [((), 1), ((), 1), ((), 2)])
    assert cfg.pool == (((), 1), ((), 2))


# ---------------------------------------------------------------------------
# Exploration


def test_reach_trivial_chain():
    rules = (
        DcpsRule("g0", "a", "g1", ("b",), "c"),
        DcpsRule("g1", "b", "g2", ("b",)),
    )
    system = make_dcps("g0", "a", rules)
    result = reach_state(system, "g2", 0)
    assert isinstance(result, DcpsReachable)
    assert result.witness == (("rule", 0), ("rule", 1))


def test_reach_initial_state_immediately():
    system = make_dcps("g0", "a", ())
    result = reach_state(system, "g0", 0)
    assert isinstance(result, DcpsReachable)
    assert result.witness == ()


def test_reach_no_on_clean_exhaustion():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g1", ()),))
    result = reach_state(system, "g2", 1)
    assert isinstance(result, DcpsNo)
    assert result.configs_explored == 2


def test_reach_unknown_when_thread_cap_prunes():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a",), "b"),))
    result = reach_state(system, "gx", 0, max_threads=3)
    assert isinstance(result, DcpsUnknown)
    assert result.reason == "max_threads"


def test_reach_unknown_when_stack_cap_prunes():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a", "a")),))
    result = reach_state(system, "gx", 0, max_stack=4)
    assert isinstance(result, DcpsUnknown)
    assert result.reason == "max_stack"


def test_reach_unknown_on_config_budget():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a",), "b"),))
    result = reach_state(system, "gx", 0, max_threads=3, max_configs=2)
    assert isinstance(result, DcpsUnknown)
    assert "max_configs" in result.reason


def test_env_override_for_config_budget(monkeypatch):
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a",), "b"),))
    monkeypatch.setenv("SNL_MAX_CONFIGS", "2")
    result = reach_state(system, "gx", 0, max_threads=3)
    assert isinstance(result, DcpsUnknown)
    assert "max_configs" in result.reason
    monkeypatch.setenv("SNL_MAX_CONFIGS", "banana")
    with pytest.raises(ValueError, match="SNL_MAX_CONFIGS"):
        reach_state(system, "gx", 0)


def test_witness_needs_budget_for_resume():
    # d is reachable only by parking the main thread and coming back to it
    rules = (
        DcpsRule("a", "x", "b", ("x",), "z"),
        DcpsRule("b", "z", "c", ("z",)),
        DcpsRule("c", "x", "d", ("x",)),
    )
    system = make_dcps("a", "x", rules)
    assert isinstance(reach_state(system, "d", 1), DcpsReachable)
    assert not isinstance(reach_state(system, "d", 0), DcpsReachable)


def test_replay_rejects_inapplicable_event():
    system = make_dcps("g0", "a", (DcpsRule("g0", "a", "g1", ()),))
    with pytest.raises(ValueError, match="does not apply"):
        replay_witness(system, (("rule", 5),), 0)


def test_reachable_states_reports_completeness():
    finite = make_dcps("g0", "a", (DcpsRule("g0", "a", "g1", ()),))
    states, complete = reachable_states(finite, 0)
    assert states == frozenset({"g0", "g1"}) and complete
    pump = make_dcps("g0", "a", (DcpsRule("g0", "a", "g0", ("a",), "b"),))
    _, complete = reachable_states(pump, 0, max_threads=3)
    assert not complete


# ---------------------------------------------------------------------------
# Kill desugaring


def test_desugar_adds_four_rules_three_states_one_symbol():
    system = kill_demo()
    plain = desugar_kill(system)
    assert plain.kills == () and plain.kill_syms == frozenset()
    assert len(plain.rules) == len(system.rules) + 4
    assert set(plain.states) - set(system.states) == {"kspawn0", "kkill0", "kreturn0"}
    assert set(plain.symbols) - set(system.symbols) == {"spawnmark"}


def test_desugar_without_kills_is_plain_passthrough():
    system = make_dcps(
        "g0", "a", (DcpsRule("g0", "a", "g1", ()),), (), frozenset({"v"})
    )
    # v never occurs in a rule, so it only existed via the kill declaration
    plain = desugar_kill(system)
    assert plain.rules == system.rules
    assert plain.kill_syms == frozenset()


def test_desugar_kill_replays_in_seven_configs():
    system = kill_demo()
    plain = desugar_kill(system)
    result = reach_state(plain, "g1", 0)
    assert isinstance(result, DcpsReachable)
    # spawn the victim, then the six-event gadget
    assert len(result.witness) == 7
    configs = replay_witness(plain, result.witness, 0)
    assert configs[-1].state == "g1"
    assert configs[-1].active == (("v",), 0)
    # the original reaches g1 in two events: spawn, then the kill itself
    direct = reach_state(system, "g1", 0)
    assert isinstance(direct, DcpsReachable)
    assert len(direct.witness) == 2
    assert direct.witness[1] == ("kill", 0, 0)


def test_desugar_preserves_reachable_states_on_random_systems():
    rng = random.Random(20260819)
    for trial in range(15):
        system = random_kill_dcps(rng)
        plain = desugar_kill(system)
        for budget in (0, 1):
            base, _ = reachable_states(
                system, budget, max_threads=6, max_stack=8, max_configs=60_000
            )
            lifted, _ = reachable_states(
                plain, budget, max_threads=7, max_stack=8, max_configs=60_000
            )
            original = frozenset(system.states)
            assert base & original == lifted & original, (trial, budget)


# ---------------------------------------------------------------------------
# Spawn-count reduction


def plain_demo() -> Dcps:
    rules = (
        DcpsRule("a", "x", "b", ("x",), "z"),
        DcpsRule("b", "z", "c", ("z",)),
        DcpsRule("c", "x", "d", ("x",)),
    )
    return make_dcps("a", "x", rules)


def test_inheritance_requires_plain_system():
    with pytest.raises(DcpsValidationError, match="plain"):
        compile_to_inheritance(kill_demo(), "g1")
    with pytest.raises(DcpsValidationError, match="not declared"):
        compile_to_inheritance(plain_demo(), "nope")


def test_inheritance_rule_count_matches_closed_form():
    system = plain_demo()
    compiled, _ = compile_to_inheritance(system, "d")
    expected = inheritance_rule_count(
        len(system.states), len(system.symbols), len(system.rules)
    )
    assert len(compiled.rules) == expected


def test_inheritance_bootstrap_trace():
    system = plain_demo()
    compiled, target = compile_to_inheritance(system, "d")
    assert target == "swp_d"
    # skip the dormant pump, drop the boot symbol, switch to the bottom
    # thread (spawned at count 1 under inheriting semantics), unfold it
    events = (
        ("rule", 1),
        ("switch", (("ybot",), 1)),
        ("rule", 2),
    )
    configs = replay_witness(compiled, events, 2, semantics="inherit")
    final = configs[-1]
    assert final.state == "run_a"
    assert final.active == (("x", "ybot"), 1)


def test_inheritance_names_cover_generated_states():
    system = plain_demo()
    compiled, target = compile_to_inheritance(system, "d")
    names = inheritance_names(system)
    assert names[target] == "(d,2)"
    assert names["run_a"] == "(a,0)"
    generated = set(compiled.states) | set(compiled.symbols)
    original = set(system.states) | set(system.symbols)
    assert generated - original == set(names)


def test_inheritance_shifts_budget_on_directed_example():
    system = plain_demo()
    compiled, target = compile_to_inheritance(system, "d")
    caps = dict(max_threads=7, max_stack=6, max_configs=80_000)
    hit = reach_state(compiled, target, 3, semantics="inherit", **caps)
    assert isinstance(hit, DcpsReachable)
    miss = reach_state(compiled, target, 2, semantics="inherit", **caps)
    assert not isinstance(miss, DcpsReachable)


def test_inheritance_agrees_on_random_systems():
    rng = random.Random(77)
    caps = dict(max_threads=7, max_stack=6, max_configs=60_000)
    for trial in range(5):
        system = random_plain_dcps(rng)
        for budget in (0, 1):
            for goal in system.states:
                base = reach_state(
                    system, goal, budget, max_threads=6, max_stack=4, max_configs=40_000
                )
                compiled, target = compile_to_inheritance(system, goal)
                lifted = reach_state(
                    compiled, target, budget + 2, semantics="inherit", **caps
                )
                assert isinstance(base, DcpsReachable) == isinstance(
                    lifted, DcpsReachable
                ), (trial, budget, goal)


# ---------------------------------------------------------------------------
# Text format


def test_round_trip_kill_system():
    system = kill_demo()
    text = serialize_dcps(system)
    assert parse_dcps(text) == system


def test_round_trip_desugared_system():
    plain = desugar_kill(kill_demo())
    assert parse_dcps(serialize_dcps(plain)) == plain


def test_parse_reports_line_numbers():
    text = "state g0 a;\nstackinit x;\nrule nonsense\n"
    with pytest.raises(DcpsParseError, match="line 3"):
        parse_dcps(text)


def test_parse_rejects_duplicates_and_missing_headers():
    with pytest.raises(DcpsParseError, match="duplicate state"):
        parse_dcps("state g0 a;\nstate g0 b;\nstackinit x;\n")
    with pytest.raises(DcpsParseError, match="missing stackinit"):
        parse_dcps("state g0 a;\n")
    with pytest.raises(DcpsParseError, match="missing state"):
        parse_dcps("stackinit x;\n")


def test_parse_strips_comments_and_blanks():
    text = """
    # a tiny system
    state g0 main;   # initial global state
    stackinit a;

    rule main|a -> stop|eps;  # empty push
    """
    system = parse_dcps(text)
    assert system.rules == (DcpsRule("main", "a", "stop", ()),)


def test_parse_validates_system():
    text = "state g0 m;\nstackinit a;\nrule m|a -> m|a.a.a;\n"
    with pytest.raises(DcpsParseError, match="limit 2"):
        parse_dcps(text)


def test_serialize_spawn_and_kill_lines():
    system = kill_demo()
    text = serialize_dcps(system)
    assert "rule g0|v -> g0|v spawn u;" in text
    assert "kill g0|v -> g1|keep kill u;" in text
    assert "killsyms { u v };" in text
