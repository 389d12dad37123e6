"""The counter-to-recursive-net compiler and its procedure gadgets.

The exact-effect expectations below were derived by hand-simulating the
gadgets at n = 1 (helper budget 2^(2^1) = 4 at depth 1, 2^(2^0) = 2 at
depth 2) before the implementation existed; see the harness docstrings.
"""

import pytest

from helpers import (
    FULL_DEPTH2,
    dec_depth2_harness,
    dec_harness,
    halting_effect,
    inc_harness,
    zero_test_harness,
)
from snl import counter, rnp
from snl.counter import parse_counter
from snl.lipton import (
    LiptonInputError,
    compile_lipton,
    complement,
    expand_test,
    expand_test_plus1,
    helper_procs,
    max_depth_for,
    simulated_bound,
)
from snl.rnp import Call, GotoOr, RnpHalts, RnpNo, explore_halting


def test_complement_is_an_involution():
    assert complement("x") == "bar_x"
    assert complement("bar_x") == "x"


def test_helper_procs_shape():
    procs = helper_procs()
    assert len(procs) == 14
    names = {p.name for p in procs}
    assert names == {
        "s_inc", "s_dec", "bar_s_inc", "bar_s_dec",
        "y_inc", "y_dec", "bar_y_inc", "bar_y_dec",
        "z_inc", "z_dec", "bar_z_inc", "bar_z_dec",
        "dec", "inc",
    }
    by_name = {p.name: p for p in procs}
    for name, p in by_name.items():
        if name in ("dec", "inc"):
            continue
        assert len(p.lt_max) == 2 and len(p.eq_max) == 2  # one step and return
    assert len(by_name["dec"].lt_max) == 29
    assert len(by_name["dec"].eq_max) == 5
    assert len(by_name["inc"].lt_max) == 31
    assert len(by_name["inc"].eq_max) == 7


@pytest.mark.parametrize("expand", [expand_test, expand_test_plus1])
def test_expansion_shape(expand):
    cmds = expand("y", "lz", "ln", entry="e0")
    assert len(cmds) == 11
    assert cmds[0].label == "e0"  # entry label lands on the first command
    assert sum(isinstance(c, GotoOr) for c in cmds) == 2
    drains = [c for c in cmds if isinstance(c, Call) and c.proc == "dec"]
    assert len(drains) == 1  # the zero branch validates by draining s
    labels = [c.label for c in cmds]
    assert len(set(labels)) == len(labels)
    assert all(l == "e0" or l.startswith("e0__") for l in labels)


def test_compile_structure():
    prog = parse_counter(
        "l1: inc x; l2: inc x; l3: inc x; l4: inc x; l5: halt;"
    )
    compiled = compile_lipton(prog, n=1)
    assert compiled.max_depth == 2
    # init prefix: 3 calls + one complement seed per variable + 11-command
    # gadget; simulation: 2 commands per inc, 1 for halt
    assert len(compiled.main) == (3 + 1 + 11) + (2 * 4 + 1)
    assert len(compiled.procs) == 14
    # the compiled program is a valid recursive net program (validated on
    # construction, but make the intent explicit)
    rnp.validate_rnp(compiled)


def test_compile_rejections():
    with pytest.raises(LiptonInputError):
        compile_lipton(parse_counter("l1: inc s; l2: halt;"), n=1)
    with pytest.raises(LiptonInputError):
        compile_lipton(parse_counter("l1: inc bar_q; l2: halt;"), n=1)
    with pytest.raises(LiptonInputError):
        compile_lipton(parse_counter("l1__x: inc q; l2: halt;"), n=1)
    with pytest.raises(LiptonInputError):
        compile_lipton(parse_counter("l1: halt;"), n=0)


def test_depth_modes():
    assert max_depth_for(2, "double") == 3
    assert max_depth_for(2, "triple") == 5
    assert simulated_bound(1, "double") == 4
    assert simulated_bound(1, "triple") == 16
    prog = parse_counter("l1: halt;")
    double = compile_lipton(prog, n=1, depth_mode="double")
    triple = compile_lipton(prog, n=1, depth_mode="triple")
    assert triple.max_depth == 3
    # only the depth limit differs
    assert double.main == triple.main
    assert double.procs == triple.procs


def _straightline(m: int) -> counter.CounterProgram:
    # m commands: alternating inc/dec on one counter, halt at the end;
    # started with enough incs that it never aborts
    cmds = []
    for i in range(m - 1):
        cmds.append(counter.Inc(f"l{i}", "x") if i % 2 == 0 or i < 2 else counter.Dec(f"l{i}", "x"))
    cmds.append(counter.Halt(f"l{m - 1}"))
    return counter.CounterProgram(tuple(cmds))


def test_output_size_is_linear_in_source_size():
    sizes = {m: len(compile_lipton(_straightline(m), n=1).main) for m in (5, 10, 20)}
    # each non-halt command costs exactly 2 emitted commands here, so the
    # growth from 10 to 20 is twice the growth from 5 to 10
    assert sizes[20] - sizes[10] == 2 * (sizes[10] - sizes[5])
    # and the procedure family does not grow at all
    assert all(
        len(compile_lipton(_straightline(m), n=1).procs) == 14 for m in (5, 10, 20)
    )


# ---------------------------------------------------------------------------
# Exact effects of the compiled procedures (hand-derived, n = 1).


def test_dec_at_depth_one_drains_exactly_four():
    effect = halting_effect(dec_harness(), {("s", 1): 4, **FULL_DEPTH2})
    assert effect == {("bar_s", 1): 4, **FULL_DEPTH2}


def test_dec_at_depth_limit_drains_exactly_two():
    effect = halting_effect(dec_depth2_harness(), {("s", 2): 2})
    assert effect == {("bar_s", 2): 2}


def test_inc_from_zero_builds_the_ladder():
    effect = halting_effect(inc_harness(), {})
    assert effect == {
        ("bar_s", 1): 4, ("y", 1): 4, ("z", 1): 4,
        ("bar_s", 2): 2, ("y", 2): 2, ("z", 2): 2,
    }


def test_zero_test_gadget_zero_branch_swaps_the_pair():
    start = {("bar_y", 1): 4, ("bar_s", 1): 4, **FULL_DEPTH2}
    effect = halting_effect(zero_test_harness("zero"), start)
    assert effect == {("y", 1): 4, ("bar_s", 1): 4, **FULL_DEPTH2}


def test_zero_test_gadget_nonzero_branch_preserves_the_valuation():
    start = {("y", 1): 4, ("bar_s", 1): 4, **FULL_DEPTH2}
    effect = halting_effect(zero_test_harness("nonzero"), start)
    assert effect == start


# ---------------------------------------------------------------------------
# End-to-end agreement smoke checks (the full corpus sweep lives in the
# acceptance suite).


def test_halting_program_compiles_to_halting_net_program():
    prog = parse_counter("l1: inc x; l2: dec x; l3: halt;")
    verdict = explore_halting(compile_lipton(prog, n=1), max_value=5)
    assert isinstance(verdict, RnpHalts)


def test_aborting_program_compiles_to_stuck_net_program():
    prog = parse_counter("l1: dec x; l2: halt;")
    verdict = explore_halting(compile_lipton(prog, n=1), max_value=5)
    assert isinstance(verdict, RnpNo)
