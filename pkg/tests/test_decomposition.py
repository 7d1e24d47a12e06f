import pytest

from bavass.catalog import figure_vass
from bavass.decomposition import (
    Decomposition,
    Segment,
    check_decomposition,
    decompose_run,
    has_accepting_extension,
    has_pumpable_factor,
    suggest_cap,
    verify_decomposition,
)
from bavass.errors import PreconditionUnverified, ShapeError
from bavass.model import Configuration, Run, make_vass
from bavass.semantics import runs_reading

from helpers import rand_vass, random_walk


def only_run(v, word):
    (run,) = runs_reading(v, word)
    return run


@pytest.fixture
def anban():
    v = figure_vass("anban")
    inc, b, dec = v.transitions
    return v, inc, b, dec


def test_empty_run_is_trivially_decomposed(anban):
    v, *_ = anban
    run = Run(Configuration("p", (0,)), ())
    assert verify_decomposition(v, run, Decomposition((), 2)) is None
    assert decompose_run(v, run, 2) == Decomposition((), 2)


def test_hand_decomposition_of_a3ba2(anban):
    v, inc, b, dec = anban
    run = only_run(v, "aaabaa")
    dec_ok = Decomposition((Segment((), (inc,), 3, (b,)), Segment((), (dec,), 2, ())), 2)
    assert verify_decomposition(v, run, dec_ok) is None
    assert decompose_run(v, run, 2) == dec_ok


def test_pumpable_prefix_violates_condition_six(anban):
    v, inc, b, dec = anban
    run = only_run(v, "aaabaa")
    # alpha_1 beta_1 = inc inc: the first inc is a non-negative loop followed by more steps
    bad = Decomposition((Segment((inc,), (inc,), 2, (b,)), Segment((), (dec,), 2, ())), 2)
    assert [x.condition for x in check_decomposition(v, run, bad)] == [6]
    # moving one a into alpha' keeps alpha_1 beta_1 of length one, so nothing breaks
    shifted = Decomposition((Segment((), (inc,), 2, (inc, b)), Segment((), (dec,), 2, ())), 2)
    assert verify_decomposition(v, run, shifted) is None


def test_negative_beta_outside_a_violates_condition_five(anban):
    v, inc, b, dec = anban
    run = only_run(v, "aba")
    dec5 = Decomposition((Segment((inc,), (), 1, (b,)), Segment((), (dec,), 1, ())), 3)
    (violation,) = check_decomposition(v, run, dec5)
    assert (violation.condition, violation.segment) == (5, 2)
    assert "condition 5" in str(violation)


def test_other_conditions_are_reported(anban):
    v, inc, b, dec = anban
    run = only_run(v, "aaabaa")
    wrong = Decomposition((Segment((), (inc,), 3, (b,)), Segment((), (dec,), 1, ())), 2)
    assert 1 in {x.condition for x in check_decomposition(v, run, wrong)}
    short = Decomposition((Segment((), (inc,), 3, (b,)), Segment((), (dec,), 2, ())), 0)
    assert verify_decomposition(v, run, short).condition == 1
    no_b = Decomposition((Segment((), (inc,), 3, ()), Segment((b,), (dec,), 2, ())), 3)
    assert {2, 3} <= {x.condition for x in check_decomposition(v, run, no_b)}
    long_block = only_run(v, "aaaaab")
    empty_beta = Decomposition((Segment((inc,) * 2, (), 1, (inc,) * 3 + (b,)), Segment((), (), 1, ())), 2)
    assert 4 in {x.condition for x in check_decomposition(v, long_block, empty_beta)}


def test_negative_only_loop_has_no_decomposition():
    v = make_vass(1, "a", ["q"], [("q", "a", (-1,), "q")], initials=[("q", (5,))],
                  finals=[("q", (0,))])
    run = only_run(v, "aaa")
    assert decompose_run(v, run, 1) is None
    # with a larger cap beta may stay empty
    assert verify_decomposition(v, run, decompose_run(v, run, 2)) is None


def test_shape_and_precondition_errors(anban):
    v, *_ = anban
    eps = make_vass(1, "a", ["q"], [("q", None, (0,), "q")], initials=[("q", (0,))])
    run = Run(Configuration("q", (0,)), eps.transitions)
    with pytest.raises(ShapeError):
        decompose_run(eps, run, 2)
    with pytest.raises(ShapeError):
        verify_decomposition(eps, run, Decomposition((), 2))
    trap = make_vass(1, "ab", ["p", "dead"], [("p", "a", (1,), "p"), ("p", "b", (0,), "dead")],
                     initials=[("p", (0,))], finals=[("p", (0,))])
    run = only_run(trap, "aab")
    assert not has_accepting_extension(trap, run.end, 16)
    with pytest.raises(PreconditionUnverified):
        decompose_run(trap, run, 5)


def test_accepting_extension_search(anban):
    v, *_ = anban
    assert has_accepting_extension(v, Configuration("p", (3,)), 1)
    assert not has_accepting_extension(v, Configuration("p", (3,)), 0)
    assert has_accepting_extension(v, Configuration("r", (3,)), 0)


def naive_pumpable(steps, avoided, dim):
    for start in range(len(steps)):
        for end in range(start + 1, len(steps)):
            delta = steps[start:end]
            eff = [sum(t.effect[i] for t in delta) for i in range(dim)]
            if delta[0].source == delta[-1].target and all(
                eff[i] >= 0 for i in range(dim) if i + 1 not in avoided
            ):
                return True
    return False


def test_pumpable_checker_agrees_with_brute_force(rng):
    checked = 0
    for _ in range(300):
        v = rand_vass(rng, alphabet="a")
        run = random_walk(rng, v, Configuration(v.states[0], (4,) * v.dim), rng.randint(0, 7))
        if run is None:
            continue
        avoided = frozenset(i for i in range(1, v.dim + 1) if rng.random() < 0.4)
        assert has_pumpable_factor(run.steps, avoided, v.dim) == naive_pumpable(run.steps, avoided, v.dim)
        checked += 1
    assert checked > 100


def test_round_trip_on_random_machines(rng):
    found = 0
    for _ in range(150):
        v = rand_vass(rng, max_dim=2, max_states=3)
        run = random_walk(rng, v, v.initials[0], rng.randint(0, 8))
        if run is None:
            continue
        try:
            dec = decompose_run(v, run, rng.randint(1, 4))
        except PreconditionUnverified:
            continue
        if dec is not None:
            found += 1
            assert verify_decomposition(v, run, dec) is None
            assert dec.steps() == run.steps
    assert found > 10


def test_suggest_cap_values(anban):
    v, *_ = anban
    assert suggest_cap(v, 1) == 5
    assert suggest_cap(v, 2) == 24
    assert suggest_cap(v, 0) == 0
