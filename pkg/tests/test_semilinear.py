from itertools import product

import pytest

from bavass.catalog import figure_vass, oracle
from bavass.errors import CapTooLarge, DimensionMismatch, SkeletonError, UnsupportedPeriods
from bavass.model import Configuration, make_vass
from bavass.semantics import is_member
from bavass.semilinear import (
    Inequality,
    LinearSystem,
    SemilinearSet,
    Skeleton,
    build_image_system,
    enumerate_skeletons,
    enumerate_solutions,
    image_truncated,
    instantiate_skeleton,
    semilinear_contains,
)

from helpers import rand_vass


def anban_skeleton(final=(0,)):
    v = figure_vass("anban")
    inc, b, dec = v.transitions
    skel = Skeleton([(), ()], [(inc,), (dec,)], [(b,), ()],
                    Configuration("p", (0,)), Configuration("r", final))
    return v, skel


def test_anban_system_solutions():
    v, skel = anban_skeleton()
    system = build_image_system(v, skel)
    assert enumerate_solutions(system, 3) == {(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)}
    assert enumerate_solutions(system, 5) == {(x, y) for x in range(1, 6) for y in range(1, 6) if x >= y}
    assert any("a2 >= 1" in line for line in system.lines())


def test_acceptance_constant_shifts_with_final_vector():
    v, skel0 = anban_skeleton((0,))
    _, skel2 = anban_skeleton((2,))

    # final counter a1 - a2 must cover f
    assert Inequality(0, (1, -1)) in build_image_system(v, skel0).inequalities
    assert Inequality(-2, (1, -1)) in build_image_system(v, skel2).inequalities


def test_zero_effect_beta_is_unconstrained():
    v = make_vass(1, "ab", ["p"], [("p", "a", (0,), "p"), ("p", "b", (-1,), "p")],
                  initials=[("p", (1,))], finals=[("p", (0,))])
    loop, b = v.transitions[0], v.transitions[1]
    ok = Skeleton([()], [(loop,)], [(b,)], Configuration("p", (1,)), Configuration("p", (0,)))
    assert enumerate_solutions(build_image_system(v, ok), 4) == {(x,) for x in range(1, 5)}
    bad = Skeleton([()], [(loop,)], [(b, b)], Configuration("p", (1,)), Configuration("p", (0,)))
    assert enumerate_solutions(build_image_system(v, bad), 4) == set()


def test_enumerate_solutions_trivial_systems():
    assert enumerate_solutions(LinearSystem(1, [Inequality(-1, (0,))]), 3) == set()
    assert enumerate_solutions(LinearSystem(1, []), 2) == {(1,), (2,)}
    with pytest.raises(DimensionMismatch):
        LinearSystem(2, [Inequality(0, (1,))])
    with pytest.raises(ValueError):
        enumerate_solutions(LinearSystem(1, []), 0)


def test_enumerate_solutions_matches_per_tuple_evaluation(rng):
    for _ in range(50):
        n = rng.randint(1, 3)
        ineqs = [Inequality(rng.randint(-4, 4), tuple(rng.randint(-2, 2) for _ in range(n)))
                 for _ in range(rng.randint(0, 4))]
        system = LinearSystem(n, ineqs)
        expected = {t for t in product(range(1, 5), repeat=n)
                    if all(q.constant + sum(c * x for c, x in zip(q.coeffs, t)) >= 0 for q in ineqs)}
        assert enumerate_solutions(system, 4) == expected


def test_skeleton_errors():
    v, skel = anban_skeleton()
    inc, b, dec = v.transitions
    with pytest.raises(SkeletonError):
        build_image_system(v, Skeleton([(), ()], [(inc,), (inc,)], [(b,), ()],
                                       skel.init, skel.final))
    with pytest.raises(SkeletonError):
        build_image_system(v, Skeleton([()], [(inc,)], [(b,)], skel.init, Configuration("p", (0,))))
    with pytest.raises(SkeletonError):
        Skeleton([()], [], [], skel.init, skel.final)
    with pytest.raises(SkeletonError):
        instantiate_skeleton(v, skel, (1,))


def test_image_truncated_anban():
    v = figure_vass("anban")
    assert image_truncated(v, 1, 3) == {(m1, m2) for m1 in range(4) for m2 in range(4) if m2 <= m1}
    assert image_truncated(v, 0, 3) == set()
    empty = make_vass(1, "ab", ["p"], [], initials=[])
    assert image_truncated(empty, 1, 4) == set()


def test_image_truncated_fig3_small():
    v = figure_vass("fig3")
    image = image_truncated(v, 1, 9)
    assert max(m for n, m in image if n == 0) == 3
    assert max(m for n, m in image if n == 1) == 9
    assert image == {(n, m) for n in range(10) for m in range(10) if m <= 2 * n + 2 ** (n + 2) - 1}


def test_image_truncated_is_monotone_and_matches_membership(rng):
    for _ in range(10):
        v = rand_vass(rng, max_dim=2, max_states=3)
        smaller, larger = image_truncated(v, 1, 2), image_truncated(v, 1, 4)
        assert smaller <= larger
        expected = {(x, y) for x in range(5) for y in range(5) if is_member(v, "a" * x + "b" + "a" * y)}
        assert larger == expected


def test_semilinear_contains_examples():
    s = SemilinearSet([((0, 0), [(1, 0), (1, 1)])])
    assert semilinear_contains(s, (3, 2))
    assert not semilinear_contains(s, (2, 3))
    point = SemilinearSet([((1, 1), [])])
    assert semilinear_contains(point, (1, 1))
    assert not semilinear_contains(point, (1, 2))
    assert not semilinear_contains(SemilinearSet([]), (1,))
    with pytest.raises(DimensionMismatch):
        semilinear_contains(s, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        SemilinearSet([((0, 0), [(1,)])])
    with pytest.raises(UnsupportedPeriods):
        semilinear_contains(SemilinearSet([((0,), [(-1,)])]), (0,))


def test_semilinear_contains_agrees_with_brute_force(rng):
    for _ in range(40):
        base = tuple(rng.randint(0, 2) for _ in range(2))
        periods = [tuple(rng.randint(0, 2) for _ in range(2)) for _ in range(rng.randint(0, 3))]
        s = SemilinearSet([(base, periods)])
        reachable = set()
        for coeffs in product(range(9), repeat=len(periods)):
            t = tuple(b + sum(c * p[i] for c, p in zip(coeffs, periods)) for i, b in enumerate(base))
            reachable.add(t)
        for t in product(range(7), repeat=2):
            assert semilinear_contains(s, t) == (t in reachable)


def test_instantiate_examples():
    v, skel = anban_skeleton()
    good = instantiate_skeleton(v, skel, (3, 2))
    assert good.valid and good.accepting
    assert "".join(good.run.word) == "aaabaa"
    bad = instantiate_skeleton(v, skel, (1, 2))
    assert not bad.valid and bad.position == 4
    still = make_vass(1, "a", ["p"], [], initials=[("p", (2,))], finals=[("p", (1,))])
    empty = Skeleton([], [], [], Configuration("p", (2,)), Configuration("p", (1,)))
    out = instantiate_skeleton(still, empty, ())
    assert out.valid and out.accepting and len(out.run) == 0


def test_system_matches_instantiation_on_enumerated_skeletons():
    cases = [
        (figure_vass("anban"), 2, 1, Configuration("p", (0,)), Configuration("r", (0,))),
        (figure_vass("fig3"), 2, 1, Configuration("q1", (0, 0, 0)), Configuration("q2", (0, 0, 0))),
        (figure_vass("fig3"), 2, 1, Configuration("q1", (0, 0, 0)), Configuration("q3", (0, 1, 0))),
    ]
    for v, blocks, cap, init, final in cases:
        count = 0
        for skel in enumerate_skeletons(v, blocks, cap, init, final):
            system = build_image_system(v, skel)
            for t in product(range(1, 6), repeat=blocks):
                inst = instantiate_skeleton(v, skel, t)
                assert system.holds(t) == (inst.valid and inst.accepting), (skel, t)
                if inst.valid and inst.accepting:
                    assert oracle("anban" if v.dim == 1 else "fig3", (), "".join(inst.run.word))
            count += 1
        assert count > 0


def test_cap_too_large():
    v = figure_vass("fig3")
    with pytest.raises(CapTooLarge):
        list(enumerate_skeletons(v, 3, 6, v.initials[0], Configuration("q2", (0, 0, 0))))
