import pytest

from bavass.catalog import figure_vass
from bavass.coverability import (
    DEAD,
    DOMINATED,
    LoopWindow,
    build_domination_tree,
    find_nonneg_loop,
    is_coverable,
    karp_miller_tree,
    loop_constant,
)
from bavass.errors import TreeTooLarge
from bavass.model import OMEGA, Configuration, Run, make_vass, vec_leq

from helpers import bfs_coverable, rand_vass


def loop(delta):
    return make_vass(1, "a", ["q"], [("q", "a", (delta,), "q")], initials=[("q", (0,))])


def test_tree_plus_one_loop():
    tree = build_domination_tree(loop(1), "q", (0,))
    assert len(tree) == 2 and tree.depth == 1
    child = tree.nodes[1]
    assert child.label == (1,)
    assert child.reason == DOMINATED and child.dominated_by == 0


def test_tree_minus_one_chain():
    tree = build_domination_tree(loop(-1), "q", (5,))
    assert tree.depth == 5
    assert [n.label for n in tree.path(5)] == [(5,), (4,), (3,), (2,), (1,), (0,)]
    assert tree.nodes[5].reason == DEAD


def test_tree_omega_root():
    tree = build_domination_tree(loop(-1), "q", (OMEGA,))
    assert tree.depth == 1
    assert tree.nodes[1].label == (OMEGA,) and tree.nodes[1].reason == DOMINATED
    assert any("w" in line for line in tree.lines())


def test_loop_constant_examples():
    assert loop_constant(loop(1), [1], 0) == 2
    assert loop_constant(loop(-1), [1], 5) == 6
    bare = make_vass(2, "a", ["p", "q"], [], initials=[])
    assert loop_constant(bare, [1, 2], 3) == 1


def test_find_nonneg_loop_examples():
    up, down = loop(1), loop(-1)
    run = Run(Configuration("q", (0,)), up.transitions * 3)
    assert find_nonneg_loop(run, [1]) == LoopWindow(0, 1)
    run = Run(Configuration("q", (3,)), down.transitions * 3)
    assert find_nonneg_loop(run, [1]) is None
    assert find_nonneg_loop(run, []) == LoopWindow(0, 1)


def test_find_nonneg_loop_agrees_with_naive_scan(rng):
    from helpers import random_walk

    for _ in range(100):
        v = rand_vass(rng)
        run = random_walk(rng, v, Configuration(v.states[0], (3,) * v.dim), rng.randint(0, 8))
        if run is None:
            continue
        s = [i for i in range(1, v.dim + 1) if rng.random() < 0.5]
        expected = None
        states = [run.start.state] + [t.target for t in run.steps]
        for end in range(1, len(run) + 1):
            for start in range(end):
                eff = [sum(t.effect[i - 1] for t in run.steps[start:end]) for i in s]
                if states[start] == states[end] and all(x >= 0 for x in eff):
                    expected = LoopWindow(start, end)
                    break
            if expected:
                break
        assert find_nonneg_loop(run, s) == expected


def test_dominated_leaves_cite_a_smaller_ancestor(rng):
    for _ in range(100):
        v = rand_vass(rng)
        tree = build_domination_tree(v, v.states[0], (1,) * v.dim)
        for node in tree.nodes:
            if node.reason == DOMINATED:
                anc = tree.nodes[node.dominated_by]
                assert anc in tree.path(node.index)[:-1]
                assert anc.state == node.state and vec_leq(anc.label, node.label)
            elif node.children:
                enabled = [t for t in v.outgoing[node.state]
                           if all(x + e >= 0 for x, e in zip(node.label, t.effect))]
                assert len(node.children) == len(enabled)


def test_node_cap():
    branching = make_vass(1, "ab", ["q"], [("q", "a", (-1,), "q"), ("q", "b", (-1,), "q")],
                          initials=[])
    with pytest.raises(TreeTooLarge):
        build_domination_tree(branching, "q", (20,), node_cap=1000)


def test_is_coverable_fig1():
    v = figure_vass("fig1")
    assert is_coverable(v, Configuration("q4", (0,)))
    # q3 can pump the counter before the first decrement
    assert is_coverable(v, Configuration("q4", (1,)))
    assert bfs_coverable(v, Configuration("q4", (1,)), counter_cap=5, depth_cap=12) is True
    assert is_coverable(v, Configuration("q1", (0,)))
    assert not is_coverable(v, Configuration("q1", (1,)))


def test_coverability_needs_acceleration():
    # +1 loop then a -2 exit: plain domination cuts the loop after one step
    v = make_vass(1, "a", ["p", "r"], [("p", "a", (1,), "p"), ("p", "a", (-2,), "r")],
                  initials=[("p", (0,))])
    assert is_coverable(v, Configuration("r", (0,)))
    km = karp_miller_tree(v, "p", (0,))
    assert any(n.label == (OMEGA,) for n in km.nodes)


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig3", "anbn", "anban"])
def test_is_coverable_agrees_with_bfs(name):
    v = figure_vass(name)
    for q in v.states:
        for values in [(0,) * v.dim, (1,) * v.dim, (2,) + (0,) * (v.dim - 1), (4,) * v.dim]:
            target = Configuration(q, values)
            expected = bfs_coverable(v, target)
            if expected is not None:
                assert is_coverable(v, target) == expected, target


def test_is_coverable_random_agreement(rng):
    checked = 0
    for _ in range(60):
        v = rand_vass(rng, max_trans=4)
        for q in v.states:
            target = Configuration(q, tuple(rng.randint(0, 2) for _ in range(v.dim)))
            expected = bfs_coverable(v, target)
            if expected is not None:
                checked += 1
                assert is_coverable(v, target) == expected
    assert checked > 20
