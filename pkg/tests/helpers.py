"""Shared machines, random generators and brute-force oracles for the tests."""

from __future__ import annotations

import itertools
from collections import deque

from bavass.model import OMEGA, Configuration, Run, make_vass
from bavass.textio import parse_lcm


def words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def rand_vass(rng, max_dim=3, max_states=5, lo=-2, hi=2, max_trans=5, alphabet="ab"):
    d = rng.randint(1, max_dim)
    states = [f"q{i}" for i in range(1, rng.randint(1, max_states) + 1)]
    ts = set()
    for _ in range(rng.randint(1, max_trans)):
        effect = tuple(rng.randint(lo, hi) for _ in range(d))
        ts.add((rng.choice(states), rng.choice(alphabet), effect, rng.choice(states)))
    return make_vass(d, alphabet, states, sorted(ts), initials=[(states[0], (0,) * d)],
                     finals=[(rng.choice(states), (0,) * d)])


def random_walk(rng, v, start, length):
    """A uniformly guided run of exactly ``length`` steps, or None if it gets stuck."""
    steps, state, values = [], start.state, start.values
    for _ in range(length):
        options = [t for t in v.outgoing[state]
                   if all(x + e >= 0 for x, e in zip(values, t.effect))]
        if not options:
            return None
        t = rng.choice(options)
        steps.append(t)
        state, values = t.target, tuple(x + e for x, e in zip(values, t.effect))
    return Run(start, steps)


def bfs_coverable(v, target, counter_cap=8, depth_cap=14):
    """True / False when conclusive, None when the caps were hit."""
    seen = set(v.initials)
    queue = deque((c, 0) for c in v.initials)
    truncated = False
    while queue:
        c, depth = queue.popleft()
        if c.state == target.state and all(x >= y for x, y in zip(c.values, target.values)):
            return True
        if depth == depth_cap:
            truncated = True
            continue
        for t in v.outgoing[c.state]:
            values = tuple(x + e for x, e in zip(c.values, t.effect))
            if min(values, default=0) < 0:
                continue
            if max(values, default=0) > counter_cap:
                truncated = True
                continue
            nxt = Configuration(t.target, values)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, depth + 1))
    return None if truncated else False


def downward_machines():
    """Five downward-mode machines whose atoms carry ω entries."""
    w = OMEGA
    return [
        # counts a's, atom bounds the count by 2
        make_vass(1, "ab", ["p"], [("p", "a", (1,), "p"), ("p", "b", (-1,), "p")],
                  initials=[("p", (0,))], mode="downward", atoms=[("p", (2,))]),
        # two counters, the second unconstrained
        make_vass(2, "ab", ["p", "r"],
                  [("p", "a", (1, 1), "p"), ("p", "b", (0, 0), "r"), ("r", "a", (-1, 1), "r")],
                  initials=[("p", (0, 0))], mode="downward", atoms=[("r", (1, w))]),
        # only ω entries: plain state acceptance
        make_vass(2, "ab", ["p", "q"],
                  [("p", "a", (1, 0), "q"), ("q", "b", (-1, 2), "p"), ("q", "a", (0, -1), "q")],
                  initials=[("p", (0, 1))], mode="downward", atoms=[("p", (w, w))]),
        # two atoms on different states
        make_vass(2, "ab", ["p", "q"],
                  [("p", "a", (2, 0), "p"), ("p", "b", (0, 1), "q"), ("q", "a", (-1, 1), "q"),
                   ("q", "b", (0, -1), "p")],
                  initials=[("p", (0, 0))], mode="downward", atoms=[("p", (w, 1)), ("q", (3, w))]),
        # three counters, nondeterministic
        make_vass(3, "ab", ["p", "q"],
                  [("p", "a", (1, 0, 0), "p"), ("p", "a", (0, 1, 0), "q"), ("q", "b", (0, -1, 1), "q"),
                   ("q", "a", (-1, 0, 1), "p")],
                  initials=[("p", (0, 0, 0))], mode="downward",
                  atoms=[("q", (w, 0, 2)), ("p", (1, w, w))]),
    ]


INC_LCM = """\
lcm counters=1
state l1
init l1
trans l1 inc l1
"""

# two states, two counters, no parallel transitions
TWO_LCM = """\
lcm counters=2
state p q
init p
trans p inc,skip q
trans q dec,inc p
trans q skip,ztest q
"""

# finite reach with every counter stuck at 0
ZTEST_LCM = """\
lcm counters=1
state p q
init p
trans p ztest q
trans q ztest p
"""

# finite reach with bound 1
INC_DEC_LCM = """\
lcm counters=1
state p q r
init p
trans p inc q
trans q dec r
"""

# parallel transitions p -> q
PARALLEL_LCM = """\
lcm counters=1
state p q
init p
trans p inc q
trans p dec q
trans q skip p
"""


def lcm(text):
    return parse_lcm(text)
