"""Lossy counter machines, run encodings and the complement constructions.

A configuration q(a1..an) is encoded as the word q z1^a1 ... zn^an and a run
as the concatenation of its configurations. The complement machines read the
*reversed* encoding, so a consecutive pair p(a), q(b) of the run shows up as
zn^bn..z1^b1 q zn^an..z1^a1 p.
"""

from __future__ import annotations

from collections import deque
from itertools import product as cartesian
from typing import Optional, Sequence

from .errors import NameCollision, ValidationError
from .model import Configuration, Lcm, LcmTransition, Vass, make_vass

SINK = "sink"

# per-op offset k such that b >= a + k violates the clause
_SLACK = {"inc": 2, "skip": 1, "dec": 0}


def _ranges(op: str, a: int):
    if op == "inc":
        return range(a + 2)
    if op == "skip":
        return range(a + 1)
    if op == "dec":
        return range(a)
    return range(1) if a == 0 else range(0)


def lcm_successors(m: Lcm, c: Configuration) -> set:
    """Every configuration one lossy step away from c."""
    if len(c.values) != m.counters:
        raise ValidationError(f"expected {m.counters} counter values")
    out = set()
    for t in m.transitions:
        if t.source != c.state:
            continue
        choices = [_ranges(op, a) for op, a in zip(t.ops, c.values)]
        for values in cartesian(*choices):
            out.add(Configuration(t.target, values))
    return out


def reach_bounded(m: Lcm, q0: str, depth: int) -> set:
    """Configurations reachable from q0(0..0) within ``depth`` lossy steps."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if q0 not in m.states:
        raise ValidationError(f"unknown state {q0}")
    start = Configuration(q0, (0,) * m.counters)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        c, d = frontier.popleft()
        if d == depth:
            continue
        for nxt in lcm_successors(m, c):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, d + 1))
    return seen


def parse_encoding(m: Lcm, word: Sequence[str]) -> Optional[list]:
    """Configurations spelled by ``word``, or None when it is malformed."""
    states = set(m.states)
    index = {z: i for i, z in enumerate(m.counter_letters)}
    configs = []
    values = None
    state = None
    last = -1
    for letter in word:
        if letter in states:
            if state is not None:
                configs.append(Configuration(state, tuple(values)))
            state, values, last = letter, [0] * m.counters, -1
        elif letter in index and state is not None:
            i = index[letter]
            if i < last:
                return None
            values[i] += 1
            last = i
        else:
            return None
    if state is None:
        return None
    configs.append(Configuration(state, tuple(values)))
    return configs


def is_valid_run_encoding(m: Lcm, l0: str, word: Sequence[str]) -> bool:
    """Whether ``word`` (not reversed) encodes a lossy run from l0(0..0)."""
    configs = parse_encoding(m, word)
    if not configs or configs[0] != Configuration(l0, (0,) * m.counters):
        return False
    return all(b in lcm_successors(m, a) for a, b in zip(configs, configs[1:]))


def augment(m1: Lcm, q1: str = "q_1", q2: str = "q_2") -> Lcm:
    """Add the draining states q1 and q2.

    Every state may jump to q1; q1 moves each counter i >= 2 into counter 1;
    q2 then keeps decrementing counter 1.
    """
    n = m1.counters
    clash = {q1, q2} & set(m1.states)
    if clash or q1 == q2:
        raise NameCollision(f"fresh state names already in use: {sorted(clash) or [q1]}")
    if n < 1:
        raise ValidationError("augmentation needs at least one counter")
    skip = ("skip",) * n
    added = [LcmTransition(q, skip, q1) for q in m1.states]
    for i in range(1, n):
        ops = list(skip)
        ops[0], ops[i] = "inc", "dec"
        added.append(LcmTransition(q1, tuple(ops), q1))
    drain = ("dec",) + skip[1:]
    added += [LcmTransition(q1, drain, q2), LcmTransition(q2, drain, q2)]
    return Lcm(m1.states + (q1, q2), n, m1.transitions + tuple(added), m1.initial)


def has_parallel(m: Lcm) -> bool:
    pairs = [(t.source, t.target) for t in m.transitions]
    return len(pairs) != len(set(pairs))


def split_parallel(m: Lcm, l0: str) -> Lcm:
    """Equivalent machine with at most one transition between any two states.

    Each state q entered by two transitions from one source is replaced by
    copies ``q~k``, one for each transition k (1-based) entering it; every
    copy keeps all of q's outgoing transitions. ``l0`` itself is kept, with
    its outgoing transitions, so runs can still start there. Machines
    without parallel transitions are returned unchanged.
    """
    if not has_parallel(m):
        return m
    seen, needy = set(), set()
    for t in m.transitions:
        if (t.source, t.target) in seen:
            needy.add(t.target)
        seen.add((t.source, t.target))

    def copy(q, k):
        return f"{q}~{k}"

    copies = {q: [] for q in m.states}
    for k, t in enumerate(m.transitions, start=1):
        if t.target in needy:
            copies[t.target].append(copy(t.target, k))
    for q in m.states:
        if q not in needy or q == l0:
            copies[q].insert(0, q)
    states = [c for q in m.states for c in copies[q]]
    taken = set(m.states) | set(m.counter_letters)
    fresh = [c for c in states if c not in m.states]
    if taken & set(fresh):
        raise NameCollision(f"split copies clash with existing names: {sorted(taken & set(fresh))}")
    transitions = []
    for k, t in enumerate(m.transitions, start=1):
        target = copy(t.target, k) if t.target in needy else t.target
        for src in copies[t.source]:
            transitions.append(LcmTransition(src, t.ops, target))
    initial = m.initial if m.initial in states else None
    return Lcm(tuple(states), m.counters, tuple(transitions), initial)


class _Builder:
    """Collects states and transitions of a 1-counter (or 0-counter) machine."""

    def __init__(self, alphabet: Sequence[str], dim: int):
        self.alphabet = tuple(alphabet)
        self.dim = dim
        self.states: list = []
        self.transitions: set = set()
        self._known: set = set()

    def state(self, name: str) -> str:
        if name not in self._known:
            self._known.add(name)
            self.states.append(name)
        return name

    def add(self, src: str, letter: str, dst: str, effect: int = 0) -> None:
        self.transitions.add((self.state(src), letter, (effect,) * self.dim, self.state(dst)))

    def loop(self, q: str, letters, effect: int = 0) -> None:
        for x in letters:
            self.add(q, x, q, effect)

    def build(self, finals) -> Vass:
        zero = (0,) * self.dim
        return make_vass(
            self.dim, self.alphabet, self.states, sorted(self.transitions, key=str),
            initials=[("init", zero)], finals=[(q, zero) for q in finals],
        )


def _common_gadgets(m: Lcm, l0: str, dim: int) -> _Builder:
    """Prefix skipping, sink, start, control, encoding and zero-test gadgets."""
    sigma = m.encoding_alphabet
    zs = m.counter_letters
    b = _Builder(sigma, dim)
    b.state("init")
    b.state("skip")
    b.state(SINK)
    b.state("end")
    b.loop("skip", sigma)
    b.loop(SINK, sigma)
    entries = ("init", "skip")
    for e in entries:
        for x in sigma:
            b.add(e, x, "skip")

    def enter(letter: str, gadget: str, effect: int = 0):
        for e in entries:
            b.add(e, letter, gadget, effect)

    # the reversed word must end in l0 preceded by a state letter (or nothing)
    for x in sigma:
        if x != l0:
            enter(x, "end")
    for z in zs:
        enter(z, "start-z")
    b.add("start-z", l0, "end")

    # infix q Z* p with no transition p -> q
    pairs = {(t.source, t.target) for t in m.transitions}
    for q in m.states:
        ctl = f"ctl[{q}]"
        enter(q, ctl)
        b.loop(ctl, zs)
        for p in m.states:
            if (p, q) not in pairs:
                b.add(ctl, p, SINK)

    # infix z_i z_j with i < j
    for i, zi in enumerate(zs):
        enc = f"enc[{zi}]"
        enter(zi, enc)
        for zj in zs[i + 1:]:
            b.add(enc, zj, SINK)

    # zero tests: a z_i next to either side of the tested pair
    for k, t in enumerate(m.transitions, start=1):
        p, q = t.source, t.target
        for i, op in enumerate(t.ops):
            if op != "ztest":
                continue
            zi = zs[i]
            g = f"zt{k}.{i + 1}"
            enter(zi, f"{g}.b")
            b.loop(f"{g}.b", zs)
            b.add(f"{g}.b", q, f"{g}.q")
            b.loop(f"{g}.q", zs)
            b.add(f"{g}.q", p, SINK)
            enter(q, f"{g}.q2")
            b.loop(f"{g}.q2", zs)
            b.add(f"{g}.q2", zi, f"{g}.a")
            b.loop(f"{g}.a", zs)
            b.add(f"{g}.a", p, SINK)
    return b


def _counter_cases(m: Lcm):
    for k, t in enumerate(m.transitions, start=1):
        for i, op in enumerate(t.ops):
            if op in _SLACK:
                yield k, t, i, _SLACK[op]


def build_complement_vass(m: Lcm, l0: str) -> Vass:
    """1-VASS (cover mode, ε-free) accepting exactly the words whose reversal
    is not a valid run encoding of ``m`` from l0(0..0).

    Machines with parallel transitions are first passed through
    :func:`split_parallel`; the encoding alphabet is then that of the split
    machine.
    """
    if l0 not in m.states:
        raise ValidationError(f"unknown state {l0}")
    m = split_parallel(m, l0)
    zs = m.counter_letters
    b = _common_gadgets(m, l0, 1)
    # counter gadgets: count b upwards, a downwards, then pay k on p
    for k, t, i, slack in _counter_cases(m):
        zi = zs[i]
        up, down = f"cnt{k}.{i + 1}.b", f"cnt{k}.{i + 1}.a"
        for e in ("init", "skip"):
            b.add(e, zi, up, 1)
            b.add(e, t.target, down)
        b.add(up, zi, up, 1)
        b.loop(up, [z for z in zs if z != zi])
        b.add(up, t.target, down)
        b.add(down, zi, down, -1)
        b.loop(down, [z for z in zs if z != zi])
        b.add(down, t.source, SINK, -slack)
    return b.build(["init", "end", SINK])


def build_complement_nfa(m: Lcm, l0: str, bound: int) -> Vass:
    """Dimension-0 variant for machines whose reachable counters stay <= ``bound``.

    Counter gadgets become finite unions over values up to the bound, and
    any infix z_i^(bound+1) is accepted outright.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if l0 not in m.states:
        raise ValidationError(f"unknown state {l0}")
    m = split_parallel(m, l0)
    zs = m.counter_letters
    b = _common_gadgets(m, l0, 0)
    for zi in zs:
        chain = [f"over[{zi}].{c}" for c in range(1, bound + 1)] + [SINK]
        for e in ("init", "skip"):
            b.add(e, zi, chain[0])
        for here, there in zip(chain, chain[1:]):
            b.add(here, zi, there)
    for k, t, i, slack in _counter_cases(m):
        zi = zs[i]
        others = [z for z in zs if z != zi]

        def up(c):
            return f"cnt{k}.{i + 1}.b{c}"

        def down(c, d):
            return f"cnt{k}.{i + 1}.a{c}.{d}"

        for e in ("init", "skip"):
            if bound >= 1:
                b.add(e, zi, up(1))
            b.add(e, t.target, down(0, 0))
        for c in range(1, bound + 1):
            if c < bound:
                b.add(up(c), zi, up(c + 1))
            b.loop(up(c), others)
            b.add(up(c), t.target, down(c, 0))
        for c in range(bound + 1):
            for d in range(c + 1):
                if d < c:
                    b.add(down(c, d), zi, down(c, d + 1))
                b.loop(down(c, d), others)
                if c >= d + slack:
                    b.add(down(c, d), t.source, SINK)
    return b.build(["init", "end", SINK])
