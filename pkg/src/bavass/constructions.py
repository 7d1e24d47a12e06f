"""Closure and conversion constructions, and the U_i / L_k witness families."""

from __future__ import annotations

from functools import reduce

from .errors import (
    AlphabetMismatch,
    DimensionNotZero,
    EpsilonNotSupported,
    IndexOutOfRange,
    NotDownwardMode,
    UnsupportedMode,
)
from .model import EPS, OMEGA, Configuration, Transition, Vass, make_vass


def _same_alphabet(a: Vass, b: Vass) -> None:
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch(
            f"alphabets differ: {sorted(a.alphabet)} vs {sorted(b.alphabet)}"
        )


def _require_cover(*machines: Vass) -> None:
    for m in machines:
        if m.mode != "cover":
            raise UnsupportedMode(f"expected a cover-mode machine, got mode={m.mode}")


def product(a: Vass, b: Vass) -> Vass:
    """Synchronised product: accepts L(a) ∩ L(b), run counts multiply.

    States are named ``qa|qb``; vectors are concatenated (a's counters first).
    """
    _same_alphabet(a, b)
    _require_cover(a, b)
    if not (a.epsilon_free and b.epsilon_free):
        raise EpsilonNotSupported("product needs ε-free machines")

    def name(p, q):
        return f"{p}|{q}"

    transitions = [
        Transition(name(ta.source, tb.source), ta.label, ta.effect + tb.effect,
                   name(ta.target, tb.target))
        for ta in a.transitions
        for tb in b.transitions
        if ta.label == tb.label
    ]
    return Vass(
        dim=a.dim + b.dim,
        alphabet=a.alphabet,
        states=[name(p, q) for p in a.states for q in b.states],
        transitions=transitions,
        initials=[Configuration(name(c.state, e.state), c.values + e.values)
                  for c in a.initials for e in b.initials],
        finals=[Configuration(name(c.state, e.state), c.values + e.values)
                for c in a.finals for e in b.finals],
    )


def intersect_regular(a: Vass, r: Vass) -> Vass:
    """Product with a 0-dimensional machine (an NFA)."""
    if r.dim != 0:
        raise DimensionNotZero(f"expected an NFA (dimension 0), got dimension {r.dim}")
    return product(a, r)


def _pad(values: tuple, dim: int) -> tuple:
    return tuple(values) + (0,) * (dim - len(values))


def union_vass(a: Vass, b: Vass) -> Vass:
    """Disjoint union; the lower-dimensional side is padded with trailing zeros.

    States are renamed ``L.q`` and ``R.q``; run counts add.
    """
    _same_alphabet(a, b)
    _require_cover(a, b)
    dim = max(a.dim, b.dim)

    def side(m: Vass, prefix: str):
        ts = [Transition(prefix + t.source, t.label, _pad(t.effect, dim), prefix + t.target)
              for t in m.transitions]
        init = [Configuration(prefix + c.state, _pad(c.values, dim)) for c in m.initials]
        fin = [Configuration(prefix + c.state, _pad(c.values, dim)) for c in m.finals]
        return [prefix + q for q in m.states], ts, init, fin

    sa, ta, ia, fa = side(a, "L.")
    sb, tb, ib, fb = side(b, "R.")
    return Vass(dim=dim, alphabet=a.alphabet, states=sa + sb, transitions=ta + tb,
                initials=ia + ib, finals=fa + fb)


def down_to_reach(v: Vass) -> Vass:
    """Exact-acceptance machine with the same language as a downward-mode one.

    For the j-th atom q(u) a fresh state ``q@j`` is entered by a zero ε-step
    from q; ε self-loops there raise each finite coordinate and lower each ω
    coordinate by one, and the only accepting configuration is q@j(û) with
    û_i = u_i when finite and 0 when u_i = ω.
    """
    if v.mode != "downward":
        raise NotDownwardMode(f"expected a downward-mode machine, got mode={v.mode}")
    states = list(v.states)
    transitions = list(v.transitions)
    finals = []
    taken = set(states)
    for j, (q, u) in enumerate(v.atoms, start=1):
        gadget = f"{q}@{j}"
        while gadget in taken:
            gadget += "'"
        taken.add(gadget)
        states.append(gadget)
        transitions.append(Transition(q, EPS, (0,) * v.dim, gadget))
        for i, x in enumerate(u):
            unit = [0] * v.dim
            unit[i] = -1 if x is OMEGA else 1
            transitions.append(Transition(gadget, EPS, tuple(unit), gadget))
        finals.append(Configuration(gadget, tuple(0 if x is OMEGA else x for x in u)))
    return Vass(dim=v.dim, alphabet=v.alphabet, states=states, transitions=transitions,
                initials=v.initials, finals=finals, mode="exact")


def down_to_reach_budget(v: Vass, word_length: int) -> int:
    """ε-steps that always suffice for the converted machine on words of the given length.

    One step enters the gadget; then each finite coordinate climbs at most
    to its atom entry and each ω coordinate descends from at most the
    largest counter value reachable while reading the word.
    """
    up = max((t for tr in v.transitions for t in tr.effect), default=0)
    reach = max((x for c in v.initials for x in c.values), default=0) + word_length * max(up, 0)
    finite = max((x for _, u in v.atoms for x in u if x is not OMEGA), default=0)
    return 1 + v.dim * (finite + reach)


def build_U_vass(blocks: int, index: int) -> Vass:
    """Deterministic 1-VASS for words a^n1 b ... b a^nm (m = ``blocks``) with n_i >= n_{i+1}."""
    if blocks < 2 or not 1 <= index <= blocks - 1:
        raise IndexOutOfRange(f"need blocks >= 2 and 1 <= index <= blocks-1, got ({blocks}, {index})")
    states = [f"s{j}" for j in range(1, blocks + 1)]
    transitions = []
    for j, s in enumerate(states, start=1):
        delta = 1 if j == index else -1 if j == index + 1 else 0
        transitions.append((s, "a", (delta,), s))
        if j < blocks:
            transitions.append((s, "b", (0,), states[j]))
    return make_vass(1, "ab", states, transitions,
                     initials=[(states[0], (0,))], finals=[(states[-1], (0,))])


def build_Lk_vass(k: int) -> Vass:
    """Union of U(k+2, i) for i = 1..k+1; (k+1)-ambiguous."""
    if k < 1:
        raise IndexOutOfRange(f"k must be positive, got {k}")
    return reduce(union_vass, (build_U_vass(k + 2, i) for i in range(1, k + 2)))
