"""Domain types: VASSs, lossy counter machines, configurations and runs.

Counter indices exposed to users (supports, counter subsets, error
messages) are 1-based; vectors themselves are plain 0-based tuples.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import NameCollision, NegativeCounter, ValidationError, WrongState

EPS = None
MODES = ("cover", "exact", "downward")
LCM_OPS = ("inc", "dec", "ztest", "skip")


@functools.total_ordering
class _Omega:
    """The ω symbol: larger than every natural, absorbing under addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "w"

    def __reduce__(self):
        return (_Omega, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("omega")

    def __lt__(self, other):
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, int):
            return self
        return NotImplemented

    __radd__ = __add__


OMEGA = _Omega()

Extended = Union[int, _Omega]


def vec_leq(u: Sequence[Extended], v: Sequence[Extended]) -> bool:
    """Coordinatewise u <= v over naturals extended with ω."""
    return all(a <= b for a, b in zip(u, v))


def vec_add(u: Sequence[Extended], e: Sequence[int]) -> tuple:
    return tuple(a + b for a, b in zip(u, e))


def support(effect: Sequence[int]) -> frozenset:
    """1-based indices of the strictly positive entries."""
    return frozenset(i + 1 for i, x in enumerate(effect) if x > 0)


@dataclass(frozen=True, order=True)
class Configuration:
    state: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __str__(self):
        return f"{self.state}({','.join(map(str, self.values))})"


@dataclass(frozen=True)
class Transition:
    source: str
    label: Optional[str]
    effect: tuple
    target: str

    def __post_init__(self):
        object.__setattr__(self, "effect", tuple(self.effect))

    @property
    def is_epsilon(self) -> bool:
        return self.label is EPS

    def __str__(self):
        label = "eps" if self.label is EPS else self.label
        eff = ",".join(f"{x:+d}" if x else "0" for x in self.effect)
        return f"{self.source} -{label},({eff})-> {self.target}"


@dataclass(frozen=True)
class Vass:
    """A d-dimensional VASS with an explicit acceptance mode.

    ``finals`` is used in ``cover`` and ``exact`` mode; ``atoms`` (pairs of
    a state and a vector over naturals and ω) only in ``downward`` mode.
    """

    dim: int
    alphabet: tuple
    states: tuple
    transitions: tuple
    initials: tuple
    finals: tuple = ()
    mode: str = "cover"
    atoms: tuple = ()

    def __post_init__(self):
        for name in ("alphabet", "states", "transitions", "initials", "finals"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(
            self, "atoms", tuple((q, tuple(u)) for q, u in self.atoms)
        )
        self._validate()

    def _validate(self):
        if self.dim < 0:
            raise ValidationError("dimension must be non-negative")
        if self.mode not in MODES:
            raise ValidationError(f"unknown acceptance mode {self.mode!r}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("duplicate letter in alphabet")
        if "eps" in self.alphabet:
            raise ValidationError("'eps' is reserved for the empty label")
        if len(set(self.states)) != len(self.states):
            raise ValidationError("duplicate state")
        states = set(self.states)
        letters = set(self.alphabet)
        seen = set()
        for t in self.transitions:
            if t.source not in states or t.target not in states:
                raise ValidationError(f"transition {t} uses an undeclared state")
            if t.label is not EPS and t.label not in letters:
                raise ValidationError(f"transition {t} reads a letter outside the alphabet")
            if len(t.effect) != self.dim:
                raise ValidationError(f"transition {t} has effect of wrong dimension")
            if t in seen:
                raise ValidationError(f"duplicate transition {t}")
            seen.add(t)
        for kind, configs in (("initial", self.initials), ("final", self.finals)):
            if len(set(configs)) != len(configs):
                raise ValidationError(f"duplicate {kind} configuration")
            for c in configs:
                if c.state not in states:
                    raise ValidationError(f"{kind} configuration {c} uses an undeclared state")
                if len(c.values) != self.dim:
                    raise ValidationError(f"{kind} configuration {c} has wrong dimension")
                if any(not isinstance(x, int) or x < 0 for x in c.values):
                    raise ValidationError(f"{kind} configuration {c} is not over naturals")
        if self.mode == "downward":
            if self.finals:
                raise ValidationError("downward mode takes atoms, not final configurations")
        elif self.atoms:
            raise ValidationError("atoms are only allowed in downward mode")
        for q, u in self.atoms:
            if q not in states:
                raise ValidationError(f"atom on undeclared state {q}")
            if len(u) != self.dim:
                raise ValidationError(f"atom {q}{u} has wrong dimension")
            if any(x is not OMEGA and (not isinstance(x, int) or x < 0) for x in u):
                raise ValidationError(f"atom {q}{u} has an entry outside N ∪ {{ω}}")

    @functools.cached_property
    def outgoing(self) -> dict:
        """state -> transitions leaving it, in declaration order."""
        table = defaultdict(list)
        for t in self.transitions:
            table[t.source].append(t)
        return {q: tuple(table[q]) for q in self.states}

    @functools.cached_property
    def by_letter(self) -> dict:
        """(state, label) -> transitions, label None for ε."""
        table = defaultdict(list)
        for t in self.transitions:
            table[(t.source, t.label)].append(t)
        return {k: tuple(v) for k, v in table.items()}

    @property
    def epsilon_free(self) -> bool:
        return all(not t.is_epsilon for t in self.transitions)

    @property
    def norm(self) -> int:
        """Largest absolute entry over effects, initial/final vectors and finite atom entries."""
        entries = [abs(x) for t in self.transitions for x in t.effect]
        entries += [x for c in self.initials + self.finals for x in c.values]
        entries += [x for _, u in self.atoms for x in u if x is not OMEGA]
        return max(entries, default=0)

    def is_accepting(self, c: Configuration) -> bool:
        if self.mode == "cover":
            return any(f.state == c.state and vec_leq(f.values, c.values) for f in self.finals)
        if self.mode == "exact":
            return c in self._final_set
        return any(q == c.state and vec_leq(c.values, u) for q, u in self.atoms)

    @functools.cached_property
    def _final_set(self) -> frozenset:
        return frozenset(self.finals)


@dataclass(frozen=True)
class Run:
    """A start configuration plus a fireable transition sequence.

    Construction fails with WrongState or NegativeCounter when the steps do
    not chain or some intermediate counter would drop below zero.
    """

    start: Configuration
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        state, values = self.start.state, self.start.values
        for t in self.steps:
            if t.source != state:
                raise WrongState(f"step {t} does not start in {state}")
            values = vec_add(values, t.effect)
            for i, x in enumerate(values):
                if x < 0:
                    raise NegativeCounter(i + 1)
            state = t.target

    def __len__(self):
        return len(self.steps)

    @property
    def effect(self) -> tuple:
        total = [0] * len(self.start.values)
        for t in self.steps:
            for i, x in enumerate(t.effect):
                total[i] += x
        return tuple(total)

    @property
    def support(self) -> frozenset:
        return support(self.effect)

    @property
    def word(self) -> tuple:
        return tuple(t.label for t in self.steps if not t.is_epsilon)

    def configurations(self) -> list:
        out = [self.start]
        for t in self.steps:
            c = out[-1]
            out.append(Configuration(t.target, vec_add(c.values, t.effect)))
        return out

    @property
    def end(self) -> Configuration:
        return self.configurations()[-1]

    def __str__(self):
        parts = [str(self.start)]
        for t, c in zip(self.steps, self.configurations()[1:]):
            label = "eps" if t.is_epsilon else t.label
            parts.append(f"-{label}-> {c}")
        return " ".join(parts)


@dataclass(frozen=True)
class LcmTransition:
    source: str
    ops: tuple
    target: str

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __str__(self):
        return f"{self.source} -[{','.join(self.ops)}]-> {self.target}"


@dataclass(frozen=True)
class Lcm:
    """Lossy counter machine over counters z1..zn."""

    states: tuple
    counters: int
    transitions: tuple
    initial: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.counters < 0:
            raise ValidationError("counter count must be non-negative")
        if len(set(self.states)) != len(self.states):
            raise ValidationError("duplicate state")
        states = set(self.states)
        if self.initial is not None and self.initial not in states:
            raise ValidationError(f"initial state {self.initial} is undeclared")
        clash = states & set(self.counter_letters)
        if clash:
            raise NameCollision(f"state names clash with counter letters: {sorted(clash)}")
        seen = set()
        for t in self.transitions:
            if t.source not in states or t.target not in states:
                raise ValidationError(f"transition {t} uses an undeclared state")
            if len(t.ops) != self.counters:
                raise ValidationError(f"transition {t} has {len(t.ops)} ops, expected {self.counters}")
            bad = [op for op in t.ops if op not in LCM_OPS]
            if bad:
                raise ValidationError(f"unknown op {bad[0]!r} in {t}")
            if t in seen:
                raise ValidationError(f"duplicate transition {t}")
            seen.add(t)

    @property
    def counter_letters(self) -> tuple:
        return tuple(f"z{i}" for i in range(1, self.counters + 1))

    @property
    def encoding_alphabet(self) -> tuple:
        return self.states + self.counter_letters


def make_vass(
    dim: int,
    alphabet: Iterable[str],
    states: Iterable[str],
    transitions: Iterable[tuple],
    initials: Iterable[tuple],
    finals: Iterable[tuple] = (),
    mode: str = "cover",
    atoms: Iterable[tuple] = (),
) -> Vass:
    """Convenience builder taking plain tuples.

    ``transitions`` holds ``(src, label, effect, dst)`` with label ``None``
    for ε; configurations are ``(state, values)``.
    """
    return Vass(
        dim=dim,
        alphabet=tuple(alphabet),
        states=tuple(states),
        transitions=tuple(Transition(s, a, tuple(e), d) for s, a, e, d in transitions),
        initials=tuple(Configuration(q, tuple(v)) for q, v in initials),
        finals=tuple(Configuration(q, tuple(v)) for q, v in finals),
        mode=mode,
        atoms=tuple((q, tuple(u)) for q, u in atoms),
    )


Word = tuple


def parse_word(text: str, alphabet: Sequence[str] = ()) -> Word:
    """Split a CLI word into letters.

    Comma-separated when it contains a comma or the alphabet has a
    multi-character letter; otherwise one letter per character.
    """
    text = text.strip()
    if text in ("", "ε"):
        return ()
    if "," in text or any(len(a) > 1 for a in alphabet):
        return tuple(x for x in (p.strip() for p in text.split(",")) if x)
    return tuple(text)


def format_word(word: Sequence[str]) -> str:
    if not word:
        return "ε"
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return ",".join(word)
