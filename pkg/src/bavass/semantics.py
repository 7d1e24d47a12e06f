"""Firing, membership, accepting-run enumeration and ambiguity profiling.

Two exploration engines back the public operations:

* a *membership frontier* maps each reachable configuration to the fewest
  ε-steps needed to reach it (enough to decide acceptance), and
* a *counting frontier* maps ``(ε-steps used, configuration)`` to the number
  of distinct partial runs, so run counts never require enumerating runs.

Both respect a per-run ε budget; for ε-free machines the budget is 0.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import AlphabetMismatch, LetterOutsideAlphabet, NegativeCounter, WrongState
from .model import EPS, Configuration, Run, Transition, Vass, Word, format_word


def fire(v: Vass, c: Configuration, t: Transition) -> Configuration:
    if t.source != c.state:
        raise WrongState(f"transition from {t.source} cannot fire in {c}")
    values = tuple(a + b for a, b in zip(c.values, t.effect))
    for i, x in enumerate(values):
        if x < 0:
            raise NegativeCounter(i + 1)
    return Configuration(t.target, values)


def _successors(v: Vass, c: Configuration, label) -> Iterator[tuple[Transition, Configuration]]:
    for t in v.by_letter.get((c.state, label), ()):
        values = tuple(a + b for a, b in zip(c.values, t.effect))
        if all(x >= 0 for x in values):
            yield t, Configuration(t.target, values)


def default_eps_budget(v: Vass, word_length: int) -> int:
    """0 for ε-free machines, else 2·(norm bound + word length)."""
    if v.epsilon_free:
        return 0
    return 2 * (v.norm + word_length)


def _resolve_budget(v: Vass, word_length: int, eps_budget: Optional[int]) -> int:
    if eps_budget is None:
        return default_eps_budget(v, word_length)
    if eps_budget < 0:
        raise ValueError("eps_budget must be non-negative")
    return eps_budget


def _check_word(v: Vass, w: Sequence[str]) -> None:
    letters = set(v.alphabet)
    for a in w:
        if a not in letters:
            raise LetterOutsideAlphabet(f"letter {a!r} is not in the alphabet of the machine")


# -- membership frontier: config -> fewest ε-steps used ------------------------


def _close(v: Vass, frontier: dict, budget: int) -> dict:
    if budget == 0 or v.epsilon_free:
        return frontier
    out = dict(frontier)
    queue = deque(sorted(frontier.items(), key=lambda kv: kv[1]))
    while queue:
        c, e = queue.popleft()
        if e >= budget or out[c] < e:
            continue
        for _, nxt in _successors(v, c, EPS):
            if out.get(nxt, budget + 1) > e + 1:
                out[nxt] = e + 1
                queue.append((nxt, e + 1))
    return out


def initial_frontier(v: Vass, budget: int = 0) -> dict:
    return _close(v, {c: 0 for c in v.initials}, budget)


def advance(v: Vass, frontier: dict, letter: str, budget: int = 0) -> dict:
    out: dict = {}
    for c, e in frontier.items():
        for _, nxt in _successors(v, c, letter):
            if out.get(nxt, budget + 1) > e:
                out[nxt] = e
    return _close(v, out, budget)


def frontier_accepts(v: Vass, frontier: dict) -> bool:
    return any(v.is_accepting(c) for c in frontier)


# -- counting frontier: (ε used, config) -> number of partial runs -------------


def _close_counts(v: Vass, layer: dict, budget: int) -> dict:
    if budget == 0 or v.epsilon_free:
        return layer
    out = defaultdict(int, layer)
    for e in range(budget):
        current = [(c, n) for (ee, c), n in list(out.items()) if ee == e]
        for c, n in current:
            for _, nxt in _successors(v, c, EPS):
                out[(e + 1, nxt)] += n
    return dict(out)


def _initial_counts(v: Vass, budget: int) -> dict:
    return _close_counts(v, {(0, c): 1 for c in v.initials}, budget)


def _advance_counts(v: Vass, layer: dict, letter: str, budget: int) -> dict:
    out: dict = defaultdict(int)
    for (e, c), n in layer.items():
        for _, nxt in _successors(v, c, letter):
            out[(e, nxt)] += n
    return _close_counts(v, dict(out), budget)


def _accepted_count(v: Vass, layer: dict) -> int:
    return sum(n for (_, c), n in layer.items() if v.is_accepting(c))


# -- public operations ---------------------------------------------------------


def accepting_runs(v: Vass, w: Sequence[str], eps_budget: Optional[int] = None) -> set:
    """All accepting runs over ``w`` using at most ``eps_budget`` ε-steps.

    Runs are enumerated explicitly, so this is meant for short words; use
    :func:`count_accepting_runs` when only the number matters.
    """
    return _runs(v, w, eps_budget, accepting=True)


def runs_reading(v: Vass, w: Sequence[str], eps_budget: Optional[int] = None) -> set:
    """All runs from an initial configuration that read exactly ``w``."""
    return _runs(v, w, eps_budget, accepting=False)


def _runs(v: Vass, w: Sequence[str], eps_budget: Optional[int], accepting: bool) -> set:
    w = tuple(w)
    _check_word(v, w)
    budget = _resolve_budget(v, len(w), eps_budget)
    found = set()

    def walk(start, c, pos, eps, steps):
        if pos == len(w) and (not accepting or v.is_accepting(c)):
            found.add(Run(start, tuple(steps)))
        if eps < budget:
            for t, nxt in _successors(v, c, EPS):
                steps.append(t)
                walk(start, nxt, pos, eps + 1, steps)
                steps.pop()
        if pos < len(w):
            for t, nxt in _successors(v, c, w[pos]):
                steps.append(t)
                walk(start, nxt, pos + 1, eps, steps)
                steps.pop()

    for c in v.initials:
        walk(c, c, 0, 0, [])
    return found


def count_accepting_runs(v: Vass, w: Sequence[str], eps_budget: Optional[int] = None) -> int:
    w = tuple(w)
    _check_word(v, w)
    budget = _resolve_budget(v, len(w), eps_budget)
    layer = _initial_counts(v, budget)
    for a in w:
        if not layer:
            return 0
        layer = _advance_counts(v, layer, a, budget)
    return _accepted_count(v, layer)


def is_member(v: Vass, w: Sequence[str], eps_budget: Optional[int] = None) -> bool:
    w = tuple(w)
    _check_word(v, w)
    budget = _resolve_budget(v, len(w), eps_budget)
    frontier = initial_frontier(v, budget)
    for a in w:
        if not frontier:
            return False
        frontier = advance(v, frontier, a, budget)
    return frontier_accepts(v, frontier)


def iter_language(v: Vass, max_len: int, eps_budget: Optional[int] = None) -> Iterator[Word]:
    """Accepted words of length <= max_len in shortlex order (alphabet order)."""
    budget = _resolve_budget(v, max_len, eps_budget)
    level = [((), initial_frontier(v, budget))]
    for length in range(max_len + 1):
        nxt_level = []
        for word, frontier in level:
            if frontier_accepts(v, frontier):
                yield word
            if length < max_len:
                for a in v.alphabet:
                    nxt = advance(v, frontier, a, budget)
                    if nxt:
                        nxt_level.append((word + (a,), nxt))
        level = nxt_level


def sample_language(v: Vass, max_len: int, eps_budget: Optional[int] = None) -> set:
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    return set(iter_language(v, max_len, eps_budget))


def iter_counts(v: Vass, max_len: int, eps_budget: Optional[int] = None) -> Iterator[tuple]:
    """(word, accepting-run count) for every word <= max_len with a live partial run."""
    budget = _resolve_budget(v, max_len, eps_budget)
    level = [((), _initial_counts(v, budget))]
    for length in range(max_len + 1):
        nxt_level = []
        for word, layer in level:
            yield word, _accepted_count(v, layer)
            if length < max_len:
                for a in v.alphabet:
                    nxt = _advance_counts(v, layer, a, budget)
                    if nxt:
                        nxt_level.append((word + (a,), nxt))
        level = nxt_level


@dataclass
class AmbiguityReport:
    max_len: int
    max_count: int = 0
    witnesses: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"max={self.max_count} (words up to length {self.max_len})"]
        for count in sorted(self.witnesses):
            out.append(f"count={count} word={format_word(self.witnesses[count])}")
        return out


def ambiguity_profile(v: Vass, max_len: int, eps_budget: Optional[int] = None) -> AmbiguityReport:
    """Largest run count over accepted words up to ``max_len``, with shortest witnesses."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    report = AmbiguityReport(max_len)
    for word, count in iter_counts(v, max_len, eps_budget):
        if count >= 1 and count not in report.witnesses:
            report.witnesses[count] = word
        report.max_count = max(report.max_count, count)
    return report


def compare_bounded(a: Vass, b: Vass, max_len: int) -> Optional[Word]:
    """Shortest (then alphabet-least) word up to ``max_len`` on which ``a`` and
    ``b`` disagree, or None when their bounded languages coincide."""
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch("machines are over different alphabets")
    ba = _resolve_budget(a, max_len, None)
    bb = _resolve_budget(b, max_len, None)
    level = [((), initial_frontier(a, ba), initial_frontier(b, bb))]
    for length in range(max_len + 1):
        nxt_level = []
        for word, fa, fb in level:
            if frontier_accepts(a, fa) != frontier_accepts(b, fb):
                return word
            if length < max_len:
                for letter in a.alphabet:
                    na = advance(a, fa, letter, ba)
                    nb = advance(b, fb, letter, bb)
                    if na or nb:
                        nxt_level.append((word + (letter,), na, nb))
        level = nxt_level
    return None
