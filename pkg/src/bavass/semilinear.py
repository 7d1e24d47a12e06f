"""Images of fixed-b-count languages and semilinear sets.

The image of L restricted to words with l letters b is the set of tuples
(m_1, ..., m_{l+1}) with a^m1 b ... b a^m(l+1) in L. For a run skeleton
alpha_1 beta_1^a1 alpha'_1 ... alpha_g beta_g^ag alpha'_g the exponents that
yield accepting runs are exactly the solutions of a linear system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterator, Optional, Sequence

from .errors import CapTooLarge, DimensionMismatch, SkeletonError, UnsupportedPeriods
from .model import Configuration, Run, Vass, vec_leq
from .semantics import _resolve_budget, advance, frontier_accepts, initial_frontier

SKELETON_LIMIT = 10**6


@dataclass(frozen=True)
class Skeleton:
    alphas: tuple
    betas: tuple
    alpha_primes: tuple
    init: Configuration
    final: Configuration

    def __post_init__(self):
        for name in ("alphas", "betas", "alpha_primes"):
            object.__setattr__(self, name, tuple(tuple(p) for p in getattr(self, name)))
        if not len(self.alphas) == len(self.betas) == len(self.alpha_primes):
            raise SkeletonError("alpha, beta and alpha' lists differ in length")

    @property
    def blocks(self) -> int:
        return len(self.betas)

    def pieces(self) -> Iterator[tuple]:
        """(kind, block index, steps) in run order; kind is alpha, beta or alpha'."""
        for j in range(self.blocks):
            yield "alpha", j, self.alphas[j]
            yield "beta", j, self.betas[j]
            yield "alpha'", j, self.alpha_primes[j]

    def steps(self, exponents: Sequence[int]) -> tuple:
        out = []
        for j in range(self.blocks):
            out += self.alphas[j] + self.betas[j] * exponents[j] + self.alpha_primes[j]
        return tuple(out)


def check_skeleton(v: Vass, skel: Skeleton) -> None:
    """Raise SkeletonError unless the pieces chain from init to final and betas are loops."""
    known = set(v.transitions)
    state = skel.init.state
    if len(skel.init.values) != v.dim or len(skel.final.values) != v.dim:
        raise SkeletonError("init/final vectors have the wrong dimension")
    for kind, j, piece in skel.pieces():
        for t in piece:
            if t not in known:
                raise SkeletonError(f"{kind}{j + 1} uses a transition not in the machine: {t}")
            if t.source != state:
                raise SkeletonError(f"{kind}{j + 1} breaks the chain at {t} (expected source {state})")
            state = t.target
        if kind == "beta" and piece and piece[0].source != piece[-1].target:
            raise SkeletonError(f"beta{j + 1} is not a loop")
    if state != skel.final.state:
        raise SkeletonError(f"skeleton ends in {state}, final state is {skel.final.state}")


@dataclass(frozen=True)
class Inequality:
    """constant + sum(coeffs[j] * a_(j+1)) >= 0"""

    constant: int
    coeffs: tuple
    note: str = field(default="", compare=False)

    def holds(self, values: Sequence[int]) -> bool:
        return self.constant + sum(c * x for c, x in zip(self.coeffs, values)) >= 0

    def __str__(self):
        terms = [str(self.constant)]
        for j, c in enumerate(self.coeffs, start=1):
            if c:
                terms.append(f"{'-' if c < 0 else '+'} {abs(c)}*a{j}")
        return " ".join(terms) + " >= 0"


@dataclass(frozen=True)
class LinearSystem:
    variables: int
    inequalities: tuple

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        for q in self.inequalities:
            if len(q.coeffs) != self.variables:
                raise DimensionMismatch(f"inequality {q} has {len(q.coeffs)} coefficients")

    def holds(self, values: Sequence[int]) -> bool:
        return all(q.holds(values) for q in self.inequalities)

    def lines(self) -> list[str]:
        return [f"{q}    # {q.note}" if q.note else str(q) for q in self.inequalities]


def build_image_system(v: Vass, skel: Skeleton) -> LinearSystem:
    """Inequalities over a_1..a_g that hold iff the skeleton instantiates to
    an accepting run (final configuration covered)."""
    check_skeleton(v, skel)
    g = skel.blocks
    out: list = []
    seen: set = set()

    def emit(const: int, coeffs: list, note: str):
        q = Inequality(const, tuple(coeffs), note)
        if q not in seen:
            seen.add(q)
            out.append(q)

    for i in range(v.dim):
        const = skel.init.values[i]
        coeffs = [0] * g
        for j in range(g):
            for pos, t in enumerate(skel.alphas[j], start=1):
                const += t.effect[i]
                emit(const, coeffs[:], f"counter {i + 1}, alpha{j + 1} step {pos}")
            loop = sum(t.effect[i] for t in skel.betas[j])
            partial = 0
            for pos, t in enumerate(skel.betas[j], start=1):
                partial += t.effect[i]
                if loop <= 0:
                    c = coeffs[:]
                    c[j] += loop
                    emit(const - loop + partial, c, f"counter {i + 1}, beta{j + 1} step {pos}, last pass")
                else:
                    emit(const + partial, coeffs[:], f"counter {i + 1}, beta{j + 1} step {pos}, first pass")
            coeffs[j] += loop
            for pos, t in enumerate(skel.alpha_primes[j], start=1):
                const += t.effect[i]
                emit(const, coeffs[:], f"counter {i + 1}, alpha'{j + 1} step {pos}")
        emit(const - skel.final.values[i], coeffs[:], f"counter {i + 1}, acceptance")
    for j in range(g):
        unit = [0] * g
        unit[j] = 1
        emit(-1, unit, f"a{j + 1} >= 1")
    return LinearSystem(g, out)


def enumerate_solutions(system: LinearSystem, bound: int) -> set:
    """All tuples in [1, bound]^v satisfying the system."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    return {
        t for t in cartesian(range(1, bound + 1), repeat=system.variables) if system.holds(t)
    }


def image_truncated(v: Vass, b_count: int, bound: int) -> set:
    """Tuples (m_1..m_(l+1)) in [0, bound]^(l+1) with a^m1 b ... b a^m(l+1) accepted."""
    if b_count < 0 or bound < 0:
        raise ValueError("b_count and bound must be non-negative")
    budget = _resolve_budget(v, b_count + (b_count + 1) * bound, None)
    found = set()

    def walk(frontier, prefix):
        last = len(prefix) == b_count
        for m in range(bound + 1):
            if m:
                frontier = advance(v, frontier, "a", budget)
                if not frontier:
                    break
            if last:
                if frontier_accepts(v, frontier):
                    found.add(prefix + (m,))
            else:
                nxt = advance(v, frontier, "b", budget)
                if nxt:
                    walk(nxt, prefix + (m,))

    start = initial_frontier(v, budget)
    if start:
        walk(start, ())
    return found


@dataclass(frozen=True)
class SemilinearSet:
    """Union of linear sets base + N·p_1 + ... + N·p_k."""

    components: tuple

    def __post_init__(self):
        comps = tuple((tuple(b), tuple(tuple(p) for p in ps)) for b, ps in self.components)
        object.__setattr__(self, "components", comps)
        dims = {len(b) for b, _ in comps} | {len(p) for _, ps in comps for p in ps}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")

    @property
    def dim(self) -> Optional[int]:
        return len(self.components[0][0]) if self.components else None


def _linear_contains(base: tuple, periods: tuple, t: tuple) -> bool:
    periods = tuple(p for p in periods if any(p))

    @lru_cache(maxsize=None)
    def reach(k: int, rest: tuple) -> bool:
        if not any(rest):
            return True
        if k == len(periods):
            return False
        p = periods[k]
        limit = min(r // x for r, x in zip(rest, p) if x > 0)
        return any(
            reach(k + 1, tuple(r - c * x for r, x in zip(rest, p))) for c in range(limit + 1)
        )

    rest = tuple(x - b for x, b in zip(t, base))
    return all(r >= 0 for r in rest) and reach(0, rest)


def semilinear_contains(s: SemilinearSet, t: Sequence[int]) -> bool:
    t = tuple(t)
    if s.dim is not None and len(t) != s.dim:
        raise DimensionMismatch(f"tuple has dimension {len(t)}, set has {s.dim}")
    for _, periods in s.components:
        if any(x < 0 for p in periods for x in p):
            raise UnsupportedPeriods("periods with negative entries are not supported")
    return any(_linear_contains(b, ps, t) for b, ps in s.components)


@dataclass(frozen=True)
class Instantiation:
    """Outcome of instantiating a skeleton; ``position`` is the 1-based
    step at which a counter first went negative."""

    valid: bool
    run: Optional[Run] = None
    position: Optional[int] = None
    accepting: bool = False


def instantiate_skeleton(v: Vass, skel: Skeleton, exponents: Sequence[int]) -> Instantiation:
    check_skeleton(v, skel)
    if len(exponents) != skel.blocks:
        raise SkeletonError(f"expected {skel.blocks} exponents, got {len(exponents)}")
    steps = skel.steps(exponents)
    values = list(skel.init.values)
    for pos, t in enumerate(steps, start=1):
        values = [x + e for x, e in zip(values, t.effect)]
        if any(x < 0 for x in values):
            return Instantiation(False, position=pos)
    run = Run(skel.init, steps)
    accepting = run.end.state == skel.final.state and vec_leq(skel.final.values, run.end.values)
    return Instantiation(True, run, accepting=accepting)


def _paths(v: Vass, letter: str, cap: int) -> dict:
    """state -> paths (tuples of transitions) reading letter^k, k <= cap, starting there."""
    out = {q: [()] for q in v.states}
    frontier = {q: [()] for q in v.states}
    for _ in range(cap):
        nxt = {q: [] for q in v.states}
        for q, paths in frontier.items():
            for p in paths:
                end = p[-1].target if p else q
                for t in v.by_letter.get((end, letter), ()):
                    nxt[q].append(p + (t,))
        for q in v.states:
            out[q] += nxt[q]
        frontier = nxt
    return out


def enumerate_skeletons(
    v: Vass, blocks: int, cap: int, init: Configuration, final: Configuration,
    limit: int = SKELETON_LIMIT,
) -> Iterator[Skeleton]:
    """Every skeleton with ``blocks`` blocks and pieces of length <= cap.

    alpha and beta read a*, alpha' reads a*b except in the last block where it
    reads a*. Refuses with CapTooLarge when a coarse upper bound on the number
    of skeletons exceeds ``limit``.
    """
    if blocks < 1 or cap < 0:
        raise ValueError("need blocks >= 1 and cap >= 0")
    a_paths = _paths(v, "a", cap)
    total = sum(len(p) for p in a_paths.values())
    if total ** (3 * blocks) > limit:
        raise CapTooLarge(f"about {total}^{3 * blocks} skeletons exceed the limit {limit}")

    def closing(q: str, last: bool) -> list:
        if last:
            return a_paths[q]
        out = []
        for p in a_paths[q]:
            if len(p) < cap:
                end = p[-1].target if p else q
                out += [p + (t,) for t in v.by_letter.get((end, "b"), ())]
        return out

    def end_of(q, p):
        return p[-1].target if p else q

    def walk(j: int, q: str, acc: list):
        if j == blocks:
            if q == final.state:
                al, be, ap = zip(*acc)
                yield Skeleton(al, be, ap, init, final)
            return
        for alpha in a_paths[q]:
            q1 = end_of(q, alpha)
            for beta in a_paths[q1]:
                if beta and beta[-1].target != q1:
                    continue
                for ap in closing(q1, j == blocks - 1):
                    yield from walk(j + 1, end_of(q1, ap), acc + [(alpha, beta, ap)])

    yield from walk(0, init.state, [])
