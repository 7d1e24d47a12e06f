"""Block decompositions of runs over {a, b}.

A run reading a^m1 b a^m2 ... b a^mn is split into segments
(alpha_j, beta_j, exponent_j, alpha'_j) so that the run equals
alpha_1 beta_1^e1 alpha'_1 ... alpha_n beta_n^en alpha'_n and six conditions
hold for a cap C:

1. every piece has length <= C, exponents are >= 1, and the pieces
   reconstruct the run exactly;
2. alpha'_j reads a*b for j < n and a* for j = n;
3. alpha_j and beta_j read a*;
4. beta_j is a loop or empty, and non-empty when m_j >= 2C + 1;
5. beta_j is non-negative outside A_j, the union of supports of earlier betas;
6. alpha_j beta_j has no factorisation lambda delta lambda' with delta a
   non-empty loop non-negative outside A_j and lambda' non-empty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .coverability import loop_constant
from .errors import PreconditionUnverified, ShapeError
from .model import Configuration, Run, Transition, Vass, support
from .semantics import _successors

DEFAULT_EXTENSION_BUDGET = 16


@dataclass(frozen=True)
class Segment:
    alpha: tuple
    beta: tuple
    exponent: int
    alpha_prime: tuple

    def steps(self) -> tuple:
        return self.alpha + self.beta * self.exponent + self.alpha_prime


@dataclass(frozen=True)
class Decomposition:
    segments: tuple
    cap: int

    def steps(self) -> tuple:
        return tuple(t for seg in self.segments for t in seg.steps())


@dataclass(frozen=True)
class Violation:
    condition: int
    segment: Optional[int]
    detail: str = ""

    def __str__(self):
        where = "" if self.segment is None else f" at segment {self.segment}"
        return f"condition {self.condition} violated{where}: {self.detail}"


def _effect(steps: Sequence[Transition], dim: int) -> list:
    total = [0] * dim
    for t in steps:
        for i, x in enumerate(t.effect):
            total[i] += x
    return total


def _letters(steps: Sequence[Transition]) -> str:
    return "".join("" if t.is_epsilon else t.label for t in steps)


def _block_lengths(run: Run) -> list:
    if any(t.is_epsilon or t.label not in ("a", "b") for t in run.steps):
        raise ShapeError("run must read a word over {a, b} without ε-steps")
    return [len(x) for x in _letters(run.steps).split("b")]


def _is_loop(steps: Sequence[Transition]) -> bool:
    return not steps or steps[0].source == steps[-1].target


def _nonneg_outside(effect: Sequence[int], avoided: frozenset) -> bool:
    return all(x >= 0 for i, x in enumerate(effect) if i + 1 not in avoided)


def has_pumpable_factor(steps: Sequence[Transition], avoided: frozenset, dim: int) -> bool:
    """Whether steps = lambda delta lambda' with delta a non-empty loop,
    non-negative outside ``avoided``, and lambda' non-empty."""
    prefix = [[0] * dim]
    for t in steps:
        prefix.append([a + b for a, b in zip(prefix[-1], t.effect)])
    checked = [i for i in range(dim) if i + 1 not in avoided]
    for start in range(len(steps)):
        for end in range(start + 1, len(steps)):
            if steps[start].source != steps[end - 1].target:
                continue
            if all(prefix[end][i] - prefix[start][i] >= 0 for i in checked):
                return True
    return False


def check_decomposition(v: Vass, run: Run, dec: Decomposition) -> list:
    """Every violated condition, in (condition, segment) order."""
    blocks = _block_lengths(run)
    segs = dec.segments
    n = len(segs)
    cap = dec.cap
    out = []
    if not (n == len(blocks) or (n == 0 and not run.steps)):
        out.append(Violation(1, None, f"{n} segments for a run with {len(blocks)} blocks"))
    if dec.steps() != run.steps:
        out.append(Violation(1, None, "segments do not reconstruct the run"))
    avoided = frozenset()
    for j, seg in enumerate(segs, start=1):
        pieces = (("alpha", seg.alpha), ("beta", seg.beta), ("alpha'", seg.alpha_prime))
        for name, piece in pieces:
            if len(piece) > cap:
                out.append(Violation(1, j, f"|{name}| = {len(piece)} exceeds cap {cap}"))
        if seg.beta and seg.exponent < 1:
            out.append(Violation(1, j, "exponent must be at least 1"))
        tail = _letters(seg.alpha_prime)
        want = "a*b" if j < n else "a*"
        if (j < n and not (tail.endswith("b") and set(tail[:-1]) <= {"a"})) or (
            j == n and set(tail) - {"a"}
        ):
            out.append(Violation(2, j, f"alpha' reads {tail!r}, expected {want}"))
        if set(_letters(seg.alpha + seg.beta)) - {"a"}:
            out.append(Violation(3, j, "alpha or beta reads a b"))
        if not _is_loop(seg.beta):
            out.append(Violation(4, j, "beta is not a loop"))
        if j <= len(blocks) and blocks[j - 1] >= 2 * cap + 1 and not seg.beta:
            out.append(Violation(4, j, f"block of length {blocks[j - 1]} needs a non-empty beta"))
        beta_eff = _effect(seg.beta, v.dim)
        if not _nonneg_outside(beta_eff, avoided):
            out.append(Violation(5, j, f"beta effect {tuple(beta_eff)} negative outside A = {sorted(avoided)}"))
        if has_pumpable_factor(seg.alpha + seg.beta, avoided, v.dim):
            out.append(Violation(6, j, "alpha beta contains a pumpable non-negative loop"))
        avoided = avoided | support(beta_eff)
    out.sort(key=lambda x: (x.condition, x.segment or 0))
    return out


def verify_decomposition(v: Vass, run: Run, dec: Decomposition) -> Optional[Violation]:
    """None when every condition holds, else the first violation."""
    violations = check_decomposition(v, run, dec)
    return violations[0] if violations else None


def has_accepting_extension(v: Vass, c: Configuration, budget: int) -> bool:
    """Whether some run of length <= budget leads from c to an accepting configuration."""
    seen = {c}
    frontier = deque([(c, 0)])
    while frontier:
        cur, depth = frontier.popleft()
        if v.is_accepting(cur):
            return True
        if depth == budget:
            continue
        for label in {t.label for t in v.outgoing[cur.state]}:
            for _, nxt in _successors(v, cur, label):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append((nxt, depth + 1))
    return False


def _split_blocks(run: Run) -> list:
    """[(a-steps of block j, b-step closing it or None)]."""
    out, current = [], []
    for t in run.steps:
        if t.label == "b":
            out.append((tuple(current), t))
            current = []
        else:
            current.append(t)
    out.append((tuple(current), None))
    return out


def _candidates(v: Vass, steps: tuple, closer, avoided: frozenset, cap: int):
    """Segments for one block in canonical order: non-empty beta first,
    shortest alpha beta first, then shorter alpha; empty beta last with alpha
    as long as possible."""
    length = len(steps)
    tail = (closer,) if closer is not None else ()
    for total in range(1, min(2 * cap, length) + 1):
        for p in range(0, min(cap, total - 1) + 1):
            q = total - p
            if q > cap:
                continue
            beta = steps[p:total]
            if not _is_loop(beta):
                continue
            beta_eff = _effect(beta, v.dim)
            if not _nonneg_outside(beta_eff, avoided):
                continue
            reps = 1
            while steps[p + reps * q: p + (reps + 1) * q] == beta:
                reps += 1
            rest = steps[p + reps * q:] + tail
            if len(rest) > cap:
                continue
            if has_pumpable_factor(steps[:total], avoided, v.dim):
                continue
            yield Segment(steps[:p], beta, reps, rest), avoided | support(beta_eff)
    if length >= 2 * cap + 1:
        return
    for p in range(min(cap, length), -1, -1):
        rest = steps[p:] + tail
        if len(rest) > cap:
            break
        if has_pumpable_factor(steps[:p], avoided, v.dim):
            continue
        yield Segment(steps[:p], (), 1, rest), avoided


def decompose_run(
    v: Vass, run: Run, cap: int, extension_budget: int = DEFAULT_EXTENSION_BUDGET
) -> Optional[Decomposition]:
    """Canonical decomposition of ``run`` with pieces bounded by ``cap``.

    Segments are chosen left to right, backtracking when a later block
    cannot be completed. Returns None when no decomposition exists within
    the cap. Raises PreconditionUnverified when no accepting continuation of
    length <= ``extension_budget`` is found.
    """
    _block_lengths(run)
    if not has_accepting_extension(v, run.end, extension_budget):
        raise PreconditionUnverified(
            f"no accepting extension of length <= {extension_budget} from {run.end}"
        )
    if not run.steps:
        return Decomposition((), cap)
    blocks = _split_blocks(run)
    dead = set()

    def search(j: int, avoided: frozenset):
        if j == len(blocks):
            return []
        if (j, avoided) in dead:
            return None
        steps, closer = blocks[j]
        for seg, nxt in _candidates(v, steps, closer, avoided, cap):
            rest = search(j + 1, nxt)
            if rest is not None:
                return [seg] + rest
        dead.add((j, avoided))
        return None

    found = search(0, frozenset())
    return None if found is None else Decomposition(tuple(found), cap)


def suggest_cap(v: Vass, blocks: int) -> int:
    """Cap sufficient for runs with ``blocks`` a-blocks, following the
    inductive constants of the existence argument.

    The counter set A_n depends on the run, so the maximum of M over all
    counter subsets is used for both C_n and K_n.
    """
    s = max((x for c in v.initials for x in c.values), default=0)
    m = max((abs(x) for t in v.transitions for x in t.effect), default=0)
    subsets = [c for r in range(v.dim + 1) for c in combinations(range(1, v.dim + 1), r)]

    def worst(bound: int) -> int:
        return max(loop_constant(v, sub, bound) for sub in subsets)

    cap = 0
    for k in range(1, blocks + 1):
        t = s + 2 * (k - 1) * m * cap
        c_n = worst(t)
        k_n = worst(t + m * c_n)
        cap = max(cap + 1, c_n, k_n)
    return cap
