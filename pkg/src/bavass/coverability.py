"""Domination trees, the loop constant M(V, S, n), and coverability.

A domination tree expands configurations over N ∪ {ω} breadth-first and
stops a branch as soon as its label dominates a label on the path above
it (same state, coordinatewise >=). Well-quasi-ordering makes it finite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import TreeTooLarge, ValidationError
from .model import OMEGA, Configuration, Run, Transition, Vass, vec_add, vec_leq

DEFAULT_NODE_CAP = 10**6

DOMINATED = "dominated"
DEAD = "no-enabled-transition"
EXPANDED = "expanded"


@dataclass
class Node:
    index: int
    state: str
    label: tuple
    parent: Optional[int] = None
    via: Optional[Transition] = None
    depth: int = 0
    children: list = field(default_factory=list)
    reason: Optional[str] = None
    dominated_by: Optional[int] = None


@dataclass
class DominationTree:
    nodes: list

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @property
    def depth(self) -> int:
        return max(n.depth for n in self.nodes)

    def __len__(self):
        return len(self.nodes)

    def path(self, index: int) -> list:
        """Nodes from the root down to ``index``."""
        out = []
        node: Optional[Node] = self.nodes[index]
        while node is not None:
            out.append(node)
            node = None if node.parent is None else self.nodes[node.parent]
        return out[::-1]

    def leaves(self) -> list:
        return [n for n in self.nodes if not n.children]

    def lines(self) -> list[str]:
        out = []

        def show(node: Node):
            label = f"{node.state}({','.join(map(str, node.label))})"
            via = "" if node.via is None else f"[{node.via.label or 'eps'}] "
            note = node.reason
            if node.reason == DOMINATED:
                note = f"dominated-by #{node.dominated_by}"
            out.append(f"{'  ' * node.depth}#{node.index} {via}{label} {note}")
            for c in node.children:
                show(self.nodes[c])

        show(self.root)
        return out


def enabled(t: Transition, label: tuple) -> bool:
    return all(x is OMEGA or x + e >= 0 for x, e in zip(label, t.effect))


def _build(v: Vass, state: str, label: tuple, node_cap: int, accelerate: bool) -> DominationTree:
    if state not in v.outgoing:
        raise ValidationError(f"unknown state {state}")
    if len(label) != v.dim:
        raise ValidationError("root label has wrong dimension")
    nodes = [Node(0, state, tuple(label))]
    queue = deque([0])
    while queue:
        node = nodes[queue.popleft()]
        ancestors = []
        p = node.parent
        while p is not None:
            ancestors.append(nodes[p])
            p = nodes[p].parent
        ancestors.reverse()

        stop = None
        for a in ancestors:
            if a.state != node.state:
                continue
            if accelerate:
                if a.label == node.label:
                    stop = a
                    break
            elif vec_leq(a.label, node.label):
                stop = a
                break
        if stop is not None:
            node.reason = DOMINATED
            node.dominated_by = stop.index
            continue

        for t in v.outgoing[node.state]:
            if not enabled(t, node.label):
                continue
            child_label = vec_add(node.label, t.effect)
            if accelerate:
                child_label = _accelerate(child_label, t.target, [*ancestors, node])
            if len(nodes) >= node_cap:
                raise TreeTooLarge(f"tree exceeded {node_cap} nodes")
            child = Node(len(nodes), t.target, child_label, node.index, t, node.depth + 1)
            nodes.append(child)
            node.children.append(child.index)
            queue.append(child.index)
        node.reason = EXPANDED if node.children else DEAD
    return DominationTree(nodes)


def _accelerate(label: tuple, state: str, path: Iterable[Node]) -> tuple:
    out = list(label)
    for a in path:
        if a.state == state and vec_leq(a.label, out) and tuple(a.label) != tuple(out):
            out = [OMEGA if x < y else y for x, y in zip(a.label, out)]
    return tuple(out)


def build_domination_tree(
    v: Vass, state: str, label: Iterable, node_cap: int = DEFAULT_NODE_CAP
) -> DominationTree:
    """Domination tree rooted at ``state(label)``; nodes are processed FIFO.

    ``label`` may contain :data:`OMEGA`. Raises TreeTooLarge past ``node_cap``.
    """
    return _build(v, state, tuple(label), node_cap, accelerate=False)


def karp_miller_tree(
    v: Vass, state: str, label: Iterable, node_cap: int = DEFAULT_NODE_CAP
) -> DominationTree:
    """Classical Karp-Miller tree (domination introduces ω); used for coverability."""
    return _build(v, state, tuple(label), node_cap, accelerate=True)


def loop_constant(v: Vass, counters: Iterable[int], n: int) -> int:
    """M(V, S, n): one more than the deepest domination tree rooted at q(u),
    u_i = n on the 1-based counters in S and ω elsewhere, over all states q."""
    s = set(counters)
    if any(i < 1 or i > v.dim for i in s):
        raise ValidationError(f"counter indices must lie in [1, {v.dim}]")
    if n < 0:
        raise ValidationError("bound must be non-negative")
    root = tuple(n if i + 1 in s else OMEGA for i in range(v.dim))
    depth = max((build_domination_tree(v, q, root).depth for q in v.states), default=0)
    return depth + 1


@dataclass(frozen=True)
class LoopWindow:
    start: int
    end: int


def find_nonneg_loop(run: Run, counters: Iterable[int]) -> Optional[LoopWindow]:
    """First window [start, end) of the run's steps that is a loop with
    non-negative effect on every counter in ``counters`` (1-based).

    Windows are ordered by end index, then start index. Returns None if the
    run contains no such loop.
    """
    s = [i - 1 for i in counters]
    states = [run.start.state] + [t.target for t in run.steps]
    prefix = [[0] * len(run.start.values)]
    for t in run.steps:
        prefix.append([a + b for a, b in zip(prefix[-1], t.effect)])
    for end in range(1, len(run.steps) + 1):
        for start in range(end):
            if states[start] != states[end]:
                continue
            if all(prefix[end][i] - prefix[start][i] >= 0 for i in s):
                return LoopWindow(start, end)
    return None


def is_coverable(v: Vass, target: Configuration) -> bool:
    """Whether some initial configuration reaches target.state with counters >= target.values."""
    if len(target.values) != v.dim:
        raise ValidationError("target has wrong dimension")
    for c in v.initials:
        tree = karp_miller_tree(v, c.state, c.values)
        if any(n.state == target.state and vec_leq(target.values, n.label) for n in tree.nodes):
            return True
    return False
