"""Reference machines with fixed ids, plus direct language oracles.

Every machine starts from the zero vector and accepts by state (final
vector 0). The oracles evaluate the defining set comprehensions on strings
and never touch a VASS.
"""

from __future__ import annotations

import re
from typing import Sequence

from .errors import UnknownId
from .model import Vass, make_vass

DESCRIPTIONS = {
    "fig1": "unambiguous 1-VASS for {a,b}* b a^(n>0) b^(<=n)",
    "fig2": "1-VASS for u b a^n b a^m b v b with n >= m",
    "fig3": "3-VASS for a^n b a^m with m <= 2n + 2^(n+2) - 1",
    "anbn": "deterministic 1-VASS for a^n b^(<=n)",
    "anban": "deterministic 1-VASS for a^n b a^(<=n)",
}


def _fig1() -> Vass:
    return make_vass(
        1, "ab", ["q1", "q2", "q3", "q4"],
        [
            ("q1", "a", (0,), "q1"),
            ("q1", "b", (0,), "q1"),
            ("q1", "b", (0,), "q2"),
            ("q2", "a", (1,), "q3"),
            ("q3", "a", (1,), "q3"),
            ("q3", "b", (-1,), "q4"),
            ("q4", "b", (-1,), "q4"),
        ],
        initials=[("q1", (0,))],
        finals=[("q3", (0,)), ("q4", (0,))],
    )


def _fig2() -> Vass:
    return make_vass(
        1, "ab", ["q1", "q2", "q3", "q4", "q5"],
        [
            ("q1", "a", (0,), "q1"),
            ("q1", "b", (0,), "q1"),
            ("q1", "b", (0,), "q2"),
            ("q2", "a", (1,), "q2"),
            ("q2", "b", (0,), "q3"),
            ("q3", "a", (-1,), "q3"),
            ("q3", "b", (0,), "q4"),
            ("q4", "a", (0,), "q4"),
            ("q4", "b", (0,), "q4"),
            ("q4", "b", (0,), "q5"),
        ],
        initials=[("q1", (0,))],
        finals=[("q5", (0,))],
    )


def _fig3() -> Vass:
    return make_vass(
        3, "ab", ["q1", "q2", "q3"],
        [
            ("q1", "a", (1, 0, 0), "q1"),
            ("q1", "b", (0, 1, 0), "q2"),
            ("q2", "a", (0, -1, 1), "q2"),
            ("q2", "a", (0, 0, 0), "q3"),
            ("q3", "a", (-1, 0, 0), "q2"),
            ("q3", "a", (0, 2, -1), "q3"),
        ],
        initials=[("q1", (0, 0, 0))],
        finals=[("q2", (0, 0, 0)), ("q3", (0, 0, 0))],
    )


def _anbn() -> Vass:
    return make_vass(
        1, "ab", ["p", "r"],
        [("p", "a", (1,), "p"), ("p", "b", (-1,), "r"), ("r", "b", (-1,), "r")],
        initials=[("p", (0,))],
        finals=[("p", (0,)), ("r", (0,))],
    )


def _anban() -> Vass:
    return make_vass(
        1, "ab", ["p", "r"],
        [("p", "a", (1,), "p"), ("p", "b", (0,), "r"), ("r", "a", (-1,), "r")],
        initials=[("p", (0,))],
        finals=[("r", (0,))],
    )


_BUILDERS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "anbn": _anbn, "anban": _anban}


def figure_ids() -> list[str]:
    return list(_BUILDERS)


def figure_vass(name: str) -> Vass:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownId(f"unknown catalog machine {name!r}") from None


# -- oracles -------------------------------------------------------------------


def _blocks(w: str):
    """Block lengths of a word over {a,b}, split at each b; None if other letters occur."""
    if set(w) - {"a", "b"}:
        return None
    return [len(x) for x in w.split("b")]


def _fig1_oracle(w: str) -> bool:
    return any(
        w[i] == "b" and (m := re.fullmatch(r"(a+)(b*)", w[i + 1:])) and len(m[2]) <= len(m[1])
        for i in range(len(w))
    )


def _fig2_oracle(w: str) -> bool:
    if not w.endswith("b"):
        return False
    body = w[:-1]
    for i, ch in enumerate(body):
        if ch != "b":
            continue
        m = re.match(r"(a*)b(a*)b", body[i + 1:])
        if m and len(m[1]) >= len(m[2]):
            return True
    return False


def _fig3_oracle(w: str) -> bool:
    m = re.fullmatch(r"(a*)b(a*)", w)
    if not m:
        return False
    n, k = len(m[1]), len(m[2])
    return k <= 2 * n + 2 ** (n + 2) - 1


def _anbn_oracle(w: str) -> bool:
    m = re.fullmatch(r"(a*)(b*)", w)
    return bool(m) and len(m[2]) <= len(m[1])


def _anban_oracle(w: str) -> bool:
    m = re.fullmatch(r"(a*)b(a*)", w)
    return bool(m) and len(m[2]) <= len(m[1])


def _u_oracle(w: str, blocks: int, index: int) -> bool:
    ns = _blocks(w)
    return ns is not None and len(ns) == blocks and ns[index - 1] >= ns[index]


def _lk_oracle(w: str, k: int) -> bool:
    ns = _blocks(w)
    return ns is not None and len(ns) == k + 2 and any(ns[i] >= ns[i + 1] for i in range(k + 1))


_ORACLES = {
    "fig1": (0, _fig1_oracle),
    "fig2": (0, _fig2_oracle),
    "fig3": (0, _fig3_oracle),
    "fig3lang": (0, _fig3_oracle),
    "anbn": (0, _anbn_oracle),
    "anban": (0, _anban_oracle),
    "U": (2, _u_oracle),
    "Lk": (1, _lk_oracle),
}


def oracle_ids() -> list[str]:
    return list(_ORACLES)


def oracle(name: str, params: Sequence[int], w) -> bool:
    """Decide membership of ``w`` in a catalog language by its definition.

    ``params`` is ``(k,)`` for ``Lk`` and ``(blocks, index)`` for ``U``.
    """
    if name not in _ORACLES:
        raise UnknownId(f"unknown oracle {name!r}")
    arity, fn = _ORACLES[name]
    params = tuple(params)
    if len(params) != arity:
        raise ValueError(f"oracle {name} takes {arity} parameter(s), got {len(params)}")
    return fn("".join(w), *params)
