"""Line-oriented text formats for VASSs, LCMs and image skeletons.

VASS::

    vass dim=1 mode=cover
    letters a b
    state q1 q2
    init q1 0
    final q2 0
    trans q1 a +1 q2
    trans q2 eps -1 q2

Downward-mode machines list ``datom <q> <e1> ... <ed>`` lines instead of
``final`` lines, where an entry ``w`` stands for ω.

LCM::

    lcm counters=2
    state l1 l2
    init l1
    trans l1 inc,skip l2

Skeleton (transition indices are 1-based positions in the VASS file)::

    init p 0
    final r 0
    beta1: t1
    alphap1: t2
    beta2: t3
"""

from __future__ import annotations

import re
from typing import Iterator, Union

from .errors import ParseError, ValidationError
from .model import (
    EPS,
    LCM_OPS,
    OMEGA,
    Configuration,
    Lcm,
    LcmTransition,
    Transition,
    Vass,
)


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(token: str, lineno: int, natural: bool = False) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {token!r}") from None
    if natural and value < 0:
        raise ParseError(lineno, f"expected a natural number, got {token}")
    return value


def _header(tokens: list[str], lineno: int, keyword: str) -> dict[str, str]:
    if tokens[0] != keyword:
        raise ParseError(lineno, f"expected '{keyword}' header line")
    opts = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(lineno, f"malformed header option {tok!r}")
        opts[key] = value
    return opts


def parse_vass(text: str) -> Vass:
    lines = list(_lines(text))
    if not lines:
        raise ParseError(1, "empty input")
    lineno, tokens = lines[0]
    opts = _header(tokens, lineno, "vass")
    if "dim" not in opts:
        raise ParseError(lineno, "header lacks dim=")
    dim = _int(opts["dim"], lineno, natural=True)
    mode = opts.get("mode", "cover")
    unknown = set(opts) - {"dim", "mode"}
    if unknown:
        raise ParseError(lineno, f"unknown header option {sorted(unknown)[0]!r}")

    letters, states, transitions, initials, finals, atoms = [], [], [], [], [], []

    def config(args: list[str], lineno: int) -> Configuration:
        if len(args) != dim + 1:
            raise ParseError(lineno, f"expected a state and {dim} values")
        return Configuration(args[0], tuple(_int(x, lineno, natural=True) for x in args[1:]))

    for lineno, (kw, *args) in lines[1:]:
        if kw == "letters":
            letters.extend(args)
        elif kw == "state":
            states.extend(args)
        elif kw == "init":
            initials.append(config(args, lineno))
        elif kw == "final":
            finals.append(config(args, lineno))
        elif kw == "datom":
            if len(args) != dim + 1:
                raise ParseError(lineno, f"expected a state and {dim} entries")
            entries = tuple(
                OMEGA if x in ("w", "ω", "omega") else _int(x, lineno, natural=True)
                for x in args[1:]
            )
            atoms.append((args[0], entries))
        elif kw == "trans":
            if len(args) != dim + 3:
                raise ParseError(lineno, f"expected src, label, {dim} effects, dst")
            label = EPS if args[1] == "eps" else args[1]
            effect = tuple(_int(x, lineno) for x in args[2:-1])
            transitions.append(Transition(args[0], label, effect, args[-1]))
        else:
            raise ParseError(lineno, f"unknown directive {kw!r}")

    return Vass(
        dim=dim,
        alphabet=letters,
        states=states,
        transitions=transitions,
        initials=initials,
        finals=finals,
        mode=mode,
        atoms=atoms,
    )


def parse_lcm(text: str) -> Lcm:
    lines = list(_lines(text))
    if not lines:
        raise ParseError(1, "empty input")
    lineno, tokens = lines[0]
    opts = _header(tokens, lineno, "lcm")
    if "counters" not in opts:
        raise ParseError(lineno, "header lacks counters=")
    n = _int(opts["counters"], lineno, natural=True)
    states, transitions, initial = [], [], None
    for lineno, (kw, *args) in lines[1:]:
        if kw == "state":
            states.extend(args)
        elif kw == "init":
            if len(args) != 1 or initial is not None:
                raise ParseError(lineno, "exactly one init state expected")
            initial = args[0]
        elif kw == "trans":
            if len(args) == 3:
                ops = () if args[1] == "-" else tuple(args[1].split(","))
            elif len(args) == n + 2:
                # space-separated op-vector
                ops = tuple(args[1:-1])
            else:
                raise ParseError(lineno, "expected: trans <src> <op1>,...,<opn> <dst>")
            for op in ops:
                if op not in LCM_OPS:
                    raise ParseError(lineno, f"unknown op {op!r}")
            if len(ops) != n:
                raise ValidationError(
                    f"line {lineno}: op-vector has {len(ops)} entries, expected {n}"
                )
            transitions.append(LcmTransition(args[0], ops, args[-1]))
        else:
            raise ParseError(lineno, f"unknown directive {kw!r}")
    return Lcm(states=states, counters=n, transitions=transitions, initial=initial)


def _fmt_vals(values) -> str:
    return "".join(f" {x}" for x in values)


def render(model: Union[Vass, Lcm]) -> str:
    """Serialise a model so that parsing the result gives it back."""
    if isinstance(model, Lcm):
        out = [f"lcm counters={model.counters}"]
        if model.states:
            out.append("state " + " ".join(model.states))
        if model.initial is not None:
            out.append(f"init {model.initial}")
        for t in model.transitions:
            ops = ",".join(t.ops) if t.ops else "-"
            out.append(f"trans {t.source} {ops} {t.target}")
        return "\n".join(out) + "\n"

    out = [f"vass dim={model.dim} mode={model.mode}"]
    if model.alphabet:
        out.append("letters " + " ".join(model.alphabet))
    if model.states:
        out.append("state " + " ".join(model.states))
    for c in model.initials:
        out.append(f"init {c.state}{_fmt_vals(c.values)}")
    for c in model.finals:
        out.append(f"final {c.state}{_fmt_vals(c.values)}")
    for q, u in model.atoms:
        out.append(f"datom {q}{_fmt_vals(u)}")
    for t in model.transitions:
        label = "eps" if t.is_epsilon else t.label
        out.append(f"trans {t.source} {label}{_fmt_vals(t.effect)} {t.target}")
    return "\n".join(out) + "\n"


def read_vass(path) -> Vass:
    with open(path, encoding="utf-8") as fh:
        return parse_vass(fh.read())


def read_lcm(path) -> Lcm:
    with open(path, encoding="utf-8") as fh:
        return parse_lcm(fh.read())


_PIECE = re.compile(r"(alpha|beta|alphap)(\d+):?$")


def parse_skeleton(text: str, v: Vass):
    """Skeleton over ``v``; unnamed pieces are empty and the block count is
    the largest piece index used."""
    from .semilinear import Skeleton

    pieces: dict = {}
    init = final = None
    for lineno, tokens in _lines(text.replace(":", ": ")):
        kw, args = tokens[0], tokens[1:]
        if kw in ("init", "final"):
            if len(args) != v.dim + 1:
                raise ParseError(lineno, f"expected a state and {v.dim} values")
            c = Configuration(args[0], tuple(_int(x, lineno, natural=True) for x in args[1:]))
            if kw == "init":
                init = c
            else:
                final = c
            continue
        m = _PIECE.match(kw)
        if not m or int(m[2]) < 1:
            raise ParseError(lineno, f"unknown directive {kw!r}")
        steps = []
        for tok in args:
            if not re.fullmatch(r"t\d+", tok):
                raise ParseError(lineno, f"expected a transition like t3, got {tok!r}")
            k = int(tok[1:])
            if not 1 <= k <= len(v.transitions):
                raise ParseError(lineno, f"transition index {k} out of range")
            steps.append(v.transitions[k - 1])
        pieces[(m[1], int(m[2]))] = tuple(steps)
    if init is None or final is None:
        raise ParseError(1, "skeleton needs init and final lines")
    g = max((j for _, j in pieces), default=1)

    def row(kind):
        return [pieces.get((kind, j), ()) for j in range(1, g + 1)]

    return Skeleton(row("alpha"), row("beta"), row("alphap"), init, final)
