"""Command-line entry point.

Exit codes: 0 success or accept, 1 reject or not found, 2 usage or parse
error (including unreadable files), 3 semantic error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import catalog, constructions, coverability, decomposition, lcm, semantics, semilinear
from .errors import ParseError, PreconditionUnverified, ValidationError, VassError
from .model import OMEGA, Configuration, format_word, parse_word
from .textio import parse_skeleton, read_lcm, read_vass, render

OK, NO, USAGE, SEMANTIC = 0, 1, 2, 3


class ArgError(Exception):
    """A command-line argument that parses but makes no sense."""


class _Out:
    """Collects text lines and a JSON payload; prints one of them at the end."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def flush(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, ensure_ascii=False, indent=2))
        elif self.lines:
            print("\n".join(self.lines))


def _values(tokens: Sequence[str]) -> tuple:
    return tuple(OMEGA if x in ("w", "ω") else int(x) for x in tokens)


def _config(tokens: Sequence[str], what: str) -> Configuration:
    if not tokens:
        raise ArgError(f"{what} needs a state")
    try:
        return Configuration(tokens[0], _values(tokens[1:]))
    except ValueError:
        raise ArgError(f"{what}: counter values must be integers") from None


def _write(model, path: Optional[str], out: _Out) -> int:
    text = render(model)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.line(f"wrote {path}")
    else:
        out.lines.append(text.rstrip("\n"))
    out.data = {"output": path, "text": text}
    return OK


def _word(text: str, alphabet) -> tuple:
    return parse_word(text, alphabet)


# -- semantics -----------------------------------------------------------------


def cmd_member(a, out):
    v = read_vass(a.file)
    w = _word(a.word, v.alphabet)
    n = semantics.count_accepting_runs(v, w, a.eps_budget)
    out.line(f"ACCEPT runs={n}" if n else "REJECT")
    out.data = {"word": format_word(w), "accepted": n > 0, "runs": n}
    return OK if n else NO


def cmd_runs(a, out):
    v = read_vass(a.file)
    w = _word(a.word, v.alphabet)
    runs = sorted(str(r) for r in semantics.accepting_runs(v, w, a.eps_budget))
    for r in runs:
        out.line(r)
    out.line(f"count={len(runs)}")
    out.data = {"word": format_word(w), "runs": runs, "count": len(runs)}
    return OK if runs else NO


def cmd_ambiguity(a, out):
    v = read_vass(a.file)
    report = semantics.ambiguity_profile(v, a.max_len)
    for line in report.lines():
        out.line(line)
    out.data = {
        "max_len": a.max_len,
        "max_count": report.max_count,
        "witnesses": {str(k): format_word(w) for k, w in sorted(report.witnesses.items())},
    }
    return OK


def cmd_sample(a, out):
    v = read_vass(a.file)
    words = [format_word(w) for w in semantics.iter_language(v, a.max_len)]
    for w in words:
        out.line(w)
    out.data = {"max_len": a.max_len, "words": words}
    return OK


def cmd_compare(a, out):
    x, y = read_vass(a.a), read_vass(a.b)
    w = semantics.compare_bounded(x, y, a.max_len)
    if w is None:
        out.line(f"EQUAL up to length {a.max_len}")
        out.data = {"equal": True, "max_len": a.max_len}
        return OK
    side = "first" if semantics.is_member(x, w) else "second"
    out.line(f"DIFFER word={format_word(w)} accepted-by={side}")
    out.data = {"equal": False, "word": format_word(w), "accepted_by": side}
    return NO


# -- coverability --------------------------------------------------------------


def cmd_kmtree(a, out):
    v = read_vass(a.file)
    root = _config(a.root, "--root") if a.root else v.initials[0]
    build = coverability.karp_miller_tree if a.accelerate else coverability.build_domination_tree
    tree = build(v, root.state, root.values, a.node_cap)
    for line in tree.lines():
        out.line(line)
    out.line(f"nodes={len(tree)} depth={tree.depth}")
    out.data = {
        "nodes": [
            {
                "index": n.index,
                "state": n.state,
                "label": [str(x) if x is OMEGA else x for x in n.label],
                "parent": n.parent,
                "depth": n.depth,
                "reason": n.reason,
                "dominated_by": n.dominated_by,
            }
            for n in tree.nodes
        ],
        "depth": tree.depth,
    }
    return OK


def cmd_loop_constant(a, out):
    v = read_vass(a.file)
    counters = [int(x) for x in a.counters.split(",") if x.strip()]
    m = coverability.loop_constant(v, counters, a.bound)
    out.line(f"M={m}")
    out.data = {"counters": counters, "bound": a.bound, "M": m}
    return OK


def cmd_coverable(a, out):
    v = read_vass(a.file)
    target = _config(a.target, "--target")
    ok = coverability.is_coverable(v, target)
    out.line("COVERABLE" if ok else "NOT COVERABLE")
    out.data = {"target": str(target), "coverable": ok}
    return OK if ok else NO


# -- constructions -------------------------------------------------------------


def cmd_product(a, out):
    return _write(constructions.product(read_vass(a.a), read_vass(a.b)), a.output, out)


def cmd_union(a, out):
    return _write(constructions.union_vass(read_vass(a.a), read_vass(a.b)), a.output, out)


def cmd_intersect_regular(a, out):
    return _write(constructions.intersect_regular(read_vass(a.a), read_vass(a.nfa)), a.output, out)


def cmd_down2reach(a, out):
    return _write(constructions.down_to_reach(read_vass(a.file)), a.output, out)


def cmd_make_u(a, out):
    return _write(constructions.build_U_vass(a.blocks, a.index), a.output, out)


def cmd_make_lk(a, out):
    return _write(constructions.build_Lk_vass(a.k), a.output, out)


# -- decomposition -------------------------------------------------------------


def _steps(v, steps) -> str:
    index = {t: k for k, t in enumerate(v.transitions, start=1)}
    return " ".join(f"t{index[t]}" for t in steps) or "-"


def cmd_decompose(a, out):
    v = read_vass(a.file)
    w = _word(a.word, v.alphabet)
    runs = sorted(semantics.runs_reading(v, w), key=str)
    if not runs:
        out.line("NO RUN reads the word")
        out.data = {"found": False, "reason": "no run"}
        return NO
    cap = a.cap if a.cap is not None else decomposition.suggest_cap(v, w.count("b") + 1)
    budget = a.ext_budget
    unverified = []
    for run in runs:
        try:
            dec = decomposition.decompose_run(v, run, cap, budget)
        except PreconditionUnverified as exc:
            unverified.append(exc)
            continue
        if dec is None:
            continue
        out.line(f"run: {run}")
        out.line(f"cap={cap}")
        segs = []
        for j, seg in enumerate(dec.segments, start=1):
            out.line(
                f"segment {j}: alpha=[{_steps(v, seg.alpha)}] beta=[{_steps(v, seg.beta)}]"
                f"^{seg.exponent if seg.beta else 0} alpha'=[{_steps(v, seg.alpha_prime)}]"
            )
            segs.append({
                "alpha": _steps(v, seg.alpha),
                "beta": _steps(v, seg.beta),
                "exponent": seg.exponent if seg.beta else 0,
                "alpha_prime": _steps(v, seg.alpha_prime),
            })
        failed = {(x.condition, x.segment) for x in decomposition.check_decomposition(v, run, dec)}
        table = []
        for j in range(1, len(dec.segments) + 1):
            marks = ["ok" if (c, j) not in failed else "FAIL" for c in range(1, 7)]
            table.append(marks)
            out.line(f"conditions segment {j}: " + " ".join(f"{c}:{m}" for c, m in enumerate(marks, 1)))
        out.data = {"found": True, "run": str(run), "cap": cap, "segments": segs, "conditions": table}
        return OK
    if len(unverified) == len(runs):
        raise unverified[0]
    out.line(f"NOT FOUND within cap {cap}")
    out.data = {"found": False, "cap": cap}
    return NO


# -- semilinear ----------------------------------------------------------------


def _tuple(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def cmd_image(a, out):
    v = read_vass(a.file)
    tuples = sorted(semilinear.image_truncated(v, a.blocks, a.bound))
    for t in tuples:
        out.line(_tuple(t))
    out.data = {"blocks": a.blocks, "bound": a.bound, "tuples": [list(t) for t in tuples]}
    return OK


def cmd_image_system(a, out):
    v = read_vass(a.file)
    with open(a.skeleton, encoding="utf-8") as fh:
        skel = parse_skeleton(fh.read(), v)
    system = semilinear.build_image_system(v, skel)
    for line in system.lines():
        out.line(line)
    out.data = {
        "variables": system.variables,
        "inequalities": [{"constant": q.constant, "coeffs": list(q.coeffs)} for q in system.inequalities],
    }
    if a.solve is not None:
        sols = sorted(semilinear.enumerate_solutions(system, a.solve))
        out.line(f"solutions in [1,{a.solve}]^{system.variables}: {len(sols)}")
        for t in sols:
            out.line(_tuple(t))
        out.data["solutions"] = [list(t) for t in sols]
    return OK


# -- lcm -----------------------------------------------------------------------


def _l0(m, given: Optional[str]) -> str:
    l0 = given or m.initial
    if l0 is None:
        raise ValidationError("no initial state: pass --init")
    return l0


def cmd_lcm_step(a, out):
    m = read_lcm(a.file)
    c = _config(a.config, "--config")
    succ = sorted(lcm.lcm_successors(m, c))
    for s in succ:
        out.line(str(s))
    out.data = {"config": str(c), "successors": [str(s) for s in succ]}
    return OK if succ else NO


def cmd_lcm_validate(a, out):
    m = read_lcm(a.file)
    l0 = _l0(m, a.init)
    w = tuple(x for x in (p.strip() for p in a.word.split(",")) if x)
    ok = lcm.is_valid_run_encoding(m, l0, w)
    out.line("VALID" if ok else "INVALID")
    out.data = {"word": list(w), "valid": ok}
    return OK if ok else NO


def cmd_lcm_augment(a, out):
    return _write(lcm.augment(read_lcm(a.file)), a.output, out)


def cmd_reduce_lcm(a, out):
    m = read_lcm(a.file)
    l0 = _l0(m, a.init)
    if a.regular is not None:
        v = lcm.build_complement_nfa(m, l0, a.regular)
    else:
        v = lcm.build_complement_vass(m, l0)
    return _write(v, a.output, out)


def cmd_lcm_reach(a, out):
    m = read_lcm(a.file)
    reach = sorted(lcm.reach_bounded(m, _l0(m, a.init), a.depth))
    for c in reach:
        out.line(str(c))
    out.data = {"depth": a.depth, "configurations": [str(c) for c in reach]}
    return OK


# -- catalog -------------------------------------------------------------------


def cmd_catalog_list(a, out):
    for name in catalog.figure_ids():
        out.line(f"{name}\t{catalog.DESCRIPTIONS[name]}")
    out.line("oracles: " + " ".join(catalog.oracle_ids()))
    out.data = {"machines": dict(catalog.DESCRIPTIONS), "oracles": catalog.oracle_ids()}
    return OK


def cmd_catalog_get(a, out):
    return _write(catalog.figure_vass(a.id), a.output, out)


def cmd_catalog_oracle(a, out):
    *params, word = a.args or [""]
    try:
        values = [int(x) for x in params]
    except ValueError:
        raise ArgError("oracle parameters must be integers") from None
    try:
        ok = catalog.oracle(a.id, values, parse_word(word, "ab"))
    except ValueError as exc:
        raise ArgError(str(exc)) from None
    out.line("TRUE" if ok else "FALSE")
    out.data = {"id": a.id, "params": values, "word": word, "member": ok}
    return OK if ok else NO


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    p = argparse.ArgumentParser(prog="bavass", description="VASS ambiguity toolkit")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    def out_opt(sp):
        sp.add_argument("-o", "--output", help="output file (default: stdout)")

    sp = cmd("member", cmd_member, "decide membership and count accepting runs")
    sp.add_argument("file")
    sp.add_argument("word")
    sp.add_argument("--eps-budget", type=int)
    sp = cmd("runs", cmd_runs, "list accepting runs")
    sp.add_argument("file")
    sp.add_argument("word")
    sp.add_argument("--eps-budget", type=int)
    for name, fn, text in (("ambiguity", cmd_ambiguity, "ambiguity profile"),
                           ("sample", cmd_sample, "accepted words up to a length")):
        sp = cmd(name, fn, text)
        sp.add_argument("file")
        sp.add_argument("--max-len", type=int, required=True)
    sp = cmd("compare", cmd_compare, "bounded language comparison")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--max-len", type=int, required=True)

    sp = cmd("kmtree", cmd_kmtree, "print a domination tree (w stands for omega)")
    sp.add_argument("file")
    sp.add_argument("--root", nargs="+", metavar="TOKEN", help="q v1 .. vd (default: first initial)")
    sp.add_argument("--accelerate", action="store_true", help="introduce omega (Karp-Miller)")
    sp.add_argument("--node-cap", type=int, default=coverability.DEFAULT_NODE_CAP)
    sp = cmd("loop-constant", cmd_loop_constant, "the loop constant M(V,S,n)")
    sp.add_argument("file")
    sp.add_argument("--counters", default="", help="comma-separated 1-based counters")
    sp.add_argument("--bound", type=int, required=True)
    sp = cmd("coverable", cmd_coverable, "coverability of a configuration")
    sp.add_argument("file")
    sp.add_argument("--target", nargs="+", required=True, metavar="TOKEN")

    for name, fn, text in (("product", cmd_product, "synchronised product"),
                           ("union", cmd_union, "disjoint union")):
        sp = cmd(name, fn, text)
        sp.add_argument("a")
        sp.add_argument("b")
        out_opt(sp)
    sp = cmd("intersect-regular", cmd_intersect_regular, "product with a dimension-0 machine")
    sp.add_argument("a")
    sp.add_argument("nfa")
    out_opt(sp)
    sp = cmd("down2reach", cmd_down2reach, "downward to exact acceptance")
    sp.add_argument("file")
    out_opt(sp)
    sp = cmd("make-u", cmd_make_u, "the U(blocks, index) machine")
    sp.add_argument("--blocks", type=int, required=True)
    sp.add_argument("--index", type=int, required=True)
    out_opt(sp)
    sp = cmd("make-lk", cmd_make_lk, "the L_k machine")
    sp.add_argument("--k", type=int, required=True)
    out_opt(sp)

    sp = cmd("decompose", cmd_decompose, "canonical run decomposition")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)
    sp.add_argument("--cap", type=int, help="default: the suggested cap")
    sp.add_argument("--ext-budget", type=int, default=decomposition.DEFAULT_EXTENSION_BUDGET)

    sp = cmd("image", cmd_image, "truncated image of words with a fixed number of b")
    sp.add_argument("file")
    sp.add_argument("--blocks", type=int, required=True, help="number of b letters")
    sp.add_argument("--bound", type=int, required=True)
    sp = cmd("image-system", cmd_image_system, "linear system of a skeleton")
    sp.add_argument("file")
    sp.add_argument("--skeleton", required=True)
    sp.add_argument("--solve", type=int, metavar="B")

    sp = cmd("lcm-step", cmd_lcm_step, "lossy successors of a configuration")
    sp.add_argument("file")
    sp.add_argument("--config", nargs="+", required=True, metavar="TOKEN")
    sp = cmd("lcm-validate", cmd_lcm_validate, "check a run encoding")
    sp.add_argument("file")
    sp.add_argument("--word", required=True, help="comma-separated letters")
    sp.add_argument("--init")
    sp = cmd("lcm-augment", cmd_lcm_augment, "add the draining states")
    sp.add_argument("file")
    out_opt(sp)
    sp = cmd("reduce-lcm", cmd_reduce_lcm, "machine for the complement of reversed run encodings")
    sp.add_argument("file")
    sp.add_argument("--init")
    sp.add_argument("--regular", type=int, metavar="B", help="dimension-0 variant for counter bound B")
    out_opt(sp)
    sp = cmd("lcm-reach", cmd_lcm_reach, "bounded lossy reachability")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--init")

    sp = cmd("catalog", None, "built-in machines and oracles")
    csub = sp.add_subparsers(dest="action", required=True, metavar="action")
    c = csub.add_parser("list", parents=[common])
    c.set_defaults(fn=cmd_catalog_list)
    c = csub.add_parser("get", parents=[common])
    c.set_defaults(fn=cmd_catalog_get)
    c.add_argument("id")
    out_opt(c)
    c = csub.add_parser("oracle", parents=[common])
    c.set_defaults(fn=cmd_catalog_oracle)
    c.add_argument("id")
    c.add_argument("args", nargs="*", help="[params...] word")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = _Out(args.json)
    try:
        code = args.fn(args, out)
    except (ParseError, ArgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (VassError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SEMANTIC
    out.flush()
    return code


def main() -> None:
    sys.exit(run())
