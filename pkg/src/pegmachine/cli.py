"""Command-line front end.

Commands: check, desugar, cnf, normalize, compile, extract, run, trace,
bench, fuzz, compose.  Exit codes: 0 accept/success, 1 reject/ill-formed,
2 invalid input, 3 budget exhausted, 4 internal divergence.  The
environment variable ``PEGMACHINE_STEP_LIMIT`` overrides the direct
engine's default step limit.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .closures import (
    CompositionSpec,
    left_concat_dcfl,
    parse_dfa_text,
    parse_dpda_text,
    pel_complement,
    pel_intersection,
    pel_union,
    reg_closure_machine,
)
from .cooksim import run_linear, work_bound_check
from .errors import ToolkitError
from .fuzz import FuzzConfig, run_fuzz
from .peg.ast import Consumed, Grammar, render_grammar_text
from .peg.interpret import DEFAULT_BUDGET, interpret_naive, interpret_packrat
from .peg.parser import parse_grammar_text
from .peg.transform import desugar, to_cnf
from .peg.wellformed import check_well_formed
from .pppda.machine import Machine, run_direct
from .pppda.normalize import desugar_hat_moves, normalize
from .pppda.text import parse_machine_text, render_machine_text
from .translate import dppda_to_peg, grammar_to_machine

EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_DIVERGENCE = 4


class _Invalid(Exception):
    def __init__(self, message: str):
        self.message = message


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Invalid(f"cannot read {path}: {exc}") from exc


def _load_any(path: str):
    """Grammar, machine, DPDA, DFA or composition spec, by content sniffing."""
    text = _read(path)
    head = [ln.strip() for ln in text.splitlines() if ln.strip()]
    kinds = [ln.split()[1] for ln in head if ln.startswith("@kind ")]
    try:
        if kinds == ["dpda"]:
            return parse_dpda_text(text)
        if kinds == ["dfa"]:
            return parse_dfa_text(text)
        if any(ln.startswith("@dfa") or ln.startswith("@bind") for ln in head):
            return _load_spec(path, text)
        if any(ln.startswith("@states") or ln.startswith("@initial") for ln in head):
            return parse_machine_text(text)
        return parse_grammar_text(text)
    except ToolkitError as exc:
        raise _Invalid(f"{path}: {exc}") from exc


def _load_spec(path: str, text: str) -> CompositionSpec:
    base = Path(path).parent
    dfa = None
    bindings = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "@dfa" and len(parts) == 2:
            dfa = parse_dfa_text(_read(str(base / parts[1])))
        elif parts[0] == "@bind" and len(parts) == 3:
            bindings[parts[1]] = parse_dpda_text(_read(str(base / parts[2])))
        else:
            raise _Invalid(f"{path}:{lineno}: bad spec line {line!r}")
    if dfa is None:
        raise _Invalid(f"{path}: spec needs a @dfa line")
    return CompositionSpec(dfa, bindings)


def _word_from(args) -> str:
    if args.input_file is not None:
        return _read(args.input_file).rstrip("\n")
    if args.word is None:
        raise _Invalid("need a WORD argument or --input-file")
    return args.word


def _check_word(word: str, alphabet) -> None:
    bad = sorted(set(word) - set(alphabet))
    if bad:
        raise _Invalid(f"word contains letters outside the alphabet: {bad}")


def _write_out(args, text: str) -> None:
    if args.output is None or args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")


def _step_limit(args) -> int | None:
    if args.step_limit is not None:
        return args.step_limit
    env = os.environ.get("PEGMACHINE_STEP_LIMIT")
    return int(env) if env else None


# --- commands ------------------------------------------------------------------


def cmd_check(args) -> int:
    obj = _load_any(args.path)
    if isinstance(obj, Grammar):
        report = check_well_formed(desugar(obj))
        if report.well_formed:
            print("well-formed")
            for name in obj.nonterminals:
                null = report.nullable.get(name)
                fail = report.can_fail.get(name)
                print(f"  {name}: nullable={null} can_fail={fail}")
            return EXIT_ACCEPT
        print("ill-formed; left-recursive cycle: " + " -> ".join(report.offending_cycle))
        return EXIT_REJECT
    print(f"valid {type(obj).__name__}")
    return EXIT_ACCEPT


def cmd_run(args) -> int:
    obj = _load_any(args.path)
    word = _word_from(args)
    engine = args.engine
    stats: dict[str, object] = {}

    if isinstance(obj, Grammar):
        _check_word(word, obj.alphabet)
        if engine in (None, "packrat", "naive"):
            core = desugar(obj)
            if engine == "naive":
                budget = args.budget if args.budget is not None else DEFAULT_BUDGET
                outcome = interpret_naive(core, core.rules[core.axiom], word, 0, budget)
                if outcome.__class__.__name__ == "Diverged":
                    print("budget")
                    return EXIT_BUDGET
                accepted = outcome == Consumed(len(word))
            else:
                pstats: dict[str, int] = {}
                accepted = interpret_packrat(core, word, pstats) == Consumed(len(word))
                stats["packrat.computed"] = pstats.get("computed", 0)
                stats["packrat.lookups"] = pstats.get("lookups", 0)
            print("accept" if accepted else "reject")
            _emit_stats(args, stats)
            return EXIT_ACCEPT if accepted else EXIT_REJECT
        machine = grammar_to_machine(obj)
    else:
        if not isinstance(obj, Machine):
            raise _Invalid("run needs a grammar or machine file")
        if engine in ("packrat", "naive"):
            raise _Invalid(
                "the packrat/naive engines need a grammar; extract one explicitly first"
            )
        machine = desugar_hat_moves(obj)
    _check_word(word, machine.input_alphabet)

    if engine == "cook":
        run = run_linear(machine, word)
        stats["cook.ops"] = run.ops
        print(run.outcome)
        _emit_stats(args, stats)
        return EXIT_ACCEPT if run.outcome == "accept" else EXIT_REJECT
    run = run_direct(machine, word, step_limit=_step_limit(args), collect_trace=args.trace)
    if args.trace:
        for i, ev in enumerate(run.trace):
            origin = str(ev.popped[1]) if ev.popped else "-"
            print(
                f"{i}\t{ev.kind}\t{ev.after.state}\t{ev.after.head}"
                f"\t{len(ev.after.stack)}\t{origin}"
            )
    stats["direct.steps"] = run.steps
    print(run.outcome if run.outcome != "budget" else "budget")
    _emit_stats(args, stats)
    if run.outcome == "budget":
        return EXIT_BUDGET
    return EXIT_ACCEPT if run.outcome == "accept" else EXIT_REJECT


def _emit_stats(args, stats: dict[str, object]) -> None:
    if getattr(args, "stats", False) and stats:
        print("---")
        for key in sorted(stats):
            print(f"{key}={stats[key]}")


def cmd_desugar(args) -> int:
    g = _load_any(args.path)
    if not isinstance(g, Grammar):
        raise _Invalid("desugar needs a grammar file")
    _write_out(args, render_grammar_text(desugar(g)))
    return EXIT_ACCEPT


def cmd_cnf(args) -> int:
    g = _load_any(args.path)
    if not isinstance(g, Grammar):
        raise _Invalid("cnf needs a grammar file")
    _write_out(args, render_grammar_text(to_cnf(desugar(g))))
    return EXIT_ACCEPT


def cmd_normalize(args) -> int:
    m = _load_any(args.path)
    if not isinstance(m, Machine):
        raise _Invalid("normalize needs a machine file")
    _write_out(args, render_machine_text(normalize(m)))
    return EXIT_ACCEPT


def cmd_compile(args) -> int:
    g = _load_any(args.path)
    if not isinstance(g, Grammar):
        raise _Invalid("compile needs a grammar file")
    _write_out(args, render_machine_text(grammar_to_machine(g)))
    return EXIT_ACCEPT


def cmd_extract(args) -> int:
    m = _load_any(args.path)
    if not isinstance(m, Machine):
        raise _Invalid("extract needs a machine file")
    _write_out(args, render_grammar_text(dppda_to_peg(normalize(m))))
    return EXIT_ACCEPT


def cmd_bench(args) -> int:
    m = _load_any(args.path)
    if not isinstance(m, Machine):
        raise _Invalid("bench needs a machine file")
    m = desugar_hat_moves(m)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    blocks = list(args.family)
    rows = []
    print("n\tcook.ops\tdirect.steps")
    for n in sizes:
        word = "".join(ch * n for ch in blocks)
        lin = run_linear(m, word)
        direct = run_direct(m, word, step_limit=_step_limit(args))
        rows.append((n, lin.ops, direct.steps))
        print(f"{n}\t{lin.ops}\t{direct.steps}")
        bound = work_bound_check(m, word)
        if not bound.ok:
            print(f"work bound exceeded at n={n}: {bound.ops} > {bound.bound}")
            return EXIT_DIVERGENCE
    if args.assert_linear:
        by_n = {n: ops for n, ops, _ in rows}
        for n in sizes:
            if 2 * n in by_n:
                ratio = by_n[2 * n] / by_n[n] if by_n[n] else float("inf")
                print(f"ratio {2*n}/{n} = {ratio:.3f}")
                if not (1.8 <= ratio <= 2.2):
                    print("linearity assertion failed")
                    return EXIT_DIVERGENCE
    return EXIT_ACCEPT


def cmd_fuzz(args) -> int:
    config = FuzzConfig(
        seed=args.seed,
        cases=args.cases,
        max_nonterminals=args.max_nonterminals,
        alphabet_size=args.alphabet_size,
        max_word_len=args.max_word_len,
    )
    report = run_fuzz(config)
    print(f"cases={report.cases_run}")
    if report.ok:
        print("no divergence")
        return EXIT_ACCEPT
    div = report.divergence
    print(f"divergence in case {div.case_index} on word {div.word!r}:")
    for engine, verdict in div.verdicts:
        print(f"  {engine}: {verdict}")
    print("shrunk grammar:")
    sys.stdout.write(div.grammar_text)
    return EXIT_DIVERGENCE


def cmd_compose(args) -> int:
    op = args.operation
    if op == "complement":
        g = _require_grammar(args.paths[0])
        _write_out(args, render_grammar_text(pel_complement(g)))
    elif op in ("union", "intersect"):
        if len(args.paths) != 2:
            raise _Invalid(f"{op} needs two grammar files")
        g1, g2 = _require_grammar(args.paths[0]), _require_grammar(args.paths[1])
        out = pel_union(g1, g2) if op == "union" else pel_intersection(g1, g2)
        _write_out(args, render_grammar_text(out))
    elif op == "concat-dcfl":
        if len(args.paths) != 2:
            raise _Invalid("concat-dcfl needs a DPDA file and a grammar/machine file")
        x = _load_any(args.paths[0])
        y = _load_any(args.paths[1])
        if isinstance(y, Grammar):
            sigma = list(y.alphabet) + [c for c in x.input_alphabet if c not in y.alphabet]
            y = grammar_to_machine(
                Grammar.build(
                    [(n, y.rules[n]) for n in y.nonterminals], axiom=y.axiom, alphabet=sigma
                )
            )
        _write_out(args, render_machine_text(left_concat_dcfl(x, y)))
    elif op == "reg-closure":
        spec = _load_any(args.paths[0])
        if not isinstance(spec, CompositionSpec):
            raise _Invalid("reg-closure needs a composition spec file")
        _write_out(args, render_machine_text(reg_closure_machine(spec)))
    else:  # pragma: no cover - argparse forbids
        raise _Invalid(f"unknown compose operation {op!r}")
    return EXIT_ACCEPT


def _require_grammar(path: str) -> Grammar:
    g = _load_any(path)
    if not isinstance(g, Grammar):
        raise _Invalid(f"{path}: expected a grammar file")
    return g


# --- argument parsing ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pegmachine", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, word=False, output=False):
        p.add_argument("--step-limit", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--seed", type=int, default=1)
        if word:
            p.add_argument("word", nargs="?", default=None, metavar="WORD")
            p.add_argument("--input-file", default=None)
            p.add_argument("--engine", choices=["naive", "packrat", "direct", "cook"])
            p.add_argument("--trace", action="store_true")
            p.add_argument("--stats", action="store_true")
        if output:
            p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("check", help="validate a file; well-formedness for grammars")
    p.add_argument("path")
    p.set_defaults(fn=cmd_check)

    for name, fn in (
        ("desugar", cmd_desugar),
        ("cnf", cmd_cnf),
        ("normalize", cmd_normalize),
        ("compile", cmd_compile),
        ("extract", cmd_extract),
    ):
        p = sub.add_parser(name, help=f"{name} and print/write the result")
        p.add_argument("path")
        common(p, output=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("run", help="run a word against a grammar or machine")
    p.add_argument("path")
    common(p, word=True)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("trace", help="run with a move-by-move trace")
    p.add_argument("path")
    common(p, word=True)
    p.set_defaults(fn=cmd_run, force_trace=True)

    p = sub.add_parser("bench", help="table of engine costs over a word family")
    p.add_argument("path")
    p.add_argument("--family", required=True, help="letters; each is repeated n times")
    p.add_argument("--sizes", required=True, help="comma-separated n values")
    p.add_argument("--assert-linear", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("fuzz", help="differential test of all engines")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-nonterminals", type=int, default=4)
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--max-word-len", type=int, default=8)
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("compose", help="closure constructions")
    p.add_argument(
        "operation",
        choices=["complement", "union", "intersect", "concat-dcfl", "reg-closure"],
    )
    p.add_argument("paths", nargs="+")
    common(p, output=True)
    p.set_defaults(fn=cmd_compose)

    return top


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "force_trace", False):
        args.trace = True
    try:
        return args.fn(args)
    except _Invalid as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_INVALID
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
