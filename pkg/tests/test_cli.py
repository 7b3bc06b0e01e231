import os
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import FIG2_TEXT, dfa_pairs, dpda_anbn, dpda_cmd, dpda_single
from pegmachine.closures import render_dfa_text, render_dpda_text

PKG_ROOT = Path(__file__).resolve().parent.parent


def run_cli(*argv, cwd=None, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "pegmachine.cli", *argv],
        capture_output=True,
        text=True,
        cwd=cwd or PKG_ROOT,
        env=full_env,
    )


@pytest.fixture()
def fig2_file(tmp_path):
    path = tmp_path / "fig2.peg"
    path.write_text(FIG2_TEXT)
    return str(path)


def test_check_well_formed(fig2_file):
    proc = run_cli("check", fig2_file)
    assert proc.returncode == 0
    assert "well-formed" in proc.stdout


def test_check_left_recursive(tmp_path):
    path = tmp_path / "bad.peg"
    path.write_text('A <- A "a" / "a"\n')
    proc = run_cli("check", str(path))
    assert proc.returncode == 1
    assert "A" in proc.stdout


def test_check_syntax_error(tmp_path):
    path = tmp_path / "syn.peg"
    path.write_text('A <- "ab\n')
    proc = run_cli("check", str(path))
    assert proc.returncode == 2


def test_run_exit_codes(fig2_file):
    assert run_cli("run", fig2_file, "aab", "--engine", "packrat").returncode == 0
    assert run_cli("run", fig2_file, "abbc", "--engine", "packrat").returncode == 1
    assert run_cli("run", fig2_file, "xyz").returncode == 2


def test_run_first_line_is_verdict(fig2_file):
    proc = run_cli("run", fig2_file, "aab", "--engine", "cook", "--stats")
    lines = proc.stdout.splitlines()
    assert lines[0] == "accept"
    assert "---" in lines
    assert any(line.startswith("cook.ops=") for line in lines)


def test_run_all_engines_agree(fig2_file):
    for engine in ("naive", "packrat", "direct", "cook"):
        assert run_cli("run", fig2_file, "aab", "--engine", engine).returncode == 0
        assert run_cli("run", fig2_file, "abbc", "--engine", engine).returncode == 1


def test_empty_word_against_empty_rule(tmp_path):
    path = tmp_path / "eps.peg"
    path.write_text('S <- ""\n')
    proc = run_cli("run", str(path), "--input-file", os.devnull)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "accept"


def test_compile_run_and_determinism(fig2_file, tmp_path):
    out1 = tmp_path / "m1.mach"
    out2 = tmp_path / "m2.mach"
    assert run_cli("compile", fig2_file, "-o", str(out1)).returncode == 0
    assert run_cli("compile", fig2_file, "-o", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert run_cli("run", str(out1), "aab").returncode == 0
    assert run_cli("run", str(out1), "abbc").returncode == 1
    assert run_cli("run", str(out1), "aab", "--engine", "cook").returncode == 0


def test_machine_needs_explicit_extraction(fig2_file, tmp_path):
    out = tmp_path / "m.mach"
    run_cli("compile", fig2_file, "-o", str(out))
    proc = run_cli("run", str(out), "aab", "--engine", "packrat")
    assert proc.returncode == 2


def test_extract_pipeline(fig2_file, tmp_path):
    mach = tmp_path / "m.mach"
    peg = tmp_path / "x.peg"
    assert run_cli("compile", fig2_file, "-o", str(mach)).returncode == 0
    assert run_cli("extract", str(mach), "-o", str(peg)).returncode == 0
    assert run_cli("run", str(peg), "aab", "--engine", "packrat").returncode == 0
    assert run_cli("run", str(peg), "abbc", "--engine", "packrat").returncode == 1


ANBNCN_SOURCE = """\
@twoway no
@states q0 q1 qf
@initial q0
@final qf
@bottom Z0
@alphabet "abc"
q0 < Z0 -> q0 Y right
q0 "a" Y -> q0 X right
q0 "a" X -> q0 X right
q0 "b" X -> q0 - right
q0 "c" Y -> q1 - up
q1 "a" Z0 -> q1 - hatright
q1 "b" Z0 -> q1 X right
q1 "b" X -> q1 X right
q1 "c" X -> q1 - right
q1 > Z0 -> qf - down
"""


def test_normalize_extract_machine_pipeline(tmp_path):
    mach = tmp_path / "anbncn.mach"
    mach.write_text(ANBNCN_SOURCE)
    norm = tmp_path / "norm.mach"
    peg = tmp_path / "anbncn.peg"
    assert run_cli("normalize", str(mach), "-o", str(norm)).returncode == 0
    assert run_cli("extract", str(norm), "-o", str(peg)).returncode == 0
    assert run_cli("run", str(peg), "aabbcc", "--engine", "packrat").returncode == 0
    assert run_cli("run", str(peg), "aabbc", "--engine", "packrat").returncode == 1
    # The machine itself agrees, under both machine engines.
    assert run_cli("run", str(mach), "aabbcc").returncode == 0
    assert run_cli("run", str(mach), "aabbcc", "--engine", "cook").returncode == 0


def test_concat_accepts_prebuilt_machine_file(tmp_path):
    """Compiled-machine metadata survives the file round trip."""
    dpda_file = tmp_path / "a.dpda"
    dpda_file.write_text(render_dpda_text(dpda_single("a")))
    grammar = tmp_path / "b.peg"
    grammar.write_text('@alphabet "ab"\nS <- "b"\n')
    mach = tmp_path / "b.mach"
    assert run_cli("compile", str(grammar), "-o", str(mach)).returncode == 0
    out = tmp_path / "ab.mach"
    assert run_cli(
        "compose", "concat-dcfl", str(dpda_file), str(mach), "-o", str(out)
    ).returncode == 0
    assert run_cli("run", str(out), "ab").returncode == 0
    assert run_cli("run", str(out), "a").returncode == 1
    assert run_cli("run", str(out), "ba").returncode == 1


def test_cnf_of_cnf_is_stable(tmp_path):
    src = tmp_path / "g.peg"
    src.write_text('@start S\n@alphabet "ab"\nS <- A B\nA <- "a"\nB <- "b"\n')
    once = run_cli("cnf", str(src))
    assert once.returncode == 0
    assert once.stdout == src.read_text()


def test_trace_output_format(fig2_file, tmp_path):
    mach = tmp_path / "m.mach"
    run_cli("compile", fig2_file, "-o", str(mach))
    proc = run_cli("trace", str(mach), "aab")
    rows = [line.split("\t") for line in proc.stdout.splitlines() if "\t" in line]
    assert rows, proc.stdout
    for row in rows:
        assert len(row) == 6
        assert row[1] in ("push", "pop")


def test_step_limit_env_var(fig2_file, tmp_path):
    mach = tmp_path / "m.mach"
    run_cli("compile", fig2_file, "-o", str(mach))
    proc = run_cli("run", str(mach), "aab", env={"PEGMACHINE_STEP_LIMIT": "1"})
    assert proc.returncode == 3
    assert proc.stdout.splitlines()[0] == "budget"


def test_compose_union_runs(tmp_path):
    g1 = tmp_path / "anbn.peg"
    g1.write_text('@alphabet "abc"\nS <- A !.\nA <- "a" A "b" / ""\n')
    g2 = tmp_path / "ancn.peg"
    g2.write_text('@alphabet "abc"\nS <- A !.\nA <- "a" A "c" / ""\n')
    out = tmp_path / "u.peg"
    assert run_cli("compose", "union", str(g1), str(g2), "-o", str(out)).returncode == 0
    assert run_cli("run", str(out), "aabb", "--engine", "packrat").returncode == 0
    assert run_cli("run", str(out), "aacc", "--engine", "packrat").returncode == 0
    assert run_cli("run", str(out), "aabc", "--engine", "packrat").returncode == 1


def test_compose_complement_twice(tmp_path, fig2_file):
    c1 = tmp_path / "c1.peg"
    c2 = tmp_path / "c2.peg"
    assert run_cli("compose", "complement", fig2_file, "-o", str(c1)).returncode == 0
    assert run_cli("compose", "complement", str(c1), "-o", str(c2)).returncode == 0
    for word, code in (("aab", 0), ("abbc", 1)):
        assert run_cli("run", str(c2), word, "--engine", "packrat").returncode == code


def test_compose_concat_and_reg_closure(tmp_path):
    dpda_file = tmp_path / "anbn.dpda"
    dpda_file.write_text(render_dpda_text(dpda_anbn()))
    cstar = tmp_path / "cstar.peg"
    cstar.write_text('@alphabet "abc"\nS <- "c" S / ""\n')
    out = tmp_path / "cc.mach"
    assert run_cli(
        "compose", "concat-dcfl", str(dpda_file), str(cstar), "-o", str(out)
    ).returncode == 0
    assert run_cli("run", str(out), "aabbcc").returncode == 0
    assert run_cli("run", str(out), "aabc").returncode == 1

    dfa_file = tmp_path / "pairs.dfa"
    dfa_file.write_text(render_dfa_text(dfa_pairs()))
    cmd_file = tmp_path / "cmd.dpda"
    cmd_file.write_text(render_dpda_text(dpda_cmd()))
    spec = tmp_path / "spec.txt"
    spec.write_text(f"@dfa {dfa_file.name}\n@bind l1 {dpda_file.name}\n@bind l2 {cmd_file.name}\n")
    rc = tmp_path / "rc.mach"
    assert run_cli("compose", "reg-closure", str(spec), "-o", str(rc)).returncode == 0
    assert run_cli("run", str(rc), "abcd").returncode == 0
    assert run_cli("run", str(rc), "abab").returncode == 1
    assert run_cli("run", str(rc), "abcd", "--engine", "cook").returncode == 0


def test_bench_asserts_linear(tmp_path):
    src = tmp_path / "astar.peg"
    src.write_text('S <- "a" S / ""\n')
    mach = tmp_path / "astar.mach"
    run_cli("compile", str(src), "-o", str(mach))
    proc = run_cli(
        "bench", str(mach), "--family", "a", "--sizes", "50,100,200", "--assert-linear"
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "n\tcook.ops\tdirect.steps"
    rows = [ln for ln in proc.stdout.splitlines()[1:] if ln and ln[0].isdigit()]
    assert len(rows) == 3


def test_bench_triple_block_family(tmp_path):
    mach = tmp_path / "anbncn.mach"
    mach.write_text(ANBNCN_SOURCE)
    proc = run_cli(
        "bench", str(mach), "--family", "abc", "--sizes", "50,100,200", "--assert-linear"
    )
    assert proc.returncode == 0
    rows = [ln.split("\t") for ln in proc.stdout.splitlines()[1:] if ln and ln[0].isdigit()]
    assert [int(r[0]) for r in rows] == [50, 100, 200]
    assert all(int(r[1]) > 0 and int(r[2]) > 0 for r in rows)
    # n = 0 row is present and finite when requested.
    proc0 = run_cli("bench", str(mach), "--family", "abc", "--sizes", "0")
    assert proc0.returncode == 0
    assert proc0.stdout.splitlines()[1].startswith("0\t")


def test_fuzz_reproducible():
    a = run_cli("fuzz", "--cases", "10", "--seed", "42")
    b = run_cli("fuzz", "--cases", "10", "--seed", "42")
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_fuzz_zero_cases_vacuous():
    proc = run_cli("fuzz", "--cases", "0")
    assert proc.returncode == 0
