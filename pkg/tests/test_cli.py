"""End-to-end checks of the command-line interface."""

import json

import pytest

from wordlogic.cli import main


def run(capsys, argv):
    try:
        rc = main(argv)
    except SystemExit as exc:  # argparse errors exit directly
        rc = exc.code
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


# ---------------------------------------------------------------------------
# evaluation and model listing


def test_eval_true(capsys):
    rc, out, _ = run(capsys, ["eval", "--alphabet", "ab", "--word", "ab",
                              "--marks", "x=1", "--formula", "P[a](x)"])
    assert rc == 0
    assert out.strip() == "true"


def test_eval_false(capsys):
    rc, out, _ = run(capsys, ["eval", "--alphabet", "ab", "--word", "bb",
                              "--formula", "E x. P[a](x)"])
    assert rc == 0
    assert out.strip() == "false"


def test_models_lists_words_shortlex(capsys):
    rc, out, _ = run(capsys, ["models", "--alphabet", "ab", "--maxlen", "2",
                              "--formula", "E x. P[a](x)"])
    assert rc == 0
    assert out.splitlines()[:4] == ["a", "aa", "ab", "ba"]
    assert "4 models" in out


def test_equiv_agreeing(capsys):
    rc, out, _ = run(capsys, ["equiv", "--alphabet", "a", "--maxlen", "3",
                              "E x. P[a](x)", "E x. P[a](x)"])
    assert rc == 0
    assert "equivalent" in out


def test_equiv_differing_reports_a_witness(capsys):
    rc, out, _ = run(capsys, ["equiv", "--alphabet", "a", "--maxlen", "3",
                              "E x. P[a](x)", "E1 x. P[a](x)"])
    assert rc == 1
    assert "differ on aa" in out


# ---------------------------------------------------------------------------
# letter algebras


def test_atoms_of_a_letter_generator(capsys):
    rc, out, _ = run(capsys, ["atoms", "--alphabet", "ab", "--var", "x",
                              "--generator", "P[a](x)", "--maxlen", "4"])
    assert rc == 0
    assert "c0: P[a](x)" in out
    assert "c1: ~P[a](x)" in out
    assert "2 atoms" in out


def test_substitute_rewrites_atom_letters(capsys):
    rc, out, _ = run(capsys, ["substitute", "--alphabet", "ab", "--var", "x",
                              "--generator", "P[a](x)", "--maxlen", "4",
                              "--sentence", "E z. P[c0](z)"])
    assert rc == 0
    assert out.strip() == "E z0. P[a](z0)"


def test_tau_spells_a_word_in_atom_letters(capsys):
    rc, out, _ = run(capsys, ["tau", "--alphabet", "ab", "--var", "x",
                              "--generator", "P[a](x)", "--maxlen", "4",
                              "--word", "ab"])
    assert rc == 0
    assert out.strip() == "c0.c1"


def test_encode_and_decode(capsys):
    rc, out, _ = run(capsys, ["encode", "--alphabet", "ab", "--var", "x",
                              "--formula", "P[a](x)"])
    assert rc == 0
    assert "P[a{x}]" in out
    rc, out, _ = run(capsys, ["decode", "--alphabet", "ab", "--var", "x",
                              "--formula", "P[a{x}](z)"])
    assert rc == 0
    assert out.strip() == "P[a](z) & x = z"


# ---------------------------------------------------------------------------
# monoids and closures


def test_synmon_of_the_marked_universe(capsys):
    rc, out, _ = run(capsys, ["synmon", "--alphabet", "a",
                              "--marked-universe"])
    assert rc == 0
    assert "syntactic monoid: 3 elements" in out
    assert "letters: a{}->ε  a{x}->a{x}" in out
    assert "accepting: {a{x}}" in out


def test_quotient_closure_of_the_marked_universe(capsys):
    rc, out, _ = run(capsys, ["quotient-closure", "--alphabet", "a",
                              "--language", "@marked", "--maxlen", "4"])
    assert rc == 0
    assert "3 atoms, 8 elements" in out


def test_compile_exists(capsys):
    rc, out, _ = run(capsys, ["compile", "--alphabet", "ab", "--maxlen", "5",
                              "--formula", "E x. P[a](x)"])
    assert rc == 0
    assert "2 states" in out


def test_compile_oracle_quantifier_fails_with_structured_error(capsys):
    rc, _, err = run(capsys, ["compile", "--alphabet", "ab", "--maxlen", "5",
                              "--formula", "maj x. P[a](x)"])
    assert rc == 2
    assert "oracle-quantifier" in err


def test_sdp_from_json_input(capsys, tmp_path):
    payload = {"S": {"table": [[0, 1], [1, 1]], "identity": 0},
               "M": {"table": [[0, 1], [1, 0]], "identity": 0},
               "lambda": [[0, 1], [0, 1]],
               "rho": [[0, 0], [1, 1]]}
    path = tmp_path / "product.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    rc, out, _ = run(capsys, ["sdp", "--input", str(path)])
    assert rc == 0
    assert "semidirect product: 4 elements" in out


# ---------------------------------------------------------------------------
# suites and fragments


def test_verify_words_suite(capsys):
    rc, out, _ = run(capsys, ["verify", "--suite", "words",
                              "--alphabet", "ab", "--maxlen", "4"])
    assert rc == 0
    assert "[PASS]" in out
    assert "2/2 checks passed" in out


def test_depth_fragment_with_cross_check(capsys):
    rc, out, _ = run(capsys, ["depth-fragment", "--alphabet", "ab",
                              "--quantifiers", "E", "--depth", "1",
                              "--maxlen", "5", "--check"])
    assert rc == 0
    assert "4 atoms" in out
    assert "direct enumeration agrees" in out


# ---------------------------------------------------------------------------
# output format and failure modes


def test_json_output_is_deterministic(capsys):
    argv = ["models", "--alphabet", "a", "--maxlen", "2",
            "--formula", "E x. P[a](x)", "--format", "json"]
    rc1, out1, _ = run(capsys, argv)
    rc2, out2, _ = run(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["schema"] == "wordlogic/1"
    assert payload["count"] == 2


def test_parse_error_exits_two(capsys):
    rc, _, err = run(capsys, ["eval", "--alphabet", "ab", "--word", "a",
                              "--formula", "("])
    assert rc == 2
    assert "error [parse]" in err


def test_unknown_argument_exits_two(capsys):
    rc, _, _ = run(capsys, ["models", "--alphabet", "ab", "--no-such-flag"])
    assert rc == 2


def test_missing_language_inputs_exit_two(capsys):
    rc, _, err = run(capsys, ["synmon", "--alphabet", "ab"])
    assert rc == 2
    assert "no languages given" in err
