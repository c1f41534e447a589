"""Position algebras, the letter substitution, and sentence classes."""

import dataclasses

import pytest
from hypothesis import given, strategies as st

from wordlogic import (
    TRUE, FALSE,
    Alphabet,
    MarkedWord,
    ParseError,
    SentenceClass,
    check_substitution_principle,
    circ_closure,
    delta_algebra,
    enumerate_words,
    equiv_bounded,
    gamma_odot,
    gamma_q,
    models,
    parse,
    satisfies,
    sigma,
    tau,
    tau_compat,
    tau_table,
    w_odot_c,
    xi,
)
from wordlogic.regular import Dfa, empty_dfa, universal_dfa
from wordlogic.substitution import substitute_letters

from conftest import model_words


def atom_letter_of(delta, mw):
    """The atom alphabet letter classifying a marked word."""
    return delta.atom_alphabet().symbols[xi(delta, mw)]


def c_of(delta, sym, pos=1, word=None):
    """Atom letter of the cell containing (word, pos)."""
    word = word or (sym,)
    return atom_letter_of(delta, MarkedWord(tuple(word), (("x", pos),)))


# ---------------------------------------------------------------------------
# building the algebra


def test_two_cell_algebra(delta_pa):
    assert delta_pa.atom_count == 2
    assert delta_pa.atom_alphabet().symbols == ("c0", "c1")
    # the cells are "letter is a" and "letter is b"
    cells = {}
    for i, phi in enumerate(delta_pa.atom_formulas):
        cells[i] = phi
    ca = xi(delta_pa, MarkedWord(("a",), (("x", 1),)))
    cb = xi(delta_pa, MarkedWord(("b",), (("x", 1),)))
    assert {ca, cb} == {0, 1}
    assert equiv_bounded(cells[ca], parse("P[a](x)"), delta_pa.alphabet, 4,
                         context=("x",))
    assert equiv_bounded(cells[cb], parse("~P[a](x)"), delta_pa.alphabet, 4,
                         context=("x",))


def test_atom_formulas_partition(delta_pa):
    # (A.1) disjunction is everything, (A.2) pairwise conjunction empty
    carrier = delta_pa.ba.carrier
    for mw in carrier:
        hits = [i for i, phi in enumerate(delta_pa.atom_formulas)
                if satisfies(mw, phi)]
        assert len(hits) == 1
        assert delta_pa.ba.atoms[hits[0]] == delta_pa.ba.atom_of(mw)


def test_generators_must_use_only_the_marked_variable(ab):
    with pytest.raises(ParseError):
        delta_algebra(ab, "x", [parse("P[a](y)")])


def test_trivial_algebra(ab):
    triv = delta_algebra(ab, "x", [], bound=4)
    assert triv.atom_count == 1
    assert triv.atom_formulas == (TRUE,)


# ---------------------------------------------------------------------------
# the position classifier


def test_xi_classifies_positions(delta_pa):
    w = MarkedWord(("a", "b"), (("x", 1),))
    assert delta_pa.ba.atom_of(w) == delta_pa.ba.atoms[xi(delta_pa, w)]
    assert xi(delta_pa, MarkedWord(("a", "b"), (("x", 1),))) == \
        xi(delta_pa, MarkedWord(("a",), (("x", 1),)))
    assert xi(delta_pa, MarkedWord(("a", "b"), (("x", 2),))) == \
        xi(delta_pa, MarkedWord(("b",), (("x", 1),)))


def test_tau_spells_out_the_word(delta_pa):
    syms = delta_pa.atom_alphabet().symbols
    ca, cb = c_of(delta_pa, "a"), c_of(delta_pa, "b")
    got = tuple(syms[i] for i in tau(delta_pa, ("a", "b")))
    assert got == (ca, cb)
    assert tau(delta_pa, ()) == ()


def test_tau_is_length_preserving(delta_pa):
    for w in enumerate_words(delta_pa.alphabet, 5):
        assert len(tau(delta_pa, w)) == len(w)


def test_tau_over_one_atom_algebra_is_constant(ab):
    triv = delta_algebra(ab, "x", [], bound=4)
    assert tau(triv, ("a", "b", "b")) == (0, 0, 0)


def test_tau_table_matches_tau(delta_pa):
    table = tau_table(delta_pa, 3)
    for w, row in table.items():
        assert row == tau(delta_pa, w)
    assert len(table) == 1 + 2 + 4 + 8


def test_xi_beyond_the_bound_by_signature(delta_pa):
    long = MarkedWord(("b",) * 9 + ("a",), (("x", 10),))
    assert xi(delta_pa, long) == c_index(delta_pa, "a")


def c_index(delta, sym):
    return xi(delta, MarkedWord((sym,), (("x", 1),)))


# ---------------------------------------------------------------------------
# substitution


def test_sigma_on_an_existential(delta_pa):
    ca = c_of(delta_pa, "a")
    out = sigma(delta_pa, parse(f"E z. P[{ca}](z)"))
    assert equiv_bounded(out, parse("E x. P[a](x)"), delta_pa.alphabet, 4)


def test_sigma_keeps_truth_constants(delta_pa):
    assert sigma(delta_pa, TRUE) == TRUE
    assert sigma(delta_pa, FALSE) == FALSE


def test_sigma_of_conjoined_distinct_atoms_is_empty(delta_pa):
    out = sigma(delta_pa, parse("E z. P[c0](z) & P[c1](z)"))
    assert equiv_bounded(out, FALSE, delta_pa.alphabet, 4)


def test_sigma_commutes_with_connectives(delta_pa):
    from wordlogic import And, Not

    psi1 = parse("E z. P[c0](z)")
    psi2 = parse("mod[2,0] z. P[c1](z)")
    A = delta_pa.alphabet
    lhs = sigma(delta_pa, Not(psi1))
    assert equiv_bounded(lhs, Not(sigma(delta_pa, psi1)), A, 4)
    both = sigma(delta_pa, And((psi1, psi2)))
    expect = And((sigma(delta_pa, psi1), sigma(delta_pa, psi2)))
    assert equiv_bounded(both, expect, A, 4)


def test_substitute_letters_renames_bound_variables_apart():
    psi = parse("E x. P[c0](x)")
    out = substitute_letters(psi, {"c0": parse("E z. z < x & P[a](z)")}, "x")
    from wordlogic import check_hygiene

    check_hygiene(out)  # must not raise
    assert equiv_bounded(out, parse("E y. E z. z < y & P[a](z)"),
                         Alphabet.of("ab"), 4)


# ---------------------------------------------------------------------------
# the master check: both readings of a sentence agree


def test_substitution_principle_on_examples(delta_pa):
    for text in ["E z. P[c0](z)", "1", "E z. P[c0](z) & P[c1](z)",
                 "mod[2,1] z. P[c1](z)", "maj z. P[c0](z)"]:
        report = check_substitution_principle(delta_pa, parse(text), bound=5)
        assert report.passed, report.counterexample
        assert report.stats["words"] == 63  # all words of length <= 5


def test_substitution_principle_catches_corruption(delta_pa):
    # swap the atom formulas: the classifier and the substitution now disagree
    corrupted = dataclasses.replace(
        delta_pa, atom_formulas=tuple(reversed(delta_pa.atom_formulas)))
    report = check_substitution_principle(corrupted, parse("E z. P[c0](z)"),
                                          bound=4)
    assert not report.passed
    assert report.counterexample


def test_substitution_principle_empty_word(delta_pa):
    report = check_substitution_principle(delta_pa, parse("E z. 1"), bound=0)
    assert report.passed
    assert report.stats["words"] == 1


# ---------------------------------------------------------------------------
# sentence classes applied through an algebra


def test_gamma_odot_of_exists(delta_pa):
    out = gamma_odot(gamma_q(("E",)), delta_pa, bound=6)
    assert len(out.sentences) == 4  # one per subset of the two atoms
    assert len(out.ba.atoms) == 4
    # cells: has an a / has a b, jointly
    def cell(w):
        return ("a" in w, "b" in w)

    for atom in out.ba.atoms:
        assert len({cell(w) for w in atom}) == 1
    # the languages attached to the generators match their formulas
    for phi, lang in zip(out.formulas, out.gen_langs):
        direct = model_words(phi, delta_pa.alphabet, 6)
        assert direct == lang


def test_gamma_odot_over_the_trivial_algebra(a_only):
    triv = delta_algebra(a_only, "x", [], bound=5)
    out = gamma_odot(gamma_q(("E",)), triv, bound=5)
    # sentences speak only about length: empty vs nonempty
    assert len(out.ba.atoms) == 2
    sizes = sorted(len(a) for a in out.ba.atoms)
    assert sizes == [1, 5]


def test_gamma_odot_of_constant_sentences(delta_pa):
    consts = SentenceClass("nullary", lambda alphabet: (TRUE, FALSE))
    out = gamma_odot(consts, delta_pa, bound=4)
    assert len(out.ba.atoms) == 1
    assert out.gen_langs[0] == frozenset(out.ba.carrier)
    assert out.gen_langs[1] == frozenset()


def test_circ_closure_adds_sentence_generators(ab):
    # a generator that is itself a sentence joins the closure
    d = delta_algebra(ab, "x", [parse("P[a](x)"), parse("E z. P[b](z)")],
                      bound=5)
    plain_out = gamma_odot(gamma_q(("E",)), d, bound=5)
    closed = circ_closure(gamma_q(("E",)), d, bound=5)
    assert len(closed.ba.atoms) >= len(plain_out.ba.atoms)
    from wordlogic import finba

    assert finba.is_subalgebra(plain_out.ba, closed.ba)


# ---------------------------------------------------------------------------
# preimages of atom-word languages


def test_preimage_of_the_full_atom_language(delta_pa):
    syms = delta_pa.atom_alphabet().symbols
    got = w_odot_c([universal_dfa(syms)], delta_pa.ba, delta_pa.alphabet,
                   "x", 6)
    assert got.preimages[0].equivalent(universal_dfa(delta_pa.alphabet.symbols))


def test_preimage_of_the_empty_atom_language(delta_pa):
    syms = delta_pa.atom_alphabet().symbols
    got = w_odot_c([empty_dfa(syms)], delta_pa.ba, delta_pa.alphabet, "x", 6)
    assert got.preimages[0].is_empty()


def test_preimage_of_contains_atom_is_contains_letter(delta_pa):
    syms = delta_pa.atom_alphabet().symbols
    ca = c_of(delta_pa, "a")
    col = syms.index(ca)
    k = len(syms)
    contains_ca = Dfa(syms,
                      (tuple(1 if c == col else 0 for c in range(k)),
                       (1,) * k), 0, frozenset({1}))
    got = w_odot_c([contains_ca], delta_pa.ba, delta_pa.alphabet, "x", 6)
    want = frozenset(w for w in enumerate_words(delta_pa.alphabet, 6)
                     if "a" in w)
    have = frozenset(w for w in enumerate_words(delta_pa.alphabet, 6)
                     if got.preimages[0].accepts(w))
    assert have == want


def test_preimage_rejects_alphabet_mismatch(delta_pa):
    with pytest.raises(ParseError):
        w_odot_c([universal_dfa(("c0",))], delta_pa.ba, delta_pa.alphabet,
                  "x", 4)


# ---------------------------------------------------------------------------
# nested algebras


def chain(ab):
    g1 = [parse("P[a](x)")]
    g2 = g1 + [parse("R[first](x)")]
    g3 = g2 + [parse("E z. z < x")]
    return (delta_algebra(ab, "x", g, bound=6) for g in (g1, g2, g3))


def test_tau_compat_identity(delta_pa):
    report = tau_compat(gamma_q(("E",)), delta_pa, delta_pa, bound=5)
    assert report.passed


def test_tau_compat_trivial_base(ab):
    triv = delta_algebra(ab, "x", [], bound=6)
    big = delta_algebra(ab, "x", [parse("P[a](x)")], bound=6)
    report = tau_compat(gamma_q(("E",)), triv, big, bound=5)
    assert report.passed


def test_tau_compat_chain_composes(ab):
    from wordlogic import finba

    d1, d2, d3 = chain(ab)
    for lo, hi in [(d1, d2), (d2, d3), (d1, d3)]:
        assert tau_compat(gamma_q(("E",)), lo, hi, bound=5).passed
    z21 = finba.dual_of_inclusion(d1.ba, d2.ba)
    z32 = finba.dual_of_inclusion(d2.ba, d3.ba)
    z31 = finba.dual_of_inclusion(d1.ba, d3.ba)
    assert tuple(z21[z32[k]] for k in range(d3.atom_count)) == tuple(z31)


def test_tau_compat_fails_for_unrelated_algebras(ab):
    left = delta_algebra(ab, "x", [parse("P[a](x)")], bound=5)
    right = delta_algebra(ab, "x", [parse("R[first](x)")], bound=5)
    report = tau_compat(gamma_q(("E",)), left, right, bound=5)
    assert not report.passed
    assert "subalgebra" in report.counterexample
