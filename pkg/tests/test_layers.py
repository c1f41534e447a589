"""Sentence classes over atoms and quantifier-depth stratification."""

import pytest

from wordlogic import (
    Alphabet,
    CapExceeded,
    ParseError,
    check_fragment_against_direct,
    check_gamma_laws,
    check_monotone,
    depth_direct,
    depth_fragment,
    dump_fragment,
    gamma_q,
    to_dsl,
)
from wordlogic.layers import FragmentSpec, same_language_algebra
from wordlogic.words import enumerate_words

from conftest import model_words


# ---------------------------------------------------------------------------
# quantifier sentence classes


def test_gamma_exists_one_letter_generators():
    gamma = gamma_q(("E",))
    A = Alphabet.of("a")
    gens = gamma.generator(A)
    texts = sorted(to_dsl(g) for g in gens)
    assert texts == ["E x. 0", "E x. P[a](x)"]


def test_gamma_two_letters_has_a_generator_per_subset():
    gamma = gamma_q(("E",))
    gens = list(gamma.generator(Alphabet.of("ab")))
    assert len(gens) == 4  # one per subset of the alphabet


def test_gamma_two_quantifiers_concatenates_generators():
    g1 = list(gamma_q(("E",)).generator(Alphabet.of("ab")))
    g2 = list(gamma_q(("E", "mod[2,0]")).generator(Alphabet.of("ab")))
    assert len(g2) == 2 * len(g1)


def test_gamma_laws_hold_for_a_merging_relabeling():
    report = check_gamma_laws(("E",), {"a": "c", "b": "c"}, bound=4)
    assert report.passed, report.counterexample


def test_gamma_laws_hold_for_parity():
    report = check_gamma_laws(("mod[2,0]",), {"a": "c", "b": "c"}, bound=4)
    assert report.passed, report.counterexample


# ---------------------------------------------------------------------------
# fragment construction


def test_fragment_spec_validation():
    with pytest.raises(ParseError):
        depth_fragment(FragmentSpec(Alphabet.of("ab"), ("nosuch",)))
    with pytest.raises(ParseError):
        depth_fragment(FragmentSpec(Alphabet.of("ab"), ("E",), depth=-1))


def test_depth_zero_has_a_single_atom():
    spec = FragmentSpec(Alphabet.of("ab"), ("E",), depth=0)
    result = depth_fragment(spec)
    assert len(result.ba.atoms) == 1


def test_depth_one_exists_is_the_letter_occurrence_algebra():
    spec = FragmentSpec(Alphabet.of("ab"), ("E",), depth=1, bound=6)
    result = depth_fragment(spec)
    assert len(result.ba.atoms) == 4
    # atoms are exactly the cells of (has an a, has a b)
    cells = {}
    for w in enumerate_words(Alphabet.of("ab"), 6):
        cells.setdefault(("a" in w, "b" in w), set()).add(w)
    assert set(map(frozenset, cells.values())) == set(result.ba.atoms)


def test_depth_one_parity_is_the_letter_count_algebra():
    spec = FragmentSpec(Alphabet.of("ab"), ("mod[2,0]",), depth=1, bound=6)
    result = depth_fragment(spec)
    cells = {}
    for w in enumerate_words(Alphabet.of("ab"), 6):
        key = (w.count("a") % 2, w.count("b") % 2)
        cells.setdefault(key, set()).add(w)
    assert set(map(frozenset, cells.values())) == set(result.ba.atoms)


def test_depth_two_refines_depth_one():
    A = Alphabet.of("a")
    b1 = depth_fragment(FragmentSpec(A, ("E",), depth=1, bound=6))
    b2 = depth_fragment(FragmentSpec(A, ("E",), depth=2, bound=6))
    report = check_monotone(FragmentSpec(A, ("E",), depth=2, bound=6))
    assert report.passed, report.counterexample
    assert len(b2.ba.atoms) >= len(b1.ba.atoms)


def test_fragment_matches_direct_enumeration():
    report = check_fragment_against_direct(
        FragmentSpec(Alphabet.of("ab"), ("E",), depth=1, bound=6))
    assert report.passed, report.counterexample


def test_fragment_matches_direct_enumeration_with_parity():
    report = check_fragment_against_direct(
        FragmentSpec(Alphabet.of("a"), ("E", "mod[2,0]"), depth=2, bound=6))
    assert report.passed, report.counterexample


def test_same_language_algebra_identifies_equal_fragments():
    A = Alphabet.of("a")
    b1 = depth_fragment(FragmentSpec(A, ("E",), depth=1, bound=6))
    b2 = depth_fragment(FragmentSpec(A, ("E",), depth=1, bound=6))
    assert same_language_algebra(b1.ba, b2.ba)


def test_fragment_attaches_formulas_with_true_model_sets():
    spec = FragmentSpec(Alphabet.of("ab"), ("E",), depth=1, bound=6)
    result = depth_fragment(spec)
    assert result.formulas
    for phi, lang in zip(result.formulas, result.languages):
        assert model_words(phi, Alphabet.of("ab"), 6) == lang


def test_dump_fragment_shape():
    spec = FragmentSpec(Alphabet.of("a"), ("E",), depth=1, bound=5)
    payload = dump_fragment(depth_fragment(spec))
    assert payload["schema"] == "wordlogic/1"
    assert payload["kind"] == "fragment"
    assert payload["generators"]
    assert payload["atoms"] >= 2
    assert payload["stats"]["layers"]


# ---------------------------------------------------------------------------
# guards


def test_direct_enumeration_refuses_deep_nesting():
    with pytest.raises(CapExceeded):
        depth_direct(FragmentSpec(Alphabet.of("a"), ("E",), depth=3))


def test_fragment_guard_refuses_large_products():
    with pytest.raises(CapExceeded):
        depth_fragment(FragmentSpec(Alphabet.of("ab"), ("E",), depth=3))
