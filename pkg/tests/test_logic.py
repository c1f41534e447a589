"""Formulas, quantifiers, satisfaction, and bounded model sets."""

import pytest
from hypothesis import given, strategies as st

from wordlogic import (
    TRUE, FALSE, And, Or, Not, Quant, LetterPred, NumPred,
    Alphabet,
    BoundTooSmall,
    DEFAULT_REGISTRY,
    MarkedWord,
    ParseError,
    Quantifier,
    Registry,
    conj, disj, neg,
    counterexample_bounded,
    equiv_bounded,
    formula_dfa,
    free_vars, bound_vars, letters_of,
    models,
    parse, parse_formula_file, to_dsl,
    registry_from_json,
    relabel,
    rename_bound,
    satisfies,
)
from wordlogic.logic import check_hygiene, map_vars

from conftest import model_words, plain


# ---------------------------------------------------------------------------
# syntax: constructors, variables, hygiene


def test_connective_helpers_simplify_units():
    p = LetterPred("a", "x")
    assert conj([p]) == p
    assert conj([]) == TRUE
    assert conj([p, FALSE]) == FALSE
    assert disj([]) == FALSE
    assert disj([p, TRUE]) == TRUE
    assert neg(neg(p)) == p
    assert neg(TRUE) == FALSE


def test_variable_sets():
    phi = parse("E z. (P[a](z) & z < x) | P[b](y)")
    assert free_vars(phi) == {"x", "y"}
    assert bound_vars(phi) == {"z"}
    assert letters_of(phi) == {"a", "b"}


def test_hygiene_rejects_shadowing():
    shadowed = Quant("E", "x", Quant("E", "x", LetterPred("a", "x")))
    with pytest.raises(ParseError):
        check_hygiene(shadowed)
    mixed = Quant("E", "x", And((LetterPred("a", "x"),
                                 Quant("E", "x", TRUE))))
    with pytest.raises(ParseError):
        check_hygiene(mixed)


def test_rename_bound_avoids_collisions():
    phi = Quant("E", "z", And((LetterPred("a", "z"), LetterPred("b", "x"))))
    out = rename_bound(phi, avoid={"z", "z0"})
    assert bound_vars(out).isdisjoint({"z", "z0"})
    assert free_vars(out) == {"x"}
    A = Alphabet.of("ab")
    assert equiv_bounded(phi, out, A, 4)


def test_map_vars_renames_free_occurrences():
    phi = parse("P[a](x) & E z. z < x")
    out = map_vars(phi, {"x": "y"})
    assert free_vars(out) == {"y"}
    assert to_dsl(out) == "P[a](y) & (E z. z < y)"


# ---------------------------------------------------------------------------
# the surface syntax


def test_parse_and_print_forms():
    cases = [
        "1",
        "0",
        "P[a](x)",
        "~P[a](x) & P[b](y)",
        "E x. P[a](x)",
        "mod[2,0] x. P[a](x)",
        "E1 y. R[succ](x,y)",
        "R[first](x)",
        "x = y",
        "x < y",
    ]
    for text in cases:
        assert to_dsl(parse(text)) == text


def test_parse_precedence_and_parentheses():
    phi = parse("P[a](x) | P[b](x) & P[a](y)")
    assert isinstance(phi, Or)
    assert to_dsl(parse("(P[a](x) | P[b](x)) & P[a](y)")) == \
        "(P[a](x) | P[b](x)) & P[a](y)"
    # binder scope extends maximally to the right
    wide = parse("E x. P[a](x) & P[b](x)")
    assert isinstance(wide, Quant)


def test_parse_errors():
    for bad in ["P[a](x", "E x P[a](x)", "(P[a](x)", "x <", "flub x. 1",
                "R[nosuch](x)", "R[succ](x)"]:
        with pytest.raises(ParseError):
            parse(bad)


def test_parse_formula_file_with_comments():
    text = """
    # leading comment
    E x. P[a](x)   # trailing comment

    P[b](y)
    """
    out = parse_formula_file(text)
    assert [to_dsl(f) for f in out] == ["E x. P[a](x)", "P[b](y)"]
    with pytest.raises(ParseError, match="line 2"):
        parse_formula_file("1\nP[a](x\n")


@given(st.integers(min_value=0, max_value=10_000))
def test_dsl_roundtrip_on_random_formulas(seed):
    from wordlogic.sampling import random_formula
    from conftest import seeded

    phi = random_formula(seeded(seed), Alphabet.of("ab"), context=("x",),
                         depth=2, quantifiers=("E", "maj", "mod[3,1]"))
    text = to_dsl(phi)
    assert to_dsl(parse(text)) == text


# ---------------------------------------------------------------------------
# satisfaction


def test_letter_predicate_on_marked_word():
    mw = MarkedWord(("a", "b"), (("x", 1),))
    assert satisfies(mw, parse("P[a](x)"))
    assert not satisfies(mw, parse("P[b](x)"))


def test_exists_and_majority():
    bb = MarkedWord(("b", "b"), ())
    assert not satisfies(bb, parse("E x. P[a](x)"))
    aab = MarkedWord(("a", "a", "b"), ())
    assert satisfies(aab, parse("maj x. P[a](x)"))
    assert not satisfies(MarkedWord(("a", "b"), ()), parse("maj x. P[a](x)"))


def test_quantifiers_on_the_empty_word():
    eps = MarkedWord((), ())
    assert not satisfies(eps, parse("E x. 1"))
    assert not satisfies(eps, parse("E1 x. 1"))
    assert satisfies(eps, parse("mod[2,0] x. 1"))
    assert not satisfies(eps, parse("maj x. 1"))


def test_numerical_predicates():
    mw = MarkedWord(("a", "b", "a"), (("x", 1), ("y", 2)))
    for text, want in [("x < y", True), ("y < x", False),
                       ("x = y", False), ("R[succ](x,y)", True),
                       ("R[succ](y,x)", False), ("R[first](x)", True),
                       ("R[last](y)", False), ("R[mod[2,1]](x)", True)]:
        assert satisfies(mw, parse(text)) is want, text


def test_satisfies_requires_marks_for_free_variables():
    with pytest.raises(ParseError):
        satisfies(MarkedWord(("a",), ()), parse("P[a](x)"))


# ---------------------------------------------------------------------------
# quantifier semantics: monoid tables vs direct counting


@given(st.lists(st.booleans(), max_size=12))
def test_builtin_quantifier_tables_match_counting(bits):
    reg = DEFAULT_REGISTRY
    n = sum(bits)
    assert reg.quantifier("E").evaluate(bits) is (n >= 1)
    assert reg.quantifier("E1").evaluate(bits) is (n == 1)
    assert reg.quantifier("maj").evaluate(bits) is (n > len(bits) - n)
    for q, r in [(2, 0), (2, 1), (3, 0), (5, 2)]:
        got = reg.quantifier(f"mod[{q},{r}]").evaluate(bits)
        assert got is (n % q == r)


def test_quantifier_needs_exactly_one_presentation():
    from wordlogic.regular import FinMonoid

    m = FinMonoid(((0, 1), (1, 1)), 0)
    with pytest.raises(ParseError):
        Quantifier("both", monoid=m, images=(0, 1), accept=frozenset({1}),
                   oracle=lambda bits: True)
    with pytest.raises(ParseError):
        Quantifier("neither")


def test_registry_from_json():
    reg = registry_from_json({
        "quantifiers": [{"name": "allpos", "table": [[0, 1], [1, 1]],
                         "identity": 0, "images": [1, 0],
                         "accept": [0]}],
        "predicates": [{"name": "third", "arity": 1, "tuples": [[3]],
                        "finite": True}],
    })
    phi = parse("allpos x. P[a](x)", reg)
    assert satisfies(MarkedWord(("a", "a"), ()), phi, reg)
    assert not satisfies(MarkedWord(("a", "b"), ()), phi, reg)
    psi = parse("E x. R[third](x)", reg)
    assert satisfies(MarkedWord(("b", "b", "b"), ()), psi, reg)
    assert not satisfies(MarkedWord(("b", "b"), ()), psi, reg)


def test_registry_rejects_redefinition():
    reg = Registry()
    with pytest.raises(ParseError):
        registry_from_json({"quantifiers": [
            {"name": "E", "table": [[0]], "identity": 0, "images": [0, 0],
             "accept": [0]}]})
    del reg


# ---------------------------------------------------------------------------
# bounded model sets


def test_models_of_true_with_context():
    got = models(TRUE, Alphabet.of("a"), 1, ("x",))
    assert got == frozenset({MarkedWord(("a",), (("x", 1),))})


def test_models_of_exists_a():
    got = model_words(parse("E x. P[a](x)"), Alphabet.of("ab"), 2)
    assert got == frozenset({("a",), ("a", "a"), ("a", "b"), ("b", "a")})


def test_exists_vs_unique_witness():
    A = Alphabet.of("a")
    cex = counterexample_bounded(parse("E x. P[a](x)"),
                                 parse("E1 x. P[a](x)"), A, 2)
    assert cex == MarkedWord(("a", "a"), ())
    assert equiv_bounded(parse("E x. P[a](x)"), parse("E1 x. P[a](x)"), A, 1)


def test_equiv_bounded_with_context():
    A = Alphabet.of("ab")
    assert equiv_bounded(parse("~(P[a](x) & P[b](x))"), TRUE, A, 3,
                         context=("x",))
    assert not equiv_bounded(parse("P[a](x)"), parse("P[b](x)"), A, 3,
                             context=("x",))


# ---------------------------------------------------------------------------
# relabelings (length-preserving letter maps)


def test_relabel_merging_letters():
    zeta = {"a": "c", "b": "c"}
    phi = relabel(zeta, parse("P[c](x)"))
    assert equiv_bounded(phi, parse("P[a](x) | P[b](x)"),
                         Alphabet.of("ab"), 3, context=("x",))


def test_relabel_missing_target_letter_is_false():
    zeta = {"a": "c"}
    assert relabel(zeta, parse("P[d](x)")) == FALSE
    assert relabel(zeta, parse("E x. P[d](x)")) == Quant("E", "x", FALSE)


def test_relabel_composes_contravariantly():
    # xi: {a,b} -> {c,d}, zeta: {c,d} -> {e}; composite on letters a,b -> e
    xi = {"a": "c", "b": "d"}
    zeta = {"c": "e", "d": "e"}
    composite = {s: zeta[xi[s]] for s in xi}
    phi = parse("E z. P[e](z) & R[first](z)")
    lhs = relabel(composite, phi)
    rhs = relabel(xi, relabel(zeta, phi))
    assert equiv_bounded(lhs, rhs, Alphabet.of("ab"), 4)


def test_relabel_preserves_model_sets_through_the_letter_map():
    # w satisfies relabel(zeta, phi) iff zeta(w) satisfies phi
    zeta = {"a": "c", "b": "c"}
    phi = parse("mod[2,1] z. P[c](z)")
    back = relabel(zeta, phi)
    A = Alphabet.of("ab")
    for mw in models(TRUE, A, 4):
        image = MarkedWord(tuple(zeta[s] for s in mw.word), ())
        assert satisfies(mw, back) == satisfies(image, phi)


# ---------------------------------------------------------------------------
# bounded model sets to automata


def test_formula_dfa_of_a_sentence():
    A = Alphabet.of("ab")
    ext, dfa = formula_dfa(parse("E x. P[a](x)"), A, (), 6)
    # sentences still run over the (trivially) extended alphabet
    assert ext.base.symbols == A.symbols
    assert ext.ctx == ()
    a, b = ext.symbol("a", ()), ext.symbol("b", ())
    assert dfa.n == 2
    assert dfa.accepts((b, a, b))
    assert not dfa.accepts((b, b))
    assert not dfa.accepts(())


def test_formula_dfa_with_context_runs_over_the_marked_alphabet():
    A = Alphabet.of("ab")
    ext, dfa = formula_dfa(parse("P[a](x)"), A, ("x",), 5)
    assert set(ext.symbols) == {"a{}", "a{x}", "b{}", "b{x}"}
    assert dfa.accepts(("b{}", "a{x}"))
    assert not dfa.accepts(("b{x}",))
    assert not dfa.accepts(("a{}",))  # no mark at all
    assert not dfa.accepts(("a{x}", "a{x}"))  # two marks


def test_automaton_inference_refuses_non_regular_looking_data():
    import itertools

    from wordlogic.regular import dfa_from_bounded
    from wordlogic.words import BoundedLang

    A = Alphabet.of("ab")
    pals = frozenset(w for n in range(6)
                     for w in itertools.product("ab", repeat=n)
                     if w == w[::-1])
    with pytest.raises(BoundTooSmall):
        dfa_from_bounded(BoundedLang(alphabet=A.symbols, bound=5,
                                     words=pals))
