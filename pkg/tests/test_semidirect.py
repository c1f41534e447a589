"""Biactions, two-sided products, decompositions, and the layer compiler."""

import itertools

import pytest

from wordlogic import (
    Alphabet,
    DEFAULT_REGISTRY,
    ExtendedAlphabet,
    MarkedWord,
    NotDecomposable,
    NotMonoidPresentable,
    Quant,
    compile_layer,
    decompose,
    enumerate_words,
    formula_dfa,
    parse,
    quotient_closure,
    satisfies,
    sdp,
    verify_recognizer,
)
from wordlogic.regular import Dfa, FinMonoid, image_dfa, universal_dfa
from wordlogic.semidirect import (
    Biaction,
    ClassWordProduct,
    check_h_formula,
    eta_quotient,
    h_morphism,
    marked_class_word,
)
from wordlogic.suites import named_monoid


def trivial_biaction(smon, mmon):
    ns, nm = len(smon), len(mmon)
    return Biaction(mmon=mmon, smon=smon,
                    left=tuple(tuple(range(ns)) for _ in range(nm)),
                    right=tuple(tuple(s for _ in range(nm))
                                for s in range(ns)))


def marked_universe_algebra(symbols="a"):
    A = Alphabet.of(symbols)
    ext = ExtendedAlphabet(A, ("x",))
    ba = quotient_closure([image_dfa(ext)])
    return ext, ba


# ---------------------------------------------------------------------------
# biactions and products


def test_biaction_laws_are_checked():
    z2 = named_monoid("Z2")
    u1 = named_monoid("U1")
    trivial_biaction(u1, z2)  # fine
    # a left table that is not an action: swap under the identity
    with pytest.raises(ValueError):
        Biaction(mmon=z2, smon=u1,
                 left=((1, 0), (0, 1)),
                 right=tuple((s, s) for s in range(2)))


def test_sdp_with_trivial_acting_monoid_is_the_carrier():
    s = named_monoid("Z3")
    one = named_monoid("trivial")
    prod = sdp(s, one, trivial_biaction(s, one))
    assert len(prod.pairs) == 3
    # multiplication reduces to the carrier's addition
    for x in range(3):
        for y in range(3):
            px, py = prod.index[(x, 0)], prod.index[(y, 0)]
            assert prod.pairs[prod.monoid.mul(px, py)] == (s.mul(x, y), 0)


def test_sdp_with_trivial_carrier_is_the_acting_monoid():
    m = named_monoid("Z3")
    one = named_monoid("trivial")
    prod = sdp(one, m, trivial_biaction(one, m))
    assert len(prod.pairs) == 3
    for x in range(3):
        for y in range(3):
            px, py = prod.index[(0, x)], prod.index[(0, y)]
            assert prod.pairs[prod.monoid.mul(px, py)] == (0, m.mul(x, y))


def test_sdp_with_trivial_actions_is_the_direct_product():
    z2 = named_monoid("Z2")
    prod = sdp(z2, z2, trivial_biaction(z2, z2))
    assert len(prod.pairs) == 4
    for (s1, m1), (s2, m2) in itertools.product(prod.pairs, repeat=2):
        via = prod.pairs[prod.monoid.mul(prod.index[(s1, m1)],
                                         prod.index[(s2, m2)])]
        assert via == (z2.mul(s1, s2), z2.mul(m1, m2))


def test_sdp_identity_is_the_pair_of_identities():
    z2 = named_monoid("Z2")
    u1 = named_monoid("U1")
    prod = sdp(u1, z2, trivial_biaction(u1, z2))
    assert prod.pairs[prod.monoid.identity] == (u1.identity, z2.identity)


# ---------------------------------------------------------------------------
# decomposing a quotient-closed algebra


def test_decompose_the_marked_universe_instance():
    ext, ba = marked_universe_algebra("a")
    dd = decompose(ba, ext)
    assert len(dd.m_mon) == 1          # plain part: only the empty class
    assert len(dd.t_blocks) == 1       # one marked class letter
    assert dd.z_elems                  # the sink is present
    assert len(dd.pi.monoid) == 3
    # the plain-part blocks cover exactly the plain ambient elements
    plains = set().union(*dd.d0_blocks)
    assert plains == set(dd.m_elems)


def test_decompose_rejects_algebras_without_the_marked_part():
    A = Alphabet.of("a")
    ext = ExtendedAlphabet(A, ("x",))
    ba = quotient_closure([universal_dfa(ext.symbols)])
    with pytest.raises(NotDecomposable):
        decompose(ba, ext)


def test_decompose_full_three_part_algebra():
    ext, _ = marked_universe_algebra("ab")
    from wordlogic.regular import recognized_languages, syntactic_stamp

    ba = recognized_languages(syntactic_stamp(image_dfa(ext)))
    dd = decompose(ba, ext)
    assert len(dd.m_mon) == 1
    assert len(dd.t_elems) == 1
    assert len(dd.z_elems) == 1


def test_decompose_with_a_letter_generator():
    A = Alphabet.of("ab")
    ext = ExtendedAlphabet(A, ("x",))
    _, phi_dfa = formula_dfa(parse("P[a](x)"), A, ("x",), 5)
    ba = quotient_closure([phi_dfa, image_dfa(ext)])
    dd = decompose(ba, ext)
    assert len(dd.t_blocks) == 2  # the a-marked and b-marked classes split
    # classify letters directly
    xa = marked_class_word(dd, ("a",), 1)
    xb = marked_class_word(dd, ("b",), 1)
    assert xa != xb


# ---------------------------------------------------------------------------
# the pairing morphism and its formula


def eta_setup(nv_name="U1", symbols="ab"):
    A = Alphabet.of(symbols)
    ext = ExtendedAlphabet(A, ("x",))
    _, phi_dfa = formula_dfa(parse("P[a](x)"), A, ("x",), 5)
    ba = quotient_closure([phi_dfa, image_dfa(ext)])
    dd = decompose(ba, ext)
    etaq = eta_quotient(dd, named_monoid(nv_name))
    return dd, etaq


def test_eta_with_trivial_target_collapses_to_the_plain_part():
    dd, etaq = eta_setup("trivial")
    assert len(etaq.s_mon) == 1
    assert len(etaq.nu.pairs) == len(dd.m_mon)


def test_eta_letter_products_live_in_s():
    _, etaq = eta_setup("U1")
    s = etaq.s_of_letters([0, 1, 0])
    assert 0 <= s < len(etaq.s_mon)


def test_h_of_the_empty_word_is_the_identity_pair():
    dd, etaq = eta_setup("U1")
    hm = h_morphism(etaq)
    s, m = hm.h(())
    assert s == etaq.s_mon.identity
    assert m == dd.m_mon.identity


def test_h_is_a_morphism_and_matches_the_letterwise_formula():
    dd, etaq = eta_setup("Z2")
    hm = h_morphism(etaq)
    assert check_h_formula(etaq, hm, 5)
    mu = hm.stamp.mu
    words = list(enumerate_words(dd.ext.base, 3))
    for u in words:
        for v in words:
            assert mu(u + v) == hm.stamp.monoid.mul(mu(u), mu(v))


# ---------------------------------------------------------------------------
# the recognizer equivalence


@pytest.mark.parametrize("nv_name", ["trivial", "U1", "Z2", "Z3"])
def test_recognizer_on_the_letter_instance(nv_name):
    A = Alphabet.of("ab")
    ext = ExtendedAlphabet(A, ("x",))
    _, phi_dfa = formula_dfa(parse("P[a](x)"), A, ("x",), 5)
    ba = quotient_closure([phi_dfa, image_dfa(ext)])
    dd = decompose(ba, ext)
    report = verify_recognizer(dd, named_monoid(nv_name), hbound=4)
    assert report.passed, report.counterexample


def test_recognizer_on_the_one_letter_instance():
    ext, ba = marked_universe_algebra("a")
    dd = decompose(ba, ext)
    report = verify_recognizer(dd, named_monoid("Z2"), hbound=5)
    assert report.passed, report.counterexample


# ---------------------------------------------------------------------------
# capped products of class words


def test_class_word_product_identity_and_concatenation():
    ext, ba = marked_universe_algebra("ab")
    dd = decompose(ba, ext)
    cwp = ClassWordProduct(dd, lengthcap=8)
    e = cwp.of_word(())
    assert e == ((), dd.m_mon.identity)
    p = cwp.of_word(("a", "b"))
    assert cwp.mul(e, p) == p
    assert cwp.mul(p, e) == p
    # with a trivial plain monoid the product is concatenation
    q = cwp.of_word(("b",))
    assert cwp.mul(p, q)[0] == p[0] + q[0]


def test_class_word_product_matches_word_concatenation():
    A = Alphabet.of("ab")
    ext = ExtendedAlphabet(A, ("x",))
    _, phi_dfa = formula_dfa(parse("R[first](x)"), A, ("x",), 5)
    ba = quotient_closure([phi_dfa, image_dfa(ext)])
    dd = decompose(ba, ext)
    cwp = ClassWordProduct(dd, lengthcap=12)
    words = [(), ("a",), ("b", "a"), ("a", "b", "b")]
    for u in words:
        for v in words:
            assert cwp.mul(cwp.of_word(u), cwp.of_word(v)) == \
                cwp.of_word(u + v)


def test_class_word_product_associates_on_samples():
    ext, ba = marked_universe_algebra("ab")
    dd = decompose(ba, ext)
    cwp = ClassWordProduct(dd, lengthcap=16)
    ws = [("a",), ("b", "b"), ("a", "b")]
    for u, v, w in itertools.product(ws, repeat=3):
        pu, pv, pw = map(cwp.of_word, (u, v, w))
        assert cwp.mul(cwp.mul(pu, pv), pw) == cwp.mul(pu, cwp.mul(pv, pw))


def test_class_word_product_cap():
    from wordlogic import CapExceeded

    ext, ba = marked_universe_algebra("a")
    dd = decompose(ba, ext)
    cwp = ClassWordProduct(dd, lengthcap=3)
    p = cwp.of_word(("a", "a"))
    with pytest.raises(CapExceeded):
        cwp.mul(p, p)


# ---------------------------------------------------------------------------
# compiling one quantifier layer


def compiled(q_name, body_text, symbols="ab", bound=5):
    A = Alphabet.of(symbols)
    reg = DEFAULT_REGISTRY
    quant = reg.quantifier(q_name)
    ext, body = formula_dfa(parse(body_text), A, ("x",), bound)
    return A, compile_layer(quant, body, ext)


def test_compile_exists_gives_contains_a():
    A, dfa = compiled("E", "P[a](x)")
    assert dfa.n == 2
    hand = Dfa(A.symbols, ((1, 0), (1, 1)), 0, frozenset({1}))
    assert dfa.equivalent(hand)


def test_compile_parity_gives_the_two_state_counter():
    A, dfa = compiled("mod[2,0]", "P[a](x)")
    assert dfa.n == 2
    hand = Dfa(A.symbols, ((1, 0), (0, 1)), 0, frozenset({0}))
    assert dfa.equivalent(hand)


def test_compile_with_true_body_filters_by_length():
    A, dfa = compiled("mod[3,1]", "1", symbols="ab")
    reg = DEFAULT_REGISTRY
    phi = Quant("mod[3,1]", "x", parse("1"))
    for w in enumerate_words(A, 8):
        assert dfa.accepts(w) == satisfies(MarkedWord(w, ()), phi, reg)


def test_compile_agrees_with_satisfaction_pointwise():
    reg = DEFAULT_REGISTRY
    A = Alphabet.of("ab")
    for q_name, body in [("E", "P[a](x) & ~R[first](x)"),
                         ("E1", "P[b](x)"),
                         ("mod[2,1]", "E y. y < x & P[a](y)")]:
        ext, bdfa = formula_dfa(parse(body), A, ("x",), 5)
        dfa = compile_layer(reg.quantifier(q_name), bdfa, ext)
        phi = Quant(q_name, "x", parse(body))
        for w in enumerate_words(A, 6):
            assert dfa.accepts(w) == satisfies(MarkedWord(w, ()), phi, reg), \
                (q_name, body, w)


def test_oracle_quantifiers_do_not_compile_but_still_evaluate():
    reg = DEFAULT_REGISTRY
    A = Alphabet.of("ab")
    ext, bdfa = formula_dfa(parse("P[a](x)"), A, ("x",), 5)
    with pytest.raises(NotMonoidPresentable) as exc:
        compile_layer(reg.quantifier("maj"), bdfa, ext)
    assert exc.value.info.get("quantifier") == "maj"
    assert exc.value.code == "oracle-quantifier"
    assert satisfies(MarkedWord(("a", "a", "b"), ()),
                     parse("maj x. P[a](x)"), reg)
