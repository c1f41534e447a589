"""Moving marked variables into and out of the alphabet.

A marked word is the same data as a word over the product alphabet whose
letters record the marks.  This module performs that move on formulas:
encoding rewrites a formula with a distinguished free variable into one
over the product alphabet, conjoined with the sentence "exactly one
position carries the mark"; decoding reads the mark back off the letters
with an equality test, reintroducing the variable.  Encoding preserves
meets and joins (not complements); decoding preserves all Boolean
operations.  Round trips and the compatibility square that lets
substitution over a many-variable algebra be computed over a
one-variable one are checked word by word at an explicit bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import caps as _caps
from .caps import Caps
from .errors import BoundTooSmall, MissingMachinery, ParseError
from .logic import (And, LetterPred, Not, NumPred, Or, Quant, Truth, TRUE,
                    FALSE, Registry, DEFAULT_REGISTRY, conj, disj, neg,
                    bound_vars, counterexample_bounded, free_vars, models,
                    satisfies, to_dsl)
from .report import Report
from .substitution import (DeltaAlgebra, delta_algebra, sigma,
                           substitute_letters)
from .words import (Alphabet, ExtendedAlphabet, MarkedWord, enumerate_marked,
                    in_marked_image)


# ---------------------------------------------------------------------------
# alphabets on the two sides of a codec
# ---------------------------------------------------------------------------

def _base_alphabet(alphabet) -> Alphabet:
    if isinstance(alphabet, ExtendedAlphabet):
        raise ParseError("pass the base alphabet; encoded variables are "
                         "given separately")
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)


def _source_letters(base: Alphabet, prior: tuple):
    """The letters a formula may test before one more variable is encoded:
    triples (symbol, base symbol, set of variables already in the letter)."""
    if prior:
        src = ExtendedAlphabet(base, prior)
        return src, tuple((s, *src.split(s)) for s in src.symbols)
    return base, tuple((s, s, frozenset()) for s in base.symbols)


def _fresh_names(avoid, prefix="z"):
    i = 0
    while True:
        name = f"{prefix}{i}"
        i += 1
        if name not in avoid:
            yield name


@dataclass(frozen=True)
class CodecPair:
    """A base alphabet together with the variables encoded into its letters
    and the spectator context left outside; houses both directions."""

    base: Alphabet
    enc_vars: tuple
    spectators: tuple = ()
    ext: ExtendedAlphabet = field(init=False, compare=False, default=None)

    def __post_init__(self):
        base = _base_alphabet(self.base)
        enc = tuple(self.enc_vars)
        spec = tuple(self.spectators)
        if set(enc) & set(spec):
            raise ParseError("encoded variables and spectator context overlap")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "enc_vars", enc)
        object.__setattr__(self, "spectators", spec)
        object.__setattr__(self, "ext", ExtendedAlphabet(base, enc))

    def encode(self, phi, registry: Registry = None):
        return encode_multi(phi, self.enc_vars, self.base, registry)

    def decode(self, psi, registry: Registry = None):
        return decode_multi(psi, self.enc_vars, self.base, registry)

    def iota(self, mw: MarkedWord) -> MarkedWord:
        from .words import encode_marks
        return encode_marks(mw, self.enc_vars, ext=self.ext)

    def in_image(self, word) -> bool:
        return in_marked_image(tuple(word), self.ext)


# ---------------------------------------------------------------------------
# the image sentence
# ---------------------------------------------------------------------------

def phi_sentence(alphabet, var="x", prior=(), registry: Registry = None,
                 zvar=None):
    """The sentence over the marked alphabet whose models are exactly the
    embedded marked words: exactly one position carries the new mark."""
    reg = registry or DEFAULT_REGISTRY
    if reg.maybe_quantifier("E1") is None:
        raise MissingMachinery("the image sentence needs the unique-witness "
                               "quantifier E1", quantifier="E1")
    base = _base_alphabet(alphabet)
    prior = tuple(prior)
    _, letters = _source_letters(base, prior)
    ext = ExtendedAlphabet(base, prior + (var,))
    z = zvar or next(_fresh_names({var, *prior}))
    body = disj(LetterPred(ext.symbol(b, T | {var}), z) for _, b, T in letters)
    return Quant("E1", z, body)


# ---------------------------------------------------------------------------
# one variable in, one variable out
# ---------------------------------------------------------------------------

def encode(phi, var, alphabet, prior=(), registry: Registry = None):
    """Push the free variable ``var`` into the letters.

    ``phi`` is a formula over A x 2^prior (plain A when prior is empty) in
    which every occurrence of var is free; the result is a formula over
    A x 2^(prior + var) without var: a letter test at var becomes a witness
    for the marked letter, letter tests elsewhere ignore the new mark, and a
    numerical predicate mentioning var routes through a marked witness
    position.  The final conjunct pins the mark to exactly one position.
    """
    reg = registry or DEFAULT_REGISTRY
    for need in ("E", "E1"):
        if reg.maybe_quantifier(need) is None:
            raise MissingMachinery(f"encoding needs the quantifier {need}",
                                   quantifier=need)
    prior = tuple(prior)
    if var in prior:
        raise ParseError(f"variable {var!r} is already encoded")
    if var in bound_vars(phi):
        raise ParseError(f"variable {var!r} is bound in the formula; only a "
                         "free variable can be encoded")
    base = _base_alphabet(alphabet)
    _, letters = _source_letters(base, prior)
    by_symbol = {s: (b, T) for s, b, T in letters}
    ext = ExtendedAlphabet(base, prior + (var,))
    avoid = set(free_vars(phi) | bound_vars(phi)) | {var} | set(prior)
    fresh = _fresh_names(avoid)

    def walk(node):
        if isinstance(node, LetterPred):
            if node.symbol not in by_symbol:
                raise ParseError(f"letter {node.symbol!r} is not over the "
                                 "codec's source alphabet")
            b, T = by_symbol[node.symbol]
            marked = LetterPred(ext.symbol(b, T | {var}), node.var)
            if node.var == var:
                z = next(fresh)
                return Quant("E", z, LetterPred(ext.symbol(b, T | {var}), z))
            return Or((marked, LetterPred(ext.symbol(b, T), node.var)))
        if isinstance(node, NumPred):
            if var in node.args:
                z = next(fresh)
                guard = disj(LetterPred(ext.symbol(b, T | {var}), z)
                             for _, b, T in letters)
                args = tuple(z if a == var else a for a in node.args)
                return Quant("E", z, conj((guard, NumPred(node.name, args))))
            return node
        if isinstance(node, Not):
            return Not(walk(node.sub))
        if isinstance(node, And):
            return And(tuple(walk(a) for a in node.args))
        if isinstance(node, Or):
            return Or(tuple(walk(a) for a in node.args))
        if isinstance(node, Quant):
            return Quant(node.q, node.var, walk(node.body))
        return node

    tilde = walk(phi)
    pinned = phi_sentence(base, var, prior, reg, zvar=next(fresh))
    return conj((tilde, pinned))


def decode(psi, var, alphabet, prior=(), registry: Registry = None):
    """Pull the mark for ``var`` back out of the letters.

    ``psi`` is a formula over A x 2^(prior + var) not mentioning var; the
    result is over A x 2^prior with var free: a letter test whose letter
    carries the mark asserts the tested position is var, one without the
    mark asserts it is not.
    """
    reg = registry or DEFAULT_REGISTRY
    try:
        reg.numpred("=")
    except ParseError:
        raise MissingMachinery("decoding needs the equality predicate",
                               predicate="=")
    prior = tuple(prior)
    if var in free_vars(psi) | bound_vars(psi):
        raise ParseError(f"variable {var!r} occurs in the formula being "
                         "decoded")
    base = _base_alphabet(alphabet)
    src = ExtendedAlphabet(base, prior + (var,))

    def out_symbol(b, T):
        if prior:
            return ExtendedAlphabet(base, prior).symbol(b, T)
        return b

    def walk(node):
        if isinstance(node, LetterPred):
            if node.symbol not in src:
                raise ParseError(f"letter {node.symbol!r} is not over the "
                                 "codec's marked alphabet")
            b, T = src.split(node.symbol)
            if var in T:
                return And((LetterPred(out_symbol(b, T - {var}), node.var),
                            NumPred("=", (var, node.var))))
            return And((LetterPred(out_symbol(b, T), node.var),
                        Not(NumPred("=", (var, node.var)))))
        if isinstance(node, Not):
            return Not(walk(node.sub))
        if isinstance(node, And):
            return And(tuple(walk(a) for a in node.args))
        if isinstance(node, Or):
            return Or(tuple(walk(a) for a in node.args))
        if isinstance(node, Quant):
            return Quant(node.q, node.var, walk(node.body))
        return node

    return walk(psi)


# ---------------------------------------------------------------------------
# several variables: fixed-order composites
# ---------------------------------------------------------------------------

def encode_multi(phi, enc_vars, alphabet, registry: Registry = None):
    """Encode the variables left to right; the k-th step goes from
    A x 2^{first k} to A x 2^{first k+1}.  The empty tuple is the identity."""
    enc_vars = _as_vars(enc_vars)
    for k, v in enumerate(enc_vars):
        phi = encode(phi, v, alphabet, enc_vars[:k], registry)
    return phi


def decode_multi(psi, enc_vars, alphabet, registry: Registry = None):
    """Inverse order of encode_multi: decode the last-encoded variable
    first."""
    enc_vars = _as_vars(enc_vars)
    for k in range(len(enc_vars) - 1, -1, -1):
        psi = decode(psi, enc_vars[k], alphabet, enc_vars[:k], registry)
    return psi


def _as_vars(enc_vars):
    return (enc_vars,) if isinstance(enc_vars, str) else tuple(enc_vars)


# ---------------------------------------------------------------------------
# round trips, checked extensionally
# ---------------------------------------------------------------------------

def roundtrip_check(phi, enc_vars, alphabet, bound=5,
                    registry: Registry = None, caps: Caps = None,
                    psi=None) -> Report:
    """Two facts at a bound: decoding an encoding gives the formula back,
    and encoding a decoding fixes exactly the embedded-image part of the
    model set.

    The second fact is checked for ``psi`` (default: the encoding of
    ``phi``): a marked-alphabet word satisfies encode(decode(psi)) exactly
    when it satisfies psi and lies in the image of the embedding.
    """
    caps = caps or _caps.from_env()
    reg = registry or DEFAULT_REGISTRY
    enc_vars = _as_vars(enc_vars)
    base = _base_alphabet(alphabet)
    ext = ExtendedAlphabet(base, enc_vars)
    params = {"formula": to_dsl(phi), "variables": list(enc_vars),
              "alphabet": list(base.symbols), "bound": bound}
    stats = {"words_back": 0, "words_image": 0}

    encoded = encode_multi(phi, enc_vars, base, reg)
    back = decode_multi(encoded, enc_vars, base, reg)
    ctx = tuple(sorted(free_vars(phi) | set(enc_vars)))
    for mw in enumerate_marked(base, ctx, bound, caps):
        stats["words_back"] += 1
        if satisfies(mw, phi, reg) != satisfies(mw, back, reg):
            return Report("varcode-roundtrip", params, False,
                          counterexample=f"decode(encode(..)) differs on {mw}",
                          stats=stats)

    psi = encoded if psi is None else psi
    both = encode_multi(decode_multi(psi, enc_vars, base, reg),
                        enc_vars, base, reg)
    ctx2 = tuple(sorted((free_vars(psi) | free_vars(both)) - set(enc_vars)))
    for mw in enumerate_marked(ext, ctx2, bound, caps):
        stats["words_image"] += 1
        want = satisfies(mw, psi, reg) and in_marked_image(mw.word, ext)
        if want != satisfies(mw, both, reg):
            return Report("varcode-roundtrip", params, False,
                          counterexample=f"encode(decode(..)) differs on {mw}",
                          stats=stats)
    return Report("varcode-roundtrip", params, True, stats=stats)


# ---------------------------------------------------------------------------
# lifting a many-variable algebra to a one-variable algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftedAlgebra:
    """A one-variable formula algebra over the marked alphabet standing in
    for an algebra with extra context variables.

    The lifted algebra's atoms are the encodings of the source atoms plus
    one off-image cell; ``zeta`` sends each source atom index to its lifted
    atom index, and ``junk_atom`` names the off-image cell (None when no
    variable was encoded, in which case lifting is the identity).
    """

    alphabet: Alphabet
    var: str
    enc_vars: tuple
    source_generators: tuple
    source_atom_formulas: tuple
    lifted: DeltaAlgebra
    zeta: tuple
    junk_atom: object = None
    report: Report = field(default=None, compare=False)


def lift_delta(generators, var, enc_vars, alphabet, bound=6,
               registry: Registry = None, caps: Caps = None,
               check=True) -> LiftedAlgebra:
    """Encode an algebra's context variables into the alphabet.

    ``generators`` are formulas over the base alphabet with free variables
    among ``enc_vars + (var,)``; the result is the one-variable algebra over
    A x 2^enc_vars generated by their encodings together with the image
    sentence.  On atoms this adds exactly one cell (the off-image words), and
    substitution through the lifted algebra agrees with substitution through
    the source algebra after decoding — checked on sample sentences when
    ``check`` is set.
    """
    caps = caps or _caps.from_env()
    reg = registry or DEFAULT_REGISTRY
    base = _base_alphabet(alphabet)
    enc_vars = _as_vars(enc_vars)
    generators = tuple(generators)
    ctx = enc_vars + (var,)
    for g in generators:
        fv = free_vars(g)
        if not fv <= set(ctx):
            raise ParseError(f"generator {to_dsl(g)} uses variables "
                             f"{sorted(fv - set(ctx))} outside the context")

    # atoms of the source algebra: realized generator-signature cells
    carrier = tuple(enumerate_marked(base, ctx, bound, caps))
    gen_sets = [frozenset(mw for mw in carrier if satisfies(mw, g, reg))
                for g in generators]
    sigs = {}
    for mw in carrier:
        sigs.setdefault(tuple(mw in gs for gs in gen_sets), mw)
    source_sigs = sorted(sigs)
    src_formulas = []
    for sig in source_sigs:
        parts = [g if keep else neg(g) for g, keep in zip(generators, sig)]
        src_formulas.append(conj(parts) if parts else TRUE)

    # the lifted algebra over the marked alphabet
    enc_gens = [encode_multi(g, enc_vars, base, reg) for g in generators]
    if enc_vars:
        enc_gens.append(encode_multi(TRUE, enc_vars, base, reg))
        carrier_alpha = ExtendedAlphabet(base, enc_vars)
    else:
        carrier_alpha = base
    lifted = delta_algebra(carrier_alpha, var, enc_gens, bound=bound,
                           registry=reg, caps=caps, verify=False)

    # source atoms embed by signature: the encodings of the generators cut
    # the image exactly as the generators cut the marked words
    zeta = []
    for sig in source_sigs:
        key = sig + (True,) if enc_vars else sig
        if key not in lifted._sig_to_atom:
            raise BoundTooSmall("an encoded source cell is not realized over "
                                "the marked alphabet", bound=bound)
        zeta.append(lifted._sig_to_atom[key])
    junk = None
    if enc_vars:
        junk = lifted._sig_to_atom.get((False,) * len(enc_gens))
        expect = len(source_sigs) + (1 if junk is not None else 0)
        if lifted.atom_count != expect or junk is None:
            raise BoundTooSmall("the lifted algebra has unexpected cells at "
                                "this bound", bound=bound)
    else:
        if lifted.atom_count != len(source_sigs):
            raise BoundTooSmall("the lifted algebra has unexpected cells at "
                                "this bound", bound=bound)
    assert len(set(zeta)) == len(zeta)

    report = None
    if check:
        report = _square_check(base, var, enc_vars, src_formulas, lifted,
                               tuple(zeta), junk, bound, reg, caps)
    return LiftedAlgebra(alphabet=base, var=var, enc_vars=enc_vars,
                         source_generators=generators,
                         source_atom_formulas=tuple(src_formulas),
                         lifted=lifted, zeta=tuple(zeta), junk_atom=junk,
                         report=report)


def zeta_relabel(lift: LiftedAlgebra, theta):
    """Carry a sentence over the lifted algebra's atom letters to one over
    the source algebra's atom letters: embedded atoms rename, the off-image
    atom's letter becomes the always-false formula."""
    syms = lift.lifted.atom_alphabet().symbols
    inverse = {syms[lifted_idx]: f"c{src_idx}"
               for src_idx, lifted_idx in enumerate(lift.zeta)}

    def walk(node):
        if isinstance(node, LetterPred):
            if node.symbol in inverse:
                return LetterPred(inverse[node.symbol], node.var)
            if lift.junk_atom is not None and node.symbol == syms[lift.junk_atom]:
                return FALSE
            raise ParseError(f"letter {node.symbol!r} is not an atom letter "
                             "of the lifted algebra")
        if isinstance(node, Not):
            return Not(walk(node.sub))
        if isinstance(node, And):
            return And(tuple(walk(a) for a in node.args))
        if isinstance(node, Or):
            return Or(tuple(walk(a) for a in node.args))
        if isinstance(node, Quant):
            return Quant(node.q, node.var, walk(node.body))
        return node

    return walk(theta)


def sigma_source(lift: LiftedAlgebra, theta):
    """Substitute the source algebra's atom formulas into a sentence over
    the source atom letters (the many-variable side of the square)."""
    by_symbol = {f"c{i}": phi
                 for i, phi in enumerate(lift.source_atom_formulas)}
    return substitute_letters(theta, by_symbol, lift.var)


def _square_samples(atom_count, quantifier="E", zvar="z"):
    """Deterministic sample sentences over atom letters c0..: the empty and
    full disjunctions, all singletons, the first pair, and one negation."""
    subsets = [(), tuple(range(atom_count))]
    subsets += [(i,) for i in range(atom_count)]
    if atom_count >= 2:
        subsets.append((0, 1))
    out = []
    for B in subsets:
        out.append(Quant(quantifier, zvar,
                         disj(LetterPred(f"c{i}", zvar) for i in B)))
    out.append(neg(out[1]))
    return out


def _square_check(base, var, enc_vars, src_formulas, lifted, zeta, junk,
                  bound, reg, caps) -> Report:
    lift = LiftedAlgebra(alphabet=base, var=var, enc_vars=enc_vars,
                         source_generators=(),
                         source_atom_formulas=tuple(src_formulas),
                         lifted=lifted, zeta=zeta, junk_atom=junk)
    params = {"alphabet": list(base.symbols), "encoded": list(enc_vars),
              "variable": var, "atoms": len(src_formulas), "bound": bound}
    stats = {"sentences": 0}
    for theta in _square_samples(lifted.atom_count):
        stats["sentences"] += 1
        via_lift = decode_multi(sigma(lifted, theta), enc_vars, base, reg)
        via_source = sigma_source(lift, zeta_relabel(lift, theta))
        bad = counterexample_bounded(via_lift, via_source, base, bound,
                                     context=enc_vars, registry=reg)
        if bad is not None:
            return Report("lift-square", params, False,
                          counterexample=f"{to_dsl(theta)} differs on {bad}",
                          stats=stats)
    return Report("lift-square", params, True, stats=stats)
