"""Stacking layers of quantifiers.

A set of quantifiers gives a class of sentences (generated by "Q over a
subset of the letters"); applying it through an algebra of one-variable
formulas adds one quantifier layer.  Iterating from the quantifier-free
algebra in n variables — re-encoding the spare variables into the
alphabet before each step and decoding afterwards — stratifies sentences
by quantifier depth.  An independent enumeration of depth-bounded
sentences provides the oracle the stratification is checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import caps as _caps
from . import finba
from .caps import Caps
from .errors import CapExceeded, ParseError
from .logic import (LetterPred, NumPred, Quant, Registry, DEFAULT_REGISTRY,
                    conj, disj, neg, models, relabel, satisfies, to_dsl)
from .report import Report
from .substitution import (DeltaAlgebra, OdotResult, SentenceClass,
                           delta_algebra, gamma_odot, sigma, xi)
from .varcode import decode_multi, lift_delta
from .words import (Alphabet, MarkedWord, encode_marks, enumerate_marked,
                    enumerate_words, subsets_in_order)


# ---------------------------------------------------------------------------
# the sentence class of a quantifier set
# ---------------------------------------------------------------------------

def gamma_q(qnames, registry: Registry = None) -> SentenceClass:
    """The class of sentences generated, over each alphabet, by one
    quantifier applied to a disjunction of letter tests: Q x. or-over-B
    P_b(x) for every listed quantifier and every subset B of the letters
    (the empty subset giving Q x. FALSE)."""
    qnames = (qnames,) if isinstance(qnames, str) else tuple(qnames)
    reg = registry or DEFAULT_REGISTRY
    for q in qnames:
        reg.quantifier(q)

    def generator(alphabet):
        syms = tuple(alphabet)
        for q in qnames:
            for sub in subsets_in_order(syms):
                yield Quant(q, "x",
                            disj(LetterPred(a, "x") for a in syms if a in sub))

    return SentenceClass(name="Q[" + ",".join(qnames) + "]",
                         generator=generator)


def check_gamma_laws(qnames, zeta: dict, bound=4, registry: Registry = None,
                     caps: Caps = None) -> Report:
    """The two laws of a sentence class, sampled at a bound: Boolean
    combinations of generators stay inside the generated algebra, and
    relabeling letters along a map carries generators over one alphabet to
    members over the other, with the relabeled language equal to the
    letterwise preimage."""
    caps = caps or _caps.from_env()
    reg = registry or DEFAULT_REGISTRY
    gamma = gamma_q(qnames, reg)
    src = Alphabet(tuple(sorted(set(zeta))))           # zeta: src -> dst
    dst = Alphabet(tuple(sorted(set(zeta.values()))))
    params = {"quantifiers": list((qnames,) if isinstance(qnames, str)
                                  else qnames),
              "map": {k: zeta[k] for k in sorted(zeta)}, "bound": bound}
    stats = {"generators": 0, "relabeled": 0}

    def plain_models(phi, alphabet):
        return frozenset(m.word for m in
                         models(phi, alphabet, bound, context=(),
                                registry=reg))

    carrier = tuple(enumerate_words(src, bound, caps))
    gens_src = gamma.generators(src)
    langs = [plain_models(g, src) for g in gens_src]
    algebra = finba.generate(carrier, langs, caps)
    stats["generators"] = len(gens_src)

    samples = []
    if gens_src:
        samples.append(neg(gens_src[0]))
    if len(gens_src) >= 2:
        samples.append(conj((gens_src[0], gens_src[1])))
        samples.append(disj((gens_src[0], neg(gens_src[1]))))
    for phi in samples:
        lang = plain_models(phi, src)
        if not algebra.member(lang):
            return Report("sentence-class-laws", params, False,
                          counterexample=f"Boolean combination {to_dsl(phi)} "
                                         "left the generated algebra",
                          stats=stats)

    dst_models = {}
    for g in gamma.generators(dst):
        stats["relabeled"] += 1
        rel = relabel(zeta, g)
        lang = plain_models(rel, src)
        if g not in dst_models:
            dst_models[g] = plain_models(g, dst)
        preimage = frozenset(w for w in carrier
                             if tuple(zeta[a] for a in w) in dst_models[g])
        if lang != preimage:
            return Report("sentence-class-laws", params, False,
                          counterexample=f"relabeling of {to_dsl(g)} is not "
                                         "the letterwise preimage",
                          stats=stats)
        if not algebra.member(lang):
            return Report("sentence-class-laws", params, False,
                          counterexample=f"relabeling of {to_dsl(g)} left "
                                         "the generated algebra",
                          stats=stats)
    return Report("sentence-class-laws", params, True, stats=stats)


# ---------------------------------------------------------------------------
# fragments by quantifier depth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FragmentSpec:
    """A depth-stratified fragment at desk scale: alphabet, quantifier and
    numerical-predicate names, nesting depth, and the word-length bound all
    languages are cut at."""

    alphabet: Alphabet
    quantifiers: tuple
    predicates: tuple = ()
    depth: int = 1
    bound: int = 6

    def __post_init__(self):
        object.__setattr__(self, "alphabet", Alphabet.of(self.alphabet))
        qs = self.quantifiers
        object.__setattr__(self, "quantifiers",
                           (qs,) if isinstance(qs, str) else tuple(qs))
        ps = self.predicates
        object.__setattr__(self, "predicates",
                           (ps,) if isinstance(ps, str) else tuple(ps))
        if self.depth < 0:
            raise ParseError("depth must be nonnegative")


@dataclass(frozen=True)
class FragmentResult:
    """The algebra of depth-bounded sentences as bounded languages, with a
    representative sentence per generator."""

    spec: FragmentSpec
    ba: finba.FinBA            # carrier: plain words up to the bound
    formulas: tuple            # representative sentences over the alphabet
    languages: tuple           # their languages, aligned with formulas
    stats: dict = field(default_factory=dict, compare=False)


def _resolve_names(spec: FragmentSpec, reg: Registry):
    for q in spec.quantifiers:
        reg.quantifier(q)
    for p in spec.predicates:
        reg.numpred(p)


def _guard_scale(spec: FragmentSpec):
    if spec.depth > 4 or (spec.depth >= 3 and len(spec.alphabet) >= 2):
        raise CapExceeded("fragment enumeration is desk-scale: depth and "
                          "alphabet size multiply", depth=spec.depth,
                          alphabet=len(spec.alphabet))


def _qf_generators(spec: FragmentSpec, ctx, reg: Registry):
    gens = [LetterPred(a, v) for v in ctx for a in spec.alphabet.symbols]
    for p in spec.predicates:
        arity = reg.numpred(p).arity
        gens.extend(NumPred(p, args)
                    for args in itertools.product(ctx, repeat=arity))
    return gens


def _subset_sentence_languages(qnames, usable, rows, reg: Registry,
                               caps: Caps):
    """Truth masks of every sentence "Q position. atom-of-position in B".

    ``rows`` lists, per carrier element, the tuple of atom indices of its
    positions; ``usable`` lists the atom indices subsets are drawn from.
    Yields (quantifier name, subset mask over usable, bit mask over rows)
    with bit i of the language mask standing for rows[i].
    """
    nbits = len(usable)
    total = len(qnames) << nbits
    if total > caps.sentence_budget:
        raise CapExceeded(f"{total} generating sentences at one layer "
                          f"(cap {caps.sentence_budget})",
                          cap="sentence_budget")
    nrows = len(rows)
    bit_of = {atom: j for j, atom in enumerate(usable)}
    out = []
    by_len = {}
    for r, row in enumerate(rows):
        by_len.setdefault(len(row), []).append(r)
    bitrows = [tuple(bit_of[a] for a in row) for row in rows]

    for qname in qnames:
        q = reg.quantifier(qname)
        if not q.is_monoid:
            for mask in range(1 << nbits):
                val = 0
                for r, row in enumerate(bitrows):
                    if q.evaluate([(mask >> b) & 1 for b in row]):
                        val |= 1 << r
                out.append((qname, mask, val))
            continue
        tab = np.asarray(q.monoid.table, dtype=np.int64)
        b0, b1 = q.images
        tab2 = np.stack([tab[:, b0], tab[:, b1]], axis=1)
        acc = np.zeros(len(q.monoid), dtype=bool)
        acc[list(q.accept)] = True
        ident_ok = bool(acc[q.monoid.identity])
        masks_all = np.arange(1 << nbits, dtype=np.int64)
        chunk = max(1, min(1 << nbits, 1 << 22 >> max(nrows, 1).bit_length()))
        truth = np.zeros((len(masks_all), nrows), dtype=bool)
        for lo in range(0, len(masks_all), chunk):
            masks = masks_all[lo:lo + chunk]
            for ln, idxs in by_len.items():
                if ln == 0:
                    truth[lo:lo + len(masks), idxs] = ident_ok
                    continue
                W = np.asarray([bitrows[r] for r in idxs], dtype=np.int64)
                member = (masks[:, None, None] >> W[None, :, :]) & 1
                st = np.full((len(masks), len(idxs)), q.monoid.identity,
                             dtype=np.int64)
                for j in range(ln):
                    st = tab2[st, member[:, :, j]]
                truth[lo:lo + len(masks), idxs] = acc[st]
        for mask in range(1 << nbits):
            packed = np.packbits(truth[mask], bitorder="little")
            out.append((qname, mask, int.from_bytes(packed.tobytes(),
                                                    "little")))
    return out


def _greedy_generators(masks, nrows):
    """Indices of a refining subfamily: scanned in order, a candidate truth
    mask is kept exactly when it splits a block of the partition built so
    far, so the kept family generates the same algebra of subsets."""
    block = [0] * nrows
    kept = []
    for ci, bits in enumerate(masks):
        hit = {}
        split = False
        for r in range(nrows):
            key = (block[r], (bits >> r) & 1)
            if key not in hit:
                hit[key] = len(hit)
            if (block[r], 1 - ((bits >> r) & 1)) in hit:
                split = True
        if split:
            kept.append(ci)
            for r in range(nrows):
                block[r] = hit[(block[r], (bits >> r) & 1)]
    return kept


def _sentence_of(qname, mask, usable):
    return Quant(qname, "x",
                 disj(LetterPred(f"c{usable[j]}", "x")
                      for j in range(len(usable)) if (mask >> j) & 1))


def depth_fragment(spec: FragmentSpec, registry: Registry = None,
                   caps: Caps = None) -> FragmentResult:
    """The algebra of bounded languages of sentences of quantifier depth at
    most ``spec.depth``.

    Layer by layer, innermost first: the current formula family (initially
    the quantifier-free one in depth-many variables) is lifted to a
    one-variable algebra over the alphabet extended by the spare variables,
    one quantifier layer is applied through it, and the resulting sentences
    are decoded back to formulas of the remaining variables.  At each layer
    the generating sentences — every quantifier over every subset of atoms —
    are deduplicated semantically and thinned to a refining subfamily before
    their substituted formulas are built.
    """
    caps = caps or _caps.from_env()
    reg = registry or DEFAULT_REGISTRY
    _resolve_names(spec, reg)
    _guard_scale(spec)
    A, n, L = spec.alphabet, spec.depth, spec.bound
    plain = tuple(enumerate_words(A, L, caps))
    if n == 0:
        ba = finba.generate(plain, [], caps)
        return FragmentResult(spec, ba, (), (), {"layers": 0})

    xs = tuple(f"x{i}" for i in range(1, n + 1))
    current = _qf_generators(spec, xs, reg)
    stats = {"layers": []}
    odot = None
    for k in range(n):
        keep, spect = xs[k], xs[k + 1:]
        lift = lift_delta(current, keep, spect, A, bound=L, registry=reg,
                          caps=caps, check=False)
        delta = lift.lifted
        usable = [i for i in range(delta.atom_count) if i != lift.junk_atom]

        carrier = tuple(enumerate_marked(A, spect, L, caps))
        rows = []
        for mw in carrier:
            u = encode_marks(mw, spect, ext=delta.alphabet).word if spect \
                else mw.word
            row = tuple(xi(delta, MarkedWord(u, ((keep, i),)))
                        for i in range(1, len(u) + 1))
            assert lift.junk_atom not in row
            rows.append(row)

        cands = _subset_sentence_languages(spec.quantifiers, usable, rows,
                                           reg, caps)
        seen = set()
        deduped = []
        for qname, mask, bits in cands:
            if bits not in seen:
                seen.add(bits)
                deduped.append(((qname, mask), bits))
        kept = _greedy_generators([b for _, b in deduped], len(carrier))
        reps = [deduped[i][0] for i in kept]
        rep_bits = [deduped[i][1] for i in kept]
        sentences = [_sentence_of(qn, m, usable) for qn, m in reps]
        stats["layers"].append({"atoms": delta.atom_count,
                                "sentences": len(cands),
                                "kept": len(sentences)})

        if k == n - 1:
            family = SentenceClass(
                name="Q[" + ",".join(spec.quantifiers) + "]@depth",
                generator=lambda alphabet, ss=tuple(sentences): iter(ss))
            odot = gamma_odot(family, delta, bound=L, registry=reg, caps=caps)
            for lang, bits in zip(odot.gen_langs, rep_bits):
                direct = frozenset(carrier[r].word for r in range(len(carrier))
                                   if (bits >> r) & 1)
                assert lang == direct
        else:
            current = [decode_multi(sigma(delta, s), spect, A, reg)
                       for s in sentences]

    return FragmentResult(spec, odot.ba, odot.formulas, odot.gen_langs,
                          stats)


# ---------------------------------------------------------------------------
# the independent oracle
# ---------------------------------------------------------------------------

def _signature_cells(carrier, gens, reg):
    sig_of = {}
    cells = {}
    for mw in carrier:
        sig = tuple(satisfies(mw, g, reg) for g in gens)
        cells.setdefault(sig, []).append(mw)
        sig_of[mw] = sig
    order = sorted(cells)
    index = {sig: i for i, sig in enumerate(order)}
    return {mw: index[sig_of[mw]] for mw in carrier}, len(order)


def depth_direct(spec: FragmentSpec, registry: Registry = None,
                 caps: Caps = None) -> finba.FinBA:
    """Depth-bounded sentences enumerated without the layer machinery.

    Sentences of depth one are a quantifier over a body from the
    quantifier-free one-variable algebra; of depth two, a quantifier over a
    body from the algebra generated by quantifier-free tests and the
    depth-one facts about the remaining variable.  Bodies range over all
    elements of those algebras (unions of atoms), truth is evaluated
    directly on the words, and the results generate the answer.  Depths
    above two are refused.
    """
    caps = caps or _caps.from_env()
    reg = registry or DEFAULT_REGISTRY
    _resolve_names(spec, reg)
    A, n, L = spec.alphabet, spec.depth, spec.bound
    plain = tuple(enumerate_words(A, L, caps))
    if n == 0:
        return finba.generate(plain, [], caps)
    if n > 2:
        raise CapExceeded("the direct enumeration supports depth <= 2",
                          depth=n)
    v1, v2 = "y1", "y2"

    if n == 1:
        carrier1 = tuple(enumerate_marked(A, (v1,), L, caps))
        atom1_of, natoms1 = _signature_cells(
            carrier1, _qf_generators(spec, (v1,), reg), reg)
        cell_rows = [tuple(atom1_of[MarkedWord(w, ((v1, i),))]
                           for i in range(1, len(w) + 1)) for w in plain]
        cands = _subset_sentence_languages(spec.quantifiers,
                                           list(range(natoms1)), cell_rows,
                                           reg, caps)
        langs = {bits for _, _, bits in cands}
        sets = [frozenset(w for r, w in enumerate(plain) if (bits >> r) & 1)
                for bits in sorted(langs)]
        return finba.generate(plain, sets, caps)

    # depth two: inner facts about (word, position of the outer variable)
    carrier1 = tuple(enumerate_marked(A, (v2,), L, caps))
    carrier2 = tuple(enumerate_marked(A, (v1, v2), L, caps))
    atom2_of, natoms2 = _signature_cells(
        carrier2, _qf_generators(spec, (v1, v2), reg), reg)
    rows1 = []
    for mw in carrier1:
        i = mw.pos(v2)
        w = mw.word
        rows1.append(tuple(
            atom2_of[MarkedWord(w, tuple(sorted(((v1, j), (v2, i)))))]
            for j in range(1, len(w) + 1)))
    inner = _subset_sentence_languages(spec.quantifiers,
                                       list(range(natoms2)), rows1, reg, caps)
    inner_sets = {bits for _, _, bits in inner}
    gens1 = [frozenset(carrier1[r] for r in range(len(carrier1))
                       if (bits >> r) & 1) for bits in sorted(inner_sets)]
    qf1_of, natoms_qf1 = _signature_cells(
        carrier1, _qf_generators(spec, (v2,), reg), reg)
    gens1 += [frozenset(mw for mw in carrier1 if qf1_of[mw] == c)
              for c in range(natoms_qf1)]
    psi1 = finba.generate(carrier1, gens1, caps)

    outer_rows = [tuple(psi1.atom_index_of(MarkedWord(w, ((v2, i),)))
                        for i in range(1, len(w) + 1)) for w in plain]
    outer = _subset_sentence_languages(spec.quantifiers,
                                       list(range(len(psi1.atoms))),
                                       outer_rows, reg, caps)
    langs = {bits for _, _, bits in outer}
    sets = [frozenset(w for r, w in enumerate(plain) if (bits >> r) & 1)
            for bits in sorted(langs)]
    return finba.generate(plain, sets, caps)


# ---------------------------------------------------------------------------
# comparisons and dumps
# ---------------------------------------------------------------------------

def same_language_algebra(a: finba.FinBA, b: finba.FinBA) -> bool:
    """Equality as algebras of bounded languages: same carrier, same atom
    partition."""
    return (frozenset(a.carrier) == frozenset(b.carrier)
            and {frozenset(x) for x in a.atoms}
            == {frozenset(x) for x in b.atoms})


def check_fragment_against_direct(spec: FragmentSpec,
                                  registry: Registry = None,
                                  caps: Caps = None) -> Report:
    frag = depth_fragment(spec, registry, caps)
    direct = depth_direct(spec, registry, caps)
    ok = same_language_algebra(frag.ba, direct)
    witness = None
    if not ok:
        fa = {frozenset(x) for x in frag.ba.atoms}
        da = {frozenset(x) for x in direct.atoms}
        only = (fa - da) or (da - fa)
        witness = f"atom partition differs ({len(fa)} vs {len(da)} atoms)" \
                  + (f"; sample cell size {len(next(iter(only)))}" if only else "")
    return Report("fragment-vs-direct",
                  {"alphabet": list(spec.alphabet.symbols),
                   "quantifiers": list(spec.quantifiers),
                   "predicates": list(spec.predicates),
                   "depth": spec.depth, "bound": spec.bound},
                  ok, counterexample=witness,
                  stats={"fragment_atoms": len(frag.ba.atoms),
                         "direct_atoms": len(direct.atoms)})


def check_monotone(spec: FragmentSpec, registry: Registry = None,
                   caps: Caps = None) -> Report:
    """The depth-n algebra embeds in the depth-(n+1) algebra."""
    lo = depth_fragment(spec, registry, caps)
    hi_spec = FragmentSpec(spec.alphabet, spec.quantifiers, spec.predicates,
                           spec.depth + 1, spec.bound)
    hi = depth_fragment(hi_spec, registry, caps)
    ok = finba.is_subalgebra(lo.ba, hi.ba)
    return Report("fragment-monotone",
                  {"alphabet": list(spec.alphabet.symbols),
                   "quantifiers": list(spec.quantifiers),
                   "depth": spec.depth, "bound": spec.bound},
                  ok,
                  counterexample=None if ok else
                  "a depth-n language is outside the depth-(n+1) algebra",
                  stats={"low_atoms": len(lo.ba.atoms),
                         "high_atoms": len(hi.ba.atoms)})


def dump_fragment(result: FragmentResult) -> dict:
    """JSON-ready summary: representative formulas with their sorted
    bounded languages, plus the atom count of the generated algebra."""
    from .words import format_word
    gens = []
    for phi, lang in zip(result.formulas, result.languages):
        gens.append({
            "formula": to_dsl(phi),
            "language": [format_word(w)
                         for w in sorted(lang, key=lambda w: (len(w), w))],
        })
    return {
        "schema": "wordlogic/1",
        "kind": "fragment",
        "alphabet": list(result.spec.alphabet.symbols),
        "quantifiers": list(result.spec.quantifiers),
        "predicates": list(result.spec.predicates),
        "depth": result.spec.depth,
        "bound": result.spec.bound,
        "atoms": len(result.ba.atoms),
        "generators": gens,
        "stats": result.stats,
    }
