"""Exact regular-language machinery at desk scale.

Complete DFAs, finite monoids with exhaustively checked laws, stamps
(surjective morphisms from a free monoid), syntactic monoids via transition
monoids of minimal automata, Boolean algebras of recognized languages, and
the bridge from bounded language data back to automata.

Everything is deterministic: minimization renumbers states by BFS in
alphabet order, monoid elements are enumerated BFS-first with shortlex
representative words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import caps as _caps
from .errors import BoundTooSmall, CapExceeded, ParseError
from .words import BoundedLang, ExtendedAlphabet, enumerate_words


# ---------------------------------------------------------------------------
# DFAs


@dataclass(frozen=True)
class Dfa:
    """A complete deterministic automaton; delta[state][symbol_index]."""

    alphabet: tuple
    delta: tuple
    init: int
    accepting: frozenset

    def __post_init__(self):
        n = len(self.delta)
        if n == 0:
            raise ParseError("a complete DFA needs at least one state")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ParseError("delta row arity mismatch")
            for q in row:
                if not 0 <= q < n:
                    raise ParseError("transition out of range")
        if not 0 <= self.init < n or not self.accepting <= set(range(n)):
            raise ParseError("bad initial/accepting states")

    @property
    def n(self):
        return len(self.delta)

    def _col(self, sym) -> int:
        try:
            return self.alphabet.index(sym)
        except ValueError:
            raise ParseError(f"symbol {sym!r} not in DFA alphabet")

    def run(self, word, start=None) -> int:
        q = self.init if start is None else start
        for sym in word:
            q = self.delta[q][self._col(sym)]
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting

    # -- constructions -------------------------------------------------------

    def complement(self) -> "Dfa":
        return Dfa(self.alphabet, self.delta, self.init,
                   frozenset(range(self.n)) - self.accepting)

    def product(self, other: "Dfa", keep, caps: _caps.Caps = _caps.DEFAULT) -> "Dfa":
        """Reachable product automaton; keep(acc1, acc2) decides acceptance."""
        if self.alphabet != other.alphabet:
            raise ParseError("product of DFAs over different alphabets")
        k = len(self.alphabet)
        index = {(self.init, other.init): 0}
        order = [(self.init, other.init)]
        delta = []
        i = 0
        while i < len(order):
            p, q = order[i]
            row = []
            for c in range(k):
                t = (self.delta[p][c], other.delta[q][c])
                if t not in index:
                    if len(index) >= caps.dfa_states:
                        raise CapExceeded("product DFA state cap", cap=caps.dfa_states)
                    index[t] = len(order)
                    order.append(t)
            i += 1
        for p, q in order:
            delta.append(tuple(index[(self.delta[p][c], other.delta[q][c])]
                               for c in range(k)))
        acc = frozenset(i for i, (p, q) in enumerate(order)
                        if keep(p in self.accepting, q in other.accepting))
        return Dfa(self.alphabet, tuple(delta), 0, acc)

    def intersect(self, other):
        return self.product(other, lambda a, b: a and b)

    def union(self, other):
        return self.product(other, lambda a, b: a or b)

    def symdiff(self, other):
        return self.product(other, lambda a, b: a != b)

    def left_quotient(self, u) -> "Dfa":
        return Dfa(self.alphabet, self.delta, self.run(u), self.accepting)

    def right_quotient(self, v) -> "Dfa":
        acc = frozenset(q for q in range(self.n) if self.run(v, start=q) in self.accepting)
        return Dfa(self.alphabet, self.delta, self.init, acc)

    def preimage_letter_map(self, source_alphabet, letter_map) -> "Dfa":
        """(h*)^{-1}(L) for the length-preserving substitution induced by
        letter_map: source symbol -> this DFA's symbol."""
        cols = [self._col(letter_map[b]) for b in source_alphabet]
        delta = tuple(tuple(row[c] for c in cols) for row in self.delta)
        return Dfa(tuple(source_alphabet), delta, self.init, self.accepting)

    # -- queries ---------------------------------------------------------------

    def reachable(self) -> list:
        seen = [self.init]
        mark = {self.init}
        i = 0
        while i < len(seen):
            for c in range(len(self.alphabet)):
                t = self.delta[seen[i]][c]
                if t not in mark:
                    mark.add(t)
                    seen.append(t)
            i += 1
        return seen

    def is_empty(self) -> bool:
        return not any(q in self.accepting for q in self.reachable())

    def equivalent(self, other: "Dfa") -> bool:
        return self.symdiff(other).is_empty()

    def shortest_difference(self, other: "Dfa"):
        """A shortest word accepted by exactly one of the two (None if
        equivalent); the BFS witness for failed equalities."""
        d = self.symdiff(other)
        parents = {d.init: None}
        queue = [d.init]
        if d.init in d.accepting:
            return ()
        i = 0
        while i < len(queue):
            q = queue[i]
            for c, sym in enumerate(d.alphabet):
                t = d.delta[q][c]
                if t not in parents:
                    parents[t] = (q, sym)
                    if t in d.accepting:
                        word = []
                        cur = t
                        while parents[cur] is not None:
                            cur, s = parents[cur]
                            word.append(s)
                        return tuple(reversed(word))
                    queue.append(t)
            i += 1
        return None

    def minimize(self) -> "Dfa":
        """Canonical minimal complete DFA: reachable part, Moore refinement,
        BFS renumbering in alphabet order."""
        reach = self.reachable()
        pos = {q: i for i, q in enumerate(reach)}
        k = len(self.alphabet)
        # Moore partition refinement on the reachable part
        block = [1 if q in self.accepting else 0 for q in reach]
        nblocks = len(set(block))
        while True:
            sig = {}
            newblock = [0] * len(reach)
            for i, q in enumerate(reach):
                s = (block[i],) + tuple(block[pos[self.delta[q][c]]] for c in range(k))
                newblock[i] = sig.setdefault(s, len(sig))
            if len(sig) == nblocks:
                break
            block, nblocks = newblock, len(sig)
        # quotient, then canonical BFS order
        qdelta = {}
        for i, q in enumerate(reach):
            qdelta[block[i]] = tuple(block[pos[self.delta[q][c]]] for c in range(k))
        start = block[pos[self.init]]
        order = [start]
        seen = {start}
        j = 0
        while j < len(order):
            for c in range(k):
                t = qdelta[order[j]][c]
                if t not in seen:
                    seen.add(t)
                    order.append(t)
            j += 1
        renum = {b: i for i, b in enumerate(order)}
        delta = tuple(tuple(renum[qdelta[b][c]] for c in range(k)) for b in order)
        acc = frozenset(renum[block[i]] for i, q in enumerate(reach)
                        if q in self.accepting and block[i] in renum)
        return Dfa(self.alphabet, delta, 0, acc)

    def key(self):
        """Hashable identity of the language (canonical minimal form)."""
        m = self.minimize()
        return (m.alphabet, m.delta, m.init, tuple(sorted(m.accepting)))

    # -- language views ---------------------------------------------------------

    def bounded(self, bound, caps: _caps.Caps = _caps.DEFAULT) -> BoundedLang:
        hits = frozenset(w for w in enumerate_words(self.alphabet, bound, caps)
                         if self.accepts(w))
        return BoundedLang(self.alphabet, bound, hits)

    def some_word(self):
        """A shortest accepted word, or None."""
        parents = {self.init: None}
        if self.init in self.accepting:
            return ()
        queue = [self.init]
        i = 0
        while i < len(queue):
            q = queue[i]
            for c, sym in enumerate(self.alphabet):
                t = self.delta[q][c]
                if t not in parents:
                    parents[t] = (q, sym)
                    if t in self.accepting:
                        word = []
                        cur = t
                        while parents[cur] is not None:
                            cur, s = parents[cur]
                            word.append(s)
                        return tuple(reversed(word))
                    queue.append(t)
            i += 1
        return None


def universal_dfa(alphabet) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(tuple(alphabet)),), 0, frozenset({0}))


def empty_dfa(alphabet) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(tuple(alphabet)),), 0, frozenset())


def mark_count_dfa(ext: ExtendedAlphabet, var, counts) -> Dfa:
    """Words over an extended alphabet whose number of positions marked with
    ``var`` lies in ``counts`` (counted 0, 1, or 'many' = 2+)."""
    marked_cols = [i for i, s in enumerate(ext.symbols) if var in ext.split(s)[1]]
    k = len(ext.symbols)
    delta = []
    for state in range(3):  # 0 marks, 1 mark, 2+
        row = []
        for c in range(k):
            row.append(min(state + 1, 2) if c in marked_cols else state)
        delta.append(tuple(row))
    acc = frozenset(q for q in range(3) if min(q, 2) in counts)
    return Dfa(tuple(ext.symbols), tuple(delta), 0, acc)


def plain_universe_dfa(ext: ExtendedAlphabet) -> Dfa:
    """Embedded A^*: no variable marked anywhere."""
    d = None
    for v in ext.ctx:
        piece = mark_count_dfa(ext, v, {0})
        d = piece if d is None else d.intersect(piece)
    return (d or universal_dfa(ext.symbols)).minimize()


def image_dfa(ext: ExtendedAlphabet) -> Dfa:
    """The image of the marked-word embedding: every context variable marks
    exactly one position."""
    d = None
    for v in ext.ctx:
        piece = mark_count_dfa(ext, v, {1})
        d = piece if d is None else d.intersect(piece)
    return (d or universal_dfa(ext.symbols)).minimize()


def zero_part_dfa(ext: ExtendedAlphabet) -> Dfa:
    """Everything that is neither unmarked nor a marked-word embedding."""
    return plain_universe_dfa(ext).union(image_dfa(ext)).complement().minimize()


# ---------------------------------------------------------------------------
# finite monoids


def _assert_associative(table, caps: _caps.Caps):
    n = len(table)
    if n > caps.monoid_assoc:
        return False
    t = np.asarray(table, dtype=np.int64)
    chunk = max(1, (1 << 22) // max(1, n * n))
    for s in range(0, n, chunk):
        blk = t[s:s + chunk]
        lhs = t[blk, :]        # (a.b).c
        rhs = blk[:, t]        # a.(b.c)
        if not np.array_equal(lhs, rhs):
            a, b, c = np.argwhere(lhs != rhs)[0]
            raise ParseError(f"multiplication not associative at ({s + a},{b},{c})")
    return True


@dataclass(frozen=True)
class FinMonoid:
    """Finite monoid as a multiplication table over 0..n-1.

    Identity is always verified; associativity is verified exhaustively
    (numpy, chunked) whenever n is within the associativity cap, and
    ``laws_checked`` records whether that happened.
    """

    table: tuple
    identity: int
    names: tuple = None
    laws_checked: bool = field(default=False, compare=False)

    def __post_init__(self):
        n = len(self.table)
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise ParseError("malformed multiplication table")
        e = self.identity
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise ParseError(f"identity fails at {i}")
        checked = _assert_associative(self.table, _caps.from_env())
        object.__setattr__(self, "laws_checked", checked)
        if self.names is not None and len(self.names) != n:
            raise ParseError("names length mismatch")

    def __len__(self):
        return len(self.table)

    def mul(self, a, b) -> int:
        return self.table[a][b]

    def prod(self, elts) -> int:
        out = self.identity
        for x in elts:
            out = self.table[out][x]
        return out

    def name(self, i) -> str:
        return self.names[i] if self.names else str(i)

    def is_commutative(self) -> bool:
        n = len(self.table)
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(n) for b in range(n))

    def submonoid(self, gens) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    p = self.table[e][g]
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        return frozenset(seen)


def generate_monoid(identity, gens, mul, caps: _caps.Caps = _caps.DEFAULT):
    """Close hashable elements under multiplication starting from the
    identity (BFS over right multiplication by generators).

    gens is a list of (name, element) pairs; returns (elements, index,
    FinMonoid, reps) where reps[i] is the shortlex-first generator word
    reaching element i.
    """
    elements = [identity]
    index = {identity: 0}
    reps = [()]
    i = 0
    while i < len(elements):
        e = elements[i]
        for name, g in gens:
            p = mul(e, g)
            if p not in index:
                if len(elements) >= caps.monoid:
                    raise CapExceeded("monoid element cap", cap=caps.monoid)
                index[p] = len(elements)
                elements.append(p)
                reps.append(reps[i] + (name,))
        i += 1
    table = tuple(
        tuple(index[mul(a, b)] for b in elements) for a in elements
    )
    mon = FinMonoid(table, 0)
    return elements, index, mon, tuple(reps)


# ---------------------------------------------------------------------------
# stamps


@dataclass(frozen=True)
class Stamp:
    """A surjective morphism from the free monoid on ``alphabet`` onto a
    finite monoid, as a letter table; optionally with an accepting subset
    presenting one language."""

    alphabet: tuple
    monoid: FinMonoid
    letters: tuple           # letters[i] = image of alphabet[i]
    reps: tuple              # representative word per monoid element
    accepting: frozenset = None

    def __post_init__(self):
        gen = self.monoid.submonoid(set(self.letters))
        if gen != frozenset(range(len(self.monoid))):
            raise ParseError("stamp is not surjective onto its monoid")
        for m, rep in enumerate(self.reps):
            if self.mu(rep) != m:
                raise ParseError(f"representative of element {m} is wrong")

    def letter(self, sym) -> int:
        return self.letters[self.alphabet.index(sym)]

    def mu(self, word) -> int:
        out = self.monoid.identity
        for sym in word:
            out = self.monoid.table[out][self.letter(sym)]
        return out

    def dfa(self, accepted) -> Dfa:
        """mu^{-1}(accepted) as a DFA on the monoid's right Cayley graph."""
        n = len(self.monoid)
        delta = tuple(
            tuple(self.monoid.table[m][l] for l in self.letters) for m in range(n)
        )
        return Dfa(self.alphabet, delta, self.monoid.identity, frozenset(accepted))

    def language(self) -> Dfa:
        if self.accepting is None:
            raise ParseError("stamp presents no language")
        return self.dfa(self.accepting)

    def quotient_set(self, accepted, s, t) -> frozenset:
        """s^{-1} P t^{-1} at the monoid level: {m : s·m·t in P}."""
        tab = self.monoid.table
        return frozenset(m for m in range(len(self.monoid))
                         if tab[tab[s][m]][t] in accepted)


def syntactic_stamp(dfa: Dfa, caps: _caps.Caps = _caps.DEFAULT) -> Stamp:
    """Syntactic stamp of one language: transition monoid of the minimal
    complete automaton, with the accepting image set."""
    st = syntactic_stamp_of_family([dfa], caps)
    acc = frozenset(m for m in range(len(st.monoid)) if dfa.accepts(st.reps[m]))
    out = Stamp(st.alphabet, st.monoid, st.letters, st.reps, acc)
    if not out.language().equivalent(dfa):
        raise ParseError("syntactic stamp does not recognize its language")
    return out


def syntactic_stamp_of_family(dfas, caps: _caps.Caps = _caps.DEFAULT) -> Stamp:
    """Syntactic stamp of a finite family of languages over one alphabet:
    the transition monoid of the reachable product of the minimal automata
    (= the quotient of A* by the intersection of the syntactic congruences).
    """
    if not dfas:
        raise ParseError("empty family")
    mins = [d.minimize() for d in dfas]
    alphabet = mins[0].alphabet
    if any(m.alphabet != alphabet for m in mins):
        raise ParseError("family over different alphabets")
    k = len(alphabet)
    start = tuple(m.init for m in mins)
    states = [start]
    index = {start: 0}
    i = 0
    while i < len(states):
        q = states[i]
        for c in range(k):
            t = tuple(m.delta[q[j]][c] for j, m in enumerate(mins))
            if t not in index:
                if len(states) >= caps.dfa_states:
                    raise CapExceeded("product state cap", cap=caps.dfa_states)
                index[t] = len(states)
                states.append(t)
        i += 1
    nstates = len(states)

    def letter_action(c):
        return tuple(
            index[tuple(m.delta[q[j]][c] for j, m in enumerate(mins))]
            for q in states
        )

    identity = tuple(range(nstates))
    gens = [(alphabet[c], letter_action(c)) for c in range(k)]

    def compose(f, g):  # word uv acts by f then g
        return tuple(g[f[i]] for i in range(nstates))

    elements, elt_index, mon, reps = generate_monoid(identity, gens, compose, caps)
    letters = tuple(elt_index[g] for _, g in gens)
    return Stamp(alphabet, mon, letters, reps)


# ---------------------------------------------------------------------------
# Boolean algebras of recognized languages


@dataclass(frozen=True)
class RegularBA:
    """A finite Boolean algebra of regular languages over one alphabet,
    presented by a stamp plus a partition of the monoid into blocks; the
    elements are the preimages of unions of blocks."""

    stamp: Stamp
    blocks: tuple  # tuple[frozenset[int]] partitioning the monoid

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b or b & seen:
                raise ParseError("blocks must partition the monoid")
            seen |= b
        if seen != set(range(len(self.stamp.monoid))):
            raise ParseError("blocks must partition the monoid")

    @property
    def alphabet(self):
        return self.stamp.alphabet

    def atom_dfas(self) -> list:
        return [self.stamp.dfa(b) for b in self.blocks]

    def element(self, block_indices) -> Dfa:
        acc = frozenset().union(*(self.blocks[i] for i in block_indices)) \
            if block_indices else frozenset()
        return self.stamp.dfa(acc)

    def element_count(self) -> int:
        return 1 << len(self.blocks)

    def contains(self, lang: Dfa) -> bool:
        """Exact membership: the language is a union of atom languages."""
        for b in self.blocks:
            bl = self.stamp.dfa(b)
            inter = bl.intersect(lang)
            if not inter.is_empty() and not bl.intersect(lang.complement()).is_empty():
                return False
        return True

    def is_quotient_closed(self) -> bool:
        """Every two-sided monoid quotient of every block is a union of
        blocks (hence the language family is closed under word quotients)."""
        tab = self.stamp.monoid.table
        n = len(self.stamp.monoid)
        for s in range(n):
            for t in range(n):
                for b in self.blocks:
                    pre = frozenset(m for m in range(n) if tab[tab[s][m]][t] in b)
                    for blk in self.blocks:
                        if blk & pre and not blk <= pre:
                            return False
        return True


def recognized_languages(stamp: Stamp) -> RegularBA:
    """All languages recognized by the stamp: atoms are the singleton
    preimages mu^{-1}(m)."""
    return RegularBA(stamp, tuple(frozenset({m}) for m in range(len(stamp.monoid))))


def quotient_closure(gens, caps: _caps.Caps = _caps.DEFAULT,
                     check_closure=True) -> RegularBA:
    """The Boolean algebra closed under left/right word quotients generated
    by the given languages = everything recognized by their joint syntactic
    stamp (for a quotient-closed finite BA, atoms = syntactic classes)."""
    stamp = syntactic_stamp_of_family(list(gens), caps)
    ba = recognized_languages(stamp)
    for g in gens:
        if not ba.contains(g):
            raise ParseError("generator escaped its own quotient closure")
    if check_closure and len(stamp.monoid) <= 200 and not ba.is_quotient_closed():
        raise ParseError("closure is not quotient-closed")
    return ba


def factor_stamp(stamp: Stamp, lang: Dfa):
    """Does the stamp recognize the language?  If so, return (g, accepted):
    the factoring morphism g (as a table monoid -> syntactic monoid of the
    language, with g∘mu = mu_lang) and the accepting subset; else None."""
    accepted = frozenset(
        m for m in range(len(stamp.monoid)) if lang.accepts(stamp.reps[m])
    )
    if not stamp.dfa(accepted).equivalent(lang):
        return None
    syn = syntactic_stamp(lang)
    g = tuple(syn.mu(stamp.reps[m]) for m in range(len(stamp.monoid)))
    # morphism sanity: g respects letters and identity
    if g[stamp.monoid.identity] != syn.monoid.identity:
        raise ParseError("factoring map misses the identity")
    for ci, sym in enumerate(stamp.alphabet):
        for m in range(len(stamp.monoid)):
            lhs = g[stamp.monoid.table[m][stamp.letters[ci]]]
            rhs = syn.monoid.table[g[m]][syn.letters[ci]]
            if lhs != rhs:
                raise ParseError("factoring map is not a morphism")
    return g, accepted


# ---------------------------------------------------------------------------
# bounded data -> DFA


def dfa_from_bounded(lang: BoundedLang, caps: _caps.Caps = _caps.DEFAULT,
                     max_states=None) -> Dfa:
    """Infer the automaton behind bounded language data.

    For probe depth d = 0, 1, ..., prefixes of length <= bound-d are classed
    by their depth-d residual signature; transitions come from the
    shortlex-first row of each class that still has children in the table.
    A hypothesis is returned only after verifying it against *every* word of
    length <= bound, so the result provably agrees with the data; if no
    probe depth yields a verified hypothesis the data looks non-regular at
    this bound and a structured error is raised.
    """
    bound = lang.bound
    syms = tuple(lang.alphabet)
    members = lang.words
    cap = max_states or caps.dfa_states
    if bound == 0:
        acc = frozenset({0}) if () in members else frozenset()
        return Dfa(syms, ((0,) * len(syms),), 0, acc)
    total = sum(len(syms) ** n for n in range(bound + 1))
    if total > caps.enumeration:
        raise CapExceeded("word table too large for inference", cap=caps.enumeration)
    all_words = [list(itertools.product(syms, repeat=n)) for n in range(bound + 1)]

    def verified(cand: Dfa):
        for n in range(bound + 1):
            for w in all_words[n]:
                if cand.accepts(w) != (w in members):
                    return False
        return True

    last_size = None
    for d in range(bound + 1):
        probes = [w for n in range(d + 1) for w in all_words[n]]
        rows = [w for n in range(bound - d + 1) for w in all_words[n]]
        sig_of = {}
        classes = {}
        for u in rows:
            sig = frozenset(p for p in probes if u + p in members)
            sig_of[u] = sig
            if sig not in classes:
                classes[sig] = u  # shortlex-first representative
        if len(classes) > cap:
            raise CapExceeded("state cap during inference", cap=cap)
        last_size = len(classes)
        index = {sig: i for i, sig in enumerate(classes)}
        # transitions from the first representative shallow enough to step
        shallow = {}
        for u in rows:
            if len(u) < bound - d:
                shallow.setdefault(sig_of[u], u)
        if any(sig not in shallow for sig in classes):
            continue  # some class only ever appears at the frontier
        delta = []
        for sig in classes:
            u = shallow[sig]
            delta.append(tuple(index[sig_of[u + (a,)]] for a in syms))
        acc = frozenset(i for sig, i in index.items() if () in sig)
        cand = Dfa(syms, tuple(delta), index[sig_of[()]], acc)
        if verified(cand):
            return cand.minimize()
    raise BoundTooSmall(
        f"no automaton with <= {last_size} states is consistent with the data "
        f"at bound {bound}; the language is likely not regular at this bound",
        bound=bound,
    )
