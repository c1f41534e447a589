"""Formulas with generalized quantifiers on marked words.

AST, a small LL parser for the textual surface, the quantifier/predicate
registry, satisfaction semantics, bounded model sets and bounded semantic
equivalence, the letter-relabeling action, and the bridge from a formula to
an exact automaton over the extended alphabet.

Surface syntax:

    E x. P[a](x) & ~(x < y | R[succ](x,y)) | mod[2,0] z. P[b](z)

Quantifier names: ``E`` (exists), ``E1`` (exactly one), ``mod[q,r]``
(number of witnesses congruent to r mod q), ``maj`` (strict majority,
oracle-only), plus registered names.  A binder's body extends as far to
the right as possible; ``~`` binds tighter than ``&`` tighter than ``|``.
``1`` and ``0`` are the always-true / always-false formulas.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from . import caps as _caps
from .errors import MissingMachinery, ParseError
from .regular import Dfa, FinMonoid, dfa_from_bounded
from .words import (Alphabet, BoundedLang, ExtendedAlphabet, MarkedWord,
                    embed_marked, enumerate_marked, mark_alphabet)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Truth:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Falsum:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class LetterPred:
    symbol: str
    var: str


@dataclass(frozen=True)
class NumPred:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    sub: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Quant:
    q: str
    var: str
    body: object


TRUE = Truth()
FALSE = Falsum()

Formula = (Truth, Falsum, LetterPred, NumPred, Not, And, Or, Quant)


def conj(parts) -> object:
    """Flattened conjunction with unit/absorbing simplification."""
    out = []
    for p in parts:
        if isinstance(p, Falsum):
            return FALSE
        if isinstance(p, Truth):
            continue
        out.extend(p.args if isinstance(p, And) else (p,))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(parts) -> object:
    """Flattened disjunction; the empty join is the always-false formula."""
    out = []
    for p in parts:
        if isinstance(p, Truth):
            return TRUE
        if isinstance(p, Falsum):
            continue
        out.extend(p.args if isinstance(p, Or) else (p,))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(phi) -> object:
    if isinstance(phi, Truth):
        return FALSE
    if isinstance(phi, Falsum):
        return TRUE
    if isinstance(phi, Not):
        return phi.sub
    return Not(phi)


def free_vars(phi) -> frozenset:
    if isinstance(phi, LetterPred):
        return frozenset({phi.var})
    if isinstance(phi, NumPred):
        return frozenset(phi.args)
    if isinstance(phi, Not):
        return free_vars(phi.sub)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for a in phi.args:
            out |= free_vars(a)
        return out
    if isinstance(phi, Quant):
        return free_vars(phi.body) - {phi.var}
    return frozenset()


def bound_vars(phi) -> frozenset:
    if isinstance(phi, Not):
        return bound_vars(phi.sub)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for a in phi.args:
            out |= bound_vars(a)
        return out
    if isinstance(phi, Quant):
        return bound_vars(phi.body) | {phi.var}
    return frozenset()


def letters_of(phi) -> frozenset:
    """All alphabet symbols the formula mentions in letter tests."""
    if isinstance(phi, LetterPred):
        return frozenset({phi.symbol})
    if isinstance(phi, Not):
        return letters_of(phi.sub)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for a in phi.args:
            out |= letters_of(a)
        return out
    if isinstance(phi, Quant):
        return letters_of(phi.body)
    return frozenset()


def check_hygiene(phi):
    """Reject a variable that occurs both free and bound, or is bound twice
    along one branch; keeps substitution capture-free by construction."""
    clash = free_vars(phi) & bound_vars(phi)
    if clash:
        raise ParseError(f"variable {min(clash)!r} occurs both free and bound")

    def walk(node, bound):
        if isinstance(node, Quant):
            if node.var in bound:
                raise ParseError(f"variable {node.var!r} is bound twice")
            walk(node.body, bound | {node.var})
        elif isinstance(node, Not):
            walk(node.sub, bound)
        elif isinstance(node, (And, Or)):
            for a in node.args:
                walk(a, bound)

    walk(phi, frozenset())
    return phi


def map_vars(phi, ren: dict):
    """Rename variables by a table (applied to free occurrences; binders for
    renamed variables must not occur — use rename_bound first)."""
    if isinstance(phi, LetterPred):
        return LetterPred(phi.symbol, ren.get(phi.var, phi.var))
    if isinstance(phi, NumPred):
        return NumPred(phi.name, tuple(ren.get(v, v) for v in phi.args))
    if isinstance(phi, Not):
        return Not(map_vars(phi.sub, ren))
    if isinstance(phi, And):
        return And(tuple(map_vars(a, ren) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(map_vars(a, ren) for a in phi.args))
    if isinstance(phi, Quant):
        if phi.var in ren:
            raise ParseError(f"cannot rename across binder of {phi.var!r}")
        return Quant(phi.q, phi.var, map_vars(phi.body, ren))
    return phi


def rename_bound(phi, avoid, prefix="z"):
    """Systematically rename all bound variables to fresh z0, z1, ... not in
    ``avoid``; deterministic left-to-right numbering."""
    avoid = set(avoid) | free_vars(phi)
    counter = [0]

    def fresh():
        while True:
            v = f"{prefix}{counter[0]}"
            counter[0] += 1
            if v not in avoid:
                avoid.add(v)
                return v

    def walk(node, ren):
        if isinstance(node, LetterPred):
            return LetterPred(node.symbol, ren.get(node.var, node.var))
        if isinstance(node, NumPred):
            return NumPred(node.name, tuple(ren.get(v, v) for v in node.args))
        if isinstance(node, Not):
            return Not(walk(node.sub, ren))
        if isinstance(node, And):
            return And(tuple(walk(a, ren) for a in node.args))
        if isinstance(node, Or):
            return Or(tuple(walk(a, ren) for a in node.args))
        if isinstance(node, Quant):
            v = fresh()
            return Quant(node.q, v, walk(node.body, {**ren, node.var: v}))
        return node

    return walk(phi, {})


# ---------------------------------------------------------------------------
# quantifiers and numerical predicates


@dataclass(frozen=True)
class Quantifier:
    """A generalized unary quantifier: a function on the bit string of
    pointwise truth values, given either by a finite monoid with letter
    images and an accepting subset, or by a bare oracle."""

    name: str
    monoid: FinMonoid = None
    images: tuple = None       # (image of bit 0, image of bit 1)
    accept: frozenset = None
    oracle: object = None

    def __post_init__(self):
        if (self.monoid is None) == (self.oracle is None):
            raise ParseError("quantifier needs exactly one presentation")
        if self.monoid is not None:
            n = len(self.monoid)
            if self.images is None or len(self.images) != 2 \
                    or any(not 0 <= i < n for i in self.images):
                raise ParseError("bad bit images")
            if self.accept is None or not self.accept <= set(range(n)):
                raise ParseError("bad accepting subset")

    @property
    def is_monoid(self) -> bool:
        return self.monoid is not None

    def evaluate(self, bits) -> bool:
        """Apply the quantifier to a bit string (the empty string is decided
        by the identity element / the oracle on the empty input)."""
        if self.monoid is None:
            return bool(self.oracle(tuple(bits)))
        out = self.monoid.identity
        tab = self.monoid.table
        b0, b1 = self.images
        for b in bits:
            out = tab[out][b1 if b else b0]
        return out in self.accept


@dataclass(frozen=True)
class NumPredDef:
    """k-ary numerical predicate: an oracle on (position tuple, word length);
    positions are 1-based."""

    name: str
    arity: int
    holds: object


_MOD_RE = re.compile(r"^mod\[(\d+),(\d+)\]$")


def _exists_quant():
    m = FinMonoid(((0, 1), (1, 1)), 0, names=("0", "1"))
    return Quantifier("E", monoid=m, images=(0, 1), accept=frozenset({1}))


def _unique_quant():
    table = tuple(tuple(min(i + j, 2) for j in range(3)) for i in range(3))
    m = FinMonoid(table, 0, names=("0", "1", "2+"))
    return Quantifier("E1", monoid=m, images=(0, 1), accept=frozenset({1}))


def _mod_quant(q, r):
    if q < 1 or not 0 <= r < q:
        raise ParseError(f"bad modulus parameters [{q},{r}]")
    table = tuple(tuple((i + j) % q for j in range(q)) for i in range(q))
    m = FinMonoid(table, 0)
    return Quantifier(f"mod[{q},{r}]", monoid=m, images=(0, 1 % q),
                      accept=frozenset({r}))


def _maj_quant():
    return Quantifier("maj", oracle=lambda bits: sum(bits) > len(bits) - sum(bits))


class Registry:
    """Name resolution for quantifiers and numerical predicates; built-ins
    plus user registrations, with mod[q,r] families resolved on demand."""

    def __init__(self):
        self._quants = {}
        self._preds = {}
        for q in (_exists_quant(), _unique_quant(), _maj_quant()):
            self._quants[q.name] = q
        self._preds["<"] = NumPredDef("<", 2, lambda p, n: p[0] < p[1])
        self._preds["="] = NumPredDef("=", 2, lambda p, n: p[0] == p[1])
        self._preds["succ"] = NumPredDef("succ", 2, lambda p, n: p[1] == p[0] + 1)
        self._preds["first"] = NumPredDef("first", 1, lambda p, n: p[0] == 1)
        self._preds["last"] = NumPredDef("last", 1, lambda p, n: p[0] == n)

    def register_quantifier(self, q: Quantifier):
        if q.name in self._quants:
            raise ParseError(f"quantifier {q.name!r} already registered")
        self._quants[q.name] = q

    def register_numpred(self, p: NumPredDef):
        if p.name in self._preds:
            raise ParseError(f"predicate {p.name!r} already registered")
        self._preds[p.name] = p

    def maybe_quantifier(self, name):
        if name in self._quants:
            return self._quants[name]
        m = _MOD_RE.match(name)
        if m:
            q = _mod_quant(int(m.group(1)), int(m.group(2)))
            self._quants[name] = q
            return q
        return None

    def quantifier(self, name) -> Quantifier:
        q = self.maybe_quantifier(name)
        if q is None:
            raise ParseError(f"unknown quantifier {name!r}")
        return q

    def numpred(self, name) -> NumPredDef:
        if name in self._preds:
            return self._preds[name]
        m = _MOD_RE.match(name)
        if m:
            q, r = int(m.group(1)), int(m.group(2))
            if q < 1 or not 0 <= r < q:
                raise ParseError(f"bad modulus parameters [{q},{r}]")
            p = NumPredDef(name, 1, lambda pos, n, q=q, r=r: pos[0] % q == r)
            self._preds[name] = p
            return p
        raise ParseError(f"unknown numerical predicate {name!r}")


DEFAULT_REGISTRY = Registry()


def registry_from_json(data, base=None) -> Registry:
    """Extend the built-ins with a JSON declaration:
    {"quantifiers": [{"name", "table", "identity", "images", "accept"}],
     "predicates": [{"name", "arity", "tuples", "finite": true}]}."""
    reg = Registry()
    for spec in data.get("quantifiers", ()):
        mon = FinMonoid(tuple(map(tuple, spec["table"])), spec.get("identity", 0))
        reg.register_quantifier(Quantifier(
            spec["name"], monoid=mon, images=tuple(spec["images"]),
            accept=frozenset(spec["accept"])))
    for spec in data.get("predicates", ()):
        if not spec.get("finite", True):
            raise ParseError("only finite tuple predicates can be declared in JSON")
        tuples = frozenset(tuple(t) for t in spec["tuples"])
        arity = int(spec["arity"])
        if any(len(t) != arity for t in tuples):
            raise ParseError(f"arity mismatch in predicate {spec['name']!r}")
        reg.register_numpred(NumPredDef(
            spec["name"], arity, lambda p, n, ts=tuples: tuple(p) in ts))
    return reg


# ---------------------------------------------------------------------------
# parser


_IDENT_RE = re.compile(r"[A-Za-z0-9_]+")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()&|~.<=,":
            tokens.append((ch, ch, i))
            i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
        name = m.group(0)
        i = m.end()
        if i < n and text[i] == "[":
            depth = 0
            j = i
            while j < n:
                if text[j] == "[":
                    depth += 1
                elif text[j] == "]":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if depth != 0:
                raise ParseError(f"unbalanced brackets at position {i}")
            name += text[i:j + 1]
            i = j + 1
        tokens.append(("ident", name, m.start()))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, registry):
        self.toks = tokens
        self.pos = 0
        self.reg = registry

    def peek(self, k=0):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(
                f"expected {kind!r} but found {tok[1]!r} at position {tok[2]}")
        self.pos += 1
        return tok

    def parse(self):
        phi = self.or_()
        end = self.take()
        if end[0] != "end":
            raise ParseError(f"trailing input {end[1]!r} at position {end[2]}")
        return check_hygiene(phi)

    def or_(self):
        parts = [self.and_()]
        while self.peek()[0] == "|":
            self.take()
            parts.append(self.and_())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_(self):
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        tok = self.peek()
        if tok[0] == "~":
            self.take()
            return Not(self.unary())
        if tok[0] == "(":
            self.take()
            phi = self.or_()
            self.take(")")
            return phi
        if tok[0] != "ident":
            raise ParseError(f"unexpected {tok[1]!r} at position {tok[2]}")
        name = tok[1]
        # binder: QNAME var . body   (body extends maximally)
        if self.peek(1)[0] == "ident" and self.peek(2)[0] == "." \
                and self.reg.maybe_quantifier(name) is not None:
            self.take()
            var = self.take("ident")[1]
            self.take(".")
            body = self.or_()
            return Quant(name, var, body)
        return self.atom()

    def atom(self):
        tok = self.take("ident")
        name = tok[1]
        if name == "1":
            return TRUE
        if name == "0":
            return FALSE
        if name.startswith("P[") and name.endswith("]"):
            sym = name[2:-1]
            self.take("(")
            var = self.take("ident")[1]
            self.take(")")
            return LetterPred(sym, var)
        if name.startswith("R[") and name.endswith("]"):
            pred = name[2:-1]
            defn = self.reg.numpred(pred)
            self.take("(")
            args = [self.take("ident")[1]]
            while self.peek()[0] == ",":
                self.take()
                args.append(self.take("ident")[1])
            self.take(")")
            if len(args) != defn.arity:
                raise ParseError(
                    f"predicate {pred!r} takes {defn.arity} arguments, got {len(args)}")
            return NumPred(pred, tuple(args))
        # infix comparison: var < var | var = var
        op = self.peek()
        if op[0] in ("<", "="):
            self.take()
            rhs = self.take("ident")[1]
            return NumPred(op[0], (name, rhs))
        raise ParseError(f"unexpected {name!r} at position {tok[2]}")


def parse(text, registry=None):
    return _Parser(_tokenize(text), registry or DEFAULT_REGISTRY).parse()


def parse_formula_file(text, registry=None):
    """One formula per line; '#' starts a comment; blank lines skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line, registry))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}")
    return out


def to_dsl(phi) -> str:
    """Deterministic textual form; parse(to_dsl(phi)) reproduces the AST."""

    def go(node, floor):
        if isinstance(node, Truth):
            return "1"
        if isinstance(node, Falsum):
            return "0"
        if isinstance(node, LetterPred):
            return f"P[{node.symbol}]({node.var})"
        if isinstance(node, NumPred):
            if node.name in ("<", "="):
                return f"{node.args[0]} {node.name} {node.args[1]}"
            return f"R[{node.name}]({','.join(node.args)})"
        if isinstance(node, Not):
            return "~" + go(node.sub, 3)
        if isinstance(node, And):
            s = " & ".join(go(a, 3) for a in node.args)
            return f"({s})" if floor > 2 else s
        if isinstance(node, Or):
            s = " | ".join(go(a, 2) for a in node.args)
            return f"({s})" if floor > 1 else s
        if isinstance(node, Quant):
            s = f"{node.q} {node.var}. {go(node.body, 1)}"
            return f"({s})" if floor > 1 else s
        raise ParseError(f"not a formula: {node!r}")

    return go(phi, 1)


# ---------------------------------------------------------------------------
# semantics


def satisfies(mw: MarkedWord, phi, registry=None) -> bool:
    """Truth of a formula on a marked word interpreting its free variables."""
    reg = registry or DEFAULT_REGISTRY
    n = len(mw.word)

    def ev(node, marks):
        if isinstance(node, Truth):
            return True
        if isinstance(node, Falsum):
            return False
        if isinstance(node, LetterPred):
            if node.var not in marks:
                raise ParseError(f"free variable {node.var!r} has no mark")
            return mw.word[marks[node.var] - 1] == node.symbol
        if isinstance(node, NumPred):
            try:
                positions = tuple(marks[v] for v in node.args)
            except KeyError as exc:
                raise ParseError(f"free variable {exc.args[0]!r} has no mark")
            return bool(reg.numpred(node.name).holds(positions, n))
        if isinstance(node, Not):
            return not ev(node.sub, marks)
        if isinstance(node, And):
            return all(ev(a, marks) for a in node.args)
        if isinstance(node, Or):
            return any(ev(a, marks) for a in node.args)
        if isinstance(node, Quant):
            q = reg.quantifier(node.q)
            bits = tuple(ev(node.body, {**marks, node.var: i})
                         for i in range(1, n + 1))
            return q.evaluate(bits)
        raise ParseError(f"not a formula: {node!r}")

    return ev(phi, dict(mw.marks))


def models(phi, alphabet: Alphabet, bound, context=None, registry=None) -> frozenset:
    """All marked words of length <= bound satisfying the formula, over the
    given context (defaults to the formula's free variables, sorted)."""
    ctx = tuple(context) if context is not None else tuple(sorted(free_vars(phi)))
    if not free_vars(phi) <= set(ctx):
        raise ParseError("context does not cover the formula's free variables")
    return frozenset(mw for mw in enumerate_marked(alphabet, ctx, bound)
                     if satisfies(mw, phi, registry))


def counterexample_bounded(phi, psi, alphabet: Alphabet, bound=6,
                           context=None, registry=None):
    """First marked word (in enumeration order) where the two formulas
    disagree, or None."""
    ctx = tuple(context) if context is not None else \
        tuple(sorted(free_vars(phi) | free_vars(psi)))
    for mw in enumerate_marked(alphabet, ctx, bound):
        if satisfies(mw, phi, registry) != satisfies(mw, psi, registry):
            return mw
    return None


def equiv_bounded(phi, psi, alphabet: Alphabet, bound=6, context=None,
                  registry=None) -> bool:
    """Semantic equivalence on all marked words of length <= bound (this is
    what formula equality means throughout; the bound is always explicit)."""
    return counterexample_bounded(phi, psi, alphabet, bound, context, registry) is None


def relabel(zeta: dict, phi):
    """The substitution action of a letter map zeta: B -> A on a formula
    over A: every P[a](x) becomes the disjunction of P[b](x) over the b
    mapped to a (the empty join is the always-false formula)."""
    if isinstance(phi, LetterPred):
        return disj(LetterPred(b, phi.var)
                    for b in zeta if zeta[b] == phi.symbol)
    if isinstance(phi, Not):
        return Not(relabel(zeta, phi.sub))
    if isinstance(phi, And):
        return And(tuple(relabel(zeta, a) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(relabel(zeta, a) for a in phi.args))
    if isinstance(phi, Quant):
        return Quant(phi.q, phi.var, relabel(zeta, phi.body))
    return phi


# ---------------------------------------------------------------------------
# formula -> automaton bridge


def formula_dfa(phi, alphabet: Alphabet, context, bound,
                registry=None, caps: _caps.Caps = _caps.DEFAULT):
    """Embed the bounded model set of a formula into the extended alphabet
    and infer the automaton behind it.

    Returns (ext, dfa) where ext is the extended alphabet A x 2^context.
    The automaton provably agrees with the model set up to the bound; for
    genuinely non-regular behaviors this raises a bound error instead.
    """
    ctx = tuple(context)
    ext = ExtendedAlphabet(alphabet, ctx)
    hits = frozenset(embed_marked(mw, ctx, ext=ext)
                     for mw in models(phi, alphabet, bound, ctx, registry))
    return ext, dfa_from_bounded(BoundedLang(tuple(ext.symbols), bound, hits), caps)


def mark_alphabet_of(phi, alphabet: Alphabet, var="x") -> ExtendedAlphabet:
    return mark_alphabet(alphabet, var)
