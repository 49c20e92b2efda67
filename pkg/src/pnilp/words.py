"""Free-group words: syntax trees, a text grammar, evaluation and value sets.

Grammar::

    word  := term+
    term  := atom ('^' int)?
    atom  := 'x' int | '[' word (',' word)+ ']' | '(' word ')'

Multi-argument brackets nest to the left, ``[u,v,w] = [[u,v],w]``, and
``[u,v] = u^-1 v^-1 u v``. The shortcuts ``gamma:k``, ``delta:k`` and
``pow:n`` are accepted wherever a word is parsed.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Union

import numpy as np

from .perm import (
    CapExceeded,
    DegreeMismatch,
    GroupError,
    Permutation,
    PermutationGroup,
    commutator,
    compose,
    conjugate,
    inverse,
    limits,
)
from .structure import SubgroupRef, generate

__all__ = [
    "Var",
    "Power",
    "Product",
    "Bracket",
    "Word",
    "WordSyntaxError",
    "ValueSet",
    "var",
    "power",
    "product",
    "bracket",
    "invert",
    "gamma_word",
    "delta_word",
    "power_word",
    "arity",
    "to_text",
    "word_name",
    "parse_word",
    "exponent_sums",
    "is_commutator_word",
    "is_multilinear",
    "evaluate_word",
    "word_values",
    "brute_force_values",
    "verbal_subgroup",
]


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Power:
    base: "Word"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple["Word", ...]


@dataclass(frozen=True)
class Bracket:
    left: "Word"
    right: "Word"


Word = Union[Var, Power, Product, Bracket]


class WordSyntaxError(GroupError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def var(i: int) -> Var:
    if i < 1:
        raise GroupError("variable indices start at 1")
    return Var(i)


def power(w: Word, n: int) -> Word:
    return w if n == 1 else Power(w, n)


def invert(w: Word) -> Word:
    return power(w, -1)


def product(*factors: Word) -> Word:
    flat: list[Word] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Product) else [f])
    if not flat:
        raise GroupError("empty product")
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def bracket(u: Word, v: Word, *more: Word) -> Bracket:
    w = Bracket(u, v)
    for m in more:
        w = Bracket(w, m)
    return w


def _shift(w: Word, by: int) -> Word:
    if isinstance(w, Var):
        return Var(w.index + by)
    if isinstance(w, Power):
        return Power(_shift(w.base, by), w.exponent)
    if isinstance(w, Product):
        return Product(tuple(_shift(f, by) for f in w.factors))
    return Bracket(_shift(w.left, by), _shift(w.right, by))


def gamma_word(k: int) -> Word:
    """``[x1, ..., xk]``; ``gamma_word(1)`` is ``x1``."""
    if k < 1:
        raise GroupError("gamma_k needs k >= 1")
    w: Word = Var(1)
    for i in range(2, k + 1):
        w = Bracket(w, Var(i))
    return w


def delta_word(k: int) -> Word:
    """Derived word on ``2^k`` variables; ``delta_word(0)`` is ``x1``."""
    if k < 0:
        raise GroupError("delta_k needs k >= 0")
    if k == 0:
        return Var(1)
    half = delta_word(k - 1)
    return Bracket(half, _shift(half, 2 ** (k - 1)))


def power_word(n: int) -> Word:
    return power(Var(1), n)


def arity(w: Word) -> int:
    if isinstance(w, Var):
        return w.index
    if isinstance(w, Power):
        return arity(w.base)
    if isinstance(w, Product):
        return max(arity(f) for f in w.factors)
    return max(arity(w.left), arity(w.right))


def to_text(w: Word) -> str:
    if isinstance(w, Var):
        return f"x{w.index}"
    if isinstance(w, Bracket):
        args = [w.right]
        left = w.left
        while isinstance(left, Bracket):
            args.append(left.right)
            left = left.left
        args.append(left)
        return "[" + ",".join(to_text(a) for a in reversed(args)) + "]"
    if isinstance(w, Product):
        return " ".join(to_text(f) for f in w.factors)
    base = to_text(w.base)
    if isinstance(w.base, (Product, Power)):
        base = f"({base})"
    return f"{base}^{w.exponent}"


def word_name(w: Word) -> str:
    """Short descriptor used in reports: ``gamma:k``, ``delta:k``, ``pow:n`` or the text."""
    k = _gamma_k(w)
    if k is not None and k >= 2:
        return f"gamma:{k}"
    k = _delta_k(w)
    if k is not None and k >= 2:
        return f"delta:{k}"
    if isinstance(w, Power) and w.base == Var(1):
        return f"pow:{w.exponent}"
    if w == Var(1):
        return "gamma:1"
    return to_text(w)


def _gamma_k(w: Word) -> int | None:
    k = arity(w)
    return k if w == gamma_word(k) else None


def _delta_k(w: Word) -> int | None:
    n = arity(w)
    k = n.bit_length() - 1
    return k if n == 2**k and w == delta_word(k) else None


_SHORTCUT = re.compile(r"\s*(gamma|delta|pow)\s*:\s*(-?\d+)\s*$")
_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(-?\d+)|([\[\](),^]))")


def parse_word(text: str) -> Word:
    m = _SHORTCUT.match(text)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "gamma":
            return gamma_word(n)
        if kind == "delta":
            return delta_word(n)
        return power_word(n)
    return _Parser(text).parse()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, object, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m:
                raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
            start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
            if m.group(1):
                idx = int(m.group(2))
                if idx < 1:
                    raise WordSyntaxError("variable index must be >= 1", start)
                self.tokens.append(("var", idx, start))
            elif m.group(3) is not None:
                self.tokens.append(("int", int(m.group(3)), start))
            else:
                self.tokens.append((m.group(4), None, start))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def expect(self, kind: str):
        if self.peek() != kind:
            found = self.peek() or "end of input"
            raise WordSyntaxError(f"expected {kind!r}, found {found!r}", self.pos())
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Word:
        w = self.word()
        if self.peek() is not None:
            raise WordSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return w

    def word(self) -> Word:
        terms = []
        while self.peek() in ("var", "[", "("):
            terms.append(self.term())
        if not terms:
            found = self.peek() or "end of input"
            raise WordSyntaxError(f"expected a word, found {found!r}", self.pos())
        return product(*terms)

    def term(self) -> Word:
        a = self.atom()
        if self.peek() == "^":
            self.i += 1
            _, n, _ = self.expect("int")
            a = power(a, n)
        return a

    def atom(self) -> Word:
        kind = self.peek()
        if kind == "var":
            _, idx, _ = self.expect("var")
            return Var(idx)
        if kind == "[":
            self.i += 1
            args = [self.word()]
            while self.peek() == ",":
                self.i += 1
                args.append(self.word())
            if self.peek() != "]":
                raise WordSyntaxError("expected ',' or ']'", self.pos())
            if len(args) < 2:
                raise WordSyntaxError("a bracket needs at least two entries", self.pos())
            self.i += 1
            return bracket(*args)
        self.expect("(")
        w = self.word()
        self.expect(")")
        return w


def exponent_sums(w: Word) -> dict[int, int]:
    sums: dict[int, int] = {}

    def walk(u: Word, mult: int) -> None:
        if isinstance(u, Var):
            sums[u.index] = sums.get(u.index, 0) + mult
        elif isinstance(u, Power):
            walk(u.base, mult * u.exponent)
        elif isinstance(u, Product):
            for f in u.factors:
                walk(f, mult)
        else:
            # [u, v] = u^-1 v^-1 u v contributes nothing
            walk(u.left, 0)
            walk(u.right, 0)

    walk(w, 1)
    return sums


def is_commutator_word(w: Word) -> bool:
    """Syntactic test: every variable has exponent sum zero."""
    return all(v == 0 for v in exponent_sums(w).values())


def _variables(w: Word) -> list[int]:
    if isinstance(w, Var):
        return [w.index]
    if isinstance(w, Power):
        return _variables(w.base)
    if isinstance(w, Product):
        return [i for f in w.factors for i in _variables(f)]
    return _variables(w.left) + _variables(w.right)


def is_multilinear(w: Word) -> bool:
    """Built from variables by brackets only, each variable used once."""

    def shape_ok(u: Word) -> bool:
        if isinstance(u, Var):
            return True
        return isinstance(u, Bracket) and shape_ok(u.left) and shape_ok(u.right)

    vs = _variables(w)
    return shape_ok(w) and len(vs) == len(set(vs))


def evaluate_word(w: Word, args: Sequence[Permutation]) -> Permutation:
    """Substitute ``args[i-1]`` for ``xi``."""
    need = arity(w)
    if len(args) < need:
        raise GroupError(f"word needs {need} arguments, got {len(args)}")
    if len({a.degree for a in args}) > 1:
        raise DegreeMismatch("arguments have different degrees")

    def ev(u: Word) -> Permutation:
        if isinstance(u, Var):
            return args[u.index - 1]
        if isinstance(u, Power):
            return ev(u.base) ** u.exponent
        if isinstance(u, Product):
            out = ev(u.factors[0])
            for f in u.factors[1:]:
                out = compose(out, ev(f))
            return out
        return commutator(ev(u.left), ev(u.right))

    return ev(w)


@dataclass(frozen=True)
class ValueSet:
    """The set ``G_w`` of values of ``word`` in ``group``.

    ``word`` is None for a set supplied from outside (``tag="external set"``).
    """

    group: PermutationGroup
    word: Word | None
    values: frozenset[Permutation]
    tag: str = "word"

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(sorted(self.values))

    def __contains__(self, x: Permutation) -> bool:
        return x in self.values

    def is_conjugation_closed(self) -> bool:
        return all(conjugate(v, g) in self.values for v in self.values for g in self.group.generators)

    def is_inversion_closed(self) -> bool:
        return all(inverse(v) in self.values for v in self.values)

    def describe(self) -> str:
        return word_name(self.word) if self.word is not None else self.tag


def _shape_key(w: Word) -> str:
    # relabel variables by first occurrence so equal shapes share a memo entry
    names: dict[int, int] = {}

    def walk(u: Word) -> str:
        if isinstance(u, Var):
            names.setdefault(u.index, len(names) + 1)
            return f"x{names[u.index]}"
        return f"[{walk(u.left)},{walk(u.right)}]"

    return walk(w)


def _multilinear_values(G: PermutationGroup, w: Word, memo: dict) -> frozenset[Permutation]:
    key = _shape_key(w)
    if key in memo:
        return memo[key]
    if isinstance(w, Var):
        result = frozenset(G.elements())
    else:
        # the two sides use disjoint variables, so their values range independently
        left = sorted(_multilinear_values(G, w.left, memo))
        right = sorted(_multilinear_values(G, w.right, memo))
        inv_right = [inverse(b) for b in right]
        out = set()
        for a in left:
            ai = inverse(a)
            for b, bi in zip(right, inv_right):
                out.add(compose(compose(ai, bi), compose(a, b)))
        result = frozenset(out)
    memo[key] = result
    return result


def _cayley(G: PermutationGroup) -> tuple[tuple[Permutation, ...], np.ndarray, np.ndarray]:
    """Multiplication and inversion tables over ``G.elements()`` indices."""
    memo = G.memo
    if "cayley" not in memo:
        elems = G.elements()
        index = {e: i for i, e in enumerate(elems)}
        mult = np.array([[index[compose(a, b)] for b in elems] for a in elems], dtype=np.int32)
        inv = np.array([index[inverse(a)] for a in elems], dtype=np.int32)
        memo["cayley"] = (elems, mult, inv)
    return memo["cayley"]


def _table_eval(w: Word, args: list[np.ndarray], mult: np.ndarray, inv: np.ndarray) -> np.ndarray:
    if isinstance(w, Var):
        return args[w.index - 1]
    if isinstance(w, Power):
        a = _table_eval(w.base, args, mult, inv)
        n = w.exponent
        if n < 0:
            a, n = inv[a], -n
        result = np.zeros_like(a) + np.int32(_identity_index(mult))
        while n:
            if n & 1:
                result = mult[result, a]
            a = mult[a, a]
            n >>= 1
        return result
    if isinstance(w, Product):
        out = _table_eval(w.factors[0], args, mult, inv)
        for f in w.factors[1:]:
            out = mult[out, _table_eval(f, args, mult, inv)]
        return out
    a = _table_eval(w.left, args, mult, inv)
    b = _table_eval(w.right, args, mult, inv)
    return mult[mult[inv[a], inv[b]], mult[a, b]]


def _identity_index(mult: np.ndarray) -> int:
    # the identity is the only i with i * i == i
    return int(np.flatnonzero(mult.diagonal() == np.arange(len(mult)))[0])


def brute_force_values(G: PermutationGroup, w: Word, chunk: int = 1 << 20) -> frozenset[Permutation]:
    """Evaluate ``w`` on every tuple of group elements.

    Subject to ``limits.tuple_cap``; raises ``CapExceeded`` rather than
    truncating.
    """
    n = G.order()
    k = arity(w)
    total = n**k
    if total > limits.tuple_cap:
        raise CapExceeded(f"{n}^{k} = {total} tuples exceeds tuple cap {limits.tuple_cap}")
    elems, mult, inv = _cayley(G)
    hit = np.zeros(n, dtype=bool)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        args = []
        for _ in range(k):
            args.append((idx % n).astype(np.int32))
            idx = idx // n
        hit[_table_eval(w, args, mult, inv)] = True
    return frozenset(elems[i] for i in np.flatnonzero(hit))


def word_values(G: PermutationGroup, w: Word) -> ValueSet:
    """``G_w``. Multilinear commutator words (gamma_k, delta_k, ...) and
    ``x1^n`` are computed directly; other words by full tuple enumeration."""
    memo = G.memo.setdefault("word_values", {})
    if w in memo:
        return memo[w]
    if is_multilinear(w):
        values = _multilinear_values(G, w, G.memo.setdefault("multilinear", {}))
    elif isinstance(w, Power) and isinstance(w.base, Var):
        values = frozenset(g**w.exponent for g in G.elements())
    else:
        values = brute_force_values(G, w)
    vs = ValueSet(G, w, values)
    memo[w] = vs
    return vs


def verbal_subgroup(G: PermutationGroup, w: Word) -> SubgroupRef:
    """``w(G)``, the subgroup generated by ``G_w``."""
    return SubgroupRef(G, generate(G.degree, word_values(G, w).values))
