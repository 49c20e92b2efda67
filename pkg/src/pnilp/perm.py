"""Permutations and permutation groups.

Permutations act on the right: ``compose(a, b)`` applies ``a`` first and then
``b``. Points are 1-based in every public interface and 0-based internally.
"""

from __future__ import annotations

import math
import os
import re
import threading
from collections import deque
from collections.abc import Iterable, Iterator, Sequence

__all__ = [
    "GroupError",
    "DegreeMismatch",
    "CapExceeded",
    "Limits",
    "limits",
    "Permutation",
    "PermutationGroup",
    "compose",
    "inverse",
    "commutator",
    "conjugate",
    "element_order",
    "iterated_commutator",
    "identity",
    "group_from_generators",
    "group_order",
    "contains",
    "elements",
    "parse_cycles",
]


class GroupError(ValueError):
    """Invalid input to a group computation."""


class DegreeMismatch(GroupError):
    pass


class CapExceeded(GroupError):
    """An enumeration would exceed a configured size limit."""


class Limits:
    """Size limits shared by every enumeration.

    Defaults can be overridden with the ``PNILP_ENUM_CAP`` and
    ``PNILP_TUPLE_CAP`` environment variables.
    """

    def __init__(self, enum_cap: int | None = None, tuple_cap: int | None = None):
        self.enum_cap = enum_cap if enum_cap is not None else int(os.environ.get("PNILP_ENUM_CAP", 100_000))
        self.tuple_cap = tuple_cap if tuple_cap is not None else int(os.environ.get("PNILP_TUPLE_CAP", 10**8))

    def __repr__(self):
        return f"Limits(enum_cap={self.enum_cap}, tuple_cap={self.tuple_cap})"


limits = Limits()


class Permutation:
    """An immutable bijection of ``{1..degree}``.

    ``Permutation([2, 3, 1])`` sends 1 to 2, 2 to 3 and 3 to 1.
    """

    __slots__ = ("img", "_hash")

    def __init__(self, images: Sequence[int]):
        img = tuple(int(i) - 1 for i in images)
        if not img:
            raise GroupError("a permutation needs degree >= 1")
        if sorted(img) != list(range(len(img))):
            raise GroupError(f"not a bijection of 1..{len(img)}: {list(images)}")
        self.img = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> Permutation:
        # 0-based, trusted input
        p = object.__new__(cls)
        p.img = img
        p._hash = hash(img)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        if degree < 1:
            raise GroupError("degree must be positive")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: str | Iterable[Sequence[int]], degree: int | None = None) -> Permutation:
        """Build from cycle notation, either text ``"(1 2 3)(4 5)"`` or a list of cycles."""
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        cycles = [list(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=1)
        if degree is None:
            degree = top
        if top > degree:
            raise GroupError(f"cycle point {top} exceeds degree {degree}")
        img = list(range(degree))
        seen = set()
        for c in cycles:
            if any(x < 1 for x in c):
                raise GroupError("cycle points are 1-based")
            if seen.intersection(c) or len(set(c)) != len(c):
                raise GroupError(f"cycles are not disjoint: {cycles}")
            seen.update(c)
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.img)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.img))

    def __call__(self, point: int) -> int:
        return self.img[point - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, n: int) -> Permutation:
        base = self if n >= 0 else inverse(self)
        n = abs(n)
        result = Permutation.identity(self.degree)
        while n:
            if n & 1:
                result = compose(result, base)
            base = compose(base, base)
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.img == other.img

    def __lt__(self, other: Permutation) -> bool:
        return self.img < other.img

    def __hash__(self):
        return self._hash

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.img[start] == start:
                continue
            c = [start]
            seen.add(start)
            j = self.img[start]
            while j != start:
                c.append(j)
                seen.add(j)
                j = self.img[j]
            out.append(tuple(x + 1 for x in c))
        return out

    def order(self) -> int:
        return element_order(self)

    def __str__(self):
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)

    def __repr__(self):
        return f"Permutation.from_cycles({str(self)!r}, {self.degree})"


_CYCLE_RE = re.compile(r"\(\s*(\d+(?:[\s,]+\d+)*)?\s*\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse ``"(1 2 3)(4,5)"`` into ``[[1, 2, 3], [4, 5]]``; ``"()"`` is the identity."""
    text = text.strip()
    pos = 0
    cycles = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(text, pos)
        if not m:
            raise GroupError(f"bad cycle notation at position {pos}: {text!r}")
        if m.group(1):
            cycles.append([int(x) for x in re.split(r"[\s,]+", m.group(1).strip())])
        pos = m.end()
    if not text:
        raise GroupError("empty cycle notation")
    return cycles


def _check_degree(a: Permutation, b: Permutation) -> None:
    if len(a.img) != len(b.img):
        raise DegreeMismatch(f"degree mismatch: {a.degree} vs {b.degree}")


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` first, then ``b``."""
    _check_degree(a, b)
    bi = b.img
    return Permutation._raw(tuple([bi[i] for i in a.img]))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * len(a.img)
    for i, j in enumerate(a.img):
        inv[j] = i
    return Permutation._raw(tuple(inv))


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """``[a, b] = a^-1 b^-1 a b``."""
    _check_degree(a, b)
    return compose(compose(inverse(a), inverse(b)), compose(a, b))


def conjugate(a: Permutation, b: Permutation) -> Permutation:
    """``a^b = b^-1 a b``."""
    _check_degree(a, b)
    return compose(compose(inverse(b), a), b)


def element_order(a: Permutation) -> int:
    return math.lcm(1, *(len(c) for c in a.cycles()))


def iterated_commutator(g: Permutation, x: Permutation, m: int) -> Permutation:
    """``[g, x, ..., x]`` with ``m`` copies of ``x``, left-nested."""
    if m < 0:
        raise GroupError("m must be non-negative")
    _check_degree(g, x)
    for _ in range(m):
        g = commutator(g, x)
    return g


class _Chain:
    """Base and strong generating set built by deterministic Schreier-Sims."""

    def __init__(self, degree: int, gens: Sequence[Permutation]):
        self.degree = degree
        self.base: list[int] = []
        self.strong: list[Permutation] = []
        self.trans: list[dict[int, Permutation]] = []
        gens = [g for g in gens if not g.is_identity()]
        for g in gens:
            if all(g.img[b] == b for b in self.base):
                self.base.append(next(i for i, x in enumerate(g.img) if x != i))
        self.strong = list(gens)
        self._build()

    def _level_gens(self, i: int) -> list[Permutation]:
        fixed = self.base[:i]
        return [s for s in self.strong if all(s.img[b] == b for b in fixed)]

    def _orbit(self, i: int) -> dict[int, Permutation]:
        beta = self.base[i]
        gens = self._level_gens(i)
        trans = {beta: Permutation.identity(self.degree)}
        queue = deque([beta])
        while queue:
            pt = queue.popleft()
            u = trans[pt]
            for s in gens:
                nxt = s.img[pt]
                if nxt not in trans:
                    trans[nxt] = compose(u, s)
                    queue.append(nxt)
        return trans

    def _strip(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        for i in range(start, len(self.base)):
            img = g.img[self.base[i]]
            t = self.trans[i]
            if img not in t:
                return g, i
            g = compose(g, inverse(t[img]))
        return g, len(self.base)

    def _build(self) -> None:
        self.trans = [self._orbit(i) for i in range(len(self.base))]
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            gens = self._level_gens(i)
            for beta, u in sorted(self.trans[i].items()):
                for s in gens:
                    y = compose(compose(u, s), inverse(self.trans[i][s.img[beta]]))
                    if y.is_identity():
                        continue
                    h, j = self._strip(y, i + 1)
                    if j < len(self.base) or not h.is_identity():
                        if j == len(self.base):
                            self.base.append(next(k for k, x in enumerate(h.img) if x != k))
                            self.trans.append({})
                        self.strong.append(h)
                        for level in range(i + 1, j + 1):
                            self.trans[level] = self._orbit(level)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def contains(self, g: Permutation) -> bool:
        h, j = self._strip(g, 0)
        return j == len(self.base) and h.is_identity()


class PermutationGroup:
    """A permutation group given by generators.

    Order and membership come from a stabilizer chain; ``elements()`` is an
    independent breadth-first enumeration. Both are built lazily under a lock,
    or eagerly with ``precompute()``.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), name: str | None = None):
        if degree < 1:
            raise GroupError("degree must be positive")
        gens = list(generators)
        for g in gens:
            if not isinstance(g, Permutation):
                raise GroupError(f"generator is not a Permutation: {g!r}")
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.name = name
        self._lock = threading.RLock()
        self._chain: _Chain | None = None
        self._elements: tuple[Permutation, ...] | None = None
        self._element_set: frozenset[Permutation] | None = None
        # derived data (series, cores, ...) cached by module structure
        self.memo: dict = {}
        # optional named elements, e.g. the generators of a presentation
        self.labels: dict[str, Permutation] = {}

    def __getstate__(self):
        # caches and the lock are rebuilt on demand
        return {"degree": self.degree, "generators": self.generators, "name": self.name, "labels": self.labels}

    def __setstate__(self, state):
        self.__init__(state["degree"], state["generators"], name=state["name"])
        self.labels = state["labels"]

    @property
    def chain(self) -> _Chain:
        with self._lock:
            if self._chain is None:
                self._chain = _Chain(self.degree, self.generators)
            return self._chain

    def order(self) -> int:
        return self.chain.order()

    def __len__(self):
        return self.order()

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, a: Permutation) -> bool:
        if a.degree != self.degree:
            raise DegreeMismatch(f"degree mismatch: {a.degree} vs {self.degree}")
        if self._element_set is not None:
            return a in self._element_set
        return self.chain.contains(a)

    def __contains__(self, a: Permutation) -> bool:
        return self.contains(a)

    def elements(self) -> tuple[Permutation, ...]:
        """All members, sorted lexicographically by image sequence."""
        with self._lock:
            if self._elements is None:
                self._elements = tuple(sorted(self._enumerate()))
                self._element_set = frozenset(self._elements)
            return self._elements

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements())

    def _enumerate(self) -> list[Permutation]:
        cap = limits.enum_cap
        if self._chain is not None and self._chain.order() > cap:
            raise CapExceeded(f"group order {self._chain.order()} exceeds enumeration cap {cap}")
        e = self.identity
        seen = {e}
        queue = deque([e])
        gens = [g for g in self.generators if not g.is_identity()]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"group order exceeds enumeration cap {cap}")
                    queue.append(y)
        return list(seen)

    def precompute(self) -> PermutationGroup:
        self.chain
        self.elements()
        return self

    def is_subgroup_of(self, other: PermutationGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, PermutationGroup):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.order() == other.order()
            and self.is_subgroup_of(other)
        )

    def __hash__(self):
        return hash((self.degree, self.order()))

    def __repr__(self):
        label = self.name or "group"
        return f"<PermutationGroup {label} degree={self.degree} gens={len(self.generators)}>"


def group_from_generators(degree: int, gens: Iterable[Permutation], name: str | None = None) -> PermutationGroup:
    return PermutationGroup(degree, gens, name=name)


def group_order(G: PermutationGroup) -> int:
    return G.order()


def contains(G: PermutationGroup, a: Permutation) -> bool:
    return G.contains(a)


def elements(G: PermutationGroup) -> tuple[Permutation, ...]:
    return G.elements()
