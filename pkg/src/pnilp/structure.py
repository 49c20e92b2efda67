"""Subgroup-level computations: closures, series, Sylow subgroups, cores,
Fitting subgroups, quotients and the p-nilpotency test.

Everything here works by closure and by filtering the element list, which is
fine for the desk-scale groups this package targets.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .perm import (
    GroupError,
    Permutation,
    PermutationGroup,
    commutator,
    compose,
    conjugate,
    element_order,
    inverse,
)

__all__ = [
    "SubgroupRef",
    "SeriesResult",
    "Predicates",
    "Quotient",
    "is_prime",
    "prime_divisors",
    "p_part",
    "is_p_power",
    "generate",
    "subgroup_generated",
    "normal_closure",
    "commutator_subgroup",
    "lower_central_term",
    "lower_central_series",
    "derived_term",
    "derived_series",
    "sylow_subgroup",
    "p_core",
    "p_prime_core",
    "fitting",
    "p_fitting",
    "is_p_nilpotent",
    "is_p_nilpotent_by_core",
    "predicates",
    "is_normal",
    "is_simple",
    "quotient_group",
    "abelian_invariants",
    "centralizer",
    "normalizer",
    "center",
    "intersection",
    "conjugacy_classes",
    "normal_subgroups",
    "subgroups_of_p_group",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


def _ilog(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")


@dataclass(frozen=True, eq=False)
class SubgroupRef:
    """A subgroup ``group`` of ``parent``."""

    parent: PermutationGroup
    group: PermutationGroup

    def order(self) -> int:
        return self.group.order()

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self.group.generators

    def contains(self, a: Permutation) -> bool:
        return self.group.contains(a)

    def __contains__(self, a: Permutation) -> bool:
        return self.group.contains(a)

    def elements(self) -> tuple[Permutation, ...]:
        return self.group.elements()

    def __eq__(self, other):
        if isinstance(other, SubgroupRef):
            return self.group == other.group
        if isinstance(other, PermutationGroup):
            return self.group == other
        return NotImplemented

    def __hash__(self):
        return hash(self.group)

    def to_json(self) -> dict:
        return {
            "name": self.group.name,
            "parent": self.parent.name,
            "degree": self.group.degree,
            "order": self.order(),
            "generators": [list(g.images) for g in self.group.generators],
        }


@dataclass(frozen=True)
class SeriesResult:
    terms: tuple[SubgroupRef, ...]
    kind: str  # "lower_central" or "derived"

    def orders(self) -> list[int]:
        return [t.order() for t in self.terms]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "orders": self.orders(),
            "generators": [[list(g.images) for g in t.generators] for t in self.terms],
        }


def _memo(G: PermutationGroup) -> dict:
    return G.memo


def generate(degree: int, S: Iterable[Permutation], name: str | None = None) -> PermutationGroup:
    """Group generated by ``S``, keeping only generators that enlarge it.

    ``S`` is scanned in lexicographic order so the generator list is
    reproducible.
    """
    gens: list[Permutation] = []
    H = PermutationGroup(degree, (), name=name)
    for s in sorted(set(S)):
        if s.is_identity() or H.contains(s):
            continue
        gens.append(s)
        H = PermutationGroup(degree, gens, name=name)
    return H


def _sub(G: PermutationGroup, H: PermutationGroup) -> SubgroupRef:
    return SubgroupRef(G, H)


def subgroup_generated(G: PermutationGroup, S: Iterable[Permutation]) -> SubgroupRef:
    S = list(S)
    for s in S:
        if not G.contains(s):
            raise GroupError(f"{s} is not in {G.name or 'the group'}")
    return _sub(G, generate(G.degree, S))


def _normal_closure_group(G: PermutationGroup, S: Iterable[Permutation]) -> PermutationGroup:
    N = generate(G.degree, S)
    gens = list(N.generators)
    queue = deque(gens)
    while queue:
        n = queue.popleft()
        for g in G.generators:
            c = conjugate(n, g)
            if not N.contains(c):
                gens.append(c)
                N = PermutationGroup(G.degree, gens)
                queue.append(c)
    return N


def normal_closure(G: PermutationGroup, S: Iterable[Permutation]) -> SubgroupRef:
    S = list(S)
    for s in S:
        if not G.contains(s):
            raise GroupError(f"{s} is not in {G.name or 'the group'}")
    return _sub(G, _normal_closure_group(G, S))


def _element_closure(G: PermutationGroup, x: Permutation) -> PermutationGroup:
    """Normal closure of one element, memoized per conjugacy class."""
    cache = _memo(G).setdefault("element_closure", {})
    if x not in cache:
        N = _normal_closure_group(G, [x])
        for y in _class_of(G, x):
            cache[y] = N
    return cache[x]


def commutator_subgroup(A: SubgroupRef, B: SubgroupRef) -> SubgroupRef:
    """``[A, B]``: normal closure in ``<A, B>`` of the generator commutators."""
    if A.parent is not B.parent and A.parent != B.parent:
        raise GroupError("commutator_subgroup needs subgroups of the same parent")
    degree = A.parent.degree
    AB = PermutationGroup(degree, A.generators + B.generators)
    comms = [commutator(a, b) for a in A.generators for b in B.generators]
    return _sub(A.parent, _normal_closure_group(AB, comms))


def _whole(G: PermutationGroup) -> SubgroupRef:
    return SubgroupRef(G, G)


def lower_central_term(G: PermutationGroup, k: int) -> SubgroupRef:
    if k < 1:
        raise GroupError("k must be >= 1")
    series = lower_central_series(G).terms
    return series[min(k, len(series)) - 1]


def lower_central_series(G: PermutationGroup) -> SeriesResult:
    """``G = gamma_1 >= gamma_2 >= ...`` up to and including the first repeat."""
    memo = _memo(G)
    if "lcs" not in memo:
        terms = [_whole(G)]
        while True:
            nxt = commutator_subgroup(terms[-1], _whole(G))
            terms.append(nxt)
            if nxt.order() == terms[-2].order():
                break
        memo["lcs"] = SeriesResult(tuple(terms), "lower_central")
    return memo["lcs"]


def derived_term(G: PermutationGroup, k: int) -> SubgroupRef:
    if k < 0:
        raise GroupError("k must be >= 0")
    series = derived_series(G).terms
    return series[min(k, len(series) - 1)]


def derived_series(G: PermutationGroup) -> SeriesResult:
    memo = _memo(G)
    if "ds" not in memo:
        terms = [_whole(G)]
        while True:
            nxt = commutator_subgroup(terms[-1], terms[-1])
            terms.append(nxt)
            if nxt.order() == terms[-2].order():
                break
        memo["ds"] = SeriesResult(tuple(terms), "derived")
    return memo["ds"]


def centralizer(G: PermutationGroup, S: Iterable[Permutation]) -> SubgroupRef:
    S = list(S)
    return _sub(G, generate(G.degree, (g for g in G.elements() if all(compose(g, s) == compose(s, g) for s in S))))


def normalizer(G: PermutationGroup, H: PermutationGroup | SubgroupRef) -> SubgroupRef:
    H = H.group if isinstance(H, SubgroupRef) else H
    hg = H.generators
    return _sub(G, generate(G.degree, (g for g in G.elements() if all(H.contains(conjugate(h, g)) for h in hg))))


def center(G: PermutationGroup) -> SubgroupRef:
    return centralizer(G, G.generators)


def intersection(G: PermutationGroup, A: PermutationGroup | SubgroupRef, B: PermutationGroup | SubgroupRef) -> SubgroupRef:
    A = A.group if isinstance(A, SubgroupRef) else A
    B = B.group if isinstance(B, SubgroupRef) else B
    return _sub(G, generate(G.degree, (a for a in A.elements() if B.contains(a))))


def is_normal(G: PermutationGroup, N: PermutationGroup | SubgroupRef) -> bool:
    N = N.group if isinstance(N, SubgroupRef) else N
    return all(N.contains(conjugate(n, g)) for n in N.generators for g in G.generators)


def _class_of(G: PermutationGroup, x: Permutation) -> frozenset[Permutation]:
    cls = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in G.generators:
            z = conjugate(y, g)
            if z not in cls:
                cls.add(z)
                queue.append(z)
    return frozenset(cls)


def conjugacy_classes(G: PermutationGroup) -> list[frozenset[Permutation]]:
    """Classes ordered by their lexicographically least member."""
    memo = _memo(G)
    if "classes" not in memo:
        seen: set[Permutation] = set()
        classes = []
        for x in G.elements():
            if x in seen:
                continue
            c = _class_of(G, x)
            seen |= c
            classes.append(c)
        memo["classes"] = classes
    return memo["classes"]


def _core_by(G: PermutationGroup, good: Callable[[int], bool], key: str) -> SubgroupRef:
    memo = _memo(G)
    if key not in memo:
        picked = []
        for cls in conjugacy_classes(G):
            x = min(cls)
            if good(_element_closure(G, x).order()):
                picked.extend(cls)
        memo[key] = _sub(G, generate(G.degree, picked))
    return memo[key]


def p_core(G: PermutationGroup, p: int) -> SubgroupRef:
    """``O_p(G)``, the largest normal p-subgroup."""
    _check_prime(p)
    return _core_by(G, lambda n: is_p_power(n, p), f"O_{p}")


def p_prime_core(G: PermutationGroup, p: int) -> SubgroupRef:
    """``O_p'(G)``, the largest normal subgroup of order prime to p."""
    _check_prime(p)
    return _core_by(G, lambda n: n % p != 0, f"O_{p}'")


def fitting(G: PermutationGroup) -> SubgroupRef:
    memo = _memo(G)
    if "F" not in memo:
        gens = []
        for q in prime_divisors(G.order()):
            gens.extend(p_core(G, q).generators)
        memo["F"] = _sub(G, generate(G.degree, gens))
    return memo["F"]


def p_fitting(G: PermutationGroup, p: int) -> SubgroupRef:
    """``Fit_p(G)``, the largest normal p-nilpotent subgroup."""
    _check_prime(p)
    memo = _memo(G)
    key = f"Fit_{p}"
    if key not in memo:
        picked = []
        for cls in conjugacy_classes(G):
            if is_p_nilpotent(_element_closure(G, min(cls)), p):
                picked.extend(cls)
        memo[key] = _sub(G, generate(G.degree, picked))
    return memo[key]


def is_p_nilpotent(G: PermutationGroup | SubgroupRef, p: int) -> bool:
    """True iff ``G`` has a normal p-complement.

    The subgroup generated by all p'-elements is normal with a p-group
    quotient, so it is the normal p-complement exactly when its order is
    prime to p.
    """
    _check_prime(p)
    G = G.group if isinstance(G, SubgroupRef) else G
    memo = _memo(G)
    key = f"pnil_{p}"
    if key not in memo:
        if G.order() % p:
            memo[key] = True
        else:
            H = generate(G.degree, (x for x in G.elements() if element_order(x) % p))
            memo[key] = H.order() % p != 0
    return memo[key]


def is_p_nilpotent_by_core(G: PermutationGroup | SubgroupRef, p: int) -> bool:
    """Independent route: ``|O_p'(G)|`` equals the p'-part of ``|G|``."""
    G = G.group if isinstance(G, SubgroupRef) else G
    n = G.order()
    return p_prime_core(G, p).order() == n // p_part(n, p)


@dataclass(frozen=True)
class Predicates:
    is_abelian: bool
    is_nilpotent: bool
    is_soluble: bool
    is_metanilpotent: bool
    is_perfect: bool
    is_simple: bool
    is_quasisimple: bool
    prime: int | None  # set when G is a nontrivial p-group

    def is_p_group(self, p: int) -> bool:
        return self.prime == p

    def tags(self) -> set[str]:
        names = ("soluble", "nilpotent", "simple", "quasisimple", "metanilpotent")
        return {n for n in names if getattr(self, "is_" + n)}


def is_simple(G: PermutationGroup) -> bool:
    n = G.order()
    if n == 1:
        return False
    return all(_element_closure(G, min(c)).order() == n for c in conjugacy_classes(G) if not min(c).is_identity())


def predicates(G: PermutationGroup) -> Predicates:
    memo = _memo(G)
    if "predicates" in memo:
        return memo["predicates"]
    n = G.order()
    gens = G.generators
    abelian = all(compose(a, b) == compose(b, a) for a in gens for b in gens)
    lcs = lower_central_series(G).terms
    ds = derived_series(G).terms
    nilpotent = lcs[-1].order() == 1
    soluble = ds[-1].order() == 1
    residual = lcs[-1].group
    meta = residual.is_subgroup_of(fitting(G).group)
    perfect = n > 1 and ds[1].order() == n
    simple = is_simple(G)
    quasi = False
    if perfect:
        Z = center(G)
        quasi = is_simple(quotient_group(G, Z).group)
    primes = prime_divisors(n)
    result = Predicates(
        is_abelian=abelian,
        is_nilpotent=nilpotent,
        is_soluble=soluble,
        is_metanilpotent=meta,
        is_perfect=perfect,
        is_simple=simple,
        is_quasisimple=quasi,
        prime=primes[0] if len(primes) == 1 else None,
    )
    memo["predicates"] = result
    return result


@dataclass(frozen=True)
class Quotient:
    """``G/N`` acting on the right cosets of ``N``."""

    group: PermutationGroup
    cosets: tuple[frozenset[Permutation], ...]
    _index: dict = field(repr=False)

    def project(self, g: Permutation) -> Permutation:
        idx = self._index
        img = tuple(idx[compose(min(c), g)] for c in self.cosets)
        return Permutation._raw(img)


def quotient_group(G: PermutationGroup, N: PermutationGroup | SubgroupRef) -> Quotient:
    N = N.group if isinstance(N, SubgroupRef) else N
    if not N.is_subgroup_of(G):
        raise GroupError("N is not a subgroup of G")
    if not is_normal(G, N):
        raise GroupError("N is not normal in G")
    members = N.elements()
    seen: set[Permutation] = set()
    cosets = []
    for x in G.elements():
        if x in seen:
            continue
        c = frozenset(compose(n, x) for n in members)
        seen |= c
        cosets.append(c)
    index = {y: i for i, c in enumerate(cosets) for y in c}
    gens = []
    for g in G.generators:
        gens.append(Permutation._raw(tuple(index[compose(min(c), g)] for c in cosets)))
    name = f"{G.name}/N" if G.name else None
    Q = PermutationGroup(len(cosets), gens, name=name)
    return Quotient(Q, tuple(cosets), index)


def abelian_invariants(A: PermutationGroup | SubgroupRef) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of an abelian group, ones dropped.

    The p-primary parts are read off from how many elements each ``p^i``
    annihilates.
    """
    A = A.group if isinstance(A, SubgroupRef) else A
    gens = A.generators
    if any(compose(a, b) != compose(b, a) for a in gens for b in gens):
        raise GroupError("abelian_invariants needs an abelian group")
    orders = [element_order(x) for x in A.elements()]
    primary: dict[int, list[int]] = {}
    for p in prime_divisors(A.order()):
        full = _ilog(p_part(A.order(), p), p)
        # logs[i] = log_p #{x : x^(p^i) = 1}
        logs = [0]
        while logs[-1] < full:
            bound = p ** len(logs)
            logs.append(_ilog(sum(1 for o in orders if bound % o == 0), p))
        # cyclic factors of exponent >= i
        at_least = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        exps = []
        for i in range(len(at_least) - 1):
            exps.extend([i + 1] * (at_least[i] - at_least[i + 1]))
        primary[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = [1] * width
    for p, exps in primary.items():
        for j, e in enumerate(exps):
            factors[width - 1 - j] *= p**e
    return factors


def sylow_subgroup(G: PermutationGroup, p: int) -> SubgroupRef:
    """A Sylow p-subgroup, grown inside successive normalizers."""
    _check_prime(p)
    memo = _memo(G)
    key = f"Syl_{p}"
    if key in memo:
        return memo[key]
    target = p_part(G.order(), p)
    P = PermutationGroup(G.degree, ())
    while P.order() < target:
        N = normalizer(G, P).group
        x = next(
            y for y in N.elements()
            if is_p_power(element_order(y), p) and not P.contains(y)
        )
        P = PermutationGroup(G.degree, P.generators + (x,))
    memo[key] = _sub(G, P)
    return memo[key]


def normal_subgroups(G: PermutationGroup) -> list[SubgroupRef]:
    """Every normal subgroup, as joins of normal closures of single elements."""
    memo = _memo(G)
    if "normal" not in memo:
        closures = []
        keys = set()
        for cls in conjugacy_classes(G):
            N = _element_closure(G, min(cls))
            k = frozenset(N.elements())
            if k not in keys:
                keys.add(k)
                closures.append(N)
        found = {frozenset([G.identity]): PermutationGroup(G.degree, ())}
        frontier = list(found.values())
        while frontier:
            nxt = []
            for H in frontier:
                for N in closures:
                    if N.is_subgroup_of(H):
                        continue
                    J = generate(G.degree, H.generators + N.generators)
                    k = frozenset(J.elements())
                    if k not in found:
                        found[k] = J
                        nxt.append(J)
            frontier = nxt
        memo["normal"] = [_sub(G, H) for H in sorted(found.values(), key=lambda H: (H.order(), sorted(H.elements())))]
    return memo["normal"]


def subgroups_of_p_group(P: PermutationGroup | SubgroupRef, cap: int = 256) -> list[PermutationGroup]:
    """All subgroups of a (small) group, found by joining cyclic subgroups."""
    P = P.group if isinstance(P, SubgroupRef) else P
    memo = _memo(P)
    if "subgroups" in memo:
        return memo["subgroups"]
    elems = P.elements()
    found: dict[frozenset, PermutationGroup] = {frozenset([P.identity]): PermutationGroup(P.degree, ())}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if H.contains(g):
                    continue
                J = PermutationGroup(P.degree, H.generators + (g,))
                k = frozenset(J.elements())
                if k not in found:
                    found[k] = J
                    if len(found) > cap:
                        raise GroupError(f"more than {cap} subgroups")
                    nxt.append(J)
        frontier = nxt
    result = sorted(found.values(), key=lambda H: (H.order(), sorted(H.elements())))
    memo["subgroups"] = result
    return result
