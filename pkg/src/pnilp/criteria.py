"""Property P(w, p) and the checks built on it.

A group satisfies P(w, p) when ``p`` divides ``o(xy)`` for every w-value
``x`` of order prime to ``p`` and every non-trivial w-value ``y`` of order
divisible by ``p``. Each check returns a ``CheckReport``; a report that is
neither skipped nor holding always carries a witness that can be re-checked.
"""

from __future__ import annotations

import time
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any

from .catalog import alternating, exponent
from .perm import (
    GroupError,
    Permutation,
    PermutationGroup,
    commutator,
    compose,
    element_order,
    iterated_commutator,
)
from .structure import (
    center,
    centralizer,
    conjugacy_classes,
    derived_series,
    derived_term,
    fitting,
    generate,
    intersection,
    is_p_nilpotent,
    is_p_nilpotent_by_core,
    is_p_power,
    is_prime,
    lower_central_series,
    lower_central_term,
    normal_subgroups,
    normalizer,
    p_core,
    p_fitting,
    p_prime_core,
    predicates,
    prime_divisors,
    quotient_group,
    subgroups_of_p_group,
    sylow_subgroup,
)
from .words import (
    ValueSet,
    Word,
    delta_word,
    gamma_word,
    power_word,
    verbal_subgroup,
    word_name,
    word_values,
)

__all__ = [
    "CheckReport",
    "LEMMAS",
    "satisfies_P",
    "satisfies_P_on_set",
    "find_P_violation",
    "verify_P_witness",
    "check_corollary_A",
    "check_theorem_gamma",
    "check_theorem_delta",
    "check_word_equivalence",
    "frobenius_p_nilpotent",
    "lemma_check",
    "alt5_value_set_readings",
    "power_word_counterexample",
]

FROBENIUS_SUBGROUP_BOUND = 256


@dataclass
class CheckReport:
    check: str
    group: str
    p: int | None
    holds: bool
    word: str | None = None
    k: int | None = None
    skipped: bool = False
    witness: dict[str, Any] | None = None
    mismatch: bool = False
    info: dict[str, Any] = field(default_factory=dict)
    ms: float = 0.0

    def sort_key(self) -> tuple:
        return (self.group, self.check, self.word or "", self.k or 0, self.p or 0)

    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "group": self.group,
            "word": self.word,
            "k": self.k,
            "p": self.p,
            "holds": self.holds,
            "skipped": self.skipped,
            "mismatch": self.mismatch,
            "witness": _jsonable(self.witness),
            "info": _jsonable(self.info),
            "ms": round(self.ms, 3),
        }


def _jsonable(obj):
    if isinstance(obj, Permutation):
        return str(obj)
    if isinstance(obj, PermutationGroup):
        return {"order": obj.order(), "generators": [str(g) for g in obj.generators]}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0


def _name(G: PermutationGroup) -> str:
    return G.name or f"degree-{G.degree} group"


def _word_k(w: Word | None) -> int | None:
    if w is None:
        return None
    name = word_name(w)
    if name.startswith(("gamma:", "delta:")):
        return int(name.split(":")[1])
    return None


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")


def find_P_violation(values: Iterable[Permutation], p: int) -> tuple[Permutation, Permutation, int] | None:
    """First ``(x, y, o(xy))`` breaking P, scanning x then y in lexicographic order."""
    vals = sorted(values)
    orders = {v: element_order(v) for v in vals}
    xs = [x for x in vals if orders[x] % p != 0]
    # identity x is allowed on purpose: o(1*y) = o(y) is divisible by p
    ys = [y for y in vals if not y.is_identity() and orders[y] % p == 0]
    for x in xs:
        for y in ys:
            o = element_order(compose(x, y))
            if o % p:
                return x, y, o
    return None


def verify_P_witness(witness: dict, p: int, values: Iterable[Permutation] | None = None) -> bool:
    """True when ``witness`` really breaks P (recomputed from scratch)."""
    x, y = witness["x"], witness["y"]
    if values is not None:
        vs = set(values)
        if x not in vs or y not in vs:
            return False
    o = element_order(compose(x, y))
    return (
        element_order(x) % p != 0
        and not y.is_identity()
        and element_order(y) % p == 0
        and o % p != 0
        and o == witness["product_order"]
    )


def _P_report(check: str, G: PermutationGroup, values, p: int, word: str | None, k: int | None) -> CheckReport:
    with _Timer() as t:
        v = find_P_violation(values, p)
    witness = None if v is None else {"x": v[0], "y": v[1], "product_order": v[2]}
    return CheckReport(check, _name(G), p, v is None, word=word, k=k, witness=witness, ms=t.ms)


def satisfies_P(G: PermutationGroup, w: Word, p: int) -> CheckReport:
    _require_prime(p)
    with _Timer() as t:
        values = word_values(G, w).values
    report = _P_report("P", G, values, p, word_name(w), _word_k(w))
    report.ms += t.ms
    return report


def satisfies_P_on_set(V: ValueSet, p: int) -> CheckReport:
    _require_prime(p)
    return _P_report("P_on_set", V.group, V.values, p, V.describe(), _word_k(V.word))


def check_corollary_A(G: PermutationGroup, p: int) -> CheckReport:
    """All-pairs order condition over ``G``, compared with ``is_p_nilpotent``."""
    _require_prime(p)
    report = _P_report("corollary_a", G, G.elements(), p, None, None)
    with _Timer() as t:
        pn = is_p_nilpotent(G, p)
    report.info = {"condition": report.holds, "p_nilpotent": pn}
    report.mismatch = report.holds != pn
    report.ms += t.ms
    return report


def _equivalence(check: str, G, w: Word, p: int, subgroup, expect_equivalent: bool = True) -> CheckReport:
    with _Timer() as t:
        P = satisfies_P(G, w, p)
        pn = is_p_nilpotent(subgroup, p)
    holds = P.holds == pn
    info = {"P": P.holds, "p_nilpotent": pn, "subgroup_order": subgroup.order()}
    if not expect_equivalent:
        info["expected"] = "non_equivalence"
    witness = None
    if not holds:
        witness = {"P": P.holds, "p_nilpotent": pn, "violation": P.witness}
    return CheckReport(
        check, _name(G), p, holds, word=word_name(w), k=_word_k(w), witness=witness,
        mismatch=holds != expect_equivalent, info=info, ms=t.ms,
    )


def check_theorem_gamma(G: PermutationGroup, k: int, p: int) -> CheckReport:
    """``gamma_k(G)`` p-nilpotent iff ``G`` satisfies P(gamma_k, p)."""
    _require_prime(p)
    if k < 1:
        raise GroupError("k must be >= 1")
    return _equivalence("theorem_gamma", G, gamma_word(k), p, lower_central_term(G, k))


def check_theorem_delta(G: PermutationGroup, k: int, p: int) -> CheckReport:
    """For soluble ``G``: ``G^(k)`` p-nilpotent iff ``G`` satisfies P(delta_k, p)."""
    _require_prime(p)
    if k < 2:
        raise GroupError("k must be >= 2")
    if not predicates(G).is_soluble:
        return _skip("theorem_delta", G, p, "not soluble", word=f"delta:{k}", k=k)
    return _equivalence("theorem_delta", G, delta_word(k), p, derived_term(G, k))


def check_word_equivalence(G: PermutationGroup, w: Word, p: int, expect_equivalent: bool = True) -> CheckReport:
    """P(w, p) against p-nilpotency of ``w(G)``, for any word."""
    _require_prime(p)
    return _equivalence("word_equivalence", G, w, p, verbal_subgroup(G, w), expect_equivalent)


def frobenius_p_nilpotent(G: PermutationGroup, p: int) -> CheckReport:
    """``N_G(H)/C_G(H)`` is a p-group for every subgroup ``H`` of one Sylow p-subgroup."""
    _require_prime(p)
    with _Timer() as t:
        P = sylow_subgroup(G, p)
        subs = subgroups_of_p_group(P, cap=FROBENIUS_SUBGROUP_BOUND)
        witness = None
        for H in subs:
            n = normalizer(G, H).order()
            c = centralizer(G, H.generators).order()
            if not is_p_power(n // c, p):
                witness = {"H": H, "N_order": n, "C_order": c, "N_over_C": n // c}
                break
        pn = is_p_nilpotent(G, p)
    holds = witness is None
    return CheckReport(
        "frobenius", _name(G), p, holds, witness=witness, mismatch=holds != pn,
        info={"p_nilpotent": pn, "p_nilpotent_by_core": is_p_nilpotent_by_core(G, p), "subgroups": len(subs)},
        ms=t.ms,
    )


def _skip(check: str, G, p, reason: str, word=None, k=None) -> CheckReport:
    return CheckReport(check, _name(G), p, False, word=word, k=k, skipped=True, info={"reason": reason})


# lemma checks ---------------------------------------------------------------


def _pprime_values(G, w, p) -> list[Permutation]:
    return [x for x in sorted(word_values(G, w).values) if element_order(x) % p and not x.is_identity()]


def _lemma_pprime_word(G, k, p, delta: bool) -> tuple[bool, dict | None, dict] | str:
    w = delta_word(k) if delta else gamma_word(k)
    if not delta and k < 2:
        return "needs k >= 2"
    if not satisfies_P(G, w, p).holds:
        return f"P({word_name(w)},{p}) fails"
    xs = _pprime_values(G, w, p)
    if not xs:
        return "vacuous: no non-trivial value of p'-order"
    m = 2 if delta else k - 1
    for x in xs:
        for g in G.elements():
            c = iterated_commutator(g, x, m)
            if element_order(c) % p == 0:
                return False, {"g": g, "x": x, "order": element_order(c)}, {}
    return True, None, {"values_checked": len(xs)}


def _lemma_p_subgroup(G, k, p, delta: bool):
    w = delta_word(k) if delta else gamma_word(k)
    if not satisfies_P(G, w, p).holds:
        return f"P({word_name(w)},{p}) fails"
    if G.order() % p:
        return "p does not divide |G|"
    xs = _pprime_values(G, w, p)
    tested = 0
    for P in subgroups_of_p_group(sylow_subgroup(G, p), cap=FROBENIUS_SUBGROUP_BOUND):
        if P.order() == 1:
            continue
        N = normalizer(G, P)
        for x in xs:
            if not N.contains(x):
                continue
            tested += 1
            for a in P.generators:
                if not commutator(a, x).is_identity():
                    return False, {"P": P, "x": x, "a": a}, {}
    if not tested:
        return "vacuous: no p'-value normalizes a non-trivial p-subgroup"
    return True, None, {"pairs_checked": tested}


def _lemma_inclusion(G, k, p):
    D = derived_term(G, k)
    L = lower_central_term(G, k + 1)
    bad = [g for g in D.generators if not L.contains(g)]
    if bad:
        return False, {"element": bad[0]}, {}
    return True, None, {"derived_order": D.order(), "gamma_order": L.order()}


def _lemma_gamma_primepower_gen(G, k, p):
    if k < 2:
        return "needs k >= 2"
    if not predicates(G).is_soluble:
        return "not soluble"
    vals = [v for v in word_values(G, gamma_word(k)).values if len(prime_divisors(element_order(v))) <= 1]
    H = generate(G.degree, vals)
    target = lower_central_term(G, k).group
    if H != target:
        return False, {"generated_order": H.order(), "gamma_order": target.order()}, {}
    return True, None, {"gamma_order": target.order(), "values_used": len(vals)}


def _lemma_gamma_qpower_gen(G, k, p):
    if not predicates(G).is_perfect:
        return "not perfect"
    if G.order() % p:
        return "p does not divide |G|"
    vals = []
    for v in word_values(G, gamma_word(k)).values:
        qs = prime_divisors(element_order(v))
        if len(qs) <= 1 and p not in qs:
            vals.append(v)
    H = generate(G.degree, vals)
    if H.order() != G.order():
        return False, {"generated_order": H.order(), "group_order": G.order()}, {}
    return True, None, {"values_used": len(vals)}


def _lemma_delta_focal(G, k, q):
    if k < 1:
        return "needs i >= 1"
    if not predicates(G).is_soluble:
        return "not soluble"
    if q is None or G.order() % q:
        return "q does not divide |G|"
    Q = sylow_subgroup(G, q)
    target = intersection(G, Q, derived_term(G, k)).group
    vals = [v for v in word_values(G, delta_word(k)).values if Q.contains(v)]
    H = generate(G.degree, vals)
    if H != target:
        return False, {"generated_order": H.order(), "intersection_order": target.order()}, {}
    return True, None, {"intersection_order": target.order(), "values_used": len(vals)}


def _lemma_fitp_eq_op(G, k, p):
    if p_prime_core(G, p).order() != 1:
        return "O_p'(G) is not trivial"
    F = p_fitting(G, p).group
    O = p_core(G, p).group
    ok = F == O and is_p_power(F.order(), p)
    if not ok:
        return False, {"fit_p_order": F.order(), "o_p_order": O.order()}, {}
    return True, None, {"order": F.order()}


def _lemma_meta(G, k, p):
    if not predicates(G).is_metanilpotent:
        return "not metanilpotent"
    F = fitting(G).group
    Op = p_prime_core(F, p).group
    tested = 0
    for x in G.elements():
        if not is_p_power(element_order(x), p):
            continue
        if all(compose(a, x) == compose(x, a) for a in Op.generators):
            tested += 1
            if not F.contains(x):
                return False, {"x": x}, {}
    return True, None, {"elements_checked": tested}


def _sample_subgroups(G: PermutationGroup) -> list[PermutationGroup]:
    """Deterministic spread of proper subgroups: series terms, Sylows, centre,
    cyclic subgroups of class representatives and some 2-generated ones."""
    cands: list[PermutationGroup] = []
    cands += [t.group for t in lower_central_series(G).terms]
    cands += [t.group for t in derived_series(G).terms]
    cands += [sylow_subgroup(G, q).group for q in prime_divisors(G.order())]
    cands.append(center(G).group)
    reps = [min(c) for c in conjugacy_classes(G)]
    cands += [PermutationGroup(G.degree, [r]) for r in reps]
    for a in reps[1:4]:
        for b in reps[1:4]:
            for g in G.elements()[:3]:
                cands.append(PermutationGroup(G.degree, [a, compose(compose(g, b), g)]))
    out, seen = [], set()
    for H in cands:
        key = frozenset(H.elements())
        if H.order() < G.order() and key not in seen:
            seen.add(key)
            out.append(H)
    return out


def _lemma_subgroup_closure(G, w, p):
    if not satisfies_P(G, w, p).holds:
        return f"P({word_name(w)},{p}) fails"
    subs = _sample_subgroups(G)
    for H in subs:
        v = find_P_violation(word_values(H, w).values, p)
        if v is not None:
            return False, {"H": H, "x": v[0], "y": v[1], "product_order": v[2]}, {}
    return True, None, {"subgroups_checked": len(subs)}


def _lemma_quotient_closure(G, w, p):
    if not satisfies_P(G, w, p).holds:
        return f"P({word_name(w)},{p}) fails"
    Ns = [N.group for N in normal_subgroups(G) if N.order() > 1 and N.order() % p]
    if not Ns:
        return "no non-trivial normal p'-subgroup"
    for N in Ns:
        Q = quotient_group(G, N).group
        v = find_P_violation(word_values(Q, w).values, p)
        if v is not None:
            return False, {"N": N, "x": v[0], "y": v[1], "product_order": v[2]}, {}
    return True, None, {"quotients_checked": len(Ns)}


def _lemma_g2_gk(G, k, p):
    if k < 2:
        return "needs k >= 2"
    if not predicates(G).is_quasisimple:
        return "not quasisimple"
    a = word_values(G, gamma_word(2)).values
    b = word_values(G, gamma_word(k)).values
    if a != b:
        diff = sorted(a ^ b)[0]
        return False, {"element": diff, "in_gamma_2": diff in a}, {}
    return True, None, {"values": len(a)}


LEMMAS = (
    "pprime_word",
    "p_subgroup_gamma",
    "pprime_word_delta",
    "p_subgroup_delta",
    "inclusion",
    "gamma_primepower_gen",
    "gamma_qpower_gen",
    "delta_focal",
    "fitp_eq_op",
    "meta",
    "subgroup_closure",
    "quotient_closure",
    "g2_gk",
)


def lemma_check(
    name: str,
    G: PermutationGroup,
    k: int | None = None,
    p: int | None = None,
    q: int | None = None,
    word: Word | None = None,
) -> CheckReport:
    """Run one lemma as an executable check.

    Hypotheses that fail give a skipped report, never a holding one.
    """
    if name not in LEMMAS:
        raise GroupError(f"unknown lemma {name!r}")
    for v in (p, q):
        if v is not None:
            _require_prime(v)
    k = 2 if k is None else k
    word_label = None
    with _Timer() as t:
        if name == "pprime_word":
            out = _lemma_pprime_word(G, k, p, delta=False)
        elif name == "pprime_word_delta":
            out = _lemma_pprime_word(G, k, p, delta=True)
        elif name == "p_subgroup_gamma":
            out = _lemma_p_subgroup(G, k, p, delta=False)
        elif name == "p_subgroup_delta":
            out = _lemma_p_subgroup(G, k, p, delta=True)
        elif name == "inclusion":
            out = _lemma_inclusion(G, k, p)
        elif name == "gamma_primepower_gen":
            out = _lemma_gamma_primepower_gen(G, k, p)
        elif name == "gamma_qpower_gen":
            out = _lemma_gamma_qpower_gen(G, k, p)
        elif name == "delta_focal":
            out = _lemma_delta_focal(G, k, q)
        elif name == "fitp_eq_op":
            out = _lemma_fitp_eq_op(G, k, p)
        elif name == "meta":
            out = _lemma_meta(G, k, p)
        elif name in ("subgroup_closure", "quotient_closure"):
            w = word if word is not None else gamma_word(k)
            word_label = word_name(w)
            fn = _lemma_subgroup_closure if name == "subgroup_closure" else _lemma_quotient_closure
            out = fn(G, w, p)
        else:
            out = _lemma_g2_gk(G, k, p)
    check = f"lemma:{name}"
    prime = q if name == "delta_focal" else p
    if isinstance(out, str):
        report = _skip(check, G, prime, out, word=word_label, k=k)
    else:
        holds, witness, info = out
        # a lemma is a theorem: any failure is unexpected
        report = CheckReport(
            check, _name(G), prime, holds, word=word_label, k=k, witness=witness, mismatch=not holds, info=info
        )
    report.ms = t.ms
    return report


# counterexamples ------------------------------------------------------------


def alt5_value_set_readings() -> dict[str, ValueSet]:
    """The two readings of "identity plus all products of two transpositions"
    inside Alt(5): with the transpositions merely distinct (3-cycles appear)
    or also disjoint (double transpositions only)."""
    G = alternating(5)
    G.name = "A5"
    ts = [Permutation.from_cycles([[a, b]], 5) for a in range(1, 6) for b in range(a + 1, 6)]
    distinct = {compose(s, t) for s in ts for t in ts if s != t}
    disjoint = {compose(s, t) for s in ts for t in ts if not set(s.cycles()[0]) & set(t.cycles()[0])}
    e = G.identity
    return {
        "distinct": ValueSet(G, None, frozenset(distinct | {e}), tag="external set (distinct transpositions)"),
        "disjoint": ValueSet(G, None, frozenset(disjoint | {e}), tag="external set (disjoint transpositions)"),
    }


def power_word_counterexample(G: PermutationGroup | None = None, primes: Iterable[int] | None = None) -> list[CheckReport]:
    """P(x^n, p) on a non-abelian simple group for each n with exponent/n prime.

    Each report is expected to show P holding while ``w(G) = G`` is not
    p-nilpotent.
    """
    if G is None:
        G = alternating(5)
        G.name = "A5"
    e = exponent(G)
    ns = sorted((e // q for q in prime_divisors(e)), reverse=True)
    primes = list(primes) if primes is not None else prime_divisors(G.order())
    reports = []
    for n in ns:
        w = power_word(n)
        for p in primes:
            r = check_word_equivalence(G, w, p, expect_equivalent=False)
            r.check = "counterexample_power"
            r.info["exponent"] = e
            r.info["n"] = n
            r.info["verbal_is_whole_group"] = verbal_subgroup(G, w).order() == G.order()
            reports.append(r)
    return reports
