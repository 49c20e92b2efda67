import itertools

import pytest
from conftest import catalog_group, catalog_groups
from hypothesis import given, settings
from hypothesis import strategies as st

from pnilp.catalog import alternating, cyclic, dihedral, symmetric
from pnilp.perm import CapExceeded, GroupError, Permutation, commutator, limits
from pnilp.structure import derived_term, lower_central_term
from pnilp.words import (
    Bracket,
    Power,
    Product,
    Var,
    WordSyntaxError,
    arity,
    bracket,
    brute_force_values,
    delta_word,
    evaluate_word,
    exponent_sums,
    gamma_word,
    invert,
    is_commutator_word,
    is_multilinear,
    parse_word,
    power_word,
    product,
    to_text,
    verbal_subgroup,
    word_name,
    word_values,
)


def P(text, n):
    return Permutation.from_cycles(text, n)


def test_parse_examples():
    assert parse_word("[x1,x2]") == Bracket(Var(1), Var(2))
    assert arity(parse_word("[x1,x2]")) == 2
    assert parse_word("[x1,x2,x3]") == gamma_word(3)
    w = parse_word("x1^15")
    assert w == power_word(15) and arity(w) == 1
    assert parse_word("gamma:4") == gamma_word(4)
    assert parse_word("delta:2") == parse_word("[[x1,x2],[x3,x4]]")
    assert parse_word("pow:6") == Power(Var(1), 6)
    assert parse_word("(x1 x2)^-1") == invert(product(Var(1), Var(2)))
    assert parse_word("x1") == Var(1)


@pytest.mark.parametrize("text", ["", "x0", "[x1]", "[x1,x2", "x1^", "(x1", "x1)", "y1", "x1 ^ x2"])
def test_parse_errors(text):
    with pytest.raises(WordSyntaxError) as exc:
        parse_word(text)
    assert "position" in str(exc.value)


def test_parse_error_position():
    with pytest.raises(WordSyntaxError) as exc:
        parse_word("[x1,x2")
    assert exc.value.pos == 6


def test_arities():
    for k in range(1, 6):
        assert arity(gamma_word(k)) == k
    for k in range(0, 4):
        assert arity(delta_word(k)) == 2**k
    assert arity(power_word(7)) == 1


def test_names():
    assert word_name(gamma_word(3)) == "gamma:3"
    assert word_name(delta_word(2)) == "delta:2"
    assert word_name(power_word(15)) == "pow:15"
    assert word_name(parse_word("[x2,x1]")) == "[x2,x1]"


def words(depth=3):
    leaf = st.integers(1, 4).map(Var)

    def extend(children):
        return st.one_of(
            st.tuples(children, st.integers(-3, 4).filter(lambda n: n not in (0, 1))).map(lambda t: Power(*t)),
            st.lists(children, min_size=2, max_size=3).map(lambda fs: product(*fs)),
            st.tuples(children, children).map(lambda t: Bracket(*t)),
        )

    return st.recursive(leaf, extend, max_leaves=6)


@settings(max_examples=200)
@given(words())
def test_print_parse_roundtrip(w):
    assert parse_word(to_text(w)) == w


def test_evaluate_examples():
    a = P("(1 2 3)", 3)
    assert evaluate_word(gamma_word(2), [a, a]).is_identity()
    assert evaluate_word(gamma_word(2), [P("(1 2)", 3), P("(1 3)", 3)]) == P("(1 3 2)", 3)
    assert evaluate_word(power_word(15), [P("(1 2 3 4 5)", 5)]).is_identity()
    with pytest.raises(GroupError):
        evaluate_word(gamma_word(3), [a, a])


def test_evaluate_bracket_expands():
    a, b = P("(1 2 3 4)", 4), P("(1 2)", 4)
    assert evaluate_word(bracket(Var(1), Var(2)), [a, b]) == commutator(a, b)


def test_commutator_word_detection():
    assert is_commutator_word(gamma_word(3))
    assert is_commutator_word(parse_word("x1 x2 x1^-1 x2^-1"))
    assert not is_commutator_word(power_word(2))
    assert exponent_sums(parse_word("x1^2 x2 x1^-1")) == {1: 1, 2: 1}
    assert is_multilinear(delta_word(2))
    assert is_multilinear(parse_word("[x1,[x2,x3]]"))
    assert not is_multilinear(parse_word("[x1,x1]"))
    assert not is_multilinear(parse_word("[x1^2,x2]"))


def test_value_examples():
    assert word_values(cyclic(8), gamma_word(2)).values == {Permutation.identity(8)}
    A5 = alternating(5)
    assert len(word_values(A5, gamma_word(2))) == 60
    V = word_values(A5, power_word(15))
    assert len(V) == 16
    assert sum(1 for v in V if v.order() == 2) == 15


def test_verbal_examples():
    S3 = symmetric(3)
    assert verbal_subgroup(S3, Var(1)).order() == 6
    assert verbal_subgroup(S3, gamma_word(2)).order() == 3
    assert verbal_subgroup(alternating(5), power_word(15)).order() == 60


@pytest.mark.parametrize("G", catalog_groups(), ids=lambda G: G.name)
def test_verbal_agrees_with_series(G):
    for k in (1, 2, 3):
        assert verbal_subgroup(G, gamma_word(k)) == lower_central_term(G, k)
    for k in (1, 2):
        assert verbal_subgroup(G, delta_word(k)) == derived_term(G, k)


@pytest.mark.parametrize("G", catalog_groups(), ids=lambda G: G.name)
def test_value_set_closure(G):
    for w in (gamma_word(2), gamma_word(3), delta_word(2), power_word(2)):
        V = word_values(G, w)
        assert V.values <= frozenset(G.elements())
        assert V.is_conjugation_closed()
        if w != power_word(2):
            assert G.identity in V
            assert V.is_inversion_closed()


def _python_values(G, w):
    # plain-Python oracle, independent of the numpy tables
    return frozenset(evaluate_word(w, list(t)) for t in itertools.product(G.elements(), repeat=arity(w)))


GENERIC = ["x1^2 x2^2", "[x1^2,x2]", "[x1,x2]^2", "x1 x2 x1^-1", "[x1,x2,x1]", "[[x1,x2],[x2,x3]]"]


@pytest.mark.parametrize("text", GENERIC)
@pytest.mark.parametrize("name", ["S3", "D8", "A4", "C3^2"])
def test_generic_words_against_python_oracle(text, name):
    G = catalog_group(name)
    w = parse_word(text)
    assert word_values(G, w).values == _python_values(G, w)


@pytest.mark.parametrize("text", ["[x1,[x2,x3]]", "[[x1,x2],[x3,x4]]", "[x1,[x2,[x3,x4]]]"])
@pytest.mark.parametrize("name", ["S3", "D10", "A4", "SL(2,3)"])
def test_multilinear_shapes_against_brute_force(text, name):
    G = catalog_group(name)
    w = parse_word(text)
    assert is_multilinear(w)
    assert word_values(G, w).values == brute_force_values(G, w)


def test_brute_force_matches_python_oracle():
    G = dihedral(5)
    for w in (gamma_word(2), gamma_word(3), power_word(3)):
        assert brute_force_values(G, w) == _python_values(G, w)


def test_tuple_cap_is_an_error():
    old = limits.tuple_cap
    limits.tuple_cap = 1000
    try:
        G = symmetric(4)
        with pytest.raises(CapExceeded):
            word_values(G, parse_word("x1^2 x2^2 x3"))
        # the direct schemes are not subject to the cap
        assert len(word_values(G, gamma_word(3))) > 0
    finally:
        limits.tuple_cap = old
