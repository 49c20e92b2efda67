import json

import pytest
from conftest import catalog_group

from pnilp.catalog import (
    _linear_perm,
    _translation,
    affine_semidirect,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    exponent,
    fixture_path,
    from_json,
    group_72,
    group_72_relations,
    load,
    make,
    manifest,
    resolve,
    save,
    sl2,
    symmetric,
    to_json,
)
from pnilp.perm import GroupError, PermutationGroup, commutator, conjugate, inverse
from pnilp.structure import abelian_invariants, center, lower_central_term, predicates


def test_constructor_examples():
    C6 = cyclic(6)
    assert C6.order() == 6 and predicates(C6).is_abelian
    G = direct_product(symmetric(3), cyclic(2))
    assert G.order() == 12 and G.degree == 5
    A = affine_semidirect(3, 2, [[[2, 0], [0, 1]], [[0, 1], [1, 0]]])
    assert A.order() == 72 and A.degree == 9


@pytest.mark.parametrize(
    "G,order",
    [
        (cyclic(1), 1),
        (cyclic(24), 24),
        (dihedral(3), 6),
        (dihedral(12), 24),
        (symmetric(5), 120),
        (alternating(4), 12),
        (elementary_abelian(5, 2), 25),
        (elementary_abelian(2, 3), 8),
        (sl2(3), 24),
        (sl2(5), 120),
    ],
)
def test_orders(G, order):
    assert G.order() == order


@pytest.mark.parametrize("call", [lambda: dihedral(2), lambda: cyclic(0), lambda: elementary_abelian(4, 2),
                                  lambda: sl2(7), lambda: affine_semidirect(3, 2, [[[1, 1], [1, 1]]]),
                                  lambda: make("nope"), lambda: make("cyclic", 1, 2)])
def test_invalid_parameters(call):
    with pytest.raises(GroupError):
        call()


def test_group_72():
    G = group_72()
    assert G.order() == 72
    assert all(group_72_relations(G).values())
    assert abelian_invariants(lower_central_term(G, 3)) == [3, 3]
    L = G.labels
    assert (L["h2"] * L["g3"]).order() == 2


def test_group_72_g3_acts_as_minus_identity():
    L = group_72().labels
    for h in (L["h1"], L["h2"]):
        assert conjugate(h, L["g3"]) == inverse(h)


def test_group_72_other_completion_is_inconsistent():
    # letting g1 invert h2 as well forces g1 = -I, which commutes with the swap
    h1, h2 = _translation((1, 0), 3, 2), _translation((0, 1), 3, 2)
    g1 = _linear_perm([[2, 0], [0, 2]], 3, 2)
    g2 = _linear_perm([[0, 1], [1, 0]], 3, 2)
    g3 = commutator(g2, g1)
    G = PermutationGroup(9, [g1, g2, h1, h2])
    rel = group_72_relations(G, {"g1": g1, "g2": g2, "g3": g3, "h1": h1, "h2": h2})
    assert g3.is_identity()
    assert not rel["[h1,g3] = h1"]


def test_sl2_center():
    for q, order in ((3, 24), (5, 120)):
        G = sl2(q)
        assert G.order() == order
        assert center(G).order() == 2


def test_manifest_orders_and_tags():
    entries = manifest()
    assert len({e.name for e in entries}) == len(entries)
    for e in entries:
        G = catalog_group(e.name)
        assert G.order() == e.expected_order
        assert predicates(G).tags() == set(e.tags), e.name
        assert G.order() <= 200 or e.name in ("A5", "SL(2,5)")


def test_manifest_covers_families():
    names = {e.name for e in manifest()}
    assert {f"C{n}" for n in range(2, 25)} <= names
    assert {f"D{2 * n}" for n in range(3, 13)} <= names
    assert {"S3", "S4", "A4", "A5", "C2^2", "C3^2", "C5^2", "G72", "SL(2,3)", "SL(2,5)"} <= names


def test_save_load_roundtrip(tmp_path):
    S3 = symmetric(3)
    path = tmp_path / "s3.json"
    save(path, S3)
    H = load(path)
    assert H.order() == 6 and set(H.elements()) == set(S3.elements())


def test_load_rejects_repeated_point(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "degree": 3, "generators": [[1, 1, 2]]}))
    with pytest.raises(GroupError):
        load(path)


@pytest.mark.parametrize("data", [{"degree": 3}, {"degree": 3, "generators": [[1, 2]]}, []])
def test_malformed_json(data):
    with pytest.raises(GroupError):
        from_json(data)


def test_malformed_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(GroupError):
        load(path)


def test_cycle_notation_generators():
    G = from_json({"name": "s3", "degree": 3, "generators": ["(1 2 3)", "(1 2)"]})
    assert G.order() == 6
    assert resolve("(1 2 3 4);(1 2)").order() == 24


def test_fixture_g72():
    G = load(fixture_path("g72.json"))
    assert G.order() == 72
    assert all(group_72_relations(G).values())
    assert to_json(G) == to_json(group_72())


@pytest.mark.parametrize(
    "spec,order",
    [("S4", 24), ("direct_product(symmetric(3), cyclic(2))", 12), ("group_72", 72), ("sl2(3)", 24),
     ("affine_semidirect(5, 1, [[[2]]])", 20)],
)
def test_resolve(spec, order):
    assert resolve(spec).order() == order


@pytest.mark.parametrize("spec", ["nosuchgroup", "cyclic(", "__import__('os')", "cyclic(n=3)", "3"])
def test_resolve_rejects(spec):
    with pytest.raises(GroupError):
        resolve(spec)


def test_exponent():
    assert exponent(alternating(5)) == 30
    assert exponent(symmetric(4)) == 12
