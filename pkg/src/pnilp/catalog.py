"""Constructors for the groups used by the checks, plus JSON load/save.

Groups can be named by constructor expressions such as ``cyclic(6)``,
``direct_product(symmetric(3), cyclic(2))`` or
``affine_semidirect(5, 1, [[[2]]])``, or by the display names listed in the
shipped manifest (``data/catalog.json``).
"""

from __future__ import annotations

import ast
import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .perm import (
    GroupError,
    Permutation,
    PermutationGroup,
    commutator,
    compose,
    conjugate,
    element_order,
    inverse,
    parse_cycles,
)
from .structure import is_prime

__all__ = [
    "CatalogEntry",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "elementary_abelian",
    "direct_product",
    "affine_semidirect",
    "group_72",
    "group_72_relations",
    "sl2",
    "make",
    "resolve",
    "load",
    "save",
    "to_json",
    "from_json",
    "default_catalog",
    "manifest",
    "fixture_path",
    "exponent",
]


def _perm(img: list[int]) -> Permutation:
    return Permutation._raw(tuple(img))


def _cycle(n: int, points: list[int]) -> Permutation:
    img = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        img[a] = b
    return _perm(img)


def cyclic(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    gens = [_cycle(n, list(range(n)))] if n > 1 else []
    return PermutationGroup(n, gens, name=f"cyclic({n})")


def dihedral(n: int) -> PermutationGroup:
    """Symmetries of a regular n-gon, order ``2n``."""
    if n < 3:
        raise GroupError("dihedral(n) needs n >= 3")
    rot = _cycle(n, list(range(n)))
    ref = _perm([(-i) % n for i in range(n)])
    return PermutationGroup(n, [rot, ref], name=f"dihedral({n})")


def symmetric(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("symmetric(n) needs n >= 1")
    gens = []
    if n > 1:
        gens = [_cycle(n, [0, 1]), _cycle(n, list(range(n)))]
    return PermutationGroup(n, gens, name=f"symmetric({n})")


def alternating(n: int) -> PermutationGroup:
    if n < 1:
        raise GroupError("alternating(n) needs n >= 1")
    gens = [_cycle(n, [0, 1, i]) for i in range(2, n)]
    return PermutationGroup(n, gens, name=f"alternating({n})")


def elementary_abelian(p: int, r: int) -> PermutationGroup:
    """``C_p^r`` as ``r`` disjoint p-cycles."""
    if not is_prime(p) or r < 1:
        raise GroupError("elementary_abelian(p, r) needs p prime and r >= 1")
    n = p * r
    gens = [_cycle(n, list(range(i * p, (i + 1) * p))) for i in range(r)]
    return PermutationGroup(n, gens, name=f"elementary_abelian({p}, {r})")


def direct_product(A: PermutationGroup, B: PermutationGroup) -> PermutationGroup:
    """``A x B`` acting on the disjoint union of their points."""
    n, m = A.degree, B.degree
    gens = [_perm(list(a.img) + list(range(n, n + m))) for a in A.generators]
    gens += [_perm(list(range(n)) + [n + i for i in b.img]) for b in B.generators]
    return PermutationGroup(n + m, gens, name=f"direct_product({A.name}, {B.name})")


def _vectors(p: int, r: int) -> list[tuple[int, ...]]:
    # point index i <-> digits of i in base p, least significant first
    return [tuple((i // p**j) % p for j in range(r)) for i in range(p**r)]


def _vec_index(v: tuple[int, ...], p: int) -> int:
    return sum(x * p**j for j, x in enumerate(v))


def _row_times(v: tuple[int, ...], M: list[list[int]], p: int) -> tuple[int, ...]:
    r = len(v)
    return tuple(sum(v[i] * M[i][j] for i in range(r)) % p for j in range(r))


def _det(M: list[list[int]]) -> int:
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1 :] for row in M[1:]]) for j in range(len(M)))


def _linear_perm(M: list[list[int]], p: int, r: int) -> Permutation:
    return _perm([_vec_index(_row_times(v, M, p), p) for v in _vectors(p, r)])


def _translation(t: tuple[int, ...], p: int, r: int) -> Permutation:
    return _perm([_vec_index(tuple((a + b) % p for a, b in zip(v, t)), p) for v in _vectors(p, r)])


def affine_semidirect(p: int, r: int, matrices: list[list[list[int]]]) -> PermutationGroup:
    """``F_p^r`` extended by the matrix group generated by ``matrices``.

    Acts on the ``p^r`` vectors by ``v -> v M + t`` (row vectors).
    """
    if not is_prime(p) or r < 1:
        raise GroupError("affine_semidirect needs p prime and r >= 1")
    for M in matrices:
        if len(M) != r or any(len(row) != r for row in M):
            raise GroupError(f"matrix is not {r}x{r}: {M}")
        if _det(M) % p == 0:
            raise GroupError(f"matrix is singular mod {p}: {M}")
    gens = [_translation(tuple(int(i == j) for i in range(r)), p, r) for j in range(r)]
    gens += [_linear_perm(M, p, r) for M in matrices]
    return PermutationGroup(p**r, gens, name=f"affine_semidirect({p}, {r}, {matrices})")


_G72_MATRICES = {"g1": [[2, 0], [0, 1]], "g2": [[0, 1], [1, 0]]}


def group_72() -> PermutationGroup:
    """``(C3 x C3) : D8`` on the 9 points of ``F_3^2``.

    ``h1, h2`` translate by the standard basis vectors, ``g1`` negates the
    first coordinate, ``g2`` swaps coordinates, and ``g3 = [g2, g1]``. The
    elements are available as ``G.labels``.
    """
    h1 = _translation((1, 0), 3, 2)
    h2 = _translation((0, 1), 3, 2)
    g1 = _linear_perm(_G72_MATRICES["g1"], 3, 2)
    g2 = _linear_perm(_G72_MATRICES["g2"], 3, 2)
    g3 = commutator(g2, g1)
    G = PermutationGroup(9, [g1, g2, h1, h2], name="group_72")
    G.labels = {"g1": g1, "g2": g2, "g3": g3, "h1": h1, "h2": h2}
    return G


def group_72_relations(G: PermutationGroup, labels: dict[str, Permutation] | None = None) -> dict[str, bool]:
    """Evaluate each defining relation of the order-72 example."""
    L = labels if labels is not None else G.labels
    g1, g2, g3, h1, h2 = (L[k] for k in ("g1", "g2", "g3", "h1", "h2"))
    e = G.identity
    return {
        "g_i^2 = 1": all(compose(g, g) == e for g in (g1, g2, g3)),
        "h_j^3 = 1": all(h**3 == e for h in (h1, h2)),
        "[g2,g1] = g3": commutator(g2, g1) == g3,
        "[h1,g1] = h1": commutator(h1, g1) == h1,
        "[h1,g3] = h1": commutator(h1, g3) == h1,
        "[h2,g3] = h2": commutator(h2, g3) == h2,
        "h1^g2 = h2": conjugate(h1, g2) == h2,
        "h2^g2 = h1": conjugate(h2, g2) == h1,
        "members": all(G.contains(x) for x in (g1, g2, g3, h1, h2)),
    }


def sl2(q: int) -> PermutationGroup:
    """``SL(2, q)`` on the ``q^2 - 1`` nonzero vectors of ``F_q^2``."""
    if q not in (3, 5):
        raise GroupError("sl2(q) is provided for q in {3, 5}")
    pts = [v for v in itertools.product(range(q), repeat=2) if any(v)]
    index = {v: i for i, v in enumerate(pts)}

    def act(M):
        return _perm([index[_row_times(v, M, q)] for v in pts])

    gens = [act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])]
    return PermutationGroup(len(pts), gens, name=f"sl2({q})")


_CONSTRUCTORS = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
    "elementary_abelian": elementary_abelian,
    "direct_product": direct_product,
    "affine_semidirect": affine_semidirect,
    "group_72": group_72,
    "sl2": sl2,
}


def make(name: str, *params) -> PermutationGroup:
    """Call the constructor ``name`` with ``params``."""
    try:
        ctor = _CONSTRUCTORS[name]
    except KeyError:
        raise GroupError(f"unknown constructor {name!r}") from None
    try:
        return ctor(*params)
    except TypeError as exc:
        raise GroupError(f"bad parameters for {name}: {exc}") from None


def _eval_expr(node: ast.AST):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_expr(node.operand)
    if isinstance(node, ast.List):
        return [_eval_expr(e) for e in node.elts]
    if isinstance(node, ast.Name):
        return make(node.id)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        return make(node.func.id, *(_eval_expr(a) for a in node.args))
    raise GroupError(f"unsupported expression: {ast.dump(node)}")


def resolve(spec: str) -> PermutationGroup:
    """A group from a manifest name, a constructor expression or a JSON file path."""
    entries = {e.name: e for e in manifest()}
    if spec in entries:
        G = entries[spec].build()
        return G
    if spec.endswith(".json") or Path(spec).is_file():
        return load(spec)
    if spec.lstrip().startswith("("):
        return from_cycle_text(spec)
    try:
        tree = ast.parse(spec.strip(), mode="eval")
    except SyntaxError as exc:
        raise GroupError(f"cannot parse group {spec!r}: {exc.msg}") from None
    G = _eval_expr(tree.body)
    if not isinstance(G, PermutationGroup):
        raise GroupError(f"{spec!r} does not describe a group")
    return G


def from_cycle_text(text: str, degree: int | None = None) -> PermutationGroup:
    """Generators in cycle notation separated by ``;``, e.g. ``"(1 2 3);(1 2)"``."""
    parts = [t for t in text.split(";") if t.strip()]
    cycles = [parse_cycles(t) for t in parts]
    top = max((max(c) for cs in cycles for c in cs if c), default=1)
    n = degree or top
    return PermutationGroup(n, [Permutation.from_cycles(cs, n) for cs in cycles])


def to_json(G: PermutationGroup) -> dict:
    data = {
        "name": G.name or "group",
        "degree": G.degree,
        "generators": [list(g.images) for g in G.generators],
    }
    labels = G.labels
    if labels:
        data["labels"] = {k: list(v.images) for k, v in labels.items()}
    return data


def from_json(data: dict) -> PermutationGroup:
    try:
        degree = int(data["degree"])
        raw_gens = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed group JSON: {exc}") from None
    gens = []
    for img in raw_gens:
        if isinstance(img, str):
            gens.append(Permutation.from_cycles(img, degree))
            continue
        if len(img) != degree:
            raise GroupError(f"generator has {len(img)} images, degree is {degree}")
        gens.append(Permutation(img))
    G = PermutationGroup(degree, gens, name=data.get("name"))
    if "labels" in data:
        G.labels = {k: Permutation(v) for k, v in data["labels"].items()}
    return G


def save(path: str | Path, G: PermutationGroup) -> None:
    data = to_json(G)
    # one generator per line keeps fixtures readable
    lines = ["{", f'  "name": {json.dumps(data["name"])},', f'  "degree": {data["degree"]},', '  "generators": [']
    lines.append(",\n".join(f"    {json.dumps(g)}" for g in data["generators"]))
    if "labels" in data:
        lines.append("  ],")
        lines.append('  "labels": {')
        lines.append(",\n".join(f"    {json.dumps(k)}: {json.dumps(v)}" for k, v in data["labels"].items()))
        lines.append("  }")
    else:
        lines.append("  ]")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load(path: str | Path) -> PermutationGroup:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise GroupError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GroupError(f"{path}: invalid JSON ({exc})") from None
    return from_json(data)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    expr: str
    expected_order: int
    tags: frozenset[str] = field(default_factory=frozenset)

    def build(self) -> PermutationGroup:
        tree = ast.parse(self.expr, mode="eval")
        G = _eval_expr(tree.body)
        G.name = self.name
        if G.order() != self.expected_order:
            raise GroupError(f"{self.name}: order {G.order()}, expected {self.expected_order}")
        return G


def manifest() -> list[CatalogEntry]:
    text = resources.files("pnilp").joinpath("data/catalog.json").read_text(encoding="utf-8")
    return [
        CatalogEntry(e["name"], e["make"], e["order"], frozenset(e["tags"]))
        for e in json.loads(text)["groups"]
    ]


def default_catalog() -> list[PermutationGroup]:
    return [e.build() for e in manifest()]


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("pnilp").joinpath(f"data/{name}")))


def exponent(G: PermutationGroup) -> int:
    """Least common multiple of the element orders."""
    return math.lcm(*(element_order(x) for x in G.elements()))
