"""Root systems, Weyl scans, nilradical combinatorics, Killing pairings."""

import os

import pytest

from crystal_forge import (
    DiagramAutomorphism,
    EnumerationBoundExceeded,
    NodeOutOfRange,
    UnsupportedType,
    WeylElement,
    build_root_system,
    intersect_nilradicals,
    killing_pairing,
    minuscule_nodes,
    nilradical_roots,
    projection_dim,
    weyl_elements,
    weyl_order,
)
from crystal_forge.roots import (
    intersect_nilradical_roots,
    root_to_epsilon,
    simple_roots_epsilon,
)

RUN_E6 = os.environ.get("CRYSTAL_FORGE_E6") == "1"
RUN_E7 = os.environ.get("CRYSTAL_FORGE_E7") == "1"


# -- construction ------------------------------------------------------------


@pytest.mark.parametrize(
    "lie_type,rank,count",
    [
        ("A", 1, 2),
        ("A", 2, 6),
        ("A", 5, 30),
        ("B", 1, 2),
        ("B", 3, 18),
        ("C", 3, 18),
        ("D", 4, 24),
        ("D", 6, 60),
        ("E6", 6, 72),
        ("E7", 7, 126),
    ],
)
def test_root_counts(lie_type, rank, count):
    rs = build_root_system(lie_type, rank)
    assert len(rs.roots) == count
    assert len(rs.positive) == count // 2
    # closed under negation
    assert all(tuple(-c for c in a) in rs._root_set for a in rs.roots)


@pytest.mark.parametrize(
    "lie_type,rank,highest",
    [
        ("A", 2, (1, 1)),
        ("A", 4, (1, 1, 1, 1)),
        ("B", 4, (1, 2, 2, 2)),
        ("C", 3, (2, 2, 1)),
        ("D", 4, (1, 2, 1, 1)),
        ("D", 6, (1, 2, 2, 2, 1, 1)),
        ("E6", 6, (1, 2, 2, 3, 2, 1)),
        ("E7", 7, (2, 2, 3, 4, 3, 2, 1)),
    ],
)
def test_highest_roots(lie_type, rank, highest):
    assert build_root_system(lie_type, rank).highest_root == highest


def test_unsupported_types():
    for bad in ("E8", "F4", "G2", "X"):
        with pytest.raises(UnsupportedType):
            build_root_system(bad, 8)
    with pytest.raises(UnsupportedType):
        build_root_system("C", 2)
    with pytest.raises(UnsupportedType):
        build_root_system("D", 3)


# -- minuscule nodes ---------------------------------------------------------


@pytest.mark.parametrize(
    "lie_type,rank,nodes",
    [
        ("A", 3, {1, 2, 3}),
        ("A", 1, {1}),
        ("B", 4, {1}),
        ("C", 3, {3}),
        ("D", 5, {1, 4, 5}),
        ("E6", 6, {1, 6}),
        ("E7", 7, {7}),
    ],
)
def test_minuscule_nodes(lie_type, rank, nodes):
    assert minuscule_nodes(lie_type, rank) == nodes


# -- nilradicals -------------------------------------------------------------


def test_nilradical_a3_node1():
    rs = build_root_system("A", 3)
    got = nilradical_roots(rs, 1)
    assert got == {(1, 0, 0), (1, 1, 0), (1, 1, 1)}


@pytest.mark.parametrize("l", [4, 5, 6])
def test_nilradical_d_node_l(l):
    rs = build_root_system("D", l)
    assert len(nilradical_roots(rs, l)) == l * (l - 1) // 2
    # realized in epsilon coordinates as the sum pairs e_i + e_j (i < j);
    # the node-l radical mirrors { -e_i - e_j } after negation
    eps = {root_to_epsilon(rs, a) for a in nilradical_roots(rs, l)}
    want = set()
    for i in range(l):
        for j in range(i + 1, l):
            v = [0] * l
            v[i] = v[j] = 1
            want.add(tuple(v))
    assert eps == want


def test_nilradical_e6_node1():
    rs = build_root_system("E6", 6)
    # independent count: positive roots minus those of the D5 Levi
    levi = build_root_system("D", 5)
    assert len(nilradical_roots(rs, 1)) == len(rs.positive) - len(levi.positive) == 16


def test_nilradical_closed_under_addition():
    for lie_type, rank, x in [("A", 4, 2), ("D", 5, 4), ("E6", 6, 1), ("C", 3, 3)]:
        rs = build_root_system(lie_type, rank)
        rad = nilradical_roots(rs, x)
        for a in rad:
            for b in rad:
                s = tuple(u + v for u, v in zip(a, b))
                if rs.is_root(s):
                    assert s in rad


def test_node_out_of_range():
    rs = build_root_system("A", 2)
    with pytest.raises(NodeOutOfRange):
        nilradical_roots(rs, 3)


# -- intersections -----------------------------------------------------------


def test_intersections_type_a():
    for l in range(2, 7):
        rs = build_root_system("A", l)
        for y in range(1, l + 1):
            for x in range(y, l + 1):
                assert intersect_nilradicals(rs, {y, x}) == y * (l + 1 - x)


@pytest.mark.parametrize("l", [4, 5, 6])
def test_intersections_type_d(l):
    rs = build_root_system("D", l)
    assert intersect_nilradicals(rs, {l - 1, l}) == (l - 2) * (l - 1) // 2
    assert intersect_nilradicals(rs, {1, l - 1, l}) == l - 2


def test_intersections_e6():
    rs = build_root_system("E6", 6)
    assert intersect_nilradicals(rs, {1, 6}) == 8


# -- Weyl groups -------------------------------------------------------------


@pytest.mark.parametrize(
    "lie_type,rank",
    [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("D", 5)],
)
def test_weyl_enumeration_matches_degree_formula(lie_type, rank):
    rs = build_root_system(lie_type, rank)
    count = sum(1 for _ in weyl_elements(rs))
    assert count == weyl_order(lie_type, rank)


def test_weyl_elements_permute_roots():
    rs = build_root_system("B", 3)
    for w in weyl_elements(rs):
        imgs = {w.apply(a) for a in rs.roots}
        assert imgs == set(rs.roots)


def test_weyl_bound_exceeded():
    rs = build_root_system("A", 4)
    with pytest.raises(EnumerationBoundExceeded):
        list(weyl_elements(rs, bound=10))


@pytest.mark.skipif(not RUN_E6, reason="set CRYSTAL_FORGE_E6=1 to enumerate W(E6)")
def test_weyl_e6_order():
    rs = build_root_system("E6", 6)
    assert sum(1 for _ in weyl_elements(rs)) == weyl_order("E6", 6) == 51840


@pytest.mark.skipif(not RUN_E7, reason="set CRYSTAL_FORGE_E7=1 to enumerate W(E7)")
def test_weyl_e7_order():
    rs = build_root_system("E7", 7)
    assert sum(1 for _ in weyl_elements(rs, bound=3 * 10**6)) == weyl_order("E7", 7)


# -- projections (exhaustive maximality suite) --------------------------------


def test_projection_identity_is_full():
    rs = build_root_system("A", 3)
    w = WeylElement.identity(rs)
    for x in (1, 2, 3):
        assert projection_dim(rs, x, w, x) == len(nilradical_roots(rs, x))


@pytest.mark.parametrize(
    "lie_type,rank",
    [("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("D", 4)],
)
def test_projection_bounded_by_intersection_exhaustive(lie_type, rank):
    rs = build_root_system(lie_type, rank)
    nodes = sorted(minuscule_nodes(lie_type, rank))
    elements = list(weyl_elements(rs))
    for x in nodes:
        for y in nodes:
            cap = intersect_nilradicals(rs, {x, y})
            best = max(projection_dim(rs, x, w, y) for w in elements)
            assert best == cap
            assert projection_dim(rs, x, WeylElement.identity(rs), y) == cap


def test_projection_a3_corner_case():
    rs = build_root_system("A", 3)
    for w in weyl_elements(rs):
        assert projection_dim(rs, 3, w, 1) <= 1


def test_projection_d4_maximum():
    rs = build_root_system("D", 4)
    best = max(projection_dim(rs, 3, w, 4) for w in weyl_elements(rs))
    assert best == intersect_nilradicals(rs, {3, 4}) == 3


@pytest.mark.parametrize("l", [4, 5])
def test_triple_projection_bound_type_d(l):
    """max over w of |rad_l  intersect  w(rad_{l-1} intersect rad_1)| = l - 2."""
    rs = build_root_system("D", l)
    inner = intersect_nilradical_roots(rs, {1, l - 1})
    outer = nilradical_roots(rs, l)
    best = 0
    for w in weyl_elements(rs):
        best = max(best, sum(1 for a in inner if w.apply(a) in outer))
    assert best == l - 2 == intersect_nilradicals(rs, {1, l - 1, l})


@pytest.mark.skipif(not RUN_E6, reason="set CRYSTAL_FORGE_E6=1 for the E6 scan")
def test_projection_e6_exhaustive():
    rs = build_root_system("E6", 6)
    cap = intersect_nilradicals(rs, {1, 6})
    best = 0
    for w in weyl_elements(rs):
        best = max(best, projection_dim(rs, 1, w, 6))
    assert best == cap == 8


# -- Killing pairing ---------------------------------------------------------


@pytest.mark.parametrize("l", range(1, 9))
def test_killing_pairing_type_a(l):
    rs = build_root_system("A", l)
    assert killing_pairing(rs, rs.highest_root) == 2 * (l + 1)


def test_killing_pairing_a1_is_4():
    rs = build_root_system("A", 1)
    assert killing_pairing(rs, (1,)) == 4


@pytest.mark.parametrize("l", [4, 5, 6, 7, 8])
def test_killing_pairing_type_d_oracle(l):
    """The disputed case: the oracle lands on 4(l-1) (the trace-form
    constant 2l-2 times the pairing 2), not on 4(l-2).  Reported only."""
    rs = build_root_system("D", l)
    got = killing_pairing(rs, rs.highest_root)
    assert got in (4 * (l - 1), 4 * (l - 2))
    print(f"D{l} Killing pairing oracle = {got} "
          f"(= 4(l-1): {got == 4 * (l - 1)}; printed-constant 4(l-2): "
          f"{got == 4 * (l - 2)})")


def test_killing_pairing_constant_on_length_classes():
    for lie_type, rank in [("A", 3), ("D", 4), ("B", 3), ("C", 3), ("E6", 6)]:
        rs = build_root_system(lie_type, rank)
        values = {killing_pairing(rs, a) for a in rs.positive}
        # one value per root length: a single one in the simply-laced types
        assert len(values) <= 2
        if lie_type in ("A", "D", "E6"):
            assert len(values) == 1


def test_killing_pairing_weyl_invariance():
    rs = build_root_system("B", 3)
    base = {a: killing_pairing(rs, a) for a in rs.positive}
    w = WeylElement.simple_reflection(rs, 1).compose(
        WeylElement.simple_reflection(rs, 3)
    )
    for a, v in base.items():
        b = w.apply(a)
        bb = b if b in rs.positive else tuple(-c for c in b)
        assert base[bb] == v


# -- diagram automorphisms ---------------------------------------------------


def test_flip_orders():
    assert DiagramAutomorphism.flip("A", 4).order() == 2
    assert DiagramAutomorphism.flip("D", 5).order() == 2
    assert DiagramAutomorphism.flip("E6", 6).order() == 2
    assert DiagramAutomorphism.triality("D", 4).order() == 3
    assert DiagramAutomorphism.identity("C", 3).order() == 1


def test_automorphism_acts_additively_on_roots():
    rs = build_root_system("D", 4)
    tau = DiagramAutomorphism.triality("D", 4)
    for a in rs.roots:
        assert rs.is_root(tau.root(a))
        for b in rs.roots:
            s = tuple(u + v for u, v in zip(a, b))
            if rs.is_root(s):
                ts = tuple(u + v for u, v in zip(tau.root(a), tau.root(b)))
                assert tau.root(s) == ts


def test_non_diagram_permutation_rejected():
    with pytest.raises(NodeOutOfRange):
        DiagramAutomorphism("A", 3, (2, 1, 3))


# -- epsilon coordinates -----------------------------------------------------


def test_epsilon_conversion_is_root_bijection():
    for lie_type, rank in [("A", 3), ("B", 3), ("C", 3), ("D", 5)]:
        rs = build_root_system(lie_type, rank)
        eps = {root_to_epsilon(rs, a) for a in rs.roots}
        assert len(eps) == len(rs.roots)
        dim = len(simple_roots_epsilon(lie_type, rank)[0])
        if lie_type == "D":
            want = set()
            for i in range(dim):
                for j in range(i + 1, dim):
                    for si in (1, -1):
                        for sj in (1, -1):
                            v = [0] * dim
                            v[i], v[j] = si, sj
                            want.add(tuple(v))
            assert eps == want
