"""Witt ring arithmetic, elementary divisors, Hodge and Newton polygons."""

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from crystal_forge import (
    InvalidDegree,
    NewtonPrecisionExceeded,
    NonPrime,
    PrecisionExhausted,
    SemilinearMap,
    WittElement,
    NewtonPolygon,
    charpoly,
    hodge_polygon,
    newton_polygon,
    semilinear_from_json,
    semilinear_to_json,
    smith_exponents,
    verschiebung,
    witt_ring,
)


# -- ring construction -------------------------------------------------------


def test_ring_z8():
    R = witt_ring(2, 1, 3)
    assert R.pm == 8
    a = WittElement(R, (5,))
    b = WittElement(R, (7,))
    assert (a * b).coeffs == (35 % 8,)


def test_ring_81_elements_sigma_order_two():
    R = witt_ring(3, 2, 2)
    elems = [(c0, c1) for c0 in range(9) for c1 in range(9)]
    assert len(elems) == 81
    fixed = 0
    for c in elems:
        x = WittElement(R, c)
        assert x.frobenius().frobenius() == x
        if x.frobenius() == x:
            fixed += 1
            assert c[1] == 0  # fixed subring is exactly Z/9
    assert fixed == 9


def test_ring_f5():
    R = witt_ring(5, 1, 1)
    assert R.pm == 5
    x = WittElement(R, (3,))
    assert (x * x.inverse()).coeffs == R.one


def test_ring_rejects_bad_input():
    with pytest.raises(NonPrime):
        witt_ring(6, 1, 2)
    with pytest.raises(InvalidDegree):
        witt_ring(3, 0, 2)
    with pytest.raises(InvalidDegree):
        witt_ring(3, 1, 0)


def test_residue_poly_deterministic_and_primitive():
    R = witt_ring(2, 3, 1)
    # the chosen presentation polynomial generates the multiplicative group
    g = WittElement(R, R.gen())
    seen = set()
    x = g
    for _ in range(7):
        seen.add(x.coeffs)
        x = x * g
    assert len(seen) == 7  # order of g is p^r - 1
    assert witt_ring(2, 3, 1).residue_poly == R.residue_poly


# -- Frobenius ---------------------------------------------------------------


def test_frobenius_identity_for_prime_field():
    R = witt_ring(7, 1, 3)
    x = WittElement(R, (13,))
    assert x.frobenius() == x


def test_frobenius_is_p_power_mod_p():
    R = witt_ring(2, 2, 1)
    g = WittElement(R, R.gen())
    assert g.frobenius() == g * g


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.data())
def test_frobenius_ring_homomorphism(seed, data):
    rings = [witt_ring(2, 2, 2), witt_ring(3, 2, 2), witt_ring(2, 3, 2), witt_ring(5, 2, 3)]
    R = rings[seed]
    a = WittElement(R, [data.draw(st.integers(0, R.pm - 1)) for _ in range(R.r)])
    b = WittElement(R, [data.draw(st.integers(0, R.pm - 1)) for _ in range(R.r)])
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()


def test_frobenius_order_r():
    for p, r, m in [(2, 4, 2), (3, 3, 2), (5, 2, 3)]:
        R = witt_ring(p, r, m)
        g = WittElement(R, R.gen())
        x = g
        for _ in range(r):
            x = x.frobenius()
        assert x == g


# -- semilinear composition --------------------------------------------------


def test_compose_twists_add_and_associativity():
    R = witt_ring(3, 2, 3)
    rng = random.Random(0)

    def rand_map(t):
        M = [[rng.randrange(R.pm) for _ in range(3)] for _ in range(3)]
        return SemilinearMap(R, M, t)

    f, g, h = rand_map(1), rand_map(2), rand_map(1)
    lhs = f.compose(g).compose(h)
    rhs = f.compose(g.compose(h))
    assert lhs.matrix == rhs.matrix and lhs.twist == rhs.twist == 4


def test_power_matrix_formula():
    R = witt_ring(2, 2, 3)
    rng = random.Random(1)
    M = [[rng.randrange(R.pm) for _ in range(2)] for _ in range(2)]
    f = SemilinearMap(R, M, 1)
    f3 = f.power(3)
    assert f3.twist == 3
    # A . sigma(A) . sigma^2(A)
    from crystal_forge.witt import _mat_mul, _mat_sigma

    expect = _mat_mul(
        R, _mat_mul(R, f.matrix, _mat_sigma(R, f.matrix, 1)), _mat_sigma(R, f.matrix, 2)
    )
    assert f3.matrix == expect


# -- Hodge polygons ----------------------------------------------------------


def test_hodge_diag():
    R = witt_ring(2, 1, 3)
    f = SemilinearMap(R, [[1, 0, 0], [0, 2, 0], [0, 0, 4]], 1)
    assert hodge_polygon(f) == NewtonPolygon([(Q(0), 1), (Q(1), 1), (Q(2), 1)])


def test_hodge_permutation_times_powers():
    R = witt_ring(3, 1, 3)
    f = SemilinearMap(R, [[0, 3], [1, 0]], 1)
    assert hodge_polygon(f) == NewtonPolygon([(Q(0), 1), (Q(1), 1)])


def test_hodge_unit_change_invariance():
    R = witt_ring(5, 1, 4)
    rng = random.Random(3)
    f = SemilinearMap(R, [[5, 3], [2, 10]], 1)
    exps = smith_exponents(R, f.matrix)
    # multiplying by a unit matrix on either side keeps the exponents
    U = SemilinearMap(R, [[1, 4], [1, 3]], 0)  # det = -1, a unit
    from crystal_forge.witt import _mat_mul

    assert smith_exponents(R, _mat_mul(R, U.matrix, f.matrix)) == exps


def test_hodge_precision_exhausted_on_zero_column():
    R = witt_ring(2, 1, 3)
    f = SemilinearMap(R, [[0, 1], [0, 1]], 1)
    with pytest.raises(PrecisionExhausted):
        hodge_polygon(f)


def test_smith_transforms_factor_the_matrix():
    R = witt_ring(2, 1, 5)
    rng = random.Random(9)
    M = [[rng.randrange(R.pm) for _ in range(3)] for _ in range(3)]
    f = SemilinearMap(R, M, 1)
    try:
        exps, P, Qm = smith_exponents(R, f.matrix, with_transforms=True)
    except PrecisionExhausted:
        pytest.skip("degenerate draw")
    from crystal_forge.witt import _mat_mul

    D = _mat_mul(R, _mat_mul(R, P, f.matrix), Qm)
    for i in range(3):
        for j in range(3):
            want = R.from_int(2 ** exps[i]) if i == j else R.zero
            assert D[i][j] == want


# -- Newton polygons ---------------------------------------------------------


def test_newton_identity():
    R = witt_ring(2, 1, 2)
    f = SemilinearMap(R, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1)
    assert newton_polygon(f) == NewtonPolygon([(Q(0), 3)])


def test_newton_supersingular_pair():
    for r in (1, 2):
        R = witt_ring(2, r, 4)
        f = SemilinearMap(R, [[0, 2], [1, 0]], 1)
        assert newton_polygon(f) == NewtonPolygon([(Q(1, 2), 2)])


def test_newton_charpoly_vs_sympy_small():
    sympy = pytest.importorskip("sympy")
    R = witt_ring(5, 1, 6)
    rng = random.Random(11)
    M = [[rng.randrange(40) for _ in range(4)] for _ in range(4)]
    ours = charpoly(R, SemilinearMap(R, M, 1).matrix)
    T = sympy.symbols("T")
    theirs = sympy.Matrix(M).charpoly(T).all_coeffs()[::-1]
    assert [e[0] for e in ours] == [int(c) % R.pm for c in theirs]


def test_newton_above_hodge_random():
    rng = random.Random(42)
    done = 0
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        R = witt_ring(p, rng.choice([1, 2]), 6)
        M = [
            [
                rng.randrange(R.pm) if rng.random() < 0.85 else p * rng.randrange(R.pm // p)
                for _ in range(4)
            ]
            for _ in range(4)
        ]
        f = SemilinearMap(R, M, 1)
        try:
            np_ = newton_polygon(f)
            hp = hodge_polygon(f)
        except (NewtonPrecisionExceeded, PrecisionExhausted):
            continue
        assert np_.lies_on_or_above(hp)
        assert np_.same_endpoints(hp)
        done += 1
    assert done >= 40


def test_newton_power_scaling():
    rng = random.Random(5)
    for _ in range(10):
        p = rng.choice([2, 3, 5])
        R = witt_ring(p, rng.choice([1, 2]), 8)
        M = [[rng.randrange(p**3) for _ in range(3)] for _ in range(3)]
        f = SemilinearMap(R, M, 1)
        try:
            base = newton_polygon(f)
        except NewtonPrecisionExceeded:
            continue
        for n in (2, 3, 4):
            assert newton_polygon(f.power(n)) == base.scale(n)


def test_newton_break_points_integral():
    rng = random.Random(6)
    for _ in range(20):
        R = witt_ring(2, 1, 8)
        M = [[rng.randrange(R.pm) for _ in range(5)] for _ in range(5)]
        try:
            poly = newton_polygon(SemilinearMap(R, M, 1))
        except NewtonPrecisionExceeded:
            continue
        run = Q(0)
        for s, mult in poly.pairs:
            run += s * mult
            assert run.denominator == 1


def test_newton_precision_error_reports_requirement():
    R = witt_ring(2, 1, 2)
    f = SemilinearMap(R, [[4, 0], [0, 4]], 1)  # det valuation 4 >= m
    with pytest.raises(NewtonPrecisionExceeded) as info:
        newton_polygon(f)
    assert info.value.required_m > 2
    # rebuilding at the suggested precision succeeds
    R2 = witt_ring(2, 1, info.value.required_m)
    f2 = SemilinearMap(R2, [[4, 0], [0, 4]], 1)
    assert newton_polygon(f2) == NewtonPolygon([(Q(2), 2)])


# -- verschiebung ------------------------------------------------------------


def test_verschiebung_is_p_over_f():
    R = witt_ring(3, 2, 4)
    for M in ([[0, 3], [1, 0]], [[3, 1], [1, 1]], [[1, 0], [0, 3]]):
        f = SemilinearMap(R, M, 1)
        v = verschiebung(f)
        pid = tuple(
            tuple(R.from_int(3 if i == j else 0) for j in range(2)) for i in range(2)
        )
        assert v.compose(f).matrix == pid
        assert f.compose(v).matrix == pid


def test_verschiebung_rejects_non_dieudonne():
    R = witt_ring(3, 1, 4)
    with pytest.raises(PrecisionExhausted):
        verschiebung(SemilinearMap(R, [[9, 0], [0, 1]], 1))


# -- serialization -----------------------------------------------------------


def test_json_round_trip():
    R = witt_ring(2, 2, 3)
    f = SemilinearMap(R, [[[1, 2], [0, 0]], [[3, 0], [5, 7]]], 1)
    obj = semilinear_to_json(f)
    g = semilinear_from_json(obj)
    assert g.matrix == f.matrix and g.twist == f.twist and g.ring == f.ring


def test_json_rejects_unknown_fields():
    R = witt_ring(2, 1, 2)
    obj = semilinear_to_json(SemilinearMap(R, [[1]], 1))
    obj["extra"] = 1
    with pytest.raises(ValueError):
        semilinear_from_json(obj)
