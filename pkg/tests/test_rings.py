"""Ring arithmetic, factorization, Smith form, points, and localization."""

import pytest
from hypothesis import given, settings, strategies as st

from ttg.errors import FactorBoundExceeded, UnsupportedRing
from ttg.linalg import Matrix, determinant, kernel_basis, smith_normal_form, solve
from ttg.rings import (
    DEFAULT_LIMITS,
    FactorLimits,
    Frac,
    IntegerRing,
    LocalizedRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    SpcPoint,
    Z,
    ZeroRing,
    element_in_point,
    enumerate_points,
    factor_element,
    localize_ring,
    monic_irreducibles,
    nilradical_quotient,
    primes_up_to,
    ring_from_json,
)

from tests.oracles import invariant_factors_by_minors

F2T = PolynomialRing(2)
F3T = PolynomialRing(3)
Z12 = QuotientRing(Z, 12)
Z4 = QuotientRing(Z, 4)
L2 = localize_ring(Z, 2)
L6 = localize_ring(Z, 6)
LT = localize_ring(F2T, (0, 1))
PROD = ProductRing((Z4, QuotientRing(Z, 3)))

ALL_RINGS = [Z, F2T, F3T, Z12, Z4, L2, L6, LT, PROD, ZeroRing()]


# ---------------------------------------------------------------------------
# arithmetic laws
# ---------------------------------------------------------------------------

small_ints = st.integers(min_value=-30, max_value=30)


@st.composite
def ring_and_elements(draw, count=3):
    ring = draw(st.sampled_from(ALL_RINGS))
    elems = [ring.from_int(draw(small_ints)) for _ in range(count)]
    if isinstance(ring, PolynomialRing):
        elems[0] = ring.add(elems[0], ring.variable())
    if isinstance(ring, LocalizedRing):
        elems[1] = ring.canon(elems[1].num, draw(st.integers(0, 3)))
    return ring, elems


@given(ring_and_elements())
def test_ring_axioms(data):
    ring, (a, b, c) = data
    assert ring.add(a, b) == ring.add(b, a)
    assert ring.mul(a, b) == ring.mul(b, a)
    assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
    assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
    assert ring.add(a, ring.neg(a)) == ring.zero()
    assert ring.mul(a, ring.one()) == a
    assert ring.is_element(a) and ring.is_element(ring.mul(a, b))


@given(ring_and_elements())
def test_unit_inverse(data):
    ring, elems = data
    for a in elems:
        if ring.is_unit(a):
            assert ring.mul(a, ring.unit_inverse(a)) == ring.one()


@given(ring_and_elements(count=2))
def test_exact_division(data):
    ring, (a, b) = data
    if isinstance(ring, (ProductRing, ZeroRing)):
        return
    prod = ring.mul(a, b)
    if ring.is_zero(a):
        return
    assert ring.divides(a, prod)
    q = ring.exact_div(prod, a)
    assert ring.mul(a, q) == prod


def test_localized_canonical_form():
    assert L2.canon(12, 1) == Frac(3, 0)
    assert L2.canon(0, 5) == Frac(0, 0)
    assert L6.canon(12, 1) == Frac(2, 0)
    assert L6.canon(3, 1) == Frac(3, 1)  # 3/6 = 1/2 stays a genuine fraction
    assert L2.add(Frac(1, 1), Frac(1, 1)) == Frac(1, 0)
    assert L2.is_unit(Frac(4, 0)) and L2.is_unit(Frac(1, 3))
    assert not L2.is_unit(Frac(3, 1))
    assert L6.is_unit(L6.from_int(4))  # 4 divides a power of 6
    assert L6.mul(L6.from_int(4), L6.unit_inverse(L6.from_int(4))) == L6.one()


def test_quotient_reduce_and_units():
    assert Z12.from_int(14) == 2
    assert Z12.is_unit(5) and not Z12.is_unit(2)
    assert Z12.mul(5, Z12.unit_inverse(5)) == 1
    f4 = QuotientRing(F2T, (1, 1, 1))
    w = f4.reduce((0, 1))
    assert f4.mul(w, f4.unit_inverse(w)) == f4.one()
    assert f4.is_domain()
    assert not Z12.is_domain()


def test_descriptor_validation():
    with pytest.raises(ValueError):
        QuotientRing(Z, 1)
    with pytest.raises(ValueError):
        QuotientRing(Z, 0)
    with pytest.raises(ValueError):
        ProductRing((Z4,))
    with pytest.raises(ValueError):
        ProductRing((PROD, Z4))
    with pytest.raises(UnsupportedRing):
        QuotientRing(Z12, 2)


def test_ring_json_roundtrip():
    for ring in ALL_RINGS:
        assert ring_from_json(ring.to_json()) == ring
        for x in [ring.zero(), ring.one(), ring.from_int(7)]:
            assert ring.element_from_json(ring.element_to_json(x)) == x


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def check_smith(m):
    ring = m.ring
    s = smith_normal_form(m)
    assert (s.u @ m @ s.v).entries == s.d.entries
    assert ring.is_unit(determinant(s.u))
    assert ring.is_unit(determinant(s.v))
    diag = [d for d in s.diagonal if not ring.is_zero(d)]
    for a, b in zip(diag, diag[1:]):
        assert ring.divides(a, b)
    for i in range(s.d.rows):
        for j in range(s.d.cols):
            if i != j:
                assert ring.is_zero(s.d.entries[i][j])
    return s


def test_smith_examples():
    s = check_smith(Matrix.build(Z, [[2, 0], [0, 3]]))
    assert s.diagonal == (1, 6)
    s = check_smith(Matrix.zeros(Z, 2, 2))
    assert s.diagonal == (0, 0)
    assert s.u.entries == Matrix.identity(Z, 2).entries
    assert s.v.entries == Matrix.identity(Z, 2).entries
    s = check_smith(Matrix.build(F2T, [[(0, 1), (0, 0, 1)]]))
    assert s.diagonal == ((0, 1),)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_smith_random_integer(rows, cols, data):
    entries = [
        [data.draw(st.integers(-9, 9)) for _ in range(cols)] for _ in range(rows)
    ]
    m = Matrix.build(Z, entries, rows, cols)
    s = check_smith(m)
    nonzero = [d for d in s.diagonal if d]
    assert nonzero == invariant_factors_by_minors(m)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_smith_random_poly(data):
    rows, cols = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    def poly():
        return tuple(data.draw(st.integers(0, 1)) for _ in range(data.draw(st.integers(0, 3))))
    entries = [[F2T.element_from_json(list(poly())) for _ in range(cols)] for _ in range(rows)]
    m = Matrix.build(F2T, entries, rows, cols)
    s = check_smith(m)
    nonzero = [d for d in s.diagonal if d]
    assert nonzero == invariant_factors_by_minors(m)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_smith_random_localized(data):
    rows, cols = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    entries = [
        [L6.canon(data.draw(st.integers(-8, 8)), data.draw(st.integers(0, 2))) for _ in range(cols)]
        for _ in range(rows)
    ]
    m = Matrix.build(L6, entries, rows, cols)
    check_smith(m)


def test_smith_rejects_quotients():
    with pytest.raises(UnsupportedRing):
        smith_normal_form(Matrix.build(Z12, [[2]]))


def test_kernel_and_solve():
    k = kernel_basis(Matrix.build(Z, [[2, 4]]))
    assert k.cols == 1 and k.entries in (((-2,), (1,)), ((2,), (-1,)))
    assert solve(Matrix.build(Z, [[2, 0], [0, 3]]), [4, 9]) == (2, 3)
    assert solve(Matrix.build(Z, [[2]]), [3]) is None
    assert solve(Matrix.build(Z, [[0, 0]]), [1]) is None


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


def test_factor_examples():
    assert factor_element(Z, 12) == (1, ((2, 2), (3, 1)))
    assert factor_element(Z, 1) == (1, ())
    assert factor_element(Z, -18) == (-1, ((2, 1), (3, 2)))
    unit, factors = factor_element(F2T, (0, 1, 1))  # t^2 + t
    assert unit == (1,) and factors == (((0, 1), 1), ((1, 1), 1))
    with pytest.raises(ValueError):
        factor_element(Z, 0)
    with pytest.raises(FactorBoundExceeded):
        factor_element(Z, 10**13, FactorLimits(max_abs=10**12))
    with pytest.raises(UnsupportedRing):
        factor_element(Z12, 4)


@given(st.integers(-4000, 4000).filter(lambda n: n != 0))
def test_factor_recomposition(n):
    unit, factors = factor_element(Z, n)
    rebuilt = unit
    for p, e in factors:
        assert p > 1 and all(p % q for q in range(2, p))  # primality, brute force
        rebuilt *= p**e
    assert rebuilt == n


def test_factor_localized():
    unit, factors = factor_element(L6, Frac(45, 1))
    assert factors == ((5, 1),)
    rebuilt = unit
    for p, e in factors:
        for _ in range(e):
            rebuilt = L6.mul(rebuilt, L6.from_base(p))
    assert rebuilt == Frac(45, 1)


def test_monic_irreducibles():
    assert monic_irreducibles(2, 2) == [(0, 1), (1, 1), (1, 1, 1)]
    degree_three = [f for f in monic_irreducibles(2, 3) if len(f) == 4]
    assert degree_three == [(1, 1, 0, 1), (1, 0, 1, 1)] or set(degree_three) == {
        (1, 1, 0, 1),
        (1, 0, 1, 1),
    }


# ---------------------------------------------------------------------------
# nilradical
# ---------------------------------------------------------------------------


def test_nilradical_examples():
    reduced, project = nilradical_quotient(Z12)
    assert reduced == QuotientRing(Z, 6)
    assert project(6) == 0 and project(4) == 4
    assert nilradical_quotient(Z)[0] == Z
    f2t2 = QuotientRing(F2T, (0, 0, 1))
    reduced_t, project_t = nilradical_quotient(f2t2)
    assert reduced_t == QuotientRing(F2T, (0, 1))
    assert project_t((0, 1)) == ()


@pytest.mark.parametrize("ring", [Z12, Z4, QuotientRing(Z, 9), QuotientRing(F2T, (0, 0, 1)), PROD])
def test_nilradical_exhaustive(ring):
    # reducedness: the projection kills exactly the nilpotents, checked by powering
    reduced, project = nilradical_quotient(ring)
    for x in ring.elements():
        is_nilpotent = False
        power = x
        for _ in range(8):
            power = ring.mul(power, power)
            if ring.is_zero(power):
                is_nilpotent = True
                break
        assert is_nilpotent == reduced.is_zero(project(x))
    # idempotence
    reduced2, _ = nilradical_quotient(reduced)
    assert reduced2 == reduced


# ---------------------------------------------------------------------------
# points of Spec
# ---------------------------------------------------------------------------


def test_enumerate_points_examples():
    enum = enumerate_points(Z12, 5)
    assert enum.complete
    assert [(p.component, p.prime) for p in enum.points] == [(0, 2), (0, 3)]

    enum_z = enumerate_points(Z, 10)
    assert not enum_z.complete
    assert [p.prime for p in enum_z.points] == [None, 2, 3, 5, 7]

    f2tq = QuotientRing(F2T, (0, 1, 1))  # t^2 + t
    enum_t = enumerate_points(f2tq, 3)
    assert enum_t.complete
    assert [p.prime for p in enum_t.points] == [(0, 1), (1, 1)]

    enum_l = enumerate_points(L6, 10)
    assert [p.prime for p in enum_l.points] == [None, 5, 7]

    enum_p = enumerate_points(PROD, 5)
    assert [(p.component, p.prime) for p in enum_p.points] == [(0, 2), (1, 3)]
    assert enum_p.complete

    assert enumerate_points(ZeroRing(), 3).points == ()


@pytest.mark.parametrize("ring", [Z12, Z4, QuotientRing(Z, 30), QuotientRing(F2T, (0, 1, 1)), PROD])
def test_points_are_maximal_ideals(ring):
    # every nonunit of a finite ring lies in at least one enumerated point
    enum = enumerate_points(ring, 3)
    for x in ring.elements():
        if ring.is_unit(x):
            assert not any(
                element_in_point(ring, pt, x) for pt in enum.points
            )
        else:
            assert any(element_in_point(ring, pt, x) for pt in enum.points)


def test_primes_up_to():
    assert primes_up_to(13) == [2, 3, 5, 7, 11, 13]
    assert primes_up_to(1) == []


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------


def test_localize_examples():
    assert localize_ring(Z, 2) == LocalizedRing(Z, 2)
    assert localize_ring(Z12, 2) == QuotientRing(Z, 3)
    assert localize_ring(F2T, (0, 1)) == LocalizedRing(F2T, (0, 1))
    assert localize_ring(Z4, 2) == ZeroRing()
    assert localize_ring(Z, -1) == Z
    assert localize_ring(Z, 4) == LocalizedRing(Z, 2)  # squarefree canonicalization
    assert localize_ring(Z, 12) == LocalizedRing(Z, 6)
    with pytest.raises(ValueError):
        localize_ring(Z, 0)


def test_localize_composition_closed():
    step = localize_ring(localize_ring(Z, 2), Frac(3, 0))
    assert step == localize_ring(Z, 6)


@pytest.mark.parametrize(
    "ring,f,bound",
    [(Z, 2, 12), (Z, 6, 12), (Z12, 2, 5), (F2T, (0, 1), 2), (QuotientRing(Z, 30), 6, 7)],
)
def test_localize_point_filter(ring, f, bound):
    localized = localize_ring(ring, f)
    pts_loc = {p.prime for p in enumerate_points(localized, bound).points}
    pts_kept = {
        p.prime
        for p in enumerate_points(ring, bound).points
        if p.is_generic or not element_in_point(ring, p, f)
    }
    assert pts_loc == pts_kept


def test_product_localization_keeps_shape():
    localized = localize_ring(PROD, (2, 1))
    assert isinstance(localized, ProductRing)
    assert isinstance(localized.factors[0], ZeroRing)
    assert localized.factors[1] == QuotientRing(Z, 3)
