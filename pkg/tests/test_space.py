"""Spaces, elements, norms, pairing, restriction, embedding."""

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bochnerproj import (
    BochnerElement,
    BochnerSpaceSpec,
    DualElement,
    InnerNormSpec,
    MeasureSpace,
    SpaceMismatchError,
    SupportSet,
    indicator,
    norm_lp,
    norm_lq,
    norm_x,
    pairing,
    restrict,
    restrict_complement,
    simple_embed,
    zeros,
)


def make_space(weights, d=1, rho=2.0, p=2.0):
    return BochnerSpaceSpec(MeasureSpace(weights), InnerNormSpec(d, rho), p)


def test_norm_x_euclidean_three_four_five():
    xn = InnerNormSpec(2, 2.0)
    assert norm_x(xn, np.array([3.0, 4.0])) == 5.0


def test_norm_x_zero_vector():
    for rho in (1.5, 2.0, 3.0):
        assert norm_x(InnerNormSpec(3, rho), np.zeros(3)) == 0.0


def test_norm_x_rho3_matches_high_precision():
    # (1^3 + 1^3)^(1/3) evaluated at 50 digits
    mpmath.mp.dps = 50
    expected = float(mpmath.power(2, mpmath.mpf(1) / 3))
    got = norm_x(InnerNormSpec(2, 3.0), np.array([1.0, 1.0]))
    assert abs(got - expected) < 1e-15


def test_norm_lp_single_atom_is_inner_norm():
    space = make_space([1.0], d=3, rho=2.5, p=1.7)
    x = np.array([0.3, -1.2, 2.0])
    f = BochnerElement(space, x[None, :])
    assert norm_lp(f) == pytest.approx(norm_x(space.x_norm, x), abs=1e-15)


def test_norm_lp_two_atoms_p3():
    space = make_space([1.0, 1.0], d=1, rho=2.0, p=3.0)
    f = BochnerElement(space, np.array([[1.0], [1.0]]))
    assert norm_lp(f) == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-15)


def test_norm_lp_zero_element():
    space = make_space([0.5, 2.0, 1.0], d=2, rho=1.5, p=3.0)
    assert norm_lp(zeros(space)) == 0.0


@given(
    st.lists(st.floats(-5, 5), min_size=4, max_size=4),
    st.lists(st.floats(-5, 5), min_size=4, max_size=4),
)
@settings(max_examples=150, deadline=None)
def test_norm_lp_triangle_inequality(a, b):
    space = make_space([0.7, 1.3], d=2, rho=1.5, p=3.0)
    f = BochnerElement(space, np.reshape(a, (2, 2)))
    g = BochnerElement(space, np.reshape(b, (2, 2)))
    assert norm_lp(f + g) <= norm_lp(f) + norm_lp(g) + 1e-12


@given(
    st.lists(st.floats(-5, 5), min_size=4, max_size=4),
    st.floats(-4, 4),
)
@settings(max_examples=150, deadline=None)
def test_norm_lp_absolute_homogeneity(a, lam):
    space = make_space([0.7, 1.3], d=2, rho=3.0, p=1.5)
    f = BochnerElement(space, np.reshape(a, (2, 2)))
    assert norm_lp(lam * f) == pytest.approx(abs(lam) * norm_lp(f), abs=1e-12, rel=1e-12)


def test_pairing_is_weighted_dot_product():
    space = make_space([1.0], d=2, rho=2.0, p=2.0)
    phi = DualElement(space, np.array([[1.0, 2.0]]))
    f = BochnerElement(space, np.array([[3.0, 4.0]]))
    assert pairing(phi, f) == 11.0


def test_pairing_zero_functional():
    space = make_space([1.0, 2.0], d=3, rho=1.5, p=3.0)
    phi = DualElement(space, np.zeros((2, 3)))
    f = BochnerElement(space, np.ones((2, 3)))
    assert pairing(phi, f) == 0.0


def test_pairing_hoelder_bound_bulk():
    rng = np.random.default_rng(7)
    for p, rho in ((1.5, 3.0), (2.0, 2.0), (3.0, 1.5)):
        space = make_space(rng.uniform(0.3, 2.0, 4), d=3, rho=rho, p=p)
        for _ in range(3000):
            phi = DualElement(space, rng.standard_normal((4, 3)))
            f = BochnerElement(space, rng.standard_normal((4, 3)))
            bound = norm_lq(phi) * norm_lp(f)
            assert abs(pairing(phi, f)) <= bound + 1e-12 * (1.0 + bound)


def test_pairing_requires_same_space():
    s1 = make_space([1.0], d=1)
    s2 = make_space([2.0], d=1)
    with pytest.raises(SpaceMismatchError):
        pairing(DualElement(s1, np.ones((1, 1))), BochnerElement(s2, np.ones((1, 1))))


def test_restrict_full_support_is_identity():
    space = make_space([1.0, 1.0, 1.0], d=2)
    f = BochnerElement(space, np.arange(6.0).reshape(3, 2))
    a = SupportSet(space, [0, 1, 2])
    assert np.array_equal(restrict(f, a).values, f.values)


def test_restrict_of_complement_supported_is_zero():
    space = make_space([1.0, 1.0], d=1)
    a = SupportSet(space, [0])
    f = BochnerElement(space, np.array([[0.0], [5.0]]))
    assert not restrict(f, a).values.any()


def test_restrict_commutes_with_scaling():
    rng = np.random.default_rng(11)
    space = make_space(rng.uniform(0.5, 2.0, 4), d=2, rho=1.5, p=3.0)
    a = SupportSet(space, [1, 3])
    for _ in range(50):
        f = BochnerElement(space, rng.standard_normal((4, 2)))
        lam = float(rng.uniform(-3, 3))
        assert np.array_equal(restrict(lam * f, a).values, (lam * restrict(f, a)).values)


def test_restrict_is_idempotent_and_splits_exactly():
    rng = np.random.default_rng(12)
    space = make_space(rng.uniform(0.5, 2.0, 5), d=3)
    a = SupportSet(space, [0, 2])
    f = BochnerElement(space, rng.standard_normal((5, 3)))
    fa = restrict(f, a)
    assert np.array_equal(restrict(fa, a).values, fa.values)
    back = fa + restrict_complement(f, a)
    assert np.array_equal(back.values, f.values)


def test_restrict_works_on_dual_elements():
    space = make_space([1.0, 1.0], d=1)
    a = SupportSet(space, [0])
    phi = DualElement(space, np.array([[1.0], [2.0]]))
    out = restrict(phi, a)
    assert isinstance(out, DualElement)
    assert out.values[1, 0] == 0.0


def test_simple_embed_zero_vector():
    space = make_space([2.0, 3.0], d=2)
    a = SupportSet(space, [0, 1])
    assert not simple_embed(a, np.zeros(2)).values.any()


def test_simple_embed_unit_mass_equals_indicator():
    space = make_space([1.0, 4.0], d=2, rho=1.5, p=2.5)
    a = SupportSet(space, [0])
    x = np.array([1.5, -0.5])
    emb = simple_embed(a, x)
    assert np.allclose(emb.values[0], x, atol=1e-15)


def test_simple_embed_mass_eight_p3():
    # weight 8 on one atom, p = 3: the embedded value is x / 2, norm is ||x||
    space = make_space([8.0], d=1, rho=2.0, p=3.0)
    a = SupportSet(space, [0])
    emb = simple_embed(a, np.array([2.0]))
    assert emb.values[0, 0] == pytest.approx(1.0, abs=1e-15)
    assert norm_lp(emb) == pytest.approx(2.0, abs=1e-14)


def test_simple_embed_is_isometry_random():
    rng = np.random.default_rng(13)
    for p, rho in ((1.5, 3.0), (3.0, 1.5), (2.0, 2.0)):
        space = make_space(rng.uniform(0.3, 2.0, 4), d=3, rho=rho, p=p)
        a = SupportSet(space, rng.choice(4, size=2, replace=False))
        for _ in range(200):
            x = rng.standard_normal(3) * rng.uniform(0.1, 4.0)
            err = abs(norm_lp(simple_embed(a, x)) - norm_x(space.x_norm, x))
            assert err <= 1e-12 * (1.0 + norm_x(space.x_norm, x))


def test_indicator_places_vector_on_support():
    space = make_space([1.0, 1.0, 1.0], d=2)
    a = SupportSet(space, [1])
    x = np.array([2.0, -1.0])
    ind = indicator(a, x)
    assert np.array_equal(ind.values[1], x)
    assert not ind.values[[0, 2]].any()


def test_element_shape_validation():
    space = make_space([1.0, 1.0], d=2)
    with pytest.raises(ValueError):
        BochnerElement(space, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        BochnerElement(space, np.array([[1.0, np.nan], [0.0, 0.0]]))


def test_cross_space_arithmetic_rejected():
    s1 = make_space([1.0], d=1)
    s2 = make_space([2.0], d=1)
    f = BochnerElement(s1, np.ones((1, 1)))
    g = BochnerElement(s2, np.ones((1, 1)))
    with pytest.raises(SpaceMismatchError):
        f + g
    with pytest.raises(TypeError):
        f + DualElement(s1, np.ones((1, 1)))


def test_measure_space_validation():
    with pytest.raises(ValueError):
        MeasureSpace([])
    with pytest.raises(ValueError):
        MeasureSpace([1.0, 0.0])
    with pytest.raises(ValueError):
        MeasureSpace([1.0, -2.0])


def test_exponent_validation():
    with pytest.raises(ValueError):
        InnerNormSpec(2, 1.0)
    with pytest.raises(ValueError):
        InnerNormSpec(0, 2.0)
    with pytest.raises(ValueError):
        BochnerSpaceSpec(MeasureSpace([1.0]), InnerNormSpec(1, 2.0), 1.0)


def test_conjugate_exponents():
    space = make_space([1.0], p=3.0)
    assert 1.0 / space.p + 1.0 / space.q == pytest.approx(1.0, abs=1e-15)
    xn = InnerNormSpec(2, 1.5)
    assert 1.0 / xn.rho + 1.0 / xn.rho_dual == pytest.approx(1.0, abs=1e-15)


def test_support_set_validation_and_complement():
    space = make_space([1.0, 1.0, 1.0])
    a = SupportSet(space, [2, 0])
    assert list(a.indices) == [0, 2]
    assert list(a.complement_indices) == [1]
    assert a.measure == 2.0
    with pytest.raises(ValueError):
        SupportSet(space, [])
    with pytest.raises(ValueError):
        SupportSet(space, [3])
    full = SupportSet(space, [0, 1, 2])
    assert full.is_full
    with pytest.raises(ValueError):
        full.complement()
