import numpy as np
import pytest

from vilenkin import (
    GeneratorSequence,
    GridFunction,
    SpectralVector,
    cylinder_indices,
    dirichlet,
    fejer_kernel,
    fejer_mean,
    forward_transform,
    group_sub,
    index_point,
    inverse_transform,
    lebesgue_constant,
    naive_forward_transform,
    partial_sum,
    point_index,
    rademacher,
    vilenkin_fn,
)

from conftest import random_function

WALSH = GeneratorSequence.walsh(3)


def brute_convolution(f: GridFunction, g: GridFunction) -> GridFunction:
    """(f * g)(x) = integral of f(x - t) g(t) dmu(t), by direct enumeration."""
    gen = f.gen
    out = np.zeros(gen.size, dtype=np.complex128)
    pts = [index_point(gen, i) for i in range(gen.size)]
    for xi, x in enumerate(pts):
        acc = 0.0 + 0.0j
        for ti, t in enumerate(pts):
            acc += f.values[point_index(group_sub(x, t, gen), gen)] * g.values[ti]
        out[xi] = acc / gen.size
    return GridFunction(gen, out)


# --- characters --------------------------------------------------------------


def test_rademacher_walsh_signs():
    r0 = rademacher(0, WALSH).values
    assert np.allclose(r0[point_index((0, 0, 0), WALSH)], 1.0)
    assert np.allclose(r0[point_index((1, 0, 0), WALSH)], -1.0)


def test_rademacher_quartic_root():
    g = GeneratorSequence((4, 2))
    r0 = rademacher(0, g).values
    assert np.allclose(r0[point_index((1, 0), g)], 1j)


def test_rademacher_mean_zero_and_unimodular(gen):
    for k in range(gen.depth):
        r = rademacher(k, gen)
        assert abs(np.mean(r.values)) < 1e-12
        assert np.allclose(np.abs(r.values), 1.0)
        assert np.allclose(r.values ** gen.m[k], 1.0)


def test_rademacher_rejects_deep_rank(gen):
    with pytest.raises(ValueError):
        rademacher(gen.depth, gen)


def test_vilenkin_zeroth_constant(gen):
    assert np.allclose(vilenkin_fn(0, gen).values, 1.0)


def test_vilenkin_walsh_product():
    psi3 = vilenkin_fn(3, WALSH).values
    prod = rademacher(0, WALSH).values * rademacher(1, WALSH).values
    assert np.allclose(psi3, prod)


def test_vilenkin_multiplicative(gen, rng):
    from vilenkin import group_add

    for _ in range(15):
        n = int(rng.integers(gen.size))
        psi = vilenkin_fn(n, gen).values
        xi = int(rng.integers(gen.size))
        yi = int(rng.integers(gen.size))
        x, y = index_point(gen, xi), index_point(gen, yi)
        zi = point_index(group_add(x, y, gen), gen)
        assert psi[zi] == pytest.approx(psi[xi] * psi[yi])


def test_gram_matrix_identity(gen):
    mat = np.stack([vilenkin_fn(n, gen).values for n in range(gen.size)])
    gram = mat @ mat.conj().T / gen.size
    assert np.max(np.abs(gram - np.eye(gen.size))) < 1e-12


# --- transforms --------------------------------------------------------------


def test_transform_of_character_is_unit_vector(gen):
    coeffs = forward_transform(vilenkin_fn(3 % gen.size, gen)).coeffs
    expected = np.zeros(gen.size)
    expected[3 % gen.size] = 1.0
    assert np.max(np.abs(coeffs - expected)) < 1e-12


def test_transform_of_point_mass_is_flat(gen):
    v = np.zeros(gen.size)
    v[0] = gen.size
    coeffs = forward_transform(GridFunction(gen, v)).coeffs
    assert np.max(np.abs(coeffs - 1.0)) < 1e-12


def test_fast_matches_naive(gen, rng):
    f = random_function(gen, rng)
    fast = forward_transform(f).coeffs
    ref = naive_forward_transform(f).coeffs
    assert np.max(np.abs(fast - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref)))


def test_round_trip_depth10():
    g = GeneratorSequence.walsh(10)
    rng = np.random.default_rng(11)
    f = GridFunction(g, rng.normal(size=g.size) + 1j * rng.normal(size=g.size))
    back = inverse_transform(forward_transform(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-10


def test_parseval(gen, rng):
    f = random_function(gen, rng)
    coeffs = forward_transform(f).coeffs
    assert np.sum(np.abs(coeffs) ** 2) == pytest.approx(
        np.mean(np.abs(f.values) ** 2)
    )


def test_convolution_theorem(gen, rng):
    f = random_function(gen, rng)
    g = random_function(gen, rng)
    conv = brute_convolution(f, g)
    lhs = forward_transform(conv).coeffs
    rhs = forward_transform(f).coeffs * forward_transform(g).coeffs
    assert np.max(np.abs(lhs - rhs)) < 1e-10


# --- kernels -----------------------------------------------------------------


def test_dirichlet_one_is_constant(gen):
    assert np.allclose(dirichlet(1, gen).values, 1.0)


def test_dirichlet_matches_character_sum(gen):
    for n in range(1, gen.size + 1):
        ref = np.sum([vilenkin_fn(k, gen).values for k in range(n)], axis=0)
        assert np.max(np.abs(dirichlet(n, gen).values - ref)) < 1e-10


def test_dirichlet_at_scale_walsh():
    d4 = dirichlet(4, WALSH).values
    inside = cylinder_indices((0, 0, 0), 2, WALSH)
    assert np.allclose(d4[inside], 4.0)
    outside = np.setdiff1d(np.arange(8), inside)
    assert np.max(np.abs(d4[outside])) < 1e-12


def test_dirichlet_three_hand_values():
    d3 = dirichlet(3, WALSH).values
    cells = {(0, 0): 3, (0, 1): 1, (1, 0): 1, (1, 1): -1}
    for (x0, x1), expected in cells.items():
        assert d3[point_index((x0, x1, 0), WALSH)] == pytest.approx(expected)


def test_dirichlet_range_validation(gen):
    with pytest.raises(ValueError):
        dirichlet(0, gen)
    with pytest.raises(ValueError):
        dirichlet(gen.size + 1, gen)


def test_fejer_kernel_base_cases(gen):
    assert np.allclose(fejer_kernel(1, gen).values, 0.0)
    if gen.m[0] == 2:
        assert np.allclose(fejer_kernel(2, WALSH).values, 0.5)


def test_fejer_kernel_matches_dirichlet_average(gen):
    for n in range(1, gen.size + 1):
        ref = np.zeros(gen.size, dtype=np.complex128)
        for k in range(1, n):  # D_0 = 0
            ref += dirichlet(k, gen).values
        ref /= n
        assert np.max(np.abs(fejer_kernel(n, gen).values - ref)) < 1e-10


def test_fejer_kernel_telescoping_walsh():
    lhs = 5 * fejer_kernel(5, WALSH).values
    rhs = 4 * fejer_kernel(4, WALSH).values + dirichlet(4, WALSH).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# --- partial sums and Fejer means -------------------------------------------


def test_partial_sum_conventions(gen, rng):
    f = random_function(gen, rng)
    assert np.allclose(partial_sum(f, 0).values, 0.0)
    assert np.max(np.abs(partial_sum(f, gen.size).values - f.values)) < 1e-10


def test_partial_sum_spectral_truncation():
    f = vilenkin_fn(3, WALSH)
    assert np.max(np.abs(partial_sum(f, 3).values)) < 1e-12
    assert np.max(np.abs(partial_sum(f, 4).values - f.values)) < 1e-12


def test_fejer_mean_of_constant(gen):
    f = vilenkin_fn(0, gen)
    for n in range(1, gen.size + 1):
        assert np.allclose(fejer_mean(f, n).values, (n - 1) / n)


def test_fejer_mean_first_is_zero(gen, rng):
    f = random_function(gen, rng)
    assert np.allclose(fejer_mean(f, 1).values, 0.0)


def test_fejer_mean_matches_average_of_partial_sums(gen, rng):
    f = random_function(gen, rng)
    for n in (1, 2, 3, gen.size // 2, gen.size):
        ref = np.zeros(gen.size, dtype=np.complex128)
        for k in range(n):
            ref += partial_sum(f, k).values
        ref /= n
        assert np.max(np.abs(fejer_mean(f, n).values - ref)) < 1e-10


def test_fejer_mean_is_kernel_convolution(gen, rng):
    f = random_function(gen, rng)
    for n in (2, 3, 5):
        conv = brute_convolution(f, fejer_kernel(n, gen))
        assert np.max(np.abs(fejer_mean(f, n).values - conv.values)) < 1e-10


# --- Lebesgue constants ------------------------------------------------------


def test_lebesgue_at_scales(gen):
    for n in range(gen.depth + 1):
        assert lebesgue_constant(gen.scale[n], gen) == pytest.approx(1.0)


def test_lebesgue_walsh_hand_values():
    assert lebesgue_constant(2, WALSH) == pytest.approx(1.0)
    assert lebesgue_constant(3, WALSH) == pytest.approx(1.5)


def test_spectral_vector_validation():
    with pytest.raises(ValueError):
        SpectralVector(WALSH, np.ones(3))
