import math

import numpy as np
import pytest

from helpers import (
    L_HEXAGON,
    RIGHT_TRIANGLE,
    UNIT_SQUARE,
    fem_triangle_stiffness,
    random_triangle,
    star_polygon,
)
from polyvem.errors import ElementAssemblyError, ForcingEvaluationError
from polyvem.local import (
    build_Btilde,
    build_D,
    build_G,
    build_local_forcing,
    build_local_stiffness,
    build_projector,
    local_matrices,
    monomial_gradients,
    scaled_monomials,
)
from polyvem.mesh import element_geometry

SQRT2 = math.sqrt(2.0)

# Independently derived by exact symbolic evaluation of the projection
# and penalty products on the unit square.
UNIT_SQUARE_K = np.array(
    [
        [0.75, -0.25, -0.25, -0.25],
        [-0.25, 0.75, -0.25, -0.25],
        [-0.25, -0.25, 0.75, -0.25],
        [-0.25, -0.25, -0.25, 0.75],
    ]
)

# Linear FEM stiffness of the unit right triangle.
RIGHT_TRIANGLE_K = 0.5 * np.array([[2.0, -1.0, -1.0], [-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]])


def random_polygons(rng, count, max_vertices=13):
    for _ in range(count):
        yield star_polygon(rng, int(rng.integers(3, max_vertices)))


def test_scaled_monomials_basis_values():
    geometry = element_geometry(UNIT_SQUARE)
    values = scaled_monomials(geometry, [(0.5, 0.5), (1.0, 0.5)])
    assert values[0] == pytest.approx([1.0, 0.0, 0.0], abs=1e-15)
    assert values[1] == pytest.approx([1.0, 0.5 / SQRT2, 0.0], abs=1e-15)
    gradients = monomial_gradients(geometry)
    np.testing.assert_allclose(
        gradients, [[0.0, 0.0], [1.0 / SQRT2, 0.0], [0.0, 1.0 / SQRT2]], atol=1e-15
    )


def test_build_D_constant_column_is_ones(rng):
    for poly in random_polygons(rng, 10):
        D = build_D(element_geometry(poly), poly)
        assert (D[:, 0] == 1.0).all()


def test_build_D_unit_square_column():
    D = build_D(element_geometry(UNIT_SQUARE), UNIT_SQUARE)
    expected = np.array([-0.5, 0.5, 0.5, -0.5]) / SQRT2
    assert D[:, 1] == pytest.approx(expected, abs=1e-15)
    assert D[:, 2] == pytest.approx(np.array([-0.5, -0.5, 0.5, 0.5]) / SQRT2, abs=1e-15)


def test_build_D_translation_invariant(rng):
    poly = star_polygon(rng, 9)
    moved = poly + np.array([13.0, -4.0])
    D = build_D(element_geometry(poly), poly)
    D_moved = build_D(element_geometry(moved), moved)
    assert D_moved == pytest.approx(D, abs=1e-12)


def test_build_Btilde_unit_square_rows():
    Btilde = build_Btilde(element_geometry(UNIT_SQUARE), UNIT_SQUARE)
    assert (Btilde[0] == 0.25).all()
    expected = np.array([-1.0, 1.0, 1.0, -1.0]) / (2.0 * SQRT2)
    assert Btilde[1] == pytest.approx(expected, abs=1e-15)


def test_build_Btilde_gradient_rows_sum_to_zero(rng):
    for poly in random_polygons(rng, 20):
        Btilde = build_Btilde(element_geometry(poly), poly)
        assert abs(Btilde[1].sum()) <= 1e-13
        assert abs(Btilde[2].sum()) <= 1e-13


def test_build_G_unit_square():
    G = build_G(element_geometry(UNIT_SQUARE))
    assert G == pytest.approx(np.diag([0.0, 0.5, 0.5]), abs=1e-15)


def test_build_G_agrees_with_zero_row_product(rng):
    # B is Btilde with the vertex-average row zeroed; G must equal B @ D
    for poly in random_polygons(rng, 20):
        geometry = element_geometry(poly)
        D = build_D(geometry, poly)
        B = build_Btilde(geometry, poly).copy()
        B[0] = 0.0
        G = build_G(geometry)
        assert np.abs(B @ D - G).max() <= 1e-13
        assert G[1, 2] == 0.0 and G[2, 1] == 0.0


def test_gtilde_matches_G_in_gradient_rows(rng):
    for poly in random_polygons(rng, 20):
        lm = local_matrices(poly)
        assert np.abs(lm.Gtilde[1:] - lm.G[1:]).max() <= 1e-13


def test_projector_preserves_constants(rng):
    for poly in random_polygons(rng, 20):
        lm = local_matrices(poly)
        ones = np.ones(len(poly))
        assert lm.Pi @ ones == pytest.approx([1.0, 0.0, 0.0], abs=1e-13)


def test_projector_reproduces_polynomials(rng):
    for poly in random_polygons(rng, 50):
        lm = local_matrices(poly)
        assert np.abs(lm.Pi @ lm.D - np.eye(3)).max() <= 1e-13


def test_projector_unit_square_hat_function():
    geometry = element_geometry(UNIT_SQUARE)
    D = build_D(geometry, UNIT_SQUARE)
    Btilde = build_Btilde(geometry, UNIT_SQUARE)
    Gtilde, Pi = build_projector(D, Btilde)
    hat = np.array([1.0, 0.0, 0.0, 0.0])
    # independent dense-solver oracle for the same 3x3 system
    oracle = np.linalg.solve(Gtilde, Btilde @ hat)
    assert Pi @ hat == pytest.approx(oracle, abs=1e-14)
    # frozen closed form: (1/4, -sqrt(2)/2, -sqrt(2)/2)
    assert Pi @ hat == pytest.approx([0.25, -SQRT2 / 2.0, -SQRT2 / 2.0], abs=1e-14)


def test_projector_rejects_singular_system():
    with pytest.raises(ElementAssemblyError):
        build_projector(np.zeros((4, 3)), np.zeros((3, 4)))


def test_projector_rejects_ill_conditioned_system():
    sliver = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1e-13]])
    with pytest.raises(ElementAssemblyError, match="ill-conditioned"):
        local_matrices(sliver)


def test_stiffness_rows_sum_to_zero(rng):
    for poly in random_polygons(rng, 20):
        K = local_matrices(poly).K_local
        assert np.abs(K @ np.ones(len(poly))).max() <= 1e-12


def test_stiffness_right_triangle_equals_fem():
    K = local_matrices(RIGHT_TRIANGLE).K_local
    assert np.abs(K - RIGHT_TRIANGLE_K).max() <= 1e-13


def test_stiffness_random_triangles_match_cotangent_oracle(rng):
    for _ in range(100):
        triangle = random_triangle(rng)
        K = local_matrices(triangle).K_local
        assert np.abs(K - fem_triangle_stiffness(triangle)).max() <= 1e-12


def test_stiffness_unit_square_golden():
    K = local_matrices(UNIT_SQUARE).K_local
    assert np.abs(K - UNIT_SQUARE_K).max() <= 1e-13


def test_stabilisation_vanishes_on_polynomials(rng):
    # matrix-level patch test: the penalty ignores every column of D
    for poly in random_polygons(rng, 20):
        lm = local_matrices(poly)
        residual = (np.eye(len(poly)) - lm.D @ lm.Pi) @ lm.D
        assert np.abs(residual).max() <= 1e-12


def test_energy_consistency_for_linear_pairs(rng):
    for poly in random_polygons(rng, 20):
        lm = local_matrices(poly)
        area = lm.geometry.area
        a1, b1, c1, a2, b2, c2 = rng.uniform(-2.0, 2.0, 6)
        d1 = a1 + b1 * poly[:, 0] + c1 * poly[:, 1]
        d2 = a2 + b2 * poly[:, 0] + c2 * poly[:, 1]
        assert d1 @ lm.K_local @ d2 == pytest.approx(
            area * (b1 * b2 + c1 * c2), abs=1e-12, rel=1e-12
        )


def test_stiffness_spectrum(rng):
    shapes = list(random_polygons(rng, 30)) + [L_HEXAGON, UNIT_SQUARE]
    for poly in shapes:
        K = local_matrices(poly).K_local
        eigenvalues = np.linalg.eigvalsh(K)
        largest = eigenvalues[-1]
        assert largest > 0.0
        near_zero = np.abs(eigenvalues) < 1e-10 * largest
        assert near_zero.sum() == 1
        assert (eigenvalues[1:] > 0.0).all()


def test_rotation_invariance(rng):
    poly = star_polygon(rng, 8)
    lm = local_matrices(poly)
    consistency = lm.Pi.T @ lm.G @ lm.Pi
    for angle in (0.3, 1.2, 2.9):
        c, s = math.cos(angle), math.sin(angle)
        rotated = poly @ np.array([[c, s], [-s, c]])
        lm_rot = local_matrices(rotated)
        assert np.abs(lm_rot.Pi.T @ lm_rot.G @ lm_rot.Pi - consistency).max() <= 1e-12
        assert np.abs(lm_rot.K_local - lm.K_local).max() <= 1e-12


def test_local_forcing_zero_field():
    geometry = element_geometry(UNIT_SQUARE)
    assert (build_local_forcing(geometry, lambda x, y: 0.0) == 0.0).all()


def test_local_forcing_constant_field():
    geometry = element_geometry(UNIT_SQUARE)
    assert build_local_forcing(geometry, lambda x, y: 1.0) == pytest.approx(
        [0.25, 0.25, 0.25, 0.25], abs=1e-15
    )


def test_local_forcing_sine_field():
    geometry = element_geometry(UNIT_SQUARE)
    f = lambda x, y: 15.0 * math.sin(math.pi * x) * math.sin(math.pi * y)
    assert build_local_forcing(geometry, f) == pytest.approx([3.75] * 4, abs=1e-12)


def test_local_forcing_rejects_non_finite():
    geometry = element_geometry(UNIT_SQUARE)
    with pytest.raises(ForcingEvaluationError):
        build_local_forcing(geometry, lambda x, y: math.inf)


def test_local_matrices_without_forcing_has_zero_load():
    lm = local_matrices(UNIT_SQUARE)
    assert (lm.f_local == 0.0).all()


def test_local_stiffness_matches_factor_functions():
    lm = local_matrices(UNIT_SQUARE)
    K = build_local_stiffness(lm.D, lm.G, lm.Pi)
    assert np.array_equal(K, lm.K_local)
