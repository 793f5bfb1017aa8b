import numpy as np
import pytest
from numpy.testing import assert_allclose

from adnewton import fem
from adnewton.fem import DiscreteProblem
from adnewton.mesh import element_geometry, l_shape_mesh, unit_square_mesh
from adnewton.models import (ManufacturedProblem, constant_model, exact_solution,
                             model_experiment1, model_experiment2)


def manufactured(model):
    value, grad = exact_solution()
    return ManufacturedProblem(model=model, exact_value=value, exact_grad=grad)


def build(mesh, factory):
    model, constants = factory()
    return DiscreteProblem.build(mesh, model, constants, manufactured(model))


def dense_weighted_stiffness(mesh, weight):
    """Loop-based oracle: rows/cols over all vertices, coefficient weight(q) per element."""
    n = mesh.n_vertices
    a = np.zeros((n, n))
    for t in range(mesh.n_triangles):
        area, grads = element_geometry(mesh, t)
        vids = mesh.triangles[t]
        for i in range(3):
            for j in range(3):
                a[vids[i], vids[j]] += area * weight * (grads[i] @ grads[j])
    return a


@pytest.fixture(scope="module")
def square4():
    return unit_square_mesh(4)  # 9 interior DOFs


@pytest.fixture(scope="module")
def p1_square4(square4):
    return build(square4, model_experiment1)


def test_load_vector_finite_nonzero(square4):
    model, _ = model_experiment1()
    load = fem.load_vector(square4, model, manufactured(model))
    assert load.shape == (9,)
    assert np.isfinite(load).all()
    assert np.linalg.norm(load) > 0.0


def test_load_vector_linear_field_identity(square4):
    # with mu = 1 and the exact gradient replaced by a global linear field's
    # constant gradient, the load is exactly the (interior rows of the) full
    # stiffness matrix applied to the nodal values of that field
    model, constants = constant_model(1.0)
    a, b = 0.3, 0.7
    linear = ManufacturedProblem(
        model=model,
        exact_value=lambda x, y: a * x + b * y,
        exact_grad=lambda x, y: (np.full_like(x, a), np.full_like(y, b)))
    load = fem.load_vector(square4, model, linear)
    full = dense_weighted_stiffness(square4, 1.0)
    nodal = a * square4.vertices[:, 0] + b * square4.vertices[:, 1]
    expected = (full @ nodal)[square4.interior_vertices]
    assert_allclose(load, expected, atol=1e-13)


def test_load_vector_transposition_symmetry(square4):
    # swapping x and y maps the mesh onto itself and fixes sin(pi x) sin(pi y)
    model, _ = model_experiment1()
    load = fem.load_vector(square4, model, manufactured(model))
    pts = square4.vertices[square4.interior_vertices]
    perm = np.lexsort((pts[:, 0], pts[:, 1]))
    swapped = np.lexsort((pts[:, 1], pts[:, 0]))
    assert_allclose(load[perm], load[swapped], rtol=1e-13, atol=1e-15)


def test_load_vector_seven_point_rule_close(square4):
    # degree-2 vs degree-5 rule differ only by the quadrature consistency error
    model, _ = model_experiment1()
    load3 = fem.load_vector(square4, model, manufactured(model))
    load7 = fem.load_vector(square4, model, manufactured(model), rule=fem.SEVEN_POINT_RULE)
    assert np.linalg.norm(load3 - load7) <= 1e-2 * np.linalg.norm(load7)


def test_load_determinism(square4):
    model, _ = model_experiment1()
    a = fem.load_vector(square4, model, manufactured(model))
    b = fem.load_vector(square4, model, manufactured(model))
    assert (a == b).all()


def test_residual_at_zero_is_minus_load(p1_square4):
    u = np.zeros(9)
    assert_allclose(fem.residual(p1_square4, u), -p1_square4.load, rtol=0, atol=0)


def test_residual_constant_model_is_linear(square4):
    c = 2.5
    p = build(square4, lambda: constant_model(c))
    rng = np.random.default_rng(0)
    u = rng.standard_normal(9)
    full = dense_weighted_stiffness(square4, c)
    iv = square4.interior_vertices
    expected = full[np.ix_(iv, iv)] @ u - p.load
    assert_allclose(fem.residual(p, u), expected, atol=1e-12)


def test_residual_shape_check(p1_square4):
    with pytest.raises(ValueError):
        fem.residual(p1_square4, np.zeros(5))


def test_jacobian_at_zero_is_mu0_stiffness(square4, p1_square4):
    a = fem.jacobian(p1_square4, np.zeros(9)).toarray()
    s = fem.stiffness_matrix(square4).toarray()
    assert_allclose(a, p1_square4.model.mu(0.0) * s, rtol=1e-13)


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_jacobian_directional_derivative(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(11)
    u = rng.standard_normal(9)
    v = rng.standard_normal(9)
    a_v = fem.jacobian(p, u) @ v
    errors = []
    for eps in (1e-4, 1e-5, 1e-6):
        fd = (fem.residual(p, u + eps * v) - fem.residual(p, u)) / eps
        errors.append(np.linalg.norm(fd - a_v))
    # first-order decay in eps
    assert errors[1] <= 0.3 * errors[0]
    assert errors[2] <= 0.3 * errors[1]


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_jacobian_coercivity_sampled(square4, factory):
    p = build(square4, factory)
    s = fem.stiffness_matrix(square4)
    rng = np.random.default_rng(5)
    for _ in range(100):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        a = fem.jacobian(p, u)
        lhs = v @ (a @ v)
        rhs = p.model.m_mu * (v @ (s @ v))
        assert lhs >= rhs - 1e-12 * abs(lhs)


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_jacobian_symmetry(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(8)
    for _ in range(5):
        a = fem.jacobian(p, rng.standard_normal(9))
        asym = np.abs((a - a.T).toarray()).max()
        assert asym <= 1e-12 * np.abs(a.toarray()).max()


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_jacobian_boundedness_sampled(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(13)
    for _ in range(100):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        w = rng.standard_normal(9)
        lhs = abs(v @ (fem.jacobian(p, u) @ w))
        rhs = p.constants.beta_Fp * p.energy_norm(v) * p.energy_norm(w)
        assert lhs <= rhs * (1.0 + 1e-12)


def test_potential_at_zero(p1_square4):
    assert fem.potential(p1_square4, np.zeros(9)) == 0.0


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_potential_directional_derivative_is_residual(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(21)
    for _ in range(5):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        expected = fem.residual(p, u) @ v
        eps = 1e-7
        fd = (fem.potential(p, u + eps * v) - fem.potential(p, u - eps * v)) / (2 * eps)
        assert fd == pytest.approx(expected, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_strong_monotonicity_sampled(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(31)
    for _ in range(100):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        lhs = (fem.residual(p, u) - fem.residual(p, v)) @ (u - v)
        rhs = p.constants.nu * p.energy_norm(u - v) ** 2
        assert lhs >= rhs * (1.0 - 1e-12) - 1e-14


@pytest.mark.parametrize("factory", [model_experiment1, model_experiment2])
def test_lipschitz_sampled(square4, factory):
    p = build(square4, factory)
    rng = np.random.default_rng(37)
    for _ in range(100):
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        w = rng.standard_normal(9)
        lhs = abs((fem.residual(p, u) - fem.residual(p, v)) @ w)
        rhs = p.constants.L * p.energy_norm(u - v) * p.energy_norm(w)
        assert lhs <= rhs * (1.0 + 1e-12)


def test_energy_norm_basics(square4):
    assert fem.energy_norm(square4, np.zeros(9)) == 0.0
    rng = np.random.default_rng(2)
    u = rng.standard_normal(9)
    assert fem.energy_norm(square4, 2 * u) == pytest.approx(
        2 * fem.energy_norm(square4, u), rel=1e-14)


def test_energy_norm_of_interpolated_sine():
    # int |grad u*|^2 over the unit square is pi^2 / 2; the P1 interpolant
    # converges to it at second order in h
    value, _ = exact_solution()
    exact = np.pi ** 2 / 2
    errors = []
    for n in (8, 16, 32):
        mesh = unit_square_mesh(n)
        u = fem.interpolate(mesh, value)
        errors.append(abs(fem.energy_norm(mesh, u) ** 2 - exact) / exact)
    assert errors[-1] <= 0.01
    assert errors[2] <= 0.3 * errors[1] <= 0.3 * 0.3 * errors[0]


def test_picard_matrix_matches_jacobian_at_zero(p1_square4):
    a = fem.jacobian(p1_square4, np.zeros(9)).toarray()
    k = fem.picard_matrix(p1_square4, np.zeros(9)).toarray()
    assert_allclose(a, k, rtol=1e-14)


def test_picard_matrix_dense_oracle(square4):
    # for a field with a single nonzero DOF the element coefficients are easy
    # to reproduce with the loop oracle
    model, constants = model_experiment1()
    p = build(square4, model_experiment1)
    u = np.zeros(9)
    u[4] = 0.8
    n = square4.n_vertices
    a = np.zeros((n, n))
    u_vert = np.zeros(n)
    u_vert[square4.interior_vertices] = u
    for t in range(square4.n_triangles):
        area, grads = element_geometry(square4, t)
        vids = square4.triangles[t]
        grad_u = sum(u_vert[v] * grads[i] for i, v in enumerate(vids))
        q = grad_u @ grad_u
        for i in range(3):
            for j in range(3):
                a[vids[i], vids[j]] += area * model.mu(q) * (grads[i] @ grads[j])
    iv = square4.interior_vertices
    assert_allclose(fem.picard_matrix(p, u).toarray(), a[np.ix_(iv, iv)], atol=1e-13)


def test_problem_determinism(square4):
    model, constants = model_experiment1()
    a = DiscreteProblem.build(square4, model, constants, manufactured(model))
    b = DiscreteProblem.build(square4, model, constants, manufactured(model))
    assert (a.load == b.load).all()


def test_quadrature_rule_validation():
    with pytest.raises(ValueError):
        fem.QuadratureRule(points=np.array([[1.0, 0.0, 0.0]]),
                           weights=np.array([0.5]), degree=1)
    with pytest.raises(ValueError):
        fem.QuadratureRule(points=np.array([[1.0, 0.0, 0.0]]),
                           weights=np.array([-1.0]), degree=1)


def test_l_shape_problem_assembles():
    mesh = l_shape_mesh(4)
    p = build(mesh, model_experiment1)
    u = np.zeros(mesh.n_interior)
    assert np.isfinite(fem.residual(p, u)).all()
    assert fem.jacobian(p, u).shape == (mesh.n_interior, mesh.n_interior)


def test_potential_quadrature_free_exact_for_p1(square4):
    # for constant mu the potential has the closed form c/2 ||u||_X^2 - load.u;
    # the elementwise evaluation must reproduce it to round-off (no quadrature
    # error enters outside the load vector)
    c = 1.7
    p = build(square4, lambda: constant_model(c))
    rng = np.random.default_rng(17)
    for _ in range(5):
        u = rng.standard_normal(9)
        closed = 0.5 * c * fem.energy_norm(square4, u) ** 2 - p.load @ u
        assert fem.potential(p, u) == pytest.approx(closed, rel=1e-14, abs=1e-14)
