import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crscope.errors import InputError, InternalConsistencyError
from crscope.polynomial import ZPolynomial, complex_hessian, gradients


def random_real_poly(n, deg, rng, terms=6):
    f = ZPolynomial(n)
    for _ in range(terms):
        a = tuple(rng.integers(0, deg + 1, size=n))
        b = tuple(rng.integers(0, deg + 1, size=n))
        c = complex(rng.normal(), rng.normal())
        f = f + ZPolynomial(n, {(a, b): c})
    return f.real_part()


def numeric_wirtinger(f, z, eps=1e-6):
    n = len(z)
    d, db = np.zeros(n, complex), np.zeros(n, complex)
    for i in range(n):
        e = np.zeros(n, complex)
        e[i] = eps
        fx = (f.evaluate(z + e)[0] - f.evaluate(z - e)[0]) / (2 * eps)
        fy = (f.evaluate(z + 1j * e)[0] - f.evaluate(z - 1j * e)[0]) / (2 * eps)
        d[i], db[i] = 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)
    return d, db


def test_abs2_values_and_hessian():
    f = ZPolynomial.abs2(3)
    z = np.array([1 + 1j, 2.0, -1j])
    assert f.eval_real(z[None])[0] == pytest.approx(7.0)
    assert np.allclose(complex_hessian(f, z), np.eye(3))


def test_x_and_y_coordinates():
    z = np.array([[0.3 - 0.7j, 2 + 1j]])
    assert ZPolynomial.x(2, 0).eval_real(z)[0] == pytest.approx(0.3)
    assert ZPolynomial.y(2, 1).eval_real(z)[0] == pytest.approx(1.0)


def test_reality_checks():
    assert not ZPolynomial.z(1, 0).is_real()
    with pytest.raises(InternalConsistencyError):
        ZPolynomial.z(1, 0).eval_real([[1j]])
    assert ZPolynomial.z(1, 0).real_part().is_real()


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_wirtinger_derivatives_match_finite_differences(n, seed):
    rng = np.random.default_rng(seed)
    f = random_real_poly(n, 2, rng)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    d, db = gradients(f, z)
    nd, ndb = numeric_wirtinger(f, z)
    scale = 1 + np.abs(nd).max()
    assert np.allclose(d, nd, atol=1e-5 * scale)
    assert np.allclose(db, ndb, atol=1e-5 * scale)
    # for real f the antiholomorphic gradient is the conjugate of the holomorphic one
    assert np.allclose(db, d.conj())


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_hessian_matches_levi_form_by_finite_differences(n, seed):
    rng = np.random.default_rng(seed)
    f = random_real_poly(n, 2, rng)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    xi = rng.normal(size=n) + 1j * rng.normal(size=n)
    H = complex_hessian(f, z)
    # Levi form = (1/4) Laplacian of f along the complex line z + zeta xi
    eps = 1e-3
    g = lambda s: f.eval_real((z + s * xi)[None])[0]  # noqa: E731
    lap = (g(eps) + g(-eps) + g(1j * eps) + g(-1j * eps) - 4 * g(0)) / eps**2
    assert (xi.conj() @ H @ xi).real == pytest.approx(lap / 4, rel=1e-4, abs=1e-4)


def test_product_and_power_rules(rng):
    f = random_real_poly(2, 2, rng)
    g = random_real_poly(2, 1, rng)
    z = np.array([0.4 - 0.2j, -0.3 + 0.9j])
    assert (f * g).evaluate(z)[0] == pytest.approx(f.evaluate(z)[0] * g.evaluate(z)[0])
    assert (g ** 3).evaluate(z)[0] == pytest.approx(g.evaluate(z)[0] ** 3)
    lhs = (f * g).dz(1).evaluate(z)[0]
    rhs = f.dz(1).evaluate(z)[0] * g.evaluate(z)[0] + f.evaluate(z)[0] * g.dz(1).evaluate(z)[0]
    assert lhs == pytest.approx(rhs)


def test_compose_affine(rng):
    f = random_real_poly(3, 2, rng)
    M = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    b = rng.normal(size=3) + 0j
    g = f.compose_affine(M, b)
    zeta = np.array([0.2 + 0.1j, -0.5j])
    assert g.evaluate(zeta)[0] == pytest.approx(f.evaluate(M @ zeta + b)[0])


def test_json_round_trip_and_closure():
    f = (ZPolynomial.abs2(2) * ZPolynomial.x(2, 1)).real_part()
    assert ZPolynomial.from_json(2, f.to_json()) == f
    half = [{"alpha": [1, 0], "beta": [0, 0], "coeff": [0.0, -0.5]}]
    assert ZPolynomial.from_json(2, half) == ZPolynomial.y(2, 0)


def test_json_rejects_bad_input():
    with pytest.raises(InputError):
        ZPolynomial.from_json(1, [{"alpha": [1]}])
    with pytest.raises(InputError):
        ZPolynomial.from_json(1, [{"alpha": [5], "beta": [5], "coeff": 1}])
    bad = [{"alpha": [1], "beta": [0], "coeff": 1}, {"alpha": [0], "beta": [1], "coeff": 2}]
    with pytest.raises(InputError):
        ZPolynomial.from_json(1, bad)
