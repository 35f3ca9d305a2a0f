import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crscope.errors import DegeneratePatchError, InputError
from crscope.manifold import (
    PatchDefinition,
    ak_patch,
    classify_point,
    cube,
    dbar_matrix,
    levi_pencil_at,
    patch_from_quadric,
    pseudoconcavity_order_at,
    residuals,
    sample_points,
    slice_patch,
    sphere_patch,
)
from crscope.numerics import realify, signature
from crscope.pencil import SphereOptions
from crscope.polynomial import ZPolynomial, gradients
from crscope.quadric import rigid_split, mk, sample_quadric

from conftest import random_unitary

FAST = SphereOptions(samples=512, restarts=4)


def test_poly_eval_examples():
    assert ZPolynomial.abs2(2, [0]).eval_real([[2.0, 5.0]])[0] == pytest.approx(4.0)
    f = ZPolynomial.z(1, 0) ** 2 + ZPolynomial.zbar(1, 0) ** 2
    assert f.eval_real([[1j]])[0] == pytest.approx(-2.0)


def test_gradient_examples():
    z = np.array([1 + 2j, 0.5, -1j])
    assert np.allclose(gradients(ZPolynomial.abs2(3, [0]), z)[0], [1 - 2j, 0, 0])
    assert np.allclose(gradients(ZPolynomial.x(3, 2), z)[0], [0, 0, 0.5])


def test_pluriharmonic_hessian_vanishes():
    from crscope.polynomial import complex_hessian
    f = (ZPolynomial.z(2, 0) ** 2).real_part()
    assert np.allclose(complex_hessian(f, np.array([0.3j, 1.0])), 0)


def test_ak_classification():
    P = ak_patch(1)
    reg = classify_point(P, np.array([1, 0, 1], dtype=complex))
    assert reg.regular and reg.cr_type.m == 1
    sing = classify_point(P, np.zeros(3, dtype=complex))
    assert not sing.regular and sing.cr_type.m == 2
    assert sing.cr_type.real_dim == P.dim


def test_off_manifold_point_rejected():
    with pytest.raises(InputError):
        classify_point(sphere_patch(2), np.array([0.5, 0.0]))


def test_sphere_pencil_and_order():
    P = sphere_patch(3)
    z = np.array([1.0, 0, 0], dtype=complex)
    rep = classify_point(P, z)
    assert rep.regular and rep.cr_type.m == 2
    pencil = levi_pencil_at(P, z)
    assert signature(pencil.mats[0]) == (2, 0, 0)
    assert pseudoconcavity_order_at(P, z, FAST) == 0


def test_totally_real_patch_has_empty_pencil():
    P = PatchDefinition(1, (ZPolynomial.y(1, 0),), cube(1))
    pencil = levi_pencil_at(P, np.array([0.2 + 0j]))
    assert pencil.dim == 0
    assert pseudoconcavity_order_at(P, np.array([0.2 + 0j])) == 0


def test_singular_point_has_no_pencil():
    with pytest.raises(InputError):
        levi_pencil_at(ak_patch(2), np.zeros(3, dtype=complex))


def test_rigid_split_pencil_near_origin():
    q = rigid_split(2)
    P = patch_from_quadric(q)
    z = q.point(np.array([0.1, -0.05j, 0.02, 0.03 + 0.01j]), np.array([0.1, -0.2]))
    rep = classify_point(P, z)
    assert rep.regular and rep.cr_type.m == 4
    for M in levi_pencil_at(P, z).mats:
        assert signature(M) == (2, 0, 2)
    assert pseudoconcavity_order_at(P, z, FAST) == 2


def test_sampling():
    P = sphere_patch(2)
    pts = sample_points(P, 100, seed=1)
    assert np.abs(residuals(P, pts)).max() < 1e-10
    A = ak_patch(2)
    assert np.abs(residuals(A, sample_points(A, 50))).max() < 1e-10
    empty = PatchDefinition(2, (ZPolynomial.abs2(2) + 1,), cube(2))
    with pytest.raises(DegeneratePatchError):
        sample_points(empty, 10)


def test_identity_slice():
    P = ak_patch(1)
    S = slice_patch(P, np.eye(3), box=P.box)
    assert S.rho == P.rho
    with pytest.raises(InputError):
        slice_patch(P, np.ones((3, 2)))


def test_slicing_rigid_split_reproduces_mk():
    n, k = 2, 2.0
    E = patch_from_quadric(rigid_split(n))
    # Y_k = {k u1 = i u2}: coordinates (z, u1) with u2 = -i k u1
    A = np.zeros((2 * n + 2, 2 * n + 1), dtype=complex)
    A[:2 * n + 1, :2 * n + 1] = np.eye(2 * n + 1)
    A[2 * n + 1, 2 * n] = -1j * k
    S = slice_patch(E, A)
    pts = sample_quadric(mk(n, k), 30, 1.0, seed=2)
    assert np.abs(residuals(S, pts)).max() < 1e-12
    back = sample_points(S, 30, seed=3)
    assert np.abs(residuals(patch_from_quadric(mk(n, k)), back)).max() < 1e-9


@settings(max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_order_invariant_under_unitary_change_and_rescaling(seed):
    rng = np.random.default_rng(seed)
    q = rigid_split(1)
    P = patch_from_quadric(q)
    z = q.point(0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2)), 0.3 * rng.normal(size=2))
    base = pseudoconcavity_order_at(P, z, FAST)
    U = random_unitary(P.n, rng)
    # pull back by U: the new patch at U* z is the same set
    Q = slice_patch(P, U, box=cube(P.n, 3.0))
    assert pseudoconcavity_order_at(Q, U.conj().T @ z, FAST) == base
    R = PatchDefinition(P.n, tuple(s * f for s, f in zip(rng.uniform(0.5, 3, size=P.k), P.rho)), P.box)
    assert pseudoconcavity_order_at(R, z, FAST) == base


def test_dbar_rows_realify_to_gradients():
    P = sphere_patch(2)
    z = np.array([0.6, 0.8j])
    d = dbar_matrix(P, z)
    # real gradient of |z|^2 - 1 is 2 (x, y)
    real_grad = np.concatenate([2 * d.real, -2 * d.imag], axis=1)[0]
    assert np.allclose(real_grad, [1.2, 0, 0, 1.6])
    assert realify(d).shape == (2, 4)


def test_random_hyperplane_slice_stays_pseudoconcave():
    rng = np.random.default_rng(11)
    E = patch_from_quadric(rigid_split(2))
    M, _ = np.linalg.qr(rng.normal(size=(6, 5)) + 1j * rng.normal(size=(6, 5)))
    S = slice_patch(E, M)
    for z in sample_points(S, 10, seed=4):
        assert pseudoconcavity_order_at(S, z, FAST) >= 1
