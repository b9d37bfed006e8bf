import numpy as np
import pytest

from npshell.errors import GeometryDegenerateError
from npshell.geometry import (
    LayeredGeometry,
    ShapeFunction,
    length_element_expansion,
    make_circle,
    perturb_curve,
    scaled_curve,
)


def test_circle_basic_frame():
    c = make_circle(2.0, 64)
    assert abs(c.weights.sum() - 4.0 * np.pi) < 1e-12
    assert np.allclose(c.curvature, 0.5, atol=1e-12)
    assert np.allclose(c.speed, 2.0, atol=1e-12)
    np.testing.assert_allclose(c.points[0], [2.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(c.normal[0], [1.0, 0.0], atol=1e-14)


def test_unit_circle_curvature():
    c = make_circle(1.0, 32)
    assert np.allclose(c.curvature, 1.0, atol=1e-12)


def test_frame_orthonormality():
    h = ShapeFunction(cosine_coeffs=((4, 0.5),), sine_coeffs=((2, 0.3),))
    c = perturb_curve(make_circle(1.0, 128), h, 0.05)
    assert np.max(np.abs(np.einsum("ij,ij->i", c.normal, c.tangent))) < 1e-12
    assert np.max(np.abs(np.linalg.norm(c.normal, axis=1) - 1.0)) < 1e-12
    assert np.max(np.abs(np.linalg.norm(c.tangent, axis=1) - 1.0)) < 1e-12
    # nu = R_{-pi/2} T at every node
    rot = np.stack([c.tangent[:, 1], -c.tangent[:, 0]], axis=-1)
    assert np.max(np.abs(c.normal - rot)) < 1e-12


def test_make_circle_invalid_args():
    with pytest.raises(ValueError):
        make_circle(-1.0, 64)
    with pytest.raises(ValueError):
        make_circle(1.0, 63)
    with pytest.raises(ValueError):
        make_circle(1.0, 8)


def test_perturb_identity_and_inflation():
    base = make_circle(1.0, 64)
    assert perturb_curve(base, ShapeFunction(cosine_coeffs=((3, 1.0),)), 0.0) is base
    inflated = perturb_curve(base, ShapeFunction.constant(1.0), 0.1)
    ref = make_circle(1.1, 64)
    assert np.max(np.abs(inflated.points - ref.points)) < 1e-12
    assert np.max(np.abs(inflated.weights - ref.weights)) < 1e-12
    assert np.max(np.abs(inflated.curvature - ref.curvature)) < 1e-12


def test_perturbed_normal_first_order():
    # exact normal vs nu - eps (dh/ds) T: remainder O(eps^2), order >= 1.9
    base = make_circle(1.0, 128)
    h = ShapeFunction(cosine_coeffs=((4, 1.0),))
    errs = []
    eps_list = (0.02, 0.01)
    for eps in eps_list:
        pc = perturb_curve(base, h, eps)
        h_tan = h.derivative(base.t, 1) / base.speed
        approx = base.normal - eps * h_tan[:, None] * base.tangent
        errs.append(np.max(np.linalg.norm(pc.normal - approx, axis=1)))
    slope = np.log(errs[0] / errs[1]) / np.log(eps_list[0] / eps_list[1])
    assert slope >= 1.9


def test_length_element_first_order():
    base = make_circle(2.0, 128)
    h = ShapeFunction(cosine_coeffs=((1, 1.0),))
    sigma0, sigma1 = length_element_expansion(base, h)
    assert np.allclose(sigma0, 1.0)
    # kappa = 1/2 on this circle
    assert np.max(np.abs(sigma1 - 0.5 * np.cos(base.t))) < 1e-12
    errs = []
    eps_list = (0.02, 0.01)
    for eps in eps_list:
        pc = perturb_curve(base, h, eps)
        pred = (1.0 + eps * sigma1) * base.weights
        errs.append(np.max(np.abs(pc.weights - pred)))
    slope = np.log(errs[0] / errs[1]) / np.log(eps_list[0] / eps_list[1])
    assert slope >= 1.9


def test_scaled_curve():
    base = make_circle(1.0, 64)
    assert scaled_curve(base, 1.0) is base
    sc = scaled_curve(base, 2.0)
    assert abs(sc.weights.sum() - 4.0 * np.pi) < 1e-12
    assert np.allclose(sc.curvature, 0.5, atol=1e-12)
    assert np.max(np.abs(sc.normal - base.normal)) < 1e-12
    assert np.max(np.abs(sc.tangent - base.tangent)) < 1e-12
    # composition: perturb then scale
    p = perturb_curve(base, ShapeFunction.constant(1.0), 0.1)
    sp = scaled_curve(p, 3.0)
    assert np.max(np.abs(np.linalg.norm(sp.points, axis=1) - 3.3)) < 1e-12


def test_shape_function_periodicity_and_eval():
    h = ShapeFunction(cosine_coeffs=((4, 0.5),), sine_coeffs=((3, -1.0),))
    t = np.linspace(0, 2 * np.pi, 17)
    np.testing.assert_allclose(h(t), h(t + 2 * np.pi), atol=1e-12)
    np.testing.assert_allclose(h(t), 0.5 * np.cos(4 * t) - np.sin(3 * t),
                               atol=1e-14)
    assert h.max_frequency == 4


def test_aliasing_guard():
    base = make_circle(1.0, 32)
    with pytest.raises(ValueError, match="frequency"):
        perturb_curve(base, ShapeFunction(cosine_coeffs=((9, 0.1),)), 0.01)


def test_self_intersection_guard():
    base = make_circle(1.0, 128)
    h = ShapeFunction(cosine_coeffs=((2, 1.0),))
    with pytest.raises(GeometryDegenerateError):
        perturb_curve(base, h, 1.2)


def test_layered_geometry_validation():
    with pytest.raises(GeometryDegenerateError):
        LayeredGeometry(r1=1.0, r2=2.0, delta1=3.0, delta2=1.0)
    with pytest.raises(ValueError):
        LayeredGeometry(r1=-1.0, r2=2.0)
    with pytest.raises(ValueError):
        LayeredGeometry(r1=1.0, r2=2.0, eps1=-0.1)
    g = LayeredGeometry(r1=1.0, r2=2.0, delta1=0.5, delta2=2.0, n_nodes=64)
    assert abs(g.contrast_ratio - 0.125) < 1e-15
