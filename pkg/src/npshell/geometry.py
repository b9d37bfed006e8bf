"""Parametrized smooth closed curves and their differential-geometry frames.

Curves keep their analytic parametrization so frame data (tangent, outward
normal, curvature, speed) come from closed-form derivatives, never finite
differences.  Supported parametrizations: circles, dilations, and normal
perturbations x(t) + eps*h(t)*nu(t) of a base curve with a trigonometric
shape function h.

Conventions: parameter t in [0, 2*pi), counterclockwise orientation,
nu = R_{-pi/2} x'(t)/|x'(t)| (outward), curvature kappa is the standard
signed curvature, +1/r on a circle of radius r.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryDegenerateError

__all__ = [
    "ShapeFunction",
    "Curve",
    "LayeredGeometry",
    "make_circle",
    "perturb_curve",
    "scaled_curve",
    "length_element_expansion",
]


@dataclass(frozen=True)
class ShapeFunction:
    """Finite trigonometric series h(t) = sum a_k cos(kt) + sum b_k sin(kt).

    Coefficients are sequences of (frequency, amplitude) pairs with integer
    frequency >= 0.  Exact 2*pi-periodicity and closed-form derivatives.
    """

    cosine_coeffs: tuple = ()
    sine_coeffs: tuple = ()

    def __post_init__(self):
        cos_c = tuple((int(k), float(a)) for k, a in self.cosine_coeffs)
        sin_c = tuple((int(k), float(a)) for k, a in self.sine_coeffs)
        for k, _ in cos_c + sin_c:
            if k < 0:
                raise ValueError(f"negative frequency {k} in shape function")
        object.__setattr__(self, "cosine_coeffs", cos_c)
        object.__setattr__(self, "sine_coeffs", sin_c)

    @property
    def max_frequency(self):
        freqs = [k for k, a in self.cosine_coeffs + self.sine_coeffs if a != 0.0]
        return max(freqs, default=0)

    def __call__(self, t):
        return self.derivative(t, order=0)

    def derivative(self, t, order=1):
        """Evaluate d^order h / dt^order at t (order 0, 1 or 2)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k, a in self.cosine_coeffs:
            if order == 0:
                out = out + a * np.cos(k * t)
            elif order == 1:
                out = out - a * k * np.sin(k * t)
            elif order == 2:
                out = out - a * k * k * np.cos(k * t)
            else:
                raise ValueError("only derivatives up to order 2 are supported")
        for k, a in self.sine_coeffs:
            if order == 0:
                out = out + a * np.sin(k * t)
            elif order == 1:
                out = out + a * k * np.cos(k * t)
            elif order == 2:
                out = out - a * k * k * np.sin(k * t)
            else:
                raise ValueError("only derivatives up to order 2 are supported")
        return out

    @staticmethod
    def constant(value):
        return ShapeFunction(cosine_coeffs=((0, value),))

    @staticmethod
    def zero():
        return ShapeFunction()


class _Parametrization:
    """Closed-form x(t) and derivatives; subclasses fill in d0..d3."""

    def d0(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def d3(self, t):
        raise NotImplementedError(
            f"{type(self).__name__} has no third derivative; "
            "perturbing this curve is not supported")


class _CirclePar(_Parametrization):
    def __init__(self, radius):
        self.radius = float(radius)

    def d0(self, t):
        r = self.radius
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def d1(self, t):
        r = self.radius
        return np.stack([-r * np.sin(t), r * np.cos(t)], axis=-1)

    def d2(self, t):
        return -self.d0(t)

    def d3(self, t):
        return -self.d1(t)


class _ScaledPar(_Parametrization):
    def __init__(self, base, delta):
        self.base = base
        self.delta = float(delta)

    def d0(self, t):
        return self.delta * self.base.d0(t)

    def d1(self, t):
        return self.delta * self.base.d1(t)

    def d2(self, t):
        return self.delta * self.base.d2(t)

    def d3(self, t):
        return self.delta * self.base.d3(t)


def _rot_minus_90(v):
    """Clockwise quarter rotation R_{-pi/2} (a, b) -> (b, -a)."""
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


def _normal_chain(d1, d2, d3):
    """nu(t), nu'(t), nu''(t) from curve derivatives, nu = R_{-pi/2} d1/|d1|."""
    s = np.linalg.norm(d1, axis=-1)
    sp = np.einsum("...k,...k->...", d1, d2) / s
    spp = (np.einsum("...k,...k->...", d2, d2)
           + np.einsum("...k,...k->...", d1, d3) - sp * sp) / s
    r1, r2, r3 = _rot_minus_90(d1), _rot_minus_90(d2), _rot_minus_90(d3)
    s_ = s[..., None]
    sp_ = sp[..., None]
    spp_ = spp[..., None]
    nu = r1 / s_
    nup = r2 / s_ - r1 * sp_ / s_**2
    nupp = (r3 / s_ - 2.0 * r2 * sp_ / s_**2
            - r1 * spp_ / s_**2 + 2.0 * r1 * sp_**2 / s_**3)
    return nu, nup, nupp


class _PerturbedPar(_Parametrization):
    """x(t) + eps*h(t)*nu(t) with all derivatives via the base's d1..d3."""

    def __init__(self, base, h, eps):
        self.base = base
        self.h = h
        self.eps = float(eps)

    def _frame(self, t):
        return _normal_chain(self.base.d1(t), self.base.d2(t), self.base.d3(t))

    def d0(self, t):
        nu, _, _ = self._frame(t)
        return self.base.d0(t) + self.eps * self.h(t)[..., None] * nu

    def d1(self, t):
        nu, nup, _ = self._frame(t)
        h0 = self.h(t)[..., None]
        h1 = self.h.derivative(t, 1)[..., None]
        return self.base.d1(t) + self.eps * (h1 * nu + h0 * nup)

    def d2(self, t):
        nu, nup, nupp = self._frame(t)
        h0 = self.h(t)[..., None]
        h1 = self.h.derivative(t, 1)[..., None]
        h2 = self.h.derivative(t, 2)[..., None]
        return self.base.d2(t) + self.eps * (h2 * nu + 2.0 * h1 * nup + h0 * nupp)


@dataclass(frozen=True)
class Curve:
    """Discretized closed curve with exact frame data at N equispaced nodes.

    weights are the trapezoid arclength weights 2*pi*|x'(t_j)|/N, so that
    sum(weights) approximates the curve length (exactly, for band-limited
    speed).  The parametrization is retained for analytic re-derivation.
    """

    t: np.ndarray
    points: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray
    speed: np.ndarray
    weights: np.ndarray
    par: _Parametrization = field(repr=False, compare=False)

    @property
    def n_nodes(self):
        return self.t.size

    def length(self):
        return float(np.sum(self.weights))


def _build_curve(par, n_nodes, check_simple=True):
    if n_nodes % 2 != 0 or n_nodes < 16:
        raise ValueError(f"node count must be even and >= 16, got {n_nodes}")
    t = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    x = par.d0(t)
    d1 = par.d1(t)
    d2 = par.d2(t)
    speed = np.linalg.norm(d1, axis=-1)
    if np.any(speed <= 0.0):
        raise GeometryDegenerateError("degenerate parametrization: zero speed")
    tangent = d1 / speed[:, None]
    normal = _rot_minus_90(tangent)
    kappa = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / speed**3
    weights = (2.0 * np.pi / n_nodes) * speed
    curve = Curve(t=t, points=x, tangent=tangent, normal=normal,
                  curvature=kappa, speed=speed, weights=weights, par=par)
    if check_simple:
        _check_simple(curve)
    return curve


def _check_simple(curve):
    """Reject near self-intersection: parameter-distant node pairs too close.

    "Too close" means closer than the larger of 1e-3 of the curve scale and
    the local node spacing; transversal crossings land between nodes, so a
    pure absolute threshold would miss them at practical N.
    """
    n = curve.n_nodes
    x = curve.points
    scale = float(np.mean(np.linalg.norm(x, axis=-1)))
    i, j = np.triu_indices(n, k=1)
    ring = np.minimum(j - i, n - (j - i))
    mask = ring > n // 8
    if not np.any(mask):
        return
    i, j = i[mask], j[mask]
    d = np.linalg.norm(x[i] - x[j], axis=-1)
    w = curve.weights
    thresh = np.maximum(1e-3 * scale, 0.5 * (w[i] + w[j]))
    if np.any(d < thresh):
        raise GeometryDegenerateError(
            "curve self-intersects or nearly touches itself")


def make_circle(radius, n_nodes):
    """Circle of given radius centered at the origin, N equispaced nodes."""
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    return _build_curve(_CirclePar(radius), n_nodes, check_simple=False)


def perturb_curve(base, h, eps):
    """Normal perturbation x -> x + eps*h(t)*nu(x), frame recomputed exactly.

    The shape function is band-limited to n_nodes/4 to keep all derived
    quantities alias-free on the node grid.
    """
    if eps < 0.0:
        raise ValueError(f"perturbation amplitude must be >= 0, got {eps}")
    if h.max_frequency > base.n_nodes // 4:
        raise ValueError(
            f"shape function frequency {h.max_frequency} exceeds N/4 = "
            f"{base.n_nodes // 4}; increase the node count")
    if eps == 0.0:
        return base
    return _build_curve(_PerturbedPar(base.par, h, eps), base.n_nodes)


def scaled_curve(curve, delta):
    """Dilation by delta: points, speed, weights scale; curvature divides."""
    if delta <= 0.0:
        raise ValueError(f"scale factor must be positive, got {delta}")
    if delta == 1.0:
        return curve
    return _build_curve(_ScaledPar(curve.par, delta), curve.n_nodes,
                        check_simple=False)


def length_element_expansion(base, h):
    """Zeroth/first-order factors of the perturbed length element.

    d sigma_eps = (sigma0 + eps*sigma1 + O(eps^2)) d sigma with sigma0 = 1
    and sigma1 = kappa*h (per node).  Uniform inflation of a convex curve
    grows the length element.
    """
    sigma0 = np.ones(base.n_nodes)
    sigma1 = base.curvature * h(base.t)
    return sigma0, sigma1


@dataclass(frozen=True)
class LayeredGeometry:
    """Core-shell problem description: radii, scale factors, perturbations.

    The physical interfaces are delta_i * (circle r_i perturbed by
    eps_i*h_i); the solver works on the unit-scale perturbed curves and
    carries the delta_i through scaled-argument kernels.
    """

    r1: float
    r2: float
    delta1: float = 1.0
    delta2: float = 1.0
    eps1: float = 0.0
    eps2: float = 0.0
    h1: ShapeFunction = field(default_factory=ShapeFunction.zero)
    h2: ShapeFunction = field(default_factory=ShapeFunction.zero)
    n_nodes: int = 256

    def __post_init__(self):
        for name in ("r1", "r2", "delta1", "delta2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.eps1 < 0.0 or self.eps2 < 0.0:
            raise ValueError("perturbation amplitudes must be >= 0")
        t = 2.0 * np.pi * np.arange(4 * self.n_nodes) / (4 * self.n_nodes)
        outer_core = self.delta1 * np.max(self.r1 + self.eps1 * self.h1(t))
        inner_shell = self.delta2 * np.min(self.r2 + self.eps2 * self.h2(t))
        if not outer_core < inner_shell:
            raise GeometryDegenerateError(
                f"core (radius <= {outer_core:g}) is not strictly inside the "
                f"shell (radius >= {inner_shell:g})")

    @property
    def contrast_ratio(self):
        """(delta1*r1)/(delta2*r2); the disk spectrum depends only on this."""
        return (self.delta1 * self.r1) / (self.delta2 * self.r2)

    def base_curves(self):
        return (make_circle(self.r1, self.n_nodes),
                make_circle(self.r2, self.n_nodes))

    def perturbed_curves(self):
        c1, c2 = self.base_curves()
        return (perturb_curve(c1, self.h1, self.eps1),
                perturb_curve(c2, self.h2, self.eps2))

    def physical_curves(self):
        """The delta-scaled perturbed interfaces (for field evaluation)."""
        p1, p2 = self.perturbed_curves()
        return scaled_curve(p1, self.delta1), scaled_curve(p2, self.delta2)
