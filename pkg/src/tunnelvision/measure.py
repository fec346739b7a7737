"""Hyperbolic Poisson kernel and harmonic measure of planar regions.

The kernel of the upper half-space at p = (x, y, z) is

    P_p(xi, eta) = (1/pi) * [ z / ((x-xi)^2 + (y-eta)^2 + z^2) ]^2,

normalized to unit mass over the plane.  The harmonic measure of a region is
the Poisson integral of its indicator; it equals the fraction of geodesic
rays from p that land in the region, lies strictly between 0 and 1, and is
harmonic in p.

Evaluation strategy: polar coordinates about the kernel's foot point (x, y).
Along each ray the kernel mass has a closed-form antiderivative, and the
indicator only changes across primitive boundaries, whose crossing radii are
roots of quadratics/linear equations — so the radial integral is exact per
ray, out to infinity, including the far-field tail.  The remaining angular
integral is piecewise analytic with kinks at tangency directions; it is done
by adaptive Gauss-Kronrod seeded at the known kink angles.  Gradients use
the analytically differentiated kernel, whose radial antiderivatives are
also closed-form, on the same partition.

Error accounting is the accumulated Kronrod-Gauss deviation of the angular
integral; the radial direction contributes only roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import PlanarDomain
from .hyperbolic import H3Point
from .quadrature import adaptive_integrate

__all__ = [
    "QuadratureConfig",
    "MeasureValue",
    "QuadratureError",
    "poisson_kernel",
    "kernel_mass",
    "harmonic_measure",
    "measure_gradient",
    "measure_with_gradient",
    "halfplane_closed_form",
    "disk_closed_form",
]

_TWO_PI = 2.0 * math.pi


class QuadratureError(RuntimeError):
    """Raised when a requested tolerance could not be certified."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances of the measure quadrature.

    tolerance : absolute target on the measure value (gradients ride along).
    max_depth : refinement rounds of the angular partition.
    cutoff    : far-field multiplier; sets where the beyond-all-crossings
                membership probe is placed (the radial tail itself is exact).
    """

    tolerance: float = 1e-7
    max_depth: int = 24
    cutoff: float = 64.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


@dataclass(frozen=True)
class MeasureValue:
    """A measure evaluation: value, error estimate, and kernel mass captured."""

    value: float
    error: float
    kernel_mass: float
    converged: bool = True


def poisson_kernel(p: H3Point, zeta) -> float | np.ndarray:
    """Kernel density at boundary point(s) ``zeta``; strictly positive."""
    z = np.asarray(zeta)
    den = (p.x - z.real) ** 2 + (p.y - z.imag) ** 2 + p.z**2
    out = (p.z / den) ** 2 / math.pi
    return float(out) if out.shape == () else out


def halfplane_closed_form(p: H3Point) -> float:
    """Harmonic measure of the half-plane {eta > 0}: (y/sqrt(y^2+z^2) + 1)/2."""
    return 0.5 * (p.y / math.hypot(p.y, p.z) + 1.0)


def disk_closed_form(rho: float, z: float) -> float:
    """Harmonic measure of a centered disk of radius rho seen from (0, 0, z)."""
    if rho <= 0 or z <= 0:
        raise ValueError("need rho > 0 and z > 0")
    return rho * rho / (rho * rho + z * z)


class _RayIntegrand:
    """Angular integrand(s) of the polar decomposition about the foot point.

    For a batch of angles returns columns

        [measure density, d/dx, d/dy, d/dz, kernel-mass density]

    (gradient columns only when requested).  Radial integrals between
    successive boundary crossings use the closed-form antiderivatives of the
    kernel and of its Cartesian derivatives, including the exact semi-infinite
    tail beyond the last crossing.
    """

    def __init__(self, domain: PlanarDomain, p: H3Point, cutoff: float,
                 want_gradient: bool):
        self.domain = domain
        self.foot = p.foot
        self.z = p.z
        self.want_gradient = want_gradient
        r = domain.bounding_radius
        base = abs(self.foot) + p.z + (r if math.isfinite(r) else 1.0)
        self.far_pad = cutoff * max(p.z, base)

    # antiderivative of the kernel's radial mass: cdf(t) = t^2/(t^2+z^2)
    def _cdf(self, t):
        return t * t / (t * t + self.z**2)

    # antiderivative for d/dx, d/dy: integral of t^2 (t^2+z^2)^-3 dt
    def _ix(self, t):
        z = self.z
        t2z = t * t + z * z
        return (0.25 * (t / (2.0 * z * z * t2z) + np.arctan(t / z) / (2.0 * z**3))
                - t / (4.0 * t2z * t2z))

    # antiderivative for d/dz: -z t^2/(t^2+z^2)^2
    def _iz(self, t):
        t2z = t * t + self.z**2
        return -self.z * t * t / (t2z * t2z)

    def __call__(self, phis: np.ndarray) -> np.ndarray:
        z = self.z
        dirs = np.exp(1j * phis)
        ts = self.domain.ray_crossings(self.foot, dirs)
        ts[~(ts > 0.0)] = np.nan
        ts = np.sort(ts, axis=1)  # NaN sorts last
        finite_max = np.nanmax(ts, initial=0.0)
        t_far = 1.5 * finite_max + self.far_pad
        ts = np.where(np.isnan(ts), t_far, ts)
        edges = np.concatenate([np.zeros((len(phis), 1)), ts], axis=1)

        mids = 0.5 * (edges[:, :-1] + edges[:, 1:])
        inside = self.domain.contains(self.foot + mids * dirs[:, None])
        probe = self.foot + (2.0 * t_far) * dirs
        inside_tail = self.domain.contains(probe)

        cdf = self._cdf(edges)
        d_val = np.where(inside, np.diff(cdf, axis=1), 0.0).sum(axis=1)
        d_val += np.where(inside_tail, 1.0 - cdf[:, -1], 0.0)

        ncols = 5 if self.want_gradient else 2
        out = np.empty((len(phis), ncols))
        out[:, 0] = d_val / _TWO_PI
        out[:, -1] = 1.0 / _TWO_PI  # kernel-mass density: exact per-ray mass 1

        if self.want_gradient:
            ix = self._ix(edges)
            dix = np.where(inside, np.diff(ix, axis=1), 0.0).sum(axis=1)
            dix += np.where(inside_tail, math.pi / (16.0 * z**3) - ix[:, -1], 0.0)
            radial = (4.0 * z * z / math.pi) * dix
            out[:, 1] = radial * np.cos(phis)
            out[:, 2] = radial * np.sin(phis)
            iz = self._iz(edges)
            diz = np.where(inside, np.diff(iz, axis=1), 0.0).sum(axis=1)
            diz += np.where(inside_tail, -iz[:, -1], 0.0)
            out[:, 3] = diz / math.pi
        return out


def _angular_breakpoints(domain: PlanarDomain, foot: complex) -> list[float]:
    angles = {0.0, math.pi, _TWO_PI}
    for a in domain.kink_angles(foot):
        angles.add(a % _TWO_PI)
    return sorted(angles)


def _integrate(domain, p, config, want_gradient):
    integrand = _RayIntegrand(domain, p, config.cutoff, want_gradient)
    bps = _angular_breakpoints(domain, p.foot)
    return adaptive_integrate(integrand, 0.0, _TWO_PI, config.tolerance,
                              breakpoints=bps, max_rounds=config.max_depth)


def harmonic_measure(domain: PlanarDomain, p: H3Point,
                     config: QuadratureConfig = QuadratureConfig()) -> MeasureValue:
    """Harmonic measure of ``domain`` seen from ``p``.

    Returns a value in [0, 1] with an error estimate; ``converged`` is False
    when the angular refinement hit its depth limit before certifying the
    tolerance (the best estimate is still returned).
    """
    res = _integrate(domain, p, config, want_gradient=False)
    value = min(max(float(res.value[0]), 0.0), 1.0)
    return MeasureValue(value=value, error=float(res.error[0]),
                        kernel_mass=float(res.value[-1]), converged=res.converged)


def measure_with_gradient(domain: PlanarDomain, p: H3Point,
                          config: QuadratureConfig = QuadratureConfig()):
    """Measure and its Euclidean gradient in one pass over a shared partition.

    Returns ``(MeasureValue, gradient (3,), gradient_error (3,))``.  The
    gradient integrates the differentiated kernel; it is not a finite
    difference of the value.
    """
    res = _integrate(domain, p, config, want_gradient=True)
    value = min(max(float(res.value[0]), 0.0), 1.0)
    mv = MeasureValue(value=value, error=float(res.error[0]),
                      kernel_mass=float(res.value[-1]), converged=res.converged)
    return mv, res.value[1:4].copy(), res.error[1:4].copy()


def measure_gradient(domain: PlanarDomain, p: H3Point,
                     config: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """Euclidean-coordinate gradient (df/dx, df/dy, df/dz) of the measure.

    The hyperbolic gradient norm is ``z * norm(result)``.
    """
    return measure_with_gradient(domain, p, config)[1]


def kernel_mass(p: H3Point, config: QuadratureConfig = QuadratureConfig()) -> float:
    """Total kernel mass over the plane; approximately 1.

    Integrates the radial closed form out to ``cutoff * max(z, 1)`` through
    the angular machinery and adds the exact analytic tail of the kernel
    beyond that radius.  Raises QuadratureError if the angular tolerance was
    not certified.
    """
    rho_far = config.cutoff * max(p.z, 1.0)
    z2 = p.z**2
    body = rho_far**2 / (rho_far**2 + z2)

    def f(phis):
        return np.full((len(phis), 1), body / _TWO_PI)

    res = adaptive_integrate(f, 0.0, _TWO_PI, config.tolerance,
                             max_rounds=config.max_depth)
    tail = z2 / (rho_far**2 + z2)
    total = res.value[0] + tail
    if not res.converged:
        raise QuadratureError("kernel mass quadrature did not converge",
                              best=total)
    return float(total)
