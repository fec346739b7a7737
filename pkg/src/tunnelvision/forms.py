"""The dictionary between harmonic functions and self-dual 2-forms.

On a circle bundle over a hyperbolic 3-manifold with metric
``g0 = V h + V^{-1} theta^2`` (V a positive harmonic potential, theta a
connection form with curvature the conjugate of dV), every invariant
self-dual harmonic 2-form is ``omega = psi ^ theta + V *psi`` for a closed
and co-closed 1-form psi on the base, and the pointwise norms satisfy

    |omega|_{g0} = sqrt(2) |psi|_h

identically -- independent of V and of theta.  In the setting computed here
psi is the differential of the harmonic measure, so omega vanishes exactly
at the measure's critical points, and since the measure approaches its
boundary values quadratically (first normal derivative zero, second one
not), the appropriately weighted norm stays bounded away from zero near the
boundary: zero-locus reports weight by a defining function u (the model
height by default, sqrt(f(1-f)) optionally) to exclude near-boundary
false positives.

The self-duality of the ansatz form is verified algebraically: the Hodge
star is built for the diagonal metric diag(V, V, V, 1/V) on the span of the
base coframe and theta, applied to omega in coordinates, and compared with
omega itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .critical import GridSpec, RefinementError, refine_critical_point_3d
from .domains import PlanarDomain
from .hyperbolic import H3Point
from .measure import QuadratureConfig, harmonic_measure, measure_with_gradient
from .runio import pmap

__all__ = [
    "FramePoint",
    "FormSample",
    "ExpansionFit",
    "ZeroLocusReport",
    "sd_form_norm",
    "selfdual_algebra_check",
    "boundary_expansion_check",
    "zero_locus_report",
    "form_norm_grid",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FramePoint:
    """Pointwise frame data: potential value, measure differential, defining u."""

    base: H3Point
    V: float
    df: tuple
    u: float

    def __post_init__(self):
        if not self.V > 0:
            raise ValueError("potential value must be positive")
        if self.u < 0:
            raise ValueError("defining-function value must be >= 0")


@dataclass(frozen=True)
class FormSample:
    """Norm sample of the self-dual form; omega = sqrt(2) * psi by construction."""

    base: H3Point
    omega_norm_g0: float
    psi_norm_h: float

    @staticmethod
    def from_psi_norm(base: H3Point, psi_norm_h: float) -> "FormSample":
        return FormSample(base=base, omega_norm_g0=SQRT2 * psi_norm_h,
                          psi_norm_h=psi_norm_h)

    def to_obj(self):
        return {
            "base": [self.base.x, self.base.y, self.base.z],
            "omega_norm_g0": self.omega_norm_g0,
            "psi_norm_h": self.psi_norm_h,
        }


def sd_form_norm(domain: PlanarDomain, config, p: H3Point,
                 quad: QuadratureConfig = QuadratureConfig(),
                 shells: int = 6) -> FormSample:
    """Pointwise norm of the self-dual form attached to the measure of ``domain``.

    ``config`` (a point configuration fixing V) and ``shells`` are accepted
    for interface symmetry but the norms do not depend on them: the V-factors
    cancel between the coframe weights and the form's components.  The
    hyperbolic norm of the measure differential is z |grad f|.
    """
    del config, shells  # norms are independent of the potential and connection
    _, grad, _ = measure_with_gradient(domain, p, quad)
    psi = p.z * float(np.linalg.norm(grad))
    return FormSample.from_psi_norm(p, psi)


# -- algebraic self-duality --------------------------------------------------------

_PAIRS = list(combinations(range(4), 2))  # coframe index pairs, coframe 3 = theta
_PAIR_INDEX = {p: i for i, p in enumerate(_PAIRS)}


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _hodge_star_matrix(metric_diag) -> np.ndarray:
    """Hodge star on 2-forms for a diagonal metric on an oriented 4-space."""
    g = np.asarray(metric_diag, dtype=float)
    ginv = 1.0 / g
    vol = math.sqrt(float(np.prod(g)))
    star = np.zeros((6, 6))
    for (i, j) in _PAIRS:
        k, l = (m for m in range(4) if m not in (i, j))
        sign = _perm_sign((i, j, k, l))
        star[_PAIR_INDEX[(k, l)], _PAIR_INDEX[(i, j)]] = (
            vol * ginv[i] * ginv[j] * sign)
    return star


def _norm_2form(comp, metric_diag) -> float:
    ginv = 1.0 / np.asarray(metric_diag, dtype=float)
    sq = sum(ginv[i] * ginv[j] * comp[_PAIR_INDEX[(i, j)]] ** 2
             for (i, j) in _PAIRS)
    return math.sqrt(sq)


def selfdual_algebra_check(psi, V: float) -> float:
    """Residual of self-duality and of the norm identity for the ansatz form.

    ``psi`` holds the three components of a 1-form in an h-orthonormal base
    coframe.  The form psi ^ theta + V *psi is assembled in the coordinate
    coframe (e1, e2, e3, theta), the 4-dimensional Hodge star of the metric
    diag(V, V, V, 1/V) is applied, and the returned residual is the larger of
    ``max|star(omega) - omega|`` and ``| |omega| - sqrt(2)|psi| |``.
    """
    if not V > 0:
        raise ValueError("V must be positive")
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (3,):
        raise ValueError("psi must be a 3-vector")
    comp = np.zeros(6)
    # psi ^ theta: components on e_i ^ theta
    comp[_PAIR_INDEX[(0, 3)]] += psi[0]
    comp[_PAIR_INDEX[(1, 3)]] += psi[1]
    comp[_PAIR_INDEX[(2, 3)]] += psi[2]
    # V * (3d star of psi): psi1 e2^e3 + psi2 e3^e1 + psi3 e1^e2
    comp[_PAIR_INDEX[(1, 2)]] += V * psi[0]
    comp[_PAIR_INDEX[(0, 2)]] -= V * psi[1]
    comp[_PAIR_INDEX[(0, 1)]] += V * psi[2]

    metric = (V, V, V, 1.0 / V)
    star = _hodge_star_matrix(metric)
    residual_sd = float(np.abs(star @ comp - comp).max())
    norm_identity = abs(_norm_2form(comp, metric)
                        - SQRT2 * float(np.linalg.norm(psi)))
    return max(residual_sd, norm_identity)


# -- boundary expansion -------------------------------------------------------------


@dataclass(frozen=True)
class ExpansionFit:
    """Log-log fit of the near-boundary residual: residual ~ coeff * z^exponent."""

    coefficient: float
    exponent: float
    residuals: tuple
    z_values: tuple
    flagged: bool

    def to_obj(self):
        return {
            "coefficient": self.coefficient,
            "exponent": self.exponent,
            "residuals": list(self.residuals),
            "z_values": list(self.z_values),
            "flagged": self.flagged,
        }


def boundary_expansion_check(domain: PlanarDomain, boundary_foot: complex,
                             side: str, z_list,
                             config: QuadratureConfig | None = None
                             ) -> ExpansionFit:
    """Fit the quadratic vanishing rate of the measure at the boundary plane.

    Over a foot point strictly inside the region fit ``1 - f`` against
    ``z^2``; strictly outside, fit ``f``.  The first normal derivative of the
    measure vanishes at the boundary while the second does not, so the fitted
    exponent should be 2 with a positive coefficient; a fit exponent far from
    2 is flagged (the foot is too close to the region's edge for the chosen
    heights).
    """
    if side not in ("inside", "outside"):
        raise ValueError("side must be 'inside' or 'outside'")
    zs = sorted(float(z) for z in z_list)
    if len(zs) < 2:
        raise ValueError("need at least two heights to fit")
    if config is None:
        smallest = (zs[0] ** 2) * 0.01
        config = QuadratureConfig(tolerance=max(1e-13, min(1e-9, smallest)))
    inside = bool(domain.contains(boundary_foot))
    if side == "inside" and not inside:
        raise ValueError("foot point is not inside the region")
    if side == "outside" and inside:
        raise ValueError("foot point is not outside the region")
    residuals = []
    for z in zs:
        p = H3Point(boundary_foot.real, boundary_foot.imag, z)
        f = harmonic_measure(domain, p, config).value
        residuals.append(1.0 - f if side == "inside" else f)
    if any(r <= 0 for r in residuals):
        raise ValueError("nonpositive residual; heights outside the regime")
    slope, intercept = np.polyfit(np.log(zs), np.log(residuals), 1)
    return ExpansionFit(
        coefficient=float(math.exp(intercept)),
        exponent=float(slope),
        residuals=tuple(residuals),
        z_values=tuple(zs),
        flagged=bool(abs(slope - 2.0) > 0.25),
    )


# -- zero locus ---------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroLocusReport:
    samples: tuple              # sub-threshold FormSamples (u-weighted)
    clusters: tuple             # tuples of sample indices, grid-adjacent
    critical_points: tuple      # refined reports, one attempt per cluster
    cross_referenced: bool      # every cluster refined AND every point clustered
    threshold: float
    u_mode: str

    def to_obj(self):
        return {
            "samples": [s.to_obj() for s in self.samples],
            "clusters": [list(c) for c in self.clusters],
            "critical_points": [r.to_obj() for r in self.critical_points],
            "cross_referenced": self.cross_referenced,
            "threshold": self.threshold,
            "u_mode": self.u_mode,
        }


def form_norm_grid(domain: PlanarDomain, grid: GridSpec,
                   quad: QuadratureConfig = QuadratureConfig(),
                   u_mode: str = "height", threads: int = 1):
    """Rows (x, y, z, omega_norm_g0, weighted_norm) over a search grid.

    The plotting-friendly flat table behind :func:`zero_locus_report`;
    ``weighted_norm`` is omega_norm / u^2 for the chosen defining function.
    """
    xs, ys, zs = grid.axes()
    pts = [H3Point(float(x), float(y), float(z))
           for x in xs for y in ys for z in zs]

    def row(p):
        mv, g, _ = measure_with_gradient(domain, p, quad)
        omega = SQRT2 * p.z * float(np.linalg.norm(g))
        u = _defining_u(u_mode, p, mv.value)
        weighted = omega / u**2 if u > 0 else math.inf
        return (p.x, p.y, p.z, omega, weighted)

    return pmap(row, pts, threads)


def _defining_u(mode: str, p: H3Point, f_value: float) -> float:
    if mode == "height":
        return p.z
    if mode == "sqrt_f":
        return math.sqrt(max(f_value * (1.0 - f_value), 0.0))
    raise ValueError("u_mode must be 'height' or 'sqrt_f'")


def zero_locus_report(domain: PlanarDomain, grid: GridSpec,
                      quad: QuadratureConfig = QuadratureConfig(),
                      threshold: float | None = None, u_mode: str = "height",
                      threads: int = 1) -> ZeroLocusReport:
    """Scan a grid for points where the u-weighted form norm nearly vanishes.

    The reported quantity is ``omega_norm / u^2``, which tends to a nonzero
    limit at the boundary plane (quadratic boundary expansion) but still
    vanishes at interior critical points, so near-boundary samples are
    excluded automatically.  Each sub-threshold cluster is refined by the
    Newton search; cross_referenced records whether clusters and refined
    critical points match up one-to-one.
    """
    if threshold is None:
        threshold = 10.0 * quad.tolerance
    xs, ys, zs = grid.axes()
    shape = (len(xs), len(ys), len(zs))
    pts = [H3Point(float(x), float(y), float(z))
           for x in xs for y in ys for z in zs]

    def weighted(p):
        mv, g, _ = measure_with_gradient(domain, p, quad)
        psi = p.z * float(np.linalg.norm(g))
        u = _defining_u(u_mode, p, mv.value)
        return SQRT2 * psi, (SQRT2 * psi / u**2 if u > 0 else math.inf)

    results = pmap(weighted, pts, threads)
    flat_hits = [i for i, (_, w) in enumerate(results) if w < threshold]
    samples = tuple(FormSample(pts[i], results[i][0], results[i][0] / SQRT2)
                    for i in flat_hits)

    # cluster grid-adjacent hits (6-neighborhood in index space)
    idx_of = {i: n for n, i in enumerate(flat_hits)}
    def coords(i):
        x, rem = divmod(i, shape[1] * shape[2])
        y, z = divmod(rem, shape[2])
        return x, y, z
    clusters = []
    unseen = set(flat_hits)
    while unseen:
        seed = min(unseen)
        stack, comp = [seed], []
        unseen.discard(seed)
        while stack:
            cur = stack.pop()
            comp.append(idx_of[cur])
            cx, cy, cz = coords(cur)
            for dx, dy, dz in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
                               (0, 0, 1), (0, 0, -1)):
                nx, ny, nz = cx + dx, cy + dy, cz + dz
                if not (0 <= nx < shape[0] and 0 <= ny < shape[1]
                        and 0 <= nz < shape[2]):
                    continue
                cand = (nx * shape[1] + ny) * shape[2] + nz
                if cand in unseen:
                    unseen.discard(cand)
                    stack.append(cand)
        clusters.append(tuple(sorted(comp)))

    refined = []
    refined_ok = []
    refine_tol = 10.0 * quad.tolerance  # numerical-zero scale, not the
    for comp in clusters:               # cluster-selection threshold
        best = min(comp, key=lambda n: samples[n].omega_norm_g0)
        try:
            rep = refine_critical_point_3d(domain, samples[best].base,
                                           refine_tol, quad)
            refined.append(rep)
            refined_ok.append(True)
        except RefinementError:
            refined_ok.append(False)
    cross = all(refined_ok) and len(refined) == len(clusters)
    return ZeroLocusReport(
        samples=samples,
        clusters=tuple(clusters),
        critical_points=tuple(refined),
        cross_referenced=bool(cross),
        threshold=float(threshold),
        u_mode=u_mode,
    )
