"""Regular 4g-gons, their side-pairing surface groups, and orbit machinery.

The regular hyperbolic 4g-gon centered at 0 in the Poincare disk with
interior angles pi/(2g) tiles the disk under the group generated by its
side pairings; the quotient is a closed genus-g surface.  Dissecting the
polygon into 8g right triangles with angles (pi/2, pi/4g, pi/4g) gives the
closed forms

    center-to-edge-midpoint  ya = arccosh(cot(pi/4g)),
    center-to-vertex          R = arccosh(cot^2(pi/4g)),

with R < 2 ya, Euclidean inradius r = tanh(ya/2), and hyperbolic area
4 pi (g - 1) by angle defect.

Edges are labeled a1, b1, a1^-1, b1^-1, ..., counterclockwise.  Each pairing
map is built as (rotation about 0) o (hyperbolic translation of length 2 ya
along the axis perpendicular to the source edge); correctness is enforced by
the relator product and fundamental-domain tests, not by derivation, and
tests must not assume specific matrix entries (any conjugate choice is as
good).  Word enumeration proceeds by length shells with free reduction and
matrix-proximity deduplication (sign-quotiented, since -M acts like M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import DiskPoint, MobiusMap

__all__ = [
    "PolygonData",
    "GroupElement",
    "DedupCollisionError",
    "regular_polygon",
    "min_genus",
    "side_pairing_generators",
    "polygon_contains",
    "enumerate_group",
    "orbit_cloud",
    "limit_set_sample",
]


class DedupCollisionError(RuntimeError):
    """Two enumerated elements were proximate but not numerically equal."""


@dataclass(frozen=True)
class PolygonData:
    """Closed-form data of the regular 4g-gon with angle sum 2 pi."""

    genus: int
    center_to_edge: float       # distance from 0 to an edge midpoint
    center_to_vertex: float     # distance from 0 to a vertex
    inradius_euclidean: float   # Euclidean radius of the inscribed circle
    area: float
    interior_angle: float

    def to_obj(self):
        return {
            "genus": self.genus,
            "center_to_edge": self.center_to_edge,
            "center_to_vertex": self.center_to_vertex,
            "inradius_euclidean": self.inradius_euclidean,
            "area": self.area,
            "interior_angle": self.interior_angle,
        }


@dataclass(frozen=True)
class GroupElement:
    """A disk-preserving isometry with the reduced word that produced it.

    Words use 'a1', 'b1', ... for generators and capitalized letters for
    inverses, joined by '.'; the identity has the empty word.
    """

    map: MobiusMap
    word: str

    @property
    def word_length(self) -> int:
        return 0 if not self.word else self.word.count(".") + 1


def regular_polygon(genus: int) -> PolygonData:
    if genus < 2:
        raise ValueError(f"genus must be >= 2, got {genus}")
    alpha = math.pi / (4.0 * genus)
    ya = math.acosh(1.0 / math.tan(alpha))
    big_r = math.acosh(1.0 / math.tan(alpha) ** 2)
    return PolygonData(
        genus=genus,
        center_to_edge=ya,
        center_to_vertex=big_r,
        inradius_euclidean=math.tanh(ya / 2.0),
        area=4.0 * math.pi * (genus - 1),
        interior_angle=math.pi / (2.0 * genus),
    )


def min_genus(delta: float) -> int:
    """Least genus guaranteeing the polygon contains the disk of radius 1-delta.

    Evaluates 1 + ceil(1/delta^2); the ceiling is guarded against float
    representation noise so inputs whose exact value sits on an integer
    (e.g. delta = 1/2, or delta arbitrarily close to 1) round as intended.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return 1 + math.ceil(1.0 / delta**2 - 1e-12)


def _edge_midpoint_angles(genus: int) -> np.ndarray:
    n = 4 * genus
    return (2.0 * np.arange(n) + 1.0) * math.pi / n


def _pairing_map(theta_src: float, theta_dst: float, ya: float) -> MobiusMap:
    """Isometry carrying the edge at angle theta_src onto the edge at theta_dst.

    Translation by 2 ya along the axis through the source edge's midpoint
    carries the edge to the antipodal slot (reversing its orientation, which
    is exactly what the gluing scheme needs); a rotation then parks it at the
    destination.
    """
    axis = theta_src + math.pi
    t = (MobiusMap.disk_rotation(axis)
         @ MobiusMap.disk_translation(2.0 * ya)
         @ MobiusMap.disk_rotation(-axis))
    return MobiusMap.disk_rotation(theta_dst - theta_src - math.pi) @ t


def side_pairing_generators(genus: int) -> list[GroupElement]:
    """The 2g generators (a1, b1, ..., ag, bg) of the surface group.

    Each ai carries the edge labeled ai^-1 onto the edge labeled ai, and each
    bi the edge labeled bi onto the edge labeled bi^-1; with this convention
    the product of commutators [a1, b1] ... [ag, bg] is the identity in
    PSL(2, R)-conjugated form (+-identity as a matrix).
    """
    poly = regular_polygon(genus)
    thetas = _edge_midpoint_angles(genus)
    out = []
    for i in range(genus):
        a_edge, a_inv_edge = 4 * i, 4 * i + 2
        b_edge, b_inv_edge = 4 * i + 1, 4 * i + 3
        a = _pairing_map(thetas[a_inv_edge], thetas[a_edge], poly.center_to_edge)
        b = _pairing_map(thetas[b_edge], thetas[b_inv_edge], poly.center_to_edge)
        out.append(GroupElement(a, f"a{i + 1}"))
        out.append(GroupElement(b, f"b{i + 1}"))
    return out


def polygon_contains(genus: int, zeta: complex) -> bool:
    """Whether a disk-model point lies in the open fundamental polygon."""
    poly = regular_polygon(genus)
    r = poly.inradius_euclidean
    c = (r + 1.0 / r) / 2.0      # Euclidean center of each edge's geodesic circle
    rr = (1.0 / r - r) / 2.0     # and its radius (circle orthogonal to the unit one)
    if abs(zeta) >= 1.0:
        return False
    for th in _edge_midpoint_angles(genus):
        if abs(zeta - c * np.exp(1j * th)) <= rr:
            return False
    return True


def surface_relator(generators: list[GroupElement]) -> MobiusMap:
    """The product of commutators [a1, b1]...[ag, bg] over the generator list."""
    prod = MobiusMap.identity()
    for i in range(0, len(generators), 2):
        a = generators[i].map
        b = generators[i + 1].map
        prod = prod @ a @ b @ a.inverse() @ b.inverse()
    return prod


# -- enumeration -----------------------------------------------------------------

_BUCKET = 1e7  # orbit-point grid used to bucket candidate duplicates


class _Registry:
    """Spatial-bucket registry deduplicating matrices up to sign."""

    def __init__(self, tol: float):
        self.tol = tol
        self.buckets: dict = {}
        self.mats: list = []

    def add(self, mat: np.ndarray) -> bool:
        """Register a matrix; returns False if it duplicates a known one."""
        w = mat[0, 1] / mat[1, 1]  # image of 0
        kx, ky = round(w.real * _BUCKET), round(w.imag * _BUCKET)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self.buckets.get((kx + dx, ky + dy), ()):
                    other = self.mats[idx]
                    dist = min(np.abs(mat - other).max(),
                               np.abs(mat + other).max())
                    if dist < self.tol:
                        return False
                    if dist < 1e-6:
                        raise DedupCollisionError(
                            f"matrices at ambiguous distance {dist:.3e} "
                            f"(tolerance {self.tol:.1e})")
        self.buckets.setdefault((kx, ky), []).append(len(self.mats))
        self.mats.append(mat)
        return True


def enumerate_group(generators: list[GroupElement], max_word_length: int,
                    dedup_tol: float = 1e-9) -> list[GroupElement]:
    """All distinct elements represented by reduced words up to the length bound.

    Breadth-first by word length with free reduction; duplicates (relator
    coincidences) are removed by sign-quotiented matrix proximity.  Output
    order is deterministic: by shell, then by word in the fixed letter order.
    Includes the identity.
    """
    if max_word_length < 0:
        raise ValueError("max_word_length must be >= 0")
    letters = []
    for gen in generators:
        letters.append((gen.word, gen.map.matrix()))
        letters.append((gen.word.capitalize(), gen.map.inverse().matrix()))
    inverse_of = {i: i + 1 if i % 2 == 0 else i - 1 for i in range(len(letters))}

    registry = _Registry(dedup_tol)
    identity = np.eye(2, dtype=complex)
    registry.add(identity)
    out = [GroupElement(MobiusMap.identity(), "")]
    shell = [(-1, "", identity)]
    for _ in range(max_word_length):
        new_shell = []
        for last, word, mat in shell:
            for li, (name, lmat) in enumerate(letters):
                if last >= 0 and li == inverse_of[last]:
                    continue
                cand = mat @ lmat
                if registry.add(cand):
                    cand_word = f"{word}.{name}" if word else name
                    new_shell.append((li, cand_word, cand))
                    out.append(GroupElement(
                        MobiusMap(cand[0, 0], cand[0, 1], cand[1, 0], cand[1, 1]),
                        cand_word))
        shell = new_shell
    return out


def orbit_cloud(elements: list[GroupElement], base: DiskPoint) -> np.ndarray:
    """Images of a disk point under every element, as a complex array."""
    out = np.empty(len(elements), dtype=complex)
    for i, el in enumerate(elements):
        out[i] = el.map.apply_boundary(base.zeta)
    return out


def limit_set_sample(genus: int, depth: int) -> np.ndarray:
    """Boundary-circle approximation from the deepest word shell.

    Images of 0 under all reduced words of exactly the maximal length,
    projected radially onto the unit circle.  For these first-type groups the
    limit set is the full circle, so the sample fills in as depth grows.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    elements = enumerate_group(side_pairing_generators(genus), depth)
    ws = np.array([el.map.apply_boundary(0j) for el in elements
                   if el.word_length == depth])
    return ws / np.abs(ws)
