import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tunnelvision.domains import Disk
from tunnelvision.greens import (NonConvergentSeriesError, PoleCollisionError,
                                 PointConfiguration, find_quantizable,
                                 green_flux, h3_green, potential_V,
                                 quantization_sum, quotient_green)
from tunnelvision.groups import enumerate_group
from tunnelvision.hyperbolic import H3Point, h3_distance, laplace_beltrami
from tunnelvision.measure import QuadratureConfig

CFG = QuadratureConfig(tolerance=1e-9)


def test_green_term_formula():
    # at distance log sqrt(2) the term is 1/(e^{2d} - 1) = 1/(2 - 1) = 1
    p, q = H3Point(0, 0, 1), H3Point(0, 0, math.sqrt(2.0))
    assert h3_distance(p, q) == pytest.approx(math.log(math.sqrt(2.0)),
                                              abs=1e-15)
    assert h3_green(p, q) == pytest.approx(1.0, abs=1e-12)


def test_green_decay():
    p = H3Point(0, 0, 1)
    assert h3_green(p, H3Point(0, 0, 1e6)) < 1e-10
    assert h3_green(p, H3Point(0, 0, 1.5)) > h3_green(p, H3Point(0, 0, 5.0))


def test_green_pole_collision():
    p = H3Point(0, 0, 1)
    with pytest.raises(PoleCollisionError):
        h3_green(p, H3Point(0, 0, 1 + 1e-12))


def test_green_is_harmonic_off_pole():
    pole = H3Point(0, 0, 1)

    def g(q):
        return h3_green(pole, q)

    r1 = laplace_beltrami(g, H3Point(1, 1, 2), 0.02)
    r2 = laplace_beltrami(g, H3Point(1, 1, 2), 0.01)
    assert abs(r1) < 1e-3
    assert math.log2(abs(r1) / abs(r2)) >= 1.8


@pytest.mark.parametrize("radius", [0.25, 0.5, 1.0, 2.0])
def test_flux_is_minus_two_pi(radius):
    flux = green_flux(H3Point(0.3, -0.2, 0.8), radius, 64)
    assert flux == pytest.approx(-2 * math.pi, abs=1e-4)


def test_flux_radius_independence():
    pole = H3Point(0, 0, 1)
    fluxes = [green_flux(pole, r, 48) for r in (0.25, 2.0)]
    assert fluxes[0] == pytest.approx(fluxes[1], abs=1e-4)


def test_flux_ignores_distant_pole():
    p1, p2 = H3Point(0, 0, 1), H3Point(1.0, 0.0, 1.0)

    def two_pole(q):
        return h3_green(p1, q) + h3_green(p2, q)

    flux = green_flux(p1, 0.3, 48, field=two_pole)
    assert flux == pytest.approx(-2 * math.pi, abs=1e-4)


def test_flux_validation():
    with pytest.raises(ValueError):
        green_flux(H3Point(0, 0, 1), -1.0, 32)
    with pytest.raises(ValueError):
        green_flux(H3Point(0, 0, 1), 0.5, 2)


def test_quotient_trivial_group_equals_free_green(genus2_generators):
    identity_only = enumerate_group(genus2_generators, 0)
    pole, q = H3Point(0.1, 0.0, 1.0), H3Point(0.4, 0.2, 0.7)
    sv = quotient_green(identity_only, pole, q, 0)
    assert sv.value == pytest.approx(h3_green(pole, q), abs=1e-15)
    assert sv.tail_estimate == 0.0
    assert sv.shells_used == 0


@pytest.fixture(scope="module")
def quotient_setup(genus2_elements):
    pole = H3Point(0.1, 0.05, 0.9)
    q = H3Point(0.3, -0.2, 0.6)
    return genus2_elements, pole, q


def test_quotient_shells_decay(quotient_setup):
    elements, pole, q = quotient_setup
    sv = quotient_green(elements, pole, q, 6)
    sums = np.array(sv.shell_sums)
    assert np.all(sums > 0)
    assert np.all(np.diff(sums[1:]) < 0)
    # partial sums over shells increase (all terms positive)
    assert np.all(np.diff(np.cumsum(sums)) > 0)


def test_quotient_value_within_tail_of_deeper_truncation(quotient_setup):
    elements, pole, q = quotient_setup
    sv5 = quotient_green(elements, pole, q, 5)
    sv6 = quotient_green(elements, pole, q, 6)
    assert abs(sv6.value - sv5.value) <= sv5.tail_estimate
    assert sv6.value >= sv5.value  # positive terms only


def test_quotient_group_invariance(quotient_setup, genus2_generators):
    elements, pole, q = quotient_setup
    sv = quotient_green(elements, pole, q, 6)
    moved = genus2_generators[0].map.apply_h3(q)
    sv2 = quotient_green(elements, pole, moved, 6)
    assert abs(sv.value - sv2.value) <= 2 * max(sv.tail_estimate,
                                                sv2.tail_estimate)


def test_quotient_symmetry(quotient_setup):
    elements, pole, q = quotient_setup
    sv = quotient_green(elements, pole, q, 6)
    sv2 = quotient_green(elements, q, pole, 6)
    assert abs(sv.value - sv2.value) <= 2 * max(sv.tail_estimate,
                                                sv2.tail_estimate)


def test_quotient_pole_collision(quotient_setup):
    elements, pole, _ = quotient_setup
    with pytest.raises(PoleCollisionError):
        quotient_green(elements, pole, pole, 6)


def test_nondecaying_shells_flagged():
    # a fake "group" of two far translations repeated does not decay
    from tunnelvision.groups import GroupElement
    from tunnelvision.hyperbolic import MobiusMap
    fake = [GroupElement(MobiusMap.identity(), ""),
            GroupElement(MobiusMap.translation(0.01), "a1"),
            GroupElement(MobiusMap.translation(0.02), "a1.a1"),
            GroupElement(MobiusMap.translation(0.03), "a1.a1.a1")]
    with pytest.raises(NonConvergentSeriesError):
        quotient_green(fake, H3Point(0, 0, 1), H3Point(5.0, 0, 1), 3)


def test_potential_empty_configuration():
    empty = PointConfiguration(points=())
    assert potential_V(empty, H3Point(1, 2, 3)) == 1.0


def test_potential_far_and_near():
    config = PointConfiguration(points=(H3Point(0, 0, 1),))
    far = H3Point(0, 0, 200.0)
    d = h3_distance(H3Point(0, 0, 1), far)
    assert potential_V(config, far) == pytest.approx(1.0, abs=2 * math.exp(-2 * d) + 1e-12)
    assert potential_V(config, far) > 1.0
    near = H3Point(0, 0, 1.001)
    ratio = (potential_V(config, near) - 1.0) / h3_green(H3Point(0, 0, 1), near)
    assert ratio == pytest.approx(1.0, abs=1e-12)


def test_potential_is_harmonic_off_poles():
    config = PointConfiguration(points=(H3Point(0, 0, 1), H3Point(0.5, 0, 2)))

    def v(q):
        return potential_V(config, q)

    for q in (H3Point(1.0, 0.5, 0.8), H3Point(-0.5, 0.1, 3.0)):
        r1 = laplace_beltrami(v, q, 0.02)
        r2 = laplace_beltrami(v, q, 0.01)
        assert math.log2(abs(r1) / abs(r2)) >= 1.8


def test_configuration_validation():
    with pytest.raises(ValueError):
        PointConfiguration(points=(H3Point(0, 0, 1), H3Point(0, 0, 1)))
    with pytest.raises(ValueError):
        PointConfiguration(points=(H3Point(0, 0, 1),), f_values=(1.5,))


def test_quantization_k1_never():
    config = PointConfiguration(points=(H3Point(0, 0, 1),), f_values=(0.5,))
    res = quantization_sum(Disk(0, 1.0), config, CFG)
    assert not res.is_quantizable
    # even exactly integer-valued sums fail the 0 < ell < k requirement
    config2 = PointConfiguration(points=(H3Point(0, 0, 1),),
                                 f_values=(1.0 - 1e-12,))
    assert not quantization_sum(Disk(0, 1.0), config2, CFG).is_quantizable


def test_quantization_halfplane_half_levels():
    # two points at measure 1/2 each (the half-plane prototype level set)
    config = PointConfiguration(points=(H3Point(0, 0, 1), H3Point(1, 0, 1)),
                                f_values=(0.5, 0.5))
    res = quantization_sum(Disk(0, 1.0), config, CFG)
    assert res.is_quantizable and res.ell == 1
    assert res.total == pytest.approx(1.0, abs=1e-15)


def test_quantization_mixed_levels():
    config = PointConfiguration(
        points=(H3Point(0, 0, 1), H3Point(1, 0, 1), H3Point(0, 1, 1)),
        f_values=(0.2, 0.3, 0.5))
    res = quantization_sum(Disk(0, 1.0), config, CFG)
    assert res.is_quantizable and res.ell == 1


@given(st.permutations([0.13, 0.27, 0.35, 0.25]))
def test_quantization_sum_permutation_invariant(perm):
    pts = (H3Point(0, 0, 1), H3Point(1, 0, 1), H3Point(0, 1, 1),
           H3Point(1, 1, 1))
    base = quantization_sum(Disk(0, 1.0),
                            PointConfiguration(points=pts,
                                               f_values=(0.13, 0.27, 0.35,
                                                         0.25)), CFG)
    permuted = quantization_sum(Disk(0, 1.0),
                                PointConfiguration(points=pts,
                                                   f_values=tuple(perm)), CFG)
    assert permuted.total == base.total  # fsum is exactly rounded


def test_find_quantizable_disk():
    config = find_quantizable(Disk(0, 1.0), 2, 1, CFG)
    res = quantization_sum(Disk(0, 1.0), config, CFG)
    assert abs(res.total - 1.0) < 1e-8
    assert res.is_quantizable
    # the axis line solves the closed form 1/(1+z^2) = 1/2 at z = 1
    on_axis = [p for p in config.points if p.x == 0 and p.y == 0]
    assert on_axis and on_axis[0].z == pytest.approx(1.0, abs=1e-4)


def test_find_quantizable_dogbone(dogbone01):
    config = find_quantizable(dogbone01, 2, 1, CFG)
    res = quantization_sum(dogbone01, config, CFG)
    assert abs(res.total - 1.0) < 1e-8
    pts = config.points
    assert h3_distance(pts[0], pts[1]) > 0


def test_find_quantizable_validation(dogbone01):
    with pytest.raises(ValueError):
        find_quantizable(dogbone01, 1, 1, CFG)
    with pytest.raises(ValueError):
        find_quantizable(dogbone01, 2, 2, CFG)
    with pytest.raises(ValueError):
        find_quantizable(dogbone01, 2, 0, CFG)


def test_find_quantizable_prescribed_levels():
    domain = Disk(0, 1.0)
    config = find_quantizable(domain, 3, 1, CFG, levels=(0.2, 0.3, 0.5))
    assert np.allclose(config.f_values, (0.2, 0.3, 0.5), atol=1e-8)
    res = quantization_sum(domain, config, CFG)
    assert res.is_quantizable and res.ell == 1
    with pytest.raises(ValueError):
        find_quantizable(domain, 3, 1, CFG, levels=(0.2, 0.3))
    with pytest.raises(ValueError):
        find_quantizable(domain, 3, 1, CFG, levels=(0.2, 0.3, 0.6))
    with pytest.raises(ValueError):
        find_quantizable(domain, 2, 1, CFG, levels=(1.2, -0.2))
