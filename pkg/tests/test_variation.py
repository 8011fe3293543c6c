import math

import numpy as np
import pytest

from trapsurf.errors import FlowLeftChart, NotClosed, NotConformal
from trapsurf.extrinsic import extrinsic_data
from trapsurf.geometry import vector_field_from_expressions
from trapsurf.quadrature import GridSpec
from trapsurf.sampling import random_polynomial_field
from trapsurf.variation import (
    FlowSpec,
    conformal_check,
    first_variation_density,
    flow_point,
    flow_volume_oracle,
    killing_integral_check,
    null_killing_constraint_check,
    rhs_identity,
    surface_divergence,
    tangential_components,
    volume_variation,
)

from conftest import cat

MINK_COORDS = ("t", "x", "y", "z")


def test_first_variation_density_examples(rng):
    sphere = cat("round_sphere")  # radius 2
    u = sphere.random_parameter_point(rng)
    # Killing flows preserve the volume element
    assert first_variation_density(sphere, cat("time_translation"), u) == \
        pytest.approx(0.0, abs=1e-12)
    # a homothety rescales every d-volume at rate d
    assert first_variation_density(sphere, cat("dilation"), u) == \
        pytest.approx(2.0, abs=1e-12)
    # unit outward flow of a sphere: rate 2/r
    assert first_variation_density(sphere, cat("radial_unit"), u) == \
        pytest.approx(1.0, abs=1e-10)


def test_rhs_identity_examples(rng):
    sphere = cat("round_sphere")
    u = sphere.random_parameter_point(rng)
    assert rhs_identity(sphere, cat("radial_unit"), u) == pytest.approx(
        1.0, abs=1e-9)
    assert rhs_identity(sphere, cat("dilation"), u) == pytest.approx(
        2.0, abs=1e-9)


def test_surface_divergence_of_tangential_killing(rng):
    torus = cat("ring_torus")
    rotation = cat("rotation_z")
    for _ in range(5):
        u = torus.random_parameter_point(rng)
        # rotation about z is tangent to the torus and divergence-free
        p = torus.point(u)
        tan, nor = torus.decompose(u, rotation.at(p))
        assert np.allclose(nor, 0.0, atol=1e-10)
        assert abs(surface_divergence(torus, rotation, u)) < 1e-8


def test_tangential_components_of_normal_field_vanish(rng):
    sphere = cat("round_sphere")
    u = sphere.random_parameter_point(rng)
    assert np.allclose(tangential_components(sphere, cat("radial_unit"), u),
                       0.0, atol=1e-12)


def test_identity_property_random_triples():
    rng = np.random.default_rng(42)
    names = ("round_sphere", "ring_torus", "flat_torus", "accelerated_curve",
             "comoving_sphere_rw", "ef_sphere", "ppwave_wavy_torus")
    embeddings = [cat(n) for n in names]
    for _ in range(60):
        emb = embeddings[rng.integers(len(embeddings))]
        xi = random_polynomial_field(rng, emb.ambient.dim)
        u = emb.random_parameter_point(rng)
        lhs = first_variation_density(emb, xi, u)
        rhs = rhs_identity(emb, xi, u)
        assert abs(lhs - rhs) < 1e-6


def test_divergence_integrates_to_zero_on_closed_surfaces():
    rng = np.random.default_rng(7)
    grid = GridSpec((12, 12))
    # surfaces that are compact in the ambient chart: any smooth field works
    for name in ("round_sphere", "ring_torus", "comoving_sphere_rw"):
        emb = cat(name)
        xi = random_polynomial_field(rng, emb.ambient.dim)
        result = volume_variation(emb, xi, grid)
        scale = abs(result.expansion_term) + abs(result.total) + 1.0
        assert abs(result.divergence_term) < 1e-7 * scale
    # tori closed only under the periodic identification: the field must
    # descend to the quotient, i.e. be periodic in the compact coordinates
    for name, coords in (("flat_torus", ("t", "x", "y", "z")),
                         ("ppwave_wavy_torus", ("u", "v", "x", "y"))):
        xi = vector_field_from_expressions(
            coords, ["sin(x)", "cos(y)", "sin(x + y)", "cos(x)"])
        result = volume_variation(cat(name), xi, grid)
        scale = abs(result.expansion_term) + abs(result.total) + 1.0
        assert abs(result.divergence_term) < 1e-7 * scale


def test_volume_variation_examples():
    grid = GridSpec((16, 16))
    sphere = cat("round_sphere")
    # outward unit flow of a round sphere: dV/dtau = (2/r) * area = 8 pi r
    out = volume_variation(sphere, cat("radial_unit"), grid)
    assert out.total == pytest.approx(16.0 * math.pi, rel=1e-6)
    # Killing flow: volume is exactly preserved
    still = volume_variation(sphere, cat("time_translation"), grid)
    assert abs(still.total) < 1e-10
    # extremal submanifold, normal-supported field: both terms vanish
    flat = volume_variation(cat("flat_torus"), cat("time_translation"), grid)
    assert abs(flat.total) < 1e-10


def test_volume_variation_requires_closed():
    with pytest.raises(NotClosed):
        volume_variation(cat("spacelike_plane"), cat("dilation"),
                         GridSpec((8, 8)))
    out = volume_variation(cat("spacelike_plane"), cat("dilation"),
                           GridSpec((8, 8)), allow_boundary=True)
    # dilation scales the [-1,1]^2 plane patch: dV/dtau = 2 * area = 8
    assert out.total == pytest.approx(8.0, rel=1e-9)


def test_flow_oracle_matches_identity():
    grid = GridSpec((16, 16))
    sphere = cat("round_sphere")
    oracle = flow_volume_oracle(sphere, FlowSpec(cat("radial_unit"), 1e-3), grid)
    assert oracle == pytest.approx(16.0 * math.pi, rel=1e-5)
    oracle = flow_volume_oracle(sphere, FlowSpec(cat("time_translation"), 1e-3),
                                grid)
    assert abs(oracle) < 1e-7


def test_flow_oracle_agrees_with_identity_on_random_fields():
    rng = np.random.default_rng(11)
    grid = GridSpec((12, 12))
    for name in ("round_sphere", "ring_torus", "ef_sphere"):
        emb = cat(name)
        xi = random_polynomial_field(rng, emb.ambient.dim)
        direct = volume_variation(emb, xi, grid).total
        oracle = flow_volume_oracle(emb, FlowSpec(xi, 1e-4), grid)
        assert abs(direct - oracle) / max(abs(oracle), 1e-8) < 1e-4


def test_flow_leaving_chart_is_an_error():
    ef = cat("ef_sphere", radius=1.0)
    inward = vector_field_from_expressions(("v", "r", "th", "ph"),
                                           ["0", "-1", "0", "0"])
    with pytest.raises(FlowLeftChart):
        flow_point(ef.ambient, inward, ef.point([1.0, 1.0]), tau=2.0)
    with pytest.raises(FlowLeftChart):
        flow_volume_oracle(ef, FlowSpec(inward, 2.0), GridSpec((4, 4)))


def test_conformal_check():
    mink = cat("minkowski")
    rng = np.random.default_rng(3)
    sample = [rng.normal(size=4) for _ in range(8)]

    res = conformal_check(mink, cat("dilation"), sample)
    assert res.accepted and res.residual < 1e-12
    assert res.psi(sample[0]) == pytest.approx(1.0, abs=1e-12)

    res = conformal_check(mink, cat("time_translation"), sample)
    assert res.accepted
    assert res.psi(sample[0]) == pytest.approx(0.0, abs=1e-12)

    rw = cat("robertson_walker", scale="t")
    rw_sample = [np.array([1.0 + 2.0 * rng.random(), *rng.normal(size=3)])
                 for _ in range(8)]
    res = conformal_check(rw, cat("rw_conformal", scale="t"), rw_sample)
    assert res.accepted
    assert res.psi(rw_sample[0]) == pytest.approx(1.0, abs=1e-10)

    shear = vector_field_from_expressions(MINK_COORDS, ["0", "x**2", "0", "0"])
    res = conformal_check(mink, shear, sample)
    assert not res.accepted


def test_killing_integral_identity_expanding_universe():
    emb = cat("comoving_sphere_rw")
    xi = cat("rw_conformal", scale="t")
    res = killing_integral_check(emb, xi, GridSpec((24, 24)))
    assert res.residual < 1e-6
    assert res.psi_sign == "positive"
    assert res.flux > 0.0
    assert res.obstruction_ok
    # Psi = 1, so lhs is the area and the flux is d * area
    area = emb.volume(GridSpec((24, 24)))
    assert res.lhs == pytest.approx(area, rel=1e-10)
    assert res.flux == pytest.approx(2.0 * area, rel=1e-8)


def test_killing_integral_identity_flat_killing_fields():
    grid = GridSpec((16, 16))
    for emb_name in ("round_sphere", "ring_torus"):
        for field_name in ("time_translation", "boost_x", "rotation_z"):
            res = killing_integral_check(cat(emb_name), cat(field_name), grid)
            assert res.psi_sign == "zero"
            assert abs(res.flux) < 1e-8
            assert res.obstruction_ok


def test_killing_integral_rejects_non_conformal_and_open():
    shear = vector_field_from_expressions(MINK_COORDS, ["0", "x**2", "0", "0"])
    with pytest.raises(NotConformal):
        killing_integral_check(cat("round_sphere"), shear, GridSpec((8, 8)))
    with pytest.raises(NotClosed):
        killing_integral_check(cat("spacelike_plane"), cat("dilation"),
                               GridSpec((8, 8)))


def test_null_killing_constraint():
    grid = GridSpec((12, 12))
    xi = cat("ppwave_null_killing")
    # wavy torus: H = 2 * wobble * cos(u1) cos(u2) d/dv, never spacelike
    fit = null_killing_constraint_check(cat("ppwave_wavy_torus"), xi, grid)
    assert fit.parallel
    assert not fit.spacelike_somewhere
    assert np.max(np.abs(fit.lambdas)) == pytest.approx(0.2, abs=1e-6)
    # geodesic torus: H = 0 fits trivially
    fit = null_killing_constraint_check(cat("ppwave_torus"), xi, grid)
    assert fit.parallel and not fit.spacelike_somewhere
    # a flat-space sphere has spacelike H everywhere
    fit = null_killing_constraint_check(cat("round_sphere"),
                                        cat("time_translation"), grid)
    assert fit.spacelike_somewhere


def test_tangential_part_is_the_induced_connection(rng):
    # the tangential part of the ambient derivative of a frame field
    # reproduces the Christoffel symbols of the induced metric
    sphere = cat("round_sphere")
    for _ in range(5):
        u = sphere.random_parameter_point(rng)
        th = u[0]
        data = sphere.induced(u)
        gam = sphere.ambient.christoffel_at(data.p)
        grad = sphere.second_frame_at(u) + np.einsum(
            "mrs,ra,sb->mab", gam, data.frame, data.frame)
        g = sphere.ambient.at(data.p)
        coeffs = np.einsum("cd,md,mab->cab", data.gamma_inv,
                           g @ data.frame, grad)
        assert coeffs[0, 1, 1] == pytest.approx(-math.sin(th) * math.cos(th),
                                                abs=1e-8)
        assert coeffs[1, 0, 1] == pytest.approx(math.cos(th) / math.sin(th),
                                                abs=1e-8)


def test_flow_spec_validation():
    xi = cat("time_translation")
    with pytest.raises(ValueError):
        FlowSpec(xi, tau_step=-1.0)
    with pytest.raises(ValueError):
        FlowSpec(xi, tau_step=1e-3, integrator_order=2)
    assert FlowSpec(xi, tau_step=1e-3, steps=4).tau == pytest.approx(4e-3)
