import numpy as np
import pytest

from gaugeframe.errors import SupportEscape
from gaugeframe.models.lattice_pft import check_support
from gaugeframe.models import (
    boost_convergence,
    conormal_identities,
    convergence_orders,
    embedding_geometry,
    gaussian_packet,
    inertial_frame,
    lorentz_boost,
    make_lattice_pft,
    pft_generators,
    reduced_density,
    spatial_rotation,
    verify_boost_hamiltonian,
)
from gaugeframe.phase_core import poisson_bracket

LENGTH = 12.8
DZS = (0.2, 0.1, 0.05)


def lattice(dz, D=1, mu=0.0, length=LENGTH):
    return make_lattice_pft(D, int(round(length / dz)), dz, mu)


def identity_embedding(grid):
    return np.vstack([np.zeros(grid.sites), grid.coords])


def test_identity_embedding_geometry():
    grid = lattice(0.1).params["grid"]
    geo = embedding_geometry(grid, identity_embedding(grid))
    assert np.allclose(geo.normal, [[1.0], [0.0]], atol=1e-13)
    assert np.allclose(geo.det_q, 1.0, atol=1e-13)
    eta_nn = -geo.normal[0] ** 2 + geo.normal[1] ** 2
    assert np.allclose(eta_nn, -1.0, atol=1e-13)


def test_pack_roundtrip():
    grid = lattice(0.2).params["grid"]
    u = gaussian_packet(grid)
    phi, pi = u[:grid.sites], u[grid.sites:] / grid.weight
    out = grid.unpack(grid.pack(phi, pi))
    assert np.allclose(out[0], phi) and np.allclose(out[1], pi)
    assert np.array_equal(out[2], identity_embedding(grid))


@pytest.mark.parametrize("L", [np.eye(2), lorentz_boost(1, 0.4), lorentz_boost(1, -1.1)])
def test_inertial_frames_share_reduced_density(L):
    model = lattice(0.2)
    grid = model.params["grid"]
    u = gaussian_packet(grid)
    phi, pi = u[:grid.sites], u[grid.sites:] / grid.weight
    Z = 0.5 * (pi ** 2 + grid.diff(phi, 0) ** 2)
    assert np.max(np.abs(reduced_density(model, L, 0.7, phi, pi) - Z)) <= 1e-12


def test_inertial_frame_rejects_non_lorentz_matrix():
    model = lattice(0.4)
    with pytest.raises(ValueError):
        inertial_frame(model, np.diag([1.0, 2.0]))
    frame = inertial_frame(model, lorentz_boost(1, 0.3))
    assert len(frame.clocks) == 2 * model.params["grid"].sites


def test_conormal_identities_for_smooth_embeddings(rng):
    for D, dz in ((1, 0.1), (2, 0.4)):
        grid = lattice(dz, D).params["grid"]
        x = identity_embedding(grid)
        for _ in range(3):
            freq = rng.uniform(0.1, 1.0, (D + 1, D))
            amp = rng.uniform(-0.2, 0.2, (D + 1, 1))
            bent = x + amp * np.sin(freq @ grid.coords)
            norm_err, ortho_err = conormal_identities(grid, bent)
            assert norm_err <= 1e-12 and ortho_err <= 1e-12


def test_conormal_identities_for_rotated_and_boosted_slices():
    grid = lattice(0.4, D=2).params["grid"]
    x = identity_embedding(grid)
    for L in (spatial_rotation(0.7), lorentz_boost(2, 0.5, axis=2)):
        assert max(conormal_identities(grid, L @ x)) <= 1e-12


@pytest.mark.parametrize("D", [1, 2])
def test_zero_configuration_has_zero_generators(D):
    grid = lattice(0.4, D, mu=0.8).params["grid"]
    gens = pft_generators(make_lattice_pft(D, grid.N, grid.dz, 0.8))
    zero = np.zeros(4 * grid.n // 2)
    assert all(f(zero) == 0.0 for f in gens.values())


def test_lifted_generators_ignore_embedding():
    model = lattice(0.4)
    grid = model.params["grid"]
    lifted = pft_generators(model)
    bare = pft_generators(model, on_fields=True)
    u = gaussian_packet(grid)
    z = grid.pack(u[:grid.sites], u[grid.sites:] / grid.weight)
    for name in bare:
        assert lifted[name](z) == pytest.approx(bare[name](u), rel=1e-14)


def bracket_errors():
    bh, bp = [], []
    for dz in DZS:
        grid = lattice(dz).params["grid"]
        gens = pft_generators(lattice(dz), on_fields=True)
        u = gaussian_packet(grid)
        bh.append(abs(poisson_bracket(gens["kappa_B"], gens["h"], u) - gens["p_momentum"](u)))
        bp.append(abs(poisson_bracket(gens["kappa_B"], gens["p_momentum"], u) - gens["h"](u)))
    return bh, bp


def test_boost_brackets_converge_at_second_order():
    bh, bp = bracket_errors()
    for errs in (bh, bp):
        assert errs[1] <= 0.02
        assert np.all(np.abs(convergence_orders(DZS, errs) - 2.0) <= 0.3)


def test_boost_at_zero_rapidity_is_exact():
    model = lattice(0.1)
    report = verify_boost_hamiltonian(model, 0.0, gaussian_packet(model.params["grid"]))
    assert report.abs_deviation == 0.0


def test_boosted_energy_converges_at_second_order():
    reports, orders = boost_convergence(0.1, DZS, LENGTH)
    assert np.all(np.abs(orders - 2.0) <= 0.3)
    assert reports[1].rel_deviation <= 5e-3


def test_static_massive_field_has_no_momentum():
    devs = []
    for dz in (0.2, 0.1):
        model = lattice(dz, mu=1.0)
        u = gaussian_packet(model.params["grid"])
        u[model.params["grid"].sites:] = 0.0
        report = verify_boost_hamiltonian(model, 0.1, u)
        assert report.p_initial == 0.0
        assert report.predicted == pytest.approx(np.cosh(0.1) * report.h_initial, rel=1e-15)
        devs.append(report.rel_deviation)
    assert devs[1] <= 1e-3
    assert 3.0 <= devs[0] / devs[1] <= 5.0


def test_support_escape():
    model = lattice(0.1)
    grid = model.params["grid"]
    with pytest.raises(SupportEscape):
        check_support(grid, gaussian_packet(grid, center=5.5))
    with pytest.raises(SupportEscape):
        verify_boost_hamiltonian(model, 0.1, gaussian_packet(grid, center=5.5))
    check_support(grid, gaussian_packet(grid))


def test_rotation_commutes_with_energy_in_two_dimensions():
    model = lattice(0.3, D=2, length=7.2)
    grid = model.params["grid"]
    gens = pft_generators(model, on_fields=True)
    # off-axis packet moving along z^1: non-zero angular momentum
    z1, z2 = grid.coords
    phi = np.exp(-0.5 * ((z1 - 0.3) ** 2 + (z2 - 0.8) ** 2) / 0.6 ** 2)
    u = np.concatenate([phi, grid.weight * phi * (z1 - 0.3) / 0.6 ** 2])
    assert abs(poisson_bracket(gens["kappa_R"], gens["h"], u)) <= 1e-12
    assert abs(gens["kappa_R"](u)) > 1e-3
