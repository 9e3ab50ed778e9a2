import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugeframe.flow_engine import FlowGenerator, flow
from gaugeframe.gauge_system import GaugeClock
from gaugeframe.models import make_relativistic_particle
from gaugeframe.phase_core import ScalarField, coordinate_field, dirac_bracket, poisson_bracket
from gaugeframe.relational import (
    RelationalObservable,
    evolve_geometric,
    evolve_hamiltonian,
    observable_values,
    physical_hamiltonian,
    reduced_hamiltonian,
    reduced_hamiltonian_gradient,
)
from gaugeframe.verification import kepler_radial_momentum, sample_kepler


def test_reference_observable_equals_clock(particle3, rng):
    frame = particle3.frame("frame1", GaugeClock((0.2, -1.0, 0.5), "polynomial"))
    obs = RelationalObservable(coordinate_field(8, 0), frame, 1.3)
    for _ in range(5):
        qp = np.concatenate([rng.uniform(-1, 1, 3), [-0.5], rng.uniform(-1, 1, 2)])
        z = frame.constraints.on_surface(qp, rng.uniform(-2, 2, 1))
        assert obs(z) == pytest.approx(frame.k(1.3)[0], abs=1e-12)


def test_particle_observable_example(particle):
    frame = particle.frame("frame1", 1.0)
    z = np.array([0.0, 0.0, -math.sqrt(2), -1.0])
    obs = RelationalObservable(coordinate_field(4, 1), frame, 2.0)
    assert obs(z) == pytest.approx(-math.sqrt(2), abs=1e-12)


def test_particle_observables_match_closed_form(particle3, rng):
    frame = particle3.frame("frame1", 1.0)
    oracle = particle3.oracles["oracle_obs"]
    for _ in range(20):
        qp = np.concatenate([rng.uniform(-2, 2, 3), rng.uniform(-2, 2, 3)])
        x = rng.uniform(-1, 1)
        t = rng.uniform(-2, 2)
        z = frame.constraints.on_surface(qp, [x])
        got = frame.project(observable_values(frame, t, z))
        assert np.max(np.abs(got - oracle(qp, x, t))) <= 1e-9


def test_kepler_shape_observable(kepler, rng):
    frame = kepler.frame("angular", 1.0)
    shape = kepler.oracles["oracle_shape"]
    for l, r, _ in sample_kepler(rng, kepler, 10, (2.5, 4.0)):
        phi = rng.uniform(-1, 1)
        z = np.array([r, phi, kepler_radial_momentum(kepler, r, l), l])
        k = phi + rng.uniform(-0.3, 0.2)
        obs = RelationalObservable(coordinate_field(4, 0), frame, k)
        assert obs(z) == pytest.approx(shape(r, phi, l, k), abs=1e-8)


def test_reduced_hamiltonian_examples(particle, kepler, toy):
    f1 = particle.frame("frame1", 2.0)
    assert reduced_hamiltonian(f1, 0.0, [0.3, -1.0]) == pytest.approx(2 * math.sqrt(2), abs=1e-14)
    f2 = particle.frame("frame2", 1.0)
    assert reduced_hamiltonian(f2, 0.0, [0.3, -2.0]) == pytest.approx(math.sqrt(3), abs=1e-14)
    ang = kepler.frame("angular", 1.0)
    r, p = 3.0, -0.4
    expected = math.sqrt((2 * (0.05 + 1 / r) - p * p) * r * r)
    assert reduced_hamiltonian(ang, 0.0, [r, p]) == pytest.approx(expected, abs=1e-14)
    a = toy.frame("A", -0.5)
    assert reduced_hamiltonian(a, 0.0, [1.0, 0.8]) == pytest.approx(-0.4, abs=1e-15)


def test_frozen_clock_has_zero_hamiltonian(particle):
    frame = particle.frame("frame1", GaugeClock.constant(0.7), allow_frozen=True)
    assert reduced_hamiltonian(frame, 3.0, [0.0, -1.0]) == 0.0
    assert np.array_equal(reduced_hamiltonian_gradient(frame, 3.0, [0.0, -1.0]), [0.0, 0.0])
    traj = evolve_hamiltonian(frame, [0.2, -1.0], 0.0, 2.0)
    assert np.allclose(traj.states[-1], [0.2, -1.0], atol=1e-14)


def test_physical_hamiltonian_is_gauge_invariant(particle, rng):
    frame = particle.frame("frame1", 1.0)
    z = frame.constraints.on_surface([0.1, -0.6], [0.4])
    gen = FlowGenerator([0.9], frame.constraints)
    a = physical_hamiltonian(frame, 0.5, 0.2, z)
    b = physical_hamiltonian(frame, 0.5, 0.2, flow(gen, z, 1.0))
    assert a == pytest.approx(b, abs=1e-12)
    assert a == pytest.approx(math.sqrt(1 + 0.36), abs=1e-12)


def test_hamiltonian_route_closed_forms(particle, toy):
    f1 = particle.frame("frame1", 1.0)
    traj = evolve_hamiltonian(f1, [0.0, -1.0], 0.0, 2.0, t_eval=np.linspace(0, 2, 5))
    assert np.allclose(traj.states[:, 0], -traj.times / math.sqrt(2), atol=1e-9)
    assert np.allclose(traj.states[:, 1], -1.0, atol=1e-14)
    a = toy.frame("A", GaugeClock((0.0, 1.0, 0.5), "polynomial"))
    out = evolve_hamiltonian(a, [0.2, 0.7], 0.0, 1.0).states[-1]
    assert out == pytest.approx([0.2 + 1.5, 0.7], abs=1e-9)


def test_kepler_energy_is_conserved_under_evolution(kepler, rng):
    frame = kepler.frame("angular", 1.0)
    l, r, _ = sample_kepler(rng, kepler, 1, (3.0, 4.0))[0]
    qp = np.array([r, kepler_radial_momentum(kepler, r, l)])
    traj = evolve_hamiltonian(frame, qp, 0.0, 0.3, t_eval=np.linspace(0, 0.3, 7))
    h = [reduced_hamiltonian(frame, t, s) for t, s in zip(traj.times, traj.states)]
    assert np.ptp(h) <= 1e-9
    assert h[0] == pytest.approx(abs(l), abs=1e-12)


def test_geometric_route_identity_and_toy(toy):
    a = toy.frame("A", 2.0)
    qp = np.array([0.4, -1.1])
    assert np.array_equal(evolve_geometric(a, qp, 0.3, 0.3), qp)
    assert evolve_geometric(a, qp, 0.3, 1.0) == pytest.approx([0.4 + 1.4, -1.1], abs=1e-12)


@pytest.mark.parametrize("clock", [
    GaugeClock.linear(1.0),
    GaugeClock((0.3, -0.7, 0.4), "polynomial"),
    GaugeClock((0.0, 1.0, 0.0, -0.2), "polynomial"),
])
def test_routes_agree_for_particle(particle3, rng, clock):
    frame = particle3.frame("frame1", clock)
    for _ in range(3):
        qp = np.concatenate([rng.uniform(-1, 1, 3), [-0.8], rng.uniform(-1, 1, 2)])
        geo = evolve_geometric(frame, qp, 0.1, 1.1)
        ham = evolve_hamiltonian(frame, qp, 0.1, 1.1).states[-1]
        assert np.max(np.abs(geo - ham)) <= 1e-8


def test_routes_agree_for_kepler(kepler, rng):
    for name in ("angular", "radial"):
        frame = kepler.frame(name, 1.0)
        for l, r, _ in sample_kepler(rng, kepler, 3, (3.0, 4.0)):
            p = kepler_radial_momentum(kepler, r, l)
            qp = np.array([r, p]) if name == "angular" else np.array([0.2, l])
            t0 = 0.2 if name == "angular" else r
            t1 = t0 + (0.2 if name == "angular" else -0.5)
            geo = evolve_geometric(frame, qp, t0, t1)
            ham = evolve_hamiltonian(frame, qp, t0, t1).states[-1]
            assert np.max(np.abs(geo - ham)) <= 1e-8


def test_observables_form_homomorphism(particle, rng):
    frame = particle.frame("frame1", 1.0)
    q, p = coordinate_field(4, 1), coordinate_field(4, 3)
    z = frame.constraints.on_surface([0.3, -0.7], [1.2])
    t = 0.6
    landed = observable_values(frame, t, z)
    for f, g in ((q, p), (q, q)):
        prod = RelationalObservable(f * g, frame, t)(z)
        summ = RelationalObservable(f + g, frame, t)(z)
        assert prod == pytest.approx(f(landed) * g(landed), abs=1e-12)
        assert summ == pytest.approx(f(landed) + g(landed), abs=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.5, -0.2), st.floats(-1, 1), st.floats(-2, 2))
def test_observable_bracket_is_canonical(q, p, x, t):
    frame = make_relativistic_particle(1).frame("frame1", 1.0)
    z = frame.constraints.on_surface([q, p], [x])
    oq = RelationalObservable(coordinate_field(4, 1), frame, t)
    op = RelationalObservable(coordinate_field(4, 3), frame, t)
    # {p, q} = +1 convention
    assert poisson_bracket(ScalarField(oq), ScalarField(op), z, 1e-5) == pytest.approx(-1.0, abs=1e-6)


def test_dirac_bracket_equals_poisson_for_observables(particle):
    frame = particle.frame("frame1", 1.0)
    z = frame.constraints.on_surface([0.3, -0.7], [0.5])
    oq = ScalarField(RelationalObservable(coordinate_field(4, 1), frame, 0.4))
    op = ScalarField(RelationalObservable(coordinate_field(4, 3), frame, 0.4))
    pb = poisson_bracket(oq, op, z, 1e-5)
    db = dirac_bracket(oq, op, frame, 0.4, z, 1e-5)
    assert db == pytest.approx(pb, abs=1e-6)
