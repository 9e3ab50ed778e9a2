"""
A Kepler hyperbola seen from the angle and from the radius
==========================================================

An unbound orbit is followed once with the polar angle as clock and once with
the radius as clock. Both descriptions should agree on the orbit's conserved
data: the angular momentum and the angular offset g.
"""
import numpy as np

from gaugeframe.models import make_kepler
from gaugeframe.relational import evolve_hamiltonian, reduced_hamiltonian

model = make_kepler(m=1.0, alpha=1.0, E=0.05)
angular = model.frame("angular", 1.0)
radial = model.frame("radial", 1.0)
g = model.oracles["conserved"]

l = -1.0
r0, r1 = model.oracles["orbit_radii"](l)
e = model.oracles["eccentricity"](l)
print(f"r0 = {r0:.4f}, r1 = {r1:.4f}, e = {e:.4f}")

# start just past perihelion on the incoming leg
r_start = l * l / (1 + e * np.cos(0.4))
p_start = -np.sqrt(2 * (0.05 + 1 / r_start) - l * l / r_start ** 2)

# %% angle as clock: r(phi), p(phi)
phis = np.linspace(0.0, 2.0, 9)
traj = evolve_hamiltonian(angular, [r_start, p_start], phis[0], phis[-1], phis)
print("\n phi      r         l         g")
for phi, (r, p) in zip(phis, traj.states):
    l_here = -reduced_hamiltonian(angular, phi, [r, p])
    print(f"{phi:4.2f}  {r:8.5f}  {l_here:8.5f}  {g(r, phi, l_here):9.6f}")

# %% radius as clock: phi(r), l(r)
radii = np.linspace(r_start, traj.states[-1, 0], 9)
traj_r = evolve_hamiltonian(radial, [0.0, l], radii[0], radii[-1], radii)
print("\n   r       phi       l         g")
for r, (phi, l_here) in zip(radii, traj_r.states):
    print(f"{r:7.4f}  {phi:8.5f}  {l_here:8.5f}  {g(r, phi, l_here):9.6f}")
