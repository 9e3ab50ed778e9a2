"""
Two clocks for one free relativistic particle
=============================================

The same particle is described once with its time coordinate as clock and
once with its spatial coordinate as clock. We map states between the two
descriptions and look at how the two Hamiltonians compare.
"""
import numpy as np

from gaugeframe import FrameMap, FramePair, pullback_hamiltonian, reduced_hamiltonian
from gaugeframe.models import make_relativistic_particle

model = make_relativistic_particle(D=1, m=1.0)
lab = model.frame("frame1", 1.0)      # clock K0 = t
spatial = model.frame("frame2", 1.0)  # clock K1 = t_hat

# %% A single state, mapped across
qp = np.array([0.0, -1.0])            # (K1, M1) on the lab cut t = 0
smap = FrameMap(FramePair(lab, spatial), t=0.0, t_hat=1.0)
image = smap(qp)
print("lab state      (K1, M1) =", qp)
print("spatial frame  (K0, M0) =", image)
print("closed form             =", model.oracles["oracle_rrft"](qp, 0.0, 1.0))

# %% Energies do not match
rng = np.random.default_rng(1)
momenta = -np.linspace(0.05, 2.0, 8)
print("\n   M1      h(lab)    h_hat(image)")
for p1 in momenta:
    h_hat, h = pullback_hamiltonian(smap, np.array([rng.uniform(-1, 1), p1]))
    print(f"{p1:6.2f}  {h:9.5f}  {h_hat:11.5f}")

# The lab energy never drops below the mass, the spatial-frame one does.
print("\nminimum lab energy:", min(reduced_hamiltonian(lab, 0.0, [0.0, p]) for p in momenta))
