"""Superradiant cascade: the emission rate peaks mid-ladder.

Starting from the fully excited Dicke state, the rate-equation evolution
on the symmetric ladder shows the emitted power rising to a burst of order
L^2 / 4 before decaying. A small dense GKSL run checks the ladder result.

Run with ``python3 demos/cascade.py``.
"""

import numpy as np

from heatlab.master import DickeLadder, MasterEquation, evolve, evolve_ladder
from heatlab.numcore import expectation, pure_state
from heatlab.operators import dicke_state
from heatlab.scenarios import superradiance_system

for L in (11, 51, 201):
    ladder = DickeLadder.dicke(L, L / 2)
    t_final = 20.0 / L
    traj = evolve_ladder(ladder, 1.0, 0.0, dt=1e-3 / L, t_final=t_final, save_every=10)
    E = np.array([ladder.energies @ p for p in traj.states])
    power = -np.gradient(E, traj.times)
    k = int(np.argmax(power))
    print(f"L={L:>4}: peak power {power[k]:9.4g} at t={traj.times[k]:.4g}, "
          f"peak / (L+1)^2/4 = {power[k] / ((L + 1) ** 2 / 4):.3f}")

L = 3
system = superradiance_system(L, 1.0, 1.0, backend='dense')
eq = MasterEquation(system, 'gksl')
dense = evolve(eq, pure_state(dicke_state(L, L / 2)), dt=1e-3, t_final=2.0, save_every=500)
lad = evolve_ladder(DickeLadder.dicke(L, L / 2), 1.0, 0.0, dt=1e-3, t_final=2.0,
                    save_every=500)
energies = DickeLadder.dicke(L, L / 2).energies
print("\nL=3 energy, dense GKSL vs ladder")
for t, rho, p in zip(dense.times, dense.states, lad.states):
    print(f"t={t:.1f}  {expectation(system.hamiltonian, rho):+.10f}  {energies @ p:+.10f}")
