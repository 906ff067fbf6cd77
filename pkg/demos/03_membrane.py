# Strike a round membrane and listen at two points, in both formulations.
import numpy as np

from wgmesh import Disc, Excitation, build_topology, periodic_cell, rest_state, run, total_energy

mesh = build_topology("triangular", 1.0, Disc(12.0))
print(len(mesh), "junctions,", int(mesh.is_boundary.sum()), "on the rim")

hit = mesh.center_junction()
ear = mesh.nearest_junction((5.0, 2.0))
strike = Excitation.impulse(hit)

wm = run(rest_state(mesh, "wm"), 300, [hit, ear], [strike], snapshot_every=100)
print("probe at ear, first nonzero step:", np.flatnonzero(np.abs(wm.probes[1].samples) > 1e-12)[0])
print("snapshots at", sorted(wm.snapshots))

# the clamped rim is lossless
print("energy after 300 steps:", total_energy(wm.final))

# on a torus the two formulations give identical junction signals
torus = build_topology("hexagonal", 1.0, periodic_cell("hexagonal", 1.0, 8, 4))
drive = Excitation(torus.center_junction(), np.hanning(16))
a = run(rest_state(torus, "wm"), 500, [0, 7], [drive])
b = run(rest_state(torus, "fd"), 500, [0, 7], [drive])
print("max WM-FD difference:", max(np.abs(p.samples - q.samples).max() for p, q in zip(a.probes, b.probes)))
