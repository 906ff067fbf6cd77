# Dispersion: how fast does each mesh carry a plane wave?
import numpy as np

from wgmesh import critical_dc_limit, dispersion_map, normalized_speed_ratio, speed_ratio
from wgmesh.simulator import measure_plane_wave_phase
from wgmesh.dispersion import phase_shift

# every mesh runs at 1/sqrt2 of the ideal speed near dc
for g in ("square", "triangular", "hexagonal"):
    print(g, speed_ratio(g, 1.0, (1e-4, 0.0)))

# square mesh: exact along the diagonal, slow along the axes
print("diagonal", speed_ratio("square", 1.0, (0.2, 0.2)))
print("axis    ", speed_ratio("square", 1.0, (0.2 * np.sqrt(2), 0.0)))

# critically sampled, normalized to one at dc
for g in ("square", "triangular", "hexagonal"):
    m = dispersion_map(g, "normalized", 0.5, 256)
    k = m.k[m.in_band]
    print(f"{g:<11} dc={critical_dc_limit(g):.4f}  in-band min={k.min():.3f}  share above 0.9={np.mean(k > 0.9):.3f}")

# the hexagonal mesh barely cares about direction
phi = np.linspace(0, 2 * np.pi, 7)
print("hexagonal at |xi|=0.25:", normalized_speed_ratio("hexagonal", 0.5, (0.25 * np.cos(phi), 0.25 * np.sin(phi))).round(4))

# check one point against a simulated plane wave on a torus
f = (1 / 8, 0.0)
print("analytic", abs(phase_shift("triangular", 1.0, f)), "measured", measure_plane_wave_phase("triangular", 1.0, f))

# full map to CSV for plotting elsewhere
dispersion_map("square", "raw", 1.0, 64).write_csv("square_raw.csv")
