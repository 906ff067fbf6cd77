# Sampling lattices of the three meshes and why the triangular one is cheaper.
import numpy as np

from wgmesh import critical_length, distance_spectrum, lattice_basis, reciprocal_basis, sample_density

D = 1.0
sq = lattice_basis("square", D)
tri = lattice_basis("triangular", D)
hexl = lattice_basis("hexagonal", D)

print("square basis\n", sq.matrix)
print("triangular basis\n", tri.matrix.round(4))
print("hexagonal = fine minus coarse\n", hexl.fine.matrix.round(4), "\n", hexl.coarse.matrix.round(4))

# equal D: triangular packs more junctions per unit area
print("density tri/sq at equal D:", sample_density(tri) / sample_density(sq))

# spectral images sit on the reciprocal lattice
print("reciprocal of triangular\n", reciprocal_basis(tri).matrix.round(4))

# at critical spacing the triangle wins
B = 0.5
for g in ("square", "triangular", "hexagonal"):
    Dg = critical_length(g, B)
    print(f"{g:<11} D={Dg:.4f}  density={sample_density(lattice_basis(g, Dg)):.4f}")

# the removed coarse lattice is a scaled triangular lattice
a = distance_spectrum(hexl.coarse, 18)
b = distance_spectrum(lattice_basis("triangular", np.sqrt(3) * D), 18)
print("coarse vs sqrt3-scaled triangular spectra equal:", np.allclose(a, b, atol=1e-12))
