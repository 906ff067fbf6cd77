# Design a 10 cm drum head for 10 kHz and compare what each mesh costs.
import warnings

from wgmesh import MediumSpec, benchmark, plan_resonator
from wgmesh.costmodel import format_table
from wgmesh.errors import TimingResolutionWarning

drum = MediumSpec(c=130.0, f_max=10_000.0, r=0.1)
print(plan_resonator(drum, rounded_lengths=True).table())
print(plan_resonator(drum).table())

print(format_table())

# wall-clock counterpart; numbers depend on the machine
with warnings.catch_warnings():
    warnings.simplefilter("ignore", TimingResolutionWarning)
    for g in ("square", "triangular", "hexagonal"):
        for f in ("wm", "fd"):
            r = benchmark(g, f, topology_size=48, steps=100)
            print(f"{g:<11} {f}  modeled {r.modeled_ratio_to_square:6.3f}  measured {r.measured_ratio_to_square:6.3f}")
