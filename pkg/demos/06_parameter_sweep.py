"""
Parameter sweeps
================

The sweep module evaluates a grid and puts simulated and closed-form values
side by side. The same grids are available from the command line, e.g.

    cavity-distill sweep --protocol epp --mode practical \\
        --axis g_over_kappa:0.2:4:5 --axis f0:0.6:0.9:4
"""
from cavity_distill.sweep import Axis, SweepSpec, sweep, to_csv

spec = SweepSpec(
    "efficient-ecp",
    "practical",
    axes=(Axis.parse("g_over_kappa:0.2:1.0:3"), Axis.parse("alpha:0.2:0.6:3")),
)
rows = sweep(spec)
print(to_csv(rows))
print("largest simulation/closed-form gap:", max(r.abs_delta_eta for r in rows))
