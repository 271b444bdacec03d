"""
Concentration with known coefficients
=====================================

A pair alpha|GS> + beta|SG> becomes |psi+> with probability 2 alpha^2 (the
optimal value) using one photon and an unbalanced beam splitter that
attenuates the larger amplitude.
"""
import math

from cavity_distill import CavityParams, optimal_ecp

for alpha in (0.2, 0.4, 0.6):
    beta = math.sqrt(1 - alpha**2)
    ideal = optimal_ecp(alpha, beta)
    real = optimal_ecp(alpha, beta, CavityParams(g=0.8), "practical")
    print(f"alpha={alpha}: ideal success {ideal.success_probability:.4f} (F={ideal.fidelity_vs_target:.4f})"
          f"   practical success {real.success_probability:.4f} (F_Dh={real.details['f_dh']:.4f})")

# Every detector pattern is recorded with its probability, including the
# heralded failure port and the absorbed (lost) fraction.
res = optimal_ecp(0.4, math.sqrt(0.84), CavityParams(g=0.8), "practical")
print()
for detectors, prob in res.branch_log:
    print(f"  {'+'.join(detectors):6s} {prob:.6f}")
