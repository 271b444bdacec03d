"""
Purifying bit-flip errors
=========================

Two copies of f0|psi+><psi+| + (1-f0)|phi+><phi+| and two parity checks
(one per side) give a better pair when the two sides see the same parity.
"""
from cavity_distill import CavityParams, epp_iterate, epp_round
from cavity_distill.protocols import convert_phase_flip
from cavity_distill.qstate import MixedEnsemble, bell

res, f1 = epp_round(0.7)
print(f"one round from 0.7: fidelity {f1:.6f}, success {res.success_probability:.4f}")

trace = epp_iterate(0.7, 3)
for k, (f, s) in enumerate(zip(trace.fidelities, trace.successes), 1):
    print(f"  round {k}: F={f:.6f}  per-round success {s:.4f}")
# Two rounds stop short of 0.997; the third gets there.

print()
for g in (0.2, 0.4, 0.8, 1.6, 4.0):
    r, f = epp_round(0.7, CavityParams(g=g), "practical")
    print(f"g/kappa={g}: F={f:.5f} success {r.success_probability:.5f}")

# Phase-flip errors (psi- admixture) are mapped onto the bit-flip form first.
mix = MixedEnsemble(((0.8, bell("psi+", "A", "B")), (0.2, bell("psi-", "A", "B"))))
print("\nphase-flip input 0.8 ->", round(epp_round(convert_phase_flip(mix))[1], 6))
