"""Emission of a dipole into a bare waveguide.

The waveguide channel rate divided by the free-space rate is set by the
group index, refractive index and effective mode area.  The dipole emits
equally into both directions.
"""
import numpy as np

from asymfield import emission
from asymfield.netsolver import solve_circuit
from asymfield.templates import template_waveguide

mode = emission.ModeContext(lambda0=630e-9, n=2.0, ng=2.0, aeff=(630e-9 / 2.0) ** 2)
dipole = emission.DipoleSpec(p=1e-29)

print(f"gamma_free = {emission.gamma_free(mode, dipole):.4e} 1/s")
print(f"gamma_wg   = {emission.gamma_wg(mode, dipole):.4e} 1/s")
print(f"gamma_wg / (n gamma_free) = {emission.purcell_wg_ratio(mode):.6f}  (3/4pi = {3 / (4 * np.pi):.6f})")

# slower light and tighter confinement both raise the rate
for ng, scale in [(2.0, 1.0), (4.0, 1.0), (2.0, 0.5)]:
    m = emission.ModeContext(ng=ng, aeff=scale * (630e-9 / 2.0) ** 2)
    print(f"  ng={ng:<4} aeff x{scale:<4} -> ratio {emission.purcell_wg_ratio(m):.4f}")

f, s = solve_circuit(template_waveguide(phase=3.0, offset=0.4, mode=mode, dipole=dipole))
rep = emission.rates_from_enhancements(f.as_dict(), mode, dipole)
print(f"\nsolver: |f_L|^2={abs(f['L'])**2:.3f} |f_R|^2={abs(f['R'])**2:.3f}")
print(f"gamma_total / gamma_wg = {rep.enhancement_ratio:.3f}, P_L = {rep.probabilities['L']}, P_R = {rep.probabilities['R']}")
