"""A ring resonator side-coupled to a bus waveguide.

On resonance the field in the ring builds up and the emission rate of a
dipole inside it rises by (1+sigma)/(1-sigma).  Off resonance it drops
below the bare waveguide value.
"""
import numpy as np

from asymfield import analytic, emission
from asymfield.netsolver import solve_circuit
from asymfield.templates import template_ring

sigma = 0.98
print(f"sigma = {sigma}: peak ratio {(1 + sigma) / (1 - sigma):.2f}, "
      f"high-finesse estimate {emission.ring_highfinesse_ratio(sigma):.2f}")

for delta0 in np.linspace(-0.1, 0.1, 9):
    f, _ = solve_circuit(template_ring(sigma, delta0))
    closed = analytic.ring_rate_ratio(analytic.RingParams(sigma, delta0))
    bar = "#" * int(f.total_ratio / 2)
    print(f"delta0={delta0:+.3f}  solver={f.total_ratio:8.3f}  closed={closed:8.3f}  {bar}")

# a ring of finite length gives a quality factor
mode = emission.ModeContext(length=40e-6)
print(f"\nQ for a 40 um ring: {emission.q_from_sigma(sigma, mode):.3e}")
print(f"cavity form of the rate ratio: {emission.purcell_highfinesse(sigma, mode):.2f} x gamma_free")
