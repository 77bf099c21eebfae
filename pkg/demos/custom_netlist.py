"""Describe a device as a netlist and solve it.

Two rings share a bus waveguide.  The netlist is parsed, validated and
solved for both port excitations at once.
"""
from asymfield import emission
from asymfield.netlist import parse_netlist
from asymfield.netsolver import solve_circuit
from asymfield.sweep import Axis, SweepGrid, get_model, run_sweep

NETLIST = """
mode n=2 ng=2 aeff=9.9225e-14 lambda0=630e-9
dipole p=1e-29 nocc=0
coupler c1 sigma=0.95 fwd=A1,R1o,A2,R1i bwd=B2,R1ib,B1,R1ob
segment ring1 phase=0 fwd=R1i,R1o bwd=R1ob,R1ib
segment bus phase=pi/3 fwd=A2,A3 bwd=B3,B2
coupler c2 sigma=0.9 fwd=A3,R2o,A4,R2i bwd=B4,R2ib,B3,R2ob
segment ring2 phase=pi fwd=R2i,R2o bwd=R2ob,R2ib
port L in=A1 out=B1
port R in=B4 out=A4
probe segment=ring1 offset=0.5
"""

circuit = parse_netlist(NETLIST)
print(f"{len(circuit.elements)} elements, {len(circuit.links)} links, ports {circuit.port_labels}")

f, s = solve_circuit(circuit)
rep = emission.rates_from_enhancements(f.as_dict(), circuit.mode, circuit.dipole)
print(f"gamma_total / gamma_wg = {rep.enhancement_ratio:.4f}")
print(f"|S_RL| = {abs(s['R', 'L']):.6f}, unitarity error {s.unitarity_error():.1e}")

# detune the first ring through resonance
res = run_sweep(get_model(circuit=circuit), SweepGrid((Axis("ring1.phase", -0.2, 0.2, 9),)))
for ph, g in zip(res.column("ring1.phase"), res.column("gamma_ratio")):
    print(f"  ring1.phase={ph:+.3f}  gamma_ratio={g:8.3f}")
