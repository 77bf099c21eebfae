"""Randomized end-to-end checks of the solver against the closed forms.

Each suite returns a :class:`SuiteResult`; ``run_all`` is what the
``selfcheck`` command prints.
"""
import dataclasses
import math
import time
from dataclasses import dataclass

import numpy as np

from . import analytic as an
from . import templates as tp
from .circuit import Circuit, Coupler, Port, Probe, Scatterer, Segment
from .emission import DipoleSpec, ModeContext, gamma_wg, rates_from_enhancements
from .netsolver import solve_circuit

ORACLE_TOL = 1e-9
UNITARY_TOL = 1e-9
LIMIT_TOL = 1e-6
PROB_TOL = 1e-12
TWO_PI = 2 * math.pi


@dataclass
class SuiteResult:
    name: str
    count: int
    worst: float
    tol: float
    seconds: float = 0.0
    failures: int = 0

    @property
    def passed(self):
        return self.failures == 0 and self.worst <= self.tol

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: {self.count} cases, worst {self.worst:.3e} "
                f"(tol {self.tol:.0e}), {self.seconds:.2f} s")


def _rel(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    return float(np.max(np.abs(a - b) / (1 + np.abs(b))))


def random_case(topology, rng, sigma_max=0.999, rho_max=0.9):
    """Random (circuit, closed-form enhancements) pair for one topology."""
    u = rng.uniform
    off = u(0, 1)
    if topology == "waveguide":
        ph = u(0, TWO_PI)
        return tp.template_waveguide(ph, off), an.waveguide_enhancements(ph, off * ph)
    if topology == "ring":
        s, d0 = u(0, sigma_max), u(0, TWO_PI)
        return tp.template_ring(s, d0, off), an.ring_enhancements(an.RingParams(s, d0, off * d0))
    if topology == "ring_backscatter":
        s, r, d1, d2 = u(0, sigma_max), u(0, rho_max), u(0, TWO_PI), u(0, TWO_PI)
        p = an.BackscatterParams(s, r, d1, d2, d1 + off * d2)
        return tp.template_ring_backscatter(s, r, d1, d2, off), an.backscatter_enhancements(p)
    if topology == "sagnac":
        ss, sms, sma = u(0, sigma_max, 3)
        d = u(0, TWO_PI, 5)
        p = an.SagnacParams(sms, sma, *d, d[2] + off * d[4], sigma_s=ss)
        return tp.template_sagnac_device(ss, sms, sma, *d, off), an.sagnac_enhancements(p)
    raise ValueError(topology)


TOPOLOGIES = ("waveguide", "ring", "ring_backscatter", "sagnac")


def oracle_suite(draws=1000, seed=1, flip_coupler_sign=False):
    """Solver enhancements vs closed forms on random parameters, per topology."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for topo in TOPOLOGIES:
        for _ in range(draws):
            circuit, closed = random_case(topo, rng)
            f, _ = solve_circuit(circuit, check=False, flip_coupler_sign=flip_coupler_sign)
            worst = max(worst, _rel(f.values, closed))
            count += 1
    return SuiteResult("oracle equivalence", count, worst, ORACLE_TOL, time.perf_counter() - t0)


def random_circuit(rng, max_couplers=3, max_scatterers=2):
    """Random lossless network of couplers and scatterers joined by segments.

    Every element terminal is either wired to another terminal through a
    segment or exposed as an external port.
    """
    elements, terminals = [], []
    counter = iter(range(10**6))

    def link():
        return f"x{next(counter)}"

    for i in range(rng.integers(1, max_couplers + 1)):
        ins = [link() for _ in range(4)]  # arriving at terminals a, b, c, d
        outs = [link() for _ in range(4)]  # leaving terminals a, b, c, d
        elements.append(Coupler(f"c{i}", float(rng.uniform(0, 0.999)),
                                (ins[0], ins[1], outs[2], outs[3]), (ins[2], ins[3], outs[0], outs[1])))
        terminals.extend(zip(ins, outs))
    for i in range(rng.integers(0, max_scatterers + 1)):
        ins, outs = [link(), link()], [link(), link()]
        elements.append(Scatterer(f"r{i}", float(rng.uniform(0, 0.9)), (ins[0], outs[1]), (ins[1], outs[0])))
        terminals.extend(zip(ins, outs))

    order = rng.permutation(len(terminals))
    terminals = [terminals[i] for i in order]
    n_ports = 2 * int(rng.integers(1, len(terminals) // 2))
    ports = [Port(f"p{j}", t_in, t_out) for j, (t_in, t_out) in enumerate(terminals[:n_ports])]
    rest = terminals[n_ports:]
    segments = []
    for j in range(0, len(rest), 2):
        (in1, out1), (in2, out2) = rest[j], rest[j + 1]
        segments.append(Segment(f"w{j // 2}", float(rng.uniform(0, TWO_PI)), (out1, in2), (out2, in1)))
    probe = Probe(segments[int(rng.integers(len(segments)))].name, float(rng.uniform()))
    return Circuit(tuple(elements + segments), tuple(ports), probe)


def unitarity_suite(circuits=1000, seed=2, flip_coupler_sign=False):
    """Lossless random networks: S unitary and symmetric."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, failures = 0.0, 0
    for _ in range(circuits):
        c = random_circuit(rng)
        if c.diagnostics:
            failures += 1
            continue
        _, s = solve_circuit(c, check=False, flip_coupler_sign=flip_coupler_sign)
        worst = max(worst, s.unitarity_error(), s.reciprocity_error())
    return SuiteResult("unitarity/reciprocity", circuits, worst, UNITARY_TOL, time.perf_counter() - t0, failures)


def loss_suite(draws=250, seed=3):
    """Attenuating any template segment must push some S column below unit norm."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    failures, worst = 0, 0.0
    for i in range(draws):
        topo = TOPOLOGIES[i % len(TOPOLOGIES)]
        circuit, _ = random_case(topo, rng, sigma_max=0.95)
        segs = [e for e in circuit.elements if isinstance(e, Segment)]
        victim = segs[int(rng.integers(len(segs)))]
        lossy = dataclasses.replace(victim, atten=float(rng.uniform(0.5, 0.99)))
        elements = tuple(lossy if e is victim else e for e in circuit.elements)
        c = dataclasses.replace(circuit, elements=elements)
        _, s = solve_circuit(c)
        norms = s.column_norms()
        worst = max(worst, float(norms.max()) - 1.0)
        if c.lossless or not norms.min() < 1.0 - 1e-12:
            failures += 1
    return SuiteResult("loss breaks unitarity", draws, max(worst, 0.0), UNITARY_TOL, time.perf_counter() - t0, failures)


def limit_suite(draws=200, seed=4):
    """rho -> 0, sigma_ma -> 1 and bare-waveguide reductions."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, failures, count = 0.0, 0, 0
    for _ in range(draws):
        s, d1, d2, off = rng.uniform(0, 0.999), rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI), rng.uniform()
        fb, _ = solve_circuit(tp.template_ring_backscatter(s, 1e-9, d1, d2, off), check=False)
        ring = an.ring_enhancements(an.RingParams(s, d1 + d2, d1 + off * d2))
        worst = max(worst, float(np.max(np.abs(fb.values - np.asarray(ring)))))

        sms, dm = rng.uniform(0, 0.999), rng.uniform(0, TWO_PI)
        da = rng.uniform(0.1, TWO_PI - 0.1)
        p = an.SagnacParams.from_phases(sms, 1 - 1e-9, rng.uniform(0, TWO_PI), dm, da, rng.uniform(0, TWO_PI))
        c = tp.template_sagnac_device(p.sigma_s, p.sigma_ms, p.sigma_ma, p.delta1, p.delta2,
                                      p.delta3, p.delta4, p.delta5, 0.0)
        fs, _ = solve_circuit(c, check=False)
        target = an.ring_rate_ratio(an.RingParams(sms, dm))
        worst = max(worst, abs(fs.total_ratio - target) / target)
        count += 2

    mode, dip = ModeContext(), DipoleSpec()
    f, _ = solve_circuit(tp.template_waveguide())
    rep = rates_from_enhancements(f.as_dict(), mode, dip)
    if not (rep.gamma_total == gamma_wg(mode, dip) and rep.probabilities == {"L": 0.5, "R": 0.5}):
        failures += 1
    count += 1
    return SuiteResult("limit reductions", count, worst, LIMIT_TOL, time.perf_counter() - t0, failures)


def probability_suite(draws=250, seed=5):
    """Port probabilities sum to one for solver and closed forms."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    mode, dip = ModeContext(), DipoleSpec()
    for topo in TOPOLOGIES:
        for _ in range(draws):
            circuit, closed = random_case(topo, rng)
            f, _ = solve_circuit(circuit, check=False)
            rep = rates_from_enhancements(f.as_dict(), mode, dip)
            worst = max(worst, abs(math.fsum(rep.probabilities.values()) - 1))
            count += 1
    for _ in range(draws):
        r, sig, mm = rng.uniform(0, 0.9), rng.uniform(0, 0.999), rng.uniform(0, TWO_PI)
        _, pl, pr = an.backscatter_resonant(sig, r, mm)
        p1, p2 = an.sagnac_port_probs(an.SagnacParams.from_phases(
            rng.uniform(0, 0.999), rng.uniform(0, 0.999), *rng.uniform(0, TWO_PI, 4)))
        worst = max(worst, abs(pl + pr - 1), abs(p1 + p2 - 1))
        count += 2
    return SuiteResult("probability normalization", count, worst, PROB_TOL, time.perf_counter() - t0)


def run_all(flip_coupler_sign=False):
    return [
        oracle_suite(flip_coupler_sign=flip_coupler_sign),
        limit_suite(),
        unitarity_suite(flip_coupler_sign=flip_coupler_sign),
        loss_suite(),
        probability_suite(),
    ]
