"""Directed-link scattering network.

Every waveguide arc carries two independent directed amplitudes ("links").
Each link is driven by exactly one element output or external port input and
consumed by exactly one element input or external port output.  Couplers act
as two decoupled 2x2 relations (one per propagation direction); scatterers are
the only elements that mix the two directions.
"""
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .emission import DipoleSpec, ModeContext
from .errors import DegenerateCouplingError, NetlistError, ParameterRangeError

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
UNIT_TOL = 1e-12


def check_coupling(kind, value, line=None, col=None):
    """Raise unless ``value`` is a usable sigma or rho.

    Exactly 1 is reported as a degenerate (singular) coupling rather than a
    plain range error.
    """
    if not isinstance(value, (int, float)) or not math.isfinite(value) or not 0 <= value <= 1:
        raise ParameterRangeError(f"{kind} out of range ({value!r} not in [0, 1))", line, col)
    if value == 1:
        raise DegenerateCouplingError(
            f"singular system: {kind}=1 makes the scattering equations degenerate "
            f"(|1-sigma*e^(i*delta)| below threshold)",
            line,
            col,
        )


@dataclass(frozen=True)
class Coupler:
    """Point coupler; ``fwd`` and ``bwd`` are (inA, inB, outA, outB).

    outA = sigma*inA + i*kappa*inB and outB = i*kappa*inA + sigma*inB, in both
    directions.
    """

    name: str
    sigma: float
    fwd: tuple
    bwd: tuple

    @property
    def kappa(self):
        return math.sqrt(1.0 - self.sigma * self.sigma)

    @property
    def inputs(self):
        return (self.fwd[0], self.fwd[1], self.bwd[0], self.bwd[1])

    @property
    def outputs(self):
        return (self.fwd[2], self.fwd[3], self.bwd[2], self.bwd[3])


@dataclass(frozen=True)
class Segment:
    """Waveguide arc with phase ``phase`` (rad, unreduced) and amplitude ``atten``."""

    name: str
    phase: float
    fwd: tuple
    bwd: tuple
    atten: float = 1.0

    @property
    def inputs(self):
        return (self.fwd[0], self.bwd[0])

    @property
    def outputs(self):
        return (self.fwd[1], self.bwd[1])


@dataclass(frozen=True)
class Scatterer:
    """Lumped reflector coupling the counter-propagating ring modes."""

    name: str
    rho: float
    ccw: tuple
    cw: tuple

    @property
    def tau(self):
        return math.sqrt(1.0 - self.rho * self.rho)

    @property
    def inputs(self):
        return (self.ccw[0], self.cw[0])

    @property
    def outputs(self):
        return (self.ccw[1], self.cw[1])


@dataclass(frozen=True)
class Port:
    label: str
    link_in: str
    link_out: str


@dataclass(frozen=True)
class Probe:
    """Dipole position: fraction ``offset`` along segment ``segment``.

    The dipole splits the host phase into offset*phase (from the fwd input)
    and (1 - offset)*phase (from the bwd input).
    """

    segment: str
    offset: float

    def split(self, phase):
        first = self.offset * phase
        return first, phase - first


@dataclass(frozen=True)
class Circuit:
    elements: tuple
    ports: tuple
    probe: Probe | None
    mode: ModeContext = field(default_factory=ModeContext)
    dipole: DipoleSpec = field(default_factory=DipoleSpec)

    @property
    def lossless(self):
        return all(e.atten == 1.0 for e in self.elements if isinstance(e, Segment))

    @cached_property
    def links(self):
        """Link names in a fixed order: element outputs, then port inputs."""
        seen = {}
        for e in self.elements:
            for l in e.outputs:
                seen.setdefault(l, None)
        for p in self.ports:
            seen.setdefault(p.link_in, None)
        for e in self.elements:
            for l in e.inputs:
                seen.setdefault(l, None)
        for p in self.ports:
            seen.setdefault(p.link_out, None)
        return tuple(seen)

    @cached_property
    def link_index(self):
        return {l: i for i, l in enumerate(self.links)}

    @property
    def port_labels(self):
        return tuple(p.label for p in self.ports)

    @cached_property
    def diagnostics(self):
        return tuple(validate(self))

    def element(self, name):
        for e in self.elements:
            if e.name == name:
                return e
        raise KeyError(name)

    def port(self, label):
        for p in self.ports:
            if p.label == label:
                return p
        raise KeyError(label)

    def count(self, kind):
        return sum(isinstance(e, kind) for e in self.elements)


def validate(circuit):
    """Return a list of human-readable problems; empty means valid."""
    diags = []
    names = Counter(e.name for e in circuit.elements)
    for name, n in names.items():
        if n > 1:
            diags.append(f"duplicate element id {name}")
    labels = Counter(p.label for p in circuit.ports)
    for label, n in labels.items():
        if n > 1:
            diags.append(f"duplicate port label {label}")
    for ident in list(names) + list(labels):
        if not IDENTIFIER.match(ident):
            diags.append(f"invalid identifier {ident!r}")
    if not circuit.ports:
        diags.append("circuit has no ports")

    drivers, consumers = Counter(), Counter()
    for e in circuit.elements:
        drivers.update(e.outputs)
        consumers.update(e.inputs)
        own = e.inputs + e.outputs
        if len(set(own)) != len(own):
            diags.append(f"element {e.name} uses a link twice")
        if isinstance(e, Coupler):
            diags.extend(_range_diag(e.name, "sigma", e.sigma))
            if abs(e.sigma**2 + e.kappa**2 - 1) > UNIT_TOL:
                diags.append(f"coupler {e.name}: sigma^2 + kappa^2 != 1")
        elif isinstance(e, Scatterer):
            diags.extend(_range_diag(e.name, "rho", e.rho))
        elif isinstance(e, Segment):
            if not math.isfinite(e.phase):
                diags.append(f"segment {e.name}: phase is not finite")
            if not 0 < e.atten <= 1:
                diags.append(f"segment {e.name}: atten out of range ({e.atten!r} not in (0, 1])")
        else:
            diags.append(f"unknown element type {type(e).__name__}")
    for p in circuit.ports:
        drivers[p.link_in] += 1
        consumers[p.link_out] += 1
    for link in sorted(set(drivers) | set(consumers)):
        if not IDENTIFIER.match(link):
            diags.append(f"invalid link name {link!r}")
        if drivers[link] != 1:
            diags.append(f"link {link} has {drivers[link]} drivers")
        if consumers[link] != 1:
            diags.append(f"link {link} has {consumers[link]} consumers")

    probe = circuit.probe
    if probe is None:
        diags.append("no dipole probe")
    else:
        host = [e for e in circuit.elements if e.name == probe.segment]
        if not host or not isinstance(host[0], Segment):
            diags.append(f"probe host {probe.segment} is not a segment")
        if not (math.isfinite(probe.offset) and 0 <= probe.offset <= 1):
            diags.append(f"probe offset out of range ({probe.offset!r} not in [0, 1])")
    return diags


def _range_diag(name, kind, value):
    try:
        check_coupling(kind, value)
    except NetlistError as exc:
        return [f"{name}: {exc.message}"]
    return []


def require_valid(circuit):
    diags = circuit.diagnostics
    if diags:
        raise NetlistError("; ".join(diags))
    return circuit
