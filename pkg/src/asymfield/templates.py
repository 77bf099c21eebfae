"""Parameterized circuits for the four device topologies.

Link names follow the field labels of the scattering-matrix derivations
(A for counterclockwise / left-to-right, B for the reverse direction).
"""
import math

from .circuit import Circuit, Coupler, Port, Probe, Scatterer, Segment, check_coupling, require_valid
from .emission import DipoleSpec, ModeContext
from .errors import ParameterRangeError

SPLITTER_50_50 = 1 / math.sqrt(2)


def _check_phase(name, value):
    if not math.isfinite(value):
        raise ParameterRangeError(f"{name} must be finite, got {value!r}")


def _check_offset(offset):
    if not (math.isfinite(offset) and 0 <= offset <= 1):
        raise ParameterRangeError(f"offset out of range ({offset!r} not in [0, 1])")


def _finish(elements, ports, probe, mode, dipole):
    return require_valid(Circuit(
        tuple(elements), tuple(ports), probe,
        mode if mode is not None else ModeContext(),
        dipole if dipole is not None else DipoleSpec(),
    ))


def template_waveguide(phase=0.0, offset=0.5, atten=1.0, mode=None, dipole=None):
    """Straight waveguide of total phase ``phase``; dipole at ``offset``."""
    _check_phase("phase", phase)
    _check_offset(offset)
    seg = Segment("wg", phase, ("A1", "A2"), ("B2", "B1"), atten)
    ports = [Port("L", "A1", "B1"), Port("R", "B2", "A2")]
    return _finish([seg], ports, Probe("wg", offset), mode, dipole)


def template_ring(sigma, delta0, offset=0.0, atten=1.0, mode=None, dipole=None):
    """All-pass ring: one coupler plus the ring arc of round-trip phase ``delta0``.

    The dipole sits at phase ``offset * delta0`` counterclockwise from the
    coupler.  Ports L and R are the two ends of the bus waveguide.
    """
    check_coupling("sigma", sigma)
    _check_phase("delta0", delta0)
    _check_offset(offset)
    elements = [
        Coupler("c", sigma, ("A1", "A2", "A4", "A3"), ("B4", "B3", "B1", "B2")),
        Segment("ring", delta0, ("A3", "A2"), ("B2", "B3"), atten),
    ]
    ports = [Port("L", "A1", "B1"), Port("R", "B4", "A4")]
    return _finish(elements, ports, Probe("ring", offset), mode, dipole)


def template_ring_backscatter(sigma, rho, delta1, delta2, offset=0.0, atten=1.0, mode=None, dipole=None):
    """Ring with a lumped reflector ``rho`` at phase ``delta1`` from the coupler.

    The dipole lies on the second arc (scatterer back to coupler) at phase
    ``delta1 + offset * delta2``, so the dipole-scatterer mismatch is
    ``offset * delta2``.
    """
    check_coupling("sigma", sigma)
    check_coupling("rho", rho)
    _check_phase("delta1", delta1)
    _check_phase("delta2", delta2)
    _check_offset(offset)
    elements = [
        Coupler("c", sigma, ("A1", "A2", "A4", "A3"), ("B4", "B3", "B1", "B2")),
        Segment("arc1", delta1, ("A3", "Ab1"), ("Bb1", "B3"), atten),
        Scatterer("s", rho, ("Ab1", "Ab2"), ("Bb2", "Bb1")),
        Segment("arc2", delta2, ("Ab2", "A2"), ("B2", "Bb2"), atten),
    ]
    ports = [Port("L", "A1", "B1"), Port("R", "B4", "A4")]
    return _finish(elements, ports, Probe("arc2", offset), mode, dipole)


def template_sagnac_device(sigma_s, sigma_ms, sigma_ma, delta1, delta2, delta3, delta4, delta5,
                           offset=0.0, atten=1.0, mode=None, dipole=None):
    """Main ring coupled to a Sagnac loop and to an auxiliary ring.

    Three couplers: the Sagnac splitter ``bs`` (ports 1 and 2), the
    loop-to-main-ring coupler ``ms`` and the main-to-auxiliary coupler ``ma``.
    Loop arcs are ``delta1`` (splitter to ms) and ``delta2`` (ms back to the
    splitter); the main ring is ``delta3`` (ms to ma) plus ``delta5`` (ma to
    ms); the auxiliary ring is ``delta4``.  The dipole sits on the
    ``delta5`` arc at ``offset``.
    """
    for name, s in (("sigma_s", sigma_s), ("sigma_ms", sigma_ms), ("sigma_ma", sigma_ma)):
        check_coupling(name, s)
    for i, d in enumerate((delta1, delta2, delta3, delta4, delta5), start=1):
        _check_phase(f"delta{i}", d)
    _check_offset(offset)
    elements = [
        Coupler("bs", sigma_s, ("A1", "A2", "A4", "A3"), ("B4", "B3", "B1", "B2")),
        Coupler("ms", sigma_ms, ("A5", "A6", "A8", "A7"), ("B8", "B7", "B5", "B6")),
        Coupler("ma", sigma_ma, ("A9", "A10", "A12", "A11"), ("B12", "B11", "B9", "B10")),
        Segment("d1", delta1, ("A4", "A6"), ("B6", "B4"), atten),
        Segment("d2", delta2, ("A7", "B3"), ("A3", "B7"), atten),
        Segment("d3", delta3, ("A8", "A9"), ("B9", "B8"), atten),
        Segment("d4", delta4, ("A11", "A10"), ("B10", "B11"), atten),
        Segment("d5", delta5, ("A12", "A5"), ("B5", "B12"), atten),
    ]
    ports = [Port("port1", "A1", "B1"), Port("port2", "A2", "B2")]
    return _finish(elements, ports, Probe("d5", offset), mode, dipole)
