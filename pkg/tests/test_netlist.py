import math

import pytest
from hypothesis import given, settings, strategies as st

from asymfield.circuit import Coupler, Segment, validate
from asymfield.errors import DegenerateCouplingError, NetlistError, ParameterRangeError, SingularSystemError
from asymfield.netlist import parse_angle, parse_netlist, serialize
from asymfield.templates import template_ring, template_ring_backscatter, template_sagnac_device, template_waveguide

RING = """\
# single ring, probe right after the coupler
mode n=2 ng=2 aeff=9.9225e-14 lambda0=630e-9
dipole p=1e-29 nocc=0
coupler c sigma=0.98 fwd=A1,A2,A4,A3 bwd=B4,B3,B1,B2
segment ring phase=2pi fwd=A3,A2 bwd=B2,B3
port L in=A1 out=B1
port R in=B4 out=A4
probe segment=ring offset=0
"""


def test_parse_ring():
    c = parse_netlist(RING)
    assert len(c.links) == 8
    assert c.count(Coupler) == 1 and c.count(Segment) == 1
    assert c.element("ring").phase == pytest.approx(2 * math.pi)
    assert c.port_labels == ("L", "R")
    assert validate(c) == []


@pytest.mark.parametrize("text,value", [
    ("pi", math.pi), ("-pi", -math.pi), ("3pi/4", 0.75 * math.pi), ("2*pi", 2 * math.pi),
    ("0.5", 0.5), ("1e-3", 1e-3), ("pi/2", math.pi / 2),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, rel=1e-15)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError):
        parse_angle("two")


def _err(text):
    with pytest.raises(NetlistError) as info:
        parse_netlist(text)
    return info.value


def test_error_carries_position():
    e = _err(RING.replace("sigma=0.98", "sigma=abc"))
    assert e.line == 4 and e.col is not None
    assert "line 4" in str(e)


def test_sigma_out_of_range():
    e = _err(RING.replace("sigma=0.98", "sigma=1.2"))
    assert isinstance(e, ParameterRangeError)
    assert "out of range" in str(e)


def test_sigma_one_is_degenerate():
    with pytest.raises(DegenerateCouplingError) as info:
        parse_netlist(RING.replace("sigma=0.98", "sigma=1"))
    assert isinstance(info.value, SingularSystemError)


@pytest.mark.parametrize("edit,needle", [
    (("probe segment=ring offset=0\n", ""), "no dipole probe"),
    (("port R in=B4 out=A4\n", ""), "consumer"),
    (("segment ring", "segment c"), "duplicate"),
    (("dipole p=1e-29 nocc=0\n", ""), "dipole"),
    (("fwd=A3,A2", "fwd=A3,A2,A9"), "link"),
    (("sigma=0.98", "sigma=0.98 sigma=0.5"), "repeated"),
    (("sigma=0.98", "sigma=0.98 colour=red"), "unknown key"),
    (("coupler c", "splitter c"), "unknown statement"),
    (("offset=0", "offset=1.5"), "offset"),
])
def test_diagnostics(edit, needle):
    e = _err(RING.replace(*edit))
    assert needle in str(e)


def test_segment_length_uses_k0():
    text = RING.replace("phase=2pi", "length=1e-6")
    c = parse_netlist(text)
    k0 = 2 * math.pi * 2 / 630e-9
    assert c.element("ring").phase == pytest.approx(k0 * 1e-6, rel=1e-14)


@pytest.mark.parametrize("circuit", [
    template_waveguide(0.3, 0.25),
    template_ring(0.9, 1.0, 0.4),
    template_ring_backscatter(0.98, 0.017, 0.2, 6.0, 0.3),
    template_sagnac_device(0.7071, 0.98, 0.7, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6),
], ids=["waveguide", "ring", "backscatter", "sagnac"])
def test_templates_round_trip(circuit):
    again = parse_netlist(serialize(circuit))
    assert again == circuit
    assert validate(circuit) == []


def test_template_link_counts():
    assert len(template_waveguide().links) == 4
    assert len(template_ring(0.5, 0.0).links) == 8
    assert len(template_sagnac_device(0.7, 0.9, 0.7, 0, 0, 0, 0, 0).links) == 24


finite = st.floats(-50, 50, allow_nan=False)
unit = st.floats(0, 1)
coupling = st.floats(0, 0.999999)


@settings(max_examples=100, deadline=None)
@given(coupling, coupling.filter(lambda r: r > 0), finite, finite, unit, st.floats(1e-3, 1))
def test_round_trip_property(sigma, rho, d1, d2, offset, atten):
    c = template_ring_backscatter(sigma, rho, d1, d2, offset, atten)
    assert parse_netlist(serialize(c)) == c
