"""Dipole emission rates in integrated photonic networks from asymptotic-in fields."""
from .analytic import (
    BackscatterParams,
    RingParams,
    SagnacParams,
    backscatter_enhancements,
    backscatter_rates,
    ring_enhancements,
    ring_rate_ratio,
    sagnac_enhancements,
    sagnac_port_probs,
    sagnac_total_rate,
)
from .circuit import Circuit, Coupler, Port, Probe, Scatterer, Segment, validate
from .emission import (
    DipoleSpec,
    ModeContext,
    RateReport,
    gamma_free,
    gamma_wg,
    purcell_highfinesse,
    purcell_wg_ratio,
    q_from_sigma,
    rates_from_enhancements,
)
from .errors import (
    AsymfieldError,
    NetlistError,
    ParameterRangeError,
    ResonanceDivergenceError,
    SingularSystemError,
)
from .netlist import parse_netlist, serialize
from .netsolver import assemble, probe_enhancement, scattering_matrix, solve, solve_circuit
from .templates import template_ring, template_ring_backscatter, template_sagnac_device, template_waveguide

__version__ = "0.1.0"
