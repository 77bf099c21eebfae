"""Closed-form enhancements and rate ratios for the four topologies.

All expressions are lossless.  Phases are radians and unreduced.  Each
function raises :class:`ResonanceDivergenceError` when its denominator falls
below ``DIVERGENCE_GUARD`` in magnitude.
"""
import cmath
import math
from dataclasses import dataclass

from .errors import ResonanceDivergenceError

DIVERGENCE_GUARD = 1e-12
SPLITTER_50_50 = 1 / math.sqrt(2)


def _kappa(s):
    if not 0 <= s < 1:
        raise ValueError(f"coupling must lie in [0, 1), got {s!r}")
    return math.sqrt(1.0 - s * s)


def _guard(den, what):
    if abs(den) < DIVERGENCE_GUARD:
        raise ResonanceDivergenceError(f"singular system: |{what}| = {abs(den):.3e} below threshold")
    return den


@dataclass(frozen=True)
class RingParams:
    sigma: float
    delta0: float
    dipole_phase: float = 0.0

    @property
    def kappa(self):
        return _kappa(self.sigma)


@dataclass(frozen=True)
class BackscatterParams:
    """``delta1``: coupler to scatterer; ``delta2``: scatterer back to coupler."""

    sigma: float
    rho: float
    delta1: float
    delta2: float
    dipole_phase: float

    @classmethod
    def from_mismatch(cls, sigma, rho, delta1, delta2, mismatch):
        return cls(sigma, rho, delta1, delta2, delta1 + mismatch)

    @property
    def kappa(self):
        return _kappa(self.sigma)

    @property
    def tau(self):
        return _kappa(self.rho)

    @property
    def delta0(self):
        return self.delta1 + self.delta2

    @property
    def mismatch(self):
        """Dipole-to-scatterer phase mismatch."""
        return self.dipole_phase - self.delta1


@dataclass(frozen=True)
class SagnacParams:
    """Sagnac loop + main ring + auxiliary ring.

    ``dipole_phase`` is measured counterclockwise along the main ring from
    the loop coupler.  ``routing_phase`` = 2 (delta1 + dipole_phase) is the
    position-dependent phase that steers the output port.
    """

    sigma_ms: float
    sigma_ma: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float
    delta5: float
    dipole_phase: float
    sigma_s: float = SPLITTER_50_50

    @classmethod
    def from_phases(cls, sigma_ms, sigma_ma, delta_s, delta_m, delta_a, routing_phase,
                    sigma_s=SPLITTER_50_50):
        """Place the device from its lumped phases.

        Uses delta1 = 0, delta2 = delta_s, delta3 = routing_phase / 2,
        delta4 = delta_a, delta5 = delta_m - delta3 with the dipole right
        after the main-to-auxiliary coupler.
        """
        half = routing_phase / 2
        return cls(sigma_ms, sigma_ma, 0.0, delta_s, half, delta_a, delta_m - half, half, sigma_s)

    @property
    def delta_s(self):
        return self.delta1 + self.delta2

    @property
    def delta_m(self):
        return self.delta3 + self.delta5

    @property
    def delta_a(self):
        return self.delta4

    @property
    def routing_phase(self):
        return 2 * (self.delta1 + self.dipole_phase)


def waveguide_enhancements(phase, dipole_phase):
    """Bare waveguide of total phase ``phase``; references at its two ends."""
    return cmath.exp(1j * dipole_phase), cmath.exp(1j * (phase - dipole_phase))


def ring_enhancements(p):
    """(f_L, f_R) = i kappa e^{i dt} / (1 - sigma e^{i d0}), i kappa e^{i(d0 - dt)} / (...)."""
    den = _guard(1 - p.sigma * cmath.exp(1j * p.delta0), "1-sigma*e^(i*delta0)")
    ik = 1j * p.kappa
    return (ik * cmath.exp(1j * p.dipole_phase) / den,
            ik * cmath.exp(1j * (p.delta0 - p.dipole_phase)) / den)


def ring_rate_ratio(p):
    """gamma_ring / gamma_wg = kappa^2 / (1 + sigma^2 - 2 sigma cos delta0)."""
    s = p.sigma
    den = 1 + s * s - 2 * s * math.cos(p.delta0)
    _guard(math.sqrt(max(den, 0.0)), "1-sigma*e^(i*delta0)")
    return p.kappa**2 / den


def _backscatter_den(p):
    e = cmath.exp(1j * p.delta0)
    den = 1 - 2 * p.tau * p.sigma * e + p.sigma**2 * e * e
    return _guard(den, "1-2*tau*sigma*e^(i*delta)+sigma^2*e^(2i*delta)")


def backscatter_enhancements(p):
    s, k, t, r = p.sigma, p.kappa, p.tau, p.rho
    d, d1, d2, dt = p.delta0, p.delta1, p.delta2, p.dipole_phase
    den = _backscatter_den(p)
    e = cmath.exp
    f_l = (1j * k * (t - s * e(1j * d)) * e(1j * dt) - r * k * s * e(2j * d1) * e(1j * (d - dt))) / den
    f_r = (1j * k * (1 - t * s * e(1j * d)) * e(1j * (d - dt)) - r * k * e(1j * d2) * e(1j * (dt - d1))) / den
    return f_l, f_r


def backscatter_rates(p):
    """(gamma_rb, gamma_rb_L, gamma_rb_R), all divided by gamma_wg."""
    s, k, t, r = p.sigma, p.kappa, p.tau, p.rho
    _backscatter_den(p)
    e = cmath.exp(1j * p.delta0)
    g = 1 - 1j * r * cmath.exp(-2j * p.mismatch)
    norm = 2 * abs(r * r + (t - s * e) ** 2) ** 2
    total = k * k * 2 * ((1 + s * s - 2 * t * s * e) * g).real / norm
    left = (2 * (k * k * (s * s - t * s * e) * g).real + k**4 * t * t) / norm
    right = (2 * (k * k * (1 - t * s * e) * g).real - k**4 * t * t) / norm
    return total, left, right


def backscatter_resonant(sigma, rho, mismatch):
    """Resonant (delta0 = 2 m pi) total ratio and port probabilities (P_L, P_R)."""
    k2 = 1 - sigma * sigma
    t = _kappa(rho)
    q = 1 - rho * math.sin(2 * mismatch)
    den = rho * rho + (t - sigma) ** 2
    _guard(den, "rho^2+(tau-sigma)^2")
    total = k2 * q / den
    p_l = (2 * sigma * (sigma - t) * q + k2 * t * t) / (2 * q * den)
    p_r = (2 * (1 - t * sigma) * q - k2 * t * t) / (2 * q * den)
    return total, p_l, p_r


def aux_phase_factor(sigma_ma, delta_a):
    """C = (1 - sigma_ma e^{-i delta_a}) / (1 - sigma_ma e^{i delta_a}); |C| = 1."""
    _kappa(sigma_ma)
    den = _guard(1 - sigma_ma * cmath.exp(1j * delta_a), "1-sigma_ma*e^(i*delta_a)")
    return (1 - sigma_ma * cmath.exp(-1j * delta_a)) / den


def sagnac_enhancements(p):
    """(f_1, f_2) for inputs at port 1 and port 2.

    The clockwise term carries e^{i(delta_m - dipole_phase)}; on main-ring
    resonance this is e^{-i dipole_phase}.
    """
    ks, kms = _kappa(p.sigma_s), _kappa(p.sigma_ms)
    _kappa(p.sigma_ma)
    e = cmath.exp
    d1, d2, d3, d4, d5 = p.delta1, p.delta2, p.delta3, p.delta4, p.delta5
    den = _guard(
        1 - p.sigma_ma * e(1j * d4) + p.sigma_ms * e(1j * (d3 + d4 + d5)) * (1 - p.sigma_ma * e(-1j * d4)),
        "main-ring denominator",
    )
    ccw = e(1j * (d1 + d3 + d4)) * (1 - p.sigma_ma * e(-1j * d4)) * e(1j * (p.dipole_phase - d3))
    cw = e(1j * d2) * (1 - p.sigma_ma * e(1j * d4)) * e(1j * (d3 + d5 - p.dipole_phase))
    f1 = -kms * (1j * p.sigma_s * ccw + ks * cw) / den
    f2 = kms * (ks * ccw + 1j * p.sigma_s * cw) / den
    return f1, f2


def sagnac_total_rate(p):
    """gamma_T / gamma_wg = kappa_ms^2 / |1 + sigma_ms C e^{i(delta_a + delta_m)}|^2.

    Independent of the splitter ratio, the loop phase and the dipole position.
    """
    c = aux_phase_factor(p.sigma_ma, p.delta_a)
    z = c * cmath.exp(1j * (p.delta_a + p.delta_m))
    s = p.sigma_ms
    den = 1 + s * s + 2 * s * z.real
    _guard(math.sqrt(max(den, 0.0)), "1+sigma_ms*C*e^(i*(delta_a+delta_m))")
    return _kappa(s) ** 2 / den


def sagnac_port_probs(p):
    """(P_1, P_2) for a 50:50 splitter.

    P_1,2 = (1 -/+ Im X) / 2 with X = C e^{i(delta_a - delta_s + routing_phase - delta_m)};
    on main-ring resonance the delta_m factor drops out.
    """
    if abs(p.sigma_s - SPLITTER_50_50) > 1e-12:
        raise ValueError("closed-form port probabilities need a 50:50 splitter; use sagnac_enhancements")
    c = aux_phase_factor(p.sigma_ma, p.delta_a)
    im = (c * cmath.exp(1j * (p.delta_a - p.delta_s + p.routing_phase - p.delta_m))).imag
    return (1 - im) / 2, (1 + im) / 2
