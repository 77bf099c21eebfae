"""Golden-rule emission rates built from network field enhancements.

The enhancement ``f_j`` seen by the dipole for input channel ``j`` is a pure
network quantity (bare waveguide: ``|f| = 1``).  Every guided rate here is the
bare-waveguide rate ``gamma_wg`` scaled by ``|f_j|**2 / 2``.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

# CODATA 2018, fixed so that reports are bit-reproducible across installs.
SPEED_OF_LIGHT = 299792458.0  # m/s
HBAR = 1.054571817e-34  # J s
EPSILON_0 = 8.8541878128e-12  # F/m
CODATA_RELEASE = "CODATA 2018"

ZERO_RATE = 1e-300


class HighFinesseWarning(UserWarning):
    """High-finesse approximation used outside sigma >= 0.9."""


@dataclass(frozen=True)
class ModeContext:
    """Scalar data of the guided mode at the dipole.

    ``aeff`` is the dipole-interaction effective area in m^2, ``lambda0`` the
    vacuum wavelength in m and ``length`` an optional resonator length in m
    (needed only for Q and the effective volume).
    """

    lambda0: float = 630e-9
    n: float = 2.0
    ng: float = 2.0
    aeff: float = (630e-9 / 2.0) ** 2
    length: float | None = None

    def __post_init__(self):
        for name in ("lambda0", "n", "ng", "aeff"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"mode {name} must be positive and finite, got {v!r}")
        if self.length is not None and not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"mode length must be positive, got {self.length!r}")

    @property
    def omega0(self):
        return 2 * math.pi * SPEED_OF_LIGHT / self.lambda0

    @property
    def vg(self):
        return SPEED_OF_LIGHT / self.ng

    @property
    def k0(self):
        """Propagation constant at the emission frequency, omega0 * n / c."""
        return self.omega0 * self.n / SPEED_OF_LIGHT

    @property
    def veff(self):
        if self.length is None:
            raise ValueError("effective volume needs a resonator length")
        return self.aeff * self.length


@dataclass(frozen=True)
class DipoleSpec:
    """Dipole moment ``p`` (C m), initial photon number and alignment.

    ``align`` is cos^2 of the angle between dipole and mode field.
    """

    p: float = 1e-29
    nocc: int = 0
    align: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 0):
            raise ValueError(f"dipole moment must be positive, got {self.p!r}")
        if int(self.nocc) != self.nocc or self.nocc < 0:
            raise ValueError(f"nocc must be a non-negative integer, got {self.nocc!r}")
        if not 0 <= self.align <= 1:
            raise ValueError(f"align must lie in [0, 1], got {self.align!r}")


def gamma_wg(mode, dipole):
    """Emission rate (1/s) into the two guided modes of a bare waveguide."""
    n2 = mode.n**2
    rate = dipole.p**2 * mode.omega0 / (EPSILON_0 * n2 * HBAR * mode.vg * mode.aeff)
    return rate * (dipole.nocc + 1) * dipole.align


def gamma_free(mode, dipole):
    """Rate of a randomly oriented dipole in vacuum, p^2 w^3 / (3 eps0 hbar pi c^3)."""
    w = mode.omega0
    return dipole.p**2 * w**3 / (3 * EPSILON_0 * HBAR * math.pi * SPEED_OF_LIGHT**3)


def purcell_wg_ratio(mode):
    """gamma_wg / (n gamma_free) for an aligned dipole with no initial photons."""
    return (3 / (4 * math.pi)) * (mode.ng / mode.n) * (mode.lambda0 / mode.n) ** 2 / mode.aeff


@dataclass(frozen=True)
class RateReport:
    gamma_wg: float
    gamma_free: float
    n: float
    gamma_ports: dict = field(default_factory=dict)
    gamma_total: float = 0.0
    probabilities: dict | None = None

    @property
    def zero_total(self):
        """True when the dipole is fully suppressed and P_j is undefined."""
        return self.probabilities is None

    @property
    def enhancement_ratio(self):
        return self.gamma_total / self.gamma_wg

    @property
    def waveguide_purcell(self):
        return self.gamma_wg / (self.n * self.gamma_free)

    def as_dict(self):
        out = {
            "gamma_wg": self.gamma_wg,
            "gamma_free": self.gamma_free,
            "gamma_total": self.gamma_total,
            "gamma_ratio": self.enhancement_ratio,
            "purcell_wg": self.waveguide_purcell,
            "zero_total": self.zero_total,
        }
        for label, g in self.gamma_ports.items():
            out[f"gamma_{label}"] = g
            out[f"P_{label}"] = None if self.probabilities is None else self.probabilities[label]
        return out


def rates_from_enhancements(enhancements, mode, dipole):
    """Per-port and total rates from a mapping ``label -> f_j``."""
    gwg = gamma_wg(mode, dipole)
    ports = {label: 0.5 * gwg * abs(complex(f)) ** 2 for label, f in dict(enhancements).items()}
    total = math.fsum(ports.values())
    probs = None
    if total >= ZERO_RATE:
        probs = {label: g / total for label, g in ports.items()}
    return RateReport(
        gamma_wg=gwg,
        gamma_free=gamma_free(mode, dipole),
        n=mode.n,
        gamma_ports=ports,
        gamma_total=total,
        probabilities=probs,
    )


def _warn_low_finesse(sigma):
    if sigma < 0.9:
        warnings.warn(
            f"sigma={sigma} is outside the high-finesse regime (sigma >= 0.9)",
            HighFinesseWarning,
            stacklevel=3,
        )


def q_from_sigma(sigma, mode):
    """Loaded Q of a point-coupled ring, from 2/(1 - sigma) = 4 vg Q / (w0 l)."""
    if not 0 <= sigma < 1:
        raise ValueError(f"sigma must lie in [0, 1), got {sigma!r}")
    if mode.length is None:
        raise ValueError("Q needs the resonator length in the mode context")
    _warn_low_finesse(sigma)
    return mode.omega0 * mode.length / (2 * mode.vg * (1 - sigma))


def purcell_highfinesse(sigma, mode):
    """Resonant ring rate over n*gamma_free in the Purcell form.

    2 * (3 / 4 pi^2) (lambda0/n)^3 Q / V_eff, with V_eff = aeff * length.
    """
    q = q_from_sigma(sigma, mode)
    return 2 * (3 / (4 * math.pi**2)) * (mode.lambda0 / mode.n) ** 3 * q / mode.veff


def ring_highfinesse_ratio(sigma):
    """gamma_ring / gamma_wg at resonance in the high-finesse limit, 2/(1 - sigma)."""
    if not 0 <= sigma < 1:
        raise ValueError(f"sigma must lie in [0, 1), got {sigma!r}")
    return 2.0 / (1.0 - sigma)


def total_ratio(enhancements):
    """gamma_total / gamma_wg = sum |f_j|^2 / 2."""
    vals = np.asarray(list(dict(enhancements).values()), dtype=complex)
    return float(0.5 * np.sum(np.abs(vals) ** 2))
