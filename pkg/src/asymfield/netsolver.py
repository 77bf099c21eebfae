"""Linear-system assembly and solution for asymptotic-in excitations.

One unknown per directed link and one equation per link, written at the
link's driver: ``x_out - sum(c * x_in) = 0`` for element outputs and
``x_in = pin`` for port inputs.  Exciting port ``j`` pins its input link to 1
and every other port input to 0.
"""
from dataclasses import dataclass

import numpy as np

from .circuit import Coupler, Scatterer, Segment, require_valid
from .errors import ResidualError
from .linalg import gauss_solve

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    index: dict
    ports: tuple

    @property
    def size(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Solution:
    """Link amplitudes; ``amplitudes[:, j]`` belongs to excitation ``j``."""

    amplitudes: np.ndarray
    index: dict
    ports: tuple
    residual: float

    def __getitem__(self, link):
        return self.amplitudes[self.index[link]]


@dataclass(frozen=True)
class FieldEnhancement:
    """Complex enhancement at the dipole for each input port."""

    labels: tuple
    values: np.ndarray

    def __getitem__(self, label):
        return complex(self.values[self.labels.index(label)])

    def as_dict(self):
        return {l: complex(v) for l, v in zip(self.labels, self.values)}

    @property
    def total_ratio(self):
        """Sum of |f_j|^2 / 2, i.e. gamma_total / gamma_wg."""
        return float(0.5 * np.sum(np.abs(self.values) ** 2))


@dataclass(frozen=True)
class SMatrix:
    """``matrix[i, j]``: amplitude leaving port i when port j is excited."""

    labels: tuple
    matrix: np.ndarray

    def __getitem__(self, pair):
        out, inp = pair
        return complex(self.matrix[self.labels.index(out), self.labels.index(inp)])

    def unitarity_error(self):
        s = self.matrix
        return float(np.abs(s.conj().T @ s - np.eye(len(s))).max())

    def reciprocity_error(self):
        return float(np.abs(self.matrix - self.matrix.T).max())

    def column_norms(self):
        return np.sqrt(np.sum(np.abs(self.matrix) ** 2, axis=0))


def _excitation_columns(circuit, excited):
    labels = circuit.port_labels
    if excited is None:
        return labels, np.eye(len(labels), dtype=complex)
    if isinstance(excited, str):
        excited = [excited]
    if isinstance(excited, dict):
        unknown = set(excited) - set(labels)
        weights = np.array([[complex(excited.get(l, 0))] for l in labels])
        names = ("superposition",)
    else:
        excited = list(excited)
        unknown = set(excited) - set(labels)
        weights = np.array([[1.0 + 0j if l == e else 0j for e in excited] for l in labels])
        names = tuple(excited)
    if unknown:
        raise KeyError(f"unknown port(s): {', '.join(sorted(unknown))}")
    return names, weights.reshape(len(labels), -1)


def assemble(circuit, excited_port=None, *, flip_coupler_sign=False):
    """Build the link equations.

    ``excited_port`` is a port label, a sequence of labels (one right-hand
    side each), a mapping label -> complex weight (one superposed
    excitation), or None for every port in declaration order.
    ``flip_coupler_sign`` is a fault-injection switch that negates the
    cross-coupling of the forward direction only.
    """
    idx = circuit.link_index
    n = len(idx)
    a = np.zeros((n, n), dtype=complex)
    fwd_cross = -1j if flip_coupler_sign else 1j
    for e in circuit.elements:
        if isinstance(e, Coupler):
            s, k = e.sigma, e.kappa
            for group, ik in ((e.fwd, fwd_cross * k), (e.bwd, 1j * k)):
                in_a, in_b, out_a, out_b = (idx[l] for l in group)
                a[out_a, out_a] = 1
                a[out_a, in_a] -= s
                a[out_a, in_b] -= ik
                a[out_b, out_b] = 1
                a[out_b, in_a] -= ik
                a[out_b, in_b] -= s
        elif isinstance(e, Segment):
            t = e.atten * np.exp(1j * e.phase)
            for link_in, link_out in (e.fwd, e.bwd):
                a[idx[link_out], idx[link_out]] = 1
                a[idx[link_out], idx[link_in]] -= t
        elif isinstance(e, Scatterer):
            t, r = e.tau, 1j * e.rho
            ccw_in, ccw_out = idx[e.ccw[0]], idx[e.ccw[1]]
            cw_in, cw_out = idx[e.cw[0]], idx[e.cw[1]]
            a[ccw_out, ccw_out] = 1
            a[ccw_out, ccw_in] -= t
            a[ccw_out, cw_in] -= r
            a[cw_out, cw_out] = 1
            a[cw_out, ccw_in] -= r
            a[cw_out, cw_in] -= t
        else:
            raise TypeError(f"unsupported element {e!r}")

    names, weights = _excitation_columns(circuit, excited_port)
    rhs = np.zeros((n, weights.shape[1]), dtype=complex)
    for row, port in enumerate(circuit.ports):
        i = idx[port.link_in]
        a[i, i] = 1
        rhs[i] = weights[row]
    return LinearSystem(a, rhs, idx, names)


def solve(system):
    """Solve an assembled system; rejects relative residuals above 1e-10."""
    x = gauss_solve(system.matrix, system.rhs)
    r = system.matrix @ x - system.rhs
    bnorm = np.linalg.norm(system.rhs, axis=0)
    rel = np.linalg.norm(r, axis=0) / np.where(bnorm > 0, bnorm, 1.0)
    residual = float(rel.max()) if rel.size else 0.0
    if not residual <= RESIDUAL_TOL:
        raise ResidualError(f"relative residual {residual:.3e} exceeds {RESIDUAL_TOL:g}")
    return Solution(x, system.index, system.ports, residual)


def probe_enhancement(circuit, solution):
    """Field at the dipole: fwd arrival times e^{i s delta} plus bwd arrival times e^{i(1-s) delta}."""
    seg = circuit.element(circuit.probe.segment)
    first, second = circuit.probe.split(seg.phase)
    s = circuit.probe.offset
    gain_fwd = seg.atten**s * np.exp(1j * first)
    gain_bwd = seg.atten ** (1 - s) * np.exp(1j * second)
    values = solution[seg.fwd[0]] * gain_fwd + solution[seg.bwd[0]] * gain_bwd
    return FieldEnhancement(tuple(solution.ports), np.atleast_1d(values))


def _port_outputs(circuit, solution):
    return np.array([solution[p.link_out] for p in circuit.ports])


def scattering_matrix(circuit, *, flip_coupler_sign=False):
    sol = solve(assemble(circuit, flip_coupler_sign=flip_coupler_sign))
    return SMatrix(circuit.port_labels, _port_outputs(circuit, sol))


def solve_circuit(circuit, *, flip_coupler_sign=False, check=True):
    """Solve every port excitation at once; returns ``(FieldEnhancement, SMatrix)``."""
    if check:
        require_valid(circuit)
    sol = solve(assemble(circuit, flip_coupler_sign=flip_coupler_sign))
    return probe_enhancement(circuit, sol), SMatrix(circuit.port_labels, _port_outputs(circuit, sol))


def enhancements(circuit, **kwargs):
    return solve_circuit(circuit, **kwargs)[0]
