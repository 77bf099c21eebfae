"""Parameter sweeps, figure presets and CSV output.

A *model* maps a flat parameter dict to field enhancements with either the
network solver or the closed forms.  Templates accept their native
parameters plus a few derived ones (``mismatch`` for the backscatter ring;
``delta_s``, ``delta_m``, ``delta_a``, ``routing_phase`` for the Sagnac
device) which are mapped onto the native ones before building.
"""
import csv
import dataclasses
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, templates
from .circuit import Coupler, Probe, Scatterer, Segment, require_valid
from .emission import DipoleSpec, ModeContext, gamma_wg, q_from_sigma
from .errors import AsymfieldError, ParameterRangeError, SingularSystemError
from .netsolver import solve_circuit

ENGINES = ("analytic", "solver")
MODE_KEYS = ("lambda0", "n", "ng", "aeff", "length")
DIPOLE_KEYS = ("p", "nocc", "align")
TWO_PI = 2 * math.pi


class SweepError(AsymfieldError, ValueError):
    pass


def _context(params, base_mode=None, base_dipole=None):
    mode = base_mode or ModeContext()
    dipole = base_dipole or DipoleSpec()
    m = {k: params[k] for k in MODE_KEYS if k in params}
    d = {k: params[k] for k in DIPOLE_KEYS if k in params}
    if "nocc" in d:
        if float(d["nocc"]) != int(d["nocc"]):
            raise ParameterRangeError(f"nocc must be an integer, got {d['nocc']!r}")
        d["nocc"] = int(d["nocc"])
    try:
        return dataclasses.replace(mode, **m), dataclasses.replace(dipole, **d)
    except ValueError as exc:
        raise ParameterRangeError(str(exc)) from None


@dataclass(frozen=True)
class TemplateModel:
    name: str
    defaults: dict
    derived: tuple
    ports: tuple
    _resolve: object
    _build: object
    _closed: object

    @property
    def param_names(self):
        return tuple(self.defaults) + self.derived + MODE_KEYS + DIPOLE_KEYS

    def resolve(self, overrides):
        unknown = set(overrides) - set(self.param_names)
        if unknown:
            raise SweepError(f"unknown parameter(s) for template {self.name}: {', '.join(sorted(unknown))}")
        native = {k: overrides.get(k, v) for k, v in self.defaults.items()}
        derived = {k: overrides[k] for k in self.derived if k in overrides}
        if derived:
            native = self._resolve(native, derived)
        return native

    def circuit(self, overrides):
        native = self.resolve(overrides)
        mode, dipole = _context(overrides)
        return self._build(native, mode, dipole)

    def enhancements(self, overrides, engine="solver"):
        native = self.resolve(overrides)
        if engine == "solver":
            mode, dipole = _context(overrides)
            f, _ = solve_circuit(self._build(native, mode, dipole), check=False)
            return f.as_dict()
        if engine == "analytic":
            if native.get("atten", 1.0) != 1.0:
                raise SweepError("closed forms are lossless; use the solver engine for atten < 1")
            return dict(zip(self.ports, self._closed(native)))
        raise SweepError(f"unknown engine {engine!r}")

    def context(self, overrides):
        return _context(overrides)


def _waveguide_closed(p):
    return analytic.waveguide_enhancements(p["phase"], p["offset"] * p["phase"])


def _ring_closed(p):
    return analytic.ring_enhancements(analytic.RingParams(p["sigma"], p["delta0"], p["offset"] * p["delta0"]))


def _backscatter_params(p):
    return analytic.BackscatterParams(p["sigma"], p["rho"], p["delta1"], p["delta2"],
                                      p["delta1"] + p["offset"] * p["delta2"])


def _backscatter_resolve(native, derived):
    out = dict(native)
    if "delta0" in derived:
        out["delta2"] = derived["delta0"] - out["delta1"]
    if "mismatch" in derived:
        mismatch, host = derived["mismatch"], out["delta2"]
        if not (0 <= mismatch <= host or host <= mismatch <= 0):
            mismatch = math.fmod(mismatch, TWO_PI) + (TWO_PI if mismatch < 0 else 0.0)
        if host == 0 or not 0 <= mismatch / host <= 1:
            raise ParameterRangeError(f"mismatch {derived['mismatch']!r} does not fit on an arc of phase {host!r}")
        out["offset"] = mismatch / host
    return out


def _sagnac_params(p):
    return analytic.SagnacParams(
        p["sigma_ms"], p["sigma_ma"], p["delta1"], p["delta2"], p["delta3"], p["delta4"], p["delta5"],
        p["delta3"] + p["offset"] * p["delta5"], p["sigma_s"],
    )


def _sagnac_resolve(native, derived):
    cur = _sagnac_params(native)
    phases = {
        "delta_s": cur.delta_s, "delta_m": cur.delta_m,
        "delta_a": cur.delta_a, "routing_phase": cur.routing_phase,
    }
    phases.update(derived)
    q = analytic.SagnacParams.from_phases(
        native["sigma_ms"], native["sigma_ma"], phases["delta_s"], phases["delta_m"],
        phases["delta_a"], phases["routing_phase"], native["sigma_s"],
    )
    out = dict(native)
    out.update(delta1=q.delta1, delta2=q.delta2, delta3=q.delta3, delta4=q.delta4, delta5=q.delta5, offset=0.0)
    return out


_FIG5 = analytic.SagnacParams.from_phases(0.98, 0.7, 0.0, TWO_PI, TWO_PI, math.pi / 2)

TEMPLATES = {
    "waveguide": TemplateModel(
        "waveguide", {"phase": 0.0, "offset": 0.5, "atten": 1.0}, (), ("L", "R"), None,
        lambda p, m, d: templates.template_waveguide(p["phase"], p["offset"], p["atten"], m, d),
        _waveguide_closed,
    ),
    "ring": TemplateModel(
        "ring", {"sigma": 0.98, "delta0": 0.0, "offset": 0.0, "atten": 1.0}, (), ("L", "R"), None,
        lambda p, m, d: templates.template_ring(p["sigma"], p["delta0"], p["offset"], p["atten"], m, d),
        _ring_closed,
    ),
    "ring_backscatter": TemplateModel(
        "ring_backscatter",
        {"sigma": 0.98, "rho": 0.017, "delta1": 0.0, "delta2": TWO_PI, "offset": 0.0, "atten": 1.0},
        ("delta0", "mismatch"), ("L", "R"), _backscatter_resolve,
        lambda p, m, d: templates.template_ring_backscatter(
            p["sigma"], p["rho"], p["delta1"], p["delta2"], p["offset"], p["atten"], m, d),
        lambda p: analytic.backscatter_enhancements(_backscatter_params(p)),
    ),
    "sagnac": TemplateModel(
        "sagnac",
        {"sigma_s": analytic.SPLITTER_50_50, "sigma_ms": 0.98, "sigma_ma": 0.7,
         "delta1": _FIG5.delta1, "delta2": _FIG5.delta2, "delta3": _FIG5.delta3,
         "delta4": _FIG5.delta4, "delta5": _FIG5.delta5, "offset": 0.0, "atten": 1.0},
        ("delta_s", "delta_m", "delta_a", "routing_phase"), ("port1", "port2"), _sagnac_resolve,
        lambda p, m, d: templates.template_sagnac_device(
            p["sigma_s"], p["sigma_ms"], p["sigma_ma"], p["delta1"], p["delta2"], p["delta3"],
            p["delta4"], p["delta5"], p["offset"], p["atten"], m, d),
        lambda p: analytic.sagnac_enhancements(_sagnac_params(p)),
    ),
}


class NetlistModel:
    """Sweepable wrapper around a parsed circuit.

    Parameters are ``<element>.<field>`` (``sigma``, ``phase``, ``atten``,
    ``rho``), ``probe.offset``, plus the mode and dipole keys.
    """

    name = "netlist"
    derived = ()

    def __init__(self, circuit):
        self.base = require_valid(circuit)
        self.ports = circuit.port_labels
        names = []
        for e in circuit.elements:
            fields = {Coupler: ("sigma",), Segment: ("phase", "atten"), Scatterer: ("rho",)}[type(e)]
            names.extend(f"{e.name}.{f}" for f in fields)
        names.append("probe.offset")
        self._element_params = tuple(names)

    @property
    def param_names(self):
        return self._element_params + MODE_KEYS + DIPOLE_KEYS

    def circuit(self, overrides):
        unknown = set(overrides) - set(self.param_names)
        if unknown:
            raise SweepError(f"unknown parameter(s) for netlist: {', '.join(sorted(unknown))}")
        per_element = {}
        for key, value in overrides.items():
            if "." in key:
                name, attr = key.split(".", 1)
                per_element.setdefault(name, {})[attr] = value
        elements = []
        for e in self.base.elements:
            changes = per_element.get(e.name, {})
            elements.append(dataclasses.replace(e, **changes) if changes else e)
        probe = self.base.probe
        if "probe" in per_element:
            probe = Probe(probe.segment, per_element["probe"]["offset"])
        mode, dipole = _context(overrides, self.base.mode, self.base.dipole)
        c = dataclasses.replace(self.base, elements=tuple(elements), probe=probe, mode=mode, dipole=dipole)
        return require_valid(c)

    def enhancements(self, overrides, engine="solver"):
        if engine != "solver":
            raise SweepError("netlists have no closed form; use --engine solver")
        f, _ = solve_circuit(self.circuit(overrides), check=False)
        return f.as_dict()

    def context(self, overrides):
        return _context(overrides, self.base.mode, self.base.dipole)


def get_model(template=None, circuit=None):
    if (template is None) == (circuit is None):
        raise SweepError("give exactly one of a template name or a circuit")
    if circuit is not None:
        return NetlistModel(circuit)
    try:
        return TEMPLATES[template]
    except KeyError:
        raise SweepError(f"unknown template {template!r}; choose from {', '.join(TEMPLATES)}") from None


def default_observables(model):
    return ("gamma_ratio",) + tuple(f"P_{l}" for l in model.ports) + tuple(f"absf2_{l}" for l in model.ports)


def observe(model, params, enh, observables):
    """Evaluate named observables from one point's enhancements."""
    total = 0.5 * sum(abs(f) ** 2 for f in enh.values())
    out = []
    for name in observables:
        if name == "gamma_ratio":
            out.append(total)
        elif name.startswith("P_") and name[2:] in enh:
            out.append(0.5 * abs(enh[name[2:]]) ** 2 / total if total >= 1e-300 else math.nan)
        elif name.startswith("absf2_") and name[6:] in enh:
            out.append(abs(enh[name[6:]]) ** 2)
        elif name in ("gamma_wg", "gamma_total"):
            mode, dipole = model.context(params)
            g = gamma_wg(mode, dipole)
            out.append(g if name == "gamma_wg" else g * total)
        elif name == "Q":
            mode, _ = model.context(params)
            sigma = model.resolve(params).get("sigma") if hasattr(model, "resolve") else None
            if sigma is None or mode.length is None:
                raise SweepError("Q needs a ring template and a mode length (--set length=...)")
            out.append(q_from_sigma(sigma, mode))
        else:
            raise SweepError(f"unknown observable {name!r}")
    return out


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise SweepError(f"axis {self.name}: count must be >= 2")
        if self.log and not (self.start > 0 and self.stop > 0):
            raise SweepError(f"axis {self.name}: log spacing needs positive endpoints")

    def values(self):
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text):
        """``name=start:stop:count[,log]``; endpoints accept pi literals."""
        from .netlist import parse_angle

        try:
            name, spec = text.split("=", 1)
            spec, _, flag = spec.partition(",")
            start, stop, count = spec.split(":")
            if flag not in ("", "log", "lin"):
                raise ValueError(flag)
            return cls(name.strip(), parse_angle(start), parse_angle(stop), int(count), flag == "log")
        except ValueError:
            raise SweepError(f"bad --vary value {text!r}; expected name=start:stop:count[,log]") from None


@dataclass(frozen=True)
class SweepGrid:
    axes: tuple
    fixed: dict = field(default_factory=dict)
    observables: tuple = ()

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise SweepError("a sweep has one or two axes")

    def points(self):
        """Grid points, row-major: axis 1 outer, axis 2 inner."""
        grids = [a.values() for a in self.axes]
        if len(grids) == 1:
            return [(float(v),) for v in grids[0]]
        return [(float(u), float(v)) for u in grids[0] for v in grids[1]]

    @property
    def size(self):
        return math.prod(a.count for a in self.axes)


@dataclass
class SweepResult:
    header: tuple
    rows: list
    nan_rows: int = 0
    errors: list = field(default_factory=list)

    def column(self, name):
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("ASYMFIELD_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


def run_sweep(model, grid, engine="solver", check=False, workers=None):
    """Evaluate every grid point.

    A point whose solve is singular yields a row of ``nan`` observables and
    is counted in ``nan_rows``.  Row order and values do not depend on the
    number of workers.
    """
    observables = tuple(grid.observables) or default_observables(model)
    names = tuple(a.name for a in grid.axes)
    for n in names + tuple(grid.fixed):
        if n not in model.param_names:
            raise SweepError(f"unknown parameter {n!r} for {model.name}")
    other = "analytic" if engine == "solver" else "solver"
    header = names + observables + (("gamma_ratio_check",) if check else ())

    def point(values):
        params = dict(grid.fixed)
        params.update(zip(names, values))
        try:
            enh = model.enhancements(params, engine)
            row = observe(model, params, enh, observables)
            if check:
                row.append(0.5 * sum(abs(f) ** 2 for f in model.enhancements(params, other).values()))
            return list(values) + row, None
        except SingularSystemError as exc:
            return list(values) + [math.nan] * (len(header) - len(names)), str(exc)

    pts = grid.points()
    n = _worker_count(workers)
    if n == 1:
        results = [point(p) for p in pts]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(point, pts))
    rows = [r for r, _ in results]
    errors = [e for _, e in results if e is not None]
    return SweepResult(header, rows, len(errors), errors)


def format_value(x):
    return "%.17g" % x


def write_csv(result, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(result.header)
    for row in result.rows:
        w.writerow([format_value(x) for x in row])


def to_csv_text(result):
    buf = io.StringIO()
    write_csv(result, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class FigurePreset:
    name: str
    template: str
    fixed: dict
    axes: tuple
    observables: tuple
    description: str

    def grid(self):
        return SweepGrid(self.axes, dict(self.fixed), self.observables)


PRESETS = {
    "fig3": FigurePreset(
        "fig3", "ring_backscatter",
        {"sigma": 0.98, "delta1": 0.0, "delta2": TWO_PI},
        (Axis("mismatch", 0.0, TWO_PI, 512), Axis("rho", 1e-4, 0.5, 256, log=True)),
        ("gamma_ratio", "P_L", "P_R"),
        "Resonant backscatter ring: gamma_rb/gamma_wg over dipole-scatterer mismatch and reflectivity",
    ),
    "fig4": FigurePreset(
        "fig4", "ring_backscatter",
        {"sigma": 0.98, "rho": 0.017, "delta1": 0.0, "delta2": TWO_PI},
        (Axis("mismatch", 0.0, TWO_PI, 1025),),
        ("gamma_ratio", "P_L", "P_R"),
        "Resonant backscatter ring at rho=0.017: rate and port probabilities over the mismatch",
    ),
    "fig5": FigurePreset(
        "fig5", "sagnac",
        {"sigma_s": analytic.SPLITTER_50_50, "sigma_ms": 0.98, "sigma_ma": 0.7,
         "delta_m": TWO_PI, "delta_a": TWO_PI, "routing_phase": math.pi / 2},
        (Axis("delta_s", 0.0, TWO_PI, 1025),),
        ("gamma_ratio", "P_port1", "P_port2"),
        "Sagnac device: rate and port probabilities over the loop phase",
    ),
    "fig6": FigurePreset(
        "fig6", "sagnac",
        {"sigma_s": analytic.SPLITTER_50_50, "sigma_ms": 0.98, "sigma_ma": 0.7,
         "delta_m": TWO_PI, "routing_phase": math.pi / 2},
        (Axis("delta_s", 3 * math.pi / 4, 5 * math.pi / 4, 2), Axis("delta_a", 0.0, TWO_PI, 1025)),
        ("gamma_ratio", "P_port1", "P_port2"),
        "Sagnac device: rate and port probabilities over the auxiliary-ring phase at two loop phases",
    ),
}


def run_preset(name, engine="solver", check=False, workers=None):
    try:
        preset = PRESETS[name]
    except KeyError:
        raise SweepError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return preset, run_sweep(TEMPLATES[preset.template], preset.grid(), engine, check, workers)


def preset_sidecar(preset, engine, version):
    return {
        "preset": preset.name,
        "description": preset.description,
        "template": preset.template,
        "engine": engine,
        "version": version,
        "fixed": dict(preset.fixed),
        "axes": [dataclasses.asdict(a) for a in preset.axes],
        "observables": list(preset.observables),
    }
