"""Line-oriented netlist text format.

::

    mode n=<f> ng=<f> aeff=<m^2> lambda0=<m> [length=<m>]
    dipole p=<C m> [nocc=<int>] [align=<f>]
    coupler <id> sigma=<f> fwd=<inA,inB,outA,outB> bwd=<inA,inB,outA,outB>
    segment <id> phase=<rad> [atten=<f>] fwd=<in,out> bwd=<in,out>
    scatterer <id> rho=<f> ccw=<in,out> cw=<in,out>
    port <label> in=<link> out=<link>
    probe segment=<id> offset=<f>

``#`` starts a comment.  A segment may give ``length=<m>`` instead of
``phase``; it is converted with the mode's k0 = 2 pi n / lambda0.  Angles
accept ``pi`` literals such as ``3pi/4`` or ``-pi``.
"""
import math
import re

from .circuit import IDENTIFIER, Circuit, Coupler, Port, Probe, Scatterer, Segment, check_coupling, validate
from .emission import DipoleSpec, ModeContext
from .errors import NetlistError, ParameterRangeError

_PI_TERM = re.compile(
    r"\s*(?P<sign>[+-]?)\s*(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?P<pi>\*?\s*pi)?"
    r"\s*(?:/\s*(?P<den>\d+\.?\d*(?:[eE][+-]?\d+)?))?\s*\Z"
)


def parse_angle(text):
    """Parse a float or a rational multiple of pi: ``0.5``, ``pi``, ``3pi/4``, ``-2*pi``."""
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_TERM.match(s)
    if not m or (m.group("coef") is None and m.group("pi") is None):
        raise ValueError(f"cannot parse angle {text!r}")
    value = float(m.group("coef")) if m.group("coef") else 1.0
    if m.group("pi"):
        value *= math.pi
    if m.group("den"):
        value /= float(m.group("den"))
    return -value if m.group("sign") == "-" else value


# keyword -> (positional id?, required keys, optional keys)
_GRAMMAR = {
    "mode": (False, {"n", "ng", "aeff", "lambda0"}, {"length"}),
    "dipole": (False, {"p"}, {"nocc", "align"}),
    "coupler": (True, {"sigma", "fwd", "bwd"}, set()),
    "segment": (True, {"fwd", "bwd"}, {"phase", "length", "atten"}),
    "scatterer": (True, {"rho", "ccw", "cw"}, set()),
    "port": (True, {"in", "out"}, set()),
    "probe": (False, {"segment", "offset"}, set()),
}

class _Stmt:
    def __init__(self, keyword, ident, args, lineno, cols):
        self.keyword = keyword
        self.ident = ident
        self.args = args
        self.lineno = lineno
        self.cols = cols

    def err(self, msg, key=None, cls=NetlistError):
        return cls(msg, self.lineno, self.cols.get(key, 1))

    def number(self, key, angle=False):
        raw = self.args[key]
        try:
            value = parse_angle(raw) if angle else float(raw)
        except ValueError:
            raise self.err(f"{key}: expected a number, got {raw!r}", key) from None
        if not math.isfinite(value):
            raise self.err(f"{key}: value must be finite", key)
        return value

    def links(self, key, count):
        names = tuple(x.strip() for x in self.args[key].split(","))
        if len(names) != count:
            raise self.err(f"{key}: expected {count} link names, got {len(names)}", key)
        for n in names:
            if not IDENTIFIER.match(n):
                raise self.err(f"{key}: invalid link name {n!r}", key)
        return names


def _tokenize(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        keyword, kcol = tokens[0]
        if keyword not in _GRAMMAR:
            raise NetlistError(f"unknown statement {keyword!r}", lineno, kcol)
        has_id, required, optional = _GRAMMAR[keyword]
        rest = tokens[1:]
        ident = None
        cols = {}
        if has_id:
            if not rest or "=" in rest[0][0]:
                raise NetlistError(f"{keyword}: missing identifier", lineno, kcol)
            ident, icol = rest[0]
            if not IDENTIFIER.match(ident):
                raise NetlistError(f"invalid identifier {ident!r}", lineno, icol)
            cols["id"] = icol
            rest = rest[1:]
        args = {}
        for tok, col in rest:
            key, eq, value = tok.partition("=")
            if not eq or not key or not value:
                raise NetlistError(f"expected key=value, got {tok!r}", lineno, col)
            if key not in required and key not in optional:
                raise NetlistError(f"{keyword}: unknown key {key!r}", lineno, col)
            if key in args:
                raise NetlistError(f"{keyword}: repeated key {key!r}", lineno, col)
            args[key] = value
            cols[key] = col
        missing = required - set(args)
        if missing:
            raise NetlistError(f"{keyword}: missing {', '.join(sorted(missing))}", lineno, kcol)
        yield _Stmt(keyword, ident, args, lineno, cols)


def parse_netlist(text):
    """Parse netlist text into a validated :class:`Circuit`."""
    stmts = list(_tokenize(text))
    singles = {}
    for kw in ("mode", "dipole", "probe"):
        found = [s for s in stmts if s.keyword == kw]
        if len(found) > 1:
            raise found[1].err(f"{kw} declared more than once")
        if not found and kw != "probe":
            raise NetlistError(f"missing {kw} statement")
        singles[kw] = found[0] if found else None

    ms = singles["mode"]
    try:
        length = ms.number("length") if "length" in ms.args else None
        mode = ModeContext(
            lambda0=ms.number("lambda0"), n=ms.number("n"), ng=ms.number("ng"),
            aeff=ms.number("aeff"), length=length,
        )
    except ValueError as exc:
        if isinstance(exc, NetlistError):
            raise
        raise ms.err(str(exc), cls=ParameterRangeError) from None

    ds = singles["dipole"]
    try:
        nocc = ds.args.get("nocc", "0")
        if not re.fullmatch(r"\d+", nocc):
            raise ValueError(f"nocc must be a non-negative integer, got {nocc!r}")
        dipole = DipoleSpec(
            p=ds.number("p"), nocc=int(nocc),
            align=ds.number("align") if "align" in ds.args else 1.0,
        )
    except ValueError as exc:
        if isinstance(exc, NetlistError):
            raise
        raise ds.err(str(exc), cls=ParameterRangeError) from None

    elements, ports, seen = [], [], {}
    for s in stmts:
        if s.keyword in ("mode", "dipole", "probe"):
            continue
        namespace = "port" if s.keyword == "port" else "element"
        if (namespace, s.ident) in seen:
            raise s.err(f"duplicate identifier {s.ident!r} (first on line {seen[namespace, s.ident]})", "id")
        seen[namespace, s.ident] = s.lineno
        if s.keyword == "coupler":
            sigma = s.number("sigma")
            check_coupling("sigma", sigma, s.lineno, s.cols["sigma"])
            elements.append(Coupler(s.ident, sigma, s.links("fwd", 4), s.links("bwd", 4)))
        elif s.keyword == "segment":
            if ("phase" in s.args) == ("length" in s.args):
                raise s.err("segment needs exactly one of phase= or length=")
            phase = s.number("phase", angle=True) if "phase" in s.args else mode.k0 * s.number("length")
            atten = s.number("atten") if "atten" in s.args else 1.0
            if not 0 < atten <= 1:
                raise s.err(f"atten out of range ({atten!r} not in (0, 1])", "atten", ParameterRangeError)
            elements.append(Segment(s.ident, phase, s.links("fwd", 2), s.links("bwd", 2), atten))
        elif s.keyword == "scatterer":
            rho = s.number("rho")
            check_coupling("rho", rho, s.lineno, s.cols["rho"])
            elements.append(Scatterer(s.ident, rho, s.links("ccw", 2), s.links("cw", 2)))
        elif s.keyword == "port":
            ports.append(Port(s.ident, s.links("in", 1)[0], s.links("out", 1)[0]))

    ps = singles["probe"]
    if ps is None:
        raise NetlistError("no dipole probe")
    offset = ps.number("offset")
    if not 0 <= offset <= 1:
        raise ps.err(f"offset out of range ({offset!r} not in [0, 1])", "offset", ParameterRangeError)
    probe = Probe(ps.args["segment"], offset)

    circuit = Circuit(tuple(elements), tuple(ports), probe, mode, dipole)
    diags = validate(circuit)
    if diags:
        raise NetlistError("; ".join(diags))
    return circuit


def _f(x):
    return repr(float(x))


def serialize(circuit):
    """Netlist text that parses back to an equal circuit."""
    m, d = circuit.mode, circuit.dipole
    mode = f"mode n={_f(m.n)} ng={_f(m.ng)} aeff={_f(m.aeff)} lambda0={_f(m.lambda0)}"
    if m.length is not None:
        mode += f" length={_f(m.length)}"
    dip = f"dipole p={_f(d.p)} nocc={int(d.nocc)}"
    if d.align != 1.0:
        dip += f" align={_f(d.align)}"
    lines = [mode, dip]
    for e in circuit.elements:
        if isinstance(e, Coupler):
            lines.append(f"coupler {e.name} sigma={_f(e.sigma)} fwd={','.join(e.fwd)} bwd={','.join(e.bwd)}")
        elif isinstance(e, Segment):
            atten = f" atten={_f(e.atten)}" if e.atten != 1.0 else ""
            lines.append(f"segment {e.name} phase={_f(e.phase)}{atten} fwd={','.join(e.fwd)} bwd={','.join(e.bwd)}")
        elif isinstance(e, Scatterer):
            lines.append(f"scatterer {e.name} rho={_f(e.rho)} ccw={','.join(e.ccw)} cw={','.join(e.cw)}")
    for p in circuit.ports:
        lines.append(f"port {p.label} in={p.link_in} out={p.link_out}")
    if circuit.probe is not None:
        lines.append(f"probe segment={circuit.probe.segment} offset={_f(circuit.probe.offset)}")
    return "\n".join(lines) + "\n"
