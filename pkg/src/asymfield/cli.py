"""``asymfield`` command line: rate, sweep, figure, selfcheck.

Exit codes: 0 success, 1 input error, 2 singular solve, 3 sweep finished with
nan rows, 4 selfcheck failure.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, emission
from .errors import AsymfieldError, ResidualError, SingularSystemError
from .netlist import parse_angle, parse_netlist
from .sweep import (
    ENGINES,
    PRESETS,
    Axis,
    SweepError,
    SweepGrid,
    get_model,
    preset_sidecar,
    run_preset,
    run_sweep,
    write_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_SINGULAR, EXIT_NAN, EXIT_SELFCHECK = 0, 1, 2, 3, 4


class InputError(AsymfieldError):
    pass


def _version_text():
    return (
        f"asymfield {__version__}\n"
        f"constants: {emission.CODATA_RELEASE} c={emission.SPEED_OF_LIGHT!r} m/s "
        f"hbar={emission.HBAR!r} J s eps0={emission.EPSILON_0!r} F/m"
    )


def _parse_value(key, text):
    try:
        return parse_angle(text)
    except ValueError:
        raise InputError(f"--set {key}: cannot parse {text!r} as a number") from None


def _collect_settings(sets, extra):
    params = {}
    for item in sets or ():
        key, eq, value = item.partition("=")
        if not eq:
            raise InputError(f"--set expects key=value, got {item!r}")
        params[key.strip()] = _parse_value(key, value)
    # bare --name value pairs are shorthand for --set name=value
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) < 3:
            raise InputError(f"unexpected argument {tok!r}")
        key, eq, value = tok[2:].partition("=")
        if not eq:
            if i + 1 >= len(extra):
                raise InputError(f"option --{key} needs a value")
            value = extra[i + 1]
            i += 1
        params[key] = _parse_value(key, value)
        i += 1
    return params


def _model(args):
    if args.netlist:
        try:
            text = Path(args.netlist).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read netlist: {exc}") from None
        return get_model(circuit=parse_netlist(text))
    return get_model(template=args.template or "waveguide")


def cmd_rate(args, params):
    model = _model(args)
    for k in params:
        if k not in model.param_names:
            raise SweepError(f"unknown parameter {k!r} for {model.name}")
    enh = model.enhancements(params, args.engine)
    mode, dipole = model.context(params)
    report = emission.rates_from_enhancements(enh, mode, dipole)
    out = {"version": __version__, "model": model.name, "engine": args.engine}
    out.update(report.as_dict())
    for label, f in enh.items():
        out[f"f_{label}_re"] = f.real
        out[f"f_{label}_im"] = f.imag
        out[f"absf2_{label}"] = abs(f) ** 2
    for k, v in sorted(params.items()):
        out[f"param_{k}"] = v
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _emit_csv(result, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_csv(result, fh)
    else:
        write_csv(result, sys.stdout)


def cmd_sweep(args, params):
    if not args.vary:
        raise InputError("sweep needs at least one --vary name=start:stop:count[,log]")
    model = _model(args)
    observables = tuple(o for o in (args.observables or "").split(",") if o)
    grid = SweepGrid(tuple(Axis.parse(v) for v in args.vary), params, observables)
    result = run_sweep(model, grid, args.engine, args.check)
    _emit_csv(result, args.out)
    return _finish_sweep(result)


def _finish_sweep(result):
    if result.nan_rows:
        print(f"warning: {result.nan_rows} grid point(s) hit a singular system; rows hold nan",
              file=sys.stderr)
        return EXIT_NAN
    return EXIT_OK


def cmd_figure(args, params):
    if params:
        raise InputError("figure presets are read-only; use sweep to change parameters")
    engine = args.engine or "solver"
    preset, result = run_preset(args.preset, engine, args.check)
    out = Path(args.out or f"{preset.name}.csv")
    _emit_csv(result, str(out))
    sidecar = preset_sidecar(preset, engine, __version__)
    sidecar["check"] = bool(args.check)
    sidecar["rows"] = len(result.rows)
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(result.rows)} rows) and {out.with_suffix('.json')}", file=sys.stderr)
    return _finish_sweep(result)


def cmd_selfcheck(args, params):
    from .selfcheck import run_all

    t0 = time.perf_counter()
    results = run_all(flip_coupler_sign=args.debug_flip_coupler_sign)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILED'} in {time.perf_counter() - t0:.2f} s")
    return EXIT_OK if ok else EXIT_SELFCHECK


def build_parser():
    p = argparse.ArgumentParser(prog="asymfield", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=_version_text())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, engine_default="solver"):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--template", help="waveguide, ring, ring_backscatter or sagnac")
        src.add_argument("--netlist", metavar="FILE")
        sp.add_argument("--set", action="append", metavar="K=V", help="parameter override (repeatable)")
        sp.add_argument("--engine", choices=ENGINES, default=engine_default)

    sp = sub.add_parser("rate", help="rates and enhancements at one point (JSON)")
    common(sp)
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("sweep", help="1D/2D parameter sweep to CSV")
    common(sp)
    sp.add_argument("--vary", action="append", metavar="NAME=START:STOP:COUNT[,log]")
    sp.add_argument("--observables", help="comma-separated observable names")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--check", action="store_true", help="add a cross-engine gamma_ratio column")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="reproduce a figure preset as CSV + sidecar JSON")
    sp.add_argument("preset", choices=sorted(PRESETS))
    sp.add_argument("--engine", choices=ENGINES, default="solver")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--set", action="append", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("selfcheck", help="run the oracle, limit and unitarity suites")
    sp.add_argument("--debug-flip-coupler-sign", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if extra and args.command not in ("rate", "sweep"):
            raise InputError(f"unexpected arguments: {' '.join(extra)}")
        params = _collect_settings(getattr(args, "set", None), extra)
        return args.func(args, params)
    except (SingularSystemError, ResidualError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (AsymfieldError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
