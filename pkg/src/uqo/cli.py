"""Command-line interface ``uqo``.

Exit codes: 0 success, 2 invalid input, 3 validation failure,
4 numerical non-convergence.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

from . import __version__
from .coupling import Coupling
from .errors import ConvergenceError
from .oracle import QuadratureSpec, response_quadrature
from .otto import CycleParams, assess_population_change, default_lambda2, run_cycle
from .response import ResponsePoint, response_closed, response_longtime_rate, scaled_rate
from .sweep import FORMATS, PRESETS, preset, preset_names, render, run_sweep
from .validate import ValidationGrid, run_validation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4


class InputError(Exception):
    """Bad command-line or config input."""


def _coupling(value):
    try:
        return Coupling.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(p, *, coupling=True, cycle=False, output=True):
    if coupling:
        p.add_argument("--coupling", type=_coupling, default=None,
                       help="linear | quadratic | fermionic (default linear)")
    p.add_argument("--v", type=float, default=None, help="final speed, 0 < v < 1 (default 0.8)")
    p.add_argument("--lambda2", type=float, default=None,
                   help="dimensionless coupling squared (default: the coupling's bound)")
    p.add_argument("--gap-ratio", dest="gap_ratio", type=float, default=None,
                   help="Omega_2 / Omega_1 > 1 (default 2)")
    if cycle:
        p.add_argument("--a-hot", dest="a_hot", type=float, default=None, help="alpha_H / Omega_2")
        p.add_argument("--a-cold", dest="a_cold", type=float, default=None, help="alpha_C / Omega_1")
    if output:
        p.add_argument("--out", default=None, help="output file (directory for preset groups)")
        p.add_argument("--format", choices=FORMATS, default=None, help="csv | json | svg")
    p.add_argument("--config", default=None, help="key=value file; flags override it")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uqo", description="Unruh quantum Otto engine: response functions and cycle."
    )
    parser.add_argument("--version", action="version", version=f"uqo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("response", help="dimensionless response fhat(x, y)")
    _add_common(p, cycle=False, output=False)
    p.add_argument("--x", type=float, default=None, help="Omega / alpha")
    p.add_argument("--y", type=float, default=None, help="alpha T")
    p.add_argument("--oracle", action="store_true", help="also evaluate the quadrature oracle")

    p = sub.add_parser("popchange", help="population change during one contact")
    _add_common(p, output=False)
    p.add_argument("--a", type=float, default=None, help="reduced acceleration alpha / Omega")
    p.add_argument("--p", type=float, default=None, help="initial excited population (default 0)")
    p.add_argument("--gap", type=float, default=None, help="gap in units of Omega_1 (default 1)")

    p = sub.add_parser("cycle", help="close the cycle and print the work/heat ledger")
    _add_common(p, cycle=True, output=False)

    p = sub.add_parser("sweep", help="evaluate a figure preset")
    _add_common(p, coupling=False)
    p.add_argument("--preset", default=None,
                   help=f"figure preset or group: {', '.join(sorted(PRESETS))}, fig3, ...")

    p = sub.add_parser("validate", help="check closed forms against the oracle")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--epsilons", type=_float_list, default=None,
                   help="comma-separated decreasing regulator schedule")
    p.add_argument("--order", type=int, default=None, help="extrapolation order")
    p.add_argument("--config", default=None, help="key=value file; flags override it")

    p = sub.add_parser("limits", help="long-time rate and Boltzmann ratio against y")
    p.add_argument("--coupling", type=_coupling, default=None)
    p.add_argument("--x", type=float, default=None, help="Omega / alpha > 0 (default 1)")
    p.add_argument("--ys", type=_float_list, default=None, help="durations (default 50,100,200)")
    p.add_argument("--config", default=None, help="key=value file; flags override it")
    return parser


def read_config(path):
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _apply_config(parser, args):
    if not getattr(args, "config", None):
        return args
    try:
        values = read_config(args.config)
    except OSError as exc:
        raise InputError(f"cannot read config: {exc}") from None
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    for key, raw in values.items():
        if key not in actions or key in ("help", "config"):
            raise InputError(f"config key {key!r} is not an option of '{args.command}'")
        if getattr(args, key) is not None:
            continue
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = action.type(raw) if action.type else raw
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise InputError(f"config key {key!r}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise InputError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
        setattr(args, key, value)
    return args


def _or(value, default):
    return default if value is None else value


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=1, sort_keys=True, default=str) + "\n"


def cmd_response(args):
    coupling = _or(args.coupling, Coupling.LINEAR)
    if args.x is None or args.y is None:
        raise InputError("response needs --x and --y")
    p = ResponsePoint(args.x, args.y)
    doc = {"coupling": coupling.value, "x": p.x, "y": p.y, "fhat": response_closed(coupling, p)}
    if args.oracle:
        res = response_quadrature(coupling, p)
        doc["oracle"] = res.value
        doc["extrapolation_residual"] = res.extrapolation_residual
    _emit(_json(doc), None)
    return EXIT_OK


def cmd_popchange(args):
    coupling = _or(args.coupling, Coupling.LINEAR)
    if args.a is None:
        raise InputError("popchange needs --a")
    v = _or(args.v, 0.8)
    lam = _or(args.lambda2, default_lambda2(coupling))
    res = assess_population_change(coupling, args.a, _or(args.p, 0.0), v, lam, _or(args.gap, 1.0))
    doc = {"coupling": coupling.value, "a": args.a, "p": _or(args.p, 0.0), "v": v,
           "lambda2": lam}
    doc.update(asdict(res))
    _emit(_json(doc), None)
    return EXIT_OK


def cmd_cycle(args):
    if args.a_hot is None or args.a_cold is None:
        raise InputError("cycle needs --a-hot and --a-cold")
    params = CycleParams(
        _or(args.coupling, Coupling.LINEAR), args.a_hot, args.a_cold,
        _or(args.v, 0.8), _or(args.gap_ratio, 2.0), args.lambda2,
    )
    report = run_cycle(params)
    doc = {"params": {**asdict(params), "coupling": params.coupling.value}}
    doc.update(asdict(report))
    _emit(_json(doc), None)
    return EXIT_OK


def cmd_sweep(args):
    if not args.preset:
        raise InputError("sweep needs --preset")
    names = preset_names(args.preset)
    fmt = _or(args.format, "csv")
    overrides = {}
    if args.v is not None:
        overrides["v"] = args.v
    if args.lambda2 is not None:
        overrides["lambda2"] = args.lambda2
    if args.gap_ratio is not None:
        overrides["r"] = args.gap_ratio
    if len(names) > 1:
        if not args.out:
            raise InputError(f"preset group {args.preset!r} needs --out DIRECTORY")
        os.makedirs(args.out, exist_ok=True)
        for name in names:
            path = os.path.join(args.out, f"{name}.{fmt}")
            run_sweep(preset(name, path, fmt, **overrides))
        return EXIT_OK
    out = args.out
    if out and (os.path.isdir(out) or out.endswith(os.sep)):
        os.makedirs(out, exist_ok=True)
        out = os.path.join(out, f"{names[0]}.{fmt}")
    spec = preset(names[0], out, fmt, **overrides)
    dataset = run_sweep(spec)
    if not out:
        _emit(render(dataset), None)
    return EXIT_OK


def cmd_validate(args):
    kwargs = {}
    if args.epsilons is not None:
        kwargs["epsilon_schedule"] = tuple(args.epsilons)
    if args.order is not None:
        kwargs["extrapolation_order"] = args.order
    report = run_validation(ValidationGrid(), QuadratureSpec(**kwargs))
    _emit(_json(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def cmd_limits(args):
    coupling = _or(args.coupling, Coupling.LINEAR)
    x = _or(args.x, 1.0)
    if not x > 0:
        raise InputError("limits needs --x > 0")
    limit = response_longtime_rate(coupling, x, 1.0)
    rows = []
    for y in _or(args.ys, [50.0, 100.0, 200.0]):
        up = response_closed(coupling, ResponsePoint(x, y))
        down = response_closed(coupling, ResponsePoint(-x, y))
        rate = scaled_rate(coupling, ResponsePoint(x, y))
        rows.append({
            "y": y,
            "ratio": up / down,
            "boltzmann": math.exp(-2 * math.pi * x),
            "rate": rate,
            "rate_limit": limit,
            "rate_error": abs(rate / limit - 1),
        })
    _emit(_json({"coupling": coupling.value, "x": x, "rows": rows}), None)
    return EXIT_OK


COMMANDS = {
    "response": cmd_response,
    "popchange": cmd_popchange,
    "cycle": cmd_cycle,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
    "limits": cmd_limits,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        args = _apply_config(parser, args)
        return COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"uqo: non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (InputError, ValueError) as exc:
        print(f"uqo: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"uqo: I/O error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
