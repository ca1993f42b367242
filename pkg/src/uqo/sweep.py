"""Parameter sweeps behind the figures, with CSV and JSON emission.

A sweep is a rectangular grid over one or two named axes.  Rows are
emitted in grid order (first axis outermost) so output is deterministic.
"""

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .coupling import Coupling
from .errors import DomainError
from .otto import (
    CycleParams,
    assess_population_change,
    classical_otto_dp,
    default_lambda2,
    reduced_duration,
    run_cycle,
    unruh_temperature,
)
from .response import (
    ResponsePoint,
    response_closed,
    response_longtime_rate,
    scaled_rate,
)

AXIS_NAMES = ("a", "a_hot", "a_cold", "x", "y", "p", "v")
TARGETS = (
    "response_curve",
    "popchange_curve",
    "p0_surface",
    "work_surface",
    "classical_otto_surface",
    "longtime_check",
)
FORMATS = ("csv", "json", "svg")

# Axes each target needs, in order; the second entry of 1-D targets is optional.
_TARGET_AXES = {
    "response_curve": ({"x", "y"}, {"x", "y"}),
    "popchange_curve": ({"a"}, {"p", "v"}),
    "p0_surface": ({"a_hot"}, {"a_cold"}),
    "work_surface": ({"a_hot"}, {"a_cold"}),
    "classical_otto_surface": ({"a_hot"}, {"a_cold"}),
    "longtime_check": ({"y"}, {"x"}),
}
_REQUIRES_SECOND = {"p0_surface", "work_surface", "classical_otto_surface"}


@dataclass(frozen=True)
class Axis:
    """Grid axis with ``steps`` points from ``min`` to ``max`` inclusive."""

    name: str
    min: float
    max: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"axis name {self.name!r} not one of {AXIS_NAMES}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"axis {self.name}: steps must be an integer >= 2")
        if not self.min < self.max:
            raise DomainError(f"axis {self.name}: min must be below max")
        if self.scale not in ("linear", "log"):
            raise DomainError(f"axis {self.name}: scale must be 'linear' or 'log'")
        if self.scale == "log" and not self.min > 0:
            raise DomainError(f"axis {self.name}: log scale needs min > 0")

    def values(self):
        if self.scale == "log":
            grid = np.geomspace(self.min, self.max, self.steps)
        else:
            grid = np.linspace(self.min, self.max, self.steps)
        # Pin the end points so they are exact.
        grid[0], grid[-1] = self.min, self.max
        return [float(g) for g in grid]


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and how to emit it.

    ``fixed`` holds scalar parameters: ``v``, ``r`` (gap ratio), ``lambda2``,
    ``p``, ``x``, ``y`` and, for population changes, ``scaling`` which is
    ``"omega"`` (divide by lambda2) or ``"duration"`` (multiply by
    ``T**(2 delta) / lambda2``).
    """

    target: str
    coupling: Coupling
    axes: tuple
    fixed: dict = field(default_factory=dict)
    out: str = None
    format: str = "csv"
    name: str = ""

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"target {self.target!r} not one of {TARGETS}")
        object.__setattr__(self, "coupling", Coupling.parse(self.coupling))
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.format not in FORMATS:
            raise DomainError(f"format {self.format!r} not one of {FORMATS}")
        first, second = _TARGET_AXES[self.target]
        if not 1 <= len(self.axes) <= 2:
            raise DomainError("a sweep has one or two axes")
        if self.axes[0].name not in first:
            raise DomainError(
                f"axes: {self.target} needs first axis in {sorted(first)}, "
                f"got {self.axes[0].name!r}"
            )
        if len(self.axes) == 2:
            if self.axes[1].name not in second or self.axes[1].name == self.axes[0].name:
                raise DomainError(
                    f"axes: {self.target} second axis must be in {sorted(second)}"
                )
        elif self.target in _REQUIRES_SECOND:
            raise DomainError(f"axes: {self.target} needs two axes")
        fixed = dict(self.fixed)
        if "lambda2" not in fixed:
            fixed["lambda2"] = default_lambda2(self.coupling)
        object.__setattr__(self, "fixed", fixed)

    def to_dict(self):
        return {
            "target": self.target,
            "coupling": self.coupling.value,
            "axes": [asdict(a) for a in self.axes],
            "fixed": {k: self.fixed[k] for k in sorted(self.fixed)},
            "name": self.name,
        }

    def digest(self):
        """Short hash of everything that determines the data."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def param(self, key, point, default=None):
        if key in point:
            return point[key]
        if key in self.fixed:
            return self.fixed[key]
        if default is None:
            raise DomainError(f"fixed: parameter {key!r} is required for {self.target}")
        return default


@dataclass
class Dataset:
    """Rows of a sweep; ``columns`` lists axis names, outputs, then flags."""

    spec: SweepSpec
    columns: tuple
    rows: list

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _grid(spec):
    values = [axis.values() for axis in spec.axes]
    names = [axis.name for axis in spec.axes]
    if len(values) == 1:
        return names, [{names[0]: u} for u in values[0]]
    return names, [{names[0]: u, names[1]: w} for u in values[0] for w in values[1]]


def _response_row(spec, pt):
    p = ResponsePoint(spec.param("x", pt), spec.param("y", pt))
    return (response_closed(spec.coupling, p),)


def _popchange_row(spec, pt):
    a = pt["a"]
    v = spec.param("v", pt)
    p = spec.param("p", pt)
    lam = spec.fixed["lambda2"]
    gap = spec.fixed.get("gap", 1.0)
    res = assess_population_change(spec.coupling, a, p, v, lam, gap)
    scaling = spec.fixed.get("scaling", "omega")
    if scaling == "omega":
        scaled = res.dp / lam
    elif scaling == "duration":
        duration = reduced_duration(v) / (a * gap)
        scaled = res.dp * duration ** (2 * spec.coupling.delta) / lam
    else:
        raise DomainError(f"fixed: scaling must be 'omega' or 'duration', got {scaling!r}")
    return (res.dp, scaled, res.margin, res.validity, res.flagged)


def _cycle(spec, pt):
    return run_cycle(
        CycleParams(
            spec.coupling,
            pt["a_hot"],
            pt["a_cold"],
            spec.param("v", pt),
            spec.fixed.get("r", 2.0),
            spec.fixed["lambda2"],
        )
    )


def _p0_row(spec, pt):
    rep = _cycle(spec, pt)
    return (rep.p0, rep.flagged)


def _work_row(spec, pt):
    rep = _cycle(spec, pt)
    return (rep.p0, rep.dp_hot, rep.W_ext, rep.positive_work, rep.flagged)


def _classical_row(spec, pt):
    # Unruh temperature alpha / 2 pi in units of the gap of each contact.
    t_hot = unruh_temperature(pt["a_hot"])
    t_cold = unruh_temperature(pt["a_cold"])
    return (classical_otto_dp(t_hot, t_cold, 1.0, 1.0),)


def _longtime_row(spec, pt):
    x, y = spec.param("x", pt), pt["y"]
    c = spec.coupling
    excite = response_closed(c, ResponsePoint(x, y))
    relax = response_closed(c, ResponsePoint(-x, y))
    ratio = excite / relax
    boltzmann = math.exp(-2 * math.pi * x)
    rate = scaled_rate(c, ResponsePoint(x, y))
    limit = response_longtime_rate(c, x, 1.0)
    return (
        ratio,
        boltzmann,
        abs(ratio / boltzmann - 1),
        rate,
        limit,
        abs(rate / limit - 1),
    )


_OUTPUTS = {
    "response_curve": (("fhat",), _response_row),
    "popchange_curve": (("dp", "dp_scaled", "margin", "validity", "flagged"), _popchange_row),
    "p0_surface": (("p0", "flagged"), _p0_row),
    "work_surface": (("p0", "dp_hot", "W_ext", "positive_work", "flagged"), _work_row),
    "classical_otto_surface": (("dp_qo",), _classical_row),
    "longtime_check": (
        ("ratio", "boltzmann", "ratio_error", "rate", "rate_limit", "rate_error"),
        _longtime_row,
    ),
}

# Column drawn by the SVG renderer for each target.
PLOT_COLUMN = {
    "response_curve": "fhat",
    "popchange_curve": "dp_scaled",
    "p0_surface": "p0",
    "work_surface": "dp_hot",
    "classical_otto_surface": "dp_qo",
    "longtime_check": "rate_error",
}


def evaluate(spec):
    """Evaluate the grid of ``spec`` and return a :class:`Dataset`."""
    outputs, row_fn = _OUTPUTS[spec.target]
    names, grid = _grid(spec)
    rows = [tuple(pt[n] for n in names) + tuple(row_fn(spec, pt)) for pt in grid]
    return Dataset(spec, tuple(names) + outputs, rows)


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def header_line(spec):
    return f"# uqo {__version__}, {spec.digest()}"


def to_csv(dataset):
    """CSV text: version/hash comment, column header, then rows."""
    buf = io.StringIO()
    buf.write(header_line(dataset.spec) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(dataset.columns)
    for row in dataset.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def read_csv(text):
    """Parse :func:`to_csv` output into ``(columns, rows)`` of typed values."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# uqo "):
        raise DomainError("not a uqo CSV file")
    reader = csv.reader(lines[1:])
    columns = tuple(next(reader))
    rows = []
    for raw in reader:
        row = []
        for name, cell in zip(columns, raw):
            if name in ("flagged", "positive_work"):
                row.append(cell == "1")
            elif name == "validity":
                row.append(cell)
            else:
                row.append(float(cell))
        rows.append(tuple(row))
    return columns, rows


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return value


def to_json(dataset):
    doc = {
        "uqo_version": __version__,
        "spec_hash": dataset.spec.digest(),
        "spec": dataset.spec.to_dict(),
        "columns": list(dataset.columns),
        "rows": [[_json_value(v) for v in row] for row in dataset.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=True) + "\n"


def render(dataset, fmt=None):
    """Serialise ``dataset`` as text in ``fmt`` (defaults to the spec's format)."""
    fmt = fmt or dataset.spec.format
    if fmt == "csv":
        return to_csv(dataset)
    if fmt == "json":
        return to_json(dataset)
    if fmt == "svg":
        from .svg import render_dataset

        return render_dataset(dataset)
    raise DomainError(f"format {fmt!r} not one of {FORMATS}")


def run_sweep(spec):
    """Evaluate ``spec``; write it to ``spec.out`` when set.  Returns the dataset."""
    dataset = evaluate(spec)
    if spec.out:
        with open(spec.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(render(dataset))
    return dataset


# Figure presets.  Axis ranges are reconstructions of the plotted ranges.
_A_AXIS = Axis("a", 0.1, 10.0, 100, "log")
_SURFACE = (Axis("a_hot", 0.1, 10.0, 50), Axis("a_cold", 0.1, 10.0, 50))


def _preset_specs():
    c_lin, c_quad, c_ferm = Coupling.LINEAR, Coupling.QUADRATIC, Coupling.FERMIONIC
    p_series = Axis("p", 0.0, 0.75, 4)
    v_series = Axis("v", 0.4, 0.8, 3)
    specs = {
        "fig2": SweepSpec("classical_otto_surface", c_lin, _SURFACE),
        "fig3a": SweepSpec("popchange_curve", c_lin, (_A_AXIS, v_series), {"p": 0.0}),
        "fig3b": SweepSpec("popchange_curve", c_lin, (_A_AXIS, v_series), {"p": 0.25}),
        "fig3c": SweepSpec("popchange_curve", c_lin, (_A_AXIS, v_series), {"p": 0.75}),
        "fig3d": SweepSpec("popchange_curve", c_lin, (_A_AXIS, p_series), {"v": 0.8}),
    }
    for fig, coupling in (("fig4", c_quad), ("fig5", c_ferm)):
        for sub, scaling in (("a", "duration"), ("b", "omega")):
            specs[fig + sub] = SweepSpec(
                "popchange_curve", coupling, (_A_AXIS, p_series),
                {"v": 0.8, "scaling": scaling},
            )
    for fig, coupling in (("fig6", c_lin), ("fig7", c_quad), ("fig8", c_ferm)):
        specs[fig + "a"] = SweepSpec("p0_surface", coupling, _SURFACE, {"v": 0.8, "r": 2.0})
        specs[fig + "b"] = SweepSpec("work_surface", coupling, _SURFACE, {"v": 0.8, "r": 2.0})
    return {name: _named(spec, name) for name, spec in specs.items()}


def _named(spec, name):
    return SweepSpec(spec.target, spec.coupling, spec.axes, spec.fixed, spec.out, spec.format, name)


PRESETS = _preset_specs()


def preset_names(key):
    """Expand ``fig3`` to ``fig3a..fig3d``; single names pass through."""
    key = key.lower()
    if key in PRESETS:
        return [key]
    group = sorted(n for n in PRESETS if n[:-1] == key)
    if not group:
        raise DomainError(f"unknown preset {key!r}; choose from {sorted(PRESETS)}")
    return group


def preset(name, out=None, fmt="csv", **fixed):
    """Copy of preset ``name`` with output settings and fixed-parameter overrides."""
    base = PRESETS[name]
    merged = dict(base.fixed)
    merged.update(fixed)
    return SweepSpec(base.target, base.coupling, base.axes, merged, out, fmt, name)
