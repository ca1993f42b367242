import json
import math
import re

import pytest

from uqo import __version__
from uqo.errors import DomainError
from uqo.otto import CycleParams, classical_otto_dp, run_cycle
from uqo.svg import BLUE, RED, WHITE, diverging_color, heatmap, line_chart, sequential_color
from uqo.sweep import (
    PRESETS,
    Axis,
    SweepSpec,
    evaluate,
    preset,
    preset_names,
    read_csv,
    render,
    run_sweep,
    to_csv,
)


def small_surface(target="work_surface", coupling="quadratic"):
    axes = (Axis("a_hot", 0.5, 3.0, 3), Axis("a_cold", 0.2, 2.0, 4))
    return SweepSpec(target, coupling, axes, {"v": 0.8, "r": 2.0})


def test_axis_values():
    assert Axis("a", 0.1, 10.0, 3, "log").values() == [0.1, pytest.approx(1.0), 10.0]
    assert Axis("p", 0.0, 0.75, 4).values() == [0.0, 0.25, 0.5, 0.75]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"name": "speed", "min": 0, "max": 1, "steps": 3},
        {"name": "a", "min": 1, "max": 1, "steps": 3},
        {"name": "a", "min": 0, "max": 1, "steps": 1},
        {"name": "a", "min": 0, "max": 1, "steps": 3, "scale": "log"},
        {"name": "a", "min": 0, "max": 1, "steps": 3, "scale": "cubic"},
    ],
)
def test_axis_validation(kwargs):
    with pytest.raises(DomainError):
        Axis(**kwargs)


def test_spec_validation():
    a = Axis("a", 0.1, 1.0, 3)
    with pytest.raises(DomainError):
        SweepSpec("heat_map", "linear", (a,))
    with pytest.raises(DomainError):
        SweepSpec("p0_surface", "linear", (Axis("a_hot", 0.1, 1.0, 3),))
    with pytest.raises(DomainError):
        SweepSpec("popchange_curve", "linear", (Axis("y", 0.1, 1.0, 3),))
    with pytest.raises(DomainError):
        SweepSpec("popchange_curve", "linear", (a,), format="xlsx")
    with pytest.raises(DomainError, match="required"):
        evaluate(SweepSpec("popchange_curve", "linear", (a,)))


def test_rows_match_cycle():
    spec = small_surface()
    data = evaluate(spec)
    assert data.columns == ("a_hot", "a_cold", "p0", "dp_hot", "W_ext", "positive_work", "flagged")
    assert len(data.rows) == 12
    row = data.rows[5]
    rep = run_cycle(CycleParams("quadratic", row[0], row[1], 0.8, 2.0, 1e-2))
    assert row[2:] == (rep.p0, rep.dp_hot, rep.W_ext, rep.positive_work, rep.flagged)


def test_csv_round_trip_is_exact():
    spec = small_surface()
    data = evaluate(spec)
    text = to_csv(data)
    assert text.splitlines()[0] == f"# uqo {__version__}, {spec.digest()}"
    columns, rows = read_csv(text)
    assert columns == data.columns
    assert rows == data.rows


def test_csv_rejects_foreign_file():
    with pytest.raises(DomainError):
        read_csv("a,b\n1,2\n")


def test_output_is_deterministic(tmp_path):
    spec = small_surface()
    outs = []
    for fmt in ("csv", "json"):
        for i in range(2):
            path = tmp_path / f"{fmt}{i}"
            run_sweep(SweepSpec(spec.target, spec.coupling, spec.axes, spec.fixed, str(path), fmt))
            outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[2] == outs[3]
    doc = json.loads(outs[2])
    assert doc["spec_hash"] == spec.digest()
    assert doc["columns"][-1] == "flagged"


def test_digest_tracks_parameters():
    a = small_surface()
    b = SweepSpec(a.target, a.coupling, a.axes, {**a.fixed, "v": 0.7})
    assert a.digest() != b.digest()
    assert a.digest() == small_surface().digest()


def test_classical_surface_uses_unruh_temperatures():
    spec = SweepSpec("classical_otto_surface", "linear", (Axis("a_hot", 1.0, 2.0, 2), Axis("a_cold", 0.5, 1.0, 2)))
    data = evaluate(spec)
    a_hot, a_cold, dp = data.rows[1]
    want = classical_otto_dp(a_hot / (2 * math.pi), a_cold / (2 * math.pi), 1.0, 1.0)
    assert dp == want


def test_longtime_rows():
    spec = SweepSpec("longtime_check", "linear", (Axis("y", 50.0, 200.0, 3),), {"x": 1.0})
    errs = evaluate(spec).column("rate_error")
    assert errs[0] > errs[1] > errs[2]


def test_presets_expand():
    assert preset_names("fig3") == ["fig3a", "fig3b", "fig3c", "fig3d"]
    assert preset_names("FIG6A") == ["fig6a"]
    with pytest.raises(DomainError):
        preset_names("fig9")
    assert {PRESETS[n].target for n in preset_names("fig7")} == {"p0_surface", "work_surface"}
    spec = preset("fig4b", v=0.6)
    assert spec.fixed["v"] == 0.6 and spec.fixed["scaling"] == "omega"


def test_duration_scaling_relation():
    base = preset("fig4a")
    axes = (Axis("a", 0.5, 2.0, 3), base.axes[1])
    dur = evaluate(SweepSpec(base.target, base.coupling, axes, base.fixed))
    om = evaluate(SweepSpec(base.target, base.coupling, axes, {**base.fixed, "scaling": "omega"}))
    y = 2 * math.atanh(0.8)
    for row_d, row_o in zip(dur.rows, om.rows):
        a = row_d[0]
        assert row_d[3] == pytest.approx(row_o[3] * (y / a) ** 2, rel=1e-13)


def test_diverging_palette():
    assert diverging_color(0.0, 1.0) == WHITE
    assert diverging_color(1.0, 1.0) == RED
    assert diverging_color(-1.0, 1.0) == BLUE
    assert diverging_color(-5.0, 1.0) == BLUE
    assert diverging_color(0.3, 0.0) == WHITE
    assert sequential_color(2.0, 0.0, 2.0) == RED


def test_svg_outputs_are_well_formed():
    import xml.etree.ElementTree as ET

    svg = heatmap([0.0, 1.0], [0.0, 1.0, 2.0], [[-1, 0, 1], [0.5, 0.2, -0.3]], "t")
    ET.fromstring(svg)
    assert RED in svg and BLUE in svg
    chart = line_chart([("s", [1, 2, 3], [0.1, 0.2, 0.3])], logx=True, shaded=[(1, 2)])
    ET.fromstring(chart)
    data = evaluate(small_surface())
    ET.fromstring(render(data, "svg"))
    curve = evaluate(SweepSpec("popchange_curve", "linear", (Axis("a", 0.05, 5.0, 6, "log"),), {"v": 0.8, "p": 0.0}))
    svg = render(curve, "svg")
    ET.fromstring(svg)
    assert len(re.findall(r'fill="#D1E5F0"', svg)) >= 1
