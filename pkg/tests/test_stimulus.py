import re

import pytest

from prefloc.stimulus import FAMILIES, StimulusSpec, render


def _attr(document, name):
    match = re.search(rf'{name}="([-0-9.]+)"', document)
    assert match, f"attribute {name} not found"
    return float(match.group(1))


def test_render_is_deterministic():
    spec = StimulusSpec(family="color_shape", dimension=4)
    a = (0.2, 0.5, 0.7, 0.1)
    assert render(spec, a) == render(spec, a)


def test_face_glyph_deterministic():
    spec = StimulusSpec(family="face_glyph", dimension=4)
    a = (0.9, 0.1, 0.5, 0.3)
    assert render(spec, a) == render(spec, a)


def test_hue_endpoints():
    spec = StimulusSpec(family="color_shape", dimension=2)
    red = render(spec, (0.0, 0.5))
    magenta = render(spec, (1.0, 0.5))
    assert "hsl(0.0000, 80%, 55%)" in red
    assert "hsl(300.0000, 80%, 55%)" in magenta


def test_radius_strictly_increasing():
    spec = StimulusSpec(family="color_shape", dimension=2)
    radii = [
        _attr(render(spec, (0.5, a1)), "rx")
        for a1 in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    ]
    assert all(b > a for a, b in zip(radii, radii[1:]))


def test_mouth_curvature_monotone():
    spec = StimulusSpec(family="face_glyph", dimension=1)
    controls = []
    for a0 in (0.0, 0.25, 0.5, 0.75, 1.0):
        document = render(spec, (a0,))
        match = re.search(r"Q [-0-9.]+ ([-0-9.]+)", document)
        controls.append(float(match.group(1)))
    assert all(b > a for a, b in zip(controls, controls[1:]))


def test_parameter_injectivity_at_002():
    spec = StimulusSpec(family="color_shape", dimension=4)
    base = (0.4, 0.4, 0.4, 0.4)
    for index, name in enumerate(("fill", "rx", "rx", "transform")):
        bumped = list(base)
        bumped[index] += 0.02
        assert render(spec, base) != render(spec, bumped)


def test_out_of_box_rejected():
    spec = StimulusSpec(family="color_shape", dimension=2)
    with pytest.raises(ValueError):
        render(spec, (1.2, 0.5))
    with pytest.raises(ValueError):
        render(spec, (0.5,))


def test_spec_validation():
    with pytest.raises(ValueError):
        StimulusSpec(family="watercolor")
    with pytest.raises(ValueError):
        StimulusSpec(dimension=5)
    with pytest.raises(ValueError):
        StimulusSpec(width=2)
    assert set(FAMILIES) == {"color_shape", "face_glyph"}


def test_lower_dimensions_use_midpoint_defaults():
    two = render(StimulusSpec(family="color_shape", dimension=2), (0.3, 0.6))
    four = render(StimulusSpec(family="color_shape", dimension=4), (0.3, 0.6, 0.5, 0.5))
    assert two == four
