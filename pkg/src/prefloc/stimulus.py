"""Deterministic attribute-to-image rendering for human sessions.

Attribute vectors map to SVG documents through fixed featurizations, so two
renders of the same point are byte-identical and tests can parse parameters
back out of the markup.

color_shape:  a0 -> hue 0..300deg, a1 -> radius 10..45% of canvas,
              a2 -> aspect ratio 0.5..2.0, a3 -> rotation 0..90deg
face_glyph:   a0 -> mouth curvature, a1 -> eyebrow angle,
              a2 -> eye size, a3 -> face width

Coordinates beyond the configured dimension are unused; missing ones sit at
their midpoint defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .attributes import as_attribute_vector

FAMILIES = ("color_shape", "face_glyph")


@dataclass(frozen=True)
class StimulusSpec:
    family: str = "color_shape"
    dimension: int = 2
    width: int = 240
    height: int = 240

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.dimension not in (1, 2, 3, 4):
            raise ValueError(f"dimension must be 1..4, got {self.dimension}")
        if self.width < 16 or self.height < 16:
            raise ValueError("canvas must be at least 16x16 pixels")


def render(spec: StimulusSpec, attributes) -> str:
    """Render an attribute vector to an SVG document (pure, deterministic)."""
    a = as_attribute_vector(attributes, dimension=spec.dimension)
    features = [a[i] if i < a.size else 0.5 for i in range(4)]
    if spec.family == "color_shape":
        return _color_shape(spec, features)
    return _face_glyph(spec, features)


def _color_shape(spec: StimulusSpec, f: list[float]) -> str:
    w, h = spec.width, spec.height
    hue = 300.0 * f[0]
    radius = (0.10 + 0.35 * f[1]) * min(w, h)
    aspect = 0.5 + 1.5 * f[2]
    rotation = 90.0 * f[3]
    rx = radius * math.sqrt(aspect)
    ry = radius / math.sqrt(aspect)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
        f'<rect width="{w}" height="{h}" fill="#fafafa"/>'
        f'<ellipse cx="{_num(w / 2)}" cy="{_num(h / 2)}" rx="{_num(rx)}" ry="{_num(ry)}" '
        f'fill="hsl({_num(hue)}, 80%, 55%)" '
        f'transform="rotate({_num(rotation)} {_num(w / 2)} {_num(h / 2)})"/>'
        "</svg>"
    )


def _face_glyph(spec: StimulusSpec, f: list[float]) -> str:
    w, h = spec.width, spec.height
    cx, cy = w / 2, h / 2
    mouth_curve = 2.0 * f[0] - 1.0            # -1 frown .. +1 smile
    brow_angle = math.radians(-30.0 + 60.0 * f[1])
    eye_r = (0.02 + 0.04 * f[2]) * min(w, h)
    face_rx = (0.30 + 0.15 * f[3]) * w
    face_ry = 0.40 * h

    eye_dx = 0.35 * face_rx
    eye_y = cy - 0.15 * face_ry
    mouth_half = 0.45 * face_rx
    mouth_y = cy + 0.45 * face_ry
    mouth_ctrl_y = mouth_y + mouth_curve * 0.35 * face_ry
    brow_half = eye_r * 1.8
    brow_y = eye_y - eye_r * 2.2
    brow_dx = brow_half * math.cos(brow_angle)
    brow_dy = brow_half * math.sin(brow_angle)

    def brow(center_x: float) -> str:
        return (
            f'<line x1="{_num(center_x - brow_dx)}" y1="{_num(brow_y + brow_dy)}" '
            f'x2="{_num(center_x + brow_dx)}" y2="{_num(brow_y - brow_dy)}" '
            'stroke="#31343a" stroke-width="3"/>'
        )

    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
        f'<rect width="{w}" height="{h}" fill="#fafafa"/>'
        f'<ellipse cx="{_num(cx)}" cy="{_num(cy)}" rx="{_num(face_rx)}" ry="{_num(face_ry)}" '
        'fill="#ffe0b8" stroke="#caa27a"/>'
        f'<circle cx="{_num(cx - eye_dx)}" cy="{_num(eye_y)}" r="{_num(eye_r)}" fill="#31343a"/>'
        f'<circle cx="{_num(cx + eye_dx)}" cy="{_num(eye_y)}" r="{_num(eye_r)}" fill="#31343a"/>'
        f"{brow(cx - eye_dx)}{brow(cx + eye_dx)}"
        f'<path d="M {_num(cx - mouth_half)} {_num(mouth_y)} '
        f'Q {_num(cx)} {_num(mouth_ctrl_y)} {_num(cx + mouth_half)} {_num(mouth_y)}" '
        'fill="none" stroke="#b3543e" stroke-width="3"/>'
        "</svg>"
    )


def _num(value: float) -> str:
    """Fixed-precision formatting keeps renders byte-stable."""
    return f"{value:.4f}"
