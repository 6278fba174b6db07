"""Rotating parallel-projection views of a configuration, written as SVG frame grids.

This is the only place exact coordinates are turned into floats.
"""
from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .configuration import Configuration

PALETTE_SIZE = 18


def _make_palette(n: int = PALETTE_SIZE) -> tuple[str, ...]:
    out = []
    for k in range(n):
        r, g, b = colorsys.hls_to_rgb(k / n, 0.45, 0.85)
        out.append("#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255)))
    return tuple(out)


# hue k sits at k * 20 degrees, so k and k + 9 are opposite on the color wheel
PALETTE = _make_palette()


@dataclass(frozen=True)
class RenderSpec:
    plane: tuple[int, int] = (0, 2)
    frame_count: int = 1
    projection_axes: tuple[int, int] = (0, 1)
    width: int = 240
    height: int = 240
    marker_radius: float = 3.0
    columns: int = 5

    def __post_init__(self):
        object.__setattr__(self, "plane", tuple(int(i) for i in self.plane))
        object.__setattr__(self, "projection_axes", tuple(int(i) for i in self.projection_axes))
        if len(self.plane) != 2 or self.plane[0] == self.plane[1]:
            raise ValueError(f"rotation plane needs two distinct axes, got {self.plane}")
        if len(self.projection_axes) != 2 or self.projection_axes[0] == self.projection_axes[1]:
            raise ValueError(f"projection needs two distinct axes, got {self.projection_axes}")
        if min(self.plane + self.projection_axes) < 0:
            raise ValueError("axis indices must be non-negative")
        if self.frame_count < 1:
            raise ValueError(f"frame_count must be >= 1, got {self.frame_count}")
        if self.width <= 0 or self.height <= 0 or self.marker_radius <= 0:
            raise ValueError("canvas size and marker radius must be positive")
        if self.columns < 1:
            raise ValueError("columns must be >= 1")

    def check_dim(self, dim: int) -> None:
        for i in self.plane + self.projection_axes:
            if i >= dim:
                raise ValueError(f"axis {i} out of range for dimension {dim}")


def _as_floats(points) -> np.ndarray:
    if isinstance(points, Configuration):
        return points.floats()
    return np.asarray(points, dtype=float)


def rotate_frame(config, plane: Sequence[int], angle: float) -> np.ndarray:
    """Rotate every point by ``angle`` in the coordinate plane ``plane``; other axes are untouched."""
    pts = _as_floats(config).copy()
    i, j = (int(k) for k in plane)
    dim = pts.shape[1] if pts.ndim == 2 else 0
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise ValueError(f"bad rotation plane {tuple(plane)} for dimension {dim}")
    c, s = math.cos(angle), math.sin(angle)
    xi, xj = pts[:, i].copy(), pts[:, j].copy()
    pts[:, i] = c * xi - s * xj
    pts[:, j] = s * xi + c * xj
    return pts


def project_parallel(points, axes: Sequence[int]) -> np.ndarray:
    pts = _as_floats(points)
    if pts.ndim == 1:
        pts = pts[None, :]
    dim = pts.shape[1]
    a, b = (int(k) for k in axes)
    if a == b or not (0 <= a < dim and 0 <= b < dim):
        raise ValueError(f"bad projection axes {tuple(axes)} for dimension {dim}")
    return pts[:, [a, b]]


def antipodal_label(label: str) -> str:
    """Label of the opposite base point: signs flipped, ``pole+`` <-> ``pole-``."""
    return label.translate(str.maketrans("+-", "-+"))


def label_colors(labels: Sequence[str]) -> dict[str, str]:
    """Palette entry per label in sort order; a label and its antipode get opposite hues."""
    labels = sorted(set(labels))
    present = set(labels)
    colors: dict[str, str] = {}
    half = PALETTE_SIZE // 2
    slot = 0
    for f in labels:
        if f in colors:
            continue
        colors[f] = PALETTE[slot % PALETTE_SIZE]
        g = antipodal_label(f)
        if g != f and g in present and g not in colors:
            colors[g] = PALETTE[(slot + half) % PALETTE_SIZE]
        slot += 1
    return colors


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _frame_group(xy: np.ndarray, fills: Sequence[str], spec: RenderSpec,
                 index: int, ox: float, oy: float) -> list[str]:
    w, h = spec.width, spec.height
    pad = 2 * spec.marker_radius + 14
    half = (min(w, h) - 2 * pad) / 2
    cx, cy = w / 2, h / 2 + 6
    out = [f'<g id="frame-{index:03d}" transform="translate({_fmt(ox)},{_fmt(oy)})">',
           f'<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="#bbbbbb"/>',
           f'<text x="6" y="14" font-size="11" font-family="sans-serif">'
           f'{index}·2π/{spec.frame_count}</text>']
    for (x, y), fill in zip(xy, fills):
        out.append(f'<circle cx="{_fmt(cx + half * x)}" cy="{_fmt(cy - half * y)}" '
                   f'r="{_fmt(spec.marker_radius)}" fill="{fill}" fill-opacity="0.8"/>')
    out.append("</g>")
    return out


def _frames(config: Configuration, spec: RenderSpec) -> list[np.ndarray]:
    spec.check_dim(config.ambient_dim)
    base = config.floats()
    return [project_parallel(rotate_frame(base, spec.plane, 2 * math.pi * i / spec.frame_count),
                             spec.projection_axes)
            for i in range(spec.frame_count)]


def _document(width: float, height: float, body: list[str], title: str) -> str:
    head = ['<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
            f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
            f"<title>{escape(title)}</title>"]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def render_svg(config: Configuration, spec: RenderSpec) -> str:
    """One SVG with ``spec.frame_count`` views laid out row-major; frame i is rotated by i 2pi/N."""
    colors = label_colors(config.fiber_labels)
    fills = [colors[f] for f in config.fiber_labels]
    cols = min(spec.columns, spec.frame_count)
    rows = math.ceil(spec.frame_count / cols)
    body = []
    for i, xy in enumerate(_frames(config, spec)):
        r, c = divmod(i, cols)
        body += _frame_group(xy, fills, spec, i, c * spec.width, r * spec.height)
    title = f"{config.name}: {len(config)} points, {len(colors)} fibers"
    return _document(cols * spec.width, rows * spec.height, body, title)


def render_frames(config: Configuration, spec: RenderSpec) -> list[str]:
    """Each frame as its own SVG document."""
    colors = label_colors(config.fiber_labels)
    fills = [colors[f] for f in config.fiber_labels]
    docs = []
    for i, xy in enumerate(_frames(config, spec)):
        body = _frame_group(xy, fills, spec, i, 0, 0)
        docs.append(_document(spec.width, spec.height, body, f"{config.name} frame {i}"))
    return docs


def write_frames(config: Configuration, spec: RenderSpec, directory: Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, doc in enumerate(render_frames(config, spec)):
        p = directory / f"frame_{i:03d}.svg"
        p.write_text(doc, encoding="utf-8")
        paths.append(p)
    return paths
