"""Minimal deterministic SVG plots (fixed number formatting, no timestamps)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape


def _n(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass
class Plot:
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    width: int = 640
    height: int = 480
    margin: int = 50
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    items: list[str] = field(default_factory=list)

    def _x(self, x: float) -> float:
        a, b = self.xlim
        return self.margin + (x - a) / (b - a) * (self.width - 2 * self.margin)

    def _y(self, y: float) -> float:
        a, b = self.ylim
        return self.height - self.margin - (y - a) / (b - a) * (self.height - 2 * self.margin)

    def rect(self, x0: float, y0: float, x1: float, y1: float, fill: str = "#888") -> None:
        X0, X1 = sorted((self._x(x0), self._x(x1)))
        Y0, Y1 = sorted((self._y(y0), self._y(y1)))
        self.items.append(
            f'<rect x="{_n(X0)}" y="{_n(Y0)}" width="{_n(max(X1 - X0, 0.5))}" '
            f'height="{_n(max(Y1 - Y0, 0.5))}" fill="{fill}"/>'
        )

    def polyline(self, pts: Iterable[tuple[float, float]], stroke: str = "black", width: float = 1.0,
                 dash: Optional[str] = None) -> None:
        pts = [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
        if len(pts) < 2:
            return
        coords = " ".join(f"{_n(self._x(x))},{_n(self._y(y))}" for x, y in pts)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{_n(width)}"{extra}/>')

    def points(self, pts: Iterable[tuple[float, float]], r: float = 2.0, fill: str = "black") -> None:
        for x, y in pts:
            if math.isfinite(x) and math.isfinite(y):
                self.items.append(f'<circle cx="{_n(self._x(x))}" cy="{_n(self._y(y))}" r="{_n(r)}" fill="{fill}"/>')

    def hline(self, y: float, stroke: str = "red", dash: Optional[str] = "4,3") -> None:
        self.polyline([(self.xlim[0], y), (self.xlim[1], y)], stroke, 1.0, dash)

    def _axes(self) -> list[str]:
        m, w, h = self.margin, self.width, self.height
        out = [f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" fill="none" stroke="black"/>']
        for v, anchor in ((self.xlim[0], "start"), (self.xlim[1], "end")):
            out.append(f'<text x="{_n(self._x(v))}" y="{h - m + 15}" font-size="11" text-anchor="{anchor}">{_n(v)}</text>')
        for v in self.ylim:
            out.append(f'<text x="{m - 4}" y="{_n(self._y(v))}" font-size="11" text-anchor="end">{_n(v)}</text>')
        if self.title:
            out.append(f'<text x="{w / 2}" y="{m / 2}" font-size="14" text-anchor="middle">{escape(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{w / 2}" y="{h - 10}" font-size="12" text-anchor="middle">{escape(self.xlabel)}</text>')
        if self.ylabel:
            out.append(f'<text x="12" y="{h / 2}" font-size="12" text-anchor="middle" '
                       f'transform="rotate(-90 12 {h / 2})">{escape(self.ylabel)}</text>')
        return out

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        body = ['<rect width="100%" height="100%" fill="white"/>'] + self.items + self._axes()
        return "\n".join([head, *body, "</svg>"]) + "\n"


def bounds(values: Sequence[float], pad: float = 0.05) -> tuple[float, float]:
    vals = [v for v in values if math.isfinite(v)]
    if not vals:
        return 0.0, 1.0
    a, b = min(vals), max(vals)
    if a == b:
        a, b = a - 1, b + 1
    d = (b - a) * pad
    return a - d, b + d
