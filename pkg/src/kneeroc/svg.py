"""Minimal deterministic SVG line plots.

Output depends only on the data: fixed precision, no timestamps, no ids.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH = 480
HEIGHT = 480
MARGIN = 56


def _f(v: float) -> str:
    return f"{v:.2f}"


class Plot:
    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float], title: str,
                 x_label: str, y_label: str):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.parts: list[str] = []
        self._frame(title, x_label, y_label)

    def px(self, x: float) -> float:
        return MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def py(self, y: float) -> float:
        return HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)

    def _frame(self, title: str, x_label: str, y_label: str) -> None:
        left, right = self.px(self.x0), self.px(self.x1)
        top, bottom = self.py(self.y1), self.py(self.y0)
        self.parts.append(
            f'<rect x="{_f(left)}" y="{_f(top)}" width="{_f(right - left)}" '
            f'height="{_f(bottom - top)}" fill="none" stroke="#000"/>'
        )
        for i in range(6):
            fx = self.x0 + (self.x1 - self.x0) * i / 5
            fy = self.y0 + (self.y1 - self.y0) * i / 5
            self.text(self.px(fx), bottom + 16, f"{fx:.1f}", anchor="middle", size=10)
            self.text(left - 6, self.py(fy) + 4, f"{fy:.1f}", anchor="end", size=10)
        self.text(WIDTH / 2, MARGIN / 2, title, anchor="middle", size=14)
        self.text(WIDTH / 2, HEIGHT - 12, x_label, anchor="middle", size=12)
        self.parts.append(
            f'<text x="14" y="{_f(HEIGHT / 2)}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 14 {_f(HEIGHT / 2)})">{escape(y_label)}</text>'
        )

    def text(self, x: float, y: float, s: str, anchor: str = "start", size: int = 11) -> None:
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" '
            f'text-anchor="{anchor}">{escape(s)}</text>'
        )

    def line(self, xs: Sequence[float], ys: Sequence[float], stroke: str = "#1f77b4",
             dashed: bool = False) -> None:
        coords = " ".join(f"{_f(self.px(x))},{_f(self.py(y))}" for x, y in zip(xs, ys))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="2"{dash}/>'
        )

    def marker(self, x: float, y: float, label: str | None = None, fill: str = "#d62728") -> None:
        self.parts.append(f'<circle cx="{_f(self.px(x))}" cy="{_f(self.py(y))}" r="4" fill="{fill}"/>')
        if label:
            self.text(self.px(x) + 8, self.py(y) - 8, label)

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">'
        )
        return "\n".join([head, *self.parts, "</svg>"]) + "\n"


def roc_svg(fprs: Sequence[float], tprs: Sequence[float], title: str,
            knee: tuple[float, float] | None = None, auc: float | None = None) -> str:
    plot = Plot((0.0, 1.0), (0.0, 1.0), title, "False positive rate", "True positive rate")
    plot.line([0.0, 1.0], [0.0, 1.0], stroke="#7f7f7f", dashed=True)
    pairs = sorted(zip(fprs, tprs))
    plot.line([p[0] for p in pairs], [p[1] for p in pairs])
    if auc is not None:
        plot.text(plot.px(0.55), plot.py(0.08), f"AUC = {auc:.4f}")
    if knee is not None:
        plot.marker(knee[0], knee[1], f"knee ({knee[0]:.3f}, {knee[1]:.3f})")
    return plot.render()


def knee_svg(probs: Sequence[float], title: str, knee_index: int | None = None) -> str:
    ys = sorted(probs)
    xs = list(range(len(ys)))
    top = max(1e-9, max(ys))
    plot = Plot((0.0, float(len(ys) - 1)), (0.0, top), title, "Rank (ascending)", "Probability")
    plot.line(xs, ys)
    for x, y in zip(xs, ys):
        plot.marker(x, y, fill="#1f77b4")
    if knee_index is not None:
        plot.marker(knee_index, ys[knee_index], f"knee = {knee_index}")
    return plot.render()
