"""Reference computations kept independent of the code under test."""

from __future__ import annotations

import math
from typing import Callable, Sequence


def maclaurin_erf(x: float, tol: float = 1e-17) -> float:
    """erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1)), summed to convergence."""
    total = 0.0
    term = x  # (-1)^n x^(2n+1) / n!
    n = 0
    while True:
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) < tol and n > 2:
            break
        n += 1
        term *= -x * x / n
    return 2.0 / math.sqrt(math.pi) * total


def simpson(f: Callable[[float], float], a: float, b: float, n: int = 4000) -> float:
    if n % 2:
        n += 1
    if b == a:
        return 0.0
    h = (b - a) / n
    s = f(a) + f(b)
    s += 4.0 * sum(f(a + i * h) for i in range(1, n, 2))
    s += 2.0 * sum(f(a + i * h) for i in range(2, n, 2))
    return s * h / 3.0


def gaussian_density(mu: float, sigma: float) -> Callable[[float], float]:
    c = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    return lambda x: c * math.exp(-0.5 * ((x - mu) / sigma) ** 2)


def cdf_by_quadrature(t: float, mu: float, sigma: float, n: int = 4000) -> float:
    lo = mu - 12.0 * sigma
    if t <= lo:
        return 0.0
    return simpson(gaussian_density(mu, sigma), lo, t, n)


def binormal_auc(mu_pos: float, sigma_pos: float, mu_neg: float, sigma_neg: float) -> float:
    """Closed-form AUC Phi(d), Phi evaluated by quadrature of the standard density."""
    d = (mu_pos - mu_neg) / math.sqrt(sigma_pos**2 + sigma_neg**2)
    return cdf_by_quadrature(d, 0.0, 1.0, n=8000)


def chord_knee(points: Sequence[tuple[float, float]], eps: float = 1e-12) -> int | None:
    """Index of the point farthest from the chord joining the endpoints, after
    min-max normalizing both axes; None when every point lies on the chord."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        return None
    nx = [(x - x0) / (x1 - x0) for x in xs]
    ny = [(y - y0) / (y1 - y0) for y in ys]
    ax, ay, bx, by = nx[0], ny[0], nx[-1], ny[-1]
    length = math.hypot(bx - ax, by - ay)
    dist = [abs((bx - ax) * (ay - py) - (ax - px) * (by - ay)) / length for px, py in zip(nx, ny)]
    best = max(range(len(dist)), key=lambda i: dist[i])
    return None if dist[best] <= eps else best


def count_curves(positives: Sequence[float], negatives: Sequence[float],
                 thresholds: Sequence[float], minimum: int = 2) -> tuple[int, int]:
    """(generated, skipped) iteration counts by direct enumeration."""
    made = skipped = 0
    for t in thresholds:
        p = sum(1 for v in positives if v >= t)
        n = sum(1 for v in negatives if v >= t)
        if p >= minimum and n >= minimum:
            made += 1
        else:
            skipped += 1
    return made, skipped
