"""Derivative-free 1-D minimization used by the capacity optimizers."""

import math

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section(f, a, b, tol=1e-12, max_iter=200):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point seen, endpoints included, so a
    minimum sitting on the bracket boundary is not lost.
    """
    a, b = min(a, b), max(a, b)
    best = min(((a, f(a)), (b, f(b))), key=lambda t: t[1])
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if yc <= yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    for x, y in ((c, yc), (d, yd)):
        if y < best[1]:
            best = (x, y)
    return best


def golden_section_max(f, a, b, tol=1e-10, max_iter=200):
    x, y = golden_section(lambda t: -f(t), a, b, tol=tol, max_iter=max_iter)
    return x, -y
