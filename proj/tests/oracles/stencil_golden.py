#!/usr/bin/env python3
"""Independent reference for the stencil coefficients c_{p,q}.

Integrates the hat-weighted kernel over the quarter disc in polar coordinates
with adaptive quadrature (scipy.integrate.quad, nested), giving every kink of
the bilinear hat and every grid line crossing to the integrator as a
breakpoint. Output is in the stencil golden-file format.

    python3 stencil_golden.py 1 0.2 0.1 > ../data/stencil_a1_d0.2_h0.1.txt
"""
import math
import sys

from scipy.integrate import quad


def hat(t):
    return max(0.0, 1.0 - abs(t))


def coefficient(p, q, alpha, delta, h):
    if p == 0 and q == 0:
        return 0.0
    pref = 2.0 * (4.0 - alpha) / (math.pi * delta ** (4.0 - alpha))

    def radial(theta):
        c, s = math.cos(theta), math.sin(theta)
        pts = []
        for k in range(0, int(delta / h) + 3):
            if c > 1e-15:
                pts.append(k * h / c)
            if s > 1e-15:
                pts.append(k * h / s)
        pts = sorted(x for x in pts if 0.0 < x < delta)

        def f(r):
            return hat(r * c / h - p) * hat(r * s / h - q) * r ** (2.0 - alpha) / (c + s)

        val, _ = quad(f, 0.0, delta, points=pts or None, epsabs=1e-15, epsrel=1e-13, limit=400)
        return val

    angles = set()
    m = int(delta / h) + 3
    for i in range(m):
        for j in range(m):
            if i or j:
                angles.add(math.atan2(j * h, i * h))
    # Arc / grid-line crossings.
    for k in range(m):
        if k * h < delta:
            y = math.sqrt(delta * delta - (k * h) ** 2)
            angles.add(math.atan2(y, k * h))
            angles.add(math.atan2(k * h, y))
    pts = sorted(a for a in angles if 0.0 < a < math.pi / 2)
    integral, _ = quad(radial, 0.0, math.pi / 2, points=pts, epsabs=1e-15, epsrel=1e-13, limit=400)
    return (p + q) / ((p * p + q * q) * h) * pref * integral


def main():
    alpha, delta, h = (float(x) for x in sys.argv[1:4])
    r = int(math.floor(delta / h)) + 1
    print(f"r={r} alpha={alpha:.17g} delta={delta:.17g} h={h:.17g}")
    for p in range(r + 1):
        print(" ".join(f"{coefficient(p, q, alpha, delta, h):.17g}" for q in range(r + 1)))


if __name__ == "__main__":
    main()
