#!/usr/bin/env python3
"""Independent re-derivation of the constants frozen into the C++ tests.

Uses numpy only; no code is shared with the library. Run it and compare the
printed values with the literals in tests/*.cpp.
"""
import math

import numpy as np


def budget(mu, r, delta, m, theta):
    l = math.log(1 / delta)
    return 72 * mu * r * l * l + 8 * m * theta * theta * math.log(r / delta)


def threshold(d, m, k, eps, theta):
    s = 3 * d / (2 * m)
    return (1 + eps) * (math.sqrt(s) * theta + math.sqrt(s * k * eps))


def increment(prev, new, eps, k):
    num = math.asin(min(1, eps / (1 - eps)))
    den = max(new - prev, math.sqrt(k * eps))
    return min(prev + math.pi / 2 * num / den, 1.5 * math.pi * math.sqrt(k * eps), math.pi / 2)


def certificate(m, d, k, eps, theta):
    return (m / d) * eps + (m / d + 1) * (math.sqrt(24) * theta + math.sqrt(8 * k * eps)) * (1 + eps)


def ededler(m, r, mu, delta, theta):
    l = math.log(1 / delta)
    return budget(mu, r, delta, m, theta) / (4 * m) - (18 * r / m * mu * l * l + 18 * theta**2 * l * l)


def main():
    print("initial budget", math.ceil(budget(1, 1, 0.1, 10000, 0)))
    print("updated raw (r=4)", budget(1, 4, 0.05, 500, 0.2))
    print("updated (r=2, m=1e6)", math.ceil(budget(1, 2, 0.05, 10**6, 0.01)))
    print("threshold", threshold(200, 1000, 3, 0.01, 0.05))
    print("increment 1", increment(0, 0.5, 0.01, 1))
    print("increment 2", increment(0.46, 0.47, 0.01, 2))
    print("certificate", certificate(400, 400, 2, 0.01, 0.05))
    print("ededler m=100 r=4 d=.05 th=.3", ededler(100, 4, 1.0, 0.05, 0.3))

    # Restricted residual: basis (1,1,1)/sqrt3, Omega={0,1}, y=(1,0); normal equations.
    u = np.ones(3) / math.sqrt(3)
    uo = u[:2]
    y = np.array([1.0, 0.0])
    c = (uo @ y) / (uo @ uo)
    print("restricted residual", np.linalg.norm(y - c * uo), "coefficient", c, "recon", c * u)

    # Coherence of span{e1, (0,1,1,0)} in R^4.
    q, _ = np.linalg.qr(np.array([[1, 0], [0, 1], [0, 1], [0, 0]], dtype=float))
    print("coherence", 4 / 2 * max(np.sum(q * q, axis=1)))

    # Rank-one rotated basis at m=10.
    m = 10
    print("noisycoh lhs", m * math.cos(0.2) ** 2, "rhs", 2 * m + 2 * m * 0.04)

    # Extremal angle recursion: worst slack over k <= 1e4 at eps=0.01.
    eps, a, worst = 0.01, 0.0, float("inf")
    for k in range(1, 10001):
        a += math.pi / 2 * math.sqrt(eps / k)
        worst = min(worst, 1.5 * math.pi * math.sqrt(k * eps) - a)
    print("ind extremal worst margin", worst)


if __name__ == "__main__":
    main()
