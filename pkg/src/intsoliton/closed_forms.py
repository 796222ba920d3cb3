"""Explicit closed forms for the low-order fixtures, kept as golden references."""
from __future__ import annotations

import numpy as np


def u2_h1(x):
    """Deformed profile for (h=1, v=[2])."""
    c2 = np.cosh(np.asarray(x, dtype=float)) ** 2
    return -30 * (4 * c2**2 - 8 * c2 + 5) / (c2 * (36 * c2**2 - 60 * c2 + 25))


def u2_h2(x):
    """Deformed profile for (h=2, v=[2])."""
    c2 = np.cosh(np.asarray(x, dtype=float)) ** 2
    return -4 * (144 * c2**2 - 280 * c2 + 147) / (c2 * (64 * c2**2 - 112 * c2 + 49))


def u1_minus_u(h, x):
    """Change of the potential under the odd v=1 seed (singular at x=0)."""
    x = np.asarray(x, dtype=float)
    return -2 * (h + 1) / np.cosh(x) ** 2 + 2 / np.sinh(x) ** 2


def u_14(x, t):
    """Integer 2-soliton with kappa = (1, 4)."""
    x = np.asarray(x, dtype=float)
    e = np.exp
    num = e(1024 * t) + e(16 * x) + 16 * e(520 * t + 6 * x) + 30 * e(512 * t + 8 * x) + 16 * e(504 * t + 10 * x)
    den = 3 * e(520 * t) + 3 * e(10 * x) + 5 * e(512 * t + 2 * x) + 5 * e(8 * t + 8 * x)
    return -120 * e(8 * t + 2 * x) * num / den**2


def u_125(x, t):
    """Integer 3-soliton with kappa = (1, 2, 5)."""
    x = np.asarray(x, dtype=float)
    e = np.exp
    num = (
        9 * e(2128 * t) + 9 * e(28 * x) + 1575 * e(16 * (63 * t + x)) + 882 * e(16 * (66 * t + x))
        + 3252 * e(14 * (76 * t + x)) + 175 * e(8 * (142 * t + x)) + 49 * e(8 * (250 * t + x))
        + 126 * e(4 * (516 * t + x)) + 56 * e(2072 * t + 2 * x) + 126 * e(2056 * t + 6 * x)
        + 1008 * e(1128 * t + 10 * x) + 882 * e(1072 * t + 12 * x) + 1575 * e(1120 * t + 12 * x)
        + 1008 * e(1000 * t + 18 * x) + 49 * e(128 * t + 20 * x) + 175 * e(992 * t + 20 * x)
        + 126 * e(72 * t + 22 * x) + 126 * e(64 * t + 24 * x) + 56 * e(56 * t + 26 * x)
    )
    den = (
        2 * e(1072 * t) + 2 * e(16 * x) + 14 * e(4 * (252 * t + x)) + 9 * e(2 * (532 * t + x))
        + 7 * e(1000 * t + 6 * x) + 7 * e(72 * t + 10 * x) + 14 * e(64 * t + 12 * x) + 9 * e(8 * t + 14 * x)
    )
    return -16 * e(8 * t + 2 * x) * num / den**2


def det_two_soliton(k0, k1, c0t, c1t, x):
    """det A for a general 2-soliton, given c_n(t)."""
    x = np.asarray(x, dtype=float)
    a = 1 + c0t**2 / (2 * k0) * np.exp(-2 * k0 * x)
    b = 1 + c1t**2 / (2 * k1) * np.exp(-2 * k1 * x)
    return a * b - c0t**2 * c1t**2 / (k0 + k1) ** 2 * np.exp(-2 * (k0 + k1) * x)
