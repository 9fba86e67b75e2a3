"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""

import math

import mpmath as mp

mp.mp.dps = 40


def wigner_sum(j: int, k: int, beta: float) -> float:
    """<j k| exp(-i beta J_y) |j 0> from the explicit factorial sum."""
    b = mp.mpf(beta)
    c, s = mp.cos(b / 2), mp.sin(b / 2)
    pref = mp.sqrt(mp.factorial(j + k) * mp.factorial(j - k) * mp.factorial(j) ** 2)
    total = mp.mpf(0)
    for n in range(0, 2 * j + 1):
        a1, a2, a3 = j - n, k + n, j - k - n
        if a1 < 0 or a2 < 0 or a3 < 0:
            continue
        total += (
            (-1) ** (k + n)
            * pref
            / (mp.factorial(a1) * mp.factorial(n) * mp.factorial(a2) * mp.factorial(a3))
            * c ** (2 * j - k - 2 * n)
            * s ** (k + 2 * n)
        )
    return float(total)


def bessel_series(n: int, x: float) -> float:
    """J_n(x) from its power series, summed in extended precision."""
    x = mp.mpf(x)
    return float(
        mp.nsum(lambda j: (-1) ** j * (x / 2) ** (2 * j + n) / (mp.factorial(j) * mp.factorial(j + n)), [0, mp.inf])
    )


def entropy(x: float) -> float:
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)
