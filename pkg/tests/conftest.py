"""Shared fixtures and independent reference implementations.

The helpers here deliberately avoid the package's own computational paths:
expected values in the tests are produced by plain-Python enumeration and
exact rational arithmetic, then compared against the library.
"""

from fractions import Fraction
from itertools import product as iproduct

import numpy as np
import pytest

# canonical admissible triples (x, y, z), same order the package documents
TRIPLES = ((1, 1, 0), (0, 1, 1), (1, 0, 1), (0, 0, 1), (1, 0, 0), (0, 1, 0))


def brute_force_w(f_table, g_table, h_table, n, probs6):
    """Plain-Python profile enumeration of the irrationality probability."""
    total = 0.0
    for profile in iproduct(range(6), repeat=n):
        x = y = z = 0
        p = 1.0
        for i, digit in enumerate(profile):
            xb, yb, zb = TRIPLES[digit]
            x |= xb << i
            y |= yb << i
            z |= zb << i
            p *= probs6[digit]
        a, b, c = f_table[x], g_table[y], h_table[z]
        if (a and b and c) or (not a and not b and not c):
            total += p
    return total


def fraction_spectrum(table, n):
    """Exact signed-character coefficients by direct double summation."""
    size = 1 << n
    out = []
    for mask in range(size):
        acc = Fraction(0)
        for x in range(size):
            if table[x]:
                zeros = bin(mask & ~x & (size - 1)).count("1")
                acc += Fraction((-1) ** zeros)
        out.append(acc / size)
    return out


def fraction_biased_product(sa, sb, delta: Fraction):
    """Exact biased inner product from exact spectra."""
    n = (len(sa) - 1).bit_length()
    acc = Fraction(0)
    for mask in range(1, len(sa)):
        acc += sa[mask] * sb[mask] * delta ** bin(mask).count("1")
    return acc


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
