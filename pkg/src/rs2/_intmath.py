"""Exact integer arithmetic helpers.

All degree-threshold comparisons in the toolkit are done in exact integer
arithmetic (no floats), so that classifications and seed selections are
bit-for-bit reproducible across platforms.
"""

from __future__ import annotations

from math import isqrt


def introot(x: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if x < 0:
        raise ValueError("introot of negative number")
    if k <= 0:
        raise ValueError("root order must be positive")
    if x in (0, 1) or k == 1:
        return x
    if k == 2:
        return isqrt(x)
    # Newton iteration on integers, seeded from the bit length.
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    return r


def floor_pow(base: int, num: int, den: int) -> int:
    """floor(base ** (num/den)) for nonnegative integer base and num/den >= 0."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return introot(base ** num, den)


def ceil_pow(base: int, num: int, den: int) -> int:
    """ceil(base ** (num/den))."""
    f = floor_pow(base, num, den)
    return f if f ** den == base ** num else f + 1


def floor_mul_pow(scale: int, base: int, num: int, den: int) -> int:
    """floor(scale * base ** (num/den)); used for fixed-point thresholds."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return introot(scale ** den * base ** num, den)


def floor_div_sqrt(a: int, d: int) -> int:
    """floor(a / sqrt(d)) in exact integer arithmetic."""
    if d <= 0:
        raise ValueError("d must be positive")
    return isqrt(a * a // d)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit-and-beyond desk-scale inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    c = n | 1
    while not is_prime(c):
        c += 2
    return c
