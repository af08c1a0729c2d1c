"""Budgeted integer factoring: trial division then Pollard rho.

This is the concrete stand-in for an integer-factoring oracle.  Desk-scale
discriminants factor instantly; genuinely hard cofactors raise
FactoringBudgetError carrying the unfactored part instead of spinning forever.
"""

from __future__ import annotations

import math
import random

from .errors import FactoringBudgetError

TRIAL_BOUND = 10 ** 6

_SMALL_PRIMES = None


def _small_primes():
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        sieve = bytearray([1]) * (TRIAL_BOUND + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, int(TRIAL_BOUND ** 0.5) + 1):
            if sieve[i]:
                sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
        _SMALL_PRIMES = [i for i in range(2, TRIAL_BOUND + 1) if sieve[i]]
    return _SMALL_PRIMES


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic bases cover n < 3.3e24, random extras after."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    bases = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
    if n >= 3317044064679887385961981:
        rng = random.Random(0xFAC7)
        bases += [rng.randrange(2, n - 1) for _ in range(16)]
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rounds: int, rng: random.Random):
    if n % 2 == 0:
        return 2
    for _ in range(24):
        c = rng.randrange(1, n)
        x = rng.randrange(0, n)
        y = x
        d = 1
        count = 0
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
            count += 1
            if count > rounds:
                break
        if 1 < d < n:
            return d
    return None


def factorize(n: int, rho_rounds: int = 1_000_000) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}.  0 is rejected."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    rng = random.Random(0x5EED ^ (n & 0xFFFFFFFF))
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        # perfect powers split for free
        root = _perfect_power(m)
        if root is not None:
            base, k = root
            stack.extend([base] * k)
            continue
        d = _pollard_rho(m, rho_rounds, rng)
        if d is None:
            raise FactoringBudgetError(m)
        stack.append(d)
        stack.append(m // d)
    return out


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, exact integer Newton."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x


def _perfect_power(n: int):
    for k in range(2, n.bit_length() + 1):
        root = iroot(n, k)
        if root > 1 and root ** k == n:
            return root, k
    return None


def is_squarefree(n: int) -> bool:
    if n in (-1, 1):
        return True
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())
