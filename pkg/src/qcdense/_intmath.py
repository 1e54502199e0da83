"""Small integer-theoretic helpers: sieves, factorization, CRT."""

from __future__ import annotations

from math import gcd, isqrt


def primes_below(bound: int) -> tuple[int, ...]:
    """All primes p < bound, ascending, by sieve of Eratosthenes."""
    if bound <= 2:
        return ()
    flags = bytearray([1]) * bound
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(bound - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, bound, p)))
    return tuple(i for i in range(bound) if flags[i])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d = 41
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


_SPF_CACHE: list[int] = []


def _grow_spf(limit: int) -> list[int]:
    global _SPF_CACHE
    if len(_SPF_CACHE) <= limit:
        size = max(limit + 1, 2 * len(_SPF_CACHE), 1 << 10)
        spf = list(range(size))
        for p in range(2, isqrt(size - 1) + 1):
            if spf[p] == p:
                for q in range(p * p, size, p):
                    if spf[q] == q:
                        spf[q] = p
        _SPF_CACHE = spf
    return _SPF_CACHE


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    if n < 1 << 20:
        spf = _grow_spf(n)
        out: dict[int, int] = {}
        while n > 1:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out
    out = {}
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out[d] = e
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = 1
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine x = r1 mod m1 and x = r2 mod m2 for coprime moduli."""
    if gcd(m1, m2) != 1:
        raise ValueError("crt_pair needs coprime moduli")
    # inverse of m1 mod m2 via Python's builtin modular inverse
    t = pow(m1, -1, m2)
    x = (r1 + (r2 - r1) * t % m2 * m1) % (m1 * m2)
    return x, m1 * m2


def crt(pairs: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine a list of (residue, modulus) congruences, coprime moduli."""
    r, m = 0, 1
    for r2, m2 in pairs:
        r, m = crt_pair(r, m, r2 % m2, m2)
    return r, m
