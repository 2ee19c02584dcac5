"""Integer and modular arithmetic primitives.

Integers are plain Python ints throughout; a residue modulo n is an int in
[0, n).
"""
from functools import lru_cache
from math import gcd, isqrt

DEFAULT_BOUND = 8000


def mod_pow(base, exp, n):
    """Return base**exp mod n (square-and-multiply, delegated to pow)."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    return pow(base % n, exp, n)


def ext_gcd(a, b):
    """Return (g, u, v) with g = gcd(a, b) and u*a + v*b = g."""
    if a == 0 and b == 0:
        raise ValueError("ext_gcd(0, 0) is undefined")
    u0, u1, v0, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return a, u0, v0


def inverse_mod(a, n):
    """Inverse of a modulo n, or None when gcd(a, n) != 1."""
    g, u, _ = ext_gcd(a % n, n)
    if g != 1:
        return None
    return u % n


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd n >= 3."""
    if n < 3 or n % 2 == 0:
        raise ValueError("jacobi needs an odd modulus >= 3")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def integer_kth_root(n, k):
    """Floor of the real k-th root of n >= 1, by integer Newton iteration."""
    if n < 1 or k < 1:
        raise ValueError("integer_kth_root needs n >= 1 and k >= 1")
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    if k >= n.bit_length():
        return 1
    x = 1 << -(-n.bit_length() // k)  # > n^(1/k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    # Newton from above lands on the floor; guard the boundary anyway.
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def is_prime_power(n):
    """Perfect-power decomposition of n.

    Returns (base, exponent) with exponent >= 2 and base not itself a
    perfect power, or None when n is not a perfect power.  The base is not
    certified prime.
    """
    if n < 2:
        raise ValueError("is_prime_power needs n >= 2")
    for d in range(2, n.bit_length() + 1):
        eta = integer_kth_root(n, d)
        if eta > 1 and eta ** d == n:
            inner = is_prime_power(eta)
            if inner is None:
                return eta, d
            return inner[0], inner[1] * d
    return None


@lru_cache(maxsize=8)
def small_primes(bound):
    """All primes p < bound, by sieve."""
    if bound <= 2:
        return ()
    sieve = bytearray([1]) * bound
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=8)
def primorial(bound):
    """Product of all primes below bound."""
    prod = 1
    for p in small_primes(bound):
        prod *= p
    return prod


def trial_division(n, bound=DEFAULT_BOUND):
    """Return a nontrivial factor of n below bound, or None.

    Uses one gcd with the primorial of bound.  For n < bound a prime n is
    recognised directly (it divides the primorial but has no proper factor).
    When None is returned and n < bound**2, n is prime.
    """
    if n < 2:
        raise ValueError("trial_division needs n >= 2")
    g = gcd(n, primorial(bound))
    if g == 1:
        return None
    for p in small_primes(bound):
        if g % p == 0:
            return p if p < n else None
    return None


def two_adic_decompose(u):
    """Return (m, k) with u = m * 2**k and m odd."""
    if u < 1:
        raise ValueError("two_adic_decompose needs u >= 1")
    k = (u & -u).bit_length() - 1
    return u >> k, k


def prime_factors(m):
    """Distinct prime factors of a small integer, by trial division."""
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out
