"""Bad-witness densities at desk scale: closed formula versus exhaustive counts.

A model fixes, for every prime p | n, how p splits in a cyclic algebra of
dimension d: residue degree f, number m of primes above p, valuation v and
twist t.  The group acted on is (F_{p^f}^*)^m with
sigma(x_0, ..., x_{m-1}) = (x_1, ..., x_{m-1}, x_0^(p^t)).
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .arith import prime_factors, two_adic_decompose

MAX_FIELD = 1 << 16
MAX_ENUMERATION = 10 ** 8


class SizeGuardError(ValueError):
    """The requested enumeration is too large for the exhaustive oracle."""


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class SplittingDatum:
    p: int
    v: int
    f: int
    m: int
    t: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.v < 1 or self.f < 1 or self.m < 1:
            raise ValueError("v, f, m must be >= 1")
        if not 0 <= self.t < max(self.f, 1):
            raise ValueError("t must lie in [0, f)")
        if self.f == 1 and self.t != 0:
            raise ValueError("t must be 0 when f = 1")
        if self.f > 1 and gcd(self.t, self.f) != 1:
            raise ValueError("t must be a unit modulo f")

    @property
    def d(self):
        return self.f * self.m


@dataclass(frozen=True)
class AbstractAlgebraModel:
    n: int
    d: int
    data: tuple

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        if math.prod(x.p ** x.v for x in self.data) != self.n:
            raise ValueError("prod p^v must equal n")
        if len({x.p for x in self.data}) != len(self.data):
            raise ValueError("one datum per prime")
        if any(x.d != self.d for x in self.data):
            raise ValueError("every datum needs f * m = d")

    @classmethod
    def build(cls, d, *data):
        data = tuple(SplittingDatum(*x) if not isinstance(x, SplittingDatum) else x for x in data)
        return cls(math.prod(x.p ** x.v for x in data), d, data)

    def enumeration_size(self):
        return math.prod((x.p ** x.f - 1) ** x.m for x in self.data)


def local_density(n, x):
    """The factor of the density formula contributed by one prime."""
    q = x.p ** x.f - 1
    return Fraction(gcd(abs(n ** x.m - x.p ** x.t), q), q ** x.m * x.p ** ((x.v - 1) * x.d))


def density_formula(model):
    """Exact density of x with x^n = sigma(x) among units, from the gcd formula."""
    out = Fraction(1)
    for x in model.data:
        out *= local_density(model.n, x)
    return out


# -- explicit small finite fields -------------------------------------------

def _poly_rem_small(a, b, p):
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] % p
        if c:
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    return a


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def find_irreducible_small(p, f):
    """First monic irreducible of degree f over F_p, by trial division."""
    if f == 1:
        return [0, 1]
    for F in _monic_polys(p, f):
        if F[0] == 0:
            continue
        if all(any(_poly_rem_small(F, g, p)) for k in range(1, f // 2 + 1)
               for g in _monic_polys(p, k)):
            return F
    raise RuntimeError("no irreducible polynomial found")


class SmallField:
    """F_{p^f} as integer codes sum c_i p^i, with vectorised arithmetic."""

    def __init__(self, p, f):
        if p ** f > MAX_FIELD:
            raise SizeGuardError(f"field of order {p}^{f} exceeds {MAX_FIELD}")
        self.p, self.f = p, f
        self.q = p ** f
        self.modulus = find_irreducible_small(p, f)
        self._weights = p ** np.arange(f, dtype=np.int64)

    def coeffs(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._weights) % self.p

    def codes(self, coeffs):
        return coeffs @ self._weights

    def mul(self, a, b):
        """Elementwise product of two code arrays."""
        p, f = self.p, self.f
        A, B = self.coeffs(a), self.coeffs(b)
        prod = np.zeros(A.shape[:-1] + (2 * f - 1,), dtype=np.int64)
        for i in range(f):
            prod[..., i:i + f] += A[..., i:i + 1] * B
        prod %= p
        F = self.modulus
        for k in range(2 * f - 2, f - 1, -1):
            top = prod[..., k].copy()
            for j in range(f):
                prod[..., k - f + j] -= top * F[j]
            prod[..., k] = 0
        return self.codes(prod[..., :f] % p)

    def pow(self, a, e):
        """Elementwise a^e by square-and-multiply."""
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        for bit in bin(e)[2:]:
            result = self.mul(result, result)
            if bit == "1":
                result = self.mul(result, a)
        return result

    def units(self):
        return np.arange(1, self.q, dtype=np.int64)


def count_local_solutions(n, x):
    """Tuples in (F_{p^f}^*)^m with x^n = sigma(x), found by exhaustive search."""
    field = SmallField(x.p, x.f)
    units = field.units()
    pow_n = field.pow(units, n)            # index u - 1 -> u^n
    pow_twist = field.pow(units, x.p ** x.t)
    if x.m == 1:
        return int(np.count_nonzero(pow_n == pow_twist))
    # tuple (x_0, ..., x_{m-1}); need x_i^n = x_{i+1}, x_{m-1}^n = x_0^(p^t)
    rest = np.array(list(itertools.product(units, repeat=x.m - 1)), dtype=np.int64)
    count = 0
    for x0 in units:
        chain = np.concatenate([np.full((len(rest), 1), x0), rest], axis=1)
        ok = np.ones(len(rest), dtype=bool)
        for i in range(x.m - 1):
            ok &= pow_n[chain[:, i] - 1] == chain[:, i + 1]
        ok &= pow_n[chain[:, -1] - 1] == pow_twist[x0 - 1]
        count += int(np.count_nonzero(ok))
    return count


def brute_force_density(model, max_size=MAX_ENUMERATION):
    """Density of bad witnesses by exhaustive counting in each (F_{p^f}^*)^m.

    The 1-units (order p^((v-1)d)) hold only the trivial solution, which is
    accounted for without enumeration.
    """
    size = model.enumeration_size()
    if size > max_size:
        raise SizeGuardError(f"enumeration of {size} tuples exceeds {max_size}")
    out = Fraction(1)
    for x in model.data:
        solutions = count_local_solutions(model.n, x)
        out *= Fraction(solutions, (x.p ** x.f - 1) ** x.m * x.p ** ((x.v - 1) * x.d))
    return out


# -- bounds ----------------------------------------------------------------

def valuation_bound_holds(model, A, B):
    """The density bound p^(-(vd/2)(1 - 2/A - 4/B)) for each qualifying p.

    Returns True when no prime satisfies v log p >= A log n / d.
    """
    mu = density_formula(model)
    C = 1.0 - 2.0 / A - 4.0 / B
    ok = True
    for x in model.data:
        if x.v * math.log(x.p) >= A * math.log(model.n) / model.d:
            ok &= float(mu) <= x.p ** (-(x.v * model.d / 2.0) * C) * (1 + 1e-12)
    return ok


def split_bound_holds(model):
    """A split prime (m >= 2) caps the density at 1 / ((p^f - 1)^(m-1) p^((v-1)d))."""
    mu = density_formula(model)
    return all(
        mu <= Fraction(1, (x.p ** x.f - 1) ** (x.m - 1) * x.p ** ((x.v - 1) * x.d))
        for x in model.data if x.m >= 2
    )


def inert_bound_holds(model):
    """For an inert prime (m = 1): gcd(n - p^t, p^d - 1) <= n p^(d/2)."""
    n = model.n
    return all(
        gcd(abs(n - x.p ** x.t), x.p ** x.d - 1) ** 2 <= n * n * x.p ** x.d
        for x in model.data if x.m == 1
    )


# -- model family ----------------------------------------------------------

def _local_shapes(d):
    for f in (1, 2, 3):
        if d % f or d // f > 3:
            continue
        ts = [0] if f == 1 else [t for t in range(1, f) if gcd(t, f) == 1]
        for t in ts:
            yield f, d // f, t


def model_family(primes=(3, 5, 7, 11, 13), max_local=2 * 10 ** 6, valuations=(1, 2)):
    """Models over pairs of distinct small primes, all local shapes with f, m <= 3."""
    for d in (1, 2, 3, 4, 6, 9):
        shapes = list(_local_shapes(d))
        for p1, p2 in itertools.combinations(primes, 2):
            for s1, s2 in itertools.product(shapes, repeat=2):
                if (p1 ** s1[0] - 1) ** s1[1] > max_local or (p2 ** s2[0] - 1) ** s2[1] > max_local:
                    continue
                for v1 in valuations:
                    data = (SplittingDatum(p1, v1, *s1), SplittingDatum(p2, 1, *s2))
                    model = AbstractAlgebraModel.build(d, *data)
                    if model.enumeration_size() <= MAX_ENUMERATION:
                        yield model


def inert_model(n, d=2):
    """Every prime of squarefree n inert with twist 1."""
    return AbstractAlgebraModel.build(d, *[(p, 1, d, 1, 1 if d > 1 else 0) for p in prime_factors(n)])


# -- Miller-Rabin ----------------------------------------------------------

def _vec_pow(x, e, n):
    result = np.ones_like(x)
    base = x % n
    while e:
        if e & 1:
            result = result * base % n
        base = base * base % n
        e >>= 1
    return result


def mr_bad_witnesses(n):
    """Units x mod n on which the Miller-Rabin map says prime (numpy, n <= 10^5)."""
    if n > 10 ** 5 or n < 3 or n % 2 == 0:
        raise SizeGuardError("mr oracle needs odd 3 <= n <= 10^5")
    x = np.arange(1, n, dtype=np.int64)
    units = x[np.gcd(x, n) == 1]
    m, k = two_adic_decompose(n - 1)
    y = _vec_pow(units, m, n)
    good = y == 1
    for _ in range(k):
        good |= y == n - 1
        y = y * y % n
    return units, units[good]


def mr_density_oracle(n):
    """Exact fraction of bad Miller-Rabin witnesses among the units mod n."""
    units, bad = mr_bad_witnesses(n)
    return Fraction(len(bad), len(units))


def product_density(n, tests):
    """Bad fraction of the vee-product of tests, by enumerating witness tuples.

    Each test maps a unit x to True when x is a bad witness.
    """
    units = [x for x in range(1, n) if gcd(x, n) == 1]
    flags = [[t(x) for x in units] for t in tests]
    bad = sum(all(f[i] for f, i in zip(flags, idx))
              for idx in itertools.product(range(len(units)), repeat=len(tests)))
    return Fraction(bad, len(units) ** len(tests))
