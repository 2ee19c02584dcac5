"""Construction of the cyclotomic layer R_cyc = (Z/nZ)[X]/F(X) and sigma_cyc."""
import math
import time
from dataclasses import dataclass, field
from math import gcd

from .arith import jacobi, prime_factors
from .evidence import CompositeDetected, CompositeEvidence
from .miller_rabin import interleave_mr
from .polyring import CycAlgebra, NotInvertible, gauss_kernel, poly_gcdex, poly_sub


@dataclass(frozen=True)
class DegreePair:
    d_cyc: int
    d_kum: int
    Q: int

    @property
    def d(self):
        return self.d_cyc * self.d_kum


@dataclass
class ConstructionLog:
    """Diagnostics collected while building the algebras."""

    strategy: str = ""
    retries: dict = field(default_factory=dict)
    mr_interleaves: int = 0
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def bump(self, key, by=1):
        self.retries[key] = self.retries.get(key, 0) + by

    def timed(self, key):
        return _Timer(self, key)


class _Timer:
    def __init__(self, log, key):
        self.log, self.key = log, key

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        ms = (time.perf_counter() - self.t0) * 1000.0
        self.log.timings[self.key] = self.log.timings.get(self.key, 0.0) + ms
        return False


def _is_small_prime(q):
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def cyclotomic_Q(d_cyc):
    """Product of the primes q with (q - 1) | d_cyc."""
    Q = 1
    for e in range(1, d_cyc + 1):
        if d_cyc % e == 0 and _is_small_prime(e + 1):
            Q *= e + 1
    return Q


def choose_degrees_theoretical(k):
    """Smallest d_cyc whose Q exceeds k, and the smallest divisor of Q above k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d_cyc = 1
    while cyclotomic_Q(d_cyc) <= k:
        d_cyc += 1
    Q = cyclotomic_Q(d_cyc)
    d_kum = min(e for e in range(k + 1, Q + 1) if Q % e == 0)
    return DegreePair(d_cyc, d_kum, Q)


def batch_size(density):
    """Candidates to try so that success probability reaches 1/2."""
    if density >= 1:
        return 1
    return max(1, math.ceil(math.log(0.5) / math.log(1.0 - density)))


def _phi(m):
    out = m
    for q in prime_factors(m):
        out -= out // q
    return out


def _factor_evidence(g, step, note):
    return CompositeDetected(CompositeEvidence("ZeroDivisor", {"factor": g, "note": note}, step))


def failed_identity(alg, check, step, **operands):
    data = {"check": check, "F": list(alg.F), "certificate": dict(alg.certificate or {})}
    data.update(operands)
    return CompositeDetected(CompositeEvidence("FailedIdentity", data, step))


def not_invertible_evidence(alg, element, exc, step):
    """Turn a failed R_cyc inversion into compositeness evidence."""
    if exc.factor:
        return _factor_evidence(exc.factor, step, exc.note)
    if exc.gcd:
        return failed_identity(
            alg, "non_unit", step, element=list(element.c), gcd=list(exc.gcd)
        )
    raise RuntimeError(f"inversion failed without evidence: {exc}")


# -- irreducible polynomial -----------------------------------------------

def _binomial_order_ok(n, d, o):
    """True when o^((n-1)/d) has exact order d; raises on a zero divisor."""
    w = pow(o, (n - 1) // d, n)
    if pow(w, d, n) != 1:
        return False
    for q in prime_factors(d):
        g = gcd(pow(w, d // q, n) - 1, n)
        if g == n:
            return False
        if g != 1:
            raise _factor_evidence(g, "step5", "order test")
    return True


def _ddf_trivial(n, F):
    """True when gcd(X^(n^i) - X, F) = 1 for i = 1 .. floor(deg F / 2)."""
    alg = CycAlgebra(n, F)
    x = alg.x()
    h = x
    for _ in range(1, alg.d // 2 + 1):
        h = h ** n
        g, _ = poly_gcdex(poly_sub(list(h.c), [0, 1], n), list(F), n)
        if len(g) != 1:
            return False
    return True


def find_irreducible(n, d_cyc, rng, log=None):
    """A monic degree-d_cyc polynomial that is irreducible whenever n is prime.

    Returns (F, certificate).  Raises CompositeDetected when a zero divisor
    turns up or an interleaved Miller-Rabin round fails.
    """
    if d_cyc < 2:
        raise ValueError("find_irreducible needs d_cyc >= 2")
    log = log if log is not None else ConstructionLog()
    if d_cyc == 2:
        strategy, batch = "jacobi", 1
    elif (n - 1) % d_cyc == 0:
        strategy, batch = "binomial", batch_size(_phi(d_cyc) / d_cyc)
    else:
        strategy, batch = "ddf", batch_size(1.0 / (2 * d_cyc))
    log.strategy = strategy
    while True:
        for _ in range(batch):
            if strategy == "jacobi":
                o = rng.randrange(1, n)
                j = jacobi(o, n)
                if j == 0:
                    raise _factor_evidence(gcd(o, n), "step5", "jacobi symbol 0")
                if j == -1:
                    return [(-o) % n, 0, 1], {"strategy": "jacobi", "o": o}
            elif strategy == "binomial":
                o = rng.randrange(1, n)
                g = gcd(o, n)
                if g != 1:
                    raise _factor_evidence(g, "step5", "binomial constant")
                if _binomial_order_ok(n, d_cyc, o):
                    return [(-o) % n] + [0] * (d_cyc - 1) + [1], {"strategy": "binomial", "o": o}
            else:
                F = [rng.randrange(n) for _ in range(d_cyc)] + [1]
                try:
                    if _ddf_trivial(n, F):
                        return F, {"strategy": "ddf"}
                except NotInvertible as exc:
                    if exc.factor:
                        raise _factor_evidence(exc.factor, "step5", exc.note) from None
                    raise
            log.bump("step5")
        interleave_mr(n, rng, log, "step5")


def verify_certificate(alg):
    """Re-check the irreducibility certificate of alg.F (meaningful for prime n)."""
    cert = alg.certificate or {}
    n, F, d = alg.n, list(alg.F), alg.d
    strategy = cert.get("strategy")
    if strategy == "trivial":
        return d == 1
    if strategy == "jacobi":
        o = cert["o"] % n
        return d == 2 and F == [(-o) % n, 0, 1] and jacobi(o, n) == -1
    if strategy == "binomial":
        o = cert["o"] % n
        if F != [(-o) % n] + [0] * (d - 1) + [1] or (n - 1) % d:
            return False
        w = pow(o, (n - 1) // d, n)
        return pow(w, d, n) == 1 and all(pow(w, d // q, n) != 1 for q in prime_factors(d))
    if strategy == "ddf":
        return _ddf_trivial(n, F)
    return False


# -- sigma_cyc and its checks ---------------------------------------------

def frobenius_columns(alg):
    """Coordinates of x^(i n) for i = 0 .. 2d - 2."""
    xn = alg.x() ** alg.n
    powers = [alg.one()]
    for _ in range(1, 2 * alg.d - 1):
        powers.append(powers[-1] * xn)
    return powers


def frobenius_defects(alg):
    """Names of the sigma_cyc identities that fail once M_sigma is installed."""
    d = alg.d
    powers = frobenius_columns(alg)
    alg.M_sigma = [list(p.c) for p in powers[:d]]
    bad = []
    for i in range(d, 2 * d - 1):
        xi = alg.element([0] * i + [1])
        if xi.sigma() != powers[i]:
            bad.append(("multiplicative", i))
            break
    x = alg.x()
    y = x
    for _ in range(d):
        y = y.sigma()
    if y != x:
        bad.append(("order", d))
    return bad


def build_frobenius_matrix(alg):
    """Install M_sigma on alg and verify that sigma_cyc is an automorphism of order d."""
    if alg.d == 1:
        alg.M_sigma = [[1]]
        return alg.M_sigma
    for check, i in frobenius_defects(alg):
        raise failed_identity(alg, "frobenius_" + check, "step6", index=i)
    return alg.M_sigma


def fixed_submodule_check(alg):
    """The kernel of M_sigma - Id must be the constants."""
    d, n = alg.d, alg.n
    rows = [[(alg.M_sigma[j][i] - (i == j)) % n for j in range(d)] for i in range(d)]
    try:
        basis = gauss_kernel(rows, n)
    except NotInvertible as exc:
        raise _factor_evidence(exc.factor, "step7", exc.note) from None
    if basis != [[1] + [0] * (d - 1)]:
        raise failed_identity(alg, "fixed_submodule", "step7", kernel_dim=len(basis))


def find_regular_element(alg, rng, log=None):
    """A u with sigma_cyc^i(u) - u a unit for 1 <= i < d."""
    log = log if log is not None else ConstructionLog()
    if alg.d == 1:
        return alg.one()
    while True:
        u = alg.random(rng)
        v = u
        good = True
        for _ in range(1, alg.d):
            v = v.sigma()
            diff = v - u
            if diff.is_zero():
                good = False
                break
            try:
                diff.try_invert()
            except NotInvertible as exc:
                raise not_invertible_evidence(alg, diff, exc, "step8") from None
        if good:
            return u
        log.bump("step8")
        interleave_mr(alg.n, rng, log, "step8")


def build_cyclotomic(n, d_cyc, rng, log=None):
    """Return a verified cyclotomic algebra (Z/nZ itself when d_cyc = 1)."""
    log = log if log is not None else ConstructionLog()
    if d_cyc == 1:
        log.strategy = "trivial"
        return CycAlgebra.trivial(n)
    with log.timed("step5"):
        F, cert = find_irreducible(n, d_cyc, rng, log)
    alg = CycAlgebra(n, F, cert)
    with log.timed("step6"):
        build_frobenius_matrix(alg)
    with log.timed("step7"):
        fixed_submodule_check(alg)
    with log.timed("step8"):
        find_regular_element(alg, rng, log)
    return alg
