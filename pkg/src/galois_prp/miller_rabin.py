"""Miller-Rabin map, its r-fold product and the vee composition law."""
import enum
from dataclasses import dataclass
from functools import reduce
from math import gcd

from .arith import two_adic_decompose
from .evidence import CompositeDetected, CompositeEvidence


class Verdict(enum.Enum):
    COMPOSITE = "composite"
    PRIME = "prime"

    def __or__(self, other):
        return vee(self, other)


def vee(a, b):
    """Composite absorbs; Prime only when both are Prime."""
    if a is Verdict.COMPOSITE or b is Verdict.COMPOSITE:
        return Verdict.COMPOSITE
    return Verdict.PRIME


def vee_all(verdicts):
    return reduce(vee, verdicts, Verdict.PRIME)


@dataclass(frozen=True)
class MrEvidence:
    witness: int
    sequence: tuple  # x^m, x^(2m), ..., x^(2^(k-1) m)
    factor: int = 0  # gcd(witness, n) when it is nontrivial


def mr_map(n, x):
    """Evaluate the Miller-Rabin map of odd n >= 3 at witness x.

    Returns (Verdict, MrEvidence).  A witness sharing a factor with n is
    reported Composite with the gcd in ``evidence.factor``.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("mr_map needs odd n >= 3")
    x %= n
    g = gcd(x, n)
    if g != 1:
        # x = 0 gives g = n, which is not a proper factor
        return Verdict.COMPOSITE, MrEvidence(x, (), g if g < n else 0)
    m, k = two_adic_decompose(n - 1)
    seq = [pow(x, m, n)]
    for _ in range(k - 1):
        seq.append(seq[-1] * seq[-1] % n)
    ok = seq[0] == 1 or (n - 1) in seq
    return (Verdict.PRIME if ok else Verdict.COMPOSITE), MrEvidence(x, tuple(seq))


def draw_witness(n, rng):
    return rng.randrange(1, n)


def mr_test(n, r, rng):
    """Run r independent Miller-Rabin rounds; stop at the first Composite.

    Returns (Verdict, evidence list).  On Composite the list holds only the
    failing round.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("mr_test needs odd n >= 3")
    evidence = []
    for _ in range(r):
        verdict, ev = mr_map(n, draw_witness(n, rng))
        if verdict is Verdict.COMPOSITE:
            return verdict, [ev]
        evidence.append(ev)
    return Verdict.PRIME, evidence


def evidence_from_mr(ev, step):
    if ev.factor:
        return CompositeEvidence("ZeroDivisor", {"factor": ev.factor, "note": "witness gcd"}, step)
    return CompositeEvidence(
        "MrWitness", {"witness": ev.witness, "sequence": list(ev.sequence)}, step
    )


def interleave_mr(n, rng, log=None, step=""):
    """One Miller-Rabin round used to bound retry loops; raises on Composite."""
    verdict, (ev,) = mr_test(n, 1, rng)
    if log is not None:
        log.mr_interleaves += 1
    if verdict is Verdict.COMPOSITE:
        raise CompositeDetected(evidence_from_mr(ev, step))
