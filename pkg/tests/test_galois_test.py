import math
import random

import pytest
import sympy

from corpus import MERSENNE_521, chernick
from galois_prp.evidence import CompositeEvidence
from galois_prp.galois_test import (
    TestConfig,
    galois_test,
    replay_evidence,
    repetitions,
    theoretical_test,
)
from galois_prp.miller_rabin import Verdict


def test_mersenne_prime():
    for seed in range(3):
        res = galois_test(MERSENNE_521, 64, seed=seed)
        assert res.is_probable_prime
        assert res.security >= 64


def test_fermat_number_small_factor():
    res = galois_test(4294967297, 64, seed=0)
    assert res.is_composite
    assert res.evidence.kind == "SmallFactor" and res.evidence.data["factor"] == 641
    assert replay_evidence(4294967297, res.evidence)


def test_semiprimes_128():
    rng = random.Random(11)
    for seed in range(5):
        n = sympy.randprime(2**127, 2**128) * sympy.randprime(2**127, 2**128)
        res = galois_test(n, 64, seed=seed)
        assert res.is_composite and replay_evidence(n, res.evidence)


def test_perfect_power_step():
    n = 1000003 ** 3
    res = galois_test(n, 64, seed=0)
    assert res.evidence.kind == "PerfectPower"
    assert res.evidence.data == {"base": 1000003, "exponent": 3}


def test_reject_bad_input():
    for n in (0, 1, 2, 10):
        with pytest.raises(ValueError):
            galois_test(n, 64)
    with pytest.raises(ValueError):
        galois_test(101, 0)


def test_small_prime_certified():
    res = galois_test(10007, 64, seed=0)
    assert res.is_probable_prime and res.certified


def test_determinism():
    n = 2**127 - 1
    cfg = TestConfig(d_cyc=2, d_kum=2)
    a = galois_test(n, 64, cfg, seed=99)
    b = galois_test(n, 64, cfg, seed=99)
    assert a.to_json(seed=99) == b.to_json(seed=99)
    c = chernick(1)[0]
    cfg = TestConfig(d_cyc=1, d_kum=2, r=0)
    assert galois_test(c, 64, cfg, seed=5).to_json() == galois_test(c, 64, cfg, seed=5).to_json()


def test_fallback_security():
    res = galois_test(MERSENNE_521, 64, seed=1)
    p = res.params
    assert p.fallback and p.r == 32
    assert 2 * p.r >= 64


def test_galois_branch_security():
    n = 2**1279 - 1
    res = galois_test(n, 1024, seed=0)
    p = res.params
    assert res.is_probable_prime
    if not p.fallback:
        assert p.r * (p.d - p.A) / p.A >= 1024


def test_repetitions_split():
    n = (1 << 30) + 3
    assert repetitions(n, 100) == (1, 100)
    reps, each = repetitions(n, 1500)
    assert reps == math.ceil(1500 / (23 * math.log2(n)))
    assert reps * each >= 1500 and each <= 23 * math.log2(n)


def test_forced_degree_must_divide():
    with pytest.raises(ValueError):
        galois_test(2**127 - 1, 64, TestConfig(d_cyc=1, d_kum=4))


@pytest.mark.parametrize("d_cyc,d_kum", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2), (2, 3)])
def test_forced_shapes_on_primes(d_cyc, d_kum):
    rng = random.Random(d_cyc * 10 + d_kum)
    done = 0
    while done < 5:
        n = sympy.randprime(2**60, 2**64)
        if pow(n, d_cyc, d_kum) != 1 % d_kum:
            continue
        res = galois_test(n, 32, TestConfig(d_cyc=d_cyc, d_kum=d_kum), seed=done)
        assert res.is_probable_prime
        done += 1


def test_dimension_one_is_fermat():
    # with d = 1 the check is x^n = x, which every unit of a Carmichael number passes
    for n in chernick(3):
        res = galois_test(n, 32, TestConfig(d_cyc=1, d_kum=1, r=0), seed=0)
        assert res.is_probable_prime
        res = galois_test(n, 32, TestConfig(d_cyc=1, d_kum=1), seed=0)
        assert res.is_composite and res.evidence.kind in ("MrWitness", "ZeroDivisor")


@pytest.mark.parametrize("d_cyc,d_kum", [(1, 2), (2, 1), (2, 2), (3, 1), (2, 3)])
def test_forced_shapes_on_carmichael(d_cyc, d_kum):
    for n in chernick(8):
        if pow(n, d_cyc, d_kum) != 1 % d_kum:
            continue
        for seed in range(3):
            res = galois_test(n, 32, TestConfig(d_cyc=d_cyc, d_kum=d_kum, r=0), seed=seed)
            assert res.is_composite and replay_evidence(n, res.evidence)


def test_theoretical_variant():
    n = 2**61 - 1
    res = theoretical_test(n, 16, seed=0)
    assert res.is_probable_prime
    assert (res.params.d_cyc, res.params.d_kum) == (4, 30)
    assert res.params.r == math.ceil(16 / (0.18 * 120))
    res = theoretical_test(n, 1, seed=0)
    assert (res.params.d_cyc, res.params.d_kum) == (4, 30)
    res = theoretical_test(997 * 1000003, 8, seed=0)
    assert res.is_composite and res.evidence.kind == "SmallFactor"
    with pytest.raises(ValueError):
        theoretical_test(n, 100)


def test_theoretical_on_composites():
    for n in chernick(5):
        res = theoretical_test(n, 20, seed=1)
        assert res.is_composite and replay_evidence(n, res.evidence)


def test_replay_examples():
    assert replay_evidence(4294967297, CompositeEvidence("SmallFactor", {"factor": 641}))
    assert not replay_evidence(13, CompositeEvidence("SmallFactor", {"factor": 7}))
    assert replay_evidence(561, CompositeEvidence("MrWitness", {"witness": 2, "sequence": [263, 166, 67, 1]}))
    assert not replay_evidence(10007, CompositeEvidence("MrWitness", {"witness": 2, "sequence": []}))
    assert not replay_evidence(12, CompositeEvidence("PerfectPower", {"base": 2, "exponent": 3}))
    assert replay_evidence(8, CompositeEvidence("PerfectPower", {"base": 2, "exponent": 3}))


def test_replay_rejects_forged_galois_witness():
    n = 2**61 - 1
    ev = CompositeEvidence("GaloisWitness", {
        "F": [n - 3, 0, 1], "certificate": {"strategy": "jacobi", "o": 3},
        "d_kum": 2, "a": [5, 1], "z": [1, 2, 3, 4],
    }, "step11")
    assert not replay_evidence(n, ev)


def test_replay_rejects_tampered_identity():
    n = chernick(1)[0]
    for seed in range(30):
        res = galois_test(n, 32, TestConfig(d_cyc=2, d_kum=1, r=0), seed=seed)
        if res.evidence.kind == "FailedIdentity":
            break
    assert replay_evidence(n, res.evidence)
    p = 2**61 - 1
    data = dict(res.evidence.data)
    assert not replay_evidence(p, CompositeEvidence("FailedIdentity", data, "x"))
