import random

import pytest
import sympy

from galois_prp.cyclotomic import (
    ConstructionLog,
    build_cyclotomic,
    build_frobenius_matrix,
    choose_degrees_theoretical,
    cyclotomic_Q,
    find_irreducible,
    find_regular_element,
    fixed_submodule_check,
    verify_certificate,
)
from galois_prp.evidence import CompositeDetected
from galois_prp.polyring import CycAlgebra


def is_irreducible(F, n):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(F)), x, modulus=n).is_irreducible


def test_choose_degrees_examples():
    for k, expected in [(1, (1, 2, 2)), (5, (2, 6, 6)), (16, (4, 30, 30))]:
        pair = choose_degrees_theoretical(k)
        assert (pair.d_cyc, pair.d_kum, pair.Q) == expected


def test_choose_degrees_scan():
    Q_of = {}
    for k in range(1, 10**4 + 1):
        pair = choose_degrees_theoretical(k)
        assert pair.d >= k and pair.Q > k and pair.Q % pair.d_kum == 0 and pair.d_kum > k
        for smaller in range(1, pair.d_cyc):
            if smaller not in Q_of:
                Q_of[smaller] = cyclotomic_Q(smaller)
            assert Q_of[smaller] <= k
        for q in sympy.primefactors(pair.Q):
            assert pair.d_cyc % (q - 1) == 0


def test_jacobi_strategy():
    n = 10007
    log = ConstructionLog()
    F, cert = find_irreducible(n, 2, random.Random(1), log)
    assert log.strategy == "jacobi"
    o = cert["o"]
    assert sympy.jacobi_symbol(o, n) == -1
    alg = CycAlgebra(n, F, cert)
    assert alg.x() * alg.x() == alg.scalar(o)


def test_binomial_strategy_n13():
    F, cert = find_irreducible(13, 3, random.Random(2))
    assert cert["strategy"] == "binomial"
    o = cert["o"]
    assert F == [(-o) % 13, 0, 0, 1]
    assert pow(o, 4, 13) != 1
    assert is_irreducible(F, 13)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_ddf_strategy(d):
    n = 10007  # 10006 = 2 * 5003, so d in 3..5 goes through the generic route
    for seed in range(3):
        F, cert = find_irreducible(n, d, random.Random(seed))
        assert cert["strategy"] == "ddf"
        assert is_irreducible(F, n)
        assert verify_certificate(CycAlgebra(n, F, cert))


def test_frobenius_matrix_quadratic():
    n = 10007
    F, cert = find_irreducible(n, 2, random.Random(4))
    alg = CycAlgebra(n, F, cert)
    M = build_frobenius_matrix(alg)
    assert M == [[1, 0], [0, n - 1]]  # sigma(x) = -x
    assert alg.x().sigma().sigma() == alg.x()


def test_fixed_submodule_rejects_identity():
    alg = CycAlgebra(10007, [5, 0, 1], {"strategy": "jacobi", "o": 5})
    alg.M_sigma = [[1, 0], [0, 1]]
    with pytest.raises(CompositeDetected) as info:
        fixed_submodule_check(alg)
    assert info.value.evidence.kind == "FailedIdentity"


def test_fixed_submodule_zero_divisor_91():
    alg = CycAlgebra(91, [3, 0, 1])
    alg.M_sigma = [[1, 0], [0, 8]]  # M - Id = diag(0, 7)
    with pytest.raises(CompositeDetected) as info:
        fixed_submodule_check(alg)
    ev = info.value.evidence
    assert ev.kind == "ZeroDivisor" and ev.data["factor"] in (7, 13)


def test_regular_element_quadratic():
    n = 10007
    alg = build_cyclotomic(n, 2, random.Random(3))
    u = alg.x()
    assert (u.sigma() - u) == alg.element([0, n - 2])
    assert find_regular_element(alg, random.Random(1)) is not None


def test_trivial_degree():
    alg = build_cyclotomic(10007, 1, random.Random(0))
    assert alg.d == 1 and alg.M_sigma == [[1]]


@pytest.mark.parametrize("n", [10007, 65537, 1000003])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_steps_5_to_8_on_primes(n, d):
    for seed in range(20):
        log = ConstructionLog()
        alg = build_cyclotomic(n, d, random.Random(seed), log)
        assert is_irreducible(list(alg.F), n)
        assert verify_certificate(alg)
        x = alg.x()
        assert x.sigma() == x ** n
        y = x
        for _ in range(d):
            y = y.sigma()
        assert y == x
