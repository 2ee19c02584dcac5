"""The Kummer layer S = R_cyc[Y]/(Y^d_kum - a) and its automorphism sigma.

An SElement stores d_kum * d_cyc ints: row j (length d_cyc) holds the
R_cyc coefficient of y^j.
"""
from .arith import prime_factors
from .cyclotomic import (
    ConstructionLog,
    _phi,
    batch_size,
    failed_identity,
    not_invertible_evidence,
)
from .miller_rabin import interleave_mr
from .polyring import NotInvertible, pack, slot_bytes, unpack


class NonUnitInS(ArithmeticError):
    """The y-polynomial shares a nontrivial factor with Y^d_kum - a.

    This can happen for prime n (S is a product of fields), so it is not
    evidence of compositeness.
    """


class KummerAlgebra:
    def __init__(self, base, d_kum, a, zeta):
        if base.M_sigma is None:
            raise ValueError("base algebra has no verified M_sigma")
        self.base = base
        self.n = base.n
        self.d_cyc = base.d
        self.d_kum = d_kum
        self.a = a
        self.zeta = zeta
        self._a_coeffs = list(a.c)
        self._width = slot_bytes(self.n, self.d_cyc * self.d_kum)
        self._sigma_table = self._build_sigma_table()

    @property
    def d(self):
        return self.d_cyc * self.d_kum

    def __repr__(self):
        return f"KummerAlgebra(n={self.n}, d_cyc={self.d_cyc}, d_kum={self.d_kum})"

    def _build_sigma_table(self):
        # y^(i n) = a^alpha_i * y^beta_i with i n = alpha_i d_kum + beta_i
        n, dk = self.n, self.d_kum
        q = n // dk
        step = {q: self.a ** q, q + 1: self.a ** (q + 1)}
        table = []
        power = self.base.one()
        prev_alpha = 0
        for i in range(dk):
            alpha, beta = divmod(i * n, dk)
            if i:
                power = power * step[alpha - prev_alpha]
            prev_alpha = alpha
            table.append((beta, list(power.c)))
        return table

    # constructors
    def element(self, rows):
        """Build from a list of d_kum rows (CycElements or coefficient lists)."""
        dc, n = self.d_cyc, self.n
        flat = []
        for j in range(self.d_kum):
            row = rows[j] if j < len(rows) else [0] * dc
            if hasattr(row, "c"):
                row = row.c
            row = list(row) + [0] * (dc - len(row))
            flat.extend(v % n for v in row[:dc])
        return SElement(self, tuple(flat))

    def from_base(self, r):
        return self.element([r])

    def one(self):
        return self.from_base(self.base.one())

    def zero(self):
        return SElement(self, (0,) * self.d)

    def y(self):
        if self.d_kum == 1:
            return self.from_base(self.a)
        return self.element([[0], [1]])

    def basis_element(self, i, j):
        """x^i y^j."""
        rows = [[0] * self.d_cyc for _ in range(self.d_kum)]
        xi = self.base.x() ** i
        if self.d_kum == 1:
            xi = xi * self.a ** j
            j = 0
        rows[j] = list(xi.c)
        return self.element(rows)

    def random(self, rng):
        return SElement(self, tuple(rng.randrange(self.n) for _ in range(self.d)))

    # arithmetic on flat tuples
    def _rows(self, flat):
        dc = self.d_cyc
        return [list(flat[j * dc:(j + 1) * dc]) for j in range(self.d_kum)]

    def mul_flat(self, u, v):
        n, dc, dk, base = self.n, self.d_cyc, self.d_kum, self.base
        if self.d == 1:
            return (u[0] * v[0] % n,)
        stride = 2 * dc - 1
        pad = [0] * (dc - 1)
        width = self._width

        def spread(flat):
            out = []
            for j in range(dk):
                out.extend(flat[j * dc:(j + 1) * dc])
                out.extend(pad)
            return out

        prod = pack(spread(u), width) * pack(spread(v), width)
        count = (2 * dk - 1) * stride
        raw = unpack(prod, count, width)
        rows = [base.reduce([c % n for c in raw[J * stride:(J + 1) * stride]])
                for J in range(2 * dk - 1)]
        low, high = rows[:dk], rows[dk:]
        if high:
            if dc == 1:
                a0 = self._a_coeffs[0]
                for j, h in enumerate(high):
                    low[j][0] = (low[j][0] + a0 * h[0]) % n
            else:
                wrapped = self._mul_rows_by_a(high)
                for j, w in enumerate(wrapped):
                    low[j] = [(x + y) % n for x, y in zip(low[j], w)]
        return tuple(c for row in low for c in row)

    def _mul_rows_by_a(self, rows):
        n, dc, base = self.n, self.d_cyc, self.base
        stride = 2 * dc - 1
        width = slot_bytes(n, dc)
        spread = []
        for row in rows:
            spread.extend(row)
            spread.extend([0] * (dc - 1))
        prod = pack(spread, width) * pack(self._a_coeffs, width)
        raw = unpack(prod, len(rows) * stride, width)
        return [base.reduce([c % n for c in raw[j * stride:(j + 1) * stride]])
                for j in range(len(rows))]

    def sigma_flat(self, z):
        base, dc = self.base, self.d_cyc
        out = [None] * self.d_kum
        for i, (beta, coeff) in enumerate(self._sigma_table):
            row = z[i * dc:(i + 1) * dc]
            if any(row):
                out[beta] = base.mul_coeffs(base.sigma_coeffs(row), coeff)
            else:
                out[beta] = [0] * dc
        return tuple(c for row in out for c in row)


class SElement:
    __slots__ = ("alg", "c")

    def __init__(self, alg, flat):
        self.alg = alg
        self.c = tuple(flat)

    def __repr__(self):
        return f"SElement({[list(r) for r in self.alg._rows(self.c)]})"

    @property
    def coords(self):
        base = self.alg.base
        return [base.element(r) for r in self.alg._rows(self.c)]

    def __eq__(self, other):
        return isinstance(other, SElement) and self.c == other.c and self.alg.n == other.alg.n

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        n = self.alg.n
        return SElement(self.alg, tuple((x + y) % n for x, y in zip(self.c, other.c)))

    def __sub__(self, other):
        n = self.alg.n
        return SElement(self.alg, tuple((x - y) % n for x, y in zip(self.c, other.c)))

    def __neg__(self):
        n = self.alg.n
        return SElement(self.alg, tuple(-x % n for x in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            n = self.alg.n
            return SElement(self.alg, tuple(x * other % n for x in self.c))
        if not isinstance(other, SElement):  # CycElement scalar
            other = self.alg.from_base(other)
        return SElement(self.alg, self.alg.mul_flat(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, e):
        return s_pow(self, e)

    def is_zero(self):
        return not any(self.c)

    def sigma(self):
        return apply_sigma(self)


def s_mul(u, v):
    return u * v


def s_pow(u, e):
    """u**e by left-to-right square-and-multiply over s_mul."""
    if e < 0:
        raise ValueError("negative exponent")
    alg = u.alg
    result = alg.one().c
    base = u.c
    for bit in bin(e)[2:]:
        result = alg.mul_flat(result, result)
        if bit == "1":
            result = alg.mul_flat(result, base)
    return SElement(alg, result)


def apply_sigma(z):
    """sigma(z) = sum_i sigma_cyc(z_i) a^alpha_i y^beta_i."""
    return SElement(z.alg, z.alg.sigma_flat(z.c))


# -- polynomials in Y over R_cyc (for inversion) ----------------------------

def _ytrim(p):
    p = list(p)
    while p and not any(p[-1]):
        p.pop()
    return p


def _ysub(base, p, q):
    size = max(len(p), len(q))
    zero = [0] * base.d
    n = base.n
    out = []
    for i in range(size):
        x = p[i] if i < len(p) else zero
        y = q[i] if i < len(q) else zero
        out.append([(s - t) % n for s, t in zip(x, y)])
    return _ytrim(out)


def _ymul(base, p, q):
    if not p or not q:
        return []
    out = [[0] * base.d for _ in range(len(p) + len(q) - 1)]
    n = base.n
    for i, x in enumerate(p):
        if not any(x):
            continue
        for j, y in enumerate(q):
            if any(y):
                prod = base.mul_coeffs(x, y)
                out[i + j] = [(s + t) % n for s, t in zip(out[i + j], prod)]
    return _ytrim(out)


def _invert_or_evidence(base, coeffs):
    elem = base.element(coeffs)
    try:
        return elem.try_invert()
    except NotInvertible as exc:
        raise not_invertible_evidence(base, elem, exc, "step10") from None


def _ydivmod(base, p, q):
    """Divide by q whose leading coefficient must be a unit of R_cyc."""
    inv_c = list(_invert_or_evidence(base, q[-1]).c)
    r = [list(c) for c in _ytrim(p)]
    dq = len(q) - 1
    if len(r) <= dq:
        return [], r
    quo = [[0] * base.d for _ in range(len(r) - dq)]
    n = base.n
    for i in range(len(r) - 1, dq - 1, -1):
        if not any(r[i]):
            continue
        c = base.mul_coeffs(r[i], inv_c)
        quo[i - dq] = c
        for j in range(dq + 1):
            t = base.mul_coeffs(c, q[j])
            r[i - dq + j] = [(s - u) % n for s, u in zip(r[i - dq + j], t)]
    return _ytrim(quo), _ytrim(r[:dq])


def try_invert_s(z):
    """Inverse of z in S by extended Euclid against Y^d_kum - a over R_cyc.

    Raises CompositeDetected when an R_cyc coefficient fails to invert and
    NonUnitInS when the gcd in Y is nontrivial.
    """
    alg = z.alg
    base = alg.base
    if z.is_zero():
        raise NonUnitInS("zero is not invertible")
    modulus = [[(-c) % alg.n for c in alg.a.c]] + [[0] * base.d for _ in range(alg.d_kum - 1)]
    modulus.append([1] + [0] * (base.d - 1))
    r0, r1 = _ytrim(modulus), _ytrim(alg._rows(z.c))
    s0, s1 = [], [list(base.one().c)]
    while r1:
        q, rem = _ydivmod(base, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _ysub(base, s0, _ymul(base, q, s1))
    if len(r0) != 1:
        raise NonUnitInS(f"gcd of degree {len(r0) - 1} in y")
    inv = _invert_or_evidence(base, r0[0])
    inv_rows = [base.mul_coeffs(row, inv.c) for row in s0]
    result = alg.element(inv_rows)
    if result * z != alg.one():
        raise RuntimeError("inverse check z * z' = 1 failed")
    return result


# -- choosing a and zeta -------------------------------------------------

def find_kummer_generator(base, d_kum, rng, log=None):
    """Pick a in R_cyc with zeta = a^((n^d_cyc - 1)/d_kum) of exact order d_kum.

    Returns (a, zeta).  Raises CompositeDetected on inversion failure, a
    wrong zeta order, sigma_cyc(a) != a^n, or an interleaved MR failure.
    """
    log = log if log is not None else ConstructionLog()
    n = base.n
    N = n ** base.d - 1
    if N % d_kum:
        raise ValueError(f"d_kum={d_kum} does not divide n^{base.d} - 1")
    exponent = N // d_kum
    primes = prime_factors(d_kum) if d_kum > 1 else []
    batch = batch_size(_phi(d_kum) / d_kum) if d_kum > 1 else 1
    while True:
        for _ in range(batch):
            a = base.random(rng)
            if a.is_zero():
                continue
            try:
                a.try_invert()
            except NotInvertible as exc:
                raise not_invertible_evidence(base, a, exc, "step9") from None
            zeta = a ** exponent
            if zeta ** d_kum != base.one():
                raise failed_identity(base, "zeta_order", "step9", a=list(a.c), d_kum=d_kum)
            ok = True
            for q in primes:
                w = zeta ** (d_kum // q) - 1
                if w.is_zero():
                    ok = False
                    break
                try:
                    w.try_invert()
                except NotInvertible as exc:
                    raise not_invertible_evidence(base, w, exc, "step9") from None
            if not ok:
                log.bump("step9")
                continue
            if a.sigma() != a ** n:
                raise failed_identity(base, "sigma_of_a", "step9", a=list(a.c))
            return a, zeta
        interleave_mr(n, rng, log, "step9")


def build_kummer(base, d_kum, rng, log=None):
    a, zeta = find_kummer_generator(base, d_kum, rng, log)
    return KummerAlgebra(base, d_kum, a, zeta)
