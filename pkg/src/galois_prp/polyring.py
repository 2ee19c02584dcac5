"""Dense polynomials over Z/nZ and the quotient ring (Z/nZ)[X]/F(X).

Polynomials are lists of ints in [0, n), lowest degree first.  Products go
through Kronecker substitution: coefficients are packed into one big
integer, multiplied once, and unpacked.
"""
from math import gcd


class NotInvertible(ArithmeticError):
    """Inversion failed.

    ``factor`` is a nontrivial divisor of n when a scalar pivot or leading
    coefficient was a zero divisor; otherwise ``gcd`` holds a monic
    polynomial of positive degree dividing both operands.
    """

    def __init__(self, factor=None, gcd=None, note=""):
        super().__init__(note or (f"zero divisor {factor}" if factor else f"common factor {gcd}"))
        self.factor = factor
        self.gcd = gcd
        self.note = note


# -- Kronecker packing -----------------------------------------------------

def slot_bytes(n, terms):
    """Byte width of a slot able to hold a sum of `terms` products mod n."""
    bits = 2 * (n - 1).bit_length() + max(terms, 1).bit_length()
    return bits // 8 + 1


def pack(coeffs, width):
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def unpack(value, count, width):
    raw = value.to_bytes(count * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(count)]


def poly_mul(a, b, n):
    """Full product of two coefficient lists, reduced mod n (not mod F)."""
    if not a or not b:
        return []
    if len(a) == 1:
        return [a[0] * c % n for c in b]
    if len(b) == 1:
        return [b[0] * c % n for c in a]
    width = slot_bytes(n, min(len(a), len(b)))
    prod = pack(a, width) * pack(b, width)
    return [c % n for c in unpack(prod, len(a) + len(b) - 1, width)]


# -- plain polynomial helpers ---------------------------------------------

def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def scalar_inverse(c, n):
    c %= n
    g = gcd(c, n)
    if g != 1:
        if 1 < g < n:
            raise NotInvertible(factor=g, note=f"scalar {c} shares factor {g} with n")
        raise NotInvertible(note="division by zero")
    return pow(c, -1, n)


def poly_sub(a, b, n):
    size = max(len(a), len(b))
    a = list(a) + [0] * (size - len(a))
    b = list(b) + [0] * (size - len(b))
    return trim([(x - y) % n for x, y in zip(a, b)])


def poly_divmod(a, b, n):
    """Quotient and remainder of a by b; b's leading coefficient must be a unit."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = scalar_inverse(b[-1], n)
    r = trim(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv % n
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % n
    return trim(q), trim(r[:db])


def poly_rem(a, b, n):
    return poly_divmod(a, b, n)[1]


def poly_gcdex(a, b, n):
    """Extended Euclid over Z/nZ.

    Returns (g, s) with g monic and s*a = g modulo b.  Raises NotInvertible
    with a factor of n when a leading coefficient is a zero divisor.
    """
    r0, r1 = trim(b), trim(a)
    s0, s1 = [], [1]
    while r1:
        q, rem = poly_divmod(r0, r1, n)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, n), n)
    if not r0:
        return [], s0
    inv = scalar_inverse(r0[-1], n)
    return [c * inv % n for c in r0], [c * inv % n for c in s0]


def gauss_kernel(rows, n):
    """Kernel basis of a square matrix over Z/nZ (given as a list of rows).

    Every pivot must be a unit; a nonzero non-unit entry met as a pivot
    candidate raises NotInvertible carrying gcd(entry, n).
    """
    m = [[v % n for v in row] for row in rows]
    size = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    row = 0
    for col in range(cols):
        pivot = None
        for i in range(row, size):
            v = m[i][col]
            if v:
                g = gcd(v, n)
                if g != 1:
                    raise NotInvertible(factor=g, note=f"pivot {v} in column {col}")
                pivot = i
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = pow(m[row][col], -1, n)
        m[row] = [v * inv % n for v in m[row]]
        for i in range(size):
            if i != row and m[i][col]:
                c = m[i][col]
                m[i] = [(v - c * w) % n for v, w in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == size:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [0] * cols
        vec[fcol] = 1
        for r, pcol in enumerate(pivots):
            vec[pcol] = -m[r][fcol] % n
        basis.append(vec)
    return basis


# -- the quotient ring R_cyc ----------------------------------------------

class CycAlgebra:
    """(Z/nZ)[X]/F(X) for a monic F of degree d.

    ``M_sigma`` (list of columns, column j = coordinates of sigma(x^j)) and
    ``certificate`` are filled in by the cyclotomic construction.
    """

    def __init__(self, n, F, certificate=None):
        F = [c % n for c in F]
        if len(F) < 2 or F[-1] != 1:
            raise ValueError("F must be monic of degree >= 1")
        self.n = n
        self.F = tuple(F)
        self.d = len(F) - 1
        self.certificate = certificate
        self.M_sigma = None
        self._binomial = all(c == 0 for c in F[1:-1])

    @classmethod
    def trivial(cls, n):
        """Z/nZ itself, presented as (Z/nZ)[X]/(X)."""
        alg = cls(n, [0, 1], certificate={"strategy": "trivial"})
        alg.M_sigma = [[1]]
        return alg

    def __repr__(self):
        return f"CycAlgebra(n={self.n}, F={list(self.F)})"

    # construction helpers
    def element(self, coeffs):
        coeffs = [c % self.n for c in coeffs]
        if len(coeffs) > self.d:
            coeffs = self.reduce(coeffs)
        return CycElement(self, tuple(coeffs + [0] * (self.d - len(coeffs))))

    def scalar(self, c):
        return self.element([c])

    def one(self):
        return self.scalar(1)

    def zero(self):
        return self.scalar(0)

    def x(self):
        if self.d == 1:
            return self.scalar(-self.F[0])
        return self.element([0, 1])

    def random(self, rng):
        return CycElement(self, tuple(rng.randrange(self.n) for _ in range(self.d)))

    def reduce(self, coeffs):
        """Reduce a coefficient list modulo F (F monic); returns d coefficients."""
        n, d, F = self.n, self.d, self.F
        c = list(coeffs)
        if len(c) <= d:
            return c + [0] * (d - len(c))
        if self._binomial:
            neg_o = (-F[0]) % n
            for i in range(len(c) - 1, d - 1, -1):
                if c[i]:
                    c[i - d] = (c[i - d] + neg_o * c[i]) % n
        else:
            for i in range(len(c) - 1, d - 1, -1):
                top = c[i] % n
                if top:
                    for j in range(d):
                        c[i - d + j] = (c[i - d + j] - top * F[j]) % n
        return c[:d]

    def mul_coeffs(self, a, b):
        return self.reduce(poly_mul(a, b, self.n))

    def sigma_coeffs(self, a):
        """Apply sigma_cyc through M_sigma (one matrix-vector product)."""
        if self.M_sigma is None:
            raise RuntimeError("M_sigma not built for this algebra")
        n = self.n
        out = [0] * self.d
        for aj, col in zip(a, self.M_sigma):
            if aj:
                for i, v in enumerate(col):
                    out[i] += aj * v
        return [v % n for v in out]


class CycElement:
    __slots__ = ("alg", "c")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.c = tuple(coeffs)

    def __repr__(self):
        return f"CycElement({list(self.c)})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.alg.scalar(other)
        return isinstance(other, CycElement) and self.c == other.c and self.alg.n == other.alg.n

    def __hash__(self):
        return hash(self.c)

    def _coerce(self, other):
        if isinstance(other, int):
            return self.alg.scalar(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        n = self.alg.n
        return CycElement(self.alg, tuple((a + b) % n for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        n = self.alg.n
        return CycElement(self.alg, tuple((a - b) % n for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        n = self.alg.n
        return CycElement(self.alg, tuple(-a % n for a in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            n = self.alg.n
            return CycElement(self.alg, tuple(a * other % n for a in self.c))
        return CycElement(self.alg, tuple(self.alg.mul_coeffs(self.c, other.c)))

    __rmul__ = __mul__

    def __pow__(self, e):
        return cyc_pow(self, e)

    def is_zero(self):
        return not any(self.c)

    def sigma(self):
        return CycElement(self.alg, tuple(self.alg.sigma_coeffs(self.c)))

    def try_invert(self):
        return try_invert(self)


def poly_mul_mod(a, b):
    """Product of two CycElements of the same algebra."""
    if a.alg is not b.alg and a.alg.F != b.alg.F:
        raise ValueError("elements of different algebras")
    return a * b


def cyc_pow(a, e):
    """a**e in R_cyc by left-to-right square-and-multiply."""
    if e < 0:
        return cyc_pow(try_invert(a), -e)
    alg = a.alg
    result = alg.one().c
    base = a.c
    for bit in bin(e)[2:]:
        result = alg.mul_coeffs(result, result)
        if bit == "1":
            result = alg.mul_coeffs(result, base)
    return CycElement(alg, tuple(result))


def try_invert(a):
    """Inverse of a in R_cyc via extended Euclid against F.

    Raises NotInvertible carrying either a factor of n or the monic gcd of a
    and F.  A returned inverse has been checked by one multiplication.
    """
    alg = a.alg
    n = alg.n
    if a.is_zero():
        raise NotInvertible(note="zero is not invertible")
    g, s = poly_gcdex(list(a.c), list(alg.F), n)
    if len(g) != 1:
        raise NotInvertible(gcd=tuple(g), note="nontrivial common factor with F")
    inv = alg.element(s)
    if (a * inv) != alg.one():
        raise NotInvertible(note="inverse check a*a' = 1 failed")
    return inv
