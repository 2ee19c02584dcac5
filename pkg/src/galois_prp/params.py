"""Parameter selection for the composed test, driven by a power-law cost model.

All costs are in units of ``F`` seconds; comparisons never depend on ``F``.
"""
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .arith import DEFAULT_BOUND

LN2 = math.log(2.0)
BUDGET_RTOL = 1e-12


@dataclass(frozen=True)
class CostModel:
    F: float = 30e-9
    mr_coeff: float = 1.0
    mr_exp: float = 2.6
    f_coeff_2: float = 1.0
    f_exp_2: float = 2.6
    f_coeff_big: float = 18.0
    f_dexp_big: float = 2.2
    f_exp_big: float = 2.4
    zeta_coeff_1: float = 19.0
    zeta_exp_1: float = 2.4
    zeta_coeff_big: float = 36.0
    zeta_dexp_big: float = 2.2
    zeta_exp_big: float = 2.4
    sigma_coeff_1: float = 1.0
    sigma_exp_1: float = 2.6
    sigma_coeff_big: float = 10.0
    sigma_exp_big: float = 2.4
    power_coeff_1: float = 19.0
    power_dexp: float = 1.2
    power_exp_1: float = 2.4
    power_coeff_big: float = 36.0
    power_exp_big: float = 2.4

    @classmethod
    def from_file(cls, path):
        """Read ``key = value`` lines; '#' starts a comment; missing keys keep defaults."""
        known = {f.name for f in fields(cls)}
        values = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                key = key.strip()
                if not sep or key not in known:
                    raise ValueError(f"{path}:{lineno}: bad line {line!r}")
                values[key] = float(value)
        model = cls(**values)
        if any(v <= 0 for v in asdict(model).values()):
            raise ValueError("cost model entries must be positive")
        return model

    def to_text(self):
        return "".join(f"{k} = {v!r}\n" for k, v in asdict(self).items())

    def scaled(self, factor):
        return replace(self, F=self.F * factor)

    # The terms accept numpy arrays for d_cyc / d_kum / r.
    def t_mr(self, b, r):
        return self.F * self.mr_coeff * np.asarray(r, dtype=float) * b ** self.mr_exp

    def t_f(self, b, d_cyc):
        dc = np.asarray(d_cyc, dtype=float)
        two = self.f_coeff_2 * math.log2(b) * b ** self.f_exp_2
        big = self.f_coeff_big * np.log2(dc) * dc ** self.f_dexp_big * b ** self.f_exp_big
        return self.F * np.where(dc == 1, 0.0, np.where(dc == 2, two, big))

    def t_zeta(self, b, d_cyc):
        dc = np.asarray(d_cyc, dtype=float)
        one = self.zeta_coeff_1 * b ** self.zeta_exp_1
        big = self.zeta_coeff_big * dc ** self.zeta_dexp_big * b ** self.zeta_exp_big
        return self.F * np.where(dc == 1, one, big)

    def t_sigma(self, b, d_cyc, d_kum):
        dc = np.asarray(d_cyc, dtype=float)
        dk = np.asarray(d_kum, dtype=float)
        one = self.sigma_coeff_1 * dk * b ** self.sigma_exp_1
        big = self.sigma_coeff_big * dc * dk * b ** self.sigma_exp_big
        return self.F * np.where(dc == 1, one, big)

    def t_power(self, b, d_cyc, d_kum):
        dc = np.asarray(d_cyc, dtype=float)
        dk = np.asarray(d_kum, dtype=float)
        one = self.power_coeff_1 * dk ** self.power_dexp * b ** self.power_exp_1
        big = self.power_coeff_big * (dc * dk) ** self.power_dexp * b ** self.power_exp_big
        return self.F * np.where(dc == 1, one, big)

    def t_galois(self, b, r, d_cyc, d_kum):
        return (self.t_mr(b, r) + self.t_f(b, d_cyc) + self.t_zeta(b, d_cyc)
                + self.t_sigma(b, d_cyc, d_kum) + self.t_power(b, d_cyc, d_kum))


DEFAULT_MODEL = CostModel()


@dataclass(frozen=True)
class ParamChoice:
    lam: int
    A: float
    B: int
    d_cyc: int
    d_kum: int
    r: int
    est_galois_cost: float
    est_mr_cost: float
    fallback: bool = False
    forced: bool = False

    @property
    def d(self):
        return self.d_cyc * self.d_kum

    def security_bits(self):
        """Bits of security rd/A (1 - A/d) promised by the density bound."""
        if self.fallback or self.d <= self.A:
            return 2 * self.r
        return self.r * (self.d - self.A) / self.A

    def to_json(self):
        return {
            "A": self.A, "B": self.B, "d_cyc": self.d_cyc, "d_kum": self.d_kum,
            "r": self.r, "fallback": self.fallback, "forced": self.forced,
            "est_galois_cost": self.est_galois_cost, "est_mr_cost": self.est_mr_cost,
        }


def compute_A(lam, b):
    """Smallest admissible A for security lam on b-bit inputs."""
    if b < 2:
        raise ValueError("b must be >= 2")
    return (2.0 + 2.0 * lam / (b - 1)) / 0.9995


def compute_C(A, B=DEFAULT_BOUND):
    return 1.0 - 2.0 / A - 4.0 / B


def compute_r(lam, A, d):
    return math.ceil(lam * A / (d - A))


def max_lambda(b):
    """Largest lam handled in one pass: 23 log2 n, with log2 n >= b - 1."""
    return math.floor(23 * (b - 1))


def d_cyc_bound(b, log2n=None):
    log2n = (b - 1) if log2n is None else log2n
    inner = math.log(math.log(math.log(68.0 * math.sqrt(log2n))))
    return math.floor((9.0 + math.log(b)) ** (1.5 * max(1.0, inner)))


def degree_budget_holds(d, r, A, C, log_n):
    """dr(1 - A/d) <= A^2 C log n / (2 log 2), up to float rounding.

    ``r`` may be the unrounded lam A / (d - A); rounding up first can break the budget.
    """
    lhs = d * r * (1.0 - A / d)
    rhs = A * A * C * log_n / (2.0 * LN2)
    return lhs <= rhs * (1.0 + BUDGET_RTOL)


def _bits_and_logn(n, bits):
    if n is not None:
        return n.bit_length(), math.log(n), math.log2(n)
    if bits is None:
        raise ValueError("need n or bits")
    return bits, (bits - 1) * LN2, bits - 1.0


def enumerate_candidates(n, lam, *, bits=None, model=DEFAULT_MODEL, bound=DEFAULT_BOUND):
    """All admissible (d_cyc, d_kum, r) with estimated costs.

    With n=None (``bits`` given) every d_kum counts as a divisor: the
    model-level mode used for tables and the crossover curve.
    """
    b, log_n, log2n = _bits_and_logn(n, bits)
    A = compute_A(lam, b)
    C = compute_C(A, bound)
    mr_cost = float(model.t_mr(b, math.ceil(lam / 2)))
    limit = 2.0 * math.sqrt(A * lam)
    out = []
    for dc in range(1, d_cyc_bound(b, log2n) + 1):
        for dk in range(1, math.floor(limit / dc) + 1):
            d = dc * dk
            if d <= A:
                continue
            if n is not None and dk > 1 and pow(n, dc, dk) != 1:
                continue
            if not degree_budget_holds(d, lam * A / (d - A), A, C, log_n):
                continue
            r = compute_r(lam, A, d)
            cost = float(model.t_galois(b, r, dc, dk))
            out.append(ParamChoice(lam, A, bound, dc, dk, r, cost, mr_cost))
    return out


def estimate_cost(b, choice, model=DEFAULT_MODEL):
    if choice.fallback:
        return float(model.t_mr(b, choice.r))
    return float(model.t_galois(b, choice.r, choice.d_cyc, choice.d_kum))


def fallback_choice(lam, b, model=DEFAULT_MODEL, bound=DEFAULT_BOUND, galois_cost=math.inf):
    r = math.ceil(lam / 2)
    return ParamChoice(lam, compute_A(lam, b), bound, 0, 0, r,
                       galois_cost, float(model.t_mr(b, r)), fallback=True)


def forced_choice(n, lam, d_cyc, d_kum, r=None, model=DEFAULT_MODEL, bound=DEFAULT_BOUND):
    """A caller-imposed (d_cyc, d_kum); r defaults to the security formula."""
    if d_cyc < 1 or d_kum < 1:
        raise ValueError("forced degrees must be >= 1")
    if d_kum > 1 and pow(n, d_cyc, d_kum) != 1:
        raise ValueError(f"d_kum={d_kum} does not divide n^{d_cyc} - 1")
    b = n.bit_length()
    A = compute_A(lam, b)
    d = d_cyc * d_kum
    if r is None:
        r = compute_r(lam, A, d) if d > A else math.ceil(lam / 2)
    cost = float(model.t_galois(b, r, d_cyc, d_kum))
    mr_cost = float(model.t_mr(b, math.ceil(lam / 2)))
    return ParamChoice(lam, A, bound, d_cyc, d_kum, r, cost, mr_cost, forced=True)


def select(n, lam, model=DEFAULT_MODEL, *, bound=DEFAULT_BOUND, allow_fallback=True,
           d_cyc=None, d_kum=None, r=None, bits=None):
    """Cheapest candidate, or a pure Miller-Rabin fallback when that is cheaper."""
    if d_cyc is not None and d_kum is not None:
        return forced_choice(n, lam, d_cyc, d_kum, r, model, bound)
    b = n.bit_length() if n is not None else bits
    cands = enumerate_candidates(n, lam, bits=bits, model=model, bound=bound)
    if d_cyc is not None:
        cands = [c for c in cands if c.d_cyc == d_cyc]
    if d_kum is not None:
        cands = [c for c in cands if c.d_kum == d_kum]
    if not cands:
        return fallback_choice(lam, b, model, bound)
    best = min(cands, key=lambda c: (c.est_galois_cost, c.d_cyc, c.d_kum))
    if allow_fallback and best.est_mr_cost < best.est_galois_cost:
        return fallback_choice(lam, b, model, bound, best.est_galois_cost)
    return best


# -- crossover curve -------------------------------------------------------

class _IdealGrid:
    """All (d_cyc, d_kum) pairs up to the largest bound needed for one b."""

    def __init__(self, b, lam_max):
        A_max = compute_A(lam_max, b)
        limit = 2.0 * math.sqrt(A_max * lam_max)
        dcs, dks = [], []
        for dc in range(1, d_cyc_bound(b) + 1):
            top = math.floor(limit / dc)
            dcs.extend([dc] * top)
            dks.extend(range(1, top + 1))
        self.dc = np.array(dcs, dtype=np.int64)
        self.dk = np.array(dks, dtype=np.int64)
        self.d = self.dc * self.dk


def best_ideal_cost(b, lam, model=DEFAULT_MODEL, bound=DEFAULT_BOUND, grid=None):
    """Cheapest model cost over ideal-divisor candidates, or inf when none."""
    grid = grid or _IdealGrid(b, lam)
    A = compute_A(lam, b)
    C = compute_C(A, bound)
    log_n = (b - 1) * LN2
    limit = 2.0 * math.sqrt(A * lam)
    mask = (grid.d > A) & (grid.dk <= np.floor(limit / grid.dc))
    if not mask.any():
        return math.inf
    dc, dk, d = grid.dc[mask], grid.dk[mask], grid.d[mask].astype(float)
    r_real = lam * A / (d - A)
    ok = d * r_real * (1.0 - A / d) <= A * A * C * log_n / (2.0 * LN2) * (1.0 + BUDGET_RTOL)
    if not ok.any():
        return math.inf
    dc, dk, r = dc[ok], dk[ok], np.ceil(r_real[ok])
    return float(np.min(model.t_galois(b, r, dc, dk)))


def crossover(b, model=DEFAULT_MODEL, bound=DEFAULT_BOUND, lam_max=None):
    """Smallest lam at which the Galois test is model-cheaper than lam/2 MR tests.

    Returns None when no lam up to 23 (b - 1) qualifies.
    """
    lam_max = max_lambda(b) if lam_max is None else lam_max
    grid = _IdealGrid(b, lam_max)
    for lam in range(1, lam_max + 1):
        mr = float(model.t_mr(b, math.ceil(lam / 2)))
        if best_ideal_cost(b, lam, model, bound, grid) < mr:
            return lam
    return None
