"""Exact Fourier coefficients of the level-1 eigenforms used everywhere else.

Weight 12 is the discriminant form q * prod(1-q^n)^24; weight 16 is its
product with the weight-4 Eisenstein series.  Both spaces have dimension
one, so these q-expansions are automatically normalized Hecke eigenforms
and the Hecke relation can be checked exactly against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, InsufficientCoefficients
from .qseries import QSeries

SUPPORTED_WEIGHTS = (12, 16)


def euler_product_qexp(N: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) to N terms via the pentagonal-number expansion."""
    if N < 1:
        raise ContractError("need N >= 1")
    c = [0] * N
    c[0] = 1
    m = 1
    while True:
        p1 = m * (3 * m - 1) // 2
        p2 = m * (3 * m + 1) // 2
        if p1 >= N and p2 >= N:
            break
        s = -1 if m % 2 else 1
        if p1 < N:
            c[p1] += s
        if p2 < N:
            c[p2] += s
        m += 1
    return QSeries(tuple(c))


def eta_power_qexp(exponent: int, N: int) -> QSeries:
    """q * prod(1-q^n)^exponent, exact integers, N coefficients of q^1..q^N.

    Returned series is indexed so that entry n-1 is the coefficient of q^n
    (the leading q is factored in).  exponent=24 gives the weight-12 form.
    """
    if N < 1:
        raise ContractError("empty series requested (N=0)")
    if exponent < 2 or exponent % 2:
        raise ContractError("exponent must be a positive even integer")
    return euler_product_qexp(N).pow(exponent)


def eta_power_qexp_naive(exponent: int, N: int) -> QSeries:
    """Independent route: multiply the factors (1-q^n) out one by one.

    O(exponent * N^2); only sensible for small N.  Kept as the oracle
    against which the pentagonal/backward route is cross-checked.
    """
    if N < 1:
        raise ContractError("empty series requested (N=0)")
    c = [0] * N
    c[0] = 1
    for n in range(1, N):
        for _ in range(exponent):
            for i in range(N - 1, n - 1, -1):
                c[i] -= c[i - n]
    return QSeries(tuple(c))


def sigma_table(power: int, N: int) -> list[int]:
    """sigma_power(n) for n = 0..N-1 (entry 0 unused, set to 0)."""
    s = [0] * N
    for d in range(1, N):
        dp = d ** power
        for m in range(d, N, d):
            s[m] += dp
    return s


def eisenstein_qexp(weight: int, N: int) -> QSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n."""
    if weight not in (4, 6):
        raise ContractError(f"unsupported Eisenstein weight {weight}")
    if N < 1:
        raise ContractError("need N >= 1")
    if weight == 4:
        mult, power = 240, 3
    else:
        mult, power = -504, 5
    s = sigma_table(power, N)
    c = [mult * x for x in s]
    c[0] = 1
    return QSeries(tuple(c))


@dataclass
class Eigenform:
    """Normalized Hecke eigenform: exact a(n) plus float lambda(n).

    a[n] is the exact integer coefficient for 1 <= n <= length (a[0] = 0);
    lam[n] = a(n) * n^(-(weight-1)/2) in double precision.
    """

    weight: int
    a: list[int]
    lam: np.ndarray = field(repr=False)
    canonical: bool = False  # built by make_eigenform (tables may be regrown)

    @property
    def length(self) -> int:
        return len(self.a) - 1

    def require(self, n: int) -> None:
        if n > self.length:
            raise InsufficientCoefficients(
                f"weight-{self.weight} table has {self.length} coefficients, need {n}"
            )

    def lambda_slice(self, lo: int, hi: int) -> np.ndarray:
        """lam(lo..hi) inclusive, as a view."""
        self.require(hi)
        if lo < 1:
            raise ContractError("coefficients are indexed from n=1")
        return self.lam[lo:hi + 1]


_form_cache: dict[int, Eigenform] = {}


def make_eigenform(weight: int, N: int) -> Eigenform:
    """The unique normalized eigenform of weight 12 or 16, coefficients to N.

    Tables are cached and grown monotonically; repeated calls with smaller
    N reuse the largest expansion computed so far.
    """
    if weight not in SUPPORTED_WEIGHTS:
        raise ContractError(f"weight must be one of {SUPPORTED_WEIGHTS}")
    if N < 1:
        raise ContractError("need N >= 1")
    cached = _form_cache.get(weight)
    if cached is not None and cached.length >= N:
        return cached

    delta = eta_power_qexp(24, N)  # entry n-1 = coefficient of q^n
    if weight == 12:
        coeffs = list(delta.coefficients)
    else:
        e4 = eisenstein_qexp(4, N)
        coeffs = list((delta * e4).coefficients)

    a = [0] + coeffs[:N]
    n = np.arange(N + 1, dtype=np.float64)
    n[0] = 1.0
    lam = np.array([float(x) for x in a], dtype=np.float64) / n ** ((weight - 1) / 2.0)
    form = Eigenform(weight=weight, a=a, lam=lam, canonical=True)
    _form_cache[weight] = form
    return form


def divisor_sieve(k: int, N: int) -> np.ndarray:
    """tau_k(n) for n = 0..N (entry 0 is 0), by iterated Dirichlet convolution
    with the constant function 1."""
    if k < 2:
        raise ContractError("fold must be >= 2")
    if N < 1:
        raise ContractError("need N >= 1")
    t = np.ones(N + 1, dtype=np.int64)
    t[0] = 0
    for _ in range(k - 1):
        out = np.zeros(N + 1, dtype=np.int64)
        for d in range(1, N + 1):
            out[d::d] += t[d]
        t = out
    return t


def hecke_relation_report(form: Eigenform, M: int) -> dict:
    """Exact check of a(m)a(n) = sum_{d | (m,n)} d^(k-1) a(mn/d^2) for m,n <= M.

    Returns {"checked": pairs, "violations": count, "first_violation": (m, n) or None}.
    """
    form.require(M * M)
    kpow = form.weight - 1
    a = form.a
    violations = 0
    first = None
    checked = 0
    for m in range(1, M + 1):
        am = a[m]
        for n in range(m, M + 1):
            g = math.gcd(m, n)
            rhs = 0
            if g == 1:
                rhs = a[m * n]
            else:
                mn = m * n
                for d in range(1, g + 1):
                    if g % d == 0:
                        rhs += d ** kpow * a[mn // (d * d)]
            checked += 1
            if am * a[n] != rhs:
                violations += 1
                if first is None:
                    first = (m, n)
    return {"checked": checked, "violations": violations, "first_violation": first}
