"""The main-term components: archimedean density, the D-adic factor, the
unramified Euler factors with closed forms, and their assembly."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import sieve
from .errors import DomainError
from .instance import ProblemInstance


# ---------------------------------------------------------------------------
# archimedean factor
# ---------------------------------------------------------------------------

def _interval(ai: int, X: float):
    lo, hi = sorted((0.0, ai * X))
    return lo, hi


def _density2(t: float, a1: int, a2: int, X: float) -> float:
    """Exact two-variable slice density: the convolution of the uniform
    densities pushed forward by a1 and a2, evaluated at t."""
    lo1, hi1 = _interval(a1, X)
    # s in [0, X] with t - a2*s inside [lo1, hi1]
    b1, b2 = (t - hi1) / a2, (t - lo1) / a2
    lo, hi = min(b1, b2), max(b1, b2)
    length = max(0.0, min(hi, X) - max(lo, 0.0))
    return length / abs(a1)


def _adaptive_simpson(f, lo, hi, tol, depth=28):
    def simp(a, b, fa, fm, fb):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simp(a, m, fa, flm, fm)
        right = simp(m, b, fm, frm, fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
                rec(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb, fm = f(lo), f(hi), f(0.5 * (lo + hi))
    whole = simp(lo, hi, fa, fm, fb)
    return rec(lo, hi, fa, fm, fb, whole, tol, depth)


def c_infinity(a, X: float, N: float, rel_tol: float = 1e-8) -> float:
    """Density of the slice {x in [0,X]^k : sum a_i x_i = N}, normalized so
    the integer-point count on the slice is this value up to O(X^(k-2));
    computed by recursive one-dimensional convolution."""
    a = [int(v) for v in a]
    if len(a) < 2:
        raise DomainError("need at least two variables")
    if any(v == 0 for v in a):
        raise DomainError("coefficients must be nonzero")
    k = len(a)

    def V(j, t):
        if j == 2:
            return _density2(t, a[0], a[1], X)
        lo, hi = _interval(a[j - 1], X)
        # support of V_{j-1} is the sumset of the first j-1 intervals
        slo = sum(_interval(v, X)[0] for v in a[:j - 1])
        shi = sum(_interval(v, X)[1] for v in a[:j - 1])
        # s contributes only where t - a_j s lies in [slo, shi]
        b1, b2 = (t - shi) / a[j - 1], (t - slo) / a[j - 1]
        s_lo, s_hi = max(0.0, min(b1, b2)), min(float(X), max(b1, b2))
        if s_hi <= s_lo:
            return 0.0
        scale = max(1.0, X ** (j - 2))
        return _adaptive_simpson(lambda s: V(j - 1, t - a[j - 1] * s),
                                 s_lo, s_hi, rel_tol * scale)

    lo = sum(_interval(v, X)[0] for v in a)
    hi = sum(_interval(v, X)[1] for v in a)
    if not (lo <= N <= hi):
        return 0.0
    return max(0.0, V(k, float(N)))


def c_infinity_ternary(N: float, X: float) -> float:
    """Closed-form cross-check for k=3, a=(1,1,1)."""
    if N < 0 or N > 3 * X:
        return 0.0

    def pos2(t):
        return t * t if t > 0 else 0.0

    return 0.5 * (pos2(N) - 3 * pos2(N - X) + 3 * pos2(N - 2 * X))


# ---------------------------------------------------------------------------
# congruence factors
# ---------------------------------------------------------------------------

def _cyclic_convolve(u, v, D):
    out = [0] * D
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                if y:
                    out[(i + j) % D] += x * y
    return out


def c_D(cosets, a, N: int, D: int) -> Fraction:
    """D * #{x_i in H_i : sum a_i x_i = N mod D} / prod |H_i|, exact."""
    if D == 1:
        return Fraction(1)
    acc = None
    denom = 1
    for H, ai in zip(cosets, a):
        v = [0] * D
        for x in H:
            v[(ai * x) % D] += 1
        denom *= len(H)
        acc = v if acc is None else _cyclic_convolve(acc, v, D)
    return Fraction(D * acc[N % D], denom)


def c_p(p: int, a, N: int) -> Fraction:
    """Local factor at an unramified prime: p * (solution count over units)
    / (p-1)^k; closed form when p divides no coefficient."""
    a = [int(v) for v in a]
    k = len(a)
    if all(v % p != 0 for v in a):
        if N % p == 0:
            count = ((p - 1) ** k + (-1) ** k * (p - 1)) // p
        else:
            count = ((p - 1) ** k - (-1) ** k) // p
    else:
        units = [frozenset(range(1, p))] * k
        return c_D(units, a, N, p)
    return Fraction(p * count, (p - 1) ** k)


def c_p_bruteforce(p: int, a, N: int) -> Fraction:
    """Exhaustive unit-tuple enumeration; the oracle for c_p."""
    k = len(a)
    count = 0
    idx = [1] * k
    while True:
        if sum(ai * x for ai, x in zip(a, idx)) % p == N % p:
            count += 1
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < p:
                break
            idx[j] = 1
            j -= 1
        if j < 0:
            break
    return Fraction(p * count, (p - 1) ** k)


def euler_product(a, N: int, D: int, P_max: int = 10**4):
    """(product of C_p over p <= P_max with p not dividing D, tail bound,
    first vanishing prime or None)."""
    if P_max < 2:
        raise DomainError("P_max must be >= 2")
    k = len(a)
    log_acc = 0.0
    for p in sieve._small_primes(P_max):
        if D % p == 0:
            continue
        cp = c_p(p, a, N)
        if cp == 0:
            return 0.0, 0.0, p
        log_acc += math.log(float(cp))
    # |C_p - 1| is (p-1)^(1-k) when p | N and (p-1)^(-k) otherwise
    generic = 2.0 * (P_max - 1.0) ** (1 - k) / max(1, k - 1)
    n_big_divisors = max(0.0, math.log(max(abs(N), 2)) / math.log(P_max))
    tail = generic + 2.0 * n_big_divisors * (P_max - 1.0) ** (1 - k)
    return math.exp(log_acc), tail, None


def euler_product_bulk(a, Ns, D: int, P_max: int = 10**4):
    """Euler products for a whole array of N at once: the generic value is
    shared, and each prime adjusts only the N it divides."""
    import numpy as np
    Ns = np.asarray(Ns, dtype=np.int64)
    out = np.ones(len(Ns))
    k = len(a)
    base = 1.0
    for p in sieve._small_primes(P_max):
        if D % p == 0:
            continue
        if all(v % p != 0 for v in a):
            # C_p depends only on whether p divides N
            generic = float(c_p(p, a, 1))
            special = float(c_p(p, a, 0))
            sel = Ns % p == 0
            if generic == 0.0:
                out[~sel] = 0.0
                out[sel] *= special
            else:
                base *= generic
                out[sel] *= special / generic
        else:  # p divides a coefficient: full residue dependence
            vals = np.array([float(c_p(p, a, int(r))) for r in range(p)])
            out *= vals[Ns % p]
    return out * base


def classical_ternary_series(N: int, P_max: int = 10**4) -> float:
    """The classical three-prime singular series, truncated: a separate
    formula path used to cross-check the generic Euler product."""
    out = 1.0
    for p in sieve._small_primes(P_max):
        if N % p == 0:
            out *= 1.0 - (p - 1.0) ** -2
        else:
            out *= 1.0 + (p - 1.0) ** -3
    return out


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

@dataclass
class LocalFactorReport:
    prefactor: Fraction
    C_inf: float
    C_D: Fraction
    euler_truncated: float
    P_max: int
    tail_bound: float
    main_term: float
    vanishing_reason: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "schema": "chebotarev-circle/1",
            "prefactor": [self.prefactor.numerator,
                          self.prefactor.denominator],
            "C_inf": self.C_inf,
            "C_D": [self.C_D.numerator, self.C_D.denominator],
            "euler_truncated": self.euler_truncated,
            "P_max": self.P_max,
            "tail_bound": self.tail_bound,
            "main_term": self.main_term,
            "vanishing_reason": self.vanishing_reason,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def main_term(inst: ProblemInstance, N: int,
              P_max: int = 10**4) -> LocalFactorReport:
    D = inst.modulus
    pref = inst.prefactor
    cinf = c_infinity(inst.a, inst.X, N)
    cd = c_D(inst.lifted_cosets(), inst.a, N, D)
    if cd == 0:
        return LocalFactorReport(pref, cinf, cd, 0.0, P_max, 0.0, 0.0,
                                 "CD_zero")
    value, tail, bad_p = euler_product(inst.a, N, D, P_max)
    if bad_p is not None:
        return LocalFactorReport(pref, cinf, cd, 0.0, P_max, 0.0, 0.0,
                                 f"Cp_zero({bad_p})")
    mt = float(pref) * cinf * float(cd) * value
    return LocalFactorReport(pref, cinf, cd, value, P_max, tail, mt)
