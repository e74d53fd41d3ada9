"""Representation counts S(N) by convolution of weighted prime arrays,
brute-force oracles, the sieved coefficient analogue, Parseval norms, and
the end-to-end comparison against the predicted main term."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import galois, genfun, sieve, singular
from .errors import ResourceLimit
from .instance import ProblemInstance

MAX_ARRAY = 10**8
EXACT_X_LIMIT = 10**4


@dataclass
class CoefficientArray:
    """Dense S(N) over the attainable range; index 0 holds
    N = -(sum of |a_i| over negative a_i) * X."""
    offset: int
    weighted: np.ndarray
    unweighted: np.ndarray

    def weighted_at(self, N: int) -> float:
        i = N - self.offset
        if 0 <= i < len(self.weighted):
            return float(self.weighted[i])
        return 0.0

    def unweighted_at(self, N: int) -> int:
        i = N - self.offset
        if 0 <= i < len(self.unweighted):
            return int(self.unweighted[i])
        return 0

    @property
    def n_range(self):
        return self.offset, self.offset + len(self.weighted) - 1


def _embed(values: np.ndarray, ai: int):
    """Spread values[n] to index |ai|*n, reversing when ai < 0; returns
    (array, offset of index 0 in N-space)."""
    X = len(values) - 1
    out = np.zeros(abs(ai) * X + 1, dtype=values.dtype)
    out[::abs(ai)] = values
    if ai < 0:
        return out[::-1].copy(), ai * X
    return out, 0


def _fft_convolve(arrays):
    total = sum(len(a) - 1 for a in arrays) + 1
    M = 1 << max(1, (total - 1).bit_length())
    spec = np.ones(M // 2 + 1, dtype=complex)
    for a in arrays:
        spec *= np.fft.rfft(a, M)
    return np.fft.irfft(spec, M)[:total]


def _exact_convolve(arrays):
    """Integer convolution through big-integer multiplication (Kronecker
    substitution, base 2^64); exact for nonnegative entries."""
    shift = 64
    acc = None
    for a in arrays:
        packed = sum(int(v) << (shift * i) for i, v in enumerate(a))
        acc = packed if acc is None else acc * packed
    total = sum(len(a) - 1 for a in arrays) + 1
    data = acc.to_bytes(total * 8, "little")
    return np.frombuffer(data, dtype="<u8").astype(np.int64)


def _component_arrays(inst: ProblemInstance, table: sieve.PrimeTable):
    out = []
    for fc in inst.components:
        wpa = sieve.weighted_prime_array(table, fc.spec, fc.cls, inst.X)
        out.append(wpa)
    return out


def representation_counts(inst: ProblemInstance,
                          table: sieve.PrimeTable) -> CoefficientArray:
    """S(N) for every attainable N: weighted by the product of log p and
    as a plain solution count."""
    total_len = sum(abs(v) for v in inst.a) * inst.X + 1
    if total_len > MAX_ARRAY:
        raise ResourceLimit(f"coefficient array of length {total_len}")
    comps = _component_arrays(inst, table)
    w_arrays, u_arrays, offset = [], [], 0
    for wpa, ai in zip(comps, inst.a):
        w, off = _embed(wpa.weights, ai)
        u, _ = _embed(wpa.indicator.astype(np.float64), ai)
        w_arrays.append(w)
        u_arrays.append(u)
        offset += off
    weighted = _fft_convolve(w_arrays)
    np.maximum(weighted, 0.0, out=weighted)
    if inst.X <= EXACT_X_LIMIT:
        ints = [_embed(wpa.indicator.astype(np.int64), ai)[0]
                for wpa, ai in zip(comps, inst.a)]
        unweighted = _exact_convolve(ints)
    else:
        unweighted = np.rint(_fft_convolve(u_arrays)).astype(np.int64)
        np.maximum(unweighted, 0, out=unweighted)
    return CoefficientArray(offset, weighted, unweighted)


def brute_force_S(inst: ProblemInstance, N: int, table: sieve.PrimeTable):
    """(weighted, unweighted) S(N) by meet-in-the-middle enumeration over
    the classified prime lists; the oracle path."""
    comps = _component_arrays(inst, table)
    k = inst.k
    half = (k + 1) // 2

    def sums(idx):
        acc = {0: (1, 1.0)}
        for i in idx:
            nxt = {}
            ps = comps[i].primes
            logs = np.log(ps.astype(np.float64))
            for s, (cnt, wt) in acc.items():
                for p, lg in zip(ps, logs):
                    key = s + inst.a[i] * int(p)
                    c0, w0 = nxt.get(key, (0, 0.0))
                    nxt[key] = (c0 + cnt, w0 + wt * lg)
            acc = nxt
        return acc

    left = sums(range(half))
    right = sums(range(half, k))
    count, weight = 0, 0.0
    for s, (cnt, wt) in left.items():
        hit = right.get(N - s)
        if hit is not None:
            count += cnt * hit[0]
            weight += wt * hit[1]
    return weight, count


def _sharp_component(inst: ProblemInstance, fc, z: float) -> np.ndarray:
    """Weight array Lambda_{K,C}(n) * Lambda_z(n) over n = 0..X."""
    X = inst.X
    w = sieve.sieve_survivor_mask(X, z).astype(np.float64)
    w *= sieve.c_of_z_float(z)
    D = fc.spec.modulus
    if D > 1:
        tab = np.zeros(D)
        for r in fc.cls.coset:
            tab[r] = sieve._phi(D) / len(fc.cls.coset)
        w *= tab[np.arange(X + 1) % D]
    return w


def h_sharp_array(inst: ProblemInstance, z: float) -> CoefficientArray:
    """Coefficients of H_sharp: the prefactor times the convolution of the
    congruence-sieve weight arrays."""
    total_len = sum(abs(v) for v in inst.a) * inst.X + 1
    if total_len > MAX_ARRAY:
        raise ResourceLimit(f"coefficient array of length {total_len}")
    arrays, offset = [], 0
    for fc, ai in zip(inst.components, inst.a):
        w, off = _embed(_sharp_component(inst, fc, z), ai)
        arrays.append(w)
        offset += off
    vals = _fft_convolve(arrays) * float(inst.prefactor)
    return CoefficientArray(offset, vals, np.zeros(0, dtype=np.int64))


def h_sharp_coefficient(inst: ProblemInstance, z: float, N: int) -> float:
    return h_sharp_array(inst, z).weighted_at(N)


def h_flat_norms(inst: ProblemInstance, z: float,
                 table: sieve.PrimeTable):
    """(L1, L2) of H_flat = H - H_sharp: L2 by Parseval over coefficients,
    L1 by sampling the difference polynomial at 4x-oversampled roots of
    unity."""
    if inst.X < 2:
        return 0.0, 0.0
    H = representation_counts(inst, table)
    Hs = h_sharp_array(inst, z)
    diff = H.weighted - Hs.weighted
    l2 = float(math.sqrt(np.sum(diff * diff)))
    M = 1 << max(2, (4 * len(diff) - 1).bit_length())
    vals = np.fft.fft(diff, M)
    l1 = float(np.mean(np.abs(vals)))
    return l1, l2


@dataclass
class VerifyRow:
    N: int
    S_unweighted: int
    S_weighted: float
    C_inf: float
    C_D: float
    euler: float
    main_term: float
    ratio: Optional[float]
    flags: str


@dataclass
class VerifyResult:
    rows: list
    median_abs_dev: Optional[float]   # median of |ratio - 1| over rated rows
    q90_abs_dev: Optional[float]

    def ratios(self):
        return [r.ratio for r in self.rows if r.ratio is not None]


BOUNDARY_MARGIN = 0.05


def verify_theorem(inst: ProblemInstance, z: float, N_list,
                   table: sieve.PrimeTable,
                   P_max: int = 10**4) -> VerifyResult:
    """Per-N comparison of S(N) against the assembled main term."""
    coeffs = representation_counts(inst, table)
    lo, hi = inst.attainable_range
    span = hi - lo
    rows = []
    for N in N_list:
        rep = singular.main_term(inst, N, P_max)
        sw = coeffs.weighted_at(N)
        su = coeffs.unweighted_at(N)
        flags = []
        if min(N - lo, hi - N) < BOUNDARY_MARGIN * span:
            flags.append("boundary")
        ratio = None
        if rep.main_term > 0:
            ratio = sw / rep.main_term
        else:
            flags.append("vanishing")
        rows.append(VerifyRow(N, su, sw, rep.C_inf, float(rep.C_D),
                              rep.euler_truncated, rep.main_term, ratio,
                              "+".join(flags)))
    devs = sorted(abs(r.ratio - 1.0) for r in rows
                  if r.ratio is not None and "boundary" not in r.flags)
    if not devs:
        devs = sorted(abs(r.ratio - 1.0) for r in rows
                      if r.ratio is not None)
    med = devs[len(devs) // 2] if devs else None
    q90 = devs[min(len(devs) - 1, int(0.9 * len(devs)))] if devs else None
    return VerifyResult(rows, med, q90)


def parseval_check(inst: ProblemInstance, table: sieve.PrimeTable,
                   oversample: int = 4):
    """(sum of S(N)^2, grid quadrature of |H|^2) where the grid side
    evaluates H(alpha) = prod G_i(a_i alpha) from the prime sums directly,
    independent of the convolution path."""
    coeffs = representation_counts(inst, table)
    lhs = float(np.sum(coeffs.weighted ** 2))
    M = oversample * len(coeffs.weighted)
    comps = _component_arrays(inst, table)
    grid = np.arange(M) / M
    H = np.ones(M, dtype=complex)
    for wpa, ai in zip(comps, inst.a):
        ps = wpa.primes.astype(np.float64)
        logs = np.log(ps)
        phases = np.exp(2j * np.pi * ((ai * grid[:, None] * ps[None, :]) % 1.0))
        H *= phases @ logs
    rhs = float(np.mean(np.abs(H) ** 2))
    return lhs, rhs
