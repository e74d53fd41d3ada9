"""Galois extensions of Q and classification of primes by Frobenius class.

A field is described either by abelian congruence data (a modulus and a
partition of the units into cosets) or by a monic integer polynomial that
generates a Galois extension, together with a class table and the coset
data of its abelianization.  Conjugacy classes of polynomial specs are
identified purely by the order of the Frobenius element, which equals the
common degree of the irreducible factors of f mod p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistentSpec, ValidationError

ABELIAN = "abelian"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class ClassSpec:
    label: str
    coset: frozenset
    class_size: int = 1
    element_order: int = 1


@dataclass(frozen=True)
class FrobeniusResult:
    class_label: Optional[str]  # None means ramified

    @property
    def ramified(self):
        return self.class_label is None


RAMIFIED = FrobeniusResult(None)


@dataclass(frozen=True)
class GaloisSpec:
    kind: str
    modulus: int  # D_K (abelian) or the abelianization modulus D (polynomial)
    classes: tuple
    coeffs: Optional[tuple] = None  # monic, ascending; polynomial kind only
    group_order: Optional[int] = None

    def __post_init__(self):
        if self.kind == ABELIAN:
            object.__setattr__(self, "group_order", len(self.classes))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else 1

    @property
    def ramified_modulus(self):
        """Primes dividing this are treated as ramified."""
        if self.kind == ABELIAN:
            return max(self.modulus, 1)
        return abs(poly_discriminant(self.coeffs))

    def class_by_label(self, label):
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)

    def class_density(self, cls):
        """|C|/|G| as an exact rational."""
        return Fraction(cls.class_size, self.group_order)


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    def add(self, code, message):
        self.issues.append((code, message))

    @property
    def ok(self):
        return not self.issues

    def raise_if_invalid(self):
        if self.issues:
            raise ValidationError(self.issues)


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficients ascending
# ---------------------------------------------------------------------------

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod_p(coeffs, p):
    return _trim([c % p for c in coeffs])


def _poly_mulmod(a, b, f, p):
    """a*b reduced mod (f, p); f monic."""
    n = len(a) + len(b) - 1
    out = [0] * max(n, 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_rem(out, f, p)


def _poly_rem(a, f, p):
    a = [c % p for c in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] % p
        if c:
            c = (c * inv_lead) % p
            for j in range(df + 1):
                a[k - df + j] = (a[k - df + j] - c * f[j]) % p
    return _trim(a[:df])


def _poly_gcd(a, b, p):
    a, b = _poly_mod_p(a, p), _poly_mod_p(b, p)
    while b:
        a, b = b, _poly_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_powmod(base, e, f, p):
    result = [1]
    base = _poly_rem(list(base), f, p)
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_deriv(f, p):
    return _trim([(i * c) % p for i, c in enumerate(f)][1:])


def _squarefree_parts(f, p):
    """Decompose monic f over GF(p) into [(g, m)] with g squarefree monic
    and f = prod g^m (distinct g pairwise coprime)."""
    out = []
    if len(f) <= 1:
        return out
    inv = pow(f[-1], -1, p)
    f = [(c * inv) % p for c in f]
    e = 1
    while len(f) > 1:
        d = _poly_deriv(f, p)
        if not d:
            # f = h(x)^p since coefficients are Frobenius-fixed in GF(p)
            f = _trim(f[::p])
            e *= p
            continue
        g = _poly_gcd(f, d, p)
        w = _poly_quo(f, g, p)  # product of factors with mult. not = 0 mod p
        i = 1
        while len(w) > 1:
            y = _poly_gcd(w, g, p)
            part = _poly_quo(w, y, p)  # factors of multiplicity exactly i
            if len(part) > 1:
                out.append((part, i * e))
            w = y
            g = _poly_quo(g, y, p)
            i += 1
        f = g  # all remaining multiplicities divisible by p
    return out


def _poly_quo(a, b, p):
    a = [c % p for c in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = (a[k] * inv) % p
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return _trim(q)


def _distinct_degree_degrees(g, p):
    """Degrees (with count) of irreducible factors of squarefree monic g."""
    degs = []
    h = [0, 1]  # x
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _poly_powmod(h, p, g, p)
        delta = list(h)
        while len(delta) < 2:
            delta.append(0)
        delta[1] = (delta[1] - 1) % p
        factor = _poly_gcd(delta, g, p)
        if len(factor) > 1:
            degs.extend([d] * ((len(factor) - 1) // d))
            g = _poly_quo(g, factor, p)
            h = _poly_rem(h, g, p)
    if len(g) > 1:
        degs.append(len(g) - 1)
    return degs


def poly_factor_degrees(coeffs, p):
    """Multiset of degrees of the irreducible factors of f mod p.

    Repeated factors are reported with multiplicity; the caller decides
    how to treat non-squarefree reductions.
    """
    f = _poly_mod_p(list(coeffs), p)
    if len(f) - 1 != len(coeffs) - 1:
        raise InconsistentSpec(f"leading coefficient vanishes mod {p}")
    out = []
    for g, m in _squarefree_parts(f, p):
        for d in sorted(_distinct_degree_degrees(list(g), p)):
            out.extend([d] * m)
    return sorted(out)


# ---------------------------------------------------------------------------
# integer polynomial utilities
# ---------------------------------------------------------------------------

def poly_discriminant(coeffs):
    """Discriminant of an integer polynomial via the Sylvester resultant."""
    f = list(coeffs)
    n = len(f) - 1
    if n < 2:
        return 1
    fp = [i * c for i, c in enumerate(f)][1:]
    res = _resultant(f, fp)
    lead = f[-1]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    disc = sign * res // lead
    return disc


def _resultant(f, g):
    """Integer resultant by fraction-free (Bareiss) elimination of the
    Sylvester matrix."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g)) + [0] * (m - 1 - i))
    mat = [Fraction(x) for row in rows for x in row]
    # plain fraction Gaussian elimination; sizes here are tiny
    det = Fraction(1)
    a = [mat[i * size:(i + 1) * size] for i in range(size)]
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, size):
            factor = a[r][col] * inv
            if factor:
                for c in range(col, size):
                    a[r][c] -= factor * a[col][c]
    assert det.denominator == 1
    return det.numerator


def _units(D):
    if D == 1:
        return [0]
    return [u for u in range(D) if math.gcd(u, D) == 1]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def frobenius_class(spec: GaloisSpec, p: int) -> FrobeniusResult:
    """Artin-symbol class of an unramified prime p, or RAMIFIED."""
    if spec.kind == ABELIAN:
        if spec.modulus > 1 and spec.modulus % p == 0:
            return RAMIFIED
        r = p % spec.modulus if spec.modulus > 1 else 0
        for c in spec.classes:
            if r in c.coset:
                return FrobeniusResult(c.label)
        raise InconsistentSpec(f"residue {r} not covered by any coset")
    if spec.ramified_modulus % p == 0:
        return RAMIFIED
    degs = poly_factor_degrees(spec.coeffs, p)
    if len(set(degs)) != 1:
        raise InconsistentSpec(
            f"factor degrees of f mod {p} are {degs}; spec is not Galois")
    d = degs[0]
    for c in spec.classes:
        if c.element_order == d:
            return FrobeniusResult(c.label)
    raise InconsistentSpec(f"no class with element order {d}")


def classify_batch(spec: GaloisSpec, primes) -> np.ndarray:
    """Class index (position in spec.classes) per prime; -1 for ramified.

    Vectorized; must agree with frobenius_class prime by prime.
    """
    ps = np.asarray(primes, dtype=np.int64)
    out = np.full(ps.shape, -1, dtype=np.int64)
    if spec.kind == ABELIAN:
        D = spec.modulus
        if D == 1:
            out[:] = 0
            return out
        lookup = np.full(D, -1, dtype=np.int64)
        for idx, c in enumerate(spec.classes):
            for r in c.coset:
                lookup[r % D] = idx
        unram = np.array([D % int(p) != 0 for p in ps])
        out[unram] = lookup[ps[unram] % D]
        return out
    ram = spec.ramified_modulus
    unram = np.array([ram % int(p) != 0 for p in ps])
    orders = _frobenius_orders_batch(spec.coeffs, ps[unram])
    order_to_idx = {c.element_order: i for i, c in enumerate(spec.classes)}
    mapped = np.array([order_to_idx.get(int(d), -2) for d in orders])
    if (mapped == -2).any():
        bad = ps[unram][mapped == -2][0]
        raise InconsistentSpec(f"unmatched Frobenius order at p={bad}")
    out[unram] = mapped
    return out


def _batch_mulmod(a, b, fmods, ps):
    """Row-wise product of degree<n polys a, b modulo (f, p).  a, b are
    (N, n) int64; fmods is (N, n) holding the low coefficients of monic f."""
    n = a.shape[1]
    prod = np.zeros((a.shape[0], 2 * n - 1), dtype=np.int64)
    for i in range(n):
        prod[:, i:i + n] += a[:, i:i + 1] * b
        prod %= ps[:, None]
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[:, k].copy()
        prod[:, k - n:k] -= c[:, None] * fmods
        prod[:, k] = 0
        prod %= ps[:, None]
    return prod[:, :n]


def _frobenius_orders_batch(coeffs, ps):
    """Order of Frobenius (= common irreducible factor degree of f mod p)
    for each unramified prime, computed as the least d with x^(p^d) = x."""
    ps = np.asarray(ps, dtype=np.int64)
    N = len(ps)
    n = len(coeffs) - 1
    if N == 0:
        return np.zeros(0, dtype=np.int64)
    fl = np.array(coeffs[:-1], dtype=np.int64)[None, :] % ps[:, None]
    # x^p mod (f, p) by a shared square-and-multiply ladder
    result = np.zeros((N, n), dtype=np.int64)
    result[:, 0] = 1
    base = np.zeros((N, n), dtype=np.int64)
    base[:, min(1, n - 1)] = 1
    e = ps.copy()
    while (e > 0).any():
        odd = (e & 1) == 1
        if odd.any():
            result[odd] = _batch_mulmod(result[odd], base[odd],
                                        fl[odd], ps[odd])
        e >>= 1
        if (e > 0).any():
            base = _batch_mulmod(base, base, fl, ps)
    pi = result  # x^p mod (f, p)
    x_poly = np.zeros((N, n), dtype=np.int64)
    x_poly[:, 1] = 1
    orders = np.zeros(N, dtype=np.int64)
    cur = pi.copy()
    remaining = np.arange(N)
    for d in range(1, n + 1):
        fixed = (cur[remaining] == x_poly[remaining]).all(axis=1)
        orders[remaining[fixed]] = d
        remaining = remaining[~fixed]
        if len(remaining) == 0:
            break
        # cur <- cur composed with pi  (x^(p^(d+1)))
        sub = _compose_batch(cur[remaining], pi[remaining],
                             fl[remaining], ps[remaining])
        cur[remaining] = sub
    if len(remaining):
        raise InconsistentSpec("Frobenius order exceeds deg f")
    return orders


def _compose_batch(outer, inner, fmods, ps):
    """Evaluate outer(inner) mod (f, p), row-wise Horner."""
    n = outer.shape[1]
    acc = np.zeros_like(outer)
    acc[:, 0] = outer[:, n - 1]
    for j in range(n - 2, -1, -1):
        acc = _batch_mulmod(acc, inner, fmods, ps)
        acc[:, 0] = (acc[:, 0] + outer[:, j]) % ps
    return acc


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_spec(spec: GaloisSpec) -> ValidationReport:
    rep = ValidationReport()
    D = spec.modulus
    if D < 1:
        rep.add("InvalidModulus", f"modulus {D} < 1")
        return rep
    units = set(_units(D))
    for c in spec.classes:
        bad = set(c.coset) - units
        if bad:
            rep.add("InvalidCoset",
                    f"class {c.label}: {sorted(bad)} not units mod {D}")
    if spec.kind == ABELIAN:
        seen = []
        for c in spec.classes:
            seen.extend(c.coset)
        if sorted(seen) != sorted(units):
            rep.add("CosetsNotPartition",
                    f"cosets do not partition the units mod {D}")
        sizes = {len(c.coset) for c in spec.classes}
        if len(sizes) > 1:
            rep.add("UnequalCosets", "coset sizes differ")
        return rep
    # polynomial kind
    f = spec.coeffs
    if f is None or len(f) < 2:
        rep.add("MissingPolynomial", "polynomial spec without coefficients")
        return rep
    if f[-1] != 1:
        rep.add("NotMonic", "defining polynomial must be monic")
    G = spec.group_order or 0
    if sum(c.class_size for c in spec.classes) != G:
        rep.add("ClassSizeSum", "class sizes do not sum to the group order")
    if len(f) - 1 != G:
        rep.add("DegreeMismatch", "deg f must equal the group order")
    orders = [c.element_order for c in spec.classes]
    if len(set(orders)) != len(orders):
        rep.add("UnidentifiableClasses",
                "two classes share an element order; classification by "
                "factor degree cannot distinguish them")
    for c in spec.classes:
        if G and G % c.element_order != 0:
            rep.add("OrderDividesGroup",
                    f"class {c.label}: order {c.element_order} does not "
                    f"divide |G|={G}")
    disc = poly_discriminant(f)
    if disc == 0:
        rep.add("SquarefulPolynomial", "discriminant of f is zero")
        return rep
    d = D
    while d > 1:
        p = _least_factor(d)
        if disc % p != 0:
            rep.add("ModulusRamification",
                    f"prime {p} divides the modulus but not disc(f)")
        while d % p == 0:
            d //= p
    if len(f) > 2 and _has_rational_root(f):
        rep.add("Reducible", "polynomial has a rational root")
    if rep.ok:
        _check_galois_shape(spec, rep)
    return rep


def _least_factor(n):
    i = 2
    while i * i <= n:
        if n % i == 0:
            return i
        i += 1
    return n


def _has_rational_root(f):
    a0 = f[0]
    if a0 == 0:
        return True
    cands = set()
    for t in range(1, int(math.isqrt(abs(a0))) + 1):
        if a0 % t == 0:
            cands.update({t, -t, a0 // t, -(a0 // t)})
    return any(sum(c * r**i for i, c in enumerate(f)) == 0 for r in cands)


def _check_galois_shape(spec, rep, n_primes=25):
    """Factor f mod the first few unramified primes; a Galois polynomial
    has all factor degrees equal, with the degree among the class orders."""
    orders = {c.element_order for c in spec.classes}
    tested = 0
    p = 1
    while tested < n_primes:
        p = _next_prime(p)
        if spec.ramified_modulus % p == 0:
            continue
        degs = poly_factor_degrees(spec.coeffs, p)
        if len(set(degs)) != 1:
            rep.add("NotGalois", f"unequal factor degrees mod {p}: {degs}")
            return
        if degs[0] not in orders:
            rep.add("MissingClass",
                    f"factor degree {degs[0]} mod {p} matches no class")
            return
        tested += 1


def _next_prime(n):
    n += 1
    while True:
        if n > 1 and all(n % i for i in range(2, int(math.isqrt(n)) + 1)):
            return n
        n += 1


# ---------------------------------------------------------------------------
# serialization and built-ins
# ---------------------------------------------------------------------------

def spec_to_json(spec: GaloisSpec) -> dict:
    doc = {"kind": spec.kind, "modulus": spec.modulus,
           "classes": [{"label": c.label, "coset": sorted(c.coset),
                        "size": c.class_size, "order": c.element_order}
                       for c in spec.classes]}
    if spec.kind == POLYNOMIAL:
        doc["coeffs"] = list(spec.coeffs)
        doc["group_order"] = spec.group_order
    return doc


def spec_from_json(doc) -> GaloisSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    classes = tuple(
        ClassSpec(label=c["label"], coset=frozenset(c["coset"]),
                  class_size=c.get("size", 1),
                  element_order=c.get("order", 1))
        for c in doc["classes"])
    if doc["kind"] == ABELIAN:
        return GaloisSpec(ABELIAN, int(doc["modulus"]), classes)
    return GaloisSpec(POLYNOMIAL, int(doc["modulus"]), classes,
                      coeffs=tuple(doc["coeffs"]),
                      group_order=int(doc["group_order"]))


def builtin_spec(name: str) -> GaloisSpec:
    if name == "trivial":
        return GaloisSpec(ABELIAN, 1,
                          (ClassSpec("e", frozenset({0})),))
    if name == "gaussian":
        return GaloisSpec(ABELIAN, 4,
                          (ClassSpec("e", frozenset({1})),
                           ClassSpec("c", frozenset({3}), element_order=2)))
    if name == "s3-cbrt2":
        return GaloisSpec(
            POLYNOMIAL, 3,
            (ClassSpec("1", frozenset({1}), class_size=1, element_order=1),
             ClassSpec("2", frozenset({2}), class_size=3, element_order=2),
             ClassSpec("3", frozenset({1}), class_size=2, element_order=3)),
            coeffs=(108, 0, 0, 0, 0, 0, 1),
            group_order=6)
    raise KeyError(f"unknown built-in spec {name!r}")


BUILTIN_NAMES = ("trivial", "gaussian", "s3-cbrt2")
