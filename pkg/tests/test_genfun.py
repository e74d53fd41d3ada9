import math
import random
from fractions import Fraction

import numpy as np
import pytest

from chebcircle import galois, genfun, sieve
from chebcircle.errors import DomainError, UnsupportedInstantiation
from chebcircle.expsum import (IdealCharacter, QuadraticField, TRIVIAL_XI,
                               norm_composed)
from chebcircle.characters import kronecker_character, principal_character

PHI = (1 + math.sqrt(5)) / 2


def params_with_z(X, z):
    """SieveParams with an explicit z, choosing B to keep the linkage."""
    B = math.log(z) / math.log(math.log(X))
    return sieve.SieveParams(1.0, B, math.log(X) ** B)


def ctx_for(table, name, label, X, z=None):
    spec = galois.builtin_spec(name)
    cls = spec.class_by_label(label)
    params = (sieve.SieveParams.for_x(X) if z is None
              else params_with_z(X, z))
    return genfun.GenfunContext(table, X, params, spec, cls)


class TestEvalG:
    def test_trivial_at_zero(self, table_small):
        ctx = ctx_for(table_small, "trivial", "e", 10)
        want = sum(math.log(p) for p in (2, 3, 5, 7))
        assert genfun.eval_G(ctx, 0.0) == pytest.approx(want)

    def test_gaussian_identity_at_zero(self, table_small):
        ctx = ctx_for(table_small, "gaussian", "e", 30)
        want = sum(math.log(p) for p in (5, 13, 17, 29))
        assert genfun.eval_G(ctx, 0.0).real == pytest.approx(want)
        assert want == pytest.approx(10.37, abs=0.05)

    def test_integer_periodicity(self, table_small):
        ctx = ctx_for(table_small, "gaussian", "c", 100)
        for alpha in (Fraction(1, 3), Fraction(2, 7), 0.3):
            assert genfun.eval_G(ctx, alpha + 1) == pytest.approx(
                genfun.eval_G(ctx, alpha), abs=1e-9)

    def test_conjugate_symmetry(self, table_small):
        ctx = ctx_for(table_small, "s3-cbrt2", "2", 500)
        for alpha in (0.3, PHI % 1, 0.77):
            assert genfun.eval_G(ctx, -alpha) == pytest.approx(
                genfun.eval_G(ctx, alpha).conjugate(), abs=1e-10)


class TestEvalF:
    def test_chebyshev_psi(self, table_small):
        got = genfun.eval_F(None, TRIVIAL_XI, 10, 0.0, table_small)
        want = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
        assert got.real == pytest.approx(want)

    def test_gaussian_small_cutoff(self, table_small):
        got = genfun.eval_F(QuadraticField(-4), TRIVIAL_XI, 5, 0.0,
                            table_small)
        want = 2 * math.log(2) + 2 * math.log(5)
        assert got.real == pytest.approx(want)

    def test_integer_alpha(self, table_small):
        K = QuadraticField(-4)
        assert genfun.eval_F(K, TRIVIAL_XI, 100, Fraction(3), table_small) \
            == pytest.approx(genfun.eval_F(K, TRIVIAL_XI, 100, 0.0,
                                           table_small))

    def test_below_two(self, table_small):
        assert genfun.eval_F(None, TRIVIAL_XI, 1, 0.3, table_small) == 0j

    def test_gaussian_lattice_walk_oracle(self, table_small):
        # enumerate the prime elements of Z[i] directly: one associate per
        # prime (a > 0, b >= 0), then their powers, and aggregate by norm
        X = 10**4
        weights = {}
        limit = int(X**0.5) + 1
        for a in range(1, limit + 1):
            for b in range(0, limit + 1):
                n = a * a + b * b
                if n > X:
                    break
                prime = 2 <= n <= table_small.limit and \
                    table_small.is_prime(n)
                if b == 0:
                    # associates of a rational prime: prime iff inert
                    prime = a >= 2 and table_small.is_prime(a) and \
                        a % 4 == 3
                    n = a * a
                    if n > X or not prime:
                        continue
                if not prime:
                    continue
                w = math.log(n)
                pe = n
                while pe <= X:
                    weights[pe] = weights.get(pe, 0.0) + w
                    pe *= n
        norms, wts = genfun._prime_power_terms(QuadraticField(-4),
                                               table_small, X)
        got = {}
        for n, w in zip(norms, wts):
            got[int(n)] = got.get(int(n), 0.0) + float(w)
        assert set(got) == set(weights)
        for n in got:
            assert got[n] == pytest.approx(weights[n], rel=1e-12)


class TestSharpApproximants:
    def test_empty_sieve(self, table_small):
        ctx = ctx_for(table_small, "trivial", "e", 3, z=math.log(3))
        assert genfun.eval_G_sharp(ctx, 0.0).real == pytest.approx(3)

    def test_odd_numbers_only(self, table_small):
        ctx = ctx_for(table_small, "trivial", "e", 10, z=2.0)
        assert genfun.eval_G_sharp(ctx, 0.0).real == pytest.approx(10)

    def test_gaussian_congruence_weight(self, table_small):
        ctx = ctx_for(table_small, "gaussian", "e", 10, z=2.0)
        assert genfun.eval_G_sharp(ctx, 0.0).real == pytest.approx(6)

    def test_f_sharp_norm_residues(self, table_small):
        got = genfun.eval_F_sharp(QuadraticField(-4), TRIVIAL_XI, 10, 2.0,
                                  0.0)
        assert got.real == pytest.approx(12)

    def test_f_sharp_other_character_vanishes(self):
        xi = IdealCharacter("other")
        assert genfun.eval_F_sharp(QuadraticField(-4), xi, 100, 2.0, 0.3) \
            == 0j

    def test_flat_is_exact_difference(self, table_small):
        ctx = ctx_for(table_small, "gaussian", "e", 1000)
        for alpha in (0.0, 0.37, PHI % 1):
            assert genfun.eval_G_flat(ctx, alpha) == \
                genfun.eval_G(ctx, alpha) - genfun.eval_G_sharp(ctx, alpha)

    def test_flat_small_at_zero(self, table_million):
        # full-mass cancellation at the central point needs z < sqrt(X)
        ctx = ctx_for(table_million, "trivial", "e", 10**5,
                      z=math.log(10**5) ** 2)
        assert abs(genfun.eval_G_flat(ctx, 0.0)) / 10**5 < 0.1


class TestRelationResidual:
    def test_field_route_requires_gaussian_identity(self, table_small):
        ctx = ctx_for(table_small, "gaussian", "c", 100)
        with pytest.raises(UnsupportedInstantiation):
            genfun.gf_relation_residual(ctx, 0.3, via="field")

    def test_dirichlet_route_requires_abelian(self, table_small):
        ctx = ctx_for(table_small, "s3-cbrt2", "1", 100)
        with pytest.raises(UnsupportedInstantiation):
            genfun.gf_relation_residual(ctx, 0.3, via="dirichlet")

    def test_sqrt_x_bound_both_routes(self, table_small):
        rng = random.Random(23)
        X = 10**4
        bound = 10 * math.sqrt(X)
        ctx_e = ctx_for(table_small, "gaussian", "e", X)
        ctx_c = ctx_for(table_small, "gaussian", "c", X)
        for _ in range(64):
            alpha = rng.random()
            assert genfun.gf_relation_residual(ctx_e, alpha, via="field") \
                <= bound
            assert genfun.gf_relation_residual(ctx_c, alpha,
                                               via="dirichlet") <= bound

    def test_trivial_spec_dirichlet_route(self, table_small):
        ctx = ctx_for(table_small, "trivial", "e", 10**4)
        # G has primes only, F has prime powers: difference is O(sqrt X)
        assert genfun.gf_relation_residual(ctx, 0.0) <= 10 * math.sqrt(10**4)


class TestMinorArcScan:
    def test_empty(self, table_small):
        ctx = ctx_for(table_small, "trivial", "e", 100)
        assert genfun.minor_arc_scan(ctx, []) == []

    def test_rational_grid_three_decades(self, table_million):
        rats = [a / q for q in range(3, 21, 4) for a in range(1, 5)
                if math.gcd(a, q) == 1][:16]
        maxima = {}
        for X in (10**4, 10**5, 10**6):
            ctx = ctx_for(table_million, "trivial", "e", X)
            rows = genfun.minor_arc_scan(ctx, rats, qmax=100)
            assert all(r.q <= 20 for r in rows)
            maxima[X] = max(r.flat_ratio for r in rows)
        # major-arc points decay from 1e4 to 1e5; 1e6 stays below the start
        assert maxima[10**5] < maxima[10**4]
        assert maxima[10**6] < maxima[10**4]


class TestFlatDecay:
    def test_f_flat_log_normalized_non_increasing(self, table_million):
        K = QuadraticField(-4)
        grid = [(j * PHI) % 1.0 for j in range(1, 17)]
        vals = []
        for X in (10**4, 10**5, 10**6):
            z = math.log(X) ** 4
            vals.append(max(
                abs(genfun.eval_F_flat(K, TRIVIAL_XI, X, z, a,
                                       table_million)) * math.log(X) / X
                for a in grid))
        assert vals[0] >= vals[1] >= vals[2]


class TestFAtZero:
    def test_trivial_character(self, table_small):
        K = QuadraticField(-4)
        zr = genfun.F_at_zero_ratio(K, TRIVIAL_XI, 10**4, table_small)
        assert zr.expected_r == 1
        assert zr.ratio == pytest.approx(1.0, abs=0.05)

    def test_norm_composed_mod4_is_trivial_on_ideals(self, table_small):
        # every coprime norm in Z[i] is 1 mod 4, so the twist is invisible
        K = QuadraticField(-4)
        xi = norm_composed(kronecker_character(-4))
        zr = genfun.F_at_zero_ratio(K, xi, 10**4, table_small)
        assert zr.expected_r == 1
        assert zr.ratio == pytest.approx(1.0, abs=0.05)

    def test_genuinely_twisted_rational_sum_cancels(self, table_small):
        xi = norm_composed(kronecker_character(-4))
        zr = genfun.F_at_zero_ratio(None, xi, 10**4, table_small)
        assert zr.expected_r == 0
        assert abs(zr.ratio) <= 0.02

    def test_tiny_cutoff(self, table_small):
        zr = genfun.F_at_zero_ratio(QuadraticField(-4), TRIVIAL_XI, 1,
                                    table_small)
        assert zr.ratio == 0.0


def test_phase_array_exact_roots():
    ns = np.arange(1, 8, dtype=np.int64)
    got = genfun.phase_array(ns, Fraction(2, 7))
    want = np.exp(2j * np.pi * (2 * ns % 7) / 7.0)
    assert np.allclose(got, want, atol=1e-12)
