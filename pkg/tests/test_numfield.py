"""Number field arithmetic, valuations, and irreducibility certification."""

from fractions import Fraction

import pytest

from pcfcert.certificates import Unsupported, Verdict
from pcfcert.numfield import (
    NFElem,
    NotIntegral,
    Reducible,
    Valuation,
    irreducibility_certificate,
    is_unit,
    nf_new,
    nf_norm,
    nf_trace,
    primes_above,
    reduce_mod_prime,
    valuation,
)
from pcfcert.polyring import Poly, ZZ


def field(coeffs):
    return nf_new(Poly.from_ints(ZZ, coeffs))


class TestElements:
    def test_gen_satisfies_g(self):
        K = field([1, 1, 2, 1])
        c = K.gen()
        assert (c**3 + K.from_int(2) * c**2 + c + K.one).is_zero

    def test_inverse(self):
        K = field([1, 0, 1])
        c = K.gen()
        assert (c * c.inverse()) == K.one
        x = c + K.from_int(3)
        assert (x * x.inverse()) == K.one

    def test_rational_normalization(self):
        K = field([1, 0, 1])
        x = K.from_rational(Fraction(6, 4))
        assert x.den == 2 and list(x.num.coeffs) == [3]

    def test_pow_negative(self):
        K = field([1, 0, 1])
        c = K.gen()
        assert c**-2 == (c * c).inverse()


class TestNormTrace:
    def test_norm_of_generator(self):
        # norm(c0) = (-1)^deg * g(0)
        K = field([1, 1, 2, 1])
        assert nf_norm(K.gen()) == -1

    def test_norm_multiplicative(self):
        K = field([1, 1, 2, 1])
        x = K.gen() + K.from_int(2)
        y = K.gen() ** 2 - K.one
        assert nf_norm(x * y) == nf_norm(x) * nf_norm(y)

    def test_trace_linear(self):
        # trace(c0) = -(second-highest coefficient)
        K = field([7, 5, -3, 1])
        assert nf_trace(K.gen()) == 3
        assert nf_trace(K.from_int(4)) == 12

    def test_quadratic_norms(self):
        K = field([1, 0, 1])  # Q(i)
        c = K.gen()
        assert nf_norm(c - K.one) == 2  # |i - 1|^2
        assert nf_norm(K.from_int(3)) == 9

    def test_is_unit(self):
        K = field([1, 1, 2, 1])
        assert is_unit(K.gen())
        assert not is_unit(K.from_int(2))
        with pytest.raises(NotIntegral):
            is_unit(K.from_rational(Fraction(1, 2)))


class TestIrreducibility:
    def test_linear_trivial(self):
        cert = irreducibility_certificate(Poly.from_ints(ZZ, [5, 1]))
        assert cert.verdict is Verdict.VERIFIED

    def test_integer_root_refutes(self):
        cert = irreducibility_certificate(Poly.from_ints(ZZ, [-2, 1, 1]))  # (x-1)(x+2)
        assert cert.verdict is Verdict.REFUTED

    def test_mod_p_witness(self):
        cert = irreducibility_certificate(Poly.from_ints(ZZ, [1, 1, 2, 1]))
        assert cert.verdict is Verdict.VERIFIED

    def test_rootless_product_refuted(self):
        # (x^2+1)(x^2+2): no rational roots, reducible
        g = Poly.from_ints(ZZ, [2, 0, 3, 0, 1])
        cert = irreducibility_certificate(g)
        assert cert.verdict is Verdict.REFUTED

    def test_cyclotomic_style_verified(self):
        cert = irreducibility_certificate(Poly.from_ints(ZZ, [3, 0, 3, 0, 1]))
        assert cert.verdict is Verdict.VERIFIED

    def test_reducible_field_rejected(self):
        with pytest.raises(Reducible):
            field([-2, 1, 1])


class TestPrimes:
    def test_backend_a_inert(self):
        K = field([1, 1, 2, 1])  # disc -23
        (P,) = primes_above(K, 2)
        assert P.backend == "A" and P.residue_degree == 3

    def test_backend_a_split(self):
        K = field([1, 0, 1])
        primes = primes_above(K, 5)  # 5 splits in Q(i)
        assert [P.residue_degree for P in primes] == [1, 1]

    def test_backend_b_eisenstein(self):
        K = field([3, 0, 3, 0, 1])
        (P,) = primes_above(K, 3)
        assert P.backend == "B" and P.ramification == 4

    def test_backend_b_shifted(self):
        K = field([1, 0, 1])  # 2 ramifies in Q(i), g not Eisenstein at 2
        (P,) = primes_above(K, 2)
        assert P.backend == "B" and P.gen_shift == 1

    def test_unsupported(self):
        K = field([3, 0, 1])  # 2 | disc, no Eisenstein shift
        with pytest.raises(Unsupported):
            primes_above(K, 2)


class TestValuation:
    def test_rational_prime_valuations(self):
        K = field([1, 1, 2, 1])
        (P,) = primes_above(K, 2)
        assert valuation(K.from_int(2), P) == Valuation.of(1)
        assert valuation(K.gen(), P) == Valuation.of(0)
        assert valuation(K.from_int(12), P) == Valuation.of(2)

    def test_zero_is_infinite(self):
        K = field([1, 0, 1])
        (P,) = primes_above(K, 2)
        assert valuation(K.zero, P).infinite

    def test_ramified_valuations(self):
        K = field([3, 0, 3, 0, 1])
        (P,) = primes_above(K, 3)
        assert valuation(K.gen(), P) == Valuation.of(1)
        assert valuation(K.from_int(3), P) == Valuation.of(4)

    def test_additivity(self):
        K = field([1, 1, 2, 1])
        (P,) = primes_above(K, 2)
        x = K.from_int(2) * K.gen()
        y = K.from_int(4) * (K.gen() + K.one)
        vx = valuation(x, P).value
        vy = valuation(y, P).value
        assert valuation(x * y, P).value == vx + vy

    def test_denominator_shifts_valuation(self):
        K = field([1, 0, 1])
        (P,) = primes_above(K, 2)
        half = K.from_rational(Fraction(1, 2))
        assert valuation(half, P) == Valuation.of(-2)

    def test_precision_cutoff_is_lower_bound(self):
        K = field([1, 1, 2, 1])
        (P,) = primes_above(K, 2)  # default T = 3
        v = valuation(K.from_int(8), P)
        assert not v.exact and v.value == 3


class TestResidue:
    def test_reduction_is_homomorphic(self):
        K = field([1, 1, 2, 1])
        P = primes_above(K, 5)[0]
        x = K.gen() + K.from_int(2)
        y = K.gen() ** 2 - K.one
        F = reduce_mod_prime(x, P), reduce_mod_prime(y, P)
        from pcfcert.numfield import residue_field

        R = residue_field(P)
        assert reduce_mod_prime(x * y, P) == R.mul(F[0], F[1])
        assert reduce_mod_prime(x + y, P) == R.add(F[0], F[1])
