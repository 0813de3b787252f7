"""Arithmetic in K = Q[c]/(g) with primes above a rational prime.

A NumberField doubles as a coefficient-ring adapter for Poly, so polynomials
over K (iterates of x^d + c, factors of the closed-form factorization) reuse
the generic dense-polynomial machinery.

Valuations at a prime above p come from one of two backends:

* backend A (p does not divide disc g): the completion is unramified and
  p itself is a uniformizer; elements are reduced modulo a Hensel-lifted
  factor of g to precision p^T and the valuation read off coefficient-wise.
* backend B (g Eisenstein at p): the prime is totally ramified with the
  class of c as uniformizer, and valuations are exact by the Newton-polygon
  formula v(sum h_i c^i) = min_i (e * v_p(h_i) + i).

Both backends compute against Z[c0].  This is sound: for A because p not
dividing disc(g) forces p coprime to the index [O_K : Z[c0]], for B because
an Eisenstein g makes Z[c0] maximal at p.  Anything else is Unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .certificates import Certificate, Unsupported, Verdict
from .finitefield import (
    ExtField,
    PrimeField,
    fp_factor,
    hensel_lift,
    is_irreducible,
)
from .polyring import (
    Poly,
    QQ,
    Ring,
    ZZ,
    content,
    discriminant,
    gcd_int_poly,
    resultant,
    xgcd_poly,
)


class Reducible(Exception):
    """The defining polynomial was refuted as irreducible."""


class NotIntegral(Exception):
    """Operation requires an algebraic integer (denominator 1)."""


class PrecisionExceeded(Exception):
    """Valuation query undecidable at the backend's precision."""


DEFAULT_PRECISION = 3

SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97,
)


@dataclass(frozen=True)
class Valuation:
    """Valuation of a nonzero element, possibly only a lower bound.

    ``exact`` False means the true valuation is >= ``value`` (precision
    cutoff).  ``infinite`` marks the zero element.
    """

    value: int = 0
    exact: bool = True
    infinite: bool = False

    @staticmethod
    def of(v: int) -> "Valuation":
        return Valuation(value=v)

    @staticmethod
    def at_least(v: int) -> "Valuation":
        return Valuation(value=v, exact=False)

    @staticmethod
    def infinity() -> "Valuation":
        return Valuation(infinite=True)

    def require_exact(self) -> int:
        if self.infinite:
            raise PrecisionExceeded("valuation of zero is infinite")
        if not self.exact:
            raise PrecisionExceeded(f"valuation only known to be >= {self.value}")
        return self.value

    def __str__(self):
        if self.infinite:
            return "oo"
        return str(self.value) if self.exact else f">={self.value}"


class NFElem:
    """Element num(c0)/den with num reduced mod g, den a positive integer."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "NumberField", num: Poly, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        num = num.divmod(field.g)[1]
        if num.is_zero:
            den = 1
        else:
            shared = gcd(content(num), den)
            if shared > 1:
                num = Poly(ZZ, tuple(x // shared for x in num.coeffs))
                den //= shared
        self.field = field
        self.num = num
        self.den = den

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def __add__(self, other: "NFElem") -> "NFElem":
        return NFElem(
            self.field,
            self.num.scale(other.den) + other.num.scale(self.den),
            self.den * other.den,
        )

    def __neg__(self) -> "NFElem":
        return NFElem(self.field, -self.num, self.den)

    def __sub__(self, other: "NFElem") -> "NFElem":
        return self + (-other)

    def __mul__(self, other: "NFElem") -> "NFElem":
        return NFElem(self.field, self.num * other.num, self.den * other.den)

    def inverse(self) -> "NFElem":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        numq = self.num.map_coeffs(QQ, Fraction)
        gq = self.field.g.map_coeffs(QQ, Fraction)
        one, s, _ = xgcd_poly(numq, gq)
        if one.degree != 0:
            raise ZeroDivisionError("element not invertible (reducible modulus)")
        inv = s.scale(QQ.div(QQ.one, one.constant_term))
        lcm_den = 1
        for cf in inv.coeffs:
            lcm_den = lcm_den * cf.denominator // gcd(lcm_den, cf.denominator)
        numz = Poly.make(ZZ, [int(cf * lcm_den) for cf in inv.coeffs])
        return NFElem(self.field, numz.scale(self.den), lcm_den)

    def __truediv__(self, other: "NFElem") -> "NFElem":
        return self * other.inverse()

    def __pow__(self, n: int) -> "NFElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NFElem)
            and self.field is other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((id(self.field), self.num.coeffs, self.den))

    def __str__(self):
        body = self.num.to_string("c")
        if self.den == 1:
            return body if self.num.degree <= 0 else f"({body})"
        return f"({body})/{self.den}"

    def __repr__(self):
        return f"NFElem({self})"


class NumberField(Ring):
    """K = Q[c]/(g); also the Ring adapter for polynomials over K."""

    is_field = True

    def __init__(self, g: Poly, assume_irreducible: bool = False):
        if not g.is_monic() or g.degree < 1:
            raise ValueError("defining polynomial must be monic and nonconstant")
        self.g = g
        self.degree = g.degree
        self.disc_g = discriminant(g) if g.degree >= 1 else 1
        if g.degree == 1:
            self.irreducibility = Certificate(
                claim=f"irreducible({g.to_string('c')})", verdict=Verdict.VERIFIED
            )
            self.irreducibility.witness("linear", degree=1)
        else:
            self.irreducibility = irreducibility_certificate(g)
        if self.irreducibility.verdict is Verdict.REFUTED:
            raise Reducible(
                f"{g.to_string('c')} is reducible: {self.irreducibility.witnesses}"
            )
        self.assumed = self.irreducibility.verdict is not Verdict.VERIFIED
        if self.assumed and not assume_irreducible:
            self.irreducibility.diagnose(
                "irreducibility not certified; field constructed AssumedByUser"
            )
        self.zero = NFElem(self, Poly.zero(ZZ))
        self.one = NFElem(self, Poly.one(ZZ))
        self._primes_cache: dict[tuple[int, int], tuple] = {}

    # Ring adapter interface
    def add(self, a: NFElem, b: NFElem) -> NFElem:
        return a + b

    def neg(self, a: NFElem) -> NFElem:
        return -a

    def mul(self, a: NFElem, b: NFElem) -> NFElem:
        return a * b

    def div(self, a: NFElem, b: NFElem) -> NFElem:
        return a / b

    def is_zero(self, a: NFElem) -> bool:
        return a.is_zero

    def from_int(self, n: int) -> NFElem:
        return NFElem(self, Poly.from_ints(ZZ, [n]))

    def coeff_repr(self, a: NFElem) -> str:
        return str(a)

    # field-specific constructors
    def gen(self) -> NFElem:
        """The class of c (a root of g)."""
        return NFElem(self, Poly.x(ZZ))

    def element(self, num_coeffs, den: int = 1) -> NFElem:
        return NFElem(self, Poly.from_ints(ZZ, list(num_coeffs)), den)

    def from_rational(self, q: Fraction) -> NFElem:
        return NFElem(self, Poly.from_ints(ZZ, [q.numerator]), q.denominator)

    def __repr__(self):
        return f"NumberField({self.g.to_string('c')})"


def nf_new(g: Poly, assume_irreducible: bool = False) -> NumberField:
    """Construct K = Q[c]/(g), certifying irreducibility of g if possible."""
    return NumberField(g, assume_irreducible=assume_irreducible)


# -- irreducibility certification over Q ------------------------------------


def _divisors(n: int, limit: int = 10**6) -> list[int] | None:
    """All positive divisors of |n|, or None when factoring is too expensive."""
    n = abs(n)
    if n == 0:
        return None
    factors = {}
    m = n
    p = 2
    while p <= limit and p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        if m > limit * limit:
            return None
        factors[m] = factors.get(m, 0) + 1
    divs = [1]
    for prime, e in factors.items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _integer_roots(g: Poly) -> list[int]:
    """Integer roots of a monic g over Z (all rational roots are integers)."""
    if g.constant_term == 0:
        return [0]
    divs = _divisors(g.constant_term)
    if divs is None:
        # fall back to small candidates only
        divs = list(range(1, 1000))
    roots = []
    for d in divs:
        for r in (d, -d):
            if g(r) == 0:
                roots.append(r)
    return sorted(roots)


def _subset_sums(degrees: list[int]) -> frozenset[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return frozenset(sums)


def _tiny_factor_search(g: Poly, p: int) -> Poly | None:
    """Bounded recombination search for a nontrivial factor of g over Z."""
    n = g.degree
    height = max(abs(c) for c in g.coeffs)
    bound = 2**n * (n + 1) * height  # coarse Mignotte-style coefficient bound
    T = 1
    while p**T <= 2 * bound:
        T += 1
    modulus = p**T
    fac = fp_factor(Poly.from_ints(PrimeField(p), list(g.coeffs)))
    if any(m > 1 for _, m in fac):
        return None  # p was supposed to be a good prime
    lifted = hensel_lift(g, fac, p, T).factors
    k = len(lifted)
    if k == 1:
        return None
    for mask in range(1, 2**k - 1):
        degsum = sum(lifted[i].degree for i in range(k) if mask >> i & 1)
        if degsum == 0 or degsum > n // 2:
            continue
        cand = Poly.one(ZZ)
        for i in range(k):
            if mask >> i & 1:
                cand = Poly.make(ZZ, [c % modulus for c in (cand * lifted[i]).coeffs])
        centered = Poly.make(
            ZZ, [c - modulus if c > modulus // 2 else c for c in cand.coeffs]
        )
        try:
            g.exact_div(centered)
            return centered
        except Exception:
            continue
    return None


def irreducibility_certificate(g: Poly, max_primes: int = 12) -> Certificate:
    """Certify, refute, or give up on irreducibility of monic g over Q.

    Certified: a single good prime with g irreducible mod p, or a factor
    degree subset-sum obstruction across several good primes.  Refuted: an
    integer root, a repeated factor, or a factor found by bounded modular
    recombination at tiny degree.
    """
    cert = Certificate(claim=f"irreducible({g.to_string('c')})", verdict=Verdict.INCONCLUSIVE)
    if not g.is_monic():
        raise ValueError("irreducibility certificate requires monic input")
    if g.degree == 1:
        cert.verdict = Verdict.VERIFIED
        cert.witness("linear", degree=1)
        return cert
    roots = _integer_roots(g)
    if roots:
        cert.verdict = Verdict.REFUTED
        cert.witness("rational-root", root=roots[0])
        return cert
    repeated = gcd_int_poly(g, g.derivative())
    if repeated.degree > 0:
        cert.verdict = Verdict.REFUTED
        cert.witness("repeated-factor", factor=repeated.to_string("c"))
        return cert
    disc = discriminant(g)
    possible = None
    used = []
    for p in SMALL_PRIMES:
        if len(used) >= max_primes:
            break
        if disc % p == 0:
            continue
        fac = fp_factor(Poly.from_ints(PrimeField(p), list(g.coeffs)))
        degrees = [f.degree for f, _ in fac]
        if len(degrees) == 1:
            cert.verdict = Verdict.VERIFIED
            cert.witness("irreducible-mod-p", p=p)
            return cert
        used.append((p, sorted(degrees)))
        sums = _subset_sums(degrees)
        possible = sums if possible is None else (possible & sums)
        if possible == frozenset({0, g.degree}):
            cert.verdict = Verdict.VERIFIED
            cert.witness(
                "degree-subset-sums",
                primes=[p_ for p_, _ in used],
                degree_patterns=[d for _, d in used],
            )
            return cert
    if g.degree <= 6 and used:
        found = _tiny_factor_search(g, used[0][0])
        if found is not None:
            cert.verdict = Verdict.REFUTED
            cert.witness("recombined-factor", factor=found.to_string("c"))
            return cert
        # exhaustive recombination found nothing: certified at tiny degree
        cert.verdict = Verdict.VERIFIED
        cert.witness("recombination-exhausted", p=used[0][0])
        return cert
    cert.diagnose("no single-prime or subset-sum witness found")
    return cert


# -- norms, traces, units ---------------------------------------------------


def nf_norm(x: NFElem) -> Fraction:
    """Norm of x, as resultant(g, num)/den^deg; N(c0) = (-1)^deg * g(0)."""
    K = x.field
    if x.is_zero:
        return Fraction(0)
    res = resultant(K.g, x.num)
    return Fraction(res, x.den**K.degree)


def nf_trace(x: NFElem) -> Fraction:
    """Trace of x via Newton power sums of the roots of g."""
    K = x.field
    n = K.degree
    a = [K.g.coeff(i) for i in range(n + 1)]  # monic: a[n] == 1
    power_sums = [Fraction(n)]
    for k in range(1, n):
        acc = Fraction(-k * a[n - k])
        for j in range(1, k):
            acc -= a[n - j] * power_sums[k - j]
        power_sums.append(acc)
    total = Fraction(0)
    for i in range(x.num.degree + 1):
        total += x.num.coeff(i) * power_sums[i] if i < n else 0
    return total / x.den


def is_unit(x: NFElem) -> bool:
    """True iff x is an algebraic unit; requires an integral element."""
    if not x.is_integral:
        raise NotIntegral("is_unit requires denominator 1")
    return abs(nf_norm(x)) == 1


# -- primes above a rational prime ------------------------------------------


@dataclass(frozen=True)
class PrimeAboveD:
    """A prime of O_K above p with a computable valuation backend."""

    field: NumberField
    p: int
    backend: str  # "A" (unramified, lifted factor) or "B" (Eisenstein)
    T: int
    lifted_factor: Poly | None = None  # backend A: monic, coeffs mod p^T
    residue_degree: int = 1
    ramification: int = 1
    gen_shift: int = 0  # backend B: uniformizer is c - gen_shift

    def __repr__(self):
        if self.backend == "A":
            return f"PrimeAboveD(p={self.p}, backend=A, f={self.residue_degree})"
        return f"PrimeAboveD(p={self.p}, backend=B, e={self.ramification})"


def is_eisenstein_at(g: Poly, p: int) -> bool:
    return (
        g.is_monic()
        and g.degree >= 1
        and all(g.coeff(i) % p == 0 for i in range(g.degree))
        and g.constant_term % (p * p) != 0
    )


def primes_above(field: NumberField, p: int, T: int = DEFAULT_PRECISION) -> list[PrimeAboveD]:
    """Primes of O_K above p, via backend A or B; Unsupported otherwise."""
    key = (p, T)
    if key in field._primes_cache:
        return list(field._primes_cache[key])
    g = field.g
    disc = field.disc_g
    if disc % p != 0:
        fac = fp_factor(Poly.from_ints(PrimeField(p), list(g.coeffs)))
        lifted = hensel_lift(g, fac, p, T)
        primes = [
            PrimeAboveD(
                field=field,
                p=p,
                backend="A",
                T=T,
                lifted_factor=G,
                residue_degree=G.degree,
            )
            for G in lifted.factors
        ]
    else:
        primes = None
        for s in range(p):
            shifted = g.compose(Poly.from_ints(ZZ, [s, 1]))
            if is_eisenstein_at(shifted, p):
                primes = [
                    PrimeAboveD(
                        field=field, p=p, backend="B", T=T,
                        ramification=g.degree, gen_shift=s,
                    )
                ]
                break
        if primes is None:
            raise Unsupported(
                f"p={p}: ramification undetermined (p | disc g and no shift of g "
                f"is Eisenstein at p)"
            )
    field._primes_cache[key] = tuple(primes)
    return primes


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: NFElem, P: PrimeAboveD) -> Valuation:
    """Valuation of x at P, normalized so v(p) = 1 (A) or v(p) = e (B)."""
    if x.field is not P.field:
        raise ValueError("element and prime belong to different fields")
    if x.is_zero:
        return Valuation.infinity()
    p = P.p
    if P.backend == "B":
        e = P.ramification
        num = x.num
        if P.gen_shift:
            num = num.compose(Poly.from_ints(ZZ, [P.gen_shift, 1]))
        best = None
        for i, h in enumerate(num.coeffs):
            if h == 0:
                continue
            v = e * _int_val(h, p) + i
            best = v if best is None else min(best, v)
        return Valuation.of(best - e * _int_val(x.den, p))
    # backend A
    modulus = p**P.T
    shift = _int_val(x.den, p)
    reduced = x.num.divmod(P.lifted_factor)[1]
    coeffs = [c % modulus for c in reduced.coeffs]
    if all(c == 0 for c in coeffs):
        return Valuation.at_least(P.T - shift)
    v = min(_int_val(c, p) for c in coeffs if c != 0)
    return Valuation.of(v - shift)


def residue_field(P: PrimeAboveD):
    """O_K/P as a PrimeField or ExtField."""
    Fp = PrimeField(P.p)
    if P.backend == "B" or P.residue_degree == 1:
        return Fp
    return ExtField(P.p, Poly.from_ints(Fp, list(P.lifted_factor.coeffs)))


def reduce_mod_prime(x: NFElem, P: PrimeAboveD):
    """Image of x in the residue field of P (x must be P-integral)."""
    if x.den % P.p == 0:
        raise ValueError("element has a pole at P")
    F = residue_field(P)
    den_inv = pow(x.den, -1, P.p)
    if P.backend == "B":
        return F.from_int(x.num(P.gen_shift) * den_inv)
    reduced = x.num.divmod(P.lifted_factor)[1]
    if isinstance(F, PrimeField):
        return F.from_int(reduced.coeff(0) * den_inv)
    img = Poly.from_ints(F.base, list(reduced.coeffs))
    img = img.divmod(F.modpoly)[1]
    coeffs = list(img.coeffs) + [0] * (F.degree - len(img.coeffs))
    return tuple(c * den_inv % P.p for c in coeffs)


def reduce_poly_mod_prime(poly: Poly, P: PrimeAboveD) -> Poly:
    """Coefficient-wise reduction of a polynomial over K into the residue field."""
    F = residue_field(P)
    return poly.map_coeffs(F, lambda c: reduce_mod_prime(c, P))
