"""Exact-arithmetic certificates for iterates of x^d + c at PCF parameters."""

__version__ = "0.1.0"

from .certificates import Certificate, HypothesisUnmet, Unsupported, Verdict
from .factoring import (
    f_factor,
    f_irreducibility_certificate,
    iterate,
    iterate_factorization,
    stability_certificate,
    structural_form,
    verify_factorization,
)
from .numfield import NFElem, NumberField, nf_new, primes_above, valuation
from .obstructions import (
    disc_iterate,
    ideal_power_audit,
    nonabelian_certificate,
    nonsquare_certificate,
    relative_norm,
)
from .orbits import exact_type, gleason, misiurewicz, orbit_poly
from .polyring import Poly, QQ, ZZ

__all__ = [
    "Certificate",
    "HypothesisUnmet",
    "NFElem",
    "NumberField",
    "Poly",
    "QQ",
    "Unsupported",
    "Verdict",
    "ZZ",
    "disc_iterate",
    "exact_type",
    "f_factor",
    "f_irreducibility_certificate",
    "gleason",
    "ideal_power_audit",
    "iterate",
    "misiurewicz",
    "nf_new",
    "nonabelian_certificate",
    "nonsquare_certificate",
    "orbit_poly",
    "primes_above",
    "iterate_factorization",
    "relative_norm",
    "stability_certificate",
    "structural_form",
    "valuation",
    "verify_factorization",
]
