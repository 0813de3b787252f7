"""Deterministic JSON encoding for the artifact's domain objects.

Shared polynomial format: {"var": name, "coeffs": [...]} in ascending degree.
Integers are emitted as decimal strings (JSON numbers would silently lose
precision in some consumers); rationals as {"num": ..., "den": ...} with a
positive denominator.  All encoders are pure functions of their input, so
identical inputs yield byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .certificates import Certificate
from .numfield import NFElem, NumberField, PrimeAboveD
from .polyring import Poly


def _coeff_json(c):
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Fraction):
        return {"num": str(c.numerator), "den": str(c.denominator)}
    if isinstance(c, NFElem):
        return element_json(c)
    if isinstance(c, tuple):  # cyclotomic integer in the power basis of zeta
        return [str(x) for x in c]
    raise TypeError(f"no JSON encoding for coefficient {c!r}")


def poly_json(p: Poly, var: str = "x") -> dict:
    return {"var": var, "coeffs": [_coeff_json(c) for c in p.coeffs]}


def cyc_poly_json(p: Poly, var: str = "c") -> dict:
    return {"d": p.ring.d, "var": var, "coeffs": [[str(x) for x in c] for c in p.coeffs]}


def element_json(x: NFElem) -> dict:
    return {"num": poly_json(x.num, "c"), "den": str(x.den)}


def field_json(fieldK: NumberField) -> dict:
    return {"g": poly_json(fieldK.g, "c")}


def prime_json(P: PrimeAboveD) -> dict:
    out = {"p": str(P.p), "backend": P.backend, "T": P.T}
    if P.backend == "A":
        out["factor"] = poly_json(P.lifted_factor, "c")
        out["residue_degree"] = P.residue_degree
    else:
        out["ramification"] = P.ramification
        out["gen_shift"] = P.gen_shift
    return out


def factor_product_json(product) -> dict:
    return {
        "d": product.d,
        "n": product.n,
        "k": product.k,
        "field": field_json(product.field),
        "factors": [
            {"label": e.label, "poly": poly_json(e.poly), "exp": e.exp}
            for e in product.entries
        ],
        "count": product.distinct_count,
    }


def _witness_json(value):
    if isinstance(value, dict):
        return {k: _witness_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_witness_json(v) for v in value]
    if isinstance(value, int) and not isinstance(value, bool):
        return value if abs(value) < 2**53 else str(value)
    return value


def certificate_json(cert: Certificate) -> dict:
    return {
        "claim": cert.claim,
        "verdict": cert.verdict.value,
        "witnesses": [_witness_json(w) for w in cert.witnesses],
        "diagnostics": list(cert.diagnostics),
        "taint": cert.taint,
    }


def ideal_audit_json(audit) -> dict:
    return {
        "i": audit.i,
        "A_emp": audit.a_emp,
        "A_printed_div": audit.a_printed_div,
        "A_printed_nondiv": audit.a_printed_nondiv,
        "branch_match": audit.branch_match,
        "norm_identity": audit.norm_identity,
        "unit_verified": audit.unit_verified,
        "details": [list(row) for row in audit.details],
    }


def disc_trace_json(trace) -> dict:
    return {
        "k": trace.k,
        "x0": element_json(trace.x0),
        "oracle_checked": list(trace.oracle_checked),
        "steps": [
            {
                "k": s.k,
                "sign": s.sign,
                "d_exponent": s.d_exponent,
                "critical_factor": element_json(s.critical_factor),
                "value": element_json(s.value),
            }
            for s in trace.steps
        ],
    }


def dumps(obj) -> str:
    """Stable rendering: fixed separators, preserved key order, no NaN."""
    return json.dumps(obj, indent=2, allow_nan=False)
