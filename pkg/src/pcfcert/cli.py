"""Command-line front end: parameters, factorizations, certificates.

Exit codes: 0 success/Verified, 1 Refuted, 2 Inconclusive or a case
hypothesis unmet, 3 usage or input error, 4 no applicable backend or
degree budget exceeded.  With --format json the output is byte-identical
across runs for identical arguments and seed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import jsonio
from .certificates import HypothesisUnmet, Unsupported, Verdict
from .factoring import (
    f_irreducibility_certificate,
    factor_product_certificates,
    iterate_factorization,
    stability_certificate,
    verify_factorization,
)
from .numfield import NFElem, Reducible, nf_new
from .obstructions import (
    CASES,
    OracleMismatch,
    disc_iterate,
    ideal_power_audit,
    nonabelian_certificate,
)
from .orbits import (
    DEFAULT_DEGREE_BUDGET,
    BoundExceeded,
    exact_type,
    gleason,
    misiurewicz,
    orbit_poly,
)
from .polyring import BudgetExceeded, Poly, ZZ

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
EXIT_UNSUPPORTED = 4

_VERDICT_EXIT = {
    Verdict.VERIFIED: EXIT_OK,
    Verdict.REFUTED: EXIT_REFUTED,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    Verdict.UNSUPPORTED: EXIT_UNSUPPORTED,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(?:(\*)?c(?:\^(\d+))?)?")


def parse_scalar_literal(text: str, fieldK) -> NFElem:
    """Parse an element literal: integer, rational, or polynomial in c.

    Accepts forms like "4", "-3/2", "c", "c^2", "2*c^2-c+3".
    """
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty element literal")
    total = fieldK.zero
    pos = 0
    matched = False
    while pos < len(s):
        mo = _TERM_RE.match(s, pos)
        if not mo or mo.end() == pos:
            raise UsageError(f"cannot parse element literal {text!r}")
        sign, coeff, _, power = mo.groups()
        if coeff is None and power is None and "c" not in s[pos:mo.end()]:
            raise UsageError(f"cannot parse element literal {text!r}")
        q = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            q = -q
        term = fieldK.from_rational(q)
        if "c" in s[pos:mo.end()]:
            exp = int(power) if power else 1
            term = term * fieldK.gen() ** exp
        total = total + term
        pos = mo.end()
        matched = True
    if not matched:
        raise UsageError(f"cannot parse element literal {text!r}")
    return total


def _load_field_file(path: str) -> Poly:
    with open(path) as fh:
        data = json.load(fh)
    coeffs = [int(c) for c in data["g"]["coeffs"]]
    return Poly.from_ints(ZZ, coeffs)


def _parse_mn(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected m,n but got {text!r}")
    return int(parts[0]), int(parts[1])


def resolve_field(args):
    """Construct the number field from --field / --gleason-n / --misiurewicz."""
    sources = [args.field, args.gleason_n, args.misiurewicz]
    if sum(x is not None for x in sources) != 1:
        raise UsageError("exactly one of --field, --gleason-n, --misiurewicz required")
    if args.field is not None:
        g = _load_field_file(args.field)
    elif args.gleason_n is not None:
        g = gleason(args.d, args.gleason_n, args.budget)
    else:
        m, n = _parse_mn(args.misiurewicz)
        g = misiurewicz(args.d, m, n, args.budget)[1]
    return nf_new(g)


def _field_flags(sub):
    sub.add_argument("--field", help="path to a JSON file with the defining polynomial")
    sub.add_argument("--gleason-n", type=int, help="use the period-n parameter field")
    sub.add_argument(
        "--misiurewicz", help="m,n: use the type-(m,n) parameter field (norm form)"
    )


def _common_flags(sub, field=True):
    sub.add_argument("--d", type=int, required=True, help="degree of x^d + c")
    sub.add_argument("--format", choices=("json", "text"), default="text")
    sub.add_argument("--seed", type=int, default=1)
    sub.add_argument("--budget", type=int, default=DEFAULT_DEGREE_BUDGET)
    sub.add_argument("--precision", type=int, default=3)
    if field:
        _field_flags(sub)


def build_parser() -> _Parser:
    parser = _Parser(prog="pcfcert")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gleason", help="period-n parameter polynomial")
    _common_flags(p, field=False)
    p.add_argument("--n", type=int, required=True)

    p = subs.add_parser("misiurewicz", help="type-(m,n) parameter polynomial")
    _common_flags(p, field=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = subs.add_parser("orbit", help="critical-orbit polynomial a_i(c)")
    _common_flags(p, field=False)
    p.add_argument("--i", type=int, required=True)

    p = subs.add_parser("exact-type", help="orbit type of the critical point")
    _common_flags(p)

    for name in ("factor", "verify-factor"):
        p = subs.add_parser(name, help="closed-form factorization of f^k")
        _common_flags(p)
        p.add_argument("--k", type=int, required=True)
        if name == "factor":
            p.add_argument("--verify", action="store_true")

    p = subs.add_parser("stability-cert", help="Eisenstein stability certificate")
    _common_flags(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--kmax", type=int, required=True)

    p = subs.add_parser("f-irred-cert", help="irreducibility certificates for factors")
    _common_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=int, help="cofactor index (omit for all factors of f^k)")

    p = subs.add_parser("disc-check", help="discriminant recursion with oracle check")
    _common_flags(p)
    p.add_argument("--x0", default="0")
    p.add_argument("--k", type=int, required=True)

    p = subs.add_parser("ideal-audit", help="ideal-power audit for a_i")
    _common_flags(p)
    p.add_argument("--i", type=int, required=True)

    p = subs.add_parser("nonabelian-cert", help="non-abelian obstruction certificate")
    _common_flags(p)
    p.add_argument("--case", required=True, choices=CASES)
    p.add_argument("--alpha", required=True)
    return parser


def _emit(args, text_value: str, json_obj) -> None:
    if args.format == "json":
        print(jsonio.dumps(json_obj))
    else:
        print(text_value)


def _cert_text(cert) -> str:
    lines = [f"{cert.claim}: {cert.verdict.value}"]
    for w in cert.witnesses:
        lines.append("  witness " + json.dumps(jsonio._witness_json(w)))
    for msg in cert.diagnostics:
        lines.append("  note: " + msg)
    if cert.taint:
        lines.append("  taint: field irreducibility assumed, not certified")
    return "\n".join(lines)


def _emit_cert(args, cert) -> int:
    _emit(args, _cert_text(cert), jsonio.certificate_json(cert))
    return _VERDICT_EXIT[cert.verdict]


def _period_of(args, fieldK) -> int:
    if args.gleason_n is not None:
        return args.gleason_n
    typ = exact_type(fieldK, args.d)
    if typ.kind != "periodic":
        raise UsageError("the parameter is not periodic; factorization undefined")
    return typ.n


def run(argv) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command

    if cmd == "gleason":
        g = gleason(args.d, args.n, args.budget)
        _emit(args, g.to_string("c"), jsonio.poly_json(g, "c"))
        return EXIT_OK

    if cmd == "misiurewicz":
        cyc, norm = misiurewicz(args.d, args.m, args.n, args.budget)
        _emit(
            args,
            f"cyclotomic: {cyc.to_string('c')}\nnorm form: {norm.to_string('c')}",
            {"cyclotomic": jsonio.cyc_poly_json(cyc), "norm_form": jsonio.poly_json(norm, "c")},
        )
        return EXIT_OK

    if cmd == "orbit":
        a = orbit_poly(args.d, args.i, args.budget)
        _emit(args, a.to_string("c"), jsonio.poly_json(a, "c"))
        return EXIT_OK

    fieldK = resolve_field(args)

    if cmd == "exact-type":
        typ = exact_type(fieldK, args.d)
        _emit(
            args,
            str(typ),
            {"kind": typ.kind, "m": typ.m, "n": typ.n, "field": jsonio.field_json(fieldK)},
        )
        return EXIT_OK

    if cmd in ("factor", "verify-factor"):
        n = _period_of(args, fieldK)
        product = iterate_factorization(fieldK, args.d, n, args.k, args.budget)
        obj = jsonio.factor_product_json(product)
        verify = cmd == "verify-factor" or args.verify
        code = EXIT_OK
        text = "\n".join(
            f"{e.label}: ({e.poly.to_string('x')})^{e.exp}" for e in product.entries
        ) + f"\ndistinct factors: {product.distinct_count}"
        if verify:
            cert = verify_factorization(product, args.budget)
            obj = {"product": obj, "certificate": jsonio.certificate_json(cert)}
            text += f"\nverification: {cert.verdict.value}"
            code = _VERDICT_EXIT[cert.verdict]
        _emit(args, text, obj)
        return code

    if cmd == "stability-cert":
        alpha = parse_scalar_literal(args.alpha, fieldK)
        typ = exact_type(fieldK, args.d)
        cert = stability_certificate(fieldK, args.d, typ, alpha, args.kmax, args.budget)
        return _emit_cert(args, cert)

    if cmd == "f-irred-cert":
        n = _period_of(args, fieldK)
        if args.i is not None:
            cert = f_irreducibility_certificate(
                fieldK, args.d, n, args.k, args.i, args.budget
            )
            return _emit_cert(args, cert)
        product = iterate_factorization(fieldK, args.d, n, args.k, args.budget)
        certs = factor_product_certificates(product, args.budget)
        worst = max(_VERDICT_EXIT[c.verdict] for c in certs.values())
        _emit(
            args,
            "\n".join(_cert_text(c) for _, c in sorted(certs.items())),
            {lab: jsonio.certificate_json(c) for lab, c in sorted(certs.items())},
        )
        return worst

    if cmd == "disc-check":
        x0 = parse_scalar_literal(args.x0, fieldK)
        trace = disc_iterate(fieldK, args.d, x0, args.k, budget=args.budget)
        _emit(
            args,
            f"disc(f^{args.k} - x0) = {trace.value} "
            f"(oracle-checked at k = {list(trace.oracle_checked)})",
            jsonio.disc_trace_json(trace),
        )
        return EXIT_OK

    if cmd == "ideal-audit":
        typ = exact_type(fieldK, args.d)
        audit = ideal_power_audit(fieldK, args.d, typ, args.i)
        text = (
            f"i = {audit.i}: A_emp = {audit.a_emp}, printed branches "
            f"{audit.a_printed_div} (n | m-1) / {audit.a_printed_nondiv} (n ∤ m-1), "
            f"match = {audit.branch_match}"
        )
        _emit(args, text, jsonio.ideal_audit_json(audit))
        return EXIT_OK

    if cmd == "nonabelian-cert":
        alpha = parse_scalar_literal(args.alpha, fieldK)
        cert = nonabelian_certificate(
            args.case, fieldK, args.d, alpha, budget=args.budget
        )
        return _emit_cert(args, cert)

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Reducible, BoundExceeded, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisUnmet as exc:
        print(f"hypothesis unmet: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (Unsupported, BudgetExceeded) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except OracleMismatch as exc:
        print(f"refuted (internal oracle mismatch): {exc}", file=sys.stderr)
        return EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
