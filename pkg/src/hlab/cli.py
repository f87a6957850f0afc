"""Command-line frontend.

    hlab <subcommand> [--input FILE] [--output text|machine] [flags]

Exit codes: 0 on success, 1 on engine errors (inconsistent data, violated
hypotheses), 2 on usage or parse errors.  All numeric output is exact
rational text except the explicitly marked enclosures.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from . import genus, lefschetz, selfcheck
from .bounds import Interval, bound_C1, bound_T2, bound_T4, bound_T5, e_theta_interval, root_report, t4_chain
from .exprparse import ExprError, parse_rational
from .genus import BundleData, IntegralityError, MissingChernNumber
from .inputdoc import DocumentError, InputDocument, cp_fixture, digest, load_document, load_file
from .lefschetz import MAX_N, DiagonalCurvature

USAGE_ERROR = 2
ENGINE_ERROR = 1


class Reporter:
    """Collects results and warnings; renders text or machine output."""

    def __init__(self, command: str, inputs, output: str):
        self.command = command
        self.inputs_digest = digest(inputs)
        self.output = output
        self.results: dict = {}
        self.warnings: list[str] = []

    def add(self, key: str, value):
        self.results[key] = _plain(value)

    def warn(self, message: str):
        self.warnings.append(message)

    def emit(self):
        if self.output == "machine":
            report = {
                "command": self.command,
                "inputs_digest": self.inputs_digest,
                "results": self.results,
                "warnings": self.warnings,
            }
            print(json.dumps(report, sort_keys=True, indent=2))
            return
        print(f"# {self.command}")
        print(f"# inputs sha256: {self.inputs_digest}")
        for message in self.warnings:
            print(f"warning: {message}")
        _print_tree(self.results)


def _plain(value):
    """Make values JSON-representable without floats: rationals as strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Interval):
        return str(value.lo) if value.lo == value.hi else [str(value.lo), str(value.hi)]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return str(value)


def _print_tree(tree, indent=0):
    pad = "  " * indent
    if isinstance(tree, dict):
        for key, value in tree.items():
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                print(f"{pad}{key}:")
                _print_tree(value, indent + 1)
            else:
                print(f"{pad}{key} = {_flat_str(value)}")
    elif isinstance(tree, list):
        for value in tree:
            if isinstance(value, dict) and all(
                not isinstance(v, (dict, list)) or _is_flat(v) for v in value.values()
            ):
                row = "  ".join(f"{k}={_flat_str(v)}" for k, v in value.items())
                print(f"{pad}{row}")
            elif isinstance(value, (dict, list)):
                _print_tree(value, indent)
            else:
                print(f"{pad}{_flat_str(value)}")


def _is_flat(value):
    if isinstance(value, list):
        return all(not isinstance(v, (dict, list)) for v in value)
    return False


def _flat_str(value):
    if isinstance(value, list):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def _attach_load_warnings(rep: Reporter, doc: InputDocument):
    for message in doc.load_warnings:
        rep.warn(message)


def _doc_from_args(args) -> InputDocument:
    if getattr(args, "input", None):
        return load_file(args.input)
    return load_document({})


# -- subcommands -----------------------------------------------------------------


def cmd_genus(args):
    doc = _doc_from_args(args)
    x = doc.require("manifold")
    e = doc.bundle or BundleData.trivial()
    rep = Reporter("genus", doc.raw, args.output)
    _attach_load_warnings(rep, doc)
    rep.add("td", genus.todd_class(x))
    rep.add("ch", genus.chern_character(e, x.spec, x.n))
    chi = genus.chi_y(x, e)
    rep.add("chi_p", list(chi.padded(x.n + 1)))
    rep.add("chi_y", chi)
    rep.add("euler_characteristic", chi(-1))
    rep.emit()


def cmd_kcoeffs(args):
    doc = _doc_from_args(args)
    x = doc.require("manifold")
    e = doc.bundle or BundleData.trivial()
    rep = Reporter("kcoeffs", doc.raw, args.output)
    _attach_load_warnings(rep, doc)
    chi = genus.chi_y(x, e)
    rep.add("K", genus.k_coefficients(chi, upto=x.n))
    rep.add("k1_closed_form_matches", genus.k1_formula_check(x, e))
    if x.n == 2:
        rep.add("k2_surface_form_matches", genus.k2_surface_formula_check(x, e))
    rep.emit()


def cmd_hilbert(args):
    doc = _doc_from_args(args)
    x = doc.require("manifold")
    line = doc.require("line_bundle")
    rep = Reporter("hilbert", doc.raw, args.output)
    _attach_load_warnings(rep, doc)
    P = genus.hilbert_polynomial(x, line, args.p)
    rep.add("p", args.p)
    rep.add("polynomial", P)
    rep.add("coefficients", list(P.padded(x.n + 1)))
    rep.emit()


def cmd_ineq(args):
    doc = _doc_from_args(args)
    x = doc.require("manifold")
    e = doc.bundle or BundleData.trivial()
    rep = Reporter("ineq", doc.raw, args.output)
    _attach_load_warnings(rep, doc)
    js = [args.j] if args.j is not None else list(range(x.n + 1))
    rows = []
    for j in js:
        holds, lhs, rhs = genus.chern_inequality_check(x, e, j)
        rows.append({"j": j, "lhs": str(lhs), "rhs": str(rhs), "holds": holds})
    rep.add("inequalities", rows)
    rep.emit()


def cmd_commutator(args):
    if args.gammas:
        spec = DiagonalCurvature(tuple(parse_rational(g) for g in args.gammas.split(",")))
        inputs = {"gammas": args.gammas}
    else:
        doc = _doc_from_args(args)
        spec = doc.require("curvature")
        inputs = doc.raw
    rep = Reporter("commutator", inputs, args.output)
    if not args.gammas:
        _attach_load_warnings(rep, doc)
    norm = lefschetz.commutator_norm(spec)
    rep.add("C", norm.value)
    rep.add("exact", norm.exact)
    rep.add(
        "C_pq",
        [
            {"p": p, "q": q, "value": _plain(v)}
            for (p, q), v in sorted(norm.table.items())
        ],
    )
    if isinstance(spec, DiagonalCurvature):
        rep.add("flat", lefschetz.flatness_test(spec))
    rep.emit()


def cmd_lefschetz_check(args):
    n, r = args.n, args.r
    rep = Reporter("lefschetz-check", {"n": n, "r": r}, args.output)
    rep.add("sl2_commutator", lefschetz.sl2_commutator_check(n, r))
    if n <= 3:
        star = lefschetz.op_star(n, r)
        inv = star.adjoint()
        ident = inv.compose(star) == lefschetz.identity_operator(lefschetz.get_basis(n, r))
        lam = inv.compose(lefschetz.op_L(n, r)).compose(star) == lefschetz.op_Lambda(n, r)
        rep.add("star_unitary", ident)
        rep.add("star_conjugation_gives_lambda", lam)
    else:
        rep.warn("star identity check skipped for n > 3 (cost)")
    scan = lefschetz.injectivity_scan(n, r)
    rep.add(
        "injectivity",
        [
            {"p": p, "q": q, "injective": ok}
            for (p, q), ok in sorted(scan.items())
        ],
    )
    powers = []
    for k in range(n + 1):
        lp = lefschetz.lefschetz_power(n, r, k)
        powers.append(
            {
                "k": k,
                "bijective": lp.bijective,
                "sigma_min": _plain(lp.sigma_min),
                "sigma_max": _plain(lp.sigma_max),
            }
        )
    rep.add("lefschetz_powers", powers)
    rep.emit()


def cmd_bounds(args):
    doc = _doc_from_args(args)
    rep = Reporter(f"bounds {args.which}", doc.raw, args.output)
    _attach_load_warnings(rep, doc)
    computed = {}
    P = None
    p = doc.bounds_p
    if doc.manifold is not None and doc.line_bundle is not None:
        x, line = doc.manifold, doc.line_bundle
        c1 = line.chern[0] if line.chern else x.spec.zero()
        computed["a_n"] = genus.integrate(c1 ** x.n, x.fclass)
        chi = genus.chi_y(x, doc.bundle or BundleData.trivial())
        computed["chi_p"] = tuple(chi.padded(x.n + 1))
        P = genus.hilbert_polynomial(x, line, p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        b = doc.bounds_input(**computed)
        which = args.which
        if which == "t4":
            rep.add("bound_T4", bound_T4(b))
        elif which == "t2":
            if doc.manifold is not None and doc.line_bundle is not None:
                c1 = doc.line_bundle.chern[0] if doc.line_bundle.chern else doc.manifold.spec.zero()
                c1sq = genus.integrate(c1 * c1, doc.manifold.fclass)
            else:
                raw = doc.require("bounds_raw")
                if "c1sq_L" not in raw:
                    raise DocumentError(
                        "bound T2 needs int c_1^2(L): provide manifold data "
                        "or bounds.c1sq_L"
                    )
                c1sq = parse_rational(raw["c1sq_L"])
            rep.add("c1sq_L", c1sq)
            rep.add("bound_T2", bound_T2(b, c1sq))
        elif which == "t5":
            P = _require_poly(doc, P, b, p)
            rr = root_report(P, _chi_p_value(b, p))
            rep.add("m_p", rr.m_p)
            rep.add("bound_T5", bound_T5(b, rr.m_p))
        elif which == "c1":
            P = _require_poly(doc, P, b, p)
            rr = root_report(P, _chi_p_value(b, p))
            rep.add("C_plus", rr.c_plus)
            rep.add("C_minus", rr.c_minus)
            rep.add("bound_C1_plus", bound_C1(b, rr.c_plus))
            rep.add("bound_C1_minus", bound_C1(b, rr.c_minus))
        elif which == "etheta":
            if b.chi_p is not None:
                chi_val = sum(((-1) ** i * v for i, v in enumerate(b.chi_p)), Fraction(0))
            else:
                chi_val = parse_rational(doc.require("bounds_raw")["chi"])
            if chi_val.denominator != 1:
                raise DocumentError(f"chi must be an integer, got {chi_val}")
            lower, upper = e_theta_interval(b, int(chi_val))
            rep.add("chi", chi_val)
            rep.add("E_theta_lower_enclosure", lower)
            rep.add("E_theta_upper_enclosure", upper)
        elif which == "t4chain":
            P = _require_poly(doc, P, b, p)
            report = t4_chain(b, P, p)
            rep.add("p", report.p)
            rep.add("N", report.N)
            rep.add("m_tilde", report.m_tilde)
            rep.add("delta", report.delta)
            rep.add("branch", report.branch)
            rep.add("bound", report.bound)
        for w in caught:
            rep.warn(str(w.message))
    rep.emit()


def _require_poly(doc, P, b, p):
    if P is not None:
        return P
    if b.hilbert and p in b.hilbert:
        return b.hilbert[p]
    raise DocumentError(
        "this bound needs the p-Hilbert polynomial: provide manifold, "
        "fundamental_class and line_bundle sections"
    )


def _chi_p_value(b, p):
    if b.chi_p is None or not 0 <= p < len(b.chi_p):
        raise DocumentError(
            "this bound needs chi^p(X): provide manifold data or bounds.chi_p"
        )
    return b.chi_p[p]


def cmd_verify(args):
    results = selfcheck.run_all()
    failed = [name for name, ok, _ in results if not ok]
    for name, ok, detail in results:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail and not ok:
            line += f"  ({detail})"
        print(line)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_fixture(args):
    if args.kind != "cp":
        raise DocumentError(f"unknown fixture kind {args.kind!r}")
    tree = cp_fixture(args.n)
    text = json.dumps(tree, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)


# -- dispatcher -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hlab",
        description="Exact characteristic-class invariants, Lefschetz operator "
        "models and Euler-characteristic bounds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", help="JSON input document")
        p.add_argument(
            "--output", choices=("text", "machine"), default="text",
            help="report format (machine = JSON)",
        )

    p = sub.add_parser("genus", help="Todd class, Chern character, chi_y, chi^p")
    common(p)
    p.set_defaults(fn=cmd_genus)

    p = sub.add_parser("kcoeffs", help="Taylor coefficients of chi_y at y = -1")
    common(p)
    p.set_defaults(fn=cmd_kcoeffs)

    p = sub.add_parser("hilbert", help="p-Hilbert polynomial of the line bundle")
    common(p)
    p.add_argument("--p", type=int, default=0)
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("ineq", help="Chern number inequality checker")
    common(p)
    p.add_argument("--j", type=int, default=None)
    p.set_defaults(fn=cmd_ineq)

    p = sub.add_parser("commutator", help="C = |[Lambda, iTheta]| and C_pq table")
    common(p)
    p.add_argument("--gammas", help="comma-separated curvature eigenvalues")
    p.set_defaults(fn=cmd_commutator)

    p = sub.add_parser("lefschetz-check", help="sl2 / star / injectivity / power scans")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(fn=cmd_lefschetz_check)

    p = sub.add_parser("bounds", help="Euler-characteristic bound evaluators")
    common(p)
    p.add_argument(
        "--which", required=True,
        choices=("t2", "t4", "t5", "c1", "etheta", "t4chain"),
    )
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("verify", help="run the built-in property suites")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("fixture", help="emit a builtin input document")
    p.add_argument("kind", choices=("cp",))
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_fixture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.subcommand == "lefschetz-check":
        if not 1 <= args.n <= MAX_N:
            parser.error(f"--n must be in [1, {MAX_N}]")
    try:
        code = args.fn(args)
        return 0 if code is None else code
    except (DocumentError, ExprError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (IntegralityError, MissingChernNumber, ValueError, AssertionError) as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return ENGINE_ERROR


if __name__ == "__main__":
    sys.exit(main())
