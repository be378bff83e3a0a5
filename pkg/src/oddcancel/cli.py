"""Command-line front end.

Exit codes: 0 all verified, 2 verification mismatch, 3 configuration
error, 4 precision error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bundles import CROSSCHECK_IDS, crosscheck
from .errors import (
    CertificationError,
    ConfigurationError,
    DomainError,
    ModularityViolation,
    OddCancelError,
    PrecisionError,
    UnsupportedExpression,
    VerificationFailure,
)
from .modular import FAMILIES, PRINTED_IDS, TWISTED_ALIASES, derive, printed_check
from .numeric import LAWS, check_grid, check_phi_s_relation, expand_law
from .phi import GeometrySpec, PhiKind, build_phi
from .rings import format_fraction
from .theta import BLOCK_KINDS, delta_eps, log_block, theta_nullwert, theta_prime_normalized

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_CONFIG = 3
EXIT_PRECISION = 4

FORMS = ("delta1", "eps1", "delta2", "eps2", "theta1", "theta2", "theta3", "thetaprime")
PHI_FORMS = tuple(k.value for k in PhiKind)


def _out(text: str, path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# derive


def _applicable_printed(spec: GeometrySpec) -> list:
    from .modular import _FIXED_R, _TWISTED_IDS

    out = []
    for pid in PRINTED_IDS:
        if (pid in _TWISTED_IDS) != spec.twisted:
            continue
        if pid in _FIXED_R and _FIXED_R[pid] != spec.r:
            continue
        if pid in ("3.25", "4.9") and spec.r < 2:
            continue
        if pid in ("3.26", "3.30", "4.10") and spec.r < 4:
            continue
        if pid in ("3.38", "4.16", "3.42", "4.19") and spec.K < 2:
            continue
        if pid in ("3.41", "3.43") and spec.K < 4:
            continue
        out.append(pid)
    return out


def cmd_derive(args) -> int:
    if args.q_order is None:
        args.q_order = args.r + 4
    if args.q_order < args.r + 2:
        raise ConfigurationError(f"q_order must be >= r + 2 = {args.r + 2}")
    spec = GeometrySpec(args.r, N=args.N, twisted=args.twisted, K=args.q_order)
    families = None
    requested_printed = []
    if args.ids:
        families = []
        for i in args.ids:
            known = False
            if TWISTED_ALIASES.get(i, i) in FAMILIES:
                families.append(i)
                known = True
            if i in PRINTED_IDS:
                requested_printed.append(i)
                known = True
            if not known:
                raise ConfigurationError(f"unknown identity id {i!r}")
    report = derive(spec, families)
    printed_ids = requested_printed or _applicable_printed(spec)
    checks = [printed_check(pid, report) for pid in printed_ids]
    failed = [c.id for c in checks if not c.holds and c.id in requested_printed]

    if args.format == "json":
        data = report.to_json()
        data["printed_checks"] = [c.to_json() for c in checks]
        text = _dump(data)
    elif args.format == "latex":
        text = report.latex()
    else:
        text = report.text()
        for c in checks:
            line = f"printed {c.id}: {'holds' if c.holds else 'does not hold'}"
            if c.detail:
                line += f" ({c.detail})"
            text += line + "\n"
    _out(text, args.output)
    if failed:
        print(f"mismatch: printed statement(s) {', '.join(failed)} do not hold", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# crosscheck


def cmd_crosscheck(args) -> int:
    ids = list(CROSSCHECK_IDS) if args.id == "all" else [args.id]
    results = [crosscheck(i, args.r) for i in ids]
    if args.format == "json":
        text = _dump([res.to_json() for res in results])
    else:
        lines = []
        for res in results:
            lines.append(
                f"{res.id} r={res.r}: {'pass' if res.passed else 'FAIL'} "
                f"(expansion vs theta build: {'agree' if res.engine_agrees else 'differ'}; "
                f"printed: {'agree' if res.printed_agrees else 'differ'})"
            )
            for k, d in sorted(res.printed_diff.items()):
                lines.append(f"  printed q^{format_fraction(Fraction(k, 2))} off by {d}")
            for n in res.notes:
                lines.append(f"  note: {n}")
        text = "\n".join(lines)
    _out(text, args.output)
    return EXIT_OK if all(res.passed for res in results) else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# expand


def _expand_series(form: str, K: int, depth: int, r: int, twisted: bool):
    if form in ("delta1", "eps1", "delta2", "eps2"):
        return delta_eps(form, K).series
    if form in ("theta1", "theta2", "theta3"):
        return theta_nullwert(form, K).fourth_power()
    if form == "thetaprime":
        return theta_prime_normalized(K)
    if form in BLOCK_KINDS:
        return log_block(form, K, depth).series
    if form in PHI_FORMS:
        return build_phi(GeometrySpec(r, twisted=twisted, K=K), form).series
    raise ConfigurationError(f"unknown form {form!r}")


def cmd_expand(args) -> int:
    if args.order < 0:
        raise ConfigurationError("order must be non-negative")
    s = _expand_series(args.form, 2 * args.order, args.depth, args.r, args.twisted)
    if args.format == "json":
        text = _dump(s.to_json())
    else:
        text = s.to_text()
    _out(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# numeric-check

# concrete small roots for the Phi_W / Phi_L S-relation
S_RELATION_CASES = (
    (1, 2, (0.11,), ()),  # E enters only above degree 4
    (2, 4, (0.09, -0.13), (0.05,)),
)
S_RELATION_TAUS = (0.3 + 1.1j, 1.2j)


def cmd_numeric(args) -> int:
    tol = args.tol
    rows = []
    ok = True
    laws = list(LAWS) if args.law == "all" else None
    if args.law in ("3.21", "all"):
        for r, N, tm, e in S_RELATION_CASES:
            for tau in S_RELATION_TAUS:
                res = check_phi_s_relation(r, N, tm, e, tau, tol=1e-6)
                rows.append({"law": "3.21", "r": r, "tau": str(tau), "residual": res.residual,
                             "passed": res.passed})
                ok = ok and res.passed
    if args.law != "3.21":
        parts = laws if laws is not None else expand_law(args.law)
        for part in parts:
            results = check_grid(part, tol)
            worst = max(x.residual for x in results)
            passed = all(x.passed for x in results)
            rows.append({"law": part, "points": len(results), "max_residual": worst, "passed": passed})
            ok = ok and passed
    if args.format == "json":
        text = _dump(rows)
    else:
        lines = []
        for row in rows:
            if row["law"] == "3.21":
                lines.append(f"3.21 r={row['r']} tau={row['tau']}: residual {row['residual']:.3e} "
                             f"{'pass' if row['passed'] else 'FAIL'}")
            else:
                lines.append(f"{row['law']}: max residual {row['max_residual']:.3e} over "
                             f"{row['points']} points {'pass' if row['passed'] else 'FAIL'}")
        text = "\n".join(lines)
    _out(text, args.output)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# catalog


def cmd_catalog(args) -> int:
    if args.R < 1:
        raise ConfigurationError("R must be >= 1")
    rows = []
    for r in range(1, args.R + 1):
        spec = GeometrySpec(r, N=args.N, twisted=args.twisted, K=r + 4)
        rep = derive(spec)
        rows.append({
            "r": r,
            "dimension": 4 * r - 1,
            "h_count": len(rep.h) - 1,
            "transport_verified": rep.transport_verified,
            "identities": [i.id for i in rep.identities if i.verified],
            "two_adic": {fam: str(e) for fam, e in rep.two_adic.items()},
        })
    if args.format == "json":
        text = _dump(rows)
    else:
        lines = []
        for row in rows:
            exps = ", ".join(f"{k}: {v}" for k, v in row["two_adic"].items())
            lines.append(f"r={row['r']} dim={row['dimension']} h_l: {row['h_count']} "
                         f"verified: {' '.join(row['identities'])}  2-adic: {exps}")
        text = "\n".join(lines)
    _out(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _even_n(value: str) -> int:
    n = int(value)
    if n < 2 or n % 2:
        raise argparse.ArgumentTypeError("N must be an even integer >= 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddcancel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    d = sub.add_parser("derive", help="solve for h_l and emit the cancellation identities")
    d.add_argument("--r", type=int, required=True)
    d.add_argument("--N", type=_even_n, default=None, help="concrete even rank (default symbolic)")
    d.add_argument("--twisted", action="store_true")
    d.add_argument("--q-order", type=int, default=None, help="half-integer q orders (default r + 4)")
    d.add_argument("--ids", nargs="*", default=None, help="identity ids to emit or check")
    d.add_argument("--format", choices=("json", "latex", "text"), default="json")
    d.add_argument("--output", default=None)
    d.set_defaults(func=cmd_derive)

    c = sub.add_parser("crosscheck", help="bundle-level cross-check of a displayed expansion")
    c.add_argument("--id", required=True, choices=CROSSCHECK_IDS + ("all",))
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--format", choices=("json", "text"), default="text")
    c.add_argument("--output", default=None)
    c.set_defaults(func=cmd_crosscheck)

    e = sub.add_parser("expand", help="print a q-expansion")
    e.add_argument("--form", required=True, choices=FORMS + BLOCK_KINDS + PHI_FORMS)
    e.add_argument("--order", type=int, default=5, help="highest power of q")
    e.add_argument("--depth", type=int, default=8, help="z-degree cut for blocks")
    e.add_argument("--r", type=int, default=1, help="r for phi_* forms")
    e.add_argument("--twisted", action="store_true")
    e.add_argument("--format", choices=("json", "text"), default="text")
    e.add_argument("--output", default=None)
    e.set_defaults(func=cmd_expand)

    n = sub.add_parser("numeric-check", help="floating-point checks of the transformation laws")
    n.add_argument("--law", default="all", help="law id, e.g. 2.11, 2.14, 2.14S, 3.21 or all")
    n.add_argument("--grid", choices=("default",), default="default")
    n.add_argument("--tol", type=float, default=1e-9)
    n.add_argument("--format", choices=("json", "text"), default="text")
    n.add_argument("--output", default=None)
    n.set_defaults(func=cmd_numeric)

    k = sub.add_parser("catalog", help="derive for r = 1..R")
    k.add_argument("--R", type=int, required=True)
    k.add_argument("--N", type=_even_n, default=None)
    k.add_argument("--twisted", action="store_true")
    k.add_argument("--format", choices=("json", "text"), default="text")
    k.add_argument("--output", default=None)
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except (VerificationFailure, ModularityViolation, CertificationError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        diff = getattr(exc, "diff", None)
        if diff is not None:
            diag["diff"] = str(diff)
        print(_dump(diag), file=sys.stderr)
        return EXIT_MISMATCH
    except PrecisionError as exc:
        print(_dump({"error": "PrecisionError", "message": str(exc)}), file=sys.stderr)
        return EXIT_PRECISION
    except (ConfigurationError, DomainError, UnsupportedExpression, ValueError) as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except OddCancelError as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
