"""Command-line front end.

Exit codes: 0 success, 2 input parse failure, 3 invalid perversity,
4 non-pseudomanifold input with --strict, 5 degenerate matrix.
"""

import argparse
import json
import sys
from fractions import Fraction

from .catalog import (
    CatalogError,
    catalog_build,
    catalog_entries,
    catalog_entry,
    catalog_table,
    _FORMULA_BUILDERS,
)
from .exactalg import (
    CoefficientError,
    INTEGERS,
    PrimeField,
    RATIONALS,
    Rationals,
    is_prime,
    make_field,
)
from .formulas import omega_splitting
from .ihcore import (
    IHTable,
    Perversity,
    PerversityError,
    ih_homology,
    ordinary_homology,
)
from .simplicial import (
    SimplicialComplex,
    SimplicialError,
    StratifiedComplex,
    barycentric_subdivision,
    build_complex,
    verify_pseudomanifold,
)
from .witt import (
    BilinearForm,
    WittError,
    bordism_group,
    witt_condition_check,
    witt_invariants,
)

EXIT_PARSE = 2
EXIT_PERVERSITY = 3
EXIT_NOT_PSEUDOMANIFOLD = 4
EXIT_DEGENERATE = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def parse_coefficients(spec):
    """Q | Z | Zp:<p> | Fq:<p>:<m>"""
    spec = spec.strip()
    if spec == "Q":
        return RATIONALS
    if spec == "Z":
        return INTEGERS
    if spec.startswith("Zp:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise CliError(f"bad coefficient spec {spec!r}", EXIT_PARSE)
        if not is_prime(p):
            raise CliError(f"{p} is not prime", EXIT_PARSE)
        return PrimeField(p)
    if spec.startswith("Fq:"):
        parts = spec[3:].split(":")
        if len(parts) != 2:
            raise CliError(f"bad coefficient spec {spec!r}", EXIT_PARSE)
        try:
            p, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise CliError(f"bad coefficient spec {spec!r}", EXIT_PARSE)
        if not is_prime(p) or m < 1:
            raise CliError(f"bad field parameters in {spec!r}", EXIT_PARSE)
        return make_field(p, m)
    raise CliError(f"bad coefficient spec {spec!r}", EXIT_PARSE)


def parse_perversity(spec, n):
    """0 | m | n | t | p:v2,v3,..."""
    spec = spec.strip()
    try:
        if spec == "0":
            return Perversity.zero(n)
        if spec == "m":
            return Perversity.lower_middle(n)
        if spec == "n":
            return Perversity.upper_middle(n)
        if spec == "t":
            return Perversity.top(n)
        if spec.startswith("p:"):
            values = tuple(int(v) for v in spec[2:].split(",") if v.strip())
            return Perversity(values, n)
    except PerversityError as e:
        raise CliError(str(e), EXIT_PERVERSITY)
    except ValueError:
        raise CliError(f"bad perversity spec {spec!r}", EXIT_PARSE)
    raise CliError(f"bad perversity spec {spec!r}", EXIT_PARSE)


def load_space_file(path):
    """JSON document with dimension, maximal_simplices, and optional
    skeleta (map from skeleton index to generating simplices)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read space file {path}: {e}", EXIT_PARSE)
    try:
        n = int(doc["dimension"])
        maximal = [frozenset(int(v) for v in s) for s in doc["maximal_simplices"]]
        K = build_complex(maximal)
        skel_map = {}
        for key, gens in (doc.get("skeleta") or {}).items():
            i = int(key)
            if gens:
                skel_map[i] = SimplicialComplex.from_maximal(
                    [frozenset(int(v) for v in s) for s in gens]
                )
            else:
                skel_map[i] = SimplicialComplex.empty()
        return StratifiedComplex.from_skeleton_map(K, skel_map, n)
    except (KeyError, TypeError, ValueError, SimplicialError) as e:
        raise CliError(f"bad space file {path}: {e}", EXIT_PARSE)


def _resolve_space(args):
    if getattr(args, "catalog", None):
        try:
            X = catalog_build(args.catalog)
        except CatalogError as e:
            raise CliError(str(e), EXIT_PARSE)
    else:
        X = load_space_file(args.space)
    if getattr(args, "normalize_triangulation", False):
        X = barycentric_subdivision(X)
    if getattr(args, "strict", False):
        rep = verify_pseudomanifold(X)
        if not rep.is_pseudomanifold:
            raise CliError("input is not a pseudomanifold", EXIT_NOT_PSEUDOMANIFOLD)
    return X


def _table_lines(table: IHTable):
    lines = []
    for i in range(table.n + 1):
        lines.append(f"  H_{i} = {table.group_description(i)}")
    return lines


def cmd_compute(args):
    coeff = parse_coefficients(args.coeff)
    if args.catalog and args.catalog in _FORMULA_BUILDERS:
        from .ihcore import _coeff_label

        if coeff is INTEGERS:
            raise CliError("formula entries need field coefficients", EXIT_PARSE)
        dim = catalog_entry(args.catalog).dimension
        pbar = parse_perversity(args.perversity, dim)
        table = catalog_table(args.catalog, pbar, _coeff_label(coeff))
        source = f"catalog:{args.catalog} (formula)"
    else:
        X = _resolve_space(args)
        pbar = parse_perversity(args.perversity, X.n)
        try:
            table = ih_homology(X, pbar, coeff)
        except PerversityError as e:
            raise CliError(str(e), EXIT_PERVERSITY)
        source = f"catalog:{args.catalog}" if args.catalog else f"file:{args.space}"
    if args.json:
        doc = {
            "command": "compute",
            "space": args.catalog or args.space,
            "perversity": args.perversity,
            "table": table.as_dict(),
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(f"intersection homology of {source}, perversity {args.perversity}, "
              f"coefficients {table.coeff_label}")
        for line in _table_lines(table):
            print(line)
    return 0


def cmd_witt_check(args):
    X = _resolve_space(args)
    coeffs = [parse_coefficients(c) for c in args.coeff.split(",")]
    for c in coeffs:
        if c is INTEGERS:
            raise CliError("the Witt condition is tested over fields", EXIT_PARSE)
    reports = []
    for c in coeffs:
        try:
            reports.append(witt_condition_check(X, c, args.check_all_links))
        except WittError as e:
            raise CliError(str(e), EXIT_NOT_PSEUDOMANIFOLD)
    if args.json:
        doc = {
            "command": "witt-check",
            "space": args.catalog or args.space,
            "results": [
                {
                    "coefficients": r.coeff_label,
                    "passes": r.passes,
                    "oriented": r.oriented,
                    "irreducible": r.irreducible,
                    "checks": [
                        {
                            "stratum_dim": c.stratum_dim,
                            "middle_degree": c.middle_degree,
                            "link_dim": c.link_dim_checked,
                            "passes": c.passes,
                            "all_links_agree": c.all_links_agree,
                        }
                        for c in r.checks
                    ],
                }
                for r in reports
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        name = args.catalog or args.space
        r0 = reports[0]
        print(f"Witt condition for {name} "
              f"(oriented={r0.oriented}, irreducible={r0.irreducible})")
        for r in reports:
            verdict = "pass" if r.passes else "fail"
            detail = "; ".join(
                f"stratum dim {c.stratum_dim}: middle IH dim {c.link_dim_checked}"
                for c in r.checks
            ) or "no odd-codimension strata"
            print(f"  {r.coeff_label}: {verdict} ({detail})")
    return 0


def _parse_gram_entry(text, field):
    if isinstance(text, str) and text.startswith("poly:"):
        coeffs = [int(c) for c in text[5:].split(",")]
        if not hasattr(field, "from_coeffs"):
            raise CliError("poly entries need Fq coefficients", EXIT_PARSE)
        return field.from_coeffs(coeffs)
    if isinstance(text, str) and "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    if isinstance(field, Rationals):
        return Fraction(int(text))
    return field.from_int(int(text))


def load_gram_matrix(path_or_spec, field):
    if path_or_spec.startswith("I") and path_or_spec[1:].isdigit():
        n = int(path_or_spec[1:])
        return BilinearForm(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], field
        )
    try:
        with open(path_or_spec) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read matrix file {path_or_spec}: {e}", EXIT_PARSE)
    try:
        n = int(doc["dimension"])
        flat = [_parse_gram_entry(e, field) for e in doc["entries"]]
        if len(flat) != n * n:
            raise ValueError(f"need {n * n} entries, got {len(flat)}")
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        return BilinearForm(rows, field, lift=False)
    except (KeyError, TypeError, ValueError, WittError) as e:
        raise CliError(f"bad matrix file {path_or_spec}: {e}", EXIT_PARSE)


def cmd_witt_class(args):
    field = parse_coefficients(args.field)
    if field is INTEGERS:
        raise CliError("Witt classes live over fields", EXIT_PARSE)
    form = load_gram_matrix(args.matrix, field)
    if not form.is_nondegenerate():
        raise CliError("degenerate Gram matrix", EXIT_DEGENERATE)
    try:
        cls = witt_invariants(form)
    except WittError as e:
        raise CliError(str(e), EXIT_DEGENERATE)
    if args.json:
        doc = {
            "command": "witt-class",
            "matrix": args.matrix,
            "field": args.field,
            "class": {
                "description": cls.describe(),
                "identity": cls.is_identity,
                "dim0": cls.dim0,
                "dpm": cls.dpm,
                "signature": cls.signature,
            },
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        tag = " (trivial class)" if cls.is_identity else ""
        print(f"Witt class over {cls.field_label}: {cls.describe()}{tag}")
    return 0


def cmd_bordism(args):
    if not is_prime(args.p):
        raise CliError(f"{args.p} is not prime", EXIT_PARSE)
    if args.space:
        X = load_space_file(args.space)
        h = ordinary_homology(X.complex, INTEGERS)
        group = omega_splitting(h, args.n, args.p)
        subject = f"space {args.space}"
    else:
        group = bordism_group(args.n, args.p)
        subject = "a point"
    if args.json:
        doc = {
            "command": "bordism",
            "n": args.n,
            "p": args.p,
            "space": args.space,
            "group": {
                "free_rank": group.free_rank,
                "torsion": list(group.torsion),
                "description": group.describe(),
            },
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(f"Witt bordism in degree {args.n} over Z_{args.p} of {subject}: "
              f"{group.describe()}")
    return 0


def cmd_catalog(args):
    entries = catalog_entries()
    if args.json:
        doc = {
            "command": "catalog",
            "entries": [
                {
                    "name": e.name,
                    "dimension": e.dimension,
                    "kind": e.kind,
                    "cost_class": e.cost_class,
                    "description": e.description,
                }
                for e in entries
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        width = max(len(e.name) for e in entries)
        for e in entries:
            print(f"{e.name:<{width}}  dim {e.dimension}  {e.kind:<12} "
                  f"{e.cost_class:<8} {e.description}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ihcalc",
        description="intersection homology and Witt condition calculator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_space_args(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--catalog", help="built-in space name")
        group.add_argument("--space", help="space file (JSON)")
        p.add_argument("--strict", action="store_true",
                       help="fail on non-pseudomanifold input")
        p.add_argument("--normalize-triangulation", action="store_true",
                       help="apply one barycentric subdivision before computing")

    p = sub.add_parser("compute", help="intersection homology table")
    add_space_args(p)
    p.add_argument("--perversity", default="m",
                   help="0 | m | n | t | p:v2,v3,...")
    p.add_argument("--coeff", default="Q", help="Q | Z | Zp:<p> | Fq:<p>:<m>")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("witt-check", help="Witt condition verdicts")
    add_space_args(p)
    p.add_argument("--coeff", default="Q", help="comma-separated field specs")
    p.add_argument("--check-all-links", action="store_true",
                   help="check every link in each stratum component")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_witt_check)

    p = sub.add_parser("witt-class", help="classify a symmetric form")
    p.add_argument("--matrix", required=True,
                   help="matrix file (JSON) or I<n> for the identity")
    p.add_argument("--field", required=True, help="Q | Zp:<p> | Fq:<p>:<m>")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_witt_class)

    p = sub.add_parser("bordism", help="Witt bordism groups")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--space", help="space file for the splitting formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bordism)

    p = sub.add_parser("catalog", help="list built-in spaces")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_catalog)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (CoefficientError, SimplicialError, CatalogError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PerversityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PERVERSITY


if __name__ == "__main__":
    sys.exit(main())
