"""Command-line entry point.

Subcommands:

* ``hilbert``           dimension table of the graded pieces
* ``geometry``          divisor classification and stability witnesses
* ``futaki``            weight/Futaki table for one configuration
* ``c3``                normal-element certificates and membership table
* ``stability``         the combined pipeline with seeded sampling
* ``verify-estimates``  sign table for the closed-form margins
* ``catalog``           list built-in algebras or emit one as JSON

Every subcommand accepts ``--json`` for a canonical machine-readable
report (identical inputs and seed give byte-identical output).  Exit
codes: 0 for a completed run, 2 when the classification is Unresolved,
1 for bad input or an internal error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

import numpy as np

from . import cache
from .algebra import ResourceLimitError
from .catalog import (commutators, fixture_names, load_fixture,
                      quantum_plane, sklyanin)
from .central import (NotOneDimensional, RankDeficientSampling,
                      membership_report, normal_element,
                      plane_through_point)
from .estimates import CASES, positivity_scan
from .fields import GF, QQ
from .formats import (FormatError, canonical_dumps, digest, dump_algebra,
                      dump_flag, load_json, parse_algebra, parse_flag)
from .linalg import Subspace
from .pointscheme import (DegeneratePointError, SemistandardViolationError,
                          classify)
from .testconfig import (TrivialFiltrationError, flag, flag_verdict,
                         random_flag, weight_table)

OK, INTERNAL_ERROR, UNRESOLVED = 0, 1, 2

# representative shapes scanned per estimate case
SCAN_SHAPES = {
    "point-off-divisor": ((1, 0), (2, 1)),
    "point-generic-pencil-heavy": ((1, 0), (2, 1)),
    "point-generic-line-heavy": ((0, 1), (1, 2)),
    "point-smooth-fixed": ((1, 0), (1, 1)),
    "point-at-node": ((1, 0), (2, 1)),
    "line-component-only": ((0, 1), (0, 3)),
    "line-component-mixed": ((1, 1), (1, 2)),
}

FAMILIES = {
    "sklyanin": ("a", "b", "c"),
    "quantum-plane": ("q1", "q2", "q3"),
    "commutators": (),
}


class CliError(Exception):
    """A problem the user can fix; message goes to stderr, exit code 1."""


class Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for
    # Unresolved here, so route usage problems through CliError instead
    def error(self, message):
        raise CliError(message)


def _plain(obj):
    """Recursively strip the report down to JSON-native values."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _emit(report, args, human):
    if args.json:
        print(canonical_dumps(_plain(report)))
    else:
        for line in human:
            print(line)


def _load_algebra(args, max_degree):
    doc = load_json(args.algebra)
    algebra = parse_algebra(doc, limit_dim=args.limit_dim)
    if not args.no_cache:
        cache.warm(algebra, max_degree)
    return algebra


def _save_cache(algebra, args):
    if not args.no_cache:
        cache.persist(algebra)


def _flag_spaces(filt):
    """First 2- and 1-dimensional levels of a filtration, if present."""
    plane = line = None
    for k in range(1, filt.depth + 1):
        level = filt.level(k)
        if level.dim == 2 and plane is None:
            plane = level
        elif level.dim == 1 and line is None:
            line = level
    return plane, line


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_hilbert(args):
    algebra = _load_algebra(args, args.max_degree)
    dims = algebra.hilbert(args.max_degree)
    expected = [(n + 1) * (n + 2) // 2 for n in range(args.max_degree + 1)]
    regular = dims == expected
    _save_cache(algebra, args)
    report = {
        "command": "hilbert",
        "algebra": digest(dump_algebra(algebra)),
        "max_degree": args.max_degree,
        "dims": dims,
        "expected": expected,
        "regular": regular,
    }
    lines = [f"degree dimensions through {args.max_degree}:"]
    lines += [f"  n={n:<2d} dim={d:<4d} expected={e}"
              + ("" if d == e else "  <-- off")
              for n, (d, e) in enumerate(zip(dims, expected))]
    lines.append("regular: " + ("yes" if regular else "no"))
    _emit(report, args, lines)
    return OK


def cmd_geometry(args):
    algebra = _load_algebra(args, 3)
    geo = classify(algebra)
    _save_cache(algebra, args)
    report = {
        "command": "geometry",
        "algebra": digest(dump_algebra(algebra)),
        "verdict": geo.verdict,
        "witness": geo.witness,
        "cubic": geo.cubic,
        "lines": geo.lines,
        "singular_rational": geo.singular_rational,
        "singular_extension_degrees": geo.singular_extension_degrees,
        "notes": geo.notes,
    }
    lines = [f"verdict: {geo.verdict}"]
    if geo.witness:
        kind = geo.witness["type"]
        what = {k: v for k, v in geo.witness.items() if k != "type"}
        lines.append(f"witness: {kind} {what}")
    if geo.lines:
        lines.append(f"line components: {geo.lines}")
    if geo.singular_rational:
        lines.append(f"rational singular points: {geo.singular_rational}")
    if geo.singular_extension_degrees:
        lines.append("singular orbits over extensions of degree: "
                     f"{geo.singular_extension_degrees}")
    for note in geo.notes:
        lines.append(f"note: {note}")
    _emit(report, args, lines)
    return UNRESOLVED if geo.verdict == "Unresolved" else OK


def cmd_futaki(args):
    algebra = _load_algebra(args, max(args.max_degree, args.q))
    filt = parse_flag(load_json(args.flag), algebra.field)
    degrees = sorted(set(range(1, args.max_degree + 1)) | {args.q})
    table = weight_table(algebra, filt, degrees)
    verdict = flag_verdict(algebra, filt, args.q)
    _save_cache(algebra, args)
    report = {
        "command": "futaki",
        "algebra": digest(dump_algebra(algebra)),
        "q": args.q,
        "rows": [{"n": row.degree, "dims": row.dims,
                  "weight": row.weight, "futaki": row.futaki}
                 for row in table.rows],
        "futaki_one": verdict.futaki_one,
        "futaki_q": verdict.futaki_q,
        "verdict": verdict.verdict,
    }
    lines = ["  n  weight  F(n)       chain dims"]
    for row in table.rows:
        lines.append(f"  {row.degree:<3d}{row.weight:<8d}"
                     f"{str(row.futaki):<11s}{list(row.dims)}")
    lines.append(f"F({args.q}) = {verdict.futaki_q} vs F(1) = "
                 f"{verdict.futaki_one}: {verdict.verdict}")
    _emit(report, args, lines)
    return OK


def cmd_c3(args):
    algebra = _load_algebra(args, args.max_degree)
    ne = normal_element(algebra)
    degrees = list(range(1, args.max_degree + 1))
    ideal_degrees = [n for n in degrees if n >= 3]
    commutes = ne.commutes_with_generators()
    injective = ne.image_dimension_certificate(ideal_degrees)
    quotient = ne.quotient_dimension_certificate(degrees)
    membership = None
    if args.flag is not None:
        plane, line = _flag_spaces(parse_flag(load_json(args.flag),
                                              algebra.field))
        membership = membership_report(ne, plane, line)
    _save_cache(algebra, args)
    report = {
        "command": "c3",
        "algebra": digest(dump_algebra(algebra)),
        "coordinates": [str(v) for v in ne.quotient_vector],
        "tensor": [str(v) for v in ne.tensor],
        "certificates": {
            "two_sided_degree_4": commutes,
            "multiplication_injective": injective,
            "quotient_dimension_3n": quotient,
            "degrees": degrees,
        },
        "membership": membership,
    }
    lines = [
        "normal element (degree-3 quotient coordinates): "
        + "[" + ", ".join(str(v) for v in ne.quotient_vector) + "]",
        f"commutes with generators in degree 4: {commutes}",
        f"multiplication by it is injective (degrees {ideal_degrees}): "
        f"{injective}",
        f"quotient has dimension 3n (degrees {degrees}): {quotient}",
    ]
    if membership is not None:
        lines.append("membership:")
        lines += [f"  {pattern}: {'yes' if hit else 'no'}"
                  for pattern, hit in membership.items()]
    _emit(report, args, lines)
    return OK


def _witness_flag(algebra, witness):
    """Build the destabilizing configuration a geometric witness points
    at: the component's linear form for a line, the plane of forms
    vanishing at the point for a fixed singular point."""
    field = algebra.field
    if witness["type"] in ("invariant_line", "repeated_line"):
        coeffs = [int(v) if field.p is not None else Fraction(v)
                  for v in witness["line"]]
        line = Subspace.from_rows(field, 3, field.array([coeffs]))
        return flag(None, 0, line, 1), {"U": witness["line"], "m": 1}
    if witness["type"] == "fixed_singular_point":
        point = tuple(field.scalar(int(v) if field.p is not None
                                   else Fraction(v))
                      for v in witness["point"])
        plane = plane_through_point(field, point)
        return flag(plane, 1, None, 0), {"W_vanishing_at": witness["point"],
                                         "l": 1}
    return None, None


def cmd_stability(args):
    algebra = _load_algebra(args, max(6, args.q))
    field = algebra.field
    hilbert_regular = algebra.is_hilbert_regular(6)
    geo = classify(algebra)

    rng = random.Random(args.seed)
    tallies = {"passes": 0, "marginal": 0, "destabilizing": 0}
    exhibits = []
    for _ in range(args.samples):
        sample = random_flag(field, rng)
        verdict = flag_verdict(algebra, sample.filtration(), args.q)
        tallies[verdict.verdict] += 1
        if verdict.verdict != "passes" and len(exhibits) < 3:
            exhibits.append({"flag": dump_flag(sample, field),
                             "futaki_q": verdict.futaki_q,
                             "futaki_one": verdict.futaki_one,
                             "verdict": verdict.verdict})

    witness_entry = None
    if geo.verdict == "Unstable" and geo.witness is not None:
        built, described = _witness_flag(algebra, geo.witness)
        if built is not None:
            verdict = flag_verdict(algebra, built.filtration(), args.q)
            witness_entry = {"flag": described,
                             "futaki_q": verdict.futaki_q,
                             "futaki_one": verdict.futaki_one,
                             "verdict": verdict.verdict}
            if verdict.verdict == "destabilizing":
                raise RuntimeError(
                    "cross-module inconsistency: geometric witness gave a "
                    "destabilizing configuration, expected marginal")

    # a geometrically certified stable algebra must never sample a
    # marginal or destabilizing configuration
    if geo.stable and (tallies["marginal"] or tallies["destabilizing"]):
        raise RuntimeError(
            "cross-module inconsistency: stable verdict "
            f"{geo.verdict} with non-passing samples {tallies}")

    clean = not (tallies["marginal"] or tallies["destabilizing"])
    if hilbert_regular and geo.stable and clean:
        conclusion = (f"stable (certified geometrically, consistent with "
                      f"Futaki sampling at q={args.q})")
    elif geo.verdict == "Unstable":
        conclusion = "unstable (geometric witness"
        conclusion += ("; marginal configuration exhibited)"
                       if witness_entry is not None
                       else " over an extension field)")
    elif geo.verdict == "Unresolved":
        conclusion = "unresolved (base-field-limited classification)"
    elif not hilbert_regular:
        conclusion = "not Hilbert-regular through degree 6"
    else:
        conclusion = f"degenerate input ({geo.verdict})"

    _save_cache(algebra, args)
    report = {
        "command": "stability",
        "algebra": digest(dump_algebra(algebra)),
        "hilbert_regular": hilbert_regular,
        "verdict": geo.verdict,
        "witness": geo.witness,
        "sampling": {"seed": args.seed, "count": args.samples, "q": args.q,
                     "tallies": tallies},
        "exhibits": exhibits,
        "witness_flag": witness_entry,
        "conclusion": conclusion,
    }
    lines = [
        f"hilbert regular through degree 6: "
        + ("yes" if hilbert_regular else "no"),
        f"geometric verdict: {geo.verdict}"
        + (f" ({geo.witness})" if geo.witness else ""),
        f"sampling: {args.samples} configurations at q={args.q}, "
        f"seed={args.seed} -> {tallies['passes']} pass, "
        f"{tallies['marginal']} marginal, "
        f"{tallies['destabilizing']} destabilizing",
    ]
    if witness_entry:
        lines.append(
            f"witness configuration {witness_entry['flag']}: "
            f"F({args.q}) = {witness_entry['futaki_q']}, "
            f"F(1) = {witness_entry['futaki_one']} "
            f"({witness_entry['verdict']})")
    lines.append("conclusion: " + conclusion)
    _emit(report, args, lines)
    return UNRESOLVED if geo.verdict == "Unresolved" else OK


def cmd_verify_estimates(args):
    if args.case == "all":
        names = list(SCAN_SHAPES)
    elif args.case in SCAN_SHAPES:
        names = [args.case]
    else:
        known = ", ".join(SCAN_SHAPES)
        raise CliError(f"unknown case {args.case!r}; choose from: {known}, "
                       "all")
    degrees = range(2, args.n_max + 1)
    rows = []
    for name in names:
        for l, m in SCAN_SHAPES[name]:
            scan = positivity_scan(name, degrees, l, m)
            rows.append({"case": name, "plane_reps": l, "line_reps": m,
                         "ok": scan["ok"], "zeros": scan["zeros"],
                         "violations": scan["violations"]})
    all_ok = all(row["ok"] for row in rows)
    report = {"command": "verify-estimates", "n_max": args.n_max,
              "rows": rows, "ok": all_ok}
    lines = [f"sign scan over n = 2..{args.n_max}:"]
    for row in rows:
        status = "pass" if row["ok"] else "FAIL"
        zeros = {k: v for k, v in row["zeros"].items() if v}
        lines.append(
            f"  {row['case']:<28s} l={row['plane_reps']} "
            f"m={row['line_reps']}  {status}"
            + (f"  boundary zeros {zeros}" if zeros else "")
            + (f"  violations {row['violations'][:3]}"
               if row["violations"] else ""))
    lines.append("all cases pass" if all_ok else "VIOLATIONS FOUND")
    _emit(report, args, lines)
    return OK if all_ok else INTERNAL_ERROR


def _parse_params(text, wanted):
    given = {}
    if text:
        for item in text.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise CliError(f"parameters look like a=1,b=2; got {item!r}")
            try:
                given[key.strip()] = Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise CliError(f"bad value in {item!r}: {exc}") from exc
    missing = [k for k in wanted if k not in given]
    extra = [k for k in given if k not in wanted]
    if missing or extra:
        raise CliError(
            f"family takes parameters {', '.join(wanted) or '(none)'}; "
            f"missing {missing or 'none'}, unknown {extra or 'none'}")
    return given


def cmd_catalog(args):
    if args.action == "list":
        report = {"command": "catalog", "fixtures": fixture_names(),
                  "families": {name: list(params)
                               for name, params in FAMILIES.items()}}
        lines = ["committed fixtures:"]
        lines += [f"  {name}" for name in fixture_names()]
        lines.append("parametric families (emit with --params):")
        lines += [f"  {name} ({', '.join(params) or 'no parameters'})"
                  for name, params in FAMILIES.items()]
        _emit(report, args, lines)
        return OK

    name = args.name
    if name is None:
        raise CliError("catalog emit needs a name")
    if name in fixture_names():
        if args.params:
            raise CliError(f"{name!r} is a committed fixture and takes no "
                           "parameters")
        algebra, _ = load_fixture(name)
    elif name in FAMILIES:
        params = _parse_params(args.params, FAMILIES[name])
        field = QQ if args.p == 0 else GF(args.p)
        values = [params[k] for k in FAMILIES[name]]
        maker = {"sklyanin": sklyanin, "quantum-plane": quantum_plane,
                 "commutators": commutators}[name]
        algebra = maker(*values, field) if values else maker(field)
    else:
        raise CliError(f"unknown catalog entry {name!r}; "
                       "see `catalog list`")
    print(canonical_dumps(dump_algebra(algebra)))
    return OK


# --------------------------------------------------------------------------
# argument wiring
# --------------------------------------------------------------------------

def _common(sub, algebra=True, degree_default=6):
    if algebra:
        sub.add_argument("--algebra", required=True,
                         help="path to an algebra JSON document")
        sub.add_argument("--limit-dim", type=int, default=None,
                         help="raise the ambient-dimension safety limit")
        sub.add_argument("--no-cache", action="store_true",
                         help="skip the on-disk graded-piece cache")
        sub.add_argument("--max-degree", type=int, default=degree_default,
                         help=f"top degree (default {degree_default})")
    sub.add_argument("--json", action="store_true",
                     help="canonical JSON report on stdout")


def build_parser() -> Parser:
    parser = Parser(prog="ncstab",
                    description="exact stability certificates for "
                                "quadratic algebras on three generators")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("hilbert", help="graded dimension table")
    _common(sub)
    sub.set_defaults(run=cmd_hilbert)

    sub = subs.add_parser("geometry", help="divisor classification")
    _common(sub)
    sub.set_defaults(run=cmd_geometry)

    sub = subs.add_parser("futaki", help="weight table for one "
                                         "configuration")
    _common(sub)
    sub.add_argument("--flag", required=True,
                     help="path to a flag JSON document")
    sub.add_argument("--q", type=int, default=3,
                     help="stability degree (default 3)")
    sub.set_defaults(run=cmd_futaki)

    sub = subs.add_parser("c3", help="normal-element certificates")
    _common(sub)
    sub.add_argument("--flag", default=None,
                     help="optional flag JSON; enables the membership "
                          "table for its W and U")
    sub.set_defaults(run=cmd_c3)

    sub = subs.add_parser("stability", help="combined pipeline")
    _common(sub)
    sub.add_argument("--q", type=int, default=3,
                     help="stability degree (default 3)")
    sub.add_argument("--samples", type=int, default=200,
                     help="number of sampled configurations (default 200)")
    sub.add_argument("--seed", type=int, default=0,
                     help="sampling seed (default 0)")
    sub.set_defaults(run=cmd_stability)

    sub = subs.add_parser("verify-estimates",
                          help="sign table for the closed-form margins")
    sub.add_argument("--case", default="all",
                     help="estimate case name or 'all' (default)")
    sub.add_argument("--n-max", type=int, default=300,
                     help="top degree of the scan (default 300)")
    sub.add_argument("--json", action="store_true",
                     help="canonical JSON report on stdout")
    sub.set_defaults(run=cmd_verify_estimates)

    sub = subs.add_parser("catalog", help="built-in algebras")
    sub.add_argument("action", choices=("list", "emit"))
    sub.add_argument("name", nargs="?", default=None,
                     help="fixture or family name (for emit)")
    sub.add_argument("--params", default=None,
                     help="family parameters, e.g. a=1,b=2,c=3")
    sub.add_argument("--p", type=int, default=10007,
                     help="prime for family constructors; 0 for the "
                          "rationals (default 10007)")
    sub.add_argument("--json", action="store_true",
                     help="canonical JSON report on stdout")
    sub.set_defaults(run=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except FormatError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except (TrivialFiltrationError, DegeneratePointError,
            SemistandardViolationError, RankDeficientSampling,
            NotOneDimensional, ResourceLimitError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
