"""Command-line surface: spectra, intensity scans, exponent fits, patches,
and the verification suite, with machine-readable CSV/JSON output.

File conventions: one `#` provenance line recording the effective math
parameters (thread count deliberately excluded: output is identical for any
thread count), one header row, then data rows.  Rationals serialize as
"numerator/denominator"; floats use shortest round-trip repr.

Exit codes: 0 success, 1 verification/acceptance failure, 2 usage error,
3 capacity/resource error.
"""

from __future__ import annotations

import argparse
import decimal
import json
import math
import sys
from fractions import Fraction

from . import asymptotics, diffraction, directspace
from .arith import CapacityError, build_sieve
from .asymptotics import ScanTable, fit_loglog, random_phi_samples
from .diffraction import KFreeParams, ZValue

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

ZSCAN_COLUMNS = ("x_exact", "x_decimal", "z_value", "tail_bound", "cutoff_qbar", "log10_x", "log10_z")
SPECTRUM_COLUMNS = ("m", "q", "z_decimal", "z_exact", "intensity")
PATCH_COLUMNS = ("quantity", "arg", "empirical", "reference")

PHI_APPROX_GRID = (Fraction(1, 7), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(9, 10))


def parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(decimal.Decimal(text))
    except (ValueError, ZeroDivisionError, decimal.InvalidOperation) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def k_value(text: str) -> int:
    k = int(text)
    if k < 2:
        raise argparse.ArgumentTypeError("k must be an integer >= 2")
    return k


def positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ------------------------------ zscan tables ------------------------------


def zscan_provenance(args, points: int) -> str:
    return (
        f"# kfree zscan k={args.k} x_min={fmt_rational(args.x_min)}"
        f" x_max={fmt_rational(args.x_max)} points={points}"
        f" rel_tol={args.rel_tol!r} q_max={args.q_max} format={args.format}"
    )


def zscan_row_strings(row: ZValue) -> dict[str, str]:
    value = float(row.value)
    return {
        "x_exact": fmt_rational(row.x),
        "x_decimal": repr(float(row.x)),
        "z_value": repr(value),
        "tail_bound": repr(float(row.tail_bound)),
        "cutoff_qbar": str(row.cutoff_qbar),
        "log10_x": repr(math.log10(float(row.x))),
        "log10_z": repr(math.log10(value)) if value > 0 else "nan",
    }


def dump_zscan_csv(provenance: str, rows: list[dict[str, str]]) -> str:
    lines = [provenance, ",".join(ZSCAN_COLUMNS)]
    lines += [",".join(row[c] for c in ZSCAN_COLUMNS) for row in rows]
    return "\n".join(lines) + "\n"


def dump_zscan_json(provenance: str, rows: list[dict[str, str]]) -> str:
    doc = {"provenance": provenance.lstrip("# "), "columns": list(ZSCAN_COLUMNS), "rows": rows}
    return json.dumps(doc, indent=2) + "\n"


def load_zscan(path: str) -> tuple[str, list[dict[str, str]]]:
    """Read a zscan table (either format); returns (provenance, row dicts)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return "# " + doc["provenance"], [dict(r) for r in doc["rows"]]
    lines = [ln for ln in text.splitlines() if ln]
    provenance = lines[0] if lines and lines[0].startswith("#") else ""
    body = lines[1:] if provenance else lines
    header = body[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in body[1:]]
    return provenance, rows


def provenance_fields(provenance: str) -> dict[str, str]:
    fields = {}
    for token in provenance.lstrip("# ").split():
        if "=" in token:
            key, _, val = token.partition("=")
            fields[key] = val
    return fields


def scan_table_from_rows(k: int, rel_tol: float, rows: list[dict[str, str]]) -> ScanTable:
    zrows = [
        ZValue(
            x=parse_rational(r["x_exact"]),
            value=float(r["z_value"]),
            tail_bound=float(r["tail_bound"]),
            cutoff_qbar=int(r["cutoff_qbar"]),
        )
        for r in rows
    ]
    return ScanTable(k=k, rows=zrows, rel_tol=rel_tol)


def default_points(x_min: Fraction, x_max: Fraction) -> int:
    decades = math.log10(float(x_max) / float(x_min))
    return max(2, int(round(4 * decades)) + 1)


def cmd_zscan(args) -> int:
    points = args.points if args.points is not None else default_points(args.x_min, args.x_max)
    tables = build_sieve(args.q_max)
    table = asymptotics.scan(
        args.k, args.x_min, args.x_max, points, args.rel_tol, tables, threads=args.threads
    )
    rows = [zscan_row_strings(r) for r in table.rows]
    provenance = zscan_provenance(args, points)
    text = dump_zscan_csv(provenance, rows) if args.format == "csv" else dump_zscan_json(provenance, rows)
    emit(text, args.out)
    return EXIT_OK


# -------------------------------- spectrum --------------------------------


def cmd_spectrum(args) -> int:
    if args.x_min < 0 or args.x_min >= args.x_max:
        raise ValueError("window requires 0 <= x_min < x_max")
    tables = build_sieve(max(args.q_max, 2))
    params = KFreeParams.for_k(args.k)
    window = diffraction.enumerate_support(params, args.x_min, args.x_max, args.q_max, tables)
    provenance = (
        f"# kfree spectrum k={args.k} x_lo={fmt_rational(args.x_min)}"
        f" x_hi={fmt_rational(args.x_max)} q_max={args.q_max}"
        f" omitted_intensity_bound={window.omitted_intensity_bound!r} format={args.format}"
    )
    rows = [
        {
            "m": str(pt.m),
            "q": str(pt.q),
            "z_decimal": repr(float(pt.z)),
            "z_exact": fmt_rational(pt.z),
            "intensity": repr(pt.intensity),
        }
        for pt in window.points
    ]
    if args.format == "csv":
        lines = [provenance, ",".join(SPECTRUM_COLUMNS)]
        lines += [",".join(row[c] for c in SPECTRUM_COLUMNS) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        doc = {"provenance": provenance.lstrip("# "), "columns": list(SPECTRUM_COLUMNS), "rows": rows}
        text = json.dumps(doc, indent=2) + "\n"
    emit(text, args.out)
    return EXIT_OK


# ----------------------------------- fit -----------------------------------


def cmd_fit(args) -> int:
    if args.table is not None:
        provenance, raw_rows = load_zscan(args.table)
        fields = provenance_fields(provenance)
        k = args.k if args.k is not None else int(fields.get("k", 0))
        if k < 2:
            raise ValueError("table carries no k; pass --k")
        rel_tol = float(fields.get("rel_tol", args.rel_tol))
        table = scan_table_from_rows(k, rel_tol, raw_rows)
    else:
        if args.x_min is None or args.x_max is None:
            raise ValueError("need a table path or --x-min/--x-max scan parameters")
        k = args.k if args.k is not None else 2
        points = args.points if args.points is not None else default_points(args.x_min, args.x_max)
        tables = build_sieve(args.q_max)
        table = asymptotics.scan(
            k, args.x_min, args.x_max, points, args.rel_tol, tables, threads=args.threads
        )
    fit = fit_loglog(table)
    verdict = "PASS" if fit.gap() <= args.band else "FAIL"
    lines = [
        f"slope          {fit.slope!r}",
        f"expected_slope {fit.expected_slope!r}",
        f"gap            {fit.gap()!r}",
        f"r_squared      {fit.r_squared!r}",
        f"max_residual   {fit.max_residual!r}",
        f"band           {args.band!r}",
        f"verdict        {verdict}",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out != "-":
        emit(text, args.out)
    return EXIT_OK if verdict == "PASS" else EXIT_FAIL


# ---------------------------------- patch ----------------------------------


def closed_form_reference(z: Fraction, params: KFreeParams, tables) -> str:
    """Atom intensity at rational z, or '' when it cannot be evaluated."""
    q = z.denominator
    if q > tables.limit:
        return ""
    try:
        return repr(diffraction.intensity(z.numerator, q, params, tables))
    except ValueError:
        return repr(0.0)  # not a support point: no atom at z


def cmd_patch(args) -> int:
    patch = directspace.generate_patch(args.k, args.n)
    params = KFreeParams.for_k(args.k)
    z_values = [parse_rational(s) for s in (args.z or [])]
    max_den = max((z.denominator for z in z_values), default=1)
    tables = build_sieve(max(64, min(max_den, 1 << 20)))
    dens = directspace.density(patch)
    rows = [
        {
            "quantity": "density",
            "arg": "",
            "empirical": repr(dens),
            "reference": repr(1.0 / params.zeta_k),
        }
    ]
    freqs = directspace.pair_frequencies(patch, min(10, args.n - 1))
    for m in range(freqs.m_max + 1):
        rows.append(
            {
                "quantity": "eta",
                "arg": str(m),
                "empirical": repr(float(freqs.eta[m])),
                "reference": repr(1.0 / params.zeta_k) if m == 0 else "",
            }
        )
    for z in z_values:
        emp = directspace.empirical_intensity(patch, z)
        rows.append(
            {
                "quantity": "intensity",
                "arg": fmt_rational(z),
                "empirical": repr(emp),
                "reference": closed_form_reference(z, params, tables),
            }
        )
    provenance = f"# kfree patch k={args.k} n={args.n} format={args.format}"
    if args.format == "csv":
        lines = [provenance, ",".join(PATCH_COLUMNS)]
        lines += [",".join(row[c] for c in PATCH_COLUMNS) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        doc = {"provenance": provenance.lstrip("# "), "columns": list(PATCH_COLUMNS), "rows": rows}
        text = json.dumps(doc, indent=2) + "\n"
    emit(text, args.out)
    return EXIT_OK


# ---------------------------------- verify ----------------------------------


def cmd_verify(args) -> int:
    tables = build_sieve(max(args.q_max, 1000))
    params = KFreeParams.for_k(args.k)
    lines = []
    failed = False

    report = asymptotics.verify_fk_bounds(args.k, args.q_max, tables)
    status = "ok" if report.ok else "VIOLATION"
    lines.append(
        f"{status} peak-weight bounds: {report.checked} values of q <= {args.q_max},"
        f" {len(report.violations)} violations"
    )
    if report.edge_cases:
        lines.append("ok   q=1 edge: weight equals the lower-bound expression;"
                     " outside lemma hypothesis, not a failure")
    failed |= not report.ok

    sample_top = min(2000, args.q_max)
    mismatches = []
    for q in range(1, sample_top + 1):
        try:
            lemma = diffraction.f_k_lemma_form(q, params, tables)
        except ValueError:
            continue
        if diffraction.f_k(q, params, tables) != lemma:
            mismatches.append(q)
    status = "ok" if not mismatches else "VIOLATION"
    lines.append(
        f"{status} peak-weight identity (product vs totient/divisor-sum form):"
        f" q <= {sample_top}, {len(mismatches)} mismatches"
    )
    failed |= bool(mismatches)

    approx = asymptotics.verify_phi_approx(min(args.q_max, 2000), PHI_APPROX_GRID, tables)
    status = "ok" if approx.ok else "VIOLATION"
    lines.append(
        f"{status} totient counting bound: {approx.checked} checks, {len(approx.failures)} failures"
    )
    failed |= not approx.ok

    samples = random_phi_samples(args.k, 2000, min(args.q_max, 10000), tables, seed=0)
    ident = asymptotics.verify_phi_identity(samples, args.k, tables)
    status = "ok" if ident.ok else "VIOLATION"
    lines.append(
        f"{status} totient radical-reduction identity: {ident.checked} samples,"
        f" {len(ident.failures)} failures"
    )
    failed |= not ident.ok

    mu_report = asymptotics.verify_mu_tail(args.k, (Fraction(1, 100), Fraction(1, 1000)), tables)
    worst = max(abs(r.ratio - 1) for r in mu_report.rows)
    status = "ok" if worst < 0.25 else "VIOLATION"
    lines.append(f"{status} squarefree tail sums: max |ratio - 1| = {worst:.4f} over y in {{1e-2, 1e-3}}")
    failed |= worst >= 0.25

    div = asymptotics.divisor_bound_threshold(args.k, 0.5, min(args.q_max, 100000), tables)
    lines.append(
        f"ok   divisor-count threshold (eps=0.5): {div.violation_count} early violations,"
        f" largest at q={div.largest_violation}"
    )

    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out != "-":
        emit(text, args.out)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------- parser ----------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfree",
        description="Diffraction of the k-free integers: spectra, near-origin "
        "intensity scans, exponent fits, direct-space patches, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="enumerate support points in a window")
    spectrum.add_argument("--k", type=k_value, default=2)
    spectrum.add_argument("--x-min", type=parse_rational, required=True)
    spectrum.add_argument("--x-max", type=parse_rational, required=True)
    spectrum.add_argument("--q-max", type=positive_int, default=64)
    spectrum.add_argument("--out", default="-")
    spectrum.add_argument("--format", choices=("csv", "json"), default="csv")
    spectrum.set_defaults(func=cmd_spectrum)

    zscan = sub.add_parser("zscan", help="cumulative intensity over a log-spaced x grid")
    zscan.add_argument("--k", type=k_value, default=2)
    zscan.add_argument("--x-min", type=parse_rational, required=True)
    zscan.add_argument("--x-max", type=parse_rational, required=True)
    zscan.add_argument("--points", type=positive_int, default=None)
    zscan.add_argument("--rel-tol", type=float, default=1e-2)
    zscan.add_argument("--q-max", type=positive_int, default=1 << 21,
                       help="sieve table limit (radical cutoff capacity)")
    zscan.add_argument("--threads", type=int, default=0, help="0 = auto")
    zscan.add_argument("--out", default="-")
    zscan.add_argument("--format", choices=("csv", "json"), default="csv")
    zscan.set_defaults(func=cmd_zscan)

    fit = sub.add_parser("fit", help="log-log slope fit of a scan table")
    fit.add_argument("table", nargs="?", default=None, help="zscan output file (csv or json)")
    fit.add_argument("--k", type=k_value, default=None)
    fit.add_argument("--x-min", type=parse_rational, default=None)
    fit.add_argument("--x-max", type=parse_rational, default=None)
    fit.add_argument("--points", type=positive_int, default=None)
    fit.add_argument("--rel-tol", type=float, default=1e-2)
    fit.add_argument("--q-max", type=positive_int, default=1 << 21)
    fit.add_argument("--threads", type=int, default=0)
    fit.add_argument("--band", type=float, default=0.1)
    fit.add_argument("--out", default="-")
    fit.set_defaults(func=cmd_fit)

    patch = sub.add_parser("patch", help="direct-space patch statistics")
    patch.add_argument("--k", type=k_value, default=2)
    patch.add_argument("--n", type=positive_int, required=True)
    patch.add_argument("--z", action="append", default=None,
                       help="frequency to probe (repeatable, rational like 1/4)")
    patch.add_argument("--out", default="-")
    patch.add_argument("--format", choices=("csv", "json"), default="csv")
    patch.set_defaults(func=cmd_patch)

    verify = sub.add_parser("verify", help="run the numeric verification suite")
    verify.add_argument("--k", type=k_value, default=2)
    verify.add_argument("--q-max", type=positive_int, default=10000)
    verify.add_argument("--out", default="-")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
