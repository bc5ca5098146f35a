"""Command-line front end: gen, verify, stats, search, selftest.

Exit codes: 0 success, 1 theorem-check failure, 2 usage or parse error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .charverify import PlaneFamily, forward_generate, search_q2, verify_theorem
from .gf import DEFAULT_MAX_Q, FieldSpec, format_field, parse_field, prime_power
from .pg3 import format_vector, geometry, parse_vector
from .quadric import lines_on, parse_form, secant_mask, standard_hyperbolic, zero_mask

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class FamilyFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class RunConfig:
    command: str
    q: FieldSpec | None = None
    input: Path | None = None
    output: Path | None = None
    report_format: str = "text"


# -- family file format --------------------------------------------------------

def format_family(family: PlaneFamily) -> str:
    geo = geometry(family.spec)
    lines = [f"q={format_field(family.spec)}"]
    lines += [format_vector(geo.planes[j].dual_coords) for j in sorted(family.members)]
    return "\n".join(lines) + "\n"


def parse_family(text: str, expected: FieldSpec | None = None) -> PlaneFamily:
    spec = None
    members: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if spec is None:
            if not line.startswith("q="):
                raise FamilyFormatError(lineno, "expected header 'q=<p>^<e>'")
            try:
                spec = parse_field(line[2:])
            except ValueError as exc:
                raise FamilyFormatError(lineno, str(exc)) from None
            if expected is not None and spec != expected:
                raise FamilyFormatError(lineno, f"file declares q={format_field(spec)}, "
                                                f"expected q={format_field(expected)}")
            geo = geometry(spec)
            continue
        try:
            coords = parse_vector(spec, line)
        except ValueError as exc:
            raise FamilyFormatError(lineno, str(exc)) from None
        j = geo.plane_from_coords(coords).index
        if j in members:
            raise FamilyFormatError(lineno, f"duplicate plane {line}")
        members.add(j)
    if spec is None:
        raise FamilyFormatError(1, "missing header")
    if not members:
        raise FamilyFormatError(1, "family is empty")
    return PlaneFamily(spec, frozenset(members))


# -- census --------------------------------------------------------------------

def census(spec: FieldSpec) -> list[tuple[str, object, object, bool]]:
    """Measured vs formula values for PG(3,q) and its standard hyperbolic quadric."""
    q = spec.q
    geo = geometry(spec)
    form = standard_hyperbolic(spec)
    on_q = zero_mask(form)
    secant = secant_mask(form)
    through_point = secant[geo.point_planes].sum(axis=1)
    through_line = secant[geo.line_planes].sum(axis=1)
    rows = [
        ("points", geo.n_points, q**3 + q**2 + q + 1),
        ("lines", geo.n_lines, (q**2 + 1) * (q**2 + q + 1)),
        ("planes", len(geo.planes), (q**2 + 1) * (q + 1)),
        ("quadric points", int(on_q.sum()), (q + 1) ** 2),
        ("generators", len(lines_on(form)), 2 * (q + 1)),
        ("secant planes", int(secant.sum()), q**3 - q),
        ("tangent planes", int((~secant).sum()), (q + 1) ** 2),
        ("secant planes per quadric point", sorted(set(through_point[on_q].tolist())), [q * q - q]),
        ("secant planes per other point", sorted(set(through_point[~on_q].tolist())), [q * q]),
    ]
    out = [(name, m, e, m == e) for name, m, e in rows]
    spectrum = sorted(set(through_line.tolist()))
    allowed = sorted({0, q - 1, q, q + 1})
    out.append(("line secant spectrum", spectrum, allowed, set(spectrum) <= set(allowed)))
    return out


def format_census(spec: FieldSpec, rows) -> str:
    lines = [f"PG(3,{spec.q})  q={format_field(spec)}", f"{'quantity':34} {'measured':>16} {'formula':>16}"]
    for name, measured, expected, ok in rows:
        lines.append(f"{name:34} {str(measured):>16} {str(expected):>16}  {'ok' if ok else 'MISMATCH'}")
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------

def cmd_gen(cfg: RunConfig) -> int:
    family = forward_generate(standard_hyperbolic(cfg.q))
    try:
        cfg.output.write_text(format_family(family))
    except OSError as exc:
        print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(family)} planes to {cfg.output}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    try:
        text = cfg.input.read_text()
    except OSError as exc:
        print(f"error: cannot read {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        family = parse_family(text, cfg.q)
    except FamilyFormatError as exc:
        print(f"parse error: {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cert = verify_theorem(family)
    doc = cert.to_json() if cfg.report_format == "json" else cert.to_text()
    if cfg.output is not None:
        try:
            cfg.output.write_text(doc)
        except OSError as exc:
            print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
            return EXIT_IO
        failure = cert.first_failure
        print("PASS" if cert.passed else f"FAIL {failure.name if failure else 'incomplete'}")
    else:
        sys.stdout.write(doc)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_stats(cfg: RunConfig) -> int:
    rows = census(cfg.q)
    sys.stdout.write(format_census(cfg.q, rows))
    return EXIT_OK if all(ok for *_, ok in rows) else EXIT_FAIL


def cmd_search(cfg: RunConfig) -> int:
    if cfg.q.q != 2:
        print("error: exhaustive search is only supported for q=2", file=sys.stderr)
        return EXIT_USAGE
    result = search_q2()
    sizes = sorted({len(f) for f in result.survivors})
    round_trip = 0
    for fam in result.survivors:
        cert = verify_theorem(fam)
        if cert.passed and forward_generate_from(cert, fam.spec) == fam.members:
            round_trip += 1
    print(f"subsets scanned        {result.scanned}")
    print(f"(P1) survivors         {result.p1_survivors}")
    print(f"(P1)+(P2) survivors    {len(result.survivors)}")
    print(f"survivor sizes         {sizes}")
    print(f"hyperbolic forms       {result.hyperbolic_count}")
    print(f"round-trip verified    {round_trip}")
    ok = result.matches and round_trip == len(result.survivors) and sizes == [6]
    print("survivors = secant families of hyperbolic quadrics: " + ("yes" if ok else "NO"))
    return EXIT_OK if ok else EXIT_FAIL


def forward_generate_from(cert, spec: FieldSpec) -> frozenset[int]:
    return forward_generate(parse_form(spec, cert.reconstructed_form)).members


def cmd_selftest(cfg: RunConfig, max_q: int) -> int:
    failures = 0
    for q in range(2, max_q + 1):
        if prime_power(q) is None:
            continue
        spec = parse_field(str(q))
        stats_ok = all(ok for *_, ok in census(spec))
        cert = verify_theorem(forward_generate(standard_hyperbolic(spec)))
        print(f"q={q:<3} census {'ok' if stats_ok else 'FAIL'}  forward {'ok' if cert.passed else 'FAIL'}")
        failures += (not stats_ok) + (not cert.passed)
    return EXIT_OK if failures == 0 else EXIT_FAIL


# -- argument handling -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pg3quad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write the secant-plane family of x0x1 + x2x3")
    gen.add_argument("--q", required=True)
    gen.add_argument("--out", required=True, type=Path)

    ver = sub.add_parser("verify", help="verify a family file and emit a certificate")
    ver.add_argument("--q", required=True)
    ver.add_argument("--in", dest="input", required=True, type=Path)
    ver.add_argument("--report", type=Path)
    ver.add_argument("--format", choices=("text", "json"), default=None,
                     help="certificate format (default: json for .json reports, else text)")

    st = sub.add_parser("stats", help="census of PG(3,q) and the hyperbolic quadric")
    st.add_argument("--q", required=True)

    se = sub.add_parser("search", help="exhaustive search over all plane subsets of PG(3,2)")
    se.add_argument("--q", required=True)

    sel = sub.add_parser("selftest", help="census and forward verification for every q up to a bound")
    sel.add_argument("--max-q", type=int, default=5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    if args.command == "selftest":
        if not 2 <= args.max_q <= DEFAULT_MAX_Q:
            print(f"error: --max-q must be between 2 and {DEFAULT_MAX_Q}", file=sys.stderr)
            return EXIT_USAGE
        return cmd_selftest(RunConfig("selftest"), args.max_q)

    try:
        spec = parse_field(args.q)
    except ValueError as exc:
        print(f"error: unsupported q: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cfg = RunConfig(args.command, spec)
    if args.command == "gen":
        cfg.output = args.out
        return cmd_gen(cfg)
    if args.command == "verify":
        cfg.input, cfg.output = args.input, args.report
        fmt = args.format
        if fmt is None:
            fmt = "json" if args.report is not None and args.report.suffix == ".json" else "text"
        cfg.report_format = fmt
        return cmd_verify(cfg)
    if args.command == "stats":
        return cmd_stats(cfg)
    return cmd_search(cfg)


if __name__ == "__main__":
    sys.exit(main())
