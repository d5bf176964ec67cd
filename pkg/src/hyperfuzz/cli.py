"""Command-line front end.

Exit codes: 0 pass, 1 audit failure or failed precondition, 2 theorem
counterexample, 64 usage error (bad flags, missing or malformed files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .catalog import fixture_fields
from .hypercore import Hyperfield, Hypergroup, HypervectorSpace, PreconditionError, StructureError
from .ifalgebra import (
    CONVENTIONS,
    IFS,
    OPS,
    IFSConstraintError,
    check_characterization,
    check_if_hvs,
    check_if_hyperfield,
    combine_family,
)
from .lintrans import preimage_ifs
from .modelfind import KINDS, SIZE_CEILING, OverlaySearchError, SearchSpec, enumerate_structures
from .trials import THEOREMS, TrialSummary, run_theorem

EXIT_OK, EXIT_AUDIT, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        formats.write_atomic(out, text)
        print(f"wrote {out}", file=sys.stderr)


def _out_dir(out: str | None) -> Path:
    return Path(out).parent if out else Path.cwd()


def _print_report(title: str, report, as_json: bool) -> None:
    print(f"{title}: {report}")
    if as_json:
        for v in report.violations:
            print(json.dumps(v.to_record()))


# -- check / fuzz-check ---------------------------------------------------------------


def cmd_check(args) -> int:
    raw = formats.load_structure_raw(_existing(args.structure))
    report = raw.audit()
    _print_report(f"{raw.kind} on {len(raw.carrier)} element(s)", report, args.json)
    return EXIT_OK if report.ok else EXIT_AUDIT


def _field_overlay(args, space: HypervectorSpace, overlay: formats.OverlayFile) -> IFS:
    if args.field_overlay:
        return formats.load_overlay(_existing(args.field_overlay), structure=space.field).ifs
    if overlay.field_overlay is not None:
        return overlay.field_overlay.ifs
    raise UsageError("an overlay on a hypervector space needs --field-overlay or a 'field-overlay:' header")


def cmd_fuzz_check(args) -> int:
    raw = formats.load_structure_raw(_existing(args.structure))
    try:
        structure = raw.build()
    except StructureError as e:
        print(f"structure fails its axioms: {e.report}")
        return EXIT_AUDIT
    if isinstance(structure, Hypergroup):
        raise UsageError("fuzzy audits apply to hyperfields and hypervector spaces only")
    overlay = formats.load_overlay(_existing(args.overlay), structure=structure)
    if isinstance(structure, Hyperfield):
        report = check_if_hyperfield(structure, overlay.ifs)
        _print_report("IF hyperfield", report, args.json)
        return EXIT_OK if report.ok else EXIT_AUDIT
    A = _field_overlay(args, structure, overlay)
    field_report = check_if_hyperfield(structure.field, A)
    if not field_report.ok:
        _print_report("field overlay is not an IF hyperfield", field_report, args.json)
        return EXIT_AUDIT
    report = check_if_hvs(structure, A, overlay.ifs)
    _print_report("IF hypervector space", report, args.json)
    ok = report.ok
    if args.characterization:
        four = check_characterization(structure, A, overlay.ifs)
        _print_report("four-condition characterization", four, args.json)
        print("agree" if four.ok == report.ok else "DISAGREE")
        ok = ok and four.ok
    return EXIT_OK if ok else EXIT_AUDIT


# -- combine / preimage ------------------------------------------------------------------


def _refs(overlay: formats.OverlayFile, path: Path, out_dir: Path) -> tuple[str, str | None]:
    base = path.parent
    over = formats.relative_ref(base / overlay.over, out_dir)
    fo = None
    if overlay.field_overlay_ref is not None:
        fo = formats.relative_ref(base / overlay.field_overlay_ref, out_dir)
    return over, fo


def cmd_combine(args) -> int:
    paths = [_existing(p) for p in args.overlays]
    loaded = [formats.load_overlay(p) for p in paths]
    first = loaded[0]
    for p, o in zip(paths[1:], loaded[1:]):
        if o.structure != first.structure:
            raise UsageError(f"{p} is over a different structure than {paths[0]}")
    try:
        combined = combine_family([o.ifs for o in loaded], args.op, args.convention)
    except IFSConstraintError as e:
        print(f"DEF2.9 [x={e.label}]: combined overlay violates the IFS constraint: {e}", file=sys.stderr)
        return EXIT_AUDIT
    over, fo = _refs(first, paths[0], _out_dir(args.output))
    _emit(formats.serialize_overlay(combined, over, fo), args.output)
    return EXIT_OK


def cmd_preimage(args) -> int:
    map_path = _existing(args.map)
    mf = formats.load_map(map_path)
    overlay_path = _existing(args.overlay)
    overlay = formats.load_overlay(overlay_path)
    t = mf.linear_map
    if overlay.structure != t.target:
        raise UsageError(f"{overlay_path} is not over the target of {map_path}")
    pulled = preimage_ifs(t, overlay.ifs)
    out_dir = _out_dir(args.output)
    over = formats.relative_ref(map_path.parent / mf.source_ref, out_dir)
    _, fo = _refs(overlay, overlay_path, out_dir)
    _emit(formats.serialize_overlay(pulled, over, fo), args.output)
    return EXIT_OK


# -- theorem ------------------------------------------------------------------------------------


def _write_bundle(directory: Path, case, index: int) -> Path | None:
    cert = case.certificate
    try:
        overlay = IFS(case.space.carrier, cert.mu, cert.nu)
    except IFSConstraintError:
        return None
    d = directory / f"case-{index:03d}"
    d.mkdir(parents=True, exist_ok=True)
    formats.write_atomic(d / "field.hs", formats.serialize_structure(case.space.field))
    formats.write_atomic(d / "space.hs", formats.serialize_structure(case.space, field_ref="field.hs"))
    formats.write_atomic(d / "field.ifs", formats.serialize_overlay(case.field_ifs, "field.hs"))
    formats.write_atomic(d / "overlay.ifs", formats.serialize_overlay(overlay, "space.hs", "field.ifs"))
    return d


def _summary_line(s: TrialSummary) -> str:
    if s.theorem == "3.5":
        return f"theorem 3.5: {s.verified}/{s.trials} agree"
    conv = f" ({s.convention} convention)" if s.convention else ""
    return f"theorem {s.theorem}{conv}: {s.verified}/{s.trials} verified, {s.counterexamples} counterexample(s)"


def cmd_theorem(args) -> int:
    trials = args.trials if args.trials is not None else (100 if args.id == "4.2" else 1000)
    try:
        summary = run_theorem(args.id, trials, args.seed, args.grid, args.convention, args.sweep)
    except (PreconditionError, OverlaySearchError) as e:
        print(f"precondition failure: {e}", file=sys.stderr)
        return EXIT_AUDIT
    print(_summary_line(summary))
    report_path = args.report
    if report_path is None and not summary.ok:
        report_path = f"theorem-{args.id}-seed{args.seed}.jsonl"
    if report_path is not None:
        lines = []
        for case in summary.cases:
            rec = case.certificate.to_record()
            rec["space"] = case.space_name
            if case.agreement is not None:
                rec["eight"], rec["four"] = case.agreement.eight, case.agreement.four
            lines.append(json.dumps(rec))
        lines.append(json.dumps({"tally": summary.tally()}))
        formats.write_atomic(report_path, "\n".join(lines) + "\n")
        print(f"report: {report_path}")
    if args.bundle and summary.cases:
        directory = Path(args.bundle)
        written = 0
        for i, case in enumerate(summary.cases[: args.bundle_limit]):
            if _write_bundle(directory, case, i) is not None:
                written += 1
        print(f"replay bundles: {written} in {directory}")
    return EXIT_OK if summary.ok else EXIT_COUNTEREXAMPLE


# -- search -----------------------------------------------------------------------------------------


def _scalar_field(ref: str | None) -> Hyperfield | None:
    if ref is None:
        return None
    named = fixture_fields()
    if ref in named:
        return named[ref]
    structure = formats.load_structure(_existing(ref))
    if not isinstance(structure, Hyperfield):
        raise UsageError(f"{ref} does not describe a hyperfield")
    return structure


def cmd_search(args) -> int:
    fld = _scalar_field(args.field)
    try:
        spec = SearchSpec(args.kind, args.size, fld, args.budget, args.allow_large)
    except ValueError as e:
        raise UsageError(str(e)) from None
    result = enumerate_structures(spec, workers=args.workers)
    note = " (partial: budget exhausted)" if result.partial else ""
    print(f"{len(result)} {args.kind}(s) of size {args.size} up to isomorphism{note}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        field_ref = None
        if fld is not None:
            field_ref = "field.hs"
            formats.write_atomic(out / field_ref, formats.serialize_structure(fld))
        for i, s in enumerate(result.structures):
            formats.write_atomic(out / f"{args.kind}-{args.size}-{i:03d}.hs", formats.serialize_structure(s, field_ref))
        print(f"wrote {len(result)} file(s) to {out}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperfuzz", description="Finite hyperstructures with intuitionistic fuzzy overlays.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="audit a structure file against its axioms")
    c.add_argument("structure")
    c.add_argument("--json", action="store_true", help="also print violations as JSON records")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("fuzz-check", help="audit an overlay as an IF hyperfield / IF hypervector space")
    c.add_argument("structure")
    c.add_argument("overlay")
    c.add_argument("--field-overlay", help="IF hyperfield overlay on the scalar field")
    c.add_argument("--characterization", action="store_true", help="also evaluate the four-condition form")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_fuzz_check)

    c = sub.add_parser("combine", help="intersect or unite overlays on one space")
    c.add_argument("--op", choices=OPS, required=True)
    c.add_argument("--convention", choices=CONVENTIONS, default="paper")
    c.add_argument("-o", "--output")
    c.add_argument("overlays", nargs="+")
    c.set_defaults(func=cmd_combine)

    c = sub.add_parser("preimage", help="pull an overlay back along a linear map")
    c.add_argument("--map", required=True)
    c.add_argument("--overlay", required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_preimage)

    c = sub.add_parser("theorem", help="run a seeded theorem oracle")
    c.add_argument("--id", choices=THEOREMS, required=True)
    c.add_argument("--trials", type=int, help="trials (samples per target space for 4.2)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--grid", type=int, default=8)
    c.add_argument("--convention", choices=CONVENTIONS, default="paper")
    c.add_argument("--sweep", action="store_true",
                   help="3.5 only: add exhaustive grid-4 sweeps on the two-element self-spaces")
    c.add_argument("--report", help="JSON-lines certificate report")
    c.add_argument("--bundle", help="directory for replayable counterexample bundles")
    c.add_argument("--bundle-limit", type=int, default=5)
    c.set_defaults(func=cmd_theorem)

    c = sub.add_parser("search", help="enumerate small structures up to isomorphism")
    c.add_argument("--kind", choices=KINDS, required=True)
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--budget", type=int, default=SearchSpec.budget)
    c.add_argument("--field", help="scalar hyperfield: K, GF2, GF3 or a structure file")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--allow-large", action="store_true",
                   help=f"permit sizes above {SIZE_CEILING}")
    c.add_argument("--out", help="directory for the enumerated structure files")
    c.set_defaults(func=cmd_search)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", None) is not None and args.trials < 1:
        parser.error("--trials must be positive")
    if getattr(args, "grid", 1) < 1:
        parser.error("--grid must be positive")
    try:
        return args.func(args)
    except (UsageError, formats.ParseError) as e:
        print(f"hyperfuzz: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except StructureError as e:
        print(f"hyperfuzz: {e}", file=sys.stderr)
        return EXIT_AUDIT


if __name__ == "__main__":
    sys.exit(main())
