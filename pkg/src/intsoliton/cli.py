"""Command-line entry point: deform, scatter, evolve, verify, sweep.

Grids are written as CSV with 17 significant digits; scattering data,
manifests and reports as sorted, indented JSON documents.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .deform import DeformationSpec, check_nodeless, deformed_potential
from .ist import OutOfDirectWindowError, SolitonField
from .scatter import (
    InadmissibleSpecError,
    NormalizationDivergesError,
    ScatteringData,
    TailNotAsymptoticError,
    scattering_data,
    spectrum,
)
from .verify import CHECKS, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INADMISSIBLE = 2
EXIT_IO = 3
EXIT_TAIL = 4
EXIT_WINDOW = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ----------------------------------------------------------------- file formats

def format_number(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(path: Path, columns: dict) -> None:
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    lines = [",".join(names)]
    for row in zip(*arrays):
        lines.append(",".join(format_number(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def read_csv(path: Path) -> dict:
    text = Path(path).read_text()
    header, *rows = text.strip().split("\n")
    names = header.split(",")
    data = np.array([[float(v) for v in r.split(",")] for r in rows])
    return {n: data[:, i] for i, n in enumerate(names)}


def write_document(path: Path, doc: dict) -> None:
    _write_text(path, json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n")


def read_document(path: Path) -> dict:
    return json.loads(Path(path).read_text())


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


# ----------------------------------------------------------------- arguments

def _parse_list(value, cast):
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [cast(v) for v in value]
    value = str(value).strip()
    return [cast(v) for v in value.split(",") if v.strip()] if value else []


def _spec(args) -> DeformationSpec:
    try:
        return DeformationSpec(float(args.h), tuple(_parse_list(args.v, int)))
    except ValueError as exc:
        raise CliError(f"invalid deformation: {exc}", EXIT_INADMISSIBLE) from exc


def _grid_x(args) -> np.ndarray:
    if args.L <= 0 or args.points < 2:
        raise CliError("need --L > 0 and --points >= 2", EXIT_INADMISSIBLE)
    return np.linspace(-args.L, args.L, args.points)


def _out(args) -> Path:
    return Path(args.out)


def _admissible(spec: DeformationSpec, out: Path | None = None):
    report = check_nodeless(spec)
    if out is not None:
        write_document(out / "admissibility.json", report.to_dict())
    if not report.admissible:
        raise CliError(report.describe(), EXIT_INADMISSIBLE)
    return report


# ----------------------------------------------------------------- commands

def cmd_deform(args) -> int:
    spec = _spec(args)
    out = _out(args)
    report = _admissible(spec, out)
    x = _grid_x(args)
    u = deformed_potential(spec, x)
    if args.format == "csv":
        write_csv(out / "potential.csv", {"x": x, "U": u})
    else:
        write_document(out / "potential.json", {"h": spec.h, "v": list(spec.v), "x": x.tolist(), "U": u.tolist()})
    print(report.describe())
    return EXIT_OK


def _load_data(args) -> ScatteringData:
    if getattr(args, "data", None):
        try:
            return ScatteringData.from_dict(read_document(Path(args.data)))
        except OSError as exc:
            raise CliError(f"cannot read {args.data}: {exc}", EXIT_IO) from exc
    spec = _spec(args)
    if not spec.integer_h:
        raise CliError(f"h={spec.h} is not an integer: the potential is not reflectionless", EXIT_INADMISSIBLE)
    _admissible(spec)
    try:
        return scattering_data(spec)
    except InadmissibleSpecError as exc:
        raise CliError(str(exc), EXIT_INADMISSIBLE) from exc
    except (TailNotAsymptoticError, NormalizationDivergesError) as exc:
        raise CliError(f"norming-constant extraction failed: {exc}", EXIT_TAIL) from exc


def cmd_scatter(args) -> int:
    data = _load_data(args)
    doc = data.to_dict()
    spec = DeformationSpec(data.h, data.v)
    doc["levels"] = [{"kappa": lv.kappa, "origin": lv.origin, "index": lv.index} for lv in spectrum(spec)]
    write_document(_out(args) / "scattering.json", doc)
    print("kappas   " + " ".join(format_number(k) for k in data.kappas))
    print("normings " + " ".join(format_number(c) for c in data.normings))
    return EXIT_OK


def cmd_evolve(args) -> int:
    data = _load_data(args)
    f = SolitonField(data, fallback=not args.no_asymptotic_fallback)
    out = _out(args)
    x = _grid_x(args)
    times = _parse_list(args.t, float) or [0.0]
    slices = []
    long_rows = {"t": [], "x": [], "u": []}
    for i, t in enumerate(times):
        try:
            u = f(x, t)
            point = float(f(args.x0, t)) if args.x0 is not None else None
        except OutOfDirectWindowError as exc:
            raise CliError(str(exc), EXIT_WINDOW) from exc
        name = f"slice_{i:03d}.{'csv' if args.format == 'csv' else 'json'}"
        if args.format == "csv":
            write_csv(out / name, {"x": x, "u": u})
        else:
            write_document(out / name, {"t": t, "x": x.tolist(), "u": u.tolist()})
        entry = {"t": t, "file": name}
        if point is not None:
            entry["x0"] = args.x0
            entry["u_x0"] = point
            print(f"u({format_number(args.x0)}, {format_number(t)}) = {format_number(point)}")
        slices.append(entry)
        if args.long:
            long_rows["t"].append(np.full_like(x, t))
            long_rows["x"].append(x)
            long_rows["u"].append(u)
    if args.long:
        write_csv(out / "field_long.csv", {k: np.concatenate(v) for k, v in long_rows.items()})
    write_document(out / "manifest.json", {
        "h": data.h,
        "v": list(data.v),
        "kappas": list(data.kappas),
        "normings": list(data.normings),
        "phase_shifts": f.phase_shifts(),
        "slices": slices,
        "asymptotic_fallback": not args.no_asymptotic_fallback,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    only = _parse_list(args.only, str) or None
    try:
        reports = run_suite(only=only, tol_scale=args.tol_scale, jobs=args.jobs)
    except KeyError as exc:
        raise CliError(str(exc), EXIT_VERIFY_FAILED) from exc
    for r in reports:
        print(r.line())
    passed = all(r.passed for r in reports)
    write_document(_out(args) / "verification.json", {
        "passed": passed,
        "tol_scale": args.tol_scale,
        "reports": [r.to_dict() for r in reports],
    })
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def sweep_cases(kind: str, args) -> list[DeformationSpec]:
    v1s = _parse_list(args.v1, int)
    gaps = _parse_list(args.gaps, int)
    if kind == "I":
        return [DeformationSpec(2, (v1,)) for v1 in (v1s or [2, 4, 6, 8])]
    if kind == "II":
        return [DeformationSpec(1, (v1, v1 + g)) for v1 in (v1s or [2, 4]) for g in (gaps or [3, 5, 7])]
    if kind == "h0-twostep":
        return [DeformationSpec(0, (v1, v1 + g)) for v1 in (v1s or [2]) for g in (gaps or [3, 5, 7])]
    return [_spec(args)]


def _sweep_row(spec: DeformationSpec) -> dict:
    report = check_nodeless(spec)
    kappas = [lv.kappa for lv in spectrum(spec)] if report.admissible and spec.integer_h else []
    return {
        "h": spec.h,
        "v": ";".join(map(str, spec.v)),
        "admissible": "true" if report.admissible else "false",
        "kappas": ";".join(map(str, kappas)),
    }


def cmd_sweep(args) -> int:
    cases = sweep_cases(args.sweep_class, args)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, cases))
    else:
        rows = [_sweep_row(s) for s in cases]
    lines = ["h,v,admissible,kappas"] + [f"{r['h']},{r['v']},{r['admissible']},{r['kappas']}" for r in rows]
    _write_text(_out(args) / "sweep.csv", "\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return EXIT_OK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intsoliton", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file whose keys mirror flag names; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True, spec=True):
        if spec:
            p.add_argument("--h", default="1", help="soliton strength h (integer for scatter/evolve)")
            p.add_argument("--v", default="", help="comma-separated seed indices v1<v2<...")
        if grid:
            p.add_argument("--L", type=float, default=12.0, help="grid half-width")
            p.add_argument("--points", type=int, default=2001)
        p.add_argument("--config", help=argparse.SUPPRESS)  # also accepted after the command
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "structured"), default="csv")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("deform", help="build a deformed potential and check admissibility")
    common(p)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("scatter", help="write bound-state scattering data")
    common(p, grid=False)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("evolve", help="evaluate the exact KdV solution on time slices")
    common(p)
    p.add_argument("--t", default="0", help="comma-separated time slices")
    p.add_argument("--x0", type=float, default=None, help="also report u at this x")
    p.add_argument("--data", default=None, help="scattering.json from the scatter command")
    p.add_argument("--long", action="store_true", help="also write long-format t,x,u file")
    p.add_argument("--no-asymptotic-fallback", action="store_true")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="run the verification suite")
    common(p, grid=False, spec=False)
    p.add_argument("--only", default="", help=f"comma-separated subset of {','.join(CHECKS)}")
    p.add_argument("--tol-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="admissibility table over an index-set family")
    common(p, grid=False)
    p.add_argument("--class", dest="sweep_class", choices=("I", "II", "h0-twostep", "custom"), default="I")
    p.add_argument("--v1", default="", help="override the v1 values of the class")
    p.add_argument("--gaps", default="", help="override the v2-v1 gaps of the class")
    p.set_defaults(func=cmd_sweep)

    parser._subcommands = sub.choices  # used to apply config defaults
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read config {known.config}: {exc}", EXIT_IO) from exc
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    for sp in parser._subcommands.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
