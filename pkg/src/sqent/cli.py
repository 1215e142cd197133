"""Command-line front end.

Exit codes: 0 on success, 1 for domain/validation errors raised by the
library (message on stderr), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import fermi_gas as fg
from . import fock_oracle as fo
from . import mode_transform as mt
from .errors import ResourceError, SqentError, TruncationError, AmbiguityError, ValidationError
from .measures import (
    DensityMatrix,
    concurrence,
    entanglement_of_formation,
    min_ppt_eigenvalue,
    schmidt_entropy,
)

STRUCTURED_DIGITS = 17
TABLE_DIGITS = 9
LN2 = math.log(2.0)


# ---------------------------------------------------------------- formatting

def _num(x: Any, digits: int) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, f".{digits}g")
    return "0" if s == "-0" else s


def _to_bits(obj: Any) -> Any:
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if k.endswith("_nats"):
                out[k[:-5] + "_bits"] = _to_bits_value(v)
            else:
                out[k] = _to_bits(v)
        return out
    if isinstance(obj, list):
        return [_to_bits(v) for v in obj]
    return obj


def _to_bits_value(v: Any) -> Any:
    if isinstance(v, list):
        return [_to_bits_value(x) for x in v]
    if v is None:
        return None
    return float(v) / LN2


def _matrix(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in m]


def _dump_json(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if set(obj) == {"re", "im"}:
            return '{"re": %s, "im": %s}' % (_num(obj["re"], STRUCTURED_DIGITS), _num(obj["im"], STRUCTURED_DIGITS))
        items = [f"{inner}{json.dumps(str(k))}: {_dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj) or all(
            isinstance(v, dict) and set(v) == {"re", "im"} for v in obj
        ):
            return "[" + ", ".join(_dump_json(v, indent + 1) for v in obj) + "]"
        items = [inner + _dump_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _num(obj, STRUCTURED_DIGITS)


def _text_value(v: Any) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, str):
        return v
    return _num(v, TABLE_DIGITS)


def _dump_text(record: dict) -> str:
    lines = [f"subcommand: {record['subcommand']}"]
    for section in ("params", "results", "oracle", "diagnostics"):
        body = record.get(section)
        if not body:
            continue
        lines.append(f"[{section}]")
        for key, value in body.items():
            if isinstance(value, list) and value and isinstance(value[0], list):
                lines.append(f"{key} =")
                for row in value:
                    lines.append("  " + " ".join(
                        f"({_text_value(z['re'])},{_text_value(z['im'])})" for z in row))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                cols = list(value[0])
                lines.append(f"{key} =")
                lines.append("  " + " ".join(f"{c:>16}" for c in cols))
                for row in value:
                    lines.append("  " + " ".join(f"{_text_value(row[c]):>16}" for c in cols))
            elif isinstance(value, list):
                lines.append(f"{key} = " + " ".join(_text_value(x) for x in value))
            else:
                lines.append(f"{key} = {_text_value(value)}")
    return "\n".join(lines) + "\n"


def _csv_table(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_num(row[c], STRUCTURED_DIGITS) for c in columns])
    return buf.getvalue()


def _record(name: str, params: dict, results: dict, oracle: dict | None = None,
            diagnostics: dict | None = None) -> dict:
    rec = {"subcommand": name, "params": params, "results": results}
    if oracle:
        rec["oracle"] = oracle
    if diagnostics:
        rec["diagnostics"] = diagnostics
    return rec


def _render(record: dict, args) -> str:
    if args.bits:
        record = _to_bits(record)
    if getattr(args, "json", False):
        return _dump_json(record) + "\n"
    return _dump_text(record)


def _matrix_diagnostics(rho: DensityMatrix) -> dict:
    m = np.asarray(rho.entries)
    diag = {
        "trace": rho.trace,
        "hermitian_residual": float(np.max(np.abs(m - m.conj().T))),
    }
    if abs(rho.trace) > 0:
        w = rho.normalize().eigvalsh()
        diag["min_eigenvalue_normalized"] = float(w[0])
        diag["psd"] = bool(w[0] >= -1e-10)
    else:
        diag["min_eigenvalue_normalized"] = None
        diag["psd"] = False
    return diag


# ----------------------------------------------------------------- file input

def _read_csv(path: str, columns: tuple[str, ...]) -> list[list[float]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != list(columns):
                raise ValidationError(f"{path}: header must be {','.join(columns)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(columns):
                    raise ValidationError(f"{path}:{lineno}: expected {len(columns)} columns")
                try:
                    rows.append([float(c) for c in row])
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return rows


def _parse_complex_matrix(data: Any, m: int, name: str) -> np.ndarray:
    if not isinstance(data, list):
        raise ValidationError(f"{name} must be an array")
    flat = []
    for entry in data:
        flat.extend(entry if isinstance(entry, list) else [entry])
    if len(flat) != m * m:
        raise ValidationError(f"{name} must hold {m * m} entries, got {len(flat)}")
    out = np.empty(m * m, dtype=complex)
    for k, z in enumerate(flat):
        if not isinstance(z, dict) or "re" not in z or "im" not in z:
            raise ValidationError(f"{name}[{k}] must be an object with 're' and 'im'")
        out[k] = complex(float(z["re"]), float(z["im"]))
    return out.reshape(m, m)


def read_bogoliubov_file(path: str) -> mt.BogoliubovMap:
    """Load ``{"modes": M, "alpha": [...], "beta": [...]}`` with ``{re, im}`` entries."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or not {"modes", "alpha", "beta"} <= set(doc):
        raise ValidationError(f"{path}: need fields 'modes', 'alpha', 'beta'")
    m = doc["modes"]
    if not isinstance(m, int) or m < 1:
        raise ValidationError(f"{path}: 'modes' must be a positive integer")
    return mt.BogoliubovMap(_parse_complex_matrix(doc["alpha"], m, "alpha"),
                            _parse_complex_matrix(doc["beta"], m, "beta"))


def write_bogoliubov_file(path: str, bmap: mt.BogoliubovMap) -> None:
    doc = {"modes": bmap.modes, "alpha": _matrix(bmap.alpha), "beta": _matrix(bmap.beta)}
    Path(path).write_text(_dump_json(doc) + "\n")


def _positions(args) -> fg.ExchangeGeometry:
    return fg.ExchangeGeometry(_read_csv(args.positions, ("x", "y", "z")), k_fermi=args.kf)


# ---------------------------------------------------------------- subcommands

def cmd_oscillator(args) -> tuple[str, int]:
    pair = mt.OscillatorPair(omega=args.omega, coupling=args.coupling)
    tau = pair.squeeze_amplitude()
    t = pair.schmidt_ratio()
    temp = mt.effective_temperature(pair, args.hbar_omega_over_k)
    closed = mt.coupled_oscillator_entanglement(pair)
    oracle = schmidt_entropy(mt.two_mode_squeezed_state(tau, args.cutoff))
    rec = _record(
        "oscillator",
        {"lambda": args.coupling, "omega": args.omega, "cutoff": args.cutoff,
         "hbar_omega_over_k": args.hbar_omega_over_k},
        {"t": t, "entanglement_nats": closed, "effective_temperature": temp},
        {"schmidt_entanglement_nats": oracle},
        {"oracle_deviation": abs(closed - oracle), "truncated_weight": t ** (args.cutoff + 1)},
    )
    return _render(rec, args), 0


def cmd_bogoliubov(args) -> tuple[str, int]:
    bmap = read_bogoliubov_file(args.file)
    if not 0 <= args.mode < bmap.modes:
        raise ValidationError(f"mode {args.mode} out of range for {bmap.modes} modes")
    rep = mt.check_canonical(bmap, args.tol)
    params = {"file": args.file, "mode": args.mode, "modes": bmap.modes, "cutoff": args.cutoff, "tol": args.tol}
    results = {
        "commutator_residual": rep.commutator_residual,
        "cross_residual": rep.cross_residual,
        "canonical": rep.canonical,
    }
    if not rep.canonical:
        results.update({"vacuum_occupation": None, "column_occupation": None, "beta_row_entropy_nats": None,
                        "reduced_mode_entropy_nats": None})
        rec = _record("bogoliubov", params, results)
        sys.stderr.write("error: map is not canonical; physics quantities are undefined\n")
        return _render(rec, args), 1
    results["vacuum_occupation"] = mt.vacuum_occupation(bmap, args.mode)
    results["column_occupation"] = mt.column_occupation(bmap, args.mode)
    results["beta_row_entropy_nats"] = mt.beta_row_entropy(bmap, args.mode)
    results["reduced_mode_entropy_nats"] = mt.reduced_mode_entropy(bmap, args.mode)
    oracle: dict = {}
    diagnostics: dict = {}
    if bmap.modes >= 2:
        try:
            ops = fo.build_ladder(bmap.modes, args.cutoff)
            vac = fo.numeric_vacuum(ops, bmap)
            oracle["vacuum_occupation"] = fo.expectation(ops, vac, ops.number(args.mode)).real
            oracle["mode_entropy_nats"] = fo.bipartition_entropy(vac, [args.mode])
            diagnostics["tail_mass"] = vac.tail_mass()
            diagnostics["vacuum_residual"] = vac.residual
        except (ResourceError, TruncationError, AmbiguityError) as exc:
            diagnostics["oracle_skipped"] = str(exc)
    return _render(_record("bogoliubov", params, results, oracle, diagnostics), args), 0


def cmd_condensate(args) -> tuple[str, int]:
    rows = _read_csv(args.file, ("u", "v"))
    pairs = [mt.CondensatePair(u, v) for u, v in rows]
    total = mt.condensate_entanglement(pairs)
    table = []
    for p in pairs:
        table.append({
            "u": p.u,
            "v": p.v,
            "ratio": p.ratio(),
            "entanglement_nats": mt.geometric_entropy(p.ratio()),
            "closed_form_nats": mt.condensate_pair_entropy_closed_form(p),
        })
    rec = _record("condensate", {"file": args.file, "pairs": len(pairs)},
                  {"pairs": table, "total_entanglement_nats": total})
    return _render(rec, args), 0


def cmd_thermal(args) -> tuple[str, int]:
    if args.command == "unruh":
        value, key, fn = args.acceleration, "acceleration", mt.unruh_temperature
    else:
        value, key, fn = args.kappa, "kappa", mt.hawking_temperature
    rec = _record(args.command, {key: value, "units": args.units},
                  {"temperature": fn(value, args.units)})
    return _render(rec, args), 0


def cmd_fermi_scan(args) -> tuple[str, int]:
    rs = fg.scan_values(args.rmin, args.rmax, args.steps)
    rows = fg.correlation_scan(rs, k_fermi=args.kf)
    columns = list(fg.SCAN_COLUMNS)
    if args.bits:
        rows = [_to_bits(r) for r in rows]
        columns = [c[:-5] + "_bits" if c.endswith("_nats") else c for c in columns]
    if args.format == "csv":
        return _csv_table(columns, rows), 0
    params = {"kf": args.kf, "rmin": args.rmin, "rmax": args.rmax, "steps": args.steps}
    rec = {"subcommand": "fermi scan", "params": params, "rows": rows}
    return _dump_json(rec) + "\n", 0


def cmd_fermi_radius(args) -> tuple[str, int]:
    res = fg.entanglement_radius(1.0 if args.kf is None else args.kf)
    rec = _record("fermi radius", {"kf": args.kf}, {
        "x_star": res.x_star,
        "radius": res.radius,
        "residual": res.residual,
        "first_zero": res.first_zero,
        "quoted_estimate": res.quoted_estimate,
    })
    return _render(rec, args), 0


def cmd_fermi_three(args) -> tuple[str, int]:
    if args.positions is not None:
        if any(v is not None for v in (args.f1, args.f2, args.f3)):
            raise ValidationError("give either --positions or --f1/--f2/--f3, not both")
        geom = _positions(args)
        if geom.n != 3:
            raise ValidationError(f"positions file must list 3 electrons, got {geom.n}")
        F = geom.exchange_matrix()
        f1, f2, f3 = F[0, 1], F[0, 2], F[1, 2]
        params = {"positions": args.positions, "kf": args.kf}
    else:
        if any(v is None for v in (args.f1, args.f2, args.f3)):
            raise ValidationError("need --f1, --f2 and --f3 (or --positions)")
        f1, f2, f3 = args.f1, args.f2, args.f3
        params = {"f1": f1, "f2": f2, "f3": f3}
    rho = fg.three_electron_rho(f1, f2, f3)
    results = {"f12": f1, "f13": f2, "f23": f3, "matrix": _matrix(rho.entries)}
    return _render(_record("fermi three", params, results, diagnostics=_matrix_diagnostics(rho)), args), 0


def cmd_fermi_n(args) -> tuple[str, int]:
    geom = _positions(args)
    rho = fg.n_electron_rho(geom)
    results: dict = {"n": geom.n, "dim": rho.dim}
    if args.pairwise:
        results["pairs"] = fg.pairwise_table(rho)
    rec = _record("fermi n", {"positions": args.positions, "kf": args.kf, "pairwise": args.pairwise},
                  results, diagnostics=_matrix_diagnostics(rho))
    return _render(rec, args), 0


def cmd_boson(args) -> tuple[str, int]:
    rho = fg.boson_polarization_rho()
    results = {
        "matrix": _matrix(rho.entries),
        "purity": rho.purity(),
        "concurrence": concurrence(rho),
        "min_ppt_eig": min_ppt_eigenvalue(rho),
        "eof_nats": entanglement_of_formation(rho),
    }
    return _render(_record("boson", {}, results), args), 0


def cmd_overlap(args) -> tuple[str, int]:
    raw = fg.overlap_model_rho(args.epsilon)
    rho = raw.normalize()
    results = {
        "matrix": _matrix(raw.entries),
        "min_ppt_eig": min_ppt_eigenvalue(rho),
        "concurrence": concurrence(rho),
        "eof_nats": entanglement_of_formation(rho),
    }
    return _render(_record("overlap", {"epsilon": args.epsilon}, results), args), 0


# ------------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="structured output (17 significant digits)")
    p.add_argument("--bits", action="store_true", help="report entropies in bits instead of nats")
    p.add_argument("--output", metavar="PATH", help="write output to PATH instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sqent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oscillator", parents=[common], help="coupled oscillator ground-state entanglement")
    p.add_argument("--lambda", dest="coupling", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--cutoff", type=int, default=400)
    p.add_argument("--hbar-omega-over-k", type=float, default=1.0)
    p.set_defaults(func=cmd_oscillator)

    p = sub.add_parser("bogoliubov", parents=[common], help="canonical check and vacuum content of a mode map")
    p.add_argument("--file", required=True)
    p.add_argument("--mode", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=30)
    p.add_argument("--tol", type=float, default=mt.CANONICAL_TOL)
    p.set_defaults(func=cmd_bogoliubov)

    p = sub.add_parser("condensate", parents=[common], help="pair-mode entanglement from a u,v table")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_condensate)

    for name, flag in (("unruh", "--acceleration"), ("hawking", "--kappa")):
        p = sub.add_parser(name, parents=[common], help=f"{name} temperature")
        p.add_argument(flag, type=float, required=True)
        p.add_argument("--units", choices=("natural", "si"), default="natural")
        p.set_defaults(func=cmd_thermal)

    fermi = sub.add_parser("fermi", help="spin correlations in an ideal Fermi gas")
    fsub = fermi.add_subparsers(dest="fermi_command", required=True)

    p = fsub.add_parser("scan", parents=[common], help="two-spin correlations versus separation")
    p.add_argument("--kf", type=float)
    p.add_argument("--rmin", type=float, required=True)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_fermi_scan)

    p = fsub.add_parser("radius", parents=[common], help="entanglement radius")
    p.add_argument("--kf", type=float)
    p.set_defaults(func=cmd_fermi_radius)

    p = fsub.add_parser("three", parents=[common], help="three-electron spin matrix")
    p.add_argument("--f1", type=float)
    p.add_argument("--f2", type=float)
    p.add_argument("--f3", type=float)
    p.add_argument("--positions")
    p.add_argument("--kf", type=float)
    p.set_defaults(func=cmd_fermi_three)

    p = fsub.add_parser("n", parents=[common], help="n-electron spin matrix diagnostics")
    p.add_argument("--positions", required=True)
    p.add_argument("--kf", type=float)
    p.add_argument("--pairwise", action="store_true")
    p.set_defaults(func=cmd_fermi_n)

    p = sub.add_parser("boson", parents=[common], help="boson polarization counterpart")
    p.set_defaults(func=cmd_boson)

    p = sub.add_parser("overlap", parents=[common], help="first-quantized overlap model")
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_overlap)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "format", None) == "csv" and args.json:
        args.format = "json"
    try:
        text, code = args.func(args)
    except (SqentError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            sys.stderr.write(f"error: cannot write {args.output}: {exc.strerror}\n")
            return 1
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
