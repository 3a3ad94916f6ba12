"""Command-line driver: solve, verify, scan and oracle-compare workflows.

Exit codes: 0 success, 1 configuration error, 2 verification mismatch,
3 internal error.

Configuration is a JSON document (``--config``); command-line flags override
individual fields. Output is JSON (an array of records, stable key order,
floats with 17 significant digits) or CSV (header row in record-field order).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qesbethe.bethe import ACCEPT_TOL, SolverConfig, bae_residual_vec, c0_from_roots
from qesbethe.errors import ConfigError, ModelError, QesError
from qesbethe.models import (
    DEFAULT_FREE,
    PARAM_NAMES,
    ModelKind,
    ModelSpec,
    QesLevel,
    basic_equation,
    constraint_residual,
    energy_of,
    in_range_roots,
    oracle_c0_deviation,
    solve_level,
)
from qesbethe.oracle import oracle_solutions

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_MISMATCH, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("solve", "verify", "scan", "oracle-compare")
VERIFY_MODES = {
    "bae": ("bae",),
    "oracle": ("bae", "oracle"),
    "fd": ("bae", "fd"),
    "all": ("bae", "oracle", "fd"),
}
# acceptance thresholds for the record-level checks
CONSTRAINT_TOL = 1e-8
ORACLE_TOL = 1e-8
ENERGY_RTOL = 1e-9
SCAN_KEYS_EXTRA = ("ell", "n")


# -- configuration ----------------------------------------------------------------------


@dataclass(frozen=True)
class JobConfig:
    command: str
    model: str
    ell: int = 0
    n: Tuple[int, ...] = (0,)
    free: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    scan: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    out: Optional[str] = None
    input: Optional[str] = None
    format: str = "json"
    seed: int = 0
    verify: str = "all"
    workers: int = 1
    timing: bool = False
    solver: Dict[str, float] = field(default_factory=dict)
    grid: Dict[str, float] = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"command: expected one of {COMMANDS}, got {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format: expected json or csv, got {self.format!r}")
        if self.verify not in VERIFY_MODES:
            raise ConfigError(f"verify: expected one of {sorted(VERIFY_MODES)}, got {self.verify!r}")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")
        if self.command == "verify":
            if not self.input:
                raise ConfigError("input: the verify command needs --input with stored records")
            return
        try:
            kind = ModelKind.parse(self.model)
        except ModelError as exc:
            raise ConfigError(f"model: {exc}") from exc
        names = PARAM_NAMES[kind]
        free = self.free or DEFAULT_FREE[kind]
        if free not in names:
            raise ConfigError(f"free: {free!r} is not a parameter of {kind.value} {names}")
        if not self.n or any(n < 0 for n in self.n):
            raise ConfigError(f"n: degrees must be nonnegative, got {list(self.n)}")
        for key, values in self.scan.items():
            if key not in names and key not in SCAN_KEYS_EXTRA:
                raise ConfigError(f"scan: {key!r} is not a parameter of {kind.value} {names}")
            if key == free:
                raise ConfigError(f"scan: {key!r} is the free parameter and is solved for")
            if not values:
                raise ConfigError(f"scan: grid for {key!r} is empty")
        if self.command != "scan" and self.scan:
            raise ConfigError("scan: grids are only allowed with the scan command")
        given = set(self.params) | set(self.scan) | {free}
        unknown = set(self.params) - set(names)
        if unknown:
            raise ConfigError(f"param: unknown parameters {sorted(unknown)} for {kind.value} {names}")
        missing = [name for name in names if name not in given]
        if missing:
            raise ConfigError(f"param: missing values for {missing}")
        if free in self.params:
            raise ConfigError(f"param: {free!r} is the free parameter and is solved for")
        try:
            self.solver_config()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"solver: {exc}") from exc
        unknown_grid = set(self.grid) - {"r_min", "r_max", "num_points"}
        if unknown_grid:
            raise ConfigError(f"grid: unknown fields {sorted(unknown_grid)}")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(**{**self.solver, "seed": self.seed})


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"{where}: {text!r} is not a number") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{where}: {text!r} is not finite")
    return value


def parse_assignment(text: str, where: str) -> Tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"{where}: expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def parse_grid(text: str, where: str) -> Tuple[float, ...]:
    """lo:hi:steps (inclusive, evenly spaced) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{where}: expected lo:hi:steps, got {text!r}")
        lo, hi = _parse_float(parts[0], where), _parse_float(parts[1], where)
        try:
            steps = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"{where}: steps {parts[2]!r} is not an integer") from exc
        if steps < 1:
            raise ConfigError(f"{where}: steps must be at least 1")
        return tuple(float(v) for v in np.linspace(lo, hi, steps))
    values = tuple(_parse_float(v, where) for v in text.split(",") if v.strip())
    if not values:
        raise ConfigError(f"{where}: empty grid")
    return values


def parse_degrees(value, where: str = "n") -> Tuple[int, ...]:
    """An integer, a list, 'a,b,c' or an inclusive range 'lo:hi'."""
    if isinstance(value, int):
        return (value,)
    if isinstance(value, (list, tuple)):
        items = value
    else:
        text = str(value)
        if ":" in text:
            lo, _, hi = text.partition(":")
            items = list(range(int(lo), int(hi) + 1)) if lo.strip() and hi.strip() else []
        else:
            items = [v for v in text.split(",") if v.strip()]
    try:
        return tuple(int(v) for v in items)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {value!r} is not an integer list") from exc


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    return data


_CONFIG_FIELDS = {f.name for f in fields(JobConfig)}


def build_config(args: argparse.Namespace) -> JobConfig:
    data = _load_config_file(args.config) if args.config else {}
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"config: unknown fields {sorted(unknown)}")
    data["command"] = args.command
    for name in ("model", "ell", "free", "out", "input", "format", "seed", "verify", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if args.timing:
        data["timing"] = True
    if args.n is not None:
        data["n"] = args.n
    data["n"] = parse_degrees(data.get("n", 0))
    params = {}
    for key, value in dict(data.get("params", {})).items():
        params[key] = _parse_float(str(value), f"params.{key}")
    for item in args.param or ():
        key, value = parse_assignment(item, "--param")
        params[key] = _parse_float(value, f"--param {key}")
    data["params"] = params
    scan = {}
    for key, value in dict(data.get("scan", {})).items():
        grid = tuple(float(v) for v in value) if isinstance(value, list) else parse_grid(str(value), f"scan.{key}")
        scan[key] = grid
    for item in args.scan or ():
        key, value = parse_assignment(item, "--scan")
        scan[key] = parse_grid(value, f"--scan {key}")
    data["scan"] = scan
    if "model" not in data and args.command != "verify":
        raise ConfigError("model: required (--model or config field)")
    data.setdefault("model", "")
    for name, kind in (("ell", int), ("seed", int), ("workers", int)):
        if name in data:
            try:
                data[name] = kind(data[name])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{name}: {data[name]!r} is not an integer") from exc
    config = JobConfig(**data)
    config.validate()
    return config


# -- records -------------------------------------------------------------------------------


@dataclass
class ResultRecord:
    model: str
    ell: int
    n: int
    free_param: str
    free_value: Optional[float] = None
    params: Dict[str, float] = field(default_factory=dict)
    energy: Optional[float] = None
    roots: List[float] = field(default_factory=list)
    c0: Optional[float] = None
    bae_residual_norm: Optional[float] = None
    constraint_residual: Optional[float] = None
    oracle_c0_deviation: Optional[float] = None
    fd_energy: Optional[float] = None
    fd_energy_deviation: Optional[float] = None
    node_count: Optional[int] = None
    fd_nodes: Optional[int] = None
    verified: List[str] = field(default_factory=list)
    status: str = "ok"
    reason: str = ""
    n_levels: int = 1
    wall_time: Optional[float] = None


RECORD_FIELDS = tuple(f.name for f in fields(ResultRecord))
_INT_FIELDS = {"ell", "n", "node_count", "fd_nodes", "n_levels"}
_FLOAT_FIELDS = {
    "free_value", "energy", "c0", "bae_residual_norm", "constraint_residual",
    "oracle_c0_deviation", "fd_energy", "fd_energy_deviation", "wall_time",
}


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    text = format(x, ".17g")
    if all(ch not in text for ch in ".eE"):
        text += ".0"
    return text


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(records: Sequence[ResultRecord]) -> str:
    if not records:
        return "[]\n"
    rows = []
    for rec in records:
        body = ",\n".join(f"    {json.dumps(name)}: {_json_value(getattr(rec, name))}" for name in RECORD_FIELDS)
        rows.append("  {\n" + body + "\n  }")
    return "[\n" + ",\n".join(rows) + "\n]\n"


def _csv_cell(name: str, value) -> str:
    if value is None:
        return ""
    if name == "params":
        return ";".join(f"{k}={_fmt_float(v)}" for k, v in value.items())
    if name == "roots":
        return ";".join(_fmt_float(v) for v in value)
    if name == "verified":
        return ";".join(value)
    if isinstance(value, float):
        return _fmt_float(value)
    return str(value)


def to_csv(records: Sequence[ResultRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_FIELDS)
    for rec in records:
        writer.writerow([_csv_cell(name, getattr(rec, name)) for name in RECORD_FIELDS])
    return buf.getvalue()


def _coerce(name: str, value):
    if value is None or value == "":
        return [] if name in ("roots", "verified") else ({} if name == "params" else
                                                         (None if name not in ("reason", "status") else ""))
    if name in _INT_FIELDS:
        return int(value)
    if name in _FLOAT_FIELDS:
        return float(value)
    return value


def records_from_json(text: str) -> List[ResultRecord]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ConfigError("records: top level must be an array")
    out = []
    for i, item in enumerate(data):
        unknown = set(item) - set(RECORD_FIELDS)
        if unknown:
            raise ConfigError(f"records[{i}]: unknown fields {sorted(unknown)}")
        kwargs = {name: _coerce(name, item.get(name)) for name in RECORD_FIELDS if name in item}
        kwargs["roots"] = [float(v) for v in kwargs.get("roots", [])]
        kwargs["params"] = {k: float(v) for k, v in kwargs.get("params", {}).items()}
        out.append(ResultRecord(**kwargs))
    return out


def records_from_csv(text: str) -> List[ResultRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    if tuple(reader.fieldnames) != RECORD_FIELDS:
        raise ConfigError(f"records: CSV header {reader.fieldnames} differs from {list(RECORD_FIELDS)}")
    out = []
    for row in reader:
        kwargs = {}
        for name in RECORD_FIELDS:
            cell = row[name]
            if name == "params":
                kwargs[name] = dict((k, float(v)) for k, v in (parse_assignment(p, "params") for p in cell.split(";") if p))
            elif name == "roots":
                kwargs[name] = [float(v) for v in cell.split(";") if v]
            elif name == "verified":
                kwargs[name] = [v for v in cell.split(";") if v]
            else:
                kwargs[name] = _coerce(name, cell)
        out.append(ResultRecord(**kwargs))
    return out


def serialize(records: Sequence[ResultRecord], fmt: str) -> str:
    return to_json(records) if fmt == "json" else to_csv(records)


def load_records(path: str) -> List[ResultRecord]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"input: cannot read {path}: {exc}") from exc
    try:
        if text.lstrip().startswith("["):
            return records_from_json(text)
        return records_from_csv(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"input {path}: malformed records: {exc}") from exc


# -- checks -----------------------------------------------------------------------------------


def _grid_for(model: ModelSpec, energy: float, n: int, overrides: Dict[str, float]):
    from qesbethe.verifier import RadialGrid, default_grid

    if not overrides:
        return None
    base = default_grid(model, energy, n)
    return RadialGrid(
        float(overrides.get("r_min", base.r_min)),
        float(overrides.get("r_max", base.r_max)),
        int(overrides.get("num_points", base.num_points)),
    )


def check_record(rec: ResultRecord, checks: Sequence[str], grid: Dict[str, float]) -> ResultRecord:
    """Recompute every requested check from the stored parameters and roots."""
    from qesbethe.verifier import match_energy

    model = ModelSpec(rec.model, rec.params, rec.ell)
    model.validate()
    eq = basic_equation(model, rec.n)
    problems = []
    if rec.free_value is None or rec.params.get(rec.free_param) != rec.free_value:
        problems.append("free_value differs from params")
    energy = energy_of(model, rec.n)
    if rec.energy is None or abs(energy - rec.energy) > ENERGY_RTOL * max(1.0, abs(energy)):
        problems.append(f"stored energy {rec.energy!r} differs from {energy!r}")
    if len(rec.roots) != rec.n:
        problems.append(f"{len(rec.roots)} roots stored for degree {rec.n}")
    out = replace(rec, verified=[])
    if "bae" in checks and len(rec.roots) == rec.n:
        try:
            resid = float(np.linalg.norm(bae_residual_vec(eq, rec.roots))) if rec.n else 0.0
        except QesError as exc:
            resid = math.inf
            problems.append(str(exc))
        c0 = c0_from_roots(eq, rec.n, rec.roots)
        cres = abs(constraint_residual(model, rec.n, rec.roots))
        out = replace(out, bae_residual_norm=resid, constraint_residual=cres, c0=c0,
                      node_count=in_range_roots(model, rec.roots))
        out.verified.append("bae")
        if not resid <= ACCEPT_TOL:
            problems.append(f"BAE residual {resid:.3g} > {ACCEPT_TOL:g}")
        if cres > CONSTRAINT_TOL * (1.0 + abs(rec.free_value or 0.0)):
            problems.append(f"constraint residual {cres:.3g}")
        if rec.c0 is not None and abs(c0 - rec.c0) > ORACLE_TOL * (1.0 + abs(c0)):
            problems.append(f"stored c0 {rec.c0!r} differs from {c0!r}")
    if "oracle" in checks:
        dev = oracle_c0_deviation(eq, rec.n, out.c0 if out.c0 is not None else c0_from_roots(eq, rec.n, rec.roots))
        out = replace(out, oracle_c0_deviation=dev)
        out.verified.append("oracle")
        if dev > ORACLE_TOL:
            problems.append(f"oracle c0 deviation {dev:.3g}")
    if "fd" in checks:
        expected = in_range_roots(model, rec.roots)
        fd = match_energy(model, rec.energy if rec.energy is not None else energy, rec.n, expected,
                          _grid_for(model, energy, rec.n, grid), richardson=False)
        out = replace(out, fd_energy=fd.fd_energy, fd_energy_deviation=fd.deviation, fd_nodes=fd.nodes)
        out.verified.append("fd")
        if not fd.passed:
            problems.append(f"FD energy deviation {fd.deviation:.3g} > {fd.tolerance:.3g}")
        elif fd.nodes != expected:
            problems.append(f"FD eigenvector has {fd.nodes} nodes, roots predict {expected}")
    if problems:
        return replace(out, status="mismatch", reason="; ".join(problems))
    return replace(out, status="ok", reason="")


def _record_from_level(level: QesLevel) -> ResultRecord:
    return ResultRecord(
        model=level.model.kind.value, ell=int(level.model.ell), n=level.n,
        free_param=level.free_param_name, free_value=float(level.free_param_value),
        params={k: float(level.model.params[k]) for k in PARAM_NAMES[level.model.kind]},
        energy=float(level.energy), roots=[float(t) for t in level.roots], c0=float(level.bethe.c0),
        bae_residual_norm=float(level.bethe.bae_residual_norm), node_count=level.node_count,
    )


def solve_records(model: ModelSpec, n: int, free: str, cfg: SolverConfig, checks: Sequence[str],
                  grid: Dict[str, float]) -> List[ResultRecord]:
    levels = solve_level(model, n, free, cfg, verify=False)
    return [check_record(_record_from_level(level), checks, grid) for level in levels]


# -- workflows --------------------------------------------------------------------------------


def _timed(fn, *args, timing: bool = False):
    start = time.perf_counter()
    records = fn(*args)
    if timing:
        elapsed = time.perf_counter() - start
        records = [replace(r, wall_time=elapsed) for r in records]
    return records


def run_solve(config: JobConfig) -> List[ResultRecord]:
    kind = ModelKind.parse(config.model)
    free = config.free or DEFAULT_FREE[kind]
    model = ModelSpec(kind, config.params, config.ell)
    checks = VERIFY_MODES[config.verify]
    out = []
    for n in config.n:
        out.extend(_timed(solve_records, model, n, free, config.solver_config(), checks, config.grid,
                          timing=config.timing))
    return out


def _scan_cell(args) -> ResultRecord:
    kind, params, ell, n, free, solver, checks, grid, timing = args
    start = time.perf_counter()
    base = ResultRecord(model=kind.value, ell=ell, n=n, free_param=free,
                        params={k: params[k] for k in PARAM_NAMES[kind] if k in params},
                        status="unsolved", n_levels=0)
    try:
        model = ModelSpec(kind, params, ell)
        model.validate(allow_missing=(free,))
        records = solve_records(model, n, free, SolverConfig(**solver), checks, grid)
    except QesError as exc:
        return replace(base, reason=f"{type(exc).__name__}: {exc}")
    if not records:
        return replace(base, reason="no polynomial level found for this cell")
    # one record per cell: the lowest-energy level, with the level count alongside
    best = min(records, key=lambda r: (r.energy, r.free_value))
    best = replace(best, n_levels=len(records))
    if timing:
        best = replace(best, wall_time=time.perf_counter() - start)
    return best


def scan_cells(config: JobConfig) -> List[tuple]:
    kind = ModelKind.parse(config.model)
    free = config.free or DEFAULT_FREE[kind]
    axes = dict(config.scan)
    axes.setdefault("n", tuple(float(n) for n in config.n))
    axes.setdefault("ell", (float(config.ell),))
    keys = list(axes)
    cells = []
    solver = {**config.solver, "seed": config.seed}
    for combo in itertools.product(*(axes[k] for k in keys)):
        values = dict(zip(keys, combo))
        n, ell = int(values.pop("n")), int(values.pop("ell"))
        params = {**config.params, **values}
        cells.append((kind, params, ell, n, free, solver, VERIFY_MODES[config.verify], config.grid, config.timing))
    return cells


def run_scan(config: JobConfig) -> List[ResultRecord]:
    cells = scan_cells(config)
    if config.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            # map preserves submission order, so output is sorted by grid index
            return list(pool.map(_scan_cell, cells))
    return [_scan_cell(cell) for cell in cells]


def run_verify(config: JobConfig) -> List[ResultRecord]:
    stored = load_records(config.input)
    checks = VERIFY_MODES[config.verify]
    out = []
    for rec in stored:
        if rec.status == "unsolved":
            out.append(rec)
            continue
        try:
            out.append(check_record(rec, checks, config.grid))
        except QesError as exc:
            out.append(replace(rec, status="mismatch", reason=f"{type(exc).__name__}: {exc}"))
    return out


@dataclass
class OracleRow:
    model: str
    ell: int
    n: int
    free_value: float
    oracle_index: int
    oracle_c0_real: float
    oracle_c0_imag: float
    oracle_all_real: bool
    bae_c0: Optional[float]
    delta_c0: Optional[float]


def run_oracle_compare(config: JobConfig) -> List[OracleRow]:
    """Every matrix-oracle level at each solved parameter value, next to the BAE level."""
    kind = ModelKind.parse(config.model)
    free = config.free or DEFAULT_FREE[kind]
    model = ModelSpec(kind, config.params, config.ell)
    rows = []
    for n in config.n:
        for level in solve_level(model, n, free, config.solver_config(), verify=False):
            eq = basic_equation(level.model, n)
            for idx, ol in enumerate(oracle_solutions(eq, n)):
                delta = abs(ol.c0 - level.bethe.c0)
                matched = delta <= ORACLE_TOL * (1.0 + abs(ol.c0))
                rows.append(OracleRow(
                    kind.value, int(config.ell), n, float(level.free_param_value), idx,
                    float(ol.c0.real), float(ol.c0.imag), bool(ol.all_real),
                    float(level.bethe.c0) if matched else None, float(delta) if matched else None,
                ))
    return rows


def oracle_rows_text(rows: Sequence[OracleRow], fmt: str) -> str:
    names = [f.name for f in fields(OracleRow)]
    if fmt == "json":
        if not rows:
            return "[]\n"
        body = ",\n".join(
            "  {" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in asdict(row).items()) + "}"
            for row in rows
        )
        return "[\n" + body + "\n]\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in rows:
        writer.writerow(["" if v is None else (_fmt_float(v) if isinstance(v, float) else v)
                         for v in asdict(row).values()])
    return buf.getvalue()


# -- entry point --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qesbethe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="repeat for more logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration document; flags override its fields")
        p.add_argument("--model", help="anharmonic | isotonic | softcore | nonpolynomial")
        p.add_argument("--ell", type=int, help="angular momentum (integer >= -1)")
        p.add_argument("--n", help="degree: N, a comma list, or an inclusive range lo:hi")
        p.add_argument("--free", help="potential parameter to solve for (model default if omitted)")
        p.add_argument("--param", action="append", metavar="K=V", help="fixed potential parameter (repeatable)")
        p.add_argument("--scan", action="append", metavar="K=LO:HI:STEPS",
                       help="scan grid, or K=v1,v2,...; keys may also be ell or n (repeatable)")
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--input", help="records to re-check (verify command)")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--seed", type=int)
        p.add_argument("--verify", choices=sorted(VERIFY_MODES))
        p.add_argument("--workers", type=int, help="concurrent scan cells")
        p.add_argument("--timing", action="store_true", help="record wall time (output is then not reproducible)")
    return parser


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(config: JobConfig) -> int:
    """Execute a validated job; returns the exit status."""
    if config.command == "oracle-compare":
        rows = run_oracle_compare(config)
        _write(oracle_rows_text(rows, config.format), config.out)
        return EXIT_OK
    runner = {"solve": run_solve, "scan": run_scan, "verify": run_verify}[config.command]
    records = runner(config)
    _write(serialize(records, config.format), config.out)
    if any(r.status == "mismatch" for r in records):
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        config = build_config(args)
    except (ConfigError, ModelError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(config)
    except (ConfigError, ModelError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - report anything else as an internal error
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
