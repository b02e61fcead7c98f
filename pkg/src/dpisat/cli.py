"""Scenario-driven command line front end.

Commands
--------

``run <file> --out <dir>``
    Load one scenario (or a list) from JSON, execute the requested checks,
    and write one report per scenario to the output directory. Exit code 0
    when every asserted check passes, 1 on a numerical check failure, 2 on
    a schema violation (with the offending field path).

``sweep --measure ... --grid ... --channel ... --rho ... --sigma ... --out f.csv``
    Evaluate gap and residual norms over a Renyi parameter grid and emit a
    CSV with one row per grid point.

``validate <file>``
    Schema-check a scenario file without running anything.

Check semantics (each check asserts an invariant that must hold for any
valid configuration):

* ``gap``        the sign-adjusted gap is >= -gap_tol (data processing);
* ``residual1``  if |gap| <= gap_tol then ||residual1||_F <= residual_tol
  (the forward saturation theorem), likewise ``residual2``;
* ``converse``   for scaling-law families, residual1 <= residual_tol forces
  |gap| <= gap_tol;
* ``petz``       the Petz map returns sigma exactly, and recovers rho when
  the gap is below tolerance;
* ``boundary``   (relative entropy) support-restricted residuals vanish at
  saturation, and the general boundary residual matches residual1 at full
  rank;
* ``alpha_z_crosscheck`` all three published saturation conditions agree at
  saturation;
* ``tangent``    the tangent space of the PSD cone at rho has numerical
  dimension n^2 - k^2.

State builders: a matrix object, ``{"builder": "diag", "values": [...]}``,
or ``{"builder": "random_pos", "dim": n, "seed": s}``. Random states are
drawn from numpy's PCG64 generator, so a fixed seed reproduces the same
state on every platform; the ``DPISAT_SEED`` environment variable overrides
all scenario seeds.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausChannel, channel_from_json
from .divergences import (
    MeasureSpec,
    grad2_method,
    measure_from_json,
    measure_to_json,
)
from .linalg import (
    HermitianOperator,
    PositiveOperator,
    PositivityError,
    PsdOperator,
    SchemaError,
    frobenius,
    matrix_from_json,
)
from .saturation import (
    DEFAULT_GAP_TOL,
    DEFAULT_RESIDUAL_TOL,
    ConverseViolationError,
    alpha_z_crosscheck,
    boundary_gap,
    boundary_residual_general,
    boundary_residual_relent,
    build_report,
    converse_certificate,
    hiai_residual,
    report_to_json,
    residual1,
    tangent_space_rank,
)

KNOWN_CHECKS = (
    "gap",
    "residual1",
    "residual2",
    "converse",
    "boundary",
    "petz",
    "alpha_z_crosscheck",
    "tangent",
)

_CONVERSE_FAMILIES = ("relative_entropy", "fidelity", "sandwiched_renyi", "alpha_z")
_CROSSCHECK_FAMILIES = ("alpha_z", "sandwiched_renyi")


@dataclass
class Scenario:
    name: str
    measure: MeasureSpec
    channel: KrausChannel
    rho: PsdOperator
    sigma: PositiveOperator
    rho_positive: PositiveOperator | None
    checks: list
    gap_tol: float = DEFAULT_GAP_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    seeds: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Scenario loading and schema validation
# ---------------------------------------------------------------------------


def _seeded_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_positive_state(dim: int, seed: int) -> np.ndarray:
    """Reproducible strictly positive state: G G^H / n + 0.1 I, complex
    Gaussian G from PCG64(seed)."""
    gen = _seeded_generator(seed)
    g = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    return g @ g.conj().T / dim + 0.1 * np.eye(dim)


def _state_from_json(obj, path: str, seed_override: int | None):
    """Decode a state: explicit matrix, diag builder, or seeded random_pos."""
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected a matrix object or a builder object")
    if "builder" not in obj:
        return matrix_from_json(obj, path), None
    name = obj["builder"]
    if name == "diag":
        values = obj.get("values")
        if (
            not isinstance(values, list)
            or not values
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
        ):
            raise SchemaError(f"{path}.values", "expected a non-empty list of numbers")
        return np.diag(np.asarray(values, dtype=np.complex128)), None
    if name == "random_pos":
        dim = obj.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise SchemaError(f"{path}.dim", "expected a positive integer")
        seed = obj.get("seed")
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise SchemaError(
                f"{path}.seed", "random builders require an integer seed"
            )
        if seed_override is not None:
            seed = seed_override
        return random_positive_state(dim, seed), seed
    raise SchemaError(f"{path}.builder", f"unknown state builder {name!r}")


def _tolerances_from_json(obj, path: str):
    gap_tol, residual_tol = DEFAULT_GAP_TOL, DEFAULT_RESIDUAL_TOL
    if obj is None:
        return gap_tol, residual_tol
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    for key in obj:
        if key not in ("gap_tol", "residual_tol"):
            raise SchemaError(f"{path}.{key}", "unknown tolerance")
        val = obj[key]
        if not isinstance(val, (int, float)) or isinstance(val, bool) or val <= 0:
            raise SchemaError(f"{path}.{key}", f"expected a positive number, got {val!r}")
    gap_tol = float(obj.get("gap_tol", gap_tol))
    residual_tol = float(obj.get("residual_tol", residual_tol))
    return gap_tol, residual_tol


def _validate_checks(sc: Scenario, path: str):
    """Every requested check must apply to the (measure, state-rank) combo."""
    full_rank = sc.rho_positive is not None
    family = sc.measure.family
    for i, check in enumerate(sc.checks):
        cpath = f"{path}.checks[{i}]"
        if check not in KNOWN_CHECKS:
            raise SchemaError(cpath, f"unknown check {check!r}")
        if check in ("residual1", "residual2", "petz") and not full_rank:
            raise SchemaError(cpath, f"{check!r} needs a strictly positive rho")
        if check == "gap" and not full_rank and family != "relative_entropy":
            raise SchemaError(
                cpath, "gap with rank-deficient rho is only defined for relative_entropy"
            )
        if check == "converse":
            if not full_rank:
                raise SchemaError(cpath, "'converse' needs a strictly positive rho")
            if family not in _CONVERSE_FAMILIES:
                raise SchemaError(
                    cpath, f"'converse' needs a scaling-law family, not {family!r}"
                )
        if check == "alpha_z_crosscheck":
            if not full_rank:
                raise SchemaError(cpath, "'alpha_z_crosscheck' needs a strictly positive rho")
            if family not in _CROSSCHECK_FAMILIES:
                raise SchemaError(
                    cpath, f"'alpha_z_crosscheck' needs a Renyi family, not {family!r}"
                )
        if check == "boundary" and family != "relative_entropy":
            raise SchemaError(
                cpath, "'boundary' residuals are closed-form for relative_entropy only"
            )


def _build_scenario(obj, path: str, flags) -> Scenario:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected a scenario object")
    name = obj.get("name")
    if not isinstance(name, str) or not name.strip():
        raise SchemaError(f"{path}.name", "expected a non-empty string")
    measure = measure_from_json(
        obj.get("measure"), f"{path}.measure", allow_non_dpi=flags.allow_non_dpi
    )
    channel = channel_from_json(obj.get("channel"), f"{path}.channel")
    seed_override = flags.seed_override
    seeds = {}

    rho_arr, rho_seed = _state_from_json(obj.get("rho"), f"{path}.rho", seed_override)
    if rho_seed is not None:
        seeds["rho"] = rho_seed
    sigma_arr, sigma_seed = _state_from_json(obj.get("sigma"), f"{path}.sigma", seed_override)
    if sigma_seed is not None:
        seeds["sigma"] = sigma_seed

    try:
        rho_psd = PsdOperator(HermitianOperator(rho_arr))
    except (ValueError, PositivityError) as exc:
        raise SchemaError(f"{path}.rho", str(exc)) from exc
    try:
        sigma = PositiveOperator(HermitianOperator(sigma_arr))
    except (ValueError, PositivityError) as exc:
        raise SchemaError(f"{path}.sigma", str(exc)) from exc

    rho_positive = None
    if rho_psd.rank == rho_psd.dim:
        rho_positive = PositiveOperator(rho_psd.op)

    if rho_psd.dim != sigma.dim:
        raise SchemaError(f"{path}.sigma", f"sigma dim {sigma.dim} != rho dim {rho_psd.dim}")
    if channel.dim_in != rho_psd.dim:
        raise SchemaError(
            f"{path}.channel", f"channel dim_in {channel.dim_in} != state dim {rho_psd.dim}"
        )

    checks = obj.get("checks")
    if not isinstance(checks, list) or not checks or not all(isinstance(c, str) for c in checks):
        raise SchemaError(f"{path}.checks", "expected a non-empty list of check names")

    gap_tol, residual_tol = _tolerances_from_json(obj.get("tolerances"), f"{path}.tolerances")
    if flags.tol_gap is not None:
        gap_tol = flags.tol_gap
    if flags.tol_residual is not None:
        residual_tol = flags.tol_residual

    known_keys = {"name", "measure", "channel", "rho", "sigma", "checks", "tolerances"}
    for key in obj:
        if key not in known_keys:
            raise SchemaError(f"{path}.{key}", "unknown scenario field")

    sc = Scenario(
        name=name,
        measure=measure,
        channel=channel,
        rho=rho_psd,
        sigma=sigma,
        rho_positive=rho_positive,
        checks=list(checks),
        gap_tol=gap_tol,
        residual_tol=residual_tol,
        seeds=seeds,
    )
    _validate_checks(sc, path)
    return sc


def _load_scenarios(file_path: str, flags) -> list:
    try:
        with open(file_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(file_path, f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(file_path, f"invalid JSON: {exc}") from exc
    if isinstance(doc, dict):
        items = [doc]
    elif isinstance(doc, list):
        items = doc
    else:
        raise SchemaError(file_path, "expected a scenario object or a list of them")
    scenarios = [
        _build_scenario(obj, f"scenario[{i}]", flags) for i, obj in enumerate(items)
    ]
    names = [sc.name for sc in scenarios]
    if len(set(names)) != len(names):
        raise SchemaError(file_path, "scenario names must be unique")
    return scenarios


# ---------------------------------------------------------------------------
# Check execution
# ---------------------------------------------------------------------------


def _execute_scenario(sc: Scenario, dump_matrices: bool) -> dict:
    checks_out = {}
    report = {
        "schema_version": "v1",
        "name": sc.name,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "measure": measure_to_json(sc.measure),
        "tolerances": {"gap_tol": sc.gap_tol, "residual_tol": sc.residual_tol},
        "seeds": sc.seeds,
        "grad2_method": grad2_method(sc.measure),
    }

    full = sc.rho_positive is not None
    gap = None
    if full:
        # Petz errors need an invertible channel image of sigma; only build
        # the recovery map when the scenario asks for it.
        core = build_report(
            sc.measure, sc.channel, sc.rho_positive, sc.sigma,
            gap_tol=sc.gap_tol, residual_tol=sc.residual_tol,
            with_petz="petz" in sc.checks,
        )
        gap = core.gap
        report.update(report_to_json(core, include_matrices=dump_matrices))
    else:
        gap = boundary_gap(sc.measure, sc.channel, sc.rho, sc.sigma)
        report.update(
            {
                "gap": gap,
                "residual1_frobenius": None,
                "residual2_frobenius": None,
                "saturated": None,
            }
        )

    saturated_here = abs(gap) <= sc.gap_tol

    for check in sc.checks:
        detail: dict = {}
        passed = True
        if check == "gap":
            detail["value"] = gap
            passed = gap >= -sc.gap_tol
        elif check == "residual1":
            norm = report["residual1_frobenius"]
            detail["norm"] = norm
            passed = (not saturated_here) or norm <= sc.residual_tol
        elif check == "residual2":
            norm = report["residual2_frobenius"]
            detail["norm"] = norm
            passed = (not saturated_here) or norm <= sc.residual_tol
        elif check == "converse":
            try:
                cert = converse_certificate(
                    sc.measure, sc.channel, sc.rho_positive, sc.sigma,
                    residual_tol=sc.residual_tol, gap_tol=sc.gap_tol,
                )
                detail.update(
                    {
                        "residual1_norm": cert.residual1_norm,
                        "gap": cert.gap,
                        "implied_gap_zero": cert.implied_gap_zero,
                    }
                )
            except ConverseViolationError as exc:
                detail["error"] = str(exc)
                passed = False
        elif check == "petz":
            err_sigma = report["petz_recovery_error_sigma"]
            err_rho = report["petz_recovery_error_rho"]
            detail.update({"recovery_error_rho": err_rho, "recovery_error_sigma": err_sigma})
            passed = err_sigma <= 1e-9 and ((not saturated_here) or err_rho <= 1e-7)
        elif check == "boundary":
            passed, detail = _boundary_check(sc, saturated_here)
        elif check == "alpha_z_crosscheck":
            alpha = sc.measure.alpha
            z = sc.measure.z if sc.measure.family == "alpha_z" else sc.measure.alpha
            res = alpha_z_crosscheck(sc.channel, sc.rho_positive, sc.sigma, alpha, z)
            detail.update(
                {
                    "gradient_residual": res.gradient_residual,
                    "chehade_residual": res.chehade_residual,
                    "zhang_residual": res.zhang_residual,
                }
            )
            norms = (res.gradient_residual, res.chehade_residual, res.zhang_residual)
            passed = (not saturated_here) or all(n <= sc.residual_tol for n in norms)
        elif check == "tangent":
            n, k = sc.rho.dim, sc.rho.dim - sc.rho.rank
            rank = tangent_space_rank(sc.rho)
            detail.update({"measured": rank, "expected": n * n - k * k})
            passed = rank == n * n - k * k
        checks_out[check] = {"passed": bool(passed), **detail}

    report["checks"] = checks_out
    report["passed"] = all(c["passed"] for c in checks_out.values())
    return report


def _boundary_check(sc: Scenario, saturated_here: bool):
    detail: dict = {}
    res_relent = boundary_residual_relent(sc.channel, sc.rho, sc.sigma)
    res_general = boundary_residual_general(sc.measure, sc.channel, sc.rho, sc.sigma)
    res_hiai = hiai_residual(sc.channel, sc.rho, sc.sigma)
    detail["zeros_log_norm"] = frobenius(res_relent)
    detail["general_norm"] = frobenius(res_general)
    detail["hiai_norm"] = float(np.linalg.norm(res_hiai))
    passed = True
    if sc.rho_positive is not None:
        r1 = residual1(sc.measure, sc.channel, sc.rho_positive, sc.sigma)
        reduction = float(np.linalg.norm(res_general.matrix - r1.matrix))
        detail["full_rank_reduction_error"] = reduction
        passed = reduction <= 1e-9
    if saturated_here:
        passed = passed and all(
            detail[key] <= sc.residual_tol
            for key in ("zeros_log_norm", "general_norm", "hiai_norm")
        )
    return passed, detail


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report_filename(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name) + ".json"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@dataclass
class _Flags:
    allow_non_dpi: bool = False
    tol_gap: float | None = None
    tol_residual: float | None = None
    seed_override: int | None = None


def _flags_from_args(args) -> _Flags:
    seed_override = None
    env_seed = os.environ.get("DPISAT_SEED")
    if env_seed is not None:
        try:
            seed_override = int(env_seed)
        except ValueError as exc:
            raise SchemaError("DPISAT_SEED", f"expected an integer, got {env_seed!r}") from exc
    return _Flags(
        allow_non_dpi=getattr(args, "allow_non_dpi", False),
        tol_gap=getattr(args, "tol_gap", None),
        tol_residual=getattr(args, "tol_residual", None),
        seed_override=seed_override,
    )


def _cmd_run(args) -> int:
    flags = _flags_from_args(args)
    scenarios = _load_scenarios(args.file, flags)
    all_passed = True
    for sc in scenarios:
        try:
            report = _execute_scenario(sc, dump_matrices=args.dump_matrices)
        except (ValueError, RuntimeError) as exc:
            report = {
                "schema_version": "v1",
                "name": sc.name,
                "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "measure": measure_to_json(sc.measure),
                "error": str(exc),
                "passed": False,
                "checks": {},
            }
        out_path = os.path.join(args.out, _report_filename(sc.name))
        _write_atomic(out_path, json.dumps(report, indent=2, sort_keys=True) + "\n")
        status = "PASS" if report["passed"] else "FAIL"
        failed = [name for name, c in report.get("checks", {}).items() if not c["passed"]]
        suffix = f" ({', '.join(failed)})" if failed else ""
        if "error" in report:
            suffix = f" (error: {report['error']})"
        print(f"{sc.name}: {status}{suffix}")
        all_passed = all_passed and report["passed"]
    return 0 if all_passed else 1


def _parse_grid(text: str):
    """Parse 'alpha=0.5:3.0:0.25;z=...' into an ordered (name, values) list."""
    axes = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise SchemaError("grid", f"expected name=start:stop:step, got {part!r}")
        name, rng = part.split("=", 1)
        name = name.strip()
        pieces = rng.split(":")
        if len(pieces) != 3:
            raise SchemaError("grid", f"expected start:stop:step in {part!r}")
        try:
            start, stop, step = (float(p) for p in pieces)
        except ValueError as exc:
            raise SchemaError("grid", f"non-numeric grid bound in {part!r}") from exc
        if step <= 0 or stop < start:
            raise SchemaError("grid", f"empty or descending grid in {part!r}")
        values = []
        x = start
        while x <= stop + 1e-9:
            values.append(round(x, 12))
            x += step
        axes.append((name, values))
    if not axes:
        raise SchemaError("grid", "no axes given")
    return axes


def _operand_from_arg(text: str, decoder, path: str):
    """Accept inline JSON (starting with '{') or a path to a JSON file."""
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
    else:
        with open(text, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    return decoder(obj, path)


def _cmd_sweep(args) -> int:
    flags = _flags_from_args(args)
    if args.measure not in ("sandwiched_renyi", "alpha_z"):
        raise SchemaError("measure", "sweep supports sandwiched_renyi and alpha_z")
    axes = _parse_grid(args.grid)
    axis_names = [a for a, _ in axes]
    required = ["alpha"] if args.measure == "sandwiched_renyi" else ["alpha", "z"]
    if axis_names != required:
        raise SchemaError(
            "grid", f"{args.measure} sweep needs axes {required}, got {axis_names}"
        )
    channel = _operand_from_arg(args.channel, channel_from_json, "channel")
    rho_arr, _ = _operand_from_arg(
        args.rho, lambda o, p: _state_from_json(o, p, flags.seed_override), "rho"
    )
    sigma_arr, _ = _operand_from_arg(
        args.sigma, lambda o, p: _state_from_json(o, p, flags.seed_override), "sigma"
    )
    try:
        rho = PositiveOperator(HermitianOperator(rho_arr))
        sigma = PositiveOperator(HermitianOperator(sigma_arr))
    except (ValueError, PositivityError) as exc:
        raise SchemaError("states", str(exc)) from exc

    def points(level: int, prefix: tuple):
        if level == len(axes):
            yield prefix
            return
        for v in axes[level][1]:
            yield from points(level + 1, prefix + (v,))

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(axis_names + ["gap", "residual1_norm", "residual2_norm"])
    from .saturation import dpi_gap as _gap, residual2 as _res2  # local alias

    for point in points(0, ()):
        alpha = point[0]
        z = point[1] if len(point) > 1 else None
        if abs(alpha - 1.0) < 1e-12:
            print(f"warning: skipping alpha=1 pole at {point}", file=sys.stderr)
            continue
        try:
            if args.measure == "sandwiched_renyi":
                m = MeasureSpec.sandwiched_renyi(alpha, allow_non_dpi=flags.allow_non_dpi)
            else:
                m = MeasureSpec.alpha_z(alpha, z, allow_non_dpi=flags.allow_non_dpi)
        except ValueError as exc:
            print(f"warning: skipping {point}: {exc}", file=sys.stderr)
            continue
        gap = _gap(m, channel, rho, sigma)
        n1 = frobenius(residual1(m, channel, rho, sigma))
        n2 = frobenius(_res2(m, channel, rho, sigma))
        writer.writerow([repr(v) for v in point] + [repr(gap), repr(n1), repr(n2)])
    _write_atomic(args.out, buf.getvalue())
    print(f"wrote {args.out}")
    return 0


def _cmd_validate(args) -> int:
    flags = _flags_from_args(args)
    scenarios = _load_scenarios(args.file, flags)
    print(f"{args.file}: {len(scenarios)} scenario(s) OK")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpisat",
        description="Distinguishability measures, matrix gradients, and "
        "data-processing saturation certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenarios and write reports")
    run_p.add_argument("file", help="scenario JSON file")
    run_p.add_argument("--out", required=True, help="output directory for reports")
    run_p.add_argument("--allow-non-dpi", action="store_true", dest="allow_non_dpi")
    run_p.add_argument("--tol-gap", type=float, default=None, dest="tol_gap")
    run_p.add_argument("--tol-residual", type=float, default=None, dest="tol_residual")
    run_p.add_argument("--dump-matrices", action="store_true", dest="dump_matrices")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="gap/residual norms over a parameter grid")
    sweep_p.add_argument("--measure", required=True)
    sweep_p.add_argument("--grid", required=True, help="e.g. alpha=0.5:3.0:0.25;z=0.5:3.0:0.25")
    sweep_p.add_argument("--channel", required=True, help="channel JSON (inline or file)")
    sweep_p.add_argument("--rho", required=True, help="state JSON (inline or file)")
    sweep_p.add_argument("--sigma", required=True, help="state JSON (inline or file)")
    sweep_p.add_argument("--out", required=True, help="output CSV path")
    sweep_p.add_argument("--allow-non-dpi", action="store_true", dest="allow_non_dpi")
    sweep_p.set_defaults(func=_cmd_sweep)

    val_p = sub.add_parser("validate", help="schema-check a scenario file")
    val_p.add_argument("file")
    val_p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error at {exc.path}: {exc.reason}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"schema error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
