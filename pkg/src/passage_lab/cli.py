"""Command-line front end: emits plot-ready CSV/JSON for each construction.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import mhs, qubit, selection, sphere
from .errors import LabError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

SEED_ENV = "PASSAGE_LAB_SEED"
DEFAULT_TRIALS = 10**6
DEFAULT_RESOLUTION = 101

NAMED_AXES = {
    "north": sphere.NORTH,
    "+z": sphere.NORTH,
    "south": sphere.SOUTH,
    "-z": sphere.SOUTH,
    "+x": sphere.PLUS_X,
    "-x": sphere.MINUS_X,
    "east": sphere.EAST,
    "+y": sphere.EAST,
    "west": sphere.WEST,
    "-y": sphere.WEST,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    resolution: int = DEFAULT_RESOLUTION
    law: str = "qm"
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {self.trials}")
        if self.resolution < 2:
            raise UsageError(f"--resolution must be >= 2, got {self.resolution}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format!r}")
        if self.seed < 0:
            raise UsageError(f"--seed must be non-negative, got {self.seed}")


# -- formatting -------------------------------------------------------------

def _num(x) -> str:
    """Locale-independent shortest round-trip float text; NaN becomes empty."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(x) for x in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _flat_csv(record: dict) -> str:
    return _csv_text(list(record), [list(record.values())])


def _angles(point: sphere.SpherePoint) -> dict:
    return {
        "theta_deg": point.theta_deg,
        "phi_deg": point.phi_deg,
        "theta_rad": point.theta,
        "phi_rad": point.phi,
    }


def _emit(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- subcommands ------------------------------------------------------------

def cmd_contour(cfg: RunConfig) -> str:
    axis = selection.grid_axis(cfg.resolution)
    grid = selection.cs_contour_grid(cfg.resolution)
    if cfg.format == "json":
        return _json_text({
            "p_s": axis.tolist(),
            "p_o": axis.tolist(),
            "cs": [[None if math.isnan(v) else float(v) for v in row] for row in grid],
        })
    header = ["p_o\\p_s"] + [_num(x) for x in axis]
    return _csv_text(header, ([po] + list(row) for po, row in zip(axis, grid)))


def _sphere_rows(resolution: int):
    axis = selection.grid_axis(resolution)
    for po in axis:
        for ps in axis:
            point = selection.UnitSquarePoint(ps, po)
            if point.is_degenerate:
                yield (float(ps), float(po), None, None, None)
                continue
            image = sphere.square_to_sphere(point)
            yield (float(ps), float(po), image.theta_deg, image.phi_deg,
                   selection.cs_probability(point))


def cmd_sphere_map(cfg: RunConfig) -> str:
    header = ["p_s", "p_o", "theta_deg", "phi_deg", "cs"]
    rows = list(_sphere_rows(cfg.resolution))
    if cfg.format == "json":
        return _json_text({
            "rows": [dict(zip(header, r)) for r in rows],
            "angles_in": "degrees",
        })
    return _csv_text(header, rows)


def cmd_cs_sim(cfg: RunConfig, p_s: float, p_o: float, shards: int = 1) -> str:
    point = selection.UnitSquarePoint(p_s, p_o)
    analytic = selection.cs_probability(point)
    est = selection.simulate_correlated_selection(point, cfg.trials, cfg.seed, shards=shards)
    sigma = math.sqrt(analytic * (1.0 - analytic) / est.trials_retained)
    z = 0.0 if sigma == 0.0 else (est.frequency_heads - analytic) / sigma
    record = {"p_s": point.p_s, "p_o": point.p_o, "shards": shards}
    record.update(est.to_dict())
    record.update({
        "cs_analytic": analytic,
        "z_score": z,
        "retained_fraction": est.retained_fraction,
        "retained_fraction_expected": point.concordant_mass,
    })
    return _json_text(record) if cfg.format == "json" else _flat_csv(record)


def cmd_cdp(cfg: RunConfig, system: sphere.SpherePoint, axis: sphere.SpherePoint) -> str:
    report = qubit.cdp_report(system, axis)
    entangled = qubit.measure_and_entangle(qubit.pure_from_sphere(system), axis)
    if cfg.format == "json":
        record = {"system": _angles(system), "axis": _angles(axis)}
        record.update(report.to_dict())
        record["concurrence_after_measurement"] = qubit.concurrence(entangled)
        return _json_text(record)
    record = {f"system_{k}": v for k, v in _angles(system).items()}
    record.update({f"axis_{k}": v for k, v in _angles(axis).items()})
    record.update(report.to_dict())
    record["concurrence_after_measurement"] = qubit.concurrence(entangled)
    return _flat_csv(record)


def cmd_mhs(cfg: RunConfig, law: sphere.ProbabilityLaw, responses: Optional[str] = None) -> str:
    verdict = mhs.mhs_check(law, seed=cfg.seed)
    if responses is not None:
        _emit(mhs.response_matrix_csv(mhs.sampled_response_matrix(law, seed=cfg.seed)), responses)
    record = verdict.to_dict()
    record["law_name"] = law.name
    record["seed"] = cfg.seed
    if cfg.format == "json":
        return _json_text(record)
    witness = record.pop("witness") or {}
    for key in ("direction_theta_deg", "direction_phi_deg",
                "direction_theta_rad", "direction_phi_rad", "gap"):
        record[f"witness_{key}"] = witness.get(key)
    return _flat_csv(record)


# -- argument parsing -------------------------------------------------------

def parse_axis(text: str) -> sphere.SpherePoint:
    key = text.strip().lower()
    if key in NAMED_AXES:
        return NAMED_AXES[key]
    try:
        theta_deg, phi_deg = (float(part) for part in key.split(","))
    except ValueError:
        raise UsageError(f"--axis must be a name ({', '.join(NAMED_AXES)}) or THETA,PHI in degrees")
    return _sphere_point(theta_deg, phi_deg, "--axis")


def _sphere_point(theta_deg: float, phi_deg: float, flag: str) -> sphere.SpherePoint:
    if not (math.isfinite(theta_deg) and 0.0 <= theta_deg <= 180.0):
        raise UsageError(f"{flag} colatitude must be within [0, 180] degrees, got {theta_deg}")
    if not math.isfinite(phi_deg):
        raise UsageError(f"{flag} longitude must be finite, got {phi_deg}")
    return sphere.SpherePoint.from_degrees(theta_deg, phi_deg)


def load_law(spec: str) -> sphere.ProbabilityLaw:
    """Resolve ``qm``, ``cos4`` or ``custom:<file>`` to a probability law."""
    key = spec.strip()
    if key.lower() == "qm":
        return sphere.QM_LAW
    if key.lower() == "cos4":
        return sphere.COS4_LAW
    if key.lower().startswith("custom:"):
        path = key[len("custom:"):]
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
        try:
            if rows and not _is_number(rows[0][0]):
                rows = rows[1:]
            table = np.array([[float(r[0]), float(r[1])] for r in rows])
        except (ValueError, IndexError):
            raise UsageError(f"custom law file {path!r} must hold two numeric columns")
        if table.size == 0:
            raise UsageError(f"custom law file {path!r} is empty")
        return sphere.ProbabilityLaw.from_table(table[:, 0], table[:, 1], name=os.path.basename(path))
    raise UsageError(f"unknown law {spec!r}; expected qm, cos4 or custom:<file>")


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def resolve_seed(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer")


def _count(text: str) -> int:
    """Integer flag that also accepts integral scientific notation (``1e6``)."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--output", "-o", default=None, help="output file (default: stdout)")

    parser = _Parser(prog="passage-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("contour", parents=[common], help="CS values on a square grid")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION,
                   help="grid points per axis, including both edges")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sphere-map", parents=[common], help="grid points mapped onto the sphere")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION,
                   help="grid points per axis, including both edges")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("cs-sim", parents=[common], help="Monte Carlo correlated selection")
    p.add_argument("--ps", type=float, required=True, help="system coin probability")
    p.add_argument("--po", type=float, required=True, help="observer coin probability")
    p.add_argument("--trials", type=_count, default=DEFAULT_TRIALS, help="paired flips (1e6 style accepted)")
    p.add_argument("--shards", type=_count, default=1, help="independent RNG streams to split trials over")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("cdp", parents=[common], help="measure, then reverse, Alice's measurement")
    p.add_argument("--theta", type=float, required=True, help="system colatitude, degrees")
    p.add_argument("--phi", type=float, default=0.0, help="system longitude, degrees")
    p.add_argument("--axis", default="north", help="axis name or THETA,PHI in degrees")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("mhs", parents=[common], help="mixtures-have-state verdict for a law")
    p.add_argument("--law", default="qm", help="qm, cos4 or custom:<file>")
    p.add_argument("--responses", default=None, help="also write the response matrix CSV here")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            command=args.command,
            seed=resolve_seed(args.seed),
            trials=getattr(args, "trials", DEFAULT_TRIALS),
            resolution=getattr(args, "resolution", DEFAULT_RESOLUTION),
            law=getattr(args, "law", "qm"),
            output=args.output,
            format=args.format,
        )
        if args.command == "contour":
            text = cmd_contour(cfg)
        elif args.command == "sphere-map":
            text = cmd_sphere_map(cfg)
        elif args.command == "cs-sim":
            if args.shards < 1:
                raise UsageError(f"--shards must be >= 1, got {args.shards}")
            text = cmd_cs_sim(cfg, args.ps, args.po, args.shards)
        elif args.command == "cdp":
            system = _sphere_point(args.theta, args.phi, "--theta/--phi")
            text = cmd_cdp(cfg, system, parse_axis(args.axis))
        else:
            text = cmd_mhs(cfg, load_law(cfg.law), args.responses)
        _emit(text, cfg.output)
    except (UsageError, LabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # --help / --version from argparse
        return int(exc.code or 0)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
