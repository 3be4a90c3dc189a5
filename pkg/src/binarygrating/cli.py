"""Command-line front end: ``python -m binarygrating <subcommand> ...``.

Scenario files are TOML::

    [incidence]
    k1 = 1.0
    theta = 0.3
    [media]
    k2 = 1.5
    lam = 1.0
    [measurement]
    b = 1.2
    nsamples = 128
    [solver]
    N = 40

Every run writes its outputs plus ``run.json`` into ``--out``. Exit status is
0 on success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import sys
import time
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import corners, fdref, inversion, modal
from .geometry import InvalidProfile, RectangularProfile, corners_of
from .radiation import MediumPair, NotLossless, PlaneWaveIncidence

WORKERS_ENV = "BINARYGRATING_WORKERS"

DOMAIN_ERRORS = (
    ValueError,
    InvalidProfile,
    NotLossless,
    modal.EigensolverFailure,
    modal.SingularMatching,
    fdref.SolverDiverged,
    inversion.NoFeasibleStart,
    corners.IllConditionedFit,
)


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    command: str
    inputs: dict
    outputs: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def scenario_hash(self) -> str:
        blob = json.dumps({"command": self.command, "inputs": self.inputs}, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "scenario_hash": self.scenario_hash,
            "version": _version(),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "timings": self.timings,
            "environment": {
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": metadata.version("scipy"),
                "platform": platform.platform(),
            },
        }

    def write(self, out: Path) -> None:
        (out / "run.json").write_text(json.dumps(self.to_dict(), indent=2, default=str))


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


# -- loading ---------------------------------------------------------------


def load_scenario(path: str | None) -> dict:
    if path is None:
        raise UsageError("--scenario is required")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"scenario file not found: {path}") from exc
    try:
        inc = data["incidence"]
        med = data["media"]
    except KeyError as exc:
        raise UsageError(f"scenario needs [incidence] and [media] tables; missing {exc}") from exc
    return data | {"_incidence": PlaneWaveIncidence(float(inc["k1"]), float(inc["theta"])),
                   "_media": MediumPair(float(inc["k1"]), float(med["k2"]), float(med.get("lam", 1.0)))}


def load_profile(path: str | None) -> RectangularProfile:
    if path is None:
        raise UsageError("--profile is required")
    try:
        return RectangularProfile.from_json(path)
    except FileNotFoundError as exc:
        raise UsageError(f"profile file not found: {path}") from exc


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _spectrum_csv(orders, A_plus, A_minus) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "side", "re", "im"])
    for side, arr in (("+", A_plus), ("-", A_minus)):
        for n, a in zip(orders, arr):
            w.writerow([int(n), side, repr(float(a.real)), repr(float(a.imag))])
    return buf.getvalue()


def _measurement(scn: dict, profile: RectangularProfile) -> tuple[float, int]:
    meas = scn.get("measurement", {})
    b = float(meas.get("b", profile.top + 0.5))
    return b, int(meas.get("nsamples", 128))


def _complex_json(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


# -- subcommands -------------------------------------------------------------


def cmd_forward(args, rec: RunRecord) -> None:
    scn = load_scenario(args.scenario)
    prof = load_profile(args.profile)
    N = args.N if args.N is not None else int(scn.get("solver", {}).get("N", 40))
    b, ns = _measurement(scn, prof)
    rec.inputs.update(scenario=scn_echo(scn), profile=prof.to_dict(), N=N)
    out = _out_dir(args.out)
    sol = modal.solve_forward(prof, scn["_media"], scn["_incidence"], N)
    tr = modal.near_field_trace(sol, b, ns)
    sp = sol.spectrum
    (out / "spectrum.csv").write_text(_spectrum_csv(sp.orders, sp.A_plus, sp.A_minus))
    tr.to_csv(out / "trace.csv")
    summary = {"N": N, "b": b, "A0_plus": _complex_json(sp.coefficient("+", 0)), "A0_minus": _complex_json(sp.coefficient("-", 0)),
               "diagnostics": modal._jsonable(sol.diagnostics)}
    written = ["spectrum.csv", "trace.csv", "summary.json"]
    if scn["_media"].lossless:
        eff = sol.efficiencies()
        eff.to_csv(out / "efficiencies.csv")
        summary |= eff.summary()
        written.append("efficiencies.csv")
    if args.save_solution:
        sol.save(out / "solution.npz")
        written.append("solution.npz")
    (out / "summary.json").write_text(json.dumps(summary, indent=2))
    rec.outputs += [str(out / f) for f in written]
    rec.timings["solve"] = sol.diagnostics["seconds"]


def cmd_oracle(args, rec: RunRecord) -> None:
    scn = load_scenario(args.scenario)
    prof = load_profile(args.profile)
    rec.inputs.update(scenario=scn_echo(scn), profile=prof.to_dict(), nx=args.nx, ny=args.ny)
    out = _out_dir(args.out)
    grid = fdref.aligned_grid(prof, args.nx, args.ny)
    t0 = time.perf_counter()
    sol = fdref.fd_solve(prof, scn["_media"], scn["_incidence"], grid)
    rec.timings["solve"] = time.perf_counter() - t0
    nmax = args.orders
    Ap, Am = sol.rayleigh_plus(nmax), sol.rayleigh_minus(nmax)
    (out / "spectrum.csv").write_text(_spectrum_csv(np.arange(-nmax, nmax + 1), Ap, Am))
    sol.trace.to_csv(out / "trace.csv")
    summary = {"nx": args.nx, "ny": args.ny, "H": grid.H, "b": grid.H,
               "A0_plus": _complex_json(Ap[nmax]), "A0_minus": _complex_json(Am[nmax])}
    (out / "summary.json").write_text(json.dumps(summary, indent=2))
    rec.outputs += [str(out / f) for f in ("spectrum.csv", "trace.csv", "summary.json")]


def _load_inverse_spec(path: str, data: modal.NearFieldTrace) -> tuple[inversion.InverseProblemSpec, inversion.ReconstructionConfig, dict]:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    search = raw.get("search", {})
    spec = inversion.InverseProblemSpec(
        data,
        M=int(search.get("M", 2)),
        height_bounds=tuple(search.get("height_bounds", (-1.0, 1.0))),
        k2_bounds=tuple(search.get("k2_bounds", (1.05, 2.5))),
        lam=float(search.get("lam", 1.0)),
        noise_level=float(search.get("noise_level", 0.0)),
    )
    rc = raw.get("reconstruction", {})
    defaults = inversion.ReconstructionConfig()
    workers = int(rc.get("workers", os.environ.get(WORKERS_ENV, defaults.workers)))
    cfg = inversion.ReconstructionConfig(
        restarts=int(rc.get("restarts", defaults.restarts)),
        N_schedule=tuple(rc.get("N_schedule", defaults.N_schedule)),
        keep=int(rc.get("keep", defaults.keep)),
        maxfev=tuple(rc.get("maxfev", defaults.maxfev)),
        seed=int(rc.get("seed", defaults.seed)),
        workers=workers,
    )
    if len(cfg.maxfev) != len(cfg.N_schedule):
        raise UsageError("maxfev must have one entry per N_schedule stage")
    return spec, cfg, raw


def cmd_invert(args, rec: RunRecord) -> None:
    try:
        data = modal.NearFieldTrace.from_csv(args.data)
    except FileNotFoundError as exc:
        raise UsageError(f"data file not found: {args.data}") from exc
    spec, cfg, raw = _load_inverse_spec(args.spec, data)
    rec.inputs.update(data=args.data, spec=raw)
    out = _out_dir(args.out)
    res = inversion.reconstruct(spec, cfg)
    (out / "result.json").write_text(json.dumps(res.to_dict(), indent=2))
    res.profile.to_json(out / "profile.json")
    (out / "history.csv").write_text(res.history_csv())
    rec.outputs += [str(out / f) for f in ("result.json", "profile.json", "history.csv")]
    rec.timings["reconstruct"] = res.seconds


def cmd_probe(args, rec: RunRecord) -> None:
    scn = load_scenario(args.scenario)
    pa, pb = load_profile(args.profile_a), load_profile(args.profile_b or args.profile_a)
    k2a = args.k2_a if args.k2_a is not None else float(scn["_media"].k2)
    k2b = args.k2_b if args.k2_b is not None else k2a
    b, ns = _measurement(scn, RectangularProfile.flat(max(pa.top, pb.top)))
    N = args.N if args.N is not None else int(scn.get("solver", {}).get("N", 40))
    rec.inputs.update(scenario=scn_echo(scn), profile_a=pa.to_dict(), profile_b=pb.to_dict(), k2_a=k2a, k2_b=k2b, N=N)
    out = _out_dir(args.out)
    d = inversion.identifiability_probe(pa, pb, k2a, k2b, scn["_incidence"], b, N, ns)
    (out / "probe.json").write_text(json.dumps({"distance": d, "b": b, "N": N}, indent=2))
    rec.outputs.append(str(out / "probe.json"))


def cmd_corner_fit(args, rec: RunRecord) -> None:
    try:
        sol = modal.ForwardSolution.load(args.solution)
    except FileNotFoundError as exc:
        raise UsageError(f"solution file not found: {args.solution}") from exc
    cs = corners_of(sol.profile)
    if not 0 <= args.corner < len(cs):
        raise UsageError(f"corner index must be in [0, {len(cs)})")
    corner = cs[args.corner]
    radii = corners.default_radii(sol.profile, corner)
    rec.inputs.update(solution=args.solution, corner=args.corner, n_max=args.nmax)
    out = _out_dir(args.out)

    def sampler(x1, x2):
        pts = np.stack([x1, x2], axis=-1)
        return modal.evaluate_field(sol, pts)

    fit = corners.fit_harmonic_expansion(sampler, corner, radii, n_max=args.nmax)
    report = {
        "corner": {"x1": corner.x1, "x2": corner.x2, "interior_angle": corner.interior_angle},
        "a": [_complex_json(v) for v in fit.a],
        "b": [_complex_json(v) for v in fit.b],
        "m": fit.m,
        "radii": fit.radii.tolist(),
        "residual_norms": fit.residual_norms.tolist(),
        "residual_exponent": fit.residual_exponent,
        "passes": bool(fit.residual_exponent >= fit.m + 2 - 0.3),
    }
    (out / "corner_fit.json").write_text(json.dumps(report, indent=2))
    rec.outputs.append(str(out / "corner_fit.json"))


def cmd_lemma_check(args, rec: RunRecord) -> None:
    rec.inputs.update(nmax=args.nmax, seed=args.seed)
    out = _out_dir(args.out)
    report = corners.lemma_battery(args.nmax, args.seed)
    (out / "lemma_report.json").write_text(json.dumps(report, indent=2, default=float))
    rec.outputs.append(str(out / "lemma_report.json"))
    if not report["all_pass"]:
        raise ValueError("lemma battery reported a failure")


def cmd_converge(args, rec: RunRecord) -> None:
    scn = load_scenario(args.scenario)
    prof = load_profile(args.profile)
    try:
        Ns = [int(v) for v in args.Ns.split(",")]
    except ValueError as exc:
        raise UsageError("--Ns takes a comma-separated list of integers") from exc
    rec.inputs.update(scenario=scn_echo(scn), profile=prof.to_dict(), Ns=Ns)
    out = _out_dir(args.out)
    rows = modal.convergence_study(prof, scn["_media"], scn["_incidence"], Ns)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "defect", "A0_plus_re", "A0_plus_im", "A0_minus_re", "A0_minus_im", "seconds"])
    for r in rows:
        w.writerow([r["N"], repr(r["defect"]), repr(r["A0_plus"].real), repr(r["A0_plus"].imag),
                    repr(r["A0_minus"].real), repr(r["A0_minus"].imag), repr(r["seconds"])])
    (out / "converge.csv").write_text(buf.getvalue())
    rec.outputs.append(str(out / "converge.csv"))


def scn_echo(scn: dict) -> dict:
    return {k: v for k, v in scn.items() if not k.startswith("_")}


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binarygrating", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True, profile=True):
        if scenario:
            p.add_argument("--scenario", required=True, help="scenario TOML")
        if profile:
            p.add_argument("--profile", required=True, help="profile JSON {transitions, heights}")
        p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("forward", help="modal solve: spectrum, efficiencies, trace")
    common(p)
    p.add_argument("--N", type=int, help="Fourier truncation (orders -N..N)")
    p.add_argument("--save-solution", action="store_true", help="also write solution.npz for corner-fit")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("oracle", help="finite-difference reference solve")
    common(p)
    p.add_argument("--nx", type=int, default=128)
    p.add_argument("--ny", type=int, default=128)
    p.add_argument("--orders", type=int, default=3, help="Rayleigh orders reported (|n| <= orders)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("invert", help="reconstruct profile and k2 from a trace CSV")
    p.add_argument("--data", required=True, help="trace CSV as written by forward")
    p.add_argument("--spec", required=True, help="inverse-problem TOML ([search], [reconstruction])")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("probe", help="trace distance between two configurations")
    p.add_argument("--scenario", required=True)
    p.add_argument("--profile-a", required=True)
    p.add_argument("--profile-b")
    p.add_argument("--k2-a", type=float)
    p.add_argument("--k2-b", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("corner-fit", help="harmonic expansion of a stored solution at a corner")
    p.add_argument("--solution", required=True, help="solution.npz from forward --save-solution")
    p.add_argument("--corner", type=int, default=0, help="index into the corner list")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corner_fit)

    p = sub.add_parser("lemma-check", help="exact checks of the corner lemmas")
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lemma_check)

    p = sub.add_parser("converge", help="energy defect versus truncation")
    common(p)
    p.add_argument("--Ns", default="5,10,20,40,80")
    p.set_defaults(func=cmd_converge)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rec = RunRecord(args.command, {})
    t0 = time.perf_counter()
    try:
        args.func(args, rec)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rec.timings["total"] = time.perf_counter() - t0
    rec.write(Path(args.out))
    return 0


def main() -> None:
    sys.exit(dispatch())
