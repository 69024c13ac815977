"""Command-line front end.

Every subcommand reads an optional strict JSON config (``--config``),
writes CSV/SVG/JSON artifacts into ``--out`` and exits with 0 on success,
1 on a physics or domain error and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import calibration, coupled, cosmo, dynamics, galaxy, orbits, output, profiles, reproduce
from .constants import C, KPC, M_SUN
from .errors import ConfigError, VarHbarError

SUBCOMMANDS = ("calibrate", "profile", "trajectory", "binary", "rotation", "friedmann", "coupled", "reproduce-paper")
# subcommands with a published reference case used when --config is omitted
REFERENCE_CASES = ("calibrate", "binary", "rotation", "reproduce-paper")
INTEGRATOR_TOLS = ("rtol", "atol")


@dataclass
class RunConfig:
    subcommand: str
    config_path: Path | None
    out_dir: Path
    tol: dict = field(default_factory=dict)
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.config_path is None and self.subcommand not in REFERENCE_CASES:
            raise ConfigError(f"{self.subcommand} needs --config (no reference case)")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


# ------------------------------------------------------------------ config


_REQ = object()


def _num(v, key):
    if isinstance(v, bool):
        raise ConfigError(f"{key}: expected a number")
    if v is None or v in ("inf", "Infinity"):
        return math.inf
    if v in ("-inf", "-Infinity"):
        return -math.inf
    if isinstance(v, (int, float)):
        return float(v)
    raise ConfigError(f"{key}: expected a number, got {v!r}")


def take(cfg: dict, schema: dict, where: str) -> dict:
    """Validate ``cfg`` against ``schema`` (key -> default or _REQ); unknown keys are errors."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(cfg) - set(schema)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    out = {}
    for key, default in schema.items():
        if key not in cfg:
            if default is _REQ:
                raise ConfigError(f"{where}: missing required key {key!r}")
            out[key] = default
        else:
            out[key] = cfg[key]
    return out


def load_config(path: Path | None) -> dict | None:
    if path is None:
        return None
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def _profile_from(d, where):
    p = take(d, {"A0": _REQ, "L_t": _REQ, "ell": _REQ, "E0": _REQ}, where)
    return profiles.HbarProfile(**{k: _num(v, f"{where}.{k}") for k, v in p.items()})


def _vec(v, key, dims=(1, 2, 3)):
    if not isinstance(v, list) or len(v) not in dims:
        raise ConfigError(f"{key}: expected a list of length {dims}")
    return [_num(x, key) for x in v]


def _int(v, key, lo=1):
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ConfigError(f"{key}: expected an integer >= {lo}")
    return v


def _integrator_tols(tol: dict, defaults: dict) -> dict:
    unknown = set(tol) - set(INTEGRATOR_TOLS)
    if unknown:
        raise ConfigError(f"--tol: unknown name(s) {sorted(unknown)}; expected {INTEGRATOR_TOLS}")
    return {**defaults, **tol}


def _dump_json(path, obj):
    def conv(o):
        if isinstance(o, float) and not math.isfinite(o):
            return str(o)
        if isinstance(o, dict):
            return {k: conv(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [conv(v) for v in o]
        if isinstance(o, np.generic):
            return conv(o.item())
        return o
    Path(path).write_text(json.dumps(conv(obj), indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------- subcommands


def cmd_calibrate(rc: RunConfig, cfg):
    if cfg is None:
        inputs = calibration.CalibrationInputs.reference()
        print("calibrate: using the reference inputs", file=sys.stderr)
    else:
        keys = ("alpha_rate", "hbar_m", "t_H", "lambda_energy", "frac_delta_hbar", "R_orbit", "delta_R_orbit")
        d = take(cfg, {k: _REQ for k in keys}, "calibrate")
        inputs = calibration.CalibrationInputs(**{k: _num(v, k) for k, v in d.items()})
    res = calibration.calibrate(inputs)
    payload = res.to_dict()
    payload["inputs"] = asdict(inputs)
    _dump_json(rc.out_dir / "calibration.json", payload)
    dev = res.deviations()
    lines = [f"{'quantity':<22}{'computed':>14}{'published':>14}{'deviation':>12}"]
    for key, ref in calibration.PUBLISHED.items():
        if key == "log_gradient_at_orbit":
            val = profiles.log_gradient(res.profile, inputs.R_orbit)
            d_ = (val - ref) / ref
        else:
            val, d_ = getattr(res, key), dev[key]
        lines.append(f"{key:<22}{val:>14.4e}{ref:>14.4e}{d_:>+11.2%}")
    text = "\n".join(lines) + "\n"
    (rc.out_dir / "calibration.txt").write_text(text)
    print(text, end="")


def cmd_profile(rc: RunConfig, cfg):
    d = take(cfg, {"kind": _REQ, "profile": _REQ, "r_min": _REQ, "r_max": _REQ, "n_r": _REQ,
                   "x0": _REQ, "quantity": "hbar"}, "profile")
    r = np.linspace(_num(d["r_min"], "r_min"), _num(d["r_max"], "r_max"), _int(d["n_r"], "n_r", 2))
    x0 = np.atleast_1d(np.asarray([_num(v, "x0") for v in (d["x0"] if isinstance(d["x0"], list) else [d["x0"]])]))
    if d["kind"] == "zero_momentum":
        prof = _profile_from(d["profile"], "profile.profile")
        fn = {"hbar": profiles.hbar_at, "hamiltonian_density": profiles.hamiltonian_density}.get(d["quantity"])
        if fn is None:
            raise ConfigError("quantity must be 'hbar' or 'hamiltonian_density'")
        vals = [np.broadcast_to(fn(prof, r, x / C), r.shape) for x in x0]
    elif d["kind"] == "standing_wave":
        sw_d = take(d["profile"], {"p": _REQ, "d1": _REQ, "d3": _REQ, "d2d4_sq": _REQ}, "profile.profile")
        sw = profiles.StandingWaveProfile(**{k: _num(v, k) for k, v in sw_d.items()})
        if d["quantity"] not in ("hbar", "psi2"):
            raise ConfigError("standing_wave quantity must be 'psi2'")
        vals = [profiles.standing_wave_psi2(sw, r, x) for x in x0]
    else:
        raise ConfigError("kind must be 'zero_momentum' or 'standing_wave'")
    rr = np.concatenate([r for _ in x0])
    xx = np.concatenate([np.full_like(r, x) for x in x0])
    output.write_csv(rc.out_dir / "profile.csv", ["r_m", "x0_m", "value"], [rr, xx, np.concatenate(vals)])


def _field_from(d):
    kind = d.get("type") if isinstance(d, dict) else None
    if kind == "constant":
        f = take(d, {"type": _REQ, "hbar": _REQ}, "field")
        return dynamics.ConstantField(_num(f["hbar"], "hbar"))
    if kind == "exponential":
        f = take(d, {"type": _REQ, "hbar0": _REQ, "k": _REQ}, "field")
        return dynamics.ExponentialField(_num(f["hbar0"], "hbar0"), _vec(f["k"], "k"))
    if kind == "profile":
        f = take(d, {"type": _REQ, "profile": _REQ, "t": _REQ}, "field")
        return dynamics.ProfileField(_profile_from(f["profile"], "field.profile"), _num(f["t"], "t"))
    raise ConfigError("field.type must be 'constant', 'exponential' or 'profile'")


def _potential_from(d):
    kind = d.get("type") if isinstance(d, dict) else None
    if kind == "none":
        take(d, {"type": _REQ}, "potential")
        return dynamics.ZeroPotential()
    if kind == "point_mass":
        p = take(d, {"type": _REQ, "GM": _REQ}, "potential")
        return dynamics.PointMass(_num(p["GM"], "GM"))
    raise ConfigError("potential.type must be 'none' or 'point_mass'")


def cmd_trajectory(rc: RunConfig, cfg):
    d = take(cfg, {"field": _REQ, "potential": _REQ, "x0": _REQ, "v0": _REQ, "T": _REQ, "mass": _REQ,
                   "n_samples": _REQ}, "trajectory")
    x0, v0 = _vec(d["x0"], "x0"), _vec(d["v0"], "v0")
    if len(x0) != len(v0):
        raise ConfigError("x0 and v0 must have the same dimension")
    field_ = _field_from(d["field"])
    pot = _potential_from(d["potential"])
    tols = _integrator_tols(rc.tol, {"rtol": 1e-12, "atol": 1e-12})
    icfg = dynamics.IntegratorConfig(n_samples=_int(d["n_samples"], "n_samples", 2), **tols)
    tr = dynamics.integrate(dynamics.State(x0, v0), field_, pot, _num(d["T"], "T"), icfg,
                            mass=_num(d["mass"], "mass"))
    n = len(x0)
    names = ["x", "y", "z"][:n]
    header = ["t", *names, *[f"v{c}" for c in names], "W"]
    cols = [tr.t, *tr.x.T, *tr.v.T, tr.W]
    output.write_csv(rc.out_dir / "trajectory.csv", header, cols)
    _dump_json(rc.out_dir / "trajectory_summary.json",
               dict(steps=tr.steps, rejected=tr.rejected, nfev=tr.nfev, max_W_drift=tr.max_W_drift))


def cmd_binary(rc: RunConfig, cfg):
    keys = ("m1", "m2", "r_peri", "v_each", "ell", "coupling_mode", "duration", "samples_per_period")
    if cfg is None:
        kw = {"ell": reproduce.NGDP_ELL}
        print("binary: using the reference two-neutron-star configuration", file=sys.stderr)
    else:
        d = take(cfg, {**{k: _REQ for k in keys[:-1]}, "samples_per_period": 4000}, "binary")
        kw = {k: (_num(v, k) if k not in ("coupling_mode", "samples_per_period") else v) for k, v in d.items()}
        kw["samples_per_period"] = _int(kw["samples_per_period"], "samples_per_period", 16)
    if rc.extra.get("ell") is not None:
        kw["ell"] = rc.extra["ell"]
    if rc.extra.get("mode") is not None:
        kw["coupling_mode"] = rc.extra["mode"]
    kw.update(_integrator_tols(rc.tol, {}))
    bc = orbits.BinaryConfig(**kw)
    t1, t2, diag = orbits.simulate_binary(bc)
    output.write_csv(rc.out_dir / "binary_orbit.csv", ["t", "x1", "y1", "x2", "y2", "W"],
                     [t1.t, t1.x[:, 0], t1.x[:, 1], t2.x[:, 0], t2.x[:, 1], t1.W])
    title = (f"ell = {bc.ell:.3g} m ({bc.coupling_mode}): P = {diag.period_hours:.2f} h, "
             f"e = {diag.eccentricity:.3f}, precession = {diag.apsidal_precession:.4g} arcsec/orbit")
    output.orbit_svg(rc.out_dir / "binary_orbit.svg", t1.x[:, 0], t1.x[:, 1], t2.x[:, 0], t2.x[:, 1], title)
    summary = dict(period_s=diag.period, period_h=diag.period_hours, eccentricity=diag.eccentricity,
                   apsidal_precession_arcsec=diag.apsidal_precession, W_drift=diag.W_drift,
                   config=asdict(bc))
    _dump_json(rc.out_dir / "binary_diagnostics.json", summary)
    print(title)


def cmd_rotation(rc: RunConfig, cfg):
    if cfg is None:
        print("rotation: using the two reference galaxies", file=sys.stderr)
        cases = {
            "rotation_9e10": galaxy.RotationProblem.from_astro(150.0, 9e10, 10.0, 30.0),
            "rotation_1.3e11": galaxy.RotationProblem.from_astro(150.0, 1.3e11, 10.0, 60.0),
        }
    else:
        d = take(cfg, {"v_flat": _REQ, "M_visible": _REQ, "r_in": _REQ, "r_out": _REQ, "n_grid": 4001}, "rotation")
        cases = {"rotation": galaxy.RotationProblem(
            _num(d["v_flat"], "v_flat"), _num(d["M_visible"], "M_visible"), _num(d["r_in"], "r_in"),
            _num(d["r_out"], "r_out"), _int(d["n_grid"], "n_grid", 3))}
    for stem, prob in cases.items():
        sol = galaxy.invert_rotation_curve(prob)
        r_kpc = sol.r / KPC
        output.write_csv(rc.out_dir / f"{stem}.csv", ["r_kpc", "ln_hbar_rel", "factor"],
                         [r_kpc, sol.ln_hbar_rel, sol.factor])
        title = (f"v = {prob.v_flat / 1e3:.0f} km/s, M = {prob.M_visible / M_SUN:.3g} Msun: "
                 f"min factor {sol.min_factor:.4f} at {sol.r_min / KPC:.2f} kpc")
        output.curve_svg(rc.out_dir / f"{stem}.svg", r_kpc, sol.factor, "r [kpc]", "hbar(r) / hbar(r_in)", title)
        print(title)


def cmd_friedmann(rc: RunConfig, cfg):
    d = take(cfg, {"hbar_o": _REQ, "rho": _REQ, "k_curv": _REQ, "b": _REQ, "x": _REQ, "a0": _REQ,
                   "t_start": _REQ, "t_end": _REQ, "n_samples": _REQ}, "friedmann")
    p = cosmo.CosmoParams(**{k: _num(d[k], k) for k in ("hbar_o", "rho", "k_curv", "b", "x")})
    tols = _integrator_tols(rc.tol, {"rtol": 1e-12, "atol": 1e-14})
    run = cosmo.integrate_scale_factor(p, _num(d["a0"], "a0"), (_num(d["t_start"], "t_start"),
                                       _num(d["t_end"], "t_end")), _int(d["n_samples"], "n_samples", 2), **tols)
    output.write_csv(rc.out_dir / "friedmann.csv", ["t_s", "a", "rhs"], [run.t, run.a, run.rhs])
    _dump_json(rc.out_dir / "friedmann_summary.json",
               dict(constraint_residual=run.constraint_residual, lambda_over_3=p.lambda_term))


def cmd_coupled(rc: RunConfig, cfg):
    d = take(cfg, {"profile": _REQ, "r_min": _REQ, "r_max": _REQ, "n_r": _REQ, "x0_max": _REQ, "dx0": _REQ,
                   "omega_p": _REQ, "outer": _REQ, "t0": _REQ, "dump_every": _REQ}, "coupled")
    prof = _profile_from(d["profile"], "coupled.profile")
    r = np.linspace(_num(d["r_min"], "r_min"), _num(d["r_max"], "r_max"), _int(d["n_r"], "n_r", 2))
    dx0 = _num(d["dx0"], "dx0")
    n_t = int(round(_num(d["x0_max"], "x0_max") / dx0)) + 1
    grid = coupled.RadialGrid(r, dx0 * np.arange(n_t))
    if d["outer"] not in ("absorbing", "reflecting", "fixed"):
        raise ConfigError("outer must be 'absorbing', 'reflecting' or 'fixed'")
    sol = coupled.solve_supported_field_radial(prof, grid, omega_p=_num(d["omega_p"], "omega_p"),
                                               outer=d["outer"], t0=_num(d["t0"], "t0"))
    every = _int(d["dump_every"], "dump_every")
    sub = rc.out_dir / "coupled"
    sub.mkdir(exist_ok=True)
    for j in range(0, n_t, every):
        output.write_csv(sub / f"slice_{j:06d}.csv", ["r_m", "x0_m", "phi", "dphi_dx0"],
                         [sol.r, np.full_like(sol.r, sol.x0[j]), sol.phi[j], sol.dphi[j]])
    E = coupled.field_energy(sol, prof, _num(d["t0"], "t0"))
    _dump_json(rc.out_dir / "coupled_summary.json",
               dict(n_slices=len(range(0, n_t, every)), energy_first=E[0], energy_last=E[-1],
                    null_ratio_last=coupled.source_term_ratio(sol)))


def cmd_reproduce(rc: RunConfig, cfg):
    if cfg is not None:
        take(cfg, {}, "reproduce-paper")
    unknown = set(rc.tol) - reproduce.CHECK_NAMES
    if unknown:
        raise ConfigError(f"--tol: unknown check name(s) {sorted(unknown)}")
    results = reproduce.run_all(rc.tol, seed=rc.seed)
    header = ["criterion", "name", "value", "target", "kind", "tol", "error", "passed", "required"]
    rows = [c for k in sorted(results) for c in results[k]]
    with (rc.out_dir / "reproduce.csv").open("w") as fh:
        fh.write(",".join(header) + "\n")
        for c in rows:
            fields = [c.criterion, c.name, repr(c.value), repr(c.target), c.kind, repr(c.tol), repr(c.error),
                      int(c.passed), int(c.required)]
            fh.write(",".join(map(str, fields)) + "\n")
    all_ok = True
    for k in sorted(results):
        ok = reproduce.criterion_passed(results[k])
        all_ok &= ok
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
        for c in results[k]:
            print("   " + c.line())
    return 0 if all_ok else 1


COMMANDS = {
    "calibrate": cmd_calibrate, "profile": cmd_profile, "trajectory": cmd_trajectory, "binary": cmd_binary,
    "rotation": cmd_rotation, "friedmann": cmd_friedmann, "coupled": cmd_coupled, "reproduce-paper": cmd_reproduce,
}


def run(rc: RunConfig) -> int:
    """Execute one subcommand; returns the exit status."""
    try:
        rc.out_dir.mkdir(parents=True, exist_ok=True)
        probe = rc.out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory not writable: {exc}") from exc
    cfg = load_config(rc.config_path)
    status = COMMANDS[rc.subcommand](rc, cfg)
    return 0 if status is None else status


def _parse_tol(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ConfigError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--tol {name}: {value!r} is not a number") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varhbar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="strict JSON config (SI units)")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override (repeatable)")
        if name == "binary":
            p.add_argument("--ell", type=float, default=None, help="radial scale of the companion profile [m]")
            p.add_argument("--mode", choices=("per_body", "relative"), default=None, help="coupling mode")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = RunConfig(
            subcommand=args.subcommand, config_path=args.config, out_dir=args.out, tol=_parse_tol(args.tol),
            seed=args.seed, extra={k: getattr(args, k, None) for k in ("ell", "mode")},
        )
        return run(rc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (VarHbarError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
