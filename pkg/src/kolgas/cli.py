"""Command-line front end.

Subcommands:

  state                closed-form gas state report (JSON)
  sweep                state table over one swept variable (CSV)
  randomness generate  write an integer-list artifact (RNG or box spectrum)
  randomness audit     complexity/deficiency report for a list file (JSON)
  randomness gap       prefix-trace gap classification for a list file (JSON)
  sim relax            wall-relaxation run(s), disorder trace + timing (JSON)
  sim joule            free-expansion experiment (JSON)

Every JSON artifact embeds a run manifest under "manifest"; every CSV
carries the same manifest as a leading "# manifest: {...}" comment line.
Exit codes: 0 success, 2 domain error (bad physics/parameters), 3 format
error (unreadable input artifact).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import randomness as rnd
from . import sim as simmod
from .calibration import load_calibration
from .constants import CODATA, species_lookup
from .errors import DomainError, FormatError, NoPlateauError
from .thermo import GasSpec, ThermoState, state_equations
from .wall import classify_regime

ARTIFACT_VERSION = "1"

_ANGSTROM = 1e-10


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every output artifact."""

    command: str
    parameters: dict
    seed: int | None
    artifact_version: str
    calibration_version: str

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _manifest(command: str, params: dict, seed: int | None = None) -> RunManifest:
    return RunManifest(
        command=command,
        parameters=params,
        seed=seed,
        artifact_version=ARTIFACT_VERSION,
        calibration_version=load_calibration().version,
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text + "\n")


def _emit_csv(manifest: RunManifest, header: str, rows: list[str],
              path: str | None) -> None:
    lines = [f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}",
             header, *rows]
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# state / sweep

def _state_payload(state: ThermoState, spec: GasSpec) -> dict:
    return {
        "T": spec.T, "V": spec.V, "N": spec.N,
        "statistics": spec.statistics,
        "lambda_th_m": state.lambda_th,
        "lambda_th_angstrom": state.lambda_th / _ANGSTROM,
        "slot_count": state.M,
        "slots_per_particle": state.A,
        "kappa": state.kappa,
        "gamma": state.gamma,
        "free_energy_J": state.F,
        "entropy_J_per_K": state.S,
        "entropy_per_particle_kb": state.S / (CODATA.k_B * spec.N),
        "pressure_Pa": state.P,
        "chemical_potential_J": state.mu,
        "chemical_potential_over_kt": state.mu / (CODATA.k_B * spec.T),
        "internal_energy_J": state.U,
        "heat_capacity_v_J_per_K": state.c_V,
        "energy_exponents": {"T": state.e_T, "V": state.e_V, "N": state.e_N},
        "lambda_V_m": state.lambda_V,
    }


def cmd_state(args: argparse.Namespace) -> int:
    species = species_lookup(args.gas)
    spec = GasSpec(args.temp, args.volume, args.count, species,
                   args.statistics)
    state = state_equations(spec)
    side = args.vessel_side if args.vessel_side else args.volume ** (1.0 / 3.0)
    hierarchy = classify_regime(spec, side)

    warnings = []
    if hierarchy.regime != "collisionless":
        warnings.append(
            "mean free path is below the vessel side: not collisionless"
        )
    if not hierarchy.cool:
        warnings.append(
            "outside the cool window (normal-fluid he3, T in (3.3, 10] K)"
        )

    payload = {
        "manifest": _manifest("state", {
            "gas": species.name, "temp": args.temp, "volume": args.volume,
            "count": args.count, "statistics": args.statistics,
            "vessel_side": side,
        }).to_dict(),
        "gas": {
            "species": species.name,
            "mass_kg": species.mass,
            "spin_degeneracy": species.spin_degeneracy,
        },
        "state": _state_payload(state, spec),
        "lengths": {
            "mean_free_path_m": hierarchy.l_mfp,
            "vessel_side_m": hierarchy.b,
            "interparticle_m": hierarchy.ell_N,
            "thermal_m": hierarchy.lambda_th,
            "lj_radius_m": hierarchy.a_LJ,
            "bohr_like_radius_m": hierarchy.a_B,
            "regime": hierarchy.regime,
            "cool": hierarchy.cool,
            "inequalities": hierarchy.inequalities,
        },
        "warnings": warnings,
    }
    _emit_json(payload, args.output)
    return 0


_SWEEP_COLUMNS = ("lambda_th_m", "slot_count", "slots_per_particle", "kappa",
                  "gamma", "free_energy_J", "entropy_J_per_K", "pressure_Pa",
                  "chemical_potential_J", "internal_energy_J",
                  "heat_capacity_v_J_per_K")


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.var not in ("T", "V", "N"):
        raise DomainError("sweep variable must be one of T, V, N")
    if args.points < 2:
        raise DomainError("need at least 2 sweep points")
    if args.start <= 0 or args.stop <= 0:
        raise DomainError("sweep endpoints must be positive")
    species = species_lookup(args.gas)
    grid = (np.geomspace if args.log else np.linspace)(
        args.start, args.stop, args.points
    )
    base = {"T": args.temp, "V": args.volume, "N": args.count}
    rows = []
    for value in grid:
        pt = dict(base)
        pt[args.var] = float(value)
        state = state_equations(
            GasSpec(pt["T"], pt["V"], pt["N"], species, args.statistics)
        )
        payload = _state_payload(state, GasSpec(pt["T"], pt["V"], pt["N"],
                                                species, args.statistics))
        rows.append(",".join(
            [_fmt(float(value))] + [_fmt(payload[c]) for c in _SWEEP_COLUMNS]
        ))
    manifest = _manifest("sweep", {
        "gas": species.name, "var": args.var, "from": args.start,
        "to": args.stop, "points": args.points, "log": bool(args.log),
        "temp": args.temp, "volume": args.volume, "count": args.count,
        "statistics": args.statistics,
    })
    _emit_csv(manifest, ",".join((args.var,) + _SWEEP_COLUMNS), rows,
              args.output)
    return 0


# ---------------------------------------------------------------------------
# randomness

def cmd_randomness_generate(args: argparse.Namespace) -> int:
    if args.kind == "rng":
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        enc = rnd.rng_list(args.n, args.k if args.k is not None else 13, rng)
    elif args.kind == "smooth-box":
        species = species_lookup(args.gas)
        enc = rnd.smooth_box_list(args.n, args.box_side, species.mass,
                                  k=args.k)
    else:
        raise DomainError("kind must be rng or smooth-box")
    rnd.write_list_file(args.output, enc, raw=args.raw)
    payload = {
        "manifest": _manifest("randomness generate", {
            "kind": args.kind, "n": args.n, "k": enc.k,
            "gas": args.gas, "box_side": args.box_side, "raw": bool(args.raw),
            "output": args.output,
        }, seed=args.seed if args.kind == "rng" else None).to_dict(),
        "n": enc.n, "k": enc.k, "l_primitive": enc.l_primitive,
        "source_tag": enc.source_tag,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_randomness_audit(args: argparse.Namespace) -> int:
    enc = rnd.read_list_file(args.input)
    report = rnd.estimate_complexity(enc, estimator=args.estimator)
    payload = {
        "manifest": _manifest("randomness audit", {
            "input": args.input, "estimator": args.estimator,
        }).to_dict(),
        "n": enc.n, "k": enc.k, "source_tag": enc.source_tag,
        "l_primitive": report.l_primitive,
        "k_hat_bits": report.k_hat,
        "estimator_id": report.estimator_id,
        "deficiency_bits": report.deficiency,
        "gap_class": report.gap_class,
    }
    _emit_json(payload, args.output)
    return 0


def cmd_randomness_gap(args: argparse.Namespace) -> int:
    enc = rnd.read_list_file(args.input)
    trace = rnd.prefix_trace(enc, points=args.points,
                             estimator=args.estimator)
    verdict = rnd.gap_classify(trace)
    payload = {
        "manifest": _manifest("randomness gap", {
            "input": args.input, "points": args.points,
            "estimator": args.estimator,
        }).to_dict(),
        "n": enc.n, "k": enc.k, "source_tag": enc.source_tag,
        "prefix_bits": [int(l) for l, _ in trace],
        "k_hat_bits": [float(kh) for _, kh in trace],
        "deficiency_bits": [float(l - kh) for l, kh in trace],
        "label": verdict.label,
        "change_point_bits": verdict.change_point,
        "slope_bits_per_bit": verdict.slope,
    }
    _emit_json(payload, args.output)
    return 0


# ---------------------------------------------------------------------------
# sim

def _sim_config(args: argparse.Namespace, seed: int) -> simmod.SimConfig:
    species = species_lookup(args.gas)
    box = (args.box_side, args.box_side, args.box_side)
    cfg0 = simmod.SimConfig(
        n_particles=args.particles, box=box, T_wall=args.temp,
        species=species, wall_model=args.wall_model, seed=seed,
        dt_out=1.0, duration=0.0, perturbation=args.perturbation,
    )
    dt_out = cfg0.t_b / args.samples_per_transit
    return simmod.SimConfig(
        n_particles=args.particles, box=box, T_wall=args.temp,
        species=species, wall_model=args.wall_model, seed=seed,
        dt_out=dt_out, duration=args.transits * cfg0.t_b,
        perturbation=args.perturbation,
    )


_TRACE_HEADER = "t,D_hat,K_orient,K_nn,chi2_orient,chi2_pos"


def _write_trace(manifest: RunManifest, trace: simmod.DisorderTrace,
                 path: str) -> None:
    rows = [
        ",".join(_fmt(v) for v in row)
        for row in zip(trace.t, trace.d_hat, trace.k_orient, trace.k_nn,
                       trace.chi2_orient, trace.chi2_pos)
    ]
    _emit_csv(manifest, _TRACE_HEADER, rows, path)


def _write_events(manifest: RunManifest, events: dict, path: str) -> None:
    rows = [
        f"{_fmt(t)},{pid},{_fmt(th)},{_fmt(ph)},{_fmt(sp)}"
        for t, pid, th, ph, sp in zip(
            events["t"], events["particle_id"], events["exit_theta"],
            events["exit_phi"], events["speed"])
    ]
    _emit_csv(manifest, "t,particle_id,exit_theta,exit_phi,speed", rows, path)


def cmd_sim_relax(args: argparse.Namespace) -> int:
    seeds = (
        [args.seed] if args.seeds <= 1
        else [simmod.member_seed(args.seed, i) for i in range(args.seeds)]
    )
    params = {
        "wall_model": args.wall_model, "particles": args.particles,
        "box_side": args.box_side, "temp": args.temp, "gas": args.gas,
        "init": args.init, "transits": args.transits,
        "samples_per_transit": args.samples_per_transit,
        "perturbation": args.perturbation, "seeds": args.seeds,
    }
    manifest = _manifest("sim relax", params, seed=args.seed)

    runs = []
    last_run = None
    for seed in seeds:
        cfg = _sim_config(args, seed)
        run = simmod.simulate(cfg, args.init)
        last_run = run
        entry = {
            "seed": seed,
            "d_hat_initial_bits": float(run.trace.d_hat[0]),
            "d_hat_final_bits": float(run.trace.d_hat[-1]),
            "l_total_bits": run.trace.l_total,
            "n_wall_events": run.final_state.n_events,
        }
        try:
            entry["t_relax_s"] = simmod.relaxation_time(run.trace)
            entry["t_relax_transits"] = entry["t_relax_s"] / run.t_b
            entry["no_plateau_reason"] = None
        except NoPlateauError as exc:
            entry["t_relax_s"] = None
            entry["t_relax_transits"] = None
            entry["no_plateau_reason"] = str(exc)
        runs.append(entry)

    payload = {
        "manifest": manifest.to_dict(),
        "t_b_s": last_run.t_b,
        "runs": runs,
    }
    _emit_json(payload, args.output)
    if args.trace_output:
        _write_trace(manifest, last_run.trace, args.trace_output)
    if args.events_output:
        _write_events(manifest, last_run.final_state.events(),
                      args.events_output)
    return 0


def cmd_sim_joule(args: argparse.Namespace) -> int:
    cfg = _sim_config(args, args.seed)
    report = simmod.run_joule_expansion(cfg, args.ratio)
    manifest = _manifest("sim joule", {
        "wall_model": args.wall_model, "particles": args.particles,
        "box_side": args.box_side, "temp": args.temp, "gas": args.gas,
        "ratio": args.ratio, "transits": args.transits,
        "samples_per_transit": args.samples_per_transit,
        "perturbation": args.perturbation,
    }, seed=args.seed)
    payload = {
        "manifest": manifest.to_dict(),
        "volume_ratio": report.volume_ratio,
        "d_hat_before_bits": report.d_hat_before,
        "d_hat_after_bits": report.d_hat_after,
        "delta_d_hat_bits": report.delta_d_hat,
        "delta_s_per_particle_kb": report.delta_s_per_particle_kb,
        "ln_ratio": report.ln_ratio,
        "disorder_increased": bool(report.delta_d_hat > 0.0)
        if report.volume_ratio > 1.0 else None,
    }
    _emit_json(payload, args.output)
    if args.trace_prefix:
        _write_trace(manifest, report.trace_before,
                     args.trace_prefix + ".before.csv")
        _write_trace(manifest, report.trace_after,
                     args.trace_prefix + ".after.csv")
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_gas_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gas", default="he3", help="species name (he3, he4)")
    p.add_argument("--temp", type=float, default=10.0, help="temperature, K")
    p.add_argument("--volume", type=float, default=1.8e-4, help="volume, m^3")
    p.add_argument("--count", type=float, default=1.7e16,
                   help="particle count")
    p.add_argument("--statistics", choices=("fermi", "bose"),
                   default="fermi")


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wall-model", required=True,
                   choices=simmod.WALL_MODELS)
    p.add_argument("--particles", type=int, default=10_000)
    p.add_argument("--box-side", type=float, default=0.035,
                   help="cubic box edge, m")
    p.add_argument("--temp", type=float, default=10.0)
    p.add_argument("--gas", default="he3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transits", type=float, default=8.0,
                   help="run length in vessel transit times")
    p.add_argument("--samples-per-transit", type=float, default=8.0)
    p.add_argument("--perturbation", type=float, default=0.8,
                   help="site-normal tilt scale for specular_random_sites")
    p.add_argument("--output", default=None, help="JSON path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kolgas",
        description="closed-form gas state equations, computable randomness "
                    "audits, and a collisionless-gas relaxation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="single-point state report")
    _add_gas_state_args(p_state)
    p_state.add_argument("--vessel-side", type=float, default=None,
                         help="wall spacing for the length hierarchy, m")
    p_state.add_argument("--output", default=None)
    p_state.set_defaults(func=cmd_state)

    p_sweep = sub.add_parser("sweep", help="state table over one variable")
    _add_gas_state_args(p_sweep)
    p_sweep.add_argument("--var", required=True, help="T, V or N")
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--points", type=int, required=True)
    p_sweep.add_argument("--log", action="store_true",
                         help="geometric instead of linear spacing")
    p_sweep.add_argument("--output", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_rand = sub.add_parser("randomness", help="list artifacts and audits")
    rand_sub = p_rand.add_subparsers(dest="rand_command", required=True)

    p_gen = rand_sub.add_parser("generate", help="write a list artifact")
    p_gen.add_argument("--kind", choices=("rng", "smooth-box"),
                       required=True)
    p_gen.add_argument("--n", type=int, default=10_000,
                       help="number of list entries")
    p_gen.add_argument("--k", type=int, default=None,
                       help="bits per entry (default: fits the values)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--gas", default="he3")
    p_gen.add_argument("--box-side", type=float, default=0.035)
    p_gen.add_argument("--raw", action="store_true",
                       help="packed binary body instead of decimal lines")
    p_gen.add_argument("--output", required=True)
    p_gen.set_defaults(func=cmd_randomness_generate)

    p_audit = rand_sub.add_parser("audit", help="complexity report")
    p_audit.add_argument("--input", required=True)
    p_audit.add_argument("--estimator", default="best")
    p_audit.add_argument("--output", default=None)
    p_audit.set_defaults(func=cmd_randomness_audit)

    p_gap = rand_sub.add_parser("gap", help="prefix-trace classification")
    p_gap.add_argument("--input", required=True)
    p_gap.add_argument("--points", type=int, default=12)
    p_gap.add_argument("--estimator", default="best")
    p_gap.add_argument("--output", default=None)
    p_gap.set_defaults(func=cmd_randomness_gap)

    p_sim = sub.add_parser("sim", help="event-driven gas runs")
    sim_sub = p_sim.add_subparsers(dest="sim_command", required=True)

    p_relax = sim_sub.add_parser("relax", help="relaxation to disorder")
    _add_sim_args(p_relax)
    p_relax.add_argument("--init", choices=simmod.INIT_MODES,
                         default="beam")
    p_relax.add_argument("--seeds", type=int, default=1,
                         help="batch size (member seeds derive from --seed)")
    p_relax.add_argument("--trace-output", default=None,
                         help="CSV trace path (last run of the batch)")
    p_relax.add_argument("--events-output", default=None,
                         help="CSV wall-event log path (last run)")
    p_relax.set_defaults(func=cmd_sim_relax)

    p_joule = sim_sub.add_parser("joule", help="free expansion")
    _add_sim_args(p_joule)
    p_joule.add_argument("--ratio", type=float, default=4.0,
                         help="volume expansion ratio, >= 1")
    p_joule.add_argument("--trace-prefix", default=None,
                         help="write before/after trace CSVs to this prefix")
    p_joule.set_defaults(func=cmd_sim_joule)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
