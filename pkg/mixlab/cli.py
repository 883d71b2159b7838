"""Command line interface: ``mixlab run | measure | schedule | verify``"""

from __future__ import print_function, division
import argparse
import json
import os
import sys
import dataclasses
import mixlab.constants as constants
from mixlab.blocks import block_from_descriptor
from mixlab.budgets import (
    enstrophy_schedule, palenstrophy_schedule, decay_fit, window_reports,
    first_holding_window, transport_cost
    )
from mixlab.composer import CellularFlow, Schedule, run_flow, sample_velocity
from mixlab.diagnostics import (
    MixParams, check_order, geometric_mixing_scale, functional_mixing_scale,
    characteristic_length_scale, unmixedness_certificate, sobolev_norm,
    lusin_lipschitz_profile
    )
from mixlab.grid_field import indicator, load_field, mixed_level, save_field
from mixlab.helpers import ManifestError, MissingVelocityError, ResolutionError, manifest_hash
from mixlab.manifest import RunManifest
from mixlab.report import (
    write_measurements, write_field_measurements, write_schedule, write_json, plot_decay
    )
from mixlab.suites import suite_names, suite_aliases, run_suite
from mixlab.version import MIXLAB_VERSIONING


def _schedule_for(manifest, blocks, sigma):
    budget = manifest["budget"]
    stages = manifest["stages"]
    if budget is None:
        return Schedule.uniform(stages)
    if budget["kind"] == "explicit":
        return Schedule(budget["times"][:stages + 1])
    if budget["kind"] == "enstrophy":
        return enstrophy_schedule(blocks, budget["B"], budget["p"], manifest["ell0"], sigma)
    return palenstrophy_schedule(blocks, budget["B"], budget["s"], budget["p"],
                                 manifest["ell0"], sigma)


def _stage_norms(flow, s, p):
    """Measured W^{s,p} norm of the global velocity at the middle of every stage"""
    norms = []
    for n in range(flow.stages):
        t = flow.schedule.times[n] + flow.schedule.tau(n) / 2
        norms.append(sobolev_norm(sample_velocity(flow, t), s, p, tile_level=flow.tile_level(n)))
    return norms


def _preflight(flow, toggles, quantity, s, p):
    """Fail before any artifact is written when a requested diagnostic cannot run"""
    if toggles["sobolev"] or toggles["lusin"] or (toggles["costs"] and quantity is not None):
        for n in range(flow.stages):
            flow.stage_velocity(n)
    if toggles["sobolev"]:
        integer = check_order(s, p)
        for n in range(flow.stages):
            if not integer and flow.tile_level(n) > 0:
                raise ValueError("Fractional norms need an untiled stage, stage %d is tiled" % n)
            if integer and flow.grid.n // 2 ** flow.tile_level(n) < constants.STENCIL_SAMPLES:
                raise ResolutionError("Stage %d tiles hold fewer than %d samples per side"
                                      % (n, constants.STENCIL_SAMPLES))


def run_scenario(manifest, out=None, verbose=False):
    """Run a manifest and write its artifacts; returns the output directory"""
    tag = manifest.hash
    out = out or manifest["output"]
    toggles = manifest["diagnostics"]
    blocks = manifest.blocks()
    sigma = manifest.sigma()
    params = manifest.params()
    schedule = _schedule_for(manifest, blocks, sigma)
    flow = CellularFlow(manifest.field(), manifest["ell0"], blocks, schedule, sigma)
    quantity = "Hminus1" if toggles["H1"] else ("G" if toggles["G"] else None)
    budget = manifest["budget"] or {}
    s, p = budget.get("s", 1), budget.get("p", 2)
    _preflight(flow, toggles, quantity, s, p)

    snapshots = run_flow(flow, measure=manifest.measure(), params=params,
                         padding=manifest["padding"], verbose=verbose)

    os.makedirs(os.path.join(out, "snapshots"), exist_ok=True)
    for snap in snapshots:
        save_field(snap.field, os.path.join(out, "snapshots", "field_%d.txt" % snap.n),
                   comments=["manifest %s" % tag, "t %.17g" % snap.t])

    norms = _stage_norms(flow, s, p) if toggles["sobolev"] else None
    write_measurements(os.path.join(out, "measurements.csv"), snapshots, tag, norms)

    if toggles["costs"] and quantity is not None and flow.stages > 0:
        reports = window_reports(flow, snapshots, 0, p, quantity, params)
        write_json(os.path.join(out, "cost_reports.json"),
                   {"reports": reports, "first_holding_window": first_holding_window(reports)},
                   tag)

    if quantity is not None and len(snapshots) >= constants.MIN_DECAY_SAMPLES:
        samples = [(snap.t, float(snap.measurements[quantity])) for snap in snapshots]
        fits = decay_fit(samples)
        write_json(os.path.join(out, "decay_fit.json"),
                   {"quantity": quantity, "samples": samples, "fit": fits}, tag)
        try:
            plot_decay(os.path.join(out, "decay.svg"), samples, fits, tag, quantity)
        except ImportError as e:
            print("Skipping decay.svg:", e, file=sys.stderr)

    if toggles["lusin"] and flow.stages > 0:
        cost = transport_cost(flow, 0, flow.stages, p)
        profile = lusin_lipschitz_profile(flow.cumulative, cost, p)
        write_json(os.path.join(out, "lusin.json"), dataclasses.asdict(profile), tag)

    if verbose:
        print("Wrote", len(snapshots), "snapshots to", out)
    return out


def measure(path, params, padding=constants.H1_PADDING, out=None):
    """Measurement table of one field file"""
    field = load_field(path)
    tag = manifest_hash({
        "command": "measure", "field": os.path.basename(path), "kappa": params.kappa,
        "gamma_bar": params.gamma_bar, "alpha": params.alpha, "padding": padding,
        })
    rows = []
    level = mixed_level(field)
    rows.append(["mixed_level", level, level, None, None])
    G = geometric_mixing_scale(field, params)
    rows.append(["G", G.value, G.value, G.lower, G.upper])
    H = functional_mixing_scale(field, padding)
    rows.append(["Hminus1", padding, H, None, None])
    if field.binary:
        for sign, name in ((1, "LS_plus"), (-1, "LS_minus")):
            ls = characteristic_length_scale(indicator(field, sign), None, params)
            rows.append([name, ls, ls, None, None])
        k = max(level, 0)
        if k <= field.grid.m - 2:
            cert = unmixedness_certificate(field, k, params)
            rows.append(["alpha", k, cert["measured_alpha"], None, None])
    return write_field_measurements(out, rows, tag)


def schedule_command(s, p, budget, stages, descriptor, ell0=1, out=None):
    blocks = [block_from_descriptor(descriptor)] * stages
    if s == 1:
        schedule = enstrophy_schedule(blocks, budget, p, ell0)
    else:
        schedule = palenstrophy_schedule(blocks, budget, s, p, ell0)
    tag = manifest_hash({"command": "schedule", "s": s, "p": p, "budget": budget,
                         "stages": stages, "block": descriptor, "ell0": ell0})
    return write_schedule(out, schedule, tag)


def _parser():
    parser = argparse.ArgumentParser(prog="mixlab", description="Cellular-flow mixing laboratory")
    parser.add_argument("--version", action="version", version=MIXLAB_VERSIONING)
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="Run a scenario manifest")
    run.add_argument("manifest")
    run.add_argument("--out", default=None)
    run.add_argument("--verbose", action="store_true")

    meas = sub.add_parser("measure", help="Measure a field file")
    meas.add_argument("--field", required=True)
    meas.add_argument("--kappa", type=float, default=constants.KAPPA)
    meas.add_argument("--gamma-bar", type=float, default=constants.GAMMA_BAR)
    meas.add_argument("--alpha", type=float, default=constants.ALPHA)
    meas.add_argument("--padding", type=int, default=constants.H1_PADDING)
    meas.add_argument("--out", default=None)

    sched = sub.add_parser("schedule", help="Stage times under a Sobolev budget")
    sched.add_argument("--s", type=float, default=1)
    sched.add_argument("--p", type=float, default=2)
    sched.add_argument("--budget", type=float, required=True)
    sched.add_argument("--stages", type=int, required=True)
    sched.add_argument("--ell0", type=int, default=1)
    sched.add_argument("--block", default='{"kind": "interleave", "velocity": {"kind": "swirl"}}',
                       help="JSON block descriptor")
    sched.add_argument("--out", default=None)

    ver = sub.add_parser("verify", help="Run a property suite")
    ver.add_argument("suite", choices=suite_names + sorted(suite_aliases))
    ver.add_argument("--verbose", action="store_true")
    return parser


def _out_file(directory, name):
    if directory is None:
        return None
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command is None:
        _parser().print_help()
        return constants.EXIT_MANIFEST
    try:
        if args.command == "run":
            run_scenario(RunManifest.load(args.manifest), args.out, args.verbose)
        elif args.command == "measure":
            try:
                params = MixParams(args.kappa, args.gamma_bar, args.alpha)
            except ValueError as e:
                raise ManifestError(str(e))
            out = _out_file(args.out, "measurements.csv")
            _emit(measure(args.field, params, args.padding, out), out)
        elif args.command == "schedule":
            try:
                descriptor = json.loads(args.block)
            except ValueError as e:
                raise ManifestError("Block descriptor is not JSON: %s" % e)
            s = int(args.s) if float(args.s).is_integer() else args.s
            out = _out_file(args.out, "schedule.csv")
            _emit(schedule_command(s, args.p, args.budget, args.stages, descriptor,
                                   args.ell0, out), out)
        else:
            report = run_suite(args.suite, args.verbose)
            print(write_json(None, report, args.suite), end="")
            return constants.EXIT_OK if report["passed"] else constants.EXIT_FAILURE
    except ResolutionError as e:
        print("mixlab: %s" % e, file=sys.stderr)
        return constants.EXIT_RESOLUTION
    except MissingVelocityError as e:
        print("mixlab: %s" % e, file=sys.stderr)
        return constants.EXIT_VELOCITY
    except (ManifestError, ValueError, IOError, OSError) as e:
        print("mixlab: %s" % e, file=sys.stderr)
        return constants.EXIT_MANIFEST
    return constants.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
