"""Command-line surface.

Subcommands: spectrum, landscape, overlaps, rates, pathsum, dynamics,
sweep.  Every subcommand reads one sectioned config file, runs the matching
pipeline and emits CSV to --out (default stdout).  Exit statuses: 0 on
success, 1 on validation errors, 2 on numerical errors, 3 on capacity
errors.
"""

from __future__ import annotations

import argparse
import sys

from ._version import __version__
from .cluster import bits_to_config, build_hamiltonian, config_to_bits
from .config import RunConfig, parse_config, render_config, with_overrides
from .csvout import (
    emit_eigensystem,
    emit_landscape,
    emit_overlap_decay,
    emit_path_sums,
    emit_rate_report,
    emit_sweep_rows,
    emit_trace,
    write_output,
)
from .dynamics import TrajectoryConfig, default_time_step, evolve_superposition
from .errors import SimulationError, ValidationError
from .perturbation import multiphoton_path_sum, scaling_exponent
from .spectrum import (
    diagonalize,
    dress,
    find_local_minima,
    overlap_decay,
    typical_level_spacing,
)
from .sweep import run_sweep
from .transition import check_bound, lifetime_extension, matrix_element

SUBCOMMANDS = ("spectrum", "landscape", "overlaps", "rates", "pathsum", "dynamics", "sweep")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _load_config(args) -> RunConfig:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {args.config!r}: {exc}") from exc
    cfg = parse_config(text)
    # the seed override is echoed (it shapes the results); the destination is
    # resolved separately so identical runs stay byte-identical wherever written
    cfg = with_overrides(cfg, seed=args.seed)
    destination = args.out if args.out is not None else cfg.output_path
    return cfg, destination


def _anchor_pair(cfg: RunConfig, params):
    """Ground and local-minimum anchors, explicit or from the landscape."""
    if cfg.anchors is not None:
        ground = bits_to_config(cfg.anchors[0])
        lem = bits_to_config(cfg.anchors[1])
        return ground, lem
    landscape = find_local_minima(params)
    if not landscape.local_minima:
        raise ValidationError(
            "landscape has no local minimum; set dynamics.anchors explicitly"
        )
    return landscape.global_config, landscape.local_minima[0].config


def _a_typ(cfg: RunConfig, params, anchor: int) -> float:
    return cfg.a_typ if cfg.a_typ is not None else typical_level_spacing(params, anchor)


def _cmd_spectrum(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    eig = diagonalize(build_hamiltonian(params))
    _say(args, f"spectrum: {params.dim} levels in [{eig.values[0]:.6g}, {eig.values[-1]:.6g}]")
    write_output(emit_eigensystem(eig, render_config(cfg), cfg.seed), destination)


def _cmd_landscape(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    report = find_local_minima(params)
    _say(
        args,
        f"landscape: global {config_to_bits(report.global_config, params.n)} "
        f"(E={report.global_energy:.6g}), {len(report.local_minima)} local "
        f"minimum(s), degenerate={report.degenerate}",
    )
    write_output(
        emit_landscape(report, params.n, render_config(cfg), cfg.seed), destination
    )


def _cmd_overlaps(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    ground, lem = _anchor_pair(cfg, params)
    eig = diagonalize(build_hamiltonian(params))
    decays = [overlap_decay(dress(eig, ground)), overlap_decay(dress(eig, lem))]
    _say(
        args,
        "overlaps: slopes "
        + ", ".join(
            f"{config_to_bits(d.anchor, params.n)}: "
            + (f"{d.slope:.4f}" if d.slope is not None else "n/a")
            for d in decays
        ),
    )
    write_output(
        emit_overlap_decay(decays, params.n, render_config(cfg), cfg.seed), destination
    )


def _cmd_rates(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    coupling = cfg.coupling_spec()
    ground, lem = _anchor_pair(cfg, params)
    eig = diagonalize(build_hamiltonian(params))
    report = matrix_element(dress(eig, ground), dress(eig, lem), coupling)
    a_typ = _a_typ(cfg, params, lem)
    report = check_bound(report, params, coupling, anchor=lem, a_typ=a_typ)
    ratio = max(float(abs(params.tunneling).max()), float(coupling.x_noise.max())) / a_typ
    extension = lifetime_extension(params.n, ratio) if 0 < ratio < 1 else None
    _say(
        args,
        f"rates: element={report.matrix_element:.6e} ratio={report.rate_ratio:.6e} "
        f"bound={report.bound:.6e} margin={report.bound_margin:.3f}"
        + (f" extension={extension:.3f} orders" if extension is not None else ""),
    )
    write_output(emit_rate_report(report, render_config(cfg), cfg.seed), destination)


def _cmd_pathsum(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    coupling = cfg.coupling_spec()
    ground, lem = _anchor_pair(cfg, params)
    results = []
    diff = [i for i in range(params.n) if (ground ^ lem) >> i & 1]
    for d in range(1, len(diff) + 1):
        target = ground
        for i in diff[:d]:
            target ^= 1 << i
        results.append(multiphoton_path_sum(params, coupling.x_noise, ground, target))
    try:
        slope = scaling_exponent([(r.order, r.amplitude) for r in results])
    except SimulationError:
        slope = None
    _say(
        args,
        f"pathsum: {len(results)} orders, slope "
        + (f"{slope:.4f}" if slope is not None else "n/a"),
    )
    write_output(
        emit_path_sums(results, params.n, slope, render_config(cfg), cfg.seed),
        destination,
    )


def _cmd_dynamics(cfg: RunConfig, destination, args) -> None:
    params = cfg.cluster_params()
    coupling = cfg.coupling_spec()
    ground, lem = _anchor_pair(cfg, params)
    eig = diagonalize(build_hamiltonian(params))
    a_typ = _a_typ(cfg, params, lem)
    tcfg = TrajectoryConfig(
        noise=coupling,
        time_step=cfg.time_step if cfg.time_step is not None else default_time_step(a_typ),
        total_time=cfg.total_time,
        trajectory_count=cfg.trajectories,
        seed=cfg.seed,
    )
    trace = evolve_superposition(params, eig, tcfg, ground, lem)
    _say(
        args,
        f"dynamics: {trace.trajectory_count} trajectories, {trace.total_steps} steps, "
        f"fitted_rate={trace.fitted_rate:.6e} "
        f"(quality={trace.fit_quality:.3f}, upper_limit={trace.rate_is_upper_limit})",
    )
    write_output(emit_trace(trace, render_config(cfg), cfg.seed), destination)


def _cmd_sweep(cfg: RunConfig, destination, args) -> None:
    grid = cfg.sweep_grid()
    rows = run_sweep(grid, master_seed=cfg.seed)
    failed = sum(1 for r in rows if r.error)
    _say(args, f"sweep: {len(rows)} grid points, {failed} with per-row errors")
    write_output(emit_sweep_rows(rows, render_config(cfg), cfg.seed), destination)


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "landscape": _cmd_landscape,
    "overlaps": _cmd_overlaps,
    "rates": _cmd_rates,
    "pathsum": _cmd_pathsum,
    "dynamics": _cmd_dynamics,
    "sweep": _cmd_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lemsim",
        description="Pseudo-spin cluster decoherence simulator",
    )
    parser.add_argument("--version", action="version", version=f"lemsim {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="|".join(SUBCOMMANDS))
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the run configuration file")
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg, destination = _load_config(args)
        _HANDLERS[args.command](cfg, destination, args)
    except SimulationError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
