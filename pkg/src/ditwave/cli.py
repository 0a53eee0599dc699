"""Command-line front end: ``ditwave {exact,replicate,pattern,caustics,gpe,compare}``.

Artifacts are CSV (``#`` metadata lines, then a ``t,x0,x1,...`` header row
and one row of intensities per time, floats in shortest round-trip form)
and optional 16-bit PGM heatmaps with one row per time.

Exit status: 0 on success, 2 for invalid parameters, 3 for numerical
failures raised by the solvers.
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .caustics import fit_parabola, fit_ray, ray_spacing_smoothing, ridge_extract
from .domain import (
    InitialCondition, Profile, PulseSpec, SpaceGrid, SpaceTimeIntensity, WaveField, assemble,
)
from .errors import AccuracyError, DitwaveError, NumericalFailure
from .exact import PropagatorParams, exact_square_packet, harmonic_from_free, propagator_quadrature
from .pde import SolverConfig, periodic_grid, prepare_initial, split_step_evolve
from .replication import (
    SL2Coeffs, evaluate, evolved_block, free_terms, harmonic_block, sl2_terms, squeeze_terms,
)

log = logging.getLogger("ditwave")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class UsageError(ValueError):
    pass


# -- artifact io ----------------------------------------------------------


def _fmt(v):
    return repr(float(v))


def write_pattern_csv(path, pattern, meta=None):
    """Write a SpaceTimeIntensity; ``meta`` items become ``# key: value`` lines."""
    g = pattern.grid
    lines = [f"# ditwave {__version__}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(f"# grid: {_fmt(g.x_min)} {_fmt(g.x_max)} {g.n_points} {int(g.periodic)}")
    lines.append(",".join(["t"] + [_fmt(v) for v in g.x]))
    for t, row in zip(pattern.times, pattern.values):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in row]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_pattern_csv(path):
    """Inverse of ``write_pattern_csv``: returns ``(pattern, meta)``."""
    meta, grid, rows = {}, None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                if key == "grid":
                    lo, hi, n, periodic = value.split()
                    grid = SpaceGrid(float(lo), float(hi), int(n), bool(int(periodic)))
                elif value:
                    meta[key.strip()] = value.strip()
            elif line.startswith("t,"):
                continue
            elif line:
                rows.append([float(v) for v in line.split(",")])
    if grid is None:
        raise UsageError(f"{path}: missing '# grid:' line")
    data = np.array(rows)
    return SpaceTimeIntensity(data[:, 0], grid, data[:, 1:]), meta


def write_field_csv(path, field, t, meta=None):
    """One wavefunction snapshot: columns ``x, re, im, intensity``."""
    lines = [f"# ditwave {__version__}", f"# t: {_fmt(t)}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append("x,re,im,intensity")
    for x, v in zip(field.x, field.samples):
        lines.append(",".join(_fmt(a) for a in (x, v.real, v.imag, abs(v) ** 2)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_pgm(path, pattern):
    """16-bit binary PGM, big-endian, rows = times, values mapped linearly onto 0..65535."""
    v = pattern.values
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo if hi > lo else 1.0
    img = np.round((v - lo) / span * 65535).astype(">u2")
    header = f"P5\n# min {lo!r} max {hi!r}\n{v.shape[1]} {v.shape[0]}\n65535\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path):
    """Returns ``(image as uint16 array, lo, hi)``."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, comments, pos = [], [], 0
    while len(tokens) < 4:
        end = data.index(b"\n", pos)
        line = data[pos:end].decode("ascii")
        pos = end + 1
        if line.startswith("#"):
            comments.append(line)
        else:
            tokens.extend(line.split())
    if tokens[0] != "P5":
        raise UsageError(f"{path}: not a binary PGM")
    width, height = int(tokens[1]), int(tokens[2])
    img = np.frombuffer(data[pos:], dtype=">u2").reshape(height, width)
    lo = hi = None
    for c in comments:
        parts = c[1:].split()
        if parts[:1] == ["min"]:
            lo, hi = float(parts[1]), float(parts[3])
    return img.astype(np.uint16), lo, hi


# -- experiment pieces ----------------------------------------------------


def _threads():
    raw = os.environ.get("DITWAVE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"DITWAVE_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError("DITWAVE_THREADS must be >= 1")
    return n


def _times(args):
    if not (0 < args.tmin <= args.tmax):
        raise UsageError("need 0 < tmin <= tmax")
    if args.ntimes < 1:
        raise UsageError("ntimes must be >= 1")
    if args.ntimes == 1:
        return np.array([args.tmin])
    if args.spacing == "log":
        return np.geomspace(args.tmin, args.tmax, args.ntimes)
    return np.linspace(args.tmin, args.tmax, args.ntimes)


def _grid(args):
    return SpaceGrid(args.xmin, args.xmax, args.npoints)


def _pulse(args):
    return PulseSpec(args.center, args.width, Profile(args.profile), args.eps)


def _block_profile(name):
    return PulseSpec(0.0, 1.0, Profile(name))


def _exact_solution(args):
    """Callable ``psi(x, t)``: closed form for the ideal unit packet, quadrature otherwise."""
    pulse = _pulse(args)
    omega = getattr(args, "omega", 0.0) or 0.0
    closed = pulse.profile is Profile.SQUARE and pulse.ideal and pulse.width == 1.0
    if closed:
        c = pulse.center
        if omega:
            return lambda x, t: harmonic_from_free(np.asarray(x) - c, t, omega)
        return lambda x, t: exact_square_packet(np.asarray(x) - c, t)
    kind = "harmonic" if omega else "free"
    return lambda x, t: propagator_quadrature(pulse, PropagatorParams(kind, t, omega), x)


def _expansion(args, t):
    if args.map == "free":
        return free_terms(t, args.nmax)
    if args.map == "sl2":
        return sl2_terms(SL2Coeffs.harmonic(args.omega, t), args.nmax)
    return squeeze_terms(t, args.nmax)


def _block(args, t):
    if args.block != "evolved":
        return _block_profile(args.block)
    if args.map == "free":
        return evolved_block(t)
    if args.map == "sl2":
        return harmonic_block(args.omega, t)
    raise UsageError("the squeeze map has no evolved block; use a profile block")


def _replicated(args):
    if not (args.center == 0.0 and args.width == 1.0 and args.eps == 0.0):
        raise UsageError("replicate works on the ideal unit pulse at the origin")
    if args.nmax < 0:
        raise UsageError("nmax must be >= 0")

    def psi(x, t):
        return _expansion(args, t)(x, block=_block(args, t), fejer=args.fejer)
    return psi


def _pattern(psi, times, grid):
    x = grid.x
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda t: np.abs(psi(x, t)) ** 2, times))
    return SpaceTimeIntensity(times, grid, np.array(rows))


def _gpe_run(args, t_final, n_frames=1):
    pulse = _pulse(args)
    lo, hi = pulse.edges
    extent = (min(args.xmin, lo), max(args.xmax, hi))
    grid = periodic_grid(extent, args.dx, args.padding)
    field = prepare_initial(pulse, grid)
    dt_max = 2 * np.pi / (np.pi / grid.dx) ** 2
    dt = args.dt if args.dt else 0.95 * dt_max
    n_steps = max(1, int(np.ceil(t_final / dt)))
    cfg = SolverConfig(t_final / n_steps, n_steps, g=args.g, omega=args.omega or None,
                       padding=args.padding)
    record = max(1, n_steps // max(n_frames - 1, 1)) if n_frames > 1 else None
    result = split_step_evolve(field, cfg, record_every=record)
    return grid, cfg, result


def _crop(pattern, lo, hi):
    x = pattern.grid.x
    keep = np.nonzero((x >= lo - 1e-12) & (x <= hi + 1e-12))[0]
    i0, i1 = keep[0], keep[-1]
    grid = SpaceGrid(float(x[i0]), float(x[i1]), int(i1 - i0 + 1))
    return SpaceTimeIntensity(pattern.times, grid, pattern.values[:, i0:i1 + 1])


def _emit(args, pattern, meta):
    written = []
    if args.format in ("csv", "both"):
        write_pattern_csv(args.out + ".csv", pattern, meta)
        written.append(args.out + ".csv")
    if args.format in ("pgm", "both"):
        write_pgm(args.out + ".pgm", pattern)
        written.append(args.out + ".pgm")
    for path in written:
        print(path)


def _meta(args):
    skip = {"func", "out", "format", "verbose"}
    return {"command": args.command,
            "spec": " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip)}


# -- commands -------------------------------------------------------------


def cmd_exact(args):
    psi = _exact_solution(args)
    grid = _grid(args)
    field = WaveField(grid, psi(grid.x, args.t))
    write_field_csv(args.out + ".csv", field, args.t, _meta(args))
    print(args.out + ".csv")


def cmd_replicate(args):
    psi = _replicated(args)
    grid = _grid(args)
    field = WaveField(grid, psi(grid.x, args.t))
    write_field_csv(args.out + ".csv", field, args.t, _meta(args))
    print(args.out + ".csv")


def cmd_pattern(args):
    psi = _exact_solution(args) if args.method == "exact" else _replicated(args)
    _emit(args, _pattern(psi, _times(args), _grid(args)), _meta(args))


def cmd_caustics(args):
    if not (args.center == 0.0 and args.width == 1.0 and args.eps == 0.0):
        raise UsageError("caustics analyses the ideal unit pulse at the origin")
    pattern = _pattern(_exact_solution(args), _times(args), _grid(args))
    smoothing = None if args.raw else ray_spacing_smoothing
    ridges = ridge_extract(pattern, (args.wmin, args.wmax), smoothing=smoothing)
    edge = args.edge
    side = 1 if args.wmin >= edge else -1
    level, r2 = fit_parabola(ridges, edge, side)
    _, ss_ray, ss_par = fit_ray(ridges, edge, side)
    track = ridges.nearest_to(edge)
    lines = [f"# ditwave {__version__}", f"# level: {level!r}", f"# r2: {r2!r}",
             f"# ray_over_parabola: {ss_ray / ss_par!r}", "t,x"]
    lines += [f"{_fmt(t)},{_fmt(x)}" for t, x in zip(track.times, track.positions)]
    with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"level={level:.6g} r2={r2:.6f} ray/parabola={ss_ray / ss_par:.3g}")
    print(args.out + ".csv")


def cmd_gpe(args):
    if not args.eps > 0:
        raise UsageError("gpe needs smoothed edges: pass --eps > 0")
    _, _, (field, trace) = _gpe_run(args, args.tmax, max(args.ntimes, 2))
    _emit(args, _crop(trace, args.xmin, args.xmax), _meta(args))


def _method_field(name, args, x, grid_for_gpe):
    if name == "exact":
        return _exact_solution(args)(x, args.t)
    if name == "quadrature":
        kind = "harmonic" if args.omega else "free"
        return propagator_quadrature(_pulse(args), PropagatorParams(kind, args.t, args.omega), x)
    if name == "replicate":
        return _replicated(args)(x, args.t)
    _, _, field = grid_for_gpe
    return field.samples


def cmd_compare(args):
    methods = (args.a, args.b)
    gpe = None
    if "gpe" in methods:
        if not args.eps > 0:
            raise UsageError("gpe comparisons need smoothed edges: pass --eps > 0")
        gpe = _gpe_run(args, args.t)
        grid = gpe[0]
    else:
        grid = _grid(args)
    x = grid.x
    fa = _method_field(args.a, args, x, gpe)
    fb = _method_field(args.b, args, x, gpe)
    diff = np.abs(fa - fb)
    if args.exclude_edges:
        for pulse in (_pulse(args),):
            for e in pulse.edges:
                diff[np.abs(x - e) <= grid.dx * (1 + 1e-9)] = 0.0
    sup = float(diff.max())
    l2 = float(np.sqrt(np.sum(diff ** 2) * grid.dx))
    header = "method_a,method_b,x_min,x_max,n_points,t,sup_norm,l2_norm"
    row = ",".join([args.a, args.b, _fmt(grid.x_min), _fmt(grid.x_max), str(grid.n_points),
                    _fmt(args.t), _fmt(sup), _fmt(l2)])
    with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# ditwave {__version__}\n# spec: {_meta(args)['spec']}\n{header}\n{row}\n")
    print(header)
    print(row)


# -- parser ---------------------------------------------------------------


def _add_grid(p, xmin=-1.5, xmax=1.5, n=1501):
    g = p.add_argument_group("grid")
    g.add_argument("--xmin", type=float, default=xmin)
    g.add_argument("--xmax", type=float, default=xmax)
    g.add_argument("--npoints", type=int, default=n)


def _add_pulse(p, eps=0.0):
    g = p.add_argument_group("initial pulse")
    g.add_argument("--center", type=float, default=0.0)
    g.add_argument("--width", type=float, default=1.0)
    g.add_argument("--profile", choices=[p.value for p in Profile], default="square")
    g.add_argument("--eps", type=float, default=eps, help="edge smoothing (tanh width)")


def _add_times(p, tmin=1e-3, tmax=0.05, n=50):
    g = p.add_argument_group("time sampling")
    g.add_argument("--tmin", type=float, default=tmin)
    g.add_argument("--tmax", type=float, default=tmax)
    g.add_argument("--ntimes", type=int, default=n)
    g.add_argument("--spacing", choices=["log", "linear"], default="log")


def _add_series(p):
    g = p.add_argument_group("replication series")
    g.add_argument("--map", choices=["free", "sl2", "squeeze"], default="free")
    g.add_argument("--nmax", type=int, default=30)
    g.add_argument("--block", choices=["square", "gaussian", "triangular", "evolved"],
                   default="square", help="reference profile; 'evolved' gives the exact identity")
    g.add_argument("--fejer", action="store_true", help="Fejer-weight the series")


def _add_solver(p):
    g = p.add_argument_group("split-step solver")
    g.add_argument("--g", type=float, default=0.0, help="Gross-Pitaevskii coupling")
    g.add_argument("--dt", type=float, default=None, help="default: 0.95 of the stability limit")
    g.add_argument("--dx", type=float, default=0.005)
    g.add_argument("--padding", type=float, default=4.0)


def _add_output(p, default, formats=True):
    p.add_argument("--out", default=default, help="output path prefix")
    if formats:
        p.add_argument("--format", choices=["csv", "pgm", "both"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="ditwave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ditwave {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="closed-form (or quadrature) wave at one time")
    _add_grid(p), _add_pulse(p), _add_output(p, "exact", formats=False)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--omega", type=float, default=0.0)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("replicate", help="truncated replication series at one time")
    _add_grid(p), _add_pulse(p), _add_series(p), _add_output(p, "replicate", formats=False)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("pattern", help="space-time intensity pattern")
    _add_grid(p), _add_pulse(p), _add_times(p), _add_series(p), _add_output(p, "pattern")
    p.add_argument("--method", choices=["exact", "replicate"], default="replicate")
    p.add_argument("--omega", type=float, default=0.0)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("caustics", help="ridge extraction and caustic fit")
    _add_grid(p, n=3001), _add_pulse(p), _add_times(p, 2e-3, 5e-2, 40)
    _add_output(p, "caustics", formats=False)
    p.add_argument("--wmin", type=float, default=0.0)
    p.add_argument("--wmax", type=float, default=0.5)
    p.add_argument("--edge", type=float, default=0.5)
    p.add_argument("--raw", action="store_true", help="skip the ray-spacing coarse-graining")
    p.set_defaults(func=cmd_caustics, omega=0.0)

    p = sub.add_parser("gpe", help="split-step Gross-Pitaevskii run")
    _add_grid(p), _add_pulse(p, eps=0.02), _add_times(p, 0.0, 0.05, 51), _add_solver(p)
    _add_output(p, "gpe")
    p.add_argument("--omega", type=float, default=0.0)
    p.set_defaults(func=cmd_gpe)

    p = sub.add_parser("compare", help="error norms between two methods")
    _add_grid(p, -1.0, 1.0, 2001), _add_pulse(p), _add_series(p), _add_solver(p)
    _add_output(p, "compare", formats=False)
    methods = ["exact", "quadrature", "replicate", "gpe"]
    p.add_argument("--a", choices=methods, default="exact")
    p.add_argument("--b", choices=methods, default="replicate")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--exclude-edges", action="store_true",
                   help="drop lattice points within one dx of a pulse edge")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "gpe" and args.tmin == 0.0:
        args.tmin = args.tmax  # the trace always starts at t = 0
    try:
        args.func(args)
    except (NumericalFailure, AccuracyError) as exc:
        print(f"ditwave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, DitwaveError, ValueError) as exc:
        print(f"ditwave: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
