"""Command-line interface: ``oamhilbert {synthesize,decompose,angle,sim4f,antenna}``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import fileio
from .antennaarray import (
    DEFAULT_BAND_LIMIT,
    PUBLISHED_INPUT_VECTOR,
    PUBLISHED_OUTPUT_VECTOR,
    AntennaArray,
    phi_sweep,
)
from .exceptions import OAMError
from .fieldgrid import Grid, hilbert_angle
from .hilbertproj import decompose, lg_index_set
from .modes import DEFAULT_WAIST, DEFAULT_WAVELENGTH, LGParams, ModeSpectrum, default_grid, synthesize
from .optics4f import DetectorSpec, default_system, first_order_center, identification_vector, simulate_4f

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _beam(cfg: dict, args) -> LGParams:
    beam = cfg.get("beam", {})
    waist = getattr(args, "waist", None) or beam.get("waist", DEFAULT_WAIST)
    return LGParams(waist, beam.get("wavelength", DEFAULT_WAVELENGTH))


def _grid(cfg: dict, params: LGParams) -> Grid:
    if "grid" in cfg:
        g = cfg["grid"]
        return Grid(g["nx"], g["ny"], g["dx"], g["dy"])
    return default_grid(params)


def _spectrum(cfg: dict, modes: list[int] | None) -> ModeSpectrum:
    if modes:
        amp = 1 / math.sqrt(len(modes))
        return ModeSpectrum.lg({(l, 0): amp for l in modes})
    if cfg.get("modes"):
        return ModeSpectrum.lg({(m["l"], m.get("p", 0)): complex(m.get("re", 1.0), m.get("im", 0.0))
                                for m in cfg["modes"]})
    raise OAMError("no modes given: use --modes or a config with a 'modes' list")


def _config(args) -> dict:
    return fileio.load_config(args.config) if getattr(args, "config", None) else {}


def _write_images(field, prefix: Path) -> None:
    fileio.write_intensity_pgm(field, prefix.with_name(prefix.name + "_intensity.pgm"))
    fileio.write_phase_pgm(field, prefix.with_name(prefix.name + "_phase.pgm"))


def cmd_synthesize(args) -> int:
    cfg = _config(args)
    params = _beam(cfg, args)
    field = synthesize(_spectrum(cfg, args.modes), params, _grid(cfg, params))
    out = Path(args.output)
    fileio.write_field(field, out)
    if not args.no_images:
        _write_images(field, Path(args.images) if args.images else out.with_suffix(""))
    return EXIT_OK


def cmd_decompose(args) -> int:
    field = fileio.read_field(args.field)
    params = LGParams(args.waist, field.wavelength)
    spec = decompose(field, lg_index_set((args.l_min, args.l_max), (0, args.p_max)), params)
    rows = [(idx.l, idx.p, c.real, c.imag, abs(c) ** 2) for idx, c in spec.items()]
    text = fileio.csv_text(["l", "p", "re", "im", "power"], rows)
    if args.output:
        fileio.write_csv(args.output, ["l", "p", "re", "im", "power"], rows)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_angle(args) -> int:
    a, b = fileio.read_field(args.a), fileio.read_field(args.b)
    phi = hilbert_angle(a, b)
    print(f"{phi:.6f}")
    if args.json:
        fileio.write_json(args.json, {"a": str(args.a), "b": str(args.b), "phi_rad": round(phi, 6)})
    return EXIT_OK


def cmd_sim4f(args) -> int:
    cfg = _config(args)
    if args.field:
        field = fileio.read_field(args.field)
    else:
        params = _beam(cfg, args)
        field = synthesize(_spectrum(cfg, args.modes), params, _grid(cfg, params))
    grating = cfg.get("grating", {})
    orders = args.gratings or grating.get("M") or [3, 6, 9, 12]
    if isinstance(orders, int):
        orders = [orders]
    sys4f = default_system(
        field.grid, 0, field.wavelength,
        focal_length=args.focal_length or grating.get("focal_length"),
        carrier_period=args.period or grating.get("period"),
    )
    radius = args.detector_radius or cfg.get("detector", {}).get("radius")
    det = DetectorSpec(first_order_center(sys4f), radius) if radius else None

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not args.no_images:
        _write_images(field, out_dir / "input")
    for M in orders:
        out = simulate_4f(field, sys4f.with_order(M))
        fileio.write_field(out, out_dir / f"output_M{M}.oamf")
        if not args.no_images:
            _write_images(out, out_dir / f"output_M{M}")
    result = identification_vector(field, orders, sys4f, det)
    header = ["M", "power", "normalized"]
    rows = [(M, float(p), float(n)) for M, p, n in zip(result.orders, result.raw, result.normalized)]
    fileio.write_csv(out_dir / "identification.csv", header, rows)
    sys.stdout.write(fileio.csv_text(header, rows))
    return EXIT_OK


def cmd_antenna(args) -> int:
    cfg = _config(args).get("antenna", {})
    if args.modes:
        modes = ModeSpectrum.azimuthal({l: 1.0 for l in args.modes})
    elif cfg.get("input_modes"):
        modes = ModeSpectrum.azimuthal({m["l"]: complex(m.get("re", 1.0), m.get("im", 0.0))
                                        for m in cfg["input_modes"]})
    else:
        modes = ModeSpectrum.azimuthal({9: 1.0, 12: 1.0})
    Ns = args.Ns or cfg.get("Ns") or [6, 9, 12, 50]
    sigma = args.sigma if args.sigma is not None else cfg.get("sigma")
    band = args.band_limit or cfg.get("band_limit") or DEFAULT_BAND_LIMIT
    rows = phi_sweep(modes, Ns, AntennaArray(1, sigma, band))

    header = ["N", "phi_rad", "phi_ref_rad"]
    table = [(r.N, float(r.phi), "" if r.published_phi is None else float(r.published_phi)) for r in rows]
    if args.output:
        fileio.write_csv(args.output, header, table)
    sys.stdout.write(fileio.csv_text(header, table))
    if args.spectra:
        spec_rows = [(r.N, idx.l, c.real, c.imag, abs(c) ** 2)
                     for r in rows for idx, c in r.spectrum.items()]
        fileio.write_csv(args.spectra, ["N", "l", "re", "im", "power"], spec_rows)
    if args.report:
        fileio.write_json(args.report, {
            "input_modes": {str(idx.l): [c.real, c.imag] for idx, c in modes.items()},
            "sigma": sigma,
            "band_limit": band,
            "rows": [{"N": r.N, "phi_rad": round(r.phi, 9), "phi_ref_rad": r.published_phi} for r in rows],
            "reference_input_vector": list(PUBLISHED_INPUT_VECTOR),
            "reference_output_vector": list(PUBLISHED_OUTPUT_VECTOR),
        })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oamhilbert", description="OAM beam synthesis, projection and measurement simulation")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("synthesize", help="build a superposed LG beam and write it as a field file")
    p.add_argument("--config")
    p.add_argument("--modes", type=int_list, help="azimuthal orders, equal amplitude, p=0 (e.g. +3,+6)")
    p.add_argument("--waist", type=float)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--images", help="path prefix for intensity/phase PGMs (default: output stem)")
    p.add_argument("--no-images", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("decompose", help="project a field file onto LG modes")
    p.add_argument("field")
    p.add_argument("--l-min", type=int, default=-8)
    p.add_argument("--l-max", type=int, default=8)
    p.add_argument("--p-max", type=int, default=4)
    p.add_argument("--waist", type=float, default=DEFAULT_WAIST)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("angle", help="Hilbert angle between two field files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json")
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser("sim4f", help="simulate fork-grating identification")
    p.add_argument("field", nargs="?")
    p.add_argument("--config")
    p.add_argument("--modes", type=int_list)
    p.add_argument("--waist", type=float)
    p.add_argument("--gratings", type=int_list)
    p.add_argument("--focal-length", type=float)
    p.add_argument("--period", type=float)
    p.add_argument("--detector-radius", type=float)
    p.add_argument("--out-dir", default="sim4f_out")
    p.add_argument("--no-images", action="store_true")
    p.set_defaults(func=cmd_sim4f)

    p = sub.add_parser("antenna", help="Hilbert angle sweep over circular-array element counts")
    p.add_argument("--config")
    p.add_argument("--modes", type=int_list)
    p.add_argument("--Ns", type=int_list)
    p.add_argument("--sigma", type=float, help="element width in radians (default pi/N)")
    p.add_argument("--band-limit", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--spectra")
    p.add_argument("--report")
    p.set_defaults(func=cmd_antenna)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (OAMError, OSError) as exc:
        print(f"oamhilbert {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
