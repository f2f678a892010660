"""Command-line interface.

    spectral-shadow SUBCOMMAND SPEC.json [--out DIR] [--lambda-grid A:B:STEP]
                    [--shell-mode atom|bin] [--delta X] [--s X] [--dims 16,32,64] [--n N]

Exit status: 0 on success, 1 on validation errors, 2 on numerical failures.
"""

import argparse
import os
import sys

from .config import load_spec, parse_lambda_grid
from .errors import NumericalError, StageError, ValidationError
from .io import write_csv, write_json
from .ladder import Ladder, ladder_run
from . import pipeline

SUBCOMMANDS = ("spectrum", "measure", "family", "disintegrate", "eigenfunctional",
               "reconstruct", "ladder")

HEADERS = {
    "eigenvalues.csv": ("index", "lambda", "residual"),
    "measure.csv": ("atom", "lambda", "weight"),
    "staircase.csv": ("lambda", "sigma"),
    "family.csv": ("lambda", "sigma"),
    "disintegration.csv": ("shell", "index", "lambdaRep", "sigmaMass", "conditionalWeight"),
    "eigenfunctionals.csv": ("eigenvalueShell", "coordinateIndex", "re", "im", "dualNorm"),
    "gelfand_summary.csv": ("lambdaRep", "sigmaMass", "residual", "reconstructGap"),
    "reconstruct.csv": ("lambda", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap"),
    "ladder.csv": ("observable", "n", "value", "diff", "order"),
}

OUTPUTS = {
    "spectrum": (("eigenvalues.csv", pipeline.spectrum_rows),),
    "measure": (("measure.csv", pipeline.measure_rows), ("staircase.csv", pipeline.staircase_rows)),
    "family": (("family.csv", pipeline.family_rows),),
    "disintegrate": (("disintegration.csv", pipeline.disintegration_rows),),
    "eigenfunctional": (("eigenfunctionals.csv", pipeline.eigenfunctional_rows),
                        ("gelfand_summary.csv", pipeline.summary_rows)),
    "reconstruct": (("reconstruct.csv", pipeline.reconstruct_rows),),
}


def _dims(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects comma-separated integers, got {text!r}")


def _grid(text):
    try:
        return parse_lambda_grid(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser():
    parser = argparse.ArgumentParser(prog="spectral-shadow", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("spec", help="operator spec JSON file")
    parser.add_argument("--out", help="output directory (default: pipeline.output_dir)")
    parser.add_argument("--lambda-grid", type=_grid, help="probe points A:B:STEP or a,b,c")
    parser.add_argument("--shell-mode", choices=("atom", "bin"))
    parser.add_argument("--delta", type=float, help="bin width for --shell-mode bin")
    parser.add_argument("--s", type=float, help="rigging exponent")
    parser.add_argument("--dims", type=_dims, help="ladder dimensions, e.g. 16,32,64")
    parser.add_argument("--n", type=int, help="dimension for single-rung subcommands")
    return parser


def run(subcommand, spec_path, out=None, lambda_grid=None, shell_mode=None, delta=None,
        s=None, dims=None, n=None):
    """Run one subcommand and return the list of files written."""
    spec, config = load_spec(spec_path)
    config = config.with_overrides(lambda_grid=lambda_grid, shell_mode=shell_mode,
                                   delta=delta, s=s, dims=dims, output_dir=out)
    outdir = config.output_dir
    written = []
    if subcommand == "ladder":
        report = ladder_run(spec, Ladder(config.dims), config)
        written.append(write_csv(os.path.join(outdir, "ladder.csv"), HEADERS["ladder.csv"],
                                 report.as_rows()))
        written.append(write_json(os.path.join(outdir, "ladder_meta.json"), report.metadata))
        return written
    rung = pipeline.build_rung(spec, config, n)
    for fname, rows in OUTPUTS[subcommand]:
        written.append(write_csv(os.path.join(outdir, fname), HEADERS[fname], rows(rung)))
    return written


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    if isinstance(cause, ValidationError):
        return 1
    if isinstance(cause, (NumericalError, ArithmeticError)):
        return 2
    return 2 if isinstance(exc, StageError) else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        run(args.subcommand, args.spec, out=args.out, lambda_grid=args.lambda_grid,
            shell_mode=args.shell_mode, delta=args.delta, s=args.s, dims=args.dims, n=args.n)
    except (ValidationError, NumericalError, StageError, OSError) as exc:
        print(f"spectral-shadow: error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
