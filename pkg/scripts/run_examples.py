"""Run every CLI subcommand on the shipped example specs.

Outputs go to OUT/<example>/ (default ``out``).
"""

import argparse
import sys
from pathlib import Path

from spectral_shadow.cli import SUBCOMMANDS, main as cli_main

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="out")
    p.add_argument("--only", choices=SUBCOMMANDS, help="run a single subcommand")
    args = p.parse_args()
    status = 0
    for spec in sorted(EXAMPLES.glob("*.json")):
        target = Path(args.out) / spec.stem
        for sub in [args.only] if args.only else SUBCOMMANDS:
            code = cli_main([sub, str(spec), "--out", str(target)])
            print(f"{spec.stem:16} {sub:16} exit {code}")
            status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
