"""Command-line entry point: ``omegaint SUBCOMMAND --input FILE [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import BadConfig, OmegaError, ScenarioError
from .fixtures import FIXTURES, fixture_text
from .runner import (
    load_model,
    run_branches,
    run_counting,
    run_discriminant,
    run_fuzz,
    run_integrality,
    run_verify,
)

EXIT_OK, EXIT_VIOLATION, EXIT_SCENARIO = 0, 2, 3

SUBCOMMANDS = {
    "integrality": run_integrality,
    "discriminant": run_discriminant,
    "branches": run_branches,
    "counting": run_counting,
    "verify-main": lambda m, o: run_verify(m, "main", o),
    "verify-nw": lambda m, o: run_verify(m, "nw", o),
    "verify-quad": lambda m, o: run_verify(m, "quad", o),
    "verify-dosvar": lambda m, o: run_verify(m, "dosvar", o),
    "verify-campana": lambda m, o: run_verify(m, "campana", o),
    "fuzz": run_fuzz,
}


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as a violation
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCENARIO, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="omegaint", description="Exact checks of height inequalities for "
                                "integral curves of plane differential forms.")
    p.add_argument("subcommand", choices=list(SUBCOMMANDS))
    p.add_argument("--input", required=True, metavar="FILE",
                   help="scenario file; bundled names quad.scn and wronskian.scn also work")
    p.add_argument("--seed", type=int, help="fuzz seed (overrides the campaign block)")
    p.add_argument("--trials", type=_non_negative, help="fuzz trial count")
    p.add_argument("--max-degree", dest="max_degree", type=_positive, help="largest random map degree")
    p.add_argument("--order", type=_non_negative, help="series truncation order for branch tests")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    return p


def read_input(name):
    path = Path(name)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    stem = path.name[:-4] if path.name.endswith(".scn") else path.name
    if stem in FIXTURES and path.parent == Path("."):
        return fixture_text(stem)
    raise FileNotFoundError(name)


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = read_input(args.input)
    except (FileNotFoundError, OSError) as e:
        print(f"error: cannot read {args.input}: {e}", file=stderr)
        return EXIT_SCENARIO
    try:
        model = load_model(text)
        result = SUBCOMMANDS[args.subcommand](model, args)
    except ScenarioError as e:
        print(f"{args.input}:{e}" if e.line is not None else f"{args.input}: {e}", file=stderr)
        return EXIT_SCENARIO
    except (BadConfig, OmegaError) as e:
        print(f"{args.input}: {type(e).__name__}: {e}", file=stderr)
        return EXIT_SCENARIO
    body = result.to_csv() if args.format == "csv" else result.to_text()
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        stdout.write(body)
    return result.exit_code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
