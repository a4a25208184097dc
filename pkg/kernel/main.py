"""
ellsurf/kernel/main.py

The Kernel Entry Point.
-----------------------
Boots the command table, loads the family files, runs one command and
prints its report.

Architecture:
1. Boot: parse flags, configure logging, register commands.
2. Load: family file(s) -> FamilySpec (exact parse, sections checked).
3. Execute: command -> report sections, human-readable lines to the log buffer.
4. Emit: log buffer to stdout, JSON report to --json PATH.

    ellsurf <command> <family-file> [family-file] [--tol X] [--search-bound N] [--json PATH]
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

# Setup Paths
current_dir = os.path.dirname(os.path.abspath(__file__))
root_dir = os.path.dirname(current_dir)
if root_dir not in sys.path:
    sys.path.append(root_dir)

from algebra.exactcore import EllSurfError
from apps.analyze import Analyze
from apps.compare import Compare
from apps.idr import IDR
from apps.manin import Manin
from apps.monodromy import Monodromy
from apps.picard_fuchs import PicardFuchs
from cohomology.idrcohomology import DEFAULT_SEARCH_BOUND, SearchExhausted
from kernel.family_parser import load_family
from kernel.report import SCHEMA, Report, encode
from ode.monodromy import DEFAULT_TOL, StepUnderflow, ToleranceNotMet

logger = logging.getLogger(__name__)

# Configuration
ACCEPT_MARGIN = 1e-6
EXIT_OK = 0
EXIT_PANIC = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_SEARCH = 4
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

__all__ = ["SCHEMA", "EllSurfKernel", "build_parser", "main"]


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellsurf", description="Elliptic surface analysis")
    parser.add_argument("command", choices=sorted(EllSurfKernel.COMMANDS))
    parser.add_argument("families", nargs="+", metavar="family-file")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="continuation tolerance")
    parser.add_argument("--margin", type=float, default=ACCEPT_MARGIN, help="acceptance margin")
    parser.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND,
                        help="maximal total pole degree in the Hodge search")
    parser.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    parser.add_argument("--base-point", type=_complex, default=None,
                        help="base point of the monodromy loops, e.g. 0.3+0.1i")
    parser.add_argument("--allow-isotrivial", action="store_true",
                        help="admit constant-j families with singular fibres (analyze, compare)")
    parser.add_argument("--verbose", "-v", action="count", default=0)
    return parser


class EllSurfKernel:
    COMMANDS = {
        "analyze": Analyze,
        "picard-fuchs": PicardFuchs,
        "monodromy": Monodromy,
        "idr": IDR,
        "manin": Manin,
        "compare": Compare,
    }

    def __init__(self, flags: argparse.Namespace):
        self.flags = flags
        self.log_lines: List[str] = []
        self.apps = {name: cls(self) for name, cls in self.COMMANDS.items()}
        self.report: Optional[Report] = None

    def log(self, message: str):
        """Adds report lines to the buffer."""
        for line in message.split("\n"):
            self.log_lines.append(line)

    def execute(self, command: str, paths: List[str]) -> int:
        app = self.apps[command]
        if len(paths) != app.families:
            self.log(f"error: {command} takes {app.families} family file(s), got {len(paths)}")
            return EXIT_INPUT
        try:
            specs = [load_family(p) for p in paths]
            sections = app.run(specs)
            self.report = Report(command, "+".join(s.name for s in specs), specs[0].variable, sections)
            if self.flags.json:
                with open(self.flags.json, "w", encoding="utf-8") as fh:
                    fh.write(encode(self.report))
            return EXIT_OK
        except SearchExhausted as e:
            self.log(f"error: {e}")
            return EXIT_SEARCH
        except (StepUnderflow, ToleranceNotMet) as e:
            self.log(f"error: {e}")
            return EXIT_NUMERIC
        except (EllSurfError, OSError) as e:
            self.log(f"error: {e}")
            return EXIT_INPUT
        except Exception as e:
            logger.exception("[KERNEL] unhandled failure")
            self.log(f"Panic: {e.__class__.__name__}: {e}")
            return EXIT_PANIC

    def flush(self, stream=None):
        stream = stream or sys.stdout
        for line in self.log_lines:
            print(line, file=stream)
        self.log_lines.clear()


def main(argv: Optional[List[str]] = None) -> int:
    flags = build_parser().parse_args(argv)
    level = logging.WARNING if flags.verbose == 0 else logging.INFO if flags.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)
    kernel = EllSurfKernel(flags)
    code = kernel.execute(flags.command, flags.families)
    kernel.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
