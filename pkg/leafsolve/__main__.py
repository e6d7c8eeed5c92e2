import os
import sys

from typing import Sequence

from .commands.manifest import ManifestError
from .commands.parser import get_main_parser
from .expr import ExprError
from .geometry import OutsideDomainError
from .loggers import Report


def write_outputs(report: Report, directory: str, command: str) -> None:
    """
    Writes `<command>.json` and, when per-point records exist,
    `<command>.csv` into `directory`.
    """
    os.makedirs(directory, exist_ok=True)
    report.write(os.path.join(directory, f"{command}.json"), "json")
    if report.steps:
        report.write(os.path.join(directory, f"{command}.csv"), "csv")


def main(argv: Sequence[str] | None = None) -> int:
    parser = get_main_parser()
    arguments = parser.parse_args(argv)

    try:
        report = arguments.func(arguments)
    except ManifestError as e:
        for diagnostic in e.diagnostics:
            print(diagnostic, file=sys.stderr)
        report = Report(arguments.command,
                        diagnostics=[d.to_dict() for d in e.diagnostics])
    except (OSError, ExprError, OutsideDomainError, AssertionError) as e:
        message = str(e.args[0]) if e.args else type(e).__name__
        print(f"{arguments.command}: {message}", file=sys.stderr)
        report = Report(arguments.command,
                        diagnostics=[{
                            "pointer": "",
                            "message": message
                        }])

    if arguments.out is not None:
        write_outputs(report, arguments.out, arguments.command)
    else:
        sys.stdout.write(report.write(None, arguments.format))

    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
