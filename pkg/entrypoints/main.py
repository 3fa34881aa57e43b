"""
Main entry point for the subgroup growth toolkit.

    python entrypoints/main.py count --group torus:2,3 --max-n 10
    python entrypoints/main.py stats --group free:2,3 --n 300 --samples 100000 --classes "x1*x2"
    python entrypoints/main.py verify
"""
import sys
import os
from typing import List, Optional

# Add parent directory to path to allow imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pydantic import ValidationError
from rich.markup import escape

from config import Config
from core.pipeline.experiment_pipeline import get_pipeline
from core.pipeline.run_config import parse_command_line
from core.utils.console import console
from core.utils.display_helper import DisplayHelper
from core.utils.report_writer import ReportWriter


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and write its report.

    Returns:
        Process exit code: 0 ok, 1 usage, 2 computational cap, 3 verification failure
    """
    try:
        Config.validate()
    except ValueError as e:
        console.print(f"❌ Configuration error: {escape(str(e))}", style="red")
        return 1

    try:
        config, quiet = parse_command_line(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:
        # argparse already printed its usage message
        return 0 if e.code == 0 else 1
    except (ValidationError, ValueError, OSError) as e:
        console.print(f"❌ Invalid arguments: {escape(str(e))}", style="red")
        return 1

    pipeline = get_pipeline(verbose=not quiet)
    pipeline.verbose = not quiet
    result = pipeline.run(config)

    out = config.out or Config.DEFAULT_OUTPUT
    if result['report'] is not None or result['lines'] is not None:
        ReportWriter.write_result(result, config.format, out)
    if not quiet or not result['success']:
        DisplayHelper.display_result(result)
    return result['exit_code']


if __name__ == "__main__":
    sys.exit(main())
