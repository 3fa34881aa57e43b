"""
Display helper for rendering pipeline results on the terminal.
Handles both success and failure cases; everything goes to stderr.
"""
from typing import Any, Dict

from rich.markup import escape
from rich.table import Table

from core.utils.console import console


class DisplayHelper:
    """Formats pipeline results for console display."""

    # Map stages to user-friendly names
    STAGE_NAMES = {
        'validation': 'Input Validation',
        'computation': 'Exact Computation',
        'sampling': 'Sampling',
        'verification': 'Verification',
    }

    @staticmethod
    def display_result(result: Dict[str, Any]) -> None:
        """
        Display the pipeline result in a user-friendly format.

        Args:
            result: Pipeline result dictionary
        """
        console.rule()
        if result['success']:
            DisplayHelper._display_success(result)
        else:
            DisplayHelper._display_failure(result)
        console.rule()

    @staticmethod
    def _display_success(result: Dict[str, Any]) -> None:
        command = result['command']
        report = result['report'] or {}
        console.print(f"✨ {command} finished", style="bold green")
        if command == "verify":
            DisplayHelper._display_verify(report)
        elif command == "betti":
            DisplayHelper._display_mapping("b_1 summary", report.get('summary', {}))
        elif command == "stats":
            DisplayHelper._display_stats(report)
        elif result.get('frame') is not None:
            frame = result['frame']
            console.print(f"📊 {len(frame)} rows, columns: {', '.join(map(str, frame.columns))}")
        elif result.get('lines') is not None:
            console.print(f"📊 {len(result['lines'])} samples written")

    @staticmethod
    def _display_stats(report: Dict[str, Any]) -> None:
        title = f"{report.get('group')} at n={report.get('n')} ({report.get('mode')}, {report.get('model')} model)"
        table = Table(title=title)
        for column in ("class", "law", "tv", "ks", "Z/n density", "E[Z] exact"):
            table.add_column(column)
        for entry in report.get('classes', []):
            table.add_row(
                entry['word'],
                entry['limit_law']['description'],
                _fmt(entry.get('tv')),
                _fmt(entry.get('ks')),
                _fmt(entry.get('irs_density')),
                _fmt(entry.get('exact_mean_float')),
            )
        console.print(table)

    @staticmethod
    def _display_verify(report: Dict[str, Any]) -> None:
        table = Table(title="Verification")
        table.add_column("check")
        table.add_column("result")
        for check in report.get('cross_checks', []):
            table.add_row(f"oracle {check['spec']} n<={check['n_max']}", _mark(check['passed']))
        for check in report.get('sampler_tv', []):
            table.add_row(f"sampler {check['spec']} {check['mode']} TV={check['tv']:.4f}", _mark(check['pass']))
        sweep = report.get('tau_sweep')
        if sweep:
            table.add_row(f"τ bound ({sweep['checked']} cases)", _mark(sweep['pass']))
        for trip in report.get('round_trips', []):
            table.add_row(trip['name'], _mark(trip['pass']))
        console.print(table)

    @staticmethod
    def _display_mapping(title: str, values: Dict[str, Any]) -> None:
        table = Table(title=title)
        table.add_column("field")
        table.add_column("value")
        for key, value in values.items():
            table.add_row(str(key), _fmt(value))
        console.print(table)

    @staticmethod
    def _display_failure(result: Dict[str, Any]) -> None:
        stage = result.get('stage') or 'unknown'
        stage_display = DisplayHelper.STAGE_NAMES.get(stage, stage.title())
        console.print("❌ RUN FAILED", style="bold red")
        console.print(f"Issue occurred at: {stage_display}")
        console.print(f"\nDetails: {escape(str(result['error']))}")
        if result.get('report') and result['command'] == "verify":
            DisplayHelper._display_verify(result['report'])


def _mark(passed: bool) -> str:
    return "✅" if passed else "❌"


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
