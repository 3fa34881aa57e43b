"""
Report writer: JSON reports, CSV tables and JSON-lines sample dumps.

Everything except the `metadata` block is a pure function of the run config,
so reruns with the same seed produce byte-identical files.
"""
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import numpy as np
import pandas as pd
from mpmath import mpf


class ReportWriter:
    """Serializes pipeline results to disk or stdout."""

    @staticmethod
    def to_jsonable(value: Any) -> Any:
        """
        Convert a report value into plain JSON types.

        Fractions become 'p/q' strings, mpmath and numpy floats become floats,
        non-finite floats become null.
        """
        if isinstance(value, dict):
            return {str(k): ReportWriter.to_jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportWriter.to_jsonable(v) for v in value]
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, (float, np.floating, mpf)):
            value = float(value)
            return value if math.isfinite(value) else None
        return value

    @staticmethod
    def dumps(report: Dict[str, Any], metadata: bool = True) -> str:
        body = ReportWriter.to_jsonable(report)
        if metadata:
            body["metadata"] = {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")}
        return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def write_json(report: Dict[str, Any], out: Optional[str] = None, metadata: bool = True) -> None:
        ReportWriter._emit(ReportWriter.dumps(report, metadata), out)

    @staticmethod
    def write_csv(frame: pd.DataFrame, out: Optional[str] = None) -> None:
        """Write a table with pandas; exact integers are already decimal strings."""
        ReportWriter._emit(frame.to_csv(index=False, lineterminator="\n", float_format=None), out)

    @staticmethod
    def write_lines(lines: Iterable[dict], out: Optional[str] = None) -> None:
        text = "".join(
            json.dumps(ReportWriter.to_jsonable(line), sort_keys=True, separators=(",", ":")) + "\n"
            for line in lines
        )
        ReportWriter._emit(text, out)

    @staticmethod
    def write_result(result: Dict[str, Any], fmt: str, out: Optional[str] = None) -> None:
        """
        Write a pipeline result in the requested format.

        Args:
            result: Pipeline result dictionary
            fmt: 'csv' or 'json'
            out: Output path; stdout when None
        """
        if result.get('lines') is not None:
            ReportWriter.write_lines(result['lines'], out)
            return
        frame = result.get('frame')
        if fmt == "csv" and frame is not None:
            ReportWriter.write_csv(frame, out)
            summary = result['report'].get('summary')
            if summary is not None:
                ReportWriter.write_json(
                    {"config": result['report']['config'], "summary": summary},
                    summary_path(out),
                )
            return
        if result.get('report') is not None:
            ReportWriter.write_json(result['report'], out)

    @staticmethod
    def _emit(text: str, out: Optional[str]) -> None:
        if out is None:
            sys.stdout.write(text)
            return
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def summary_path(out: Optional[str]) -> Optional[str]:
    """Sibling `<stem>.summary.json` of a CSV output (stdout stays stdout)."""
    if out is None:
        return None
    path = Path(out)
    return str(path.with_name(path.stem + ".summary.json"))
