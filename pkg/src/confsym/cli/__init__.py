"""Task files, the suite runner and report emission."""

from .polyparse import ParseError, parse_polynomial
from .runner import Entry, Report, emit_report, run_tasks
from .taskfile import TaskFile, TaskSpec, format_taskfile, parse_taskfile

__all__ = [
    "Entry",
    "ParseError",
    "Report",
    "TaskFile",
    "TaskSpec",
    "emit_report",
    "format_taskfile",
    "parse_polynomial",
    "parse_taskfile",
    "run_tasks",
]
