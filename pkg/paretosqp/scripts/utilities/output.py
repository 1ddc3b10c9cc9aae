"""
Console output for the MOSQP benchmark CLI

Text mode prints tagged status lines, metric tables and run summaries for a
terminal. JSON mode prints one JSON document per line so benchmark sweeps
can pipe results straight into other tools. Every status line is mirrored to
the module logger.
"""

import json
import logging
import math
import sys
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from tabulate import tabulate

logger = logging.getLogger(__name__)


class OutputLevel(Enum):
    """Severity of a console status line"""

    INFO = "info"
    SUCCESS = "success"
    WARNING = "warning"
    ERROR = "error"


_TAGS = {
    OutputLevel.INFO: "[info]",
    OutputLevel.SUCCESS: "[done]",
    OutputLevel.WARNING: "[warn]",
    OutputLevel.ERROR: "[error]",
}

_ANSI = {
    OutputLevel.INFO: "\033[94m",
    OutputLevel.SUCCESS: "\033[92m",
    OutputLevel.WARNING: "\033[93m",
    OutputLevel.ERROR: "\033[91m",
}
_RESET = "\033[0m"

_LOG_LEVELS = {
    OutputLevel.INFO: logging.DEBUG,
    OutputLevel.SUCCESS: logging.DEBUG,
    OutputLevel.WARNING: logging.WARNING,
    OutputLevel.ERROR: logging.ERROR,
}


def _jsonable(value: Any) -> Any:
    """NaN and inf are not valid JSON; report them as null and strings"""
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class ConsoleOutput:
    """
    Status lines, tables and summaries in text or JSON form

    Errors go to stderr, everything else to stdout.
    """

    def __init__(self, json_output: bool = False, use_colors: bool = True):
        self.json_output = json_output
        self.use_colors = use_colors and sys.stdout.isatty() and not json_output

    def _emit(self, text: str, level: OutputLevel = OutputLevel.INFO):
        stream = sys.stderr if level == OutputLevel.ERROR else sys.stdout
        print(text, file=stream)

    def status(self, message: str, level: OutputLevel = OutputLevel.INFO, **context):
        """Print one status line and mirror it to the logger"""
        if self.json_output:
            self._emit(
                json.dumps(_jsonable({"level": level.value, "message": message, **context})),
                level,
            )
        elif self.use_colors:
            self._emit(f"{_ANSI[level]}{_TAGS[level]}{_RESET} {message}", level)
        else:
            self._emit(f"{_TAGS[level]} {message}", level)
        logger.log(_LOG_LEVELS[level], message)

    def info(self, message: str, **context):
        self.status(message, OutputLevel.INFO, **context)

    def success(self, message: str, **context):
        self.status(message, OutputLevel.SUCCESS, **context)

    def warning(self, message: str, **context):
        self.status(message, OutputLevel.WARNING, **context)

    def error(self, message: str, **context):
        self.status(message, OutputLevel.ERROR, **context)

    def json(self, data: Any):
        """Print data as JSON, compact in JSON mode and indented otherwise"""
        indent = None if self.json_output else 2
        self._emit(json.dumps(_jsonable(data), indent=indent, default=str))

    def summary(self, title: str, fields: Dict[str, Any]):
        """Key/value block for a finished run"""
        if self.json_output:
            self.json({"title": title, **fields})
            return
        self._emit(f"\n{title}")
        self._emit(tabulate(list(fields.items()), tablefmt="plain", disable_numparse=True))

    def table(
        self,
        headers: Sequence[str],
        rows: List[Sequence[Any]],
        title: Optional[str] = None,
    ):
        """Metric table; rows are emitted as objects keyed by header in JSON mode"""
        if self.json_output:
            data = [dict(zip(headers, row)) for row in rows]
            self.json({"title": title, "rows": data} if title else data)
            return
        if title:
            self._emit(f"\n{title}")
        self._emit(tabulate(rows, headers=list(headers), tablefmt="github", disable_numparse=True))
