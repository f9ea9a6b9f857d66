import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

# Set by the CLI from RunConfig.trace_file; None disables trace files.
TRACE_PATH: Optional[Path] = None


def write_trace_event(event: dict, path: Optional[Path] = None):
    """Append a trace event to the trace file as one JSON line."""
    target = path or TRACE_PATH
    if target is None:
        return
    event["timestamp"] = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
    target = Path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "a", encoding="utf-8") as f:
        f.write(json.dumps(event, sort_keys=True) + "\n")


class LoggedTrace:
    """Times a pipeline stage and records it in the log and trace file."""

    def __init__(self, workflow_name: str, metadata: dict = None):
        self.workflow_name = workflow_name
        self.metadata = metadata or {}
        self.duration_ms = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration_ms = (time.perf_counter() - self.start_time) * 1000.0
        status = "error" if exc_type else "success"
        logger.debug(
            "%s finished with %s in %.1f ms", self.workflow_name, status, self.duration_ms
        )
        write_trace_event(
            {
                "workflow": self.workflow_name,
                "metadata": self.metadata,
                "status": status,
                "duration_ms": round(self.duration_ms, 3),
            }
        )
        return False


def trace(workflow_name: str, metadata: dict = None) -> LoggedTrace:
    return LoggedTrace(workflow_name, metadata)


__all__ = ["trace", "write_trace_event", "LoggedTrace"]
