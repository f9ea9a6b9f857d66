"""
Tests for the pipeline trace file.
"""

import json

import pytest

from gridskg.utils import tracing
from gridskg.utils.tracing import LoggedTrace, trace, write_trace_event

pytestmark = pytest.mark.unit


@pytest.fixture
def temp_trace_path(tmp_path):
    """Create a temporary trace path for testing."""
    return tmp_path / "traces" / "trace.jsonl"


class TestWriteTraceEvent:
    def test_write_trace_event(self, temp_trace_path):
        """Test writing a trace event to an explicit path."""
        event = {
            "workflow": "simplify",
            "metadata": {"level": 1},
            "status": "success",
            "duration_ms": 12.5,
        }

        write_trace_event(event, temp_trace_path)

        log_event = json.loads(temp_trace_path.read_text(encoding="utf-8").strip())
        assert log_event["workflow"] == "simplify"
        assert log_event["metadata"] == {"level": 1}
        assert log_event["timestamp"].endswith("Z")

    def test_disabled_without_path(self, mocker, tmp_path):
        """Test that nothing is written when no trace file is configured."""
        mocker.patch.object(tracing, "TRACE_PATH", None)
        write_trace_event({"workflow": "route"})
        assert list(tmp_path.iterdir()) == []

    def test_events_are_appended(self, mocker, temp_trace_path):
        """Test that the module trace path collects one line per event."""
        mocker.patch.object(tracing, "TRACE_PATH", temp_trace_path)
        write_trace_event({"workflow": "first"})
        write_trace_event({"workflow": "second"})
        lines = temp_trace_path.read_text(encoding="utf-8").splitlines()
        assert [json.loads(line)["workflow"] for line in lines] == ["first", "second"]


class TestLoggedTrace:
    def test_success(self, mocker, temp_trace_path):
        """Test that a finished stage records its status and duration."""
        mocker.patch.object(tracing, "TRACE_PATH", temp_trace_path)
        with trace("normalize", {"segments": 8}) as stage:
            pass
        assert isinstance(stage, LoggedTrace)
        assert stage.duration_ms >= 0.0
        event = json.loads(temp_trace_path.read_text(encoding="utf-8"))
        assert event["status"] == "success"
        assert event["metadata"] == {"segments": 8}

    def test_error_is_recorded_and_reraised(self, mocker, temp_trace_path):
        """Test that a failing stage is traced and the exception propagates."""
        mocker.patch.object(tracing, "TRACE_PATH", temp_trace_path)
        with pytest.raises(KeyError):
            with trace("route"):
                raise KeyError("L1.0.0")
        event = json.loads(temp_trace_path.read_text(encoding="utf-8"))
        assert event["workflow"] == "route"
        assert event["status"] == "error"
