import pytest
from pydantic import BaseModel, ValidationError

from gridskg.utils.error_handling import (
    EXIT_INPUT,
    EXIT_UNREACHABLE,
    DataIntegrityError,
    IntegrityError,
    InvalidInputError,
    ParseError,
    UnreachableError,
    UnsupportedFeatureError,
    format_validation_error,
    handle_error,
)

pytestmark = pytest.mark.unit


class TestErrorTypes:
    def test_parse_error_carries_line(self):
        """Test that parse errors cite the offending line"""
        error = ParseError("invalid JSON", line=7)
        assert error.line == 7
        assert "line 7" in str(error)

    def test_parse_error_without_line(self):
        error = ParseError("bad input")
        assert error.line is None
        assert str(error) == "bad input"

    def test_unreachable_exit_code(self):
        """Test that unreachable targets use their own exit code"""
        error = UnreachableError("no route", explored_cells=4)
        assert error.exit_code == EXIT_UNREACHABLE
        assert error.explored_cells == 4

    def test_integrity_errors_name_their_subject(self):
        assert IntegrityError("missing", missing_id="n9").missing_id == "n9"
        assert DataIntegrityError("missing weight", subject="http://x/l").subject == "http://x/l"

    def test_invalid_input_is_a_value_error(self):
        assert isinstance(InvalidInputError("x"), ValueError)


class TestHandleError:
    def test_domain_error(self):
        """Test error reports for gridskg errors"""
        report = handle_error(UnsupportedFeatureError("blank node encountered", line=3))
        assert report.error_type == "unsupported_feature"
        assert report.exit_code == EXIT_INPUT
        assert "line 3" in report.message

    def test_unreachable(self):
        report = handle_error(UnreachableError("no route"))
        assert (report.error_type, report.exit_code) == ("unreachable", 3)

    def test_missing_file(self):
        report = handle_error(FileNotFoundError("nope.nt"))
        assert (report.error_type, report.exit_code) == ("io_error", EXIT_INPUT)

    def test_plain_value_error(self):
        assert handle_error(ValueError("bad")).exit_code == EXIT_INPUT

    def test_internal_error(self):
        """Test that unexpected exceptions map to exit code 1"""
        report = handle_error(RuntimeError())
        assert report.exit_code == 1
        assert report.error_type == "internal_error"
        assert report.message == "RuntimeError"
        assert report.is_retriable is False


class TestFormatValidationError:
    def test_flattens_locations(self):
        class Point(BaseModel):
            x: float
            y: float

        with pytest.raises(ValidationError) as exc_info:
            Point(x="east")
        message = format_validation_error(exc_info.value)
        assert message.startswith("x: ")
        assert "; y: " in message

    def test_plain_exception(self):
        assert format_validation_error(ValueError("plain")) == "plain"
