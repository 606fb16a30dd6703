"""
Tests du gestionnaire d'exceptions et des codes de sortie
Fichier: tests/test_exception_handler.py
"""
import io
import sys
import unittest
from unittest.mock import patch

import pytest
from rich.console import Console

from src.nn.tensor import NumericError
from src.utils.exception_handler import (EXIT_IO, EXIT_NUMERIC, EXIT_PARSE, EXIT_VALIDATION,
                                         ExceptionHandler)
from src.utils.point_io import PointFileError, PointFileParseError
from src.utils.validators import ValidationError


def raising(exc):
    def command():
        raise exc
    return command


class TestExitCodes(unittest.TestCase):
    """Tests de correspondance erreur → code de sortie"""

    def test_exit_code_for_each_family(self):
        self.assertEqual(ExceptionHandler.exit_code_for(ValidationError("x")), EXIT_VALIDATION)
        self.assertEqual(ExceptionHandler.exit_code_for(PointFileError("x", "a.ply")), EXIT_IO)
        self.assertEqual(ExceptionHandler.exit_code_for(PointFileParseError("a.ply", 3, "x")),
                         EXIT_PARSE)
        self.assertEqual(ExceptionHandler.exit_code_for(NumericError("x", op="mul")), EXIT_NUMERIC)
        self.assertEqual((EXIT_VALIDATION, EXIT_IO, EXIT_PARSE, EXIT_NUMERIC), (1, 2, 3, 4))

    def test_error_message_mentions_line(self):
        """Test message d'erreur d'analyse avec fichier et ligne"""
        message = ExceptionHandler.error_message(PointFileParseError("scan.ply", 12, "valeur"))
        self.assertIn("scan.ply", message)
        self.assertIn("12", message)


@pytest.mark.parametrize("exc, code", [
    (ValidationError("n_t invalide"), 1),
    (PointFileError("absent", "a.ply"), 2),
    (PointFileParseError("a.ply", 4, "pas un nombre"), 3),
    (NumericError("NaN", op="matmul"), 4),
])
def test_run_command_exits_with_code(exc, code):
    """Test run_command: message sur une ligne puis sys.exit(code)"""
    output = io.StringIO()
    with pytest.raises(SystemExit) as excinfo:
        ExceptionHandler.run_command(raising(exc), console=Console(file=output, width=200))
    assert excinfo.value.code == code
    assert "❌" in output.getvalue()


def test_run_command_returns_result():
    assert ExceptionHandler.run_command(lambda value: value * 2, 21) == 42


def test_run_command_reraises_unexpected_errors():
    with pytest.raises(KeyError):
        ExceptionHandler.run_command(raising(KeyError("bug")))


def test_run_command_flushes_after_success_and_failure():
    """Test envoi des événements en attente à la fin de chaque commande"""
    with patch("src.utils.exception_handler.logger") as mock_logger:
        assert ExceptionHandler.run_command(lambda: 5) == 5
        mock_logger.force_flush.assert_called_once()

        with pytest.raises(SystemExit):
            ExceptionHandler.run_command(raising(ValidationError("x")),
                                         console=Console(file=io.StringIO()))
    mock_logger.log_exception.assert_called_once()
    assert mock_logger.force_flush.call_count == 2


def test_run_command_flushes_before_reraising():
    with patch("src.utils.exception_handler.logger") as mock_logger:
        with pytest.raises(KeyError):
            ExceptionHandler.run_command(raising(KeyError("bug")))
    mock_logger.force_flush.assert_called_once()
    mock_logger.log_exception.assert_not_called()


def test_global_handler_installed():
    previous = sys.excepthook
    try:
        ExceptionHandler.setup_global_exception_handler()
        assert sys.excepthook is not previous
    finally:
        sys.excepthook = previous
