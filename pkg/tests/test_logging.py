"""
Tests pour le service de logging Sentry
Fichier: tests/test_logging.py
"""
import os
import unittest
from unittest.mock import patch, MagicMock
from src.services.logging_service import SentryLogger


def initialized_logger():
    """Logger forcé à l'état initialisé (Sentry est désactivé sous pytest)"""
    logger = SentryLogger()
    logger.is_initialized = True
    return logger


class TestSentryLogger(unittest.TestCase):

    def test_sentry_logger_initialization(self):
        """Test initialisation du logger Sentry"""
        logger = SentryLogger()
        self.assertTrue(hasattr(logger, 'is_initialized'))
        self.assertTrue(hasattr(logger, '_setup_sentry'))

    def test_sentry_logger_instances(self):
        """Test que chaque instance est indépendante"""
        logger1 = SentryLogger()
        logger2 = SentryLogger()
        self.assertIsNot(logger1, logger2)
        self.assertEqual(logger1.is_initialized, logger2.is_initialized)

    @patch.dict(os.environ, {'SENTRY_DSN': 'test_dsn'})
    @patch('sentry_sdk.init')
    def test_setup_sentry_with_dsn(self, mock_init):
        """Test configuration Sentry avec DSN (désactivé en mode test)"""
        logger = SentryLogger()
        mock_init.assert_not_called()
        self.assertFalse(logger.is_initialized)

    @patch.dict(os.environ, {'SENTRY_DSN': 'your_sentry_dsn_here'})
    def test_setup_sentry_without_valid_dsn(self):
        """Test configuration Sentry sans DSN valide"""
        self.assertFalse(SentryLogger().is_initialized)

    @patch('sentry_sdk.set_tag')
    def test_set_run_context(self, mock_set_tag):
        """Test tags de contexte: commande, graine, empreinte tronquée"""
        logger = initialized_logger()

        logger.set_run_context("train", 3, "a" * 64)

        tags = {call.args[0]: call.args[1] for call in mock_set_tag.call_args_list}
        self.assertEqual(tags["command"], "train")
        self.assertEqual(tags["seed"], "3")
        self.assertEqual(tags["config_hash"], "a" * 16)

    @patch('sentry_sdk.set_tag')
    def test_run_context_without_sentry(self, mock_set_tag):
        SentryLogger().set_run_context("eval", 0)
        mock_set_tag.assert_not_called()

    @patch('sentry_sdk.capture_message')
    def test_log_dataset_written(self, mock_capture):
        """Test journalisation d'un jeu de données écrit"""
        logger = initialized_logger()

        logger.log_dataset_written("runs/x/dataset", {"train": 4, "test": 16})

        mock_capture.assert_called_once()
        args, kwargs = mock_capture.call_args
        self.assertIn("20 échantillons", args[0])
        self.assertEqual(kwargs["level"], "info")

    @patch('sentry_sdk.add_breadcrumb')
    def test_log_epoch_breadcrumb(self, mock_breadcrumb):
        """Test breadcrumb par époque"""
        logger = initialized_logger()

        logger.log_epoch(5, 0.25, 1e-3)

        mock_breadcrumb.assert_called_once()
        kwargs = mock_breadcrumb.call_args.kwargs
        self.assertEqual(kwargs["category"], "training")
        self.assertEqual(kwargs["data"], {"epoch": 5, "loss": 0.25, "lr": 1e-3})

    @patch('sentry_sdk.add_breadcrumb')
    def test_log_checkpoint_saved(self, mock_breadcrumb):
        initialized_logger().log_checkpoint_saved("runs/x/final.ckpt", 300)
        self.assertIn("final.ckpt", mock_breadcrumb.call_args.kwargs["message"])

    @patch('sentry_sdk.capture_message')
    def test_log_numeric_failure(self, mock_capture):
        """Test échec numérique journalisé au niveau error"""
        logger = initialized_logger()

        logger.log_numeric_failure("train-s000-v00-medium", "matmul", {"epoch": 2})

        args, kwargs = mock_capture.call_args
        self.assertIn("train-s000-v00-medium", args[0])
        self.assertIn("matmul", args[0])
        self.assertEqual(kwargs["level"], "error")

    @patch('sentry_sdk.capture_message')
    def test_log_evaluation(self, mock_capture):
        logger = initialized_logger()

        logger.log_evaluation({"CD-Avg": 0.004}, 12)

        self.assertIn("12 échantillons", mock_capture.call_args.args[0])

    @patch('sentry_sdk.capture_message')
    def test_events_fall_back_to_local_logging(self, mock_capture):
        """Test sans Sentry: aucun événement envoyé, journal local"""
        logger = SentryLogger()
        with self.assertLogs("spacnet", level="ERROR") as captured:
            logger.log_numeric_failure("s0", "joint_loss")
        mock_capture.assert_not_called()
        self.assertIn("s0", captured.output[0])

    @patch('sentry_sdk.capture_exception')
    def test_log_exception(self, mock_capture):
        """Test journalisation exception"""
        logger = initialized_logger()
        test_exception = ValueError("Test exception")

        logger.log_exception(test_exception, {"command": "train"})

        mock_capture.assert_called_once_with(test_exception)

    @patch('sentry_sdk.capture_exception')
    def test_log_exception_without_sentry(self, mock_capture):
        SentryLogger().log_exception(ValueError("Test exception"))
        mock_capture.assert_not_called()

    @patch('sentry_sdk.flush')
    def test_force_flush(self, mock_flush):
        """Test du flush forcé"""
        logger = initialized_logger()
        logger.force_flush()
        mock_flush.assert_called_once_with(timeout=5)

    def test_force_flush_never_raises(self):
        logger = initialized_logger()
        with patch('sentry_sdk.flush', MagicMock(side_effect=RuntimeError("réseau"))):
            logger.force_flush()


if __name__ == '__main__':
    unittest.main()
