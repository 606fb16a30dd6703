"""
Tests pour l'initialisation et le contenu du registre des évaluations
Fichier: tests/test_database_init.py
"""
import unittest
from unittest.mock import patch, MagicMock

import pytest
from sqlalchemy import create_engine, inspect

from src.database.init_db import init_database
from src.models.evaluation_record import EvaluationRun, SampleResult
from src.models.metric_report import AggregateReport, MetricReport
from src.models.occlusion_sample import Difficulty


class TestDatabaseInit(unittest.TestCase):
    """Tests pour l'initialisation de la base de données"""

    @patch('src.database.init_db.create_tables')
    @patch('src.database.init_db.Base')
    @patch('src.database.init_db.engine')
    def test_init_database_success(self, mock_engine, mock_base, mock_create):
        """Test initialisation réussie sans réinitialisation"""
        mock_metadata = MagicMock()
        mock_base.metadata = mock_metadata

        result = init_database()

        self.assertTrue(result)
        mock_metadata.drop_all.assert_not_called()
        mock_create.assert_called_once_with(mock_engine)

    @patch('src.database.init_db.create_tables')
    @patch('src.database.init_db.Base')
    @patch('src.database.init_db.engine')
    def test_init_database_reset(self, mock_engine, mock_base, mock_create):
        """Test réinitialisation: suppression puis création des tables"""
        mock_metadata = MagicMock()
        mock_base.metadata = mock_metadata

        result = init_database(reset=True)

        self.assertTrue(result)
        mock_metadata.drop_all.assert_called_once_with(bind=mock_engine)
        mock_create.assert_called_once_with(mock_engine)

    @patch('src.database.init_db.logger')
    @patch('src.database.init_db.create_tables')
    def test_init_database_table_creation_error(self, mock_create, mock_logger):
        """Test gestion d'erreur lors de la création des tables"""
        mock_create.side_effect = Exception("Erreur de création de table")

        result = init_database(bind=MagicMock())

        self.assertFalse(result)
        mock_logger.log_exception.assert_called_once()


def test_init_database_creates_tables(tmp_path):
    """Test création réelle des tables sur un moteur SQLite dédié"""
    engine = create_engine(f"sqlite:///{tmp_path / 'results.db'}")
    assert init_database(bind=engine)
    assert {"evaluation_runs", "sample_results"} <= set(inspect(engine).get_table_names())
    assert init_database(reset=True, bind=engine)
    engine.dispose()


def make_report():
    return AggregateReport([
        MetricReport(cd_l1=0.05, cd_l2=0.002, fscore=0.6, fidelity=0.0, sample_id="a",
                     difficulty=Difficulty.EASY),
        MetricReport(cd_l1=0.07, cd_l2=0.004, fscore=0.4, fidelity=0.0, sample_id="b",
                     difficulty=Difficulty.HARD),
    ])


def test_evaluation_run_from_report(db_session):
    """Test enregistrement d'une évaluation et de ses échantillons"""
    run = EvaluationRun.from_report(make_report(), "runs/final.ckpt", "runs/dataset", "f" * 64, 3)
    db_session.add(run)
    db_session.commit()

    stored = db_session.query(EvaluationRun).one()
    assert stored.sample_count == 2
    assert stored.cd_s == pytest.approx(0.002)
    assert stored.cd_m is None
    assert stored.cd_h == pytest.approx(0.004)
    assert stored.cd_avg == pytest.approx(0.003)
    assert stored.f1 == pytest.approx(0.5)
    assert stored.mmd is None
    assert stored.created_at is not None
    assert [s.sample_id for s in stored.samples] == ["a", "b"]
    assert stored.samples[1].difficulty == "hard"
    assert "ffffffff" in repr(stored)


def test_deleting_run_deletes_samples(db_session):
    db_session.add(EvaluationRun.from_report(make_report(), "c.ckpt", "d", "0" * 64, 0))
    db_session.commit()
    db_session.delete(db_session.query(EvaluationRun).one())
    db_session.commit()
    assert db_session.query(SampleResult).count() == 0


if __name__ == '__main__':
    unittest.main()
