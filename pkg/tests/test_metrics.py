"""
Tests des métriques de complétion (Chamfer, F-Score, Fidelity, MMD)
Fichier: tests/test_metrics.py
"""
import json
import unittest

import numpy as np
import pytest

from src.models.metric_report import AggregateReport, MetricReport, REPORT_COLUMNS
from src.models.occlusion_sample import Difficulty
from src.models.point_cloud import PointCloud
from src.services.metrics_service import (
    chamfer_l1, chamfer_l2, evaluate_many, evaluate_prediction, f_score, fidelity, mmd,
    precision_recall,
)
from src.utils.validators import ValidationError


def random_cloud(count, seed):
    return PointCloud(np.random.default_rng(seed).uniform(-1, 1, size=(count, 3)))


def nearest_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances au plus proche voisin par double boucle"""
    return np.array([min(np.linalg.norm(p - q) for q in b) for p in a])


class TestChamfer(unittest.TestCase):
    """Tests des distances de Chamfer contre un calcul exhaustif"""

    def setUp(self):
        self.a = random_cloud(30, 1)
        self.b = random_cloud(45, 2)

    def test_chamfer_l1_oracle(self):
        """Test CD-ℓ1 = ½ (moyenne a→b + moyenne b→a)"""
        expected = 0.5 * (nearest_oracle(self.a.points, self.b.points).mean()
                          + nearest_oracle(self.b.points, self.a.points).mean())
        self.assertAlmostEqual(chamfer_l1(self.a, self.b), expected, places=12)

    def test_chamfer_l2_oracle(self):
        """Test CD-ℓ2 = somme des moyennes des distances carrées"""
        expected = ((nearest_oracle(self.a.points, self.b.points) ** 2).mean()
                    + (nearest_oracle(self.b.points, self.a.points) ** 2).mean())
        self.assertAlmostEqual(chamfer_l2(self.a, self.b), expected, places=12)

    def test_symmetry_and_identity(self):
        self.assertAlmostEqual(chamfer_l2(self.a, self.b), chamfer_l2(self.b, self.a), places=12)
        self.assertEqual(chamfer_l2(self.a, self.a), 0.0)
        self.assertEqual(chamfer_l1(self.b, self.b), 0.0)

    def test_empty_cloud_rejected(self):
        with self.assertRaises(ValidationError):
            chamfer_l2(self.a, PointCloud.empty())


def test_f_score_known_values():
    """Test F-Score: un point sur deux dans le seuil"""
    gt = PointCloud(np.array([[0.0, 0, 0], [1.0, 0, 0]]))
    pred = PointCloud(np.array([[0.0, 0, 0.005], [5.0, 0, 0]]))
    precision, recall = precision_recall(pred, gt, 0.01)
    assert precision == 0.5
    assert recall == 0.5
    assert f_score(pred, gt) == pytest.approx(0.5)
    assert f_score(gt, gt) == 1.0


def test_f_score_zero_when_disjoint():
    gt = PointCloud(np.zeros((3, 3)))
    pred = PointCloud(np.ones((3, 3)))
    assert f_score(pred, gt) == 0.0


def test_fidelity_zero_when_input_preserved():
    """Test Fidelity nulle si l'entrée est contenue dans la sortie"""
    partial = random_cloud(20, 3)
    output = partial.concat(random_cloud(10, 4))
    assert fidelity(partial, output) == 0.0
    shifted = PointCloud(partial.points + np.array([0.0, 0.0, 0.1]))
    assert fidelity(partial, shifted) > 0.0


def test_mmd_picks_closest_reference():
    """Test MMD: minimum du CD-ℓ2 sur la bibliothèque"""
    pred = random_cloud(20, 5)
    far = PointCloud(pred.points + 3.0)
    assert mmd(pred, [far, pred]) == 0.0
    assert mmd(pred, [far]) == pytest.approx(chamfer_l2(pred, far))
    with pytest.raises(ValidationError):
        mmd(pred, [])


def test_evaluate_prediction_optional_fields():
    """Test rapport: Fidelity et MMD absentes sans entrée ni bibliothèque"""
    gt = random_cloud(25, 6)
    report = evaluate_prediction(gt, gt, sample_id="s0", difficulty=Difficulty.HARD)
    assert report.cd_l2 == 0.0
    assert report.fscore == 1.0
    assert report.fidelity is None
    assert report.mmd is None
    assert report.to_dict()["difficulty"] == "hard"
    assert "fidelity" not in report.to_text()


def test_evaluate_many_keeps_order():
    """Test évaluation parallèle: ordre des rapports conservé"""
    clouds = [random_cloud(10, seed) for seed in range(6)]
    target = random_cloud(10, 99)
    jobs = [(cloud, str(index)) for index, cloud in enumerate(clouds)]

    def evaluate(job):
        cloud, sample_id = job
        return evaluate_prediction(cloud, target, sample_id=sample_id)

    sequential = evaluate_many(jobs, evaluate, workers=1)
    parallel = evaluate_many(jobs, evaluate, workers=4)
    assert [r.sample_id for r in parallel] == [str(i) for i in range(6)]
    assert [r.cd_l2 for r in parallel] == [r.cd_l2 for r in sequential]


def test_metric_report_validation():
    with pytest.raises(ValidationError):
        MetricReport(cd_l2=-1.0)
    with pytest.raises(ValidationError):
        MetricReport(fscore=1.5)
    assert MetricReport(cd_l2=0.002).scaled("cd_l2") == pytest.approx(2.0)
    assert MetricReport(fscore=0.4).scaled("fscore") == 0.4


def test_aggregate_columns():
    """Test colonnes agrégées par difficulté et moyenne des difficultés"""
    reports = [
        MetricReport(cd_l1=0.1, cd_l2=0.001, fscore=0.5, difficulty=Difficulty.EASY),
        MetricReport(cd_l1=0.1, cd_l2=0.003, fscore=0.7, difficulty=Difficulty.EASY),
        MetricReport(cd_l1=0.2, cd_l2=0.006, fscore=0.3, difficulty=Difficulty.HARD),
    ]
    aggregate = AggregateReport(reports)
    columns = aggregate.columns()
    assert columns["CD-S"] == pytest.approx(0.002)
    assert columns["CD-M"] is None
    assert columns["CD-H"] == pytest.approx(0.006)
    assert columns["CD-Avg"] == pytest.approx(0.004)
    assert columns["F1"] == pytest.approx(0.5)
    assert columns["Fidelity"] is None

    display = aggregate.display_columns()
    assert display["CD-S"] == pytest.approx(2.0)
    assert display["F1"] == pytest.approx(0.5)
    assert set(REPORT_COLUMNS) <= set(display)

    document = json.loads(aggregate.to_json())
    assert document["sample_count"] == 3
    assert len(document["samples"]) == 3


def test_aggregate_without_difficulty():
    aggregate = AggregateReport([MetricReport(cd_l2=0.002), MetricReport(cd_l2=0.004)])
    assert aggregate.columns()["CD-Avg"] == pytest.approx(0.003)
    assert AggregateReport([]).columns()["CD-Avg"] is None
