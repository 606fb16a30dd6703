"""
Tests du service d'entraînement (boucle, checkpoints, évaluation, complétion)
Fichier: tests/test_training.py
"""
import json
import math

import numpy as np
import pytest

from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.metric_report import AggregateReport
from src.models.model_config import ModelConfig, TrainConfig
from src.models.occlusion_sample import ShapeKind
from src.nn.tensor import NumericError
from src.services import training_service
from src.services.training_service import (FAILURE_DUMP_NAME, FINAL_CHECKPOINT_NAME, LOSS_TRACE_NAME,
                                           TrainingService)
from src.utils.point_io import PointFileParseError
from src.utils.validators import ValidationError
from conftest import TOY_MODEL, make_toy_sample


def test_training_writes_trace_and_final_checkpoint(tmp_path, toy_config, toy_interface,
                                                    toy_train, toy_samples):
    """Test deux époques: trace par époque et checkpoint final"""
    seen = []
    service = TrainingService(toy_config, toy_interface, toy_train, on_epoch=seen.append)
    result = service.train(toy_samples, checkpoint_dir=tmp_path)

    assert [record.epoch for record in result.trace] == [0, 1]
    assert [record.epoch for record in seen] == [0, 1]
    assert result.checkpoint_path == tmp_path / FINAL_CHECKPOINT_NAME
    assert result.checkpoint_path.is_file()
    assert math.isfinite(result.final_loss)
    assert result.model.store.step == 4

    trace = json.loads((tmp_path / LOSS_TRACE_NAME).read_text())
    assert len(trace) == 2
    assert trace[1]["lr"] == pytest.approx(1e-3 * (1 - 5e-4))
    assert set(trace[0]) == {"epoch", "lr", "loss", "partial", "complete"}


def test_training_is_deterministic(tmp_path, toy_config, toy_interface, toy_train, toy_samples):
    """Test deux entraînements de même graine: checkpoints identiques à l'octet"""
    first, second = tmp_path / "a", tmp_path / "b"
    TrainingService(toy_config, toy_interface, toy_train).train(toy_samples, first)
    TrainingService(toy_config, toy_interface, toy_train).train(toy_samples, second)
    assert (first / FINAL_CHECKPOINT_NAME).read_bytes() == (second / FINAL_CHECKPOINT_NAME).read_bytes()
    assert (first / LOSS_TRACE_NAME).read_text() == (second / LOSS_TRACE_NAME).read_text()


def test_periodic_checkpoints(tmp_path, toy_config, toy_interface, toy_samples):
    train = TrainConfig(epochs=2, learning_rate=1e-3, checkpoint_every=1)
    TrainingService(toy_config, toy_interface, train).train(toy_samples[:1], tmp_path)
    assert (tmp_path / "epoch_0001.ckpt").is_file()
    assert (tmp_path / "epoch_0002.ckpt").is_file()


def test_training_without_directory_writes_nothing(tmp_path, toy_config, toy_interface,
                                                   toy_train, toy_sample, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = TrainingService(toy_config, toy_interface, toy_train).train([toy_sample])
    assert result.checkpoint_path is None
    assert list(tmp_path.rglob("*.ckpt")) == []
    assert list(tmp_path.rglob("*.json")) == []


def test_load_model_round_trip(tmp_path, toy_config, toy_interface, toy_train, toy_sample):
    """Test rechargement: même sortie que le modèle entraîné"""
    service = TrainingService(toy_config, toy_interface, toy_train)
    result = service.train([toy_sample], tmp_path)
    loaded = TrainingService.load_model(result.checkpoint_path, expected_config=toy_config)
    point = toy_sample.occlusion_point
    before = service.complete(result.model, toy_sample.partial, point)
    after = service.complete(loaded, toy_sample.partial, point)
    assert np.array_equal(before.complete.points, after.complete.points)

    with pytest.raises(PointFileParseError):
        TrainingService.load_model(result.checkpoint_path,
                                   expected_config=ModelConfig(**dict(TOY_MODEL, ssp_stages=2)))


def test_interface_size_must_match_model(toy_config):
    with pytest.raises(ValidationError):
        TrainingService(toy_config, InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=16))


def test_empty_training_set_rejected(toy_config, toy_interface, toy_train):
    with pytest.raises(ValidationError):
        TrainingService(toy_config, toy_interface, toy_train).train([])


def test_numeric_failure_dumps_sample(tmp_path, toy_config, toy_interface, toy_train,
                                      toy_sample, monkeypatch):
    """Test perte non finie: arrêt et vidage de l'échantillon fautif"""
    real_loss = training_service.joint_loss

    def broken_loss(*args, **kwargs):
        loss, parts = real_loss(*args, **kwargs)
        parts["total"] = float("nan")
        return loss, parts

    monkeypatch.setattr(training_service, "joint_loss", broken_loss)
    service = TrainingService(toy_config, toy_interface, toy_train)
    with pytest.raises(NumericError) as excinfo:
        service.train([toy_sample], tmp_path)
    assert excinfo.value.sample_id == toy_sample.sample_id
    assert excinfo.value.op == "joint_loss"

    dump = json.loads((tmp_path / FAILURE_DUMP_NAME).read_text())
    assert dump["sample_id"] == toy_sample.sample_id
    assert dump["epoch"] == 0
    assert not (tmp_path / FINAL_CHECKPOINT_NAME).exists()


def test_evaluate_reports_each_sample(toy_config, toy_interface, toy_samples):
    """Test évaluation: un rapport par échantillon, Fidelity nulle"""
    service = TrainingService(toy_config, toy_interface)
    model = service.build_model()
    report = service.evaluate(model, toy_samples, library=[toy_samples[0].ground_truth], workers=2)
    assert isinstance(report, AggregateReport)
    assert report.sample_count == 2
    columns = report.columns()
    assert columns["CD-M"] is not None
    assert columns["CD-S"] is None
    assert columns["Fidelity"] == 0.0
    assert all(sample.mmd is not None for sample in report.reports)


def test_complete_reduces_larger_scan(toy_config, toy_interface):
    """Test complétion: scan plus grand réduit par FPS, scan trop petit refusé"""
    sample = make_toy_sample(2, 2)
    service = TrainingService(toy_config, toy_interface)
    model = service.build_model()
    out = service.complete(model, sample.ground_truth, sample.occlusion_point)
    assert out.complete.count == 96
    rows = {tuple(row) for row in sample.ground_truth.points}
    assert all(tuple(row) in rows for row in out.complete.points[:64])

    with pytest.raises(ValidationError):
        service.complete(model, sample.partial.subset(range(10)), sample.occlusion_point)
    with pytest.raises(ValidationError):
        service.complete(model, sample.partial)


def test_downsampling_interface_needs_no_point(toy_config):
    service = TrainingService(toy_config, InterfaceConfig(InterfaceMode.DOWNSAMPLED, n_t=8))
    result = service.locate_interface(make_toy_sample(0, 0).partial)
    assert result.count == 8



def overfit_samples():
    """Deux échantillons dont la partie manquante compte n_t·r = 32 points"""
    return [make_toy_sample(0, 0, n_mask=32), make_toy_sample(1, 1, ShapeKind.BOX, n_mask=32)]


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_overfit_reduces_missing_chamfer(seed, toy_config, toy_interface):
    """Test sur-apprentissage: le CD-ℓ2 de M′ baisse d'au moins 80% depuis la première époque"""
    samples = overfit_samples()
    service = TrainingService(toy_config, toy_interface,
                              TrainConfig(epochs=300, learning_rate=1e-3, lr_decay=0.0, seed=seed))
    result = service.train(samples)
    first_epoch = result.trace[0].complete
    assert service.missing_chamfer(result.model, samples) <= 0.2 * first_epoch
