"""
Tests des études d'ablation (agrégation, variantes, seuil δ)
Fichier: tests/test_ablation.py
"""
import pytest

from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.model_config import CoarseMode, ModelConfig, TrainConfig
from src.models.occlusion_sample import ShapeKind
from src.services.ablation_service import (AblationRow, delta_study, edge_quality, interface_study,
                                           interface_variants, ssp_study, summarize, wins)
from conftest import TOY_MODEL, make_toy_sample


def test_summarize_and_wins():
    """Test moyenne par variante et décompte des victoires par graine"""
    rows = [AblationRow("ssp0", 0, 0.4), AblationRow("ssp3", 0, 0.2),
            AblationRow("ssp0", 1, 0.3), AblationRow("ssp3", 1, 0.5),
            AblationRow("ssp3", 2, 0.1)]
    means = summarize(rows)
    assert list(means) == ["ssp0", "ssp3"]
    assert means["ssp0"] == pytest.approx(0.35)
    assert means["ssp3"] == pytest.approx(0.8 / 3)
    assert wins(rows, "ssp3", "ssp0") == 1
    assert wins(rows, "ssp0", "ssp3") == 1
    assert rows[0].to_dict() == {"variant": "ssp0", "seed": 0, "value": 0.4}


def test_interface_variants():
    config = ModelConfig(**TOY_MODEL)
    variants = interface_variants(config, InterfaceConfig(InterfaceMode.EDGE_DETECTION, n_t=8))
    assert [name for name, _, _ in variants] == ["intersection", "downsampled", "global_feature"]
    assert variants[0][2].mode is InterfaceMode.OCCLUSION_POINT
    assert variants[1][2].mode is InterfaceMode.DOWNSAMPLED
    assert variants[2][1].coarse_mode is CoarseMode.GLOBAL_FEATURE
    assert all(interface.n_t == 8 for _, _, interface in variants)


def test_edge_quality_bounds():
    recall, false_positive = edge_quality(0.5, seed=0, point_count=400, radius_r=0.2)
    assert 0.0 <= recall <= 1.0
    assert 0.0 <= false_positive <= 1.0


def test_delta_study_is_monotone():
    """Test seuil δ plus grand: plus de points marqués (rappel et faux positifs)"""
    results = delta_study([0], deltas=(0.3, 0.7), point_count=400, radius_r=0.2)
    assert [row["delta"] for row in results] == [0.3, 0.7]
    assert results[1]["false_positive_rate"] >= results[0]["false_positive_rate"]
    assert results[1]["recall"] >= results[0]["recall"]


@pytest.mark.slow
def test_ssp_study_rows():
    samples = [make_toy_sample(0, 0)]
    rows = ssp_study(ModelConfig(**TOY_MODEL), InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                     TrainConfig(epochs=1, learning_rate=1e-3), samples, seeds=[0], stages=(0, 1))
    assert [row.variant for row in rows] == ["ssp0", "ssp1"]
    assert all(row.value > 0.0 for row in rows)


def overfit_samples():
    return [make_toy_sample(0, 0, n_mask=32), make_toy_sample(1, 1, ShapeKind.BOX, n_mask=32)]


@pytest.mark.slow
def test_interface_displacement_beats_global_feature():
    """Test génération grossière: le déplacement depuis l'interface l'emporte sur le vecteur global"""
    rows = interface_study(ModelConfig(**TOY_MODEL),
                           InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                           TrainConfig(epochs=20, learning_rate=1e-3, lr_decay=0.0),
                           overfit_samples(), seeds=[0, 1, 2])
    assert wins(rows, "intersection", "global_feature") >= 2


@pytest.mark.slow
def test_three_ssp_stages_beat_none():
    """Test raffinement: trois étages SSP l'emportent sur aucun"""
    rows = ssp_study(ModelConfig(**TOY_MODEL), InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                     TrainConfig(epochs=150, learning_rate=1e-3, lr_decay=0.0),
                     overfit_samples(), seeds=[0, 1, 2], stages=(0, 3))
    assert [row.variant for row in rows[:2]] == ["ssp0", "ssp3"]
    assert wins(rows, "ssp3", "ssp0") >= 2
