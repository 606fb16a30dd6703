"""
Tests du manifeste d'expérience (validation, options, persistance)
Fichier: tests/test_experiment.py
"""
import json
import unittest
import tempfile
from pathlib import Path

import pytest

from src.models.experiment import DatasetDescriptor, ExperimentManifest, default_shapes
from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.model_config import ModelConfig
from src.models.occlusion_sample import Difficulty, ShapeKind
from src.utils.point_io import PointFileError
from src.utils.validators import ValidationError
from conftest import TOY_MODEL


class TestExperimentManifest(unittest.TestCase):
    """Tests de lecture/écriture du manifeste"""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)
        dataset = DatasetDescriptor(shapes=default_shapes(0, 2, sample_count=128), train_views=2,
                                    difficulties=(Difficulty.MEDIUM,), input_size=64)
        self.manifest = ExperimentManifest(
            model=ModelConfig(**TOY_MODEL),
            interface=InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
            dataset=dataset, output_dir=str(self.root / "run"), seed=3)

    def tearDown(self):
        self.directory.cleanup()

    def test_save_and_load(self):
        """Test écriture JSON puis relecture identique"""
        path = self.manifest.save(self.root / "conf" / "experiment.json")
        loaded = ExperimentManifest.load(path)
        self.assertEqual(loaded.to_dict(), self.manifest.to_dict())
        self.assertEqual(loaded.dataset_dir, self.root / "run" / "dataset")
        self.assertEqual(loaded.checkpoint_dir, self.root / "run" / "checkpoints")

    def test_sample_counts(self):
        self.assertEqual(self.manifest.sample_counts(), {"train": 4, "test": 16})

    def test_overrides(self):
        """Test options de ligne de commande: graine, époques, sortie, interface"""
        edges = InterfaceConfig(InterfaceMode.EDGE_DETECTION, n_t=8)
        changed = self.manifest.with_overrides(seed=9, epochs=5, output_dir="elsewhere",
                                               interface=edges)
        self.assertEqual(changed.seed, 9)
        self.assertEqual(changed.train.seed, 9)
        self.assertEqual(changed.train.epochs, 5)
        self.assertEqual(changed.output_dir, "elsewhere")
        self.assertIs(changed.interface.mode, InterfaceMode.EDGE_DETECTION)
        self.assertIs(self.manifest.with_overrides(), self.manifest)

    def test_seed_override_keeps_explicit_shapes(self):
        """Test formes explicites (graine 0, manifeste graine 3) conservées"""
        self.assertFalse(self.manifest.uses_default_shapes())
        changed = self.manifest.with_overrides(seed=9)
        self.assertEqual(changed.dataset.shapes, self.manifest.dataset.shapes)

    def test_seed_override_rederives_default_shapes(self):
        """Test --seed: formes par défaut redérivées de la nouvelle graine"""
        manifest = ExperimentManifest(model=ModelConfig(**TOY_MODEL),
                                      interface=InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                                      dataset=DatasetDescriptor(input_size=64), seed=3)
        self.assertTrue(manifest.uses_default_shapes())
        changed = manifest.with_overrides(seed=9)
        self.assertEqual(changed.dataset.shapes, default_shapes(9, 10))
        self.assertNotEqual(changed.dataset.shapes, manifest.dataset.shapes)
        self.assertTrue(changed.uses_default_shapes())
        reloaded = ExperimentManifest.load(manifest.save(self.root / "defaults.json"))
        self.assertEqual(reloaded.with_overrides(seed=9).dataset.shapes, default_shapes(9, 10))

    def test_load_errors(self):
        """Test fichier absent, JSON invalide, valeurs hors domaine"""
        with self.assertRaises(PointFileError):
            ExperimentManifest.load(self.root / "absent.json")
        bad = self.root / "bad.json"
        bad.write_text("{oups")
        with self.assertRaises(ValidationError):
            ExperimentManifest.load(bad)
        bad.write_text("[1, 2]")
        with self.assertRaises(ValidationError):
            ExperimentManifest.load(bad)
        bad.write_text(json.dumps({"model": {"n_t": 0}}))
        with self.assertRaises(ValidationError):
            ExperimentManifest.load(bad)


def test_sizes_must_agree():
    """Test cohérence interface/modèle et taille d'entrée/modèle"""
    with pytest.raises(ValidationError):
        ExperimentManifest(model=ModelConfig(**TOY_MODEL),
                           interface=InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=16),
                           dataset=DatasetDescriptor(input_size=64))
    with pytest.raises(ValidationError):
        ExperimentManifest(model=ModelConfig(**TOY_MODEL),
                           interface=InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                           dataset=DatasetDescriptor(input_size=512))


def test_defaults_fill_shapes_and_sizes():
    manifest = ExperimentManifest.from_dict({"model": TOY_MODEL, "seed": 1})
    assert manifest.interface.n_t == 8
    assert manifest.dataset.input_size == 64
    assert manifest.shape_count() == 10
    assert manifest.dataset.shapes[0].kind is ShapeKind.SPHERE


def test_default_shapes_cycle_kinds():
    shapes = default_shapes(0, 7, sample_count=128)
    assert shapes[0].kind is shapes[6].kind
    assert len({shape.seed for shape in shapes}) == 7


def test_overfit_descriptor():
    descriptor = DatasetDescriptor.overfit(seed=2)
    assert len(descriptor.shapes) == 4
    assert descriptor.train_views == 4
    assert descriptor.difficulties == (Difficulty.MEDIUM,)
    assert DatasetDescriptor.from_dict(descriptor.to_dict()) == descriptor
