"""
Configuration globale pour les tests - Petits nuages et modèle jouet
"""
import pytest
import tempfile
import os
import sys

# Ajouter le répertoire racine au PYTHONPATH pour les imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from src.database.connection import Base
# Import nécessaire pour enregistrer les modèles SQLAlchemy
from src.models.evaluation_record import EvaluationRun  # noqa: F401
from src.models.experiment import DatasetDescriptor, ExperimentManifest, default_shapes
from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.model_config import ModelConfig, TrainConfig
from src.models.occlusion_sample import Difficulty, ShapeKind, ShapeSpec
from src.services.scan_service import cut_viewpoint, normalized_shape, random_viewpoint


TOY_MODEL = dict(n_input=64, n_t=8, upsample_factor=4, c_p=16, c_t=16, c_m=16, heads=2,
                 sa_centers=16, sa_k=4, edge_k=4)


@pytest.fixture(scope="function")
def db_session():
    """Créer une base de données temporaire pour chaque test"""
    # Fichier temporaire pour la base
    db_fd, db_path = tempfile.mkstemp(suffix='.db')

    # Créer l'engine et les tables
    engine = create_engine(f'sqlite:///{db_path}')
    Base.metadata.create_all(engine)

    # Session
    Session = sessionmaker(bind=engine)
    session = Session()

    yield session

    # Nettoyer
    session.close()
    engine.dispose()
    os.close(db_fd)
    os.unlink(db_path)


@pytest.fixture
def toy_config():
    """Configuration de modèle minuscule (64 points d'entrée, interface de 8)"""
    return ModelConfig(**TOY_MODEL)


@pytest.fixture
def toy_interface():
    """Interface par point d'occlusion alignée sur le modèle jouet"""
    return InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8)


@pytest.fixture
def toy_train():
    return TrainConfig(epochs=2, learning_rate=1e-3, seed=0)


def make_toy_sample(shape_seed: int = 0, view_seed: int = 0, kind=ShapeKind.SPHERE, n_mask: int = 64):
    """Échantillon par point de vue: 128 points, n_mask masqués, partiel de 64 (valeurs float32)"""
    gt = normalized_shape(ShapeSpec(kind, sample_count=128, seed=shape_seed)).single_precision()
    return cut_viewpoint(gt, random_viewpoint(view_seed), n_mask=n_mask, input_size=64,
                         seed=view_seed, n_t=8, shape_id=shape_seed)


@pytest.fixture
def toy_sample():
    return make_toy_sample(0, 0)


@pytest.fixture
def toy_samples():
    return [make_toy_sample(0, 0), make_toy_sample(1, 1, ShapeKind.BOX)]


@pytest.fixture
def toy_manifest(tmp_path):
    """Manifeste jouet: 2 formes de 128 points, difficulté moyenne, 2 époques"""
    dataset = DatasetDescriptor(shapes=default_shapes(0, 2, sample_count=128), train_views=2,
                                difficulties=(Difficulty.MEDIUM,), input_size=64)
    return ExperimentManifest(model=ModelConfig(**TOY_MODEL),
                              interface=InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8),
                              train=TrainConfig(epochs=2, learning_rate=1e-3),
                              dataset=dataset, output_dir=str(tmp_path / "run"), seed=0)
