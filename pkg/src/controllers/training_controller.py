"""
Contrôleur d'entraînement - Commandes train et complete

Ce module relie le manifeste, le jeu de données écrit par synth et le
service d'entraînement.

Fonctionnalités:
    - train: lecture du split train, entraînement, checkpoints et
      loss_trace.json dans <output_dir>/checkpoints
    - complete: rechargement d'un checkpoint, localisation de l'interface
      d'un scan quelconque et écriture du nuage complet étiqueté

Fichier: src/controllers/training_controller.py
"""

from pathlib import Path
from typing import Callable, Optional, Tuple, Union

from src.models.experiment import ExperimentManifest
from src.models.interface import InterfaceConfig
from src.models.point_cloud import Point3, PointCloud
from src.models.spacnet import ForwardOutput
from src.services.dataset_service import load_split
from src.services.training_service import EpochRecord, TrainingResult, TrainingService
from src.utils.point_io import read_points, write_points
from .base_controller import BaseController


class TrainingController(BaseController):
    """Entraînement et application du générateur."""

    def train(self, manifest: ExperimentManifest,
              on_epoch: Optional[Callable[[EpochRecord], None]] = None) -> TrainingResult:
        """
        Entraîner sur le split train du jeu de données du manifeste.

        Raises:
            PointFileError: Jeu de données absent (synth non lancé)
            ValidationError: Split vide ou configurations incompatibles
            NumericError: Perte non finie
        """
        samples = load_split(manifest.dataset_dir, "train")
        service = TrainingService(manifest.model, manifest.interface, manifest.train, on_epoch)
        return service.train(samples, manifest.checkpoint_dir)

    @staticmethod
    def default_output(input_file: Union[str, Path], fmt: str = "ply") -> Path:
        path = Path(input_file)
        return path.with_name(f"{path.stem}_complete.{fmt}")

    def complete(self, checkpoint: Union[str, Path], input_file: Union[str, Path],
                 config: InterfaceConfig, occlusion_point: Optional[Point3] = None,
                 output: Union[str, Path, None] = None,
                 fmt: str = "ply") -> Tuple[ForwardOutput, Path]:
        """
        Compléter un scan partiel.

        La taille d'interface suit toujours celle du checkpoint.

        Returns:
            Tuple (ForwardOutput, chemin du nuage complet écrit)

        Raises:
            PointFileError: Checkpoint ou scan absent, sortie non inscriptible
            PointFileParseError: Checkpoint ou scan invalide
            ValidationError: Scan trop petit ou point d'occlusion manquant
        """
        model = TrainingService.load_model(checkpoint)
        config = self.interface_config(config, n_t=model.config.n_t)
        service = TrainingService(model.config, config)
        partial = PointCloud(read_points(input_file).points)
        out = service.complete(model, partial, occlusion_point)
        path = Path(output) if output is not None else self.default_output(input_file, fmt)
        return out, write_points(path, out.labeled_complete(), fmt)
