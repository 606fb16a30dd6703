"""
Contrôleur de jeux de données - Commande synth

Ce module relie le manifeste d'expérience au service de jeux de données:
génération des splits train et test, écriture des fichiers de points et
copie du manifeste effectif dans le dossier de sortie.

Fichier: src/controllers/dataset_controller.py
"""

from pathlib import Path
from typing import Dict, List

from src.models.experiment import ExperimentManifest
from src.models.occlusion_sample import OcclusionSample
from src.services.dataset_service import SPLITS, build_split, write_dataset
from src.utils.checkpoint_utils import config_hash
from .base_controller import BaseController


MANIFEST_COPY_NAME = "manifest.json"


class DatasetController(BaseController):
    """Génération et écriture des jeux de données synthétiques."""

    def build(self, manifest: ExperimentManifest, split: str) -> List[OcclusionSample]:
        """Générer un split en mémoire."""
        return build_split(manifest.dataset, split, manifest.seed, manifest.interface.n_t)

    def write(self, manifest: ExperimentManifest,
              splits: Dict[str, List[OcclusionSample]]) -> Path:
        """
        Écrire le jeu de données et le manifeste effectif.

        Returns:
            Path: Chemin de dataset.json

        Raises:
            PointFileError: Dossier non inscriptible
        """
        self.logger.set_run_context("synth", manifest.seed, config_hash(manifest.to_dict()))
        path = write_dataset(manifest.dataset_dir, manifest.dataset, splits, manifest.seed)
        manifest.save(manifest.output_path / MANIFEST_COPY_NAME)
        self.logger.log_dataset_written(str(manifest.dataset_dir),
                                        {split: len(samples) for split, samples in splits.items()})
        return path

    def synthesize(self, manifest: ExperimentManifest) -> Dict[str, int]:
        """Générer et écrire les deux splits; retourne le nombre d'échantillons par split."""
        splits = {split: self.build(manifest, split) for split in SPLITS}
        self.write(manifest, splits)
        return {split: len(samples) for split, samples in splits.items()}
