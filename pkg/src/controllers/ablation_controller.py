"""
Contrôleur d'ablation - Commande ablate

Études disponibles (--study):
    - interface: intersection, partiel réduit par FPS, vecteur global
    - ssp: 0 à 3 étages SSP
    - delta: rappel et faux positifs de la détection de bords sur disques

Les études d'entraînement génèrent le split train du manifeste en
mémoire et entraînent chaque variante avec les graines seed, seed+1, ...

Fichier: src/controllers/ablation_controller.py
"""

from typing import List, Optional

from src.config.messages import VALIDATION_MESSAGES
from src.models.experiment import ExperimentManifest
from src.services import ablation_service
from src.services.dataset_service import build_split
from src.utils.validators import ValidationError
from .base_controller import BaseController


STUDIES = ("interface", "ssp", "delta")
DELTA_STUDY_RADIUS = 0.15


class AblationController(BaseController):
    """Lancement des études comparatives."""

    def seeds(self, manifest: ExperimentManifest, count: int) -> List[int]:
        count = self.validator.validate_positive_int(count, "seeds")
        return [manifest.seed + offset for offset in range(count)]

    def run(self, study: str, manifest: ExperimentManifest, seed_count: int = 3,
            radius: Optional[float] = None) -> dict:
        """
        Lancer une étude.

        Returns:
            dict: {"study", "seeds", "rows", "summary"} pour les études
            d'entraînement, {"study", "seeds", "deltas"} pour delta

        Raises:
            ValidationError: Étude inconnue ou paramètres invalides
            NumericError: Perte non finie pendant une variante
        """
        if study not in STUDIES:
            raise ValidationError(VALIDATION_MESSAGES["enum_invalid"].format(
                name="study", value=study, allowed=", ".join(STUDIES)))
        seeds = self.seeds(manifest, seed_count)
        if study == "delta":
            radius = DELTA_STUDY_RADIUS if radius is None else radius
            return {"study": study, "seeds": seeds,
                    "deltas": ablation_service.delta_study(seeds, radius_r=radius)}

        samples = build_split(manifest.dataset, "train", manifest.seed, manifest.interface.n_t)
        if study == "interface":
            rows = ablation_service.interface_study(manifest.model, manifest.interface,
                                                    manifest.train, samples, seeds)
        else:
            rows = ablation_service.ssp_study(manifest.model, manifest.interface,
                                              manifest.train, samples, seeds)
        return {
            "study": study,
            "seeds": seeds,
            "rows": [row.to_dict() for row in rows],
            "summary": ablation_service.summarize(rows),
        }
