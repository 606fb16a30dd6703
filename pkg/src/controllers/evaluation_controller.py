"""
Contrôleur d'évaluation - Commandes eval et history

Ce module évalue un checkpoint sur un split du jeu de données, écrit le
rapport JSON et, sur demande, enregistre l'exécution dans le registre
SQLAlchemy des évaluations.

Fonctionnalités:
    - Évaluation: passes avant puis métriques par échantillon en parallèle
      (SPACNET_EVAL_WORKERS threads), MMD si le descripteur du jeu de
      données demande une bibliothèque de référence
    - Rapport: eval_<split>.json dans le dossier de sortie
    - Enregistrement: EvaluationRun et un SampleResult par échantillon
    - Historique: dernières exécutions enregistrées

Fichier: src/controllers/evaluation_controller.py
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

from src.config import settings
from src.config.messages import FILE_MESSAGES
from src.models.evaluation_record import EvaluationRun
from src.models.interface import InterfaceConfig
from src.models.metric_report import AggregateReport
from src.services.dataset_service import (build_library, load_dataset_seed, load_descriptor,
                                          load_split)
from src.services.training_service import TrainingService
from src.utils.checkpoint_utils import config_hash
from src.utils.point_io import PointFileError
from .base_controller import BaseController


class EvaluationController(BaseController):
    """Évaluation des checkpoints et registre des résultats."""

    def evaluate(self, checkpoint: Union[str, Path], dataset_dir: Union[str, Path],
                 config: InterfaceConfig, split: str = "test",
                 workers: Optional[int] = None) -> Tuple[AggregateReport, str]:
        """
        Évaluer un checkpoint sur un split.

        Returns:
            Tuple (rapport agrégé, empreinte de la configuration du modèle)

        Raises:
            PointFileError: Checkpoint ou jeu de données absent
            PointFileParseError: Fichier invalide
            ValidationError: Split vide
        """
        model = TrainingService.load_model(checkpoint)
        config = self.interface_config(config, n_t=model.config.n_t)
        samples = load_split(dataset_dir, split)
        library = build_library(load_descriptor(dataset_dir), load_dataset_seed(dataset_dir))
        service = TrainingService(model.config, config)
        report = service.evaluate(model, samples, library=library or None,
                                  workers=workers or settings.EVAL_WORKERS)
        return report, config_hash(model.config.to_dict())

    @staticmethod
    def write_report(report: AggregateReport, output_dir: Union[str, Path], split: str = "test") -> Path:
        """
        Écrire le rapport JSON.

        Raises:
            PointFileError: Écriture impossible
        """
        path = Path(output_dir) / f"eval_{split}.json"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(report.to_json() + "\n", encoding="utf-8")
        except OSError as e:
            raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
        return path

    def record(self, report: AggregateReport, checkpoint: Union[str, Path],
               dataset_dir: Union[str, Path], model_hash: str, seed: int) -> int:
        """
        Enregistrer une évaluation.

        Returns:
            int: Identifiant de l'EvaluationRun créée

        Raises:
            ValidationError: Erreur de base de données
        """
        run = EvaluationRun.from_report(report, str(checkpoint), str(dataset_dir), model_hash, seed)
        self.db.add(run)
        self.safe_commit()
        self.db.refresh(run)
        return run.id

    def history(self, limit: int = 20) -> List[EvaluationRun]:
        """Dernières évaluations enregistrées, la plus récente en premier."""
        limit = self.validator.validate_positive_int(limit, "limit")
        return (self.db.query(EvaluationRun)
                .order_by(EvaluationRun.id.desc())
                .limit(limit)
                .all())
