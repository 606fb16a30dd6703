"""
Modèles de rapports d'évaluation - Métriques par échantillon et agrégats

Ce module définit les enregistrements produits par l'évaluation: le
rapport d'un échantillon (Chamfer ℓ1/ℓ2, F-Score, Fidelity, MMD) et le
rapport agrégé par niveau de difficulté.

Conventions d'affichage:
    - Les distances de Chamfer sont affichées multipliées par scale_factor
      (1000 par défaut)
    - Colonnes principales: CD-S, CD-M, CD-H, CD-Avg (CD-ℓ2) et F1
    - Bloc secondaire: CD-ℓ1, Fidelity, MMD
    - CD-Avg est la moyenne des moyennes par difficulté disponibles

Sérialisation:
    - to_text(): enregistrement clé=valeur à plat, une ligne par champ
    - to_dict(): document JSON (valeurs brutes, non multipliées)

Fichier: src/models/metric_report.py
"""

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from src.config.messages import VALIDATION_MESSAGES
from src.models.occlusion_sample import Difficulty
from src.utils.validators import DataValidator, ValidationError


REPORT_COLUMNS = ("CD-S", "CD-M", "CD-H", "CD-Avg", "F1")
SECONDARY_COLUMNS = ("CD-l1", "Fidelity", "MMD")


@dataclass(frozen=True)
class MetricReport:
    """
    Métriques d'un échantillon évalué.

    Attributes:
        cd_l1: Chamfer ℓ1 (forme moyennée avec ½)
        cd_l2: Chamfer ℓ2 (somme des moyennes des carrés)
        fscore: F-Score au seuil configuré, dans [0, 1]
        fidelity: Distance moyenne de l'entrée à la sortie
        mmd: Distance minimale à la bibliothèque de référence
        scale_factor: Multiplicateur d'affichage des distances
        sample_id: Identifiant de l'échantillon évalué
        difficulty: Niveau de difficulté de l'échantillon
    """
    cd_l1: Optional[float] = None
    cd_l2: Optional[float] = None
    fscore: Optional[float] = None
    fidelity: Optional[float] = None
    mmd: Optional[float] = None
    scale_factor: float = 1000.0
    sample_id: str = ""
    difficulty: Optional[Difficulty] = None

    def __post_init__(self):
        for name in ("cd_l1", "cd_l2", "fscore", "fidelity", "mmd"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, DataValidator.validate_non_negative_real(value, name))
        if self.fscore is not None and self.fscore > 1.0:
            raise ValidationError(VALIDATION_MESSAGES["fscore_range"].format(value=self.fscore))
        DataValidator.validate_positive_real(self.scale_factor, "scale_factor")
        if self.difficulty is not None:
            object.__setattr__(self, "difficulty",
                               DataValidator.validate_enum(self.difficulty, Difficulty, "difficulty"))

    def scaled(self, name: str) -> Optional[float]:
        """Valeur d'affichage: distances multipliées, F-Score inchangé."""
        value = getattr(self, name)
        if value is None or name == "fscore":
            return value
        return value * self.scale_factor

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "difficulty": None if self.difficulty is None else self.difficulty.value,
            "cd_l1": self.cd_l1,
            "cd_l2": self.cd_l2,
            "fscore": self.fscore,
            "fidelity": self.fidelity,
            "mmd": self.mmd,
            "scale_factor": self.scale_factor,
        }

    def to_text(self) -> str:
        """Enregistrement texte clé=valeur (champs absents omis)."""
        return "\n".join(f"{key}={value}" for key, value in self.to_dict().items()
                         if value is not None and value != "")


def _mean(values: Iterable[Optional[float]]) -> Optional[float]:
    present = [value for value in values if value is not None]
    return sum(present) / len(present) if present else None


@dataclass(frozen=True)
class AggregateReport:
    """
    Rapport agrégé sur un jeu d'évaluation.

    Attributes:
        reports: Rapports par échantillon, dans l'ordre du jeu de données
        scale_factor: Multiplicateur d'affichage des distances
    """
    reports: List[MetricReport] = field(default_factory=list)
    scale_factor: float = 1000.0

    @property
    def sample_count(self) -> int:
        return len(self.reports)

    def difficulty_means(self) -> Dict[Difficulty, float]:
        """Moyenne du CD-ℓ2 par difficulté présente."""
        means = {}
        for level in Difficulty:
            value = _mean(r.cd_l2 for r in self.reports if r.difficulty is level)
            if value is not None:
                means[level] = value
        return means

    def columns(self) -> Dict[str, Optional[float]]:
        """
        Valeurs brutes des colonnes principales et secondaires.

        Un rapport sans difficulté n'entre que dans CD-Avg via la moyenne
        globale, lorsque aucune difficulté n'est renseignée.
        """
        per_level = self.difficulty_means()
        if per_level:
            average = sum(per_level.values()) / len(per_level)
        else:
            average = _mean(r.cd_l2 for r in self.reports)
        return {
            "CD-S": per_level.get(Difficulty.EASY),
            "CD-M": per_level.get(Difficulty.MEDIUM),
            "CD-H": per_level.get(Difficulty.HARD),
            "CD-Avg": average,
            "F1": _mean(r.fscore for r in self.reports),
            "CD-l1": _mean(r.cd_l1 for r in self.reports),
            "Fidelity": _mean(r.fidelity for r in self.reports),
            "MMD": _mean(r.mmd for r in self.reports),
        }

    def display_columns(self) -> Dict[str, Optional[float]]:
        """Colonnes avec les distances multipliées par scale_factor."""
        return {name: (value if value is None or name == "F1" else value * self.scale_factor)
                for name, value in self.columns().items()}

    def to_dict(self) -> dict:
        return {
            "scale_factor": self.scale_factor,
            "sample_count": self.sample_count,
            "columns": self.columns(),
            "samples": [report.to_dict() for report in self.reports],
        }

    def to_json(self) -> str:
        """Document JSON déterministe (clés triées)."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
