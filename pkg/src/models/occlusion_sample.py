"""
Modèles d'échantillons - Formes procédurales et échantillons d'occlusion

Ce module définit la description paramétrique des formes de vérité terrain
et l'échantillon d'occlusion, unité de base de l'entraînement et de
l'évaluation: vérité terrain, scan partiel, partie manquante, interface de
référence et métadonnées de découpe.

Architecture des données:
    - ShapeKind: Familles de formes paramétriques disponibles
    - ShapeSpec: Forme + paramètres + nombre de points + graine
    - Difficulty: Niveaux facile/moyen/difficile (25/50/75% masqués)
    - CutKind: Protocole de découpe (sphère d'occlusion ou point de vue)
    - OcclusionSample: Échantillon complet et étiqueté

Contraintes métier:
    - sample_count ≥ 64 et paramètres strictement positifs
    - Les ensembles partiel et manquant sont disjoints sur la vérité terrain
    - Les indices d'interface référencent le scan partiel

Fichier: src/models/occlusion_sample.py
"""

import enum
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.point_cloud import Point3, PointCloud, PointLabel
from src.utils.validators import DataValidator, ValidationError


class ShapeKind(enum.Enum):
    """Familles de formes procédurales."""
    SPHERE = "sphere"
    BOX = "box"
    CYLINDER = "cylinder"
    TORUS = "torus"
    L_BRACKET = "l_bracket"
    TABLE = "table"
    DISK = "disk"


# Suréchantillonnage des surfaces avant réduction FPS
DEFAULT_OVERSAMPLE = 4

# Paramètres par défaut de chaque famille (dimensions en unités modèle)
DEFAULT_SHAPE_PARAMETERS: Dict[ShapeKind, Dict[str, float]] = {
    ShapeKind.SPHERE: {"radius": 1.0},
    ShapeKind.BOX: {"width": 1.6, "depth": 1.0, "height": 0.6},
    ShapeKind.CYLINDER: {"radius": 0.5, "height": 1.5},
    ShapeKind.TORUS: {"major_radius": 1.0, "minor_radius": 0.3},
    ShapeKind.L_BRACKET: {"length": 1.6, "height": 1.2, "width": 0.8, "thickness": 0.2},
    ShapeKind.TABLE: {"width": 1.6, "depth": 1.0, "height": 1.0,
                      "top_thickness": 0.1, "leg_size": 0.12},
    ShapeKind.DISK: {"radius": 1.0},
}


class Difficulty(enum.Enum):
    """Niveaux de difficulté liés à la fraction de points masqués."""
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"

    @property
    def fraction(self) -> float:
        return {"easy": 0.25, "medium": 0.5, "hard": 0.75}[self.value]

    @property
    def column(self) -> str:
        """Nom de colonne du tableau agrégé (CD-S, CD-M, CD-H)."""
        return {"easy": "CD-S", "medium": "CD-M", "hard": "CD-H"}[self.value]

    @classmethod
    def from_fraction(cls, fraction: float) -> "Difficulty":
        """Niveau le plus proche d'une fraction masquée quelconque."""
        return min(cls, key=lambda level: (abs(level.fraction - fraction), level.fraction))


class CutKind(enum.Enum):
    """Protocole ayant produit l'échantillon."""
    SPHERE = "sphere"
    VIEWPOINT = "viewpoint"


@dataclass(frozen=True)
class ShapeSpec:
    """
    Description d'une forme procédurale.

    Attributes:
        kind: Famille de forme
        parameters: Dimensions propres à la famille (complétées par défaut)
        sample_count: Nombre de points de surface, ≥ 64
        seed: Graine de l'échantillonnage
        oversample: Facteur de suréchantillonnage avant réduction FPS
            (1 désactive la réduction)
    """
    kind: ShapeKind
    parameters: Dict[str, float] = field(default_factory=dict)
    sample_count: int = 2048
    seed: int = 0
    oversample: int = DEFAULT_OVERSAMPLE

    def __post_init__(self):
        kind = DataValidator.validate_enum(self.kind, ShapeKind, "kind")
        object.__setattr__(self, "kind", kind)
        DataValidator.validate_positive_int(self.sample_count, "sample_count", minimum=64)
        DataValidator.validate_positive_int(self.seed, "seed", minimum=0)
        DataValidator.validate_positive_int(self.oversample, "oversample")
        merged = dict(DEFAULT_SHAPE_PARAMETERS[kind])
        for name, value in self.parameters.items():
            if name not in merged:
                raise ValidationError(VALIDATION_MESSAGES["shape_parameter_unknown"].format(
                    name=name, kind=kind.value))
            merged[name] = DataValidator.validate_positive_real(value, name)
        object.__setattr__(self, "parameters", merged)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "parameters": dict(self.parameters),
                "sample_count": self.sample_count, "seed": self.seed,
                "oversample": self.oversample}

    @classmethod
    def from_dict(cls, data: dict) -> "ShapeSpec":
        return cls(kind=data["kind"], parameters=dict(data.get("parameters", {})),
                   sample_count=int(data.get("sample_count", 2048)),
                   seed=int(data.get("seed", 0)),
                   oversample=int(data.get("oversample", DEFAULT_OVERSAMPLE)))


@dataclass(frozen=True, eq=False)
class OcclusionSample:
    """
    Échantillon d'occlusion: une instance d'entraînement ou d'évaluation.

    Attributes:
        ground_truth: Nuage complet (N points)
        partial: Scan partiel P (éventuellement sous-échantillonné)
        missing: Partie manquante M
        interface_truth: Interface de référence T, issue du découpage
        interface_indices: Indices de T dans partial
        occlusion_point: Centre de découpe ou point de vue
        occlusion_radius: Rayon de la découpe: distance de o au dernier
            point retiré dans l'ordre de découpe
        difficulty: Niveau de difficulté
        cut_kind: Protocole de découpe
        shape_id: Identifiant de forme
        seed: Graine de l'échantillon
        partial_indices: Indices du partiel dans ground_truth (avant
            sous-échantillonnage), None pour un échantillon rechargé
        missing_indices: Indices du manquant dans ground_truth
        sample_id: Identifiant lisible, unique dans un jeu de données
    """
    ground_truth: PointCloud
    partial: PointCloud
    missing: PointCloud
    interface_truth: PointCloud
    interface_indices: np.ndarray
    occlusion_point: Optional[Point3]
    occlusion_radius: Optional[float]
    difficulty: Difficulty
    cut_kind: CutKind
    shape_id: int = 0
    seed: int = 0
    partial_indices: Optional[np.ndarray] = None
    missing_indices: Optional[np.ndarray] = None
    sample_id: str = ""

    def __post_init__(self):
        interface_indices = np.asarray(self.interface_indices, dtype=np.int64).reshape(-1)
        if interface_indices.size and (interface_indices.min() < 0
                                       or interface_indices.max() >= self.partial.count):
            raise ValidationError(VALIDATION_MESSAGES["interface_indices_invalid"])
        interface_indices.setflags(write=False)
        object.__setattr__(self, "interface_indices", interface_indices)
        if not self.sample_id:
            object.__setattr__(self, "sample_id", f"shape{self.shape_id:03d}-seed{self.seed}")

    @property
    def missing_fraction(self) -> float:
        return self.missing.count / float(self.ground_truth.count)

    def labeled_ground_truth(self) -> PointCloud:
        """Vérité terrain étiquetée partiel / manquant (si les indices sont connus)."""
        labels = np.full(self.ground_truth.count, int(PointLabel.PARTIAL), dtype=np.int8)
        if self.missing_indices is not None:
            labels[self.missing_indices] = int(PointLabel.MISSING)
        return PointCloud(self.ground_truth.points, labels)

    def describe(self) -> dict:
        """Résumé sérialisable utilisé dans les journaux et les diagnostics."""
        return {
            "sample_id": self.sample_id,
            "shape_id": self.shape_id,
            "seed": self.seed,
            "difficulty": self.difficulty.value,
            "cut_kind": self.cut_kind.value,
            "partial_count": self.partial.count,
            "missing_count": self.missing.count,
            "interface_count": self.interface_truth.count,
            "occlusion_point": None if self.occlusion_point is None else list(self.occlusion_point),
            "occlusion_radius": self.occlusion_radius,
        }
