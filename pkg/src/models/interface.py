"""
Modèles de l'interface - Configuration et résultat de la localisation

L'interface est l'ensemble des points du scan partiel situés sur la
frontière partagée avec la partie manquante. Ce module définit la
configuration de sa localisation et le résultat produit.

Modes de localisation:
    - occlusion_point: point d'occlusion connu, sélection des N_T plus
      proches (ou plus éloignés pour une découpe par point de vue)
    - edge_detection: point d'occlusion inconnu, détection de bords par
      écarts angulaires projetés
    - downsampled: points du partiel réduits par FPS (variante d'ablation
      sans notion d'intersection)

Fichier: src/models/interface.py
"""

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.point_cloud import PointCloud
from src.utils.validators import DataValidator, ValidationError


class InterfaceMode(enum.Enum):
    OCCLUSION_POINT = "occlusion_point"
    EDGE_DETECTION = "edge_detection"
    DOWNSAMPLED = "downsampled"

    @classmethod
    def from_cli(cls, value: str) -> "InterfaceMode":
        """Accepter les alias courts de la ligne de commande (occlusion, edges)."""
        aliases = {"occlusion": cls.OCCLUSION_POINT, "edges": cls.EDGE_DETECTION}
        return aliases.get(str(value).lower()) or DataValidator.validate_enum(value, cls, "mode")


class ProjectionPlane(enum.Enum):
    """Plans de projection et axes conservés."""
    XY = (0, 1)
    YZ = (1, 2)
    XZ = (0, 2)


@dataclass(frozen=True)
class InterfaceConfig:
    """
    Configuration de la localisation d'interface.

    Attributes:
        mode: Mode de localisation
        n_t: Taille de l'interface (mode occlusion, et taille cible ailleurs)
        radius_r: Rayon du voisinage en détection de bords
        delta: Seuil cosinus δ dans (0, 1)
        min_neighbors: Seuil de dégénérescence (frontière clairsemée)
    """
    mode: InterfaceMode = InterfaceMode.OCCLUSION_POINT
    n_t: int = 64
    radius_r: float = 0.1
    delta: float = 0.5
    min_neighbors: int = 3

    def __post_init__(self):
        object.__setattr__(self, "mode", InterfaceMode.from_cli(self.mode)
                           if not isinstance(self.mode, InterfaceMode) else self.mode)
        object.__setattr__(self, "n_t", DataValidator.validate_positive_int(self.n_t, "n_t"))
        object.__setattr__(self, "radius_r",
                           DataValidator.validate_positive_real(self.radius_r, "radius_r"))
        object.__setattr__(self, "delta",
                           DataValidator.validate_open_unit_interval(self.delta, "delta"))
        object.__setattr__(self, "min_neighbors", DataValidator.validate_positive_int(
            self.min_neighbors, "min_neighbors", minimum=0))

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "n_t": self.n_t, "radius_r": self.radius_r,
                "delta": self.delta, "min_neighbors": self.min_neighbors}

    @classmethod
    def from_dict(cls, data: dict) -> "InterfaceConfig":
        defaults = cls()
        return cls(mode=data.get("mode", defaults.mode),
                   n_t=int(data.get("n_t", defaults.n_t)),
                   radius_r=float(data.get("radius_r", defaults.radius_r)),
                   delta=float(data.get("delta", defaults.delta)),
                   min_neighbors=int(data.get("min_neighbors", defaults.min_neighbors)))


@dataclass(frozen=True, eq=False)
class InterfaceResult:
    """
    Interface localisée dans un scan partiel.

    Attributes:
        indices: Indices dans le scan partiel (distincts sauf si padded)
        points: Points correspondants, points[i] == partial[indices[i]]
        mode_used: Mode ayant produit le résultat
        padded: Vrai si des points ont été répétés pour atteindre N_T
    """
    indices: np.ndarray
    points: PointCloud
    mode_used: InterfaceMode
    padded: bool = False

    @classmethod
    def from_indices(cls, partial: PointCloud, indices: Sequence[int],
                     mode: InterfaceMode, padded: bool = False) -> "InterfaceResult":
        """
        Construire un résultat en vérifiant la validité des indices.

        Raises:
            ValidationError: Indices hors bornes, ou répétés sans padding
        """
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        if indices.size and (indices.min() < 0 or indices.max() >= partial.count):
            raise ValidationError(VALIDATION_MESSAGES["interface_indices_invalid"])
        if not padded and np.unique(indices).size != indices.size:
            raise ValidationError(VALIDATION_MESSAGES["interface_indices_repeated"])
        indices.setflags(write=False)
        return cls(indices, partial.subset(indices), mode, padded)

    @property
    def count(self) -> int:
        return int(self.indices.shape[0])
