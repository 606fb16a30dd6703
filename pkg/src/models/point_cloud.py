"""
Modèles géométriques - Points, nuages de points et voisinages

Ce module définit les types de données fondamentaux manipulés par tout le
pipeline de complétion: le point 3D, le nuage de points ordonné avec
étiquettes optionnelles et l'entrée de voisinage produite par les noyaux
de recherche de plus proches voisins.

Architecture des données:
    - Point3: Coordonnées (x, y, z) finies, immuable
    - PointLabel: Rôle d'un point (partiel, manquant, interface, prédit)
    - PointCloud: Tableau numpy (n, 3) float64 en lecture seule
    - NeighborIndex: Résultat d'une requête kNN (indices et distances)

Contraintes:
    - Toutes les coordonnées sont finies (pas de NaN/Inf)
    - Les tableaux internes sont gelés (setflags(write=False)) pour que
      les nuages puissent être partagés entre threads sans copie
    - La géométrie est toujours calculée en 64 bits

Fichier: src/models/point_cloud.py
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.utils.validators import DataValidator, ValidationError


class PointLabel(enum.IntEnum):
    """Rôle d'un point dans un échantillon d'occlusion."""
    PARTIAL = 0
    MISSING = 1
    INTERFACE = 2
    PREDICTED = 3


@dataclass(frozen=True)
class Point3:
    """
    Point 3D en coordonnées modèle sans unité.

    Raises:
        ValidationError: Si une coordonnée n'est pas finie
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        for axis in (self.x, self.y, self.z):
            if not math.isfinite(axis):
                raise ValidationError(VALIDATION_MESSAGES["point_not_finite"].format(
                    point=(self.x, self.y, self.z)))

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Point3":
        """Construire un point depuis une séquence de trois réels."""
        if len(values) != 3:
            raise ValidationError(
                VALIDATION_MESSAGES["point_arity"].format(count=len(values)))
        return cls(float(values[0]), float(values[1]), float(values[2]))

    def as_array(self) -> np.ndarray:
        """Retourner les coordonnées sous forme de vecteur float64."""
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True, eq=False)
class PointCloud:
    """
    Nuage de points ordonné avec étiquettes optionnelles.

    Le nuage encapsule un tableau numpy (n, 3) en float64, gelé en écriture.
    L'ordre des points est significatif: les indices servent de référence
    pour les partitions (partiel/manquant), les interfaces et le
    départage des égalités de distance.

    Attributes:
        points: Tableau (n, 3) float64 en lecture seule
        labels: Tableau (n,) d'entiers PointLabel ou None
    """
    points: np.ndarray
    labels: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        array = DataValidator.validate_points_array(self.points)
        array.setflags(write=False)
        object.__setattr__(self, "points", array)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int8).reshape(-1)
            if labels.shape[0] != array.shape[0]:
                raise ValidationError(VALIDATION_MESSAGES["labels_length"].format(
                    labels=labels.shape[0], points=array.shape[0]))
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_points(cls, points: Iterable[Point3],
                    labels: Optional[Sequence[int]] = None) -> "PointCloud":
        """Construire un nuage depuis une séquence de Point3."""
        rows = [p.as_array() for p in points]
        array = np.vstack(rows) if rows else np.zeros((0, 3))
        return cls(array, labels)

    @classmethod
    def empty(cls) -> "PointCloud":
        return cls(np.zeros((0, 3), dtype=np.float64))

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    def __len__(self) -> int:
        return self.count

    def point(self, index: int) -> Point3:
        """Retourner le point d'indice donné."""
        index = DataValidator.validate_index(index, self.count)
        return Point3.from_array(self.points[index])

    def subset(self, indices: Sequence[int]) -> "PointCloud":
        """Extraire les points aux indices donnés, dans l'ordre fourni."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        labels = None if self.labels is None else self.labels[indices]
        return PointCloud(self.points[indices], labels)

    def with_labels(self, label: PointLabel) -> "PointCloud":
        """Retourner une copie dont tous les points portent la même étiquette."""
        return PointCloud(self.points, np.full(self.count, int(label), dtype=np.int8))

    def concat(self, other: "PointCloud") -> "PointCloud":
        """
        Concaténer deux nuages (self en préfixe).

        Les étiquettes sont conservées si les deux nuages en possèdent.
        """
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = np.concatenate([self.labels, other.labels])
        return PointCloud(np.vstack([self.points, other.points]), labels)

    def single_precision(self) -> "PointCloud":
        """Arrondir les coordonnées aux valeurs représentables en float32."""
        return PointCloud(self.points.astype(np.float32).astype(np.float64), self.labels)

    def equals(self, other: "PointCloud") -> bool:
        """Égalité exacte des coordonnées (les étiquettes sont ignorées)."""
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points))


@dataclass(frozen=True)
class NeighborIndex:
    """
    Entrée de voisinage produite par les noyaux kNN.

    Attributes:
        center_index: Indice du centre dans le nuage, -1 pour une requête
            externe au nuage
        neighbor_indices: Indices des k voisins, par distance croissante
        neighbor_distances: Distances euclidiennes correspondantes
    """
    center_index: int
    neighbor_indices: Tuple[int, ...]
    neighbor_distances: Tuple[float, ...]

    def __post_init__(self):
        DataValidator.validate_same_length(
            self.neighbor_indices, self.neighbor_distances,
            "neighbor_indices", "neighbor_distances")
        if self.center_index in self.neighbor_indices:
            raise ValidationError(VALIDATION_MESSAGES["neighbor_is_center"].format(
                index=self.center_index))
        distances = self.neighbor_distances
        if any(distances[i] > distances[i + 1] for i in range(len(distances) - 1)):
            raise ValidationError(VALIDATION_MESSAGES["neighbors_unsorted"])

    @property
    def k(self) -> int:
        return len(self.neighbor_indices)
