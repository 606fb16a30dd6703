"""
Service géométrique - Noyaux de distance, voisinage et échantillonnage

Ce module fournit les noyaux géométriques utilisés par tous les autres
modules: distance euclidienne, k plus proches voisins, voisinage par rayon,
échantillonnage par point le plus éloigné (FPS) et normalisation dans le
cube unité.

Architecture:
    1. Distances: calcul exact en float64 par différences de coordonnées
    2. kNN: force brute jusqu'à 4096 points, grille uniforme au-delà
    3. FPS: glouton max-min déterministe depuis un indice de départ
    4. Normalisation: centrage sur la boîte englobante, échelle max absolue

Déterminisme:
    Toutes les égalités de distance sont départagées par l'indice le plus
    petit (tri stable sur des indices croissants). Les deux chemins kNN
    retournent exactement le même résultat.

Concurrence:
    Fonctions pures sur entrées immuables, sans état partagé.

Fichier: src/services/geometry_service.py
"""

import math
from typing import List, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.point_cloud import NeighborIndex, Point3, PointCloud
from src.utils.validators import DataValidator, ValidationError


BRUTE_FORCE_LIMIT = 4096
_DISTANCE_CHUNK = 256


def euclidean_distance(p: Point3, q: Point3) -> float:
    """
    Distance euclidienne entre deux points.

    Args:
        p: Premier point
        q: Second point

    Returns:
        float: ‖p − q‖₂, symétrique en ses arguments
    """
    dx = p.x - q.x
    dy = p.y - q.y
    dz = p.z - q.z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def distances_to(points: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Distances de chaque ligne de points (n, 3) à un point requête (3,)."""
    diff = points - query[None, :]
    return np.sqrt(np.sum(diff * diff, axis=1))


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Matrice des distances euclidiennes entre deux ensembles de points.

    Le calcul se fait par blocs de lignes pour borner la mémoire.

    Args:
        a: Tableau (n, 3)
        b: Tableau (m, 3)

    Returns:
        np.ndarray: Matrice (n, m) float64
    """
    result = np.empty((a.shape[0], b.shape[0]), dtype=np.float64)
    for start in range(0, a.shape[0], _DISTANCE_CHUNK):
        block = a[start:start + _DISTANCE_CHUNK]
        diff = block[:, None, :] - b[None, :, :]
        result[start:start + _DISTANCE_CHUNK] = np.sqrt(np.sum(diff * diff, axis=2))
    return result


def nearest_distances(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pour chaque point de a, distance et indice du plus proche point de b.

    Les égalités sont départagées par l'indice le plus petit dans b.

    Returns:
        Tuple (distances (n,), indices (n,))
    """
    distances = np.empty(a.shape[0], dtype=np.float64)
    indices = np.empty(a.shape[0], dtype=np.int64)
    for start in range(0, a.shape[0], _DISTANCE_CHUNK):
        block = pairwise_distances(a[start:start + _DISTANCE_CHUNK], b)
        nearest = np.argmin(block, axis=1)
        indices[start:start + _DISTANCE_CHUNK] = nearest
        distances[start:start + _DISTANCE_CHUNK] = block[np.arange(block.shape[0]), nearest]
    return distances, indices


def _brute_force_knn(points: np.ndarray, query: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    distances = distances_to(points, query)
    order = np.argsort(distances, kind="stable")[:k]
    return order, distances[order]


def _grid_knn(points: np.ndarray, query: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    kNN exact par grille uniforme.

    Les points sont rangés dans des cellules cubiques de côté h. On élargit
    un cube de cellules autour de la cellule requête jusqu'à ce que le
    k-ième candidat soit strictement plus proche que la distance minimale
    garantie à tout point hors du cube (rayon × h).
    """
    lower = points.min(axis=0)
    extent = float(np.max(points.max(axis=0) - lower))
    cells_per_axis = max(1, int(round((points.shape[0] / 8.0) ** (1.0 / 3.0))))
    cell = extent / cells_per_axis if extent > 0 else 1.0
    cell_coords = np.floor((points - lower) / cell).astype(np.int64)
    query_cell = np.floor((query - lower) / cell).astype(np.int64)
    span = np.max(np.maximum(np.abs(query_cell - cell_coords.min(axis=0)),
                             np.abs(query_cell - cell_coords.max(axis=0))))

    ring = 1
    while True:
        inside = np.all(np.abs(cell_coords - query_cell[None, :]) <= ring, axis=1)
        candidates = np.flatnonzero(inside)
        if candidates.shape[0] >= k:
            distances = distances_to(points[candidates], query)
            ordered = np.argsort(distances, kind="stable")[:k]
            kth = distances[ordered[-1]]
            if kth < ring * cell or ring >= span:
                return candidates[ordered], distances[ordered]
        elif ring >= span:
            return _brute_force_knn(points, query, k)
        ring *= 2


def knn(cloud: PointCloud, query: Point3, k: int) -> NeighborIndex:
    """
    Les k points du nuage les plus proches d'une requête.

    Args:
        cloud: Nuage de recherche
        query: Point requête (externe au nuage)
        k: Nombre de voisins, 1 ≤ k ≤ cloud.count

    Returns:
        NeighborIndex: center_index = -1, voisins par distance croissante,
            égalités départagées par l'indice le plus petit

    Raises:
        ValidationError: Si k est hors bornes
    """
    k = DataValidator.validate_range_int(k, "k", 1, max(cloud.count, 1))
    if cloud.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    indices, distances = knn_indices(cloud.points, query.as_array(), k)
    return NeighborIndex(-1, tuple(int(i) for i in indices),
                         tuple(float(d) for d in distances))


def knn_indices(points: np.ndarray, query: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Variante tableau de knn, choisissant le chemin force brute ou grille."""
    if points.shape[0] <= BRUTE_FORCE_LIMIT:
        return _brute_force_knn(points, query, k)
    return _grid_knn(points, query, k)


def knn_table(cloud: PointCloud, k: int) -> List[NeighborIndex]:
    """
    Table des k plus proches voisins de chaque point, le point lui-même exclu.

    Raises:
        ValidationError: Si k ≥ cloud.count
    """
    k = DataValidator.validate_range_int(k, "k", 1, max(cloud.count - 1, 1))
    if cloud.count < 2:
        raise ValidationError(VALIDATION_MESSAGES["cloud_too_small"].format(
            count=cloud.count, minimum=2))
    table = []
    for center in range(cloud.count):
        indices, distances = knn_indices(cloud.points, cloud.points[center], k + 1)
        keep = indices != center
        # le centre peut être absent si des doublons exacts le précèdent
        indices, distances = indices[keep][:k], distances[keep][:k]
        table.append(NeighborIndex(center, tuple(int(i) for i in indices),
                                   tuple(float(d) for d in distances)))
    return table


def knn_groups(points: np.ndarray, centers: np.ndarray, k: int) -> np.ndarray:
    """
    Indices des k plus proches points pour chaque centre (centre inclus s'il
    appartient à points).

    Args:
        points: Tableau (n, d) de coordonnées ou de caractéristiques
        centers: Tableau (m, d)
        k: Taille de groupe, 1 ≤ k ≤ n

    Returns:
        np.ndarray: Indices (m, k), par distance croissante puis indice
    """
    points = np.asarray(points, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    k = DataValidator.validate_range_int(k, "k", 1, points.shape[0])
    groups = np.empty((centers.shape[0], k), dtype=np.int64)
    for start in range(0, centers.shape[0], _DISTANCE_CHUNK):
        block = centers[start:start + _DISTANCE_CHUNK]
        diff = block[:, None, :] - points[None, :, :]
        distances = np.sum(diff * diff, axis=2)
        order = np.argsort(distances, axis=1, kind="stable")[:, :k]
        groups[start:start + _DISTANCE_CHUNK] = order
    return groups


def radius_neighbors(cloud: PointCloud, center_index: int, r: float) -> List[int]:
    """
    Indices des points à distance ≤ r du centre, centre exclu.

    Args:
        cloud: Nuage de recherche
        center_index: Indice du centre
        r: Rayon strictement positif

    Returns:
        Liste d'indices par ordre croissant

    Raises:
        ValidationError: Si l'indice est invalide ou r ≤ 0
    """
    center_index = DataValidator.validate_index(center_index, cloud.count, "center_index")
    r = DataValidator.validate_positive_real(r, "r")
    distances = distances_to(cloud.points, cloud.points[center_index])
    mask = distances <= r
    mask[center_index] = False
    return [int(i) for i in np.flatnonzero(mask)]


def farthest_point_sample(cloud: PointCloud, m: int, seed_index: int = 0) -> List[int]:
    """
    Échantillonnage glouton par point le plus éloigné.

    Chaque sélection maximise la distance minimale à l'ensemble déjà
    choisi; les égalités vont à l'indice le plus petit. Un point déjà
    choisi n'est jamais repris, même en présence de doublons.

    Args:
        cloud: Nuage source
        m: Nombre de points, 1 ≤ m ≤ cloud.count
        seed_index: Premier point sélectionné

    Returns:
        Liste de m indices dans l'ordre de sélection

    Raises:
        ValidationError: Si m ou seed_index sont hors bornes
    """
    return [int(i) for i in farthest_point_indices(cloud.points, m, seed_index)]


def farthest_point_indices(points: np.ndarray, m: int, seed_index: int = 0) -> np.ndarray:
    """Variante tableau de farthest_point_sample."""
    count = points.shape[0]
    m = DataValidator.validate_range_int(m, "m", 1, max(count, 1))
    if count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    seed_index = DataValidator.validate_index(seed_index, count, "seed_index")
    selected = np.empty(m, dtype=np.int64)
    selected[0] = seed_index
    min_distance = distances_to(points, points[seed_index])
    min_distance[seed_index] = -1.0
    for step in range(1, m):
        pick = int(np.argmax(min_distance))
        selected[step] = pick
        np.minimum(min_distance, distances_to(points, points[pick]), out=min_distance)
        min_distance[pick] = -1.0
    return selected


def normalize_unit_cube(cloud: PointCloud) -> Tuple[PointCloud, float, Point3]:
    """
    Centrer le nuage sur l'origine avec une coordonnée absolue maximale de 1.

    Le centre est celui de la boîte englobante. Un nuage dégénéré
    (étendue nulle) est envoyé à l'origine avec une échelle de 1.

    Returns:
        Tuple (nuage normalisé, échelle, décalage) tel que
        original = normalisé × échelle + décalage

    Raises:
        ValidationError: Si le nuage est vide
    """
    if cloud.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    lower = cloud.points.min(axis=0)
    upper = cloud.points.max(axis=0)
    offset = (lower + upper) / 2.0
    centered = cloud.points - offset[None, :]
    scale = float(np.max(np.abs(centered)))
    if scale == 0.0:
        scale = 1.0
    return PointCloud(centered / scale, cloud.labels), scale, Point3.from_array(offset)


def denormalize(cloud: PointCloud, scale: float, offset: Point3) -> PointCloud:
    """Appliquer la transformation inverse de normalize_unit_cube."""
    return PointCloud(cloud.points * scale + offset.as_array()[None, :], cloud.labels)


def median_spacing(cloud: PointCloud) -> float:
    """Espacement médian au plus proche voisin (hors soi-même)."""
    if cloud.count < 2:
        raise ValidationError(VALIDATION_MESSAGES["cloud_too_small"].format(
            count=cloud.count, minimum=2))
    distances = np.empty(cloud.count, dtype=np.float64)
    for start in range(0, cloud.count, _DISTANCE_CHUNK):
        block = pairwise_distances(cloud.points[start:start + _DISTANCE_CHUNK], cloud.points)
        rows = np.arange(block.shape[0])
        block[rows, rows + start] = np.inf
        distances[start:start + _DISTANCE_CHUNK] = block.min(axis=1)
    return float(np.median(distances))


def directed_hausdorff(source: np.ndarray, target: np.ndarray) -> float:
    """Distance de Hausdorff orientée: max sur source du min vers target."""
    distances, _ = nearest_distances(source, target)
    return float(distances.max())


def nearest_indices_to(points: np.ndarray, query: np.ndarray, count: int,
                       farthest: bool = False) -> np.ndarray:
    """
    Les count indices les plus proches (ou les plus éloignés) d'un point.

    Tri par distance puis par indice croissant dans les deux cas.
    """
    distances = distances_to(points, query)
    if farthest:
        order = np.lexsort((np.arange(points.shape[0]), -distances))
    else:
        order = np.argsort(distances, kind="stable")
    return order[:count]

