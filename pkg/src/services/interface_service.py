"""
Service de détection d'interface - Localisation de la frontière partiel/manquant

Ce module localise l'interface d'un scan partiel, c'est-à-dire les points
qui bordent la région manquante, selon deux régimes:

Régimes de localisation:
    1. Point d'occlusion connu: les N_T points du partiel les plus proches
       du point d'occlusion (ou les plus éloignés du point de vue pour une
       découpe par point de vue, ceux qui bordent la découpe)
    2. Point d'occlusion inconnu: détection de bords par écart angulaire
       dans les trois plans de projection

Règle de détection de bords:
    Pour chaque point p, on forme les vecteurs u_j = q_j − p vers ses
    voisins dans le rayon r. Dans chaque plan (xy, yz, xz), les directions
    projetées sont triées par angle et on mesure le plus grand écart
    angulaire γ entre deux directions consécutives. Le plan vote « bord »
    si cos(min(γ, π)) ≤ δ, c'est-à-dire si un secteur vide d'ouverture au
    moins arccos(δ) entoure p. Un plan sans direction projetée non nulle
    s'abstient. Le point est marqué si tous les plans non abstentionnistes
    votent bord, ou s'il a moins de min_neighbors voisins (frontière
    clairsemée).

    La lecture par paires (seuil sur chaque angle entre deux voisins) est
    écartée: elle marque tous les points intérieurs des surfaces courbes.

Taille fixe:
    Le résultat de la détection de bords est de taille variable; la
    fonction fit_interface_size le ramène à N_T (FPS, ou répétition
    cyclique si trop peu de bords, ou FPS du partiel si aucun).

Concurrence:
    Fonctions pures sur nuages immuables.

Fichier: src/services/interface_service.py
"""

import math
from typing import Optional

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.interface import (InterfaceConfig, InterfaceMode, InterfaceResult,
                                  ProjectionPlane)
from src.models.occlusion_sample import CutKind, OcclusionSample
from src.models.point_cloud import Point3, PointCloud
from src.services.geometry_service import (distances_to, farthest_point_indices,
                                           nearest_indices_to)
from src.utils.validators import DataValidator, ValidationError


# Norme relative en dessous de laquelle une projection est dégénérée
_DEGENERATE_TOLERANCE = 1e-12


def projected_angle_cosine(u: Point3, v: Point3, plane: ProjectionPlane) -> Optional[float]:
    """
    Cosinus de l'angle entre deux vecteurs projetés sur un plan de coordonnées.

    Args:
        u: Premier vecteur
        v: Second vecteur
        plane: Plan de projection (xy, yz ou xz)

    Returns:
        float: Cosinus dans [−1, 1], ou None si une projection est de
            longueur nulle (paire non contraignante)
    """
    plane = DataValidator.validate_enum(plane, ProjectionPlane, "plane")
    first, second = plane.value
    u2 = np.array([u.as_array()[first], u.as_array()[second]])
    v2 = np.array([v.as_array()[first], v.as_array()[second]])
    norm_u = float(np.hypot(*u2))
    norm_v = float(np.hypot(*v2))
    if norm_u == 0.0 or norm_v == 0.0:
        return None
    cosine = float(np.dot(u2, v2)) / (norm_u * norm_v)
    return min(1.0, max(-1.0, cosine))


def largest_angular_gap(directions: np.ndarray) -> float:
    """
    Plus grand écart angulaire entre directions 2D consécutives autour de l'origine.

    Args:
        directions: Tableau (k, 2) de directions non nulles, k ≥ 1

    Returns:
        float: Écart dans (0, 2π]; 2π pour une seule direction
    """
    angles = np.sort(np.arctan2(directions[:, 1], directions[:, 0]))
    if angles.shape[0] == 1:
        return 2.0 * math.pi
    gaps = np.diff(angles)
    wrap = 2.0 * math.pi - (angles[-1] - angles[0])
    return float(max(gaps.max(), wrap))


def _plane_votes(vectors: np.ndarray, radius: float, delta: float) -> list:
    """Vote de chaque plan: True (bord), False (intérieur), None (abstention)."""
    votes = []
    for plane in ProjectionPlane:
        projected = vectors[:, list(plane.value)]
        norms = np.hypot(projected[:, 0], projected[:, 1])
        projected = projected[norms > _DEGENERATE_TOLERANCE * radius]
        if projected.shape[0] == 0:
            votes.append(None)
            continue
        gap = largest_angular_gap(projected)
        votes.append(math.cos(min(gap, math.pi)) <= delta)
    return votes


def is_edge_point(partial: PointCloud, index: int, cfg: InterfaceConfig) -> bool:
    """Appliquer la règle de bord à un point du scan partiel."""
    center = partial.points[index]
    distances = distances_to(partial.points, center)
    mask = distances <= cfg.radius_r
    mask[index] = False
    if int(mask.sum()) < cfg.min_neighbors:
        return True
    votes = [vote for vote in _plane_votes(partial.points[mask] - center, cfg.radius_r, cfg.delta)
             if vote is not None]
    return all(votes)


def localize_by_occlusion(partial: PointCloud, occlusion_point: Point3, n_t: int) -> InterfaceResult:
    """
    Les n_t points du partiel les plus proches du point d'occlusion.

    Args:
        partial: Scan partiel
        occlusion_point: Point d'occlusion connu
        n_t: Taille de l'interface, ≤ partial.count

    Returns:
        InterfaceResult: Indices par distance croissante, égalités
            départagées par l'indice le plus petit

    Raises:
        ValidationError: Si n_t dépasse la taille du partiel
    """
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, max(partial.count, 1))
    if partial.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    indices = nearest_indices_to(partial.points, occlusion_point.as_array(), n_t)
    return InterfaceResult.from_indices(partial, indices, InterfaceMode.OCCLUSION_POINT)


def localize_by_viewpoint(partial: PointCloud, viewpoint: Point3, n_t: int) -> InterfaceResult:
    """
    Les n_t points du partiel les plus éloignés du point de vue.

    Pour une découpe par point de vue, ces points bordent la région retirée.
    """
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, max(partial.count, 1))
    if partial.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    indices = nearest_indices_to(partial.points, viewpoint.as_array(), n_t, farthest=True)
    return InterfaceResult.from_indices(partial, indices, InterfaceMode.OCCLUSION_POINT)


def localize_by_edges(partial: PointCloud, cfg: InterfaceConfig) -> InterfaceResult:
    """
    Détecter les points de bord d'un scan partiel.

    Args:
        partial: Scan partiel non vide
        cfg: Configuration en mode edge_detection

    Returns:
        InterfaceResult: Indices marqués, par ordre croissant (taille variable)

    Raises:
        ValidationError: Nuage vide ou configuration dans un autre mode
    """
    if cfg.mode is not InterfaceMode.EDGE_DETECTION:
        raise ValidationError(VALIDATION_MESSAGES["interface_mode_mismatch"].format(
            expected=InterfaceMode.EDGE_DETECTION.value, actual=cfg.mode.value))
    if partial.count == 0:
        raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])
    marked = [index for index in range(partial.count) if is_edge_point(partial, index, cfg)]
    return InterfaceResult.from_indices(partial, marked, InterfaceMode.EDGE_DETECTION)


def localize_by_downsampling(partial: PointCloud, n_t: int) -> InterfaceResult:
    """Interface de substitution sans notion de frontière: FPS du partiel (ablation)."""
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, max(partial.count, 1))
    indices = farthest_point_indices(partial.points, n_t, 0)
    return InterfaceResult.from_indices(partial, indices, InterfaceMode.DOWNSAMPLED)


def fit_interface_size(partial: PointCloud, result: InterfaceResult, n_t: int) -> InterfaceResult:
    """
    Ramener une interface de taille variable à exactement n_t points.

    Args:
        partial: Scan partiel d'origine
        result: Interface détectée
        n_t: Taille cible, ≤ partial.count

    Returns:
        InterfaceResult: FPS parmi les points détectés s'ils sont trop
            nombreux, répétition cyclique s'ils sont trop peu (padded=True),
            FPS du partiel entier si aucun point n'a été détecté
    """
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, max(partial.count, 1))
    if result.count == n_t:
        return result
    if result.count == 0:
        fallback = localize_by_downsampling(partial, n_t)
        return InterfaceResult.from_indices(partial, fallback.indices, result.mode_used)
    if result.count > n_t:
        chosen = farthest_point_indices(result.points.points, n_t, 0)
        return InterfaceResult.from_indices(partial, result.indices[chosen], result.mode_used)
    repeats = np.resize(result.indices, n_t)
    return InterfaceResult.from_indices(partial, repeats, result.mode_used, padded=True)


def localize_sample(sample: OcclusionSample, cfg: InterfaceConfig) -> InterfaceResult:
    """
    Localiser l'interface d'un échantillon selon la configuration.

    En mode occlusion_point, la règle suit le protocole de découpe de
    l'échantillon (plus proches du centre de découpe, plus éloignés du
    point de vue). Les autres modes produisent toujours cfg.n_t points.

    Raises:
        ValidationError: Mode occlusion sans point d'occlusion connu
    """
    if cfg.mode is InterfaceMode.OCCLUSION_POINT:
        if sample.occlusion_point is None:
            raise ValidationError(VALIDATION_MESSAGES["occlusion_point_required"])
        if sample.cut_kind is CutKind.VIEWPOINT:
            return localize_by_viewpoint(sample.partial, sample.occlusion_point, cfg.n_t)
        return localize_by_occlusion(sample.partial, sample.occlusion_point, cfg.n_t)
    if cfg.mode is InterfaceMode.EDGE_DETECTION:
        return fit_interface_size(sample.partial, localize_by_edges(sample.partial, cfg), cfg.n_t)
    return localize_by_downsampling(sample.partial, cfg.n_t)
