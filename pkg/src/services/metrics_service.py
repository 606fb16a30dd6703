"""
Service de métriques - Chamfer, F-Score, Fidelity et MMD

Ce module implémente les métriques d'évaluation de la complétion:

Métriques:
    1. chamfer_l1: ½·(moyenne des distances a→b + moyenne b→a), non carrées
    2. chamfer_l2: somme des moyennes des distances carrées dans les deux sens
    3. f_score: moyenne harmonique précision/rappel à un seuil (≤ seuil)
    4. fidelity: distance moyenne de chaque point d'entrée à la sortie
    5. mmd: Chamfer ℓ2 minimal vers une bibliothèque de référence

Toutes les distances de plus proche voisin sont calculées exactement en
force brute par blocs (float64), ce qui donne les mêmes valeurs qu'une
double boucle naïve.

Concurrence:
    Fonctions pures; evaluate_many répartit les échantillons sur un pool
    de threads et restitue les rapports dans l'ordre d'entrée.

Fichier: src/services/metrics_service.py
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.config.messages import VALIDATION_MESSAGES
from src.models.metric_report import MetricReport
from src.models.occlusion_sample import Difficulty
from src.models.point_cloud import PointCloud
from src.services.geometry_service import nearest_distances
from src.utils.validators import DataValidator, ValidationError


DEFAULT_FSCORE_THRESHOLD = 0.01


def _require_points(*clouds: PointCloud) -> None:
    for cloud in clouds:
        if cloud.count == 0:
            raise ValidationError(VALIDATION_MESSAGES["cloud_empty"])


def _two_way(a: PointCloud, b: PointCloud) -> Tuple[np.ndarray, np.ndarray]:
    _require_points(a, b)
    a_to_b, _ = nearest_distances(a.points, b.points)
    b_to_a, _ = nearest_distances(b.points, a.points)
    return a_to_b, b_to_a


def chamfer_l1(a: PointCloud, b: PointCloud) -> float:
    """
    Distance de Chamfer ℓ1 (distances non carrées, moyennée avec ½).

    Raises:
        ValidationError: Si un nuage est vide
    """
    a_to_b, b_to_a = _two_way(a, b)
    return 0.5 * (float(a_to_b.mean()) + float(b_to_a.mean()))


def chamfer_l2(a: PointCloud, b: PointCloud) -> float:
    """
    Distance de Chamfer ℓ2: somme des moyennes des distances carrées.

    Raises:
        ValidationError: Si un nuage est vide
    """
    a_to_b, b_to_a = _two_way(a, b)
    return float(np.mean(a_to_b ** 2)) + float(np.mean(b_to_a ** 2))


def precision_recall(pred: PointCloud, gt: PointCloud, threshold: float) -> Tuple[float, float]:
    """Précision et rappel au seuil (distance ≤ seuil)."""
    threshold = DataValidator.validate_positive_real(threshold, "threshold")
    pred_to_gt, gt_to_pred = _two_way(pred, gt)
    return float(np.mean(pred_to_gt <= threshold)), float(np.mean(gt_to_pred <= threshold))


def f_score(pred: PointCloud, gt: PointCloud, threshold: float = DEFAULT_FSCORE_THRESHOLD) -> float:
    """
    F-Score entre prédiction et vérité terrain.

    Les nuages sont supposés normalisés dans le cube unité; le seuil par
    défaut 0.01 correspond au F-Score@1%.

    Returns:
        float: 2PR/(P+R), 0 si P+R = 0
    """
    precision, recall = precision_recall(pred, gt, threshold)
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def fidelity(input_partial: PointCloud, output: PointCloud) -> float:
    """Distance moyenne de chaque point d'entrée à son plus proche point de sortie."""
    _require_points(input_partial, output)
    distances, _ = nearest_distances(input_partial.points, output.points)
    return float(distances.mean())


def mmd(pred: PointCloud, reference_library: Sequence[PointCloud]) -> float:
    """
    Minimal Matching Distance: Chamfer ℓ2 minimal vers la bibliothèque.

    Raises:
        ValidationError: Si la bibliothèque est vide
    """
    if not reference_library:
        raise ValidationError(VALIDATION_MESSAGES["library_empty"])
    return min(chamfer_l2(pred, reference) for reference in reference_library)


def evaluate_prediction(pred: PointCloud, gt: PointCloud, partial: Optional[PointCloud] = None,
                        library: Optional[Sequence[PointCloud]] = None,
                        threshold: float = DEFAULT_FSCORE_THRESHOLD,
                        sample_id: str = "", difficulty: Optional[Difficulty] = None,
                        scale_factor: float = 1000.0) -> MetricReport:
    """
    Calculer toutes les métriques disponibles pour une prédiction.

    Args:
        pred: Nuage prédit (complet)
        gt: Vérité terrain complète
        partial: Scan d'entrée, requis pour la Fidelity
        library: Bibliothèque de référence, requise pour la MMD
        threshold: Seuil du F-Score
        sample_id: Identifiant reporté dans le rapport
        difficulty: Difficulté reportée dans le rapport
        scale_factor: Multiplicateur d'affichage

    Returns:
        MetricReport: Métriques brutes (non multipliées)
    """
    return MetricReport(
        cd_l1=chamfer_l1(pred, gt),
        cd_l2=chamfer_l2(pred, gt),
        fscore=f_score(pred, gt, threshold),
        fidelity=None if partial is None else fidelity(partial, pred),
        mmd=None if library is None else mmd(pred, library),
        scale_factor=scale_factor,
        sample_id=sample_id,
        difficulty=difficulty,
    )


def evaluate_many(jobs: Sequence, evaluate: Callable[..., MetricReport],
                  workers: Optional[int] = None) -> List[MetricReport]:
    """
    Évaluer une série d'échantillons en parallèle.

    Args:
        jobs: Arguments de chaque évaluation
        evaluate: Fonction appliquée à chaque élément de jobs
        workers: Nombre de threads (défaut: settings.EVAL_WORKERS)

    Returns:
        Liste des rapports dans l'ordre de jobs
    """
    workers = DataValidator.validate_positive_int(
        settings.EVAL_WORKERS if workers is None else workers, "workers")
    if workers == 1 or len(jobs) <= 1:
        return [evaluate(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, jobs))
