"""
Service d'ablation - Études comparatives à échelle desk

Trois études sont disponibles:

Études:
    - interface: définition de l'interface et génération grossière
        * intersection: interface d'occlusion, déplacement par point
        * downsampled: interface FPS du partiel, déplacement par point
        * global_feature: interface d'occlusion, vecteur global
    - ssp: nombre d'étages SSP (0 à 3 par défaut)
    - delta: rappel et faux positifs de la détection de bords sur des
      disques unité, pour plusieurs seuils δ

Les études d'entraînement suivent le protocole de sur-apprentissage: la
valeur retenue est le CD-ℓ2 final entre M′ et la partie manquante sur
les échantillons d'entraînement, pour chaque graine.

Fichier: src/services/ablation_service.py
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from src.models.interface import InterfaceConfig, InterfaceMode
from src.models.model_config import CoarseMode, ModelConfig, TrainConfig
from src.models.occlusion_sample import OcclusionSample, ShapeKind, ShapeSpec
from src.services.interface_service import localize_by_edges
from src.services.scan_service import generate_shape
from src.services.training_service import TrainingService


DEFAULT_DELTAS = (0.3, 0.4, 0.5, 0.6, 0.7)
DEFAULT_STAGES = (0, 1, 2, 3)
# bandes radiales du disque unité: bord vrai et intérieur certain
BOUNDARY_RADIUS = 0.93
INTERIOR_RADIUS = 0.85


@dataclass
class AblationRow:
    """Résultat d'une variante pour une graine."""
    variant: str
    seed: int
    value: float

    def to_dict(self) -> dict:
        return {"variant": self.variant, "seed": self.seed, "value": self.value}


def summarize(rows: Sequence[AblationRow]) -> Dict[str, float]:
    """Moyenne de la valeur par variante, dans l'ordre d'apparition."""
    grouped: Dict[str, List[float]] = {}
    for row in rows:
        grouped.setdefault(row.variant, []).append(row.value)
    return {variant: float(np.mean(values)) for variant, values in grouped.items()}


def wins(rows: Sequence[AblationRow], better: str, worse: str) -> int:
    """Nombre de graines où la variante better atteint une valeur ≤ celle de worse."""
    by_seed: Dict[int, Dict[str, float]] = {}
    for row in rows:
        by_seed.setdefault(row.seed, {})[row.variant] = row.value
    return sum(1 for values in by_seed.values()
               if better in values and worse in values and values[better] <= values[worse])


def _train_variant(model_config: ModelConfig, interface_config: InterfaceConfig,
                   train_config: TrainConfig, samples: Sequence[OcclusionSample]) -> float:
    service = TrainingService(model_config, interface_config, train_config)
    result = service.train(samples)
    return service.missing_chamfer(result.model, samples)


def interface_variants(model_config: ModelConfig,
                       interface_config: InterfaceConfig) -> List[Tuple[str, ModelConfig, InterfaceConfig]]:
    occlusion = InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=model_config.n_t,
                                radius_r=interface_config.radius_r, delta=interface_config.delta)
    downsampled = InterfaceConfig(InterfaceMode.DOWNSAMPLED, n_t=model_config.n_t)
    displacement = model_config.with_changes(coarse_mode=CoarseMode.INTERFACE_DISPLACEMENT)
    global_feature = model_config.with_changes(coarse_mode=CoarseMode.GLOBAL_FEATURE)
    return [
        ("intersection", displacement, occlusion),
        ("downsampled", displacement, downsampled),
        ("global_feature", global_feature, occlusion),
    ]


def interface_study(model_config: ModelConfig, interface_config: InterfaceConfig,
                    train_config: TrainConfig, samples: Sequence[OcclusionSample],
                    seeds: Iterable[int]) -> List[AblationRow]:
    """Comparer les définitions d'interface et les modes de génération grossière."""
    rows = []
    for seed in seeds:
        seeded = train_config.with_changes(seed=seed)
        for name, model_cfg, interface_cfg in interface_variants(model_config, interface_config):
            rows.append(AblationRow(name, seed, _train_variant(model_cfg, interface_cfg, seeded, samples)))
    return rows


def ssp_study(model_config: ModelConfig, interface_config: InterfaceConfig,
              train_config: TrainConfig, samples: Sequence[OcclusionSample],
              seeds: Iterable[int], stages: Sequence[int] = DEFAULT_STAGES) -> List[AblationRow]:
    """Comparer les nombres d'étages SSP."""
    rows = []
    for seed in seeds:
        seeded = train_config.with_changes(seed=seed)
        for count in stages:
            rows.append(AblationRow(f"ssp{count}", seed, _train_variant(
                model_config.with_changes(ssp_stages=count), interface_config, seeded, samples)))
    return rows


def edge_quality(delta: float, seed: int, point_count: int = 1000,
                 radius_r: float = 0.15) -> Tuple[float, float]:
    """
    Rappel du bord et taux de faux positifs intérieurs sur un disque unité.

    Returns:
        Tuple (rappel parmi les points à distance ≥ 0.93 du centre,
        faux positifs parmi les points à distance < 0.85)
    """
    disk = generate_shape(ShapeSpec(ShapeKind.DISK, sample_count=point_count, seed=seed))
    cfg = InterfaceConfig(InterfaceMode.EDGE_DETECTION, radius_r=radius_r, delta=delta)
    marked = np.zeros(disk.count, dtype=bool)
    marked[localize_by_edges(disk, cfg).indices] = True
    rho = np.hypot(disk.points[:, 0], disk.points[:, 1])
    boundary = rho >= BOUNDARY_RADIUS
    interior = rho < INTERIOR_RADIUS
    recall = float(marked[boundary].mean()) if boundary.any() else 0.0
    false_positive = float(marked[interior].mean()) if interior.any() else 0.0
    return recall, false_positive


def delta_study(seeds: Iterable[int], deltas: Sequence[float] = DEFAULT_DELTAS,
                point_count: int = 1000, radius_r: float = 0.15) -> List[dict]:
    """Rappel et faux positifs moyens par seuil δ."""
    seeds = list(seeds)
    results = []
    for delta in deltas:
        scores = [edge_quality(delta, seed, point_count, radius_r) for seed in seeds]
        results.append({
            "delta": delta,
            "recall": float(np.mean([score[0] for score in scores])),
            "false_positive_rate": float(np.mean([score[1] for score in scores])),
        })
    return results
