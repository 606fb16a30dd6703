"""
Service de jeux de données - Génération et persistance des échantillons

Ce module applique le protocole d'un DatasetDescriptor et persiste le
résultat sur disque:

Protocole:
    - split test: pour chaque forme, les 8 points de vue fixes × chaque
      difficulté du descripteur
    - split train: pour chaque forme, train_views points de vue aléatoires,
      la difficulté parcourant les niveaux du descripteur
    - découpe sphère: le centre de découpe est le point de surface le plus
      proche du point de vue, puis le partiel est réduit par FPS
    - chaque graine dérive de (graine globale, forme, split, vue, difficulté)

Disposition sur disque:
    <dossier>/dataset.json              descripteur et métadonnées par échantillon
    <dossier>/<split>/<id>_partial.ply  partiel (interface en magenta)
    <dossier>/<split>/<id>_missing.ply  partie manquante
    <dossier>/<split>/<id>_gt.ply       vérité terrain étiquetée

L'écriture est déterministe: un même manifeste produit des fichiers
identiques à l'octet près.

Fichier: src/services/dataset_service.py
"""

import json
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from src.config.messages import FILE_MESSAGES, VALIDATION_MESSAGES
from src.models.experiment import DatasetDescriptor
from src.models.occlusion_sample import CutKind, Difficulty, OcclusionSample
from src.models.point_cloud import Point3, PointCloud, PointLabel
from src.services.geometry_service import nearest_indices_to
from src.services.scan_service import (cut_sphere, cut_viewpoint, downsample_sample,
                                       fixed_test_viewpoints, normalized_shape, random_viewpoint,
                                       reference_library)
from src.utils.point_io import PointFileError, read_ply, write_ply
from src.utils.seed_utils import derive_seed
from src.utils.validators import ValidationError


SPLITS = ("train", "test")
MANIFEST_NAME = "dataset.json"
_SPLIT_KEYS = {"train": 0, "test": 1}
_LIBRARY_KEY = 2


def _cut(gt: PointCloud, viewpoint: Point3, difficulty: Difficulty, descriptor: DatasetDescriptor,
         n_t: int, shape_id: int, seed: int) -> OcclusionSample:
    n_mask = int(round(difficulty.fraction * gt.count))
    if descriptor.cut_kind is CutKind.VIEWPOINT:
        return cut_viewpoint(gt, viewpoint, n_mask, descriptor.input_size, seed, n_t, shape_id)
    center = gt.point(int(nearest_indices_to(gt.points, viewpoint.as_array(), 1)[0]))
    sample = cut_sphere(gt, center, difficulty.fraction, n_t, shape_id, seed)
    if sample.partial.count > descriptor.input_size:
        sample = downsample_sample(sample, descriptor.input_size, seed)
    return sample


def build_split(descriptor: DatasetDescriptor, split: str, seed: int, n_t: int) -> List[OcclusionSample]:
    """
    Générer les échantillons d'un split.

    Args:
        descriptor: Protocole de génération
        split: "train" ou "test"
        seed: Graine globale de l'expérience
        n_t: Taille de l'interface de référence

    Returns:
        Échantillons dans l'ordre (forme, vue, difficulté)

    Raises:
        ValidationError: Split inconnu ou tailles incompatibles
    """
    if split not in _SPLIT_KEYS:
        raise ValidationError(VALIDATION_MESSAGES["enum_invalid"].format(
            name="split", value=split, allowed=", ".join(SPLITS)))
    key = _SPLIT_KEYS[split]
    levels = descriptor.difficulties
    samples = []
    for shape_id, spec in enumerate(descriptor.shapes):
        # le jeu de données porte les valeurs float32 consommées par le réseau
        gt = normalized_shape(spec).single_precision()
        if split == "test":
            plan = [(view, viewpoint, level_index)
                    for view, viewpoint in enumerate(fixed_test_viewpoints())
                    for level_index in range(len(levels))]
        else:
            plan = [(view, random_viewpoint(derive_seed(seed, shape_id, key, view) % (2 ** 31)),
                     view % len(levels))
                    for view in range(descriptor.train_views)]
        for view, viewpoint, level_index in plan:
            level = levels[level_index]
            sample_seed = derive_seed(seed, shape_id, key, view, level_index) % (2 ** 31)
            sample = _cut(gt, viewpoint, level, descriptor, n_t, shape_id, sample_seed)
            sample_id = f"{split}-s{shape_id:03d}-v{view:02d}-{level.value}"
            samples.append(replace(sample, sample_id=sample_id))
    return samples


def _partial_with_interface(sample: OcclusionSample) -> PointCloud:
    labels = np.full(sample.partial.count, int(PointLabel.PARTIAL), dtype=np.int8)
    labels[sample.interface_indices] = int(PointLabel.INTERFACE)
    return PointCloud(sample.partial.points, labels)


def _record(sample: OcclusionSample, split: str) -> dict:
    record = sample.describe()
    record["interface_indices"] = [int(i) for i in sample.interface_indices]
    record["files"] = {role: f"{split}/{sample.sample_id}_{role}.ply"
                       for role in ("partial", "missing", "gt")}
    return record


def write_dataset(directory: Union[str, Path], descriptor: DatasetDescriptor,
                  splits: Dict[str, List[OcclusionSample]], seed: int) -> Path:
    """
    Écrire les fichiers de points et le manifeste du jeu de données.

    Returns:
        Path: Chemin de dataset.json

    Raises:
        PointFileError: Écriture impossible
    """
    directory = Path(directory)
    manifest = {"descriptor": descriptor.to_dict(), "seed": seed, "splits": {}}
    for split, samples in splits.items():
        records = []
        for sample in samples:
            record = _record(sample, split)
            write_ply(directory / record["files"]["partial"], _partial_with_interface(sample))
            write_ply(directory / record["files"]["missing"],
                      sample.missing.with_labels(PointLabel.MISSING))
            write_ply(directory / record["files"]["gt"], sample.labeled_ground_truth())
            records.append(record)
        manifest["splits"][split] = records
    path = directory / MANIFEST_NAME
    try:
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unwritable"].format(path=path, error=e), path)
    return path


def _load_manifest(directory: Path) -> dict:
    path = directory / MANIFEST_NAME
    if not path.is_file():
        raise PointFileError(FILE_MESSAGES["dataset_missing"].format(path=directory), directory)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise PointFileError(FILE_MESSAGES["unreadable"].format(path=path, error=e), path)
    except json.JSONDecodeError as e:
        raise ValidationError(FILE_MESSAGES["manifest_invalid"].format(path=path, detail=e))


def load_descriptor(directory: Union[str, Path]) -> DatasetDescriptor:
    return DatasetDescriptor.from_dict(_load_manifest(Path(directory))["descriptor"])


def load_dataset_seed(directory: Union[str, Path]) -> int:
    """Graine globale avec laquelle le jeu de données a été généré."""
    return int(_load_manifest(Path(directory)).get("seed", 0))


def load_split(directory: Union[str, Path], split: str = "test") -> List[OcclusionSample]:
    """
    Relire les échantillons d'un split.

    Les indices partiel/manquant dans la vérité terrain ne sont pas
    conservés (partial_indices vaut None).

    Raises:
        PointFileError: Jeu de données absent
        PointFileParseError: Fichier de points invalide
        ValidationError: Split vide ou absent
    """
    directory = Path(directory)
    records = _load_manifest(directory).get("splits", {}).get(split)
    if not records:
        raise ValidationError(VALIDATION_MESSAGES["dataset_empty"].format(split=split))
    samples = []
    for record in records:
        partial = read_ply(directory / record["files"]["partial"])
        partial = PointCloud(partial.points).single_precision()
        gt = read_ply(directory / record["files"]["gt"]).single_precision()
        missing = read_ply(directory / record["files"]["missing"])
        missing_indices = None
        if gt.labels is not None:
            missing_indices = np.flatnonzero(gt.labels == int(PointLabel.MISSING))
        indices = np.asarray(record["interface_indices"], dtype=np.int64)
        occlusion = record.get("occlusion_point")
        samples.append(OcclusionSample(
            ground_truth=PointCloud(gt.points),
            partial=partial,
            missing=PointCloud(missing.points).single_precision(),
            interface_truth=partial.subset(indices),
            interface_indices=indices,
            occlusion_point=None if occlusion is None else Point3.from_array(occlusion),
            occlusion_radius=record.get("occlusion_radius"),
            difficulty=Difficulty(record["difficulty"]),
            cut_kind=CutKind(record["cut_kind"]),
            shape_id=int(record["shape_id"]),
            seed=int(record["seed"]),
            missing_indices=missing_indices,
            sample_id=record["sample_id"],
        ))
    return samples


def build_library(descriptor: DatasetDescriptor, seed: int) -> List[PointCloud]:
    """
    Bibliothèque de référence pour la MMD: library_size formes complètes
    normalisées, tirées indépendamment des formes du jeu de données.
    """
    if descriptor.library_size == 0:
        return []
    sample_count = descriptor.shapes[0].sample_count if descriptor.shapes else 2048
    return reference_library(descriptor.library_size, derive_seed(seed, _LIBRARY_KEY) % (2 ** 31),
                             sample_count)
