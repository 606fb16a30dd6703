"""
Service de synthèse de scans - Formes procédurales et protocoles de découpe

Ce module génère les nuages de vérité terrain sur des surfaces
paramétriques et les découpe en scan partiel / partie manquante selon les
deux protocoles supportés:

Protocoles de découpe:
    1. Sphère d'occlusion: les ⌈f·N⌉ points les plus proches du point
       d'occlusion sont retirés; l'interface de référence est formée des
       N_T points partiels les plus proches de ce point.
    2. Point de vue: les n_mask points les plus éloignés du point de vue
       sont retirés, le reste est sous-échantillonné par FPS à la taille
       d'entrée; l'interface est formée des N_T points partiels les plus
       éloignés du point de vue (ceux qui bordent la découpe).

Échantillonnage des surfaces:
    Chaque forme est d'abord échantillonnée uniformément avec un facteur de
    suréchantillonnage, puis réduite par FPS au nombre de points demandé.
    La densité reste uniforme et l'espacement devient régulier.
    Les coordonnées restent en float64; l'arrondi aux valeurs float32 du
    réseau n'intervient qu'à la construction des jeux de données.

Formes disponibles:
    sphère, boîte, cylindre, tore, équerre (L), table (plateau + 4 pieds),
    disque plan

Déterminisme:
    Toute la génération dépend uniquement de la graine de la ShapeSpec ou
    de la graine passée à la découpe.

Fichier: src/services/scan_service.py
"""

import itertools
import math
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from src.config.messages import VALIDATION_MESSAGES
from src.models.occlusion_sample import (CutKind, Difficulty, OcclusionSample,
                                         ShapeKind, ShapeSpec)
from src.models.point_cloud import Point3, PointCloud
from src.services.geometry_service import (distances_to, farthest_point_indices,
                                           nearest_indices_to, normalize_unit_cube)
from src.utils.validators import DataValidator, ValidationError


VIEWPOINT_DISTANCE = 3.0

Box = Tuple[np.ndarray, np.ndarray]  # (centre, demi-étendues)


def _sample_sphere(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    directions = rng.normal(size=(count, 3))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0.0] = 1.0
    return directions / norms[:, None] * params["radius"]


def _sample_box_surface(center: np.ndarray, half: np.ndarray, count: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Points uniformes sur la surface d'une boîte alignée sur les axes."""
    faces = []
    areas = []
    for axis in range(3):
        others = [a for a in range(3) if a != axis]
        area = 4.0 * half[others[0]] * half[others[1]]
        for sign in (-1.0, 1.0):
            faces.append((axis, sign))
            areas.append(area)
    areas = np.asarray(areas)
    choice = rng.choice(len(faces), size=count, p=areas / areas.sum())
    points = rng.uniform(-1.0, 1.0, size=(count, 3)) * half[None, :]
    for face_index, (axis, sign) in enumerate(faces):
        rows = choice == face_index
        points[rows, axis] = sign * half[axis]
    return points + center[None, :]


def _sample_box(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    half = np.array([params["width"], params["depth"], params["height"]]) / 2.0
    return _sample_box_surface(np.zeros(3), half, count, rng)


def _sample_cylinder(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    radius, height = params["radius"], params["height"]
    lateral = 2.0 * math.pi * radius * height
    cap = math.pi * radius * radius
    part = rng.choice(3, size=count, p=np.array([lateral, cap, cap]) / (lateral + 2.0 * cap))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
    rho = np.where(part == 0, radius, radius * np.sqrt(rng.uniform(0.0, 1.0, size=count)))
    z = np.where(part == 0, rng.uniform(-height / 2.0, height / 2.0, size=count),
                 np.where(part == 1, -height / 2.0, height / 2.0))
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def _sample_torus(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    major, minor = params["major_radius"], params["minor_radius"]
    accepted: List[np.ndarray] = []
    total = 0
    while total < count:
        u = rng.uniform(0.0, 2.0 * math.pi, size=count)
        v = rng.uniform(0.0, 2.0 * math.pi, size=count)
        # élément d'aire proportionnel à (R + r cos v)
        keep = rng.uniform(0.0, major + minor, size=count) < major + minor * np.cos(v)
        u, v = u[keep], v[keep]
        ring = major + minor * np.cos(v)
        accepted.append(np.column_stack([ring * np.cos(u), ring * np.sin(u), minor * np.sin(v)]))
        total += u.shape[0]
    return np.vstack(accepted)[:count]


def _sample_box_union(boxes: Sequence[Box], count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Surface d'une union de boîtes: les points strictement intérieurs à une
    autre boîte sont rejetés.
    """
    areas = np.array([4.0 * (h[0] * h[1] + h[1] * h[2] + h[0] * h[2]) for _, h in boxes])
    accepted: List[np.ndarray] = []
    total = 0
    while total < count:
        choice = rng.choice(len(boxes), size=count, p=areas / areas.sum())
        for index, (center, half) in enumerate(boxes):
            drawn = int(np.sum(choice == index))
            if drawn == 0:
                continue
            points = _sample_box_surface(center, half, drawn, rng)
            keep = np.ones(drawn, dtype=bool)
            for other, (other_center, other_half) in enumerate(boxes):
                if other == index:
                    continue
                inside = np.all(np.abs(points - other_center[None, :]) < other_half[None, :], axis=1)
                keep &= ~inside
            accepted.append(points[keep])
            total += int(keep.sum())
    return np.vstack(accepted)[:count]


def _sample_l_bracket(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    length, height = params["length"], params["height"]
    width, thickness = params["width"], params["thickness"]
    boxes = [
        (np.array([length / 2.0, 0.0, thickness / 2.0]),
         np.array([length / 2.0, width / 2.0, thickness / 2.0])),
        (np.array([thickness / 2.0, 0.0, height / 2.0]),
         np.array([thickness / 2.0, width / 2.0, height / 2.0])),
    ]
    points = _sample_box_union(boxes, count, rng)
    return points - np.array([length / 2.0, 0.0, height / 2.0])[None, :]


def _sample_table(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    width, depth, height = params["width"], params["depth"], params["height"]
    top, leg = params["top_thickness"], params["leg_size"]
    # les pieds pénètrent d'une demi-épaisseur dans le plateau
    leg_height = height - top / 2.0
    boxes = [(np.array([0.0, 0.0, height - top / 2.0]),
              np.array([width / 2.0, depth / 2.0, top / 2.0]))]
    for sx, sy in itertools.product((-1.0, 1.0), repeat=2):
        center = np.array([sx * (width - leg) / 2.0, sy * (depth - leg) / 2.0, leg_height / 2.0])
        boxes.append((center, np.array([leg / 2.0, leg / 2.0, leg_height / 2.0])))
    points = _sample_box_union(boxes, count, rng)
    return points - np.array([0.0, 0.0, height / 2.0])[None, :]


def _sample_disk(params: Dict[str, float], count: int, rng: np.random.Generator) -> np.ndarray:
    rho = params["radius"] * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=count)
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), np.zeros(count)])


SAMPLERS: Dict[ShapeKind, Callable[[Dict[str, float], int, np.random.Generator], np.ndarray]] = {
    ShapeKind.SPHERE: _sample_sphere,
    ShapeKind.BOX: _sample_box,
    ShapeKind.CYLINDER: _sample_cylinder,
    ShapeKind.TORUS: _sample_torus,
    ShapeKind.L_BRACKET: _sample_l_bracket,
    ShapeKind.TABLE: _sample_table,
    ShapeKind.DISK: _sample_disk,
}


def generate_shape(spec: ShapeSpec) -> PointCloud:
    """
    Échantillonner la surface d'une forme paramétrique.

    Args:
        spec: Description de la forme (suréchantillonnage compris)

    Returns:
        PointCloud: spec.sample_count points de surface, déterministes
            pour une graine donnée

    Raises:
        ValidationError: Si la famille de forme est inconnue
    """
    if not isinstance(spec, ShapeSpec):
        raise ValidationError(VALIDATION_MESSAGES["shape_spec_required"])
    sampler = SAMPLERS.get(spec.kind)
    if sampler is None:
        raise ValidationError(VALIDATION_MESSAGES["enum_invalid"].format(
            name="kind", value=spec.kind, allowed=", ".join(k.value for k in SAMPLERS)))
    oversample = spec.oversample
    rng = np.random.default_rng(spec.seed)
    dense = sampler(spec.parameters, spec.sample_count * oversample, rng)
    if oversample == 1:
        return PointCloud(dense)
    seed_index = int(rng.integers(dense.shape[0]))
    chosen = farthest_point_indices(dense, spec.sample_count, seed_index)
    return PointCloud(dense[chosen])


def _missing_count(fraction: float, count: int) -> int:
    # arrondi à 1e-9 pour que 0.07 × 100 donne bien 7
    return max(1, int(math.ceil(round(fraction * count, 9))))


def cut_sphere(gt: PointCloud, occlusion_point: Point3, missing_fraction: float,
               n_t: int = 64, shape_id: int = 0, seed: int = 0) -> OcclusionSample:
    """
    Découper la vérité terrain par une sphère centrée sur le point d'occlusion.

    Args:
        gt: Nuage complet (≥ 2 points)
        occlusion_point: Centre de la sphère de découpe
        missing_fraction: Fraction retirée, dans (0, 1)
        n_t: Taille de l'interface de référence
        shape_id: Identifiant de forme enregistré dans l'échantillon
        seed: Graine enregistrée dans l'échantillon

    Returns:
        OcclusionSample: partie manquante = les ⌈f·N⌉ points les plus
            proches de o, partiel = le reste (ordre d'origine conservé)

    Raises:
        ValidationError: Nuage dégénéré, fraction hors (0, 1), partiel vide
            ou n_t supérieur à la taille du partiel
    """
    if gt.count < 2:
        raise ValidationError(VALIDATION_MESSAGES["cloud_too_small"].format(
            count=gt.count, minimum=2))
    fraction = DataValidator.validate_open_unit_interval(missing_fraction, "missing_fraction")
    n_missing = _missing_count(fraction, gt.count)
    if n_missing >= gt.count:
        raise ValidationError(VALIDATION_MESSAGES["partial_empty"].format(
            fraction=fraction, count=gt.count))
    origin = occlusion_point.as_array()
    order = nearest_indices_to(gt.points, origin, gt.count)
    missing_indices = np.sort(order[:n_missing])
    partial_indices = np.sort(order[n_missing:])
    partial = gt.subset(partial_indices)
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, partial.count)
    interface_indices = nearest_indices_to(partial.points, origin, n_t)
    radius = float(distances_to(gt.points[order[n_missing - 1:n_missing]], origin)[0])
    return OcclusionSample(
        ground_truth=gt,
        partial=partial,
        missing=gt.subset(missing_indices),
        interface_truth=partial.subset(interface_indices),
        interface_indices=interface_indices,
        occlusion_point=occlusion_point,
        occlusion_radius=radius,
        difficulty=Difficulty.from_fraction(fraction),
        cut_kind=CutKind.SPHERE,
        shape_id=shape_id,
        seed=seed,
        partial_indices=partial_indices,
        missing_indices=missing_indices,
    )


def cut_viewpoint(gt: PointCloud, viewpoint: Point3, n_mask: int, input_size: int,
                  seed: int, n_t: int = 64, shape_id: int = 0) -> OcclusionSample:
    """
    Découper la vérité terrain depuis un point de vue.

    Les n_mask points les plus éloignés du point de vue sont retirés; les
    points restants sont réduits par FPS à input_size (point de départ tiré
    avec la graine).

    Args:
        gt: Nuage complet
        viewpoint: Point de vue (enregistré comme point d'occlusion)
        n_mask: Nombre de points retirés, 0 < n_mask < gt.count
        input_size: Taille du scan partiel, ≤ gt.count − n_mask
        seed: Graine du sous-échantillonnage
        n_t: Taille de l'interface de référence (≤ input_size)
        shape_id: Identifiant de forme

    Returns:
        OcclusionSample avec difficulté issue de n_mask / gt.count

    Raises:
        ValidationError: Si une contrainte de taille est violée
    """
    if gt.count < 2:
        raise ValidationError(VALIDATION_MESSAGES["cloud_too_small"].format(
            count=gt.count, minimum=2))
    n_mask = DataValidator.validate_range_int(n_mask, "n_mask", 1, gt.count - 1)
    input_size = DataValidator.validate_range_int(input_size, "input_size", 1, gt.count - n_mask)
    n_t = DataValidator.validate_range_int(n_t, "n_t", 1, input_size)
    origin = viewpoint.as_array()
    order = nearest_indices_to(gt.points, origin, gt.count, farthest=True)
    missing_indices = np.sort(order[:n_mask])
    partial_indices = np.sort(order[n_mask:])
    pool = gt.points[partial_indices]
    rng = np.random.default_rng(DataValidator.validate_positive_int(seed, "seed", minimum=0))
    seed_index = int(rng.integers(pool.shape[0]))
    chosen = np.sort(farthest_point_indices(pool, input_size, seed_index))
    partial = PointCloud(pool[chosen])
    interface_indices = nearest_indices_to(partial.points, origin, n_t, farthest=True)
    radius = float(distances_to(gt.points[order[n_mask - 1:n_mask]], origin)[0])
    return OcclusionSample(
        ground_truth=gt,
        partial=partial,
        missing=gt.subset(missing_indices),
        interface_truth=partial.subset(interface_indices),
        interface_indices=interface_indices,
        occlusion_point=viewpoint,
        occlusion_radius=radius,
        difficulty=Difficulty.from_fraction(n_mask / float(gt.count)),
        cut_kind=CutKind.VIEWPOINT,
        shape_id=shape_id,
        seed=seed,
        partial_indices=partial_indices,
        missing_indices=missing_indices,
    )


def downsample_sample(sample: OcclusionSample, input_size: int, seed: int) -> OcclusionSample:
    """
    Réduire le scan partiel d'un échantillon à input_size points par FPS.

    L'interface de référence est recalculée sur le partiel réduit avec la
    règle du protocole de découpe et sa taille d'origine.

    Raises:
        ValidationError: Si input_size dépasse la taille du partiel ou est
            inférieur à la taille d'interface
    """
    input_size = DataValidator.validate_range_int(input_size, "input_size", 1, sample.partial.count)
    n_t = DataValidator.validate_range_int(sample.interface_truth.count, "n_t", 1, input_size)
    rng = np.random.default_rng(DataValidator.validate_positive_int(seed, "seed", minimum=0))
    seed_index = int(rng.integers(sample.partial.count))
    chosen = np.sort(farthest_point_indices(sample.partial.points, input_size, seed_index))
    partial = sample.partial.subset(chosen)
    interface_indices = nearest_indices_to(
        partial.points, sample.occlusion_point.as_array(), n_t,
        farthest=sample.cut_kind is CutKind.VIEWPOINT)
    return OcclusionSample(
        ground_truth=sample.ground_truth,
        partial=partial,
        missing=sample.missing,
        interface_truth=partial.subset(interface_indices),
        interface_indices=interface_indices,
        occlusion_point=sample.occlusion_point,
        occlusion_radius=sample.occlusion_radius,
        difficulty=sample.difficulty,
        cut_kind=sample.cut_kind,
        shape_id=sample.shape_id,
        seed=sample.seed,
        partial_indices=sample.partial_indices,
        missing_indices=sample.missing_indices,
        sample_id=sample.sample_id,
    )


def fixed_test_viewpoints() -> List[Point3]:
    """
    Les 8 points de vue de test: coins du cube (±1, ±1, ±1) ramenés à une
    distance de 3 de l'origine, dans un ordre fixe.
    """
    scale = VIEWPOINT_DISTANCE / math.sqrt(3.0)
    return [Point3(sx * scale, sy * scale, sz * scale)
            for sx, sy, sz in itertools.product((1.0, -1.0), repeat=3)]


def random_viewpoint(seed: int) -> Point3:
    """Point de vue uniforme sur la sphère de rayon 3, tiré avec la graine."""
    rng = np.random.default_rng(DataValidator.validate_positive_int(seed, "seed", minimum=0))
    direction = rng.normal(size=3)
    while np.linalg.norm(direction) == 0.0:
        direction = rng.normal(size=3)
    return Point3.from_array(direction / np.linalg.norm(direction) * VIEWPOINT_DISTANCE)


def normalized_shape(spec: ShapeSpec) -> PointCloud:
    """Forme générée puis ramenée dans le cube unité centré."""
    cloud, _, _ = normalize_unit_cube(generate_shape(spec))
    return cloud


def reference_library(count: int, seed: int, sample_count: int = 2048) -> List[PointCloud]:
    """
    Bibliothèque de référence pour la MMD: formes procédurales normalisées.

    Les familles sont parcourues en boucle (hors disque plan) et les
    dimensions perturbées de ±20% avec la graine.
    """
    count = DataValidator.validate_positive_int(count, "library_size")
    rng = np.random.default_rng(DataValidator.validate_positive_int(seed, "seed", minimum=0))
    kinds = [kind for kind in ShapeKind if kind is not ShapeKind.DISK]
    library = []
    for index in range(count):
        kind = kinds[index % len(kinds)]
        spec = ShapeSpec(kind=kind, sample_count=sample_count,
                         seed=int(rng.integers(2 ** 31)))
        jittered = {name: value * float(rng.uniform(0.8, 1.2))
                    for name, value in spec.parameters.items()}
        library.append(normalized_shape(ShapeSpec(kind, jittered, sample_count, spec.seed)))
    return library
