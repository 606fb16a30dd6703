"""
Tests de la localisation d'interface (occlusion, bords, sous-échantillonnage)
Fichier: tests/test_interface.py
"""
import math

import numpy as np
import pytest

from src.models.interface import InterfaceConfig, InterfaceMode, InterfaceResult, ProjectionPlane
from src.models.occlusion_sample import ShapeKind, ShapeSpec
from src.models.point_cloud import Point3, PointCloud
from src.services.ablation_service import edge_quality
from src.services.interface_service import (
    fit_interface_size, is_edge_point, largest_angular_gap, localize_by_downsampling,
    localize_by_edges, localize_by_occlusion, localize_sample, projected_angle_cosine,
)
from src.services.geometry_service import directed_hausdorff, median_spacing
from src.services.scan_service import cut_sphere, generate_shape, normalized_shape
from src.utils.validators import ValidationError


EDGES = InterfaceConfig(InterfaceMode.EDGE_DETECTION, n_t=8, radius_r=0.3, delta=0.5)


def square_grid(size=7, spacing=0.1):
    """Grille plane régulière size × size dans le plan z = 0"""
    coords = np.arange(size) * spacing
    return PointCloud(np.array([[x, y, 0.0] for x in coords for y in coords]))


def test_projected_angle_cosine():
    """Test cosinus projeté et abstention des projections nulles"""
    u, v = Point3(1.0, 0.0, 5.0), Point3(0.0, 1.0, -2.0)
    assert projected_angle_cosine(u, v, ProjectionPlane.XY) == pytest.approx(0.0)
    assert projected_angle_cosine(u, u, ProjectionPlane.XZ) == pytest.approx(1.0)
    assert projected_angle_cosine(Point3(0, 0, 1), v, ProjectionPlane.XY) is None
    opposite = projected_angle_cosine(Point3(1, 0, 0), Point3(-2, 0, 0), ProjectionPlane.XY)
    assert opposite == pytest.approx(-1.0)


def test_largest_angular_gap():
    """Test plus grand écart angulaire, bouclage compris"""
    square = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    assert largest_angular_gap(square) == pytest.approx(math.pi / 2)
    half = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    assert largest_angular_gap(half) == pytest.approx(math.pi)
    assert largest_angular_gap(np.array([[1.0, 1.0]])) == pytest.approx(2 * math.pi)


def test_grid_corner_and_center():
    """Test coin de grille marqué, centre non marqué"""
    grid = square_grid()
    center = 3 * 7 + 3
    assert is_edge_point(grid, 0, EDGES)
    assert is_edge_point(grid, 3, EDGES)
    assert not is_edge_point(grid, center, EDGES)


def test_sparse_neighbourhood_is_edge():
    """Test moins de min_neighbors voisins: point de bord"""
    cloud = PointCloud(np.array([[0.0, 0, 0], [0.05, 0, 0], [5.0, 5.0, 5.0]]))
    cfg = InterfaceConfig(InterfaceMode.EDGE_DETECTION, radius_r=0.1, min_neighbors=3)
    assert is_edge_point(cloud, 0, cfg)
    assert is_edge_point(cloud, 2, cfg)


def test_localize_by_edges_grid_boundary():
    """Test bords détectés: exactement le contour d'une grille 7 × 7"""
    grid = square_grid()
    result = localize_by_edges(grid, EDGES)
    expected = [i * 7 + j for i in range(7) for j in range(7) if i in (0, 6) or j in (0, 6)]
    assert list(result.indices) == expected
    assert result.mode_used is InterfaceMode.EDGE_DETECTION
    assert not result.padded


def test_localize_by_edges_wrong_mode():
    with pytest.raises(ValidationError):
        localize_by_edges(square_grid(), InterfaceConfig(InterfaceMode.OCCLUSION_POINT))
    with pytest.raises(ValidationError):
        localize_by_edges(PointCloud.empty(), EDGES)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_disk_rim_detected(seed):
    """Test disque unité: bord retrouvé, intérieur peu marqué"""
    recall, false_positive = edge_quality(0.5, seed, 1000, 0.15)
    assert recall >= 0.8
    assert false_positive <= 0.1


def test_localize_by_occlusion():
    """Test n_t plus proches du point d'occlusion, distances croissantes"""
    cloud = PointCloud(np.array([[3.0, 0, 0], [1.0, 0, 0], [2.0, 0, 0], [-1.0, 0, 0]]))
    result = localize_by_occlusion(cloud, Point3(0, 0, 0), 3)
    assert list(result.indices) == [1, 3, 2]
    assert result.points.equals(cloud.subset([1, 3, 2]))
    with pytest.raises(ValidationError):
        localize_by_occlusion(cloud, Point3(0, 0, 0), 5)


def test_localize_by_downsampling():
    grid = square_grid()
    result = localize_by_downsampling(grid, 5)
    assert result.count == 5
    assert result.indices[0] == 0
    assert result.mode_used is InterfaceMode.DOWNSAMPLED


def test_fit_interface_size_reduces_pads_and_falls_back():
    """Test mise à taille: FPS, répétition cyclique, repli sur FPS global"""
    grid = square_grid()
    detected = localize_by_edges(grid, EDGES)

    reduced = fit_interface_size(grid, detected, 8)
    assert reduced.count == 8
    assert set(reduced.indices) <= set(detected.indices)

    few = InterfaceResult.from_indices(grid, [0, 6, 42], InterfaceMode.EDGE_DETECTION)
    padded = fit_interface_size(grid, few, 7)
    assert padded.padded
    assert list(padded.indices) == [0, 6, 42, 0, 6, 42, 0]

    empty = InterfaceResult.from_indices(grid, [], InterfaceMode.EDGE_DETECTION)
    fallback = fit_interface_size(grid, empty, 4)
    assert fallback.count == 4
    assert list(fallback.indices) == list(localize_by_downsampling(grid, 4).indices)


def test_interface_result_rejects_bad_indices():
    grid = square_grid()
    with pytest.raises(ValidationError):
        InterfaceResult.from_indices(grid, [0, 49], InterfaceMode.OCCLUSION_POINT)
    with pytest.raises(ValidationError):
        InterfaceResult.from_indices(grid, [1, 1], InterfaceMode.OCCLUSION_POINT)


def test_localize_sample_matches_cut_reference():
    """Test mode occlusion sur un échantillon: interface de référence retrouvée"""
    gt = generate_shape(ShapeSpec(ShapeKind.BOX, sample_count=128, seed=3))
    sample = cut_sphere(gt, gt.point(10), 0.25, n_t=8)
    result = localize_sample(sample, InterfaceConfig(InterfaceMode.OCCLUSION_POINT, n_t=8))
    assert np.array_equal(result.indices, sample.interface_indices)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_occlusion_and_edge_interfaces_agree(seed):
    """Test découpe sphérique: interface par occlusion couverte par les bords détectés"""
    gt = normalized_shape(ShapeSpec(ShapeKind.SPHERE, sample_count=1000, seed=seed))
    spacing = median_spacing(gt)
    tolerance = 3.0 * spacing
    sample = cut_sphere(gt, gt.point(37 * seed), 0.25, n_t=16)
    occlusion = localize_by_occlusion(sample.partial, sample.occlusion_point, 16)
    cfg = InterfaceConfig(InterfaceMode.EDGE_DETECTION, n_t=16, radius_r=tolerance, delta=0.5)
    edges = localize_by_edges(sample.partial, cfg)

    assert 0 < edges.count < sample.partial.count // 2
    assert directed_hausdorff(occlusion.points.points, edges.points.points) < tolerance
    assert directed_hausdorff(occlusion.points.points, sample.missing.points) < tolerance


def test_localize_sample_viewpoint(toy_sample, toy_interface):
    """Test mode occlusion sur une découpe par point de vue"""
    result = localize_sample(toy_sample, toy_interface)
    assert np.array_equal(result.indices, toy_sample.interface_indices)


def test_localize_sample_edges_has_fixed_size(toy_sample):
    cfg = InterfaceConfig(InterfaceMode.EDGE_DETECTION, n_t=8, radius_r=0.4)
    assert localize_sample(toy_sample, cfg).count == 8


def test_interface_mode_cli_aliases():
    """Test alias de ligne de commande"""
    assert InterfaceMode.from_cli("occlusion") is InterfaceMode.OCCLUSION_POINT
    assert InterfaceMode.from_cli("edges") is InterfaceMode.EDGE_DETECTION
    assert InterfaceMode.from_cli("downsampled") is InterfaceMode.DOWNSAMPLED
    with pytest.raises(ValidationError):
        InterfaceMode.from_cli("random")


def test_interface_config_validation():
    with pytest.raises(ValidationError):
        InterfaceConfig(delta=1.0)
    with pytest.raises(ValidationError):
        InterfaceConfig(radius_r=0.0)
    restored = InterfaceConfig.from_dict(EDGES.to_dict())
    assert restored == EDGES
